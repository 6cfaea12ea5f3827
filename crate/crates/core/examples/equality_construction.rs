//! A non-ball set for which the Riesz functional does not grow under rearrangement.

use tfloc::rearrange::EqualityConstruction;

fn main() -> tfloc::Result<()> {
    for (r, big_r, delta) in [(1.0, 3.0, 0.2), (0.5, 2.0, 0.1), (0.0, 1.5, 0.05)] {
        let c = EqualityConstruction::new(r, big_r, delta)?;
        let line = c.check_line()?;
        let grid = c.check_grid(0.02)?;
        println!(
            "r = {r}, R = {big_r}, δ = {delta}: {} pieces  line {:.8} vs {:.8} (gap {:.1e})  grid gap {:.1e}",
            line.components, line.lhs, line.rhs, line.relative_gap, grid.relative_gap
        );
    }
    match EqualityConstruction::new(1.0, 1.5, 0.2) {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
