//! Indicator-kernel deficit against the scale (|B|/|Ω|)^{1+1/d} |Ω|² α² on the line.

use tfloc::deficit_lab::{conjecture2_probe_line, sweep_probe_line};
use tfloc::phase_space::IntervalSet;

fn main() -> tfloc::Result<()> {
    let set = IntervalSet::new(vec![(0.0, 1.0), (3.0, 4.5)])?;
    println!("{:>6} {:>12} {:>12} {:>8}", "b", "lhs", "rhs scale", "ratio");
    for b in [0.05, 0.1, 0.2, 0.4, 1.0, 2.0] {
        let p = conjecture2_probe_line(&set, b, 0.1)?;
        println!("{b:>6} {:>12.4e} {:>12.4e} {:>8.4}", p.lhs_deficit, p.rhs_scale, p.ratio.unwrap_or(f64::NAN));
    }
    let sweep = sweep_probe_line(&set, &[0.05, 0.1, 0.2, 0.4], 0.1)?;
    println!("small-b slope of the deficit in b: {:.3}", sweep.fit.slope);
    if let Err(e) = conjecture2_probe_line(&set, 5.0, 0.1) {
        println!("b = 5: {e}");
    }
    Ok(())
}
