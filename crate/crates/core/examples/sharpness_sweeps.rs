//! Log-log slopes of the HS deficit against asymmetry or measure for three families.

use tfloc::deficit_lab::{default_dilate_base, dumbbell_chain, sweep_dilate, sweep_dumbbell, sweep_eps, GridSweepOptions, SweepReport};

fn show(report: &SweepReport) {
    println!("{} (deficit against {}): slope {:.3}", report.family, report.abscissa, report.fit.slope);
    for row in &report.rows {
        println!(
            "  {:>8.4}  |Ω| {:>9.4}  deficit {:>10.3e}  α {:.4}  β {:.3e}",
            row.param, row.measure, row.deficit, row.alpha, row.beta
        );
    }
}

fn main() -> tfloc::Result<()> {
    let eps: Vec<f64> = (0..8).map(|k| 0.02 * 10f64.powf(k as f64 / 7.0)).collect();
    show(&sweep_eps(&eps, 1)?);

    let factors: Vec<f64> = (0..5).map(|k| 0.05 * 5f64.powf(k as f64 / 4.0)).collect();
    show(&sweep_dilate(&default_dilate_base(), &factors, &GridSweepOptions::dilate())?);

    show(&sweep_dumbbell(&[2.0, 3.0, 4.0], &GridSweepOptions::dumbbell())?);
    for r in [2.0, 4.0, 8.0] {
        let c = dumbbell_chain(r)?;
        println!(
            "dumbbell r = {r}: deficit {:.6e}  inner {:.6e}  far {:.3e}  bound holds: {}",
            c.deficit,
            c.inner_interaction,
            c.far_interaction,
            c.bound_holds()
        );
    }
    Ok(())
}
