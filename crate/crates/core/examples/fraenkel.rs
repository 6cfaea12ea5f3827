//! Fraenkel asymmetry of a few rasterized shapes.

use tfloc::asymmetry::{fraenkel, fraenkel_line};
use tfloc::phase_space::{GridRegion, GridSpec, IntervalSet, Shape};

fn main() -> tfloc::Result<()> {
    let spec = GridSpec::covering([-3.0, -1.5], [3.0, 1.5], 0.02)?;
    let shapes = [
        ("disc", Shape::ball([0.4, 0.1], 1.0)?.rasterize(&spec)?),
        ("two discs", Shape::two_discs(0.5, 4.0)?.rasterize(&spec)?),
        ("unequal discs", Shape::union([Shape::ball([-1.0, 0.0], 0.9)?, Shape::ball([1.2, 0.0], 0.4)?])?.rasterize(&spec)?),
        ("ellipse", GridRegion::from_fn(spec, |p| (p[0] / 1.6).powi(2) + (p[1] / 0.6).powi(2) < 1.0)),
        ("square", GridRegion::from_fn(spec, |p| p[0].abs() < 0.8 && p[1].abs() < 0.8)),
    ];
    for (name, region) in &shapes {
        let a = fraenkel(region)?;
        println!(
            "{name:<14} |Ω| = {:.4}  α = {:.4}  center ({:.3}, {:.3})  {} evaluations",
            region.measure(),
            a.alpha,
            a.best_center[0],
            a.best_center[1],
            a.evaluations
        );
    }

    let line = IntervalSet::new(vec![(0.0, 1.0), (3.0, 4.5)])?;
    let a = fraenkel_line(&line)?;
    println!("intervals [0,1] ∪ [3,4.5]: α = {:.4}", a.alpha);
    Ok(())
}
