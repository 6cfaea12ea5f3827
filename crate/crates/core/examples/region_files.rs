//! Writing a rasterized region to disk and computing its deficit from the file.

use tfloc::deficit_lab::{deficit_grid, BetaParams};
use tfloc::phase_space::io::{load_region, save_region};
use tfloc::phase_space::{GridSpec, Shape};

fn main() -> tfloc::Result<()> {
    let dir = std::env::temp_dir().join("tfloc-region-example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("two_discs.rgn");

    let spec = GridSpec::covering([-1.5, -0.8], [1.5, 0.8], 0.025)?;
    let region = Shape::two_discs(0.5, 1.4)?.rasterize(&spec)?;
    save_region(&region, &path)?;
    let back = load_region(&path)?;
    println!("{} cells written to {} and read back: identical = {}", back.count(), path.display(), back == region);

    let report = deficit_grid(&back, &BetaParams::new(1))?;
    println!(
        "|Ω| = {:.4}  HS² = {:.6}  HS²(Ω*) = {:.6}  deficit = {:.4e}  α = {:.4}  deficit/(β(|Ω|)α²) = {:.4}",
        report.omega_measure,
        report.hs_sq,
        report.hs_sq_star,
        report.deficit,
        report.alpha,
        report.empirical_constant.unwrap_or(f64::NAN)
    );
    Ok(())
}
