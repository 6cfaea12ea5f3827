//! The squared Hilbert-Schmidt norm of a disc's localization operator by every route.

use tfloc::hs_engine::{hs_norm_sq_grid, hs_norm_sq_radial, hs_norm_sq_shape, GridMethod, Stencil};
use tfloc::phase_space::{GridSpec, RadialRegion, Shape};

fn main() -> tfloc::Result<()> {
    let radius = 1.0;
    let exact = hs_norm_sq_radial(&RadialRegion::ball(2, radius)?)?;
    println!("radial      {:.12}  (est. error {:.1e})", exact.hs_sq, exact.estimated_error);

    let disc = Shape::ball([0.3, -0.2], radius)?;
    let composite = hs_norm_sq_shape(&disc)?;
    println!("composite   {:.12}", composite.hs_sq);

    for h in [0.08, 0.04, 0.02] {
        let spec = GridSpec::centered(1.6, h)?;
        let coverage = disc.coverage(&spec)?;
        let raster = disc.rasterize(&spec)?.to_field();
        let cell = hs_norm_sq_grid(&coverage, GridMethod::Convolution, Stencil::CellAverage)?;
        let point = hs_norm_sq_grid(&raster, GridMethod::Convolution, Stencil::Point)?;
        println!(
            "h = {h:<5} coverage/cell-average {:.6} (err {:.1e})   raster/point {:.6} (err {:.1e})",
            cell.hs_sq,
            (cell.hs_sq - exact.hs_sq).abs(),
            point.hs_sq,
            (point.hs_sq - exact.hs_sq).abs()
        );
    }

    let small = GridSpec::centered(1.2, 0.1)?;
    let f = disc.translated([-0.3, 0.2]).coverage(&small)?;
    let direct = hs_norm_sq_grid(&f, GridMethod::Direct, Stencil::CellAverage)?;
    let fft = hs_norm_sq_grid(&f, GridMethod::Convolution, Stencil::CellAverage)?;
    println!("direct vs convolution on {} cells: {:.3e}", small.len(), (direct.hs_sq - fft.hs_sq).abs());
    Ok(())
}
