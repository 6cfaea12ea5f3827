//! Eigenvalues of the localization operator of a disc, with trace and Schatten norms.

use std::f64::consts::PI;
use std::time::Instant;

use tfloc::phase_space::{GridSpec, Shape};
use tfloc::spectral::{spectrum, DEFAULT_CELL_CAP};

fn main() -> tfloc::Result<()> {
    let h = 0.05;
    let spec = GridSpec::centered(1.2, h)?;
    let disc = Shape::ball([0.0, 0.0], 1.0)?.rasterize(&spec)?;
    let start = Instant::now();
    let s = spectrum(&disc, DEFAULT_CELL_CAP)?;
    println!("cells: {}  eigensolve: {:.2?}", disc.count(), start.elapsed());
    println!("trace {:.6} (measure {:.6}, pi {:.6})", s.trace(), s.omega_measure, PI);
    for (k, l) in s.eigenvalues.iter().take(6).enumerate() {
        println!("lambda_{k} = {l:.6}");
    }
    for (p, v) in &s.schatten {
        println!("S_{p} = {v:.6}");
    }
    Ok(())
}
