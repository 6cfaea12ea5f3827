//! Symmetric decreasing rearrangement of a sampled field and the growth of the HS norm.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tfloc::hs_engine::{hs_norm_sq_grid, hs_norm_sq_layers, GridMethod, Stencil};
use tfloc::phase_space::{GridField, GridSpec, IntervalSet};
use tfloc::rearrange::{rearrange_function, riesz_functional_line, RadialKernel};

fn main() -> tfloc::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let spec = GridSpec::centered(1.0, 0.1)?;
    let bumps: Vec<([f64; 2], f64)> = (0..4)
        .map(|_| ([rng.random_range(-0.7..0.7), rng.random_range(-0.7..0.7)], rng.random_range(0.2..1.0)))
        .collect();
    let values = (0..spec.len())
        .map(|k| {
            let p = spec.center_of(k);
            bumps.iter().map(|&(c, a)| a * (-8.0 * ((p[0] - c[0]).powi(2) + (p[1] - c[1]).powi(2))).exp()).sum()
        })
        .collect();
    let f = GridField::from_real(spec, values)?;

    let star = rearrange_function(&f)?;
    let p = 2.0;
    let lp: f64 = f.values().iter().map(|v| v.norm().powf(p)).sum::<f64>() * spec.cell_area();
    println!("L^2 norm^2: field {lp:.6}, rearranged {:.6}", star.lp_norm_pow(p));

    let hs = hs_norm_sq_grid(&f, GridMethod::Convolution, Stencil::CellAverage)?.hs_sq;
    let hs_star = hs_norm_sq_layers(2, &star.layers())?.hs_sq;
    println!("HS^2: field {hs:.6}, rearranged {hs_star:.6}, deficit {:.3e}", hs_star - hs);

    let set = IntervalSet::new(vec![(0.0, 0.4), (1.0, 1.3), (2.5, 3.6)])?;
    let kernel = RadialKernel::gaussian();
    let t = riesz_functional_line(&set, &kernel, &set)?;
    let t_star = riesz_functional_line(&set.rearranged()?, &kernel, &set.rearranged()?)?;
    println!("Riesz on the line: {t:.6} <= {t_star:.6}");
    Ok(())
}
