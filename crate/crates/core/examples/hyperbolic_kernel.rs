//! Cauchy wavelet kernel on the half-plane and the HS norm of hyperbolic discs.

use tfloc::hyperbolic::{ball_measure, hyp_hs_norm_sq, hyp_hs_norm_sq_ball, hyp_rearrange, CauchyWavelet, HypRegion};
use tfloc::phase_space::GridSpec;

fn main() -> tfloc::Result<()> {
    for beta in [0.5, 1.0, 2.0] {
        let w = CauchyWavelet::new(beta)?;
        let rho: Vec<String> = [0.0, 0.5, 1.0, 2.0, 4.0].iter().map(|&t| format!("{:.4e}", w.kernel(t).unwrap())).collect();
        println!("β = {beta}: ‖ψ‖ = {:.6}  ρ(0, 0.5, 1, 2, 4) = {}", w.normalization()?, rho.join(" "));
    }

    let w = CauchyWavelet::new(1.0)?;
    for r in [0.5, 1.0, 2.0] {
        println!("ball R = {r}: ν = {:.6}  HS² = {:.6}", ball_measure(r), hyp_hs_norm_sq_ball(ball_measure(r), &w)?);
    }

    let spec = GridSpec::new([-1.5, 0.3], 0.05, 60, 60)?;
    let bar = HypRegion::from_fn(spec, |z| z.x.abs() < 1.2 && (0.6..1.4).contains(&z.s))?;
    let star = hyp_rearrange(&bar)?;
    let hs = hyp_hs_norm_sq(&bar, &w)?;
    let hs_star = hyp_hs_norm_sq_ball(star.nu_measure, &w)?;
    println!("box: ν = {:.4}  HS² = {hs:.6}  ball of equal ν: R = {:.4}  HS² = {hs_star:.6}", bar.nu_measure(), star.radius);
    let moved = bar.transported(2.0, 1.0)?;
    println!("after z ↦ 2z + 1: HS² = {:.6}", hyp_hs_norm_sq(&moved, &w)?);
    Ok(())
}
