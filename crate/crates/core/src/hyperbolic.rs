//! Upper half-plane geometry with the measure `dx ds / s²`, the Cauchy-wavelet kernel, and
//! hyperbolic rearrangement of cell sets.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::numerics::{adaptive_gl, gauss_legendre, integrate_gl, AdaptiveOptions};
use crate::phase_space::GridSpec;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HypPoint {
    pub x: f64,
    pub s: f64,
}

impl HypPoint {
    pub fn new(x: f64, s: f64) -> Result<Self> {
        if !(s > 0.0 && s.is_finite() && x.is_finite()) {
            return Err(Error::InvalidParameter(format!("({x}, {s}) is not in the upper half-plane")));
        }
        Ok(Self { x, s })
    }

    /// The point `i`.
    pub fn i() -> Self {
        Self { x: 0.0, s: 1.0 }
    }

    /// `z ↦ a z + b`.
    pub fn affine(self, a: f64, b: f64) -> Self {
        Self { x: a * self.x + b, s: a * self.s }
    }
}

/// `cosh d(z, w) = 1 + |z - w|² / (2 s s')`.
pub fn cosh_distance(z: HypPoint, w: HypPoint) -> f64 {
    let dx = z.x - w.x;
    let ds = z.s - w.s;
    1.0 + (dx * dx + ds * ds) / (2.0 * z.s * w.s)
}

pub fn d_hyp(z: HypPoint, w: HypPoint) -> f64 {
    let dx = z.x - w.x;
    let ds = z.s - w.s;
    2.0 * ((dx * dx + ds * ds).sqrt() / (2.0 * (z.s * w.s).sqrt())).asinh()
}

/// Ball of radius `R` about `i`, which is the Euclidean disc with center `(0, cosh R)` and
/// radius `sinh R`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HypBall {
    pub radius: f64,
    pub euclid_center: [f64; 2],
    pub euclid_radius: f64,
    pub nu_measure: f64,
}

impl HypBall {
    pub fn contains(&self, z: HypPoint) -> bool {
        d_hyp(z, HypPoint::i()) < self.radius
    }
}

/// `2π (cosh R - 1)`.
pub fn ball_measure(radius: f64) -> f64 {
    2.0 * PI * (radius.cosh() - 1.0)
}

pub fn ball_radius_for_measure(nu: f64) -> f64 {
    (1.0 + nu / (2.0 * PI)).acosh()
}

/// The ball with its measure integrated numerically over the Euclidean disc.
pub fn hyp_ball(radius: f64) -> Result<HypBall> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidParameter(format!("ball radius {radius} must be positive")));
    }
    let c = radius.cosh();
    let r = radius.sinh();
    // s = c + r sin θ; the chord at height s has width 2 r cos θ
    let integrand = |t: f64| {
        let cos = t.cos();
        let s = c + r * t.sin();
        2.0 * r * r * cos * cos / (s * s)
    };
    let nu = adaptive_gl(&integrand, -PI / 2.0, PI / 2.0, &[], &AdaptiveOptions::default())?.value;
    Ok(HypBall { radius, euclid_center: [0.0, c], euclid_radius: r, nu_measure: nu })
}

/// The Cauchy wavelet `ψ̂(ω) = χ_{ω>0} ω^β e^{-ω} / c_β` with `c_β² = 2π 2^{-2β} Γ(2β)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CauchyWavelet {
    pub beta: f64,
    pub c_beta: f64,
    /// `C` in `ρ(t) = C (sech²(t/2) / 4)^{2β+1}`, fixed by the numerical self-overlap at `i`.
    pub kernel_constant: f64,
}

impl CauchyWavelet {
    pub fn new(beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParameter(format!("β = {beta} must be positive")));
        }
        let c_beta = (2.0 * PI * 2f64.powf(-2.0 * beta) * gamma(2.0 * beta)).sqrt();
        let mut w = Self { beta, c_beta, kernel_constant: f64::NAN };
        let peak = w.selfoverlap_numeric(HypPoint::i())?;
        w.kernel_constant = peak * 4f64.powf(2.0 * beta + 1.0);
        Ok(w)
    }

    fn exponent(&self) -> f64 {
        2.0 * self.beta + 1.0
    }

    pub fn hat(&self, omega: f64) -> f64 {
        if omega <= 0.0 {
            return 0.0;
        }
        omega.powf(self.beta) * (-omega).exp() / self.c_beta
    }

    /// `∫₀^∞ |ψ̂(ω)|² dω / ω`.
    pub fn normalization(&self) -> Result<f64> {
        let upper = 60.0 + 10.0 * self.beta;
        let f = |w: f64| if w <= 0.0 { 0.0 } else { self.hat(w).powi(2) / w };
        let breaks = [self.beta / 4.0, self.beta, 4.0 * self.beta];
        Ok(adaptive_gl(&f, 0.0, upper, &breaks, &AdaptiveOptions::default())?.value)
    }

    /// `|W ψ ψ(z)|² = Γ(2β+1)² / c_β⁴ · s^{2β+1} [(1+s)² + x²]^{-2β-1}`.
    pub fn selfoverlap(&self, z: HypPoint) -> f64 {
        let g = gamma(self.exponent());
        g * g / self.c_beta.powi(4) * (z.s / ((1.0 + z.s).powi(2) + z.x * z.x)).powf(self.exponent())
    }

    /// `|√s ∫ ψ̂(ω) e^{ixω} ψ̂(sω) dω|²` by quadrature.
    pub fn selfoverlap_numeric(&self, z: HypPoint) -> Result<f64> {
        let decay = 1.0 + z.s;
        let upper = (60.0 + 20.0 * self.beta) / decay;
        let peak = 2.0 * self.beta / decay;
        let breaks = [peak / 4.0, peak, 4.0 * peak];
        let opts = AdaptiveOptions { rel_tol: 1e-12, ..AdaptiveOptions::default() };
        let amp = |w: f64| if w <= 0.0 { 0.0 } else { self.hat(w) * self.hat(z.s * w) };
        let re = adaptive_gl(&|w: f64| amp(w) * (z.x * w).cos(), 0.0, upper, &breaks, &opts)?;
        let im = adaptive_gl(&|w: f64| amp(w) * (z.x * w).sin(), 0.0, upper, &breaks, &opts)?;
        Ok(z.s * Complex64::new(re.value, im.value).norm_sqr())
    }

    /// `ρ(t) = C (sech²(t/2) / 4)^{2β+1}`, so that `|W ψ ψ(z)|² = ρ(d(z, i))`.
    pub fn kernel(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(Error::InvalidParameter(format!("kernel argument {t} must be nonnegative")));
        }
        let sech = 1.0 / (t / 2.0).cosh();
        Ok(self.kernel_constant * (sech * sech / 4.0).powf(self.exponent()))
    }

    /// `ρ` as a function of `cosh d`.
    pub fn kernel_cosh(&self, cosh_d: f64) -> f64 {
        self.kernel_constant * (0.5 / (1.0 + cosh_d)).powf(self.exponent())
    }
}

/// Free function form of [`CauchyWavelet::kernel`].
pub fn cauchy_kernel(t: f64, wavelet: &CauchyWavelet) -> Result<f64> {
    wavelet.kernel(t)
}

/// Cell set on a Cartesian grid over a box in the upper half-plane. Grid `x` is the real part
/// and grid `y` the height `s`.
#[derive(Clone, Debug, PartialEq)]
pub struct HypRegion {
    spec: GridSpec,
    mask: Vec<bool>,
}

fn check_half_plane(spec: &GridSpec) -> Result<()> {
    if !(spec.box_min()[1] > 0.0) {
        return Err(Error::InvalidGrid(format!("box bottom {} must be above the real axis", spec.box_min()[1])));
    }
    Ok(())
}

/// Exact `ν`-measure `h² / (s_lo s_hi)` of the cell in row `j`.
pub fn cell_weight(spec: &GridSpec, j: usize) -> f64 {
    let lo = spec.origin[1] + j as f64 * spec.h;
    spec.h * spec.h / (lo * (lo + spec.h))
}

impl HypRegion {
    pub fn new(spec: GridSpec, mask: Vec<bool>) -> Result<Self> {
        check_half_plane(&spec)?;
        if mask.len() != spec.len() {
            return Err(Error::DimensionMismatch { expected: spec.len(), found: mask.len() });
        }
        Ok(Self { spec, mask })
    }

    pub fn from_fn(spec: GridSpec, inside: impl Fn(HypPoint) -> bool) -> Result<Self> {
        check_half_plane(&spec)?;
        let mask = (0..spec.len())
            .map(|k| {
                let [x, s] = spec.center_of(k);
                inside(HypPoint { x, s })
            })
            .collect();
        Ok(Self { spec, mask })
    }

    /// Cells whose centers lie within distance `radius` of `center`.
    pub fn ball(spec: GridSpec, center: HypPoint, radius: f64) -> Result<Self> {
        Self::from_fn(spec, |z| d_hyp(z, center) < radius)
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn cells(&self) -> Vec<usize> {
        (0..self.mask.len()).filter(|&k| self.mask[k]).collect()
    }

    pub fn count(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    pub fn nu_measure(&self) -> f64 {
        self.cells().iter().map(|&k| cell_weight(&self.spec, self.spec.cell(k).1)).sum()
    }

    /// The image under `z ↦ a z + b` on the correspondingly mapped grid.
    pub fn transported(&self, a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite() && b.is_finite()) {
            return Err(Error::InvalidParameter(format!("affine map needs a > 0, got a = {a}, b = {b}")));
        }
        let o = self.spec.origin;
        let spec = GridSpec::new([a * o[0] + b, a * o[1]], a * self.spec.h, self.spec.nx, self.spec.ny)?;
        Self::new(spec, self.mask.clone())
    }
}

/// Node positions and `ν`-weights of a `q × q` rule inside each cell of a region, rescaled so
/// that every cell keeps its exact measure.
fn nodes(region: &HypRegion, q: usize) -> Vec<(HypPoint, f64)> {
    let rule = gauss_legendre(q);
    let (t, w) = (&rule.0, &rule.1);
    let spec = region.spec;
    let h = spec.h;
    let mut out = Vec::with_capacity(region.count() * q * q);
    for k in region.cells() {
        let (i, j) = spec.cell(k);
        let x0 = spec.origin[0] + i as f64 * h;
        let s0 = spec.origin[1] + j as f64 * h;
        let raw: Vec<(HypPoint, f64)> = (0..q)
            .flat_map(|a| {
                (0..q).map(move |b| {
                    let x = x0 + 0.5 * h * (t[a] + 1.0);
                    let s = s0 + 0.5 * h * (t[b] + 1.0);
                    (HypPoint { x, s }, 0.25 * h * h * w[a] * w[b] / (s * s))
                })
            })
            .collect();
        let total: f64 = raw.iter().map(|p| p.1).sum();
        let scale = cell_weight(&spec, j) / total;
        out.extend(raw.into_iter().map(|(p, wt)| (p, wt * scale)));
    }
    out
}

/// Subcell rule order used by the pair sums.
pub const DEFAULT_SUBCELL_ORDER: usize = 3;

/// `∬ χ_A(z) g(cosh d(z,w)) χ_B(w) dν(z) dν(w)` over the cells of two regions.
pub fn hyp_pair_functional(
    a: &HypRegion,
    b: &HypRegion,
    g: &(dyn Fn(f64) -> f64 + Sync),
    q: usize,
) -> Result<f64> {
    if q == 0 {
        return Err(Error::InvalidParameter("subcell order must be positive".into()));
    }
    let na = nodes(a, q);
    let nb = nodes(b, q);
    let rows: Vec<f64> = na
        .par_iter()
        .map(|&(z, wz)| wz * nb.iter().map(|&(w, ww)| ww * g(cosh_distance(z, w))).sum::<f64>())
        .collect();
    let total: f64 = rows.iter().sum();
    if !total.is_finite() {
        return Err(Error::NonFinite("hyperbolic pair sum".into()));
    }
    Ok(total)
}

/// `‖L_Ω‖²_HS = ∬_{Ω×Ω} ρ(d(z,w)) dν dν` for the wavelet kernel.
pub fn hyp_hs_norm_sq(region: &HypRegion, wavelet: &CauchyWavelet) -> Result<f64> {
    hyp_pair_functional(region, region, &|c| wavelet.kernel_cosh(c), DEFAULT_SUBCELL_ORDER)
}

/// The ball about `i` with the same measure.
pub fn hyp_rearrange(region: &HypRegion) -> Result<HypBall> {
    let nu = region.nu_measure();
    if !(nu > 0.0) {
        return Err(Error::EmptyRegion);
    }
    let radius = ball_radius_for_measure(nu);
    Ok(HypBall { radius, euclid_center: [0.0, radius.cosh()], euclid_radius: radius.sinh(), nu_measure: nu })
}

/// `∬ χ_{B_ra}(z) g(cosh d(z,w)) χ_{B_rb}(w) dν dν` for two balls about `i`, in geodesic polar
/// coordinates with `cosh d = cosh r cosh u - sinh r sinh u cos θ`.
pub fn ball_pair_functional(ra: f64, rb: f64, g: &(dyn Fn(f64) -> f64 + Sync)) -> Result<f64> {
    if !(ra >= 0.0 && rb >= 0.0 && ra.is_finite() && rb.is_finite()) {
        return Err(Error::InvalidParameter(format!("ball radii {ra}, {rb} must be nonnegative")));
    }
    if ra == 0.0 || rb == 0.0 {
        return Ok(0.0);
    }
    const ORDER: usize = 48;
    const ANGLES: usize = 256;
    let panels = |r: f64| (r.ceil() as usize).max(1) * 2;
    let inner = |r: f64| {
        let pieces = panels(rb);
        (0..pieces)
            .map(|p| {
                let (lo, hi) = (rb * p as f64 / pieces as f64, rb * (p + 1) as f64 / pieces as f64);
                integrate_gl(
                    &|u: f64| {
                        let (a, b) = (r.cosh() * u.cosh(), r.sinh() * u.sinh());
                        let ring: f64 = (0..ANGLES)
                            .map(|k| g(a - b * (2.0 * PI * k as f64 / ANGLES as f64).cos()))
                            .sum::<f64>()
                            * (2.0 * PI / ANGLES as f64);
                        u.sinh() * ring
                    },
                    lo,
                    hi,
                    ORDER,
                )
            })
            .sum::<f64>()
    };
    let pieces = panels(ra);
    let total: f64 = (0..pieces)
        .into_par_iter()
        .map(|p| {
            let (lo, hi) = (ra * p as f64 / pieces as f64, ra * (p + 1) as f64 / pieces as f64);
            integrate_gl(&|r: f64| 2.0 * PI * r.sinh() * inner(r), lo, hi, ORDER)
        })
        .collect::<Vec<_>>()
        .iter()
        .sum();
    Ok(total)
}

/// `‖L_{Ω*}‖²_HS` for the ball of measure `nu`.
pub fn hyp_hs_norm_sq_ball(nu: f64, wavelet: &CauchyWavelet) -> Result<f64> {
    let r = ball_radius_for_measure(nu);
    ball_pair_functional(r, r, &|c| wavelet.kernel_cosh(c))
}
