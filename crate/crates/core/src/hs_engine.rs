//! Hilbert–Schmidt norms and traces of Gaussian localization operators.
//!
//! `‖L_F‖²_HS = ∬ F(z) e^{-π|z-w|²} conj(F(w)) dz dw` is evaluated on grids (direct pair sums
//! or a separable convolution sweep) and, for radial weights, through the Fourier side
//! `∫ e^{-π|ξ|²} |F̂(ξ)|² dξ` using closed-form ball transforms.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::quadrature::{adaptive_gl, integrate_gl, AdaptiveOptions};
use crate::numerics::{bessel_j, bessel_j_normalized};
use crate::phase_space::{unit_ball_volume, unit_sphere_area, GridField, Measurable, RadialRegion, Shape};

/// Gaussian stencils are cut off beyond this distance; `e^{-π R²} < 1e-14`.
pub const TRUNCATION_RADIUS: f64 = 3.25;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HsMethod {
    GridDirect,
    GridConvolution,
    RadialBessel,
    CompositeBessel,
}

impl std::fmt::Display for HsMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            HsMethod::GridDirect => "grid_direct",
            HsMethod::GridConvolution => "grid_convolution",
            HsMethod::RadialBessel => "radial_bessel",
            HsMethod::CompositeBessel => "composite_bessel",
        };
        f.write_str(s)
    }
}

/// How the Gaussian is represented between two cells.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stencil {
    /// Kernel sampled at the distance between cell centers.
    #[default]
    Point,
    /// Kernel averaged over both cells: exact for cellwise-constant weights.
    CellAverage,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridMethod {
    Direct,
    #[default]
    Convolution,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HsResult {
    pub hs_sq: f64,
    pub method: HsMethod,
    /// Cell size for grid routes, initial quadrature panel width for Fourier routes.
    pub resolution: f64,
    pub estimated_error: f64,
}

/// `|⟨φ_z, φ_w⟩|² = e^{-π|z-w|²}`.
pub fn gauss_kernel_sq(z: [f64; 2], w: [f64; 2]) -> f64 {
    (-PI * ((z[0] - w[0]).powi(2) + (z[1] - w[1]).powi(2))).exp()
}

/// The time-frequency shifted Gaussian `φ_z(t) = e^{2πiωt} 2^{1/4} e^{-π(t-x)²}` for `z = (x, ω)`.
pub fn coherent_state(z: [f64; 2], t: f64) -> Complex64 {
    let amp = 2f64.powf(0.25) * (-PI * (t - z[0]).powi(2)).exp();
    Complex64::from_polar(amp, 2.0 * PI * z[1] * t)
}

/// `⟨φ_z, φ_w⟩ = ∫ φ_z(t) conj(φ_w(t)) dt` by composite Gauss–Legendre quadrature.
pub fn coherent_overlap(z: [f64; 2], w: [f64; 2]) -> Result<Complex64> {
    if z.iter().chain(&w).any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("non-finite phase-space point".into()));
    }
    let mid = 0.5 * (z[0] + w[0]);
    let half = 4.5 + 0.5 * (z[0] - w[0]).abs();
    let integrate = |panels: usize| -> Complex64 {
        let width = 2.0 * half / panels as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for p in 0..panels {
            let a = mid - half + p as f64 * width;
            let re = integrate_gl(&|t| (coherent_state(z, t) * coherent_state(w, t).conj()).re, a, a + width, 20);
            let im = integrate_gl(&|t| (coherent_state(z, t) * coherent_state(w, t).conj()).im, a, a + width, 20);
            acc += Complex64::new(re, im);
        }
        acc
    };
    let freq = (z[1] - w[1]).abs();
    let mut panels = ((2.0 * half * (1.0 + freq)).ceil() as usize).max(8);
    let mut prev = integrate(panels);
    while panels < 1 << 16 {
        panels *= 2;
        let next = integrate(panels);
        if (next - prev).norm() < 1e-14 {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::QuadratureNonconvergence(format!("overlap of {z:?} and {w:?}")))
}

/// Closed form `⟨φ_z, φ_w⟩ = e^{-π|z-w|²/2} e^{πi(ω-ν)(x+y)}` for `z = (x, ω)`, `w = (y, ν)`.
pub fn coherent_overlap_closed(z: [f64; 2], w: [f64; 2]) -> Complex64 {
    let amp = (-0.5 * PI * ((z[0] - w[0]).powi(2) + (z[1] - w[1]).powi(2))).exp();
    Complex64::from_polar(amp, PI * (z[1] - w[1]) * (z[0] + w[0]))
}

/// Trace of `L_Ω`, which equals `|Ω|` because coherent states have unit norm.
pub fn trace_localization<R: Measurable + ?Sized>(region: &R) -> f64 {
    region.measure()
}

/// One-dimensional stencil values for offsets `0..=m` cells.
pub fn stencil_table(h: f64, stencil: Stencil) -> Vec<f64> {
    let m = (TRUNCATION_RADIUS / h).ceil() as usize;
    (0..=m)
        .map(|k| {
            let x = k as f64 * h;
            match stencil {
                Stencil::Point => (-PI * x * x).exp(),
                Stencil::CellAverage => {
                    let f = |s: f64| (h - s.abs()) * (-PI * (x + s).powi(2)).exp();
                    (integrate_gl(&f, -h, 0.0, 20) + integrate_gl(&f, 0.0, h, 20)) / (h * h)
                }
            }
        })
        .collect()
}

/// `‖L_F‖²_HS` of a cellwise weight by a pair sum over its support.
pub fn hs_norm_sq_grid(field: &GridField, method: GridMethod, stencil: Stencil) -> Result<HsResult> {
    let spec = field.spec();
    let h = spec.h;
    let g = stencil_table(h, stencil);
    let rows = support_rows(field);
    let total = match method {
        GridMethod::Direct => direct_sum(field, &rows, &g),
        GridMethod::Convolution => convolution_sum(field, &rows, &g),
    };
    let h4 = spec.cell_area().powi(2);
    let l1 = field.l1_norm();
    debug_assert!(total.im.abs() * h4 <= 1e-10 * (l1 * l1).max(f64::MIN_POSITIVE));
    let hs_sq = (total.re * h4).max(0.0);
    let truncation = l1 * l1 * (-PI * TRUNCATION_RADIUS * TRUNCATION_RADIUS).exp();
    let discretization = match stencil {
        Stencil::Point => PI * h * h / 3.0 * l1 * l1,
        Stencil::CellAverage => 0.0,
    };
    let method = match method {
        GridMethod::Direct => HsMethod::GridDirect,
        GridMethod::Convolution => HsMethod::GridConvolution,
    };
    Ok(HsResult { hs_sq, method, resolution: h, estimated_error: truncation + discretization })
}

type Row = Vec<(usize, Complex64)>;

fn support_rows(field: &GridField) -> Vec<Row> {
    let spec = field.spec();
    let mut rows = vec![Vec::new(); spec.ny];
    for k in field.support() {
        let (i, j) = spec.cell(k);
        rows[j].push((i, field.values()[k]));
    }
    rows
}

fn direct_sum(field: &GridField, rows: &[Row], g: &[f64]) -> Complex64 {
    let m = g.len() - 1;
    let spec = field.spec();
    let partials: Vec<Complex64> = field
        .support()
        .into_par_iter()
        .map(|a| {
            let (ia, ja) = spec.cell(a);
            let fa = field.values()[a];
            let mut acc = Complex64::new(0.0, 0.0);
            for (jb, row) in rows.iter().enumerate().take((ja + m + 1).min(spec.ny)).skip(ja.saturating_sub(m)) {
                let gy = g[ja.abs_diff(jb)];
                let start = row.partition_point(|&(ib, _)| ib + m < ia);
                let mut racc = Complex64::new(0.0, 0.0);
                for &(ib, fb) in &row[start..] {
                    if ib > ia + m {
                        break;
                    }
                    racc += fb.conj() * g[ia.abs_diff(ib)];
                }
                acc += racc * gy;
            }
            fa * acc
        })
        .collect();
    partials.iter().sum()
}

fn convolution_sum(field: &GridField, rows: &[Row], g: &[f64]) -> Complex64 {
    let m = g.len() - 1;
    let spec = field.spec();
    let support = field.support();
    if support.is_empty() {
        return Complex64::new(0.0, 0.0);
    }
    let imin = support.iter().map(|&k| spec.cell(k).0).min().unwrap();
    let imax = support.iter().map(|&k| spec.cell(k).0).max().unwrap();
    let width = imax - imin + 1;
    // Horizontal pass: each occupied row convolved along x, restricted to the support columns.
    let horizontal: Vec<Option<Vec<Complex64>>> = rows
        .par_iter()
        .map(|row| {
            if row.is_empty() {
                return None;
            }
            let mut out = vec![Complex64::new(0.0, 0.0); width];
            for (c, slot) in out.iter_mut().enumerate() {
                let i = imin + c;
                let start = row.partition_point(|&(ib, _)| ib + m < i);
                for &(ib, fb) in &row[start..] {
                    if ib > i + m {
                        break;
                    }
                    *slot += fb.conj() * g[i.abs_diff(ib)];
                }
            }
            Some(out)
        })
        .collect();
    // Vertical pass evaluated only on support cells.
    let partials: Vec<Complex64> = support
        .par_iter()
        .map(|&a| {
            let (ia, ja) = spec.cell(a);
            let c = ia - imin;
            let mut acc = Complex64::new(0.0, 0.0);
            let lo = ja.saturating_sub(m);
            let hi = (ja + m).min(spec.ny - 1);
            for (jb, hrow) in horizontal.iter().enumerate().take(hi + 1).skip(lo) {
                if let Some(hrow) = hrow {
                    acc += hrow[c] * g[ja.abs_diff(jb)];
                }
            }
            field.values()[a] * acc
        })
        .collect();
    partials.iter().sum()
}

/// Options for the Fourier-side radial quadrature.
#[derive(Clone, Copy, Debug)]
pub struct RadialOptions {
    pub rel_tol: f64,
}

impl Default for RadialOptions {
    fn default() -> Self {
        Self { rel_tol: 1e-12 }
    }
}

/// Fourier transform of `Σ w χ_{B_r}` in `R^n` at frequency radius `rho`.
fn ball_transform(n: usize, balls: &[(f64, f64)], rho: f64) -> f64 {
    let d = (n / 2) as u32;
    let vol = unit_ball_volume(n);
    balls
        .iter()
        .map(|&(r, w)| w * vol * r.powi(n as i32) * bessel_j_normalized(d, 2.0 * PI * rho * r))
        .sum()
}

fn frequency_cutoff(n: usize, mass: f64) -> f64 {
    let s = unit_sphere_area(n);
    let target = 1e-17 * mass.min(1.0);
    let mut rho = 3.0;
    while s * (-PI * rho * rho).exp() * rho.powi(n as i32 - 2) / (2.0 * PI) * mass > target {
        rho += 0.125;
    }
    rho
}

/// `∬ χ_A(x) e^{-π|x-y|²} χ_B(y)` for radial signed-ball combinations in `R^n`.
pub fn radial_pairing(n: usize, a: &[(f64, f64)], b: &[(f64, f64)], opts: &RadialOptions) -> Result<HsResult> {
    if n < 2 || n % 2 != 0 {
        return Err(Error::InvalidParameter(format!("dimension {n} must be even")));
    }
    if a.iter().chain(b).any(|&(r, w)| !(r >= 0.0 && r.is_finite() && w.is_finite())) {
        return Err(Error::InvalidParameter("ball radii must be finite and nonnegative".into()));
    }
    let vol = unit_ball_volume(n);
    let mass = |balls: &[(f64, f64)]| balls.iter().map(|&(r, w)| w.abs() * vol * r.powi(n as i32)).sum::<f64>();
    let (ma, mb) = (mass(a), mass(b));
    let r_max = a.iter().chain(b).map(|p| p.0).fold(0.0, f64::max);
    if ma == 0.0 || mb == 0.0 || r_max == 0.0 {
        return Ok(HsResult { hs_sq: 0.0, method: HsMethod::RadialBessel, resolution: 0.0, estimated_error: 0.0 });
    }
    let rho_max = frequency_cutoff(n, ma * mb);
    let width = (0.25 / r_max).min(0.1);
    let s = unit_sphere_area(n);
    let same = a == b;
    let integrand = |rho: f64| {
        let ta = ball_transform(n, a, rho);
        let tb = if same { ta } else { ball_transform(n, b, rho) };
        (-PI * rho * rho).exp() * ta * tb * rho.powi(n as i32 - 1)
    };
    let aopts = AdaptiveOptions { rel_tol: opts.rel_tol, initial_width: width, ..Default::default() };
    let res = adaptive_gl(&integrand, 0.0, rho_max, &[], &aopts)?;
    Ok(HsResult {
        hs_sq: s * res.value,
        method: HsMethod::RadialBessel,
        resolution: width,
        estimated_error: s * res.error + 1e-17 * ma * mb,
    })
}

/// `‖L_Ω‖²_HS` for an annulus union.
pub fn hs_norm_sq_radial(region: &RadialRegion) -> Result<HsResult> {
    let balls = region.signed_balls();
    let mut r = radial_pairing(region.dim(), &balls, &balls, &RadialOptions::default())?;
    r.hs_sq = r.hs_sq.max(0.0);
    Ok(r)
}

/// `‖L_F‖²_HS` for `F = Σ w χ_{B_r}`, e.g. a layer-cake decomposition of a radial profile.
pub fn hs_norm_sq_layers(n: usize, layers: &[(f64, f64)]) -> Result<HsResult> {
    let mut r = radial_pairing(n, layers, layers, &RadialOptions::default())?;
    r.hs_sq = r.hs_sq.max(0.0);
    Ok(r)
}

/// `∬ χ_A(x) e^{-π|x-y|²} χ_B(y)` for planar shapes built from translated radial pieces.
pub fn shape_pairing(a: &Shape, b: &Shape) -> Result<HsResult> {
    let pieces = |s: &Shape| -> Vec<([f64; 2], Vec<(f64, f64)>)> {
        s.pieces().iter().map(|p| (p.center, p.region.signed_balls())).collect()
    };
    let (pa, pb) = (pieces(a), pieces(b));
    let (ma, mb) = (a.measure(), b.measure());
    if ma == 0.0 || mb == 0.0 {
        return Ok(HsResult { hs_sq: 0.0, method: HsMethod::CompositeBessel, resolution: 0.0, estimated_error: 0.0 });
    }
    let mut pairs = Vec::new();
    let mut reach: f64 = 0.0;
    for (i, (ca, _)) in pa.iter().enumerate() {
        for (j, (cb, _)) in pb.iter().enumerate() {
            let dist = (ca[0] - cb[0]).hypot(ca[1] - cb[1]);
            reach = reach.max(dist);
            pairs.push((i, j, dist));
        }
    }
    let r_max = pa.iter().chain(&pb).flat_map(|p| p.1.iter().map(|b| b.0)).fold(0.0, f64::max);
    let width = (0.25 / (r_max + reach)).min(0.1);
    let rho_max = frequency_cutoff(2, ma * mb);
    let integrand = |rho: f64| {
        let ta: Vec<f64> = pa.iter().map(|p| ball_transform(2, &p.1, rho)).collect();
        let tb: Vec<f64> = pb.iter().map(|p| ball_transform(2, &p.1, rho)).collect();
        let mut sum = 0.0;
        for &(i, j, dist) in &pairs {
            let phase = if dist == 0.0 { 1.0 } else { bessel_j(0, 2.0 * PI * rho * dist) };
            sum += ta[i] * tb[j] * phase;
        }
        (-PI * rho * rho).exp() * rho * sum
    };
    let aopts = AdaptiveOptions { rel_tol: 1e-12, initial_width: width, ..Default::default() };
    let res = adaptive_gl(&integrand, 0.0, rho_max, &[], &aopts)?;
    Ok(HsResult {
        hs_sq: 2.0 * PI * res.value,
        method: HsMethod::CompositeBessel,
        resolution: width,
        estimated_error: 2.0 * PI * res.error + 1e-17 * ma * mb,
    })
}

/// `‖L_Ω‖²_HS` for a planar shape through its Fourier transform.
pub fn hs_norm_sq_shape(shape: &Shape) -> Result<HsResult> {
    let mut r = shape_pairing(shape, shape)?;
    r.hs_sq = r.hs_sq.max(0.0);
    Ok(r)
}
