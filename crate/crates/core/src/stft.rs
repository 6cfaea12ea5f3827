//! Gaussian-window short-time Fourier transform of sampled signals on the line, spectrogram
//! energies, and Lieb-inequality checks.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::phase_space::{GridField, GridRegion, GridSpec};

/// The window is treated as zero beyond this distance.
pub const WINDOW_RADIUS: f64 = 3.2;

/// Relative energy allowed outside the effective support.
pub const SUPPORT_TOL: f64 = 1e-6;

/// `2^{1/4} e^{-π t²}`, of unit norm.
pub fn gaussian_window(t: f64) -> f64 {
    2f64.powf(0.25) * (-PI * t * t).exp()
}

/// Uniformly sampled signal `f(t0 + k Δt)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Signal {
    samples: Vec<Complex64>,
    time_step: f64,
    t0: f64,
}

impl Signal {
    pub fn new(samples: Vec<Complex64>, time_step: f64, t0: f64) -> Result<Self> {
        if !(time_step > 0.0 && time_step.is_finite()) || !t0.is_finite() {
            return Err(Error::InvalidParameter(format!("time step {time_step} and start {t0} must be finite, step positive")));
        }
        if samples.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("signal sample".into()));
        }
        Ok(Self { samples, time_step, t0 })
    }

    pub fn from_fn(t0: f64, time_step: f64, len: usize, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        Self::new((0..len).map(|k| f(t0 + k as f64 * time_step)).collect(), time_step, t0)
    }

    /// The window itself sampled on `[-half_width, half_width]`.
    pub fn gaussian(half_width: f64, time_step: f64) -> Result<Self> {
        let len = (2.0 * half_width / time_step).round() as usize + 1;
        Self::from_fn(-half_width, time_step, len, |t| Complex64::new(gaussian_window(t), 0.0))
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn time_step(&self) -> f64 {
        self.time_step
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn time(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.time_step
    }

    pub fn norm_sq(&self) -> f64 {
        self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.time_step
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// The same samples moved later by `dt`.
    pub fn delayed(&self, dt: f64) -> Self {
        Self { t0: self.t0 + dt, ..self.clone() }
    }

    /// Shortest time interval and frequency band, each leaving at most `tol/2` of the energy on
    /// either side. Frequencies come from the discrete Fourier transform of the samples.
    pub fn effective_support(&self, tol: f64) -> Result<([f64; 2], [f64; 2])> {
        let n = self.samples.len();
        let energies: Vec<f64> = self.samples.iter().map(|z| z.norm_sqr()).collect();
        let total: f64 = energies.iter().sum();
        if total == 0.0 {
            return Err(Error::InsufficientSupport("signal has zero energy".into()));
        }
        let (lo, hi) = trim(&energies, tol / 2.0 * total);
        let time = [self.time(lo), self.time(hi)];

        let df = 1.0 / (n as f64 * self.time_step);
        let half = n as i64 / 2;
        let freqs: Vec<(f64, f64)> = (-half..n as i64 - half)
            .into_par_iter()
            .map(|j| {
                let w = j as f64 * df;
                let v: Complex64 = self
                    .samples
                    .iter()
                    .enumerate()
                    .map(|(k, z)| z * Complex64::from_polar(1.0, -2.0 * PI * w * self.time(k)))
                    .sum();
                (w, v.norm_sqr())
            })
            .collect();
        let spectral: Vec<f64> = freqs.iter().map(|p| p.1).collect();
        let spectral_total: f64 = spectral.iter().sum();
        let (flo, fhi) = trim(&spectral, tol / 2.0 * spectral_total);
        Ok((time, [freqs[flo].0, freqs[fhi].0]))
    }
}

fn trim(weights: &[f64], budget: f64) -> (usize, usize) {
    let mut lo = 0;
    let mut acc = 0.0;
    while lo + 1 < weights.len() && acc + weights[lo] <= budget {
        acc += weights[lo];
        lo += 1;
    }
    let mut hi = weights.len() - 1;
    acc = 0.0;
    while hi > lo && acc + weights[hi] <= budget {
        acc += weights[hi];
        hi -= 1;
    }
    (lo, hi)
}

/// Checks that the signal fits its sample window, that the grid covers its time-frequency
/// support with margin [`WINDOW_RADIUS`], and that sampling is fine enough for the grid's band.
pub fn check_support(f: &Signal, spec: &GridSpec) -> Result<()> {
    let n = f.samples.len();
    if n == 0 {
        return Err(Error::InsufficientSupport("signal has no samples".into()));
    }
    let total: f64 = f.samples.iter().map(|z| z.norm_sqr()).sum();
    if total == 0.0 {
        return Ok(());
    }
    let edge = ((0.5 / f.time_step).ceil() as usize).min(n / 2).max(1);
    let tail: f64 = f.samples[..edge].iter().chain(&f.samples[n - edge..]).map(|z| z.norm_sqr()).sum();
    if tail >= SUPPORT_TOL * total {
        return Err(Error::InsufficientSupport(format!("relative energy {:.3e} near the sample ends", tail / total)));
    }
    let (time, band) = f.effective_support(SUPPORT_TOL)?;
    let lo = spec.center(0, 0);
    let hi = spec.center(spec.nx - 1, spec.ny - 1);
    let covered = lo[0] <= time[0] - WINDOW_RADIUS
        && hi[0] >= time[1] + WINDOW_RADIUS
        && lo[1] <= band[0] - WINDOW_RADIUS
        && hi[1] >= band[1] + WINDOW_RADIUS;
    if !covered {
        return Err(Error::InsufficientSupport(format!(
            "grid [{:.3}, {:.3}] x [{:.3}, {:.3}] does not cover support [{:.3}, {:.3}] x [{:.3}, {:.3}] with margin {WINDOW_RADIUS}",
            lo[0], hi[0], lo[1], hi[1], time[0], time[1], band[0], band[1]
        )));
    }
    let reach = lo[1].abs().max(hi[1].abs()) + band[0].abs().max(band[1].abs()) + WINDOW_RADIUS;
    if 1.0 / f.time_step < reach {
        return Err(Error::InsufficientSupport(format!(
            "sampling rate {} is below the required {reach:.3}",
            1.0 / f.time_step
        )));
    }
    Ok(())
}

/// `V f(x, ω) = ∫ f(t) φ(t - x) e^{-2πiωt} dt` at every grid center `(x, ω)`, by the sample sum.
pub fn stft_gaussian(f: &Signal, spec: &GridSpec) -> Result<GridField> {
    check_support(f, spec)?;
    Ok(stft_unchecked(f, spec))
}

fn stft_unchecked(f: &Signal, spec: &GridSpec) -> GridField {
    let dt = f.time_step;
    let columns: Vec<Vec<Complex64>> = (0..spec.nx)
        .into_par_iter()
        .map(|i| {
            let x = spec.center(i, 0)[0];
            let k_lo = (((x - WINDOW_RADIUS - f.t0) / dt).ceil().max(0.0)) as usize;
            let k_hi = (((x + WINDOW_RADIUS - f.t0) / dt).floor() + 1.0).clamp(0.0, f.samples.len() as f64) as usize;
            let w0 = spec.center(0, 0)[1];
            let mut terms: Vec<(Complex64, Complex64)> = (k_lo..k_hi.max(k_lo))
                .map(|k| {
                    let t = f.time(k);
                    let a = f.samples[k] * gaussian_window(t - x) * dt * Complex64::from_polar(1.0, -2.0 * PI * w0 * t);
                    (a, Complex64::from_polar(1.0, -2.0 * PI * spec.h * t))
                })
                .collect();
            (0..spec.ny)
                .map(|_| {
                    let v = terms.iter().map(|p| p.0).sum();
                    for p in terms.iter_mut() {
                        p.0 *= p.1;
                    }
                    v
                })
                .collect()
        })
        .collect();
    let values = (0..spec.len())
        .map(|idx| {
            let (i, j) = spec.cell(idx);
            columns[i][j]
        })
        .collect();
    GridField::new(*spec, values).expect("finite transform of finite samples")
}

/// `|V f|²` on a grid with `x` = time and `ω` = frequency.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrogram {
    spec: GridSpec,
    values: Vec<f64>,
}

impl Spectrogram {
    pub fn new(f: &Signal, spec: &GridSpec) -> Result<Self> {
        Ok(Self::from_transform(&stft_gaussian(f, spec)?))
    }

    pub fn from_transform(v: &GridField) -> Self {
        Self { spec: *v.spec(), values: v.values().iter().map(|z| z.norm_sqr()).collect() }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn total_energy(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.spec.cell_area()
    }

    /// `Σ |Vf|^p h²`.
    pub fn lp_norm_pow(&self, p: f64) -> f64 {
        self.values.iter().map(|v| v.powf(p / 2.0)).sum::<f64>() * self.spec.cell_area()
    }
}

/// Energy of the spectrogram inside `region`.
pub fn local_energy(s: &Spectrogram, region: &GridRegion) -> Result<f64> {
    if s.spec != *region.spec() {
        return Err(Error::GridMismatch);
    }
    Ok(region.cells().iter().map(|&k| s.values[k]).sum::<f64>() * s.spec.cell_area())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuadraticForm {
    /// Spectrogram energy inside the region.
    pub lhs: f64,
    /// `⟨L f, f⟩` with `L f = Σ_{z∈Ω} h² V f(z) φ_z` synthesized on the sample grid.
    pub rhs: f64,
    pub gap: f64,
    pub norm_sq: f64,
}

/// Compares the localized energy with the quadratic form of the discretized operator.
pub fn quadratic_form_check(f: &Signal, region: &GridRegion) -> Result<QuadraticForm> {
    let spec = *region.spec();
    let v = stft_gaussian(f, &spec)?;
    let lhs = local_energy(&Spectrogram::from_transform(&v), region)?;
    let w = spec.cell_area();
    let cells = region.cells();
    let synthesized: Vec<Complex64> = (0..f.samples.len())
        .into_par_iter()
        .map(|k| {
            let t = f.time(k);
            cells
                .iter()
                .map(|&c| {
                    let [x, om] = spec.center_of(c);
                    let d = t - x;
                    if d.abs() > WINDOW_RADIUS {
                        return Complex64::new(0.0, 0.0);
                    }
                    v.values()[c] * gaussian_window(d) * Complex64::from_polar(1.0, 2.0 * PI * om * t)
                })
                .sum::<Complex64>()
                * w
        })
        .collect();
    let rhs: Complex64 =
        synthesized.iter().zip(&f.samples).map(|(l, z)| l * z.conj()).sum::<Complex64>() * f.time_step;
    let rhs = rhs.re;
    let gap = (lhs - rhs).abs() / lhs.abs().max(f64::MIN_POSITIVE);
    Ok(QuadraticForm { lhs, rhs, gap: if lhs == 0.0 && rhs == 0.0 { 0.0 } else { gap }, norm_sq: f.norm_sq() })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LiebCheck {
    pub p: f64,
    /// `‖V f‖_p^p`.
    pub lhs: f64,
    /// `(2/p) ‖f‖₂^p`.
    pub rhs: f64,
    pub slack: f64,
}

pub fn lieb_check(f: &Signal, p: f64, spec: &GridSpec) -> Result<LiebCheck> {
    if !(2.0..=8.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("p = {p} must lie in [2, 8]")));
    }
    let s = Spectrogram::new(f, spec)?;
    Ok(lieb_from_spectrogram(&s, f.norm_sq(), p))
}

pub fn lieb_from_spectrogram(s: &Spectrogram, norm_sq: f64, p: f64) -> LiebCheck {
    let lhs = s.lp_norm_pow(p);
    let rhs = 2.0 / p * norm_sq.powf(p / 2.0);
    LiebCheck { p, lhs, rhs, slack: rhs - lhs }
}

/// Values `h_0(t), …, h_{n-1}(t)` of the unit-norm Hermite functions adapted to `e^{-πt²}`.
pub fn hermite_functions(n: usize, t: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n);
    let x = (2.0 * PI).sqrt() * t;
    let mut prev = 0.0;
    let mut cur = gaussian_window(t);
    for k in 0..n {
        out.push(cur);
        let k = k as f64;
        let next = (2.0 / (k + 1.0)).sqrt() * x * cur - (k / (k + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    out
}

/// `Σ c_k h_k` sampled on `[-half_width, half_width]`.
pub fn hermite_signal(coeffs: &[Complex64], half_width: f64, time_step: f64) -> Result<Signal> {
    let len = (2.0 * half_width / time_step).round() as usize + 1;
    Signal::from_fn(-half_width, time_step, len, |t| {
        hermite_functions(coeffs.len(), t).iter().zip(coeffs).map(|(h, c)| c * h).sum()
    })
}

/// Hermite combination of orders below `orders` with coefficients uniform in the unit square
/// scaled by `0.6^k`.
pub fn random_hermite_coeffs(rng: &mut impl Rng, orders: usize) -> Vec<Complex64> {
    (0..orders)
        .map(|k| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) * 0.6f64.powi(k as i32))
        .collect()
}

/// Sampling and grid that hold Hermite signals up to order 6: samples on `[-7, 7]` at step
/// 0.05, grid centers on `[-6, 6]²` at spacing 0.05.
pub fn demo_setup() -> (f64, f64, GridSpec) {
    (7.0, 0.05, GridSpec::centered(6.0, 0.05).expect("valid constant grid"))
}
