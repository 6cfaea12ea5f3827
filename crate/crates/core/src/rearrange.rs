//! Symmetric decreasing rearrangement of sets and nonnegative weights, Riesz double-convolution
//! functionals `∬ f(x) g(x-y) h(y)`, and a non-strict kernel for which equality holds
//! without `f` being a translate of its rearrangement.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numerics::quadrature::{adaptive_gl, AdaptiveOptions};
use crate::phase_space::{unit_ball_volume, GridField, IntervalSet, Measurable, RadialRegion, Shape};

/// Centered ball with the same measure.
pub fn rearrange_region<R: Measurable + ?Sized>(region: &R) -> Result<RadialRegion> {
    let n = region.ambient_dim();
    let m = region.measure();
    if !(m > 0.0) {
        return Err(Error::EmptyRegion);
    }
    if !m.is_finite() {
        return Err(Error::InvalidRegion("infinite measure".into()));
    }
    RadialRegion::ball(n, ball_radius_for_measure(n, m))
}

/// Radius of the ball of measure `m` in `R^n`.
pub fn ball_radius_for_measure(n: usize, m: f64) -> f64 {
    (m / unit_ball_volume(n)).powf(1.0 / n as f64)
}

/// Piecewise-constant radially nonincreasing function: `values[k]` on `knots[k] <= |x| < knots[k+1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialProfile {
    n: usize,
    knots: Vec<f64>,
    values: Vec<f64>,
}

impl RadialProfile {
    pub fn new(n: usize, knots: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        if knots.len() != values.len() + 1 || knots.first() != Some(&0.0) {
            return Err(Error::InvalidParameter("knots must start at 0 and bracket every value".into()));
        }
        if knots.windows(2).any(|w| !(w[0] < w[1]) || !w[1].is_finite()) {
            return Err(Error::InvalidParameter("knots must be finite and strictly increasing".into()));
        }
        if values.iter().any(|v| !(*v >= 0.0 && v.is_finite())) || values.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::InvalidParameter("values must be finite, nonnegative and nonincreasing".into()));
        }
        Ok(Self { n, knots, values })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn support_radius(&self) -> f64 {
        *self.knots.last().unwrap_or(&0.0)
    }

    pub fn eval(&self, r: f64) -> f64 {
        let k = self.knots.partition_point(|&t| t <= r);
        if k == 0 || k > self.values.len() {
            0.0
        } else {
            self.values[k - 1]
        }
    }

    /// Measure of the shell carrying `values[k]`.
    pub fn shell_measure(&self, k: usize) -> f64 {
        let n = self.n as i32;
        unit_ball_volume(self.n) * (self.knots[k + 1].powi(n) - self.knots[k].powi(n))
    }

    /// Measure of `{x : f(x) > t}`.
    pub fn level_measure(&self, t: f64) -> f64 {
        (0..self.values.len()).filter(|&k| self.values[k] > t).map(|k| self.shell_measure(k)).sum()
    }

    /// `∫ f^p`.
    pub fn lp_norm_pow(&self, p: f64) -> f64 {
        (0..self.values.len()).map(|k| self.values[k].powf(p) * self.shell_measure(k)).sum()
    }

    /// Layer-cake decomposition `f = Σ w χ_{B_r}` as `(r, w)` pairs with `w >= 0`.
    pub fn layers(&self) -> Vec<(f64, f64)> {
        let v = &self.values;
        (0..v.len())
            .filter_map(|k| {
                let next = v.get(k + 1).copied().unwrap_or(0.0);
                let w = v[k] - next;
                (w > 0.0).then_some((self.knots[k + 1], w))
            })
            .collect()
    }
}

/// Layer-cake rearrangement of a nonnegative real grid field.
///
/// Cell values are sorted in decreasing order (ties by cell index); the cell of rank `k`
/// occupies the shell whose enclosed measure spans `[k h², (k+1) h²]`. Equal consecutive
/// values are merged into one shell.
pub fn rearrange_function(field: &GridField) -> Result<RadialProfile> {
    let values = field.real_values()?;
    if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| **v < 0.0) {
        return Err(Error::NegativeValue { index, value });
    }
    let mut order: Vec<usize> = (0..values.len()).filter(|&k| values[k] > 0.0).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    let cell = field.spec().cell_area();
    let mut knots = vec![0.0];
    let mut vals: Vec<f64> = Vec::new();
    let mut count = 0usize;
    for (rank, &k) in order.iter().enumerate() {
        count += 1;
        let last = rank + 1 == order.len();
        if last || values[order[rank + 1]] != values[k] {
            knots.push(ball_radius_for_measure(2, (rank + 1) as f64 * cell));
            vals.push(values[k]);
            count = 0;
        }
    }
    debug_assert_eq!(count, 0);
    RadialProfile::new(2, knots, vals)
}

/// Radial kernel `g(|x|)` with the points where it fails to be smooth.
#[derive(Clone)]
pub struct RadialKernel {
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    breaks: Vec<f64>,
}

impl std::fmt::Debug for RadialKernel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RadialKernel").field("breaks", &self.breaks).finish_non_exhaustive()
    }
}

impl RadialKernel {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static, breaks: Vec<f64>) -> Self {
        Self { f: Arc::new(f), breaks }
    }

    /// `e^{-π t²}`.
    pub fn gaussian() -> Self {
        Self::new(|t| (-std::f64::consts::PI * t * t).exp(), Vec::new())
    }

    /// Indicator of the open ball of radius `b`.
    pub fn indicator(b: f64) -> Self {
        Self::new(move |t| if t < b { 1.0 } else { 0.0 }, vec![b])
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.f)(t)
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }
}

/// `∬ f(x) g(x-y) h(y) dx dy` as a double cell sum over the supports times `h⁴`.
pub fn riesz_functional(f: &GridField, g: &RadialKernel, h: &GridField) -> Result<f64> {
    if f.spec() != h.spec() {
        return Err(Error::GridMismatch);
    }
    let spec = *f.spec();
    let fv = f.real_values()?;
    let hv = h.real_values()?;
    let sf = f.support();
    let sh = h.support();
    if sf.is_empty() || sh.is_empty() {
        return Ok(0.0);
    }
    let extent = |s: &[usize]| {
        let (mut lo, mut hi) = ([usize::MAX; 2], [0usize; 2]);
        for &k in s {
            let (i, j) = spec.cell(k);
            lo = [lo[0].min(i), lo[1].min(j)];
            hi = [hi[0].max(i), hi[1].max(j)];
        }
        (lo, hi)
    };
    let (flo, fhi) = extent(&sf);
    let (hlo, hhi) = extent(&sh);
    let dx = fhi[0].max(hhi[0]) - flo[0].min(hlo[0]);
    let dy = fhi[1].max(hhi[1]) - flo[1].min(hlo[1]);
    let mut table = vec![0.0; (dx + 1) * (dy + 1)];
    for b in 0..=dy {
        for a in 0..=dx {
            let t = spec.h * ((a * a + b * b) as f64).sqrt();
            let v = g.eval(t);
            if !v.is_finite() {
                return Err(Error::KernelEvaluation(t));
            }
            table[b * (dx + 1) + a] = v;
        }
    }
    let hcells: Vec<(usize, usize, f64)> = sh
        .iter()
        .map(|&k| {
            let (i, j) = spec.cell(k);
            (i, j, hv[k])
        })
        .collect();
    let partials: Vec<f64> = sf
        .par_iter()
        .map(|&k| {
            let (i, j) = spec.cell(k);
            let mut acc = 0.0;
            for &(ib, jb, w) in &hcells {
                acc += w * table[j.abs_diff(jb) * (dx + 1) + i.abs_diff(ib)];
            }
            fv[k] * acc
        })
        .collect();
    Ok(partials.iter().sum::<f64>() * spec.cell_area().powi(2))
}

/// `∬ χ_A(x) g(|x-y|) χ_B(y) dx dy` on the line, by quadrature over the exact overlap profile.
pub fn riesz_functional_line(a: &IntervalSet, g: &RadialKernel, b: &IntervalSet) -> Result<f64> {
    let opts = AdaptiveOptions { rel_tol: 1e-14, ..Default::default() };
    let mut total = 0.0;
    for &(a0, a1) in a.intervals() {
        for &(b0, b1) in b.intervals() {
            // x - y = t with x in (a0, a1), y in (b0, b1): overlap length |A ∩ (B + t)|.
            let w = |t: f64| (a1.min(b1 + t) - a0.max(b0 + t)).max(0.0);
            let mut breaks = vec![a0 - b0, a1 - b1, 0.0];
            for &k in g.breaks() {
                breaks.push(k);
                breaks.push(-k);
            }
            let integrand = |t: f64| {
                let v = g.eval(t.abs()) * w(t);
                if v.is_finite() {
                    v
                } else {
                    f64::NAN
                }
            };
            let r = adaptive_gl(&integrand, a0 - b1, a1 - b0, &breaks, &opts)?;
            if !r.value.is_finite() {
                return Err(Error::KernelEvaluation(f64::NAN));
            }
            total += r.value;
        }
    }
    Ok(total)
}

/// Outcome of comparing both sides of the Riesz inequality.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct EqualityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub relative_gap: f64,
    /// Number of connected radial pieces of the set; more than one means it is not a ball.
    pub components: usize,
}

/// A set that is not a ball, a small ball, and a kernel that is constant on `r <= t <= R`,
/// for which the Riesz functional is unchanged by rearranging the set.
///
/// The set is `{|x| < r + 2δ} ∪ {R - 4δ < |x| < R - 2δ}`, the second function is the
/// indicator of the ball of radius `δ`, and the kernel is `1 + (r - t)` on `[0, r]`,
/// `1` on `[r, R]` and `e^{-(t-R)}` beyond `R`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EqualityConstruction {
    pub r: f64,
    pub big_r: f64,
    pub delta: f64,
}

impl EqualityConstruction {
    pub fn new(r: f64, big_r: f64, delta: f64) -> Result<Self> {
        if !(r >= 0.0 && big_r > r && delta > 0.0 && big_r.is_finite()) {
            return Err(Error::ConstraintViolation(format!("need 0 <= r < R and δ > 0 (r={r}, R={big_r}, δ={delta})")));
        }
        if !(r + 2.0 * delta < big_r - 4.0 * delta) {
            return Err(Error::ConstraintViolation(format!(
                "r + 2δ = {} must be below R - 4δ = {}",
                r + 2.0 * delta,
                big_r - 4.0 * delta
            )));
        }
        Ok(Self { r, big_r, delta })
    }

    pub fn kernel(&self) -> RadialKernel {
        let (r, big_r) = (self.r, self.big_r);
        RadialKernel::new(
            move |t| {
                if t <= r {
                    1.0 + (r - t)
                } else if t <= big_r {
                    1.0
                } else {
                    (-(t - big_r)).exp()
                }
            },
            vec![r, big_r],
        )
    }

    pub fn region(&self, n: usize) -> Result<RadialRegion> {
        let (r, big_r, d) = (self.r, self.big_r, self.delta);
        RadialRegion::new(n, vec![(0.0, r + 2.0 * d), (big_r - 4.0 * d, big_r - 2.0 * d)])
    }

    pub fn region_line(&self) -> Result<IntervalSet> {
        let (r, big_r, d) = (self.r, self.big_r, self.delta);
        IntervalSet::new(vec![
            (-(big_r - 2.0 * d), -(big_r - 4.0 * d)),
            (-(r + 2.0 * d), r + 2.0 * d),
            (big_r - 4.0 * d, big_r - 2.0 * d),
        ])
    }

    /// Both sides on the line, evaluated by exact overlap profiles.
    pub fn check_line(&self) -> Result<EqualityCheck> {
        let omega = self.region_line()?;
        let small = IntervalSet::centered(2.0 * self.delta)?;
        let g = self.kernel();
        let lhs = riesz_functional_line(&omega, &g, &small)?;
        let rhs = riesz_functional_line(&omega.rearranged()?, &g, &small)?;
        Ok(EqualityCheck { lhs, rhs, relative_gap: (lhs - rhs).abs() / lhs, components: omega.intervals().len() })
    }

    /// Both sides in the plane on a grid of cell size `h`, using exact cell coverage fractions.
    pub fn check_grid(&self, h: f64) -> Result<EqualityCheck> {
        let region = self.region(2)?;
        let star = rearrange_region(&region)?;
        let reach = region.outer_radius().max(star.outer_radius());
        let spec = crate::phase_space::GridSpec::centered(reach + 2.0 * h, h)?;
        let f = Shape::radial([0.0, 0.0], region.clone())?.coverage(&spec)?;
        let fs = Shape::radial([0.0, 0.0], star)?.coverage(&spec)?;
        let small = Shape::ball([0.0, 0.0], self.delta)?.coverage(&spec)?;
        let g = self.kernel();
        let lhs = riesz_functional(&f, &g, &small)?;
        let rhs = riesz_functional(&fs, &g, &small)?;
        Ok(EqualityCheck { lhs, rhs, relative_gap: (lhs - rhs).abs() / lhs, components: region.annuli().len() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase_space::{GridRegion, GridSpec};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn region_rearrangement_examples() {
        let ann = RadialRegion::new(2, vec![(1.0, 2.0)]).unwrap();
        assert_relative_eq!(rearrange_region(&ann).unwrap().outer_radius(), 3f64.sqrt(), epsilon = 1e-14);
        let ball = RadialRegion::ball(2, 0.7).unwrap();
        assert_relative_eq!(rearrange_region(&ball).unwrap().outer_radius(), 0.7, epsilon = 1e-14);
        let empty = RadialRegion::new(2, vec![]).unwrap();
        assert!(matches!(rearrange_region(&empty), Err(Error::EmptyRegion)));
        let once = rearrange_region(&ann).unwrap();
        assert_eq!(rearrange_region(&once).unwrap(), once);
    }

    #[test]
    fn grid_region_rearrangement_preserves_measure() {
        let spec = GridSpec::centered(2.0, 0.05).unwrap();
        let r = GridRegion::from_fn(spec, |p| p[0].abs() + p[1].abs() < 1.0);
        let star = rearrange_region(&r).unwrap();
        assert_relative_eq!(star.measure(), r.measure(), max_relative = 1e-13);
    }

    #[test]
    fn two_level_field() {
        let spec = GridSpec::new([0.0, 0.0], 0.5, 4, 1).unwrap();
        let f = GridField::from_real(spec, vec![1.0, 2.0, 0.0, 1.0]).unwrap();
        let p = rearrange_function(&f).unwrap();
        assert_eq!(p.values(), &[2.0, 1.0]);
        assert_relative_eq!(p.shell_measure(0), 0.25, epsilon = 1e-14);
        assert_relative_eq!(p.shell_measure(1), 0.5, epsilon = 1e-14);
        assert_relative_eq!(p.level_measure(1.5), 0.25, epsilon = 1e-14);
        assert_relative_eq!(p.lp_norm_pow(2.0), 4.0 * 0.25 + 0.5, epsilon = 1e-14);
    }

    #[test]
    fn indicator_rearranges_to_ball() {
        let spec = GridSpec::centered(1.0, 0.1).unwrap();
        let r = GridRegion::from_fn(spec, |p| p[0] > 0.3);
        let p = rearrange_function(&r.to_field()).unwrap();
        assert_eq!(p.values(), &[1.0]);
        assert_relative_eq!(PI * p.support_radius().powi(2), r.measure(), max_relative = 1e-13);
    }

    #[test]
    fn negative_values_rejected() {
        let spec = GridSpec::new([0.0, 0.0], 1.0, 2, 1).unwrap();
        let f = GridField::from_real(spec, vec![1.0, -0.5]).unwrap();
        assert!(matches!(rearrange_function(&f), Err(Error::NegativeValue { index: 1, .. })));
    }

    #[test]
    fn line_functional_closed_form() {
        let s = IntervalSet::interval(0.0, 2.0).unwrap();
        let v = riesz_functional_line(&s, &RadialKernel::indicator(0.5), &s).unwrap();
        assert_relative_eq!(v, 1.75, epsilon = 1e-12);
    }

    #[test]
    fn grid_functional_matches_hs_norm() {
        let spec = GridSpec::centered(1.1, 0.05).unwrap();
        let f = Shape::ball([0.0, 0.0], 1.0).unwrap().coverage(&spec).unwrap();
        let v = riesz_functional(&f, &RadialKernel::gaussian(), &f).unwrap();
        let hs = crate::hs_engine::hs_norm_sq_grid(
            &f,
            crate::hs_engine::GridMethod::Direct,
            crate::hs_engine::Stencil::Point,
        )
        .unwrap()
        .hs_sq;
        assert_relative_eq!(v, hs, max_relative = 1e-12);
        let zero = GridField::zeros(spec);
        assert_eq!(riesz_functional(&zero, &RadialKernel::gaussian(), &f).unwrap(), 0.0);
    }

    #[test]
    fn kernel_errors_surface() {
        let spec = GridSpec::centered(0.3, 0.1).unwrap();
        let f = GridRegion::from_fn(spec, |_| true).to_field();
        let bad = RadialKernel::new(|t| 1.0 / t, vec![]);
        assert!(matches!(riesz_functional(&f, &bad, &f), Err(Error::KernelEvaluation(_))));
    }

    #[test]
    fn construction_constraints() {
        assert!(EqualityConstruction::new(1.0, 3.0, 0.2).is_ok());
        assert!(matches!(EqualityConstruction::new(1.0, 2.0, 0.2), Err(Error::ConstraintViolation(_))));
    }

    #[test]
    fn construction_equality_on_the_line() {
        let c = EqualityConstruction::new(1.0, 3.0, 0.2).unwrap();
        let chk = c.check_line().unwrap();
        assert!(chk.relative_gap < 1e-6, "{chk:?}");
        assert!(chk.components > 1);
    }
}
