//! Fraenkel asymmetry: the smallest relative symmetric difference between a set and a ball
//! of the same measure.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::nelder_mead;
use crate::phase_space::shape::ball_overlap;
use crate::phase_space::{GridRegion, IntervalSet};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AsymmetryResult {
    pub alpha: f64,
    pub best_center: [f64; 2],
    pub evaluations: usize,
    pub converged: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct FraenkelOptions {
    /// Simplex stopping size relative to the ball radius.
    pub center_tol: f64,
    pub max_evals_per_start: usize,
    /// Number of best coarse-lattice points used as extra starts.
    pub lattice_starts: usize,
}

impl Default for FraenkelOptions {
    fn default() -> Self {
        Self { center_tol: 1e-3, max_evals_per_start: 400, lattice_starts: 3 }
    }
}

/// `|Ω △ B(c, r)| / |Ω|` with the ball's intersection with each cell computed exactly.
pub fn asymmetry_objective(region: &GridRegion, center: [f64; 2]) -> f64 {
    let m = region.measure();
    let r = (m / PI).sqrt();
    ((m + PI * r * r - 2.0 * ball_overlap(region, center, r)) / m).max(0.0)
}

pub fn fraenkel(region: &GridRegion) -> Result<AsymmetryResult> {
    fraenkel_with(region, &FraenkelOptions::default())
}

/// Multi-start simplex search over the ball center.
///
/// Starts: the centroid, eight neighbours of it at spacing `r*/2`, the centroid of every
/// connected component, and the best points of a lattice of spacing `r*/2` over the region.
pub fn fraenkel_with(region: &GridRegion, opts: &FraenkelOptions) -> Result<AsymmetryResult> {
    let m = region.measure();
    if !(m > 0.0) {
        return Err(Error::EmptyRegion);
    }
    let r = (m / PI).sqrt();
    let c = region.centroid().expect("nonempty region");
    let mut starts = vec![c];
    for dj in [-1.0, 0.0, 1.0] {
        for di in [-1.0, 0.0, 1.0] {
            if di != 0.0 || dj != 0.0 {
                starts.push([c[0] + di * r / 2.0, c[1] + dj * r / 2.0]);
            }
        }
    }
    let components = region.components();
    if components.len() > 1 {
        starts.extend(components.iter().filter_map(|comp| comp.centroid()));
    }
    let mut evaluations = 0;
    if opts.lattice_starts > 0 {
        let (lo, hi) = region.bounding_box().expect("nonempty region");
        let step = r / 2.0;
        let nx = ((hi[0] - lo[0]) / step).ceil() as usize + 1;
        let ny = ((hi[1] - lo[1]) / step).ceil() as usize + 1;
        let mut lattice: Vec<([f64; 2], f64)> = (0..nx * ny)
            .into_par_iter()
            .map(|k| {
                let p = [lo[0] + (k % nx) as f64 * step, lo[1] + (k / nx) as f64 * step];
                (p, asymmetry_objective(region, p))
            })
            .collect();
        evaluations += lattice.len();
        lattice.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0[0].total_cmp(&b.0[0])).then(a.0[1].total_cmp(&b.0[1])));
        starts.extend(lattice.iter().take(opts.lattice_starts).map(|p| p.0));
    }

    let runs: Vec<_> = starts
        .par_iter()
        .map(|&s| {
            nelder_mead(|x| asymmetry_objective(region, x), s, r / 4.0, opts.center_tol * r, opts.max_evals_per_start)
        })
        .collect();
    evaluations += runs.iter().map(|r| r.evaluations).sum::<usize>();
    let best = runs
        .iter()
        .min_by(|a, b| a.value.total_cmp(&b.value).then(a.x[0].total_cmp(&b.x[0])).then(a.x[1].total_cmp(&b.x[1])))
        .expect("at least one start");
    Ok(AsymmetryResult { alpha: best.value.min(2.0), best_center: best.x, evaluations, converged: best.converged })
}

/// Asymmetry on the line, where balls are intervals.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LineAsymmetry {
    pub alpha: f64,
    pub best_center: f64,
}

/// Exact asymmetry of an interval union: the overlap with a sliding interval of equal length
/// is piecewise linear in the center, so its maximum sits where an end meets an endpoint.
pub fn fraenkel_line(set: &IntervalSet) -> Result<LineAsymmetry> {
    let len = set.measure();
    if !(len > 0.0) {
        return Err(Error::EmptyRegion);
    }
    let mut candidates: Vec<f64> = set
        .intervals()
        .iter()
        .flat_map(|&(a, b)| [a + len / 2.0, a - len / 2.0, b + len / 2.0, b - len / 2.0])
        .collect();
    candidates.sort_by(f64::total_cmp);
    let mut best = (f64::NEG_INFINITY, 0.0);
    for c in candidates {
        let o = set.overlap(c - len / 2.0, c + len / 2.0);
        if o > best.0 + 1e-15 * len {
            best = (o, c);
        }
    }
    Ok(LineAsymmetry { alpha: (2.0 * (1.0 - best.0 / len)).max(0.0), best_center: best.1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase_space::{GridSpec, Shape};

    #[test]
    fn disc_is_symmetric() {
        let spec = GridSpec::centered(1.1, 0.01).unwrap();
        let disc = Shape::ball([0.0, 0.0], 1.0).unwrap().rasterize(&spec).unwrap();
        let a = fraenkel(&disc).unwrap();
        assert!(a.alpha <= 0.02, "{a:?}");
        assert!(a.best_center[0].abs() < 0.01 && a.best_center[1].abs() < 0.01);
    }

    #[test]
    fn empty_region_rejected() {
        let spec = GridSpec::centered(1.0, 0.1).unwrap();
        assert!(matches!(fraenkel(&GridRegion::empty(spec)), Err(Error::EmptyRegion)));
    }

    #[test]
    fn square_asymmetry_is_small_but_positive() {
        let spec = GridSpec::centered(1.5, 0.02).unwrap();
        let sq = GridRegion::from_fn(spec, |p| p[0].abs() < 0.8 && p[1].abs() < 0.8);
        let a = fraenkel(&sq).unwrap();
        assert!(a.alpha > 0.1 && a.alpha < 0.3, "{a:?}");
    }

    #[test]
    fn line_asymmetry() {
        let one = IntervalSet::interval(2.0, 5.0).unwrap();
        let a = fraenkel_line(&one).unwrap();
        assert!(a.alpha.abs() < 1e-14 && (a.best_center - 3.5).abs() < 1e-14);
        let two = IntervalSet::new(vec![(0.0, 1.0), (10.0, 11.0)]).unwrap();
        assert!((fraenkel_line(&two).unwrap().alpha - 1.0).abs() < 1e-14);
        let uneven = IntervalSet::new(vec![(0.0, 3.0), (10.0, 11.0)]).unwrap();
        assert!((fraenkel_line(&uneven).unwrap().alpha - 0.5).abs() < 1e-14);
    }
}
