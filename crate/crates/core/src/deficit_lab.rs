//! Rearrangement deficits `‖L_{Ω*}‖²_HS - ‖L_Ω‖²_HS`, weight functions for their lower
//! bounds, the three sharpness families with exponent fits, and the indicator-kernel probe.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::asymmetry::{fraenkel, fraenkel_line};
use crate::error::{Error, Result};
use crate::hs_engine::{
    hs_norm_sq_grid, hs_norm_sq_radial, hs_norm_sq_shape, radial_pairing, shape_pairing, GridMethod, HsMethod,
    RadialOptions, Stencil,
};
use crate::numerics::{loglog_fit, LinearFit};
use crate::phase_space::{unit_ball_volume, GridRegion, GridSpec, IntervalSet, RadialRegion, Shape};
use crate::rearrange::{rearrange_region, riesz_functional, riesz_functional_line, RadialKernel};

/// Constants of the lower-bound weight `β`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BetaParams {
    pub d: usize,
    pub c1: f64,
    pub c2: f64,
    /// Multiply the large-measure branch by `e^{c2}` so that `β` is continuous at 1.
    pub continuous: bool,
}

/// `9π / (4 ω_{2d}^{1/d})`.
pub fn default_c2(d: usize) -> f64 {
    9.0 * PI / (4.0 * unit_ball_volume(2 * d).powf(1.0 / d as f64))
}

impl BetaParams {
    pub fn new(d: usize) -> Self {
        Self { d, c1: 1.0, c2: default_c2(d.max(1)), continuous: true }
    }

    fn validate(&self) -> Result<()> {
        if self.d == 0 {
            return Err(Error::InvalidParameter("d must be positive".into()));
        }
        if !(self.c1 > 0.0 && self.c2 > 0.0 && self.c1.is_finite() && self.c2.is_finite()) {
            return Err(Error::InvalidParameter("c1 and c2 must be positive".into()));
        }
        Ok(())
    }
}

/// `t^{2+1/d}` for `t <= 1`, `t² e^{-c2 t^{1/d}}` beyond (times `e^{c2}` when continuous).
pub fn beta(t: f64, params: &BetaParams) -> Result<f64> {
    params.validate()?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter(format!("β needs t > 0, got {t}")));
    }
    let d = params.d as f64;
    if t <= 1.0 {
        return Ok(t.powf(2.0 + 1.0 / d));
    }
    let shift = if params.continuous { params.c2 } else { 0.0 };
    Ok(t * t * (shift - params.c2 * t.powf(1.0 / d)).exp())
}

/// `t^{2+1/d}` for `t <= 1`, `t^{2-1/(2d)}` beyond.
pub fn beta_tilde(t: f64, d: usize) -> Result<f64> {
    if d == 0 {
        return Err(Error::InvalidParameter("d must be positive".into()));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter(format!("β̃ needs t > 0, got {t}")));
    }
    let d = d as f64;
    Ok(if t <= 1.0 { t.powf(2.0 + 1.0 / d) } else { t.powf(2.0 - 1.0 / (2.0 * d)) })
}

/// Where an asymmetry value came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaSource {
    /// Multi-start search on the rasterized set.
    Optimizer,
    /// Symmetric difference with the centered ball; an upper bound.
    CenteredBall,
    /// Exact value on the line.
    Exact,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DeficitReport {
    pub omega_measure: f64,
    pub hs_sq: f64,
    pub hs_sq_star: f64,
    pub deficit: f64,
    pub alpha: f64,
    pub alpha_source: AlphaSource,
    pub beta_value: f64,
    /// `deficit / (β α²)`, absent when `α = 0`.
    pub empirical_constant: Option<f64>,
    pub hs_method: HsMethod,
}

impl DeficitReport {
    #[allow(clippy::too_many_arguments)]
    fn assemble(
        measure: f64,
        hs_sq: f64,
        hs_sq_star: f64,
        alpha: f64,
        alpha_source: AlphaSource,
        params: &BetaParams,
        hs_method: HsMethod,
    ) -> Result<Self> {
        let beta_value = beta(measure, params)?;
        let deficit = hs_sq_star - hs_sq;
        let empirical_constant = (alpha > 0.0).then(|| deficit / (beta_value * alpha * alpha));
        Ok(Self {
            omega_measure: measure,
            hs_sq,
            hs_sq_star,
            deficit,
            alpha,
            alpha_source,
            beta_value,
            empirical_constant,
            hs_method,
        })
    }
}

/// A set whose deficit can be computed.
#[derive(Clone, Debug)]
pub enum Region {
    Grid(GridRegion),
    Radial(RadialRegion),
    Shape(Shape),
}

pub fn deficit(region: &Region, params: &BetaParams) -> Result<DeficitReport> {
    match region {
        Region::Grid(g) => deficit_grid(g, params),
        Region::Radial(r) => deficit_radial(r, params),
        Region::Shape(s) => deficit_shape(s, params),
    }
}

fn star_hs(n: usize, measure: f64) -> Result<f64> {
    let r = crate::rearrange::ball_radius_for_measure(n, measure);
    Ok(hs_norm_sq_radial(&RadialRegion::ball(n, r)?)?.hs_sq)
}

/// Deficit of a cell set; its norm is exact for the union of cells.
pub fn deficit_grid(region: &GridRegion, params: &BetaParams) -> Result<DeficitReport> {
    if params.d != 1 {
        return Err(Error::InvalidParameter("grid sets live in the plane (d = 1)".into()));
    }
    let m = region.measure();
    if !(m > 0.0) {
        return Err(Error::EmptyRegion);
    }
    let hs = hs_norm_sq_grid(&region.to_field(), GridMethod::Convolution, Stencil::CellAverage)?;
    let alpha = fraenkel(region)?.alpha;
    DeficitReport::assemble(m, hs.hs_sq, star_hs(2, m)?, alpha, AlphaSource::Optimizer, params, hs.method)
}

/// Deficit of an annulus union, with the centered-ball asymmetry bound.
pub fn deficit_radial(region: &RadialRegion, params: &BetaParams) -> Result<DeficitReport> {
    if region.d() != params.d {
        return Err(Error::InvalidParameter(format!("region has d = {}, parameters d = {}", region.d(), params.d)));
    }
    let m = region.measure();
    if !(m > 0.0) {
        return Err(Error::EmptyRegion);
    }
    let hs = hs_norm_sq_radial(region)?;
    let star = rearrange_region(region)?;
    let hs_star = hs_norm_sq_radial(&star)?.hs_sq;
    let alpha = centered_ball_asymmetry(region)?;
    DeficitReport::assemble(m, hs.hs_sq, hs_star, alpha, AlphaSource::CenteredBall, params, hs.method)
}

/// `|Ω △ Ω*| / |Ω|` for the centered ball `Ω*`.
pub fn centered_ball_asymmetry(region: &RadialRegion) -> Result<f64> {
    let star = rearrange_region(region)?.outer_radius();
    let n = region.dim() as i32;
    let inside: f64 = region.annuli().iter().map(|&(a, b)| (b.min(star).powi(n) - a.min(star).powi(n)).max(0.0)).sum();
    let overlap = unit_ball_volume(region.dim()) * inside;
    let m = region.measure();
    Ok((2.0 * m - 2.0 * overlap) / m)
}

/// Deficit of a planar shape through its Fourier transform; asymmetry by search on a raster.
pub fn deficit_shape(shape: &Shape, params: &BetaParams) -> Result<DeficitReport> {
    if params.d != 1 {
        return Err(Error::InvalidParameter("planar shapes need d = 1".into()));
    }
    let m = shape.measure();
    if !(m > 0.0) {
        return Err(Error::EmptyRegion);
    }
    let hs = hs_norm_sq_shape(shape)?;
    let r_star = (m / PI).sqrt();
    let (lo, hi) = shape.bounding_box().expect("nonempty shape");
    let h = r_star / 100.0;
    let spec = GridSpec::covering([lo[0] - r_star, lo[1] - r_star], [hi[0] + r_star, hi[1] + r_star], h)?;
    let alpha = fraenkel(&shape.rasterize(&spec)?)?.alpha;
    DeficitReport::assemble(m, hs.hs_sq, star_hs(2, m)?, alpha, AlphaSource::Optimizer, params, hs.method)
}

/// `δ` with `(1-ε)^{2d} + (1+δ)^{2d} - 1 = 1`.
pub fn delta_for_eps(eps: f64, d: usize) -> f64 {
    let n = 2.0 * d as f64;
    (2.0 - (1.0 - eps).powf(n)).powf(1.0 / n) - 1.0
}

/// `{|z| < 1-ε} ∪ {1 <= |z| < 1+δ}` with the same measure as the unit ball.
pub fn family_eps(eps: f64, d: usize) -> Result<RadialRegion> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!("ε = {eps} must lie in (0, 1)")));
    }
    if d == 0 {
        return Err(Error::InvalidParameter("d must be positive".into()));
    }
    RadialRegion::new(2 * d, vec![(0.0, 1.0 - eps), (1.0, 1.0 + delta_for_eps(eps, d))])
}

/// One row of a sweep table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub param: f64,
    pub measure: f64,
    pub hs_sq: f64,
    pub hs_sq_star: f64,
    pub deficit: f64,
    pub alpha: f64,
    pub beta: f64,
    pub empirical_constant: Option<f64>,
}

impl From<(f64, &DeficitReport)> for SweepRow {
    fn from((param, r): (f64, &DeficitReport)) -> Self {
        Self {
            param,
            measure: r.omega_measure,
            hs_sq: r.hs_sq,
            hs_sq_star: r.hs_sq_star,
            deficit: r.deficit,
            alpha: r.alpha,
            beta: r.beta_value,
            empirical_constant: r.empirical_constant,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepReport {
    pub family: String,
    /// Abscissa of the log-log fit: `"param"` or `"measure"`.
    pub abscissa: String,
    pub alpha_source: AlphaSource,
    pub rows: Vec<SweepRow>,
    pub fit: LinearFit,
}

fn require_points(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::DegenerateFit(format!("{n} sweep points; at least 3 are required")));
    }
    Ok(())
}

pub fn sweep_eps(eps: &[f64], d: usize) -> Result<SweepReport> {
    sweep_eps_with(eps, d, &RadialOptions::default())
}

/// Deficit of the ε-family by the radial route; slope of `log deficit` against `log ε`.
pub fn sweep_eps_with(eps: &[f64], d: usize, opts: &RadialOptions) -> Result<SweepReport> {
    require_points(eps.len())?;
    if let Some(e) = eps.iter().find(|e| !(**e > 0.0 && **e <= 0.3)) {
        return Err(Error::InvalidParameter(format!("ε = {e} must lie in (0, 0.3]")));
    }
    let params = BetaParams::new(d);
    let hs_star = {
        let b = RadialRegion::ball(2 * d, 1.0)?.signed_balls();
        radial_pairing(2 * d, &b, &b, opts)?.hs_sq
    };
    let rows = eps
        .par_iter()
        .map(|&e| {
            let region = family_eps(e, d)?;
            let balls = region.signed_balls();
            let hs = radial_pairing(2 * d, &balls, &balls, opts)?;
            let alpha = centered_ball_asymmetry(&region)?;
            let rep = DeficitReport::assemble(
                region.measure(),
                hs.hs_sq,
                hs_star,
                alpha,
                AlphaSource::CenteredBall,
                &params,
                hs.method,
            )?;
            Ok(SweepRow::from((e, &rep)))
        })
        .collect::<Result<Vec<_>>>()?;
    let x: Vec<f64> = rows.iter().map(|r| r.param).collect();
    let y: Vec<f64> = rows.iter().map(|r| r.deficit).collect();
    let fit = loglog_fit(&x, &y)?;
    Ok(SweepReport { family: "eps".into(), abscissa: "param".into(), alpha_source: AlphaSource::CenteredBall, rows, fit })
}

/// Two discs of radius 0.2 centered at `(±0.3, 0)`.
pub fn default_dilate_base() -> Shape {
    Shape::two_discs(0.2, 0.6).expect("valid constant shape")
}

#[derive(Clone, Copy, Debug)]
pub struct GridSweepOptions {
    /// Cell size is the dilation factor divided by this.
    pub cells_per_unit: f64,
    /// Largest grid (cells in the bounding box) a single point may use.
    pub cell_budget: usize,
}

impl GridSweepOptions {
    pub fn dilate() -> Self {
        Self { cells_per_unit: 120.0, cell_budget: 4_000_000 }
    }

    pub fn dumbbell() -> Self {
        Self { cells_per_unit: 60.0, cell_budget: 4_000_000 }
    }
}

fn is_ball(shape: &Shape) -> bool {
    matches!(shape.pieces(), [p] if p.region.annuli().len() == 1 && p.region.annuli()[0].0 == 0.0)
}

/// Grid deficit of a shape at cell size `h`: exact coverage fractions, cell-averaged stencil,
/// and the asymmetry of the cell-center raster.
fn grid_point(shape: &Shape, h: f64, budget: usize, stencil: Stencil) -> Result<DeficitReport> {
    let (lo, hi) = shape.bounding_box().ok_or(Error::EmptyRegion)?;
    let pad = 2.0 * h;
    let spec = GridSpec::covering([lo[0] - pad, lo[1] - pad], [hi[0] + pad, hi[1] + pad], h)?;
    if spec.len() > budget {
        return Err(Error::CellCapExceeded { cells: spec.len(), cap: budget });
    }
    let field = shape.coverage(&spec)?;
    let m = shape.measure();
    let hs = hs_norm_sq_grid(&field, GridMethod::Convolution, stencil)?;
    let alpha = fraenkel(&shape.rasterize(&spec)?)?.alpha;
    DeficitReport::assemble(m, hs.hs_sq, star_hs(2, m)?, alpha, AlphaSource::Optimizer, &BetaParams::new(1), hs.method)
}

/// Deficits of dilates `r Ω₀` in the plane; slope of `log deficit` against `log |rΩ₀|`.
pub fn sweep_dilate(base: &Shape, factors: &[f64], opts: &GridSweepOptions) -> Result<SweepReport> {
    require_points(factors.len())?;
    if is_ball(base) {
        return Err(Error::DegenerateFit("the base shape is a ball, so every deficit vanishes".into()));
    }
    if let Some(r) = factors.iter().find(|r| !(**r > 0.0 && **r <= 1.0)) {
        return Err(Error::InvalidParameter(format!("dilation factor {r} must lie in (0, 1]")));
    }
    let rows = factors
        .par_iter()
        .map(|&r| {
            let shape = base.scaled(r)?;
            let rep = grid_point(&shape, r / opts.cells_per_unit, opts.cell_budget, Stencil::CellAverage)?;
            Ok(SweepRow::from((r, &rep)))
        })
        .collect::<Result<Vec<_>>>()?;
    let x: Vec<f64> = rows.iter().map(|r| r.measure).collect();
    let y: Vec<f64> = rows.iter().map(|r| r.deficit).collect();
    let fit = loglog_fit(&x, &y)?;
    Ok(SweepReport { family: "dilate".into(), abscissa: "measure".into(), alpha_source: AlphaSource::Optimizer, rows, fit })
}

/// Annulus `r/3 <= |z| < r` plus the disc `|z - (2r, 0)| < r/3`.
pub fn dumbbell_shape(r: f64) -> Result<Shape> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidParameter(format!("r = {r} must be positive")));
    }
    Shape::union([
        Shape::radial([0.0, 0.0], RadialRegion::new(2, vec![(r / 3.0, r)])?)?,
        Shape::ball([2.0 * r, 0.0], r / 3.0)?,
    ])
}

/// The dumbbell rasterized on `spec`.
pub fn family_dumbbell(r: f64, spec: &GridSpec) -> Result<GridRegion> {
    dumbbell_shape(r)?.rasterize(spec)
}

/// Deficits of the dumbbell family on grids with `h = r / cells_per_unit`;
/// slope of `log deficit` against `log |Ω_r|`.
pub fn sweep_dumbbell(radii: &[f64], opts: &GridSweepOptions) -> Result<SweepReport> {
    require_points(radii.len())?;
    if let Some(r) = radii.iter().find(|r| !(**r >= 2.0 && r.is_finite())) {
        return Err(Error::InvalidParameter(format!("dumbbell radius {r} must be at least 2")));
    }
    let rows = radii
        .par_iter()
        .map(|&r| {
            let rep = grid_point(&dumbbell_shape(r)?, r / opts.cells_per_unit, opts.cell_budget, Stencil::Point)?;
            Ok(SweepRow::from((r, &rep)))
        })
        .collect::<Result<Vec<_>>>()?;
    let x: Vec<f64> = rows.iter().map(|r| r.measure).collect();
    let y: Vec<f64> = rows.iter().map(|r| r.deficit).collect();
    let fit = loglog_fit(&x, &y)?;
    Ok(SweepReport { family: "dumbbell".into(), abscissa: "measure".into(), alpha_source: AlphaSource::Optimizer, rows, fit })
}

/// Terms of the dumbbell deficit identity, all by Fourier-side quadrature.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DumbbellChain {
    pub r: f64,
    pub deficit: f64,
    /// `2 ∬ χ_{annulus}(z) e^{-π|z-w|²} χ_{B_{r/3}}(w)`.
    pub inner_interaction: f64,
    /// `2 ∬ χ_{annulus}(z) e^{-π|z-w|²} χ_{far disc}(w)`.
    pub far_interaction: f64,
    /// Sum of the quadrature error estimates of all terms.
    pub tolerance: f64,
}

impl DumbbellChain {
    /// Whether `deficit <= inner_interaction` up to the quadrature tolerance.
    pub fn bound_holds(&self) -> bool {
        self.deficit <= self.inner_interaction + self.tolerance
    }
}

pub fn dumbbell_chain(r: f64) -> Result<DumbbellChain> {
    let shape = dumbbell_shape(r)?;
    let hs = hs_norm_sq_shape(&shape)?;
    let star = hs_norm_sq_radial(&RadialRegion::ball(2, r)?)?;
    let annulus = RadialRegion::new(2, vec![(r / 3.0, r)])?.signed_balls();
    let core = RadialRegion::ball(2, r / 3.0)?.signed_balls();
    let inner = radial_pairing(2, &annulus, &core, &RadialOptions::default())?;
    let far = shape_pairing(
        &Shape::radial([0.0, 0.0], RadialRegion::new(2, vec![(r / 3.0, r)])?)?,
        &Shape::ball([2.0 * r, 0.0], r / 3.0)?,
    )?;
    let tolerance = hs.estimated_error + star.estimated_error + 2.0 * (inner.estimated_error + far.estimated_error)
        + 1e-12 * star.hs_sq;
    Ok(DumbbellChain {
        r,
        deficit: star.hs_sq - hs.hs_sq,
        inner_interaction: 2.0 * inner.hs_sq,
        far_interaction: 2.0 * far.hs_sq,
        tolerance,
    })
}

/// `∬_{Ω×Ω} χ(|x-y| < b)` for an interval union.
pub fn indicator_autocorrelation_line(set: &IntervalSet, b: f64) -> Result<f64> {
    if !(b > 0.0) {
        return Err(Error::InvalidParameter(format!("ball radius {b} must be positive")));
    }
    riesz_functional_line(set, &RadialKernel::indicator(b), set)
}

/// `∬_{Ω×Ω} χ(|x-y| < b)` for a cell set, counting cell-center pairs.
pub fn indicator_autocorrelation_grid(region: &GridRegion, b: f64) -> Result<f64> {
    if !(b > 0.0) {
        return Err(Error::InvalidParameter(format!("ball radius {b} must be positive")));
    }
    let f = region.to_field();
    riesz_functional(&f, &RadialKernel::indicator(b), &f)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProbeReport {
    pub b: f64,
    pub omega_measure: f64,
    pub autocorrelation: f64,
    pub autocorrelation_star: f64,
    /// `½T(Ω*) - ½T(Ω)`.
    pub lhs_deficit: f64,
    pub alpha: f64,
    /// `(|B|/|Ω|)^{1+1/d} |Ω|² α²`.
    pub rhs_scale: f64,
    /// `lhs / rhs`, absent when `α = 0`.
    pub ratio: Option<f64>,
}

fn check_ball_size(ball_measure: f64, measure: f64, d: f64, delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!("δ = {delta} must lie in (0, 1)")));
    }
    let size = ball_measure.powf(1.0 / d) / (2.0 * measure.powf(1.0 / d));
    if size > 1.0 - delta {
        return Err(Error::ConstraintViolation(format!("|B|^(1/d) / (2|Ω|^(1/d)) = {size} exceeds 1 - δ = {}", 1.0 - delta)));
    }
    Ok(())
}

/// Indicator-kernel deficit on the line against its conjectured scale.
pub fn conjecture2_probe_line(set: &IntervalSet, b: f64, delta: f64) -> Result<ProbeReport> {
    let m = set.measure();
    if !(m > 0.0) {
        return Err(Error::EmptyRegion);
    }
    check_ball_size(2.0 * b, m, 1.0, delta)?;
    let t = indicator_autocorrelation_line(set, b)?;
    let ts = indicator_autocorrelation_line(&set.rearranged()?, b)?;
    let alpha = fraenkel_line(set)?.alpha;
    let rhs = (2.0 * b / m).powi(2) * m * m * alpha * alpha;
    let lhs = 0.5 * (ts - t);
    Ok(ProbeReport {
        b,
        omega_measure: m,
        autocorrelation: t,
        autocorrelation_star: ts,
        lhs_deficit: lhs,
        alpha,
        rhs_scale: rhs,
        ratio: (alpha > 0.0).then(|| lhs / rhs),
    })
}

/// Indicator-kernel deficit for a planar cell set; the rearranged set is the same number of
/// cells nearest the region's centroid.
pub fn conjecture2_probe_grid(region: &GridRegion, b: f64, delta: f64) -> Result<ProbeReport> {
    let m = region.measure();
    if !(m > 0.0) {
        return Err(Error::EmptyRegion);
    }
    check_ball_size(PI * b * b, m, 2.0, delta)?;
    let t = indicator_autocorrelation_grid(region, b)?;
    let c = region.centroid().expect("nonempty region");
    let spec = region.spec();
    let lattice = [
        spec.origin[0] + ((c[0] - spec.origin[0]) / spec.h).floor() * spec.h + spec.h / 2.0,
        spec.origin[1] + ((c[1] - spec.origin[1]) / spec.h).floor() * spec.h + spec.h / 2.0,
    ];
    let ts = indicator_autocorrelation_grid(&region.nearest_cells(lattice)?, b)?;
    let alpha = fraenkel(region)?.alpha;
    let rhs = (PI * b * b / m).powf(1.5) * m * m * alpha * alpha;
    let lhs = 0.5 * (ts - t);
    Ok(ProbeReport {
        b,
        omega_measure: m,
        autocorrelation: t,
        autocorrelation_star: ts,
        lhs_deficit: lhs,
        alpha,
        rhs_scale: rhs,
        ratio: (alpha > 0.0).then(|| lhs / rhs),
    })
}

/// Probe over several ball radii for one interval union; slope of `log lhs` against `log b`.
pub fn sweep_probe_line(set: &IntervalSet, radii: &[f64], delta: f64) -> Result<SweepReport> {
    require_points(radii.len())?;
    let reports = radii.iter().map(|&b| conjecture2_probe_line(set, b, delta)).collect::<Result<Vec<_>>>()?;
    let rows: Vec<SweepRow> = reports
        .iter()
        .map(|p| SweepRow {
            param: p.b,
            measure: p.omega_measure,
            hs_sq: p.autocorrelation,
            hs_sq_star: p.autocorrelation_star,
            deficit: p.lhs_deficit,
            alpha: p.alpha,
            beta: p.rhs_scale,
            empirical_constant: p.ratio,
        })
        .collect();
    let x: Vec<f64> = rows.iter().map(|r| r.param).collect();
    let y: Vec<f64> = rows.iter().map(|r| r.deficit).collect();
    let fit = loglog_fit(&x, &y)?;
    Ok(SweepReport { family: "conj2".into(), abscissa: "param".into(), alpha_source: AlphaSource::Exact, rows, fit })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn beta_examples() {
        let p = BetaParams::new(1);
        assert_relative_eq!(p.c2, 2.25, epsilon = 1e-14);
        assert_relative_eq!(beta(0.5, &p).unwrap(), 0.125, epsilon = 1e-15);
        assert_relative_eq!(beta(1.0, &p).unwrap(), 1.0, epsilon = 1e-15);
        let raw = BetaParams { continuous: false, ..p };
        assert_relative_eq!(beta(4.0, &raw).unwrap(), 16.0 * (-4.0 * p.c2).exp(), max_relative = 1e-14);
        assert_relative_eq!(beta(4.0, &p).unwrap(), 16.0 * (-3.0 * p.c2).exp(), max_relative = 1e-14);
        assert_relative_eq!(beta(1.0 + 1e-12, &p).unwrap(), 1.0, epsilon = 1e-10);
        assert!(beta(0.0, &p).is_err());
        assert!(beta(-1.0, &p).is_err());
    }

    #[test]
    fn beta_tilde_examples() {
        assert_relative_eq!(beta_tilde(4.0, 1).unwrap(), 8.0, epsilon = 1e-14);
        assert_relative_eq!(beta_tilde(1.0, 1).unwrap(), 1.0, epsilon = 1e-15);
        assert_relative_eq!(beta_tilde(0.5, 1).unwrap(), 0.125, epsilon = 1e-15);
        assert!(beta_tilde(0.0, 1).is_err());
    }

    #[test]
    fn eps_family() {
        assert_relative_eq!(delta_for_eps(0.1, 1), (2.0f64 - 0.81).sqrt() - 1.0, epsilon = 1e-15);
        assert_relative_eq!(delta_for_eps(0.1, 1), 0.0908712, epsilon = 1e-7);
        for (e, d) in [(0.05, 1), (0.2, 1), (0.1, 2)] {
            let r = family_eps(e, d).unwrap();
            assert_relative_eq!(r.measure(), unit_ball_volume(2 * d), max_relative = 1e-14);
            assert_relative_eq!(rearrange_region(&r).unwrap().outer_radius(), 1.0, max_relative = 1e-14);
        }
        assert!((delta_for_eps(1e-3, 1) / 1e-3 - 1.0).abs() < 1e-2);
        assert!(family_eps(0.0, 1).is_err());
    }

    #[test]
    fn eps_deficit_positive_and_ball_zero() {
        let p = BetaParams::new(1);
        let r = deficit_radial(&family_eps(0.1, 1).unwrap(), &p).unwrap();
        assert!(r.deficit > 0.0 && r.alpha > 0.0);
        let b = deficit_radial(&RadialRegion::ball(2, 1.3).unwrap(), &p).unwrap();
        assert!(b.deficit.abs() < 1e-12 * b.hs_sq_star && b.alpha == 0.0);
        assert!(b.empirical_constant.is_none());
    }

    #[test]
    fn sweep_requires_three_points() {
        assert!(matches!(sweep_eps(&[0.1], 1), Err(Error::DegenerateFit(_))));
        assert!(matches!(sweep_eps(&[0.1, 0.2, 0.4], 1), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn dumbbell_geometry() {
        let r = 2.0;
        let s = dumbbell_shape(r).unwrap();
        assert_relative_eq!(s.measure(), PI * r * r, max_relative = 1e-14);
        let spec = GridSpec::covering([-r - 0.1, -r - 0.1], [2.0 * r + r / 3.0 + 0.1, r + 0.1], r / 60.0).unwrap();
        let g = family_dumbbell(r, &spec).unwrap();
        assert_relative_eq!(g.measure(), PI * r * r, max_relative = 0.01);
        assert_eq!(g.components().len(), 2);
        let small = GridSpec::centered(r, 0.1).unwrap();
        assert!(matches!(family_dumbbell(r, &small), Err(Error::ShapeExceedsGrid)));
    }

    #[test]
    fn dumbbell_chain_terms() {
        let c = dumbbell_chain(2.0).unwrap();
        assert!(c.deficit > 0.0);
        assert!(c.bound_holds(), "{c:?}");
        assert_relative_eq!(c.deficit, c.inner_interaction - c.far_interaction, max_relative = 1e-9);
    }

    #[test]
    fn line_autocorrelation() {
        let s = IntervalSet::interval(0.0, 2.0).unwrap();
        assert_relative_eq!(indicator_autocorrelation_line(&s, 0.5).unwrap(), 1.75, epsilon = 1e-12);
        assert_relative_eq!(indicator_autocorrelation_line(&s, 10.0).unwrap(), 4.0, epsilon = 1e-12);
    }

    #[test]
    fn probe_on_interval_and_pair() {
        let one = IntervalSet::interval(0.0, 2.0).unwrap();
        let p = conjecture2_probe_line(&one, 0.3, 0.1).unwrap();
        assert!(p.lhs_deficit.abs() < 1e-12 && p.alpha.abs() < 1e-14 && p.ratio.is_none());
        let two = IntervalSet::new(vec![(0.0, 1.0), (5.0, 6.0)]).unwrap();
        let q = conjecture2_probe_line(&two, 0.2, 0.1).unwrap();
        assert!(q.ratio.unwrap() > 0.0);
        assert!(matches!(conjecture2_probe_line(&two, 2.5, 0.1), Err(Error::ConstraintViolation(_))));
    }

    #[test]
    fn grid_deficit_of_square() {
        let spec = GridSpec::centered(1.0, 0.05).unwrap();
        let sq = GridRegion::from_fn(spec, |p| p[0].abs() < 0.5 && p[1].abs() < 0.5);
        let r = deficit_grid(&sq, &BetaParams::new(1)).unwrap();
        assert!(r.deficit > 0.0 && r.alpha > 0.0 && r.empirical_constant.unwrap() > 0.0);
    }
}
