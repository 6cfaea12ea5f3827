use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{GridField, GridRegion, GridSpec, RadialRegion};
use crate::error::{Error, Result};

/// A radial region translated to `center` (plane only).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub center: [f64; 2],
    pub region: RadialRegion,
}

/// Disjoint union of translated radial pieces in the plane: discs, annuli, dumbbells.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Shape {
    pieces: Vec<Piece>,
}

impl Shape {
    pub fn ball(center: [f64; 2], radius: f64) -> Result<Self> {
        if !(radius >= 0.0 && radius.is_finite()) {
            return Err(Error::InvalidParameter(format!("ball radius {radius}")));
        }
        Self::radial(center, RadialRegion::ball(2, radius)?)
    }

    pub fn radial(center: [f64; 2], region: RadialRegion) -> Result<Self> {
        if region.dim() != 2 {
            return Err(Error::InvalidRegion("planar shapes need two-dimensional pieces".into()));
        }
        if !(center[0].is_finite() && center[1].is_finite()) {
            return Err(Error::InvalidParameter("non-finite center".into()));
        }
        let pieces = if region.is_empty() { Vec::new() } else { vec![Piece { center, region }] };
        Ok(Self { pieces })
    }

    /// Union of shapes whose pieces must be pairwise disjoint.
    pub fn union(shapes: impl IntoIterator<Item = Shape>) -> Result<Self> {
        let mut pieces: Vec<Piece> = Vec::new();
        for p in shapes.into_iter().flat_map(|s| s.pieces) {
            if let Some(q) = pieces.iter_mut().find(|q| q.center == p.center) {
                let mut annuli = q.region.annuli().to_vec();
                annuli.extend_from_slice(p.region.annuli());
                annuli.sort_by(|a, b| a.0.total_cmp(&b.0));
                q.region = RadialRegion::new(2, annuli)?;
                continue;
            }
            for q in &pieces {
                let gap = dist(p.center, q.center) - p.region.outer_radius() - q.region.outer_radius();
                if gap < 0.0 {
                    return Err(Error::InvalidRegion("shape pieces overlap".into()));
                }
            }
            pieces.push(p);
        }
        Ok(Self { pieces })
    }

    /// Two equal discs of the given radius centered at `(-separation/2, 0)` and `(separation/2, 0)`.
    pub fn two_discs(radius: f64, separation: f64) -> Result<Self> {
        Self::union([
            Self::ball([-separation / 2.0, 0.0], radius)?,
            Self::ball([separation / 2.0, 0.0], radius)?,
        ])
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn measure(&self) -> f64 {
        self.pieces.iter().map(|p| p.region.measure()).sum()
    }

    pub fn contains(&self, p: [f64; 2]) -> bool {
        self.pieces.iter().any(|q| q.region.contains_radius(dist(p, q.center)))
    }

    pub fn bounding_box(&self) -> Option<([f64; 2], [f64; 2])> {
        let mut it = self.pieces.iter().map(|p| {
            let r = p.region.outer_radius();
            ([p.center[0] - r, p.center[1] - r], [p.center[0] + r, p.center[1] + r])
        });
        let first = it.next()?;
        Some(it.fold(first, |(lo, hi), (a, b)| {
            ([lo[0].min(a[0]), lo[1].min(a[1])], [hi[0].max(b[0]), hi[1].max(b[1])])
        }))
    }

    /// Dilation about the origin.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let pieces = self
            .pieces
            .iter()
            .map(|p| {
                Ok(Piece {
                    center: [p.center[0] * factor, p.center[1] * factor],
                    region: p.region.scaled(factor)?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Self { pieces })
    }

    pub fn translated(&self, v: [f64; 2]) -> Self {
        let pieces = self
            .pieces
            .iter()
            .map(|p| Piece { center: [p.center[0] + v[0], p.center[1] + v[1]], region: p.region.clone() })
            .collect();
        Self { pieces }
    }

    fn check_fits(&self, spec: &GridSpec) -> Result<()> {
        match self.bounding_box() {
            Some((lo, hi)) if !spec.contains_box(lo, hi) => Err(Error::ShapeExceedsGrid),
            _ => Ok(()),
        }
    }

    /// Cells whose centers lie in the shape.
    pub fn rasterize(&self, spec: &GridSpec) -> Result<GridRegion> {
        self.check_fits(spec)?;
        let mut mask = vec![false; spec.len()];
        for p in &self.pieces {
            let r = p.region.outer_radius();
            for k in cells_near(spec, p.center, r) {
                if p.region.contains_radius(dist(spec.center_of(k), p.center)) {
                    mask[k] = true;
                }
            }
        }
        GridRegion::new(*spec, mask)
    }

    /// Exact fraction of each cell covered by the shape.
    pub fn coverage(&self, spec: &GridSpec) -> Result<GridField> {
        self.check_fits(spec)?;
        let mut values = vec![0.0; spec.len()];
        let h = spec.h;
        for p in &self.pieces {
            let balls = p.region.signed_balls();
            for k in cells_near(spec, p.center, p.region.outer_radius()) {
                let lo = spec.center_of(k);
                let (x0, y0) = (lo[0] - h / 2.0, lo[1] - h / 2.0);
                let area: f64 = balls
                    .iter()
                    .map(|&(r, w)| w * disc_rect_area(p.center, r, [x0, x0 + h], [y0, y0 + h]))
                    .sum();
                values[k] += area / (h * h);
            }
        }
        GridField::new(*spec, values.into_iter().map(|v| Complex64::new(v.clamp(0.0, 1.0), 0.0)).collect())
    }
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Indices of cells meeting the axis box of the disc `B(center, r)`.
pub(crate) fn cells_near(spec: &GridSpec, center: [f64; 2], r: f64) -> impl Iterator<Item = usize> + '_ {
    let h = spec.h;
    let clamp = |v: f64, n: usize| (v.floor().max(0.0) as usize).min(n.saturating_sub(1));
    let i0 = clamp((center[0] - r - spec.origin[0]) / h, spec.nx);
    let i1 = clamp((center[0] + r - spec.origin[0]) / h, spec.nx);
    let j0 = clamp((center[1] - r - spec.origin[1]) / h, spec.ny);
    let j1 = clamp((center[1] + r - spec.origin[1]) / h, spec.ny);
    (j0..=j1).flat_map(move |j| (i0..=i1).map(move |i| spec.index(i, j)))
}

/// Area of `B(center, r) ∩ [x0, x1] x [y0, y1]`.
pub fn disc_rect_area(center: [f64; 2], r: f64, x: [f64; 2], y: [f64; 2]) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    let (x0, x1) = (x[0] - center[0], x[1] - center[0]);
    let (y0, y1) = (y[0] - center[1], y[1] - center[1]);
    let near_x = if x0 > 0.0 { x0 } else if x1 < 0.0 { -x1 } else { 0.0 };
    let near_y = if y0 > 0.0 { y0 } else if y1 < 0.0 { -y1 } else { 0.0 };
    if near_x * near_x + near_y * near_y >= r * r {
        return 0.0;
    }
    let far_x = x0.abs().max(x1.abs());
    let far_y = y0.abs().max(y1.abs());
    if far_x * far_x + far_y * far_y <= r * r {
        return (x1 - x0) * (y1 - y0);
    }
    let a = corner_area(x1, y1, r) - corner_area(x0, y1, r) - corner_area(x1, y0, r) + corner_area(x0, y0, r);
    a.max(0.0)
}

// Signed area of the disc of radius r inside the rectangle spanned by the origin and (x, y).
fn corner_area(x: f64, y: f64, r: f64) -> f64 {
    let s = x.signum() * y.signum();
    let (x, y) = (x.abs().min(r), y.abs().min(r));
    if x * x + y * y <= r * r {
        return s * x * y;
    }
    let prim = |u: f64| 0.5 * (u * (r * r - u * u).max(0.0).sqrt() + r * r * (u / r).clamp(-1.0, 1.0).asin());
    let t = (r * r - y * y).max(0.0).sqrt();
    s * (t * y + prim(x) - prim(t))
}

/// Area of the overlap between the cells of `region` and the disc `B(center, r)`.
pub(crate) fn ball_overlap(region: &GridRegion, center: [f64; 2], r: f64) -> f64 {
    let spec = region.spec();
    let h = spec.h;
    cells_near(spec, center, r)
        .filter(|&k| region.contains_cell(k))
        .map(|k| {
            let c = spec.center_of(k);
            disc_rect_area(center, r, [c[0] - h / 2.0, c[0] + h / 2.0], [c[1] - h / 2.0, c[1] + h / 2.0])
        })
        .sum()
}

/// Measure of `A △ B(center, r)`, with the ball's intersection with each cell computed exactly.
pub fn symm_diff_measure(region: &GridRegion, center: [f64; 2], r: f64) -> Result<f64> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::InvalidParameter(format!("ball radius {r}")));
    }
    if !region.spec().contains_box([center[0] - r, center[1] - r], [center[0] + r, center[1] + r]) {
        return Err(Error::BallOutsideGrid);
    }
    let overlap = ball_overlap(region, center, r);
    Ok((region.measure() + PI * r * r - 2.0 * overlap).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn disc_rect_area_cases() {
        let c = [0.0, 0.0];
        assert_relative_eq!(disc_rect_area(c, 1.0, [-2.0, 2.0], [-2.0, 2.0]), PI, epsilon = 1e-14);
        assert_relative_eq!(disc_rect_area(c, 1.0, [0.0, 2.0], [0.0, 2.0]), PI / 4.0, epsilon = 1e-14);
        assert_relative_eq!(disc_rect_area(c, 1.0, [-2.0, 2.0], [0.0, 5.0]), PI / 2.0, epsilon = 1e-14);
        // circular segment beyond x = 0.5: r^2 acos(d/r) - d sqrt(r^2 - d^2)
        let seg = (0.5f64).acos() - 0.5 * (0.75f64).sqrt();
        assert_relative_eq!(disc_rect_area(c, 1.0, [0.5, 3.0], [-3.0, 3.0]), seg, epsilon = 1e-14);
        assert_eq!(disc_rect_area(c, 1.0, [1.0, 2.0], [1.0, 2.0]), 0.0);
        assert_relative_eq!(disc_rect_area([5.0, 5.0], 0.1, [4.0, 6.0], [4.0, 6.0]), 0.01 * PI, epsilon = 1e-14);
    }

    #[test]
    fn coverage_sums_to_exact_area() {
        let spec = GridSpec::centered(2.2, 0.037).unwrap();
        let s = Shape::radial([0.013, -0.02], RadialRegion::new(2, vec![(0.0, 0.5), (1.0, 2.0)]).unwrap())
            .unwrap();
        let f = s.coverage(&spec).unwrap();
        let total: f64 = f.values().iter().map(|v| v.re).sum::<f64>() * spec.cell_area();
        assert_relative_eq!(total, s.measure(), epsilon = 1e-11);
    }

    #[test]
    fn rasterized_measures_converge() {
        let disc = Shape::ball([0.0, 0.0], 1.0).unwrap();
        let m = disc.rasterize(&GridSpec::centered(1.2, 0.01).unwrap()).unwrap().measure();
        assert!((m - PI).abs() < 0.01 * PI);
        let ann = Shape::radial([0.0, 0.0], RadialRegion::new(2, vec![(1.0, 2.0)]).unwrap()).unwrap();
        let m = ann.rasterize(&GridSpec::centered(2.2, 0.02).unwrap()).unwrap().measure();
        assert!((m - 3.0 * PI).abs() < 0.01 * 3.0 * PI);
        let empty = Shape::ball([0.0, 0.0], 0.0).unwrap();
        assert!(empty.rasterize(&GridSpec::centered(1.0, 0.1).unwrap()).unwrap().is_empty());
    }

    #[test]
    fn rasterize_error_rate_is_linear() {
        let disc = Shape::ball([0.0, 0.0], 1.0).unwrap();
        for h in [0.1, 0.05, 0.025] {
            let m = disc.rasterize(&GridSpec::centered(1.2, h).unwrap()).unwrap().measure();
            assert!((m - PI).abs() <= 2.0 * PI * h, "h = {h}: {m}");
        }
    }

    #[test]
    fn shape_must_fit() {
        let disc = Shape::ball([0.0, 0.0], 1.0).unwrap();
        let spec = GridSpec::centered(0.5, 0.1).unwrap();
        assert!(matches!(disc.rasterize(&spec), Err(Error::ShapeExceedsGrid)));
    }

    #[test]
    fn overlapping_pieces_rejected() {
        let a = Shape::ball([0.0, 0.0], 1.0).unwrap();
        let b = Shape::ball([1.5, 0.0], 1.0).unwrap();
        assert!(Shape::union([a, b]).is_err());
    }

    #[test]
    fn symmetric_difference_examples() {
        let spec = GridSpec::covering([-1.5, -1.5], [11.2, 1.5], 0.01).unwrap();
        let disc = Shape::ball([0.0, 0.0], 1.0).unwrap().rasterize(&spec).unwrap();
        let same = symm_diff_measure(&disc, [0.0, 0.0], 1.0).unwrap();
        assert!(same < 10.0 * 0.01);
        let far = symm_diff_measure(&disc, [10.0, 0.0], 1.0).unwrap();
        assert_relative_eq!(far, 2.0 * PI, max_relative = 0.01);
        let bigger = symm_diff_measure(&disc, [0.0, 0.0], 2f64.sqrt()).unwrap();
        assert_relative_eq!(bigger, PI, max_relative = 0.01);
        assert!(matches!(symm_diff_measure(&disc, [20.0, 0.0], 1.0), Err(Error::BallOutsideGrid)));
    }

    #[test]
    fn symmetric_difference_matches_cell_count() {
        let spec = GridSpec::centered(2.0, 0.02).unwrap();
        let a = GridRegion::from_fn(spec, |p| p[0].abs() < 0.7 && p[1].abs() < 0.4);
        let (c, r) = ([0.2, -0.1], 0.6);
        let exact = symm_diff_measure(&a, c, r).unwrap();
        let fine = GridSpec::centered(2.0, 0.002).unwrap();
        let count = (0..fine.len())
            .filter(|&k| {
                let p = fine.center_of(k);
                let in_a = spec.locate(p).is_some_and(|(i, j)| a.contains_cell(spec.index(i, j)));
                let in_b = dist(p, c) < r;
                in_a != in_b
            })
            .count();
        assert_relative_eq!(exact, count as f64 * fine.cell_area(), max_relative = 0.01);
    }
}
