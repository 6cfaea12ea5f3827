use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform planar grid. Cell `(i, j)` covers
/// `[ox + i h, ox + (i+1) h) x [oy + j h, oy + (j+1) h)`; storage is row-major with `i` fastest.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub origin: [f64; 2],
    pub h: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn new(origin: [f64; 2], h: f64, nx: usize, ny: usize) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidGrid(format!("cell size {h} must be positive and finite")));
        }
        if nx == 0 || ny == 0 {
            return Err(Error::InvalidGrid(format!("{nx} x {ny} grid has no cells")));
        }
        if !(origin[0].is_finite() && origin[1].is_finite()) {
            return Err(Error::InvalidGrid("origin must be finite".into()));
        }
        nx.checked_mul(ny).ok_or_else(|| Error::InvalidGrid("cell count overflows".into()))?;
        Ok(Self { origin, h, nx, ny })
    }

    /// Smallest grid whose cell centers sit on the lattice `h Z^2` and whose box covers `[min, max]`.
    pub fn covering(min: [f64; 2], max: [f64; 2], h: f64) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidGrid(format!("cell size {h} must be positive and finite")));
        }
        if !(min[0] <= max[0] && min[1] <= max[1]) {
            return Err(Error::InvalidGrid("empty bounding box".into()));
        }
        let lo = |v: f64| (v / h + 0.5).floor() as i64;
        let hi = |v: f64| (v / h - 0.5).ceil() as i64;
        let (kx0, kx1) = (lo(min[0]), hi(max[0]).max(lo(min[0])));
        let (ky0, ky1) = (lo(min[1]), hi(max[1]).max(lo(min[1])));
        Self::new(
            [(kx0 as f64 - 0.5) * h, (ky0 as f64 - 0.5) * h],
            h,
            (kx1 - kx0 + 1) as usize,
            (ky1 - ky0 + 1) as usize,
        )
    }

    /// Grid covering `[-half_width, half_width]^2` with a cell centered at the origin.
    pub fn centered(half_width: f64, h: f64) -> Result<Self> {
        Self::covering([-half_width, -half_width], [half_width, half_width], h)
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cell_area(&self) -> f64 {
        self.h * self.h
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn cell(&self, index: usize) -> (usize, usize) {
        (index % self.nx, index / self.nx)
    }

    pub fn center(&self, i: usize, j: usize) -> [f64; 2] {
        [self.origin[0] + (i as f64 + 0.5) * self.h, self.origin[1] + (j as f64 + 0.5) * self.h]
    }

    pub fn center_of(&self, index: usize) -> [f64; 2] {
        let (i, j) = self.cell(index);
        self.center(i, j)
    }

    pub fn box_min(&self) -> [f64; 2] {
        self.origin
    }

    pub fn box_max(&self) -> [f64; 2] {
        [self.origin[0] + self.nx as f64 * self.h, self.origin[1] + self.ny as f64 * self.h]
    }

    /// Whether the axis box `[min, max]` lies inside the grid box (with a rounding allowance).
    pub fn contains_box(&self, min: [f64; 2], max: [f64; 2]) -> bool {
        let slack = 1e-9 * self.h;
        let (lo, hi) = (self.box_min(), self.box_max());
        min[0] >= lo[0] - slack && min[1] >= lo[1] - slack && max[0] <= hi[0] + slack && max[1] <= hi[1] + slack
    }

    /// Index of the cell containing `p`, if inside the box.
    pub fn locate(&self, p: [f64; 2]) -> Option<(usize, usize)> {
        let fx = (p[0] - self.origin[0]) / self.h;
        let fy = (p[1] - self.origin[1]) / self.h;
        if fx < 0.0 || fy < 0.0 {
            return None;
        }
        let (i, j) = (fx.floor() as usize, fy.floor() as usize);
        (i < self.nx && j < self.ny).then_some((i, j))
    }
}

/// Boolean mask on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct GridRegion {
    spec: GridSpec,
    mask: Vec<bool>,
}

impl GridRegion {
    pub fn new(spec: GridSpec, mask: Vec<bool>) -> Result<Self> {
        if mask.len() != spec.len() {
            return Err(Error::InvalidRegion(format!(
                "mask has {} cells, grid has {}",
                mask.len(),
                spec.len()
            )));
        }
        Ok(Self { spec, mask })
    }

    pub fn empty(spec: GridSpec) -> Self {
        Self { mask: vec![false; spec.len()], spec }
    }

    /// Mask from a predicate on cell centers.
    pub fn from_fn(spec: GridSpec, mut inside: impl FnMut([f64; 2]) -> bool) -> Self {
        let mask = (0..spec.len()).map(|k| inside(spec.center_of(k))).collect();
        Self { spec, mask }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn contains_cell(&self, index: usize) -> bool {
        self.mask[index]
    }

    pub fn count(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    pub fn measure(&self) -> f64 {
        self.count() as f64 * self.spec.cell_area()
    }

    pub fn is_empty(&self) -> bool {
        !self.mask.iter().any(|&b| b)
    }

    /// Indices of the cells in the region, ascending.
    pub fn cells(&self) -> Vec<usize> {
        self.mask.iter().enumerate().filter_map(|(k, &b)| b.then_some(k)).collect()
    }

    pub fn centroid(&self) -> Option<[f64; 2]> {
        let cells = self.cells();
        if cells.is_empty() {
            return None;
        }
        let mut c = [0.0, 0.0];
        for &k in &cells {
            let p = self.spec.center_of(k);
            c[0] += p[0];
            c[1] += p[1];
        }
        let n = cells.len() as f64;
        Some([c[0] / n, c[1] / n])
    }

    /// Axis box spanned by the region's cells, or `None` if empty.
    pub fn bounding_box(&self) -> Option<([f64; 2], [f64; 2])> {
        let cells = self.cells();
        let first = *cells.first()?;
        let h = self.spec.h;
        let (mut lo, mut hi) = (self.spec.center_of(first), self.spec.center_of(first));
        for &k in &cells {
            let p = self.spec.center_of(k);
            lo = [lo[0].min(p[0]), lo[1].min(p[1])];
            hi = [hi[0].max(p[0]), hi[1].max(p[1])];
        }
        Some(([lo[0] - h / 2.0, lo[1] - h / 2.0], [hi[0] + h / 2.0, hi[1] + h / 2.0]))
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a && b)
    }

    fn combine(&self, other: &Self, op: impl Fn(bool, bool) -> bool) -> Result<Self> {
        if self.spec != other.spec {
            return Err(Error::GridMismatch);
        }
        let mask = self.mask.iter().zip(&other.mask).map(|(&a, &b)| op(a, b)).collect();
        Ok(Self { spec: self.spec, mask })
    }

    /// Shift by whole cells within the same grid; fails if any cell would leave the grid.
    pub fn shifted(&self, di: i64, dj: i64) -> Result<Self> {
        let mut mask = vec![false; self.spec.len()];
        for k in self.cells() {
            let (i, j) = self.spec.cell(k);
            let (ni, nj) = (i as i64 + di, j as i64 + dj);
            if ni < 0 || nj < 0 || ni >= self.spec.nx as i64 || nj >= self.spec.ny as i64 {
                return Err(Error::ShapeExceedsGrid);
            }
            mask[self.spec.index(ni as usize, nj as usize)] = true;
        }
        Ok(Self { spec: self.spec, mask })
    }

    /// The same number of cells, chosen as those whose centers are nearest to `center`
    /// (ties by index). This is the grid analogue of the centered ball of equal measure.
    pub fn nearest_cells(&self, center: [f64; 2]) -> Result<Self> {
        let n = self.count();
        if n == 0 {
            return Err(Error::EmptyRegion);
        }
        let r = (self.measure() / std::f64::consts::PI).sqrt();
        let h = self.spec.h;
        if !self.spec.contains_box([center[0] - r - h, center[1] - r - h], [center[0] + r + h, center[1] + r + h]) {
            return Err(Error::ShapeExceedsGrid);
        }
        let mut order: Vec<(f64, usize)> = (0..self.spec.len())
            .map(|k| {
                let p = self.spec.center_of(k);
                ((p[0] - center[0]).powi(2) + (p[1] - center[1]).powi(2), k)
            })
            .collect();
        order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let mut mask = vec![false; self.spec.len()];
        for &(_, k) in order.iter().take(n) {
            mask[k] = true;
        }
        Ok(Self { spec: self.spec, mask })
    }

    /// 4-connected components, each as a region on the same grid, ordered by first cell.
    pub fn components(&self) -> Vec<GridRegion> {
        let (nx, ny) = (self.spec.nx, self.spec.ny);
        let mut label = vec![usize::MAX; self.mask.len()];
        let mut out = Vec::new();
        for start in 0..self.mask.len() {
            if !self.mask[start] || label[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut comp = vec![false; self.mask.len()];
            let mut stack = vec![start];
            label[start] = id;
            while let Some(k) = stack.pop() {
                comp[k] = true;
                let (i, j) = self.spec.cell(k);
                let mut push = |ni: usize, nj: usize| {
                    let q = self.spec.index(ni, nj);
                    if self.mask[q] && label[q] == usize::MAX {
                        label[q] = id;
                        stack.push(q);
                    }
                };
                if i > 0 {
                    push(i - 1, j);
                }
                if i + 1 < nx {
                    push(i + 1, j);
                }
                if j > 0 {
                    push(i, j - 1);
                }
                if j + 1 < ny {
                    push(i, j + 1);
                }
            }
            out.push(GridRegion { spec: self.spec, mask: comp });
        }
        out
    }

    pub fn to_field(&self) -> GridField {
        GridField {
            spec: self.spec,
            values: self.mask.iter().map(|&b| Complex64::new(if b { 1.0 } else { 0.0 }, 0.0)).collect(),
        }
    }
}

/// Complex weight sampled on a grid, constant on each cell.
#[derive(Clone, Debug, PartialEq)]
pub struct GridField {
    spec: GridSpec,
    values: Vec<Complex64>,
}

impl GridField {
    pub fn new(spec: GridSpec, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != spec.len() {
            return Err(Error::InvalidRegion(format!(
                "field has {} values, grid has {}",
                values.len(),
                spec.len()
            )));
        }
        if let Some(k) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::NonFinite(format!("field value at cell {k}")));
        }
        Ok(Self { spec, values })
    }

    pub fn from_real(spec: GridSpec, values: Vec<f64>) -> Result<Self> {
        Self::new(spec, values.into_iter().map(|v| Complex64::new(v, 0.0)).collect())
    }

    pub fn zeros(spec: GridSpec) -> Self {
        Self { values: vec![Complex64::new(0.0, 0.0); spec.len()], spec }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Real parts, failing if any value carries an imaginary part.
    pub fn real_values(&self) -> Result<Vec<f64>> {
        if let Some(k) = self.values.iter().position(|v| v.im != 0.0) {
            return Err(Error::InvalidParameter(format!("field is not real at cell {k}")));
        }
        Ok(self.values.iter().map(|v| v.re).collect())
    }

    /// Indices of nonzero cells, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.values.iter().enumerate().filter_map(|(k, v)| (v.norm_sqr() > 0.0).then_some(k)).collect()
    }

    pub fn l1_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).sum::<f64>() * self.spec.cell_area()
    }

    pub fn l2_norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.spec.cell_area()
    }

    pub fn l2_norm(&self) -> f64 {
        self.l2_norm_sq().sqrt()
    }

    pub fn abs(&self) -> Self {
        Self {
            spec: self.spec,
            values: self.values.iter().map(|v| Complex64::new(v.norm(), 0.0)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.spec != other.spec {
            return Err(Error::GridMismatch);
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(Self { spec: self.spec, values })
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self { spec: self.spec, values: self.values.iter().map(|v| v * c).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn covering_is_lattice_aligned() {
        let g = GridSpec::centered(1.0, 0.1).unwrap();
        assert_eq!(g.nx % 2, 1);
        let mid = g.center(g.nx / 2, g.ny / 2);
        assert!(mid[0].abs() < 1e-12 && mid[1].abs() < 1e-12);
        assert!(g.contains_box([-1.0, -1.0], [1.0, 1.0]));
        let shifted = GridSpec::covering([0.3, -0.2], [2.0, 0.7], 0.1).unwrap();
        let c = shifted.center(0, 0);
        assert!(((c[0] / 0.1) - (c[0] / 0.1).round()).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(GridSpec::new([0.0, 0.0], 0.0, 3, 3).is_err());
        assert!(GridSpec::new([0.0, 0.0], 0.1, 0, 3).is_err());
        assert!(GridSpec::new([f64::NAN, 0.0], 0.1, 1, 3).is_err());
    }

    #[test]
    fn empty_mask_has_zero_measure() {
        let g = GridSpec::centered(1.0, 0.1).unwrap();
        assert_eq!(GridRegion::empty(g).measure(), 0.0);
    }

    #[test]
    fn disjoint_union_adds_measures() {
        let g = GridSpec::centered(2.0, 0.1).unwrap();
        let a = GridRegion::from_fn(g, |p| p[0] < -0.5);
        let b = GridRegion::from_fn(g, |p| p[0] > 0.5 && p[1] > 0.0);
        let u = a.union(&b).unwrap();
        assert!((u.measure() - a.measure() - b.measure()).abs() < 1e-12);
        assert!(a.intersection(&b).unwrap().is_empty());
    }

    #[test]
    fn components_and_shift() {
        let g = GridSpec::centered(3.0, 0.1).unwrap();
        let r = GridRegion::from_fn(g, |p| (p[0] - 1.5).hypot(p[1]) < 0.5 || (p[0] + 1.5).hypot(p[1]) < 0.5);
        let comps = r.components();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].count() + comps[1].count(), r.count());
        let s = r.shifted(3, -2).unwrap();
        assert_eq!(s.count(), r.count());
        assert!(r.shifted(100, 0).is_err());
    }

    #[test]
    fn nearest_cells_preserves_count() {
        let g = GridSpec::centered(3.0, 0.1).unwrap();
        let r = GridRegion::from_fn(g, |p| p[0].abs() < 1.0 && p[1].abs() < 0.2);
        let b = r.nearest_cells([0.0, 0.0]).unwrap();
        assert_eq!(b.count(), r.count());
    }

    #[test]
    fn field_norms() {
        let g = GridSpec::new([0.0, 0.0], 0.5, 2, 1).unwrap();
        let f = GridField::from_real(g, vec![1.0, -2.0]).unwrap();
        assert!((f.l1_norm() - 0.75).abs() < 1e-15);
        assert!((f.l2_norm_sq() - 1.25).abs() < 1e-15);
        assert!(GridField::from_real(g, vec![1.0, f64::INFINITY]).is_err());
    }
}
