//! Phase-space regions, sampled weight functions, measures, and region files.

mod grid;
pub mod io;
mod line;
mod radial;
pub(crate) mod shape;

pub use grid::{GridField, GridRegion, GridSpec};
pub use line::IntervalSet;
pub use radial::{unit_ball_volume, unit_sphere_area, RadialRegion};
pub use shape::{disc_rect_area, symm_diff_measure, Shape};

/// A region with a Lebesgue measure in some ambient dimension.
pub trait Measurable {
    fn measure(&self) -> f64;
    fn ambient_dim(&self) -> usize;
}

impl Measurable for GridRegion {
    fn measure(&self) -> f64 {
        GridRegion::measure(self)
    }
    fn ambient_dim(&self) -> usize {
        2
    }
}

impl Measurable for RadialRegion {
    fn measure(&self) -> f64 {
        RadialRegion::measure(self)
    }
    fn ambient_dim(&self) -> usize {
        self.dim()
    }
}

impl Measurable for Shape {
    fn measure(&self) -> f64 {
        Shape::measure(self)
    }
    fn ambient_dim(&self) -> usize {
        2
    }
}

impl Measurable for IntervalSet {
    fn measure(&self) -> f64 {
        IntervalSet::measure(self)
    }
    fn ambient_dim(&self) -> usize {
        1
    }
}
