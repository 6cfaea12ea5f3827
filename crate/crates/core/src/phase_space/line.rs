use crate::error::{Error, Result};

/// Finite union of disjoint open intervals on the line.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalSet {
    intervals: Vec<(f64, f64)>,
}

impl IntervalSet {
    /// Intervals are sorted and merged; overlapping input is allowed.
    pub fn new(mut intervals: Vec<(f64, f64)>) -> Result<Self> {
        for &(a, b) in &intervals {
            if !(a.is_finite() && b.is_finite() && a < b) {
                return Err(Error::InvalidRegion(format!("interval ({a}, {b}) is invalid")));
            }
        }
        intervals.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(intervals.len());
        for (a, b) in intervals {
            match merged.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => merged.push((a, b)),
            }
        }
        Ok(Self { intervals: merged })
    }

    pub fn interval(a: f64, b: f64) -> Result<Self> {
        Self::new(vec![(a, b)])
    }

    /// Interval of the given length centered at 0.
    pub fn centered(length: f64) -> Result<Self> {
        Self::interval(-length / 2.0, length / 2.0)
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(|(a, b)| b - a).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Centered interval of equal length.
    pub fn rearranged(&self) -> Result<Self> {
        if self.is_empty() {
            return Err(Error::EmptyRegion);
        }
        Self::centered(self.measure())
    }

    pub fn translated(&self, t: f64) -> Self {
        Self { intervals: self.intervals.iter().map(|&(a, b)| (a + t, b + t)).collect() }
    }

    /// Length of the intersection with `(a, b)`.
    pub fn overlap(&self, a: f64, b: f64) -> f64 {
        self.intervals.iter().map(|&(x, y)| (y.min(b) - x.max(a)).max(0.0)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merges_and_measures() {
        let s = IntervalSet::new(vec![(2.0, 3.0), (0.0, 1.0), (0.5, 1.5)]).unwrap();
        assert_eq!(s.intervals(), &[(0.0, 1.5), (2.0, 3.0)]);
        assert!((s.measure() - 2.5).abs() < 1e-15);
        assert!((s.overlap(1.0, 2.5) - 1.0).abs() < 1e-15);
        assert_eq!(s.rearranged().unwrap().intervals(), &[(-1.25, 1.25)]);
    }
}
