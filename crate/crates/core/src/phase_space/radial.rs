use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Volume of the unit ball in `R^n`.
pub fn unit_ball_volume(n: usize) -> f64 {
    if n % 2 == 0 {
        return (1..=n / 2).fold(1.0, |v, k| v * std::f64::consts::PI / k as f64);
    }
    let half = n as f64 / 2.0;
    std::f64::consts::PI.powf(half) / statrs::function::gamma::gamma(half + 1.0)
}

/// Surface area of the unit sphere in `R^n`.
pub fn unit_sphere_area(n: usize) -> f64 {
    n as f64 * unit_ball_volume(n)
}

/// Union of origin-centered annuli `[a, b)` in `R^n`, `n` even.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialRegion {
    n: usize,
    annuli: Vec<(f64, f64)>,
}

impl RadialRegion {
    /// Annuli must be sorted and pairwise disjoint; touching intervals are merged.
    pub fn new(n: usize, annuli: Vec<(f64, f64)>) -> Result<Self> {
        if n < 2 || n % 2 != 0 {
            return Err(Error::InvalidRegion(format!("dimension {n} must be even and at least 2")));
        }
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(annuli.len());
        for (a, b) in annuli {
            if !(a.is_finite() && b.is_finite() && 0.0 <= a && a < b) {
                return Err(Error::InvalidRegion(format!("annulus [{a}, {b}) is invalid")));
            }
            match merged.last_mut() {
                Some(last) if a < last.1 => {
                    return Err(Error::InvalidRegion(format!(
                        "annulus [{a}, {b}) overlaps or precedes [{}, {})",
                        last.0, last.1
                    )))
                }
                Some(last) if a == last.1 => last.1 = b,
                _ => merged.push((a, b)),
            }
        }
        Ok(Self { n, annuli: merged })
    }

    pub fn ball(n: usize, radius: f64) -> Result<Self> {
        if radius == 0.0 {
            return Self::new(n, Vec::new());
        }
        Self::new(n, vec![(0.0, radius)])
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Half the ambient dimension.
    pub fn d(&self) -> usize {
        self.n / 2
    }

    pub fn annuli(&self) -> &[(f64, f64)] {
        &self.annuli
    }

    pub fn is_empty(&self) -> bool {
        self.annuli.is_empty()
    }

    pub fn outer_radius(&self) -> f64 {
        self.annuli.last().map_or(0.0, |a| a.1)
    }

    pub fn measure(&self) -> f64 {
        let n = self.n as i32;
        unit_ball_volume(self.n) * self.annuli.iter().map(|(a, b)| b.powi(n) - a.powi(n)).sum::<f64>()
    }

    pub fn contains_radius(&self, r: f64) -> bool {
        self.annuli.iter().any(|&(a, b)| a <= r && r < b)
    }

    /// Signed ball decomposition: the indicator equals `sum w * indicator(B_radius)`.
    pub fn signed_balls(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(2 * self.annuli.len());
        for &(a, b) in &self.annuli {
            out.push((b, 1.0));
            if a > 0.0 {
                out.push((a, -1.0));
            }
        }
        out
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::InvalidParameter(format!("scale factor {factor}")));
        }
        Self::new(self.n, self.annuli.iter().map(|&(a, b)| (a * factor, b * factor)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn ball_volumes() {
        assert_relative_eq!(unit_ball_volume(2), PI, epsilon = 1e-14);
        assert_relative_eq!(unit_ball_volume(4), PI * PI / 2.0, epsilon = 1e-14);
        assert_relative_eq!(unit_sphere_area(2), 2.0 * PI, epsilon = 1e-14);
    }

    #[test]
    fn measures() {
        assert_relative_eq!(RadialRegion::ball(2, 1.0).unwrap().measure(), PI, epsilon = 1e-14);
        let ann = RadialRegion::new(2, vec![(1.0, 2.0)]).unwrap();
        assert_relative_eq!(ann.measure(), 3.0 * PI, epsilon = 1e-14);
        assert_eq!(RadialRegion::ball(2, 0.0).unwrap().measure(), 0.0);
    }

    #[test]
    fn validation_and_merging() {
        assert!(RadialRegion::new(3, vec![(0.0, 1.0)]).is_err());
        assert!(RadialRegion::new(2, vec![(0.0, 1.0), (0.5, 2.0)]).is_err());
        assert!(RadialRegion::new(2, vec![(1.0, 1.0)]).is_err());
        let m = RadialRegion::new(2, vec![(0.0, 1.0), (1.0, 2.0)]).unwrap();
        assert_eq!(m.annuli(), &[(0.0, 2.0)]);
    }
}
