//! Polar sampling meshes for sup-norm estimation.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Samples of the closed disk `|z| <= 1 - epsilon`, radii clustered toward
/// the unit circle: `1 - r_i = epsilon^(i / (n - 1))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DiskGrid {
    pub radial: usize,
    pub angular: usize,
    pub epsilon: f64,
}

impl Default for DiskGrid {
    fn default() -> Self {
        Self { radial: 64, angular: 128, epsilon: 1e-3 }
    }
}

impl DiskGrid {
    pub fn new(radial: usize, angular: usize, epsilon: f64) -> Result<Self> {
        let g = Self { radial, angular, epsilon };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.radial < 2 || self.angular < 1 {
            return Err(invalid("grid", "need at least 2 radii and 1 angle"));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(invalid("epsilon", format!("{} not in (0, 1)", self.epsilon)));
        }
        Ok(())
    }

    pub fn radii(&self) -> Vec<f64> {
        let n = (self.radial - 1) as f64;
        (0..self.radial).map(|i| 1.0 - self.epsilon.powf(i as f64 / n)).collect()
    }

    pub fn max_radius(&self) -> f64 {
        1.0 - self.epsilon
    }

    /// Angular step, also used as the refinement scale.
    pub fn angle_step(&self) -> f64 {
        TAU / self.angular as f64
    }

    /// All sample points; the origin appears once.
    pub fn points(&self) -> Vec<Complex64> {
        let mut pts = vec![Complex64::new(0.0, 0.0)];
        for r in self.radii().into_iter().skip(1) {
            pts.extend(angles(self.angular).map(|t| Complex64::from_polar(r, t)));
        }
        pts
    }
}

/// Samples of `inner <= |z| <= outer`, radii geometric in between.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnnulusGrid {
    pub inner: f64,
    pub outer: f64,
    pub radial: usize,
    pub angular: usize,
}

impl Default for AnnulusGrid {
    fn default() -> Self {
        Self { inner: 1.0 + 1e-3, outer: 2.0f64.exp(), radial: 64, angular: 128 }
    }
}

impl AnnulusGrid {
    pub fn new(inner: f64, outer: f64, radial: usize, angular: usize) -> Result<Self> {
        let g = Self { inner, outer, radial, angular };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.radial < 1 || self.angular < 1 {
            return Err(invalid("annulus", "empty annulus grid"));
        }
        if !(self.inner > 0.0 && self.outer.is_finite()) || (self.radial > 1 && self.outer <= self.inner) {
            return Err(invalid("annulus", format!("bad radii {} .. {}", self.inner, self.outer)));
        }
        Ok(())
    }

    pub fn radii(&self) -> Vec<f64> {
        if self.radial == 1 {
            return vec![self.inner];
        }
        let n = (self.radial - 1) as f64;
        let ratio = self.outer / self.inner;
        (0..self.radial).map(|i| self.inner * ratio.powf(i as f64 / n)).collect()
    }

    pub fn points(&self) -> Vec<Complex64> {
        let radii = self.radii();
        radii
            .iter()
            .flat_map(|&r| angles(self.angular).map(move |t| Complex64::from_polar(r, t)))
            .collect()
    }
}

fn angles(n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |j| TAU * j as f64 / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disk_radii_increase_to_one_minus_eps() {
        let g = DiskGrid::default();
        let r = g.radii();
        assert_eq!(r.len(), 64);
        assert_eq!(r[0], 0.0);
        assert!((r[63] - 0.999).abs() < 1e-15);
        assert!(r.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(g.points().len(), 1 + 63 * 128);
    }

    #[test]
    fn annulus_radii_increase() {
        let g = AnnulusGrid::default();
        let r = g.radii();
        assert!(r.windows(2).all(|w| w[0] < w[1]));
        assert!((r[0] - 1.001).abs() < 1e-15);
        assert!((r.last().unwrap() - 2.0f64.exp()).abs() < 1e-12);
        assert_eq!(g.points().len(), 64 * 128);
    }

    #[test]
    fn rejects_empty() {
        assert!(DiskGrid::new(1, 8, 1e-3).is_err());
        assert!(AnnulusGrid::new(2.0, 1.5, 4, 4).is_err());
    }
}
