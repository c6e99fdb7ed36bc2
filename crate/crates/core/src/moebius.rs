use num_complex::Complex64;

use crate::error::{invalid, QcError, Result};
use crate::jet::Jet2;

/// `w ↦ (αw + β)/(γw + δ)`, stored with `αδ − βγ = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoebiusMap {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub gamma: Complex64,
    pub delta: Complex64,
}

impl MoebiusMap {
    pub fn new(alpha: Complex64, beta: Complex64, gamma: Complex64, delta: Complex64) -> Result<Self> {
        Self { alpha, beta, gamma, delta }.normalized()
    }

    pub fn identity() -> Self {
        let (o, z) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        Self { alpha: o, beta: z, gamma: z, delta: o }
    }

    /// The map with pole at `c2`, i.e. `w / (w - c2)` up to normalization.
    pub fn with_pole(c2: Complex64) -> Result<Self> {
        let o = Complex64::new(1.0, 0.0);
        Self::new(o, Complex64::new(0.0, 0.0), o, -c2)
    }

    pub fn determinant(&self) -> Complex64 {
        self.alpha * self.delta - self.beta * self.gamma
    }

    /// Rescales so the determinant is one. Applying it twice changes nothing.
    pub fn normalized(self) -> Result<Self> {
        let det = self.determinant();
        if !det.is_finite() || det.norm() < 1e-300 {
            return Err(invalid("moebius", format!("degenerate coefficients, det = {det}")));
        }
        if (det - 1.0).norm() < 1e-14 {
            return Ok(self);
        }
        let s = det.sqrt();
        Ok(Self {
            alpha: self.alpha / s,
            beta: self.beta / s,
            gamma: self.gamma / s,
            delta: self.delta / s,
        })
    }

    /// `-δ/γ`, or `None` for an affine map.
    pub fn pole(&self) -> Option<Complex64> {
        (self.gamma != Complex64::new(0.0, 0.0)).then(|| -self.delta / self.gamma)
    }

    pub fn apply(&self, w: Complex64) -> Result<Complex64> {
        let den = self.gamma * w + self.delta;
        if den == Complex64::new(0.0, 0.0) {
            return Err(QcError::Pole { z: w });
        }
        Ok((self.alpha * w + self.beta) / den)
    }

    pub fn inverse(&self) -> MoebiusMap {
        MoebiusMap { alpha: self.delta, beta: -self.beta, gamma: -self.gamma, delta: self.alpha }
    }

    pub fn apply_inverse(&self, w: Complex64) -> Result<Complex64> {
        self.inverse().apply(w)
    }

    /// Value, `1/(γw+δ)^2` and `-2γ/(γw+δ)^3`.
    pub fn jet(&self, w: Complex64) -> Result<Jet2> {
        let den = self.gamma * w + self.delta;
        if den == Complex64::new(0.0, 0.0) {
            return Err(QcError::Pole { z: w });
        }
        let inv = den.inv();
        Ok(Jet2::new((self.alpha * w + self.beta) * inv, inv * inv, -self.gamma * inv * inv * inv * 2.0))
    }

    pub fn compose(&self, inner: &MoebiusMap) -> MoebiusMap {
        MoebiusMap {
            alpha: self.alpha * inner.alpha + self.beta * inner.gamma,
            beta: self.alpha * inner.beta + self.beta * inner.delta,
            gamma: self.gamma * inner.alpha + self.delta * inner.gamma,
            delta: self.gamma * inner.beta + self.delta * inner.delta,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_fixes_points() {
        let m = MoebiusMap::identity();
        assert_eq!(m.apply(c(2.0, -3.0)).unwrap(), c(2.0, -3.0));
    }

    #[test]
    fn round_trip_after_normalization() {
        let m = MoebiusMap::new(c(2.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)).unwrap();
        assert!((m.determinant() - c(1.0, 0.0)).norm() < 1e-15);
        let w = c(2.0, 1.0);
        let back = m.apply_inverse(m.apply(w).unwrap()).unwrap();
        assert!((back - w).norm() < 1e-12);
    }

    #[test]
    fn half_at_one() {
        let m = MoebiusMap::new(c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)).unwrap();
        assert!((m.apply(c(1.0, 0.0)).unwrap() - c(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn normalization_is_idempotent() {
        let m = MoebiusMap::new(c(3.0, 1.0), c(0.5, -2.0), c(1.0, 1.0), c(-0.2, 0.7)).unwrap();
        assert_eq!(m.normalized().unwrap(), m);
    }

    #[test]
    fn poles_are_errors() {
        let m = MoebiusMap::with_pole(c(-1.0, 0.0)).unwrap();
        assert_eq!(m.pole(), Some(c(-1.0, 0.0)));
        assert!(m.apply(c(-1.0, 0.0)).is_err());
        assert!(m.apply_inverse(m.alpha / m.gamma).is_err());
    }

    #[test]
    fn log_derivative_formula() {
        // Q''/Q' = -2 / (w + δ/γ)
        let m = MoebiusMap::new(c(0.3, 1.0), c(2.0, 0.0), c(0.7, -0.2), c(1.1, 0.4)).unwrap();
        let w = c(0.25, -0.6);
        let j = m.jet(w).unwrap();
        let expected = -c(2.0, 0.0) / (w + m.delta / m.gamma);
        assert!((j.d2 / j.d1 - expected).norm() < 1e-12);
    }

    #[test]
    fn degenerate_rejected() {
        assert!(MoebiusMap::new(c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(4.0, 0.0)).is_err());
    }
}
