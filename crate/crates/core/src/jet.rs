//! Second-order jets of holomorphic functions.
//!
//! A [`Jet2`] carries `f(z)`, `f'(z)` and `f''(z)` at one point. Arithmetic
//! on jets applies the sum, product, quotient and chain rules through second
//! order, so composite maps get exact derivatives without finite differences.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{QcError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet2 {
    pub value: Complex64,
    pub d1: Complex64,
    pub d2: Complex64,
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

impl Jet2 {
    pub const fn new(value: Complex64, d1: Complex64, d2: Complex64) -> Self {
        Self { value, d1, d2 }
    }

    pub const fn constant(value: Complex64) -> Self {
        Self { value, d1: ZERO, d2: ZERO }
    }

    /// The independent variable seeded at `z`.
    pub const fn variable(z: Complex64) -> Self {
        Self { value: z, d1: ONE, d2: ZERO }
    }

    pub fn scale(self, c: Complex64) -> Self {
        Self::new(self.value * c, self.d1 * c, self.d2 * c)
    }

    /// `self / rhs`; fails when the denominator vanishes.
    pub fn checked_div(self, rhs: Jet2, at: Complex64) -> Result<Jet2> {
        let v = rhs.value;
        if v == ZERO || !v.is_finite() {
            return Err(QcError::Pole { z: at });
        }
        let inv = v.inv();
        // (1/g)' = -g'/g^2, (1/g)'' = 2g'^2/g^3 - g''/g^2
        let r = Jet2::new(
            inv,
            -rhs.d1 * inv * inv,
            (rhs.d1 * rhs.d1 * 2.0 * inv - rhs.d2) * inv * inv,
        );
        Ok(self * r)
    }

    /// Chain rule: the jet of `outer ∘ inner`, where `outer` was evaluated
    /// at `inner.value`.
    pub fn compose(outer: Jet2, inner: Jet2) -> Jet2 {
        Jet2::new(
            outer.value,
            outer.d1 * inner.d1,
            outer.d2 * inner.d1 * inner.d1 + outer.d1 * inner.d2,
        )
    }

    /// Jet of `self^b` on the principal branch of `log(self.value)`.
    pub fn powc(self, b: Complex64, at: Complex64) -> Result<Jet2> {
        if self.value == ZERO {
            return Err(QcError::Pole { z: at });
        }
        let p = self.value.powc(b);
        let outer = Jet2::new(p, b * p / self.value, b * (b - 1.0) * p / (self.value * self.value));
        Ok(Jet2::compose(outer, self))
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite() && self.d1.is_finite() && self.d2.is_finite()
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, rhs: Jet2) -> Jet2 {
        Jet2::new(self.value + rhs.value, self.d1 + rhs.d1, self.d2 + rhs.d2)
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, rhs: Jet2) -> Jet2 {
        Jet2::new(self.value - rhs.value, self.d1 - rhs.d1, self.d2 - rhs.d2)
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        Jet2::new(-self.value, -self.d1, -self.d2)
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: Jet2) -> Jet2 {
        Jet2::new(
            self.value * rhs.value,
            self.d1 * rhs.value + self.value * rhs.d1,
            self.d2 * rhs.value + self.d1 * rhs.d1 * 2.0 + self.value * rhs.d2,
        )
    }
}
