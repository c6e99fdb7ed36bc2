//! Analytic maps of (a neighbourhood of) the unit disk with exact jets.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::error::{invalid, QcError, Result};
use crate::jet::Jet2;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Closed-form building blocks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Primitive {
    Identity,
    /// `z / (1 - z)^2`
    Koebe,
    /// `z / (1 - z)`
    Cayley,
    /// `z (1 - z)^(-2 e^{-iλ} cos λ)`, λ-spirallike for |λ| < π/2.
    Spirallike { lambda: f64 },
}

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Constant(Complex64),
    Primitive(Primitive),
    /// Coefficients `a_0, a_1, a_2, ...`.
    Polynomial(Vec<Complex64>),
    /// `r f(z / r)`
    Scaled { r: f64, inner: Box<AnalyticMap> },
    Sum(Box<AnalyticMap>, Box<AnalyticMap>),
    Product(Box<AnalyticMap>, Box<AnalyticMap>),
    Quotient(Box<AnalyticMap>, Box<AnalyticMap>),
    Compose { outer: Box<AnalyticMap>, inner: Box<AnalyticMap> },
}

/// An analytic function evaluable as a [`Jet2`] on `|z| < analyticity_radius`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticMap {
    node: Node,
    radius: f64,
}

impl AnalyticMap {
    fn primitive(p: Primitive) -> Self {
        let radius = match p {
            Primitive::Identity => f64::INFINITY,
            _ => 1.0,
        };
        Self { node: Node::Primitive(p), radius }
    }

    pub fn identity() -> Self {
        Self::primitive(Primitive::Identity)
    }

    pub fn koebe() -> Self {
        Self::primitive(Primitive::Koebe)
    }

    pub fn cayley() -> Self {
        Self::primitive(Primitive::Cayley)
    }

    pub fn spirallike(lambda: f64) -> Result<Self> {
        if !(lambda.abs() < FRAC_PI_2) {
            return Err(invalid("lambda", format!("{lambda} not in (-pi/2, pi/2)")));
        }
        Ok(Self::primitive(Primitive::Spirallike { lambda }))
    }

    pub fn constant(c: Complex64) -> Self {
        Self { node: Node::Constant(c), radius: f64::INFINITY }
    }

    /// Polynomial with coefficients `a_0, a_1, ...` (no normalization).
    pub fn polynomial(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(invalid("coeffs", "empty coefficient list"));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(invalid("coeffs", "non-finite coefficient"));
        }
        Ok(Self { node: Node::Polynomial(coeffs), radius: f64::INFINITY })
    }

    /// Class-A polynomial `z + a_2 z^2 + a_3 z^3 + ...` from the
    /// coefficients `a_2, a_3, ...`.
    pub fn normalized_polynomial(higher: &[Complex64]) -> Result<Self> {
        let mut coeffs = vec![Complex64::new(0.0, 0.0), ONE];
        coeffs.extend_from_slice(higher);
        Self::polynomial(coeffs)
    }

    /// Polynomial flagged as class A: requires `a_0 = 0` and `a_1 = 1`.
    pub fn class_a_polynomial(coeffs: Vec<Complex64>) -> Result<Self> {
        match coeffs.as_slice() {
            [a0, a1, ..] if *a0 == Complex64::new(0.0, 0.0) && *a1 == ONE => Self::polynomial(coeffs),
            [_, a1, ..] if *a1 == Complex64::new(0.0, 0.0) => {
                Err(invalid("coeffs", "a_1 = 0: f'(0) must equal 1 for class A"))
            }
            _ => Err(invalid("coeffs", "class A requires a_0 = 0 and a_1 = 1")),
        }
    }

    /// `r f(z / r)`; raises the analyticity radius by the factor `r`.
    pub fn scaled(r: f64, inner: AnalyticMap) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(invalid("r", format!("{r} must be positive")));
        }
        let radius = r * inner.radius;
        Ok(Self { node: Node::Scaled { r, inner: Box::new(inner) }, radius })
    }

    pub fn sum(a: AnalyticMap, b: AnalyticMap) -> Self {
        let radius = a.radius.min(b.radius);
        Self { node: Node::Sum(Box::new(a), Box::new(b)), radius }
    }

    pub fn product(a: AnalyticMap, b: AnalyticMap) -> Self {
        let radius = a.radius.min(b.radius);
        Self { node: Node::Product(Box::new(a), Box::new(b)), radius }
    }

    pub fn quotient(num: AnalyticMap, den: AnalyticMap) -> Self {
        let radius = num.radius.min(den.radius);
        Self { node: Node::Quotient(Box::new(num), Box::new(den)), radius }
    }

    /// `outer ∘ inner`. The radius is that of `inner`; `outer`'s own domain
    /// is checked at evaluation time.
    pub fn compose(outer: AnalyticMap, inner: AnalyticMap) -> Self {
        let radius = inner.radius;
        Self { node: Node::Compose { outer: Box::new(outer), inner: Box::new(inner) }, radius }
    }

    /// `c + f`
    pub fn shifted(self, c: Complex64) -> Self {
        Self::sum(Self::constant(c), self)
    }

    pub fn analyticity_radius(&self) -> f64 {
        self.radius
    }

    /// Whether the map is analytic on a neighbourhood of the closed unit disk.
    pub fn extends_past_unit_circle(&self) -> bool {
        self.radius > 1.0
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.eval_jet(z).map(|j| j.value)
    }

    pub fn eval_jet(&self, z: Complex64) -> Result<Jet2> {
        if !z.is_finite() {
            return Err(QcError::NonFinite { z });
        }
        if !(z.norm() < self.radius) {
            return Err(QcError::OutsideDomain { z, radius: self.radius });
        }
        let jet = match &self.node {
            Node::Constant(c) => Jet2::constant(*c),
            Node::Primitive(p) => primitive_jet(*p, z)?,
            Node::Polynomial(coeffs) => horner(coeffs, z),
            Node::Scaled { r, inner } => {
                let j = inner.eval_jet(z / r)?;
                Jet2::new(j.value * r, j.d1, j.d2 / r)
            }
            Node::Sum(a, b) => a.eval_jet(z)? + b.eval_jet(z)?,
            Node::Product(a, b) => a.eval_jet(z)? * b.eval_jet(z)?,
            Node::Quotient(a, b) => a.eval_jet(z)?.checked_div(b.eval_jet(z)?, z)?,
            Node::Compose { outer, inner } => {
                let i = inner.eval_jet(z)?;
                Jet2::compose(outer.eval_jet(i.value)?, i)
            }
        };
        if !jet.is_finite() {
            return Err(QcError::NonFinite { z });
        }
        Ok(jet)
    }
}

fn horner(coeffs: &[Complex64], z: Complex64) -> Jet2 {
    let zero = Complex64::new(0.0, 0.0);
    let (mut v, mut d1, mut d2) = (zero, zero, zero);
    for &a in coeffs.iter().rev() {
        d2 = d2 * z + d1 * 2.0;
        d1 = d1 * z + v;
        v = v * z + a;
    }
    Jet2::new(v, d1, d2)
}

fn primitive_jet(p: Primitive, z: Complex64) -> Result<Jet2> {
    let w = ONE - z;
    Ok(match p {
        Primitive::Identity => Jet2::variable(z),
        Primitive::Koebe => {
            let w2 = w * w;
            Jet2::new(z / w2, (ONE + z) / (w2 * w), (z * 2.0 + 4.0) / (w2 * w2))
        }
        Primitive::Cayley => Jet2::new(z / w, (w * w).inv(), (w * w * w).inv() * 2.0),
        Primitive::Spirallike { lambda } => {
            let b = Complex64::from_polar(-2.0 * lambda.cos(), -lambda);
            let one_minus = Jet2::new(w, -ONE, Complex64::new(0.0, 0.0));
            Jet2::variable(z) * one_minus.powc(b, z)?
        }
    })
}

/// Named maps used by tests, the CLI and the demo.
pub fn catalog() -> Vec<(&'static str, AnalyticMap)> {
    let c = |re: f64| Complex64::new(re, 0.0);
    vec![
        ("identity", AnalyticMap::identity()),
        ("koebe", AnalyticMap::koebe()),
        ("cayley", AnalyticMap::cayley()),
        ("spirallike", AnalyticMap::spirallike(std::f64::consts::FRAC_PI_6).unwrap()),
        ("poly_quarter", AnalyticMap::normalized_polynomial(&[c(0.25)]).unwrap()),
        (
            "poly_cubic",
            AnalyticMap::normalized_polynomial(&[Complex64::new(0.1, 0.05), c(-0.04)]).unwrap(),
        ),
        ("scaled_koebe", AnalyticMap::scaled(1.25, AnalyticMap::koebe()).unwrap()),
        (
            "koebe_of_poly",
            AnalyticMap::compose(
                AnalyticMap::scaled(2.0, AnalyticMap::koebe()).unwrap(),
                AnalyticMap::normalized_polynomial(&[c(0.1)]).unwrap(),
            ),
        ),
    ]
}

pub fn catalog_map(name: &str) -> Option<AnalyticMap> {
    catalog().into_iter().find(|(n, _)| *n == name).map(|(_, m)| m)
}
