//! Companion maps `Q` through which `f` is tested, with their derived views
//! `Ω = Q''/Q'`, `Φ = e^{iλ} Q/Q'` and `Ψ = (Q(w)/w)^{s-1} Q'(w)`.

use num_complex::Complex64;

use crate::error::{invalid, QcError, Result};
use crate::jet::Jet2;
use crate::map::AnalyticMap;
use crate::moebius::MoebiusMap;
use crate::sector::SectorDomain;

#[derive(Debug, Clone, PartialEq)]
pub enum CompanionBase {
    Identity,
    Moebius(MoebiusMap),
    /// `scale · Q2` for the sector map `Q2`.
    Sector { sector: SectorDomain, scale: Complex64 },
    /// An analytic map without a known extension formula.
    Analytic(AnalyticMap),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompanionMap {
    base: CompanionBase,
    extension_dilatation: f64,
    origin_derivative_nonzero: bool,
}

impl CompanionMap {
    fn from_base(base: CompanionBase, extension_dilatation: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&extension_dilatation) {
            return Err(invalid("extension_dilatation", format!("{extension_dilatation} not in [0, 1)")));
        }
        let mut q = Self { base, extension_dilatation, origin_derivative_nonzero: false };
        q.origin_derivative_nonzero = q.origin_jet().map(|j| j.d1.norm() > 1e-12).unwrap_or(false);
        Ok(q)
    }

    pub fn identity() -> Self {
        Self::from_base(CompanionBase::Identity, 0.0).expect("identity companion")
    }

    pub fn moebius(m: MoebiusMap) -> Self {
        Self::from_base(CompanionBase::Moebius(m), 0.0).expect("moebius companion")
    }

    /// `e^{iφ} w`, the companion behind a constant `Ψ ≡ e^{iφ}` when `s = 1`.
    pub fn rotation(phi: f64) -> Self {
        let half = Complex64::from_polar(1.0, 0.5 * phi);
        let zero = Complex64::new(0.0, 0.0);
        Self::moebius(MoebiusMap { alpha: half, beta: zero, gamma: zero, delta: half.inv() })
    }

    /// The sector map `Q2`, which extends `|1 - a|`-quasiconformally.
    pub fn sector(sector: SectorDomain) -> Self {
        let k = sector.extension_dilatation();
        Self::from_base(CompanionBase::Sector { sector, scale: Complex64::new(1.0, 0.0) }, k)
            .expect("sector opening in (0, 2)")
    }

    /// `Q3 = Q2 / Q2'(0)`, so that `Q3'(w) = (1 - w/w0)^{1/a - 1}`.
    pub fn normalized_sector(sector: SectorDomain) -> Result<Self> {
        let d0 = sector.q2_jet_continued(Complex64::new(0.0, 0.0))?.d1;
        let k = sector.extension_dilatation();
        Self::from_base(CompanionBase::Sector { sector, scale: d0.inv() }, k)
    }

    /// An arbitrary analytic companion with a declared extension dilatation.
    pub fn analytic(map: AnalyticMap, declared_dilatation: f64) -> Result<Self> {
        Self::from_base(CompanionBase::Analytic(map), declared_dilatation)
    }

    pub fn base(&self) -> &CompanionBase {
        &self.base
    }

    pub fn extension_dilatation(&self) -> f64 {
        self.extension_dilatation
    }

    pub fn origin_derivative_nonzero(&self) -> bool {
        self.origin_derivative_nonzero
    }

    fn origin_jet(&self) -> Result<Jet2> {
        let zero = Complex64::new(0.0, 0.0);
        match &self.base {
            CompanionBase::Sector { sector, scale } => Ok(sector.q2_jet_continued(zero)?.scale(*scale)),
            _ => self.jet(zero),
        }
    }

    pub fn jet(&self, w: Complex64) -> Result<Jet2> {
        match &self.base {
            CompanionBase::Identity => Ok(Jet2::variable(w)),
            CompanionBase::Moebius(m) => m.jet(w),
            CompanionBase::Sector { sector, scale } => Ok(sector.q2_jet(w)?.scale(*scale)),
            CompanionBase::Analytic(map) => map.eval_jet(w),
        }
    }

    pub fn eval(&self, w: Complex64) -> Result<Complex64> {
        self.jet(w).map(|j| j.value)
    }

    /// `Ω(w) = Q''(w)/Q'(w)`.
    pub fn omega(&self, w: Complex64) -> Result<Complex64> {
        let j = self.jet(w)?;
        if j.d1 == Complex64::new(0.0, 0.0) {
            return Err(QcError::Pole { z: w });
        }
        Ok(j.d2 / j.d1)
    }

    /// `Φ(w) = e^{iλ} Q(w)/Q'(w)`.
    pub fn phi(&self, w: Complex64, lambda: f64) -> Result<Complex64> {
        let j = self.jet(w)?;
        if j.d1 == Complex64::new(0.0, 0.0) {
            return Err(QcError::Pole { z: w });
        }
        Ok(Complex64::from_polar(1.0, lambda) * j.value / j.d1)
    }

    /// The declared quasiconformal extension of `Q` to the plane, when one
    /// is known in closed form.
    pub fn extension(&self, w: Complex64) -> Option<Complex64> {
        match &self.base {
            CompanionBase::Identity => Some(w),
            CompanionBase::Moebius(m) => m.apply(w).ok(),
            CompanionBase::Sector { sector, scale } => Some(sector.extend_q2(w) * scale),
            CompanionBase::Analytic(_) => None,
        }
    }

    pub fn extension_inverse(&self, w: Complex64) -> Option<Complex64> {
        match &self.base {
            CompanionBase::Identity => Some(w),
            CompanionBase::Moebius(m) => m.apply_inverse(w).ok(),
            CompanionBase::Sector { sector, scale } => Some(sector.extend_q2_inverse(w / scale)),
            CompanionBase::Analytic(_) => None,
        }
    }

    pub fn has_extension(&self) -> bool {
        !matches!(self.base, CompanionBase::Analytic(_))
    }
}
