//! Explicit Löwner chains `F(z, t)` built from `f` and a companion `Q`,
//! their validation, and the Becker-type extension they induce.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::branch::{track_ray, unwrap_log};
use crate::companion::CompanionMap;
use crate::criteria::{check_origin_fixed, Criterion, CriterionParams};
use crate::disk::{check_k, u_disk_ratio};
use crate::error::{invalid, QcError, Result};
use crate::grid::DiskGrid;
use crate::jet::Jet2;
use crate::map::AnalyticMap;
use crate::par::map_ordered;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Radius used for `f(e^{iθ})` when `f` is not analytic past the circle.
pub const BOUNDARY_CLAMP: f64 = 1.0 - 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    /// `Q(f(e^{-t}z)) + (1+c)^{-1}(e^t - e^{-t}) z Q'(f(e^{-t}z)) f'(e^{-t}z)`
    GenBecker,
    /// `Q(f(z)) + (e^t - 1) z`
    Nw,
    /// `e^t Q(f(z))`
    PhiLike,
    /// `{Q(f(z))^s + s(e^t - 1) p(z)^α z^{iβ}}^{1/s}`
    Bazilevic,
}

/// `F`, `∂_t F` and `z ∂_z F` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainPoint {
    pub value: Complex64,
    pub dt: Complex64,
    pub z_dz: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoewnerChain {
    construction: Construction,
    f: AnalyticMap,
    q: CompanionMap,
    c: Complex64,
    s: Complex64,
    p: AnalyticMap,
}

impl LoewnerChain {
    pub fn build(construction: Construction, f: AnalyticMap, q: CompanionMap, params: &CriterionParams) -> Result<Self> {
        match construction {
            Construction::GenBecker => {
                if (ONE + params.c).norm() < 1e-12 {
                    return Err(invalid("c", "1 + c must not vanish"));
                }
            }
            Construction::Bazilevic => {
                if params.s.re <= 0.0 {
                    return Err(invalid("s", "Re s must be positive"));
                }
                check_origin_fixed(&f, &q, &params.p)?;
            }
            Construction::Nw | Construction::PhiLike => {}
        }
        let chain = Self { construction, f, q, c: params.c, s: params.s, p: params.p.clone() };
        let a1 = chain.a1(0.0)?;
        if a1 == ZERO || !a1.is_finite() {
            return Err(QcError::Precondition(format!("a1(0) = {a1} must be nonzero")));
        }
        Ok(chain)
    }

    /// The chain associated with a criterion, built on the companion that
    /// criterion actually uses.
    pub fn for_criterion(criterion: Criterion, f: AnalyticMap, q: &CompanionMap, params: &CriterionParams) -> Result<Self> {
        let construction = match criterion {
            Criterion::PhiLike | Criterion::PhiLikeQc => Construction::PhiLike,
            Criterion::GenBecker | Criterion::MoebiusBecker | Criterion::SectorBecker => Construction::GenBecker,
            Criterion::Bazilevic | Criterion::BazilevicQc => Construction::Bazilevic,
            Criterion::Nw | Criterion::MoebiusNw | Criterion::SectorNw => Construction::Nw,
        };
        Self::build(construction, f, criterion.effective_companion(q, params)?, params)
    }

    pub fn construction(&self) -> Construction {
        self.construction
    }

    pub fn f(&self) -> &AnalyticMap {
        &self.f
    }

    pub fn companion(&self) -> &CompanionMap {
        &self.q
    }

    pub fn c(&self) -> Complex64 {
        self.c
    }

    /// Jet of `g = Q ∘ f`, clamping to [`BOUNDARY_CLAMP`] on the unit circle
    /// when `f` does not extend past it.
    fn g_jet(&self, z: Complex64) -> Result<Jet2> {
        let r = z.norm();
        let z = if r > BOUNDARY_CLAMP && r <= 1.0 + 1e-12 && !self.f.extends_past_unit_circle() {
            z * (BOUNDARY_CLAMP / r)
        } else {
            z
        };
        let fj = self.f.eval_jet(z)?;
        Ok(Jet2::compose(self.q.jet(fj.value)?, fj))
    }

    fn p_jet(&self, z: Complex64) -> Result<Jet2> {
        let r = z.norm();
        let z = if r > BOUNDARY_CLAMP && r <= 1.0 + 1e-12 && !self.p.extends_past_unit_circle() {
            z * (BOUNDARY_CLAMP / r)
        } else {
            z
        };
        self.p.eval_jet(z)
    }

    /// `F(z, t)` with its closed-form partial derivatives.
    pub fn eval(&self, z: Complex64, t: f64) -> Result<ChainPoint> {
        let (et, emt) = (t.exp(), (-t).exp());
        match self.construction {
            Construction::GenBecker => {
                let zeta = z * emt;
                let g = self.g_jet(zeta)?;
                let a = (et - emt) / (ONE + self.c);
                let da = (et + emt) / (ONE + self.c);
                Ok(ChainPoint {
                    value: g.value + a * z * g.d1,
                    dt: -zeta * g.d1 + da * z * g.d1 - a * z * zeta * g.d2,
                    z_dz: zeta * g.d1 + a * z * (g.d1 + zeta * g.d2),
                })
            }
            Construction::Nw => {
                let g = self.g_jet(z)?;
                Ok(ChainPoint {
                    value: g.value + z * (et - 1.0),
                    dt: z * et,
                    z_dz: z * g.d1 + z * (et - 1.0),
                })
            }
            Construction::PhiLike => {
                let g = self.g_jet(z)?;
                Ok(ChainPoint { value: g.value * et, dt: g.value * et, z_dz: z * g.d1 * et })
            }
            Construction::Bazilevic => self.eval_bazilevic(z, t),
        }
    }

    fn eval_bazilevic(&self, z: Complex64, t: f64) -> Result<ChainPoint> {
        let s = self.s;
        let alpha = s.re;
        let growth = s * (t.exp() - 1.0);
        let h_of = |lg: Complex64, lp: Complex64| (s * lg).exp() + growth * (lp * alpha).exp();

        let lg0 = self.g_jet(ZERO)?.d1.ln();
        let lp0 = self.p_jet(ZERO)?.d1.ln();
        let h0 = h_of(lg0, lp0);
        if h0 == ZERO {
            return Err(QcError::Branch { z: ZERO, detail: "H(0, t) vanishes".into() });
        }
        let start = [lg0, lp0, h0.ln()];
        let [lg, lp, lh] = track_ray(z, start, |prev, zeta| {
            let g = self.g_jet(zeta)?;
            let p = self.p_jet(zeta)?;
            let Some(lg) = unwrap_log(prev[0], g.value / zeta, zeta)? else { return Ok(None) };
            let Some(lp) = unwrap_log(prev[1], p.value / zeta, zeta)? else { return Ok(None) };
            let Some(lh) = unwrap_log(prev[2], h_of(lg, lp), zeta)? else { return Ok(None) };
            Ok(Some([lg, lp, lh]))
        })?;

        let h = h_of(lg, lp);
        let value = z * (lh / s).exp();
        let dt = value * t.exp() * (lp * alpha).exp() / h;
        let z_dzh = if z == ZERO {
            ZERO
        } else {
            let g = self.g_jet(z)?;
            let p = self.p_jet(z)?;
            s * (s * lg).exp() * (z * g.d1 / g.value - 1.0)
                + growth * alpha * (lp * alpha).exp() * (z * p.d1 / p.value - 1.0)
        };
        Ok(ChainPoint { value, dt, z_dz: value * (ONE + z_dzh / (s * h)) })
    }

    pub fn value(&self, z: Complex64, t: f64) -> Result<Complex64> {
        self.eval(z, t).map(|p| p.value)
    }

    /// `a_1(t) = ∂_z F(0, t)`.
    pub fn a1(&self, t: f64) -> Result<Complex64> {
        let g1 = self.g_jet(ZERO)?.d1;
        let (et, emt) = (t.exp(), (-t).exp());
        Ok(match self.construction {
            Construction::GenBecker => g1 * (emt + (et - emt) / (ONE + self.c)),
            Construction::Nw => g1 + et - 1.0,
            Construction::PhiLike => g1 * et,
            Construction::Bazilevic => {
                let h0 = (self.s * g1.ln()).exp() + self.s * (et - 1.0);
                (h0.ln() / self.s).exp()
            }
        })
    }

    /// `p(z, t) = ∂_t F / (z ∂_z F)`; at `z = 0` the limit `a_1'(t)/a_1(t)`.
    pub fn transition_ratio(&self, z: Complex64, t: f64) -> Result<Complex64> {
        if z == ZERO {
            return self.origin_ratio(t);
        }
        let pt = self.eval(z, t)?;
        if pt.z_dz == ZERO || !pt.z_dz.is_finite() {
            return Err(QcError::Pole { z });
        }
        Ok(pt.dt / pt.z_dz)
    }

    fn origin_ratio(&self, t: f64) -> Result<Complex64> {
        let g = self.g_jet(ZERO)?;
        let (et, emt) = (t.exp(), (-t).exp());
        let r = match self.construction {
            Construction::GenBecker => {
                let a = (et - emt) / (ONE + self.c);
                let da = (et + emt) / (ONE + self.c);
                (da - emt) / (a + emt)
            }
            Construction::Nw => Complex64::new(et, 0.0) / (g.d1 + et - 1.0),
            Construction::PhiLike => {
                if g.value.norm() > 1e-12 {
                    return Err(QcError::Precondition("Q(f(0)) != 0: F(0, t) moves with t".into()));
                }
                ONE
            }
            Construction::Bazilevic => {
                let h0 = (self.s * g.d1.ln()).exp() + self.s * (et - 1.0);
                et / h0
            }
        };
        Ok(r)
    }

    /// Right-hand side of the generalized-Becker ratio identity, computed
    /// from `f` and `Ω` directly:
    /// `e^{-2t} c + (1 - e^{-2t}){ζ f''(ζ)/f'(ζ) + ζ f'(ζ) Ω(f(ζ))}`, `ζ = e^{-t}z`.
    pub fn becker_identity_rhs(&self, z: Complex64, t: f64) -> Result<Complex64> {
        let zeta = z * (-t).exp();
        let fj = self.f.eval_jet(zeta)?;
        let omega = self.q.omega(fj.value)?;
        let e2 = (-2.0 * t).exp();
        Ok(self.c * e2 + (zeta * fj.d2 / fj.d1 + zeta * fj.d1 * omega) * (1.0 - e2))
    }
}

/// `t ∈ {0, 0.1, ..., 2.0}`.
pub fn default_times() -> Vec<f64> {
    time_samples(2.0, 20)
}

pub fn time_samples(t_max: f64, steps: usize) -> Vec<f64> {
    (0..=steps).map(|i| t_max * i as f64 / steps as f64).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainValidation {
    pub samples: usize,
    pub min_re_p: f64,
    pub min_re_p_at: (Complex64, f64),
    pub re_p_positive: bool,
    /// `sup |p - 1|/|p + 1|` over samples.
    pub sup_u_ratio: f64,
    pub sup_u_ratio_at: (Complex64, f64),
    pub dilatation_target: Option<f64>,
    pub in_u_disk: Option<bool>,
    /// `sup |F(z,t)|/|a_1(t)|` over samples with `|z| <= 1/2`.
    pub growth_sup: f64,
    pub a1_moduli: Vec<f64>,
    pub a1_increasing: bool,
    /// First sample at which `p` could not be evaluated.
    pub failure: Option<(Complex64, f64, String)>,
    pub pass: bool,
}

/// Radius of the disk on which the growth proxy is measured.
pub const GROWTH_RADIUS: f64 = 0.5;

/// Check the Pommerenke conditions (and Becker's `p ∈ U(k)` when `k` is
/// given) on `grid × times`.
pub fn validate_chain(chain: &LoewnerChain, grid: &DiskGrid, times: &[f64], k: Option<f64>) -> Result<ChainValidation> {
    if let Some(k) = k {
        check_k(k)?;
    }
    if times.is_empty() {
        return Err(invalid("times", "no time samples"));
    }
    let points = grid.points();
    let pairs: Vec<(Complex64, f64)> = times.iter().flat_map(|&t| points.iter().map(move |&z| (z, t))).collect();
    let evals: Vec<Result<(Complex64, Complex64)>> = map_ordered(&pairs, |&(z, t)| {
        Ok((chain.transition_ratio(z, t)?, chain.value(z, t)?))
    });
    let a1 = times.iter().map(|&t| chain.a1(t).map(|a| a.norm())).collect::<Result<Vec<_>>>()?;

    let mut v = ChainValidation {
        samples: pairs.len(),
        min_re_p: f64::INFINITY,
        min_re_p_at: (ZERO, 0.0),
        re_p_positive: false,
        sup_u_ratio: 0.0,
        sup_u_ratio_at: (ZERO, 0.0),
        dilatation_target: k,
        in_u_disk: None,
        growth_sup: 0.0,
        a1_increasing: a1.windows(2).all(|w| w[1] > w[0]),
        a1_moduli: a1.clone(),
        failure: None,
        pass: false,
    };
    for (i, (&(z, t), r)) in pairs.iter().zip(evals).enumerate() {
        let (p, value) = match r {
            Ok(x) if x.0.is_finite() && x.1.is_finite() => x,
            Ok(_) => {
                v.failure.get_or_insert((z, t, "non-finite value".into()));
                continue;
            }
            Err(e) => {
                v.failure.get_or_insert((z, t, e.to_string()));
                continue;
            }
        };
        if p.re < v.min_re_p {
            v.min_re_p = p.re;
            v.min_re_p_at = (z, t);
        }
        let ur = u_disk_ratio(p);
        if ur > v.sup_u_ratio {
            v.sup_u_ratio = ur;
            v.sup_u_ratio_at = (z, t);
        }
        if z.norm() <= GROWTH_RADIUS {
            let ti = i / points.len();
            v.growth_sup = v.growth_sup.max(value.norm() / a1[ti]);
        }
    }
    v.re_p_positive = v.failure.is_none() && v.min_re_p > 0.0;
    v.in_u_disk = k.map(|k| v.failure.is_none() && v.sup_u_ratio <= k);
    v.pass = v.re_p_positive && v.in_u_disk.unwrap_or(true) && v.growth_sup.is_finite() && v.a1_increasing;
    Ok(v)
}

/// `f̂(re^{iθ}) = F(re^{iθ}, 0)` for `r < 1` and `F(e^{iθ}, log r)` for `r >= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionMap {
    chain: LoewnerChain,
}

impl ExtensionMap {
    pub fn new(chain: LoewnerChain) -> Self {
        Self { chain }
    }

    pub fn chain(&self) -> &LoewnerChain {
        &self.chain
    }

    /// The extension of `g = Q ∘ f`.
    pub fn eval(&self, w: Complex64) -> Result<Complex64> {
        if !w.is_finite() {
            return Err(QcError::NonFinite { z: w });
        }
        let r = w.norm();
        if r < 1.0 {
            self.chain.value(w, 0.0)
        } else {
            self.chain.value(w / r, r.ln())
        }
    }

    /// `Q̂^{-1} ∘ ĝ`: the extension of `f` itself, available when the
    /// companion's own extension is known in closed form.
    pub fn eval_f(&self, w: Complex64) -> Result<Complex64> {
        let g = self.eval(w)?;
        self.chain
            .companion()
            .extension_inverse(g)
            .ok_or_else(|| QcError::Precondition("companion has no closed-form extension".into()))
    }

    /// Largest jump `|f̂((1+δ)e^{iθ}) - f̂((1-δ)e^{iθ})|` over `n` angles.
    pub fn continuity_gap(&self, n: usize, delta: f64) -> Result<(f64, f64)> {
        let mut worst = (0.0, 0.0);
        for j in 0..n {
            let theta = TAU * j as f64 / n as f64;
            let u = Complex64::from_polar(1.0, theta);
            let gap = (self.eval(u * (1.0 + delta))? - self.eval(u * (1.0 - delta))?).norm();
            if gap > worst.0 {
                worst = (gap, theta);
            }
        }
        Ok(worst)
    }
}
