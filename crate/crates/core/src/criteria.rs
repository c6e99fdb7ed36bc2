//! Pointwise criterion functionals and their sup-estimation over disk grids.
//!
//! A passing report means the inequality held at every sample of the grid
//! (plus one refinement around the worst sample). It is numerical evidence,
//! not a proof: suprema are often only approached as `|z| → 1`.

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::branch::radial_log_ratio;
use crate::companion::CompanionMap;
use crate::disk::{check_k, u_disk_ratio};
use crate::error::{invalid, QcError, Result};
use crate::grid::DiskGrid;
use crate::jet::Jet2;
use crate::map::AnalyticMap;
use crate::moebius::MoebiusMap;
use crate::par::map_ordered;
use crate::qc::compose_dilatation;
use crate::sector::{sector_containment, SectorDomain};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Minimum distance between `f(grid)` and an excluded point (pole, `c2`).
pub const IMAGE_EXCLUSION: f64 = 1e-9;

fn jet_of_composition(f: &AnalyticMap, q: &CompanionMap, z: Complex64) -> Result<(Jet2, Jet2)> {
    let fj = f.eval_jet(z)?;
    let qj = q.jet(fj.value)?;
    Ok((fj, Jet2::compose(qj, fj)))
}

/// `z f'(z) / Φ(f(z))` with `Φ = e^{iλ} Q/Q'`; at `z = 0` the limit
/// `f'(0)/Φ'(0)` is returned when `Φ(f(0)) = 0`.
pub fn phi_like_value(f: &AnalyticMap, q: &CompanionMap, lambda: f64, z: Complex64) -> Result<Complex64> {
    let fj = f.eval_jet(z)?;
    let qj = q.jet(fj.value)?;
    if qj.d1 == ZERO {
        return Err(QcError::Pole { z });
    }
    let rot = Complex64::from_polar(1.0, lambda);
    let phi = rot * qj.value / qj.d1;
    if z == ZERO && phi == ZERO {
        let dphi = rot * (ONE - qj.value * qj.d2 / (qj.d1 * qj.d1));
        if dphi == ZERO {
            return Err(QcError::Pole { z });
        }
        return Ok(fj.d1 / dphi);
    }
    if phi == ZERO {
        return Err(QcError::Pole { z });
    }
    Ok(z * fj.d1 / phi)
}

/// `z f''/f' + z f' Ω(f)` with `Ω = Q''/Q'`.
pub fn becker_bracket(f: &AnalyticMap, q: &CompanionMap, z: Complex64) -> Result<Complex64> {
    let fj = f.eval_jet(z)?;
    if fj.d1 == ZERO {
        return Err(QcError::Pole { z });
    }
    let omega = q.omega(fj.value)?;
    Ok(z * fj.d2 / fj.d1 + z * fj.d1 * omega)
}

/// `c|z|^2 + (1 - |z|^2) { z f''/f' + z f' Ω(f) }`.
pub fn gen_becker_value(f: &AnalyticMap, q: &CompanionMap, c: Complex64, z: Complex64) -> Result<Complex64> {
    let r2 = z.norm_sqr();
    Ok(c * r2 + becker_bracket(f, q, z)? * (1.0 - r2))
}

/// `f'(z) Q'(f(z))`.
pub fn nw_value(f: &AnalyticMap, q: &CompanionMap, z: Complex64) -> Result<Complex64> {
    let (_, g) = jet_of_composition(f, q, z)?;
    Ok(g.d1)
}

/// `f'(z) (f(z)/z)^{s-1} Ψ(f(z)) / (p(z)/z)^α` where `Ψ` is the view
/// `(Q(w)/w)^{s-1} Q'(w)` of the companion, so the product equals
/// `g'(z) (g(z)/z)^{s-1} / (p(z)/z)^α` for `g = Q ∘ f`. Powers follow the
/// continuous branch along `[0, z]`. Requires `Q(f(0)) = 0` and `p(0) = 0`.
pub fn gen_bazilevic_value(
    f: &AnalyticMap,
    q: &CompanionMap,
    s: Complex64,
    p: &AnalyticMap,
    z: Complex64,
) -> Result<Complex64> {
    let g_ratio = |w: Complex64| -> Result<Complex64> {
        let (_, g) = jet_of_composition(f, q, w)?;
        Ok(if w == ZERO { g.d1 } else { g.value / w })
    };
    let p_ratio = |w: Complex64| -> Result<Complex64> {
        let pj = p.eval_jet(w)?;
        Ok(if w == ZERO { pj.d1 } else { pj.value / w })
    };
    check_origin_fixed(f, q, p)?;
    let lg = radial_log_ratio(z, g_ratio)?;
    let lp = radial_log_ratio(z, p_ratio)?;
    let (_, g) = jet_of_composition(f, q, z)?;
    Ok(g.d1 * ((s - 1.0) * lg - s.re * lp).exp())
}

pub(crate) fn check_origin_fixed(f: &AnalyticMap, q: &CompanionMap, p: &AnalyticMap) -> Result<()> {
    let (_, g0) = jet_of_composition(f, q, ZERO)?;
    if g0.value.norm() > 1e-12 {
        return Err(QcError::Precondition(format!("Q(f(0)) = {} must vanish", g0.value)));
    }
    if p.eval(ZERO)?.norm() > 1e-12 {
        return Err(QcError::Precondition("p(0) must vanish".into()));
    }
    Ok(())
}

/// `c1|z|^2 + (1-|z|^2){ z f''/f' - 2 z f'/(f - c2) }`.
pub fn moebius_becker_value(f: &AnalyticMap, c1: Complex64, c2: Complex64, z: Complex64) -> Result<Complex64> {
    let fj = f.eval_jet(z)?;
    if fj.d1 == ZERO || fj.value == c2 {
        return Err(QcError::Pole { z });
    }
    let r2 = z.norm_sqr();
    Ok(c1 * r2 + (z * fj.d2 / fj.d1 - z * fj.d1 * 2.0 / (fj.value - c2)) * (1.0 - r2))
}

/// `f'(z) / (γ f(z) + δ)^2`.
pub fn moebius_nw_value(f: &AnalyticMap, gamma: Complex64, delta: Complex64, z: Complex64) -> Result<Complex64> {
    let fj = f.eval_jet(z)?;
    let den = gamma * fj.value + delta;
    if den == ZERO {
        return Err(QcError::Pole { z });
    }
    Ok(fj.d1 / (den * den))
}

/// `c|z|^2 + (1-|z|^2){ z f''/f' + (1/a - 1) z f'/(f - w0) }`.
pub fn sector_becker_value(f: &AnalyticMap, sector: &SectorDomain, c: Complex64, z: Complex64) -> Result<Complex64> {
    let fj = f.eval_jet(z)?;
    if fj.d1 == ZERO || fj.value == sector.w0 {
        return Err(QcError::Pole { z });
    }
    let r2 = z.norm_sqr();
    let bracket = z * fj.d2 / fj.d1 + z * fj.d1 * (1.0 / sector.a - 1.0) / (fj.value - sector.w0);
    Ok(c * r2 + bracket * (1.0 - r2))
}

/// `f'(z) (1 - f(z)/w0)^{1/a - 1}`, the power taken on the sector's branch
/// (it agrees with the principal branch wherever that is continuous on Δ).
pub fn sector_nw_value(f: &AnalyticMap, sector: &SectorDomain, z: Complex64) -> Result<Complex64> {
    let fj = f.eval_jet(z)?;
    if !sector.contains(fj.value) {
        return Err(QcError::Precondition(format!("f({z}) = {} is outside the sector", fj.value)));
    }
    let e = 1.0 / sector.a - 1.0;
    let log_ratio = |w: Complex64| -> Complex64 {
        let u = sector.to_standard(w);
        Complex64::new(u.norm().ln(), sector.relative_angle(w))
    };
    let l = log_ratio(fj.value) - log_ratio(ZERO);
    Ok(fj.d1 * (l * e).exp())
}

/// Which scalar statistic a criterion bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CriterionKind {
    /// `|V| <= threshold`.
    Bound,
    /// `V ∈ U(threshold)`, tracked through `|V - 1|/|V + 1|`.
    UDisk,
    /// `Re V > 0` (strict), tracked through `-Re V`.
    Positive,
}

impl CriterionKind {
    fn statistic(self, v: Complex64) -> f64 {
        match self {
            CriterionKind::Bound => v.norm(),
            CriterionKind::UDisk => u_disk_ratio(v),
            CriterionKind::Positive => -v.re,
        }
    }

    fn margin(self, v: Complex64, threshold: f64) -> f64 {
        match self {
            CriterionKind::Bound => threshold - v.norm(),
            CriterionKind::UDisk => threshold * (v + 1.0).norm() - (v - 1.0).norm(),
            CriterionKind::Positive => v.re,
        }
    }

    fn passes(self, sup: f64, threshold: f64) -> bool {
        match self {
            CriterionKind::Bound | CriterionKind::UDisk => sup <= threshold,
            CriterionKind::Positive => sup < 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionReport {
    pub criterion: String,
    pub kind: CriterionKind,
    pub threshold: f64,
    /// Sup of the statistic: `|V|`, `|V-1|/|V+1|`, or `-Re V` by kind.
    pub sup_value: f64,
    pub worst_point: Complex64,
    /// Criterion value at the worst point (NaN if evaluation failed there).
    pub worst_value: Complex64,
    pub pass: bool,
    /// Smallest pointwise margin; non-negative (positive for `Re > 0`) on pass.
    pub margin: f64,
    pub samples: usize,
    /// Dilatation bound of the extension when the criterion passes.
    pub concluded_dilatation: Option<f64>,
    /// Evaluation failure that forced the report to fail.
    pub failure: Option<String>,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "criterion={}", self.criterion)?;
        writeln!(f, "kind={:?}", self.kind)?;
        writeln!(f, "threshold={:.16e}", self.threshold)?;
        writeln!(f, "sup_value={:.16e}", self.sup_value)?;
        writeln!(f, "worst_point={:.16e},{:.16e}", self.worst_point.re, self.worst_point.im)?;
        writeln!(f, "pass={}", self.pass)?;
        writeln!(f, "margin={:.16e}", self.margin)?;
        writeln!(f, "samples={}", self.samples)?;
        match self.concluded_dilatation {
            Some(k) => writeln!(f, "concluded_dilatation={k:.16e}")?,
            None => writeln!(f, "concluded_dilatation=none")?,
        }
        if let Some(e) = &self.failure {
            writeln!(f, "failure={e}")?;
        }
        Ok(())
    }
}

struct Sample {
    z: Complex64,
    value: Result<Complex64>,
}

/// Scan `functional` over `grid`, refine once around the worst sample, and
/// judge the statistic of `kind` against `threshold`.
pub fn sup_over_grid<F>(
    criterion: &str,
    kind: CriterionKind,
    threshold: f64,
    grid: &DiskGrid,
    functional: F,
) -> Result<CriterionReport>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync + Send,
{
    grid.validate()?;
    let points = grid.points();
    let samples: Vec<Sample> = map_ordered(&points, |&z| Sample { z, value: functional(z) });

    let mut report = CriterionReport {
        criterion: criterion.to_string(),
        kind,
        threshold,
        sup_value: f64::NEG_INFINITY,
        worst_point: points[0],
        worst_value: Complex64::new(f64::NAN, f64::NAN),
        pass: false,
        margin: f64::INFINITY,
        samples: 0,
        concluded_dilatation: None,
        failure: None,
    };
    absorb(&mut report, &samples);
    if report.failure.is_none() {
        let local = refinement_points(grid, report.worst_point);
        let refined: Vec<Sample> = map_ordered(&local, |&z| Sample { z, value: functional(z) });
        absorb(&mut report, &refined);
    }
    report.pass = report.failure.is_none() && kind.passes(report.sup_value, threshold);
    Ok(report)
}

fn absorb(report: &mut CriterionReport, samples: &[Sample]) {
    for s in samples {
        report.samples += 1;
        if report.failure.is_some() {
            continue;
        }
        let v = match &s.value {
            Ok(v) if v.is_finite() => *v,
            Ok(_) => {
                fail_at(report, s.z, format!("non-finite value at {}", s.z));
                continue;
            }
            Err(e) => {
                fail_at(report, s.z, e.to_string());
                continue;
            }
        };
        let stat = report.kind.statistic(v);
        if stat > report.sup_value {
            report.sup_value = stat;
            report.worst_point = s.z;
            report.worst_value = v;
        }
        report.margin = report.margin.min(report.kind.margin(v, report.threshold));
    }
}

fn fail_at(report: &mut CriterionReport, z: Complex64, msg: String) {
    report.failure = Some(msg);
    report.sup_value = f64::INFINITY;
    report.worst_point = z;
    report.worst_value = Complex64::new(f64::NAN, f64::NAN);
    report.margin = f64::NEG_INFINITY;
}

/// A 9×9 polar patch spanning one grid cell on each side of `center`,
/// clipped to the grid's disk.
fn refinement_points(grid: &DiskGrid, center: Complex64) -> Vec<Complex64> {
    let radii = grid.radii();
    let r = center.norm();
    let idx = radii.iter().position(|&x| x >= r - 1e-15).unwrap_or(radii.len() - 1);
    let lo = if idx == 0 { 0.0 } else { radii[idx - 1] };
    let hi = radii.get(idx + 1).copied().unwrap_or(grid.max_radius());
    let dt = grid.angle_step();
    let t0 = center.arg();
    let mut pts = Vec::with_capacity(81);
    for i in 0..9 {
        let rr = if i < 4 { lo + (r - lo) * i as f64 / 4.0 } else { r + (hi - r) * (i - 4) as f64 / 4.0 };
        for j in 0..9 {
            let t = t0 + dt * (j as f64 - 4.0) / 4.0;
            pts.push(Complex64::from_polar(rr.min(grid.max_radius()), t));
        }
    }
    pts
}

/// Parameters shared by all criteria; unused ones are ignored.
#[derive(Debug, Clone, PartialEq)]
pub struct CriterionParams {
    /// Bound for the Möbius and sector specializations.
    pub k: f64,
    /// Bound for the generalized Becker and Noshiro–Warschawski criteria.
    pub k_prime: f64,
    /// Constant `c` (also `c1`); `|c| <= k_prime`.
    pub c: Complex64,
    /// `s = α + iβ`, `Re s > 0`.
    pub s: Complex64,
    /// Starlike `p` with `p(0) = 0`, `p'(0) = 1`.
    pub p: AnalyticMap,
    /// Rotation `λ` in `Φ = e^{iλ} Q/Q'`.
    pub phi_rotation: f64,
    pub c2: Complex64,
    pub gamma: Complex64,
    pub delta: Complex64,
    pub sector: Option<SectorDomain>,
}

impl Default for CriterionParams {
    fn default() -> Self {
        Self {
            k: 0.5,
            k_prime: 0.5,
            c: ZERO,
            s: ONE,
            p: AnalyticMap::identity(),
            phi_rotation: 0.0,
            c2: Complex64::new(-1.0, 0.0),
            gamma: ONE,
            delta: ONE,
            sector: None,
        }
    }
}

impl CriterionParams {
    pub fn validate(&self) -> Result<()> {
        check_k(self.k)?;
        check_k(self.k_prime)?;
        if self.s.re <= 0.0 {
            return Err(invalid("s", format!("Re s = {} must be positive", self.s.re)));
        }
        Ok(())
    }

    pub fn require_sector(&self) -> Result<SectorDomain> {
        self.sector.ok_or_else(|| invalid("sector", "criterion needs a sector domain"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    /// `Re z f'/Φ(f) > 0`.
    PhiLike,
    /// `z f'/Φ(f) ∈ U(k')`.
    PhiLikeQc,
    /// `|c|z|^2 + (1-|z|^2){z f''/f' + z f' Ω(f)}| <= k'`.
    GenBecker,
    /// Bazilevič positivity.
    Bazilevic,
    /// Bazilevič value in `U(k')`.
    BazilevicQc,
    /// `f' Q'(f) ∈ U(k')`.
    Nw,
    /// Möbius specialization of `GenBecker` with pole `c2`, bound `k`.
    MoebiusBecker,
    /// `f'/(γ f + δ)^2 ∈ U(k)`.
    MoebiusNw,
    /// Sector specialization of `GenBecker`, bound `k`.
    SectorBecker,
    /// `f'(1 - f/w0)^{1/a-1} ∈ U(k)`.
    SectorNw,
}

impl Criterion {
    pub const ALL: [Criterion; 10] = [
        Criterion::PhiLike,
        Criterion::PhiLikeQc,
        Criterion::GenBecker,
        Criterion::Bazilevic,
        Criterion::BazilevicQc,
        Criterion::Nw,
        Criterion::MoebiusBecker,
        Criterion::MoebiusNw,
        Criterion::SectorBecker,
        Criterion::SectorNw,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Criterion::PhiLike => "phi_like",
            Criterion::PhiLikeQc => "phi_like_qc",
            Criterion::GenBecker => "gen_becker",
            Criterion::Bazilevic => "bazilevic",
            Criterion::BazilevicQc => "bazilevic_qc",
            Criterion::Nw => "nw",
            Criterion::MoebiusBecker => "moebius_becker",
            Criterion::MoebiusNw => "moebius_nw",
            Criterion::SectorBecker => "sector_becker",
            Criterion::SectorNw => "sector_nw",
        }
    }

    pub fn from_id(id: &str) -> Option<Criterion> {
        Criterion::ALL.into_iter().find(|c| c.id() == id)
    }

    pub fn kind(self) -> CriterionKind {
        match self {
            Criterion::PhiLike | Criterion::Bazilevic => CriterionKind::Positive,
            Criterion::GenBecker | Criterion::MoebiusBecker | Criterion::SectorBecker => CriterionKind::Bound,
            _ => CriterionKind::UDisk,
        }
    }

    /// Bound the statistic is compared against.
    pub fn threshold(self, params: &CriterionParams) -> f64 {
        match self {
            Criterion::PhiLike | Criterion::Bazilevic => 0.0,
            Criterion::PhiLikeQc | Criterion::GenBecker | Criterion::BazilevicQc | Criterion::Nw => params.k_prime,
            _ => params.k,
        }
    }

    /// The companion the criterion actually uses: specializations build
    /// their own from `params`.
    pub fn effective_companion(self, q: &CompanionMap, params: &CriterionParams) -> Result<CompanionMap> {
        Ok(match self {
            Criterion::MoebiusBecker => CompanionMap::moebius(MoebiusMap::with_pole(params.c2)?),
            Criterion::MoebiusNw => CompanionMap::moebius(moebius_from_gamma_delta(params.gamma, params.delta)?),
            Criterion::SectorBecker => CompanionMap::sector(params.require_sector()?),
            Criterion::SectorNw => CompanionMap::normalized_sector(params.require_sector()?)?,
            _ => q.clone(),
        })
    }
}

/// A Möbius map with denominator `γw + δ`; `γ ≠ 0` is required.
pub fn moebius_from_gamma_delta(gamma: Complex64, delta: Complex64) -> Result<MoebiusMap> {
    if gamma.norm() < 1e-12 {
        return Err(invalid("gamma", "gamma must be nonzero (gamma = 0 is the affine case)"));
    }
    // α = 0, β = -1/γ gives αδ - βγ = 1.
    MoebiusMap::new(ZERO, -gamma.inv(), gamma, delta)
}

/// Evaluate `criterion` on the grid with preconditions checked first.
pub fn check(
    criterion: Criterion,
    f: &AnalyticMap,
    companion: &CompanionMap,
    params: &CriterionParams,
    grid: &DiskGrid,
) -> Result<CriterionReport> {
    let q = check_preconditions(criterion, f, companion, params, grid)?;
    let kind = criterion.kind();
    let mut report = sup_over_grid(criterion.id(), kind, criterion.threshold(params), grid, |z| {
        criterion_value(criterion, f, &q, params, z)
    })?;
    if report.pass && kind != CriterionKind::Positive {
        report.concluded_dilatation = Some(compose_dilatation(report.threshold, q.extension_dilatation())?);
    }
    Ok(report)
}

/// Checks everything `check` requires before sampling and returns the
/// effective companion.
pub fn check_preconditions(
    criterion: Criterion,
    f: &AnalyticMap,
    companion: &CompanionMap,
    params: &CriterionParams,
    grid: &DiskGrid,
) -> Result<CompanionMap> {
    params.validate()?;
    grid.validate()?;
    let points = grid.points();
    let q = criterion.effective_companion(companion, params)?;
    match criterion {
        Criterion::PhiLike | Criterion::PhiLikeQc => {}
        Criterion::GenBecker => {
            if params.c.norm() > params.k_prime {
                return Err(invalid("c", format!("|c| = {} exceeds k' = {}", params.c.norm(), params.k_prime)));
            }
            require_origin_derivative(&q)?;
        }
        Criterion::Bazilevic | Criterion::BazilevicQc => {
            check_origin_fixed(f, &q, &params.p)?;
            check_starlike(&params.p, grid)?;
        }
        Criterion::Nw => require_origin_derivative(&q)?,
        Criterion::MoebiusBecker => {
            require_excluded(f, params.c2, &points, "c2")?;
            if params.c.norm() > params.k {
                return Err(invalid("c", format!("|c1| = {} exceeds k = {}", params.c.norm(), params.k)));
            }
        }
        Criterion::MoebiusNw => {
            let m = moebius_from_gamma_delta(params.gamma, params.delta)?;
            require_excluded(f, m.pole().expect("gamma checked nonzero"), &points, "-delta/gamma")?;
        }
        Criterion::SectorBecker | Criterion::SectorNw => {
            let sector = params.require_sector()?;
            let containment = sector_containment(f, &sector, &points)?;
            if !containment.contained {
                return Err(QcError::Precondition(format!(
                    "f({}) is not inside the sector",
                    containment.worst_point
                )));
            }
            if criterion == Criterion::SectorBecker && params.c.norm() > params.k {
                return Err(invalid("c", format!("|c| = {} exceeds k = {}", params.c.norm(), params.k)));
            }
        }
    }
    Ok(q)
}

/// Pointwise value of `criterion`; `q` is the effective companion.
pub fn criterion_value(
    criterion: Criterion,
    f: &AnalyticMap,
    q: &CompanionMap,
    params: &CriterionParams,
    z: Complex64,
) -> Result<Complex64> {
    match criterion {
        Criterion::PhiLike | Criterion::PhiLikeQc => phi_like_value(f, q, params.phi_rotation, z),
        Criterion::GenBecker => gen_becker_value(f, q, params.c, z),
        Criterion::Bazilevic | Criterion::BazilevicQc => gen_bazilevic_value(f, q, params.s, &params.p, z),
        Criterion::Nw => nw_value(f, q, z),
        Criterion::MoebiusBecker => moebius_becker_value(f, params.c, params.c2, z),
        Criterion::MoebiusNw => moebius_nw_value(f, params.gamma, params.delta, z),
        Criterion::SectorBecker => sector_becker_value(f, &params.require_sector()?, params.c, z),
        Criterion::SectorNw => sector_nw_value(f, &params.require_sector()?, z),
    }
}

fn require_origin_derivative(q: &CompanionMap) -> Result<()> {
    if q.origin_derivative_nonzero() {
        Ok(())
    } else {
        Err(QcError::Precondition("companion needs Q'(0) != 0".into()))
    }
}

fn require_excluded(f: &AnalyticMap, point: Complex64, grid: &[Complex64], name: &str) -> Result<()> {
    let mut nearest = (f64::INFINITY, ZERO);
    for &z in grid {
        let d = (f.eval(z)? - point).norm();
        if d < nearest.0 {
            nearest = (d, z);
        }
    }
    if nearest.0 <= IMAGE_EXCLUSION {
        return Err(QcError::Precondition(format!("{name} = {point} is attained near f({})", nearest.1)));
    }
    let rmax = grid.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if winding_number(f, point, rmax)? != 0 {
        return Err(QcError::Precondition(format!("{name} = {point} lies inside f(|z| < {rmax})")));
    }
    Ok(())
}

/// Winding number of `f(r e^{it}) - point` about the origin.
fn winding_number(f: &AnalyticMap, point: Complex64, r: f64) -> Result<i64> {
    const SAMPLES: usize = 4096;
    let mut prev = f.eval(Complex64::new(r, 0.0))? - point;
    let mut total = 0.0;
    for j in 1..=SAMPLES {
        let z = Complex64::from_polar(r, std::f64::consts::TAU * j as f64 / SAMPLES as f64);
        let cur = f.eval(z)? - point;
        total += (cur / prev).arg();
        prev = cur;
    }
    Ok((total / std::f64::consts::TAU).round() as i64)
}

/// `Re z p'/p > 0` on the grid, the starlikeness test for `p`.
pub fn check_starlike(p: &AnalyticMap, grid: &DiskGrid) -> Result<()> {
    let pj0 = p.eval_jet(ZERO)?;
    if pj0.value.norm() > 1e-12 || (pj0.d1 - ONE).norm() > 1e-12 {
        return Err(QcError::Precondition("p must satisfy p(0) = 0, p'(0) = 1".into()));
    }
    let report = sup_over_grid("starlike_p", CriterionKind::Positive, 0.0, grid, |z| {
        if z == ZERO {
            return Ok(ONE);
        }
        let pj = p.eval_jet(z)?;
        if pj.value == ZERO {
            return Err(QcError::Pole { z });
        }
        Ok(z * pj.d1 / pj.value)
    })?;
    if report.pass {
        Ok(())
    } else {
        Err(QcError::Precondition(format!("p is not starlike on the grid (worst point {})", report.worst_point)))
    }
}
