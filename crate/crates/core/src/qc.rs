//! Finite-difference Wirtinger derivatives, Beltrami coefficients and the
//! composition law for dilatation bounds.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::companion::CompanionBase;
use crate::disk::check_k;
use crate::error::{invalid, QcError, Result};
use crate::grid::AnnulusGrid;
use crate::loewner::ExtensionMap;
use crate::par::map_ordered;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Default stencil step.
pub const DEFAULT_STEP: f64 = 1e-5;
/// Largest accepted change of `sup|μ|` when the step is halved.
pub const STEP_STABILITY: f64 = 5e-3;
/// `|∂_z f|` below this marks a sample as indeterminate.
pub const DEGENERATE_DZ: f64 = 1e-10;

/// Dilatation of a composition of a `k1`- and a `k2`-quasiconformal map:
/// `(k1 + k2)/(1 + k1 k2)`.
pub fn compose_dilatation(k1: f64, k2: f64) -> Result<f64> {
    check_k(k1)?;
    check_k(k2)?;
    Ok((k1 + k2) / (1.0 + k1 * k2))
}

/// `K = (1 + k)/(1 - k)`; infinite for `k >= 1`.
pub fn maximal_dilatation(k: f64) -> f64 {
    if k >= 1.0 {
        f64::INFINITY
    } else {
        (1.0 + k) / (1.0 - k)
    }
}

/// Central four-point stencil for `(∂_z f, ∂_z̄ f)`.
pub fn wirtinger<F>(map: F, z: Complex64, h: f64) -> Result<(Complex64, Complex64)>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    if !(h > 0.0) {
        return Err(invalid("h", format!("{h} must be positive")));
    }
    let dx = map(z + h)? - map(z - h)?;
    let dy = map(z + I * h)? - map(z - I * h)?;
    if !dx.is_finite() || !dy.is_finite() {
        return Err(QcError::NonFinite { z });
    }
    let dz = (dx - I * dy) / (4.0 * h);
    let dzbar = (dx + I * dy) / (4.0 * h);
    Ok((dz, dzbar))
}

/// `μ = ∂_z̄ f / ∂_z f`; `None` when `|∂_z f|` is degenerate.
pub fn beltrami_at<F>(map: F, z: Complex64, h: f64) -> Result<Option<Complex64>>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let (dz, dzbar) = wirtinger(map, z, h)?;
    Ok((dz.norm() >= DEGENERATE_DZ).then(|| dzbar / dz))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BeltramiSample {
    pub z: Complex64,
    /// `None` for an indeterminate sample.
    pub mu: Option<Complex64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BeltramiEstimate {
    pub samples: Vec<BeltramiSample>,
    pub sup_abs_mu: f64,
    pub worst_point: Complex64,
    /// `(1 + sup|μ|)/(1 - sup|μ|)`.
    pub max_dilatation: f64,
    pub h: f64,
    /// `sup|μ|` recomputed with step `h/2`.
    pub sup_abs_mu_half_step: f64,
    /// Whether halving the step moved `sup|μ|` by less than [`STEP_STABILITY`].
    pub stable: bool,
    pub indeterminate: usize,
    /// Points dropped because their stencil would straddle a seam.
    pub skipped: usize,
}

impl BeltramiEstimate {
    pub fn step_change(&self) -> f64 {
        (self.sup_abs_mu - self.sup_abs_mu_half_step).abs()
    }
}

/// Beltrami coefficients of `map` at `points`. Points for which
/// `near_seam(z, h)` holds are skipped; evaluation errors abort.
pub fn beltrami_on_points<F, S>(map: F, points: &[Complex64], h: f64, near_seam: S) -> Result<BeltramiEstimate>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync + Send,
    S: Fn(Complex64, f64) -> bool + Sync + Send,
{
    if !(h > 0.0) {
        return Err(invalid("h", format!("{h} must be positive")));
    }
    let kept: Vec<Complex64> = points.iter().copied().filter(|&z| !near_seam(z, h)).collect();
    let skipped = points.len() - kept.len();
    let results: Vec<Result<(Option<Complex64>, Option<Complex64>)>> = map_ordered(&kept, |&z| {
        Ok((beltrami_at(&map, z, h)?, beltrami_at(&map, z, 0.5 * h)?))
    });
    let mut samples = Vec::with_capacity(kept.len());
    let mut sup = 0.0f64;
    let mut sup_half = 0.0f64;
    let mut worst = kept.first().copied().unwrap_or_default();
    let mut indeterminate = 0;
    for (&z, r) in kept.iter().zip(results) {
        let (mu, mu_half) = r?;
        match mu {
            Some(m) => {
                if m.norm() > sup {
                    sup = m.norm();
                    worst = z;
                }
            }
            None => indeterminate += 1,
        }
        if let Some(m) = mu_half {
            sup_half = sup_half.max(m.norm());
        }
        samples.push(BeltramiSample { z, mu });
    }
    Ok(BeltramiEstimate {
        samples,
        sup_abs_mu: sup,
        worst_point: worst,
        max_dilatation: maximal_dilatation(sup),
        h,
        sup_abs_mu_half_step: sup_half,
        stable: (sup - sup_half).abs() < STEP_STABILITY,
        indeterminate,
        skipped,
    })
}

/// Returns a pair of distinct mesh points whose images nearly coincide.
pub fn injectivity_violation<F>(map: F, mesh: &[Complex64], tol: f64) -> Result<Option<(Complex64, Complex64)>>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let images = mesh.iter().map(|&z| map(z)).collect::<Result<Vec<_>>>()?;
    for i in 0..mesh.len() {
        for j in (i + 1)..mesh.len() {
            if mesh[i] != mesh[j] && (images[i] - images[j]).norm() <= tol {
                return Ok(Some((mesh[i], mesh[j])));
            }
        }
    }
    Ok(None)
}

/// Which map of an [`ExtensionMap`] to measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtensionTarget {
    /// `ĝ`, the extension of `Q ∘ f` given by the chain.
    Chain,
    /// `Q̂^{-1} ∘ ĝ`, the extension of `f`.
    Function,
}

/// Half-width of the band around `|z| = 1` excluded from measurement, in
/// units of the step.
pub const CIRCLE_GUARD: f64 = 3.0;

/// Beltrami coefficients of an extension at arbitrary points. Samples within
/// `3h` of the unit circle are skipped, as are (for [`ExtensionTarget::Function`]
/// with a sector companion) samples whose stencil straddles the line where
/// `Q̂^{-1}` is not smooth.
pub fn extension_beltrami(
    ext: &ExtensionMap,
    points: &[Complex64],
    h: f64,
    target: ExtensionTarget,
) -> Result<BeltramiEstimate> {
    let near_circle = move |z: Complex64, h: f64| (z.norm() - 1.0).abs() < CIRCLE_GUARD * h;
    match target {
        ExtensionTarget::Chain => beltrami_on_points(|z| ext.eval(z), points, h, near_circle),
        ExtensionTarget::Function => {
            let seam_direction = match ext.chain().companion().base() {
                CompanionBase::Sector { scale, .. } => Some(*scale),
                _ => None,
            };
            let straddles = move |z: Complex64, h: f64| -> bool {
                let Some(dir) = seam_direction else { return false };
                let side = |w: Complex64| ext.eval(w).map(|g| (g / dir).im >= 0.0);
                let center = side(z);
                [z + h, z - h, z + I * h, z - I * h]
                    .into_iter()
                    .any(|w| side(w).ok() != center.clone().ok())
            };
            beltrami_on_points(|z| ext.eval_f(z), points, h, move |z, h| near_circle(z, h) || straddles(z, h))
        }
    }
}

/// Beltrami estimate on an annulus that stays clear of the unit circle.
pub fn beltrami_on_grid(ext: &ExtensionMap, grid: &AnnulusGrid, h: f64, target: ExtensionTarget) -> Result<BeltramiEstimate> {
    grid.validate()?;
    if grid.radii().iter().any(|r| (r - 1.0).abs() <= CIRCLE_GUARD * h) {
        return Err(QcError::Precondition(format!(
            "annulus radii must avoid [1 - {0}h, 1 + {0}h]",
            CIRCLE_GUARD
        )));
    }
    extension_beltrami(ext, &grid.points(), h, target)
}
