//! Sector domains, the conformal map onto the upper half-plane, its
//! quasiconformal extension to the plane, and sector fitting for bounded maps.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, QcError, Result};
use crate::jet::Jet2;
use crate::map::AnalyticMap;

/// `Δ(w0, λ0, a)`: vertex `w0`, first boundary ray in direction `πλ0`,
/// opening `πa`. Angles are in units of π.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectorDomain {
    pub w0: Complex64,
    pub lambda0: f64,
    pub a: f64,
}

impl SectorDomain {
    pub fn new(w0: Complex64, lambda0: f64, a: f64) -> Result<Self> {
        if !(a > 0.0 && a < 2.0) {
            return Err(invalid("a", format!("{a} not in (0, 2)")));
        }
        if !lambda0.is_finite() || !w0.is_finite() {
            return Err(invalid("sector", "non-finite vertex or direction"));
        }
        Ok(Self { w0, lambda0: lambda0.rem_euclid(2.0), a })
    }

    /// Quasiconformal dilatation of the extended map: `|1 - a|`.
    pub fn extension_dilatation(&self) -> f64 {
        (1.0 - self.a).abs()
    }

    fn rotation(&self) -> Complex64 {
        Complex64::from_polar(1.0, -PI * self.lambda0)
    }

    /// `e^{-iπλ0}(w - w0)`: the sector moved to `Δ(0, 0, a)`.
    pub fn to_standard(&self, w: Complex64) -> Complex64 {
        self.rotation() * (w - self.w0)
    }

    pub fn from_standard(&self, u: Complex64) -> Complex64 {
        self.w0 + u / self.rotation()
    }

    /// Argument of `to_standard(w)` on the branch cut opposite the bisector,
    /// in `(πa/2 - π, πa/2 + π]`.
    pub fn relative_angle(&self, w: Complex64) -> f64 {
        let half = 0.5 * PI * self.a;
        let u = self.to_standard(w) * Complex64::from_polar(1.0, -half);
        u.arg() + half
    }

    pub fn contains(&self, w: Complex64) -> bool {
        if w == self.w0 || !w.is_finite() {
            return false;
        }
        let t = self.relative_angle(w);
        t > 0.0 && t < PI * self.a
    }

    /// Signed angular distance to the nearer boundary ray (positive inside).
    pub fn angular_margin(&self, w: Complex64) -> f64 {
        let t = self.relative_angle(w);
        t.min(PI * self.a - t)
    }

    /// `Q2(w) = (e^{-iπλ0}(w - w0))^{1/a}`, onto the upper half-plane.
    pub fn q2_apply(&self, w: Complex64) -> Result<Complex64> {
        if !self.contains(w) {
            return Err(QcError::Precondition(format!("{w} is not in the sector")));
        }
        Ok(self.q2_continued(w))
    }

    /// `Q2` continued to the plane slit along the ray opposite the bisector.
    pub(crate) fn q2_continued(&self, w: Complex64) -> Complex64 {
        let u = self.to_standard(w);
        Complex64::from_polar(u.norm().powf(1.0 / self.a), self.relative_angle(w) / self.a)
    }

    pub fn q2_jet(&self, w: Complex64) -> Result<Jet2> {
        let value = self.q2_apply(w)?;
        Ok(self.jet_from_value(w, value))
    }

    pub(crate) fn q2_jet_continued(&self, w: Complex64) -> Result<Jet2> {
        if w == self.w0 {
            return Err(QcError::Pole { z: w });
        }
        Ok(self.jet_from_value(w, self.q2_continued(w)))
    }

    fn jet_from_value(&self, w: Complex64, value: Complex64) -> Jet2 {
        let inv_a = 1.0 / self.a;
        let d1 = self.rotation() * value / self.to_standard(w) * inv_a;
        // Q2''/Q2' = (1/a - 1)/(w - w0)
        let d2 = d1 * (inv_a - 1.0) / (w - self.w0);
        Jet2::new(value, d1, d2)
    }

    /// Quasiconformal extension of `Q2` to the whole plane.
    pub fn extend_q2(&self, w: Complex64) -> Complex64 {
        p_extension(self.a, self.to_standard(w))
    }

    pub fn extend_q2_inverse(&self, w: Complex64) -> Complex64 {
        self.from_standard(p_extension_inverse(self.a, w))
    }
}

fn full_angle(z: Complex64) -> f64 {
    let t = z.arg();
    if t < 0.0 {
        t + TAU
    } else {
        t
    }
}

/// The `|1 - a|`-quasiconformal automorphism of the plane that is `z^{1/a}`
/// on `Δ(0, 0, a)` and `-(P2 ∘ P1)(e^{-iπa} z)` on the complementary sector,
/// with `P1(z) = z^{1/(2-a)}` and `P2(z) = |z|^{(2-a)/a} z/|z|`.
pub fn p_extension(a: f64, z: Complex64) -> Complex64 {
    if z == Complex64::new(0.0, 0.0) {
        return z;
    }
    let phi = full_angle(z);
    let r = z.norm();
    if phi <= PI * a {
        return Complex64::from_polar(r.powf(1.0 / a), phi / a);
    }
    // ζ = e^{-iπa} z has argument φ - πa in (0, π(2 - a)).
    let zeta_arg = phi - PI * a;
    let p1 = Complex64::from_polar(r.powf(1.0 / (2.0 - a)), zeta_arg / (2.0 - a));
    let m = p1.norm();
    let p2 = p1 * (m.powf((2.0 - a) / a) / m);
    -p2
}

pub fn p_extension_inverse(a: f64, w: Complex64) -> Complex64 {
    if w == Complex64::new(0.0, 0.0) {
        return w;
    }
    let psi = full_angle(w);
    let r = w.norm().powf(a);
    if psi <= PI {
        Complex64::from_polar(r, a * psi)
    } else {
        Complex64::from_polar(r, PI * a + (psi - PI) * (2.0 - a))
    }
}

/// Outcome of checking `f(grid) ⊂ Δ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Containment {
    pub contained: bool,
    /// Smallest angular margin seen (radians; negative outside).
    pub min_margin: f64,
    pub worst_point: Complex64,
    pub samples: usize,
}

pub fn sector_containment(f: &AnalyticMap, sector: &SectorDomain, points: &[Complex64]) -> Result<Containment> {
    if points.is_empty() {
        return Err(invalid("grid", "no sample points"));
    }
    let mut worst = (f64::INFINITY, points[0]);
    for &z in points {
        let w = f.eval(z)?;
        let m = if w == sector.w0 { 0.0 } else { sector.angular_margin(w) };
        if m < worst.0 {
            worst = (m, z);
        }
    }
    Ok(Containment { contained: worst.0 > 0.0, min_margin: worst.0, worst_point: worst.1, samples: points.len() })
}

/// Result of fitting a sector around a disk that contains `f(𝔻)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SectorFit {
    pub sector: SectorDomain,
    pub center: Complex64,
    pub radius: f64,
    /// `sup |f|` estimate when the radius was not supplied.
    pub sup_estimate: Option<f64>,
    pub containment: Containment,
}

/// Estimate `sup |f|` on `|z| = 1 - 1e-3` from 1024 angles plus a local
/// golden-section refinement around the best angle.
pub fn estimate_sup_modulus(f: &AnalyticMap) -> Result<f64> {
    const N: usize = 1024;
    let r = 1.0 - 1e-3;
    let modulus = |t: f64| f.eval(Complex64::from_polar(r, t)).map(|w| w.norm());
    let step = TAU / N as f64;
    let mut best = (f64::NEG_INFINITY, 0.0);
    for j in 0..N {
        let t = step * j as f64;
        let m = modulus(t)?;
        if m > best.0 {
            best = (m, t);
        }
    }
    let (mut lo, mut hi) = (best.1 - step, best.1 + step);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut x1, mut x2) = (hi - g * (hi - lo), lo + g * (hi - lo));
    let (mut f1, mut f2) = (modulus(x1)?, modulus(x2)?);
    for _ in 0..60 {
        if f1 > f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = modulus(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = modulus(x2)?;
        }
    }
    Ok(best.0.max(f1).max(f2))
}

/// The sector `Δ(w0, λ3, 2 arcsin(R/|w0 - z0|))` tangent to the disk
/// `|w - z0| < R`, with `λ3 = arg(z0 - w0) + arg(√(|w0 - z0|² - R²) - iR)`.
pub fn sector_around_disk(w0: Complex64, z0: Complex64, radius: f64) -> Result<SectorDomain> {
    let d = (w0 - z0).norm();
    if !(radius > 0.0) {
        return Err(invalid("radius", format!("{radius} must be positive")));
    }
    if !(d > radius) {
        return Err(QcError::Precondition(format!("vertex {w0} lies in the disk |w - {z0}| <= {radius}")));
    }
    let lambda = ((z0 - w0).arg() + Complex64::new((d * d - radius * radius).sqrt(), -radius).arg()) / PI;
    let a = 2.0 * (radius / d).asin() / PI;
    SectorDomain::new(w0, lambda, a)
}

/// Fit a sector with vertex `w0` around `f(𝔻)`. Without an explicit disk the
/// disk `|w| < M` with `M` from [`estimate_sup_modulus`] is used.
pub fn fit_sector(
    f: &AnalyticMap,
    w0: Complex64,
    disk: Option<(Complex64, f64)>,
    points: &[Complex64],
) -> Result<SectorFit> {
    let (center, radius, sup_estimate) = match disk {
        Some((z0, r)) => (z0, r, None),
        None => {
            let m = estimate_sup_modulus(f)?;
            (Complex64::new(0.0, 0.0), m, Some(m))
        }
    };
    let sector = sector_around_disk(w0, center, radius)?;
    let containment = sector_containment(f, &sector, points)?;
    Ok(SectorFit { sector, center, radius, sup_estimate, containment })
}

impl SectorFit {
    pub fn require_contained(self) -> Result<Self> {
        if self.containment.contained {
            Ok(self)
        } else {
            Err(QcError::Precondition(format!(
                "f({}) leaves the fitted sector",
                self.containment.worst_point
            )))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::DiskGrid;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_in_sector(s: &SectorDomain, rng: &mut ChaCha8Rng) -> Complex64 {
        let t = PI * s.a * rng.gen_range(0.01..0.99);
        let r = rng.gen_range(0.05..4.0);
        s.from_standard(Complex64::from_polar(r, t))
    }

    #[test]
    fn half_plane_map_is_identity() {
        let s = SectorDomain::new(c(0.0, 0.0), 0.0, 1.0).unwrap();
        let w = c(-0.3, 0.8);
        assert!((s.q2_apply(w).unwrap() - w).norm() < 1e-15);
    }

    #[test]
    fn quarter_plane_squares() {
        let s = SectorDomain::new(c(0.0, 0.0), 0.0, 0.5).unwrap();
        let w = Complex64::from_polar(1.0, PI / 4.0);
        assert!((s.q2_apply(w).unwrap() - c(0.0, 1.0)).norm() < 1e-15);
        assert!(s.q2_apply(c(-1.0, 0.5)).is_err());
    }

    #[test]
    fn normalized_derivative_formula() {
        // Q2'(w)/Q2'(0) = (1 - w/w0)^{1/a - 1} where the principal branch is valid.
        let s = SectorDomain::new(c(1.0, 0.0), 0.75, 0.5).unwrap();
        let d0 = s.q2_jet(c(0.0, 0.0)).unwrap().d1;
        for w in [c(0.0, 0.0), c(-0.4, 0.3), c(0.2, -0.1)] {
            let ratio = s.q2_jet(w).unwrap().d1 / d0;
            assert!((ratio - (c(1.0, 0.0) - w / s.w0).powf(1.0)).norm() < 1e-13);
        }
    }

    #[test]
    fn log_derivative_of_q2() {
        let s = SectorDomain::new(c(1.0, 1.0), 0.25, 0.7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let w = random_in_sector(&s, &mut rng);
            let j = s.q2_jet(w).unwrap();
            assert!((j.d2 / j.d1 - (1.0 / s.a - 1.0) / (w - s.w0)).norm() < 1e-10);
            // finite-difference check on the first derivative
            let h = 1e-6 * (w - s.w0).norm();
            let fd = (s.q2_apply(w + h).unwrap() - s.q2_apply(w - h).unwrap()) / (2.0 * h);
            assert!((fd - j.d1).norm() / j.d1.norm() < 1e-6);
        }
    }

    #[test]
    fn q2_lands_in_upper_half_plane() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for a in [0.3, 1.0, 1.7] {
            let s = SectorDomain::new(c(-0.5, 2.0), 1.3, a).unwrap();
            for _ in 0..100 {
                let w = random_in_sector(&s, &mut rng);
                assert!(s.q2_apply(w).unwrap().im > 0.0);
            }
        }
    }

    #[test]
    fn p_is_identity_for_half_plane() {
        for z in [c(1.0, 2.0), c(-3.0, -0.5), c(0.2, -4.0)] {
            assert!((p_extension(1.0, z) - z).norm() < 1e-14);
        }
    }

    #[test]
    fn p_squares_inside_quarter_plane() {
        let z = Complex64::from_polar(1.0, PI / 4.0);
        assert!((p_extension(0.5, z) - c(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn p_continuous_across_both_rays() {
        for a in [0.25, 0.5, 0.75, 1.25, 1.9] {
            for r in [0.3, 1.0, 2.5] {
                let ray = Complex64::from_polar(r, PI * a);
                let eps = Complex64::from_polar(1.0, 1e-12);
                let jump = (p_extension(a, ray * eps) - p_extension(a, ray / eps)).norm();
                assert!(jump < 1e-9, "a={a} r={r} jump={jump}");
                let pos = c(r, 0.0);
                let jump = (p_extension(a, pos * eps) - p_extension(a, pos / eps)).norm();
                assert!(jump < 1e-9, "a={a} r={r} jump={jump}");
            }
        }
    }

    #[test]
    fn p_inverse_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let a = rng.gen_range(0.05..1.95);
            let z = Complex64::from_polar(rng.gen_range(0.01..5.0), rng.gen_range(-PI..PI));
            let back = p_extension_inverse(a, p_extension(a, z));
            assert!((back - z).norm() < 1e-10 * (1.0 + z.norm()));
        }
    }

    #[test]
    fn extension_restricts_to_q2() {
        let s = SectorDomain::new(c(1.0, 1.0), 0.25, 0.6).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..100 {
            let w = random_in_sector(&s, &mut rng);
            assert!((s.extend_q2(w) - s.q2_apply(w).unwrap()).norm() < 1e-9);
        }
        let std = SectorDomain::new(c(0.0, 0.0), 0.0, 0.6).unwrap();
        let z = c(-0.7, -0.2);
        assert_eq!(std.extend_q2(z), p_extension(0.6, z));
    }

    #[test]
    fn extension_is_injective_on_mesh() {
        let s = SectorDomain::new(c(0.5, -0.5), 0.4, 0.35).unwrap();
        let mesh: Vec<Complex64> = (-12..=12)
            .flat_map(|i| (-12..=12).map(move |j| c(i as f64 * 0.25, j as f64 * 0.25 + 0.01)))
            .collect();
        let images: Vec<Complex64> = mesh.iter().map(|&w| s.extend_q2(w)).collect();
        for i in 0..images.len() {
            for j in (i + 1)..images.len() {
                assert!((images[i] - images[j]).norm() > 1e-9);
            }
        }
    }

    #[test]
    fn fit_identity_from_minus_two() {
        let grid = DiskGrid::default().points();
        let fit = fit_sector(&AnalyticMap::identity(), c(-2.0, 0.0), Some((c(0.0, 0.0), 1.0)), &grid).unwrap();
        assert!((fit.sector.a - 1.0 / 3.0).abs() < 1e-14);
        assert!((fit.sector.lambda0 - 11.0 / 6.0).abs() < 1e-14);
        assert!(fit.containment.contained);

        let est = fit_sector(&AnalyticMap::identity(), c(-2.0, 0.0), None, &grid).unwrap();
        assert!((est.sup_estimate.unwrap() - 0.999).abs() < 1e-9);
        assert!((est.sector.a - 1.0 / 3.0).abs() < 1e-3);
        assert!(est.containment.contained);
    }

    #[test]
    fn fit_half_identity() {
        let f = AnalyticMap::product(AnalyticMap::constant(c(0.5, 0.0)), AnalyticMap::identity());
        let grid = DiskGrid::default().points();
        let fit = fit_sector(&f, c(-1.0, 0.0), Some((c(0.0, 0.0), 0.5)), &grid).unwrap();
        assert!((fit.sector.a - 1.0 / 3.0).abs() < 1e-14);
        assert!(fit.require_contained().is_ok());
    }

    #[test]
    fn opening_tends_to_half_plane() {
        let s = sector_around_disk(c(3.0, 4.0), c(0.0, 0.0), 5.0 - 1e-12).unwrap();
        assert!((s.a - 1.0).abs() < 1e-5);
    }

    #[test]
    fn rays_are_tangent_to_disk() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..50 {
            let z0 = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let r = rng.gen_range(0.1..2.0);
            let w0 = z0 + Complex64::from_polar(r * rng.gen_range(1.05..4.0), rng.gen_range(-PI..PI));
            let s = sector_around_disk(w0, z0, r).unwrap();
            for lam in [s.lambda0, s.lambda0 + s.a] {
                let u = Complex64::from_polar(1.0, -PI * lam) * (z0 - w0);
                assert!(u.re > 0.0);
                assert!((u.im.abs() - r).abs() < 1e-9);
            }
            assert!(s.contains(z0));
        }
    }

    #[test]
    fn vertex_inside_disk_rejected() {
        assert!(sector_around_disk(c(0.5, 0.0), c(0.0, 0.0), 1.0).is_err());
    }

    #[test]
    fn containment_failure_detected() {
        let grid = DiskGrid::default().points();
        let fit = fit_sector(&AnalyticMap::koebe(), c(-2.0, 0.0), Some((c(0.0, 0.0), 1.0)), &grid).unwrap();
        assert!(!fit.containment.contained);
        assert!(fit.require_contained().is_err());
    }
}
