use qcx_core::criteria::{check, Criterion, CriterionParams};
use qcx_core::map::catalog;
use qcx_core::qc::{beltrami_on_grid, beltrami_on_points, extension_beltrami, injectivity_violation, ExtensionTarget};
use qcx_core::sector::p_extension;
use qcx_core::{AnalyticMap, AnnulusGrid, CompanionMap, Complex64, Construction, DiskGrid, ExtensionMap, LoewnerChain, SectorDomain};
use std::f64::consts::{PI, TAU};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn annulus() -> AnnulusGrid {
    AnnulusGrid::new(1.01, 3.0, 24, 64).unwrap()
}

fn extension(construction: Construction, f: AnalyticMap, q: CompanionMap, params: &CriterionParams) -> ExtensionMap {
    ExtensionMap::new(LoewnerChain::build(construction, f, q, params).unwrap())
}

#[test]
fn nw_extension_respects_criterion_bound() {
    let f = AnalyticMap::normalized_polynomial(&[c(0.25, 0.0)]).unwrap();
    let params = CriterionParams { k_prime: 0.5, ..Default::default() };
    let report = check(Criterion::Nw, &f, &CompanionMap::identity(), &params, &DiskGrid::default()).unwrap();
    assert!(report.pass);
    let ext = extension(Construction::Nw, f, CompanionMap::identity(), &params);
    let est = beltrami_on_grid(&ext, &annulus(), 1e-5, ExtensionTarget::Function).unwrap();
    assert!(est.stable, "{} vs {}", est.sup_abs_mu, est.sup_abs_mu_half_step);
    assert!(est.sup_abs_mu <= report.sup_value + 2e-3, "{} > {}", est.sup_abs_mu, report.sup_value);
    assert!(est.sup_abs_mu > 0.1);
}

#[test]
fn gen_becker_extension_respects_criterion_bound() {
    let f = AnalyticMap::normalized_polynomial(&[c(0.1, 0.0)]).unwrap();
    for cc in [0.0, 0.1] {
        let params = CriterionParams { k_prime: 0.5, c: c(cc, 0.0), ..Default::default() };
        let report = check(Criterion::GenBecker, &f, &CompanionMap::identity(), &params, &DiskGrid::default()).unwrap();
        assert!(report.pass);
        let ext = extension(Construction::GenBecker, f.clone(), CompanionMap::identity(), &params);
        let est = beltrami_on_grid(&ext, &annulus(), 1e-5, ExtensionTarget::Function).unwrap();
        assert!(est.stable);
        assert!(est.sup_abs_mu <= report.sup_value + 2e-3, "c = {cc}: {} > {}", est.sup_abs_mu, report.sup_value);
    }
}

#[test]
fn extension_is_conformal_inside() {
    let f = AnalyticMap::normalized_polynomial(&[c(0.1, 0.05), c(-0.04, 0.0)]).unwrap();
    let ext = extension(Construction::Nw, f, CompanionMap::identity(), &CriterionParams::default());
    let inner = DiskGrid::new(12, 32, 0.05).unwrap().points();
    let est = extension_beltrami(&ext, &inner, 1e-4, ExtensionTarget::Chain).unwrap();
    assert!(est.sup_abs_mu < 1e-6, "{}", est.sup_abs_mu);
}

#[test]
fn sector_automorphism_dilatation() {
    for a in [0.25, 0.5, 0.8, 1.3, 1.75] {
        let pts: Vec<Complex64> = (0..200)
            .map(|j| {
                let theta = TAU * (j as f64 + 0.5) / 200.0;
                Complex64::from_polar(0.3 + 1.7 * (j % 7) as f64 / 7.0, theta)
            })
            .collect();
        let seam = |z: Complex64, h: f64| {
            let phi = z.arg().rem_euclid(TAU);
            let d = [0.0, PI * a, TAU].iter().map(|s| (phi - s).abs()).fold(f64::INFINITY, f64::min);
            d * z.norm() < 4.0 * h
        };
        let est = beltrami_on_points(|z| Ok(p_extension(a, z)), &pts, 1e-5, seam).unwrap();
        assert!((est.sup_abs_mu - (1.0 - a).abs()).abs() < 2e-3, "a = {a}: {}", est.sup_abs_mu);
        let in_sector: Vec<Complex64> = pts.iter().copied().filter(|z| z.arg().rem_euclid(TAU) < PI * a).collect();
        let est = beltrami_on_points(|z| Ok(p_extension(a, z)), &in_sector, 1e-5, seam).unwrap();
        assert!(est.sup_abs_mu < 1e-6, "a = {a}: {}", est.sup_abs_mu);
    }
}

#[test]
fn sector_companion_extension_of_f() {
    let sector = SectorDomain::new(c(1.0, 0.0), 0.75, 0.5).unwrap();
    let f = AnalyticMap::normalized_polynomial(&[c(0.1, 0.0)]).unwrap().shifted(c(-2.0 / 3.0, 0.0));
    let params = CriterionParams { k: 0.5, sector: Some(sector), ..Default::default() };
    let report = check(Criterion::SectorNw, &f, &CompanionMap::identity(), &params, &DiskGrid::default()).unwrap();
    assert!(report.pass, "{report}");
    let ell = report.concluded_dilatation.unwrap();
    let q3 = CompanionMap::normalized_sector(sector).unwrap();
    let ext = extension(Construction::Nw, f, q3, &params);
    let est = extension_beltrami(&ext, &annulus().points(), 1e-5, ExtensionTarget::Function).unwrap();
    assert!(est.stable && est.sup_abs_mu > 0.4);
    assert!(est.sup_abs_mu <= ell + 5e-3, "{} > {ell}", est.sup_abs_mu);
    assert!(est.skipped < est.samples.len() / 4);
}

#[test]
fn extensions_are_injective_on_a_mesh() {
    let f = AnalyticMap::normalized_polynomial(&[c(0.25, 0.0)]).unwrap();
    let ext = extension(Construction::Nw, f, CompanionMap::identity(), &CriterionParams::default());
    let mesh: Vec<Complex64> = (1..=12)
        .flat_map(|i| {
            let r = 0.2 * i as f64;
            (0..40).map(move |j| Complex64::from_polar(r, TAU * j as f64 / 40.0))
        })
        .collect();
    assert_eq!(injectivity_violation(|z| ext.eval(z), &mesh, 1e-6).unwrap(), None);
}

#[test]
fn catalog_jets_match_finite_differences() {
    let h = 1e-5;
    for (name, f) in catalog() {
        for j in 0..16 {
            let z = Complex64::from_polar(0.7, TAU * j as f64 / 16.0 + 0.1);
            let jet = f.eval_jet(z).unwrap();
            let fd1 = (f.eval(z + h).unwrap() - f.eval(z - h).unwrap()) / (2.0 * h);
            let fd2 = (f.eval(z + h).unwrap() - jet.value * 2.0 + f.eval(z - h).unwrap()) / (h * h);
            let s = 1.0 + jet.d1.norm() + jet.d2.norm();
            assert!((jet.d1 - fd1).norm() < 1e-6 * s, "{name} d1 at {z}");
            assert!((jet.d2 - fd2).norm() < 1e-3 * s, "{name} d2 at {z}");
        }
    }
}
