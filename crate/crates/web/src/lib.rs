//! wasm-bindgen exports for the static demo page in `www/`.

use qcx_core::criteria::{check, Criterion, CriterionParams};
use qcx_core::map::catalog_map;
use qcx_core::qc::beltrami_at;
use qcx_core::sector::p_extension;
use qcx_core::{CompanionMap, Complex64, DiskGrid, ExtensionMap, LoewnerChain};
use wasm_bindgen::prelude::*;

const STEP: f64 = 1e-5;

/// `|μ|` of the `|1-a|`-quasiconformal sector automorphism on an `n × n`
/// grid over `[-extent, extent]^2`, row-major from the top left. Points
/// within a few steps of the seams come back as NaN.
#[wasm_bindgen]
pub fn sector_dilatation_field(a: f64, n: usize, extent: f64) -> Result<Vec<f64>, String> {
    if !(a > 0.0 && a < 2.0) || n < 2 || !(extent > 0.0) {
        return Err(format!("need 0 < a < 2, n >= 2, extent > 0 (got a={a}, n={n}, extent={extent})"));
    }
    let step = 2.0 * extent / (n - 1) as f64;
    let seam = |z: Complex64| {
        let phi = z.arg().rem_euclid(std::f64::consts::TAU);
        let d = [0.0, std::f64::consts::PI * a, std::f64::consts::TAU]
            .iter()
            .map(|s| (phi - s).abs())
            .fold(f64::INFINITY, f64::min);
        d * z.norm() < 4.0 * STEP || z.norm() < 4.0 * STEP
    };
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let z = Complex64::new(-extent + j as f64 * step, extent - i as f64 * step);
            if seam(z) {
                out.push(f64::NAN);
                continue;
            }
            let mu = beltrami_at(|w| Ok(p_extension(a, w)), z, STEP).map_err(|e| e.to_string())?;
            out.push(mu.map_or(f64::NAN, |m| m.norm()));
        }
    }
    Ok(out)
}

fn params(k: f64) -> CriterionParams {
    CriterionParams { k, k_prime: k, ..Default::default() }
}

fn setup(function: &str, criterion: &str) -> Result<(qcx_core::AnalyticMap, Criterion), String> {
    let f = catalog_map(function).ok_or_else(|| format!("unknown function {function:?}"))?;
    let c = Criterion::from_id(criterion).ok_or_else(|| format!("unknown criterion {criterion:?}"))?;
    Ok((f, c))
}

/// Criterion report as `key=value` lines, identity companion.
#[wasm_bindgen]
pub fn check_report(function: &str, criterion: &str, k: f64, radial: usize, angular: usize) -> Result<String, String> {
    let (f, c) = setup(function, criterion)?;
    let grid = DiskGrid::new(radial, angular, 1e-3).map_err(|e| e.to_string())?;
    let report = check(c, &f, &CompanionMap::identity(), &params(k), &grid).map_err(|e| e.to_string())?;
    Ok(report.to_string())
}

/// Image of a polar net under the extension built from `criterion`'s chain:
/// `rings` circles up to `outer` and `spokes` rays, each traced with
/// `samples` points. Returned as `x, y` pairs, curves separated by NaN pairs.
#[wasm_bindgen]
pub fn extension_net(
    function: &str,
    criterion: &str,
    k: f64,
    outer: f64,
    rings: usize,
    spokes: usize,
    samples: usize,
) -> Result<Vec<f64>, String> {
    let (f, c) = setup(function, criterion)?;
    if !(outer > 0.0) || samples < 2 {
        return Err("need outer > 0 and samples >= 2".into());
    }
    let chain = LoewnerChain::for_criterion(c, f, &CompanionMap::identity(), &params(k)).map_err(|e| e.to_string())?;
    let ext = ExtensionMap::new(chain);
    let mut out = Vec::new();
    let image = |z: Complex64| match ext.eval_f(z) {
        Ok(w) if w.is_finite() => [w.re, w.im],
        _ => [f64::NAN, f64::NAN],
    };
    let tau = std::f64::consts::TAU;
    for i in 1..=rings {
        let r = outer * i as f64 / rings as f64;
        for j in 0..=samples {
            out.extend(image(Complex64::from_polar(r, tau * j as f64 / samples as f64)));
        }
        out.extend([f64::NAN, f64::NAN]);
    }
    for j in 0..spokes {
        let u = Complex64::from_polar(1.0, tau * j as f64 / spokes as f64);
        for i in 0..=samples {
            out.extend(image(u * (outer * i as f64 / samples as f64)));
        }
        out.extend([f64::NAN, f64::NAN]);
    }
    Ok(out)
}

/// Catalog function names, comma separated.
#[wasm_bindgen]
pub fn catalog_names() -> String {
    qcx_core::map::catalog().iter().map(|(n, _)| *n).collect::<Vec<_>>().join(",")
}
