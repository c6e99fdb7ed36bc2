//! Continuous logarithms along the segment `[0, z]`.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{QcError, Result};

const BASE_STEPS: usize = 16;
const MAX_DEPTH: u32 = 24;
/// Largest argument change accepted between neighbouring samples.
const MAX_JUMP: f64 = 0.5;

/// The logarithm of `q` on the branch nearest `prev`; `None` if the
/// argument moved by more than `MAX_JUMP`.
pub(crate) fn unwrap_log(prev: Complex64, q: Complex64, at: Complex64) -> Result<Option<Complex64>> {
    if q == Complex64::new(0.0, 0.0) || !q.is_finite() {
        return Err(QcError::Branch { z: at, detail: format!("value {q} has no logarithm") });
    }
    let mut l = q.ln();
    l.im += TAU * ((prev.im - l.im) / TAU).round();
    Ok(((l.im - prev.im).abs() <= MAX_JUMP).then_some(l))
}

/// Carries a state from `0` to `z` in small steps, bisecting any step the
/// `advance` callback rejects (returns `None`).
pub(crate) fn track_ray<S, F>(z: Complex64, start: S, mut advance: F) -> Result<S>
where
    S: Clone,
    F: FnMut(&S, Complex64) -> Result<Option<S>>,
{
    fn go<S: Clone, F: FnMut(&S, Complex64) -> Result<Option<S>>>(
        state: S,
        from: Complex64,
        to: Complex64,
        depth: u32,
        advance: &mut F,
    ) -> Result<S> {
        if let Some(next) = advance(&state, to)? {
            return Ok(next);
        }
        if depth == 0 {
            return Err(QcError::Branch { z: to, detail: "argument jumps faster than the step refines".into() });
        }
        let mid = (from + to) * 0.5;
        let s = go(state, from, mid, depth - 1, advance)?;
        go(s, mid, to, depth - 1, advance)
    }

    let mut state = start;
    let mut from = Complex64::new(0.0, 0.0);
    for j in 1..=BASE_STEPS {
        let to = z * (j as f64 / BASE_STEPS as f64);
        state = go(state, from, to, MAX_DEPTH, &mut advance)?;
        from = to;
    }
    Ok(state)
}

/// `log(h(z)/z)` continued along `[0, z]` from the principal value of
/// `log h'(0)`. `ratio(ζ)` must return `h(ζ)/ζ` (and `h'(0)` at `ζ = 0`).
pub fn radial_log_ratio<F>(z: Complex64, mut ratio: F) -> Result<Complex64>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    let q0 = ratio(Complex64::new(0.0, 0.0))?;
    if q0 == Complex64::new(0.0, 0.0) || !q0.is_finite() {
        return Err(QcError::Branch { z: Complex64::new(0.0, 0.0), detail: "ratio vanishes at the origin".into() });
    }
    track_ray(z, q0.ln(), |prev, zeta| unwrap_log(*prev, ratio(zeta)?, zeta))
}
