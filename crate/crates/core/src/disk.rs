//! The value region `U(k) = { w : |w - 1| <= k |w + 1| }`.

use num_complex::Complex64;

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UDiskTest {
    pub inside: bool,
    /// `k|w+1| - |w-1|`; non-negative exactly when `w` is inside.
    pub margin: f64,
}

pub fn check_k(k: f64) -> Result<()> {
    if (0.0..1.0).contains(&k) {
        Ok(())
    } else {
        Err(invalid("k", format!("{k} not in [0, 1)")))
    }
}

pub fn u_disk_contains(w: Complex64, k: f64) -> Result<UDiskTest> {
    check_k(k)?;
    let margin = k * (w + 1.0).norm() - (w - 1.0).norm();
    Ok(UDiskTest { inside: margin >= 0.0, margin })
}

/// `|w - 1| / |w + 1|`, the smallest `k` with `w ∈ U(k)`.
pub fn u_disk_ratio(w: Complex64) -> f64 {
    let den = (w + 1.0).norm();
    if den == 0.0 {
        f64::INFINITY
    } else {
        (w - 1.0).norm() / den
    }
}

/// Center and radius of `U(k)` as an ordinary disk.
pub fn u_disk_circle(k: f64) -> Result<(f64, f64)> {
    check_k(k)?;
    let d = 1.0 - k * k;
    Ok(((1.0 + k * k) / d, 2.0 * k / d))
}
