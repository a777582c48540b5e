use crate::{Error, Result};

/// `₂F₁(m+1, m+1; 1; z)` for `0 <= z < 1`.
///
/// Uses the Pfaff transformation to `(1-z)^{-(m+1)} ₂F₁(m+1, -m; 1; z/(z-1))`,
/// whose series terminates after `m + 1` terms. With `w = z/(z-1) <= 0` every
/// term `C(m+n, n) C(m, n) |w|^n` is non-negative, so the sum has no
/// cancellation.
pub fn hyp2f1_peaked(m: u32, z: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&z) {
        return Err(Error::Domain(format!(
            "hyp2f1_peaked needs 0 <= z < 1, got {z}"
        )));
    }
    if z == 0.0 {
        return Ok(1.0);
    }
    let w = z / (1.0 - z);
    let m = m as f64;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut n = 0.0;
    while n < m {
        // ratio of consecutive terms: (m+1+n)(m-n) / (n+1)^2 * |w|
        term *= (m + 1.0 + n) * (m - n) / ((n + 1.0) * (n + 1.0)) * w;
        sum += term;
        n += 1.0;
    }
    let value = sum * (1.0 - z).powf(-(m + 1.0));
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Overflow(format!("2F1(m+1, m+1; 1; {z}) at m = {m}")))
    }
}

/// `₀F₃(; 1, 1, 1; x) = Σ xⁿ / (n!)⁴`, summed directly.
pub fn hyp0f3_ones(x: f64) -> Result<f64> {
    if x.is_nan() || x < 0.0 {
        return Err(Error::Domain(format!("hyp0f3_ones needs x >= 0, got {x}")));
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut n = 0.0;
    loop {
        n += 1.0;
        term *= x / (n * n * n * n);
        sum += term;
        // terms shrink monotonically once n^4 > x
        if term < 1e-17 * sum && n * n * n * n > x {
            break;
        }
        if !sum.is_finite() {
            return Err(Error::Overflow(format!("0F3(;1,1,1;{x})")));
        }
    }
    Ok(sum)
}
