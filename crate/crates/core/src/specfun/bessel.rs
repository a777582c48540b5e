//! Integer-order Bessel functions of real argument.
//!
//! `J` comes from Miller's downward recurrence normalised with
//! `J_0² + 2 Σ J_k² = 1`; `Y_0` and `Y_1` come from Neumann series in the
//! normalised `J_{2k}` and higher `Y` orders from the (stable) upward
//! recurrence. Every sequence is produced in [`Scaled`] form so that orders
//! far above the argument stay representable.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::scaled::{ldexp, Scaled};
use crate::{Error, Result};

/// Largest order accepted by every routine in this module.
pub const MAX_ORDER: usize = 200;
/// Largest argument accepted by every routine in this module.
pub const MAX_ARGUMENT: f64 = 1000.0;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const RESCALE_LIMIT: f64 = 1e180;
const RESCALE_BITS: i32 = 600;

fn check_order(order: usize) -> Result<()> {
    if order > MAX_ORDER {
        return Err(Error::Capability(format!(
            "order {order} exceeds the cap {MAX_ORDER}"
        )));
    }
    Ok(())
}

fn check_argument(x: f64, allow_zero: bool) -> Result<()> {
    if x.is_nan() || x < 0.0 || (!allow_zero && x == 0.0) {
        return Err(Error::Domain(format!(
            "Bessel argument must be positive, got {x}"
        )));
    }
    if x > MAX_ARGUMENT {
        return Err(Error::Capability(format!(
            "argument {x} exceeds the cap {MAX_ARGUMENT}"
        )));
    }
    Ok(())
}

/// `(-1)^m` as a float.
pub(crate) fn parity(m: i64) -> f64 {
    if m.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Miller recurrence. Returns `J_0 ..= J_top` for `top >= n_max`, where
/// `top` is the start order (so callers needing the normalisation tail, like
/// the `Y` Neumann sums, can use the extra orders).
fn miller(n_max: usize, x: f64) -> Vec<Scaled> {
    debug_assert!(x > 0.0);
    let base = n_max.max(x.ceil() as usize);
    let mut start = base + 20 + (2.0 * (40.0 * base as f64).sqrt()).ceil() as usize;
    start += start % 2;

    // working value w_n with true (unnormalised) value w_n * 2^{shift_n}
    let mut work = vec![0.0f64; start + 1];
    let mut shift = vec![0i32; start + 1];
    let mut e = 0i32;
    let mut upper = 0.0f64;
    let mut current = 1.0f64;
    work[start] = current;
    for n in (1..=start).rev() {
        let lower = (2.0 * n as f64 / x) * current - upper;
        upper = current;
        current = lower;
        if current.abs() > RESCALE_LIMIT {
            current = ldexp(current, -RESCALE_BITS);
            upper = ldexp(upper, -RESCALE_BITS);
            e += RESCALE_BITS;
        }
        work[n - 1] = current;
        shift[n - 1] = e;
    }
    // shift[start] stays 0; it belongs to the first (unrescaled) stretch.

    let top_shift = e;
    let rel = |n: usize| ldexp(work[n], shift[n] - top_shift);
    let peak = (0..=start).map(|n| rel(n).abs()).fold(0.0, f64::max);
    let mut squares = 0.0;
    let mut alternating = 0.0;
    for n in (0..=start).rev() {
        let v = rel(n) / peak;
        let w = if n == 0 { 1.0 } else { 2.0 };
        squares += w * v * v;
        if n % 2 == 0 {
            alternating += w * v;
        }
    }
    let norm = peak * squares.sqrt().copysign(alternating);
    (0..=start)
        .map(|n| Scaled::from_real(work[n], shift[n] - top_shift) * norm.recip())
        .collect()
}

/// `J_0(x) ..= J_{n_max}(x)` in scaled form.
pub fn bessel_j_seq_scaled(n_max: usize, x: f64) -> Result<Vec<Scaled>> {
    check_order(n_max)?;
    check_argument(x, true)?;
    if x == 0.0 {
        let mut out = vec![Scaled::ZERO; n_max + 1];
        out[0] = Scaled::ONE;
        return Ok(out);
    }
    let mut seq = miller(n_max, x);
    seq.truncate(n_max + 1);
    Ok(seq)
}

fn y_seq_from_j(n_max: usize, x: f64, j: &[Scaled]) -> Vec<Scaled> {
    let jv = |n: usize| j.get(n).map_or(0.0, |s| s.to_f64().unwrap_or(0.0));
    let log_term = (x / 2.0).ln() + EULER_GAMMA;

    let mut sum0 = 0.0;
    let mut sum1 = 0.0;
    let mut k = 1;
    while 2 * k + 1 < j.len() {
        let sign = parity(k as i64);
        sum0 += sign * jv(2 * k) / k as f64;
        sum1 += sign * (jv(2 * k - 1) - jv(2 * k + 1)) / k as f64;
        k += 1;
    }
    let y0 = (2.0 / PI) * (log_term * jv(0) - 2.0 * sum0);
    let y1 = (2.0 / PI) * (-jv(0) / x + log_term * jv(1) + sum1);

    let mut out = Vec::with_capacity(n_max + 1);
    out.push(Scaled::from_real(y0, 0));
    if n_max == 0 {
        return out;
    }
    out.push(Scaled::from_real(y1, 0));
    let (mut prev, mut cur, mut e) = (y0, y1, 0i32);
    for n in 1..n_max {
        let next = (2.0 * n as f64 / x) * cur - prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_LIMIT {
            cur = ldexp(cur, -RESCALE_BITS);
            prev = ldexp(prev, -RESCALE_BITS);
            e += RESCALE_BITS;
        }
        out.push(Scaled::from_real(cur, e));
    }
    out
}

/// `Y_0(x) ..= Y_{n_max}(x)` in scaled form.
pub fn bessel_y_seq_scaled(n_max: usize, x: f64) -> Result<Vec<Scaled>> {
    check_order(n_max)?;
    check_argument(x, false)?;
    let j = miller(n_max.max(1), x);
    Ok(y_seq_from_j(n_max, x, &j))
}

/// `H_0(x) ..= H_{n_max}(x)` (first kind) in scaled form, from one Miller
/// pass and one upward `Y` pass.
pub fn hankel1_seq_scaled(n_max: usize, x: f64) -> Result<Vec<Scaled>> {
    check_order(n_max)?;
    check_argument(x, false)?;
    let j = miller(n_max.max(1), x);
    let y = y_seq_from_j(n_max, x, &j);
    Ok(j.iter()
        .zip(&y)
        .map(|(jn, yn)| Scaled::from_re_im(*jn, *yn))
        .collect())
}

/// Value at a signed order from a non-negative-order sequence, using
/// `C_{-m} = (-1)^m C_m`.
pub fn signed_order(seq: &[Scaled], m: i32) -> Scaled {
    let v = seq[m.unsigned_abs() as usize];
    if m < 0 && m % 2 != 0 {
        -v
    } else {
        v
    }
}

/// Bessel function of the first kind `J_m(x)`; `x = 0` is handled exactly.
pub fn bessel_j(m: i32, x: f64) -> Result<f64> {
    let seq = bessel_j_seq_scaled(m.unsigned_abs() as usize, x)?;
    signed_order(&seq, m).to_f64()
}

/// Bessel function of the second kind `Y_m(x)`, `x > 0`.
pub fn bessel_y(m: i32, x: f64) -> Result<f64> {
    let seq = bessel_y_seq_scaled(m.unsigned_abs() as usize, x)?;
    signed_order(&seq, m).to_f64()
}

/// Hankel function of the first kind `H_m(x) = J_m(x) + i Y_m(x)`.
pub fn hankel1(m: i32, x: f64) -> Result<Complex64> {
    hankel1_scaled(m, x)?.to_c64()
}

pub fn hankel1_scaled(m: i32, x: f64) -> Result<Scaled> {
    let seq = hankel1_seq_scaled(m.unsigned_abs() as usize, x)?;
    Ok(signed_order(&seq, m))
}

pub fn bessel_j_scaled(m: i32, x: f64) -> Result<Scaled> {
    let seq = bessel_j_seq_scaled(m.unsigned_abs() as usize, x)?;
    Ok(signed_order(&seq, m))
}

/// `H_0(x) ..= H_{m_max}(x)` as plain complex numbers.
pub fn hankel1_seq(m_max: usize, x: f64) -> Result<Vec<Complex64>> {
    hankel1_seq_scaled(m_max, x)?
        .iter()
        .map(Scaled::to_c64)
        .collect()
}

/// `J_0` and `Y_0` only, for kernels evaluated at many scattered arguments.
/// Same recurrence and normalisation as [`miller`], but the sums are
/// accumulated in plain `f64` on the way down: orders that would underflow
/// contribute nothing at order zero.
pub(crate) fn j0_y0(x: f64) -> Result<(f64, f64)> {
    check_argument(x, false)?;
    let base = (x.ceil() as usize).max(1);
    let mut start = base + 20 + (2.0 * (40.0 * base as f64).sqrt()).ceil() as usize;
    start += start % 2;

    let mut upper = 0.0f64;
    let mut current = 1.0f64;
    let (mut squares, mut alternating, mut neumann) = (2.0f64, 2.0f64, 0.0f64);
    if start.is_multiple_of(4) {
        neumann += 2.0 / start as f64;
    } else {
        neumann -= 2.0 / start as f64;
    }
    for n in (1..=start).rev() {
        let lower = (2.0 * n as f64 / x) * current - upper;
        upper = current;
        current = lower;
        if current.abs() > RESCALE_LIMIT {
            let f = ldexp(1.0, -RESCALE_BITS);
            current *= f;
            upper *= f;
            squares *= f * f;
            alternating *= f;
            neumann *= f;
        }
        let order = n - 1;
        if order == 0 {
            squares += current * current;
            alternating += current;
        } else {
            squares += 2.0 * current * current;
            if order % 2 == 0 {
                alternating += 2.0 * current;
                neumann += parity((order / 2) as i64) * current / (order / 2) as f64;
            }
        }
    }
    let norm = squares.sqrt().copysign(alternating);
    let j0 = current / norm;
    let y0 = (2.0 / PI) * (((x / 2.0).ln() + EULER_GAMMA) * j0 - 2.0 * neumann / norm);
    Ok((j0, y0))
}

/// Outgoing free-space Green's function `(i/4) H_0(k r)`.
pub fn green(k: f64, r: f64) -> Result<Complex64> {
    let (j0, y0) = j0_y0(k * r)?;
    Ok(Complex64::new(0.0, 0.25) * Complex64::new(j0, y0))
}
