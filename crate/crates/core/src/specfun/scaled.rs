use num_complex::Complex64;
use std::ops::{Div, Mul, Neg};

use crate::{Error, Result};

/// `2^e` for `e` in the normal range, built from the exponent bits.
fn pow2(e: i32) -> f64 {
    debug_assert!((-1022..=1023).contains(&e));
    f64::from_bits(((e + 1023) as u64) << 52)
}

/// `floor(log2 |x|)` for finite nonzero `x`.
fn exponent_of(x: f64) -> i32 {
    let biased = ((x.to_bits() >> 52) & 0x7ff) as i32;
    if biased == 0 {
        // subnormal
        x.abs().log2().floor() as i32
    } else {
        biased - 1023
    }
}

/// Multiply `x` by `2^e` without intermediate overflow of the scale factor.
pub(crate) fn ldexp(mut x: f64, mut e: i32) -> f64 {
    const STEP: i32 = 1000;
    while e > STEP {
        x *= pow2(STEP);
        e -= STEP;
        if !x.is_finite() {
            return x;
        }
    }
    while e < -STEP {
        x *= pow2(-STEP);
        e += STEP;
        if x == 0.0 {
            return x;
        }
    }
    x * pow2(e)
}

/// A complex number with an extra binary exponent: `mant * 2^exp`.
///
/// Bessel and Hankel values at orders far above the argument under- and
/// overflow `f64` long before the ratios that the MEM actually needs do.
/// Carrying the exponent separately lets the assembly form
/// `H_{m-n}(kd) J_n(ka) / H_m(ka)` and only round to `f64` at the end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    mant: Complex64,
    exp: i32,
}

impl Scaled {
    pub const ZERO: Scaled = Scaled {
        mant: Complex64::new(0.0, 0.0),
        exp: 0,
    };
    pub const ONE: Scaled = Scaled {
        mant: Complex64::new(1.0, 0.0),
        exp: 0,
    };

    pub fn new(mant: Complex64, exp: i32) -> Self {
        Scaled { mant, exp }.normalized()
    }

    pub fn from_real(value: f64, exp: i32) -> Self {
        Self::new(Complex64::new(value, 0.0), exp)
    }

    pub fn from_c64(value: Complex64) -> Self {
        Self::new(value, 0)
    }

    fn normalized(self) -> Self {
        let s = self.mant.re.abs().max(self.mant.im.abs());
        if s == 0.0 || !s.is_finite() {
            return Scaled {
                mant: self.mant,
                exp: if s == 0.0 { 0 } else { self.exp },
            };
        }
        let shift = exponent_of(s);
        Scaled {
            mant: Complex64::new(ldexp(self.mant.re, -shift), ldexp(self.mant.im, -shift)),
            exp: self.exp.saturating_add(shift),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mant.re == 0.0 && self.mant.im == 0.0
    }

    /// Base-2 logarithm of the modulus; `-inf` for zero.
    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.mant.norm().log2() + self.exp as f64
        }
    }

    pub fn abs_ratio(&self, other: &Scaled) -> f64 {
        (self.log2_abs() - other.log2_abs()).exp2()
    }

    pub fn re(&self) -> Scaled {
        Scaled::from_real(self.mant.re, self.exp)
    }

    pub fn im(&self) -> Scaled {
        Scaled::from_real(self.mant.im, self.exp)
    }

    pub fn conj(&self) -> Scaled {
        Scaled {
            mant: self.mant.conj(),
            exp: self.exp,
        }
    }

    /// Combine two real scaled numbers into `re + i·im`.
    pub fn from_re_im(re: Scaled, im: Scaled) -> Scaled {
        let exp = match (re.is_zero(), im.is_zero()) {
            (true, true) => return Scaled::ZERO,
            (true, false) => im.exp,
            (false, true) => re.exp,
            (false, false) => re.exp.max(im.exp),
        };
        Scaled::new(
            Complex64::new(
                ldexp(re.mant.re, re.exp - exp),
                ldexp(im.mant.re, im.exp - exp),
            ),
            exp,
        )
    }

    pub fn recip(&self) -> Scaled {
        Scaled::new(self.mant.inv(), -self.exp)
    }

    /// Round to `f64`; underflow quietly becomes zero, overflow is an error.
    pub fn to_c64(&self) -> Result<Complex64> {
        let v = Complex64::new(ldexp(self.mant.re, self.exp), ldexp(self.mant.im, self.exp));
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(Error::Overflow(format!(
                "value 2^{:.1} not representable in f64",
                self.log2_abs()
            )))
        }
    }

    pub fn to_f64(&self) -> Result<f64> {
        self.to_c64().map(|c| c.re)
    }
}

impl Mul for Scaled {
    type Output = Scaled;
    fn mul(self, rhs: Scaled) -> Scaled {
        Scaled::new(self.mant * rhs.mant, self.exp.saturating_add(rhs.exp))
    }
}

impl Mul<Complex64> for Scaled {
    type Output = Scaled;
    fn mul(self, rhs: Complex64) -> Scaled {
        Scaled::new(self.mant * rhs, self.exp)
    }
}

impl Mul<f64> for Scaled {
    type Output = Scaled;
    fn mul(self, rhs: f64) -> Scaled {
        Scaled::new(self.mant * rhs, self.exp)
    }
}

impl Div for Scaled {
    type Output = Scaled;
    fn div(self, rhs: Scaled) -> Scaled {
        Scaled::new(self.mant / rhs.mant, self.exp.saturating_sub(rhs.exp))
    }
}

impl Neg for Scaled {
    type Output = Scaled;
    fn neg(self) -> Scaled {
        Scaled {
            mant: -self.mant,
            exp: self.exp,
        }
    }
}
