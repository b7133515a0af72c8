//! Fixed-point extended-precision reals for powers too large to keep exact.
//!
//! A value is `mantissa / 2^WORK_BITS`. `ln` uses the `atanh` series after
//! reducing the argument into `[1/sqrt 2, sqrt 2)`; `exp` reduces modulo
//! `ln 2` and sums the Taylor series. For `base^exp` with `base` in `(0, 1]`
//! and `exp < 2^64`, the absolute error stays below `2^-ACCURACY_BITS`
//! (about 60 decimal digits).

use std::fmt;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::rational::{format_scaled, ratio_to_f64, ExactRational};

/// Fractional bits carried through every operation.
pub const WORK_BITS: u32 = 384;

/// Guaranteed absolute accuracy of [`ExtReal::pow_rational`] results.
pub const ACCURACY_BITS: u32 = 200;

#[derive(Clone, PartialEq, Eq)]
pub struct ExtReal {
    mantissa: BigInt,
}

fn ln2_mantissa() -> &'static BigInt {
    static LN2: OnceLock<BigInt> = OnceLock::new();
    // ln 2 = 2 atanh(1/3)
    LN2.get_or_init(|| atanh_series(&fixed_from_ratio(&BigInt::one(), &BigInt::from(3))) << 1)
}

fn fixed_from_ratio(numer: &BigInt, denom: &BigInt) -> BigInt {
    (numer << WORK_BITS).div_floor(denom)
}

/// Product truncated toward zero, so repeated products of a small
/// negative value reach zero instead of sticking at -1.
fn fixed_mul(a: &BigInt, b: &BigInt) -> BigInt {
    let p = a * b;
    if p.is_negative() {
        -((-p) >> WORK_BITS)
    } else {
        p >> WORK_BITS
    }
}

/// `sum_j z^(2j+1) / (2j+1)` for `|z| <= 1/3`.
fn atanh_series(z: &BigInt) -> BigInt {
    let z2 = fixed_mul(z, z);
    let mut power = z.clone();
    let mut sum = BigInt::zero();
    let mut j = 1u64;
    while !power.is_zero() {
        sum += &power / j;
        power = fixed_mul(&power, &z2);
        j += 2;
    }
    sum
}

impl ExtReal {
    pub fn zero() -> Self {
        ExtReal {
            mantissa: BigInt::zero(),
        }
    }

    pub fn one() -> Self {
        ExtReal {
            mantissa: BigInt::one() << WORK_BITS,
        }
    }

    /// Truncated to `WORK_BITS` fractional bits.
    pub fn from_rational(r: &ExactRational) -> Self {
        ExtReal {
            mantissa: fixed_from_ratio(
                &BigInt::from(r.numer().clone()),
                &BigInt::from(r.denom().clone()),
            ),
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    /// Natural log of a positive rational.
    pub fn ln_rational(r: &ExactRational) -> Self {
        assert!(!r.is_zero(), "ln of zero");
        let numer = BigInt::from(r.numer().clone());
        let denom = BigInt::from(r.denom().clone());
        // Pick e with numer * 2^e / denom in [1/sqrt 2, sqrt 2).
        let mut e = denom.bits() as i64 - numer.bits() as i64;
        let scaled = |e: i64| -> (BigInt, BigInt) {
            if e >= 0 {
                (&numer << e as u64, denom.clone())
            } else {
                (numer.clone(), &denom << (-e) as u64)
            }
        };
        loop {
            let (a, b) = scaled(e);
            // a/b < 1/sqrt2  <=>  2a^2 < b^2
            if (&a * &a) << 1u32 < &b * &b {
                e += 1;
            } else if &a * &a >= (&b * &b) << 1u32 {
                e -= 1;
            } else {
                break;
            }
        }
        let (a, b) = scaled(e);
        let z = fixed_from_ratio(&(&a - &b), &(&a + &b));
        let ln_scaled = atanh_series(&z) << 1u32;
        ExtReal {
            mantissa: ln_scaled - ln2_mantissa() * BigInt::from(e),
        }
    }

    pub fn exp(&self) -> Self {
        let ln2 = ln2_mantissa();
        // k = round(x / ln2)
        let k = (&self.mantissa + (ln2 >> 1u32)).div_floor(ln2);
        let r = &self.mantissa - ln2 * &k;
        let mut term = BigInt::one() << WORK_BITS;
        let mut sum = term.clone();
        let mut j = 1u64;
        while !term.is_zero() {
            term = fixed_mul(&term, &r) / j;
            sum += &term;
            j += 1;
        }
        let k = k.to_i64().expect("exponent shift fits i64");
        let mantissa = if k >= 0 {
            sum << k as u64
        } else if -k >= (WORK_BITS as i64 + 8) * 4 {
            BigInt::zero()
        } else {
            sum >> (-k) as u64
        };
        ExtReal { mantissa }
    }

    /// `base^exp` as `exp(exp * ln base)`; `base` must lie in `[0, 1]`.
    pub fn pow_rational(base: &ExactRational, exp: u64) -> Self {
        if exp == 0 {
            return Self::one();
        }
        if base.is_zero() {
            return Self::zero();
        }
        let ln = Self::ln_rational(base);
        let prod = ExtReal {
            mantissa: ln.mantissa * BigInt::from(exp),
        };
        prod.exp().clamp_unit()
    }

    /// `1 - self`.
    pub fn complement(&self) -> Self {
        ExtReal {
            mantissa: (BigInt::one() << WORK_BITS) - &self.mantissa,
        }
    }

    /// Clamps into `[0, 1]`; removes rounding spill from `exp`.
    pub fn clamp_unit(self) -> Self {
        let one = BigInt::one() << WORK_BITS;
        if self.mantissa.is_negative() {
            Self::zero()
        } else if self.mantissa > one {
            ExtReal { mantissa: one }
        } else {
            self
        }
    }

    pub fn to_f64(&self) -> f64 {
        let mag = ratio_to_f64(self.mantissa.magnitude(), &(BigUint::one() << WORK_BITS));
        if self.mantissa.sign() == Sign::Minus {
            -mag
        } else {
            mag
        }
    }

    fn nonneg_magnitude(&self) -> BigUint {
        if self.mantissa.is_negative() {
            BigUint::zero()
        } else {
            self.mantissa.magnitude().clone()
        }
    }

    /// Rational value of the mantissa (exactly what is stored).
    pub fn to_rational(&self) -> ExactRational {
        ExactRational::new(self.nonneg_magnitude(), BigUint::one() << WORK_BITS)
    }

    /// `100 * self` rounded half to even; negative values render as zero.
    pub fn render_percent(&self, decimals: u32) -> String {
        format_scaled(&self.nonneg_magnitude(), &(BigUint::one() << WORK_BITS), 100, decimals)
    }

    pub fn render_decimal(&self, decimals: u32) -> String {
        format_scaled(&self.nonneg_magnitude(), &(BigUint::one() << WORK_BITS), 1, decimals)
    }

    /// Absolute difference, as an `f64`.
    pub fn abs_diff_f64(&self, other: &ExtReal) -> f64 {
        ExtReal {
            mantissa: (&self.mantissa - &other.mantissa).abs(),
        }
        .to_f64()
    }
}

impl fmt::Debug for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExtReal({})", self.render_decimal(40))
    }
}
