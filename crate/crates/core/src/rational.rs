//! Non-negative exact rationals.

use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};

/// A non-negative rational kept in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactRational(Ratio<BigUint>);

impl ExactRational {
    pub fn zero() -> Self {
        ExactRational(Ratio::zero())
    }

    pub fn one() -> Self {
        ExactRational(Ratio::one())
    }

    /// Panics if `denom` is zero.
    pub fn new(numer: impl Into<BigUint>, denom: impl Into<BigUint>) -> Self {
        ExactRational(Ratio::new(numer.into(), denom.into()))
    }

    pub fn from_integer(value: impl Into<BigUint>) -> Self {
        ExactRational(Ratio::from_integer(value.into()))
    }

    pub fn numer(&self) -> &BigUint {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigUint {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    /// `1 - self`. Panics if `self > 1`.
    pub fn complement(&self) -> Self {
        assert!(
            self.0 <= Ratio::one(),
            "complement of a rational greater than one"
        );
        ExactRational(Ratio::one() - &self.0)
    }

    /// Multiplies by the small fraction `a / b`, keeping lowest terms.
    ///
    /// Cross-cancels against the current denominator and numerator with
    /// machine-word gcds, so no big-number gcd is ever needed: if `p/q` and
    /// `a/b` are both reduced, then `(p/g2)(a/g1) / ((q/g1)(b/g2))` is too.
    pub fn mul_frac(&mut self, a: u64, b: u64) {
        assert!(b != 0, "zero denominator");
        if a == 0 {
            *self = Self::zero();
            return;
        }
        if self.is_zero() {
            return;
        }
        let g = a.gcd(&b);
        let (a, b) = (a / g, b / g);
        let (numer, denom) = std::mem::take(&mut self.0).into_raw();
        let g1 = gcd_big_small(&denom, a);
        let g2 = gcd_big_small(&numer, b);
        let numer = numer / g2 * (a / g1);
        let denom = denom / g1 * (b / g2);
        self.0 = Ratio::new_raw(numer, denom);
    }

    pub fn abs_diff(&self, other: &Self) -> Self {
        if self >= other {
            ExactRational(&self.0 - &other.0)
        } else {
            ExactRational(&other.0 - &self.0)
        }
    }

    /// Integer power by squaring. Operand size grows linearly in `exp`.
    pub fn pow(&self, exp: u64) -> Self {
        let mut base = self.0.clone();
        let mut acc = Ratio::<BigUint>::one();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        ExactRational(acc)
    }

    /// Nearest `f64`; tiny or huge operands are handled by shifting.
    pub fn to_f64(&self) -> f64 {
        ratio_to_f64(self.numer(), self.denom())
    }

    /// Renders `100 * self` with `decimals` fractional digits, rounding half to even.
    pub fn render_percent(&self, decimals: u32) -> String {
        format_scaled(self.numer(), self.denom(), 100, decimals)
    }

    pub fn render_decimal(&self, decimals: u32) -> String {
        format_scaled(self.numer(), self.denom(), 1, decimals)
    }

    pub fn as_ratio(&self) -> &Ratio<BigUint> {
        &self.0
    }
}

fn gcd_big_small(big: &BigUint, small: u64) -> u64 {
    if small <= 1 {
        return small.max(1);
    }
    let r = (big % small).to_u64().expect("remainder below a u64 modulus");
    small.gcd(&r)
}

pub(crate) fn ratio_to_f64(numer: &BigUint, denom: &BigUint) -> f64 {
    if numer.is_zero() {
        return 0.0;
    }
    // Scale so the integer quotient carries 64 significant bits.
    let shift = numer.bits() as i64 - denom.bits() as i64 - 64;
    let q = if shift >= 0 {
        numer / (denom << shift as u64)
    } else {
        (numer << (-shift) as u64) / denom
    };
    q.to_f64().unwrap_or(f64::INFINITY) * 2f64.powi(shift as i32)
}

/// `numer / denom * scale` rounded half-to-even at `decimals` places.
pub(crate) fn format_scaled(numer: &BigUint, denom: &BigUint, scale: u32, decimals: u32) -> String {
    let pow10 = BigUint::from(10u32).pow(decimals);
    let scaled = numer * scale * &pow10;
    let (mut q, r) = scaled.div_rem(denom);
    let twice = r << 1u32;
    if twice > *denom || (twice == *denom && q.is_odd()) {
        q += 1u32;
    }
    let digits = q.to_str_radix(10);
    if decimals == 0 {
        return digits;
    }
    let d = decimals as usize;
    let padded = if digits.len() <= d {
        format!("{}{}", "0".repeat(d + 1 - digits.len()), digits)
    } else {
        digits
    };
    let (int, frac) = padded.split_at(padded.len() - d);
    format!("{int}.{frac}")
}

impl Add for &ExactRational {
    type Output = ExactRational;

    fn add(self, rhs: Self) -> ExactRational {
        ExactRational(&self.0 + &rhs.0)
    }
}

impl Add for ExactRational {
    type Output = ExactRational;

    fn add(self, rhs: Self) -> ExactRational {
        ExactRational(self.0 + rhs.0)
    }
}

impl Mul for &ExactRational {
    type Output = ExactRational;

    fn mul(self, rhs: Self) -> ExactRational {
        ExactRational(&self.0 * &rhs.0)
    }
}

impl Mul for ExactRational {
    type Output = ExactRational;

    fn mul(self, rhs: Self) -> ExactRational {
        ExactRational(self.0 * rhs.0)
    }
}

impl std::iter::Sum for ExactRational {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, x| acc + x)
    }
}

impl fmt::Debug for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.numer().bits() > 256 || self.denom().bits() > 256 {
            write!(
                f,
                "ExactRational(~{:e}, {}/{} bits)",
                self.to_f64(),
                self.numer().bits(),
                self.denom().bits()
            )
        } else {
            write!(f, "ExactRational({}/{})", self.numer(), self.denom())
        }
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mul_frac_stays_reduced() {
        let mut r = ExactRational::new(3u32, 4u32);
        r.mul_frac(8, 9);
        assert_eq!(r, ExactRational::new(2u32, 3u32));
        assert_eq!(r.numer(), &BigUint::from(2u32));
        r.mul_frac(0, 5);
        assert!(r.is_zero());
    }

    #[test]
    fn mul_frac_matches_ratio_product() {
        let mut r = ExactRational::one();
        let mut reference = Ratio::<BigUint>::one();
        for (a, b) in [(12u64, 35u64), (49, 6), (100, 7), (1, 1), (13_983_816, 258)] {
            r.mul_frac(a, b);
            reference *= Ratio::new(BigUint::from(a), BigUint::from(b));
            assert_eq!(r.as_ratio(), &reference);
        }
    }

    #[test]
    fn percent_rounds_half_to_even() {
        // 0.0125 -> 1.25% -> 1.2 at one decimal (2 is even)
        assert_eq!(ExactRational::new(1u32, 80u32).render_percent(1), "1.2");
        // 0.0135 -> 1.35% -> 1.4
        assert_eq!(ExactRational::new(27u32, 2000u32).render_percent(1), "1.4");
        assert_eq!(ExactRational::new(1u32, 3u32).render_percent(3), "33.333");
        assert_eq!(ExactRational::new(2u32, 3u32).render_percent(0), "67");
        assert_eq!(ExactRational::one().render_percent(3), "100.000");
        assert_eq!(ExactRational::zero().render_percent(2), "0.00");
        assert_eq!(ExactRational::new(1u32, 13_983_816u32).render_percent(7), "0.0000072");
    }

    #[test]
    fn complement_and_pow() {
        let x = ExactRational::new(1u32, 4u32);
        assert_eq!(x.complement(), ExactRational::new(3u32, 4u32));
        assert_eq!(x.pow(3), ExactRational::new(1u32, 64u32));
        assert_eq!(x.pow(0), ExactRational::one());
    }

    #[test]
    fn to_f64_handles_huge_operands() {
        let big = BigUint::from(3u32).pow(2000);
        let r = ExactRational::new(big.clone(), big * 4u32);
        assert_eq!(r.to_f64(), 0.25);
        assert!((ExactRational::new(1u32, 3u32).to_f64() - 1.0 / 3.0).abs() < 1e-16);
    }
}
