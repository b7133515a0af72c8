use std::fmt;

use crate::extended::{ExtReal, ACCURACY_BITS};
use crate::rational::ExactRational;

/// A probability, exact when the operands allow it.
#[derive(Clone, PartialEq, Eq)]
pub enum Probability {
    Exact(ExactRational),
    /// Extended precision; absolute error below `2^-ACCURACY_BITS`.
    Approx(ExtReal),
}

impl Probability {
    pub fn zero() -> Self {
        Probability::Exact(ExactRational::zero())
    }

    pub fn one() -> Self {
        Probability::Exact(ExactRational::one())
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Probability::Exact(_))
    }

    pub fn exact(&self) -> Option<&ExactRational> {
        match self {
            Probability::Exact(r) => Some(r),
            Probability::Approx(_) => None,
        }
    }

    /// Declared absolute accuracy in bits; `None` when exact.
    pub fn accuracy_bits(&self) -> Option<u32> {
        match self {
            Probability::Exact(_) => None,
            Probability::Approx(_) => Some(ACCURACY_BITS),
        }
    }

    pub fn complement(&self) -> Self {
        match self {
            Probability::Exact(r) => Probability::Exact(r.complement()),
            Probability::Approx(x) => Probability::Approx(x.complement().clamp_unit()),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Probability::Exact(r) => r.to_f64(),
            Probability::Approx(x) => x.to_f64(),
        }
    }

    /// The stored value as a rational (an approximation's mantissa is exact).
    pub fn to_rational(&self) -> ExactRational {
        match self {
            Probability::Exact(r) => r.clone(),
            Probability::Approx(x) => x.to_rational(),
        }
    }

    /// Percent with `decimals` places, rounded half to even.
    pub fn render_percent(&self, decimals: u32) -> String {
        match self {
            Probability::Exact(r) => r.render_percent(decimals),
            Probability::Approx(x) => x.render_percent(decimals),
        }
    }

    /// Like [`render_percent`](Self::render_percent), but a non-zero value
    /// that would round to zero gets extra places until `min_significant`
    /// digits show (so 1/13,983,816 renders as `0.0000072`).
    pub fn render_percent_significant(&self, decimals: u32, min_significant: u32) -> String {
        let base = self.render_percent(decimals);
        if !is_zero_string(&base) || self.to_rational().is_zero() {
            return base;
        }
        let mut d = decimals;
        loop {
            d += 1;
            let s = self.render_percent(d);
            let significant = s
                .trim_start_matches(['0', '.'])
                .chars()
                .filter(char::is_ascii_digit)
                .count() as u32;
            if significant >= min_significant || d >= decimals + 60 {
                return s;
            }
        }
    }

    pub fn render_decimal(&self, decimals: u32) -> String {
        match self {
            Probability::Exact(r) => r.render_decimal(decimals),
            Probability::Approx(x) => x.render_decimal(decimals),
        }
    }

    /// Absolute difference as `f64`, computed in exact/extended arithmetic first.
    pub fn abs_diff(&self, other: &Probability) -> f64 {
        self.to_rational().abs_diff(&other.to_rational()).to_f64()
    }
}

fn is_zero_string(s: &str) -> bool {
    s.chars().all(|c| c == '0' || c == '.')
}

impl From<ExactRational> for Probability {
    fn from(r: ExactRational) -> Self {
        Probability::Exact(r)
    }
}

impl From<ExtReal> for Probability {
    fn from(x: ExtReal) -> Self {
        Probability::Approx(x)
    }
}

impl fmt::Debug for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Probability::Exact(r) => write!(f, "Exact({r:?})"),
            Probability::Approx(x) => write!(f, "Approx({x:?})"),
        }
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}%", self.render_percent(3))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_rendering_of_jackpot() {
        let p = Probability::Exact(ExactRational::new(1u32, 13_983_816u32));
        assert_eq!(p.render_percent(3), "0.000");
        assert_eq!(p.render_percent_significant(3, 2), "0.0000072");
        let q = Probability::Exact(ExactRational::new(258u32, 13_983_816u32));
        assert_eq!(q.render_percent_significant(3, 2), "0.002");
        assert_eq!(Probability::zero().render_percent_significant(3, 2), "0.000");
    }

    #[test]
    fn abs_diff_is_symmetric() {
        let a = Probability::Exact(ExactRational::new(1u32, 3u32));
        let b = Probability::Approx(ExtReal::from_rational(&ExactRational::new(1u32, 4u32)));
        assert!((a.abs_diff(&b) - 1.0 / 12.0).abs() < 1e-15);
        assert!((b.abs_diff(&a) - 1.0 / 12.0).abs() < 1e-15);
    }
}
