//! Scalar abstractions.
//!
//! Two families of numbers flow through the crate:
//!
//! * [`Real`]: floating point types (`f32`, `f64`) used for dense
//!   distributions, distances and the complex eigenfunction machinery.
//! * [`Weight`]: probability weights on group elements. Floats implement it,
//!   and so does [`BigRational`], which makes measure and flow identities
//!   exact.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FloatConst, FromPrimitive, Num, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Floating point scalar: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + Sum + Default + Debug + Display + Send + Sync + 'static
{
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal fits the scalar type")
    }

    fn from_usize_lossy(x: usize) -> Self {
        Self::from_usize(x).expect("integer fits the scalar type")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// A probability weight.
pub trait Weight: Num + Clone + PartialOrd + Debug + Send + Sync + 'static {
    /// `num / den`.
    fn from_ratio(num: i64, den: i64) -> Self;

    fn to_f64(&self) -> f64;

    /// Whether arithmetic on this type is exact.
    fn is_exact() -> bool;

    /// Equality: exact for rationals, relative 1e-12 for floats.
    fn weight_eq(&self, other: &Self) -> bool;

    /// Canonical text form; rationals always render as `p/q`.
    fn render(&self) -> String;

    fn parse_weight(s: &str) -> Result<Self>;

    fn half() -> Self {
        Self::from_ratio(1, 2)
    }
}

fn float_close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

macro_rules! float_weight {
    ($t:ty) => {
        impl Weight for $t {
            fn from_ratio(num: i64, den: i64) -> Self {
                (num as f64 / den as f64) as $t
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }

            fn is_exact() -> bool {
                false
            }

            fn weight_eq(&self, other: &Self) -> bool {
                float_close(*self as f64, *other as f64)
            }

            fn render(&self) -> String {
                format_g17(*self as f64)
            }

            fn parse_weight(s: &str) -> Result<Self> {
                if let Some((p, q)) = s.split_once('/') {
                    let p: f64 = p.trim().parse().map_err(|_| Error::parse(s))?;
                    let q: f64 = q.trim().parse().map_err(|_| Error::parse(s))?;
                    return Ok((p / q) as $t);
                }
                s.trim().parse::<$t>().map_err(|_| Error::parse(s))
            }
        }
    };
}

float_weight!(f32);
float_weight!(f64);

impl Weight for BigRational {
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn is_exact() -> bool {
        true
    }

    fn weight_eq(&self, other: &Self) -> bool {
        self == other
    }

    fn render(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }

    fn parse_weight(s: &str) -> Result<Self> {
        let s = s.trim();
        let (p, q) = s.split_once('/').unwrap_or((s, "1"));
        let p = BigInt::from_str(p.trim()).map_err(|_| Error::parse(s))?;
        let q = BigInt::from_str(q.trim()).map_err(|_| Error::parse(s))?;
        if q.is_zero() {
            return Err(Error::parse(s));
        }
        Ok(BigRational::new(p, q))
    }
}

/// Shorthand for the exact rational `num / den`.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::from_ratio(num, den)
}

/// Kahan–Babuška (Neumaier) compensated sum.
pub fn compensated_sum<T: Real, I: IntoIterator<Item = T>>(items: I) -> T {
    let mut sum = T::zero();
    let mut comp = T::zero();
    for x in items {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp = comp + ((sum - t) + x);
        } else {
            comp = comp + ((x - t) + sum);
        }
        sum = t;
    }
    sum + comp
}

/// Formats a double with 17 significant digits, `%.17g` style (trailing
/// zeros stripped).
pub fn format_g17(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    const P: i32 = 17;
    let sci = format!("{:.*e}", (P - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if !(-4..P).contains(&exp) {
        let m = strip_zeros(mantissa);
        return format!("{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs());
    }
    let decimals = (P - 1 - exp).max(0) as usize;
    strip_zeros(&format!("{:.*}", decimals, x)).to_string()
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn g17_matches_printf() {
        assert_eq!(format_g17(0.1), "0.10000000000000001");
        assert_eq!(format_g17(1.0), "1");
        assert_eq!(format_g17(0.5), "0.5");
        assert_eq!(format_g17(1e-7), "9.9999999999999995e-08");
        assert_eq!(format_g17(123456.0), "123456");
        assert_eq!(format_g17(-2.5e20), "-2.5e+20");
        assert_eq!(format_g17(0.0), "0");
    }

    #[test]
    fn g17_roundtrips() {
        for &x in &[0.1, 1.0 / 3.0, std::f64::consts::PI, 1e-300, 6.02e23, -7.25] {
            let s = format_g17(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
    }

    #[test]
    fn rational_render_and_parse() {
        let w = BigRational::from_ratio(2, 4);
        assert_eq!(w.render(), "1/2");
        assert_eq!(BigRational::one().render(), "1/1");
        assert_eq!(BigRational::parse_weight("1/2").unwrap(), w);
        assert_eq!(BigRational::parse_weight("3").unwrap(), BigRational::from_ratio(3, 1));
        assert!(BigRational::parse_weight("1/0").is_err());
        assert!(BigRational::parse_weight("x").is_err());
        assert_eq!(f64::parse_weight("1/4").unwrap(), 0.25);
    }

    #[test]
    fn compensated_sum_beats_naive() {
        let n = 40320;
        let xs = vec![1.0 / n as f64; n];
        let s: f64 = compensated_sum(xs.iter().copied());
        assert!((s - 1.0).abs() < 1e-15);
        let tricky = [1e16, 1.0, -1e16];
        assert_eq!(compensated_sum(tricky), 1.0);
    }
}
