//! Exact rational exponents and the float-to-rational snapping used by every
//! numeric estimator.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::scalar::Real;

/// Exact reduced fraction with positive denominator.
///
/// Serialized as the string `"p/q"`, or `"p"` when the denominator is one.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RationalError {
    #[error("invalid rational literal {0:?}")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("no rational with denominator <= {max_den} within {tol} of {x}")]
    NoRationalNearby { x: f64, max_den: u64, tol: f64 },
    #[error("rounding needs max_den >= 1 and tol > 0")]
    BadRoundingParams,
}

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_integer(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or_else(|| {
            self.numer().to_f64().unwrap_or(f64::NAN) / self.denom().to_f64().unwrap_or(f64::NAN)
        })
    }

    pub fn to_real<T: Real>(&self) -> T {
        T::lit(self.to_f64())
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl std::ops::Add for &Rational {
    type Output = Rational;
    fn add(self, rhs: &Rational) -> Rational {
        Rational(&self.0 + &rhs.0)
    }
}

impl std::ops::Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = RationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let parse_int = |p: &str| {
            let p = p.trim();
            let digits = p.strip_prefix(['-', '+']).unwrap_or(p);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(RationalError::Malformed(s.to_string()));
            }
            BigInt::from_str(p.strip_prefix('+').unwrap_or(p))
                .map_err(|_| RationalError::Malformed(s.to_string()))
        };
        match t.split_once('/') {
            None => Ok(Rational(BigRational::from_integer(parse_int(t)?))),
            Some((n, d)) => {
                let n = parse_int(n)?;
                let d = parse_int(d)?;
                if d.is_zero() {
                    return Err(RationalError::ZeroDenominator(s.to_string()));
                }
                Ok(Rational(BigRational::new(n, d)))
            }
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Snap `x` to the continued-fraction convergent with denominator at most
/// `max_den` that lies closest to it.
///
/// Fails with [`RationalError::NoRationalNearby`] when even the best
/// convergent is farther than `tol` from `x`.
pub fn rational_round<T: Real>(x: T, max_den: u64, tol: T) -> Result<Rational, RationalError> {
    if max_den == 0 || !(tol > T::zero()) {
        return Err(RationalError::BadRoundingParams);
    }
    let xf = x.to_f64_lossy();
    let tolf = tol.to_f64_lossy();
    let fail = || RationalError::NoRationalNearby { x: xf, max_den, tol: tolf };
    if !xf.is_finite() {
        return Err(fail());
    }

    // Convergents h_k / k_k via the standard recurrence, in i128 to stay exact.
    let (mut h_prev, mut h) = (1i128, xf.floor() as i128);
    let (mut k_prev, mut k) = (0i128, 1i128);
    let mut best = (h, k, (xf - h as f64).abs());
    let mut frac = xf - xf.floor();
    for _ in 0..64 {
        if frac < 1e-15 {
            break;
        }
        let inv = 1.0 / frac;
        let a = inv.floor();
        frac = inv - a;
        let a = a as i128;
        let (h_next, k_next) = (a * h + h_prev, a * k + k_prev);
        if k_next > max_den as i128 {
            break;
        }
        (h_prev, h, k_prev, k) = (h, h_next, k, k_next);
        let err = (xf - h as f64 / k as f64).abs();
        if err < best.2 {
            best = (h, k, err);
        }
    }
    if best.2 > tolf {
        return Err(fail());
    }
    Ok(Rational(BigRational::new(BigInt::from(best.0), BigInt::from(best.1))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_display_are_reduced() {
        assert_eq!(r("2/4").to_string(), "1/2");
        assert_eq!(r("-3/-6").to_string(), "1/2");
        assert_eq!(r("4/2").to_string(), "2");
        assert_eq!(r("1/-3").to_string(), "-1/3");
        assert_eq!(r(" 7 ").to_string(), "7");
        assert!(r("-1/3").denom() > &BigInt::zero());
    }

    #[test]
    fn parse_errors() {
        assert!(matches!("1/0".parse::<Rational>(), Err(RationalError::ZeroDenominator(_))));
        assert!("a/2".parse::<Rational>().is_err());
        assert!("".parse::<Rational>().is_err());
        assert!("1/".parse::<Rational>().is_err());
        assert!("0.5".parse::<Rational>().is_err());
    }

    #[test]
    fn ordering_is_numeric() {
        let mut v = vec![r("1"), r("-1/2"), r("1/3"), r("1/2")];
        v.sort();
        assert_eq!(v, vec![r("-1/2"), r("1/3"), r("1/2"), r("1")]);
    }

    #[test]
    fn serde_uses_strings() {
        let json = serde_json::to_string(&vec![r("1/2"), r("1")]).unwrap();
        assert_eq!(json, r#"["1/2","1"]"#);
        let back: Vec<Rational> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, vec![r("1/2"), r("1")]);
    }

    #[test]
    fn rounding_examples() {
        assert_eq!(rational_round(0.501, 16, 0.05).unwrap(), r("1/2"));
        assert_eq!(rational_round(0.3337, 16, 0.05).unwrap(), r("1/3"));
        assert!(matches!(
            rational_round(0.41, 2, 0.05),
            Err(RationalError::NoRationalNearby { .. })
        ));
        assert_eq!(rational_round(-0.98f32, 16, 0.05).unwrap(), r("-1"));
        assert_eq!(rational_round(1.4999, 16, 0.05).unwrap(), r("3/2"));
        assert_eq!(rational_round(2.0, 1, 0.05).unwrap(), r("2"));
        assert!(rational_round(0.5, 0, 0.1).is_err());
        assert!(rational_round(0.5, 4, 0.0).is_err());
    }

    /// Every p/q with q <= max_den, brute force.
    fn brute_best(x: f64, max_den: i64) -> f64 {
        let mut best = f64::INFINITY;
        for q in 1..=max_den {
            let p = (x * q as f64).round();
            for pp in [p - 1.0, p, p + 1.0] {
                best = best.min((x - pp / q as f64).abs());
            }
        }
        best
    }

    #[test]
    fn no_rational_nearby_matches_enumeration() {
        // 0.41 with q <= 2: candidates 0, 1/2, 1 are all farther than 0.05.
        assert!(brute_best(0.41, 2) > 0.05);
    }

    proptest::proptest! {
        #[test]
        fn rounding_is_close_and_bounded(x in -5.0f64..5.0, max_den in 1u64..40, tol in 0.001f64..0.3) {
            match rational_round(x, max_den, tol) {
                Ok(q) => {
                    proptest::prop_assert!((q.to_f64() - x).abs() <= tol + 1e-12);
                    proptest::prop_assert!(q.denom() <= &BigInt::from(max_den));
                }
                Err(_) => {
                    // The nearest integer is always a convergent, so failure
                    // implies it is out of tolerance.
                    proptest::prop_assert!((x - x.round()).abs() > tol);
                    proptest::prop_assert!(brute_best(x, 1) > tol);
                }
            }
        }

        #[test]
        fn display_parse_roundtrip(n in -1000i64..1000, d in 1i64..1000) {
            let q = Rational::new(n, d);
            let back: Rational = q.to_string().parse().unwrap();
            proptest::prop_assert_eq!(q, back);
        }
    }
}
