//! Finite sums of real multiples of rational powers, `f(x) = Σ c_i x^{q_i}`
//! for `x > 0`.

use std::fmt;

use crate::rational::Rational;
use crate::scalar::Real;

/// Terms are kept with strictly decreasing exponents and nonzero coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct PuiseuxExpr<T> {
    terms: Vec<(T, Rational)>,
}

impl<T: Real> PuiseuxExpr<T> {
    /// Collects like powers and drops zero coefficients.
    pub fn new(terms: impl IntoIterator<Item = (T, Rational)>) -> Self {
        let mut terms: Vec<(T, Rational)> = terms.into_iter().collect();
        terms.sort_by(|a, b| b.1.cmp(&a.1));
        let mut merged: Vec<(T, Rational)> = Vec::with_capacity(terms.len());
        for (c, q) in terms {
            match merged.last_mut() {
                Some(last) if last.1 == q => last.0 = last.0 + c,
                _ => merged.push((c, q)),
            }
        }
        merged.retain(|(c, _)| *c != T::zero());
        PuiseuxExpr { terms: merged }
    }

    pub fn zero() -> Self {
        PuiseuxExpr { terms: Vec::new() }
    }

    pub fn monomial(coeff: T, exponent: Rational) -> Self {
        Self::new([(coeff, exponent)])
    }

    pub fn terms(&self) -> &[(T, Rational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Dominant term as `x → ∞`.
    pub fn leading(&self) -> Option<(T, &Rational)> {
        self.terms.first().map(|(c, q)| (*c, q))
    }

    pub fn eval(&self, x: T) -> T {
        self.terms.iter().map(|(c, q)| *c * x.powf(q.to_real())).sum()
    }

    pub fn scaled(&self, k: T) -> Self {
        Self::new(self.terms.iter().map(|(c, q)| (*c * k, q.clone())))
    }

    pub fn plus(&self, other: &Self) -> Self {
        Self::new(self.terms.iter().chain(other.terms.iter()).cloned())
    }
}

impl<T: Real> fmt::Display for PuiseuxExpr<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (c, q)) in self.terms.iter().enumerate() {
            let (sign, mag) = if *c < T::zero() { ("-", -*c) } else { ("+", *c) };
            if i == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if q.numer() == &0.into() {
                write!(f, "{mag}")?;
            } else {
                if mag != T::one() {
                    write!(f, "{mag}*")?;
                }
                if q.is_one() {
                    write!(f, "t")?;
                } else {
                    write!(f, "t^({q})")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn normalizes_terms() {
        let p = PuiseuxExpr::new([(7.0, q("-2")), (3.0, q("1/3")), (1.0, q("-2")), (0.0, q("5"))]);
        assert_eq!(p.terms(), &[(3.0, q("1/3")), (8.0, q("-2"))]);
        assert_eq!(p.leading(), Some((3.0, &q("1/3"))));
        let z = PuiseuxExpr::new([(1.0f64, q("1")), (-1.0, q("1"))]);
        assert!(z.is_zero());
    }

    #[test]
    fn evaluates() {
        let p = PuiseuxExpr::new([(2.0f64, q("1/2")), (1.0, q("0"))]);
        assert!((p.eval(9.0) - 7.0).abs() < 1e-12);
        let p32 = PuiseuxExpr::new([(2.0f32, q("1/2"))]);
        assert!((p32.eval(4.0) - 4.0).abs() < 1e-5);
    }

    #[test]
    fn display_reads_back_like_the_curve_grammar() {
        let p = PuiseuxExpr::new([(1.0f64, q("1")), (-2.5, q("-1/2")), (3.0, q("0"))]);
        assert_eq!(p.to_string(), "t + 3 - 2.5*t^(-1/2)");
    }
}
