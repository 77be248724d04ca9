//! Laurent polynomials in `q` with exact integer coefficients, used for
//! graded dimensions and graded characters.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// A Laurent polynomial in `q`: a finitely supported exponent-to-coefficient
/// map with no explicit zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    /// The zero polynomial.
    pub fn zero() -> Self {
        Self::default()
    }

    /// The constant polynomial `1`.
    pub fn one() -> Self {
        Self::monomial(0, BigInt::one())
    }

    /// The single term `c * q^n`.
    pub fn monomial(n: i64, c: BigInt) -> Self {
        let mut out = Self::zero();
        out.add_term(n, c);
        out
    }

    /// Adds `c * q^n` in place, dropping the entry if it cancels.
    pub fn add_term(&mut self, n: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(n).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&n);
        }
    }

    /// The coefficient of `q^n`.
    pub fn coeff(&self, n: i64) -> BigInt {
        self.coeffs.get(&n).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Iterates over the nonzero `(exponent, coefficient)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (i64, &BigInt)> + '_ {
        self.coeffs.iter().map(|(&n, c)| (n, c))
    }

    /// Whether this is the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Sum of two polynomials.
    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (n, c) in other.iter() {
            out.add_term(n, c.clone());
        }
        out
    }

    /// Product of two polynomials.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (n, c) in self.iter() {
            for (m, d) in other.iter() {
                out.add_term(n + m, c * d);
            }
        }
        out
    }

    /// Multiplies by `q^n` (a grading shift).
    pub fn shift(&self, n: i64) -> Self {
        let mut out = Self::zero();
        for (m, c) in self.iter() {
            out.add_term(n + m, c.clone());
        }
        out
    }

    /// Substitutes `q -> q^{-1}` (the bar involution on exponents).
    pub fn invert_q(&self) -> Self {
        let mut out = Self::zero();
        for (n, c) in self.iter() {
            out.add_term(-n, c.clone());
        }
        out
    }

    /// Evaluates at `q = 1`: the coefficient sum.
    pub fn eval_at_one(&self) -> BigInt {
        let mut total = BigInt::zero();
        for (_, c) in self.iter() {
            total += c;
        }
        total
    }

    /// Serializes as the spec's JSON object `{"-2": 1, "0": 2}`.
    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for (n, c) in self.iter() {
            map.insert(n.to_string(), serde_json::Value::String(c.to_string()));
        }
        serde_json::Value::Object(map)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (n, c) in self.iter() {
            if first {
                write!(f, "{}", term(n, c, false))?;
                first = false;
            } else {
                write!(f, " {}", term(n, c, true))?;
            }
        }
        Ok(())
    }
}

fn term(n: i64, c: &BigInt, signed: bool) -> String {
    let (sign, abs) = if c.sign() == num_bigint::Sign::Minus {
        ("-", -c.clone())
    } else {
        ("+", c.clone())
    };
    let body = match (n, abs.is_one()) {
        (0, _) => format!("{abs}"),
        (1, true) => "q".to_string(),
        (1, false) => format!("{abs}*q"),
        (_, true) => format!("q^{n}"),
        (_, false) => format!("{abs}*q^{n}"),
    };
    if signed {
        format!("{sign} {body}")
    } else if sign == "-" {
        format!("-{body}")
    } else {
        body
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(terms: &[(i64, i64)]) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for &(n, c) in terms {
            out.add_term(n, BigInt::from(c));
        }
        out
    }

    #[test]
    fn arithmetic() {
        let a = p(&[(-2, 1), (0, 2)]);
        let b = p(&[(1, 3)]);
        assert_eq!(a.add(&b), p(&[(-2, 1), (0, 2), (1, 3)]));
        assert_eq!(a.mul(&b), p(&[(-1, 3), (1, 6)]));
        assert_eq!(a.shift(2), p(&[(0, 1), (2, 2)]));
        assert_eq!(a.invert_q(), p(&[(2, 1), (0, 2)]));
        assert_eq!(a.eval_at_one(), BigInt::from(3));
        assert_eq!(p(&[(5, 1), (5, -1)]), LaurentPoly::zero());
    }

    #[test]
    fn display() {
        assert_eq!(p(&[]).to_string(), "0");
        assert_eq!(p(&[(0, 1)]).to_string(), "1");
        assert_eq!(p(&[(-2, 1), (0, -2), (1, 1)]).to_string(), "q^-2 - 2 + q");
    }
}
