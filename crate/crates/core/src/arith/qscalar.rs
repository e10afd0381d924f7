//! Laurent polynomials in `q^{1/d}` with integer coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Rational;

/// `Σ c_k q^{k/d}`; exponents are stored already multiplied by `d`.
#[derive(Clone)]
pub struct QScalar {
    d: i64,
    terms: BTreeMap<i64, BigInt>,
}

impl QScalar {
    pub fn zero(d: i64) -> Self {
        assert!(d > 0, "q-denominator must be positive");
        QScalar { d, terms: BTreeMap::new() }
    }

    pub fn one(d: i64) -> Self {
        Self::monomial(d, 0, BigInt::one())
    }

    pub fn from_int(d: i64, c: i64) -> Self {
        Self::monomial(d, 0, BigInt::from(c))
    }

    /// `c · q^{k/d}`.
    pub fn monomial(d: i64, k: i64, c: BigInt) -> Self {
        let mut s = Self::zero(d);
        if !c.is_zero() {
            s.terms.insert(k, c);
        }
        s
    }

    /// `q^{k/d}`.
    pub fn q_pow(d: i64, k: i64) -> Self {
        Self::monomial(d, k, BigInt::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, BigInt)>>(d: i64, it: I) -> Self {
        let mut s = Self::zero(d);
        for (k, c) in it {
            s.add_term(k, c);
        }
        s
    }

    fn add_term(&mut self, k: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(k).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    /// Pairs `(k, c)` meaning `c · q^{k/d}`.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    /// A single term `c · q^{k/d}`.
    pub fn as_monomial(&self) -> Option<(i64, &BigInt)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(k, c)| (*k, c))
        } else {
            None
        }
    }

    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// Same element written over the finer denominator `d2` (a multiple of `d`).
    pub fn lift(&self, d2: i64) -> QScalar {
        assert!(d2 % self.d == 0, "cannot lift q^(1/{}) to q^(1/{})", self.d, d2);
        let f = d2 / self.d;
        QScalar { d: d2, terms: self.terms.iter().map(|(k, c)| (k * f, c.clone())).collect() }
    }

    /// Smallest denominator that still represents the element.
    pub fn reduced(&self) -> QScalar {
        let g = self.terms.keys().fold(self.d, |g, k| g.gcd(k));
        QScalar { d: self.d / g, terms: self.terms.iter().map(|(k, c)| (k / g, c.clone())).collect() }
    }

    fn common(&self, other: &QScalar) -> (QScalar, QScalar) {
        if self.d == other.d {
            return (self.clone(), other.clone());
        }
        let l = self.d.lcm(&other.d);
        (self.lift(l), other.lift(l))
    }

    pub fn add(&self, other: &QScalar) -> QScalar {
        let (mut a, b) = self.common(other);
        for (k, c) in b.terms {
            a.add_term(k, c);
        }
        a
    }

    pub fn neg(&self) -> QScalar {
        QScalar { d: self.d, terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect() }
    }

    pub fn sub(&self, other: &QScalar) -> QScalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &QScalar) -> QScalar {
        let (a, b) = self.common(other);
        let mut out = QScalar::zero(a.d);
        for (ka, ca) in &a.terms {
            for (kb, cb) in &b.terms {
                out.add_term(ka + kb, ca * cb);
            }
        }
        out
    }

    pub fn scale_int(&self, c: &BigInt) -> QScalar {
        if c.is_zero() {
            return QScalar::zero(self.d);
        }
        QScalar { d: self.d, terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect() }
    }

    /// Multiplication by `q^{k/d}` in this element's own denominator.
    pub fn shift(&self, k: i64) -> QScalar {
        QScalar { d: self.d, terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    pub fn pow(&self, e: u32) -> QScalar {
        let mut acc = QScalar::one(self.d);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Substitutes `q^{1/d} -> q^{-1/d}`.
    pub fn bar(&self) -> QScalar {
        QScalar { d: self.d, terms: self.terms.iter().map(|(k, c)| (-k, c.clone())).collect() }
    }

    /// Value at `q^{1/d} = 1`.
    pub fn q_limit(&self) -> Rational {
        Rational::from_integer(self.terms.values().sum())
    }

    /// Exact quotient in `Z[q^{±1/d}]`, or `None` when the division leaves a
    /// remainder or non-integer coefficients.
    pub fn q_divide(&self, by: &QScalar) -> Option<QScalar> {
        assert!(!by.is_zero(), "division by the zero q-scalar");
        let (a, b) = self.common(by);
        if a.is_zero() {
            return Some(a);
        }
        let (&alo, _) = a.terms.iter().next()?;
        let (&blo, _) = b.terms.iter().next()?;
        // dense coefficient vectors of the polynomial parts, lowest degree first
        let dense = |s: &QScalar, lo: i64| -> Vec<BigInt> {
            let hi = *s.terms.keys().next_back().expect("nonzero");
            let mut v = vec![BigInt::zero(); (hi - lo + 1) as usize];
            for (k, c) in &s.terms {
                v[(k - lo) as usize] = c.clone();
            }
            v
        };
        let mut num = dense(&a, alo);
        let den = dense(&b, blo);
        if num.len() < den.len() {
            return None;
        }
        let lead = den.last().expect("nonzero").clone();
        let qlen = num.len() - den.len() + 1;
        let mut quot = vec![BigInt::zero(); qlen];
        for i in (0..qlen).rev() {
            let top = &num[i + den.len() - 1];
            if top.is_zero() {
                continue;
            }
            let (c, r) = top.div_rem(&lead);
            if !r.is_zero() {
                return None;
            }
            for (j, dj) in den.iter().enumerate() {
                num[i + j] -= &c * dj;
            }
            quot[i] = c;
        }
        if num.iter().any(|c| !c.is_zero()) {
            return None;
        }
        let shift = alo - blo;
        Some(QScalar::from_terms(a.d, quot.into_iter().enumerate().map(|(i, c)| (i as i64 + shift, c))))
    }
}

impl PartialEq for QScalar {
    fn eq(&self, other: &Self) -> bool {
        if self.d == other.d {
            return self.terms == other.terms;
        }
        let (a, b) = self.common(other);
        a.terms == b.terms
    }
}

impl Eq for QScalar {}

impl fmt::Display for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (k, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if negative { " - " } else { " + " })?;
            }
            let g = k.gcd(&self.d);
            let (p, q) = (k / g, self.d / g);
            let power = match (p, q) {
                (0, _) => String::new(),
                (1, 1) => "q".to_string(),
                (p, 1) => format!("q^{}", p),
                (p, q) => format!("q^({}/{})", p, q),
            };
            match (power.is_empty(), abs.is_one()) {
                (true, _) => write!(f, "{}", abs)?,
                (false, true) => write!(f, "{}", power)?,
                (false, false) => write!(f, "{}*{}", abs, power)?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [d={}]", self, self.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qs(d: i64, terms: &[(i64, i64)]) -> QScalar {
        QScalar::from_terms(d, terms.iter().map(|(k, c)| (*k, BigInt::from(*c))))
    }

    #[test]
    fn limit_example() {
        // q^2 + q^-1
        assert_eq!(qs(1, &[(2, 1), (-1, 1)]).q_limit(), Rational::from_integer(2.into()));
    }

    #[test]
    fn divide_examples() {
        let q_minus_1 = qs(1, &[(1, 1), (0, -1)]);
        let root_minus_1 = qs(2, &[(1, 1), (0, -1)]);
        let got = q_minus_1.q_divide(&root_minus_1).unwrap();
        assert_eq!(got, qs(2, &[(1, 1), (0, 1)]));
        assert_eq!(got.d(), 2);
        let root_plus_1 = qs(2, &[(1, 1), (0, 1)]);
        assert!(root_plus_1.q_divide(&root_minus_1).is_none());
    }

    #[test]
    fn divide_with_negative_exponents_and_non_monic_divisor() {
        let a = qs(1, &[(-2, 1), (0, 1)]).mul(&qs(1, &[(3, 2), (-1, 5)]));
        let b = qs(1, &[(3, 2), (-1, 5)]);
        assert_eq!(a.q_divide(&b).unwrap(), qs(1, &[(-2, 1), (0, 1)]));
        assert!(qs(1, &[(0, 1)]).q_divide(&qs(1, &[(0, 2)])).is_none());
    }

    #[test]
    fn equality_across_denominators() {
        assert_eq!(qs(1, &[(1, 3)]), qs(4, &[(4, 3)]));
        assert_eq!(qs(6, &[(3, 1)]).reduced().d(), 2);
    }

    #[test]
    fn display() {
        assert_eq!(qs(2, &[(1, 1), (0, 1), (-4, -3)]).to_string(), "q^(1/2) + 1 - 3*q^-2");
    }
}
