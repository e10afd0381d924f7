//! Sparse multivariate Laurent polynomials with rational coefficients.
//!
//! Variables are named symbols. Monomials are stored sparsely, sorted by
//! label, and compared in lexicographic order where the alphabetically
//! first label is the most significant variable. The same type doubles as
//! the ordinary polynomial ring when every exponent is nonnegative.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::Rational;

/// A variable name. Cheap to clone, ordered by its text.
pub type Symbol = Arc<str>;

pub fn sym(name: &str) -> Symbol {
    Arc::from(name)
}

/// A Laurent monomial `x_1^{e_1} ... x_k^{e_k}`: sorted by symbol, no zero exponents.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Symbol, i64)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(s: Symbol) -> Self {
        Monomial(vec![(s, 1)])
    }

    pub fn from_pairs<I: IntoIterator<Item = (Symbol, i64)>>(pairs: I) -> Self {
        let mut map: BTreeMap<Symbol, i64> = BTreeMap::new();
        for (s, e) in pairs {
            *map.entry(s).or_insert(0) += e;
        }
        Monomial(map.into_iter().filter(|(_, e)| *e != 0).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, s: &str) -> i64 {
        self.0
            .binary_search_by(|(t, _)| (**t).cmp(s))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Symbol, i64)> {
        self.0.iter()
    }

    pub fn is_polynomial(&self) -> bool {
        self.0.iter().all(|(_, e)| *e >= 0)
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    fn merge(&self, other: &Monomial, sign: i64) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            let ord = match (self.0.get(i), other.0.get(j)) {
                (Some(a), Some(b)) => a.0.cmp(&b.0),
                (Some(_), None) => Ordering::Less,
                (None, _) => Ordering::Greater,
            };
            match ord {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    let (s, e) = &other.0[j];
                    out.push((s.clone(), sign * e));
                    j += 1;
                }
                Ordering::Equal => {
                    let e = self.0[i].1 + sign * other.0[j].1;
                    if e != 0 {
                        out.push((self.0[i].0.clone(), e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Monomial(out)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        self.merge(other, 1)
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        self.merge(other, -1)
    }

    pub fn pow(&self, k: i64) -> Monomial {
        if k == 0 {
            return Monomial::one();
        }
        Monomial(self.0.iter().map(|(s, e)| (s.clone(), e * k)).collect())
    }

    /// True when `self` divides `other` inside the polynomial ring.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().all(|(s, e)| other.exponent(s) >= *e)
    }

    /// Componentwise minimum, with absent symbols counting as exponent 0.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let symbols: BTreeSet<&Symbol> = self.0.iter().chain(other.0.iter()).map(|(s, _)| s).collect();
        Monomial(
            symbols
                .into_iter()
                .map(|s| (s.clone(), self.exponent(s).min(other.exponent(s))))
                .filter(|(_, e)| *e != 0)
                .collect(),
        )
    }

    /// Drops the given symbol.
    pub fn without(&self, s: &str) -> Monomial {
        Monomial(self.0.iter().filter(|(t, _)| &**t != s).cloned().collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.0.get(i), other.0.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some((_, e)), None) => return if *e > 0 { Ordering::Greater } else { Ordering::Less },
                (None, Some((_, e))) => return if *e > 0 { Ordering::Less } else { Ordering::Greater },
                (Some((s1, e1)), Some((s2, e2))) => match s1.cmp(s2) {
                    Ordering::Less => return if *e1 > 0 { Ordering::Greater } else { Ordering::Less },
                    Ordering::Greater => return if *e2 > 0 { Ordering::Less } else { Ordering::Greater },
                    Ordering::Equal => {
                        if e1 != e2 {
                            return e1.cmp(e2);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (idx, (s, e)) in self.0.iter().enumerate() {
            if idx > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{}", s)?;
            } else {
                write!(f, "{}^{}", s, e)?;
            }
        }
        Ok(())
    }
}

/// Element of `Q[x^{±1}]` over an open-ended set of named variables.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Laurent {
    terms: BTreeMap<Monomial, Rational>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(Rational::from_integer(BigInt::from(c)))
    }

    pub fn var(name: &str) -> Self {
        Self::term(Rational::one(), Monomial::var(sym(name)))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Laurent { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(it: I) -> Self {
        let mut out = Laurent::zero();
        for (m, c) in it {
            out.add_term(m, c);
        }
        out
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                add_assign(o.get_mut(), &c);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Monomial::one()).is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|m| m.is_polynomial())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Lex-leading term.
    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        self.terms.keys().flat_map(|m| m.iter().map(|(s, _)| s.clone())).collect()
    }

    pub fn degree_in(&self, s: &str) -> i64 {
        self.terms.keys().map(|m| m.exponent(s)).max().unwrap_or(0)
    }

    pub fn min_degree_in(&self, s: &str) -> i64 {
        self.terms.keys().map(|m| m.exponent(s)).min().unwrap_or(0)
    }

    pub fn scale(&self, c: &Rational) -> Laurent {
        if c.is_zero() {
            return Laurent::zero();
        }
        Laurent { terms: self.terms.iter().map(|(m, a)| (m.clone(), qmul(a, c))).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Laurent {
        Laurent { terms: self.terms.iter().map(|(k, a)| (k.mul(m), a.clone())).collect() }
    }

    pub fn add(&self, other: &Laurent) -> Laurent {
        let (big, small) = if self.terms.len() >= other.terms.len() { (self, other) } else { (other, self) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Laurent) -> Laurent {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Laurent {
        Laurent { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }

    pub fn mul(&self, other: &Laurent) -> Laurent {
        let mut out = Laurent::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), qmul(c1, c2));
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Laurent {
        let mut result = Laurent::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Inverse of a single term; `None` otherwise.
    pub fn monomial_inverse(&self) -> Option<Laurent> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next()?;
        Some(Laurent::term(c.recip(), m.pow(-1)))
    }

    pub fn derivative(&self, s: &str) -> Laurent {
        let mut out = Laurent::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(s);
            if e != 0 {
                let lowered = m.mul(&Monomial::from_pairs([(sym(s), -1)]));
                out.add_term(lowered, c * Rational::from_integer(BigInt::from(e)));
            }
        }
        out
    }

    /// Largest monomial dividing every term (componentwise minimum exponents).
    pub fn monomial_content(&self) -> Monomial {
        let mut iter = self.terms.keys();
        let Some(first) = iter.next() else {
            return Monomial::one();
        };
        iter.fold(first.clone(), |acc, m| acc.gcd(m))
    }

    /// Expansion `Σ_i c_i · s^i` with coefficients free of `s`.
    pub fn coefficients_in(&self, s: &str) -> BTreeMap<i64, Laurent> {
        let mut out: BTreeMap<i64, Laurent> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.exponent(s)).or_default().add_term(m.without(s), c.clone());
        }
        out
    }

    pub fn coefficient_in(&self, s: &str, degree: i64) -> Laurent {
        let mut out = Laurent::zero();
        for (m, c) in &self.terms {
            if m.exponent(s) == degree {
                out.add_term(m.without(s), c.clone());
            }
        }
        out
    }

    pub fn sum_of_coefficients(&self) -> Rational {
        self.terms.values().fold(Rational::zero(), |acc, c| acc + c)
    }

    /// Makes the lex-leading coefficient 1. Zero stays zero.
    pub fn monic(&self) -> Laurent {
        match self.leading() {
            Some((_, c)) if !c.is_one() => self.scale(&c.recip()),
            _ => self.clone(),
        }
    }

    /// Exact quotient `self / divisor` by lex division, or `None` when the
    /// remainder is nonzero. Both operands must be polynomials; the
    /// quotient is then a polynomial as well.
    pub fn div_exact(&self, divisor: &Laurent) -> Option<Laurent> {
        let (lm, lc) = divisor.leading()?;
        if divisor.terms.len() == 1 {
            if !lm.divides_all(self) {
                return None;
            }
            let inv = lc.recip();
            return Some(Laurent {
                terms: self.terms.iter().map(|(m, c)| (m.div(lm), qmul(c, &inv))).collect(),
            });
        }
        let lc_inv = lc.recip();
        let mut rem = self.clone();
        let mut quot = Laurent::zero();
        while let Some((rm, rc)) = rem.leading() {
            if !lm.divides(rm) {
                return None;
            }
            let qm = rm.div(lm);
            let qc = qmul(rc, &lc_inv);
            let neg_qc = -qc.clone();
            for (m, c) in &divisor.terms {
                rem.add_term(m.mul(&qm), qmul(c, &neg_qc));
            }
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Evaluates at a point given as rationals; missing symbols are errors.
    pub fn evaluate(&self, point: &BTreeMap<Symbol, Rational>) -> Option<Rational> {
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (s, e) in m.iter() {
                let x = point.get(s)?;
                if x.is_zero() && *e < 0 {
                    return None;
                }
                v *= pow_rational(x, *e);
            }
            total += v;
        }
        Some(total)
    }

    /// Maximum absolute value of numerators and denominators, as a crude size measure.
    pub fn height(&self) -> BigInt {
        self.terms
            .values()
            .map(|c| c.numer().abs().max(c.denom().clone()))
            .max()
            .unwrap_or_else(BigInt::zero)
    }
}

impl Monomial {
    fn divides_all(&self, p: &Laurent) -> bool {
        p.terms.keys().all(|m| self.divides(m))
    }
}

/// Product with a shortcut for integers, which skips the gcd normalization.
pub(crate) fn qmul(a: &Rational, b: &Rational) -> Rational {
    if a.denom().is_one() && b.denom().is_one() {
        Rational::new_raw(a.numer() * b.numer(), BigInt::one())
    } else {
        a * b
    }
}

fn add_assign(a: &mut Rational, b: &Rational) {
    if a.denom().is_one() && b.denom().is_one() {
        *a = Rational::new_raw(a.numer() + b.numer(), BigInt::one());
    } else {
        *a += b;
    }
}

pub fn pow_rational(x: &Rational, e: i64) -> Rational {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

pub(crate) fn fmt_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if negative { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{}", fmt_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", m)?;
            } else {
                write!(f, "{}*{}", fmt_rational(&abs), m)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(n: &str) -> Laurent {
        Laurent::var(n)
    }

    #[test]
    fn lex_order_prefers_first_label() {
        let a = Monomial::from_pairs([(sym("a"), 1)]);
        let b3 = Monomial::from_pairs([(sym("b"), 3)]);
        assert!(a > b3);
        assert!(Monomial::one() < a);
        assert!(Monomial::from_pairs([(sym("a"), -1)]) < Monomial::one());
        let ab = Monomial::from_pairs([(sym("a"), 1), (sym("b"), 1)]);
        assert!(ab > a);
    }

    #[test]
    fn lex_order_is_multiplicative() {
        let ms = [
            Monomial::from_pairs([(sym("a"), 2)]),
            Monomial::from_pairs([(sym("a"), 1), (sym("c"), -2)]),
            Monomial::from_pairs([(sym("b"), 1)]),
            Monomial::from_pairs([(sym("b"), -1), (sym("c"), 4)]),
        ];
        let w = Monomial::from_pairs([(sym("a"), -3), (sym("b"), 2), (sym("c"), 1)]);
        for p in &ms {
            for q in &ms {
                assert_eq!(p.cmp(q), p.mul(&w).cmp(&q.mul(&w)));
            }
        }
    }

    #[test]
    fn exact_division() {
        let p = x("a").add(&Laurent::one());
        let q = x("b").sub(&x("a"));
        let prod = p.mul(&q).mul(&p);
        assert_eq!(prod.div_exact(&p).unwrap(), p.mul(&q));
        assert!(prod.div_exact(&x("a").add(&Laurent::from_int(2))).is_none());
        assert!(p.div_exact(&x("a")).is_none());
    }

    #[test]
    fn derivative_of_laurent_term() {
        let f = x("a").pow(2).mul(&x("b")).mul_monomial(&Monomial::from_pairs([(sym("a"), -3)]));
        // a^{-1} b
        assert_eq!(
            f.derivative("a"),
            Laurent::term(-Rational::one(), Monomial::from_pairs([(sym("a"), -2), (sym("b"), 1)]))
        );
    }

    #[test]
    fn display_is_canonical() {
        let f = x("x1").pow(2).sub(&Laurent::one()).add(&x("x2").scale(&Rational::new(3.into(), 2.into())));
        assert_eq!(f.to_string(), "x1^2 + 3/2*x2 - 1");
    }
}
