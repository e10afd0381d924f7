//! `U_q(sl2)` in the PBW normal form `F^a K^b E^c` over `Z[q^{±1/2}]`,
//! the Casimir element, Chebyshev polynomials and the theta basis.
//!
//! Relations: `KE = q^2 EK`, `KF = q^-2 FK`, `EF - FE = (q - q^-1)(K^-1 - K)`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::arith::{Laurent, Monomial, QScalar, Rational};
use crate::expr::{Evaluate, ExprError};

/// Coefficient granularity: exponents are in units of `q^{1/2}`.
pub const D: i64 = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UqError {
    #[error("element has degree {degree} above the bound {bound}")]
    BoundTooSmall { degree: u32, bound: u32 },
    #[error("coefficient of {0} is not a Laurent polynomial in q")]
    NotMember(ThetaIndex),
    #[error("commutator is not divisible by q^(1/2) - 1")]
    NotDivisible,
}

fn q(k: i64) -> QScalar {
    QScalar::q_pow(D, k)
}

/// `Σ coeff · F^a K^b E^c`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct UqElement {
    terms: BTreeMap<(u32, i64, u32), QScalar>,
}

impl UqElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(a: u32, b: i64, c: u32, coeff: QScalar) -> Self {
        let mut x = Self::zero();
        x.add_term((a, b, c), coeff);
        x
    }

    pub fn scalar(c: QScalar) -> Self {
        Self::term(0, 0, 0, c)
    }

    pub fn one() -> Self {
        Self::scalar(QScalar::one(D))
    }

    pub fn e() -> Self {
        Self::term(0, 0, 1, QScalar::one(D))
    }

    pub fn f() -> Self {
        Self::term(1, 0, 0, QScalar::one(D))
    }

    pub fn k(power: i64) -> Self {
        Self::term(0, power, 0, QScalar::one(D))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, i64, u32), &QScalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, key: (u32, i64, u32)) -> QScalar {
        self.terms.get(&key).cloned().unwrap_or_else(|| QScalar::zero(D))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest `a + c` over the terms.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|(a, _, c)| a + c).max().unwrap_or(0)
    }

    fn add_term(&mut self, key: (u32, i64, u32), c: QScalar) {
        if c.is_zero() {
            return;
        }
        let c = c.lift(D);
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v = v.add(&c);
                if v.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn add(&self, o: &UqElement) -> UqElement {
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.add_term(*k, c.clone());
        }
        out
    }

    pub fn neg(&self) -> UqElement {
        UqElement { terms: self.terms.iter().map(|(k, c)| (*k, c.neg())).collect() }
    }

    pub fn sub(&self, o: &UqElement) -> UqElement {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &QScalar) -> UqElement {
        let mut out = Self::zero();
        for (k, c) in &self.terms {
            out.add_term(*k, c.mul(s));
        }
        out
    }

    /// `F · x`.
    fn left_f(&self) -> UqElement {
        UqElement { terms: self.terms.iter().map(|(&(a, b, c), v)| ((a + 1, b, c), v.clone())).collect() }
    }

    /// `K^e · x`, using `K^e F^a = q^{-2ea} F^a K^e`.
    fn left_k(&self, e: i64) -> UqElement {
        UqElement {
            terms: self.terms.iter().map(|(&(a, b, c), v)| ((a, b + e, c), v.shift(-4 * e * a as i64))).collect(),
        }
    }

    /// `E · x`, using `E F^a = F^a E + (q - q^-1) Σ_j F^{a-1} (q^{2j} K^-1 - q^{-2j} K)`
    /// for `j = 0..a` and `E K^b = q^{-2b} K^b E`.
    fn left_e(&self) -> UqElement {
        let mut out = Self::zero();
        let q_minus = q(2).sub(&q(-2));
        for (&(a, b, c), v) in &self.terms {
            out.add_term((a, b, c + 1), v.shift(-4 * b));
            if a == 0 {
                continue;
            }
            for j in 0..a as i64 {
                let base = v.mul(&q_minus);
                out.add_term((a - 1, b - 1, c), base.shift(4 * j));
                out.add_term((a - 1, b + 1, c), base.shift(-4 * j).neg());
            }
        }
        out
    }

    pub fn multiply(&self, o: &UqElement) -> UqElement {
        let mut out = Self::zero();
        for (&(a, b, c), v) in &self.terms {
            let mut y = o.scale(v);
            for _ in 0..c {
                y = y.left_e();
            }
            y = y.left_k(b);
            for _ in 0..a {
                y = y.left_f();
            }
            out = out.add(&y);
        }
        out
    }

    pub fn pow(&self, e: u32) -> UqElement {
        (0..e).fold(Self::one(), |acc, _| acc.multiply(self))
    }

    pub fn commutator(&self, o: &UqElement) -> UqElement {
        self.multiply(o).sub(&o.multiply(self))
    }

    /// Inverse of a single term `c q^k K^b` with `c = ±1`.
    fn unit_inverse(&self) -> Option<UqElement> {
        let mut it = self.terms.iter();
        let (&(a, b, c), v) = it.next()?;
        if it.next().is_some() || a != 0 || c != 0 {
            return None;
        }
        let (k, coeff) = v.as_monomial()?;
        if coeff.abs() != BigInt::one() {
            return None;
        }
        // (q^k K^b)^{-1} = q^{-k} K^{-b}
        Some(Self::term(0, -b, 0, QScalar::monomial(v.d(), -k, coeff.clone())))
    }
}

pub fn uq_multiply(a: &UqElement, b: &UqElement) -> UqElement {
    a.multiply(b)
}

impl fmt::Display for UqElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&(a, b, c), v)| {
                let mut gens = Vec::new();
                match a {
                    0 => {}
                    1 => gens.push("F".to_string()),
                    _ => gens.push(format!("F^{}", a)),
                }
                match b {
                    0 => {}
                    1 => gens.push("K".to_string()),
                    _ => gens.push(format!("K^{}", b)),
                }
                match c {
                    0 => {}
                    1 => gens.push("E".to_string()),
                    _ => gens.push(format!("E^{}", c)),
                }
                if gens.is_empty() {
                    format!("({})", v)
                } else {
                    format!("({})*{}", v, gens.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for UqElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// `C = EF - q K^-1 - q^-1 K`.
pub fn casimir() -> UqElement {
    UqElement::e()
        .multiply(&UqElement::f())
        .sub(&UqElement::term(0, -1, 0, q(2)))
        .sub(&UqElement::term(0, 1, 0, q(-2)))
}

/// Coefficients (constant term first) of `T_n` with `T_0 = 1` and
/// `T_n(t + t^-1) = t^n + t^-n` for `n > 0`.
pub fn chebyshev(n: u32) -> Vec<BigInt> {
    if n == 0 {
        return vec![BigInt::one()];
    }
    // S_0 = 2, S_1 = x, S_{k+1} = x S_k - S_{k-1}; T_n = S_n for n > 0
    let mut prev = vec![BigInt::from(2)];
    let mut cur = vec![BigInt::zero(), BigInt::one()];
    for _ in 1..n {
        let mut next = vec![BigInt::zero(); cur.len() + 1];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += c;
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] -= c;
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// `T_n(C)`.
pub fn chebyshev_of_casimir(n: u32) -> UqElement {
    let c = casimir();
    let mut acc = UqElement::zero();
    let mut power = UqElement::one();
    for coeff in chebyshev(n) {
        if !coeff.is_zero() {
            acc = acc.add(&power.scale(&QScalar::monomial(D, 0, coeff)));
        }
        power = power.multiply(&c);
    }
    acc
}

/// Index of a theta basis element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ThetaIndex {
    /// `q^{lm} E^l K^m T_n(C)` with `l, n >= 0`.
    ESide { l: u32, m: i64, n: u32 },
    /// `q^{ml} K^l F^m T_n(C)` with `m > 0, n >= 0`.
    FSide { l: i64, m: u32, n: u32 },
}

impl ThetaIndex {
    pub fn is_valid(&self) -> bool {
        !matches!(self, ThetaIndex::FSide { m: 0, .. })
    }

    /// PBW monomial carrying the leading term.
    pub fn leading_key(&self) -> (u32, i64, u32) {
        match *self {
            ThetaIndex::ESide { l, m, n } => (n, m, n + l),
            ThetaIndex::FSide { l, m, n } => (m + n, l, n),
        }
    }

    pub fn from_leading_key((a, b, c): (u32, i64, u32)) -> ThetaIndex {
        if c >= a {
            ThetaIndex::ESide { l: c - a, m: b, n: a }
        } else {
            ThetaIndex::FSide { l: b, m: a - c, n: c }
        }
    }

    /// `l + |m| + n` in either family.
    pub fn size(&self) -> u64 {
        match *self {
            ThetaIndex::ESide { l, m, n } => l as u64 + m.unsigned_abs() + n as u64,
            ThetaIndex::FSide { l, m, n } => l.unsigned_abs() + m as u64 + n as u64,
        }
    }

    /// All indices with `size() <= s`, sorted.
    pub fn all_up_to(s: u32) -> Vec<ThetaIndex> {
        let s64 = s as i64;
        let mut out = Vec::new();
        for l in 0..=s {
            for n in 0..=(s - l) {
                let rest = s64 - (l + n) as i64;
                for m in -rest..=rest {
                    out.push(ThetaIndex::ESide { l, m, n });
                }
            }
        }
        for m in 1..=s {
            for n in 0..=(s - m) {
                let rest = s64 - (m + n) as i64;
                for l in -rest..=rest {
                    out.push(ThetaIndex::FSide { l, m, n });
                }
            }
        }
        out.sort();
        out
    }
}

impl fmt::Display for ThetaIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThetaIndex::ESide { l, m, n } => write!(f, "E({},{},{})", l, m, n),
            ThetaIndex::FSide { l, m, n } => write!(f, "F({},{},{})", l, m, n),
        }
    }
}

pub fn theta_element(i: ThetaIndex) -> UqElement {
    assert!(i.is_valid(), "F-side theta index needs m > 0");
    let t = chebyshev_of_casimir(match i {
        ThetaIndex::ESide { n, .. } | ThetaIndex::FSide { n, .. } => n,
    });
    let head = match i {
        ThetaIndex::ESide { l, m, .. } => {
            UqElement::e().pow(l).multiply(&UqElement::k(m)).scale(&q(2 * l as i64 * m))
        }
        ThetaIndex::FSide { l, m, .. } => {
            UqElement::k(l).multiply(&UqElement::f().pow(m)).scale(&q(2 * m as i64 * l))
        }
    };
    head.multiply(&t)
}

/// Coefficients of `x` in the theta basis. Terms are eliminated from the
/// top `a + c` degree down; each theta element is a unit multiple of its
/// leading PBW monomial plus terms of lower degree.
pub fn expand_in_theta(x: &UqElement, bound: u32) -> Result<BTreeMap<ThetaIndex, QScalar>, UqError> {
    let degree = x.degree();
    if degree > bound {
        return Err(UqError::BoundTooSmall { degree, bound });
    }
    let mut rest = x.clone();
    let mut out = BTreeMap::new();
    while let Some((&key, coeff)) = rest.terms.iter().max_by_key(|(&(a, b, c), _)| (a + c, a, b)) {
        let idx = ThetaIndex::from_leading_key(key);
        let theta = theta_element(idx);
        let lead = theta.coeff(key);
        let c = coeff.q_divide(&lead).ok_or(UqError::NotMember(idx))?;
        rest = rest.sub(&theta.scale(&c));
        out.insert(idx, c);
    }
    Ok(out)
}

/// Checks every coefficient lies in `N[q, q^-1]` (integral powers of `q`).
pub fn is_positive_integral(c: &QScalar) -> bool {
    let c = c.lift(D);
    c.has_nonnegative_coefficients() && c.terms().all(|(k, _)| k % 2 == 0)
}

#[derive(Debug, Clone)]
pub struct PositivityScan {
    pub products: usize,
    /// `(left, right, index, coefficient)` for every coefficient outside `N[q, q^-1]`.
    pub violations: Vec<(ThetaIndex, ThetaIndex, ThetaIndex, QScalar)>,
}

/// Expands `θ_i θ_j` for all indices of size at most `s`.
pub fn positivity_scan(s: u32) -> Result<PositivityScan, UqError> {
    let idx = ThetaIndex::all_up_to(s);
    let elems: Vec<UqElement> = idx.par_iter().map(|&i| theta_element(i)).collect();
    let pairs: Vec<(usize, usize)> = (0..idx.len()).flat_map(|i| (0..idx.len()).map(move |j| (i, j))).collect();
    let results: Vec<Result<Vec<_>, UqError>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let p = elems[i].multiply(&elems[j]);
            let exp = expand_in_theta(&p, p.degree())?;
            Ok(exp.into_iter().filter(|(_, c)| !is_positive_integral(c)).map(|(k, c)| (idx[i], idx[j], k, c)).collect())
        })
        .collect();
    let mut violations = Vec::new();
    for r in results {
        violations.extend(r?);
    }
    Ok(PositivityScan { products: pairs.len(), violations })
}

/// `q^{1/2} -> 1` termwise, as a Laurent polynomial in `e, f, k`.
pub fn semiclassical_sl2(x: &UqElement) -> Laurent {
    Laurent::from_terms(x.terms.iter().map(|(&key, v)| (sl2_monomial(key), v.q_limit())))
}

fn sl2_monomial((a, b, c): (u32, i64, u32)) -> Monomial {
    Monomial::from_pairs([("f", a as i64), ("k", b), ("e", c as i64)].map(|(s, e)| (crate::arith::sym(s), e)))
}

/// `[x, y] / (2 (q^{1/2} - 1))` at `q = 1`.
pub fn sl2_bracket(x: &UqElement, y: &UqElement) -> Result<Laurent, UqError> {
    let comm = x.commutator(y);
    let t_minus_1 = QScalar::from_terms(D, [(1, BigInt::one()), (0, -BigInt::one())]);
    let two = Rational::from_integer(2.into());
    let mut out = Laurent::zero();
    for (&key, v) in &comm.terms {
        let quotient = v.q_divide(&t_minus_1).ok_or(UqError::NotDivisible)?;
        out.add_term(sl2_monomial(key), quotient.q_limit() / &two);
    }
    Ok(out)
}

fn rational_exponent_units(e: &Rational) -> Option<i64> {
    let scaled = e * Rational::from_integer(D.into());
    if scaled.is_integer() {
        scaled.to_integer().to_i64()
    } else {
        None
    }
}

/// Expressions over `E`, `F`, `K` and `q` (with half-integer powers of `q`).
impl Evaluate for UqElement {
    fn constant(c: &Rational) -> Result<Self, ExprError> {
        if !c.is_integer() {
            return Err(ExprError::BadExponent(format!("non-integral constant {}", c)));
        }
        Ok(UqElement::scalar(QScalar::monomial(D, 0, c.to_integer())))
    }

    fn symbol(name: &str) -> Result<Self, ExprError> {
        match name {
            "E" => Ok(UqElement::e()),
            "F" => Ok(UqElement::f()),
            "K" => Ok(UqElement::k(1)),
            "q" => Ok(UqElement::scalar(q(2))),
            _ => Err(ExprError::UnknownSymbol(name.to_string())),
        }
    }

    fn add(&self, other: &Self) -> Self {
        UqElement::add(self, other)
    }

    fn neg(&self) -> Self {
        UqElement::neg(self)
    }

    fn mul(&self, other: &Self) -> Self {
        self.multiply(other)
    }

    fn div(&self, other: &Self) -> Result<Self, ExprError> {
        let inv = other.unit_inverse().ok_or_else(|| ExprError::BadExponent("division by a non-unit".into()))?;
        Ok(self.multiply(&inv))
    }

    fn pow(&self, e: &Rational) -> Result<Self, ExprError> {
        if !e.is_integer() {
            // only a pure power of q may take a fractional exponent
            let mut it = self.terms.iter();
            let (Some((&(0, 0, 0), v)), None) = (it.next(), it.next()) else {
                return Err(ExprError::BadExponent(e.to_string()));
            };
            let (k, c) = v.as_monomial().ok_or_else(|| ExprError::BadExponent(e.to_string()))?;
            if !c.is_one() {
                return Err(ExprError::BadExponent(e.to_string()));
            }
            let total = Rational::from_integer(k.into()) / Rational::from_integer(v.d().into()) * e;
            let units = rational_exponent_units(&total).ok_or_else(|| ExprError::BadExponent(e.to_string()))?;
            return Ok(UqElement::scalar(q(units)));
        }
        let k = e.to_integer().to_i64().ok_or_else(|| ExprError::BadExponent(e.to_string()))?;
        if k >= 0 {
            Ok(UqElement::pow(self, k as u32))
        } else {
            let inv = self.unit_inverse().ok_or_else(|| ExprError::BadExponent(e.to_string()))?;
            Ok(UqElement::pow(&inv, k.unsigned_abs() as u32))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn coeffs(pairs: &[(i64, i64)]) -> QScalar {
        QScalar::from_terms(D, pairs.iter().map(|&(k, c)| (k, BigInt::from(c))))
    }

    #[test]
    fn defining_relations() {
        let (e, f, k) = (UqElement::e(), UqElement::f(), UqElement::k(1));
        assert_eq!(e.multiply(&k), UqElement::term(0, 1, 1, q(-4)));
        assert_eq!(k.multiply(&e), UqElement::term(0, 1, 1, QScalar::one(D)));
        assert_eq!(f.multiply(&e), UqElement::term(1, 0, 1, QScalar::one(D)));
        let ef = UqElement::term(1, 0, 1, QScalar::one(D))
            .add(&UqElement::term(0, -1, 0, q(2).sub(&q(-2))))
            .sub(&UqElement::term(0, 1, 0, q(2).sub(&q(-2))));
        assert_eq!(e.multiply(&f), ef);
        assert_eq!(k.multiply(&UqElement::k(-1)), UqElement::one());
    }

    #[test]
    fn casimir_is_central_and_has_both_forms() {
        let c = casimir();
        for g in [UqElement::e(), UqElement::f(), UqElement::k(1)] {
            assert!(c.commutator(&g).is_zero());
        }
        let other = UqElement::f()
            .multiply(&UqElement::e())
            .sub(&UqElement::term(0, -1, 0, q(-2)))
            .sub(&UqElement::term(0, 1, 0, q(2)));
        assert_eq!(c, other);
    }

    #[test]
    fn chebyshev_values() {
        assert_eq!(chebyshev(0), vec![BigInt::one()]);
        assert_eq!(chebyshev(2), vec![BigInt::from(-2), BigInt::zero(), BigInt::one()]);
        assert_eq!(chebyshev(3), vec![BigInt::zero(), BigInt::from(-3), BigInt::zero(), BigInt::one()]);
    }

    #[test]
    fn ef_expansion() {
        let exp = expand_in_theta(&UqElement::e().multiply(&UqElement::f()), 2).unwrap();
        let expected = BTreeMap::from([
            (ThetaIndex::ESide { l: 0, m: 0, n: 1 }, QScalar::one(D)),
            (ThetaIndex::ESide { l: 0, m: -1, n: 0 }, q(2)),
            (ThetaIndex::ESide { l: 0, m: 1, n: 0 }, q(-2)),
        ]);
        assert_eq!(exp, expected);
        assert!(expand_in_theta(&UqElement::e(), 0).is_err());
    }

    #[test]
    fn theta_round_trip() {
        for i in ThetaIndex::all_up_to(2) {
            let exp = expand_in_theta(&theta_element(i), 10).unwrap();
            assert_eq!(exp, BTreeMap::from([(i, QScalar::one(D))]), "{}", i);
        }
        assert_eq!(ThetaIndex::all_up_to(4).len(), 85);
    }

    #[test]
    fn brackets() {
        let (e, f, k) = (UqElement::e(), UqElement::f(), UqElement::k(1));
        let lv = |s: &str| Laurent::var(s);
        assert_eq!(sl2_bracket(&k, &e).unwrap(), lv("e").mul(&lv("k")).scale(&Rational::from_integer(2.into())));
        assert_eq!(sl2_bracket(&k, &f).unwrap(), lv("f").mul(&lv("k")).scale(&Rational::from_integer((-2).into())));
        let kinv = Laurent::from_terms([(Monomial::from_pairs([(crate::arith::sym("k"), -1)]), Rational::one())]);
        let two = Rational::from_integer(2.into());
        assert_eq!(sl2_bracket(&e, &f).unwrap(), kinv.sub(&lv("k")).scale(&two));
        assert!(sl2_bracket(&e, &e).unwrap().is_zero());
    }

    #[test]
    fn expressions() {
        let x: UqElement = parse("E*F*K^-1").unwrap().eval().unwrap();
        assert_eq!(x, UqElement::e().multiply(&UqElement::f()).multiply(&UqElement::k(-1)));
        let y: UqElement = parse("q^(1/2)*E - 3").unwrap().eval().unwrap();
        assert_eq!(y, UqElement::term(0, 0, 1, q(1)).add(&UqElement::scalar(coeffs(&[(0, -3)]))));
        assert!(parse("E/F").unwrap().eval::<UqElement>().is_err());
    }
}
