//! Quantum torus algebras of a seed and quantum mutation checks.
//!
//! `X^a` is the ordered product `X_1^{a_1} ... X_n^{a_n}`; with
//! `X_i X_j = q^{2ε̂_ij} X_j X_i` this gives
//! `X^a X^b = q^{2 Σ_{i>j} a_i ε̂_ij b_j} X^{a+b}`. Coefficients live in
//! `Z[q^{±1/d}]` with `d = 2 lcm(d_1..d_m)`; all `q`-exponents below are
//! integers in units of `1/d`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use thiserror::Error;

use crate::arith::{Laurent, Monomial, QScalar, RatFunc, Rational, Symbol};
use crate::seed::{Seed, SeedError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QTorusError {
    #[error("2 * d * eps_hat[{0}][{1}] is not an integer")]
    NonIntegralTwist(usize, usize),
    #[error("commutator is not divisible by q^(1/d) - 1")]
    NotDivisible,
    #[error("exponent vector has length {got}, expected {expected}")]
    Length { expected: usize, got: usize },
    #[error(transparent)]
    Seed(#[from] SeedError),
}

fn to_i64(r: &Rational) -> Option<i64> {
    if r.is_integer() {
        r.to_integer().to_i64()
    } else {
        None
    }
}

/// The quantum torus of a seed.
#[derive(Debug, Clone)]
pub struct QTorus {
    seed: Seed,
    d: i64,
    /// `2 d ε̂_ij`.
    twist: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QTElement {
    terms: BTreeMap<Vec<i64>, QScalar>,
}

impl QTorus {
    pub fn new(seed: &Seed) -> Result<Self, QTorusError> {
        let d = 2 * seed.exchange().multipliers().iter().fold(1i64, |l, &x| l.lcm(&x));
        let twist = twist_matrix(seed, d)?;
        Ok(QTorus { seed: seed.reset_variables(), d, twist })
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn seed(&self) -> &Seed {
        &self.seed
    }

    pub fn n(&self) -> usize {
        self.seed.n()
    }

    /// Exponent (units of `1/d`) in `X^a X^b = q^{..} X^{a+b}`.
    pub fn cocycle(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut s = 0;
        for i in 0..a.len() {
            if a[i] == 0 {
                continue;
            }
            for j in 0..i {
                s += a[i] * self.twist[i][j] * b[j];
            }
        }
        s
    }

    pub fn zero(&self) -> QTElement {
        QTElement { terms: BTreeMap::new() }
    }

    pub fn scalar(&self, c: QScalar) -> QTElement {
        self.term(vec![0; self.n()], c)
    }

    pub fn one(&self) -> QTElement {
        self.scalar(QScalar::one(self.d))
    }

    pub fn monomial(&self, a: Vec<i64>) -> QTElement {
        self.term(a, QScalar::one(self.d))
    }

    pub fn generator(&self, i: usize) -> QTElement {
        let mut a = vec![0; self.n()];
        a[i] = 1;
        self.monomial(a)
    }

    pub fn term(&self, a: Vec<i64>, c: QScalar) -> QTElement {
        assert_eq!(a.len(), self.n(), "exponent vector length");
        let mut t = BTreeMap::new();
        if !c.is_zero() {
            t.insert(a, c.lift(self.d));
        }
        QTElement { terms: t }
    }

    pub fn add(&self, x: &QTElement, y: &QTElement) -> QTElement {
        let mut terms = x.terms.clone();
        for (a, c) in &y.terms {
            add_into(&mut terms, a.clone(), c.clone());
        }
        QTElement { terms }
    }

    pub fn neg(&self, x: &QTElement) -> QTElement {
        QTElement { terms: x.terms.iter().map(|(a, c)| (a.clone(), c.neg())).collect() }
    }

    pub fn sub(&self, x: &QTElement, y: &QTElement) -> QTElement {
        self.add(x, &self.neg(y))
    }

    pub fn multiply(&self, x: &QTElement, y: &QTElement) -> QTElement {
        let mut terms = BTreeMap::new();
        for (a, ca) in &x.terms {
            for (b, cb) in &y.terms {
                let e = self.cocycle(a, b);
                let sum: Vec<i64> = a.iter().zip(b).map(|(u, v)| u + v).collect();
                add_into(&mut terms, sum, ca.mul(cb).shift(e));
            }
        }
        QTElement { terms }
    }

    pub fn commutator(&self, x: &QTElement, y: &QTElement) -> QTElement {
        self.sub(&self.multiply(x, y), &self.multiply(y, x))
    }

    /// `[x, y] / (q^{1/d} - 1)` at `q = 1`, divided by `d`.
    pub fn semiclassical_bracket(&self, x: &QTElement, y: &QTElement) -> Result<Laurent, QTorusError> {
        let c = self.commutator(x, y);
        let t_minus_1 = QScalar::from_terms(self.d, [(1, BigInt::one()), (0, -BigInt::one())]);
        let dd = Rational::from_integer(self.d.into());
        let mut out = Laurent::zero();
        for (a, coeff) in &c.terms {
            let quotient = coeff.q_divide(&t_minus_1).ok_or(QTorusError::NotDivisible)?;
            out.add_term(self.monomial_of(a), quotient.q_limit() / &dd);
        }
        Ok(out)
    }

    /// `x` at `q = 1` as a Laurent polynomial in the seed labels.
    pub fn classical(&self, x: &QTElement) -> Laurent {
        Laurent::from_terms(x.terms.iter().map(|(a, c)| (self.monomial_of(a), c.q_limit())))
    }

    fn monomial_of(&self, a: &[i64]) -> Monomial {
        Monomial::from_pairs(self.seed.labels().iter().cloned().zip(a.iter().copied()))
    }

    fn labels(&self) -> &[Symbol] {
        self.seed.labels()
    }
}

fn twist_matrix(seed: &Seed, d: i64) -> Result<Vec<Vec<i64>>, QTorusError> {
    let n = seed.n();
    let scale = Rational::from_integer((2 * d).into());
    let mut w = vec![vec![0; n]; n];
    for (i, row) in w.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            *slot = to_i64(&(seed.exchange().eps_hat(i, j) * &scale)).ok_or(QTorusError::NonIntegralTwist(i, j))?;
        }
    }
    Ok(w)
}

fn add_into(terms: &mut BTreeMap<Vec<i64>, QScalar>, a: Vec<i64>, c: QScalar) {
    if c.is_zero() {
        return;
    }
    match terms.get_mut(&a) {
        Some(v) => {
            *v = v.add(&c);
            if v.is_zero() {
                terms.remove(&a);
            }
        }
        None => {
            terms.insert(a, c);
        }
    }
}

impl QTElement {
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &QScalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Laurent polynomial in the single generator `X_k` with `q`-coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KPoly {
    d: i64,
    terms: BTreeMap<i64, QScalar>,
}

impl KPoly {
    fn one(d: i64) -> Self {
        KPoly { d, terms: BTreeMap::from([(0, QScalar::one(d))]) }
    }

    /// `1 + q^{c/d} X_k^e`.
    fn binomial(d: i64, c: i64, e: i64) -> Self {
        let mut p = Self::one(d);
        p.add_term(e, QScalar::q_pow(d, c));
        p
    }

    fn add_term(&mut self, e: i64, c: QScalar) {
        if c.is_zero() {
            return;
        }
        let v = self.terms.entry(e).or_insert_with(|| QScalar::zero(self.d));
        *v = v.add(&c);
        if v.is_zero() {
            self.terms.remove(&e);
        }
    }

    fn mul(&self, other: &KPoly) -> KPoly {
        let mut out = KPoly { d: self.d, terms: BTreeMap::new() };
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1 + e2, c1.mul(c2));
            }
        }
        out
    }

    fn scale(&self, c: &QScalar) -> KPoly {
        let mut out = KPoly { d: self.d, terms: BTreeMap::new() };
        for (e, v) in &self.terms {
            out.add_term(*e, v.mul(c));
        }
        out
    }

    /// `f(X_k) -> f(q^{c/d} X_k)`.
    fn shifted(&self, c: i64) -> KPoly {
        KPoly { d: self.d, terms: self.terms.iter().map(|(e, v)| (*e, v.shift(c * e))).collect() }
    }

    fn at_one(&self, xk: &RatFunc) -> RatFunc {
        let mut acc = RatFunc::zero();
        for (e, v) in &self.terms {
            acc = acc.add(&xk.pow(*e).expect("variable is nonzero").scale(&v.q_limit()));
        }
        acc
    }
}

/// `X^mono · num(X_k) · Π dens(X_k)^{-1}` with `mono_k = 0`; the
/// univariate factors commute with each other.
#[derive(Debug, Clone)]
pub struct ShiftFraction {
    k: usize,
    mono: Vec<i64>,
    num: KPoly,
    dens: Vec<KPoly>,
}

impl ShiftFraction {
    fn from_monomial(t: &QTorus, k: usize, a: Vec<i64>) -> ShiftFraction {
        let e = a[k];
        let mut rest = a;
        rest[k] = 0;
        let mut ek = vec![0; rest.len()];
        ek[k] = e;
        // X^a = q^{-c} X^{rest} X_k^e where X^{rest} X_k^e = q^c X^a
        let c = t.cocycle(&rest, &ek);
        let mut num = KPoly { d: t.d, terms: BTreeMap::new() };
        num.add_term(e, QScalar::q_pow(t.d, -c));
        ShiftFraction { k, mono: rest, num, dens: vec![] }
    }

    fn mul(&self, t: &QTorus, other: &ShiftFraction) -> ShiftFraction {
        let b = &other.mono;
        let c: i64 = (0..b.len()).map(|j| t.twist[self.k][j] * b[j]).sum();
        let pair = t.cocycle(&self.mono, b);
        let mono: Vec<i64> = self.mono.iter().zip(b).map(|(x, y)| x + y).collect();
        let num = self.num.shifted(c).mul(&other.num).scale(&QScalar::q_pow(t.d, pair));
        let mut dens: Vec<KPoly> = self.dens.iter().map(|p| p.shifted(c)).collect();
        dens.extend(other.dens.iter().cloned());
        ShiftFraction { k: self.k, mono, num, dens }
    }

    fn scale(&self, c: &QScalar) -> ShiftFraction {
        ShiftFraction { k: self.k, mono: self.mono.clone(), num: self.num.scale(c), dens: self.dens.clone() }
    }

    fn den_product(&self, d: i64) -> KPoly {
        self.dens.iter().fold(KPoly::one(d), |acc, p| acc.mul(p))
    }

    fn equals(&self, other: &ShiftFraction, d: i64) -> bool {
        self.mono == other.mono && self.num.mul(&other.den_product(d)) == other.num.mul(&self.den_product(d))
    }

    /// Value at `q = 1` as a rational function of the seed labels.
    pub fn classical(&self, labels: &[Symbol]) -> RatFunc {
        let mut x = RatFunc::one();
        for (l, &e) in labels.iter().zip(&self.mono) {
            if e != 0 {
                x = x.mul(&RatFunc::var(l).pow(e).expect("variable is nonzero"));
            }
        }
        let xk = RatFunc::var(&labels[self.k]);
        let mut out = x.mul(&self.num.at_one(&xk));
        for p in &self.dens {
            out = out.div(&p.at_one(&xk)).expect("denominator is 1 + monomial");
        }
        out
    }
}

/// Images of the generators under quantum mutation in direction `k`:
/// `X'_k = X_k^{-1}`; for `i != k`,
/// `X'_i = X_i Π_{a=1}^{ε_ik} (1 + q_k^{2a-1} X_k^{-1})^{-1}` when `ε_ik >= 0`
/// and `X'_i = X_i Π_{a=1}^{-ε_ik} (1 + q_k^{2a-1} X_k)` otherwise, `q_k = q^{1/d_k}`.
pub fn quantum_mutation_images(t: &QTorus, k: usize) -> Result<Vec<ShiftFraction>, QTorusError> {
    let ex = t.seed.exchange();
    ex.check_mutable(k)?;
    let n = t.n();
    let dk = ex.multipliers()[k];
    let step = t.d / dk;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut a = vec![0; n];
        if i == k {
            a[k] = -1;
            out.push(ShiftFraction::from_monomial(t, k, a));
            continue;
        }
        a[i] = 1;
        let mut f = ShiftFraction::from_monomial(t, k, a);
        let e = ex.eps(i, k);
        for s in 1..=e.abs() {
            let c = (2 * s - 1) * step;
            if e > 0 {
                f.dens.push(KPoly::binomial(t.d, c, -1));
            } else {
                f.num = f.num.mul(&KPoly::binomial(t.d, c, 1));
            }
        }
        out.push(f);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationCheck {
    pub i: usize,
    pub j: usize,
    /// `ε̂'_ij` of the mutated seed.
    pub eps_hat: Rational,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantumMutationReport {
    pub direction: usize,
    /// Per vertex: does the `q = 1` image equal the classical mutation?
    pub classical_limit: Vec<bool>,
    pub relations: Vec<RelationCheck>,
    pub counterexample: Option<(usize, usize)>,
}

impl QuantumMutationReport {
    pub fn passed(&self) -> bool {
        self.classical_limit.iter().all(|&b| b) && self.relations.iter().all(|r| r.holds)
    }
}

/// Checks that quantum mutation at `k` specializes to the classical one at
/// `q = 1` and that `X'_i X'_j = q^{2ε̂'_ij} X'_j X'_i` for all `i < j`.
pub fn quantum_mutate_check(t: &QTorus, k: usize) -> Result<QuantumMutationReport, QTorusError> {
    let images = quantum_mutation_images(t, k)?;
    let mutated = t.seed.mutate(k)?;
    let classical_limit: Vec<bool> =
        images.iter().enumerate().map(|(i, f)| &f.classical(t.labels()) == mutated.variable(i)).collect();
    let n = t.n();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
    let scale = Rational::from_integer((2 * t.d).into());
    let relations: Vec<Result<RelationCheck, QTorusError>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let e = mutated.exchange().eps_hat(i, j).clone();
            let c = to_i64(&(&e * &scale)).ok_or(QTorusError::NonIntegralTwist(i, j))?;
            let lhs = images[i].mul(t, &images[j]);
            let rhs = images[j].mul(t, &images[i]).scale(&QScalar::q_pow(t.d, c));
            Ok(RelationCheck { i, j, eps_hat: e, holds: lhs.equals(&rhs, t.d) })
        })
        .collect();
    let relations = relations.into_iter().collect::<Result<Vec<_>, _>>()?;
    let counterexample = classical_limit
        .iter()
        .position(|&b| !b)
        .map(|i| (i, i))
        .or_else(|| relations.iter().find(|r| !r.holds).map(|r| (r.i, r.j)));
    Ok(QuantumMutationReport { direction: k, classical_limit, relations, counterexample })
}
