//! Seeds of a cluster Poisson variety and their mutations.
//!
//! Vertices `0..m` are mutable and `m..n` are frozen. Variables are kept as
//! rational functions of the initial chart, whose symbols are the labels.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::arith::{sym, ArithError, RatFunc, Rational, Symbol};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeedError {
    #[error("exchange matrix must be square, got a row of length {got} for n = {n}")]
    NotSquare { n: usize, got: usize },
    #[error("exchange matrix is not skew-symmetric at ({0}, {1})")]
    NotSkew(usize, usize),
    #[error("eps_hat[{i}][{k}] * d_{k} is not an integer")]
    NotIntegral { i: usize, k: usize },
    #[error("multipliers must be positive, got {0}")]
    BadMultiplier(i64),
    #[error("{m} mutable vertices exceed n = {n}")]
    TooManyMutable { m: usize, n: usize },
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("vertex {0} is out of range")]
    OutOfRange(usize),
    #[error("vertex {0} is frozen")]
    Frozen(usize),
    #[error("exchange exponent {0} does not fit a machine integer")]
    Overflow(BigInt),
    #[error("permutation is invalid or moves mutable vertices to frozen ones")]
    BadPermutation,
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Exchange data: `ε̂`, multipliers `d_1..d_m` and the mutable count.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExchangeMatrix {
    eps: Vec<Vec<Rational>>,
    multipliers: Vec<i64>,
}

impl ExchangeMatrix {
    pub fn new(eps: Vec<Vec<Rational>>, multipliers: Vec<i64>) -> Result<Self, SeedError> {
        let n = eps.len();
        if let Some(row) = eps.iter().find(|r| r.len() != n) {
            return Err(SeedError::NotSquare { n, got: row.len() });
        }
        if multipliers.len() > n {
            return Err(SeedError::TooManyMutable { m: multipliers.len(), n });
        }
        if let Some(&d) = multipliers.iter().find(|&&d| d <= 0) {
            return Err(SeedError::BadMultiplier(d));
        }
        for i in 0..n {
            for j in i..n {
                if eps[i][j] != -eps[j][i].clone() {
                    return Err(SeedError::NotSkew(i, j));
                }
            }
        }
        let me = ExchangeMatrix { eps, multipliers };
        for i in 0..n {
            for k in 0..me.m() {
                if !me.scaled(i, k).is_integer() {
                    return Err(SeedError::NotIntegral { i, k });
                }
                if me.scaled(i, k).to_integer().to_i64().is_none() {
                    return Err(SeedError::Overflow(me.scaled(i, k).to_integer()));
                }
            }
        }
        Ok(me)
    }

    pub fn from_ints(eps: &[Vec<i64>], multipliers: Vec<i64>) -> Result<Self, SeedError> {
        let eps = eps.iter().map(|r| r.iter().map(|&v| Rational::from_integer(v.into())).collect()).collect();
        Self::new(eps, multipliers)
    }

    pub fn n(&self) -> usize {
        self.eps.len()
    }

    pub fn m(&self) -> usize {
        self.multipliers.len()
    }

    pub fn multipliers(&self) -> &[i64] {
        &self.multipliers
    }

    pub fn eps_hat(&self, i: usize, j: usize) -> &Rational {
        &self.eps[i][j]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.eps
    }

    fn scaled(&self, i: usize, k: usize) -> Rational {
        &self.eps[i][k] * Rational::from_integer(self.multipliers[k].into())
    }

    /// `ε_ik = ε̂_ik · d_k` for a mutable `k`.
    pub fn eps(&self, i: usize, k: usize) -> i64 {
        self.scaled(i, k).to_integer().to_i64().expect("checked at construction")
    }

    pub fn check_mutable(&self, k: usize) -> Result<(), SeedError> {
        if k >= self.n() {
            Err(SeedError::OutOfRange(k))
        } else if k >= self.m() {
            Err(SeedError::Frozen(k))
        } else {
            Ok(())
        }
    }

    pub fn mutate(&self, k: usize) -> Result<ExchangeMatrix, SeedError> {
        self.check_mutable(k)?;
        let n = self.n();
        let dk = Rational::from_integer(self.multipliers[k].into());
        let two = Rational::from_integer(2.into());
        let mut eps = self.eps.clone();
        for i in 0..n {
            for j in 0..n {
                if i == k || j == k {
                    eps[i][j] = -self.eps[i][j].clone();
                    continue;
                }
                let a = &self.eps[i][k];
                let b = &self.eps[k][j];
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                let corr = a.abs() * b + a * b.abs();
                if !corr.is_zero() {
                    eps[i][j] = &self.eps[i][j] + &dk * corr / &two;
                }
            }
        }
        ExchangeMatrix::new(eps, self.multipliers.clone())
    }

    /// Vertex `i` of `self` becomes vertex `perm[i]` of the result.
    pub fn permuted(&self, perm: &[usize]) -> Result<ExchangeMatrix, SeedError> {
        let n = self.n();
        let m = self.m();
        let seen: BTreeSet<usize> = perm.iter().copied().collect();
        if perm.len() != n || seen.len() != n || seen.iter().any(|&p| p >= n) {
            return Err(SeedError::BadPermutation);
        }
        if (0..n).any(|i| (i < m) != (perm[i] < m)) {
            return Err(SeedError::BadPermutation);
        }
        let mut eps = vec![vec![Rational::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                eps[perm[i]][perm[j]] = self.eps[i][j].clone();
            }
        }
        let mut multipliers = vec![0; m];
        for i in 0..m {
            multipliers[perm[i]] = self.multipliers[i];
        }
        ExchangeMatrix::new(eps, multipliers)
    }
}

/// A seed: exchange data plus the current chart written in the initial one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Seed {
    exchange: ExchangeMatrix,
    labels: Vec<Symbol>,
    variables: Vec<RatFunc>,
}

impl Seed {
    /// Initial seed: each variable is its own label.
    pub fn new(exchange: ExchangeMatrix, labels: Vec<String>) -> Result<Self, SeedError> {
        if labels.len() != exchange.n() {
            return Err(SeedError::LabelCount { expected: exchange.n(), got: labels.len() });
        }
        let mut seen = BTreeSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(SeedError::DuplicateLabel(l.clone()));
            }
        }
        let variables = labels.iter().map(|l| RatFunc::var(l)).collect();
        Ok(Seed { exchange, labels: labels.iter().map(|l| sym(l)).collect(), variables })
    }

    /// Labels `x1..xn`.
    pub fn with_default_labels(exchange: ExchangeMatrix) -> Result<Self, SeedError> {
        let labels = (1..=exchange.n()).map(|i| format!("x{}", i)).collect();
        Self::new(exchange, labels)
    }

    pub fn exchange(&self) -> &ExchangeMatrix {
        &self.exchange
    }

    pub fn n(&self) -> usize {
        self.exchange.n()
    }

    pub fn m(&self) -> usize {
        self.exchange.m()
    }

    pub fn labels(&self) -> &[Symbol] {
        &self.labels
    }

    pub fn label_strings(&self) -> Vec<String> {
        self.labels.iter().map(|l| l.to_string()).collect()
    }

    pub fn frozen_labels(&self) -> &[Symbol] {
        &self.labels[self.m()..]
    }

    pub fn variables(&self) -> &[RatFunc] {
        &self.variables
    }

    pub fn variable(&self, i: usize) -> &RatFunc {
        &self.variables[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| &**l == label)
    }

    /// Same exchange data with variables reset to the identity chart.
    pub fn reset_variables(&self) -> Seed {
        Seed {
            exchange: self.exchange.clone(),
            labels: self.labels.clone(),
            variables: self.labels.iter().map(|l| RatFunc::var(l)).collect(),
        }
    }

    pub fn with_labels(&self, labels: Vec<String>) -> Result<Seed, SeedError> {
        Seed::new(self.exchange.clone(), labels)
    }

    pub fn mutate(&self, k: usize) -> Result<Seed, SeedError> {
        let exchange = self.exchange.mutate(k)?;
        let xk = &self.variables[k];
        let plus = RatFunc::one().add(xk);
        let plus_inv = RatFunc::one().add(&xk.inv()?);
        let mut variables = Vec::with_capacity(self.n());
        for i in 0..self.n() {
            if i == k {
                variables.push(xk.inv()?);
                continue;
            }
            let e = self.exchange.eps(i, k);
            let xi = &self.variables[i];
            let v = match e.signum() {
                0 => xi.clone(),
                1 => xi.mul(&plus_inv.pow(-e)?),
                _ => xi.mul(&plus.pow(-e)?),
            };
            variables.push(v);
        }
        Ok(Seed { exchange, labels: self.labels.clone(), variables })
    }

    /// Left-to-right composition of mutations (0-based indices).
    pub fn apply_sequence(&self, seq: &[usize]) -> Result<Seed, SeedError> {
        let mut s = self.clone();
        for &k in seq {
            s = s.mutate(k)?;
        }
        Ok(s)
    }

    /// Moves exchange data and variables of vertex `i` to position `perm[i]`;
    /// labels stay attached to positions.
    pub fn permuted(&self, perm: &[usize]) -> Result<Seed, SeedError> {
        let exchange = self.exchange.permuted(perm)?;
        let mut variables = self.variables.clone();
        for (i, &p) in perm.iter().enumerate() {
            variables[p] = self.variables[i].clone();
        }
        Ok(Seed { exchange, labels: self.labels.clone(), variables })
    }

    /// `{f, g} = Σ 2 ε̂_ij x_i x_j ∂_i f ∂_j g` in this seed's own chart symbols.
    pub fn poisson_bracket(&self, f: &RatFunc, g: &RatFunc) -> RatFunc {
        let n = self.n();
        let logd = |h: &RatFunc| -> Vec<RatFunc> {
            self.labels.iter().map(|l| h.derivative(l).mul(&RatFunc::var(l))).collect()
        };
        let df = logd(f);
        let dg = logd(g);
        let mut acc = RatFunc::zero();
        for i in 0..n {
            if df[i].is_zero() {
                continue;
            }
            let mut row = RatFunc::zero();
            for j in 0..n {
                let e = self.exchange.eps_hat(i, j);
                if e.is_zero() || dg[j].is_zero() {
                    continue;
                }
                row = row.add(&dg[j].scale(e));
            }
            acc = acc.add(&df[i].mul(&row));
        }
        acc.scale(&Rational::from_integer(2.into()))
    }
}

/// Permutation `p` (vertex `i` of `a` ↦ vertex `p[i]` of `b`) preserving the
/// mutable/frozen split and multipliers with `ε̂_a[i][j] = ε̂_b[p i][p j]`.
pub fn seed_isomorphic(a: &Seed, b: &Seed) -> Option<Vec<usize>> {
    find_isomorphism(a, b, false)
}

/// As [`seed_isomorphic`], additionally matching variable expressions.
pub fn chart_isomorphic(a: &Seed, b: &Seed) -> Option<Vec<usize>> {
    find_isomorphism(a, b, true)
}

fn find_isomorphism(a: &Seed, b: &Seed, with_variables: bool) -> Option<Vec<usize>> {
    let n = a.n();
    if n != b.n() || a.m() != b.m() {
        return None;
    }
    let ea = &a.exchange;
    let eb = &b.exchange;
    let m = a.m();
    // cheap per-vertex invariant: sorted row multiset
    let sig = |e: &ExchangeMatrix, i: usize| -> Vec<Rational> {
        let mut r = e.eps[i].clone();
        r.sort();
        r
    };
    let sa: Vec<_> = (0..n).map(|i| sig(ea, i)).collect();
    let sb: Vec<_> = (0..n).map(|i| sig(eb, i)).collect();
    let compatible = |i: usize, j: usize| -> bool {
        (i < m) == (j < m)
            && (i >= m || ea.multipliers[i] == eb.multipliers[j])
            && sa[i] == sb[j]
            && (!with_variables || a.variables[i] == b.variables[j])
    };
    let mut perm = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn extend(
        i: usize,
        n: usize,
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
        ea: &ExchangeMatrix,
        eb: &ExchangeMatrix,
        compatible: &dyn Fn(usize, usize) -> bool,
    ) -> bool {
        if i == n {
            return true;
        }
        for j in 0..n {
            if used[j] || !compatible(i, j) {
                continue;
            }
            if ea.eps[i][i] != eb.eps[j][j] {
                continue;
            }
            if (0..i).any(|p| ea.eps[i][p] != eb.eps[j][perm[p]]) {
                continue;
            }
            perm[i] = j;
            used[j] = true;
            if extend(i + 1, n, perm, used, ea, eb, compatible) {
                return true;
            }
            used[j] = false;
        }
        false
    }
    if extend(0, n, &mut perm, &mut used, ea, eb, &compatible) {
        Some(perm)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use crate::expr::parse_ratfunc;

    fn a2() -> Seed {
        Seed::with_default_labels(ExchangeMatrix::from_ints(&[vec![0, 1], vec![-1, 0]], vec![1, 1]).unwrap()).unwrap()
    }

    fn f(s: &str) -> RatFunc {
        parse_ratfunc(s, None).unwrap()
    }

    #[test]
    fn a2_mutation_example() {
        let s = a2().mutate(0).unwrap();
        assert_eq!(s.exchange().eps_hat(0, 1), &int(-1));
        assert_eq!(s.exchange().eps_hat(1, 0), &int(1));
        assert_eq!(s.variable(0), &f("x1^-1"));
        assert_eq!(s.variable(1), &f("x2*(1 + x1)"));
    }

    #[test]
    fn exponent_two_example() {
        // eps_21 = 2 with d = (1, 1)
        let e = ExchangeMatrix::from_ints(&[vec![0, -2], vec![2, 0]], vec![1, 1]).unwrap();
        let s = Seed::with_default_labels(e).unwrap().mutate(0).unwrap();
        assert_eq!(s.variable(1), &f("x2*(1 + x1^-1)^-2"));
    }

    #[test]
    fn bracket_examples() {
        let s = a2();
        assert_eq!(s.poisson_bracket(&f("x1"), &f("x2")), f("2*x1*x2"));
        assert!(s.poisson_bracket(&f("x1"), &f("x1")).is_zero());
        assert_eq!(s.poisson_bracket(&f("x1*x2"), &f("x1")), f("-2*x1^2*x2"));
    }

    #[test]
    fn involution_and_pentagon() {
        let s = a2();
        assert_eq!(s.apply_sequence(&[0, 0]).unwrap(), s);
        let p = s.apply_sequence(&[0, 1, 0, 1, 0]).unwrap().permuted(&[1, 0]).unwrap();
        assert_eq!(p, s);
    }

    #[test]
    fn isomorphism_search() {
        let s = a2();
        let relabeled = s.with_labels(vec!["y".into(), "z".into()]).unwrap();
        assert_eq!(seed_isomorphic(&s, &relabeled), Some(vec![0, 1]));
        let flipped = s.mutate(0).unwrap();
        assert_eq!(seed_isomorphic(&s, &flipped), Some(vec![1, 0]));
        let b = ExchangeMatrix::from_ints(&[vec![0, 2], vec![-2, 0]], vec![1, 1]).unwrap();
        assert!(seed_isomorphic(&s, &Seed::with_default_labels(b).unwrap()).is_none());
    }

    #[test]
    fn validation() {
        let bad = ExchangeMatrix::from_ints(&[vec![0, 1], vec![1, 0]], vec![1, 1]);
        assert_eq!(bad, Err(SeedError::NotSkew(0, 1)));
        let half = vec![vec![int(0), rat(1, 2)], vec![rat(-1, 2), int(0)]];
        assert!(matches!(ExchangeMatrix::new(half.clone(), vec![1, 1]), Err(SeedError::NotIntegral { .. })));
        assert!(ExchangeMatrix::new(half.clone(), vec![2, 2]).is_ok());
        // frozen-frozen half weights are allowed
        assert!(ExchangeMatrix::new(half, vec![]).is_ok());
        assert_eq!(a2().mutate(2), Err(SeedError::OutOfRange(2)));
        let frozen = ExchangeMatrix::from_ints(&[vec![0, 1], vec![-1, 0]], vec![1]).unwrap();
        assert_eq!(Seed::with_default_labels(frozen).unwrap().mutate(1), Err(SeedError::Frozen(1)));
        let dup = Seed::new(ExchangeMatrix::from_ints(&[vec![0]], vec![1]).unwrap(), vec!["a".into(); 1]);
        assert!(dup.is_ok());
        let e = ExchangeMatrix::from_ints(&[vec![0, 0], vec![0, 0]], vec![]).unwrap();
        assert_eq!(Seed::new(e, vec!["a".into(), "a".into()]), Err(SeedError::DuplicateLabel("a".into())));
    }
}
