//! Type A matrices: Borel pairs, Gauss decomposition, pinning characters,
//! outer monodromy, the braid action on `B+ x B-`, regularity and the
//! Manin triple pairing on `sl_n ⊕ sl_n`.
//!
//! Simple roots are 0-based: root `i` acts on rows and columns `i, i+1`.

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith::{int, RatFunc, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BorelError {
    #[error("matrix is not square or sizes differ")]
    Shape,
    #[error("division by zero")]
    DivisionByZero,
    #[error("matrix is singular")]
    Singular,
    #[error("determinant is not 1")]
    NotSpecial,
    #[error("trailing principal minor of size {0} vanishes; not in U+ H U-")]
    NotInBigCell(usize),
    #[error("simple root index {0} out of range")]
    RootIndex(usize),
    #[error("expected an upper triangular matrix")]
    NotUpper,
    #[error("expected a lower triangular matrix")]
    NotLower,
    #[error("trace is not zero")]
    NotTraceless,
    #[error("the image of sigma_{0} left B+ x B-")]
    LeftBorel(usize),
}

/// Exact field operations used by the matrix code.
pub trait Field: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(k: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn inv(&self) -> Result<Self, BorelError>;

    fn div(&self, o: &Self) -> Result<Self, BorelError> {
        Ok(self.mul(&o.inv()?))
    }

    fn is_one(&self) -> bool {
        self == &Self::one()
    }
}

impl Field for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(k: i64) -> Self {
        Rational::from_integer(k.into())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn inv(&self) -> Result<Self, BorelError> {
        if Zero::is_zero(self) {
            Err(BorelError::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }
}

impl Field for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn one() -> Self {
        RatFunc::one()
    }
    fn from_i64(k: i64) -> Self {
        RatFunc::from_int(k)
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        RatFunc::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        RatFunc::sub(self, o)
    }
    fn neg(&self) -> Self {
        RatFunc::neg(self)
    }
    fn mul(&self, o: &Self) -> Self {
        RatFunc::mul(self, o)
    }
    fn inv(&self) -> Result<Self, BorelError> {
        RatFunc::inv(self).map_err(|_| BorelError::DivisionByZero)
    }
}

/// Square matrix over an exact field.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<S> {
    n: usize,
    rows: Vec<Vec<S>>,
}

impl<S: Field> Matrix<S> {
    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self, BorelError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(BorelError::Shape);
        }
        Ok(Matrix { n, rows })
    }

    pub fn zero(n: usize) -> Self {
        Matrix { n, rows: vec![vec![S::zero(); n]; n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.rows[i][i] = S::one();
        }
        m
    }

    pub fn diagonal(d: Vec<S>) -> Self {
        let mut m = Self::zero(d.len());
        for (i, x) in d.into_iter().enumerate() {
            m.rows[i][i] = x;
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<S>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.rows[i][j] = v;
    }

    pub fn diag(&self) -> Vec<S> {
        (0..self.n).map(|i| self.rows[i][i].clone()).collect()
    }

    pub fn mul(&self, o: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.n, o.n, "matrix sizes differ");
        let n = self.n;
        let mut out = Self::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self.rows[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    if !o.rows[k][j].is_zero() {
                        out.rows[i][j] = out.rows[i][j].add(&a.mul(&o.rows[k][j]));
                    }
                }
            }
        }
        out
    }

    pub fn sub(&self, o: &Matrix<S>) -> Matrix<S> {
        let rows = self.rows.iter().zip(&o.rows).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()).collect();
        Matrix { n: self.n, rows }
    }

    pub fn scale(&self, c: &S) -> Matrix<S> {
        Matrix { n: self.n, rows: self.rows.iter().map(|r| r.iter().map(|x| x.mul(c)).collect()).collect() }
    }

    pub fn transpose(&self) -> Matrix<S> {
        let rows = (0..self.n).map(|j| (0..self.n).map(|i| self.rows[i][j].clone()).collect()).collect();
        Matrix { n: self.n, rows }
    }

    pub fn trace(&self) -> S {
        (0..self.n).fold(S::zero(), |acc, i| acc.add(&self.rows[i][i]))
    }

    pub fn is_upper(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.rows[i][j].is_zero()))
    }

    pub fn is_lower(&self) -> bool {
        self.transpose().is_upper()
    }

    pub fn is_diagonal(&self) -> bool {
        self.is_upper() && self.is_lower()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    /// Determinant by elimination with row swaps.
    pub fn det(&self) -> S {
        let mut a = self.rows.clone();
        let n = self.n;
        let mut det = S::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
                return S::zero();
            };
            if p != c {
                a.swap(p, c);
                det = det.neg();
            }
            let piv = a[c][c].clone();
            det = det.mul(&piv);
            let pinv = piv.inv().expect("pivot is nonzero");
            for r in (c + 1)..n {
                if a[r][c].is_zero() {
                    continue;
                }
                let f = a[r][c].mul(&pinv);
                for k in c..n {
                    let t = f.mul(&a[c][k]);
                    a[r][k] = a[r][k].sub(&t);
                }
            }
        }
        det
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<Matrix<S>, BorelError> {
        let n = self.n;
        let mut a = self.rows.clone();
        let mut b = Self::identity(n).rows;
        for c in 0..n {
            let p = (c..n).find(|&r| !a[r][c].is_zero()).ok_or(BorelError::Singular)?;
            a.swap(p, c);
            b.swap(p, c);
            let pinv = a[c][c].inv()?;
            for k in 0..n {
                a[c][k] = a[c][k].mul(&pinv);
                b[c][k] = b[c][k].mul(&pinv);
            }
            for r in 0..n {
                if r == c || a[r][c].is_zero() {
                    continue;
                }
                let f = a[r][c].clone();
                for k in 0..n {
                    let (ta, tb) = (f.mul(&a[c][k]), f.mul(&b[c][k]));
                    a[r][k] = a[r][k].sub(&ta);
                    b[r][k] = b[r][k].sub(&tb);
                }
            }
        }
        Ok(Matrix { n, rows: b })
    }

    /// Principal minor on the last `k` rows and columns.
    pub fn trailing_minor(&self, k: usize) -> S {
        let s = self.n - k;
        let rows = (s..self.n).map(|i| self.rows[i][s..].to_vec()).collect();
        Matrix { n: k, rows }.det()
    }

    /// Principal minor on the first `k` rows and columns.
    pub fn leading_minor(&self, k: usize) -> S {
        let rows = (0..k).map(|i| self.rows[i][..k].to_vec()).collect();
        Matrix { n: k, rows }.det()
    }

    fn reversed(&self) -> Matrix<S> {
        let n = self.n;
        let rows = (0..n).map(|i| (0..n).map(|j| self.rows[n - 1 - i][n - 1 - j].clone()).collect()).collect();
        Matrix { n, rows }
    }
}

impl<S: Field> fmt::Display for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> =
            self.rows.iter().map(|r| format!("[{}]", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))).collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupMode {
    /// Determinant exactly 1.
    Sl,
    /// Representatives whose last diagonal entry of the `H`-part is 1.
    Pgl,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupElem<S> {
    mode: GroupMode,
    matrix: Matrix<S>,
}

impl<S: Field> GroupElem<S> {
    pub fn new(mode: GroupMode, matrix: Matrix<S>) -> Result<Self, BorelError> {
        let det = matrix.det();
        match mode {
            GroupMode::Sl if !det.is_one() => Err(BorelError::NotSpecial),
            _ if det.is_zero() => Err(BorelError::Singular),
            _ => Ok(GroupElem { mode, matrix }),
        }
    }

    pub fn mode(&self) -> GroupMode {
        self.mode
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.matrix
    }

    pub fn n(&self) -> usize {
        self.matrix.n
    }

    pub fn mul(&self, o: &GroupElem<S>) -> GroupElem<S> {
        GroupElem { mode: self.mode, matrix: self.matrix.mul(&o.matrix) }
    }

    pub fn inverse(&self) -> GroupElem<S> {
        GroupElem { mode: self.mode, matrix: self.matrix.inverse().expect("group elements are invertible") }
    }

    /// Divides by the last diagonal entry (PGL only).
    fn normalized(self) -> Result<Self, BorelError> {
        match self.mode {
            GroupMode::Sl => Ok(self),
            GroupMode::Pgl => {
                let n = self.n();
                let c = self.matrix.rows[n - 1][n - 1].inv()?;
                Ok(GroupElem { mode: self.mode, matrix: self.matrix.scale(&c) })
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussParts<S> {
    pub upper: Matrix<S>,
    pub diagonal: Matrix<S>,
    pub lower: Matrix<S>,
}

/// `g = [g]_+ [g]_0 [g]_-` with unit upper, diagonal and unit lower factors.
/// Exists iff every trailing principal minor is nonzero.
pub fn gauss_decompose<S: Field>(g: &Matrix<S>) -> Result<GaussParts<S>, BorelError> {
    // reversing rows and columns turns U+ H U- into an ordinary L D U
    let a = g.reversed();
    let n = a.n;
    let mut l = Matrix::<S>::identity(n);
    let mut u = a.rows.clone();
    let mut d = vec![S::zero(); n];
    for c in 0..n {
        let piv = u[c][c].clone();
        if piv.is_zero() {
            return Err(BorelError::NotInBigCell(c + 1));
        }
        let pinv = piv.inv()?;
        for r in (c + 1)..n {
            if u[r][c].is_zero() {
                continue;
            }
            let f = u[r][c].mul(&pinv);
            for k in c..n {
                let t = f.mul(&u[c][k]);
                u[r][k] = u[r][k].sub(&t);
            }
            l.rows[r][c] = f;
        }
        for k in c..n {
            u[c][k] = u[c][k].mul(&pinv);
        }
        d[c] = piv;
    }
    Ok(GaussParts {
        upper: l.reversed(),
        diagonal: Matrix::diagonal(d).reversed(),
        lower: Matrix { n, rows: u }.reversed(),
    })
}

fn check_root(i: usize, n: usize) -> Result<(), BorelError> {
    if i + 1 >= n {
        Err(BorelError::RootIndex(i))
    } else {
        Ok(())
    }
}

/// Diagonal part of a triangular matrix.
pub fn pi_b<S: Field>(b: &Matrix<S>) -> Matrix<S> {
    Matrix::diagonal(b.diag())
}

/// Entry `(i, i+1)` of `[b1]_+` where `b1 = [b1]_+ [b1]_0`.
pub fn chi<S: Field>(i: usize, b1: &Matrix<S>) -> Result<S, BorelError> {
    check_root(i, b1.n)?;
    if !b1.is_upper() {
        return Err(BorelError::NotUpper);
    }
    b1.rows[i][i + 1].div(&b1.rows[i + 1][i + 1])
}

/// Entry `(i+1, i)` of `[b2]_-` where `b2 = [b2]_0 [b2]_-`.
pub fn chi_minus<S: Field>(i: usize, b2: &Matrix<S>) -> Result<S, BorelError> {
    check_root(i, b2.n)?;
    if !b2.is_lower() {
        return Err(BorelError::NotLower);
    }
    b2.rows[i + 1][i].div(&b2.rows[i + 1][i + 1])
}

/// Places a 2x2 block at rows and columns `i, i+1` of the `n x n` identity.
pub fn gamma_embed<S: Field>(i: usize, block: [[S; 2]; 2], n: usize) -> Result<Matrix<S>, BorelError> {
    check_root(i, n)?;
    let mut m = Matrix::identity(n);
    for (a, row) in block.into_iter().enumerate() {
        for (b, x) in row.into_iter().enumerate() {
            m.rows[i + a][i + b] = x;
        }
    }
    Ok(m)
}

/// `h_i / h_{i+1}`.
pub fn simple_root<S: Field>(i: usize, h: &Matrix<S>) -> Result<S, BorelError> {
    check_root(i, h.n)?;
    h.rows[i][i].div(&h.rows[i + 1][i + 1])
}

/// `(b1, b2)` with `b1` upper and `b2` lower triangular.
#[derive(Debug, Clone, PartialEq)]
pub struct BorelPair<S> {
    b1: GroupElem<S>,
    b2: GroupElem<S>,
}

impl<S: Field> BorelPair<S> {
    pub fn new(b1: GroupElem<S>, b2: GroupElem<S>) -> Result<Self, BorelError> {
        if b1.n() != b2.n() || b1.mode != b2.mode {
            return Err(BorelError::Shape);
        }
        if !b1.matrix.is_upper() {
            return Err(BorelError::NotUpper);
        }
        if !b2.matrix.is_lower() {
            return Err(BorelError::NotLower);
        }
        Ok(BorelPair { b1, b2 })
    }

    pub fn from_matrices(mode: GroupMode, b1: Matrix<S>, b2: Matrix<S>) -> Result<Self, BorelError> {
        Self::new(GroupElem::new(mode, b1)?.normalized()?, GroupElem::new(mode, b2)?.normalized()?)
    }

    pub fn b1(&self) -> &Matrix<S> {
        &self.b1.matrix
    }

    pub fn b2(&self) -> &Matrix<S> {
        &self.b2.matrix
    }

    pub fn mode(&self) -> GroupMode {
        self.b1.mode
    }

    pub fn n(&self) -> usize {
        self.b1.n()
    }
}

/// Outer monodromy: product of the diagonal parts.
pub fn tau<S: Field>(p: &BorelPair<S>) -> Vec<S> {
    p.b1().diag().iter().zip(p.b2().diag()).map(|(a, b)| a.mul(&b)).collect()
}

/// Equality of diagonal elements, projectively in PGL mode.
pub fn same_torus_element<S: Field>(mode: GroupMode, a: &[S], b: &[S]) -> bool {
    match mode {
        GroupMode::Sl => a == b,
        GroupMode::Pgl => {
            let n = a.len();
            (0..n).all(|i| a[i].mul(&b[n - 1]) == b[i].mul(&a[n - 1]))
        }
    }
}

pub fn in_dual_group<S: Field>(p: &BorelPair<S>) -> bool {
    same_torus_element(p.mode(), &tau(p), &vec![S::one(); p.n()])
}

/// `(b1, b2) -> (t1 b1 t2, t1 b2 t2)`.
pub fn braid_sigma<S: Field>(i: usize, p: &BorelPair<S>) -> Result<BorelPair<S>, BorelError> {
    let n = p.n();
    let c_plus = chi(i, p.b1())?;
    let c_minus = chi_minus(i, p.b2())?;
    let t1 = gamma_embed(i, [[S::zero(), S::one()], [S::from_i64(-1), c_plus]], n)?;
    let t2 = gamma_embed(i, [[S::zero(), S::from_i64(-1)], [S::one(), c_minus]], n)?;
    let b1 = t1.mul(p.b1()).mul(&t2);
    let b2 = t1.mul(p.b2()).mul(&t2);
    if !b1.is_upper() || !b2.is_lower() {
        return Err(BorelError::LeftBorel(i));
    }
    let mode = p.mode();
    let wrap = |m: Matrix<S>| GroupElem { mode, matrix: m }.normalized();
    BorelPair::new(wrap(b1)?, wrap(b2)?)
}

/// Applies `sigma_{word[0]}` first.
pub fn braid_word<S: Field>(word: &[usize], p: &BorelPair<S>) -> Result<BorelPair<S>, BorelError> {
    word.iter().try_fold(p.clone(), |acc, &i| braid_sigma(i, &acc))
}

/// Swap of diagonal entries `i, i+1`.
pub fn weyl_reflect<S: Field>(i: usize, h: &[S]) -> Vec<S> {
    let mut out = h.to_vec();
    out.swap(i, i + 1);
    out
}

/// True iff `u^{-1} (b1 b2^{-1}) u` is upper triangular.
pub fn flag_membership<S: Field>(p: &BorelPair<S>, u: &Matrix<S>) -> Result<bool, BorelError> {
    let mono = p.b1().mul(&p.b2().inverse()?);
    Ok(u.inverse()?.mul(&mono).mul(u).is_upper())
}

/// Rank of a rectangular matrix over the rationals.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut a = rows.to_vec();
    let cols = a.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !Zero::is_zero(&a[i][c])) else { continue };
        a.swap(p, r);
        let pinv = a[r][c].recip();
        for i in (r + 1)..a.len() {
            if Zero::is_zero(&a[i][c]) {
                continue;
            }
            let f = &a[i][c] * &pinv;
            for k in c..cols {
                let t = &f * &a[r][k];
                a[i][k] -= t;
            }
        }
        r += 1;
    }
    r
}

/// Dimension of `{X in sl_n : gX = Xg}`.
pub fn centralizer_dimension(g: &Matrix<Rational>) -> usize {
    let n = g.n;
    // unknown X_ab sits in column a*n + b
    let mut eqs = Vec::with_capacity(n * n + 1);
    for i in 0..n {
        for j in 0..n {
            let mut row = vec![int(0); n * n];
            for k in 0..n {
                row[k * n + j] += &g.rows[i][k];
                row[i * n + k] -= &g.rows[k][j];
            }
            eqs.push(row);
        }
    }
    let mut tr = vec![int(0); n * n];
    for i in 0..n {
        tr[i * n + i] = int(1);
    }
    eqs.push(tr);
    n * n - rank(&eqs)
}

/// Regular iff the centralizer in `sl_n` has dimension `n - 1`.
pub fn is_regular(g: &Matrix<Rational>) -> (bool, usize) {
    let dim = centralizer_dimension(g);
    (dim + 1 == g.n, dim)
}

/// Traceless rational matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct LieElem(Matrix<Rational>);

impl LieElem {
    pub fn new(m: Matrix<Rational>) -> Result<Self, BorelError> {
        if Zero::is_zero(&m.trace()) {
            Ok(LieElem(m))
        } else {
            Err(BorelError::NotTraceless)
        }
    }

    pub fn matrix(&self) -> &Matrix<Rational> {
        &self.0
    }

    /// Basis `E_ij (i != j)` then `E_kk - E_{k+1,k+1}`.
    pub fn basis(n: usize) -> Vec<LieElem> {
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    let mut m = Matrix::zero(n);
                    m.rows[i][j] = int(1);
                    out.push(LieElem(m));
                }
            }
        }
        for k in 0..n.saturating_sub(1) {
            let mut m = Matrix::zero(n);
            m.rows[k][k] = int(1);
            m.rows[k + 1][k + 1] = int(-1);
            out.push(LieElem(m));
        }
        out
    }
}

/// Trace form `tr(xy)`.
pub fn trace_form(x: &LieElem, y: &LieElem) -> Rational {
    x.0.mul(&y.0).trace()
}

/// `<(x, y), (x', y')> = B(x, x') - B(y, y')` on the double.
pub fn double_pairing(a: (&LieElem, &LieElem), b: (&LieElem, &LieElem)) -> Rational {
    trace_form(a.0, b.0) - trace_form(a.1, b.1)
}

/// Diagonal copy `x = y`.
pub fn in_p_plus(x: &LieElem, y: &LieElem) -> bool {
    x == y
}

/// `x` upper, `y` lower, and the diagonal of `x + y` vanishes.
pub fn in_p_minus(x: &LieElem, y: &LieElem) -> bool {
    x.0.is_upper() && y.0.is_lower() && x.0.diag().iter().zip(y.0.diag()).all(|(a, b)| Zero::is_zero(&(a + b)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ManinReport {
    pub pairing: Rational,
    pub both_in_p_plus: bool,
    pub both_in_p_minus: bool,
    /// False only when both pairs lie in the same subalgebra and pair nontrivially.
    pub isotropy_holds: bool,
}

pub fn manin_checks(x1: &LieElem, y1: &LieElem, x2: &LieElem, y2: &LieElem) -> Result<ManinReport, BorelError> {
    let n = x1.0.n;
    if [y1, x2, y2].iter().any(|e| e.0.n != n) {
        return Err(BorelError::Shape);
    }
    let pairing = double_pairing((x1, y1), (x2, y2));
    let both_in_p_plus = in_p_plus(x1, y1) && in_p_plus(x2, y2);
    let both_in_p_minus = in_p_minus(x1, y1) && in_p_minus(x2, y2);
    let isotropy_holds = !(both_in_p_plus || both_in_p_minus) || Zero::is_zero(&pairing);
    Ok(ManinReport { pairing, both_in_p_plus, both_in_p_minus, isotropy_holds })
}

/// Gram matrix of the double pairing on the basis `(b, 0), (0, b)` of
/// `sl_n ⊕ sl_n`.
pub fn double_gram(n: usize) -> Matrix<Rational> {
    let basis = LieElem::basis(n);
    let zero = LieElem(Matrix::zero(n));
    let pairs: Vec<(&LieElem, &LieElem)> =
        basis.iter().map(|b| (b, &zero)).chain(basis.iter().map(|b| (&zero, b))).collect();
    let rows = pairs.iter().map(|a| pairs.iter().map(|b| double_pairing(*a, *b)).collect()).collect();
    Matrix::from_rows(rows).expect("square by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use crate::expr::parse_ratfunc;

    fn q(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()).unwrap()
    }

    fn f(s: &str) -> RatFunc {
        parse_ratfunc(s, None).unwrap()
    }

    fn sym_matrix(rows: &[&[&str]]) -> Matrix<RatFunc> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|s| f(s)).collect()).collect()).unwrap()
    }

    #[test]
    fn gauss_examples() {
        let g = q(&[&[2, 1], &[1, 1]]);
        let parts = gauss_decompose(&g).unwrap();
        assert_eq!(parts.upper, q(&[&[1, 1], &[0, 1]]));
        assert_eq!(parts.diagonal, q(&[&[1, 0], &[0, 1]]));
        assert_eq!(parts.lower, q(&[&[1, 0], &[1, 1]]));
        assert!(gauss_decompose(&q(&[&[0, 1], &[-1, 0]])).is_err());
        assert!(gauss_decompose(&q(&[&[1, 1], &[1, 0]])).is_err());
        let id = gauss_decompose(&Matrix::<Rational>::identity(3)).unwrap();
        assert!(id.upper.is_identity() && id.diagonal.is_identity() && id.lower.is_identity());
    }

    #[test]
    fn pinning_examples() {
        let b1 = sym_matrix(&[&["a", "b"], &["0", "1/a"]]);
        assert_eq!(chi(0, &b1).unwrap(), f("a*b"));
        let y = q(&[&[1, 0, 0], &[5, 1, 0], &[0, 0, 1]]);
        assert_eq!(chi_minus(0, &y).unwrap(), int(5));
        assert_eq!(chi_minus(1, &y).unwrap(), int(0));
        let h = Matrix::diagonal(vec![int(2), rat(1, 2)]);
        assert_eq!(simple_root(0, &h).unwrap(), int(4));
        assert_eq!(chi(1, &b1), Err(BorelError::RootIndex(1)));
    }

    #[test]
    fn sl2_sigma_closed_form() {
        let b1 = sym_matrix(&[&["a", "b"], &["0", "1/a"]]);
        let b2 = sym_matrix(&[&["d", "0"], &["c", "1/d"]]);
        let p = BorelPair::from_matrices(GroupMode::Sl, b1, b2).unwrap();
        assert_eq!(tau(&p), vec![f("a*d"), f("1/(a*d)")]);
        let s = braid_sigma(0, &p).unwrap();
        assert_eq!(s.b1(), &sym_matrix(&[&["1/a", "c*d/a"], &["0", "a"]]));
        assert_eq!(s.b2(), &sym_matrix(&[&["1/d", "0"], &["a*b/d", "d"]]));
        assert_eq!(tau(&s), weyl_reflect(0, &tau(&p)));
    }

    #[test]
    fn regularity_examples() {
        assert_eq!(is_regular(&Matrix::identity(2)), (false, 3));
        assert_eq!(is_regular(&q(&[&[1, 1], &[0, 1]])), (true, 1));
        assert_eq!(is_regular(&Matrix::diagonal(vec![int(2), rat(1, 2)])), (true, 1));
    }

    #[test]
    fn gram_is_nonsingular() {
        assert!(!Zero::is_zero(&double_gram(2).det()));
    }

    #[test]
    fn flag_examples() {
        let b1 = q(&[&[1, 2], &[0, 1]]);
        let p = BorelPair::from_matrices(GroupMode::Sl, b1, Matrix::identity(2)).unwrap();
        assert!(flag_membership(&p, &Matrix::identity(2)).unwrap());
        let p = BorelPair::from_matrices(GroupMode::Sl, Matrix::identity(2), q(&[&[1, 0], &[3, 1]])).unwrap();
        assert!(!flag_membership(&p, &Matrix::identity(2)).unwrap());
    }

    fn pgl3_pair(u1: &[&[&str]], h: [&str; 3], u2: &[&[&str]]) -> BorelPair<RatFunc> {
        let h = Matrix::diagonal(h.iter().map(|s| f(s)).collect());
        let hinv = h.inverse().unwrap();
        BorelPair::from_matrices(GroupMode::Pgl, sym_matrix(u1).mul(&h), hinv.mul(&sym_matrix(u2))).unwrap()
    }

    fn dual_pgl3() -> BorelPair<RatFunc> {
        pgl3_pair(
            &[&["1", "e1", "e3"], &["0", "1", "e2"], &["0", "0", "1"]],
            ["k1*k2", "k2", "1"],
            &[&["1", "0", "0"], &["f1", "1", "0"], &["f3", "f2", "1"]],
        )
    }

    #[test]
    fn pgl3_dual_group_sigmas() {
        let p = dual_pgl3();
        assert!(in_dual_group(&p));
        let s1 = pgl3_pair(
            &[&["1", "f1/k1", "e2"], &["0", "1", "e1*e2 - e3"], &["0", "0", "1"]],
            ["k2", "k1*k2", "1"],
            &[&["1", "0", "0"], &["e1*k1", "1", "0"], &["f2", "f1*f2 - f3", "1"]],
        );
        assert_eq!(braid_sigma(0, &p).unwrap(), s1);
        let s2 = pgl3_pair(
            &[&["1", "e3", "e3*f2/k2 - e1"], &["0", "1", "f2/k2"], &["0", "0", "1"]],
            ["k1", "1/k2", "1"],
            &[&["1", "0", "0"], &["f3", "1", "0"], &["e2*k2*f3 - f1", "e2*k2", "1"]],
        );
        assert_eq!(braid_sigma(1, &p).unwrap(), s2);
        assert_eq!(braid_word(&[0, 1, 0], &p).unwrap(), braid_word(&[1, 0, 1], &p).unwrap());
        // b1 b2^{-1} = u1 h u2^{-1} h keeps the subdiagonal of u2^{-1}
        assert!(!flag_membership(&p, &Matrix::identity(3)).unwrap());
    }
}
