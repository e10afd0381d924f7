//! Reproducible samplers for randomized checks. Everything is driven by a
//! `ChaCha8Rng` so a fixed seed gives byte-identical batches.

use num_integer::Integer;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::arith::{int, rat, Rational};
use crate::borel::{BorelPair, GroupMode, LieElem, Matrix};
use crate::seed::{ExchangeMatrix, Seed};

pub use rand::SeedableRng;
pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small nonzero rational `p/q` with `1 <= |p| <= 5`, `1 <= q <= 3`.
pub fn nonzero_rational(rng: &mut SampleRng) -> Rational {
    let p = rng.gen_range(1..=5) * if rng.gen_bool(0.5) { 1 } else { -1 };
    rat(p, rng.gen_range(1..=3))
}

/// Small rational, zero about a sixth of the time.
pub fn small_rational(rng: &mut SampleRng) -> Rational {
    if rng.gen_ratio(1, 6) {
        int(0)
    } else {
        nonzero_rational(rng)
    }
}

/// A seed with `1 <= n <= max_n`, `1 <= m <= n` and multipliers in
/// `1..=max_d`. Entries are `s / gcd(d_i, d_j)` with `|s| <= 2` (frozen
/// directions count as `d = 1`), and frozen pairs may carry halves.
pub fn random_seed(rng: &mut SampleRng, max_n: usize, max_d: i64) -> Seed {
    let n = rng.gen_range(1..=max_n);
    let m = rng.gen_range(1..=n);
    let d: Vec<i64> = (0..m).map(|_| rng.gen_range(1..=max_d)).collect();
    let dir = |i: usize| if i < m { d[i] } else { 1 };
    let mut eps = vec![vec![int(0); n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let s = rng.gen_range(-2..=2);
            let den = if i >= m && j >= m { 2 } else { dir(i).gcd(&dir(j)) };
            eps[i][j] = rat(s, den);
            eps[j][i] = -eps[i][j].clone();
        }
    }
    let ex = ExchangeMatrix::new(eps, d).expect("sampled entries are integral against the multipliers");
    Seed::with_default_labels(ex).expect("default labels are distinct")
}

/// Exponent vector with entries in `-2..=2`.
pub fn exponent_vector(rng: &mut SampleRng, n: usize) -> Vec<i64> {
    (0..n).map(|_| rng.gen_range(-2..=2)).collect()
}

fn triangular(rng: &mut SampleRng, diag: &[Rational], upper: bool) -> Matrix<Rational> {
    let n = diag.len();
    let mut m = Matrix::diagonal(diag.to_vec());
    for i in 0..n {
        for j in 0..n {
            if (upper && j > i) || (!upper && j < i) {
                m.set(i, j, small_rational(rng));
            }
        }
    }
    m
}

fn special_diagonal(rng: &mut SampleRng, n: usize) -> Vec<Rational> {
    let mut h: Vec<Rational> = (0..n - 1).map(|_| nonzero_rational(rng)).collect();
    let prod = h.iter().fold(int(1), |acc, x| acc * x);
    h.push(prod.recip());
    h
}

/// A Borel pair `(b1, b2)` with independent random diagonals. In `Sl` mode
/// both factors have determinant one.
pub fn random_pair(rng: &mut SampleRng, mode: GroupMode, n: usize) -> BorelPair<Rational> {
    let diag = |rng: &mut SampleRng| match mode {
        GroupMode::Sl => special_diagonal(rng, n),
        GroupMode::Pgl => (0..n).map(|_| nonzero_rational(rng)).collect(),
    };
    let h1 = diag(rng);
    let h2 = diag(rng);
    let b1 = triangular(rng, &h1, true);
    let b2 = triangular(rng, &h2, false);
    BorelPair::from_matrices(mode, b1, b2).expect("triangular with nonzero diagonal")
}

/// A pair with trivial outer monodromy: the diagonal of `b2` inverts that of `b1`.
pub fn random_dual_pair(rng: &mut SampleRng, mode: GroupMode, n: usize) -> BorelPair<Rational> {
    let h = match mode {
        GroupMode::Sl => special_diagonal(rng, n),
        GroupMode::Pgl => (0..n).map(|_| nonzero_rational(rng)).collect(),
    };
    let hinv: Vec<Rational> = h.iter().map(|x| x.recip()).collect();
    let b1 = triangular(rng, &h, true);
    let b2 = triangular(rng, &hinv, false);
    BorelPair::from_matrices(mode, b1, b2).expect("triangular with nonzero diagonal")
}

/// Random determinant-one matrix: a product of elementary transvections
/// with a special diagonal.
pub fn random_special(rng: &mut SampleRng, n: usize) -> Matrix<Rational> {
    let mut g = Matrix::diagonal(special_diagonal(rng, n));
    for _ in 0..(2 * n) {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let mut e = Matrix::identity(n);
        e.set(i, j, int(rng.gen_range(-3..=3)));
        g = if rng.gen_bool(0.5) { e.mul(&g) } else { g.mul(&e) };
    }
    g
}

fn random_invertible(rng: &mut SampleRng, n: usize) -> Matrix<Rational> {
    loop {
        let rows = (0..n).map(|_| (0..n).map(|_| int(rng.gen_range(-2..=2))).collect()).collect();
        let m = Matrix::from_rows(rows).expect("square");
        if m.inverse().is_ok() {
            return m;
        }
    }
}

/// A 4x4-style test matrix: half the time uniformly random entries,
/// otherwise `P J P^{-1}` for a Jordan form with repeated eigenvalues, so
/// both regular and non-regular elements appear.
pub fn random_conjugated(rng: &mut SampleRng, n: usize) -> Matrix<Rational> {
    if rng.gen_bool(0.5) {
        let rows = (0..n).map(|_| (0..n).map(|_| int(rng.gen_range(-3..=3))).collect()).collect();
        return Matrix::from_rows(rows).expect("square");
    }
    let pool: Vec<i64> = (0..rng.gen_range(1..=n)).map(|_| rng.gen_range(-2..=2)).collect();
    let mut j = Matrix::zero(n);
    for i in 0..n {
        j.set(i, i, int(pool[rng.gen_range(0..pool.len())]));
    }
    for i in 0..n - 1 {
        if j.get(i, i) == j.get(i + 1, i + 1) && rng.gen_bool(0.5) {
            j.set(i, i + 1, int(1));
        }
    }
    let p = random_invertible(rng, n);
    p.mul(&j).mul(&p.inverse().expect("invertible"))
}

/// A random traceless matrix.
pub fn random_traceless(rng: &mut SampleRng, n: usize) -> LieElem {
    let mut m = Matrix::zero(n);
    for i in 0..n {
        for j in 0..n {
            m.set(i, j, small_rational(rng));
        }
    }
    let tr = m.trace();
    let last = m.get(n - 1, n - 1) - tr;
    m.set(n - 1, n - 1, last);
    LieElem::new(m).expect("traceless by construction")
}

/// A random element `(x, y)` of the subalgebra of upper `x`, lower `y`
/// with opposite diagonals.
pub fn random_p_minus(rng: &mut SampleRng, n: usize) -> (LieElem, LieElem) {
    let h = random_traceless(rng, n).matrix().diag();
    let neg: Vec<Rational> = h.iter().map(|x| -x.clone()).collect();
    let mut x = Matrix::diagonal(h);
    let mut y = Matrix::diagonal(neg);
    for i in 0..n {
        for j in 0..n {
            if j > i {
                x.set(i, j, small_rational(rng));
            } else if j < i {
                y.set(i, j, small_rational(rng));
            }
        }
    }
    (LieElem::new(x).expect("traceless"), LieElem::new(y).expect("traceless"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::borel::in_dual_group;

    #[test]
    fn samplers_are_reproducible() {
        let batch = |seed| {
            let mut r = rng(seed);
            (0..5).map(|_| random_seed(&mut r, 6, 3)).collect::<Vec<_>>()
        };
        assert_eq!(batch(7), batch(7));
    }

    #[test]
    fn samplers_respect_constraints() {
        let mut r = rng(1);
        for _ in 0..50 {
            let s = random_seed(&mut r, 6, 3);
            assert!(s.n() <= 6 && s.exchange().multipliers().iter().all(|&d| (1..=3).contains(&d)));
            assert!(in_dual_group(&random_dual_pair(&mut r, GroupMode::Pgl, 3)));
            assert!(in_dual_group(&random_dual_pair(&mut r, GroupMode::Sl, 2)));
            assert_eq!(random_special(&mut r, 3).det(), int(1));
            assert!(random_traceless(&mut r, 3).matrix().trace() == int(0));
        }
    }
}
