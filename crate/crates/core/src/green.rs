//! c-vectors, green/red vertices and maximal green sequences.
//!
//! A seed is framed by one extra frozen vertex `j'` per mutable `j` with
//! `ε̂_{j'j} = 1/d_j`, so the frame rows of the integer exchange matrix start
//! as the identity. The c-vector of `j` is column `j` of the frame rows.
//!
//! Verification mutates the framed `ε̂` directly. The breadth-first search
//! runs on the integer matrix `ε_ij = ε̂_ij d_j` (rows: all vertices, columns:
//! mutable ones) with checked `i64` arithmetic; tests compare both engines.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::arith::Rational;
use crate::seed::{ExchangeMatrix, Seed, SeedError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GreenError {
    #[error("c-vector of vertex {vertex} has mixed signs: {c:?}")]
    SignCoherence { vertex: usize, c: Vec<i64> },
    #[error("integer overflow while mutating")]
    Overflow,
    #[error(transparent)]
    Seed(#[from] SeedError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Color {
    Green,
    Red,
}

fn color_of(vertex: usize, c: &[i64]) -> Result<Color, GreenError> {
    let pos = c.iter().any(|&v| v > 0);
    let neg = c.iter().any(|&v| v < 0);
    match (pos, neg) {
        (true, false) => Ok(Color::Green),
        (false, true) => Ok(Color::Red),
        _ => Err(GreenError::SignCoherence { vertex, c: c.to_vec() }),
    }
}

/// A seed with its frame; vertex order is base mutable, base frozen, frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FramedSeed {
    exchange: ExchangeMatrix,
    base_n: usize,
}

impl FramedSeed {
    pub fn new(base: &ExchangeMatrix) -> Result<Self, SeedError> {
        let n = base.n();
        let m = base.m();
        let mut eps = vec![vec![Rational::zero(); n + m]; n + m];
        for (i, row) in base.rows().iter().enumerate() {
            eps[i][..n].clone_from_slice(row);
        }
        for j in 0..m {
            let v = Rational::new(1.into(), base.multipliers()[j].into());
            eps[n + j][j] = v.clone();
            eps[j][n + j] = -v;
        }
        Ok(FramedSeed { exchange: ExchangeMatrix::new(eps, base.multipliers().to_vec())?, base_n: n })
    }

    pub fn exchange(&self) -> &ExchangeMatrix {
        &self.exchange
    }

    pub fn m(&self) -> usize {
        self.exchange.m()
    }

    pub fn mutate(&self, k: usize) -> Result<FramedSeed, SeedError> {
        Ok(FramedSeed { exchange: self.exchange.mutate(k)?, base_n: self.base_n })
    }

    pub fn c_vector(&self, j: usize) -> Vec<i64> {
        (0..self.m()).map(|i| self.exchange.eps(self.base_n + i, j)).collect()
    }

    pub fn classify(&self, j: usize) -> Result<Color, GreenError> {
        self.exchange.check_mutable(j)?;
        color_of(j, &self.c_vector(j))
    }

    /// Integer frame block `C` with `C[i][j] = ε_{i'j}`.
    pub fn frame_block(&self) -> Vec<Vec<i64>> {
        (0..self.m()).map(|i| (0..self.m()).map(|j| self.exchange.eps(self.base_n + i, j)).collect()).collect()
    }

    /// Integer matrix `ε_ij`, all rows by mutable columns.
    pub fn integer_matrix(&self) -> IntMatrix {
        let rows = self.exchange.n();
        let cols = self.m();
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(self.exchange.eps(i, j));
            }
        }
        IntMatrix { rows, cols, data }
    }
}

/// True when `block` is minus a permutation matrix.
pub fn is_negative_permutation(block: &[Vec<i64>]) -> bool {
    let m = block.len();
    let mut used = vec![false; m];
    for row in block {
        let nz: Vec<usize> = (0..m).filter(|&j| row[j] != 0).collect();
        if nz.len() != 1 || row[nz[0]] != -1 || used[nz[0]] {
            return false;
        }
        used[nz[0]] = true;
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub vertex: usize,
    pub color: Color,
    pub c_vector: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MgsCheck {
    pub valid: bool,
    pub steps: Vec<Step>,
    pub final_colors: Vec<Color>,
}

/// Replays `seq`, recording the color of each vertex when it is mutated.
pub fn verify_mgs(s: &ExchangeMatrix, seq: &[usize]) -> Result<MgsCheck, GreenError> {
    let mut state = FramedSeed::new(s)?;
    let mut steps = Vec::new();
    let mut valid = true;
    for &k in seq {
        let color = state.classify(k)?;
        steps.push(Step { vertex: k, color, c_vector: state.c_vector(k) });
        valid &= color == Color::Green;
        state = state.mutate(k)?;
    }
    let final_colors = (0..state.m()).map(|j| state.classify(j)).collect::<Result<Vec<_>, _>>()?;
    valid &= final_colors.iter().all(|&c| c == Color::Red);
    Ok(MgsCheck { valid, steps, final_colors })
}

/// Row-major `rows × cols` integer exchange matrix (columns = mutable vertices).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn mutate(&self, k: usize) -> Result<IntMatrix, GreenError> {
        let mut out = self.clone();
        for i in 0..self.rows {
            let eik = self.get(i, k);
            for j in 0..self.cols {
                let v = if i == k || j == k {
                    self.get(i, j).checked_neg().ok_or(GreenError::Overflow)?
                } else {
                    let ekj = self.get(k, j);
                    let a = eik.checked_abs().and_then(|x| x.checked_mul(ekj));
                    let b = ekj.checked_abs().and_then(|x| x.checked_mul(eik));
                    let corr = a.zip(b).and_then(|(a, b)| a.checked_add(b)).ok_or(GreenError::Overflow)?;
                    self.get(i, j).checked_add(corr / 2).ok_or(GreenError::Overflow)?
                };
                out.data[i * self.cols + j] = v;
            }
        }
        Ok(out)
    }
}

/// Framed integer state for the search; `frame_start` is the first frame row.
#[derive(Debug, Clone)]
struct GreenState {
    matrix: IntMatrix,
    frame_start: usize,
}

impl GreenState {
    fn c_vector(&self, j: usize) -> Vec<i64> {
        (self.frame_start..self.matrix.rows).map(|i| self.matrix.get(i, j)).collect()
    }

    fn colors(&self) -> Result<Vec<Color>, GreenError> {
        (0..self.matrix.cols).map(|j| color_of(j, &self.c_vector(j))).collect()
    }

    /// Mutable vertices reordered by c-vector; frozen and frame rows stay put.
    fn canonical_key(&self, multipliers: &[i64]) -> (Vec<i64>, Vec<i64>) {
        let m = self.matrix.cols;
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by_key(|&j| self.c_vector(j));
        let row_of = |r: usize| if r < m { order[r] } else { r };
        let mut data = Vec::with_capacity(self.matrix.data.len());
        for r in 0..self.matrix.rows {
            for &c in &order {
                data.push(self.matrix.get(row_of(r), c));
            }
        }
        (data, order.iter().map(|&j| multipliers[j]).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MgsSearch {
    /// A shortest maximal green sequence (0-based vertices), if one was reached.
    pub sequence: Option<Vec<usize>>,
    /// Number of isomorphism classes of framed states that were expanded.
    pub explored: usize,
    /// False when the budget stopped the search before the state graph closed.
    pub complete: bool,
    /// Maximal green sequences found, by length.
    pub counts_by_length: BTreeMap<usize, BigUint>,
}

impl MgsSearch {
    pub fn found(&self) -> bool {
        self.sequence.is_some()
    }

    pub fn total(&self) -> BigUint {
        self.counts_by_length.values().sum()
    }
}

struct Class {
    state: GreenState,
    path: Vec<usize>,
    children: Option<Vec<usize>>,
    all_red: bool,
}

/// Breadth-first search over green mutations, merging states that differ
/// by a permutation of mutable vertices (the frame is fixed pointwise).
/// `budget` caps the number of expanded states.
pub fn search_mgs(s: &ExchangeMatrix, budget: usize) -> Result<MgsSearch, GreenError> {
    assert!(budget > 0, "budget must be positive");
    let framed = FramedSeed::new(s)?;
    let multipliers = s.multipliers().to_vec();
    let root = GreenState { matrix: framed.integer_matrix(), frame_start: s.n() };
    let root_red = root.colors()?.iter().all(|&c| c == Color::Red);
    let mut index: HashMap<(Vec<i64>, Vec<i64>), usize> = HashMap::new();
    index.insert(root.canonical_key(&multipliers), 0);
    let mut classes = vec![Class { state: root, path: vec![], children: None, all_red: root_red }];
    let mut level: BTreeMap<usize, BigUint> = BTreeMap::from([(0, BigUint::one())]);
    let mut depth = 0usize;
    let mut explored = 0usize;
    let mut complete = true;
    let mut sequence = None;
    let mut counts_by_length = BTreeMap::new();

    while !level.is_empty() {
        let mut to_expand = Vec::new();
        for (&id, cnt) in &level {
            if classes[id].all_red {
                *counts_by_length.entry(depth).or_insert_with(BigUint::zero) += cnt;
                if sequence.is_none() {
                    sequence = Some(classes[id].path.clone());
                }
            } else if classes[id].children.is_none() {
                if explored < budget {
                    explored += 1;
                    to_expand.push(id);
                } else {
                    complete = false;
                }
            }
        }
        let expansions: Vec<Result<Vec<(usize, GreenState, Vec<Color>)>, GreenError>> = to_expand
            .par_iter()
            .map(|&id| {
                let st = &classes[id].state;
                let mut out = Vec::new();
                for (k, color) in st.colors()?.into_iter().enumerate() {
                    if color == Color::Green {
                        let next = GreenState { matrix: st.matrix.mutate(k)?, frame_start: st.frame_start };
                        let colors = next.colors()?;
                        out.push((k, next, colors));
                    }
                }
                Ok(out)
            })
            .collect();
        for (&id, exp) in to_expand.iter().zip(expansions) {
            let mut children = Vec::new();
            for (k, next, colors) in exp? {
                let key = next.canonical_key(&multipliers);
                let child = match index.get(&key) {
                    Some(&c) => c,
                    None => {
                        let mut path = classes[id].path.clone();
                        path.push(k);
                        let c = classes.len();
                        let all_red = colors.iter().all(|&c| c == Color::Red);
                        classes.push(Class { state: next, path, children: None, all_red });
                        index.insert(key, c);
                        c
                    }
                };
                children.push(child);
            }
            classes[id].children = Some(children);
        }
        let mut next_level: BTreeMap<usize, BigUint> = BTreeMap::new();
        for (&id, cnt) in &level {
            if let Some(ch) = &classes[id].children {
                for &c in ch {
                    *next_level.entry(c).or_insert_with(BigUint::zero) += cnt;
                }
            }
        }
        level = next_level;
        depth += 1;
    }
    Ok(MgsSearch { sequence, explored, complete, counts_by_length })
}

/// Convenience for summaries: total as `u64` when it fits.
pub fn total_as_u64(s: &MgsSearch) -> Option<u64> {
    s.total().to_u64()
}

pub fn search_mgs_for_seed(s: &Seed, budget: usize) -> Result<MgsSearch, GreenError> {
    search_mgs(s.exchange(), budget)
}
