//! Weighted quivers, the triangle quiver for `PGL_{r+1}`, amalgamation and
//! the quiver of the once-punctured disk with two marked boundary points.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::arith::{RatFunc, Rational};
use crate::seed::{ExchangeMatrix, Seed, SeedError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuiverError {
    #[error("rank must be at least 1")]
    BadRank,
    #[error("duplicate vertex label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("self-arrow at `{0}`")]
    SelfArrow(String),
    #[error("weight {weight} between `{from}` and `{to}` is not allowed")]
    BadWeight { from: String, to: String, weight: Rational },
    #[error("cannot glue mutable vertex `{0}`")]
    GlueMutable(String),
    #[error("vertex `{0}` appears in more than one gluing pair")]
    RepeatedGlue(String),
    #[error("defrosted vertex `{0}` is not a glued vertex")]
    DefrostUnglued(String),
    #[error("multiplier {0} is not 1; quivers only describe simply-laced seeds")]
    NotSimplyLaced(i64),
    #[error(transparent)]
    Seed(#[from] SeedError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub label: String,
    pub frozen: bool,
}

/// Vertices plus antisymmetric weights, stored once per unordered pair.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Quiver {
    vertices: Vec<Vertex>,
    index: HashMap<String, usize>,
    weights: BTreeMap<(usize, usize), Rational>,
}

impl Quiver {
    pub fn new(vertices: Vec<Vertex>) -> Result<Self, QuiverError> {
        let mut index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.label.clone(), i).is_some() {
                return Err(QuiverError::DuplicateLabel(v.label.clone()));
            }
        }
        Ok(Quiver { vertices, index, weights: BTreeMap::new() })
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn mutable_count(&self) -> usize {
        self.vertices.iter().filter(|v| !v.frozen).count()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    fn idx(&self, label: &str) -> Result<usize, QuiverError> {
        self.index_of(label).ok_or_else(|| QuiverError::UnknownVertex(label.to_string()))
    }

    /// `weight(from, to) += w`.
    pub fn add_arrow(&mut self, from: &str, to: &str, w: Rational) -> Result<(), QuiverError> {
        let i = self.idx(from)?;
        let j = self.idx(to)?;
        self.add_weight(i, j, w)
    }

    fn add_weight(&mut self, i: usize, j: usize, w: Rational) -> Result<(), QuiverError> {
        if i == j {
            return Err(QuiverError::SelfArrow(self.vertices[i].label.clone()));
        }
        let (key, w) = if i < j { ((i, j), w) } else { ((j, i), -w) };
        let e = self.weights.entry(key).or_insert_with(Rational::zero);
        *e += w;
        if e.is_zero() {
            self.weights.remove(&key);
        }
        Ok(())
    }

    pub fn weight(&self, i: usize, j: usize) -> Rational {
        if i < j {
            self.weights.get(&(i, j)).cloned().unwrap_or_else(Rational::zero)
        } else if i > j {
            -self.weights.get(&(j, i)).cloned().unwrap_or_else(Rational::zero)
        } else {
            Rational::zero()
        }
    }

    pub fn weight_by_label(&self, from: &str, to: &str) -> Result<Rational, QuiverError> {
        Ok(self.weight(self.idx(from)?, self.idx(to)?))
    }

    /// Arrows with positive weight, `(from, to, weight)`, in vertex order.
    pub fn arrows(&self) -> Vec<(usize, usize, Rational)> {
        self.weights
            .iter()
            .map(|(&(i, j), w)| if w.is_positive() { (i, j, w.clone()) } else { (j, i, -w.clone()) })
            .collect()
    }

    /// Half-integer weights only between two frozen vertices, integers elsewhere.
    pub fn validate(&self) -> Result<(), QuiverError> {
        let two = Rational::from_integer(BigInt::from(2));
        for (&(i, j), w) in &self.weights {
            let both_frozen = self.vertices[i].frozen && self.vertices[j].frozen;
            let ok = if both_frozen { (w * &two).is_integer() } else { w.is_integer() };
            if !ok {
                return Err(QuiverError::BadWeight {
                    from: self.vertices[i].label.clone(),
                    to: self.vertices[j].label.clone(),
                    weight: w.clone(),
                });
            }
        }
        Ok(())
    }

    pub fn relabeled(&self, f: impl Fn(&str) -> String) -> Result<Quiver, QuiverError> {
        let vertices = self.vertices.iter().map(|v| Vertex { label: f(&v.label), frozen: v.frozen }).collect();
        let mut q = Quiver::new(vertices)?;
        q.weights = self.weights.clone();
        Ok(q)
    }

    /// Same quiver with mutable vertices first (stable order otherwise).
    pub fn mutable_first(&self) -> Quiver {
        let order: Vec<usize> = (0..self.len())
            .filter(|&i| !self.vertices[i].frozen)
            .chain((0..self.len()).filter(|&i| self.vertices[i].frozen))
            .collect();
        let mut pos = vec![0; self.len()];
        for (new, &old) in order.iter().enumerate() {
            pos[old] = new;
        }
        let vertices = order.iter().map(|&i| self.vertices[i].clone()).collect();
        let mut q = Quiver::new(vertices).expect("labels already distinct");
        for (&(i, j), w) in &self.weights {
            q.add_weight(pos[i], pos[j], w.clone()).expect("no self-arrows");
        }
        q
    }
}

/// `ε̂_ij = weight(i, j)`, multipliers 1; mutable vertices are moved first.
pub fn quiver_to_seed(q: &Quiver) -> Result<Seed, QuiverError> {
    q.validate()?;
    let q = q.mutable_first();
    let n = q.len();
    let eps = (0..n).map(|i| (0..n).map(|j| q.weight(i, j)).collect()).collect();
    let exchange = ExchangeMatrix::new(eps, vec![1; q.mutable_count()])?;
    Ok(Seed::new(exchange, q.vertices.iter().map(|v| v.label.clone()).collect())?)
}

pub fn seed_to_quiver(s: &Seed) -> Result<Quiver, QuiverError> {
    if let Some(&d) = s.exchange().multipliers().iter().find(|&&d| d != 1) {
        return Err(QuiverError::NotSimplyLaced(d));
    }
    let m = s.m();
    let vertices =
        s.labels().iter().enumerate().map(|(i, l)| Vertex { label: l.to_string(), frozen: i >= m }).collect();
    let mut q = Quiver::new(vertices)?;
    for i in 0..s.n() {
        for j in (i + 1)..s.n() {
            let w = s.exchange().eps_hat(i, j).clone();
            if !w.is_zero() {
                q.add_weight(i, j, w)?;
            }
        }
    }
    Ok(q)
}

/// Label of lattice point `(i, j)` of the side-`r + 1` triangle.
fn triangle_label(i: usize, j: usize, r: usize) -> String {
    let side = r + 1;
    if i == 0 {
        format!("L{}", j)
    } else if j == 0 {
        format!("B{}", i)
    } else if i + j == side {
        format!("R{}", j)
    } else {
        format!("I{}_{}", i, j)
    }
}

/// The quiver of a triangle for `PGL_{r+1}`: lattice points `(i, j)` with
/// `i + j <= r + 1` minus the three corners; `L_j = (0, j)`, `B_i = (i, 0)`,
/// `R_j = (r + 1 - j, j)`, interior points `I{i}_{j}` are mutable. Every
/// small triangle contributes a 3-cycle of weight 1/2 with edges along the
/// directions `(-1, 0)`, `(1, -1)`, `(0, 1)`.
pub fn triangle_quiver(r: usize) -> Result<Quiver, QuiverError> {
    if r < 1 {
        return Err(QuiverError::BadRank);
    }
    let side = r + 1;
    let is_corner = |i: usize, j: usize| (i == 0 && j == 0) || (i == side && j == 0) || (i == 0 && j == side);
    let mut points = Vec::new();
    for i in 1..side {
        for j in 1..(side - i) {
            points.push((i, j));
        }
    }
    for j in 1..=r {
        points.push((0, j));
    }
    for i in 1..=r {
        points.push((i, 0));
    }
    for j in 1..=r {
        points.push((side - j, j));
    }
    let vertices = points
        .iter()
        .map(|&(i, j)| Vertex { label: triangle_label(i, j, r), frozen: i == 0 || j == 0 || i + j == side })
        .collect();
    let mut q = Quiver::new(vertices)?;
    let half = Rational::new(1.into(), 2.into());
    let arrow = |a: (usize, usize), b: (usize, usize), q: &mut Quiver| -> Result<(), QuiverError> {
        if is_corner(a.0, a.1) || is_corner(b.0, b.1) {
            return Ok(());
        }
        q.add_arrow(&triangle_label(a.0, a.1, r), &triangle_label(b.0, b.1, r), half.clone())
    };
    for i in 0..side {
        for j in 0..(side - i) {
            // upward triangle (i,j), (i+1,j), (i,j+1)
            let (p, s, t) = ((i, j), (i + 1, j), (i, j + 1));
            arrow(p, t, &mut q)?;
            arrow(t, s, &mut q)?;
            arrow(s, p, &mut q)?;
            if i + j + 2 <= side {
                // downward triangle (i+1,j), (i,j+1), (i+1,j+1)
                let (a, b, c) = ((i + 1, j), (i, j + 1), (i + 1, j + 1));
                arrow(a, c, &mut q)?;
                arrow(c, b, &mut q)?;
                arrow(b, a, &mut q)?;
            }
        }
    }
    Ok(q)
}

/// Pairs of frozen vertices `(in a, in b)` to identify, and the glued
/// vertices (named by their label in `a`) to make mutable.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GluingSpec {
    pub pairs: Vec<(String, String)>,
    pub defrost: Vec<String>,
}

/// Glues `b` onto `a`. The result lists `a`'s vertices then `b`'s unglued
/// ones; a glued vertex keeps its label from `a`. Labels of `a` and `b`
/// must be disjoint. The returned map sends each result label to its
/// variable in terms of the labels of `a` and `b`.
pub fn amalgamate(a: &Quiver, b: &Quiver, g: &GluingSpec) -> Result<(Quiver, BTreeMap<String, RatFunc>), QuiverError> {
    let mut seen_a = BTreeSet::new();
    let mut seen_b = BTreeSet::new();
    let mut b_to_a: HashMap<usize, usize> = HashMap::new();
    for (la, lb) in &g.pairs {
        let ia = a.idx(la)?;
        let ib = b.idx(lb)?;
        if !seen_a.insert(ia) {
            return Err(QuiverError::RepeatedGlue(la.clone()));
        }
        if !seen_b.insert(ib) {
            return Err(QuiverError::RepeatedGlue(lb.clone()));
        }
        if !a.vertices[ia].frozen {
            return Err(QuiverError::GlueMutable(la.clone()));
        }
        if !b.vertices[ib].frozen {
            return Err(QuiverError::GlueMutable(lb.clone()));
        }
        b_to_a.insert(ib, ia);
    }
    for d in &g.defrost {
        if !g.pairs.iter().any(|(la, _)| la == d) {
            return Err(QuiverError::DefrostUnglued(d.clone()));
        }
    }
    let mut vertices: Vec<Vertex> = a
        .vertices
        .iter()
        .map(|v| Vertex { label: v.label.clone(), frozen: v.frozen && !g.defrost.contains(&v.label) })
        .collect();
    let mut pos_b = vec![0usize; b.len()];
    for (ib, v) in b.vertices.iter().enumerate() {
        match b_to_a.get(&ib) {
            Some(&ia) => pos_b[ib] = ia,
            None => {
                pos_b[ib] = vertices.len();
                vertices.push(v.clone());
            }
        }
    }
    let mut q = Quiver::new(vertices)?;
    q.weights = a.weights.clone();
    for (&(i, j), w) in &b.weights {
        q.add_weight(pos_b[i], pos_b[j], w.clone())?;
    }
    let mut map = BTreeMap::new();
    for v in &q.vertices {
        map.insert(v.label.clone(), RatFunc::var(&v.label));
    }
    for (la, lb) in &g.pairs {
        map.insert(la.clone(), RatFunc::var(la).mul(&RatFunc::var(lb)));
    }
    Ok((q, map))
}

/// Two triangles `t1`, `t2` glued along both arcs ending at the puncture:
/// `t1.L_j ~ t2.R_j` and `t1.R_j ~ t2.L_j`, all glued vertices mutable.
/// The `B` sides stay frozen as the two boundary arcs.
pub fn punctured_disk_quiver(r: usize) -> Result<Quiver, QuiverError> {
    let t = triangle_quiver(r)?;
    let t1 = t.relabeled(|l| format!("t1_{}", l))?;
    let t2 = t.relabeled(|l| format!("t2_{}", l))?;
    let mut spec = GluingSpec::default();
    for j in 1..=r {
        spec.pairs.push((format!("t1_L{}", j), format!("t2_R{}", j)));
        spec.pairs.push((format!("t1_R{}", j), format!("t2_L{}", j)));
    }
    spec.defrost = spec.pairs.iter().map(|(a, _)| a.clone()).collect();
    let (q, _) = amalgamate(&t1, &t2, &spec)?;
    Ok(q.mutable_first())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    #[test]
    fn two_cycle_to_seed() {
        let mut q = Quiver::new(vec![
            Vertex { label: "a".into(), frozen: false },
            Vertex { label: "b".into(), frozen: false },
        ])
        .unwrap();
        q.add_arrow("a", "b", int(1)).unwrap();
        let s = quiver_to_seed(&q).unwrap();
        assert_eq!(s.exchange().eps_hat(0, 1), &int(1));
        assert_eq!(s.exchange().eps_hat(1, 0), &int(-1));
        assert_eq!(seed_to_quiver(&s).unwrap(), q);
    }

    #[test]
    fn empty_quiver() {
        let s = quiver_to_seed(&Quiver::default()).unwrap();
        assert_eq!(s.n(), 0);
    }

    #[test]
    fn rank_one_triangle() {
        let q = triangle_quiver(1).unwrap();
        assert_eq!(q.len(), 3);
        assert_eq!(q.mutable_count(), 0);
        assert_eq!(q.weight_by_label("L1", "B1").unwrap(), int(1));
        assert_eq!(q.weight_by_label("B1", "R1").unwrap(), int(1));
        assert_eq!(q.weight_by_label("R1", "L1").unwrap(), int(1));
        assert_eq!(q.arrows().len(), 3);
    }

    #[test]
    fn vertex_counts() {
        for r in 1..=8 {
            let q = triangle_quiver(r).unwrap();
            assert_eq!(q.len(), (r + 5) * r / 2);
            assert_eq!(q.mutable_count(), (r - 1) * r / 2);
            q.validate().unwrap();
        }
        assert_eq!(triangle_quiver(0), Err(QuiverError::BadRank));
    }

    #[test]
    fn half_weight_between_mutable_and_frozen_is_rejected() {
        let mut q = Quiver::new(vec![
            Vertex { label: "a".into(), frozen: false },
            Vertex { label: "b".into(), frozen: true },
        ])
        .unwrap();
        q.add_arrow("a", "b", rat(1, 2)).unwrap();
        assert!(matches!(quiver_to_seed(&q), Err(QuiverError::BadWeight { .. })));
    }

    #[test]
    fn glue_two_triangles_at_one_vertex() {
        let a = triangle_quiver(1).unwrap().relabeled(|l| format!("a{}", l)).unwrap();
        let b = triangle_quiver(1).unwrap().relabeled(|l| format!("b{}", l)).unwrap();
        let spec = GluingSpec { pairs: vec![("aL1".into(), "bB1".into())], defrost: vec![] };
        let (q, map) = amalgamate(&a, &b, &spec).unwrap();
        assert_eq!(q.len(), 5);
        // aL1 receives aR1 -> aL1 and bL1 -> bB1
        assert_eq!(q.weight_by_label("aR1", "aL1").unwrap(), int(1));
        assert_eq!(q.weight_by_label("bL1", "aL1").unwrap(), int(1));
        assert_eq!(q.weight_by_label("aL1", "bR1").unwrap(), int(1));
        assert_eq!(map["aL1"], RatFunc::var("aL1").mul(&RatFunc::var("bB1")));
        assert_eq!(map["bR1"], RatFunc::var("bR1"));
        let bad = GluingSpec { pairs: vec![("aL1".into(), "bB1".into())], defrost: vec!["aB1".into()] };
        assert_eq!(amalgamate(&a, &b, &bad).unwrap_err(), QuiverError::DefrostUnglued("aB1".into()));
    }

    #[test]
    fn punctured_disk_rank_one() {
        let q = punctured_disk_quiver(1).unwrap();
        assert_eq!(q.len(), 4);
        assert_eq!(q.mutable_count(), 2);
        assert_eq!(q.weight(0, 1), int(0));
    }
}
