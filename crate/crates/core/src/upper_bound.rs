//! Upper-bound membership and finite exchange graphs.
//!
//! `f` lies in the upper bound of a seed when it is a Laurent polynomial in
//! the seed's chart and in each of the `m` charts one mutation away. The
//! adjacent chart is reached by mutating the mutated seed back (mutation is
//! an involution), which expresses the old variables in the new ones.

use std::collections::{BTreeMap, HashMap, VecDeque};

use rayon::prelude::*;

use crate::arith::{is_laurent, sym, Laurent, RatFunc, Symbol};
use crate::seed::{chart_isomorphic, Seed, SeedError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChartCheck {
    /// `"base"` or `"mu<k>"` with a 1-based direction.
    pub chart: String,
    pub symbols: Vec<String>,
    pub laurent: Option<Laurent>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Member,
    NonMember { witness: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentCertificate {
    pub charts: Vec<ChartCheck>,
    pub verdict: Verdict,
}

impl LaurentCertificate {
    pub fn is_member(&self) -> bool {
        self.verdict == Verdict::Member
    }
}

fn primed(labels: &[Symbol]) -> Vec<String> {
    labels.iter().map(|l| format!("{}'", l)).collect()
}

fn assignment(labels: &[Symbol], images: &[RatFunc]) -> BTreeMap<Symbol, RatFunc> {
    labels.iter().cloned().zip(images.iter().cloned()).collect()
}

/// Old chart variables written in the chart after mutating at `k`, whose
/// symbols are the labels with a trailing `'`.
pub fn adjacent_chart(s: &Seed, k: usize) -> Result<(Vec<String>, BTreeMap<Symbol, RatFunc>), SeedError> {
    let names = primed(s.labels());
    let there = Seed::new(s.exchange().mutate(k)?, names.clone())?;
    let back = there.mutate(k)?;
    Ok((names, assignment(s.labels(), back.variables())))
}

pub fn upper_bound_member(f: &RatFunc, s: &Seed) -> Result<LaurentCertificate, SeedError> {
    let base_symbols: Vec<String> = s.label_strings();
    let base_set = s.labels().iter().cloned().collect();
    if let Some(bad) = f.symbols().iter().find(|x| s.index_of(x).is_none()) {
        return Err(SeedError::Arith(crate::arith::ArithError::MissingImage(bad.to_string())));
    }
    let mut charts = vec![ChartCheck { chart: "base".into(), symbols: base_symbols, laurent: is_laurent(f, &base_set) }];
    let adjacent: Vec<Result<ChartCheck, SeedError>> = (0..s.m())
        .into_par_iter()
        .map(|k| {
            let (names, map) = adjacent_chart(s, k)?;
            let g = f.substitute(&map)?;
            let set = names.iter().map(|n| sym(n)).collect();
            Ok(ChartCheck { chart: format!("mu{}", k + 1), laurent: is_laurent(&g, &set), symbols: names })
        })
        .collect();
    for c in adjacent {
        charts.push(c?);
    }
    let verdict = match charts.iter().find(|c| c.laurent.is_none()) {
        Some(c) => Verdict::NonMember { witness: c.chart.clone() },
        None => Verdict::Member,
    };
    Ok(LaurentCertificate { charts, verdict })
}

/// Substitutes each certified Laurent form back into the base chart and
/// compares with `f`.
pub fn verify_certificate(cert: &LaurentCertificate, f: &RatFunc, s: &Seed) -> Result<bool, SeedError> {
    for c in &cert.charts {
        let Some(l) = &c.laurent else { continue };
        let back = RatFunc::from_laurent(l);
        let restored = if c.chart == "base" {
            back
        } else {
            let k: usize = c.chart[2..].parse::<usize>().map_err(|_| SeedError::OutOfRange(usize::MAX))? - 1;
            let forward = s.mutate(k)?;
            let names: Vec<Symbol> = primed(s.labels()).iter().map(|n| sym(n)).collect();
            back.substitute(&assignment(&names, forward.variables()))?
        };
        if &restored != f {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A node of the exchange graph: a seed and one mutation path reaching it.
#[derive(Debug, Clone)]
pub struct ChartNode {
    pub seed: Seed,
    pub path: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct ExchangeGraph {
    pub charts: Vec<ChartNode>,
    /// `(from, direction, to)`.
    pub edges: Vec<(usize, usize, usize)>,
    /// True when every mutation of every chart was explored.
    pub closed: bool,
}

fn chart_key(s: &Seed) -> Vec<String> {
    let mut k: Vec<String> = s.variables().iter().map(|v| v.to_string()).collect();
    k.sort();
    k
}

/// Breadth-first exploration of seeds up to isomorphism; at most `budget`
/// charts are kept.
pub fn enumerate_charts(s: &Seed, budget: usize) -> Result<ExchangeGraph, SeedError> {
    assert!(budget > 0, "budget must be positive");
    let mut charts = vec![ChartNode { seed: s.clone(), path: vec![] }];
    let mut buckets: HashMap<Vec<String>, Vec<usize>> = HashMap::new();
    buckets.entry(chart_key(s)).or_default().push(0);
    let mut edges = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    let mut closed = true;
    while let Some(idx) = queue.pop_front() {
        for k in 0..s.m() {
            let node = &charts[idx];
            let next = node.seed.mutate(k)?;
            let key = chart_key(&next);
            let found = buckets
                .get(&key)
                .and_then(|cands| cands.iter().copied().find(|&c| chart_isomorphic(&next, &charts[c].seed).is_some()));
            match found {
                Some(c) => edges.push((idx, k, c)),
                None if charts.len() < budget => {
                    let mut path = node.path.clone();
                    path.push(k);
                    let id = charts.len();
                    charts.push(ChartNode { seed: next, path });
                    buckets.entry(key).or_default().push(id);
                    edges.push((idx, k, id));
                    queue.push_back(id);
                }
                None => closed = false,
            }
        }
    }
    Ok(ExchangeGraph { charts, edges, closed })
}

/// `f` rewritten in every chart of the graph (chart symbols reuse the
/// labels); `None` entries mark charts where `f` is not Laurent.
pub fn laurent_in_charts(f: &RatFunc, s: &Seed, graph: &ExchangeGraph) -> Result<Vec<Option<Laurent>>, SeedError> {
    let set = s.labels().iter().cloned().collect();
    graph
        .charts
        .par_iter()
        .map(|node| {
            let here = node.seed.reset_variables();
            let mut rev = node.path.clone();
            rev.reverse();
            let back = here.apply_sequence(&rev)?;
            let g = f.substitute(&assignment(s.labels(), back.variables()))?;
            Ok(is_laurent(&g, &set))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_ratfunc;
    use crate::seed::ExchangeMatrix;

    fn seed(eps: &[Vec<i64>], d: Vec<i64>) -> Seed {
        Seed::with_default_labels(ExchangeMatrix::from_ints(eps, d).unwrap()).unwrap()
    }

    fn f(s: &str) -> RatFunc {
        parse_ratfunc(s, None).unwrap()
    }

    #[test]
    fn a1_with_frozen_member() {
        let s = seed(&[vec![0, 1], vec![-1, 0]], vec![1]);
        let g = f("x2*(1 + x1)");
        let cert = upper_bound_member(&g, &s).unwrap();
        assert!(cert.is_member());
        assert_eq!(cert.charts[1].laurent, Some(Laurent::var("x2'")));
        assert!(verify_certificate(&cert, &g, &s).unwrap());
    }

    #[test]
    fn a1_non_member_in_base() {
        let s = seed(&[vec![0]], vec![1]);
        let cert = upper_bound_member(&f("1/(1 + x1)"), &s).unwrap();
        assert_eq!(cert.verdict, Verdict::NonMember { witness: "base".into() });
    }

    #[test]
    fn a2_non_member_after_first_mutation() {
        let s = seed(&[vec![0, 1], vec![-1, 0]], vec![1, 1]);
        let cert = upper_bound_member(&f("(1 + x2)/x1"), &s).unwrap();
        assert_eq!(cert.verdict, Verdict::NonMember { witness: "mu1".into() });
        assert!(verify_certificate(&cert, &f("(1 + x2)/x1"), &s).unwrap());
    }

    #[test]
    fn chart_counts() {
        let a2 = seed(&[vec![0, 1], vec![-1, 0]], vec![1, 1]);
        let g = enumerate_charts(&a2, 10_000).unwrap();
        assert!(g.closed);
        assert_eq!(g.charts.len(), 5);
        assert_eq!(enumerate_charts(&seed(&[vec![0]], vec![1]), 100).unwrap().charts.len(), 2);
        let frozen = enumerate_charts(&seed(&[vec![0]], vec![]), 100).unwrap();
        assert_eq!(frozen.charts.len(), 1);
        assert!(frozen.closed);
        let kronecker = seed(&[vec![0, 2], vec![-2, 0]], vec![1, 1]);
        assert!(!enumerate_charts(&kronecker, 20).unwrap().closed);
    }

    #[test]
    fn chart_rewrites_agree_with_adjacent_certificate() {
        let a2 = seed(&[vec![0, 1], vec![-1, 0]], vec![1, 1]);
        let g = enumerate_charts(&a2, 100).unwrap();
        let h = f("x1 + 1/x1");
        let all = laurent_in_charts(&h, &a2, &g).unwrap();
        assert!(all[0].is_some());
        let cert = upper_bound_member(&h, &a2).unwrap();
        assert_eq!(cert.is_member(), all.iter().all(|c| c.is_some()));
    }
}
