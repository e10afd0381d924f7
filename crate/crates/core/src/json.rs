//! JSON shapes for seeds, quivers and Borel pairs. Rationals are strings
//! `"p/q"` so arbitrary precision survives; vertex indices in JSON are
//! 1-based.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{format_rational, parse_rational, ArithError, QScalar, RatFunc, Rational};
use crate::borel::{BorelError, BorelPair, Field, GroupMode, Matrix};
use crate::expr::{parse_ratfunc, ExprError};
use crate::quiver::{Quiver, QuiverError, Vertex};
use crate::seed::{ExchangeMatrix, Seed, SeedError};
use crate::upper_bound::{LaurentCertificate, Verdict};

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Seed(#[from] SeedError),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Borel(#[from] BorelError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedJson {
    pub n: usize,
    pub m: usize,
    pub multipliers: Vec<i64>,
    pub epsilon_hat: Vec<Vec<String>>,
    pub labels: Vec<String>,
    pub frozen: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variables: Option<Vec<String>>,
}

impl SeedJson {
    pub fn from_seed(s: &Seed, with_variables: bool) -> SeedJson {
        let ex = s.exchange();
        SeedJson {
            n: s.n(),
            m: s.m(),
            multipliers: ex.multipliers().to_vec(),
            epsilon_hat: ex.rows().iter().map(|r| r.iter().map(format_rational).collect()).collect(),
            labels: s.label_strings(),
            frozen: s.frozen_labels().iter().map(|l| l.to_string()).collect(),
            variables: with_variables.then(|| s.variables().iter().map(|v| v.to_string()).collect()),
        }
    }

    /// Variables are ignored; the seed starts at the identity chart.
    pub fn to_seed(&self) -> Result<Seed, JsonError> {
        if self.epsilon_hat.len() != self.n || self.labels.len() != self.n {
            return Err(JsonError::Invalid(format!("expected {} rows and labels", self.n)));
        }
        if self.multipliers.len() != self.m {
            return Err(JsonError::Invalid(format!("expected {} multipliers", self.m)));
        }
        if self.frozen.as_slice() != &self.labels[self.m.min(self.n)..] {
            return Err(JsonError::Invalid("frozen must list labels m+1..n in order".into()));
        }
        let eps = self
            .epsilon_hat
            .iter()
            .map(|r| r.iter().map(|x| parse_rational(x)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Seed::new(ExchangeMatrix::new(eps, self.multipliers.clone())?, self.labels.clone())?)
    }
}

pub fn seed_from_str(src: &str) -> Result<Seed, JsonError> {
    serde_json::from_str::<SeedJson>(src)?.to_seed()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexJson {
    pub label: String,
    pub frozen: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowJson {
    pub from: String,
    pub to: String,
    pub weight: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverJson {
    pub vertices: Vec<VertexJson>,
    pub arrows: Vec<ArrowJson>,
}

impl QuiverJson {
    /// Arrows point along positive weight.
    pub fn from_quiver(q: &Quiver) -> QuiverJson {
        let vs = q.vertices();
        QuiverJson {
            vertices: vs.iter().map(|v| VertexJson { label: v.label.clone(), frozen: v.frozen }).collect(),
            arrows: q
                .arrows()
                .into_iter()
                .map(|(i, j, w)| ArrowJson { from: vs[i].label.clone(), to: vs[j].label.clone(), weight: format_rational(&w) })
                .collect(),
        }
    }

    pub fn to_quiver(&self) -> Result<Quiver, JsonError> {
        let mut q = Quiver::new(self.vertices.iter().map(|v| Vertex { label: v.label.clone(), frozen: v.frozen }).collect())?;
        for a in &self.arrows {
            q.add_arrow(&a.from, &a.to, parse_rational(&a.weight)?)?;
        }
        q.validate()?;
        Ok(q)
    }
}

/// A Borel pair as nested arrays of scalar strings. With `symbols` the
/// entries are expressions over those names; otherwise rationals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbols: Option<Vec<String>>,
    pub b1: Vec<Vec<String>>,
    pub b2: Vec<Vec<String>>,
}

fn matrix_strings<S: Field>(m: &Matrix<S>, show: impl Fn(&S) -> String) -> Vec<Vec<String>> {
    m.rows().iter().map(|r| r.iter().map(&show).collect()).collect()
}

impl PairJson {
    pub fn from_rational(p: &BorelPair<Rational>) -> PairJson {
        PairJson { symbols: None, b1: matrix_strings(p.b1(), format_rational), b2: matrix_strings(p.b2(), format_rational) }
    }

    pub fn from_symbolic(p: &BorelPair<RatFunc>, symbols: Vec<String>) -> PairJson {
        let show = |x: &RatFunc| x.to_string();
        PairJson { symbols: Some(symbols), b1: matrix_strings(p.b1(), show), b2: matrix_strings(p.b2(), show) }
    }

    pub fn to_rational(&self, mode: GroupMode) -> Result<BorelPair<Rational>, JsonError> {
        let parse = |rows: &Vec<Vec<String>>| -> Result<Matrix<Rational>, JsonError> {
            let rows = rows
                .iter()
                .map(|r| r.iter().map(|x| parse_rational(x)).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Matrix::from_rows(rows)?)
        };
        Ok(BorelPair::from_matrices(mode, parse(&self.b1)?, parse(&self.b2)?)?)
    }

    pub fn to_symbolic(&self, mode: GroupMode) -> Result<BorelPair<RatFunc>, JsonError> {
        let allowed = self.symbols.clone().unwrap_or_default();
        let parse = |rows: &Vec<Vec<String>>| -> Result<Matrix<RatFunc>, JsonError> {
            let rows = rows
                .iter()
                .map(|r| r.iter().map(|x| parse_ratfunc(x, Some(&allowed))).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Matrix::from_rows(rows)?)
        };
        Ok(BorelPair::from_matrices(mode, parse(&self.b1)?, parse(&self.b2)?)?)
    }
}

/// `{"d": d, "terms": {"k": "c"}}` for `Σ c q^{k/d}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QScalarJson {
    pub d: i64,
    pub terms: BTreeMap<i64, String>,
}

impl QScalarJson {
    pub fn from_qscalar(c: &QScalar) -> QScalarJson {
        QScalarJson { d: c.d(), terms: c.terms().map(|(k, v)| (k, v.to_string())).collect() }
    }

    pub fn to_qscalar(&self) -> Result<QScalar, JsonError> {
        if self.d <= 0 {
            return Err(JsonError::Invalid("d must be positive".into()));
        }
        let terms = self
            .terms
            .iter()
            .map(|(k, v)| v.parse::<BigInt>().map(|c| (*k, c)).map_err(|_| JsonError::Invalid(format!("bad coefficient {:?}", v))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(QScalar::from_terms(self.d, terms))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartJson {
    pub chart: String,
    pub symbols: Vec<String>,
    /// The Laurent form in this chart, or null when it is not Laurent there.
    pub laurent: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub member: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub charts: Vec<ChartJson>,
}

impl CertificateJson {
    pub fn from_certificate(c: &LaurentCertificate) -> CertificateJson {
        CertificateJson {
            member: c.is_member(),
            witness: match &c.verdict {
                Verdict::Member => None,
                Verdict::NonMember { witness } => Some(witness.clone()),
            },
            charts: c
                .charts
                .iter()
                .map(|ch| ChartJson {
                    chart: ch.chart.clone(),
                    symbols: ch.symbols.clone(),
                    laurent: ch.laurent.as_ref().map(|l| l.to_string()),
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::triangle_quiver;

    const A2: &str = r#"{"n":2,"m":2,"multipliers":[1,1],"epsilon_hat":[["0","1"],["-1","0"]],"labels":["x1","x2"],"frozen":[]}"#;

    #[test]
    fn seed_round_trip() {
        let s = seed_from_str(A2).unwrap();
        let j = SeedJson::from_seed(&s, false);
        assert_eq!(j.epsilon_hat[0][1], "1/1");
        assert_eq!(j.to_seed().unwrap().exchange(), s.exchange());
        let with_vars = SeedJson::from_seed(&s.mutate(0).unwrap(), true);
        assert_eq!(with_vars.variables.unwrap()[1], "x1*x2 + x2");
    }

    #[test]
    fn seed_rejects_bad_input() {
        assert!(seed_from_str("{").is_err());
        let bad = A2.replace(r#""frozen":[]"#, r#""frozen":["x2"]"#);
        assert!(matches!(seed_from_str(&bad), Err(JsonError::Invalid(_))));
        let skew = A2.replace(r#"["-1","0"]"#, r#"["1","0"]"#);
        assert!(matches!(seed_from_str(&skew), Err(JsonError::Seed(_))));
    }

    #[test]
    fn quiver_round_trip() {
        let q = triangle_quiver(2).unwrap();
        let j = QuiverJson::from_quiver(&q);
        let back = j.to_quiver().unwrap();
        assert_eq!(QuiverJson::from_quiver(&back), j);
    }

    #[test]
    fn qscalar_round_trip() {
        let c = QScalar::from_terms(2, [(-1, BigInt::from(3)), (2, BigInt::from(-1))]);
        let j = QScalarJson::from_qscalar(&c);
        assert_eq!(serde_json::to_string(&j).unwrap(), r#"{"d":2,"terms":{"-1":"3","2":"-1"}}"#);
        assert_eq!(j.to_qscalar().unwrap(), c);
    }

    #[test]
    fn pair_round_trip() {
        let j = PairJson {
            symbols: Some(vec!["a".into(), "b".into()]),
            b1: vec![vec!["a".into(), "b".into()], vec!["0".into(), "1/a".into()]],
            b2: vec![vec!["1/a".into(), "0".into()], vec!["0".into(), "a".into()]],
        };
        let p = j.to_symbolic(GroupMode::Sl).unwrap();
        assert_eq!(PairJson::from_symbolic(&p, vec!["a".into(), "b".into()]).to_symbolic(GroupMode::Sl).unwrap(), p);
        let unknown = PairJson { symbols: Some(vec!["a".into()]), ..j };
        assert!(unknown.to_symbolic(GroupMode::Sl).is_err());
    }
}
