//! Reduced rational functions in named variables.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::gcd::poly_gcd;
use super::laurent::{Laurent, Monomial, Symbol};
use super::{ArithError, Rational};

/// `num / den` with both parts polynomials, `gcd(num, den) = 1` and `den`
/// monic in lex order. Equal functions have identical representations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Laurent,
    den: Laurent,
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc { num: Laurent::zero(), den: Laurent::one() }
    }

    pub fn one() -> Self {
        RatFunc { num: Laurent::one(), den: Laurent::one() }
    }

    pub fn var(name: &str) -> Self {
        RatFunc { num: Laurent::var(name), den: Laurent::one() }
    }

    pub fn from_int(k: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(k)))
    }

    pub fn from_rational(c: Rational) -> Self {
        RatFunc { num: Laurent::constant(c), den: Laurent::one() }
    }

    /// Lifts a Laurent polynomial by clearing negative exponents into the denominator.
    pub fn from_laurent(p: &Laurent) -> Self {
        let content = p.monomial_content();
        let shift = Monomial::from_pairs(content.iter().filter(|(_, e)| *e < 0).map(|(s, e)| (s.clone(), -e)));
        RatFunc { num: p.mul_monomial(&shift), den: Laurent::term(Rational::one(), shift) }
    }

    /// Builds `num / den` from arbitrary Laurent parts and reduces.
    pub fn new(num: &Laurent, den: &Laurent) -> Result<Self, ArithError> {
        if den.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        let n = RatFunc::from_laurent(num);
        let d = RatFunc::from_laurent(den);
        n.div(&d)
    }

    fn reduce(num: Laurent, den: Laurent) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return RatFunc::zero();
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = poly_gcd(&num, &den);
            if g.is_one() {
                (num, den)
            } else {
                (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
            }
        };
        let lc = den.leading().map(|(_, c)| c.clone()).expect("nonzero denominator");
        if lc.is_one() {
            RatFunc { num, den }
        } else {
            let inv = lc.recip();
            RatFunc { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn numer(&self) -> &Laurent {
        &self.num
    }

    pub fn denom(&self) -> &Laurent {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut s = self.num.symbols();
        s.extend(self.den.symbols());
        s
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return Self::reduce(self.num.add(&other.num), self.den.clone());
        }
        if self.den.is_one() {
            return RatFunc { num: self.num.mul(&other.den).add(&other.num), den: other.den.clone() };
        }
        if other.den.is_one() {
            return RatFunc { num: other.num.mul(&self.den).add(&self.num), den: self.den.clone() };
        }
        let g = poly_gcd(&self.den, &other.den);
        let b1 = self.den.div_exact(&g).expect("gcd divides");
        let d1 = other.den.div_exact(&g).expect("gcd divides");
        let num = self.num.mul(&d1).add(&other.num.mul(&b1));
        if num.is_zero() {
            return RatFunc::zero();
        }
        let den = b1.mul(&d1).mul(&g);
        if g.is_one() {
            return RatFunc { num, den };
        }
        let h = poly_gcd(&num, &g);
        if h.is_one() {
            RatFunc { num, den }.renormalized()
        } else {
            RatFunc { num: num.div_exact(&h).expect("gcd divides"), den: den.div_exact(&h).expect("gcd divides") }
                .renormalized()
        }
    }

    fn renormalized(self) -> RatFunc {
        let lc = self.den.leading().map(|(_, c)| c.clone()).expect("nonzero denominator");
        if lc.is_one() {
            self
        } else {
            let inv = lc.recip();
            RatFunc { num: self.num.scale(&inv), den: self.den.scale(&inv) }
        }
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() || other.is_zero() {
            return RatFunc::zero();
        }
        // cross-cancel; both inputs are reduced so the product is too
        let g1 = poly_gcd(&self.num, &other.den);
        let g2 = poly_gcd(&other.num, &self.den);
        let (n1, d2) = if g1.is_one() {
            (self.num.clone(), other.den.clone())
        } else {
            (self.num.div_exact(&g1).expect("gcd divides"), other.den.div_exact(&g1).expect("gcd divides"))
        };
        let (n2, d1) = if g2.is_one() {
            (other.num.clone(), self.den.clone())
        } else {
            (other.num.div_exact(&g2).expect("gcd divides"), self.den.div_exact(&g2).expect("gcd divides"))
        };
        RatFunc { num: n1.mul(&n2), den: d1.mul(&d2) }.renormalized()
    }

    pub fn scale(&self, c: &Rational) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero();
        }
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn inv(&self) -> Result<RatFunc, ArithError> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(RatFunc { num: self.den.clone(), den: self.num.clone() }.renormalized())
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc, ArithError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, k: i64) -> Result<RatFunc, ArithError> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let e = k.unsigned_abs() as u32;
        if base.den.is_one() {
            return Ok(RatFunc { num: base.num.pow(e), den: Laurent::one() });
        }
        Ok(RatFunc { num: base.num.pow(e), den: base.den.pow(e) })
    }

    pub fn derivative(&self, s: &str) -> RatFunc {
        let dn = self.num.derivative(s);
        let dd = self.den.derivative(s);
        if dd.is_zero() {
            return Self::reduce(dn, self.den.clone());
        }
        let num = dn.mul(&self.den).sub(&self.num.mul(&dd));
        Self::reduce(num, self.den.pow(2))
    }

    /// Laurent form when the reduced denominator is a single term.
    pub fn to_laurent(&self) -> Option<Laurent> {
        let inv = self.den.monomial_inverse()?;
        Some(self.num.mul(&inv))
    }

    /// Exact composition: each symbol of `self` is replaced by its image.
    pub fn substitute(&self, assignment: &BTreeMap<Symbol, RatFunc>) -> Result<RatFunc, ArithError> {
        let mut cache: HashMap<(Symbol, i64), RatFunc> = HashMap::new();
        let n = eval_poly(&self.num, assignment, &mut cache)?;
        let d = eval_poly(&self.den, assignment, &mut cache)?;
        if d.is_zero() {
            return Err(ArithError::DegenerateSubstitution);
        }
        n.div(&d)
    }

    pub fn evaluate(&self, point: &BTreeMap<Symbol, Rational>) -> Option<Rational> {
        let d = self.den.evaluate(point)?;
        if d.is_zero() {
            return None;
        }
        Some(self.num.evaluate(point)? / d)
    }
}

fn eval_poly(
    p: &Laurent,
    assignment: &BTreeMap<Symbol, RatFunc>,
    cache: &mut HashMap<(Symbol, i64), RatFunc>,
) -> Result<RatFunc, ArithError> {
    // group terms by common denominator to avoid a gcd per term
    let mut acc = RatFunc::zero();
    for (m, c) in p.terms() {
        let mut t = RatFunc::from_rational(c.clone());
        for (s, e) in m.iter() {
            let key = (s.clone(), *e);
            let factor = match cache.get(&key) {
                Some(f) => f.clone(),
                None => {
                    let image = assignment.get(s).ok_or_else(|| ArithError::MissingImage(s.to_string()))?;
                    let f = image.pow(*e)?;
                    cache.insert(key, f.clone());
                    f
                }
            };
            t = t.mul(&factor);
        }
        acc = acc.add(&t);
    }
    Ok(acc)
}

/// Membership of `f` in the Laurent ring of `chart`: returns the Laurent
/// form exactly when the reduced denominator is a monomial in chart symbols.
pub fn is_laurent(f: &RatFunc, chart: &BTreeSet<Symbol>) -> Option<Laurent> {
    if !f.symbols().is_subset(chart) {
        return None;
    }
    f.to_laurent()
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let num = if self.num.len() > 1 { format!("({})", self.num) } else { self.num.to_string() };
        let den = self.den.to_string();
        let den = if self.den.len() > 1 || den.contains(['*', '/']) { format!("({})", den) } else { den };
        write!(f, "{}/{}", num, den)
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::laurent::sym;

    fn x(n: &str) -> RatFunc {
        RatFunc::var(n)
    }
    fn k(c: i64) -> RatFunc {
        RatFunc::from_int(c)
    }

    #[test]
    fn display_parses_back() {
        let f = x("x2").add(&k(1)).div(&x("x1").mul(&x("x2"))).unwrap();
        assert_eq!(f.to_string(), "(x2 + 1)/(x1*x2)");
        let g = x("x1").div(&x("x2").pow(2).unwrap().scale(&crate::arith::rat(2, 3))).unwrap();
        assert_eq!(crate::expr::parse_ratfunc(&g.to_string(), None).unwrap(), g);
        assert_eq!(crate::expr::parse_ratfunc(&f.to_string(), None).unwrap(), f);
    }

    #[test]
    fn laurent_membership_examples() {
        let chart: BTreeSet<Symbol> = [sym("x1"), sym("x2")].into_iter().collect();
        // (x1^2 - 1)/x1 -> x1 - x1^{-1}
        let f = x("x1").pow(2).unwrap().sub(&k(1)).div(&x("x1")).unwrap();
        let l = is_laurent(&f, &chart).unwrap();
        let expected = Laurent::var("x1").sub(&Laurent::var("x1").monomial_inverse().unwrap());
        assert_eq!(l, expected);
        // 1/(1 + x1) -> absent
        let g = k(1).div(&k(1).add(&x("x1"))).unwrap();
        assert!(is_laurent(&g, &chart).is_none());
        // (1 + x2)/x1 -> x1^{-1} + x2 x1^{-1}
        let h = k(1).add(&x("x2")).div(&x("x1")).unwrap();
        let inv = Laurent::var("x1").monomial_inverse().unwrap();
        assert_eq!(is_laurent(&h, &chart).unwrap(), inv.add(&Laurent::var("x2").mul(&inv)));
    }

    #[test]
    fn substitution_examples() {
        let f = x("x1").mul(&x("x2"));
        let map: BTreeMap<Symbol, RatFunc> = [
            (sym("x1"), x("x1").inv().unwrap()),
            (sym("x2"), x("x2").mul(&k(1).add(&x("x1")))),
        ]
        .into_iter()
        .collect();
        let expected = x("x2").mul(&k(1).add(&x("x1"))).div(&x("x1")).unwrap();
        assert_eq!(f.substitute(&map).unwrap(), expected);

        let id: BTreeMap<Symbol, RatFunc> = [(sym("x1"), x("x1"))].into_iter().collect();
        assert_eq!(x("x1").substitute(&id).unwrap(), x("x1"));

        let swap: BTreeMap<Symbol, RatFunc> = [(sym("x1"), x("x2")), (sym("x2"), x("x1"))].into_iter().collect();
        let s = x("x1").add(&x("x2"));
        assert_eq!(s.substitute(&swap).unwrap(), s);
    }

    #[test]
    fn degenerate_substitution_is_an_error() {
        let f = k(1).div(&x("a")).unwrap();
        let map: BTreeMap<Symbol, RatFunc> = [(sym("a"), k(0))].into_iter().collect();
        assert_eq!(f.substitute(&map), Err(ArithError::DegenerateSubstitution));
        let missing: BTreeMap<Symbol, RatFunc> = BTreeMap::new();
        assert!(matches!(f.substitute(&missing), Err(ArithError::MissingImage(_))));
    }

    #[test]
    fn canonical_form_is_unique() {
        let a = x("a").add(&k(1));
        let f = a.mul(&x("b")).div(&a.mul(&k(2))).unwrap();
        assert_eq!(f, x("b").scale(&Rational::new(1.into(), 2.into())));
        let g = k(1).div(&k(-2).mul(&x("a")).add(&k(4))).unwrap();
        assert!(g.denom().leading().unwrap().1.is_one());
    }

    #[test]
    fn derivative_quotient_rule() {
        // d/dx x/(1+x) = 1/(1+x)^2
        let f = x("x").div(&k(1).add(&x("x"))).unwrap();
        let expected = k(1).div(&k(1).add(&x("x")).pow(2).unwrap()).unwrap();
        assert_eq!(f.derivative("x"), expected);
    }
}
