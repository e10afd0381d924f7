//! Multivariate polynomial gcd over `Q`.
//!
//! Recursive content / primitive-part scheme: variables that occur in only
//! one operand are eliminated by taking contents, then a primitive
//! pseudo-remainder sequence runs in the alphabetically first common
//! variable with coefficients in the polynomial ring of the others.
//! Results are monic in lex order, so the gcd is unique.

use std::collections::BTreeSet;

use super::laurent::{Laurent, Symbol};
use super::modular::certainly_coprime;

/// Monic gcd of two polynomials (nonnegative exponents). `gcd(0, 0) = 0`.
pub fn poly_gcd(a: &Laurent, b: &Laurent) -> Laurent {
    debug_assert!(a.is_polynomial() && b.is_polynomial());
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Laurent::one();
    }
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let m = ma.gcd(&mb);
    let a1 = a.mul_monomial(&ma.pow(-1));
    let b1 = b.mul_monomial(&mb.pow(-1));
    let g = gcd_without_monomial_content(&a1, &b1);
    g.mul_monomial(&m)
}

fn gcd_without_monomial_content(a: &Laurent, b: &Laurent) -> Laurent {
    if a.is_constant() || b.is_constant() {
        return Laurent::one();
    }
    if a.is_monomial() || b.is_monomial() {
        // monomial content already removed, so a lone term is a constant
        return Laurent::one();
    }
    let am = a.monic();
    let bm = b.monic();
    if am == bm {
        return am;
    }
    if certainly_coprime(a, b) {
        return Laurent::one();
    }
    let sa = a.symbols();
    let sb = b.symbols();
    if let Some(w) = sa.difference(&sb).next() {
        let ca = content_in(a, w);
        return poly_gcd(&ca, b);
    }
    if let Some(w) = sb.difference(&sa).next() {
        let cb = content_in(b, w);
        return poly_gcd(a, &cb);
    }
    // cheap divisibility probes catch the common `f | g` case
    if a.len() <= b.len() {
        if b.div_exact(a).is_some() {
            return am;
        }
    } else if a.div_exact(b).is_some() {
        return bm;
    }
    let common: BTreeSet<Symbol> = sa;
    let v = common.iter().next().expect("nonconstant polynomial has a symbol").clone();
    let ca = content_in(a, &v);
    let cb = content_in(b, &v);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let c = poly_gcd(&ca, &cb);
    let g = primitive_prs(pa, pb, &v);
    c.mul(&g).monic()
}

/// gcd of the coefficients of `p` viewed as a polynomial in `v`.
pub fn content_in(p: &Laurent, v: &str) -> Laurent {
    let coeffs = p.coefficients_in(v);
    let mut iter = coeffs.into_values();
    let Some(first) = iter.next() else {
        return Laurent::zero();
    };
    let mut g = first.monic();
    for c in iter {
        if g.is_one() {
            break;
        }
        g = poly_gcd(&g, &c);
    }
    g
}

fn primitive_part_in(p: &Laurent, v: &str) -> Laurent {
    if p.is_zero() {
        return Laurent::zero();
    }
    let c = content_in(p, v);
    p.div_exact(&c).expect("content divides").monic()
}

/// `lc(b)^k · a mod b` in the variable `v`.
fn pseudo_remainder(a: &Laurent, b: &Laurent, v: &str) -> Laurent {
    let db = b.degree_in(v);
    let lcb = b.coefficient_in(v, db);
    let mut r = a.clone();
    while !r.is_zero() {
        let dr = r.degree_in(v);
        if dr < db {
            break;
        }
        let lcr = r.coefficient_in(v, dr);
        let shift = super::laurent::Monomial::from_pairs([(super::laurent::sym(v), dr - db)]);
        r = lcb.mul(&r).sub(&lcr.mul(b).mul_monomial(&shift));
    }
    r
}

fn primitive_prs(a: Laurent, b: Laurent, v: &str) -> Laurent {
    let (mut a, mut b) = if a.degree_in(v) >= b.degree_in(v) { (a, b) } else { (b, a) };
    loop {
        if b.is_zero() {
            return primitive_part_in(&a, v);
        }
        if b.degree_in(v) == 0 {
            return Laurent::one();
        }
        let r = pseudo_remainder(&a, &b, v);
        a = b;
        b = primitive_part_in(&r, v);
    }
}
