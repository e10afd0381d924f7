//! Univariate images modulo a word-size prime, used to certify coprimality
//! cheaply before running the exact pseudo-remainder gcd.
//!
//! If `g` divides both `a` and `b` and involves `v`, then at any point where
//! the leading coefficient of `a` in `v` does not vanish mod `p`, the image of
//! `g` is a common factor of the images of `a` and `b` of positive degree in
//! `v`. So a trivial univariate gcd for every common variable proves
//! `gcd(a, b) = 1`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::laurent::{Laurent, Symbol};

const P: u64 = (1 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn powmod(mut b: u64, mut e: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b);
        }
        b = mulmod(b, b);
        e >>= 1;
    }
    acc
}

fn inv(a: u64) -> u64 {
    powmod(a, P - 2)
}

fn reduce(x: &BigInt) -> u64 {
    x.mod_floor(&BigInt::from(P)).to_u64().expect("reduced below p")
}

/// Image of `p` in `F_p[v]` with every other symbol replaced by its value.
/// `None` if a coefficient denominator vanishes mod `p`.
fn image(p: &Laurent, v: &str, point: &dyn Fn(&Symbol) -> u64) -> Option<Vec<u64>> {
    let deg = p.degree_in(v);
    let mut out = vec![0u64; deg as usize + 1];
    for (m, c) in p.terms() {
        let den = reduce(c.denom());
        if den == 0 {
            return None;
        }
        let mut t = mulmod(reduce(c.numer()), inv(den));
        let mut e_v = 0;
        for (s, e) in m.iter() {
            if &**s == v {
                e_v = *e;
            } else {
                t = mulmod(t, powmod(point(s), *e as u64));
            }
        }
        let slot = &mut out[e_v as usize];
        *slot = (*slot + t) % P;
    }
    Some(out)
}

fn trim(p: &mut Vec<u64>) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

fn poly_gcd_degree(mut a: Vec<u64>, mut b: Vec<u64>) -> usize {
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let lb = inv(*b.last().expect("nonempty"));
        while a.len() >= b.len() {
            let la = *a.last().expect("nonempty");
            let f = mulmod(la, lb);
            let shift = a.len() - b.len();
            for (i, bi) in b.iter().enumerate() {
                let s = mulmod(f, *bi);
                a[i + shift] = (a[i + shift] + P - s) % P;
            }
            trim(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

fn value_for(s: &Symbol, salt: u64) -> u64 {
    // deterministic pseudo-random point, never 0
    let mut h: u64 = 0x9E37_79B9_7F4A_7C15 ^ salt.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    for b in s.bytes() {
        h = (h ^ b as u64).wrapping_mul(0x100_0000_01B3);
    }
    h ^= h >> 31;
    1 + h % (P - 1)
}

/// True only when `gcd(a, b) = 1` is certified; false means "unknown".
pub fn certainly_coprime(a: &Laurent, b: &Laurent) -> bool {
    if a.is_zero() || b.is_zero() {
        return false;
    }
    let common: Vec<Symbol> = a.symbols().intersection(&b.symbols()).cloned().collect();
    'vars: for v in &common {
        for salt in 0..3u64 {
            let point = |s: &Symbol| value_for(s, salt);
            let (Some(ia), Some(ib)) = (image(a, v, &point), image(b, v, &point)) else {
                return false;
            };
            if ia.len() != (a.degree_in(v) + 1) as usize || ia.last().is_some_and(|c| c.is_zero()) {
                continue;
            }
            if poly_gcd_degree(ia, ib) == 0 {
                continue 'vars;
            }
            return false;
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(n: &str) -> Laurent {
        Laurent::var(n)
    }

    #[test]
    fn certifies_and_refuses() {
        let one = Laurent::one();
        let a = x("a").add(&x("b")).add(&one);
        let b = x("a").mul(&x("b")).sub(&one);
        assert!(certainly_coprime(&a, &b));
        assert!(!certainly_coprime(&a.mul(&b), &b.mul(&x("c"))));
        // constant content is not a common factor
        assert!(certainly_coprime(&a.scale(&crate::arith::int(3)), &b));
    }
}
