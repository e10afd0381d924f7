use proptest::prelude::*;

use dualgroup::arith::gcd::poly_gcd;
use dualgroup::arith::{int, sym, Laurent, Monomial, QScalar, RatFunc};
use dualgroup::borel::{
    braid_sigma, braid_word, gamma_embed, gauss_decompose, in_dual_group, same_torus_element, tau, weyl_reflect, GroupMode,
    Matrix,
};
use dualgroup::green::{is_negative_permutation, GreenError, search_mgs, verify_mgs, FramedSeed};
use dualgroup::qtorus::{QTElement, QTorus};
use dualgroup::quiver::{amalgamate, quiver_to_seed, seed_to_quiver, triangle_quiver, GluingSpec};
use dualgroup::random::{self, SampleRng};
use dualgroup::seed::Seed;
use dualgroup::upper_bound::{upper_bound_member, verify_certificate};
use dualgroup::uq::{chebyshev_of_casimir, expand_in_theta, theta_element, ThetaIndex, UqElement};

fn laurent(terms: &[(i64, i64, i64)]) -> Laurent {
    Laurent::from_terms(
        terms.iter().map(|&(c, a, b)| (Monomial::from_pairs([(sym("x"), a), (sym("y"), b)]), int(c))),
    )
}

fn terms() -> impl Strategy<Value = Vec<(i64, i64, i64)>> {
    prop::collection::vec((-4i64..=4, -2i64..=2, -2i64..=2), 1..4)
}

fn nonzero_poly() -> impl Strategy<Value = Laurent> {
    prop::collection::vec((-3i64..=3, 0i64..=2, 0i64..=2), 1..4)
        .prop_map(|t| laurent(&t))
        .prop_filter("nonzero", |p| !p.is_zero())
}

fn ratfunc() -> impl Strategy<Value = RatFunc> {
    (terms(), nonzero_poly()).prop_map(|(n, d)| RatFunc::new(&laurent(&n), &d).unwrap())
}

fn qscalar() -> impl Strategy<Value = QScalar> {
    prop::collection::vec((-4i64..=4, -3i64..=3), 0..4)
        .prop_map(|t| QScalar::from_terms(2, t.into_iter().map(|(c, k)| (k, c.into()))))
}

fn sampled<T: std::fmt::Debug>(f: impl Fn(&mut SampleRng) -> T) -> impl Strategy<Value = T> {
    any::<u64>().prop_map(move |s| f(&mut random::rng(s)))
}

fn qt_element(t: &QTorus, rng: &mut SampleRng) -> QTElement {
    use rand::Rng;
    let mut x = t.zero();
    for _ in 0..rng.gen_range(1..=2) {
        let c = QScalar::from_terms(t.d(), [(rng.gen_range(-2..=2), rng.gen_range(1..=3).into())]);
        x = t.add(&x, &t.term(random::exponent_vector(rng, t.n()), c));
    }
    x
}

fn uq_element(rng: &mut SampleRng) -> UqElement {
    use rand::Rng;
    let mut x = UqElement::zero();
    for _ in 0..rng.gen_range(1..=2) {
        let a = rng.gen_range(0..=1);
        let c = rng.gen_range(0..=(1 - a));
        let coeff = QScalar::from_terms(2, [(rng.gen_range(-2..=2), rng.gen_range(-2..=2).into())]);
        x = x.add(&UqElement::term(a, rng.gen_range(-1..=1), c, coeff));
    }
    x
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn laurent_ring_axioms(a in terms(), b in terms(), c in terms()) {
        let (a, b, c) = (laurent(&a), laurent(&b), laurent(&c));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
    }

    #[test]
    fn ratfunc_ring_axioms(a in ratfunc(), b in ratfunc(), c in ratfunc()) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
    }

    #[test]
    fn ratfunc_products_are_reduced(a in ratfunc(), b in ratfunc()) {
        let p = a.mul(&b);
        prop_assert!(poly_gcd(p.numer(), p.denom()).is_monomial());
    }

    #[test]
    fn qscalar_ring_axioms_and_limit(a in qscalar(), b in qscalar(), c in qscalar()) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&b).q_limit(), a.q_limit() * b.q_limit());
    }

    #[test]
    fn mutation_is_involutive(s in sampled(|r| random::random_seed(r, 6, 3)), k in 0usize..6) {
        let k = k % s.m();
        prop_assert_eq!(s.mutate(k).unwrap().mutate(k).unwrap(), s);
    }

    #[test]
    fn bracket_antisymmetry_and_jacobi(
        (s, a, b, c) in sampled(|r| {
            let s = random::random_seed(r, 4, 3);
            let n = s.n();
            (s, random::exponent_vector(r, n), random::exponent_vector(r, n), random::exponent_vector(r, n))
        })
    ) {
        let mono = |e: &[i64]| RatFunc::from_laurent(&Laurent::term(
            int(1),
            Monomial::from_pairs(s.labels().iter().cloned().zip(e.iter().copied())),
        ));
        let (f, g, h) = (mono(&a), mono(&b), mono(&c));
        prop_assert_eq!(s.poisson_bracket(&f, &g), s.poisson_bracket(&g, &f).neg());
        let jacobi = s.poisson_bracket(&f, &s.poisson_bracket(&g, &h))
            .add(&s.poisson_bracket(&g, &s.poisson_bracket(&h, &f)))
            .add(&s.poisson_bracket(&h, &s.poisson_bracket(&f, &g)));
        prop_assert!(jacobi.is_zero());
    }

    #[test]
    fn upper_bound_certificates_reverify(
        (s, f) in sampled(|r| {
            use rand::Rng;
            let s = random::random_seed(r, 3, 2);
            let n = s.n();
            let num = Laurent::term(int(1), Monomial::from_pairs(s.labels().iter().cloned().zip(random::exponent_vector(r, n))));
            let k = r.gen_range(0..n);
            let den = Laurent::one().add(&Laurent::var(s.labels()[k].as_ref()));
            (s, if r.gen_bool(0.5) { RatFunc::from_laurent(&num) } else { RatFunc::new(&num, &den).unwrap() })
        })
    ) {
        let cert = upper_bound_member(&f, &s).unwrap();
        prop_assert!(verify_certificate(&cert, &f, &s).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn green_search_results_verify(s in sampled(|r| random::random_seed(r, 3, 2))) {
        let found = match search_mgs(s.exchange(), 200) {
            Err(GreenError::Overflow) => return Ok(()),
            other => other.unwrap(),
        };
        if let Some(seq) = found.sequence {
            prop_assert!(verify_mgs(s.exchange(), &seq).unwrap().valid);
            let mut framed = FramedSeed::new(s.exchange()).unwrap();
            for &k in &seq {
                framed = framed.mutate(k).unwrap();
            }
            prop_assert!(is_negative_permutation(&framed.frame_block()));
        }
    }

    #[test]
    fn quiver_seed_round_trip(r in 1usize..=5) {
        let q = triangle_quiver(r).unwrap();
        let s = quiver_to_seed(&q).unwrap();
        prop_assert_eq!(quiver_to_seed(&seed_to_quiver(&s).unwrap()).unwrap(), s);
    }

    #[test]
    fn triangle_edge_weights(r in 1usize..=6) {
        let q = triangle_quiver(r).unwrap();
        for (i, j, w) in q.arrows() {
            let (a, b) = (&q.vertices()[i], &q.vertices()[j]);
            // frozen vertices on one side of the triangle share their first letter
            if a.frozen && b.frozen && a.label[..1] == b.label[..1] {
                prop_assert!(w == dualgroup::arith::rat(1, 2));
            } else {
                prop_assert!(w == int(1));
            }
        }
    }

    #[test]
    fn amalgamation_commutes_with_relabeling(r in 1usize..=3, j in 1usize..=3) {
        let j = 1 + (j - 1) % r;
        let a = triangle_quiver(r).unwrap().relabeled(|l| format!("a{}", l)).unwrap();
        let b = triangle_quiver(r).unwrap().relabeled(|l| format!("b{}", l)).unwrap();
        let spec = GluingSpec { pairs: vec![(format!("aL{}", j), format!("bR{}", j))], defrost: vec![] };
        let (glued, _) = amalgamate(&a, &b, &spec).unwrap();
        let rename = |l: &str| format!("z{}", l);
        let spec2 = GluingSpec { pairs: vec![(rename(&spec.pairs[0].0), rename(&spec.pairs[0].1))], defrost: vec![] };
        let (glued2, _) = amalgamate(&a.relabeled(rename).unwrap(), &b.relabeled(rename).unwrap(), &spec2).unwrap();
        prop_assert_eq!(glued.relabeled(rename).unwrap(), glued2);
    }

    #[test]
    fn quantum_torus_associative(
        (t, x, y, z) in sampled(|r| {
            let t = QTorus::new(&random::random_seed(r, 4, 3)).unwrap();
            let (x, y, z) = (qt_element(&t, r), qt_element(&t, r), qt_element(&t, r));
            (t, x, y, z)
        })
    ) {
        prop_assert_eq!(t.multiply(&t.multiply(&x, &y), &z), t.multiply(&x, &t.multiply(&y, &z)));
    }

    #[test]
    fn semiclassical_matches_poisson_bracket(
        (t, x, y) in sampled(|r| {
            let t = QTorus::new(&random::random_seed(r, 4, 3)).unwrap();
            let (x, y) = (qt_element(&t, r), qt_element(&t, r));
            (t, x, y)
        })
    ) {
        let got = t.semiclassical_bracket(&x, &y).expect("commutators divide by q^(1/d) - 1");
        let (fx, fy) = (RatFunc::from_laurent(&t.classical(&x)), RatFunc::from_laurent(&t.classical(&y)));
        prop_assert_eq!(RatFunc::from_laurent(&got), t.seed().poisson_bracket(&fx, &fy));
    }

    #[test]
    fn gauss_round_trip(g in sampled(|r| random::random_special(r, 3))) {
        if let Ok(p) = gauss_decompose(&g) {
            prop_assert_eq!(p.upper.mul(&p.diagonal).mul(&p.lower), g);
        } else {
            prop_assert!((1..=3).any(|k| g.trailing_minor(k) == int(0)));
        }
    }

    #[test]
    fn gamma_is_a_homomorphism(a in prop::array::uniform4(-4i64..=4), b in prop::array::uniform4(-4i64..=4), i in 0usize..3) {
        let m = |v: [i64; 4]| [[int(v[0]), int(v[1])], [int(v[2]), int(v[3])]];
        let (ma, mb) = (m(a), m(b));
        let prod = Matrix::from_rows(vec![ma[0].to_vec(), ma[1].to_vec()]).unwrap()
            .mul(&Matrix::from_rows(vec![mb[0].to_vec(), mb[1].to_vec()]).unwrap());
        let pm = [[prod.get(0, 0).clone(), prod.get(0, 1).clone()], [prod.get(1, 0).clone(), prod.get(1, 1).clone()]];
        prop_assert_eq!(
            gamma_embed(i, pm, 4).unwrap(),
            gamma_embed(i, ma, 4).unwrap().mul(&gamma_embed(i, mb, 4).unwrap())
        );
    }

    #[test]
    fn sl3_braid_and_equivariance(
        (p, d) in sampled(|r| (random::random_pair(r, GroupMode::Sl, 3), random::random_dual_pair(r, GroupMode::Sl, 3)))
    ) {
        prop_assert_eq!(braid_word(&[0, 1, 0], &p).unwrap(), braid_word(&[1, 0, 1], &p).unwrap());
        for i in 0..2 {
            let s = braid_sigma(i, &p).unwrap();
            prop_assert!(same_torus_element(GroupMode::Sl, &tau(&s), &weyl_reflect(i, &tau(&p))));
            prop_assert!(in_dual_group(&braid_sigma(i, &d).unwrap()));
        }
    }

    #[test]
    fn uq_associative(
        (x, y, z) in sampled(|r| (uq_element(r), uq_element(r), uq_element(r)))
    ) {
        prop_assert!(x.degree() <= 3 && y.degree() <= 3 && z.degree() <= 3);
        prop_assert_eq!(x.multiply(&y).multiply(&z), x.multiply(&y.multiply(&z)));
    }

    #[test]
    fn chebyshev_product_rule(n in 1u32..=5, m in 1u32..=5) {
        prop_assume!(n != m);
        let lhs = chebyshev_of_casimir(n).multiply(&chebyshev_of_casimir(m));
        let rhs = chebyshev_of_casimir(n + m).add(&chebyshev_of_casimir(n.abs_diff(m)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn theta_expansion_is_a_delta(k in 0usize..85) {
        let all = ThetaIndex::all_up_to(4);
        let i = all[k];
        let e = expand_in_theta(&theta_element(i), 8).unwrap();
        prop_assert_eq!(e.len(), 1);
        prop_assert!(e[&i].is_one());
    }
}

#[test]
fn theta_index_count() {
    assert_eq!(ThetaIndex::all_up_to(4).len(), 85);
}

#[test]
fn seed_sampler_is_deterministic() {
    let a: Vec<Seed> = (0..3).map(|k| random::random_seed(&mut random::rng(k), 6, 3)).collect();
    let b: Vec<Seed> = (0..3).map(|k| random::random_seed(&mut random::rng(k), 6, 3)).collect();
    assert_eq!(a, b);
}
