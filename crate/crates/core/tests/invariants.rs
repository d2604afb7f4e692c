use ncorder_core::gotcore::{
    contraction_general, contraction_matrix, directional_derivative, got_verify, push_lemma_check, scalar_derivative,
    Decomposition, OrderingPair,
};
use ncorder_core::matrep::{compare, random_representation};
use ncorder_core::ncalg::{exp_truncated, log_truncated, rat};
use ncorder_core::ordering::weyl_symmetrize;
use ncorder_core::{Generator, MonomialOrdering, NcPoly, Scalar, Word};
use proptest::prelude::*;

fn alphabet() -> Vec<Generator> {
    ["X", "Y", "Z"].iter().map(|s| Generator::new(s)).collect()
}

fn keys() -> Vec<Generator> {
    ["x1", "x2", "x3", "x4"].iter().map(|s| Generator::new(s)).collect()
}

fn word_over(gens: Vec<Generator>, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(prop::sample::select(gens), 0..=max_len).prop_map(|v| v.into_iter().collect())
}

fn coeff() -> impl Strategy<Value = Scalar> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn poly(max_len: usize) -> impl Strategy<Value = NcPoly> {
    prop::collection::vec((word_over(alphabet(), max_len), coeff()), 1..=4).prop_map(NcPoly::from_terms)
}

fn ordering() -> impl Strategy<Value = MonomialOrdering> {
    Just(["x1", "x2", "x3", "x4"]).prop_shuffle().prop_map(|k| MonomialOrdering::perm(&k).unwrap())
}

fn decomposition() -> impl Strategy<Value = Decomposition> {
    let row = prop::collection::vec(coeff(), 3).prop_filter("nonzero row", |r| r.iter().any(|c| *c != rat(0, 1)));
    prop::collection::vec(row, 4).prop_map(|rows| {
        let t: Vec<Generator> = (1..=3).map(|i| Generator::new(&format!("t{i}"))).collect();
        let rows = keys()
            .into_iter()
            .zip(rows)
            .map(|(a, r)| (a, t.iter().cloned().zip(r).collect::<Vec<_>>()))
            .collect::<Vec<_>>();
        Decomposition::from_rows(rows, t.clone()).unwrap()
    })
}

fn t_ordering() -> impl Strategy<Value = MonomialOrdering> {
    Just(["t1", "t2", "t3"]).prop_shuffle().prop_map(|k| MonomialOrdering::perm(&k).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_is_associative(p in poly(3), q in poly(3), r in poly(3)) {
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
    }

    #[test]
    fn jacobi_identity(p in poly(2), q in poly(2), r in poly(2)) {
        let s = &(&p.commutator(&q.commutator(&r)) + &q.commutator(&r.commutator(&p))) + &r.commutator(&p.commutator(&q));
        prop_assert!(s.is_zero());
    }

    #[test]
    fn log_inverts_exp(p in poly(2), n in 1usize..=4) {
        let p = &p - &NcPoly::constant(p.constant_term());
        let back = log_truncated(&exp_truncated(&p, n).unwrap()).unwrap();
        prop_assert_eq!(back.total(), p.truncate(n));
    }

    #[test]
    fn ordering_is_idempotent_and_preserves_letters(o in ordering(), w in word_over(keys(), 6)) {
        let once = o.apply(&w);
        prop_assert_eq!(o.apply(&once), once.clone());
        let mut a: Vec<_> = w.iter().cloned().collect();
        let mut b: Vec<_> = once.iter().cloned().collect();
        a.sort();
        b.sort();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn theta_decomposition_and_trichotomy(o in ordering(), idx in Just([0usize, 1, 2, 3]).prop_shuffle()) {
        let k = keys();
        let (a, b, c) = (&k[idx[0]], &k[idx[1]], &k[idx[2]]);
        prop_assert_eq!(
            o.theta(c, a) * o.theta(c, b),
            o.theta(c, b) * o.theta(b, a) + o.theta(c, a) * o.theta(a, b)
        );
        prop_assert_eq!(o.theta(a, b) + o.theta(b, a), rat(1, 1));
    }

    #[test]
    fn weyl_weights_sum_to_one(idx in Just([0usize, 1, 2, 3]).prop_shuffle(), n in 1usize..=4) {
        let k = keys();
        let w: Word = idx[..n].iter().map(|&i| k[i].clone()).collect();
        let total: Scalar = weyl_symmetrize(&w).unwrap().terms().map(|(_, c)| c.clone()).sum();
        prop_assert_eq!(total, rat(1, 1));
    }

    #[test]
    fn derivative_is_a_derivation(d in poly(2), p in poly(3), q in poly(3), t in 0usize..3) {
        let t = &alphabet()[t];
        let lhs = directional_derivative(&d, t, &(&p * &q));
        let rhs = &(&directional_derivative(&d, t, &p) * &q) + &(&p * &directional_derivative(&d, t, &q));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn scalar_derivative_commutator(p in poly(3), a in 0usize..3, b in 0usize..3) {
        let gens = alphabet();
        let phi = NcPoly::generator(gens[b].clone());
        let lhs = &scalar_derivative(&gens[a], &(&phi * &p)) - &(&phi * &scalar_derivative(&gens[a], &p));
        prop_assert_eq!(lhs, if a == b { p } else { NcPoly::zero() });
    }

    #[test]
    fn push_lemma(o in ordering(), a in 0usize..4, w in word_over(keys(), 4)) {
        prop_assert!(push_lemma_check(&o, &keys()[a], &w));
    }

    #[test]
    fn ordering_theorem_same_set(o in ordering(), o2 in ordering(), w in word_over(keys(), 5)) {
        prop_assume!(!w.is_empty());
        let rep = got_verify(&OrderingPair::new(o, o2), &Decomposition::identity(keys()), &w).unwrap();
        prop_assert!(rep.equal, "{} != {}", rep.lhs, rep.rhs);
    }

    #[test]
    fn ordering_theorem_decomposed(o in ordering(), o2 in t_ordering(), d in decomposition(), w in word_over(keys(), 4)) {
        prop_assume!(!w.is_empty());
        let rep = got_verify(&OrderingPair::new(o, o2), &d, &w).unwrap();
        prop_assert!(rep.equal, "{} != {}", rep.lhs, rep.rhs);
    }

    #[test]
    fn contraction_symmetry_and_diagonal(o in ordering(), o2 in t_ordering(), d in decomposition()) {
        let pair = OrderingPair::new(o, o2);
        for a in keys() {
            for b in keys() {
                prop_assert_eq!(
                    contraction_matrix(&pair, &d, &a, &b).unwrap(),
                    contraction_matrix(&pair, &d, &b, &a).unwrap()
                );
                for k in d.omega_prime() {
                    prop_assert!(contraction_general(&pair, &d, k, k, &a, &b).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn evaluation_is_a_homomorphism(p in poly(3), q in poly(3), seed in any::<u64>()) {
        let r = random_representation(&alphabet(), 3, seed, 0.4).unwrap();
        let prod = r.evaluate(&(&p * &q)).unwrap();
        let expected = r.evaluate(&p).unwrap() * r.evaluate(&q).unwrap();
        prop_assert!(compare(&prod, &expected, 1e-12).unwrap().pass);
    }
}
