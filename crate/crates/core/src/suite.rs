//! Randomized property suite over all modules.
//!
//! Each property is checked on `cases` seeded random inputs (or once, for
//! fixed exhaustive checks). Properties run on separate threads; results come
//! back in declaration order, so the report is deterministic for a given
//! configuration.

use std::collections::BTreeMap;
use std::thread;

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exprparse::{self, Env};
use crate::gotcore::{
    contraction_general, contraction_matrix, directional_derivative, got_verify_with, primed_product_eval,
    push_lemma_check, scalar_derivative, ContractionTable, Decomposition, Mutation, OrderingPair,
};
use crate::matrep::{self, compare, Matrix};
use crate::ncalg::{exp_truncated, log_truncated, rat, serial, Generator, GradedSeries, NcPoly, Scalar, Word};
use crate::ordering::{weyl_symmetrize, MonomialOrdering};
use crate::series::{self, BchConfig, BchMethod, MagnusConfig, MagnusMethod};

pub const DEFAULT_CASES: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub cases: usize,
    pub seed: u64,
    pub mutation: Mutation,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { cases: DEFAULT_CASES, seed: 0, mutation: Mutation::None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyOutcome {
    pub name: &'static str,
    pub module: &'static str,
    pub cases: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl PropertyOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub outcomes: Vec<PropertyOutcome>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(PropertyOutcome::passed)
    }

    pub fn failed(&self) -> impl Iterator<Item = &PropertyOutcome> {
        self.outcomes.iter().filter(|o| !o.passed())
    }
}

type Check = fn(&mut ChaCha8Rng, Mutation) -> Result<(), String>;

#[derive(Clone, Copy)]
enum Runs {
    PerCase,
    Once,
}

struct Property {
    name: &'static str,
    module: &'static str,
    runs: Runs,
    check: Check,
}

const fn prop(name: &'static str, module: &'static str, runs: Runs, check: Check) -> Property {
    Property { name, module, runs, check }
}

const PROPERTIES: &[Property] = &[
    prop("associativity", "ncalg", Runs::PerCase, check_associativity),
    prop("distributivity", "ncalg", Runs::PerCase, check_distributivity),
    prop("jacobi", "ncalg", Runs::PerCase, check_jacobi),
    prop("exp_log_round_trip", "ncalg", Runs::PerCase, check_exp_log),
    prop("grading", "ncalg", Runs::PerCase, check_grading),
    prop("serialization_round_trip", "ncalg", Runs::PerCase, check_serialization),
    prop("idempotence", "ordering", Runs::PerCase, check_idempotence),
    prop("multiset_preservation", "ordering", Runs::PerCase, check_multiset),
    prop("theta_decomposition", "ordering", Runs::PerCase, check_theta_decomposition),
    prop("trichotomy", "ordering", Runs::PerCase, check_trichotomy),
    prop("weyl_weights", "ordering", Runs::PerCase, check_weyl_weights),
    prop("contraction_symmetry", "gotcore", Runs::PerCase, check_contraction_symmetry),
    prop("diagonal_vanishing", "gotcore", Runs::PerCase, check_diagonal_vanishing),
    prop("derivative_linearity", "gotcore", Runs::PerCase, check_derivative_linearity),
    prop("leibniz_rule", "gotcore", Runs::PerCase, check_leibniz),
    prop("chain_rule", "gotcore", Runs::PerCase, check_chain_rule),
    prop("derivative_commutator_delta", "gotcore", Runs::PerCase, check_delta),
    prop("got_worked_example", "gotcore", Runs::Once, check_worked_example),
    prop("got_random", "gotcore", Runs::PerCase, check_got_random),
    prop("push_lemma", "gotcore", Runs::PerCase, check_push_lemma),
    prop("same_pair_degeneracy", "gotcore", Runs::PerCase, check_same_pair),
    prop("repeated_index_ties", "gotcore", Runs::PerCase, check_repeated_ties),
    prop("bch_got_equivalence", "series", Runs::Once, check_bch_equivalence),
    prop("bch_oracle_agreement", "series", Runs::Once, check_bch_oracles),
    prop("bch_low_order_coefficients", "series", Runs::Once, check_bch_coefficients),
    prop("bernoulli_recurrence", "series", Runs::Once, check_bernoulli),
    prop("magnus_got_equivalence", "series", Runs::Once, check_magnus),
    prop("magnus_third_order", "series", Runs::Once, check_magnus_third_order),
    prop("evaluate_homomorphism", "matrep", Runs::PerCase, check_homomorphism),
    prop("symbolic_implies_numeric", "matrep", Runs::PerCase, check_symbolic_numeric),
    prop("bch_truncation_scaling", "matrep", Runs::PerCase, check_truncation_scaling),
    prop("parse_round_trip", "exprparse", Runs::PerCase, check_parse_round_trip),
    prop("parse_determinism", "exprparse", Runs::PerCase, check_parse_determinism),
    prop("error_positions", "exprparse", Runs::PerCase, check_error_positions),
];

pub fn property_names() -> Vec<&'static str> {
    PROPERTIES.iter().map(|p| p.name).collect()
}

fn run_one(index: usize, p: &Property, cfg: &SuiteConfig) -> PropertyOutcome {
    let cases = match p.runs {
        Runs::PerCase => cfg.cases,
        Runs::Once => 1,
    };
    let mut failures = 0;
    let mut first_failure = None;
    for case in 0..cases {
        let seed = cfg.seed ^ ((index as u64) << 32) ^ case as u64;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        if let Err(msg) = (p.check)(&mut rng, cfg.mutation) {
            failures += 1;
            first_failure.get_or_insert(format!("case {case}: {msg}"));
        }
    }
    PropertyOutcome { name: p.name, module: p.module, cases, failures, first_failure }
}

pub fn run_suite(cfg: &SuiteConfig) -> SuiteReport {
    let outcomes = thread::scope(|s| {
        let handles: Vec<_> =
            PROPERTIES.iter().enumerate().map(|(i, p)| s.spawn(move || run_one(i, p, cfg))).collect();
        handles.into_iter().map(|h| h.join().expect("property thread panicked")).collect()
    });
    SuiteReport { config: *cfg, outcomes }
}

/// Runs a single named property.
pub fn run_property(name: &str, cfg: &SuiteConfig) -> Option<PropertyOutcome> {
    PROPERTIES.iter().enumerate().find(|(_, p)| p.name == name).map(|(i, p)| run_one(i, p, cfg))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ensure_eq(a: &NcPoly, b: &NcPoly, what: &str) -> Result<(), String> {
    ensure(a == b, || format!("{what}: {a} != {b}"))
}

pub fn gens(ids: &[&str]) -> Vec<Generator> {
    ids.iter().map(|s| Generator::new(s)).collect()
}

pub fn random_rational<R: Rng>(rng: &mut R) -> Scalar {
    rat(rng.random_range(-6..=6), rng.random_range(1..=4))
}

pub fn random_word<R: Rng>(rng: &mut R, alphabet: &[Generator], len: usize) -> Word {
    (0..len).map(|_| alphabet[rng.random_range(0..alphabet.len())].clone()).collect()
}

/// Up to `max_terms` words of length at most `max_len` with small rational coefficients.
pub fn random_poly<R: Rng>(rng: &mut R, alphabet: &[Generator], max_len: usize, max_terms: usize) -> NcPoly {
    let mut p = NcPoly::zero();
    for _ in 0..rng.random_range(1..=max_terms) {
        let len = rng.random_range(0..=max_len);
        p.add_term(random_word(rng, alphabet, len), random_rational(rng));
    }
    p
}

/// A strict total order ranking the ids of `keys` in random order.
pub fn random_ordering<R: Rng>(rng: &mut R, keys: &[Generator]) -> MonomialOrdering {
    let mut ids: Vec<String> = keys.iter().map(|g| g.id().to_string()).collect();
    ids.shuffle(rng);
    MonomialOrdering::perm(&ids).expect("distinct nonempty keys")
}

/// One randomized ordering-theorem instance.
#[derive(Clone, Debug)]
pub struct GotInstance {
    pub pair: OrderingPair,
    pub decomposition: Decomposition,
    pub word: Word,
}

/// `|omega|, |omega'| <= 4`, word length 1..=5 drawn with repetition. With
/// `decomposed`, each input index is a random rational combination of
/// separate generators `t1..tm` (every row nonzero).
pub fn random_got_instance<R: Rng>(rng: &mut R, decomposed: bool) -> GotInstance {
    let n = rng.random_range(1..=4);
    let omega: Vec<Generator> = (1..=n).map(|i| Generator::new(&format!("x{i}"))).collect();
    let len = rng.random_range(1..=5);
    let word = random_word(rng, &omega, len);
    let o = random_ordering(rng, &omega);
    if !decomposed {
        let o_prime = random_ordering(rng, &omega);
        return GotInstance { pair: OrderingPair::new(o, o_prime), decomposition: Decomposition::identity(omega), word };
    }
    let m = rng.random_range(1..=4);
    let omega_prime: Vec<Generator> = (1..=m).map(|i| Generator::new(&format!("t{i}"))).collect();
    let mut rows = Vec::with_capacity(n);
    for a in &omega {
        let mut row = Vec::new();
        for k in &omega_prime {
            if rng.random_bool(0.6) {
                let c = random_rational(rng);
                if !c.is_zero() {
                    row.push((k.clone(), c));
                }
            }
        }
        if row.is_empty() {
            let k = omega_prime[rng.random_range(0..m)].clone();
            row.push((k, rat(rng.random_range(1..=5), rng.random_range(1..=3))));
        }
        rows.push((a.clone(), row));
    }
    let decomposition = Decomposition::from_rows(rows, omega_prime.clone()).expect("valid rows");
    let o_prime = random_ordering(rng, &omega_prime);
    GotInstance { pair: OrderingPair::new(o, o_prime), decomposition, word }
}

/// Numeric form of the left-hand side: the `o`-ordered product of
/// `sum_k L_ak t_k` matrices, built directly from the representation.
pub fn numeric_ordered_product(inst: &GotInstance, r: &matrep::Representation) -> Result<Matrix, String> {
    let d = r.dim();
    let mut out = Matrix::identity(d, d);
    for a in inst.pair.o.apply(&inst.word).iter() {
        let expanded = inst.decomposition.expand_generator(a).map_err(|e| e.to_string())?;
        out *= r.evaluate(&expanded).map_err(|e| e.to_string())?;
    }
    Ok(out)
}

/// Symbolic check plus, when `numeric` is set, two numeric comparisons at
/// `d = 4`: the direct ordered product and `evaluate(lhs)` against `evaluate(rhs)`.
pub fn check_got_instance(inst: &GotInstance, mutation: Mutation, numeric: Option<u64>) -> Result<(), String> {
    let rep = got_verify_with(&inst.pair, &inst.decomposition, &inst.word, mutation).map_err(|e| e.to_string())?;
    ensure(rep.equal, || {
        format!("{} vs {} on {}: lhs {} != rhs {}", inst.pair.o, inst.pair.o_prime, inst.word, rep.lhs, rep.rhs)
    })?;
    if let Some(seed) = numeric {
        let all: Vec<Generator> = inst.decomposition.omega_prime().iter().cloned().collect();
        let r = matrep::random_representation(&all, 4, seed, 0.5).map_err(|e| e.to_string())?;
        let rhs = r.evaluate(&rep.rhs).map_err(|e| e.to_string())?;
        let direct = numeric_ordered_product(inst, &r)?;
        let lhs = r.evaluate(&rep.lhs).map_err(|e| e.to_string())?;
        for (what, m) in [("direct product", &direct), ("evaluated lhs", &lhs)] {
            let c = compare(m, &rhs, 1e-12).map_err(|e| e.to_string())?;
            ensure(c.pass, || format!("{what}: relative difference {:e}", c.rel_diff))?;
        }
    }
    Ok(())
}

fn xyz() -> Vec<Generator> {
    gens(&["X", "Y", "Z"])
}

fn check_associativity(rng: &mut ChaCha8Rng, _: Mutation) -> Result<(), String> {
    let a = xyz();
    let (p, q, r) = (random_poly(rng, &a, 3, 4), random_poly(rng, &a, 3, 4), random_poly(rng, &a, 3, 4));
    ensure_eq(&(&(&p * &q) * &r), &(&p * &(&q * &r)), "(pq)r vs p(qr)")
}

fn check_distributivity(rng: &mut ChaCha8Rng, _: Mutation) -> Result<(), String> {
    let a = xyz();
    let (p, q, r) = (random_poly(rng, &a, 3, 4), random_poly(rng, &a, 3, 4), random_poly(rng, &a, 3, 4));
    ensure_eq(&(&p * &(&q + &r)), &(&(&p * &q) + &(&p * &r)), "p(q+r)")?;
    ensure_eq(&(&(&q + &r) * &p), &(&(&q * &p) + &(&r * &p)), "(q+r)p")
}

fn check_jacobi(rng: &mut ChaCha8Rng, _: Mutation) -> Result<(), String> {
    let a = xyz();
    let (p, q, r) = (random_poly(rng, &a, 2, 3), random_poly(rng, &a, 2, 3), random_poly(rng, &a, 2, 3));
    let sum = &(&p.commutator(&q.commutator(&r)) + &q.commutator(&r.commutator(&p))) + &r.commutator(&p.commutator(&q));
    ensure(sum.is_zero(), || format!("Jacobi sum {sum}"))
}

fn random_constant_free(rng: &mut ChaCha8Rng, alphabet: &[Generator], max_len: usize) -> NcPoly {
    let p = random_poly(rng, alphabet, max_len, 4);
    &p - &NcPoly::constant(p.constant_term())
}

fn check_exp_log(rng: &mut ChaCha8Rng, _: Mutation) -> Result<(), String> {
    let n = rng.random_range(1..=4);
    let p = random_constant_free(rng, &gens(&["X", "Y"]), 2);
    let e = exp_truncated(&p, n).map_err(|e| e.to_string())?;
    let back = log_truncated(&e).map_err(|e| e.to_string())?;
    ensure_eq(&back.total(), &p.truncate(n), "log(exp(p))")
}

fn check_grading(rng: &mut ChaCha8Rng, _: Mutation) -> Result<(), String> {
    let a = xyz();
    let (p, q) = (random_poly(rng, &a, 3, 4), random_poly(rng, &a, 3, 4));
    if let (Some(dp), Some(dq)) = (p.degree(), q.degree()) {
        let prod = &p * &q;
        if !prod.is_zero() {
            ensure(prod.degree() == Some(dp + dq), || format!("deg({p} * {q}) != {}", dp + dq))?;
        }
    }
    let s = GradedSeries::from_poly(&p, 3);
    ensure(s.is_graded(), || format!("components of {p} not homogeneous"))?;
    ensure_eq(&s.total(), &p, "sum of components")
}

fn check_serialization(rng: &mut ChaCha8Rng, _: Mutation) -> Result<(), String> {
    let alphabet = vec![
        Generator::new("X"),
        Generator::timed("A", rng.random_range(-3..=3)),
        Generator::new("x1").with_tag(Some("o2")),
    ];
    let p = random_poly(rng, &alphabet, 3, 5);
    let json = serial::to_json(&p);
    let back = serial::from_json(&json).map_err(|e| e.to_string())?;
    ensure_eq(&back, &p, "json round trip")?;
    ensure(serial::to_json(&back) == json, || "document not bit-exact".into())
}

fn four_keys() -> Vec<Generator> {
    gens(&["x1", "x2", "x3", "x4"])
}

fn check_idempotence(rng: &mut ChaCha8Rng, _: Mutation) -> Result<(), String> {
    let k = four_keys();
    let o = random_ordering(rng, &k);
    let len = rng.random_range(0..=6);
    let w = random_word(rng, &k, len);
    let once = o.apply(&w);
    ensure(o.apply(&once) == once, || format!("{o} not idempotent on {w}"))
}

fn check_multiset(rng: &mut ChaCha8Rng, _: Mutation) -> Result<(), String> {
    let k = four_keys();
    let o = random_ordering(rng, &k);
    let len = rng.random_range(0..=6);
    let w = random_word(rng, &k, len);
    let count = |w: &Word| {
        let mut m = BTreeMap::new();
        for g in w.iter() {
            *m.entry(g.clone()).or_insert(0) += 1;
        }
        m
    };
    ensure(count(&o.apply(&w)) == count(&w), || format!("{o} changed the letters of {w}"))
}

fn distinct_triple(rng: &mut ChaCha8Rng, k: &[Generator]) -> (Generator, Generator, Generator) {
    let mut v = k.to_vec();
    v.shuffle(rng);
    (v[0].clone(), v[1].clone(), v[2].clone())
}

fn check_theta_decomposition(rng: &mut ChaCha8Rng, _: Mutation) -> Result<(), String> {
    let k = four_keys();
    let o = random_ordering(rng, &k);
    let (a, b, c) = distinct_triple(rng, &k);
    let lhs = o.theta(&c, &a) * o.theta(&c, &b);
    let rhs = o.theta(&c, &b) * o.theta(&b, &a) + o.theta(&c, &a) * o.theta(&a, &b);
    ensure(lhs == rhs, || format!("{o}: {a} {b} {c}"))
}

fn check_trichotomy(rng: &mut ChaCha8Rng, _: Mutation) -> Result<(), String> {
    let k = four_keys();
    let o = random_ordering(rng, &k);
    let (a, b, _) = distinct_triple(rng, &k);
    ensure(o.theta(&a, &b) + o.theta(&b, &a) == Scalar::one(), || format!("{o}: {a} {b}"))?;
    ensure(o.theta(&a, &a).is_zero(), || format!("{o}: theta({a},{a}) != 0"))
}

fn check_weyl_weights(rng: &mut ChaCha8Rng, _: Mutation) -> Result<(), String> {
    let mut k = four_keys();
    k.shuffle(rng);
    let len = rng.random_range(1..=4);
    let w: Word = k[..len].iter().cloned().collect();
    let p = weyl_symmetrize(&w).map_err(|e| e.to_string())?;
    let total: Scalar = p.terms().map(|(_, c)| c.clone()).sum();
    ensure(total == Scalar::one(), || format!("weights of {w} sum to {total}"))
}

fn check_contraction_symmetry(rng: &mut ChaCha8Rng, _: Mutation) -> Result<(), String> {
    let decomposed = rng.random_bool(0.5);
    let inst = random_got_instance(rng, decomposed);
    let omega: Vec<Generator> = inst.decomposition.omega().iter().cloned().collect();
    for a in &omega {
        for b in &omega {
            let ab = contraction_matrix(&inst.pair, &inst.decomposition, a, b).map_err(|e| e.to_string())?;
            let ba = contraction_matrix(&inst.pair, &inst.decomposition, b, a).map_err(|e| e.to_string())?;
            ensure_eq(&ab, &ba, &format!("C_{a}{b} vs C_{b}{a}"))?;
        }
    }
    Ok(())
}

fn check_diagonal_vanishing(rng: &mut ChaCha8Rng, _: Mutation) -> Result<(), String> {
    let inst = random_got_instance(rng, true);
    let d = &inst.decomposition;
    for k in d.omega_prime() {
        for a in d.omega() {
            for b in d.omega() {
                let c = contraction_general(&inst.pair, d, k, k, a, b).map_err(|e| e.to_string())?;
                ensure(c.is_zero(), || format!("c_{k}{k},{a}{b} = {c}"))?;
            }
        }
    }
    Ok(())
}

fn check_derivative_linearity(rng: &mut ChaCha8Rng, _: Mutation) -> Result<(), String> {
    let a = xyz();
    let t = a[rng.random_range(0..3)].clone();
    let (d1, d2) = (random_poly(rng, &a, 2, 3), random_poly(rng, &a, 2, 3));
    let (p, q) = (random_poly(rng, &a, 3, 4), random_poly(rng, &a, 3, 4));
    let c = random_rational(rng);
    let lhs = directional_derivative(&d1, &t, &(&p + &q.scale(&c)));
    let rhs = &directional_derivative(&d1, &t, &p) + &directional_derivative(&d1, &t, &q).scale(&c);
    ensure_eq(&lhs, &rhs, "linear in operand")?;
    let lhs = directional_derivative(&(&d1 + &d2.scale(&c)), &t, &p);
    let rhs = &directional_derivative(&d1, &t, &p) + &directional_derivative(&d2, &t, &p).scale(&c);
    ensure_eq(&lhs, &rhs, "linear in direction")
}

fn check_leibniz(rng: &mut ChaCha8Rng, _: Mutation) -> Result<(), String> {
    let a = xyz();
    let t = a[rng.random_range(0..3)].clone();
    let d = random_poly(rng, &a, 2, 3);
    let (p, q) = (random_poly(rng, &a, 3, 3), random_poly(rng, &a, 3, 3));
    let lhs = directional_derivative(&d, &t, &(&p * &q));
    let rhs = &(&directional_derivative(&d, &t, &p) * &q) + &(&p * &directional_derivative(&d, &t, &q));
    ensure_eq(&lhs, &rhs, "product rule")?;
    let g2 = directional_derivative(&d, &t, &(&p * &p));
    let dp = directional_derivative(&d, &t, &p);
    ensure_eq(&g2, &(&(&dp * &p) + &(&p * &dp)), "composite G*G")
}

fn check_chain_rule(rng: &mut ChaCha8Rng, _: Mutation) -> Result<(), String> {
    let a = gens(&["X", "Y"]);
    let z = Generator::new("Z");
    let t = a[rng.random_range(0..2)].clone();
    let d = random_poly(rng, &a, 2, 2);
    let g = random_poly(rng, &a, 2, 3);
    let f = random_poly(rng, &[z.clone(), Generator::new("Y")], 3, 3);
    let lhs = directional_derivative(&d, &t, &f.substitute(&z, &g));
    let inner = directional_derivative(&d, &t, &g);
    let outer = directional_derivative(&inner, &z, &f).substitute(&z, &g);
    let explicit = directional_derivative(&d, &t, &f).substitute(&z, &g);
    ensure_eq(&lhs, &(&outer + &explicit), "chain rule")
}

fn check_delta(rng: &mut ChaCha8Rng, _: Mutation) -> Result<(), String> {
    let a = xyz();
    let alpha = a[rng.random_range(0..3)].clone();
    let beta = a[rng.random_range(0..3)].clone();
    let p = random_poly(rng, &a, 3, 4);
    let phi = NcPoly::generator(beta.clone());
    let lhs = &scalar_derivative(&alpha, &(&phi * &p)) - &(&phi * &scalar_derivative(&alpha, &p));
    let expected = if alpha == beta { p.clone() } else { NcPoly::zero() };
    ensure_eq(&lhs, &expected, &format!("[d/d{alpha}, {beta}]"))
}

fn check_worked_example(_: &mut ChaCha8Rng, mutation: Mutation) -> Result<(), String> {
    let inst = GotInstance {
        pair: OrderingPair::new(MonomialOrdering::time(), MonomialOrdering::anti_time()),
        decomposition: Decomposition::identity(gens(&["x1", "x2", "x3"])),
        word: gens(&["x1", "x2", "x3"]).into_iter().collect(),
    };
    check_got_instance(&inst, mutation, None)
}

fn check_got_random(rng: &mut ChaCha8Rng, mutation: Mutation) -> Result<(), String> {
    let decomposed = rng.random_bool(0.5);
    let inst = random_got_instance(rng, decomposed);
    let numeric = rng.random_bool(0.05).then(|| rng.random());
    check_got_instance(&inst, mutation, numeric)
}

fn check_push_lemma(rng: &mut ChaCha8Rng, _: Mutation) -> Result<(), String> {
    let k = four_keys();
    let o = random_ordering(rng, &k);
    let a = k[rng.random_range(0..4)].clone();
    let len = rng.random_range(0..=4);
    let w = random_word(rng, &k, len);
    ensure(push_lemma_check(&o, &a, &w), || format!("{o}: push {a} into {w}"))
}

fn check_same_pair(rng: &mut ChaCha8Rng, _: Mutation) -> Result<(), String> {
    let k = four_keys();
    let o = random_ordering(rng, &k);
    let pair = OrderingPair::new(o.clone(), o.clone());
    let len = rng.random_range(1..=5);
    let w = random_word(rng, &k, len);
    let d = Decomposition::identity(k.clone());
    let table = ContractionTable::new(&pair, &d).entries().map_err(|e| e.to_string())?;
    ensure(table.iter().all(|e| e.poly.is_zero()), || format!("{o}: nonzero contraction"))?;
    ensure_eq(&primed_product_eval(&pair, &w), &NcPoly::word(o.apply(&w)), "derivative-free evaluation")
}

fn check_repeated_ties(rng: &mut ChaCha8Rng, mutation: Mutation) -> Result<(), String> {
    let decomposed = rng.random_bool(0.5);
    let mut inst = random_got_instance(rng, decomposed);
    let mut f = inst.word.factors().to_vec();
    let dup = f[rng.random_range(0..f.len())].clone();
    f.insert(rng.random_range(0..=f.len()), dup);
    inst.word = Word::new(f);
    check_got_instance(&inst, mutation, None)
}

fn bch(n: usize) -> Result<GradedSeries, String> {
    let cfg = BchConfig::new(n, BchMethod::GotRecursion).map_err(|e| e.to_string())?;
    series::bch_recursion(&cfg).map_err(|e| e.to_string())
}

fn check_bch_equivalence(_: &mut ChaCha8Rng, _: Mutation) -> Result<(), String> {
    let z = bch(8)?;
    let p = series::product_exp_series(8).map_err(|e| e.to_string())?;
    ensure(z == p, || "recursion differs from exp(X)exp(Y)".into())
}

fn check_bch_oracles(_: &mut ChaCha8Rng, _: Mutation) -> Result<(), String> {
    for n in 1..=6 {
        let z = series::bch_log_oracle(n).map_err(|e| e.to_string())?;
        let e = exp_truncated(&z.total(), n).map_err(|e| e.to_string())?;
        ensure(e == series::product_exp_series(n).map_err(|e| e.to_string())?, || format!("exp(log) at {n}"))?;
        if n <= 5 {
            let cfg = BchConfig::new(n, BchMethod::ClassicalW).map_err(|e| e.to_string())?;
            let w = series::bch_classical_w(&cfg).map_err(|e| e.to_string())?;
            ensure(w == z, || format!("classical series differs at degree {n}"))?;
        }
    }
    Ok(())
}

fn check_bch_coefficients(_: &mut ChaCha8Rng, _: Mutation) -> Result<(), String> {
    let z = series::bch_log_oracle(3).map_err(|e| e.to_string())?;
    let (x, y) = (series::x(), series::y());
    let c = x.commutator(&y);
    ensure_eq(z.component(2), &c.scale(&rat(1, 2)), "degree 2")?;
    let third = &x.commutator(&c).scale(&rat(1, 12)) - &y.commutator(&c).scale(&rat(1, 12));
    ensure_eq(z.component(3), &third, "degree 3")
}

fn check_bernoulli(_: &mut ChaCha8Rng, _: Mutation) -> Result<(), String> {
    let b = series::BernoulliTable::new(16);
    for n in 1..=16usize {
        let mut acc = Scalar::zero();
        let mut binom = Scalar::one();
        for j in 0..=n {
            acc += &binom * b.get(j);
            binom *= rat((n + 1 - j) as i64, (j + 1) as i64);
        }
        ensure(acc.is_zero(), || format!("recurrence fails at {n}"))?;
        if n >= 3 && n % 2 == 1 {
            ensure(b.get(n).is_zero(), || format!("B_{n} != 0"))?;
        }
    }
    ensure(*b.get(1) == rat(-1, 2), || "B_1".into())
}

fn check_magnus(_: &mut ChaCha8Rng, _: Mutation) -> Result<(), String> {
    for m in 1..=3 {
        let cfg = MagnusConfig::new(m, 5, MagnusMethod::GotForm).map_err(|e| e.to_string())?;
        let got = series::magnus_got(&cfg).map_err(|e| e.to_string())?;
        let dyson = series::dyson_discrete(m, 5).map_err(|e| e.to_string())?;
        ensure(got == dyson, || format!("m = {m}"))?;
    }
    Ok(())
}

fn check_magnus_third_order(_: &mut ChaCha8Rng, _: Mutation) -> Result<(), String> {
    for m in 1..=3 {
        let r = series::magnus_third_order_residual(m);
        ensure(r.is_zero(), || format!("m = {m}: residual {r}"))?;
        let v = series::magnus_log_oracle(m, 3).map_err(|e| e.to_string())?;
        ensure_eq(v.component(3), &series::magnus_third_order_classical(m), "third-order exponent")?;
    }
    Ok(())
}

fn check_homomorphism(rng: &mut ChaCha8Rng, _: Mutation) -> Result<(), String> {
    let a = xyz();
    let (p, q) = (random_poly(rng, &a, 3, 4), random_poly(rng, &a, 3, 4));
    let dim = rng.random_range(2..=5);
    let r = matrep::random_representation(&a, dim, rng.random(), 0.3).map_err(|e| e.to_string())?;
    let ev = |p: &NcPoly| r.evaluate(p).map_err(|e| e.to_string());
    let (mp, mq) = (ev(&p)?, ev(&q)?);
    let prod = compare(&ev(&(&p * &q))?, &(&mp * &mq), 1e-12).map_err(|e| e.to_string())?;
    let sum = compare(&ev(&(&p + &q))?, &(&mp + &mq), 1e-12).map_err(|e| e.to_string())?;
    ensure(prod.pass && sum.pass, || format!("product {:e}, sum {:e}", prod.rel_diff, sum.rel_diff))
}

fn check_symbolic_numeric(rng: &mut ChaCha8Rng, _: Mutation) -> Result<(), String> {
    let decomposed = rng.random_bool(0.5);
    let inst = random_got_instance(rng, decomposed);
    check_got_instance(&inst, Mutation::None, Some(rng.random()))
}

fn check_truncation_scaling(rng: &mut ChaCha8Rng, _: Mutation) -> Result<(), String> {
    let z = series::bch_log_oracle(6).map_err(|e| e.to_string())?.total();
    let a = gens(&["X", "Y"]);
    let seed = rng.random();
    let residual = |eps: f64| -> Result<f64, String> {
        let r = matrep::random_representation(&a, 4, seed, eps).map_err(|e| e.to_string())?;
        matrep::bch_truncation_residual(&z, &r).map_err(|e| e.to_string())
    };
    let ratio = residual(0.05)? / residual(0.025)?;
    ensure((80.0..=200.0).contains(&ratio), || format!("ratio {ratio}"))
}

fn check_parse_round_trip(rng: &mut ChaCha8Rng, _: Mutation) -> Result<(), String> {
    let alphabet = vec![Generator::new("X"), Generator::timed("A", 2), Generator::new("x1").with_tag(Some("o1"))];
    let p = random_poly(rng, &alphabet, 3, 5);
    let back = exprparse::eval_str(&p.to_string(), &Env::new()).map_err(|e| e.to_string())?;
    ensure_eq(&back, &p, "display/parse")
}

fn check_parse_determinism(rng: &mut ChaCha8Rng, _: Mutation) -> Result<(), String> {
    let p = random_poly(rng, &xyz(), 3, 5);
    let src = format!("T[{p}] - [X, {p}] + exp(X;2)");
    let env = Env::standard();
    let a = exprparse::parse_str(&src, &env).map_err(|e| e.to_string())?;
    let b = exprparse::parse_str(&src, &env).map_err(|e| e.to_string())?;
    ensure(a == b, || format!("two parses of {src} differ"))
}

fn check_error_positions(rng: &mut ChaCha8Rng, _: Mutation) -> Result<(), String> {
    let p = random_poly(rng, &xyz(), 2, 3);
    let good = p.to_string();
    let lines = rng.random_range(0..3);
    let src = format!("{}{good} + )", "\n".repeat(lines));
    let err = exprparse::parse_str(&src, &Env::new()).err().ok_or("malformed input accepted")?;
    let line = lines + 1;
    let col = good.chars().count() + 4;
    ensure(err.pos.line == line && err.pos.col == col, || format!("{src:?}: reported {} not {line}:{col}", err.pos))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_passes() {
        let report = run_suite(&SuiteConfig { cases: 3, seed: 1, mutation: Mutation::None });
        for o in &report.outcomes {
            assert!(o.passed(), "{}: {:?}", o.name, o.first_failure);
        }
        assert_eq!(report.outcomes.len(), property_names().len());
    }

    #[test]
    fn mutant_is_caught() {
        let report = run_suite(&SuiteConfig { cases: 20, seed: 0, mutation: Mutation::NegateContraction });
        assert!(!report.passed());
        let names: Vec<_> = report.failed().map(|o| o.name).collect();
        assert!(names.contains(&"got_worked_example"));
        assert!(names.contains(&"got_random"));
    }

    #[test]
    fn deterministic_given_seed() {
        let cfg = SuiteConfig { cases: 5, seed: 9, mutation: Mutation::None };
        let a = run_property("got_random", &cfg).unwrap();
        let b = run_property("got_random", &cfg).unwrap();
        assert_eq!(a, b);
        assert!(run_property("missing", &cfg).is_none());
    }

    #[test]
    fn random_instances_verify() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for i in 0..40 {
            let inst = random_got_instance(&mut rng, i % 2 == 0);
            check_got_instance(&inst, Mutation::None, (i % 10 == 0).then_some(i as u64)).unwrap();
        }
    }
}
