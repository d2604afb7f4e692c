//! Acceptance criteria, one line each. Exits nonzero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use ncorder_core::exprparse::{eval_str, Env};
use ncorder_core::gotcore::{contraction_general, got_verify, Decomposition, OrderingPair};
use ncorder_core::matrep;
use ncorder_core::ncalg::rat;
use ncorder_core::series::{self, BchConfig, BchMethod, MagnusConfig, MagnusMethod};
use ncorder_core::suite::{self, check_got_instance, random_got_instance, SuiteConfig};
use ncorder_core::{Generator, MonomialOrdering, NcPoly, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check, Duration);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn p(src: &str) -> NcPoly {
    eval_str(src, &Env::standard()).expect("fixture expression")
}

fn g(id: &str) -> Generator {
    Generator::new(id)
}

fn worked_example() -> Check {
    let pair = OrderingPair::new(MonomialOrdering::time(), MonomialOrdering::anti_time());
    let omega = [g("x1"), g("x2"), g("x3")];
    let d = Decomposition::identity(omega.clone());
    let rep = got_verify(&pair, &d, &omega.iter().cloned().collect()).map_err(|e| e.to_string())?;
    ensure(rep.equal, "sides differ")?;
    ensure(rep.lhs == p("x3*x2*x1") && rep.rhs == p("x3*x2*x1"), format!("lhs {} rhs {}", rep.lhs, rep.rhs))?;
    for (a, b) in [("x1", "x2"), ("x1", "x3"), ("x2", "x3")] {
        let c = rep.contractions.iter().find(|c| c.alpha == g(a) && c.beta == g(b)).ok_or("missing contraction")?;
        ensure(c.poly == p(&format!("-[{a},{b}]")), format!("C[{a},{b}] = {}", c.poly))?;
    }
    Ok("x3*x2*x1 on both sides; C12, C13, C23 = -[phi_a, phi_b]".into())
}

fn decomposed_example() -> Check {
    let pair = OrderingPair::new(MonomialOrdering::alpha(), MonomialOrdering::time());
    let (a, b, t1, t2) = (g("A"), g("B"), g("t1"), g("t2"));
    let word: Word = [a.clone(), b.clone()].into_iter().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let nonzero = |rng: &mut ChaCha8Rng| loop {
        let q = rat(rng.random_range(-9..=9), rng.random_range(1..=7));
        if q != rat(0, 1) {
            return q;
        }
    };
    for i in 0..20 {
        let rows = vec![
            (a.clone(), vec![(t1.clone(), nonzero(&mut rng)), (t2.clone(), nonzero(&mut rng))]),
            (b.clone(), vec![(t1.clone(), nonzero(&mut rng)), (t2.clone(), nonzero(&mut rng))]),
        ];
        let d = Decomposition::from_rows(rows, []).map_err(|e| e.to_string())?;
        let rep = got_verify(&pair, &d, &word).map_err(|e| e.to_string())?;
        ensure(rep.equal, format!("matrix {i}: {} != {}", rep.lhs, rep.rhs))?;
        let c21 = contraction_general(&pair, &d, &t2, &t1, &a, &b).map_err(|e| e.to_string())?;
        ensure(c21 == p("-[t2,t1]"), format!("matrix {i}: c_21,AB = {c21}"))?;
    }
    Ok("20 random 2x2 L exact; c_21,AB = -[t2,t1] in the L_A2 L_B1 branch".into())
}

fn bch_third_order() -> Check {
    let z = series::bch_recursion(&BchConfig::new(3, BchMethod::GotRecursion).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let six_z3 = z.component(3).scale(&rat(6, 1));
    let expected = p("(X+Y)*(X+Y)*(X+Y) + [X,Y]*(X+Y) + 2*(X+Y)*[X,Y] + [[X,Y],Y]");
    ensure(six_z3 == expected, format!("3! z3 = {six_z3}"))?;
    let prod = series::product_exp_series(3).map_err(|e| e.to_string())?;
    ensure(six_z3 == prod.component(3).scale(&rat(6, 1)), "differs from exp(X)exp(Y)")?;
    Ok("3! z3 matches the closed form and exp(X)exp(Y)".into())
}

fn bch_full() -> Check {
    let z = series::bch_recursion(&BchConfig::new(8, BchMethod::GotRecursion).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let prod = series::product_exp_series(8).map_err(|e| e.to_string())?;
    ensure(z == prod, "recursion differs from exp(X)exp(Y) through degree 8")?;
    let top = z.component(8).len();
    ensure(top == 9, format!("{top} ordered words at degree 8"))?;
    let unordered = p("X + Y").pow(8).len();
    ensure(unordered == 256, format!("{unordered} words in (X+Y)^8"))?;
    let log = series::bch_log_oracle(3).map_err(|e| e.to_string())?;
    ensure(*log.component(2) == p("1/2*[X,Y]"), "degree 2")?;
    ensure(*log.component(3) == p("1/12*[X,[X,Y]] - 1/12*[Y,[X,Y]]"), "degree 3")?;
    for n in 1..=5 {
        let cfg = BchConfig::new(n, BchMethod::ClassicalW).map_err(|e| e.to_string())?;
        let w = series::bch_classical_w(&cfg).map_err(|e| e.to_string())?;
        ensure(w == series::bch_log_oracle(n).map_err(|e| e.to_string())?, format!("classical series at {n}"))?;
    }
    Ok("degree 8 exact (256 words of (X+Y)^8 ordered to 9); 1/2, 1/12, -1/12; classical = log through 5".into())
}

fn magnus() -> Check {
    for n in 1..=5 {
        let cfg = MagnusConfig::new(3, n, MagnusMethod::GotForm).map_err(|e| e.to_string())?;
        let got = series::magnus_got(&cfg).map_err(|e| e.to_string())?;
        ensure(got == series::dyson_discrete(3, n).map_err(|e| e.to_string())?, format!("N = {n}"))?;
    }
    let r = series::magnus_third_order_residual(3);
    ensure(r.is_zero(), format!("third-order residual {r}"))?;
    let v3 = series::magnus_log_oracle(3, 3).map_err(|e| e.to_string())?;
    ensure(*v3.component(3) == series::magnus_third_order_classical(3), "third-order exponent")?;
    Ok("m = 3, N <= 5 equals Dyson; third-order leftover vanishes".into())
}

fn randomized_got() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let numeric: Vec<usize> = {
        let mut picks = Vec::new();
        while picks.len() < 10 {
            let i = rng.random_range(0..200);
            if !picks.contains(&i) {
                picks.push(i);
            }
        }
        picks
    };
    let mut repeated = 0;
    for i in 0..200 {
        let inst = random_got_instance(&mut rng, i % 2 == 1);
        let w = inst.word.factors();
        if (0..w.len()).any(|a| w[a + 1..].contains(&w[a])) {
            repeated += 1;
        }
        check_got_instance(&inst, Default::default(), numeric.contains(&i).then_some(i as u64))
            .map_err(|e| format!("instance {i}: {e}"))?;
    }
    ensure(repeated > 0, "no repeated-index word drawn")?;
    Ok(format!("200 exact (100 with L, {repeated} with repeated indices); 10 numeric at d = 4, tol 1e-12"))
}

fn truncation_scaling() -> Check {
    let z = series::bch_log_oracle(6).map_err(|e| e.to_string())?.total();
    let gens = [g("X"), g("Y")];
    let residual = |eps: f64| -> Result<f64, String> {
        let r = matrep::random_representation(&gens, 4, 0, eps).map_err(|e| e.to_string())?;
        matrep::bch_truncation_residual(&z, &r).map_err(|e| e.to_string())
    };
    let (big, small) = (residual(0.05)?, residual(0.025)?);
    let ratio = big / small;
    ensure((80.0..=200.0).contains(&ratio), format!("ratio {ratio}"))?;
    Ok(format!("residual {big:.3e} -> {small:.3e}, ratio {ratio:.2}"))
}

fn calculus() -> Check {
    let cfg = SuiteConfig { cases: 100, seed: 8, ..Default::default() };
    let names = [
        "leibniz_rule",
        "chain_rule",
        "derivative_commutator_delta",
        "push_lemma",
        "theta_decomposition",
        "jacobi",
    ];
    for name in names {
        let o = suite::run_property(name, &cfg).ok_or(format!("unknown property {name}"))?;
        ensure(o.cases >= 100 && o.passed(), format!("{name}: {:?}", o.first_failure))?;
    }
    Ok(format!("{} properties x 100 cases", names.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 worked example", worked_example, Duration::from_millis(100)),
        ("2 decomposed example", decomposed_example, Duration::from_secs(1)),
        ("3 BCH third order", bch_third_order, Duration::from_millis(100)),
        ("4 BCH full", bch_full, Duration::from_secs(10)),
        ("5 Magnus discrete", magnus, Duration::from_secs(30)),
        ("6 randomized ordering theorem", randomized_got, Duration::from_secs(60)),
        ("7 numerical truncation scaling", truncation_scaling, Duration::from_secs(1)),
        ("8 calculus properties", calculus, Duration::from_secs(10)),
    ];
    let mut failed = 0;
    for (name, check, limit) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let (ok, detail) = match result {
            Ok(d) if elapsed <= limit => (true, d),
            Ok(d) => (false, format!("{d}; too slow (limit {limit:?})")),
            Err(e) => (false, e),
        };
        failed += usize::from(!ok);
        println!("{} {name} [{elapsed:.2?}]: {detail}", if ok { "PASS" } else { "FAIL" });
    }
    println!("{} of 8 criteria passed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
