use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use ncorder_core::exprparse::{self, Env};
use ncorder_core::gotcore::{got_verify_with, Mutation};
use ncorder_core::matrep::{self, compare};
use ncorder_core::ncalg::serial::PolyDoc;
use ncorder_core::ncalg::{exp_truncated, log_truncated};
use ncorder_core::series::{self, BchConfig, BchMethod, MagnusConfig, MagnusMethod};
use ncorder_core::suite::{self, SuiteConfig};
use ncorder_core::{Decomposition, Generator, GradedSeries, MonomialOrdering, NcPoly, OrderingPair, OrderingRule, Scalar, Word};
use serde_json::{json, Value};

use crate::{BchArgs, Cli, Command, EvalArgs, GotCommand, MagnusArgs, Mutant, NumericArgs, OrderArgs, SuiteArgs, VerifyArgs};

pub struct Output {
    pub text: String,
    pub json: Value,
    pub ok: bool,
}

type CmdResult = Result<Output, String>;

pub fn run(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Eval(a) => cmd_eval(a),
        Command::Order(a) => cmd_order(a),
        Command::Got(GotCommand::Verify(a)) => cmd_got_verify(cli, a),
        Command::Bch(a) => cmd_bch(a),
        Command::Magnus(a) => cmd_magnus(a),
        Command::Numeric(a) => cmd_numeric(cli, a),
        Command::Suite(a) => cmd_suite(cli, a),
    }
}

fn poly_json(p: &NcPoly) -> Value {
    serde_json::to_value(PolyDoc::from(p)).expect("polynomial documents serialize")
}

fn compile(src: &str, env: &Env) -> Result<NcPoly, String> {
    exprparse::eval_str(src, env).map_err(|e| format!("in expression: {e}"))
}

fn cmd_eval(a: &EvalArgs) -> CmdResult {
    let mut env = Env::standard();
    if !a.symbols.is_empty() {
        let syms = a.symbols.iter().map(|s| label_generator(s, "x")).collect::<Result<Vec<_>, _>>()?;
        env.declare_symbols(syms);
    }
    let p = compile(&a.expr, &env)?;
    Ok(Output { text: format!("{p}\n"), json: json!({ "text": p.to_string(), "poly": poly_json(&p) }), ok: true })
}

fn cmd_order(a: &OrderArgs) -> CmdResult {
    let rule = OrderingRule::from_str(&a.rule).map_err(|e| e.to_string())?;
    let p = compile(&a.expr, &Env::standard())?;
    let out = rule.apply_poly(&p).map_err(|e| e.to_string())?;
    Ok(Output {
        text: format!("{out}\n"),
        json: json!({ "rule": a.rule, "text": out.to_string(), "poly": poly_json(&out) }),
        ok: true,
    })
}

/// Numeric labels `n` become `{prefix}n`; anything else is read as a generator.
fn label_generator(label: &str, prefix: &str) -> Result<Generator, String> {
    let label = label.trim();
    if !label.is_empty() && label.bytes().all(|b| b.is_ascii_digit()) {
        return Ok(Generator::new(&format!("{prefix}{label}")));
    }
    let p = exprparse::eval_str(label, &Env::new()).map_err(|e| format!("bad label `{label}`: {e}"))?;
    match p.terms().next() {
        Some((w, c)) if p.len() == 1 && w.len() == 1 && *c == Scalar::from_integer(1.into()) => Ok(w.factors()[0].clone()),
        _ => Err(format!("bad label `{label}`: expected a single generator")),
    }
}

fn parse_word(spec: &str) -> Result<Word, String> {
    let labels: Vec<&str> = spec.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if labels.is_empty() {
        return Err("empty word".into());
    }
    labels.into_iter().map(|l| label_generator(l, "x")).collect()
}

fn parse_rational(v: &Value) -> Result<Scalar, String> {
    match v {
        Value::String(s) => {
            let p = exprparse::eval_str(s, &Env::new()).map_err(|e| format!("bad entry `{s}`: {e}"))?;
            if p.degree().unwrap_or(0) != 0 {
                return Err(format!("bad entry `{s}`: not a number"));
            }
            Ok(p.constant_term())
        }
        Value::Number(n) => n.as_i64().map(|i| Scalar::from_integer(i.into())).ok_or_else(|| format!("bad entry {n}: use an integer or a \"p/q\" string")),
        other => Err(format!("bad entry {other}")),
    }
}

fn read_decomposition(path: &std::path::Path) -> Result<Decomposition, String> {
    let src = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let doc: BTreeMap<String, BTreeMap<String, Value>> =
        serde_json::from_str(&src).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut rows = Vec::new();
    let mut columns = Vec::new();
    for (alpha, row) in &doc {
        let mut entries = Vec::new();
        for (k, v) in row {
            let g = label_generator(k, "t")?;
            columns.push(g.clone());
            entries.push((g, parse_rational(v)?));
        }
        rows.push((label_generator(alpha, "x")?, entries));
    }
    Decomposition::from_rows(rows, columns).map_err(|e| format!("{}: {e}", path.display()))
}

fn monomial(spec: &str) -> Result<MonomialOrdering, String> {
    MonomialOrdering::from_str(spec).map_err(|e| e.to_string())
}

fn cmd_got_verify(cli: &Cli, a: &VerifyArgs) -> CmdResult {
    let pair = OrderingPair::new(monomial(&a.o)?, monomial(&a.oprime)?);
    let word = parse_word(&a.word)?;
    let d = match &a.l {
        Some(path) => read_decomposition(path)?,
        None => Decomposition::identity(word.iter().cloned()),
    };
    let rep = got_verify_with(&pair, &d, &word, Mutation::None).map_err(|e| e.to_string())?;
    let mut ok = rep.equal;

    let mut text = String::new();
    writeln!(text, "word: {}", rep.word).unwrap();
    writeln!(text, "orderings: {} vs {}", pair.o, pair.o_prime).unwrap();
    writeln!(text, "lhs: {}", rep.lhs).unwrap();
    writeln!(text, "rhs: {}", rep.rhs).unwrap();
    writeln!(text, "contractions:").unwrap();
    for c in &rep.contractions {
        writeln!(text, "  C[{},{}] = {}", c.alpha, c.beta, c.poly).unwrap();
    }
    writeln!(text, "equal: {}", rep.equal).unwrap();

    let mut json = json!({
        "word": rep.word.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
        "orderings": { "o": pair.o.to_string(), "oprime": pair.o_prime.to_string() },
        "lhs": poly_json(&rep.lhs),
        "rhs": poly_json(&rep.rhs),
        "equal": rep.equal,
        "contractions": rep.contractions.iter().map(|c| json!({
            "alpha": c.alpha.to_string(),
            "beta": c.beta.to_string(),
            "poly": poly_json(&c.poly),
        })).collect::<Vec<_>>(),
    });

    if a.numeric {
        let gens: Vec<Generator> = rep.lhs.generators().union(&rep.rhs.generators()).cloned().collect();
        let r = matrep::random_representation(&gens, cli.dim, cli.seed, cli.scale).map_err(|e| e.to_string())?;
        let lhs = r.evaluate(&rep.lhs).map_err(|e| e.to_string())?;
        let rhs = r.evaluate(&rep.rhs).map_err(|e| e.to_string())?;
        let c = compare(&lhs, &rhs, cli.tol).map_err(|e| e.to_string())?;
        ok &= c.pass;
        writeln!(text, "numeric: relative difference {:.3e} (tol {:e}, d = {}) {}", c.rel_diff, cli.tol, cli.dim, pass_word(c.pass)).unwrap();
        json["numeric"] = json!({ "dim": cli.dim, "seed": cli.seed, "scale": cli.scale, "rel_diff": c.rel_diff, "tol": cli.tol, "pass": c.pass });
    }
    Ok(Output { text, json, ok })
}

fn pass_word(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

struct Verdict {
    name: &'static str,
    equal: bool,
}

fn listing(label: &str, s: &GradedSeries, text: &mut String) -> Value {
    let mut comps = Vec::new();
    for (d, c) in s.components().iter().enumerate().skip(1) {
        writeln!(text, "{label}{d} = {c}").unwrap();
        comps.push(json!({ "degree": d, "text": c.to_string(), "poly": poly_json(c) }));
    }
    Value::Array(comps)
}

fn finish(mut text: String, mut json: Value, verdicts: &[Verdict]) -> Output {
    for v in verdicts {
        writeln!(text, "check {}: {}", v.name, pass_word(v.equal)).unwrap();
    }
    let ok = verdicts.iter().all(|v| v.equal);
    json["verdicts"] = verdicts.iter().map(|v| json!({ "check": v.name, "equal": v.equal })).collect();
    json["passed"] = Value::Bool(ok);
    Output { text, json, ok }
}

fn cmd_bch(a: &BchArgs) -> CmdResult {
    let method = BchMethod::from_str(&a.method).map_err(|e| e.to_string())?;
    let cfg = BchConfig::new(a.max_order, method).map_err(|e| e.to_string())?;
    let n = cfg.max_degree;
    let err = |e: series::SeriesError| e.to_string();
    let mut text = String::new();
    let mut json = json!({ "method": method.as_str(), "max_order": n });
    let mut verdicts = Vec::new();

    let exponent = match method {
        BchMethod::GotRecursion => {
            let z = series::bch_recursion(&cfg).map_err(err)?;
            writeln!(text, "# exp(X) exp(Y) = sum z_n").unwrap();
            json["components"] = listing("z", &z, &mut text);
            let exponent = log_truncated(&z).map_err(|e| e.to_string())?;
            if !a.no_verdict {
                verdicts.push(Verdict { name: "sum z_n = exp(X)exp(Y)", equal: z == series::product_exp_series(n).map_err(err)? });
                verdicts.push(Verdict { name: "log(sum z_n) = log oracle", equal: exponent == series::bch_log_oracle(n).map_err(err)? });
            }
            exponent
        }
        BchMethod::LogOracle => {
            let z = series::bch_log_oracle(n).map_err(err)?;
            if !a.no_verdict {
                let back = exp_truncated(&z.total(), n).map_err(|e| e.to_string())?;
                verdicts.push(Verdict { name: "exp(Z) = exp(X)exp(Y)", equal: back == series::product_exp_series(n).map_err(err)? });
            }
            z
        }
        BchMethod::ClassicalW => {
            let z = series::bch_classical_w(&cfg).map_err(err)?;
            if !a.no_verdict {
                verdicts.push(Verdict { name: "classical Z = log oracle", equal: z == series::bch_log_oracle(n).map_err(err)? });
            }
            z
        }
    };
    writeln!(text, "# Z = log(exp(X) exp(Y))").unwrap();
    json["exponent"] = listing("Z", &exponent, &mut text);
    Ok(finish(text, json, &verdicts))
}

fn cmd_magnus(a: &MagnusArgs) -> CmdResult {
    let method = MagnusMethod::from_str(&a.method).map_err(|e| e.to_string())?;
    let cfg = MagnusConfig::new(a.steps, a.max_order, method).map_err(|e| e.to_string())?;
    let (m, n) = (cfg.steps, cfg.max_degree);
    let err = |e: series::SeriesError| e.to_string();
    let mut text = String::new();
    let mut json = json!({ "method": method.as_str(), "steps": m, "max_order": n });
    let mut verdicts = Vec::new();
    let dyson = series::dyson_discrete(m, n).map_err(err)?;

    let exponent = match method {
        MagnusMethod::GotForm => {
            let z = series::magnus_got(&cfg).map_err(err)?;
            writeln!(text, "# exp(A@{m}) ... exp(A@1) = sum z_n").unwrap();
            json["components"] = listing("z", &z, &mut text);
            if !a.no_verdict {
                verdicts.push(Verdict { name: "sum z_n = Dyson product", equal: z == dyson });
            }
            log_truncated(&z).map_err(|e| e.to_string())?
        }
        MagnusMethod::LogOracle => {
            let v = series::magnus_log_oracle(m, n).map_err(err)?;
            if !a.no_verdict {
                let back = exp_truncated(&v.total(), n).map_err(|e| e.to_string())?;
                verdicts.push(Verdict { name: "exp(V) = Dyson product", equal: back == dyson });
            }
            v
        }
    };
    if !a.no_verdict {
        if method == MagnusMethod::GotForm {
            verdicts.push(Verdict { name: "log(sum z_n) = log oracle", equal: exponent == series::magnus_log_oracle(m, n).map_err(err)? });
        }
        if n >= 3 {
            verdicts.push(Verdict {
                name: "third order = nested-commutator grid sum",
                equal: *exponent.component(3) == series::magnus_third_order_classical(m),
            });
            verdicts.push(Verdict { name: "third-order residual vanishes", equal: series::magnus_third_order_residual(m).is_zero() });
        }
    }
    writeln!(text, "# V = log(Dyson product)").unwrap();
    json["exponent"] = listing("V", &exponent, &mut text);
    Ok(finish(text, json, &verdicts))
}

fn cmd_numeric(cli: &Cli, a: &NumericArgs) -> CmdResult {
    let cfg = BchConfig::new(a.max_order, BchMethod::LogOracle).map_err(|e| e.to_string())?;
    let z = series::bch_log_oracle(cfg.max_degree).map_err(|e| e.to_string())?.total();
    let gens = [Generator::new("X"), Generator::new("Y")];
    let scales = [cli.scale, cli.scale / 2.0];
    let mut residuals = Vec::new();
    for eps in scales {
        let r = matrep::random_representation(&gens, cli.dim, cli.seed, eps).map_err(|e| e.to_string())?;
        residuals.push(matrep::bch_truncation_residual(&z, &r).map_err(|e| e.to_string())?);
    }
    let ratio = residuals[0] / residuals[1];
    let nominal = 2f64.powi(cfg.max_degree as i32 + 1);
    let (lo, hi) = (nominal * 0.625, nominal * 1.5625);
    let ok = (lo..=hi).contains(&ratio);
    let mut text = String::new();
    for (eps, res) in scales.iter().zip(&residuals) {
        writeln!(text, "eps = {eps:e}: ||exp(X)exp(Y) - exp(Z<={})||_F = {res:.6e}", cfg.max_degree).unwrap();
    }
    writeln!(text, "ratio = {ratio:.3} (nominal {nominal}, accepted [{lo}, {hi}]) {}", pass_word(ok)).unwrap();
    let json = json!({
        "dim": cli.dim, "seed": cli.seed, "max_order": cfg.max_degree,
        "scales": scales, "residuals": residuals, "ratio": ratio,
        "nominal": nominal, "bounds": [lo, hi], "passed": ok,
    });
    Ok(Output { text, json, ok })
}

fn cmd_suite(cli: &Cli, a: &SuiteArgs) -> CmdResult {
    let mutation = match a.mutant {
        Some(Mutant::NegateContraction) => Mutation::NegateContraction,
        None => Mutation::None,
    };
    let cfg = SuiteConfig { cases: a.cases, seed: cli.seed, mutation };
    let outcomes = match &a.property {
        Some(name) => vec![suite::run_property(name, &cfg).ok_or_else(|| {
            format!("unknown property `{name}`; known: {}", suite::property_names().join(", "))
        })?],
        None => suite::run_suite(&cfg).outcomes,
    };
    let ok = outcomes.iter().all(|o| o.passed());
    let mut text = String::new();
    for o in &outcomes {
        writeln!(text, "{:<4} {:<10} {:<30} {}/{} cases", pass_word(o.passed()), o.module, o.name, o.cases - o.failures, o.cases).unwrap();
        if let Some(f) = &o.first_failure {
            writeln!(text, "     first failure: {f}").unwrap();
        }
    }
    let failed = outcomes.iter().filter(|o| !o.passed()).count();
    writeln!(text, "{} properties, {} failed", outcomes.len(), failed).unwrap();
    let json = json!({
        "cases": cfg.cases,
        "seed": cfg.seed,
        "passed": ok,
        "properties": outcomes.iter().map(|o| json!({
            "name": o.name, "module": o.module, "cases": o.cases,
            "failures": o.failures, "first_failure": o.first_failure,
        })).collect::<Vec<_>>(),
    });
    Ok(Output { text, json, ok })
}
