//! Baker-Campbell-Hausdorff and discrete-time Magnus expansions.
//!
//! Two families of results live here. The ordering-theorem forms produce the
//! Taylor components `z_n` of a product of exponentials through a single
//! first-order recursion driven by a directional derivative. The classical
//! forms (formal logarithm, Bernoulli `W` series, Dyson products) serve as
//! independent oracles for them.
//!
//! Magnus expansions use a piecewise-constant generator `A@1 .. A@m` on an
//! integer time grid; the Dyson solution is then the ordered product
//! `exp(A@m) ... exp(A@1)`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::gotcore::directional_derivative;
use crate::ncalg::{exp_truncated, log_truncated, Generator, GradedSeries, NcAlgError, NcPoly, Scalar, Word};

pub const DEFAULT_BCH_CAP: usize = 8;
pub const DEFAULT_MAGNUS_DEGREE_CAP: usize = 5;
pub const DEFAULT_MAGNUS_STEPS_CAP: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("degree {degree} exceeds the cap of {cap}")]
    DegreeCap { degree: usize, cap: usize },
    #[error("{steps} time steps exceed the cap of {cap}")]
    StepsCap { steps: usize, cap: usize },
    #[error("expansion degree must be at least 1")]
    ZeroDegree,
    #[error("at least one time step is required")]
    ZeroSteps,
    #[error("configuration selects method `{configured}` but `{requested}` was requested")]
    MethodMismatch { configured: &'static str, requested: &'static str },
    #[error("unknown method `{0}`")]
    UnknownMethod(String),
    #[error(transparent)]
    Algebra(#[from] NcAlgError),
}

pub fn x() -> NcPoly {
    NcPoly::var("X")
}

pub fn y() -> NcPoly {
    NcPoly::var("Y")
}

/// Time-labelled generator `A@s`.
pub fn a_at(s: i64) -> Generator {
    Generator::timed("A", s)
}

fn check_cap(degree: usize, cap: usize) -> Result<(), SeriesError> {
    if degree > cap {
        Err(SeriesError::DegreeCap { degree, cap })
    } else {
        Ok(())
    }
}

fn inv(n: usize) -> Scalar {
    Scalar::new(BigInt::one(), n.into())
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BchMethod {
    GotRecursion,
    LogOracle,
    ClassicalW,
}

impl BchMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            BchMethod::GotRecursion => "got",
            BchMethod::LogOracle => "log",
            BchMethod::ClassicalW => "classical",
        }
    }
}

impl FromStr for BchMethod {
    type Err = SeriesError;
    fn from_str(s: &str) -> Result<Self, SeriesError> {
        match s {
            "got" | "got_recursion" => Ok(BchMethod::GotRecursion),
            "log" | "log_oracle" => Ok(BchMethod::LogOracle),
            "classical" | "classical_w_series" => Ok(BchMethod::ClassicalW),
            other => Err(SeriesError::UnknownMethod(other.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BchConfig {
    pub max_degree: usize,
    pub method: BchMethod,
    pub cap: usize,
}

impl BchConfig {
    pub fn new(max_degree: usize, method: BchMethod) -> Result<Self, SeriesError> {
        BchConfig::with_cap(max_degree, method, DEFAULT_BCH_CAP)
    }

    pub fn with_cap(max_degree: usize, method: BchMethod, cap: usize) -> Result<Self, SeriesError> {
        if max_degree == 0 {
            return Err(SeriesError::ZeroDegree);
        }
        check_cap(max_degree, cap)?;
        Ok(BchConfig { max_degree, method, cap })
    }

    fn expect(&self, method: BchMethod) -> Result<(), SeriesError> {
        if self.method == method {
            Ok(())
        } else {
            Err(SeriesError::MethodMismatch { configured: self.method.as_str(), requested: method.as_str() })
        }
    }
}

/// Iterates `z_n = (1/n) E z_{n-1}` from `z_0 = 1`, where `E` is an
/// arbitrary linear operator raising degree by one.
fn exponential_recursion<F: Fn(&NcPoly) -> NcPoly>(max_degree: usize, step: F) -> GradedSeries {
    let mut comps = Vec::with_capacity(max_degree + 1);
    comps.push(NcPoly::one());
    for n in 1..=max_degree {
        let next = step(&comps[n - 1]).scale(&inv(n));
        comps.push(next);
    }
    GradedSeries::from_components(comps).expect("each step raises degree by exactly one")
}

/// Taylor components of `exp(X + Y + [X,Y] . d/dX)` acting on 1, i.e.
/// `z_n = (1/n)(X z + Y z + ([X,Y] . d/dX) z)` with `z = z_{n-1}`. Their sum
/// reproduces `exp(X) exp(Y)` degree by degree.
pub fn bch_recursion(cfg: &BchConfig) -> Result<GradedSeries, SeriesError> {
    cfg.expect(BchMethod::GotRecursion)?;
    let (x, y) = (x(), y());
    let xy = x.commutator(&y);
    let gx = Generator::new("X");
    let sum = &x + &y;
    Ok(exponential_recursion(cfg.max_degree, |z| &(&sum * z) + &directional_derivative(&xy, &gx, z)))
}

/// `exp(X) exp(Y)` truncated: degree `d` holds `sum_{k+l=d} X^k Y^l / (k! l!)`.
pub fn product_exp_series(n: usize) -> Result<GradedSeries, SeriesError> {
    check_cap(n, DEFAULT_BCH_CAP)?;
    let gx = Generator::new("X");
    let gy = Generator::new("Y");
    let mut comps = Vec::with_capacity(n + 1);
    for d in 0..=n {
        let mut c = NcPoly::zero();
        for k in 0..=d {
            let w: Word = std::iter::repeat_n(gx.clone(), k).chain(std::iter::repeat_n(gy.clone(), d - k)).collect();
            c.add_term(w, Scalar::new(BigInt::one(), factorial(k) * factorial(d - k)));
        }
        comps.push(c);
    }
    Ok(GradedSeries::from_components(comps)?)
}

/// `Z = log(exp(X) exp(Y))` truncated at degree `n`.
pub fn bch_log_oracle(n: usize) -> Result<GradedSeries, SeriesError> {
    Ok(log_truncated(&product_exp_series(n)?)?)
}

/// `W(X,Y) = sum_n B_n/n! ad_Y^n X`, split by degree (`ad_Y^n X` has degree `n+1`).
pub fn bch_w_series(max_degree: usize) -> GradedSeries {
    let b = BernoulliTable::new(max_degree);
    let mut comps = vec![NcPoly::zero(); max_degree + 1];
    for n in 0..max_degree {
        let coeff = b.get(n) / Scalar::from_integer(factorial(n));
        if !coeff.is_zero() {
            comps[n + 1] = NcPoly::ad_power(&y(), &x(), n).scale(&coeff);
        }
    }
    GradedSeries::from_components(comps).expect("ad powers are homogeneous")
}

/// `Z = sum_n 1/n! (W . d/dY)^n Y`, truncated at `cfg.max_degree`.
pub fn bch_classical_w(cfg: &BchConfig) -> Result<GradedSeries, SeriesError> {
    cfg.expect(BchMethod::ClassicalW)?;
    let n = cfg.max_degree;
    let w = bch_w_series(n).total();
    let gy = Generator::new("Y");
    let mut term = y();
    let mut total = y();
    for k in 1..=n {
        term = directional_derivative(&w, &gy, &term).truncate(n);
        if term.is_zero() {
            break;
        }
        total += &term.scale(&Scalar::new(BigInt::one(), factorial(k)));
    }
    Ok(GradedSeries::from_poly(&total, n))
}

/// Bernoulli numbers with `B_1 = -1/2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BernoulliTable {
    values: Vec<Scalar>,
}

impl BernoulliTable {
    /// `B_0 ..= B_n` from `sum_{j<=n} C(n+1, j) B_j = 0`.
    pub fn new(n: usize) -> Self {
        let mut values: Vec<Scalar> = Vec::with_capacity(n + 1);
        values.push(Scalar::one());
        for m in 1..=n {
            let mut acc = Scalar::zero();
            let mut binom = BigInt::one(); // C(m+1, j)
            for (j, bj) in values.iter().enumerate() {
                acc += bj * Scalar::from_integer(binom.clone());
                binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
            }
            values.push(-acc / Scalar::from_integer(BigInt::from(m + 1)));
        }
        BernoulliTable { values }
    }

    pub fn get(&self, n: usize) -> &Scalar {
        &self.values[n]
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }
}

pub fn bernoulli(n: usize) -> Scalar {
    BernoulliTable::new(n).get(n).clone()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MagnusMethod {
    GotForm,
    LogOracle,
}

impl MagnusMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            MagnusMethod::GotForm => "got",
            MagnusMethod::LogOracle => "log",
        }
    }
}

impl FromStr for MagnusMethod {
    type Err = SeriesError;
    fn from_str(s: &str) -> Result<Self, SeriesError> {
        match s {
            "got" | "got_form" => Ok(MagnusMethod::GotForm),
            "log" | "log_oracle" => Ok(MagnusMethod::LogOracle),
            other => Err(SeriesError::UnknownMethod(other.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MagnusConfig {
    pub steps: usize,
    pub max_degree: usize,
    pub method: MagnusMethod,
}

impl MagnusConfig {
    pub fn new(steps: usize, max_degree: usize, method: MagnusMethod) -> Result<Self, SeriesError> {
        MagnusConfig::with_caps(steps, max_degree, method, DEFAULT_MAGNUS_STEPS_CAP, DEFAULT_MAGNUS_DEGREE_CAP)
    }

    pub fn with_caps(
        steps: usize,
        max_degree: usize,
        method: MagnusMethod,
        steps_cap: usize,
        degree_cap: usize,
    ) -> Result<Self, SeriesError> {
        if steps == 0 {
            return Err(SeriesError::ZeroSteps);
        }
        if max_degree == 0 {
            return Err(SeriesError::ZeroDegree);
        }
        if steps > steps_cap {
            return Err(SeriesError::StepsCap { steps, cap: steps_cap });
        }
        check_cap(max_degree, degree_cap)?;
        Ok(MagnusConfig { steps, max_degree, method })
    }
}

/// `exp(A@m) ... exp(A@1)` truncated at degree `n`, latest time leftmost.
pub fn dyson_discrete(m: usize, n: usize) -> Result<GradedSeries, SeriesError> {
    if m == 0 {
        return Err(SeriesError::ZeroSteps);
    }
    let mut acc = GradedSeries::from_poly(&NcPoly::one(), n);
    for s in (1..=m as i64).rev() {
        acc = acc.mul(&exp_truncated(&NcPoly::generator(a_at(s)), n)?);
    }
    Ok(acc)
}

/// Taylor components of the ordering-theorem Magnus form on the grid:
/// `z_n = (1/n) E z_{n-1}` with
/// `E P = sum_s A_s P + sum_s sum_{u>s} ([A_u, A_s] . d/dA_u) P`.
pub fn magnus_got(cfg: &MagnusConfig) -> Result<GradedSeries, SeriesError> {
    if cfg.method != MagnusMethod::GotForm {
        return Err(SeriesError::MethodMismatch { configured: cfg.method.as_str(), requested: "got" });
    }
    let m = cfg.steps as i64;
    let sum: NcPoly = (1..=m).map(|s| NcPoly::generator(a_at(s))).sum();
    let mut contractions = Vec::new();
    for s in 1..=m {
        for u in s + 1..=m {
            let c = NcPoly::generator(a_at(u)).commutator(&NcPoly::generator(a_at(s)));
            contractions.push((a_at(u), c));
        }
    }
    Ok(exponential_recursion(cfg.max_degree, |z| {
        let mut next = &sum * z;
        for (target, c) in &contractions {
            next += &directional_derivative(c, target, z);
        }
        next
    }))
}

/// The Magnus exponent `V = log(Dyson product)`.
pub fn magnus_log_oracle(m: usize, n: usize) -> Result<GradedSeries, SeriesError> {
    Ok(log_truncated(&dyson_discrete(m, n)?)?)
}

/// Exact average of a product of Heaviside steps over unit grid cells.
///
/// Variable `i` is uniformly distributed in cell `cells[i]`; each `(a, b)` in
/// `later` asks for variable `a` to be strictly later than `b`. Variables in
/// different cells are ordered by their cells; the relative order of
/// variables sharing a cell is uniform over permutations.
pub fn cell_heaviside_weight(cells: &[i64], later: &[(usize, usize)]) -> Scalar {
    let n = cells.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let (mut admissible, mut hits) = (0u64, 0u64);
    loop {
        // perm[r] = variable with rank r (0 = earliest)
        let mut rank = vec![0usize; n];
        for (r, &v) in perm.iter().enumerate() {
            rank[v] = r;
        }
        let consistent = (0..n).all(|a| (0..n).all(|b| cells[a] <= cells[b] || rank[a] > rank[b]));
        if consistent {
            admissible += 1;
            if later.iter().all(|&(a, b)| rank[a] > rank[b]) {
                hits += 1;
            }
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Scalar::new(hits.into(), admissible.into())
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn grid_triple_sum<F>(m: usize, mut term: F) -> NcPoly
where
    F: FnMut([i64; 3], [NcPoly; 3]) -> NcPoly,
{
    let mut out = NcPoly::zero();
    let m = m as i64;
    for s in 1..=m {
        for u in 1..=m {
            for l in 1..=m {
                let gens = [s, u, l].map(|t| NcPoly::generator(a_at(t)));
                out += &term([s, u, l], gens);
            }
        }
    }
    out
}

// variable slots in the (s, u, l) triple sums below
const S: usize = 0;
const U: usize = 1;
const L: usize = 2;

/// Classical third-order Magnus term on the grid:
/// `1/6 sum (th_sl th_lu [[A_s,A_l],A_u] + th_su th_ul [A_s,[A_u,A_l]])`.
pub fn magnus_third_order_classical(m: usize) -> NcPoly {
    grid_triple_sum(m, |cells, [a_s, a_u, a_l]| {
        let w1 = cell_heaviside_weight(&cells, &[(S, L), (L, U)]);
        let w2 = cell_heaviside_weight(&cells, &[(S, U), (U, L)]);
        let t1 = a_s.commutator(&a_l).commutator(&a_u).scale(&w1);
        let t2 = a_s.commutator(&a_u.commutator(&a_l)).scale(&w2);
        (&t1 + &t2).scale(&inv(6))
    })
}

/// Leftover of the third-order comparison between the ordering-theorem
/// Magnus form and the classical series:
/// `sum 1/6 th_su th_ul [[A_s,A_l],A_u] + 1/12 th_su [A_l,[A_s,A_u]]`,
/// which must vanish identically.
pub fn magnus_third_order_residual(m: usize) -> NcPoly {
    grid_triple_sum(m, |cells, [a_s, a_u, a_l]| {
        let w1 = cell_heaviside_weight(&cells, &[(S, U), (U, L)]);
        let w2 = cell_heaviside_weight(&cells, &[(S, U)]);
        let t1 = a_s.commutator(&a_l).commutator(&a_u).scale(&(w1 * inv(6)));
        let t2 = a_l.commutator(&a_s.commutator(&a_u)).scale(&(w2 * inv(12)));
        &t1 + &t2
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncalg::rat;

    fn got_bch(n: usize) -> GradedSeries {
        bch_recursion(&BchConfig::new(n, BchMethod::GotRecursion).unwrap()).unwrap()
    }

    #[test]
    fn bernoulli_values() {
        let b = BernoulliTable::new(10);
        assert_eq!(*b.get(0), rat(1, 1));
        assert_eq!(*b.get(1), rat(-1, 2));
        assert_eq!(*b.get(2), rat(1, 6));
        assert_eq!(*b.get(4), rat(-1, 30));
        assert_eq!(*b.get(6), rat(1, 42));
        assert_eq!(*b.get(10), rat(5, 66));
        for k in 1..5 {
            assert!(b.get(2 * k + 1).is_zero());
        }
    }

    #[test]
    fn bch_first_orders() {
        let z = got_bch(3);
        assert_eq!(*z.component(1), &x() + &y());
        let s = &x() + &y();
        let c = x().commutator(&y());
        let expected = &(&(&s.pow(3) + &(&c * &s)) + &(&s * &c).scale(&rat(2, 1))) + &c.commutator(&y());
        assert_eq!(z.component(3).scale(&rat(6, 1)), expected);
    }

    #[test]
    fn bch_recursion_matches_product_of_exponentials() {
        assert_eq!(got_bch(6), product_exp_series(6).unwrap());
    }

    #[test]
    fn product_exp_low_degrees() {
        let p = product_exp_series(2).unwrap();
        assert_eq!(*p.component(1), &x() + &y());
        let expected = &(&(&x() * &x()).scale(&rat(1, 2)) + &(&x() * &y())) + &(&y() * &y()).scale(&rat(1, 2));
        assert_eq!(*p.component(2), expected);
    }

    #[test]
    fn log_oracle_low_degrees() {
        let z = bch_log_oracle(3).unwrap();
        let c = x().commutator(&y());
        assert_eq!(*z.component(2), c.scale(&rat(1, 2)));
        let expected = &x().commutator(&c).scale(&rat(1, 12)) - &y().commutator(&c).scale(&rat(1, 12));
        assert_eq!(*z.component(3), expected);
        let back = exp_truncated(&z.total(), 3).unwrap();
        assert_eq!(back, product_exp_series(3).unwrap());
    }

    #[test]
    fn w_series_degree_two() {
        let w = bch_w_series(2);
        assert_eq!(w.total(), &x() - &y().commutator(&x()).scale(&rat(1, 2)));
    }

    #[test]
    fn classical_matches_log_oracle() {
        for n in 1..=5 {
            let cfg = BchConfig::new(n, BchMethod::ClassicalW).unwrap();
            assert_eq!(bch_classical_w(&cfg).unwrap(), bch_log_oracle(n).unwrap(), "degree {n}");
        }
    }

    #[test]
    fn config_validation() {
        assert_eq!(
            BchConfig::new(9, BchMethod::GotRecursion),
            Err(SeriesError::DegreeCap { degree: 9, cap: 8 })
        );
        assert_eq!(BchConfig::new(0, BchMethod::GotRecursion), Err(SeriesError::ZeroDegree));
        let cfg = BchConfig::new(3, BchMethod::LogOracle).unwrap();
        assert!(matches!(bch_recursion(&cfg), Err(SeriesError::MethodMismatch { .. })));
        assert_eq!(MagnusConfig::new(4, 2, MagnusMethod::GotForm), Err(SeriesError::StepsCap { steps: 4, cap: 3 }));
        assert_eq!(MagnusConfig::new(0, 2, MagnusMethod::GotForm), Err(SeriesError::ZeroSteps));
        assert_eq!("classical".parse::<BchMethod>(), Ok(BchMethod::ClassicalW));
        assert!("nope".parse::<MagnusMethod>().is_err());
    }

    #[test]
    fn dyson_small_cases() {
        assert_eq!(dyson_discrete(1, 3).unwrap(), exp_truncated(&NcPoly::generator(a_at(1)), 3).unwrap());
        let d = dyson_discrete(2, 2).unwrap();
        let (a1, a2) = (NcPoly::generator(a_at(1)), NcPoly::generator(a_at(2)));
        let expected = &(&(&a2 * &a2).scale(&rat(1, 2)) + &(&a2 * &a1)) + &(&a1 * &a1).scale(&rat(1, 2));
        assert_eq!(*d.component(2), expected);
    }

    #[test]
    fn dyson_is_time_ordered_exponential() {
        let sum: NcPoly = (1..=3).map(|s| NcPoly::generator(a_at(s))).sum();
        let e = exp_truncated(&sum, 4).unwrap();
        let ordered = crate::ordering::MonomialOrdering::time().apply_poly(&e.total());
        assert_eq!(ordered, dyson_discrete(3, 4).unwrap().total());
    }

    #[test]
    fn magnus_got_matches_dyson() {
        for m in 1..=3 {
            let cfg = MagnusConfig::new(m, 5, MagnusMethod::GotForm).unwrap();
            assert_eq!(magnus_got(&cfg).unwrap(), dyson_discrete(m, 5).unwrap(), "m = {m}");
        }
    }

    #[test]
    fn magnus_log_low_orders() {
        let v = magnus_log_oracle(2, 2).unwrap();
        let (a1, a2) = (NcPoly::generator(a_at(1)), NcPoly::generator(a_at(2)));
        assert_eq!(*v.component(2), a2.commutator(&a1).scale(&rat(1, 2)));
        assert_eq!(magnus_log_oracle(1, 4).unwrap().total(), a1);
    }

    #[test]
    fn magnus_third_order_against_grid_sum() {
        for m in 1..=3 {
            let v = magnus_log_oracle(m, 3).unwrap();
            assert_eq!(*v.component(3), magnus_third_order_classical(m), "m = {m}");
        }
    }

    #[test]
    fn third_order_residual_vanishes() {
        for m in 1..=3 {
            assert!(magnus_third_order_residual(m).is_zero(), "m = {m}");
        }
    }

    #[test]
    fn strict_grid_steps_leave_a_residual() {
        // Same sum with integer steps [a > b] instead of cell averages.
        let strict = grid_triple_sum(2, |[s, u, l], [a_s, a_u, a_l]| {
            let t1 = if s > u && u > l { a_s.commutator(&a_l).commutator(&a_u).scale(&inv(6)) } else { NcPoly::zero() };
            let t2 = if s > u { a_l.commutator(&a_s.commutator(&a_u)).scale(&inv(12)) } else { NcPoly::zero() };
            &t1 + &t2
        });
        assert!(!strict.is_zero());
    }

    #[test]
    fn heaviside_weights() {
        assert_eq!(cell_heaviside_weight(&[2, 1], &[(0, 1)]), rat(1, 1));
        assert_eq!(cell_heaviside_weight(&[1, 1], &[(0, 1)]), rat(1, 2));
        assert_eq!(cell_heaviside_weight(&[1, 1, 1], &[(0, 1), (1, 2)]), rat(1, 6));
        assert_eq!(cell_heaviside_weight(&[2, 1, 1], &[(0, 1), (1, 2)]), rat(1, 2));
        assert_eq!(cell_heaviside_weight(&[1, 2], &[(0, 1)]), rat(0, 1));
    }
}
