//! Evaluation of free-algebra polynomials in random complex matrix
//! representations, with matrix exponentials as ground truth.

use std::collections::BTreeMap;

use nalgebra::{Complex, DMatrix};
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::ncalg::{Generator, NcPoly, Scalar};

pub type C64 = Complex<f64>;
pub type Matrix = DMatrix<C64>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatrepError {
    #[error("dimension {0} is too small (need at least 2)")]
    DimensionTooSmall(usize),
    #[error("scale must be positive and finite, got {0}")]
    BadScale(f64),
    #[error("generator `{0}` has no assigned matrix")]
    Unassigned(Generator),
    #[error("shape mismatch: {0:?} vs {1:?}")]
    ShapeMismatch((usize, usize), (usize, usize)),
    #[error("no non-commuting draw found after {0} attempts")]
    Degenerate(u32),
}

const MAX_REDRAWS: u32 = 64;

/// Seeded assignment of a complex matrix to each generator.
#[derive(Clone, Debug)]
pub struct Representation {
    dim: usize,
    seed: u64,
    scale: f64,
    redraws: u32,
    assignments: BTreeMap<Generator, Matrix>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RepresentationOptions {
    /// Permit `d = 1`, where every assignment commutes.
    pub allow_scalar: bool,
    /// Redraw until at least one pair of assigned matrices fails to commute.
    pub reject_commuting: bool,
}

impl Default for RepresentationOptions {
    fn default() -> Self {
        RepresentationOptions { allow_scalar: false, reject_commuting: true }
    }
}

pub fn random_representation<'a, I>(generators: I, dim: usize, seed: u64, eps: f64) -> Result<Representation, MatrepError>
where
    I: IntoIterator<Item = &'a Generator>,
{
    random_representation_with(generators, dim, seed, eps, RepresentationOptions::default())
}

pub fn random_representation_with<'a, I>(
    generators: I,
    dim: usize,
    seed: u64,
    eps: f64,
    opts: RepresentationOptions,
) -> Result<Representation, MatrepError>
where
    I: IntoIterator<Item = &'a Generator>,
{
    if dim == 0 || (dim < 2 && !opts.allow_scalar) {
        return Err(MatrepError::DimensionTooSmall(dim));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(MatrepError::BadScale(eps));
    }
    let gens: Vec<Generator> = generators.into_iter().cloned().collect();
    let check = opts.reject_commuting && dim >= 2 && gens.len() >= 2;
    for redraw in 0..MAX_REDRAWS {
        let sub_seed = seed.wrapping_add((redraw as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let mut rng = ChaCha8Rng::seed_from_u64(sub_seed);
        let assignments: BTreeMap<Generator, Matrix> =
            gens.iter().map(|g| (g.clone(), random_matrix(&mut rng, dim, eps))).collect();
        if check && !has_noncommuting_pair(&assignments, eps) {
            continue;
        }
        return Ok(Representation { dim, seed, scale: eps, redraws: redraw, assignments });
    }
    Err(MatrepError::Degenerate(MAX_REDRAWS))
}

fn random_matrix(rng: &mut ChaCha8Rng, dim: usize, eps: f64) -> Matrix {
    let m = Matrix::from_fn(dim, dim, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    let norm = spectral_norm(&m);
    if norm == 0.0 {
        return m;
    }
    m.scale(eps / norm)
}

fn has_noncommuting_pair(assignments: &BTreeMap<Generator, Matrix>, eps: f64) -> bool {
    let mats: Vec<&Matrix> = assignments.values().collect();
    mats.iter().enumerate().any(|(i, a)| {
        mats[i + 1..].iter().any(|b| (*a * *b - *b * *a).norm() >= 1e-6 * eps * eps)
    })
}

pub fn spectral_norm(m: &Matrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().singular_values().max()
}

impl Representation {
    /// Builds a representation from explicit matrices, all of dimension `dim`.
    pub fn from_assignments(dim: usize, assignments: BTreeMap<Generator, Matrix>) -> Result<Self, MatrepError> {
        for m in assignments.values() {
            if m.shape() != (dim, dim) {
                return Err(MatrepError::ShapeMismatch((dim, dim), m.shape()));
            }
        }
        let scale = assignments.values().map(spectral_norm).fold(0.0, f64::max);
        Ok(Representation { dim, seed: 0, scale, redraws: 0, assignments })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Number of degenerate draws discarded before this one.
    pub fn redraws(&self) -> u32 {
        self.redraws
    }

    pub fn get(&self, g: &Generator) -> Option<&Matrix> {
        self.assignments.get(g)
    }

    pub fn assignments(&self) -> &BTreeMap<Generator, Matrix> {
        &self.assignments
    }

    pub fn evaluate(&self, p: &NcPoly) -> Result<Matrix, MatrepError> {
        evaluate(p, self)
    }
}

fn to_f64(q: &Scalar) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Sum of coefficient times the product of assigned matrices in word order.
pub fn evaluate(p: &NcPoly, r: &Representation) -> Result<Matrix, MatrepError> {
    let d = r.dim;
    let mut out = Matrix::zeros(d, d);
    for (w, c) in p.terms() {
        let mut prod = Matrix::identity(d, d);
        for g in w.iter() {
            let m = r.get(g).ok_or_else(|| MatrepError::Unassigned(g.clone()))?;
            prod = &prod * m;
        }
        out += prod.scale(to_f64(c));
    }
    Ok(out)
}

fn one_norm(m: &Matrix) -> f64 {
    m.column_iter().map(|c| c.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// `exp(M) - I` by scaling and squaring a Taylor series.
///
/// Working with `exp(M) - I` avoids cancelling against the identity, which
/// keeps relative accuracy for small `M`; squaring uses
/// `exp(2A) - I = 2(exp(A) - I) + (exp(A) - I)^2`.
pub fn matrix_expm1(m: &Matrix) -> Matrix {
    let n = m.nrows();
    let norm = one_norm(m);
    let mut squarings = 0u32;
    if norm > 0.5 {
        squarings = (norm / 0.5).log2().ceil() as u32;
    }
    let a = m.scale(0.5f64.powi(squarings as i32));
    let mut term = a.clone();
    let mut e = a.clone();
    for k in 2..=30 {
        term = &term * &a / C64::new(k as f64, 0.0);
        let size = one_norm(&term);
        e += &term;
        if size <= f64::EPSILON * one_norm(&e) * 1e-3 || size == 0.0 {
            break;
        }
    }
    for _ in 0..squarings {
        e = e.scale(2.0) + &e * &e;
    }
    debug_assert_eq!(e.nrows(), n);
    e
}

pub fn matrix_exp(m: &Matrix) -> Matrix {
    matrix_expm1(m) + Matrix::identity(m.nrows(), m.ncols())
}

/// `||exp(X) exp(Y) - exp(Z)||_F` for a truncated exponent `Z`.
///
/// Computed from `exp(.) - I` pieces so that the identity parts cancel
/// exactly and only the truncation error remains.
pub fn bch_truncation_residual(z: &NcPoly, r: &Representation) -> Result<f64, MatrepError> {
    let x = r.evaluate(&NcPoly::var("X"))?;
    let y = r.evaluate(&NcPoly::var("Y"))?;
    let zm = r.evaluate(z)?;
    let (ex, ey, ez) = (matrix_expm1(&x), matrix_expm1(&y), matrix_expm1(&zm));
    let lhs = &ex + &ey + &ex * &ey;
    Ok((lhs - ez).norm())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CompareReport {
    /// `||A - B||_F`.
    pub abs_diff: f64,
    /// `abs_diff / max(1, ||A||_F)`.
    pub rel_diff: f64,
    pub tol: f64,
    pub pass: bool,
}

pub fn compare(a: &Matrix, b: &Matrix, tol: f64) -> Result<CompareReport, MatrepError> {
    if a.shape() != b.shape() {
        return Err(MatrepError::ShapeMismatch(a.shape(), b.shape()));
    }
    let abs_diff = (a - b).norm();
    let rel_diff = abs_diff / a.norm().max(1.0);
    Ok(CompareReport { abs_diff, rel_diff, tol, pass: rel_diff <= tol })
}
