use num_traits::{One, Zero};

use super::{NcAlgError, NcPoly, Scalar};

/// Truncated formal power series split into homogeneous components
/// `0..=max_degree`; component `d` only holds words of length `d`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GradedSeries {
    components: Vec<NcPoly>,
}

impl GradedSeries {
    pub fn zero(max_degree: usize) -> Self {
        GradedSeries { components: vec![NcPoly::zero(); max_degree + 1] }
    }

    /// Splits `p` by word length, dropping everything above `max_degree`.
    pub fn from_poly(p: &NcPoly, max_degree: usize) -> Self {
        let mut components = vec![NcPoly::zero(); max_degree + 1];
        for (w, c) in p.terms() {
            if w.len() <= max_degree {
                components[w.len()].add_term(w.clone(), c.clone());
            }
        }
        GradedSeries { components }
    }

    /// Builds a series from already-homogeneous components.
    pub fn from_components(components: Vec<NcPoly>) -> Result<Self, NcAlgError> {
        if components.is_empty() {
            return Err(NcAlgError::EmptySeries);
        }
        for (d, c) in components.iter().enumerate() {
            if !c.is_homogeneous(d) {
                return Err(NcAlgError::NotHomogeneous { degree: d });
            }
        }
        Ok(GradedSeries { components })
    }

    pub fn max_degree(&self) -> usize {
        self.components.len() - 1
    }

    pub fn component(&self, degree: usize) -> &NcPoly {
        &self.components[degree]
    }

    pub fn components(&self) -> &[NcPoly] {
        &self.components
    }

    /// Sum of all components.
    pub fn total(&self) -> NcPoly {
        self.components.iter().cloned().sum()
    }

    /// Cauchy product truncated at the smaller of the two degrees.
    pub fn mul(&self, other: &GradedSeries) -> GradedSeries {
        let n = self.max_degree().min(other.max_degree());
        GradedSeries::from_poly(&self.total().mul_truncated(&other.total(), n), n)
    }

    pub fn is_graded(&self) -> bool {
        self.components.iter().enumerate().all(|(d, c)| c.is_homogeneous(d))
    }
}

/// `sum_{k<=n} p^k / k!` truncated at degree `n`.
pub fn exp_truncated(p: &NcPoly, n: usize) -> Result<GradedSeries, NcAlgError> {
    if !p.constant_term().is_zero() {
        return Err(NcAlgError::NonzeroConstantTerm);
    }
    let p = p.truncate(n);
    let mut total = NcPoly::one();
    let mut power = NcPoly::one();
    for k in 1..=n {
        power = power.mul_truncated(&p, n).scale(&Scalar::new(1.into(), k.into()));
        if power.is_zero() {
            break;
        }
        total += &power;
    }
    Ok(GradedSeries::from_poly(&total, n))
}

/// `sum_{k=1}^{N} (-1)^{k+1} (s-1)^k / k` with `N = s.max_degree()`.
pub fn log_truncated(s: &GradedSeries) -> Result<GradedSeries, NcAlgError> {
    if !s.component(0).constant_term().is_one() {
        return Err(NcAlgError::NonUnitConstantTerm);
    }
    let n = s.max_degree();
    let x = &s.total() - &NcPoly::one();
    let mut total = NcPoly::zero();
    let mut power = NcPoly::one();
    for k in 1..=n {
        power = power.mul_truncated(&x, n);
        if power.is_zero() {
            break;
        }
        let sign: i64 = if k % 2 == 1 { 1 } else { -1 };
        total += &power.scale(&Scalar::new(sign.into(), (k as i64).into()));
    }
    Ok(GradedSeries::from_poly(&total, n))
}
