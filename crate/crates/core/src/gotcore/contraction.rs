use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Mutex;

use num_traits::{One, Zero};

use super::GotError;
use crate::ncalg::{Generator, NcPoly, Scalar};
use crate::ordering::MonomialOrdering;

/// The two rules being related: `o` orders the input generators, `o_prime`
/// orders the decomposition generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderingPair {
    pub o: MonomialOrdering,
    pub o_prime: MonomialOrdering,
}

impl OrderingPair {
    pub fn new(o: MonomialOrdering, o_prime: MonomialOrdering) -> Self {
        OrderingPair { o, o_prime }
    }
}

/// Linear decomposition of each input generator (index set `omega`) over the
/// generators that `o_prime` orders (index set `omega_prime`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    omega: BTreeSet<Generator>,
    omega_prime: BTreeSet<Generator>,
    rows: BTreeMap<Generator, BTreeMap<Generator, Scalar>>,
    identity: bool,
}

impl Decomposition {
    /// `L = delta` on the given index set.
    pub fn identity<I: IntoIterator<Item = Generator>>(omega: I) -> Self {
        let omega: BTreeSet<Generator> = omega.into_iter().collect();
        let rows = omega
            .iter()
            .map(|g| (g.clone(), BTreeMap::from([(g.clone(), Scalar::one())])))
            .collect();
        Decomposition { omega_prime: omega.clone(), omega, rows, identity: true }
    }

    /// Builds `L` from explicit rows. Zero entries are dropped; a row with no
    /// nonzero entry is rejected. `omega_prime` is the union of the row
    /// supports plus any extra columns given.
    pub fn from_rows<R, C>(rows: R, extra_columns: C) -> Result<Self, GotError>
    where
        R: IntoIterator<Item = (Generator, Vec<(Generator, Scalar)>)>,
        C: IntoIterator<Item = Generator>,
    {
        let mut out_rows = BTreeMap::new();
        let mut omega_prime: BTreeSet<Generator> = extra_columns.into_iter().collect();
        for (alpha, entries) in rows {
            let mut row = BTreeMap::new();
            for (k, c) in entries {
                omega_prime.insert(k.clone());
                if !c.is_zero() {
                    *row.entry(k).or_insert_with(Scalar::zero) += c;
                }
            }
            row.retain(|_, c: &mut Scalar| !c.is_zero());
            if row.is_empty() {
                return Err(GotError::ZeroRow(alpha));
            }
            if out_rows.insert(alpha.clone(), row).is_some() {
                return Err(GotError::DuplicateRow(alpha));
            }
        }
        if out_rows.is_empty() {
            return Err(GotError::EmptyDecomposition);
        }
        let omega: BTreeSet<Generator> = out_rows.keys().cloned().collect();
        let identity = omega == omega_prime
            && out_rows.iter().all(|(a, row)| row.len() == 1 && row.get(a).is_some_and(One::is_one));
        Ok(Decomposition { omega, omega_prime, rows: out_rows, identity })
    }

    pub fn is_identity(&self) -> bool {
        self.identity
    }

    pub fn omega(&self) -> &BTreeSet<Generator> {
        &self.omega
    }

    pub fn omega_prime(&self) -> &BTreeSet<Generator> {
        &self.omega_prime
    }

    /// `L[alpha][k]`, zero when absent.
    pub fn entry(&self, alpha: &Generator, k: &Generator) -> Scalar {
        self.rows.get(alpha).and_then(|r| r.get(k)).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Nonzero entries of row `alpha`.
    pub fn row(&self, alpha: &Generator) -> Result<&BTreeMap<Generator, Scalar>, GotError> {
        self.rows.get(alpha).ok_or_else(|| GotError::OutsideOmega(alpha.clone()))
    }

    /// `phi_alpha` written in terms of the decomposition generators.
    pub fn expand_generator(&self, alpha: &Generator) -> Result<NcPoly, GotError> {
        Ok(NcPoly::from_terms(
            self.row(alpha)?.iter().map(|(k, c)| (crate::ncalg::Word::new(vec![k.clone()]), c.clone())),
        ))
    }

    /// Substitutes every input generator by its expansion.
    pub fn expand(&self, p: &NcPoly) -> Result<NcPoly, GotError> {
        let mut out = NcPoly::zero();
        for (w, c) in p.terms() {
            let mut acc = NcPoly::constant(c.clone());
            for g in w.iter() {
                acc = &acc * &self.expand_generator(g)?;
            }
            out += &acc;
        }
        Ok(out)
    }

    fn check_omega(&self, g: &Generator) -> Result<(), GotError> {
        if self.omega.contains(g) {
            Ok(())
        } else {
            Err(GotError::OutsideOmega(g.clone()))
        }
    }

    fn check_omega_prime(&self, g: &Generator) -> Result<(), GotError> {
        if self.omega_prime.contains(g) {
            Ok(())
        } else {
            Err(GotError::OutsideOmegaPrime(g.clone()))
        }
    }
}

/// `C_ab = (theta'_{b>a} - theta_{b>a}) [phi_a, phi_b]` for a shared index set.
pub fn contraction_same(
    pair: &OrderingPair,
    d: &Decomposition,
    a: &Generator,
    b: &Generator,
) -> Result<NcPoly, GotError> {
    if !d.is_identity() {
        return Err(GotError::NotSameSet);
    }
    d.check_omega(a)?;
    d.check_omega(b)?;
    Ok(same_set_contraction(pair, a, b))
}

pub(crate) fn same_set_contraction(pair: &OrderingPair, a: &Generator, b: &Generator) -> NcPoly {
    let coeff = pair.o_prime.theta(b, a) - pair.o.theta(b, a);
    if coeff.is_zero() {
        return NcPoly::zero();
    }
    NcPoly::generator(a.clone()).commutator(&NcPoly::generator(b.clone())).scale(&coeff)
}

/// `c_{kl,ab} = (theta'_{l>k} - theta_{b>a}) [theta_k, theta_l]`, where `k`
/// comes from the expansion of `phi_a` and `l` from that of `phi_b`.
pub fn contraction_general(
    pair: &OrderingPair,
    d: &Decomposition,
    k: &Generator,
    l: &Generator,
    a: &Generator,
    b: &Generator,
) -> Result<NcPoly, GotError> {
    d.check_omega_prime(k)?;
    d.check_omega_prime(l)?;
    d.check_omega(a)?;
    d.check_omega(b)?;
    let coeff = pair.o_prime.theta(l, k) - pair.o.theta(b, a);
    if coeff.is_zero() || k == l {
        return Ok(NcPoly::zero());
    }
    Ok(NcPoly::generator(k.clone()).commutator(&NcPoly::generator(l.clone())).scale(&coeff))
}

/// `C_ab = sum_{k,l} L_ak L_bl c_{kl,ab}`.
pub fn contraction_matrix(
    pair: &OrderingPair,
    d: &Decomposition,
    a: &Generator,
    b: &Generator,
) -> Result<NcPoly, GotError> {
    let mut out = NcPoly::zero();
    for (k, lak) in d.row(a)? {
        for (l, lbl) in d.row(b)? {
            let c = contraction_general(pair, d, k, l, a, b)?;
            if !c.is_zero() {
                out += &c.scale(&(lak * lbl));
            }
        }
    }
    Ok(out)
}

/// One row of a rendered contraction table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionEntry {
    pub alpha: Generator,
    pub beta: Generator,
    pub poly: NcPoly,
}

/// Lazily filled `C_ab` table for a fixed pair and decomposition.
#[derive(Debug)]
pub struct ContractionTable<'a> {
    pair: &'a OrderingPair,
    d: &'a Decomposition,
    cache: Mutex<HashMap<(Generator, Generator), NcPoly>>,
}

impl<'a> ContractionTable<'a> {
    pub fn new(pair: &'a OrderingPair, d: &'a Decomposition) -> Self {
        ContractionTable { pair, d, cache: Mutex::new(HashMap::new()) }
    }

    pub fn get(&self, a: &Generator, b: &Generator) -> Result<NcPoly, GotError> {
        let key = (a.clone(), b.clone());
        if let Some(p) = self.cache.lock().expect("contraction cache poisoned").get(&key) {
            return Ok(p.clone());
        }
        let p = if self.d.is_identity() {
            contraction_same(self.pair, self.d, a, b)?
        } else {
            contraction_matrix(self.pair, self.d, a, b)?
        };
        self.cache.lock().expect("contraction cache poisoned").insert(key, p.clone());
        Ok(p)
    }

    /// Entries `a < b` (canonical generator order) over `omega`.
    pub fn entries(&self) -> Result<Vec<ContractionEntry>, GotError> {
        let omega: Vec<&Generator> = self.d.omega().iter().collect();
        let mut out = Vec::new();
        for (i, a) in omega.iter().enumerate() {
            for b in &omega[i + 1..] {
                out.push(ContractionEntry { alpha: (*a).clone(), beta: (*b).clone(), poly: self.get(a, b)? });
            }
        }
        Ok(out)
    }
}
