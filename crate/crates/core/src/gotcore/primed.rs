use std::cmp::Ordering;

use num_traits::Zero;

use super::contraction::same_set_contraction;
use super::{directional_derivative, ContractionEntry, ContractionTable, Decomposition, GotError, OrderingPair};
use crate::ncalg::{Generator, NcPoly, Scalar, Word};
use crate::ordering::MonomialOrdering;

/// Deliberate corruption of the evaluator, used to check that the property
/// suite notices a broken theorem engine.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Mutation {
    #[default]
    None,
    NegateContraction,
}

impl Mutation {
    fn apply(self, c: Scalar) -> Scalar {
        match self {
            Mutation::None => c,
            Mutation::NegateContraction => -c,
        }
    }
}

/// `O'[prod phi']` for a shared index set.
///
/// The word is sorted by `o_prime` first; then, right to left, each factor
/// acts as `phi_a + sum_b C_ab . d/d phi_b` on the product built so far. The
/// rightmost factor therefore never carries derivatives.
pub fn primed_product_eval(pair: &OrderingPair, w: &Word) -> NcPoly {
    primed_product_eval_with(pair, w, Mutation::None)
}

pub fn primed_product_eval_with(pair: &OrderingPair, w: &Word, mutation: Mutation) -> NcPoly {
    let sorted = pair.o_prime.apply(w);
    let mut factors = sorted.factors().iter().rev();
    let Some(last) = factors.next() else {
        return NcPoly::one();
    };
    let mut acc = NcPoly::generator(last.clone());
    for a in factors {
        let mut next = &NcPoly::generator(a.clone()) * &acc;
        for b in acc.generators() {
            let c = same_set_contraction(pair, a, &b);
            if c.is_zero() {
                continue;
            }
            let c = match mutation {
                Mutation::None => c,
                Mutation::NegateContraction => -c,
            };
            next += &directional_derivative(&c, &b, &acc);
        }
        acc = next;
    }
    acc
}

/// `O'[prod phi']` when `o_prime` orders the generators of a decomposition.
///
/// Each input factor is expanded over its row of `L`. Every expanded factor is
/// tagged with the position it came from, so the contraction can look up the
/// parents of both participating factors. Within one branch the tagged word is
/// sorted by `o_prime` and evaluated right to left as in the shared-set case;
/// tags are dropped from the final sum.
pub fn primed_product_eval_general(pair: &OrderingPair, d: &Decomposition, w: &Word) -> Result<NcPoly, GotError> {
    primed_product_eval_general_with(pair, d, w, Mutation::None)
}

pub fn primed_product_eval_general_with(
    pair: &OrderingPair,
    d: &Decomposition,
    w: &Word,
    mutation: Mutation,
) -> Result<NcPoly, GotError> {
    let parents = w.factors();
    let rows = parents.iter().map(|a| d.row(a)).collect::<Result<Vec<_>, _>>()?;
    if parents.is_empty() {
        return Ok(NcPoly::one());
    }
    let rows: Vec<Vec<(&Generator, &Scalar)>> = rows.into_iter().map(|r| r.iter().collect()).collect();

    let mut total = NcPoly::zero();
    let mut choice = vec![0usize; parents.len()];
    loop {
        let mut weight = Scalar::from_integer(1.into());
        let mut tagged = Vec::with_capacity(parents.len());
        for (pos, &j) in choice.iter().enumerate() {
            let (k, l) = rows[pos][j];
            weight *= l;
            tagged.push(k.clone().with_tag(Some(&occurrence_tag(pos))));
        }
        let branch = eval_tagged_branch(pair, parents, Word::new(tagged), mutation);
        total += &branch.untagged().scale(&weight);

        // odometer over the expansion branches
        let mut pos = 0;
        loop {
            if pos == choice.len() {
                return Ok(total);
            }
            choice[pos] += 1;
            if choice[pos] < rows[pos].len() {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
    }
}

fn occurrence_tag(pos: usize) -> String {
    format!("o{pos}")
}

fn occurrence_of(g: &Generator) -> usize {
    g.tag()
        .and_then(|t| t.strip_prefix('o'))
        .and_then(|t| t.parse().ok())
        .expect("branch factors carry occurrence tags")
}

/// `theta_{(b at j) > (a at i)}` for the input ordering. Occurrences whose
/// parents tie keep input order, matching the stable sort that defines the
/// left-hand side.
fn outranks_occurrence(o: &MonomialOrdering, parents: &[Generator], j: usize, i: usize) -> bool {
    match o.compare(&parents[j], &parents[i]) {
        Ordering::Greater => true,
        Ordering::Equal => j < i,
        Ordering::Less => false,
    }
}

fn eval_tagged_branch(pair: &OrderingPair, parents: &[Generator], w: Word, mutation: Mutation) -> NcPoly {
    let sorted = pair.o_prime.apply(&w);
    let mut factors = sorted.factors().iter().rev();
    let last = factors.next().expect("branch words are nonempty");
    let mut acc = NcPoly::generator(last.clone());
    for k in factors {
        let i = occurrence_of(k);
        let mut next = &NcPoly::generator(k.clone()) * &acc;
        for l in acc.generators() {
            let j = occurrence_of(&l);
            let mut coeff = pair.o_prime.theta(&l.untagged(), &k.untagged());
            if outranks_occurrence(&pair.o, parents, j, i) {
                coeff -= Scalar::from_integer(1.into());
            }
            if coeff.is_zero() {
                continue;
            }
            let c = NcPoly::generator(k.clone())
                .commutator(&NcPoly::generator(l.clone()))
                .scale(&mutation.apply(coeff));
            next += &directional_derivative(&c, &l, &acc);
        }
        acc = next;
    }
    acc
}

/// Outcome of checking `O[prod phi] = O'[prod phi']` on one word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub word: Word,
    pub pair: OrderingPair,
    /// `O` applied to the word, expanded over the decomposition when it is
    /// not the identity.
    pub lhs: NcPoly,
    pub rhs: NcPoly,
    pub equal: bool,
    pub contractions: Vec<ContractionEntry>,
}

pub fn got_verify(pair: &OrderingPair, d: &Decomposition, w: &Word) -> Result<VerificationReport, GotError> {
    got_verify_with(pair, d, w, Mutation::None)
}

pub fn got_verify_with(
    pair: &OrderingPair,
    d: &Decomposition,
    w: &Word,
    mutation: Mutation,
) -> Result<VerificationReport, GotError> {
    for g in w.iter() {
        if !d.omega().contains(g) {
            return Err(GotError::OutsideOmega(g.clone()));
        }
    }
    let ordered = NcPoly::word(pair.o.apply(w));
    let (lhs, rhs) = if d.is_identity() {
        (ordered, primed_product_eval_with(pair, w, mutation))
    } else {
        (d.expand(&ordered)?, primed_product_eval_general_with(pair, d, w, mutation)?)
    };
    let contractions = ContractionTable::new(pair, d).entries()?;
    Ok(VerificationReport {
        word: w.clone(),
        pair: pair.clone(),
        equal: lhs == rhs,
        lhs,
        rhs,
        contractions,
    })
}

/// Checks `phi_a O[w] = O[phi_a w] + sum_b theta_{b>a} ([phi_a, phi_b] . d/d phi_b) O[w]`.
pub fn push_lemma_check(o: &MonomialOrdering, a: &Generator, w: &Word) -> bool {
    let ordered = NcPoly::word(o.apply(w));
    let phi_a = NcPoly::generator(a.clone());
    let lhs = &phi_a * &ordered;
    let pushed = Word::new(std::iter::once(a.clone()).chain(w.iter().cloned()).collect());
    let mut rhs = NcPoly::word(o.apply(&pushed));
    for b in ordered.generators() {
        if o.outranks(&b, a) {
            let c = phi_a.commutator(&NcPoly::generator(b.clone()));
            rhs += &directional_derivative(&c, &b, &ordered);
        }
    }
    lhs == rhs
}
