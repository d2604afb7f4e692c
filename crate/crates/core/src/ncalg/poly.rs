use std::collections::btree_map::{self, Entry};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Signed, Zero};

use super::{Generator, Scalar, Word};

/// Exact-coefficient linear combination of words.
///
/// Zero coefficients are never stored, so structural equality of the term
/// maps is polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct NcPoly {
    terms: BTreeMap<Word, Scalar>,
}

impl NcPoly {
    pub fn zero() -> Self {
        NcPoly::default()
    }

    pub fn one() -> Self {
        NcPoly::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        NcPoly::monomial(Word::identity(), c)
    }

    pub fn monomial(word: Word, coeff: Scalar) -> Self {
        let mut p = NcPoly::zero();
        p.add_term(word, coeff);
        p
    }

    pub fn word(word: Word) -> Self {
        NcPoly::monomial(word, Scalar::one())
    }

    pub fn generator(g: Generator) -> Self {
        NcPoly::word(Word::new(vec![g]))
    }

    /// Shorthand for a plain generator by id.
    pub fn var(id: &str) -> Self {
        NcPoly::generator(Generator::new(id))
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, Scalar)>>(terms: I) -> Self {
        let mut p = NcPoly::zero();
        for (w, c) in terms {
            p.add_term(w, c);
        }
        p
    }

    /// Adds `coeff * word` in place, dropping the entry if it cancels.
    pub fn add_term(&mut self, word: Word, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(word) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> btree_map::Iter<'_, Word, Scalar> {
        self.terms.iter()
    }

    pub fn coefficient(&self, word: &Word) -> Scalar {
        self.terms.get(word).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn constant_term(&self) -> Scalar {
        self.coefficient(&Word::identity())
    }

    /// Length of the longest word, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Word::len).max()
    }

    pub fn is_homogeneous(&self, degree: usize) -> bool {
        self.terms.keys().all(|w| w.len() == degree)
    }

    /// Every distinct generator occurring in some word, sorted.
    pub fn generators(&self) -> BTreeSet<Generator> {
        self.terms.keys().flat_map(|w| w.iter().cloned()).collect()
    }

    pub fn scale(&self, c: &Scalar) -> NcPoly {
        if c.is_zero() {
            return NcPoly::zero();
        }
        NcPoly { terms: self.terms.iter().map(|(w, v)| (w.clone(), v * c)).collect() }
    }

    /// Drops every word longer than `max_degree`.
    pub fn truncate(&self, max_degree: usize) -> NcPoly {
        NcPoly {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() <= max_degree)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// The homogeneous part of the given degree.
    pub fn component(&self, degree: usize) -> NcPoly {
        NcPoly {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() == degree)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// Product with every word of length above `max_degree` discarded.
    pub fn mul_truncated(&self, other: &NcPoly, max_degree: usize) -> NcPoly {
        let mut out = NcPoly::zero();
        for (a, ca) in &self.terms {
            if a.len() > max_degree {
                continue;
            }
            for (b, cb) in &other.terms {
                if a.len() + b.len() <= max_degree {
                    out.add_term(a.concat(b), ca * cb);
                }
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> NcPoly {
        (0..n).fold(NcPoly::one(), |acc, _| &acc * self)
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &NcPoly) -> NcPoly {
        &(self * other) - &(other * self)
    }

    /// `ad_y^n x`: `n` nested left commutators with `y`.
    pub fn ad_power(y: &NcPoly, x: &NcPoly, n: usize) -> NcPoly {
        (0..n).fold(x.clone(), |acc, _| y.commutator(&acc))
    }

    /// Replaces every occurrence of `target` by `replacement`.
    pub fn substitute(&self, target: &Generator, replacement: &NcPoly) -> NcPoly {
        let mut out = NcPoly::zero();
        for (w, c) in &self.terms {
            let mut acc = NcPoly::constant(c.clone());
            for g in w.iter() {
                acc = if g == target { &acc * replacement } else { &acc * &NcPoly::generator(g.clone()) };
            }
            out += &acc;
        }
        out
    }

    /// Applies `f` to every word (coefficients kept) and re-canonicalizes.
    pub fn map_words<F: FnMut(&Word) -> Word>(&self, mut f: F) -> NcPoly {
        NcPoly::from_terms(self.terms.iter().map(|(w, c)| (f(w), c.clone())))
    }

    /// Strips all tags, merging words that become equal.
    pub fn untagged(&self) -> NcPoly {
        self.map_words(|w| w.iter().map(Generator::untagged).collect())
    }
}

impl From<Generator> for NcPoly {
    fn from(g: Generator) -> Self {
        NcPoly::generator(g)
    }
}

impl From<Word> for NcPoly {
    fn from(w: Word) -> Self {
        NcPoly::word(w)
    }
}

impl AddAssign<&NcPoly> for NcPoly {
    fn add_assign(&mut self, rhs: &NcPoly) {
        for (w, c) in &rhs.terms {
            self.add_term(w.clone(), c.clone());
        }
    }
}

impl SubAssign<&NcPoly> for NcPoly {
    fn sub_assign(&mut self, rhs: &NcPoly) {
        for (w, c) in &rhs.terms {
            self.add_term(w.clone(), -c.clone());
        }
    }
}

impl Add<&NcPoly> for &NcPoly {
    type Output = NcPoly;
    fn add(self, rhs: &NcPoly) -> NcPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&NcPoly> for &NcPoly {
    type Output = NcPoly;
    fn sub(self, rhs: &NcPoly) -> NcPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul<&NcPoly> for &NcPoly {
    type Output = NcPoly;
    fn mul(self, rhs: &NcPoly) -> NcPoly {
        let mut out = NcPoly::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                out.add_term(a.concat(b), ca * cb);
            }
        }
        out
    }
}

impl Neg for &NcPoly {
    type Output = NcPoly;
    fn neg(self) -> NcPoly {
        NcPoly { terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect() }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<NcPoly> for NcPoly {
            type Output = NcPoly;
            fn $method(self, rhs: NcPoly) -> NcPoly {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&NcPoly> for NcPoly {
            type Output = NcPoly;
            fn $method(self, rhs: &NcPoly) -> NcPoly {
                (&self).$method(rhs)
            }
        }
        impl $tr<NcPoly> for &NcPoly {
            type Output = NcPoly;
            fn $method(self, rhs: NcPoly) -> NcPoly {
                self.$method(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for NcPoly {
    type Output = NcPoly;
    fn neg(self) -> NcPoly {
        -&self
    }
}

impl std::iter::Sum for NcPoly {
    fn sum<I: Iterator<Item = NcPoly>>(iter: I) -> NcPoly {
        iter.fold(NcPoly::zero(), |mut acc, p| {
            acc += &p;
            acc
        })
    }
}

/// Canonical text syntax, re-readable by the expression parser.
impl fmt::Display for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            if w.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{w}")?;
            } else {
                write!(f, "{mag}*{w}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncalg::rat;

    fn x() -> NcPoly {
        NcPoly::var("X")
    }
    fn y() -> NcPoly {
        NcPoly::var("Y")
    }

    #[test]
    fn add_cancels_and_merges() {
        let xy = &x() * &y();
        assert!((&xy + &(-&xy)).is_zero());
        let sum = &xy + &(&y() * &x());
        assert_eq!(sum.len(), 2);
        assert_eq!((&x() + &x()).coefficient(&Word::new(vec![Generator::new("X")])), rat(2, 1));
    }

    #[test]
    fn product_is_noncommutative_with_unit() {
        assert_ne!(&x() * &y(), &y() * &x());
        let s = &x() + &y();
        let sq = &s * &s;
        assert_eq!(sq.len(), 4);
        assert_eq!(&NcPoly::one() * &s, s);
    }

    #[test]
    fn commutator_examples() {
        assert!(x().commutator(&x()).is_zero());
        assert_eq!(x().commutator(&y()), &(&x() * &y()) - &(&y() * &x()));
        // [X,[X,Y]] = XXY - 2XYX + YXX
        let expected = &(&(&x() * &x()) * &y()) - &(&(&x() * &y()) * &x()).scale(&rat(2, 1))
            + &(&y() * &x()) * &x();
        assert_eq!(x().commutator(&x().commutator(&y())), expected);
    }

    #[test]
    fn ad_power_examples() {
        assert_eq!(NcPoly::ad_power(&y(), &x(), 0), x());
        assert_eq!(NcPoly::ad_power(&y(), &x(), 1), &(&y() * &x()) - &(&x() * &y()));
        // YYX - 2YXY + XYY
        let expected = &(&(&y() * &y()) * &x()) - &(&(&y() * &x()) * &y()).scale(&rat(2, 1))
            + &(&x() * &y()) * &y();
        assert_eq!(NcPoly::ad_power(&y(), &x(), 2), expected);
    }

    #[test]
    fn truncate_examples() {
        let p = &x() + &(&x() * &y());
        assert_eq!(p.truncate(1), x());
        let q = &(&NcPoly::constant(rat(3, 1)) + &x()) + &(&x() * &y());
        assert_eq!(q.truncate(0), NcPoly::constant(rat(3, 1)));
        let r = &(&(&x() * &x()) + &(&x() * &y()).scale(&rat(2, 1))) + &(&y() * &y());
        assert_eq!(r.truncate(2), r);
    }

    #[test]
    fn substitute_replaces_every_occurrence() {
        let p = &x() * &x();
        let q = p.substitute(&Generator::new("X"), &(&x() + &y()));
        assert_eq!(q, (&x() + &y()).pow(2));
    }

    #[test]
    fn display_is_canonical() {
        let p = &(&x() * &y()).scale(&rat(1, 2)) - &(&y() * &x()).scale(&rat(1, 2));
        assert_eq!(p.to_string(), "1/2*X*Y - 1/2*Y*X");
        assert_eq!(NcPoly::zero().to_string(), "0");
        assert_eq!((&NcPoly::one() - &x()).to_string(), "1 - X");
    }
}
