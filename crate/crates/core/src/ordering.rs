//! Ordering superoperators.
//!
//! A [`MonomialOrdering`] is a strict total order on generator keys; applying
//! it to a word stably sorts the factors so that higher-ranked generators end
//! up on the left. The Weyl symmetrizer is the one non-monomial ordering
//! shipped here, as a [`WeightedOrdering`].

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::ncalg::{Generator, NcPoly, Scalar, Word};

/// Longest word the Weyl symmetrizer accepts by default (`8! = 40320` terms).
pub const DEFAULT_WEYL_CAP: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderingError {
    #[error("unknown ordering rule `{0}` (expected time, antitime, alpha, nxy:X,Y or perm:k1,k2,...)")]
    UnknownRule(String),
    #[error("ordering rule `{0}` lists no keys")]
    EmptyKeys(String),
    #[error("ordering rule lists key `{0}` twice")]
    DuplicateKey(String),
    #[error("Weyl symmetrization of a length-{len} word exceeds the cap of {cap}")]
    WeylTooLong { len: usize, cap: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Rule {
    /// `n > ... > 1`: larger index leftmost.
    Time,
    /// `1 > ... > n`: smaller index leftmost.
    AntiTime,
    /// `Z > ... > A`: alphabetically later ids leftmost.
    Alpha,
    /// All `x` factors left of all `y` factors, everything else to the right.
    Nxy { x: String, y: String },
    /// Explicit ranking, leftmost key ranks highest. Unlisted generators rank
    /// below every listed one and tie among themselves.
    Perm(Vec<String>),
}

/// A monomial ordering rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialOrdering {
    rule: Rule,
}

impl MonomialOrdering {
    pub fn time() -> Self {
        MonomialOrdering { rule: Rule::Time }
    }

    pub fn anti_time() -> Self {
        MonomialOrdering { rule: Rule::AntiTime }
    }

    pub fn alpha() -> Self {
        MonomialOrdering { rule: Rule::Alpha }
    }

    pub fn nxy(x: &str, y: &str) -> Self {
        MonomialOrdering { rule: Rule::Nxy { x: x.to_string(), y: y.to_string() } }
    }

    /// Ranking by an explicit key list, highest rank first.
    pub fn perm<S: AsRef<str>>(keys: &[S]) -> Result<Self, OrderingError> {
        if keys.is_empty() {
            return Err(OrderingError::EmptyKeys("perm".into()));
        }
        let mut seen = std::collections::HashSet::new();
        let keys: Vec<String> = keys.iter().map(|k| k.as_ref().trim().to_string()).collect();
        for k in &keys {
            if !seen.insert(k.clone()) {
                return Err(OrderingError::DuplicateKey(k.clone()));
            }
        }
        Ok(MonomialOrdering { rule: Rule::Perm(keys) })
    }

    pub fn name(&self) -> String {
        self.to_string()
    }

    /// `Greater` iff `a` outranks `b`, i.e. `a` is placed to the left of `b`.
    /// Tags never participate.
    pub fn compare(&self, a: &Generator, b: &Generator) -> Ordering {
        match &self.rule {
            Rule::Time => time_key(a).cmp(&time_key(b)),
            Rule::AntiTime => time_key(b).cmp(&time_key(a)),
            Rule::Alpha => (a.id(), a.time()).cmp(&(b.id(), b.time())),
            Rule::Nxy { x, y } => {
                let class = |g: &Generator| {
                    if g.id() == x {
                        2
                    } else if g.id() == y {
                        1
                    } else {
                        0
                    }
                };
                class(a).cmp(&class(b))
            }
            Rule::Perm(keys) => {
                let pos = |g: &Generator| keys.iter().position(|k| key_matches(k, g)).unwrap_or(keys.len());
                // earlier position = higher rank
                pos(b).cmp(&pos(a))
            }
        }
    }

    /// The step function: 1 if `b` strictly outranks `a`, else 0.
    pub fn theta(&self, b: &Generator, a: &Generator) -> Scalar {
        if self.outranks(b, a) {
            Scalar::one()
        } else {
            Scalar::zero()
        }
    }

    pub fn outranks(&self, b: &Generator, a: &Generator) -> bool {
        self.compare(b, a) == Ordering::Greater
    }

    /// Stable sort, highest rank leftmost.
    pub fn apply(&self, w: &Word) -> Word {
        let mut factors = w.factors().to_vec();
        factors.sort_by(|a, b| self.compare(b, a));
        Word::new(factors)
    }

    /// Linear extension of [`apply`](Self::apply).
    pub fn apply_poly(&self, p: &NcPoly) -> NcPoly {
        p.map_words(|w| self.apply(w))
    }
}

fn time_key(g: &Generator) -> (Option<i64>, &str) {
    (g.index(), g.id())
}

/// A perm key names a generator by id, by its printed form (`A@3`), or, for
/// purely numeric keys, by the `x<n>` id the CLI uses for index labels.
fn key_matches(key: &str, g: &Generator) -> bool {
    if key == g.id() {
        return true;
    }
    if g.time().is_some() && key == g.untagged().to_string() {
        return true;
    }
    !key.is_empty() && key.bytes().all(|b| b.is_ascii_digit()) && g.id().strip_prefix('x') == Some(key)
}

impl fmt::Display for MonomialOrdering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.rule {
            Rule::Time => f.write_str("time"),
            Rule::AntiTime => f.write_str("antitime"),
            Rule::Alpha => f.write_str("alpha"),
            Rule::Nxy { x, y } => write!(f, "nxy:{x},{y}"),
            Rule::Perm(keys) => write!(f, "perm:{}", keys.join(",")),
        }
    }
}

impl FromStr for MonomialOrdering {
    type Err = OrderingError;

    fn from_str(s: &str) -> Result<Self, OrderingError> {
        let s = s.trim();
        match s {
            "time" => return Ok(MonomialOrdering::time()),
            "antitime" => return Ok(MonomialOrdering::anti_time()),
            "alpha" => return Ok(MonomialOrdering::alpha()),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("nxy:") {
            let parts: Vec<&str> = rest.split(',').map(str::trim).collect();
            return match parts.as_slice() {
                [x, y] if !x.is_empty() && !y.is_empty() && x != y => Ok(MonomialOrdering::nxy(x, y)),
                _ => Err(OrderingError::UnknownRule(s.to_string())),
            };
        }
        if let Some(rest) = s.strip_prefix("perm:") {
            let keys: Vec<&str> = rest.split(',').map(str::trim).filter(|k| !k.is_empty()).collect();
            if keys.is_empty() {
                return Err(OrderingError::EmptyKeys(s.to_string()));
            }
            return MonomialOrdering::perm(&keys);
        }
        Err(OrderingError::UnknownRule(s.to_string()))
    }
}

/// A non-monomial ordering: a weighted family of permutations per length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedOrdering {
    name: String,
    cap: usize,
}

impl WeightedOrdering {
    /// Full symmetrization with uniform weights `1/n!`.
    pub fn weyl() -> Self {
        WeightedOrdering { name: "weyl".into(), cap: DEFAULT_WEYL_CAP }
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// The `(weight, permutation)` pairs for inputs of length `n`; a
    /// permutation lists, left to right, the input positions of the output.
    pub fn family(&self, n: usize) -> Result<Vec<(Scalar, Vec<usize>)>, OrderingError> {
        if n > self.cap {
            return Err(OrderingError::WeylTooLong { len: n, cap: self.cap });
        }
        let perms = permutations(n);
        let weight = Scalar::new(1.into(), perms.len().into());
        Ok(perms.into_iter().map(|p| (weight.clone(), p)).collect())
    }

    pub fn apply(&self, w: &Word) -> Result<NcPoly, OrderingError> {
        let fam = self.family(w.len())?;
        let f = w.factors();
        Ok(NcPoly::from_terms(
            fam.into_iter().map(|(c, perm)| (perm.iter().map(|&i| f[i].clone()).collect(), c)),
        ))
    }

    pub fn apply_poly(&self, p: &NcPoly) -> Result<NcPoly, OrderingError> {
        let mut out = NcPoly::zero();
        for (w, c) in p.terms() {
            out += &self.apply(w)?.scale(c);
        }
        Ok(out)
    }
}

/// Weyl symmetrization of a single word with the default cap.
pub fn weyl_symmetrize(w: &Word) -> Result<NcPoly, OrderingError> {
    WeightedOrdering::weyl().apply(w)
}

/// Either kind of ordering, as referenced from expressions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderingRule {
    Monomial(MonomialOrdering),
    Weighted(WeightedOrdering),
}

impl OrderingRule {
    pub fn apply_poly(&self, p: &NcPoly) -> Result<NcPoly, OrderingError> {
        match self {
            OrderingRule::Monomial(o) => Ok(o.apply_poly(p)),
            OrderingRule::Weighted(o) => o.apply_poly(p),
        }
    }
}

impl FromStr for OrderingRule {
    type Err = OrderingError;
    fn from_str(s: &str) -> Result<Self, OrderingError> {
        if s.trim() == "weyl" {
            Ok(OrderingRule::Weighted(WeightedOrdering::weyl()))
        } else {
            s.parse().map(OrderingRule::Monomial)
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}
