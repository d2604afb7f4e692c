use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

/// A free generator of the algebra.
///
/// Two generators are equal iff `id`, `tag` and `time` all match. The tag is
/// an annotation used while expanding decomposed products (each expanded
/// factor remembers which input occurrence it came from); the time label
/// carries the grid point of piecewise-constant generators.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    id: Arc<str>,
    tag: Option<Arc<str>>,
    time: Option<i64>,
}

impl Generator {
    /// Plain generator. Panics on an empty id.
    pub fn new(id: &str) -> Self {
        assert!(!id.is_empty(), "generator id must be nonempty");
        Generator { id: Arc::from(id), tag: None, time: None }
    }

    pub fn try_new(id: &str) -> Option<Self> {
        (!id.is_empty()).then(|| Generator::new(id))
    }

    pub fn timed(id: &str, time: i64) -> Self {
        Generator::new(id).with_time(Some(time))
    }

    pub fn with_tag(mut self, tag: Option<&str>) -> Self {
        self.tag = tag.map(Arc::from);
        self
    }

    pub fn with_time(mut self, time: Option<i64>) -> Self {
        self.time = time;
        self
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn tag(&self) -> Option<&str> {
        self.tag.as_deref()
    }

    pub fn time(&self) -> Option<i64> {
        self.time
    }

    /// Same generator with the tag removed.
    pub fn untagged(&self) -> Generator {
        Generator { id: self.id.clone(), tag: None, time: self.time }
    }

    /// Integer index used by time-like orderings: the time label when present,
    /// otherwise the trailing decimal digits of the id (`x12` -> 12).
    pub fn index(&self) -> Option<i64> {
        if self.time.is_some() {
            return self.time;
        }
        let digits = self.id.len() - self.id.trim_end_matches(|c: char| c.is_ascii_digit()).len();
        if digits == 0 {
            return None;
        }
        self.id[self.id.len() - digits..].parse().ok()
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id)?;
        if let Some(tag) = &self.tag {
            write!(f, "#{tag}")?;
        }
        if let Some(t) = self.time {
            write!(f, "@{t}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// An ordered product of generators; the empty word is the identity.
///
/// Words compare by length first and then lexicographically by factor, which
/// is the canonical term order of [`NcPoly`](super::NcPoly).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Generator>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn new(factors: Vec<Generator>) -> Self {
        Word(factors)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[Generator] {
        &self.0
    }

    pub fn into_factors(self) -> Vec<Generator> {
        self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut factors = Vec::with_capacity(self.len() + other.len());
        factors.extend_from_slice(&self.0);
        factors.extend_from_slice(&other.0);
        Word(factors)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Generator> {
        self.0.iter()
    }
}

impl FromIterator<Generator> for Word {
    fn from_iter<I: IntoIterator<Item = Generator>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl From<Vec<Generator>> for Word {
    fn from(factors: Vec<Generator>) -> Self {
        Word(factors)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, g) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equality_needs_all_fields() {
        let a = Generator::new("A");
        assert_ne!(a, Generator::timed("A", 1));
        assert_ne!(a, a.clone().with_tag(Some("o0")));
        assert_eq!(a.clone().with_tag(Some("o0")).untagged(), a);
    }

    #[test]
    fn index_from_suffix_or_time() {
        assert_eq!(Generator::new("x12").index(), Some(12));
        assert_eq!(Generator::new("3").index(), Some(3));
        assert_eq!(Generator::new("A").index(), None);
        assert_eq!(Generator::timed("A", 4).index(), Some(4));
    }

    #[test]
    fn words_order_by_length_first() {
        let x = Generator::new("X");
        let y = Generator::new("Y");
        let long = Word::new(vec![x.clone(), x.clone()]);
        let short = Word::new(vec![y.clone()]);
        assert!(short < long);
        assert!(Word::identity() < short);
        assert!(Word::new(vec![x.clone(), y.clone()]) < Word::new(vec![y, x]));
    }

    #[test]
    fn concat_has_identity_unit() {
        let w = Word::new(vec![Generator::new("X"), Generator::new("Y")]);
        assert_eq!(w.concat(&Word::identity()), w);
        assert_eq!(Word::identity().concat(&w), w);
    }
}
