//! Degree/multiplicity multisets shared by factorization patterns over `F_p`
//! and cycle patterns of permutations.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Multiset `d_1^{m_1} ... d_t^{m_t}` stored as a map from part size to
/// multiplicity. Iteration is by increasing part size.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pattern {
    parts: BTreeMap<usize, usize>,
}

/// Factorization pattern of a squarefree polynomial over `F_p`.
pub type FactorPattern = Pattern;
/// Cycle pattern of a permutation.
pub type CyclePattern = Pattern;

impl Pattern {
    pub fn new() -> Self {
        Self::default()
    }

    /// Build from `(part, multiplicity)` pairs; repeated parts accumulate and
    /// zero multiplicities are dropped.
    ///
    /// Panics on a zero part size.
    pub fn from_pairs<I: IntoIterator<Item = (usize, usize)>>(pairs: I) -> Self {
        let mut p = Pattern::new();
        for (part, mult) in pairs {
            p.add(part, mult);
        }
        p
    }

    /// Pattern of a list of part sizes (cycle lengths or factor degrees).
    pub fn from_parts<I: IntoIterator<Item = usize>>(parts: I) -> Self {
        Self::from_pairs(parts.into_iter().map(|d| (d, 1)))
    }

    pub fn add(&mut self, part: usize, mult: usize) {
        assert!(part > 0, "pattern parts must be positive");
        if mult > 0 {
            *self.parts.entry(part).or_insert(0) += mult;
        }
    }

    pub fn multiplicity(&self, part: usize) -> usize {
        self.parts.get(&part).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parts.iter().map(|(&d, &m)| (d, m))
    }

    /// `Σ m_j d_j`.
    pub fn total(&self) -> usize {
        self.iter().map(|(d, m)| d * m).sum()
    }

    /// Number of parts counted with multiplicity.
    pub fn count(&self) -> usize {
        self.parts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "()");
        }
        let mut first = true;
        for (d, m) in self.iter() {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if m == 1 {
                write!(f, "{d}")?;
            } else {
                write!(f, "{d}^{m}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for Pattern {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<[usize; 2]> = self.iter().map(|(d, m)| [d, m]).collect();
        pairs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Pattern {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let pairs = Vec::<[usize; 2]>::deserialize(de)?;
        let mut p = Pattern::new();
        for [d, m] in pairs {
            if d == 0 || m == 0 {
                return Err(D::Error::custom(format!("invalid pattern pair [{d}, {m}]")));
            }
            if p.parts.contains_key(&d) {
                return Err(D::Error::custom(format!("repeated degree {d} in pattern")));
            }
            p.parts.insert(d, m);
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn totals_and_display() {
        let p = Pattern::from_parts([1, 2, 1, 5]);
        assert_eq!(p.total(), 9);
        assert_eq!(p.count(), 4);
        assert_eq!(p.multiplicity(1), 2);
        assert_eq!(p.to_string(), "1^2 2 5");
    }

    #[test]
    fn json_is_sorted_pairs() {
        let p = Pattern::from_pairs([(5, 1), (1, 3)]);
        assert_eq!(serde_json::to_string(&p).unwrap(), "[[1,3],[5,1]]");
        let back: Pattern = serde_json::from_str("[[5,1],[1,3]]").unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<Pattern>("[[0,1]]").is_err());
        assert!(serde_json::from_str::<Pattern>("[[2,1],[2,1]]").is_err());
    }
}
