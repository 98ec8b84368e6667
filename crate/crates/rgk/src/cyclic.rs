//! Cyclic orders stored as successor maps, and their unwindings.
//!
//! A cyclic order on `n` labels is a single `n`-cycle `succ`; the ternary
//! relation is derived from it when asked for. Unwindings live in
//! [`unwinding`].

pub mod unwinding;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

pub use unwinding::{Lift, Parity, Step, Unwinding, UnwindingError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CyclicError {
    #[error("cyclic order needs at least one element")]
    Empty,
    #[error("duplicate label {0}")]
    Duplicate(String),
    #[error("label {0} is not an element of the cyclic order")]
    Missing(String),
    #[error("join would reuse label {0}")]
    Collision(String),
}

/// A finite cyclic order. Internally the cycle is kept rotated so that the
/// least label comes first, which makes derived `Eq` mean equality of orders.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicOrder<T: Ord> {
    cycle: Vec<T>,
}

impl<T: Ord + Clone + fmt::Debug> fmt::Debug for CyclicOrder<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclic{:?}", self.cycle)
    }
}

impl<T: Ord + Clone + fmt::Debug> CyclicOrder<T> {
    /// Each label is succeeded by the next one, the last by the first.
    pub fn from_list(labels: Vec<T>) -> Result<Self, CyclicError> {
        if labels.is_empty() {
            return Err(CyclicError::Empty);
        }
        let mut seen = BTreeSet::new();
        for l in &labels {
            if !seen.insert(l) {
                return Err(CyclicError::Duplicate(format!("{l:?}")));
            }
        }
        Ok(Self::canonical(labels))
    }

    fn canonical(mut cycle: Vec<T>) -> Self {
        let least = cycle
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.cmp(b.1))
            .map(|(i, _)| i)
            .unwrap_or(0);
        cycle.rotate_left(least);
        CyclicOrder { cycle }
    }

    pub fn len(&self) -> usize {
        self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycle.is_empty()
    }

    pub fn contains(&self, x: &T) -> bool {
        self.cycle.contains(x)
    }

    fn position(&self, x: &T) -> Option<usize> {
        self.cycle.iter().position(|y| y == x)
    }

    fn pos(&self, x: &T) -> Result<usize, CyclicError> {
        self.position(x)
            .ok_or_else(|| CyclicError::Missing(format!("{x:?}")))
    }

    /// The canonical listing: least label first, then successors.
    pub fn as_slice(&self) -> &[T] {
        &self.cycle
    }

    pub fn elements(&self) -> BTreeSet<T> {
        self.cycle.iter().cloned().collect()
    }

    pub fn succ(&self, x: &T) -> Result<&T, CyclicError> {
        let i = self.pos(x)?;
        Ok(&self.cycle[(i + 1) % self.len()])
    }

    pub fn pred(&self, x: &T) -> Result<&T, CyclicError> {
        let i = self.pos(x)?;
        Ok(&self.cycle[(i + self.len() - 1) % self.len()])
    }

    /// The cycle listed starting at `x`.
    pub fn starting_at(&self, x: &T) -> Result<Vec<T>, CyclicError> {
        let i = self.pos(x)?;
        let mut v = self.cycle.clone();
        v.rotate_left(i);
        Ok(v)
    }

    /// Number of successor steps from `x` to `y`.
    pub fn distance(&self, x: &T, y: &T) -> Result<usize, CyclicError> {
        let (i, j) = (self.pos(x)?, self.pos(y)?);
        Ok((j + self.len() - i) % self.len())
    }

    /// `(x, y, z)` lies in the ternary relation: all distinct, and walking
    /// forward from `x` meets `y` before `z`.
    pub fn holds(&self, x: &T, y: &T, z: &T) -> bool {
        match (self.position(x), self.position(y), self.position(z)) {
            (Some(i), Some(j), Some(k)) if i != j && j != k && i != k => {
                let n = self.len();
                (j + n - i) % n < (k + n - i) % n
            }
            _ => false,
        }
    }

    /// Every triple in the ternary relation.
    pub fn relation(&self) -> Vec<(T, T, T)> {
        let mut out = Vec::new();
        for x in &self.cycle {
            for y in &self.cycle {
                for z in &self.cycle {
                    if self.holds(x, y, z) {
                        out.push((x.clone(), y.clone(), z.clone()));
                    }
                }
            }
        }
        out
    }

    /// `(x, y)` is a minimal pair. One-element orders have none.
    pub fn is_minimal_pair(&self, x: &T, y: &T) -> bool {
        self.len() >= 2 && self.succ(x).map(|s| s == y).unwrap_or(false)
    }

    pub fn minimal_pairs(&self) -> Vec<(T, T)> {
        if self.len() < 2 {
            return Vec::new();
        }
        (0..self.len())
            .map(|i| (self.cycle[i].clone(), self.cycle[(i + 1) % self.len()].clone()))
            .collect()
    }

    /// The order restricted to `subset`.
    pub fn induced(&self, subset: &BTreeSet<T>) -> Result<Self, CyclicError> {
        if let Some(x) = subset.iter().find(|x| !self.contains(x)) {
            return Err(CyclicError::Missing(format!("{x:?}")));
        }
        let kept: Vec<T> = self
            .cycle
            .iter()
            .filter(|x| subset.contains(*x))
            .cloned()
            .collect();
        if kept.is_empty() {
            return Err(CyclicError::Empty);
        }
        Ok(Self::canonical(kept))
    }

    /// No chord with both ends in `a` crosses a chord with both ends in `b`.
    pub fn noninterlacing(&self, a: &BTreeSet<T>, b: &BTreeSet<T>) -> bool {
        for x1 in a {
            for y1 in a {
                if x1 >= y1 {
                    continue;
                }
                for x2 in b {
                    for y2 in b {
                        if x2 >= y2 {
                            continue;
                        }
                        let four: BTreeSet<T> =
                            [x1, y1, x2, y2].into_iter().cloned().collect();
                        if four.len() < 4 || four.iter().any(|x| !self.contains(x)) {
                            continue;
                        }
                        let sub = self.induced(&four).expect("subset of elements");
                        if !sub.is_minimal_pair(x1, y1) && !sub.is_minimal_pair(y1, x1) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Join along `p` and `q`: `p` is replaced by the cycle of `other`
    /// read from the successor of `q` round to the predecessor of `q`.
    pub fn join(&self, p: &T, other: &Self, q: &T) -> Result<Self, CyclicError> {
        let left = self.starting_at(p)?;
        let right = other.starting_at(q)?;
        let mut out: Vec<T> = left[1..].to_vec();
        let mut labels: BTreeSet<T> = out.iter().cloned().collect();
        for x in &right[1..] {
            if !labels.insert(x.clone()) {
                return Err(CyclicError::Collision(format!("{x:?}")));
            }
        }
        out.extend(right[1..].iter().cloned());
        if out.is_empty() {
            return Err(CyclicError::Empty);
        }
        Ok(Self::canonical(out))
    }

    /// Transport along a relabelling.
    pub fn map<U: Ord + Clone + fmt::Debug>(
        &self,
        f: impl Fn(&T) -> U,
    ) -> Result<CyclicOrder<U>, CyclicError> {
        CyclicOrder::from_list(self.cycle.iter().map(f).collect())
    }

    /// Successor table, handy for serialisation.
    pub fn successor_map(&self) -> BTreeMap<T, T> {
        self.minimal_pairs().into_iter().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order(s: &str) -> CyclicOrder<char> {
        CyclicOrder::from_list(s.chars().collect()).unwrap()
    }

    fn set(s: &str) -> BTreeSet<char> {
        s.chars().collect()
    }

    #[test]
    fn compass_successors() {
        let c = order("ENWS");
        assert_eq!(c.succ(&'E'), Ok(&'N'));
        assert_eq!(c.succ(&'S'), Ok(&'E'));
        assert_eq!(c.as_slice(), &['E', 'N', 'W', 'S']);
    }

    #[test]
    fn singleton_has_no_minimal_pairs() {
        let c = order("a");
        assert_eq!(c.succ(&'a'), Ok(&'a'));
        assert!(c.minimal_pairs().is_empty());
        assert!(!c.is_minimal_pair(&'a', &'a'));
    }

    #[test]
    fn duplicates_rejected() {
        assert_eq!(
            CyclicOrder::from_list(vec!['a', 'b', 'a']),
            Err(CyclicError::Duplicate("'a'".into()))
        );
        assert_eq!(CyclicOrder::<char>::from_list(vec![]), Err(CyclicError::Empty));
    }

    #[test]
    fn ternary_relation_of_three() {
        let c = order("abc");
        assert!(c.holds(&'a', &'b', &'c'));
        assert!(!c.holds(&'a', &'c', &'b'));
        assert_eq!(c.relation().len(), 3);
    }

    #[test]
    fn induced_examples() {
        let c = order("ENWS");
        let ew = c.induced(&set("EW")).unwrap();
        assert_eq!(ew.succ(&'E'), Ok(&'W'));
        assert_eq!(ew.succ(&'W'), Ok(&'E'));
        let d = order("abcd").induced(&set("acd")).unwrap();
        assert_eq!(d, order("acd"));
        assert_eq!(order("abcd").induced(&set("abcd")).unwrap(), order("abcd"));
        assert!(order("ab").induced(&BTreeSet::new()).is_err());
    }

    #[test]
    fn noninterlacing_examples() {
        assert!(order("abcd").noninterlacing(&set("ab"), &set("cd")));
        assert!(!order("acbd").noninterlacing(&set("ab"), &set("cd")));
        assert!(order("acbd").noninterlacing(&set("a"), &set("bcd")));
    }

    #[test]
    fn join_examples() {
        let j = order("abp").join(&'p', &order("cdq"), &'q').unwrap();
        assert_eq!(j, order("abcd"));
        let sub = order("abp").join(&'p', &order("xq"), &'q').unwrap();
        assert_eq!(sub, order("abx"));
        assert_eq!(
            order("abp").join(&'p', &order("aq"), &'q'),
            Err(CyclicError::Collision("'a'".into()))
        );
    }

    #[test]
    fn rotation_is_canonical() {
        assert_eq!(order("cab"), order("abc"));
        assert_ne!(order("acb"), order("abc"));
    }
}
