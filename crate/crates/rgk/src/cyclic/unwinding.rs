//! Unwindings: torsors for `G_n = <R, S | RS = SR, R^n = S^2>` over a cyclic order.
//!
//! The cover is infinite, so it is never stored. A cover element is a base
//! element together with an integer half-level; `S` raises the half-level by
//! one and `R` moves to the successor while adding an integer step attached
//! to the base element. The steps around the whole cycle add up to two, which
//! is exactly `R^n = S^2`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{CyclicError, CyclicOrder};

/// Element of a two-element torsor, written additively.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Parity(pub bool);

impl Parity {
    pub const EVEN: Parity = Parity(false);
    pub const ODD: Parity = Parity(true);

    pub fn of(k: i64) -> Parity {
        Parity(k.rem_euclid(2) == 1)
    }

    pub fn flip(self) -> Parity {
        Parity(!self.0)
    }

    pub fn as_i64(self) -> i64 {
        i64::from(self.0)
    }
}

impl Add for Parity {
    type Output = Parity;
    fn add(self, rhs: Parity) -> Parity {
        Parity(self.0 != rhs.0)
    }
}

/// A point of the cover: a base element and a half-level.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lift<T> {
    pub base: T,
    pub level: i64,
}

/// Generators of `G_n` and their inverses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    R,
    S,
    RInv,
    SInv,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnwindingError {
    #[error(transparent)]
    Cyclic(#[from] CyclicError),
    #[error("steps sum to {0}, but R^n = S^2 needs 2")]
    StepSum(i64),
    #[error("missing step or parity for {0}")]
    Incomplete(String),
    #[error("R does not preserve the parity at {0}")]
    ParityBreak(String),
    #[error("group law fails: {0}")]
    GroupLaw(String),
}

#[derive(Clone, PartialEq, Eq)]
pub struct Unwinding<T: Ord> {
    base: CyclicOrder<T>,
    steps: BTreeMap<T, i64>,
    parity: BTreeMap<T, Parity>,
}

impl<T: Ord + Clone + fmt::Debug> fmt::Debug for Unwinding<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Unwinding")
            .field("base", &self.base)
            .field("steps", &self.steps)
            .field("parity", &self.parity)
            .finish()
    }
}

impl<T: Ord + Clone + fmt::Debug> Unwinding<T> {
    pub fn new(
        base: CyclicOrder<T>,
        steps: BTreeMap<T, i64>,
        parity: BTreeMap<T, Parity>,
    ) -> Result<Self, UnwindingError> {
        for c in base.as_slice() {
            if !steps.contains_key(c) || !parity.contains_key(c) {
                return Err(UnwindingError::Incomplete(format!("{c:?}")));
            }
        }
        if steps.len() != base.len() || parity.len() != base.len() {
            return Err(UnwindingError::Incomplete("extra keys".into()));
        }
        let total: i64 = steps.values().sum();
        if total != 2 {
            return Err(UnwindingError::StepSum(total));
        }
        for c in base.as_slice() {
            let next = base.succ(c)?;
            if parity[next] != parity[c] + Parity::of(steps[c]) {
                return Err(UnwindingError::ParityBreak(format!("{c:?}")));
            }
        }
        Ok(Unwinding { base, steps, parity })
    }

    /// The torsor `G_n` itself with `origin` lying under the identity:
    /// `R^a S^b` sits over the `a`-th successor of `origin` at half-level `b`.
    pub fn standard(base: CyclicOrder<T>, origin: &T) -> Result<Self, UnwindingError> {
        let last = base.pred(origin)?.clone();
        let steps = base
            .as_slice()
            .iter()
            .map(|c| (c.clone(), if *c == last { 2 } else { 0 }))
            .collect();
        let parity = base
            .as_slice()
            .iter()
            .map(|c| (c.clone(), Parity::EVEN))
            .collect();
        Self::new(base, steps, parity)
    }

    pub fn base(&self) -> &CyclicOrder<T> {
        &self.base
    }

    pub fn steps(&self) -> &BTreeMap<T, i64> {
        &self.steps
    }

    pub fn parities(&self) -> &BTreeMap<T, Parity> {
        &self.parity
    }

    pub fn step(&self, c: &T) -> i64 {
        self.steps[c]
    }

    pub fn rho<'a>(&self, x: &'a Lift<T>) -> &'a T {
        &x.base
    }

    pub fn sigma(&self, x: &Lift<T>) -> Parity {
        self.parity[&x.base] + Parity::of(x.level)
    }

    pub fn act_r(&self, x: &Lift<T>) -> Lift<T> {
        Lift {
            base: self.base.succ(&x.base).expect("lift over base").clone(),
            level: x.level + self.steps[&x.base],
        }
    }

    pub fn act_r_inv(&self, x: &Lift<T>) -> Lift<T> {
        let prev = self.base.pred(&x.base).expect("lift over base").clone();
        let level = x.level - self.steps[&prev];
        Lift { base: prev, level }
    }

    pub fn act_s(&self, x: &Lift<T>) -> Lift<T> {
        Lift {
            base: x.base.clone(),
            level: x.level + 1,
        }
    }

    pub fn act_s_inv(&self, x: &Lift<T>) -> Lift<T> {
        Lift {
            base: x.base.clone(),
            level: x.level - 1,
        }
    }

    /// Apply a word, leftmost letter first.
    pub fn act(&self, word: &[Step], x: &Lift<T>) -> Lift<T> {
        word.iter().fold(x.clone(), |y, s| match s {
            Step::R => self.act_r(&y),
            Step::S => self.act_s(&y),
            Step::RInv => self.act_r_inv(&y),
            Step::SInv => self.act_s_inv(&y),
        })
    }

    /// `R^a S^b` applied to `x`.
    pub fn act_power(&self, a: i64, b: i64, x: &Lift<T>) -> Lift<T> {
        let mut y = x.clone();
        for _ in 0..a.unsigned_abs() {
            y = if a > 0 { self.act_r(&y) } else { self.act_r_inv(&y) };
        }
        y.level += b;
        y
    }

    /// Sum of steps along the minimal chain from `from` to `to`,
    /// i.e. the half-level gained by `R^k` where `k` is their distance.
    pub fn chain_step(&self, from: &T, to: &T) -> i64 {
        let mut total = 0;
        let mut c = from.clone();
        let k = self.base.distance(from, to).expect("both in base");
        for _ in 0..k {
            total += self.steps[&c];
            c = self.base.succ(&c).expect("in base").clone();
        }
        total
    }

    /// Restriction to the fibres over `subset`.
    pub fn induced(&self, subset: &BTreeSet<T>) -> Result<Self, UnwindingError> {
        let base = self.base.induced(subset)?;
        let mut steps = BTreeMap::new();
        for c in base.as_slice() {
            let next = base.succ(c)?;
            let total = if base.len() == 1 {
                2
            } else {
                self.chain_step(c, next)
            };
            steps.insert(c.clone(), total);
        }
        let parity = base
            .as_slice()
            .iter()
            .map(|c| (c.clone(), self.parity[c]))
            .collect();
        Self::new(base, steps, parity)
    }

    /// Transport along a bijective relabelling of the base.
    pub fn relabel<U: Ord + Clone + fmt::Debug>(
        &self,
        f: impl Fn(&T) -> U,
    ) -> Result<Unwinding<U>, UnwindingError> {
        let base = self.base.map(&f)?;
        let steps = self.steps.iter().map(|(k, v)| (f(k), *v)).collect();
        let parity = self.parity.iter().map(|(k, v)| (f(k), *v)).collect();
        Unwinding::new(base, steps, parity)
    }

    /// Level shifts `c -> h(c)` giving an isomorphism `(c, k) -> (c, k + h(c))`
    /// onto `other`, with `h(anchor) = shift` and the parity torsor moved by `flip`.
    pub fn intertwiner(
        &self,
        other: &Self,
        anchor: &T,
        shift: i64,
        flip: Parity,
    ) -> Option<BTreeMap<T, i64>> {
        if self.base != other.base {
            return None;
        }
        let mut h = BTreeMap::new();
        let mut c = anchor.clone();
        let mut cur = shift;
        for _ in 0..self.base.len() {
            h.insert(c.clone(), cur);
            cur += other.steps[&c] - self.steps[&c];
            c = self.base.succ(&c).ok()?.clone();
        }
        if cur != h[anchor] {
            return None;
        }
        let parity_ok = self
            .base
            .as_slice()
            .iter()
            .all(|c| other.parity[c] + Parity::of(h[c]) == self.parity[c] + flip);
        parity_ok.then_some(h)
    }

    /// Checks `RS = SR`, `R^n = S^2`, equivariance of `rho` and `sigma`, and
    /// freeness of the action on the window of half-levels `[-window, window]`.
    pub fn check_group_laws(&self, window: i64) -> Result<(), UnwindingError> {
        let n = self.base.len() as i64;
        for c in self.base.as_slice() {
            for level in -window..=window {
                let x = Lift {
                    base: c.clone(),
                    level,
                };
                let err = |what: &str| UnwindingError::GroupLaw(format!("{what} at {x:?}"));
                if self.act_r(&self.act_s(&x)) != self.act_s(&self.act_r(&x)) {
                    return Err(err("RS != SR"));
                }
                if self.act_power(n, 0, &x) != self.act_power(0, 2, &x) {
                    return Err(err("R^n != S^2"));
                }
                if self.act_r_inv(&self.act_r(&x)) != x {
                    return Err(err("R^-1 R != 1"));
                }
                if self.rho(&self.act_r(&x)) != self.base.succ(c)? {
                    return Err(err("rho not R-equivariant"));
                }
                if self.sigma(&self.act_r(&x)) != self.sigma(&x)
                    || self.sigma(&self.act_s(&x)) != self.sigma(&x).flip()
                {
                    return Err(err("sigma not equivariant"));
                }
                for a in -n..=n {
                    let moved = self.act_power(a, 0, &x);
                    for b in -3..=3 {
                        let trivial_in_group = a % n == 0 && b == -2 * (a / n);
                        let fixes = moved.base == x.base && moved.level + b == x.level;
                        if fixes != trivial_in_group {
                            return Err(err(&format!("R^{a} S^{b} breaks freeness")));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn compass() -> Unwinding<char> {
        let base = CyclicOrder::from_list(vec!['E', 'N', 'W', 'S']).unwrap();
        Unwinding::standard(base, &'E').unwrap()
    }

    fn lift(c: char, level: i64) -> Lift<char> {
        Lift { base: c, level }
    }

    #[test]
    fn relation_word_acts_trivially() {
        let u = compass();
        let word = [Step::R, Step::R, Step::R, Step::R, Step::SInv, Step::SInv];
        for c in ['E', 'N', 'W', 'S'] {
            for level in -3..3 {
                assert_eq!(u.act(&word, &lift(c, level)), lift(c, level));
                assert_eq!(u.act(&[], &lift(c, level)), lift(c, level));
            }
        }
        u.check_group_laws(4).unwrap();
    }

    #[test]
    fn compass_fibres_match_group_elements() {
        let u = compass();
        let origin = lift('E', 0);
        for (a, c) in ['E', 'N', 'W', 'S'].into_iter().enumerate() {
            for b in -2..3 {
                assert_eq!(u.act_power(a as i64, b, &origin), lift(c, b));
            }
        }
    }

    #[test]
    fn induced_on_east_west() {
        let u = compass();
        let sub = u.induced(&['E', 'W'].into_iter().collect()).unwrap();
        assert_eq!(sub.step(&'E'), 0);
        assert_eq!(sub.step(&'W'), 2);
        let x = lift('E', 5);
        assert_eq!(sub.act_r(&x), u.act_power(2, 0, &x));
        sub.check_group_laws(3).unwrap();
    }

    #[test]
    fn induced_on_singleton_is_s_squared() {
        let u = compass();
        let sub = u.induced(&['N'].into_iter().collect()).unwrap();
        let x = lift('N', -1);
        assert_eq!(sub.act_r(&x), u.act_power(0, 2, &x));
        assert_eq!(sub.act_r(&x), u.act_power(4, 0, &x));
        sub.check_group_laws(3).unwrap();
    }

    #[test]
    fn induced_on_full_base_is_identity() {
        let u = compass();
        assert_eq!(u.induced(&u.base().elements()).unwrap(), u);
    }

    #[test]
    fn bad_steps_rejected() {
        let base = CyclicOrder::from_list(vec!['a', 'b']).unwrap();
        let par = |p: [bool; 2]| [('a', Parity(p[0])), ('b', Parity(p[1]))].into_iter().collect();
        let steps = |s: [i64; 2]| [('a', s[0]), ('b', s[1])].into_iter().collect();
        assert_eq!(
            Unwinding::new(base.clone(), steps([1, 0]), par([false, false])),
            Err(UnwindingError::StepSum(1))
        );
        assert!(matches!(
            Unwinding::new(base.clone(), steps([1, 1]), par([false, false])),
            Err(UnwindingError::ParityBreak(_))
        ));
        let odd = Unwinding::new(base, steps([1, 1]), par([false, true])).unwrap();
        odd.check_group_laws(3).unwrap();
    }

    #[test]
    fn intertwiner_between_step_patterns() {
        let base = CyclicOrder::from_list(vec!['a', 'b']).unwrap();
        let even = Unwinding::standard(base.clone(), &'a').unwrap();
        let shifted = Unwinding::standard(base, &'b').unwrap();
        let h = even.intertwiner(&shifted, &'a', 0, Parity::EVEN).unwrap();
        assert_eq!(h[&'b'], 2);
        assert!(even.intertwiner(&shifted, &'a', 1, Parity::EVEN).is_none());
        assert!(even.intertwiner(&shifted, &'a', 1, Parity::ODD).is_some());
    }
}
