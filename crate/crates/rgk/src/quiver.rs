//! Conic Lagrangians over a line or a circle and their quivers.
//!
//! A Lagrangian here is the zero section plus finitely many spokes, each
//! sitting over a marked point and pointing up or down. The marked points cut
//! the base into cells; the cells are the vertices of the quiver and the
//! spokes are its arrows.

mod rep;

pub use rep::{
    bgp_reflect, euler_form, ext_basis, hom_basis, hom_complex, hom_ext, is_indecomposable, microlocal_stalk,
    reflect_dimension, thin_indecomposables, Rep, RepError,
};

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{rat, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Base {
    Line,
    Circle,
}

/// Which half of the cotangent bundle a spoke lies in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Up,
    Down,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Spoke {
    pub at: Rational,
    pub dir: Direction,
}

impl Spoke {
    pub fn up(at: Rational) -> Self {
        Spoke { at, dir: Direction::Up }
    }

    pub fn down(at: Rational) -> Self {
        Spoke { at, dir: Direction::Down }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LagrangianError {
    #[error("marked points must be strictly increasing (at index {0})")]
    Unsorted(usize),
    #[error("circle points must lie in [0, 1), got {0}")]
    OutOfRange(Rational),
    #[error("spoke at {0} does not sit at a marked point")]
    StraySpoke(Rational),
    #[error("marked point {0} carries no spoke")]
    BarePoint(Rational),
}

/// The zero section together with spokes over marked points.
///
/// Spokes are kept sorted by position, with up spokes before down spokes at
/// a shared point; arrow `i` of the quiver corresponds to spoke `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConicLagrangian {
    base: Base,
    points: Vec<Rational>,
    spokes: Vec<Spoke>,
}

impl ConicLagrangian {
    pub fn new(base: Base, points: Vec<Rational>, mut spokes: Vec<Spoke>) -> Result<Self, LagrangianError> {
        for (i, w) in points.windows(2).enumerate() {
            if w[0] >= w[1] {
                return Err(LagrangianError::Unsorted(i + 1));
            }
        }
        if base == Base::Circle {
            if let Some(p) = points.iter().find(|p| p.is_negative_or_ge_one()) {
                return Err(LagrangianError::OutOfRange(p.clone()));
            }
        }
        if let Some(s) = spokes.iter().find(|s| points.binary_search(&s.at).is_err()) {
            return Err(LagrangianError::StraySpoke(s.at.clone()));
        }
        if let Some(p) = points.iter().find(|p| !spokes.iter().any(|s| &s.at == *p)) {
            return Err(LagrangianError::BarePoint(p.clone()));
        }
        spokes.sort();
        Ok(ConicLagrangian { base, points, spokes })
    }

    /// Marked points are read off the spokes. Circle positions are reduced mod 1.
    pub fn from_spokes(base: Base, spokes: Vec<Spoke>) -> Self {
        let spokes: Vec<Spoke> = match base {
            Base::Line => spokes,
            Base::Circle => spokes
                .into_iter()
                .map(|s| Spoke { at: frac(&s.at), dir: s.dir })
                .collect(),
        };
        let mut points: Vec<Rational> = spokes.iter().map(|s| s.at.clone()).collect();
        points.sort();
        points.dedup();
        ConicLagrangian::new(base, points, spokes).expect("points derived from spokes")
    }

    /// The zero section of a line or circle with nothing else.
    pub fn zero_section(base: Base) -> Self {
        ConicLagrangian { base, points: Vec::new(), spokes: Vec::new() }
    }

    /// Up spoke at `x₋ = -1`, both spokes at `0`, down spoke at `x₊ = 1`.
    pub fn cross() -> Self {
        ConicLagrangian::from_spokes(
            Base::Line,
            vec![
                Spoke::up(rat(-1)),
                Spoke::up(rat(0)),
                Spoke::down(rat(0)),
                Spoke::down(rat(1)),
            ],
        )
    }

    /// A circle with `up` up spokes at the `up`-th roots of unity and `down`
    /// down spokes at the `down`-th roots, as fractions of a turn.
    pub fn wheel(up: usize, down: usize) -> Self {
        let mut spokes = Vec::new();
        for i in 0..up {
            spokes.push(Spoke::up(Rational::new(i.into(), up.into())));
        }
        for i in 0..down {
            spokes.push(Spoke::down(Rational::new(i.into(), down.into())));
        }
        ConicLagrangian::from_spokes(Base::Circle, spokes)
    }

    pub fn base(&self) -> Base {
        self.base
    }

    pub fn points(&self) -> &[Rational] {
        &self.points
    }

    pub fn spokes(&self) -> &[Spoke] {
        &self.spokes
    }

    pub fn count(&self, dir: Direction) -> usize {
        self.spokes.iter().filter(|s| s.dir == dir).count()
    }

    fn has(&self, point: usize, dir: Direction) -> bool {
        self.spokes.iter().any(|s| s.at == self.points[point] && s.dir == dir)
    }

    fn point_index(&self, x: &Rational) -> usize {
        self.points.binary_search(x).expect("spoke at a marked point")
    }

    /// Move the spokes to a canonical position keeping the counts per side.
    ///
    /// With `u` up and `d` down spokes, up spokes occupy the first `u` slots
    /// and down spokes the last `d`; when both kinds occur they share one slot,
    /// so there are `u + d - 1` slots. Slots are the integers `0, 1, ...` on a
    /// line and equally spaced fractions of a turn on a circle.
    pub fn normalize(&self) -> ConicLagrangian {
        let u = self.count(Direction::Up);
        let d = self.count(Direction::Down);
        let shared = usize::from(u > 0 && d > 0);
        let slots = u + d - shared;
        let pos = |i: usize| match self.base {
            Base::Line => rat(i as i64),
            Base::Circle => Rational::new(i.into(), slots.into()),
        };
        let first_down = u - shared;
        let mut spokes: Vec<Spoke> = (0..u).map(|i| Spoke::up(pos(i))).collect();
        spokes.extend((0..d).map(|i| Spoke::down(pos(first_down + i))));
        ConicLagrangian::from_spokes(self.base, spokes)
    }
}

trait UnitRange {
    fn is_negative_or_ge_one(&self) -> bool;
}

impl UnitRange for Rational {
    fn is_negative_or_ge_one(&self) -> bool {
        *self < Rational::zero() || *self >= Rational::one()
    }
}

fn frac(x: &Rational) -> Rational {
    x - x.floor()
}

/// One end of an interval cell.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Bound {
    Infinite,
    Open(Rational),
    Closed(Rational),
}

impl Bound {
    fn at(x: &Rational, closed: bool) -> Bound {
        if closed {
            Bound::Closed(x.clone())
        } else {
            Bound::Open(x.clone())
        }
    }

    pub fn value(&self) -> Option<&Rational> {
        match self {
            Bound::Infinite => None,
            Bound::Open(x) | Bound::Closed(x) => Some(x),
        }
    }

    pub fn is_closed(&self) -> bool {
        matches!(self, Bound::Closed(_))
    }
}

/// A piece of the partition of the base. On a circle an interval whose
/// upper end is not above its lower end wraps through `0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Cell {
    Whole,
    Point(Rational),
    Interval { lower: Bound, upper: Bound },
}

impl Cell {
    pub fn is_point(&self) -> bool {
        matches!(self, Cell::Point(_))
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Whole => write!(f, "(all)"),
            Cell::Point(x) => write!(f, "{{{x}}}"),
            Cell::Interval { lower, upper } => {
                match lower {
                    Bound::Infinite => write!(f, "(-inf")?,
                    Bound::Open(x) => write!(f, "({x}")?,
                    Bound::Closed(x) => write!(f, "[{x}")?,
                }
                match upper {
                    Bound::Infinite => write!(f, ", inf)"),
                    Bound::Open(x) => write!(f, ", {x})"),
                    Bound::Closed(x) => write!(f, ", {x}]"),
                }
            }
        }
    }
}

/// The partition of the base cut out by the spokes, in base order.
///
/// Circle cells start at the least marked point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    cells: Vec<Cell>,
    /// Per marked point: the cell containing it, the interval to its left
    /// and the interval to its right.
    home: Vec<usize>,
    left: Vec<usize>,
    right: Vec<usize>,
}

impl Partition {
    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Index of the cell containing the `i`-th marked point.
    pub fn home(&self, point: usize) -> usize {
        self.home[point]
    }
}

/// Cut the base into points and intervals.
///
/// A point carrying spokes of both kinds is its own cell. Otherwise a point
/// with only up spokes belongs to the interval on its right and a point with
/// only down spokes to the interval on its left.
pub fn partition(lag: &ConicLagrangian) -> Partition {
    let k = lag.points.len();
    if k == 0 {
        return Partition { cells: vec![Cell::Whole], home: vec![], left: vec![], right: vec![] };
    }
    let up: Vec<bool> = (0..k).map(|i| lag.has(i, Direction::Up)).collect();
    let down: Vec<bool> = (0..k).map(|i| lag.has(i, Direction::Down)).collect();
    let both = |i: usize| up[i] && down[i];
    // the interval leaving point i includes it iff it is up-only,
    // the interval arriving at point i includes it iff it is down-only
    let leaving = |i: usize| Bound::at(&lag.points[i], up[i] && !down[i]);
    let arriving = |i: usize| Bound::at(&lag.points[i], down[i] && !up[i]);

    let mut cells = Vec::new();
    let mut home = vec![0; k];
    let mut left = vec![0; k];
    let mut right = vec![0; k];
    match lag.base {
        Base::Line => {
            cells.push(Cell::Interval { lower: Bound::Infinite, upper: arriving(0) });
            for i in 0..k {
                left[i] = cells.len() - 1;
                if both(i) {
                    cells.push(Cell::Point(lag.points[i].clone()));
                }
                let upper = if i + 1 < k { arriving(i + 1) } else { Bound::Infinite };
                cells.push(Cell::Interval { lower: leaving(i), upper });
                right[i] = cells.len() - 1;
            }
        }
        Base::Circle => {
            for i in 0..k {
                if both(i) {
                    cells.push(Cell::Point(lag.points[i].clone()));
                }
                let next = (i + 1) % k;
                cells.push(Cell::Interval { lower: leaving(i), upper: arriving(next) });
                right[i] = cells.len() - 1;
            }
            for i in 0..k {
                left[i] = right[(i + k - 1) % k];
            }
        }
    }
    let mut point_cell = 0;
    for i in 0..k {
        while both(i) && cells[point_cell] != Cell::Point(lag.points[i].clone()) {
            point_cell += 1;
        }
        home[i] = if both(i) {
            point_cell
        } else if up[i] {
            right[i]
        } else {
            left[i]
        };
    }
    Partition { cells, home, left, right }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Arrow {
    pub source: usize,
    pub target: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuiverError {
    #[error("arrow {arrow} mentions vertex {vertex}, but there are only {count} vertices")]
    BadVertex { arrow: usize, vertex: usize, count: usize },
    #[error("vertex {0} is neither a sink nor a source")]
    NotReflectable(usize),
    #[error("the quiver has an oriented cycle")]
    Cyclic,
}

/// A finite directed multigraph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Quiver {
    vertices: usize,
    arrows: Vec<Arrow>,
}

impl Quiver {
    pub fn new(vertices: usize, arrows: Vec<Arrow>) -> Result<Self, QuiverError> {
        for (i, a) in arrows.iter().enumerate() {
            for v in [a.source, a.target] {
                if v >= vertices {
                    return Err(QuiverError::BadVertex { arrow: i, vertex: v, count: vertices });
                }
            }
        }
        Ok(Quiver { vertices, arrows })
    }

    pub fn from_pairs(vertices: usize, pairs: &[(usize, usize)]) -> Result<Self, QuiverError> {
        Quiver::new(vertices, pairs.iter().map(|&(source, target)| Arrow { source, target }).collect())
    }

    /// Type `A_n`: arrow `i` joins vertices `i` and `i + 1`, pointing right
    /// when `rightward[i]` holds.
    pub fn linear(rightward: &[bool]) -> Self {
        let arrows = rightward
            .iter()
            .enumerate()
            .map(|(i, &r)| if r { Arrow { source: i, target: i + 1 } } else { Arrow { source: i + 1, target: i } })
            .collect();
        Quiver { vertices: rightward.len() + 1, arrows }
    }

    /// Two vertices and two parallel arrows `0 → 1`.
    pub fn kronecker() -> Self {
        Quiver::from_pairs(2, &[(0, 1), (0, 1)]).expect("valid")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, a: usize) -> Arrow {
        self.arrows[a]
    }

    /// Arrows with `v` as an end, loops once.
    pub fn incident(&self, v: usize) -> Vec<usize> {
        (0..self.arrows.len())
            .filter(|&a| self.arrows[a].source == v || self.arrows[a].target == v)
            .collect()
    }

    pub fn is_sink(&self, v: usize) -> bool {
        self.arrows.iter().all(|a| a.source != v)
    }

    pub fn is_source(&self, v: usize) -> bool {
        self.arrows.iter().all(|a| a.target != v)
    }

    /// Reverse every arrow at a sink or a source.
    pub fn reflect(&self, v: usize) -> Result<Quiver, QuiverError> {
        if !(self.is_sink(v) || self.is_source(v)) {
            return Err(QuiverError::NotReflectable(v));
        }
        let arrows = self
            .arrows
            .iter()
            .map(|a| {
                if a.source == v || a.target == v {
                    Arrow { source: a.target, target: a.source }
                } else {
                    *a
                }
            })
            .collect();
        Ok(Quiver { vertices: self.vertices, arrows })
    }

    /// Vertices in an order where every arrow goes forward.
    pub fn topological_order(&self) -> Result<Vec<usize>, QuiverError> {
        let mut indegree = vec![0usize; self.vertices];
        for a in &self.arrows {
            indegree[a.target] += 1;
        }
        let mut ready: Vec<usize> = (0..self.vertices).filter(|&v| indegree[v] == 0).rev().collect();
        let mut order = Vec::with_capacity(self.vertices);
        while let Some(v) = ready.pop() {
            order.push(v);
            for a in self.arrows.iter().filter(|a| a.source == v) {
                indegree[a.target] -= 1;
                if indegree[a.target] == 0 {
                    ready.push(a.target);
                }
            }
        }
        if order.len() == self.vertices {
            Ok(order)
        } else {
            Err(QuiverError::Cyclic)
        }
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_ok()
    }

    /// All paths starting at `v`, as arrow sequences, the trivial path first.
    pub fn paths_from(&self, v: usize) -> Result<Vec<Path>, QuiverError> {
        self.topological_order()?;
        let mut out = vec![Path { start: v, end: v, arrows: Vec::new() }];
        let mut i = 0;
        while i < out.len() {
            let end = out[i].end;
            for (a, arrow) in self.arrows.iter().enumerate().filter(|(_, x)| x.source == end) {
                let mut arrows = out[i].arrows.clone();
                arrows.push(a);
                out.push(Path { start: v, end: arrow.target, arrows });
            }
            i += 1;
        }
        Ok(out)
    }

    /// Underlying graph is a path with one arrow per consecutive pair,
    /// vertices numbered along it.
    pub fn is_linear(&self) -> bool {
        self.arrows.len() + 1 == self.vertices
            && self.arrows.iter().enumerate().all(|(i, a)| {
                (a.source == i && a.target == i + 1) || (a.source == i + 1 && a.target == i)
            })
    }

    /// `• ← • → •` style picture of a linear quiver.
    pub fn picture(&self) -> Option<String> {
        if !self.is_linear() {
            return None;
        }
        let mut s = String::from("•");
        for (i, a) in self.arrows.iter().enumerate() {
            s.push_str(if a.source == i { " → •" } else { " ← •" });
        }
        Some(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path {
    pub start: usize,
    pub end: usize,
    pub arrows: Vec<usize>,
}

/// The quiver of a Lagrangian together with the cells labelling its vertices.
///
/// Arrow `i` comes from spoke `i`. A circle with no spokes gets one extra
/// loop standing for the monodromy of a local system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LagrangianQuiver {
    pub quiver: Quiver,
    pub partition: Partition,
    pub monodromy: Option<usize>,
}

/// An up spoke at `x` points from the cell holding `x` to the interval on
/// its left, a down spoke to the interval on its right.
pub fn quiver_from_lagrangian(lag: &ConicLagrangian) -> LagrangianQuiver {
    let part = partition(lag);
    let mut arrows: Vec<Arrow> = lag
        .spokes
        .iter()
        .map(|s| {
            let i = lag.point_index(&s.at);
            let target = match s.dir {
                Direction::Up => part.left[i],
                Direction::Down => part.right[i],
            };
            Arrow { source: part.home[i], target }
        })
        .collect();
    let monodromy = if lag.base == Base::Circle && lag.spokes.is_empty() {
        arrows.push(Arrow { source: 0, target: 0 });
        Some(0)
    } else {
        None
    };
    let quiver = Quiver { vertices: part.len(), arrows };
    LagrangianQuiver { quiver, partition: part, monodromy }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ratio;
    use proptest::prelude::*;

    fn cells(lag: &ConicLagrangian) -> Vec<String> {
        partition(lag).cells().iter().map(ToString::to_string).collect()
    }

    /// `(lower, lower closed, upper, upper closed)`, `None` for an infinite end.
    type Span = (Option<Rational>, bool, Option<Rational>, bool);

    fn span(c: &Cell) -> Span {
        match c {
            Cell::Whole => (None, false, None, false),
            Cell::Point(x) => (Some(x.clone()), true, Some(x.clone()), true),
            Cell::Interval { lower, upper } => {
                (lower.value().cloned(), lower.is_closed(), upper.value().cloned(), upper.is_closed())
            }
        }
    }

    fn meets(a: &Span, b: &Span) -> bool {
        let (lo, lo_closed) = match (&a.0, &b.0) {
            (None, _) => (b.0.clone(), b.1),
            (_, None) => (a.0.clone(), a.1),
            (Some(x), Some(y)) if x > y => (a.0.clone(), a.1),
            (Some(x), Some(y)) if y > x => (b.0.clone(), b.1),
            _ => (a.0.clone(), a.1 && b.1),
        };
        let (hi, hi_closed) = match (&a.2, &b.2) {
            (None, _) => (b.2.clone(), b.3),
            (_, None) => (a.2.clone(), a.3),
            (Some(x), Some(y)) if x < y => (a.2.clone(), a.3),
            (Some(x), Some(y)) if y < x => (b.2.clone(), b.3),
            _ => (a.2.clone(), a.3 && b.3),
        };
        match (lo, hi) {
            (Some(l), Some(h)) => l < h || (l == h && lo_closed && hi_closed),
            _ => true,
        }
    }

    fn closure(s: &Span) -> Span {
        (s.0.clone(), s.0.is_some(), s.2.clone(), s.2.is_some())
    }

    /// Arrows `I → J` for distinct cells with `closure(J) ∩ I ≠ ∅`.
    fn closure_arrows(part: &Partition) -> Vec<(usize, usize)> {
        let spans: Vec<Span> = part.cells().iter().map(span).collect();
        let mut out = Vec::new();
        for i in 0..spans.len() {
            for j in 0..spans.len() {
                if i != j && meets(&spans[i], &closure(&spans[j])) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    fn arrow_pairs(q: &Quiver) -> Vec<(usize, usize)> {
        let mut v: Vec<_> = q.arrows().iter().map(|a| (a.source, a.target)).collect();
        v.sort();
        v
    }

    #[test]
    fn cross_partition_and_quiver() {
        let lag = ConicLagrangian::cross();
        assert_eq!(cells(&lag), ["(-inf, -1)", "[-1, 0)", "{0}", "(0, 1]", "(1, inf)"]);
        let lq = quiver_from_lagrangian(&lag);
        assert_eq!(lq.quiver.picture().unwrap(), "• ← • ← • → • → •");
        assert_eq!(arrow_pairs(&lq.quiver), closure_arrows(&lq.partition));
    }

    #[test]
    fn empty_line_is_one_cell() {
        let lag = ConicLagrangian::zero_section(Base::Line);
        assert_eq!(cells(&lag), ["(all)"]);
        let lq = quiver_from_lagrangian(&lag);
        assert_eq!(lq.quiver.vertex_count(), 1);
        assert!(lq.quiver.arrows().is_empty());
    }

    #[test]
    fn single_up_spoke_on_a_line() {
        let lag = ConicLagrangian::from_spokes(Base::Line, vec![Spoke::up(rat(0))]);
        assert_eq!(cells(&lag), ["(-inf, 0)", "[0, inf)"]);
        let lq = quiver_from_lagrangian(&lag);
        assert_eq!(arrow_pairs(&lq.quiver), [(1, 0)]);
    }

    #[test]
    fn circle_with_both_spokes_at_one_point_is_kronecker() {
        let lag = ConicLagrangian::from_spokes(Base::Circle, vec![Spoke::up(rat(0)), Spoke::down(rat(0))]);
        let lq = quiver_from_lagrangian(&lag);
        assert_eq!(cells(&lag), ["{0}", "(0, 0)"]);
        assert_eq!(lq.quiver, Quiver::kronecker());
        let apart = quiver_from_lagrangian(&ConicLagrangian::from_spokes(
            Base::Circle,
            vec![Spoke::up(rat(0)), Spoke::down(ratio(1, 2))],
        ));
        assert_eq!(apart.quiver, Quiver::kronecker());
    }

    #[test]
    fn circle_loops() {
        let one = quiver_from_lagrangian(&ConicLagrangian::wheel(1, 0));
        assert_eq!(arrow_pairs(&one.quiver), [(0, 0)]);
        assert_eq!(one.monodromy, None);
        let bare = quiver_from_lagrangian(&ConicLagrangian::zero_section(Base::Circle));
        assert_eq!(arrow_pairs(&bare.quiver), [(0, 0)]);
        assert_eq!(bare.monodromy, Some(0));
    }

    #[test]
    fn wheel_quiver_shape() {
        for (u, d) in [(1, 1), (2, 1), (2, 3), (3, 3)] {
            let lq = quiver_from_lagrangian(&ConicLagrangian::wheel(u, d));
            assert_eq!(lq.quiver.vertex_count(), u + d);
            assert_eq!(lq.quiver.arrows().len(), u + d);
            assert!(lq.quiver.is_acyclic());
        }
    }

    #[test]
    fn normalization() {
        let cross = ConicLagrangian::cross();
        let n = cross.normalize();
        assert_eq!(n.points().len(), 3);
        assert_eq!(n.count(Direction::Up), 2);
        assert_eq!(n.count(Direction::Down), 2);
        assert_eq!(n.normalize(), n);
        let moved = ConicLagrangian::from_spokes(
            Base::Circle,
            vec![
                Spoke::up(ratio(1, 7)),
                Spoke::up(ratio(5, 7)),
                Spoke::down(ratio(1, 3)),
                Spoke::down(ratio(1, 2)),
                Spoke::down(ratio(9, 10)),
            ],
        );
        assert_eq!(moved.normalize(), ConicLagrangian::wheel(2, 3).normalize());
    }

    #[test]
    fn validation() {
        let err = ConicLagrangian::new(Base::Line, vec![rat(1), rat(0)], vec![]).unwrap_err();
        assert_eq!(err, LagrangianError::Unsorted(1));
        let err = ConicLagrangian::new(Base::Line, vec![rat(0)], vec![]).unwrap_err();
        assert_eq!(err, LagrangianError::BarePoint(rat(0)));
        let err = ConicLagrangian::new(Base::Circle, vec![rat(2)], vec![Spoke::up(rat(2))]).unwrap_err();
        assert_eq!(err, LagrangianError::OutOfRange(rat(2)));
    }

    fn line_lagrangian() -> impl Strategy<Value = ConicLagrangian> {
        prop::collection::vec(1u8..4, 0..6).prop_map(|kinds| {
            let mut spokes = Vec::new();
            for (i, k) in kinds.into_iter().enumerate() {
                let x = rat(i as i64);
                if k & 1 == 1 {
                    spokes.push(Spoke::up(x.clone()));
                }
                if k & 2 == 2 {
                    spokes.push(Spoke::down(x));
                }
            }
            ConicLagrangian::from_spokes(Base::Line, spokes)
        })
    }

    proptest! {
        #[test]
        fn line_quivers_follow_closure_rule(lag in line_lagrangian()) {
            let lq = quiver_from_lagrangian(&lag);
            prop_assert_eq!(lq.quiver.vertex_count(), lag.spokes().len() + 1);
            prop_assert!(lq.quiver.is_linear());
            prop_assert_eq!(arrow_pairs(&lq.quiver), closure_arrows(&lq.partition));
            for (i, s) in lag.spokes().iter().enumerate() {
                let a = lq.quiver.arrow(i);
                match s.dir {
                    Direction::Up => prop_assert_eq!(a.target + 1, a.source),
                    Direction::Down => prop_assert_eq!(a.source + 1, a.target),
                }
            }
        }
    }
}
