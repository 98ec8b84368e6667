//! Balloons (weighted projective lines), their chains and rings, line-bundle
//! cohomology by monomial counting, and the comparison with wheel quivers.

mod descent;

pub use descent::{perf_hom, BalloonShape, DescentComplex, Node, Summand};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{rat, Matrix};
use crate::quiver::{hom_ext, microlocal_stalk, quiver_from_lagrangian, ConicLagrangian, Direction, Rep};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MirrorError {
    #[error("balloon weights must be positive, got ({0}, {1})")]
    Weights(u32, u32),
    #[error("cannot read line bundle label {0:?}; expected O or O(i,j)")]
    Label(String),
    #[error("need at least two indices, got {0}")]
    TooFewIndices(usize),
    #[error("objects live on different shapes")]
    ShapeMismatch,
    #[error("balloon {balloon}: {reason}")]
    Descent { balloon: usize, reason: String },
    #[error("node {node}, degree {degree}: {reason}")]
    Gluing { node: usize, degree: i32, reason: String },
}

/// `O(i·x₁ + j·x₂)`, where `x₁` and `x₂` are the two orbifold points and
/// `a₁·x₁ = a₂·x₂` is the class of an ordinary point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LineBundle {
    pub x1: i64,
    pub x2: i64,
}

impl LineBundle {
    pub const TRIVIAL: LineBundle = LineBundle { x1: 0, x2: 0 };

    pub fn new(x1: i64, x2: i64) -> Self {
        LineBundle { x1, x2 }
    }

    pub fn minus(self, other: LineBundle) -> LineBundle {
        LineBundle::new(self.x1 - other.x1, self.x2 - other.x2)
    }

    pub fn plus(self, other: LineBundle) -> LineBundle {
        LineBundle::new(self.x1 + other.x1, self.x2 + other.x2)
    }
}

impl fmt::Display for LineBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self == LineBundle::TRIVIAL {
            f.write_str("O")
        } else {
            write!(f, "O({},{})", self.x1, self.x2)
        }
    }
}

impl FromStr for LineBundle {
    type Err = MirrorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || MirrorError::Label(s.to_string());
        let s = s.trim();
        if s == "O" {
            return Ok(LineBundle::TRIVIAL);
        }
        let inner = s.strip_prefix("O(").and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
        let (i, j) = inner.split_once(',').ok_or_else(bad)?;
        Ok(LineBundle::new(i.trim().parse().map_err(|_| bad())?, j.trim().parse().map_err(|_| bad())?))
    }
}

/// The weighted projective line with orbifold points of orders `a1` and `a2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Balloon {
    pub a1: u32,
    pub a2: u32,
}

impl Balloon {
    pub fn new(a1: u32, a2: u32) -> Result<Self, MirrorError> {
        if a1 == 0 || a2 == 0 {
            return Err(MirrorError::Weights(a1, a2));
        }
        Ok(Balloon { a1, a2 })
    }

    /// The canonical bundle `O(-x₁ - x₂)`.
    pub fn canonical(&self) -> LineBundle {
        LineBundle::new(-1, -1)
    }

    /// The class of an ordinary point, `a₁·x₁`.
    pub fn point(&self) -> LineBundle {
        LineBundle::new(i64::from(self.a1), 0)
    }

    /// Monomials `s^p t^q` with `p, q ≥ 0` and `p·x₁ + q·x₂ = L`, where `s`
    /// vanishes at `x₁` and `t` at `x₂`. Each is `(p, q)`.
    pub fn monomials(&self, l: LineBundle) -> Vec<(i64, i64)> {
        let (a1, a2) = (i64::from(self.a1), i64::from(self.a2));
        let bound = l.x1.abs() + l.x2.abs() + 1;
        (-bound..=bound)
            .map(|m| (l.x1 + a1 * m, l.x2 - a2 * m))
            .filter(|&(p, q)| p >= 0 && q >= 0)
            .collect()
    }

    pub fn h0(&self, l: LineBundle) -> usize {
        self.monomials(l).len()
    }

    /// By Serre duality, `h¹(L) = h⁰(K ⊗ L⁻¹)`.
    pub fn h1(&self, l: LineBundle) -> usize {
        self.h0(self.canonical().minus(l))
    }

    pub fn hom(&self, from: LineBundle, to: LineBundle) -> usize {
        self.h0(to.minus(from))
    }

    pub fn ext(&self, from: LineBundle, to: LineBundle) -> usize {
        self.h1(to.minus(from))
    }

    /// The residue of `L` at `x₁` and at `x₂`: the characters of the
    /// stabilisers acting on the fibre.
    pub fn characters(&self, l: LineBundle) -> (u32, u32) {
        let r = |x: i64, a: u32| x.rem_euclid(i64::from(a)) as u32;
        (r(l.x1, self.a1), r(l.x2, self.a2))
    }

    /// `O(x)` for `0 ≤ x ≤ a₁·x₁`: `O`, `O(k·x₁)` and `O(k·x₂)` for
    /// `0 < k < aᵢ`, and the point class.
    pub fn tilting(&self) -> Vec<LineBundle> {
        let mut out = vec![LineBundle::TRIVIAL];
        out.extend((1..i64::from(self.a1)).map(|k| LineBundle::new(k, 0)));
        out.extend((1..i64::from(self.a2)).map(|k| LineBundle::new(0, k)));
        out.push(self.point());
        out
    }
}

/// `dim Hom(L, M)` on the balloon with weights `(a1, a2)`.
pub fn balloon_hom(a1: u32, a2: u32, from: LineBundle, to: LineBundle) -> Result<usize, MirrorError> {
    Ok(Balloon::new(a1, a2)?.hom(from, to))
}

/// Pairs of polynomials of degree at most `d` in `x` and in `y` that agree
/// at the origin: the degree-`d` part of the functions on two lines meeting
/// in a node.
pub fn nodal_end_ring(d: usize) -> usize {
    let n = d + 1;
    let mut evaluation = Matrix::zeros(1, 2 * n);
    evaluation[(0, 0)] = rat(1);
    evaluation[(0, n)] = rat(-1);
    2 * n - evaluation.rank()
}

/// Outcome of comparing a wheel quiver with a balloon.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BbReport {
    /// Up and down spokes of the wheel.
    pub wheel: (u32, u32),
    /// Weights of the balloon.
    pub balloon: (u32, u32),
    /// `dim Hom(P_v, P_w)` and `dim Ext¹(P_v, P_w)` for the indecomposable projectives.
    pub quiver_hom: Vec<Vec<usize>>,
    pub quiver_ext: Vec<Vec<usize>>,
    /// The same for the tilting line bundles.
    pub balloon_hom: Vec<Vec<usize>>,
    pub balloon_ext: Vec<Vec<usize>>,
    /// Tilting bundle `i` corresponds to projective `permutation[i]`.
    pub permutation: Option<Vec<usize>>,
    /// Each projective has total microlocal rank 1 along the up spokes and along the down spokes.
    pub stalks_match: bool,
    pub mismatch: Option<String>,
}

impl BbReport {
    pub fn passed(&self) -> bool {
        self.mismatch.is_none()
    }
}

/// Compare the wheel with `a1` up and `a2` down spokes against the balloon with weights `(a1, a2)`.
pub fn bb_compare(a1: u32, a2: u32) -> Result<BbReport, MirrorError> {
    bb_compare_sides((a1, a2), (a1, a2))
}

/// Compare a wheel and a balloon that need not have matching weights.
pub fn bb_compare_sides(wheel: (u32, u32), balloon: (u32, u32)) -> Result<BbReport, MirrorError> {
    let b = Balloon::new(balloon.0, balloon.1)?;
    if wheel.0 == 0 || wheel.1 == 0 {
        return Err(MirrorError::Weights(wheel.0, wheel.1));
    }
    let lag = ConicLagrangian::wheel(wheel.0 as usize, wheel.1 as usize).normalize();
    let q = quiver_from_lagrangian(&lag).quiver;
    let projectives: Vec<Rep> =
        (0..q.vertex_count()).map(|v| Rep::projective(&q, v).expect("wheel quivers are acyclic")).collect();
    let (quiver_hom, quiver_ext) =
        tables(projectives.len(), |i, j| hom_ext(&projectives[i], &projectives[j]).expect("same quiver"));
    let tilting = b.tilting();
    let (balloon_hom, balloon_ext) =
        tables(tilting.len(), |i, j| (b.hom(tilting[i], tilting[j]), b.ext(tilting[i], tilting[j])));

    let stalks_match = projectives.iter().all(|p| {
        [Direction::Up, Direction::Down].iter().all(|&dir| {
            let total: i64 = lag
                .spokes()
                .iter()
                .enumerate()
                .filter(|(_, s)| s.dir == dir)
                .map(|(a, _)| {
                    let (k, c) = microlocal_stalk(p, a);
                    c as i64 - k as i64
                })
                .sum();
            total == 1
        })
    });
    let permutation = if quiver_hom.len() == balloon_hom.len() {
        matching_permutation(&[&quiver_hom, &quiver_ext], &[&balloon_hom, &balloon_ext])
    } else {
        None
    };
    let mismatch = if quiver_hom.len() != balloon_hom.len() {
        Some(format!("{} projectives against {} tilting bundles", quiver_hom.len(), balloon_hom.len()))
    } else if permutation.is_none() {
        Some(first_difference(&quiver_hom, &balloon_hom))
    } else if !stalks_match {
        Some("a projective has microlocal rank other than 1 along one side".to_string())
    } else {
        None
    };
    Ok(BbReport {
        wheel,
        balloon,
        quiver_hom,
        quiver_ext,
        balloon_hom,
        balloon_ext,
        permutation,
        stalks_match,
        mismatch,
    })
}

/// Hom and Ext tables from a function giving both dimensions.
fn tables(n: usize, f: impl Fn(usize, usize) -> (usize, usize)) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let (mut hom, mut ext) = (vec![vec![0; n]; n], vec![vec![0; n]; n]);
    for i in 0..n {
        for j in 0..n {
            (hom[i][j], ext[i][j]) = f(i, j);
        }
    }
    (hom, ext)
}

/// A bijection `π` with `left[k][π i][π j] = right[k][i][j]` for every table `k`.
fn matching_permutation(left: &[&Vec<Vec<usize>>], right: &[&Vec<Vec<usize>>]) -> Option<Vec<usize>> {
    let n = left[0].len();
    let mut perm = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn extend(
        perm: &mut Vec<usize>,
        used: &mut [bool],
        left: &[&Vec<Vec<usize>>],
        right: &[&Vec<Vec<usize>>],
    ) -> bool {
        let i = perm.len();
        if i == used.len() {
            return true;
        }
        for c in 0..used.len() {
            if used[c] {
                continue;
            }
            perm.push(c);
            let fits = (0..=i).all(|j| {
                left.iter().zip(right).all(|(l, r)| l[perm[i]][perm[j]] == r[i][j] && l[perm[j]][perm[i]] == r[j][i])
            });
            if fits {
                used[c] = true;
                if extend(perm, used, left, right) {
                    return true;
                }
                used[c] = false;
            }
            perm.pop();
        }
        false
    }
    extend(&mut perm, &mut used, left, right).then_some(perm)
}

/// Locate the first differing entry after sorting both tables' rows.
fn first_difference(left: &[Vec<usize>], right: &[Vec<usize>]) -> String {
    let profile = |t: &[Vec<usize>]| {
        let mut rows: Vec<Vec<usize>> = t
            .iter()
            .map(|r| {
                let mut r = r.clone();
                r.sort_unstable();
                r
            })
            .collect();
        rows.sort();
        rows
    };
    let (l, r) = (profile(left), profile(right));
    match l.iter().zip(&r).position(|(a, b)| a != b) {
        Some(i) => format!("sorted Hom row {i}: quiver {:?}, balloon {:?}", l[i], r[i]),
        None => "Hom tables agree row by row but admit no common ordering".to_string(),
    }
}
