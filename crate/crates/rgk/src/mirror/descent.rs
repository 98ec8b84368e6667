//! Complexes of line bundles on a chain or ring of balloons, glued at the nodes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Balloon, LineBundle, MirrorError};
use crate::cpm::{Indices, Shape};
use crate::homology::{fiber, GradedDims};
use crate::linalg::{rat, Matrix, Rational};
use num_traits::Zero;

/// Where balloon `left`'s second orbifold point meets balloon `right`'s first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub left: usize,
    pub right: usize,
    pub order: u32,
}

/// Balloons in a row, or in a ring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BalloonShape {
    pub cyclic: bool,
    pub balloons: Vec<Balloon>,
}

impl BalloonShape {
    /// A path with indices `a₀, …, aₙ` gives `n` balloons, balloon `k` having
    /// weights `(aₖ, aₖ₊₁)`. A ring of `n` indices gives `n` balloons.
    pub fn from_indices(indices: &Indices) -> Result<Self, MirrorError> {
        let a: Vec<u32> = indices.values.iter().map(|&v| v as u32).collect();
        let cyclic = match indices.shape {
            Shape::Path => false,
            Shape::Cycle => true,
            Shape::Other => return Err(MirrorError::ShapeMismatch),
        };
        if a.len() < 2 {
            return Err(MirrorError::TooFewIndices(a.len()));
        }
        let count = if cyclic { a.len() } else { a.len() - 1 };
        let balloons = (0..count)
            .map(|k| Balloon::new(a[k], a[(k + 1) % a.len()]))
            .collect::<Result<_, _>>()?;
        Ok(BalloonShape { cyclic, balloons })
    }

    pub fn nodes(&self) -> Vec<Node> {
        let n = self.balloons.len();
        let count = if self.cyclic { n } else { n - 1 };
        (0..count)
            .map(|k| Node { left: k, right: (k + 1) % n, order: self.balloons[k].a2 })
            .collect()
    }
}

/// One line bundle placed in a cohomological degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summand {
    pub degree: i32,
    pub bundle: LineBundle,
}

/// A direct sum of shifted line bundles on each balloon, with an
/// identification of fibres at every node.
///
/// `gluings[n]` sends the fibres of the left balloon's summands at node `n`
/// to those of the right balloon's summands.
#[derive(Debug, Clone, PartialEq)]
pub struct DescentComplex {
    pub shape: BalloonShape,
    pub pieces: Vec<Vec<Summand>>,
    pub gluings: Vec<Matrix>,
}

impl DescentComplex {
    /// One line bundle per balloon in degree zero, glued by identities.
    pub fn line(shape: &BalloonShape, bundles: &[LineBundle]) -> Result<Self, MirrorError> {
        let pieces: Vec<Vec<Summand>> =
            bundles.iter().map(|&bundle| vec![Summand { degree: 0, bundle }]).collect();
        let gluings = shape.nodes().iter().map(|_| Matrix::identity(1)).collect();
        let out = DescentComplex { shape: shape.clone(), pieces, gluings };
        out.check()?;
        Ok(out)
    }

    pub fn structure(shape: &BalloonShape) -> Self {
        DescentComplex::line(shape, &vec![LineBundle::TRIVIAL; shape.balloons.len()])
            .expect("the structure sheaf descends")
    }

    /// Multiply the gluing at `node` by `t`.
    pub fn twisted(mut self, node: usize, t: Rational) -> Result<Self, MirrorError> {
        let g = self
            .gluings
            .get(node)
            .ok_or_else(|| MirrorError::Gluing { node, degree: 0, reason: "no such node".into() })?;
        self.gluings[node] = g.scale(&t);
        self.check()?;
        Ok(self)
    }

    /// `E[k]`: every summand moves down `k` degrees.
    pub fn shift(&self, k: i32) -> Self {
        let mut out = self.clone();
        for s in out.pieces.iter_mut().flatten() {
            s.degree -= k;
        }
        out
    }

    pub fn direct_sum(&self, other: &DescentComplex) -> Result<Self, MirrorError> {
        if self.shape != other.shape {
            return Err(MirrorError::ShapeMismatch);
        }
        let pieces = self.pieces.iter().zip(&other.pieces).map(|(a, b)| [a.clone(), b.clone()].concat()).collect();
        let gluings =
            self.gluings.iter().zip(&other.gluings).map(|(a, b)| Matrix::block_diag(&[a.clone(), b.clone()])).collect();
        Ok(DescentComplex { shape: self.shape.clone(), pieces, gluings })
    }

    /// Gluings must be invertible, preserve degree, and only connect fibres
    /// with the same character.
    pub fn check(&self) -> Result<(), MirrorError> {
        if self.pieces.len() != self.shape.balloons.len() {
            return Err(MirrorError::ShapeMismatch);
        }
        let nodes = self.shape.nodes();
        if self.gluings.len() != nodes.len() {
            return Err(MirrorError::ShapeMismatch);
        }
        for (n, (node, g)) in nodes.iter().zip(&self.gluings).enumerate() {
            let (left, right) = (&self.pieces[node.left], &self.pieces[node.right]);
            let fail = |degree: i32, reason: String| MirrorError::Gluing { node: n, degree, reason };
            if g.shape() != (right.len(), left.len()) || !g.is_invertible() {
                return Err(fail(0, format!("gluing of shape {:?} is not an isomorphism", g.shape())));
            }
            let at_left = |s: &Summand| self.shape.balloons[node.left].characters(s.bundle).1;
            let at_right = |s: &Summand| self.shape.balloons[node.right].characters(s.bundle).0;
            for (i, r) in right.iter().enumerate() {
                for (j, l) in left.iter().enumerate() {
                    if g[(i, j)].is_zero() {
                        continue;
                    }
                    if r.degree != l.degree {
                        return Err(fail(l.degree, format!("entry ({i},{j}) mixes degrees")));
                    }
                    if at_left(l) != at_right(r) {
                        return Err(fail(l.degree, format!("entry ({i},{j}) joins characters {} and {}", at_left(l), at_right(r))));
                    }
                }
            }
        }
        Ok(())
    }
}

/// A basis vector of `H⁰` on one balloon: a monomial `(p, q)` mapping
/// summand `from` of the source to summand `to` of the target.
struct Section {
    balloon: usize,
    from: usize,
    to: usize,
    monomial: (i64, i64),
}

/// Graded dimensions of `Hom(E, F[k])`.
///
/// The Čech description: homs on each balloon, minus the homs at the nodes,
/// where a section at a node is compared through the gluings of `E` and `F`.
pub fn perf_hom(e: &DescentComplex, f: &DescentComplex) -> Result<GradedDims, MirrorError> {
    if e.shape != f.shape {
        return Err(MirrorError::ShapeMismatch);
    }
    e.check()?;
    f.check()?;
    let shape = &e.shape;
    let nodes = shape.nodes();

    let mut source: BTreeMap<i32, usize> = BTreeMap::new();
    let mut sections: BTreeMap<i32, Vec<Section>> = BTreeMap::new();
    for (k, b) in shape.balloons.iter().enumerate() {
        for (i, s) in e.pieces[k].iter().enumerate() {
            for (j, t) in f.pieces[k].iter().enumerate() {
                let degree = t.degree - s.degree;
                let l = t.bundle.minus(s.bundle);
                *source.entry(degree + 1).or_default() += b.h1(l);
                for monomial in b.monomials(l) {
                    *source.entry(degree).or_default() += 1;
                    sections.entry(degree).or_default().push(Section { balloon: k, from: i, to: j, monomial });
                }
            }
        }
    }

    // node homs, in the coordinates of the left balloon
    let mut rows: BTreeMap<i32, BTreeMap<(usize, usize, usize), usize>> = BTreeMap::new();
    for (n, node) in nodes.iter().enumerate() {
        let b = &shape.balloons[node.left];
        for (i, s) in e.pieces[node.left].iter().enumerate() {
            for (j, t) in f.pieces[node.left].iter().enumerate() {
                if b.characters(s.bundle).1 == b.characters(t.bundle).1 {
                    let row = rows.entry(t.degree - s.degree).or_default();
                    let next = row.len();
                    row.insert((n, i, j), next);
                }
            }
        }
    }
    let target: BTreeMap<i32, usize> = rows.iter().map(|(&d, r)| (d, r.len())).collect();

    let inverses: Vec<Matrix> =
        f.gluings.iter().map(|g| g.inverse().expect("checked gluings are invertible")).collect();
    let mut ranks: BTreeMap<i32, usize> = BTreeMap::new();
    for (&degree, cols) in &sections {
        let Some(row) = rows.get(&degree) else { continue };
        let mut m = Matrix::zeros(row.len(), cols.len());
        for (c, s) in cols.iter().enumerate() {
            let (p, q) = s.monomial;
            for (n, node) in nodes.iter().enumerate() {
                if node.left == s.balloon && q == 0 {
                    m[(row[&(n, s.from, s.to)], c)] += rat(1);
                }
                if node.right == s.balloon && p == 0 {
                    // G_F⁻¹ · e_{to,from} · G_E
                    let (ge, gf) = (&e.gluings[n], &inverses[n]);
                    for a in 0..f.pieces[node.left].len() {
                        for bb in 0..e.pieces[node.left].len() {
                            let v = &gf[(a, s.to)] * &ge[(s.from, bb)];
                            if !v.is_zero() {
                                m[(row[&(n, bb, a)], c)] -= v;
                            }
                        }
                    }
                }
            }
        }
        ranks.insert(degree, m.rank());
    }

    let graded = |map: &BTreeMap<i32, usize>| match (map.keys().next(), map.keys().next_back()) {
        (Some(&lo), Some(&hi)) => GradedDims::from_fn(lo, hi, |k| map.get(&k).copied().unwrap_or(0)),
        _ => GradedDims::zero(),
    };
    Ok(fiber(&graded(&source), &graded(&target), |k| ranks.get(&k).copied().unwrap_or(0)))
}
