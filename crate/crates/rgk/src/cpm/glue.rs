//! Objects glued from wheel representations and their Hom spaces.

use crate::homology::{fiber, GradedDims};
use crate::linalg::{Matrix, Rational};
use crate::quiver::{ext_basis, hom_basis, microlocal_stalk, Rep};
use num_traits::One;

use super::{dualizable, CpmError, WheelCover};
use crate::ribbon::ChordalStructure;

/// Bases for the cohomology of the cone of one arrow map `f: M_s → M_t`.
#[derive(Debug, Clone)]
pub struct StalkBasis {
    /// Columns span `ker f` (degree −1).
    pub kernel: Matrix,
    /// Columns span a complement of `im f` (degree 0).
    pub section: Matrix,
    /// Coordinates on `coker f` in the basis given by `section`.
    pub coordinates: Matrix,
}

impl StalkBasis {
    pub fn new(m: &Rep, arrow: usize) -> Self {
        let f = m.map(arrow);
        let kernel = f.kernel();
        let section = f.cokernel_section();
        let projection = f.cokernel_projection();
        let coordinates = match (&projection * &section).inverse() {
            Some(inv) => &inv * &projection,
            None => unreachable!("a section of the cokernel projects isomorphically"),
        };
        StalkBasis { kernel, section, coordinates }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.kernel.cols(), self.section.cols())
    }
}

/// Identification of the stalks at the two ends of an overlap, from the
/// left basis to the right one, in degrees −1 and 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gluing {
    pub kernel: Matrix,
    pub cokernel: Matrix,
}

impl Gluing {
    pub fn identity(kernel: usize, cokernel: usize) -> Self {
        Gluing { kernel: Matrix::identity(kernel), cokernel: Matrix::identity(cokernel) }
    }
}

/// A representation per wheel and a gluing per overlap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GluedObject {
    pub reps: Vec<Rep>,
    pub gluings: Vec<Gluing>,
}

impl GluedObject {
    pub fn zero(cover: &WheelCover) -> Self {
        GluedObject {
            reps: cover.wheels.iter().map(|w| Rep::zero(&w.quiver.quiver)).collect(),
            gluings: cover.overlaps.iter().map(|_| Gluing::identity(0, 0)).collect(),
        }
    }

    /// Stalk dimensions must agree across each overlap and gluings must be invertible.
    pub fn check(&self, cover: &WheelCover) -> Result<(), CpmError> {
        if self.reps.len() != cover.wheels.len() {
            return Err(CpmError::WheelCount { expected: cover.wheels.len(), found: self.reps.len() });
        }
        if self.gluings.len() != cover.overlaps.len() {
            return Err(CpmError::OverlapCount { expected: cover.overlaps.len(), found: self.gluings.len() });
        }
        for (w, (rep, wheel)) in self.reps.iter().zip(&cover.wheels).enumerate() {
            let (expected, found) = (wheel.chords.len(), rep.quiver().arrows().len());
            let extra = usize::from(wheel.quiver.monodromy.is_some());
            if found != expected + extra {
                return Err(CpmError::WheelQuiver { wheel: w, expected: expected + extra, found });
            }
        }
        for (o, (overlap, g)) in cover.overlaps.iter().zip(&self.gluings).enumerate() {
            let left = microlocal_stalk(&self.reps[overlap.left.0], overlap.left.1);
            let right = microlocal_stalk(&self.reps[overlap.right.0], overlap.right.1);
            for (degree, l, r, m) in [(-1, left.0, right.0, &g.kernel), (0, left.1, right.1, &g.cokernel)] {
                if l != r {
                    return Err(CpmError::Interface { overlap: o, degree, left: l, right: r });
                }
                if m.shape() != (l, l) || !m.is_invertible() && l > 0 {
                    return Err(CpmError::Gluing { overlap: o, degree, dim: l });
                }
            }
        }
        Ok(())
    }

    pub fn direct_sum(&self, other: &GluedObject) -> Result<GluedObject, CpmError> {
        let reps = self
            .reps
            .iter()
            .zip(&other.reps)
            .map(|(a, b)| a.direct_sum(b))
            .collect::<Result<_, _>>()?;
        let gluings = self
            .gluings
            .iter()
            .zip(&other.gluings)
            .map(|(a, b)| Gluing {
                kernel: Matrix::block_diag(&[a.kernel.clone(), b.kernel.clone()]),
                cokernel: Matrix::block_diag(&[a.cokernel.clone(), b.cokernel.clone()]),
            })
            .collect();
        Ok(GluedObject { reps, gluings })
    }
}

/// The glued object that is one-dimensional on an arc of cells of each
/// wheel, with identity maps inside the arc. On each wheel the arc is chosen
/// so that the stalk is `Q` in degree 0 at the spokes of the least chord of
/// each base edge and vanishes at every other spoke. All gluings are identities.
pub fn structure_object(c: &ChordalStructure, cover: &WheelCover) -> Result<GluedObject, CpmError> {
    let dual = dualizable(c)?;
    let sections: Vec<_> = dual.base.edges().iter().map(|e| e.label.clone()).collect();
    let reps = cover
        .wheels
        .iter()
        .enumerate()
        .map(|(w, wheel)| {
            let chosen: Vec<bool> = wheel.chords.iter().map(|ch| sections.contains(ch)).collect();
            arc_rep(&wheel.quiver.quiver, &chosen).ok_or(CpmError::NoArc { wheel: w })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let gluings = cover
        .overlaps
        .iter()
        .map(|o| {
            let (k, c) = microlocal_stalk(&reps[o.left.0], o.left.1);
            Gluing::identity(k, c)
        })
        .collect();
    let object = GluedObject { reps, gluings };
    object.check(cover)?;
    Ok(object)
}

/// A thin representation supported on a union of the pieces left after
/// cutting the chosen arrows, entering the support exactly along them.
fn arc_rep(q: &crate::quiver::Quiver, chosen: &[bool]) -> Option<Rep> {
    let n = q.vertex_count();
    let mut piece: Vec<usize> = (0..n).collect();
    fn root(piece: &mut [usize], v: usize) -> usize {
        let mut r = v;
        while piece[r] != r {
            r = piece[r];
        }
        piece[v] = r;
        r
    }
    for (a, arrow) in q.arrows().iter().enumerate() {
        if !chosen[a] {
            let (x, y) = (root(&mut piece, arrow.source), root(&mut piece, arrow.target));
            piece[x] = y;
        }
    }
    let roots: Vec<usize> = (0..n).map(|v| root(&mut piece, v)).collect();
    let mut pieces = roots.clone();
    pieces.sort_unstable();
    pieces.dedup();
    (0..1u64 << pieces.len()).find_map(|mask| {
        let inside = |v: usize| {
            let i = pieces.binary_search(&roots[v]).expect("piece");
            mask >> i & 1 == 1
        };
        let ok = q.arrows().iter().enumerate().all(|(a, arrow)| {
            let (s, t) = (inside(arrow.source), inside(arrow.target));
            if chosen[a] {
                !s && t
            } else {
                s == t
            }
        });
        ok.then(|| {
            let dims = (0..n).map(|v| usize::from(inside(v))).collect();
            Rep::from_dims_with(q, dims, |_, rows, cols| {
                let mut m = Matrix::zeros(rows, cols);
                if rows == 1 && cols == 1 {
                    m[(0, 0)] = Rational::one();
                }
                m
            })
        })
    })
}

/// What a morphism does on the stalks of one arrow.
struct StalkMaps<'a> {
    a: &'a StalkBasis,
    b: &'a StalkBasis,
}

impl StalkMaps<'_> {
    /// Degree-0 part `(ker A → ker B, coker A → coker B)` of `φ_s, φ_t`.
    fn hom(&self, phi_source: &Matrix, phi_target: &Matrix) -> (Matrix, Matrix) {
        let kernel = self
            .b
            .kernel
            .solve(&(phi_source * &self.a.kernel))
            .expect("morphisms preserve kernels");
        let cokernel = &(&self.b.coordinates * phi_target) * &self.a.section;
        (kernel, cokernel)
    }

    /// Degree-1 part `ker A → coker B` of an extension class.
    fn ext(&self, psi: &Matrix) -> Matrix {
        &(&self.b.coordinates * psi) * &self.a.kernel
    }
}

fn flatten(m: &Matrix) -> Vec<Rational> {
    m.entries().cloned().collect()
}

/// Graded dimensions of the space of maps `A → B` between glued objects:
/// the fiber of the restriction from the wheels to the overlaps, taken on
/// cohomology (Hom in degree 0 and Ext¹ in degree 1 on each wheel).
pub fn cpm_hom(cover: &WheelCover, a: &GluedObject, b: &GluedObject) -> Result<GradedDims, CpmError> {
    a.check(cover)?;
    b.check(cover)?;
    let homs: Vec<Vec<Vec<Matrix>>> =
        a.reps.iter().zip(&b.reps).map(|(x, y)| hom_basis(x, y)).collect::<Result<_, _>>()?;
    let exts: Vec<Vec<Vec<Matrix>>> =
        a.reps.iter().zip(&b.reps).map(|(x, y)| ext_basis(x, y)).collect::<Result<_, _>>()?;
    let source = GradedDims::new(0, vec![homs.iter().map(Vec::len).sum(), exts.iter().map(Vec::len).sum()]);

    let stalks = |obj: &GluedObject, (w, arrow): (usize, usize)| StalkBasis::new(&obj.reps[w], arrow);
    let mut degree0: Vec<Vec<Rational>> = Vec::new();
    let mut degree1: Vec<Vec<Rational>> = Vec::new();
    let mut target = [0usize; 3];
    for (o, overlap) in cover.overlaps.iter().enumerate() {
        let (al, bl) = (stalks(a, overlap.left), stalks(b, overlap.left));
        let (ar, br) = (stalks(a, overlap.right), stalks(b, overlap.right));
        let ((ka, ca), (kb, cb)) = (al.dims(), bl.dims());
        target[0] += ca * kb;
        target[1] += ka * kb + ca * cb;
        target[2] += ka * cb;
        let (ga, gb) = (&a.gluings[o], &b.gluings[o]);
        let gb_kernel = gb.kernel.inverse().unwrap_or_else(|| Matrix::zeros(0, 0));
        let gb_cokernel = gb.cokernel.inverse().unwrap_or_else(|| Matrix::zeros(0, 0));
        let left = StalkMaps { a: &al, b: &bl };
        let right = StalkMaps { a: &ar, b: &br };

        let mut rows0: Vec<Vec<Rational>> = Vec::new();
        for (w, basis) in homs.iter().enumerate() {
            for phi in basis {
                let mut k = Matrix::zeros(kb, ka);
                let mut c = Matrix::zeros(cb, ca);
                let q = a.reps[w].quiver();
                if overlap.left.0 == w {
                    let arrow = q.arrow(overlap.left.1);
                    let (dk, dc) = left.hom(&phi[arrow.source], &phi[arrow.target]);
                    k = &k + &dk;
                    c = &c + &dc;
                }
                if overlap.right.0 == w {
                    let arrow = q.arrow(overlap.right.1);
                    let (dk, dc) = right.hom(&phi[arrow.source], &phi[arrow.target]);
                    k = &k - &(&(&gb_kernel * &dk) * &ga.kernel);
                    c = &c - &(&(&gb_cokernel * &dc) * &ga.cokernel);
                }
                let mut col = flatten(&k);
                col.extend(flatten(&c));
                rows0.push(col);
            }
        }
        let mut rows1: Vec<Vec<Rational>> = Vec::new();
        for (w, basis) in exts.iter().enumerate() {
            for psi in basis {
                let mut x = Matrix::zeros(cb, ka);
                if overlap.left.0 == w {
                    x = &x + &left.ext(&psi[overlap.left.1]);
                }
                if overlap.right.0 == w {
                    let dx = right.ext(&psi[overlap.right.1]);
                    x = &x - &(&(&gb_cokernel * &dx) * &ga.kernel);
                }
                rows1.push(flatten(&x));
            }
        }
        append_block(&mut degree0, rows0);
        append_block(&mut degree1, rows1);
    }
    let target = GradedDims::new(-1, target.to_vec());
    let rank = |cols: &[Vec<Rational>]| {
        let height = cols.first().map_or(0, Vec::len);
        Matrix::from_columns(height, cols).rank()
    };
    let (r0, r1) = (rank(&degree0), rank(&degree1));
    Ok(fiber(&source, &target, |k| match k {
        0 => r0,
        1 => r1,
        _ => 0,
    }))
}

/// Stack the overlap coordinates of each basis element below the earlier ones.
fn append_block(columns: &mut Vec<Vec<Rational>>, block: Vec<Vec<Rational>>) {
    if columns.is_empty() {
        *columns = block;
    } else {
        for (col, extra) in columns.iter_mut().zip(block) {
            col.extend(extra);
        }
    }
}
