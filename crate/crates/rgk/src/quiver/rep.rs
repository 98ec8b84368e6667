//! Finite-dimensional representations over the rationals.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use super::{Quiver, QuiverError};
use crate::linalg::{rat, Matrix, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepError {
    #[error("expected {expected} dimensions, got {found}")]
    DimensionCount { expected: usize, found: usize },
    #[error("expected {expected} arrow maps, got {found}")]
    MapCount { expected: usize, found: usize },
    #[error("arrow {arrow} needs a {expected:?} matrix, got {found:?}")]
    Shape { arrow: usize, expected: (usize, usize), found: (usize, usize) },
    #[error("representations live on different quivers")]
    QuiverMismatch,
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error("could not decide whether the representation splits")]
    Undetermined,
}

/// A vector space `Q^{d_v}` at each vertex and a matrix per arrow, of shape
/// `d_target x d_source`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rep {
    quiver: Quiver,
    dims: Vec<usize>,
    maps: Vec<Matrix>,
}

impl Rep {
    pub fn new(quiver: Quiver, dims: Vec<usize>, maps: Vec<Matrix>) -> Result<Self, RepError> {
        if dims.len() != quiver.vertex_count() {
            return Err(RepError::DimensionCount { expected: quiver.vertex_count(), found: dims.len() });
        }
        if maps.len() != quiver.arrows().len() {
            return Err(RepError::MapCount { expected: quiver.arrows().len(), found: maps.len() });
        }
        for (i, (a, m)) in quiver.arrows().iter().zip(&maps).enumerate() {
            let expected = (dims[a.target], dims[a.source]);
            if m.shape() != expected {
                return Err(RepError::Shape { arrow: i, expected, found: m.shape() });
            }
        }
        Ok(Rep { quiver, dims, maps })
    }

    pub fn zero(quiver: &Quiver) -> Self {
        let dims = vec![0; quiver.vertex_count()];
        let maps = vec![Matrix::zeros(0, 0); quiver.arrows().len()];
        Rep { quiver: quiver.clone(), dims, maps }
    }

    /// One-dimensional at `v`, zero elsewhere.
    pub fn simple(quiver: &Quiver, v: usize) -> Self {
        let mut dims = vec![0; quiver.vertex_count()];
        dims[v] = 1;
        Rep::from_dims_with(quiver, dims, |_, r, c| Matrix::zeros(r, c))
    }

    /// One-dimensional everywhere with identity maps.
    pub fn constant(quiver: &Quiver) -> Self {
        Rep::from_dims_with(quiver, vec![1; quiver.vertex_count()], |_, _, _| Matrix::identity(1))
    }

    /// Dimensions given, each arrow map built by `f(arrow, rows, cols)`.
    pub fn from_dims_with(
        quiver: &Quiver,
        dims: Vec<usize>,
        mut f: impl FnMut(usize, usize, usize) -> Matrix,
    ) -> Self {
        let maps = quiver
            .arrows()
            .iter()
            .enumerate()
            .map(|(i, a)| f(i, dims[a.target], dims[a.source]))
            .collect();
        Rep::new(quiver.clone(), dims, maps).expect("shapes follow dims")
    }

    /// The projective cover of the simple at `v`: spanned by paths out of `v`.
    pub fn projective(quiver: &Quiver, v: usize) -> Result<Self, RepError> {
        let paths = quiver.paths_from(v)?;
        let mut index = vec![0; paths.len()];
        let mut dims = vec![0; quiver.vertex_count()];
        for (i, p) in paths.iter().enumerate() {
            index[i] = dims[p.end];
            dims[p.end] += 1;
        }
        let rep = Rep::from_dims_with(quiver, dims, |a, rows, cols| {
            let mut m = Matrix::zeros(rows, cols);
            for (i, p) in paths.iter().enumerate() {
                if p.end != quiver.arrow(a).source {
                    continue;
                }
                let mut longer = p.arrows.clone();
                longer.push(a);
                let j = paths.iter().position(|q| q.arrows == longer).expect("paths are closed under extension");
                m[(index[j], index[i])] = Rational::one();
            }
            m
        });
        Ok(rep)
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, v: usize) -> usize {
        self.dims[v]
    }

    pub fn map(&self, arrow: usize) -> &Matrix {
        &self.maps[arrow]
    }

    pub fn maps(&self) -> &[Matrix] {
        &self.maps
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn dimension_vector(&self) -> Vec<i64> {
        self.dims.iter().map(|&d| d as i64).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn direct_sum(&self, other: &Rep) -> Result<Rep, RepError> {
        if self.quiver != other.quiver {
            return Err(RepError::QuiverMismatch);
        }
        let dims = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let maps = self
            .maps
            .iter()
            .zip(&other.maps)
            .map(|(a, b)| Matrix::block_diag(&[a.clone(), b.clone()]))
            .collect();
        Rep::new(self.quiver.clone(), dims, maps)
    }
}

/// The differential `⊕_v Hom(M_v, N_v) → ⊕_a Hom(M_s(a), N_t(a))`,
/// `φ ↦ φ_t M_a − N_a φ_s`. Entry `(i, j)` of `φ_v` is coordinate
/// `offset_v + i * dim M_v + j`.
pub fn hom_complex(m: &Rep, n: &Rep) -> Result<Matrix, RepError> {
    if m.quiver != n.quiver {
        return Err(RepError::QuiverMismatch);
    }
    let q = &m.quiver;
    let mut col_offset = Vec::with_capacity(q.vertex_count());
    let mut cols = 0;
    for v in 0..q.vertex_count() {
        col_offset.push(cols);
        cols += n.dims[v] * m.dims[v];
    }
    let mut row_offset = Vec::with_capacity(q.arrows().len());
    let mut rows = 0;
    for a in q.arrows() {
        row_offset.push(rows);
        rows += n.dims[a.target] * m.dims[a.source];
    }
    let mut d = Matrix::zeros(rows, cols);
    for (k, a) in q.arrows().iter().enumerate() {
        let (s, t) = (a.source, a.target);
        let (ms, mt, ns) = (m.dims[s], m.dims[t], n.dims[s]);
        let row = |i: usize, j: usize| row_offset[k] + i * ms + j;
        for i in 0..n.dims[t] {
            for j in 0..ms {
                // (φ_t M_a)[i, j] = Σ_l φ_t[i, l] M_a[l, j]
                for l in 0..mt {
                    let x = &m.maps[k][(l, j)];
                    if !x.is_zero() {
                        let c = col_offset[t] + i * mt + l;
                        d[(row(i, j), c)] = &d[(row(i, j), c)] + x;
                    }
                }
                // (N_a φ_s)[i, j] = Σ_l N_a[i, l] φ_s[l, j]
                for l in 0..ns {
                    let x = &n.maps[k][(i, l)];
                    if !x.is_zero() {
                        let c = col_offset[s] + l * ms + j;
                        d[(row(i, j), c)] = &d[(row(i, j), c)] - x;
                    }
                }
            }
        }
    }
    Ok(d)
}

/// `(dim Hom(M, N), dim Ext¹(M, N))` as kernel and cokernel of the differential.
pub fn hom_ext(m: &Rep, n: &Rep) -> Result<(usize, usize), RepError> {
    let d = hom_complex(m, n)?;
    let r = d.rank();
    Ok((d.cols() - r, d.rows() - r))
}

/// A basis of `Hom(M, N)`, each element given by its matrices per vertex.
pub fn hom_basis(m: &Rep, n: &Rep) -> Result<Vec<Vec<Matrix>>, RepError> {
    let kernel = hom_complex(m, n)?.kernel();
    let q = &m.quiver;
    Ok((0..kernel.cols())
        .map(|c| {
            let mut at = 0;
            (0..q.vertex_count())
                .map(|v| {
                    let mut phi = Matrix::zeros(n.dims[v], m.dims[v]);
                    for i in 0..n.dims[v] {
                        for j in 0..m.dims[v] {
                            phi[(i, j)] = kernel[(at, c)].clone();
                            at += 1;
                        }
                    }
                    phi
                })
                .collect()
        })
        .collect())
}

/// Representatives of a basis of `Ext¹(M, N)`, each given by one matrix
/// `M_s(a) → N_t(a)` per arrow.
pub fn ext_basis(m: &Rep, n: &Rep) -> Result<Vec<Vec<Matrix>>, RepError> {
    let section = hom_complex(m, n)?.cokernel_section();
    let q = &m.quiver;
    Ok((0..section.cols())
        .map(|c| {
            let mut at = 0;
            q.arrows()
                .iter()
                .map(|a| {
                    let mut psi = Matrix::zeros(n.dims[a.target], m.dims[a.source]);
                    for i in 0..n.dims[a.target] {
                        for j in 0..m.dims[a.source] {
                            psi[(i, j)] = section[(at, c)].clone();
                            at += 1;
                        }
                    }
                    psi
                })
                .collect()
        })
        .collect())
}

/// `⟨d, e⟩ = Σ_v d_v e_v − Σ_a d_s(a) e_t(a)`.
pub fn euler_form(q: &Quiver, d: &[i64], e: &[i64]) -> Result<i64, RepError> {
    for v in [d, e] {
        if v.len() != q.vertex_count() {
            return Err(RepError::DimensionCount { expected: q.vertex_count(), found: v.len() });
        }
    }
    let diagonal: i64 = d.iter().zip(e).map(|(x, y)| x * y).sum();
    let arrows: i64 = q.arrows().iter().map(|a| d[a.source] * e[a.target]).sum();
    Ok(diagonal - arrows)
}

/// Cohomology of the cone of `M_a`: `(dim ker, dim coker)` in degrees −1 and 0.
pub fn microlocal_stalk(m: &Rep, arrow: usize) -> (usize, usize) {
    let f = &m.maps[arrow];
    let r = f.rank();
    (f.cols() - r, f.rows() - r)
}

/// The reflection `s_x` on dimension vectors: `d_x ↦ Σ_{a ∋ x} d_other(a) − d_x`.
pub fn reflect_dimension(q: &Quiver, x: usize, d: &[i64]) -> Vec<i64> {
    let mut out = d.to_vec();
    let around: i64 = q
        .incident(x)
        .into_iter()
        .map(|a| {
            let arrow = q.arrow(a);
            d[if arrow.source == x { arrow.target } else { arrow.source }]
        })
        .sum();
    out[x] = around - d[x];
    out
}

/// The reflection functor at a sink (kernel construction) or a source
/// (cokernel construction). The result lives on `q.reflect(x)`.
pub fn bgp_reflect(m: &Rep, x: usize) -> Result<Rep, RepError> {
    let q = &m.quiver;
    let reflected = q.reflect(x)?;
    let incident = q.incident(x);
    let others: Vec<usize> = incident
        .iter()
        .map(|&a| {
            let arrow = q.arrow(a);
            if arrow.source == x { arrow.target } else { arrow.source }
        })
        .collect();
    let mut block_start = Vec::with_capacity(incident.len());
    let mut total = 0;
    for &w in &others {
        block_start.push(total);
        total += m.dims[w];
    }
    let mut dims = m.dims.clone();
    let mut maps = m.maps.clone();
    if q.is_sink(x) {
        // ker(⊕ M_w → M_x), new arrows x → w are the block projections
        let parts: Vec<Matrix> = incident.iter().map(|&a| m.maps[a].clone()).collect();
        let sum = with_shape(Matrix::hstack(&parts), m.dims[x], total);
        let kernel = sum.kernel();
        dims[x] = kernel.cols();
        for (k, &a) in incident.iter().enumerate() {
            let rows: Vec<usize> = (block_start[k]..block_start[k] + m.dims[others[k]]).collect();
            maps[a] = kernel.select(&rows, &(0..kernel.cols()).collect::<Vec<_>>());
        }
    } else {
        // coker(M_x → ⊕ M_w), new arrows w → x are the block inclusions
        let parts: Vec<Matrix> = incident.iter().map(|&a| m.maps[a].clone()).collect();
        let sum = with_shape(Matrix::vstack(&parts), total, m.dims[x]);
        let projection = sum.cokernel_projection();
        dims[x] = projection.rows();
        for (k, &a) in incident.iter().enumerate() {
            let cols: Vec<usize> = (block_start[k]..block_start[k] + m.dims[others[k]]).collect();
            maps[a] = projection.select(&(0..projection.rows()).collect::<Vec<_>>(), &cols);
        }
    }
    Rep::new(reflected, dims, maps)
}

/// Stacking an empty list loses the shape; restore it.
fn with_shape(m: Matrix, rows: usize, cols: usize) -> Matrix {
    if m.shape() == (rows, cols) {
        m
    } else {
        assert!(m.entries().next().is_none(), "shape mismatch");
        Matrix::zeros(rows, cols)
    }
}

/// Whether `M` is nonzero and admits no splitting `M = A ⊕ B`.
///
/// An endomorphism algebra whose quotient by the radical is one-dimensional
/// is local, so `M` is indecomposable. The radical is the kernel of the trace
/// form `tr(φψ)` on the total space. Otherwise a splitting is looked for as
/// the Fitting decomposition of `φ − λ` for basis endomorphisms `φ`, small
/// integer combinations of them, and their rational eigenvalues `λ`.
pub fn is_indecomposable(m: &Rep) -> Result<bool, RepError> {
    if m.is_zero() {
        return Ok(false);
    }
    let basis = hom_basis(m, m)?;
    if basis.len() == 1 {
        return Ok(true);
    }
    let totals: Vec<Matrix> = basis.iter().map(|phi| Matrix::block_diag(phi)).collect();
    let mut gram = Matrix::zeros(totals.len(), totals.len());
    for (i, x) in totals.iter().enumerate() {
        for (j, y) in totals.iter().enumerate() {
            gram[(i, j)] = trace(&(x * y));
        }
    }
    if gram.rank() == 1 {
        return Ok(true);
    }
    let mut candidates = totals.clone();
    for (i, x) in totals.iter().enumerate() {
        for (j, y) in totals.iter().enumerate().skip(i + 1) {
            let k = rat(((i * 7 + j * 3) % 5) as i64 + 2);
            candidates.push(x + &y.scale(&k));
        }
    }
    let n = m.total_dim();
    for phi in &candidates {
        for lambda in rational_eigenvalues(phi) {
            let shifted = phi - &Matrix::identity(n).scale(&lambda);
            let mut power = Matrix::identity(n);
            for _ in 0..n {
                power = &power * &shifted;
            }
            let r = power.rank();
            if 0 < r && r < n {
                return Ok(false);
            }
        }
    }
    Err(RepError::Undetermined)
}

fn trace(m: &Matrix) -> Rational {
    (0..m.rows()).map(|i| m[(i, i)].clone()).sum()
}

/// Coefficients `c_0, ..., c_n` of `det(t − A)`, by Faddeev–LeVerrier.
fn characteristic_polynomial(a: &Matrix) -> Vec<Rational> {
    let n = a.rows();
    let mut c = vec![Rational::zero(); n + 1];
    c[n] = Rational::one();
    let mut acc = Matrix::zeros(n, n);
    for k in 1..=n {
        acc = &(a * &acc) + &Matrix::identity(n).scale(&c[n + 1 - k]);
        c[n - k] = -trace(&(a * &acc)) / rat(k as i64);
    }
    c
}

/// Rational roots of the characteristic polynomial, by the rational root test.
/// Gives up on coefficients too large to factor by trial division.
fn rational_eigenvalues(a: &Matrix) -> Vec<Rational> {
    let mut coeffs = characteristic_polynomial(a);
    let scale = coeffs.iter().fold(BigInt::one(), |acc, c| acc * c.denom());
    let mut ints: Vec<BigInt> = coeffs.drain(..).map(|c| (c * Rational::from_integer(scale.clone())).to_integer()).collect();
    let mut roots = Vec::new();
    if ints.first().is_some_and(Zero::is_zero) {
        roots.push(Rational::zero());
        while ints.first().is_some_and(Zero::is_zero) {
            ints.remove(0);
        }
    }
    if ints.len() < 2 {
        return roots;
    }
    let (Some(low), Some(high)) = (ints[0].abs().to_u64(), ints[ints.len() - 1].abs().to_u64()) else {
        return roots;
    };
    const LIMIT: u64 = 1_000_000;
    if low > LIMIT || high > LIMIT {
        return roots;
    }
    for p in divisors(low) {
        for q in divisors(high) {
            for sign in [1i64, -1] {
                let x = Rational::new(BigInt::from(sign) * BigInt::from(p), BigInt::from(q));
                if !roots.contains(&x) && evaluate(&ints, &x).is_zero() {
                    roots.push(x);
                }
            }
        }
    }
    roots
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).take_while(|d| d * d <= n).filter(|d| n.is_multiple_of(*d)).flat_map(|d| [d, n / d]).collect()
}

fn evaluate(coeffs: &[BigInt], x: &Rational) -> Rational {
    coeffs
        .iter()
        .rev()
        .fold(Rational::zero(), |acc, c| acc * x + Rational::from_integer(c.clone()))
}

/// Indecomposable representations with every space of dimension at most one,
/// up to isomorphism. Each arrow between two nonzero spaces is `0` or `1`,
/// which covers all isomorphism classes when the underlying graph is a forest.
pub fn thin_indecomposables(q: &Quiver) -> Result<Vec<Rep>, RepError> {
    let n = q.vertex_count();
    let mut found = Vec::new();
    for support in 1u64..(1 << n) {
        let dims: Vec<usize> = (0..n).map(|v| ((support >> v) & 1) as usize).collect();
        let live: Vec<usize> = (0..q.arrows().len())
            .filter(|&a| dims[q.arrow(a).source] == 1 && dims[q.arrow(a).target] == 1)
            .collect();
        for choice in 0u64..(1 << live.len()) {
            let rep = Rep::from_dims_with(q, dims.clone(), |a, rows, cols| {
                let mut m = Matrix::zeros(rows, cols);
                if let Some(k) = live.iter().position(|&l| l == a) {
                    if (choice >> k) & 1 == 1 {
                        m[(0, 0)] = Rational::one();
                    }
                }
                m
            });
            if is_indecomposable(&rep)? {
                found.push(rep);
            }
        }
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::{quiver_from_lagrangian, ConicLagrangian};
    use proptest::prelude::*;

    fn a2() -> Quiver {
        Quiver::linear(&[true])
    }

    /// Number of paths `from → to`, by depth-first enumeration.
    fn count_paths(q: &Quiver, from: usize, to: usize) -> usize {
        let here = usize::from(from == to);
        here + q
            .arrows()
            .iter()
            .filter(|a| a.source == from)
            .map(|a| count_paths(q, a.target, to))
            .sum::<usize>()
    }

    #[test]
    fn simples_on_a2() {
        let q = a2();
        let (s0, s1) = (Rep::simple(&q, 0), Rep::simple(&q, 1));
        assert_eq!(hom_ext(&s0, &s0).unwrap(), (1, 0));
        assert_eq!(hom_ext(&s0, &s1).unwrap(), (0, 1));
        assert_eq!(hom_ext(&s1, &s0).unwrap(), (0, 0));
        assert_eq!(euler_form(&q, &[1, 0], &[0, 1]).unwrap(), -1);
        assert_eq!(euler_form(&Quiver::linear(&[]), &[1], &[1]).unwrap(), 1);
    }

    #[test]
    fn kronecker_projectives() {
        let q = Quiver::kronecker();
        let p: Vec<Rep> = (0..2).map(|v| Rep::projective(&q, v).unwrap()).collect();
        assert_eq!(p[0].dims(), [1, 2]);
        // order the sink first so the matrix is upper triangular
        let order = [1, 0];
        let table: Vec<Vec<usize>> = order
            .iter()
            .map(|&i| order.iter().map(|&j| hom_ext(&p[i], &p[j]).unwrap().0).collect())
            .collect();
        assert_eq!(table, [[1, 2], [0, 1]]);
        for &i in &order {
            for &j in &order {
                assert_eq!(hom_ext(&p[i], &p[j]).unwrap(), (count_paths(&q, j, i), 0));
            }
        }
    }

    #[test]
    fn stalks() {
        let q = a2();
        let id = Rep::constant(&q);
        assert_eq!(microlocal_stalk(&id, 0), (0, 0));
        let zero_map = Rep::from_dims_with(&q, vec![1, 1], |_, r, c| Matrix::zeros(r, c));
        assert_eq!(microlocal_stalk(&zero_map, 0), (1, 1));
        let cross = quiver_from_lagrangian(&ConicLagrangian::cross()).quiver;
        let constant = Rep::constant(&cross);
        for a in 0..cross.arrows().len() {
            assert_eq!(microlocal_stalk(&constant, a), (0, 0));
        }
    }

    #[test]
    fn reflection_at_a_sink() {
        let q = a2();
        let p0 = Rep::projective(&q, 0).unwrap();
        assert_eq!(p0.dims(), [1, 1]);
        let r = bgp_reflect(&p0, 1).unwrap();
        assert_eq!(r.dims(), [1, 0]);
        assert_eq!(r.quiver(), &Quiver::linear(&[false]));
        assert_eq!(reflect_dimension(&q, 1, &[1, 1]), [1, 0]);
        let s0 = Rep::simple(&q, 0);
        assert_eq!(bgp_reflect(&s0, 1).unwrap().dims(), [1, 1]);
        assert!(bgp_reflect(&Rep::simple(&Quiver::linear(&[true, true]), 0), 1).is_err());
    }

    #[test]
    fn reflection_at_a_source_inverts_the_sink_reflection() {
        let q = Quiver::linear(&[true, false]);
        let m = Rep::from_dims_with(&q, vec![1, 2, 1], |a, _, _| {
            if a == 0 {
                Matrix::from_i64(2, 1, &[1, 0])
            } else {
                Matrix::from_i64(2, 1, &[1, 1])
            }
        });
        let there = bgp_reflect(&m, 1).unwrap();
        assert_eq!(there.dims(), [1, 0, 1]);
        let back = bgp_reflect(&there, 1).unwrap();
        assert_eq!(back.quiver(), &q);
        assert_eq!(back.dims(), [1, 2, 1]);
        assert_eq!(hom_ext(&back, &m).unwrap(), hom_ext(&m, &m).unwrap());
        // the sum M ⊕ S_1 loses only the simple at the reflected vertex
        let with_simple = m.direct_sum(&Rep::simple(&q, 1)).unwrap();
        assert_eq!(bgp_reflect(&with_simple, 1).unwrap().dims(), [1, 0, 1]);
    }

    #[test]
    fn indecomposability() {
        let q = a2();
        assert!(is_indecomposable(&Rep::constant(&q)).unwrap());
        let split = Rep::simple(&q, 0).direct_sum(&Rep::simple(&q, 1)).unwrap();
        assert!(!is_indecomposable(&split).unwrap());
        let doubled = Rep::simple(&q, 0).direct_sum(&Rep::simple(&q, 0)).unwrap();
        assert!(!is_indecomposable(&doubled).unwrap());
        assert!(!is_indecomposable(&Rep::zero(&q)).unwrap());
        // Kronecker rep with dims (1, 2) is the indecomposable projective
        let p = Rep::projective(&Quiver::kronecker(), 0).unwrap();
        assert!(is_indecomposable(&p).unwrap());
        let jordan = Rep::new(
            Quiver::from_pairs(1, &[(0, 0)]).unwrap(),
            vec![2],
            vec![Matrix::from_i64(2, 2, &[3, 1, 0, 3])],
        )
        .unwrap();
        assert!(is_indecomposable(&jordan).unwrap());
        let diagonal = Rep::new(jordan.quiver().clone(), vec![2], vec![Matrix::from_i64(2, 2, &[1, 0, 0, 2])]).unwrap();
        assert!(!is_indecomposable(&diagonal).unwrap());
    }

    #[test]
    fn thin_indecomposables_of_type_a() {
        for n in 1..=4usize {
            let q = Quiver::linear(&vec![true; n - 1]);
            assert_eq!(thin_indecomposables(&q).unwrap().len(), n * (n + 1) / 2);
        }
    }

    #[test]
    fn characteristic_polynomial_of_a_companion() {
        // t^2 - 3t + 2
        let a = Matrix::from_i64(2, 2, &[0, -2, 1, 3]);
        assert_eq!(characteristic_polynomial(&a), vec![rat(2), rat(-3), rat(1)]);
        let mut roots = rational_eigenvalues(&a);
        roots.sort();
        assert_eq!(roots, [rat(1), rat(2)]);
    }

    fn random_rep(q: Quiver) -> impl Strategy<Value = Rep> {
        let n = q.vertex_count();
        prop::collection::vec(0usize..=3, n).prop_flat_map(move |dims| {
            let q = q.clone();
            let sizes: Vec<usize> = q.arrows().iter().map(|a| dims[a.source] * dims[a.target]).collect();
            let entries = sizes.iter().map(|&s| prop::collection::vec(-2i64..=2, s)).collect::<Vec<_>>();
            (Just(dims), entries).prop_map(move |(dims, entries)| {
                Rep::from_dims_with(&q, dims, |a, r, c| Matrix::from_i64(r, c, &entries[a]))
            })
        })
    }

    fn oriented_a(n: usize) -> impl Strategy<Value = Quiver> {
        prop::collection::vec(any::<bool>(), n - 1).prop_map(|r| Quiver::linear(&r))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn euler_form_is_hom_minus_ext(
            (m, n) in (2usize..=6).prop_flat_map(oriented_a).prop_flat_map(|q| (random_rep(q.clone()), random_rep(q)))
        ) {
            let (hom, ext) = hom_ext(&m, &n).unwrap();
            let chi = euler_form(m.quiver(), &m.dimension_vector(), &n.dimension_vector()).unwrap();
            prop_assert_eq!(chi, hom as i64 - ext as i64);
        }

        #[test]
        fn stalk_vanishes_iff_invertible(m in oriented_a(3).prop_flat_map(random_rep)) {
            for a in 0..m.quiver().arrows().len() {
                prop_assert_eq!(microlocal_stalk(&m, a) == (0, 0), m.map(a).is_invertible() || (m.map(a).rows() == 0 && m.map(a).cols() == 0));
            }
        }
    }
}
