//! Matrix Lie algebras: bracket closure and dimension-level invariants.

use serde::Serialize;
use thiserror::Error;

use crate::exact::{closure_with, EchelonBasis, ExactError, Matrix, ProductSymmetry, Scalar};

/// Default guard on the ambient `gl_n`.
pub const DEFAULT_MAX_AMBIENT: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LieError {
    #[error("generator {index} is {rows}x{cols}, expected {n}x{n}")]
    ShapeMismatch {
        index: usize,
        rows: usize,
        cols: usize,
        n: usize,
    },
    #[error("ambient gl_{n} exceeds the configured limit gl_{limit}")]
    AmbientTooLarge { n: usize, limit: usize },
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// A bracket-closed subspace of `gl_n`, with its canonical basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieSubalgebra {
    ambient: usize,
    span: EchelonBasis,
    basis: Vec<Matrix>,
    /// `[b_i, b_j] = sum_k structure_constants[i][j][k] b_k`.
    structure_constants: Vec<Vec<Vec<Scalar>>>,
}

impl LieSubalgebra {
    /// Wraps a subspace of `gl_n` (row-major flattening) that is already
    /// closed under the commutator. Panics if it is not.
    pub fn from_span(ambient: usize, span: EchelonBasis) -> Self {
        assert_eq!(span.dim(), ambient * ambient);
        let basis: Vec<Matrix> = span
            .basis()
            .into_iter()
            .map(|v| Matrix::from_vec(ambient, ambient, v).expect("flattened square matrix"))
            .collect();
        let structure_constants = basis
            .iter()
            .map(|x| {
                basis
                    .iter()
                    .map(|y| {
                        span.coordinates(x.commutator(y).entries())
                            .expect("span is not closed under the bracket")
                    })
                    .collect()
            })
            .collect();
        LieSubalgebra {
            ambient,
            span,
            basis,
            structure_constants,
        }
    }

    pub fn zero(ambient: usize) -> Self {
        LieSubalgebra::from_span(ambient, EchelonBasis::new(ambient * ambient))
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Matrix] {
        &self.basis
    }

    pub fn structure_constants(&self) -> &[Vec<Vec<Scalar>>] {
        &self.structure_constants
    }

    pub fn span(&self) -> &EchelonBasis {
        &self.span
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        m.shape() == (self.ambient, self.ambient) && self.span.contains_dense(m.entries())
    }

    pub fn contains_subalgebra(&self, other: &LieSubalgebra) -> bool {
        self.ambient == other.ambient && self.span.contains_subspace(&other.span)
    }

    /// Coordinates against [`basis`](Self::basis), `None` outside the algebra.
    pub fn coordinates(&self, m: &Matrix) -> Option<Vec<Scalar>> {
        if m.shape() != (self.ambient, self.ambient) {
            return None;
        }
        self.span.coordinates(m.entries())
    }

    pub fn element(&self, coords: &[Scalar]) -> Matrix {
        let n = self.ambient;
        self.basis
            .iter()
            .zip(coords)
            .fold(Matrix::zeros(n, n), |acc, (b, c)| &acc + &b.scale(c))
    }

    /// `P L P^{-1}`, returned in canonical form.
    pub fn conjugate(&self, p: &Matrix, p_inv: &Matrix) -> LieSubalgebra {
        let mut span = EchelonBasis::new(self.ambient * self.ambient);
        for b in &self.basis {
            span.insert_dense(b.conjugate_by(p, p_inv).entries())
                .expect("conjugation keeps the shape");
        }
        LieSubalgebra::from_span(self.ambient, span)
    }
}

fn check_generators(n: usize, mats: &[Matrix], limit: usize) -> Result<(), LieError> {
    if n > limit {
        return Err(LieError::AmbientTooLarge { n, limit });
    }
    if let Some((index, m)) = mats.iter().enumerate().find(|(_, m)| m.shape() != (n, n)) {
        return Err(LieError::ShapeMismatch {
            index,
            rows: m.rows(),
            cols: m.cols(),
            n,
        });
    }
    Ok(())
}

/// Lie subalgebra of `gl_n` generated by `mats` (all `n x n`).
pub fn generated(mats: &[Matrix]) -> Result<LieSubalgebra, LieError> {
    let n = mats.first().map_or(0, Matrix::rows);
    generated_in(n, mats, DEFAULT_MAX_AMBIENT)
}

/// As [`generated`], with an explicit ambient size (needed when `mats` is
/// empty) and dimension guard.
pub fn generated_in(n: usize, mats: &[Matrix], limit: usize) -> Result<LieSubalgebra, LieError> {
    check_generators(n, mats, limit)?;
    let vectors: Vec<_> = mats.iter().map(|m| m.entries().to_vec()).collect();
    let bracket = |a: &[Scalar], b: &[Scalar]| {
        let a = Matrix::from_vec(n, n, a.to_vec()).expect("flattened square matrix");
        let b = Matrix::from_vec(n, n, b.to_vec()).expect("flattened square matrix");
        a.commutator(&b).into_entries()
    };
    let span = closure_with(n * n, &vectors, bracket, ProductSymmetry::Alternating)?;
    Ok(LieSubalgebra::from_span(n, span))
}

/// `ad(b_i)` in the basis of `l`: column `j` holds the coordinates of `[b_i, b_j]`.
pub fn adjoint(l: &LieSubalgebra, i: usize) -> Matrix {
    let d = l.dim();
    let mut m = Matrix::zeros(d, d);
    for j in 0..d {
        for k in 0..d {
            m[(k, j)] = l.structure_constants[i][j][k].clone();
        }
    }
    m
}

/// Killing form `K(b_i, b_j) = tr(ad b_i ad b_j)` on the canonical basis.
pub fn killing_form(l: &LieSubalgebra) -> Matrix {
    let d = l.dim();
    let ads: Vec<Matrix> = (0..d).map(|i| adjoint(l, i)).collect();
    let mut k = Matrix::zeros(d, d);
    for i in 0..d {
        for j in i..d {
            let v = (&ads[i] * &ads[j]).trace();
            k[(j, i)] = v.clone();
            k[(i, j)] = v;
        }
    }
    k
}

/// `[a, b]` as a subspace of `gl_n`.
pub fn bracket_span(a: &LieSubalgebra, b: &LieSubalgebra) -> EchelonBasis {
    let mut span = EchelonBasis::new(a.ambient * a.ambient);
    for x in &a.basis {
        for y in &b.basis {
            span.insert_dense(x.commutator(y).entries())
                .expect("same ambient");
        }
    }
    span
}

/// `[L, L]`, always an ideal and hence a subalgebra.
pub fn derived_algebra(l: &LieSubalgebra) -> LieSubalgebra {
    LieSubalgebra::from_span(l.ambient, bracket_span(l, l))
}

/// Dimensions of `L, [L,L], ...`, stopping at zero or at the first repeat.
pub fn derived_series(l: &LieSubalgebra) -> Vec<usize> {
    let mut dims = vec![l.dim()];
    let mut cur = l.clone();
    while cur.dim() > 0 {
        let next = derived_algebra(&cur);
        let stable = next.dim() == cur.dim();
        dims.push(next.dim());
        if stable {
            break;
        }
        cur = next;
    }
    dims
}

/// Center of `L`: elements bracketing to zero with every basis vector.
pub fn center(l: &LieSubalgebra) -> LieSubalgebra {
    let d = l.dim();
    let n = l.ambient;
    // sum_i x_i c[i][j][k] = 0 for all j, k
    let mut eq = Matrix::zeros(d * d, d);
    for j in 0..d {
        for k in 0..d {
            for i in 0..d {
                eq[(j * d + k, i)] = l.structure_constants[i][j][k].clone();
            }
        }
    }
    let mut span = EchelonBasis::new(n * n);
    for x in eq.kernel_basis() {
        span.insert_dense(l.element(&x).entries()).expect("same ambient");
    }
    LieSubalgebra::from_span(n, span)
}

pub fn is_perfect(l: &LieSubalgebra) -> bool {
    bracket_span(l, l).rank() == l.dim()
}

/// Cartan's criterion: the Killing form is nondegenerate.
pub fn is_semisimple(l: &LieSubalgebra) -> bool {
    killing_form(l).rank() == l.dim()
}

/// JSON report on a matrix Lie algebra.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LieReport {
    pub ambient: usize,
    pub dim: usize,
    pub basis: Vec<Matrix>,
    pub derived_series: Vec<usize>,
    pub center_dim: usize,
    pub perfect: bool,
    pub semisimple: bool,
    pub killing_rank: usize,
}

pub fn report(l: &LieSubalgebra) -> LieReport {
    let killing_rank = killing_form(l).rank();
    LieReport {
        ambient: l.ambient,
        dim: l.dim(),
        basis: l.basis.clone(),
        derived_series: derived_series(l),
        center_dim: center(l).dim(),
        perfect: is_perfect(l),
        semisimple: killing_rank == l.dim(),
        killing_rank,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sl2() -> LieSubalgebra {
        generated(&[Matrix::unit(2, 0, 1), Matrix::unit(2, 1, 0)]).unwrap()
    }

    #[test]
    fn generated_examples() {
        let l = sl2();
        assert_eq!(l.dim(), 3);
        assert!(l.contains(&Matrix::from_ints(&[[1, 0], [0, -1]])));
        assert_eq!(generated(&[Matrix::from_ints(&[[1, 0], [0, 2]])]).unwrap().dim(), 1);
        let empty = generated(&[]).unwrap();
        assert_eq!(empty.dim(), 0);
        assert_eq!(generated_in(3, &[], 12).unwrap().ambient(), 3);
    }

    #[test]
    fn generated_errors() {
        assert!(matches!(
            generated(&[Matrix::identity(2), Matrix::identity(3)]),
            Err(LieError::ShapeMismatch { index: 1, .. })
        ));
        assert!(matches!(
            generated(&[Matrix::zeros(2, 3)]),
            Err(LieError::ShapeMismatch { index: 0, .. })
        ));
        assert_eq!(
            generated_in(13, &[Matrix::identity(13)], 12),
            Err(LieError::AmbientTooLarge { n: 13, limit: 12 })
        );
    }

    #[test]
    fn killing_examples() {
        let k = killing_form(&sl2());
        assert_eq!(k.shape(), (3, 3));
        assert!(!k.determinant().unwrap().is_zero());
        assert_eq!(k, k.transpose());

        let ab = generated(&[Matrix::from_ints(&[[1, 0], [0, 2]]), Matrix::identity(2)]).unwrap();
        assert!(killing_form(&ab).is_zero());
        assert_eq!(killing_form(&LieSubalgebra::zero(2)).shape(), (0, 0));
    }

    #[test]
    fn killing_of_sl2_classical_values() {
        // In the basis {e, h, f}: K(e,f) = 4, K(h,h) = 8, all else 0 (dimension 2 trace form times 4).
        let l = sl2();
        let e = Matrix::unit(2, 0, 1);
        let f = Matrix::unit(2, 1, 0);
        let h = Matrix::from_ints(&[[1, 0], [0, -1]]);
        let k = killing_form(&l);
        let form = |x: &Matrix, y: &Matrix| {
            let cx = l.coordinates(x).unwrap();
            let cy = l.coordinates(y).unwrap();
            let mut s = Scalar::zero();
            for i in 0..3 {
                for j in 0..3 {
                    s += &(&(&cx[i] * &k[(i, j)]) * &cy[j]);
                }
            }
            s
        };
        assert_eq!(form(&e, &f), Scalar::from_int(4));
        assert_eq!(form(&h, &h), Scalar::from_int(8));
        assert_eq!(form(&e, &e), Scalar::zero());
        assert_eq!(form(&e, &h), Scalar::zero());
    }

    #[test]
    fn series_examples() {
        let l = sl2();
        assert_eq!(derived_series(&l), vec![3, 3]);
        assert!(is_perfect(&l) && is_semisimple(&l));
        assert_eq!(center(&l).dim(), 0);

        let b = generated(&[Matrix::unit(2, 0, 0), Matrix::unit(2, 0, 1)]).unwrap();
        assert_eq!(b.dim(), 2);
        assert_eq!(derived_series(&b), vec![2, 1, 0]);
        assert!(!is_perfect(&b));
        assert!(!is_semisimple(&b));

        let ab = generated(&[Matrix::from_ints(&[[1, 0], [0, 2]]), Matrix::identity(2)]).unwrap();
        assert_eq!(derived_series(&ab), vec![2, 0]);
        assert_eq!(center(&ab), ab);
    }

    #[test]
    fn gl2_has_scalar_center() {
        let gl2 = generated(&[
            Matrix::unit(2, 0, 1),
            Matrix::unit(2, 1, 0),
            Matrix::unit(2, 0, 0),
        ])
        .unwrap();
        assert_eq!(gl2.dim(), 4);
        let z = center(&gl2);
        assert_eq!(z.dim(), 1);
        assert!(z.contains(&Matrix::identity(2)));
        assert!(!is_semisimple(&gl2));
    }

    #[test]
    fn report_json_shape() {
        let r = report(&sl2());
        let v = serde_json::to_value(&r).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        for k in ["ambient", "dim", "basis", "derived_series", "center_dim", "perfect", "semisimple", "killing_rank"] {
            assert!(keys.contains(&k), "missing {k}");
        }
        assert_eq!(r.killing_rank, 3);
    }
}
