use std::collections::BTreeMap;

use super::{ExactError, Scalar};

/// Sparse vector keyed by coordinate index; zero entries are never stored.
pub type SparseVec = BTreeMap<usize, Scalar>;

pub fn to_sparse(v: &[Scalar]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub fn to_dense(v: &SparseVec, dim: usize) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); dim];
    for (&i, x) in v {
        out[i] = x.clone();
    }
    out
}

/// `v -= c * w`, dropping entries that cancel.
fn axpy(v: &mut SparseVec, c: &Scalar, w: &SparseVec) {
    for (&i, x) in w {
        let delta = c * x;
        match v.get_mut(&i) {
            Some(e) => {
                *e -= &delta;
                if e.is_zero() {
                    v.remove(&i);
                }
            }
            None => {
                v.insert(i, -delta);
            }
        }
    }
}

/// A subspace of `Q^dim` kept in reduced row echelon form.
///
/// Every stored row has a leading 1 at its pivot and zeros at every other
/// pivot, so the basis is canonical: two instances spanning the same subspace
/// hold identical rows no matter the insertion order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EchelonBasis {
    dim: usize,
    rows: BTreeMap<usize, SparseVec>,
}

impl EchelonBasis {
    pub fn new(dim: usize) -> Self {
        EchelonBasis {
            dim,
            rows: BTreeMap::new(),
        }
    }

    pub fn from_vectors<'a, I>(dim: usize, vectors: I) -> Result<Self, ExactError>
    where
        I: IntoIterator<Item = &'a [Scalar]>,
    {
        let mut b = EchelonBasis::new(dim);
        for v in vectors {
            b.insert_dense(v)?;
        }
        Ok(b)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.dim
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.keys().copied().collect()
    }

    /// Residual of `v` after eliminating every pivot coordinate.
    pub fn reduce(&self, mut v: SparseVec) -> SparseVec {
        // Rows vanish on foreign pivots, so one pass over the pivots initially
        // present in `v` clears all of them.
        let hits: Vec<usize> = v.keys().filter(|k| self.rows.contains_key(k)).copied().collect();
        for p in hits {
            if let Some(c) = v.get(&p).cloned() {
                axpy(&mut v, &c, &self.rows[&p]);
            }
        }
        v
    }

    /// Adds `v` to the span. Returns whether the rank grew.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        debug_assert!(v.keys().all(|&k| k < self.dim));
        let mut r = self.reduce(v);
        let Some((&pivot, lead)) = r.iter().next() else {
            return false;
        };
        let inv = lead.recip().expect("nonzero lead");
        for x in r.values_mut() {
            *x *= &inv;
        }
        for row in self.rows.values_mut() {
            if let Some(c) = row.get(&pivot).cloned() {
                axpy(row, &c, &r);
            }
        }
        self.rows.insert(pivot, r);
        true
    }

    pub fn insert_dense(&mut self, v: &[Scalar]) -> Result<bool, ExactError> {
        self.check_len(v.len())?;
        Ok(self.insert(to_sparse(v)))
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v.clone()).is_empty()
    }

    pub fn contains_dense(&self, v: &[Scalar]) -> bool {
        v.len() == self.dim && self.contains(&to_sparse(v))
    }

    /// Coordinates of `v` against the basis rows (in pivot order), or `None`
    /// when `v` lies outside the span.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        if !self.contains_dense(v) {
            return None;
        }
        Some(self.rows.keys().map(|&p| v[p].clone()).collect())
    }

    pub fn contains_subspace(&self, other: &EchelonBasis) -> bool {
        other.dim == self.dim && other.rows.values().all(|r| self.contains(r))
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseVec> {
        self.rows.values()
    }

    /// Basis vectors in canonical (pivot) order.
    pub fn basis(&self) -> Vec<Vec<Scalar>> {
        self.rows.values().map(|r| to_dense(r, self.dim)).collect()
    }

    fn check_len(&self, len: usize) -> Result<(), ExactError> {
        if len != self.dim {
            Err(ExactError::DimensionMismatch {
                expected: self.dim,
                found: len,
            })
        } else {
            Ok(())
        }
    }
}

/// Symmetry hint for [`closure_with`]: alternating products only need one
/// ordering of each pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductSymmetry {
    General,
    Alternating,
}

/// Smallest subspace containing `vectors` and closed under `product`,
/// returned as a canonical echelon basis.
pub fn subspace_closure<F>(vectors: &[Vec<Scalar>], product: F) -> Result<Vec<Vec<Scalar>>, ExactError>
where
    F: Fn(&[Scalar], &[Scalar]) -> Vec<Scalar>,
{
    let dim = vectors.first().map_or(0, Vec::len);
    closure_with(dim, vectors, product, ProductSymmetry::General).map(|b| b.basis())
}

/// Worklist closure: each round multiplies only the freshly added vectors
/// against everything found so far.
pub fn closure_with<F>(
    dim: usize,
    vectors: &[Vec<Scalar>],
    product: F,
    symmetry: ProductSymmetry,
) -> Result<EchelonBasis, ExactError>
where
    F: Fn(&[Scalar], &[Scalar]) -> Vec<Scalar>,
{
    let mut basis = EchelonBasis::new(dim);
    // Independent spanning vectors, in discovery order.
    let mut found: Vec<Vec<Scalar>> = Vec::new();
    for v in vectors {
        basis.check_len(v.len())?;
        let r = basis.reduce(to_sparse(v));
        if !r.is_empty() {
            basis.insert(r);
            found.push(v.clone());
        }
    }
    let mut fresh_start = 0;
    while fresh_start < found.len() && !basis.is_full() {
        let fresh_end = found.len();
        for i in fresh_start..fresh_end {
            for j in 0..fresh_end {
                // pairs with both ends fresh are visited twice for j >= fresh_start
                if symmetry == ProductSymmetry::Alternating && j >= fresh_start && j < i {
                    continue;
                }
                let mut candidates = vec![product(&found[i], &found[j])];
                if symmetry == ProductSymmetry::General && j < fresh_start {
                    candidates.push(product(&found[j], &found[i]));
                }
                for p in candidates {
                    basis.check_len(p.len())?;
                    let sp = to_sparse(&p);
                    if basis.insert(sp) {
                        found.push(p);
                    }
                }
                if basis.is_full() {
                    return Ok(basis);
                }
            }
        }
        fresh_start = fresh_end;
    }
    Ok(basis)
}
