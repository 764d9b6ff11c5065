//! Connections `d_A` on trivial bundles `O_X (x) E`, stored as the tuple of
//! matrices `A_1 .. A_g` against a basis of global 1-forms.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::Matrix;
use crate::freelie::{relators_from_beta, LieElement, TensorVector};
use crate::geometry::{abelian_model, curve_model, WedgeData, WedgeTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConnectionError {
    #[error("expected {expected} matrices (one per 1-form), found {found}")]
    CountMismatch { expected: usize, found: usize },
    #[error("matrix {index} is {rows}x{cols}, expected {rank}x{rank}")]
    ShapeMismatch {
        index: usize,
        rows: usize,
        cols: usize,
        rank: usize,
    },
    #[error("connections must have rank at least 1")]
    ZeroRank,
    #[error("connections live over different wedge data")]
    BetaMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Connection {
    rank: usize,
    matrices: Vec<Matrix>,
    beta: WedgeData,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CurvatureReport {
    /// `R_i` for each 2-form `sigma_i`.
    pub components: Vec<Matrix>,
    pub flat: bool,
}

impl Connection {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    pub fn beta(&self) -> &WedgeData {
        &self.beta
    }

    /// Applies `f` to every coefficient matrix, keeping the wedge data.
    pub fn map_matrices(&self, f: impl Fn(&Matrix) -> Matrix) -> Result<Connection, ConnectionError> {
        let mats: Vec<Matrix> = self.matrices.iter().map(f).collect();
        let rank = mats.first().map_or(self.rank, Matrix::rows);
        make(rank, mats, self.beta.clone())
    }
}

/// Validates a matrix tuple against the wedge data.
pub fn make(rank: usize, matrices: Vec<Matrix>, beta: WedgeData) -> Result<Connection, ConnectionError> {
    if rank == 0 {
        return Err(ConnectionError::ZeroRank);
    }
    if matrices.len() != beta.one_form_count() {
        return Err(ConnectionError::CountMismatch {
            expected: beta.one_form_count(),
            found: matrices.len(),
        });
    }
    if let Some((index, m)) = matrices
        .iter()
        .enumerate()
        .find(|(_, m)| m.shape() != (rank, rank))
    {
        return Err(ConnectionError::ShapeMismatch {
            index,
            rows: m.rows(),
            cols: m.cols(),
            rank,
        });
    }
    Ok(Connection {
        rank,
        matrices,
        beta,
    })
}

/// `R_i = sum_{k,l} beta_i^(kl) A_k A_l` over all ordered pairs.
pub fn curvature_double_sum(c: &Connection) -> Vec<Matrix> {
    let g = c.beta.one_form_count();
    (1..=c.beta.two_form_count())
        .map(|i| {
            let mut r = Matrix::zeros(c.rank, c.rank);
            for k in 1..=g {
                for l in 1..=g {
                    let b = c.beta.coefficient(i, k, l);
                    if !b.is_zero() {
                        r = &r + &(&c.matrices[k - 1] * &c.matrices[l - 1]).scale(&b);
                    }
                }
            }
            r
        })
        .collect()
}

/// `R_i = sum_{k<l} beta_i^(kl) [A_k, A_l]`, valid because beta is alternating.
pub fn curvature_bracket_form(c: &Connection) -> Vec<Matrix> {
    let mut out = vec![Matrix::zeros(c.rank, c.rank); c.beta.two_form_count()];
    for ((i, k, l), b) in c.beta.entries() {
        let br = c.matrices[k - 1].commutator(&c.matrices[l - 1]);
        out[i - 1] = &out[i - 1] + &br.scale(b);
    }
    out
}

/// Curvature of `d_A`. Both formulas are evaluated and must coincide.
pub fn curvature(c: &Connection) -> CurvatureReport {
    let components = curvature_double_sum(c);
    let bracket = curvature_bracket_form(c);
    assert_eq!(
        components, bracket,
        "internal defect: double-sum and bracket-form curvature disagree"
    );
    let flat = components.iter().all(Matrix::is_zero);
    CurvatureReport { components, flat }
}

/// The quadratic relations `sum_{k,l} beta_i^(kl) t_k t_l` of `A_beta`,
/// evaluated at `t_k -> A_k` by expanding each relator in the tensor algebra.
pub fn relation_values(c: &Connection) -> Vec<Matrix> {
    let g = c.beta.one_form_count();
    relators_from_beta(&c.beta)
        .iter()
        .map(|r: &LieElement| {
            if r.terms.is_empty() {
                return Matrix::zeros(c.rank, c.rank);
            }
            let t: TensorVector = r.expand(g);
            t.evaluate(&c.matrices)
        })
        .collect()
}

/// Whether `t_k -> A_k` defines a representation of `A_beta`.
pub fn is_representation(c: &Connection) -> bool {
    relation_values(c).iter().all(Matrix::is_zero)
}

/// `(A (x) B)_k = A_k (x) I + I (x) B_k`.
pub fn tensor(a: &Connection, b: &Connection) -> Result<Connection, ConnectionError> {
    if !a.beta.same_map(&b.beta) {
        return Err(ConnectionError::BetaMismatch);
    }
    let ia = Matrix::identity(a.rank);
    let ib = Matrix::identity(b.rank);
    let mats = a
        .matrices
        .iter()
        .zip(&b.matrices)
        .map(|(x, y)| &x.kron(&ib) + &ia.kron(y))
        .collect();
    make(a.rank * b.rank, mats, a.beta.clone())
}

/// Dual connection, matrices `-A_k^T`.
pub fn dual(c: &Connection) -> Connection {
    Connection {
        rank: c.rank,
        matrices: c.matrices.iter().map(|m| -&m.transpose()).collect(),
        beta: c.beta.clone(),
    }
}

pub fn direct_sum(a: &Connection, b: &Connection) -> Result<Connection, ConnectionError> {
    if !a.beta.same_map(&b.beta) {
        return Err(ConnectionError::BetaMismatch);
    }
    let mats = a
        .matrices
        .iter()
        .zip(&b.matrices)
        .map(|(x, y)| x.block_diag(y))
        .collect();
    make(a.rank + b.rank, mats, a.beta.clone())
}

/// Trivial connection of the given rank: every `A_k` is zero.
pub fn trivial(rank: usize, beta: &WedgeData) -> Result<Connection, ConnectionError> {
    make(
        rank,
        vec![Matrix::zeros(rank, rank); beta.one_form_count()],
        beta.clone(),
    )
}

/// Reference to a built-in model in a connection file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase", deny_unknown_fields)]
pub enum ModelRef {
    Curve { genus: usize },
    Abelian { dim: usize },
}

impl ModelRef {
    pub fn build(&self) -> WedgeData {
        match *self {
            ModelRef::Curve { genus } => curve_model(genus),
            ModelRef::Abelian { dim } => abelian_model(dim),
        }
    }
}

/// The `beta` field of a connection file: an inline table or a model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum BetaSpec {
    Model(ModelRef),
    Inline(WedgeTable),
}

impl<'de> Deserialize<'de> for BetaSpec {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let v = serde_json::Value::deserialize(deserializer)?;
        if v.get("model").is_some() {
            serde_json::from_value(v).map(BetaSpec::Model).map_err(D::Error::custom)
        } else {
            serde_json::from_value(v).map(BetaSpec::Inline).map_err(D::Error::custom)
        }
    }
}

/// On-disk connection format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConnectionFile {
    pub rank: usize,
    pub matrices: Vec<Matrix>,
    pub beta: BetaSpec,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FileError {
    #[error(transparent)]
    Geometry(#[from] crate::geometry::GeometryError),
    #[error(transparent)]
    Connection(#[from] ConnectionError),
}

impl ConnectionFile {
    pub fn into_connection(self) -> Result<Connection, FileError> {
        let beta = match self.beta {
            BetaSpec::Model(m) => m.build(),
            BetaSpec::Inline(t) => crate::geometry::validate(&t)?,
        };
        Ok(make(self.rank, self.matrices, beta)?)
    }
}

impl From<&Connection> for ConnectionFile {
    fn from(c: &Connection) -> Self {
        ConnectionFile {
            rank: c.rank,
            matrices: c.matrices.clone(),
            beta: BetaSpec::Inline(c.beta.to_table()),
        }
    }
}
