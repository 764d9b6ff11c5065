//! Connections with prescribed semisimple Galois groups on curves.
//!
//! A semisimple Lie algebra is generated by two elements, so on a curve of
//! genus at least 2 the connection `A_1 = x, A_2 = y, A_k = 0` (k > 2) is flat
//! and its Galois Lie algebra is the algebra generated by `x` and `y`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::connection::{self, Connection};
use crate::exact::Matrix;
use crate::geometry::curve_model;
use crate::liealg::{generated, is_perfect, is_semisimple, LieError};

pub const TARGETS: [&str; 5] = ["sl2", "sl3", "sl4", "so5", "sp4"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ForgeError {
    #[error("unknown target {0:?} (supported: sl2, sl3, sl4, so5, sp4)")]
    UnknownTarget(String),
    #[error("genus {0} is too small: the construction needs genus >= 2")]
    GenusTooSmall(usize),
    #[error("pair {name} generates an algebra of dimension {found}, expected {expected}")]
    WrongDimension { name: String, expected: usize, found: usize },
    #[error("pair {0} does not generate a semisimple algebra")]
    NotSemisimple(String),
    #[error("pair {name}: {source}")]
    Lie { name: String, source: LieError },
}

/// Two matrices generating a semisimple Lie algebra of known dimension.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorPair {
    pub name: String,
    pub x: Matrix,
    pub y: Matrix,
    pub expected_dim: usize,
}

impl GeneratorPair {
    /// Checks that `x`, `y` generate a semisimple algebra of dimension
    /// `expected_dim`.
    pub fn certify(name: &str, x: Matrix, y: Matrix, expected_dim: usize) -> Result<Self, ForgeError> {
        let l = generated(&[x.clone(), y.clone()]).map_err(|source| ForgeError::Lie {
            name: name.to_string(),
            source,
        })?;
        if l.dim() != expected_dim {
            return Err(ForgeError::WrongDimension {
                name: name.to_string(),
                expected: expected_dim,
                found: l.dim(),
            });
        }
        if !is_semisimple(&l) || !is_perfect(&l) {
            return Err(ForgeError::NotSemisimple(name.to_string()));
        }
        Ok(GeneratorPair {
            name: name.to_string(),
            x,
            y,
            expected_dim,
        })
    }

    /// Re-runs certification on a pair read from a file.
    pub fn recertify(self) -> Result<Self, ForgeError> {
        let GeneratorPair { name, x, y, expected_dim } = self;
        Self::certify(&name, x, y, expected_dim)
    }
}

fn sum_units(n: usize, entries: &[(usize, usize, i64)]) -> Matrix {
    let mut rows = vec![vec![0i64; n]; n];
    for &(i, j, v) in entries {
        rows[i][j] += v;
    }
    Matrix::from_ints(&rows)
}

/// `x` = regular nilpotent Jordan block, `y` = lowering operator with
/// distinct weights `1, 2, ..., n-1`.
fn sl_pair(n: usize) -> (Matrix, Matrix) {
    let x = sum_units(n, &(0..n - 1).map(|i| (i, i + 1, 1)).collect::<Vec<_>>());
    let y = sum_units(n, &(0..n - 1).map(|i| (i + 1, i, i as i64 + 1)).collect::<Vec<_>>());
    (x, y)
}

/// Skew-symmetric 5x5 matrices.
fn so5_pair() -> (Matrix, Matrix) {
    let skew = |pairs: &[(usize, usize, i64)]| {
        let mut e = Vec::new();
        for &(i, j, v) in pairs {
            e.push((i, j, v));
            e.push((j, i, -v));
        }
        sum_units(5, &e)
    };
    let x = skew(&[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 4, 1)]);
    let y = skew(&[(0, 2, 1), (1, 3, 2), (2, 4, 3)]);
    (x, y)
}

/// Matrices `[[A, B], [C, -A^T]]` with `B`, `C` symmetric 2x2.
fn sp4_pair() -> (Matrix, Matrix) {
    let x = sum_units(4, &[(0, 1, 1), (3, 2, -1), (1, 3, 1)]);
    let y = sum_units(4, &[(1, 0, 1), (2, 3, -1), (3, 1, 2)]);
    (x, y)
}

/// Built-in certified pair for a supported target.
pub fn builtin_pair(name: &str) -> Result<GeneratorPair, ForgeError> {
    let (x, y, dim) = match name {
        "sl2" => (Matrix::unit(2, 0, 1), Matrix::unit(2, 1, 0), 3),
        "sl3" => {
            let (x, y) = sl_pair(3);
            (x, y, 8)
        }
        "sl4" => {
            let (x, y) = sl_pair(4);
            (x, y, 15)
        }
        "so5" => {
            let (x, y) = so5_pair();
            (x, y, 10)
        }
        "sp4" => {
            let (x, y) = sp4_pair();
            (x, y, 10)
        }
        other => return Err(ForgeError::UnknownTarget(other.to_string())),
    };
    GeneratorPair::certify(name, x, y, dim)
}

/// Flat connection over the genus-`genus` curve model with `A_1 = x`,
/// `A_2 = y` and all other matrices zero.
pub fn forge_connection(pair: &GeneratorPair, genus: usize) -> Result<Connection, ForgeError> {
    if genus < 2 {
        return Err(ForgeError::GenusTooSmall(genus));
    }
    let rank = pair.x.rows();
    let mut matrices = vec![pair.x.clone(), pair.y.clone()];
    matrices.resize(genus, Matrix::zeros(rank, rank));
    Ok(connection::make(rank, matrices, curve_model(genus)).expect("pair matrices are square of equal size"))
}
