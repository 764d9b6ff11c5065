//! Wedge-product structure constants `theta_k ^ theta_l = sum_i beta_i^(kl) sigma_i`
//! of a smooth projective variety, given as data.
//!
//! Indices are 1-based throughout, both in the API and in files: `i` runs over
//! the basis of global 2-forms, `k` and `l` over the basis of global 1-forms.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("wedge table is not alternating at (i={i}, k={k}, l={l})")]
    NotAlternating { i: usize, k: usize, l: usize },
    #[error("index out of range at (i={i}, k={k}, l={l}) for g={g}, h={h}")]
    IndexOutOfRange {
        i: usize,
        k: usize,
        l: usize,
        g: usize,
        h: usize,
    },
    #[error("entry (i={i}, k={k}, l={l}) is given twice with different values")]
    DuplicateEntry { i: usize, k: usize, l: usize },
}

/// One raw entry `beta_i^(kl) = value` of a user table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WedgeEntry {
    pub i: usize,
    pub k: usize,
    pub l: usize,
    pub value: Scalar,
}

/// File form of the wedge map: possibly redundant, possibly unchecked.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WedgeTable {
    pub g: usize,
    pub h: usize,
    pub entries: Vec<WedgeEntry>,
    #[serde(default)]
    pub label: String,
}

/// A validated alternating map `H0(Omega1) x H0(Omega1) -> H0(Omega2)`.
///
/// Only nonzero coefficients with `k < l` are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WedgeData {
    one_form_count: usize,
    two_form_count: usize,
    coefficients: BTreeMap<(usize, usize, usize), Scalar>,
    label: String,
}

impl WedgeData {
    pub fn one_form_count(&self) -> usize {
        self.one_form_count
    }

    pub fn two_form_count(&self) -> usize {
        self.two_form_count
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// `beta_i^(kl)` for any `k`, `l`, extended by antisymmetry.
    pub fn coefficient(&self, i: usize, k: usize, l: usize) -> Scalar {
        use std::cmp::Ordering::*;
        match k.cmp(&l) {
            Equal => Scalar::zero(),
            Less => self.coefficients.get(&(i, k, l)).cloned().unwrap_or_else(Scalar::zero),
            Greater => -self.coefficients.get(&(i, l, k)).cloned().unwrap_or_else(Scalar::zero),
        }
    }

    /// Nonzero triangular entries `((i, k, l), value)` with `k < l`.
    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize, usize), &Scalar)> {
        self.coefficients.iter().map(|(&key, v)| (key, v))
    }

    /// Same wedge map, ignoring the provenance label.
    pub fn same_map(&self, other: &WedgeData) -> bool {
        self.one_form_count == other.one_form_count
            && self.two_form_count == other.two_form_count
            && self.coefficients == other.coefficients
    }

    pub fn to_table(&self) -> WedgeTable {
        WedgeTable {
            g: self.one_form_count,
            h: self.two_form_count,
            entries: self
                .coefficients
                .iter()
                .map(|(&(i, k, l), v)| WedgeEntry {
                    i,
                    k,
                    l,
                    value: v.clone(),
                })
                .collect(),
            label: self.label.clone(),
        }
    }
}

/// Curve of the given genus: `g` one-forms and no two-forms.
pub fn curve_model(genus: usize) -> WedgeData {
    WedgeData {
        one_form_count: genus,
        two_form_count: 0,
        coefficients: BTreeMap::new(),
        label: format!("curve of genus {genus}"),
    }
}

/// Abelian variety of dimension `n`: the wedge map is the full exterior
/// square, with the 2-form basis `sigma_(k,l)` (k < l) in lexicographic order.
pub fn abelian_model(n: usize) -> WedgeData {
    let mut coefficients = BTreeMap::new();
    let mut i = 0;
    for k in 1..=n {
        for l in k + 1..=n {
            i += 1;
            coefficients.insert((i, k, l), Scalar::one());
        }
    }
    WedgeData {
        one_form_count: n,
        two_form_count: i,
        coefficients,
        label: format!("abelian variety of dimension {n}"),
    }
}

/// Checks a raw table and normalises it to triangular storage.
///
/// Entries may be given for `k < l`, `k > l` or both; when both are present
/// they must be negatives of each other. Diagonal entries must be zero.
pub fn validate(table: &WedgeTable) -> Result<WedgeData, GeometryError> {
    let (g, h) = (table.g, table.h);
    let mut raw: BTreeMap<(usize, usize, usize), Scalar> = BTreeMap::new();
    for e in &table.entries {
        let (i, k, l) = (e.i, e.k, e.l);
        if !(1..=h).contains(&i) || !(1..=g).contains(&k) || !(1..=g).contains(&l) {
            return Err(GeometryError::IndexOutOfRange { i, k, l, g, h });
        }
        if let Some(prev) = raw.insert((i, k, l), e.value.clone()) {
            if prev != e.value {
                return Err(GeometryError::DuplicateEntry { i, k, l });
            }
        }
    }
    let mut coefficients = BTreeMap::new();
    for (&(i, k, l), v) in &raw {
        if k == l {
            if !v.is_zero() {
                return Err(GeometryError::NotAlternating { i, k, l });
            }
            continue;
        }
        if let Some(mirror) = raw.get(&(i, l, k)) {
            if (mirror + v) != Scalar::zero() {
                return Err(GeometryError::NotAlternating { i, k, l });
            }
        }
        let (key, value) = if k < l {
            ((i, k, l), v.clone())
        } else {
            ((i, l, k), -v)
        };
        if !value.is_zero() {
            coefficients.insert(key, value);
        }
    }
    Ok(WedgeData {
        one_form_count: g,
        two_form_count: h,
        coefficients,
        label: table.label.clone(),
    })
}

impl Serialize for WedgeData {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_table().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for WedgeData {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let table = WedgeTable::deserialize(deserializer)?;
        validate(&table).map_err(serde::de::Error::custom)
    }
}
