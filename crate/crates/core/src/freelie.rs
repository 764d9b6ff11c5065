//! Free Lie algebra on `g` generators and its quotient `L_beta` by the Lie
//! ideal generated by the quadratic relators coming from a wedge map.
//!
//! Lie elements are embedded in the tensor algebra, where `[x, y] = xy - yx`.
//! The degree-`n` tensor component has coordinates indexed by words of length
//! `n` over the letters `1..=g`; the word `w_1 ... w_n` sits at index
//! `sum (w_j - 1) g^(n-j)`, so index order is lexicographic order of words.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::exact::{EchelonBasis, Matrix, Scalar, SparseVec};
use crate::geometry::WedgeData;

pub const DEFAULT_MAX_DEGREE: usize = 6;
pub const DEFAULT_MAX_COORDINATES: u128 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FreeLieError {
    #[error("degree cap must be at least 1")]
    ZeroDegree,
    #[error("degree {degree} over {generators} generators needs {coordinates} tensor coordinates, above the limit of {limit}")]
    ResourceCap {
        generators: usize,
        degree: usize,
        coordinates: u128,
        limit: u128,
    },
}

/// A word over the letters `1..=g`.
pub type Word = Vec<usize>;

/// A bracket monomial in the generators `t_1 .. t_g`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BracketTree {
    Generator(usize),
    Bracket(Box<BracketTree>, Box<BracketTree>),
}

impl BracketTree {
    pub fn generator(i: usize) -> Self {
        BracketTree::Generator(i)
    }

    pub fn bracket(a: BracketTree, b: BracketTree) -> Self {
        BracketTree::Bracket(Box::new(a), Box::new(b))
    }

    pub fn degree(&self) -> usize {
        match self {
            BracketTree::Generator(_) => 1,
            BracketTree::Bracket(a, b) => a.degree() + b.degree(),
        }
    }

    /// Leaves read left to right.
    pub fn word(&self) -> Word {
        match self {
            BracketTree::Generator(i) => vec![*i],
            BracketTree::Bracket(a, b) => {
                let mut w = a.word();
                w.extend(b.word());
                w
            }
        }
    }

    /// Image under `t_k -> mats[k-1]`, brackets becoming commutators.
    pub fn evaluate(&self, mats: &[Matrix]) -> Matrix {
        match self {
            BracketTree::Generator(i) => mats[i - 1].clone(),
            BracketTree::Bracket(a, b) => a.evaluate(mats).commutator(&b.evaluate(mats)),
        }
    }
}

impl std::fmt::Display for BracketTree {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BracketTree::Generator(i) => write!(f, "t{i}"),
            BracketTree::Bracket(a, b) => write!(f, "[{a},{b}]"),
        }
    }
}

/// A rational combination of bracket monomials.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LieElement {
    pub terms: Vec<(Scalar, BracketTree)>,
}

impl LieElement {
    pub fn evaluate(&self, mats: &[Matrix]) -> Matrix {
        let n = mats.first().map_or(0, Matrix::rows);
        self.terms.iter().fold(Matrix::zeros(n, n), |acc, (c, t)| {
            &acc + &t.evaluate(mats).scale(c)
        })
    }

    pub fn expand(&self, generators: usize) -> TensorVector {
        let degree = self.terms.first().map_or(0, |(_, t)| t.degree());
        let mut acc = TensorVector::zero(generators, degree);
        for (c, t) in &self.terms {
            assert_eq!(t.degree(), degree, "inhomogeneous Lie element");
            acc.add_scaled(c, &expand_bracket(t, generators));
        }
        acc
    }
}

impl std::fmt::Display for LieElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(c, t)| format!("({c}){t}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A homogeneous element of the tensor algebra in word coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorVector {
    generators: usize,
    degree: usize,
    coords: SparseVec,
}

impl TensorVector {
    pub fn zero(generators: usize, degree: usize) -> Self {
        TensorVector {
            generators,
            degree,
            coords: SparseVec::new(),
        }
    }

    pub fn word(generators: usize, w: &[usize]) -> Self {
        let mut coords = SparseVec::new();
        coords.insert(word_index(generators, w), Scalar::one());
        TensorVector {
            generators,
            degree: w.len(),
            coords,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn sparse(&self) -> &SparseVec {
        &self.coords
    }

    pub fn into_sparse(self) -> SparseVec {
        self.coords
    }

    pub fn from_sparse(generators: usize, degree: usize, coords: SparseVec) -> Self {
        TensorVector {
            generators,
            degree,
            coords,
        }
    }

    pub fn coordinate(&self, w: &[usize]) -> Scalar {
        self.coords
            .get(&word_index(self.generators, w))
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    /// Nonzero coordinates as `(word, coefficient)` in lexicographic order.
    pub fn terms(&self) -> Vec<(Word, Scalar)> {
        self.coords
            .iter()
            .map(|(&i, c)| (index_word(self.generators, self.degree, i), c.clone()))
            .collect()
    }

    pub fn add_scaled(&mut self, c: &Scalar, other: &TensorVector) {
        assert_eq!(self.degree, other.degree);
        for (&i, x) in &other.coords {
            let delta = c * x;
            let e = self.coords.entry(i).or_insert_with(Scalar::zero);
            *e += &delta;
            if e.is_zero() {
                self.coords.remove(&i);
            }
        }
    }

    /// Concatenation product in the tensor algebra.
    pub fn concat(&self, other: &TensorVector) -> TensorVector {
        let shift = (self.generators as u128).pow(other.degree as u32) as usize;
        let mut coords = SparseVec::new();
        for (&i, a) in &self.coords {
            for (&j, b) in &other.coords {
                coords.insert(i * shift + j, a * b);
            }
        }
        TensorVector {
            generators: self.generators,
            degree: self.degree + other.degree,
            coords,
        }
    }

    /// `xy - yx`.
    pub fn bracket(&self, other: &TensorVector) -> TensorVector {
        let mut out = self.concat(other);
        out.add_scaled(&Scalar::from_int(-1), &other.concat(self));
        out
    }

    /// Image under `t_k -> mats[k-1]` with words becoming matrix products.
    pub fn evaluate(&self, mats: &[Matrix]) -> Matrix {
        let n = mats.first().map_or(0, Matrix::rows);
        let mut acc = Matrix::zeros(n, n);
        for (w, c) in self.terms() {
            let prod = w
                .iter()
                .fold(Matrix::identity(n), |p, &k| &p * &mats[k - 1]);
            acc = &acc + &prod.scale(&c);
        }
        acc
    }
}

fn word_index(generators: usize, w: &[usize]) -> usize {
    w.iter().fold(0, |acc, &letter| {
        debug_assert!((1..=generators).contains(&letter));
        acc * generators + (letter - 1)
    })
}

fn index_word(generators: usize, degree: usize, mut index: usize) -> Word {
    let mut w = vec![0; degree];
    for slot in w.iter_mut().rev() {
        *slot = index % generators + 1;
        index /= generators;
    }
    w
}

/// A Lyndon word with its standard bracketing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LyndonBasisElement {
    pub word: Word,
    pub bracketing: BracketTree,
    pub degree: usize,
}

impl LyndonBasisElement {
    pub fn new(word: Word) -> Self {
        debug_assert!(is_lyndon(&word));
        LyndonBasisElement {
            bracketing: standard_bracketing(&word),
            degree: word.len(),
            word,
        }
    }
}

/// Strictly smaller than every proper rotation.
pub fn is_lyndon(w: &[usize]) -> bool {
    !w.is_empty()
        && (1..w.len()).all(|r| {
            let rotated = w[r..].iter().chain(&w[..r]);
            w.iter().lt(rotated)
        })
}

/// All Lyndon words of length `n` over `1..=g`, in lexicographic order
/// (Duval's generation).
pub fn lyndon_words(g: usize, n: usize) -> Vec<Word> {
    let mut out = Vec::new();
    if g == 0 || n == 0 {
        return out;
    }
    let mut w: Word = vec![1];
    while !w.is_empty() {
        if w.len() == n {
            out.push(w.clone());
        }
        let m = w.len();
        while w.len() < n {
            w.push(w[w.len() - m]);
        }
        while w.last() == Some(&g) {
            w.pop();
        }
        if let Some(last) = w.last_mut() {
            *last += 1;
        }
    }
    out
}

/// Standard factorisation `w = uv` with `v` the longest proper Lyndon suffix,
/// applied recursively.
pub fn standard_bracketing(w: &[usize]) -> BracketTree {
    if w.len() == 1 {
        return BracketTree::generator(w[0]);
    }
    let split = (1..w.len())
        .find(|&i| is_lyndon(&w[i..]))
        .expect("a single letter is always Lyndon");
    BracketTree::bracket(standard_bracketing(&w[..split]), standard_bracketing(&w[split..]))
}

fn mobius(mut n: usize) -> i128 {
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Dimension of the degree-`n` part of the free Lie algebra on `g`
/// generators: `(1/n) sum_{d | n} mu(d) g^(n/d)`.
///
/// Panics if `g^n` does not fit in an `i128`.
pub fn witt_dimension(g: usize, n: usize) -> u128 {
    assert!(n >= 1, "degree must be positive");
    let total: i128 = (1..=n)
        .filter(|d| n.is_multiple_of(*d))
        .map(|d| {
            let term = (g as i128)
                .checked_pow((n / d) as u32)
                .expect("g^n overflows i128");
            mobius(d) * term
        })
        .sum();
    debug_assert!(total % n as i128 == 0);
    (total / n as i128) as u128
}

/// Expands a bracket monomial into degree-`n` tensor coordinates.
pub fn expand_bracket(b: &BracketTree, generators: usize) -> TensorVector {
    match b {
        BracketTree::Generator(i) => TensorVector::word(generators, &[*i]),
        BracketTree::Bracket(x, y) => {
            expand_bracket(x, generators).bracket(&expand_bracket(y, generators))
        }
    }
}

/// The quadratic relators `sum_{k<l} beta_i^(kl) [t_k, t_l]`, one per 2-form.
///
/// `WedgeData` is alternating by construction, so this cannot fail.
pub fn relators_from_beta(beta: &WedgeData) -> Vec<LieElement> {
    let mut rel: Vec<LieElement> = vec![LieElement::default(); beta.two_form_count()];
    for ((i, k, l), c) in beta.entries() {
        rel[i - 1].terms.push((
            c.clone(),
            BracketTree::bracket(BracketTree::generator(k), BracketTree::generator(l)),
        ));
    }
    rel
}

/// One graded piece of `L_beta`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedComponent {
    pub degree: usize,
    /// `Witt(g, n)`.
    pub free_dimension: usize,
    /// Dimension of the degree-`n` part of the relator ideal.
    pub ideal_dimension: usize,
    pub dimension: usize,
    /// Lyndon elements whose classes form a basis of the quotient, with
    /// their tensor coordinates.
    pub basis: Vec<(LyndonBasisElement, TensorVector)>,
    /// Reduced echelon basis of the ideal component.
    pub ideal: EchelonBasis,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedLieQuotient {
    pub generator_count: usize,
    pub relators: Vec<LieElement>,
    pub max_degree: usize,
    pub per_degree: Vec<GradedComponent>,
}

/// JSON dimension table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimensionTable {
    pub g: usize,
    pub h: usize,
    pub dims: Vec<usize>,
}

impl GradedLieQuotient {
    pub fn dims(&self) -> Vec<usize> {
        self.per_degree.iter().map(|c| c.dimension).collect()
    }

    pub fn table(&self) -> DimensionTable {
        DimensionTable {
            g: self.generator_count,
            h: self.relators.len(),
            dims: self.dims(),
        }
    }
}

pub fn graded_dims(beta: &WedgeData, max_degree: usize) -> Result<GradedLieQuotient, FreeLieError> {
    graded_dims_with_limit(beta, max_degree, DEFAULT_MAX_COORDINATES)
}

/// Graded dimensions of `L_beta` up to `max_degree`.
///
/// The ideal is grown degree by degree: `I_2` is spanned by the relators and
/// `I_n = sum_{2 <= k < n} [L_{n-k}, I_k]`, all inside tensor coordinates.
pub fn graded_dims_with_limit(
    beta: &WedgeData,
    max_degree: usize,
    max_coordinates: u128,
) -> Result<GradedLieQuotient, FreeLieError> {
    if max_degree == 0 {
        return Err(FreeLieError::ZeroDegree);
    }
    let g = beta.one_form_count();
    let coordinates = (g as u128).checked_pow(max_degree as u32).unwrap_or(u128::MAX);
    if coordinates > max_coordinates {
        return Err(FreeLieError::ResourceCap {
            generators: g,
            degree: max_degree,
            coordinates,
            limit: max_coordinates,
        });
    }
    let relators = relators_from_beta(beta);

    // lie[n] holds the Lyndon basis of the free component in degree n.
    let mut lie: BTreeMap<usize, Vec<(LyndonBasisElement, TensorVector)>> = BTreeMap::new();
    let mut ideal: BTreeMap<usize, EchelonBasis> = BTreeMap::new();
    let mut per_degree = Vec::with_capacity(max_degree);

    for n in 1..=max_degree {
        let space = g.pow(n as u32);
        let basis: Vec<_> = lyndon_words(g, n)
            .into_iter()
            .map(|w| {
                let e = LyndonBasisElement::new(w);
                let v = expand_bracket(&e.bracketing, g);
                (e, v)
            })
            .collect();
        let free_dimension = basis.len();

        let mut component = EchelonBasis::new(space);
        if n == 2 {
            for r in &relators {
                component.insert(r.expand(g).into_sparse());
            }
        }
        for k in 2..n {
            if component.rank() == free_dimension {
                break;
            }
            let Some(ik) = ideal.get(&k) else { continue };
            for (_, x) in &lie[&(n - k)] {
                for row in ik.rows() {
                    let y = TensorVector::from_sparse(g, k, row.clone());
                    component.insert(x.bracket(&y).into_sparse());
                }
            }
        }
        let ideal_dimension = component.rank();
        assert!(ideal_dimension <= free_dimension, "ideal outgrew the free component");

        let quotient_basis = if ideal_dimension == 0 {
            basis.clone()
        } else if ideal_dimension == free_dimension {
            Vec::new()
        } else {
            let mut probe = component.clone();
            basis
                .iter()
                .filter(|(_, v)| probe.insert(v.sparse().clone()))
                .cloned()
                .collect()
        };
        let dimension = free_dimension - ideal_dimension;
        assert_eq!(quotient_basis.len(), dimension, "Lyndon elements must span the free component");

        per_degree.push(GradedComponent {
            degree: n,
            free_dimension,
            ideal_dimension,
            dimension,
            basis: quotient_basis,
            ideal: component.clone(),
        });
        lie.insert(n, basis);
        ideal.insert(n, component);
    }

    Ok(GradedLieQuotient {
        generator_count: g,
        relators,
        max_degree,
        per_degree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{abelian_model, curve_model};

    fn words(ws: &[&str]) -> Vec<Word> {
        ws.iter()
            .map(|s| s.chars().map(|c| c.to_digit(10).unwrap() as usize).collect())
            .collect()
    }

    /// Brute-force Lyndon enumeration over all g^n words.
    fn brute_lyndon(g: usize, n: usize) -> Vec<Word> {
        let total = g.pow(n as u32);
        (0..total)
            .map(|i| index_word(g, n, i))
            .filter(|w| is_lyndon(w))
            .collect()
    }

    #[test]
    fn lyndon_examples() {
        assert_eq!(lyndon_words(2, 1), words(&["1", "2"]));
        assert_eq!(lyndon_words(2, 2), words(&["12"]));
        assert_eq!(lyndon_words(2, 3), words(&["112", "122"]));
    }

    #[test]
    fn duval_matches_brute_force() {
        for g in 1..=3 {
            for n in 1..=6 {
                assert_eq!(lyndon_words(g, n), brute_lyndon(g, n), "g={g} n={n}");
            }
        }
    }

    #[test]
    fn witt_examples() {
        let dims: Vec<u128> = (1..=5).map(|n| witt_dimension(2, n)).collect();
        assert_eq!(dims, vec![2, 1, 2, 3, 6]);
        for n in 2..8 {
            assert_eq!(witt_dimension(1, n), 0);
        }
        assert_eq!(witt_dimension(3, 2), 3);
    }

    #[test]
    fn expansions() {
        let t1 = BracketTree::generator(1);
        let t2 = BracketTree::generator(2);
        let c = expand_bracket(&BracketTree::bracket(t1.clone(), t2.clone()), 2);
        assert_eq!(
            c.terms(),
            vec![(vec![1, 2], Scalar::one()), (vec![2, 1], -Scalar::one())]
        );
        assert_eq!(expand_bracket(&t1, 2).terms(), vec![(vec![1], Scalar::one())]);

        // [[t1,t2],t1] = [t1,t2] t1 - t1 [t1,t2]
        let left = BracketTree::bracket(BracketTree::bracket(t1.clone(), t2.clone()), t1.clone());
        assert_eq!(
            expand_bracket(&left, 2).terms(),
            vec![
                (vec![1, 1, 2], Scalar::from_int(-1)),
                (vec![1, 2, 1], Scalar::from_int(2)),
                (vec![2, 1, 1], Scalar::from_int(-1)),
            ]
        );
        let right = BracketTree::bracket(t1.clone(), BracketTree::bracket(t1, t2));
        assert_eq!(
            expand_bracket(&right, 2).terms(),
            vec![
                (vec![1, 1, 2], Scalar::from_int(1)),
                (vec![1, 2, 1], Scalar::from_int(-2)),
                (vec![2, 1, 1], Scalar::from_int(1)),
            ]
        );
    }

    #[test]
    fn standard_bracketings() {
        assert_eq!(standard_bracketing(&[1, 1, 2]).to_string(), "[t1,[t1,t2]]");
        assert_eq!(standard_bracketing(&[1, 2, 2]).to_string(), "[[t1,t2],t2]");
        assert_eq!(standard_bracketing(&[1, 1, 2, 1, 2]).to_string(), "[[t1,[t1,t2]],[t1,t2]]");
        // leading word of the expansion is the Lyndon word itself, with coefficient 1
        for w in lyndon_words(3, 5) {
            let v = expand_bracket(&standard_bracketing(&w), 3);
            assert_eq!(v.terms()[0], (w.clone(), Scalar::one()));
        }
    }

    #[test]
    fn lyndon_expansions_independent() {
        for (g, n) in [(2usize, 5usize), (3, 4), (4, 3)] {
            let mut b = EchelonBasis::new(g.pow(n as u32));
            for w in lyndon_words(g, n) {
                assert!(b.insert(expand_bracket(&standard_bracketing(&w), g).into_sparse()));
            }
            assert_eq!(b.rank() as u128, witt_dimension(g, n));
        }
    }

    #[test]
    fn relator_examples() {
        let r = relators_from_beta(&abelian_model(2));
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].to_string(), "(1)[t1,t2]");
        assert!(relators_from_beta(&curve_model(3)).is_empty());
        let r3: Vec<String> = relators_from_beta(&abelian_model(3)).iter().map(ToString::to_string).collect();
        assert_eq!(r3, vec!["(1)[t1,t2]", "(1)[t1,t3]", "(1)[t2,t3]"]);
    }

    #[test]
    fn graded_examples() {
        assert_eq!(graded_dims(&curve_model(2), 4).unwrap().dims(), vec![2, 1, 2, 3]);
        assert_eq!(graded_dims(&abelian_model(2), 4).unwrap().dims(), vec![2, 0, 0, 0]);
        assert_eq!(graded_dims(&curve_model(1), 3).unwrap().dims(), vec![1, 0, 0]);
        assert_eq!(graded_dims(&abelian_model(1), 3).unwrap().dims(), vec![1, 0, 0]);
        assert_eq!(graded_dims(&curve_model(0), 2).unwrap().dims(), vec![0, 0]);
    }

    #[test]
    fn partial_relations() {
        // g=3 with only [t1,t2] = 0: L_beta is free on t3 over an abelian pair.
        let beta = crate::geometry::validate(&crate::geometry::WedgeTable {
            g: 3,
            h: 1,
            entries: vec![crate::geometry::WedgeEntry {
                i: 1,
                k: 1,
                l: 2,
                value: Scalar::one(),
            }],
            label: String::new(),
        })
        .unwrap();
        let q = graded_dims(&beta, 4).unwrap();
        assert_eq!(q.per_degree[1].dimension, 2);
        for c in &q.per_degree {
            assert!(c.dimension as u128 <= witt_dimension(3, c.degree));
        }
    }

    #[test]
    fn guards() {
        assert_eq!(graded_dims(&curve_model(2), 0), Err(FreeLieError::ZeroDegree));
        assert!(matches!(
            graded_dims(&curve_model(10), 6),
            Err(FreeLieError::ResourceCap { coordinates: 1_000_000, .. })
        ));
    }

    #[test]
    fn table_json() {
        let t = graded_dims(&curve_model(2), 3).unwrap().table();
        assert_eq!(serde_json::to_string(&t).unwrap(), r#"{"g":2,"h":0,"dims":[2,1,2]}"#);
    }
}
