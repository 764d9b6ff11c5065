//! Seeded random inputs and independent oracles shared by the integration
//! and acceptance tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use galois_core::exact::{Matrix, Poly, Scalar};
use galois_core::geometry::{validate, WedgeData, WedgeEntry, WedgeTable};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(n: i64) -> Scalar {
    Scalar::from_int(n)
}

/// Integer matrix with entries in `-r..=r`, each nonzero with probability `density`.
pub fn random_matrix(rng: &mut impl Rng, n: usize, r: i64, density: f64) -> Matrix {
    let rows: Vec<Vec<i64>> = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| if rng.gen_bool(density) { rng.gen_range(-r..=r) } else { 0 })
                .collect()
        })
        .collect();
    Matrix::from_ints(&rows)
}

/// Unimodular matrix: a product of a few elementary row operations.
pub fn random_unimodular(rng: &mut impl Rng, n: usize) -> (Matrix, Matrix) {
    let mut p = Matrix::identity(n);
    let mut p_inv = Matrix::identity(n);
    if n < 2 {
        return (p, p_inv);
    }
    for _ in 0..2 * n {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n);
        while j == i {
            j = rng.gen_range(0..n);
        }
        let c = rng.gen_range(-2..=2);
        let e = &Matrix::identity(n) + &Matrix::unit(n, i, j).scale(&q(c));
        let e_inv = &Matrix::identity(n) - &Matrix::unit(n, i, j).scale(&q(c));
        p = &e * &p;
        p_inv = &p_inv * &e_inv;
    }
    (p, p_inv)
}

/// Random alternating wedge data with `g` one-forms and `h` two-forms
/// (indices are 1-based, as in wedge files).
pub fn random_wedge(rng: &mut impl Rng, g: usize, h: usize) -> WedgeData {
    let mut entries = Vec::new();
    for i in 1..=h {
        for k in 1..=g {
            for l in k + 1..=g {
                if rng.gen_bool(0.5) {
                    let v = rng.gen_range(-2..=2i64);
                    if v != 0 {
                        entries.push(WedgeEntry { i, k, l, value: q(v) });
                    }
                }
            }
        }
    }
    validate(&WedgeTable {
        g,
        h,
        entries,
        label: "random".into(),
    })
    .expect("valid random table")
}

/// Pairwise commuting matrices: random polynomials in one matrix.
pub fn commuting_family(rng: &mut impl Rng, n: usize, count: usize) -> Vec<Matrix> {
    let base = random_matrix(rng, n, 2, 0.6);
    (0..count)
        .map(|_| {
            let coeffs: Vec<i64> = (0..3).map(|_| rng.gen_range(-2..=2)).collect();
            base.eval_poly(&Poly::from_ints(&coeffs))
        })
        .collect()
}

pub fn shuffled<T: Clone>(rng: &mut impl Rng, v: &[T]) -> Vec<T> {
    let mut out = v.to_vec();
    out.shuffle(rng);
    out
}

/// Nonzero rational in `[-3, 3]` with small denominator.
pub fn random_nonzero_scalar(rng: &mut impl Rng) -> Scalar {
    loop {
        let n = rng.gen_range(-3..=3i64);
        if n != 0 {
            return Scalar::new(n, rng.gen_range(1..=3i64));
        }
    }
}

// ---------------------------------------------------------------------------
// Lyndon and Witt oracles

/// Lyndon words counted by checking every word against all its rotations.
pub fn brute_lyndon_count(g: usize, n: usize) -> usize {
    let total = g.pow(n as u32);
    let mut count = 0;
    let mut word = vec![0usize; n];
    for mut idx in 0..total {
        for slot in word.iter_mut().rev() {
            *slot = idx % g;
            idx /= g;
        }
        if (1..n).all(|r| {
            let rot: Vec<usize> = word[r..].iter().chain(&word[..r]).copied().collect();
            word < rot
        }) {
            count += 1;
        }
    }
    count
}

fn mobius(mut n: usize) -> i64 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// `(1/n) sum_{d | n} mu(d) g^(n/d)`
pub fn witt_formula(g: usize, n: usize) -> usize {
    let mut s: i128 = 0;
    for d in 1..=n {
        if n % d == 0 {
            s += mobius(d) as i128 * (g as i128).pow((n / d) as u32);
        }
    }
    (s / n as i128) as usize
}

// ---------------------------------------------------------------------------
// Quadratic-field arithmetic and the replica oracle

/// `a + b sqrt(d)`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadNum {
    pub a: Scalar,
    pub b: Scalar,
}

impl QuadNum {
    pub fn rational(a: Scalar) -> Self {
        QuadNum { a, b: Scalar::zero() }
    }

    pub fn mul(&self, other: &QuadNum, d: i64) -> QuadNum {
        QuadNum {
            a: &(&self.a * &other.a) + &(&(&self.b * &other.b) * &q(d)),
            b: &(&self.a * &other.b) + &(&self.b * &other.a),
        }
    }

    pub fn conj(&self) -> QuadNum {
        QuadNum {
            a: self.a.clone(),
            b: -&self.b,
        }
    }
}

/// Replica space of a semisimple matrix `x` with known distinct eigenvalues
/// in `Q(sqrt d)`, by brute linear algebra.
///
/// Unknowns: coefficients `r_0 .. r_{n-1}` of `y = sum r_j x^j`, and the
/// eigenvalue `p_i + q_i sqrt(d)` that `y` takes on each eigenvalue `lambda_i`
/// of `x`. Constraints: `sum r_j lambda_i^j = mu_i`; every Q-linear relation
/// among the `lambda_i` holds for the `mu_i`; conjugate eigenvalues get
/// conjugate images. Returns a spanning set of the matrices `y`.
pub fn replica_oracle(x: &Matrix, eigenvalues: &[QuadNum], d: i64) -> Vec<Matrix> {
    let n = x.rows();
    let k = eigenvalues.len();
    let unknowns = n + 2 * k;
    let p_col = |i: usize| n + i;
    let q_col = |i: usize| n + k + i;
    let mut rows: Vec<Vec<Scalar>> = Vec::new();

    // polynomial condition, rational and sqrt(d) parts
    for (i, lam) in eigenvalues.iter().enumerate() {
        let mut power = QuadNum::rational(Scalar::one());
        let mut re = vec![Scalar::zero(); unknowns];
        let mut im = vec![Scalar::zero(); unknowns];
        for j in 0..n {
            re[j] = power.a.clone();
            im[j] = power.b.clone();
            power = power.mul(lam, d);
        }
        re[p_col(i)] = q(-1);
        im[q_col(i)] = q(-1);
        rows.push(re);
        rows.push(im);
    }

    // Q-linear relations among the eigenvalues
    let mut rel = Vec::new();
    rel.extend(eigenvalues.iter().map(|l| l.a.clone()));
    rel.extend(eigenvalues.iter().map(|l| l.b.clone()));
    let relation_matrix = Matrix::from_vec(2, k, rel).unwrap();
    for c in relation_matrix.kernel_basis() {
        let mut re = vec![Scalar::zero(); unknowns];
        let mut im = vec![Scalar::zero(); unknowns];
        for i in 0..k {
            re[p_col(i)] = c[i].clone();
            im[q_col(i)] = c[i].clone();
        }
        rows.push(re);
        rows.push(im);
    }

    // Galois compatibility
    for i in 0..k {
        for j in 0..k {
            if i != j && eigenvalues[j] == eigenvalues[i].conj() {
                let mut a = vec![Scalar::zero(); unknowns];
                a[p_col(i)] = q(1);
                a[p_col(j)] = q(-1);
                let mut b = vec![Scalar::zero(); unknowns];
                b[q_col(i)] = q(1);
                b[q_col(j)] = q(1);
                rows.push(a);
                rows.push(b);
            }
        }
    }

    let system = Matrix::from_rows(rows).unwrap();
    let powers: Vec<Matrix> = (0..n).map(|j| x.pow(j as u32)).collect();
    system
        .kernel_basis()
        .into_iter()
        .map(|sol| {
            powers
                .iter()
                .zip(&sol)
                .fold(Matrix::zeros(n, n), |acc, (m, c)| &acc + &m.scale(c))
        })
        .filter(|m| !m.is_zero())
        .collect()
}

/// Block-diagonal matrix with the given rational eigenvalues and companion
/// blocks of `t^2 - 2 a t + (a^2 - b^2 d)` (eigenvalues `a +- b sqrt d`),
/// conjugated by `p`. Returns the matrix and its distinct eigenvalues.
pub fn semisimple_with_spectrum(
    rational: &[i64],
    quadratic: &[(i64, i64)],
    d: i64,
    p: &Matrix,
    p_inv: &Matrix,
) -> (Matrix, Vec<QuadNum>) {
    let mut blocks: Vec<Matrix> = Vec::new();
    let mut eig: BTreeMap<(Scalar, Scalar), ()> = BTreeMap::new();
    for &r in rational {
        blocks.push(Matrix::from_ints(&[[r]]));
        eig.insert((q(r), Scalar::zero()), ());
    }
    for &(a, b) in quadratic {
        blocks.push(Matrix::companion(&Poly::from_ints(&[a * a - b * b * d, -2 * a, 1])));
        eig.insert((q(a), q(b)), ());
        eig.insert((q(a), q(-b)), ());
    }
    let m = blocks
        .into_iter()
        .reduce(|acc, b| acc.block_diag(&b))
        .expect("at least one block");
    let eigenvalues = eig.into_keys().map(|(a, b)| QuadNum { a, b }).collect();
    (m.conjugate_by(p, p_inv), eigenvalues)
}

/// Sum of subspaces spanned by matrices, as a canonical reduced row echelon form.
pub fn span_rref(mats: &[Matrix]) -> Matrix {
    if mats.is_empty() {
        return Matrix::zeros(0, 0);
    }
    let dim = mats[0].entries().len();
    let entries: Vec<Scalar> = mats.iter().flat_map(|m| m.entries().to_vec()).collect();
    let r = Matrix::from_vec(mats.len(), dim, entries).unwrap().rref();
    let rank = r.rank();
    let rows: Vec<Vec<Scalar>> = r.reduced.to_rows().into_iter().take(rank).collect();
    if rows.is_empty() {
        Matrix::zeros(0, dim)
    } else {
        Matrix::from_rows(rows).unwrap()
    }
}
