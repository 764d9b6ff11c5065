//! Group-envelopes of matrix Lie algebras.
//!
//! The Lie algebra of the smallest closed subgroup of `GL_n` whose Lie algebra
//! contains `L` is the algebraic hull of `L`. It is computed as a fixed point:
//! bracket-close, adjoin the nilpotent and semisimple Jordan parts of every
//! basis element, adjoin all replicas of each semisimple part, repeat. Perfect
//! algebras are already algebraic and are returned unchanged.
//!
//! Replicas are computed exactly when the eigenvalues of the semisimple part
//! lie in `Q` or in a single quadratic field `Q(sqrt d)`. Outside that scope
//! the replicas are skipped and the report is flagged `exact = false`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::connection::{curvature, Connection};
use crate::exact::{jordan_chevalley, Matrix, Poly, Scalar};
use crate::liealg::{self, generated_in, is_perfect, LieError, LieReport, LieSubalgebra};

/// Integers above this size are not factored by trial division.
const FACTOR_LIMIT: i128 = 1_000_000_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnvelopeError {
    #[error("eigenvalues outside the supported fields: {0}")]
    EigenvalueFieldUnsupported(String),
    #[error("matrix is not semisimple")]
    NotSemisimple,
    #[error("expected a square matrix")]
    NotSquare,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GaloisError {
    #[error("connection is not integrable (nonzero curvature); the Galois group computation does not apply")]
    NotFlat,
    #[error(transparent)]
    Lie(#[from] LieError),
}

/// Field containing all eigenvalues of a semisimple matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rational,
    /// `Q(sqrt d)` for a squarefree integer `d` other than 0 and 1.
    Quadratic(i64),
}

impl std::fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "Q"),
            FieldSpec::Quadratic(d) => write!(f, "Q(sqrt({d}))"),
        }
    }
}

/// Irreducible factor over `Q` of a minimal polynomial in the supported scope.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Factor {
    /// `t - root`
    Linear(BigInt),
    /// `t^2 + b t + c`, irreducible
    Quadratic { b: BigInt, c: BigInt },
}

impl Factor {
    fn poly(&self) -> Poly {
        match self {
            Factor::Linear(r) => Poly::linear_root(&Scalar::from_bigint(r.clone())),
            Factor::Quadratic { b, c } => Poly::new(vec![
                Scalar::from_bigint(c.clone()),
                Scalar::from_bigint(b.clone()),
                Scalar::one(),
            ]),
        }
    }
}

fn small(n: &BigInt) -> Option<i128> {
    n.to_i128().filter(|v| v.abs() <= FACTOR_LIMIT)
}

fn unsupported(msg: impl Into<String>) -> EnvelopeError {
    EnvelopeError::EigenvalueFieldUnsupported(msg.into())
}

/// Positive divisors by trial division.
fn divisors(n: i128) -> Vec<i128> {
    let n = n.abs();
    let mut small_divs = Vec::new();
    let mut large_divs = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small_divs.push(d);
            if d * d != n {
                large_divs.push(n / d);
            }
        }
        d += 1;
    }
    small_divs.extend(large_divs.into_iter().rev());
    small_divs
}

fn squarefree_part(n: i128) -> i128 {
    let sign = if n < 0 { -1 } else { 1 };
    let mut m = n.abs();
    let mut out = 1;
    let mut p = 2;
    while p * p <= m {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        if e % 2 == 1 {
            out *= p;
        }
        p += 1;
    }
    sign * out * m
}

fn is_square(n: &BigInt) -> bool {
    !n.is_negative() && {
        let r = n.sqrt();
        &(&r * &r) == n
    }
}

fn eval_int(p: &Poly, x: i128) -> BigInt {
    let v = p.eval(&Scalar::from_bigint(BigInt::from(x)));
    debug_assert!(v.is_integer());
    v.numer().clone()
}

/// Splits a monic, squarefree integer polynomial into linear and quadratic
/// factors over `Q`, or reports that it has an irreducible factor of higher
/// degree (or coefficients too large to search).
fn split_low_degree(mu: &Poly) -> Result<Vec<Factor>, EnvelopeError> {
    let mut rest = mu.clone();
    let mut factors = Vec::new();

    // Rational roots of a monic integer polynomial are integers dividing the
    // constant term.
    if rest.coeff(0).is_zero() && rest.degree().unwrap_or(0) > 0 {
        factors.push(Factor::Linear(BigInt::zero()));
        rest = rest.div_rem(&Poly::x()).0;
    }
    if rest.degree().unwrap_or(0) > 0 {
        let c0 = rest.coeff(0);
        let c0 = small(c0.numer()).ok_or_else(|| unsupported("constant term too large to factor"))?;
        for d in divisors(c0) {
            for root in [d, -d] {
                if rest.degree().unwrap_or(0) == 0 {
                    break;
                }
                if eval_int(&rest, root).is_zero() {
                    let f = Factor::Linear(BigInt::from(root));
                    rest = rest.div_rem(&f.poly()).0;
                    factors.push(f);
                }
            }
        }
    }

    // What remains has no rational roots; peel off monic integer quadratics
    // t^2 + b t + c, using c | r(0) and (1 + b + c) | r(1).
    while let Some(deg) = rest.degree().filter(|&d| d > 0) {
        if deg % 2 == 1 {
            return Err(unsupported(format!("irreducible factor of odd degree in {rest}")));
        }
        let r0 = small(rest.coeff(0).numer()).ok_or_else(|| unsupported("coefficients too large to factor"))?;
        let r1 = small(&eval_int(&rest, 1)).ok_or_else(|| unsupported("coefficients too large to factor"))?;
        let rm1 = eval_int(&rest, -1);
        let mut found = None;
        'search: for dc in divisors(r0) {
            for c in [dc, -dc] {
                for du in divisors(r1) {
                    for u in [du, -du] {
                        let b = u - 1 - c;
                        let v = BigInt::from(1 - b + c);
                        if v.is_zero() || !(&rm1 % &v).is_zero() {
                            continue;
                        }
                        let f = Factor::Quadratic {
                            b: BigInt::from(b),
                            c: BigInt::from(c),
                        };
                        let (q, r) = rest.div_rem(&f.poly());
                        if r.is_zero() {
                            found = Some((f, q));
                            break 'search;
                        }
                    }
                }
            }
        }
        match found {
            Some((f, q)) => {
                factors.push(f);
                rest = q;
            }
            None => {
                return Err(unsupported(format!("irreducible factor of degree >= 4 in {rest}")));
            }
        }
    }
    Ok(factors)
}

/// Clears denominators: returns `L` with `L * s` integral.
fn denominator_lcm(s: &Matrix) -> BigInt {
    s.entries()
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

struct Spectrum {
    scale: Scalar,
    minimal: Poly,
    factors: Vec<Factor>,
    field: FieldSpec,
}

fn spectrum(s: &Matrix) -> Result<Spectrum, EnvelopeError> {
    if !s.is_square() {
        return Err(EnvelopeError::NotSquare);
    }
    let scale = Scalar::from_bigint(denominator_lcm(s));
    let integral = s.scale(&scale);
    let minimal = integral
        .charpoly()
        .expect("square")
        .squarefree_part();
    if !integral.eval_poly(&minimal).is_zero() {
        return Err(EnvelopeError::NotSemisimple);
    }
    let factors = split_low_degree(&minimal)?;
    let mut field = FieldSpec::Rational;
    for f in &factors {
        if let Factor::Quadratic { b, c } = f {
            let disc = b * b - BigInt::from(4) * c;
            debug_assert!(!is_square(&disc));
            let disc = small(&disc).ok_or_else(|| unsupported("discriminant too large to factor"))?;
            let d = squarefree_part(disc) as i64;
            match field {
                FieldSpec::Rational => field = FieldSpec::Quadratic(d),
                FieldSpec::Quadratic(e) if e == d => {}
                FieldSpec::Quadratic(e) => {
                    return Err(unsupported(format!(
                        "eigenvalues span two quadratic fields Q(sqrt({e})) and Q(sqrt({d}))"
                    )));
                }
            }
        }
    }
    Ok(Spectrum {
        scale,
        minimal,
        factors,
        field,
    })
}

/// Smallest supported field containing the eigenvalues of a semisimple `s`.
pub fn eigenvalue_field(s: &Matrix) -> Result<FieldSpec, EnvelopeError> {
    spectrum(s).map(|sp| sp.field)
}

/// Basis of the rational replicas of a semisimple matrix.
///
/// With eigenvalues `a + b sqrt(d)` (`a`, `b` rational), every replica acts on
/// each eigenspace by `alpha a + beta b sqrt(d)` for rationals `alpha`, `beta`;
/// the two generators are the "rational part" and "irrational part" of `s`,
/// each a polynomial in `s`, and they sum to `s`. Zero generators are dropped.
pub fn replicas(s: &Matrix, field: FieldSpec) -> Result<Vec<Matrix>, EnvelopeError> {
    let sp = spectrum(s)?;
    if sp.field != FieldSpec::Rational && sp.field != field {
        return Err(unsupported(format!(
            "eigenvalues lie in {}, not in {field}",
            sp.field
        )));
    }
    let (rational_part, irrational_part) = replica_polynomials(&sp);
    let integral = s.scale(&sp.scale);
    let inv_scale = sp.scale.recip().expect("nonzero scale");
    Ok([rational_part, irrational_part]
        .iter()
        .map(|p| integral.eval_poly(p).scale(&inv_scale))
        .filter(|m| !m.is_zero())
        .collect())
}

/// Replicas in whatever supported field the eigenvalues happen to live in.
pub fn replicas_auto(s: &Matrix) -> Result<(FieldSpec, Vec<Matrix>), EnvelopeError> {
    let field = eigenvalue_field(s)?;
    Ok((field, replicas(s, field)?))
}

/// Polynomials (mod the minimal polynomial) acting as the rational and the
/// irrational coordinate of each eigenvalue, built from CRT idempotents.
fn replica_polynomials(sp: &Spectrum) -> (Poly, Poly) {
    let mu = &sp.minimal;
    let mut rational_part = Poly::zero();
    let mut irrational_part = Poly::zero();
    let half = Scalar::new(1, 2);
    for f in &sp.factors {
        let fp = f.poly();
        let cofactor = mu.div_rem(&fp).0;
        let idem = match cofactor.rem(&fp).inverse_mod(&fp) {
            Some(inv) => (&cofactor * &inv).rem(mu),
            None => unreachable!("minimal polynomial is squarefree"),
        };
        match f {
            Factor::Linear(root) => {
                rational_part = &rational_part + &idem.scale(&Scalar::from_bigint(root.clone()));
            }
            Factor::Quadratic { b, .. } => {
                let b_half = &Scalar::from_bigint(b.clone()) * &half;
                // roots -b/2 +- sqrt(disc)/2: rational coordinate -b/2,
                // irrational coordinate t + b/2 on this factor
                rational_part = &rational_part + &idem.scale(&-&b_half);
                let shifted = &Poly::x() + &Poly::constant(b_half);
                irrational_part = &irrational_part + &(&idem * &shifted).rem(mu);
            }
        }
    }
    (rational_part, irrational_part)
}

/// Result of a group-envelope computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnvelopeReport {
    pub input: LieSubalgebra,
    pub hull: LieSubalgebra,
    /// `true` when every replica needed was computed exactly.
    pub exact: bool,
    pub notes: Vec<String>,
    pub invariants_of_hull: LieReport,
    /// What the hull represents, e.g. the differential Galois group.
    pub label: Option<String>,
}

/// JSON form: the Lie report of the hull plus envelope metadata.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnvelopeJson<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<&'a str>,
    #[serde(flatten)]
    pub hull: &'a LieReport,
    pub exact: bool,
    pub input_dim: usize,
    pub hull_dim: usize,
    pub notes: &'a [String],
}

impl EnvelopeReport {
    pub fn to_json(&self) -> EnvelopeJson<'_> {
        EnvelopeJson {
            label: self.label.as_deref(),
            hull: &self.invariants_of_hull,
            exact: self.exact,
            input_dim: self.input.dim(),
            hull_dim: self.hull.dim(),
            notes: &self.notes,
        }
    }
}

/// Algebraic hull of `l` inside `gl_n`.
pub fn group_envelope(l: &LieSubalgebra) -> EnvelopeReport {
    let n = l.ambient();
    let mut notes = Vec::new();
    let mut exact = true;

    if l.dim() == 0 {
        notes.push("zero algebra: the envelope is the trivial group".into());
        return finish(l, l.clone(), exact, notes);
    }
    if is_perfect(l) {
        notes.push("input is perfect, hence algebraic: hull = input".into());
        return finish(l, l.clone(), exact, notes);
    }

    let mut current = l.clone();
    // basis elements whose Jordan parts and replicas were already adjoined
    let mut seen: BTreeSet<Vec<Scalar>> = BTreeSet::new();
    for round in 1..=n * n + 1 {
        let mut gens: Vec<Matrix> = current.basis().to_vec();
        let mut adjoined = 0usize;
        for x in current.basis() {
            if !seen.insert(x.entries().to_vec()) {
                continue;
            }
            let jp = jordan_chevalley(x).expect("basis elements are square");
            if !jp.nilpotent.is_zero() {
                gens.push(jp.nilpotent.clone());
                adjoined += 1;
            }
            if jp.semisimple.is_zero() {
                continue;
            }
            match replicas_auto(&jp.semisimple) {
                Ok((_, reps)) => {
                    adjoined += reps.len();
                    gens.extend(reps);
                }
                Err(e) => {
                    exact = false;
                    notes.push(format!(
                        "round {round}: replicas of a semisimple part skipped ({e}); hull may be too small"
                    ));
                    gens.push(jp.semisimple);
                    adjoined += 1;
                }
            }
        }
        let next = generated_in(n, &gens, usize::MAX).expect("generators share the ambient");
        notes.push(format!(
            "round {round}: adjoined {adjoined} Jordan parts and replicas, dimension {} -> {}",
            current.dim(),
            next.dim()
        ));
        let grew = next.dim() > current.dim();
        current = next;
        if !grew {
            break;
        }
    }
    finish(l, current, exact, notes)
}

fn finish(input: &LieSubalgebra, hull: LieSubalgebra, exact: bool, notes: Vec<String>) -> EnvelopeReport {
    debug_assert!(hull.contains_subalgebra(input));
    EnvelopeReport {
        input: input.clone(),
        invariants_of_hull: liealg::report(&hull),
        hull,
        exact,
        notes,
        label: None,
    }
}

pub const GALOIS_LABEL: &str = "Lie algebra of the differential Galois group";

/// Differential Galois group of an integrable connection on a trivial bundle
/// over a proper variety: the envelope of the Lie algebra generated by the
/// coefficient matrices.
pub fn galois_group_of(c: &Connection) -> Result<EnvelopeReport, GaloisError> {
    galois_group_with_limit(c, liealg::DEFAULT_MAX_AMBIENT)
}

pub fn galois_group_with_limit(c: &Connection, max_ambient: usize) -> Result<EnvelopeReport, GaloisError> {
    if !curvature(c).flat {
        return Err(GaloisError::NotFlat);
    }
    let l = generated_in(c.rank(), c.matrices(), max_ambient)?;
    let mut report = group_envelope(&l);
    report.label = Some(GALOIS_LABEL.to_string());
    Ok(report)
}
