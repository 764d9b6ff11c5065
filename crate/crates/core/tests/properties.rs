mod common;

use common::*;
use galois_core::connection::{self, curvature, direct_sum, dual, relation_values, tensor, ConnectionFile};
use galois_core::envelope::{replicas_auto, FieldSpec};
use galois_core::exact::{jordan_chevalley, EchelonBasis, Matrix, Poly, Scalar};
use galois_core::geometry::{abelian_model, curve_model};
use galois_core::liealg::{center, derived_algebra, generated, killing_form};
use proptest::prelude::*;

fn scalar() -> impl Strategy<Value = Scalar> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| Scalar::new(n, d))
}

fn int_matrix(n: usize, r: i64) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-r..=r, n * n).prop_map(move |v| {
        let rows: Vec<Vec<i64>> = v.chunks(n).map(|c| c.to_vec()).collect();
        Matrix::from_ints(&rows)
    })
}

fn sized_matrix(max: usize, r: i64) -> impl Strategy<Value = Matrix> {
    (1..=max).prop_flat_map(move |n| int_matrix(n, r))
}

fn rect_matrix() -> impl Strategy<Value = Matrix> {
    (1usize..=4, 1usize..=5).prop_flat_map(|(r, c)| {
        prop::collection::vec(scalar(), r * c).prop_map(move |v| Matrix::from_vec(r, c, v).unwrap())
    })
}

/// Whether `m` is a polynomial in `x`: solve `sum c_j x^j = m`.
fn is_polynomial_in(m: &Matrix, x: &Matrix) -> bool {
    let n = x.rows();
    let powers: Vec<Matrix> = (0..n.max(1)).map(|j| x.pow(j as u32)).collect();
    let mut basis = EchelonBasis::new(n * n);
    for p in &powers {
        basis.insert_dense(p.entries()).unwrap();
    }
    basis.contains_dense(m.entries())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalar_string_round_trip(a in scalar()) {
        let s = a.to_string();
        prop_assert_eq!(s.parse::<Scalar>().unwrap(), a);
    }

    #[test]
    fn scalar_field_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        if let Some(inv) = a.recip() {
            prop_assert!((&a * &inv).is_one());
        }
    }

    #[test]
    fn rref_is_idempotent(m in rect_matrix()) {
        let r = m.rref().reduced;
        prop_assert_eq!(r.rref().reduced, r);
    }

    #[test]
    fn rank_plus_nullity(m in rect_matrix()) {
        let kernel = m.kernel_basis();
        prop_assert_eq!(m.rank() + kernel.len(), m.cols());
        for v in kernel {
            let col = Matrix::from_vec(m.cols(), 1, v).unwrap();
            prop_assert!((&m * &col).is_zero());
        }
    }

    #[test]
    fn inverse_and_determinant(m in sized_matrix(4, 3)) {
        let det = m.determinant().unwrap();
        match m.inverse().unwrap() {
            Some(inv) => {
                prop_assert!(!det.is_zero());
                prop_assert_eq!(&m * &inv, Matrix::identity(m.rows()));
            }
            None => prop_assert!(det.is_zero()),
        }
    }

    #[test]
    fn charpoly_annihilates(m in sized_matrix(4, 3)) {
        let p = m.charpoly().unwrap();
        prop_assert_eq!(p.degree(), Some(m.rows()));
        prop_assert!(m.eval_poly(&p).is_zero());
    }

    #[test]
    fn jordan_chevalley_invariants(m in sized_matrix(4, 2)) {
        let jp = jordan_chevalley(&m).unwrap();
        let (s, n) = (&jp.semisimple, &jp.nilpotent);
        prop_assert_eq!(s + n, m.clone());
        prop_assert_eq!(s * n, n * s);
        prop_assert!(n.pow(m.rows() as u32).is_zero());
        let sq = s.charpoly().unwrap().squarefree_part();
        prop_assert!(s.eval_poly(&sq).is_zero(), "semisimple part has a repeated root in its minimal polynomial");
        prop_assert!(is_polynomial_in(s, &m));
        prop_assert!(is_polynomial_in(n, &m));
    }

    #[test]
    fn closure_is_monotone_and_idempotent(
        mats in prop::collection::vec(int_matrix(3, 2), 1..=3),
        extra in int_matrix(3, 2),
    ) {
        let l = generated(&mats).unwrap();
        prop_assert_eq!(generated(l.basis()).unwrap(), l.clone());
        let mut more = mats.clone();
        more.push(extra);
        prop_assert!(generated(&more).unwrap().contains_subalgebra(&l));
    }

    #[test]
    fn killing_form_is_symmetric_and_invariant(mats in prop::collection::vec(int_matrix(3, 2), 1..=2)) {
        let l = generated(&mats).unwrap();
        let k = killing_form(&l);
        prop_assert_eq!(k.transpose(), k.clone());
        for z in center(&l).basis() {
            prop_assert!(l.basis().iter().all(|b| z.commutator(b).is_zero()));
        }
        prop_assert!(l.contains_subalgebra(&derived_algebra(&l)));
    }

    #[test]
    fn replicas_are_polynomials_summing_to_s(
        rational in prop::collection::vec(-3i64..=3, 0..=2),
        quad in prop::option::of((-2i64..=2, 1i64..=2)),
        d in prop::sample::select(vec![2i64, 3, 5, -1, -2]),
    ) {
        prop_assume!(!rational.is_empty() || quad.is_some());
        let quadratic: Vec<(i64, i64)> = quad.into_iter().collect();
        let n = rational.len() + 2 * quadratic.len();
        let id = Matrix::identity(n);
        let (s, _) = semisimple_with_spectrum(&rational, &quadratic, d, &id, &id);
        let (field, reps) = replicas_auto(&s).unwrap();
        if quadratic.is_empty() {
            prop_assert_eq!(field, FieldSpec::Rational);
        } else {
            prop_assert_eq!(field, FieldSpec::Quadratic(d));
        }
        let total = reps.iter().fold(Matrix::zeros(n, n), |acc, r| &acc + r);
        prop_assert_eq!(total, s.clone());
        for r in &reps {
            prop_assert!(is_polynomial_in(r, &s));
            prop_assert!(jordan_chevalley(r).unwrap().nilpotent.is_zero());
        }
    }

    #[test]
    fn connection_file_round_trip(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let g = 1 + (seed % 3) as usize;
        let beta = random_wedge(&mut rng, g, (seed % 2) as usize + 1);
        let mats = (0..g).map(|_| random_matrix(&mut rng, 2, 3, 0.5)).collect();
        let c = connection::make(2, mats, beta).unwrap();
        let text = serde_json::to_string(&ConnectionFile::from(&c)).unwrap();
        let back: ConnectionFile = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.into_connection().unwrap(), c);
    }

    #[test]
    fn direct_sum_and_dual_preserve_flatness(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let g = 2 + (seed % 2) as usize;
        let beta = abelian_model(g);
        let a = connection::make(2, commuting_family(&mut rng, 2, g), beta.clone()).unwrap();
        let b = connection::make(3, commuting_family(&mut rng, 3, g), beta).unwrap();
        prop_assert!(curvature(&direct_sum(&a, &b).unwrap()).flat);
        prop_assert!(curvature(&dual(&b)).flat);
        prop_assert!(curvature(&tensor(&a, &b).unwrap()).flat);
    }

    #[test]
    fn relation_values_match_curvature(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let g = 2 + (seed % 3) as usize;
        let h = 1 + (seed % 3) as usize;
        let n = 1 + (seed % 4) as usize;
        let beta = random_wedge(&mut rng, g, h);
        let mats = (0..g).map(|_| random_matrix(&mut rng, n, 2, 0.5)).collect();
        let c = connection::make(n, mats, beta).unwrap();
        prop_assert_eq!(relation_values(&c), curvature(&c).components);
    }
}

#[test]
fn tensor_with_trivial_connection_is_identity_up_to_kron() {
    let beta = curve_model(2);
    let a = connection::make(2, vec![Matrix::unit(2, 0, 1), Matrix::unit(2, 1, 0)], beta.clone()).unwrap();
    let t = connection::trivial(1, &beta).unwrap();
    assert_eq!(tensor(&a, &t).unwrap(), a);
}

#[test]
fn polynomial_membership_helper() {
    let x = Matrix::from_ints(&[[1, 1], [0, 2]]);
    assert!(is_polynomial_in(&x.eval_poly(&Poly::from_ints(&[3, 0, 1])), &x));
    assert!(!is_polynomial_in(&Matrix::unit(2, 1, 0), &x));
}
