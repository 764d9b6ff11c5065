use super::{ExactError, Matrix, Poly};

/// Additive Jordan-Chevalley decomposition `M = S + N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JordanPair {
    pub semisimple: Matrix,
    pub nilpotent: Matrix,
}

/// Computes `S` and `N` without leaving the rationals.
pub fn jordan_chevalley(m: &Matrix) -> Result<JordanPair, ExactError> {
    let p = semisimple_polynomial(m)?;
    let semisimple = m.eval_poly(&p);
    let nilpotent = m - &semisimple;
    Ok(JordanPair {
        semisimple,
        nilpotent,
    })
}

/// The polynomial `s(t)` with `S = s(M)`.
///
/// Newton iteration on the squarefree part `q` of the characteristic
/// polynomial `p`, carried out in `Q[t]/(p)`: starting from `s = t`, repeat
/// `s <- s - q(s) / q'(s)` until `q(s) = 0 mod p`. Each step doubles the
/// order of vanishing, so at most `log2(n) + 1` rounds are needed.
pub fn semisimple_polynomial(m: &Matrix) -> Result<Poly, ExactError> {
    let n = m.require_square()?;
    if n == 0 {
        return Ok(Poly::zero());
    }
    let p = m.charpoly()?;
    let q = p.squarefree_part();
    let dq = q.derivative();
    let mut s = Poly::x().rem(&p);
    loop {
        let qs = q.compose_mod(&s, &p);
        if qs.is_zero() {
            return Ok(s);
        }
        let dqs = dq.compose_mod(&s, &p);
        // q'(s) is a unit mod p because s agrees with t at every root of p
        let inv = dqs
            .inverse_mod(&p)
            .expect("q'(s) is invertible modulo the characteristic polynomial");
        s = (&s - &(&qs * &inv)).rem(&p);
    }
}
