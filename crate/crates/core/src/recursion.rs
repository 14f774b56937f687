//! The linear relation obtained from the `k`-th Virasoro constraint, shared by
//! both theories:
//!
//! ```text
//! 0 = -⟨τ_{k+1} τ̃_k τ_l⟩
//!     + Σ_i  [l_i + μ]_0^k / [ν]_0^k   ⟨… τ_{l_i+k} …⟩
//!     + Σ_j  [k_j + w_j]_0^k / [ν]_0^k ⟨… τ̃_{k_j+k} …⟩
//! ```
//!
//! with `[x]_0^k = x(x+1)⋯(x+k)`. The line theory has `μ = 0`, `ν = 1`,
//! `w_j = i/N`; the surface theory has `μ = -½`, `ν = ½`, `w_j = 2i/N - ½`.

use alloc::vec::Vec;

use crate::arith::{shifted_factorial, Rational};
use crate::error::Result;
use crate::moduli::IntegralSpec;

pub(crate) struct Shape<'a> {
    pub nonstacky_shift: Rational,
    pub normalizer: Rational,
    pub weights: &'a [Rational],
}

pub(crate) fn bracket(x: &Rational, k: u32) -> Rational {
    shifted_factorial(x, k as i64).expect("k >= 0")
}

/// `(coefficient, integral)` pairs whose weighted sum is the residual.
pub(crate) fn terms(
    spec: &IntegralSpec,
    k: u32,
    shape: &Shape<'_>,
) -> Vec<(Rational, IntegralSpec)> {
    let norm = bracket(&shape.normalizer, k);
    let mut out = Vec::with_capacity(1 + spec.l.len() + spec.k.len());

    let mut head = spec.clone();
    head.l.insert(0, k + 1);
    out.push((Rational::integer(-1), head));

    for i in 0..spec.l.len() {
        let x = Rational::integer(spec.l[i] as i64) + &shape.nonstacky_shift;
        let coeff = bracket(&x, k) / &norm;
        if coeff.is_zero() {
            continue;
        }
        let mut s = spec.clone();
        s.l[i] += k;
        out.push((coeff, s));
    }
    for j in 0..spec.k.len() {
        let x = Rational::integer(spec.k[j] as i64) + &shape.weights[j];
        let coeff = bracket(&x, k) / &norm;
        if coeff.is_zero() {
            continue;
        }
        let mut s = spec.clone();
        s.k[j] += k;
        out.push((coeff, s));
    }
    out
}

pub(crate) fn residual(
    spec: &IntegralSpec,
    k: u32,
    shape: &Shape<'_>,
    mut eval: impl FnMut(&IntegralSpec) -> Result<Rational>,
) -> Result<Rational> {
    let mut total = Rational::zero();
    for (coeff, s) in terms(spec, k, shape) {
        total += coeff * eval(&s)?;
    }
    Ok(total)
}
