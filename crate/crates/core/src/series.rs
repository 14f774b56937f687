//! Power series in `t`, truncated at a fixed order, whose coefficients are
//! polynomials in `z` over [`Rational`].
//!
//! `z` is never substituted: it stays symbolic so a single expansion of a
//! one-point generating function carries every `λ`-index at once. The
//! `z`-degree of the coefficient of `t^d` is bounded by `d/2` for all the
//! series built here, since `z` only enters through `exp(z · log f)` with
//! `log f = O(t²)`.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use crate::arith::{factorial, Rational};
use crate::error::{invalid, Error, Result};

/// Default truncation order (covers genus up to 12).
pub const DEFAULT_ORDER: usize = 24;

/// Polynomial in `z`, trailing zeros trimmed (the zero polynomial is empty).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ZPoly {
    coeffs: Vec<Rational>,
}

impl ZPoly {
    pub fn zero() -> Self {
        ZPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        ZPoly::from_coeffs(vec![c])
    }

    /// `c0 + c1·z`.
    pub fn linear(c0: Rational, c1: Rational) -> Self {
        ZPoly::from_coeffs(vec![c0, c1])
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        ZPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `z^d` (zero beyond the degree).
    pub fn coeff(&self, d: usize) -> Rational {
        self.coeffs.get(d).cloned().unwrap_or_else(Rational::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The value if this polynomial has no `z` dependence.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.coeffs.len() {
            0 => Some(Rational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn scale(&self, c: &Rational) -> ZPoly {
        ZPoly::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }
}

impl Add<&ZPoly> for &ZPoly {
    type Output = ZPoly;
    fn add(self, rhs: &ZPoly) -> ZPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ZPoly::from_coeffs((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub<&ZPoly> for &ZPoly {
    type Output = ZPoly;
    fn sub(self, rhs: &ZPoly) -> ZPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ZPoly::from_coeffs((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul<&ZPoly> for &ZPoly {
    type Output = ZPoly;
    fn mul(self, rhs: &ZPoly) -> ZPoly {
        if self.is_zero() || rhs.is_zero() {
            return ZPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ZPoly::from_coeffs(out)
    }
}

impl Neg for &ZPoly {
    type Output = ZPoly;
    fn neg(self) -> ZPoly {
        ZPoly::from_coeffs(self.coeffs.iter().map(|x| -x).collect())
    }
}

/// `Σ_{d=0}^{order} f_d(z) t^d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZPolySeries {
    order: usize,
    coeffs: Vec<ZPoly>,
}

impl ZPolySeries {
    pub fn zero(order: usize) -> Self {
        ZPolySeries {
            order,
            coeffs: vec![ZPoly::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = ZPolySeries::zero(order);
        s.coeffs[0] = ZPoly::constant(Rational::one());
        s
    }

    /// Builds a series from its `t`-coefficients, padding or truncating to `order`.
    pub fn from_coeffs(order: usize, mut coeffs: Vec<ZPoly>) -> Self {
        coeffs.resize(order + 1, ZPoly::zero());
        ZPolySeries { order, coeffs }
    }

    /// Series with rational (z-free) coefficients.
    pub fn from_rationals(order: usize, coeffs: Vec<Rational>) -> Self {
        ZPolySeries::from_coeffs(order, coeffs.into_iter().map(ZPoly::constant).collect())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[ZPoly] {
        &self.coeffs
    }

    /// The polynomial multiplying `t^d`; zero past the truncation order.
    pub fn t_coeff(&self, d: usize) -> ZPoly {
        self.coeffs.get(d).cloned().unwrap_or_default()
    }

    /// Coefficient of `t^t_deg z^z_deg`.
    pub fn coeff(&self, t_deg: usize, z_deg: usize) -> Rational {
        self.coeffs
            .get(t_deg)
            .map_or_else(Rational::zero, |p| p.coeff(z_deg))
    }

    pub fn scale(&self, c: &Rational) -> ZPolySeries {
        self.map(|p| p.scale(c))
    }

    fn map(&self, f: impl Fn(&ZPoly) -> ZPoly) -> ZPolySeries {
        ZPolySeries {
            order: self.order,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    fn check_order(&self, other: &ZPolySeries) -> Result<()> {
        if self.order != other.order {
            return Err(Error::OrderMismatch(self.order, other.order));
        }
        Ok(())
    }

    pub fn add(&self, other: &ZPolySeries) -> Result<ZPolySeries> {
        self.check_order(other)?;
        Ok(ZPolySeries {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &ZPolySeries) -> Result<ZPolySeries> {
        self.check_order(other)?;
        Ok(ZPolySeries {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &ZPolySeries) -> Result<ZPolySeries> {
        self.check_order(other)?;
        let mut out = ZPolySeries::zero(self.order);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=self.order - i].iter().enumerate() {
                if !b.is_zero() {
                    out.coeffs[i + j] = &out.coeffs[i + j] + &(a * b);
                }
            }
        }
        Ok(out)
    }

    /// Multiplicative inverse; the constant term must be a nonzero rational.
    pub fn inverse(&self) -> Result<ZPolySeries> {
        let c0 = self.coeffs[0]
            .as_constant()
            .filter(|c| !c.is_zero())
            .ok_or_else(|| invalid("series inverse needs a nonzero z-free constant term"))?;
        let inv0 = c0.checked_recip().expect("nonzero");
        let mut out = ZPolySeries::zero(self.order);
        out.coeffs[0] = ZPoly::constant(inv0.clone());
        for n in 1..=self.order {
            let mut acc = ZPoly::zero();
            for k in 1..=n {
                acc = &acc + &(&self.coeffs[k] * &out.coeffs[n - k]);
            }
            out.coeffs[n] = (-&acc).scale(&inv0);
        }
        Ok(out)
    }

    /// Formal logarithm of a series with constant term `1`.
    pub fn log(&self) -> Result<ZPolySeries> {
        if self.coeffs[0].as_constant() != Some(Rational::one()) {
            return Err(invalid("series log needs constant term 1"));
        }
        // n L_n = n f_n - Σ_{k=1}^{n-1} k L_k f_{n-k}
        let mut out = ZPolySeries::zero(self.order);
        for n in 1..=self.order {
            let mut acc = self.coeffs[n].scale(&Rational::integer(n as i64));
            for k in 1..n {
                let term =
                    (&out.coeffs[k] * &self.coeffs[n - k]).scale(&Rational::integer(k as i64));
                acc = &acc - &term;
            }
            out.coeffs[n] = acc.scale(&Rational::new(1, n as i64));
        }
        Ok(out)
    }

    /// Formal exponential of a series with zero constant term.
    pub fn exp(&self) -> Result<ZPolySeries> {
        if !self.coeffs[0].is_zero() {
            return Err(invalid("series exp needs constant term 0"));
        }
        // n g_n = Σ_{k=1}^{n} k f_k g_{n-k}
        let mut out = ZPolySeries::one(self.order);
        for n in 1..=self.order {
            let mut acc = ZPoly::zero();
            for k in 1..=n {
                if self.coeffs[k].is_zero() {
                    continue;
                }
                let term =
                    (&self.coeffs[k] * &out.coeffs[n - k]).scale(&Rational::integer(k as i64));
                acc = &acc + &term;
            }
            out.coeffs[n] = acc.scale(&Rational::new(1, n as i64));
        }
        Ok(out)
    }

    /// Multiplies every coefficient by the polynomial `p(z)`.
    pub fn mul_zpoly(&self, p: &ZPoly) -> ZPolySeries {
        self.map(|c| c * p)
    }
}

/// `(s·t/2) / sin(s·t/2)` truncated at `order`, from the Taylor series of `sin`.
pub fn sinc_half(scale: u32, order: usize) -> Result<ZPolySeries> {
    if scale == 0 {
        return Err(invalid("sinc_half needs a positive scale"));
    }
    // sin(u)/u = Σ (-1)^m u^{2m} / (2m+1)!, u = s t / 2
    let half_s = Rational::new(scale as i64, 2);
    let mut coeffs = vec![Rational::zero(); order + 1];
    for m in 0..=order / 2 {
        let sign = if m % 2 == 0 {
            Rational::one()
        } else {
            Rational::integer(-1)
        };
        coeffs[2 * m] = sign * half_s.pow(2 * m as u32) / factorial(2 * m as u64 + 1);
    }
    ZPolySeries::from_rationals(order, coeffs).inverse()
}

/// `f^{c0 + c1·z} = exp((c0 + c1 z) log f)` for `f` with constant term `1`.
pub fn pow_z_shift(f: &ZPolySeries, c0: i64, c1: i64) -> Result<ZPolySeries> {
    let exponent = ZPoly::linear(Rational::integer(c0), Rational::integer(c1));
    f.log()?.mul_zpoly(&exponent).exp()
}

/// `((t/2)/sin(t/2))^{z+1}`: `t^{2g} z^l` carries `∫_{M̄_{g,1}} ψ^{2g-2+l} λ_{g-l}`.
pub fn hodge_onepoint(order: usize) -> Result<ZPolySeries> {
    pow_z_shift(&sinc_half(1, order)?, 1, 1)
}

/// `(1/N) ((Nt/2)/sin(Nt/2))^z (t/2)/sin(t/2)`, the `B Z_N` analogue of
/// [`hodge_onepoint`].
pub fn hurwitz_hodge_onepoint(modulus: u32, order: usize) -> Result<ZPolySeries> {
    if modulus == 0 {
        return Err(invalid("N must be at least 1"));
    }
    let scaled = pow_z_shift(&sinc_half(modulus, order)?, 0, 1)?;
    let s1 = sinc_half(1, order)?;
    Ok(scaled.mul(&s1)?.scale(&Rational::new(1, modulus as i64)))
}

/// `(1/N) (t/2)/sin(t/2) (((Nt/2)/sin(Nt/2))^z - ((t/2)/sin(t/2))^z)`: the
/// contribution of covers with nontrivial monodromy. The `z¹` coefficients
/// are the one-point initial values of the line theory.
pub fn initial_onepoint(modulus: u32, order: usize) -> Result<ZPolySeries> {
    if modulus == 0 {
        return Err(invalid("N must be at least 1"));
    }
    let s1 = sinc_half(1, order)?;
    let sn_z = pow_z_shift(&sinc_half(modulus, order)?, 0, 1)?;
    let s1_z = pow_z_shift(&s1, 0, 1)?;
    Ok(s1
        .mul(&sn_z.sub(&s1_z)?)?
        .scale(&Rational::new(1, modulus as i64)))
}

/// `⟨τ_{2g-1} | λ_{r₁}⟩_g`: the coefficient of `t^{2g} z` in
/// [`initial_onepoint`].
pub fn extract_line_initial(modulus: u32, genus: u32) -> Result<Rational> {
    if genus < 1 {
        return Err(invalid("extract_line_initial needs g >= 1"));
    }
    let order = 2 * genus as usize;
    Ok(initial_onepoint(modulus, order)?.coeff(order, 1))
}
