//! Descendant Hurwitz-Hodge integrals against `λ_{r₁}²` coming from
//! `P(1,1,N)`.
//!
//! Stacky points of block `i` carry the weight `w_i = 2i/N - ½`. The stacky
//! closed form is `Σ_r c_r Θ(k, l)_r` as in the line theory, with half-integer
//! shifts throughout.

use alloc::vec::Vec;

use crate::arith::{
    double_factorial, factorial, frac_factorial, half_step_factorial, shifted_factorial, Rational,
};
use crate::error::{invalid, Error, Result};
use crate::linalg::Matrix;
use crate::line::{block_matrix, defining_point_residuals};
use crate::moduli::{
    dim_gate_surface, is_admissible, require_admissible, GammaKey, GammaTable, IntegralSpec,
    StackyType, Theory,
};
use crate::recursion::{self, bracket, Shape};
use crate::{CoeffVector, ThetaVector};

/// Which off-diagonal entries to use for the surface coefficient matrix.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum MatrixMode {
    /// Entries `w_i = 2i/N - ½`, the values `Θ` takes at the defining points.
    #[default]
    Consistent,
    /// Entries `2i/N`.
    Verbatim,
}

impl core::fmt::Display for MatrixMode {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            MatrixMode::Consistent => "consistent",
            MatrixMode::Verbatim => "verbatim",
        })
    }
}

impl core::str::FromStr for MatrixMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "consistent" => Ok(MatrixMode::Consistent),
            "verbatim" => Ok(MatrixMode::Verbatim),
            other => Err(invalid(alloc::format!("unknown matrix mode {other:?}"))),
        }
    }
}

/// How to read the non-stacky coefficient of the surface relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SurfaceReading {
    /// `[l - ½]_0^k / [½]_0^k`, the same family used for stacky points.
    Bracket,
    /// `(2l+2k-1)!! / ((2k+1)!! (2l-1)!!)`.
    Printed,
}

/// Per-block weights `2i/N - ½` together with the degree `a` of the initial
/// values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceWeights {
    pub weights: Vec<Rational>,
    pub budget: Rational,
}

impl SurfaceWeights {
    pub fn new(genus: u32, x: &StackyType) -> Self {
        SurfaceWeights {
            weights: surface_weights(x),
            budget: surface_budget(genus, x),
        }
    }
}

fn block_weight(block: u32, modulus: u32) -> Rational {
    Rational::new(2 * block as i64, modulus as i64) - Rational::new(1, 2)
}

/// `w_j = 2i/N - ½` for every stacky position `j` in block `i`.
pub fn surface_weights(x: &StackyType) -> Vec<Rational> {
    x.blocks()
        .into_iter()
        .map(|b| block_weight(b, x.modulus()))
        .collect()
}

/// `a = g - 1 + Σn_i - Σ (2i/N) n_i`.
pub fn surface_budget(genus: u32, x: &StackyType) -> Rational {
    Rational::integer(genus as i64 - 1 + x.total() as i64)
        - Rational::new(2 * x.weighted_sum() as i64, x.modulus() as i64)
}

/// Errors if some occupied block has weight zero (`N ≡ 0 mod 4`, `n_{N/4} > 0`).
pub fn check_weights(x: &StackyType) -> Result<()> {
    for (i, &m) in x.multiplicities().iter().enumerate() {
        let block = i as u32 + 1;
        if m > 0 && block_weight(block, x.modulus()).is_zero() {
            return Err(Error::DegenerateWeight {
                block,
                modulus: x.modulus(),
            });
        }
    }
    Ok(())
}

/// `(2g+n-3)! (2g-1)!! / ((2g-1)! ∏ (2l_j-1)!!) · initial` when
/// `Σ l = g + n - 1`, else `0`.
pub fn nonstacky_integral_surface(genus: u32, l: &[u32], initial: &Rational) -> Result<Rational> {
    if genus < 1 {
        return Err(invalid("non-stacky surface integrals need g >= 1"));
    }
    if l.is_empty() {
        return Err(invalid(
            "non-stacky surface integrals need at least one insertion",
        ));
    }
    let n = l.len() as u64;
    let g = genus as u64;
    if l.iter().map(|&x| x as u64).sum::<u64>() != g + n - 1 {
        return Ok(Rational::zero());
    }
    let mut denom = factorial(2 * g - 1);
    for &lj in l {
        denom *= Rational::from_bigint(double_factorial(2 * lj as i64 - 1)?);
    }
    let num = factorial(2 * g + n - 3) * Rational::from_bigint(double_factorial(2 * g as i64 - 1)?);
    Ok(num / denom * initial)
}

fn prefactor(genus: u32, points: usize) -> Result<Rational> {
    half_step_factorial(&(Rational::integer(genus as i64) + Rational::new(points as i64 - 3, 2)))
}

/// `Θ(k, l)_r = (g + ½(n+Σn_i-3))! (k_r + w_s) / (∏ (l_j - ½)! ∏_j (k_j + w_b)!)`
/// where `s` is the block of `r`, `(k + w)! = ∏_{m=0}^{k} (w + m)` and the
/// leading factorial steps down by halves.
pub fn theta_surface(genus: u32, x: &StackyType, k: &[u32], l: &[u32]) -> Result<ThetaVector> {
    if k.len() != x.total() {
        return Err(invalid("stacky exponents do not match the stacky type"));
    }
    check_weights(x)?;
    let weights = surface_weights(x);
    let half = Rational::new(1, 2);
    let mut denom = Rational::one();
    for &lj in l {
        denom *= frac_factorial(&(Rational::integer(lj as i64) - &half))?;
    }
    for (kj, w) in k.iter().zip(&weights) {
        denom *= shifted_factorial(w, *kj as i64)?;
    }
    let pre = prefactor(genus, l.len() + x.total())? / denom;
    Ok(ThetaVector(
        k.iter()
            .zip(&weights)
            .map(|(kr, w)| &pre * (Rational::integer(*kr as i64) + w))
            .collect(),
    ))
}

/// `a·I + 1·vᵀ` with `v_t = w_t` (consistent) or `v_t = 2i(t)/N` (verbatim).
pub fn build_matrix_surface(x: &StackyType, a: &Rational, mode: MatrixMode) -> Matrix {
    let entries: Vec<Rational> = match mode {
        MatrixMode::Consistent => surface_weights(x),
        MatrixMode::Verbatim => x
            .blocks()
            .into_iter()
            .map(|b| Rational::new(2 * b as i64, x.modulus() as i64))
            .collect(),
    };
    block_matrix(&entries, a)
}

/// Multiplies row `j` (block `i`) by
/// `(g + ½(Σn_i-3))! w_i / ((a + w_i)! ∏ w_i^{n_i})`.
pub fn scale_matrix_surface(
    matrix: &Matrix,
    genus: u32,
    x: &StackyType,
    a: &Rational,
) -> Result<Matrix> {
    check_weights(x)?;
    let a = a.to_i64().filter(|&v| v >= 0).ok_or_else(|| {
        invalid(alloc::format!(
            "budget a = {a} is not a nonnegative integer"
        ))
    })?;
    let weights = surface_weights(x);
    if matrix.rows() != weights.len() || !matrix.is_square() {
        return Err(invalid("matrix size does not match the stacky type"));
    }
    let weight_product: Rational = weights.iter().product();
    let pre = prefactor(genus, x.total())?;
    let mut out = matrix.clone();
    for (j, w) in weights.iter().enumerate() {
        let factor = &pre * w / (shifted_factorial(w, a)? * &weight_product);
        out.scale_row(j, &factor);
    }
    Ok(out)
}

/// A solved surface coefficient system for one `(N, g, stacky type)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceSystem {
    genus: u32,
    stacky: StackyType,
    budget: u32,
    mode: MatrixMode,
    coeffs: CoeffVector,
}

impl SurfaceSystem {
    pub fn solve(genus: u32, x: &StackyType, gamma: &[Rational], mode: MatrixMode) -> Result<Self> {
        require_admissible(genus, x)?;
        check_weights(x)?;
        if genus < 1 || x.total() == 0 {
            return Err(invalid(
                "the stacky surface system needs g >= 1 and a stacky point",
            ));
        }
        if gamma.len() != x.total() {
            return Err(invalid("Γ length does not match the stacky type"));
        }
        let a = surface_budget(genus, x);
        if !a.is_integer() || !a.is_positive() {
            return Err(Error::Singular(alloc::format!(
                "no defining system: a = {a} for g = {genus}, {x}"
            )));
        }
        let budget = a
            .to_i64()
            .and_then(|v| u32::try_from(v).ok())
            .ok_or_else(|| invalid("budget too large"))?;
        let scaled = scale_matrix_surface(&build_matrix_surface(x, &a, mode), genus, x, &a)?;
        let coeffs = CoeffVector(scaled.solve(gamma)?);
        Ok(SurfaceSystem {
            genus,
            stacky: x.clone(),
            budget,
            mode,
            coeffs,
        })
    }

    pub fn from_table(
        genus: u32,
        x: &StackyType,
        table: &GammaTable,
        mode: MatrixMode,
    ) -> Result<Self> {
        let key = GammaKey {
            theory: Theory::Surface,
            genus,
            stacky: x.clone(),
        };
        SurfaceSystem::solve(genus, x, table.require(&key)?, mode)
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn stacky(&self) -> &StackyType {
        &self.stacky
    }

    pub fn budget(&self) -> u32 {
        self.budget
    }

    pub fn mode(&self) -> MatrixMode {
        self.mode
    }

    pub fn coeffs(&self) -> &CoeffVector {
        &self.coeffs
    }

    /// `Σ_r c_r Θ(k, l)_r`, or `0` when the dimension gate fails.
    pub fn value(&self, spec: &IntegralSpec) -> Result<Rational> {
        if spec.genus != self.genus {
            return Err(invalid("integral genus differs from the solved system"));
        }
        if !dim_gate_surface(&self.stacky, spec)? {
            return Ok(Rational::zero());
        }
        Ok(theta_surface(self.genus, &self.stacky, &spec.k, &spec.l)?.dot(&self.coeffs))
    }

    /// `value(a·e_j) - Γ_j` for every `j`.
    pub fn gamma_residuals(&self, gamma: &[Rational]) -> Result<Vec<Rational>> {
        defining_point_residuals(self.genus, self.stacky.total(), self.budget, gamma, |s| {
            self.value(s)
        })
    }
}

/// The stacky closed form for one integral, solving the system from `gamma`.
pub fn stacky_integral_surface(
    x: &StackyType,
    spec: &IntegralSpec,
    gamma: &[Rational],
    mode: MatrixMode,
) -> Result<Rational> {
    require_admissible(spec.genus, x)?;
    spec.check_aligned(x)?;
    check_weights(x)?;
    if !dim_gate_surface(x, spec)? {
        return Ok(Rational::zero());
    }
    SurfaceSystem::solve(spec.genus, x, gamma, mode)?.value(spec)
}

/// Result of evaluating one surface integral end to end.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceEvaluation {
    pub value: Rational,
    pub admissible: bool,
    pub dim_ok: bool,
    pub coeffs: Option<CoeffVector>,
}

/// Evaluates any surface integral. Non-stacky integrals need `initial`
/// (`⟨τ_g | λ_{r₁}²⟩`) whenever the dimension gate holds.
pub fn evaluate_surface(
    x: &StackyType,
    spec: &IntegralSpec,
    table: &GammaTable,
    initial: Option<&Rational>,
    mode: MatrixMode,
) -> Result<SurfaceEvaluation> {
    let spec = spec.normalized();
    spec.check_aligned(x)?;
    let dim_ok = dim_gate_surface(x, &spec)?;
    let admissible = is_admissible(spec.genus, x);
    let zero = |dim_ok| SurfaceEvaluation {
        value: Rational::zero(),
        admissible,
        dim_ok,
        coeffs: None,
    };
    if !admissible {
        return Ok(zero(dim_ok));
    }
    if x.total() == 0 {
        let value = match initial {
            Some(i) => nonstacky_integral_surface(spec.genus, &spec.l, i)?,
            None if dim_ok => return Err(Error::MissingInitial(spec.genus)),
            None => nonstacky_integral_surface(spec.genus, &spec.l, &Rational::zero())?,
        };
        return Ok(SurfaceEvaluation {
            value,
            admissible,
            dim_ok,
            coeffs: None,
        });
    }
    check_weights(x)?;
    if !dim_ok {
        return Ok(zero(false));
    }
    let system = SurfaceSystem::from_table(spec.genus, x, table, mode)?;
    Ok(SurfaceEvaluation {
        value: system.value(&spec)?,
        admissible,
        dim_ok,
        coeffs: Some(system.coeffs.clone()),
    })
}

fn surface_shape(weights: &[Rational]) -> Shape<'_> {
    Shape {
        nonstacky_shift: Rational::new(-1, 2),
        normalizer: Rational::new(1, 2),
        weights,
    }
}

/// Residual of the `k`-th surface relation at `spec` for the stacky closed
/// form, with coefficients `[l_i - ½]_0^k/[½]_0^k` and `[k_j + w]_0^k/[½]_0^k`.
pub fn recursion_residual_surface(
    x: &StackyType,
    spec: &IntegralSpec,
    virasoro_k: u32,
    gamma: &[Rational],
    mode: MatrixMode,
) -> Result<Rational> {
    let system = SurfaceSystem::solve(spec.genus, x, gamma, mode)?;
    recursion_residual_surface_with(&system, spec, virasoro_k)
}

/// As [`recursion_residual_surface`] with an already solved system.
pub fn recursion_residual_surface_with(
    system: &SurfaceSystem,
    spec: &IntegralSpec,
    virasoro_k: u32,
) -> Result<Rational> {
    if virasoro_k < 1 {
        return Err(invalid("Virasoro index must be >= 1"));
    }
    spec.check_aligned(&system.stacky)?;
    let weights = surface_weights(&system.stacky);
    recursion::residual(spec, virasoro_k, &surface_shape(&weights), |s| {
        system.value(s)
    })
}

/// Residual of the non-stacky surface relation on the double-factorial closed
/// form, under either reading of its coefficient.
pub fn recursion_residual_surface_nonstacky(
    genus: u32,
    l: &[u32],
    virasoro_k: u32,
    initial: &Rational,
    reading: SurfaceReading,
) -> Result<Rational> {
    if virasoro_k < 1 {
        return Err(invalid("Virasoro index must be >= 1"));
    }
    let eval = |l: &[u32]| nonstacky_integral_surface(genus, l, initial);
    let spec = IntegralSpec::new(genus, l.to_vec(), Vec::new());
    match reading {
        SurfaceReading::Bracket => {
            recursion::residual(&spec, virasoro_k, &surface_shape(&[]), |s| eval(&s.l))
        }
        SurfaceReading::Printed => {
            let k = virasoro_k as i64;
            let mut head = l.to_vec();
            head.insert(0, virasoro_k + 1);
            let mut total = -eval(&head)?;
            let kk = Rational::from_bigint(double_factorial(2 * k + 1)?);
            for i in 0..l.len() {
                let li = l[i] as i64;
                let coeff = Rational::from_bigint(double_factorial(2 * li + 2 * k - 1)?)
                    / (&kk * Rational::from_bigint(double_factorial(2 * li - 1)?));
                let mut s = l.to_vec();
                s[i] += virasoro_k;
                total += coeff * eval(&s)?;
            }
            Ok(total)
        }
    }
}

/// `[l - ½]_0^k / [½]_0^k`.
pub fn bracket_ratio(l: u32, k: u32) -> Rational {
    bracket(&(Rational::integer(l as i64) - Rational::new(1, 2)), k)
        / bracket(&Rational::new(1, 2), k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn qs(v: &[&str]) -> Vec<Rational> {
        v.iter().map(|s| q(s)).collect()
    }

    fn x(n: u32, mult: &[u32]) -> StackyType {
        StackyType::new(n, mult.to_vec()).unwrap()
    }

    #[test]
    fn nonstacky_examples() {
        let i = q("5/11");
        assert_eq!(nonstacky_integral_surface(1, &[1], &i).unwrap(), i);
        assert_eq!(nonstacky_integral_surface(1, &[1, 1], &i).unwrap(), i);
        assert_eq!(
            nonstacky_integral_surface(1, &[2, 0], &i).unwrap(),
            q("5/33")
        );
        assert_eq!(
            nonstacky_integral_surface(1, &[0, 2], &i).unwrap(),
            q("5/33")
        );
        assert_eq!(nonstacky_integral_surface(1, &[3, 0], &i).unwrap(), q("0"));
        // One insertion at l = g carries (2g-2)!/(2g-1)! = 1/(2g-1).
        assert_eq!(nonstacky_integral_surface(2, &[2], &i).unwrap(), q("5/33"));
        assert!(nonstacky_integral_surface(0, &[1], &i).is_err());
    }

    #[test]
    fn theta_examples() {
        let t = x(2, &[2]);
        assert_eq!(
            theta_surface(2, &t, &[1, 0], &[]).unwrap().0,
            qs(&["3", "1"])
        );
        assert_eq!(
            theta_surface(2, &t, &[0, 1], &[]).unwrap().0,
            qs(&["1", "3"])
        );
        // l = 0 contributes (-½)! = 1.
        assert_eq!(
            theta_surface(2, &t, &[1, 0], &[0]).unwrap().0,
            theta_surface(2, &t, &[1, 0], &[])
                .unwrap()
                .0
                .iter()
                .map(|v| v * prefactor(2, 3).unwrap() / prefactor(2, 2).unwrap())
                .collect::<Vec<_>>()
        );
        assert!(matches!(
            theta_surface(1, &x(4, &[1, 0, 0]), &[0], &[]),
            Err(Error::DegenerateWeight {
                block: 1,
                modulus: 4
            })
        ));
    }

    #[test]
    fn matrix_examples() {
        let t = x(2, &[2]);
        let one = q("1");
        let c = build_matrix_surface(&t, &one, MatrixMode::Consistent);
        let v = build_matrix_surface(&t, &one, MatrixMode::Verbatim);
        assert_eq!(c.to_rows(), vec![qs(&["3/2", "1/2"]), qs(&["1/2", "3/2"])]);
        assert_eq!(v.to_rows(), vec![qs(&["2", "1"]), qs(&["1", "2"])]);
        for mode in [MatrixMode::Consistent, MatrixMode::Verbatim] {
            assert!(build_matrix_surface(&t, &q("0"), mode)
                .determinant()
                .unwrap()
                .is_zero());
        }
        assert_eq!(
            scale_matrix_surface(&c, 2, &t, &one).unwrap().to_rows(),
            vec![qs(&["3", "1"]), qs(&["1", "3"])]
        );
        assert_eq!(
            scale_matrix_surface(&v, 2, &t, &one).unwrap().to_rows(),
            vec![qs(&["4", "2"]), qs(&["2", "4"])]
        );
        let d = x(4, &[1, 0, 0]);
        let m = build_matrix_surface(&d, &one, MatrixMode::Consistent);
        assert!(matches!(
            scale_matrix_surface(&m, 1, &d, &one),
            Err(Error::DegenerateWeight { .. })
        ));
    }

    #[test]
    fn stacky_examples() {
        let t = x(2, &[2]);
        let gamma = qs(&["2/9", "-7"]);
        let v = |k: &[u32]| {
            stacky_integral_surface(
                &t,
                &IntegralSpec::new(2, vec![], k.to_vec()),
                &gamma,
                MatrixMode::Consistent,
            )
            .unwrap()
        };
        assert_eq!(v(&[1, 0]), q("2/9"));
        assert_eq!(v(&[0, 1]), q("-7"));
        assert_eq!(v(&[2, 0]), q("0"));
    }

    #[test]
    fn verbatim_misses_the_defining_points() {
        let t = x(2, &[2]);
        let gamma = qs(&["1", "1"]);
        let c = SurfaceSystem::solve(2, &t, &gamma, MatrixMode::Consistent).unwrap();
        let v = SurfaceSystem::solve(2, &t, &gamma, MatrixMode::Verbatim).unwrap();
        assert!(c
            .gamma_residuals(&gamma)
            .unwrap()
            .iter()
            .all(Rational::is_zero));
        assert!(v
            .gamma_residuals(&gamma)
            .unwrap()
            .iter()
            .any(|r| !r.is_zero()));
    }

    #[test]
    fn stacky_residual_vanishes() {
        let t = x(3, &[1, 1]);
        // w = (1/6, 5/6), g = 2: a = 2 - 1 + 2 - 2 = 1; relation is
        // non-trivial when Σl + Σk_j = a + n - k.
        let gamma = qs(&["3/4", "-1/5"]);
        for (k, l, kk) in [
            (1, vec![1], vec![0, 0]),
            (1, vec![], vec![0, 0]),
            (2, vec![1, 0], vec![0, 0]),
        ] {
            let spec = IntegralSpec::new(2, l, kk);
            let r =
                recursion_residual_surface(&t, &spec, k, &gamma, MatrixMode::Consistent).unwrap();
            assert!(r.is_zero(), "k={k} residual {r}");
        }
    }

    #[test]
    fn nonstacky_residual_examples() {
        // g = 1, l = (0), k = 1: -⟨τ_2 τ_0⟩ + coeff·⟨τ_1⟩ with ⟨τ_2 τ_0⟩ = I/3.
        let i = q("1");
        let printed =
            recursion_residual_surface_nonstacky(1, &[0], 1, &i, SurfaceReading::Printed).unwrap();
        let bracket =
            recursion_residual_surface_nonstacky(1, &[0], 1, &i, SurfaceReading::Bracket).unwrap();
        assert_eq!(printed, q("0"));
        assert_eq!(bracket, q("-2/3"));
        // Outside the gate every term vanishes.
        assert!(
            recursion_residual_surface_nonstacky(1, &[1, 1], 1, &i, SurfaceReading::Bracket)
                .unwrap()
                .is_zero()
        );
    }

    #[test]
    fn bracket_ratio_values() {
        assert_eq!(bracket_ratio(1, 1), q("1"));
        assert_eq!(bracket_ratio(0, 1), q("-1/3"));
        assert_eq!(bracket_ratio(2, 1), q("5"));
    }

    #[test]
    fn mode_parsing() {
        assert_eq!(
            "verbatim".parse::<MatrixMode>().unwrap(),
            MatrixMode::Verbatim
        );
        assert!("other".parse::<MatrixMode>().is_err());
    }
}
