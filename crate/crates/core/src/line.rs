//! Descendant Hurwitz-Hodge integrals against `λ_{r₁}` coming from `P(1,N)`.
//!
//! With only non-stacky insertions the integral is a multinomial multiple of
//! the one-point value `⟨τ_{2g-1} | λ_{r₁}⟩`. With stacky insertions it is a
//! combination `Σ_r c_r Θ(k, l)_r`, where the `c_r` are fixed by matching the
//! initial values `Γ_j` at the points `k = a·e_j`, `l = ()`.

use alloc::vec::Vec;

use crate::arith::{factorial, multinomial, shifted_factorial, Rational};
use crate::error::{invalid, Result};
use crate::linalg::Matrix;
use crate::moduli::{
    dim_gate_line, is_admissible, require_admissible, GammaKey, GammaTable, IntegralSpec,
    StackyType, Theory,
};
use crate::recursion::{self, Shape};
use crate::series::extract_line_initial;
use crate::{CoeffVector, ThetaVector};

/// `binom(2g+n-2; l_1..l_n) · initial` when `Σ l = 2g - 2 + n`, else `0`.
pub fn nonstacky_integral_line(genus: u32, l: &[u32], initial: &Rational) -> Result<Rational> {
    if genus < 1 {
        return Err(invalid("non-stacky line integrals need g >= 1"));
    }
    if l.is_empty() {
        return Err(invalid(
            "non-stacky line integrals need at least one insertion",
        ));
    }
    let top = 2 * genus as u64 + l.len() as u64 - 2;
    let parts: Vec<u64> = l.iter().map(|&x| x as u64).collect();
    if parts.iter().sum::<u64>() != top {
        return Ok(Rational::zero());
    }
    Ok(Rational::from_bigint(multinomial(top, &parts)?) * initial)
}

/// `Θ(k, l)_r = (2g-3+n+Σn_i)! (k_r + s/N) / (∏ l_j! ∏_j (k_j + b_j/N)!)`
/// where `s` is the block of `r` and `(k + b/N)! = ∏_{m=0}^{k} (m + b/N)`.
pub fn theta_line(genus: u32, x: &StackyType, k: &[u32], l: &[u32]) -> Result<ThetaVector> {
    if k.len() != x.total() {
        return Err(invalid("stacky exponents do not match the stacky type"));
    }
    let top = 2 * genus as i64 - 3 + l.len() as i64 + x.total() as i64;
    if top < 0 {
        return Err(invalid("Θ needs 2g - 3 + n + Σn_i >= 0"));
    }
    let ages = x.ages();
    let mut denom: Rational = l.iter().map(|&lj| factorial(lj as u64)).product();
    for (kj, age) in k.iter().zip(&ages) {
        denom *= shifted_factorial(age, *kj as i64)?;
    }
    let pre = factorial(top as u64) / denom;
    Ok(ThetaVector(
        k.iter()
            .zip(&ages)
            .map(|(kr, age)| &pre * (Rational::integer(*kr as i64) + age))
            .collect(),
    ))
}

/// `a = 2g - 2 + Σn_i - Σ (i/N) n_i`, the ψ-degree of the initial values.
pub fn line_budget(genus: u32, x: &StackyType) -> Rational {
    Rational::integer(2 * genus as i64 - 2 + x.total() as i64)
        - Rational::new(x.weighted_sum() as i64, x.modulus() as i64)
}

fn budget_u32(a: &Rational) -> Result<u32> {
    a.to_i64()
        .filter(|&v| v >= 0)
        .and_then(|v| u32::try_from(v).ok())
        .ok_or_else(|| {
            invalid(alloc::format!(
                "budget a = {a} is not a nonnegative integer"
            ))
        })
}

/// The matrix with `i/N` in every column of block `i` and `a` added on the
/// diagonal, i.e. `a·I + 1·wᵀ` with `w_t = i(t)/N`.
pub fn build_matrix_line(x: &StackyType, a: &Rational) -> Matrix {
    block_matrix(&x.ages(), a)
}

pub(crate) fn block_matrix(weights: &[Rational], a: &Rational) -> Matrix {
    let m = weights.len();
    let mut out = Matrix::zeros(m, m);
    for s in 0..m {
        for (t, w) in weights.iter().enumerate() {
            out[(s, t)] = if s == t { w + a } else { w.clone() };
        }
    }
    out
}

/// Multiplies row `j` (block `i`) by
/// `(i/N)(2g-3+Σn_i)! / ((a + i/N)! ∏ (i/N)^{n_i})`.
pub fn scale_matrix_line(
    matrix: &Matrix,
    genus: u32,
    x: &StackyType,
    a: &Rational,
) -> Result<Matrix> {
    let a = budget_u32(a)?;
    let top = 2 * genus as i64 - 3 + x.total() as i64;
    if top < 0 {
        return Err(invalid("row scaling needs 2g - 3 + Σn_i >= 0"));
    }
    let ages = x.ages();
    if matrix.rows() != ages.len() || !matrix.is_square() {
        return Err(invalid("matrix size does not match the stacky type"));
    }
    let age_product: Rational = ages.iter().product();
    let fact = factorial(top as u64);
    let mut out = matrix.clone();
    for (j, age) in ages.iter().enumerate() {
        let factor = age * &fact / (shifted_factorial(age, a as i64)? * &age_product);
        out.scale_row(j, &factor);
    }
    Ok(out)
}

/// Exact solution of `𝐀 c = Γ`.
pub fn solve_coefficients(matrix: &Matrix, gamma: &[Rational]) -> Result<CoeffVector> {
    Ok(CoeffVector(matrix.solve(gamma)?))
}

/// A solved coefficient system for one `(N, g, stacky type)`; evaluates any
/// stacky integral of that type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineSystem {
    genus: u32,
    stacky: StackyType,
    budget: u32,
    coeffs: CoeffVector,
}

impl LineSystem {
    pub fn solve(genus: u32, x: &StackyType, gamma: &[Rational]) -> Result<Self> {
        require_admissible(genus, x)?;
        if genus < 1 || x.total() == 0 {
            return Err(invalid(
                "the stacky line system needs g >= 1 and a stacky point",
            ));
        }
        if gamma.len() != x.total() {
            return Err(invalid("Γ length does not match the stacky type"));
        }
        let a = line_budget(genus, x);
        let budget = budget_u32(&a)?;
        let scaled = scale_matrix_line(&build_matrix_line(x, &a), genus, x, &a)?;
        let coeffs = solve_coefficients(&scaled, gamma)?;
        Ok(LineSystem {
            genus,
            stacky: x.clone(),
            budget,
            coeffs,
        })
    }

    pub fn from_table(genus: u32, x: &StackyType, table: &GammaTable) -> Result<Self> {
        let key = GammaKey {
            theory: Theory::Line,
            genus,
            stacky: x.clone(),
        };
        LineSystem::solve(genus, x, table.require(&key)?)
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn stacky(&self) -> &StackyType {
        &self.stacky
    }

    /// The integer `a` of the defining points `k = a·e_j`.
    pub fn budget(&self) -> u32 {
        self.budget
    }

    pub fn coeffs(&self) -> &CoeffVector {
        &self.coeffs
    }

    /// `Σ_r c_r Θ(k, l)_r`, or `0` when the dimension gate fails.
    pub fn value(&self, spec: &IntegralSpec) -> Result<Rational> {
        if spec.genus != self.genus {
            return Err(invalid("integral genus differs from the solved system"));
        }
        if !dim_gate_line(&self.stacky, spec)? {
            return Ok(Rational::zero());
        }
        Ok(theta_line(self.genus, &self.stacky, &spec.k, &spec.l)?.dot(&self.coeffs))
    }

    /// `value(a·e_j) - Γ_j` for every `j`; identically zero for a
    /// self-consistent system.
    pub fn gamma_residuals(&self, gamma: &[Rational]) -> Result<Vec<Rational>> {
        defining_point_residuals(self.genus, self.stacky.total(), self.budget, gamma, |s| {
            self.value(s)
        })
    }
}

pub(crate) fn defining_point_residuals(
    genus: u32,
    total: usize,
    budget: u32,
    gamma: &[Rational],
    mut eval: impl FnMut(&IntegralSpec) -> Result<Rational>,
) -> Result<Vec<Rational>> {
    (0..total)
        .map(|j| {
            let mut k = alloc::vec![0; total];
            k[j] = budget;
            Ok(eval(&IntegralSpec::new(genus, Vec::new(), k))? - &gamma[j])
        })
        .collect()
}

/// The stacky closed form for one integral, solving the system from `gamma`.
pub fn stacky_integral_line(
    x: &StackyType,
    spec: &IntegralSpec,
    gamma: &[Rational],
) -> Result<Rational> {
    require_admissible(spec.genus, x)?;
    spec.check_aligned(x)?;
    if !dim_gate_line(x, spec)? {
        return Ok(Rational::zero());
    }
    LineSystem::solve(spec.genus, x, gamma)?.value(spec)
}

/// Result of evaluating one line integral end to end.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineEvaluation {
    pub value: Rational,
    pub admissible: bool,
    pub dim_ok: bool,
    pub coeffs: Option<CoeffVector>,
}

/// Evaluates any line integral: inadmissible types and failed dimension gates
/// give `0`; non-stacky integrals use `initial` (default: the one-point value
/// from the generating series); stacky ones solve against `table`.
pub fn evaluate_line(
    x: &StackyType,
    spec: &IntegralSpec,
    table: &GammaTable,
    initial: Option<&Rational>,
) -> Result<LineEvaluation> {
    let spec = spec.normalized();
    spec.check_aligned(x)?;
    let dim_ok = dim_gate_line(x, &spec)?;
    let admissible = is_admissible(spec.genus, x);
    let zero = |dim_ok| LineEvaluation {
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
            Some(i) => nonstacky_integral_line(spec.genus, &spec.l, i)?,
            None if dim_ok => {
                let i = extract_line_initial(x.modulus(), spec.genus)?;
                nonstacky_integral_line(spec.genus, &spec.l, &i)?
            }
            None => nonstacky_integral_line(spec.genus, &spec.l, &Rational::zero())?,
        };
        return Ok(LineEvaluation {
            value,
            admissible,
            dim_ok,
            coeffs: None,
        });
    }
    if !dim_ok {
        return Ok(zero(false));
    }
    let system = LineSystem::from_table(spec.genus, x, table)?;
    Ok(LineEvaluation {
        value: system.value(&spec)?,
        admissible,
        dim_ok,
        coeffs: Some(system.coeffs.clone()),
    })
}

fn line_shape(weights: &[Rational]) -> Shape<'_> {
    Shape {
        nonstacky_shift: Rational::zero(),
        normalizer: Rational::one(),
        weights,
    }
}

/// Residual of the `k`-th relation at `spec` for the stacky closed form:
/// `-⟨τ_{k+1} …⟩ + Σ_i (l_i+k)!/((l_i-1)!(k+1)!) ⟨…τ_{l_i+k}…⟩
///  + Σ_j (k_j+k+i/N)!/((k_j-1+i/N)!(k+1)!) ⟨…τ̃_{k_j+k}…⟩`.
pub fn recursion_residual_line(
    x: &StackyType,
    spec: &IntegralSpec,
    virasoro_k: u32,
    gamma: &[Rational],
) -> Result<Rational> {
    let system = LineSystem::solve(spec.genus, x, gamma)?;
    recursion_residual_line_with(&system, spec, virasoro_k)
}

/// As [`recursion_residual_line`] with an already solved system.
pub fn recursion_residual_line_with(
    system: &LineSystem,
    spec: &IntegralSpec,
    virasoro_k: u32,
) -> Result<Rational> {
    if virasoro_k < 1 {
        return Err(invalid("Virasoro index must be >= 1"));
    }
    spec.check_aligned(&system.stacky)?;
    let ages = system.stacky.ages();
    recursion::residual(spec, virasoro_k, &line_shape(&ages), |s| system.value(s))
}

/// Residual of the same relation with no stacky points, evaluated on the
/// multinomial closed form.
pub fn recursion_residual_line_nonstacky(
    genus: u32,
    l: &[u32],
    virasoro_k: u32,
    initial: &Rational,
) -> Result<Rational> {
    if virasoro_k < 1 {
        return Err(invalid("Virasoro index must be >= 1"));
    }
    let spec = IntegralSpec::new(genus, l.to_vec(), Vec::new());
    recursion::residual(&spec, virasoro_k, &line_shape(&[]), |s| {
        nonstacky_integral_line(genus, &s.l, initial)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
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
        let i = q("7/3");
        for g in 1..4 {
            assert_eq!(nonstacky_integral_line(g, &[2 * g - 1], &i).unwrap(), i);
        }
        assert_eq!(nonstacky_integral_line(1, &[1, 1], &i).unwrap(), q("14/3"));
        assert_eq!(nonstacky_integral_line(1, &[0, 0], &i).unwrap(), q("0"));
        assert!(nonstacky_integral_line(1, &[], &i).is_err());
        assert!(nonstacky_integral_line(0, &[1], &i).is_err());
    }

    #[test]
    fn theta_examples() {
        let t = x(2, &[2]);
        assert_eq!(
            theta_line(1, &t, &[1, 0], &[]).unwrap().0,
            qs(&["4", "4/3"])
        );
        assert_eq!(
            theta_line(1, &t, &[0, 1], &[]).unwrap().0,
            qs(&["4/3", "4"])
        );
        assert!(theta_line(1, &t, &[1], &[]).is_err());
    }

    #[test]
    fn matrix_examples() {
        let t = x(2, &[2]);
        let a = build_matrix_line(&t, &q("1"));
        assert_eq!(a.to_rows(), vec![qs(&["3/2", "1/2"]), qs(&["1/2", "3/2"])]);
        assert!(build_matrix_line(&t, &q("0"))
            .determinant()
            .unwrap()
            .is_zero());
        let scaled = scale_matrix_line(&a, 1, &t, &q("1")).unwrap();
        assert_eq!(scaled.to_rows(), vec![qs(&["4", "4/3"]), qs(&["4/3", "4"])]);
        assert!(scale_matrix_line(&a, 1, &t, &q("1/2")).is_err());
        assert!(scale_matrix_line(&a, 1, &t, &q("-1")).is_err());
    }

    #[test]
    fn solve_examples() {
        let m = Matrix::from_rows(vec![qs(&["4", "4/3"]), qs(&["4/3", "4"])]).unwrap();
        assert_eq!(
            solve_coefficients(&m, &qs(&["1", "1"])).unwrap().0,
            qs(&["3/16", "3/16"])
        );
        let singular = build_matrix_line(&x(2, &[2]), &q("0"));
        assert!(matches!(
            solve_coefficients(&singular, &qs(&["1", "1"])),
            Err(Error::Singular(_))
        ));
    }

    #[test]
    fn scaled_rows_are_theta_at_defining_points() {
        for (n, mult, g) in [
            (2, vec![2], 1),
            (3, vec![1, 1], 2),
            (4, vec![1, 2, 1], 1),
            (5, vec![1, 1, 1, 1], 3),
        ] {
            let t = x(n, &mult);
            let a = line_budget(g, &t);
            let scaled = scale_matrix_line(&build_matrix_line(&t, &a), g, &t, &a).unwrap();
            for j in 0..t.total() {
                let mut k = vec![0; t.total()];
                k[j] = a.to_i64().unwrap() as u32;
                assert_eq!(theta_line(g, &t, &k, &[]).unwrap().0, scaled.row(j));
            }
        }
    }

    #[test]
    fn stacky_examples() {
        let t = x(2, &[2]);
        let gamma = qs(&["5/7", "-2"]);
        let v = |k: &[u32], l: &[u32]| {
            stacky_integral_line(&t, &IntegralSpec::new(1, l.to_vec(), k.to_vec()), &gamma).unwrap()
        };
        assert_eq!(v(&[1, 0], &[]), q("5/7"));
        assert_eq!(v(&[0, 1], &[]), q("-2"));
        assert_eq!(v(&[3, 0], &[]), q("0"));
        assert!(matches!(
            stacky_integral_line(
                &x(2, &[1]),
                &IntegralSpec::new(1, vec![], vec![0]),
                &qs(&["1"])
            ),
            Err(Error::Inadmissible(_))
        ));
    }

    #[test]
    fn residual_vanishes_and_detects_corruption() {
        let t = x(3, &[1, 1]);
        let gamma = qs(&["1/5", "3"]);
        // a = 2·2-2+2-1 = 3; pick an instance satisfying the gate for k = 1:
        // Σl + Σk_j = a + n - k = 3 + 1 - 1 = 3
        // The relation is non-trivial when Σl + Σk_j = a + n - k with a = 3.
        let cases = [
            (1, vec![1], vec![2, 0]),
            (2, vec![0], vec![1, 1]),
            (3, vec![1], vec![0, 0]),
        ];
        for (k, l, kk) in cases {
            let spec = IntegralSpec::new(2, l, kk);
            assert!(recursion_residual_line(&t, &spec, k, &gamma)
                .unwrap()
                .is_zero());
        }
        // Corrupting Γ after solving breaks reproduction at the defining points.
        let system = LineSystem::solve(2, &t, &gamma).unwrap();
        let bad = qs(&["1/5", "4"]);
        assert!(system
            .gamma_residuals(&bad)
            .unwrap()
            .iter()
            .any(|r| !r.is_zero()));
        assert!(system
            .gamma_residuals(&gamma)
            .unwrap()
            .iter()
            .all(Rational::is_zero));
    }

    #[test]
    fn evaluate_routes() {
        let table = GammaTable::new();
        let e = evaluate_line(
            &x(2, &[1]),
            &IntegralSpec::new(1, vec![], vec![0]),
            &table,
            None,
        )
        .unwrap();
        assert!(!e.admissible && e.value.is_zero());
        let e = evaluate_line(
            &x(2, &[0]),
            &IntegralSpec::new(1, vec![1], vec![]),
            &table,
            None,
        )
        .unwrap();
        assert_eq!(e.value, q("1/16"));
        let e = evaluate_line(
            &x(2, &[2]),
            &IntegralSpec::new(1, vec![], vec![2, 2]),
            &table,
            None,
        )
        .unwrap();
        assert!(!e.dim_ok && e.value.is_zero());
        assert!(matches!(
            evaluate_line(
                &x(2, &[2]),
                &IntegralSpec::new(1, vec![], vec![1, 0]),
                &table,
                None
            ),
            Err(Error::MissingGamma(_))
        ));
    }
}
