//! Stacky types, Hodge eigenbundle ranks, admissibility, and the
//! virtual-dimension gates.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::arith::{fmt_list, Rational};
use crate::error::{invalid, Error, Result};

/// The multiset of monodromies at the orbifold marked points: `n_i` points
/// with monodromy `ω^i` for `i = 1..N-1`.
///
/// Positions are ordered block by block, so position `j` (0-based) lies in
/// block `i` exactly when `M_{i-1} ≤ j < M_i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StackyType {
    modulus: u32,
    mult: Vec<u32>,
}

impl StackyType {
    /// `modulus` is `N ≥ 2`; `mult` is `(n_1, …, n_{N-1})`.
    pub fn new(modulus: u32, mult: Vec<u32>) -> Result<Self> {
        if modulus < 2 {
            return Err(invalid("N must be at least 2"));
        }
        if mult.len() != modulus as usize - 1 {
            return Err(invalid(alloc::format!(
                "expected {} multiplicities for N = {modulus}, got {}",
                modulus - 1,
                mult.len()
            )));
        }
        Ok(StackyType { modulus, mult })
    }

    /// The type with no stacky points.
    pub fn empty(modulus: u32) -> Result<Self> {
        StackyType::new(modulus, alloc::vec![0; modulus.saturating_sub(1) as usize])
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.mult
    }

    /// `Σ n_i`, the number of stacky points.
    pub fn total(&self) -> usize {
        self.mult.iter().map(|&n| n as usize).sum()
    }

    /// `M_i = n_1 + … + n_i`, for `i = 0..N-1`.
    pub fn prefix_sums(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.mult.len() + 1);
        let mut acc = 0;
        out.push(0);
        for &n in &self.mult {
            acc += n as usize;
            out.push(acc);
        }
        out
    }

    /// `Σ i·n_i`.
    pub fn weighted_sum(&self) -> u64 {
        self.mult
            .iter()
            .enumerate()
            .map(|(i, &n)| (i as u64 + 1) * n as u64)
            .sum()
    }

    /// Block index `i ∈ 1..N` of each stacky position.
    pub fn blocks(&self) -> Vec<u32> {
        self.mult
            .iter()
            .enumerate()
            .flat_map(|(i, &n)| core::iter::repeat_n(i as u32 + 1, n as usize))
            .collect()
    }

    /// `i/N` for each stacky position.
    pub fn ages(&self) -> Vec<Rational> {
        self.blocks()
            .into_iter()
            .map(|i| Rational::new(i as i64, self.modulus as i64))
            .collect()
    }
}

impl fmt::Display for StackyType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N={} n={:?}", self.modulus, self.mult)
    }
}

/// A descendant integral: genus, non-stacky exponents `l` and stacky
/// exponents `k` aligned with the blocks of a [`StackyType`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntegralSpec {
    pub genus: u32,
    pub l: Vec<u32>,
    pub k: Vec<u32>,
}

impl IntegralSpec {
    pub fn new(genus: u32, l: Vec<u32>, k: Vec<u32>) -> Self {
        IntegralSpec { genus, l, k }
    }

    pub fn check_aligned(&self, x: &StackyType) -> Result<()> {
        if self.k.len() != x.total() {
            return Err(invalid(alloc::format!(
                "{} stacky exponents given for a type with {} stacky points",
                self.k.len(),
                x.total()
            )));
        }
        Ok(())
    }

    /// Non-stacky exponents in canonical (sorted) order. Every formula is
    /// symmetric in them.
    pub fn normalized(&self) -> IntegralSpec {
        let mut l = self.l.clone();
        l.sort_unstable();
        IntegralSpec {
            genus: self.genus,
            l,
            k: self.k.clone(),
        }
    }
}

/// `r₁ = Σ n_i·i/N + g - 1`, the rank of `E_ω`.
pub fn rank_r1(genus: u32, x: &StackyType) -> Rational {
    Rational::new(x.weighted_sum() as i64, x.modulus() as i64) + Rational::integer(genus as i64 - 1)
}

/// `r_{N-1} = Σ n_i·(N-i)/N + g - 1`, the rank of `E_{ω^{N-1}}`.
pub fn rank_r_nm1(genus: u32, x: &StackyType) -> Rational {
    let n = x.modulus() as u64;
    let co: u64 = x
        .multiplicities()
        .iter()
        .enumerate()
        .map(|(i, &m)| (n - (i as u64 + 1)) * m as u64)
        .sum();
    Rational::new(co as i64, n as i64) + Rational::integer(genus as i64 - 1)
}

/// Whether `r₁` is a nonnegative integer, i.e. an admissible `Z_N` cover
/// with these monodromies exists (`Σ i·n_i ≡ 0 mod N`) and the genus is
/// large enough for a nonnegative rank.
pub fn is_admissible(genus: u32, x: &StackyType) -> bool {
    let r1 = rank_r1(genus, x);
    r1.is_integer() && !r1.is_negative()
}

pub(crate) fn require_admissible(genus: u32, x: &StackyType) -> Result<()> {
    if is_admissible(genus, x) {
        Ok(())
    } else {
        Err(Error::Inadmissible(alloc::format!("{}", rank_r1(genus, x))))
    }
}

/// `Σ l_i + Σ_j (k_j + i(j)/N) = 2g - 2 + n + Σ n_i`.
pub fn dim_gate_line(x: &StackyType, spec: &IntegralSpec) -> Result<bool> {
    spec.check_aligned(x)?;
    let lhs: Rational = spec
        .l
        .iter()
        .map(|&l| Rational::integer(l as i64))
        .sum::<Rational>()
        + spec
            .k
            .iter()
            .zip(x.ages())
            .map(|(&k, age)| Rational::integer(k as i64) + age)
            .sum::<Rational>();
    let rhs = 2 * spec.genus as i64 - 2 + spec.l.len() as i64 + x.total() as i64;
    Ok(lhs == Rational::integer(rhs))
}

/// `Σ (l_i - ½) + Σ_j (k_j - ½ + 2i(j)/N) = g + ½(n + Σ n_i - 2)`.
pub fn dim_gate_surface(x: &StackyType, spec: &IntegralSpec) -> Result<bool> {
    spec.check_aligned(x)?;
    let half = Rational::new(1, 2);
    let lhs: Rational = spec
        .l
        .iter()
        .map(|&l| Rational::integer(l as i64) - &half)
        .sum::<Rational>()
        + spec
            .k
            .iter()
            .zip(x.ages())
            .map(|(&k, age)| Rational::integer(k as i64) - &half + age * Rational::integer(2))
            .sum::<Rational>();
    let rhs = Rational::integer(spec.genus as i64)
        + Rational::new(spec.l.len() as i64 + x.total() as i64 - 2, 2);
    Ok(lhs == rhs)
}

/// Which weighted projective stack an integral comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Theory {
    /// `P(1,N)`, insertions against `λ_{r₁}`.
    Line,
    /// `P(1,1,N)`, insertions against `λ_{r₁}²`.
    Surface,
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Theory::Line => "line",
            Theory::Surface => "surface",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GammaKey {
    pub theory: Theory,
    pub genus: u32,
    pub stacky: StackyType,
}

impl fmt::Display for GammaKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} g={} {}", self.theory, self.genus, self.stacky)
    }
}

/// Initial values `Γ_{j,g}`: the integral with `ψ^a` at stacky position `j`
/// and no other descendants, one vector per (theory, genus, stacky type).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GammaTable {
    entries: BTreeMap<GammaKey, Vec<Rational>>,
}

impl GammaTable {
    pub fn new() -> Self {
        GammaTable::default()
    }

    /// Adds an entry. Re-inserting an identical vector is a no-op; a
    /// different vector for an existing key is an error.
    pub fn insert(&mut self, key: GammaKey, gamma: Vec<Rational>) -> Result<()> {
        if gamma.len() != key.stacky.total() {
            return Err(invalid(alloc::format!(
                "Γ for {key} has {} entries, expected {}",
                gamma.len(),
                key.stacky.total()
            )));
        }
        match self.entries.get(&key) {
            Some(existing) if *existing != gamma => Err(Error::GammaConflict(key)),
            Some(_) => Ok(()),
            None => {
                self.entries.insert(key, gamma);
                Ok(())
            }
        }
    }

    pub fn merge(&mut self, other: GammaTable) -> Result<()> {
        for (k, v) in other.entries {
            self.insert(k, v)?;
        }
        Ok(())
    }

    pub fn get(&self, key: &GammaKey) -> Option<&[Rational]> {
        self.entries.get(key).map(Vec::as_slice)
    }

    pub fn require(&self, key: &GammaKey) -> Result<&[Rational]> {
        self.get(key)
            .ok_or_else(|| Error::MissingGamma(key.clone()))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GammaKey, &[Rational])> {
        self.entries.iter().map(|(k, v)| (k, v.as_slice()))
    }
}

impl fmt::Display for GammaTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.entries {
            writeln!(f, "{k}: {}", fmt_list(v))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn x(n: u32, mult: &[u32]) -> StackyType {
        StackyType::new(n, mult.to_vec()).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank_r1(2, &x(3, &[1, 1])), Rational::integer(2));
        assert_eq!(rank_r1(1, &x(2, &[2])), Rational::integer(1));
        assert_eq!(
            rank_r1(1, &StackyType::empty(2).unwrap()),
            Rational::integer(0)
        );
        assert_eq!(rank_r_nm1(2, &x(3, &[1, 1])), Rational::integer(2));
        assert_eq!(rank_r_nm1(1, &x(2, &[2])), Rational::integer(1));
    }

    #[test]
    fn admissibility_examples() {
        assert!(!is_admissible(1, &x(2, &[1])));
        assert!(is_admissible(1, &x(2, &[2])));
        assert!(is_admissible(0, &x(3, &[3, 0])));
        assert_eq!(rank_r1(0, &x(3, &[3, 0])), Rational::zero());
    }

    #[test]
    fn line_gate_examples() {
        let e = StackyType::empty(2).unwrap();
        // 2g - 2 + n = 1 for one insertion in genus one.
        assert!(dim_gate_line(&e, &IntegralSpec::new(1, vec![1], vec![])).unwrap());
        assert!(!dim_gate_line(&e, &IntegralSpec::new(1, vec![2], vec![])).unwrap());
        assert!(dim_gate_line(&x(2, &[2]), &IntegralSpec::new(1, vec![], vec![1, 0])).unwrap());
        assert!(dim_gate_line(&e, &IntegralSpec::new(2, vec![2, 2, 1], vec![])).unwrap());
        assert!(dim_gate_line(&x(2, &[2]), &IntegralSpec::new(1, vec![], vec![1])).is_err());
    }

    #[test]
    fn surface_gate_examples() {
        let e = StackyType::empty(2).unwrap();
        assert!(dim_gate_surface(&e, &IntegralSpec::new(1, vec![1], vec![])).unwrap());
        assert!(dim_gate_surface(&x(2, &[2]), &IntegralSpec::new(2, vec![], vec![1, 0])).unwrap());
        assert!(!dim_gate_surface(&e, &IntegralSpec::new(1, vec![0], vec![])).unwrap());
    }

    #[test]
    fn stacky_type_layout() {
        let t = x(4, &[2, 0, 1]);
        assert_eq!(t.total(), 3);
        assert_eq!(t.prefix_sums(), vec![0, 2, 2, 3]);
        assert_eq!(t.blocks(), vec![1, 1, 3]);
        assert_eq!(t.weighted_sum(), 5);
        assert!(StackyType::new(3, vec![1]).is_err());
        assert!(StackyType::new(1, vec![]).is_err());
    }

    #[test]
    fn gamma_table_conflicts() {
        let key = GammaKey {
            theory: Theory::Line,
            genus: 1,
            stacky: x(2, &[2]),
        };
        let mut t = GammaTable::new();
        t.insert(key.clone(), vec![Rational::one(), Rational::one()])
            .unwrap();
        t.insert(key.clone(), vec![Rational::one(), Rational::one()])
            .unwrap();
        assert_eq!(
            t.insert(key.clone(), vec![Rational::one(), Rational::zero()]),
            Err(Error::GammaConflict(key.clone()))
        );
        assert!(t.insert(key.clone(), vec![Rational::one()]).is_err());
        let missing = GammaKey {
            theory: Theory::Surface,
            ..key
        };
        assert_eq!(
            t.require(&missing),
            Err(Error::MissingGamma(missing.clone()))
        );
    }
}
