//! Seeded random instances for the verifier.

use hhodge_core::line::line_budget;
use hhodge_core::moduli::is_admissible;
use hhodge_core::surface::{check_weights, surface_budget};
use hhodge_core::{GammaKey, IntegralSpec, Rational, StackyType, Theory};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Bounds on sampled instances.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub max_genus: u32,
    pub max_modulus: u32,
    pub max_stacky: u32,
    pub max_exponent: u32,
    pub max_nonstacky: usize,
    pub max_virasoro: u32,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_genus: 4,
            max_modulus: 5,
            max_stacky: 6,
            max_exponent: 6,
            max_nonstacky: 2,
            max_virasoro: 3,
        }
    }
}

/// One relation to check: the `virasoro_k`-th relation at `spec`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub theory: Theory,
    pub stacky: StackyType,
    pub spec: IntegralSpec,
    pub virasoro_k: u32,
}

impl Instance {
    pub fn key(&self) -> GammaKey {
        GammaKey {
            theory: self.theory,
            genus: self.spec.genus,
            stacky: self.stacky.clone(),
        }
    }
}

/// The generator for instance `index` of a run seeded with `seed`.
pub fn instance_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn budget(theory: Theory, genus: u32, x: &StackyType) -> Option<i64> {
    let a = match theory {
        Theory::Line => line_budget(genus, x),
        Theory::Surface => {
            if check_weights(x).is_err() {
                return None;
            }
            surface_budget(genus, x)
        }
    };
    a.to_i64().filter(|&a| a >= 1)
}

/// Draws an admissible type with at least one stacky point and a nontrivial
/// relation on it: `Σl + Σk_j = a + n - k` with every exponent in bounds.
pub fn sample_instance<R: Rng>(theory: Theory, bounds: &Bounds, rng: &mut R) -> Instance {
    loop {
        let modulus = rng.random_range(2..=bounds.max_modulus);
        let genus = rng.random_range(1..=bounds.max_genus);
        let total = rng.random_range(1..=bounds.max_stacky);
        let mut mult = vec![0u32; modulus as usize - 1];
        for _ in 0..total {
            let slot = rng.random_range(0..mult.len());
            mult[slot] += 1;
        }
        let x = StackyType::new(modulus, mult).expect("valid modulus");
        if !is_admissible(genus, &x) {
            continue;
        }
        let Some(a) = budget(theory, genus, &x) else {
            continue;
        };
        let virasoro_k = rng.random_range(1..=bounds.max_virasoro);
        let n = rng.random_range(0..=bounds.max_nonstacky);
        let slots = n + x.total();
        let sum = a + n as i64 - virasoro_k as i64;
        if sum < 0 || sum > (bounds.max_exponent as usize * slots) as i64 {
            continue;
        }
        let mut exps = vec![0u32; slots];
        for _ in 0..sum {
            loop {
                let s = rng.random_range(0..slots);
                if exps[s] < bounds.max_exponent {
                    exps[s] += 1;
                    break;
                }
            }
        }
        let k = exps.split_off(n);
        return Instance {
            theory,
            stacky: x,
            spec: IntegralSpec::new(genus, exps, k),
            virasoro_k,
        };
    }
}

/// A reproducible synthetic Γ vector determined by the key and the seed.
pub fn synthetic_gamma(key: &GammaKey, seed: u64) -> Vec<Rational> {
    // FNV-1a over the key's text; stable across platforms and releases.
    let mut h: u64 = 0xcbf29ce484222325;
    for b in key.to_string().bytes().chain(seed.to_le_bytes()) {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(h);
    (0..key.stacky.total())
        .map(|_| {
            let num = rng.random_range(-60i64..=60);
            let den = rng.random_range(1i64..=40);
            Rational::new(if num == 0 { 1 } else { num }, den)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use hhodge_core::moduli::{dim_gate_line, dim_gate_surface};

    #[test]
    fn sampled_relations_are_nontrivial() {
        for theory in [Theory::Line, Theory::Surface] {
            for i in 0..100 {
                let inst = sample_instance(theory, &Bounds::default(), &mut instance_rng(3, i));
                let mut head = inst.spec.clone();
                head.l.insert(0, inst.virasoro_k + 1);
                let gate = match theory {
                    Theory::Line => dim_gate_line(&inst.stacky, &head),
                    Theory::Surface => dim_gate_surface(&inst.stacky, &head),
                };
                assert!(gate.unwrap(), "{inst:?}");
                assert!(inst.spec.l.iter().chain(&inst.spec.k).all(|&e| e <= 6));
            }
        }
    }

    #[test]
    fn streams_are_reproducible() {
        let a = sample_instance(Theory::Line, &Bounds::default(), &mut instance_rng(9, 4));
        let b = sample_instance(Theory::Line, &Bounds::default(), &mut instance_rng(9, 4));
        assert_eq!(a, b);
        let key = a.key();
        assert_eq!(synthetic_gamma(&key, 1), synthetic_gamma(&key, 1));
        assert_ne!(synthetic_gamma(&key, 1), synthetic_gamma(&key, 2));
    }
}
