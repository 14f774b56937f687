use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use hhodge_core::line::LineSystem;
use hhodge_core::surface::{MatrixMode, SurfaceSystem};
use hhodge_core::{GammaKey, Rational, Result, Theory};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolvedSystem {
    Line(LineSystem),
    Surface(SurfaceSystem),
}

impl SolvedSystem {
    pub fn solve(key: &GammaKey, gamma: &[Rational], mode: MatrixMode) -> Result<Self> {
        Ok(match key.theory {
            Theory::Line => SolvedSystem::Line(LineSystem::solve(key.genus, &key.stacky, gamma)?),
            Theory::Surface => {
                SolvedSystem::Surface(SurfaceSystem::solve(key.genus, &key.stacky, gamma, mode)?)
            }
        })
    }
}

/// Solved coefficient systems keyed by type and matrix mode.
///
/// Readers share the lock; a miss solves outside the lock and then inserts.
/// Two threads racing on the same key compute the same exact value, so the
/// later insert simply replaces an equal entry.
#[derive(Default)]
pub struct CoeffCache {
    inner: RwLock<HashMap<(GammaKey, MatrixMode), Arc<SolvedSystem>>>,
}

impl CoeffCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get_or_solve(
        &self,
        key: &GammaKey,
        gamma: &[Rational],
        mode: MatrixMode,
    ) -> Result<Arc<SolvedSystem>> {
        let mode = match key.theory {
            Theory::Line => MatrixMode::Consistent,
            Theory::Surface => mode,
        };
        let k = (key.clone(), mode);
        if let Some(hit) = self.inner.read().expect("cache poisoned").get(&k) {
            return Ok(Arc::clone(hit));
        }
        let solved = Arc::new(SolvedSystem::solve(key, gamma, mode)?);
        self.inner
            .write()
            .expect("cache poisoned")
            .insert(k, Arc::clone(&solved));
        Ok(solved)
    }

    pub fn len(&self) -> usize {
        self.inner.read().expect("cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
