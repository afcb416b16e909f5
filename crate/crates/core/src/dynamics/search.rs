//! Random sampling over local unitaries applied to a Schmidt state.

use nalgebra::Matrix2;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{optimal_family_unitary, residual_max};
use crate::channels::{apply_two_sided, PauliChannel};
use crate::entanglement::concurrence_wootters;
use crate::error::{Error, Result};
use crate::qstate::{from_pure, haar_unitary, schmidt_concurrence, PureState};

/// Extremes of the residual concurrence over sampled `(U ⊗ V)|Ω⟩`.
///
/// `sampled_*` covers the random draws only; `best` also includes the
/// constructed optimal-family member, whose value is `optimal_value`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchOutcome {
    pub c0: f64,
    pub residual_max: f64,
    pub sampled_best: f64,
    pub sampled_worst: f64,
    pub optimal_value: f64,
    pub best: f64,
    #[serde(skip)]
    pub best_u: Matrix2<Complex64>,
    #[serde(skip)]
    pub best_v: Matrix2<Complex64>,
}

fn residual(omega: &PureState, u: &Matrix2<Complex64>, v: &Matrix2<Complex64>, ch: &PauliChannel) -> Result<f64> {
    let s = from_pure(&omega.apply_local(u, v));
    concurrence_wootters(&apply_two_sided(&s, ch, ch))
}

/// Draws `n_samples` Haar pairs `(U, V)` from `seed`, evolves `(U ⊗ V)|Ω⟩`
/// under `ch` on both qubits and reports the extremes. Draws are generated
/// sequentially and evaluated in parallel, so the result depends only on
/// the seed.
pub fn local_unitary_search(lambda1: f64, ch: &PauliChannel, n_samples: usize, seed: u64) -> Result<SearchOutcome> {
    if n_samples == 0 {
        return Err(Error::DomainError("need at least one sample".into()));
    }
    let omega = PureState::schmidt(lambda1)?;
    let c0 = schmidt_concurrence(lambda1);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws: Vec<_> = (0..n_samples)
        .map(|_| (haar_unitary(&mut rng), haar_unitary(&mut rng)))
        .collect();
    let values = draws
        .par_iter()
        .map(|(u, v)| residual(&omega, u, v, ch))
        .collect::<Result<Vec<f64>>>()?;

    let mut best_idx = 0;
    let mut worst = f64::INFINITY;
    for (k, &val) in values.iter().enumerate() {
        if val > values[best_idx] {
            best_idx = k;
        }
        worst = worst.min(val);
    }
    let sampled_best = values[best_idx];

    let opt_u = optimal_family_unitary(ch.shrink());
    let optimal_value = residual(&omega, &opt_u, &opt_u, ch)?;
    let (best, best_u, best_v) = if optimal_value >= sampled_best {
        (optimal_value, opt_u, opt_u)
    } else {
        (sampled_best, draws[best_idx].0, draws[best_idx].1)
    };

    Ok(SearchOutcome {
        c0,
        residual_max: residual_max(c0, ch.shrink()),
        sampled_best,
        sampled_worst: worst,
        optimal_value,
        best,
        best_u,
        best_v,
    })
}
