//! Closed-form stability results and time evolution of concurrence.
//!
//! All closed forms come in two flavours: the public function clips at zero,
//! the `*_unclipped` variant returns the raw expression so callers can see
//! how far below the separability threshold a configuration sits.

mod dps;
mod search;

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::Serialize;

use crate::channels::{apply_one_sided, apply_two_sided, ChannelSchedule, PauliChannel, ShrinkCoefficients};
use crate::entanglement::concurrence_wootters;
use crate::error::{Error, Result};
use crate::numerics::{c, ONE};
use crate::qstate::{from_pure, schmidt_concurrence, PureState, TwoQubitState};
use crate::report::{csv_table, Cell};

pub use dps::{is_dps, purity_defect, DpsVerdict};
pub use search::{local_unitary_search, SearchOutcome};

/// Slack allowed when comparing a numerical concurrence to an upper bound.
pub const BOUND_TOL: f64 = 1e-7;

fn check_c0(c0: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&c0) {
        return Err(Error::DomainError(format!("initial concurrence {c0} not in [0, 1]")));
    }
    Ok(())
}

/// `(C0 (Q1² + Q2²) + Q3² - 1) / 2` for a Schmidt state under the same
/// channel on both qubits.
pub fn residual_schmidt_unclipped(c0: f64, q: ShrinkCoefficients) -> f64 {
    let ShrinkCoefficients { q1, q2, q3 } = q;
    (c0 * (q1 * q1 + q2 * q2) + q3 * q3 - 1.0) / 2.0
}

pub fn residual_schmidt(c0: f64, q: ShrinkCoefficients) -> f64 {
    residual_schmidt_unclipped(c0, q).max(0.0)
}

/// Largest residual concurrence over all pure states of concurrence `C0`:
/// the Schmidt expression with the coefficient of largest modulus placed on
/// the third axis.
pub fn residual_max_unclipped(c0: f64, q: ShrinkCoefficients) -> f64 {
    let mut n = q.as_array().map(|x| x * x);
    n.sort_by(f64::total_cmp);
    (c0 * (n[0] + n[1]) + n[2] - 1.0) / 2.0
}

pub fn residual_max(c0: f64, q: ShrinkCoefficients) -> f64 {
    residual_max_unclipped(c0, q).max(0.0)
}

/// Local unitary `U` such that `(U ⊗ U)` applied to a Schmidt state attains
/// [`residual_max`]. It rotates the axis with the largest `|Q_k|` onto `z`.
pub fn optimal_family_unitary(q: ShrinkCoefficients) -> Matrix2<Complex64> {
    let a = q.as_array().map(f64::abs);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    if a[2] >= a[0] && a[2] >= a[1] {
        Matrix2::identity()
    } else if a[0] >= a[1] {
        // Hadamard: x <-> z
        Matrix2::new(ONE, ONE, ONE, -ONE) * c(s, 0.0)
    } else {
        // quarter turn about x: y <-> z
        Matrix2::new(ONE, c(0.0, -1.0), c(0.0, -1.0), ONE) * c(s, 0.0)
    }
}

/// Member of the optimal family: `(U ⊗ U)|Ω⟩` with `|Ω⟩` the Schmidt state
/// of concurrence `c0`.
pub fn optimal_state(c0: f64, q: ShrinkCoefficients) -> Result<PureState> {
    let u = optimal_family_unitary(q);
    Ok(PureState::with_concurrence(c0)?.apply_local(&u, &u))
}

/// Residual concurrence of a Schmidt state when only one qubit is exposed.
pub fn residual_one_sided_unclipped(c0: f64, q: ShrinkCoefficients) -> f64 {
    let ShrinkCoefficients { q1, q2, q3 } = q;
    let a = c0 / 2.0 * ((q1 - q2).abs() - q3 - 1.0);
    let b = c0 / 2.0 * ((q1 + q2).abs() + q3 - 1.0);
    a.max(b)
}

pub fn residual_one_sided(c0: f64, q: ShrinkCoefficients) -> f64 {
    residual_one_sided_unclipped(c0, q).max(0.0)
}

/// The one-sided expression with an extra overall factor of two. It
/// overestimates the residual concurrence and is kept only for comparison.
pub fn residual_one_sided_verbatim(c0: f64, q: ShrinkCoefficients) -> f64 {
    2.0 * residual_one_sided(c0, q)
}

/// `(C0 + ½) e^{-2κt} - ½`.
pub fn depolarizing_residual_unclipped(c0: f64, kappa: f64, t: f64) -> f64 {
    (c0 + 0.5) * (-2.0 * kappa * t).exp() - 0.5
}

/// Concurrence of a pure state of concurrence `c0` after time `t` under
/// depolarizing noise of rate `kappa` on both qubits.
pub fn depolarizing_residual(c0: f64, kappa: f64, t: f64) -> f64 {
    depolarizing_residual_unclipped(c0, kappa, t).max(0.0)
}

/// Time at which [`depolarizing_residual`] reaches zero: `ln(2 C0 + 1) / (2κ)`.
/// A separable start (`C0 = 0`) gives zero.
pub fn critical_time(c0: f64, kappa: f64) -> Result<f64> {
    check_c0(c0)?;
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(Error::DomainError(format!("decay rate {kappa} must be positive")));
    }
    Ok((2.0 * c0 + 1.0).ln() / (2.0 * kappa))
}

/// Concurrence as a function of time on a fixed grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub concurrences: Vec<f64>,
    pub label: String,
}

impl Trajectory {
    pub fn to_csv(&self) -> String {
        Self::csv(std::slice::from_ref(self))
    }

    /// Several trajectories in one `t,C,label` table.
    pub fn csv(all: &[Trajectory]) -> String {
        let rows = all.iter().flat_map(|tr| {
            tr.times
                .iter()
                .zip(&tr.concurrences)
                .map(|(&t, &cv)| vec![Cell::from(t), Cell::from(cv), Cell::from(tr.label.as_str())])
        });
        csv_table(&["t", "C", "label"], rows)
    }

    /// First grid time where the concurrence drops to zero.
    pub fn death_time(&self) -> Option<f64> {
        self.times
            .iter()
            .zip(&self.concurrences)
            .find(|(_, &cv)| cv <= 0.0)
            .map(|(&t, _)| t)
    }
}

/// `steps` equally spaced points on `[0, t_max]`, endpoints included.
pub fn uniform_grid(t_max: f64, steps: usize) -> Result<Vec<f64>> {
    if !(t_max >= 0.0 && t_max.is_finite()) {
        return Err(Error::DomainError(format!("t_max = {t_max} must be finite and non-negative")));
    }
    if steps < 2 {
        return Err(Error::DomainError(format!("need at least 2 grid points, got {steps}")));
    }
    let h = t_max / (steps - 1) as f64;
    Ok((0..steps).map(|k| k as f64 * h).collect())
}

/// Evolves `s0` under `schedule(t)` acting on both qubits and records the
/// Wootters concurrence at each grid time.
pub fn evolve_trajectory(s0: &TwoQubitState, schedule: &ChannelSchedule, grid: &[f64]) -> Result<Trajectory> {
    let concurrences = grid
        .iter()
        .map(|&t| {
            let ch = schedule.at(t)?;
            concurrence_wootters(&apply_two_sided(s0, &ch, &ch))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Trajectory {
        times: grid.to_vec(),
        concurrences,
        label: String::new(),
    })
}

/// Same as [`evolve_trajectory`] but with the channel on qubit `which` only.
pub fn evolve_trajectory_one_sided(
    s0: &TwoQubitState,
    schedule: &ChannelSchedule,
    grid: &[f64],
    which: usize,
) -> Result<Trajectory> {
    let concurrences = grid
        .iter()
        .map(|&t| concurrence_wootters(&apply_one_sided(s0, &schedule.at(t)?, which)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(Trajectory {
        times: grid.to_vec(),
        concurrences,
        label: String::new(),
    })
}

/// Largest excess of the numerically evolved concurrence of `s` over
/// [`residual_max`] along the grid; non-positive when the bound holds.
pub fn upper_bound_excess(s: &TwoQubitState, schedule: &ChannelSchedule, grid: &[f64]) -> Result<f64> {
    let c0 = concurrence_wootters(s)?;
    let mut worst = f64::NEG_INFINITY;
    for &t in grid {
        let ch = schedule.at(t)?;
        let cv = concurrence_wootters(&apply_two_sided(s, &ch, &ch))?;
        worst = worst.max(cv - residual_max(c0, ch.shrink()));
    }
    Ok(worst)
}

/// Whether a mixed state stays below the pure-state bound for its own
/// initial concurrence at every grid time.
pub fn mixed_upper_bound_check(s: &TwoQubitState, schedule: &ChannelSchedule, grid: &[f64]) -> Result<bool> {
    Ok(upper_bound_excess(s, schedule, grid)? <= BOUND_TOL)
}

/// A closed-form prediction next to the numerically evolved value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StabilityReport {
    pub c0: f64,
    pub c_formula: f64,
    pub c_numeric: f64,
    pub gap: f64,
}

impl StabilityReport {
    pub fn new(c0: f64, c_formula: f64, c_numeric: f64) -> Self {
        Self {
            c0,
            c_formula,
            c_numeric,
            gap: (c_formula - c_numeric).abs(),
        }
    }

    /// Schmidt state of Schmidt coefficient `lambda1`, same channel on both qubits.
    pub fn schmidt(lambda1: f64, ch: &PauliChannel) -> Result<Self> {
        let p = PureState::schmidt(lambda1)?;
        let c0 = schmidt_concurrence(lambda1);
        let numeric = concurrence_wootters(&apply_two_sided(&from_pure(&p), ch, ch))?;
        Ok(Self::new(c0, residual_schmidt(c0, ch.shrink()), numeric))
    }

    /// Member of the optimal family, compared against [`residual_max`].
    pub fn optimal(c0: f64, ch: &PauliChannel) -> Result<Self> {
        check_c0(c0)?;
        let p = optimal_state(c0, ch.shrink())?;
        let numeric = concurrence_wootters(&apply_two_sided(&from_pure(&p), ch, ch))?;
        Ok(Self::new(c0, residual_max(c0, ch.shrink()), numeric))
    }

    /// Schmidt state with the channel on qubit `which` only.
    pub fn one_sided(c0: f64, ch: &PauliChannel, which: usize) -> Result<Self> {
        check_c0(c0)?;
        let p = PureState::with_concurrence(c0)?;
        let numeric = concurrence_wootters(&apply_one_sided(&from_pure(&p), ch, which)?)?;
        Ok(Self::new(c0, residual_one_sided(c0, ch.shrink()), numeric))
    }
}
