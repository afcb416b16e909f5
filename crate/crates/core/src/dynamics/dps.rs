//! Recognising states that lie on a depolarized pure-state trajectory.

use nalgebra::Matrix4;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::hermitian_eigs;
use crate::qstate::{from_r_matrix, to_r_matrix, PureState, RMatrix, TwoQubitState};

const GRID_POINTS: usize = 10_000;
const Q_MIN: f64 = 1e-8;
const PURITY_TOL: f64 = 1e-8;
const POSITIVITY_TOL: f64 = 1e-8;

/// Outcome of [`is_dps`]. When the state is a depolarized pure state, `t0`
/// is the elapsed time at rate `kappa` and `preimage` the pure state it came
/// from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DpsVerdict {
    pub is_dps: bool,
    pub q: Option<f64>,
    pub t0: Option<f64>,
    #[serde(skip)]
    pub preimage: Option<PureState>,
    pub purity_defect: f64,
    pub min_eigenvalue: f64,
}

/// Undoes a two-sided depolarizing contraction by `q`.
fn undepolarize(r: &RMatrix, q: f64) -> RMatrix {
    let d = [1.0, 1.0 / q, 1.0 / q, 1.0 / q];
    RMatrix(Matrix4::from_fn(|i, j| r.0[(i, j)] * d[i] * d[j]))
}

/// `Tr ρ² - 1` of the state whose R-matrix is `r`.
pub fn purity_defect(r: &RMatrix) -> f64 {
    r.0.iter().map(|x| x * x).sum::<f64>() / 4.0 - 1.0
}

/// Decides whether `s` equals a pure state evolved under two-sided
/// depolarizing noise. The purity of the undepolarized state grows
/// monotonically as `q` decreases, so a log-spaced scan brackets the unique
/// unit-purity point, which bisection then refines; the candidate must also
/// be positive semidefinite.
pub fn is_dps(s: &TwoQubitState, kappa: f64) -> Result<DpsVerdict> {
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(Error::DomainError(format!("decay rate {kappa} must be positive")));
    }
    let r = to_r_matrix(s);
    let defect = |q: f64| purity_defect(&undepolarize(&r, q));

    let mut hi = 1.0;
    let d1 = defect(1.0);
    let q_star = if d1 >= -PURITY_TOL {
        Some(1.0)
    } else {
        let log_min = Q_MIN.ln();
        let mut found = None;
        for k in 1..GRID_POINTS {
            let q = (log_min * k as f64 / (GRID_POINTS - 1) as f64).exp();
            if defect(q) >= 0.0 {
                found = Some((q, hi));
                break;
            }
            hi = q;
        }
        found.map(|(mut lo, mut hi)| {
            // defect(lo) >= 0 > defect(hi)
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if defect(mid) >= 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            if defect(hi).abs() < defect(lo).abs() {
                hi
            } else {
                lo
            }
        })
    };

    let Some(q) = q_star else {
        return Ok(DpsVerdict {
            is_dps: false,
            q: None,
            t0: None,
            preimage: None,
            purity_defect: defect(Q_MIN),
            min_eigenvalue: f64::NAN,
        });
    };

    let rebuilt = from_r_matrix(&undepolarize(&r, q));
    let purity_defect = defect(q);
    let min_eigenvalue = rebuilt.min_eigenvalue;
    let is_dps = purity_defect.abs() < PURITY_TOL && min_eigenvalue >= -POSITIVITY_TOL;
    let preimage = if is_dps {
        let eig = hermitian_eigs(rebuilt.state.dm(), true)?;
        let v = eig.vectors.expect("vectors requested");
        let amp = std::array::from_fn(|k| v[(k, 0)]);
        Some(PureState::normalized(amp)?)
    } else {
        None
    };
    Ok(DpsVerdict {
        is_dps,
        q: Some(q),
        t0: is_dps.then(|| -q.ln() / kappa),
        preimage,
        purity_defect,
        min_eigenvalue,
    })
}
