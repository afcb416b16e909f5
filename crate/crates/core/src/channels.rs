//! Pauli channels: Kraus action on density matrices and diagonal contraction
//! of the R-matrix.

use std::fmt;
use std::sync::Arc;

use nalgebra::{Matrix4, Vector4};
use rand::Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{re, CMatrix};
use crate::qstate::{pauli_product, RMatrix, TwoQubitState};

const PROB_TOL: f64 = 1e-12;

/// R-picture contraction factors `(Q1, Q2, Q3)` of a Pauli channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShrinkCoefficients {
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
}

impl ShrinkCoefficients {
    pub fn new(q1: f64, q2: f64, q3: f64) -> Self {
        Self { q1, q2, q3 }
    }

    pub fn isotropic(q: f64) -> Self {
        Self::new(q, q, q)
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.q1, self.q2, self.q3]
    }

    /// `diag(1, Q1, Q2, Q3)`.
    pub fn lorentz(&self) -> Matrix4<f64> {
        Matrix4::from_diagonal(&Vector4::new(1.0, self.q1, self.q2, self.q3))
    }

    /// Probabilities of the Pauli channel with these coefficients.
    pub fn probabilities(&self) -> [f64; 4] {
        let Self { q1, q2, q3 } = *self;
        [
            (1.0 + q1 + q2 + q3) / 4.0,
            (1.0 + q1 - q2 - q3) / 4.0,
            (1.0 - q1 + q2 - q3) / 4.0,
            (1.0 - q1 - q2 + q3) / 4.0,
        ]
    }
}

/// Single-qubit channel `ρ ↦ p0 ρ + Σ p_i σ_i ρ σ_i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliChannel {
    p: [f64; 4],
    q: ShrinkCoefficients,
}

impl PauliChannel {
    pub fn new(p: [f64; 4]) -> Result<Self> {
        if p.iter().any(|x| !x.is_finite() || *x < -PROB_TOL) {
            return Err(Error::DomainError(format!("channel probabilities {p:?} must be non-negative")));
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > PROB_TOL {
            return Err(Error::DomainError(format!("channel probabilities sum to {sum}, not 1")));
        }
        let p = p.map(|x| x.max(0.0));
        let q = ShrinkCoefficients {
            q1: p[0] + p[1] - p[2] - p[3],
            q2: p[0] - p[1] + p[2] - p[3],
            q3: p[0] - p[1] - p[2] + p[3],
        };
        Ok(Self { p, q })
    }

    pub fn identity() -> Self {
        Self::new([1.0, 0.0, 0.0, 0.0]).expect("valid")
    }

    /// Inverse of [`PauliChannel::shrink`]; fails when the coefficients do not
    /// correspond to non-negative probabilities.
    pub fn from_shrink(q: ShrinkCoefficients) -> Result<Self> {
        Self::new(q.probabilities())
    }

    pub fn probabilities(&self) -> [f64; 4] {
        self.p
    }

    pub fn shrink(&self) -> ShrinkCoefficients {
        self.q
    }

    /// `(η1, η2, η3, η4) = (p0 + p3, p1 + p2, p0 - p3, p1 - p2)`.
    pub fn etas(&self) -> [f64; 4] {
        let p = self.p;
        [p[0] + p[3], p[1] + p[2], p[0] - p[3], p[1] - p[2]]
    }

    /// `(1 - s)·self + s·target`.
    pub fn blend(&self, target: &PauliChannel, s: f64) -> Result<Self> {
        let p = std::array::from_fn(|i| (1.0 - s) * self.p[i] + s * target.p[i]);
        Self::new(p)
    }
}

impl fmt::Display for PauliChannel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [p0, p1, p2, p3] = self.p;
        write!(f, "pauli[{p0}, {p1}, {p2}, {p3}]")
    }
}

/// `p1 = p2 = p3 = p/4`, `p0 = 1 - 3p/4`; all shrink coefficients equal `1 - p`.
pub fn make_depolarizing(p: f64) -> Result<PauliChannel> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::DomainError(format!("depolarizing strength {p} not in [0, 1]")));
    }
    PauliChannel::new([1.0 - 0.75 * p, p / 4.0, p / 4.0, p / 4.0])
}

/// `p0 = 1 - p3`, `p1 = p2 = 0`.
pub fn make_dephasing(p3: f64) -> Result<PauliChannel> {
    if !(0.0..=1.0).contains(&p3) {
        return Err(Error::DomainError(format!("dephasing probability {p3} not in [0, 1]")));
    }
    PauliChannel::new([1.0 - p3, 0.0, 0.0, p3])
}

/// Depolarizing strength growing as `p(t) = 1 - e^{-κt}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DepolarizingSchedule {
    pub kappa: f64,
}

impl DepolarizingSchedule {
    pub fn new(kappa: f64) -> Result<Self> {
        if !(kappa > 0.0 && kappa.is_finite()) {
            return Err(Error::DomainError(format!("coupling rate κ = {kappa} must be positive")));
        }
        Ok(Self { kappa })
    }

    pub fn strength(&self, t: f64) -> f64 {
        -(-self.kappa * t).exp_m1()
    }

    pub fn at(&self, t: f64) -> Result<PauliChannel> {
        if !(t >= 0.0) {
            return Err(Error::DomainError(format!("time {t} must be non-negative")));
        }
        make_depolarizing(self.strength(t))
    }
}

type ChannelFn = dyn Fn(f64) -> Result<PauliChannel> + Send + Sync;

/// Time-dependent channel, resolved to a [`PauliChannel`] at each time.
#[derive(Clone)]
pub enum ChannelSchedule {
    Depolarizing(DepolarizingSchedule),
    /// Relaxes from the identity towards `target` with weight `1 - e^{-κt}`.
    Relaxing { target: PauliChannel, kappa: f64 },
    /// Same channel at every time.
    Fixed(PauliChannel),
    Custom(Arc<ChannelFn>),
}

impl fmt::Debug for ChannelSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Depolarizing(d) => write!(f, "Depolarizing(κ={})", d.kappa),
            Self::Relaxing { target, kappa } => write!(f, "Relaxing({target}, κ={kappa})"),
            Self::Fixed(c) => write!(f, "Fixed({c})"),
            Self::Custom(_) => write!(f, "Custom"),
        }
    }
}

impl ChannelSchedule {
    pub fn depolarizing(kappa: f64) -> Result<Self> {
        Ok(Self::Depolarizing(DepolarizingSchedule::new(kappa)?))
    }

    pub fn custom<F>(f: F) -> Self
    where
        F: Fn(f64) -> Result<PauliChannel> + Send + Sync + 'static,
    {
        Self::Custom(Arc::new(f))
    }

    pub fn at(&self, t: f64) -> Result<PauliChannel> {
        match self {
            Self::Depolarizing(d) => d.at(t),
            Self::Relaxing { target, kappa } => {
                if !(t >= 0.0) {
                    return Err(Error::DomainError(format!("time {t} must be non-negative")));
                }
                PauliChannel::identity().blend(target, -(-kappa * t).exp_m1())
            }
            Self::Fixed(c) => Ok(*c),
            Self::Custom(f) => f(t),
        }
    }
}

/// JSON description of a channel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ChannelSpec {
    Probabilities { p: [f64; 4] },
    Kind(ChannelKind),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ChannelKind {
    Depolarizing {
        #[serde(default)]
        kappa: Option<f64>,
        #[serde(default)]
        t: Option<f64>,
    },
    Dephasing { p3: f64 },
}

impl ChannelSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: Self = serde_json::from_str(text).map_err(|e| Error::Parse(format!("channel JSON: {e}")))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Probabilities { p } => PauliChannel::new(*p).map(|_| ()),
            Self::Kind(ChannelKind::Depolarizing { kappa, t }) => {
                if let Some(k) = kappa {
                    DepolarizingSchedule::new(*k)?;
                }
                if let Some(t) = t {
                    if !(*t >= 0.0) {
                        return Err(Error::DomainError(format!("time {t} must be non-negative")));
                    }
                }
                Ok(())
            }
            Self::Kind(ChannelKind::Dephasing { p3 }) => make_dephasing(*p3).map(|_| ()),
        }
    }

    /// A single channel. A depolarizing spec needs `t` (κ defaults to
    /// `default_kappa`).
    pub fn channel(&self, default_kappa: f64) -> Result<PauliChannel> {
        match self {
            Self::Probabilities { p } => PauliChannel::new(*p),
            Self::Kind(ChannelKind::Depolarizing { kappa, t }) => {
                let t = t.ok_or_else(|| Error::Parse("depolarizing channel needs a time \"t\"".into()))?;
                DepolarizingSchedule::new(kappa.unwrap_or(default_kappa))?.at(t)
            }
            Self::Kind(ChannelKind::Dephasing { p3 }) => make_dephasing(*p3),
        }
    }

    /// Time-dependent form. Depolarizing specs give the exponential schedule;
    /// fixed channels become the relaxation target reached as `t → ∞`.
    pub fn schedule(&self, default_kappa: f64) -> Result<ChannelSchedule> {
        match self {
            Self::Kind(ChannelKind::Depolarizing { kappa, .. }) => {
                ChannelSchedule::depolarizing(kappa.unwrap_or(default_kappa))
            }
            other => {
                DepolarizingSchedule::new(default_kappa)?;
                Ok(ChannelSchedule::Relaxing {
                    target: other.channel(default_kappa)?,
                    kappa: default_kappa,
                })
            }
        }
    }
}

/// `Σ_ij p_i q_j (σ_i ⊗ σ_j) ρ (σ_i ⊗ σ_j)`.
pub fn apply_two_sided(s: &TwoQubitState, ch1: &PauliChannel, ch2: &PauliChannel) -> TwoQubitState {
    let mut out = CMatrix::zeros(4, 4);
    for (i, pi) in ch1.p.iter().enumerate() {
        for (j, pj) in ch2.p.iter().enumerate() {
            let w = pi * pj;
            if w == 0.0 {
                continue;
            }
            let k = pauli_product(i, j);
            out += k * s.dm() * k * re(w);
        }
    }
    TwoQubitState::new_unchecked(out).expect("4x4 finite")
}

/// Channel on one qubit (`which` = 0 or 1), identity on the other.
pub fn apply_one_sided(s: &TwoQubitState, ch: &PauliChannel, which: usize) -> Result<TwoQubitState> {
    let id = PauliChannel::identity();
    match which {
        0 => Ok(apply_two_sided(s, ch, &id)),
        1 => Ok(apply_two_sided(s, &id, ch)),
        _ => Err(Error::IndexOutOfRange(format!("qubit {which} (expected 0 or 1)"))),
    }
}

/// `R' = L1 R L2ᵀ` with `L = diag(1, Q1, Q2, Q3)`; `ch2 = None` leaves the
/// second qubit untouched.
pub fn apply_r_picture(r: &RMatrix, ch1: &PauliChannel, ch2: Option<&PauliChannel>) -> RMatrix {
    let l1 = ch1.shrink().lorentz();
    let l2 = ch2.map_or_else(Matrix4::identity, |c| c.shrink().lorentz());
    RMatrix(l1 * r.0 * l2.transpose())
}

/// Pauli channel with probabilities drawn uniformly from the simplex.
pub fn random_pauli_channel<R: Rng + ?Sized>(rng: &mut R) -> PauliChannel {
    let w: [f64; 4] = std::array::from_fn(|_| rng.sample(Exp1));
    let s: f64 = w.iter().sum();
    PauliChannel::new(w.map(|x| x / s)).expect("normalized weights")
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::qstate::{from_pure, from_r_matrix, ginibre_state, to_r_matrix, PureState, XFormState};
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn random_channel(rng: &mut impl Rng) -> PauliChannel {
        random_pauli_channel(rng)
    }

    fn assert_q(ch: &PauliChannel, q: [f64; 3]) {
        for (a, b) in ch.shrink().as_array().iter().zip(q) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
        }
    }

    #[test]
    fn depolarizing_examples() {
        assert_q(&make_depolarizing(0.0).unwrap(), [1.0; 3]);
        assert_q(&make_depolarizing(1.0).unwrap(), [0.0; 3]);
        assert_q(&make_depolarizing(0.4).unwrap(), [0.6; 3]);
        assert!(make_depolarizing(1.1).is_err());
    }

    #[test]
    fn dephasing_examples() {
        assert_eq!(make_dephasing(0.0).unwrap(), PauliChannel::identity());
        assert_q(&make_dephasing(0.5).unwrap(), [0.0, 0.0, 1.0]);
        assert_q(&make_dephasing(0.25).unwrap(), [0.5, 0.5, 1.0]);
        assert!(make_dephasing(-0.1).is_err());
    }

    #[test]
    fn invalid_probabilities() {
        assert!(PauliChannel::new([0.5, 0.5, 0.5, -0.5]).is_err());
        assert!(PauliChannel::new([0.5, 0.2, 0.2, 0.2]).is_err());
    }

    #[test]
    fn shrink_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let ch = random_channel(&mut rng);
            let back = PauliChannel::from_shrink(ch.shrink()).unwrap();
            for (a, b) in ch.probabilities().iter().zip(back.probabilities()) {
                assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn two_sided_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let s = ginibre_state(&mut rng, 4);
        let id = PauliChannel::identity();
        assert!(apply_two_sided(&s, &id, &id).max_abs_diff(&s) < 1e-15);
        let full = make_depolarizing(1.0).unwrap();
        assert!(apply_two_sided(&s, &full, &full).max_abs_diff(&TwoQubitState::maximally_mixed()) < 1e-15);
    }

    #[test]
    fn one_sided_depolarizing_on_bell() {
        let p = 0.3;
        let bell = from_pure(&PureState::singlet());
        let out = apply_one_sided(&bell, &make_depolarizing(p).unwrap(), 0).unwrap();
        let expect = bell.mix(&TwoQubitState::maximally_mixed(), 1.0 - p);
        assert!(out.max_abs_diff(&expect) < 1e-15);
        assert!(apply_one_sided(&bell, &PauliChannel::identity(), 2).is_err());
        assert!(apply_one_sided(&bell, &PauliChannel::identity(), 1).unwrap().max_abs_diff(&bell) < 1e-15);
    }

    #[test]
    fn one_sided_schmidt_matches_row_scaling() {
        let (l1, l2) = (0.8f64, 0.6f64);
        let ch = PauliChannel::new([0.5, 0.2, 0.1, 0.2]).unwrap();
        let q = ch.shrink();
        let s = from_pure(&PureState::schmidt(l1).unwrap());
        let r = to_r_matrix(&apply_one_sided(&s, &ch, 0).unwrap());
        let cc = 2.0 * l1 * l2;
        let expect = Matrix4::new(
            1.0, 0.0, 0.0, l2 * l2 - l1 * l1, //
            0.0, cc * q.q1, 0.0, 0.0, //
            0.0, 0.0, cc * q.q2, 0.0, //
            (l1 * l1 - l2 * l2) * q.q3, 0.0, 0.0, -q.q3,
        );
        assert!((r.0 - expect).norm() < 1e-14);
    }

    #[test]
    fn r_picture_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let r = to_r_matrix(&ginibre_state(&mut rng, 4));
        let id = PauliChannel::identity();
        assert_eq!(apply_r_picture(&r, &id, Some(&id)), r);

        // Schmidt input under equal channels: entries scaled by Q_i Q_j.
        let (l1, l2) = (0.6f64, 0.8f64);
        let ch = random_channel(&mut rng);
        let q = ch.shrink();
        let out = apply_r_picture(&RMatrix::schmidt(l1, l2), &ch, Some(&ch));
        let cc = 2.0 * l1 * l2;
        let expect = Matrix4::new(
            1.0, 0.0, 0.0, (l2 * l2 - l1 * l1) * q.q3, //
            0.0, cc * q.q1 * q.q1, 0.0, 0.0, //
            0.0, 0.0, cc * q.q2 * q.q2, 0.0, //
            (l1 * l1 - l2 * l2) * q.q3, 0.0, 0.0, -q.q3 * q.q3,
        );
        assert!((out.0 - expect).norm() < 1e-15);

        let sched = DepolarizingSchedule::new(1.3).unwrap();
        let t = 0.7;
        let e = (-1.3f64 * t).exp();
        let ch = sched.at(t).unwrap();
        let out = apply_r_picture(&r, &ch, Some(&ch));
        for i in 0..4 {
            for j in 0..4 {
                let f = if i == 0 { 1.0 } else { e } * if j == 0 { 1.0 } else { e };
                assert_abs_diff_eq!(out.get(i, j), r.get(i, j) * f, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn picture_commutation() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let s = ginibre_state(&mut rng, 4);
            let (a, b) = (random_channel(&mut rng), random_channel(&mut rng));
            let out = apply_two_sided(&s, &a, &b);
            let lhs = to_r_matrix(&out);
            let rhs = apply_r_picture(&to_r_matrix(&s), &a, Some(&b));
            assert!((lhs.0 - rhs.0).abs().max() < 1e-10);
            assert!(from_r_matrix(&rhs).state.max_abs_diff(&out) < 1e-10);
            assert_abs_diff_eq!(out.trace(), 1.0, epsilon = 1e-12);
            assert!(crate::numerics::hermitian_deviation(out.dm()) < 1e-12);
            out.validate().unwrap();
        }
    }

    #[test]
    fn unitality() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mm = TwoQubitState::maximally_mixed();
        for _ in 0..20 {
            let (a, b) = (random_channel(&mut rng), random_channel(&mut rng));
            assert!(apply_two_sided(&mm, &a, &b).max_abs_diff(&mm) < 1e-12);
        }
    }

    #[test]
    fn depolarizing_composition() {
        let sched = DepolarizingSchedule::new(0.8).unwrap();
        let r = to_r_matrix(&crate::qstate::x_form_state(&XFormState::werner(0.9)).unwrap());
        for (t1, t2) in [(0.1, 0.3), (1.0, 0.25), (0.0, 2.0)] {
            let (c1, c2, c12) = (sched.at(t1).unwrap(), sched.at(t2).unwrap(), sched.at(t1 + t2).unwrap());
            let step = apply_r_picture(&apply_r_picture(&r, &c1, Some(&c1)), &c2, Some(&c2));
            let direct = apply_r_picture(&r, &c12, Some(&c12));
            assert!((step.0 - direct.0).abs().max() < 1e-12);
        }
    }

    #[test]
    fn spec_json_forms() {
        let a = ChannelSpec::from_json(r#"{"p":[0.7,0.1,0.1,0.1]}"#).unwrap();
        assert_abs_diff_eq!(a.channel(1.0).unwrap().shrink().q1, 0.6, epsilon = 1e-15);
        let b = ChannelSpec::from_json(r#"{"kind":"depolarizing","kappa":2.0,"t":0.5}"#).unwrap();
        assert_abs_diff_eq!(b.channel(1.0).unwrap().shrink().q3, (-1.0f64).exp(), epsilon = 1e-15);
        let c = ChannelSpec::from_json(r#"{"kind":"dephasing","p3":0.25}"#).unwrap();
        assert_eq!(c.channel(1.0).unwrap(), make_dephasing(0.25).unwrap());
        assert!(ChannelSpec::from_json(r#"{"p":[0.7,0.1,0.1,0.2]}"#).is_err());
        assert!(ChannelSpec::from_json(r#"{"kind":"amplitude","gamma":0.1}"#).is_err());
        assert!(ChannelSpec::from_json(r#"{"kind":"dephasing","p3":1.5}"#).is_err());
        let sched = ChannelSpec::from_json(r#"{"kind":"depolarizing"}"#).unwrap().schedule(1.0).unwrap();
        assert_abs_diff_eq!(sched.at(1.0).unwrap().shrink().q1, (-1.0f64).exp(), epsilon = 1e-15);
    }

    #[test]
    fn relaxing_schedule_matches_depolarizing() {
        let full = make_depolarizing(1.0).unwrap();
        let relax = ChannelSchedule::Relaxing { target: full, kappa: 0.7 };
        let dep = ChannelSchedule::depolarizing(0.7).unwrap();
        for t in [0.0, 0.3, 1.0, 4.0] {
            let (a, b) = (relax.at(t).unwrap(), dep.at(t).unwrap());
            for (x, y) in a.probabilities().iter().zip(b.probabilities()) {
                assert_abs_diff_eq!(*x, y, epsilon = 1e-15);
            }
        }
        let custom = ChannelSchedule::custom(|t| make_dephasing((t / 10.0).min(0.5)));
        assert_eq!(custom.at(2.0).unwrap(), make_dephasing(0.2).unwrap());
    }
}
