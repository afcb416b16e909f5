//! Two-qubit state representations and the real R-picture.
//!
//! Basis order is `|00⟩, |01⟩, |10⟩, |11⟩` with the first qubit most
//! significant, and `|0⟩`, `|1⟩` the `+1`, `-1` eigenstates of σz. Pauli
//! indices run over `(I, σx, σy, σz)`.

use std::sync::LazyLock;

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::entanglement::concurrence_wootters;
use crate::error::{Error, Result};
use crate::numerics::{self, c, hermitian_deviation, kron, pauli_dyn, re, CMatrix, I, ONE, ZERO};

/// Tolerance used to validate density matrices.
pub const STATE_TOL: f64 = 1e-9;

/// `σ_i ⊗ σ_j` for all 16 index pairs, row-major in `(i, j)`.
static PAULI_PRODUCTS: LazyLock<Vec<CMatrix>> = LazyLock::new(|| {
    let mut out = Vec::with_capacity(16);
    for i in 0..4 {
        for j in 0..4 {
            out.push(kron(&pauli_dyn(i), &pauli_dyn(j)));
        }
    }
    out
});

pub(crate) fn pauli_product(i: usize, j: usize) -> &'static CMatrix {
    &PAULI_PRODUCTS[4 * i + j]
}

/// The constant unitary mapping `U ⊗ U*` onto the proper orthochronous Lorentz
/// group acting on Pauli coordinates.
pub fn t_matrix() -> Matrix4<Complex64> {
    let s = 1.0 / 2f64.sqrt();
    Matrix4::new(
        ONE, ZERO, ZERO, ONE, //
        ZERO, ONE, ONE, ZERO, //
        ZERO, I, -I, ZERO, //
        ONE, ZERO, ZERO, -ONE,
    ) * re(s)
}

/// `T (U ⊗ U*) T†`, the real 4×4 Lorentz (here: rotation) matrix induced by a
/// single-qubit operator on Pauli coordinates.
pub fn lorentz_of(u: &Matrix2<Complex64>) -> Matrix4<f64> {
    let t = t_matrix();
    let uu = u.kronecker(&u.map(|z| z.conj()));
    let l = t * uu * t.adjoint();
    l.map(|z| z.re)
}

/// A pure two-qubit state `Σ amp_k |k⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amp: [Complex64; 4],
}

impl PureState {
    /// Requires unit norm within `1e-12`.
    pub fn new(amp: [Complex64; 4]) -> Result<Self> {
        let norm = amp.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { amp })
    }

    /// Normalizes the given amplitudes.
    pub fn normalized(amp: [Complex64; 4]) -> Result<Self> {
        let norm = amp.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self {
            amp: amp.map(|a| a / norm),
        })
    }

    pub fn amplitudes(&self) -> &[Complex64; 4] {
        &self.amp
    }

    /// `λ1|01⟩ + λ2|10⟩` with `λ2 = sqrt(1 - λ1²)`.
    pub fn schmidt(lambda1: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda1) {
            return Err(Error::DomainError(format!("λ1 = {lambda1} not in [0, 1]")));
        }
        let lambda2 = (1.0 - lambda1 * lambda1).max(0.0).sqrt();
        Ok(Self {
            amp: [ZERO, re(lambda1), re(lambda2), ZERO],
        })
    }

    /// Schmidt-form state `λ1|01⟩ + λ2|10⟩` with concurrence `2 λ1 λ2 = c0`, `λ1 ≥ λ2`.
    pub fn with_concurrence(c0: f64) -> Result<Self> {
        Self::schmidt(lambda1_for_concurrence(c0)?)
    }

    /// Singlet `(|01⟩ - |10⟩)/√2`.
    pub fn singlet() -> Self {
        let h = 1.0 / 2f64.sqrt();
        Self {
            amp: [ZERO, re(h), re(-h), ZERO],
        }
    }

    /// `(|00⟩ + |11⟩)/√2`.
    pub fn phi_plus() -> Self {
        let h = 1.0 / 2f64.sqrt();
        Self {
            amp: [re(h), ZERO, ZERO, re(h)],
        }
    }

    /// `(|01⟩ + |10⟩)/√2`.
    pub fn psi_plus() -> Self {
        let h = 1.0 / 2f64.sqrt();
        Self {
            amp: [ZERO, re(h), re(h), ZERO],
        }
    }

    /// `(U ⊗ V)|ψ⟩`.
    pub fn apply_local(&self, u: &Matrix2<Complex64>, v: &Matrix2<Complex64>) -> Self {
        let uv = u.kronecker(v);
        let mut amp = [ZERO; 4];
        for (i, slot) in amp.iter_mut().enumerate() {
            *slot = (0..4).map(|k| uv[(i, k)] * self.amp[k]).sum();
        }
        Self { amp }
    }

    /// Coefficient matrix `M_ab` with `|ψ⟩ = Σ M_ab |a⟩|b⟩`.
    fn coefficient_matrix(&self) -> Matrix2<Complex64> {
        Matrix2::new(self.amp[0], self.amp[1], self.amp[2], self.amp[3])
    }

    /// Absolute overlap `|⟨self|other⟩|`.
    pub fn overlap(&self, other: &PureState) -> f64 {
        self.amp
            .iter()
            .zip(other.amp.iter())
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .norm()
    }
}

/// λ1 (≥ λ2) of the Schmidt form with concurrence `c0 = 2 λ1 λ2`.
pub fn lambda1_for_concurrence(c0: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&c0) {
        return Err(Error::DomainError(format!("concurrence {c0} not in [0, 1]")));
    }
    Ok(((1.0 + (1.0 - c0 * c0).max(0.0).sqrt()) / 2.0).sqrt())
}

/// `2 λ1 λ2` with `λ2 = √(1 - λ1²)`.
pub fn schmidt_concurrence(lambda1: f64) -> f64 {
    2.0 * lambda1 * (1.0 - lambda1 * lambda1).max(0.0).sqrt()
}

/// `(U ⊗ V)(λ1|01⟩ + λ2|10⟩)`.
#[derive(Debug, Clone)]
pub struct SchmidtForm {
    pub lambda1: f64,
    pub lambda2: f64,
    pub u: Matrix2<Complex64>,
    pub v: Matrix2<Complex64>,
}

impl SchmidtForm {
    pub fn reconstruct(&self) -> PureState {
        PureState {
            amp: [ZERO, re(self.lambda1), re(self.lambda2), ZERO],
        }
        .apply_local(&self.u, &self.v)
    }

    pub fn concurrence(&self) -> f64 {
        2.0 * self.lambda1 * self.lambda2
    }
}

/// Schmidt decomposition onto the `|01⟩/|10⟩` normal form.
pub fn schmidt_decompose(p: &PureState) -> SchmidtForm {
    let m = p.coefficient_matrix();
    // M = W Σ X†  =>  |ψ⟩ = Σ_k σ_k |w_k⟩ ⊗ |x_k*⟩
    let svd = m.svd(true, true);
    let w = svd.u.expect("requested U");
    let x_adj = svd.v_t.expect("requested V^T");
    let (mut s0, mut s1) = (svd.singular_values[0], svd.singular_values[1]);
    let (mut k0, mut k1) = (0, 1);
    if s1 > s0 {
        std::mem::swap(&mut s0, &mut s1);
        std::mem::swap(&mut k0, &mut k1);
    }
    // Row k of X† is x_k†, so its entries are conj(x_k): exactly |x_k*⟩.
    let xs = |k: usize| [x_adj[(k, 0)], x_adj[(k, 1)]];
    let u = Matrix2::new(w[(0, k0)], w[(0, k1)], w[(1, k0)], w[(1, k1)]);
    let (b0, b1) = (xs(k1), xs(k0));
    let v = Matrix2::new(b0[0], b1[0], b0[1], b1[1]);
    let norm = (s0 * s0 + s1 * s1).sqrt();
    SchmidtForm {
        lambda1: s0 / norm,
        lambda2: s1 / norm,
        u,
        v,
    }
}

/// Real Pauli-correlation matrix `R_ij = Tr(ρ σ_i ⊗ σ_j)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RMatrix(pub Matrix4<f64>);

impl RMatrix {
    pub fn identity_state() -> Self {
        let mut m = Matrix4::zeros();
        m[(0, 0)] = 1.0;
        Self(m)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    /// The R-matrix of `λ1|01⟩ + λ2|10⟩`.
    pub fn schmidt(lambda1: f64, lambda2: f64) -> Self {
        let (l1s, l2s) = (lambda1 * lambda1, lambda2 * lambda2);
        let cc = 2.0 * lambda1 * lambda2;
        Self(Matrix4::new(
            1.0, 0.0, 0.0, l2s - l1s, //
            0.0, cc, 0.0, 0.0, //
            0.0, 0.0, cc, 0.0, //
            l1s - l2s, 0.0, 0.0, -1.0,
        ))
    }
}

/// A two-qubit density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitState {
    dm: CMatrix,
}

/// Result of rebuilding a density matrix from an R-matrix; positivity is
/// reported, not enforced.
#[derive(Debug, Clone)]
pub struct Reconstructed {
    pub state: TwoQubitState,
    pub min_eigenvalue: f64,
}

impl Reconstructed {
    pub fn is_positive(&self) -> bool {
        self.min_eigenvalue >= -STATE_TOL
    }
}

impl TwoQubitState {
    /// Validates Hermiticity, unit trace and positivity (all within `1e-9`).
    pub fn new(dm: CMatrix) -> Result<Self> {
        let s = Self::new_unchecked(dm)?;
        s.validate()?;
        Ok(s)
    }

    /// Only the shape and finiteness are checked.
    pub fn new_unchecked(dm: CMatrix) -> Result<Self> {
        if dm.nrows() != 4 || dm.ncols() != 4 {
            return Err(Error::DimensionMismatch(format!(
                "two-qubit state must be 4x4, got {}x{}",
                dm.nrows(),
                dm.ncols()
            )));
        }
        if dm.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidState("non-finite entry".into()));
        }
        Ok(Self { dm })
    }

    pub fn validate(&self) -> Result<()> {
        let dev = hermitian_deviation(&self.dm);
        if dev > STATE_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (deviation {dev:.3e})")));
        }
        let tr = self.trace();
        if (tr - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} != 1")));
        }
        let min = self.min_eigenvalue()?;
        if min < -STATE_TOL {
            return Err(Error::PositivityViolation(format!("smallest eigenvalue {min:.3e}")));
        }
        Ok(())
    }

    pub fn maximally_mixed() -> Self {
        Self {
            dm: CMatrix::identity(4, 4) * re(0.25),
        }
    }

    pub fn dm(&self) -> &CMatrix {
        &self.dm
    }

    pub fn into_dm(self) -> CMatrix {
        self.dm
    }

    pub fn trace(&self) -> f64 {
        numerics::trace(&self.dm).re
    }

    pub fn purity(&self) -> f64 {
        // Tr ρ² = Σ |ρ_ij|² for Hermitian ρ.
        self.dm.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(numerics::hermitian_eigs(&self.dm, false)?.real_values())
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(*self.eigenvalues()?.last().expect("4 eigenvalues"))
    }

    /// `(U ⊗ V) ρ (U ⊗ V)†`.
    pub fn apply_local(&self, u: &Matrix2<Complex64>, v: &Matrix2<Complex64>) -> Self {
        let uv = u.kronecker(v);
        let uv = CMatrix::from_fn(4, 4, |i, j| uv[(i, j)]);
        Self {
            dm: &uv * &self.dm * uv.adjoint(),
        }
    }

    /// Convex combination `w·self + (1-w)·other`.
    pub fn mix(&self, other: &Self, w: f64) -> Self {
        Self {
            dm: &self.dm * re(w) + &other.dm * re(1.0 - w),
        }
    }

    /// Largest entrywise distance to another state.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (&self.dm - &other.dm).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> StateJson {
        StateJson {
            re: std::array::from_fn(|i| std::array::from_fn(|j| self.dm[(i, j)].re)),
            im: std::array::from_fn(|i| std::array::from_fn(|j| self.dm[(i, j)].im)),
        }
    }

    pub fn from_json(j: &StateJson) -> Result<Self> {
        Self::new(CMatrix::from_fn(4, 4, |r, k| c(j.re[r][k], j.im[r][k])))
    }
}

/// JSON wire form of a density matrix: row-major real and imaginary parts.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct StateJson {
    pub re: [[f64; 4]; 4],
    pub im: [[f64; 4]; 4],
}

pub fn from_pure(p: &PureState) -> TwoQubitState {
    let dm = CMatrix::from_fn(4, 4, |i, j| p.amp[i] * p.amp[j].conj());
    TwoQubitState { dm }
}

pub fn to_r_matrix(s: &TwoQubitState) -> RMatrix {
    let mut r = Matrix4::zeros();
    for i in 0..4 {
        for j in 0..4 {
            let p = pauli_product(i, j);
            // Tr(ρ P) = Σ_ab ρ_ab P_ba
            let mut acc = ZERO;
            for a in 0..4 {
                for b in 0..4 {
                    let pb = p[(b, a)];
                    if pb != ZERO {
                        acc += s.dm[(a, b)] * pb;
                    }
                }
            }
            r[(i, j)] = acc.re;
        }
    }
    RMatrix(r)
}

/// `ρ = ¼ Σ R_ij σ_i ⊗ σ_j`. The result is Hermitian with the trace set by
/// `R_00`; positivity is reported in [`Reconstructed::min_eigenvalue`].
pub fn from_r_matrix(r: &RMatrix) -> Reconstructed {
    let mut dm = CMatrix::zeros(4, 4);
    for i in 0..4 {
        for j in 0..4 {
            let rij = r.0[(i, j)];
            if rij != 0.0 {
                dm += pauli_product(i, j) * re(rij / 4.0);
            }
        }
    }
    let state = TwoQubitState { dm };
    let min_eigenvalue = state.min_eigenvalue().unwrap_or(f64::NAN);
    Reconstructed { state, min_eigenvalue }
}

/// `ρ̃ = (σy ⊗ σy) ρ* (σy ⊗ σy)`.
pub fn spin_flip(s: &TwoQubitState) -> CMatrix {
    let yy = pauli_product(2, 2);
    yy * s.dm.map(|z| z.conj()) * yy
}

/// Matrix with diagonal `(u, x, y, v)` and coherence `z = ρ_{01,10}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XFormState {
    pub u: f64,
    pub x: f64,
    pub y: f64,
    pub v: f64,
    pub z: Complex64,
}

impl XFormState {
    pub fn new(u: f64, x: f64, y: f64, v: f64, z: Complex64) -> Self {
        Self { u, x, y, v, z }
    }

    /// Werner state `w |Ψ⁻⟩⟨Ψ⁻| + (1 - w) I/4`.
    pub fn werner(w: f64) -> Self {
        Self {
            u: (1.0 - w) / 4.0,
            x: (1.0 + w) / 4.0,
            y: (1.0 + w) / 4.0,
            v: (1.0 - w) / 4.0,
            z: re(-w / 2.0),
        }
    }

    pub fn check(&self, tol: f64) -> Result<()> {
        for (name, val) in [("u", self.u), ("x", self.x), ("y", self.y), ("v", self.v)] {
            if !(val >= -tol) {
                return Err(Error::PositivityViolation(format!("{name} = {val} < 0")));
            }
        }
        let sum = self.u + self.x + self.y + self.v;
        if (sum - 1.0).abs() > tol.max(1e-12) {
            return Err(Error::InvalidState(format!("u+x+y+v = {sum} != 1")));
        }
        if self.x * self.y < self.z.norm_sqr() - tol {
            return Err(Error::PositivityViolation(format!(
                "xy = {} < |z|² = {}",
                self.x * self.y,
                self.z.norm_sqr()
            )));
        }
        Ok(())
    }

    /// Reads the X-form entries off a 4×4 matrix, ignoring everything else.
    pub fn from_matrix(m: &CMatrix) -> Self {
        Self {
            u: m[(0, 0)].re,
            x: m[(1, 1)].re,
            y: m[(2, 2)].re,
            v: m[(3, 3)].re,
            z: m[(1, 2)],
        }
    }

    pub fn to_matrix(&self) -> CMatrix {
        let mut m = CMatrix::zeros(4, 4);
        m[(0, 0)] = re(self.u);
        m[(1, 1)] = re(self.x);
        m[(2, 2)] = re(self.y);
        m[(3, 3)] = re(self.v);
        m[(1, 2)] = self.z;
        m[(2, 1)] = self.z.conj();
        m
    }
}

pub fn x_form_state(x: &XFormState) -> Result<TwoQubitState> {
    x.check(1e-12)?;
    TwoQubitState::new(x.to_matrix())
}

/// Haar-random single-qubit unitary from ZYZ Euler angles and a global phase.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R) -> Matrix2<Complex64> {
    use std::f64::consts::TAU;
    let alpha: f64 = rng.random_range(0.0..TAU);
    let phi: f64 = rng.random_range(0.0..TAU);
    let psi: f64 = rng.random_range(0.0..TAU);
    let cos_theta: f64 = rng.random_range(-1.0..=1.0);
    let theta = cos_theta.acos();
    let rz = |a: f64| Matrix2::new(Complex64::from_polar(1.0, -a / 2.0), ZERO, ZERO, Complex64::from_polar(1.0, a / 2.0));
    let (s, co) = (theta / 2.0).sin_cos();
    let ry = Matrix2::new(re(co), re(-s), re(s), re(co));
    rz(phi) * ry * rz(psi) * Complex64::from_polar(1.0, alpha)
}

fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    c(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random pure two-qubit state.
pub fn haar_pure<R: Rng + ?Sized>(rng: &mut R) -> PureState {
    loop {
        let amp = std::array::from_fn(|_| gaussian_complex(rng));
        if let Ok(p) = PureState::normalized(amp) {
            return p;
        }
    }
}

/// Random density matrix `G G† / Tr(G G†)` with a `4×rank` complex Gaussian `G`.
pub fn ginibre_state<R: Rng + ?Sized>(rng: &mut R, rank: usize) -> TwoQubitState {
    let g = CMatrix::from_fn(4, rank.clamp(1, 4), |_, _| gaussian_complex(rng));
    let m = &g * g.adjoint();
    let t = numerics::trace(&m);
    TwoQubitState { dm: m / t }
}

/// Random product of two single-qubit mixed states.
pub fn random_product_state<R: Rng + ?Sized>(rng: &mut R) -> TwoQubitState {
    let single = |rng: &mut R| {
        let g = Matrix2::from_fn(|_, _| gaussian_complex(rng));
        let m = g * g.adjoint();
        m / m.trace()
    };
    let a = single(rng);
    let b = single(rng);
    let ab = a.kronecker(&b);
    TwoQubitState {
        dm: CMatrix::from_fn(4, 4, |i, j| ab[(i, j)]),
    }
}

/// Family of states produced by [`random_state`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RandomKind {
    Pure,
    Mixed,
    FixedConcurrence(f64),
}

const FIXED_C_ATTEMPTS: usize = 32;

/// Seeded random state. `FixedConcurrence(c0)` mixes a rotated Schmidt state of
/// larger concurrence with a random product state and bisects on the weight.
pub fn random_state(seed: u64, kind: RandomKind) -> Result<TwoQubitState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match kind {
        RandomKind::Pure => Ok(from_pure(&haar_pure(&mut rng))),
        RandomKind::Mixed => Ok(ginibre_state(&mut rng, 4)),
        RandomKind::FixedConcurrence(c0) => fixed_concurrence_state(&mut rng, c0),
    }
}

fn fixed_concurrence_state(rng: &mut ChaCha8Rng, c0: f64) -> Result<TwoQubitState> {
    if !(0.0..=1.0).contains(&c0) {
        return Err(Error::DomainError(format!("target concurrence {c0} not in [0, 1]")));
    }
    let sep = random_product_state(rng);
    if c0 == 0.0 {
        return Ok(sep);
    }
    if c0 > 1.0 - 1e-12 {
        let (u, v) = (haar_unitary(rng), haar_unitary(rng));
        let p = PureState::with_concurrence(1.0)?.apply_local(&u, &v);
        return Ok(from_pure(&p));
    }
    for _ in 0..FIXED_C_ATTEMPTS {
        let c1: f64 = rng.random_range(c0..=1.0);
        let (u, v) = (haar_unitary(rng), haar_unitary(rng));
        let pure = from_pure(&PureState::with_concurrence(c1)?.apply_local(&u, &v));
        let sep = random_product_state(rng);
        if concurrence_wootters(&pure)? < c0 {
            continue;
        }
        // Concurrence is convex along the segment and zero at the separable end,
        // so it is non-decreasing once positive: bisection is valid.
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let cm = concurrence_wootters(&pure.mix(&sep, mid))?;
            if (cm - c0).abs() <= 1e-10 {
                return Ok(pure.mix(&sep, mid));
            }
            if cm < c0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-15 {
                break;
            }
        }
        let s = pure.mix(&sep, hi);
        if (concurrence_wootters(&s)? - c0).abs() <= 1e-7 {
            return Ok(s);
        }
    }
    Err(Error::TargetUnreachable {
        attempts: FIXED_C_ATTEMPTS,
        reason: format!("no mixture reached concurrence {c0}"),
    })
}
