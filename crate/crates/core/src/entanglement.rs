//! Concurrence and entanglement of formation.
//!
//! Two independent routes are provided: the spin-flip eigenvalue formula on
//! the density matrix, and the Lorentz singular values of the R-matrix. X-form
//! matrices additionally have a closed form.

use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{self, diagonalizability, CMatrix};
use crate::qstate::{pauli_product, spin_flip, RMatrix, TwoQubitState};

/// Eigenvector condition number above which `g Rᵀ g R` is treated as
/// non-diagonalizable.
pub const DEGENERATE_CONDITION: f64 = 1e8;

/// `ρρ̃` and `g Rᵀ g R` have real non-negative spectra for valid states, so
/// imaginary parts and small negative real parts are round-off.
fn clamp_spectrum(values: &[Complex64]) -> Vec<f64> {
    let mut out: Vec<f64> = values.iter().map(|v| v.re.max(0.0)).collect();
    out.sort_by(|a, b| b.total_cmp(a));
    out
}

/// Wootters concurrence `max(0, √λ1 - √λ2 - √λ3 - √λ4)`, `λ` the eigenvalues
/// of `ρ ρ̃`.
///
/// The `√λ` are evaluated as the singular values of `Wᵀ (σy ⊗ σy) W` with
/// `ρ = W W†`, which keeps vanishing values at round-off level rather than
/// at its square root.
pub fn concurrence_wootters(s: &TwoQubitState) -> Result<f64> {
    let eig = numerics::hermitian_eigs(s.dm(), true)?;
    let v = eig.vectors.expect("vectors requested");
    let w = CMatrix::from_fn(4, 4, |i, k| v[(i, k)] * eig.values[k].re.max(0.0).sqrt());
    let tau = w.transpose() * pauli_product(2, 2) * &w;
    let mut r: Vec<f64> = tau.singular_values().iter().copied().collect();
    r.sort_by(|a, b| b.total_cmp(a));
    Ok((r[0] - r[1] - r[2] - r[3]).clamp(0.0, 1.0))
}

/// Eigenvalues of `ρ ρ̃` in descending order, clamped to be non-negative.
pub fn spin_flip_spectrum(s: &TwoQubitState) -> Result<Vec<f64>> {
    let product = s.dm() * spin_flip(s);
    Ok(clamp_spectrum(&numerics::general_eigs(&product)?.values))
}

/// Binary Shannon entropy in bits.
pub fn binary_entropy(x: f64) -> f64 {
    let term = |p: f64| if p <= 0.0 { 0.0 } else { -p * p.log2() };
    term(x) + term(1.0 - x)
}

/// Entanglement of formation as a function of concurrence.
pub fn eof(concurrence: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&concurrence) {
        return Err(Error::DomainError(format!("concurrence {concurrence} not in [0, 1]")));
    }
    let x = (1.0 + (1.0 - concurrence * concurrence).sqrt()) / 2.0;
    Ok(binary_entropy(x))
}

/// Lorentz singular values `s0 ≥ s1 ≥ s2 ≥ |s3|` of an R-matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzSingularValues {
    pub s: [f64; 4],
    /// Set when `g Rᵀ g R` is not diagonalizable within tolerance, i.e. the
    /// R-matrix sits on the non-diagonal normal form.
    pub degenerate: bool,
}

impl LorentzSingularValues {
    pub fn concurrence(&self) -> f64 {
        let [s0, s1, s2, s3] = self.s;
        ((-s0 + s1 + s2 - s3) / 2.0).clamp(0.0, 1.0)
    }
}

fn minkowski() -> Matrix4<f64> {
    Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, -1.0, -1.0, -1.0))
}

/// Spectral Lorentz singular values: square roots of the eigenvalues of
/// `g Rᵀ g R`, with the sign of `s3` taken from `det R`.
///
/// When the product is defective the values follow the non-diagonal normal
/// form: the defective eigenvalue pair gives `s0 = s1`, the remaining pair
/// gives `s2 = d ≥ 0`, `s3 = -d`.
pub fn lorentz_singular_values(r: &RMatrix) -> Result<LorentzSingularValues> {
    let g = minkowski();
    let m = g * r.0.transpose() * g * r.0;
    let mc = CMatrix::from_fn(4, 4, |i, j| Complex64::new(m[(i, j)], 0.0));
    let eig = numerics::general_eigs(&mc)?;
    let diag = diagonalizability(&mc, &eig.values, 1e-6);

    if diag.eigenvector_condition > DEGENERATE_CONDITION {
        let defective: Vec<_> = diag
            .clusters
            .iter()
            .filter(|c| c.geometric < c.algebraic)
            .collect();
        let values = match (diag.clusters.len(), defective.as_slice()) {
            (1, [only]) => {
                let e = only.value.re.max(0.0).sqrt();
                Some([e, e, e, -e])
            }
            (2, [jordan]) if jordan.algebraic == 2 => {
                let other = diag
                    .clusters
                    .iter()
                    .find(|c| c.geometric == c.algebraic)
                    .expect("two clusters, one defective");
                let a = jordan.value.re.max(0.0).sqrt();
                let d = other.value.re.max(0.0).sqrt();
                Some([a, a, d, -d])
            }
            _ => None,
        };
        if let Some(s) = values {
            return Ok(LorentzSingularValues { s, degenerate: true });
        }
        let mut s = diagonal_values(&eig.values, r);
        s.sort_by(|a, b| b.abs().total_cmp(&a.abs()));
        return Ok(LorentzSingularValues { s, degenerate: true });
    }

    Ok(LorentzSingularValues {
        s: diagonal_values(&eig.values, r),
        degenerate: false,
    })
}

fn diagonal_values(values: &[Complex64], r: &RMatrix) -> [f64; 4] {
    let lam = clamp_spectrum(values);
    let mut s = [lam[0].sqrt(), lam[1].sqrt(), lam[2].sqrt(), lam[3].sqrt()];
    let det = r.0.determinant();
    if det < 0.0 && det.abs() >= 1e-12 {
        s[3] = -s[3];
    }
    s
}

/// Concurrence from the Lorentz singular values of the R-matrix.
pub fn concurrence_lorentz(r: &RMatrix) -> Result<f64> {
    Ok(lorentz_singular_values(r)?.concurrence())
}

/// A two-qubit matrix whose only non-zero entries are the diagonal and the
/// two anti-diagonal coherences `ρ_{00,11}` (outer) and `ρ_{01,10}` (inner).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XMatrix {
    pub diag: [f64; 4],
    pub outer: Complex64,
    pub inner: Complex64,
}

impl XMatrix {
    pub fn from_matrix(m: &CMatrix) -> Self {
        Self {
            diag: [m[(0, 0)].re, m[(1, 1)].re, m[(2, 2)].re, m[(3, 3)].re],
            outer: m[(0, 3)],
            inner: m[(1, 2)],
        }
    }

    pub fn to_matrix(&self) -> CMatrix {
        let mut m = CMatrix::zeros(4, 4);
        for (i, d) in self.diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(*d, 0.0);
        }
        m[(0, 3)] = self.outer;
        m[(3, 0)] = self.outer.conj();
        m[(1, 2)] = self.inner;
        m[(2, 1)] = self.inner.conj();
        m
    }

    pub fn check_positive(&self, tol: f64) -> Result<()> {
        let [a, b, c, d] = self.diag;
        if self.diag.iter().any(|&x| x < -tol) {
            return Err(Error::PositivityViolation(format!("negative diagonal {:?}", self.diag)));
        }
        if self.outer.norm_sqr() > a * d + tol || self.inner.norm_sqr() > b * c + tol {
            return Err(Error::PositivityViolation("coherence exceeds diagonal bound".into()));
        }
        Ok(())
    }

    /// Unclipped `(2(|inner| - √(ρ00 ρ33)), 2(|outer| - √(ρ11 ρ22)))`.
    pub fn branches(&self) -> (f64, f64) {
        let [a, b, c, d] = self.diag.map(|x| x.max(0.0));
        (
            2.0 * (self.inner.norm() - (a * d).sqrt()),
            2.0 * (self.outer.norm() - (b * c).sqrt()),
        )
    }

    pub fn concurrence(&self) -> Result<f64> {
        self.check_positive(1e-12)?;
        let (inner, outer) = self.branches();
        Ok(inner.max(outer).max(0.0))
    }
}

/// Both branches and the clipped value of the X-form concurrence rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XFormConcurrence {
    pub c1: f64,
    pub c2: f64,
    pub value: f64,
}

/// X-form concurrence for the layout
///
/// ```text
/// A . . B
/// . D C .
/// . C E .
/// B . . A
/// ```
///
/// with `C1 = 2(|B| - √(DE))` and `C2 = 2(|C| - A)`.
pub fn concurrence_x_form(a: f64, b: Complex64, c: Complex64, d: f64, e: f64) -> Result<XFormConcurrence> {
    let x = XMatrix {
        diag: [a, d, e, a],
        outer: b,
        inner: c,
    };
    x.check_positive(1e-12)?;
    let (c2, c1) = x.branches();
    Ok(XFormConcurrence {
        c1,
        c2,
        value: c1.max(c2).max(0.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{re, ZERO};
    use crate::qstate::{from_pure, ginibre_state, haar_unitary, to_r_matrix, PureState, XFormState};
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn werner(w: f64) -> TwoQubitState {
        crate::qstate::x_form_state(&XFormState::werner(w)).unwrap()
    }

    #[test]
    fn wootters_examples() {
        let product = from_pure(&PureState::new([ZERO, re(1.0), ZERO, ZERO]).unwrap());
        assert_abs_diff_eq!(concurrence_wootters(&product).unwrap(), 0.0, epsilon = 1e-8);
        for bell in [PureState::singlet(), PureState::phi_plus(), PureState::psi_plus()] {
            assert_abs_diff_eq!(concurrence_wootters(&from_pure(&bell)).unwrap(), 1.0, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(concurrence_wootters(&werner(1.0 / 3.0)).unwrap(), 0.0, epsilon = 1e-9);
        // Werner: (3w - 1)/2 above the separability boundary.
        for w in [0.5, 0.8, 0.95] {
            assert_abs_diff_eq!(concurrence_wootters(&werner(w)).unwrap(), (3.0 * w - 1.0) / 2.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn eof_examples() {
        assert_eq!(eof(0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(eof(1.0).unwrap(), 1.0, epsilon = 1e-15);
        // h((1 + √3/2)/2), evaluated independently.
        assert_abs_diff_eq!(eof(0.5).unwrap(), 0.354_578_902_665_270_03, epsilon = 1e-12);
        assert!(matches!(eof(1.2), Err(Error::DomainError(_))));
        assert!(matches!(eof(-0.1), Err(Error::DomainError(_))));
    }

    #[test]
    fn eof_strictly_increasing() {
        let grid: Vec<f64> = (0..=1000).map(|k| k as f64 / 1000.0).collect();
        for w in grid.windows(2) {
            assert!(eof(w[1]).unwrap() > eof(w[0]).unwrap());
        }
    }

    #[test]
    fn lorentz_examples() {
        let mm = lorentz_singular_values(&RMatrix::identity_state()).unwrap();
        assert_eq!(mm.s, [1.0, 0.0, 0.0, 0.0]);
        assert_eq!(mm.concurrence(), 0.0);

        let bell = lorentz_singular_values(&to_r_matrix(&from_pure(&PureState::singlet()))).unwrap();
        for (v, e) in bell.s.iter().zip([1.0, 1.0, 1.0, -1.0]) {
            assert_abs_diff_eq!(*v, e, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(bell.concurrence(), 1.0, epsilon = 1e-12);

        for c0 in [0.1, 0.5, 2.0 / 3.0, 0.99] {
            let s = from_pure(&PureState::with_concurrence(c0).unwrap());
            assert_abs_diff_eq!(concurrence_lorentz(&to_r_matrix(&s)).unwrap(), c0, epsilon = 1e-9);
            assert_abs_diff_eq!(concurrence_wootters(&s).unwrap(), c0, epsilon = 1e-9);
        }
    }

    #[test]
    fn lorentz_ordering() {
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        for _ in 0..200 {
            let s = ginibre_state(&mut rng, 4);
            let l = lorentz_singular_values(&to_r_matrix(&s)).unwrap();
            let [s0, s1, s2, s3] = l.s;
            assert!(s0 >= s1 && s1 >= s2 && s2 >= s3.abs());
        }
    }

    #[test]
    fn non_diagonal_normal_form_is_flagged() {
        // p |Ψ⁻⟩⟨Ψ⁻| + (1 - p) |b⟩⟨b| sits on the non-diagonal form for |b⟩ = |00⟩, |11⟩;
        // |b⟩ = |01⟩ lies in the singlet's own sector and stays diagonalizable.
        let singlet = from_pure(&PureState::singlet());
        for (basis, p, defective) in [(0usize, 0.4, true), (3, 0.7, true), (0, 0.85, true), (1, 0.3, false)] {
            let mut amp = [ZERO; 4];
            amp[basis] = re(1.0);
            let prod = from_pure(&PureState::new(amp).unwrap());
            let rho = singlet.mix(&prod, p);
            let l = lorentz_singular_values(&to_r_matrix(&rho)).unwrap();
            assert_eq!(l.degenerate, defective, "basis {basis}");
            assert_abs_diff_eq!(l.concurrence(), p, epsilon = 1e-6);
            assert_abs_diff_eq!(concurrence_wootters(&rho).unwrap(), p, epsilon = 1e-7);
        }
    }

    #[test]
    fn local_unitary_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..100 {
            let s = ginibre_state(&mut rng, 3);
            let (u, v) = (haar_unitary(&mut rng), haar_unitary(&mut rng));
            let t = s.apply_local(&u, &v);
            assert_abs_diff_eq!(concurrence_wootters(&s).unwrap(), concurrence_wootters(&t).unwrap(), epsilon = 1e-9);
            assert_abs_diff_eq!(
                concurrence_lorentz(&to_r_matrix(&s)).unwrap(),
                concurrence_lorentz(&to_r_matrix(&t)).unwrap(),
                epsilon = 1e-9
            );
        }
    }

    #[test]
    fn x_form_examples() {
        // |Ψ+⟩ in the printed layout: A = 0 corners, inner coherence 1/2.
        let bell = concurrence_x_form(0.0, ZERO, re(0.5), 0.5, 0.5).unwrap();
        assert_abs_diff_eq!(bell.value, 1.0, epsilon = 1e-15);
        let mm = concurrence_x_form(0.25, ZERO, ZERO, 0.25, 0.25).unwrap();
        assert_eq!(mm.value, 0.0);
        // λ1 = λ2 = 1/√2 and isotropic shrink q: (3q² - 1)/2.
        for q in [0.2f64, 0.6, 0.9] {
            let l = 0.5f64;
            let a = (1.0 - q * q) / 4.0;
            let b = 0.0;
            let cc = 2.0 * q * q * l / 2.0;
            let d = (1.0 + q * q) / 4.0;
            let r = concurrence_x_form(a, re(b), re(cc), d, d).unwrap();
            assert_abs_diff_eq!(r.value, ((3.0 * q * q - 1.0) / 2.0).max(0.0), epsilon = 1e-14);
        }
        assert!(matches!(
            concurrence_x_form(0.25, ZERO, re(0.4), 0.25, 0.25),
            Err(Error::PositivityViolation(_))
        ));
    }

    #[test]
    fn x_matrix_matches_wootters() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..200 {
            let s = ginibre_state(&mut rng, 4);
            // Dephase into X-form by keeping only the allowed entries.
            let x = XMatrix::from_matrix(s.dm());
            let xs = TwoQubitState::new(x.to_matrix()).unwrap();
            assert_abs_diff_eq!(x.concurrence().unwrap(), concurrence_wootters(&xs).unwrap(), epsilon = 1e-9);
        }
    }
}
