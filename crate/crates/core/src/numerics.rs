//! Dense complex matrix kernels sized for two-qubit states and small spin rings.
//!
//! Everything here is a pure function over `nalgebra` dynamic matrices. The
//! Hermitian eigen-solver is a cyclic Jacobi sweep (deterministic, no pivoting
//! heuristics); general spectra go through a complex Schur decomposition.

use nalgebra::{DMatrix, DVector, Matrix2};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Iteration budget shared by the iterative eigen-solvers.
pub const MAX_SWEEPS: usize = 500;

/// Maximum entrywise deviation from the adjoint tolerated by [`hermitian_eigs`].
pub const HERMITIAN_TOL: f64 = 1e-9;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Pauli matrix by index: 0 = identity, 1 = σx, 2 = σy, 3 = σz.
pub fn pauli(index: usize) -> Matrix2<Complex64> {
    match index {
        0 => Matrix2::new(ONE, ZERO, ZERO, ONE),
        1 => Matrix2::new(ZERO, ONE, ONE, ZERO),
        2 => Matrix2::new(ZERO, -I, I, ZERO),
        3 => Matrix2::new(ONE, ZERO, ZERO, -ONE),
        _ => panic!("Pauli index {index} out of range"),
    }
}

/// Pauli matrix as a dynamic matrix.
pub fn pauli_dyn(index: usize) -> CMatrix {
    let p = pauli(index);
    CMatrix::from_fn(2, 2, |i, j| p[(i, j)])
}

/// Eigenvalues (descending by real part) and, optionally, matching eigenvectors
/// stored column-wise.
#[derive(Debug, Clone)]
pub struct EigenResult {
    pub values: Vec<Complex64>,
    pub vectors: Option<CMatrix>,
}

impl EigenResult {
    pub fn real_values(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }
}

/// Largest entrywise `|M - M†|`.
pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

fn ensure_square(m: &CMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(())
}

fn off_diagonal_norm2(a: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s
}

/// Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Eigenvalues are returned real (imaginary parts zero) in descending order.
/// With `with_vectors`, column `k` of the returned matrix is the unit
/// eigenvector of `values[k]`.
pub fn hermitian_eigs(m: &CMatrix, with_vectors: bool) -> Result<EigenResult> {
    ensure_square(m)?;
    let deviation = hermitian_deviation(m);
    if deviation > HERMITIAN_TOL {
        return Err(Error::NonHermitian { deviation });
    }
    let n = m.nrows();
    // Work on the exactly Hermitian part.
    let mut a = CMatrix::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
    let mut v = CMatrix::identity(n, n);

    let scale = a.iter().map(|z| z.norm_sqr()).sum::<f64>();
    let target = (f64::EPSILON * f64::EPSILON) * scale.max(f64::MIN_POSITIVE);

    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        if converged || off_diagonal_norm2(&a) <= target {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                let phase = apq / r;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = 0.5 * (2.0 * r).atan2(aqq - app);
                let (s, cth) = theta.sin_cos();
                // W = diag(1, e^{-iφ}) · [[c, s], [-s, c]]
                let w_pp = re(cth);
                let w_pq = re(s);
                let w_qp = -phase.conj() * s;
                let w_qq = phase.conj() * cth;
                // A <- A W (columns p, q)
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * w_pp + akq * w_qp;
                    a[(k, q)] = akp * w_pq + akq * w_qq;
                }
                // A <- W† A (rows p, q)
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = w_pp.conj() * apk + w_qp.conj() * aqk;
                    a[(q, k)] = w_pq.conj() * apk + w_qq.conj() * aqk;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = re(a[(p, p)].re);
                a[(q, q)] = re(a[(q, q)].re);
                if with_vectors {
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = vkp * w_pp + vkq * w_qp;
                        v[(k, q)] = vkp * w_pq + vkq * w_qq;
                    }
                }
            }
        }
    }
    if !converged && off_diagonal_norm2(&a) > target * 1e6 {
        return Err(Error::NoConvergence {
            iterations: MAX_SWEEPS,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.iter().map(|&i| re(a[(i, i)].re)).collect();
    let vectors = with_vectors.then(|| CMatrix::from_fn(n, n, |r, k| v[(r, order[k])]));
    Ok(EigenResult { values, vectors })
}

const SCHUR_TOLERANCES: [f64; 5] = [f64::EPSILON, 1e-15, 1e-14, 1e-13, 1e-12];

/// All eigenvalues of a square complex matrix (with multiplicity), sorted by
/// descending real part. No eigenvectors are produced.
pub fn general_eigs(m: &CMatrix) -> Result<EigenResult> {
    ensure_square(m)?;
    let n = m.nrows();
    if n == 0 {
        return Ok(EigenResult {
            values: vec![],
            vectors: None,
        });
    }
    // Near-scalar inputs (e.g. g Rᵀ g R of a pure state) can stall deflation at
    // machine precision; retry with progressively looser thresholds.
    let schur = SCHUR_TOLERANCES
        .iter()
        .find_map(|&eps| nalgebra::linalg::Schur::try_new(m.clone(), eps, MAX_SWEEPS * n))
        .ok_or(Error::NoConvergence {
            iterations: MAX_SWEEPS * n * SCHUR_TOLERANCES.len(),
        })?;
    let (_, t) = schur.unpack();
    let mut values: Vec<Complex64> = (0..n).map(|i| t[(i, i)]).collect();
    values.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
    Ok(EigenResult {
        values,
        vectors: None,
    })
}

/// Group of (numerically) coincident eigenvalues with its algebraic and
/// geometric multiplicities.
#[derive(Debug, Clone)]
pub struct EigenCluster {
    pub value: Complex64,
    pub algebraic: usize,
    pub geometric: usize,
}

/// Diagonalizability diagnostics for a general square matrix.
#[derive(Debug, Clone)]
pub struct Diagonalizability {
    pub clusters: Vec<EigenCluster>,
    /// Condition number of the eigenvector matrix; infinite when the matrix
    /// lacks a full eigenbasis.
    pub eigenvector_condition: f64,
}

/// Estimate how far `m` is from being diagonalizable, given its eigenvalues.
///
/// Eigenvalues closer than `cluster_tol` (relative to the spectral scale) are
/// grouped; each cluster's eigenvectors are taken as the numerical null space
/// of `m - λ̄ I`. The condition number of the stacked eigenvectors is reported.
pub fn diagonalizability(m: &CMatrix, values: &[Complex64], cluster_tol: f64) -> Diagonalizability {
    let n = m.nrows();
    let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);

    let mut clusters: Vec<(Complex64, Vec<Complex64>)> = Vec::new();
    for &v in values {
        match clusters
            .iter_mut()
            .find(|(c, _)| (*c - v).norm() <= cluster_tol * scale)
        {
            Some((c, members)) => {
                members.push(v);
                *c = members.iter().sum::<Complex64>() / members.len() as f64;
            }
            None => clusters.push((v, vec![v])),
        }
    }

    let null_tol = cluster_tol.sqrt().min(1e-6) * scale * (n as f64);
    let mut basis: Vec<CVector> = Vec::new();
    let mut out = Vec::new();
    for (value, members) in &clusters {
        let shifted = m - CMatrix::identity(n, n) * *value;
        let svd = shifted.svd(false, true);
        let v_t = svd.v_t.expect("requested V^T");
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
        let mut geometric = 0;
        for &k in idx.iter().take(members.len()) {
            if svd.singular_values[k] <= null_tol {
                geometric += 1;
                basis.push(v_t.row(k).adjoint().into_owned());
            }
        }
        out.push(EigenCluster {
            value: *value,
            algebraic: members.len(),
            geometric,
        });
    }

    let eigenvector_condition = if basis.len() < n {
        f64::INFINITY
    } else {
        let vmat = CMatrix::from_columns(&basis);
        let sv = vmat.singular_values();
        let max = sv.iter().cloned().fold(0.0, f64::max);
        let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
        if min == 0.0 {
            f64::INFINITY
        } else {
            max / min
        }
    };
    Diagonalizability {
        clusters: out,
        eigenvector_condition,
    }
}

/// Tensor product `A ⊗ B`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Reduced density matrix of sites `keep = (i, j)` from a `2^N`-dimensional
/// density matrix. Site 0 is the most significant bit of the basis index; the
/// output basis is `|s_i s_j⟩`.
pub fn partial_trace(m: &CMatrix, n_sites: usize, keep: (usize, usize)) -> Result<CMatrix> {
    ensure_square(m)?;
    check_pair(n_sites, keep)?;
    let dim = 1usize << n_sites;
    if m.nrows() != dim {
        return Err(Error::DimensionMismatch(format!(
            "expected {dim}x{dim} matrix for {n_sites} sites, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let (bi, bj) = (n_sites - 1 - keep.0, n_sites - 1 - keep.1);
    let kept_mask = (1usize << bi) | (1usize << bj);
    let local = |idx: usize| (((idx >> bi) & 1) << 1) | ((idx >> bj) & 1);

    let mut out = CMatrix::zeros(4, 4);
    for row in 0..dim {
        let env = row & !kept_mask;
        for a in 0..4usize {
            let col = env | (((a >> 1) & 1) << bi) | ((a & 1) << bj);
            out[(local(row), a)] += m[(row, col)];
        }
    }
    Ok(out)
}

/// Same as [`partial_trace`] applied to `|ψ⟩⟨ψ|`, without forming the full
/// outer product.
pub fn pair_reduced_from_vector(psi: &CVector, n_sites: usize, keep: (usize, usize)) -> Result<CMatrix> {
    check_pair(n_sites, keep)?;
    let dim = 1usize << n_sites;
    if psi.len() != dim {
        return Err(Error::DimensionMismatch(format!(
            "expected vector of length {dim}, got {}",
            psi.len()
        )));
    }
    let (bi, bj) = (n_sites - 1 - keep.0, n_sites - 1 - keep.1);
    let kept_mask = (1usize << bi) | (1usize << bj);
    let local = |idx: usize| (((idx >> bi) & 1) << 1) | ((idx >> bj) & 1);

    let mut out = CMatrix::zeros(4, 4);
    for row in 0..dim {
        let env = row & !kept_mask;
        for a in 0..4usize {
            let col = env | (((a >> 1) & 1) << bi) | ((a & 1) << bj);
            out[(local(row), a)] += psi[row] * psi[col].conj();
        }
    }
    Ok(out)
}

fn check_pair(n_sites: usize, keep: (usize, usize)) -> Result<()> {
    if keep.0 >= n_sites || keep.1 >= n_sites {
        return Err(Error::IndexOutOfRange(format!(
            "sites {keep:?} for a {n_sites}-site system"
        )));
    }
    if keep.0 == keep.1 {
        return Err(Error::IndexOutOfRange(format!(
            "kept sites must be distinct, got {keep:?}"
        )));
    }
    Ok(())
}

pub fn trace(m: &CMatrix) -> Complex64 {
    (0..m.nrows().min(m.ncols())).map(|i| m[(i, i)]).sum()
}
