//! Periodic XXZ rings `H = Σ σˣσˣ + σʸσʸ + γ σᶻσᶻ`: exact ground states,
//! nearest-neighbour reduced states and their evolution when both spins of
//! the pair see the same Pauli channel.
//!
//! Site 0 is the most significant bit of a basis index and bit value 0 is
//! spin up (`σᶻ = +1`).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channels::PauliChannel;
use crate::entanglement::XMatrix;
use crate::error::{Error, Result};
use crate::numerics::{hermitian_eigs, pair_reduced_from_vector, re, CMatrix, CVector, ZERO};
use crate::qstate::{TwoQubitState, XFormState};

pub const MIN_SITES: usize = 4;
pub const MAX_SITES: usize = 10;

/// Two levels closer than this are treated as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-10;

/// Nearest-neighbour reduced state of a ring eigenstate: diagonal
/// `(u, x, y, v)` and coherence `z = ρ_{01,10}`.
pub type SpinReducedState = XFormState;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XXZParams {
    pub gamma: f64,
    pub n_sites: usize,
}

impl XXZParams {
    pub fn new(gamma: f64, n_sites: usize) -> Result<Self> {
        let p = Self { gamma, n_sites };
        p.validate()?;
        Ok(p)
    }

    pub fn heisenberg(n_sites: usize) -> Result<Self> {
        Self::new(1.0, n_sites)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.gamma.is_finite() {
            return Err(Error::DomainError(format!("anisotropy {} is not finite", self.gamma)));
        }
        if self.n_sites > MAX_SITES {
            return Err(Error::SizeTooLarge(format!(
                "{} sites (at most {MAX_SITES} supported)",
                self.n_sites
            )));
        }
        if self.n_sites < MIN_SITES || !self.n_sites.is_multiple_of(2) {
            return Err(Error::DomainError(format!(
                "ring length {} must be even and at least {MIN_SITES}",
                self.n_sites
            )));
        }
        Ok(())
    }

    fn dim(&self) -> usize {
        1 << self.n_sites
    }
}

fn site_mask(n: usize, site: usize) -> usize {
    1 << (n - 1 - site)
}

/// Diagonal energy of a basis state and the states reached by the hopping
/// terms (each with amplitude 2).
fn bond_terms(p: &XXZParams, state: usize) -> (f64, Vec<usize>) {
    let n = p.n_sites;
    let spin = |site: usize| if state & site_mask(n, site) == 0 { 1.0 } else { -1.0 };
    let mut diag = 0.0;
    let mut hops = Vec::with_capacity(n);
    for i in 0..n {
        let j = (i + 1) % n;
        let (si, sj) = (spin(i), spin(j));
        diag += p.gamma * si * sj;
        if si != sj {
            hops.push(state ^ site_mask(n, i) ^ site_mask(n, j));
        }
    }
    (diag, hops)
}

/// Dense Hamiltonian on the full `2^N` space.
pub fn xxz_hamiltonian(p: &XXZParams) -> Result<CMatrix> {
    p.validate()?;
    let dim = p.dim();
    let mut h = CMatrix::zeros(dim, dim);
    for state in 0..dim {
        let (diag, hops) = bond_terms(p, state);
        h[(state, state)] += re(diag);
        for target in hops {
            h[(target, state)] += re(2.0);
        }
    }
    Ok(h)
}

/// Basis states with `down` flipped spins, ascending.
pub fn sector_basis(n_sites: usize, down: usize) -> Vec<usize> {
    (0..1usize << n_sites)
        .filter(|s| s.count_ones() as usize == down)
        .collect()
}

/// Hamiltonian restricted to the sector with `down` flipped spins, together
/// with its basis.
pub fn sector_hamiltonian(p: &XXZParams, down: usize) -> Result<(Vec<usize>, CMatrix)> {
    p.validate()?;
    if down > p.n_sites {
        return Err(Error::IndexOutOfRange(format!("{down} flipped spins on {} sites", p.n_sites)));
    }
    let basis = sector_basis(p.n_sites, down);
    let mut h = CMatrix::zeros(basis.len(), basis.len());
    for (col, &state) in basis.iter().enumerate() {
        let (diag, hops) = bond_terms(p, state);
        h[(col, col)] += re(diag);
        for target in hops {
            let row = basis.binary_search(&target).expect("hopping conserves magnetization");
            h[(row, col)] += re(2.0);
        }
    }
    Ok((basis, h))
}

/// Cyclic shift moving the spin on site `i` to site `i + 1`.
fn translate(state: usize, n: usize) -> usize {
    (state >> 1) | ((state & 1) << (n - 1))
}

/// `(1/N) Σ_m T^m v` for a vector in a sector basis.
fn translation_average(v: &CVector, basis: &[usize], n: usize) -> CVector {
    let mut out = CVector::zeros(v.len());
    for (k, &state) in basis.iter().enumerate() {
        let mut s = state;
        for _ in 0..n {
            s = translate(s, n);
            let idx = basis.binary_search(&s).expect("translation conserves magnetization");
            out[idx] += v[k];
        }
    }
    out / re(n as f64)
}

/// Lowest state of the zero-magnetization sector.
#[derive(Debug, Clone)]
pub struct GroundState {
    pub params: XXZParams,
    pub energy: f64,
    /// Amplitudes on the full `2^N` basis.
    pub vector: CVector,
    /// Number of sector levels within [`DEGENERACY_TOL`] of `energy`.
    pub multiplicity: usize,
    /// Lowest level over all magnetization sectors.
    pub full_minimum: f64,
    pub sector_warning: Option<String>,
}

impl GroundState {
    pub fn degenerate(&self) -> bool {
        self.multiplicity > 1
    }

    /// Reduced matrix of the pair `(site, site + 1 mod N)`.
    pub fn pair_matrix(&self, site: usize) -> Result<CMatrix> {
        let n = self.params.n_sites;
        if site >= n {
            return Err(Error::IndexOutOfRange(format!("site {site} on a ring of {n}")));
        }
        pair_reduced_from_vector(&self.vector, n, (site, (site + 1) % n))
    }
}

/// Ground state in the zero-magnetization sector. Degenerate levels are
/// resolved by taking the combination with the largest weight on the
/// translation-invariant subspace. Every other sector is diagonalized as
/// well, and a warning is recorded when one of them goes lower.
pub fn ground_state(p: &XXZParams) -> Result<GroundState> {
    let n = p.n_sites;
    let (basis, h) = sector_hamiltonian(p, n / 2)?;
    let eig = hermitian_eigs(&h, true)?;
    let values = eig.real_values();
    let vecs = eig.vectors.expect("vectors requested");
    let last = values.len() - 1;
    let energy = values[last];
    let lowest: Vec<usize> = (0..values.len())
        .filter(|&k| values[k] - energy < DEGENERACY_TOL)
        .collect();

    let mut local = if lowest.len() == 1 {
        vecs.column(last).into_owned()
    } else {
        let cols: Vec<CVector> = lowest.iter().map(|&k| vecs.column(k).into_owned()).collect();
        let averaged: Vec<CVector> = cols.iter().map(|c| translation_average(c, &basis, n)).collect();
        let m = CMatrix::from_fn(cols.len(), cols.len(), |a, b| cols[a].dotc(&averaged[b]));
        let m = (&m + m.adjoint()) * re(0.5);
        let weights = hermitian_eigs(&m, true)?.vectors.expect("vectors requested");
        let mut v = CVector::zeros(basis.len());
        for (a, col) in cols.iter().enumerate() {
            v += col * weights[(a, 0)];
        }
        let norm = v.norm();
        v / re(norm)
    };
    // fix the global phase so the output is reproducible
    let pivot = local.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap_or(ZERO);
    if pivot.norm() > 0.0 {
        local *= pivot.conj() / pivot.norm();
    }

    let mut vector = CVector::zeros(p.dim());
    for (k, &state) in basis.iter().enumerate() {
        vector[state] = local[k];
    }

    let mut full_minimum = energy;
    let mut lower_sector = None;
    for down in (0..=n).filter(|&d| d != n / 2) {
        let (_, hs) = sector_hamiltonian(p, down)?;
        let e = *hermitian_eigs(&hs, false)?.real_values().last().expect("non-empty sector");
        if e < full_minimum {
            full_minimum = e;
        }
        if e < energy - DEGENERACY_TOL {
            lower_sector.get_or_insert(down);
        }
    }
    let sector_warning = lower_sector.map(|down| {
        let sz = (n as f64 - 2.0 * down as f64) / 2.0;
        format!("lowest level {full_minimum} lies outside the Sz = 0 sector (e.g. Sz = {sz}); using the Sz = 0 ground state {energy}")
    });

    Ok(GroundState {
        params: *p,
        energy,
        vector,
        multiplicity: lowest.len(),
        full_minimum,
        sector_warning,
    })
}

/// Nearest-neighbour reduced state of the ground state, with diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundReduced {
    pub state: SpinReducedState,
    pub energy: f64,
    pub degenerate: bool,
    pub sector_warning: Option<String>,
    /// Largest modulus among entries outside the `(u, x, y, v, z)` pattern.
    pub pattern_leakage: f64,
}

pub fn ground_reduced(p: &XXZParams) -> Result<GroundReduced> {
    let g = ground_state(p)?;
    let m = g.pair_matrix(0)?;
    let state = XFormState::from_matrix(&m);
    let pattern_leakage = (&m - state.to_matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok(GroundReduced {
        state,
        energy: g.energy,
        degenerate: g.degenerate(),
        sector_warning: g.sector_warning,
        pattern_leakage,
    })
}

/// `2 max(0, |z| - √(uv))`; for `u = v` this is `2(|z| - u)`.
pub fn reduced_concurrence(s: &SpinReducedState) -> f64 {
    (2.0 * (s.z.norm() - (s.u * s.v).max(0.0).sqrt())).max(0.0)
}

/// Entries of a [`SpinReducedState`] after the same Pauli channel acts on
/// both spins:
///
/// ```text
/// A  .  .  E
/// .  B  F  .
/// .  F* C  .
/// E* .  .  D
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolvedSpinCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: Complex64,
    pub f: Complex64,
    /// `(p0 + p3, p1 + p2, p0 - p3, p1 - p2)`.
    pub eta: [f64; 4],
}

impl EvolvedSpinCoefficients {
    pub fn to_matrix(&self) -> CMatrix {
        XMatrix {
            diag: [self.a, self.b, self.c, self.d],
            outer: self.e,
            inner: self.f,
        }
        .to_matrix()
    }

    pub fn to_state(&self) -> Result<TwoQubitState> {
        TwoQubitState::new(self.to_matrix())
    }

    /// `2 max(0, |F| - √(AD))`, the relevant branch whenever `|E| ≤ √(BC)`.
    pub fn concurrence(&self) -> f64 {
        (2.0 * (self.f.norm() - (self.a * self.d).max(0.0).sqrt())).max(0.0)
    }

    /// Concurrence with both X-form branches checked.
    pub fn concurrence_full(&self) -> Result<f64> {
        XMatrix {
            diag: [self.a, self.b, self.c, self.d],
            outer: self.e,
            inner: self.f,
        }
        .concurrence()
    }
}

pub fn evolve_reduced(s: &SpinReducedState, ch: &PauliChannel) -> EvolvedSpinCoefficients {
    let eta = ch.etas();
    let [e1, e2, e3, e4] = eta;
    let XFormState { u, x, y, v, z } = *s;
    EvolvedSpinCoefficients {
        a: u * e1 * e1 + v * e2 * e2 + (x + y) * e1 * e2,
        b: x * e1 * e1 + y * e2 * e2 + (u + v) * e1 * e2,
        c: y * e1 * e1 + x * e2 * e2 + (u + v) * e1 * e2,
        d: v * e1 * e1 + u * e2 * e2 + (x + y) * e1 * e2,
        e: (z + z.conj()) * e3 * e4,
        f: z * e3 * e3 + z.conj() * e4 * e4,
        eta,
    }
}

/// [`evolve_reduced`] for a pair of channels, accepted only when they agree.
pub fn evolve_reduced_pair(
    s: &SpinReducedState,
    ch1: &PauliChannel,
    ch2: &PauliChannel,
) -> Result<EvolvedSpinCoefficients> {
    let (p1, p2) = (ch1.probabilities(), ch2.probabilities());
    if p1.iter().zip(&p2).any(|(a, b)| (a - b).abs() > 1e-12) {
        return Err(Error::DomainError(format!(
            "closed-form evolution needs the same channel on both spins, got {ch1} and {ch2}"
        )));
    }
    Ok(evolve_reduced(s, ch1))
}

/// `max(0, η3² C0 - 2 η1 η2)` with the depolarizing values
/// `η1 = (1 + e^{-κt})/2`, `η2 = (1 - e^{-κt})/2`, `η3 = e^{-κt}`.
pub fn heisenberg_depolarizing_closed_form(c0: f64, kappa: f64, t: f64) -> f64 {
    let q = (-kappa * t).exp();
    eta_closed_form(c0, [(1.0 + q) / 2.0, (1.0 - q) / 2.0, q, 0.0])
}

/// `max(0, η3² C0 - 2 η1 η2)`. Exact for a Heisenberg pair state under
/// depolarizing noise; for other channels it is only a reference curve.
pub fn eta_closed_form(c0: f64, eta: [f64; 4]) -> f64 {
    let [e1, e2, e3, _] = eta;
    (e3 * e3 * c0 - 2.0 * e1 * e2).max(0.0)
}
