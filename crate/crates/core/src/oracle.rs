//! Brute-force simulator on the full 2^N (or 2^(N+1) with an ancilla)
//! Hilbert space, used to cross-check the one-excitation machinery.
//!
//! Basis convention: qubit 0 is the most significant bit. Without an
//! ancilla, site k (1-based) is qubit k−1; with one, the ancilla is qubit 0
//! and site k is qubit k. Bit value 0 is ↑, 1 is ↓ (an excitation).
//!
//! The operator is ½ × (the Pauli-form XX Hamiltonian + hN), i.e.
//! Σ_b (J_b/2)(σˣσˣ + σʸσʸ) + (h/2)Σ_k (1 − σᶻ_k). Its one-excitation block
//! is then exactly the tridiagonal sector matrix and the all-up state has
//! energy zero.

use nalgebra::{DMatrix, DVector, Matrix2, Matrix4};
use num_complex::Complex64;

use crate::chain::{build_hamiltonian, ChainSpec};
use crate::dynamics::{transfer_amplitude, Propagator};
use crate::error::{Error, Result};
use crate::measures::{wootters_concurrence, AmplitudeVector, TwoQubitDensity};
use crate::spectral::eigendecompose;

/// Largest chain handled by the oracle.
pub const MAX_SITES: usize = 12;
/// Largest register (chain plus ancilla) for concurrence checks.
pub const MAX_QUBITS: usize = 13;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn pauli_x() -> Matrix2<Complex64> {
    Matrix2::new(c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.))
}

fn pauli_y() -> Matrix2<Complex64> {
    Matrix2::new(c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.))
}

fn pauli_z() -> Matrix2<Complex64> {
    Matrix2::new(c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.))
}

fn bit(state: usize, qubit: usize, n_qubits: usize) -> usize {
    (state >> (n_qubits - 1 - qubit)) & 1
}

fn with_bit(state: usize, qubit: usize, n_qubits: usize, value: usize) -> usize {
    let shift = n_qubits - 1 - qubit;
    (state & !(1 << shift)) | (value << shift)
}

/// Adds `scale · A_p ⊗ B_q` (identity elsewhere) to `m`.
fn add_two_site(
    m: &mut DMatrix<Complex64>,
    n_qubits: usize,
    (p, a): (usize, &Matrix2<Complex64>),
    (q, b): (usize, &Matrix2<Complex64>),
    scale: f64,
) {
    let dim = 1usize << n_qubits;
    for col in 0..dim {
        let (cp, cq) = (bit(col, p, n_qubits), bit(col, q, n_qubits));
        for rp in 0..2 {
            for rq in 0..2 {
                let amp = a[(rp, cp)] * b[(rq, cq)];
                if amp == c(0., 0.) {
                    continue;
                }
                let row = with_bit(with_bit(col, p, n_qubits, rp), q, n_qubits, rq);
                m[(row, col)] += amp * scale;
            }
        }
    }
}

fn add_one_site(
    m: &mut DMatrix<Complex64>,
    n_qubits: usize,
    p: usize,
    a: &Matrix2<Complex64>,
    scale: f64,
) {
    let dim = 1usize << n_qubits;
    for col in 0..dim {
        let cp = bit(col, p, n_qubits);
        for rp in 0..2 {
            let amp = a[(rp, cp)];
            if amp != c(0., 0.) {
                m[(with_bit(col, p, n_qubits, rp), col)] += amp * scale;
            }
        }
    }
}

fn chain_operator(spec: &ChainSpec, offset: usize) -> Result<DMatrix<f64>> {
    let spec = spec.clone().validate()?;
    let n = spec.n_sites;
    let n_qubits = n + offset;
    if n > MAX_SITES || n_qubits > MAX_QUBITS {
        return Err(Error::TooLarge {
            n: n_qubits,
            max: MAX_SITES,
        });
    }
    let dim = 1usize << n_qubits;
    let mut m = DMatrix::from_element(dim, dim, c(0., 0.));
    let (x, y, z) = (pauli_x(), pauli_y(), pauli_z());
    let id = Matrix2::<Complex64>::identity();
    for b in 1..n {
        let coupling = spec.bond_alpha(b) * spec.exchange_j;
        let (p, q) = (offset + b - 1, offset + b);
        add_two_site(&mut m, n_qubits, (p, &x), (q, &x), 0.5 * coupling);
        add_two_site(&mut m, n_qubits, (p, &y), (q, &y), 0.5 * coupling);
    }
    for k in 0..n {
        add_one_site(&mut m, n_qubits, offset + k, &id, 0.5 * spec.field_h);
        add_one_site(&mut m, n_qubits, offset + k, &z, -0.5 * spec.field_h);
    }
    let max_imag = m.iter().fold(0.0_f64, |acc, z| acc.max(z.im.abs()));
    debug_assert!(max_imag == 0.0, "XX operator must be real");
    Ok(m.map(|z| z.re))
}

/// Dense 2^N × 2^N Hamiltonian of the chain.
pub fn full_hamiltonian(spec: &ChainSpec) -> Result<DMatrix<f64>> {
    chain_operator(spec, 0)
}

/// Dense Hamiltonian of the chain plus an uncoupled ancilla on qubit 0.
pub fn full_hamiltonian_with_ancilla(spec: &ChainSpec) -> Result<DMatrix<f64>> {
    chain_operator(spec, 1)
}

/// Basis index of the one-excitation state |site⟩ (0-based site).
pub fn excitation_index(n_qubits: usize, offset: usize, site: usize) -> usize {
    1 << (n_qubits - 1 - (offset + site))
}

/// The one-excitation block of a chain-only full Hamiltonian, as a dense
/// N×N matrix ordered by site.
pub fn sector_block(full: &DMatrix<f64>, n_sites: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n_sites, n_sites, |a, b| {
        full[(
            excitation_index(n_sites, 0, a),
            excitation_index(n_sites, 0, b),
        )]
    })
}

/// Amplitudes over the computational basis of every qubit.
#[derive(Debug, Clone, PartialEq)]
pub struct FullState {
    pub n_qubits: usize,
    pub amps: DVector<Complex64>,
}

impl FullState {
    pub fn basis(n_qubits: usize, index: usize) -> Self {
        let mut amps = DVector::from_element(1 << n_qubits, c(0., 0.));
        amps[index] = c(1., 0.);
        FullState { n_qubits, amps }
    }

    /// Embeds a one-excitation chain state (no ancilla).
    pub fn from_sector(state: &AmplitudeVector) -> Self {
        let n = state.len();
        let mut full = FullState {
            n_qubits: n,
            amps: DVector::from_element(1 << n, c(0., 0.)),
        };
        for (k, a) in state.amps.iter().enumerate() {
            full.amps[excitation_index(n, 0, k)] = *a;
        }
        full
    }

    /// (|↑_A↓₁⟩ + |↓_A↑₁⟩)/√2 with the rest of the chain up.
    pub fn ancilla_bell(n_sites: usize) -> Self {
        let n_qubits = n_sites + 1;
        let mut amps = DVector::from_element(1 << n_qubits, c(0., 0.));
        let s = std::f64::consts::FRAC_1_SQRT_2;
        amps[excitation_index(n_qubits, 1, 0)] = c(s, 0.);
        amps[1 << (n_qubits - 1)] = c(s, 0.);
        FullState { n_qubits, amps }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Probability of each number of flipped spins, indexed 0..=n_qubits.
    pub fn sector_probabilities(&self) -> Vec<f64> {
        let mut p = vec![0.0; self.n_qubits + 1];
        for (idx, a) in self.amps.iter().enumerate() {
            p[idx.count_ones() as usize] += a.norm_sqr();
        }
        p
    }

    /// Amplitudes of the chain's one-excitation states (ancilla, if any,
    /// held at ↑).
    pub fn sector_amplitudes(&self, n_sites: usize) -> Vec<Complex64> {
        let offset = self.n_qubits - n_sites;
        (0..n_sites)
            .map(|k| self.amps[excitation_index(self.n_qubits, offset, k)])
            .collect()
    }

    /// Reduced density matrix of qubits `qa`, `qb` (qa first in the basis).
    pub fn reduced_pair(&self, qa: usize, qb: usize) -> Matrix4<Complex64> {
        let nq = self.n_qubits;
        let mut rho = Matrix4::from_element(c(0., 0.));
        let dim = 1usize << nq;
        for s in 0..dim {
            let a_s = self.amps[s];
            if a_s == c(0., 0.) {
                continue;
            }
            let row = 2 * bit(s, qa, nq) + bit(s, qb, nq);
            for r2 in 0..4 {
                let s2 = with_bit(with_bit(s, qa, nq, r2 >> 1), qb, nq, r2 & 1);
                rho[(row, r2)] += a_s * self.amps[s2].conj();
            }
        }
        rho
    }
}

const TAYLOR_TERMS: usize = 40;

/// e^{−iHt}|ψ⟩ by a truncated power series, accurate to rounding.
pub fn evolve_dense(h: &DMatrix<f64>, initial: &FullState, t: f64) -> FullState {
    // Taylor series of e^{-iH dt} on substeps with ‖H dt‖ ≤ 1/2.
    let norm = h
        .row_iter()
        .map(|r| r.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let steps = ((t.abs() * norm / 0.5).ceil() as usize).max(1);
    let dt = t / steps as f64;
    let rows: Vec<Vec<(usize, f64)>> = h
        .row_iter()
        .map(|r| {
            r.iter()
                .enumerate()
                .filter(|(_, x)| **x != 0.0)
                .map(|(j, &x)| (j, x))
                .collect()
        })
        .collect();
    let mut psi = initial.amps.clone();
    for _ in 0..steps {
        let mut term = psi.clone();
        for k in 1..=TAYLOR_TERMS {
            let scale = c(0., -dt / k as f64);
            term = DVector::from_iterator(
                rows.len(),
                rows.iter()
                    .map(|r| scale * r.iter().map(|&(j, x)| term[j] * x).sum::<Complex64>()),
            );
            psi += &term;
            if term.norm() < 1e-18 {
                break;
            }
        }
    }
    FullState {
        n_qubits: initial.n_qubits,
        amps: psi,
    }
}

/// Evolves a chain state (with an ancilla when `initial` has one extra
/// qubit) under the full Hamiltonian.
pub fn full_evolve(spec: &ChainSpec, initial: &FullState, t: f64) -> Result<FullState> {
    let offset = initial
        .n_qubits
        .checked_sub(spec.n_sites)
        .filter(|&o| o <= 1)
        .ok_or_else(|| {
            Error::WrongConfiguration(format!(
                "state has {} qubits for a {}-site chain",
                initial.n_qubits, spec.n_sites
            ))
        })?;
    let h = chain_operator(spec, offset)?;
    Ok(evolve_dense(&h, initial, t))
}

/// Partial trace to qubits `qa`, `qb` followed by the Wootters formula.
pub fn oracle_concurrence(full: &FullState, qa: usize, qb: usize) -> Result<f64> {
    if full.n_qubits > MAX_QUBITS {
        return Err(Error::TooLarge {
            n: full.n_qubits,
            max: MAX_QUBITS,
        });
    }
    if qa == qb || qa >= full.n_qubits || qb >= full.n_qubits {
        return Err(Error::BadSitePair {
            i: qa,
            j: qb,
            n: full.n_qubits,
        });
    }
    let rho = TwoQubitDensity::new(full.reduced_pair(qa, qb), (qa, qb))?;
    wootters_concurrence(&rho)
}

/// One (N, α, t) cell of the sector-versus-full-space comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleRow {
    pub n_sites: usize,
    pub alpha: f64,
    pub t: f64,
    /// Largest |ψ_sector − ψ_full| over sites.
    pub amplitude_error: f64,
    /// |C_{A,N}(full space) − |f_N||.
    pub concurrence_error: f64,
    /// Largest entry difference between the full-space sector block and
    /// the tridiagonal matrix.
    pub block_error: f64,
    /// Largest deviation of any Sz-sector probability from its initial value.
    pub sector_leak: f64,
}

impl OracleRow {
    pub fn passes(&self) -> bool {
        self.amplitude_error <= 1e-8
            && self.concurrence_error <= 1e-8
            && self.block_error <= 1e-12
            && self.sector_leak <= 1e-9
    }
}

/// Runs the equivalence checks for single-impurity chains of every size in
/// `sizes`, every α and every t.
pub fn equivalence_suite(sizes: &[usize], alphas: &[f64], times: &[f64]) -> Result<Vec<OracleRow>> {
    let mut rows = Vec::new();
    for &n in sizes {
        for &alpha in alphas {
            let spec = ChainSpec::single_impurity(n, alpha).validate()?;
            let tri = build_hamiltonian(&spec);
            let dense_tri = DMatrix::from_fn(n, n, |a, b| tri.to_dense()[a][b]);

            let h_full = full_hamiltonian(&spec)?;
            let block_error = (sector_block(&h_full, n) - &dense_tri).abs().max();
            let h_anc = full_hamiltonian_with_ancilla(&spec)?;

            let dec = eigendecompose(&tri)?;
            let prop = Propagator::from_first_site(&dec);
            let start = FullState::from_sector(&AmplitudeVector::delta(n, 0));
            let bell = FullState::ancilla_bell(n);

            for &t in times {
                let sector = prop.state(t);
                let full = evolve_dense(&h_full, &start, t);
                let amplitude_error = sector
                    .amps
                    .iter()
                    .zip(full.sector_amplitudes(n))
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max);
                let probs = full.sector_probabilities();
                let sector_leak = probs
                    .iter()
                    .enumerate()
                    .map(|(k, p)| (p - if k == 1 { 1.0 } else { 0.0 }).abs())
                    .fold(0.0, f64::max);

                let anc = evolve_dense(&h_anc, &bell, t);
                let c_full = oracle_concurrence(&anc, 0, n)?;
                let concurrence_error = (c_full - transfer_amplitude(&dec, t).norm()).abs();

                rows.push(OracleRow {
                    n_sites: n,
                    alpha,
                    t,
                    amplitude_error,
                    concurrence_error,
                    block_error,
                    sector_leak,
                });
            }
        }
    }
    Ok(rows)
}
