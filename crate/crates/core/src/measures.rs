//! Localization and pairwise entanglement of one-excitation states.

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;

use crate::chain::ChainSpec;
use crate::error::{Error, Result};
use crate::par::par_map;
use crate::spectral::{decompose_spec, denergy_dalpha, SpectralDecomposition};

const NORM_TOL: f64 = 1e-9;
const DENSITY_TOL: f64 = 1e-10;
const JACOBI_SWEEPS: usize = 30;

/// Site amplitudes of a state with exactly one flipped spin.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeVector {
    pub amps: Vec<Complex64>,
    pub time_tag: Option<f64>,
}

impl AmplitudeVector {
    pub fn new(amps: Vec<Complex64>) -> Self {
        AmplitudeVector {
            amps,
            time_tag: None,
        }
    }

    pub fn from_real(amps: &[f64]) -> Self {
        Self::new(amps.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Excitation localized on `site` (0-based).
    pub fn delta(n: usize, site: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); n];
        amps[site] = Complex64::new(1.0, 0.0);
        Self::new(amps)
    }

    pub fn at_time(mut self, t: f64) -> Self {
        self.time_tag = Some(t);
        self
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn check_normalized(&self) -> Result<()> {
        let n2 = self.norm_sqr();
        if (n2 - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(n2));
        }
        Ok(())
    }
}

/// Inverse participation ratio (Σ|ψ|²)² / Σ|ψ|⁴, between 1 and N.
pub fn ipr(state: &AmplitudeVector) -> Result<f64> {
    state.check_normalized()?;
    Ok(ipr_unchecked(state.amps.iter().map(|a| a.norm_sqr())))
}

/// IPR from site populations, without the normalization check.
pub fn ipr_unchecked(populations: impl IntoIterator<Item = f64>) -> f64 {
    let (s2, s4) = populations
        .into_iter()
        .fold((0.0, 0.0), |(s2, s4), p| (s2 + p, s4 + p * p));
    s2 * s2 / s4
}

/// IPR of a real eigenvector.
pub fn ipr_real(v: &[f64]) -> f64 {
    ipr_unchecked(v.iter().map(|x| x * x))
}

/// Two-qubit density matrix in the basis {↑↑, ↑↓, ↓↑, ↓↓}, first label
/// belonging to `sites.0`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitDensity {
    pub matrix: Matrix4<Complex64>,
    pub sites: (usize, usize),
}

impl TwoQubitDensity {
    /// Checks hermiticity, unit trace and positivity (all within 1e-10).
    pub fn new(matrix: Matrix4<Complex64>, sites: (usize, usize)) -> Result<Self> {
        let herm = (matrix - matrix.adjoint())
            .iter()
            .fold(0.0_f64, |m, z| m.max(z.norm()));
        if herm > DENSITY_TOL {
            return Err(Error::NotDensityMatrix(format!(
                "not Hermitian (deviation {herm:e})"
            )));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > DENSITY_TOL || tr.im.abs() > DENSITY_TOL {
            return Err(Error::NotDensityMatrix(format!("trace {tr}")));
        }
        let min = hermitian_eigen4(&hermitian_part(&matrix)).0.min();
        if min < -DENSITY_TOL {
            return Err(Error::NotDensityMatrix(format!(
                "negative eigenvalue {min:e}"
            )));
        }
        Ok(TwoQubitDensity { matrix, sites })
    }

    /// Pure-state projector |φ⟩⟨φ|.
    pub fn from_pure(phi: [Complex64; 4]) -> Result<Self> {
        let v = nalgebra::Vector4::from(phi);
        Self::new(v * v.adjoint(), (0, 1))
    }
}

fn hermitian_part(m: &Matrix4<Complex64>) -> Matrix4<Complex64> {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Cyclic Jacobi for a 4×4 Hermitian matrix: eigenvalues and eigenvectors
/// (columns), unsorted.
fn hermitian_eigen4(m: &Matrix4<Complex64>) -> (Vector4<f64>, Matrix4<Complex64>) {
    let mut a = *m;
    let mut v = Matrix4::<Complex64>::identity();
    let scale = a.iter().map(|z| z.norm_sqr()).sum::<f64>();
    for _ in 0..JACOBI_SWEEPS {
        let off: f64 = (0..4)
            .flat_map(|p| (p + 1..4).map(move |q| (p, q)))
            .map(|(p, q)| a[(p, q)].norm_sqr())
            .sum();
        if off <= f64::EPSILON.powi(2) * scale * 1e-4 {
            break;
        }
        for p in 0..4 {
            for q in p + 1..4 {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                let phase = apq / r;
                let theta = 0.5 * f64::atan2(2.0 * r, a[(q, q)].re - a[(p, p)].re);
                let (s, c) = theta.sin_cos();
                let mut g = Matrix4::<Complex64>::identity();
                g[(p, p)] = Complex64::new(c, 0.0);
                g[(p, q)] = Complex64::new(s, 0.0);
                g[(q, p)] = -phase.conj() * s;
                g[(q, q)] = phase.conj() * c;
                a = g.adjoint() * a * g;
                v *= g;
            }
        }
    }
    (Vector4::from_fn(|i, _| a[(i, i)].re), v)
}

/// Reduced density matrix of sites `i < j` (0-based) for a one-excitation
/// state.
///
/// With at most one flipped spin the pair is in ↑↑ unless the excitation
/// sits on `i` (↓↑) or `j` (↑↓); the only coherence links those two.
pub fn reduced_density_two_sites(
    state: &AmplitudeVector,
    i: usize,
    j: usize,
) -> Result<TwoQubitDensity> {
    let n = state.len();
    if !(i < j && j < n) {
        return Err(Error::BadSitePair { i, j, n });
    }
    state.check_normalized()?;
    let (pi, pj) = (state.amps[i], state.amps[j]);
    let zero = Complex64::new(0.0, 0.0);
    let mut m = Matrix4::from_element(zero);
    let norm = state.norm_sqr();
    m[(0, 0)] = Complex64::new(norm - pi.norm_sqr() - pj.norm_sqr(), 0.0);
    m[(1, 1)] = Complex64::new(pj.norm_sqr(), 0.0);
    m[(2, 2)] = Complex64::new(pi.norm_sqr(), 0.0);
    m[(2, 1)] = pi * pj.conj();
    m[(1, 2)] = pj * pi.conj();
    // Renormalize away the ≤1e-9 slack allowed on the input.
    m /= Complex64::new(norm, 0.0);
    TwoQubitDensity::new(m, (i, j))
}

/// σʸ⊗σʸ in the computational basis.
fn sigma_yy() -> Matrix4<Complex64> {
    let o = Complex64::new(0.0, 0.0);
    let p = Complex64::new(1.0, 0.0);
    let m = Complex64::new(-1.0, 0.0);
    Matrix4::new(o, o, o, m, o, o, p, o, o, p, o, o, m, o, o, o)
}

/// Wootters concurrence max{0, λ₁−λ₂−λ₃−λ₄}.
///
/// With ρ = Σ_i |w_i⟩⟨w_i| (w_i = √p_i v_i from the eigendecomposition),
/// the λ's, i.e. the square roots of the spectrum of ρρ̃, are the singular
/// values of τ_ik = w_iᵀ (σʸ⊗σʸ) w_k. Working with τ keeps rank-deficient
/// (pure) inputs accurate to rounding level.
pub fn wootters_concurrence(rho: &TwoQubitDensity) -> Result<f64> {
    let (values, vectors) = hermitian_eigen4(&hermitian_part(&rho.matrix));
    let weights = values.map(|p| Complex64::new(p.max(0.0).sqrt(), 0.0));
    let w = vectors * Matrix4::from_diagonal(&weights);
    let tau = w.transpose() * sigma_yy() * w;

    let mut lambdas: Vec<f64> = tau.singular_values().iter().copied().collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    let c = lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3];
    if !c.is_finite() {
        return Err(Error::NotDensityMatrix("non-finite spectrum".into()));
    }
    Ok(c.clamp(0.0, 1.0))
}

/// Nearest-neighbour concurrence 2|Ψ_{i+1}Ψ_i| of sites `i`, `i+1`.
pub fn nn_concurrence_closed_form(eigvec: &AmplitudeVector, i: usize) -> Result<f64> {
    let n = eigvec.len();
    if i + 1 >= n {
        return Err(Error::BadSite { site: i, n });
    }
    Ok(2.0 * (eigvec.amps[i + 1] * eigvec.amps[i]).norm())
}

/// Concurrence of the first two spins in eigenstate `j` (0-based), from the
/// energy derivative: C₁₂ = |∂E_j/∂α| / |J|.
pub fn c12_from_energy_derivative(spec: &ChainSpec, j: usize) -> Result<f64> {
    Ok((denergy_dalpha(spec, j)? / spec.exchange_j).abs())
}

/// One sample of an α sweep. `j` is the 0-based state index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub alpha: f64,
    pub j: usize,
    pub value: f64,
}

/// Which per-eigenstate quantity an α sweep records.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepQuantity {
    Ipr,
    /// Nearest-neighbour concurrence of sites 1 and 2.
    C12,
}

fn sweep_value(dec: &SpectralDecomposition, quantity: SweepQuantity, j: usize) -> f64 {
    let v = &dec.eigvecs[j];
    match quantity {
        SweepQuantity::Ipr => ipr_real(v),
        SweepQuantity::C12 => 2.0 * (v[0] * v[1]).abs(),
    }
}

/// Evaluates `quantity` for the listed states (all if `states` is empty)
/// over an α grid. Rows are ordered by α, then state index.
pub fn alpha_sweep(
    template: &ChainSpec,
    alphas: &[f64],
    states: &[usize],
    quantity: SweepQuantity,
) -> Result<Vec<SweepPoint>> {
    let per_alpha = par_map(alphas, |&alpha| -> Result<Vec<SweepPoint>> {
        let dec = decompose_spec(&template.with_alpha(alpha))?;
        let all: Vec<usize>;
        let idx = if states.is_empty() {
            all = (0..dec.dim()).collect();
            &all
        } else {
            states
        };
        idx.iter()
            .map(|&j| {
                crate::spectral::state_index_check(&dec, j)?;
                Ok(SweepPoint {
                    alpha,
                    j,
                    value: sweep_value(&dec, quantity, j),
                })
            })
            .collect()
    });
    let mut rows = Vec::new();
    for chunk in per_alpha {
        rows.extend(chunk?);
    }
    Ok(rows)
}

/// Location and height of a curve's largest sample, with a flag telling
/// whether it exceeds every other local maximum by at least a factor 3.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub alpha: f64,
    pub height: f64,
    pub dominant: bool,
}

/// Finds the peak of `values` sampled on `alphas`, ignoring α below
/// `exclude_below`.
pub fn dominant_peak(alphas: &[f64], values: &[f64], exclude_below: f64) -> Option<Peak> {
    let pts: Vec<(f64, f64)> = alphas
        .iter()
        .zip(values)
        .filter(|(a, _)| **a >= exclude_below)
        .map(|(&a, &v)| (a, v))
        .collect();
    let (best_idx, &(alpha, height)) = pts
        .iter()
        .enumerate()
        .max_by(|(ia, a), (ib, b)| a.1.total_cmp(&b.1).then(ib.cmp(ia)))?;
    let runner_up = (0..pts.len())
        .filter(|&k| k != best_idx)
        .filter(|&k| {
            let left = k == 0 || pts[k].1 > pts[k - 1].1;
            let right = k + 1 == pts.len() || pts[k].1 >= pts[k + 1].1;
            left && right
        })
        .map(|k| pts[k].1)
        .fold(0.0, f64::max);
    Some(Peak {
        alpha,
        height,
        dominant: height >= 3.0 * runner_up,
    })
}
