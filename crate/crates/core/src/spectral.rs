//! Eigendecomposition of the one-excitation Hamiltonian, band
//! classification, the critical impurity strength, and the energy
//! derivative with respect to the impurity strength.

use serde::Serialize;

use crate::chain::{build_hamiltonian, ChainSpec, Layout, TridiagonalHamiltonian};
use crate::error::{Error, Result};
use crate::tridiag::tql2;

/// Tolerance below which a coefficient is treated as zero when fixing the
/// eigenvector sign.
const SIGN_ZERO: f64 = 1e-12;

/// Ascending eigenvalues and orthonormal real eigenvectors.
///
/// `eigvecs[j][n]` is the amplitude of eigenstate `j` on site `n`, both
/// 0-based. The first coefficient with magnitude above 1e-12 is positive.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub energies: Vec<f64>,
    pub eigvecs: Vec<Vec<f64>>,
    /// max_j ‖H v_j − E_j v_j‖
    pub residual_bound: f64,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    /// Largest deviation of the Gram matrix from the identity. O(N³).
    pub fn orthonormality_error(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for a in 0..n {
            for b in a..n {
                let dot: f64 = self.eigvecs[a]
                    .iter()
                    .zip(&self.eigvecs[b])
                    .map(|(x, y)| x * y)
                    .sum();
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }
}

/// Diagonalizes a tridiagonal Hamiltonian.
///
/// Fails with `ConvergenceFailure` if the QL sweep stalls or the residual
/// exceeds `1e-10 * (max|E| + 1)`.
pub fn eigendecompose(h: &TridiagonalHamiltonian) -> Result<SpectralDecomposition> {
    let n = h.dim();
    if n == 0 {
        return Err(Error::InvalidN(0));
    }
    let raw = tql2(&h.diag, &h.offdiag)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| raw.values[a].total_cmp(&raw.values[b]).then(a.cmp(&b)));

    let energies: Vec<f64> = order.iter().map(|&i| raw.values[i]).collect();
    let eigvecs: Vec<Vec<f64>> = order
        .iter()
        .map(|&i| {
            let mut v = raw.vectors[i * n..(i + 1) * n].to_vec();
            if let Some(first) = v.iter().find(|x| x.abs() > SIGN_ZERO) {
                if *first < 0.0 {
                    v.iter_mut().for_each(|x| *x = -*x);
                }
            }
            v
        })
        .collect();

    let residual_bound = energies
        .iter()
        .zip(&eigvecs)
        .map(|(&e, v)| {
            h.apply(v)
                .iter()
                .zip(v)
                .map(|(hv, x)| (hv - e * x).powi(2))
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max);

    let scale = energies.iter().fold(0.0_f64, |m, e| m.max(e.abs())) + 1.0;
    if residual_bound > 1e-10 * scale {
        return Err(Error::ConvergenceFailure(format!(
            "residual {residual_bound:e} exceeds bound"
        )));
    }

    Ok(SpectralDecomposition {
        energies,
        eigvecs,
        residual_bound,
    })
}

/// Validates, builds and diagonalizes in one step.
pub fn decompose_spec(spec: &ChainSpec) -> Result<SpectralDecomposition> {
    let spec = spec.clone().validate()?;
    eigendecompose(&build_hamiltonian(&spec))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BandLabel {
    InBand,
    IsolatedBelow,
    IsolatedAbove,
}

impl BandLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            BandLabel::InBand => "InBand",
            BandLabel::IsolatedBelow => "IsolatedBelow",
            BandLabel::IsolatedAbove => "IsolatedAbove",
        }
    }
}

/// Per-state position relative to the infinite-chain band `|E - h| ≤ 2|J|`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandClassification {
    pub labels: Vec<BandLabel>,
}

impl BandClassification {
    pub fn count(&self, label: BandLabel) -> usize {
        self.labels.iter().filter(|&&l| l == label).count()
    }
}

const BAND_EDGE_TOL: f64 = 1e-9;

/// Labels each eigenstate. Energies within 1e-9 of a band edge count as in
/// the band. `center` is the sector energy offset (the field `h`).
pub fn classify_band_centered(
    dec: &SpectralDecomposition,
    exchange_j: f64,
    center: f64,
) -> BandClassification {
    let edge = 2.0 * exchange_j.abs();
    let labels = dec
        .energies
        .iter()
        .map(|&e| {
            let x = e - center;
            if x < -edge - BAND_EDGE_TOL {
                BandLabel::IsolatedBelow
            } else if x > edge + BAND_EDGE_TOL {
                BandLabel::IsolatedAbove
            } else {
                BandLabel::InBand
            }
        })
        .collect();
    BandClassification { labels }
}

/// Band classification for a zero-field chain.
pub fn classify_band(dec: &SpectralDecomposition, exchange_j: f64) -> BandClassification {
    classify_band_centered(dec, exchange_j, 0.0)
}

/// Smallest impurity strength at which the lowest level leaves the band.
///
/// `template` supplies N, J, h and the impurity layout; its impurity
/// strengths are overwritten during the search. Bisection stops when the
/// bracket is narrower than `tol`; the upper end is returned.
pub fn estimate_alpha_c(template: &ChainSpec, alpha_range: (f64, f64), tol: f64) -> Result<f64> {
    const MIN_N: usize = 10;
    if template.n_sites < MIN_N {
        return Err(Error::TooSmallN {
            n: template.n_sites,
            min: MIN_N,
        });
    }
    if template.impurities.is_empty() {
        return Err(Error::WrongConfiguration(
            "critical strength needs at least one impurity".into(),
        ));
    }
    let (mut lo, mut hi) = alpha_range;
    if !(lo < hi) || !(tol > 0.0) {
        return Err(Error::BadGrid(format!(
            "need lo < hi and tol > 0, got ({lo}, {hi}), {tol}"
        )));
    }
    let edge = template.field_h - 2.0 * template.exchange_j.abs();
    let lowest = |alpha: f64| -> Result<f64> {
        Ok(decompose_spec(&template.with_alpha(alpha))?.energies[0])
    };

    let e_lo = lowest(lo)?;
    let e_hi = lowest(hi)?;
    if e_hi >= edge {
        return Err(Error::NoBracket { hi, energy: e_hi });
    }
    if e_lo < edge {
        return Err(Error::NoBracket {
            hi: lo,
            energy: e_lo,
        });
    }
    let mut e_prev_hi = e_hi;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let e_mid = lowest(mid)?;
        // E_1 decreases with alpha throughout the bracket.
        if e_mid > e_lo + 1e-12 || e_mid < e_prev_hi - 1e-12 {
            return Err(Error::ConvergenceFailure(format!(
                "lowest energy not monotone in alpha near {mid}"
            )));
        }
        if e_mid < edge {
            hi = mid;
            e_prev_hi = e_mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

fn require_single(spec: &ChainSpec) -> Result<()> {
    match spec.layout() {
        Layout::Single(_) => Ok(()),
        other => Err(Error::WrongConfiguration(format!(
            "expected a single impurity on bond 1, found {other:?}"
        ))),
    }
}

/// Energy derivative ∂E_j/∂α for a single impurity on bond 1, by the
/// Hellmann–Feynman expectation 2J·Ψ₁Ψ₂ evaluated in the one-excitation
/// sector. `j` is 0-based.
pub fn denergy_dalpha(spec: &ChainSpec, j: usize) -> Result<f64> {
    require_single(spec)?;
    let dec = decompose_spec(spec)?;
    state_index_check(&dec, j)?;
    Ok(denergy_dalpha_from(&dec, spec.exchange_j, j))
}

/// Same as [`denergy_dalpha`] on an existing decomposition.
pub fn denergy_dalpha_from(dec: &SpectralDecomposition, exchange_j: f64, j: usize) -> f64 {
    let v = &dec.eigvecs[j];
    2.0 * exchange_j * v[0] * v[1]
}

pub(crate) fn state_index_check(dec: &SpectralDecomposition, j: usize) -> Result<()> {
    if j >= dec.dim() {
        return Err(Error::BadSite {
            site: j,
            n: dec.dim(),
        });
    }
    Ok(())
}
