//! Exact time evolution in the one-excitation sector.
//!
//! With H = Σ_j E_j |Ψ_j⟩⟨Ψ_j| the amplitude on site n of a state started
//! on site s is ψ_n(t) = Σ_j e^{−iE_j t} Ψ_n^{(j)} Ψ_s^{(j)}.

use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::measures::{ipr_unchecked, wootters_concurrence, AmplitudeVector, TwoQubitDensity};
use crate::spectral::SpectralDecomposition;

/// Evolves a single excitation initially on `init_site` (0-based).
#[derive(Debug, Clone)]
pub struct Propagator<'a> {
    dec: &'a SpectralDecomposition,
    init_site: usize,
    /// Ψ_init^{(j)} for every eigenstate j.
    overlaps: Vec<f64>,
}

impl<'a> Propagator<'a> {
    pub fn new(dec: &'a SpectralDecomposition, init_site: usize) -> Result<Self> {
        let n = dec.dim();
        if init_site >= n {
            return Err(Error::BadSite { site: init_site, n });
        }
        let overlaps = dec.eigvecs.iter().map(|v| v[init_site]).collect();
        Ok(Propagator {
            dec,
            init_site,
            overlaps,
        })
    }

    /// Propagator from site 1 (index 0).
    pub fn from_first_site(dec: &'a SpectralDecomposition) -> Self {
        Self::new(dec, 0).expect("decomposition has at least one site")
    }

    pub fn init_site(&self) -> usize {
        self.init_site
    }

    fn phased_overlaps(&self, t: f64) -> Vec<Complex64> {
        self.dec
            .energies
            .iter()
            .zip(&self.overlaps)
            .map(|(&e, &w)| {
                let (s, c) = (e * t).sin_cos();
                Complex64::new(c * w, -s * w)
            })
            .collect()
    }

    /// Full state at time `t`.
    pub fn state(&self, t: f64) -> AmplitudeVector {
        let n = self.dec.dim();
        let coeffs = self.phased_overlaps(t);
        let mut re = vec![0.0; n];
        let mut im = vec![0.0; n];
        for (c, v) in coeffs.iter().zip(&self.dec.eigvecs) {
            for ((r, i), &x) in re.iter_mut().zip(im.iter_mut()).zip(v) {
                *r += c.re * x;
                *i += c.im * x;
            }
        }
        AmplitudeVector::new(
            re.into_iter()
                .zip(im)
                .map(|(r, i)| Complex64::new(r, i))
                .collect(),
        )
        .at_time(t)
    }

    /// Amplitude ⟨target|e^{−iHt}|init⟩.
    pub fn amplitude(&self, target: usize, t: f64) -> Complex64 {
        self.phased_overlaps(t)
            .iter()
            .zip(&self.dec.eigvecs)
            .map(|(c, v)| c * v[target])
            .sum()
    }

    /// IPR of the evolved state.
    pub fn ipr(&self, t: f64) -> f64 {
        ipr_unchecked(self.state(t).amps.iter().map(|a| a.norm_sqr()))
    }
}

/// ψ(t) for an excitation started on `init_site` (0-based).
pub fn propagate(dec: &SpectralDecomposition, init_site: usize, t: f64) -> Result<AmplitudeVector> {
    Ok(Propagator::new(dec, init_site)?.state(t))
}

/// f_N(t) = ⟨N|e^{−iHt}|1⟩.
pub fn transfer_amplitude(dec: &SpectralDecomposition, t: f64) -> Complex64 {
    Propagator::from_first_site(dec).amplitude(dec.dim() - 1, t)
}

/// Population of the receiving end, |f_N(t)|².
pub fn fidelity(dec: &SpectralDecomposition, t: f64) -> f64 {
    transfer_amplitude(dec, t).norm_sqr()
}

/// Reduced state of the ancilla A and site N when A and site 1 start in
/// (|↑_A↓₁⟩ + |↓_A↑₁⟩)/√2 and only the chain evolves. Basis order
/// {↑_A↑_N, ↑_A↓_N, ↓_A↑_N, ↓_A↓_N}; the all-up energy is taken as zero.
pub fn ancilla_pair_density(f: Complex64) -> Result<TwoQubitDensity> {
    let zero = Complex64::new(0.0, 0.0);
    let p = f.norm_sqr();
    let mut m = Matrix4::from_element(zero);
    m[(0, 0)] = Complex64::new(0.5 * (1.0 - p), 0.0);
    m[(1, 1)] = Complex64::new(0.5 * p, 0.0);
    m[(2, 2)] = Complex64::new(0.5, 0.0);
    m[(1, 2)] = 0.5 * f;
    m[(2, 1)] = 0.5 * f.conj();
    TwoQubitDensity::new(m, (0, 1))
}

/// Concurrence between the ancilla and the last site, C_{A,N}(t).
pub fn concurrence_an(dec: &SpectralDecomposition, t: f64) -> Result<f64> {
    wootters_concurrence(&ancilla_pair_density(transfer_amplitude(dec, t))?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesKind {
    Ipr,
    Fidelity,
    TransferAmplitude,
    ConcurrenceAN,
}

impl SeriesKind {
    pub fn name(self) -> &'static str {
        match self {
            SeriesKind::Ipr => "ipr",
            SeriesKind::Fidelity => "fidelity",
            SeriesKind::TransferAmplitude => "amplitude",
            SeriesKind::ConcurrenceAN => "concurrence",
        }
    }
}

impl std::str::FromStr for SeriesKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "ipr" => Ok(SeriesKind::Ipr),
            "fidelity" => Ok(SeriesKind::Fidelity),
            "amplitude" => Ok(SeriesKind::TransferAmplitude),
            "concurrence" => Ok(SeriesKind::ConcurrenceAN),
            other => Err(format!(
                "unknown kind `{other}` (expected ipr, fidelity, amplitude or concurrence)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SeriesData {
    Real(Vec<f64>),
    Complex(Vec<Complex64>),
}

impl SeriesData {
    pub fn len(&self) -> usize {
        match self {
            SeriesData::Real(v) => v.len(),
            SeriesData::Complex(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn as_real(&self) -> Option<&[f64]> {
        match self {
            SeriesData::Real(v) => Some(v),
            SeriesData::Complex(_) => None,
        }
    }
}

/// Samples of one observable on an ascending time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub kind: SeriesKind,
    pub t_grid: Vec<f64>,
    pub values: SeriesData,
}

impl TimeSeries {
    pub fn real_values(&self) -> &[f64] {
        self.values.as_real().expect("real-valued series kind")
    }
}

/// Checks that a time grid is non-empty, finite and strictly ascending.
pub fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::BadGrid("empty time grid".into()));
    }
    if grid.iter().any(|t| !t.is_finite()) {
        return Err(Error::BadGrid("non-finite time".into()));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::BadGrid("time grid not strictly ascending".into()));
    }
    Ok(())
}

/// Uniform grid lo, lo+step, … up to and including `hi` (within rounding).
pub fn uniform_grid(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !lo.is_finite() || !hi.is_finite() || hi < lo {
        return Err(Error::BadGrid(format!("bad range {lo}:{hi}:{step}")));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|k| lo + k as f64 * step).collect())
}

/// Evaluates `kind` at every grid time, starting from site 1.
pub fn time_series(
    dec: &SpectralDecomposition,
    kind: SeriesKind,
    t_grid: &[f64],
) -> Result<TimeSeries> {
    check_grid(t_grid)?;
    let prop = Propagator::from_first_site(dec);
    let last = dec.dim() - 1;
    let values = match kind {
        SeriesKind::Ipr => SeriesData::Real(t_grid.iter().map(|&t| prop.ipr(t)).collect()),
        SeriesKind::Fidelity => SeriesData::Real(
            t_grid
                .iter()
                .map(|&t| prop.amplitude(last, t).norm_sqr())
                .collect(),
        ),
        SeriesKind::TransferAmplitude => {
            SeriesData::Complex(t_grid.iter().map(|&t| prop.amplitude(last, t)).collect())
        }
        SeriesKind::ConcurrenceAN => SeriesData::Real(
            t_grid
                .iter()
                .map(|&t| wootters_concurrence(&ancilla_pair_density(prop.amplitude(last, t))?))
                .collect::<Result<_>>()?,
        ),
    };
    Ok(TimeSeries {
        kind,
        t_grid: t_grid.to_vec(),
        values,
    })
}
