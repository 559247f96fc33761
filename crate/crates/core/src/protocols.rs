//! End-to-end transfer experiments on mirror-impurity chains: the fidelity
//! landscape over (α, t), refocus-time detection from IPR(t), and the
//! exhaustive search for the impurity strength that maximizes the transfer
//! fidelity near t ≈ N/2.

use serde::Serialize;

use crate::chain::ChainSpec;
use crate::dynamics::{
    concurrence_an, time_series, uniform_grid, Propagator, SeriesKind, TimeSeries,
};
use crate::error::{Error, Result};
use crate::par::par_map;
use crate::spectral::decompose_spec;

/// F(α, t) on a rectangular grid; `values[a][k]` belongs to
/// `alpha_grid[a]`, `t_grid[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Landscape {
    pub n_sites: usize,
    pub alpha_grid: Vec<f64>,
    pub t_grid: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

impl Landscape {
    /// (α, t, F) of the global maximum; earliest α, then earliest t, on ties.
    pub fn argmax(&self) -> (f64, f64, f64) {
        let mut best = (self.alpha_grid[0], self.t_grid[0], f64::NEG_INFINITY);
        for (a, row) in self.alpha_grid.iter().zip(&self.values) {
            for (t, &f) in self.t_grid.iter().zip(row) {
                if f > best.2 {
                    best = (*a, *t, f);
                }
            }
        }
        best
    }
}

/// Transfer fidelity |f_N(t)|² of mirror chains for every (α, t).
pub fn fidelity_landscape(n_sites: usize, alpha_grid: &[f64], t_grid: &[f64]) -> Result<Landscape> {
    if alpha_grid.is_empty() {
        return Err(Error::BadGrid("empty alpha grid".into()));
    }
    crate::dynamics::check_grid(t_grid)?;
    let rows = par_map(alpha_grid, |&alpha| -> Result<Vec<f64>> {
        let dec = decompose_spec(&ChainSpec::mirror_impurities(n_sites, alpha))?;
        let s = time_series(&dec, SeriesKind::Fidelity, t_grid)?;
        Ok(s.real_values().to_vec())
    });
    Ok(Landscape {
        n_sites,
        alpha_grid: alpha_grid.to_vec(),
        t_grid: t_grid.to_vec(),
        values: rows.into_iter().collect::<Result<_>>()?,
    })
}

/// Time of the deepest local IPR minimum with `t_lo ≤ t ≤ t_hi`; earliest
/// on ties. A sample is a local minimum when it is strictly below its left
/// neighbour and not above its right neighbour.
pub fn detect_refocus_time(series: &TimeSeries, window: (f64, f64)) -> Result<f64> {
    let (lo, hi) = window;
    let t = &series.t_grid;
    let v = series.real_values();
    let mut best: Option<(f64, f64)> = None;
    for k in 1..t.len().saturating_sub(1) {
        if t[k] < lo || t[k] > hi {
            continue;
        }
        if v[k] < v[k - 1] && v[k] <= v[k + 1] && best.is_none_or(|(_, b)| v[k] < b) {
            best = Some((t[k], v[k]));
        }
    }
    best.map(|(tk, _)| tk)
        .ok_or(Error::NoMinimumInWindow { lo, hi })
}

/// Tunables of the α search. Times are in units of 1/|J|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    /// Search window as fractions of N.
    pub window: (f64, f64),
    pub fidelity_dt: f64,
    pub ipr_dt: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            window: (0.25, 0.75),
            fidelity_dt: 0.05,
            ipr_dt: 0.1,
        }
    }
}

impl SearchOptions {
    pub fn window_for(&self, n_sites: usize) -> (f64, f64) {
        let n = n_sites as f64;
        (self.window.0 * n, self.window.1 * n)
    }
}

/// Default α grid, 0.30 to 1.00 in steps of 0.01.
pub fn default_alpha_grid() -> Vec<f64> {
    (30..=100).map(|k| k as f64 / 100.0).collect()
}

/// Refocus-window results for one impurity strength.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaResult {
    pub alpha: f64,
    /// Deepest IPR minimum in the window, if there is one.
    pub t_refocus: Option<f64>,
    /// Time of the fidelity maximum in the window.
    pub t_max: f64,
    pub f_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransferReport {
    pub n_sites: usize,
    pub alpha_opt: f64,
    pub t_tr: f64,
    pub f_max: f64,
    pub c_max: f64,
    pub per_alpha: Vec<AlphaResult>,
}

/// Evaluates the refocus window of one mirror chain.
pub fn scan_alpha(n_sites: usize, alpha: f64, opts: &SearchOptions) -> Result<AlphaResult> {
    let dec = decompose_spec(&ChainSpec::mirror_impurities(n_sites, alpha))?;
    let (lo, hi) = opts.window_for(n_sites);

    let prop = Propagator::from_first_site(&dec);
    let last = n_sites - 1;
    let mut t_max = lo;
    let mut f_max = f64::NEG_INFINITY;
    for t in uniform_grid(lo, hi, opts.fidelity_dt)? {
        let f = prop.amplitude(last, t).norm_sqr();
        if f > f_max {
            f_max = f;
            t_max = t;
        }
    }

    // One extra sample on each side so window edges can be minima.
    let ipr_grid = uniform_grid((lo - opts.ipr_dt).max(0.0), hi + opts.ipr_dt, opts.ipr_dt)?;
    let ipr = time_series(&dec, SeriesKind::Ipr, &ipr_grid)?;
    let t_refocus = match detect_refocus_time(&ipr, (lo, hi)) {
        Ok(t) => Some(t),
        Err(Error::NoMinimumInWindow { .. }) => None,
        Err(e) => return Err(e),
    };

    Ok(AlphaResult {
        alpha,
        t_refocus,
        t_max,
        f_max,
    })
}

/// Exhaustive search over `alpha_grid` for the strength maximizing the
/// refocus-window fidelity. Ties keep the first grid point.
pub fn optimize_alpha(n_sites: usize, alpha_grid: &[f64]) -> Result<TransferReport> {
    optimize_alpha_with(n_sites, alpha_grid, &SearchOptions::default())
}

pub fn optimize_alpha_with(
    n_sites: usize,
    alpha_grid: &[f64],
    opts: &SearchOptions,
) -> Result<TransferReport> {
    if alpha_grid.is_empty() {
        return Err(Error::BadGrid("empty alpha grid".into()));
    }
    ChainSpec::mirror_impurities(n_sites, alpha_grid[0]).validate()?;
    let per_alpha: Vec<AlphaResult> = par_map(alpha_grid, |&a| scan_alpha(n_sites, a, opts))
        .into_iter()
        .collect::<Result<_>>()?;

    let best = per_alpha
        .iter()
        .fold(None::<&AlphaResult>, |acc, r| match acc {
            Some(b) if b.f_max >= r.f_max => Some(b),
            _ => Some(r),
        })
        .copied()
        .expect("non-empty grid");

    let dec = decompose_spec(&ChainSpec::mirror_impurities(n_sites, best.alpha))?;
    let c_max = concurrence_an(&dec, best.t_max)?;

    Ok(TransferReport {
        n_sites,
        alpha_opt: best.alpha,
        t_tr: best.t_max,
        f_max: best.f_max,
        c_max,
        per_alpha,
    })
}

/// Optimized reports for several chain lengths plus the least-squares line
/// t_tr = slope·N + intercept.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingResult {
    pub reports: Vec<TransferReport>,
    pub slope: Option<f64>,
    pub intercept: Option<f64>,
    /// Pearson correlation of t_tr with N.
    pub correlation: Option<f64>,
}

pub fn scaling_sweep(n_list: &[usize], alpha_grid: &[f64]) -> Result<ScalingResult> {
    scaling_sweep_with(n_list, alpha_grid, &SearchOptions::default())
}

pub fn scaling_sweep_with(
    n_list: &[usize],
    alpha_grid: &[f64],
    opts: &SearchOptions,
) -> Result<ScalingResult> {
    if n_list.is_empty() {
        return Err(Error::BadGrid("empty N list".into()));
    }
    if let Some(&odd) = n_list.iter().find(|&&n| n % 2 == 1) {
        return Err(Error::BadGrid(format!(
            "scaling sweep needs even N, got {odd}"
        )));
    }
    let mut ns = n_list.to_vec();
    ns.sort_unstable();
    ns.dedup();
    let reports = ns
        .iter()
        .map(|&n| optimize_alpha_with(n, alpha_grid, opts))
        .collect::<Result<Vec<_>>>()?;

    let xs: Vec<f64> = reports.iter().map(|r| r.n_sites as f64).collect();
    let ys: Vec<f64> = reports.iter().map(|r| r.t_tr).collect();
    let fit = linear_fit(&xs, &ys);
    Ok(ScalingResult {
        reports,
        slope: fit.map(|f| f.0),
        intercept: fit.map(|f| f.1),
        correlation: fit.and_then(|f| f.2),
    })
}

/// Least-squares (slope, intercept, correlation); `None` with fewer than
/// two distinct abscissas.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<(f64, f64, Option<f64>)> {
    let n = xs.len() as f64;
    if xs.len() < 2 {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let corr = (syy > 0.0).then(|| sxy / (sxx * syy).sqrt());
    Some((slope, my - slope * mx, corr))
}
