//! Browser bindings for the page in `www/`.
//!
//! Every function returns a flat `Vec<f64>` (a `Float64Array` on the JS
//! side). Errors come back as strings.

use wasm_bindgen::prelude::*;
use xxchain::chain::ChainSpec;
use xxchain::dynamics::{time_series, uniform_grid, SeriesKind};
use xxchain::protocols::fidelity_landscape;
use xxchain::spectral::decompose_spec;

fn js_err(e: xxchain::Error) -> JsError {
    JsError::new(&e.to_string())
}

/// Single-impurity spectrum over `alpha_lo..=alpha_hi`. Layout: row-major,
/// one row of `n` ascending energies per α.
#[wasm_bindgen]
pub fn spectrum_curve(
    n: usize,
    alpha_lo: f64,
    alpha_hi: f64,
    step: f64,
) -> Result<Vec<f64>, JsError> {
    let mut out = Vec::new();
    for alpha in uniform_grid(alpha_lo, alpha_hi, step).map_err(js_err)? {
        let dec = decompose_spec(&ChainSpec::single_impurity(n, alpha)).map_err(js_err)?;
        out.extend_from_slice(&dec.energies);
    }
    Ok(out)
}

/// Fidelity, ancilla concurrence and IPR on `0..=t_max`, interleaved as
/// `[F(t0), C(t0), IPR(t0), F(t1), ...]`.
#[wasm_bindgen]
pub fn transfer_trace(
    n: usize,
    alpha: f64,
    mirror: bool,
    t_max: f64,
    dt: f64,
) -> Result<Vec<f64>, JsError> {
    let spec = if mirror {
        ChainSpec::mirror_impurities(n, alpha)
    } else {
        ChainSpec::single_impurity(n, alpha)
    };
    let dec = decompose_spec(&spec).map_err(js_err)?;
    let grid = uniform_grid(0.0, t_max, dt).map_err(js_err)?;
    let series: Vec<Vec<f64>> = [
        SeriesKind::Fidelity,
        SeriesKind::ConcurrenceAN,
        SeriesKind::Ipr,
    ]
    .into_iter()
    .map(|k| time_series(&dec, k, &grid).map(|s| s.real_values().to_vec()))
    .collect::<Result<_, _>>()
    .map_err(js_err)?;
    Ok((0..grid.len())
        .flat_map(|i| series.iter().map(move |s| s[i]))
        .collect())
}

/// Mirror-chain fidelity landscape, row-major in α.
#[wasm_bindgen]
pub fn landscape(
    n: usize,
    alpha_lo: f64,
    alpha_hi: f64,
    alpha_step: f64,
    t_max: f64,
    dt: f64,
) -> Result<Vec<f64>, JsError> {
    let alphas = uniform_grid(alpha_lo, alpha_hi, alpha_step).map_err(js_err)?;
    let ts = uniform_grid(0.0, t_max, dt).map_err(js_err)?;
    let land = fidelity_landscape(n, &alphas, &ts).map_err(js_err)?;
    Ok(land.values.concat())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes() {
        assert_eq!(spectrum_curve(5, 0.0, 1.0, 0.5).unwrap().len(), 15);
        assert_eq!(transfer_trace(6, 0.5, true, 1.0, 0.5).unwrap().len(), 9);
        assert_eq!(landscape(6, 0.5, 0.6, 0.1, 1.0, 0.5).unwrap().len(), 6);
    }
}
