//! Independent reference computations checked against the library.

use num_complex::Complex64;
use xxchain::chain::{ChainSpec, Impurity};
use xxchain::dynamics::{propagate, transfer_amplitude};
use xxchain::measures::{
    c12_from_energy_derivative, ipr_real, nn_concurrence_closed_form, AmplitudeVector,
};
use xxchain::oracle::{equivalence_suite, full_evolve, FullState};
use xxchain::spectral::{decompose_spec, denergy_dalpha};

/// Dense hopping matrix written out directly: diagonal h, off-diagonal J
/// with the first bond scaled by `a_first` and the last by `a_last`.
fn hopping(n: usize, j: f64, h: f64, a_first: f64, a_last: f64) -> Vec<Vec<f64>> {
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        m[i][i] = h;
    }
    for b in 0..n - 1 {
        let mut c = j;
        if b == 0 {
            c *= a_first;
        }
        if b == n - 2 {
            c *= a_last;
        }
        m[b][b + 1] = c;
        m[b + 1][b] = c;
    }
    m
}

/// ψ' = −iHψ.
fn deriv(m: &[Vec<f64>], psi: &[Complex64]) -> Vec<Complex64> {
    m.iter()
        .map(|row| {
            let hpsi: Complex64 = row.iter().zip(psi).map(|(&a, &p)| p * a).sum();
            Complex64::new(hpsi.im, -hpsi.re)
        })
        .collect()
}

fn rk4(m: &[Vec<f64>], init: usize, t: f64, dt: f64) -> Vec<Complex64> {
    let n = m.len();
    let mut psi = vec![Complex64::new(0.0, 0.0); n];
    psi[init] = Complex64::new(1.0, 0.0);
    let steps = (t / dt).round() as usize;
    let axpy = |x: &[Complex64], k: &[Complex64], s: f64| -> Vec<Complex64> {
        x.iter().zip(k).map(|(a, b)| a + b * s).collect()
    };
    for _ in 0..steps {
        let k1 = deriv(m, &psi);
        let k2 = deriv(m, &axpy(&psi, &k1, dt / 2.0));
        let k3 = deriv(m, &axpy(&psi, &k2, dt / 2.0));
        let k4 = deriv(m, &axpy(&psi, &k3, dt));
        for i in 0..n {
            psi[i] += (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (dt / 6.0);
        }
    }
    psi
}

#[test]
fn spectral_propagation_matches_rk4() {
    let cases = [
        (12, 0.4, 1.0, 0, 7.5),
        (31, 0.6, 0.6, 0, 18.5),
        (50, 1.0, 0.3, 4, 10.0),
        (20, 3.0, 1.0, 19, 6.0),
    ];
    for (n, a_first, a_last, init, t) in cases {
        let m = hopping(n, -1.0, 0.0, a_first, a_last);
        let reference = rk4(&m, init, t, 1e-3);

        let mut spec = ChainSpec::homogeneous(n);
        spec.impurities = vec![
            Impurity {
                bond: 1,
                alpha: a_first,
            },
            Impurity {
                bond: n - 1,
                alpha: a_last,
            },
        ];
        let dec = decompose_spec(&spec).unwrap();
        let psi = propagate(&dec, init, t).unwrap();
        let err = psi
            .amps
            .iter()
            .zip(&reference)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-6, "N={n} α={a_first} t={t}: err {err:e}");
    }
}

#[test]
fn field_enters_as_a_phase() {
    let m = hopping(10, -1.0, 0.7, 0.5, 1.0);
    let reference = rk4(&m, 0, 4.0, 1e-3);
    let dec = decompose_spec(&ChainSpec::single_impurity(10, 0.5).with_field(0.7)).unwrap();
    let psi = propagate(&dec, 0, 4.0).unwrap();
    for (a, b) in psi.amps.iter().zip(&reference) {
        assert!((a - b).norm() < 1e-6);
    }
}

#[test]
fn energy_derivative_matches_finite_difference() {
    let n = 60;
    let d = 1e-5;
    for alpha in [0.2, 0.7, 1.3, 2.5] {
        let lo = decompose_spec(&ChainSpec::single_impurity(n, alpha - d)).unwrap();
        let hi = decompose_spec(&ChainSpec::single_impurity(n, alpha + d)).unwrap();
        for j in [0, 1, 7, 29, 30, 45, n - 2, n - 1] {
            let fd = (hi.energies[j] - lo.energies[j]) / (2.0 * d);
            let an = denergy_dalpha(&ChainSpec::single_impurity(n, alpha), j).unwrap();
            assert!(
                (fd - an).abs() <= 1e-6 * an.abs().max(1e-3),
                "α={alpha} j={j}: fd {fd} vs {an}"
            );
        }
    }
}

#[test]
fn homogeneous_eigenvectors_are_standing_waves() {
    let n = 200;
    let dec = decompose_spec(&ChainSpec::homogeneous(n)).unwrap();
    let k = std::f64::consts::PI / (n + 1) as f64;
    let norm = (2.0 / (n + 1) as f64).sqrt();
    for (idx, v) in dec.eigvecs.iter().enumerate() {
        // J = −1 puts the longest wavelength at the bottom.
        let m = (idx + 1) as f64;
        let exact: Vec<f64> = (1..=n).map(|s| norm * (k * m * s as f64).sin()).collect();
        let sign = if exact[0] * v[0] >= 0.0 { 1.0 } else { -1.0 };
        let err = v
            .iter()
            .zip(&exact)
            .map(|(a, b)| (a - sign * b).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-10, "state {idx}: {err:e}");
        assert!((dec.energies[idx] + 2.0 * (k * m).cos()).abs() < 1e-12);
    }
    // Σ sin⁴ = 3(N+1)/8 away from j = (N+1)/2.
    let ipr = ipr_real(&dec.eigvecs[10]);
    assert!((ipr - 2.0 * (n + 1) as f64 / 3.0).abs() < 1.0, "{ipr}");
}

/// Semi-infinite chain with first bond α > 1: bound state Ψ₁ = A,
/// Ψ_n = B q^{n−2} (n ≥ 2), q² = 1/(α²−1), |E| = α²/√(α²−1).
fn bound_state(alpha: f64) -> (f64, f64) {
    let q = (1.0 / (alpha * alpha - 1.0)).sqrt();
    let ratio = 1.0 / (alpha * q);
    let b2 = 1.0 / (ratio * ratio + 1.0 / (1.0 - q * q));
    let c12 = 2.0 * ratio * b2;
    (alpha * alpha / (alpha * alpha - 1.0).sqrt(), c12)
}

#[test]
fn bound_state_matches_semi_infinite_chain() {
    for alpha in [1.6, 2.0, 3.0] {
        let spec = ChainSpec::single_impurity(200, alpha);
        let dec = decompose_spec(&spec).unwrap();
        let (e, c12) = bound_state(alpha);
        assert!((dec.energies[0] + e).abs() < 1e-9, "α={alpha}");
        assert!((dec.energies[199] - e).abs() < 1e-9);
        let v = AmplitudeVector::from_real(&dec.eigvecs[0]);
        assert!((nn_concurrence_closed_form(&v, 0).unwrap() - c12).abs() < 1e-9);
        assert!((c12_from_energy_derivative(&spec, 0).unwrap() - c12).abs() < 1e-9);
    }
    let (_, c) = bound_state(3.0);
    assert!((c - 0.928).abs() < 5e-4, "{c}");
}

#[test]
fn full_space_agrees_at_n8() {
    let rows = equivalence_suite(&[8], &[0.4], &[1.0, 5.0, 20.0]).unwrap();
    assert_eq!(rows.len(), 3);
    for r in &rows {
        assert!(r.passes(), "{r:?}");
        assert!(r.amplitude_error < 1e-8 && r.concurrence_error < 1e-8);
    }
}

#[test]
fn full_space_mirror_chain() {
    let spec = ChainSpec::mirror_impurities(7, 0.5);
    let dec = decompose_spec(&spec).unwrap();
    let start = FullState::from_sector(&AmplitudeVector::delta(7, 0));
    for t in [0.5, 3.0, 11.0] {
        let full = full_evolve(&spec, &start, t).unwrap();
        let f = full.sector_amplitudes(7)[6];
        assert!((f - transfer_amplitude(&dec, t)).norm() < 1e-8);
        assert!((full.norm_sqr() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn reversed_impurity_gives_same_transfer_modulus() {
    let n = 40;
    let mut spec = ChainSpec::homogeneous(n);
    spec.impurities.push(Impurity {
        bond: n - 1,
        alpha: 0.4,
    });
    let right = decompose_spec(&spec).unwrap();
    let left = decompose_spec(&ChainSpec::single_impurity(n, 0.4)).unwrap();
    for t in [3.0, 20.0, 47.0] {
        let a = transfer_amplitude(&left, t).norm();
        let b = transfer_amplitude(&right, t).norm();
        assert!((a - b).abs() < 1e-12);
    }
}
