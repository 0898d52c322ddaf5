mod common;

use num_complex::Complex64;
use rectgf::amplitudes::interface_amplitudes;
use rectgf::greens::{green, green_three_region};
use rectgf::oracle::{
    fd_eigensolve, path_terms, spectral_green_infinite_well, transfer_matrix_green,
    truncated_path_sum, truncated_path_sum_complex, FdGrid, SpectralSumConfig,
};
use rectgf::potential::UnitSystem;
use rectgf::presets;
use rectgf::spectra::{eigenfunction, find_bound_states, PoleSearchConfig};

use common::{asym, rel};

const I: Complex64 = Complex64::new(0.0, 1.0);
const PI: f64 = std::f64::consts::PI;

#[test]
fn zeroth_order_path_sum_is_the_first_bracket() {
    let spec = asym();
    let (xi, xf, e) = (0.4, 1.3, 14.0f64);
    let k = Complex64::new(e.sqrt(), 0.0);
    let r1 = interface_amplitudes(&spec, 0, e.into()).unwrap().r_minus;
    let r2 = interface_amplitudes(&spec, 1, e.into()).unwrap().r_plus;
    let (x1, x2, l) = (0.0, 2.0, 2.0);
    let e_ = |z: Complex64| z.exp();
    let bracket = e_(I * k * (xf - xi))
        + e_(-I * k * (x1 - xi))
            * r1
            * (e_(I * k * (xf - x1)) + r2 * e_(I * k * l) * e_(-I * k * (xf - x2)))
        + e_(I * k * (x2 - xi))
            * r2
            * (e_(-I * k * (xf - x2)) + r1 * e_(I * k * l) * e_(I * k * (xf - x1)));
    let sum: Complex64 = path_terms(&spec, xi, xf, e.into(), 0)
        .unwrap()
        .iter()
        .map(|t| t.contribution())
        .sum();
    assert!(rel(sum, bracket) < 1e-14);
    assert_eq!(path_terms(&spec, xi, xf, e.into(), 0).unwrap().len(), 5);
}

#[test]
fn path_sum_reaches_the_closed_form() {
    let spec = asym();
    for e in [11.0, 14.5, 18.0] {
        let closed = green_three_region(&spec, 0.3, 1.7, e).unwrap().value;
        let paths = truncated_path_sum(&spec, 0.3, 1.7, e, 60).unwrap();
        assert!(rel(paths, closed) < 1e-8);
    }
}

#[test]
fn path_sum_converges_below_both_heights_off_the_axis() {
    let spec = asym();
    let e = Complex64::new(6.0, 0.4);
    let paths = truncated_path_sum_complex(&spec, 0.3, 1.7, e, 200).unwrap();
    let tm = transfer_matrix_green(&spec, 0.3, 1.7, e).unwrap();
    assert!(rel(paths, tm) < 1e-10);
}

#[test]
fn spectral_tail_halves_with_twice_the_terms() {
    let u = UnitSystem::natural();
    let (xf, xi, e) = (0.35, 0.35, 15.0);
    let exact = green_three_region(&presets::infinite_well(), xi, xf, e)
        .unwrap()
        .value
        .re;
    let plain = |n| {
        let cfg = SpectralSumConfig {
            n_terms: n,
            accelerate: false,
        };
        (spectral_green_infinite_well(1.0, xf, xi, e, &u, &cfg) - exact).abs()
    };
    let ratio = plain(1000) / plain(2000);
    assert!((ratio - 2.0).abs() < 0.2, "{ratio}");
    let fast = spectral_green_infinite_well(1.0, xf, xi, e, &u, &SpectralSumConfig::default());
    assert!((fast - exact).abs() < 1e-6 * exact.abs());
}

#[test]
fn transfer_matrix_green_agrees_with_the_dispatcher() {
    for spec in [asym(), presets::square_well(), presets::gaas_fig7()] {
        let b = spec.breakpoints().to_vec();
        let span = b[b.len() - 1] - b[0];
        let scale = spec.height(1).finite().unwrap() + 0.3 * (spec.min_finite_height() + 1.0);
        for (a, c) in [(0.2, 0.7), (-0.1, 0.5), (0.9, 1.2)] {
            let (xi, xf) = (b[0] + a * span, b[0] + c * span);
            let e = if spec.units().is_physical() {
                0.0173
            } else {
                scale + 0.37
            };
            let g = green(&spec, xi, xf, e).unwrap().value;
            let t = transfer_matrix_green(&spec, xi, xf, e.into()).unwrap();
            assert!(rel(g, t) < 1e-9, "{xi} {xf}: {g} vs {t}");
        }
    }
}

#[test]
fn fd_infinite_well_converges_quadratically() {
    let spec = presets::infinite_well();
    let err = |n| {
        let sol = fd_eigensolve(&spec, &FdGrid::new(0.0, 1.0, n)).unwrap();
        (sol.states[0].energy - PI * PI).abs()
    };
    let ratio = err(401) / err(801);
    assert!((ratio - 4.0).abs() < 0.05, "{ratio}");
}

#[test]
fn fd_square_well_counts_and_shapes() {
    let spec = presets::square_well();
    let exact = find_bound_states(&spec, &PoleSearchConfig::default()).unwrap();
    let sol = fd_eigensolve(&spec, &FdGrid::new(-8.0, 8.0, 20_000)).unwrap();
    assert_eq!(sol.states.len(), exact.len());
    let h = sol.x[1] - sol.x[0];
    for (fd, st) in sol.states.iter().zip(&exact) {
        let inner: f64 = sol
            .x
            .iter()
            .zip(&fd.psi)
            .map(|(&x, &p)| p * eigenfunction(&spec, st, x).re)
            .sum::<f64>()
            * h;
        assert!(inner.abs() > 0.99999, "{inner}");
    }
}
