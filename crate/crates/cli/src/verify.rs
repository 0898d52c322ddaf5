//! Oracle cross-checks on demand.

use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use rectgf::amplitudes::{compose_chain, compose_chain_complex};
use rectgf::greens::{green, green_complex};
use rectgf::oracle::{
    fd_eigensolve, spectral_green_infinite_well, transfer_matrix_green, transfer_matrix_scattering,
    truncated_path_sum_complex, FdGrid, SpectralSumConfig,
};
use rectgf::potential::PotentialSpec;
use rectgf::spectra::{find_bound_states, PoleSearchConfig};
use rectgf::Error;

use crate::commands::Source;
use crate::error::CliResult;
use crate::record::{CheckRow, CheckStatus, OutputRecord, Payload, VerifyResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Spectral,
    PathSum,
    TransferMatrix,
    Fd,
}

impl Suite {
    pub const ALL: [Suite; 4] = [
        Suite::Spectral,
        Suite::PathSum,
        Suite::TransferMatrix,
        Suite::Fd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Spectral => "spectral",
            Suite::PathSum => "path-sum",
            Suite::TransferMatrix => "transfer-matrix",
            Suite::Fd => "fd",
        }
    }

    pub fn default_tolerance(self) -> f64 {
        match self {
            Suite::Spectral => 1e-6,
            Suite::PathSum => 1e-8,
            Suite::TransferMatrix => 1e-9,
            Suite::Fd => 1e-4,
        }
    }
}

/// Largest relative error over a set of comparisons.
#[derive(Debug, Default)]
struct Tally {
    worst: f64,
    count: usize,
    notes: Vec<String>,
}

impl Tally {
    fn push(&mut self, a: Complex64, b: Complex64) {
        let scale = a.norm().max(b.norm());
        self.push_error(if scale == 0.0 {
            0.0
        } else {
            (a - b).norm() / scale
        });
    }

    fn push_error(&mut self, err: f64) {
        // NaN must fail the comparison.
        self.worst = if err.is_nan() || self.worst.is_nan() {
            f64::NAN
        } else {
            self.worst.max(err)
        };
        self.count += 1;
    }

    fn into_row(self, suite: Suite, tol: f64, what: &str) -> CheckRow {
        let pass = self.count > 0 && self.worst <= tol;
        // Infinite errors do not survive JSON.
        let worst = if self.worst.is_finite() {
            Some(self.worst)
        } else {
            None
        };
        let mut detail = format!("{} comparisons, {what}", self.count);
        for n in &self.notes {
            detail.push_str("; ");
            detail.push_str(n);
        }
        CheckRow {
            suite: suite.name().into(),
            status: if pass {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            max_error: worst,
            tolerance: tol,
            comparisons: self.count,
            detail,
        }
    }
}

fn skipped(suite: Suite, tol: f64, why: &str) -> CheckRow {
    CheckRow {
        suite: suite.name().into(),
        status: CheckStatus::Skipped,
        max_error: None,
        tolerance: tol,
        comparisons: 0,
        detail: why.into(),
    }
}

fn failed(suite: Suite, tol: f64, err: Error) -> CheckRow {
    CheckRow {
        suite: suite.name().into(),
        status: CheckStatus::Fail,
        max_error: None,
        tolerance: tol,
        comparisons: 0,
        detail: format!("error: {err}"),
    }
}

fn interior_extent(spec: &PotentialSpec) -> f64 {
    let b = spec.breakpoints();
    let span = b[b.len() - 1] - b[0];
    if span > 0.0 {
        span
    } else {
        1.0
    }
}

/// Real test energies: fractions of the height range, or of the box scale
/// c(π/L)² when the finite heights are all equal. The box fractions sit
/// between the levels n² of a hard-walled box.
fn sample_energies(spec: &PotentialSpec) -> Vec<f64> {
    let finite: Vec<f64> = spec.heights().iter().filter_map(|h| h.finite()).collect();
    let bottom = finite.iter().copied().fold(f64::INFINITY, f64::min);
    let top = finite.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if top > bottom {
        [0.137, 0.412, 0.733, 0.951, 1.27]
            .iter()
            .map(|f| bottom + f * (top - bottom))
            .collect()
    } else {
        let unit =
            spec.units().hbar2_over_2m() * (std::f64::consts::PI / interior_extent(spec)).powi(2);
        [0.5, 2.5, 6.1, 12.4, 20.2]
            .iter()
            .map(|f| bottom + f * unit)
            .collect()
    }
}

/// Points inside every finite region.
fn sample_points(spec: &PotentialSpec) -> Vec<f64> {
    let n = spec.n_regions();
    let b = spec.breakpoints();
    let reach = 0.5 * interior_extent(spec);
    let mut xs = Vec::new();
    for r in 0..n {
        if spec.height(r).is_infinite() {
            continue;
        }
        if r == 0 {
            xs.push(b[0] - reach);
        } else if r + 1 == n {
            xs.push(b[n - 2] + reach);
        } else {
            let (x1, x2) = spec.region_bounds(r);
            xs.push(x1 + 0.3 * (x2 - x1));
            xs.push(x1 + 0.8 * (x2 - x1));
        }
    }
    xs
}

fn is_infinite_box(spec: &PotentialSpec) -> bool {
    spec.n_regions() == 3 && spec.height(0).is_infinite() && spec.height(2).is_infinite()
}

fn check_spectral(spec: &PotentialSpec, tol: f64) -> CheckRow {
    let suite = Suite::Spectral;
    if !is_infinite_box(spec) {
        return skipped(suite, tol, "needs a well with two infinite walls");
    }
    let (x1, x2) = spec.region_bounds(1);
    let l = x2 - x1;
    let u = spec.height(1).finite().expect("finite well");
    let unit = spec.units().hbar2_over_2m() * (std::f64::consts::PI / l).powi(2);
    let pairs = [
        (0.5, 0.5),
        (0.2, 0.7),
        (0.9, 0.35),
        (0.13, 0.13),
        (0.61, 0.42),
    ];
    let mut t = Tally::default();
    for s in [0.5, 2.5, 6.1, 12.4, 20.2] {
        let e = u + s * unit;
        for (fi, ff) in pairs {
            let (xi, xf) = (x1 + fi * l, x1 + ff * l);
            let series = spectral_green_infinite_well(
                l,
                xf - x1,
                xi - x1,
                e - u,
                spec.units(),
                &SpectralSumConfig::default(),
            );
            match green(spec, xi, xf, e) {
                Ok(g) => t.push(Complex64::new(series, 0.0), g.value),
                Err(err) => return failed(suite, tol, err),
            }
        }
    }
    t.into_row(suite, tol, "2000-term sum vs closed form")
}

/// ρ = R_left R_right e^{2ikL} of an interior region.
fn round_trip(spec: &PotentialSpec, region: usize, e: Complex64) -> rectgf::Result<Complex64> {
    let k = spec
        .wave_number_complex(region, e)?
        .expect("finite region")
        .value();
    let left = compose_chain_complex(spec, 0, region, e)?.r_minus;
    let right = compose_chain_complex(spec, region, spec.n_regions() - 1, e)?.r_plus;
    let l = spec.region_length(region).expect("interior region");
    Ok(left * right * (2.0 * Complex64::i() * k * l).exp())
}

/// Moves E off the real axis until |ρ| ≤ 0.8 so the series converges.
fn damped_energy(spec: &PotentialSpec, region: usize, e: f64) -> rectgf::Result<(Complex64, f64)> {
    let u = spec.height(region).finite().expect("finite region");
    let l = spec.region_length(region).expect("interior region");
    let mut eta = 0.0;
    let step = 1e-3 * (e - u).abs().max(spec.units().hbar2_over_2m() / (l * l));
    for _ in 0..80 {
        let z = Complex64::new(e, eta);
        let rho = round_trip(spec, region, z)?.norm();
        if rho <= 0.8 {
            return Ok((z, rho));
        }
        eta = if eta == 0.0 { step } else { 2.0 * eta };
    }
    Err(Error::Config(format!(
        "cannot damp the round trip at E = {e}"
    )))
}

fn check_path_sum(spec: &PotentialSpec, tol: f64) -> CheckRow {
    let suite = Suite::PathSum;
    let n = spec.n_regions();
    let Some(region) = (1..n.saturating_sub(1))
        .filter(|&r| !spec.height(r).is_infinite())
        .min_by(|&a, &b| {
            let (ha, hb) = (
                spec.height(a).finite().unwrap(),
                spec.height(b).finite().unwrap(),
            );
            ha.total_cmp(&hb)
        })
    else {
        return skipped(suite, tol, "needs an interior region");
    };
    let (x1, x2) = spec.region_bounds(region);
    let l = x2 - x1;
    let mut t = Tally::default();
    let mut damped = 0;
    for e in sample_energies(spec) {
        let (z, rho) = match damped_energy(spec, region, e) {
            Ok(v) => v,
            Err(err) => return failed(suite, tol, err),
        };
        if z.im != 0.0 {
            damped += 1;
        }
        let bounces = ((1e-13f64).ln() / rho.max(1e-3).ln()).ceil() as usize;
        for (fi, ff) in [(0.3, 0.7), (0.55, 0.2), (0.5, 0.5)] {
            let (xi, xf) = (x1 + fi * l, x1 + ff * l);
            let paths = truncated_path_sum_complex(spec, xi, xf, z, bounces);
            let closed = green_complex(spec, xi, xf, z);
            match (paths, closed) {
                (Ok(a), Ok(b)) => t.push(a, b),
                (Err(err), _) | (_, Err(err)) => return failed(suite, tol, err),
            }
        }
    }
    if damped > 0 {
        t.notes
            .push(format!("{damped} energies moved off the real axis"));
    }
    t.into_row(
        suite,
        tol,
        &format!("path sum vs closed form in region {region}"),
    )
}

fn check_transfer_matrix(spec: &PotentialSpec, tol: f64) -> CheckRow {
    let suite = Suite::TransferMatrix;
    let xs = sample_points(spec);
    let n = spec.n_regions();
    let mut t = Tally::default();
    let mut poles = 0;
    for e in sample_energies(spec) {
        for &xi in &xs {
            for &xf in &xs {
                match green(spec, xi, xf, e) {
                    Ok(g) => match transfer_matrix_green(spec, xi, xf, Complex64::new(e, 0.0)) {
                        Ok(tm) => t.push(g.value, tm),
                        Err(err) => return failed(suite, tol, err),
                    },
                    Err(Error::AtPole { .. }) => poles += 1,
                    Err(err) => return failed(suite, tol, err),
                }
            }
        }
        if let (Ok(chain), Ok(tm)) = (
            compose_chain(spec, 0, n - 1, e),
            transfer_matrix_scattering(spec, e),
        ) {
            for (a, b) in [
                (chain.r_plus, tm.r_plus),
                (chain.t_plus, tm.t_plus),
                (chain.r_minus, tm.r_minus),
                (chain.t_minus, tm.t_minus),
            ] {
                // |R|, |T| <= 1, so the absolute error is the relative one.
                t.push_error((a - b).norm());
            }
        }
    }
    if poles > 0 {
        t.notes.push(format!("{poles} points on a pole skipped"));
    }
    t.into_row(
        suite,
        tol,
        "Green's function and amplitudes vs transfer matrices",
    )
}

fn check_fd(spec: &PotentialSpec, tol: f64) -> CheckRow {
    let suite = Suite::Fd;
    if spec.n_regions() != 3 {
        return skipped(suite, tol, "needs a three-region well");
    }
    let (x1, x2) = spec.region_bounds(1);
    let l = x2 - x1;
    let bottom = spec.height(1).finite().expect("finite well");
    let c = spec.units().hbar2_over_2m();
    // Room for ten decay lengths at the well depth on a finite side.
    let pad = |side: usize| match spec.height(side).finite() {
        Some(u) if u > bottom => Some(4.0 * l + 20.0 * (c / (u - bottom)).sqrt()),
        Some(_) => None,
        None => Some(0.0),
    };
    let (Some(pl), Some(pr)) = (pad(0), pad(2)) else {
        return skipped(suite, tol, "needs a well below both outer heights");
    };
    let box_well = is_infinite_box(spec);
    let max_states = if box_well { 10 } else { 64 };
    let width = l + pl + pr;
    let n_points = ((width / (l / 2000.0)).ceil() as usize + 1).min(200_000);
    let grid = FdGrid {
        max_states,
        ..FdGrid::new(x1 - pl, x2 + pr, n_points)
    };
    let cfg = PoleSearchConfig {
        max_states,
        ..Default::default()
    };
    let (fd, exact) = match (fd_eigensolve(spec, &grid), find_bound_states(spec, &cfg)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(err), _) | (_, Err(err)) => return failed(suite, tol, err),
    };
    let mut t = Tally::default();
    for (a, b) in fd.states.iter().zip(&exact) {
        let scale = (b.energy - bottom).abs().max(f64::MIN_POSITIVE);
        t.push_error(((a.energy - b.energy) / scale).abs());
    }
    let counts_match = fd.states.len() == exact.len();
    if !counts_match {
        t.notes.push(format!(
            "state count {} (fd) vs {} (poles)",
            fd.states.len(),
            exact.len()
        ));
    }
    t.notes.extend(fd.warnings.iter().cloned());
    let mut row = t.into_row(
        suite,
        tol,
        &format!("{n_points}-point grid, energies above the well bottom"),
    );
    if !counts_match {
        row.status = CheckStatus::Fail;
    }
    row
}

pub fn verify(source: &Source, suites: &[Suite], tol: Option<f64>) -> CliResult<OutputRecord> {
    let spec = &source.spec;
    let checks: Vec<CheckRow> = suites
        .iter()
        .map(|&s| {
            let tol = tol.unwrap_or(s.default_tolerance());
            match s {
                Suite::Spectral => check_spectral(spec, tol),
                Suite::PathSum => check_path_sum(spec, tol),
                Suite::TransferMatrix => check_transfer_matrix(spec, tol),
                Suite::Fd => check_fd(spec, tol),
            }
        })
        .collect();
    let passed = checks.iter().all(|c| c.status != CheckStatus::Fail);
    let config = json!({ "suites": suites, "tol": tol });
    Ok(OutputRecord::new(
        source.inputs(config),
        Payload::Verify(VerifyResult { passed, checks }),
    ))
}
