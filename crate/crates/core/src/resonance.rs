//! Quasi-bound states of a well closed by a tunnelling barrier.
//!
//! Geometry (0-based regions): wall | well | barrier | outside. The amplitude
//! A(E) = T_b⁻ / f̄(E) for a wave entering from the outside peaks where the
//! well would hold a bound state if the barrier were opaque. Peak position is
//! the quasi-energy, the full width at half maximum of |A|² the level width Γ.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::amplitudes::compose_chain;
use crate::error::{Error, Result};
use crate::greens::QuasiBoundParts;
use crate::potential::PotentialSpec;

/// Golden ratio conjugate, (√5 - 1)/2.
const INV_PHI: f64 = 0.618_033_988_749_894_9;
/// Widths narrower than this many ulps of E_qb are not resolvable by
/// bisection on |A|² and fall back to the linearised pole width.
const RESOLVABLE_ULPS: f64 = 1e4;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanConfig {
    pub e_min: f64,
    pub e_max: f64,
    pub n_points: usize,
    pub refine_iterations: usize,
    /// A peak must reach this multiple of the local median of |A|².
    pub prominence: f64,
    /// Number of samples in the median window.
    pub window: usize,
}

impl ScanConfig {
    pub fn new(e_min: f64, e_max: f64, n_points: usize) -> Self {
        ScanConfig {
            e_min,
            e_max,
            n_points,
            refine_iterations: 200,
            prominence: 5.0,
            window: 51,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.e_min.is_finite() && self.e_max.is_finite() && self.e_min < self.e_max) {
            return Err(Error::Config(format!(
                "need e_min < e_max, got {} and {}",
                self.e_min, self.e_max
            )));
        }
        if self.n_points < 2 {
            return Err(Error::Config("n_points must be at least 2".into()));
        }
        if !(self.prominence > 0.0) || self.window == 0 {
            return Err(Error::Config(
                "prominence and window must be positive".into(),
            ));
        }
        Ok(())
    }

    /// The sampled energies.
    pub fn grid(&self) -> Vec<f64> {
        let step = (self.e_max - self.e_min) / (self.n_points - 1) as f64;
        (0..self.n_points)
            .map(|j| {
                if j + 1 == self.n_points {
                    self.e_max
                } else {
                    self.e_min + step * j as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WidthMethod {
    /// Half-height crossings of |A|² located by bisection.
    HalfMaximum,
    /// Γ = 2(1 - |ρ|)/(√|ρ| |dθ/dE|) from the round-trip factor ρ = |ρ|e^{iθ},
    /// used when the peak is narrower than floating point can resolve.
    Linearized,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Resonance {
    /// 0-based, in energy order.
    pub n: usize,
    pub energy: f64,
    pub gamma: f64,
    /// ħ/Γ, only for physical units.
    pub tau: Option<f64>,
    pub peak_height: f64,
    pub width_method: WidthMethod,
    /// A half-height crossing fell outside the scanned range.
    pub truncated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanResult {
    pub resonances: Vec<Resonance>,
    /// (E, |A|²) on the grid.
    pub curve: Vec<(f64, f64)>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BarrierRow {
    pub energy: f64,
    pub transmission: f64,
    pub reflection: f64,
}

/// A(E) = T_b⁻ / f̄(E).
pub fn amplitude_a(spec: &PotentialSpec, e: f64) -> Result<Complex64> {
    Ok(QuasiBoundParts::at(spec, Complex64::new(e, 0.0))?.amplitude())
}

fn amplitude_sq(spec: &PotentialSpec, e: f64) -> Result<f64> {
    amplitude_a(spec, e).map(|a| a.norm_sqr())
}

/// |A|² at a grid point, stepping off a threshold if the point sits on one.
fn sample(spec: &PotentialSpec, e: f64, nudge: f64) -> Result<f64> {
    match amplitude_sq(spec, e) {
        Err(Error::DegenerateThreshold { .. }) => amplitude_sq(spec, e + nudge),
        other => other,
    }
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(|a, b| a.total_cmp(b));
    let m = values.len() / 2;
    if values.len() % 2 == 1 {
        values[m]
    } else {
        0.5 * (values[m - 1] + values[m])
    }
}

/// Maximise `f` on `[a, b]` by golden-section search.
fn golden_max(
    f: impl Fn(f64) -> Result<f64>,
    mut a: f64,
    mut b: f64,
    iterations: usize,
) -> Result<f64> {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    for _ in 0..iterations {
        if !(c > a && d > c && b > d) {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc >= fd { c } else { d })
}

/// Root of `g` between `inside` (g > 0) and `outside` (g ≤ 0).
fn bisect_crossing(
    g: impl Fn(f64) -> Result<f64>,
    mut inside: f64,
    mut outside: f64,
) -> Result<f64> {
    for _ in 0..200 {
        let mid = 0.5 * (inside + outside);
        if mid == inside || mid == outside {
            break;
        }
        if g(mid)? > 0.0 {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    Ok(0.5 * (inside + outside))
}

/// Round-trip factor ρ with f̄ = 1 - ρ.
fn round_trip(spec: &PotentialSpec, e: f64) -> Result<(Complex64, QuasiBoundParts)> {
    let parts = QuasiBoundParts::at(spec, Complex64::new(e, 0.0))?;
    Ok((1.0 - parts.pole(), parts))
}

fn linearized_width(spec: &PotentialSpec, e0: f64, u_well: f64) -> Result<f64> {
    let (rho, parts) = round_trip(spec, e0)?;
    let h = 1e-7 * (e0 - u_well);
    let (up, _) = round_trip(spec, e0 + h)?;
    let (down, _) = round_trip(spec, e0 - h)?;
    let dtheta = (up / down).arg() / (2.0 * h);
    let r_wall = parts.r1.norm();
    let r_barrier = parts.rb_plus.norm();
    let deficit = if r_wall == 1.0 {
        parts.tb_plus.norm_sqr() / (1.0 + r_barrier)
    } else {
        1.0 - r_wall * r_barrier
    };
    Ok(2.0 * deficit / (rho.norm().sqrt() * dtheta.abs()))
}

/// Scan |A|² and extract the trapped resonances.
pub fn scan(spec: &PotentialSpec, cfg: &ScanConfig) -> Result<ScanResult> {
    cfg.validate()?;
    QuasiBoundParts::check(spec)?;
    let u_well = spec.height(1).finite().expect("finite");
    let u_barrier = spec.height(2).finite().expect("finite");
    let grid = cfg.grid();
    let nudge = 1e-9 * (cfg.e_max - cfg.e_min) / (cfg.n_points - 1) as f64;
    let values: Vec<f64> = grid
        .par_iter()
        .map(|&e| sample(spec, e, nudge))
        .collect::<Result<_>>()?;
    let a2 = |e: f64| sample(spec, e, nudge);

    let half_window = cfg.window / 2;
    let mut resonances = Vec::new();
    let mut warnings = Vec::new();
    let last = values.len() - 1;
    for i in 1..last {
        if !(values[i] > values[i - 1] && values[i] > values[i + 1]) {
            continue;
        }
        if !(grid[i] > u_well && grid[i] < u_barrier) {
            continue;
        }
        let lo = i.saturating_sub(half_window);
        let hi = (i + half_window).min(last);
        let mut window = values[lo..=hi].to_vec();
        if values[i] < cfg.prominence * median(&mut window) {
            continue;
        }

        let refined = golden_max(a2, grid[i - 1], grid[i + 1], cfg.refine_iterations)?;
        let refined_value = a2(refined)?;
        let (e0, peak) = if refined_value >= values[i] {
            (refined, refined_value)
        } else {
            (grid[i], values[i])
        };
        let half = 0.5 * peak;
        let g = |e: f64| a2(e).map(|v| v - half);

        let mut right = None;
        let mut j = i + 1;
        while j <= last {
            if values[j] <= half {
                right = Some(bisect_crossing(g, e0, grid[j])?);
                break;
            }
            j += 1;
        }
        let mut left = None;
        let mut j = i;
        while j > 0 {
            j -= 1;
            if values[j] <= half {
                left = Some(bisect_crossing(g, e0, grid[j])?);
                break;
            }
        }
        let truncated = left.is_none() || right.is_none();
        let fwhm = match (left, right) {
            (Some(l), Some(r)) => r - l,
            (Some(l), None) => 2.0 * (e0 - l),
            (None, Some(r)) => 2.0 * (r - e0),
            (None, None) => cfg.e_max - cfg.e_min,
        };
        if truncated {
            warnings.push(format!(
                "peak near E = {e0:e} is truncated: a half-height crossing lies outside [{}, {}]",
                cfg.e_min, cfg.e_max
            ));
        }
        let resolvable = RESOLVABLE_ULPS * f64::EPSILON * e0.abs().max(f64::MIN_POSITIVE);
        let (gamma, method) = if fwhm > resolvable {
            (fwhm, WidthMethod::HalfMaximum)
        } else {
            (linearized_width(spec, e0, u_well)?, WidthMethod::Linearized)
        };
        resonances.push(Resonance {
            n: 0,
            energy: e0,
            gamma,
            tau: spec.units().hbar().map(|hbar| hbar / gamma),
            peak_height: peak,
            width_method: method,
            truncated,
        });
    }
    resonances.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    for (n, r) in resonances.iter_mut().enumerate() {
        r.n = n;
    }
    Ok(ScanResult {
        resonances,
        curve: grid.into_iter().zip(values).collect(),
        warnings,
    })
}

/// Trapped resonances of a quasi-bound spec, sorted by energy.
pub fn scan_resonances(spec: &PotentialSpec, cfg: &ScanConfig) -> Result<Vec<Resonance>> {
    scan(spec, cfg).map(|s| s.resonances)
}

/// |T_b⁺|² and |R_b⁺|² of the barrier (regions 1..=3) on a grid.
pub fn barrier_coefficients(spec: &PotentialSpec, grid: &[f64]) -> Result<Vec<BarrierRow>> {
    QuasiBoundParts::check(spec)?;
    grid.par_iter()
        .map(|&e| {
            let b = compose_chain(spec, 1, 3, e)?;
            Ok(BarrierRow {
                energy: e,
                transmission: b.t_plus.norm_sqr(),
                reflection: b.r_plus.norm_sqr(),
            })
        })
        .collect()
}

/// Reflection amplitude of the whole potential for incidence from the right.
pub fn whole_reflection(spec: &PotentialSpec, e: f64) -> Result<Complex64> {
    Ok(compose_chain(spec, 0, spec.n_regions() - 1, e)?.r_minus)
}
