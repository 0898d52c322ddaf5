//! Bound states of a single well from the poles and residues of G.
//!
//! Below both outer heights the two reflection amplitudes have unit modulus,
//! so the pole condition 1 = R₁⁻ R₂⁺ e^{2ikℓ} becomes a condition on a
//! phase that increases strictly with k. Each multiple of 2π is one state.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::greens::WellKernel;
use crate::potential::{Height, PotentialSpec, WaveNumber};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// |f(E_n)| above this is reported as non-convergence.
const POLE_RESIDUAL_LIMIT: f64 = 1e-8;
/// Distance to the top edge, relative to the well depth, below which a
/// state is flagged shallow.
const SHALLOW_FRACTION: f64 = 1e-10;
/// Tolerance of the parity branch test.
const PARITY_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
    None,
}

/// ψ(x) = plus·e^{ik(x - x_ref)} + minus·e^{-ik(x - x_ref)} on one region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionCoefficients {
    pub plus: Complex64,
    pub minus: Complex64,
    pub x_ref: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundState {
    /// 0-based position in energy order.
    pub n: usize,
    pub energy: f64,
    /// `None` inside infinite walls.
    pub k_region: Vec<Option<WaveNumber>>,
    pub coeffs: Vec<RegionCoefficients>,
    pub parity: Parity,
    /// Within 1e-10 of the well depth below the top edge.
    pub shallow: bool,
    /// Unit phase applied to the residue-derived eigenfunction.
    pub phase_rotation: Complex64,
    /// df/dk at the pole.
    pub pole_derivative: Complex64,
    /// |f(E_n)|.
    pub pole_residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PoleSearchConfig {
    /// Lower bracket offset above the well bottom, in energy units.
    pub bracket_epsilon: f64,
    /// Stop bisecting once the phase mismatch is below this; 0 bisects to
    /// the last representable k.
    pub phase_resolution: f64,
    pub max_states: usize,
}

impl Default for PoleSearchConfig {
    fn default() -> Self {
        PoleSearchConfig {
            bracket_epsilon: 1e-12,
            phase_resolution: 0.0,
            max_states: 128,
        }
    }
}

/// Geometry of a three-region well, scaled so that k² = (E - u_well)/c.
struct WellGeometry {
    u_well: f64,
    c: f64,
    length: f64,
    /// (u_outer - u_well)/c, `None` for infinite walls.
    delta_left: Option<f64>,
    delta_right: Option<f64>,
}

impl WellGeometry {
    fn new(spec: &PotentialSpec) -> Result<Self> {
        if spec.n_regions() != 3 {
            return Err(Error::Config(format!(
                "bound-state search needs a 3-region well, got {} regions",
                spec.n_regions()
            )));
        }
        let u_well = spec.height(1).finite().expect("middle region is finite");
        let c = spec.units().hbar2_over_2m();
        let delta = |h: Height| -> Result<Option<f64>> {
            match h {
                Height::Infinite => Ok(None),
                Height::Finite(u) if u > u_well => Ok(Some((u - u_well) / c)),
                Height::Finite(u) => Err(Error::Config(format!(
                    "not a well: outer height {u} is not above the well bottom {u_well}"
                ))),
            }
        };
        Ok(WellGeometry {
            u_well,
            c,
            length: spec.region_length(1).expect("interior"),
            delta_left: delta(spec.height(0))?,
            delta_right: delta(spec.height(2))?,
        })
    }

    /// k at the lower of the two outer heights.
    fn k_top(&self) -> Option<f64> {
        match (self.delta_left, self.delta_right) {
            (None, None) => None,
            (a, b) => Some(
                a.unwrap_or(f64::INFINITY)
                    .min(b.unwrap_or(f64::INFINITY))
                    .sqrt(),
            ),
        }
    }

    fn side_phase(delta: Option<f64>, k: f64) -> f64 {
        match delta {
            None => std::f64::consts::FRAC_PI_2,
            Some(d) => (d - k * k).max(0.0).sqrt().atan2(k),
        }
    }

    /// 2kℓ + arg R₁⁻ + arg R₂⁺, continuous and increasing, -2π at k = 0.
    fn phase(&self, k: f64) -> f64 {
        2.0 * k * self.length
            - 2.0 * Self::side_phase(self.delta_left, k)
            - 2.0 * Self::side_phase(self.delta_right, k)
    }

    fn energy(&self, k: f64) -> f64 {
        self.u_well + self.c * k * k
    }
}

/// All bound states of a three-region well, ordered by energy.
pub fn find_bound_states(spec: &PotentialSpec, cfg: &PoleSearchConfig) -> Result<Vec<BoundState>> {
    if !(cfg.bracket_epsilon > 0.0) {
        return Err(Error::Config("bracket_epsilon must be positive".into()));
    }
    let geo = WellGeometry::new(spec)?;
    let two_pi = 2.0 * std::f64::consts::PI;
    let k_lo = (cfg.bracket_epsilon / geo.c).sqrt();
    let k_top = geo.k_top();
    let count = match k_top {
        Some(kt) if kt <= k_lo => 0,
        Some(kt) => {
            let top = geo.phase(kt);
            if top > 0.0 {
                ((top / two_pi).ceil() as usize).min(cfg.max_states)
            } else {
                0
            }
        }
        None => cfg.max_states,
    };

    let mut states = Vec::with_capacity(count);
    for n in 0..count {
        let target = two_pi * n as f64;
        let mut lo = k_lo;
        let mut hi = match k_top {
            Some(kt) => kt,
            None => (n as f64 + 2.0) * std::f64::consts::PI / geo.length,
        };
        if geo.phase(lo) >= target || geo.phase(hi) < target {
            return Err(Error::NonConvergence {
                n,
                residual: f64::NAN,
            });
        }
        loop {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let g = geo.phase(mid) - target;
            if g.abs() <= cfg.phase_resolution {
                lo = mid;
                hi = mid;
                break;
            }
            if g < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let k = if (geo.phase(hi) - target).abs() <= (geo.phase(lo) - target).abs() {
            hi
        } else {
            lo
        };
        let mut energy = geo.energy(k);
        if let Some(kt) = k_top {
            let top = geo.energy(kt);
            if energy >= top {
                energy = f64::from_bits(top.to_bits() - 1);
            }
        }
        states.push(build_state(spec, &geo, n, energy)?);
    }
    Ok(states)
}

/// dR/dk for R = (k - q)/(k + q), q² = k² - Δ.
fn reflection_derivative(k: Complex64, outer: Option<Complex64>, delta: Option<f64>) -> Complex64 {
    match (outer, delta) {
        (Some(q), Some(d)) => -2.0 * d / (q * (k + q) * (k + q)),
        _ => ZERO,
    }
}

fn pole_derivative(kernel: &WellKernel, geo: &WellGeometry) -> Complex64 {
    let k = kernel.k_well;
    let r1 = kernel.r_left;
    let r2 = kernel.r_right;
    let d1 = reflection_derivative(k, kernel.k_left, geo.delta_left);
    let d2 = reflection_derivative(k, kernel.k_right, geo.delta_right);
    let p2 = (2.0 * I * k * kernel.length()).exp();
    -(d1 * r2 + r1 * d2 + 2.0 * I * kernel.length() * r1 * r2) * p2
}

fn build_state(
    spec: &PotentialSpec,
    geo: &WellGeometry,
    n: usize,
    energy: f64,
) -> Result<BoundState> {
    let kernel = WellKernel::from_spec(spec, Complex64::new(energy, 0.0))?;
    let residual = kernel.pole().norm();
    if !(residual < POLE_RESIDUAL_LIMIT) {
        return Err(Error::NonConvergence { n, residual });
    }
    let fp = pole_derivative(&kernel, geo);
    let norm = 1.0 / fp.norm().sqrt();
    let k = kernel.k_well;
    let p = kernel.phase();
    let r2p2 = kernel.r_right * p * p;

    // Real, positive value (or slope, against a hard wall) just inside x₁.
    let anchor = if kernel.k_left.is_some() {
        1.0 + r2p2
    } else {
        I * k * (1.0 - r2p2)
    };
    let rotation = anchor.conj() / anchor.norm();
    let amp = norm * rotation;

    let b = spec.breakpoints();
    let well = RegionCoefficients {
        plus: amp,
        minus: amp * r2p2,
        x_ref: b[0],
    };
    let left = RegionCoefficients {
        plus: ZERO,
        minus: if kernel.k_left.is_some() {
            amp * (1.0 + r2p2)
        } else {
            ZERO
        },
        x_ref: b[0],
    };
    let right = RegionCoefficients {
        plus: if kernel.k_right.is_some() {
            amp * p * (1.0 + kernel.r_right)
        } else {
            ZERO
        },
        minus: ZERO,
        x_ref: b[1],
    };
    let top = geo.k_top().map(|kt| geo.energy(kt));
    let mut state = BoundState {
        n,
        energy,
        k_region: (0..3)
            .map(|r| spec.wave_number(r, energy))
            .collect::<Result<_>>()?,
        coeffs: vec![left, well, right],
        parity: Parity::None,
        shallow: top.is_some_and(|t| t - energy < SHALLOW_FRACTION * (t - geo.u_well)),
        phase_rotation: rotation,
        pole_derivative: fp,
        pole_residual: residual,
    };
    state.parity = classify_parity(spec, &state);
    Ok(state)
}

fn region_value(spec: &PotentialSpec, state: &BoundState, x: f64, derivative: bool) -> Complex64 {
    let r = spec.region_of(x);
    let Some(k) = state.k_region[r] else {
        return ZERO;
    };
    let k = k.value();
    let c = state.coeffs[r];
    let up = c.plus * (I * k * (x - c.x_ref)).exp();
    let down = c.minus * (-I * k * (x - c.x_ref)).exp();
    if derivative {
        I * k * (up - down)
    } else {
        up + down
    }
}

/// ψ_n(x).
pub fn eigenfunction(spec: &PotentialSpec, state: &BoundState, x: f64) -> Complex64 {
    region_value(spec, state, x, false)
}

/// ψ_n'(x).
pub fn eigenfunction_derivative(spec: &PotentialSpec, state: &BoundState, x: f64) -> Complex64 {
    region_value(spec, state, x, true)
}

/// lim_{E→E_n} (E - E_n) G(x_f, x_i; E), from the analytic pole derivative.
pub fn residue_product(spec: &PotentialSpec, e_n: f64, x_f: f64, x_i: f64) -> Result<Complex64> {
    let geo = WellGeometry::new(spec)?;
    let kernel = WellKernel::from_spec(spec, Complex64::new(e_n, 0.0))?;
    let w = if spec.region_of(x_i) == 1 {
        kernel.numerator(x_f, x_i)?
    } else if spec.region_of(x_f) == 1 {
        kernel.numerator(x_i, x_f)?
    } else {
        return Err(Error::Region {
            x: x_i,
            found: spec.region_of(x_i),
            expected: "one end point must lie in the well (region 1)",
        });
    };
    let de_dk = 2.0 * geo.c * kernel.k_well;
    Ok(w * de_dk / pole_derivative(&kernel, &geo))
}

/// Even/odd label from R₂⁺ e^{ikℓ} = ±1, only for mirror-symmetric wells.
pub fn classify_parity(spec: &PotentialSpec, state: &BoundState) -> Parity {
    if spec.n_regions() != 3 || !spec.is_symmetric() {
        return Parity::None;
    }
    let Ok(kernel) = WellKernel::from_spec(spec, Complex64::new(state.energy, 0.0)) else {
        return Parity::None;
    };
    let s = kernel.r_right * kernel.phase();
    if (s - 1.0).norm() < PARITY_TOLERANCE {
        Parity::Even
    } else if (s + 1.0).norm() < PARITY_TOLERANCE {
        Parity::Odd
    } else {
        Parity::None
    }
}

/// (e^{s w} - 1)/s, accurate for small |s w|.
fn exp_ratio(s: Complex64, w: f64) -> Complex64 {
    let z = s * w;
    if z.norm() < 1e-4 {
        w * (1.0 + z / 2.0 + z * z / 6.0 + z * z * z / 24.0)
    } else {
        (z.exp() - 1.0) / s
    }
}

/// ∫_lo^hi e^{s(x - r)} dx, with either limit possibly infinite.
fn exp_integral(s: Complex64, lo: f64, hi: f64, r: f64) -> Complex64 {
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => (s * (lo - r)).exp() * exp_ratio(s, hi - lo),
        (false, true) => (s * (hi - r)).exp() / s,
        (true, false) => -(s * (lo - r)).exp() / s,
        (false, false) => unreachable!("a region has at least one finite edge"),
    }
}

/// ∫ ψ_a(x) ψ_b*(x) dx over the whole line, region by region.
pub fn overlap(spec: &PotentialSpec, a: &BoundState, b: &BoundState) -> Complex64 {
    let mut total = ZERO;
    for r in 0..spec.n_regions() {
        let (Some(ka), Some(kb)) = (a.k_region[r], b.k_region[r]) else {
            continue;
        };
        let (ka, kb) = (ka.value(), kb.value());
        let (ca, cb) = (a.coeffs[r], b.coeffs[r]);
        let (lo, hi) = spec.region_bounds(r);
        let terms_a = [(ca.plus, 1.0), (ca.minus, -1.0)];
        let terms_b = [(cb.plus, 1.0), (cb.minus, -1.0)];
        for &(c1, s1) in &terms_a {
            for &(c2, s2) in &terms_b {
                if c1 == ZERO || c2 == ZERO {
                    continue;
                }
                // e^{s1 ik_a (x - r_a)} conj(e^{s2 ik_b (x - r_b)}), both refs equal.
                let s = I * (s1 * ka - s2 * kb.conj());
                total += c1 * c2.conj() * exp_integral(s, lo, hi, ca.x_ref);
            }
        }
    }
    total
}

/// ∫|ψ|² dx.
pub fn norm_squared(spec: &PotentialSpec, state: &BoundState) -> f64 {
    overlap(spec, state, state).re
}
