//! Energy-domain Green's functions G(x_f, x_i; E).
//!
//! G solves `[E - H(x_f)] G = δ(x_f - x_i)` with outgoing or decaying
//! behaviour at both ends, so ∂G/∂x_f jumps by 2m/ħ² at the source.
//!
//! Three evaluators are provided: the closed form for a single well
//! ([`WellKernel`]), the quasi-bound four-region form and a general solver
//! for any number of regions that sums the scattering-path families through
//! a small linear system.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::amplitudes::{compose_chain_complex, interface_amplitudes, LocalAmplitudes};
use crate::error::{Error, Result};
use crate::potential::{Height, PotentialSpec};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Default relative threshold for flagging evaluations close to a pole.
pub const POLE_PROXIMITY: f64 = 1e-12;

/// One evaluation of G.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GreenValue {
    pub value: Complex64,
    pub energy: f64,
    pub x_i: f64,
    pub x_f: f64,
    /// The pole function at `energy`.
    pub pole: Complex64,
    /// Natural size of the pole function's subtracted term.
    pub pole_scale: f64,
}

impl GreenValue {
    pub fn near_pole(&self) -> bool {
        self.near_pole_with(POLE_PROXIMITY)
    }

    pub fn near_pole_with(&self, relative: f64) -> bool {
        self.pole.norm() < relative * self.pole_scale
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PoleKind {
    AsymWell,
    SquareWell,
    InfiniteWell,
    QuasiBound,
    General,
}

/// The denominator whose real zeros are the bound states of a spec.
#[derive(Debug, Clone, Copy)]
pub struct PoleFunction<'a> {
    pub kind: PoleKind,
    spec: &'a PotentialSpec,
}

impl<'a> PoleFunction<'a> {
    pub fn for_spec(spec: &'a PotentialSpec) -> Self {
        let h = spec.heights();
        let kind = match spec.n_regions() {
            3 if h[0].is_infinite() && h[2].is_infinite() => PoleKind::InfiniteWell,
            3 if spec.is_symmetric() => PoleKind::SquareWell,
            3 => PoleKind::AsymWell,
            4 if !h[1].is_infinite() && !h[2].is_infinite() => PoleKind::QuasiBound,
            _ => PoleKind::General,
        };
        PoleFunction { kind, spec }
    }

    pub fn eval(&self, e: Complex64) -> Result<Complex64> {
        match self.kind {
            PoleKind::AsymWell | PoleKind::SquareWell | PoleKind::InfiniteWell => {
                Ok(WellKernel::from_spec(self.spec, e)?.pole())
            }
            PoleKind::QuasiBound => Ok(QuasiBoundParts::at(self.spec, e)?.pole()),
            PoleKind::General => {
                let sys = FamilySystem::assemble(self.spec, e)?;
                Ok(sys.matrix.determinant())
            }
        }
    }
}

/// One explicit scattering path: weight W and phase S/ħ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PathTerm {
    pub weight: Complex64,
    pub action_phase: Complex64,
}

impl PathTerm {
    pub fn contribution(&self) -> Complex64 {
        self.weight * (I * self.action_phase).exp()
    }
}

/// Closed-form Green's function of one well `[x_left, x_right)` bounded by
/// two reflectors.
///
/// Built from amplitudes rather than from a spec so that either reflector
/// can be replaced, e.g. by a composite barrier or by nothing at all.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WellKernel {
    pub x_left: f64,
    pub x_right: f64,
    /// `None` inside an infinite wall.
    pub k_left: Option<Complex64>,
    pub k_well: Complex64,
    pub k_right: Option<Complex64>,
    /// Reflection back into the well at `x_left` (R₁⁻).
    pub r_left: Complex64,
    /// Reflection back into the well at `x_right` (R₂⁺).
    pub r_right: Complex64,
    /// Transmission from the well into the left region (T₁⁻).
    pub t_left: Complex64,
    /// Transmission from the well into the right region (T₂⁺).
    pub t_right: Complex64,
    /// ħ²/m.
    pub hbar2_over_m: f64,
}

impl WellKernel {
    pub fn from_spec(spec: &PotentialSpec, e: Complex64) -> Result<Self> {
        if spec.n_regions() != 3 {
            return Err(Error::Config(format!(
                "closed-form well needs 3 regions, got {}",
                spec.n_regions()
            )));
        }
        let k_well = spec
            .wave_number_complex(1, e)?
            .expect("middle region is finite");
        if k_well.is_zero() {
            return Err(Error::DegenerateThreshold {
                k_left: "-".into(),
                k_right: "0".into(),
            });
        }
        let left = interface_amplitudes(spec, 0, e)?;
        let right = interface_amplitudes(spec, 1, e)?;
        let b = spec.breakpoints();
        Ok(WellKernel {
            x_left: b[0],
            x_right: b[1],
            k_left: spec.wave_number_complex(0, e)?.map(|k| k.value()),
            k_well: k_well.value(),
            k_right: spec.wave_number_complex(2, e)?.map(|k| k.value()),
            r_left: left.r_minus,
            r_right: right.r_plus,
            t_left: left.t_minus,
            t_right: right.t_plus,
            hbar2_over_m: 2.0 * spec.units().hbar2_over_2m(),
        })
    }

    pub fn length(&self) -> f64 {
        self.x_right - self.x_left
    }

    /// e^{ikℓ}.
    pub fn phase(&self) -> Complex64 {
        (I * self.k_well * self.length()).exp()
    }

    /// f = 1 - R₁⁻ R₂⁺ e^{2ikℓ}.
    pub fn pole(&self) -> Complex64 {
        let p = self.phase();
        1.0 - self.r_left * self.r_right * p * p
    }

    /// Well solution satisfying the right boundary condition.
    pub fn right_solution(&self, x: f64) -> Complex64 {
        let k = self.k_well;
        (I * k * (x - self.x_left)).exp()
            + self.r_right * self.phase() * (I * k * (self.x_right - x)).exp()
    }

    /// Well solution satisfying the left boundary condition.
    pub fn left_solution(&self, x: f64) -> Complex64 {
        let k = self.k_well;
        (-I * k * (x - self.x_left)).exp() + self.r_left * (I * k * (x - self.x_left)).exp()
    }

    /// The kernel of the reflected problem x -> -x.
    pub fn mirrored(&self) -> Self {
        WellKernel {
            x_left: -self.x_right,
            x_right: -self.x_left,
            k_left: self.k_right,
            k_well: self.k_well,
            k_right: self.k_left,
            r_left: self.r_right,
            r_right: self.r_left,
            t_left: self.t_right,
            t_right: self.t_left,
            hbar2_over_m: self.hbar2_over_m,
        }
    }

    /// G·f, the residue-carrying numerator, for a source inside the well.
    pub fn numerator(&self, x_f: f64, x_i: f64) -> Result<Complex64> {
        if !(self.x_left <= x_i && x_i <= self.x_right) {
            return Err(Error::Region {
                x: x_i,
                found: if x_i < self.x_left { 0 } else { 2 },
                expected: "the source must lie inside the well",
            });
        }
        let k = self.k_well;
        if x_f < self.x_left {
            return self.mirrored().numerator(-x_f, -x_i);
        }
        if x_f < self.x_right {
            let (hi, lo) = if x_f >= x_i { (x_f, x_i) } else { (x_i, x_f) };
            return Ok(
                self.right_solution(hi) * self.left_solution(lo) / (self.hbar2_over_m * I * k)
            );
        }
        let Some(k3) = self.k_right else {
            return Ok(ZERO);
        };
        Ok(self.t_right
            * self.phase()
            * (I * k3 * (x_f - self.x_right)).exp()
            * self.left_solution(x_i)
            / (self.hbar2_over_m * I * k3.sqrt() * k.sqrt()))
    }

    pub fn green(&self, x_f: f64, x_i: f64) -> Result<Complex64> {
        let f = self.pole();
        if f == ZERO {
            return Err(Error::AtPole { energy: f64::NAN });
        }
        Ok(self.numerator(x_f, x_i)? / f)
    }
}

fn well_green(
    spec: &PotentialSpec,
    x_i: f64,
    x_f: f64,
    e: Complex64,
) -> Result<(Complex64, WellKernel)> {
    let kernel = WellKernel::from_spec(spec, e)?;
    let ri = spec.region_of(x_i);
    let rf = spec.region_of(x_f);
    let w = if ri == 1 {
        kernel.numerator(x_f, x_i)?
    } else if rf == 1 {
        kernel.numerator(x_i, x_f)?
    } else {
        return Err(Error::Region {
            x: x_i,
            found: ri,
            expected: "one end point must lie in the well (region 1)",
        });
    };
    let f = kernel.pole();
    if f == ZERO {
        return Err(Error::AtPole { energy: e.re });
    }
    Ok((w / f, kernel))
}

/// Closed-form G of a three-region spec with at least one end point in the
/// well.
pub fn green_three_region(spec: &PotentialSpec, x_i: f64, x_f: f64, e: f64) -> Result<GreenValue> {
    let (value, kernel) = well_green(spec, x_i, x_f, Complex64::new(e, 0.0))?;
    Ok(GreenValue {
        value,
        energy: e,
        x_i,
        x_f,
        pole: kernel.pole(),
        pole_scale: (kernel.r_left * kernel.r_right).norm(),
    })
}

/// Complex-energy version of [`green_three_region`].
pub fn green_three_region_complex(
    spec: &PotentialSpec,
    x_i: f64,
    x_f: f64,
    e: Complex64,
) -> Result<Complex64> {
    well_green(spec, x_i, x_f, e).map(|(g, _)| g)
}

/// Family amplitudes of an n-region spec. Unknowns per interior region r:
/// α_r, the right-moving amplitude leaving b[r-1], and β_r, the left-moving
/// amplitude leaving b[r].
struct FamilySystem {
    local: LocalAmplitudes,
    /// e^{ik_r ℓ_r} for interior regions, 1 otherwise.
    phase: Vec<Complex64>,
    matrix: DMatrix<Complex64>,
    n: usize,
}

impl FamilySystem {
    fn alpha(r: usize) -> usize {
        2 * (r - 1)
    }

    fn beta(r: usize) -> usize {
        2 * (r - 1) + 1
    }

    fn interior(&self, r: usize) -> bool {
        r >= 1 && r + 1 < self.n
    }

    fn assemble(spec: &PotentialSpec, e: Complex64) -> Result<Self> {
        let n = spec.n_regions();
        let local = LocalAmplitudes::at(spec, e)?;
        let phase: Vec<Complex64> = (0..n)
            .map(|r| match (spec.region_length(r), local.k[r]) {
                (Some(len), Some(k)) => (I * k * len).exp(),
                _ => Complex64::new(1.0, 0.0),
            })
            .collect();
        let m = 2 * n.saturating_sub(2);
        let mut sys = FamilySystem {
            local,
            phase,
            matrix: DMatrix::identity(m, m),
            n,
        };
        for j in 0..n - 1 {
            let st = sys.local.steps[j];
            // α_{j+1} = T⁺ I_L + R⁻ I_R and β_j = R⁺ I_L + T⁻ I_R
            let mut rows = Vec::new();
            if sys.interior(j + 1) {
                rows.push((Self::alpha(j + 1), st.t_plus, st.r_minus));
            }
            if sys.interior(j) {
                rows.push((Self::beta(j), st.r_plus, st.t_minus));
            }
            for (row, from_left, from_right) in rows {
                if sys.interior(j) {
                    sys.matrix[(row, Self::alpha(j))] -= from_left * sys.phase[j];
                }
                if sys.interior(j + 1) {
                    sys.matrix[(row, Self::beta(j + 1))] -= from_right * sys.phase[j + 1];
                }
            }
        }
        Ok(sys)
    }
}

fn family_green(
    spec: &PotentialSpec,
    x_i: f64,
    x_f: f64,
    e: Complex64,
) -> Result<(Complex64, Complex64)> {
    let sys = FamilySystem::assemble(spec, e)?;
    let n = sys.n;
    let b = spec.breakpoints();
    let s = spec.region_of(x_i);
    let t = spec.region_of(x_f);
    let det = sys.matrix.determinant();
    let (Some(ks), Some(kt)) = (sys.local.k[s], sys.local.k[t]) else {
        return Ok((ZERO, det));
    };
    if ks == ZERO || kt == ZERO {
        return Err(Error::DegenerateThreshold {
            k_left: ks.to_string(),
            k_right: kt.to_string(),
        });
    }

    let src_left = |j: usize| {
        if s == j {
            (I * ks * (b[j] - x_i)).exp()
        } else {
            ZERO
        }
    };
    let src_right = |j: usize| {
        if s == j + 1 {
            (I * ks * (x_i - b[j])).exp()
        } else {
            ZERO
        }
    };

    let m = sys.matrix.nrows();
    let mut rhs = DVector::<Complex64>::zeros(m);
    for j in 0..n - 1 {
        let st = sys.local.steps[j];
        if sys.interior(j + 1) {
            rhs[FamilySystem::alpha(j + 1)] += st.t_plus * src_left(j) + st.r_minus * src_right(j);
        }
        if sys.interior(j) {
            rhs[FamilySystem::beta(j)] += st.r_plus * src_left(j) + st.t_minus * src_right(j);
        }
    }
    let sol = if m == 0 {
        rhs
    } else {
        let lu = sys.matrix.clone().lu();
        let singular = || Error::SingularSystem {
            energy: e.to_string(),
        };
        let mut sol = lu.solve(&rhs).ok_or_else(singular)?;
        // One step of iterative refinement.
        let residual = &rhs - &sys.matrix * &sol;
        sol += lu.solve(&residual).ok_or_else(singular)?;
        sol
    };
    if sol.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::SingularSystem {
            energy: e.to_string(),
        });
    }

    let incoming_left = |j: usize| {
        let mut v = src_left(j);
        if sys.interior(j) {
            v += sol[FamilySystem::alpha(j)] * sys.phase[j];
        }
        v
    };
    let incoming_right = |j: usize| {
        let mut v = src_right(j);
        if sys.interior(j + 1) {
            v += sol[FamilySystem::beta(j + 1)] * sys.phase[j + 1];
        }
        v
    };

    let mut phi = ZERO;
    if t == s {
        phi += (I * ks * (x_f - x_i).abs()).exp();
    }
    if sys.interior(t) {
        phi += sol[FamilySystem::alpha(t)] * (I * kt * (x_f - b[t - 1])).exp()
            + sol[FamilySystem::beta(t)] * (I * kt * (b[t] - x_f)).exp();
    }
    if t == 0 {
        let st = sys.local.steps[0];
        let gamma = st.r_plus * incoming_left(0) + st.t_minus * incoming_right(0);
        phi += gamma * (I * kt * (b[0] - x_f)).exp();
    }
    if t == n - 1 {
        let st = sys.local.steps[n - 2];
        let gamma = st.t_plus * incoming_left(n - 2) + st.r_minus * incoming_right(n - 2);
        phi += gamma * (I * kt * (x_f - b[n - 2])).exp();
    }
    let hbar2_over_m = 2.0 * spec.units().hbar2_over_2m();
    Ok((phi / (hbar2_over_m * I * kt.sqrt() * ks.sqrt()), det))
}

/// G for any spec, by solving for the path-family amplitudes of every
/// interior region.
pub fn green_family_recurrence(
    spec: &PotentialSpec,
    x_i: f64,
    x_f: f64,
    e: f64,
) -> Result<GreenValue> {
    let (value, det) = family_green(spec, x_i, x_f, Complex64::new(e, 0.0))?;
    Ok(GreenValue {
        value,
        energy: e,
        x_i,
        x_f,
        pole: det,
        pole_scale: 1.0,
    })
}

/// Complex-energy version of [`green_family_recurrence`].
pub fn green_family_recurrence_complex(
    spec: &PotentialSpec,
    x_i: f64,
    x_f: f64,
    e: Complex64,
) -> Result<Complex64> {
    family_green(spec, x_i, x_f, e).map(|(g, _)| g)
}

/// Pieces of the quasi-bound geometry: wall | well | barrier | outside.
#[derive(Debug, Clone, Copy)]
pub(crate) struct QuasiBoundParts {
    pub k2: Complex64,
    pub k4: Complex64,
    pub l2: f64,
    /// R₁⁻, -1 for an infinite wall.
    pub r1: Complex64,
    pub rb_plus: Complex64,
    pub tb_plus: Complex64,
    pub tb_minus: Complex64,
    pub infinite_wall: bool,
}

impl QuasiBoundParts {
    pub fn check(spec: &PotentialSpec) -> Result<()> {
        let h = spec.heights();
        if spec.n_regions() != 4 || h[1..].iter().any(|h| h.is_infinite()) {
            return Err(Error::Geometry(
                "quasi-bound geometry needs 4 regions: wall, well, barrier, finite outside".into(),
            ));
        }
        Ok(())
    }

    pub fn at(spec: &PotentialSpec, e: Complex64) -> Result<Self> {
        Self::check(spec)?;
        let barrier = compose_chain_complex(spec, 1, 3, e)?;
        let wall = interface_amplitudes(spec, 0, e)?;
        Ok(QuasiBoundParts {
            k2: spec.wave_number_complex(1, e)?.expect("finite").value(),
            k4: spec.wave_number_complex(3, e)?.expect("finite").value(),
            l2: spec.region_length(1).expect("interior"),
            r1: wall.r_minus,
            rb_plus: barrier.r_plus,
            tb_plus: barrier.t_plus,
            tb_minus: barrier.t_minus,
            infinite_wall: spec.height(0) == Height::Infinite,
        })
    }

    /// e^{2ik₂ℓ₂}.
    pub fn round_trip(&self) -> Complex64 {
        (2.0 * I * self.k2 * self.l2).exp()
    }

    /// f_qb = 1 - R₁⁻ R_b⁺ e^{2ik₂ℓ₂}; equals 1 + R_b⁺ e^{2ik₂ℓ₂} for a hard wall.
    pub fn pole(&self) -> Complex64 {
        if self.infinite_wall {
            1.0 + self.rb_plus * self.round_trip()
        } else {
            1.0 - self.r1 * self.rb_plus * self.round_trip()
        }
    }

    /// A = T_b⁻ / f.
    pub fn amplitude(&self) -> Complex64 {
        self.tb_minus / self.pole()
    }
}

/// G with the source outside the barrier (region 3) and the end point in
/// the well (region 1), both 0-based.
pub fn green_quasi_bound(spec: &PotentialSpec, x_i: f64, x_f: f64, e: f64) -> Result<GreenValue> {
    let parts = QuasiBoundParts::at(spec, Complex64::new(e, 0.0))?;
    let value = quasi_bound_value(spec, &parts, x_i, x_f, None)?;
    Ok(GreenValue {
        value,
        energy: e,
        x_i,
        x_f,
        pole: parts.pole(),
        pole_scale: (parts.r1 * parts.rb_plus).norm(),
    })
}

/// The finite-wall quasi-bound form with R₁⁻ replaced by `r1`. With `r1 = 0`
/// the step at the wall is withdrawn and the result is the Green's function
/// of the bare barrier.
pub fn green_quasi_bound_with_wall(
    spec: &PotentialSpec,
    x_i: f64,
    x_f: f64,
    e: f64,
    r1: Complex64,
) -> Result<Complex64> {
    let parts = QuasiBoundParts::at(spec, Complex64::new(e, 0.0))?;
    quasi_bound_value(spec, &parts, x_i, x_f, Some(r1))
}

/// `r1_override` forces the general (finite-wall) expression with the given
/// R₁⁻, used to check the hard-wall simplification.
pub(crate) fn quasi_bound_value(
    spec: &PotentialSpec,
    parts: &QuasiBoundParts,
    x_i: f64,
    x_f: f64,
    r1_override: Option<Complex64>,
) -> Result<Complex64> {
    if spec.region_of(x_i) != 3 {
        return Err(Error::Region {
            x: x_i,
            found: spec.region_of(x_i),
            expected: "the source must lie outside the barrier (region 3)",
        });
    }
    if spec.region_of(x_f) != 1 {
        return Err(Error::Region {
            x: x_f,
            found: spec.region_of(x_f),
            expected: "the end point must lie in the well (region 1)",
        });
    }
    let b = spec.breakpoints();
    let (x1, x2, x3) = (b[0], b[1], b[2]);
    let hbar2_over_m = 2.0 * spec.units().hbar2_over_2m();
    let (k2, k4) = (parts.k2, parts.k4);
    let incoming = (I * k4 * (x_i - x3)).exp();
    let root = k2.sqrt() * k4.sqrt();
    match r1_override {
        None if parts.infinite_wall => {
            // Origin on the wall.
            let xf = x_f - x1;
            let f = parts.pole();
            if f == ZERO {
                return Err(Error::AtPole { energy: f64::NAN });
            }
            let prefactor = 1.0 / (hbar2_over_m / 2.0) / (I * I * root);
            Ok(prefactor * (I * k2 * parts.l2).exp() * parts.tb_minus / f
                * incoming
                * (k2 * xf).sin())
        }
        _ => {
            let r1 = r1_override.unwrap_or(parts.r1);
            let f = 1.0 - r1 * parts.rb_plus * parts.round_trip();
            if f == ZERO {
                return Err(Error::AtPole { energy: f64::NAN });
            }
            let well = (I * k2 * (x2 - x_f)).exp() + r1 * (I * k2 * (x_f + x2 - 2.0 * x1)).exp();
            Ok(parts.tb_minus / f * incoming * well / (hbar2_over_m * I * root))
        }
    }
}

/// G at real energy, choosing the closed form when one applies and the
/// family solver otherwise.
pub fn green(spec: &PotentialSpec, x_i: f64, x_f: f64, e: f64) -> Result<GreenValue> {
    let ri = spec.region_of(x_i);
    let rf = spec.region_of(x_f);
    if spec.n_regions() == 3 && (ri == 1 || rf == 1) {
        return green_three_region(spec, x_i, x_f, e);
    }
    if QuasiBoundParts::check(spec).is_ok() && ri == 3 && rf == 1 {
        return green_quasi_bound(spec, x_i, x_f, e);
    }
    green_family_recurrence(spec, x_i, x_f, e)
}

/// G at complex energy.
pub fn green_complex(spec: &PotentialSpec, x_i: f64, x_f: f64, e: Complex64) -> Result<Complex64> {
    let ri = spec.region_of(x_i);
    let rf = spec.region_of(x_f);
    if spec.n_regions() == 3 && (ri == 1 || rf == 1) {
        return green_three_region_complex(spec, x_i, x_f, e);
    }
    green_family_recurrence_complex(spec, x_i, x_f, e)
}

/// Relative error of the derivative jump of G at the source against 2m/ħ².
///
/// Slopes are central differences (step h/2) at x_i ± h. The O(h) curvature
/// bias of the one-sided slopes is removed by Richardson extrapolation
/// between h and h/2.
pub fn delta_jump_check(spec: &PotentialSpec, x_i: f64, e: f64, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::Config(format!("step must be positive, got {h}")));
    }
    let g = |x: f64| green(spec, x_i, x, e).map(|v| v.value);
    let slope = |x: f64, d: f64| -> Result<Complex64> { Ok((g(x + d)? - g(x - d)?) / (2.0 * d)) };
    let jump =
        |h: f64| -> Result<Complex64> { Ok(slope(x_i + h, h / 2.0)? - slope(x_i - h, h / 2.0)?) };
    let extrapolated = 2.0 * jump(h / 2.0)? - jump(h)?;
    let expected = spec.units().two_m_over_hbar2();
    Ok((extrapolated - expected).norm() / expected)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::UnitSystem;

    fn asym() -> PotentialSpec {
        PotentialSpec::well(
            10.0.into(),
            0.0,
            20.0.into(),
            0.0,
            2.0,
            UnitSystem::natural(),
        )
        .unwrap()
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    #[test]
    fn infinite_well_closed_form() {
        let l = 1.3;
        let spec = PotentialSpec::well(
            Height::Infinite,
            0.0,
            Height::Infinite,
            0.0,
            l,
            UnitSystem::natural(),
        )
        .unwrap();
        for &(e, xi, xf) in &[(5.0f64, 0.3f64, 0.9f64), (30.0, 1.1, 0.2), (-4.0, 0.5, 0.5)] {
            let k = Complex64::new(e, 0.0).sqrt();
            let expected =
                (k * (xf.max(xi) - l)).sin() * (k * xf.min(xi)).sin() / (k * (k * l).sin());
            let g = green_three_region(&spec, xi, xf, e).unwrap();
            assert!(rel(g.value, expected) < 1e-13, "{e} {xi} {xf}");
        }
    }

    #[test]
    fn free_particle() {
        let spec = PotentialSpec::new(
            vec![0.0.into(), 0.0.into()],
            vec![0.0],
            UnitSystem::natural(),
        )
        .unwrap();
        let k = 1.5f64;
        for &(xi, xf) in &[(-1.0, 2.0), (0.5, -0.25), (3.0, 3.0)] {
            let g = green(&spec, xi, xf, k * k).unwrap();
            let expected = (I * k * (xf - xi).abs()).exp() / (2.0 * I * k);
            assert!(rel(g.value, expected) < 1e-14);
        }
    }

    #[test]
    fn family_matches_closed_form_on_three_regions() {
        let spec = asym();
        for &e in &[1.0, 7.3, 12.0, 25.0] {
            for &(xi, xf) in &[
                (0.4, 1.7),
                (1.7, 0.4),
                (0.9, -0.8),
                (1.2, 2.6),
                (2.5, 0.1),
                (-0.3, 1.0),
            ] {
                let a = green(&spec, xi, xf, e).unwrap().value;
                let b = green_family_recurrence(&spec, xi, xf, e).unwrap().value;
                assert!(rel(b, a) < 1e-13, "{e} {xi} {xf}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn family_determinant_equals_well_pole() {
        let spec = asym();
        for &e in &[2.0, 9.0, 15.0] {
            let f = WellKernel::from_spec(&spec, Complex64::new(e, 0.0))
                .unwrap()
                .pole();
            let d = green_family_recurrence(&spec, 0.5, 0.5, e).unwrap().pole;
            assert!(rel(d, f) < 1e-14);
        }
    }

    #[test]
    fn mirror_consistency() {
        let spec = asym();
        let m = spec.mirrored();
        for &e in &[3.0, 14.0] {
            for &(xi, xf) in &[(0.5, -1.0), (1.5, 3.0), (0.2, 1.1), (-0.7, 1.9)] {
                let a = green(&spec, xi, xf, e).unwrap().value;
                let b = green(&m, -xi, -xf, e).unwrap().value;
                assert!(rel(b, a) < 1e-13);
            }
        }
    }

    #[test]
    fn quasi_bound_forms_agree() {
        let spec = PotentialSpec::new(
            vec![Height::Infinite, 0.0.into(), 2.0.into(), 0.5.into()],
            vec![0.0, 4.0, 4.7],
            UnitSystem::natural(),
        )
        .unwrap();
        for &e in &[0.7, 1.3, 2.9] {
            for &(xi, xf) in &[(5.5, 1.0), (9.0, 3.9)] {
                let closed = green_quasi_bound(&spec, xi, xf, e).unwrap().value;
                let family = green_family_recurrence(&spec, xi, xf, e).unwrap().value;
                assert!(rel(closed, family) < 1e-12, "{closed} vs {family}");
                let parts = QuasiBoundParts::at(&spec, Complex64::new(e, 0.0)).unwrap();
                let general =
                    quasi_bound_value(&spec, &parts, xi, xf, Some(Complex64::new(-1.0, 0.0)))
                        .unwrap();
                assert!(rel(general, closed) < 1e-13);
            }
        }
    }

    #[test]
    fn quasi_bound_finite_wall_matches_family() {
        let spec = PotentialSpec::new(
            vec![3.0.into(), 0.0.into(), 2.0.into(), 0.5.into()],
            vec![-1.0, 3.0, 3.6],
            UnitSystem::natural(),
        )
        .unwrap();
        for &e in &[0.7, 1.3, 2.9, 3.4] {
            let closed = green_quasi_bound(&spec, 4.1, 0.3, e).unwrap().value;
            let family = green_family_recurrence(&spec, 4.1, 0.3, e).unwrap().value;
            assert!(rel(closed, family) < 1e-12);
        }
    }

    #[test]
    fn symmetric_in_end_points() {
        let spec = PotentialSpec::new(
            vec![
                1.0.into(),
                0.0.into(),
                4.0.into(),
                (-0.5).into(),
                2.0.into(),
            ],
            vec![0.0, 1.0, 1.4, 3.0],
            UnitSystem::natural(),
        )
        .unwrap();
        for &e in &[0.3, 1.7, 5.0] {
            for &(a, b) in &[(-0.5, 0.5), (1.2, 2.2), (0.1, 4.5), (2.9, -2.0)] {
                let g1 = green(&spec, a, b, e).unwrap().value;
                let g2 = green(&spec, b, a, e).unwrap().value;
                assert!(rel(g1, g2) < 1e-12);
            }
        }
    }

    #[test]
    fn continuity_across_breakpoints() {
        let spec = asym();
        let e = 6.0;
        for &xb in &[0.0, 2.0] {
            let a = green(&spec, 0.7, xb - 1e-10, e).unwrap().value;
            let b = green(&spec, 0.7, xb + 1e-10, e).unwrap().value;
            assert!((a - b).norm() < 1e-8);
        }
    }

    #[test]
    fn pole_flag() {
        let spec = PotentialSpec::well(
            Height::Infinite,
            0.0,
            Height::Infinite,
            0.0,
            1.0,
            UnitSystem::natural(),
        )
        .unwrap();
        let e1 = std::f64::consts::PI.powi(2);
        let near = green_three_region(&spec, 0.3, 0.6, e1 * (1.0 + 1e-15)).unwrap();
        assert!(near.near_pole());
        let far = green_three_region(&spec, 0.3, 0.6, e1 * 1.5).unwrap();
        assert!(!far.near_pole());
    }

    #[test]
    fn region_errors() {
        let spec = asym();
        assert!(matches!(
            green_three_region(&spec, -1.0, 5.0, 3.0),
            Err(Error::Region { .. })
        ));
        assert!(green_family_recurrence(&spec, -1.0, 5.0, 3.0).is_ok());
    }

    #[test]
    fn delta_jump_examples() {
        let free = PotentialSpec::new(
            vec![0.0.into(), 0.0.into()],
            vec![0.0],
            UnitSystem::natural(),
        )
        .unwrap();
        assert!(delta_jump_check(&free, 0.3, 2.0, 1e-5).unwrap() < 1e-8);
        let well = PotentialSpec::well(
            Height::Infinite,
            0.0,
            Height::Infinite,
            0.0,
            1.0,
            UnitSystem::natural(),
        )
        .unwrap();
        assert!(delta_jump_check(&well, 0.37, 14.0, 1e-5).unwrap() < 1e-6);
        assert!(delta_jump_check(&asym(), 1.1, 7.0, 2e-5).unwrap() < 1e-6);
    }
}
