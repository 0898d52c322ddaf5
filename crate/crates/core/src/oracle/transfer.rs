//! Transfer matrices of (ψ, ψ') across the potential.
//!
//! Inside a region of wave number k, (ψ, ψ') moves over a distance d by
//! [[cos kd, sin(kd)/k], [-k sin kd, cos kd]]; ψ and ψ' are continuous at
//! every breakpoint. No amplitude formulas are used.

use num_complex::Complex64;

use crate::amplitudes::CompositeAmplitudes;
use crate::error::{Error, Result};
use crate::potential::PotentialSpec;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

type Mat = [[Complex64; 2]; 2];
type State = [Complex64; 2];

fn propagator(k: Complex64, d: f64) -> Mat {
    let kd = k * d;
    let sinc = if kd.norm() < 1e-8 {
        Complex64::new(d, 0.0) * (1.0 - kd * kd / 6.0)
    } else {
        kd.sin() / k
    };
    [[kd.cos(), sinc], [-k * kd.sin(), kd.cos()]]
}

fn apply(m: &Mat, s: State) -> State {
    [
        m[0][0] * s[0] + m[0][1] * s[1],
        m[1][0] * s[0] + m[1][1] * s[1],
    ]
}

fn mul(a: &Mat, b: &Mat) -> Mat {
    let mut c = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

fn k_of(spec: &PotentialSpec, r: usize, e: Complex64) -> Result<Option<Complex64>> {
    Ok(spec.wave_number_complex(r, e)?.map(|k| k.value()))
}

/// Map of (ψ, ψ') from the first breakpoint to the last.
fn interior_matrix(spec: &PotentialSpec, e: Complex64) -> Result<Mat> {
    let mut m = [[ONE, ZERO], [ZERO, ONE]];
    for r in 1..spec.n_regions() - 1 {
        let k = k_of(spec, r, e)?.expect("interior region is finite");
        m = mul(&propagator(k, spec.region_length(r).expect("interior")), &m);
    }
    Ok(m)
}

/// Flux-normalised R and T of the whole spec.
pub fn transfer_matrix_scattering(spec: &PotentialSpec, e: f64) -> Result<CompositeAmplitudes> {
    let e = Complex64::new(e, 0.0);
    let n = spec.n_regions();
    let (Some(k0), Some(kn)) = (k_of(spec, 0, e)?, k_of(spec, n - 1, e)?) else {
        return Err(Error::Config(
            "transfer-matrix scattering needs finite outer regions".into(),
        ));
    };
    if k0.im != 0.0 || kn.im != 0.0 || k0 == ZERO || kn == ZERO {
        return Err(Error::Config(
            "transfer-matrix scattering needs propagating outer regions".into(),
        ));
    }
    let m = interior_matrix(spec, e)?;
    // Plane-wave coefficients (A, B) of A e^{ikx} + B e^{-ikx}, referenced at
    // the first (left side) and last (right side) breakpoints.
    let to_state = |k: Complex64| [[ONE, ONE], [I * k, -I * k]];
    let from_state = |k: Complex64| [[0.5 * ONE, 0.5 / (I * k)], [0.5 * ONE, -0.5 / (I * k)]];
    let total = mul(&from_state(kn), &mul(&m, &to_state(k0)));
    if total[1][1] == ZERO {
        return Err(Error::SingularSystem {
            energy: e.to_string(),
        });
    }
    // Left incidence: (A_n, 0) = M (1, r).
    let r = -total[1][0] / total[1][1];
    let a_n = total[0][0] + total[0][1] * r;
    // Right incidence: (A_n, 1) = M (0, B_0).
    let b_0 = 1.0 / total[1][1];
    let a_back = total[0][1] * b_0;
    Ok(CompositeAmplitudes {
        r_plus: r,
        t_plus: a_n * (kn / k0).sqrt(),
        r_minus: a_back,
        t_minus: b_0 * (k0 / kn).sqrt(),
        span: (0, n - 1),
    })
}

/// ψ_L: decays or leaves to the left; ψ_R: decays or leaves to the right.
struct Solutions<'a> {
    spec: &'a PotentialSpec,
    k: Vec<Option<Complex64>>,
}

impl Solutions<'_> {
    fn left_state_at_first(&self) -> State {
        match self.k[0] {
            Some(k) => [ONE, -I * k],
            None => [ZERO, ONE],
        }
    }

    fn right_state_at_last(&self) -> State {
        let n = self.k.len();
        match self.k[n - 1] {
            Some(k) => [ONE, I * k],
            None => [ZERO, ONE],
        }
    }

    /// (ψ_L, ψ_L') at x.
    fn left(&self, x: f64) -> State {
        let b = self.spec.breakpoints();
        let n = self.k.len();
        let mut s = self.left_state_at_first();
        if x < b[0] {
            return match self.k[0] {
                Some(k) => apply(&propagator(k, x - b[0]), s),
                None => [ZERO, ZERO],
            };
        }
        let mut pos = b[0];
        for r in 1..n {
            let end = if r + 1 < n { b[r] } else { f64::INFINITY };
            let Some(k) = self.k[r] else {
                return [ZERO, ZERO];
            };
            if x < end {
                return apply(&propagator(k, x - pos), s);
            }
            s = apply(&propagator(k, end - pos), s);
            pos = end;
        }
        unreachable!("the last region is unbounded")
    }

    /// (ψ_R, ψ_R') at x.
    fn right(&self, x: f64) -> State {
        let b = self.spec.breakpoints();
        let n = self.k.len();
        let mut s = self.right_state_at_last();
        let last = b[n - 2];
        if x >= last {
            return match self.k[n - 1] {
                Some(k) => apply(&propagator(k, x - last), s),
                None => [ZERO, ZERO],
            };
        }
        let mut pos = last;
        for r in (0..n - 1).rev() {
            let start = if r > 0 { b[r - 1] } else { f64::NEG_INFINITY };
            let Some(k) = self.k[r] else {
                return [ZERO, ZERO];
            };
            if x >= start {
                return apply(&propagator(k, x - pos), s);
            }
            s = apply(&propagator(k, start - pos), s);
            pos = start;
        }
        unreachable!("the first region is unbounded")
    }
}

/// G(x_f, x_i; E) = ψ_L(x<) ψ_R(x>) / (c W), W = ψ_L ψ_R' - ψ_L' ψ_R.
pub fn transfer_matrix_green(
    spec: &PotentialSpec,
    x_i: f64,
    x_f: f64,
    e: Complex64,
) -> Result<Complex64> {
    let sol = Solutions {
        spec,
        k: spec
            .wave_numbers(e)?
            .into_iter()
            .map(|k| k.map(|k| k.value()))
            .collect(),
    };
    let x0 = spec.breakpoints()[0];
    let l = sol.left_state_at_first();
    let r = sol.right(x0);
    let w = l[0] * r[1] - l[1] * r[0];
    if w == ZERO {
        return Err(Error::SingularSystem {
            energy: e.to_string(),
        });
    }
    let (lo, hi) = if x_f <= x_i { (x_f, x_i) } else { (x_i, x_f) };
    Ok(sol.left(lo)[0] * sol.right(hi)[0] / (spec.units().hbar2_over_2m() * w))
}
