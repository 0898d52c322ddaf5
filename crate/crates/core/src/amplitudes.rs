//! Reflection and transmission amplitudes of single steps and of composite
//! scatterers.
//!
//! Amplitudes are flux-normalised: they carry the √k factors so that for
//! propagating asymptotics |R|² + |T|² = 1 holds without extra weights.
//! `+` means incidence from the left, `-` incidence from the right.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::potential::{Height, PotentialSpec, WaveNumber};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// The four amplitudes of one discontinuity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepAmplitudes {
    pub r_plus: Complex64,
    pub r_minus: Complex64,
    pub t_plus: Complex64,
    pub t_minus: Complex64,
}

impl StepAmplitudes {
    /// Finite region on the left, infinite wall on the right.
    pub fn hard_wall_right() -> Self {
        StepAmplitudes {
            r_plus: Complex64::new(-1.0, 0.0),
            r_minus: Complex64::new(1.0, 0.0),
            t_plus: Complex64::new(0.0, 0.0),
            t_minus: Complex64::new(0.0, 0.0),
        }
    }

    /// Infinite wall on the left, finite region on the right.
    pub fn hard_wall_left() -> Self {
        StepAmplitudes {
            r_plus: Complex64::new(1.0, 0.0),
            r_minus: Complex64::new(-1.0, 0.0),
            t_plus: Complex64::new(0.0, 0.0),
            t_minus: Complex64::new(0.0, 0.0),
        }
    }

    /// No discontinuity.
    pub fn transparent() -> Self {
        StepAmplitudes {
            r_plus: Complex64::new(0.0, 0.0),
            r_minus: Complex64::new(0.0, 0.0),
            t_plus: Complex64::new(1.0, 0.0),
            t_minus: Complex64::new(1.0, 0.0),
        }
    }
}

/// Amplitudes of a step from `k_left` to `k_right`.
pub fn step_amplitudes(k_left: WaveNumber, k_right: WaveNumber) -> Result<StepAmplitudes> {
    let kl = k_left.value();
    let kr = k_right.value();
    let sum = kl + kr;
    if k_left.is_zero() || k_right.is_zero() || sum == Complex64::new(0.0, 0.0) {
        return Err(Error::DegenerateThreshold {
            k_left: kl.to_string(),
            k_right: kr.to_string(),
        });
    }
    let r_plus = (kl - kr) / sum;
    Ok(StepAmplitudes {
        r_plus,
        r_minus: -r_plus,
        t_plus: (kr / kl).sqrt() * 2.0 * kl / sum,
        t_minus: (kl / kr).sqrt() * 2.0 * kr / sum,
    })
}

/// Amplitudes of interface `j` (between regions `j` and `j + 1`) of `spec`.
pub fn interface_amplitudes(
    spec: &PotentialSpec,
    j: usize,
    e: Complex64,
) -> Result<StepAmplitudes> {
    match (spec.height(j), spec.height(j + 1)) {
        (Height::Infinite, _) => Ok(StepAmplitudes::hard_wall_left()),
        (_, Height::Infinite) => Ok(StepAmplitudes::hard_wall_right()),
        _ => {
            let kl = spec.wave_number_complex(j, e)?.expect("finite region");
            let kr = spec.wave_number_complex(j + 1, e)?.expect("finite region");
            step_amplitudes(kl, kr)
        }
    }
}

/// Amplitudes of the block of regions `span.0 ..= span.1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CompositeAmplitudes {
    pub r_plus: Complex64,
    pub r_minus: Complex64,
    pub t_plus: Complex64,
    pub t_minus: Complex64,
    pub span: (usize, usize),
}

impl CompositeAmplitudes {
    /// A single step seen as the block `(j, j + 1)`.
    pub fn from_step(step: StepAmplitudes, j: usize) -> Self {
        CompositeAmplitudes {
            r_plus: step.r_plus,
            r_minus: step.r_minus,
            t_plus: step.t_plus,
            t_minus: step.t_minus,
            span: (j, j + 1),
        }
    }

    /// |R⁺|² + |T⁺|².
    pub fn flux_plus(&self) -> f64 {
        self.r_plus.norm_sqr() + self.t_plus.norm_sqr()
    }

    /// |R⁻|² + |T⁻|².
    pub fn flux_minus(&self) -> f64 {
        self.r_minus.norm_sqr() + self.t_minus.norm_sqr()
    }
}

/// Free propagation region between two scatterers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spacer {
    pub k: WaveNumber,
    pub length: f64,
}

/// Combine two scatterers separated by `spacer`, summing the internal
/// multiple reflections in closed form.
pub fn compose(
    left: &CompositeAmplitudes,
    spacer: &Spacer,
    right: &CompositeAmplitudes,
) -> Result<CompositeAmplitudes> {
    if !(spacer.length > 0.0) || !spacer.length.is_finite() {
        return Err(Error::Geometry(format!(
            "spacer length must be positive, got {}",
            spacer.length
        )));
    }
    let p = (I * spacer.k.value() * spacer.length).exp();
    let p2 = p * p;
    let d = 1.0 - left.r_minus * right.r_plus * p2;
    if d == Complex64::new(0.0, 0.0) {
        return Err(Error::ResonanceSingularity);
    }
    Ok(CompositeAmplitudes {
        r_plus: left.r_plus + left.t_minus * left.t_plus * right.r_plus * p2 / d,
        t_plus: left.t_plus * right.t_plus * p / d,
        r_minus: right.r_minus + right.t_plus * right.t_minus * left.r_minus * p2 / d,
        t_minus: right.t_minus * left.t_minus * p / d,
        span: (left.span.0, right.span.1),
    })
}

/// Composite amplitudes of regions `from ..= to` at real energy.
pub fn compose_chain(
    spec: &PotentialSpec,
    from: usize,
    to: usize,
    e: f64,
) -> Result<CompositeAmplitudes> {
    compose_chain_complex(spec, from, to, Complex64::new(e, 0.0))
}

/// Composite amplitudes of regions `from ..= to`, left-to-right fold.
pub fn compose_chain_complex(
    spec: &PotentialSpec,
    from: usize,
    to: usize,
    e: Complex64,
) -> Result<CompositeAmplitudes> {
    if from >= to || to >= spec.n_regions() {
        return Err(Error::Config(format!(
            "invalid region span {from}..={to} for {} regions",
            spec.n_regions()
        )));
    }
    let mut acc = CompositeAmplitudes::from_step(interface_amplitudes(spec, from, e)?, from);
    for j in from + 1..to {
        let spacer = Spacer {
            k: spec
                .wave_number_complex(j, e)?
                .expect("interior region is finite"),
            length: spec.region_length(j).expect("interior region"),
        };
        let next = CompositeAmplitudes::from_step(interface_amplitudes(spec, j, e)?, j);
        acc = compose(&acc, &spacer, &next)?;
    }
    Ok(acc)
}

/// Wave numbers and interface amplitudes of a whole spec at one energy.
#[derive(Debug, Clone)]
pub struct LocalAmplitudes {
    /// `None` inside infinite walls.
    pub k: Vec<Option<Complex64>>,
    pub steps: Vec<StepAmplitudes>,
}

impl LocalAmplitudes {
    pub fn at(spec: &PotentialSpec, e: Complex64) -> Result<Self> {
        let k = spec
            .wave_numbers(e)?
            .into_iter()
            .map(|w| w.map(|w| w.value()))
            .collect();
        let steps = (0..spec.n_regions() - 1)
            .map(|j| interface_amplitudes(spec, j, e))
            .collect::<Result<_>>()?;
        Ok(LocalAmplitudes { k, steps })
    }
}
