//! Explicit enumeration of scattering paths inside a well.
//!
//! A path leaves x_i to the left or right, bounces r times between the two
//! walls and arrives at x_f. Paths are grouped the way the geometric series
//! is: the direct path once, then four families (one or two bounces, leaving
//! either way) each repeated with n extra round trips. `n_bounces = N` keeps
//! n = 0..=N.

use num_complex::Complex64;

use crate::amplitudes::compose_chain_complex;
use crate::error::{Error, Result};
use crate::greens::PathTerm;
use crate::potential::PotentialSpec;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Weights and phases of every path up to `n_bounces` extra round trips.
/// Both points must lie in the same interior region; the reflectors are
/// everything to its left and everything to its right.
pub fn path_terms(
    spec: &PotentialSpec,
    x_i: f64,
    x_f: f64,
    e: Complex64,
    n_bounces: usize,
) -> Result<Vec<PathTerm>> {
    let region = spec.region_of(x_i);
    if region == 0 || region + 1 == spec.n_regions() || spec.region_of(x_f) != region {
        return Err(Error::Region {
            x: x_f,
            found: spec.region_of(x_f),
            expected: "path-sum end points must share one interior region",
        });
    }
    let k = spec
        .wave_number_complex(region, e)?
        .expect("finite")
        .value();
    let r_left = compose_chain_complex(spec, 0, region, e)?.r_minus;
    let r_right = compose_chain_complex(spec, region, spec.n_regions() - 1, e)?.r_plus;
    let (x1, x2) = spec.region_bounds(region);
    Ok(well_paths(x1, x2, k, r_left, r_right, x_i, x_f, n_bounces))
}

/// Paths inside `[x1, x2]` with reflection `r_left` back from the left wall
/// and `r_right` back from the right wall.
#[allow(clippy::too_many_arguments)]
pub fn well_paths(
    x1: f64,
    x2: f64,
    k: Complex64,
    r_left: Complex64,
    r_right: Complex64,
    x_i: f64,
    x_f: f64,
    n_bounces: usize,
) -> Vec<PathTerm> {
    let length = x2 - x1;
    let forward = x_f >= x_i;
    let mut terms = Vec::new();
    for start_right in [true, false] {
        // Group n holds r = 2n + 1 and r = 2n + 2.
        for r in 0..=2 * n_bounces + 2 {
            let end_right = start_right == (r % 2 == 0);
            if r == 0 && start_right != forward {
                continue;
            }
            let (dist, weight) = if r == 0 {
                ((x_f - x_i).abs(), Complex64::new(1.0, 0.0))
            } else {
                let first = if start_right { x2 - x_i } else { x_i - x1 };
                let last = if end_right { x_f - x1 } else { x2 - x_f };
                let mut w = Complex64::new(1.0, 0.0);
                let mut at_right = start_right;
                for _ in 0..r {
                    w *= if at_right { r_right } else { r_left };
                    at_right = !at_right;
                }
                (first + (r - 1) as f64 * length + last, w)
            };
            terms.push(PathTerm {
                weight,
                action_phase: k * dist,
            });
        }
    }
    terms
}

/// G from the truncated path sum, complex energy.
pub fn truncated_path_sum_complex(
    spec: &PotentialSpec,
    x_i: f64,
    x_f: f64,
    e: Complex64,
    n_bounces: usize,
) -> Result<Complex64> {
    let k = spec
        .wave_number_complex(spec.region_of(x_i), e)?
        .expect("finite")
        .value();
    let sum: Complex64 = path_terms(spec, x_i, x_f, e, n_bounces)?
        .iter()
        .map(PathTerm::contribution)
        .sum();
    let hbar2_over_m = 2.0 * spec.units().hbar2_over_2m();
    Ok(sum / (hbar2_over_m * I * k))
}

/// G from the truncated path sum at real energy.
pub fn truncated_path_sum(
    spec: &PotentialSpec,
    x_i: f64,
    x_f: f64,
    e: f64,
    n_bounces: usize,
) -> Result<Complex64> {
    truncated_path_sum_complex(spec, x_i, x_f, Complex64::new(e, 0.0), n_bounces)
}
