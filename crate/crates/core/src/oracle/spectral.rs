//! Eigenfunction expansion of G for the infinite well on [0, L].
//!
//! G = Σ ψ_n(x_f) ψ_n(x_i) / (E - E_n) with ψ_n = √(2/L) sin(nπx/L), written as
//! -(2L/(cπ²)) Σ sin(nX_f) sin(nX_i) / (n² + α²), X = πx/L, α² = -L²k²/π².

use crate::potential::UnitSystem;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralSumConfig {
    pub n_terms: usize,
    /// Subtract the E = 0 series, whose sum X<(π - X>)/2 is elementary,
    /// leaving a remainder that decays like n⁻⁴ instead of n⁻².
    pub accelerate: bool,
}

impl Default for SpectralSumConfig {
    fn default() -> Self {
        SpectralSumConfig {
            n_terms: 2000,
            accelerate: true,
        }
    }
}

/// Truncated spectral sum for G(x_f, x_i; E) of a well with hard walls at
/// 0 and `l` and a flat bottom at zero energy.
pub fn spectral_green_infinite_well(
    l: f64,
    x_f: f64,
    x_i: f64,
    e: f64,
    units: &UnitSystem,
    cfg: &SpectralSumConfig,
) -> f64 {
    let c = units.hbar2_over_2m();
    let pi = std::f64::consts::PI;
    let xf = pi * x_f / l;
    let xi = pi * x_i / l;
    let alpha2 = -l * l * e / (c * pi * pi);
    let mut sum = 0.0;
    // Smallest terms first.
    for n in (1..=cfg.n_terms).rev() {
        let nf = n as f64;
        let s = (nf * xf).sin() * (nf * xi).sin();
        let n2 = nf * nf;
        sum += if cfg.accelerate {
            -alpha2 * s / (n2 * (n2 + alpha2))
        } else {
            s / (n2 + alpha2)
        };
    }
    if cfg.accelerate {
        sum += 0.5 * xf.min(xi) * (pi - xf.max(xi));
    }
    -2.0 * l / (c * pi * pi) * sum
}
