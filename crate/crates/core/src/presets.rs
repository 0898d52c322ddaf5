//! Ready-made potentials.

use crate::potential::{Height, PotentialSpec, UnitSystem};
use crate::resonance::ScanConfig;

pub const NAMES: [&str; 5] = [
    "infinite-well",
    "square-well",
    "asymmetric-well",
    "gaas-fig7",
    "free-particle",
];

/// Hard walls at 0 and L = 1, natural units.
pub fn infinite_well() -> PotentialSpec {
    PotentialSpec::well(
        Height::Infinite,
        0.0,
        Height::Infinite,
        0.0,
        1.0,
        UnitSystem::natural(),
    )
    .expect("valid preset")
}

/// Depth 25, half-width 1, centred on 0, natural units.
pub fn square_well() -> PotentialSpec {
    PotentialSpec::well(
        25.0.into(),
        0.0,
        25.0.into(),
        -1.0,
        1.0,
        UnitSystem::natural(),
    )
    .expect("valid preset")
}

/// Heights 10 | 0 | 20, well width 2, natural units.
pub fn asymmetric_well() -> PotentialSpec {
    PotentialSpec::well(
        10.0.into(),
        0.0,
        20.0.into(),
        0.0,
        2.0,
        UnitSystem::natural(),
    )
    .expect("valid preset")
}

/// GaAs trap: hard wall, 804 Å well, 0.23 eV × 80 Å barrier, m* = 0.07 m_e.
pub fn gaas_fig7() -> PotentialSpec {
    let barrier = 80.0;
    let well = 10.05 * barrier;
    PotentialSpec::new(
        vec![Height::Infinite, 0.0.into(), 0.23.into(), 0.0.into()],
        vec![0.0, well, well + barrier],
        UnitSystem::effective_mass(0.07).expect("positive mass"),
    )
    .expect("valid preset")
}

/// Default scan of the GaAs preset, avoiding E = 0 and the barrier top.
pub fn gaas_fig7_scan() -> ScanConfig {
    ScanConfig::new(1e-4, 0.3499, 8000)
}

/// Flat potential split at x = 0, natural units.
pub fn free_particle() -> PotentialSpec {
    PotentialSpec::new(
        vec![0.0.into(), 0.0.into()],
        vec![0.0],
        UnitSystem::natural(),
    )
    .expect("valid preset")
}

pub fn by_name(name: &str) -> Option<PotentialSpec> {
    match name {
        "infinite-well" => Some(infinite_well()),
        "square-well" => Some(square_well()),
        "asymmetric-well" => Some(asymmetric_well()),
        "gaas-fig7" => Some(gaas_fig7()),
        "free-particle" => Some(free_particle()),
        _ => None,
    }
}

/// Presets with a bound-state spectrum.
pub fn wells() -> Vec<(&'static str, PotentialSpec)> {
    vec![
        ("infinite-well", infinite_well()),
        ("square-well", square_well()),
        ("asymmetric-well", asymmetric_well()),
    ]
}
