#![allow(dead_code)]

use num_complex::Complex64;
use proptest::prelude::*;
use rectgf::potential::{Height, PotentialSpec, UnitSystem};

pub fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

pub fn asym() -> PotentialSpec {
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

pub fn infinite_well(l: f64) -> PotentialSpec {
    PotentialSpec::well(
        Height::Infinite,
        0.0,
        Height::Infinite,
        0.0,
        l,
        UnitSystem::natural(),
    )
    .unwrap()
}

/// Finite well with a flat bottom at 0.
pub fn well_strategy() -> impl Strategy<Value = PotentialSpec> {
    (3.0..40.0f64, 3.0..40.0f64, 0.4..3.0f64, -2.0..2.0f64).prop_map(|(u1, u3, w, x0)| {
        PotentialSpec::well(u1.into(), 0.0, u3.into(), x0, x0 + w, UnitSystem::natural()).unwrap()
    })
}

/// 3 to 7 regions of random height and width.
pub fn multistep_strategy() -> impl Strategy<Value = PotentialSpec> {
    (2usize..=6)
        .prop_flat_map(|n_bp| {
            (
                prop::collection::vec(0.0..12.0f64, n_bp + 1),
                prop::collection::vec(0.2..2.0f64, n_bp - 1),
                -3.0..3.0f64,
            )
        })
        .prop_map(|(heights, widths, x0)| {
            let mut b = vec![x0];
            for w in widths {
                b.push(b.last().unwrap() + w);
            }
            PotentialSpec::new(
                heights.into_iter().map(Height::from).collect(),
                b,
                UnitSystem::natural(),
            )
            .unwrap()
        })
}

/// A spec with an energy above both outer heights, away from every threshold.
pub fn propagating_case() -> impl Strategy<Value = (PotentialSpec, f64)> {
    (multistep_strategy(), 0.0..1.0f64)
        .prop_map(|(spec, t)| {
            let n = spec.n_regions();
            let floor = spec
                .height(0)
                .finite()
                .unwrap()
                .max(spec.height(n - 1).finite().unwrap());
            (spec, floor + 0.05 + 14.0 * t)
        })
        .prop_filter("energy too close to a height", |(spec, e)| {
            spec.heights()
                .iter()
                .all(|h| (h.finite().unwrap() - e).abs() > 1e-3)
        })
}
