//! bound-states, green and resonances.

use std::path::PathBuf;

use serde_json::json;

use rectgf::greens::{green, PoleFunction};
use rectgf::potential::PotentialSpec;
use rectgf::presets;
use rectgf::resonance::{barrier_coefficients, scan, ScanConfig, WidthMethod};
use rectgf::spectra::{find_bound_states, norm_squared, Parity, PoleSearchConfig};
use rectgf::Error;

use crate::error::{CliError, CliResult};
use crate::record::{
    BoundStateRow, BoundStatesResult, CurveRow, GreenResult, GreenRow, Inputs, InsetRow,
    OutputRecord, Payload, ResonanceRow, ResonancesResult,
};

/// Default relative pole threshold of the green sweep.
pub const DEFAULT_POLE_THRESHOLD: f64 = 1e-3;

/// A resolved potential and where it came from.
#[derive(Debug, Clone)]
pub struct Source {
    pub label: String,
    pub preset: Option<String>,
    pub spec: PotentialSpec,
}

impl Source {
    pub fn resolve(spec_file: Option<&PathBuf>, preset: Option<&str>) -> CliResult<Self> {
        match (spec_file, preset) {
            (Some(path), None) => Ok(Source {
                label: path.display().to_string(),
                preset: None,
                spec: PotentialSpec::from_json_file(path)?,
            }),
            (None, Some(name)) => {
                let spec = presets::by_name(name).ok_or_else(|| {
                    CliError::Usage(format!(
                        "unknown preset '{name}'; available: {}",
                        presets::NAMES.join(", ")
                    ))
                })?;
                Ok(Source {
                    label: format!("preset:{name}"),
                    preset: Some(name.to_string()),
                    spec,
                })
            }
            (Some(_), Some(_)) => Err(CliError::Usage(
                "give either --spec or --preset, not both".into(),
            )),
            (None, None) => Err(CliError::Usage(
                "one of --spec or --preset is required".into(),
            )),
        }
    }

    pub fn inputs(&self, config: serde_json::Value) -> Inputs {
        Inputs {
            source: self.label.clone(),
            units: self.spec.units().label().to_string(),
            spec: self.spec.clone(),
            config,
        }
    }
}

fn parity_label(p: Parity) -> &'static str {
    match p {
        Parity::Even => "even",
        Parity::Odd => "odd",
        Parity::None => "none",
    }
}

pub fn bound_states(source: &Source, max_states: usize) -> CliResult<OutputRecord> {
    let cfg = PoleSearchConfig {
        max_states,
        ..Default::default()
    };
    let spec = &source.spec;
    let states = find_bound_states(spec, &cfg)?
        .iter()
        .map(|s| BoundStateRow {
            n: s.n + 1,
            energy: s.energy,
            parity: parity_label(s.parity).into(),
            norm_error: norm_squared(spec, s) - 1.0,
            pole_residual: s.pole_residual,
            shallow: s.shallow,
        })
        .collect();
    Ok(OutputRecord::new(
        source.inputs(json!({ "max_states": max_states })),
        Payload::BoundStates(BoundStatesResult { states }),
    ))
}

#[derive(Debug, Clone, Copy)]
pub struct GreenSweep {
    pub x_i: f64,
    pub x_f: f64,
    pub e_min: f64,
    pub e_max: f64,
    pub n_points: usize,
    pub pole_threshold: f64,
}

impl GreenSweep {
    fn energies(&self) -> CliResult<Vec<f64>> {
        let ok = [self.x_i, self.x_f, self.e_min, self.e_max]
            .iter()
            .all(|v| v.is_finite());
        if !ok {
            return Err(CliError::Usage(
                "positions and energies must be finite".into(),
            ));
        }
        if self.n_points == 0 || (self.n_points > 1 && self.e_max <= self.e_min) {
            return Err(CliError::Usage(format!(
                "need n_points >= 1 and emin < emax, got {} points on [{}, {}]",
                self.n_points, self.e_min, self.e_max
            )));
        }
        if self.n_points == 1 {
            return Ok(vec![self.e_min]);
        }
        let step = (self.e_max - self.e_min) / (self.n_points - 1) as f64;
        Ok((0..self.n_points)
            .map(|j| {
                if j + 1 == self.n_points {
                    self.e_max
                } else {
                    self.e_min + step * j as f64
                }
            })
            .collect())
    }
}

fn green_row(spec: &PotentialSpec, sweep: &GreenSweep, e: f64) -> CliResult<GreenRow> {
    match green(spec, sweep.x_i, sweep.x_f, e) {
        Ok(g) => {
            let flag = if g.near_pole_with(sweep.pole_threshold) {
                g.value.re.signum() as i8
            } else {
                0
            };
            Ok(GreenRow {
                energy: e,
                re_g: Some(g.value.re),
                im_g: Some(g.value.im),
                pole_flag: flag,
                singular: false,
            })
        }
        // A grid point that lands exactly on a pole or threshold.
        Err(Error::AtPole { .. })
        | Err(Error::SingularSystem { .. })
        | Err(Error::ResonanceSingularity)
        | Err(Error::DegenerateThreshold { .. }) => Ok(GreenRow {
            energy: e,
            re_g: None,
            im_g: None,
            pole_flag: 0,
            singular: true,
        }),
        Err(e) => Err(e.into()),
    }
}

pub fn green_sweep(source: &Source, sweep: &GreenSweep) -> CliResult<OutputRecord> {
    let spec = &source.spec;
    for x in [sweep.x_i, sweep.x_f] {
        let r = spec.region_of(x);
        if spec.height(r).is_infinite() {
            return Err(CliError::Spec(format!(
                "position {x} lies inside the infinite region {r}"
            )));
        }
    }
    let rows = sweep
        .energies()?
        .into_iter()
        .map(|e| green_row(spec, sweep, e))
        .collect::<CliResult<Vec<_>>>()?;
    let config = json!({
        "emin": sweep.e_min,
        "emax": sweep.e_max,
        "n_points": sweep.n_points,
        "pole_threshold": sweep.pole_threshold,
        "pole_kind": PoleFunction::for_spec(spec).kind,
    });
    Ok(OutputRecord::new(
        source.inputs(config),
        Payload::Green(GreenResult {
            x_i: sweep.x_i,
            x_f: sweep.x_f,
            rows,
        }),
    ))
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ScanFlags {
    pub e_min: Option<f64>,
    pub e_max: Option<f64>,
    pub n_points: Option<usize>,
    pub curve: bool,
}

/// The preset scan for gaas-fig7, otherwise well bottom to 1.5 barrier heights.
fn scan_config(source: &Source, flags: &ScanFlags) -> CliResult<ScanConfig> {
    let spec = &source.spec;
    let mut cfg = if source.preset.as_deref() == Some("gaas-fig7") {
        presets::gaas_fig7_scan()
    } else {
        let h = spec.heights();
        let (Some(well), Some(barrier)) = (
            h.get(1).and_then(|u| u.finite()),
            h.get(2).and_then(|u| u.finite()),
        ) else {
            return Err(CliError::Spec(
                "resonances need a finite well (region 1) and barrier (region 2)".into(),
            ));
        };
        let depth = barrier - well;
        ScanConfig::new(well + 1e-4 * depth, well + 1.5 * depth, 8000)
    };
    if let Some(v) = flags.e_min {
        cfg.e_min = v;
    }
    if let Some(v) = flags.e_max {
        cfg.e_max = v;
    }
    if let Some(v) = flags.n_points {
        cfg.n_points = v;
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn resonances(source: &Source, flags: &ScanFlags) -> CliResult<OutputRecord> {
    let cfg = scan_config(source, flags)?;
    let spec = &source.spec;
    let result = scan(spec, &cfg)?;
    let resonances = result
        .resonances
        .iter()
        .map(|r| ResonanceRow {
            n: r.n + 1,
            energy: r.energy,
            gamma: r.gamma,
            tau: r.tau,
            peak_height: r.peak_height,
            width_method: match r.width_method {
                WidthMethod::HalfMaximum => "half_maximum",
                WidthMethod::Linearized => "linearized",
            }
            .into(),
            truncated: r.truncated,
        })
        .collect();
    let (curve, inset) = if flags.curve {
        let curve = result
            .curve
            .iter()
            .map(|&(energy, a_squared)| CurveRow { energy, a_squared })
            .collect();
        let inset = barrier_coefficients(spec, &cfg.grid())?
            .iter()
            .map(|b| InsetRow {
                energy: b.energy,
                transmission: b.transmission,
                reflection: b.reflection,
            })
            .collect();
        (Some(curve), Some(inset))
    } else {
        (None, None)
    };
    let config = json!({
        "emin": cfg.e_min,
        "emax": cfg.e_max,
        "n_points": cfg.n_points,
        "refine_iterations": cfg.refine_iterations,
        "prominence": cfg.prominence,
        "window": cfg.window,
        "curve": flags.curve,
    });
    Ok(OutputRecord::new(
        source.inputs(config),
        Payload::Resonances(ResonancesResult {
            resonances,
            curve,
            inset,
            warnings: result.warnings,
        }),
    ))
}
