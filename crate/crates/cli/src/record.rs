//! The output record and its JSON and CSV renderings.

use std::io::Write;

use serde::{Deserialize, Serialize};

use rectgf::potential::PotentialSpec;

use crate::error::CliResult;

pub const SCHEMA_VERSION: u32 = 1;

/// Published JSON schema for every record.
pub const SCHEMA: &str = include_str!("../schema/output.schema.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub schema_version: u32,
    #[serde(flatten)]
    pub payload: Payload,
    pub inputs: Inputs,
}

impl OutputRecord {
    pub fn new(inputs: Inputs, payload: Payload) -> Self {
        OutputRecord {
            schema_version: SCHEMA_VERSION,
            payload,
            inputs,
        }
    }

    pub fn command(&self) -> &'static str {
        match self.payload {
            Payload::BoundStates(_) => "bound-states",
            Payload::Green(_) => "green",
            Payload::Resonances(_) => "resonances",
            Payload::Verify(_) => "verify",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Inputs {
    /// Preset name or spec file path.
    pub source: String,
    pub units: String,
    pub spec: PotentialSpec,
    pub config: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", content = "results", rename_all = "kebab-case")]
pub enum Payload {
    BoundStates(BoundStatesResult),
    Green(GreenResult),
    Resonances(ResonancesResult),
    Verify(VerifyResult),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundStateRow {
    /// 1-based level index.
    pub n: usize,
    pub energy: f64,
    pub parity: String,
    /// ∫|ψ|² - 1.
    pub norm_error: f64,
    /// |f(E_n)|.
    pub pole_residual: f64,
    pub shallow: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundStatesResult {
    pub states: Vec<BoundStateRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GreenRow {
    pub energy: f64,
    /// `None` where G is singular.
    pub re_g: Option<f64>,
    pub im_g: Option<f64>,
    /// Sign of Re G on rows close to a pole, 0 elsewhere.
    pub pole_flag: i8,
    pub singular: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GreenResult {
    pub x_i: f64,
    pub x_f: f64,
    pub rows: Vec<GreenRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResonanceRow {
    /// 1-based, in energy order.
    pub n: usize,
    pub energy: f64,
    pub gamma: f64,
    pub tau: Option<f64>,
    pub peak_height: f64,
    pub width_method: String,
    pub truncated: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub energy: f64,
    pub a_squared: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InsetRow {
    pub energy: f64,
    pub transmission: f64,
    pub reflection: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResonancesResult {
    pub resonances: Vec<ResonanceRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve: Option<Vec<CurveRow>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inset: Option<Vec<InsetRow>>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRow {
    pub suite: String,
    pub status: CheckStatus,
    pub max_error: Option<f64>,
    pub tolerance: f64,
    pub comparisons: usize,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyResult {
    pub passed: bool,
    pub checks: Vec<CheckRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

pub fn render(record: &OutputRecord, format: Format) -> CliResult<Vec<u8>> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(record)?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => render_csv(record),
    }
}

fn section<T: Serialize>(
    out: &mut Vec<u8>,
    name: &str,
    rows: &[T],
    empty_header: &str,
) -> CliResult<()> {
    writeln!(out, "# section: {name}")?;
    if rows.is_empty() {
        writeln!(out, "{empty_header}")?;
        return Ok(());
    }
    let mut w = csv::Writer::from_writer(&mut *out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

fn render_csv(record: &OutputRecord) -> CliResult<Vec<u8>> {
    let mut out = Vec::new();
    writeln!(out, "# schema_version: {}", record.schema_version)?;
    writeln!(out, "# command: {}", record.command())?;
    writeln!(out, "# source: {}", record.inputs.source)?;
    writeln!(out, "# units: {}", record.inputs.units)?;
    writeln!(
        out,
        "# spec: {}",
        serde_json::to_string(&record.inputs.spec)?
    )?;
    writeln!(
        out,
        "# config: {}",
        serde_json::to_string(&record.inputs.config)?
    )?;
    match &record.payload {
        Payload::BoundStates(r) => section(
            &mut out,
            "states",
            &r.states,
            "n,energy,parity,norm_error,pole_residual,shallow",
        )?,
        Payload::Green(r) => {
            writeln!(out, "# x_i: {}", r.x_i)?;
            writeln!(out, "# x_f: {}", r.x_f)?;
            section(
                &mut out,
                "rows",
                &r.rows,
                "energy,re_g,im_g,pole_flag,singular",
            )?;
        }
        Payload::Resonances(r) => {
            for w in &r.warnings {
                writeln!(out, "# warning: {w}")?;
            }
            section(
                &mut out,
                "resonances",
                &r.resonances,
                "n,energy,gamma,tau,peak_height,width_method,truncated",
            )?;
            if let Some(curve) = &r.curve {
                section(&mut out, "curve", curve, "energy,a_squared")?;
            }
            if let Some(inset) = &r.inset {
                section(&mut out, "inset", inset, "energy,transmission,reflection")?;
            }
        }
        Payload::Verify(r) => {
            writeln!(out, "# passed: {}", r.passed)?;
            section(
                &mut out,
                "checks",
                &r.checks,
                "suite,status,max_error,tolerance,comparisons,detail",
            )?;
        }
    }
    Ok(out)
}
