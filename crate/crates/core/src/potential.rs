//! Piecewise-constant potentials, unit systems and wave numbers.
//!
//! Regions are indexed from 0. Region `j` covers `[b[j-1], b[j])`, the first
//! region extends to `-inf` and the last one to `+inf`. Only the two outer
//! regions may carry an infinite height.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// ħc in eV·Å (CODATA 2018).
pub const HBAR_C_EV_ANGSTROM: f64 = 1_973.269_804;
/// Electron rest energy m_e c² in eV (CODATA 2018).
pub const ELECTRON_REST_ENERGY_EV: f64 = 510_998.95;
/// ħ in eV·s (CODATA 2018).
pub const HBAR_EV_S: f64 = 6.582_119_569e-16;

/// ħ²/2m_e in eV·Å².
pub fn electron_hbar2_over_2m() -> f64 {
    HBAR_C_EV_ANGSTROM * HBAR_C_EV_ANGSTROM / (2.0 * ELECTRON_REST_ENERGY_EV)
}

/// The single scale constant ħ²/2m, plus ħ when the units are physical.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitSystem {
    hbar2_over_2m: f64,
    hbar: Option<f64>,
    label: String,
}

impl UnitSystem {
    /// ħ²/2m = 1, lengths and energies dimensionless.
    pub fn natural() -> Self {
        UnitSystem {
            hbar2_over_2m: 1.0,
            hbar: None,
            label: "natural units".to_string(),
        }
    }

    pub fn custom(hbar2_over_2m: f64, label: impl Into<String>) -> Result<Self> {
        if !hbar2_over_2m.is_finite() || hbar2_over_2m <= 0.0 {
            return Err(Error::InvalidSpec(format!(
                "hbar2_over_2m must be positive and finite, got {hbar2_over_2m}"
            )));
        }
        Ok(UnitSystem {
            hbar2_over_2m,
            hbar: None,
            label: label.into(),
        })
    }

    /// Energies in eV, lengths in Å, mass `ratio`·m_e.
    pub fn effective_mass(ratio: f64) -> Result<Self> {
        if !ratio.is_finite() || ratio <= 0.0 {
            return Err(Error::InvalidSpec(format!(
                "effective_mass_ratio must be positive and finite, got {ratio}"
            )));
        }
        Ok(UnitSystem {
            hbar2_over_2m: electron_hbar2_over_2m() / ratio,
            hbar: Some(HBAR_EV_S),
            label: format!("eV, angstrom, m* = {ratio} m_e"),
        })
    }

    /// Attach ħ in (energy unit)·(time unit) so lifetimes can be reported.
    pub fn with_hbar(mut self, hbar: f64) -> Result<Self> {
        if !hbar.is_finite() || hbar <= 0.0 {
            return Err(Error::InvalidSpec(format!(
                "hbar must be positive, got {hbar}"
            )));
        }
        self.hbar = Some(hbar);
        Ok(self)
    }

    pub fn hbar2_over_2m(&self) -> f64 {
        self.hbar2_over_2m
    }

    /// 2m/ħ², the strength of the derivative jump of G at the source.
    pub fn two_m_over_hbar2(&self) -> f64 {
        1.0 / self.hbar2_over_2m
    }

    pub fn hbar(&self) -> Option<f64> {
        self.hbar
    }

    pub fn is_physical(&self) -> bool {
        self.hbar.is_some()
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

impl Default for UnitSystem {
    fn default() -> Self {
        UnitSystem::natural()
    }
}

/// A region height. Infinite walls are kept symbolic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Height {
    Finite(f64),
    Infinite,
}

impl Height {
    pub fn is_infinite(self) -> bool {
        matches!(self, Height::Infinite)
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Height::Finite(u) => Some(u),
            Height::Infinite => None,
        }
    }
}

impl From<f64> for Height {
    fn from(u: f64) -> Self {
        Height::Finite(u)
    }
}

impl fmt::Display for Height {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Height::Finite(u) => write!(f, "{u}"),
            Height::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Height {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Height::Finite(u) => s.serialize_f64(*u),
            Height::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Height {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(u) => Ok(Height::Finite(u)),
            Raw::Text(t) => match t.to_ascii_lowercase().as_str() {
                "inf" | "+inf" | "infinity" | "+infinity" => Ok(Height::Infinite),
                _ => Err(serde::de::Error::custom(format!(
                    "height must be a number or \"inf\", got {t:?}"
                ))),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WaveKind {
    Propagating,
    Evanescent,
    /// Complex energy: both parts of k nonzero, Im k > 0.
    Damped,
}

/// A region wave number on the branch Im k ≥ 0 (and k ≥ 0 when real).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WaveNumber {
    value: Complex64,
    kind: WaveKind,
}

impl WaveNumber {
    /// Classify an explicit value. Rejects values off the branch.
    pub fn try_new(value: Complex64) -> Result<Self> {
        if !value.re.is_finite() || !value.im.is_finite() {
            return Err(Error::NonFinite("wave number"));
        }
        let kind = if value.im == 0.0 && value.re >= 0.0 {
            WaveKind::Propagating
        } else if value.re == 0.0 && value.im > 0.0 {
            WaveKind::Evanescent
        } else if value.im > 0.0 {
            WaveKind::Damped
        } else {
            return Err(Error::InvalidSpec(format!(
                "wave number {value} is off the Im k >= 0 branch"
            )));
        };
        Ok(WaveNumber { value, kind })
    }

    pub fn real(k: f64) -> Result<Self> {
        Self::try_new(Complex64::new(k, 0.0))
    }

    pub fn evanescent(kappa: f64) -> Result<Self> {
        Self::try_new(Complex64::new(0.0, kappa))
    }

    pub fn value(&self) -> Complex64 {
        self.value
    }

    pub fn kind(&self) -> WaveKind {
        self.kind
    }

    pub fn is_zero(&self) -> bool {
        self.value.re == 0.0 && self.value.im == 0.0
    }
}

/// k = sqrt((E - u) / (ħ²/2m)), real for E ≥ u and iκ (κ > 0) below.
pub fn wave_number(e: f64, u: f64, units: &UnitSystem) -> Result<WaveNumber> {
    if !e.is_finite() {
        return Err(Error::NonFinite("energy"));
    }
    if !u.is_finite() {
        return Err(Error::NonFinite("height"));
    }
    let d = (e - u) / units.hbar2_over_2m;
    if d >= 0.0 {
        Ok(WaveNumber {
            value: Complex64::new(d.sqrt(), 0.0),
            kind: WaveKind::Propagating,
        })
    } else {
        Ok(WaveNumber {
            value: Complex64::new(0.0, (-d).sqrt()),
            kind: WaveKind::Evanescent,
        })
    }
}

/// Complex-energy wave number on the sheet Im k ≥ 0. Falls back to [`wave_number`] when Im E = 0.
pub fn wave_number_complex(e: Complex64, u: f64, units: &UnitSystem) -> Result<WaveNumber> {
    if e.im == 0.0 {
        return wave_number(e.re, u, units);
    }
    if !e.re.is_finite() || !e.im.is_finite() {
        return Err(Error::NonFinite("energy"));
    }
    if !u.is_finite() {
        return Err(Error::NonFinite("height"));
    }
    let k = ((e - u) / units.hbar2_over_2m).sqrt();
    WaveNumber::try_new(if k.im < 0.0 { -k } else { k })
}

/// A piecewise-constant potential.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpecFile", into = "SpecFile")]
pub struct PotentialSpec {
    heights: Vec<Height>,
    breakpoints: Vec<f64>,
    units: UnitSystem,
}

impl PotentialSpec {
    pub fn new(heights: Vec<Height>, breakpoints: Vec<f64>, units: UnitSystem) -> Result<Self> {
        let n = heights.len();
        if n < 2 {
            return Err(Error::InvalidSpec(format!(
                "need at least 2 regions, got {n}"
            )));
        }
        if breakpoints.len() + 1 != n {
            return Err(Error::InvalidSpec(format!(
                "{n} heights need {} breakpoints, got {}",
                n - 1,
                breakpoints.len()
            )));
        }
        for (j, h) in heights.iter().enumerate() {
            match h {
                Height::Finite(u) if !u.is_finite() => {
                    return Err(Error::InvalidSpec(format!("height {j} is not finite: {u}")))
                }
                Height::Infinite if j != 0 && j != n - 1 => {
                    return Err(Error::InvalidSpec(format!(
                        "only the outer regions may be infinite (region {j})"
                    )))
                }
                _ => {}
            }
        }
        if heights.iter().all(|h| h.is_infinite()) {
            return Err(Error::InvalidSpec("no region with finite height".into()));
        }
        if let Some(x) = breakpoints.iter().find(|x| !x.is_finite()) {
            return Err(Error::InvalidSpec(format!("breakpoint is not finite: {x}")));
        }
        if let Some(w) = breakpoints.windows(2).find(|w| w[1] <= w[0]) {
            return Err(Error::InvalidSpec(format!(
                "breakpoints must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        Ok(PotentialSpec {
            heights,
            breakpoints,
            units,
        })
    }

    /// Three regions: `u_left | u_well on [x1, x2) | u_right`.
    pub fn well(
        u_left: Height,
        u_well: f64,
        u_right: Height,
        x1: f64,
        x2: f64,
        units: UnitSystem,
    ) -> Result<Self> {
        Self::new(
            vec![u_left, Height::Finite(u_well), u_right],
            vec![x1, x2],
            units,
        )
    }

    pub fn heights(&self) -> &[Height] {
        &self.heights
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn units(&self) -> &UnitSystem {
        &self.units
    }

    pub fn n_regions(&self) -> usize {
        self.heights.len()
    }

    pub fn height(&self, region: usize) -> Height {
        self.heights[region]
    }

    /// Region containing `x`, with half-open regions `[b[j-1], b[j])`.
    pub fn region_of(&self, x: f64) -> usize {
        self.breakpoints.partition_point(|&b| b <= x)
    }

    /// `(left, right)` edges of a region; outer regions extend to ±inf.
    pub fn region_bounds(&self, region: usize) -> (f64, f64) {
        let lo = if region == 0 {
            f64::NEG_INFINITY
        } else {
            self.breakpoints[region - 1]
        };
        let hi = if region + 1 == self.n_regions() {
            f64::INFINITY
        } else {
            self.breakpoints[region]
        };
        (lo, hi)
    }

    /// Length of an interior region, `None` for the outer ones.
    pub fn region_length(&self, region: usize) -> Option<f64> {
        if region == 0 || region + 1 >= self.n_regions() {
            None
        } else {
            Some(self.breakpoints[region] - self.breakpoints[region - 1])
        }
    }

    /// Wave number in `region` at real `e`; `None` inside an infinite wall.
    pub fn wave_number(&self, region: usize, e: f64) -> Result<Option<WaveNumber>> {
        match self.heights[region] {
            Height::Finite(u) => wave_number(e, u, &self.units).map(Some),
            Height::Infinite => Ok(None),
        }
    }

    pub fn wave_number_complex(&self, region: usize, e: Complex64) -> Result<Option<WaveNumber>> {
        match self.heights[region] {
            Height::Finite(u) => wave_number_complex(e, u, &self.units).map(Some),
            Height::Infinite => Ok(None),
        }
    }

    pub fn wave_numbers(&self, e: Complex64) -> Result<Vec<Option<WaveNumber>>> {
        (0..self.n_regions())
            .map(|r| self.wave_number_complex(r, e))
            .collect()
    }

    /// Mirror image under x -> -x.
    pub fn mirrored(&self) -> Self {
        PotentialSpec {
            heights: self.heights.iter().rev().copied().collect(),
            breakpoints: self.breakpoints.iter().rev().map(|x| -x).collect(),
            units: self.units.clone(),
        }
    }

    /// Same potential translated by `dx`.
    pub fn shifted(&self, dx: f64) -> Self {
        PotentialSpec {
            heights: self.heights.clone(),
            breakpoints: self.breakpoints.iter().map(|x| x + dx).collect(),
            units: self.units.clone(),
        }
    }

    /// Invariant under reflection about the centre of the breakpoints.
    pub fn is_symmetric(&self) -> bool {
        let n = self.n_regions();
        let heights_match = (0..n).all(|j| self.heights[j] == self.heights[n - 1 - j]);
        let first = self.breakpoints[0];
        let last = self.breakpoints[self.breakpoints.len() - 1];
        let scale = (last - first).abs().max(1.0);
        let geometry_match = self
            .breakpoints
            .iter()
            .zip(self.breakpoints.iter().rev())
            .all(|(a, b)| ((a - first) - (last - b)).abs() <= 1e-12 * scale);
        heights_match && geometry_match
    }

    /// Lowest finite height among the regions.
    pub fn min_finite_height(&self) -> f64 {
        self.heights
            .iter()
            .filter_map(|h| h.finite())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn from_json_str(text: &str) -> std::result::Result<Self, SpecFileError> {
        serde_json::from_str(text).map_err(SpecFileError::from_json)
    }

    pub fn from_json_file(path: &std::path::Path) -> std::result::Result<Self, SpecFileError> {
        let text = std::fs::read_to_string(path).map_err(|e| SpecFileError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::from_json_str(&text)
    }
}

/// Failure to load a potential specification file.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpecFileError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

impl SpecFileError {
    fn from_json(e: serde_json::Error) -> Self {
        SpecFileError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    units: UnitsFile,
    heights: Vec<Height>,
    breakpoints: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct UnitsFile {
    hbar2_over_2m: ScaleFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    hbar: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum ScaleFile {
    Value(f64),
    Mass { effective_mass_ratio: f64 },
}

impl TryFrom<SpecFile> for PotentialSpec {
    type Error = Error;

    fn try_from(f: SpecFile) -> Result<Self> {
        let mut units = match f.units.hbar2_over_2m {
            ScaleFile::Value(v) if v == 1.0 => UnitSystem::natural(),
            ScaleFile::Value(v) => UnitSystem::custom(v, "custom units")?,
            ScaleFile::Mass {
                effective_mass_ratio,
            } => UnitSystem::effective_mass(effective_mass_ratio)?,
        };
        if let Some(label) = f.units.label {
            units.label = label;
        }
        if let Some(hbar) = f.units.hbar {
            units = units.with_hbar(hbar)?;
        }
        PotentialSpec::new(f.heights, f.breakpoints, units)
    }
}

impl From<PotentialSpec> for SpecFile {
    fn from(s: PotentialSpec) -> Self {
        SpecFile {
            units: UnitsFile {
                hbar2_over_2m: ScaleFile::Value(s.units.hbar2_over_2m),
                label: Some(s.units.label),
                hbar: s.units.hbar,
            },
            heights: s.heights,
            breakpoints: s.breakpoints,
        }
    }
}
