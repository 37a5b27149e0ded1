//! Run configuration: defaults, the plain-text key=value file format, and
//! the tabulated cutoff presets.

use serde::{Deserialize, Serialize};

use crate::density::CenterPolicy;
use crate::error::{Error, Result};
use crate::evaluation::CcrMode;
use crate::motif::MotifParams;
use crate::team::{FamiliarityMode, RecognizeConfig};
use crate::trac::{IntensityFunction, TracConfig};

/// Occupancy band targeted when the cutoff distance is chosen
/// automatically: mean ρ between 1% and 2% of the node count.
pub const OCCUPANCY_BAND: (f64, f64) = (0.01, 0.02);

/// Tabulated cutoff distances per publication window.
pub const DC_PRESETS: &[(&str, f64)] = &[
    ("2006-2009", 1.6),
    ("2008-2011", 1.5),
    ("2010-2013", 1.5),
    ("2012-2015", 1.5),
    ("2014-2017", 1.4),
];

/// How the cutoff distance d_c is chosen.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum DcSetting {
    /// Scan candidates for one whose occupancy lands in [`OCCUPANCY_BAND`].
    Auto,
    Value(f64),
    /// A named window from [`DC_PRESETS`].
    Preset(String),
}

impl DcSetting {
    /// Accepts `auto`, a positive number, or a preset window name.
    pub fn parse(text: &str) -> Result<Self> {
        if text == "auto" {
            return Ok(DcSetting::Auto);
        }
        if let Ok(value) = text.parse::<f64>() {
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "cutoff distance must be positive and finite, got {text}"
                )));
            }
            return Ok(DcSetting::Value(value));
        }
        if DC_PRESETS.iter().any(|(name, _)| *name == text) {
            return Ok(DcSetting::Preset(text.to_string()));
        }
        Err(Error::InvalidArgument(format!(
            "unknown cutoff setting {text:?} (expected auto, a number, or a preset window such as 2010-2013)"
        )))
    }

    /// The concrete cutoff when no occupancy scan is needed.
    pub fn fixed_value(&self) -> Option<f64> {
        match self {
            DcSetting::Auto => None,
            DcSetting::Value(v) => Some(*v),
            DcSetting::Preset(name) => DC_PRESETS.iter().find(|(n, _)| n == name).map(|&(_, v)| v),
        }
    }
}

/// Every tunable of the pipeline, with documented defaults. Serialized
/// verbatim into run manifests.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    /// Inclusive publication window, e.g. (2010, 2013).
    pub window: Option<(i32, i32)>,
    pub min_career_years: u32,
    /// Field-of-study whitelist; empty keeps every record.
    pub fields: Vec<String>,
    /// Analyze the whole graph instead of its largest component.
    pub keep_all_components: bool,
    /// Shortest-path exploration cap.
    pub cap: f64,
    pub d_c: DcSetting,
    pub center_policy: CenterPolicy,
    pub familiarity: FamiliarityMode,
    pub min_team_size: usize,
    pub restrict_triangles: bool,
    pub ccr_mode: CcrMode,
    /// Citation share q for the top-cited interagency table.
    pub top_cited_share: f64,
    pub motif: MotifParams,
    pub trac: TracConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            window: None,
            min_career_years: 5,
            fields: Vec::new(),
            keep_all_components: false,
            cap: 3.5,
            d_c: DcSetting::Auto,
            center_policy: CenterPolicy::Auto,
            familiarity: FamiliarityMode::HigherOrder,
            min_team_size: 2,
            restrict_triangles: false,
            ccr_mode: CcrMode::Weighted,
            top_cited_share: 0.20,
            motif: MotifParams::default(),
            trac: TracConfig::default(),
        }
    }
}

impl RunConfig {
    /// The concrete clustering parameters once the cutoff is resolved.
    pub fn recognize_config(&self, d_c: f64) -> RecognizeConfig {
        RecognizeConfig {
            d_c,
            cap: self.cap,
            center_policy: self.center_policy.clone(),
            familiarity: self.familiarity,
            min_team_size: self.min_team_size,
            restrict_triangles: self.restrict_triangles,
        }
    }
}

fn parse_bool(value: &str) -> Result<bool> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(Error::InvalidArgument(format!(
            "expected true or false, got {other:?}"
        ))),
    }
}

fn parse_number<T: std::str::FromStr>(value: &str, what: &str) -> Result<T> {
    value
        .parse::<T>()
        .map_err(|_| Error::InvalidArgument(format!("invalid {what}: {value:?}")))
}

/// Parse a center policy: `auto`, `top:<k>`, or `gamma:<min>`.
pub fn parse_center_policy(text: &str) -> Result<CenterPolicy> {
    if text == "auto" {
        return Ok(CenterPolicy::Auto);
    }
    if let Some(k) = text.strip_prefix("top:") {
        let k: usize = parse_number(k, "center count")?;
        if k == 0 {
            return Err(Error::InvalidArgument(
                "center count must be at least 1".into(),
            ));
        }
        return Ok(CenterPolicy::TopK(k));
    }
    if let Some(g) = text.strip_prefix("gamma:") {
        let g: f64 = parse_number(g, "gamma threshold")?;
        if !g.is_finite() {
            return Err(Error::InvalidArgument(
                "gamma threshold must be finite".into(),
            ));
        }
        return Ok(CenterPolicy::Threshold(g));
    }
    Err(Error::InvalidArgument(format!(
        "unknown center policy {text:?} (expected auto, top:<k>, or gamma:<min>)"
    )))
}

/// Parse an inclusive window written `START:END`.
pub fn parse_window(text: &str) -> Result<(i32, i32)> {
    let Some((start, end)) = text.split_once(':') else {
        return Err(Error::InvalidArgument(format!(
            "expected window as START:END, got {text:?}"
        )));
    };
    let start: i32 = parse_number(start, "window start year")?;
    let end: i32 = parse_number(end, "window end year")?;
    if start > end {
        return Err(Error::InvalidArgument(format!(
            "window start {start} exceeds end {end}"
        )));
    }
    Ok((start, end))
}

impl RunConfig {
    /// Apply one key=value setting. Unknown keys are rejected.
    pub fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "window" => self.window = Some(parse_window(value)?),
            "min-career-years" => {
                self.min_career_years = parse_number(value, "career span")?;
            }
            "fields" => {
                self.fields = value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(str::to_string)
                    .collect();
            }
            "keep-all-components" => self.keep_all_components = parse_bool(value)?,
            "cap" => {
                let cap: f64 = parse_number(value, "distance cap")?;
                if !cap.is_finite() || cap <= 0.0 {
                    return Err(Error::InvalidArgument(format!(
                        "distance cap must be positive and finite, got {value}"
                    )));
                }
                self.cap = cap;
            }
            "dc" => self.d_c = DcSetting::parse(value)?,
            "centers" => self.center_policy = parse_center_policy(value)?,
            "familiarity" => self.familiarity = FamiliarityMode::parse(value)?,
            "min-team-size" => {
                let size: usize = parse_number(value, "minimum team size")?;
                if size == 0 {
                    return Err(Error::InvalidArgument(
                        "minimum team size must be at least 1".into(),
                    ));
                }
                self.min_team_size = size;
            }
            "restrict-triangles" => self.restrict_triangles = parse_bool(value)?,
            "ccr" => self.ccr_mode = CcrMode::parse(value)?,
            "top-cited-share" => {
                let q: f64 = parse_number(value, "citation share")?;
                if !(q > 0.0 && q <= 1.0) {
                    return Err(Error::InvalidArgument(format!(
                        "citation share must be in (0, 1], got {value}"
                    )));
                }
                self.top_cited_share = q;
            }
            "seed" => self.motif.seed = parse_number(value, "seed")?,
            "motif-replicates" => {
                let n: usize = parse_number(value, "replicate count")?;
                if n == 0 {
                    return Err(Error::InvalidArgument(
                        "replicate count must be at least 1".into(),
                    ));
                }
                self.motif.replicates = n;
            }
            "motif-p" => {
                let p: f64 = parse_number(value, "p-value threshold")?;
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::InvalidArgument(format!(
                        "p-value threshold must be in [0, 1], got {value}"
                    )));
                }
                self.motif.p_threshold = p;
            }
            "motif-frequency" => {
                self.motif.frequency_threshold = parse_number(value, "frequency threshold")?;
            }
            "motif-effect" => {
                let d: f64 = parse_number(value, "effect threshold")?;
                if !d.is_finite() || d < 0.0 {
                    return Err(Error::InvalidArgument(format!(
                        "effect threshold must be finite and non-negative, got {value}"
                    )));
                }
                self.motif.effect_threshold = d;
            }
            "motif-swaps" => {
                let swaps: u32 = parse_number(value, "swaps per edge")?;
                if swaps == 0 {
                    return Err(Error::InvalidArgument(
                        "swaps per edge must be at least 1".into(),
                    ));
                }
                self.motif.swaps_per_edge = swaps;
            }
            "motif-frequency-at-most" => {
                self.motif.frequency_at_most = parse_bool(value)?;
            }
            "trac-intensity" => self.trac.intensity = IntensityFunction::parse(value)?,
            "trac-edge-threshold" => {
                let w: f64 = parse_number(value, "edge threshold")?;
                if !w.is_finite() || w < 0.0 {
                    return Err(Error::InvalidArgument(format!(
                        "edge threshold must be finite and non-negative, got {value}"
                    )));
                }
                self.trac.edge_threshold = w;
            }
            "trac-phi-min" => {
                let phi: f64 = parse_number(value, "partnership threshold")?;
                if !phi.is_finite() || phi < 0.0 {
                    return Err(Error::InvalidArgument(format!(
                        "partnership threshold must be finite and non-negative, got {value}"
                    )));
                }
                self.trac.phi_min = phi;
            }
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown config key {other:?}"
                )));
            }
        }
        Ok(())
    }
}

/// Parse a whole configuration file: one `key = value` per line, `#`
/// comments and blank lines ignored. Errors carry 1-based line numbers.
pub fn parse_config_text(text: &str) -> Result<RunConfig> {
    let mut config = RunConfig::default();
    for (index, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::InvalidArgument(format!(
                "config line {}: expected key=value, got {raw:?}",
                index + 1
            )));
        };
        config
            .apply(key.trim(), value.trim())
            .map_err(|e| Error::InvalidArgument(format!("config line {}: {e}", index + 1)))?;
    }
    Ok(config)
}
