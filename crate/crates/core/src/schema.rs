//! JSON wire format for configs and bundled fixtures.
//!
//! ```json
//! {"label": "42", "level": 42, "nebentypus": {"local": [...]},
//!  "dim_Af": 4, "deg_F": 1, "schur_index": 1,
//!  "inner_twists": [{"label": "s", "chi": {"local": [...]}, "galois_exp": 1}],
//!  "level_overrides": [{"chi": {"local": [...]}, "q": 7, "v": 1}]}
//! ```
//!
//! Fixture files are configs with two extra keys, `provenance` and
//! `expected`; every other unknown key is rejected.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_path_to_error::Segment;
use thiserror::Error;

use crate::character::DirichletCharacter;
use crate::config::{ConfigError, LevelOverride, NewformConfig, NewformData};
use crate::twists::GaloisElement;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub label: String,
    pub level: u64,
    pub nebentypus: DirichletCharacter,
    #[serde(rename = "dim_Af")]
    pub dim_af: u64,
    #[serde(rename = "deg_F")]
    pub deg_f: u64,
    pub schur_index: u64,
    #[serde(default)]
    pub inner_twists: Vec<GaloisElement>,
    #[serde(default)]
    pub level_overrides: Vec<LevelOverride>,
    /// Field name to a source note: `"published"`, `"reconstructed: ..."` or `"derived: ..."`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Expected>,
}

/// One prime-ideal factor, as published.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectedFactor {
    pub q: u64,
    pub e: u64,
    pub f: u64,
    pub g: u64,
    pub n: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectedOrbit {
    pub size: u64,
    pub dim: u64,
    pub multiplicity: u64,
}

/// Values a fixture must reproduce; absent keys are not checked.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    /// `integral`, `not_integral` or `indeterminate`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub status: Option<String>,
    /// Decimal string of the rational generator.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field_conductor: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p2_size: Option<usize>,
    /// `"a"` or `"a/b"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
    /// Prime (as a string key) to the exact norm exponent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm_valuations: Option<BTreeMap<String, u32>>,
    /// Factors with `n_q > 0`, by increasing `q`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ideal: Option<Vec<ExpectedFactor>>,
    /// Prime to the sorted multiset `{v_q(N_χ) : χ ∈ G}`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<BTreeMap<String, Vec<u32>>>,
    /// Orbits in representative order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbits: Option<Vec<ExpectedOrbit>>,
}

#[derive(Debug, Error)]
pub enum SchemaError {
    #[error("{pointer}: {message}")]
    Json { pointer: String, message: String },
    #[error(transparent)]
    Config(#[from] ConfigError),
}

fn escape(token: &str) -> String {
    token.replace('~', "~0").replace('/', "~1")
}

/// RFC 6901 pointer for a deserializer path; the root is `""`.
pub fn json_pointer(path: &serde_path_to_error::Path) -> String {
    let mut out = String::new();
    for seg in path.iter() {
        out.push('/');
        match seg {
            Segment::Seq { index } => out.push_str(&index.to_string()),
            Segment::Map { key } => out.push_str(&escape(key)),
            Segment::Enum { variant } => out.push_str(&escape(variant)),
            Segment::Unknown => out.push('?'),
        }
    }
    out
}

/// Deserializes `text`, reporting failures at their JSON pointer.
pub fn parse_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, SchemaError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(de).map_err(|e| SchemaError::Json {
        pointer: json_pointer(e.path()),
        message: e.inner().to_string(),
    })?;
    Ok(value)
}

impl ConfigFile {
    pub fn data(&self) -> NewformData {
        NewformData {
            label: self.label.clone(),
            level: self.level,
            nebentypus: self.nebentypus.clone(),
            dim_af: self.dim_af,
            deg_f: self.deg_f,
            schur_index: self.schur_index,
            inner_twists: self.inner_twists.clone(),
            level_overrides: self.level_overrides.clone(),
        }
    }

    pub fn from_config(config: &NewformConfig) -> Self {
        let d = config.to_data();
        ConfigFile {
            label: d.label,
            level: d.level,
            nebentypus: d.nebentypus,
            dim_af: d.dim_af,
            deg_f: d.deg_f,
            schur_index: d.schur_index,
            inner_twists: d.inner_twists,
            level_overrides: d.level_overrides,
            provenance: None,
            expected: None,
        }
    }
}

pub fn parse_config_file(text: &str) -> Result<ConfigFile, SchemaError> {
    parse_json(text)
}

/// Parses and validates a config (or fixture) file.
pub fn parse_config(text: &str) -> Result<NewformConfig, SchemaError> {
    let file = parse_config_file(text)?;
    Ok(NewformConfig::try_from(file.data())?)
}

/// Canonical JSON for a validated config; `parse_config` inverts it.
pub fn render_config(config: &NewformConfig) -> String {
    serde_json::to_string_pretty(&ConfigFile::from_config(config)).expect("serializable")
}
