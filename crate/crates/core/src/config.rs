//! Validated description of a newform: level, nebentypus, dimensions and
//! inner twists.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{is_prime, prime_divisors};
use crate::character::DirichletCharacter;
use crate::group::CharacterGroup;
use crate::twists::{validate_structure, GaloisElement, InnerTwistStructure, StructureDiagnostic};

/// Externally known exponent `v_q(N_χ)` of the level of `f⊗χ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelOverride {
    pub chi: DirichletCharacter,
    pub q: u64,
    pub v: u32,
}

/// Unvalidated input, field for field as in the config file.
#[derive(Clone, Debug)]
pub struct NewformData {
    pub label: String,
    pub level: u64,
    pub nebentypus: DirichletCharacter,
    pub dim_af: u64,
    pub deg_f: u64,
    pub schur_index: u64,
    pub inner_twists: Vec<GaloisElement>,
    pub level_overrides: Vec<LevelOverride>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("level must be positive")]
    ZeroLevel,
    #[error("nebentypus conductor {conductor} does not divide N = {level}")]
    NebentypusConductor { conductor: u64, level: u64 },
    #[error("deg_F = {deg_f} does not divide dim_Af = {dim_af}")]
    DegreeDoesNotDivide { deg_f: u64, dim_af: u64 },
    #[error("schur_index must be 1 or 2, got {0}")]
    SchurIndex(u64),
    #[error("dim B = {dim_b} does not divide dim_Af = {dim_af}")]
    BlockDimension { dim_b: u64, dim_af: u64 },
    #[error("invalid inner twist structure: {}", join(.0))]
    Structure(Vec<StructureDiagnostic>),
    #[error("level override for {chi}: character is not in G")]
    OverrideNotInGroup { chi: DirichletCharacter },
    #[error("level override for {chi}: q = {q} does not divide N·f_L")]
    OverridePrime { chi: DirichletCharacter, q: u64 },
    #[error("duplicate level override for {chi} at q = {q}")]
    DuplicateOverride { chi: DirichletCharacter, q: u64 },
}

fn join(diags: &[StructureDiagnostic]) -> String {
    diags
        .iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Clone, Debug)]
pub struct NewformConfig {
    label: String,
    level: u64,
    nebentypus: DirichletCharacter,
    dim_af: u64,
    deg_f: u64,
    schur_index: u64,
    twists: InnerTwistStructure,
    group: CharacterGroup,
    overrides: Vec<LevelOverride>,
}

impl TryFrom<NewformData> for NewformConfig {
    type Error = ConfigError;

    fn try_from(data: NewformData) -> Result<Self, ConfigError> {
        if data.level == 0 {
            return Err(ConfigError::ZeroLevel);
        }
        let nebentypus = data.nebentypus.primitive();
        if !data.level.is_multiple_of(nebentypus.conductor()) {
            return Err(ConfigError::NebentypusConductor {
                conductor: nebentypus.conductor(),
                level: data.level,
            });
        }
        if data.deg_f == 0 || !data.dim_af.is_multiple_of(data.deg_f) {
            return Err(ConfigError::DegreeDoesNotDivide {
                deg_f: data.deg_f,
                dim_af: data.dim_af,
            });
        }
        if !(1..=2).contains(&data.schur_index) {
            return Err(ConfigError::SchurIndex(data.schur_index));
        }
        let dim_b = data.schur_index * data.deg_f;
        if !data.dim_af.is_multiple_of(dim_b) {
            return Err(ConfigError::BlockDimension {
                dim_b,
                dim_af: data.dim_af,
            });
        }

        let twists = InnerTwistStructure::new(data.inner_twists);
        let group = twists.character_group();
        validate_structure(
            &twists,
            &group,
            data.level,
            &nebentypus,
            data.dim_af,
            data.deg_f,
        )
        .map_err(ConfigError::Structure)?;

        let relevant = prime_divisors(data.level * group.field_conductor());
        let mut overrides: Vec<LevelOverride> = Vec::new();
        for mut o in data.level_overrides {
            o.chi = o.chi.primitive();
            if !group.contains(&o.chi) {
                return Err(ConfigError::OverrideNotInGroup { chi: o.chi });
            }
            if !is_prime(o.q) || !relevant.contains(&o.q) {
                return Err(ConfigError::OverridePrime { chi: o.chi, q: o.q });
            }
            if overrides.iter().any(|x| x.chi == o.chi && x.q == o.q) {
                return Err(ConfigError::DuplicateOverride { chi: o.chi, q: o.q });
            }
            overrides.push(o);
        }

        Ok(NewformConfig {
            label: data.label,
            level: data.level,
            nebentypus,
            dim_af: data.dim_af,
            deg_f: data.deg_f,
            schur_index: data.schur_index,
            twists,
            group,
            overrides,
        })
    }
}

impl NewformConfig {
    pub fn label(&self) -> &str {
        &self.label
    }

    /// `N`.
    pub fn level(&self) -> u64 {
        self.level
    }

    /// `ε`, primitive.
    pub fn nebentypus(&self) -> &DirichletCharacter {
        &self.nebentypus
    }

    pub fn dim_af(&self) -> u64 {
        self.dim_af
    }

    pub fn deg_f(&self) -> u64 {
        self.deg_f
    }

    pub fn schur_index(&self) -> u64 {
        self.schur_index
    }

    /// `dim B = t·[F:Q]`.
    pub fn dim_b(&self) -> u64 {
        self.schur_index * self.deg_f
    }

    /// `n` with `A_f ~_L B^n`.
    pub fn power(&self) -> u64 {
        self.dim_af / self.dim_b()
    }

    pub fn twists(&self) -> &InnerTwistStructure {
        &self.twists
    }

    pub fn group(&self) -> &CharacterGroup {
        &self.group
    }

    /// `[L:Q] = |G|`.
    pub fn degree(&self) -> u64 {
        self.group.order()
    }

    pub fn overrides(&self) -> &[LevelOverride] {
        &self.overrides
    }

    pub fn override_for(&self, chi: &DirichletCharacter, q: u64) -> Option<u32> {
        self.overrides
            .iter()
            .find(|o| &o.chi == chi && o.q == q)
            .map(|o| o.v)
    }

    /// Primes dividing `N·f_L`, the only ones where anything happens.
    pub fn relevant_primes(&self) -> Vec<u64> {
        prime_divisors(self.level * self.group.field_conductor())
    }

    /// Back to raw form (for re-serialization).
    pub fn to_data(&self) -> NewformData {
        NewformData {
            label: self.label.clone(),
            level: self.level,
            nebentypus: self.nebentypus.clone(),
            dim_af: self.dim_af,
            deg_f: self.deg_f,
            schur_index: self.schur_index,
            inner_twists: self.twists.elements().to_vec(),
            level_overrides: self.overrides.clone(),
        }
    }

    /// Copy with the level overrides replaced.
    pub fn with_overrides(&self, overrides: Vec<LevelOverride>) -> Result<Self, ConfigError> {
        let mut data = self.to_data();
        data.level_overrides = overrides;
        NewformConfig::try_from(data)
    }
}
