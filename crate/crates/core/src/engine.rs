//! The conductor `𝒩_L(B)`: per-prime norm exponents from the level table,
//! integrality, the ideal factorization in `L`, and the closed-form checks.
//!
//! The central identity, for every prime `q`:
//!
//! ```text
//! v_q(N_{L/Q} 𝒩_L(B)) = dim B · Σ_{χ∈G} v_q(N_χ) − 2 · dim B · Σ_{χ∈G} v_q(f_χ)
//! ```
//!
//! Each prime above `q` carries the same exponent `n_q`, so the norm exponent
//! is `n_q·f_q·g_q`, and `𝒩_L(B)` is generated by a rational integer exactly
//! when `e_q | n_q` for all `q`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow};
use serde::Serialize;
use thiserror::Error;

use crate::arith::{is_squarefree, prime_divisors, valuation};
use crate::character::DirichletCharacter;
use crate::config::NewformConfig;
use crate::group::SplittingData;
use crate::levels::{level_table, LevelError, LevelExponent, LevelTable};

/// An unresolved table entry and the range an override must come from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NeededOverride {
    pub chi: DirichletCharacter,
    pub q: u64,
    pub range: LevelExponent,
}

impl fmt::Display for NeededOverride {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{{\"chi\": {}, \"q\": {}, \"v\": {}..={}}}",
            serde_json::to_string(&self.chi).map_err(|_| fmt::Error)?,
            self.q,
            self.range.lo(),
            self.range.hi()
        )
    }
}

fn list<T: fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("inconsistent input at q = {q}: {detail}")]
    Inconsistent { q: u64, detail: String },
    #[error(
        "indeterminate: v_{q}(Norm N_L(B)) ∈ {range} contains both multiples and non-multiples of [L:Q] = {degree}; \
         add level_overrides {}", list(.needed)
    )]
    Indeterminate {
        q: u64,
        range: LevelExponent,
        degree: u64,
        needed: Vec<NeededOverride>,
    },
    #[error("good-reduction criterion needs squarefree N, got N = {0}")]
    RemarkInapplicable(u64),
    #[error(transparent)]
    Level(#[from] LevelError),
}

/// `v_q(N_{L/Q}(𝒩_L(B)))`, exact when every table entry at `q` is exact.
pub fn norm_conductor_exponent(
    config: &NewformConfig,
    table: &LevelTable,
    q: u64,
) -> Result<LevelExponent, EngineError> {
    let dim_b = config.dim_b() as i64;
    let (mut lo, mut hi, mut fsum) = (0i64, 0i64, 0i64);
    for chi in config.group().elements() {
        let e = table.get(chi, q).ok_or_else(|| EngineError::Inconsistent {
            q,
            detail: format!("no level entry for {chi}"),
        })?;
        lo += e.exponent.lo() as i64;
        hi += e.exponent.hi() as i64;
        fsum += valuation(chi.conductor(), q) as i64;
    }
    let lo = dim_b * lo - 2 * dim_b * fsum;
    let hi = dim_b * hi - 2 * dim_b * fsum;
    if hi < 0 {
        let detail = if lo == hi {
            format!("norm exponent would be {hi}")
        } else {
            format!("norm exponent bounded above by {hi}")
        };
        return Err(EngineError::Inconsistent { q, detail });
    }
    Ok(LevelExponent::interval(lo.max(0) as u32, hi as u32))
}

/// Norm exponents at every prime dividing `N·f_L`.
pub fn norm_valuations(
    config: &NewformConfig,
    table: &LevelTable,
) -> Result<BTreeMap<u64, LevelExponent>, EngineError> {
    config
        .relevant_primes()
        .into_iter()
        .map(|q| Ok((q, norm_conductor_exponent(config, table, q)?)))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Integrality {
    Integral,
    NotIntegral { witness: u64 },
}

fn has_multiple(range: LevelExponent, d: u64) -> bool {
    let (lo, hi) = (range.lo() as u64, range.hi() as u64);
    lo.div_ceil(d) * d <= hi
}

fn verdict(
    config: &NewformConfig,
    table: &LevelTable,
    norms: &BTreeMap<u64, LevelExponent>,
) -> Result<Integrality, EngineError> {
    let d = config.degree();
    if let Some(&q) = norms
        .iter()
        .find(|(_, r)| !has_multiple(**r, d))
        .map(|(q, _)| q)
    {
        return Ok(Integrality::NotIntegral { witness: q });
    }
    if let Some((&q, &range)) = norms.iter().find(|(_, r)| r.exact().is_none()) {
        let needed = table
            .unresolved()
            .into_iter()
            .filter(|(p, _, _)| *p == q)
            .map(|(q, chi, range)| NeededOverride { chi, q, range })
            .collect();
        return Err(EngineError::Indeterminate {
            q,
            range,
            degree: d,
            needed,
        });
    }
    Ok(Integrality::Integral)
}

/// Whether `𝒩_L(B)` is generated by a rational integer, with the first
/// prime that rules it out.
pub fn integrality(config: &NewformConfig) -> Result<Integrality, EngineError> {
    let table = level_table(config)?;
    let norms = norm_valuations(config, &table)?;
    verdict(config, &table, &norms)
}

/// The primes of `L` above `q` and their common exponent in `𝒩_L(B)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeFactor {
    pub q: u64,
    pub splitting: SplittingData,
    pub norm_exponent: u32,
    /// `n_q = v_q(Norm)/(f_q·g_q)`.
    pub n: u32,
    /// `n_q/e_q` when `e_q | n_q`, i.e. `∏ 𝔮ᵢ^{n_q} = q^{n_q/e_q}·O_L`.
    pub generator_exponent: Option<u32>,
}

fn factor_at(
    config: &NewformConfig,
    q: u64,
    range: LevelExponent,
) -> Result<PrimeFactor, EngineError> {
    let norm_exponent = range.exact().ok_or_else(|| EngineError::Inconsistent {
        q,
        detail: format!("ideal factorization needs an exact norm exponent, got {range}"),
    })?;
    let splitting = config.group().splitting(q);
    let fg = splitting.f * splitting.g;
    if !(norm_exponent as u64).is_multiple_of(fg) {
        return Err(EngineError::Inconsistent {
            q,
            detail: format!("f·g = {fg} does not divide v_q(Norm) = {norm_exponent}"),
        });
    }
    let n = (norm_exponent as u64 / fg) as u32;
    Ok(PrimeFactor {
        q,
        splitting,
        norm_exponent,
        n,
        generator_exponent: (n as u64)
            .is_multiple_of(splitting.e)
            .then(|| (n as u64 / splitting.e) as u32),
    })
}

/// Factorization of `𝒩_L(B)` over all primes dividing `N·f_L`, including
/// those with exponent 0.
pub fn ideal_factorization(config: &NewformConfig) -> Result<Vec<PrimeFactor>, EngineError> {
    let table = level_table(config)?;
    norm_valuations(config, &table)?
        .into_iter()
        .map(|(q, r)| factor_at(config, q, r))
        .collect()
}

/// Which proved formula applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Case {
    #[serde(rename = "OddN_OrdLeq2")]
    OddLevelQuadratic,
    #[serde(rename = "Squarefree")]
    Squarefree,
    #[serde(rename = "Gamma0_P2le2")]
    TrivialNebentypus,
    #[serde(rename = "Gamma0_P2eq4")]
    TrivialNebentypusFull2,
    #[serde(rename = "DimAf2_Quadratic")]
    QCurveSquare,
    #[serde(rename = "Unclassified")]
    Unclassified,
}

impl Case {
    pub fn tag(&self) -> &'static str {
        match self {
            Case::OddLevelQuadratic => "OddN_OrdLeq2",
            Case::Squarefree => "Squarefree",
            Case::TrivialNebentypus => "Gamma0_P2le2",
            Case::TrivialNebentypusFull2 => "Gamma0_P2eq4",
            Case::QCurveSquare => "DimAf2_Quadratic",
            Case::Unclassified => "Unclassified",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Case> {
        [
            Case::OddLevelQuadratic,
            Case::Squarefree,
            Case::TrivialNebentypus,
            Case::TrivialNebentypusFull2,
            Case::QCurveSquare,
            Case::Unclassified,
        ]
        .into_iter()
        .find(|c| c.tag() == tag)
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub case: Case,
    /// `|{χ₂ : χ ∈ G}|`.
    pub p2_size: usize,
    /// `N^{dim B}/(𝒩_L(B)·f_L^{dim B})` predicted by the case; `None` when unclassified.
    pub expected_residual: Option<u64>,
}

/// Case tag by the first hypothesis that holds.
///
/// For `ε = 1` with `|P₂| = 4` the valuation identity at 2 carries
/// `v₂(f_L)+1`, so the predicted residual is `2^{dim B}`.
pub fn classify(config: &NewformConfig) -> Classification {
    let n = config.level();
    let eps = config.nebentypus();
    let p2_size = config.group().primary_parts(2).len();
    let (case, expected) = if eps.is_trivial() && p2_size == 4 {
        (Case::TrivialNebentypusFull2, Some(1u64 << config.dim_b()))
    } else if n % 2 == 1 && eps.order() <= 2 {
        (Case::OddLevelQuadratic, Some(1))
    } else if is_squarefree(n) {
        (Case::Squarefree, Some(1))
    } else if eps.is_trivial() {
        (Case::TrivialNebentypus, Some(1))
    } else if config.dim_af() == 2
        && eps.order() <= 2
        && config.degree() == 2
        && config.dim_b() == 1
    {
        (Case::QCurveSquare, Some(1))
    } else {
        (Case::Unclassified, None)
    };
    Classification {
        case,
        p2_size,
        expected_residual: expected,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GoodReduction {
    pub good: Vec<u64>,
    pub bad: Vec<u64>,
}

/// For squarefree `N`: a prime above `q | N` is of good reduction for `B`
/// exactly when `q | f_ε`.
pub fn good_reduction(config: &NewformConfig) -> Result<GoodReduction, EngineError> {
    let n = config.level();
    if !is_squarefree(n) {
        return Err(EngineError::RemarkInapplicable(n));
    }
    let f_eps = config.nebentypus().conductor();
    let (good, bad) = prime_divisors(n)
        .into_iter()
        .partition(|q| f_eps.is_multiple_of(*q));
    Ok(GoodReduction { good, bad })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Status {
    Integral,
    NotIntegral {
        witness: u64,
    },
    Indeterminate {
        q: u64,
        range: LevelExponent,
        needed: Vec<NeededOverride>,
    },
}

/// Everything the engine knows about `𝒩_L(B)` for one config.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConductorReport {
    pub label: String,
    pub level: u64,
    pub degree: u64,
    pub dim_b: u64,
    pub field_conductor: u64,
    pub discriminant: BigUint,
    pub table: LevelTable,
    pub norm_valuations: BTreeMap<u64, LevelExponent>,
    pub splitting: BTreeMap<u64, SplittingData>,
    /// Present when every norm exponent is exact.
    pub factors: Option<Vec<PrimeFactor>>,
    pub status: Status,
    /// `∏ q^{n_q/e_q}` when integral.
    pub generator: Option<BigUint>,
    pub classification: Classification,
    /// `N^{dim B}/(𝒩_L(B)·f_L^{dim B})` when integral.
    pub residual: Option<BigRational>,
    /// `N^{d·dim B}/(Norm 𝒩_L(B)·f_L^{d·dim B})`, `d = [L:Q]`, when exact.
    pub norm_residual: Option<BigRational>,
}

fn pow(q: u64, e: u64) -> BigUint {
    Pow::pow(BigUint::from(q), e)
}

fn ratio(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

impl ConductorReport {
    pub fn compute(config: &NewformConfig) -> Result<Self, EngineError> {
        let table = level_table(config)?;
        let norms = norm_valuations(config, &table)?;
        let group = config.group();
        let splitting: BTreeMap<u64, SplittingData> =
            norms.keys().map(|&q| (q, group.splitting(q))).collect();

        let status = match verdict(config, &table, &norms) {
            Ok(Integrality::Integral) => Status::Integral,
            Ok(Integrality::NotIntegral { witness }) => Status::NotIntegral { witness },
            Err(EngineError::Indeterminate {
                q, range, needed, ..
            }) => Status::Indeterminate { q, range, needed },
            Err(e) => return Err(e),
        };
        let exact = norms.values().all(|r| r.exact().is_some());
        let factors = if exact {
            Some(
                norms
                    .iter()
                    .map(|(&q, &r)| factor_at(config, q, r))
                    .collect::<Result<Vec<_>, _>>()?,
            )
        } else {
            None
        };

        let dim_b = config.dim_b();
        let d = config.degree();
        let f_l = group.field_conductor();
        let generator = match (&status, &factors) {
            (Status::Integral, Some(fs)) => Some(fs.iter().fold(BigUint::one(), |acc, p| {
                acc * pow(p.q, p.generator_exponent.expect("integral") as u64)
            })),
            _ => None,
        };
        let residual = generator
            .as_ref()
            .map(|g| ratio(pow(config.level(), dim_b), g * pow(f_l, dim_b)));
        let norm_residual = factors.as_ref().map(|fs| {
            let norm = fs.iter().fold(BigUint::one(), |acc, p| {
                acc * pow(p.q, p.norm_exponent as u64)
            });
            ratio(pow(config.level(), dim_b * d), norm * pow(f_l, dim_b * d))
        });

        Ok(ConductorReport {
            label: config.label().to_string(),
            level: config.level(),
            degree: d,
            dim_b,
            field_conductor: f_l,
            discriminant: group.discriminant(),
            table,
            norm_valuations: norms,
            splitting,
            factors,
            status,
            generator,
            classification: classify(config),
            residual,
            norm_residual,
        })
    }

    pub fn is_integral(&self) -> bool {
        self.status == Status::Integral
    }

    /// `Some(true)` when a classified case's closed form is reproduced.
    pub fn closed_form_holds(&self) -> Option<bool> {
        let expected = self.classification.expected_residual?;
        Some(self.residual.as_ref() == Some(&BigRational::from_integer(expected.into())))
    }
}
