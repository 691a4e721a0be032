//! Exponents `v_q(N_χ)` of the levels of the twisted newforms `f⊗χ`.
//!
//! Each exponent comes from the first rule in a fixed chain that applies:
//!
//! 1. a user override;
//! 2. `χ_q = 1`: twisting by a character unramified at `q` keeps `v_q(N)`;
//! 3. `χ_q = χ_{s,q}` for an inner twist `s`: `f⊗χ` is a twist of `ˢf`,
//!    which has level `N`, by a character unramified at `q`;
//! 4. `N` squarefree and `q | f_ε` with `χ_q = ε_q^i`: exponent 1 when
//!    `i ∈ {0, n-1}` (`n = ord ε_q`, and `f̄ = f⊗ε^{-1}`), otherwise 2;
//! 5. `ε = 1`: the exponent is `v_q(N)`;
//! 6. otherwise only the Atkin–Li bound `N_χ | lcm(N, f_χ², f_χ·f_{εχ})`
//!    is known, and the result is the interval `[0, v_q(lcm)]`.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::arith::{is_squarefree, valuation};
use crate::character::DirichletCharacter;
use crate::config::NewformConfig;

/// An exactly known exponent or bounds on it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LevelExponent {
    Exact(u32),
    Interval { lo: u32, hi: u32 },
}

impl LevelExponent {
    /// `[lo, hi]`, collapsed to `Exact` when `lo == hi`.
    pub fn interval(lo: u32, hi: u32) -> Self {
        assert!(lo <= hi, "empty interval [{lo}, {hi}]");
        if lo == hi {
            LevelExponent::Exact(lo)
        } else {
            LevelExponent::Interval { lo, hi }
        }
    }

    pub fn lo(&self) -> u32 {
        match *self {
            LevelExponent::Exact(v) => v,
            LevelExponent::Interval { lo, .. } => lo,
        }
    }

    pub fn hi(&self) -> u32 {
        match *self {
            LevelExponent::Exact(v) => v,
            LevelExponent::Interval { hi, .. } => hi,
        }
    }

    pub fn exact(&self) -> Option<u32> {
        match *self {
            LevelExponent::Exact(v) => Some(v),
            LevelExponent::Interval { .. } => None,
        }
    }

    pub fn contains(&self, v: u32) -> bool {
        self.lo() <= v && v <= self.hi()
    }
}

impl fmt::Display for LevelExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            LevelExponent::Exact(v) => write!(f, "{v}"),
            LevelExponent::Interval { lo, hi } => write!(f, "[{lo}, {hi}]"),
        }
    }
}

impl Serialize for LevelExponent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(None)?;
        match *self {
            LevelExponent::Exact(v) => map.serialize_entry("exact", &v)?,
            LevelExponent::Interval { lo, hi } => {
                map.serialize_entry("lo", &lo)?;
                map.serialize_entry("hi", &hi)?;
            }
        }
        map.end()
    }
}

/// Which rule produced a table entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelRule {
    Override,
    Unramified,
    InnerTwistCoset,
    SquarefreeNebentypus,
    TrivialNebentypus,
    AtkinLiBound,
}

impl fmt::Display for LevelRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            LevelRule::Override => "override",
            LevelRule::Unramified => "R1 unramified",
            LevelRule::InnerTwistCoset => "R2 inner-twist coset",
            LevelRule::SquarefreeNebentypus => "R3 squarefree level",
            LevelRule::TrivialNebentypus => "R4 trivial nebentypus",
            LevelRule::AtkinLiBound => "R5 Atkin-Li bound",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LevelEntry {
    pub exponent: LevelExponent,
    pub rule: LevelRule,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LevelError {
    #[error("override v_{q}(N_χ) = {v} for χ = {chi} conflicts with {rule}, which gives {exact}")]
    OverrideConflict {
        chi: DirichletCharacter,
        q: u64,
        v: u32,
        rule: LevelRule,
        exact: u32,
    },
    #[error("override v_{q}(N_χ) = {v} for χ = {chi} exceeds the Atkin-Li bound {hi}")]
    OverrideOutOfBounds {
        chi: DirichletCharacter,
        q: u64,
        v: u32,
        hi: u32,
    },
}

fn v(n: u64, q: u64) -> u32 {
    valuation(n, q)
}

/// `v_q(lcm(N, f_χ², f_χ·f_{εχ}))`.
pub fn atkin_li_bound(config: &NewformConfig, chi: &DirichletCharacter, q: u64) -> u32 {
    let fc = v(chi.conductor(), q);
    let fec = v(config.nebentypus().mul(chi).conductor(), q);
    v(config.level(), q).max(2 * fc).max(fc + fec)
}

/// The rule chain without overrides.
pub fn rule_chain(config: &NewformConfig, chi: &DirichletCharacter, q: u64) -> LevelEntry {
    let vn = v(config.level(), q);
    let exact = |value, rule| LevelEntry {
        exponent: LevelExponent::Exact(value),
        rule,
    };
    let chi_q = chi.primary_component(q);
    if chi_q.is_trivial() {
        return exact(vn, LevelRule::Unramified);
    }
    if config
        .twists()
        .elements()
        .iter()
        .any(|s| s.chi.primary_component(q) == chi_q)
    {
        return exact(vn, LevelRule::InnerTwistCoset);
    }
    let eps = config.nebentypus();
    if is_squarefree(config.level()) && eps.conductor().is_multiple_of(q) {
        let eps_q = eps.primary_component(q);
        let n = eps_q.order();
        if let Some(i) = (0..n).find(|&i| eps_q.pow(i as i64) == chi_q) {
            let value = if i == 0 || i == n - 1 { 1 } else { 2 };
            return exact(value, LevelRule::SquarefreeNebentypus);
        }
    }
    if eps.is_trivial() {
        return exact(vn, LevelRule::TrivialNebentypus);
    }
    LevelEntry {
        exponent: LevelExponent::interval(0, atkin_li_bound(config, chi, q)),
        rule: LevelRule::AtkinLiBound,
    }
}

/// `v_q(N_χ)` with its provenance.
pub fn twist_level_exponent(
    config: &NewformConfig,
    chi: &DirichletCharacter,
    q: u64,
) -> Result<LevelEntry, LevelError> {
    let derived = rule_chain(config, chi, q);
    let Some(value) = config.override_for(chi, q) else {
        return Ok(derived);
    };
    match derived.exponent {
        LevelExponent::Exact(exact) if exact != value => Err(LevelError::OverrideConflict {
            chi: chi.clone(),
            q,
            v: value,
            rule: derived.rule,
            exact,
        }),
        e if !e.contains(value) => Err(LevelError::OverrideOutOfBounds {
            chi: chi.clone(),
            q,
            v: value,
            hi: e.hi(),
        }),
        _ => Ok(LevelEntry {
            exponent: LevelExponent::Exact(value),
            rule: LevelRule::Override,
        }),
    }
}

/// All exponents `v_q(N_χ)` for `χ ∈ G` and `q | N·f_L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelTable {
    entries: BTreeMap<(u64, DirichletCharacter), LevelEntry>,
}

impl LevelTable {
    pub fn get(&self, chi: &DirichletCharacter, q: u64) -> Option<&LevelEntry> {
        self.entries.get(&(q, chi.clone()))
    }

    /// Entries ordered by prime, then character.
    pub fn iter(&self) -> impl Iterator<Item = (u64, &DirichletCharacter, &LevelEntry)> {
        self.entries.iter().map(|((q, c), e)| (*q, c, e))
    }

    pub fn at_prime(&self, q: u64) -> impl Iterator<Item = (&DirichletCharacter, &LevelEntry)> {
        self.iter()
            .filter(move |(p, _, _)| *p == q)
            .map(|(_, c, e)| (c, e))
    }

    pub fn is_exact(&self) -> bool {
        self.entries.values().all(|e| e.exponent.exact().is_some())
    }

    /// Entries that only have bounds: what an override would have to supply.
    pub fn unresolved(&self) -> Vec<(u64, DirichletCharacter, LevelExponent)> {
        self.iter()
            .filter(|(_, _, e)| e.exponent.exact().is_none())
            .map(|(q, c, e)| (q, c.clone(), e.exponent))
            .collect()
    }
}

pub fn level_table(config: &NewformConfig) -> Result<LevelTable, LevelError> {
    let mut entries = BTreeMap::new();
    for q in config.relevant_primes() {
        for chi in config.group().elements() {
            entries.insert((q, chi.clone()), twist_level_exponent(config, chi, q)?);
        }
    }
    Ok(LevelTable { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::character::LocalCharacter;
    use crate::config::{LevelOverride, NewformData};
    use crate::twists::GaloisElement;

    fn kr(d: i64) -> DirichletCharacter {
        DirichletCharacter::kronecker(d).unwrap()
    }

    fn el(label: &str, chi: DirichletCharacter, exp: u64) -> GaloisElement {
        GaloisElement {
            label: label.into(),
            chi,
            galois_exp: exp,
        }
    }

    fn ex42() -> NewformConfig {
        NewformConfig::try_from(NewformData {
            label: "42".into(),
            level: 42,
            nebentypus: kr(21),
            dim_af: 4,
            deg_f: 1,
            schur_index: 1,
            inner_twists: vec![el("a", kr(-3), 1), el("b", kr(-7), 1), el("c", kr(21), 1)],
            level_overrides: vec![],
        })
        .unwrap()
    }

    fn eps98() -> DirichletCharacter {
        DirichletCharacter::from_locals(vec![LocalCharacter::odd(7, 1, 2).unwrap()]).unwrap()
    }

    fn ex98(overrides: Vec<LevelOverride>) -> NewformConfig {
        let eps = eps98();
        NewformConfig::try_from(NewformData {
            label: "98".into(),
            level: 98,
            nebentypus: eps.clone(),
            dim_af: 2,
            deg_f: 1,
            schur_index: 1,
            inner_twists: vec![el("c", eps.pow(2), 2)],
            level_overrides: overrides,
        })
        .unwrap()
    }

    /// N = 5·13, ε = ε_13 of order 4 (squarefree level, ord ε_q = 4).
    fn squarefree_quartic() -> NewformConfig {
        let eps =
            DirichletCharacter::from_locals(vec![LocalCharacter::odd(13, 1, 3).unwrap()]).unwrap();
        assert_eq!(eps.order(), 4);
        NewformConfig::try_from(NewformData {
            label: "65".into(),
            level: 65,
            nebentypus: eps.clone(),
            dim_af: 2,
            deg_f: 1,
            schur_index: 1,
            inner_twists: vec![el("c", eps.inverse(), 3)],
            level_overrides: vec![],
        })
        .unwrap()
    }

    #[test]
    fn inner_twist_character_keeps_level() {
        let c = ex42();
        let e = twist_level_exponent(&c, &kr(-3), 3).unwrap();
        assert_eq!(e.exponent, LevelExponent::Exact(1));
        assert_eq!(e.rule, LevelRule::InnerTwistCoset);
        let e = twist_level_exponent(&c, &kr(-3), 2).unwrap();
        assert_eq!(e.rule, LevelRule::Unramified);
    }

    #[test]
    fn squarefree_middle_case() {
        let c = squarefree_quartic();
        let eps_q = c.nebentypus().primary_component(13);
        let e = twist_level_exponent(&c, &eps_q.pow(2), 13).unwrap();
        assert_eq!(e.exponent, LevelExponent::Exact(2));
        assert_eq!(e.rule, LevelRule::SquarefreeNebentypus);
        // i = n-1 is the inner twist by ε^{-1}
        let e = twist_level_exponent(&c, &eps_q.pow(3), 13).unwrap();
        assert_eq!(e.exponent, LevelExponent::Exact(1));
        // i = 1: with inner twists {1, ε^{-1}} only R3 reaches it
        let e = twist_level_exponent(&c, &eps_q, 13).unwrap();
        assert_eq!(e.exponent, LevelExponent::Exact(2));
        assert_eq!(e.rule, LevelRule::SquarefreeNebentypus);
    }

    #[test]
    fn interval_fallback_and_override() {
        let c = ex98(vec![]);
        let e = twist_level_exponent(&c, &eps98(), 7).unwrap();
        assert_eq!(e.exponent, LevelExponent::Interval { lo: 0, hi: 2 });
        assert_eq!(e.rule, LevelRule::AtkinLiBound);

        let c = ex98(vec![LevelOverride {
            chi: eps98(),
            q: 7,
            v: 1,
        }]);
        let e = twist_level_exponent(&c, &eps98(), 7).unwrap();
        assert_eq!(e.exponent, LevelExponent::Exact(1));
        assert_eq!(e.rule, LevelRule::Override);
    }

    #[test]
    fn conflicting_overrides_fail() {
        let c = ex98(vec![LevelOverride {
            chi: DirichletCharacter::trivial(),
            q: 7,
            v: 1,
        }]);
        let err = twist_level_exponent(&c, &DirichletCharacter::trivial(), 7).unwrap_err();
        assert!(matches!(
            err,
            LevelError::OverrideConflict {
                rule: LevelRule::Unramified,
                exact: 2,
                ..
            }
        ));
        assert!(err.to_string().contains("R1"));
        let c = ex98(vec![LevelOverride {
            chi: eps98(),
            q: 7,
            v: 3,
        }]);
        assert!(matches!(
            level_table(&c),
            Err(LevelError::OverrideOutOfBounds { hi: 2, .. })
        ));
    }

    #[test]
    fn table_invariants() {
        for c in [ex42(), ex98(vec![]), squarefree_quartic()] {
            let t = level_table(&c).unwrap();
            for (q, chi, e) in t.iter() {
                let hi = atkin_li_bound(&c, chi, q);
                assert!(e.exponent.hi() <= hi, "{chi} at {q}");
                // R1 and R2 agree where both apply
                if chi.primary_component(q).is_trivial() {
                    assert_eq!(e.exponent, LevelExponent::Exact(valuation(c.level(), q)));
                }
                // conj(f⊗χ) = f⊗ε^{-1}χ^{-1}
                let partner = c.nebentypus().mul(chi).inverse();
                if let Some(p) = t.get(&partner, q) {
                    if e.rule != LevelRule::AtkinLiBound && p.rule != LevelRule::AtkinLiBound {
                        assert_eq!(e.exponent, p.exponent, "{chi} vs {partner} at {q}");
                    }
                }
            }
            for s in c.twists().elements() {
                for q in c.relevant_primes() {
                    assert_eq!(
                        t.get(&s.chi, q).unwrap().exponent,
                        LevelExponent::Exact(valuation(c.level(), q))
                    );
                }
            }
        }
    }
}
