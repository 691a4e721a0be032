//! Bundled example configs with their published values, and the batch
//! comparison behind `blockcond fixtures`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::config::NewformConfig;
use crate::engine::{ConductorReport, Status};
use crate::report::rational_text;
use crate::schema::{parse_config_file, ExpectedFactor, ExpectedOrbit};
use crate::twists::orbit_decomposition;

pub const BUNDLED: [(&str, &str); 7] = [
    ("ex42", include_str!("../../../fixtures/ex42.json")),
    ("ex64", include_str!("../../../fixtures/ex64.json")),
    ("ex81", include_str!("../../../fixtures/ex81.json")),
    ("ex98a", include_str!("../../../fixtures/ex98a.json")),
    ("ex98b", include_str!("../../../fixtures/ex98b.json")),
    ("genus2", include_str!("../../../fixtures/genus2.json")),
    (
        "gamma0-512",
        include_str!("../../../fixtures/gamma0-512.json"),
    ),
];

pub fn bundled(name: &str) -> Option<&'static str> {
    let name = name.strip_suffix(".json").unwrap_or(name);
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

pub fn names() -> impl Iterator<Item = &'static str> {
    BUNDLED.iter().map(|(n, _)| *n)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixtureOutcome {
    pub name: String,
    pub passed: bool,
    pub mismatches: Vec<String>,
}

struct Diff(Vec<String>);

impl Diff {
    fn check<T: PartialEq + std::fmt::Debug>(&mut self, field: &str, want: Option<T>, got: T) {
        if let Some(want) = want {
            if want != got {
                self.0
                    .push(format!("{field}: expected {want:?}, got {got:?}"));
            }
        }
    }
}

fn status_tag(s: &Status) -> &'static str {
    match s {
        Status::Integral => "integral",
        Status::NotIntegral { .. } => "not_integral",
        Status::Indeterminate { .. } => "indeterminate",
    }
}

fn compare(text: &str) -> Result<Vec<String>, String> {
    let file = parse_config_file(text).map_err(|e| e.to_string())?;
    if file.provenance.as_ref().is_none_or(|p| p.is_empty()) {
        return Err("missing provenance block".into());
    }
    let expected = file.expected.clone().ok_or("missing expected block")?;
    let config = NewformConfig::try_from(file.data()).map_err(|e| e.to_string())?;
    let r = ConductorReport::compute(&config).map_err(|e| e.to_string())?;
    let mut d = Diff(Vec::new());

    d.check("status", expected.status.as_deref(), status_tag(&r.status));
    if let Some(w) = expected.witness {
        let got = match r.status {
            Status::NotIntegral { witness } => Some(witness),
            _ => None,
        };
        d.check("witness", Some(Some(w)), got);
    }
    d.check(
        "generator",
        expected.generator.map(Some),
        r.generator.as_ref().map(|g| g.to_string()),
    );
    d.check(
        "field_conductor",
        expected.field_conductor,
        r.field_conductor,
    );
    d.check("degree", expected.degree, r.degree);
    d.check(
        "case",
        expected.case.as_deref(),
        r.classification.case.tag(),
    );
    d.check("p2_size", expected.p2_size, r.classification.p2_size);
    d.check(
        "residual",
        expected.residual.map(Some),
        r.residual.as_ref().map(rational_text),
    );
    let norms: BTreeMap<String, Option<u32>> = r
        .norm_valuations
        .iter()
        .map(|(q, v)| (q.to_string(), v.exact()))
        .collect();
    d.check(
        "norm_valuations",
        expected
            .norm_valuations
            .map(|m| m.into_iter().map(|(k, v)| (k, Some(v))).collect()),
        norms,
    );
    let ideal: Option<Vec<ExpectedFactor>> = r.factors.as_ref().map(|fs| {
        fs.iter()
            .filter(|p| p.n > 0)
            .map(|p| ExpectedFactor {
                q: p.q,
                e: p.splitting.e,
                f: p.splitting.f,
                g: p.splitting.g,
                n: p.n,
            })
            .collect()
    });
    d.check("ideal", expected.ideal.map(Some), ideal);
    let mut levels: BTreeMap<String, Vec<Option<u32>>> = BTreeMap::new();
    for (q, _, e) in r.table.iter() {
        levels
            .entry(q.to_string())
            .or_default()
            .push(e.exponent.exact());
    }
    for v in levels.values_mut() {
        v.sort();
    }
    d.check(
        "levels",
        expected.levels.map(|m| {
            m.into_iter()
                .map(|(k, mut v)| {
                    v.sort();
                    (k, v.into_iter().map(Some).collect())
                })
                .collect()
        }),
        levels,
    );
    if let Some(want) = expected.orbits {
        match orbit_decomposition(
            config.group(),
            config.twists(),
            config.deg_f(),
            config.schur_index(),
        ) {
            Ok(dec) => {
                let got: Vec<ExpectedOrbit> = dec
                    .orbits
                    .iter()
                    .map(|o| ExpectedOrbit {
                        size: o.orbit_size,
                        dim: o.dim,
                        multiplicity: o.multiplicity,
                    })
                    .collect();
                d.check("orbits", Some(want), got);
            }
            Err(e) => d.0.push(format!("orbits: {e}")),
        }
    }
    Ok(d.0)
}

/// Runs one fixture file against its `expected` block.
pub fn check_fixture(name: &str, text: &str) -> FixtureOutcome {
    let mismatches = compare(text).unwrap_or_else(|e| vec![format!("error: {e}")]);
    FixtureOutcome {
        name: name.to_string(),
        passed: mismatches.is_empty(),
        mismatches,
    }
}

pub fn run_all_fixtures() -> Vec<FixtureOutcome> {
    BUNDLED
        .iter()
        .map(|(name, text)| check_fixture(name, text))
        .collect()
}

pub fn outcomes_text(outcomes: &[FixtureOutcome]) -> String {
    let mut out = String::new();
    for o in outcomes {
        out.push_str(&format!(
            "{:<12} {}\n",
            o.name,
            if o.passed { "pass" } else { "FAIL" }
        ));
        for m in &o.mismatches {
            out.push_str(&format!("    {m}\n"));
        }
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    out.push_str(&format!("{passed}/{} pass\n", outcomes.len()));
    out
}
