//! Text and JSON renderings. JSON objects carry `schema_version`; integers
//! that do not fit in a `u64` are emitted as decimal strings.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::arith::factorize;
use crate::character::DirichletCharacter;
use crate::config::NewformConfig;
use crate::engine::{good_reduction, ConductorReport, PrimeFactor, Status};
use crate::levels::LevelTable;
use crate::twists::OrbitDecomposition;

pub const SCHEMA_VERSION: u32 = 1;

const SUB: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
const SUP: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];

fn digits(n: u64, table: &[char; 10]) -> String {
    n.to_string()
        .bytes()
        .map(|b| table[(b - b'0') as usize])
        .collect()
}

fn sup(n: u64) -> String {
    if n == 1 {
        String::new()
    } else {
        digits(n, &SUP)
    }
}

fn big_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(x) => json!(x),
        None => json!(n.to_string()),
    }
}

fn biguint_json(n: &BigUint) -> Value {
    match n.to_u64() {
        Some(x) => json!(x),
        None => json!(n.to_string()),
    }
}

fn rational_json(r: &BigRational) -> Value {
    json!({"num": big_json(r.numer()), "den": big_json(r.denom())})
}

/// `"a"` or `"a/b"`.
pub fn rational_text(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A readable name: `1`, a power of `ε`, `χ_d` for a quadratic character of
/// discriminant `d`, or the raw encoding.
pub fn character_name(chi: &DirichletCharacter, eps: &DirichletCharacter) -> String {
    if chi.is_trivial() {
        return "1".into();
    }
    if !eps.is_trivial() {
        if let Some(k) = (1..eps.order()).find(|&k| &eps.pow(k as i64) == chi) {
            return format!("ε{}", sup(k));
        }
    }
    if chi.order() == 2 {
        let f = chi.conductor() as i64;
        for d in [-f, f] {
            if DirichletCharacter::kronecker(d).ok().as_ref() == Some(chi) {
                return format!("χ_{d}");
            }
        }
    }
    chi.to_string()
}

fn factor_name(chi: &DirichletCharacter, eps: &DirichletCharacter) -> String {
    if chi.is_trivial() {
        "A_f".into()
    } else {
        format!("A_{{f⊗{}}}", character_name(chi, eps))
    }
}

/// `2^10·3^8`, or `1`.
pub fn factored(n: &BigUint, factors: &[PrimeFactor]) -> String {
    let parts: Vec<String> = factors
        .iter()
        .filter_map(|p| match p.generator_exponent {
            Some(0) | None => None,
            Some(1) => Some(p.q.to_string()),
            Some(e) => Some(format!("{}^{}", p.q, e)),
        })
        .collect();
    if parts.is_empty() {
        debug_assert_eq!(n, &BigUint::from(1u32));
        "1".into()
    } else {
        parts.join("·")
    }
}

fn prime_symbol(q: u64, g: u64) -> String {
    let p = format!("𝔭{}", digits(q, &SUB));
    if g == 1 {
        p
    } else {
        let each: Vec<String> = (1..=g)
            .map(|i| format!("{p},{}", digits(i, &SUB)))
            .collect();
        format!("({})", each.join("·"))
    }
}

/// `𝔭₂·𝔭₇² with f(𝔭₂)=3`.
pub fn ideal_text(factors: &[PrimeFactor]) -> String {
    let present: Vec<&PrimeFactor> = factors.iter().filter(|p| p.n > 0).collect();
    if present.is_empty() {
        return "(1)".into();
    }
    let body: Vec<String> = present
        .iter()
        .map(|p| format!("{}{}", prime_symbol(p.q, p.splitting.g), sup(p.n as u64)))
        .collect();
    let degrees: Vec<String> = present
        .iter()
        .filter(|p| p.splitting.f > 1)
        .map(|p| format!("f(𝔭{})={}", digits(p.q, &SUB), p.splitting.f))
        .collect();
    if degrees.is_empty() {
        body.join("·")
    } else {
        format!("{} with {}", body.join("·"), degrees.join(", "))
    }
}

pub fn analysis_text(r: &ConductorReport) -> String {
    let mut out = format!(
        "{}: N = {}, [L:Q] = {}, dim B = {}, f_L = {}, |d_L| = {}\n",
        r.label, r.level, r.degree, r.dim_b, r.field_conductor, r.discriminant
    );
    out.push_str(&format!(
        "{:>6}  {:>10}  {:>10}  {:>5}  {:>7}\n",
        "q", "v_q(Norm)", "(e,f,g)", "n_q", "n_q/e_q"
    ));
    for (q, v) in &r.norm_valuations {
        let s = &r.splitting[q];
        let factor = r
            .factors
            .as_ref()
            .and_then(|fs| fs.iter().find(|p| p.q == *q));
        let n = factor.map_or("-".into(), |p| p.n.to_string());
        let g = factor
            .and_then(|p| p.generator_exponent)
            .map_or("-".into(), |x| x.to_string());
        out.push_str(&format!(
            "{:>6}  {:>10}  {:>10}  {:>5}  {:>7}\n",
            q,
            v.to_string(),
            format!("({},{},{})", s.e, s.f, s.g),
            n,
            g
        ));
    }
    let case = &r.classification.case;
    match (&r.status, &r.factors) {
        (Status::Integral, Some(fs)) => {
            let gen = r.generator.as_ref().expect("integral");
            let residual = r.residual.as_ref().expect("integral");
            out.push_str(&format!(
                "N_L(B) = {}, f_L = {}, case {}, residual {}\n",
                factored(gen, fs),
                r.field_conductor,
                case,
                rational_text(residual)
            ));
        }
        (Status::NotIntegral { witness }, Some(fs)) => {
            out.push_str(&format!("non-integral; ideal = {}\n", ideal_text(fs)));
            let ramified: Vec<String> = fs
                .iter()
                .filter(|p| p.n > 0 && p.generator_exponent.is_none())
                .map(|p| format!("e(𝔭{})={}", digits(p.q, &SUB), p.splitting.e))
                .collect();
            out.push_str(&format!(
                "witness q = {witness}: {}; case {case}",
                ramified.join(", ")
            ));
            if let Some(nr) = &r.norm_residual {
                out.push_str(&format!(", norm residual {}", rational_text(nr)));
            }
            out.push('\n');
        }
        (Status::NotIntegral { witness }, None) => {
            out.push_str(&format!(
                "non-integral (witness q = {witness}); some exponents are only bounded; case {case}\n"
            ));
        }
        (Status::Indeterminate { q, range, needed }, _) => {
            out.push_str(&format!(
                "indeterminate: v_{q}(Norm N_L(B)) ∈ {range}, [L:Q] = {}; case {case}\n",
                r.degree
            ));
            for n in needed {
                out.push_str(&format!("  needs level override {n}\n"));
            }
        }
        (Status::Integral, None) => unreachable!("integral reports are exact"),
    }
    out
}

fn factor_json(p: &PrimeFactor) -> Value {
    json!({
        "q": p.q,
        "e": p.splitting.e,
        "f": p.splitting.f,
        "g": p.splitting.g,
        "norm_exponent": p.norm_exponent,
        "n": p.n,
        "generator_exponent": p.generator_exponent,
    })
}

pub fn analysis_json(r: &ConductorReport) -> Value {
    let norms: serde_json::Map<String, Value> = r
        .norm_valuations
        .iter()
        .map(|(q, v)| (q.to_string(), json!(v)))
        .collect();
    let splitting: serde_json::Map<String, Value> = r
        .splitting
        .iter()
        .map(|(q, s)| (q.to_string(), json!(s)))
        .collect();
    let integral = match r.status {
        Status::Integral => json!(true),
        Status::NotIntegral { .. } => json!(false),
        Status::Indeterminate { .. } => Value::Null,
    };
    json!({
        "schema_version": SCHEMA_VERSION,
        "label": r.label,
        "level": r.level,
        "degree": r.degree,
        "dim_B": r.dim_b,
        "field_conductor": r.field_conductor,
        "discriminant": biguint_json(&r.discriminant),
        "norm_valuations": norms,
        "splitting": splitting,
        "ideal": r.factors.as_ref().map(|fs| fs.iter().filter(|p| p.n > 0).map(factor_json).collect::<Vec<_>>()),
        "integral": integral,
        "status": r.status,
        "generator": r.generator.as_ref().map(biguint_json),
        "case": r.classification.case,
        "p2_size": r.classification.p2_size,
        "expected_residual": r.classification.expected_residual,
        "closed_form_holds": r.closed_form_holds(),
        "residual": r.residual.as_ref().map(rational_json),
        "norm_residual": r.norm_residual.as_ref().map(rational_json),
    })
}

fn member_list(chars: &[DirichletCharacter], eps: &DirichletCharacter) -> String {
    let names: Vec<String> = chars.iter().map(|c| character_name(c, eps)).collect();
    format!("{{{}}}", names.join(", "))
}

pub fn decomposition_text(config: &NewformConfig, d: &OrbitDecomposition) -> String {
    let eps = config.nebentypus();
    let factors: Vec<String> = d
        .orbits
        .iter()
        .map(|o| {
            format!(
                "{}{} (dim {})",
                factor_name(&o.representative, eps),
                sup(o.multiplicity),
                o.dim
            )
        })
        .collect();
    let mut out = format!("Res_{{L/Q}}(B) ~ {}\n", factors.join(" × "));
    for o in &d.orbits {
        out.push_str(&format!(
            "  orbit {}: size {}, |I_χ| = {}, dim {}, multiplicity {}\n",
            member_list(&o.members, eps),
            o.orbit_size,
            o.isotropy_order,
            o.dim,
            o.multiplicity
        ));
    }
    out.push_str(&format!(
        "  total dimension {} = [L:Q]·dim B = {}·{}\n",
        d.total_dimension(),
        config.degree(),
        config.dim_b()
    ));
    out
}

pub fn decomposition_json(config: &NewformConfig, d: &OrbitDecomposition) -> Value {
    let eps = config.nebentypus();
    let orbits: Vec<Value> = d
        .orbits
        .iter()
        .map(|o| {
            json!({
                "representative": o.representative,
                "name": factor_name(&o.representative, eps),
                "members": o.members,
                "orbit_size": o.orbit_size,
                "isotropy_order": o.isotropy_order,
                "dim": o.dim,
                "multiplicity": o.multiplicity,
            })
        })
        .collect();
    json!({
        "schema_version": SCHEMA_VERSION,
        "label": config.label(),
        "orbits": orbits,
        "total_dimension": d.total_dimension(),
        "degree": config.degree(),
        "dim_B": config.dim_b(),
    })
}

pub fn levels_text(config: &NewformConfig, t: &LevelTable) -> String {
    let eps = config.nebentypus();
    let mut out = format!("{:>6}  {:<20}  {:>9}  rule\n", "q", "χ", "v_q(N_χ)");
    for (q, chi, e) in t.iter() {
        out.push_str(&format!(
            "{:>6}  {:<20}  {:>9}  {}\n",
            q,
            character_name(chi, eps),
            e.exponent.to_string(),
            e.rule
        ));
    }
    out
}

pub fn levels_json(config: &NewformConfig, t: &LevelTable) -> Value {
    let eps = config.nebentypus();
    let entries: Vec<Value> = t
        .iter()
        .map(|(q, chi, e)| {
            json!({
                "q": q,
                "chi": chi,
                "name": character_name(chi, eps),
                "exponent": e.exponent,
                "rule": e.rule,
            })
        })
        .collect();
    json!({"schema_version": SCHEMA_VERSION, "label": config.label(), "levels": entries})
}

pub fn check_text(config: &NewformConfig, r: &ConductorReport) -> String {
    let c = &r.classification;
    let mut out = format!("case {}, |P₂| = {}", c.case, c.p2_size);
    match &r.residual {
        Some(res) => out.push_str(&format!(", residual {}", rational_text(res))),
        None => out.push_str(", residual undefined (N_L(B) not a rational integer)"),
    }
    match (c.expected_residual, r.closed_form_holds()) {
        (Some(e), Some(true)) => out.push_str(&format!(", expected {e}: closed form holds")),
        (Some(e), _) => out.push_str(&format!(", expected {e}: closed form FAILS")),
        (None, _) => out.push_str(", no closed form"),
    }
    out.push('\n');
    if let Ok(gr) = good_reduction(config) {
        out.push_str(&format!(
            "good reduction above {:?}, bad above {:?}\n",
            gr.good, gr.bad
        ));
    }
    out
}

pub fn check_json(config: &NewformConfig, r: &ConductorReport) -> Value {
    let c = &r.classification;
    json!({
        "schema_version": SCHEMA_VERSION,
        "label": config.label(),
        "case": c.case,
        "p2_size": c.p2_size,
        "expected_residual": c.expected_residual,
        "residual": r.residual.as_ref().map(rational_json),
        "closed_form_holds": r.closed_form_holds(),
        "good_reduction": good_reduction(config).ok(),
    })
}

/// Factorization of a positive integer as `p^a·q^b`.
pub fn integer_factored(n: u64) -> String {
    if n == 1 {
        return "1".into();
    }
    factorize(n)
        .into_iter()
        .map(|(p, e)| {
            if e == 1 {
                p.to_string()
            } else {
                format!("{p}^{e}")
            }
        })
        .collect::<Vec<_>>()
        .join("·")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digit_tables() {
        assert_eq!(digits(127, &SUB), "₁₂₇");
        assert_eq!(sup(1), "");
        assert_eq!(sup(12), "¹²");
        assert_eq!(integer_factored(62208), "2^8·3^5");
    }

    #[test]
    fn names() {
        let eps = DirichletCharacter::kronecker(21).unwrap();
        assert_eq!(character_name(&eps, &eps), "ε");
        let m3 = DirichletCharacter::kronecker(-3).unwrap();
        assert_eq!(character_name(&m3, &eps), "χ_-3");
        assert_eq!(character_name(&DirichletCharacter::trivial(), &eps), "1");
        let x8 = DirichletCharacter::kronecker(8).unwrap();
        assert_eq!(character_name(&x8, &DirichletCharacter::trivial()), "χ_8");
    }

    #[test]
    fn big_numbers_become_strings() {
        let small = BigUint::from(7u32);
        assert_eq!(biguint_json(&small), json!(7));
        let big = BigUint::from(u64::MAX) * 3u32;
        assert_eq!(biguint_json(&big), json!(big.to_string()));
        let r = BigRational::new(BigInt::from(6), BigInt::from(4));
        assert_eq!(rational_json(&r), json!({"num": 3, "den": 2}));
        assert_eq!(rational_text(&r), "3/2");
    }
}
