//! Inner twists: the group `Gal(E/F)` as a list of pairs `(χ_s, e_s)`, its
//! action `s·χ = χ_s·ˢχ` on the character group, and the orbit data that
//! describes the restriction of scalars of the building block.
//!
//! The Galois action on character values is carried by one integer `e_s`,
//! prime to the exponent of the group: `ˢχ = χ^{e_s}`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{gcd, prime_divisors};
use crate::character::DirichletCharacter;
use crate::group::CharacterGroup;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaloisElement {
    pub label: String,
    pub chi: DirichletCharacter,
    pub galois_exp: u64,
}

impl GaloisElement {
    pub fn identity() -> Self {
        GaloisElement {
            label: "1".to_string(),
            chi: DirichletCharacter::trivial(),
            galois_exp: 1,
        }
    }

    /// `ˢχ`.
    pub fn conjugate(&self, chi: &DirichletCharacter) -> DirichletCharacter {
        // e_s only matters modulo the order of χ
        chi.pow((self.galois_exp % chi.order()) as i64)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TwistError {
    #[error("{label}·{chi} = {result} is not an element of G")]
    EscapesGroup {
        label: String,
        chi: DirichletCharacter,
        result: DirichletCharacter,
    },
    #[error("orbit of {chi} has {orbit} elements but isotropy of order {isotropy} in a group of order {group}")]
    NotAnAction {
        chi: DirichletCharacter,
        orbit: u64,
        isotropy: u64,
        group: u64,
    },
}

/// One failed check of [`validate_structure`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureDiagnostic {
    #[error("identity element {label} has galois_exp {exp}, expected 1 mod {modulus}")]
    IdentityExponent {
        label: String,
        exp: u64,
        modulus: u64,
    },
    #[error("{label}: galois_exp {exp} is not prime to {modulus}")]
    ExponentNotCoprime {
        label: String,
        exp: u64,
        modulus: u64,
    },
    #[error("{first} and {second} carry the same twist character")]
    DuplicateCharacter { first: String, second: String },
    #[error("{label}: conductor {conductor} not supported on N = {level}")]
    ConductorNotSupported {
        label: String,
        conductor: u64,
        level: u64,
    },
    #[error("structure has {found} elements, expected dim_Af/deg_F = {expected}")]
    Cardinality { found: u64, expected: u64 },
    #[error("{left}∘{right}: twist character {chi} is not in the structure")]
    NotClosed {
        left: String,
        right: String,
        chi: DirichletCharacter,
    },
    #[error("{left}∘{right}: cocycle gives galois_exp {expected} but {found} has {actual}")]
    CocycleMismatch {
        left: String,
        right: String,
        found: String,
        expected: u64,
        actual: u64,
    },
    #[error("{label}: χ_s² differs from ˢε/ε")]
    NebentypusIncompatible { label: String },
    #[error("G is not the group generated by the twist characters")]
    GroupMismatch,
}

/// The inner twists of a newform, identity first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InnerTwistStructure {
    elements: Vec<GaloisElement>,
}

impl InnerTwistStructure {
    /// Normalizes twist characters to primitive form and synthesizes the
    /// identity element when no element has trivial character.
    pub fn new(elements: Vec<GaloisElement>) -> Self {
        let mut elements: Vec<GaloisElement> = elements
            .into_iter()
            .map(|mut s| {
                s.chi = s.chi.primitive();
                s
            })
            .collect();
        match elements.iter().position(|s| s.chi.is_trivial()) {
            Some(i) => {
                let id = elements.remove(i);
                elements.insert(0, id);
            }
            None => elements.insert(0, GaloisElement::identity()),
        }
        InnerTwistStructure { elements }
    }

    pub fn elements(&self) -> &[GaloisElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn identity(&self) -> &GaloisElement {
        &self.elements[0]
    }

    pub fn characters(&self) -> Vec<DirichletCharacter> {
        self.elements.iter().map(|s| s.chi.clone()).collect()
    }

    /// The group `G` generated by all `χ_s`.
    pub fn character_group(&self) -> CharacterGroup {
        CharacterGroup::generate(&self.characters())
    }

    pub fn find(&self, chi: &DirichletCharacter) -> Option<&GaloisElement> {
        self.elements.iter().find(|s| &s.chi == chi)
    }

    /// `(χ_{s∘t}, e_{s∘t}) = (χ_s·ˢχ_t, e_s·e_t mod m)`.
    pub fn compose(
        s: &GaloisElement,
        t: &GaloisElement,
        modulus: u64,
    ) -> (DirichletCharacter, u64) {
        let chi = s.chi.mul(&s.conjugate(&t.chi));
        let exp = ((s.galois_exp as u128 * t.galois_exp as u128) % modulus as u128) as u64;
        (chi, exp)
    }
}

/// `s·χ = χ_s·ˢχ`.
pub fn act(
    s: &GaloisElement,
    chi: &DirichletCharacter,
    group: &CharacterGroup,
) -> Result<DirichletCharacter, TwistError> {
    let result = s.chi.mul(&s.conjugate(chi));
    if group.contains(&result) {
        Ok(result)
    } else {
        Err(TwistError::EscapesGroup {
            label: s.label.clone(),
            chi: chi.clone(),
            result,
        })
    }
}

/// Checks closure, the cocycle identity, the size `[E:F]`, conductor support
/// on `N`, compatibility with the nebentypus and that `G = ⟨χ_s⟩`.
pub fn validate_structure(
    structure: &InnerTwistStructure,
    group: &CharacterGroup,
    level: u64,
    nebentypus: &DirichletCharacter,
    dim_af: u64,
    deg_f: u64,
) -> Result<(), Vec<StructureDiagnostic>> {
    let mut diags = Vec::new();
    let m = group.exponent();
    let elems = structure.elements();

    if structure.character_group() != *group {
        diags.push(StructureDiagnostic::GroupMismatch);
    }

    let id = structure.identity();
    if id.galois_exp % m != 1 % m {
        diags.push(StructureDiagnostic::IdentityExponent {
            label: id.label.clone(),
            exp: id.galois_exp,
            modulus: m,
        });
    }

    let level_primes = prime_divisors(level);
    for (i, s) in elems.iter().enumerate() {
        if gcd(s.galois_exp, m) != 1 {
            diags.push(StructureDiagnostic::ExponentNotCoprime {
                label: s.label.clone(),
                exp: s.galois_exp,
                modulus: m,
            });
        }
        if prime_divisors(s.chi.conductor())
            .iter()
            .any(|p| !level_primes.contains(p))
        {
            diags.push(StructureDiagnostic::ConductorNotSupported {
                label: s.label.clone(),
                conductor: s.chi.conductor(),
                level,
            });
        }
        if let Some(t) = elems[..i].iter().find(|t| t.chi == s.chi) {
            diags.push(StructureDiagnostic::DuplicateCharacter {
                first: t.label.clone(),
                second: s.label.clone(),
            });
        }
        // ˢf = f ⊗ χ_s forces ˢε = ε·χ_s²
        let expected = s.conjugate(nebentypus).mul(&nebentypus.inverse());
        if s.chi.pow(2) != expected {
            diags.push(StructureDiagnostic::NebentypusIncompatible {
                label: s.label.clone(),
            });
        }
    }

    let expected = if deg_f == 0 || !dim_af.is_multiple_of(deg_f) {
        0
    } else {
        dim_af / deg_f
    };
    if elems.len() as u64 != expected {
        diags.push(StructureDiagnostic::Cardinality {
            found: elems.len() as u64,
            expected,
        });
    }

    for s in elems {
        for t in elems {
            let (chi, exp) = InnerTwistStructure::compose(s, t, m);
            match structure.find(&chi) {
                None => diags.push(StructureDiagnostic::NotClosed {
                    left: s.label.clone(),
                    right: t.label.clone(),
                    chi,
                }),
                Some(u) if u.galois_exp % m != exp => {
                    diags.push(StructureDiagnostic::CocycleMismatch {
                        left: s.label.clone(),
                        right: t.label.clone(),
                        found: u.label.clone(),
                        expected: exp,
                        actual: u.galois_exp % m,
                    })
                }
                Some(_) => {}
            }
        }
    }

    if diags.is_empty() {
        Ok(())
    } else {
        Err(diags)
    }
}

/// One orbit of `Gal(E/F)` on `G`, contributing `(A_{f⊗χ})^t` to the
/// restriction of scalars.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Orbit {
    pub representative: DirichletCharacter,
    pub members: Vec<DirichletCharacter>,
    pub isotropy_order: u64,
    pub orbit_size: u64,
    /// `dim A_{f⊗χ} = [Gal(E/F):I_χ]·[F:Q]`.
    pub dim: u64,
    pub multiplicity: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitDecomposition {
    pub orbits: Vec<Orbit>,
}

impl OrbitDecomposition {
    /// `Σ t·dim A_{f⊗χ}` over the orbit representatives.
    pub fn total_dimension(&self) -> u64 {
        self.orbits.iter().map(|o| o.multiplicity * o.dim).sum()
    }
}

/// Orbits of the twist action on `G`. Representatives are the smallest
/// members in encoding order, so the orbit of the trivial character (the
/// factor `A_f`) comes first.
pub fn orbit_decomposition(
    group: &CharacterGroup,
    structure: &InnerTwistStructure,
    deg_f: u64,
    schur_index: u64,
) -> Result<OrbitDecomposition, TwistError> {
    let mut visited: BTreeSet<DirichletCharacter> = BTreeSet::new();
    let mut orbits = Vec::new();
    for chi in group.elements() {
        if visited.contains(chi) {
            continue;
        }
        let mut members = BTreeSet::new();
        let mut isotropy = 0;
        for s in structure.elements() {
            let image = act(s, chi, group)?;
            if &image == chi {
                isotropy += 1;
            }
            members.insert(image);
        }
        let size = members.len() as u64;
        if size * isotropy != structure.len() as u64 || !members.contains(chi) {
            return Err(TwistError::NotAnAction {
                chi: chi.clone(),
                orbit: size,
                isotropy,
                group: structure.len() as u64,
            });
        }
        visited.extend(members.iter().cloned());
        orbits.push(Orbit {
            representative: chi.clone(),
            members: members.into_iter().collect(),
            isotropy_order: isotropy,
            orbit_size: size,
            dim: size * deg_f,
            multiplicity: schur_index,
        });
    }
    Ok(OrbitDecomposition { orbits })
}
