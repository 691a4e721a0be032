//! The finite group of characters cut out by the inner twists, identified with
//! the dual of `Gal(L/Q)` for the abelian field `L` it determines.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::arith::{factorize, lcm, prime_divisors, valuation};
use crate::character::DirichletCharacter;

/// Decomposition data `(e, f, g)` of a rational prime in `L`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplittingData {
    pub e: u64,
    pub f: u64,
    pub g: u64,
}

/// A finite group of primitive Dirichlet characters, materialized in full.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterGroup {
    elements: Vec<DirichletCharacter>,
    generators: Vec<DirichletCharacter>,
}

impl CharacterGroup {
    /// Closure of `gens` under multiplication. Elements are kept sorted by
    /// their encoding, so the trivial character comes first.
    pub fn generate(gens: &[DirichletCharacter]) -> Self {
        let generators: Vec<DirichletCharacter> = gens.iter().map(|g| g.primitive()).collect();
        let mut seen: BTreeSet<DirichletCharacter> = BTreeSet::new();
        seen.insert(DirichletCharacter::trivial());
        let mut frontier = vec![DirichletCharacter::trivial()];
        while let Some(x) = frontier.pop() {
            for g in &generators {
                let y = x.mul(g);
                if seen.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        CharacterGroup {
            elements: seen.into_iter().collect(),
            generators,
        }
    }

    pub fn trivial() -> Self {
        Self::generate(&[])
    }

    pub fn elements(&self) -> &[DirichletCharacter] {
        &self.elements
    }

    pub fn generators(&self) -> &[DirichletCharacter] {
        &self.generators
    }

    /// `|G|`, which is also `[L:Q]`.
    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn contains(&self, chi: &DirichletCharacter) -> bool {
        self.elements.binary_search(chi).is_ok()
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self) -> u64 {
        self.elements.iter().fold(1, |acc, c| lcm(acc, c.order()))
    }

    /// Conductor `f_L` of the fixed field: the lcm of the element conductors.
    pub fn field_conductor(&self) -> u64 {
        self.elements
            .iter()
            .fold(1, |acc, c| lcm(acc, c.conductor()))
    }

    /// `|d_{L/Q}|` by the conductor-discriminant formula.
    pub fn discriminant(&self) -> BigUint {
        self.elements
            .iter()
            .fold(BigUint::from(1u32), |acc, c| acc * c.conductor())
    }

    /// Primes dividing `f_L`.
    pub fn ramified_primes(&self) -> Vec<u64> {
        prime_divisors(self.field_conductor())
    }

    /// Splitting of the rational prime `q` in `L`.
    ///
    /// The inertia group is dual to the characters ramified at `q`, and the
    /// Frobenius class is read off from the values at `q` of the rest.
    pub fn splitting(&self, q: u64) -> SplittingData {
        let unramified: Vec<&DirichletCharacter> = self
            .elements
            .iter()
            .filter(|c| c.conductor() % q != 0)
            .collect();
        let e = self.order() / unramified.len() as u64;
        let f = unramified.iter().fold(1, |acc, c| {
            let v = c.evaluate(q).expect("unramified at q");
            lcm(acc, v.order())
        });
        SplittingData {
            e,
            f,
            g: self.order() / (e * f),
        }
    }

    /// The set `{χ_q : χ ∈ G}` of `q`-primary components.
    pub fn primary_parts(&self, q: u64) -> BTreeSet<DirichletCharacter> {
        self.elements
            .iter()
            .map(|c| c.primary_component(q))
            .collect()
    }

    /// Invariant factors `d_1 | d_2 | ...`, from counting solutions of `x^{r^j} = 1`.
    pub fn invariant_factors(&self) -> Vec<u64> {
        // for each prime r, the partition of the r-primary part
        let mut per_prime: Vec<(u64, Vec<u32>)> = Vec::new();
        for (r, _) in factorize(self.order()) {
            let mut prev = 1u64;
            let mut counts = Vec::new(); // counts[j-1] = #factors of order >= r^j
            for j in 1.. {
                let rj = r.pow(j);
                let c = self
                    .elements
                    .iter()
                    .filter(|x| x.pow(rj as i64).is_trivial())
                    .count() as u64;
                if c == prev {
                    break;
                }
                counts.push(valuation(c / prev, r));
                prev = c;
            }
            // exponents of the cyclic r-factors, largest first
            let n_factors = counts.first().copied().unwrap_or(0);
            let exps: Vec<u32> = (0..n_factors)
                .map(|i| counts.iter().filter(|&&c| c > i).count() as u32)
                .collect();
            per_prime.push((r, exps));
        }
        let len = per_prime.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
        let mut factors: Vec<u64> = (0..len)
            .map(|i| {
                per_prime
                    .iter()
                    .map(|(r, e)| e.get(i).map_or(1, |&x| r.pow(x)))
                    .product()
            })
            .collect();
        factors.reverse();
        factors
    }
}
