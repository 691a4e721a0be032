//! Dirichlet characters with exact values in `Q/Z`.
//!
//! A character modulo `M = ∏ p^k` is stored through its local components on
//! `(Z/p^k)^*`. For odd `p` the component is determined by its value at the
//! smallest positive primitive root `g` modulo `p^k`: `χ(g) = e^{2πi·a/φ(p^k)}`
//! with `a = gen_exp`. For `p = 2` the group `(Z/2^k)^*` is generated by `-1`
//! and `5`, and the component records the exponents of the values there:
//! `χ(-1) = (-1)^{minus_one_exp}` and `χ(5) = e^{2πi·five_exp/2^{k-2}}`.
//!
//! Group operations return characters in primitive form (modulus equal to
//! the conductor). Imprimitive characters only arise from [`DirichletCharacter::induce`]
//! or from building a character with an explicit modulus.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{
    crt, discrete_log, gcd, is_prime, lcm, primitive_root, totient_prime_power, valuation,
};
use crate::root::RootOfUnity;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharacterError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("exponent k must be at least 1 (prime {0})")]
    ZeroExponent(u64),
    #[error("{field} = {value} is out of range for {p}^{k} (must be < {bound})")]
    ExponentOutOfRange {
        field: &'static str,
        value: u64,
        p: u64,
        k: u32,
        bound: u64,
    },
    #[error("field {field} does not apply to a component at {p}^{k}")]
    FieldNotApplicable { field: &'static str, p: u64, k: u32 },
    #[error("prime {0} appears twice in the local components")]
    DuplicatePrime(u64),
    #[error("modulus {target} is not a multiple of {modulus}")]
    NotMultiple { modulus: u64, target: u64 },
    #[error("modulus overflows 64 bits")]
    Overflow,
    #[error("value {value} at generator {generator} has order not dividing {bound}")]
    BadGeneratorValue {
        generator: u64,
        value: RootOfUnity,
        bound: u64,
    },
    #[error("expected {expected} generator values, got {found}")]
    GeneratorCount { expected: usize, found: usize },
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),
}

/// Local component of a Dirichlet character at a prime power.
///
/// The variant order (`Two` first) together with the field order makes the
/// derived `Ord` sort components by prime.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LocalCharacter {
    Two {
        k: u32,
        minus_one_exp: u64,
        five_exp: u64,
    },
    Odd {
        p: u64,
        k: u32,
        gen_exp: u64,
    },
}

impl LocalCharacter {
    pub fn odd(p: u64, k: u32, gen_exp: u64) -> Result<Self, CharacterError> {
        if p == 2 || !is_prime(p) {
            return Err(CharacterError::NotPrime(p));
        }
        if k == 0 {
            return Err(CharacterError::ZeroExponent(p));
        }
        p.checked_pow(k).ok_or(CharacterError::Overflow)?;
        let bound = totient_prime_power(p, k);
        if gen_exp >= bound {
            return Err(CharacterError::ExponentOutOfRange {
                field: "gen_exp",
                value: gen_exp,
                p,
                k,
                bound,
            });
        }
        Ok(LocalCharacter::Odd { p, k, gen_exp })
    }

    pub fn two(k: u32, minus_one_exp: u64, five_exp: u64) -> Result<Self, CharacterError> {
        if k == 0 {
            return Err(CharacterError::ZeroExponent(2));
        }
        if k >= 64 {
            return Err(CharacterError::Overflow);
        }
        let m1_bound = if k >= 2 { 2 } else { 1 };
        if minus_one_exp >= m1_bound {
            return Err(CharacterError::ExponentOutOfRange {
                field: "minus_one_exp",
                value: minus_one_exp,
                p: 2,
                k,
                bound: m1_bound,
            });
        }
        let five_bound = if k >= 3 { 1u64 << (k - 2) } else { 1 };
        if five_exp >= five_bound {
            return Err(CharacterError::ExponentOutOfRange {
                field: "five_exp",
                value: five_exp,
                p: 2,
                k,
                bound: five_bound,
            });
        }
        Ok(LocalCharacter::Two {
            k,
            minus_one_exp,
            five_exp,
        })
    }

    pub fn trivial(p: u64, k: u32) -> Self {
        if p == 2 {
            LocalCharacter::Two {
                k,
                minus_one_exp: 0,
                five_exp: 0,
            }
        } else {
            LocalCharacter::Odd { p, k, gen_exp: 0 }
        }
    }

    pub fn prime(&self) -> u64 {
        match *self {
            LocalCharacter::Two { .. } => 2,
            LocalCharacter::Odd { p, .. } => p,
        }
    }

    pub fn exponent(&self) -> u32 {
        match *self {
            LocalCharacter::Two { k, .. } | LocalCharacter::Odd { k, .. } => k,
        }
    }

    pub fn modulus(&self) -> u64 {
        self.prime().pow(self.exponent())
    }

    pub fn is_trivial(&self) -> bool {
        match *self {
            LocalCharacter::Two {
                minus_one_exp,
                five_exp,
                ..
            } => minus_one_exp == 0 && five_exp == 0,
            LocalCharacter::Odd { gen_exp, .. } => gen_exp == 0,
        }
    }

    /// Exponent `c` of the local conductor `p^c`. Never 1 at `p = 2`.
    pub fn conductor_exponent(&self) -> u32 {
        match *self {
            LocalCharacter::Odd { p, k, gen_exp } => {
                if gen_exp == 0 {
                    0
                } else {
                    k - valuation(gen_exp, p)
                }
            }
            LocalCharacter::Two {
                k,
                minus_one_exp,
                five_exp,
            } => match (minus_one_exp, five_exp) {
                (0, 0) => 0,
                (_, 0) => 2,
                (_, b) => k - valuation(b, 2),
            },
        }
    }

    pub fn order(&self) -> u64 {
        match *self {
            LocalCharacter::Odd { p, k, gen_exp } => {
                let phi = totient_prime_power(p, k);
                phi / gcd(gen_exp, phi)
            }
            LocalCharacter::Two {
                k,
                minus_one_exp,
                five_exp,
            } => {
                let sign_order = if minus_one_exp == 1 { 2 } else { 1 };
                let five_order = if k >= 3 {
                    let m = 1u64 << (k - 2);
                    m / gcd(five_exp, m)
                } else {
                    1
                };
                lcm(sign_order, five_order)
            }
        }
    }

    /// Value at an integer prime to `p`.
    pub fn evaluate(&self, n: u64) -> RootOfUnity {
        match *self {
            LocalCharacter::Odd { p, k, gen_exp } => {
                let m = p.pow(k);
                let phi = totient_prime_power(p, k);
                if gen_exp == 0 {
                    return RootOfUnity::ONE;
                }
                let g = primitive_root(p, k);
                let j = discrete_log(g, n % m, m, phi).expect("argument must be prime to p");
                RootOfUnity::new(j as i128 * gen_exp as i128, phi)
            }
            LocalCharacter::Two {
                k,
                minus_one_exp,
                five_exp,
            } => {
                debug_assert!(n % 2 == 1, "argument must be odd");
                if k == 1 {
                    return RootOfUnity::ONE;
                }
                let negative = n % 4 == 3;
                let sign = if negative {
                    RootOfUnity::new(minus_one_exp as i128, 2)
                } else {
                    RootOfUnity::ONE
                };
                if k == 2 {
                    return sign;
                }
                let m = 1u64 << k;
                let r = n % m;
                let unsigned = if negative { m - r } else { r };
                let half = 1u64 << (k - 2);
                let j =
                    discrete_log(5, unsigned, m, half).expect("units = 1 mod 4 are powers of 5");
                sign + RootOfUnity::new(j as i128 * five_exp as i128, half)
            }
        }
    }

    /// The same character realized on `(Z/p^k')^*`.
    ///
    /// Valid whenever `k'` is at least the conductor exponent; `k' = 0` gives
    /// `None` (the trivial character has no component).
    pub fn at_exponent(&self, k_new: u32) -> Option<LocalCharacter> {
        assert!(
            k_new >= self.conductor_exponent(),
            "cannot restrict below the conductor"
        );
        if k_new == 0 {
            return None;
        }
        if k_new == self.exponent() {
            return Some(self.clone());
        }
        let p = self.prime();
        let local = if p == 2 {
            let minus_one = self.evaluate((1u64 << self.exponent()) - 1);
            let five = self.evaluate(5);
            LocalCharacter::Two {
                k: k_new,
                minus_one_exp: if k_new >= 2 {
                    minus_one.over(2).expect("order 2")
                } else {
                    0
                },
                five_exp: if k_new >= 3 {
                    five.over(1 << (k_new - 2)).expect("factors through 2^k'")
                } else {
                    0
                },
            }
        } else {
            let phi = totient_prime_power(p, k_new);
            let value = self.evaluate(primitive_root(p, k_new));
            LocalCharacter::Odd {
                p,
                k: k_new,
                gen_exp: value.over(phi).expect("factors through p^k'"),
            }
        };
        Some(local)
    }

    /// The primitive local component, or `None` when trivial.
    pub fn primitive(&self) -> Option<LocalCharacter> {
        self.at_exponent(self.conductor_exponent())
    }

    /// Product of two components at the same prime, realized at the larger exponent.
    pub fn mul(&self, other: &LocalCharacter) -> LocalCharacter {
        assert_eq!(self.prime(), other.prime());
        let k = self.exponent().max(other.exponent());
        let a = self.at_exponent(k).expect("k >= 1");
        let b = other.at_exponent(k).expect("k >= 1");
        match (a, b) {
            (LocalCharacter::Odd { p, gen_exp: x, .. }, LocalCharacter::Odd { gen_exp: y, .. }) => {
                LocalCharacter::Odd {
                    p,
                    k,
                    gen_exp: (x + y) % totient_prime_power(p, k),
                }
            }
            (
                LocalCharacter::Two {
                    minus_one_exp: s1,
                    five_exp: f1,
                    ..
                },
                LocalCharacter::Two {
                    minus_one_exp: s2,
                    five_exp: f2,
                    ..
                },
            ) => {
                let half = if k >= 3 { 1u64 << (k - 2) } else { 1 };
                LocalCharacter::Two {
                    k,
                    minus_one_exp: (s1 + s2) % 2,
                    five_exp: (f1 + f2) % half,
                }
            }
            _ => unreachable!("same prime"),
        }
    }

    pub fn pow(&self, e: i64) -> LocalCharacter {
        let scale = |x: u64, m: u64| (x as i128 * e as i128).rem_euclid(m as i128) as u64;
        match *self {
            LocalCharacter::Odd { p, k, gen_exp } => LocalCharacter::Odd {
                p,
                k,
                gen_exp: scale(gen_exp, totient_prime_power(p, k)),
            },
            LocalCharacter::Two {
                k,
                minus_one_exp,
                five_exp,
            } => {
                let half = if k >= 3 { 1u64 << (k - 2) } else { 1 };
                LocalCharacter::Two {
                    k,
                    minus_one_exp: scale(minus_one_exp, 2),
                    five_exp: scale(five_exp, half),
                }
            }
        }
    }

    /// Generators of `(Z/p^k)^*` in the canonical convention.
    fn local_generators(&self) -> Vec<u64> {
        match *self {
            LocalCharacter::Odd { p, k, .. } => vec![primitive_root(p, k)],
            LocalCharacter::Two { k, .. } => match k {
                1 => vec![],
                2 => vec![3],
                _ => vec![(1u64 << k) - 1, 5],
            },
        }
    }

    /// Every character of `(Z/p^k)^*`.
    pub fn enumerate(p: u64, k: u32) -> Vec<LocalCharacter> {
        if p == 2 {
            let signs = if k >= 2 { 2 } else { 1 };
            let half = if k >= 3 { 1u64 << (k - 2) } else { 1 };
            (0..signs)
                .flat_map(|s| {
                    (0..half).map(move |b| LocalCharacter::Two {
                        k,
                        minus_one_exp: s,
                        five_exp: b,
                    })
                })
                .collect()
        } else {
            (0..totient_prime_power(p, k))
                .map(|a| LocalCharacter::Odd { p, k, gen_exp: a })
                .collect()
        }
    }
}

/// A Dirichlet character modulo `modulus`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "CharacterJson", into = "CharacterJson")]
pub struct DirichletCharacter {
    // field order drives the derived Ord: the local encoding comes first
    locals: Vec<LocalCharacter>,
    modulus: u64,
    order: u64,
    conductor: u64,
}

impl DirichletCharacter {
    pub fn trivial() -> Self {
        DirichletCharacter {
            locals: Vec::new(),
            modulus: 1,
            order: 1,
            conductor: 1,
        }
    }

    /// Character with the given local components; the modulus is `∏ p^k`.
    pub fn from_locals(mut locals: Vec<LocalCharacter>) -> Result<Self, CharacterError> {
        locals.sort();
        for w in locals.windows(2) {
            if w[0].prime() == w[1].prime() {
                return Err(CharacterError::DuplicatePrime(w[0].prime()));
            }
        }
        let mut modulus: u64 = 1;
        let mut order = 1;
        let mut conductor: u64 = 1;
        for local in &locals {
            modulus = modulus
                .checked_mul(local.modulus())
                .ok_or(CharacterError::Overflow)?;
            order = lcm(order, local.order());
            conductor *= local.prime().pow(local.conductor_exponent());
        }
        Ok(DirichletCharacter {
            locals,
            modulus,
            order,
            conductor,
        })
    }

    fn from_primitive_locals(locals: Vec<LocalCharacter>) -> Self {
        Self::from_locals(locals).expect("components at distinct primes")
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn locals(&self) -> &[LocalCharacter] {
        &self.locals
    }

    pub fn local(&self, q: u64) -> Option<&LocalCharacter> {
        self.locals.iter().find(|l| l.prime() == q)
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.modulus
    }

    pub fn is_even(&self) -> bool {
        self.modulus <= 2 || self.evaluate(self.modulus - 1) == Some(RootOfUnity::ONE)
    }

    /// The primitive character inducing `self`.
    pub fn primitive(&self) -> Self {
        if self.is_primitive() {
            return self.clone();
        }
        Self::from_primitive_locals(self.locals.iter().filter_map(|l| l.primitive()).collect())
    }

    /// The character induced to modulus `m`, a multiple of the current modulus.
    pub fn induce(&self, m: u64) -> Result<Self, CharacterError> {
        if m == 0 || !m.is_multiple_of(self.modulus) {
            return Err(CharacterError::NotMultiple {
                modulus: self.modulus,
                target: m,
            });
        }
        let locals = crate::arith::factorize(m)
            .into_iter()
            .map(|(p, k)| match self.local(p) {
                Some(l) => l.at_exponent(k).expect("k >= 1"),
                None => LocalCharacter::trivial(p, k),
            })
            .collect();
        Self::from_locals(locals)
    }

    /// `χ(n)`, or `None` when `gcd(n, modulus) > 1`.
    pub fn evaluate(&self, n: u64) -> Option<RootOfUnity> {
        if gcd(n, self.modulus) != 1 {
            return None;
        }
        Some(
            self.locals
                .iter()
                .fold(RootOfUnity::ONE, |acc, l| acc + l.evaluate(n)),
        )
    }

    pub fn mul(&self, other: &DirichletCharacter) -> DirichletCharacter {
        let mut locals = Vec::new();
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.locals, &other.locals);
        while i < a.len() || j < b.len() {
            let pa = a.get(i).map(|l| l.prime());
            let pb = b.get(j).map(|l| l.prime());
            let next = match (pa, pb) {
                (Some(x), Some(y)) if x == y => {
                    i += 1;
                    j += 1;
                    a[i - 1].mul(&b[j - 1])
                }
                (Some(x), Some(y)) if x < y => {
                    i += 1;
                    a[i - 1].clone()
                }
                (Some(_), None) => {
                    i += 1;
                    a[i - 1].clone()
                }
                _ => {
                    j += 1;
                    b[j - 1].clone()
                }
            };
            if let Some(l) = next.primitive() {
                locals.push(l);
            }
        }
        Self::from_primitive_locals(locals)
    }

    pub fn inverse(&self) -> DirichletCharacter {
        self.pow(-1)
    }

    pub fn pow(&self, e: i64) -> DirichletCharacter {
        Self::from_primitive_locals(
            self.locals
                .iter()
                .filter_map(|l| l.pow(e).primitive())
                .collect(),
        )
    }

    /// `χ_q`, the primitive character of `q`-power conductor in the CRT
    /// decomposition of `χ`.
    pub fn primary_component(&self, q: u64) -> DirichletCharacter {
        match self.local(q).and_then(|l| l.primitive()) {
            Some(l) => Self::from_primitive_locals(vec![l]),
            None => Self::trivial(),
        }
    }

    /// Canonical generating set of `(Z/MZ)^*`: each local generator lifted by
    /// CRT to be `1` at the other primes.
    pub fn generators_of(modulus: u64) -> Vec<u64> {
        let skeleton: Vec<LocalCharacter> = crate::arith::factorize(modulus)
            .into_iter()
            .map(|(p, k)| LocalCharacter::trivial(p, k))
            .collect();
        let mut out = Vec::new();
        for (idx, local) in skeleton.iter().enumerate() {
            for g in local.local_generators() {
                let residues: Vec<(u64, u64)> = skeleton
                    .iter()
                    .enumerate()
                    .map(|(i, l)| (if i == idx { g } else { 1 }, l.modulus()))
                    .collect();
                out.push(crt(&residues));
            }
        }
        out
    }

    /// Rebuilds a character modulo `modulus` from its values on
    /// [`generators_of`](Self::generators_of).
    pub fn from_generator_values(
        modulus: u64,
        values: &[RootOfUnity],
    ) -> Result<Self, CharacterError> {
        let gens = Self::generators_of(modulus);
        if gens.len() != values.len() {
            return Err(CharacterError::GeneratorCount {
                expected: gens.len(),
                found: values.len(),
            });
        }
        let over = |generator: u64, value: RootOfUnity, bound: u64| {
            value.over(bound).ok_or(CharacterError::BadGeneratorValue {
                generator,
                value,
                bound,
            })
        };
        let mut locals = Vec::new();
        let mut it = gens.iter().zip(values.iter());
        for (p, k) in crate::arith::factorize(modulus) {
            let local = if p == 2 {
                match k {
                    1 => LocalCharacter::trivial(2, 1),
                    2 => {
                        let (&g, &v) = it.next().expect("counted");
                        LocalCharacter::two(2, over(g, v, 2)?, 0)?
                    }
                    _ => {
                        let (&g1, &v1) = it.next().expect("counted");
                        let (&g2, &v2) = it.next().expect("counted");
                        LocalCharacter::two(k, over(g1, v1, 2)?, over(g2, v2, 1 << (k - 2))?)?
                    }
                }
            } else {
                let (&g, &v) = it.next().expect("counted");
                LocalCharacter::odd(p, k, over(g, v, totient_prime_power(p, k))?)?
            };
            locals.push(local);
        }
        Self::from_locals(locals)
    }

    /// All `φ(m)` characters modulo `m`, in encoding order.
    pub fn all_modulo(m: u64) -> Vec<DirichletCharacter> {
        let mut acc: Vec<Vec<LocalCharacter>> = vec![Vec::new()];
        for (p, k) in crate::arith::factorize(m) {
            let options = LocalCharacter::enumerate(p, k);
            acc = acc
                .into_iter()
                .flat_map(|prefix| {
                    options.iter().map(move |l| {
                        let mut v = prefix.clone();
                        v.push(l.clone());
                        v
                    })
                })
                .collect();
        }
        acc.into_iter()
            .map(|locals| Self::from_locals(locals).expect("distinct primes"))
            .collect()
    }

    /// The quadratic character `(d/·)` attached to a fundamental discriminant.
    pub fn kronecker(d: i64) -> Result<Self, CharacterError> {
        if d == 1 {
            return Ok(Self::trivial());
        }
        let bad = || CharacterError::NotFundamental(d);
        if d == 0 {
            return Err(bad());
        }
        let abs = d.unsigned_abs();
        let v2 = valuation(abs, 2);
        let odd = abs >> v2;
        let factors = crate::arith::factorize(odd);
        if factors.iter().any(|&(_, k)| k > 1) {
            return Err(bad());
        }
        let mut locals = Vec::new();
        let mut odd_parity = 0;
        for &(p, _) in &factors {
            locals.push(LocalCharacter::odd(p, 1, (p - 1) / 2)?);
            if p % 4 == 3 {
                odd_parity ^= 1;
            }
        }
        let want_odd = u64::from(d < 0);
        match v2 {
            0 if d.rem_euclid(4) == 1 => {}
            2 if odd_parity != want_odd => locals.push(LocalCharacter::two(2, 1, 0)?),
            3 => locals.push(LocalCharacter::two(3, odd_parity ^ want_odd, 1)?),
            _ => return Err(bad()),
        }
        Self::from_locals(locals)
    }
}

impl fmt::Display for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.locals.is_empty() {
            return write!(f, "1");
        }
        for l in &self.locals {
            match *l {
                LocalCharacter::Odd { p, k, gen_exp } => write!(f, "[{}^{}:{}]", p, k, gen_exp)?,
                LocalCharacter::Two {
                    k,
                    minus_one_exp,
                    five_exp,
                } => write!(f, "[2^{}:{},{}]", k, minus_one_exp, five_exp)?,
            }
        }
        Ok(())
    }
}

/// Wire form of one local component.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocalJson {
    pub p: u64,
    pub k: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gen_exp: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minus_one_exp: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub five_exp: Option<u64>,
}

/// Wire form `{"local": [...]}`; the modulus is implied as `∏ p^k`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharacterJson {
    pub local: Vec<LocalJson>,
}

impl TryFrom<LocalJson> for LocalCharacter {
    type Error = CharacterError;

    fn try_from(j: LocalJson) -> Result<Self, CharacterError> {
        let not_applicable = |field| CharacterError::FieldNotApplicable {
            field,
            p: j.p,
            k: j.k,
        };
        if j.p == 2 {
            if j.gen_exp.is_some() {
                return Err(not_applicable("gen_exp"));
            }
            if j.k < 2 && j.minus_one_exp.is_some_and(|x| x != 0) {
                return Err(not_applicable("minus_one_exp"));
            }
            if j.k < 3 && j.five_exp.is_some_and(|x| x != 0) {
                return Err(not_applicable("five_exp"));
            }
            LocalCharacter::two(j.k, j.minus_one_exp.unwrap_or(0), j.five_exp.unwrap_or(0))
        } else {
            if j.minus_one_exp.is_some() {
                return Err(not_applicable("minus_one_exp"));
            }
            if j.five_exp.is_some() {
                return Err(not_applicable("five_exp"));
            }
            LocalCharacter::odd(j.p, j.k, j.gen_exp.unwrap_or(0))
        }
    }
}

impl From<&LocalCharacter> for LocalJson {
    fn from(l: &LocalCharacter) -> Self {
        match *l {
            LocalCharacter::Odd { p, k, gen_exp } => LocalJson {
                p,
                k,
                gen_exp: Some(gen_exp),
                minus_one_exp: None,
                five_exp: None,
            },
            LocalCharacter::Two {
                k,
                minus_one_exp,
                five_exp,
            } => LocalJson {
                p: 2,
                k,
                gen_exp: None,
                minus_one_exp: (k >= 2).then_some(minus_one_exp),
                five_exp: (k >= 3).then_some(five_exp),
            },
        }
    }
}

impl TryFrom<CharacterJson> for DirichletCharacter {
    type Error = CharacterError;

    fn try_from(j: CharacterJson) -> Result<Self, CharacterError> {
        let locals = j
            .local
            .into_iter()
            .map(LocalCharacter::try_from)
            .collect::<Result<Vec<_>, _>>()?;
        DirichletCharacter::from_locals(locals)
    }
}

impl From<DirichletCharacter> for CharacterJson {
    fn from(c: DirichletCharacter) -> Self {
        CharacterJson {
            local: c.locals.iter().map(LocalJson::from).collect(),
        }
    }
}

/// `[1, ξ, ψ, ξψ]`: the trivial character, the two quadratic characters of
/// conductor 8 (`ξ` even, `ψ` odd) and their product of conductor 4.
pub fn quadratic_catalogue() -> [DirichletCharacter; 4] {
    let xi = DirichletCharacter::kronecker(8).expect("fundamental");
    let psi = DirichletCharacter::kronecker(-8).expect("fundamental");
    let xipsi = xi.mul(&psi);
    [DirichletCharacter::trivial(), xi, psi, xipsi]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{divisors, factorize};
    use proptest::prelude::*;

    fn odd(p: u64, k: u32, a: u64) -> DirichletCharacter {
        DirichletCharacter::from_locals(vec![LocalCharacter::odd(p, k, a).unwrap()]).unwrap()
    }

    fn two(k: u32, s: u64, b: u64) -> DirichletCharacter {
        DirichletCharacter::from_locals(vec![LocalCharacter::two(k, s, b).unwrap()]).unwrap()
    }

    /// Order-3 character mod 7 with χ(3) = 1/3 (3 is the canonical generator).
    fn cubic7() -> DirichletCharacter {
        odd(7, 1, 2)
    }

    #[test]
    fn evaluate_examples() {
        let chi4 = two(2, 1, 0);
        assert_eq!(chi4.evaluate(3), Some(RootOfUnity::new(1, 2)));
        let c = cubic7();
        assert_eq!(c.evaluate(3), Some(RootOfUnity::new(1, 3)));
        // 2 = 3^2 mod 7
        assert_eq!(c.evaluate(2), Some(RootOfUnity::new(2, 3)));
        assert_eq!(c.evaluate(1), Some(RootOfUnity::ONE));
        for chi in DirichletCharacter::all_modulo(21) {
            assert_eq!(chi.evaluate(14), None);
        }
    }

    #[test]
    fn products_and_powers() {
        let m3 = DirichletCharacter::kronecker(-3).unwrap();
        assert!(m3.mul(&m3).is_trivial());
        assert_eq!(m3.mul(&m3).conductor(), 1);
        let [_, xi, psi, xipsi] = quadratic_catalogue();
        assert_eq!(xi.conductor(), 8);
        assert_eq!(psi.conductor(), 8);
        assert_eq!(xi.mul(&psi), xipsi);
        assert_eq!(xipsi.conductor(), 4);
        let c = cubic7();
        assert_eq!(c.pow(-1), c.pow(2));
        assert_eq!(c.inverse(), c.mul(&c));
    }

    #[test]
    fn conductor_examples() {
        let triv45 = DirichletCharacter::trivial().induce(45).unwrap();
        assert_eq!(triv45.modulus(), 45);
        assert_eq!(triv45.conductor(), 1);
        assert_eq!(cubic7().conductor(), 7);
        let chi = DirichletCharacter::kronecker(-3)
            .unwrap()
            .induce(12)
            .unwrap();
        assert_eq!(chi.conductor(), 3);
        assert_eq!(brute_force_conductor(&chi), 3);
    }

    #[test]
    fn primary_components() {
        let m3 = DirichletCharacter::kronecker(-3).unwrap();
        let xi = DirichletCharacter::kronecker(8).unwrap();
        let chi = m3.mul(&xi);
        assert_eq!(chi.conductor(), 24);
        assert_eq!(chi.primary_component(2), xi);
        assert!(chi.primary_component(5).is_trivial());
        let eps = DirichletCharacter::kronecker(21).unwrap();
        assert_eq!(eps.conductor(), 21);
        assert_eq!(
            eps.primary_component(7),
            DirichletCharacter::kronecker(-7).unwrap()
        );
        assert_eq!(eps.primary_component(3).mul(&eps.primary_component(7)), eps);
    }

    fn quadratic_catalogue() -> [DirichletCharacter; 4] {
        crate::character::quadratic_catalogue()
    }

    #[test]
    fn catalogue_is_klein_four() {
        let cat = quadratic_catalogue();
        let set: std::collections::BTreeSet<_> = cat.iter().cloned().collect();
        assert_eq!(set.len(), 4);
        for c in &cat {
            assert!(c.mul(c).is_trivial());
            assert!(c.conductor() == 1 || c.conductor() % 4 == 0);
        }
        // exactly these four 2-primary characters of order dividing 2
        let found: std::collections::BTreeSet<_> = DirichletCharacter::all_modulo(64)
            .into_iter()
            .filter(|c| c.pow(2).is_trivial())
            .map(|c| c.primitive())
            .collect();
        assert_eq!(found, set);
    }

    #[test]
    fn kronecker_matches_jacobi_symbol() {
        for d in [-3i64, -4, -7, -8, 5, 8, 12, -15, 21, -24, 24, 28, -56, 40] {
            let chi = DirichletCharacter::kronecker(d).unwrap();
            assert_eq!(chi.conductor(), d.unsigned_abs(), "d = {d}");
            assert_eq!(chi.is_even(), d > 0);
            for n in 1..200u64 {
                let expected = kronecker_symbol(d, n);
                let got = chi
                    .evaluate(n)
                    .map(|v| if v.is_one() { 1 } else { -1 })
                    .unwrap_or(0);
                assert_eq!(got, expected, "d = {d}, n = {n}");
            }
        }
        assert!(DirichletCharacter::kronecker(-12 * 3).is_err());
        assert!(DirichletCharacter::kronecker(3).is_err());
    }

    /// Kronecker symbol (d/n) for n >= 1, straight from the definition.
    fn kronecker_symbol(d: i64, n: u64) -> i32 {
        let mut result = 1;
        for (p, k) in factorize(n) {
            let s: i32 = if p == 2 {
                if d % 2 == 0 {
                    0
                } else if d.rem_euclid(8) == 1 || d.rem_euclid(8) == 7 {
                    1
                } else {
                    -1
                }
            } else {
                let r = d.rem_euclid(p as i64) as u64;
                if r == 0 {
                    0
                } else if crate::arith::pow_mod(r, (p - 1) / 2, p) == 1 {
                    1
                } else {
                    -1
                }
            };
            result *= s.pow(k);
        }
        result
    }

    /// Smallest d | M with χ(n) = χ(n') whenever n ≡ n' mod d, both prime to M.
    pub(crate) fn brute_force_conductor(chi: &DirichletCharacter) -> u64 {
        let m = chi.modulus();
        let values: Vec<Option<RootOfUnity>> = (1..=m).map(|n| chi.evaluate(n)).collect();
        for d in divisors(m) {
            let mut seen: Vec<Option<RootOfUnity>> = vec![None; d as usize];
            let ok = (1..=m).all(|n| match values[(n - 1) as usize] {
                None => true,
                Some(v) => {
                    let slot = &mut seen[(n % d) as usize];
                    *slot.get_or_insert(v) == v
                }
            });
            if ok {
                return d;
            }
        }
        unreachable!("d = M always works")
    }

    #[test]
    fn conductor_matches_brute_force_small_moduli() {
        for m in 1..=60 {
            for chi in DirichletCharacter::all_modulo(m) {
                assert_eq!(
                    chi.conductor(),
                    brute_force_conductor(&chi),
                    "{chi} mod {m}"
                );
                assert_ne!(chi.conductor() % 4, 2);
            }
        }
    }

    #[test]
    fn json_encoding() {
        let chi = odd(7, 1, 2).mul(&two(3, 1, 1));
        let text = serde_json::to_string(&chi).unwrap();
        assert_eq!(
            text,
            r#"{"local":[{"p":2,"k":3,"minus_one_exp":1,"five_exp":1},{"p":7,"k":1,"gen_exp":2}]}"#
        );
        let back: DirichletCharacter = serde_json::from_str(&text).unwrap();
        assert_eq!(back, chi);
        let err =
            serde_json::from_str::<DirichletCharacter>(r#"{"local":[{"p":7,"k":1,"gen_exp":6}]}"#);
        assert!(err.is_err());
        let err = serde_json::from_str::<DirichletCharacter>(r#"{"local":[{"p":9,"k":1}]}"#);
        assert!(err.is_err());
        let err =
            serde_json::from_str::<DirichletCharacter>(r#"{"local":[{"p":2,"k":2,"gen_exp":1}]}"#);
        assert!(err.is_err());
    }

    fn any_character() -> impl Strategy<Value = DirichletCharacter> {
        (1u64..=120).prop_flat_map(|m| {
            let all = DirichletCharacter::all_modulo(m);
            (0..all.len()).prop_map(move |i| all[i].clone())
        })
    }

    proptest! {
        #[test]
        fn evaluation_is_multiplicative(chi in any_character(), a in 1u64..500, b in 1u64..500) {
            match (chi.evaluate(a), chi.evaluate(b)) {
                (Some(x), Some(y)) => prop_assert_eq!(chi.evaluate(a * b), Some(x + y)),
                _ => prop_assert_eq!(chi.evaluate(a * b), None),
            }
        }

        #[test]
        fn rebuilt_from_generator_values(chi in any_character()) {
            let gens = DirichletCharacter::generators_of(chi.modulus());
            let values: Vec<_> = gens.iter().map(|&g| chi.evaluate(g).unwrap()).collect();
            let rebuilt = DirichletCharacter::from_generator_values(chi.modulus(), &values).unwrap();
            prop_assert_eq!(rebuilt, chi);
        }

        #[test]
        fn product_conductor_divides_lcm(x in any_character(), y in any_character()) {
            let z = x.mul(&y);
            prop_assert!(z.is_primitive());
            prop_assert_eq!(lcm(x.conductor(), y.conductor()) % z.conductor(), 0);
            prop_assert_eq!(z.mul(&y.inverse()), x.primitive());
        }

        #[test]
        fn primitive_agrees_with_original(chi in any_character(), n in 1u64..1000) {
            let prim = chi.primitive();
            prop_assert_eq!(prim.conductor(), chi.conductor());
            if gcd(n, chi.modulus()) == 1 {
                prop_assert_eq!(prim.evaluate(n), chi.evaluate(n));
            }
            let product = crate::arith::prime_divisors(chi.modulus())
                .into_iter()
                .fold(DirichletCharacter::trivial(), |acc, q| acc.mul(&chi.primary_component(q)));
            prop_assert_eq!(product, prim);
        }
    }
}
