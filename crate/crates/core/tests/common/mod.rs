//! Random valid configs for the closed-form property suites.
#![allow(dead_code)]

use blockcond::character::{quadratic_catalogue, DirichletCharacter, LocalCharacter};
use blockcond::config::{NewformConfig, NewformData};
use blockcond::group::CharacterGroup;
use blockcond::twists::GaloisElement;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const ODD_POOL: [u64; 8] = [3, 5, 7, 11, 13, 17, 19, 23];

pub fn legendre(p: u64) -> DirichletCharacter {
    DirichletCharacter::from_locals(vec![LocalCharacter::odd(p, 1, (p - 1) / 2).unwrap()]).unwrap()
}

fn product(chars: &[DirichletCharacter]) -> DirichletCharacter {
    chars
        .iter()
        .fold(DirichletCharacter::trivial(), |acc, c| acc.mul(c))
}

fn random_subset<T: Clone>(rng: &mut ChaCha8Rng, items: &[T]) -> Vec<T> {
    items
        .iter()
        .filter(|_| rng.gen_bool(0.5))
        .cloned()
        .collect()
}

fn distinct(rng: &mut ChaCha8Rng, pool: &[u64], count: usize) -> Vec<u64> {
    let mut v: Vec<u64> = pool.choose_multiple(rng, count).copied().collect();
    v.sort();
    v
}

/// Every element of `⟨gens⟩` as an inner twist with `e_s = 1`.
fn quadratic_structure(gens: &[DirichletCharacter]) -> Vec<GaloisElement> {
    CharacterGroup::generate(gens)
        .elements()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_trivial())
        .map(|(i, c)| GaloisElement {
            label: format!("s{i}"),
            chi: c.clone(),
            galois_exp: 1,
        })
        .collect()
}

fn build(
    rng: &mut ChaCha8Rng,
    label: String,
    level: u64,
    nebentypus: DirichletCharacter,
    twists: Vec<GaloisElement>,
) -> Result<NewformConfig, String> {
    let size = twists.len() as u64 + 1;
    let deg_f = rng.gen_range(1..=2u64);
    let schur_index = if size.is_multiple_of(2) && rng.gen_bool(0.5) {
        2
    } else {
        1
    };
    NewformConfig::try_from(NewformData {
        label,
        level,
        nebentypus,
        dim_af: size * deg_f,
        deg_f,
        schur_index,
        inner_twists: twists,
        level_overrides: vec![],
    })
    .map_err(|e| e.to_string())
}

/// Odd `N`, `ord ε ≤ 2`, quadratic inner twists of odd conductor.
pub fn odd_level(rng: &mut ChaCha8Rng, i: usize) -> Result<NewformConfig, String> {
    let r = rng.gen_range(1..=3);
    let primes = distinct(rng, &ODD_POOL, r);
    let level: u64 = primes
        .iter()
        .map(|&p| p.pow(rng.gen_range(1..=3)))
        .product();
    let lambdas: Vec<DirichletCharacter> = primes.iter().map(|&p| legendre(p)).collect();
    let eps = if rng.gen_bool(0.5) {
        DirichletCharacter::trivial()
    } else {
        product(&random_subset(rng, &lambdas))
    };
    let gens: Vec<DirichletCharacter> = (0..rng.gen_range(0..=3))
        .map(|_| product(&random_subset(rng, &lambdas)))
        .collect();
    build(
        rng,
        format!("odd-{i}"),
        level,
        eps,
        quadratic_structure(&gens),
    )
}

/// `ε = 1`; with `full_two` the 2-parts of `G` cover all of `{1, ξ, ψ, ξψ}`,
/// otherwise they lie in a subgroup of order at most 2.
pub fn trivial_nebentypus(
    rng: &mut ChaCha8Rng,
    i: usize,
    full_two: bool,
) -> Result<NewformConfig, String> {
    let [one, xi, psi, xp] = quadratic_catalogue();
    let k = rng.gen_range(0..=2);
    let odd = distinct(rng, &ODD_POOL, k);
    let lambdas: Vec<DirichletCharacter> = odd.iter().map(|&p| legendre(p)).collect();
    let mut level: u64 = odd.iter().map(|&p| p.pow(rng.gen_range(1..=2))).product();
    let (two_parts, min_a): (Vec<DirichletCharacter>, u32) = if full_two {
        (vec![xi.clone(), psi.clone()], 4)
    } else {
        match rng.gen_range(0..4) {
            0 => (vec![], 0),
            1 => (vec![xi.clone()], 3),
            2 => (vec![psi.clone()], 3),
            _ => (vec![xp.clone()], 2),
        }
    };
    let a = rng.gen_range(min_a..=9);
    level *= 1 << a;
    if level == 1 {
        level = 2;
    }
    let mut gens: Vec<DirichletCharacter> = two_parts
        .iter()
        .map(|t| t.mul(&product(&random_subset(rng, &lambdas))))
        .collect();
    let choices: Vec<DirichletCharacter> = if two_parts.is_empty() {
        vec![one]
    } else {
        let mut c = vec![one];
        c.extend(two_parts.iter().cloned());
        c
    };
    for _ in 0..rng.gen_range(0..=2) {
        let t = choices.choose(rng).unwrap().clone();
        gens.push(t.mul(&product(&random_subset(rng, &lambdas))));
    }
    let label = format!("gamma0-{}-{i}", if full_two { "full" } else { "small" });
    build(
        rng,
        label,
        level,
        DirichletCharacter::trivial(),
        quadratic_structure(&gens),
    )
}

/// Primes `q` with characters of order `n_q ≤ 6`, `n_q | q-1`.
const SQUAREFREE_POOL: [u64; 9] = [3, 5, 7, 11, 13, 19, 31, 37, 43];

fn lcm(a: u64, b: u64) -> u64 {
    let (mut x, mut y) = (a, b);
    while y != 0 {
        (x, y) = (y, x % y);
    }
    a / x * b
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Squarefree `N` and `ε = ∏ ε_q` of order `≤ 6`. Inner twists are
/// `χ_{S'} = ∏_{q∈S'} ε_q^{-1}` with `e ≡ -1 (mod n_q)` on `S'` and
/// `e ≡ 1` elsewhere, which requires `gcd(n_q, n_q') | 2` across the cut.
pub fn squarefree(rng: &mut ChaCha8Rng, i: usize) -> Result<NewformConfig, String> {
    let k = rng.gen_range(1..=3);
    let support = distinct(rng, &SQUAREFREE_POOL, k);
    let mut orders = Vec::new();
    for &q in &support {
        let options: Vec<u64> = (2..=6).filter(|n| (q - 1) % n == 0).collect();
        orders.push(*options.choose(rng).unwrap());
    }
    let m = orders.iter().fold(1, |a, &b| lcm(a, b));
    if m > 6 {
        return Err(format!("ord ε = {m} > 6"));
    }
    let locals: Vec<DirichletCharacter> = support
        .iter()
        .zip(&orders)
        .map(|(&q, &n)| {
            let units: Vec<u64> = (1..n).filter(|u| gcd(*u, n) == 1).collect();
            let u = *units.choose(rng).unwrap();
            DirichletCharacter::from_locals(vec![
                LocalCharacter::odd(q, 1, (q - 1) / n * u).unwrap()
            ])
            .unwrap()
        })
        .collect();
    let eps = product(&locals);

    let extras: Vec<u64> = [2u64, 3, 5, 7, 11, 13, 17]
        .iter()
        .copied()
        .filter(|p| !support.contains(p) && rng.gen_bool(0.3))
        .collect();
    let level: u64 = support.iter().chain(&extras).product();

    let r = support.len();
    let valid = |mask: usize| -> Option<u64> {
        (1..=m).find(|&e| {
            gcd(e, m) == 1
                && (0..r).all(|j| {
                    let want = if mask >> j & 1 == 1 {
                        orders[j] - 1
                    } else {
                        1 % orders[j]
                    };
                    e % orders[j] == want
                })
        })
    };
    let full = (1 << r) - 1;
    let mut masks = vec![0usize, full];
    for _ in 0..rng.gen_range(0..=2) {
        masks.push(rng.gen_range(0..=full));
    }
    // closure under symmetric difference
    let mut group: Vec<usize> = vec![0];
    for g in masks {
        if valid(g).is_none() || group.contains(&g) {
            continue;
        }
        let add: Vec<usize> = group.iter().map(|h| h ^ g).collect();
        group.extend(add);
        group.sort();
        group.dedup();
    }
    let twists = group
        .into_iter()
        .filter(|&mask| mask != 0)
        .map(|mask| {
            let chi = product(
                &(0..r)
                    .filter(|j| mask >> j & 1 == 1)
                    .map(|j| locals[j].inverse())
                    .collect::<Vec<_>>(),
            );
            GaloisElement {
                label: format!("S{mask:b}"),
                chi,
                galois_exp: valid(mask).expect("closed under symmetric difference"),
            }
        })
        .collect();
    build(rng, format!("squarefree-{i}"), level, eps, twists)
}
