//! Elementary integer arithmetic on machine words.
//!
//! Everything here works at desk scale (moduli below roughly 10^6); discrete
//! logarithms are found by walking the powers of the generator.

use num_integer::Integer;

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization by trial division, primes in increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut k = 0;
            while n.is_multiple_of(d) {
                n /= d;
                k += 1;
            }
            out.push((d, k));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1];
    for (p, k) in factorize(n) {
        let len = out.len();
        let mut pk = 1;
        for _ in 0..k {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

pub fn is_squarefree(n: u64) -> bool {
    factorize(n).iter().all(|&(_, k)| k == 1)
}

/// `v_p(n)`; `n` must be nonzero.
pub fn valuation(mut n: u64, p: u64) -> u32 {
    debug_assert!(n != 0 && p >= 2);
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let m = m as u128;
    let mut b = base as u128 % m;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Euler's totient of `p^k` (`k >= 1`).
pub fn totient_prime_power(p: u64, k: u32) -> u64 {
    (p - 1) * p.pow(k - 1)
}

pub fn totient(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .map(|(p, k)| totient_prime_power(p, k))
        .product()
}

/// Smallest positive primitive root modulo `p^k` for an odd prime `p`.
pub fn primitive_root(p: u64, k: u32) -> u64 {
    assert!(
        p % 2 == 1 && is_prime(p),
        "primitive_root needs an odd prime"
    );
    let m = p.pow(k);
    let phi = totient_prime_power(p, k);
    let radicals = prime_divisors(phi);
    (2..m)
        .find(|&g| g % p != 0 && radicals.iter().all(|&r| pow_mod(g, phi / r, m) != 1))
        .expect("(Z/p^k)^* is cyclic for odd p")
}

/// Exponent `j` in `0..order` with `base^j == x (mod m)`, by exhaustive search.
pub fn discrete_log(base: u64, x: u64, m: u64, order: u64) -> Option<u64> {
    let target = x % m;
    let mut acc = 1 % m;
    for j in 0..order {
        if acc == target {
            return Some(j);
        }
        acc = ((acc as u128 * base as u128) % m as u128) as u64;
    }
    None
}

/// Multiplicative order of `a` modulo `m`; `a` must be a unit.
pub fn multiplicative_order(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 1;
    }
    debug_assert_eq!(gcd(a, m), 1);
    let mut acc = a % m;
    let mut k = 1;
    while acc != 1 {
        acc = ((acc as u128 * a as u128) % m as u128) as u64;
        k += 1;
    }
    k
}

/// Solves `x = r_i (mod m_i)` for pairwise coprime moduli.
pub fn crt(residues: &[(u64, u64)]) -> u64 {
    let mut x: u128 = 0;
    let mut m: u128 = 1;
    for &(r, mi) in residues {
        let mi = mi as u128;
        // walk x, x + m, x + 2m, ... until the new congruence holds
        while x % mi != r as u128 % mi {
            x += m;
        }
        m *= mi;
    }
    x as u64
}
