//! Integer combinatorics behind the filtration arguments: the sequence of
//! positive integers prime to `p`, the lemma parameters `(e, g, n, c, d)`,
//! the fibre census of `(i, j) ↦ b(i)·p^j mod e`, and the orbits of
//! multiplication by `p` on `Z/eZ`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> Result<u64> {
    if a == 0 || b == 0 {
        return Ok(0);
    }
    (a / gcd(a, b)).checked_mul(b).ok_or(Error::Overflow("lcm"))
}

/// `base^exp mod m`, with `m ≥ 1`.
pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let m128 = m as u128;
    let mut acc = 1u128;
    let mut b = (base % m) as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Multiplicative order of `p` modulo `e` (1 when `e = 1`).
pub fn multiplicative_order(p: u64, e: u64) -> Result<u64> {
    if e == 0 {
        return Err(Error::param("modulus must be positive"));
    }
    if e == 1 {
        return Ok(1);
    }
    if gcd(p, e) != 1 {
        return Err(Error::param(format!("{p} is not invertible mod {e}")));
    }
    let mut x = p % e;
    let mut k = 1;
    while x != 1 {
        x = (x as u128 * p as u128 % e as u128) as u64;
        k += 1;
    }
    Ok(k)
}

/// Distinct prime factors in ascending order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::param(format!("{p} is not prime")))
    }
}

/// The `i`-th positive integer not divisible by `p`: `i + ⌊(i−1)/(p−1)⌋`.
pub fn b_value(p: u64, i: u64) -> Result<u64> {
    check_prime(p)?;
    if i == 0 {
        return Err(Error::param("b-sequence is indexed from 1"));
    }
    i.checked_add((i - 1) / (p - 1))
        .ok_or(Error::Overflow("b_value"))
}

/// Parameters `(p, e, g, n, c, d)` of the fibre-census lemma.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LemmaParams {
    pub p: u64,
    pub e: u64,
    pub g: u64,
    pub n: u64,
    pub c: u64,
    pub d: u64,
}

impl LemmaParams {
    /// Builds the parameters with `g` the exact order of `p` mod `e` and
    /// `n = multiplier · lcm(p−1, e)`.
    pub fn new(p: u64, e: u64, n_multiplier: u64) -> Result<Self> {
        check_prime(p)?;
        if e == 0 {
            return Err(Error::param("e must be positive"));
        }
        if e.is_multiple_of(p) {
            return Err(Error::param(format!("p = {p} divides e = {e}")));
        }
        if n_multiplier == 0 {
            return Err(Error::param("n multiplier must be at least 1"));
        }
        let g = multiplicative_order(p, e)?;
        let n = lcm(p - 1, e)?
            .checked_mul(n_multiplier)
            .ok_or(Error::Overflow("n"))?;
        Ok(LemmaParams {
            p,
            e,
            g,
            n,
            c: n / (p - 1),
            d: n / e,
        })
    }

    /// Replaces `g` by a multiple of the order of `p` mod `e`; the lemma
    /// holds for any such multiple.
    pub fn with_g(mut self, g: u64) -> Result<Self> {
        if g == 0 || pow_mod(self.p, g, self.e) != 1 % self.e {
            return Err(Error::param(format!(
                "g = {g} is not a multiple of the order of {} mod {}",
                self.p, self.e
            )));
        }
        self.g = g;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        check_prime(self.p)?;
        let ok = self.e > 0
            && !self.e.is_multiple_of(self.p)
            && self.g > 0
            && pow_mod(self.p, self.g, self.e) == 1 % self.e
            && self.n > 0
            && self.n.is_multiple_of(self.p - 1)
            && self.n.is_multiple_of(self.e)
            && self.c * (self.p - 1) == self.n
            && self.d * self.e == self.n;
        if ok {
            Ok(())
        } else {
            Err(Error::param(format!(
                "inconsistent lemma parameters {self:?}"
            )))
        }
    }

    /// `b(1), …, b(n)`.
    pub fn b_sequence(&self) -> Vec<u64> {
        (1..=self.n).map(|i| i + (i - 1) / (self.p - 1)).collect()
    }
}

/// Fibre counts `t_x` of `(i, j) ↦ b(i)·p^j mod e` over `[1, n] × Z/gZ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberCensus {
    pub counts: BTreeMap<u64, u64>,
}

impl FiberCensus {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Residues whose count differs from `expected`.
    pub fn deviations(&self, expected: u64) -> Vec<(u64, u64)> {
        self.counts
            .iter()
            .filter(|(_, &t)| t != expected)
            .map(|(&x, &t)| (x, t))
            .collect()
    }
}

pub fn fiber_census(params: &LemmaParams) -> Result<FiberCensus> {
    params.validate()?;
    if params
        .n
        .checked_mul(params.g)
        .is_none_or(|ng| ng > 1_000_000)
    {
        return Err(Error::param("census grid limited to n·g ≤ 10^6"));
    }
    let e = params.e;
    let mut counts: BTreeMap<u64, u64> = (0..e).map(|x| (x, 0)).collect();
    let powers: Vec<u64> = (0..params.g).map(|j| pow_mod(params.p, j, e)).collect();
    for b in params.b_sequence() {
        for &pj in &powers {
            let x = (b % e) * pj % e;
            *counts.get_mut(&x).expect("all residues present") += 1;
        }
    }
    Ok(FiberCensus { counts })
}

/// Orbits of `x ↦ p·x` on `Z/eZ`, each sorted, listed by least element.
pub fn frobenius_orbits(e: u64, p: u64) -> Result<Vec<Vec<u64>>> {
    if e == 0 {
        return Err(Error::param("e must be positive"));
    }
    if gcd(p, e) != 1 {
        return Err(Error::param(format!("p = {p} is not prime to e = {e}")));
    }
    let mut seen = vec![false; e as usize];
    let mut orbits = Vec::new();
    for start in 0..e {
        if seen[start as usize] {
            continue;
        }
        let mut orbit = Vec::new();
        let mut x = start;
        while !seen[x as usize] {
            seen[x as usize] = true;
            orbit.push(x);
            x = (x as u128 * p as u128 % e as u128) as u64;
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    Ok(orbits)
}

/// Whether `r` and `s` lie in the same orbit of multiplication by `p` mod `e`.
pub fn same_frobenius_orbit(e: u64, p: u64, r: i64, s: i64) -> Result<bool> {
    if e == 0 || gcd(p, e) != 1 {
        return Err(Error::param(format!("p = {p} is not prime to e = {e}")));
    }
    let r = r.rem_euclid(e as i64) as u64;
    let s = s.rem_euclid(e as i64) as u64;
    let mut x = r;
    loop {
        if x == s {
            return Ok(true);
        }
        x = (x as u128 * p as u128 % e as u128) as u64;
        if x == r {
            return Ok(false);
        }
    }
}
