//! Finite field towers `F_p ⊆ k ⊆ l` realised as one absolute extension
//! `l = F_p[u]/(P(u))`, with `k` the fixed field of `x ↦ x^q`, `q = p^a`.

use std::collections::HashMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::{is_prime, prime_factors};
use crate::error::{Error, Result};
use crate::linalg::{rank_of_vectors, FpMatrix};

/// Largest absolute degree `[l : F_p]` accepted.
pub const MAX_DEGREE: usize = 48;

/// An element of `l`, as coordinates on the power basis `1, u, …, u^{g−1}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FFElem(Vec<u64>);

impl FFElem {
    pub fn coords(&self) -> &[u64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// The element as an `F_p` scalar, when it lies in the prime field.
    pub fn as_prime(&self) -> Option<u64> {
        if self.0[1..].iter().all(|&c| c == 0) {
            Some(self.0[0])
        } else {
            None
        }
    }
}

impl fmt::Debug for FFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for FFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Which Frobenius: `x ↦ x^p` or `x ↦ x^q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrobeniusLevel {
    Absolute,
    Relative,
}

/// Linear-independence requirement for a normal basis element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormalScope {
    /// `σ^i(α)`, `i < f`, independent over `k`.
    OverK,
    /// `β^{p^j}`, `j < g`, independent over `F_p`.
    OverFp,
}

// ---- polynomials over F_p, coefficient vectors low degree first ----

fn poly_trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = crate::linalg::inv_mod(m[dm], p);
    while r.len() > dm {
        let d = r.len() - 1;
        let c = r[d] * lead_inv % p;
        if c != 0 {
            for i in 0..=dm {
                let j = d - dm + i;
                r[j] = (r[j] + (p - c) * m[i]) % p;
            }
        }
        poly_trim(&mut r);
    }
    r
}

fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    poly_rem(&out, m, p)
}

fn poly_powmod(base: &[u64], mut e: u128, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = poly_rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &b, m, p);
        }
        e >>= 1;
        if e > 0 {
            b = poly_mulmod(&b, &b, m, p);
        }
    }
    poly_rem(&acc, m, p)
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    poly_trim(&mut x);
    poly_trim(&mut y);
    while !y.is_empty() {
        let r = poly_rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

/// Rabin's irreducibility test for a monic polynomial over `F_p`.
pub fn is_irreducible(poly: &[u64], p: u64) -> bool {
    let mut f = poly.to_vec();
    poly_trim(&mut f);
    if f.len() < 2 {
        return false;
    }
    let g = f.len() - 1;
    if g == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    // x^{p^k} mod f for k = 0..=g
    let mut frob = vec![poly_rem(&x, &f, p)];
    for k in 1..=g {
        let prev = frob[k - 1].clone();
        frob.push(poly_powmod(&prev, p as u128, &f, p));
    }
    let mut diff = frob[g].clone();
    diff.resize(2.max(diff.len()), 0);
    diff[1] = (diff[1] + p - 1) % p;
    poly_trim(&mut diff);
    if !diff.is_empty() {
        return false;
    }
    for l in prime_factors(g as u64) {
        let mut h = frob[g / l as usize].clone();
        h.resize(2.max(h.len()), 0);
        h[1] = (h[1] + p - 1) % p;
        let d = poly_gcd(&f, &h, p);
        if d.len() != 1 {
            return false;
        }
    }
    true
}

/// The finite fields `F_p ⊆ k ⊆ l` with `[k:F_p] = a`, `[l:k] = f`.
#[derive(Clone)]
pub struct FieldTower {
    p: u64,
    a: usize,
    f: usize,
    g: usize,
    modulus: Vec<u64>,
    /// `u^{g+i} mod P` for `i < g`.
    reduction: Vec<Vec<u64>>,
    frob: FpMatrix,
    frob_inv: FpMatrix,
    k_basis: Vec<FFElem>,
}

impl fmt::Debug for FieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FieldTower(p={}, a={}, f={}, modulus={})",
            self.p,
            self.a,
            self.f,
            format_coeff_list(&self.modulus)
        )
    }
}

pub fn format_coeff_list(c: &[u64]) -> String {
    let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(","))
}

/// Parses `[c0,c1,…]` (low degree first).
pub fn parse_coeff_list(s: &str) -> Result<Vec<u64>> {
    let t = s.trim();
    let inner = t
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| Error::param(format!("expected [c0,c1,...], got {s:?}")))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|x| {
            x.trim()
                .parse::<u64>()
                .map_err(|_| Error::param(format!("bad coefficient {x:?}")))
        })
        .collect()
}

impl FieldTower {
    /// Builds the tower with the first irreducible polynomial of degree
    /// `a·f` found by a lexicographic scan starting at offset `seed`.
    pub fn new(p: u64, a: usize, f: usize, seed: u64) -> Result<Self> {
        Self::check_params(p, a, f)?;
        let g = a * f;
        let count = (p as u128)
            .checked_pow(g as u32)
            .ok_or(Error::Overflow("p^g"))?;
        let start = seed as u128 % count;
        for step in 0..count {
            let idx = (start + step) % count;
            let mut poly = digits(idx, p, g);
            if g > 1 && poly[0] == 0 {
                continue;
            }
            poly.push(1);
            if is_irreducible(&poly, p) {
                return Self::from_modulus(p, a, f, poly);
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    fn check_params(p: u64, a: usize, f: usize) -> Result<()> {
        if !is_prime(p) {
            return Err(Error::param(format!("{p} is not prime")));
        }
        if p >= 1 << 20 {
            return Err(Error::param(
                "characteristic too large for desk-scale arithmetic",
            ));
        }
        if a == 0 || f == 0 {
            return Err(Error::param("degrees a and f must be positive"));
        }
        if a * f > MAX_DEGREE {
            return Err(Error::param(format!(
                "[l:F_p] = {} exceeds {MAX_DEGREE}",
                a * f
            )));
        }
        Ok(())
    }

    /// Builds the tower on a given monic defining polynomial of degree `a·f`.
    pub fn from_modulus(p: u64, a: usize, f: usize, modulus: Vec<u64>) -> Result<Self> {
        Self::check_params(p, a, f)?;
        let g = a * f;
        let mut modulus: Vec<u64> = modulus.into_iter().map(|c| c % p).collect();
        poly_trim(&mut modulus);
        if modulus.len() != g + 1 || modulus[g] != 1 {
            return Err(Error::param(format!(
                "defining polynomial must be monic of degree {g}"
            )));
        }
        if !is_irreducible(&modulus, p) {
            return Err(Error::param(format!(
                "{} is reducible over F_{p}",
                format_coeff_list(&modulus)
            )));
        }
        let mut reduction = Vec::with_capacity(g);
        for i in 0..g {
            let mut mono = vec![0u64; g + i + 1];
            mono[g + i] = 1;
            let mut r = poly_rem(&mono, &modulus, p);
            r.resize(g, 0);
            reduction.push(r);
        }
        let mut tower = FieldTower {
            p,
            a,
            f,
            g,
            modulus,
            reduction,
            frob: FpMatrix::identity(p, g),
            frob_inv: FpMatrix::identity(p, g),
            k_basis: Vec::new(),
        };
        let cols: Vec<Vec<u64>> = (0..g)
            .map(|j| tower.pow(&tower.basis_elem(j), p as u128).0)
            .collect();
        tower.frob = FpMatrix::from_columns(p, g, &cols);
        tower.frob_inv = tower.frob.pow(g as u64 - 1);
        let rel_minus_id = tower.frob.pow(a as u64).sub(&FpMatrix::identity(p, g));
        tower.k_basis = rel_minus_id.kernel().into_iter().map(FFElem).collect();
        if tower.k_basis.len() != a {
            return Err(Error::param(
                "fixed field of x -> x^q has the wrong dimension",
            ));
        }
        Ok(tower)
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    /// `[k : F_p]`.
    pub fn a(&self) -> usize {
        self.a
    }
    /// `[l : k]`.
    pub fn f(&self) -> usize {
        self.f
    }
    /// `[l : F_p]`.
    pub fn g(&self) -> usize {
        self.g
    }
    /// `q = p^a = |k|`.
    pub fn q(&self) -> u64 {
        self.p.pow(self.a as u32)
    }
    /// `|l|`, when it fits.
    pub fn order(&self) -> Option<u128> {
        (self.p as u128).checked_pow(self.g as u32)
    }
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }
    /// An `F_p`-basis of `k` inside `l`.
    pub fn k_basis(&self) -> &[FFElem] {
        &self.k_basis
    }
    /// Matrix of `x ↦ x^p` on the power basis.
    pub fn frobenius_matrix(&self) -> &FpMatrix {
        &self.frob
    }

    pub fn zero(&self) -> FFElem {
        FFElem(vec![0; self.g])
    }

    pub fn one(&self) -> FFElem {
        self.from_prime(1)
    }

    pub fn from_prime(&self, c: u64) -> FFElem {
        let mut v = vec![0; self.g];
        v[0] = c % self.p;
        FFElem(v)
    }

    pub fn from_signed(&self, c: i64) -> FFElem {
        self.from_prime(c.rem_euclid(self.p as i64) as u64)
    }

    /// `u^j`, the `j`-th power-basis vector.
    pub fn basis_elem(&self, j: usize) -> FFElem {
        let mut v = vec![0; self.g];
        v[j] = 1;
        FFElem(v)
    }

    /// The class of the indeterminate `u`.
    pub fn generator(&self) -> FFElem {
        if self.g == 1 {
            // l = F_p[u]/(u + c0), so u = −c0
            return self.from_prime((self.p - self.modulus[0]) % self.p);
        }
        self.basis_elem(1)
    }

    pub fn from_coords(&self, coords: &[u64]) -> Result<FFElem> {
        if coords.len() > self.g {
            return Err(Error::param(format!(
                "{} coordinates for a field of degree {}",
                coords.len(),
                self.g
            )));
        }
        let mut v: Vec<u64> = coords.iter().map(|c| c % self.p).collect();
        v.resize(self.g, 0);
        Ok(FFElem(v))
    }

    /// Element with base-`p` digits of `index` as coordinates (low first).
    pub fn from_index(&self, index: u128) -> FFElem {
        FFElem(digits(index, self.p, self.g))
    }

    pub fn index_of(&self, x: &FFElem) -> u128 {
        x.0.iter()
            .rev()
            .fold(0u128, |acc, &c| acc * self.p as u128 + c as u128)
    }

    /// All elements in index order; only sensible for small fields.
    pub fn elements(&self) -> impl Iterator<Item = FFElem> + '_ {
        let n = self.order().expect("field too large to enumerate");
        (0..n).map(move |i| self.from_index(i))
    }

    pub fn add(&self, x: &FFElem, y: &FFElem) -> FFElem {
        FFElem(
            x.0.iter()
                .zip(&y.0)
                .map(|(a, b)| (a + b) % self.p)
                .collect(),
        )
    }

    pub fn sub(&self, x: &FFElem, y: &FFElem) -> FFElem {
        let p = self.p;
        FFElem(x.0.iter().zip(&y.0).map(|(a, b)| (a + p - b) % p).collect())
    }

    pub fn neg(&self, x: &FFElem) -> FFElem {
        let p = self.p;
        FFElem(x.0.iter().map(|a| (p - a) % p).collect())
    }

    pub fn scale(&self, x: &FFElem, c: u64) -> FFElem {
        let c = c % self.p;
        FFElem(x.0.iter().map(|a| a * c % self.p).collect())
    }

    pub fn mul(&self, x: &FFElem, y: &FFElem) -> FFElem {
        let g = self.g;
        let p = self.p;
        let mut prod = vec![0u64; 2 * g];
        for (i, &a) in x.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.0.iter().enumerate() {
                prod[i + j] += a * b;
            }
            if p > 1 << 12 {
                prod.iter_mut().for_each(|c| *c %= p);
            }
        }
        let mut out: Vec<u64> = prod[..g].iter().map(|c| c % p).collect();
        for (i, &c) in prod[g..].iter().enumerate() {
            let c = c % p;
            if c == 0 {
                continue;
            }
            for (o, &r) in out.iter_mut().zip(&self.reduction[i]) {
                *o = (*o + c * r) % p;
            }
        }
        FFElem(out)
    }

    pub fn pow(&self, x: &FFElem, mut e: u128) -> FFElem {
        let mut acc = self.one();
        let mut b = x.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul(&b, &b);
            }
        }
        acc
    }

    pub fn inv(&self, x: &FFElem) -> Result<FFElem> {
        if x.is_zero() {
            return Err(Error::param("inverse of zero"));
        }
        let n = self.order().ok_or(Error::Overflow("field order"))?;
        Ok(self.pow(x, n - 2))
    }

    /// `x^p` or `x^q`.
    pub fn frobenius(&self, x: &FFElem, level: FrobeniusLevel) -> FFElem {
        let once = |y: &FFElem| FFElem(self.frob.mul_vec(&y.0));
        match level {
            FrobeniusLevel::Absolute => once(x),
            FrobeniusLevel::Relative => (0..self.a).fold(x.clone(), |acc, _| once(&acc)),
        }
    }

    /// `x ↦ x^{p^k}` for any integer `k`.
    pub fn frobenius_power(&self, x: &FFElem, k: i64) -> FFElem {
        let k = k.rem_euclid(self.g as i64) as usize;
        (0..k).fold(x.clone(), |acc, _| FFElem(self.frob.mul_vec(&acc.0)))
    }

    /// The unique `y` with `y^p = x`.
    pub fn pth_root(&self, x: &FFElem) -> FFElem {
        FFElem(self.frob_inv.mul_vec(&x.0))
    }

    /// `Tr_{l/F_p}(x)`.
    pub fn trace(&self, x: &FFElem) -> u64 {
        let mut acc = self.zero();
        let mut y = x.clone();
        for _ in 0..self.g {
            acc = self.add(&acc, &y);
            y = self.frobenius(&y, FrobeniusLevel::Absolute);
        }
        acc.as_prime().expect("trace lies in the prime field")
    }

    pub fn is_in_k(&self, x: &FFElem) -> bool {
        self.frobenius(x, FrobeniusLevel::Relative) == *x
    }

    /// Matrix of `y ↦ x·y` on the power basis.
    pub fn mul_matrix(&self, x: &FFElem) -> FpMatrix {
        let cols: Vec<Vec<u64>> = (0..self.g)
            .map(|j| self.mul(x, &self.basis_elem(j)).0)
            .collect();
        FpMatrix::from_columns(self.p, self.g, &cols)
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, x: &FFElem) -> Result<u128> {
        if x.is_zero() {
            return Err(Error::param("zero has no multiplicative order"));
        }
        let n = self.order().ok_or(Error::Overflow("field order"))? - 1;
        let mut ord = n;
        for l in prime_factors(n as u64) {
            let l = l as u128;
            while ord % l == 0 && self.pow(x, ord / l) == self.one() {
                ord /= l;
            }
        }
        Ok(ord)
    }

    /// Deterministic element of exact multiplicative order `e`: the first
    /// `x^{(|l|−1)/e}` of exact order `e`, scanning `x` in index order.
    pub fn element_of_order(&self, e: u64) -> Result<FFElem> {
        let n = self.order().ok_or(Error::Overflow("field order"))? - 1;
        if e == 0 || n % e as u128 != 0 {
            return Err(Error::NoSuchSubgroup {
                p: self.p,
                g: self.g,
                e,
            });
        }
        if e == 1 {
            return Ok(self.one());
        }
        let cof = n / e as u128;
        let primes = prime_factors(e);
        for idx in 1..=n {
            let y = self.pow(&self.from_index(idx), cof);
            if primes
                .iter()
                .all(|&l| self.pow(&y, (e / l) as u128) != self.one())
            {
                return Ok(y);
            }
        }
        unreachable!("l^x is cyclic")
    }

    /// Normal basis generator: an element whose
    /// conjugates span `l` with the requested independence.
    ///
    /// Monomials `1, y, y^2, ...` are tried first, then a fixed pseudo-random
    /// sequence; normal elements have positive density so this terminates.
    pub fn normal_basis_element(&self, scope: NormalScope) -> FFElem {
        let monomials = (0..self.g).map(|i| {
            let mut c = vec![0; self.g];
            c[i] = 1;
            FFElem(c)
        });
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let random = std::iter::repeat_with(move || {
            FFElem((0..self.g).map(|_| rng.gen_range(0..self.p)).collect())
        });
        monomials
            .chain(random)
            .find(|x| self.is_normal(x, scope))
            .expect("normal basis theorem")
    }

    /// Rank check behind [`Self::normal_basis_element`].
    pub fn is_normal(&self, x: &FFElem, scope: NormalScope) -> bool {
        let vectors: Vec<Vec<u64>> = match scope {
            NormalScope::OverFp => {
                let mut out = Vec::with_capacity(self.g);
                let mut y = x.clone();
                for _ in 0..self.g {
                    out.push(y.0.clone());
                    y = self.frobenius(&y, FrobeniusLevel::Absolute);
                }
                out
            }
            NormalScope::OverK => {
                let mut out = Vec::with_capacity(self.g);
                let mut y = x.clone();
                for _ in 0..self.f {
                    for c in &self.k_basis {
                        out.push(self.mul(c, &y).0);
                    }
                    y = self.frobenius(&y, FrobeniusLevel::Relative);
                }
                out
            }
        };
        rank_of_vectors(self.p, &vectors) == self.g
    }

    /// Discrete logarithm of `x` to base `eta` of order `e`, by baby-step
    /// giant-step inside `⟨eta⟩`.
    pub fn dlog(&self, eta: &FFElem, e: u64, x: &FFElem) -> Result<u64> {
        if x.is_zero() || e == 0 {
            return Err(Error::NotInSubgroup);
        }
        let m = (e as f64).sqrt().ceil() as u64;
        let m = m.max(1);
        let mut baby: HashMap<FFElem, u64> = HashMap::with_capacity(m as usize);
        let mut cur = self.one();
        for j in 0..m {
            baby.entry(cur.clone()).or_insert(j);
            cur = self.mul(&cur, eta);
        }
        let giant = self.inv(&self.pow(eta, m as u128))?;
        let mut y = x.clone();
        for i in 0..=m {
            if let Some(&j) = baby.get(&y) {
                let k = (i * m + j) % e;
                if self.pow(eta, k as u128) == *x {
                    return Ok(k);
                }
            }
            y = self.mul(&y, &giant);
        }
        Err(Error::NotInSubgroup)
    }
}

fn digits(mut idx: u128, p: u64, g: usize) -> Vec<u64> {
    let mut v = vec![0u64; g];
    for slot in v.iter_mut() {
        *slot = (idx % p as u128) as u64;
        idx /= p as u128;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf4() -> FieldTower {
        FieldTower::new(2, 1, 2, 0).unwrap()
    }

    #[test]
    fn gf4_is_unique_quadratic() {
        let t = gf4();
        assert_eq!(t.modulus(), &[1, 1, 1]);
        let u = t.generator();
        // u^2 = u + 1
        assert_eq!(
            t.frobenius(&u, FrobeniusLevel::Absolute),
            t.add(&u, &t.one())
        );
    }

    #[test]
    fn prime_field_tower() {
        let t = FieldTower::new(3, 1, 1, 0).unwrap();
        assert_eq!(t.g(), 1);
        let two = t.from_prime(2);
        assert_eq!(t.mul(&two, &two), t.one());
        assert_eq!(t.normal_basis_element(NormalScope::OverFp), t.one());
        assert_eq!(t.element_of_order(2).unwrap(), two);
    }

    #[test]
    fn gf64_contains_gf4() {
        let t = FieldTower::new(2, 2, 3, 0).unwrap();
        assert_eq!(t.g(), 6);
        assert_eq!(t.k_basis().len(), 2);
        let fixed: Vec<FFElem> = t.elements().filter(|x| t.is_in_k(x)).collect();
        assert_eq!(fixed.len(), 4);
        // k is closed under multiplication
        for x in &fixed {
            for y in &fixed {
                assert!(t.is_in_k(&t.mul(x, y)));
            }
        }
        let beta = t.normal_basis_element(NormalScope::OverFp);
        assert!(t.is_normal(&beta, NormalScope::OverFp));
        let alpha = t.normal_basis_element(NormalScope::OverK);
        assert!(t.is_normal(&alpha, NormalScope::OverK));
    }

    #[test]
    fn relative_frobenius_has_order_f() {
        let t = FieldTower::new(3, 2, 2, 0).unwrap();
        for x in t.elements().step_by(7) {
            let y = (0..t.f()).fold(x.clone(), |acc, _| {
                t.frobenius(&acc, FrobeniusLevel::Relative)
            });
            assert_eq!(y, x);
            let z = (0..t.a()).fold(x.clone(), |acc, _| {
                t.frobenius(&acc, FrobeniusLevel::Absolute)
            });
            assert_eq!(z, t.frobenius(&x, FrobeniusLevel::Relative));
        }
    }

    #[test]
    fn gf4_normal_and_roots_of_unity() {
        let t = gf4();
        let u = t.generator();
        assert_eq!(t.normal_basis_element(NormalScope::OverFp), u);
        assert_eq!(t.element_of_order(3).unwrap(), u);
        assert_eq!(t.element_of_order(1).unwrap(), t.one());
        assert!(matches!(
            t.element_of_order(5),
            Err(Error::NoSuchSubgroup { .. })
        ));
        assert_eq!(t.dlog(&u, 3, &t.add(&u, &t.one())).unwrap(), 2);
        assert_eq!(t.dlog(&u, 3, &t.one()).unwrap(), 0);
        assert_eq!(t.trace(&u), 1);
    }

    #[test]
    fn dlog_outside_subgroup_fails() {
        let t = FieldTower::new(2, 1, 6, 0).unwrap();
        let eta = t.element_of_order(3).unwrap();
        let gen = t.element_of_order(63).unwrap();
        assert_eq!(t.dlog(&eta, 3, &gen), Err(Error::NotInSubgroup));
        assert_eq!(t.dlog(&eta, 3, &t.mul(&eta, &eta)).unwrap(), 2);
    }

    #[test]
    fn element_orders_are_exact() {
        let t = FieldTower::new(3, 1, 4, 0).unwrap();
        for e in [1u64, 2, 4, 5, 8, 10, 16, 20, 40, 80] {
            let eta = t.element_of_order(e).unwrap();
            assert_eq!(t.pow(&eta, e as u128), t.one());
            for l in prime_factors(e) {
                assert_ne!(t.pow(&eta, (e / l) as u128), t.one());
            }
            assert_eq!(t.multiplicative_order(&eta).unwrap(), e as u128);
        }
    }

    #[test]
    fn modulus_roundtrip_and_validation() {
        let t = FieldTower::new(5, 1, 3, 11).unwrap();
        let s = format_coeff_list(t.modulus());
        let parsed = parse_coeff_list(&s).unwrap();
        let t2 = FieldTower::from_modulus(5, 1, 3, parsed).unwrap();
        assert_eq!(t2.modulus(), t.modulus());
        assert!(FieldTower::from_modulus(2, 1, 2, vec![1, 0, 1]).is_err());
        assert!(FieldTower::new(4, 1, 1, 0).is_err());
    }

    #[test]
    fn irreducibility_matches_enumeration() {
        // count monic irreducible quartics over F_2 and cubics over F_3
        let count = |p: u64, d: usize| {
            (0..(p as u128).pow(d as u32))
                .filter(|&i| {
                    let mut poly = digits(i, p, d);
                    poly.push(1);
                    is_irreducible(&poly, p)
                })
                .count()
        };
        assert_eq!(count(2, 4), 3);
        assert_eq!(count(3, 3), 8);
        assert_eq!(count(2, 6), 9);
    }

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn field_axioms_and_frobenius(i in 0u128..729, j in 0u128..729, k in 0u128..729) {
            let t = FieldTower::new(3, 2, 3, 0).unwrap();
            let (x, y, z) = (t.from_index(i), t.from_index(j), t.from_index(k));
            prop_assert_eq!(t.mul(&t.mul(&x, &y), &z), t.mul(&x, &t.mul(&y, &z)));
            prop_assert_eq!(t.mul(&x, &t.add(&y, &z)), t.add(&t.mul(&x, &y), &t.mul(&x, &z)));
            if !x.is_zero() {
                prop_assert_eq!(t.mul(&x, &t.inv(&x).unwrap()), t.one());
            }
            let fr = |w: &FFElem| t.frobenius(w, FrobeniusLevel::Absolute);
            prop_assert_eq!(fr(&t.mul(&x, &y)), t.mul(&fr(&x), &fr(&y)));
            prop_assert_eq!(fr(&t.add(&x, &y)), t.add(&fr(&x), &fr(&y)));
            prop_assert_eq!(fr(&t.pth_root(&x)), x);
        }
    }
}
