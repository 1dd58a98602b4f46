//! Mixed characteristic: `o_L` for a split tame `L|K` over `Q_p`, realised as
//! `R[π]/(E(π^e))` with `R = W(l)/p^N` and `E` the Eisenstein polynomial of
//! `K`, together with Kummer class reduction of `Ū¹` and its module structure.
//!
//! `R` is `(Z/p^N)[y]/(P̃)` for the naive lift `P̃` of the residue tower's
//! defining polynomial. Elements of `o_L` are stored as `e_L` coefficients
//! in `R`, each a vector of `g` residues mod `p^N`.

mod module;
mod oracle;
mod reduce;

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::ffield::{FFElem, FieldTower};
use crate::group::{GroupElem, TameGroup};

pub use module::{mixed_unit_module, MixedStructureReport, MuModel};
pub use oracle::{enumeration_oracle, orbit_sizes, OracleReport, ORACLE_LIMIT};
pub use reduce::{MixedUnitClass, MuP};

/// `E(z) = z^{e_K} + Σ_{i<e_K} E_i z^i` over the unramified ring of degree
/// `f_K`; `E_i = Σ_j c_{ij} ω^j` with `ω` the Teichmüller lift of a
/// generator of `k^×`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Eisenstein {
    pub coeffs: Vec<Vec<i64>>,
}

impl Eisenstein {
    pub fn new(coeffs: Vec<Vec<i64>>) -> Self {
        Eisenstein { coeffs }
    }

    /// `z + c` style input: one integer per non-leading coefficient.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Eisenstein {
            coeffs: coeffs.iter().map(|&c| vec![c]).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// Comma-separated non-leading coefficients, low degree first; each is an
    /// integer or a bracketed `ω`-coordinate list. `"+3"` is `z + 3`,
    /// `"3,0"` is `z² + 3`, `"[2,1]"` is `z + 2 + ω`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = |x: &str| Error::param(format!("bad Eisenstein coefficient {x:?} in {s:?}"));
        let int = |x: &str| x.trim().parse::<i64>().map_err(|_| bad(x));
        let mut coeffs = Vec::new();
        let mut rest = s.trim();
        while !rest.is_empty() {
            if let Some(tail) = rest.strip_prefix('[') {
                let close = tail.find(']').ok_or_else(|| bad(rest))?;
                let inner = &tail[..close];
                let list = if inner.trim().is_empty() {
                    Vec::new()
                } else {
                    inner.split(',').map(int).collect::<Result<Vec<_>>>()?
                };
                coeffs.push(list);
                rest = tail[close + 1..].trim();
            } else {
                let end = rest.find(',').unwrap_or(rest.len());
                coeffs.push(vec![int(&rest[..end])?]);
                rest = rest[end..].trim();
            }
            rest = match rest.strip_prefix(',') {
                Some(r) => r.trim(),
                None if rest.is_empty() => rest,
                None => return Err(bad(rest)),
            };
        }
        if coeffs.is_empty() {
            return Err(Error::param(
                "Eisenstein polynomial needs at least one coefficient",
            ));
        }
        Ok(Eisenstein { coeffs })
    }
}

impl fmt::Display for Eisenstein {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|c| match c.as_slice() {
                [x] => x.to_string(),
                _ => format!(
                    "[{}]",
                    c.iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                ),
            })
            .collect();
        write!(f, "{}", parts.join(","))
    }
}

/// An element of `o_L/p^N`: coordinate `i·g + j` belongs to `π^i y^j`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PadicElem(Vec<u64>);

impl PadicElem {
    pub fn coords(&self) -> &[u64] {
        &self.0
    }
}

impl fmt::Debug for PadicElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

type RElem = Vec<u64>;

#[derive(Clone, Debug)]
pub struct MixedField {
    p: u64,
    f_k: usize,
    e_k: usize,
    e: u64,
    f: usize,
    e_l: usize,
    g: usize,
    n: u32,
    modulus: u64,
    eisenstein: Eisenstein,
    tower: Arc<FieldTower>,
    group: TameGroup,
    /// Lift of the residue tower's modulus, monic, `g + 1` entries.
    lift_poly: Vec<u64>,
    /// Low coefficients of `E(x^e)`.
    e_low: Vec<RElem>,
    /// `σ(y^j)` for the Frobenius lift `σ = φ^{f_K}`.
    sigma_cols: Vec<RElem>,
    /// `[η]^i` for `i < e`.
    eta_pows: Vec<RElem>,
    /// `p / π^{e_L}`.
    eps: PadicElem,
    mu: MuP,
}

/// Smallest `N` accepted for the given data: the `π`-adic window must reach
/// `B + 2e_L + e` where `B` is the level above which every principal unit is
/// a `p`-th power.
pub fn precision_floor(p: u64, e_l: usize, e: u64) -> u32 {
    let b = top_level(p, e_l) as u64;
    let need = b + 2 * e_l as u64 + e + 1;
    need.div_ceil(e_l as u64) as u32
}

/// `cp` when `(p−1) | e_L`, else `⌊p·e_L/(p−1)⌋`.
pub(crate) fn top_level(p: u64, e_l: usize) -> usize {
    (p as usize * e_l) / (p as usize - 1)
}

impl MixedField {
    /// `L` with residue tower `F_p ⊆ k ⊆ l` of degrees `f_K`, `f` and
    /// `o_L = W(l)[π]/(E(π^e))`, computed modulo `p^N`. `n = None` uses the
    /// precision floor.
    pub fn new(
        p: u64,
        f_k: usize,
        eisenstein: Eisenstein,
        e: u64,
        f: usize,
        n: Option<u32>,
    ) -> Result<Self> {
        Self::with_seed(p, f_k, eisenstein, e, f, n, 0)
    }

    pub fn with_seed(
        p: u64,
        f_k: usize,
        eisenstein: Eisenstein,
        e: u64,
        f: usize,
        n: Option<u32>,
        seed: u64,
    ) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::param(format!("{p} is not prime")));
        }
        if e == 0 || e.is_multiple_of(p) {
            return Err(Error::param(format!(
                "e = {e} must be positive and prime to p = {p}"
            )));
        }
        let e_k = eisenstein.degree();
        if e_k == 0 {
            return Err(Error::param("Eisenstein polynomial of degree 0"));
        }
        let e_l = e_k * e as usize;
        let g = f_k * f;
        if e_l * g > 24 {
            return Err(Error::param(format!("[L:Q_p] = {} exceeds 24", e_l * g)));
        }
        let floor = precision_floor(p, e_l, e);
        let n = n.unwrap_or(floor);
        if n < floor {
            return Err(Error::precision(format!(
                "N = {n} is below the precision floor {floor}"
            )));
        }
        let modulus = (p as u128)
            .checked_pow(n)
            .filter(|&m| m < 1 << 31)
            .ok_or_else(|| Error::param(format!("p^N = {p}^{n} does not fit below 2^31")))?
            as u64;
        let tower = Arc::new(FieldTower::new(p, f_k, f, seed)?);
        let group = TameGroup::over_tower(tower.clone(), e)?;
        let lift_poly = tower.modulus().to_vec();
        let mut field = MixedField {
            p,
            f_k,
            e_k,
            e,
            f,
            e_l,
            g,
            n,
            modulus,
            eisenstein: eisenstein.clone(),
            tower,
            group,
            lift_poly,
            e_low: Vec::new(),
            sigma_cols: Vec::new(),
            eta_pows: Vec::new(),
            eps: PadicElem(Vec::new()),
            mu: MuP {
                order: 1,
                generator: None,
            },
        };
        field.sigma_cols = field.frobenius_lift_cols();
        let omega = field.teichmuller(&field.tower.element_of_order(field.tower.q() - 1)?);
        let omega_pows = field.r_powers(&omega, f_k);
        let mut e_coeffs = Vec::with_capacity(e_k);
        let mut e_over_p = Vec::with_capacity(e_k);
        for (i, c) in eisenstein.coeffs.iter().enumerate() {
            if c.len() > f_k {
                return Err(Error::param(format!(
                    "coefficient {i} has more than f_K = {f_k} coordinates"
                )));
            }
            if c.iter().any(|x| x % p as i64 != 0) {
                return Err(Error::param(format!(
                    "coefficient {i} of E is not divisible by p"
                )));
            }
            let full = field.r_combination(&omega_pows, c.iter().copied());
            let reduced = field.r_combination(&omega_pows, c.iter().map(|x| x / p as i64));
            if i == 0 && reduced.iter().all(|x| x % p == 0) {
                return Err(Error::param("constant term of E has valuation above 1"));
            }
            e_coeffs.push(full);
            e_over_p.push(reduced);
        }
        let zero = vec![0u64; g];
        field.e_low = (0..e_l)
            .map(|i| {
                if i % e as usize == 0 {
                    e_coeffs[i / e as usize].clone()
                } else {
                    zero.clone()
                }
            })
            .collect();
        // p·Σ(E'_i/p)π^i = −π^{e_L}, so p/π^{e_L} = μ⁻¹ with μ = −Σ(E'_i/p)π^i
        let mut mu = vec![0u64; e_l * g];
        for (i, c) in e_over_p.iter().enumerate() {
            let slot = i * e as usize * g;
            for (j, &x) in c.iter().enumerate() {
                mu[slot + j] = (field.modulus - x) % field.modulus;
            }
        }
        field.eps = field.inv(&PadicElem(mu))?;
        let eta = field.teichmuller(field.group.eta()?);
        field.eta_pows = field.r_powers(&eta, e as usize);
        field.mu = field.find_mu_p()?;
        Ok(field)
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn f_k(&self) -> usize {
        self.f_k
    }
    pub fn e_k(&self) -> usize {
        self.e_k
    }
    pub fn e(&self) -> u64 {
        self.e
    }
    pub fn f(&self) -> usize {
        self.f
    }
    /// Absolute ramification index `e·e_K`.
    pub fn e_l(&self) -> usize {
        self.e_l
    }
    /// `[L:Q_p]`.
    pub fn degree(&self) -> usize {
        self.e_l * self.g
    }
    pub fn precision(&self) -> u32 {
        self.n
    }
    /// `p^N`.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }
    pub fn eisenstein(&self) -> &Eisenstein {
        &self.eisenstein
    }
    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }
    pub fn group(&self) -> &TameGroup {
        &self.group
    }
    /// `c = e_L/(p−1)` when it is an integer.
    pub fn c(&self) -> Option<usize> {
        self.e_l
            .is_multiple_of(self.p as usize - 1)
            .then(|| self.e_l / (self.p as usize - 1))
    }
    /// Level above which every principal unit is a `p`-th power.
    pub fn top_level(&self) -> usize {
        top_level(self.p, self.e_l)
    }
    pub fn eps(&self) -> &PadicElem {
        &self.eps
    }

    // ---- R = W(l)/p^N ----

    fn r_add(&self, x: &[u64], y: &[u64]) -> RElem {
        x.iter()
            .zip(y)
            .map(|(a, b)| (a + b) % self.modulus)
            .collect()
    }

    fn r_scale(&self, x: &[u64], k: u64) -> RElem {
        x.iter()
            .map(|a| a * (k % self.modulus) % self.modulus)
            .collect()
    }

    fn r_mul(&self, x: &[u64], y: &[u64]) -> RElem {
        let g = self.g;
        let m = self.modulus;
        let mut prod = vec![0u64; 2 * g - 1];
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + a * b) % m;
            }
        }
        for d in (g..2 * g - 1).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            for (k, &pk) in self.lift_poly[..g].iter().enumerate() {
                prod[d - g + k] = (prod[d - g + k] + (m - c) * pk) % m;
            }
            prod[d] = 0;
        }
        prod.truncate(g);
        prod
    }

    fn r_one(&self) -> RElem {
        let mut v = vec![0u64; self.g];
        v[0] = 1 % self.modulus;
        v
    }

    fn r_pow(&self, x: &[u64], mut k: u128) -> RElem {
        let mut acc = self.r_one();
        let mut base = x.to_vec();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.r_mul(&acc, &base);
            }
            base = self.r_mul(&base, &base);
            k >>= 1;
        }
        acc
    }

    fn r_powers(&self, x: &[u64], count: usize) -> Vec<RElem> {
        let mut out = Vec::with_capacity(count);
        let mut cur = self.r_one();
        for _ in 0..count {
            out.push(cur.clone());
            cur = self.r_mul(&cur, x);
        }
        out
    }

    fn r_combination(&self, basis: &[RElem], coeffs: impl Iterator<Item = i64>) -> RElem {
        let mut acc = vec![0u64; self.g];
        for (b, c) in basis.iter().zip(coeffs) {
            let k = c.rem_euclid(self.modulus as i64) as u64;
            acc = self.r_add(&acc, &self.r_scale(b, k));
        }
        acc
    }

    fn r_residue(&self, x: &[u64]) -> FFElem {
        let c: Vec<u64> = x.iter().map(|a| a % self.p).collect();
        self.tower.from_coords(&c).expect("length g")
    }

    /// Naive lift of a residue (coordinates in `[0, p)`).
    pub fn lift(&self, x: &FFElem) -> RElem {
        x.coords().to_vec()
    }

    fn r_inv(&self, x: &[u64]) -> Result<RElem> {
        let r = self.r_residue(x);
        let mut y = self.lift(&self.tower.inv(&r)?);
        let two = self.r_scale(&self.r_one(), 2);
        for _ in 0..=(32 - self.n.leading_zeros()) {
            let xy = self.r_mul(x, &y);
            let corr: RElem = two
                .iter()
                .zip(&xy)
                .map(|(a, b)| (a + self.modulus - b) % self.modulus)
                .collect();
            y = self.r_mul(&y, &corr);
        }
        Ok(y)
    }

    /// Teichmüller lift `[x]`: the limit of `x̃^{p^{g·k}}`.
    pub fn teichmuller(&self, x: &FFElem) -> RElem {
        let q_l = (self.p as u128).pow(self.g as u32);
        let mut z = self.lift(x);
        for _ in 0..=self.n {
            let next = self.r_pow(&z, q_l);
            if next == z {
                break;
            }
            z = next;
        }
        z
    }

    fn eval_lift_poly(&self, z: &[u64], derivative: bool) -> RElem {
        let mut acc = vec![0u64; self.g];
        let coeffs: Vec<u64> = if derivative {
            self.lift_poly
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * i as u64)
                .collect()
        } else {
            self.lift_poly.clone()
        };
        for &c in coeffs.iter().rev() {
            acc = self.r_mul(&acc, z);
            acc[0] = (acc[0] + c) % self.modulus;
        }
        acc
    }

    /// Columns `σ(y^j)` where `φ(y)` is the root of `P̃` lifting `y^p`.
    fn frobenius_lift_cols(&self) -> Vec<RElem> {
        let mut y = vec![0u64; self.g];
        if self.g > 1 {
            y[1] = 1;
        } else {
            // l = F_p: y is the root of the linear modulus
            y[0] = (self.modulus - self.lift_poly[0] % self.modulus) % self.modulus;
        }
        let mut z = self.r_pow(&y, self.p as u128);
        for _ in 0..=self.n {
            let val = self.eval_lift_poly(&z, false);
            if val.iter().all(|&c| c == 0) {
                break;
            }
            let d = self
                .r_inv(&self.eval_lift_poly(&z, true))
                .expect("separable modulus");
            let step = self.r_mul(&val, &d);
            z = z
                .iter()
                .zip(&step)
                .map(|(a, b)| (a + self.modulus - b) % self.modulus)
                .collect();
        }
        // φ on the basis, then σ = φ^{f_K}
        let phi_cols = self.r_powers(&z, self.g);
        let apply = |cols: &[RElem], x: &[u64]| -> RElem {
            let mut acc = vec![0u64; self.g];
            for (col, &c) in cols.iter().zip(x) {
                acc = self.r_add(&acc, &self.r_scale(col, c));
            }
            acc
        };
        let mut cols: Vec<RElem> = (0..self.g)
            .map(|j| {
                let mut v = vec![0u64; self.g];
                v[j] = 1;
                v
            })
            .collect();
        for _ in 0..self.f_k {
            cols = cols.iter().map(|c| apply(&phi_cols, c)).collect();
        }
        cols
    }

    fn r_sigma(&self, x: &[u64], times: u64) -> RElem {
        let mut cur = x.to_vec();
        for _ in 0..times {
            let mut acc = vec![0u64; self.g];
            for (col, &c) in self.sigma_cols.iter().zip(&cur) {
                if c != 0 {
                    acc = self.r_add(&acc, &self.r_scale(col, c));
                }
            }
            cur = acc;
        }
        cur
    }

    // ---- o_L/p^N ----

    fn coeff<'a>(&self, x: &'a PadicElem, i: usize) -> &'a [u64] {
        &x.0[i * self.g..(i + 1) * self.g]
    }

    pub fn zero(&self) -> PadicElem {
        PadicElem(vec![0; self.e_l * self.g])
    }

    pub fn one(&self) -> PadicElem {
        self.embed_r(&self.r_one())
    }

    pub fn from_int(&self, k: i64) -> PadicElem {
        let r = self.r_scale(&self.r_one(), k.rem_euclid(self.modulus as i64) as u64);
        self.embed_r(&r)
    }

    fn embed_r(&self, r: &[u64]) -> PadicElem {
        let mut v = self.zero();
        v.0[..self.g].copy_from_slice(r);
        v
    }

    /// Element from raw coordinates (`e_L·g` entries, reduced mod `p^N`).
    pub fn from_coords(&self, coords: &[i64]) -> Result<PadicElem> {
        if coords.len() != self.e_l * self.g {
            return Err(Error::param(format!(
                "expected {} coordinates",
                self.e_l * self.g
            )));
        }
        Ok(PadicElem(
            coords
                .iter()
                .map(|c| c.rem_euclid(self.modulus as i64) as u64)
                .collect(),
        ))
    }

    /// Naive lift of `x ∈ l` as a constant.
    pub fn lift_const(&self, x: &FFElem) -> PadicElem {
        self.embed_r(&self.lift(x))
    }

    pub fn teichmuller_const(&self, x: &FFElem) -> PadicElem {
        self.embed_r(&self.teichmuller(x))
    }

    pub fn uniformiser(&self) -> PadicElem {
        self.pi_pow(1)
    }

    /// `π^v`.
    pub fn pi_pow(&self, v: usize) -> PadicElem {
        if v < self.e_l {
            let mut x = self.zero();
            x.0[v * self.g] = 1 % self.modulus;
            return x;
        }
        // π^{e_L} = −Σ E'_i π^i
        let mut top = self.zero();
        for (i, c) in self.e_low.iter().enumerate() {
            for (j, &x) in c.iter().enumerate() {
                top.0[i * self.g + j] = (self.modulus - x) % self.modulus;
            }
        }
        let rest = self.pi_pow(v % self.e_l);
        self.mul(&self.pow(&top, (v / self.e_l) as u64), &rest)
    }

    pub fn add(&self, x: &PadicElem, y: &PadicElem) -> PadicElem {
        PadicElem(
            x.0.iter()
                .zip(&y.0)
                .map(|(a, b)| (a + b) % self.modulus)
                .collect(),
        )
    }

    pub fn sub(&self, x: &PadicElem, y: &PadicElem) -> PadicElem {
        PadicElem(
            x.0.iter()
                .zip(&y.0)
                .map(|(a, b)| (a + self.modulus - b) % self.modulus)
                .collect(),
        )
    }

    pub fn scale(&self, x: &PadicElem, k: i64) -> PadicElem {
        let k = k.rem_euclid(self.modulus as i64) as u64;
        PadicElem(x.0.iter().map(|a| a * k % self.modulus).collect())
    }

    pub fn mul(&self, x: &PadicElem, y: &PadicElem) -> PadicElem {
        let (el, g) = (self.e_l, self.g);
        let mut prod: Vec<RElem> = vec![vec![0u64; g]; 2 * el - 1];
        for i in 0..el {
            let a = self.coeff(x, i);
            if a.iter().all(|&c| c == 0) {
                continue;
            }
            for j in 0..el {
                let b = self.coeff(y, j);
                if b.iter().all(|&c| c == 0) {
                    continue;
                }
                prod[i + j] = self.r_add(&prod[i + j], &self.r_mul(a, b));
            }
        }
        // π^{e_L} = −Σ E'_i π^i
        for d in (el..2 * el - 1).rev() {
            let c = std::mem::replace(&mut prod[d], vec![0u64; g]);
            if c.iter().all(|&v| v == 0) {
                continue;
            }
            for (i, ei) in self.e_low.iter().enumerate() {
                if ei.iter().all(|&v| v == 0) {
                    continue;
                }
                let t = self.r_mul(&c, ei);
                let slot = &mut prod[d - el + i];
                *slot = slot
                    .iter()
                    .zip(&t)
                    .map(|(a, b)| (a + self.modulus - b) % self.modulus)
                    .collect();
            }
        }
        PadicElem(prod[..el].concat())
    }

    pub fn pow(&self, x: &PadicElem, mut k: u64) -> PadicElem {
        let mut acc = self.one();
        let mut base = x.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            k >>= 1;
        }
        acc
    }

    /// `π`-adic valuation; `None` when zero modulo `p^N`.
    pub fn valuation(&self, x: &PadicElem) -> Option<usize> {
        (0..self.e_l)
            .filter_map(|i| {
                let vp = self
                    .coeff(x, i)
                    .iter()
                    .filter(|&&c| c != 0)
                    .map(|&c| vp(c, self.p))
                    .min()?;
                Some(self.e_l * vp as usize + i)
            })
            .min()
    }

    /// `π`-adic precision of every computation: `e_L·N`.
    pub fn pi_precision(&self) -> usize {
        self.e_l * self.n as usize
    }

    pub fn is_unit(&self, x: &PadicElem) -> bool {
        self.valuation(x) == Some(0)
    }

    /// Residue of `x/π^r` for `v(x) ≥ r`, using `p = ε·π^{e_L}`.
    pub fn level_residue(&self, x: &PadicElem, r: usize) -> FFElem {
        let (k, i0) = (r / self.e_l, r % self.e_l);
        let pk = self.p.pow(k as u32);
        let a: RElem = self.coeff(x, i0).iter().map(|c| c / pk).collect();
        let eps0 = self.residue(&self.eps);
        self.tower
            .mul(&self.r_residue(&a), &self.tower.pow(&eps0, k as u128))
    }

    /// Image in the residue field `l`.
    pub fn residue(&self, x: &PadicElem) -> FFElem {
        self.r_residue(self.coeff(x, 0))
    }

    pub fn inv(&self, x: &PadicElem) -> Result<PadicElem> {
        if !self.is_unit(x) {
            return Err(Error::param("inverting a non-unit"));
        }
        let mut y = self.lift_const(&self.tower.inv(&self.residue(x))?);
        let two = self.from_int(2);
        let target = self.pi_precision();
        let mut reached = 1usize;
        while reached < target {
            y = self.mul(&y, &self.sub(&two, &self.mul(x, &y)));
            reached *= 2;
        }
        y = self.mul(&y, &self.sub(&two, &self.mul(x, &y)));
        Ok(y)
    }

    /// `τ^t σ^s`: `σ` applies the Frobenius lift to coefficients, `τ` sends
    /// `π` to `[η]π`.
    pub fn galois_act(&self, h: &GroupElem, x: &PadicElem) -> Result<PadicElem> {
        if h.sig() != self.group.sig() {
            return Err(Error::MixedGroups);
        }
        let mut out = Vec::with_capacity(x.0.len());
        for i in 0..self.e_l {
            let a = self.r_sigma(self.coeff(x, i), h.s);
            let twist = &self.eta_pows[(h.t as usize * i) % self.e as usize];
            out.extend(self.r_mul(&a, twist));
        }
        Ok(PadicElem(out))
    }

    pub fn random<R: Rng>(&self, rng: &mut R) -> PadicElem {
        PadicElem(
            (0..self.e_l * self.g)
                .map(|_| rng.gen_range(0..self.modulus))
                .collect(),
        )
    }

    pub fn random_unit<R: Rng>(&self, rng: &mut R) -> PadicElem {
        loop {
            let x = self.random(rng);
            if self.is_unit(&x) {
                return x;
            }
        }
    }

    /// Random `u ≡ 1 (mod π)`.
    pub fn random_principal_unit<R: Rng>(&self, rng: &mut R) -> PadicElem {
        let x = self.random(rng);
        self.add(&self.one(), &self.mul(&x, &self.uniformiser()))
    }
}

fn vp(mut x: u64, p: u64) -> u32 {
    let mut v = 0;
    while x.is_multiple_of(p) {
        x /= p;
        v += 1;
    }
    v
}

#[cfg(test)]
mod tests;
