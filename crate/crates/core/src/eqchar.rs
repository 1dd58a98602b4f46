//! Characteristic `p`: truncated Laurent series over `l` with `π^e = t`,
//! the split Galois action, Artin–Schreier and Kummer class reductions, and
//! the finite-level module structures of `L⁺/℘(L⁺)` and `Ū¹`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::arith::{gcd, lcm, LemmaParams};
use crate::error::{Error, Result};
use crate::ffield::{FFElem, FieldTower};
use crate::gmod::{direct_sum, is_isomorphic, regular_module_k, FpGModule};
use crate::group::{GroupElem, TameGroup};
use crate::linalg::FpMatrix;
use crate::structure::{graded_checks, GradedCheck, StructureReport};

/// `L = l((π))` over `K = k((π^e))`.
#[derive(Clone, Debug)]
pub struct EqCharField {
    tower: Arc<FieldTower>,
    group: TameGroup,
    v_min: i64,
    prec: usize,
}

/// `Σ coeffs[i]·π^{start+i} + O(π^{start+len})`.
///
/// After normalisation the first coefficient is nonzero, so `start` is the
/// valuation; a zero element has no coefficients and `start = abs_prec`.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentElem {
    start: i64,
    coeffs: Vec<FFElem>,
}

impl LaurentElem {
    pub fn abs_prec(&self) -> i64 {
        self.start + self.coeffs.len() as i64
    }

    /// `None` for an element that is zero to the tracked precision.
    pub fn valuation(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.start)
    }

    /// Coefficient of `π^v`; `None` outside the known window.
    pub fn coeff(&self, v: i64) -> Option<&FFElem> {
        if v >= self.abs_prec() {
            return None;
        }
        if v < self.start {
            return None;
        }
        self.coeffs.get((v - self.start) as usize)
    }

    /// Nonzero coefficients by valuation.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &FFElem)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.start + i as i64, c))
    }

    fn normalise(mut self) -> Self {
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        self.coeffs.drain(..lead);
        self.start += lead as i64;
        self
    }
}

impl fmt::Debug for LaurentElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LaurentElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms().map(|(v, c)| format!("{v}: {c}")).collect();
        write!(f, "{{{}}} + O(pi^{})", parts.join(", "), self.abs_prec())
    }
}

/// A class of `L⁺/℘(L⁺)`: coefficients at negative levels prime to `p`
/// plus the constant part in `F_p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ASClass {
    pub coeffs: BTreeMap<i64, FFElem>,
    pub constant: u64,
}

/// A class of `Ū¹ = U¹/(U¹)^p` below a cutoff level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnitClass {
    pub coeffs: BTreeMap<i64, FFElem>,
    pub cutoff: i64,
}

fn level_coords(coeffs: &BTreeMap<i64, FFElem>, levels: &[i64], g: usize) -> Result<Vec<u64>> {
    if let Some(bad) = coeffs.keys().find(|v| levels.binary_search(v).is_err()) {
        return Err(Error::param(format!(
            "class has a component at untracked level {bad}"
        )));
    }
    let mut out = Vec::with_capacity(levels.len() * g);
    for v in levels {
        match coeffs.get(v) {
            Some(c) => out.extend_from_slice(c.coords()),
            None => out.extend(std::iter::repeat_n(0, g)),
        }
    }
    Ok(out)
}

impl ASClass {
    /// `F_p`-coordinates on the basis `{constant} ∪ levels ⊗ l-basis`.
    pub fn coordinates(&self, levels: &[i64], g: usize) -> Result<Vec<u64>> {
        let mut out = vec![self.constant];
        out.extend(level_coords(&self.coeffs, levels, g)?);
        Ok(out)
    }
}

impl UnitClass {
    pub fn coordinates(&self, levels: &[i64], g: usize) -> Result<Vec<u64>> {
        level_coords(&self.coeffs, levels, g)
    }

    pub fn is_trivial(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl EqCharField {
    /// `v_min` and `prec` set the default window `[v_min, v_min + prec)` used
    /// by [`Self::element`] and [`Self::random`].
    pub fn new(p: u64, a: usize, f: usize, e: u64, v_min: i64, prec: usize) -> Result<Self> {
        Self::with_seed(p, a, f, e, v_min, prec, 0)
    }

    pub fn with_seed(
        p: u64,
        a: usize,
        f: usize,
        e: u64,
        v_min: i64,
        prec: usize,
        seed: u64,
    ) -> Result<Self> {
        if e.is_multiple_of(p) {
            return Err(Error::param(format!(
                "p = {p} divides e = {e}; the extension is wild"
            )));
        }
        if prec == 0 {
            return Err(Error::param("precision must be at least 1"));
        }
        let tower = Arc::new(FieldTower::new(p, a, f, seed)?);
        let group = TameGroup::over_tower(tower.clone(), e)?;
        Ok(EqCharField {
            tower,
            group,
            v_min,
            prec,
        })
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }
    pub fn group(&self) -> &TameGroup {
        &self.group
    }
    pub fn p(&self) -> u64 {
        self.tower.p()
    }
    pub fn window(&self) -> (i64, usize) {
        (self.v_min, self.prec)
    }

    /// Zero with absolute precision `abs_prec`.
    pub fn zero(&self, abs_prec: i64) -> LaurentElem {
        LaurentElem {
            start: abs_prec,
            coeffs: Vec::new(),
        }
    }

    /// `c·π^v + O(π^{abs_prec})`.
    pub fn monomial(&self, c: &FFElem, v: i64, abs_prec: i64) -> LaurentElem {
        if v >= abs_prec {
            return self.zero(abs_prec);
        }
        let mut coeffs = vec![self.tower.zero(); (abs_prec - v) as usize];
        coeffs[0] = c.clone();
        LaurentElem { start: v, coeffs }.normalise()
    }

    pub fn one(&self, abs_prec: i64) -> LaurentElem {
        self.monomial(&self.tower.one(), 0, abs_prec)
    }

    /// Builds an element from sparse terms known to precision `abs_prec`.
    pub fn from_terms(&self, terms: &[(i64, FFElem)], abs_prec: i64) -> Result<LaurentElem> {
        let low = terms
            .iter()
            .map(|t| t.0)
            .min()
            .unwrap_or(abs_prec)
            .min(abs_prec);
        let mut coeffs = vec![self.tower.zero(); (abs_prec - low) as usize];
        for (v, c) in terms {
            if *v >= abs_prec {
                return Err(Error::precision(format!(
                    "term at {v} beyond precision {abs_prec}"
                )));
            }
            let slot = &mut coeffs[(v - low) as usize];
            *slot = self.tower.add(slot, c);
        }
        Ok(LaurentElem { start: low, coeffs }.normalise())
    }

    /// Element on the field's default window from coordinate lists.
    pub fn element(&self, terms: &[(i64, Vec<u64>)]) -> Result<LaurentElem> {
        let parsed = terms
            .iter()
            .map(|(v, c)| Ok((*v, self.tower.from_coords(c)?)))
            .collect::<Result<Vec<_>>>()?;
        self.from_terms(&parsed, self.v_min + self.prec as i64)
    }

    /// Parses `{v: [c0,c1,..], ...}` on the default window.
    pub fn parse(&self, s: &str) -> Result<LaurentElem> {
        let bad = || Error::param(format!("expected {{v: [c,..], ...}}, got {s:?}"));
        let inner = s
            .trim()
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(bad)?;
        let mut terms = Vec::new();
        let mut rest = inner.trim();
        while !rest.is_empty() {
            let (key, tail) = rest.split_once(':').ok_or_else(bad)?;
            let v: i64 = key.trim().parse().map_err(|_| bad())?;
            let close = tail.find(']').ok_or_else(bad)?;
            let coeffs = crate::ffield::parse_coeff_list(&tail[..=close])?;
            terms.push((v, coeffs));
            rest = tail[close + 1..].trim().trim_start_matches(',').trim();
        }
        self.element(&terms)
    }

    pub fn random<R: Rng>(&self, rng: &mut R, low: i64, abs_prec: i64) -> LaurentElem {
        let g = self.tower.g();
        let coeffs = (low..abs_prec)
            .map(|_| {
                let c: Vec<u64> = (0..g).map(|_| rng.gen_range(0..self.p())).collect();
                self.tower.from_coords(&c).expect("length g")
            })
            .collect();
        LaurentElem { start: low, coeffs }.normalise()
    }

    /// Random `u ≡ 1 (mod π)` known to `abs_prec`.
    pub fn random_unit<R: Rng>(&self, rng: &mut R, abs_prec: i64) -> LaurentElem {
        let tail = self.random(rng, 1, abs_prec);
        self.add(&self.one(abs_prec), &tail)
    }

    pub fn truncate(&self, x: &LaurentElem, abs_prec: i64) -> LaurentElem {
        if abs_prec >= x.abs_prec() {
            return x.clone();
        }
        if abs_prec <= x.start {
            return self.zero(abs_prec);
        }
        let mut y = x.clone();
        y.coeffs.truncate((abs_prec - x.start) as usize);
        y.normalise()
    }

    fn combine(&self, x: &LaurentElem, y: &LaurentElem, sub: bool) -> LaurentElem {
        let prec = x.abs_prec().min(y.abs_prec());
        let low = x.start.min(y.start).min(prec);
        let mut coeffs = vec![self.tower.zero(); (prec - low) as usize];
        for (v, c) in x.terms().filter(|t| t.0 < prec) {
            coeffs[(v - low) as usize] = c.clone();
        }
        for (v, c) in y.terms().filter(|t| t.0 < prec) {
            let slot = &mut coeffs[(v - low) as usize];
            *slot = if sub {
                self.tower.sub(slot, c)
            } else {
                self.tower.add(slot, c)
            };
        }
        LaurentElem { start: low, coeffs }.normalise()
    }

    pub fn add(&self, x: &LaurentElem, y: &LaurentElem) -> LaurentElem {
        self.combine(x, y, false)
    }

    pub fn sub(&self, x: &LaurentElem, y: &LaurentElem) -> LaurentElem {
        self.combine(x, y, true)
    }

    pub fn neg(&self, x: &LaurentElem) -> LaurentElem {
        LaurentElem {
            start: x.start,
            coeffs: x.coeffs.iter().map(|c| self.tower.neg(c)).collect(),
        }
    }

    pub fn mul(&self, x: &LaurentElem, y: &LaurentElem) -> LaurentElem {
        let prec = (x.start + y.abs_prec()).min(y.start + x.abs_prec());
        let low = x.start + y.start;
        if low >= prec {
            return self.zero(prec);
        }
        let len = (prec - low) as usize;
        let mut coeffs = vec![self.tower.zero(); len];
        for (i, a) in x.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.coeffs.iter().enumerate().take(len - i) {
                if !b.is_zero() {
                    coeffs[i + j] = self.tower.add(&coeffs[i + j], &self.tower.mul(a, b));
                }
            }
        }
        LaurentElem { start: low, coeffs }.normalise()
    }

    /// Inverse of an element with known valuation.
    pub fn inv(&self, x: &LaurentElem) -> Result<LaurentElem> {
        let v = x.valuation().ok_or_else(|| {
            Error::precision("inverting an element that is zero to tracked precision")
        })?;
        let n = x.coeffs.len();
        let c0 = self.tower.inv(&x.coeffs[0])?;
        let mut out: Vec<FFElem> = Vec::with_capacity(n);
        for k in 0..n {
            if k == 0 {
                out.push(c0.clone());
                continue;
            }
            let mut acc = self.tower.zero();
            for i in 1..=k {
                acc = self
                    .tower
                    .add(&acc, &self.tower.mul(&x.coeffs[i], &out[k - i]));
            }
            out.push(self.tower.neg(&self.tower.mul(&c0, &acc)));
        }
        Ok(LaurentElem {
            start: -v,
            coeffs: out,
        }
        .normalise())
    }

    /// `x^p`, exact in characteristic `p`: known to `p·abs_prec`.
    pub fn pow_p(&self, x: &LaurentElem) -> LaurentElem {
        let p = self.p() as i64;
        let prec = p * x.abs_prec();
        let low = p * x.start;
        let mut coeffs = vec![self.tower.zero(); (prec - low).max(0) as usize];
        for (v, c) in x.terms() {
            coeffs[(p * v - low) as usize] = self.tower.frobenius_power(c, 1);
        }
        if coeffs.is_empty() {
            return self.zero(prec);
        }
        LaurentElem { start: low, coeffs }.normalise()
    }

    /// `℘(y) = y^p − y`.
    pub fn wp(&self, y: &LaurentElem) -> LaurentElem {
        self.sub(&self.pow_p(y), y)
    }

    /// `τ^t σ^s` acting by `c_v π^v ↦ c_v^{q^s} η^{tv} π^v`.
    pub fn galois_act(&self, g: &GroupElem, x: &LaurentElem) -> Result<LaurentElem> {
        if g.sig() != self.group.sig() {
            return Err(Error::MixedGroups);
        }
        let a = self.tower.a() as i64;
        let coeffs = x
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let v = x.start + i as i64;
                let moved = self.tower.frobenius_power(c, a * g.s as i64);
                Ok(self.tower.mul(&moved, &self.group.theta(g.t as i64 * v)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LaurentElem {
            start: x.start,
            coeffs,
        })
    }

    /// Canonical representative of `x` modulo `℘(L)`.
    ///
    /// Levels `pw < 0` are moved to `w` via `c π^{pw} ≡ c^{1/p} π^w`, the
    /// constant goes to its absolute trace and positive levels vanish.
    pub fn as_reduce(&self, x: &LaurentElem) -> Result<ASClass> {
        if x.abs_prec() < 1 {
            return Err(Error::precision(format!(
                "constant term unknown (element known to O(pi^{}))",
                x.abs_prec()
            )));
        }
        let p = self.p() as i64;
        let mut work: BTreeMap<i64, FFElem> = x
            .terms()
            .filter(|t| t.0 <= 0)
            .map(|(v, c)| (v, c.clone()))
            .collect();
        let mut coeffs = BTreeMap::new();
        while let Some((v, c)) = work.pop_first() {
            if v == 0 {
                return Ok(ASClass {
                    coeffs,
                    constant: self.tower.trace(&c),
                });
            }
            if v % p == 0 {
                let root = self.tower.pth_root(&c);
                let slot = work.entry(v / p).or_insert_with(|| self.tower.zero());
                *slot = self.tower.add(slot, &root);
            } else if !c.is_zero() {
                coeffs.insert(v, c);
            }
        }
        Ok(ASClass {
            coeffs,
            constant: 0,
        })
    }

    /// Canonical form of a principal unit modulo `p`-th powers and `U^{cutoff}`.
    ///
    /// At a level `r` prime to `p` the coefficient's `F_p`-coordinates `a_j`
    /// are recorded and `Π_j (1 + u^j π^r)^{a_j}` divided out; a level `pw`
    /// is cleared with `(1 + c^{1/p} π^w)^p`.
    pub fn unit_reduce(&self, u: &LaurentElem, cutoff: i64) -> Result<UnitClass> {
        if cutoff < 1 {
            return Err(Error::param("cutoff must be at least 1"));
        }
        if u.abs_prec() < cutoff {
            return Err(Error::precision(format!(
                "unit known to O(pi^{}) but cutoff is {cutoff}",
                u.abs_prec()
            )));
        }
        let one = self.one(cutoff);
        let mut work = self.truncate(u, cutoff);
        if self.sub(&work, &one).valuation().is_some_and(|v| v < 1) {
            return Err(Error::param("not a principal unit"));
        }
        let p = self.p() as i64;
        let mut coeffs = BTreeMap::new();
        for r in 1..cutoff {
            let Some(c) = work.coeff(r).cloned() else {
                continue;
            };
            if c.is_zero() {
                continue;
            }
            let divisor = if r % p == 0 {
                let root = self.tower.pth_root(&c);
                let base = self.add(&one, &self.monomial(&root, r / p, cutoff));
                self.truncate(&self.pow_p(&base), cutoff)
            } else {
                coeffs.insert(r, c.clone());
                self.basis_product(&c, r, cutoff)
            };
            work = self.mul(&work, &self.inv(&divisor)?);
        }
        Ok(UnitClass { coeffs, cutoff })
    }

    /// `Π_j (1 + u^j π^r)^{a_j}` for `c = Σ a_j u^j`.
    pub fn basis_product(&self, c: &FFElem, r: i64, cutoff: i64) -> LaurentElem {
        let one = self.one(cutoff);
        let mut acc = one.clone();
        for (j, &a) in c.coords().iter().enumerate() {
            let factor = self.add(&one, &self.monomial(&self.tower.basis_elem(j), r, cutoff));
            for _ in 0..a {
                acc = self.mul(&acc, &factor);
            }
        }
        acc
    }

    /// `L⁺/℘(L⁺)` truncated to levels `> −cp`, with `n` inflated so that `e | c`.
    pub fn as_module(&self, m: u64) -> Result<StructureReport> {
        let (params, inflation) = self.as_params(m)?;
        let p = self.p() as i64;
        let cp = (params.c * params.p) as i64;
        let levels: Vec<i64> = params.b_sequence().iter().map(|&b| b as i64 - cp).collect();
        let g = self.tower.g();
        let dim = 1 + levels.len() * g;
        let constant = (1..)
            .map(|i| self.tower.from_index(i))
            .find(|x| self.tower.trace(x) == 1)
            .expect("trace is onto");
        let mut reps = vec![self.monomial(&constant, 0, 1)];
        for &r in &levels {
            debug_assert!(r % p != 0);
            for j in 0..g {
                reps.push(self.monomial(&self.tower.basis_elem(j), r, 1));
            }
        }
        let matrix = |h: &GroupElem| -> Result<FpMatrix> {
            let cols = reps
                .iter()
                .map(|x| {
                    self.as_reduce(&self.galois_act(h, x)?)?
                        .coordinates(&levels, g)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(FpMatrix::from_columns(self.p(), dim, &cols))
        };
        let module = FpGModule::new(
            self.p(),
            self.group.sig(),
            matrix(&self.group.sigma())?,
            matrix(&self.group.tau())?,
        )?;
        let trivial = FpGModule::trivial(self.p(), self.group.sig(), 1);
        let graded = self.graded_checks(&module, &levels, 1)?;
        let free = vec![regular_module_k(&self.group)?; params.d as usize];
        let mut parts = vec![trivial];
        parts.extend(free);
        let target = direct_sum(self.p(), self.group.sig(), &parts)?;
        let total = is_isomorphic(&module, &target, 0)?;
        Ok(StructureReport {
            kind: "additive",
            params,
            inflation,
            levels,
            dim,
            expected_dim: 1 + (params.d as usize) * self.tower.a() * self.group.order() as usize,
            precision: 1,
            graded,
            total,
            module,
        })
    }

    /// `Ū¹/Ū^{mcp}` with `n = m·lcm(p−1, e)`.
    pub fn unit_module(&self, m: u64) -> Result<StructureReport> {
        let params = LemmaParams::new(self.p(), self.group.e(), m)?;
        let cutoff = (params.c * params.p) as i64;
        let levels: Vec<i64> = params.b_sequence().iter().map(|&b| b as i64).collect();
        let g = self.tower.g();
        let dim = levels.len() * g;
        let mut reps = Vec::with_capacity(dim);
        for &r in &levels {
            for j in 0..g {
                reps.push(self.basis_product(&self.tower.basis_elem(j), r, cutoff));
            }
        }
        let matrix = |h: &GroupElem| -> Result<FpMatrix> {
            let cols = reps
                .iter()
                .map(|x| {
                    self.unit_reduce(&self.galois_act(h, x)?, cutoff)?
                        .coordinates(&levels, g)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(FpMatrix::from_columns(self.p(), dim, &cols))
        };
        let module = FpGModule::new(
            self.p(),
            self.group.sig(),
            matrix(&self.group.sigma())?,
            matrix(&self.group.tau())?,
        )?;
        let graded = self.graded_checks(&module, &levels, 0)?;
        let target = direct_sum(
            self.p(),
            self.group.sig(),
            &vec![regular_module_k(&self.group)?; params.d as usize],
        )?;
        let total = is_isomorphic(&module, &target, 0)?;
        Ok(StructureReport {
            kind: "multiplicative",
            params,
            inflation: 1,
            levels,
            dim,
            expected_dim: (params.d as usize) * self.tower.a() * self.group.order() as usize,
            precision: cutoff,
            graded,
            total,
            module,
        })
    }

    /// Parameters for the additive side and the inflation making `e | c`.
    pub fn as_params(&self, m: u64) -> Result<(LemmaParams, u64)> {
        let (p, e) = (self.p(), self.group.e());
        let base = lcm(p - 1, e)?;
        let c0 = base / (p - 1);
        let inflation = e / gcd(c0, e);
        let mult = m
            .checked_mul(inflation)
            .ok_or(Error::Overflow("multiplier"))?;
        Ok((LemmaParams::new(p, e, mult)?, inflation))
    }

    fn graded_checks(
        &self,
        module: &FpGModule,
        levels: &[i64],
        offset: usize,
    ) -> Result<Vec<GradedCheck>> {
        graded_checks(&self.group, module, levels, offset)
    }
}

#[cfg(test)]
mod tests;
