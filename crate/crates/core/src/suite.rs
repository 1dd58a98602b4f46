//! The acceptance grid: one runner per criterion, each returning every case
//! it examined and the failures it found.

use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::{fiber_census, pow_mod, LemmaParams};
use crate::eqchar::EqCharField;
use crate::error::Result;
use crate::ffield::FieldTower;
use crate::gmod::{
    char_module, direct_sum, free_generator_certificate, intertwines, is_isomorphic, is_projective,
    orbit_criterion, regular_module_k, verify_iwasawa_lemma,
};
use crate::group::TameGroup;
use crate::mixed::{mixed_unit_module, Eisenstein, MixedField};
use crate::report::Check;

/// Failures kept verbatim in a witness.
const WITNESS_FAILURES: usize = 16;

#[derive(Clone, Debug, Serialize)]
pub struct CriterionOutcome {
    pub id: u32,
    pub name: &'static str,
    pub pass: bool,
    pub cases: usize,
    pub failures: Vec<Value>,
    pub summary: Value,
    #[serde(skip)]
    pub elapsed: Duration,
    #[serde(skip)]
    pub budget: Duration,
}

impl CriterionOutcome {
    fn new(
        id: u32,
        name: &'static str,
        budget_s: u64,
        cases: usize,
        failures: Vec<Value>,
        summary: Value,
    ) -> Self {
        CriterionOutcome {
            id,
            name,
            pass: failures.is_empty() && cases > 0,
            cases,
            failures,
            summary,
            elapsed: Duration::ZERO,
            budget: Duration::from_secs(budget_s),
        }
    }

    pub fn within_budget(&self) -> bool {
        self.elapsed <= self.budget
    }

    pub fn to_check(&self, timing: bool) -> Check {
        let failures: Vec<&Value> = self.failures.iter().take(WITNESS_FAILURES).collect();
        let witness = json!({
            "cases": self.cases,
            "failures": self.failures.len(),
            "first_failures": failures,
            "summary": self.summary,
        });
        Check::new(
            format!("criterion-{}-{}", self.id, self.name),
            self.pass,
            witness,
        )
        .with_timing(timing.then_some(self.elapsed.as_millis() as u64))
    }
}

fn timed(f: impl FnOnce() -> Result<CriterionOutcome>) -> Result<CriterionOutcome> {
    let start = Instant::now();
    let mut out = f()?;
    out.elapsed = start.elapsed();
    Ok(out)
}

/// A residue-tower configuration `(p, a, e, f)` of the module grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Cell {
    pub p: u64,
    pub a: usize,
    pub e: u64,
    pub f: usize,
}

impl Cell {
    pub fn group(&self) -> Result<TameGroup> {
        let tower = Arc::new(FieldTower::new(self.p, self.a, self.f, 0)?);
        TameGroup::over_tower(tower, self.e)
    }
}

/// `p ∈ {2,3}`, `a ∈ {1,2}`, `p ∤ e`, `q^f ≡ 1 (mod e)`, `e·f·a ≤ 36`.
pub fn module_grid() -> Vec<Cell> {
    let mut out = Vec::new();
    for p in [2u64, 3] {
        for a in [1usize, 2] {
            let q = p.pow(a as u32);
            for e in 1..=36u64 {
                if e % p == 0 {
                    continue;
                }
                for f in 1..=36usize {
                    if e as usize * f * a <= 36 && pow_mod(q, f as u64, e) == 1 % e {
                        out.push(Cell { p, a, e, f });
                    }
                }
            }
        }
    }
    out
}

/// Criterion 1: every fibre of the census has `d·g` elements.
pub fn fiber_census_criterion() -> Result<CriterionOutcome> {
    timed(|| {
        let mut cases = 0;
        let mut failures = Vec::new();
        for p in [2u64, 3, 5] {
            for e in (1..=12u64).filter(|e| e % p != 0) {
                for m in [1u64, 2] {
                    let params = LemmaParams::new(p, e, m)?;
                    let census = fiber_census(&params)?;
                    cases += 1;
                    let dev = census.deviations(params.d * params.g);
                    if !dev.is_empty() || census.counts.len() != e as usize {
                        failures.push(json!({"p": p, "e": e, "m": m, "deviations": dev}));
                    }
                }
            }
        }
        Ok(CriterionOutcome::new(
            1,
            "fiber-census",
            1,
            cases,
            failures,
            json!({"grid": "p in {2,3,5}, e <= 12, m in {1,2}"}),
        ))
    })
}

/// Criterion 2: the orbit criterion agrees with the isomorphism oracle on
/// every pair `(l(r), l(s))` of the grid.
pub fn iso_criterion(seed: u64) -> Result<CriterionOutcome> {
    timed(|| {
        let grid = module_grid();
        let per_cell: Vec<Result<(usize, Vec<Value>, usize)>> = grid
            .par_iter()
            .map(|cell| {
                let group = cell.group()?;
                let mods = (0..cell.e as i64).map(|r| char_module(&group, r)).collect::<Result<Vec<_>>>()?;
                let mut failures = Vec::new();
                let mut certified = 0;
                for r in 0..cell.e as i64 {
                    for s in 0..cell.e as i64 {
                        let expected = orbit_criterion(cell.e, cell.p, r, s)?;
                        let v = is_isomorphic(&mods[r as usize], &mods[s as usize], seed)?;
                        let cert_ok = v
                            .certificate
                            .as_ref()
                            .is_none_or(|h| h.is_invertible() && intertwines(h, &mods[r as usize], &mods[s as usize]));
                        if v.certificate.is_some() {
                            certified += 1;
                        }
                        if v.isomorphic != expected || !v.certain || !cert_ok {
                            failures.push(json!({"cell": cell, "r": r, "s": s, "orbit": expected,
                                "oracle": v.isomorphic, "certain": v.certain, "hom_dim": v.hom_dim}));
                        }
                    }
                }
                Ok(((cell.e * cell.e) as usize, failures, certified))
            })
            .collect();
        let mut cases = 0;
        let mut failures = Vec::new();
        let mut certified = 0;
        for r in per_cell {
            let (c, f, k) = r?;
            cases += c;
            certified += k;
            failures.extend(f);
        }
        Ok(CriterionOutcome::new(
            2,
            "isomorphism-criterion",
            60,
            cases,
            failures,
            json!({"cells": grid.len(), "certificates": certified}),
        ))
    })
}

/// Criterion 3: `⊕_{i∈Z/e} l(i) ≅ k[G]` and `⊕_{i∈[1,n]} l(b(i)) ≅ k[G]^d`.
pub fn free_decomposition_criterion(seed: u64) -> Result<CriterionOutcome> {
    timed(|| {
        let grid = module_grid();
        let per_cell: Vec<Result<Vec<Value>>> = grid
            .par_iter()
            .map(|cell| {
                let group = cell.group()?;
                let mut failures = Vec::new();
                let parts = (0..cell.e as i64).map(|i| char_module(&group, i)).collect::<Result<Vec<_>>>()?;
                let sum = direct_sum(cell.p, group.sig(), &parts)?;
                let free = regular_module_k(&group)?;
                let h = free_generator_certificate(&group)?;
                let explicit = intertwines(&h, &free, &sum) && h.is_invertible();
                let oracle = is_isomorphic(&sum, &free, seed)?.isomorphic;
                if !explicit || !oracle {
                    failures.push(json!({"cell": cell, "check": "free", "explicit": explicit, "oracle": oracle}));
                }
                let params = LemmaParams::new(cell.p, cell.e, 1)?;
                let rep = verify_iwasawa_lemma(&group, &params, seed)?;
                if !rep.pass() {
                    failures.push(json!({"cell": cell, "check": "filtered-sum",
                        "multiplicities": rep.multiplicities_pass, "iso": rep.iso.isomorphic}));
                }
                Ok(failures)
            })
            .collect();
        let mut failures = Vec::new();
        for f in per_cell {
            failures.extend(f?);
        }
        Ok(CriterionOutcome::new(
            3,
            "free-decomposition",
            120,
            2 * grid.len(),
            failures,
            json!({"cells": grid.len()}),
        ))
    })
}

/// Criterion 4: every `l(r)` is projective.
pub fn projectivity_criterion() -> Result<CriterionOutcome> {
    timed(|| {
        let grid = module_grid();
        let mut cases = 0;
        let mut failures = Vec::new();
        let mut p_divides_f = 0;
        for cell in &grid {
            let group = cell.group()?;
            if (cell.f as u64).is_multiple_of(cell.p) {
                p_divides_f += 1;
            }
            for r in 0..cell.e as i64 {
                cases += 1;
                if !is_projective(&char_module(&group, r)?)? {
                    failures.push(json!({"cell": cell, "r": r}));
                }
            }
        }
        Ok(CriterionOutcome::new(
            4,
            "projectivity",
            60,
            cases,
            failures,
            json!({"cells": grid.len(), "cells_with_p_dividing_f": p_divides_f}),
        ))
    })
}

/// `(p, a, e, f)` for the characteristic-`p` structure checks.
pub const EQCHAR_CASES: [(u64, usize, u64, usize); 4] =
    [(2, 1, 3, 2), (3, 1, 2, 1), (3, 1, 2, 2), (2, 2, 3, 1)];

/// Criterion 5: truncated `L̄⁺ ≅ F_p ⊕ k[G]^{md}` and `Ū¹ ≅ k[G]^{md}`.
pub fn eqchar_criterion() -> Result<CriterionOutcome> {
    timed(|| {
        let jobs: Vec<(u64, usize, u64, usize, u64)> = EQCHAR_CASES
            .iter()
            .flat_map(|&(p, a, e, f)| [1, 2].map(|m| (p, a, e, f, m)))
            .collect();
        let results: Vec<Result<Vec<Value>>> = jobs
            .par_iter()
            .map(|&(p, a, e, f, m)| {
                let field = EqCharField::new(p, a, f, e, -1, 1)?;
                let mut failures = Vec::new();
                for rep in [field.as_module(m)?, field.unit_module(m)?] {
                    if !rep.pass() {
                        failures.push(json!({"p": p, "a": a, "e": e, "f": f, "m": m, "kind": rep.kind,
                            "dim": rep.dim, "expected_dim": rep.expected_dim, "iso": rep.total.isomorphic}));
                    }
                }
                Ok(failures)
            })
            .collect();
        let mut failures = Vec::new();
        for r in results {
            failures.extend(r?);
        }
        Ok(CriterionOutcome::new(
            5,
            "eqchar-structure",
            60,
            2 * jobs.len(),
            failures,
            json!({"configs": EQCHAR_CASES.len()}),
        ))
    })
}

/// A mixed-characteristic test field.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct MixedCase {
    pub label: &'static str,
    pub p: u64,
    pub f_k: usize,
    pub eisenstein: &'static str,
    pub e: u64,
    pub f: usize,
}

impl MixedCase {
    pub fn field(&self) -> Result<MixedField> {
        MixedField::new(
            self.p,
            self.f_k,
            Eisenstein::parse(self.eisenstein)?,
            self.e,
            self.f,
            None,
        )
    }
}

pub const MIXED_CASES: [MixedCase; 7] = [
    MixedCase {
        label: "Q2",
        p: 2,
        f_k: 1,
        eisenstein: "-2",
        e: 1,
        f: 1,
    },
    MixedCase {
        label: "Q2-unramified-2",
        p: 2,
        f_k: 1,
        eisenstein: "-2",
        e: 1,
        f: 2,
    },
    MixedCase {
        label: "Q3(zeta3)",
        p: 3,
        f_k: 1,
        eisenstein: "+3",
        e: 2,
        f: 1,
    },
    MixedCase {
        label: "Q3(zeta3)-unramified-2",
        p: 3,
        f_k: 1,
        eisenstein: "+3",
        e: 2,
        f: 2,
    },
    MixedCase {
        label: "Q3(sqrt3)",
        p: 3,
        f_k: 1,
        eisenstein: "-3",
        e: 2,
        f: 1,
    },
    MixedCase {
        label: "Q3(sqrt-3)-as-base",
        p: 3,
        f_k: 1,
        eisenstein: "3,0",
        e: 1,
        f: 1,
    },
    MixedCase {
        label: "Q2(zeta3)-cube-root-2",
        p: 2,
        f_k: 2,
        eisenstein: "-2",
        e: 3,
        f: 1,
    },
];

/// Criterion 6: `Ū¹ ≅ ₚL^× ⊕ k[G]^{e_K}` (or `k[G]^{e_K}`) with the
/// enumeration oracle on every case.
pub fn mixed_criterion() -> Result<CriterionOutcome> {
    timed(|| {
        let results: Vec<Result<(Value, Option<Value>)>> = MIXED_CASES
            .par_iter()
            .map(|case| {
                let field = case.field()?;
                let rep = mixed_unit_module(&field)?;
                let summary = json!({"case": case.label, "dim": rep.structure.dim, "degree": rep.degree,
                    "mu_order": rep.mu_order, "oracle": rep.oracle.as_ref().map(|o| o.quotient_order)});
                let ok = rep.pass() && rep.oracle.is_some();
                Ok((summary.clone(), (!ok).then_some(summary)))
            })
            .collect();
        let mut failures = Vec::new();
        let mut summaries = Vec::new();
        for r in results {
            let (s, f) = r?;
            summaries.push(s);
            failures.extend(f);
        }
        Ok(CriterionOutcome::new(
            6,
            "mixed-structure",
            120,
            MIXED_CASES.len(),
            failures,
            json!(summaries),
        ))
    })
}

/// Criterion 7: randomized well-definedness and equivariance of all
/// reductions, `trials` per configuration.
pub fn property_criterion(seed: u64, trials: usize) -> Result<CriterionOutcome> {
    timed(|| {
        let eq: Vec<Result<(usize, Vec<Value>)>> = EQCHAR_CASES
            .par_iter()
            .enumerate()
            .map(|(idx, &(p, a, e, f))| {
                eqchar_properties(p, a, e, f, seed ^ (idx as u64) << 32, trials)
            })
            .collect();
        let mx: Vec<Result<(usize, Vec<Value>)>> = MIXED_CASES
            .par_iter()
            .enumerate()
            .map(|(idx, case)| mixed_properties(case, seed ^ (0x100 + idx as u64) << 32, trials))
            .collect();
        let mut cases = 0;
        let mut failures = Vec::new();
        for r in eq.into_iter().chain(mx) {
            let (c, f) = r?;
            cases += c;
            failures.extend(f);
        }
        Ok(CriterionOutcome::new(
            7,
            "reduction-properties",
            120,
            cases,
            failures,
            json!({"trials_per_property": trials, "configs": EQCHAR_CASES.len() + MIXED_CASES.len()}),
        ))
    })
}

fn eqchar_properties(
    p: u64,
    a: usize,
    e: u64,
    f: usize,
    seed: u64,
    trials: usize,
) -> Result<(usize, Vec<Value>)> {
    let k = EqCharField::new(p, a, f, e, -1, 1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let add = k.as_module(1)?;
    let mult = k.unit_module(1)?;
    let g = k.tower().g();
    let low = add.levels[0];
    let cutoff = mult.precision;
    let elems = k.group().elements();
    let mut failures = Vec::new();
    let tag = json!({"p": p, "a": a, "e": e, "f": f});
    for t in 0..trials {
        let h = elems[t % elems.len()];
        let x = k.random(&mut rng, low, 1);
        let y = k.random(&mut rng, low / p as i64, 1);
        let rx = k.as_reduce(&x)?;
        if k.as_reduce(&k.add(&x, &k.wp(&y)))? != rx {
            failures.push(json!({"config": tag, "trial": t, "property": "as-reduce-wp"}));
        }
        let before = rx.coordinates(&add.levels, g)?;
        let after = k
            .as_reduce(&k.galois_act(&h, &x)?)?
            .coordinates(&add.levels, g)?;
        if add.module.action(&h).mul_vec(&before) != after {
            failures.push(json!({"config": tag, "trial": t, "property": "as-reduce-equivariant"}));
        }
        let u = k.random_unit(&mut rng, cutoff);
        let v = k.random_unit(&mut rng, cutoff);
        let ru = k.unit_reduce(&u, cutoff)?;
        let w = k.truncate(&k.mul(&u, &k.pow_p(&v)), cutoff);
        if k.unit_reduce(&w, cutoff)? != ru {
            failures.push(json!({"config": tag, "trial": t, "property": "unit-reduce-pth-power"}));
        }
        let before = ru.coordinates(&mult.levels, g)?;
        let after = k
            .unit_reduce(&k.galois_act(&h, &u)?, cutoff)?
            .coordinates(&mult.levels, g)?;
        if mult.module.action(&h).mul_vec(&before) != after {
            failures
                .push(json!({"config": tag, "trial": t, "property": "unit-reduce-equivariant"}));
        }
    }
    Ok((4 * trials, failures))
}

fn mixed_properties(case: &MixedCase, seed: u64, trials: usize) -> Result<(usize, Vec<Value>)> {
    let k = case.field()?;
    let rep = mixed_unit_module(&k)?;
    let levels: Vec<usize> = rep.structure.levels.iter().map(|&r| r as usize).collect();
    let g = k.tower().g();
    let elems = k.group().elements();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for t in 0..trials {
        let h = elems[t % elems.len()];
        let u = k.random_principal_unit(&mut rng);
        let v = k.random_unit(&mut rng);
        let ru = k.mixed_unit_reduce(&u)?;
        let w = k.mul(&u, &k.pow(&v, k.p()));
        let w1 = k.mul(&w, &k.inv(&k.teichmuller_const(&k.residue(&w)))?);
        if k.mixed_unit_reduce(&w1)? != ru {
            failures.push(
                json!({"config": case.label, "trial": t, "property": "mixed-reduce-pth-power"}),
            );
        }
        let before = ru.coordinates(&levels, g)?;
        let after = k
            .mixed_unit_reduce(&k.galois_act(&h, &u)?)?
            .coordinates(&levels, g)?;
        if rep.structure.module.action(&h).mul_vec(&before) != after {
            failures.push(
                json!({"config": case.label, "trial": t, "property": "mixed-reduce-equivariant"}),
            );
        }
    }
    Ok((2 * trials, failures))
}

/// Default randomized trials per property and configuration.
pub const DEFAULT_TRIALS: usize = 1000;

/// Runs the selected criteria (all when `only` is empty) in order.
pub fn run(seed: u64, only: &[u32]) -> Result<Vec<CriterionOutcome>> {
    let want = |id: u32| only.is_empty() || only.contains(&id);
    let mut out = Vec::new();
    if want(1) {
        out.push(fiber_census_criterion()?);
    }
    if want(2) {
        out.push(iso_criterion(seed)?);
    }
    if want(3) {
        out.push(free_decomposition_criterion(seed)?);
    }
    if want(4) {
        out.push(projectivity_criterion()?);
    }
    if want(5) {
        out.push(eqchar_criterion()?);
    }
    if want(6) {
        out.push(mixed_criterion()?);
    }
    if want(7) {
        out.push(property_criterion(seed, DEFAULT_TRIALS)?);
    }
    Ok(out)
}
