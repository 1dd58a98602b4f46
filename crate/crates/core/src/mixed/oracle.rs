//! Brute-force check of `Ū¹` on small fields: enumerate `U¹/U^{cp+1}`, form
//! the subgroup of `p`-th powers by exponentiation and compare the quotient
//! with an assembled module.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::Serialize;

use super::{MixedField, PadicElem};
use crate::error::{Error, Result};
use crate::gmod::FpGModule;

/// Largest `|U¹/U^{cp+1}|` enumerated.
pub const ORACLE_LIMIT: u64 = 100_000;

#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub units: u64,
    pub pth_powers: u64,
    pub quotient_order: u64,
    pub module_order: u64,
    /// Orbit size → number of `G`-orbits on the quotient.
    pub orbits: BTreeMap<usize, usize>,
    pub module_orbits: BTreeMap<usize, usize>,
    pub target_orbits: BTreeMap<usize, usize>,
}

impl OracleReport {
    pub fn pass(&self) -> bool {
        self.quotient_order == self.module_order
            && self.orbits == self.module_orbits
            && self.orbits == self.target_orbits
    }
}

/// `x mod 𝔭^m`, as the coefficients `a_i mod p^{⌈(m−i)/e_L⌉}`.
fn key(field: &MixedField, x: &PadicElem, m: usize) -> Vec<u64> {
    let (el, g, p) = (field.e_l(), field.tower().g(), field.p());
    let mut out = Vec::with_capacity(el * g);
    for i in 0..el {
        let k = (m.saturating_sub(i)).div_ceil(el) as u32;
        let modulus = p.pow(k);
        out.extend(x.coords()[i * g..(i + 1) * g].iter().map(|c| c % modulus));
    }
    out
}

/// Orbit-size multiset of `G = ⟨σ, τ⟩` acting on `F_p^dim` through `m`.
pub fn orbit_sizes(m: &FpGModule) -> Result<BTreeMap<usize, usize>> {
    let p = m.p();
    let total = p
        .checked_pow(m.dim() as u32)
        .filter(|&t| t <= ORACLE_LIMIT)
        .ok_or_else(|| Error::param("module too large to enumerate"))?;
    let decode = |mut i: u64| -> Vec<u64> {
        (0..m.dim())
            .map(|_| {
                let d = i % p;
                i /= p;
                d
            })
            .collect()
    };
    let encode = |v: &[u64]| v.iter().rev().fold(0u64, |a, &d| a * p + d);
    let gens = [m.sigma(), m.tau()];
    let step = |i: u64| -> Vec<u64> {
        gens.iter()
            .map(|g| encode(&g.mul_vec(&decode(i))))
            .collect()
    };
    Ok(orbits(total as usize, |i| {
        step(i as u64).into_iter().map(|j| j as usize).collect()
    }))
}

fn orbits(n: usize, step: impl Fn(usize) -> Vec<usize>) -> BTreeMap<usize, usize> {
    let mut seen = vec![false; n];
    let mut sizes = BTreeMap::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut stack = vec![start];
        let mut size = 0;
        while let Some(x) = stack.pop() {
            size += 1;
            for y in step(x) {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        *sizes.entry(size).or_insert(0) += 1;
    }
    sizes
}

/// Enumerates `U¹/U^{cp+1}` as `1 + Σ_{v=1}^{cp} c_v π^v` and compares the
/// quotient by `p`-th powers with `module` and `target`.
pub fn enumeration_oracle(
    field: &MixedField,
    module: &FpGModule,
    target: &FpGModule,
) -> Result<OracleReport> {
    let p = field.p();
    let top = field.top_level();
    let m = top + 1;
    let tw = field.tower();
    let q = tw.order().ok_or(Error::Overflow("residue field"))? as u64;
    let units = q
        .checked_pow(top as u32)
        .filter(|&u| u <= ORACLE_LIMIT)
        .ok_or_else(|| Error::param("unit quotient too large to enumerate"))?;
    let pis: Vec<PadicElem> = (1..=top).map(|v| field.pi_pow(v)).collect();
    let digits: Vec<PadicElem> = (0..q)
        .map(|i| field.lift_const(&tw.from_index(i as u128)))
        .collect();
    let mut elems = Vec::with_capacity(units as usize);
    for idx in 0..units {
        let mut r = idx;
        let mut u = field.one();
        for pv in &pis {
            let d = (r % q) as usize;
            r /= q;
            if d != 0 {
                u = field.add(&u, &field.mul(&digits[d], pv));
            }
        }
        elems.push(u);
    }
    let index: HashMap<Vec<u64>, usize> = elems
        .iter()
        .enumerate()
        .map(|(i, u)| (key(field, u, m), i))
        .collect();
    if index.len() != elems.len() {
        return Err(Error::param("representatives of U1/U^(cp+1) collide"));
    }
    let powers: Vec<PadicElem> = {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for u in &elems {
            let x = field.pow(u, p);
            if seen.insert(key(field, &x, m)) {
                out.push(x);
            }
        }
        out
    };
    // coset ids
    let mut coset = vec![usize::MAX; elems.len()];
    let mut reps = Vec::new();
    for i in 0..elems.len() {
        if coset[i] != usize::MAX {
            continue;
        }
        let id = reps.len();
        reps.push(i);
        for w in &powers {
            let j = index[&key(field, &field.mul(&elems[i], w), m)];
            coset[j] = id;
        }
    }
    let group = field.group();
    let gens = [group.sigma(), group.tau()];
    let images: Vec<Vec<usize>> = reps
        .iter()
        .map(|&i| {
            gens.iter()
                .map(|h| {
                    let y = field.galois_act(h, &elems[i])?;
                    Ok(coset[index[&key(field, &y, m)]])
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let orbit_counts = orbits(reps.len(), |c| images[c].clone());
    Ok(OracleReport {
        units,
        pth_powers: powers.len() as u64,
        quotient_order: reps.len() as u64,
        module_order: p.pow(module.dim() as u32),
        orbits: orbit_counts,
        module_orbits: orbit_sizes(module)?,
        target_orbits: orbit_sizes(target)?,
    })
}
