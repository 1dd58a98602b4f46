//! Filtered sums of the modules `l(b(i))` and their comparison with `k[G]^d`.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{
    char_module, character_multiplicities, direct_sum, is_isomorphic, regular_module_k, IsoVerdict,
};
use crate::arith::LemmaParams;
use crate::error::{Error, Result};
use crate::ffield::NormalScope;
use crate::group::TameGroup;
use crate::linalg::FpMatrix;

#[derive(Clone, Debug, Serialize)]
pub struct IwasawaReport {
    pub params: LemmaParams,
    /// Summand labels `b(i) mod e` in the (shuffled) order used.
    pub summands: Vec<u64>,
    pub dim: usize,
    pub expected_multiplicity: usize,
    pub multiplicities: BTreeMap<u64, usize>,
    pub multiplicities_pass: bool,
    pub iso: IsoVerdict,
}

impl IwasawaReport {
    pub fn pass(&self) -> bool {
        self.multiplicities_pass && self.iso.isomorphic
    }
}

/// Builds `⊕_{i∈[1,n]} l(b(i))` and compares it with `k[G]^d`, once through
/// character multiplicities and once through an isomorphism certificate.
///
/// `g` in the multiplicity count is `[l:F_p]`, which the parameters are
/// re-derived with.
pub fn verify_iwasawa_lemma(
    group: &TameGroup,
    params: &LemmaParams,
    shuffle_seed: u64,
) -> Result<IwasawaReport> {
    params.validate()?;
    let tower = group.require_tower()?;
    if params.p != tower.p() || params.e != group.e() {
        return Err(Error::param(format!(
            "lemma parameters (p={}, e={}) do not match the group (p={}, e={})",
            params.p,
            params.e,
            tower.p(),
            group.e()
        )));
    }
    let params = params.with_g(tower.g() as u64)?;
    let e = group.e();
    let mut labels: Vec<u64> = params.b_sequence().iter().map(|b| b % e).collect();
    labels.shuffle(&mut ChaCha8Rng::seed_from_u64(shuffle_seed));
    let parts = labels
        .iter()
        .map(|&r| char_module(group, r as i64))
        .collect::<Result<Vec<_>>>()?;
    let m = direct_sum(tower.p(), group.sig(), &parts)?;

    let expected = (params.d * params.g) as usize;
    let multiplicities = character_multiplicities(&m, group)?;
    let multiplicities_pass =
        multiplicities.len() == e as usize && multiplicities.values().all(|&v| v == expected);

    let free = regular_module_k(group)?;
    let target = direct_sum(tower.p(), group.sig(), &vec![free; params.d as usize])?;
    let iso = is_isomorphic(&m, &target, shuffle_seed)?;
    Ok(IwasawaReport {
        params,
        summands: labels,
        dim: m.dim(),
        expected_multiplicity: expected,
        multiplicities,
        multiplicities_pass,
        iso,
    })
}

/// The map `k[G] → ⊕_{i∈Z/e} l(i)` sending `c ⊗ h` to `h·(cα, …, cα)`, with
/// `α` a normal basis element of `l|k` and `c` running over the `F_p`-basis
/// of `k`. Rows follow the blocks of the direct sum; columns follow the
/// basis of [`regular_module_k`].
pub fn free_generator_certificate(group: &TameGroup) -> Result<FpMatrix> {
    let tower = group.require_tower()?;
    let eta = group.eta()?;
    let alpha = tower.normal_basis_element(NormalScope::OverK);
    let e = group.e();
    let g = tower.g();
    let mut cols = Vec::new();
    for c in tower.k_basis() {
        let v = tower.mul(c, &alpha);
        for h in group.elements() {
            let moved = tower.frobenius_power(&v, (tower.a() as u64 * h.s) as i64);
            let mut col = Vec::with_capacity(e as usize * g);
            for i in 0..e {
                let twist = tower.pow(eta, (i * h.t % e) as u128);
                col.extend_from_slice(tower.mul(&twist, &moved).coords());
            }
            cols.push(col);
        }
    }
    Ok(FpMatrix::from_columns(tower.p(), e as usize * g, &cols))
}
