//! `Ū¹` as an `F_p[G]`-module and its comparison with `ₚL^× ⊕ k[G]^{e_K}`.

use serde::Serialize;

use super::{enumeration_oracle, MixedField, OracleReport, ORACLE_LIMIT};
use crate::arith::{multiplicative_order, LemmaParams};
use crate::error::{Error, Result};
use crate::gmod::{direct_sum, is_isomorphic, regular_module_k, FpGModule, IsoVerdict};
use crate::group::GroupElem;
use crate::linalg::FpMatrix;
use crate::structure::{graded_checks, StructureReport};

/// The 1-dimensional module `ₚL^×`: `σ` and `τ` act by the exponents
/// `k` with `g(ζ) = ζ^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MuModel {
    pub sigma: u64,
    pub tau: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct MixedStructureReport {
    #[serde(flatten)]
    pub structure: StructureReport,
    pub degree: usize,
    pub mu_order: u64,
    pub mu_model: Option<MuModel>,
    /// Action on the top coordinate of the assembled module.
    pub top_action: Option<MuModel>,
    pub mu_consistent: bool,
    pub oracle: Option<OracleReport>,
}

impl MixedStructureReport {
    pub fn pass(&self) -> bool {
        self.structure.pass() && self.mu_consistent && self.oracle.as_ref().is_none_or(|o| o.pass())
    }
}

fn exponent_of(
    field: &MixedField,
    zeta: &super::PadicElem,
    image: &super::PadicElem,
) -> Result<u64> {
    let mut cur = field.one();
    for k in 0..field.p() {
        if &cur == image {
            return Ok(k);
        }
        cur = field.mul(&cur, zeta);
    }
    Err(Error::param("Galois image of ζ is not a power of ζ"))
}

/// Assembles `Ū¹` on the basis `{1 + u^j π^r : r ∈ [1, cp), p ∤ r}` (plus the
/// generator of `Ū^{cp}` when `μ_p ⊂ L`) and certifies its structure. The
/// enumeration oracle runs when `|U¹/U^{cp+1}| ≤ ORACLE_LIMIT`.
pub fn mixed_unit_module(field: &MixedField) -> Result<MixedStructureReport> {
    let c = field
        .c()
        .ok_or_else(|| Error::param("p − 1 does not divide e_L"))?;
    let p = field.p();
    let cp = c * p as usize;
    let g = field.tower().g();
    let group = field.group();
    let levels: Vec<usize> = (1..cp).filter(|r| r % p as usize != 0).collect();
    let mu = field.detect_mu_p().clone();
    let top = field.top_generator();
    if top.is_some() != (mu.order == p) {
        return Err(Error::param(
            "level cp cokernel disagrees with the p-torsion",
        ));
    }
    let mut reps = Vec::new();
    for &r in &levels {
        for j in 0..g {
            reps.push(field.basis_product(&field.tower().basis_elem(j), r));
        }
    }
    reps.extend(top.clone());
    let dim = reps.len();
    let matrix = |h: &GroupElem| -> Result<FpMatrix> {
        let cols = reps
            .iter()
            .map(|x| {
                field
                    .mixed_unit_reduce(&field.galois_act(h, x)?)?
                    .coordinates(&levels, g)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FpMatrix::from_columns(p, dim, &cols))
    };
    let module = FpGModule::new(
        p,
        group.sig(),
        matrix(&group.sigma())?,
        matrix(&group.tau())?,
    )?;
    let ilevels: Vec<i64> = levels.iter().map(|&r| r as i64).collect();
    let graded = graded_checks(group, &module, &ilevels, 0)?;

    let (mu_model, top_action) = match &mu.generator {
        Some(zeta) => {
            let ks = exponent_of(field, zeta, &field.galois_act(&group.sigma(), zeta)?)?;
            let kt = exponent_of(field, zeta, &field.galois_act(&group.tau(), zeta)?)?;
            let last = dim - 1;
            (
                Some(MuModel { sigma: ks, tau: kt }),
                Some(MuModel {
                    sigma: module.sigma().get(last, last),
                    tau: module.tau().get(last, last),
                }),
            )
        }
        None => (None, None),
    };
    let mut parts = Vec::new();
    if let Some(m) = mu_model {
        parts.push(FpGModule::one_dimensional(p, group.sig(), m.sigma, m.tau)?);
    }
    let free = regular_module_k(group)?;
    parts.extend(std::iter::repeat_n(free, field.e_k()));
    let target = direct_sum(p, group.sig(), &parts)?;
    let total: IsoVerdict = is_isomorphic(&module, &target, 0)?;
    let mu_consistent = mu_model == top_action;

    let e = field.e();
    let params = LemmaParams {
        p,
        e,
        g: multiplicative_order(p, e)?,
        n: field.e_l() as u64,
        c: c as u64,
        d: field.e_k() as u64,
    };
    params.validate()?;
    let degree = field.degree();
    let expected_dim = degree + usize::from(mu.order == p);
    let units = (field.tower().order().unwrap_or(u128::MAX)).checked_pow(cp as u32);
    let oracle = match units {
        Some(n) if n <= ORACLE_LIMIT as u128 => Some(enumeration_oracle(field, &module, &target)?),
        _ => None,
    };
    Ok(MixedStructureReport {
        structure: StructureReport {
            kind: "kummer",
            params,
            inflation: 1,
            levels: ilevels,
            dim,
            expected_dim,
            precision: field.pi_precision() as i64,
            graded,
            total,
            module,
        },
        degree,
        mu_order: mu.order,
        mu_model,
        top_action,
        mu_consistent,
        oracle,
    })
}
