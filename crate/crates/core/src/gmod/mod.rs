//! `F_p[G]`-modules as pairs of matrices `(σ, τ)` satisfying the
//! presentation of `G`, together with the modules `l(r)`, regular modules,
//! direct sums, character multiplicities and projectivity.

mod hom;
mod iwasawa;

use std::collections::BTreeMap;

use serde::Serialize;

pub use hom::{hom_basis, intertwines, is_isomorphic, IsoMethod, IsoVerdict};
pub use iwasawa::{free_generator_certificate, verify_iwasawa_lemma, IwasawaReport};

use crate::arith::{frobenius_orbits, same_frobenius_orbit};
use crate::error::{Error, Result};
use crate::ffield::FFElem;
use crate::group::{GroupElem, GroupSig, TameGroup};
use crate::linalg::FpMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FpGModule {
    dim: usize,
    p: u64,
    group: GroupSig,
    sigma: FpMatrix,
    tau: FpMatrix,
}

impl FpGModule {
    /// Validates `σ^f = 1`, `τ^e = 1` and `στσ⁻¹ = τ^q`.
    pub fn new(p: u64, group: GroupSig, sigma: FpMatrix, tau: FpMatrix) -> Result<Self> {
        let m = FpGModule {
            dim: sigma.rows(),
            p,
            group,
            sigma,
            tau,
        };
        m.validate()?;
        Ok(m)
    }

    pub(crate) fn new_unchecked(p: u64, group: GroupSig, sigma: FpMatrix, tau: FpMatrix) -> Self {
        FpGModule {
            dim: sigma.rows(),
            p,
            group,
            sigma,
            tau,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.dim;
        for (name, m) in [("sigma", &self.sigma), ("tau", &self.tau)] {
            if m.rows() != n || m.cols() != n || m.p() != self.p {
                return Err(Error::DimensionMismatch(format!(
                    "{name} is not {n}x{n} over F_{}",
                    self.p
                )));
            }
        }
        if !self.sigma.pow(self.group.f).is_identity() {
            return Err(Error::param("sigma^f is not the identity"));
        }
        if !self.tau.pow(self.group.e).is_identity() {
            return Err(Error::param("tau^e is not the identity"));
        }
        if self.sigma.mul(&self.tau) != self.tau.pow(self.group.q).mul(&self.sigma) {
            return Err(Error::param("sigma tau sigma^-1 differs from tau^q"));
        }
        Ok(())
    }

    pub fn zero(p: u64, group: GroupSig) -> Self {
        Self::new_unchecked(p, group, FpMatrix::zeros(p, 0, 0), FpMatrix::zeros(p, 0, 0))
    }

    /// The one-dimensional module on which `σ` and `τ` act by scalars.
    pub fn one_dimensional(p: u64, group: GroupSig, sigma: u64, tau: u64) -> Result<Self> {
        let s = FpMatrix::from_rows(p, &[vec![sigma]]);
        let t = FpMatrix::from_rows(p, &[vec![tau]]);
        Self::new(p, group, s, t)
    }

    pub fn trivial(p: u64, group: GroupSig, dim: usize) -> Self {
        Self::new_unchecked(
            p,
            group,
            FpMatrix::identity(p, dim),
            FpMatrix::identity(p, dim),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn group(&self) -> GroupSig {
        self.group
    }
    pub fn sigma(&self) -> &FpMatrix {
        &self.sigma
    }
    pub fn tau(&self) -> &FpMatrix {
        &self.tau
    }

    /// Matrix of `τ^t σ^s`.
    pub fn action(&self, g: &GroupElem) -> FpMatrix {
        self.tau.pow(g.t).mul(&self.sigma.pow(g.s))
    }

    pub fn oplus(&self, other: &FpGModule) -> Result<FpGModule> {
        direct_sum(self.p, self.group, &[self.clone(), other.clone()])
    }

    /// The subquotient spanned by basis vectors `[start, end)`, which must be
    /// the quotient of the invariant span of `[start, dim)` by that of `[end, dim)`.
    pub fn subquotient(&self, start: usize, end: usize) -> Result<FpGModule> {
        if start > end || end > self.dim {
            return Err(Error::DimensionMismatch(format!(
                "bad range {start}..{end}"
            )));
        }
        for m in [&self.sigma, &self.tau] {
            for boundary in [start, end] {
                for c in boundary..self.dim {
                    if (0..boundary).any(|r| m.get(r, c) != 0) {
                        return Err(Error::param(format!(
                            "span of basis vectors {boundary}.. is not invariant"
                        )));
                    }
                }
            }
        }
        let len = end - start;
        Ok(Self::new_unchecked(
            self.p,
            self.group,
            self.sigma.diagonal_block(start, len),
            self.tau.diagonal_block(start, len),
        ))
    }
}

/// `l(r)`: the `F_p`-space `l` with `σ·x = x^q` and `τ·x = η^r x`.
pub fn char_module(group: &TameGroup, r: i64) -> Result<FpGModule> {
    let tower = group.require_tower()?;
    let sigma = tower.frobenius_matrix().pow(tower.a() as u64);
    let tau = tower.mul_matrix(&group.theta(r)?);
    Ok(FpGModule::new_unchecked(tower.p(), group.sig(), sigma, tau))
}

/// `F_p[G]^{coeff_degree}` with the left regular action; `coeff_degree = a`
/// gives `k[G]` viewed as an `F_p[G]`-module. Basis index `m·|G| + t + e·s`.
pub fn regular_module(group: &TameGroup, p: u64, coeff_degree: usize) -> Result<FpGModule> {
    let els = group.elements();
    let n = els.len();
    let perm = |h: &GroupElem| -> Result<FpMatrix> {
        let mut m = FpMatrix::zeros(p, n, n);
        for g in &els {
            let hg = group.compose(h, g)?;
            m.set(group.index(&hg), group.index(g), 1);
        }
        Ok(m)
    };
    let one = FpGModule::new_unchecked(p, group.sig(), perm(&group.sigma())?, perm(&group.tau())?);
    direct_sum(p, group.sig(), &vec![one; coeff_degree])
}

/// `k[G]` as an `F_p[G]`-module, using the attached tower for `p` and `a`.
pub fn regular_module_k(group: &TameGroup) -> Result<FpGModule> {
    let tower = group.require_tower()?;
    regular_module(group, tower.p(), tower.a())
}

/// Block-diagonal direct sum; the empty sum is the zero module.
pub fn direct_sum(p: u64, group: GroupSig, parts: &[FpGModule]) -> Result<FpGModule> {
    if let Some(bad) = parts.iter().find(|m| m.group != group || m.p != p) {
        return Err(Error::DimensionMismatch(format!(
            "summand over F_{} for group {:?} in a sum over F_{p} for {:?}",
            bad.p, bad.group, group
        )));
    }
    let sig: Vec<&FpMatrix> = parts.iter().map(|m| &m.sigma).collect();
    let tau: Vec<&FpMatrix> = parts.iter().map(|m| &m.tau).collect();
    Ok(FpGModule::new_unchecked(
        p,
        group,
        FpMatrix::block_diag(p, &sig),
        FpMatrix::block_diag(p, &tau),
    ))
}

/// `l(r) ≅ l(s)` iff `r` and `s` are in the same orbit of `x ↦ p·x` on `Z/eZ`.
pub fn orbit_criterion(e: u64, p: u64, r: i64, s: i64) -> Result<bool> {
    same_frobenius_orbit(e, p, r, s)
}

/// Multiplicity of each character `θ^s` in `M ⊗ l`, i.e. the `l`-dimension
/// of the `η^s`-eigenspace of `τ`.
///
/// Eigenvalues `η^s` with `s` in one orbit of `x ↦ p·x` are Galois
/// conjugate, so they share a multiplicity; it is read off from the
/// `F_p`-kernel of `m_O(τ)`, where `m_O = Π_{s∈O}(x − η^s)` is computed in
/// `l[x]` and has coefficients in `F_p`.
pub fn character_multiplicities(m: &FpGModule, group: &TameGroup) -> Result<BTreeMap<u64, usize>> {
    let tower = group.require_tower()?;
    if tower.p() != m.p || group.sig() != m.group {
        return Err(Error::DimensionMismatch("module and group disagree".into()));
    }
    let e = group.e();
    let mut out = BTreeMap::new();
    for orbit in frobenius_orbits(e, m.p)? {
        // coefficients of Π (x − η^s), low degree first
        let mut poly: Vec<FFElem> = vec![tower.one()];
        for &s in &orbit {
            let root = group.theta(s as i64)?;
            let mut next = vec![tower.zero(); poly.len() + 1];
            for (i, c) in poly.iter().enumerate() {
                next[i + 1] = tower.add(&next[i + 1], c);
                next[i] = tower.sub(&next[i], &tower.mul(c, &root));
            }
            poly = next;
        }
        let coeffs: Vec<u64> = poly
            .iter()
            .map(|c| c.as_prime().expect("orbit polynomial has F_p coefficients"))
            .collect();
        let mut acc = FpMatrix::zeros(m.p, m.dim, m.dim);
        for &c in coeffs.iter().rev() {
            acc = acc
                .mul(&m.tau)
                .add(&FpMatrix::identity(m.p, m.dim).scale(c));
        }
        let kernel_dim = m.dim - acc.rank();
        debug_assert_eq!(kernel_dim % orbit.len(), 0);
        for &s in &orbit {
            out.insert(s, kernel_dim / orbit.len());
        }
    }
    Ok(out)
}

/// Projectivity test: restriction to the Sylow `p`-subgroup `⟨σ^{f/p^v}⟩`
/// must be free, i.e. every Jordan block of `σ^{f/p^v} − 1` has size `p^v`.
pub fn is_projective(m: &FpGModule) -> Result<bool> {
    let sig = m.group;
    if sig.e.is_multiple_of(m.p) {
        return Err(Error::param("p divides e; inertia is wild"));
    }
    let mut pv = 1u64;
    while sig.f.is_multiple_of(pv * m.p) {
        pv *= m.p;
    }
    if pv == 1 {
        return Ok(true);
    }
    if !(m.dim as u64).is_multiple_of(pv) {
        return Ok(false);
    }
    let gen = m.sigma.pow(sig.f / pv);
    let nil = gen.sub(&FpMatrix::identity(m.p, m.dim));
    Ok(nil.pow(pv - 1).rank() as u64 == m.dim as u64 / pv)
}

#[cfg(test)]
mod tests;
