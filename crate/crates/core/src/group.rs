//! The twisted product `G = T ×_q Σ = ⟨σ, τ | σ^f, τ^e, στσ⁻¹ = τ^q⟩`.
//!
//! Elements are kept in the normal form `τ^t σ^s`.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::arith::{gcd, pow_mod};
use crate::error::{Error, Result};
use crate::ffield::{FFElem, FieldTower};

/// The parameters `(e, f, q mod e)` that determine `G` up to the choice of generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GroupSig {
    pub e: u64,
    pub f: u64,
    pub q: u64,
}

impl GroupSig {
    pub fn order(&self) -> u64 {
        self.e * self.f
    }

    /// `q^s mod e`.
    pub fn twist(&self, s: u64) -> u64 {
        pow_mod(self.q, s, self.e)
    }
}

/// `τ^t σ^s`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GroupElem {
    pub t: u64,
    pub s: u64,
    #[serde(skip)]
    sig: GroupSig,
}

impl GroupElem {
    pub fn sig(&self) -> GroupSig {
        self.sig
    }
}

impl fmt::Debug for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.t, self.s)
    }
}

impl fmt::Display for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.t, self.s)
    }
}

#[derive(Clone, Debug)]
pub struct TameGroup {
    sig: GroupSig,
    tower: Option<Arc<FieldTower>>,
    eta: Option<FFElem>,
}

impl TameGroup {
    /// The abstract group; fails when `q^f ≢ 1 (mod e)`.
    pub fn new(e: u64, f: u64, q: u64) -> Result<Self> {
        if e == 0 || f == 0 || q == 0 {
            return Err(Error::param("e, f and q must be positive"));
        }
        if gcd(q, e) != 1 || pow_mod(q, f, e) != 1 % e {
            return Err(Error::InconsistentTwist { e, f, q });
        }
        Ok(TameGroup {
            sig: GroupSig { e, f, q: q % e },
            tower: None,
            eta: None,
        })
    }

    /// The group attached to a residue tower: `f = [l:k]`, `q = |k|`, with
    /// `θ(τ) = η` the deterministic element of order `e` in `l`.
    pub fn over_tower(tower: Arc<FieldTower>, e: u64) -> Result<Self> {
        let mut group = Self::new(e, tower.f() as u64, tower.q())?;
        let eta = tower.element_of_order(e)?;
        group.eta = Some(eta);
        group.tower = Some(tower);
        Ok(group)
    }

    pub fn sig(&self) -> GroupSig {
        self.sig
    }
    pub fn e(&self) -> u64 {
        self.sig.e
    }
    pub fn f(&self) -> u64 {
        self.sig.f
    }
    pub fn q(&self) -> u64 {
        self.sig.q
    }
    pub fn order(&self) -> u64 {
        self.sig.order()
    }
    pub fn tower(&self) -> Option<&Arc<FieldTower>> {
        self.tower.as_ref()
    }

    pub fn require_tower(&self) -> Result<&Arc<FieldTower>> {
        self.tower
            .as_ref()
            .ok_or_else(|| Error::param("group has no attached field tower"))
    }

    /// `η = θ(τ)`.
    pub fn eta(&self) -> Result<&FFElem> {
        self.eta
            .as_ref()
            .ok_or_else(|| Error::param("group has no attached field tower"))
    }

    pub fn elem(&self, t: u64, s: u64) -> Result<GroupElem> {
        if t >= self.sig.e || s >= self.sig.f {
            return Err(Error::param(format!(
                "({t},{s}) is not a normal form in a group with e={}, f={}",
                self.sig.e, self.sig.f
            )));
        }
        Ok(GroupElem {
            t,
            s,
            sig: self.sig,
        })
    }

    pub fn identity(&self) -> GroupElem {
        GroupElem {
            t: 0,
            s: 0,
            sig: self.sig,
        }
    }

    pub fn sigma(&self) -> GroupElem {
        GroupElem {
            t: 0,
            s: 1 % self.sig.f,
            sig: self.sig,
        }
    }

    pub fn tau(&self) -> GroupElem {
        GroupElem {
            t: 1 % self.sig.e,
            s: 0,
            sig: self.sig,
        }
    }

    fn check(&self, g: &GroupElem) -> Result<()> {
        if g.sig != self.sig || g.t >= self.sig.e || g.s >= self.sig.f {
            return Err(Error::MixedGroups);
        }
        Ok(())
    }

    /// `(t₁,s₁)·(t₂,s₂) = (t₁ + q^{s₁} t₂, s₁ + s₂)`.
    pub fn compose(&self, a: &GroupElem, b: &GroupElem) -> Result<GroupElem> {
        self.check(a)?;
        self.check(b)?;
        let e = self.sig.e;
        let t = (a.t + self.sig.twist(a.s) * b.t % e) % e;
        let s = (a.s + b.s) % self.sig.f;
        Ok(GroupElem {
            t,
            s,
            sig: self.sig,
        })
    }

    pub fn inverse(&self, a: &GroupElem) -> Result<GroupElem> {
        self.check(a)?;
        let (e, f) = (self.sig.e, self.sig.f);
        let s = (f - a.s) % f;
        let t = (e - self.sig.twist(s) * a.t % e) % e;
        Ok(GroupElem {
            t,
            s,
            sig: self.sig,
        })
    }

    pub fn pow(&self, a: &GroupElem, k: u64) -> Result<GroupElem> {
        let mut acc = self.identity();
        for _ in 0..k {
            acc = self.compose(&acc, a)?;
        }
        Ok(acc)
    }

    pub fn element_order(&self, a: &GroupElem) -> Result<u64> {
        self.check(a)?;
        let mut x = *a;
        let mut k = 1;
        while x != self.identity() {
            x = self.compose(&x, a)?;
            k += 1;
        }
        Ok(k)
    }

    /// All elements, ordered by [`Self::index`].
    pub fn elements(&self) -> Vec<GroupElem> {
        let sig = self.sig;
        (0..sig.f)
            .flat_map(|s| (0..sig.e).map(move |t| GroupElem { t, s, sig }))
            .collect()
    }

    /// Position `t + e·s` of an element in [`Self::elements`].
    pub fn index(&self, a: &GroupElem) -> usize {
        (a.t + self.sig.e * a.s) as usize
    }

    /// `θ(τ^t) = η^t`.
    pub fn theta(&self, t: i64) -> Result<FFElem> {
        let tower = self.require_tower()?;
        let eta = self.eta()?;
        let t = t.rem_euclid(self.sig.e as i64) as u128;
        Ok(tower.pow(eta, t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::FrobeniusLevel;

    #[test]
    fn s3_presentation() {
        let g = TameGroup::new(3, 2, 2).unwrap();
        let st = g.compose(&g.sigma(), &g.tau()).unwrap();
        assert_eq!((st.t, st.s), (2, 1));
        let tau2 = g.elem(2, 0).unwrap();
        assert_eq!(g.compose(&g.tau(), &tau2).unwrap(), g.identity());
        // nonabelian
        assert_ne!(st, g.compose(&g.tau(), &g.sigma()).unwrap());
        let x = g.elem(1, 1).unwrap();
        assert_eq!(g.compose(&x, &g.identity()).unwrap(), x);
    }

    #[test]
    fn trivial_twist_is_abelian() {
        let g = TameGroup::new(2, 2, 3).unwrap();
        let els = g.elements();
        for a in &els {
            for b in &els {
                assert_eq!(g.compose(a, b).unwrap(), g.compose(b, a).unwrap());
            }
        }
    }

    #[test]
    fn inconsistent_twist_rejected() {
        assert!(matches!(
            TameGroup::new(3, 1, 2),
            Err(Error::InconsistentTwist { .. })
        ));
    }

    #[test]
    fn mixed_operands_rejected() {
        let g = TameGroup::new(3, 2, 2).unwrap();
        let h = TameGroup::new(2, 2, 3).unwrap();
        assert_eq!(g.compose(&g.tau(), &h.tau()), Err(Error::MixedGroups));
    }

    #[test]
    fn group_axioms_exhaustive() {
        for (e, f, q) in [
            (3, 2, 2),
            (5, 4, 2),
            (7, 3, 2),
            (4, 2, 3),
            (8, 2, 3),
            (9, 6, 2),
            (5, 2, 4),
            (1, 5, 2),
        ] {
            let g = TameGroup::new(e, f, q).unwrap();
            let els = g.elements();
            assert_eq!(els.len() as u64, e * f);
            if e * f > 50 {
                continue;
            }
            for a in &els {
                let inv = g.inverse(a).unwrap();
                assert_eq!(g.compose(a, &inv).unwrap(), g.identity());
                assert_eq!(g.compose(&inv, a).unwrap(), g.identity());
                assert_eq!((e * f) % g.element_order(a).unwrap(), 0);
                for b in &els {
                    let ab = g.compose(a, b).unwrap();
                    for c in &els {
                        assert_eq!(
                            g.compose(&ab, c).unwrap(),
                            g.compose(a, &g.compose(b, c).unwrap()).unwrap()
                        );
                    }
                }
            }
            // σ τ σ⁻¹ = τ^q
            let conj = g
                .compose(
                    &g.compose(&g.sigma(), &g.tau()).unwrap(),
                    &g.inverse(&g.sigma()).unwrap(),
                )
                .unwrap();
            assert_eq!(conj, g.pow(&g.tau(), q).unwrap());
        }
    }

    #[test]
    fn theta_over_gf4() {
        let tower = Arc::new(FieldTower::new(2, 1, 2, 0).unwrap());
        let g = TameGroup::over_tower(tower.clone(), 3).unwrap();
        assert_eq!(g.theta(1).unwrap(), tower.generator());
        assert_eq!(g.theta(0).unwrap(), tower.one());
        assert_eq!(tower.pow(&g.theta(1).unwrap(), 3), tower.one());
    }

    #[test]
    fn theta_is_equivariant() {
        let tower = Arc::new(FieldTower::new(3, 1, 4, 0).unwrap());
        let g = TameGroup::over_tower(tower.clone(), 16).unwrap();
        let sigma = g.sigma();
        let sigma_inv = g.inverse(&sigma).unwrap();
        let mut seen = std::collections::HashSet::new();
        for t in 0..16u64 {
            let x = g.elem(t, 0).unwrap();
            let conj = g
                .compose(&g.compose(&sigma, &x).unwrap(), &sigma_inv)
                .unwrap();
            assert_eq!(conj.s, 0);
            let lhs = g.theta(conj.t as i64).unwrap();
            let rhs = tower.frobenius(&g.theta(t as i64).unwrap(), FrobeniusLevel::Relative);
            assert_eq!(lhs, rhs);
            assert!(seen.insert(g.theta(t as i64).unwrap()));
        }
    }
}
