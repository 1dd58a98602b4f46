//! `μ_p` detection and Kummer class reduction of principal units.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{MixedField, PadicElem};
use crate::error::{Error, Result};
use crate::ffield::FFElem;
use crate::linalg::FpMatrix;

/// The `p`-torsion of `L^×`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MuP {
    pub order: u64,
    /// A verified primitive `p`-th root of unity.
    pub generator: Option<PadicElem>,
}

/// Class of a principal unit in `Ū¹`: coefficients at levels in `[1, cp)`
/// prime to `p`, and the exponent of the fixed generator of `Ū^{cp}` when
/// `μ_p ⊂ L`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MixedUnitClass {
    pub coeffs: BTreeMap<usize, FFElem>,
    pub top: Option<u64>,
}

impl MixedUnitClass {
    pub fn is_trivial(&self) -> bool {
        self.coeffs.is_empty() && self.top.unwrap_or(0) == 0
    }

    /// `F_p`-coordinates on `levels ⊗ l-basis`, then the top coordinate.
    pub fn coordinates(&self, levels: &[usize], g: usize) -> Result<Vec<u64>> {
        if let Some(bad) = self
            .coeffs
            .keys()
            .find(|v| levels.binary_search(v).is_err())
        {
            return Err(Error::param(format!(
                "class has a component at untracked level {bad}"
            )));
        }
        let mut out = Vec::with_capacity(levels.len() * g + 1);
        for v in levels {
            match self.coeffs.get(v) {
                Some(c) => out.extend_from_slice(c.coords()),
                None => out.extend(std::iter::repeat_n(0, g)),
            }
        }
        if let Some(t) = self.top {
            out.push(t);
        }
        Ok(out)
    }
}

/// Level-`cp` data: `A(x) = x^p + ε̄x` on `l`, a functional `λ` with
/// kernel `Im A`, and `t0` with `λ(t0) = 1`.
struct TopLevel {
    a: FpMatrix,
    lambda: Option<Vec<u64>>,
    t0: Option<FFElem>,
}

impl MixedField {
    fn additive_map(&self) -> FpMatrix {
        let tw = &self.tower;
        let eps0 = self.residue(&self.eps);
        tw.frobenius_matrix().add(&tw.mul_matrix(&eps0))
    }

    fn top_level_data(&self) -> TopLevel {
        let a = self.additive_map();
        let left = a.transpose().kernel();
        let Some(lambda) = left.into_iter().next() else {
            return TopLevel {
                a,
                lambda: None,
                t0: None,
            };
        };
        let j = lambda
            .iter()
            .position(|&x| x != 0)
            .expect("nonzero kernel vector");
        let scale = crate::linalg::inv_mod(lambda[j], self.p);
        let t0 = self.tower.scale(&self.tower.basis_elem(j), scale);
        TopLevel {
            a,
            lambda: Some(lambda),
            t0: Some(t0),
        }
    }

    /// Hensel search for a primitive `p`-th root of unity `ζ = 1 + π^c w`,
    /// where `w` is a root of `w^{p−1} + ε Σ_{k=1}^{p−1} (C(p,k)/p) π^{c(k−1)} w^{k−1}`.
    pub(super) fn find_mu_p(&self) -> Result<MuP> {
        let Some(c) = self.c() else {
            return Ok(MuP {
                order: 1,
                generator: None,
            });
        };
        let kernel = self.additive_map().kernel();
        let Some(w0) = kernel.first() else {
            return Ok(MuP {
                order: 1,
                generator: None,
            });
        };
        let p = self.p;
        let binom: Vec<i64> = {
            let mut row = vec![1i64];
            for k in 1..=p {
                let prev = row[k as usize - 1];
                row.push(prev * (p - k + 1) as i64 / k as i64);
            }
            row
        };
        let pic = self.pi_pow(c);
        // G(w) = w^{p−1} + ε Σ_{k=1}^{p−1} b_k π^{c(k−1)} w^{k−1}
        let coeff_k: Vec<PadicElem> = (1..p)
            .map(|k| {
                let pk = self.pow(&pic, k - 1);
                self.mul(&self.eps, &self.scale(&pk, binom[k as usize] / p as i64))
            })
            .collect();
        let eval = |w: &PadicElem| -> (PadicElem, PadicElem) {
            let mut val = self.pow(w, p - 1);
            let mut der = self.scale(&self.pow(w, p.saturating_sub(2)), (p - 1) as i64);
            for (idx, ck) in coeff_k.iter().enumerate() {
                let deg = idx as u64;
                val = self.add(&val, &self.mul(ck, &self.pow(w, deg)));
                if deg > 0 {
                    let d = self.scale(&self.mul(ck, &self.pow(w, deg - 1)), deg as i64);
                    der = self.add(&der, &d);
                }
            }
            (val, der)
        };
        let mut w = self.lift_const(&self.tower.from_coords(w0)?);
        for _ in 0..=2 * (64 - (self.pi_precision() as u64).leading_zeros()) {
            let (val, der) = eval(&w);
            if val == self.zero() {
                break;
            }
            w = self.sub(&w, &self.mul(&val, &self.inv(&der)?));
        }
        let zeta = self.add(&self.one(), &self.mul(&pic, &w));
        if self.pow(&zeta, p) != self.one() || zeta == self.one() {
            return Err(Error::precision(
                "could not certify a primitive p-th root of unity",
            ));
        }
        Ok(MuP {
            order: p,
            generator: Some(zeta),
        })
    }

    /// `ₚL^×` with its generator.
    pub fn detect_mu_p(&self) -> &MuP {
        &self.mu
    }

    /// The fixed generator `1 + [t0]π^{cp}` of `Ū^{cp}` when `μ_p ⊂ L`.
    pub fn top_generator(&self) -> Option<PadicElem> {
        let cp = self.c()? * self.p as usize;
        let t0 = self.top_level_data().t0?;
        Some(self.add(
            &self.one(),
            &self.mul(&self.lift_const(&t0), &self.pi_pow(cp)),
        ))
    }

    /// `Π_j (1 + u^j π^r)^{a_j}` for `c = Σ a_j u^j`.
    pub fn basis_product(&self, c: &FFElem, r: usize) -> PadicElem {
        let pir = self.pi_pow(r);
        let mut acc = self.one();
        for (j, &a) in c.coords().iter().enumerate() {
            if a == 0 {
                continue;
            }
            let factor = self.add(
                &self.one(),
                &self.mul(&self.lift_const(&self.tower.basis_elem(j)), &pir),
            );
            acc = self.mul(&acc, &self.pow(&factor, a));
        }
        acc
    }

    /// Strips levels `1..=top_level` of a principal unit.
    fn strip(&self, u: &PadicElem) -> Result<MixedUnitClass> {
        if self
            .valuation(&self.sub(u, &self.one()))
            .is_some_and(|v| v < 1)
        {
            return Err(Error::param("not a principal unit"));
        }
        let p = self.p as usize;
        let top = self.top_level();
        if self.pi_precision() < top + 2 * self.e_l + 1 {
            return Err(Error::precision("p-adic window below the reduction floor"));
        }
        let cp = self.c().map(|c| c * p);
        let tl = cp.map(|_| self.top_level_data());
        let mu_present = tl.as_ref().is_some_and(|t| t.lambda.is_some());
        let mut work = u.clone();
        let mut coeffs = BTreeMap::new();
        let mut top_coord = None;
        for r in 1..=top {
            let x = self.sub(&work, &self.one());
            if self.valuation(&x).is_none_or(|v| v > r) {
                continue;
            }
            let mut a = self.level_residue(&x, r);
            if Some(r) == cp {
                let tl = tl.as_ref().expect("cp defined");
                if let (Some(lambda), Some(t0)) = (&tl.lambda, &tl.t0) {
                    let t = lambda
                        .iter()
                        .zip(a.coords())
                        .fold(0, |s, (l, c)| (s + l * c) % self.tower.p());
                    top_coord = Some(t);
                    if t != 0 {
                        let z = self.add(
                            &self.one(),
                            &self.mul(&self.lift_const(t0), &self.pi_pow(r)),
                        );
                        work = self.mul(&work, &self.inv(&self.pow(&z, t))?);
                        a = self.tower.sub(&a, &self.tower.scale(t0, t));
                    }
                }
                if a.is_zero() {
                    continue;
                }
                let sol =
                    tl.a.solve(a.coords())
                        .ok_or_else(|| Error::param("level cp residue outside the image"))?;
                let base = self.add(
                    &self.one(),
                    &self.mul(
                        &self.lift_const(&self.tower.from_coords(&sol)?),
                        &self.pi_pow(r / p),
                    ),
                );
                work = self.mul(&work, &self.inv(&self.pow(&base, p as u64))?);
            } else if a.is_zero() {
                continue;
            } else if r % p == 0 {
                let root = self.tower.pth_root(&a);
                let base = self.add(
                    &self.one(),
                    &self.mul(&self.lift_const(&root), &self.pi_pow(r / p)),
                );
                work = self.mul(&work, &self.inv(&self.pow(&base, p as u64))?);
            } else {
                coeffs.insert(r, a.clone());
                work = self.mul(&work, &self.inv(&self.basis_product(&a, r))?);
            }
        }
        if let Some(v) = self.valuation(&self.sub(&work, &self.one())) {
            debug_assert!(v > top, "residual unit at level {v}");
        }
        if mu_present && top_coord.is_none() {
            top_coord = Some(0);
        }
        Ok(MixedUnitClass {
            coeffs,
            top: top_coord,
        })
    }

    /// Canonical class of `u ≡ 1 (mod π)` in `Ū¹`; requires `(p−1) | e_L`.
    pub fn mixed_unit_reduce(&self, u: &PadicElem) -> Result<MixedUnitClass> {
        if self.c().is_none() {
            return Err(Error::param("p − 1 does not divide e_L"));
        }
        self.strip(u)
    }

    /// Whether a unit is a `p`-th power in `L`.
    pub fn is_pth_power(&self, u: &PadicElem) -> Result<bool> {
        if !self.is_unit(u) {
            return Err(Error::param("is_pth_power expects a unit"));
        }
        // residues are p-th powers, so divide by the Teichmüller lift first
        let t = self.teichmuller_const(&self.residue(u));
        let u1 = self.mul(u, &self.inv(&t)?);
        Ok(self.strip(&u1)?.is_trivial())
    }
}
