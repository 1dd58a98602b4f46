use std::sync::Arc;

use proptest::prelude::*;

use super::*;
use crate::arith::LemmaParams;
use crate::ffield::FieldTower;
use crate::group::TameGroup;
use crate::linalg::FpMatrix;

fn group(p: u64, a: usize, f: usize, e: u64) -> TameGroup {
    let tower = Arc::new(FieldTower::new(p, a, f, 0).unwrap());
    TameGroup::over_tower(tower, e).unwrap()
}

fn s3() -> TameGroup {
    group(2, 1, 2, 3)
}

fn kron(x: &FpMatrix, y: &FpMatrix) -> FpMatrix {
    let p = x.p();
    let (r, c) = (x.rows() * y.rows(), x.cols() * y.cols());
    let mut out = FpMatrix::zeros(p, r, c);
    for i in 0..x.rows() {
        for j in 0..x.cols() {
            let a = x.get(i, j);
            for k in 0..y.rows() {
                for l in 0..y.cols() {
                    out.set(i * y.rows() + k, j * y.cols() + l, a * y.get(k, l) % p);
                }
            }
        }
    }
    out
}

/// `dim_l ker(τ − η^s)` on `M ⊗ l`, computed as an `F_p`-kernel of size `dim·g`.
fn eigenspace_dims(m: &FpGModule, grp: &TameGroup) -> BTreeMap<u64, usize> {
    let tower = grp.require_tower().unwrap();
    let g = tower.g();
    let id_l = FpMatrix::identity(m.p(), g);
    let id_m = FpMatrix::identity(m.p(), m.dim());
    (0..grp.e())
        .map(|s| {
            let mul = tower.mul_matrix(&grp.theta(s as i64).unwrap());
            let op = kron(m.tau(), &id_l).sub(&kron(&id_m, &mul));
            (s, (m.dim() * g - op.rank()) / g)
        })
        .collect()
}

/// `log_p` of the number of intertwiners, by enumerating every matrix.
fn brute_hom_dim(m: &FpGModule, n: &FpGModule) -> usize {
    let p = m.p();
    let cells = (m.dim() * n.dim()) as u32;
    let mut count = 0u64;
    for idx in 0..p.pow(cells) {
        let mut k = idx;
        let rows: Vec<Vec<u64>> = (0..n.dim())
            .map(|_| {
                (0..m.dim())
                    .map(|_| {
                        let v = k % p;
                        k /= p;
                        v
                    })
                    .collect()
            })
            .collect();
        if intertwines(&FpMatrix::from_rows(p, &rows), m, n) {
            count += 1;
        }
    }
    let mut d = 0;
    while p.pow(d) < count {
        d += 1;
    }
    assert_eq!(p.pow(d), count);
    d as usize
}

#[test]
fn hom_dims_match_enumeration() {
    for (p, a, f, e) in [(2, 1, 2, 3), (3, 1, 1, 2), (2, 1, 1, 1), (3, 1, 2, 4)] {
        let g = group(p, a, f, e);
        for r in 0..e as i64 {
            for s in 0..e as i64 {
                let x = char_module(&g, r).unwrap();
                let y = char_module(&g, s).unwrap();
                assert_eq!(
                    hom_basis(&x, &y).unwrap().len(),
                    brute_hom_dim(&x, &y),
                    "{p} {e} {r} {s}"
                );
            }
        }
        let m = char_module(&g, 1)
            .unwrap()
            .oplus(&FpGModule::trivial(p, g.sig(), 1))
            .unwrap();
        let n = char_module(&g, 0).unwrap();
        assert_eq!(hom_basis(&m, &n).unwrap().len(), brute_hom_dim(&m, &n));
        assert_eq!(hom_basis(&n, &m).unwrap().len(), brute_hom_dim(&n, &m));
    }
}

#[test]
fn char_module_is_a_module() {
    let g = s3();
    for r in -3..6 {
        let m = char_module(&g, r).unwrap();
        m.validate().unwrap();
        assert_eq!(m.dim(), 2);
        assert_eq!(m, char_module(&g, r + 3).unwrap());
    }
    assert!(char_module(&g, 0).unwrap().tau().is_identity());
}

#[test]
fn regular_module_dims() {
    let g = s3();
    let r = regular_module(&g, 2, 1).unwrap();
    r.validate().unwrap();
    assert_eq!(r.dim(), 6);
    let klein = group(2, 2, 2, 3);
    assert_eq!(regular_module_k(&klein).unwrap().dim(), 2 * 3 * 2);
    let triv = group(3, 2, 1, 1);
    let t = regular_module_k(&triv).unwrap();
    assert_eq!(t.dim(), 2);
    assert!(t.sigma().is_identity() && t.tau().is_identity());
}

#[test]
fn direct_sum_dims() {
    let g = s3();
    let parts: Vec<_> = (0..3).map(|i| char_module(&g, i).unwrap()).collect();
    assert_eq!(direct_sum(2, g.sig(), &parts).unwrap().dim(), 6);
    assert_eq!(direct_sum(2, g.sig(), &[]).unwrap().dim(), 0);
    let m = &parts[1];
    assert_eq!(&m.oplus(&FpGModule::zero(2, g.sig())).unwrap(), m);
}

#[test]
fn hom_dims_in_s3() {
    let g = s3();
    let l0 = char_module(&g, 0).unwrap();
    let l1 = char_module(&g, 1).unwrap();
    let l2 = char_module(&g, 2).unwrap();
    // End(l(1)) is F_2: a GF(4)-scalar commuting with squaring lies in F_2
    let h = hom_basis(&l1, &l2).unwrap();
    assert_eq!(h.len(), 1);
    assert_eq!(h.len(), brute_hom_dim(&l1, &l2));
    assert!(h.iter().all(|x| intertwines(x, &l1, &l2)));
    assert_eq!(hom_basis(&l0, &l1).unwrap().len(), 0);
    let end = hom_basis(&l1, &l1).unwrap();
    let span: Vec<Vec<u64>> = end.iter().map(|x| x.entries().to_vec()).collect();
    let mut with_id = span.clone();
    with_id.push(FpMatrix::identity(2, 2).entries().to_vec());
    assert_eq!(
        crate::linalg::rank_of_vectors(2, &span),
        crate::linalg::rank_of_vectors(2, &with_id)
    );
}

#[test]
fn iso_examples() {
    let g = s3();
    let l0 = char_module(&g, 0).unwrap();
    let l1 = char_module(&g, 1).unwrap();
    let l2 = char_module(&g, 2).unwrap();
    let v = is_isomorphic(&l1, &l2, 0).unwrap();
    assert!(v.isomorphic && v.certain);
    let h = v.certificate.unwrap();
    assert!(intertwines(&h, &l1, &l2) && h.is_invertible());
    let v = is_isomorphic(&l1, &l0, 0).unwrap();
    assert!(!v.isomorphic && v.certain);
    assert!(is_isomorphic(&l1, &l1, 7).unwrap().isomorphic);
    let v = is_isomorphic(&l1, &regular_module_k(&g).unwrap(), 0).unwrap();
    assert_eq!(v.method, IsoMethod::DimensionMismatch);
}

#[test]
fn orbit_criterion_examples() {
    assert!(orbit_criterion(8, 3, 5, 7).unwrap());
    assert!(!orbit_criterion(8, 3, 1, 2).unwrap());
    assert!(orbit_criterion(5, 2, 3, 3).unwrap());
}

#[test]
fn multiplicity_examples() {
    let g = s3();
    let l1 = char_module(&g, 1).unwrap();
    let got = character_multiplicities(&l1, &g).unwrap();
    assert_eq!(got, BTreeMap::from([(0, 0), (1, 1), (2, 1)]));
    let l0 = char_module(&g, 0).unwrap();
    assert_eq!(character_multiplicities(&l0, &g).unwrap()[&0], 2);
    let kg = regular_module_k(&g).unwrap();
    assert_eq!(
        character_multiplicities(&kg, &g).unwrap(),
        BTreeMap::from([(0, 2), (1, 2), (2, 2)])
    );
}

#[test]
fn multiplicities_match_eigenspaces() {
    for (p, a, f, e) in [
        (2, 1, 2, 3),
        (3, 1, 2, 4),
        (2, 2, 1, 3),
        (3, 2, 1, 8),
        (2, 1, 4, 5),
    ] {
        let g = group(p, a, f, e);
        let mut parts = vec![regular_module(&g, p, 1).unwrap()];
        for r in 0..e as i64 {
            parts.push(char_module(&g, r).unwrap());
            parts.push(char_module(&g, 3 * r + 1).unwrap());
        }
        let m = direct_sum(p, g.sig(), &parts).unwrap();
        assert_eq!(
            character_multiplicities(&m, &g).unwrap(),
            eigenspace_dims(&m, &g)
        );
    }
}

#[test]
fn projectivity_examples() {
    let g = s3();
    assert!(is_projective(&char_module(&g, 1).unwrap()).unwrap());
    assert!(!is_projective(&FpGModule::trivial(2, g.sig(), 1)).unwrap());
    let g = group(3, 1, 2, 4);
    assert!(is_projective(&FpGModule::trivial(3, g.sig(), 1)).unwrap());
    let g = group(2, 1, 4, 5);
    assert!(is_projective(&regular_module(&g, 2, 1).unwrap()).unwrap());
    assert!(!is_projective(&FpGModule::trivial(2, g.sig(), 2)).unwrap());
}

#[test]
fn iwasawa_examples() {
    for (p, a, f, e) in [(2, 1, 2, 3), (3, 1, 1, 2), (3, 1, 2, 4)] {
        let g = group(p, a, f, e);
        let params = LemmaParams::new(p, e, 1).unwrap();
        let rep = verify_iwasawa_lemma(&g, &params, 0).unwrap();
        assert!(rep.pass(), "{rep:?}");
        assert_eq!(rep.dim as u64, params.n * (a * f) as u64);
    }
    let g = s3();
    let rep = verify_iwasawa_lemma(&g, &LemmaParams::new(2, 3, 1).unwrap(), 0).unwrap();
    let mut labels = rep.summands.clone();
    labels.sort();
    assert_eq!(labels, vec![0, 1, 2]);
    let wrong = LemmaParams::new(3, 2, 1).unwrap();
    assert!(verify_iwasawa_lemma(&g, &wrong, 0).is_err());
}

#[test]
fn search_finds_isomorphism_with_many_small_factors() {
    // F_3[G] for |G| = 32 has several F_3 factors; plain sampling rarely hits a unit
    let g = group(3, 1, 4, 8);
    let parts: Vec<_> = (0..8).map(|i| char_module(&g, i).unwrap()).collect();
    let sum = direct_sum(3, g.sig(), &parts).unwrap();
    let free = regular_module_k(&g).unwrap();
    for seed in 0..4 {
        let v = is_isomorphic(&sum, &free, seed).unwrap();
        assert!(v.isomorphic && v.certain, "seed {seed}");
    }
}

#[test]
fn free_generator_is_certificate() {
    for (p, a, f, e) in [(2, 1, 2, 3), (3, 1, 2, 4), (2, 2, 1, 3), (3, 2, 2, 8)] {
        let g = group(p, a, f, e);
        let parts: Vec<_> = (0..e as i64).map(|i| char_module(&g, i).unwrap()).collect();
        let sum = direct_sum(p, g.sig(), &parts).unwrap();
        let free = regular_module_k(&g).unwrap();
        let h = free_generator_certificate(&g).unwrap();
        assert!(intertwines(&h, &free, &sum));
        assert!(h.is_invertible());
    }
}

#[test]
fn regular_k_is_sum_of_regular_fp() {
    let g = group(3, 2, 1, 4);
    let kg = regular_module_k(&g).unwrap();
    let fg = regular_module(&g, 3, 1).unwrap();
    let two = fg.oplus(&fg).unwrap();
    assert!(is_isomorphic(&kg, &two, 1).unwrap().isomorphic);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn orbit_criterion_matches_oracle(r in 0i64..5, s in 0i64..5, seed in any::<u64>()) {
        let g = group(2, 1, 4, 5);
        let a = char_module(&g, r).unwrap();
        let b = char_module(&g, s).unwrap();
        let v = is_isomorphic(&a, &b, seed).unwrap();
        prop_assert!(v.certain);
        prop_assert_eq!(v.isomorphic, orbit_criterion(5, 2, r, s).unwrap());
    }

    #[test]
    fn multiplicities_additive(rs in proptest::collection::vec(0i64..8, 1..4)) {
        let g = group(3, 1, 2, 8);
        let parts: Vec<_> = rs.iter().map(|&r| char_module(&g, r).unwrap()).collect();
        let sum = direct_sum(3, g.sig(), &parts).unwrap();
        let total = character_multiplicities(&sum, &g).unwrap();
        for (s, v) in &total {
            let each: usize = parts
                .iter()
                .map(|m| character_multiplicities(m, &g).unwrap()[s])
                .sum();
            prop_assert_eq!(*v, each);
        }
        prop_assert_eq!(total.values().sum::<usize>(), sum.dim());
    }

    #[test]
    fn char_modules_are_projective(r in 0i64..8) {
        for (p, a, f, e) in [(2, 1, 2, 3), (3, 1, 2, 8), (2, 1, 4, 5)] {
            let g = group(p, a, f, e);
            prop_assert!(is_projective(&char_module(&g, r).unwrap()).unwrap());
        }
    }
}
