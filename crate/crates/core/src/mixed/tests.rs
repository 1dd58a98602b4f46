use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;

fn field(p: u64, f_k: usize, eis: &str, e: u64, f: usize) -> MixedField {
    MixedField::new(p, f_k, Eisenstein::parse(eis).unwrap(), e, f, None).unwrap()
}

fn q3_zeta() -> MixedField {
    field(3, 1, "+3", 2, 1)
}

#[test]
fn eisenstein_parsing() {
    assert_eq!(
        Eisenstein::parse("+3").unwrap(),
        Eisenstein::from_ints(&[3])
    );
    assert_eq!(
        Eisenstein::parse("-2, 0").unwrap().coeffs,
        vec![vec![-2], vec![0]]
    );
    assert_eq!(
        Eisenstein::parse("[2,4],6").unwrap().coeffs,
        vec![vec![2, 4], vec![6]]
    );
    assert_eq!(Eisenstein::parse("[2,4],6").unwrap().to_string(), "[2,4],6");
    assert!(Eisenstein::parse("").is_err());
    assert!(Eisenstein::parse("3;").is_err());
}

#[test]
fn construction_examples() {
    let k = q3_zeta();
    assert_eq!((k.e_l(), k.c()), (2, Some(1)));
    assert_eq!(k.degree(), 2);
    let k = field(2, 1, "-2", 1, 2);
    assert_eq!((k.e_l(), k.c(), k.degree()), (1, Some(1), 2));
    let k = field(3, 1, "-3", 2, 1);
    assert_eq!(k.detect_mu_p().order, 1);
    // wild, non-Eisenstein, low precision
    assert!(MixedField::new(3, 1, Eisenstein::from_ints(&[3]), 3, 1, None).is_err());
    assert!(MixedField::new(3, 1, Eisenstein::from_ints(&[9]), 2, 1, None).is_err());
    assert!(MixedField::new(3, 1, Eisenstein::from_ints(&[1]), 2, 1, None).is_err());
    let err = MixedField::new(3, 1, Eisenstein::from_ints(&[3]), 2, 1, Some(2)).unwrap_err();
    assert!(err.is_precision());
}

#[test]
fn ring_relations() {
    let k = q3_zeta();
    let pi = k.uniformiser();
    // π² = −3
    assert_eq!(k.mul(&pi, &pi), k.from_int(-3));
    assert_eq!(k.valuation(&k.from_int(9)), Some(4));
    assert_eq!(k.valuation(&pi), Some(1));
    assert_eq!(k.mul(k.eps(), &k.pi_pow(2)), k.from_int(3));
    let k = field(2, 2, "-2", 3, 1);
    let pi = k.uniformiser();
    assert_eq!(k.pow(&pi, 3), k.from_int(2));
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let u = k.random_unit(&mut rng);
    assert_eq!(k.mul(&u, &k.inv(&u).unwrap()), k.one());
}

#[test]
fn teichmuller_and_frobenius() {
    let k = field(3, 1, "+3", 2, 2);
    let tw = k.tower().clone();
    for x in tw.elements().skip(1) {
        let t = k.teichmuller_const(&x);
        assert_eq!(k.pow(&t, 8), k.one());
        assert_eq!(k.residue(&t), x);
    }
    let sigma = k.group().sigma();
    let y = k.lift_const(&tw.basis_elem(1));
    let sy = k.galois_act(&sigma, &y).unwrap();
    // σ(y) is a root of the lifted modulus congruent to y^3
    assert_eq!(k.residue(&sy), tw.pow(&tw.basis_elem(1), 3));
    let twice = k.galois_act(&sigma, &sy).unwrap();
    assert_eq!(twice, y);
}

#[test]
fn galois_relations() {
    let k = field(2, 2, "-2", 3, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let grp = k.group().clone();
    for _ in 0..10 {
        let x = k.random(&mut rng);
        let y = k.random(&mut rng);
        for h in grp.elements() {
            let gx = k.galois_act(&h, &x).unwrap();
            let gy = k.galois_act(&h, &y).unwrap();
            assert_eq!(k.galois_act(&h, &k.mul(&x, &y)).unwrap(), k.mul(&gx, &gy));
        }
        let tau = grp.tau();
        assert_eq!(k.galois_act(&grp.pow(&tau, 3).unwrap(), &x).unwrap(), x);
    }
}

#[test]
fn mu_p_examples() {
    let k = q3_zeta();
    let mu = k.detect_mu_p();
    assert_eq!(mu.order, 3);
    let zeta = mu.generator.clone().unwrap();
    // 2ζ + 1 = ±√−3 = ±π
    let s = k.add(&k.scale(&zeta, 2), &k.one());
    let pi = k.uniformiser();
    assert!(s == pi || s == k.scale(&pi, -1));
    assert_eq!(field(3, 1, "-3", 2, 1).detect_mu_p().order, 1);
    for (f_k, eis, e, f) in [(1, "-2", 1, 1), (1, "-2", 1, 2), (2, "-2", 3, 1)] {
        let k = field(2, f_k, eis, e, f);
        assert_eq!(k.detect_mu_p().generator, Some(k.from_int(-1)));
    }
}

#[test]
fn pth_powers_in_q3() {
    let k = field(3, 1, "-3", 1, 1);
    assert!(!k.is_pth_power(&k.from_int(4)).unwrap());
    assert!(k.is_pth_power(&k.one()).unwrap());
    for u in 1..27i64 {
        if u % 3 == 0 {
            continue;
        }
        let expected = u % 9 == 1 || u % 9 == 8;
        assert_eq!(k.is_pth_power(&k.from_int(u)).unwrap(), expected, "u = {u}");
    }
    assert!(k.is_pth_power(&k.from_int(3)).is_err());
}

#[test]
fn reduce_examples() {
    let k = q3_zeta();
    let one = k.tower().one();
    let u = k.add(&k.one(), &k.uniformiser());
    let cls = k.mixed_unit_reduce(&u).unwrap();
    assert_eq!(cls.coeffs, BTreeMap::from([(1, one)]));
    assert_eq!(cls.top, Some(0));
    let zeta = k.detect_mu_p().generator.clone().unwrap();
    assert!(!k.mixed_unit_reduce(&zeta).unwrap().is_trivial());
    let top = k.top_generator().unwrap();
    let cls = k.mixed_unit_reduce(&top).unwrap();
    assert!(cls.coeffs.is_empty());
    assert_eq!(cls.top, Some(1));
    assert!(k.mixed_unit_reduce(&k.from_int(2)).is_err());
    assert_eq!(
        field(3, 1, "-3", 2, 1)
            .mixed_unit_reduce(&k.one())
            .unwrap()
            .top,
        None
    );
}

#[test]
fn structure_examples() {
    let cases = [
        (2, 1, "-2", 1, 1, 2),
        (2, 1, "-2", 1, 2, 3),
        (3, 1, "+3", 2, 1, 3),
        (3, 1, "-3", 2, 1, 2),
        (3, 1, "3,0", 1, 1, 3),
    ];
    for (p, f_k, eis, e, f, dim) in cases {
        let k = field(p, f_k, eis, e, f);
        let rep = mixed_unit_module(&k).unwrap();
        assert_eq!(rep.structure.dim, dim, "{p} {eis} {e} {f}");
        assert!(rep.pass(), "{rep:?}");
        assert!(rep.oracle.is_some());
    }
    // Q2: {±1, ±5} mod squares
    let rep = mixed_unit_module(&field(2, 1, "-2", 1, 1)).unwrap();
    let o = rep.oracle.unwrap();
    assert_eq!((o.units, o.quotient_order), (4, 4));
}

fn grid() -> Vec<MixedField> {
    vec![
        field(2, 1, "-2", 1, 2),
        q3_zeta(),
        field(3, 1, "-3", 2, 1),
        field(3, 1, "+3", 2, 2),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn reduce_ignores_pth_powers(seed in any::<u64>(), which in 0usize..4) {
        let k = &grid()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = k.random_principal_unit(&mut rng);
        let v = k.random_unit(&mut rng);
        let w = k.mul(&u, &k.pow(&v, k.p()));
        let w1 = k.mul(&w, &k.inv(&k.teichmuller_const(&k.residue(&w))).unwrap());
        prop_assert_eq!(k.mixed_unit_reduce(&w1).unwrap(), k.mixed_unit_reduce(&u).unwrap());
        prop_assert!(k.is_pth_power(&k.pow(&v, k.p())).unwrap());
    }

    #[test]
    fn reduce_equivariant(seed in any::<u64>(), which in 0usize..4, t in 0u64..2, s in 0u64..2) {
        let k = &grid()[which];
        let rep = mixed_unit_module(k).unwrap();
        let grp = k.group();
        let h = grp.elem(t % grp.e(), s % grp.f()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = k.random_principal_unit(&mut rng);
        let levels: Vec<usize> = rep.structure.levels.iter().map(|&r| r as usize).collect();
        let g = k.tower().g();
        let before = k.mixed_unit_reduce(&u).unwrap().coordinates(&levels, g).unwrap();
        let after = k.mixed_unit_reduce(&k.galois_act(&h, &u).unwrap()).unwrap().coordinates(&levels, g).unwrap();
        prop_assert_eq!(rep.structure.module.action(&h).mul_vec(&before), after);
    }

    #[test]
    fn reduce_is_a_homomorphism(seed in any::<u64>(), which in 0usize..4) {
        let k = &grid()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = k.random_principal_unit(&mut rng);
        let v = k.random_principal_unit(&mut rng);
        let levels: Vec<usize> = (1..k.top_level()).filter(|r| r % k.p() as usize != 0).collect();
        let g = k.tower().g();
        let a = k.mixed_unit_reduce(&u).unwrap().coordinates(&levels, g).unwrap();
        let b = k.mixed_unit_reduce(&v).unwrap().coordinates(&levels, g).unwrap();
        let s = k.mixed_unit_reduce(&k.mul(&u, &v)).unwrap().coordinates(&levels, g).unwrap();
        for i in 0..s.len() {
            prop_assert_eq!(s[i], (a[i] + b[i]) % k.p());
        }
    }
}
