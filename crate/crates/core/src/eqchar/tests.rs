use std::collections::HashSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;

fn s3_field() -> EqCharField {
    EqCharField::new(2, 1, 2, 3, -8, 16).unwrap()
}

fn el(k: &EqCharField, c: &[u64]) -> FFElem {
    k.tower().from_coords(c).unwrap()
}

#[test]
fn field_examples() {
    let k = s3_field();
    assert_eq!(k.group().order(), 6);
    assert_eq!(k.tower().modulus(), &[1, 1, 1]);
    let k = EqCharField::new(3, 1, 1, 2, -4, 8).unwrap();
    assert_eq!(k.group().order(), 2);
    assert!(EqCharField::new(3, 1, 1, 3, -4, 8).is_err());
    assert!(EqCharField::new(3, 1, 1, 2, -4, 0).is_err());
}

#[test]
fn galois_examples() {
    let k = s3_field();
    let u = el(&k, &[0, 1]);
    let pi = k.monomial(&k.tower().one(), 1, 6);
    let t = k.galois_act(&k.group().tau(), &pi).unwrap();
    assert_eq!(t, k.monomial(&u, 1, 6));
    let c = k.monomial(&u, 0, 6);
    let s = k.galois_act(&k.group().sigma(), &c).unwrap();
    assert_eq!(s, k.monomial(&k.tower().mul(&u, &u), 0, 6));
    assert_eq!(k.galois_act(&k.group().sigma(), &pi).unwrap(), pi);
    // t = π^3 is fixed by everything
    let t3 = k.monomial(&k.tower().one(), 3, 9);
    for h in k.group().elements() {
        assert_eq!(k.galois_act(&h, &t3).unwrap(), t3);
    }
}

#[test]
fn arithmetic_precision() {
    let k = s3_field();
    let one = k.tower().one();
    let x = k.from_terms(&[(-2, one.clone())], 3).unwrap();
    let y = k.from_terms(&[(1, one.clone())], 4).unwrap();
    let xy = k.mul(&x, &y);
    assert_eq!(xy.valuation(), Some(-1));
    assert_eq!(xy.abs_prec(), 2);
    let sq = k.pow_p(&x);
    assert_eq!(sq.valuation(), Some(-4));
    assert_eq!(sq.abs_prec(), 6);
    let inv = k.inv(&x).unwrap();
    assert_eq!(k.mul(&x, &inv), k.one(5));
    assert_eq!(k.add(&x, &y).abs_prec(), 3);
}

#[test]
fn parse_and_print() {
    let k = s3_field();
    let x = k.parse("{-2: [1,0], 1: [0,1]}").unwrap();
    assert_eq!(x.valuation(), Some(-2));
    assert_eq!(x.abs_prec(), 8);
    assert_eq!(x.to_string(), "{-2: [1,0], 1: [0,1]} + O(pi^8)");
    assert_eq!(
        k.parse(&x.to_string().replace(" + O(pi^8)", "")).unwrap(),
        x
    );
    assert!(k.parse("-2: [1,0]").is_err());
    assert_eq!(k.parse("{}").unwrap().valuation(), None);
}

#[test]
fn as_reduce_examples() {
    let k = s3_field();
    let one = k.tower().one();
    let x = k.monomial(&one, -2, 1);
    let cls = k.as_reduce(&x).unwrap();
    assert_eq!(cls.coeffs, BTreeMap::from([(-1, one.clone())]));
    assert_eq!(cls.constant, 0);
    let u = el(&k, &[0, 1]);
    let cls = k.as_reduce(&k.monomial(&u, 0, 1)).unwrap();
    assert!(cls.coeffs.is_empty());
    assert_eq!(cls.constant, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let y = k.random(&mut rng, -5, 1);
    let cls = k.as_reduce(&k.wp(&y)).unwrap();
    assert!(cls.coeffs.is_empty() && cls.constant == 0);
    assert!(k
        .as_reduce(&k.monomial(&one, -2, 0))
        .unwrap_err()
        .is_precision());
}

#[test]
fn unit_reduce_examples() {
    let k = s3_field();
    let one = k.tower().one();
    let u = el(&k, &[0, 1]);
    let x = k.add(&k.one(6), &k.monomial(&one, 2, 6));
    assert!(k.unit_reduce(&x, 6).unwrap().is_trivial());
    let y = k.add(&k.one(6), &k.monomial(&u, 1, 6));
    assert_eq!(
        k.unit_reduce(&y, 6).unwrap().coeffs,
        BTreeMap::from([(1, u.clone())])
    );
    assert!(k.unit_reduce(&y, 7).unwrap_err().is_precision());
    assert!(k.unit_reduce(&k.monomial(&u, 0, 6), 6).is_err());
}

#[test]
fn additive_structure_examples() {
    let k = s3_field();
    let rep = k.as_module(1).unwrap();
    assert_eq!(rep.dim, 7);
    assert_eq!(rep.levels, vec![-5, -3, -1]);
    assert_eq!(rep.inflation, 1);
    assert!(rep.pass(), "{rep:?}");

    let k = EqCharField::new(3, 1, 1, 2, -8, 16).unwrap();
    let rep = k.as_module(1).unwrap();
    assert_eq!(rep.inflation, 2);
    assert_eq!(rep.params.c % 2, 0);
    assert_eq!(rep.dim, rep.expected_dim);
    assert!(rep.pass());

    let k = EqCharField::new(5, 1, 1, 1, -8, 16).unwrap();
    let rep = k.as_module(2).unwrap();
    assert_eq!(rep.dim, 1 + 8);
    assert!(rep.pass());
}

#[test]
fn unit_structure_examples() {
    let k = s3_field();
    let rep = k.unit_module(1).unwrap();
    assert_eq!(rep.dim, 6);
    assert_eq!(rep.levels, vec![1, 3, 5]);
    assert!(rep.pass());
    let k = EqCharField::new(3, 1, 1, 2, -8, 16).unwrap();
    let rep = k.unit_module(1).unwrap();
    assert_eq!((rep.dim, rep.levels.clone()), (2, vec![1, 2]));
    assert!(rep.pass());
    let rep = k.unit_module(2).unwrap();
    assert_eq!(rep.dim, 4);
    assert!(rep.pass());
}

/// `(units mod π^{cutoff})` and its `p`-th powers, by enumeration.
fn unit_quotient_order(k: &EqCharField, cutoff: i64) -> u64 {
    let tw = k.tower();
    let q = tw.order().unwrap() as u64;
    let slots = (cutoff - 1) as u32;
    let total = q.pow(slots);
    let mut powers = HashSet::new();
    for idx in 0..total {
        let mut r = idx;
        let terms: Vec<(i64, FFElem)> = (1..cutoff)
            .map(|v| {
                let c = tw.from_index((r % q) as u128);
                r /= q;
                (v, c)
            })
            .collect();
        let tail = k.from_terms(&terms, cutoff).unwrap();
        let u = k.add(&k.one(cutoff), &tail);
        let mut acc = k.one(cutoff);
        for _ in 0..k.p() {
            acc = k.mul(&acc, &u);
        }
        powers.insert(format!("{acc}"));
    }
    total / powers.len() as u64
}

/// `π^{−(cp−1)}o / (𝔭 + ℘(π^{−(c−1)}o))`, by enumeration.
fn additive_quotient_order(k: &EqCharField, cp: i64, c: i64) -> u64 {
    let tw = k.tower();
    let q = tw.order().unwrap() as u64;
    let low = -(c - 1);
    let total_y = q.pow((1 - low) as u32);
    let mut image = HashSet::new();
    for idx in 0..total_y {
        let mut r = idx;
        let terms: Vec<(i64, FFElem)> = (low..=0)
            .map(|v| {
                let x = tw.from_index((r % q) as u128);
                r /= q;
                (v, x)
            })
            .collect();
        let y = k.from_terms(&terms, 1).unwrap();
        image.insert(format!("{}", k.wp(&y)));
    }
    q.pow(cp as u32) / image.len() as u64
}

#[test]
fn structures_match_enumeration() {
    for (p, a, f, e) in [(2, 1, 2, 3), (3, 1, 1, 2), (2, 1, 1, 1)] {
        let k = EqCharField::new(p, a, f, e, -8, 16).unwrap();
        let rep = k.unit_module(1).unwrap();
        assert_eq!(
            unit_quotient_order(&k, rep.precision),
            p.pow(rep.dim as u32)
        );
        let rep = k.as_module(1).unwrap();
        let c = rep.params.c as i64;
        assert_eq!(
            additive_quotient_order(&k, c * p as i64, c),
            p.pow(rep.dim as u32)
        );
    }
}

fn configs() -> Vec<EqCharField> {
    [(2, 1, 3, 2), (3, 1, 2, 1), (3, 1, 2, 2), (2, 2, 3, 1)]
        .iter()
        .map(|&(p, a, e, f)| EqCharField::new(p, a, f, e, -12, 24).unwrap())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn as_reduce_well_defined(seed in any::<u64>(), which in 0usize..4) {
        let k = &configs()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = k.random(&mut rng, -12, 1);
        let y = k.random(&mut rng, -4, 1);
        let z = k.random(&mut rng, -9, 1);
        let rx = k.as_reduce(&x).unwrap();
        prop_assert_eq!(&k.as_reduce(&k.add(&x, &k.wp(&y))).unwrap(), &rx);
        // linearity
        let rz = k.as_reduce(&z).unwrap();
        let sum = k.as_reduce(&k.add(&x, &z)).unwrap();
        let levels: Vec<i64> = (-12..0).filter(|v| v % k.p() as i64 != 0).collect();
        let g = k.tower().g();
        let (a, b, s) = (
            rx.coordinates(&levels, g).unwrap(),
            rz.coordinates(&levels, g).unwrap(),
            sum.coordinates(&levels, g).unwrap(),
        );
        for i in 0..s.len() {
            prop_assert_eq!(s[i], (a[i] + b[i]) % k.p());
        }
    }

    #[test]
    fn unit_reduce_well_defined(seed in any::<u64>(), which in 0usize..4) {
        let k = &configs()[which];
        let cutoff = 3 * k.p() as i64;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = k.random_unit(&mut rng, cutoff);
        let v = k.random_unit(&mut rng, cutoff);
        let w = k.truncate(&k.mul(&u, &k.pow_p(&v)), cutoff);
        prop_assert_eq!(k.unit_reduce(&w, cutoff).unwrap(), k.unit_reduce(&u, cutoff).unwrap());
    }

    #[test]
    fn reductions_equivariant(seed in any::<u64>(), which in 0usize..4, t in 0u64..4, s in 0u64..2) {
        let k = &configs()[which];
        let h = k.group().elem(t % k.group().e(), s % k.group().f()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let add = k.as_module(1).unwrap();
        let g = k.tower().g();
        let low = add.levels[0];
        let x = k.random(&mut rng, low, 1);
        let before = k.as_reduce(&x).unwrap().coordinates(&add.levels, g).unwrap();
        let after = k.as_reduce(&k.galois_act(&h, &x).unwrap()).unwrap().coordinates(&add.levels, g).unwrap();
        prop_assert_eq!(add.module.action(&h).mul_vec(&before), after);

        let mult = k.unit_module(1).unwrap();
        let u = k.random_unit(&mut rng, mult.precision);
        let before = k.unit_reduce(&u, mult.precision).unwrap().coordinates(&mult.levels, g).unwrap();
        let moved = k.galois_act(&h, &u).unwrap();
        let after = k.unit_reduce(&moved, mult.precision).unwrap().coordinates(&mult.levels, g).unwrap();
        prop_assert_eq!(mult.module.action(&h).mul_vec(&before), after);
    }

    #[test]
    fn galois_is_a_ring_map(seed in any::<u64>(), t in 0u64..3, s in 0u64..2) {
        let k = s3_field();
        let h = k.group().elem(t, s).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = k.random(&mut rng, -3, 5);
        let y = k.random(&mut rng, -2, 6);
        let gx = k.galois_act(&h, &x).unwrap();
        let gy = k.galois_act(&h, &y).unwrap();
        prop_assert_eq!(k.galois_act(&h, &k.mul(&x, &y)).unwrap(), k.mul(&gx, &gy));
        prop_assert_eq!(k.galois_act(&h, &k.add(&x, &y)).unwrap(), k.add(&gx, &gy));
        // σ τ σ⁻¹ = τ^q on elements
        let sig = k.group().sigma();
        let tau = k.group().tau();
        let lhs = k.galois_act(&sig, &k.galois_act(&tau, &x).unwrap()).unwrap();
        let rhs = k.galois_act(&k.group().pow(&tau, k.group().q()).unwrap(), &k.galois_act(&sig, &x).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
