//! Hom-spaces and the isomorphism oracle.
//!
//! The source module is "spun": a basis is grown from unit vectors by
//! repeatedly applying `σ` and `τ`. A module map is then determined by the
//! images of the spinning generators, subject to one linear constraint per
//! (basis vector, generator of `G`) pair that was not used to create a new
//! basis vector. Solving that system gives the hom-space with
//! `#generators · dim N` unknowns instead of `dim M · dim N`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::FpGModule;
use crate::error::{Error, Result};
use crate::linalg::{EchelonBasis, FpMatrix};

/// Largest `p^{dim Hom}` searched exhaustively.
pub const EXHAUSTIVE_LIMIT: u128 = 1 << 16;
const RANDOM_TRIES: usize = 96;
const CLIMB_RESTARTS: usize = 8;
const CLIMB_STEPS_PER_DIM: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Op {
    Sigma,
    Tau,
}

#[derive(Clone, Copy, Debug)]
enum Origin {
    Generator(usize),
    Image(usize, Op),
}

struct Spin {
    basis: Vec<Vec<u64>>,
    origin: Vec<Origin>,
    generators: usize,
    /// Inverse of the matrix whose columns are `basis`.
    to_spin_coords: FpMatrix,
}

fn spin(m: &FpGModule) -> Spin {
    let n = m.dim();
    let p = m.p();
    let mut span = EchelonBasis::new(p, n);
    let mut basis = Vec::with_capacity(n);
    let mut origin = Vec::with_capacity(n);
    let mut generators = 0;
    for cand in 0..n {
        if basis.len() == n {
            break;
        }
        let mut v = vec![0u64; n];
        v[cand] = 1;
        if !span.insert(&v) {
            continue;
        }
        basis.push(v);
        origin.push(Origin::Generator(generators));
        generators += 1;
        let mut head = basis.len() - 1;
        while head < basis.len() {
            for op in [Op::Sigma, Op::Tau] {
                let mat = match op {
                    Op::Sigma => m.sigma(),
                    Op::Tau => m.tau(),
                };
                let w = mat.mul_vec(&basis[head]);
                if span.insert(&w) {
                    basis.push(w);
                    origin.push(Origin::Image(head, op));
                }
            }
            head += 1;
        }
    }
    let b = FpMatrix::from_columns(p, n, &basis);
    let to_spin_coords = b.inverse().expect("spun vectors form a basis");
    Spin {
        basis,
        origin,
        generators,
        to_spin_coords,
    }
}

fn check_pair(m: &FpGModule, n: &FpGModule) -> Result<()> {
    if m.group() != n.group() || m.p() != n.p() {
        return Err(Error::DimensionMismatch(
            "modules over different groups or primes".into(),
        ));
    }
    Ok(())
}

/// Linear map from the unknowns (images of generators) to `N`, as a
/// `dim N × unknowns` matrix per spun basis vector.
fn hom_kernel(m: &FpGModule, n: &FpGModule, sp: &Spin) -> (Vec<Vec<Vec<u64>>>, Vec<Vec<u64>>) {
    let p = m.p();
    let dn = n.dim();
    let unknowns = sp.generators * dn;
    // images[j][row] is a row vector over the unknowns
    let mut images: Vec<Vec<Vec<u64>>> = Vec::with_capacity(sp.basis.len());
    for (j, o) in sp.origin.iter().enumerate() {
        let img = match *o {
            Origin::Generator(g) => (0..dn)
                .map(|r| {
                    let mut row = vec![0u64; unknowns];
                    row[g * dn + r] = 1;
                    row
                })
                .collect(),
            Origin::Image(parent, op) => {
                let mat = match op {
                    Op::Sigma => n.sigma(),
                    Op::Tau => n.tau(),
                };
                apply(mat, &images[parent], p)
            }
        };
        debug_assert_eq!(images.len(), j);
        images.push(img);
    }
    let mut eqs = EchelonBasis::new(p, unknowns);
    for j in 0..sp.basis.len() {
        for op in [Op::Sigma, Op::Tau] {
            // skip constraints that hold by construction
            if sp
                .origin
                .iter()
                .any(|o| matches!(o, Origin::Image(par, o2) if *par == j && *o2 == op))
            {
                continue;
            }
            let (mm, nm) = match op {
                Op::Sigma => (m.sigma(), n.sigma()),
                Op::Tau => (m.tau(), n.tau()),
            };
            let coords = sp.to_spin_coords.mul_vec(&mm.mul_vec(&sp.basis[j]));
            let lhs = apply(nm, &images[j], p);
            for r in 0..dn {
                let mut row = lhs[r].clone();
                for (c, &k) in coords.iter().enumerate() {
                    if k == 0 {
                        continue;
                    }
                    let m = p - k;
                    for (x, &y) in row.iter_mut().zip(&images[c][r]) {
                        if y != 0 {
                            *x = (*x + m * y) % p;
                        }
                    }
                }
                if row.iter().any(|&x| x != 0) {
                    eqs.insert(&row);
                }
            }
        }
    }
    (images, eqs.kernel())
}

fn apply(mat: &FpMatrix, rows: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let width = rows.first().map_or(0, |r| r.len());
    (0..mat.rows())
        .map(|r| {
            let mut out = vec![0u64; width];
            for (k, src) in rows.iter().enumerate() {
                let a = mat.get(r, k);
                if a == 0 {
                    continue;
                }
                for (x, &y) in out.iter_mut().zip(src) {
                    *x = (*x + a * y) % p;
                }
            }
            out
        })
        .collect()
}

fn materialise(images: &[Vec<Vec<u64>>], x: &[u64], sp: &Spin, p: u64, dn: usize) -> FpMatrix {
    let cols: Vec<Vec<u64>> = images
        .iter()
        .map(|img| {
            img.iter()
                .map(|row| row.iter().zip(x).fold(0u64, |a, (&r, &v)| (a + r * v) % p))
                .collect()
        })
        .collect();
    FpMatrix::from_columns(p, dn, &cols).mul(&sp.to_spin_coords)
}

/// Basis of `Hom_{F_p[G]}(M, N)` as `dim N × dim M` matrices.
pub fn hom_basis(m: &FpGModule, n: &FpGModule) -> Result<Vec<FpMatrix>> {
    check_pair(m, n)?;
    if m.dim() == 0 || n.dim() == 0 {
        return Ok(Vec::new());
    }
    let sp = spin(m);
    let (images, kernel) = hom_kernel(m, n, &sp);
    Ok(kernel
        .iter()
        .map(|x| materialise(&images, x, &sp, m.p(), n.dim()))
        .collect())
}

/// `H·M.σ = N.σ·H` and `H·M.τ = N.τ·H`.
pub fn intertwines(h: &FpMatrix, m: &FpGModule, n: &FpGModule) -> bool {
    h.rows() == n.dim()
        && h.cols() == m.dim()
        && h.mul(m.sigma()) == n.sigma().mul(h)
        && h.mul(m.tau()) == n.tau().mul(h)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IsoMethod {
    DimensionMismatch,
    ExhaustiveSearch,
    RandomSearch,
    EndomorphismDimension,
}

#[derive(Clone, Debug, Serialize)]
pub struct IsoVerdict {
    pub isomorphic: bool,
    /// Invertible `H : M → N`, verified to intertwine the actions.
    #[serde(skip)]
    pub certificate: Option<FpMatrix>,
    pub certificate_digest: Option<String>,
    pub hom_dim: usize,
    pub method: IsoMethod,
    /// False only for a negative verdict from a bounded random search.
    pub certain: bool,
}

impl IsoVerdict {
    fn negative(method: IsoMethod, hom_dim: usize, certain: bool) -> Self {
        IsoVerdict {
            isomorphic: false,
            certificate: None,
            certificate_digest: None,
            hom_dim,
            method,
            certain,
        }
    }
}

/// Isomorphism oracle: searches the hom-space for an invertible element.
///
/// Random `F_p`-combinations of a hom basis are tried first (seeded); when
/// `p^{dim Hom} ≤ 2^16` the whole space is scanned instead, which makes a
/// negative answer certain. Any certificate is checked by multiplication.
pub fn is_isomorphic(m: &FpGModule, n: &FpGModule, seed: u64) -> Result<IsoVerdict> {
    check_pair(m, n)?;
    if m.dim() != n.dim() {
        return Ok(IsoVerdict::negative(IsoMethod::DimensionMismatch, 0, true));
    }
    let p = m.p();
    let dim = m.dim();
    if dim == 0 {
        let empty = FpMatrix::zeros(p, 0, 0);
        return Ok(IsoVerdict {
            isomorphic: true,
            certificate_digest: Some(empty.digest()),
            certificate: Some(empty),
            hom_dim: 0,
            method: IsoMethod::ExhaustiveSearch,
            certain: true,
        });
    }
    // spin the side needing fewer generators; a map the other way is inverted
    let (sm, sn) = (spin(m), spin(n));
    let flipped = sn.generators < sm.generators;
    let (src, dst, sp) = if flipped { (n, m, sn) } else { (m, n, sm) };
    let (images, kernel) = hom_kernel(src, dst, &sp);
    let hom_dim = kernel.len();
    let combine = |coeffs: &[u64]| -> Vec<u64> {
        let mut x = vec![0u64; sp.generators * dst.dim()];
        for (v, &c) in kernel.iter().zip(coeffs) {
            if c == 0 {
                continue;
            }
            for (a, &b) in x.iter_mut().zip(v) {
                *a = (*a + c * b) % p;
            }
        }
        x
    };
    let finish = |h: FpMatrix, method: IsoMethod| -> Result<IsoVerdict> {
        let cert = if flipped {
            h.inverse().expect("tested invertible")
        } else {
            h
        };
        if !intertwines(&cert, m, n) || !cert.is_invertible() {
            return Err(Error::param("certificate failed verification"));
        }
        Ok(IsoVerdict {
            isomorphic: true,
            certificate_digest: Some(cert.digest()),
            certificate: Some(cert),
            hom_dim,
            method,
            certain: true,
        })
    };

    let exhaustive = (p as u128)
        .checked_pow(hom_dim as u32)
        .is_some_and(|c| c <= EXHAUSTIVE_LIMIT);
    if exhaustive {
        let total = (p as u128).pow(hom_dim as u32);
        let mut coeffs = vec![0u64; hom_dim];
        for idx in 1..total {
            let mut k = idx;
            for c in coeffs.iter_mut() {
                *c = (k % p as u128) as u64;
                k /= p as u128;
            }
            let h = materialise(&images, &combine(&coeffs), &sp, p, dst.dim());
            if h.is_invertible() {
                return finish(h, IsoMethod::ExhaustiveSearch);
            }
        }
        return Ok(IsoVerdict::negative(
            IsoMethod::ExhaustiveSearch,
            hom_dim,
            true,
        ));
    }

    // Isomorphic modules have dim Hom(M, N) = dim End(M) = dim End(N).
    let end_src = hom_kernel(src, src, &spin(src)).1.len();
    let end_dst = hom_kernel(dst, dst, &spin(dst)).1.len();
    if end_src != hom_dim || end_dst != hom_dim {
        return Ok(IsoVerdict::negative(
            IsoMethod::EndomorphismDimension,
            hom_dim,
            true,
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_TRIES {
        let coeffs: Vec<u64> = (0..hom_dim).map(|_| rng.gen_range(0..p)).collect();
        let h = materialise(&images, &combine(&coeffs), &sp, p, dst.dim());
        if h.is_invertible() {
            return finish(h, IsoMethod::RandomSearch);
        }
    }
    // Random points of End can be invertible with tiny probability when it has
    // many small simple factors; walk coordinates without ever losing rank.
    let basis: Vec<FpMatrix> = (0..hom_dim)
        .map(|j| {
            let mut e = vec![0u64; hom_dim];
            e[j] = 1;
            materialise(&images, &combine(&e), &sp, p, dst.dim())
        })
        .collect();
    for _ in 0..CLIMB_RESTARTS {
        let coeffs: Vec<u64> = (0..hom_dim).map(|_| rng.gen_range(0..p)).collect();
        let mut h = materialise(&images, &combine(&coeffs), &sp, p, dst.dim());
        let mut rank = h.rank();
        for _ in 0..CLIMB_STEPS_PER_DIM * hom_dim {
            if rank == dst.dim() {
                return finish(h, IsoMethod::RandomSearch);
            }
            let j = rng.gen_range(0..hom_dim);
            let step = basis[j].scale(rng.gen_range(1..p));
            let next = h.add(&step);
            let r = next.rank();
            if r >= rank {
                h = next;
                rank = r;
            }
        }
        if rank == dst.dim() {
            return finish(h, IsoMethod::RandomSearch);
        }
    }
    Ok(IsoVerdict::negative(
        IsoMethod::RandomSearch,
        hom_dim,
        false,
    ))
}
