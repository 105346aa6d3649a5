use std::collections::HashSet;

use iwasawa_core::lambda_mod::koszul::koszul_complex_of;
use iwasawa_core::lambda_mod::{
    exact_sequence_check, ext1_elementary, koszul_cohomology_all as cohomology_all, lattice_e,
    CohomologyGroup, FlatModule, Flavor, Lattice, ModulePresentation, Poly, Sequence, TruncAlgebra,
};
use iwasawa_core::modarith::TruncatedSeries;
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_poly(rng: &mut ChaCha8Rng, r: usize, max_deg: u32) -> Poly {
    let terms: Vec<(i64, Vec<u32>)> = (0..rng.gen_range(1..=3))
        .map(|_| {
            let e = (0..r).map(|_| rng.gen_range(0..=max_deg)).collect();
            (rng.gen_range(-4..=4), e)
        })
        .collect();
    Poly::from_terms(r, &terms)
}

/// A finite module: every generator is killed by `p^a` and by `T_i^b`, plus
/// random extra relations.
fn random_finite_module(rng: &mut ChaCha8Rng, r: usize) -> ModulePresentation {
    let alg = TruncAlgebra::new(3, 3, r, 6).unwrap();
    let g = rng.gen_range(1..=2);
    let mut rels = Vec::new();
    for j in 0..g {
        let unit = |f: Poly| {
            let mut v = vec![Poly::zero(r); g];
            v[j] = f;
            v
        };
        rels.push(unit(Poly::constant(r, 3i64.pow(rng.gen_range(1..=2)))));
        for i in 0..r {
            let b = rng.gen_range(1..=2);
            let mut e = vec![0; r];
            e[i] = b;
            rels.push(unit(Poly::from_terms(r, &[(1, e)])));
        }
    }
    for _ in 0..rng.gen_range(0..=2) {
        rels.push((0..g).map(|_| random_poly(rng, r, 2)).collect());
    }
    ModulePresentation::new(alg, g, rels).unwrap()
}

#[test]
fn exact_sequence_on_random_finite_modules() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut checked = 0;
    while checked < 20 {
        let r = 1 + checked % 2;
        let m = random_finite_module(&mut rng, r);
        if m.certify_finite().is_none() {
            continue;
        }
        for flavor in [Flavor::Omega, Flavor::Nu] {
            for n in 1..=2 {
                let x = Sequence::family(r, flavor, n, false);
                for i in 0..=r + 1 {
                    let c = exact_sequence_check(&x, &m, i).unwrap();
                    assert!(c.ok, "{flavor:?} n={n} i={i}: {c:?} for {m:?}");
                }
            }
        }
        checked += 1;
    }
}

/// Brute-force `H^i` over `F_p` for a module killed by `p`: enumerate the
/// finite cochain groups and count kernels and images.
fn brute_force_ranks(x: &[TruncatedSeries], module: &FlatModule) -> Vec<usize> {
    // only for X = F_p, where every element acts through its constant term
    assert_eq!(module.log_size(), 1);
    let len = x.len();
    let k = koszul_complex_of(x);
    let p = module.algebra.p;
    let dims: Vec<usize> = (0..=len).map(|i| k.rank(i)).collect();
    // cochain matrices over F_p
    let mats: Vec<Vec<Vec<u64>>> = (0..len)
        .map(|i| {
            let d = &k.differentials[i + 1];
            (0..dims[i])
                .map(|ii| {
                    (0..dims[i + 1])
                        .map(|jj| d[jj][ii].constant_term() % p)
                        .collect()
                })
                .collect()
        })
        .collect();
    let rank_of = |m: &Vec<Vec<u64>>| -> usize {
        let mut seen = HashSet::new();
        let rows = m.len();
        let cols = m.first().map_or(0, Vec::len);
        for code in 0..p.pow(rows as u32) {
            let mut v = vec![0u64; cols];
            let mut c = code;
            for row in m {
                let a = c % p;
                c /= p;
                for (j, &x) in row.iter().enumerate() {
                    v[j] = (v[j] + a * x) % p;
                }
            }
            seen.insert(v);
        }
        (seen.len() as f64).log(p as f64).round() as usize
    };
    let ranks: Vec<usize> = mats.iter().map(rank_of).collect();
    (0..=len)
        .map(|i| {
            let out = if i < len { ranks[i] } else { 0 };
            let inc = if i > 0 { ranks[i - 1] } else { 0 };
            dims[i] - out - inc
        })
        .collect()
}

#[test]
fn residue_field_ranks_match_brute_force() {
    let alg = TruncAlgebra::new(3, 3, 1, 6).unwrap();
    let ideal = [Poly::constant(1, 3), Poly::var(1, 0)];
    let m = ModulePresentation::cyclic(alg, &ideal).unwrap();
    let x = Sequence::custom(1, ideal.to_vec()).unwrap();
    let flat = m.certify_finite().unwrap();
    let expected = brute_force_ranks(&x.series(&alg), &flat);
    let got: Vec<usize> = cohomology_all(&x, &m)
        .unwrap()
        .iter()
        .map(CohomologyGroup::rank)
        .collect();
    assert_eq!(got, expected);
    assert_eq!(got, vec![1, 2, 1]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]
    #[test]
    fn koszul_differentials_square_to_zero(
        seed in any::<u64>(),
        r in 1usize..=2,
        full in any::<bool>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alg = TruncAlgebra::new(5, 3, r, 5).unwrap();
        let ring = alg.ring();
        let basis = alg.basis();
        let len = if full { r + 1 } else { r.max(2) };
        let x: Vec<TruncatedSeries> = (0..len)
            .map(|_| {
                let coeffs = (0..basis.len()).map(|_| rng.gen_range(0..ring.modulus())).collect();
                TruncatedSeries::from_coeffs(ring, &basis, coeffs)
            })
            .collect();
        prop_assert!(koszul_complex_of(&x).is_complex());
    }
}

/// `O/π^m` for `O = Z_3[ζ_3]`, `π = ζ_3 - 1`, `e = 2`, as `Z/3`-exponents.
fn ramified_quotient(m: u32, e: u32) -> Vec<u32> {
    let (q, s) = (m / e, m % e);
    let mut out = vec![q + 1; s as usize];
    out.extend(vec![q; (e - s) as usize]);
    out.retain(|&x| x > 0);
    out.sort_unstable();
    out
}

#[test]
fn ext_self_duality_hand_oracles() {
    let (prec, cap) = (3u32, 12u32);
    for r in [1usize, 2] {
        let alg = TruncAlgebra::new(3, prec, r, cap).unwrap();
        let ring = alg.ring();
        let basis = alg.basis();
        let t1 = TruncatedSeries::variable(ring, &basis, 0);
        let three = TruncatedSeries::constant(ring, &basis, 3);
        let nu1 = TruncatedSeries::nu(ring, &basis, 1, 0);
        // per T_2-degree b the T_1-part has degree cap cap - b
        let per_layer = |f: &dyn Fn(u32) -> Vec<u32>| -> Vec<u32> {
            let mut out: Vec<u32> = if r == 1 {
                f(cap)
            } else {
                (0..cap).flat_map(|b| f(cap - b)).collect()
            };
            out.sort_unstable();
            out
        };
        let cases: Vec<(TruncatedSeries, Vec<u32>)> = vec![
            (three.clone(), vec![1; alg.dim()]),
            (
                t1.clone(),
                if r == 1 {
                    vec![prec]
                } else {
                    vec![prec; cap as usize]
                },
            ),
            (t1.sub(&three).unwrap(), per_layer(&|m| vec![prec.min(m)])),
            (nu1, per_layer(&|m| ramified_quotient(m.min(prec * 2), 2))),
        ];
        for (f, expected) in cases {
            let ext = ext1_elementary(&f).unwrap();
            let quotient = FlatModule::new(alg, 1, &[vec![f.clone()]]).invariants();
            assert_eq!(ext.exponents, quotient, "r={r} f={f}");
            assert_eq!(ext.exponents, expected, "r={r} f={f}");
        }
    }
}

fn det_i128(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i128>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, &v)| v)
                        .collect()
                })
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] * det_i128(&minor)
        })
        .sum()
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// `Z^r / H` is the subgroup of `(Z/d)^r` spanned by the rows of `adj(B)`,
/// `d = |det B|`; enumerate it and read off its order and exponent.
fn brute_force_quotient(basis: &[Vec<i64>]) -> (i128, i128) {
    let r = basis.len();
    let b: Vec<Vec<i128>> = basis
        .iter()
        .map(|row| row.iter().map(|&x| x as i128).collect())
        .collect();
    let d = det_i128(&b).abs();
    let adj: Vec<Vec<i128>> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    let minor: Vec<Vec<i128>> = b
                        .iter()
                        .enumerate()
                        .filter(|&(k, _)| k != j)
                        .map(|(_, row)| {
                            row.iter()
                                .enumerate()
                                .filter(|&(c, _)| c != i)
                                .map(|(_, &v)| v)
                                .collect()
                        })
                        .collect();
                    let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                    (sign * det_i128(&minor)).rem_euclid(d)
                })
                .collect()
        })
        .collect();
    let mut seen: HashSet<Vec<i128>> = HashSet::new();
    let mut frontier = vec![vec![0i128; r]];
    seen.insert(vec![0; r]);
    while let Some(v) = frontier.pop() {
        for g in &adj {
            let w: Vec<i128> = v.iter().zip(g).map(|(a, b)| (a + b) % d).collect();
            if seen.insert(w.clone()) {
                frontier.push(w);
            }
        }
    }
    let exponent = seen
        .iter()
        .map(|v| {
            v.iter().fold(1i128, |acc, &x| {
                let ord = d / gcd(d, x);
                acc / gcd(acc, ord) * ord
            })
        })
        .max()
        .unwrap();
    (seen.len() as i128, exponent)
}

#[test]
fn lattice_invariant_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut tested = 0;
    while tested < 150 {
        let r = rng.gen_range(1..=3);
        let basis: Vec<Vec<i64>> = (0..r)
            .map(|_| (0..r).map(|_| rng.gen_range(-30..=30)).collect())
            .collect();
        let b128: Vec<Vec<i128>> = basis
            .iter()
            .map(|row| row.iter().map(|&x| x as i128).collect())
            .collect();
        let d = det_i128(&b128).abs();
        if d == 0 || d > 10_000 {
            continue;
        }
        let (order, exponent) = brute_force_quotient(&basis);
        let l = lattice_e(&Lattice::new(basis.clone()).unwrap()).unwrap();
        assert_eq!(l.index, BigInt::from(order), "{basis:?}");
        assert_eq!(l.exponent, BigInt::from(exponent), "{basis:?}");
        assert_eq!(&l.e * &l.exponent, l.index);
        tested += 1;
    }
}

#[test]
fn lattice_invariant_is_basis_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let basis: Vec<Vec<i64>> = (0..3)
            .map(|_| (0..3).map(|_| rng.gen_range(-9..=9)).collect())
            .collect();
        let Ok(base) = lattice_e(&Lattice::new(basis.clone()).unwrap()) else {
            continue;
        };
        // elementary unimodular row operations
        let mut moved = basis.clone();
        for _ in 0..5 {
            let (i, j) = (rng.gen_range(0..3), rng.gen_range(0..3));
            if i != j {
                let k = rng.gen_range(-3..=3);
                let row = moved[j].clone();
                for (a, b) in moved[i].iter_mut().zip(row) {
                    *a += k * b;
                }
            }
        }
        assert_eq!(lattice_e(&Lattice::new(moved).unwrap()).unwrap(), base);
    }
}

#[test]
fn lattice_chain_grows() {
    let mut last = BigInt::from(0);
    for n in 1..=6u32 {
        let l = lattice_e(&Lattice::scaled_standard(2, 3i64.pow(n))).unwrap();
        assert_eq!(l.e, BigInt::from(3i64.pow(n)));
        assert!(l.e > last);
        last = l.e;
    }
}
