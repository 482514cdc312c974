use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sumpoly::boolpoly::{BoolMonomial, BoolPoly, GfBoolPoly};
use sumpoly::descent::{descend, make_basis, BasisKind};
use sumpoly::ecurve::{CurveParams, Point};
use sumpoly::experiment::{run_experiment, ExperimentOptions};
use sumpoly::fieldalg::{FieldMatrix, FieldSpec};
use sumpoly::firstfall::{binomial, first_fall, macaulay_slice, subsets, GradedSystem};
use sumpoly::groebner::{groebner_log, is_groebner_basis, normal_form, Budget};
use sumpoly::mpoly::{det_poly, sylvester_resultant, MPoly, Monomial, PolyMatrix, Ring};
use sumpoly::semaev::semaev_poly;

fn gf(n: u32) -> FieldSpec {
    FieldSpec::default_for(n).unwrap()
}

fn random_mpoly(rng: &mut ChaCha8Rng, ring: Ring, terms: usize, max_exp: u32) -> MPoly {
    let spec = ring.spec();
    let t = (0..terms)
        .map(|_| {
            let e: Vec<u32> = (0..ring.slots()).map(|_| rng.gen_range(0..=max_exp)).collect();
            (Monomial::from_exponents(&e).unwrap(), rng.gen::<u64>() & spec.mask())
        })
        .collect();
    MPoly::from_terms(ring, t)
}

fn random_homogeneous(rng: &mut ChaCha8Rng, n: usize, d: usize) -> BoolPoly {
    let monos = subsets(n, d);
    loop {
        let p = BoolPoly::from_monomials(monos.iter().filter(|_| rng.gen_bool(0.5)).map(|&m| BoolMonomial(m)));
        if !p.is_zero() {
            return p;
        }
    }
}

fn random_system(rng: &mut ChaCha8Rng, n: usize, count: usize, max_deg: usize) -> Vec<BoolPoly> {
    (0..count)
        .map(|_| {
            let terms = rng.gen_range(1..6);
            BoolPoly::from_monomials((0..terms).map(|_| {
                let mut m = 0u64;
                for _ in 0..rng.gen_range(0..=max_deg) {
                    m |= 1 << rng.gen_range(0..n);
                }
                BoolMonomial(m)
            }))
        })
        .collect()
}

const FIELDS: [u32; 4] = [3, 5, 13, 17];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn field_axioms(k in 0usize..4, a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let f = gf(FIELDS[k]);
        let (a, b, c) = (f.element(a & f.mask()).unwrap(), f.element(b & f.mask()).unwrap(), f.element(c & f.mask()).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&b.add(&c).unwrap()).unwrap(), a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.add(&b).unwrap().add(&c).unwrap(), a.add(&b.add(&c).unwrap()).unwrap());
        if !a.is_zero() {
            prop_assert_eq!(a.mul(&a.inv().unwrap()).unwrap(), f.one());
        }
    }

    #[test]
    fn frobenius_is_an_automorphism(k in 0usize..4, a in any::<u64>(), b in any::<u64>(), j in 0u64..40) {
        let f = gf(FIELDS[k]);
        let (a, b) = (f.element(a & f.mask()).unwrap(), f.element(b & f.mask()).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().frobenius(j), a.frobenius(j).mul(&b.frobenius(j)).unwrap());
        prop_assert_eq!(a.add(&b).unwrap().frobenius(j), a.frobenius(j).add(&b.frobenius(j)).unwrap());
        prop_assert_eq!(a.frobenius(FIELDS[k] as u64), a);
    }

    #[test]
    fn determinant_is_alternating(seed in any::<u64>(), size in 2usize..5, i in 0usize..4, j in 0usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ring = Ring::new(gf(7), 2).unwrap();
        let (i, j) = (i % size, j % size);
        let rows: Vec<Vec<MPoly>> = (0..size).map(|_| (0..size).map(|_| random_mpoly(&mut rng, ring, 2, 2)).collect()).collect();
        let det = det_poly(&PolyMatrix::new(ring, rows.clone()).unwrap()).unwrap();
        let mut swapped = rows.clone();
        swapped.swap(i, j);
        prop_assert_eq!(det_poly(&PolyMatrix::new(ring, swapped).unwrap()).unwrap(), det);
        if i != j {
            let mut repeated = rows;
            repeated[j] = repeated[i].clone();
            prop_assert!(det_poly(&PolyMatrix::new(ring, repeated).unwrap()).unwrap().is_zero());
        }
    }

    #[test]
    fn resultant_vanishes_on_shared_factor(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ring = Ring::with_eliminand(gf(8), 2).unwrap();
        let lin = MPoly::parse(ring, "X^1 + x1^1*x2^1").unwrap();
        let u = random_mpoly(&mut rng, ring, 3, 2).add(&MPoly::var(ring, 1)).unwrap();
        let v = random_mpoly(&mut rng, ring, 3, 2).add(&MPoly::one(ring)).unwrap();
        let (f, g) = (lin.mul(&u).unwrap(), lin.mul(&v).unwrap());
        prop_assume!(!f.is_zero() && !g.is_zero());
        prop_assert!(sylvester_resultant(&f, &g).unwrap().is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn curve_group_law(k in 0usize..4, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = CurveParams::random(gf(FIELDS[k]), &mut rng);
        let (p, q, r) = (e.random_point(&mut rng), e.random_point(&mut rng), e.random_point(&mut rng));
        prop_assert_eq!(e.add(&p, &Point::Infinity).unwrap(), p);
        prop_assert!(e.add(&p, &e.neg(&p)).unwrap().is_infinity());
        prop_assert_eq!(e.add(&p, &q).unwrap(), e.add(&q, &p).unwrap());
        let left = e.add(&e.add(&p, &q).unwrap(), &r).unwrap();
        let right = e.add(&p, &e.add(&q, &r).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(e.neg(&p).x(), p.x());
    }

    #[test]
    fn summation_poly_is_symmetric(arity in 3usize..6, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = gf(13);
        let e = CurveParams::random(spec, &mut rng);
        let s = semaev_poly(arity, e.a6()).unwrap();
        let xs: Vec<_> = (0..arity).map(|_| spec.element(rng.gen::<u64>() & spec.mask()).unwrap()).collect();
        let mut perm = xs.clone();
        for i in (1..arity).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        prop_assert_eq!(s.eval(&xs).unwrap(), s.eval(&perm).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Evaluating the descended system at a bit assignment equals the
    /// coordinates of `S(x_1, .., x_m, c)` at the decoded subspace points.
    #[test]
    fn descent_commutes_with_evaluation(m in 2usize..4, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 13;
        let np = if m == 2 { 6 } else { 4 };
        let spec = gf(n);
        let e = CurveParams::random(spec, &mut rng);
        let s = semaev_poly(m + 1, e.a6()).unwrap();
        let basis = make_basis(spec, BasisKind::Random, np, &mut rng).unwrap();
        let c = e.random_point(&mut rng).x().unwrap();
        let sys = descend(&s, &basis, c).unwrap();
        prop_assert_eq!(sys.polys.len(), n as usize);
        let nv = sys.num_vars();
        prop_assert_eq!(nv, m * np);
        prop_assert!(sys.polys.iter().all(|p| nv == 64 || p.support() >> nv == 0));
        for _ in 0..50 {
            let a = rng.gen::<u64>() & ((1u64 << nv) - 1);
            let mut xs = sys.decode(a).into_iter().map(|v| spec.element(v).unwrap()).collect::<Vec<_>>();
            xs.push(c);
            let value = s.eval(&xs).unwrap().value();
            let bits: u64 = sys.polys.iter().enumerate().map(|(k, p)| (p.eval(a) as u64) << k).sum();
            prop_assert_eq!(bits, value);
        }
    }

    #[test]
    fn slice_ranks_bounded_and_injective_before_fall(seed in any::<u64>(), n in 3usize..9, d in 1usize..3, r in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gens: Vec<BoolPoly> = (0..r).map(|_| random_homogeneous(&mut rng, n, d)).collect();
        let g = GradedSystem::new(n, &gens).unwrap();
        let report = first_fall(&g, None);
        for s in &report.slices {
            prop_assert!((s.rank as u64) <= s.rows.min(s.cols));
            prop_assert_eq!(s.cols, binomial(n, s.j as usize));
            if Some(s.j) != report.d_ff {
                prop_assert_eq!(s.rank as u64, s.rows - s.triv_syz as u64);
            }
        }
        if let Some(j) = report.d_ff {
            prop_assert_eq!(report.slices.last().map(|s| s.j), Some(j));
        }
    }

    #[test]
    fn groebner_sound_and_deterministic(seed in any::<u64>(), n in 3usize..10, count in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let input = random_system(&mut rng, n, count, 3);
        prop_assume!(input.iter().any(|p| !p.is_zero()));
        let a = groebner_log(&input, n, None, Budget::default()).unwrap();
        prop_assert!(!a.budget_exhausted);
        prop_assert!(is_groebner_basis(&a.basis));
        for f in &input {
            prop_assert!(normal_form(f, &a.basis).is_zero());
        }
        for x in 0..1u64 << n {
            if input.iter().all(|f| !f.eval(x)) {
                prop_assert!(a.basis.iter().all(|b| !b.eval(x)));
            }
        }
        let b = groebner_log(&input, n, None, Budget::default()).unwrap();
        prop_assert_eq!(a.log, b.log);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn records_respect_the_bound_and_reproduce(seed in any::<u64>(), m in 2usize..4) {
        let (n, np) = if m == 2 { (12, 6) } else { (13, 5) };
        let opts = ExperimentOptions::default();
        let a = run_experiment(m, n, np, seed, &opts).unwrap();
        prop_assert_eq!(a.bound as usize, m * (m - 1) + 1);
        prop_assert!(a.within_bound());
        if let Some(w) = &a.witness {
            prop_assert!(w.holds());
        }
        let b = run_experiment(m, n, np, seed, &opts).unwrap();
        prop_assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}

/// Macaulay slice and trivial syzygies over GF(2^e) after a random
/// invertible change of generators.
fn extension_first_fall(g: &GradedSystem, e: u32, rng: &mut ChaCha8Rng) -> Option<u32> {
    let spec = gf(e);
    let r = g.r();
    let n = g.num_vars;
    let d = g.d;
    let a = loop {
        let mut a = FieldMatrix::zeros(spec, r, r);
        for i in 0..r {
            for j in 0..r {
                a.set_raw(i, j, rng.gen::<u64>() & spec.mask());
            }
        }
        if a.rank() == r {
            break a;
        }
    };
    let lifted: Vec<GfBoolPoly> = g.h.iter().map(|h| GfBoolPoly::from_bool(spec, h)).collect();
    let gens: Vec<GfBoolPoly> = (0..r)
        .map(|i| (0..r).fold(GfBoolPoly::zero(spec), |acc, j| acc.add(&lifted[j].scale(a.get_raw(i, j))).unwrap()))
        .collect();
    for j in d + 1..=(2 * d).min(n as u32) {
        let cols = subsets(n, j as usize);
        let col = |m: u64| cols.binary_search(&m).unwrap();
        let us = subsets(n, (j - d) as usize);
        let mut mac = FieldMatrix::zeros(spec, r * us.len(), cols.len());
        for (i, h) in gens.iter().enumerate() {
            for (k, &u) in us.iter().enumerate() {
                for &(mask, c) in h.terms() {
                    if mask & u == 0 {
                        mac.set_raw(i * us.len() + k, col(mask | u), c);
                    }
                }
            }
        }
        let rows = r * us.len();
        let triv = if j < 2 * d {
            0
        } else {
            let ws = subsets(n, (j - 2 * d) as usize);
            let pos = |i: usize, m: u64| i * us.len() + us.binary_search(&m).unwrap();
            let mut t = FieldMatrix::zeros(spec, r * (r + 1) / 2 * ws.len(), rows);
            let mut row = 0;
            for x in 0..r {
                for y in x..r {
                    for &w in &ws {
                        let mut put = |target: usize, h: &GfBoolPoly| {
                            for &(mask, c) in h.terms() {
                                if mask & w == 0 {
                                    let p = pos(target, mask | w);
                                    t.set_raw(row, p, t.get_raw(row, p) ^ c);
                                }
                            }
                        };
                        put(x, &gens[y]);
                        if x != y {
                            put(y, &gens[x]);
                        }
                        row += 1;
                    }
                }
            }
            t.rank()
        };
        if mac.rank() < rows - triv {
            return Some(j);
        }
    }
    None
}

#[test]
fn first_fall_unchanged_over_extensions() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    let mut done = 0;
    let mut falls = 0;
    while done < 20 {
        let n = rng.gen_range(3..=7usize);
        let d = rng.gen_range(1..=2usize);
        let r = rng.gen_range(1..=3usize);
        let gens: Vec<BoolPoly> = (0..r).map(|_| random_homogeneous(&mut rng, n, d)).collect();
        let g = GradedSystem::new(n, &gens).unwrap();
        if g.r() < r {
            continue;
        }
        let over_f2 = first_fall(&g, None).d_ff;
        for e in [2, 5, 8] {
            assert_eq!(extension_first_fall(&g, e, &mut rng), over_f2, "n={n} d={d} r={r} e={e}");
        }
        // The F2 slice itself has the same rank read as a GF(2^8) matrix.
        let mac = macaulay_slice(&g, (g.d + 1).min(n as u32));
        let mut lifted = FieldMatrix::zeros(gf(8), mac.rows(), mac.cols());
        for i in 0..mac.rows() {
            for c in mac.row_support(i) {
                lifted.set_raw(i, c, 1);
            }
        }
        assert_eq!(lifted.rank(), mac.rank());
        falls += over_f2.is_some() as usize;
        done += 1;
    }
    assert!(falls > 0 && falls < 20, "{falls} of 20 instances fall");
}
