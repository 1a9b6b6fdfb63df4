mod common;

use common::*;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use toricsyz_core::cohomology::*;
use toricsyz_core::ehrhart::*;
use toricsyz_core::koszul::*;
use toricsyz_core::scalar::lift;
use toricsyz_core::semigroup::*;
use toricsyz_core::{LatticePoint, LatticePolytope, Rational};

fn random_unimodular(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<i64>> {
    let mut u: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    for _ in 0..6 {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a == b {
            u.swap(a, (a + 1) % n);
            continue;
        }
        let q = rng.gen_range(-1..=1);
        for k in 0..n {
            u[a][k] += q * u[b][k];
        }
    }
    u
}

fn transform(p: &LatticePolytope, u: &[Vec<i64>], shift: &[i64]) -> LatticePolytope {
    let pts: Vec<LatticePoint> = p
        .vertices()
        .iter()
        .map(|v| {
            LatticePoint(
                u.iter()
                    .zip(shift)
                    .map(|(row, t)| row.iter().zip(&v.0).map(|(a, b)| a * b).sum::<i64>() + t)
                    .collect(),
            )
        })
        .collect();
    LatticePolytope::from_vertices(&pts).unwrap()
}

#[test]
fn pick_formula_on_polygons() {
    for p in corpus().iter().filter(|p| p.dim() == 2) {
        let h = ehrhart_polynomial(p);
        let interior = p.interior_lattice_points(1).len() as i64;
        let boundary = p.count_points(1) as i64 - interior;
        let area = h.coeffs()[2].clone();
        assert_eq!(area, lift::<Rational>(interior) + Rational::new(boundary.into(), 2.into()) - Rational::one());
    }
}

#[test]
fn ehrhart_invariants_on_corpus() {
    for p in corpus() {
        let n = p.dim();
        let h = ehrhart_polynomial(&p);
        assert!(reciprocity_check(&p, 5), "{:?}", p.vertices());
        assert_eq!(h.eval(0), Rational::one());
        for d in n + 1..=n + 2 {
            assert_eq!(h.eval(d as i64), lift(p.count_points(d) as i64));
        }
        let vol = h.normalized_volume();
        assert!(vol.is_integer() && vol > Rational::zero());
        assert_eq!(r_of_polytope(&p).unwrap(), integer_root_count(&h).r);
    }
}

#[test]
fn hull_is_idempotent() {
    for p in corpus() {
        let again = LatticePolytope::from_vertices(p.vertices()).unwrap();
        assert_eq!(again, p);
    }
}

#[test]
fn normality_is_unimodular_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut polys = corpus();
    polys.push(singular_simplex());
    for p in polys {
        let n = p.dim();
        let u = random_unimodular(&mut rng, n);
        let shift: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
        let q = transform(&p, &u, &shift);
        assert_eq!(is_normal(&p, None).normal, is_normal(&q, None).normal);
        assert_eq!(ehrhart_polynomial(&p), ehrhart_polynomial(&q));
    }
}

#[test]
fn witnesses_are_genuine() {
    let mut polys = corpus();
    polys.push(singular_simplex());
    let mut seen = 0;
    for p in polys {
        let rep = is_normal(&p, None);
        assert_eq!(rep.normal, rep.witness.is_none());
        if let Some(w) = rep.witness {
            seen += 1;
            assert!(p.contains(w.m, &w.point).unwrap());
            assert_eq!(decompose(&p, &w.point, w.m).unwrap(), None);
        } else {
            for m in 2..=rep.checked_up_to {
                for x in p.lattice_points(m).iter().step_by(7) {
                    let parts = decompose(&p, x, m).unwrap().expect("normal polytope point");
                    let sum = parts.iter().fold(LatticePoint::origin(p.dim()), |a, b| a.add(b));
                    assert_eq!(&sum, x);
                }
            }
        }
    }
    assert!(seen >= 1);
}

#[test]
fn n0_agrees_with_normality() {
    let config = KoszulConfig::default();
    let mut polys = corpus();
    polys.push(singular_simplex());
    for p in polys {
        let slope = default_max_slope(&p);
        let ring = build_ring(&p, 1, slope + 1).unwrap();
        let v = np_level(&ring, 0, slope, &config).unwrap();
        assert_eq!(!v[0].fails(), is_normal(&p, None).normal, "{:?}", p.vertices());
    }
}

#[test]
fn euler_characteristic_is_ehrhart() {
    for p in corpus() {
        let h = ehrhart_polynomial(&p);
        for d in -5..=5i64 {
            assert_eq!(lift::<Rational>(profile_ample_power(&p, d).euler_characteristic() as i64), h.eval(d));
        }
    }
}

#[test]
fn product_engine_matches_simplex() {
    for n in 1..=3usize {
        let s = unit_simplex(n);
        for a in -6..=6i64 {
            for i in 0..=n {
                assert_eq!(coh_dim_product(&[n], &[a], i).unwrap(), coh_dim_ample_power(&s, a, i));
                assert_eq!(coh_dim_projective_space(n, a, i), coh_dim_ample_power(&s, a, i));
            }
        }
    }
}

#[test]
fn regularity_propagates_upward() {
    let mut polys = corpus();
    polys.extend([unit_triangle(), cubic_triangle(), singular_simplex()]);
    for p in polys {
        for m in -2..=3i64 {
            if !is_regular_single(&p, m) {
                continue;
            }
            for u in 1..=3 {
                assert!(is_regular_single(&p, m + u));
            }
            if m >= 0 {
                let ring = build_ring(&p, 1, m as usize + 1).unwrap();
                assert!(ring.multiplication_surjective(m as usize, 1).unwrap());
            }
        }
    }
}

#[test]
fn predictions_hold_where_computable() {
    let config = KoszulConfig::default();
    let mut checked = 0;
    for p in [unit_triangle(), cubic_triangle(), singular_simplex(), unit_simplex(3)] {
        for m1 in 0..=3u64 {
            for lvl in 1..=2usize {
                let plan = MainTheoremPlan::with_tail(vec![m1], vec![1], lvl).unwrap();
                let Some(pred) = predict_single(&p, &plan).unwrap() else {
                    continue;
                };
                let c = pred.twist[0] as usize;
                let slope = p.dim();
                let ring = build_ring(&p, c, slope + 1).unwrap();
                match np_level(&ring, pred.p, slope, &config) {
                    Ok(v) => {
                        checked += 1;
                        assert!(v.iter().all(|x| !x.fails()), "{:?} c={c}: {v:?}", p.vertices());
                    }
                    Err(toricsyz_core::Error::WindowExceeded(_)) => {}
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }
    assert!(checked >= 6);
}

#[test]
fn tables_ignore_vertex_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let config = KoszulConfig::default();
    for p in corpus().into_iter().step_by(5) {
        let mut verts = p.vertices().to_vec();
        verts.shuffle(&mut rng);
        let q = LatticePolytope::from_vertices(&verts).unwrap();
        let a = betti_table(&build_ring(&p, 1, 3).unwrap(), 2, 2, &config).unwrap();
        let b = betti_table(&build_ring(&q, 1, 3).unwrap(), 2, 2, &config).unwrap();
        assert_eq!(a, b);
        assert_eq!(ehrhart_polynomial(&p), ehrhart_polynomial(&q));
    }
}

#[test]
fn tables_are_well_formed() {
    let config = KoszulConfig::default();
    for p in corpus().into_iter().filter(|p| p.dim() == 2).take(8) {
        let ring = build_ring(&p, 1, 3).unwrap();
        let t = betti_table(&ring, ring.dim_v(), 2, &config).unwrap();
        assert!(k_polynomial_checksum(&t), "{:?}", p.vertices());
        for i in 1..=ring.dim_v() {
            assert_eq!(t.get(i, i), 0);
        }
        let v = np_from_table(&t, ring.dim_v()).unwrap();
        for w in v.windows(2) {
            assert!(!w[0].fails() || w[1].fails());
        }
        for i in 2..=ring.dim_v().min(4) {
            for k in 0..=1 {
                assert!(check_d_squared(&ring, i, k).unwrap());
            }
        }
    }
}
