#![allow(dead_code)]

use toricsyz_core::corpus::generate_corpus;
use toricsyz_core::{LatticePoint, LatticePolytope};

/// 25 polygons in [0,3]^2 and 25 polytopes in [0,2]^3.
pub fn corpus() -> Vec<LatticePolytope> {
    let mut c = generate_corpus(11, 25, 2, 3).unwrap();
    c.extend(generate_corpus(12, 25, 3, 2).unwrap());
    c
}

pub fn poly(v: &[&[i64]]) -> LatticePolytope {
    let pts: Vec<LatticePoint> = v.iter().map(|c| LatticePoint(c.to_vec())).collect();
    LatticePolytope::from_vertices(&pts).unwrap()
}

pub fn unit_triangle() -> LatticePolytope {
    poly(&[&[0, 0], &[1, 0], &[0, 1]])
}

pub fn cubic_triangle() -> LatticePolytope {
    poly(&[&[1, 0], &[0, 1], &[2, 2]])
}

pub fn singular_simplex() -> LatticePolytope {
    poly(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[1, 1, 2]])
}

pub fn unit_simplex(n: usize) -> LatticePolytope {
    let mut v = vec![vec![0i64; n]];
    for i in 0..n {
        let mut e = vec![0i64; n];
        e[i] = 1;
        v.push(e);
    }
    let pts: Vec<LatticePoint> = v.into_iter().map(LatticePoint).collect();
    LatticePolytope::from_vertices(&pts).unwrap()
}
