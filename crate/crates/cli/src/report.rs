//! Markdown regression report over the reference examples.

use std::fmt::Write as _;

use toricsyz_core::koszul::*;
use toricsyz_core::semigroup::is_normal;
use toricsyz_core::{LatticePoint, LatticePolytope};

use crate::commands::{describe, CliError};

struct Row {
    example: &'static str,
    claim: &'static str,
    computed: String,
    ok: bool,
}

fn polytope(v: &[&[i64]]) -> Result<LatticePolytope, CliError> {
    let pts: Vec<LatticePoint> = v.iter().map(|c| LatticePoint(c.to_vec())).collect();
    Ok(LatticePolytope::from_vertices(&pts)?)
}

fn verdicts(p: &LatticePolytope, c: usize, pmax: usize, slope: usize) -> Result<Vec<NpVerdict>, CliError> {
    let ring = build_ring(p, c, slope + 1)?;
    Ok(np_level(&ring, pmax, slope, &KoszulConfig::default())?)
}

fn summary(v: &[NpVerdict]) -> String {
    v.iter()
        .map(|x| format!("N_{}: {}", x.p, describe(&x.status)))
        .collect::<Vec<_>>()
        .join("; ")
}

/// Holds `(N_q)` for `q < p` and fails `(N_p)`.
fn sharp_at(v: &[NpVerdict], p: usize) -> bool {
    v[..p].iter().all(|x| !x.fails()) && v[p].fails()
}

pub fn paper() -> Result<String, CliError> {
    let cubic = polytope(&[&[1, 0], &[0, 1], &[1, 1], &[2, 2]])?;
    let simplex = polytope(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[1, 1, 2]])?;
    let mut rows = Vec::new();

    let v = verdicts(&cubic, 1, 1, 4)?;
    rows.push(Row {
        example: "cubic surface, L",
        claim: "ideal generated by one cubic; L fails (N_1)",
        ok: sharp_at(&v, 1) && v[1].status == NpStatus::Fails { i: 1, j: 3, beta: 1 },
        computed: summary(&v),
    });

    let v = verdicts(&cubic, 2, 4, 4)?;
    rows.push(Row {
        example: "cubic surface, L^2",
        claim: "satisfies (N_3) but not (N_4)",
        ok: sharp_at(&v, 4),
        computed: summary(&v),
    });

    let rep = is_normal(&simplex, None);
    let ring = build_ring(&simplex, 1, 3)?;
    let beta02 = koszul_betti(&ring, 0, 2, &KoszulConfig::exact())?;
    rows.push(Row {
        example: "(1,1,2)-simplex, L",
        claim: "S -> R not onto; (1,1,1) in 2P is not a sum of two points of P",
        ok: !rep.normal
            && rep.witness.as_ref().is_some_and(|w| w.point == LatticePoint(vec![1, 1, 1]) && w.m == 2)
            && beta02 > 0,
        computed: format!(
            "normal: {}; witness: {:?}; beta_{{0,2}} = {beta02}",
            rep.normal,
            rep.witness.as_ref().map(|w| (&w.point, w.m))
        ),
    });

    let v = verdicts(&simplex, 2, 2, 5)?;
    rows.push(Row {
        example: "(1,1,2)-simplex, L^2",
        claim: "satisfies (N_1) but not (N_2)",
        ok: sharp_at(&v, 2),
        computed: summary(&v),
    });

    let mut out = String::from("# Reference example regression\n\n");
    let _ = writeln!(out, "Engine: `{}`\n", toricsyz_core::ENGINE_VERSION);
    out.push_str("| Example | Claim | Computed | Match |\n|---|---|---|---|\n");
    for r in &rows {
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} |",
            r.example,
            r.claim,
            r.computed,
            if r.ok { "yes" } else { "NO" }
        );
    }
    let matched = rows.iter().filter(|r| r.ok).count();
    let _ = writeln!(out, "\n{matched}/{} claims reproduced.", rows.len());
    if matched != rows.len() {
        return Err(toricsyz_core::Error::Consistency(format!("report mismatch:\n{out}")).into());
    }
    Ok(out)
}
