use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::json;

use toricsyz_core::cohomology::*;
use toricsyz_core::corpus::generate_corpus;
use toricsyz_core::criteria::*;
use toricsyz_core::ehrhart::*;
use toricsyz_core::koszul::*;
use toricsyz_core::linalg::RankMethod;
use toricsyz_core::semigroup::is_normal;
use toricsyz_core::{Error, LatticePolytope, PolytopeInput};

use crate::{cache, report, Command, Format};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Input(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Core(e) => match e {
                Error::WindowExceeded(_) | Error::Overflow(_) => 3,
                Error::Consistency(_) => 4,
                _ => 2,
            },
        }
    }
}

type Out = Result<String, CliError>;

pub fn load_polytope(path: &Path) -> Result<LatticePolytope, CliError> {
    let raw = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let input: PolytopeInput =
        serde_json::from_str(&raw).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(input.to_polytope()?)
}

fn to_json<T: Serialize>(v: &T) -> Out {
    let mut s = serde_json::to_string(v).map_err(|e| CliError::Input(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn polytope_path(cmd: &Command) -> Option<&Path> {
    match cmd {
        Command::Count(a) => Some(&a.poly.polytope),
        Command::Ehrhart(a) | Command::Roots(a) => Some(&a.polytope),
        Command::Normality(a) => Some(&a.poly.polytope),
        Command::Betti(a) => Some(&a.poly.polytope),
        Command::Np(a) => Some(&a.poly.polytope),
        Command::Cohomology(a) => a.polytope.as_deref(),
        Command::Regularity(a) => a.polytope.as_deref(),
        Command::Predict(a) => a.polytope.as_deref(),
        Command::Criteria(a) => a.polytope.as_deref(),
        Command::Corpus(_) | Command::Report(_) => None,
    }
}

pub fn run(cmd: &Command, format: Format, cache_dir: Option<&Path>) -> Out {
    match cmd {
        Command::Corpus(a) => return corpus(a.seed, a.count, a.dim, a.bound, &a.out),
        Command::Report(_) => return report::paper(),
        _ => {}
    }
    let poly = polytope_path(cmd).map(load_polytope).transpose()?;
    let key = cache::key(
        &serde_json::to_string(&json!({
            "command": cmd,
            "format": format,
            "polytope": poly.as_ref().map(LatticePolytope::to_input),
        }))
        .map_err(|e| CliError::Input(e.to_string()))?,
    );
    if let Some(hit) = cache_dir.and_then(|d| cache::load(d, &key)) {
        return Ok(hit);
    }
    let out = dispatch(cmd, format, poly.as_ref())?;
    if let Some(dir) = cache_dir {
        if let Err(e) = cache::store(dir, &key, &out) {
            eprintln!("warning: cache write failed: {e}");
        }
    }
    Ok(out)
}

fn need<'a>(poly: Option<&'a LatticePolytope>) -> Result<&'a LatticePolytope, CliError> {
    poly.ok_or_else(|| CliError::Input("a polytope file is required".into()))
}

fn dispatch(cmd: &Command, format: Format, poly: Option<&LatticePolytope>) -> Out {
    match cmd {
        Command::Count(a) => count(need(poly)?, a.d, format),
        Command::Ehrhart(_) => ehrhart(need(poly)?, format),
        Command::Roots(_) => roots(need(poly)?, format),
        Command::Normality(a) => {
            let rep = is_normal(need(poly)?, a.mmax);
            match format {
                Format::Json => to_json(&rep),
                Format::Text => Ok(match &rep.witness {
                    None => format!("normal (checked m <= {})\n", rep.checked_up_to),
                    Some(w) => format!("not normal: {:?} in {}P is not a sum of {} points of P\n", w.point, w.m, w.m),
                }),
            }
        }
        Command::Betti(a) => betti(need(poly)?, a, format),
        Command::Np(a) => np(need(poly)?, a, format),
        Command::Cohomology(a) => {
            let profile = match (&a.product.product, poly) {
                (Some(n), None) => profile_product(n, &a.twist)?,
                (None, Some(p)) => profile_ample_power(p, single_twist(&a.twist)?),
                _ => return Err(either_or()),
            };
            match format {
                Format::Json => to_json(&profile),
                Format::Text => {
                    let mut s = String::new();
                    for (i, d) in profile.dims.iter().enumerate() {
                        let _ = writeln!(s, "h^{i} = {d}");
                    }
                    let _ = writeln!(s, "chi = {}", profile.euler_characteristic());
                    Ok(s)
                }
            }
        }
        Command::Regularity(a) => {
            let regular = match (&a.product.product, poly) {
                (Some(n), None) => is_regular_product(n, &a.twist)?,
                (None, Some(p)) => is_regular_single(p, single_twist(&a.twist)?),
                _ => return Err(either_or()),
            };
            match format {
                Format::Json => to_json(&json!({ "twist": a.twist, "regular": regular })),
                Format::Text => Ok(format!("{}\n", if regular { "regular" } else { "not regular" })),
            }
        }
        Command::Predict(a) => predict(poly, a, format),
        Command::Criteria(a) => criteria(poly, a, format),
        Command::Corpus(_) | Command::Report(_) => unreachable!("handled before dispatch"),
    }
}

fn either_or() -> CliError {
    CliError::Input("give exactly one of a polytope file or --product".into())
}

fn single_twist(t: &[i64]) -> Result<i64, CliError> {
    match t {
        [d] => Ok(*d),
        _ => Err(CliError::Input("a polytope takes a single twist".into())),
    }
}

fn count(p: &LatticePolytope, d: usize, format: Format) -> Out {
    let points = p.count_points(d);
    let interior = p.interior_lattice_points(d).len();
    match format {
        Format::Json => to_json(&json!({ "d": d, "points": points, "interior": interior })),
        Format::Text => Ok(format!("points: {points}\ninterior: {interior}\n")),
    }
}

fn ehrhart(p: &LatticePolytope, format: Format) -> Out {
    let h = ehrhart_polynomial(p);
    match format {
        Format::Json => to_json(&h),
        Format::Text => Ok(format!("h(d) = {h}\n")),
    }
}

fn roots(p: &LatticePolytope, format: Format) -> Out {
    let h = ehrhart_polynomial(p);
    let roots = integer_root_count(&h);
    let by_search = r_of_polytope(p)?;
    if by_search != roots.r {
        return Err(Error::Consistency(format!("r(P) by search = {by_search}, by roots = {}", roots.r)).into());
    }
    match format {
        Format::Json => to_json(&roots),
        Format::Text => Ok(format!("r = {}\nroots = {:?}\n", roots.r, roots.integer_roots)),
    }
}

/// Hard caps on user-requested windows.
pub const MAX_SLOPE_LIMIT: usize = 32;
pub const MAX_HOMOLOGICAL_LIMIT: usize = 256;

fn check_window(max_i: usize, slope: usize) -> Result<(), CliError> {
    if slope > MAX_SLOPE_LIMIT || max_i > MAX_HOMOLOGICAL_LIMIT {
        return Err(Error::WindowExceeded(format!(
            "window (max_i {max_i}, max_slope {slope}) exceeds the hard limits ({MAX_HOMOLOGICAL_LIMIT}, {MAX_SLOPE_LIMIT})"
        ))
        .into());
    }
    Ok(())
}

fn koszul_config(rank: RankMethod, limit: usize) -> KoszulConfig {
    KoszulConfig {
        rank,
        strand_limit: limit,
    }
}

fn betti(p: &LatticePolytope, a: &crate::BettiArgs, format: Format) -> Out {
    let k = &a.koszul;
    let slope = k.max_slope.unwrap_or_else(|| default_max_slope(p));
    check_window(a.max_i.unwrap_or(0), slope)?;
    let ring = build_ring(p, k.c, slope + 1)?;
    let max_i = a.max_i.unwrap_or(ring.dim_v());
    check_window(max_i, slope)?;
    let mut table = betti_table(&ring, max_i, slope, &koszul_config(RankMethod::default(), k.strand_limit))?;
    if k.certify {
        let exact = betti_table(&ring, max_i, slope, &koszul_config(RankMethod::Exact, k.strand_limit))?;
        if !exact.nonzero().eq(table.nonzero()) {
            return Err(Error::Consistency("modular and exact Betti tables differ".into()).into());
        }
        table = exact;
    }
    if !k_polynomial_checksum(&table) {
        return Err(Error::Consistency("K-polynomial checksum failed".into()).into());
    }
    match format {
        Format::Json => to_json(&json!({ "table": table, "checksum": true })),
        Format::Text => Ok(format!("{}checksum: ok\n", table.to_text())),
    }
}

fn np(p: &LatticePolytope, a: &crate::NpArgs, format: Format) -> Out {
    let k = &a.koszul;
    let slope = k.max_slope.unwrap_or_else(|| default_max_slope(p));
    check_window(a.pmax, slope)?;
    let ring = build_ring(p, k.c, slope + 1)?;
    let mut verdicts = np_level(&ring, a.pmax, slope, &koszul_config(RankMethod::default(), k.strand_limit))?;
    if k.certify {
        let exact = np_level(&ring, a.pmax, slope, &koszul_config(RankMethod::Exact, k.strand_limit))?;
        if exact != verdicts {
            return Err(Error::Consistency("modular and exact verdicts differ".into()).into());
        }
        verdicts = exact;
    }
    let mut certificates = Vec::new();
    if a.with_criteria {
        for q in 0..=a.pmax {
            certificates.extend(polytope_criteria(p, k.c, q)?);
        }
        for v in verdicts.iter_mut() {
            // (N_q) implies (N_p) for p <= q
            let Some(c) = certificates
                .iter()
                .find(|c| c.guaranteed_p.is_some_and(|g| g >= v.p))
            else {
                continue;
            };
            if v.fails() {
                return Err(Error::Consistency(format!(
                    "{} guarantees (N_{}) but the computation gives {:?}",
                    c.criterion, v.p, v.status
                ))
                .into());
            }
            v.status = NpStatus::Proven {
                criterion: c.criterion.clone(),
            };
        }
    }
    match format {
        Format::Json => {
            let mut out = json!({
                "c": k.c,
                "max_slope": slope,
                "exact": k.certify,
                "verdicts": verdicts,
            });
            if a.with_criteria {
                out["criteria"] = serde_json::to_value(&certificates).map_err(|e| CliError::Input(e.to_string()))?;
            }
            to_json(&out)
        }
        Format::Text => {
            let mut s = String::new();
            for v in &verdicts {
                let _ = writeln!(s, "N_{}: {}", v.p, describe(&v.status));
            }
            Ok(s)
        }
    }
}

pub fn describe(s: &NpStatus) -> String {
    match s {
        NpStatus::Fails { i, j, beta } => format!("FAILS (beta_{{{i},{j}}} = {beta})"),
        NpStatus::VerifiedUpTo { bound } => format!("VERIFIED_UP_TO slope {bound}"),
        NpStatus::Proven { criterion } => format!("PROVEN by {criterion}"),
    }
}

fn parse_weights(s: &str, p: usize) -> Result<Vec<Vec<u64>>, CliError> {
    let mut w: Vec<Vec<u64>> = s
        .split(';')
        .map(|v| {
            v.split(',')
                .map(|c| c.trim().parse::<u64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| CliError::Input(format!("weights {s:?}: {e}")))
        })
        .collect::<Result<_, _>>()?;
    if let Some(last) = w.last().cloned() {
        while w.len() < p {
            w.push(last.clone());
        }
    }
    Ok(w)
}

fn predict(poly: Option<&LatticePolytope>, a: &crate::PredictArgs, format: Format) -> Out {
    let plan = MainTheoremPlan::new(parse_weights(&a.weights, a.p)?, a.p)?;
    let m1: Vec<i64> = plan.weights[0].iter().map(|&c| c as i64).collect();
    let (regular, prediction) = match (&a.product.product, poly) {
        (Some(n), None) => (is_regular_product(n, &m1)?, predict_product(n, &plan)?),
        (None, Some(p)) => (is_regular_single(p, single_twist(&m1)?), predict_single(p, &plan)?),
        _ => return Err(either_or()),
    };
    let mut check = None;
    if a.check {
        let (Some(p), Some(pred)) = (poly, &prediction) else {
            return Err(CliError::Input("--check needs a polytope and a prediction".into()));
        };
        let slope = default_max_slope(p);
        let ring = build_ring(p, pred.twist[0] as usize, slope + 1)?;
        let v = np_level(&ring, pred.p, slope, &KoszulConfig::default())?;
        if let Some(bad) = v.iter().find(|x| x.fails()) {
            return Err(Error::Consistency(format!("predicted (N_{}) but computed {:?}", pred.p, bad.status)).into());
        }
        check = Some(v);
    }
    match format {
        Format::Json => to_json(&json!({
            "plan": plan,
            "regular_m1": regular,
            "membership_ok": plan.membership_ok(),
            "prediction": prediction,
            "check": check,
        })),
        Format::Text => Ok(match &prediction {
            Some(pr) => format!("(N_{}) predicted for twist {:?}\n", pr.p, pr.twist),
            None => format!(
                "no prediction (regular m_1: {regular}, membership: {})\n",
                plan.membership_ok()
            ),
        }),
    }
}

fn criteria(poly: Option<&LatticePolytope>, a: &crate::CriteriaArgs, format: Format) -> Out {
    let results = match (&a.product.product, poly) {
        (Some(n), None) => {
            let m = a
                .degrees
                .as_ref()
                .ok_or_else(|| CliError::Input("--degrees is required with --product".into()))?;
            let d: Vec<u64> = m
                .iter()
                .map(|&x| u64::try_from(x))
                .collect::<Result<_, _>>()
                .map_err(|_| CliError::Input("cor_prodproj needs non-negative degrees".into()))?;
            vec![cor_prodproj(n, &d, a.p)?, cor_canonical_product(n, m, a.p)?]
        }
        (None, Some(p)) => {
            let d = a.d.ok_or_else(|| CliError::Input("--d is required with a polytope".into()))?;
            polytope_criteria(p, d, a.p)?
        }
        _ => return Err(either_or()),
    };
    match format {
        Format::Json => to_json(&results),
        Format::Text => {
            let mut s = format!("{:<24} {:<12} {:<11} note\n", "criterion", "threshold", "guaranteed");
            for r in &results {
                let g = r.guaranteed_p.map_or("-".to_string(), |p| format!("N_{p}"));
                let t = r.threshold.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
                let _ = writeln!(s, "{:<24} {:<12} {:<11} {}", r.criterion, t, g, r.note.as_deref().unwrap_or(""));
            }
            Ok(s)
        }
    }
}


fn corpus(seed: u64, count: usize, dim: usize, bound: u64, out: &Path) -> Out {
    let polys = generate_corpus(seed, count, dim, bound)?;
    fs::create_dir_all(out).map_err(|e| CliError::Input(format!("{}: {e}", out.display())))?;
    let mut files = Vec::with_capacity(polys.len());
    for (k, p) in polys.iter().enumerate() {
        let path = out.join(format!("polytope_{k:03}.json"));
        let body = to_json(&p.to_input())?;
        fs::write(&path, body).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        files.push(path.display().to_string());
    }
    to_json(&files)
}
