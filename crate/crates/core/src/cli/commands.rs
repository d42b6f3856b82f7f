use serde_json::{json, Value};

use super::format::{csv_table, num, points, sig, SweepSpec};
use super::{BmArgs, ConstantsArgs, Outcome, Shape, SpaceArgs, Suite, Tolerances, VerifyArgs, ZInclusionArgs};
use crate::constants::{
    aubin_talenti, fk_constant, gn_constant, gn_sharp_constant, gn_theta, isoperimetric_constant, rayleigh_constant,
    sobolev_constant, SobolevParams,
};
use crate::error::{Error, Result};
use crate::sandbox::{
    brunn_minkowski_report, z_inclusion_check_with, z_inclusion_trials, FiniteMetricMeasureSpace, Fraction,
    LatticeRegion,
};
use crate::spaces::{curvature_check, ModelSpace};
use crate::specfun::{omega, Precision};
use crate::verify::{
    fk_check_with, fk_sharpness_sweep, gn_suite, polya_szego_suite, sobolev_suite, QuotientReport,
};

const CONSTANT_DIGITS: usize = 15;
const DEFAULT_SPACE_SWEEP: &str = "1:1000:log";
const DEFAULT_FK_SWEEP: &str = "1:500:log:12";
const AVR_SAMPLES: usize = 200;

fn to_json<T: serde::Serialize>(value: &T) -> Value {
    serde_json::to_value(value).unwrap_or(Value::Null)
}

pub(super) fn constants(args: &ConstantsArgs) -> Result<Outcome> {
    let (n, avr) = (args.n, args.avr);
    let mut rows: Vec<(&str, f64)> = vec![("n", n)];
    if let Some(p) = args.p {
        let params = match args.alpha {
            Some(alpha) => SobolevParams::new(n, p, alpha)?,
            None => SobolevParams::sobolev(n, p)?,
        };
        rows.extend([
            ("p", p),
            ("alpha", params.alpha()),
            ("avr", avr),
            ("omega_n", omega(n)?),
            ("at", aubin_talenti(&params)),
            ("theta", gn_theta(&params)?),
            ("gn", gn_constant(&params)?),
            ("sobolev", sobolev_constant(&params, avr)?),
            ("gn_sharp", gn_sharp_constant(&params, avr)?),
        ]);
        if n >= 2.0 {
            rows.push(("fk", fk_constant(n, avr)?));
            rows.push(("rayleigh", rayleigh_constant(n, avr)?));
        }
    } else {
        rows.extend([
            ("avr", avr),
            ("omega_n", omega(n)?),
            ("fk", fk_constant(n, avr)?),
            ("rayleigh", rayleigh_constant(n, avr)?),
        ]);
    }
    rows.push(("isoperimetric", isoperimetric_constant(n, avr)?));
    let csv = csv_table(
        &["quantity", "value"],
        rows.iter().map(|(k, v)| vec![k.to_string(), sig(*v, CONSTANT_DIGITS)]),
    );
    let map: serde_json::Map<String, Value> = rows.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
    Ok(Outcome {
        csv,
        json: Value::Object(map),
        summary: Vec::new(),
        violation: false,
    })
}

pub(super) fn space(args: &SpaceArgs) -> Result<Outcome> {
    let space = args.space.descriptor()?.to_space()?;
    let label = space.label();
    if !space.radial_supported() && args.sweep.is_none() {
        let avr = space.avr();
        return Ok(Outcome {
            csv: csv_table(&["quantity", "value"], [vec!["avr".into(), num(avr)]]),
            json: json!({ "space": label, "avr": avr }),
            summary: vec![format!("{label}: avr={avr}; no radial ball geometry, sweep skipped")],
            violation: false,
        });
    }
    let spec = SweepSpec::parse(args.sweep.as_deref().unwrap_or(DEFAULT_SPACE_SWEEP))?;
    let grid = spec.grid();
    let sweep = space.isoperimetric_sharpness_sweep(&grid)?;
    let bishop_gromov = space.bishop_gromov_check(&grid)?;
    let avr = space.avr();
    let estimate = space.avr_numeric(spec.stop, AVR_SAMPLES)?;
    let curvature = match &space {
        ModelSpace::WarpedProduct { profile, .. } => {
            let mut cgrid = vec![0.0];
            cgrid.extend_from_slice(&grid);
            Some(curvature_check(profile, &cgrid)?)
        }
        _ => None,
    };
    let curvature_ok = curvature.as_ref().is_none_or(|c| c.pass);
    let violation = !sweep.holds || !bishop_gromov.pass || !curvature_ok;
    let csv = csv_table(
        &["r", "vol", "mink_content", "ratio", "sharp_bound", "margin"],
        sweep.rows.iter().map(|row| {
            vec![
                num(row.r),
                num(row.vol),
                num(row.mink_content),
                num(row.ratio),
                num(row.sharp_bound),
                num(row.margin),
            ]
        }),
    );
    let summary = vec![
        format!("{label}: avr={avr} numeric=[{}, {}]", estimate.lower, estimate.upper),
        format!(
            "bishop_gromov={} curvature={} isoperimetric={} tail_gap={}",
            verdict(bishop_gromov.pass),
            curvature.as_ref().map_or("n/a", |c| verdict(c.pass)),
            verdict(sweep.holds),
            sweep.tail_gap
        ),
    ];
    Ok(Outcome {
        csv,
        json: json!({
            "space": label,
            "avr": avr,
            "avr_numeric": to_json(&estimate),
            "bishop_gromov": to_json(&bishop_gromov),
            "curvature": to_json(&curvature),
            "isoperimetric_sweep": to_json(&sweep),
        }),
        summary,
        violation,
    })
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

const REPORT_HEADER: [&str; 12] = [
    "inequality",
    "space",
    "function",
    "n",
    "p",
    "alpha",
    "R",
    "lhs",
    "rhs_constant",
    "quotient",
    "margin",
    "holds",
];

fn opt_num(x: Option<f64>) -> String {
    x.filter(|v| !v.is_nan()).map(num).unwrap_or_default()
}

fn report_row(r: &QuotientReport, holds: bool) -> Vec<String> {
    vec![
        r.inequality.to_string(),
        r.space.clone(),
        r.function.clone(),
        num(r.n),
        num(r.p),
        opt_num(Some(r.alpha)),
        opt_num(r.radius),
        num(r.lhs),
        num(r.rhs_constant),
        num(r.quotient),
        num(r.margin),
        holds.to_string(),
    ]
}

fn quotient_outcome(name: &str, reports: Vec<QuotientReport>, tol: &Tolerances) -> Outcome {
    let holds: Vec<bool> = reports.iter().map(|r| r.relative_margin() >= -tol.margin).collect();
    let violation = holds.iter().any(|h| !h);
    let csv = csv_table(&REPORT_HEADER, reports.iter().zip(&holds).map(|(r, &h)| report_row(r, h)));
    let min_rel = reports.iter().map(QuotientReport::relative_margin).fold(f64::INFINITY, f64::min);
    let mut json_rows = Vec::new();
    for (r, &h) in reports.iter().zip(&holds) {
        let mut v = to_json(r);
        v["holds"] = json!(h);
        json_rows.push(v);
    }
    Outcome {
        csv,
        json: json!({ "suite": name, "reports": json_rows }),
        summary: vec![format!(
            "{name}: {} reports, {} hold, min relative margin {min_rel}",
            reports.len(),
            holds.iter().filter(|h| **h).count()
        )],
        violation,
    }
}

pub(super) fn verify(args: &VerifyArgs, tol: &Tolerances) -> Result<Outcome> {
    let space = args.space.descriptor()?.to_space()?;
    match args.suite {
        Suite::PolyaSzego => {
            let rows = polya_szego_suite(&space, args.p)?;
            let holds: Vec<bool> = rows.iter().map(|r| r.ratio >= 1.0 - tol.margin).collect();
            let csv = csv_table(
                &["space", "function", "p", "lhs", "rhs", "ratio", "holds"],
                rows.iter().zip(&holds).map(|(r, h)| {
                    vec![
                        r.space.clone(),
                        r.function.clone(),
                        num(r.p),
                        num(r.lhs),
                        num(r.rhs),
                        num(r.ratio),
                        h.to_string(),
                    ]
                }),
            );
            let (lo, hi) = rows
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), r| (a.min(r.ratio), b.max(r.ratio)));
            Ok(Outcome {
                csv,
                json: json!({ "suite": "polya-szego", "rows": to_json(&rows) }),
                summary: vec![format!("polya-szego: {} functions, ratio in [{lo}, {hi}]", rows.len())],
                violation: holds.iter().any(|h| !h),
            })
        }
        Suite::Sobolev => Ok(quotient_outcome("sobolev", sobolev_suite(&space, args.p)?, tol)),
        Suite::Gn => {
            let nf = space.dimension();
            let params = match args.alpha {
                Some(alpha) => SobolevParams::new(nf, args.p, alpha)?,
                None => SobolevParams::sobolev(nf, args.p)?,
            };
            Ok(quotient_outcome("gn", gn_suite(&space, &params)?, tol))
        }
        Suite::FaberKrahn => {
            let precision = Precision::new(tol.eigen, Precision::default().max_iter)?;
            let mut reports = Vec::new();
            let mut eigen = Vec::new();
            for &radius in &args.radii {
                let (rep, eig) = fk_check_with(&space, radius, &precision)?;
                eigen.push(eig.lambda_1);
                reports.push(rep);
            }
            let mut out = quotient_outcome("faber-krahn", reports, tol);
            out.csv = append_column(&out.csv, "lambda_1", &eigen);
            for (row, lambda) in out.json["reports"].as_array_mut().into_iter().flatten().zip(&eigen) {
                row["lambda_1"] = json!(lambda);
            }
            Ok(out)
        }
        Suite::FkSweep => {
            let spec = SweepSpec::parse(args.sweep.as_deref().unwrap_or(DEFAULT_FK_SWEEP))?;
            let sweep = fk_sharpness_sweep(&space, &spec.grid())?;
            let holds = sweep.rows.iter().all(|r| r.margin >= -tol.margin * sweep.bound);
            let csv = csv_table(
                &["R", "grad_integral", "l2_integral", "vol", "q", "sharp_bound", "margin"],
                sweep.rows.iter().map(|r| {
                    vec![
                        num(r.radius),
                        num(r.grad_integral),
                        num(r.l2_integral),
                        num(r.vol),
                        num(r.q),
                        num(sweep.bound),
                        num(r.margin),
                    ]
                }),
            );
            let summary = vec![format!(
                "fk-sweep: bound {} holds={} monotone={} limit errors grad {} l2 {}",
                sweep.bound, holds, sweep.monotone, sweep.grad_limit_error, sweep.l2_limit_error
            )];
            Ok(Outcome {
                csv,
                json: to_json(&sweep),
                summary,
                violation: !holds,
            })
        }
    }
}

fn append_column(csv: &str, name: &str, values: &[f64]) -> String {
    let mut out = String::new();
    for (i, line) in csv.lines().enumerate() {
        out.push_str(line);
        out.push(',');
        if i == 0 {
            out.push_str(name);
        } else {
            out.push_str(&num(values[i - 1]));
        }
        out.push('\n');
    }
    out
}

fn parse_graph(spec: &str) -> Result<FiniteMetricMeasureSpace> {
    let bad = || Error::Parse(format!("graph {spec:?}: expected pathN, gridRxC or an edge-list CSV file"));
    if let Some(len) = spec.strip_prefix("path").and_then(|t| t.parse::<usize>().ok()) {
        return FiniteMetricMeasureSpace::path_graph(len);
    }
    if let Some((r, c)) = spec.strip_prefix("grid").and_then(|t| t.split_once('x')) {
        let rows = r.parse().map_err(|_| bad())?;
        let cols = c.parse().map_err(|_| bad())?;
        return FiniteMetricMeasureSpace::grid_graph(rows, cols);
    }
    let text = std::fs::read_to_string(spec).map_err(|e| Error::Parse(format!("cannot read graph {spec:?}: {e}")))?;
    FiniteMetricMeasureSpace::from_edge_csv(&text)
}

pub(super) fn z_inclusion(args: &ZInclusionArgs, seed: u64) -> Result<Outcome> {
    if let Some(slack) = args.slack {
        if !(slack >= 0.0 && slack.is_finite()) {
            return Err(Error::Domain(format!("slack >= 0 violated: slack={slack}")));
        }
    }
    match &args.graph {
        Some(spec) => z_inclusion_single(args, spec),
        None => {
            let end = seed
                .checked_add(args.seeds)
                .ok_or_else(|| Error::Domain("seed range overflows u64".into()))?;
            let trials = z_inclusion_trials(seed..end, args.slack, args.neighborhood_slack)?;
            let csv = csv_table(
                &["seed", "nodes", "omega_size", "x0", "radius", "s", "interpolants", "pass", "witness"],
                trials.iter().map(|t| {
                    vec![
                        t.seed.to_string(),
                        t.nodes.to_string(),
                        t.omega_size.to_string(),
                        t.x0.to_string(),
                        num(t.radius),
                        num(t.s),
                        t.interpolants.to_string(),
                        t.pass.to_string(),
                        t.witness.map(|w| w.to_string()).unwrap_or_default(),
                    ]
                }),
            );
            let passes = trials.iter().filter(|t| t.pass).count();
            let failed_seeds = {
                let mut s: Vec<u64> = trials.iter().filter(|t| !t.pass).map(|t| t.seed).collect();
                s.dedup();
                s.len()
            };
            let nontrivial = trials.iter().filter(|t| t.interpolants > t.omega_size).count();
            Ok(Outcome {
                csv,
                json: json!({ "trials": to_json(&trials) }),
                summary: vec![format!(
                    "z-inclusion: {} spaces pass ({} of {} checks, {nontrivial} with interpolants outside Omega)",
                    args.seeds as usize - failed_seeds,
                    passes,
                    trials.len()
                )],
                violation: passes != trials.len(),
            })
        }
    }
}

fn z_inclusion_single(args: &ZInclusionArgs, spec: &str) -> Result<Outcome> {
    let space = parse_graph(spec)?;
    if let Some(path) = &args.save_graph {
        std::fs::write(path, space.to_edge_csv())
            .map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.display())))?;
    }
    let omega = if args.omega.is_empty() { vec![0] } else { args.omega.clone() };
    let x0 = args.x0.unwrap_or(omega[0]);
    let radius = args.radius.unwrap_or(space.diameter() + 1.0);
    let s = args.s.unwrap_or(0.5);
    let slack = args.slack.unwrap_or_else(|| space.default_slack());
    let z = z_inclusion_check_with(&space, &omega, x0, radius, s, slack, args.neighborhood_slack)?;
    let csv = csv_table(
        &["key", "value"],
        [
            vec!["s".into(), num(s)],
            vec!["R".into(), num(radius)],
            vec!["x0".into(), x0.to_string()],
            vec!["d0".into(), num(z.d0)],
            vec!["neighborhood_radius".into(), num(z.radius)],
            vec!["omega".into(), points(&omega)],
            vec!["ball".into(), points(&z.ball)],
            vec!["interpolants".into(), points(&z.interpolants)],
            vec!["neighborhood".into(), points(&z.neighborhood)],
            vec!["pass".into(), z.pass.to_string()],
            vec!["witness".into(), z.witness.map(|w| w.to_string()).unwrap_or_default()],
        ],
    );
    Ok(Outcome {
        csv,
        json: json!({ "graph": spec, "omega": omega, "x0": x0, "R": radius, "s": s, "check": to_json(&z) }),
        summary: vec![format!(
            "z-inclusion on {spec}: Z = {{{}}} within Omega_{} = {{{}}}: {}",
            points(&z.interpolants),
            z.radius,
            points(&z.neighborhood),
            verdict(z.pass)
        )],
        violation: !z.pass,
    })
}

fn bm_regions(shape: Shape, n: usize) -> (LatticeRegion, LatticeRegion) {
    match shape {
        Shape::Box => {
            let mut b_lo = vec![0.35; n];
            let mut b_hi = vec![0.85; n];
            b_lo[0] = 0.45;
            b_hi[0] = 0.95;
            (LatticeRegion::cube(0.1, 0.3, n), LatticeRegion::Box { lo: b_lo, hi: b_hi })
        }
        Shape::Ball => (
            LatticeRegion::Ball {
                center: vec![0.25; n],
                radius: 0.15,
            },
            LatticeRegion::Ball {
                center: vec![0.65; n],
                radius: 0.3,
            },
        ),
    }
}

pub(super) fn bm(args: &BmArgs) -> Result<Outcome> {
    let s: Fraction = args.s.parse()?;
    if !(args.h > 0.0 && args.h <= 1.0) {
        return Err(Error::Domain(format!("0 < h <= 1 violated: h={}", args.h)));
    }
    let cells = (1.0 / args.h).round();
    if ((cells * args.h) - 1.0).abs() > 1e-9 {
        return Err(Error::Domain(format!("h = 1/m for an integer m violated: h={}", args.h)));
    }
    let cells = cells as usize;
    let big_n = args.big_n.unwrap_or(args.n as f64);
    let (a, b) = bm_regions(args.shape, args.n);
    let mut reports = Vec::new();
    for level in 0..=args.refinements {
        let m = cells
            .checked_mul(1usize << level.min(40))
            .ok_or_else(|| Error::Domain("refined lattice is too large".into()))?;
        reports.push(brunn_minkowski_report(args.n, m, &a, &b, s, big_n)?);
    }
    let csv = csv_table(
        &[
            "n", "cells", "h", "s", "big_n", "measure_a", "measure_b", "measure_z", "lhs", "rhs", "deficit",
            "deficit_over_h", "within_contract",
        ],
        reports.iter().map(|r| {
            vec![
                r.n.to_string(),
                r.cells.to_string(),
                num(r.h),
                r.s.to_string(),
                num(r.big_n),
                num(r.measure_a),
                num(r.measure_b),
                num(r.measure_z),
                num(r.lhs),
                num(r.rhs),
                num(r.deficit),
                num(r.deficit_over_h),
                r.within_contract.to_string(),
            ]
        }),
    );
    let improving = reports.windows(2).all(|w| w[1].deficit >= w[0].deficit);
    let violation = reports.iter().any(|r| !r.within_contract);
    Ok(Outcome {
        csv,
        json: json!({ "reports": to_json(&reports), "improving": improving }),
        summary: vec![format!(
            "bm: deficits {} (improving={improving})",
            reports.iter().map(|r| r.deficit.to_string()).collect::<Vec<_>>().join(" -> ")
        )],
        violation,
    })
}
