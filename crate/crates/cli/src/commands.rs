use mchabauty::data::fetch::{fetch_tables, BUNDLED_MAX_CONDUCTOR};
use mchabauty::data::record::is_supported_on;
use mchabauty::data::{corollary_bound, curves_good_outside, serialize_allcurves, CurveRecord, Dataset};
use mchabauty::elliptic::divpoly::division_polynomial;
use mchabauty::elliptic::isogeny::{expand_class_rational, velu_quotient};
use mchabauty::elliptic::{CurvePoint, WeierstrassModel};
use mchabauty::fibre::{solver, solvers, y1_points, FibreReport, OutputFormat, SolveRequest};
use mchabauty::number::factored::{factor_by_trial, ns_bound};
use mchabauty::number::rational::{format_rational, parse_rational};
use mchabauty::number::{BigInt, BigRational, PrimeSet};
use mchabauty::{Error, Result};
use num_traits::ToPrimitive;
use serde_json::json;

use crate::{Command, Config};

const TRIAL_LIMIT: u64 = 1 << 20;

pub fn run(cfg: &Config, cmd: Command) -> Result<String> {
    match cmd {
        Command::Fetch { range } => fetch(cfg, range),
        Command::Curves { primes } => curves(cfg, &primes),
        Command::Sunit { primes } => solve(cfg, "sunit", primes, None),
        Command::Y1 { level, primes } => {
            // level checks first, so a bad level never triggers a download
            mchabauty::fibre::check_y1_request(level, &primes)?;
            let data = dataset_for(cfg, &primes)?;
            Ok(render(cfg, &y1_points(level, &primes, &data)?))
        }
        Command::Solve {
            problems: true, ..
        } => Ok(solvers()
            .iter()
            .map(|s| format!("{:<14}{}\n", s.name(), s.summary()))
            .collect()),
        Command::Solve {
            problem,
            primes,
            level,
            ..
        } => solve(
            cfg,
            problem.as_deref().expect("clap enforces --problem"),
            primes.expect("clap enforces --primes"),
            level,
        ),
        Command::Bound { level, primes } => bound(cfg, level, &primes),
        Command::Isogeny { curve, point, degree } => isogeny(cfg, &curve, point.as_deref(), degree),
        Command::Divpoly { curve, n } => divpoly(cfg, &curve, n),
    }
}

fn render(cfg: &Config, report: &FibreReport) -> String {
    report.render(cfg.format, cfg.list)
}

/// Tables complete up to N(S), or the widest offline table when the gate is waived.
fn dataset_for(cfg: &Config, s: &PrimeSet) -> Result<Dataset> {
    let ns = ns_bound(s).value();
    let keep = |n: u64| is_supported_on(n, s);
    if cfg.allow_partial {
        let data = cfg.tables.best_offline(keep)?;
        if !data.covers(&ns) {
            eprintln!(
                "warning: tables stop at conductor {} < N(S) = {ns}; results are lower bounds",
                data.max_conductor()
            );
        }
        return Ok(data.waive_coverage_gate());
    }
    let bound = ns.to_u64().ok_or_else(|| Error::Coverage {
        ns_bound: ns.clone(),
        max_conductor: BUNDLED_MAX_CONDUCTOR,
    })?;
    cfg.tables.covering(bound, keep)
}

fn solve(cfg: &Config, name: &str, primes: PrimeSet, level: Option<u32>) -> Result<String> {
    let solver = solver(name)?;
    let req = SolveRequest { primes, level };
    if let Some(n) = level {
        mchabauty::fibre::check_y1_request(n, &req.primes)?;
    }
    let data = dataset_for(cfg, &req.primes)?;
    Ok(render(cfg, &solver.solve(&req, &data)?))
}

fn fetch(cfg: &Config, (lo, hi): (u64, u64)) -> Result<String> {
    let t = &cfg.tables;
    let data = fetch_tables(&t.base_url, lo..=hi, &t.cache_dir, t.offline)?;
    let files: Vec<_> = data.source().files.iter().map(|f| json!({"name": f.name, "sha256": f.sha256})).collect();
    Ok(match cfg.format {
        OutputFormat::Json => {
            let v = json!({
                "cache_dir": t.cache_dir.display().to_string(),
                "range": [lo, hi],
                "records": data.len(),
                "files": files,
            });
            format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
        }
        _ => format!(
            "cached {} file(s) in {}\nconductors {lo}..{hi}: {} records\n",
            files.len(),
            t.cache_dir.display(),
            data.len()
        ),
    })
}

fn curves(cfg: &Config, primes: &PrimeSet) -> Result<String> {
    let data = dataset_for(cfg, primes)?;
    let recs: Vec<&CurveRecord> = curves_good_outside(primes, &data)?;
    Ok(match cfg.format {
        OutputFormat::Text => serialize_allcurves(recs.iter().copied()),
        OutputFormat::Json => format!("{}\n", serde_json::to_string_pretty(&recs).expect("json")),
        OutputFormat::Csv => {
            let mut out = String::from("conductor,class,index,a_invariants,rank,torsion_order\n");
            for r in recs {
                let a: Vec<String> = r.a_invariants.iter().map(|c| c.to_string()).collect();
                out += &format!(
                    "{},{},{},\"[{}]\",{},{}\n",
                    r.conductor,
                    r.class_label,
                    r.index,
                    a.join(","),
                    r.rank,
                    r.torsion_order
                );
            }
            out
        }
    })
}

fn bound(cfg: &Config, level: u64, primes: &PrimeSet) -> Result<String> {
    if level == 0 {
        return Err(Error::usage("level must be positive"));
    }
    let b = corollary_bound(level, primes);
    Ok(match cfg.format {
        OutputFormat::Json => format!(
            "{}\n",
            json!({"level": level, "primes": primes, "bound": format_rational(&b)})
        ),
        OutputFormat::Csv => format!("level,primes,bound\n{level},\"{primes}\",{}\n", format_rational(&b)),
        OutputFormat::Text => format!("{}\n", format_rational(&b)),
    })
}

fn parse_ints(s: &str) -> Result<Vec<BigInt>> {
    s.split(',')
        .map(|c| {
            c.trim()
                .parse::<BigInt>()
                .map_err(|_| Error::usage(format!("bad integer {c:?} in {s:?}")))
        })
        .collect()
}

/// `a1,a2,a3,a4,a6`, or `A,B` for a short Weierstrass model.
fn parse_curve(s: &str) -> Result<WeierstrassModel> {
    let v = parse_ints(s)?;
    let a: [BigInt; 5] = match v.len() {
        2 => [0.into(), 0.into(), 0.into(), v[0].clone(), v[1].clone()],
        5 => v.try_into().expect("length checked"),
        n => return Err(Error::usage(format!("--curve takes 2 or 5 integers, got {n}"))),
    };
    WeierstrassModel::from_integers(a)
}

fn model_line(e: &WeierstrassModel) -> serde_json::Value {
    let a: Vec<String> = e.a_invariants().iter().map(format_rational).collect();
    json!({"a_invariants": a, "j": format_rational(e.j_invariant())})
}

fn isogeny(cfg: &Config, curve: &str, point: Option<&str>, degree: Option<u64>) -> Result<String> {
    let e = parse_curve(curve)?;
    let models = match (point, degree) {
        (Some(p), Some(ell)) => {
            let coords: Vec<BigRational> = p
                .split(',')
                .map(parse_rational)
                .collect::<Result<_>>()
                .map_err(|_| Error::usage(format!("bad point {p:?}")))?;
            let [x, y]: [BigRational; 2] = coords
                .try_into()
                .map_err(|_| Error::usage("--point takes x,y"))?;
            vec![velu_quotient(&e, &CurvePoint::affine(x, y), ell)?]
        }
        (None, None) => {
            let disc = factor_by_trial(&e.discriminant().to_integer(), TRIAL_LIMIT)?;
            expand_class_rational(&e, &disc)?
        }
        (None, Some(_)) => return Err(Error::usage("--degree needs --point")),
        (Some(_), None) => return Err(Error::usage("--point needs --degree")),
    };
    Ok(match cfg.format {
        OutputFormat::Json => {
            let v: Vec<_> = models.iter().map(model_line).collect();
            format!("{}\n", serde_json::to_string_pretty(&v).expect("json"))
        }
        OutputFormat::Csv => {
            let mut out = String::from("a_invariants,j\n");
            for m in &models {
                out += &format!("\"{m}\",{}\n", format_rational(m.j_invariant()));
            }
            out
        }
        OutputFormat::Text => models
            .iter()
            .map(|m| format!("{m}  j = {}\n", format_rational(m.j_invariant())))
            .collect(),
    })
}

fn divpoly(cfg: &Config, curve: &str, n: usize) -> Result<String> {
    let v = parse_ints(curve)?;
    let [a, b]: [BigInt; 2] = v
        .try_into()
        .map_err(|_| Error::usage("--curve takes A,B for y^2 = x^3 + Ax + B"))?;
    let psi = division_polynomial(&a, &b, n)?;
    let shown = if psi.is_even() {
        format!("y*({})", psi.part)
    } else {
        psi.part.to_string()
    };
    Ok(match cfg.format {
        OutputFormat::Json => format!("{}\n", json!({"A": a.to_string(), "B": b.to_string(), "n": n, "psi": shown})),
        OutputFormat::Csv => format!("A,B,n,psi\n{a},{b},{n},\"{shown}\"\n"),
        OutputFormat::Text => format!("{shown}\n"),
    })
}
