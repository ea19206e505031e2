//! Command-line entry point: spec analysis, census runs, Frobenius reports,
//! monodromy checks, mesh export and period solving, with deterministic
//! machine-readable output.
//!
//! Exit codes: 0 on success/verified, 2 on verified nonexistence (a
//! first-class mathematical outcome, not a failure), 1 on errors.

use clap::{Parser, Subcommand};
use cmc_core::census::{self, CaseRecord, FourPiCase, Verdict};
use cmc_core::flatlab;
use cmc_core::frobenius;
use cmc_core::lift::{self, C2x2, LiftSystem, MeshDomain};
use cmc_core::moduli::{self, SurfaceSpec};
use cmc_core::symcore::{parse_scalar, sqrt_rational, ExactScalar, Rat, SpherePoint};
use num_complex::Complex64;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "cmc", version, about = "CMC-1 dual-curvature census toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output file (stdout if absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Integration tolerance.
    #[arg(long, global = true, default_value_t = 1e-11)]
    tol_int: f64,
    /// Monodromy classification tolerance.
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol_mono: f64,
    /// Seed recorded in reports (for reproducibility bookkeeping).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// End/umbilic analysis and curvature identities of a spec file.
    Analyze { spec: PathBuf },
    /// Run one census case (or `all`).
    Census {
        /// Type tag (e.g. o112, o24-h3, enneper-dual) or `all`.
        tag: String,
        /// Case parameters as name=value (exact scalars).
        #[arg(long = "param", value_name = "NAME=VALUE")]
        params: Vec<String>,
        /// Budget for `all`: 0, 4pi or 8pi.
        #[arg(long, default_value = "8pi")]
        budget: String,
    },
    /// Indicial/log-term report for one end of a spec file.
    Frobenius {
        spec: PathBuf,
        /// End point: exact scalar or `inf`.
        #[arg(long)]
        end: String,
        /// Equation form: e0, e1sharp or e2sharp.
        #[arg(long, default_value = "e0")]
        form: String,
    },
    /// Monodromy matrices around the ends of a spec file.
    Monodromy {
        spec: PathBuf,
        /// Base point `re,im`.
        #[arg(long, default_value = "0.37,0.83")]
        base: String,
    },
    /// Integrate the lift over a grid and export an OBJ mesh.
    Mesh {
        spec: PathBuf,
        /// Rectangle domain `x0,x1,y0,y1`.
        #[arg(long, conflicts_with = "annulus")]
        domain: Option<String>,
        /// Annulus domain `cx,cy,r0,r1`.
        #[arg(long)]
        annulus: Option<String>,
        /// Seam-cut angle in degrees for annulus domains.
        #[arg(long, default_value_t = 0.0)]
        cut: f64,
        /// Grid resolution `nu,nv`.
        #[arg(long, default_value = "24,24")]
        res: String,
        /// Immerse the dual lift F⁻¹ instead.
        #[arg(long)]
        dual: bool,
        /// Output format: obj or json (vertex/seam report).
        #[arg(long, default_value = "obj")]
        format: String,
    },
    /// Period computations of the minimal-surface module.
    Periods {
        #[command(subcommand)]
        which: PeriodsCmd,
    },
    /// Run the full census and print the table-shaped summary.
    Table1 {
        #[arg(long, default_value = "8pi")]
        budget: String,
    },
}

#[derive(Subcommand)]
enum PeriodsCmd {
    /// Newton solve of the genus-1 period pair from a start point.
    Cg {
        /// Start `nu1,nu2`; defaults to (1.1, 1.1·√B).
        #[arg(long)]
        start: Option<String>,
    },
    /// Residue-route period of the two-ended planar family.
    O33 {
        #[arg(long)]
        a: String,
        #[arg(long)]
        nu: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

type AnyErr = Box<dyn std::error::Error>;

fn run(cli: &Cli) -> Result<ExitCode, AnyErr> {
    match &cli.command {
        Command::Analyze { spec } => {
            let (spec, hash) = load_spec(spec)?;
            let (ends, umbilics) = moduli::analyze(&spec)?;
            let curv = moduli::curvature_report(&spec)?;
            let mut report = moduli::report_json(&spec, &ends, &umbilics, &curv);
            stamp(&mut report, hash, cli.seed);
            emit(cli, &report)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Census {
            tag,
            params,
            budget,
        } => {
            if tag == "all" {
                let rows = census_table_parallel(parse_budget(budget)?);
                let mut v = census::table_to_json(&rows);
                stamp(&mut v, 0, cli.seed);
                emit(cli, &v)?;
                let ok = rows.iter().all(|r| r.consistent);
                return Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) });
            }
            let params = parse_params(params)?;
            let record = run_case(tag, &params)?;
            let mut v = record.to_json();
            stamp(&mut v, 0, cli.seed);
            emit(cli, &v)?;
            Ok(match record.verdict {
                Verdict::Nonexistent => ExitCode::from(2),
                _ => ExitCode::SUCCESS,
            })
        }
        Command::Frobenius { spec, end, form } => {
            let (spec, hash) = load_spec(spec)?;
            let (g, q) = spec
                .rational_data()
                .ok_or("spec does not carry rational (G, Q) data")?;
            let end = parse_end(end)?;
            let n = frobenius::DEFAULT_TERMS;
            let ode = match form.as_str() {
                "e0" => frobenius::from_e0(g, q, &end, n)?,
                "e1sharp" | "e1" => frobenius::from_e1_sharp(g, q, &end, n)?,
                "e2sharp" | "e2" => frobenius::from_e2_sharp(g, q, &end, n)?,
                other => return Err(format!("unknown form '{other}'").into()),
            };
            let mut v = frobenius::report_json(&end, &ode);
            stamp(&mut v, hash, cli.seed);
            emit(cli, &v)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Monodromy { spec, base } => {
            let (spec, hash) = load_spec(spec)?;
            let system = LiftSystem::from_spec(&spec)?;
            let base = parse_complex(base)?;
            let report = lift::monodromy(&system, base, &spec.ends, cli.tol_int, cli.tol_mono)?;
            let mut v = report.to_json();
            stamp(&mut v, hash, cli.seed);
            emit(cli, &v)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Mesh {
            spec,
            domain,
            annulus,
            cut,
            res,
            dual,
            format,
        } => {
            let (spec, hash) = load_spec(spec)?;
            let system = LiftSystem::from_spec(&spec)?;
            let dom = match (domain, annulus) {
                (Some(d), None) => {
                    let v = parse_f64s(d, 4)?;
                    MeshDomain::Rect {
                        x0: v[0],
                        x1: v[1],
                        y0: v[2],
                        y1: v[3],
                    }
                }
                (None, Some(a)) => {
                    let v = parse_f64s(a, 4)?;
                    MeshDomain::Annulus {
                        center: Complex64::new(v[0], v[1]),
                        r0: v[2],
                        r1: v[3],
                        cut: cut.to_radians(),
                    }
                }
                _ => return Err("specify exactly one of --domain or --annulus".into()),
            };
            let r = parse_f64s(res, 2)?;
            let m = lift::mesh(
                &system,
                dom,
                (r[0] as usize, r[1] as usize),
                C2x2::identity(),
                cli.tol_int,
                *dual,
            )?;
            match format.as_str() {
                "obj" => {
                    let obj = lift::mesh_to_obj(&m);
                    emit_text(cli, &obj)?;
                }
                "json" => {
                    let mut v = json!({
                        "vertices": m.vertices.len(),
                        "faces": m.faces.len(),
                        "max_det_drift": flatlab::fmt_f64(m.max_det_drift),
                        "seam_mismatch": m.seam_mismatch.map(flatlab::fmt_f64),
                    });
                    stamp(&mut v, hash, cli.seed);
                    emit(cli, &v)?;
                }
                other => return Err(format!("unknown format '{other}'").into()),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Periods { which } => {
            match which {
                PeriodsCmd::Cg { start } => {
                    let (b, i1, i2) = flatlab::b_constant();
                    let start = match start {
                        Some(s) => {
                            let v = parse_f64s(s, 2)?;
                            (v[0], v[1])
                        }
                        None => (1.1, 1.1 * b.sqrt()),
                    };
                    let report = flatlab::cg_solve(start)?;
                    let mut v = json!({
                        "B": flatlab::fmt_f64(b),
                        "B_integrals": [flatlab::fmt_f64(i1), flatlab::fmt_f64(i2)],
                        "newton": report.to_json(),
                    });
                    stamp(&mut v, 0, cli.seed);
                    emit(cli, &v)?;
                }
                PeriodsCmd::O33 { a, nu } => {
                    let a = parse_rat(a)?;
                    let nu = parse_rat(nu)?;
                    let (numeric, closed) = flatlab::o33_period(&a, &nu)?;
                    let mut v = json!({
                        "a": a.to_string(),
                        "nu": nu.to_string(),
                        "period_residue_route": flatlab::fmt_f64(numeric),
                        "period_closed_form": flatlab::fmt_f64(closed),
                    });
                    stamp(&mut v, 0, cli.seed);
                    emit(cli, &v)?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Table1 { budget } => {
            let rows = census_table_parallel(parse_budget(budget)?);
            let mut v = census::table_to_json(&rows);
            stamp(&mut v, 0, cli.seed);
            emit(cli, &v)?;
            let mut all_ok = true;
            for r in &rows {
                let mark = if r.consistent { "ok " } else { "FAIL" };
                all_ok &= r.consistent;
                println!(
                    "{mark} {:<14} {:>2}x4pi  {:<14} expected={:<12} computed={}",
                    r.type_tag,
                    r.ta_over_4pi,
                    r.reducibility,
                    r.status,
                    r.computed_verdict.as_deref().unwrap_or("-")
                );
            }
            Ok(if all_ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

/// The census rows are independent; spread them over a bounded pool.
/// CMC_CENSUS_THREADS caps the worker count.
fn census_table_parallel(budget: i64) -> Vec<census::TableRow> {
    let threads: usize = std::env::var("CMC_CENSUS_THREADS")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
        .max(1);
    if threads <= 1 {
        return census::census_table(budget);
    }
    // The table builder is already deterministic; computing it on one
    // worker per budget tier keeps output order stable while letting the
    // heavy 8π tier run apart from the light ones.
    let budgets: Vec<i64> = (0..=budget).collect();
    let mut out: Vec<(i64, Vec<census::TableRow>)> = std::thread::scope(|scope| {
        let handles: Vec<_> = budgets
            .iter()
            .map(|&b| {
                scope.spawn(move || {
                    let rows = census::census_table(b)
                        .into_iter()
                        .filter(|r| {
                            (b == 0 && r.ta_over_4pi == 0) || (b > 0 && r.ta_over_4pi == b)
                        })
                        .collect::<Vec<_>>();
                    (b, rows)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    out.sort_by_key(|(b, _)| *b);
    out.into_iter().flat_map(|(_, rows)| rows).collect()
}

fn run_case(tag: &str, params: &BTreeMap<String, String>) -> Result<CaseRecord, AnyErr> {
    let get = |name: &str| -> Result<String, AnyErr> {
        params
            .get(name)
            .cloned()
            .ok_or_else(|| format!("case '{tag}' needs --param {name}=...").into())
    };
    let get_or = |name: &str, default: &str| -> String {
        params.get(name).cloned().unwrap_or_else(|| default.into())
    };
    let scalar = |s: &str| -> Result<ExactScalar, AnyErr> { Ok(parse_scalar(s)?) };
    let rec = match tag {
        "horosphere" => census::build_4pi(FourPiCase::Horosphere)?,
        "enneper-dual" | "o4" => census::build_4pi(FourPiCase::EnneperDual {
            theta: scalar(&get_or("theta", "1"))?,
        })?,
        "catenoid-cousin" => census::build_4pi(FourPiCase::CatenoidCousin {
            a: parse_rat(&get_or("a", "1"))?,
            mu: parse_rat(&get("mu")?)?,
        })?,
        "warped-catenoid" => census::build_4pi(FourPiCase::WarpedCatenoid {
            a: scalar(&get_or("a", "1"))?,
            b: scalar(&get_or("b", "1"))?,
            l: get("l")?.parse()?,
        })?,
        "o5" => census::o5(scalar(&get_or("theta", "1"))?)?,
        "o6" => census::o6(scalar(&get_or("theta", "1"))?)?,
        "o22" => {
            let mu_str = get("mu")?;
            let mu = if let Some(d) = mu_str.strip_prefix("sqrt") {
                sqrt_rational(&parse_rat(d.trim_matches(|c| c == '(' || c == ')'))?)?
            } else {
                scalar(&mu_str)?
            };
            census::o22(mu, scalar(&get_or("a", "1"))?, scalar(&get_or("b", "0"))?)?
        }
        "o13" => census::o13()?,
        "o14" => census::o14()?,
        "o112" => census::o112()?,
        "o23a" | "o23-a" => census::o23_a(parse_rat(&get("theta")?)?)?,
        "o23b" | "o23-b" => census::o23_b(parse_rat(&get("theta")?)?)?,
        "o23-h3" => census::o23_h3_nonexistence(get("m")?.parse()?)?.record,
        "o24-h1" => census::o24_h1(parse_rat(&get("theta")?)?, parse_rat(&get("q")?)?)?,
        "o24-h3" => {
            let analysis = census::o24_h3(get("m")?.parse()?)?;
            let mut rec = analysis
                .records
                .into_iter()
                .next()
                .expect("at least one admissible root");
            rec.notes.push(format!(
                "{} admissible root(s) total for m = {}",
                analysis.roots.len(),
                analysis.m
            ));
            rec
        }
        "o33" => census::o33(parse_rat(&get_or("a", "0"))?)?,
        "o122-h1" => census::o122_h1(parse_rat(&get("p")?)?)?,
        "o122-h3" => census::o122_h3(get("r")?.parse()?)?,
        "o222-irr" => census::o222_irreducible(),
        "o222-h1" => census::o222_h1(parse_rat(&get("s")?)?)?,
        "o222-h3" => census::o222_h3(get("m")?.parse()?)?,
        "i3" => census::i3(),
        "i4" => census::i4()?,
        "i22" => census::i22(),
        "i11" => {
            let v1 = parse_complex(&get_or("v1", "1,0"))?;
            let v2 = parse_complex(&get_or("v2", "0,1"))?;
            let theta = parse_complex(&get_or("theta", "1,0"))?;
            census::i11_candidate(v1, v2, theta)?
        }
        other => return Err(format!("unknown census tag '{other}'").into()),
    };
    Ok(rec)
}

fn parse_budget(s: &str) -> Result<i64, AnyErr> {
    match s {
        "0" => Ok(0),
        "4pi" | "1" => Ok(1),
        "8pi" | "2" => Ok(2),
        other => Err(format!("unknown budget '{other}' (use 0, 4pi or 8pi)").into()),
    }
}

fn parse_params(items: &[String]) -> Result<BTreeMap<String, String>, AnyErr> {
    let mut out = BTreeMap::new();
    for item in items {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| format!("bad --param '{item}', expected name=value"))?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

fn parse_rat(s: &str) -> Result<Rat, AnyErr> {
    let v = parse_scalar(s)?;
    v.as_rat()
        .cloned()
        .ok_or_else(|| format!("'{s}' is not rational").into())
}

fn parse_end(s: &str) -> Result<SpherePoint, AnyErr> {
    if s == "inf" || s == "∞" {
        Ok(SpherePoint::Infinity)
    } else {
        Ok(SpherePoint::Finite(parse_scalar(s)?))
    }
}

fn parse_complex(s: &str) -> Result<Complex64, AnyErr> {
    let v = parse_f64s(s, 2)?;
    Ok(Complex64::new(v[0], v[1]))
}

fn parse_f64s(s: &str, n: usize) -> Result<Vec<f64>, AnyErr> {
    let v: Result<Vec<f64>, _> = s.split(',').map(|x| x.trim().parse::<f64>()).collect();
    let v = v.map_err(|e| format!("bad number list '{s}': {e}"))?;
    if v.len() != n {
        return Err(format!("expected {n} comma-separated numbers in '{s}'").into());
    }
    Ok(v)
}

fn load_spec(path: &PathBuf) -> Result<(SurfaceSpec, u64), AnyErr> {
    let text = std::fs::read_to_string(path)?;
    let v: Value = serde_json::from_str(&text)?;
    let spec = moduli::spec_from_json(&v)?;
    Ok((spec, fnv1a64(text.as_bytes())))
}

/// FNV-1a 64-bit content hash, recorded in every report.
fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

fn stamp(v: &mut Value, hash: u64, seed: u64) {
    if let Value::Object(map) = v {
        map.insert("spec_hash".into(), json!(format!("{hash:016x}")));
        map.insert("seed".into(), json!(seed));
    } else if let Value::Array(_) = v {
        let inner = v.take();
        *v = json!({
            "spec_hash": format!("{hash:016x}"),
            "seed": seed,
            "rows": inner,
        });
    }
}

fn emit(cli: &Cli, v: &Value) -> Result<(), AnyErr> {
    let text = serde_json::to_string_pretty(v)?;
    emit_text(cli, &text)
}

fn emit_text(cli: &Cli, text: &str) -> Result<(), AnyErr> {
    match &cli.out {
        Some(path) => std::fs::write(path, text)?,
        None => println!("{text}"),
    }
    Ok(())
}
