//! Command-line front end for the workbench.
//!
//! Every subcommand prints a human-readable report, or with `--json` the
//! corresponding machine schema on one line.  JSON maps are B-trees all the
//! way down, so identical invocations produce byte-identical output.
//!
//! Exit codes: 0 success, 2 parse or usage error, 3 a verification check
//! failed, 4 a degree demand escaped the bound.
//!
//! The degree bound is resolved per invocation: an explicit `--maxdeg` flag
//! first, a `@D` suffix on a module name next (the two must agree when both
//! appear), then the `STEEM_MAXDEG` environment variable, then a default
//! of 16.

use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use steem::em::{
    corner_maps, detect_collapse, e1_page, e2_page, EMError, EMInput,
};
use steem::homological::{lambda, poly, square_zero, tensor_algebra, tor, GradedAlgebraPresentation};
use steem::io;
use steem::simplicial::{cobar_cosimplicial_rows, make_space};
use steem::steenrod::{
    decompose_sq2n_sq2n, multiply, parse_element, AdmissibleMonomial, Decomposition,
    SteenrodElement, SteenrodError,
};
use steem::suites::{a1_suite, a2_suite, classes_suite, SuiteReport};
use steem::unstable::catalog::make_catalog;
use steem::unstable::filtration::{nilpotent_filtration, weight};
use steem::unstable::{BoundedUnstableModule, UnstableError};

const DEFAULT_BOUND: usize = 16;

#[derive(Parser)]
#[command(name = "steem", version, about = "Workbench for the mod-2 Steenrod algebra and the Eilenberg-Moore spectral sequence")]
struct Cli {
    /// Emit the machine-readable JSON schema instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Rewrite a Steenrod word into the admissible basis.
    Adem {
        /// Expression like "Sq2 Sq2", or a +-joined sum of words.
        expr: String,
    },
    /// Decompose Sq^{2^n}Sq^{2^n} over A(n) and re-verify the witness.
    AnLemma {
        #[arg(long)]
        n: u32,
    },
    /// Nilpotent filtration of a catalog module.
    Nilfilt {
        #[arg(long)]
        module: String,
        #[arg(long)]
        maxdeg: Option<usize>,
    },
    /// Weight of a reduced catalog module.
    Weight {
        #[arg(long)]
        module: String,
        #[arg(long)]
        maxdeg: Option<usize>,
    },
    /// Tor of F2 with itself over a catalog algebra.
    Tor {
        /// Algebra name: Lambda(d), Poly(d), SquareZero(d,...), Tensor(A,B).
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        smax: usize,
        #[arg(long)]
        tmax: usize,
    },
    /// Eilenberg-Moore E2 report for the loop space of a sphere.
    EmLoops {
        /// The base space, written sphere:<m> with m >= 2.
        #[arg(long)]
        space: String,
        #[arg(long)]
        maxdeg: Option<usize>,
    },
    /// Levelwise dimensions of the geometric cobar construction of x -> y <- z.
    Cobar {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        z: String,
        #[arg(long, default_value_t = 3)]
        smax: usize,
        #[arg(long)]
        maxdeg: Option<usize>,
    },
    /// Run a reproducible verification suite.
    Verify {
        /// One of A1, A2, classes, all.
        #[arg(long)]
        suite: String,
        /// Seed for the randomized instance stream.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

/// Typed errors sort into the documented exit codes; anything else is a
/// usage problem.
fn exit_code_for(e: &anyhow::Error) -> u8 {
    fn bound_talk(msg: &str) -> bool {
        ["bound", "room", "exceeds", "escapes", "too small"]
            .iter()
            .any(|w| msg.contains(w))
    }
    for cause in e.chain() {
        if let Some(u) = cause.downcast_ref::<UnstableError>() {
            return match u {
                UnstableError::OutOfBound { .. } => 4,
                UnstableError::InvalidParameter(msg) if bound_talk(msg) => 4,
                _ => 2,
            };
        }
        if let Some(m) = cause.downcast_ref::<EMError>() {
            return match m {
                EMError::Window { .. } => 4,
                EMError::Unstable(UnstableError::OutOfBound { .. }) => 4,
                EMError::InvalidParameter(msg) if bound_talk(msg) => 4,
                _ => 2,
            };
        }
        if cause.downcast_ref::<SteenrodError>().is_some() {
            return 2;
        }
    }
    2
}

fn env_maxdeg() -> anyhow::Result<Option<usize>> {
    match std::env::var("STEEM_MAXDEG") {
        Err(_) => Ok(None),
        Ok(s) => s
            .trim()
            .parse::<usize>()
            .map(Some)
            .map_err(|_| anyhow!("STEEM_MAXDEG must be a degree, got {s:?}")),
    }
}

fn resolve_bound(flag: Option<usize>, default: usize) -> anyhow::Result<usize> {
    Ok(match flag {
        Some(f) => f,
        None => env_maxdeg()?.unwrap_or(default),
    })
}

/// Build a catalog module, reconciling a `@D` name suffix with `--maxdeg`.
fn resolve_module(
    name: &str,
    flag: Option<usize>,
) -> anyhow::Result<BoundedUnstableModule> {
    if let Some((_, suffix)) = name.rsplit_once('@') {
        let pinned: usize = suffix
            .trim()
            .parse()
            .map_err(|_| anyhow!("bad bound suffix in {name:?}"))?;
        if let Some(f) = flag {
            if f != pinned {
                bail!("{name:?} pins the bound at {pinned}, but --maxdeg says {f}");
            }
        }
        return Ok(make_catalog(name, pinned)?);
    }
    let bound = resolve_bound(flag, DEFAULT_BOUND)?;
    Ok(make_catalog(name, bound)?)
}

/// Algebra names for `tor`: Lambda(d), Poly(d), SquareZero(d,...),
/// Tensor(A,B), nested freely.
fn make_algebra(name: &str, bound: usize) -> anyhow::Result<GradedAlgebraPresentation> {
    let name = name.trim();
    let args = |rest: &str| -> Vec<String> {
        let mut out = Vec::new();
        let mut depth = 0usize;
        let mut cur = String::new();
        for c in rest.chars() {
            match c {
                '(' => {
                    depth += 1;
                    cur.push(c);
                }
                ')' => {
                    depth -= 1;
                    cur.push(c);
                }
                ',' if depth == 0 => out.push(std::mem::take(&mut cur)),
                _ => cur.push(c),
            }
        }
        out.push(cur);
        out
    };
    if let Some(rest) = name.strip_prefix("Lambda(").and_then(|r| r.strip_suffix(')')) {
        let d: usize = rest.trim().parse().context("Lambda wants a generator degree")?;
        if d == 0 {
            bail!("Lambda wants a positive generator degree");
        }
        return Ok(lambda(d, bound));
    }
    if let Some(rest) = name.strip_prefix("Poly(").and_then(|r| r.strip_suffix(')')) {
        let d: usize = rest.trim().parse().context("Poly wants a generator degree")?;
        if d == 0 {
            bail!("Poly wants a positive generator degree");
        }
        return Ok(poly(d, bound));
    }
    if let Some(rest) = name.strip_prefix("SquareZero(").and_then(|r| r.strip_suffix(')')) {
        let degrees: Vec<usize> = rest
            .split(',')
            .map(|s| s.trim().parse().context("SquareZero wants degrees"))
            .collect::<Result<_, _>>()?;
        if degrees.iter().any(|&d| d == 0) {
            bail!("SquareZero wants positive degrees");
        }
        return Ok(square_zero(&degrees, bound));
    }
    if let Some(rest) = name.strip_prefix("Tensor(").and_then(|r| r.strip_suffix(')')) {
        let parts = args(rest);
        if parts.len() != 2 {
            bail!("Tensor wants two algebras: {name:?}");
        }
        return Ok(tensor_algebra(
            &make_algebra(&parts[0], bound)?,
            &make_algebra(&parts[1], bound)?,
        ));
    }
    bail!("unknown algebra name {name:?}: expected Lambda(d), Poly(d), SquareZero(d,...) or Tensor(A,B)")
}

fn emit(json_mode: bool, value: &Value, text: &str) {
    if json_mode {
        println!("{}", serde_json::to_string(value).expect("json trees print"));
    } else {
        println!("{text}");
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.cmd {
        Cmd::Adem { expr } => {
            let reduced = parse_element(&expr)?;
            emit(
                cli.json,
                &json!({"input": expr, "reduced": reduced.to_string()}),
                &reduced.to_string(),
            );
            Ok(ExitCode::SUCCESS)
        }

        Cmd::AnLemma { n } => an_lemma(cli.json, n),

        Cmd::Nilfilt { module, maxdeg } => {
            let m = resolve_module(&module, maxdeg)?;
            let f = nilpotent_filtration(&m)?;
            let mut text = format!(
                "nilpotent filtration of {} through degree {}\n",
                m.name(),
                m.bound()
            );
            for s in 0..f.depth() {
                let dims = f
                    .stage_dims(s)
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(" ");
                text.push_str(&format!("  M_{s}: {dims}\n"));
            }
            text.push_str(&format!(
                "  naive fixed points agree: {}\n",
                f.naive_agrees()
            ));
            let mut escapes = Vec::new();
            for s in 0..f.depth() {
                for d in 0..=f.bound() {
                    if f.escaped(s, d) {
                        escapes.push(format!("({s},{d})"));
                    }
                }
            }
            text.push_str(&if escapes.is_empty() {
                "  window escapes: none".to_string()
            } else {
                format!("  window escapes: {}", escapes.join(" "))
            });
            emit(cli.json, &io::filtration_to_json(m.name(), &f), &text);
            Ok(ExitCode::SUCCESS)
        }

        Cmd::Weight { module, maxdeg } => {
            let m = resolve_module(&module, maxdeg)?;
            let w = weight(&m)?;
            emit(
                cli.json,
                &json!({"module": m.name(), "weight": w}),
                &format!("weight({}) = {w}", m.name()),
            );
            Ok(ExitCode::SUCCESS)
        }

        Cmd::Tor {
            algebra,
            smax,
            tmax,
        } => {
            let alg = make_algebra(&algebra, tmax)?;
            let triv = alg.trivial_module();
            let table = tor(&alg, &triv, &triv, smax, tmax);
            let mut text = format!("Tor over {}, s <= {smax}, t <= {tmax}\n", alg.name());
            for (&(s, t), &d) in &table.dims {
                text.push_str(&format!("  (-{s},{t}): {d}\n"));
            }
            text.push_str(&format!("  {} nonzero bidegrees", table.dims.len()));
            emit(cli.json, &io::tor_to_json(&table), &text);
            Ok(ExitCode::SUCCESS)
        }

        Cmd::EmLoops { space, maxdeg } => em_loops(cli.json, &space, maxdeg),

        Cmd::Cobar {
            x,
            y,
            z,
            smax,
            maxdeg,
        } => {
            let t_max = resolve_bound(maxdeg, 4)?;
            let cap = t_max + 1;
            let xs = make_space(&x, cap)?;
            let ys = make_space(&y, cap)?;
            let zs = make_space(&z, cap)?;
            let rows = cobar_cosimplicial_rows(&xs, &ys, &zs, smax, t_max)?;
            let identities_ok = rows.verify_identities().is_ok();
            let mut dims = serde_json::Map::new();
            let mut text = format!(
                "geometric cobar of {x} -> {y} <- {z}, levels 0..={smax}, degrees 0..={t_max}\n"
            );
            for n in 0..=rows.n_max() {
                let line: Vec<String> = (0..=rows.t_max())
                    .map(|t| rows.dim(n, t).to_string())
                    .collect();
                text.push_str(&format!("  level {n}: {}\n", line.join(" ")));
                for t in 0..=rows.t_max() {
                    if rows.dim(n, t) > 0 {
                        dims.insert(format!("({n},{t})"), json!(rows.dim(n, t)));
                    }
                }
            }
            text.push_str(&format!("  cosimplicial identities: {identities_ok}"));
            emit(
                cli.json,
                &json!({
                    "x": x, "y": y, "z": z,
                    "smax": smax, "maxdeg": t_max,
                    "dims": dims,
                    "cosimplicial_identities": identities_ok,
                }),
                &text,
            );
            Ok(if identities_ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            })
        }

        Cmd::Verify { suite, seed } => {
            let bound = resolve_bound(None, DEFAULT_BOUND)?;
            let mut reports: Vec<SuiteReport> = Vec::new();
            match suite.as_str() {
                "A1" => reports.push(a1_suite(seed, 100, bound)?),
                "A2" => reports.push(a2_suite(bound)?),
                "classes" => reports.push(classes_suite()?),
                "all" => {
                    reports.push(a1_suite(seed, 100, bound)?);
                    reports.push(a2_suite(bound)?);
                    reports.push(classes_suite()?);
                }
                other => bail!("unknown suite {other:?}: expected A1, A2, classes or all"),
            }
            let all_pass = reports.iter().all(SuiteReport::passed);
            if cli.json {
                let arr: Vec<Value> = reports.iter().map(io::suite_report_to_json).collect();
                println!("{}", serde_json::to_string(&Value::Array(arr))?);
            } else {
                for r in &reports {
                    print!("{r}");
                }
            }
            Ok(if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            })
        }
    }
}

fn an_lemma(json_mode: bool, n: u32) -> anyhow::Result<ExitCode> {
    let search_bound = 1u32 << (n + 1);
    let mid = SteenrodElement::from_monomial(AdmissibleMonomial::new(vec![1 << n]));
    let target = multiply(&mid, &mid);
    match decompose_sq2n_sq2n(n, search_bound)? {
        Decomposition::NotFound => {
            eprintln!("no decomposition found within total degree {search_bound}");
            Ok(ExitCode::from(3))
        }
        Decomposition::Witness { triples } => {
            let mut sum = SteenrodElement::zero(target.degree());
            for (a, b, c) in &triples {
                sum.add_assign(&multiply(&multiply(a, b), c));
            }
            let verified = sum == target;
            let shown: Vec<[String; 3]> = triples
                .iter()
                .map(|(a, b, c)| [a.to_string(), b.to_string(), c.to_string()])
                .collect();
            let mut text = format!("Sq{p} Sq{p} =\n", p = 1 << n);
            for [a, b, c] in &shown {
                text.push_str(&format!("    ({a}) · {b} · ({c})\n"));
            }
            text.push_str(&format!(
                "  re-multiplied sum equals {target}: {verified}"
            ));
            emit(
                json_mode,
                &json!({
                    "n": n,
                    "target": target.to_string(),
                    "triples": shown,
                    "verified": verified,
                }),
                &text,
            );
            Ok(if verified {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            })
        }
    }
}

fn em_loops(json_mode: bool, space: &str, maxdeg: Option<usize>) -> anyhow::Result<ExitCode> {
    let dim: usize = space
        .strip_prefix("sphere:")
        .ok_or_else(|| anyhow!("unknown space {space:?}: expected sphere:<m>"))?
        .parse()
        .map_err(|_| anyhow!("bad sphere dimension in {space:?}"))?;
    if dim < 2 {
        bail!("sphere dimension must be >= 2 for a simply connected base");
    }
    let bound = resolve_bound(maxdeg, DEFAULT_BOUND)?;
    if bound < 2 * dim {
        return Err(EMError::InvalidParameter(format!(
            "bound {bound} too small for S^{dim}: need at least {}",
            2 * dim
        ))
        .into());
    }
    let alg = lambda(dim, bound);
    let triv = alg.trivial_module();
    let input = EMInput::new(alg, triv.clone(), triv)?;
    let s_max = bound / dim;
    let p2 = e2_page(&e1_page(&input, s_max, bound)?)?;
    let cert = detect_collapse(&p2)?;
    let corner = if cert.holds {
        Some(corner_maps(&p2, &input, &cert)?)
    } else {
        None
    };

    let mut checks: Vec<(String, bool, String)> = Vec::new();
    checks.push((
        "E2 collapses on the window".into(),
        cert.holds,
        format!(
            "{} bidegrees examined, {} violations",
            cert.examined.len(),
            cert.violations.len()
        ),
    ));
    // ΩS^m has one cohomology class in each degree divisible by m − 1
    let n = dim - 1;
    let horizon = s_max * n;
    let mismatches: Vec<usize> = (0..=horizon)
        .filter(|&k| p2.total_degree_dim(k) != usize::from(k % n == 0))
        .collect();
    checks.push((
        format!("loop-space dims through degree {horizon}"),
        mismatches.is_empty(),
        if mismatches.is_empty() {
            format!("one class per multiple of {n}")
        } else {
            format!("wrong dims at {mismatches:?}")
        },
    ));
    let edge_ok = corner
        .as_ref()
        .and_then(|c| c.edge.get(&dim))
        .map(|m| m.rows() == 1 && !m.is_zero())
        .unwrap_or(false);
    checks.push((
        "corner sends the sphere class to the loop class".into(),
        edge_ok,
        format!("edge matrix at t = {dim} has rank 1: {edge_ok}"),
    ));
    if let Some(c) = &corner {
        checks.push((
            "unit corner is F2 in degree 0".into(),
            c.unit_corner_ok,
            format!("loop degree shift {}", c.loop_degree_shift),
        ));
    }

    let all_pass = checks.iter().all(|(_, p, _)| *p);
    let mut text = format!("E2 for loops on S^{dim}, window s <= {s_max}, t <= {bound}\n");
    for (&(s, t), &d) in &p2.dims() {
        text.push_str(&format!("  (-{s},{t}): {d}\n"));
    }
    for (name, pass, witness) in &checks {
        text.push_str(&format!(
            "  [{}] {name} — {witness}\n",
            if *pass { "pass" } else { "FAIL" }
        ));
    }
    text.pop();
    emit(
        json_mode,
        &io::em_report_to_json(&p2, &cert, corner.as_ref(), &checks),
        &text,
    );
    Ok(if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(3)
    })
}
