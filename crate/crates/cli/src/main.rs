use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use diameters_core::geometry::{arrangement_weights, rotated_diameter, sandwich_experiment, RotationParams};
use diameters_core::meander::{MeanderFile, ParsedMeander};
use diameters_core::rational;
use diameters_core::reeb::{
    a_grid, build_contour_tree, integrate, maximize_k_lower, quasimorphism_from_tree, radial_quasimorphism,
    QuasimorphismResult, RadialProfile, ScalarField, TriangulatedDisk,
};
use diameters_core::regiongraph::{check_graph_invariants, encode, to_dot};
use diameters_core::suite::invariants_suite;
use diameters_core::transferplan::{make_plan_with, PlanFile};
use diameters_core::{
    build_graph, enumerate_meanders, sample_weights, validate_meander, validate_weights, FinalPushRule,
    WeightedMeander,
};

#[derive(Parser)]
#[command(name = "diameters", version, about = "Certified Hofer-distance bounds for diameters of the disk")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Input file (meander JSON, or mesh/field text for `reeb`)
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Write the main output here instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Seed for sampled weights
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Numeric tolerance for checks against closed forms
    #[arg(long, global = true, default_value_t = 1e-3)]
    tol: f64,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Check a meander file; exits 1 on any violation
    Validate,
    /// List every meander with n crossings
    Enumerate {
        #[arg(long)]
        n: usize,
    },
    /// Region graph of a meander (sampled weights if the file has none)
    Graph,
    /// Leaf-deletion transfer plan and its bound certificate
    Plan {
        #[arg(long, value_enum, default_value_t = RuleArg::BlackNonRoot)]
        rule: RuleArg,
    },
    /// Quasimorphism table for a field (default: radial H_eps on a ring mesh)
    Reeb {
        #[arg(long, value_delimiter = ',', default_values_t = default_a())]
        a: Vec<f64>,
        #[arg(long, default_value_t = 0.05)]
        eps: f64,
        /// Rings of the generated disk mesh (6·rings² triangles)
        #[arg(long, default_value_t = 92)]
        rings: usize,
        /// Also write the contour tree as DOT
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Maximize A(1−A)/(2(1+2A)) over a grid on [1/2, 1)
    Klower {
        #[arg(long, default_value_t = 50)]
        grid: usize,
    },
    /// Rotated diameter as a weighted meander
    Rotate {
        #[arg(long)]
        t: f64,
        #[arg(long, default_value_t = 0.05)]
        eps: f64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Upper costs against the lower rate over a t sweep (CSV)
    Sandwich {
        #[arg(long, default_value_t = 5.0)]
        t_min: f64,
        #[arg(long, default_value_t = 20.0)]
        t_max: f64,
        #[arg(long, default_value_t = 0.5)]
        step: f64,
        #[arg(long, default_value_t = 0.5)]
        a: f64,
        #[arg(long, default_value_t = 0.05)]
        eps: f64,
    },
    /// Run every combinatorial invariant over enumerated meanders
    Invariants {
        #[arg(long, default_value_t = 6)]
        max_n: usize,
        #[arg(long, default_value_t = 5)]
        seeds: u64,
    },
}

fn default_a() -> Vec<f64> {
    (0..10).map(|i| 0.5 + 0.05 * i as f64).collect()
}

#[derive(Clone, Copy, ValueEnum)]
enum RuleArg {
    BlackNonRoot,
    MaxBothColors,
}

impl From<RuleArg> for FinalPushRule {
    fn from(r: RuleArg) -> FinalPushRule {
        match r {
            RuleArg::BlackNonRoot => FinalPushRule::BlackNonRoot,
            RuleArg::MaxBothColors => FinalPushRule::MaxBothColors,
        }
    }
}

/// Result of a command that ran to completion: success, or a domain check
/// that failed (exit code 1).
enum Status {
    Ok,
    Failed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn emit(g: &Global, text: &str) -> Result<()> {
    match &g.output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn read_input(g: &Global) -> Result<String> {
    let Some(path) = &g.input else { bail!("--input is required for this command") };
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_meander(g: &Global) -> Result<ParsedMeander> {
    Ok(MeanderFile::parse(&read_input(g)?)?)
}

fn weighted(g: &Global) -> Result<WeightedMeander> {
    Ok(match read_meander(g)? {
        ParsedMeander::Weighted(wm) => wm,
        ParsedMeander::Plain(m) => sample_weights(&m, g.seed)?,
    })
}

fn run(cli: &Cli) -> Result<Status> {
    let g = &cli.global;
    match &cli.command {
        Command::Validate => validate(g),
        Command::Enumerate { n } => {
            let all = enumerate_meanders(*n)?;
            let text = match g.format {
                Some(Format::Csv) => {
                    let mut s = String::from("start_side,order\n");
                    for m in &all {
                        let order: Vec<String> = m.order.iter().map(ToString::to_string).collect();
                        s += &format!("{},{}\n", m.start_side.letter(), order.join(" "));
                    }
                    s
                }
                _ => {
                    let files: Vec<MeanderFile> = all.iter().map(MeanderFile::from_meander).collect();
                    serde_json::to_string_pretty(&files)? + "\n"
                }
            };
            emit(g, &text)?;
            Ok(Status::Ok)
        }
        Command::Graph => {
            let graph = build_graph(&weighted(g)?)?;
            let text = match g.format {
                Some(Format::Dot) => to_dot(&graph),
                _ => {
                    let vertices: Vec<_> = graph
                        .vertices
                        .iter()
                        .map(|v| {
                            json!({
                                "id": v.id.to_string(),
                                "color": v.color.letter().to_string(),
                                "side": v.side.letter().to_string(),
                                "weight": rational::format(&v.weight),
                                "root": v.is_root,
                            })
                        })
                        .collect();
                    let edges: Vec<_> = graph
                        .edges
                        .iter()
                        .map(|e| json!({"index": e.index, "north": e.north.to_string(), "south": e.south.to_string()}))
                        .collect();
                    let report = check_graph_invariants(&graph);
                    let doc = json!({
                        "vertices": vertices,
                        "edges": edges,
                        "encoding": encode(&graph)?,
                        "checks": report,
                    });
                    serde_json::to_string_pretty(&doc)? + "\n"
                }
            };
            emit(g, &text)?;
            Ok(Status::Ok)
        }
        Command::Plan { rule } => {
            let plan = make_plan_with(&weighted(g)?, (*rule).into())?;
            if let Some(path) = &g.output {
                fs::write(path, PlanFile::from_plan(&plan).to_json())
                    .with_context(|| format!("writing {}", path.display()))?;
            } else if g.format == Some(Format::Json) {
                println!("{}", PlanFile::from_plan(&plan).to_json());
            }
            println!("{}", plan.certificate_line());
            Ok(if plan.certified { Status::Ok } else { Status::Failed })
        }
        Command::Reeb { a, eps, rings, dot } => reeb(g, a, *eps, *rings, dot.as_deref()),
        Command::Klower { grid } => {
            let (a, k) = maximize_k_lower(&a_grid(*grid))?;
            let line = format!("A*={} K*={}\n", rational::to_f64(&a), rational::to_f64(&k));
            emit(g, &line)?;
            Ok(Status::Ok)
        }
        Command::Rotate { t, eps, samples, out } => {
            let params = RotationParams { eps: *eps, samples: *samples, ..RotationParams::new(*t) };
            let arrangement = arrangement_weights(&rotated_diameter(&params)?)?;
            let text = MeanderFile::from_weighted(&arrangement.weighted).to_json() + "\n";
            match out {
                Some(path) => fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?,
                None => emit(g, &text)?,
            }
            eprintln!(
                "n={} area_sum={:.6} max_adjustment={:.2e}",
                arrangement.weighted.meander.n(),
                arrangement.area_sum,
                arrangement.max_adjustment
            );
            Ok(Status::Ok)
        }
        Command::Sandwich { t_min, t_max, step, a, eps } => {
            if !(*step > 0.0) || t_max < t_min {
                bail!("need t_min <= t_max and step > 0");
            }
            let count = ((t_max - t_min) / step + 1e-9).floor() as usize + 1;
            let ts: Vec<f64> = (0..count).map(|i| t_min + step * i as f64).collect();
            let base = RotationParams { eps: *eps, ..RotationParams::new(0.0) };
            let report = sandwich_experiment(&ts, *a, &base)?;
            let text = match g.format {
                Some(Format::Json) => serde_json::to_string_pretty(&report)? + "\n",
                _ => report.to_csv(),
            };
            emit(g, &text)?;
            eprintln!(
                "lower rate {:.6}, fitted upper slope {:.6}, margin {:.6}",
                report.lower_rate, report.fitted_slope, report.margin
            );
            Ok(if report.holds { Status::Ok } else { Status::Failed })
        }
        Command::Invariants { max_n, seeds } => {
            let report = invariants_suite(*max_n, *seeds)?;
            emit(g, &(report.to_json() + "\n"))?;
            Ok(if report.all_pass { Status::Ok } else { Status::Failed })
        }
    }
}

fn validate(g: &Global) -> Result<Status> {
    let parsed = match MeanderFile::parse(&read_input(g)?) {
        Ok(p) => p,
        Err(e) => {
            println!("invalid: {e}");
            return Ok(Status::Failed);
        }
    };
    let mut report = validate_meander(parsed.meander());
    if report.valid {
        if let ParsedMeander::Weighted(wm) = &parsed {
            report = validate_weights(wm);
        }
    }
    if report.valid {
        println!("valid: n={}", parsed.meander().n());
        Ok(Status::Ok)
    } else {
        for v in &report.violations {
            println!("invalid: {v}");
        }
        Ok(Status::Failed)
    }
}

fn reeb(g: &Global, a_values: &[f64], eps: f64, rings: usize, dot: Option<&Path>) -> Result<Status> {
    let profile = RadialProfile::h_eps(eps)?;
    let radial = g.input.is_none();
    let field = if radial {
        ScalarField::from_radial(Arc::new(TriangulatedDisk::ring_disk(rings)?), &profile)
    } else {
        ScalarField::parse(&read_input(g)?)?
    };
    let tree = build_contour_tree(&field)?;
    if let Some(path) = dot {
        fs::write(path, tree.to_dot()).with_context(|| format!("writing {}", path.display()))?;
    }
    let cal = integrate(&field);
    let rows: Vec<QuasimorphismResult> =
        a_values.iter().map(|&a| quasimorphism_from_tree(&tree, cal, a)).collect::<diameters_core::Result<_>>()?;
    // the radial field has a closed form to check against
    let analytic: Vec<Option<f64>> = rows
        .iter()
        .map(|r| if radial { radial_quasimorphism(&profile, r.a).ok().map(|x| x.r_a_rate) } else { None })
        .collect();
    let mut ok = true;
    let text = match g.format {
        Some(Format::Json) => serde_json::to_string_pretty(&rows)? + "\n",
        Some(Format::Csv) => {
            let mut s = String::from("a,cal,cal_a,r_a,lower_rate,root_fallback\n");
            for r in &rows {
                s += &format!(
                    "{},{:.9},{:.9},{:.9},{:.9},{}\n",
                    r.a, r.cal_rate, r.cal_a_rate, r.r_a_rate, r.lower_bound_rate, r.root_fallback
                );
            }
            s
        }
        _ => {
            let mut s = format!(
                "{:>6} {:>12} {:>12} {:>12} {:>12}  {}\n",
                "A", "Cal", "Cal_A", "r_A", "lower", "note"
            );
            for (r, exact) in rows.iter().zip(&analytic) {
                let mut note = String::new();
                if r.root_fallback {
                    note += "root-fallback ";
                }
                if let Some(x) = exact {
                    let err = (r.r_a_rate - x).abs();
                    if err > g.tol {
                        ok = false;
                    }
                    note += &format!("err={err:.2e}");
                }
                s += &format!(
                    "{:>6.3} {:>12.6} {:>12.6} {:>12.6} {:>12.6}  {}\n",
                    r.a, r.cal_rate, r.cal_a_rate, r.r_a_rate, r.lower_bound_rate, note.trim_end()
                );
            }
            s += "lower bound on d(L, phi_t L): t * lower - C, with C the unknown defect constant\n";
            s
        }
    };
    emit(g, &text)?;
    Ok(if ok { Status::Ok } else { Status::Failed })
}
