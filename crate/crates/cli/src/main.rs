//! `hfsign`: sign assignments on formal flows and integral grid homology.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hfsign_core::diagram::GridDiagram;
use hfsign_core::gf2::Family;
use hfsign_core::homology;
use hfsign_core::signs::{
    self, find_gauge, solve_global, solve_profile1, GaugeMap, Gauged, SignEvaluator, SignTable, Twisted,
    VerifyMode,
};
use hfsign_core::{perm, CurveFrame, Error, FormalFlow, Limits, SignSource};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(name = "hfsign", version, about = "Sign assignments on formal flows and integral grid homology")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Engine {
    Profile1,
    Global,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Coefficients {
    Z,
    F2,
    Q,
}

#[derive(Subcommand)]
enum Command {
    /// Count generators, bigons and rectangles of power n.
    Counts {
        #[arg(long)]
        n: usize,
    },
    /// Solve the sign system and optionally save the table.
    Solve {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Engine::Profile1)]
        engine: Engine,
        /// Allow the global solve at n = 4.
        #[arg(long)]
        allow_large: bool,
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// Dimension of the solution space over all flows, before gauge fixing.
    Dimension {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        allow_large: bool,
    },
    /// Sign of one flow, given as JSON.
    SignOf {
        #[arg(long)]
        flow: String,
        /// Read signs from a saved table instead of the evaluator.
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// Check the relations of the chosen families.
    Verify {
        #[arg(long)]
        n: usize,
        /// Comma-separated: degenerations, disjoint, grid, flip, basic (default all).
        #[arg(long, value_delimiter = ',')]
        families: Vec<Family>,
        /// Check this many seeded random instances instead of all.
        #[arg(long)]
        samples: Option<usize>,
        /// Expect alpha-degenerations to give -1 and beta-degenerations +1.
        #[arg(long)]
        swapped: bool,
        /// Multiply the signs by sgn(sigma) * prod(epsilon) of the start.
        #[arg(long)]
        twist: bool,
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// Decide whether two sign tables differ by a gauge transformation.
    GaugeCompare {
        /// Compare the evaluator with the global solution at this power.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        a: Option<PathBuf>,
        #[arg(long)]
        b: Option<PathBuf>,
    },
    /// Homology of a grid diagram.
    Homology {
        #[arg(long)]
        diagram: PathBuf,
        #[arg(long, value_enum, default_value_t = Coefficients::Z)]
        coefficients: Coefficients,
        /// Save the signed differential as sparse triplets.
        #[arg(long)]
        export_matrix: Option<PathBuf>,
    },
    /// Add stabilization units to a diagram.
    Stabilize {
        #[arg(long)]
        diagram: PathBuf,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// Compare homology across random gauges, curve orders and orientations.
    Invariance {
        #[arg(long)]
        diagram: PathBuf,
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
    },
    /// Run the convention calibration suite.
    Calibrate {
        /// Powers to calibrate (default 1,2,3).
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
        #[arg(long, default_value_t = 5)]
        frames: usize,
    },
}

/// Exit status 1: a check ran and failed. Status 2: bad input.
enum Failure {
    Check(String),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::DifferentialNotSquareZero(_) | Error::InconsistentSystem(_) | Error::NotEquivalent(_) => {
                Failure::Check(e.to_string())
            }
            Error::DimensionMismatch { .. } | Error::DecompositionCountMismatch { .. } => Failure::Check(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

struct Report {
    json: Value,
    text: String,
    ok: bool,
}

impl Report {
    fn ok(json: Value, text: String) -> Self {
        Report { json, text, ok: true }
    }
}

fn limits() -> Result<Limits, Failure> {
    let mut l = Limits::default();
    if let Ok(v) = std::env::var("HFSIGN_MAX_N") {
        let m: usize = v.trim().parse().map_err(|_| Failure::Input(format!("HFSIGN_MAX_N={v:?} is not a number")))?;
        l.enumeration = m;
        l.profile1 = m;
    }
    Ok(l)
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_table(path: &Path) -> Result<SignTable, Failure> {
    let v: Value = serde_json::from_str(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok(SignTable::from_json(&v)?)
}

fn read_diagram(path: &Path) -> Result<GridDiagram, Failure> {
    Ok(GridDiagram::parse(&read(path)?)?)
}

fn global_bound(l: &Limits, allow_large: bool) -> Limits {
    Limits { global: if allow_large { l.global.max(4) } else { l.global }, ..*l }
}

fn evaluator(n: usize, l: &Limits) -> Result<SignEvaluator, Failure> {
    Ok(SignEvaluator::build(n, l)?)
}

fn counts(n: usize, l: &Limits) -> Result<Report, Failure> {
    let gens = hfsign_core::enumerate_generators(n, l)?.len();
    let (b, r) = hfsign_core::enumerate_flows(n, l)?;
    Ok(Report::ok(
        json!({"n": n, "generators": gens, "bigons": b.len(), "rectangles": r.len()}),
        format!("generators {gens}\nbigons {}\nrectangles {}\n", b.len(), r.len()),
    ))
}

fn solve(n: usize, engine: Engine, allow_large: bool, table: Option<&Path>, l: &Limits) -> Result<Report, Failure> {
    let s = match engine {
        Engine::Profile1 => solve_profile1(n, l)?,
        Engine::Global => solve_global(n, &global_bound(l, allow_large))?,
    };
    if let Some(p) = table {
        write(p, &format!("{}\n", s.table.to_json()))?;
    }
    let scope = serde_json::to_value(s.table.scope).unwrap();
    Ok(Report::ok(
        json!({"n": n, "scope": scope, "dimension": s.dimension, "variables": s.variables,
               "rows": s.rows, "instances": s.instances, "entries": s.table.len()}),
        format!(
            "power {n}, scope {}\nvariables {}\nrows {} (from {} instances)\nsolution-space dimension {}\n",
            scope.as_str().unwrap_or_default(),
            s.variables,
            s.rows,
            s.instances,
            s.dimension
        ),
    ))
}

fn dimension(n: usize, allow_large: bool, l: &Limits) -> Result<Report, Failure> {
    let s = solve_global(n, &global_bound(l, allow_large))?;
    Ok(Report::ok(json!({"n": n, "dimension": s.dimension}), format!("{}\n", s.dimension)))
}

fn sign_of(flow: &str, table: Option<&Path>, l: &Limits) -> Result<Report, Failure> {
    let f: FormalFlow = serde_json::from_str(flow).map_err(|e| Failure::Input(format!("flow: {e}")))?;
    let s = match table {
        Some(p) => read_table(p)?.sign(&f)?,
        None => evaluator(f.power(), l)?.sign(&f)?,
    };
    Ok(Report::ok(json!({"flow": f.key(), "sign": s}), format!("{}\n", s.to_i64())))
}

struct VerifyArgs<'a> {
    n: usize,
    families: &'a [Family],
    samples: Option<usize>,
    swapped: bool,
    twist: bool,
    table: Option<&'a Path>,
}

fn verify(a: VerifyArgs, seed: u64, l: &Limits) -> Result<Report, Failure> {
    let families = if a.families.is_empty() { Family::ALL.to_vec() } else { a.families.to_vec() };
    let mode = match a.samples {
        Some(count) => VerifyMode::Sampled { count, seed },
        None => VerifyMode::Exhaustive,
    };
    let src: Box<dyn SignSource> = match a.table {
        Some(p) => {
            let t = read_table(p)?;
            if t.n != a.n {
                return Err(Failure::Input(format!("table has power {}, not {}", t.n, a.n)));
            }
            Box::new(t)
        }
        None => Box::new(evaluator(a.n, l)?),
    };
    let src: Box<dyn SignSource> = if a.twist { Box::new(Twisted(src)) } else { src };
    let rep = signs::verify(&src, &families, mode, a.swapped, l)?;
    Ok(Report { json: serde_json::to_value(&rep).unwrap(), text: rep.to_text(), ok: rep.passed() })
}

fn gauge_compare(n: Option<usize>, a: Option<&Path>, b: Option<&Path>, l: &Limits) -> Result<Report, Failure> {
    let (s1, s2): (Box<dyn SignSource>, Box<dyn SignSource>);
    let flows;
    match (n, a, b) {
        (Some(n), None, None) => {
            let g = solve_global(n, l)?.table;
            flows = g.flows();
            s1 = Box::new(evaluator(n, l)?);
            s2 = Box::new(g);
        }
        (None, Some(a), Some(b)) => {
            let (ta, tb) = (read_table(a)?, read_table(b)?);
            flows = ta.flows();
            if tb.flows() != flows {
                return Err(Failure::Input("the tables cover different flows".into()));
            }
            s1 = Box::new(ta);
            s2 = Box::new(tb);
        }
        _ => return Err(Failure::Input("give either --n or both --a and --b".into())),
    }
    let (equivalent, restricted) = match find_gauge(&s1, &s2, &flows) {
        Ok(u) => {
            let gens: Vec<_> = flows.iter().map(|f| f.start().clone()).collect();
            // restricted if u is constant on the sign profiles of each permutation
            let restricted = gens.iter().all(|x| {
                gens.iter().filter(|y| y.sigma() == x.sigma()).all(|y| u.value(x) == u.value(y))
            });
            (true, restricted)
        }
        Err(Error::NotEquivalent(_)) => (false, false),
        Err(e) => return Err(e.into()),
    };
    Ok(Report {
        json: json!({"flows": flows.len(), "equivalent": equivalent, "restricted": restricted}),
        text: format!(
            "{} flows: {}\n",
            flows.len(),
            match (equivalent, restricted) {
                (true, true) => "gauge equivalent (restricted gauge)",
                (true, false) => "gauge equivalent",
                _ => "not gauge equivalent",
            }
        ),
        ok: equivalent,
    })
}

fn homology_cmd(path: &Path, coeff: Coefficients, export: Option<&Path>, l: &Limits) -> Result<Report, Failure> {
    let d = read_diagram(path)?;
    let gens = perm::factorial(d.n) << d.b_stab;
    if coeff == Coefficients::F2 && export.is_none() {
        let dim = homology::f2_homology_dim(&d)?;
        return Ok(Report::ok(json!({"generators": gens, "f2_dim": dim}), format!("dim over F2 {dim}\n")));
    }
    let ev = evaluator(d.power(), l)?;
    let m = homology::differential(&d, &ev)?;
    if let Some(p) = export {
        write(p, &m.to_triplets())?;
    }
    if let Some(w) = homology::d_squared_witness(&d, &ev)? {
        let text = format!("d^2 != 0: coefficient {} from generator {} to {}\n", w.value, w.from, w.to);
        return Ok(Report { json: json!({"d_squared_zero": false, "witness": w}), text, ok: false });
    }
    Ok(match coeff {
        Coefficients::Z => {
            let h = homology::homology_of(&d, &m)?;
            let ok = h.is_coherent();
            Report { json: serde_json::to_value(&h).unwrap(), text: format!("{}\n", h.to_text()), ok }
        }
        Coefficients::F2 => {
            let dim = homology::f2_homology_dim(&d)?;
            Report::ok(json!({"generators": gens, "f2_dim": dim}), format!("dim over F2 {dim}\n"))
        }
        Coefficients::Q => {
            let q = m.rows - 2 * homology::rational_rank(&m);
            Report::ok(json!({"generators": gens, "q_rank": q}), format!("rank over Q {q}\n"))
        }
    })
}

fn stabilize(path: &Path, k: usize) -> Result<Report, Failure> {
    let d = read_diagram(path)?.stabilized(k);
    let v = d.to_json();
    Ok(Report::ok(v.clone(), format!("{v}\n")))
}

fn invariance(path: &Path, trials: u64, seed: u64, l: &Limits) -> Result<Report, Failure> {
    let d = read_diagram(path)?;
    let ev = evaluator(d.power(), l)?;
    let reference = homology::homology(&d, &ev)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    let mut ok = true;
    let mut record = |kind: &str, h: homology::HomologyResult| {
        let same = h == reference;
        ok &= same;
        rows.push(json!({"kind": kind, "betti": h.betti, "agrees": same}));
    };
    for _ in 0..trials {
        let g = Gauged { inner: &ev, gauge: GaugeMap::Seeded { seed: rand::Rng::gen(&mut rng), restricted: false } };
        record("gauge", homology::homology(&d, &g)?);
    }
    for _ in 0..trials {
        let mut f = d.frame.clone();
        f.alpha_order.shuffle(&mut rng);
        f.beta_order.shuffle(&mut rng);
        record("order", homology::homology(&d.with_frame(f)?, &ev)?);
    }
    for _ in 0..trials {
        let r = CurveFrame::random(d.n, &mut rng);
        let f = CurveFrame { alpha_orient: r.alpha_orient, beta_orient: r.beta_orient, ..d.frame.clone() };
        record("orientation", homology::homology(&d.with_frame(f)?, &ev)?);
    }
    let agreeing = rows.iter().filter(|r| r["agrees"] == true).count();
    let total = rows.len();
    Ok(Report {
        json: json!({"reference": reference, "trials": rows, "agree": ok}),
        text: format!("reference {}\n{agreeing} of {total} variants agree\n", reference.to_text()),
        ok,
    })
}

fn calibrate(n: &[usize], frames: usize, seed: u64, l: &Limits) -> Result<Report, Failure> {
    let powers = if n.is_empty() { vec![1, 2, 3] } else { n.to_vec() };
    let rep = hfsign_core::calibrate::calibrate(&powers, frames, seed, l)?;
    let ok = rep.passed();
    Ok(Report { json: serde_json::to_value(&rep).unwrap(), text: rep.to_text(), ok })
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    let l = limits()?;
    match &cli.command {
        Command::Counts { n } => counts(*n, &l),
        Command::Solve { n, engine, allow_large, table } => solve(*n, *engine, *allow_large, table.as_deref(), &l),
        Command::Dimension { n, allow_large } => dimension(*n, *allow_large, &l),
        Command::SignOf { flow, table } => sign_of(flow, table.as_deref(), &l),
        Command::Verify { n, families, samples, swapped, twist, table } => verify(
            VerifyArgs {
                n: *n,
                families,
                samples: *samples,
                swapped: *swapped,
                twist: *twist,
                table: table.as_deref(),
            },
            cli.seed,
            &l,
        ),
        Command::GaugeCompare { n, a, b } => gauge_compare(*n, a.as_deref(), b.as_deref(), &l),
        Command::Homology { diagram, coefficients, export_matrix } => {
            homology_cmd(diagram, *coefficients, export_matrix.as_deref(), &l)
        }
        Command::Stabilize { diagram, k } => stabilize(diagram, *k),
        Command::Invariance { diagram, trials } => invariance(diagram, *trials, cli.seed, &l),
        Command::Calibrate { n, frames } => calibrate(n, *frames, cli.seed, &l),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(rep) => {
            let out = match cli.format {
                Format::Json => format!("{}\n", serde_json::to_string_pretty(&rep.json).unwrap()),
                Format::Text => rep.text,
            };
            let written = match &cli.output {
                Some(p) => write(p, &out),
                None => {
                    print!("{out}");
                    Ok(())
                }
            };
            match written {
                Err(Failure::Input(m)) | Err(Failure::Check(m)) => {
                    eprintln!("error: {m}");
                    ExitCode::from(2)
                }
                Ok(()) if rep.ok => ExitCode::SUCCESS,
                Ok(()) => ExitCode::from(1),
            }
        }
        Err(Failure::Check(m)) => {
            eprintln!("check failed: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            eprintln!("hint: run `hfsign --help` for usage");
            ExitCode::from(2)
        }
    }
}
