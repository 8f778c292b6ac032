use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use gentle_core::conditions::{decide, Analysis};
use gentle_core::dsl::parse_quiver;
use gentle_core::error::{RecoverError, WitnessError};
use gentle_core::exec::{with_threads, Execution};
use gentle_core::expr::{parse_module, render_ledger};
use gentle_core::field::PrimeField;
use gentle_core::fixtures;
use gentle_core::jordan::{genjf, Coverage, Engine, Exactness, OracleOptions};
use gentle_core::partition::JordanData;
use gentle_core::quiver::{GentleQuiver, Quiver};
use gentle_core::recover::{recover, Branch};
use gentle_core::rep::{hom_dim, Summand};
use gentle_core::strings::{enumerate_bands, hom_dim_combinatorial, strings_through};
use gentle_core::witness::{find_witness, verify_witness, Witness, WitnessKind};

mod selftest;

#[derive(Parser)]
#[command(name = "gentle", version, about = "Gentle quivers, string modules and generic Jordan forms")]
struct Cli {
    /// Prime field used for modules and the oracle.
    #[arg(long, global = true, default_value_t = 3)]
    prime: u32,
    /// Largest oracle search space enumerated exhaustively.
    #[arg(long, global = true, default_value_t = 1 << 22, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineChoice {
    Auto,
    Structural,
    Oracle,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a quiver file describes a gentle, admissible quiver.
    Validate { file: PathBuf },
    /// Basis of the gentle algebra: the nonzero paths.
    Basis { file: PathBuf },
    /// Strings through a vertex, or all strings up to a length.
    Strings {
        file: PathBuf,
        #[arg(long)]
        vertex: Option<String>,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
    },
    /// Bands up to rotation and inversion.
    Bands {
        file: PathBuf,
        #[arg(long, default_value_t = 6)]
        max_len: usize,
    },
    /// Conditions and verdicts at a vertex (every vertex if omitted).
    Analyze {
        file: PathBuf,
        #[arg(long)]
        vertex: Option<String>,
        /// Attach a verified counterexample or a recovery demonstration.
        #[arg(long)]
        witness: bool,
    },
    /// Generic Jordan form of a module.
    Genjf {
        file: PathBuf,
        #[arg(long)]
        module: String,
        #[arg(long, value_enum, default_value_t = EngineChoice::Auto)]
        engine: EngineChoice,
        /// Vertex for the structural route.
        #[arg(long)]
        vertex_hint: Option<String>,
    },
    /// Dimension of Hom(X, Y), by graph maps and by linear algebra.
    Homdim { file: PathBuf, x: String, y: String },
    /// The module at a vertex with the given generic Jordan form.
    Recover {
        file: PathBuf,
        #[arg(long)]
        vertex: String,
        #[arg(long)]
        jf: String,
    },
    /// Runs the bundled example suite.
    Selftest,
}

/// Failures that map to exit code 1.
#[derive(Debug)]
struct Negative(String);

impl std::fmt::Display for Negative {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Negative {}

fn negative(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(Negative(msg.into()))
}

struct Ctx {
    field: PrimeField,
    opts: OracleOptions,
    json: bool,
}

/// Reads a quiver file; `fixture:<name>` names a bundled example.
fn read_quiver(path: &PathBuf) -> anyhow::Result<Quiver> {
    let s = path.to_string_lossy();
    let text = match s.strip_prefix("fixture:") {
        Some(name) => fixtures::source(name)
            .ok_or_else(|| anyhow!("no bundled fixture named `{name}`"))?
            .to_string(),
        None => std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?,
    };
    parse_quiver(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn load_gentle(path: &PathBuf) -> anyhow::Result<Arc<GentleQuiver>> {
    let q = read_quiver(path)?;
    GentleQuiver::new(q)
        .map(Arc::new)
        .map_err(|e| negative(format!("{}: {e}", path.display())))
}

fn vertex(q: &Quiver, name: &str) -> anyhow::Result<usize> {
    q.vertex(name).ok_or_else(|| anyhow!("unknown vertex `{name}`"))
}

fn print(ctx: &Ctx, human: String, value: Value) {
    use std::io::Write;
    let text = if ctx.json {
        serde_json::to_string_pretty(&value).expect("json")
    } else {
        human
    };
    // A closed pipe downstream is not an error worth reporting.
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn tick(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn human_analysis(a: &Analysis) -> String {
    let f = &a.flags;
    let mut lines = vec![format!("quiver {}, vertex m = {}", a.quiver, a.vertex)];
    for (name, c) in [
        ("minuscule", &f.minuscule),
        ("(o)", &f.o),
        ("(i)", &f.i),
        ("(i*)", &f.istar),
        ("(ii)(a)", &f.iia),
        ("(ii)(b)", &f.iib),
    ] {
        lines.push(format!("  {name:<10} {:<4} {}", tick(c.holds), c.detail));
    }
    lines.push(format!("  Jordan recoverable:             {}", tick(a.jr)));
    lines.push(format!("  canonically Jordan recoverable: {}", tick(a.cjr)));
    if let Some(r) = &a.reduction {
        lines.push(format!(
            "  A_n reduction along {}: vertices {}, arrows {}",
            r.string,
            r.vertices.join(" "),
            r.arrows.join(" ")
        ));
    }
    lines.join("\n")
}

fn witness_json(w: &Witness, transcript: &[String]) -> Value {
    let q = w.x.quiver();
    json!({
        "kind": w.kind(),
        "case": w.case,
        "prime": w.prime(),
        "x": w.x_expr(),
        "y": w.y_expr(),
        "arrow": w.arrow.map(|a| q.label(a).to_string()),
        "genjf": w.jf.render(q),
        "dual": w.dual,
        "transcript": transcript,
    })
}

fn witness_human(w: &Witness, transcript: &[String]) -> String {
    let q = w.x.quiver();
    let mut lines = vec![];
    match w.kind() {
        WitnessKind::JrPair => {
            lines.push(format!("  witness ({:?}): X = {}", w.case, w.x_expr()));
            lines.push(format!("                 Y = {}", w.y_expr()));
            lines.push(format!("  X and Y are not isomorphic, GenJF(X) = GenJF(Y) = {}", w.jf.render(q)));
        }
        WitnessKind::CjrRep => {
            lines.push(format!("  witness ({:?}): X = {}", w.case, w.x_expr()));
            lines.push(format!("  {}", w.y_expr()));
            lines.push(format!("  W carries a nilpotent endomorphism of type GenJF(X) = {}", w.jf.render(q)));
        }
    }
    if w.dual {
        lines.push("  (strings found in the opposite quiver)".into());
    }
    lines.push(format!("  verified over F_{}:", w.prime()));
    lines.extend(transcript.iter().map(|t| format!("    {t}")));
    lines.join("\n")
}

fn analyze_one(ctx: &Ctx, q: &Arc<GentleQuiver>, m: usize, with_witness: bool) -> anyhow::Result<(String, Value)> {
    let a = decide(q, m)?;
    let mut human = human_analysis(&a);
    let mut value = serde_json::to_value(&a)?;
    if !with_witness {
        return Ok((human, value));
    }
    if a.jr && a.cjr {
        // Round trip through a small module of the subcategory.
        let sigma = strings_through(q, m, None)?;
        let parts: Vec<_> = sigma
            .iter()
            .take(3)
            .map(|w| gentle_core::rep::Representation::string_module(q.clone(), ctx.field, w))
            .collect::<Result<_, _>>()?;
        let x = gentle_core::rep::Representation::direct_sum(&parts)?;
        let g = genjf(&x, Some(m), &ctx.opts)?;
        let r = recover(q, m, &g.jf, ctx.field, &ctx.opts)?;
        let xs = render_ledger(q, &ctx.field, x.ledger().unwrap_or(&[]));
        let rs = render_ledger(q, &ctx.field, r.module.ledger().unwrap_or(&[]));
        let same = gentle_core::iso::decompose_ledgered(&x, &r.module) == gentle_core::iso::IsoVerdict::Iso;
        human.push_str(&format!(
            "\n  recovery: X = {xs}, GenJF(X) = {}, recovered {rs} ({})",
            g.jf.render(q),
            if same { "isomorphic to X" } else { "NOT isomorphic to X" }
        ));
        value["recovery"] = json!({"x": xs, "genjf": g.jf.render(q), "recovered": rs, "isomorphic": same});
        if !same {
            print(ctx, human, value);
            return Err(negative("recovery did not return the module"));
        }
        return Ok((human, value));
    }
    let w = find_witness(q, m, &ctx.opts).map_err(|e| negative(e.to_string()))?;
    let transcript = verify_witness(&w, &ctx.opts).map_err(|e| negative(e.to_string()))?;
    human.push('\n');
    human.push_str(&witness_human(&w, &transcript));
    value["witness"] = witness_json(&w, &transcript);
    Ok((human, value))
}

fn exactness_str(e: Exactness) -> &'static str {
    match e {
        Exactness::ProvenExact => "proven exact",
        Exactness::ExhaustiveOverFp => "exhaustive maximum over the prime field",
        Exactness::SampledLowerBound => "sampled lower bound",
    }
}

fn run(cli: &Cli) -> anyhow::Result<()> {
    let field = PrimeField::new(cli.prime).map_err(|e| anyhow!("--prime: {e}"))?;
    let ctx = Ctx {
        field,
        opts: OracleOptions {
            budget: cli.budget,
            seed: cli.seed,
            exec: Execution::Parallel,
            exhaustive_only: false,
        },
        json: cli.format == Format::Json,
    };
    match &cli.command {
        Command::Validate { file } => {
            let q = read_quiver(file)?;
            let report = q.validate_gentle();
            let human = if report.ok() {
                format!("{}: gentle and admissible", q.name())
            } else {
                let mut s = format!("{}: not gentle", q.name());
                for v in &report.violations {
                    s.push_str(&format!("\n  [{}] {}", v.rule, v.detail));
                }
                s
            };
            print(&ctx, human, json!({"quiver": q.name(), "ok": report.ok(), "violations": report.violations}));
            if !report.ok() {
                return Err(negative(""));
            }
        }
        Command::Basis { file } => {
            let q = load_gentle(file)?;
            let basis = q.algebra_basis()?;
            let names: Vec<String> = basis.iter().map(|p| p.render(&q)).collect();
            print(
                &ctx,
                format!("dim A = {}\n{}", names.len(), names.join(" ")),
                json!({"dimension": names.len(), "basis": names}),
            );
        }
        Command::Strings { file, vertex: v, max_len } => {
            let q = load_gentle(file)?;
            let words = match v {
                Some(name) => {
                    let m = vertex(&q, name)?;
                    match strings_through(&q, m, None) {
                        Ok(ws) => ws,
                        Err(gentle_core::error::StringError::InfiniteFamily { .. }) => {
                            strings_through(&q, m, Some(*max_len))?
                        }
                        Err(e) => return Err(e.into()),
                    }
                }
                None => gentle_core::strings::all_strings(&q, *max_len),
            };
            let names: Vec<String> = words.iter().map(|w| w.render(&q)).collect();
            let title = match v {
                Some(m) => format!("Σ_Q({m}): {} strings", names.len()),
                None => format!("{} strings of length at most {max_len}", names.len()),
            };
            print(&ctx, format!("{title}\n{}", names.join("\n")), json!({"strings": names}));
        }
        Command::Bands { file, max_len } => {
            let q = load_gentle(file)?;
            let names: Vec<String> = enumerate_bands(&q, *max_len)?.iter().map(|w| w.render(&q)).collect();
            print(
                &ctx,
                format!("{} bands of length at most {max_len}\n{}", names.len(), names.join("\n")),
                json!({"bands": names}),
            );
        }
        Command::Analyze { file, vertex: v, witness } => {
            let q = load_gentle(file)?;
            let ms: Vec<usize> = match v {
                Some(name) => vec![vertex(&q, name)?],
                None => (0..q.vertex_count()).collect(),
            };
            let mut humans = Vec::new();
            let mut values = Vec::new();
            for m in ms {
                let (h, val) = analyze_one(&ctx, &q, m, *witness)?;
                humans.push(h);
                values.push(val);
            }
            let value = if values.len() == 1 { values.pop().expect("one") } else { Value::Array(values) };
            print(&ctx, humans.join("\n\n"), value);
        }
        Command::Genjf {
            file,
            module,
            engine,
            vertex_hint,
        } => {
            let q = load_gentle(file)?;
            let x = parse_module(q.clone(), field, module)?;
            let hint = vertex_hint.as_deref().map(|n| vertex(&q, n)).transpose()?;
            let g = match engine {
                EngineChoice::Auto => genjf(&x, hint, &ctx.opts)?,
                EngineChoice::Structural => {
                    let m = hint.ok_or_else(|| anyhow!("--engine structural needs --vertex-hint"))?;
                    let g = genjf(&x, Some(m), &ctx.opts)?;
                    if g.engine != Engine::Structural {
                        return Err(negative("the structural route does not apply to this module"));
                    }
                    g
                }
                EngineChoice::Oracle => genjf(&x, None, &ctx.opts)?,
            };
            let coverage = g.coverage.as_ref().map(|c| match c {
                Coverage::Exhaustive { visited } => format!("exhaustive, {visited} points"),
                Coverage::TopReached { visited } => format!("single blocks reached after {visited} points"),
                Coverage::Sampled { samples } => format!("{samples} samples"),
            });
            let mut human = format!("GenJF = {}\n  engine: {:?}, {}", g.jf.render(&q), g.engine, exactness_str(g.exactness));
            if let Some(c) = &coverage {
                human.push_str(&format!(" ({c})"));
            }
            print(
                &ctx,
                human,
                json!({
                    "genjf": g.jf.render(&q),
                    "engine": g.engine,
                    "exactness": g.exactness,
                    "coverage": g.coverage,
                    "prime": field.p(),
                }),
            );
        }
        Command::Homdim { file, x, y } => {
            let q = load_gentle(file)?;
            let xm = parse_module(q.clone(), field, x)?;
            let ym = parse_module(q.clone(), field, y)?;
            let linear = hom_dim(&xm, &ym)?;
            let strings_only = |l: &[Summand<u32>]| -> Option<Vec<gentle_core::word::Word>> {
                l.iter()
                    .map(|s| match s {
                        Summand::String(w) => Some(w.clone()),
                        Summand::Band { .. } => None,
                    })
                    .collect()
            };
            let combinatorial = match (xm.ledger().and_then(strings_only), ym.ledger().and_then(strings_only)) {
                (Some(a), Some(b)) => Some(
                    a.iter()
                        .flat_map(|u| b.iter().map(move |v| (u, v)))
                        .map(|(u, v)| hom_dim_combinatorial(&q, u, v))
                        .sum::<usize>(),
                ),
                _ => None,
            };
            let human = match combinatorial {
                Some(c) => format!("dim Hom(X, Y) = {linear} (kernel), {c} (graph maps)"),
                None => format!("dim Hom(X, Y) = {linear} (kernel)"),
            };
            print(&ctx, human, json!({"kernel": linear, "graph_maps": combinatorial}));
            if combinatorial.is_some_and(|c| c != linear) {
                return Err(negative("the two counts disagree"));
            }
        }
        Command::Recover { file, vertex: v, jf } => {
            let q = load_gentle(file)?;
            let m = vertex(&q, v)?;
            let data = JordanData::parse(&q, jf)?;
            match recover(&q, m, &data, field, &ctx.opts) {
                Ok(r) => {
                    let s = render_ledger(&q, &field, r.module.ledger().unwrap_or(&[]));
                    let how = match r.branch {
                        Branch::Linear => "linear system over dimension vectors".to_string(),
                        Branch::Search => format!("search over {} candidates", r.examined),
                    };
                    print(&ctx, format!("{s}\n  ({how})"), json!({"module": s, "branch": r.branch}));
                }
                Err(e @ (RecoverError::NoSolution(_) | RecoverError::Precondition(_))) => {
                    print(&ctx, format!("NoSolution: {e}"), json!({"module": null, "error": e.to_string()}));
                    return Err(negative(""));
                }
                Err(e) => return Err(e.into()),
            }
        }
        Command::Selftest => {
            let results = selftest::run(&ctx.opts);
            let failed = results.iter().filter(|r| !r.pass).count();
            let human: Vec<String> = results
                .iter()
                .map(|r| format!("{} {:<40} {}", if r.pass { "PASS" } else { "FAIL" }, r.name, r.detail))
                .collect();
            let value: Vec<Value> = results
                .iter()
                .map(|r| json!({"name": r.name, "pass": r.pass, "detail": r.detail}))
                .collect();
            print(&ctx, format!("{}\n{} of {} checks passed", human.join("\n"), results.len() - failed, results.len()), Value::Array(value));
            if failed > 0 {
                return Err(negative(""));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match with_threads(cli.threads, || run(&cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if let Some(n) = e.downcast_ref::<Negative>() {
                if !n.0.is_empty() {
                    eprintln!("error: {n}");
                }
                return ExitCode::from(1);
            }
            if let Some(WitnessError::NoFailure) = e.downcast_ref::<WitnessError>() {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
