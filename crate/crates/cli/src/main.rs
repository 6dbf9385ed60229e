use std::process::ExitCode;

use cherednik::jobs::{run_job, JobSpec, Report};
use cherednik::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

#[derive(Parser)]
#[command(name = "cher", version, about = "Exact computations in rational Cherednik algebras")]
struct Cli {
    /// Run a JSON job file instead of a subcommand.
    #[arg(long, global = true)]
    job: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for randomized checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Group structure: info, reflections, parabolics, characters.
    Group {
        op: String,
        #[arg(long)]
        group: String,
    },
    /// Algebra operations: normal, multiply, associativity, fourier, opposite.
    Algebra {
        op: String,
        #[command(flatten)]
        ctx: ContextArgs,
        #[arg(long)]
        expr: Option<String>,
        #[arg(long)]
        rhs: Option<String>,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Module operations: hilbert, gk, holonomic, relations, singular.
    Module {
        op: String,
        #[command(flatten)]
        ctx: ContextArgs,
        /// A module kind (verma, regular, verma:sign) or a JSON module record.
        #[arg(long, default_value = "verma")]
        module: String,
        #[arg(long)]
        window: Option<usize>,
        #[arg(long)]
        truncation: Option<u32>,
        #[arg(long)]
        degree: Option<u32>,
        #[arg(long)]
        bound: Option<u32>,
    },
    /// Rank-1 Laurent modules: reducible, reduce, ladders, cycle, pushforward.
    Rank1 {
        op: String,
        #[arg(long)]
        m: u32,
        /// c_1, ..., c_{m-1}; a single value is used for every reflection.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        c: Vec<String>,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        p: String,
        #[arg(long)]
        bound: Option<i64>,
        #[arg(long)]
        window: Option<usize>,
    },
    /// Parameter regularity: regular.
    Params {
        op: String,
        #[arg(long)]
        mode: Option<String>,
        #[arg(long, num_args = 1.., value_delimiter = ',')]
        degrees: Option<Vec<u32>>,
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        m: Option<u32>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        c: Vec<String>,
        #[arg(long)]
        bound: Option<u32>,
    },
}

#[derive(Args)]
struct ContextArgs {
    /// Named family (cyclic:m, s3-reflection, minus-id:r, trivial:r) or a group JSON file.
    #[arg(long)]
    group: String,
    /// Comma-separated parameter values: one constant, or one per reflection class.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    c: Vec<String>,
}

fn group_value(g: &str) -> Result<Value, Error> {
    if g.ends_with(".json") {
        let text = std::fs::read_to_string(g).map_err(|e| Error::InvalidInput(format!("{g}: {e}")))?;
        serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("{g}: {e}")))
    } else {
        Ok(json!(g))
    }
}

fn module_value(src: &str) -> Result<Value, Error> {
    if src.trim_start().starts_with('{') {
        return serde_json::from_str(src).map_err(|e| Error::InvalidInput(format!("module: {e}")));
    }
    Ok(match src.split_once(':') {
        Some((kind, ch)) => json!({ "kind": kind, "character": ch }),
        None => json!({ "kind": src }),
    })
}

fn insert_opt<T: Into<Value> + Clone>(map: &mut Map<String, Value>, key: &str, v: &Option<T>) {
    if let Some(v) = v {
        map.insert(key.into(), v.clone().into());
    }
}

fn job_value(cmd: &Command, seed: Option<u64>) -> Result<Value, Error> {
    let mut map = Map::new();
    match cmd {
        Command::Group { op, group } => {
            map.insert("command".into(), json!("group"));
            map.insert("op".into(), json!(op));
            map.insert("group".into(), group_value(group)?);
        }
        Command::Algebra { op, ctx, expr, rhs, samples } => {
            map.insert("command".into(), json!("algebra"));
            map.insert("op".into(), json!(op));
            map.insert("group".into(), group_value(&ctx.group)?);
            map.insert("c".into(), json!(ctx.c));
            insert_opt(&mut map, "expr", expr);
            insert_opt(&mut map, "rhs", rhs);
            insert_opt(&mut map, "samples", samples);
            insert_opt(&mut map, "seed", &seed);
        }
        Command::Module { op, ctx, module, window, truncation, degree, bound } => {
            map.insert("command".into(), json!("module"));
            map.insert("op".into(), json!(op));
            map.insert("group".into(), group_value(&ctx.group)?);
            map.insert("c".into(), json!(ctx.c));
            map.insert("module".into(), module_value(module)?);
            insert_opt(&mut map, "window", window);
            insert_opt(&mut map, "truncation", truncation);
            insert_opt(&mut map, "degree", degree);
            insert_opt(&mut map, "bound", bound);
        }
        Command::Rank1 { op, m, c, p, bound, window } => {
            let c = if c.len() == 1 && *m > 2 { vec![c[0].clone(); (*m - 1) as usize] } else { c.clone() };
            map.insert("command".into(), json!("rank1"));
            map.insert("op".into(), json!(op));
            map.insert("m".into(), json!(m));
            map.insert("c".into(), json!(c));
            map.insert("p".into(), json!(p));
            insert_opt(&mut map, "bound", bound);
            insert_opt(&mut map, "window", window);
        }
        Command::Params { op, mode, degrees, group, m, c, bound } => {
            map.insert("command".into(), json!("params"));
            map.insert("op".into(), json!(op));
            map.insert("c".into(), json!(c));
            insert_opt(&mut map, "mode", mode);
            insert_opt(&mut map, "degrees", degrees);
            if let Some(g) = group {
                map.insert("group".into(), group_value(g)?);
            }
            insert_opt(&mut map, "m", m);
            insert_opt(&mut map, "bound", bound);
        }
    }
    Ok(Value::Object(map))
}

fn build_job(cli: &Cli) -> Result<JobSpec, Error> {
    match (&cli.job, &cli.command) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{path}: {e}")))?;
            let mut job = JobSpec::from_json(&text)?;
            if let (Some(s), JobSpec::Algebra { seed, .. }) = (cli.seed, &mut job) {
                *seed = Some(s);
            }
            Ok(job)
        }
        (None, Some(cmd)) => {
            let v = job_value(cmd, cli.seed)?;
            serde_json::from_value(v).map_err(|e| Error::InvalidInput(format!("job: {e}")))
        }
        (Some(_), Some(_)) => Err(Error::InvalidInput("give either --job or a subcommand, not both".into())),
        (None, None) => Err(Error::InvalidInput("nothing to do: give --job or a subcommand".into())),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match build_job(&cli) {
        Ok(job) => run_job(&job),
        Err(e) => Report {
            command: cli.command.as_ref().map_or("job", command_name).to_string(),
            op: String::new(),
            outcome: Err(e),
        },
    };
    let out = match cli.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    print!("{out}");
    if let Err(e) = &report.outcome {
        eprintln!("cher: {e}");
    }
    ExitCode::from(report.exit_code() as u8)
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Group { .. } => "group",
        Command::Algebra { .. } => "algebra",
        Command::Module { .. } => "module",
        Command::Rank1 { .. } => "rank1",
        Command::Params { .. } => "params",
    }
}
