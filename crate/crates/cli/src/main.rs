//! `monodromy`: build, certify and measure the positive factorizations of
//! the rational blowdown families.
//!
//! Exit codes: 0 every check passed, 1 some check failed, 2 bad input.

mod certificate;
mod text;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use monodromy_core::families::{
    certify_all, certify_script, derive_wprime, family_w, grid, monodromy_for_graph, Family,
    Instance, Monodromy, ScriptDoc,
};
use monodromy_core::fourman::{report, Fibration, ResolutionGraph};
use monodromy_core::mcgword::{parse_word, Params};
use monodromy_core::surfaces::Surface;
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "monodromy",
    version,
    about = "Certified positive factorizations for rational blowdown families"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the fiber and global monodromy of a family member or graph.
    Build(Source),
    /// Derive W' for a family member and certify every step.
    Verify(VerifyArgs),
    /// Homology, intersection form and adjunction data of a factorization.
    Invariants(Source),
}

#[derive(Args)]
struct FamilyArgs {
    /// Family tag, one of d, e, f, g, h, i, j.
    #[arg(long)]
    family: Option<String>,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    p: i64,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    q: i64,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    r: i64,
}

#[derive(Args)]
struct Source {
    #[command(flatten)]
    fam: FamilyArgs,
    /// Resolution graph as JSON: {"weights": [...], "edges": [[i, j], ...]}.
    #[arg(long, value_name = "FILE")]
    graph: Option<PathBuf>,
    /// A twist word such as "a1 a2 a3 out"; needs --planar or --fiber.
    #[arg(long, value_name = "STRING")]
    word: Option<String>,
    /// Planar fiber with N holes, for --word.
    #[arg(long, value_name = "N")]
    planar: Option<usize>,
    /// Genus-1 fiber H,N,U, for --word.
    #[arg(long, value_name = "H,N,U")]
    fiber: Option<String>,
    /// Also write the result as JSON.
    #[arg(long, value_name = "FILE")]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    fam: FamilyArgs,
    /// Certify every family with parameters in 0..=N.
    #[arg(long, value_name = "N")]
    grid: Option<i64>,
    /// Replay this script instead of the built-in derivation.
    #[arg(long, value_name = "FILE")]
    script: Option<PathBuf>,
    /// Write the derivation script as JSON.
    #[arg(long, value_name = "FILE")]
    dump_script: Option<PathBuf>,
    /// Write the certificate as JSON.
    #[arg(long, value_name = "FILE")]
    json: Option<PathBuf>,
}

/// Input problems map to exit code 2; everything else is a verdict.
struct InputError(anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.into())
    }
}

type Outcome = Result<bool, InputError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match cli.cmd {
        Cmd::Build(src) => build(&src),
        Cmd::Verify(args) => verify(&args),
        Cmd::Invariants(src) => invariants(&src),
    };
    match out {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(InputError(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn instance(f: &FamilyArgs) -> Result<Option<Instance>, InputError> {
    let Some(tag) = &f.family else {
        return Ok(None);
    };
    let family: Family = tag.parse()?;
    Ok(Some(Instance::new(
        family,
        Params {
            p: f.p,
            q: f.q,
            r: f.r,
        },
    )?))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), InputError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn read_graph(path: &Path) -> Result<ResolutionGraph, InputError> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let g: ResolutionGraph =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    g.check()?;
    Ok(g)
}

fn surface_arg(src: &Source) -> Result<Surface, InputError> {
    match (src.planar, &src.fiber) {
        (Some(n), None) => Ok(Surface::planar(n)?),
        (None, Some(spec)) => {
            let parts: Vec<usize> = spec
                .split(',')
                .map(|x| x.trim().parse::<usize>())
                .collect::<Result<_, _>>()
                .with_context(|| format!("--fiber expects H,N,U, got '{spec}'"))?;
            let [h, n, u] = parts[..] else {
                return Err(anyhow!("--fiber expects three numbers").into());
            };
            Ok(Surface::fiber(h, n, u)?)
        }
        (None, None) => Err(anyhow!("--word needs --planar N or --fiber H,N,U").into()),
        (Some(_), Some(_)) => Err(anyhow!("give only one of --planar and --fiber").into()),
    }
}

/// The fibration named by the flags, with vertex data when it has a graph.
enum Built {
    Graph(Option<Instance>, Monodromy),
    Word(Arc<Surface>, Vec<monodromy_core::mcgword::Factor>),
}

fn source(src: &Source) -> Result<Built, InputError> {
    let given = [
        src.fam.family.is_some(),
        src.graph.is_some(),
        src.word.is_some(),
    ];
    if given.iter().filter(|&&x| x).count() != 1 {
        return Err(anyhow!("give exactly one of --family, --graph, --word").into());
    }
    if let Some(inst) = instance(&src.fam)? {
        return Ok(Built::Graph(Some(inst), family_w(&inst)?));
    }
    if let Some(path) = &src.graph {
        return Ok(Built::Graph(None, monodromy_for_graph(&read_graph(path)?)?));
    }
    let s = Arc::new(surface_arg(src)?);
    let text = src.word.as_deref().unwrap_or_default();
    let params = Params {
        p: src.fam.p,
        q: src.fam.q,
        r: src.fam.r,
    };
    let w = parse_word(&s, text, params)?;
    Ok(Built::Word(s, w))
}

fn build(src: &Source) -> Outcome {
    let built = source(src)?;
    let (surface, word, inst, graph) = match &built {
        Built::Graph(i, m) => (&*m.surface, &m.word, *i, Some(&m.graph)),
        Built::Word(s, w) => (&**s, w, None, None),
    };
    print!("{}", text::build_text(surface, word, inst.as_ref(), graph));
    if let Some(path) = &src.json {
        write_json(
            path,
            &text::BuildDoc::new(surface, word, inst.as_ref(), graph),
        )?;
    }
    Ok(true)
}

fn invariants(src: &Source) -> Outcome {
    let built = source(src)?;
    let (fib, graph) = match built {
        Built::Graph(_, m) => (m.fibration()?, Some(m.graph.clone())),
        Built::Word(s, w) => (Fibration::new(s, w)?, None),
    };
    let rep = report(&fib)?;
    let doc = text::InvariantDoc::new(&rep, graph.as_ref())?;
    print!("{}", doc.text());
    if let Some(path) = &src.json {
        write_json(path, &doc)?;
    }
    Ok(doc.pass())
}

fn verify(args: &VerifyArgs) -> Outcome {
    if let Some(n) = args.grid {
        if args.fam.family.is_some() || args.script.is_some() {
            return Err(anyhow!("--grid runs every family; drop --family and --script").into());
        }
        if !(0..=16).contains(&n) {
            return Err(anyhow!("--grid expects 0..=16, got {n}").into());
        }
        return verify_grid(n, args.json.as_deref());
    }
    let inst = instance(&args.fam)?.ok_or_else(|| anyhow!("verify needs --family or --grid"))?;
    let (mono, script) = match &args.script {
        Some(path) => {
            let mono = family_w(&inst)?;
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let doc: ScriptDoc = serde_json::from_str(&text)
                .with_context(|| format!("parsing script {}", path.display()))?;
            if doc.instance != inst.label() {
                bail_input(format!(
                    "script is for {}, not {}",
                    doc.instance,
                    inst.label()
                ))?;
            }
            let script = doc.to_script(&mono.surface)?;
            (mono, script)
        }
        None => match derive_wprime(&inst) {
            Ok(d) => (d.monodromy, d.script),
            Err(e) => {
                println!("{}: derivation could not be built: {e}", inst.label());
                return Ok(false);
            }
        },
    };
    if let Some(path) = &args.dump_script {
        write_json(path, &ScriptDoc::new(&inst, &script))?;
    }
    let cert = certify_script(&inst, &mono, &script)?;
    print!("{}", text::verify_text(&cert));
    if let Some(path) = &args.json {
        write_json(path, &certificate::document(&cert, &mono.word))?;
    }
    Ok(cert.checks.pass())
}

fn bail_input(msg: String) -> Result<(), InputError> {
    let r: anyhow::Result<()> = (|| bail!(msg))();
    r.map_err(InputError)
}

fn verify_grid(n: i64, json: Option<&Path>) -> Outcome {
    let insts = grid(n);
    let certs = certify_all(&insts);
    print!("{}", text::grid_text(&insts, &certs));
    let pass = certs
        .iter()
        .all(|c| c.as_ref().is_ok_and(|c| c.checks.pass()));
    if let Some(path) = json {
        let mut docs = Vec::new();
        for (i, c) in insts.iter().zip(&certs) {
            let mono = family_w(i)?;
            docs.push(match c {
                Ok(c) => serde_json::to_value(certificate::document(c, &mono.word))?,
                Err(e) => serde_json::json!({ "instance": i.label(), "error": e.to_string() }),
            });
        }
        write_json(path, &docs)?;
    }
    Ok(pass)
}
