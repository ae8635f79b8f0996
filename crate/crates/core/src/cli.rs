//! `aktonc` command-line front end.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use thiserror::Error;

use crate::digital::{simulate_network, Behaviour, Timing, Waveform};
use crate::metric::{layout, render_ascii, render_svg};
use crate::network::{linearize, reconstruct, Mode, Network};
use crate::rewrite::{apply, Rule};
use crate::sort::check;
use crate::term::{parse, parse_program, print, AtomRegistry, Path, Program, Term};

#[derive(Parser, Debug)]
#[command(name = "aktonc", version, about = "Akton-Algebra toolchain")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
    Svg,
    Ascii,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse and pretty-print the program term.
    Parse(Files),
    /// Infer sorts and interfaces, report well-formedness.
    Check(Files),
    /// Reconstruct the network of a term.
    Graph {
        #[command(flatten)]
        files: Files,
        /// Replace cut pairs by direct edges (default).
        #[arg(long, conflicts_with = "keep_cuts")]
        heal: bool,
        #[arg(long)]
        keep_cuts: bool,
    },
    /// Turn a network (JSON) or a term back into a linear term.
    Linearize(Files),
    /// Apply one replacement rule at a path.
    Rewrite {
        #[command(flatten)]
        files: Files,
        /// `name[:fwd|bwd]`, e.g. `assoc-next:bwd`.
        #[arg(long)]
        rule: String,
        /// Dot-separated operand path, `.` for the root.
        #[arg(long, default_value = ".")]
        path: String,
        /// Term inserted by forward link and expansion rules.
        #[arg(long)]
        operand: Option<String>,
    },
    /// Run the digital simulation.
    Simulate {
        #[command(flatten)]
        files: Files,
        /// `name=bits,...`; the last bit is held.
        #[arg(long, default_value = "")]
        inputs: String,
        #[arg(long, default_value_t = 256)]
        steps: usize,
        #[arg(long, value_enum, default_value = "unit")]
        timing: TimingArg,
        /// Write the per-step edge values as CSV.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Place a metric term on the unit grid.
    Layout(Files),
}

#[derive(Args, Debug)]
pub struct Files {
    /// Input files; `-` reads stdin.
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TimingArg {
    Unit,
    Settle,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{0}")]
    Domain(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 1,
            _ => 2,
        }
    }
}

fn domain(path: &str, e: impl std::fmt::Display) -> CliError {
    CliError::Domain(format!("{path}: {e}"))
}

/// Runs one invocation and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() { write!(stderr, "{e}") } else { write!(stdout, "{e}") };
            return code;
        }
    };
    let mut buf = Vec::new();
    let result = execute(&cli, &mut buf, stderr);
    let write = match &cli.out {
        Some(p) => fs::write(p, &buf).map_err(|source| CliError::Io { path: p.display().to_string(), source }),
        None => stdout.write_all(&buf).map_err(|source| CliError::Io { path: "<stdout>".into(), source }),
    };
    match result.and(write) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "aktonc: {e}");
            e.code()
        }
    }
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    let name = path.display().to_string();
    if name == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|source| CliError::Io { path: name, source })?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|source| CliError::Io { path: name, source })
}

fn load(path: &PathBuf) -> Result<Program, CliError> {
    let src = read(path)?;
    parse_program(&src, &AtomRegistry::new()).map_err(|e| domain(&path.display().to_string(), e))
}

fn format(cli: &Cli, allowed: &[Format], default: Format) -> Result<Format, CliError> {
    let f = cli.format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        let names: Vec<String> = allowed.iter().map(|f| format!("{f:?}").to_lowercase()).collect();
        Err(CliError::Usage(format!("this subcommand supports --format {}", names.join("|"))))
    }
}

fn files(cmd: &Command) -> &[PathBuf] {
    match cmd {
        Command::Parse(f) | Command::Check(f) | Command::Linearize(f) | Command::Layout(f) => &f.files,
        Command::Graph { files, .. } | Command::Rewrite { files, .. } | Command::Simulate { files, .. } => {
            &files.files
        }
    }
}

fn execute(cli: &Cli, out: &mut Vec<u8>, err: &mut dyn Write) -> Result<(), CliError> {
    let paths = files(&cli.command);
    let mut failure = None;
    for path in paths {
        if paths.len() > 1 {
            writeln!(out, "# {}", path.display()).unwrap();
        }
        match one(cli, path, out) {
            Ok(()) => {}
            Err(CliError::Domain(msg)) if paths.len() > 1 => {
                let _ = writeln!(err, "aktonc: {msg}");
                failure = Some(CliError::Domain(format!("{} input(s) failed", paths.len())));
            }
            Err(e) => return Err(e),
        }
    }
    failure.map_or(Ok(()), Err)
}

fn one(cli: &Cli, path: &PathBuf, out: &mut Vec<u8>) -> Result<(), CliError> {
    let name = path.display().to_string();
    match &cli.command {
        Command::Parse(_) => {
            let f = format(cli, &[Format::Text, Format::Json], Format::Text)?;
            let p = load(path)?;
            let t = p.main();
            match f {
                Format::Json => {
                    let v = json!({ "term": print(t), "size": t.size(), "depth": t.depth() });
                    writeln!(out, "{}", serde_json::to_string_pretty(&v).unwrap()).unwrap();
                }
                _ => writeln!(out, "{}", print(t)).unwrap(),
            }
            Ok(())
        }
        Command::Check(_) => {
            let f = format(cli, &[Format::Text, Format::Json], Format::Text)?;
            let p = load(path)?;
            let rep = check(p.main(), &p.registry);
            match f {
                Format::Json => {
                    let mut v = serde_json::to_value(&rep).unwrap();
                    v["well_formed"] = json!(rep.is_well_formed());
                    writeln!(out, "{}", serde_json::to_string_pretty(&v).unwrap()).unwrap();
                }
                _ => {
                    let sort = rep.sort.map_or("undefined".to_string(), |s| s.to_string());
                    writeln!(out, "sort: {sort}").unwrap();
                    writeln!(out, "in: {}", rep.input).unwrap();
                    writeln!(out, "out: {}", rep.output).unwrap();
                    for c in &rep.cuts {
                        writeln!(out, "cut: {:?} atom #{} -> atom #{}", c.family, c.tail, c.head).unwrap();
                    }
                    for v in &rep.violations {
                        writeln!(out, "violation: {v}").unwrap();
                    }
                }
            }
            if rep.is_well_formed() {
                Ok(())
            } else {
                Err(domain(&name, "term is not well-formed"))
            }
        }
        Command::Graph { keep_cuts, .. } => {
            let f = format(cli, &[Format::Text, Format::Json, Format::Dot], Format::Json)?;
            let p = load(path)?;
            let mode = if *keep_cuts { Mode::KeepCuts } else { Mode::Heal };
            let net = reconstruct(p.main(), &p.registry, mode).map_err(|e| domain(&name, e))?;
            write_network(&net, f, out);
            Ok(())
        }
        Command::Linearize(_) => {
            let f = format(cli, &[Format::Text, Format::Json], Format::Text)?;
            let src = read(path)?;
            let reg = AtomRegistry::new();
            let net = if src.trim_start().starts_with('{') {
                Network::from_json(&src, &reg).map_err(|e| domain(&name, e))?
            } else {
                let p = parse_program(&src, &reg).map_err(|e| domain(&name, e))?;
                reconstruct(p.main(), &p.registry, Mode::Heal).map_err(|e| domain(&name, e))?
            };
            let t = linearize(&net, &reg).map_err(|e| domain(&name, e))?;
            write_term(&t, f, out);
            Ok(())
        }
        Command::Rewrite { rule, path: at, operand, .. } => {
            let f = format(cli, &[Format::Text, Format::Json], Format::Text)?;
            let rule: Rule = rule.parse().map_err(CliError::Usage)?;
            let at: Path = at.parse().map_err(CliError::Usage)?;
            let p = load(path)?;
            let operand = operand
                .as_deref()
                .map(|s| parse(s, &p.registry))
                .transpose()
                .map_err(|e| CliError::Usage(format!("--operand: {e}")))?;
            let t = apply(rule, p.main(), &at, &p.registry, operand.as_ref()).map_err(|e| domain(&name, e))?;
            write_term(&t, f, out);
            Ok(())
        }
        Command::Simulate { inputs, steps, timing, trace, .. } => {
            let f = format(cli, &[Format::Text, Format::Json], Format::Text)?;
            let p = load(path)?;
            let net = reconstruct(p.main(), &p.registry, Mode::KeepCuts).map_err(|e| domain(&name, e))?;
            let names = port_names(&p.inputs, net.entries(&p.registry).len(), "Entry");
            let outs = port_names(&p.outputs, net.exits(&p.registry).len(), "Exit");
            let w = Waveform::parse(inputs, &names).map_err(|e| CliError::Usage(format!("--inputs: {e}")))?;
            let timing = match timing {
                TimingArg::Unit => Timing::Unit,
                TimingArg::Settle => Timing::Settle,
            };
            let tr = simulate_network(&net, &p.registry, &w, *steps, timing).map_err(|e| domain(&name, e))?;
            if let Some(csv) = trace {
                fs::write(csv, tr.to_csv())
                    .map_err(|source| CliError::Io { path: csv.display().to_string(), source })?;
            }
            let behaviour = match tr.behaviour {
                Behaviour::Steady { from } => format!("steady from step {from}"),
                Behaviour::Oscillating { from, period } => format!("oscillating with period {period} from step {from}"),
                Behaviour::Truncated => format!("no repeat within {steps} steps"),
            };
            match f {
                Format::Json => {
                    let outputs: serde_json::Map<String, serde_json::Value> = outs
                        .iter()
                        .zip(tr.outputs())
                        .map(|(n, v)| (n.clone(), json!(v.to_string())))
                        .collect();
                    let v = json!({
                        "timing": tr.timing,
                        "behaviour": tr.behaviour,
                        "steps": tr.last().step,
                        "outputs": outputs,
                    });
                    writeln!(out, "{}", serde_json::to_string_pretty(&v).unwrap()).unwrap();
                }
                _ => {
                    writeln!(out, "{behaviour}").unwrap();
                    for (n, v) in outs.iter().zip(tr.outputs()) {
                        writeln!(out, "{n}={v}").unwrap();
                    }
                }
            }
            Ok(())
        }
        Command::Layout(_) => {
            let f = format(cli, &[Format::Ascii, Format::Svg, Format::Json], Format::Ascii)?;
            let p = load(path)?;
            let g = layout(p.main(), &p.registry).map_err(|e| domain(&name, e))?;
            let s = match f {
                Format::Svg => render_svg(&g),
                Format::Json => g.to_json() + "\n",
                _ => render_ascii(&g),
            };
            out.extend_from_slice(s.as_bytes());
            Ok(())
        }
    }
}

fn port_names(given: &[String], count: usize, prefix: &str) -> Vec<String> {
    (0..count).map(|i| given.get(i).cloned().unwrap_or_else(|| format!("{prefix}{}", i + 1))).collect()
}

fn write_term(t: &Term, f: Format, out: &mut Vec<u8>) {
    match f {
        Format::Json => {
            let v = json!({ "term": print(t) });
            writeln!(out, "{}", serde_json::to_string_pretty(&v).unwrap()).unwrap();
        }
        _ => writeln!(out, "{}", print(t)).unwrap(),
    }
}

fn write_network(net: &Network, f: Format, out: &mut Vec<u8>) {
    match f {
        Format::Dot => out.extend_from_slice(net.to_dot().as_bytes()),
        Format::Text => {
            for n in &net.nodes {
                writeln!(out, "node {} {}", n.id, n.atom).unwrap();
            }
            for e in &net.edges {
                writeln!(out, "edge {}:{} -> {}:{} {:?}", e.from.0, e.from.1, e.to.0, e.to.1, e.kind).unwrap();
            }
        }
        _ => writeln!(out, "{}", net.to_json()).unwrap(),
    }
}
