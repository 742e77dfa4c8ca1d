//! Command-line front end.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::construct::{
    combine_boolean, compile_affine, compile_mod, compile_semilinear_with_grid, compile_threshold, complement,
    parallel_compose, AffineSpec, BoolOp, ModSpec, Oracle, SemilinearSpec, ThresholdSpec, DEFAULT_DOMAIN_GRID,
};
use crate::crn::{Configuration, Crn};
use crate::device::{Device, Expected, OutputSpec, OutputValue, Vote};
use crate::error::{Error, Result};
use crate::format::{format_execution, format_step, parse_device, parse_execution, parse_oracle, serialize_device};
use crate::invariant::{check, find_linear_invariants, Invariant};
use crate::reach::{verify, Cap, Model, Verdict, Verification, DEFAULT_CAP_EXTRA, DEFAULT_CAP_STATES};
use crate::sweep::{verify_point, worst, GridPoint, PointOutcome, SweepOptions};
use crate::transform::{eliminate_reverse_splits, replay};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REFUTED: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

/// Exit status for a verdict.
pub fn exit_status(v: &Verdict) -> i32 {
    match v {
        Verdict::VerifiedUpToCap { .. } => EXIT_OK,
        Verdict::Refuted { .. } => EXIT_REFUTED,
        Verdict::Inconclusive { .. } => EXIT_INCONCLUSIVE,
    }
}

#[derive(Parser, Debug)]
#[command(name = "rrcrn", version, about = "Reverse-robust chemical reaction networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compile a construction into a device file.
    Compile {
        #[command(subcommand)]
        what: CompileCmd,
    },
    /// Bounded verification of stable or reverse-robust computation.
    Verify(VerifyArgs),
    /// Check or discover invariants.
    Invariants {
        #[command(subcommand)]
        what: InvariantsCmd,
    },
    /// Replay or normalize executions.
    Trace {
        #[command(subcommand)]
        what: TraceCmd,
    },
}

#[derive(Args, Debug)]
struct OutArg {
    /// Output file (stdout when absent).
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum CompileCmd {
    /// Decider for sum w_i x_i = c (mod m).
    Mod {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        weights: Vec<i64>,
        #[arg(long, allow_hyphen_values = true)]
        residue: i64,
        #[arg(long)]
        modulus: i64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Decider for sum w_i x_i >= t.
    Threshold {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        weights: Vec<i64>,
        #[arg(long, allow_hyphen_values = true)]
        threshold: i64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Swap the voters of a decider.
    Not {
        input: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Conjunction of two deciders.
    And {
        first: PathBuf,
        second: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Disjunction of two deciders.
    Or {
        first: PathBuf,
        second: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Diff-representation computer for b + sum a_i (x_i - c_i).
    Affine {
        /// Rational coefficients such as `1/2,-3`.
        #[arg(long, allow_hyphen_values = true)]
        coefficients: String,
        #[arg(long, value_delimiter = ',')]
        offsets: Vec<i64>,
        #[arg(long, default_value_t = 0)]
        constant: i64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Piecewise-affine computer; each piece is `A C b | PREDICATE`,
    /// e.g. `1/2 0 0 | mod 1 0 2`.
    Semilinear {
        #[arg(long = "piece", required = true, allow_hyphen_values = true)]
        pieces: Vec<String>,
        /// Side of the grid on which domains are checked for a partition.
        #[arg(long, default_value_t = DEFAULT_DOMAIN_GRID)]
        domain_grid: i64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Run devices side by side on split copies of the input.
    Parallel {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModelArg {
    Stable,
    ReverseRobust,
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Model {
        match m {
            ModelArg::Stable => Model::Stable,
            ModelArg::ReverseRobust => Model::ReverseRobust,
        }
    }
}

#[derive(Args, Debug)]
struct VerifyArgs {
    device: PathBuf,
    #[arg(long, value_enum, default_value = "reverse-robust")]
    model: ModelArg,
    /// Input counts such as `X1=3,X2=0`; unspecified inputs are 0.
    #[arg(long, conflicts_with = "grid")]
    input: Option<String>,
    /// Sweep every input in [grid-min, G]^k.
    #[arg(long)]
    grid: Option<u32>,
    #[arg(long, default_value_t = 0)]
    grid_min: u32,
    /// Molecules allowed above the initial total.
    #[arg(long, default_value_t = DEFAULT_CAP_EXTRA)]
    cap_extra: u64,
    #[arg(long, default_value_t = DEFAULT_CAP_STATES)]
    cap_states: usize,
    /// Expected output for devices without an oracle: `yes`, `no`, `N` or `diff N`.
    #[arg(long, allow_hyphen_values = true)]
    expect: Option<String>,
    /// Write a JSON report here.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum InvariantsCmd {
    /// Check the device's bundled invariants, or one given on the command line.
    Check {
        device: PathBuf,
        /// Weights such as `X:1 Y:2`.
        #[arg(long, allow_hyphen_values = true)]
        weights: Option<String>,
        #[arg(long)]
        modulus: Option<i64>,
    },
    /// Print an integer basis of the linear invariants.
    Find { device: PathBuf },
}

#[derive(Subcommand, Debug)]
enum TraceCmd {
    /// Print the configurations an execution visits.
    Replay { device: PathBuf, trace: PathBuf },
    /// Cancel reverse splits and move forward splits to the front.
    Normalize {
        device: PathBuf,
        trace: PathBuf,
        /// Split reactions, numbered from 1; defaults to reactions that
        /// consume exactly one input molecule.
        #[arg(long, value_delimiter = ',')]
        splits: Vec<usize>,
        #[command(flatten)]
        out: OutArg,
    },
}

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(Error::Io {
            kind: std::io::ErrorKind::BrokenPipe,
            ..
        }) => EXIT_USAGE,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Compile { what } => compile(what, out),
        Command::Verify(args) => run_verify(args, out),
        Command::Invariants { what } => invariants(what, out),
        Command::Trace { what } => trace(what, out),
    }
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Io {
        kind: e.kind(),
        message: format!("{}: {e}", path.display()),
    }
}

fn read_device(path: &Path) -> Result<Device> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    parse_device(&text)
}

fn emit(text: &str, dest: &OutArg, out: &mut dyn Write) -> Result<i32> {
    match &dest.output {
        Some(p) => fs::write(p, text).map_err(|e| io_err(p, e))?,
        None => write!(out, "{text}").map_err(Error::io)?,
    }
    Ok(EXIT_OK)
}

fn parse_piece(text: &str) -> Result<(AffineSpec, crate::construct::PredicateSpec)> {
    let (f, dom) = text
        .split_once('|')
        .ok_or_else(|| Error::InvalidArgument(format!("piece `{text}` must look like `A C b | PREDICATE`")))?;
    let f = match parse_oracle(&format!("affine {f}")).map_err(Error::InvalidArgument)? {
        Oracle::Affine(f) => f,
        _ => unreachable!(),
    };
    let dom = match parse_oracle(dom).map_err(Error::InvalidArgument)? {
        Oracle::Predicate(p) => p,
        _ => return Err(Error::InvalidArgument(format!("`{}` is not a predicate", dom.trim()))),
    };
    Ok((f, dom))
}

fn compile(what: CompileCmd, out: &mut dyn Write) -> Result<i32> {
    let (dev, dest) = match what {
        CompileCmd::Mod {
            weights,
            residue,
            modulus,
            out,
        } => (compile_mod(&ModSpec::new(weights, residue, modulus)?)?, out),
        CompileCmd::Threshold { weights, threshold, out } => {
            (compile_threshold(&ThresholdSpec::new(weights, threshold))?, out)
        }
        CompileCmd::Not { input, out } => (complement(&read_device(&input)?)?, out),
        CompileCmd::And { first, second, out } => (
            combine_boolean(&read_device(&first)?, &read_device(&second)?, BoolOp::And)?,
            out,
        ),
        CompileCmd::Or { first, second, out } => (
            combine_boolean(&read_device(&first)?, &read_device(&second)?, BoolOp::Or)?,
            out,
        ),
        CompileCmd::Affine {
            coefficients,
            offsets,
            constant,
            out,
        } => {
            let text = format!(
                "affine {} {} {constant}",
                coefficients,
                offsets.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
            );
            let Oracle::Affine(f) = parse_oracle(&text).map_err(Error::InvalidArgument)? else {
                unreachable!()
            };
            (compile_affine(&f)?, out)
        }
        CompileCmd::Semilinear {
            pieces,
            domain_grid,
            out,
        } => {
            let pieces = pieces.iter().map(|p| parse_piece(p)).collect::<Result<Vec<_>>>()?;
            (compile_semilinear_with_grid(&SemilinearSpec::new(pieces)?, domain_grid)?, out)
        }
        CompileCmd::Parallel { inputs, out } => {
            let devs = inputs.iter().map(|p| read_device(p)).collect::<Result<Vec<_>>>()?;
            let refs: Vec<&Device> = devs.iter().collect();
            (parallel_compose(&refs)?.into_device()?, out)
        }
    };
    emit(&serialize_device(&dev), &dest, out)
}

fn parse_expected(text: &str) -> Result<Expected> {
    let t = text.trim();
    let bad = || Error::InvalidArgument(format!("cannot read expected output `{t}`"));
    match t {
        "yes" | "true" => Ok(Expected::Vote(true)),
        "no" | "false" => Ok(Expected::Vote(false)),
        _ => match t.strip_prefix("diff") {
            Some(rest) => rest.trim().parse().map(Expected::Difference).map_err(|_| bad()),
            None => t.parse().map(Expected::Count).map_err(|_| bad()),
        },
    }
}

fn output_text(v: &OutputValue) -> String {
    match v {
        OutputValue::None => "none".into(),
        OutputValue::Vote(Vote::Yes) => "yes".into(),
        OutputValue::Vote(Vote::No) => "no".into(),
        OutputValue::Vote(Vote::Undefined) => "undefined".into(),
        OutputValue::Count(n) => n.to_string(),
        OutputValue::Pair(p, c) => format!("{p} - {c} = {}", *p as i64 - *c as i64),
    }
}

fn config_json(crn: &Crn, c: &Configuration) -> Value {
    let map: serde_json::Map<String, Value> = c
        .support()
        .into_iter()
        .map(|(s, k)| (crn.species_name(s).to_string(), json!(k)))
        .collect();
    Value::Object(map)
}

fn point_json(dev: &Device, p: &GridPoint) -> Value {
    let input = dev.format_input(&p.input);
    match &p.outcome {
        PointOutcome::Excluded(why) => json!({"input": input, "verdict": "EXCLUDED", "reason": why}),
        PointOutcome::OutsideDomain => json!({"input": input, "verdict": "OUTSIDE-DOMAIN"}),
        PointOutcome::Checked(v) => {
            let mut obj = json!({
                "input": input,
                "verdict": v.verdict.label(),
                "expected": v.expected.to_string(),
                "stable_output": v.stable_output.as_ref().map(output_text),
                "states": v.stats.states,
                "forward_edges": v.stats.forward_edges,
                "closed": v.stats.closed,
                "cap": {"max_total_count": v.stats.cap.max_total_count, "max_states": v.stats.cap.max_states},
                "elapsed_ms": v.stats.elapsed.as_secs_f64() * 1e3,
            });
            match &v.verdict {
                Verdict::Refuted { trap, certificate } => {
                    obj["trap"] = json!({
                        "start": config_json(&dev.crn, &trap.start),
                        "steps": trap.steps.iter().map(|&s| format_step(s)).collect::<Vec<_>>(),
                        "end": config_json(&dev.crn, certificate.start()),
                        "trace": format_execution(&dev.crn, trap),
                    });
                    obj["certificate_size"] = json!(certificate.len());
                }
                Verdict::Inconclusive { reason } => obj["reason"] = json!(reason),
                Verdict::VerifiedUpToCap { .. } => {}
            }
            obj
        }
    }
}

fn describe(dev: &Device, input: &[u32], v: &Verification, out: &mut dyn Write) -> std::io::Result<()> {
    let cap = v.stats.cap;
    write!(
        out,
        "input {}: {} (expected {}; {} states; cap {} molecules, {} states; {:.3} s",
        dev.format_input(input),
        v.verdict.label(),
        v.expected,
        v.stats.states,
        cap.max_total_count,
        cap.max_states,
        v.stats.elapsed.as_secs_f64()
    )?;
    if let Some(o) = &v.stable_output {
        write!(out, "; stable output {}", output_text(o))?;
    }
    writeln!(out, ")")?;
    match &v.verdict {
        Verdict::Refuted { trap, certificate } => {
            writeln!(out, "  trap configuration: {}", dev.crn.format_config(certificate.start()))?;
            let steps: Vec<String> = trap.steps.iter().map(|&s| format_step(s)).collect();
            writeln!(out, "  witness from {}: {}", dev.crn.format_config(&trap.start), steps.join(" "))?;
            writeln!(
                out,
                "  certificate: closed forward set of {} configurations, none stable with the expected output",
                certificate.len()
            )?;
        }
        Verdict::Inconclusive { reason } => writeln!(out, "  {reason}")?,
        Verdict::VerifiedUpToCap { .. } => {}
    }
    Ok(())
}

fn run_verify(args: VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let dev = read_device(&args.device)?;
    let model: Model = args.model.into();
    let opts = SweepOptions {
        model,
        cap_extra: args.cap_extra,
        cap_states: args.cap_states,
    };
    let expected = args.expect.as_deref().map(parse_expected).transpose()?;
    let io = Error::io;

    let points: Vec<GridPoint> = if let Some(g) = args.grid {
        if expected.is_some() {
            return Err(Error::InvalidArgument("--expect applies to a single --input".into()));
        }
        if dev.oracle.is_none() {
            return Err(Error::MissingOracle);
        }
        let mut pts = Vec::new();
        for x in crate::construct::grid(dev.arity(), i64::from(args.grid_min), i64::from(g)) {
            let input: Vec<u32> = x.iter().map(|&v| v as u32).collect();
            let outcome = verify_point(&dev, &input, opts)?;
            pts.push(GridPoint { input, outcome });
        }
        pts
    } else {
        let input = match &args.input {
            Some(text) => dev.parse_input(text)?,
            None => vec![0; dev.arity()],
        };
        let outcome = match expected {
            Some(e) => {
                let start = dev.initial_configuration(&input)?;
                let cap = Cap::with_headroom(&start, opts.cap_extra, opts.cap_states);
                PointOutcome::Checked(verify(&dev, &input, model, cap, Some(e))?)
            }
            None => verify_point(&dev, &input, opts)?,
        };
        vec![GridPoint { input, outcome }]
    };

    for p in &points {
        match &p.outcome {
            PointOutcome::Checked(v) => describe(&dev, &p.input, v, out).map_err(io)?,
            PointOutcome::Excluded(why) => {
                writeln!(out, "input {}: EXCLUDED ({why})", dev.format_input(&p.input)).map_err(io)?
            }
            PointOutcome::OutsideDomain => {
                writeln!(out, "input {}: OUTSIDE-DOMAIN", dev.format_input(&p.input)).map_err(io)?
            }
        }
    }
    let worst_idx = worst(&points);
    let code = match worst_idx.map(|i| &points[i].outcome) {
        Some(PointOutcome::Checked(v)) => exit_status(&v.verdict),
        _ => EXIT_OK,
    };
    if points.len() > 1 {
        let checked = points.iter().filter(|p| matches!(p.outcome, PointOutcome::Checked(_))).count();
        let label = match code {
            EXIT_OK => "VERIFIED-UP-TO-CAP",
            EXIT_REFUTED => "REFUTED",
            _ => "INCONCLUSIVE",
        };
        writeln!(out, "overall: {label} ({checked} of {} inputs checked)", points.len()).map_err(io)?;
    }

    if let Some(path) = &args.report {
        let report = json!({
            "device": args.device.display().to_string(),
            "model": match model { Model::Stable => "stable", Model::ReverseRobust => "reverse-robust" },
            "exit_status": code,
            "points": points.iter().map(|p| point_json(&dev, p)).collect::<Vec<_>>(),
        });
        let text = serde_json::to_string_pretty(&report).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        fs::write(path, text).map_err(|e| io_err(path, e))?;
    }
    Ok(code)
}

fn invariants(what: InvariantsCmd, out: &mut dyn Write) -> Result<i32> {
    let io = Error::io;
    match what {
        InvariantsCmd::Check {
            device,
            weights,
            modulus,
        } => {
            let dev = read_device(&device)?;
            let crn = &dev.crn;
            let list: Vec<(String, Invariant)> = match weights {
                Some(text) => {
                    let mut w = vec![0i64; crn.num_species()];
                    for tok in text.split_whitespace() {
                        let (s, k) = tok
                            .split_once(':')
                            .ok_or_else(|| Error::InvalidArgument(format!("expected S:w, got `{tok}`")))?;
                        let k: i64 = k.parse().map_err(|_| Error::InvalidArgument(format!("bad weight in `{tok}`")))?;
                        w[crn.require_species(s)?] += k;
                    }
                    let inv = match modulus {
                        Some(m) => Invariant::modular(w, m)?,
                        None => Invariant::linear(w),
                    };
                    vec![("(given)".to_string(), inv)]
                }
                None => dev
                    .invariants
                    .iter()
                    .map(|i| (i.label().to_string(), i.invariant.clone()))
                    .collect(),
            };
            if list.is_empty() {
                writeln!(out, "no invariants to check").map_err(io)?;
            }
            let mut code = EXIT_OK;
            for (name, inv) in &list {
                let report = check(crn, inv);
                if report.holds() {
                    writeln!(out, "{name}: holds").map_err(io)?;
                } else {
                    code = EXIT_REFUTED;
                    writeln!(out, "{name}: {} violations", report.violations.len()).map_err(io)?;
                    for (r, residual) in &report.violations {
                        writeln!(out, "  reaction {} ({}): residual {residual}", r + 1, crn.format_reaction(*r))
                            .map_err(io)?;
                    }
                }
            }
            Ok(code)
        }
        InvariantsCmd::Find { device } => {
            let dev = read_device(&device)?;
            let basis = find_linear_invariants(&dev.crn);
            if basis.is_empty() {
                writeln!(out, "# no linear invariants").map_err(io)?;
            }
            for b in &basis {
                let terms: String = b
                    .weights
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k != 0)
                    .map(|(s, k)| format!(" {}:{k}", dev.crn.species_name(s)))
                    .collect();
                writeln!(out, "@invariant linear{terms}").map_err(io)?;
            }
            Ok(EXIT_OK)
        }
    }
}

/// Reactions that consume exactly one molecule of one input species.
pub fn default_split_reactions(dev: &Device) -> Vec<usize> {
    dev.crn
        .reactions()
        .iter()
        .enumerate()
        .filter(|(_, r)| matches!(r.reactants(), [(s, 1)] if dev.inputs.contains(s)))
        .map(|(i, _)| i)
        .collect()
}

fn trace(what: TraceCmd, out: &mut dyn Write) -> Result<i32> {
    let io = Error::io;
    let load = |device: &Path, trace: &Path| -> Result<(Device, crate::reach::Execution)> {
        let dev = read_device(device)?;
        let text = fs::read_to_string(trace).map_err(|e| io_err(trace, e))?;
        let exec = parse_execution(&dev.crn, &text)?;
        Ok((dev, exec))
    };
    match what {
        TraceCmd::Replay { device, trace } => {
            let (dev, exec) = load(&device, &trace)?;
            match replay(&dev.crn, &exec) {
                Ok(configs) => {
                    for (i, c) in configs.iter().enumerate() {
                        let step = if i == 0 {
                            "start".to_string()
                        } else {
                            format_step(exec.steps[i - 1])
                        };
                        let mut line = format!("{i:>4} {step:>6}  {}", dev.crn.format_config(c));
                        if !matches!(dev.output, OutputSpec::None) {
                            line.push_str(&format!("  output {}", output_text(&dev.output_value(c))));
                        }
                        writeln!(out, "{line}").map_err(io)?;
                    }
                    Ok(EXIT_OK)
                }
                Err(e) => {
                    writeln!(out, "{e}").map_err(io)?;
                    Ok(EXIT_REFUTED)
                }
            }
        }
        TraceCmd::Normalize {
            device,
            trace,
            splits,
            out: dest,
        } => {
            let (dev, exec) = load(&device, &trace)?;
            let ids: Vec<usize> = if splits.is_empty() {
                default_split_reactions(&dev)
            } else {
                splits
                    .iter()
                    .map(|&r| {
                        if r == 0 || r > dev.crn.reactions().len() {
                            Err(Error::UnknownReaction(r))
                        } else {
                            Ok(r - 1)
                        }
                    })
                    .collect::<Result<_>>()?
            };
            match eliminate_reverse_splits(&dev.crn, &exec, &ids) {
                Ok(norm) => emit(&format_execution(&dev.crn, &norm), &dest, out),
                Err(e @ (Error::PreconditionViolated(_) | Error::ReplayFailure { .. } | Error::PairingFailed { .. })) => {
                    writeln!(out, "{e}").map_err(io)?;
                    Ok(EXIT_REFUTED)
                }
                Err(e) => Err(e),
            }
        }
    }
}
