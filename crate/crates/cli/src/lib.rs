//! Command-line front end: input loading, event output, benchmarking and
//! instance generation.

pub mod args;
pub mod bench;
pub mod events;
pub mod gen;

use std::io::{self, Read, Write};
use std::path::Path;
use std::time::{Duration, Instant};

use anyhow::{Context, Result};
use ltlf_muc::oracle::{LtlfOracle, SatOutcome};
use ltlf_muc::syntax::parse_conjunct_lines;
use ltlf_muc::{
    enumerate_k_mucs, enumerate_mucs, export_asp_facts, parse, ConjunctiveSpec, EngineConfig, Error, Event, Limits,
};

use args::{BudgetArgs, Cli, Command, EngineArgs, Format, InputArgs};
use events::{error_kind, render_text, Collector, CsvRow, Record, RunStats};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_TIMEOUT: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;

/// A failure that maps to a specific exit code.
#[derive(Debug)]
pub struct Exit {
    pub code: u8,
    pub message: String,
}

impl std::fmt::Display for Exit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for Exit {}

fn usage(message: String) -> anyhow::Error {
    Exit {
        code: EXIT_USAGE,
        message,
    }
    .into()
}

/// Exit code for an engine error that stopped a run.
pub fn code_for(e: &Error) -> u8 {
    match e {
        Error::Timeout | Error::Interrupted => EXIT_TIMEOUT,
        Error::Parse(_) => EXIT_USAGE,
        _ => EXIT_BUDGET,
    }
}

pub fn read_input(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).context("reading standard input")?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
    }
}

pub fn spec_from_text(text: &str, input: &InputArgs) -> Result<ConjunctiveSpec> {
    let name = input.input.display();
    let spec = if input.conjuncts_file {
        let conjuncts = parse_conjunct_lines(text).map_err(|e| usage(format!("{name}:{e}")))?;
        ConjunctiveSpec::new(conjuncts).map_err(|e| usage(format!("{name}: {e}")))?
    } else {
        let f = parse(text).map_err(|e| usage(format!("{name}:{e}")))?;
        ConjunctiveSpec::split(&f, input.split.into())
    };
    Ok(spec)
}

pub fn load_spec(input: &InputArgs) -> Result<ConjunctiveSpec> {
    spec_from_text(&read_input(&input.input)?, input)
}

pub fn instance_name(path: &Path) -> String {
    path.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "-".to_string())
}

fn engine_config(budgets: &BudgetArgs, max_k: Option<u64>, pipelined: bool, start: Instant) -> EngineConfig {
    let mut config = EngineConfig {
        max_k: max_k.map(|k| k as usize),
        limits: Limits::none().with_deadline(budgets.timeout.map(|t| start + Duration::from_secs_f64(t))),
        pipelined,
        ..EngineConfig::default()
    };
    if let Some(s) = budgets.max_states {
        config.max_states = s;
    }
    if let Some(v) = budgets.max_vars {
        config.probe.max_vars = v;
    }
    config.probe.propagation_budget = budgets.max_propagations;
    config
}

/// Writes records in the chosen format. Write failures surface as exit 3.
pub struct Sink<'a> {
    out: &'a mut dyn Write,
    format: Format,
}

impl<'a> Sink<'a> {
    pub fn new(out: &'a mut dyn Write, format: Format) -> Self {
        Sink { out, format }
    }

    pub fn emit(&mut self, rec: &Record) -> Result<()> {
        let written = match (self.format, rec) {
            (Format::Json, _) => serde_json::to_writer(&mut *self.out, rec)
                .map_err(io::Error::from)
                .and_then(|_| writeln!(self.out)),
            (Format::Text, _) => writeln!(self.out, "{}", render_text(rec)),
            (Format::Csv, Record::Stats(s)) => write_csv(&mut *self.out, std::slice::from_ref(s)),
            (Format::Csv, _) => Ok(()),
        };
        written.and_then(|_| self.out.flush()).map_err(|e| {
            Exit {
                code: EXIT_BUDGET,
                message: format!("writing output: {e}"),
            }
            .into()
        })
    }
}

pub fn write_csv(out: &mut dyn Write, rows: &[RunStats]) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for s in rows {
        w.serialize(CsvRow::from(s)).map_err(io::Error::other)?;
    }
    w.flush()
}

/// Runs the core enumeration (all cores, or stops after the first) and
/// returns the stats with the error that ended the run early, if any.
pub fn run_enumeration(
    spec: &ConjunctiveSpec,
    instance: &str,
    config: EngineConfig,
    first_only: bool,
    sink: &mut Sink<'_>,
) -> Result<(RunStats, Option<Error>)> {
    let started = Instant::now();
    let mut collector = Collector::new(instance, spec.len());
    let mut stream = enumerate_mucs(spec, config);
    for event in stream.by_ref() {
        if let Event::Finished(summary) = event {
            for rec in collector.finish(&summary) {
                sink.emit(&rec)?;
            }
            return Ok((collector.stats.clone(), summary.error));
        }
        let is_muc = matches!(event, Event::Muc(_));
        for rec in collector.records(&event) {
            sink.emit(&rec)?;
        }
        if first_only && is_muc {
            break;
        }
    }
    // Stopped after the first core.
    collector.stats.final_k = stream.depth();
    collector.stats.wall_ms = events::ms(started.elapsed());
    let stats = collector.finalize();
    sink.emit(&Record::Stats(stats.clone()))?;
    Ok((stats, None))
}

fn exit_for(error: Option<Error>) -> u8 {
    error.as_ref().map_or(EXIT_OK, code_for)
}

fn cmd_engine(args: &EngineArgs, first_only: bool, out: &mut dyn Write) -> Result<u8> {
    let start = Instant::now();
    let spec = load_spec(&args.input)?;
    let config = engine_config(&args.budgets, args.max_k, !args.deterministic, start);
    let mut sink = Sink::new(out, args.format);
    let (_, error) = run_enumeration(&spec, &instance_name(&args.input.input), config, first_only, &mut sink)?;
    Ok(exit_for(error))
}

fn cmd_kbounded(args: &EngineArgs, k: usize, out: &mut dyn Write) -> Result<u8> {
    if k == 0 {
        return Err(usage("--k must be at least 1".into()));
    }
    let start = Instant::now();
    let spec = load_spec(&args.input)?;
    let config = engine_config(&args.budgets, args.max_k, false, start);
    let mut sink = Sink::new(out, args.format);
    let result = enumerate_k_mucs(&spec, k, &config);
    let mut collector = Collector::new(&instance_name(&args.input.input), spec.len());
    for r in &result.mucs {
        let rec = collector.add_muc(r);
        sink.emit(&rec)?;
    }
    for (set, len) in &result.disproved {
        sink.emit(&Record::Disproved {
            conjuncts: set.as_slice().to_vec(),
            k,
            witness_len: *len,
        })?;
    }
    if let Some(e) = &result.error {
        sink.emit(&Record::Error {
            kind: error_kind(e).into(),
            message: e.to_string(),
        })?;
    }
    collector.stats.complete = result.complete;
    collector.stats.final_k = k;
    if let Some(last) = result.mucs.last() {
        collector.stats.gen_ms = events::ms(last.gen_time);
        collector.stats.cert_ms = events::ms(last.cert_time);
    }
    collector.stats.wall_ms = events::ms(start.elapsed());
    let stats = collector.finalize();
    sink.emit(&Record::Stats(stats))?;
    Ok(exit_for(result.error))
}

fn cmd_sat(input: &InputArgs, witness: bool, budgets: &BudgetArgs, out: &mut dyn Write) -> Result<u8> {
    let start = Instant::now();
    let spec = load_spec(input)?;
    let config = engine_config(budgets, None, false, start);
    let oracle = LtlfOracle::new()
        .with_max_states(config.max_states)
        .with_limits(config.limits);
    match oracle.check_satisfiability(spec.conjuncts()) {
        Ok(outcome) => {
            writeln!(out, "{}", outcome.length())?;
            if let (true, SatOutcome::Sat { witness, .. }) = (witness, &outcome) {
                writeln!(out, "{witness}")?;
            }
            Ok(EXIT_OK)
        }
        Err(e) => Err(Exit {
            code: code_for(&e),
            message: e.to_string(),
        }
        .into()),
    }
}

fn cmd_export(input: &InputArgs, k: usize, out: &mut dyn Write) -> Result<u8> {
    if k == 0 {
        return Err(usage("--k must be at least 1".into()));
    }
    let spec = load_spec(input)?;
    out.write_all(export_asp_facts(&spec, k).as_bytes())?;
    Ok(EXIT_OK)
}

fn cmd_gen(args: &args::GenArgs, out: &mut dyn Write) -> Result<u8> {
    let params = gen::GenParams {
        conjuncts: args.conjuncts,
        atoms: args.atoms,
        depth: args.depth,
        seed: args.seed,
    };
    let conjuncts = gen::generate(params).map_err(|e| usage(e.to_string()))?;
    out.write_all(gen::render(params, &conjuncts).as_bytes())?;
    Ok(EXIT_OK)
}

/// Executes a parsed command line, writing results to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<u8> {
    match &cli.command {
        Command::Enumerate(a) => cmd_engine(a, false, out),
        Command::Single(a) => cmd_engine(a, true, out),
        Command::Kbounded { engine, k } => cmd_kbounded(engine, *k, out),
        Command::Sat {
            input,
            witness,
            budgets,
        } => cmd_sat(input, *witness, budgets, out),
        Command::ExportAsp { input, k } => cmd_export(input, *k, out),
        Command::Bench(a) => bench::run_bench(a, out),
        Command::Gen(a) => cmd_gen(a, out),
    }
}
