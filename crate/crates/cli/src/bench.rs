//! Batch runs over a directory of instances.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use anyhow::{Context, Result};
use ltlf_muc::{EngineConfig, Limits};

use crate::args::{BenchArgs, Format, InputArgs};
use crate::events::RunStats;
use crate::{instance_name, read_input, run_enumeration, spec_from_text, write_csv, Sink, EXIT_OK, EXIT_USAGE};

fn instances(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for entry in std::fs::read_dir(dir).with_context(|| format!("listing {}", dir.display()))? {
        let path = entry?.path();
        let hidden = path.file_name().is_some_and(|n| n.to_string_lossy().starts_with('.'));
        if path.is_file() && !hidden {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

fn run_one(path: &Path, args: &BenchArgs) -> Result<RunStats> {
    let input = InputArgs {
        input: path.to_path_buf(),
        split: args.split,
        conjuncts_file: args.conjuncts_file,
    };
    let spec = spec_from_text(&read_input(path)?, &input)?;
    let name = instance_name(path);
    let config = EngineConfig {
        max_k: args.max_k.map(|k| k as usize),
        limits: Limits::none().with_deadline(Some(Instant::now() + Duration::from_secs_f64(args.timeout))),
        pipelined: true,
        ..EngineConfig::default()
    };
    let (stats, _) = match &args.events_dir {
        Some(dir) => {
            let file = File::create(dir.join(format!("{name}.jsonl")))?;
            let mut w = BufWriter::new(file);
            run_enumeration(&spec, &name, config, false, &mut Sink::new(&mut w, Format::Json))?
        }
        None => run_enumeration(&spec, &name, config, false, &mut Sink::new(&mut io::sink(), Format::Json))?,
    };
    Ok(stats)
}

/// `instance,t_ms,n_mucs` rows, one per emitted core.
pub fn write_series(out: &mut dyn Write, rows: &[RunStats]) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["instance", "t_ms", "n_mucs"])?;
    for s in rows {
        for (i, t) in s.muc_t_ms.iter().enumerate() {
            w.write_record([s.instance.clone(), format!("{t:.3}"), (i + 1).to_string()])?;
        }
    }
    w.flush()
}

pub fn run_bench(args: &BenchArgs, out: &mut dyn Write) -> Result<u8> {
    let files = instances(&args.dir)?;
    if let Some(dir) = &args.events_dir {
        std::fs::create_dir_all(dir)?;
    }
    let results: Vec<Mutex<Option<Result<RunStats>>>> = files.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..args.jobs.max(1) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(path) = files.get(i) else { break };
                *results[i].lock().unwrap() = Some(run_one(path, args));
            });
        }
    });

    let mut rows = Vec::new();
    let mut code = EXIT_OK;
    for (path, slot) in files.iter().zip(results) {
        match slot.into_inner().unwrap().expect("every instance ran") {
            Ok(stats) => rows.push(stats),
            Err(e) => {
                eprintln!("{}: {e:#}", path.display());
                code = EXIT_USAGE;
            }
        }
    }
    write_csv(out, &rows)?;
    if let Some(series) = &args.series {
        write_series(&mut BufWriter::new(File::create(series)?), &rows)?;
    }
    Ok(code)
}
