//! Output records and the statistics they add up to.

use std::time::Duration;

use ltlf_muc::{Error, Event, MucReport, RunSummary};
use serde::{Deserialize, Serialize};

/// One line of JSON output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Record {
    Muc {
        conjuncts: Vec<usize>,
        k: usize,
        t_ms: f64,
        formulas: Vec<String>,
        gen_ms: f64,
        cert_ms: f64,
    },
    Deepen {
        from_k: usize,
        to_k: usize,
        witness_of: Vec<usize>,
    },
    Disproved {
        conjuncts: Vec<usize>,
        k: usize,
        witness_len: usize,
    },
    Error {
        kind: String,
        message: String,
    },
    Stats(RunStats),
}

/// Per-run totals. `final_k` is the probe depth reached; sizes are over the
/// emitted cores, with the lower median for an even count.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub instance: String,
    pub n_conjuncts: usize,
    pub n_mucs: usize,
    pub complete: bool,
    pub final_k: usize,
    pub muc_size_min: Option<usize>,
    pub muc_size_med: Option<usize>,
    pub muc_size_max: Option<usize>,
    pub deepenings: usize,
    pub gen_ms: f64,
    pub cert_ms: f64,
    pub wall_ms: f64,
    /// Emission time of each core, in order.
    pub muc_t_ms: Vec<f64>,
}

pub fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1000.0
}

pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Timeout => "timeout",
        Error::Interrupted => "interrupted",
        e if e.is_resource() => "budget",
        Error::Parse(_) => "parse",
        _ => "internal",
    }
}

/// `(min, lower median, max)` of `values`.
pub fn summary_of(values: &[usize]) -> (Option<usize>, Option<usize>, Option<usize>) {
    if values.is_empty() {
        return (None, None, None);
    }
    let mut v = values.to_vec();
    v.sort_unstable();
    (Some(v[0]), Some(v[(v.len() - 1) / 2]), Some(v[v.len() - 1]))
}

pub fn muc_record(r: &MucReport) -> Record {
    Record::Muc {
        conjuncts: r.conjuncts.as_slice().to_vec(),
        k: r.k,
        t_ms: ms(r.elapsed),
        formulas: r.texts.clone(),
        gen_ms: ms(r.gen_time),
        cert_ms: ms(r.cert_time),
    }
}

/// Turns engine events into records while accumulating [`RunStats`].
pub struct Collector {
    pub stats: RunStats,
    sizes: Vec<usize>,
}

impl Collector {
    pub fn new(instance: &str, n_conjuncts: usize) -> Self {
        Collector {
            stats: RunStats {
                instance: instance.to_string(),
                n_conjuncts,
                final_k: 1,
                ..RunStats::default()
            },
            sizes: Vec::new(),
        }
    }

    pub fn add_muc(&mut self, r: &MucReport) -> Record {
        self.stats.n_mucs += 1;
        self.sizes.push(r.conjuncts.len());
        let rec = muc_record(r);
        if let Record::Muc { t_ms, .. } = &rec {
            self.stats.muc_t_ms.push(*t_ms);
        }
        rec
    }

    /// Records for one engine event; the summary yields its error (if
    /// any) followed by the stats record.
    pub fn records(&mut self, event: &Event) -> Vec<Record> {
        match event {
            Event::Muc(r) => vec![self.add_muc(r)],
            Event::Deepen {
                from_k,
                to_k,
                witness_of,
            } => {
                self.stats.deepenings += 1;
                self.stats.final_k = *to_k;
                vec![Record::Deepen {
                    from_k: *from_k,
                    to_k: *to_k,
                    witness_of: witness_of.as_slice().to_vec(),
                }]
            }
            Event::Disproved {
                conjuncts,
                k,
                witness_len,
            } => vec![Record::Disproved {
                conjuncts: conjuncts.as_slice().to_vec(),
                k: *k,
                witness_len: *witness_len,
            }],
            Event::Finished(summary) => self.finish(summary),
        }
    }

    pub fn finish(&mut self, summary: &RunSummary) -> Vec<Record> {
        let mut out = Vec::new();
        if let Some(e) = &summary.error {
            out.push(Record::Error {
                kind: error_kind(e).to_string(),
                message: e.to_string(),
            });
        }
        self.stats.complete = summary.complete;
        self.stats.final_k = summary.final_k;
        self.stats.gen_ms = ms(summary.gen_time);
        self.stats.cert_ms = ms(summary.cert_time);
        self.stats.wall_ms = ms(summary.wall_time);
        out.push(Record::Stats(self.finalize()));
        out
    }

    pub fn finalize(&mut self) -> RunStats {
        let (lo, med, hi) = summary_of(&self.sizes);
        self.stats.muc_size_min = lo;
        self.stats.muc_size_med = med;
        self.stats.muc_size_max = hi;
        self.stats.clone()
    }
}

/// Rebuilds the statistics of a JSON-lines event log and checks them
/// against its closing stats record. Timings and the completion flag are
/// only recorded there and are taken as given.
pub fn replay(records: &[Record]) -> Result<RunStats, String> {
    let Some((Record::Stats(reported), body)) = records.split_last() else {
        return Err("log does not end with a stats record".into());
    };
    let mut rebuilt = RunStats {
        instance: reported.instance.clone(),
        n_conjuncts: reported.n_conjuncts,
        complete: reported.complete,
        final_k: 1,
        gen_ms: reported.gen_ms,
        cert_ms: reported.cert_ms,
        wall_ms: reported.wall_ms,
        ..RunStats::default()
    };
    let mut sizes = Vec::new();
    let mut last_muc_k = 0;
    for rec in body {
        match rec {
            Record::Muc { conjuncts, k, t_ms, .. } => {
                if conjuncts.is_empty() || conjuncts.iter().any(|&i| i == 0 || i > reported.n_conjuncts) {
                    return Err(format!("core {conjuncts:?} does not index the specification"));
                }
                rebuilt.n_mucs += 1;
                sizes.push(conjuncts.len());
                rebuilt.muc_t_ms.push(*t_ms);
                last_muc_k = last_muc_k.max(*k);
            }
            Record::Deepen { from_k, to_k, .. } => {
                if to_k <= from_k || *from_k != rebuilt.final_k {
                    return Err(format!("deepening from {from_k} to {to_k} at depth {}", rebuilt.final_k));
                }
                rebuilt.deepenings += 1;
                rebuilt.final_k = *to_k;
            }
            Record::Disproved { .. } | Record::Error { .. } => {}
            Record::Stats(_) => return Err("stats record before the end of the log".into()),
        }
    }
    if last_muc_k > rebuilt.final_k {
        return Err(format!("core certified at depth {last_muc_k} above the final depth"));
    }
    let (lo, med, hi) = summary_of(&sizes);
    rebuilt.muc_size_min = lo;
    rebuilt.muc_size_med = med;
    rebuilt.muc_size_max = hi;
    if rebuilt != *reported {
        return Err(format!("replayed {rebuilt:?} but the log reports {reported:?}"));
    }
    Ok(rebuilt)
}

/// Human-readable line for a record.
pub fn render_text(rec: &Record) -> String {
    let set = |v: &[usize]| {
        let items: Vec<String> = v.iter().map(|i| i.to_string()).collect();
        format!("{{{}}}", items.join(","))
    };
    match rec {
        Record::Muc {
            conjuncts,
            k,
            t_ms,
            formulas,
            ..
        } => format!("MUC {} at k={k} after {t_ms:.1} ms: {}", set(conjuncts), formulas.join(" ; ")),
        Record::Deepen {
            from_k,
            to_k,
            witness_of,
        } => format!("deepen k={from_k} -> k={to_k} (model of {})", set(witness_of)),
        Record::Disproved {
            conjuncts,
            k,
            witness_len,
        } => format!("candidate {} at k={k} has a model of length {witness_len}", set(conjuncts)),
        Record::Error { kind, message } => format!("stopped ({kind}): {message}"),
        Record::Stats(s) => {
            let size = match (s.muc_size_min, s.muc_size_med, s.muc_size_max) {
                (Some(a), Some(b), Some(c)) => format!("{a}/{b}/{c}"),
                _ => "-".into(),
            };
            format!(
                "{}: {} MUCs, complete={}, final k={}, size min/med/max={size}, gen {:.1} ms, cert {:.1} ms, wall {:.1} ms",
                s.instance, s.n_mucs, s.complete, s.final_k, s.gen_ms, s.cert_ms, s.wall_ms
            )
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CsvRow<'a> {
    pub instance: &'a str,
    pub n_conjuncts: usize,
    pub n_mucs: usize,
    pub complete: bool,
    pub final_k: usize,
    pub muc_size_min: Option<usize>,
    pub muc_size_med: Option<usize>,
    pub muc_size_max: Option<usize>,
    pub gen_ms: String,
    pub cert_ms: String,
    pub wall_ms: String,
}

impl<'a> From<&'a RunStats> for CsvRow<'a> {
    fn from(s: &'a RunStats) -> Self {
        CsvRow {
            instance: &s.instance,
            n_conjuncts: s.n_conjuncts,
            n_mucs: s.n_mucs,
            complete: s.complete,
            final_k: s.final_k,
            muc_size_min: s.muc_size_min,
            muc_size_med: s.muc_size_med,
            muc_size_max: s.muc_size_max,
            gen_ms: format!("{:.3}", s.gen_ms),
            cert_ms: format!("{:.3}", s.cert_ms),
            wall_ms: format!("{:.3}", s.wall_ms),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schema() {
        let rec = Record::Deepen {
            from_k: 1,
            to_k: 6,
            witness_of: vec![1],
        };
        assert_eq!(
            serde_json::to_string(&rec).unwrap(),
            r#"{"type":"deepen","from_k":1,"to_k":6,"witness_of":[1]}"#
        );
        let stats = Record::Stats(RunStats::default());
        let line = serde_json::to_string(&stats).unwrap();
        assert!(line.starts_with(r#"{"type":"stats","instance":"#));
        assert_eq!(serde_json::from_str::<Record>(&line).unwrap(), stats);
    }

    #[test]
    fn lower_median() {
        assert_eq!(summary_of(&[3, 1, 2, 4]), (Some(1), Some(2), Some(4)));
        assert_eq!(summary_of(&[5]), (Some(5), Some(5), Some(5)));
        assert_eq!(summary_of(&[]), (None, None, None));
    }

    #[test]
    fn replay_rejects_inconsistent_log() {
        let stats = RunStats {
            n_conjuncts: 2,
            n_mucs: 2,
            final_k: 1,
            ..RunStats::default()
        };
        let err = replay(&[Record::Stats(stats)]).unwrap_err();
        assert!(err.contains("replayed"));
        assert!(replay(&[]).is_err());
    }
}
