//! Certified MUC enumeration.
//!
//! Probe MUSes at depth `k` are candidates. Each candidate is certified with
//! the complete oracle: an unsatisfiable candidate is a MUC, a satisfiable
//! one has a model longer than `k` and the enumeration restarts at that
//! model's length. A pass that finishes without such a false positive has
//! produced every MUC.

mod pipeline;

use std::collections::{HashMap, VecDeque};
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::mus::MusEnumerator;
use crate::oracle::{LtlfOracle, SatOutcome, DEFAULT_STATE_BUDGET};
use crate::probe::{Probe, ProbeConfig};
use crate::syntax::{ConjunctiveSpec, SelectorSet, SubformulaTable};

use pipeline::Pipelined;

#[derive(Clone, Debug)]
pub struct EngineConfig {
    /// Refuse to deepen beyond this probe depth.
    pub max_k: Option<usize>,
    pub limits: Limits,
    /// Probe budgets; the engine's `limits` replace the ones set here.
    pub probe: ProbeConfig,
    pub max_states: usize,
    /// Generate candidates on a separate thread while certifying.
    pub pipelined: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            max_k: None,
            limits: Limits::none(),
            probe: ProbeConfig::default(),
            max_states: DEFAULT_STATE_BUDGET,
            pipelined: false,
        }
    }
}

impl EngineConfig {
    fn probe_config(&self) -> ProbeConfig {
        ProbeConfig {
            limits: self.limits.clone(),
            ..self.probe.clone()
        }
    }

    fn oracle(&self) -> LtlfOracle {
        LtlfOracle::new()
            .with_max_states(self.max_states)
            .with_limits(self.limits.clone())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CandidateStatus {
    CertifiedMuc,
    /// Satisfiable; the value is its minimum model length.
    DisprovedSat(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MucReport {
    /// 1-based indices into the specification.
    pub conjuncts: SelectorSet,
    pub texts: Vec<String>,
    /// Probe depth at which the core was found.
    pub k: usize,
    /// Since the start of the run.
    pub elapsed: Duration,
    /// Cumulative generation and certification time at emission.
    pub gen_time: Duration,
    pub cert_time: Duration,
}

#[derive(Debug)]
pub struct RunSummary {
    /// Every MUC has been emitted.
    pub complete: bool,
    pub final_k: usize,
    pub mucs: usize,
    pub deepenings: usize,
    /// Calls to the complete oracle.
    pub certifications: usize,
    pub cache_hits: usize,
    pub gen_time: Duration,
    pub cert_time: Duration,
    pub wall_time: Duration,
    /// Why the run stopped early, if it did.
    pub error: Option<Error>,
}

#[derive(Debug)]
pub enum Event {
    Muc(MucReport),
    /// A candidate turned out satisfiable with a model of `witness_len` states.
    Disproved {
        conjuncts: SelectorSet,
        k: usize,
        witness_len: usize,
    },
    Deepen {
        from_k: usize,
        to_k: usize,
        witness_of: SelectorSet,
    },
    /// Always the last event.
    Finished(RunSummary),
}

trait CandidateSource {
    /// Abandons the current pass and starts one at depth `k`.
    fn restart(&mut self, k: usize);
    /// The next MUS of the current pass, `None` once the pass is exhausted,
    /// with the time spent producing it.
    fn next(&mut self) -> Result<(Option<SelectorSet>, Duration)>;
}

struct Sequential {
    spec: ConjunctiveSpec,
    config: ProbeConfig,
    k: usize,
    current: Option<MusEnumerator<Probe>>,
}

impl CandidateSource for Sequential {
    fn restart(&mut self, k: usize) {
        self.k = k;
        self.current = None;
    }

    fn next(&mut self) -> Result<(Option<SelectorSet>, Duration)> {
        let started = Instant::now();
        if self.current.is_none() {
            let probe = Probe::with_config(&self.spec, self.k, self.config.clone())?;
            self.current = Some(MusEnumerator::new(probe));
        }
        let item = self.current.as_mut().expect("set above").next().transpose()?;
        Ok((item, started.elapsed()))
    }
}

/// `2^n` for the number `n` of distinct subformulas, saturating.
pub fn depth_cap(spec: &ConjunctiveSpec) -> usize {
    let n = SubformulaTable::from_spec(spec).len();
    if n >= usize::BITS as usize {
        usize::MAX
    } else {
        1 << n
    }
}

/// Lazy stream of [`Event`]s for one enumeration run.
pub struct MucStream {
    spec: ConjunctiveSpec,
    config: EngineConfig,
    oracle: LtlfOracle,
    source: Box<dyn CandidateSource + Send>,
    k: usize,
    cap: usize,
    cache: HashMap<SelectorSet, CandidateStatus>,
    pending: VecDeque<Event>,
    finished: bool,
    started: Instant,
    mucs: usize,
    deepenings: usize,
    certifications: usize,
    cache_hits: usize,
    gen_time: Duration,
    cert_time: Duration,
}

impl MucStream {
    pub fn new(spec: ConjunctiveSpec, config: EngineConfig) -> Self {
        let mut source: Box<dyn CandidateSource + Send> = if config.pipelined {
            Box::new(Pipelined::spawn(spec.clone(), config.probe_config()))
        } else {
            Box::new(Sequential {
                spec: spec.clone(),
                config: config.probe_config(),
                k: 1,
                current: None,
            })
        };
        source.restart(1);
        MucStream {
            cap: depth_cap(&spec),
            oracle: config.oracle(),
            spec,
            config,
            source,
            k: 1,
            cache: HashMap::new(),
            pending: VecDeque::new(),
            finished: false,
            started: Instant::now(),
            mucs: 0,
            deepenings: 0,
            certifications: 0,
            cache_hits: 0,
            gen_time: Duration::ZERO,
            cert_time: Duration::ZERO,
        }
    }

    pub fn spec(&self) -> &ConjunctiveSpec {
        &self.spec
    }

    /// Current probe depth.
    pub fn depth(&self) -> usize {
        self.k
    }

    pub fn cache(&self) -> &HashMap<SelectorSet, CandidateStatus> {
        &self.cache
    }

    /// Ok(true) once a pass ends without a false positive.
    fn step(&mut self) -> Result<bool> {
        self.config.limits.check()?;
        let (candidate, gen) = self.source.next()?;
        self.gen_time += gen;
        let Some(set) = candidate else {
            return Ok(true);
        };
        match self.cache.get(&set) {
            Some(CandidateStatus::CertifiedMuc) => self.cache_hits += 1,
            Some(&CandidateStatus::DisprovedSat(len)) => {
                self.cache_hits += 1;
                self.deepen(len, set)?;
            }
            None => {
                let started = Instant::now();
                let outcome = self.oracle.check_satisfiability(&self.spec.to_formula(&set));
                self.cert_time += started.elapsed();
                self.certifications += 1;
                match outcome? {
                    SatOutcome::Unsat => {
                        self.cache.insert(set.clone(), CandidateStatus::CertifiedMuc);
                        self.mucs += 1;
                        let report = self.report(set);
                        self.pending.push_back(Event::Muc(report));
                    }
                    SatOutcome::Sat { length, .. } => {
                        self.cache.insert(set.clone(), CandidateStatus::DisprovedSat(length));
                        self.pending.push_back(Event::Disproved {
                            conjuncts: set.clone(),
                            k: self.k,
                            witness_len: length,
                        });
                        self.deepen(length, set)?;
                    }
                }
            }
        }
        Ok(false)
    }

    fn report(&self, set: SelectorSet) -> MucReport {
        MucReport {
            texts: self.spec.to_formula(&set).iter().map(|f| f.to_string()).collect(),
            conjuncts: set,
            k: self.k,
            elapsed: self.started.elapsed(),
            gen_time: self.gen_time,
            cert_time: self.cert_time,
        }
    }

    fn deepen(&mut self, to_k: usize, witness_of: SelectorSet) -> Result<()> {
        // The candidate had no model within depth k, so its shortest one is longer.
        assert!(to_k > self.k, "deepening from {} to {} does not increase the depth", self.k, to_k);
        assert!(to_k <= self.cap, "depth {} exceeds the bound {}", to_k, self.cap);
        if let Some(max) = self.config.max_k {
            if to_k > max {
                return Err(Error::DepthCap {
                    requested: to_k,
                    cap: max,
                });
            }
        }
        self.pending.push_back(Event::Deepen {
            from_k: self.k,
            to_k,
            witness_of,
        });
        self.k = to_k;
        self.deepenings += 1;
        self.source.restart(to_k);
        Ok(())
    }

    fn finish(&mut self, complete: bool, error: Option<Error>) {
        self.finished = true;
        self.pending.push_back(Event::Finished(RunSummary {
            complete,
            final_k: self.k,
            mucs: self.mucs,
            deepenings: self.deepenings,
            certifications: self.certifications,
            cache_hits: self.cache_hits,
            gen_time: self.gen_time,
            cert_time: self.cert_time,
            wall_time: self.started.elapsed(),
            error,
        }));
    }
}

impl Iterator for MucStream {
    type Item = Event;

    fn next(&mut self) -> Option<Event> {
        while self.pending.is_empty() && !self.finished {
            match self.step() {
                Ok(false) => {}
                Ok(true) => self.finish(true, None),
                Err(e) => self.finish(false, Some(e)),
            }
        }
        self.pending.pop_front()
    }
}

/// All MUCs of `spec`, by iterative deepening.
pub fn enumerate_mucs(spec: &ConjunctiveSpec, config: EngineConfig) -> MucStream {
    MucStream::new(spec.clone(), config)
}

/// First MUC of the deepening run, or `None` if `spec` is satisfiable.
pub fn find_one_muc(spec: &ConjunctiveSpec, config: EngineConfig) -> Result<Option<MucReport>> {
    for event in enumerate_mucs(spec, config) {
        match event {
            Event::Muc(report) => return Ok(Some(report)),
            Event::Finished(summary) => {
                return match summary.error {
                    Some(e) => Err(e),
                    None => Ok(None),
                }
            }
            _ => {}
        }
    }
    unreachable!("the stream always ends with a summary")
}

#[derive(Debug)]
pub struct KMucs {
    /// Certified MUCs among the depth-`k` MUSes.
    pub mucs: Vec<MucReport>,
    /// Depth-`k` MUSes that have longer models, with their minimum length.
    pub disproved: Vec<(SelectorSet, usize)>,
    pub complete: bool,
    pub error: Option<Error>,
}

/// Certifies every MUS of the depth-`k` probe, keeping the unsatisfiable ones.
pub fn enumerate_k_mucs(spec: &ConjunctiveSpec, k: usize, config: &EngineConfig) -> KMucs {
    let started = Instant::now();
    let mut out = KMucs {
        mucs: Vec::new(),
        disproved: Vec::new(),
        complete: false,
        error: None,
    };
    let probe = match Probe::with_config(spec, k, config.probe_config()) {
        Ok(p) => p,
        Err(e) => {
            out.error = Some(e);
            return out;
        }
    };
    let oracle = config.oracle();
    let (mut gen_time, mut cert_time) = (Duration::ZERO, Duration::ZERO);
    let mut mus = MusEnumerator::new(probe);
    loop {
        let t = Instant::now();
        let item = mus.next();
        gen_time += t.elapsed();
        let set = match item {
            None => break,
            Some(Ok(set)) => set,
            Some(Err(e)) => {
                out.error = Some(e);
                return out;
            }
        };
        let t = Instant::now();
        let outcome = oracle.check_satisfiability(&spec.to_formula(&set));
        cert_time += t.elapsed();
        match outcome {
            Ok(SatOutcome::Unsat) => out.mucs.push(MucReport {
                texts: spec.to_formula(&set).iter().map(|f| f.to_string()).collect(),
                conjuncts: set,
                k,
                elapsed: started.elapsed(),
                gen_time,
                cert_time,
            }),
            Ok(SatOutcome::Sat { length, .. }) => out.disproved.push((set, length)),
            Err(e) => {
                out.error = Some(e);
                return out;
            }
        }
    }
    out.complete = true;
    out
}
