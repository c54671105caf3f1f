//! Candidate generation on a background thread.
//!
//! The producer enumerates probe MUSes for the depth it was last told to use
//! and pushes them through a bounded channel. A restart bumps the epoch and
//! raises the old epoch's interrupt flag, so the producer abandons the stale
//! pass; anything it already queued is discarded by the consumer.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::mpsc::{self, Receiver, Sender, SyncSender};
use std::sync::Arc;
use std::thread::JoinHandle;
use std::time::{Duration, Instant};

use super::CandidateSource;
use crate::error::{Error, Result};
use crate::mus::MusEnumerator;
use crate::probe::{Probe, ProbeConfig};
use crate::syntax::{ConjunctiveSpec, SelectorSet};

const QUEUE: usize = 64;

enum Control {
    Start { epoch: u64, k: usize, flag: Arc<AtomicBool> },
    Stop,
}

enum Data {
    Candidate { epoch: u64, set: SelectorSet, gen: Duration },
    Done { epoch: u64, gen: Duration },
    Failed { epoch: u64, error: Error },
}

pub(super) struct Pipelined {
    control: Sender<Control>,
    data: Receiver<Data>,
    epoch: u64,
    flag: Arc<AtomicBool>,
    handle: Option<JoinHandle<()>>,
}

impl Pipelined {
    pub(super) fn spawn(spec: ConjunctiveSpec, config: ProbeConfig) -> Self {
        let (control, control_rx) = mpsc::channel();
        let (data_tx, data) = mpsc::sync_channel(QUEUE);
        let handle = std::thread::Builder::new()
            .name("muc-generator".into())
            .spawn(move || produce(spec, config, control_rx, data_tx))
            .expect("spawn generator thread");
        Pipelined {
            control,
            data,
            epoch: 0,
            flag: Arc::new(AtomicBool::new(false)),
            handle: Some(handle),
        }
    }
}

fn produce(spec: ConjunctiveSpec, config: ProbeConfig, control: Receiver<Control>, data: SyncSender<Data>) {
    while let Ok(Control::Start { epoch, k, flag }) = control.recv() {
        let mut started = Instant::now();
        let mut cfg = config.clone();
        cfg.limits = cfg.limits.with_interrupt(flag);
        let probe = match Probe::with_config(&spec, k, cfg) {
            Ok(p) => p,
            Err(error) => {
                if data.send(Data::Failed { epoch, error }).is_err() {
                    return;
                }
                continue;
            }
        };
        let mut failed = false;
        for item in MusEnumerator::new(probe) {
            let msg = match item {
                Ok(set) => Data::Candidate {
                    epoch,
                    set,
                    gen: started.elapsed(),
                },
                Err(error) => Data::Failed { epoch, error },
            };
            failed = matches!(msg, Data::Failed { .. });
            if data.send(msg).is_err() {
                return;
            }
            if failed {
                break;
            }
            started = Instant::now();
        }
        if failed {
            continue;
        }
        let done = Data::Done {
            epoch,
            gen: started.elapsed(),
        };
        if data.send(done).is_err() {
            return;
        }
    }
}

impl CandidateSource for Pipelined {
    fn restart(&mut self, k: usize) {
        self.flag.store(true, Ordering::Relaxed);
        self.flag = Arc::new(AtomicBool::new(false));
        self.epoch += 1;
        // A send failure means the producer is gone; `next` reports it.
        let _ = self.control.send(Control::Start {
            epoch: self.epoch,
            k,
            flag: Arc::clone(&self.flag),
        });
    }

    fn next(&mut self) -> Result<(Option<SelectorSet>, Duration)> {
        loop {
            match self.data.recv() {
                Ok(Data::Candidate { epoch, set, gen }) if epoch == self.epoch => return Ok((Some(set), gen)),
                Ok(Data::Done { epoch, gen }) if epoch == self.epoch => return Ok((None, gen)),
                Ok(Data::Failed { epoch, error }) if epoch == self.epoch => return Err(error),
                Ok(_) => continue,
                Err(_) => return Err(Error::Interrupted),
            }
        }
    }
}

impl Drop for Pipelined {
    fn drop(&mut self) {
        self.flag.store(true, Ordering::Relaxed);
        let _ = self.control.send(Control::Stop);
        // Unblock a producer stuck on a full queue until it hangs up.
        while self.data.recv().is_ok() {}
        if let Some(h) = self.handle.take() {
            let _ = h.join();
        }
    }
}
