use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::Instant;

use crate::error::Error;

/// Wall-clock deadline and cooperative cancellation, polled by the long
/// running searches.
#[derive(Clone, Debug, Default)]
pub struct Limits {
    pub deadline: Option<Instant>,
    /// Raised flags stop the search; any one of them suffices.
    pub interrupts: Vec<Arc<AtomicBool>>,
}

impl Limits {
    pub fn none() -> Self {
        Limits::default()
    }

    pub fn with_deadline(mut self, deadline: Option<Instant>) -> Self {
        self.deadline = deadline;
        self
    }

    pub fn with_interrupt(mut self, flag: Arc<AtomicBool>) -> Self {
        self.interrupts.push(flag);
        self
    }

    pub fn check(&self) -> Result<(), Error> {
        if self.interrupts.iter().any(|f| f.load(Ordering::Relaxed)) {
            return Err(Error::Interrupted);
        }
        if let Some(deadline) = self.deadline {
            if Instant::now() >= deadline {
                return Err(Error::Timeout);
            }
        }
        Ok(())
    }
}
