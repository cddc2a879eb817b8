//! Resource limits shared by every analysis step.

use std::cell::Cell;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Maximum NFA states (positions + 1) built from one regex.
    pub max_nfa_states: usize,
    /// Maximum states explored by one product construction or search.
    pub max_product_states: usize,
    /// Maximum transitions materialized by one product construction.
    pub max_product_transitions: usize,
    /// Wall-clock allowance for one regex.
    pub timeout: Option<Duration>,
}

impl Default for Limits {
    fn default() -> Limits {
        Limits {
            max_nfa_states: 5_000,
            max_product_states: 250_000,
            max_product_transitions: 5_000_000,
            timeout: Some(Duration::from_secs(2)),
        }
    }
}

/// A running budget. Not `Sync`: each analysis owns its own.
#[derive(Debug)]
pub struct Budget {
    pub limits: Limits,
    deadline: Option<Instant>,
    ticks: Cell<u32>,
}

impl Budget {
    pub fn new(limits: Limits) -> Budget {
        Budget {
            limits,
            deadline: limits.timeout.map(|t| Instant::now() + t),
            ticks: Cell::new(0),
        }
    }

    pub fn unlimited() -> Budget {
        Budget::new(Limits {
            max_nfa_states: usize::MAX,
            max_product_states: usize::MAX,
            max_product_transitions: usize::MAX,
            timeout: None,
        })
    }

    pub fn check_nfa_states(&self, n: usize) -> Result<()> {
        if n > self.limits.max_nfa_states {
            return Err(Error::budget(format!(
                "automaton needs {n} states (limit {})",
                self.limits.max_nfa_states
            )));
        }
        Ok(())
    }

    pub fn check_product(&self, n: usize) -> Result<()> {
        if n > self.limits.max_product_states {
            return Err(Error::budget(format!(
                "product construction exceeded {} states",
                self.limits.max_product_states
            )));
        }
        self.tick()
    }

    pub fn check_transitions(&self, n: usize) -> Result<()> {
        if n > self.limits.max_product_transitions {
            return Err(Error::budget(format!(
                "product construction exceeded {} transitions",
                self.limits.max_product_transitions
            )));
        }
        self.tick()
    }

    /// Cheap periodic deadline check.
    pub fn tick(&self) -> Result<()> {
        let t = self.ticks.get().wrapping_add(1);
        self.ticks.set(t);
        if t.is_multiple_of(1024) {
            self.check_deadline()?;
        }
        Ok(())
    }

    pub fn check_deadline(&self) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() > d => Err(Error::budget("per-regex time limit")),
            _ => Ok(()),
        }
    }
}

impl Default for Budget {
    fn default() -> Budget {
        Budget::new(Limits::default())
    }
}
