//! Engine for constructed numbers: numbers whose `zero`, `suc` and `ann`
//! constructors carry conditions recording how they were computed.
//!
//! [`Engine`] bundles a [`Config`] with the condition algebra and exposes the
//! smooth equality, rewriting and algorithm-level operations.

pub mod algebra;
pub mod algo;
pub mod error;
mod par;
pub mod rewrite;
pub mod smooth;
pub mod syntax;
pub mod term;

use std::fmt;

pub use algebra::{Algebra, AlgebraConfig, CanonicalCondition, SetCondition, Theory};
pub use error::{CnError, Result};
pub use term::{Condition, NumberTerm};

/// How frontier expansion is scheduled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Config {
    /// Size limit for conditions, at least 3.
    pub limit: usize,
    /// Enable subtraction rule (s6), `X0 - (Y suc)y -> X0`.
    pub s6: bool,
    /// Treat `⟨A⟩⁻ = ⟨A⁻⟩`, `⟨A⟩⁰ = ⟨A⁰⟩`, `⟨A⟩¹ = ⟨A¹⟩` as laws.
    pub bracket_ext: bool,
    pub max_states: usize,
    /// Largest number of constructors a search state may carry.
    pub max_term_size: usize,
    /// Skip unique-exponent checks.
    pub unsafe_mode: bool,
    pub exec: Exec,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            limit: 3,
            s6: false,
            bracket_ext: false,
            max_states: 100_000,
            max_term_size: 64,
            unsafe_mode: false,
            exec: Exec::default(),
        }
    }
}

impl Config {
    pub fn algebra(&self) -> AlgebraConfig {
        AlgebraConfig {
            limit: self.limit,
            bracket_ext: self.bracket_ext,
            unsafe_mode: self.unsafe_mode,
        }
    }
}

/// Three-valued answer of a bounded decision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    True,
    False,
    Unknown,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::True
        } else {
            Verdict::False
        }
    }

    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::False, _) | (_, Verdict::False) => Verdict::False,
            (Verdict::True, Verdict::True) => Verdict::True,
            _ => Verdict::Unknown,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::True => "true",
            Verdict::False => "false",
            Verdict::Unknown => "unknown",
        })
    }
}

/// Configuration plus the memoised condition algebra.
#[derive(Debug)]
pub struct Engine {
    cfg: Config,
    alg: Algebra,
}

impl Engine {
    pub fn new(cfg: Config) -> Result<Self> {
        if cfg.limit < 3 {
            return Err(CnError::InvalidConfig(format!("limit must be at least 3, got {}", cfg.limit)));
        }
        Ok(Engine {
            cfg,
            alg: Algebra::new(cfg.algebra()),
        })
    }

    pub fn config(&self) -> &Config {
        &self.cfg
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }
}

impl Default for Engine {
    fn default() -> Self {
        Engine::new(Config::default()).expect("default config is valid")
    }
}
