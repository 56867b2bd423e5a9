//! Executable verifiers for the quantitative inequalities the library is
//! built around, with seeded random instance generation, premise auditing,
//! and violation shrinking.
//!
//! Every check on piecewise-linear gauges is decided exactly; power-gauge
//! checks are decided by exact monomial comparison with certified enclosures
//! attached for reporting, or return `Inconclusive` where only enclosures are
//! available and they overlap.  Identical `(seed, config)` produce
//! byte-identical reports.

mod checks;
pub mod generate;
mod shrink;

pub use checks::{
    check_disjoint_dilation, check_holder, check_natural_sandwich, check_pointwise_bound,
    check_psi_integral_bound, check_quasi_uniform_convexity, check_superadditivity,
    check_transport_bound, remark_counterexample, remark_with_gauge,
};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::extent::Extent;
use crate::gauge::ConcaveGauge;
use crate::textio::{fmt_rat, fmt_value};
use crate::value::{Rat, Value, DEFAULT_PRECISION};

/// Tri-state check outcome.  `Inconclusive` only arises for enclosure-based
/// comparisons whose intervals overlap; raising the precision resolves it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Holds,
    Violated,
    Inconclusive,
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Outcome::Holds => write!(f, "yes"),
            Outcome::Violated => write!(f, "no"),
            Outcome::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    /// Full serialized inputs (reports print the digest; violations print
    /// the whole instance).
    pub instance: String,
    pub outcome: Outcome,
    /// Inequality slack (or the achieved ratio for the transport check).
    pub margin: Value,
    /// Point where the margin is extremal, when one exists.
    pub witness: Option<Rat>,
}

impl CheckResult {
    pub fn holds(&self) -> bool {
        self.outcome == Outcome::Holds
    }

    pub fn digest(&self) -> String {
        fnv64(&self.instance)
    }

    /// The one-line report record: name, instance digest, outcome, margin,
    /// witness.
    pub fn render_line(&self) -> String {
        format!(
            "check={} instance={} holds={} margin={} witness={}",
            self.name,
            self.digest(),
            self.outcome,
            fmt_value(&self.margin),
            self.witness.as_ref().map(|w| fmt_rat(w)).unwrap_or_else(|| "none".into()),
        )
    }
}

/// FNV-1a, used as a deterministic instance identifier.
pub(crate) fn fnv64(s: &str) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("{h:016x}")
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub seed: u64,
    pub cases: u32,
    pub max_pieces: u32,
    pub gauge_pool: Vec<ConcaveGauge>,
    pub extent_pool: Vec<Extent>,
    pub precision: u32,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            cases: 100,
            max_pieces: 6,
            gauge_pool: generate::default_gauge_pool(),
            extent_pool: vec![Extent::finite(Rat::from_integer(1.into())), Extent::Infinite],
            precision: DEFAULT_PRECISION,
        }
    }
}

/// The check families the suite can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Superadditivity,
    DisjointDilation,
    PointwiseBound,
    RatioIntegralBound,
    TransportBound,
    QuasiUniformConvexity,
    HolderPairing,
    NaturalSandwich,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::Superadditivity,
        Family::DisjointDilation,
        Family::PointwiseBound,
        Family::RatioIntegralBound,
        Family::TransportBound,
        Family::QuasiUniformConvexity,
        Family::HolderPairing,
        Family::NaturalSandwich,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Family::Superadditivity => "superadditivity",
            Family::DisjointDilation => "disjoint_dilation",
            Family::PointwiseBound => "pointwise_bound",
            Family::RatioIntegralBound => "ratio_integral_bound",
            Family::TransportBound => "transport_bound",
            Family::QuasiUniformConvexity => "quasi_uniform_convexity",
            Family::HolderPairing => "holder_pairing",
            Family::NaturalSandwich => "natural_sandwich",
        }
    }

    fn stream(&self) -> u64 {
        match self {
            Family::Superadditivity => 1,
            Family::DisjointDilation => 2,
            Family::PointwiseBound => 3,
            Family::RatioIntegralBound => 4,
            Family::TransportBound => 5,
            Family::QuasiUniformConvexity => 6,
            Family::HolderPairing => 7,
            Family::NaturalSandwich => 8,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub results: Vec<CheckResult>,
    pub seed: u64,
}

impl SuiteReport {
    pub fn cases(&self) -> usize {
        self.results.len()
    }

    pub fn violations(&self) -> usize {
        self.results.iter().filter(|r| r.outcome == Outcome::Violated).count()
    }

    pub fn inconclusive(&self) -> usize {
        self.results.iter().filter(|r| r.outcome == Outcome::Inconclusive).count()
    }

    /// One record per result, violations with their minimized instances, and
    /// the summary line.  Byte-deterministic for a fixed seed and config.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            out.push_str(&r.render_line());
            out.push('\n');
        }
        for r in &self.results {
            if r.outcome == Outcome::Violated {
                out.push_str(&format!(
                    "violation: check={} instance={} margin={}\n",
                    r.name,
                    r.instance,
                    fmt_value(&r.margin)
                ));
            }
        }
        out.push_str(&format!(
            "violations={} cases={} seed={}\n",
            self.violations(),
            self.cases(),
            self.seed
        ));
        out
    }
}

/// Runs one family for `config.cases` seeded instances.  Premises are
/// enforced by the generators and re-audited inside every check; a premise
/// failure here is a harness bug, not a verification result.
pub fn run_family(config: &SuiteConfig, family: Family) -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(family.stream() << 32));
    let mut results = Vec::with_capacity(config.cases as usize);
    for _ in 0..config.cases {
        let instance = generate::generate(&mut rng, config, family);
        let mut result = instance
            .run(config.precision)
            .expect("generated instance must satisfy the check premises");
        if result.outcome == Outcome::Violated {
            result = shrink::minimize(&instance, config.precision);
        }
        results.push(result);
    }
    results
}

/// Runs every family plus the fixed counterexample bundle.
pub fn run_suite(config: &SuiteConfig) -> SuiteReport {
    let mut results = Vec::new();
    for family in Family::ALL {
        results.extend(run_family(config, family));
    }
    results.extend(remark_counterexample());
    SuiteReport { results, seed: config.seed }
}
