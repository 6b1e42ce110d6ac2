//! Batch verification: seeded instance streams, per-instance checks, and
//! JSON-lines reporting.

pub mod fixture;
pub mod gen;
mod suites;

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_traits::Signed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::ineq::GapReport;
use crate::scalar::{rat_string, Rat};

pub use fixture::run_fixture;

pub const THREADS_ENV: &str = "AFKIT_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Discriminant,
    Volume,
    Shephard,
    Torus,
    Bm,
    All,
}

impl Mode {
    pub const ALL: [Mode; 6] = [
        Mode::Discriminant,
        Mode::Volume,
        Mode::Shephard,
        Mode::Torus,
        Mode::Bm,
        Mode::All,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mode::Discriminant => "discriminant",
            Mode::Volume => "volume",
            Mode::Shephard => "shephard",
            Mode::Torus => "torus",
            Mode::Bm => "bm",
            Mode::All => "all",
        }
    }

    fn stream_id(self) -> u64 {
        match self {
            Mode::Discriminant => 1,
            Mode::Volume => 2,
            Mode::Shephard => 3,
            Mode::Torus => 4,
            Mode::Bm => 5,
            Mode::All => 0,
        }
    }

    fn max_n(self) -> usize {
        match self {
            Mode::Volume | Mode::All => crate::convexvol::MAX_DIM,
            _ => crate::mixdisc::PERMUTATION_LIMIT,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Mode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown mode `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub mode: Mode,
    pub seed: u64,
    pub trials: usize,
    pub n: usize,
    pub r: usize,
    /// Defaults to n.
    pub m: Option<usize>,
    pub grid: usize,
    pub tol: f64,
    pub entry_bound: u32,
    pub exact_only: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            mode: Mode::All,
            seed: 0,
            trials: 10,
            n: 3,
            r: 2,
            m: None,
            grid: 11,
            tol: 1e-9,
            entry_bound: 3,
            exact_only: false,
        }
    }
}

impl RunConfig {
    pub fn m(&self) -> usize {
        self.m.unwrap_or(self.n)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.trials == 0 {
            return bad("--trials must be at least 1".into());
        }
        let max_n = self.mode.max_n();
        if self.n < 2 || self.n > max_n {
            return bad(format!("--n must lie in [2, {max_n}] for mode {}", self.mode));
        }
        let m = self.m();
        if m < 2 || m > self.n {
            return bad(format!("--m must lie in [2, n = {}]", self.n));
        }
        if self.r == 0 || self.r > 8 {
            return bad("--r must lie in [1, 8]".into());
        }
        if self.grid < 3 {
            return bad("--grid must be at least 3".into());
        }
        if !(self.tol.is_finite() && self.tol >= 0.0) {
            return bad("--tol must be a finite nonnegative number".into());
        }
        if self.entry_bound == 0 {
            return bad("--entry-bound must be positive".into());
        }
        if self.exact_only && self.mode == Mode::Bm {
            return bad("--exact-only excludes mode bm (its checks are floating point)".into());
        }
        Ok(())
    }
}

/// One verified property of one instance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<GapReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub characterized: Option<bool>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub detail: Value,
}

impl Check {
    pub fn new(name: &'static str, pass: bool, detail: Value) -> Self {
        Check {
            name,
            pass,
            report: None,
            characterized: None,
            detail,
        }
    }

    pub fn with_report(mut self, report: GapReport) -> Self {
        self.characterized = Some(report.characterized);
        self.report = Some(report);
        self
    }

    /// Runs `f`; an error becomes a failed check carrying the message.
    pub fn run(name: &'static str, f: impl FnOnce() -> Result<Check>) -> Check {
        f().unwrap_or_else(|e| Check::new(name, false, serde_json::json!({ "error": e.to_string() })))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InstanceRecord {
    pub index: usize,
    pub mode: Mode,
    pub pass: bool,
    pub checks: Vec<Check>,
}

impl InstanceRecord {
    pub fn new(index: usize, mode: Mode, checks: Vec<Check>) -> Self {
        InstanceRecord {
            index,
            mode,
            pass: checks.iter().all(|c| c.pass),
            checks,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FailureRef {
    pub index: usize,
    pub mode: Mode,
    pub check: &'static str,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub config: RunConfig,
    pub instances: usize,
    pub checks: usize,
    pub failed_checks: usize,
    pub equalities: usize,
    #[serde(with = "crate::scalar::serde_rat::option")]
    pub min_gap: Option<Rat>,
    pub failures: Vec<FailureRef>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunRecord {
    pub instances: Vec<InstanceRecord>,
    pub summary: Summary,
}

impl RunRecord {
    pub fn from_instances(config: RunConfig, instances: Vec<InstanceRecord>) -> Self {
        let mut checks = 0;
        let mut equalities = 0;
        let mut min_gap: Option<Rat> = None;
        let mut failures = Vec::new();
        for rec in &instances {
            for c in &rec.checks {
                checks += 1;
                if !c.pass {
                    failures.push(FailureRef {
                        index: rec.index,
                        mode: rec.mode,
                        check: c.name,
                    });
                }
                if let Some(r) = &c.report {
                    if r.equality {
                        equalities += 1;
                    }
                    if min_gap.as_ref().is_none_or(|g| r.gap < *g) {
                        min_gap = Some(r.gap.clone());
                    }
                }
            }
        }
        let summary = Summary {
            config,
            instances: instances.len(),
            checks,
            failed_checks: failures.len(),
            equalities,
            min_gap,
            pass: failures.is_empty(),
            failures,
        };
        RunRecord { instances, summary }
    }

    pub fn passed(&self) -> bool {
        self.summary.pass
    }

    /// One line per instance in index order, then `{"summary": …}`.
    pub fn write_jsonl<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for rec in &self.instances {
            serde_json::to_writer(&mut w, rec)?;
            w.write_all(b"\n")?;
        }
        #[derive(Serialize)]
        struct SummaryLine<'a> {
            summary: &'a Summary,
        }
        serde_json::to_writer(&mut w, &SummaryLine { summary: &self.summary })?;
        w.write_all(b"\n")?;
        w.flush()
    }

    pub fn to_jsonl(&self) -> String {
        let mut buf = Vec::new();
        self.write_jsonl(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("serde_json emits UTF-8")
    }
}

/// Worker count from `AFKIT_THREADS`, if set to a positive integer.
pub fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&k| k > 0)
}

fn modes_for(cfg: &RunConfig) -> Vec<Mode> {
    match cfg.mode {
        Mode::All => {
            let mut v = vec![Mode::Discriminant, Mode::Volume, Mode::Shephard, Mode::Torus];
            if !cfg.exact_only {
                v.push(Mode::Bm);
            }
            v
        }
        m => vec![m],
    }
}

pub fn run_suite(cfg: &RunConfig) -> Result<RunRecord> {
    cfg.validate()?;
    let jobs: Vec<(Mode, usize)> = modes_for(cfg)
        .into_iter()
        .flat_map(|m| (0..cfg.trials).map(move |i| (m, i)))
        .collect();
    let work = || -> Vec<InstanceRecord> {
        jobs.par_iter()
            .map(|&(mode, i)| {
                let mut rng = gen::rng_for(cfg.seed, (mode.stream_id() << 32) | i as u64);
                InstanceRecord::new(i, mode, suites::run_instance(mode, cfg, &mut rng))
            })
            .collect()
    };
    let instances = match thread_cap() {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| Error::Config(e.to_string()))?
            .install(work),
        None => work(),
    };
    let record = RunRecord::from_instances(cfg.clone(), instances);
    if let Some(g) = &record.summary.min_gap {
        if g.is_negative() {
            log::error!("negative gap {} recorded", rat_string(g));
        }
    }
    Ok(record)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(mode: Mode) -> RunConfig {
        RunConfig {
            mode,
            trials: 3,
            n: 2,
            m: None,
            ..RunConfig::default()
        }
    }

    #[test]
    fn every_mode_passes_small() {
        for mode in Mode::ALL {
            let rec = run_suite(&small(mode)).unwrap();
            assert!(rec.passed(), "{mode}: {:?}", rec.summary.failures);
        }
    }

    #[test]
    fn deterministic_output() {
        let cfg = RunConfig {
            trials: 4,
            ..small(Mode::All)
        };
        assert_eq!(run_suite(&cfg).unwrap().to_jsonl(), run_suite(&cfg).unwrap().to_jsonl());
    }

    #[test]
    fn config_errors() {
        let bad = [
            RunConfig { trials: 0, ..RunConfig::default() },
            RunConfig { n: 5, ..RunConfig::default() },
            RunConfig { mode: Mode::Discriminant, n: 7, ..RunConfig::default() },
            RunConfig { m: Some(4), ..RunConfig::default() },
            RunConfig { grid: 2, ..RunConfig::default() },
            RunConfig { mode: Mode::Bm, exact_only: true, ..RunConfig::default() },
        ];
        for cfg in bad {
            assert!(matches!(run_suite(&cfg), Err(Error::Config(_))), "{cfg:?}");
        }
    }

    #[test]
    fn exact_only_drops_bm_from_all() {
        let cfg = RunConfig {
            exact_only: true,
            trials: 1,
            ..small(Mode::All)
        };
        let rec = run_suite(&cfg).unwrap();
        assert!(rec.instances.iter().all(|r| r.mode != Mode::Bm));
    }

    #[test]
    fn mode_names_round_trip() {
        for m in Mode::ALL {
            assert_eq!(m.name().parse::<Mode>().unwrap(), m);
        }
        assert!("nope".parse::<Mode>().is_err());
    }

    #[test]
    fn jsonl_ends_with_summary() {
        let out = run_suite(&small(Mode::Shephard)).unwrap().to_jsonl();
        let last = out.lines().last().unwrap();
        let v: Value = serde_json::from_str(last).unwrap();
        assert_eq!(v["summary"]["pass"], Value::Bool(true));
        assert_eq!(out.lines().count(), 4);
    }
}
