//! Invariant suite behind the `verify` subcommand.

use std::fmt;

use clap::ValueEnum;
use fogcache::analytics::{binom, brute_force_q_total, q_count, q_total, y_range};
use fogcache::scalar::relative_gap;
use fogcache::{
    check_decodability, closed_form_load, generate_library, load_bounds, mn_sync_load, partition_into_subfiles,
    place_caches, run_delivery, AnalyticRecords, DeliveryOptions, Error, FixedLConfig, RequestSchedule, SkipRule,
    SystemParams,
};
use num_bigint::BigUint;

use crate::tables::table_rows;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Fault {
    /// Negate the skip decision in every delivery run.
    InvertSkip,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIPPED",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn render(&self) -> String {
        let mut out: String = self
            .checks
            .iter()
            .map(|c| format!("{:<8} {:<22} {}\n", c.status.to_string(), c.name, c.detail))
            .collect();
        let failed: Vec<&str> = self.failures().map(|c| c.name.as_str()).collect();
        if failed.is_empty() {
            out.push_str("all checks passed\n");
        } else {
            out.push_str(&format!("{} failed: {}\n", failed.len(), failed.join(", ")));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    /// F-AP counts to exercise.
    pub ks: Vec<usize>,
    /// File size for bit-exact decoding runs.
    pub file_bits: usize,
    pub seeds: u64,
    pub fault: Option<Fault>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            ks: (4..=8).collect(),
            file_bits: 2000,
            seeds: 4,
            fault: None,
        }
    }
}

impl VerifyOptions {
    fn delivery(&self) -> DeliveryOptions {
        DeliveryOptions {
            skip_rule: match self.fault {
                Some(Fault::InvertSkip) => SkipRule::Inverted,
                None => SkipRule::DeadlineNeed,
            },
            record_trace: false,
        }
    }
}

enum Verdict {
    Pass(String),
    Fail(String),
    Skip(String),
}

fn check(name: String, verdict: Verdict) -> Check {
    let (status, detail) = match verdict {
        Verdict::Pass(d) => (Status::Pass, d),
        Verdict::Fail(d) => (Status::Fail, d),
        Verdict::Skip(d) => (Status::Skipped, d),
    };
    Check { name, status, detail }
}

fn from_error(e: Error) -> Verdict {
    match e {
        Error::TooLarge { .. } => Verdict::Skip(format!("warning: {e}")),
        other => Verdict::Fail(other.to_string()),
    }
}

fn factorizations(k: usize) -> Vec<(usize, usize)> {
    (2..=k).filter(|b| k % b == 0).map(|b| (b, k / b)).collect()
}

fn golden_tables(opts: &VerifyOptions) -> Verdict {
    let run = || -> fogcache::Result<Vec<crate::tables::TableRow>> {
        let params = SystemParams::new(4, 4, 2.0, 16, 4, 2)?;
        let schedule = RequestSchedule::fixed_l(4, 4, 1, None)?;
        let records = AnalyticRecords::analytic(&params, &schedule)?;
        let options = DeliveryOptions {
            record_trace: true,
            ..opts.delivery()
        };
        Ok(table_rows(&run_delivery(&params, &schedule, records, options)?))
    };
    let rows = match run() {
        Ok(rows) => rows,
        Err(e) => return from_error(e),
    };
    let sent = |slot| rows.iter().filter(|r| r.slot == slot && r.content.is_some()).count();
    let counts = [sent(2), sent(3), sent(4)];
    if counts == [8, 4, 11] {
        Verdict::Pass("slots 2, 3, 4 send 8, 4, 11 contents (23 total)".into())
    } else {
        Verdict::Fail(format!("slots 2, 3, 4 send {counts:?}, expected [8, 4, 11]"))
    }
}

fn oracle(k: usize) -> Verdict {
    let mut compared = 0;
    for (b, l) in factorizations(k) {
        let schedule = match RequestSchedule::fixed_l(k, b, l, None) {
            Ok(s) => s,
            Err(e) => return Verdict::Fail(e.to_string()),
        };
        for db in 1..=b {
            let config = match FixedLConfig::new(k, k, 1.0, 1, b, l, db) {
                Ok(c) => c,
                Err(e) => return Verdict::Fail(e.to_string()),
            };
            for s in 1..=k {
                let brute = match brute_force_q_total(s, &schedule, db) {
                    Ok(v) => v,
                    Err(e) => return from_error(e),
                };
                if q_total(s, &config) != brute {
                    return Verdict::Fail(format!("Q({s}) differs for B = {b}, L = {l}, delta_b = {db}"));
                }
                let sum: BigUint = y_range(s, &config).map(|y| q_count(s, y, &config)).sum();
                if sum != binom(k as i64, s as i64) {
                    return Verdict::Fail(format!("sum of q({s}, Y) is not C({k}, {s}) for B = {b}, delta_b = {db}"));
                }
                compared += 1;
            }
        }
    }
    if compared == 0 {
        return Verdict::Skip(format!("K = {k} admits no fixed-L schedule with B >= 2"));
    }
    Verdict::Pass(format!("{compared} (B, L, delta_b, s) cases"))
}

fn closed_form(k: usize, opts: &VerifyOptions) -> Verdict {
    let mut compared = 0;
    for (b, l) in factorizations(k) {
        for db in 1..=b {
            let result = (|| -> fogcache::Result<(f64, f64)> {
                let config = FixedLConfig::new(k, 2 * k, k as f64, 1000, b, l, db)?;
                let params = config.params()?;
                let schedule = config.schedule()?;
                let records = AnalyticRecords::analytic(&params, &schedule)?;
                let out = run_delivery(&params, &schedule, records, opts.delivery())?;
                Ok((out.report.normalized_load, closed_form_load(&config)?))
            })();
            match result {
                Ok((measured, closed)) if relative_gap(measured, closed) <= 1e-9 => compared += 1,
                Ok((measured, closed)) => {
                    return Verdict::Fail(format!("B = {b}, delta_b = {db}: measured {measured}, closed form {closed}"))
                }
                Err(e) => return from_error(e),
            }
        }
    }
    if compared == 0 {
        return Verdict::Skip(format!("K = {k} admits no fixed-L schedule with B >= 2"));
    }
    Verdict::Pass(format!("{compared} fixed-L configurations agree within 1e-9"))
}

fn sandwich(k: usize, opts: &VerifyOptions) -> Verdict {
    let n = 2 * k;
    let mut compared = 0;
    for b in 2..=k.min(5) {
        for m in [n as f64 / 4.0, n as f64 / 2.0, 3.0 * n as f64 / 4.0] {
            for db in 1..=b {
                for seed in 0..opts.seeds {
                    let result = (|| -> fogcache::Result<f64> {
                        let params = SystemParams::new(k, n, m, 1000, b, db)?;
                        let schedule = RequestSchedule::random(k, b, seed)?;
                        let records = AnalyticRecords::analytic(&params, &schedule)?;
                        Ok(run_delivery(&params, &schedule, records, opts.delivery())?.report.normalized_load)
                    })();
                    let load = match result {
                        Ok(load) => load,
                        Err(e) => return from_error(e),
                    };
                    let (lo, hi) = load_bounds::<f64>(m, n, k, b, db);
                    let slack = 1.0 + 1e-9;
                    let ratio = load / mn_sync_load::<f64>(m, n, k);
                    if load * slack < lo || load > hi * slack || ratio * slack < 1.0 || ratio > b.div_ceil(db) as f64 * slack {
                        return Verdict::Fail(format!(
                            "B = {b}, M = {m}, delta_b = {db}, seed {seed}: load {load} outside [{lo}, {hi}]"
                        ));
                    }
                    compared += 1;
                }
            }
        }
    }
    if compared == 0 {
        return Verdict::Skip(format!("K = {k} is too small for B >= 2"));
    }
    Verdict::Pass(format!("{compared} random schedules within bounds"))
}

fn decodability(k: usize, opts: &VerifyOptions) -> Verdict {
    let n = k + 2;
    let mut compared = 0;
    for b in 2..=k.min(5) {
        for db in 1..=b {
            for seed in 0..opts.seeds {
                let result = (|| -> fogcache::Result<usize> {
                    let params = SystemParams::new(k, n, n as f64 / 3.0, opts.file_bits, b, db)?;
                    let schedule = RequestSchedule::random(k, b, seed)?;
                    let library = generate_library(&params, seed)?;
                    let caches = place_caches(&params, seed)?;
                    let records = partition_into_subfiles::<f64>(&library, &caches, &schedule)?;
                    let out = run_delivery(&params, &schedule, records, opts.delivery())?;
                    check_decodability(&library, &caches, &schedule, &out, db)
                })();
                match result {
                    Ok(_) => compared += 1,
                    Err(e @ Error::TooLarge { .. }) => return from_error(e),
                    Err(e) => return Verdict::Fail(format!("B = {b}, delta_b = {db}, seed {seed}: {e}")),
                }
            }
        }
    }
    if compared == 0 {
        return Verdict::Skip(format!("K = {k} is too small for B >= 2"));
    }
    Verdict::Pass(format!("{compared} bit-exact runs decode by their deadlines"))
}

pub fn verify(opts: &VerifyOptions) -> VerifyReport {
    let mut checks = vec![check("golden-tables".into(), golden_tables(opts))];
    for &k in &opts.ks {
        checks.push(check(format!("oracle K={k}"), oracle(k)));
        checks.push(check(format!("closed-form K={k}"), closed_form(k, opts)));
        checks.push(check(format!("bounds K={k}"), sandwich(k, opts)));
        checks.push(check(format!("decodability K={k}"), decodability(k, opts)));
    }
    VerifyReport { checks }
}
