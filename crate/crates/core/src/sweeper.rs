//! Exhaustive search over `(s, r)` for cells where `p_{s,1}, ..., p_{s,s}`
//! are all integers.
//!
//! Rows are indexed by `s` and visited in increasing order; inside a row the
//! cells run in parallel and are collected in `r` order, so the report does
//! not depend on the number of workers. A checkpoint file records each
//! finished row and lets an interrupted run resume.
//!
//! Checkpoint layout:
//!
//! ```text
//! sweep-checkpoint v1 s=2..60 r=case1 prefilter=on
//! 2 2 2
//! 2 3 ALL
//! END 2 2 <16 hex digits>
//! ```
//!
//! Each cell line is `s r outcome` where outcome is the first failing index,
//! `ALL`, or `SKIP` for a prefiltered cell. The `END` line carries the row's
//! cell count and a truncated SHA-256 of its cell lines.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::fs::{self, File, OpenOptions};
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::exactnum::certified::growth_bound_floor;
use crate::phicert::{growth_constant, p_coeff, PhiParams};

/// Runs with more cells than this need `ack_long_run`.
pub const LONG_RUN_CELLS: u64 = 2_000_000;
/// Largest `r` covered by the second search rule.
pub const CASE21_MAX_R: u64 = 287;

const HEADER_TAG: &str = "sweep-checkpoint v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CellResult {
    pub all_integral: bool,
    pub first_fail: Option<u64>,
}

/// Walks `p_{s,1}, p_{s,2}, ...` and stops at the first non-integer.
pub fn cell_all_integral(r: u64, s: u64) -> Result<CellResult> {
    let params = PhiParams::new(r, s)?;
    for i in 1..=s {
        if !p_coeff(params, i)?.is_integer() {
            return Ok(CellResult {
                all_integral: false,
                first_fail: Some(i),
            });
        }
    }
    Ok(CellResult {
        all_integral: true,
        first_fail: None,
    })
}

/// `false` when `r >= 3s^2/4`, where `p_{s,2}` cannot be an integer.
pub fn prop56_prefilter(r: u64, s: u64) -> Result<bool> {
    if s < 2 {
        return Err(Error::out_of_range("s", s as i64, 2, i64::MAX));
    }
    Ok((4 * r as u128) < 3 * (s as u128) * (s as u128))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RRule {
    Explicit { lo: u64, hi: u64 },
    /// `2 <= r <= floor(3 s^2 / 4)`.
    Case1,
    /// `2 <= r <= 287` with `s <= 5000 r (14.5 + ln r)^2`.
    Case21,
}

impl fmt::Display for RRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RRule::Explicit { lo, hi } => write!(f, "{lo}..{hi}"),
            RRule::Case1 => f.write_str("case1"),
            RRule::Case21 => f.write_str("case21"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepSpec {
    pub s_lo: u64,
    pub s_hi: u64,
    pub r_rule: RRule,
    pub prefilter: bool,
    pub jobs: usize,
    pub checkpoint: Option<PathBuf>,
    pub ack_long_run: bool,
}

impl SweepSpec {
    pub fn new(s_lo: u64, s_hi: u64, r_rule: RRule) -> Self {
        SweepSpec {
            s_lo,
            s_hi,
            r_rule,
            prefilter: true,
            jobs: 1,
            checkpoint: None,
            ack_long_run: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.s_lo == 0 || self.s_lo > self.s_hi {
            return Err(Error::Domain(format!(
                "s range {}..{} must be nonempty with s >= 1",
                self.s_lo, self.s_hi
            )));
        }
        if let RRule::Explicit { lo, hi } = self.r_rule {
            if lo == 0 || lo > hi {
                return Err(Error::Domain(format!(
                    "r range {lo}..{hi} must be nonempty with r >= 1"
                )));
            }
        }
        if self.jobs == 0 {
            return Err(Error::Domain("jobs must be at least 1".into()));
        }
        Ok(())
    }

    /// The part of the spec that determines the report.
    pub fn header(&self) -> String {
        format!(
            "{HEADER_TAG} s={}..{} r={} prefilter={}",
            self.s_lo,
            self.s_hi,
            self.r_rule,
            if self.prefilter { "on" } else { "off" }
        )
    }
}

struct Grid {
    rule: RRule,
    /// Growth-bound floors for `r = 2..=287`, filled for the second rule.
    case21_floors: Vec<u128>,
}

impl Grid {
    fn new(rule: RRule) -> Self {
        let case21_floors = match rule {
            RRule::Case21 => (2..=CASE21_MAX_R)
                .map(|r| {
                    growth_bound_floor(r, &growth_constant())
                        .try_into()
                        .unwrap_or(u128::MAX)
                })
                .collect(),
            _ => Vec::new(),
        };
        Grid {
            rule,
            case21_floors,
        }
    }

    /// Inclusive `r` bounds for row `s`; `None` when the row is empty.
    fn row(&self, s: u64) -> Option<(u64, u64)> {
        let (lo, hi) = match self.rule {
            RRule::Explicit { lo, hi } => (lo, hi),
            RRule::Case1 => (2, (3 * s as u128 * s as u128 / 4).min(u64::MAX as u128) as u64),
            RRule::Case21 => {
                // floors increase with r, so the admissible r form a suffix
                let first = self
                    .case21_floors
                    .iter()
                    .position(|&f| s as u128 <= f)?;
                (first as u64 + 2, CASE21_MAX_R)
            }
        };
        (lo <= hi).then_some((lo, hi))
    }

    fn count_capped(&self, s_lo: u64, s_hi: u64, cap: u64) -> u64 {
        let mut total: u64 = 0;
        for s in s_lo..=s_hi {
            if let Some((lo, hi)) = self.row(s) {
                total = total.saturating_add(hi - lo + 1);
            }
            if total > cap {
                break;
            }
        }
        total
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Outcome {
    Skipped,
    All,
    Fail(u64),
}

impl Outcome {
    fn token(self) -> String {
        match self {
            Outcome::Skipped => "SKIP".into(),
            Outcome::All => "ALL".into(),
            Outcome::Fail(i) => i.to_string(),
        }
    }

    fn parse(token: &str) -> Option<Self> {
        match token {
            "SKIP" => Some(Outcome::Skipped),
            "ALL" => Some(Outcome::All),
            t => t.parse().ok().filter(|&i| i >= 1).map(Outcome::Fail),
        }
    }
}

type Row = Vec<(u64, Outcome)>;

fn evaluate(r: u64, s: u64, prefilter: bool) -> Result<Outcome> {
    if prefilter && s >= 2 && !prop56_prefilter(r, s)? {
        return Ok(Outcome::Skipped);
    }
    let cell = cell_all_integral(r, s)?;
    Ok(match cell.first_fail {
        None => Outcome::All,
        Some(i) => Outcome::Fail(i),
    })
}

fn row_lines(s: u64, row: &Row) -> String {
    let mut out = String::new();
    for (r, o) in row {
        let _ = writeln!(out, "{s} {r} {}", o.token());
    }
    out
}

fn row_checksum(lines: &str) -> String {
    hex::encode(&Sha256::digest(lines.as_bytes())[..8])
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepReport {
    pub header: String,
    pub cells_total: u64,
    pub cells_examined: u64,
    pub cells_prefiltered: u64,
    /// `(s, r)` with every `p_{s,i}` integral, sorted.
    pub hits: Vec<(u64, u64)>,
    /// Count of examined cells by the first failing index.
    pub first_fail_histogram: BTreeMap<u64, u64>,
}

impl SweepReport {
    fn absorb(&mut self, s: u64, row: &Row) {
        for &(r, o) in row {
            self.cells_total += 1;
            match o {
                Outcome::Skipped => self.cells_prefiltered += 1,
                Outcome::All => {
                    self.cells_examined += 1;
                    self.hits.push((s, r));
                }
                Outcome::Fail(i) => {
                    self.cells_examined += 1;
                    *self.first_fail_histogram.entry(i).or_default() += 1;
                }
            }
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.header);
        let _ = writeln!(out, "cells_total {}", self.cells_total);
        let _ = writeln!(out, "cells_examined {}", self.cells_examined);
        let _ = writeln!(out, "cells_prefiltered {}", self.cells_prefiltered);
        let _ = writeln!(out, "hits {}", self.hits.len());
        for (s, r) in &self.hits {
            let _ = writeln!(out, "hit {s} {r}");
        }
        for (i, c) in &self.first_fail_histogram {
            let _ = writeln!(out, "first_fail {i} {c}");
        }
        out
    }
}

/// Run facts that vary between otherwise identical runs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepStats {
    pub wall: Duration,
    pub rows_resumed: u64,
    pub rows_computed: u64,
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub report: SweepReport,
    pub stats: SweepStats,
}

fn corrupt(path: &Path, message: impl Into<String>) -> Error {
    Error::Checkpoint {
        path: path.to_path_buf(),
        message: message.into(),
    }
}

/// Replays the complete rows of an existing checkpoint, truncating any
/// trailing partial row. Returns the replayed rows keyed by `s`.
fn replay(path: &Path, spec: &SweepSpec, grid: &Grid) -> Result<Vec<(u64, Row)>> {
    let text = match fs::read(path) {
        Ok(bytes) => String::from_utf8(bytes).map_err(|_| corrupt(path, "not UTF-8"))?,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(e.into()),
    };
    if text.is_empty() {
        return Ok(Vec::new());
    }
    let terminated = text.ends_with('\n');
    let lines: Vec<&str> = text.lines().collect();
    let header = spec.header();
    if lines.len() == 1 && !terminated && header.starts_with(lines[0]) {
        OpenOptions::new().write(true).open(path)?.set_len(0)?;
        return Ok(Vec::new());
    }
    if lines[0] != header {
        return Err(corrupt(path, format!("header {:?} does not match {:?}", lines[0], header)));
    }
    let mut rows = Vec::new();
    let mut complete_bytes = header.len() + 1;
    let mut next_s = spec.s_lo;
    let mut pending: Row = Vec::new();
    let mut pending_text = String::new();
    let mut pending_bytes = 0usize;
    for (k, &line) in lines.iter().enumerate().skip(1) {
        let last_unterminated = k == lines.len() - 1 && !terminated;
        let bad = |msg: String| corrupt(path, format!("line {}: {msg}", k + 1));
        let fields: Vec<&str> = line.split(' ').collect();
        if fields.first() == Some(&"END") {
            if last_unterminated {
                break;
            }
            let [_, s, count, sum] = fields[..] else {
                return Err(bad("malformed END line".into()));
            };
            let s: u64 = s.parse().map_err(|_| bad("bad row index".into()))?;
            let count: usize = count.parse().map_err(|_| bad("bad count".into()))?;
            if s != next_s || s > spec.s_hi {
                return Err(bad(format!("row {s} out of order, expected {next_s}")));
            }
            let expected_len = grid.row(s).map_or(0, |(lo, hi)| (hi - lo + 1) as usize);
            if count != pending.len() || count != expected_len {
                return Err(bad(format!(
                    "row {s} has {} cells, END says {count}, grid has {expected_len}",
                    pending.len()
                )));
            }
            if sum != row_checksum(&pending_text) {
                return Err(bad(format!("checksum mismatch for row {s}")));
            }
            rows.push((s, std::mem::take(&mut pending)));
            pending_text.clear();
            complete_bytes += pending_bytes + line.len() + 1;
            pending_bytes = 0;
            next_s += 1;
            continue;
        }
        let parsed = match fields[..] {
            [s, r, o] => match (s.parse::<u64>(), r.parse::<u64>(), Outcome::parse(o)) {
                (Ok(s), Ok(r), Some(o)) => Some((s, r, o)),
                _ => None,
            },
            _ => None,
        };
        let Some((s, r, o)) = parsed else {
            if last_unterminated {
                break;
            }
            return Err(bad(format!("malformed cell line {line:?}")));
        };
        let expected_r = grid.row(next_s).map(|(lo, _)| lo + pending.len() as u64);
        if s != next_s || Some(r) != expected_r || grid.row(s).is_some_and(|(_, hi)| r > hi) {
            if last_unterminated {
                break;
            }
            return Err(bad(format!("cell ({s}, {r}) out of order")));
        }
        if last_unterminated {
            break;
        }
        pending.push((r, o));
        let _ = writeln!(pending_text, "{line}");
        pending_bytes += line.len() + 1;
    }
    if complete_bytes < text.len() {
        let f = OpenOptions::new().write(true).open(path)?;
        f.set_len(complete_bytes as u64)?;
    }
    Ok(rows)
}

/// Runs the sweep described by `spec`, resuming from its checkpoint if one
/// exists.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepOutcome> {
    spec.validate()?;
    let start = Instant::now();
    let grid = Grid::new(spec.r_rule);
    let cells = grid.count_capped(spec.s_lo, spec.s_hi, LONG_RUN_CELLS);
    if cells > LONG_RUN_CELLS && !spec.ack_long_run {
        return Err(Error::LongRunNotAcknowledged {
            cells: cells as u128,
        });
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.jobs)
        .build()
        .map_err(|e| Error::Resource(e.to_string()))?;

    let mut report = SweepReport {
        header: spec.header(),
        cells_total: 0,
        cells_examined: 0,
        cells_prefiltered: 0,
        hits: Vec::new(),
        first_fail_histogram: BTreeMap::new(),
    };
    let mut stats = SweepStats {
        wall: Duration::ZERO,
        rows_resumed: 0,
        rows_computed: 0,
    };

    let mut writer: Option<File> = None;
    let mut next_s = spec.s_lo;
    if let Some(path) = &spec.checkpoint {
        let replayed = replay(path, spec, &grid)?;
        for (s, row) in &replayed {
            report.absorb(*s, row);
            stats.rows_resumed += 1;
            next_s = s + 1;
        }
        let mut f = OpenOptions::new().create(true).append(true).open(path)?;
        if f.metadata()?.len() == 0 {
            writeln!(f, "{}", spec.header())?;
        }
        writer = Some(f);
    }

    for s in next_s..=spec.s_hi {
        let row: Row = match grid.row(s) {
            None => Vec::new(),
            Some((lo, hi)) => pool.install(|| {
                (lo..=hi)
                    .into_par_iter()
                    .map(|r| evaluate(r, s, spec.prefilter).map(|o| (r, o)))
                    .collect::<Result<Row>>()
            })?,
        };
        if let Some(f) = writer.as_mut() {
            let lines = row_lines(s, &row);
            writeln!(f, "{lines}END {s} {} {}", row.len(), row_checksum(&lines))?;
            f.flush()?;
        }
        report.absorb(s, &row);
        stats.rows_computed += 1;
    }
    report.hits.sort_unstable();
    stats.wall = start.elapsed();
    Ok(SweepOutcome { report, stats })
}
