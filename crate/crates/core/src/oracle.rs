//! Independent checks on schedules, exact solvers for tiny instances and a
//! seeded random design generator.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::design::{CoreSpec, SocDesign};
use crate::error::{Error, Result};
use crate::rectangles::{build_rectangles, RectangleSet};
use crate::scheduler::{check_schedulable, Limits, Placement, Schedule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ViolationKind {
    WidthOverflow,
    PowerOverflow,
    BadWidth,
    BadDuration,
    Duplicate,
    Unscheduled,
    UnknownCore,
}

impl ViolationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ViolationKind::WidthOverflow => "width-overflow",
            ViolationKind::PowerOverflow => "power-overflow",
            ViolationKind::BadWidth => "bad-width",
            ViolationKind::BadDuration => "bad-duration",
            ViolationKind::Duplicate => "duplicate",
            ViolationKind::Unscheduled => "unscheduled",
            ViolationKind::UnknownCore => "unknown-core",
        }
    }
}

/// Where a violation sits: a point in time or a specific core.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Locus {
    Time(u64),
    Core(u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub at: Locus,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.at {
            Locus::Time(t) => write!(f, "{} at cycle {}: {}", self.kind.as_str(), t, self.detail),
            Locus::Core(c) => write!(f, "{} on core {}: {}", self.kind.as_str(), c, self.detail),
        }
    }
}

fn core_violation(kind: ViolationKind, core: u32, detail: String) -> Violation {
    Violation {
        kind,
        at: Locus::Core(core),
        detail,
    }
}

/// Report each maximal stretch where `load` exceeds `cap`, at its first cycle.
fn sweep_overflows(
    intervals: &[(u64, u64, u64)],
    cap: u64,
    kind: ViolationKind,
    what: &str,
    out: &mut Vec<Violation>,
) {
    let mut delta: BTreeMap<u64, i128> = BTreeMap::new();
    for &(s, f, amount) in intervals {
        if f > s && amount > 0 {
            *delta.entry(s).or_default() += amount as i128;
            *delta.entry(f).or_default() -= amount as i128;
        }
    }
    let mut load: i128 = 0;
    let mut over = false;
    for (t, d) in delta {
        load += d;
        let now_over = load > cap as i128;
        if now_over && !over {
            out.push(Violation {
                kind,
                at: Locus::Time(t),
                detail: format!("{what} {load} exceeds limit {cap}"),
            });
        }
        over = now_over;
    }
}

/// Every broken constraint of `sched`, in a stable order. Empty means the
/// schedule is complete and feasible.
pub fn validate(sched: &Schedule, design: &SocDesign, limits: &Limits) -> Vec<Violation> {
    let mut out = Vec::new();
    let sets: Vec<RectangleSet> = build_rectangles(design, limits.w_max).unwrap_or_default();
    let set_of = |id: u32| sets.iter().find(|s| s.core_id == id);

    let mut seen = BTreeSet::new();
    for p in &sched.placements {
        let id = p.core_id;
        if !seen.insert(id) {
            out.push(core_violation(
                ViolationKind::Duplicate,
                id,
                "core scheduled more than once".into(),
            ));
            continue;
        }
        let Some(core) = design.core(id) else {
            out.push(core_violation(
                ViolationKind::UnknownCore,
                id,
                "core is not part of the design".into(),
            ));
            continue;
        };
        let set = set_of(core.id);
        let expected = set.and_then(|s| s.time_at(p.width));
        match (set, expected) {
            (Some(s), Some(_)) if 2 * p.width < s.max_tam_u => out.push(core_violation(
                ViolationKind::BadWidth,
                id,
                format!(
                    "width {} is below half of peak width {}",
                    p.width, s.max_tam_u
                ),
            )),
            (_, None) => out.push(core_violation(
                ViolationKind::BadWidth,
                id,
                format!(
                    "width {} is not a rectangle of this core under w_max {}",
                    p.width, limits.w_max
                ),
            )),
            _ => {}
        }
        if p.finish < p.start {
            out.push(core_violation(
                ViolationKind::BadDuration,
                id,
                format!("finish {} precedes start {}", p.finish, p.start),
            ));
        } else if let Some(t) = expected {
            if p.finish - p.start != t {
                out.push(core_violation(
                    ViolationKind::BadDuration,
                    id,
                    format!(
                        "duration {} but test time at width {} is {}",
                        p.finish - p.start,
                        p.width,
                        t
                    ),
                ));
            }
        }
    }
    for core in &design.cores {
        if !seen.contains(&core.id) {
            out.push(core_violation(
                ViolationKind::Unscheduled,
                core.id,
                "core never scheduled".into(),
            ));
        }
    }

    let widths: Vec<(u64, u64, u64)> = sched
        .placements
        .iter()
        .map(|p| (p.start, p.finish, p.width as u64))
        .collect();
    sweep_overflows(
        &widths,
        limits.w_max as u64,
        ViolationKind::WidthOverflow,
        "TAM width in use",
        &mut out,
    );
    if let Some(cap) = limits.p_max {
        let powers: Vec<(u64, u64, u64)> = sched
            .placements
            .iter()
            .filter_map(|p| {
                design
                    .core(p.core_id)
                    .map(|c| (p.start, p.finish, c.power_mw as u64))
            })
            .collect();
        sweep_overflows(
            &powers,
            cap,
            ViolationKind::PowerOverflow,
            "power (mW)",
            &mut out,
        );
    }
    out
}

pub const ORACLE_MAX_CORES: usize = 5;
pub const ORACLE_MAX_POINTS: usize = 4;

#[derive(Debug, Clone, Copy)]
struct Job {
    power: u64,
    /// (width, time) choices.
    options: [(u32, u64); ORACLE_MAX_POINTS],
    n_options: usize,
}

impl Job {
    fn options(&self) -> &[(u32, u64)] {
        &self.options[..self.n_options]
    }

    fn min_area(&self) -> u64 {
        self.options()
            .iter()
            .map(|&(w, t)| w as u64 * t)
            .min()
            .unwrap_or(0)
    }
}

#[derive(Debug, Clone, Copy)]
struct Placed {
    start: u64,
    finish: u64,
    width: u32,
    power: u64,
}

fn jobs_for(design: &SocDesign, limits: &Limits) -> Result<Vec<Job>> {
    if design.len() > ORACLE_MAX_CORES {
        return Err(Error::OracleTooLarge(format!(
            "{} cores (limit {ORACLE_MAX_CORES})",
            design.len()
        )));
    }
    check_schedulable(design, limits)?;
    let sets = build_rectangles(design, limits.w_max)?;
    let mut jobs = Vec::with_capacity(sets.len());
    for (core, set) in design.cores.iter().zip(&sets) {
        if set.points.len() > ORACLE_MAX_POINTS {
            return Err(Error::OracleTooLarge(format!(
                "core {} has {} rectangles (limit {ORACLE_MAX_POINTS})",
                core.id,
                set.points.len()
            )));
        }
        let mut options = [(0, 0); ORACLE_MAX_POINTS];
        for (slot, p) in options.iter_mut().zip(&set.points) {
            *slot = (p.tam_u, p.test_time);
        }
        jobs.push(Job {
            power: core.power_mw as u64,
            options,
            n_options: set.points.len(),
        });
    }
    Ok(jobs)
}

fn fits_at(
    placed: &[Placed],
    start: u64,
    finish: u64,
    width: u32,
    power: u64,
    limits: &Limits,
) -> bool {
    // Load over [start, finish) only rises at `start` or at a later start.
    let probes = std::iter::once(start).chain(
        placed
            .iter()
            .map(|p| p.start)
            .filter(|&s| s > start && s < finish),
    );
    for t in probes {
        let (mut w, mut pw) = (width as u64, power);
        for p in placed {
            if p.start <= t && t < p.finish {
                w += p.width as u64;
                pw += p.power;
            }
        }
        if w > limits.w_max as u64 || limits.p_max.is_some_and(|cap| pw > cap) {
            return false;
        }
    }
    true
}

struct Search<'a> {
    jobs: &'a [Job],
    limits: Limits,
    area_bound: u64,
    best: u64,
    placed: Vec<Placed>,
    done: Vec<bool>,
}

impl Search<'_> {
    fn recurse(&mut self, last_start: u64, makespan: u64) {
        if makespan >= self.best {
            return;
        }
        if self.placed.len() == self.jobs.len() {
            self.best = makespan;
            return;
        }
        // Any remaining core starts no earlier than `last_start`.
        let tail = (0..self.jobs.len())
            .filter(|&i| !self.done[i])
            .map(|i| {
                self.jobs[i]
                    .options()
                    .iter()
                    .map(|o| o.1)
                    .min()
                    .unwrap_or(0)
            })
            .max()
            .unwrap_or(0);
        if (last_start + tail).max(self.area_bound) >= self.best {
            return;
        }
        let mut starts: Vec<u64> = std::iter::once(0)
            .chain(self.placed.iter().map(|p| p.finish))
            .filter(|&t| t >= last_start)
            .collect();
        starts.sort_unstable();
        starts.dedup();
        for i in 0..self.jobs.len() {
            if self.done[i] {
                continue;
            }
            let job = self.jobs[i];
            for &(width, time) in job.options() {
                for &s in &starts {
                    let f = s + time;
                    if f.max(makespan) >= self.best {
                        break;
                    }
                    if !fits_at(&self.placed, s, f, width, job.power, &self.limits) {
                        continue;
                    }
                    self.done[i] = true;
                    self.placed.push(Placed {
                        start: s,
                        finish: f,
                        width,
                        power: job.power,
                    });
                    self.recurse(s, makespan.max(f));
                    self.placed.pop();
                    self.done[i] = false;
                }
            }
        }
    }
}

/// Exact minimum makespan by branch and bound. Cores are placed in order of
/// start time, each at 0 or at the finish of a core placed before it.
pub fn brute_force_optimal(design: &SocDesign, limits: &Limits) -> Result<u64> {
    let jobs = jobs_for(design, limits)?;
    if jobs.is_empty() {
        return Ok(0);
    }
    let area: u64 = jobs.iter().map(Job::min_area).sum();
    let w = limits.w_max as u64;
    // Serial execution at each core's fastest point is always feasible.
    let serial: u64 = jobs
        .iter()
        .map(|j| j.options().iter().map(|o| o.1).min().unwrap_or(0))
        .sum();
    let mut search = Search {
        jobs: &jobs,
        limits: *limits,
        area_bound: area.div_ceil(w),
        best: serial + 1,
        placed: Vec::with_capacity(jobs.len()),
        done: vec![false; jobs.len()],
    };
    search.recurse(0, 0);
    Ok(search.best)
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

fn fits_anywhere(
    placed: &[Placed],
    start: u64,
    finish: u64,
    width: u32,
    power: u64,
    limits: &Limits,
) -> bool {
    // Unlike `fits_at`, placed cores may start after `start`.
    let mut probes: Vec<u64> = vec![start];
    probes.extend(
        placed
            .iter()
            .map(|p| p.start)
            .filter(|&s| s > start && s < finish),
    );
    probes.into_iter().all(|t| {
        let mut w = width as u64;
        let mut pw = power;
        for p in placed.iter().filter(|p| p.start <= t && t < p.finish) {
            w += p.width as u64;
            pw += p.power;
        }
        w <= limits.w_max as u64 && limits.p_max.is_none_or(|cap| pw <= cap)
    })
}

/// Exhaustive enumeration of rectangle selections and core orders, each
/// order placed serially at the earliest feasible event time. Shares no
/// search code with [`brute_force_optimal`].
pub fn enumerate_optimal(design: &SocDesign, limits: &Limits) -> Result<u64> {
    let jobs = jobs_for(design, limits)?;
    let n = jobs.len();
    if n == 0 {
        return Ok(0);
    }
    let mut best = u64::MAX;
    let mut choice = vec![0usize; n];
    loop {
        let mut perm: Vec<usize> = (0..n).collect();
        loop {
            let mut placed: Vec<Placed> = Vec::with_capacity(n);
            for &i in &perm {
                let (width, time) = jobs[i].options()[choice[i]];
                let mut candidates: Vec<u64> = vec![0];
                candidates.extend(placed.iter().map(|p| p.finish));
                candidates.sort_unstable();
                let start = candidates
                    .into_iter()
                    .find(|&s| fits_anywhere(&placed, s, s + time, width, jobs[i].power, limits))
                    .expect("after every placed core finishes the candidate fits");
                placed.push(Placed {
                    start,
                    finish: start + time,
                    width,
                    power: jobs[i].power,
                });
            }
            best = best.min(placed.iter().map(|p| p.finish).max().unwrap_or(0));
            if !next_permutation(&mut perm) {
                break;
            }
        }
        // Odometer over the per-core rectangle choices.
        let mut k = 0;
        while k < n {
            choice[k] += 1;
            if choice[k] < jobs[k].n_options {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
        if k == n {
            break;
        }
    }
    Ok(best)
}

/// Bounds for [`random_instance`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InstanceBounds {
    pub n_cores: usize,
    pub max_chains: u32,
    pub max_len: u32,
    pub max_patterns: u32,
    pub max_power: u32,
}

/// Deterministic random design. A core gets between zero and `max_chains`
/// internal chains, so combinational and sequential cores both show up.
pub fn random_instance(seed: u64, bounds: InstanceBounds) -> SocDesign {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let io_max = bounds.max_len.clamp(1, 64);
    let cores = (0..bounds.n_cores)
        .map(|i| {
            let chains = rng.gen_range(0..=bounds.max_chains);
            CoreSpec {
                id: i as u32 + 1,
                num_inputs: rng.gen_range(1..=io_max),
                num_outputs: rng.gen_range(0..=io_max),
                num_bidirs: rng.gen_range(0..=io_max / 8),
                scan_chain_lengths: (0..chains)
                    .map(|_| rng.gen_range(1..=bounds.max_len.max(1)))
                    .collect(),
                num_patterns: rng.gen_range(1..=bounds.max_patterns.max(1)),
                power_mw: rng.gen_range(0..=bounds.max_power),
            }
        })
        .collect();
    SocDesign {
        name: format!("random{seed}"),
        cores,
    }
}

/// Turn a placement list into a schedule, keeping the core-id ordering.
pub fn schedule_from(mut placements: Vec<Placement>) -> Schedule {
    placements.sort_by_key(|p| p.core_id);
    Schedule { placements }
}
