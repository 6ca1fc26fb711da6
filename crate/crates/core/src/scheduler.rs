//! Greedy rectangle packing under a TAM width cap and an optional power cap.
//!
//! Cores are taken in decreasing diagonal order. A core starts at its tallest
//! rectangle when enough wires are free, otherwise at the tallest rectangle
//! that fits and still uses at least half of its peak width; failing both it
//! waits in a FIFO queue that is only served at full peak width. Time moves
//! from one finish event to the next whenever the free wires are exhausted or
//! nothing else can start.

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::design::SocDesign;
use crate::error::{Error, Result};
use crate::rectangles::{prepare, Packing, RectangleSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub w_max: u32,
    pub p_max: Option<u64>,
}

impl Limits {
    pub fn new(w_max: u32, p_max: Option<u64>) -> Self {
        Limits { w_max, p_max }
    }

    pub fn width(w_max: u32) -> Self {
        Limits { w_max, p_max: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScheduleEntry {
    pub core_id: u32,
    pub width: u32,
    pub start: u64,
    pub finish: u64,
    pub scheduled: bool,
    pub complete: bool,
    pub peak_tam: u32,
    pub power_mw: u64,
}

/// Live bookkeeping of one scheduling run. Cores are addressed by their
/// position in the design.
#[derive(Debug, Clone)]
pub struct ScheduleState<'a> {
    sets: &'a [RectangleSet],
    limits: Limits,
    pub entries: Vec<ScheduleEntry>,
    pub w_avail: u32,
    pub this_time: u64,
    pub next_schedule_time: u64,
    pub idle_flag: bool,
    pub initial: VecDeque<usize>,
    pub pending: VecDeque<usize>,
}

impl<'a> ScheduleState<'a> {
    pub fn new(sets: &'a [RectangleSet], powers: &[u64], order: &[usize], limits: Limits) -> Self {
        assert_eq!(sets.len(), powers.len());
        let entries = sets
            .iter()
            .zip(powers)
            .map(|(s, &p)| ScheduleEntry {
                core_id: s.core_id,
                width: 0,
                start: 0,
                finish: 0,
                scheduled: false,
                complete: false,
                peak_tam: s.max_tam_u,
                power_mw: p,
            })
            .collect();
        ScheduleState {
            sets,
            limits,
            entries,
            w_avail: limits.w_max,
            this_time: 0,
            next_schedule_time: 0,
            idle_flag: false,
            initial: order.iter().copied().collect(),
            pending: VecDeque::new(),
        }
    }

    fn is_active(&self, e: &ScheduleEntry) -> bool {
        e.scheduled && e.start <= self.this_time && self.this_time < e.finish
    }

    pub fn active_power(&self) -> u64 {
        self.entries
            .iter()
            .filter(|e| self.is_active(e))
            .map(|e| e.power_mw)
            .sum()
    }

    pub fn active_width(&self) -> u64 {
        self.entries
            .iter()
            .filter(|e| self.is_active(e))
            .map(|e| e.width as u64)
            .sum()
    }

    pub fn no_power_conflict(&self, candidate_power: u64) -> bool {
        match self.limits.p_max {
            None => true,
            Some(cap) => candidate_power + self.active_power() <= cap,
        }
    }

    /// Start core `idx` now on `w` wires.
    pub fn update(&mut self, idx: usize, w: u32) {
        let time = self.sets[idx].time_at(w).unwrap_or_else(|| {
            panic!(
                "width {w} is not a rectangle of core {}",
                self.entries[idx].core_id
            )
        });
        assert!(
            w <= self.w_avail,
            "width {w} exceeds available {}",
            self.w_avail
        );
        let now = self.this_time;
        let e = &mut self.entries[idx];
        assert!(!e.scheduled, "core {} scheduled twice", e.core_id);
        e.start = now;
        e.scheduled = true;
        e.finish = now + time;
        e.width = w;
        self.w_avail -= w;
    }

    /// Jump to the earliest finish after `this_time` and release the wires of
    /// every core ending there.
    pub fn advance_time(&mut self) -> Result<()> {
        let now = self.this_time;
        let next = self
            .entries
            .iter()
            .filter(|e| e.scheduled && e.finish > now)
            .map(|e| e.finish)
            .min()
            .ok_or(Error::NoFutureEvent(now))?;
        self.next_schedule_time = next;
        self.this_time = next;
        for e in &mut self.entries {
            if e.scheduled && e.finish == next {
                self.w_avail += e.width;
                e.complete = true;
            }
        }
        self.idle_flag = false;
        Ok(())
    }

    fn admissible_at_peak(&self, idx: usize) -> bool {
        let e = &self.entries[idx];
        e.peak_tam <= self.w_avail && self.no_power_conflict(e.power_mw)
    }

    /// Start queued cores from the front for as long as the front fits at
    /// its peak width. Returns whether anything started.
    fn serve_pending(&mut self) -> bool {
        let mut started = false;
        while let Some(&front) = self.pending.front() {
            if !self.admissible_at_peak(front) {
                break;
            }
            self.pending.pop_front();
            let peak = self.entries[front].peak_tam;
            self.update(front, peak);
            started = true;
        }
        started
    }

    fn place_next_initial(&mut self, idx: usize) {
        let power_ok = self.no_power_conflict(self.entries[idx].power_mw);
        let peak = self.entries[idx].peak_tam;
        if self.w_avail >= peak && power_ok {
            self.update(idx, peak);
        } else if let (Some(w), true) =
            (select_possible_tam(&self.sets[idx], self.w_avail), power_ok)
        {
            self.update(idx, w);
        } else {
            self.pending.push_back(idx);
        }
        self.serve_pending();
    }

    pub fn all_scheduled(&self) -> bool {
        self.entries.iter().all(|e| e.scheduled)
    }

    /// Run the packing loop to completion.
    pub fn run(&mut self) -> Result<()> {
        while !self.all_scheduled() {
            if self.w_avail > 0 && !self.idle_flag {
                if let Some(idx) = self.initial.pop_front() {
                    self.place_next_initial(idx);
                } else if !self.serve_pending() {
                    self.idle_flag = true;
                }
            } else {
                self.advance_time()?;
            }
            debug_assert_eq!(
                self.active_width(),
                (self.limits.w_max - self.w_avail) as u64
            );
        }
        Ok(())
    }

    pub fn into_schedule(self) -> Schedule {
        let mut placements: Vec<Placement> = self
            .entries
            .into_iter()
            .map(|e| Placement {
                core_id: e.core_id,
                width: e.width,
                start: e.start,
                finish: e.finish,
            })
            .collect();
        placements.sort_by_key(|p| p.core_id);
        Schedule { placements }
    }
}

/// Tallest rectangle no wider than `w_avail` that still uses at least half of
/// the core's peak width.
pub fn select_possible_tam(set: &RectangleSet, w_avail: u32) -> Option<u32> {
    set.points
        .iter()
        .map(|p| p.tam_u)
        .filter(|&u| u <= w_avail && 2 * u >= set.max_tam_u)
        .max()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Placement {
    pub core_id: u32,
    pub width: u32,
    pub start: u64,
    pub finish: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Schedule {
    /// Sorted by core id.
    pub placements: Vec<Placement>,
}

impl Schedule {
    pub fn makespan(&self) -> u64 {
        self.placements.iter().map(|p| p.finish).max().unwrap_or(0)
    }

    pub fn get(&self, core_id: u32) -> Option<&Placement> {
        self.placements.iter().find(|p| p.core_id == core_id)
    }

    /// `core start finish width` per line, then `makespan N`.
    pub fn to_export(&self) -> String {
        let mut out = String::new();
        for p in &self.placements {
            let _ = writeln!(out, "{} {} {} {}", p.core_id, p.start, p.finish, p.width);
        }
        let _ = writeln!(out, "makespan {}", self.makespan());
        out
    }

    pub fn parse_export(text: &str) -> Result<Schedule> {
        let mut placements = Vec::new();
        let mut declared = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let toks: Vec<&str> = content.split_whitespace().collect();
            let num = |t: &str| -> Result<u64> {
                t.parse()
                    .map_err(|_| Error::parse(line, format!("expected integer, got {t:?}")))
            };
            match toks[..] {
                ["makespan", v] => declared = Some(num(v)?),
                [c, s, f, w] => {
                    let core_id = u32::try_from(num(c)?)
                        .map_err(|_| Error::parse(line, "core id out of range"))?;
                    let width = u32::try_from(num(w)?)
                        .map_err(|_| Error::parse(line, "width out of range"))?;
                    placements.push(Placement {
                        core_id,
                        width,
                        start: num(s)?,
                        finish: num(f)?,
                    })
                }
                _ => return Err(Error::parse(line, "expected `core start finish width`")),
            }
        }
        let schedule = Schedule { placements };
        if let Some(m) = declared {
            if m != schedule.makespan() {
                return Err(Error::Validation(format!(
                    "declared makespan {m} but placements end at {}",
                    schedule.makespan()
                )));
            }
        }
        Ok(schedule)
    }
}

/// A finished run together with the rectangle data that drove it.
#[derive(Debug, Clone)]
pub struct ScheduleRun {
    pub schedule: Schedule,
    pub packing: Packing,
}

pub fn check_schedulable(design: &SocDesign, limits: &Limits) -> Result<()> {
    if limits.w_max == 0 {
        return Err(Error::ZeroWidth);
    }
    design.validate()?;
    if let Some(cap) = limits.p_max {
        if let Some(c) = design.cores.iter().find(|c| c.power_mw as u64 > cap) {
            return Err(Error::Unschedulable {
                core: c.id,
                power_mw: c.power_mw as u64,
                p_max: cap,
            });
        }
    }
    Ok(())
}

pub fn schedule_run(design: &SocDesign, limits: &Limits) -> Result<ScheduleRun> {
    check_schedulable(design, limits)?;
    if design.is_empty() {
        return Ok(ScheduleRun {
            schedule: Schedule::default(),
            packing: Packing {
                sets: vec![],
                t_min: 0,
                keys: vec![],
                order: vec![],
            },
        });
    }
    let packing = prepare(design, limits.w_max)?;
    let powers: Vec<u64> = design.cores.iter().map(|c| c.power_mw as u64).collect();
    let order: Vec<usize> = packing
        .order
        .iter()
        .map(|id| {
            design
                .cores
                .iter()
                .position(|c| c.id == *id)
                .expect("order holds design ids")
        })
        .collect();
    let mut state = ScheduleState::new(&packing.sets, &powers, &order, *limits);
    state.run()?;
    let schedule = state.into_schedule();
    Ok(ScheduleRun { schedule, packing })
}

pub fn schedule(design: &SocDesign, limits: &Limits) -> Result<Schedule> {
    schedule_run(design, limits).map(|r| r.schedule)
}
