//! End-to-end acceptance checks. Each test prints one `PASS`/`FAIL` status
//! line (plus indented detail) and then asserts the same verdict.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use soctam::oracle::{
    brute_force_optimal, enumerate_optimal, random_instance, validate, InstanceBounds,
};
use soctam::rectangles::{diagonal_key, sort_initial, DiagonalKey, RectangleSet};
use soctam::report::Baselines;
use soctam::scheduler::{schedule, schedule_run, Limits};
use soctam::wrapper::{
    design_wrapper, peak_scan_element, tam_time_table, test_time, wrapper_sweep,
};
use soctam::{load_design, CoreSpec, SocDesign};

const D695: &str = include_str!("../data/d695.soc");
const D695_POWER: &str = include_str!("../data/d695.power");
const P93791_CORE6: &str = include_str!("../data/p93791_core6.core");

/// Relative band for unconstrained d695 makespans.
const UNCONSTRAINED_TOL: f64 = 0.05;
/// Relative band for power-capped d695 makespans.
const POWER_TOL: f64 = 0.10;
const DIAGONAL_TOL: f64 = 0.01;

fn verdict(n: u32, title: &str, ok: bool, details: &[String]) {
    println!(
        "criterion {n} {}: {title}",
        if ok { "PASS" } else { "FAIL" }
    );
    for d in details {
        println!("    {d}");
    }
    assert!(ok, "criterion {n} failed: {title}");
}

fn within(ours: u64, target: u64, tol: f64) -> bool {
    (ours as f64 - target as f64).abs() <= tol * target as f64
}

#[test]
fn criterion_1_test_time_formula() {
    let t = test_time(218, 521, 521);
    verdict(
        1,
        "test_time(218, 521, 521) = 114317",
        t == 114317,
        &[format!("got {t}")],
    );
}

#[test]
fn criterion_2_diagonal_worked_example() {
    // Normalized widths 7.1, 13.8 and 5.4 with a shared T_min of 10.
    let keys = [
        DiagonalKey::new(1, 32, 71, 10).unwrap(),
        DiagonalKey::new(2, 16, 138, 10).unwrap(),
        DiagonalKey::new(3, 32, 54, 10).unwrap(),
    ];
    let expected = [32.78, 21.13, 32.45];
    let mut ok = true;
    let mut details = Vec::new();
    for (k, e) in keys.iter().zip(expected) {
        let good = (k.diagonal - e).abs() <= DIAGONAL_TOL;
        ok &= good;
        details.push(format!(
            "R[{}] DL {:.4} expected {e} +-{DIAGONAL_TOL}",
            k.core_id, k.diagonal
        ));
    }
    let order = sort_initial(&keys);
    ok &= order == [1, 3, 2];
    details.push(format!("order {order:?}, expected [1, 3, 2]"));
    verdict(2, "diagonal lengths and initial order", ok, &details);
}

#[test]
fn criterion_3_wrapper_golden_table() {
    let start = Instant::now();
    let design = load_design(P93791_CORE6, None).unwrap();
    let core = design.core(6).unwrap();
    // (first width, last width, tam_u, longest chain)
    let published: [(u32, u32, u32, u64); 14] = [
        (50, 64, 47, 521),
        (48, 49, 39, 1021),
        (32, 47, 24, 1042),
        (24, 31, 16, 1563),
        (20, 23, 12, 2084),
        (16, 19, 10, 2605),
        (14, 15, 8, 3126),
        (12, 13, 7, 3647),
        (10, 11, 6, 4689),
        (8, 9, 5, 5729),
        (6, 7, 4, 7809),
        (4, 5, 3, 11969),
        (2, 3, 2, 23789),
        (1, 1, 1, 24278),
    ];
    // Per-width outcome of our sweep, so ranges can be compared width by width.
    let mut per_width = BTreeMap::new();
    for r in wrapper_sweep(core, 64) {
        for w in r.w_lo..=r.w_hi {
            per_width.insert(w, (r.tam_u, r.longest_chain));
        }
    }
    let table = tam_time_table(core, 64);
    let mut details = Vec::new();
    let mut exact = 0;
    let mut anchors_ok = true;
    for &(lo, hi, tam_u, longest) in &published {
        let mismatched: Vec<u32> = (lo..=hi)
            .filter(|w| per_width[w] != (tam_u, longest))
            .collect();
        if mismatched.is_empty() {
            exact += 1;
        } else {
            let (w0, got) = (mismatched[0], per_width[&mismatched[0]]);
            details.push(format!(
                "row {lo}-{hi} {tam_u}/{longest}: widths {mismatched:?} differ, e.g. w={w0} gives {}/{}",
                got.0, got.1
            ));
        }
        if (tam_u, longest) == (47, 521) || (tam_u, longest) == (24, 1042) {
            anchors_ok &= mismatched.is_empty();
        }
    }
    details.insert(
        0,
        format!("{exact}/14 rows exact, table has {} points", table.len()),
    );
    let elapsed = start.elapsed();
    details.push(format!("runtime {elapsed:?}"));
    let ok = exact == 14 && anchors_ok && elapsed < Duration::from_secs(1);
    verdict(3, "Table 1 rows for p93791 core 6", ok, &details);
}

fn d695(power: bool) -> SocDesign {
    load_design(D695, power.then_some(D695_POWER)).unwrap()
}

#[test]
fn criterion_4_unconstrained_d695() {
    let design = d695(false);
    let baselines = Baselines::d695();
    let mut ok = true;
    let mut details = Vec::new();
    for w in [16, 24, 32, 40, 48, 64] {
        let start = Instant::now();
        let run = schedule_run(&design, &Limits::width(w)).unwrap();
        let elapsed = start.elapsed();
        let target = baselines.proposed((None, w)).unwrap();
        let ours = run.schedule.makespan();
        let good = within(ours, target, UNCONSTRAINED_TOL) && elapsed < Duration::from_secs(1);
        ok &= good;
        details.push(format!(
            "w={w}: {ours} vs {target} ({:+.1}%) {}",
            (ours as f64 / target as f64 - 1.0) * 100.0,
            if good { "ok" } else { "out of band" }
        ));
        if w == 24 {
            let t_min = run.packing.t_min;
            ok &= t_min == 1109;
            details.push(format!("T_min at w=24: {t_min}, expected 1109"));
        }
    }
    verdict(
        4,
        "unconstrained d695 makespans within 5% and T_min",
        ok,
        &details,
    );
}

#[test]
fn criterion_5_power_constrained_d695() {
    let design = d695(true);
    let baselines = Baselines::d695();
    let mut in_band = 0;
    let mut clean = true;
    let mut fast = true;
    let mut details = Vec::new();
    for p_max in [1500, 1800, 2000] {
        for w in [16, 24, 32, 40, 48, 56, 64] {
            let limits = Limits::new(w, Some(p_max));
            let start = Instant::now();
            let s = schedule(&design, &limits).unwrap();
            fast &= start.elapsed() < Duration::from_secs(1);
            let violations = validate(&s, &design, &limits);
            clean &= violations.is_empty();
            let target = baselines.proposed((Some(p_max), w)).unwrap();
            let good = within(s.makespan(), target, POWER_TOL);
            in_band += good as usize;
            details.push(format!(
                "pmax {p_max} w={w}: {} vs {target} ({:+.1}%) {}, {} violations",
                s.makespan(),
                (s.makespan() as f64 / target as f64 - 1.0) * 100.0,
                if good { "ok" } else { "out of band" },
                violations.len()
            ));
        }
    }
    details.insert(
        0,
        format!("{in_band}/21 cells within 10%, validation clean: {clean}"),
    );
    verdict(
        5,
        "power-constrained d695 makespans within 10%, no violations",
        in_band == 21 && clean && fast,
        &details,
    );
}

/// Family 0: combinational only, 1: sequential only, 2: mixed.
fn property_instance(seed: u64) -> (SocDesign, Limits) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let family = seed % 3;
    let bounds = InstanceBounds {
        n_cores: rng.gen_range(1..=20),
        max_chains: if family == 0 { 0 } else { 16 },
        max_len: 300,
        max_patterns: 400,
        max_power: 1000,
    };
    let mut design = random_instance(seed, bounds);
    if family == 1 {
        for c in &mut design.cores {
            if c.scan_chain_lengths.is_empty() {
                c.scan_chain_lengths.push(rng.gen_range(1..=300));
            }
        }
    }
    let w_max = rng.gen_range(1..=64);
    let p_max = if seed.is_multiple_of(2) {
        let peak = design
            .cores
            .iter()
            .map(|c| c.power_mw as u64)
            .max()
            .unwrap_or(0);
        Some(peak + rng.gen_range(0..=1500))
    } else {
        None
    };
    (design, Limits::new(w_max, p_max))
}

#[test]
fn criterion_6_random_schedules_validate() {
    let start = Instant::now();
    let n = 600;
    let mut failures = Vec::new();
    let mut nondeterministic = 0;
    for seed in 0..n {
        let (design, limits) = property_instance(seed);
        let a = schedule(&design, &limits).unwrap();
        let b = schedule(&design, &limits).unwrap();
        if a.to_export() != b.to_export() {
            nondeterministic += 1;
        }
        let v = validate(&a, &design, &limits);
        if !v.is_empty() {
            failures.push(format!("seed {seed}: {}", v[0]));
        }
    }
    let elapsed = start.elapsed();
    let ok = failures.is_empty() && nondeterministic == 0 && elapsed < Duration::from_secs(30);
    let mut details = vec![format!(
        "{n} instances, {} with violations, {nondeterministic} nondeterministic, runtime {elapsed:?}",
        failures.len()
    )];
    details.extend(failures.into_iter().take(5));
    verdict(
        6,
        "random schedules validate and are deterministic",
        ok,
        &details,
    );
}

#[test]
fn criterion_7_oracle_dominance() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let n = 240;
    let mut problems = Vec::new();
    let (mut singles, mut serial, mut gaps) = (0, 0, 0);
    for seed in 0..n {
        // Family 0: general, 1: single core, 2: power forces serial order.
        let family = seed % 3;
        let mut design = random_instance(
            1000 + seed,
            InstanceBounds {
                n_cores: if family == 1 { 1 } else { rng.gen_range(2..=4) },
                max_chains: 5,
                max_len: 40,
                max_patterns: 60,
                max_power: 1000,
            },
        );
        // At most four widths keeps every core within the oracle's point limit.
        let w_max = rng.gen_range(1..=4);
        let p_max = match family {
            2 => {
                for c in &mut design.cores {
                    c.power_mw = rng.gen_range(501..=1000);
                }
                Some(1000)
            }
            _ if seed.is_multiple_of(2) => Some(rng.gen_range(1000..=2000)),
            _ => None,
        };
        let limits = Limits::new(w_max, p_max);
        let greedy = schedule(&design, &limits).unwrap().makespan();
        let a = brute_force_optimal(&design, &limits).unwrap();
        let b = enumerate_optimal(&design, &limits).unwrap();
        if a != b {
            problems.push(format!("seed {seed}: enumerators disagree {a} vs {b}"));
        }
        if greedy < a {
            problems.push(format!("seed {seed}: greedy {greedy} beats optimum {a}"));
        }
        let must_match = family != 0;
        if must_match && greedy != a {
            problems.push(format!(
                "seed {seed} (family {family}): greedy {greedy} != optimum {a}"
            ));
        }
        match family {
            1 => singles += 1,
            2 => serial += 1,
            _ => gaps += (greedy > a) as usize,
        }
    }
    let elapsed = start.elapsed();
    let ok = problems.is_empty() && elapsed < Duration::from_secs(60);
    let mut details = vec![format!(
        "{n} instances ({singles} single-core, {serial} forced-serial), greedy above optimum on {gaps} general instances, runtime {elapsed:?}"
    )];
    details.extend(problems.into_iter().take(5));
    verdict(
        7,
        "greedy never beats the exact optimum, exact solvers agree",
        ok,
        &details,
    );
}

fn random_core(rng: &mut ChaCha8Rng) -> CoreSpec {
    let chains = rng.gen_range(0..=24);
    CoreSpec {
        id: 1,
        num_inputs: rng.gen_range(0..=300),
        num_outputs: rng.gen_range(1..=300),
        num_bidirs: rng.gen_range(0..=40),
        scan_chain_lengths: (0..chains).map(|_| rng.gen_range(1..=600)).collect(),
        num_patterns: rng.gen_range(1..=500),
        power_mw: 0,
    }
}

/// Returns a description of the first broken invariant, if any.
fn wrapper_invariants(core: &CoreSpec, w: u32) -> Option<String> {
    let cfg = design_wrapper(w, core).unwrap();
    if cfg.tam_u > w || cfg.tam_u as usize != cfg.chains.len() {
        return Some(format!(
            "tam_u {} with w {w} and {} chains",
            cfg.tam_u,
            cfg.chains.len()
        ));
    }
    let mut scan: Vec<u32> = cfg
        .chains
        .iter()
        .flat_map(|c| c.scan_lengths.clone())
        .collect();
    let mut expect = core.scan_chain_lengths.clone();
    scan.sort_unstable();
    expect.sort_unstable();
    if scan != expect {
        return Some("internal scan chains not conserved".into());
    }
    let ins: u64 = cfg.chains.iter().map(|c| c.input_cells).sum();
    let outs: u64 = cfg.chains.iter().map(|c| c.output_cells).sum();
    let want_in = (core.num_inputs + core.num_bidirs) as u64;
    let want_out = (core.num_outputs + core.num_bidirs) as u64;
    if (ins, outs) != (want_in, want_out) {
        return Some(format!("cells {ins}/{outs}, expected {want_in}/{want_out}"));
    }
    if !core.scan_chain_lengths.is_empty() {
        let cap = peak_scan_element(w, core);
        let scan_chains = cfg
            .chains
            .iter()
            .filter(|c| !c.scan_lengths.is_empty())
            .count();
        for c in &cfg.chains {
            let total: u64 = c.scan_lengths.iter().map(|&l| l as u64).sum();
            if total > cap && c.scan_lengths.len() > 1 && scan_chains < w as usize {
                return Some(format!(
                    "wrapper chain with {total} scan elements over cap {cap}"
                ));
            }
        }
    }
    let s_in = cfg
        .chains
        .iter()
        .map(|c| c.scan_in_length())
        .max()
        .unwrap_or(0);
    let s_out = cfg
        .chains
        .iter()
        .map(|c| c.scan_out_length())
        .max()
        .unwrap_or(0);
    if !cfg.direct_io && (s_in, s_out) != (cfg.s_in, cfg.s_out) {
        return Some("reported shift depths disagree with the chains".into());
    }
    let p = core.num_patterns as u64;
    let t = if cfg.direct_io {
        p
    } else {
        p * (1 + s_in.max(s_out)) + s_in.min(s_out)
    };
    if t != cfg.test_time {
        return Some(format!("test time {} but chains give {t}", cfg.test_time));
    }
    None
}

#[test]
fn criterion_8_wrapper_invariants() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let n = 600;
    let mut problems = Vec::new();
    for i in 0..n {
        let core = random_core(&mut rng);
        let w_max = rng.gen_range(1..=64);
        if let Some(p) = wrapper_invariants(&core, rng.gen_range(1..=w_max)) {
            problems.push(format!("core {i}: {p}"));
        }
        let table = tam_time_table(&core, w_max);
        let sorted = table
            .windows(2)
            .all(|p| p[0].tam_u > p[1].tam_u && p[0].test_time < p[1].test_time);
        if !sorted || table.iter().any(|p| p.tam_u > w_max) || table.is_empty() {
            problems.push(format!("core {i}: table for w_max {w_max} not monotone"));
        }
        let set = RectangleSet::from_points(core.id, table);
        diagonal_key(&set, set.peak_time().max(1)).unwrap();
    }
    let elapsed = start.elapsed();
    let ok = problems.is_empty() && elapsed < Duration::from_secs(10);
    let mut details = vec![format!(
        "{n} random cores, {} problems, runtime {elapsed:?}",
        problems.len()
    )];
    details.extend(problems.into_iter().take(5));
    verdict(8, "wrapper invariants on random cores", ok, &details);
}
