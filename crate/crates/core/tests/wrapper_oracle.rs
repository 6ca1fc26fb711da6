use proptest::prelude::*;

use soctam::wrapper::{design_wrapper, tam_time_table, test_time};
use soctam::CoreSpec;

/// Fastest test time with at most `k` wrapper chains, found by trying every
/// assignment of scan chains and unit I/O cells to chains.
fn exhaustive_best(core: &CoreSpec, k: usize) -> u64 {
    let scan = &core.scan_chain_lengths;
    let ins = (core.num_inputs + core.num_bidirs) as usize;
    let outs = (core.num_outputs + core.num_bidirs) as usize;
    let items = scan.len() + ins + outs;
    let p = core.num_patterns as u64;
    let mut best = u64::MAX;
    let mut assign = vec![0usize; items];
    loop {
        let mut s_in = vec![0u64; k];
        let mut s_out = vec![0u64; k];
        for (i, &slot) in assign.iter().enumerate() {
            if i < scan.len() {
                s_in[slot] += scan[i] as u64;
                s_out[slot] += scan[i] as u64;
            } else if i < scan.len() + ins {
                s_in[slot] += 1;
            } else {
                s_out[slot] += 1;
            }
        }
        let si = *s_in.iter().max().unwrap();
        let so = *s_out.iter().max().unwrap();
        best = best.min(test_time(p, si, so));
        let mut d = 0;
        while d < items {
            assign[d] += 1;
            if assign[d] < k {
                break;
            }
            assign[d] = 0;
            d += 1;
        }
        if d == items {
            return best;
        }
    }
}

fn synthetic() -> CoreSpec {
    CoreSpec {
        id: 1,
        num_inputs: 2,
        num_outputs: 2,
        num_bidirs: 0,
        scan_chain_lengths: vec![4, 3, 3],
        num_patterns: 10,
        power_mw: 0,
    }
}

#[test]
fn synthetic_core_against_exhaustive() {
    let core = synthetic();
    let table = tam_time_table(&core, 4);
    assert!(!table.is_empty());
    for pair in table.windows(2) {
        assert!(pair[0].tam_u > pair[1].tam_u);
        assert!(pair[0].test_time < pair[1].test_time);
    }
    for p in &table {
        let opt = exhaustive_best(&core, p.tam_u as usize);
        assert!(
            p.test_time >= opt,
            "tam_u {}: {} < optimum {opt}",
            p.tam_u,
            p.test_time
        );
    }
    // One wire leaves no freedom at all.
    assert_eq!(
        design_wrapper(1, &core).unwrap().test_time,
        exhaustive_best(&core, 1)
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn never_beats_exhaustive(
        scan in prop::collection::vec(1u32..12, 1..4),
        ins in 0u32..3,
        outs in 1u32..3,
        p in 1u32..20,
        w in 1u32..4,
    ) {
        let core = CoreSpec {
            id: 1,
            num_inputs: ins,
            num_outputs: outs,
            num_bidirs: 0,
            scan_chain_lengths: scan,
            num_patterns: p,
            power_mw: 0,
        };
        let cfg = design_wrapper(w, &core).unwrap();
        prop_assert!(cfg.tam_u <= w);
        prop_assert!(cfg.test_time >= exhaustive_best(&core, cfg.tam_u as usize));
    }
}
