//! Knowledge, reconstruction and verdict soundness over mixed random worlds.

mod common;

use normmon_core::monitor::Variant;

#[test]
fn every_variant_is_sound_on_small_worlds() {
    let mut failures = Vec::new();
    for k in 0..120u64 {
        let (scn, log) = common::small_world(11, k);
        for v in Variant::ALL {
            let recs = common::records(&scn, &log, v);
            for msg in common::soundness_violations(&scn, &log, &recs) {
                failures.push(format!("world {k} {}: {msg}", v.name()));
            }
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn approximate_never_identifies_less_than_traditional() {
    use normmon_core::sim::experiment::{run_variants, MonitorSettings};
    for k in 0..60u64 {
        let (scn, log) = common::small_world(5, k);
        let run = run_variants(&scn, &log, &[Variant::Traditional, Variant::Approximate], MonitorSettings::default()).unwrap();
        let t = &run.scores[&Variant::Traditional];
        let a = &run.scores[&Variant::Approximate];
        assert!(a.violations.identified >= t.violations.identified, "world {k}");
        assert!(a.fulfilments.identified >= t.fulfilments.identified, "world {k}");
    }
}
