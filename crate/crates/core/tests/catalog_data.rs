mod common;

use common::{brute_wd, data_dir, starter};
use lincorr::catalog::{build_records, load_catalog, pareto_frontier, select_for_target};
use lincorr::weights::{enumerate_wd, WdSource};
use lincorr::BoundKind;

#[test]
fn starter_catalog_loads_cleanly() {
    let loaded = load_catalog(&data_dir().join("starter.jsonl"), false).unwrap();
    assert!(loaded.rejected.is_empty(), "{:?}", loaded.rejected);
    assert!(loaded.correctors.len() >= 50);
    let mut names: Vec<_> = loaded.correctors.iter().map(|c| c.entry.name.clone()).collect();
    names.sort();
    names.dedup();
    assert_eq!(names.len(), loaded.correctors.len());
}

#[test]
fn bundled_distributions_match_brute_force() {
    for c in starter() {
        let Some(wd) = &c.wd else { continue };
        assert_eq!(wd.min_distance(), c.entry.d, "{}", c.entry.name);
        if c.code.k() <= 16 {
            assert_eq!(wd.counts(), brute_wd(&c.code).as_slice(), "{}", c.entry.name);
        }
    }
}

#[test]
fn bundled_distributions_match_enumeration() {
    for c in starter() {
        let Some(wd) = &c.wd else { continue };
        if c.code.k() <= 22 {
            assert_eq!(&enumerate_wd(&c.code, 22).unwrap(), wd, "{}", c.entry.name);
        }
    }
}

#[test]
fn every_entry_has_a_weight_distribution_or_is_flagged() {
    for c in starter() {
        match c.weight_distribution(28) {
            Ok((_, src)) => {
                if c.wd.is_some() {
                    assert_eq!(src, WdSource::Attached)
                }
            }
            Err(_) => assert!(c.code.k().min(c.code.n() - c.code.k()) > 28, "{}", c.entry.name),
        }
    }
}

#[test]
fn new_bound_frontier_beats_old_bound_frontier_on_shared_codes() {
    let cs = starter();
    let (new, _) = build_records(&cs, BoundKind::NewWeightDistribution, 0.999, 28);
    let (old, _) = build_records(&cs, BoundKind::OldMinDistance, 0.999, 28);
    let mut shared = 0;
    for r in &new {
        let o = old.iter().find(|o| o.name == r.name).unwrap();
        assert!(r.h_in_req <= o.h_in_req + 1e-9, "{}: {} > {}", r.name, r.h_in_req, o.h_in_req);
        shared += 1;
    }
    assert!(shared > 30);
    let f = pareto_frontier(&lincorr::catalog::appropriate(&new, 0.999)).unwrap();
    let sel = select_for_target(&f, 0.1).unwrap();
    assert_eq!(sel.name, "bch511_31");
}
