//! Entry bounds never undercut the objects below them, and pruning never
//! changes the answer.

use gmco_core::generate::{random_problem, HierarchyShape, InstanceConfig};
use gmco_core::spatial::{audit_bounds, audit_structure, ind, BuildMethod, IndConfig, IndexConfig, ObjectIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn audits_clean_and_pruning_is_safe() {
    for seed in 0..12u64 {
        let cfg = InstanceConfig {
            objects: 300,
            users: 1 + seed as usize % 5,
            dims: 2 + seed as usize % 3,
            shape: HierarchyShape { height: 4, max_nodes: 50, extra_edges: (seed % 3) as usize, ..HierarchyShape::default() },
            max_values: 1 + seed as usize % 2,
            objective_dims: (seed % 2) as usize,
            ..InstanceConfig::default()
        };
        let p = random_problem(&mut ChaCha8Rng::seed_from_u64(seed), &cfg);
        for indexed in [None, Some(vec![0])] {
            for method in [BuildMethod::Str, BuildMethod::RStar] {
                let ic = IndexConfig { capacity: 8, method, indexed: indexed.clone() };
                let idx = ObjectIndex::build(&p, &ic).unwrap();
                let a = audit_bounds(&idx, &p);
                assert!(a.violations.is_empty(), "seed {seed}: {:?}", &a.violations[..1]);
                assert!(a.comparisons > 0);
                assert!(audit_structure(&idx, &p).is_empty(), "seed {seed}");
                let on = ind(&idx, &p, &IndConfig::default());
                let off = ind(&idx, &p, &IndConfig { prune: false, ..IndConfig::default() });
                assert_eq!(on.cm, off.cm, "seed {seed}");
                assert!(on.counters.io_reads <= off.counters.io_reads);
            }
        }
    }
}
