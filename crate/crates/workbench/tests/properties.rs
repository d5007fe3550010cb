use gmco_core::generate::{random_problem, HierarchyShape, InstanceConfig};
use gmco_core::hierarchy::Hierarchy;
use gmco_core::model::{io, Similarity};
use gmco_workbench::experiment::{run_experiment, Algorithm, Dataset, RunParams};
use gmco_workbench::report::{write_runs, Format};
use gmco_workbench::synthetic::{gen_synthetic, SyntheticConfig};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn instance(seed: u64, dag: bool, multi: bool) -> gmco_core::model::Problem {
    let cfg = InstanceConfig {
        objects: 40,
        users: 3,
        dims: 3,
        shape: HierarchyShape {
            extra_edges: if dag { 3 } else { 0 },
            ..HierarchyShape::default()
        },
        max_values: if multi { 3 } else { 1 },
        objective_dims: 1,
        ..InstanceConfig::default()
    };
    random_problem(&mut ChaCha8Rng::seed_from_u64(seed), &cfg)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn file_formats_round_trip(seed in any::<u64>(), dag in any::<bool>(), multi in any::<bool>()) {
        let p = instance(seed, dag, multi);
        for a in p.domain.attributes() {
            let doc = a.hierarchy.to_document();
            let h = Hierarchy::parse(&doc).unwrap();
            prop_assert_eq!(h.to_document(), doc);
        }
        let mut d = p.domain.clone();
        let objs = io::write_objects(&d, &p.objects);
        prop_assert_eq!(&io::parse_objects(&objs, &mut d, "o.csv").unwrap(), &p.objects);
        let users = io::write_users(&d, &p.users);
        prop_assert_eq!(&io::parse_users(&users, &d, "u.csv").unwrap(), &p.users);
        prop_assert_eq!(io::write_users(&d, &p.users), users);
    }

    #[test]
    fn runs_are_deterministic(seed in 0u64..1000, users in 1usize..6, alg in 0usize..14) {
        let cfg = SyntheticConfig { objects: 150, users, height: 4, seed, ..SyntheticConfig::default() };
        let alg = Algorithm::all()[alg];
        let report = || {
            let p = gen_synthetic(&cfg).unwrap().into_problem(Similarity::Jaccard);
            let mut ds = Dataset::new("s", p, Some(seed));
            let mut r = run_experiment(&mut ds, alg, &RunParams::default()).unwrap();
            r.wall_time_ms = 0.0;
            let mut out = Vec::new();
            write_runs(&mut out, Format::JsonLines, std::slice::from_ref(&r)).unwrap();
            (r, out)
        };
        let (a, ab) = report();
        let (b, bb) = report();
        prop_assert_eq!(a, b);
        prop_assert_eq!(ab, bb);
    }

    #[test]
    fn synthetic_values_on_levels(seed in any::<u64>(), height in 2u32..7, lo in 1u32..6, lu in 1u32..7) {
        prop_assume!(lo < height && lu <= height);
        let cfg = SyntheticConfig { objects: 60, attributes: 2, users: 3, height, object_level: lo, user_level: lu, seed };
        let d = gen_synthetic(&cfg).unwrap();
        // a node on level l covers 2^(l-1) leaves
        let leaves_below = |h: &Hierarchy, n| {
            let mut c = 0;
            let mut st = vec![n];
            while let Some(x) = st.pop() {
                if h.is_leaf(x) { c += 1 } else { st.extend(h.children(x).iter().copied()) }
            }
            c
        };
        for o in &d.objects {
            for (k, v) in o.values.iter().enumerate() {
                prop_assert_eq!(leaves_below(&d.hierarchies[k], v[0]), 1usize << (lo - 1));
            }
        }
        for u in &d.users {
            for (k, v) in u.prefs.iter().enumerate() {
                prop_assert_eq!(leaves_below(&d.hierarchies[k], v.as_ref().unwrap()[0]), 1usize << (lu - 1));
            }
        }
    }
}
