//! Every search strategy against the brute-force oracles on random inputs.

mod common;

use gmco_core::dominance::{brute_force_cm, brute_force_pcm, DominanceConfig, Percent};
use gmco_core::generate::{random_problem, HierarchyShape, InstanceConfig};
use gmco_core::model::{MultiValueMode, Similarity};
use gmco_core::par::Parallelism;
use gmco_core::ranking::{rank_cm, rank_oracle};
use gmco_core::skyline::{bsl, p_bsl, BslConfig, Inner};
use gmco_core::spatial::{ind, p_ind, BuildMethod, IndConfig, IndexConfig, ObjectIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn instance(seed: u64) -> (InstanceConfig, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = InstanceConfig {
        objects: rng.gen_range(1..=120),
        users: rng.gen_range(1..=8),
        dims: rng.gen_range(1..=4),
        shape: HierarchyShape {
            height: rng.gen_range(1..=5),
            max_children: rng.gen_range(2..=4),
            max_nodes: 40,
            extra_edges: if seed % 3 == 0 { rng.gen_range(1..=3) } else { 0 },
        },
        max_values: if seed % 4 == 1 { 3 } else { 1 },
        indifference: 0.3,
        objective_dims: if seed % 5 == 2 { 1 } else { 0 },
        similarity: [Similarity::Jaccard, Similarity::Overlap, Similarity::Dice][seed as usize % 3].clone(),
        multi: MultiValueMode::Max,
    };
    (cfg, rng.gen_range(2..=12))
}

#[test]
fn all_algorithms_match_brute_force() {
    for seed in 0..80u64 {
        let (cfg, cap) = instance(seed);
        let p = random_problem(&mut ChaCha8Rng::seed_from_u64(seed ^ 0xabc), &cfg);
        let t = p.degree_table(Parallelism::Parallel);
        let dc = DominanceConfig::for_table(&t);
        let want = brute_force_cm(&t, dc);
        // degrees recomputed from explicit leaf sets give the same answer
        let oracle = common::leaf_set_table(&p);
        assert_eq!(brute_force_cm(&oracle, dc), want, "seed {seed}: leaf-set oracle");

        for inner in [Inner::Bnl, Inner::Sfs, Inner::Bbs] {
            let c = BslConfig { window: 7, records_per_page: Some(5), ..BslConfig::with_inner(inner) };
            assert_eq!(bsl(&p, &c).cm, want, "seed {seed}: {inner}");
        }
        let method = if seed % 2 == 0 { BuildMethod::Str } else { BuildMethod::RStar };
        let idx = ObjectIndex::build(&p, &IndexConfig { capacity: cap, method, indexed: None }).unwrap();
        assert_eq!(ind(&idx, &p, &IndConfig::default()).cm, want, "seed {seed}: ind");

        for pct in (10..=100).step_by(10) {
            let pc = Percent::new(pct as f64).unwrap();
            let pw = brute_force_pcm(&t, pc, dc);
            let r = p_ind(&idx, &p, pc, &IndConfig::default());
            assert_eq!(r.cm, want);
            assert_eq!(r.pcm, pw, "seed {seed}: p-ind {pct}");
            assert_eq!(p_bsl(&p, pc, &BslConfig::default()).pcm, pw, "seed {seed}: p-bsl {pct}");
        }
        assert_eq!(rank_cm(&t, &want, dc, Parallelism::Sequential), rank_oracle(&t, dc), "seed {seed}: rank");
    }
}

#[test]
fn subspace_index_gives_same_answer() {
    for seed in 0..30u64 {
        let (mut cfg, cap) = instance(seed);
        cfg.dims = cfg.dims.max(2);
        let p = random_problem(&mut ChaCha8Rng::seed_from_u64(seed), &cfg);
        let t = p.degree_table(Parallelism::Sequential);
        let want = brute_force_cm(&t, DominanceConfig::for_table(&t));
        let idx = ObjectIndex::build(
            &p,
            &IndexConfig { capacity: cap, indexed: Some(vec![0]), ..IndexConfig::default() },
        )
        .unwrap();
        assert!(idx.is_subspace());
        assert_eq!(ind(&idx, &p, &IndConfig::default()).cm, want, "seed {seed}");
    }
}
