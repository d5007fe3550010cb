//! Interval labels against explicit leaf sets.

mod common;

use gmco_core::generate::{random_hierarchy, HierarchyShape};
use gmco_core::hierarchy::{label_dag, label_tree, set_cardinalities, Hierarchy, Span};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn shapes() -> Vec<(u64, HierarchyShape)> {
    (0..30u64)
        .map(|seed| {
            let s = HierarchyShape {
                height: 2 + seed as usize % 5,
                max_children: 2 + seed as usize % 4,
                max_nodes: 200,
                extra_edges: if seed % 2 == 0 { 0 } else { 1 + seed as usize % 6 },
            };
            (seed, s)
        })
        .collect()
}

#[test]
fn cardinalities_match_leaf_sets_for_every_pair() {
    for (seed, s) in shapes() {
        let h = random_hierarchy(&mut ChaCha8Rng::seed_from_u64(seed), "h", &s);
        assert!(h.len() <= 200);
        let lab = label_dag(&h);
        let nodes: Vec<_> = h.nodes().collect();
        let sets: Vec<_> = nodes.iter().map(|&v| common::leaf_set(&h, v)).collect();
        for (i, &x) in nodes.iter().enumerate() {
            assert!(lab.intervals(x).is_normalized());
            assert_eq!(lab.leaf_count(x), sets[i].len() as u64);
            for (j, &y) in nodes.iter().enumerate() {
                let got = set_cardinalities(lab.intervals(x), lab.intervals(y));
                assert_eq!(got, common::set_cards(&sets[i], &sets[j]), "seed {seed}");
            }
        }
        let root = lab.intervals(h.root());
        assert_eq!(root.spans(), &[Span::new(0, h.leaf_count() as u32)]);
    }
}

#[test]
fn trees_label_like_dags_and_leaves_are_unit_ranges() {
    for (seed, s) in shapes().into_iter().filter(|(_, s)| s.extra_edges == 0) {
        let h = random_hierarchy(&mut ChaCha8Rng::seed_from_u64(seed), "h", &s);
        let lab = label_tree(&h).unwrap();
        assert_eq!(lab, label_dag(&h));
        let mut leaves: Vec<_> = h.leaves().map(|l| lab.intervals(l).spans()[0]).collect();
        leaves.sort();
        for (i, sp) in leaves.iter().enumerate() {
            assert_eq!(*sp, Span::new(i as u32, i as u32 + 1));
        }
        for v in h.nodes() {
            assert_eq!(lab.intervals(v).spans().len(), 1);
        }
    }
}

#[test]
fn extra_edge_merges_adjacent_ranges() {
    let h = Hierarchy::parse("0\tr\n1\tx\n2\ta\n2\tb\n1\ty\n2\tc\n2\td\n#extra\tc\tx\n").unwrap();
    let lab = label_dag(&h);
    let x = h.require("x").unwrap();
    assert_eq!(lab.intervals(x).spans(), &[Span::new(0, 3)]);
    assert!(label_tree(&h).is_err());
}

#[test]
fn labeling_is_deterministic() {
    let (seed, s) = shapes()[3].clone();
    let doc = gmco_core::generate::random_hierarchy_document(&mut ChaCha8Rng::seed_from_u64(seed), "h", &s);
    let a = label_dag(&Hierarchy::parse(&doc).unwrap());
    let b = label_dag(&Hierarchy::parse(&doc).unwrap());
    assert_eq!(a, b);
}
