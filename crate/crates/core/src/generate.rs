//! Seeded random instances for oracle and property tests.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::hierarchy::{Hierarchy, NodeId};
use crate::model::{DegreeTable, Domain, Matcher, MultiValueMode, ObjectRecord, Problem, Similarity, UserPrefs};

#[derive(Debug, Clone, PartialEq)]
pub struct HierarchyShape {
    /// Longest root-to-leaf path, in edges.
    pub height: usize,
    pub max_children: usize,
    pub max_nodes: usize,
    /// Extra parent edges to add, turning the tree into a DAG.
    pub extra_edges: usize,
}

impl Default for HierarchyShape {
    fn default() -> Self {
        HierarchyShape {
            height: 4,
            max_children: 3,
            max_nodes: 60,
            extra_edges: 0,
        }
    }
}

struct Tree {
    parent: Vec<usize>,
    children: Vec<Vec<usize>>,
    depth: Vec<usize>,
}

/// Whether `to` is reachable from `from` along child edges and the extra
/// edges added so far.
fn reaches(t: &Tree, extra: &[(usize, usize)], from: usize, to: usize) -> bool {
    let mut seen = vec![false; t.parent.len()];
    let mut stack = vec![from];
    while let Some(x) = stack.pop() {
        if x == to {
            return true;
        }
        if std::mem::replace(&mut seen[x], true) {
            continue;
        }
        stack.extend(&t.children[x]);
        stack.extend(extra.iter().filter(|&&(_, q)| q == x).map(|&(c, _)| c));
    }
    false
}

fn grow<R: Rng>(rng: &mut R, s: &HierarchyShape) -> Tree {
    let mut t = Tree {
        parent: vec![0],
        children: vec![Vec::new()],
        depth: vec![0],
    };
    let mut frontier = vec![0usize];
    let mut i = 0;
    while i < frontier.len() {
        let v = frontier[i];
        i += 1;
        let room = s.max_nodes.saturating_sub(t.parent.len());
        let want = rng.gen_range(2..=s.max_children.max(2));
        // The root always branches; deeper nodes stop at random.
        let branch = t.depth[v] < s.height && room >= 2 && (v == 0 || rng.gen_bool(0.6));
        if !branch {
            continue;
        }
        for _ in 0..want.min(room) {
            let c = t.parent.len();
            t.parent.push(v);
            t.children.push(Vec::new());
            t.depth.push(t.depth[v] + 1);
            t.children[v].push(c);
            frontier.push(c);
        }
    }
    t
}

/// Random hierarchy in document form. Every internal node has at least two
/// children.
pub fn random_hierarchy_document<R: Rng>(rng: &mut R, name: &str, s: &HierarchyShape) -> String {
    let t = grow(rng, s);
    let label = |v: usize| if v == 0 { name.to_string() } else { format!("{name}{v}") };
    let mut out = String::new();
    let mut stack = vec![0usize];
    while let Some(v) = stack.pop() {
        out.push_str(&format!("{}\t{}\n", t.depth[v], label(v)));
        stack.extend(t.children[v].iter().rev());
    }
    let internal: Vec<usize> = (0..t.parent.len()).filter(|&v| !t.children[v].is_empty()).collect();
    let mut added = Vec::new();
    for _ in 0..s.extra_edges * 4 {
        if added.len() == s.extra_edges || t.parent.len() < 3 {
            break;
        }
        let c = rng.gen_range(1..t.parent.len());
        let q = *internal.choose(rng).unwrap();
        if q == t.parent[c] || reaches(&t, &added, c, q) || t.children[q].contains(&c) || added.contains(&(c, q)) {
            continue;
        }
        added.push((c, q));
        out.push_str(&format!("#extra\t{}\t{}\n", label(c), label(q)));
    }
    out
}

pub fn random_hierarchy<R: Rng>(rng: &mut R, name: &str, s: &HierarchyShape) -> Hierarchy {
    Hierarchy::parse(&random_hierarchy_document(rng, name, s)).expect("generated hierarchy parses")
}

#[derive(Debug, Clone)]
pub struct InstanceConfig {
    pub objects: usize,
    pub users: usize,
    pub dims: usize,
    pub shape: HierarchyShape,
    /// Largest number of values per object or user attribute.
    pub max_values: usize,
    /// Chance that a user is indifferent to an attribute.
    pub indifference: f64,
    pub objective_dims: usize,
    pub similarity: Similarity,
    pub multi: MultiValueMode,
}

impl Default for InstanceConfig {
    fn default() -> Self {
        InstanceConfig {
            objects: 50,
            users: 3,
            dims: 3,
            shape: HierarchyShape::default(),
            max_values: 1,
            indifference: 0.3,
            objective_dims: 0,
            similarity: Similarity::Jaccard,
            multi: MultiValueMode::Max,
        }
    }
}

fn pick_values<R: Rng>(rng: &mut R, nodes: &[NodeId], max: usize) -> Vec<NodeId> {
    let n = rng.gen_range(1..=max.max(1));
    let mut v: Vec<NodeId> = nodes.choose_multiple(rng, n.min(nodes.len())).copied().collect();
    v.sort();
    v
}

pub fn random_problem<R: Rng>(rng: &mut R, cfg: &InstanceConfig) -> Problem {
    let hs: Vec<Hierarchy> = (0..cfg.dims)
        .map(|k| random_hierarchy(rng, &format!("a{k}_"), &cfg.shape))
        .collect();
    let nodes: Vec<Vec<NodeId>> = hs.iter().map(|h| h.nodes().collect()).collect();
    let objective = (0..cfg.objective_dims).map(|j| format!("obj{j}")).collect();
    let domain = Domain::new(hs).expect("distinct names").with_objective(objective);
    let objects = (0..cfg.objects)
        .map(|i| ObjectRecord {
            id: format!("o{}", i + 1),
            values: nodes.iter().map(|ns| pick_values(rng, ns, cfg.max_values)).collect(),
            objective: (0..cfg.objective_dims).map(|_| rng.gen_range(0..4) as f64).collect(),
        })
        .collect();
    let users = (0..cfg.users)
        .map(|j| {
            let keep = rng.gen_range(0..cfg.dims);
            UserPrefs {
                id: format!("u{}", j + 1),
                prefs: nodes
                    .iter()
                    .enumerate()
                    .map(|(k, ns)| {
                        (k == keep || !rng.gen_bool(cfg.indifference)).then(|| pick_values(rng, ns, cfg.max_values))
                    })
                    .collect(),
            }
        })
        .collect();
    Problem::new(domain, objects, users, Matcher {
        similarity: cfg.similarity.clone(),
        multi: cfg.multi,
    })
    .expect("generated problem is valid")
}

/// Table of degrees drawn from `{0, 1/steps, ..., 1}`. Coarse grids make
/// ties and dominance frequent. Unspecified attributes hold 1.
pub fn random_table<R: Rng>(rng: &mut R, objects: usize, users: usize, dims: usize, steps: u32) -> DegreeTable {
    let specified: Vec<Vec<usize>> = (0..users)
        .map(|_| {
            let mut s: Vec<usize> = (0..dims).filter(|_| rng.gen_bool(0.7)).collect();
            if s.is_empty() {
                s.push(rng.gen_range(0..dims));
            }
            s
        })
        .collect();
    let mut t = DegreeTable::new(objects, dims, specified, 0);
    for o in 0..objects {
        for u in 0..users {
            for k in 0..dims {
                let v = if t.specified(u).contains(&k) {
                    rng.gen_range(0..=steps) as f64 / steps as f64
                } else {
                    1.0
                };
                t.vector_mut(o, u)[k] = v;
            }
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn hierarchies_respect_shape() {
        for seed in 0..400 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let s = HierarchyShape {
                extra_edges: (seed % 9) as usize,
                ..HierarchyShape::default()
            };
            let h = random_hierarchy(&mut rng, "x", &s);
            assert!(h.len() <= s.max_nodes);
            if s.extra_edges == 0 {
                assert!(!h.is_dag());
                assert!(h.height() <= s.height + 1);
            }
            for v in h.nodes() {
                assert!(h.is_leaf(v) || h.children(v).len() >= 2);
            }
        }
    }

    #[test]
    fn deterministic() {
        let cfg = InstanceConfig {
            max_values: 2,
            objective_dims: 1,
            ..InstanceConfig::default()
        };
        let a = random_problem(&mut ChaCha8Rng::seed_from_u64(7), &cfg);
        let b = random_problem(&mut ChaCha8Rng::seed_from_u64(7), &cfg);
        assert_eq!(a.objects, b.objects);
        assert_eq!(a.users, b.users);
    }
}
