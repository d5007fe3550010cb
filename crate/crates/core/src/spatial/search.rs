use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::bounds::{entry_bounds, UserIntervals};
use super::{Entry, ObjectIndex};
use crate::dominance::{Comparator, Counters, DominanceConfig, Percent, Strictness};
use crate::model::{Problem, Profile};
use crate::pager::RecordBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndConfig {
    /// Discard child entries whose bounds a known maximal object beats.
    pub prune: bool,
    pub strictness: Strictness,
    /// Record the order in which heap items are popped.
    pub trace: bool,
}

impl Default for IndConfig {
    fn default() -> Self {
        IndConfig {
            prune: true,
            strictness: Strictness::Standard,
            trace: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Visit {
    Node(u32),
    Object(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndRun {
    /// Object indices, ascending.
    pub cm: Vec<usize>,
    /// Only filled by [`p_ind`].
    pub pcm: Vec<usize>,
    pub counters: Counters,
    pub trace: Vec<Visit>,
}

struct Item {
    score: f64,
    obj: f64,
    node: bool,
    id: u32,
    /// Bound vectors for every user, then objective maxima.
    bounds: Box<[f64]>,
}

impl PartialEq for Item {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}

impl Eq for Item {}

impl Ord for Item {
    fn cmp(&self, o: &Self) -> Ordering {
        self.score
            .total_cmp(&o.score)
            .then(self.obj.total_cmp(&o.obj))
            .then((!self.node).cmp(&!o.node))
            .then(o.id.cmp(&self.id))
    }
}

impl PartialOrd for Item {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Best-first search for the collectively maximal objects.
pub fn ind(index: &ObjectIndex, p: &Problem, cfg: &IndConfig) -> IndRun {
    run(index, p, None, cfg)
}

/// As [`ind`], also maintaining the p-collectively maximal subset.
pub fn p_ind(index: &ObjectIndex, p: &Problem, pct: Percent, cfg: &IndConfig) -> IndRun {
    run(index, p, Some(pct.threshold(p.users.len())), cfg)
}

fn run(index: &ObjectIndex, p: &Problem, k: Option<usize>, cfg: &IndConfig) -> IndRun {
    let d = index.dims();
    let users = p.users.len();
    let ud = users * d;
    let width = ud + index.objective_dims();
    let specified: Vec<Vec<usize>> = p.users.iter().map(|u| u.specified().collect()).collect();
    let cmp = Comparator::from_specified(
        d,
        specified.iter().map(Vec::as_slice).collect(),
        DominanceConfig {
            strictness: cfg.strictness,
            tolerance: p.matcher.similarity.tolerance(),
        },
    );
    let ui = UserIntervals::new(p);
    let subspace = index.is_subspace();

    let mut io = 0u64;
    let mut trace = Vec::new();
    let mut cm = RecordBuf::new(width);
    let mut cm_score: Vec<f64> = Vec::new();
    let mut in_pcm: Vec<bool> = Vec::new();
    let mut heap = BinaryHeap::new();
    let mut buf = vec![0.0; width];

    let expand = |node_id: u32,
                      io: &mut u64,
                      heap: &mut BinaryHeap<Item>,
                      cm: &RecordBuf,
                      buf: &mut Vec<f64>| {
        let node = index.read(node_id, io);
        let leaf = node.is_leaf();
        for e in &node.entries {
            fill(index, p, &ui, e, leaf, buf, ud);
            if cfg.prune && (0..cm.len()).any(|i| cmp.collective(split(cm.values(i), ud), split(buf, ud))) {
                continue;
            }
            heap.push(Item {
                score: buf[..ud].iter().sum(),
                obj: buf[ud..].iter().sum(),
                node: !leaf,
                id: e.child,
                bounds: buf.clone().into_boxed_slice(),
            });
        }
    };

    expand(index.root(), &mut io, &mut heap, &cm, &mut buf);
    while let Some(it) = heap.pop() {
        if it.node {
            if cfg.trace {
                trace.push(Visit::Node(it.id));
            }
            expand(it.id, &mut io, &mut heap, &cm, &mut buf);
            continue;
        }
        let o = it.id as usize;
        if cfg.trace {
            trace.push(Visit::Object(o));
        }
        let mut x = it.bounds;
        let mut score = it.score;
        if subspace {
            // attributes outside the index come from the object itself
            io += 1;
            let obj = &p.objects[o];
            for (u, user) in p.users.iter().enumerate() {
                p.matcher.fill(&p.domain, obj, user, &mut x[u * d..(u + 1) * d]);
            }
            score = x[..ud].iter().sum();
        }

        let (mut member, mut p_member) = (true, true);
        for a in 0..cm.len() {
            let av = cm.values(a);
            if cmp.collective(split(av, ud), split(&x, ud)) {
                member = false;
                break;
            }
            if let Some(k) = k {
                if p_member && cmp.p_collective(split(av, ud), split(&x, ud), k) {
                    p_member = false;
                }
                if in_pcm[a] && cmp.p_collective(split(&x, ud), split(av, ud), k) {
                    in_pcm[a] = false;
                }
            }
        }
        if !member {
            continue;
        }
        // Pops come in non-increasing score, so `x` can only beat members
        // whose score ties with its own; such members are dropped here.
        let mut a = 0;
        while a < cm.len() {
            if cm_score[a] <= score && cmp.collective(split(&x, ud), split(cm.values(a), ud)) {
                cm.swap_remove(a);
                cm_score.swap_remove(a);
                in_pcm.swap_remove(a);
            } else {
                a += 1;
            }
        }
        cm.push(o as u32, &x);
        cm_score.push(score);
        in_pcm.push(p_member);
    }

    let mut out: Vec<usize> = cm.ids.iter().map(|&i| i as usize).collect();
    let mut pcm: Vec<usize> = if k.is_some() {
        cm.ids
            .iter()
            .zip(&in_pcm)
            .filter(|(_, &f)| f)
            .map(|(&i, _)| i as usize)
            .collect()
    } else {
        Vec::new()
    };
    out.sort_unstable();
    pcm.sort_unstable();
    IndRun {
        cm: out,
        pcm,
        counters: Counters {
            dominance_checks: cmp.checks(),
            io_reads: io,
        },
        trace,
    }
}

fn split(v: &[f64], ud: usize) -> Profile<'_> {
    Profile {
        degrees: &v[..ud],
        objective: &v[ud..],
    }
}

fn fill(
    index: &ObjectIndex,
    p: &Problem,
    ui: &UserIntervals<'_>,
    e: &Entry,
    leaf: bool,
    buf: &mut [f64],
    ud: usize,
) {
    entry_bounds(index, p, ui, e, leaf, &mut buf[..ud]);
    buf[ud..].copy_from_slice(&e.obj_max);
}

#[cfg(test)]
mod tests {
    use super::super::IndexConfig;
    use super::*;
    use crate::fixtures;

    fn tree(cap: usize) -> (Problem, ObjectIndex) {
        let p = fixtures::running_example();
        let t = ObjectIndex::build(
            &p,
            &IndexConfig {
                capacity: cap,
                ..IndexConfig::default()
            },
        )
        .unwrap();
        (p, t)
    }

    #[test]
    fn running_example_pop_order() {
        let (p, t) = tree(2);
        let cfg = IndConfig {
            trace: true,
            ..IndConfig::default()
        };
        let r = ind(&t, &p, &cfg);
        assert_eq!(r.cm, vec![0, 1]);
        let root = t.node(t.root());
        let group_of = |o: u32| {
            root.entries
                .iter()
                .find(|e| t.node(e.child).entries.iter().any(|x| x.child == o))
                .unwrap()
                .child
        };
        let (eb, ec) = (group_of(0), group_of(2));
        assert_eq!(
            r.trace,
            vec![Visit::Node(eb), Visit::Object(1), Visit::Object(0), Visit::Node(ec)]
        );
        // root, e_b, e_c
        assert_eq!(r.counters.io_reads, 3);
    }

    #[test]
    fn p_variant() {
        let (p, t) = tree(2);
        let cfg = IndConfig::default();
        let r = p_ind(&t, &p, Percent::new(60.0).unwrap(), &cfg);
        assert_eq!((r.cm, r.pcm), (vec![0, 1], vec![1]));
        let r = p_ind(&t, &p, Percent::new(30.0).unwrap(), &cfg);
        assert!(r.pcm.is_empty());
        let r = p_ind(&t, &p, Percent::full(), &cfg);
        assert_eq!(r.pcm, r.cm);
    }

    #[test]
    fn single_object_single_read() {
        let (mut p, _) = tree(2);
        p.objects.truncate(1);
        let t = ObjectIndex::build(&p, &IndexConfig::default()).unwrap();
        let r = ind(&t, &p, &IndConfig::default());
        assert_eq!(r.cm, vec![0]);
        assert_eq!(r.counters.io_reads, 1);
    }

    #[test]
    fn pruning_and_subspace_do_not_change_answer() {
        let (p, t) = tree(2);
        let off = IndConfig {
            prune: false,
            ..IndConfig::default()
        };
        assert_eq!(ind(&t, &p, &off).cm, vec![0, 1]);
        let sub = ObjectIndex::build(
            &p,
            &IndexConfig {
                capacity: 2,
                indexed: Some(vec![0, 2]),
                ..IndexConfig::default()
            },
        )
        .unwrap();
        let r = ind(&sub, &p, &IndConfig::default());
        assert_eq!(r.cm, vec![0, 1]);
    }
}
