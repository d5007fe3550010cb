#![allow(dead_code)]

use std::collections::BTreeSet;

use gmco_core::hierarchy::{Cardinalities, Hierarchy, NodeId};
use gmco_core::model::{DegreeTable, MultiValueMode, Problem};

/// Leaves reachable from `v`, found by walking child edges.
pub fn leaf_set(h: &Hierarchy, v: NodeId) -> BTreeSet<NodeId> {
    let mut out = BTreeSet::new();
    let mut stack = vec![v];
    let mut seen = BTreeSet::new();
    while let Some(x) = stack.pop() {
        if !seen.insert(x) {
            continue;
        }
        if h.is_leaf(x) {
            out.insert(x);
        }
        stack.extend(h.children(x).iter().copied());
    }
    out
}

pub fn set_cards(x: &BTreeSet<NodeId>, y: &BTreeSet<NodeId>) -> Cardinalities {
    Cardinalities {
        x: x.len() as u64,
        y: y.len() as u64,
        intersection: x.intersection(y).count() as u64,
        union: x.union(y).count() as u64,
    }
}

/// Degree table computed from explicit leaf sets instead of intervals.
pub fn leaf_set_table(p: &Problem) -> DegreeTable {
    let specified = p.users.iter().map(|u| u.specified().collect()).collect();
    let d = p.dims();
    let mut t = DegreeTable::new(p.objects.len(), d, specified, p.domain.objective().len());
    let hs: Vec<&Hierarchy> = p.domain.attributes().iter().map(|a| &a.hierarchy).collect();
    for (o, obj) in p.objects.iter().enumerate() {
        for (u, user) in p.users.iter().enumerate() {
            for k in 0..d {
                let deg = match &user.prefs[k] {
                    None => 1.0,
                    Some(uv) => {
                        let h = hs[k];
                        let all: Vec<f64> = obj.values[k]
                            .iter()
                            .flat_map(|&a| {
                                uv.iter().map(move |&b| {
                                    let c = set_cards(&leaf_set(h, a), &leaf_set(h, b));
                                    p.matcher.similarity.degree(&c)
                                })
                            })
                            .collect();
                        match p.matcher.multi {
                            MultiValueMode::Max => all.iter().copied().fold(0.0, f64::max),
                            MultiValueMode::Min => all.iter().copied().fold(1.0, f64::min),
                            MultiValueMode::Avg => all.iter().sum::<f64>() / all.len() as f64,
                        }
                    }
                };
                t.vector_mut(o, u)[k] = deg;
            }
        }
        t.objective_mut(o).copy_from_slice(&obj.objective);
    }
    t.set_tolerance(p.matcher.similarity.tolerance());
    t
}
