//! Consistency checks over a built index.

use super::bounds::{max_matching_degree, UserIntervals};
use super::{object_mbr, ObjectIndex};
use crate::model::Problem;

/// A bound that some enclosed object exceeds. `user` is `None` for an
/// objective attribute.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub node: u32,
    pub entry: usize,
    pub user: Option<usize>,
    pub attribute: usize,
    pub bound: f64,
    pub actual: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct BoundsAudit {
    pub entries: usize,
    pub comparisons: usize,
    pub violations: Vec<Violation>,
    /// Leaf entries whose bound differs from the exact degree.
    pub leaf_inexact: usize,
}

fn enclosed(t: &ObjectIndex, id: u32, out: &mut Vec<usize>) {
    let n = t.node(id);
    for e in &n.entries {
        if n.is_leaf() {
            out.push(e.child as usize);
        } else {
            enclosed(t, e.child, out);
        }
    }
}

/// Compares every entry's bounds with the true maxima over the objects
/// below it.
pub fn audit_bounds(t: &ObjectIndex, p: &Problem) -> BoundsAudit {
    let ui = UserIntervals::new(p);
    let mut a = BoundsAudit::default();
    for id in 0..t.node_count() as u32 {
        let n = t.node(id);
        let leaf = n.is_leaf();
        for (ei, e) in n.entries.iter().enumerate() {
            a.entries += 1;
            let mut objs = Vec::new();
            if leaf {
                objs.push(e.child as usize);
            } else {
                enclosed(t, e.child, &mut objs);
            }
            for (u, user) in p.users.iter().enumerate() {
                for k in 0..t.dims() {
                    let bound = max_matching_degree(t, p, &ui, e, leaf, u, k);
                    let actual = objs
                        .iter()
                        .map(|&o| p.matcher.degree(&p.domain, &p.objects[o], user, k))
                        .fold(0.0, f64::max);
                    a.comparisons += 1;
                    if actual > bound + p.matcher.similarity.tolerance() {
                        a.violations.push(Violation {
                            node: id,
                            entry: ei,
                            user: Some(u),
                            attribute: k,
                            bound,
                            actual,
                        });
                    }
                    if leaf && t.slot(k).is_some() && bound != actual {
                        a.leaf_inexact += 1;
                    }
                }
            }
            for (j, &bound) in e.obj_max.iter().enumerate() {
                let actual = objs
                    .iter()
                    .map(|&o| p.objects[o].objective[j])
                    .fold(f64::NEG_INFINITY, f64::max);
                a.comparisons += 1;
                if actual > bound {
                    a.violations.push(Violation {
                        node: id,
                        entry: ei,
                        user: None,
                        attribute: j,
                        bound,
                        actual,
                    });
                }
            }
        }
    }
    a
}

/// Structural problems: loose or non-enclosing MBRs, uneven leaf depth,
/// objects missing or repeated, empty or overfull nodes. Empty when the
/// index is sound.
pub fn audit_structure(t: &ObjectIndex, p: &Problem) -> Vec<String> {
    let mut errs = Vec::new();
    let mut seen = vec![0usize; p.objects.len()];
    let mut leaf_depths = Vec::new();
    let mut stack = vec![(t.root(), 0usize)];
    let mut reached = vec![false; t.node_count()];
    while let Some((id, depth)) = stack.pop() {
        if reached[id as usize] {
            errs.push(format!("node {id} reached twice"));
            continue;
        }
        reached[id as usize] = true;
        let n = t.node(id);
        if n.entries.is_empty() {
            errs.push(format!("node {id} is empty"));
            continue;
        }
        if n.entries.len() > t.capacity() {
            errs.push(format!("node {id} holds {} > {} entries", n.entries.len(), t.capacity()));
        }
        if n.is_leaf() {
            leaf_depths.push(depth);
            for e in &n.entries {
                let o = e.child as usize;
                if o >= seen.len() {
                    errs.push(format!("node {id} refers to unknown object {o}"));
                    continue;
                }
                seen[o] += 1;
                let want = object_mbr(&p.domain, &p.objects[o], t.indexed());
                if e.mbr != want {
                    errs.push(format!("object {o}: stored MBR {} differs from {}", e.mbr, want));
                }
            }
            continue;
        }
        for e in &n.entries {
            if e.child as usize >= t.node_count() {
                errs.push(format!("node {id} refers to unknown node {}", e.child));
                continue;
            }
            let c = t.node(e.child);
            if c.level + 1 != n.level {
                errs.push(format!("node {} at level {} below level {}", e.child, c.level, n.level));
            }
            if !c.entries.is_empty() {
                let m = c.mbr();
                if !e.mbr.contains(&m) {
                    errs.push(format!("entry for node {} does not enclose it", e.child));
                } else if e.mbr != m {
                    errs.push(format!("entry for node {} is not tight", e.child));
                }
                if e.obj_max != c.obj_max() {
                    errs.push(format!("entry for node {} has stale objective maxima", e.child));
                }
            }
            stack.push((e.child, depth + 1));
        }
    }
    leaf_depths.sort_unstable();
    leaf_depths.dedup();
    if leaf_depths.len() > 1 {
        errs.push(format!("leaves at depths {leaf_depths:?}"));
    }
    for (o, &c) in seen.iter().enumerate() {
        if c != 1 {
            errs.push(format!("object {o} indexed {c} times"));
        }
    }
    errs
}

#[cfg(test)]
mod tests {
    use super::super::{BuildMethod, IndexConfig};
    use super::*;
    use crate::fixtures;

    #[test]
    fn sound_on_running_example() {
        let p = fixtures::running_example();
        for method in [BuildMethod::Str, BuildMethod::RStar] {
            for cap in [2, 3, 64] {
                let cfg = IndexConfig {
                    capacity: cap,
                    method,
                    indexed: None,
                };
                let t = ObjectIndex::build(&p, &cfg).unwrap();
                let a = audit_bounds(&t, &p);
                assert!(a.violations.is_empty(), "{:?}", a.violations);
                assert_eq!(a.leaf_inexact, 0);
                let s = audit_structure(&t, &p);
                assert!(s.is_empty(), "{method:?} {cap} {s:?}");
            }
        }
    }

    #[test]
    fn detects_wrong_problem() {
        let p = fixtures::running_example();
        let t = ObjectIndex::build(&p, &IndexConfig::default()).unwrap();
        let mut q = p.clone();
        q.objects.swap(0, 1);
        assert!(!audit_structure(&t, &q).is_empty());
    }
}
