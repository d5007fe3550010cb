//! R* insertion: least-overlap subtree choice near the leaves, forced
//! reinsertion on the first overflow of a level, margin-driven splits.

use std::cmp::Ordering;

use super::{Entry, Node, Rect};

struct Tree {
    nodes: Vec<Node>,
    root: usize,
    cap: usize,
    min: usize,
}

pub(super) fn build(entries: Vec<Entry>, cap: usize) -> (Vec<Node>, u32) {
    let mut t = Tree {
        nodes: vec![Node {
            level: 0,
            entries: Vec::new(),
        }],
        root: 0,
        cap,
        min: (cap * 2 / 5).max(1),
    };
    for e in entries {
        t.insert(e);
    }
    (t.nodes, t.root as u32)
}

fn cmp_f(a: f64, b: f64) -> Ordering {
    a.total_cmp(&b)
}

impl Tree {
    fn insert(&mut self, e: Entry) {
        let levels = self.nodes[self.root].level as usize + 1;
        let mut reinserted = vec![false; levels + 1];
        let mut pending = vec![(e, 0u32)];
        while let Some((e, level)) = pending.pop() {
            if let Some(sib) = self.insert_at(self.root, e, level, &mut reinserted, &mut pending) {
                let old = self.root;
                let old_entry = self.nodes[old].as_entry(old as u32);
                let level = self.nodes[old].level + 1;
                self.nodes.push(Node {
                    level,
                    entries: vec![old_entry, sib],
                });
                self.root = self.nodes.len() - 1;
                reinserted.push(false);
            }
        }
    }

    /// Returns the entry of a new sibling when `node` had to split.
    fn insert_at(
        &mut self,
        node: usize,
        e: Entry,
        level: u32,
        reinserted: &mut Vec<bool>,
        pending: &mut Vec<(Entry, u32)>,
    ) -> Option<Entry> {
        let nl = self.nodes[node].level;
        if nl == level {
            self.nodes[node].entries.push(e);
        } else {
            let i = self.choose(node, &e.mbr);
            let child = self.nodes[node].entries[i].child as usize;
            let split = self.insert_at(child, e, level, reinserted, pending);
            self.nodes[node].entries[i] = self.nodes[child].as_entry(child as u32);
            if let Some(s) = split {
                self.nodes[node].entries.push(s);
            }
        }
        if self.nodes[node].entries.len() <= self.cap {
            return None;
        }
        if node != self.root && !reinserted[nl as usize] {
            reinserted[nl as usize] = true;
            self.reinsert(node, pending);
            return None;
        }
        Some(self.split(node))
    }

    fn choose(&self, node: usize, r: &Rect) -> usize {
        let n = &self.nodes[node];
        let grow = |e: &Entry| e.mbr.cover(r).area() - e.mbr.area();
        if n.level == 1 {
            let overlap_growth = |i: usize| {
                let cur = &n.entries[i].mbr;
                let big = cur.cover(r);
                n.entries
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, o)| big.overlap_area(&o.mbr) - cur.overlap_area(&o.mbr))
                    .sum::<f64>()
            };
            (0..n.entries.len())
                .min_by(|&a, &b| {
                    cmp_f(overlap_growth(a), overlap_growth(b))
                        .then(cmp_f(grow(&n.entries[a]), grow(&n.entries[b])))
                        .then(cmp_f(n.entries[a].mbr.area(), n.entries[b].mbr.area()))
                        .then(a.cmp(&b))
                })
                .unwrap()
        } else {
            (0..n.entries.len())
                .min_by(|&a, &b| {
                    cmp_f(grow(&n.entries[a]), grow(&n.entries[b]))
                        .then(cmp_f(n.entries[a].mbr.area(), n.entries[b].mbr.area()))
                        .then(a.cmp(&b))
                })
                .unwrap()
        }
    }

    /// Removes the 30% of entries farthest from the node centre and queues
    /// them, nearest first.
    fn reinsert(&mut self, node: usize, pending: &mut Vec<(Entry, u32)>) {
        let level = self.nodes[node].level;
        let centre = self.nodes[node].mbr();
        let dist = |e: &Entry| -> f64 {
            (0..centre.dims())
                .map(|d| {
                    let x = e.mbr.centre2(d) - centre.centre2(d);
                    x * x
                })
                .sum()
        };
        let n = &mut self.nodes[node];
        let mut idx: Vec<usize> = (0..n.entries.len()).collect();
        idx.sort_by(|&a, &b| {
            cmp_f(dist(&n.entries[b]), dist(&n.entries[a])).then(n.entries[a].child.cmp(&n.entries[b].child))
        });
        let p = (self.cap * 3 / 10).max(1);
        let mut slots: Vec<Option<Entry>> = std::mem::take(&mut n.entries).into_iter().map(Some).collect();
        // farthest pushed first, so the nearest is popped first
        let out: Vec<Entry> = idx[..p].iter().map(|&i| slots[i].take().unwrap()).collect();
        n.entries = slots.into_iter().flatten().collect();
        pending.extend(out.into_iter().map(|e| (e, level)));
    }

    fn split(&mut self, node: usize) -> Entry {
        let entries = std::mem::take(&mut self.nodes[node].entries);
        let dims = entries[0].mbr.dims();
        let (m, total) = (self.min, entries.len());
        let cover = |es: &[&Entry]| {
            let mut r = es[0].mbr.clone();
            for e in &es[1..] {
                r = r.cover(&e.mbr);
            }
            r
        };
        let sorted = |d: usize, by_hi: bool| -> Vec<&Entry> {
            let mut v: Vec<&Entry> = entries.iter().collect();
            v.sort_by(|a, b| {
                let (sa, sb) = (a.mbr.0[d], b.mbr.0[d]);
                let k = if by_hi {
                    (sa.hi, sa.lo).cmp(&(sb.hi, sb.lo))
                } else {
                    (sa.lo, sa.hi).cmp(&(sb.lo, sb.hi))
                };
                k.then(a.child.cmp(&b.child))
            });
            v
        };
        let splits = m..=(total - m);

        let mut best_axis = (f64::INFINITY, 0);
        for d in 0..dims {
            let mut s = 0.0;
            for by_hi in [false, true] {
                let v = sorted(d, by_hi);
                for k in splits.clone() {
                    s += cover(&v[..k]).margin() + cover(&v[k..]).margin();
                }
            }
            if s < best_axis.0 {
                best_axis = (s, d);
            }
        }
        let d = best_axis.1;
        let mut best: Option<(f64, f64, bool, usize)> = None;
        for by_hi in [false, true] {
            let v = sorted(d, by_hi);
            for k in splits.clone() {
                let (a, b) = (cover(&v[..k]), cover(&v[k..]));
                let cand = (a.overlap_area(&b), a.area() + b.area(), by_hi, k);
                let better = match best {
                    None => true,
                    Some(bst) => (cand.0, cand.1) < (bst.0, bst.1),
                };
                if better {
                    best = Some(cand);
                }
            }
        }
        let (_, _, by_hi, k) = best.unwrap();
        let order: Vec<u32> = sorted(d, by_hi).iter().map(|e| e.child).collect();
        let mut slots: Vec<Option<Entry>> = entries.into_iter().map(Some).collect();
        let mut pick = |child: u32| {
            let i = slots
                .iter()
                .position(|s| s.as_ref().is_some_and(|e| e.child == child))
                .unwrap();
            slots[i].take().unwrap()
        };
        let first: Vec<Entry> = order[..k].iter().map(|&c| pick(c)).collect();
        let second: Vec<Entry> = order[k..].iter().map(|&c| pick(c)).collect();
        let level = self.nodes[node].level;
        self.nodes[node].entries = first;
        self.nodes.push(Node {
            level,
            entries: second,
        });
        let id = self.nodes.len() - 1;
        self.nodes[id].as_entry(id as u32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hierarchy::Span;

    fn pt(i: u32, x: u32, y: u32) -> Entry {
        Entry {
            mbr: Rect(vec![Span::new(x, x + 1), Span::new(y, y + 1)]),
            child: i,
            obj_max: vec![],
            values: vec![vec![], vec![]],
        }
    }

    fn walk(nodes: &[Node], id: usize, seen: &mut Vec<u32>, depth: usize, leaf_depth: &mut Option<usize>) {
        let n = &nodes[id];
        if n.is_leaf() {
            seen.extend(n.entries.iter().map(|e| e.child));
            match leaf_depth {
                Some(d) => assert_eq!(*d, depth, "unbalanced"),
                None => *leaf_depth = Some(depth),
            }
            return;
        }
        for e in &n.entries {
            let c = &nodes[e.child as usize];
            assert_eq!(e.mbr, c.mbr(), "loose MBR");
            assert_eq!(c.level + 1, n.level);
            walk(nodes, e.child as usize, seen, depth + 1, leaf_depth);
        }
    }

    #[test]
    fn balanced_tight_and_complete() {
        let es: Vec<Entry> = (0..500u32).map(|i| pt(i, i * 7919 % 211, i * 104729 % 197)).collect();
        let (nodes, root) = build(es, 8);
        let mut seen = Vec::new();
        walk(&nodes, root as usize, &mut seen, 0, &mut None);
        seen.sort();
        assert_eq!(seen, (0..500).collect::<Vec<_>>());
        for (i, n) in nodes.iter().enumerate() {
            assert!(n.entries.len() <= 8);
            if i != root as usize {
                assert!(n.entries.len() >= 3, "underfull node {i}");
            }
        }
    }

    #[test]
    fn deterministic() {
        let es: Vec<Entry> = (0..200u32).map(|i| pt(i, i * 31 % 50, i * 17 % 40)).collect();
        let a = build(es.clone(), 6);
        let b = build(es, 6);
        assert_eq!(a, b);
    }
}
