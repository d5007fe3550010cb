use super::{Hierarchy, IntervalSet, NodeId, Span};
use crate::error::{Error, Result};

/// Node → interval-set map of one hierarchy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalLabeling {
    sets: Vec<IntervalSet>,
    leaves: u32,
}

impl IntervalLabeling {
    pub fn intervals(&self, node: NodeId) -> &IntervalSet {
        &self.sets[node.index()]
    }

    /// Number of distinct leaves under `node`.
    pub fn leaf_count(&self, node: NodeId) -> u64 {
        self.sets[node.index()].measure()
    }

    /// Width of the transformed domain, `[0, total_leaves)`.
    pub fn total_leaves(&self) -> u32 {
        self.leaves
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

pub fn label_tree(h: &Hierarchy) -> Result<IntervalLabeling> {
    if h.is_dag() {
        return Err(Error::NotATree(h.name().to_string()));
    }
    Ok(label_dag(h))
}

/// Labels a DAG through its depth-first spanning tree, then folds in the
/// leaves reachable over the remaining edges. On a tree this is plain
/// preorder leaf numbering with covering intervals.
pub fn label_dag(h: &Hierarchy) -> IntervalLabeling {
    let n = h.len();
    let mut leaf_pos: Vec<Option<u32>> = vec![None; n];
    let mut visited = vec![false; n];
    let mut next = 0u32;
    let mut stack = vec![(h.root(), 0usize)];
    visited[h.root().index()] = true;
    if h.is_leaf(h.root()) {
        leaf_pos[h.root().index()] = Some(0);
        next = 1;
    }
    while let Some((v, i)) = stack.pop() {
        let kids = h.children(v);
        if i == kids.len() {
            continue;
        }
        stack.push((v, i + 1));
        let c = kids[i];
        // first visit wins; later edges into `c` are non-tree edges
        if !visited[c.index()] {
            visited[c.index()] = true;
            if h.is_leaf(c) {
                leaf_pos[c.index()] = Some(next);
                next += 1;
            }
            stack.push((c, 0));
        }
    }

    let mut sets: Vec<IntervalSet> = vec![IntervalSet::default(); n];
    for v in h.post_order() {
        sets[v.index()] = match leaf_pos[v.index()] {
            Some(p) => IntervalSet::single(Span::new(p, p + 1)),
            None => {
                let spans = h
                    .children(v)
                    .iter()
                    .flat_map(|c| sets[c.index()].spans().iter().copied())
                    .collect();
                IntervalSet::from_spans(spans)
            }
        };
    }
    IntervalLabeling { sets, leaves: next }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spans(l: &IntervalLabeling, h: &Hierarchy, label: &str) -> Vec<(u32, u32)> {
        l.intervals(h.require(label).unwrap())
            .spans()
            .iter()
            .map(|s| (s.lo, s.hi))
            .collect()
    }

    #[test]
    fn balanced_binary_tree() {
        let h = Hierarchy::parse("0\tr\n1\tx\n2\ta\n2\tb\n1\ty\n2\tc\n2\td\n").unwrap();
        let l = label_tree(&h).unwrap();
        assert_eq!(spans(&l, &h, "a"), [(0, 1)]);
        assert_eq!(spans(&l, &h, "b"), [(1, 2)]);
        assert_eq!(spans(&l, &h, "c"), [(2, 3)]);
        assert_eq!(spans(&l, &h, "d"), [(3, 4)]);
        assert_eq!(spans(&l, &h, "x"), [(0, 2)]);
        assert_eq!(spans(&l, &h, "r"), [(0, 4)]);
        assert_eq!(l.total_leaves(), 4);
    }

    #[test]
    fn casual_covers_two_leaves() {
        let h = Hierarchy::parse(
            "0\tAttire\n1\tFormal\n1\tCasual\n2\tSmart casual\n2\tBusiness casual\n1\tStreet wear\n",
        )
        .unwrap();
        let l = label_tree(&h).unwrap();
        assert_eq!(l.leaf_count(h.require("Casual").unwrap()), 2);
        assert_eq!(spans(&l, &h, "Business casual"), [(2, 3)]);
    }

    #[test]
    fn extra_edge_propagates() {
        let doc = "0\tr\n1\tx\n2\ta\n2\tb\n1\ty\n2\tc\n2\td\n#extra\tc\tx\n";
        let h = Hierarchy::parse(doc).unwrap();
        assert!(label_tree(&h).is_err());
        let l = label_dag(&h);
        assert_eq!(spans(&l, &h, "x"), [(0, 3)]);
        assert_eq!(spans(&l, &h, "y"), [(2, 4)]);
        assert_eq!(spans(&l, &h, "r"), [(0, 4)]);
    }

    #[test]
    fn dag_on_tree_matches_tree() {
        let h = Hierarchy::parse("0\tr\n1\tx\n2\ta\n2\tb\n2\tc\n1\td\n").unwrap();
        assert_eq!(label_dag(&h), label_tree(&h).unwrap());
    }

    #[test]
    fn spanning_tree_is_depth_first() {
        // `b` is reached through `x` before r's direct edge to it
        let doc = "0\tr\n1\tx\n2\ta\n2\tc\n1\tb\n1\ty\n2\td\n2\te\n#extra\tb\tx\n";
        let h = Hierarchy::parse(doc).unwrap();
        let l = label_dag(&h);
        assert_eq!(spans(&l, &h, "a"), [(0, 1)]);
        assert_eq!(spans(&l, &h, "c"), [(1, 2)]);
        assert_eq!(spans(&l, &h, "b"), [(2, 3)]);
        assert_eq!(spans(&l, &h, "x"), [(0, 3)]);
    }

    #[test]
    fn deterministic() {
        let doc = "0\tr\n1\tx\n2\ta\n2\tb\n1\ty\n2\tc\n2\td\n#extra\ta\ty\n";
        let a = label_dag(&Hierarchy::parse(doc).unwrap());
        let b = label_dag(&Hierarchy::parse(doc).unwrap());
        assert_eq!(a, b);
    }
}
