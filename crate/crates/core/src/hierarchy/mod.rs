//! Attribute hierarchies and their interval labelings.
//!
//! A hierarchy is read from a line-based document (`depth<TAB>label`, one
//! node per line, with optional `#extra<TAB>child<TAB>parent` edges that turn
//! it into a DAG). Internal nodes with a single child are merged into that
//! child while parsing, so every internal node ends up with two or more
//! children. Labeling assigns each leaf a unit range in depth-first order and
//! each internal node the merged union of its children's ranges.

mod interval;
mod labeling;

use std::collections::HashMap;
use std::fmt::Write as _;

pub use interval::{set_cardinalities, Cardinalities, IntervalSet, Span};
pub use labeling::{label_dag, label_tree, IntervalLabeling};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Order in which children are visited when leaves are numbered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChildOrder {
    #[default]
    Document,
    Lexicographic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Hierarchy {
    name: String,
    labels: Vec<String>,
    /// Tree children first (document lines), then `#extra` children.
    children: Vec<Vec<NodeId>>,
    /// The first entry is the parent given by indentation.
    parents: Vec<Vec<NodeId>>,
    aliases: Vec<(String, NodeId)>,
    lookup: HashMap<String, NodeId>,
    root: NodeId,
    order: ChildOrder,
}

impl Hierarchy {
    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_with_order(text, ChildOrder::Document)
    }

    pub fn parse_with_order(text: &str, order: ChildOrder) -> Result<Self> {
        let raw = RawGraph::parse(text)?;
        raw.into_hierarchy(order)
    }

    /// Attribute name; the root label.
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn order(&self) -> ChildOrder {
        self.order
    }

    pub fn is_dag(&self) -> bool {
        self.parents.iter().any(|p| p.len() > 1)
    }

    pub fn label(&self, id: NodeId) -> &str {
        &self.labels[id.index()]
    }

    pub fn children(&self, id: NodeId) -> &[NodeId] {
        &self.children[id.index()]
    }

    pub fn parents(&self, id: NodeId) -> &[NodeId] {
        &self.parents[id.index()]
    }

    pub fn is_leaf(&self, id: NodeId) -> bool {
        self.children[id.index()].is_empty()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.labels.len() as u32).map(NodeId)
    }

    pub fn leaves(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes().filter(|&n| self.is_leaf(n))
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves().count()
    }

    /// Resolves a label or the alias left behind by a collapsed node.
    pub fn lookup(&self, label: &str) -> Option<NodeId> {
        self.lookup.get(label).copied()
    }

    pub fn require(&self, label: &str) -> Result<NodeId> {
        self.lookup(label).ok_or_else(|| Error::UnknownLabel {
            hierarchy: self.name.clone(),
            label: label.to_string(),
        })
    }

    pub fn aliases(&self) -> &[(String, NodeId)] {
        &self.aliases
    }

    /// Length of the longest root-to-leaf path, counted in nodes.
    pub fn height(&self) -> usize {
        let mut memo = vec![0usize; self.len()];
        for n in self.post_order() {
            memo[n.index()] = 1 + self
                .children(n)
                .iter()
                .map(|c| memo[c.index()])
                .max()
                .unwrap_or(0);
        }
        memo[self.root.index()]
    }

    /// Every node after all of its descendants.
    pub fn post_order(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.len());
        let mut done = vec![false; self.len()];
        let mut stack = vec![(self.root, 0usize)];
        while let Some((n, next)) = stack.pop() {
            let kids = self.children(n);
            if next < kids.len() {
                stack.push((n, next + 1));
                let c = kids[next];
                if !done[c.index()] {
                    stack.push((c, 0));
                }
            } else if !done[n.index()] {
                done[n.index()] = true;
                out.push(n);
            }
        }
        out
    }

    /// Serialises to the line format; `parse(to_document(h)) == h`.
    pub fn to_document(&self) -> String {
        let mut out = String::new();
        let mut stack = vec![(self.root, 0usize)];
        while let Some((n, depth)) = stack.pop() {
            let _ = writeln!(out, "{depth}\t{}", self.label(n));
            for &c in self.children(n).iter().rev() {
                if self.parents(c)[0] == n {
                    stack.push((c, depth + 1));
                }
            }
        }
        for n in self.nodes() {
            for &c in self.children(n) {
                if self.parents(c)[0] != n {
                    let _ = writeln!(out, "#extra\t{}\t{}", self.label(c), self.label(n));
                }
            }
        }
        for (alias, target) in &self.aliases {
            let _ = writeln!(out, "#alias\t{alias}\t{}", self.label(*target));
        }
        out
    }
}

/// Parsed document before single-child collapsing and id compaction.
struct RawGraph {
    labels: Vec<String>,
    children: Vec<Vec<usize>>,
    parents: Vec<Vec<usize>>,
    aliases: Vec<(String, String)>,
    root: usize,
}

impl RawGraph {
    fn parse(text: &str) -> Result<Self> {
        let mut labels: Vec<String> = Vec::new();
        let mut children: Vec<Vec<usize>> = Vec::new();
        let mut parents: Vec<Vec<usize>> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut stack: Vec<usize> = Vec::new();
        let mut root = None;
        let mut extras = Vec::new();
        let mut aliases = Vec::new();

        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("#extra\t") {
                let (child, parent) = split_pair(rest, line_no)?;
                extras.push((line_no, child, parent));
                continue;
            }
            if let Some(rest) = line.strip_prefix("#alias\t") {
                let (alias, target) = split_pair(rest, line_no)?;
                aliases.push((alias, target));
                continue;
            }
            if line.starts_with('#') {
                continue;
            }
            let (depth_txt, label) = line.split_once('\t').ok_or_else(|| Error::Syntax {
                line: line_no,
                msg: "expected `depth<TAB>label`".into(),
            })?;
            let depth: usize = depth_txt.trim().parse().map_err(|_| Error::Syntax {
                line: line_no,
                msg: format!("bad depth `{depth_txt}`"),
            })?;
            let label = label.trim().to_string();
            if label.is_empty() {
                return Err(Error::Syntax {
                    line: line_no,
                    msg: "empty label".into(),
                });
            }
            if depth > stack.len() || (depth == 0 && root.is_none() && !stack.is_empty()) {
                return Err(Error::Syntax {
                    line: line_no,
                    msg: format!("depth {depth} skips a level"),
                });
            }
            if depth == 0 && root.is_some() {
                return Err(Error::MultipleRoots { line: line_no, label });
            }
            if root.is_none() && depth != 0 {
                return Err(Error::Syntax {
                    line: line_no,
                    msg: "first node must have depth 0".into(),
                });
            }
            stack.truncate(depth);
            if let Some(&existing) = index.get(&label) {
                if stack.contains(&existing) {
                    return Err(Error::Cycle { label });
                }
                return Err(Error::DuplicateLabel { line: line_no, label });
            }
            let id = labels.len();
            labels.push(label.clone());
            children.push(Vec::new());
            parents.push(Vec::new());
            index.insert(label, id);
            if let Some(&p) = stack.last() {
                children[p].push(id);
                parents[id].push(p);
            } else {
                root = Some(id);
            }
            stack.push(id);
        }

        let root = root.ok_or(Error::EmptyHierarchy)?;
        for (line_no, child, parent) in extras {
            let lookup = |l: &str| {
                index.get(l).copied().ok_or_else(|| Error::Syntax {
                    line: line_no,
                    msg: format!("unknown label `{l}` in #extra"),
                })
            };
            let (c, p) = (lookup(&child)?, lookup(&parent)?);
            if c == p {
                return Err(Error::Cycle { label: child });
            }
            if c == root {
                return Err(Error::Cycle { label: child });
            }
            if !children[p].contains(&c) {
                children[p].push(c);
                parents[c].push(p);
            }
        }

        let g = RawGraph {
            labels,
            children,
            parents,
            aliases,
            root,
        };
        g.check_acyclic()?;
        Ok(g)
    }

    fn check_acyclic(&self) -> Result<()> {
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut state = vec![0u8; self.labels.len()];
        let mut stack = vec![(self.root, 0usize)];
        state[self.root] = 1;
        while let Some((n, next)) = stack.pop() {
            if next < self.children[n].len() {
                stack.push((n, next + 1));
                let c = self.children[n][next];
                match state[c] {
                    0 => {
                        state[c] = 1;
                        stack.push((c, 0));
                    }
                    1 => {
                        return Err(Error::Cycle {
                            label: self.labels[c].clone(),
                        })
                    }
                    _ => {}
                }
            } else {
                state[n] = 2;
            }
        }
        Ok(())
    }

    fn into_hierarchy(mut self, order: ChildOrder) -> Result<Hierarchy> {
        let n = self.labels.len();
        let mut removed = vec![false; n];
        let mut alias_of: Vec<(String, usize)> = Vec::new();
        let mut merged_into: Vec<usize> = (0..n).collect();

        // Merge every single-child node into its child.
        let mut changed = true;
        while changed {
            changed = false;
            for v in 0..n {
                if removed[v] || self.children[v].len() != 1 {
                    continue;
                }
                let c = self.children[v][0];
                let v_parents = std::mem::take(&mut self.parents[v]);
                for &p in &v_parents {
                    let kids = &mut self.children[p];
                    let pos = kids.iter().position(|&k| k == v).expect("parent link");
                    if kids.contains(&c) {
                        kids.remove(pos);
                    } else {
                        kids[pos] = c;
                    }
                }
                let cp = &mut self.parents[c];
                let at = cp.iter().position(|&k| k == v).expect("child link");
                cp.remove(at);
                let mut insert_at = at;
                for &p in &v_parents {
                    if !cp.contains(&p) {
                        cp.insert(insert_at, p);
                        insert_at += 1;
                    }
                }
                if self.root == v {
                    self.root = c;
                }
                self.children[v].clear();
                removed[v] = true;
                merged_into[v] = c;
                alias_of.push((self.labels[v].clone(), c));
                changed = true;
            }
        }

        let mut remap = vec![u32::MAX; n];
        let mut next = 0u32;
        for v in 0..n {
            if !removed[v] {
                remap[v] = next;
                next += 1;
            }
        }
        let map = |v: usize| NodeId(remap[v]);
        let mut labels = Vec::with_capacity(next as usize);
        let mut children = Vec::with_capacity(next as usize);
        let mut parents = Vec::with_capacity(next as usize);
        for v in 0..n {
            if removed[v] {
                continue;
            }
            labels.push(std::mem::take(&mut self.labels[v]));
            children.push(self.children[v].iter().map(|&c| map(c)).collect::<Vec<_>>());
            parents.push(self.parents[v].iter().map(|&p| map(p)).collect::<Vec<_>>());
        }
        if order == ChildOrder::Lexicographic {
            for kids in children.iter_mut() {
                kids.sort_by(|a: &NodeId, b: &NodeId| labels[a.index()].cmp(&labels[b.index()]));
            }
        }
        let mut lookup: HashMap<String, NodeId> = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), NodeId(i as u32)))
            .collect();
        let mut aliases: Vec<(String, NodeId)> = alias_of
            .into_iter()
            .map(|(l, target)| {
                // a collapse chain resolves to the node that survived
                let mut t = target;
                while removed[t] {
                    t = merged_into[t];
                }
                (l, map(t))
            })
            .collect();
        for (alias, target) in self.aliases {
            let t = *lookup.get(&target).ok_or_else(|| Error::Syntax {
                line: 0,
                msg: format!("#alias target `{target}` unknown"),
            })?;
            aliases.push((alias, t));
        }
        for (alias, t) in &aliases {
            if lookup.contains_key(alias) && lookup[alias] != *t {
                return Err(Error::DuplicateLabel {
                    line: 0,
                    label: alias.clone(),
                });
            }
            lookup.insert(alias.clone(), *t);
        }
        let root = map(self.root);
        Ok(Hierarchy {
            name: labels[root.index()].clone(),
            labels,
            children,
            parents,
            aliases,
            lookup,
            root,
            order,
        })
    }
}

fn split_pair(rest: &str, line: usize) -> Result<(String, String)> {
    let mut it = rest.split('\t');
    match (it.next(), it.next(), it.next()) {
        (Some(a), Some(b), None) if !a.trim().is_empty() && !b.trim().is_empty() => {
            Ok((a.trim().to_string(), b.trim().to_string()))
        }
        _ => Err(Error::Syntax {
            line,
            msg: "expected two tab-separated labels".into(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ATTIRE: &str = "# attire\n0\tAttire\n1\tFormal\n1\tCasual\n2\tBusiness casual\n2\tSmart casual\n1\tStreet wear\n";

    #[test]
    fn parses_attire_tree() {
        let h = Hierarchy::parse(ATTIRE).unwrap();
        assert_eq!(h.name(), "Attire");
        assert_eq!(h.len(), 6);
        assert_eq!(h.leaf_count(), 4);
        assert_eq!(h.height(), 3);
        assert!(!h.is_dag());
        let casual = h.require("Casual").unwrap();
        assert_eq!(h.children(casual).len(), 2);
    }

    #[test]
    fn minimal_hierarchy() {
        let h = Hierarchy::parse("0\tR\n1\ta\n1\tb\n").unwrap();
        assert_eq!(h.height(), 2);
        assert_eq!(h.leaf_count(), 2);
    }

    #[test]
    fn own_ancestor_is_a_cycle() {
        let err = Hierarchy::parse("0\tR\n1\tA\n2\tR\n").unwrap_err();
        assert!(matches!(err, Error::Cycle { .. }), "{err:?}");
        let err = Hierarchy::parse("0\tR\n1\tA\n2\tB\n2\tC\n1\tD\n#extra\tA\tB\n").unwrap_err();
        assert!(matches!(err, Error::Cycle { .. }), "{err:?}");
    }

    #[test]
    fn rejects_bad_documents() {
        assert_eq!(Hierarchy::parse("# nothing\n\n").unwrap_err(), Error::EmptyHierarchy);
        assert!(matches!(
            Hierarchy::parse("0\tR\n1\ta\n1\ta\n").unwrap_err(),
            Error::DuplicateLabel { line: 3, .. }
        ));
        assert!(matches!(
            Hierarchy::parse("0\tR\n1\ta\n1\tb\n0\tS\n").unwrap_err(),
            Error::MultipleRoots { line: 4, .. }
        ));
        assert!(matches!(
            Hierarchy::parse("0\tR\n2\ta\n").unwrap_err(),
            Error::Syntax { line: 2, .. }
        ));
    }

    #[test]
    fn single_child_chains_collapse() {
        // R -> A -> B -> {x, y}; R also has z
        let h = Hierarchy::parse("0\tR\n1\tA\n2\tB\n3\tx\n3\ty\n1\tz\n").unwrap();
        assert_eq!(h.len(), 5);
        let b = h.require("B").unwrap();
        assert_eq!(h.lookup("A"), Some(b));
        assert_eq!(h.parents(b), &[h.root()]);
        assert_eq!(h.children(h.root()).len(), 2);
        for n in h.nodes() {
            assert!(h.is_leaf(n) || h.children(n).len() >= 2);
        }
    }

    #[test]
    fn long_chain_aliases_resolve() {
        let h = Hierarchy::parse("0\tR\n1\tA\n2\tB\n3\tC\n4\tx\n4\ty\n1\tz\n").unwrap();
        let c = h.require("C").unwrap();
        assert_eq!(h.lookup("A"), Some(c));
        assert_eq!(h.lookup("B"), Some(c));
    }

    #[test]
    fn collapsed_root() {
        let h = Hierarchy::parse("0\tTop\n1\tR\n2\ta\n2\tb\n").unwrap();
        assert_eq!(h.name(), "R");
        assert_eq!(h.lookup("Top"), Some(h.root()));
    }

    #[test]
    fn lexicographic_order() {
        let h = Hierarchy::parse_with_order("0\tR\n1\tz\n1\ta\n", ChildOrder::Lexicographic).unwrap();
        let kids: Vec<_> = h.children(h.root()).iter().map(|&c| h.label(c)).collect();
        assert_eq!(kids, ["a", "z"]);
    }

    #[test]
    fn document_round_trip() {
        let doc = "0\tR\n1\tx\n2\ta\n2\tb\n1\ty\n2\tc\n2\td\n#extra\tc\tx\n";
        let h = Hierarchy::parse(doc).unwrap();
        assert!(h.is_dag());
        let again = Hierarchy::parse(&h.to_document()).unwrap();
        assert_eq!(h, again);
        assert_eq!(h.to_document(), again.to_document());
    }
}
