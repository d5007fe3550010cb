//! Objects as rectangles in interval space, indexed by an R-tree, and the
//! bound-guided searches over it.
//!
//! An object's value on attribute `k` is a set of intervals; the cartesian
//! product of those intervals over the indexed attributes gives its virtual
//! rectangles, and the leaf entry's MBR encloses all of them. Leaf entries
//! also keep the value nodes themselves so exact degrees can be computed
//! without touching the object file.

mod audit;
mod bounds;
mod dump;
mod rstar;
mod search;

pub use audit::{audit_bounds, audit_structure, BoundsAudit, Violation};
pub use bounds::{entry_bounds, max_matching_degree, score, UserIntervals};
pub use search::{ind, p_ind, IndConfig, IndRun, Visit};

use crate::error::{Error, Result};
use crate::hierarchy::{NodeId, Span};
use crate::model::{Domain, ObjectRecord, Problem};
use crate::packing::str_groups;

/// One half-open range per indexed attribute.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rect(pub Vec<Span>);

impl Rect {
    pub fn dims(&self) -> usize {
        self.0.len()
    }

    pub fn cover(&self, o: &Rect) -> Rect {
        Rect(self.0.iter().zip(&o.0).map(|(a, b)| a.cover(b)).collect())
    }

    pub fn contains(&self, o: &Rect) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a.contains(b))
    }

    pub fn area(&self) -> f64 {
        self.0.iter().map(|s| s.len() as f64).product()
    }

    pub fn margin(&self) -> f64 {
        self.0.iter().map(|s| s.len() as f64).sum()
    }

    pub fn overlap_area(&self, o: &Rect) -> f64 {
        self.0
            .iter()
            .zip(&o.0)
            .map(|(a, b)| a.overlap(b) as f64)
            .product()
    }

    /// Twice the centre, kept integral.
    pub fn centre2(&self, dim: usize) -> f64 {
        (self.0[dim].lo + self.0[dim].hi) as f64
    }

    fn cover_all<'a>(mut it: impl Iterator<Item = &'a Rect>) -> Option<Rect> {
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, r| acc.cover(r)))
    }
}

impl std::fmt::Display for Rect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("x")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Virtual rectangles of an object over the attributes in `indexed`: one per
/// combination of its values' intervals.
pub fn transform(domain: &Domain, o: &ObjectRecord, indexed: &[usize]) -> Vec<Rect> {
    let mut out = vec![Vec::new()];
    for &k in indexed {
        let spans: Vec<Span> = o.values[k]
            .iter()
            .flat_map(|&v| domain.intervals(k, v).spans().iter().copied())
            .collect();
        out = out
            .into_iter()
            .flat_map(|prefix| {
                spans.iter().map(move |s| {
                    let mut r = prefix.clone();
                    r.push(*s);
                    r
                })
            })
            .collect();
    }
    out.into_iter().map(Rect).collect()
}

/// Smallest rectangle enclosing every virtual rectangle of `o`.
pub fn object_mbr(domain: &Domain, o: &ObjectRecord, indexed: &[usize]) -> Rect {
    Rect(
        indexed
            .iter()
            .map(|&k| {
                let mut spans = o.values[k]
                    .iter()
                    .map(|&v| domain.intervals(k, v).hull().expect("labeled node"));
                let first = spans.next().expect("non-empty value");
                spans.fold(first, |a, b| a.cover(&b))
            })
            .collect(),
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub mbr: Rect,
    /// Child node id, or object index for entries of leaf nodes.
    pub child: u32,
    /// Largest objective value per objective attribute below this entry.
    pub obj_max: Vec<f64>,
    /// Leaf entries: the object's value nodes on each indexed attribute.
    pub values: Vec<Vec<NodeId>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    /// 0 for leaves.
    pub level: u32,
    pub entries: Vec<Entry>,
}

impl Node {
    pub fn is_leaf(&self) -> bool {
        self.level == 0
    }

    fn mbr(&self) -> Rect {
        Rect::cover_all(self.entries.iter().map(|e| &e.mbr)).expect("non-empty node")
    }

    fn obj_max(&self) -> Vec<f64> {
        let mut m = self.entries[0].obj_max.clone();
        for e in &self.entries[1..] {
            for (x, y) in m.iter_mut().zip(&e.obj_max) {
                *x = x.max(*y);
            }
        }
        m
    }

    fn as_entry(&self, id: u32) -> Entry {
        Entry {
            mbr: self.mbr(),
            child: id,
            obj_max: self.obj_max(),
            values: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BuildMethod {
    /// Sort-tile-recursive bulk load.
    #[default]
    Str,
    /// One-by-one insertion with R* splits and forced reinsertion.
    RStar,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexConfig {
    pub capacity: usize,
    pub method: BuildMethod,
    /// Attributes to index; `None` indexes all of them.
    pub indexed: Option<Vec<usize>>,
}

impl Default for IndexConfig {
    fn default() -> Self {
        IndexConfig {
            capacity: 64,
            method: BuildMethod::Str,
            indexed: None,
        }
    }
}

/// Largest fanout whose leaf nodes of single-valued objects fit one page.
pub fn page_fanout(indexed: usize, objective: usize) -> usize {
    let entry = 4 + 8 * indexed + 8 * objective + 8 * indexed;
    ((crate::pager::PAGE_SIZE - 8) / entry).max(2)
}

/// R-tree over object rectangles. Nodes live in an arena and are stored
/// encoded, one page each; `read` decodes a node.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectIndex {
    indexed: Vec<usize>,
    dims: usize,
    objective_dims: usize,
    capacity: usize,
    objects: usize,
    root: u32,
    pages: Vec<Vec<u8>>,
}

impl ObjectIndex {
    pub fn build(p: &Problem, cfg: &IndexConfig) -> Result<Self> {
        Self::build_from(&p.domain, &p.objects, cfg)
    }

    pub fn build_from(domain: &Domain, objects: &[ObjectRecord], cfg: &IndexConfig) -> Result<Self> {
        if objects.is_empty() {
            return Err(Error::NoObjects);
        }
        if cfg.capacity < 2 {
            return Err(Error::Config("node capacity must be at least 2".into()));
        }
        let indexed = match &cfg.indexed {
            None => (0..domain.dims()).collect(),
            Some(v) => {
                let mut v = v.clone();
                v.sort_unstable();
                v.dedup();
                if v.is_empty() || v.iter().any(|&k| k >= domain.dims()) {
                    return Err(Error::Config("invalid indexed attribute list".into()));
                }
                v
            }
        };
        if objects.len() > u32::MAX as usize {
            return Err(Error::Config("too many objects".into()));
        }
        let entries: Vec<Entry> = objects
            .iter()
            .enumerate()
            .map(|(i, o)| Entry {
                mbr: object_mbr(domain, o, &indexed),
                child: i as u32,
                obj_max: o.objective.clone(),
                values: indexed.iter().map(|&k| o.values[k].clone()).collect(),
            })
            .collect();
        let (nodes, root) = match cfg.method {
            BuildMethod::Str => str_build(entries, indexed.len(), cfg.capacity),
            BuildMethod::RStar => rstar::build(entries, cfg.capacity),
        };
        Ok(ObjectIndex {
            dims: domain.dims(),
            objective_dims: domain.objective().len(),
            capacity: cfg.capacity,
            objects: objects.len(),
            root,
            pages: nodes.iter().map(|n| dump::encode(n, indexed.len())).collect(),
            indexed,
        })
    }

    pub fn indexed(&self) -> &[usize] {
        &self.indexed
    }

    /// True when some attribute is left out of the index.
    pub fn is_subspace(&self) -> bool {
        self.indexed.len() < self.dims
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn objective_dims(&self) -> usize {
        self.objective_dims
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn objects(&self) -> usize {
        self.objects
    }

    pub fn root(&self) -> u32 {
        self.root
    }

    pub fn node_count(&self) -> usize {
        self.pages.len()
    }

    /// Decodes node `id`, counting one read.
    pub fn read(&self, id: u32, io: &mut u64) -> Node {
        *io += 1;
        self.node(id)
    }

    /// Decodes node `id` without counting.
    pub fn node(&self, id: u32) -> Node {
        dump::decode(&self.pages[id as usize], self.indexed.len(), self.objective_dims)
    }

    pub fn height(&self) -> usize {
        self.node(self.root).level as usize + 1
    }

    /// Attribute position of `k` inside the rectangles, if indexed.
    pub fn slot(&self, k: usize) -> Option<usize> {
        self.indexed.binary_search(&k).ok()
    }

    pub fn dump(&self) -> String {
        dump::dump(self)
    }

    pub fn load(text: &str) -> Result<Self> {
        dump::load(text)
    }
}

fn str_build(entries: Vec<Entry>, dims: usize, cap: usize) -> (Vec<Node>, u32) {
    let mut nodes: Vec<Node> = Vec::new();
    let mut level_entries = entries;
    let mut level = 0;
    loop {
        let groups = str_groups((0..level_entries.len()).collect(), dims, cap, |i, d| {
            level_entries[i].mbr.centre2(d)
        });
        let mut slots: Vec<Option<Entry>> = level_entries.into_iter().map(Some).collect();
        let mut up = Vec::with_capacity(groups.len());
        for g in groups {
            let node = Node {
                level,
                entries: g.iter().map(|&i| slots[i].take().unwrap()).collect(),
            };
            let id = nodes.len() as u32;
            up.push(node.as_entry(id));
            nodes.push(node);
        }
        if up.len() == 1 {
            return (nodes, up[0].child);
        }
        level_entries = up;
        level += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn span(lo: u32, hi: u32) -> Span {
        Span::new(lo, hi)
    }

    #[test]
    fn page_fanout_fits() {
        use crate::generate::{random_problem, InstanceConfig};
        use rand::SeedableRng;
        let cfg = InstanceConfig {
            objects: 700,
            dims: 4,
            objective_dims: 1,
            ..InstanceConfig::default()
        };
        let p = random_problem(&mut rand_chacha::ChaCha8Rng::seed_from_u64(4), &cfg);
        let cap = page_fanout(4, 1);
        let t = ObjectIndex::build(&p, &IndexConfig { capacity: cap, ..IndexConfig::default() }).unwrap();
        assert!(t.pages.iter().all(|b| b.len() <= crate::pager::PAGE_SIZE));
        assert!(t.pages.iter().any(|b| b.len() + 100 > crate::pager::PAGE_SIZE));
    }

    #[test]
    fn running_example_rectangles() {
        let p = fixtures::running_example();
        let r = transform(&p.domain, &p.objects[0], &[0, 1]);
        assert_eq!(r, vec![Rect(vec![span(4, 6), span(2, 3)])]);
        // u1's cuisine and attire intervals
        let d = &p.domain;
        let u = &p.users[0];
        let cu = d.intervals(0, u.prefs[0].as_ref().unwrap()[0]);
        let at = d.intervals(1, u.prefs[1].as_ref().unwrap()[0]);
        assert_eq!((cu.hull().unwrap(), at.hull().unwrap()), (span(2, 6), span(1, 3)));
    }

    #[test]
    fn leaf_value_gives_unit_side() {
        let p = fixtures::running_example();
        let r = transform(&p.domain, &p.objects[3], &[0]);
        assert_eq!(r, vec![Rect(vec![span(1, 2)])]);
    }

    #[test]
    fn multi_values_expand() {
        let p = fixtures::running_example();
        let o = ObjectRecord::from_labels(
            &p.domain,
            "m",
            &[&["French", "Greek"], &["Formal", "Street wear"], &["Astoria"], &["$"], &["No"]],
            vec![],
        )
        .unwrap();
        let r = transform(&p.domain, &o, &[0, 1, 2]);
        assert_eq!(r.len(), 4);
        let mbr = object_mbr(&p.domain, &o, &[0, 1, 2]);
        assert!(r.iter().all(|x| mbr.contains(x)));
        assert_eq!(mbr, Rect(vec![span(2, 6), span(0, 4), span(10, 11)]));
    }

    #[test]
    fn capacity_two_groups_as_in_figure() {
        let p = fixtures::running_example();
        let cfg = IndexConfig {
            capacity: 2,
            ..IndexConfig::default()
        };
        let t = ObjectIndex::build(&p, &cfg).unwrap();
        let root = t.node(t.root());
        assert_eq!(root.entries.len(), 2);
        let mut groups: Vec<Vec<u32>> = root
            .entries
            .iter()
            .map(|e| {
                let mut g: Vec<u32> = t.node(e.child).entries.iter().map(|x| x.child).collect();
                g.sort();
                g
            })
            .collect();
        groups.sort();
        assert_eq!(groups, vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(t.height(), 2);
    }

    #[test]
    fn small_set_is_single_leaf() {
        let p = fixtures::running_example();
        let t = ObjectIndex::build(&p, &IndexConfig::default()).unwrap();
        assert_eq!(t.node_count(), 1);
        assert!(t.node(t.root()).is_leaf());
    }

    #[test]
    fn rejects_empty_and_bad_config() {
        let mut p = fixtures::running_example();
        let bad = IndexConfig {
            indexed: Some(vec![9]),
            ..IndexConfig::default()
        };
        assert!(ObjectIndex::build(&p, &bad).is_err());
        p.objects.clear();
        assert!(matches!(
            ObjectIndex::build(&p, &IndexConfig::default()),
            Err(Error::NoObjects)
        ));
    }
}
