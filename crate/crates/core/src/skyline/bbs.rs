use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::sfs::key;
use super::Ctx;
use crate::packing::str_groups;
use crate::pager::{RecordBuf, RecordFile, PAGE_SIZE};

/// Node of the point index. Leaf entries are whole records; inner entries
/// carry the coordinatewise maximum of everything below them.
struct Node {
    leaf: bool,
    corner: Vec<f64>,
    entries: RecordBuf,
}

#[derive(PartialEq)]
struct Item {
    key: f64,
    node: bool,
    slot: (u32, u32),
}

impl Eq for Item {}

impl Ord for Item {
    fn cmp(&self, o: &Self) -> Ordering {
        self.key
            .total_cmp(&o.key)
            // records before nodes, then lower slot first
            .then((!self.node).cmp(&!o.node))
            .then(o.slot.cmp(&self.slot))
    }
}

impl PartialOrd for Item {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Per-user norms of a composite record: the point the index is built on.
fn norms(v: &[f64], users: usize, dims: usize) -> impl Fn(usize) -> f64 + '_ {
    move |u| {
        if u < users {
            v[u * dims..(u + 1) * dims].iter().sum()
        } else {
            0.0
        }
    }
}

fn build(all: &RecordBuf, cap: usize, users: usize, dims: usize, io: &mut u64) -> (Vec<Node>, usize) {
    let width = all.width();
    let mut nodes: Vec<Node> = Vec::new();
    let groups = str_groups((0..all.len()).collect(), users.max(1), cap, |i, d| {
        norms(all.values(i), users, dims)(d)
    });
    let mut level = RecordBuf::new(width);
    for g in groups {
        let mut entries = RecordBuf::new(width);
        for &i in &g {
            entries.push(all.ids[i], all.values(i));
        }
        let corner = max_corner(&entries);
        level.push(nodes.len() as u32, &corner);
        nodes.push(Node {
            leaf: true,
            corner,
            entries,
        });
        *io += 1;
    }
    while level.len() > 1 {
        let groups = str_groups((0..level.len()).collect(), users.max(1), cap, |i, d| {
            norms(level.values(i), users, dims)(d)
        });
        let mut up = RecordBuf::new(width);
        for g in groups {
            let mut entries = RecordBuf::new(width);
            for &i in &g {
                entries.push(level.ids[i], level.values(i));
            }
            let corner = max_corner(&entries);
            up.push(nodes.len() as u32, &corner);
            nodes.push(Node {
                leaf: false,
                corner,
                entries,
            });
            *io += 1;
        }
        level = up;
    }
    let root = level.ids.first().map_or(0, |&r| r as usize);
    (nodes, root)
}

fn max_corner(b: &RecordBuf) -> Vec<f64> {
    let mut m = vec![f64::NEG_INFINITY; b.width()];
    for i in 0..b.len() {
        for (x, y) in m.iter_mut().zip(b.values(i)) {
            *x = x.max(*y);
        }
    }
    m
}

/// Branch-and-bound skyline over an STR-packed index of the per-user norm
/// points. Entries are visited by descending key of their maximum corner
/// and skipped once a skyline record collectively dominates that corner.
pub(super) fn run(input: RecordFile, capacity: Option<usize>, ctx: &mut Ctx<'_>) -> Vec<usize> {
    let width = input.width();
    let users = ctx.cmp.users();
    let dims = if users == 0 { 0 } else { ctx.ud / users };
    let cap = capacity
        .unwrap_or_else(|| PAGE_SIZE / RecordFile::record_bytes(width))
        .max(2);
    let all = input.read_all(&mut ctx.io);
    if all.is_empty() {
        return Vec::new();
    }
    let (nodes, root) = build(&all, cap, users, dims, &mut ctx.io);
    drop(all);

    let mut sky = RecordBuf::new(width);
    let mut heap = BinaryHeap::new();
    heap.push(Item {
        key: f64::INFINITY,
        node: true,
        slot: (root as u32, 0),
    });
    let dominated = |sky: &RecordBuf, v: &[f64], ctx: &Ctx<'_>| {
        (0..sky.len()).any(|i| ctx.dominates(sky.values(i), v))
    };
    while let Some(it) = heap.pop() {
        if it.node {
            let node = &nodes[it.slot.0 as usize];
            // the skyline may have grown since this entry was queued
            if dominated(&sky, &node.corner, ctx) {
                continue;
            }
            ctx.io += 1;
            for e in 0..node.entries.len() {
                let v = node.entries.values(e);
                if dominated(&sky, v, ctx) {
                    continue;
                }
                heap.push(Item {
                    key: key(v),
                    node: !node.leaf,
                    slot: if node.leaf {
                        (it.slot.0, e as u32)
                    } else {
                        (node.entries.ids[e], 0)
                    },
                });
            }
            continue;
        }
        let node = &nodes[it.slot.0 as usize];
        let e = it.slot.1 as usize;
        let v = node.entries.values(e);
        if dominated(&sky, v, ctx) {
            continue;
        }
        let mut i = 0;
        while i < sky.len() {
            if ctx.dominates(v, sky.values(i)) {
                sky.swap_remove(i);
            } else {
                i += 1;
            }
        }
        sky.push(node.entries.ids[e], v);
    }
    sky.ids.iter().map(|&i| i as usize).collect()
}
