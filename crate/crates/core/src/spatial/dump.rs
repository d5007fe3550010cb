//! Node page encoding and the text dump.
//!
//! Dump layout:
//!
//! ```text
//! # gmco index v1
//! attributes 5 objective 0 capacity 64 objects 4 root 0
//! indexed 0 1 2 3 4
//! node 0 level 0 entries 4
//! e 0 4:6,2:3,4:5,2:3,2:3 - 8;3;10;2;2
//! ```
//!
//! Entry lines hold the child, the MBR, the objective maxima (or `-`) and,
//! for leaf entries, the value node ids per indexed attribute (or `-`).

use std::fmt::Write as _;

use super::{Entry, Node, ObjectIndex, Rect};
use crate::error::{Error, Result};
use crate::hierarchy::{NodeId, Span};

pub const HEADER: &str = "# gmco index v1";

pub(super) fn encode(n: &Node, dims: usize) -> Vec<u8> {
    let mut b = Vec::with_capacity(8 + n.entries.len() * (4 + 8 * dims));
    let put = |x: u32, b: &mut Vec<u8>| b.extend_from_slice(&x.to_le_bytes());
    put(n.level, &mut b);
    put(n.entries.len() as u32, &mut b);
    for e in &n.entries {
        debug_assert_eq!(e.mbr.dims(), dims);
        put(e.child, &mut b);
        for s in &e.mbr.0 {
            put(s.lo, &mut b);
            put(s.hi, &mut b);
        }
        for x in &e.obj_max {
            b.extend_from_slice(&x.to_le_bytes());
        }
        if n.level == 0 {
            for vals in &e.values {
                put(vals.len() as u32, &mut b);
                for v in vals {
                    put(v.0, &mut b);
                }
            }
        }
    }
    b
}

struct Cursor<'a> {
    b: &'a [u8],
    at: usize,
}

impl Cursor<'_> {
    fn u32(&mut self) -> u32 {
        let x = u32::from_le_bytes(self.b[self.at..self.at + 4].try_into().unwrap());
        self.at += 4;
        x
    }

    fn f64(&mut self) -> f64 {
        let x = f64::from_le_bytes(self.b[self.at..self.at + 8].try_into().unwrap());
        self.at += 8;
        x
    }
}

pub(super) fn decode(b: &[u8], dims: usize, objective: usize) -> Node {
    let mut c = Cursor { b, at: 0 };
    let level = c.u32();
    let n = c.u32() as usize;
    let mut entries = Vec::with_capacity(n);
    for _ in 0..n {
        let child = c.u32();
        let mbr = Rect(
            (0..dims)
                .map(|_| {
                    let lo = c.u32();
                    Span::new(lo, c.u32())
                })
                .collect(),
        );
        let obj_max = (0..objective).map(|_| c.f64()).collect();
        let values = if level == 0 {
            (0..dims)
                .map(|_| {
                    let m = c.u32() as usize;
                    (0..m).map(|_| NodeId(c.u32())).collect()
                })
                .collect()
        } else {
            Vec::new()
        };
        entries.push(Entry {
            mbr,
            child,
            obj_max,
            values,
        });
    }
    Node { level, entries }
}

fn join<T: std::fmt::Display>(xs: impl Iterator<Item = T>, sep: &str) -> String {
    xs.map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

pub(super) fn dump(t: &ObjectIndex) -> String {
    let mut s = String::new();
    writeln!(s, "{HEADER}").unwrap();
    writeln!(
        s,
        "attributes {} objective {} capacity {} objects {} root {}",
        t.dims, t.objective_dims, t.capacity, t.objects, t.root
    )
    .unwrap();
    writeln!(s, "indexed {}", join(t.indexed.iter(), " ")).unwrap();
    for id in 0..t.node_count() as u32 {
        let n = t.node(id);
        writeln!(s, "node {id} level {} entries {}", n.level, n.entries.len()).unwrap();
        for e in &n.entries {
            let mbr = join(e.mbr.0.iter().map(|sp| format!("{}:{}", sp.lo, sp.hi)), ",");
            let obj = if e.obj_max.is_empty() {
                "-".to_string()
            } else {
                join(e.obj_max.iter(), ",")
            };
            let vals = if n.level == 0 {
                join(e.values.iter().map(|vs| join(vs.iter().map(|v| v.0), "|")), ";")
            } else {
                "-".to_string()
            };
            writeln!(s, "e {} {mbr} {obj} {vals}", e.child).unwrap();
        }
    }
    s
}

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::IndexDump {
        line,
        msg: msg.into(),
    }
}

fn num<T: std::str::FromStr>(line: usize, s: &str) -> Result<T> {
    s.parse().map_err(|_| err(line, format!("bad number `{s}`")))
}

/// `key value key value ...` after an optional leading keyword.
fn fields<'a>(line: usize, text: &'a str, keys: &[&str]) -> Result<Vec<&'a str>> {
    let toks: Vec<&str> = text.split_whitespace().collect();
    if toks.len() != keys.len() * 2 {
        return Err(err(line, "wrong number of fields"));
    }
    keys.iter()
        .enumerate()
        .map(|(i, k)| {
            if toks[2 * i] == *k {
                Ok(toks[2 * i + 1])
            } else {
                Err(err(line, format!("expected `{k}`")))
            }
        })
        .collect()
}

pub(super) fn load(text: &str) -> Result<ObjectIndex> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let mut next = |what: &str| lines.next().ok_or_else(|| err(0, format!("missing {what}")));
    let (_, h) = next("header")?;
    if h != HEADER {
        return Err(err(1, "unknown header"));
    }
    let (ln, meta) = next("metadata")?;
    let f = fields(ln, meta, &["attributes", "objective", "capacity", "objects", "root"])?;
    let dims: usize = num(ln, f[0])?;
    let objective_dims: usize = num(ln, f[1])?;
    let capacity: usize = num(ln, f[2])?;
    let objects: usize = num(ln, f[3])?;
    let root: u32 = num(ln, f[4])?;
    let (ln, idx) = next("indexed list")?;
    let indexed = idx
        .strip_prefix("indexed ")
        .ok_or_else(|| err(ln, "expected `indexed`"))?
        .split_whitespace()
        .map(|x| num(ln, x))
        .collect::<Result<Vec<usize>>>()?;
    let nd = indexed.len();

    let mut pages = Vec::new();
    while let Ok((ln, head)) = next("node") {
        let rest = head.strip_prefix("node ").ok_or_else(|| err(ln, "expected `node`"))?;
        let (id, rest) = rest.split_once(' ').ok_or_else(|| err(ln, "bad node line"))?;
        if num::<usize>(ln, id)? != pages.len() {
            return Err(err(ln, "nodes out of order"));
        }
        let f = fields(ln, rest, &["level", "entries"])?;
        let level: u32 = num(ln, f[0])?;
        let n: usize = num(ln, f[1])?;
        let mut entries = Vec::with_capacity(n);
        for _ in 0..n {
            let (ln, e) = next("entry")?;
            let toks: Vec<&str> = e.split(' ').collect();
            if toks.len() != 5 || toks[0] != "e" {
                return Err(err(ln, "bad entry line"));
            }
            let child = num(ln, toks[1])?;
            let mbr = Rect(
                toks[2]
                    .split(',')
                    .map(|p| {
                        let (lo, hi) = p.split_once(':').ok_or_else(|| err(ln, "bad span"))?;
                        let (lo, hi) = (num(ln, lo)?, num(ln, hi)?);
                        if lo >= hi {
                            return Err(err(ln, "empty span"));
                        }
                        Ok(Span::new(lo, hi))
                    })
                    .collect::<Result<_>>()?,
            );
            if mbr.dims() != nd {
                return Err(err(ln, "MBR dimensionality"));
            }
            let obj_max: Vec<f64> = if toks[3] == "-" {
                Vec::new()
            } else {
                toks[3].split(',').map(|x| num(ln, x)).collect::<Result<_>>()?
            };
            if obj_max.len() != objective_dims {
                return Err(err(ln, "objective dimensionality"));
            }
            let values = if level == 0 {
                let v: Vec<Vec<NodeId>> = toks[4]
                    .split(';')
                    .map(|vs| vs.split('|').map(|x| num(ln, x).map(NodeId)).collect())
                    .collect::<Result<_>>()?;
                if v.len() != nd {
                    return Err(err(ln, "value list dimensionality"));
                }
                v
            } else {
                Vec::new()
            };
            entries.push(Entry {
                mbr,
                child,
                obj_max,
                values,
            });
        }
        pages.push(encode(&Node { level, entries }, nd));
    }
    if root as usize >= pages.len() {
        return Err(err(0, "root out of range"));
    }
    Ok(ObjectIndex {
        indexed,
        dims,
        objective_dims,
        capacity,
        objects,
        root,
        pages,
    })
}

#[cfg(test)]
mod tests {
    use super::super::{BuildMethod, IndexConfig};
    use super::*;
    use crate::fixtures;

    #[test]
    fn round_trip_is_byte_identical() {
        let p = fixtures::running_example();
        for method in [BuildMethod::Str, BuildMethod::RStar] {
            let cfg = IndexConfig {
                capacity: 2,
                method,
                indexed: None,
            };
            let t = ObjectIndex::build(&p, &cfg).unwrap();
            let d = t.dump();
            let back = ObjectIndex::load(&d).unwrap();
            assert_eq!(back, t);
            assert_eq!(back.dump(), d);
        }
    }

    #[test]
    fn rejects_garbage() {
        assert!(ObjectIndex::load("").is_err());
        assert!(ObjectIndex::load("# gmco index v0\n").is_err());
        let p = fixtures::running_example();
        let d = ObjectIndex::build(&p, &IndexConfig::default()).unwrap().dump();
        let broken = d.replace("4:6", "6:4");
        assert!(matches!(ObjectIndex::load(&broken), Err(Error::IndexDump { .. })));
    }
}
