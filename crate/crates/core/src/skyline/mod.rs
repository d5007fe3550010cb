//! Baseline pipeline: one composite record per object (its matching vectors
//! for every user, then its objective values), spilled to a paged file and
//! fed to a skyline algorithm under collective preference.

mod bbs;
mod bnl;
mod sfs;

use std::fmt;
use std::str::FromStr;

use crate::dominance::{Comparator, Counters, DominanceConfig, Percent, Strictness};
use crate::error::{Error, Result};
use crate::model::{DegreeTable, Problem, Profile};
use crate::pager::RecordFile;
use crate::par::Parallelism;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Inner {
    #[default]
    Bnl,
    Sfs,
    Bbs,
}

impl FromStr for Inner {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bnl" => Ok(Inner::Bnl),
            "sfs" => Ok(Inner::Sfs),
            "bbs" => Ok(Inner::Bbs),
            _ => Err(Error::Config(format!("unknown skyline algorithm `{s}`"))),
        }
    }
}

impl fmt::Display for Inner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Inner::Bnl => "bnl",
            Inner::Sfs => "sfs",
            Inner::Bbs => "bbs",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BslConfig {
    pub inner: Inner,
    /// Records per page; `None` packs records into 4 KiB pages.
    pub records_per_page: Option<usize>,
    /// BNL window, in records.
    pub window: usize,
    /// BBS node fanout; `None` fits a node into one page.
    pub node_capacity: Option<usize>,
    pub strictness: Strictness,
    /// Used only while computing matching vectors.
    pub parallelism: Parallelism,
}

impl Default for BslConfig {
    fn default() -> Self {
        BslConfig {
            inner: Inner::Bnl,
            records_per_page: None,
            window: 10_000,
            node_capacity: None,
            strictness: Strictness::Standard,
            parallelism: Parallelism::Parallel,
        }
    }
}

impl BslConfig {
    pub fn with_inner(inner: Inner) -> Self {
        BslConfig {
            inner,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkylineRun {
    /// Object indices, ascending.
    pub cm: Vec<usize>,
    pub counters: Counters,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PSkylineRun {
    pub cm: Vec<usize>,
    pub pcm: Vec<usize>,
    pub counters: Counters,
}

pub(crate) fn split(v: &[f64], ud: usize) -> Profile<'_> {
    Profile {
        degrees: &v[..ud],
        objective: &v[ud..],
    }
}

pub(crate) struct Ctx<'a> {
    pub cmp: Comparator<'a>,
    pub ud: usize,
    pub io: u64,
}

impl Ctx<'_> {
    pub fn dominates(&self, a: &[f64], b: &[f64]) -> bool {
        self.cmp.collective(split(a, self.ud), split(b, self.ud))
    }
}

/// Computes the matching vectors of every object and runs the pipeline.
pub fn bsl(p: &Problem, cfg: &BslConfig) -> SkylineRun {
    let table = p.degree_table(cfg.parallelism);
    bsl_table(&table, cfg)
}

pub fn bsl_table(table: &DegreeTable, cfg: &BslConfig) -> SkylineRun {
    let dcfg = DominanceConfig {
        strictness: cfg.strictness,
        tolerance: table.tolerance(),
    };
    let mut ctx = Ctx {
        cmp: Comparator::new(table, dcfg),
        ud: table.users() * table.dims(),
        io: 0,
    };
    let file = write_records(table, cfg.records_per_page, &mut ctx.io);
    let mut cm = match cfg.inner {
        Inner::Bnl => bnl::run(file, cfg.window.max(1), &mut ctx),
        Inner::Sfs => sfs::run(file, &mut ctx),
        Inner::Bbs => bbs::run(file, cfg.node_capacity, &mut ctx),
    };
    cm.sort_unstable();
    SkylineRun {
        cm,
        counters: Counters {
            dominance_checks: ctx.cmp.checks(),
            io_reads: ctx.io,
        },
    }
}

fn write_records(table: &DegreeTable, per_page: Option<usize>, io: &mut u64) -> RecordFile {
    let ud = table.users() * table.dims();
    let mut f = RecordFile::new(ud + table.objective_dims(), per_page);
    let mut row = Vec::with_capacity(f.width());
    for o in 0..table.objects() {
        let pr = table.profile(o);
        row.clear();
        row.extend_from_slice(pr.degrees);
        row.extend_from_slice(pr.objective);
        f.append(o as u32, &row, io);
    }
    f.flush(io);
    f
}

pub fn p_bsl(p: &Problem, pct: Percent, cfg: &BslConfig) -> PSkylineRun {
    let table = p.degree_table(cfg.parallelism);
    p_bsl_table(&table, pct, cfg)
}

/// Runs the pipeline, then drops every member of CM that another member
/// p-collectively dominates.
pub fn p_bsl_table(table: &DegreeTable, pct: Percent, cfg: &BslConfig) -> PSkylineRun {
    let run = bsl_table(table, cfg);
    let cmp = Comparator::new(
        table,
        DominanceConfig {
            strictness: cfg.strictness,
            tolerance: table.tolerance(),
        },
    );
    let k = pct.threshold(table.users());
    let pcm = run
        .cm
        .iter()
        .copied()
        .filter(|&b| {
            !run.cm
                .iter()
                .any(|&a| a != b && cmp.p_collective(table.profile(a), table.profile(b), k))
        })
        .collect();
    let mut counters = run.counters;
    counters.dominance_checks += cmp.checks();
    PSkylineRun {
        cm: run.cm,
        pcm,
        counters,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dominance::brute_force_cm;
    use crate::fixtures;

    const ALL: [Inner; 3] = [Inner::Bnl, Inner::Sfs, Inner::Bbs];

    #[test]
    fn running_example() {
        let p = fixtures::running_example();
        for inner in ALL {
            let r = bsl(&p, &BslConfig::with_inner(inner));
            assert_eq!(r.cm, vec![0, 1], "{inner}");
            assert!(r.counters.io_reads > 0 && r.counters.dominance_checks > 0);
        }
        let pr = p_bsl(&p, Percent::new(60.0).unwrap(), &BslConfig::default());
        assert_eq!(pr.pcm, vec![1]);
        let pr = p_bsl(&p, Percent::new(30.0).unwrap(), &BslConfig::default());
        assert!(pr.pcm.is_empty());
        let pr = p_bsl(&p, Percent::full(), &BslConfig::default());
        assert_eq!(pr.pcm, pr.cm);
    }

    #[test]
    fn single_object() {
        let mut p = fixtures::running_example();
        p.objects.truncate(1);
        for inner in ALL {
            assert_eq!(bsl(&p, &BslConfig::with_inner(inner)).cm, vec![0]);
        }
    }

    fn lcg_table(seed: u64, n: usize, users: usize, dims: usize) -> DegreeTable {
        let mut s = seed;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 33) % 5) as f64 / 4.0
        };
        let spec = (0..users).map(|_| (0..dims).collect()).collect();
        let mut t = DegreeTable::new(0, dims, spec, 0);
        for _ in 0..n {
            let row: Vec<f64> = (0..users * dims).map(|_| next()).collect();
            t.push_object(&row, &[]);
        }
        t
    }

    #[test]
    fn tiny_window_and_pages_still_agree() {
        for seed in 0..20 {
            let t = lcg_table(seed, 150, 2, 2);
            let want = brute_force_cm(&t, DominanceConfig::default());
            for inner in ALL {
                let cfg = BslConfig {
                    inner,
                    records_per_page: Some(3),
                    window: 2,
                    node_capacity: Some(3),
                    ..BslConfig::default()
                };
                assert_eq!(bsl_table(&t, &cfg).cm, want, "seed {seed} {inner}");
            }
        }
    }

    #[test]
    fn parses_names() {
        assert_eq!("SFS".parse::<Inner>().unwrap(), Inner::Sfs);
        assert!("quick".parse::<Inner>().is_err());
    }
}
