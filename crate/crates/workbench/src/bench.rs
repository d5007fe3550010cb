//! Parameter sweeps over synthetic data.
//!
//! A bench config is TOML:
//!
//! ```toml
//! algorithms = ["bsl-bnl", "ind"]
//! sweep = "users=2..32"
//!
//! [synthetic]
//! objects = 20000
//!
//! [params]
//! runs = 3
//! ```
//!
//! Sweep specs: `name=a..b` doubles from `a` up to `b`, `name=a..b:s` steps
//! by `s`, `name=a,b,c` lists values.

use std::str::FromStr;

use gmco_core::model::Similarity;
use gmco_core::par::{map_indexed, Parallelism};
use serde::{Deserialize, Serialize};

use crate::experiment::{run_experiment, Algorithm, Dataset, RunParams, RunReport};
use crate::synthetic::{gen_synthetic, SyntheticConfig};
use crate::{Result, WorkbenchError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    Objects,
    Attributes,
    Users,
    Height,
    ObjectLevel,
    UserLevel,
}

impl SweepParam {
    fn apply(self, cfg: &mut SyntheticConfig, v: usize) {
        match self {
            SweepParam::Objects => cfg.objects = v,
            SweepParam::Attributes => cfg.attributes = v,
            SweepParam::Users => cfg.users = v,
            SweepParam::Height => cfg.height = v as u32,
            SweepParam::ObjectLevel => cfg.object_level = v as u32,
            SweepParam::UserLevel => cfg.user_level = v as u32,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sweep {
    pub param: SweepParam,
    pub values: Vec<usize>,
}

impl FromStr for Sweep {
    type Err = WorkbenchError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |m: &str| WorkbenchError::Config(format!("sweep `{s}`: {m}"));
        let (name, spec) = s.split_once('=').ok_or_else(|| bad("expected name=values"))?;
        let param = match name.trim().to_ascii_lowercase().as_str() {
            "objects" | "o" => SweepParam::Objects,
            "attributes" | "d" => SweepParam::Attributes,
            "users" | "u" => SweepParam::Users,
            "height" => SweepParam::Height,
            "object_level" | "object-level" => SweepParam::ObjectLevel,
            "user_level" | "user-level" => SweepParam::UserLevel,
            _ => return Err(bad("unknown parameter")),
        };
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad("not a number"));
        let values = if let Some((a, rest)) = spec.split_once("..") {
            let (b, step) = match rest.split_once(':') {
                Some((b, st)) => (num(b)?, Some(num(st)?)),
                None => (num(rest)?, None),
            };
            let a = num(a)?;
            if a == 0 || a > b || step == Some(0) {
                return Err(bad("empty range"));
            }
            let mut v = Vec::new();
            let mut x = a;
            while x <= b {
                v.push(x);
                x = match step {
                    Some(st) => x + st,
                    None => x * 2,
                };
            }
            v
        } else {
            spec.split(',').map(num).collect::<Result<Vec<_>>>()?
        };
        if values.is_empty() {
            return Err(bad("no values"));
        }
        Ok(Sweep { param, values })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BenchConfig {
    pub algorithms: Vec<String>,
    pub sweep: Option<String>,
    pub similarity: String,
    /// Run sweep points side by side. Timings then share the machine.
    pub concurrent_points: bool,
    pub synthetic: SyntheticConfig,
    pub params: RunParams,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            algorithms: vec!["bsl-bnl".into(), "bsl-sfs".into(), "bsl-bbs".into(), "ind".into()],
            sweep: None,
            similarity: "jaccard".into(),
            concurrent_points: false,
            synthetic: SyntheticConfig {
                objects: 20_000,
                ..SyntheticConfig::default()
            },
            params: RunParams::default(),
        }
    }
}

impl BenchConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| WorkbenchError::Config(format!("bench config: {e}")))
    }
}

/// Runs every algorithm at every sweep point; rows come out point by point,
/// algorithms in config order.
pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<RunReport>> {
    let algs = cfg
        .algorithms
        .iter()
        .map(|a| a.parse::<Algorithm>())
        .collect::<Result<Vec<_>>>()?;
    let sim = Similarity::parse(&cfg.similarity)
        .ok_or_else(|| WorkbenchError::Config(format!("unknown similarity `{}`", cfg.similarity)))?;
    let points: Vec<SyntheticConfig> = match &cfg.sweep {
        None => vec![cfg.synthetic.clone()],
        Some(s) => {
            let sw: Sweep = s.parse()?;
            sw.values
                .iter()
                .map(|&v| {
                    let mut c = cfg.synthetic.clone();
                    sw.param.apply(&mut c, v);
                    c
                })
                .collect()
        }
    };
    for p in &points {
        p.validate()?;
    }
    let mode = if cfg.concurrent_points {
        Parallelism::Parallel
    } else {
        Parallelism::Sequential
    };
    let per_point = map_indexed(mode, points.len(), |i| -> Result<Vec<RunReport>> {
        let sc = &points[i];
        let problem = gen_synthetic(sc)?.into_problem(sim.clone());
        let mut ds = Dataset::new(format!("synthetic:o={},d={},u={},h={}", sc.objects, sc.attributes, sc.users, sc.height), problem, Some(sc.seed));
        algs.iter().map(|&a| run_experiment(&mut ds, a, &cfg.params)).collect()
    });
    let mut out = Vec::new();
    for r in per_point {
        out.extend(r?);
    }
    Ok(out)
}
