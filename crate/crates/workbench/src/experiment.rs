//! One algorithm over one dataset, with counters and timing.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use gmco_core::dominance::{brute_force_cm, brute_force_pcm, Counters, DominanceConfig, Percent};
use gmco_core::model::Problem;
use gmco_core::par::Parallelism;
use gmco_core::ranking::{rank_cm, strategy_rank, Strategy, StrategySpec};
use gmco_core::skyline::{bsl_table, p_bsl_table, BslConfig, Inner};
use gmco_core::spatial::{ind, p_ind, page_fanout, BuildMethod, IndConfig, IndexConfig, ObjectIndex};
use serde::{Deserialize, Serialize};

use crate::{Result, WorkbenchError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Bsl(Inner),
    PBsl(Inner),
    Ind,
    PInd,
    BruteForce,
    PBruteForce,
    RankCm,
    Strategy(Strategy),
}

impl Algorithm {
    /// Every algorithm, with each strategy listed once.
    pub fn all() -> Vec<Algorithm> {
        let inner = [Inner::Bnl, Inner::Sfs, Inner::Bbs];
        let mut v: Vec<Algorithm> = inner.iter().map(|&i| Algorithm::Bsl(i)).collect();
        v.push(Algorithm::Ind);
        v.extend(inner.iter().map(|&i| Algorithm::PBsl(i)));
        v.extend([Algorithm::PInd, Algorithm::BruteForce, Algorithm::PBruteForce, Algorithm::RankCm]);
        v.extend(Strategy::ALL.iter().map(|&s| Algorithm::Strategy(s)));
        v
    }

    pub fn is_relaxed(self) -> bool {
        matches!(self, Algorithm::PBsl(_) | Algorithm::PInd | Algorithm::PBruteForce)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Algorithm::Bsl(i) => write!(f, "bsl-{i}"),
            Algorithm::PBsl(i) => write!(f, "p-bsl-{i}"),
            Algorithm::Ind => f.write_str("ind"),
            Algorithm::PInd => f.write_str("p-ind"),
            Algorithm::BruteForce => f.write_str("brute-force"),
            Algorithm::PBruteForce => f.write_str("p-brute-force"),
            Algorithm::RankCm => f.write_str("rank-cm"),
            Algorithm::Strategy(s) => write!(f, "strategy:{s}"),
        }
    }
}

impl FromStr for Algorithm {
    type Err = WorkbenchError;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        let unknown = || WorkbenchError::UnknownAlgorithm(s.to_string());
        if let Some(name) = t.strip_prefix("strategy:") {
            return name.parse().map(Algorithm::Strategy).map_err(|_| unknown());
        }
        Ok(match t.as_str() {
            "ind" => Algorithm::Ind,
            "p-ind" => Algorithm::PInd,
            "brute-force" => Algorithm::BruteForce,
            "p-brute-force" => Algorithm::PBruteForce,
            "rank-cm" => Algorithm::RankCm,
            "bsl" => Algorithm::Bsl(Inner::Bnl),
            "p-bsl" => Algorithm::PBsl(Inner::Bnl),
            _ => {
                if let Some(i) = t.strip_prefix("p-bsl-") {
                    Algorithm::PBsl(i.parse().map_err(|_| unknown())?)
                } else if let Some(i) = t.strip_prefix("bsl-") {
                    Algorithm::Bsl(i.parse().map_err(|_| unknown())?)
                } else {
                    return Err(unknown());
                }
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunParams {
    /// p for the relaxed variants.
    pub percent: f64,
    /// Index fanout; `None` fills one page per node.
    pub capacity: Option<usize>,
    /// `str` or `rstar`.
    pub build: String,
    /// Attributes to index; `None` indexes all of them.
    pub indexed: Option<Vec<usize>>,
    pub prune: bool,
    /// BNL window in records.
    pub window: usize,
    /// Threshold for AVG_MISERY and APPROVAL.
    pub threshold: f64,
    pub sequential: bool,
    /// Timed repetitions; counters come from the first.
    pub runs: usize,
}

impl Default for RunParams {
    fn default() -> Self {
        RunParams {
            percent: 60.0,
            capacity: None,
            build: "str".into(),
            indexed: None,
            prune: true,
            window: BslConfig::default().window,
            threshold: 0.5,
            sequential: false,
            runs: 1,
        }
    }
}

impl RunParams {
    pub fn parallelism(&self) -> Parallelism {
        if self.sequential {
            Parallelism::Sequential
        } else {
            Parallelism::Parallel
        }
    }

    pub fn percent(&self) -> Result<Percent> {
        Ok(Percent::new(self.percent)?)
    }

    pub fn index_config(&self, p: &Problem) -> Result<IndexConfig> {
        let method = match self.build.to_ascii_lowercase().as_str() {
            "str" => BuildMethod::Str,
            "rstar" | "r*" => BuildMethod::RStar,
            b => return Err(WorkbenchError::Config(format!("unknown index build `{b}`"))),
        };
        let width = self.indexed.as_ref().map_or(p.dims(), Vec::len);
        Ok(IndexConfig {
            capacity: self.capacity.unwrap_or_else(|| page_fanout(width, p.domain.objective().len())),
            method,
            indexed: self.indexed.clone(),
        })
    }

    pub fn bsl_config(&self, inner: Inner) -> BslConfig {
        BslConfig {
            inner,
            window: self.window,
            parallelism: self.parallelism(),
            ..BslConfig::default()
        }
    }

    /// Compact `key=value` echo of the settings.
    pub fn echo(&self) -> String {
        let mut s = format!(
            "percent={};build={};prune={};window={};threshold={};runs={}",
            self.percent, self.build, self.prune, self.window, self.threshold, self.runs
        );
        if let Some(c) = self.capacity {
            s.push_str(&format!(";capacity={c}"));
        }
        if let Some(ix) = &self.indexed {
            let v: Vec<String> = ix.iter().map(usize::to_string).collect();
            s.push_str(&format!(";indexed={}", v.join(" ")));
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub algorithm: String,
    pub dataset: String,
    pub seed: Option<u64>,
    pub objects: usize,
    pub users: usize,
    pub attributes: usize,
    pub params: String,
    pub io_reads: u64,
    pub dominance_checks: u64,
    pub result_size: usize,
    /// Mean over the runs, in milliseconds.
    pub wall_time_ms: f64,
    /// Result ids in output order.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub result: Vec<String>,
}

/// A loaded dataset, with its index built on first use.
pub struct Dataset {
    pub name: String,
    pub seed: Option<u64>,
    pub problem: Problem,
    /// The config is `None` for an index supplied from outside, which is
    /// then used for every run.
    index: Option<(Option<IndexConfig>, ObjectIndex)>,
}

impl Dataset {
    pub fn new(name: impl Into<String>, problem: Problem, seed: Option<u64>) -> Self {
        Dataset {
            name: name.into(),
            seed,
            problem,
            index: None,
        }
    }

    /// Uses a prebuilt index, for example one loaded from a dump.
    pub fn with_index(mut self, index: ObjectIndex) -> Result<Self> {
        if index.objects() != self.problem.objects.len() || index.dims() != self.problem.dims() {
            return Err(WorkbenchError::Config(format!(
                "index covers {} objects over {} attributes, dataset has {} over {}",
                index.objects(),
                index.dims(),
                self.problem.objects.len(),
                self.problem.dims()
            )));
        }
        self.index = Some((None, index));
        Ok(self)
    }

    /// The index for `cfg`, built off the clock when missing.
    pub fn index(&mut self, cfg: &IndexConfig) -> Result<&ObjectIndex> {
        let stale = match &self.index {
            Some((None, _)) => false,
            Some((Some(c), _)) => c != cfg,
            None => true,
        };
        if stale {
            let t = ObjectIndex::build(&self.problem, cfg)?;
            self.index = Some((Some(cfg.clone()), t));
        }
        Ok(&self.index.as_ref().unwrap().1)
    }
}

struct Outcome {
    counters: Counters,
    result: Vec<String>,
    size: usize,
}

fn once(p: &Problem, index: Option<&ObjectIndex>, alg: Algorithm, params: &RunParams) -> Result<Outcome> {
    let mode = params.parallelism();
    let ind_cfg = IndConfig {
        prune: params.prune,
        ..IndConfig::default()
    };
    let ids = |v: &[usize]| p.ids(v);
    let set = |counters, v: Vec<usize>| Outcome {
        counters,
        size: v.len(),
        result: ids(&v),
    };
    Ok(match alg {
        Algorithm::Bsl(inner) => {
            let t = p.degree_table(mode);
            let r = bsl_table(&t, &params.bsl_config(inner));
            set(r.counters, r.cm)
        }
        Algorithm::PBsl(inner) => {
            let t = p.degree_table(mode);
            let r = p_bsl_table(&t, params.percent()?, &params.bsl_config(inner));
            set(r.counters, r.pcm)
        }
        Algorithm::Ind | Algorithm::PInd => {
            let pct = params.percent()?;
            let t = index.expect("index prepared before the clock starts");
            let r = if alg == Algorithm::Ind {
                ind(t, p, &ind_cfg)
            } else {
                p_ind(t, p, pct, &ind_cfg)
            };
            let v = if alg == Algorithm::Ind { r.cm } else { r.pcm };
            Outcome {
                counters: r.counters,
                size: v.len(),
                result: p.ids(&v),
            }
        }
        Algorithm::BruteForce | Algorithm::PBruteForce => {
            let t = p.degree_table(mode);
            let dc = DominanceConfig::for_table(&t);
            let v = if alg == Algorithm::BruteForce {
                brute_force_cm(&t, dc)
            } else {
                brute_force_pcm(&t, params.percent()?, dc)
            };
            set(Counters::default(), v)
        }
        Algorithm::RankCm => {
            let t = p.degree_table(mode);
            let r = bsl_table(&t, &params.bsl_config(Inner::Bnl));
            let ranks = rank_cm(&t, &r.cm, DominanceConfig::for_table(&t), mode);
            let order: Vec<usize> = ranks
                .order_by(|o| p.objects[o].id.clone())
                .into_iter()
                .filter(|&o| ranks.is_collectively_maximal(o))
                .collect();
            Outcome {
                counters: r.counters,
                size: order.len(),
                result: order.iter().map(|&o| format!("{}:{}", ranks.ranks[o], p.objects[o].id)).collect(),
            }
        }
        Algorithm::Strategy(s) => {
            let t = p.degree_table(mode);
            let spec = StrategySpec {
                strategy: s,
                threshold: params.threshold,
            };
            let all_ids: Vec<String> = p.objects.iter().map(|o| o.id.clone()).collect();
            let order = strategy_rank(&t, spec, &all_ids, mode);
            set(Counters::default(), order)
        }
    })
}

/// Runs `alg` `params.runs` times and reports the mean wall time. Index
/// construction is offline and neither timed nor counted.
pub fn run_experiment(ds: &mut Dataset, alg: Algorithm, params: &RunParams) -> Result<RunReport> {
    let index = if matches!(alg, Algorithm::Ind | Algorithm::PInd) {
        let cfg = params.index_config(&ds.problem)?;
        ds.index(&cfg)?;
        ds.index.as_ref().map(|(_, t)| t)
    } else {
        None
    };
    let runs = params.runs.max(1);
    let mut first = None;
    let mut total = 0.0;
    for _ in 0..runs {
        let start = Instant::now();
        let out = once(&ds.problem, index, alg, params)?;
        total += start.elapsed().as_secs_f64() * 1e3;
        first.get_or_insert(out);
    }
    let out = first.unwrap();
    let p = &ds.problem;
    Ok(RunReport {
        algorithm: alg.to_string(),
        dataset: ds.name.clone(),
        seed: ds.seed,
        objects: p.objects.len(),
        users: p.users.len(),
        attributes: p.dims(),
        params: params.echo(),
        io_reads: out.counters.io_reads,
        dominance_checks: out.counters.dominance_checks,
        result_size: out.size,
        wall_time_ms: total / runs as f64,
        result: out.result,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use gmco_core::fixtures;

    fn example() -> Dataset {
        Dataset::new("running-example", fixtures::running_example(), None)
    }

    #[test]
    fn names_round_trip() {
        for a in Algorithm::all() {
            assert_eq!(a.to_string().parse::<Algorithm>().unwrap(), a);
        }
        assert_eq!("BSL-SFS".parse::<Algorithm>().unwrap(), Algorithm::Bsl(Inner::Sfs));
        assert!("bsl-quick".parse::<Algorithm>().is_err());
        assert!("strategy:median".parse::<Algorithm>().is_err());
    }

    #[test]
    fn ind_and_bnl_agree_on_running_example() {
        let mut ds = example();
        let params = RunParams::default();
        let a = run_experiment(&mut ds, Algorithm::Ind, &params).unwrap();
        assert_eq!(a.result, vec!["o1", "o2"]);
        assert!(a.io_reads > 0 && a.dominance_checks > 0);
        let b = run_experiment(&mut ds, Algorithm::Bsl(Inner::Bnl), &params).unwrap();
        assert_eq!(b.result, a.result);
        let pr = run_experiment(&mut ds, Algorithm::PInd, &params).unwrap();
        assert_eq!(pr.result, vec!["o2"]);
    }

    #[test]
    fn every_algorithm_runs() {
        let mut ds = example();
        for a in Algorithm::all() {
            let r = run_experiment(&mut ds, a, &RunParams::default()).unwrap();
            assert_eq!(r.algorithm, a.to_string());
        }
        let r = run_experiment(&mut ds, Algorithm::RankCm, &RunParams::default()).unwrap();
        assert_eq!(r.result, vec!["2:o2", "3:o1"]);
    }

    #[test]
    fn counters_repeat() {
        let mut ds = example();
        let params = RunParams { runs: 3, ..RunParams::default() };
        for a in [Algorithm::Ind, Algorithm::Bsl(Inner::Bbs)] {
            let x = run_experiment(&mut ds, a, &params).unwrap();
            let y = run_experiment(&mut ds, a, &params).unwrap();
            assert_eq!((x.io_reads, x.dominance_checks), (y.io_reads, y.dominance_checks));
        }
    }
}
