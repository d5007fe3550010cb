//! List quality of the aggregation strategies and RANK-CM against a
//! ground-truth ranking.

use gmco_core::dominance::DominanceConfig;
use gmco_core::model::Problem;
use gmco_core::par::Parallelism;
use gmco_core::ranking::{precision_at_k, rank_table, spearman_footrule, strategy_rank, Strategy, StrategySpec};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::report::EvalRow;
use crate::{Result, WorkbenchError};

pub const RANK_CM: &str = "RANK-CM";

#[derive(Debug, Clone, PartialEq)]
pub struct EvalConfig {
    pub group_sizes: Vec<usize>,
    pub ks: Vec<usize>,
    /// Random groups drawn per size; metrics are averaged over them.
    pub groups: usize,
    pub seed: u64,
    pub threshold: f64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            group_sizes: vec![2, 4, 8],
            ks: vec![3, 5, 10],
            groups: 10,
            seed: 1,
            threshold: 0.5,
        }
    }
}

/// Method names in report order.
pub fn methods() -> Vec<String> {
    let mut v: Vec<String> = Strategy::ALL.iter().map(|s| s.name().to_string()).collect();
    v.push(RANK_CM.to_string());
    v
}

/// One row per (method, group size, k). RANK-CM lists objects by rank, ties
/// by id.
pub fn evaluate(p: &Problem, truth: &[String], cfg: &EvalConfig) -> Result<Vec<EvalRow>> {
    let users = p.users.len();
    if let Some(&g) = cfg.group_sizes.iter().find(|&&g| g == 0 || g > users) {
        return Err(WorkbenchError::Config(format!("group size {g} outside 1..={users}")));
    }
    if cfg.ks.contains(&0) || cfg.groups == 0 {
        return Err(WorkbenchError::Config("k and groups must be positive".into()));
    }
    let ids: Vec<String> = p.objects.iter().map(|o| o.id.clone()).collect();
    let full = p.degree_table(Parallelism::Sequential);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let names = methods();
    let mut rows = Vec::new();
    for &g in &cfg.group_sizes {
        // sums[method][k] = (precision, footrule, footrule count)
        let mut sums = vec![vec![(0.0, 0.0, 0usize); cfg.ks.len()]; names.len()];
        for _ in 0..cfg.groups {
            let mut members = sample(&mut rng, users, g).into_vec();
            members.sort_unstable();
            let t = full.select_users(&members);
            let mut lists: Vec<Vec<String>> = Strategy::ALL
                .iter()
                .map(|&s| {
                    let spec = StrategySpec {
                        strategy: s,
                        threshold: cfg.threshold,
                    };
                    strategy_rank(&t, spec, &ids, Parallelism::Sequential)
                        .into_iter()
                        .map(|o| ids[o].clone())
                        .collect()
                })
                .collect();
            let r = rank_table(&t, DominanceConfig::for_table(&t), Parallelism::Sequential);
            lists.push(r.order_by(|o| ids[o].clone()).into_iter().map(|o| ids[o].clone()).collect());
            for (m, list) in lists.iter().enumerate() {
                for (j, &k) in cfg.ks.iter().enumerate() {
                    let s = &mut sums[m][j];
                    s.0 += precision_at_k(list, truth, k);
                    if let Some(f) = spearman_footrule(list, truth, k) {
                        s.1 += f;
                        s.2 += 1;
                    }
                }
            }
        }
        for (m, name) in names.iter().enumerate() {
            for (j, &k) in cfg.ks.iter().enumerate() {
                let (pr, fr, n) = sums[m][j];
                rows.push(EvalRow {
                    strategy: name.clone(),
                    group_size: g,
                    k,
                    precision: pr / cfg.groups as f64,
                    footrule: (n > 0).then(|| fr / n as f64),
                });
            }
        }
    }
    Ok(rows)
}
