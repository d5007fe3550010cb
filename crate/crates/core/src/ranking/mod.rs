//! Tier ranking of the collectively maximal objects, baseline aggregation
//! strategies, list metrics and the fairness property suites.

pub mod axioms;
mod metrics;
mod strategy;

pub use metrics::{precision_at_k, spearman_footrule};
pub use strategy::{strategy_rank, strategy_scores, Strategy, StrategySpec};

use crate::dominance::{brute_force_cm, Comparator, DominanceConfig};
use crate::model::DegreeTable;
use crate::par::{map_indexed, Parallelism};

/// Rank of every object: 1 is best, `users + 1` marks objects outside CM.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankResult {
    pub users: usize,
    pub ranks: Vec<usize>,
}

impl RankResult {
    /// Non-empty tiers in ascending rank, members in index order.
    pub fn tiers(&self) -> Vec<(usize, Vec<usize>)> {
        let mut out: Vec<(usize, Vec<usize>)> = Vec::new();
        let mut idx: Vec<usize> = (0..self.ranks.len()).collect();
        idx.sort_by_key(|&o| (self.ranks[o], o));
        for o in idx {
            match out.last_mut() {
                Some((r, v)) if *r == self.ranks[o] => v.push(o),
                _ => out.push((self.ranks[o], vec![o])),
            }
        }
        out
    }

    /// Objects by ascending rank; ties broken by `tie(o)` ascending.
    pub fn order_by<K: Ord>(&self, tie: impl Fn(usize) -> K) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.ranks.len()).collect();
        idx.sort_by_key(|&o| (self.ranks[o], tie(o)));
        idx
    }

    pub fn is_collectively_maximal(&self, o: usize) -> bool {
        self.ranks[o] <= self.users
    }
}

/// Ranks the members of `cm` (which must be the collectively maximal set of
/// `table`) by raising each one's rank while some rival stays p-collectively
/// preferred at the current user threshold.
pub fn rank_cm(table: &DegreeTable, cm: &[usize], cfg: DominanceConfig, mode: Parallelism) -> RankResult {
    let users = table.users();
    let mut ranks = vec![users + 1; table.objects()];
    let cm_ranks = map_indexed(mode, cm.len(), |i| {
        let c = Comparator::new(table, cfg);
        let oi = cm[i];
        let mut rank = 1;
        for &oj in cm {
            if oj == oi {
                continue;
            }
            let mut tau = rank;
            while tau < users {
                if c.p_collective(table.profile(oj), table.profile(oi), tau) {
                    rank = tau + 1;
                } else {
                    break;
                }
                tau += 1;
            }
        }
        rank
    });
    for (&o, r) in cm.iter().zip(cm_ranks) {
        ranks[o] = r;
    }
    RankResult { users, ranks }
}

/// CM by brute force, then [`rank_cm`].
pub fn rank_table(table: &DegreeTable, cfg: DominanceConfig, mode: Parallelism) -> RankResult {
    let cm = brute_force_cm(table, cfg);
    rank_cm(table, &cm, cfg, mode)
}

/// The rank straight from its definition: the smallest `tau` such that the
/// object is p-collectively maximal at every user threshold `k >= tau`.
/// Rivals range over all objects, not only CM.
pub fn rank_oracle(table: &DegreeTable, cfg: DominanceConfig) -> RankResult {
    let users = table.users();
    let c = Comparator::new(table, cfg);
    let n = table.objects();
    let ranks = (0..n)
        .map(|b| {
            let beaten_at = |k: usize| (0..n).any(|a| a != b && c.p_collective(table.profile(a), table.profile(b), k));
            if beaten_at(users) {
                return users + 1;
            }
            (1..=users).find(|&tau| (tau..=users).all(|k| !beaten_at(k))).unwrap_or(users + 1)
        })
        .collect();
    RankResult { users, ranks }
}
