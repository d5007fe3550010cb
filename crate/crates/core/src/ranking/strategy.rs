use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::DegreeTable;
use crate::par::{map_indexed, Parallelism};

/// Score-based group aggregation over per-user scalars. A user's scalar for
/// an object is the mean degree over the attributes the user specified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    Add,
    Mult,
    Misery,
    Pleasure,
    AvgMisery,
    AvgMiseryPlus,
    Copeland,
    Approval,
    Borda,
}

impl Strategy {
    pub const ALL: [Strategy; 9] = [
        Strategy::Add,
        Strategy::Mult,
        Strategy::Misery,
        Strategy::Pleasure,
        Strategy::AvgMisery,
        Strategy::AvgMiseryPlus,
        Strategy::Copeland,
        Strategy::Approval,
        Strategy::Borda,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Add => "ADD",
            Strategy::Mult => "MULT",
            Strategy::Misery => "MISERY",
            Strategy::Pleasure => "PLEASURE",
            Strategy::AvgMisery => "AVG_MISERY",
            Strategy::AvgMiseryPlus => "AVG_MISERY+",
            Strategy::Copeland => "COPELAND",
            Strategy::Approval => "APPROVAL",
            Strategy::Borda => "BORDA",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let up = s.trim().to_ascii_uppercase().replace('-', "_");
        let up = match up.as_str() {
            "AVG_MISERY_PLUS" => "AVG_MISERY+".to_string(),
            _ => up,
        };
        Strategy::ALL
            .into_iter()
            .find(|x| x.name() == up)
            .ok_or_else(|| Error::Config(format!("unknown strategy `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrategySpec {
    pub strategy: Strategy,
    /// Used by AVG_MISERY and APPROVAL.
    pub threshold: f64,
}

impl StrategySpec {
    pub fn new(strategy: Strategy) -> Self {
        StrategySpec {
            strategy,
            threshold: 0.5,
        }
    }
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (s, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    if n == 0 {
        0.0
    } else {
        s / n as f64
    }
}

/// Borda points of every object for one user: 0 for the lowest scalar,
/// tied scalars share the mean of their positions.
fn borda_points(scalars: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..scalars.len()).collect();
    idx.sort_by(|&a, &b| scalars[a].total_cmp(&scalars[b]));
    let mut pts = vec![0.0; scalars.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && scalars[idx[j + 1]] == scalars[idx[i]] {
            j += 1;
        }
        let p = (i + j) as f64 / 2.0;
        for &o in &idx[i..=j] {
            pts[o] = p;
        }
        i = j + 1;
    }
    pts
}

/// Aggregate score of every object; higher is better.
pub fn strategy_scores(t: &DegreeTable, spec: StrategySpec, mode: Parallelism) -> Vec<f64> {
    let (n, users) = (t.objects(), t.users());
    // scalars[o][u]
    let s: Vec<Vec<f64>> = map_indexed(mode, n, |o| (0..users).map(|u| t.user_score(o, u)).collect());
    let th = spec.threshold;
    match spec.strategy {
        Strategy::Add => s.iter().map(|r| r.iter().sum()).collect(),
        Strategy::Mult => s.iter().map(|r| r.iter().product()).collect(),
        Strategy::Misery => s.iter().map(|r| r.iter().copied().fold(f64::INFINITY, f64::min)).collect(),
        Strategy::Pleasure => s.iter().map(|r| r.iter().copied().fold(f64::NEG_INFINITY, f64::max)).collect(),
        Strategy::AvgMisery => s.iter().map(|r| mean(r.iter().copied().filter(|&x| x >= th))).collect(),
        Strategy::AvgMiseryPlus => s
            .iter()
            .map(|r| {
                let lo = r.iter().copied().fold(f64::INFINITY, f64::min);
                mean(r.iter().copied().filter(|&x| x >= lo))
            })
            .collect(),
        Strategy::Approval => s.iter().map(|r| r.iter().filter(|&&x| x >= th).count() as f64).collect(),
        Strategy::Copeland => map_indexed(mode, n, |a| {
            let mut score = 0i64;
            for b in 0..n {
                if a == b {
                    continue;
                }
                let (mut win, mut lose) = (0, 0);
                for u in 0..users {
                    if s[a][u] > s[b][u] {
                        win += 1;
                    } else if s[a][u] < s[b][u] {
                        lose += 1;
                    }
                }
                score += (win > lose) as i64 - (win < lose) as i64;
            }
            score as f64
        }),
        Strategy::Borda => {
            let mut total = vec![0.0; n];
            for u in 0..users {
                let col: Vec<f64> = s.iter().map(|r| r[u]).collect();
                for (x, p) in total.iter_mut().zip(borda_points(&col)) {
                    *x += p;
                }
            }
            total
        }
    }
}

/// Objects by descending score, ties by ascending `ids`.
pub fn strategy_rank(t: &DegreeTable, spec: StrategySpec, ids: &[String], mode: Parallelism) -> Vec<usize> {
    let sc = strategy_scores(t, spec, mode);
    let mut idx: Vec<usize> = (0..t.objects()).collect();
    idx.sort_by(|&a, &b| sc[b].total_cmp(&sc[a]).then_with(|| ids[a].cmp(&ids[b])));
    idx
}
