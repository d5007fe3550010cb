//! Randomised checks of the fairness properties of the tier ranking. Each
//! trial builds a degree table directly, applies the change the property
//! talks about and compares ranks before and after.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{rank_table, RankResult};
use crate::dominance::{Comparator, DominanceConfig};
use crate::generate::random_table;
use crate::model::DegreeTable;
use crate::par::{map_indexed, Parallelism};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axiom {
    Majority,
    Anonymity,
    IrrelevantAlternatives,
    Clones,
    Monotonicity,
    Participation,
    Resolvability,
    Neutrality,
}

impl Axiom {
    pub const ALL: [Axiom; 8] = [
        Axiom::Majority,
        Axiom::Anonymity,
        Axiom::IrrelevantAlternatives,
        Axiom::Clones,
        Axiom::Monotonicity,
        Axiom::Participation,
        Axiom::Resolvability,
        Axiom::Neutrality,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::Majority => "majority",
            Axiom::Anonymity => "anonymity",
            Axiom::IrrelevantAlternatives => "irrelevant-alternatives",
            Axiom::Clones => "clones",
            Axiom::Monotonicity => "monotonicity",
            Axiom::Participation => "participation",
            Axiom::Resolvability => "resolvability",
            Axiom::Neutrality => "neutrality",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomConfig {
    pub trials: usize,
    pub seed: u64,
    pub max_objects: usize,
    pub max_users: usize,
    pub dims: usize,
    /// Degrees are drawn from multiples of `1/steps`.
    pub steps: u32,
    pub parallelism: Parallelism,
}

impl Default for AxiomConfig {
    fn default() -> Self {
        AxiomConfig {
            trials: 1000,
            seed: 0,
            max_objects: 12,
            max_users: 6,
            dims: 3,
            steps: 4,
            parallelism: Parallelism::Parallel,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomOutcome {
    pub axiom: Axiom,
    pub trials: usize,
    /// Seeds of the failing trials; pass one to [`check`] to reproduce.
    pub failures: Vec<u64>,
}

impl AxiomOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn trial_seed(cfg: &AxiomConfig, axiom: Axiom, trial: usize) -> u64 {
    let a = Axiom::ALL.iter().position(|&x| x == axiom).unwrap() as u64;
    cfg.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (a << 40) ^ trial as u64
}

pub fn axiom_suite(cfg: &AxiomConfig) -> Vec<AxiomOutcome> {
    Axiom::ALL.iter().map(|&a| run_axiom(cfg, a)).collect()
}

pub fn run_axiom(cfg: &AxiomConfig, axiom: Axiom) -> AxiomOutcome {
    let ok = map_indexed(cfg.parallelism, cfg.trials, |i| {
        let seed = trial_seed(cfg, axiom, i);
        (seed, check(cfg, axiom, seed))
    });
    AxiomOutcome {
        axiom,
        trials: cfg.trials,
        failures: ok.into_iter().filter(|(_, ok)| !ok).map(|(s, _)| s).collect(),
    }
}

fn ranks(t: &DegreeTable) -> RankResult {
    rank_table(t, DominanceConfig::default(), Parallelism::Sequential)
}

struct Gen {
    rng: ChaCha8Rng,
    steps: u32,
    dims: usize,
}

impl Gen {
    fn table(&mut self, objects: usize, users: usize) -> DegreeTable {
        random_table(&mut self.rng, objects, users, self.dims, self.steps)
    }

    fn below_top(&self) -> f64 {
        (self.steps - 1) as f64 / self.steps as f64
    }

    /// User `u` strictly prefers `a` to every other object.
    fn favour(&self, t: &mut DegreeTable, u: usize, a: usize) {
        let spec = t.specified(u).to_vec();
        let cap = self.below_top();
        for o in 0..t.objects() {
            let v = t.vector_mut(o, u);
            for &k in &spec {
                v[k] = if o == a { 1.0 } else { v[k].min(cap) };
            }
        }
    }

    /// Row of `like` with one positive specified degree lowered a step, so
    /// that `like` collectively beats it. `None` if every degree is 0.
    fn worse_copy(&mut self, t: &DegreeTable, like: usize) -> Option<Vec<f64>> {
        let mut slots = Vec::new();
        for u in 0..t.users() {
            for &k in t.specified(u) {
                if t.vector(like, u)[k] > 0.0 {
                    slots.push((u, k));
                }
            }
        }
        let &(u, k) = slots.choose(&mut self.rng)?;
        let mut row = t.profile(like).degrees.to_vec();
        let step = 1.0 / self.steps as f64;
        let at = u * t.dims() + k;
        row[at] = (row[at] - step).max(0.0);
        Some(row)
    }

    fn user_row(&mut self, dims: usize) -> Vec<usize> {
        let mut s: Vec<usize> = (0..dims).filter(|_| self.rng.gen_bool(0.7)).collect();
        if s.is_empty() {
            s.push(self.rng.gen_range(0..dims));
        }
        s
    }
}

/// One trial; `true` when the property held.
pub fn check(cfg: &AxiomConfig, axiom: Axiom, seed: u64) -> bool {
    let mut g = Gen {
        rng: ChaCha8Rng::seed_from_u64(seed),
        steps: cfg.steps.max(2),
        dims: cfg.dims.max(1),
    };
    let n = g.rng.gen_range(2..=cfg.max_objects.max(2));
    let users = g.rng.gen_range(1..=cfg.max_users.max(1));
    match axiom {
        Axiom::Majority => {
            let mut t = g.table(n, users);
            let a = g.rng.gen_range(0..n);
            let mut us: Vec<usize> = (0..users).collect();
            us.shuffle(&mut g.rng);
            let k = g.rng.gen_range(users / 2 + 1..=users);
            for &u in &us[..k] {
                g.favour(&mut t, u, a);
            }
            let r = ranks(&t);
            (0..n).all(|b| b == a || r.ranks[a] < r.ranks[b])
        }
        Axiom::Anonymity => {
            let t = g.table(n, users);
            let mut perm: Vec<usize> = (0..users).collect();
            perm.shuffle(&mut g.rng);
            ranks(&t) == ranks(&t.select_users(&perm))
        }
        Axiom::IrrelevantAlternatives => {
            let t = g.table(n, users);
            let r = ranks(&t);
            // drop some objects outside CM
            let keep: Vec<usize> = (0..n)
                .filter(|&o| r.is_collectively_maximal(o) || g.rng.gen_bool(0.5))
                .collect();
            let r2 = ranks(&t.select_objects(&keep));
            if keep.iter().zip(&r2.ranks).any(|(&o, &x)| r.ranks[o] != x) {
                return false;
            }
            // and add some dominated ones
            let mut t3 = t.clone();
            for _ in 0..g.rng.gen_range(1..=3) {
                let like = g.rng.gen_range(0..n);
                if let Some(row) = g.worse_copy(&t, like) {
                    t3.push_object(&row, &[]);
                }
            }
            ranks(&t3).ranks[..n] == r.ranks[..]
        }
        Axiom::Clones => {
            let t = g.table(n, users);
            let r = ranks(&t);
            let cm: Vec<usize> = (0..n).filter(|&o| r.is_collectively_maximal(o)).collect();
            let x = *cm.choose(&mut g.rng).expect("CM is never empty");
            let mut t2 = t.clone();
            for _ in 0..g.rng.gen_range(1..=3) {
                if let Some(row) = g.worse_copy(&t, x) {
                    t2.push_object(&row, &[]);
                }
            }
            ranks(&t2).ranks[..n] == r.ranks[..]
        }
        Axiom::Monotonicity => {
            let t = g.table(n, users);
            let r = ranks(&t);
            let a = g.rng.gen_range(0..n);
            let u = g.rng.gen_range(0..users);
            let spec = t.specified(u).to_vec();
            let open: Vec<usize> = spec.iter().copied().filter(|&k| t.vector(a, u)[k] < 1.0).collect();
            let Some(&up) = open.choose(&mut g.rng) else {
                return true;
            };
            let mut t2 = t.clone();
            let steps = g.steps;
            for &k in &spec {
                let cur = (t.vector(a, u)[k] * steps as f64).round() as u32;
                let lo = if k == up { cur + 1 } else { cur };
                let v = g.rng.gen_range(lo..=steps) as f64 / steps as f64;
                t2.vector_mut(a, u)[k] = v;
            }
            let r2 = ranks(&t2);
            r2.ranks[a] <= r.ranks[a]
                && (0..n).all(|b| b == a || r2.ranks[b] >= r.ranks[b])
                && (0..n).all(|b| r.ranks[a] >= r.ranks[b] || r2.ranks[a] < r2.ranks[b])
        }
        Axiom::Participation => {
            let t = g.table(n, users);
            let r = ranks(&t);
            let a = g.rng.gen_range(0..n);
            let mut t2 = t.clone();
            let dims = t.dims();
            let cap = g.below_top();
            let steps = g.steps;
            for _ in 0..g.rng.gen_range(1..=2) {
                let spec = g.user_row(dims);
                let rows: Vec<Vec<f64>> = (0..n)
                    .map(|o| {
                        (0..dims)
                            .map(|k| {
                                if o == a || !spec.contains(&k) {
                                    1.0
                                } else {
                                    (g.rng.gen_range(0..=steps) as f64 / steps as f64).min(cap)
                                }
                            })
                            .collect()
                    })
                    .collect();
                t2.push_user(spec, |o| rows[o].clone());
            }
            let r2 = ranks(&t2);
            (0..n).all(|b| r.ranks[a] >= r.ranks[b] || r2.ranks[a] < r2.ranks[b])
        }
        Axiom::Resolvability => {
            let mut t = g.table(n, 4);
            let mut pair: Vec<usize> = (0..n).collect();
            pair.shuffle(&mut g.rng);
            let (a, b) = (pair[0], pair[1]);
            g.favour(&mut t, 0, a);
            g.favour(&mut t, 1, a);
            g.favour(&mut t, 2, b);
            g.favour(&mut t, 3, b);
            let r = ranks(&t);
            if (r.ranks[a], r.ranks[b]) != (3, 3) {
                return false;
            }
            let spec = g.user_row(t.dims());
            let dims = t.dims();
            t.push_user(spec, |_| vec![1.0; dims]);
            g.favour(&mut t, 4, a);
            let r2 = ranks(&t);
            (r2.ranks[a], r2.ranks[b]) == (3, 4)
        }
        Axiom::Neutrality => {
            let t = g.table(n, users);
            let r = ranks(&t);
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut g.rng);
            let r2 = ranks(&t.select_objects(&perm));
            if perm.iter().zip(&r2.ranks).any(|(&o, &x)| r.ranks[o] != x) {
                return false;
            }
            // an extra attribute every object matches fully changes nothing,
            // whoever claims to care about it
            let dims = t.dims();
            let spec: Vec<Vec<usize>> = (0..users)
                .map(|u| {
                    let mut s = t.specified(u).to_vec();
                    if g.rng.gen_bool(0.5) {
                        s.push(dims);
                    }
                    s
                })
                .collect();
            let mut t3 = DegreeTable::new(n, dims + 1, spec, 0);
            for o in 0..n {
                for u in 0..users {
                    let v = t3.vector_mut(o, u);
                    v[..dims].copy_from_slice(t.vector(o, u));
                    v[dims] = 1.0;
                }
            }
            ranks(&t3) == r
        }
    }
}

/// Rank-1 objects survive at every user threshold.
pub fn top_tier_in_every_pcm(t: &DegreeTable) -> bool {
    let r = ranks(t);
    let c = Comparator::new(t, DominanceConfig::default());
    (0..t.objects()).filter(|&o| r.ranks[o] == 1).all(|o| {
        (1..=t.users()).all(|k| (0..t.objects()).all(|x| x == o || !c.p_collective(t.profile(x), t.profile(o), k)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_axiom_holds_on_a_small_run() {
        let cfg = AxiomConfig {
            trials: 200,
            ..AxiomConfig::default()
        };
        for o in axiom_suite(&cfg) {
            assert!(o.passed(), "{} failed for seeds {:?}", o.axiom, &o.failures[..o.failures.len().min(5)]);
        }
    }

    #[test]
    fn top_tier_property() {
        for seed in 0..100 {
            let t = random_table(&mut ChaCha8Rng::seed_from_u64(seed), 10, 4, 3, 3);
            assert!(top_tier_in_every_pcm(&t), "seed {seed}");
        }
    }

    #[test]
    fn resolvability_construction_by_hand() {
        // o1 is u1's and u2's favourite, o2 is u3's and u4's
        let mut t = DegreeTable::new(0, 1, vec![vec![0]; 4], 0);
        t.push_object(&[1.0, 1.0, 0.0, 0.0], &[]);
        t.push_object(&[0.0, 0.0, 1.0, 1.0], &[]);
        t.push_object(&[0.5, 0.5, 0.5, 0.5], &[]);
        assert_eq!(ranks(&t).ranks[..2], [3, 3]);
        t.push_user(vec![0], |o| vec![if o == 0 { 1.0 } else { 0.0 }]);
        assert_eq!(ranks(&t).ranks[..2], [3, 4]);
    }
}
