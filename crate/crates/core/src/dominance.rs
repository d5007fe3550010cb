//! Per-user preference and its collective and p-collective aggregations.

use std::cell::Cell;

use crate::error::{Error, Result};
use crate::model::{DegreeTable, Profile};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preference {
    Neither,
    Preferred,
    Strict,
}

impl Preference {
    pub fn is_preferred(self) -> bool {
        self != Preference::Neither
    }
}

/// When a comparison involving objective attributes counts as strict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strictness {
    /// Strictly better on at least one coordinate of either kind.
    #[default]
    Standard,
    /// Strictly better on a subjective coordinate and, when objective
    /// attributes exist, also on an objective one.
    LiteralObjective,
}

/// A percentage `p` in (0, 100], kept to 1e-4 percent so the user threshold
/// is computed on integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Percent {
    millionths: u64,
}

impl Percent {
    const SCALE: u64 = 1_000_000;

    pub fn new(p: f64) -> Result<Self> {
        if !(p > 0.0 && p <= 100.0) {
            return Err(Error::InvalidPercent(p));
        }
        Ok(Percent {
            millionths: (p * 1e4).round() as u64,
        })
    }

    pub fn full() -> Self {
        Percent {
            millionths: Self::SCALE,
        }
    }

    pub fn value(self) -> f64 {
        self.millionths as f64 / 1e4
    }

    /// `⌈p/100 · users⌉`, at least 1.
    pub fn threshold(self, users: usize) -> usize {
        let n = self.millionths * users as u64;
        (n.div_ceil(Self::SCALE) as usize).max(1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DominanceConfig {
    pub strictness: Strictness,
    /// Slack for `≥`/`>`; zero means exact comparison.
    pub tolerance: f64,
}

impl DominanceConfig {
    pub fn for_table(t: &DegreeTable) -> Self {
        DominanceConfig {
            strictness: Strictness::Standard,
            tolerance: t.tolerance(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Counters {
    pub dominance_checks: u64,
    pub io_reads: u64,
}

impl std::ops::AddAssign for Counters {
    fn add_assign(&mut self, o: Counters) {
        self.dominance_checks += o.dominance_checks;
        self.io_reads += o.io_reads;
    }
}

/// Tally of one profile against another over all users.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Tally {
    pub preferring: usize,
    pub strict: usize,
}

/// Compares object profiles laid out like a [`DegreeTable`] row. Every
/// per-user comparison is counted.
#[derive(Debug)]
pub struct Comparator<'t> {
    dims: usize,
    specified: Vec<&'t [usize]>,
    cfg: DominanceConfig,
    checks: Cell<u64>,
}

impl<'t> Comparator<'t> {
    pub fn new(table: &'t DegreeTable, cfg: DominanceConfig) -> Self {
        Self::from_specified(
            table.dims(),
            (0..table.users()).map(|u| table.specified(u)).collect(),
            cfg,
        )
    }

    /// `specified[u]` lists the attributes user `u` cares about.
    pub fn from_specified(dims: usize, specified: Vec<&'t [usize]>, cfg: DominanceConfig) -> Self {
        Comparator {
            dims,
            specified,
            cfg,
            checks: Cell::new(0),
        }
    }

    pub fn users(&self) -> usize {
        self.specified.len()
    }

    pub fn checks(&self) -> u64 {
        self.checks.get()
    }

    /// Objective part of the comparison: `None` if `a` loses somewhere,
    /// otherwise whether it wins somewhere.
    fn objective(&self, a: &[f64], b: &[f64]) -> Option<bool> {
        let tol = self.cfg.tolerance;
        let mut strict = false;
        for (x, y) in a.iter().zip(b) {
            if *x < *y - tol {
                return None;
            }
            strict |= *x > *y + tol;
        }
        Some(strict)
    }

    fn subjective(&self, a: &[f64], b: &[f64], spec: &[usize]) -> Option<bool> {
        let tol = self.cfg.tolerance;
        let mut strict = false;
        if tol == 0.0 {
            for &k in spec {
                let (x, y) = (a[k], b[k]);
                if x < y {
                    return None;
                }
                strict |= x > y;
            }
        } else {
            for &k in spec {
                let (x, y) = (a[k], b[k]);
                if x < y - tol {
                    return None;
                }
                strict |= x > y + tol;
            }
        }
        Some(strict)
    }

    fn combine(&self, sub: bool, obj: bool, has_objective: bool) -> Preference {
        let strict = match self.cfg.strictness {
            Strictness::Standard => sub || obj,
            Strictness::LiteralObjective => sub && (obj || !has_objective),
        };
        if strict {
            Preference::Strict
        } else {
            Preference::Preferred
        }
    }

    /// Preference of user `u` between two matching vectors (no objective
    /// attributes involved).
    pub fn vectors(&self, a: &[f64], b: &[f64], u: usize) -> Preference {
        self.checks.set(self.checks.get() + 1);
        match self.subjective(a, b, self.specified[u]) {
            None => Preference::Neither,
            Some(s) => self.combine(s, false, false),
        }
    }

    /// Preference of user `u` for `a` over `b`.
    pub fn user(&self, a: Profile<'_>, b: Profile<'_>, u: usize) -> Preference {
        let Some(obj) = self.objective(a.objective, b.objective) else {
            self.checks.set(self.checks.get() + 1);
            return Preference::Neither;
        };
        self.user_with(a, b, u, obj)
    }

    fn user_with(&self, a: Profile<'_>, b: Profile<'_>, u: usize, obj: bool) -> Preference {
        self.checks.set(self.checks.get() + 1);
        let r = u * self.dims..(u + 1) * self.dims;
        match self.subjective(&a.degrees[r.clone()], &b.degrees[r], self.specified[u]) {
            None => Preference::Neither,
            Some(s) => self.combine(s, obj, !a.objective.is_empty()),
        }
    }

    /// `a` is collectively preferred over `b`: every user prefers it and at
    /// least one strictly.
    pub fn collective(&self, a: Profile<'_>, b: Profile<'_>) -> bool {
        let Some(obj) = self.objective(a.objective, b.objective) else {
            return false;
        };
        let mut strict = false;
        for u in 0..self.users() {
            match self.user_with(a, b, u, obj) {
                Preference::Neither => return false,
                Preference::Strict => strict = true,
                Preference::Preferred => {}
            }
        }
        strict
    }

    pub fn tally(&self, a: Profile<'_>, b: Profile<'_>) -> Tally {
        let mut t = Tally {
            preferring: 0,
            strict: 0,
        };
        let Some(obj) = self.objective(a.objective, b.objective) else {
            return t;
        };
        for u in 0..self.users() {
            match self.user_with(a, b, u, obj) {
                Preference::Neither => {}
                Preference::Preferred => t.preferring += 1,
                Preference::Strict => {
                    t.preferring += 1;
                    t.strict += 1
                }
            }
        }
        t
    }

    /// At least `k` users prefer `a` and one of them strictly.
    pub fn p_collective(&self, a: Profile<'_>, b: Profile<'_>, k: usize) -> bool {
        let Some(obj) = self.objective(a.objective, b.objective) else {
            return false;
        };
        let n = self.users();
        let (mut pref, mut strict) = (0, false);
        for u in 0..n {
            // not enough users left to reach k
            if pref + (n - u) < k {
                return false;
            }
            match self.user_with(a, b, u, obj) {
                Preference::Neither => {}
                Preference::Preferred => pref += 1,
                Preference::Strict => {
                    pref += 1;
                    strict = true
                }
            }
            if strict && pref >= k {
                return true;
            }
        }
        false
    }
}

/// Objects of the table with no collectively preferred rival, by a plain
/// pairwise scan. Returned in index order.
pub fn brute_force_cm(table: &DegreeTable, cfg: DominanceConfig) -> Vec<usize> {
    let c = Comparator::new(table, cfg);
    (0..table.objects())
        .filter(|&b| {
            !(0..table.objects()).any(|a| a != b && c.collective(table.profile(a), table.profile(b)))
        })
        .collect()
}

/// Members of CM not p-collectively preferred by any other member of CM.
pub fn brute_force_pcm(table: &DegreeTable, p: Percent, cfg: DominanceConfig) -> Vec<usize> {
    let cm = brute_force_cm(table, cfg);
    let c = Comparator::new(table, cfg);
    let k = p.threshold(table.users());
    cm.iter()
        .copied()
        .filter(|&b| {
            !cm.iter()
                .any(|&a| a != b && c.p_collective(table.profile(a), table.profile(b), k))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::par::Parallelism;

    fn table() -> DegreeTable {
        fixtures::running_example().degree_table(Parallelism::Sequential)
    }

    #[test]
    fn thresholds() {
        assert_eq!(Percent::new(60.0).unwrap().threshold(3), 2);
        assert_eq!(Percent::new(30.0).unwrap().threshold(3), 1);
        assert_eq!(Percent::new(100.0).unwrap().threshold(3), 3);
        assert_eq!(Percent::new(50.0).unwrap().threshold(4), 2);
        assert_eq!(Percent::new(0.0001).unwrap().threshold(7), 1);
        assert_eq!(Percent::new(33.3333).unwrap().threshold(3), 1);
        assert!(Percent::new(0.0).is_err());
        assert!(Percent::new(100.5).is_err());
        assert!(Percent::new(f64::NAN).is_err());
    }

    #[test]
    fn single_user_preferences() {
        let t = table();
        let c = Comparator::new(&t, DominanceConfig::default());
        // u1: o3 = <0,1/2,0,0,0>, o4 = all zeros
        assert_eq!(c.user(t.profile(2), t.profile(3), 0), Preference::Strict);
        assert_eq!(c.user(t.profile(2), t.profile(2), 0), Preference::Preferred);
        assert_eq!(c.vectors(&[1.0, 0.0], &[0.0, 1.0], 0), Preference::Neither);
        assert_eq!(c.checks(), 3);
    }

    #[test]
    fn collective_examples() {
        let t = table();
        let c = Comparator::new(&t, DominanceConfig::default());
        assert!(c.collective(t.profile(0), t.profile(2)));
        assert!(!c.collective(t.profile(0), t.profile(0)));
        assert!(!c.collective(t.profile(0), t.profile(1)));
        assert!(!c.collective(t.profile(1), t.profile(0)));
    }

    #[test]
    fn p_collective_examples() {
        let t = table();
        let c = Comparator::new(&t, DominanceConfig::default());
        let k60 = Percent::new(60.0).unwrap().threshold(3);
        let k30 = Percent::new(30.0).unwrap().threshold(3);
        assert!(c.p_collective(t.profile(1), t.profile(0), k60));
        assert!(!c.p_collective(t.profile(0), t.profile(1), k60));
        assert!(c.p_collective(t.profile(0), t.profile(1), k30));
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(
                    c.p_collective(t.profile(a), t.profile(b), 3),
                    c.collective(t.profile(a), t.profile(b))
                );
            }
        }
    }

    #[test]
    fn oracles_on_running_example() {
        let t = table();
        let cfg = DominanceConfig::default();
        assert_eq!(brute_force_cm(&t, cfg), vec![0, 1]);
        let pcm = |p| brute_force_pcm(&t, Percent::new(p).unwrap(), cfg);
        assert_eq!(pcm(60.0), vec![1]);
        assert_eq!(pcm(30.0), Vec::<usize>::new());
        assert_eq!(pcm(100.0), vec![0, 1]);
    }

    #[test]
    fn duplicates_both_survive() {
        let mut t = DegreeTable::new(0, 2, vec![vec![0, 1]], 0);
        t.push_object(&[0.5, 0.5], &[]);
        t.push_object(&[0.5, 0.5], &[]);
        t.push_object(&[0.25, 0.5], &[]);
        assert_eq!(brute_force_cm(&t, DominanceConfig::default()), vec![0, 1]);
        let single = t.select_objects(&[2]);
        assert_eq!(brute_force_cm(&single, DominanceConfig::default()), vec![0]);
    }

    #[test]
    fn objective_strictness_modes() {
        let mut t = DegreeTable::new(0, 1, vec![vec![0]], 1);
        t.push_object(&[0.5], &[2.0]);
        t.push_object(&[0.5], &[1.0]);
        t.push_object(&[1.0], &[1.0]);
        let std = Comparator::new(&t, DominanceConfig::default());
        // equal degrees, better objective value
        assert!(std.collective(t.profile(0), t.profile(1)));
        // better degree, equal objective value
        assert!(std.collective(t.profile(2), t.profile(1)));
        // worse objective blocks preference
        assert!(!std.collective(t.profile(2), t.profile(0)));

        let lit = Comparator::new(
            &t,
            DominanceConfig {
                strictness: Strictness::LiteralObjective,
                tolerance: 0.0,
            },
        );
        assert!(!lit.collective(t.profile(0), t.profile(1)));
        assert!(!lit.collective(t.profile(2), t.profile(1)));
    }

    #[test]
    fn mutual_p_dominance_removes_both() {
        // two users each favouring a different object
        let mut t = DegreeTable::new(0, 1, vec![vec![0], vec![0]], 0);
        t.push_object(&[1.0, 0.0], &[]);
        t.push_object(&[0.0, 1.0], &[]);
        let p50 = Percent::new(50.0).unwrap();
        let cfg = DominanceConfig::default();
        assert_eq!(brute_force_cm(&t, cfg), vec![0, 1]);
        assert!(brute_force_pcm(&t, p50, cfg).is_empty());
    }

    #[test]
    fn tolerance_absorbs_rounding() {
        let t = DegreeTable::new(0, 1, vec![vec![0]], 0);
        let c = Comparator::new(
            &t,
            DominanceConfig {
                strictness: Strictness::Standard,
                tolerance: 1e-12,
            },
        );
        assert_eq!(c.vectors(&[0.3], &[0.1 + 0.2], 0), Preference::Preferred);
        let exact = Comparator::new(&t, DominanceConfig::default());
        assert_eq!(exact.vectors(&[0.3], &[0.1 + 0.2], 0), Preference::Neither);
    }
}
