//! The eight acceptance criteria as runnable checks. Each returns an
//! [`Outcome`] that prints as one line.

use std::collections::BTreeSet;
use std::fmt;
use std::time::{Duration, Instant};

use gmco_core::dominance::{brute_force_cm, brute_force_pcm, DominanceConfig, Percent};
use gmco_core::fixtures;
use gmco_core::generate::{random_hierarchy, random_problem, HierarchyShape, InstanceConfig};
use gmco_core::hierarchy::{label_dag, label_tree, set_cardinalities, Cardinalities, Hierarchy, NodeId};
use gmco_core::model::{MultiValueMode, Problem, Similarity};
use gmco_core::par::{map_indexed, Parallelism};
use gmco_core::ranking::axioms::{axiom_suite, Axiom, AxiomConfig};
use gmco_core::ranking::{precision_at_k, rank_cm, rank_oracle, spearman_footrule};
use gmco_core::skyline::{bsl_table, p_bsl_table, BslConfig, Inner};
use gmco_core::spatial::{audit_bounds, audit_structure, ind, p_ind, BuildMethod, IndConfig, IndexConfig, ObjectIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::data::{fixture, preferences_fixture};
use crate::eval::{evaluate, methods, EvalConfig};
use crate::experiment::{run_experiment, Algorithm, Dataset, RunParams};
use crate::report::{write_eval, Format};
use crate::synthetic::{gen_synthetic, SyntheticConfig};

#[derive(Debug, Clone)]
pub struct Outcome {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub limit: Duration,
}

impl Outcome {
    fn new(id: u8, title: &'static str, limit_s: u64, start: Instant, ok: bool, detail: String) -> Self {
        let elapsed = start.elapsed();
        let limit = Duration::from_secs(limit_s);
        Outcome {
            id,
            title,
            passed: ok && elapsed <= limit,
            detail,
            elapsed,
            limit,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {} {}: {} - {} [{:.2}s of {}s]",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.detail,
            self.elapsed.as_secs_f64(),
            self.limit.as_secs()
        )
    }
}

#[derive(Debug, Clone)]
pub struct AcceptanceConfig {
    pub instances: usize,
    pub hierarchies: usize,
    pub audit_datasets: usize,
    pub axiom_trials: usize,
    pub perf: SyntheticConfig,
    pub perf_runs: usize,
    pub seed: u64,
}

impl Default for AcceptanceConfig {
    fn default() -> Self {
        AcceptanceConfig {
            instances: 200,
            hierarchies: 24,
            audit_datasets: 12,
            axiom_trials: 1000,
            perf: SyntheticConfig::default(),
            perf_runs: 3,
            seed: 0,
        }
    }
}

/// Table 4 of the running example as (numerator, denominator), objects by
/// users by attributes.
const TABLE: [[[(u32, u32); 5]; 3]; 4] = [
    [
        [(1, 2), (1, 2), (1, 6), (1, 1), (1, 1)],
        [(0, 1), (1, 1), (1, 1), (1, 1), (0, 1)],
        [(0, 1), (1, 1), (0, 1), (1, 1), (1, 1)],
    ],
    [
        [(1, 4), (0, 1), (0, 1), (0, 1), (0, 1)],
        [(1, 1), (1, 1), (1, 1), (1, 1), (1, 1)],
        [(1, 2), (1, 1), (1, 1), (1, 1), (1, 1)],
    ],
    [
        [(0, 1), (1, 2), (0, 1), (0, 1), (0, 1)],
        [(0, 1), (1, 1), (1, 1), (1, 1), (0, 1)],
        [(0, 1), (1, 1), (0, 1), (1, 1), (1, 1)],
    ],
    [
        [(0, 1), (0, 1), (0, 1), (0, 1), (0, 1)],
        [(0, 1), (1, 1), (1, 1), (1, 1), (0, 1)],
        [(0, 1), (1, 1), (0, 1), (1, 1), (1, 1)],
    ],
];

pub fn golden() -> Outcome {
    let start = Instant::now();
    let p = fixtures::running_example();
    let mut bad = Vec::new();
    for (o, row) in TABLE.iter().enumerate() {
        for (u, want) in row.iter().enumerate() {
            let got = p.matching_vector(o, u);
            for (k, &(n, d)) in want.iter().enumerate() {
                let x = got.degrees[k];
                if x != n as f64 / d as f64 || (x * d as f64 - n as f64).abs() > 1e-12 {
                    bad.push(format!("o{}u{}[{k}]={x}", o + 1, u + 1));
                }
            }
        }
    }
    let mut ds = Dataset::new("running-example", p, None);
    let mut run = |a: &str, pct: f64| {
        let params = RunParams {
            percent: pct,
            capacity: Some(2),
            ..RunParams::default()
        };
        run_experiment(&mut ds, a.parse::<Algorithm>().unwrap(), &params).unwrap().result
    };
    let mut sets_ok = true;
    for a in ["bsl-bnl", "bsl-sfs", "bsl-bbs", "ind", "brute-force"] {
        sets_ok &= run(a, 60.0) == ["o1", "o2"];
    }
    for a in ["p-bsl-bnl", "p-ind", "p-brute-force"] {
        sets_ok &= run(a, 60.0) == ["o2"];
        sets_ok &= run(a, 30.0).is_empty();
    }
    let ranks = run("rank-cm", 60.0);
    let t = ds.problem.degree_table(Parallelism::Sequential);
    let all_ranks = rank_cm(&t, &[0, 1], DominanceConfig::default(), Parallelism::Sequential).ranks;
    let ranks_ok = ranks == ["2:o2", "3:o1"] && all_ranks == [3, 2, 4, 4];
    let ok = bad.is_empty() && sets_ok && ranks_ok;
    let detail = format!(
        "12 vectors {}, CM/60-CM/30-CM {}, ranks {:?}",
        if bad.is_empty() { "exact".to_string() } else { format!("differ at {}", bad.join(" ")) },
        if sets_ok { "as expected" } else { "differ" },
        all_ranks
    );
    Outcome::new(1, "running example", 1, start, ok, detail)
}

/// Random instance for the oracle suites.
pub fn oracle_instance(seed: u64) -> Problem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sims = [Similarity::Jaccard, Similarity::Overlap, Similarity::Dice];
    let cfg = InstanceConfig {
        objects: rng.gen_range(20..=500),
        users: rng.gen_range(1..=8),
        dims: rng.gen_range(1..=4),
        shape: HierarchyShape {
            height: rng.gen_range(2..=5),
            max_children: rng.gen_range(2..=4),
            max_nodes: 80,
            extra_edges: if seed % 2 == 1 { rng.gen_range(1..=4) } else { 0 },
        },
        max_values: if seed % 3 == 0 { 3 } else { 1 },
        indifference: 0.3,
        objective_dims: (seed % 5 == 4) as usize,
        similarity: sims[(seed % 3) as usize].clone(),
        multi: MultiValueMode::Max,
    };
    random_problem(&mut rng, &cfg)
}

#[derive(Debug, Default)]
struct OracleStats {
    mismatches: Vec<String>,
    subset_violations: Vec<String>,
    dags: usize,
    multi: usize,
}

fn oracle_one(seed: u64) -> OracleStats {
    let p = oracle_instance(seed);
    let mut s = OracleStats {
        dags: p.domain.attributes().iter().any(|a| a.hierarchy.is_dag()) as usize,
        multi: p.objects.iter().any(|o| o.values.iter().any(|v| v.len() > 1)) as usize,
        ..OracleStats::default()
    };
    let t = p.degree_table(Parallelism::Sequential);
    let dc = DominanceConfig::for_table(&t);
    let truth = brute_force_cm(&t, dc);
    let mut miss = |what: &str, got: &[usize], want: &[usize]| {
        if got != want {
            s.mismatches.push(format!("seed {seed} {what}"));
        }
    };
    let cap = 3 + (seed % 14) as usize;
    let method = if seed % 4 < 2 { BuildMethod::Str } else { BuildMethod::RStar };
    let index = ObjectIndex::build(&p, &IndexConfig { capacity: cap, method, indexed: None }).unwrap();
    let icfg = IndConfig::default();
    miss("ind", &ind(&index, &p, &icfg).cm, &truth);
    let bcfg = |inner| BslConfig {
        inner,
        records_per_page: Some(5),
        window: 7,
        node_capacity: Some(4),
        ..BslConfig::default()
    };
    for inner in [Inner::Bnl, Inner::Sfs, Inner::Bbs] {
        miss(&format!("bsl-{inner}"), &bsl_table(&t, &bcfg(inner)).cm, &truth);
    }
    let mut previous: Option<Vec<usize>> = None;
    for p10 in 1..=10 {
        let pct = Percent::new(10.0 * p10 as f64).unwrap();
        let want = brute_force_pcm(&t, pct, dc);
        miss(&format!("p-ind {}", pct.value()), &p_ind(&index, &p, pct, &icfg).pcm, &want);
        let inner = [Inner::Bnl, Inner::Sfs, Inner::Bbs][p10 % 3];
        miss(&format!("p-bsl-{inner} {}", pct.value()), &p_bsl_table(&t, pct, &bcfg(inner)).pcm, &want);
        let set: BTreeSet<usize> = want.iter().copied().collect();
        if !want.iter().all(|o| truth.contains(o)) {
            s.subset_violations.push(format!("seed {seed} p={} not within CM", pct.value()));
        }
        if let Some(prev) = &previous {
            if !prev.iter().all(|o| set.contains(o)) {
                s.subset_violations.push(format!("seed {seed} p={} shrinks", pct.value()));
            }
        }
        previous = Some(want);
    }
    if rank_cm(&t, &truth, dc, Parallelism::Sequential) != rank_oracle(&t, dc) {
        s.mismatches.push(format!("seed {seed} rank"));
    }
    s
}

/// Criteria 2 and 6 share their instances.
pub fn oracle_equivalence(cfg: &AcceptanceConfig) -> (Outcome, Outcome) {
    let start = Instant::now();
    let stats = map_indexed(Parallelism::Parallel, cfg.instances, |i| oracle_one(cfg.seed + i as u64));
    let mismatches: Vec<&String> = stats.iter().flat_map(|s| &s.mismatches).collect();
    let subset: Vec<&String> = stats.iter().flat_map(|s| &s.subset_violations).collect();
    let dags: usize = stats.iter().map(|s| s.dags).sum();
    let multi: usize = stats.iter().map(|s| s.multi).sum();
    let enough = cfg.instances >= 200 && dags > 0 && multi > 0;
    let c2 = Outcome::new(
        2,
        "oracle equivalence",
        300,
        start,
        enough && mismatches.is_empty(),
        format!(
            "{} instances ({dags} with DAGs, {multi} multi-valued), {} mismatches{}",
            cfg.instances,
            mismatches.len(),
            mismatches.first().map(|m| format!(", first: {m}")).unwrap_or_default()
        ),
    );
    let c6 = Outcome::new(
        6,
        "subset and monotonicity laws",
        300,
        start,
        enough && subset.is_empty(),
        format!(
            "pCM(p1) within pCM(p2) within CM over {} instances x 10 values of p, {} violations",
            cfg.instances,
            subset.len()
        ),
    );
    (c2, c6)
}

/// Leaves below `v`, found by walking child edges.
fn leaf_set(h: &Hierarchy, v: NodeId) -> BTreeSet<NodeId> {
    let mut out = BTreeSet::new();
    let mut seen = BTreeSet::new();
    let mut stack = vec![v];
    while let Some(x) = stack.pop() {
        if seen.insert(x) {
            if h.is_leaf(x) {
                out.insert(x);
            }
            stack.extend(h.children(x).iter().copied());
        }
    }
    out
}

pub fn interval_arithmetic(cfg: &AcceptanceConfig) -> Outcome {
    let start = Instant::now();
    let mut pairs = 0u64;
    let mut bad = Vec::new();
    let mut dags = 0;
    for i in 0..cfg.hierarchies {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed + 10_000 + i as u64);
        let shape = HierarchyShape {
            height: rng.gen_range(2..=7),
            max_children: rng.gen_range(2..=5),
            max_nodes: 200,
            extra_edges: if i % 2 == 1 { rng.gen_range(1..=6) } else { 0 },
        };
        let h = random_hierarchy(&mut rng, "h", &shape);
        dags += h.is_dag() as usize;
        let mut labelings = vec![label_dag(&h)];
        if !h.is_dag() {
            labelings.push(label_tree(&h).unwrap());
        }
        let nodes: Vec<NodeId> = h.nodes().collect();
        let leaves: Vec<BTreeSet<NodeId>> = nodes.iter().map(|&v| leaf_set(&h, v)).collect();
        for l in &labelings {
            for (a, la) in nodes.iter().zip(&leaves) {
                for (b, lb) in nodes.iter().zip(&leaves) {
                    pairs += 1;
                    let want = Cardinalities {
                        x: la.len() as u64,
                        y: lb.len() as u64,
                        intersection: la.intersection(lb).count() as u64,
                        union: la.union(lb).count() as u64,
                    };
                    if set_cardinalities(l.intervals(*a), l.intervals(*b)) != want {
                        bad.push(format!("hierarchy {i} {}/{}", h.label(*a), h.label(*b)));
                    }
                }
            }
        }
    }
    Outcome::new(
        3,
        "interval arithmetic",
        30,
        start,
        cfg.hierarchies >= 20 && dags > 0 && bad.is_empty(),
        format!("{} hierarchies ({dags} DAGs), {pairs} node pairs, {} mismatches", cfg.hierarchies, bad.len()),
    )
}

pub fn bound_soundness(cfg: &AcceptanceConfig) -> Outcome {
    let start = Instant::now();
    let mut trees = 0;
    let mut comparisons = 0usize;
    let mut problems = Vec::new();
    for i in 0..cfg.audit_datasets {
        let seed = cfg.seed + 20_000 + i as u64;
        let p = oracle_instance(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = p.dims();
        let sub: Vec<usize> = (0..d).filter(|_| rng.gen_bool(0.5)).collect();
        let sub = if sub.is_empty() || sub.len() == d { vec![0] } else { sub };
        let spaces = if d > 1 { vec![None, Some(sub)] } else { vec![None] };
        for indexed in spaces {
            for method in [BuildMethod::Str, BuildMethod::RStar] {
                let icfg = IndexConfig {
                    capacity: 3 + i % 8,
                    method,
                    indexed: indexed.clone(),
                };
                let t = ObjectIndex::build(&p, &icfg).unwrap();
                trees += 1;
                let a = audit_bounds(&t, &p);
                comparisons += a.comparisons;
                if !a.violations.is_empty() {
                    problems.push(format!("dataset {i}: {} violations", a.violations.len()));
                }
                problems.extend(audit_structure(&t, &p).into_iter().map(|m| format!("dataset {i}: {m}")));
                let on = ind(&t, &p, &IndConfig::default()).cm;
                let off = ind(&t, &p, &IndConfig { prune: false, ..IndConfig::default() }).cm;
                if on != off {
                    problems.push(format!("dataset {i}: pruning changes the result"));
                }
            }
        }
    }
    Outcome::new(
        4,
        "bound soundness",
        120,
        start,
        cfg.audit_datasets >= 10 && problems.is_empty(),
        format!(
            "{} datasets, {trees} trees, {comparisons} bound comparisons, {} problems{}",
            cfg.audit_datasets,
            problems.len(),
            problems.first().map(|m| format!(", first: {m}")).unwrap_or_default()
        ),
    )
}

#[derive(Debug, Clone)]
pub struct PerfOutcome {
    pub outcome: Outcome,
    pub io_ratio: f64,
    pub wall_ratio: f64,
    pub results_agree: bool,
}

pub fn performance(cfg: &AcceptanceConfig) -> PerfOutcome {
    let start = Instant::now();
    let problem = gen_synthetic(&cfg.perf).expect("valid config").into_problem(Similarity::Jaccard);
    let mut ds = Dataset::new("synthetic", problem, Some(cfg.perf.seed));
    let params = RunParams {
        runs: cfg.perf_runs,
        ..RunParams::default()
    };
    let mut run = |a: &str| run_experiment(&mut ds, a.parse().unwrap(), &params).expect("run");
    let ind = run("ind");
    let bsl: Vec<_> = ["bsl-bnl", "bsl-sfs", "bsl-bbs"].iter().map(|a| run(a)).collect();
    let best = bsl.iter().min_by_key(|r| r.io_reads).unwrap();
    let io_ratio = ind.io_reads as f64 / best.io_reads as f64;
    let wall_ratio = ind.wall_time_ms / bsl[0].wall_time_ms;
    let results_agree = bsl.iter().all(|r| r.result == ind.result);
    let ok = results_agree && io_ratio <= 0.2 && wall_ratio <= 1.0 / 3.0;
    let outcome = Outcome::new(
        5,
        "performance trend",
        300 * cfg.perf_runs as u64,
        start,
        ok,
        format!(
            "|O|={} d={} |U|={}: io ind/{} = {}/{} = {:.3} (limit 0.2), wall ind/bsl-bnl = {:.1}/{:.1} ms = {:.2} (limit 0.33), |CM|={}",
            cfg.perf.objects,
            cfg.perf.attributes,
            cfg.perf.users,
            best.algorithm,
            ind.io_reads,
            best.io_reads,
            io_ratio,
            ind.wall_time_ms,
            bsl[0].wall_time_ms,
            wall_ratio,
            ind.result_size
        ),
    );
    PerfOutcome {
        outcome,
        io_ratio,
        wall_ratio,
        results_agree,
    }
}

pub fn ranking_axioms(cfg: &AcceptanceConfig) -> Outcome {
    let start = Instant::now();
    let out = axiom_suite(&AxiomConfig {
        trials: cfg.axiom_trials,
        seed: cfg.seed,
        ..AxiomConfig::default()
    });
    let failed: Vec<String> = out
        .iter()
        .filter(|o| !o.passed())
        .map(|o| format!("{} ({} of {})", o.axiom, o.failures.len(), o.trials))
        .collect();
    let covered = out.iter().filter(|o| o.trials >= 1000).count() == Axiom::ALL.len();
    Outcome::new(
        7,
        "ranking axioms",
        180,
        start,
        covered && failed.is_empty(),
        format!(
            "{} suites x {} trials, failing: {}",
            out.len(),
            cfg.axiom_trials,
            if failed.is_empty() { "none".into() } else { failed.join(", ") }
        ),
    )
}

pub fn evaluation_metrics() -> Outcome {
    let start = Instant::now();
    let a: Vec<u32> = (0..10).collect();
    let b: Vec<u32> = (10..20).collect();
    let identical = (precision_at_k(&a, &a, 10), spearman_footrule(&a, &a, 10));
    let disjoint = (precision_at_k(&a, &b, 10), spearman_footrule(&a, &b, 10));
    let metrics_ok = identical == (1.0, Some(0.0)) && disjoint == (0.0, Some(1.0));
    let p = preferences_fixture(Similarity::Jaccard).expect("bundled fixture");
    let cfg = EvalConfig::default();
    let rows = evaluate(&p, &fixture::truth(), &cfg).expect("evaluation");
    let expected = methods().len() * cfg.group_sizes.len() * cfg.ks.len();
    let complete = rows.len() == expected
        && rows.iter().all(|r| r.precision.is_finite() && r.footrule.is_some_and(f64::is_finite));
    let mut csv = Vec::new();
    write_eval(&mut csv, Format::Csv, &rows).expect("in-memory write");
    let lines = String::from_utf8(csv).unwrap().lines().count();
    Outcome::new(
        8,
        "evaluation metrics",
        30,
        start,
        metrics_ok && complete && lines == expected + 2,
        format!(
            "identical {identical:?}, disjoint {disjoint:?}, report {} rows for {} methods",
            rows.len(),
            methods().len()
        ),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_passes() {
        let o = golden();
        assert!(o.passed, "{o}");
    }

    #[test]
    fn small_runs() {
        let cfg = AcceptanceConfig {
            instances: 12,
            hierarchies: 4,
            audit_datasets: 2,
            axiom_trials: 20,
            ..AcceptanceConfig::default()
        };
        let (c2, c6) = oracle_equivalence(&cfg);
        // too few instances to pass, but nothing may disagree
        assert!(c2.detail.contains(" 0 mismatches"), "{c2}");
        assert!(c6.detail.ends_with(" 0 violations"), "{c6}");
        assert!(interval_arithmetic(&cfg).detail.ends_with(" 0 mismatches"));
        assert!(bound_soundness(&cfg).detail.contains(" 0 problems"));
        assert!(evaluation_metrics().passed);
    }

    #[test]
    fn line_format() {
        let o = Outcome::new(9, "x", 1, Instant::now(), true, "d".into());
        assert!(o.to_string().starts_with("criterion 9 PASS: x - d ["));
    }
}
