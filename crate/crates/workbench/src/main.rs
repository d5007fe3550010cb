use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use gmco_core::dominance::{brute_force_cm, DominanceConfig};
use gmco_core::model::{Problem, Similarity};
use gmco_core::par::Parallelism;
use gmco_core::ranking::rank_cm;
use gmco_core::skyline::{bsl_table, BslConfig};
use gmco_core::spatial::{audit_bounds, audit_structure, ind, transform, IndConfig, ObjectIndex};
use gmco_workbench::bench::{run_bench, BenchConfig};
use gmco_workbench::data::{self, default_data_dir, load_files, preferences_fixture};
use gmco_workbench::eval::{evaluate, EvalConfig};
use gmco_workbench::experiment::{run_experiment, Algorithm, Dataset, RunParams, RunReport};
use gmco_workbench::report::{write_eval, write_runs, Format};
use gmco_workbench::synthetic::{gen_synthetic, SyntheticConfig};

/// Collectively maximal objects for groups of users with categorical
/// preferences.
#[derive(Parser)]
#[command(name = "gmco", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a synthetic dataset directory.
    Gen(GenArgs),
    /// Print every object's rectangles in interval space.
    Transform {
        #[command(flatten)]
        data: DataArgs,
        /// Attributes to map, by position; all when omitted.
        #[arg(long, value_delimiter = ',')]
        indexed: Option<Vec<usize>>,
    },
    /// Build the spatial index and write its dump.
    Index {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Collectively maximal objects, one id per line.
    Gmco(QueryArgs),
    /// p-collectively maximal objects, one id per line.
    Pgmco(QueryArgs),
    /// Tiers of the collectively maximal objects.
    Rank {
        #[command(flatten)]
        data: DataArgs,
    },
    /// Precision and footrule of every strategy against a ground truth.
    Eval(EvalArgs),
    /// Parameter sweeps over synthetic data.
    Bench(BenchArgs),
    /// Check index bounds and structure, and cross-check the algorithms.
    Audit {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Largest dataset to cross-check against brute force.
        #[arg(long, default_value_t = 2000)]
        oracle_limit: usize,
    },
}

#[derive(Args)]
struct DataArgs {
    /// Dataset directory; defaults to $GMCO_DATA_DIR, then `data`.
    #[arg(long)]
    data: Option<PathBuf>,
    /// Hierarchy documents; defaults to the `*.hier` files beside the objects.
    #[arg(long = "hier", num_args = 1..)]
    hierarchies: Vec<PathBuf>,
    #[arg(long)]
    objects: Option<PathBuf>,
    #[arg(long)]
    users: Option<PathBuf>,
    /// jaccard, overlap or dice.
    #[arg(long, default_value = "jaccard")]
    similarity: String,
}

impl DataArgs {
    fn load(&self) -> Result<Problem> {
        let sim = Similarity::parse(&self.similarity).with_context(|| format!("unknown similarity `{}`", self.similarity))?;
        let dir = self.data.clone().unwrap_or_else(default_data_dir);
        let objects = self.objects.clone().unwrap_or_else(|| dir.join(data::OBJECTS_FILE));
        let users = self.users.clone().unwrap_or_else(|| dir.join(data::USERS_FILE));
        let hiers = if !self.hierarchies.is_empty() {
            self.hierarchies.clone()
        } else {
            let beside = match (&self.data, objects.parent()) {
                (None, Some(p)) if self.objects.is_some() => p.to_path_buf(),
                _ => dir,
            };
            let beside = if beside.as_os_str().is_empty() { PathBuf::from(".") } else { beside };
            data::hierarchy_files(&beside)?
        };
        Ok(load_files(&hiers, &objects, &users, sim)?)
    }

    fn name(&self) -> String {
        match (&self.data, &self.objects) {
            (_, Some(o)) => o.display().to_string(),
            (Some(d), None) => d.display().to_string(),
            (None, None) => default_data_dir().display().to_string(),
        }
    }
}

#[derive(Args, Clone)]
struct RunArgs {
    /// Index fanout; fills one page per node by default.
    #[arg(long)]
    capacity: Option<usize>,
    /// str or rstar.
    #[arg(long, default_value = "str")]
    build: String,
    /// Attributes to index, by position.
    #[arg(long, value_delimiter = ',')]
    indexed: Option<Vec<usize>>,
    /// Keep every index entry instead of pruning.
    #[arg(long)]
    no_prune: bool,
    #[arg(long, default_value_t = 1)]
    runs: usize,
    /// Compute on the calling thread only.
    #[arg(long)]
    sequential: bool,
}

impl RunArgs {
    fn params(&self, percent: f64) -> RunParams {
        RunParams {
            percent,
            capacity: self.capacity,
            build: self.build.clone(),
            indexed: self.indexed.clone(),
            prune: !self.no_prune,
            runs: self.runs,
            sequential: self.sequential,
            ..RunParams::default()
        }
    }
}

#[derive(Args)]
struct QueryArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    run: RunArgs,
    /// bsl-bnl, bsl-sfs, bsl-bbs, ind or brute-force (p- variants for pgmco).
    #[arg(long, default_value = "ind")]
    algo: String,
    /// Threshold percentage for pgmco.
    #[arg(long, short, default_value_t = 60.0)]
    percent: f64,
    /// Index dump written by `gmco index`.
    #[arg(long)]
    index: Option<PathBuf>,
    /// Also write a run report here ("-" for standard error).
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    out: PathBuf,
    /// TOML file with SyntheticConfig fields; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    objects: Option<usize>,
    #[arg(long)]
    attributes: Option<usize>,
    #[arg(long)]
    users: Option<usize>,
    #[arg(long)]
    height: Option<u32>,
    #[arg(long)]
    object_level: Option<u32>,
    #[arg(long)]
    user_level: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct EvalArgs {
    /// Dataset directory; the bundled preference fixture when omitted.
    #[arg(long)]
    data: Option<PathBuf>,
    /// Ground-truth ids, one per line, best first.
    #[arg(long)]
    truth: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', default_values_t = vec![2, 4, 8])]
    group_sizes: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = vec![3, 5, 10])]
    ks: Vec<usize>,
    #[arg(long, default_value_t = 10)]
    groups: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct BenchArgs {
    /// TOML bench config; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// For example users=2..32.
    #[arg(long)]
    sweep: Option<String>,
    #[arg(long, value_delimiter = ',')]
    algos: Option<Vec<String>>,
    #[arg(long)]
    objects: Option<usize>,
    #[arg(long)]
    runs: Option<usize>,
    #[arg(long, default_value = "csv")]
    format: Format,
    /// Report file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read_text(p: &Path) -> Result<String> {
    fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))
}

fn print_ids(ids: &[String]) -> Result<()> {
    let mut out = io::stdout().lock();
    for id in ids {
        writeln!(out, "{id}")?;
    }
    Ok(())
}

fn write_report(path: &Path, fmt: Format, r: &RunReport) -> Result<()> {
    if path.as_os_str() == "-" {
        write_runs(io::stderr().lock(), fmt, std::slice::from_ref(r))?;
    } else {
        let f = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
        write_runs(f, fmt, std::slice::from_ref(r))?;
    }
    Ok(())
}

fn query(q: QueryArgs, relaxed: bool) -> Result<()> {
    let alg: Algorithm = q.algo.parse()?;
    if matches!(alg, Algorithm::RankCm | Algorithm::Strategy(_)) || alg.is_relaxed() != relaxed {
        bail!(
            "algorithm `{alg}` does not answer {}",
            if relaxed { "pgmco (use p-ind, p-bsl-* or p-brute-force)" } else { "gmco (use ind, bsl-* or brute-force)" }
        );
    }
    let mut ds = Dataset::new(q.data.name(), q.data.load()?, None);
    if let Some(path) = &q.index {
        ds = ds.with_index(ObjectIndex::load(&read_text(path)?).with_context(|| path.display().to_string())?)?;
    }
    let r = run_experiment(&mut ds, alg, &q.run.params(q.percent))?;
    print_ids(&r.result)?;
    if let Some(path) = &q.report {
        write_report(path, q.format, &r)?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Gen(g) => {
            let mut cfg = match &g.config {
                Some(p) => toml::from_str(&read_text(p)?).with_context(|| p.display().to_string())?,
                None => SyntheticConfig::default(),
            };
            macro_rules! set {
                ($($f:ident),*) => {$(if let Some(v) = g.$f { cfg.$f = v; })*};
            }
            set!(objects, attributes, users, height, object_level, user_level, seed);
            let p = gen_synthetic(&cfg)?.into_problem(Similarity::Jaccard);
            for f in data::write_dir(&g.out, &p)? {
                eprintln!("wrote {}", f.display());
            }
        }
        Cmd::Transform { data, indexed } => {
            let p = data.load()?;
            let ix = indexed.unwrap_or_else(|| (0..p.dims()).collect());
            if let Some(&k) = ix.iter().find(|&&k| k >= p.dims()) {
                bail!("attribute {k} out of range (dataset has {})", p.dims());
            }
            let mut out = io::stdout().lock();
            for o in &p.objects {
                let rects: Vec<String> = transform(&p.domain, o, &ix).iter().map(|r| r.to_string()).collect();
                writeln!(out, "{}\t{}", o.id, rects.join(" "))?;
            }
        }
        Cmd::Index { data, run, out } => {
            let p = data.load()?;
            let cfg = run.params(60.0).index_config(&p)?;
            let t = ObjectIndex::build(&p, &cfg)?;
            fs::write(&out, t.dump()).with_context(|| format!("writing {}", out.display()))?;
            eprintln!("{} nodes, height {}, capacity {}", t.node_count(), t.height(), t.capacity());
        }
        Cmd::Gmco(q) => query(q, false)?,
        Cmd::Pgmco(q) => query(q, true)?,
        Cmd::Rank { data } => {
            let p = data.load()?;
            let t = p.degree_table(Parallelism::Parallel);
            let cm = bsl_table(&t, &BslConfig::default()).cm;
            let r = rank_cm(&t, &cm, DominanceConfig::for_table(&t), Parallelism::Parallel);
            let mut out = io::stdout().lock();
            for (rank, members) in r.tiers() {
                let mut ids = p.ids(&members);
                ids.sort();
                writeln!(out, "{rank}: {}", ids.join(" "))?;
            }
        }
        Cmd::Eval(e) => {
            let (p, truth) = match &e.data {
                Some(dir) => {
                    let truth_path = e.truth.clone().unwrap_or_else(|| dir.join("truth.txt"));
                    (data::load_dir(dir, Similarity::Jaccard)?, data::parse_truth(&read_text(&truth_path)?))
                }
                None => {
                    let truth = match &e.truth {
                        Some(t) => data::parse_truth(&read_text(t)?),
                        None => data::fixture::truth(),
                    };
                    (preferences_fixture(Similarity::Jaccard)?, truth)
                }
            };
            if truth.is_empty() {
                bail!("ground truth is empty");
            }
            let cfg = EvalConfig {
                group_sizes: e.group_sizes,
                ks: e.ks,
                groups: e.groups,
                seed: e.seed,
                ..EvalConfig::default()
            };
            let rows = evaluate(&p, &truth, &cfg)?;
            write_eval(io::stdout().lock(), e.format, &rows)?;
        }
        Cmd::Bench(b) => {
            let mut cfg = match &b.config {
                Some(p) => BenchConfig::from_toml(&read_text(p)?).with_context(|| p.display().to_string())?,
                None => BenchConfig::default(),
            };
            if b.sweep.is_some() {
                cfg.sweep = b.sweep;
            }
            if let Some(a) = b.algos {
                cfg.algorithms = a;
            }
            if let Some(o) = b.objects {
                cfg.synthetic.objects = o;
            }
            if let Some(r) = b.runs {
                cfg.params.runs = r;
            }
            let rows = run_bench(&cfg)?;
            match &b.out {
                Some(p) => write_runs(fs::File::create(p).with_context(|| p.display().to_string())?, b.format, &rows)?,
                None => write_runs(io::stdout().lock(), b.format, &rows)?,
            }
        }
        Cmd::Audit { data, run, oracle_limit } => {
            let p = data.load()?;
            let cfg = run.params(60.0).index_config(&p)?;
            let t = ObjectIndex::build(&p, &cfg)?;
            let a = audit_bounds(&t, &p);
            let structure = audit_structure(&t, &p);
            println!("entries {} comparisons {} violations {}", a.entries, a.comparisons, a.violations.len());
            for v in a.violations.iter().take(20) {
                println!("violation {v:?}");
            }
            for m in &structure {
                println!("structure {m}");
            }
            let mut ok = a.violations.is_empty() && structure.is_empty();
            let ind_cm = ind(&t, &p, &IndConfig::default()).cm;
            let unpruned = ind(&t, &p, &IndConfig { prune: false, ..IndConfig::default() }).cm;
            let tbl = p.degree_table(Parallelism::Parallel);
            let bnl = bsl_table(&tbl, &BslConfig::default()).cm;
            let mut agree = ind_cm == unpruned && ind_cm == bnl;
            if p.objects.len() <= oracle_limit {
                agree &= brute_force_cm(&tbl, DominanceConfig::for_table(&tbl)) == ind_cm;
                println!("oracle cross-check: {}", if agree { "agree" } else { "DISAGREE" });
            } else {
                println!("oracle cross-check: skipped above {oracle_limit} objects; ind/bsl {}", if agree { "agree" } else { "DISAGREE" });
            }
            ok &= agree;
            if !ok {
                bail!("audit found problems");
            }
            println!("audit clean");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
