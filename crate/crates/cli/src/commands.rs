use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use hierperc::graphgen::{sample_graph, GraphConfig};
use hierperc::montecarlo::{self, EstimatorSpec, VERSION};
use hierperc::theory::lemma21_verify;
use hierperc::{Lemma21Report64, TheoryProfile64};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::RunArgs;

/// The configuration file: graph parameters plus the experiments to run.
#[derive(Debug, Deserialize)]
struct RunFile {
    #[serde(flatten)]
    graph: GraphConfig,
    #[serde(default)]
    experiments: Vec<EstimatorSpec>,
}

/// A parsed invocation with the seed override already applied.
#[derive(Debug)]
pub struct Manifest {
    pub config: GraphConfig,
    pub experiments: Vec<EstimatorSpec>,
    pub out: PathBuf,
    pub seed_overridden: bool,
}

impl Manifest {
    pub fn load(args: &RunArgs) -> CliResult<Self> {
        let path = args
            .config
            .as_ref()
            .ok_or_else(|| CliError::Usage("--config PATH is required".into()))?;
        let text = fs::read_to_string(path).map_err(CliError::io(path))?;
        let file: RunFile = serde_json::from_str(&text).map_err(|source| CliError::Json {
            path: path.clone(),
            source,
        })?;
        let config = match args.seed {
            Some(seed) => file.graph.with_seed(seed),
            None => file.graph,
        };
        fs::create_dir_all(&args.out).map_err(CliError::io(&args.out))?;
        Ok(Self {
            config,
            experiments: file.experiments,
            out: args.out.clone(),
            seed_overridden: args.seed.is_some(),
        })
    }

    fn fingerprint(&self) -> String {
        montecarlo::fingerprint(&self.config, &self.experiments)
    }

    fn check_size(&self, limit: u64) -> CliResult<()> {
        let vertices = self.config.hierarchy().vertex_count();
        if vertices > limit {
            return Err(CliError::TooLarge { vertices, limit });
        }
        Ok(())
    }

    fn create(&self, name: &str) -> CliResult<(PathBuf, BufWriter<File>)> {
        let path = self.out.join(name);
        let file = File::create(&path).map_err(CliError::io(&path))?;
        Ok((path, BufWriter::new(file)))
    }

    fn write_json<T: Serialize>(&self, name: &str, value: &T) -> CliResult<PathBuf> {
        let (path, mut w) = self.create(name)?;
        serde_json::to_writer_pretty(&mut w, value).map_err(|source| CliError::Json {
            path: path.clone(),
            source,
        })?;
        writeln!(w).and_then(|_| w.flush()).map_err(CliError::io(&path))?;
        Ok(path)
    }
}

#[derive(Serialize)]
struct TheoryFile<'a> {
    version: &'static str,
    fingerprint: String,
    config: &'a GraphConfig,
    seed_overridden: bool,
    profile: TheoryProfile64,
    lemma: Lemma21Report64,
}

pub fn theory(run: &Manifest, tail_limit: usize) -> CliResult<()> {
    let cfg = &run.config;
    let profile = TheoryProfile64::build(cfg.order(), cfg.depth() as usize, cfg.rule(), tail_limit)?;
    let lemma = lemma21_verify(cfg.c())?;
    let verdict = format!("{:?}", profile.criterion.verdict);
    let path = run.write_json(
        "theory.json",
        &TheoryFile {
            version: VERSION,
            fingerprint: run.fingerprint(),
            config: cfg,
            seed_overridden: run.seed_overridden,
            profile,
            lemma,
        },
    )?;
    println!("wrote {} (criterion: {verdict})", path.display());
    Ok(())
}

#[derive(Serialize)]
struct ReportFile<'a> {
    seed_overridden: bool,
    #[serde(flatten)]
    report: &'a montecarlo::RunReport,
}

pub fn simulate(run: &Manifest, max_vertices: u64) -> CliResult<()> {
    if run.experiments.is_empty() {
        return Err(CliError::Usage("the configuration lists no experiments".into()));
    }
    run.check_size(max_vertices)?;
    let report = montecarlo::run_all(&run.config, &run.experiments)?;
    let json = run.write_json(
        "report.json",
        &ReportFile {
            seed_overridden: run.seed_overridden,
            report: &report,
        },
    )?;
    let (csv, w) = run.create("report.csv")?;
    report.write_csv(w)?;
    for row in report.experiments.iter().flat_map(|e| &e.comparisons) {
        println!(
            "{:?} {} (level {}): observed {:.6}, predicted {:.6}, {}",
            row.verdict,
            row.experiment,
            row.level,
            row.observed,
            row.predicted,
            row.tolerance.describe()
        );
    }
    println!("wrote {} and {}", json.display(), csv.display());
    if report.warnings() > 0 {
        eprintln!("hierperc: {} conjecture-level comparison(s) outside tolerance", report.warnings());
    }
    match report.hard_failures() {
        0 => Ok(()),
        failures => Err(CliError::HardFailures { failures }),
    }
}

pub fn dump_graph(run: &Manifest, max_vertices: u64) -> CliResult<()> {
    run.check_size(max_vertices)?;
    let graph = sample_graph(&run.config);
    let (path, mut w) = run.create("graph.edges")?;
    let io = CliError::io(&path);
    graph
        .write_edge_list(&mut w)
        .and_then(|_| writeln!(w, "# fingerprint {}", run.fingerprint()))
        .and_then(|_| writeln!(w, "# version {VERSION}"))
        .and_then(|_| writeln!(w, "# seed {}", run.config.seed()))
        .and_then(|_| w.flush())
        .map_err(io)?;
    println!("wrote {} ({} edges)", path.display(), graph.edge_count());
    Ok(())
}
