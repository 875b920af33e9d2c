use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{info, warn};
use polyindex::indexdb::{build_database, load_database, save_database, BuildParams, VoteMode};
use polyindex::study::collision_study;
use polyindex::synth::{evaluate, synthesize, SceneOptions, SynthConfig};
use polyindex::{char_signature, d2_signature, read_graphs, CatalogueMode, ErrorKind, RunConfig, WeightedGraph};

mod manifest;
mod report;

use manifest::Manifest;
use report::{Format, Report};

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] polyindex::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}:{line}: {message}")]
    Manifest { path: PathBuf, line: usize, message: String },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        let kind = match self {
            CliError::Core(e) => e.kind(),
            CliError::Io { .. } => ErrorKind::Io,
            CliError::Manifest { .. } => ErrorKind::Parse,
            CliError::Usage(_) => ErrorKind::Invalid,
        };
        match kind {
            ErrorKind::Parse => 3,
            ErrorKind::Size => 4,
            ErrorKind::Io => 5,
            ErrorKind::Invalid => 1,
        }
    }
}

fn core(e: impl Into<polyindex::Error>) -> CliError {
    CliError::Core(e.into())
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.to_path_buf(), source })?;
    }
    fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Weighted,
    Binary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VoteArg {
    PerView,
    PerOccurrence,
}

/// Graph indexing of polyhedral line drawings by d2 polynomials.
#[derive(Debug, Parser)]
#[command(name = "polyindex", version)]
struct Cli {
    #[command(flatten)]
    opts: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalOpts {
    /// Neighborhood radius in edges.
    #[arg(long = "p", global = true)]
    radius: Option<usize>,
    #[arg(long, global = true)]
    min_nodes: Option<usize>,
    #[arg(long, global = true)]
    max_nodes: Option<usize>,
    /// Collinearity tolerance in degrees for T junctions and fusion.
    #[arg(long, global = true)]
    collinear_deg: Option<f64>,
    #[arg(long, value_enum, global = true)]
    mode: Option<ModeArg>,
    /// Largest graph a signature is computed for.
    #[arg(long, global = true)]
    n_max: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Database file.
    #[arg(long, global = true)]
    db: Option<PathBuf>,
    /// Output file (char, recognize, collide) or directory (synth).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, global = true, default_value = "table")]
    format: Format,
}

impl GlobalOpts {
    fn run_config(&self) -> Result<RunConfig, CliError> {
        let base = RunConfig::default();
        let run = RunConfig {
            radius: self.radius.unwrap_or(base.radius),
            min_nodes: self.min_nodes.unwrap_or(base.min_nodes),
            max_nodes: self.max_nodes.unwrap_or(base.max_nodes),
            collinear_deg: self.collinear_deg.unwrap_or(base.collinear_deg),
            mode: match self.mode {
                Some(ModeArg::Binary) => CatalogueMode::Binary,
                Some(ModeArg::Weighted) | None => CatalogueMode::Weighted,
            },
            signature_limit: self.n_max.unwrap_or(base.signature_limit),
            seed: self.seed.unwrap_or(base.seed),
        };
        run.validate().map_err(core)?;
        Ok(run)
    }

    fn overrides_window(&self) -> bool {
        self.radius.is_some() || self.min_nodes.is_some() || self.max_nodes.is_some()
    }

    fn require_db(&self) -> Result<&Path, CliError> {
        self.db.as_deref().ok_or_else(|| CliError::Usage("--db is required".into()))
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print d2 and characteristic polynomial signatures of graphs.
    Char {
        /// Graph file or line drawing.
        file: PathBuf,
    },
    /// Build a database from view manifests.
    Build {
        /// Manifest files with `view <object> <cv> <path>` lines.
        #[arg(required = true)]
        manifests: Vec<PathBuf>,
    },
    /// Recognize scenes against a database.
    Recognize {
        /// Scene drawings or graph files.
        #[arg(required = true)]
        scenes: Vec<PathBuf>,
        /// Ground-truth CV for every scene.
        #[arg(long, conflicts_with = "truth_file")]
        truth: Option<String>,
        /// File of `<scene file name> <cv>` lines, as written by `synth`.
        #[arg(long)]
        truth_file: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "per-view")]
        vote: VoteArg,
    },
    /// Count signature collisions among connected graphs on n nodes.
    Collide {
        n: usize,
        /// Report every size from 1 to n.
        #[arg(long)]
        all: bool,
    },
    /// Generate synthetic views, degraded scenes, a manifest and ground truth.
    Synth {
        #[arg(long, default_value_t = 6)]
        objects: usize,
        #[arg(long, default_value_t = 2)]
        views: usize,
        #[arg(long, default_value_t = 9)]
        scenes: usize,
        #[arg(long, default_value_t = 0.15)]
        deletion: f64,
        #[arg(long, default_value_t = 1)]
        occluders: usize,
        #[arg(long, default_value_t = 0.2)]
        occluder_size: f64,
        #[arg(long, default_value_t = 0.004)]
        jitter: f64,
        /// Also build a database from the views and score every scene.
        #[arg(long)]
        evaluate: bool,
    },
}

fn emit(opts: &GlobalOpts, report: &Report) -> Result<(), CliError> {
    let text = report.render(opts.format);
    match &opts.out {
        Some(path) => write(path, &text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|source| CliError::Io { path: "<stdout>".into(), source })
        }
    }
}

fn cmd_char(opts: &GlobalOpts, file: &Path) -> Result<(), CliError> {
    let run = opts.run_config()?;
    let text = read(file)?;
    let named: Vec<(String, WeightedGraph)> = if polyindex::graph::format::looks_like_graph_text(&text) {
        polyindex::graph::format::parse_graphs(&text).map_err(core)?.into_iter().map(|r| (r.name, r.graph)).collect()
    } else {
        read_graphs(&text, &run)?.into_iter().enumerate().map(|(i, g)| (format!("component{}", i + 1), g)).collect()
    };
    let mut report = Report::default();
    for (name, g) in &named {
        let l = g.laplacian();
        let d2 = d2_signature(&l, run.signature_limit).map_err(core)?;
        let cp = char_signature(&l, run.signature_limit).map_err(core)?;
        report.section(name.clone());
        report.field(format!("{name}.nodes"), "nodes", g.node_count().to_string());
        report.field(format!("{name}.edges"), "edges", g.edge_count().to_string());
        report.field(format!("{name}.d2"), "d2", d2.to_string());
        report.field(format!("{name}.char"), "char", cp.to_string());
    }
    emit(opts, &report)
}

fn cmd_build(opts: &GlobalOpts, manifests: &[PathBuf]) -> Result<(), CliError> {
    let run = opts.run_config()?;
    let db_path = opts.require_db()?;
    let mut specs = Vec::new();
    for path in manifests {
        let manifest = Manifest::parse(path, &read(path)?)?;
        for entry in manifest.entries {
            let text = read(&entry.path)?;
            let graphs = read_graphs(&text, &run)?;
            let graph = WeightedGraph::disjoint_union(&graphs).map_err(core)?;
            info!("view {} of {}: {} nodes in {} graphs", entry.view, entry.object, graph.node_count(), graphs.len());
            specs.push(polyindex::indexdb::ViewSpec::new(entry.object, entry.view, graph));
        }
    }
    if specs.is_empty() {
        return Err(CliError::Usage("no views listed in the manifests".into()));
    }
    let db = build_database(&specs, BuildParams::from(&run)).map_err(core)?;
    write(db_path, &save_database(&db).map_err(core)?)?;
    let r = db.report();
    let mut report = Report::default();
    report.section(format!("database {}", db_path.display()));
    report.field("objects", "objects", r.objects.to_string());
    report.field("views", "views", r.views.to_string());
    report.field("subgraphs", "subgraphs", r.subgraphs.to_string());
    report.field("entries", "entries", r.entries.to_string());
    for (size, count) in &r.entries_per_size {
        report.field(format!("entries.n{size}"), format!("entries n={size}"), count.to_string());
    }
    report.field("sharing_ratio", "sharing ratio", format!("{:.3}", r.sharing_ratio));
    report.field("accidents", "accidents", r.accidents.to_string());
    for (i, a) in db.accidents().iter().enumerate() {
        report.field(
            format!("accident.{}", i + 1),
            "accident",
            format!("{} stored from {} collides with {}", a.signature, a.stored_view, a.colliding_view),
        );
    }
    emit(opts, &report)
}

fn truth_map(path: &Path) -> Result<Vec<(String, String)>, CliError> {
    let text = read(path)?;
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or_default();
        match content.split_whitespace().collect::<Vec<_>>().as_slice() {
            [] => {}
            [scene, cv] => out.push((scene.to_string(), cv.to_string())),
            _ => {
                return Err(CliError::Manifest {
                    path: path.to_path_buf(),
                    line: idx + 1,
                    message: "expected '<scene file> <cv>'".into(),
                })
            }
        }
    }
    Ok(out)
}

fn cmd_recognize(
    opts: &GlobalOpts,
    scenes: &[PathBuf],
    truth: Option<&str>,
    truth_file: Option<&Path>,
    vote: VoteArg,
) -> Result<(), CliError> {
    let run = opts.run_config()?;
    let db = load_database(&read(opts.require_db()?)?).map_err(core)?;
    if let Some(t) = truth {
        db.require_view(t).map_err(core)?;
    }
    let truths = truth_file.map(truth_map).transpose()?.unwrap_or_default();
    let neighborhoods = if opts.overrides_window() { run.neighborhoods() } else { db.params().neighborhoods };
    if neighborhoods != db.params().neighborhoods {
        warn!("scene neighborhoods {neighborhoods:?} differ from the build's {:?}", db.params().neighborhoods);
    }
    if opts.mode.is_some() && run.mode != db.params().mode {
        warn!("--mode is ignored: the database was built in {} mode", db.params().mode);
    }
    let mode = match vote {
        VoteArg::PerView => VoteMode::PerView,
        VoteArg::PerOccurrence => VoteMode::PerOccurrence,
    };
    let mut report = Report::default();
    for (k, path) in scenes.iter().enumerate() {
        let graphs = read_graphs(&read(path)?, &run)?;
        let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        let truth = truth.map(str::to_string).or_else(|| truths.iter().find(|(s, _)| *s == name).map(|(_, cv)| cv.clone()));
        let tally = db.recognize_with(&graphs, neighborhoods, mode);
        report::scene_table(&mut report, k + 1, &path.display().to_string(), &graphs, &tally, truth.as_deref());
    }
    emit(opts, &report)
}

fn cmd_collide(opts: &GlobalOpts, n: usize, all: bool) -> Result<(), CliError> {
    let sizes: Vec<usize> = if all { (1..=n).collect() } else { vec![n] };
    let mut report = Report::default();
    report.header(["n", "classes", "d2-pairs", "char-pairs", "d2-graphs", "char-graphs"]);
    for size in sizes {
        let r = collision_study(size).map_err(core)?;
        report.row(
            format!("n{size}"),
            [
                ("classes", r.classes.to_string()),
                ("d2_collisions", r.d2_pairs.to_string()),
                ("char_collisions", r.char_pairs.to_string()),
                ("d2_graphs", r.d2_graphs.to_string()),
                ("char_graphs", r.char_graphs.to_string()),
            ],
            size.to_string(),
        );
    }
    emit(opts, &report)
}

fn cmd_synth(opts: &GlobalOpts, cfg: SynthConfig, run_eval: bool) -> Result<(), CliError> {
    let run = opts.run_config()?;
    let dir = opts.out.as_deref().ok_or_else(|| CliError::Usage("synth needs --out <directory>".into()))?;
    let set = synthesize(&cfg).map_err(core)?;
    let mut manifest = String::from("# object view path\n");
    for v in &set.views {
        let rel = format!("views/{}.drawing", v.view);
        write(&dir.join(&rel), &v.drawing.to_text())?;
        manifest += &format!("view {} {} {rel}\n", v.object, v.view);
    }
    let mut truth = String::from("# scene cv\n");
    for s in &set.scenes {
        let file = format!("{}.drawing", s.id);
        write(&dir.join("scenes").join(&file), &s.drawing.to_text())?;
        truth += &format!("{file} {}\n", s.truth);
    }
    write(&dir.join("manifest.txt"), &manifest)?;
    write(&dir.join("truth.txt"), &truth)?;

    let mut report = Report::default();
    report.section(format!("synthetic set in {}", dir.display()));
    report.field("seed", "seed", cfg.seed.to_string());
    report.field("views", "views", set.views.len().to_string());
    report.field("scenes", "scenes", set.scenes.len().to_string());
    if run_eval {
        let eval = evaluate(&set, &run)?;
        let correct = eval.outcomes.iter().filter(|o| o.correct()).count();
        report.field("correct", "top-1 correct", format!("{correct}/{}", eval.outcomes.len()));
        report.field("accuracy", "accuracy", format!("{:.3}", eval.accuracy()));
        report.field("median_ratio", "median ratio", format!("{:.3}", eval.median_ratio()));
    }
    let out_report = dir.join("report.txt");
    write(&out_report, &report.render(opts.format))?;
    print!("{}", report.render(opts.format));
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let opts = &cli.opts;
    match cli.command {
        Command::Char { file } => cmd_char(opts, &file),
        Command::Build { manifests } => cmd_build(opts, &manifests),
        Command::Recognize { scenes, truth, truth_file, vote } => {
            cmd_recognize(opts, &scenes, truth.as_deref(), truth_file.as_deref(), vote)
        }
        Command::Collide { n, all } => cmd_collide(opts, n, all),
        Command::Synth { objects, views, scenes, deletion, occluders, occluder_size, jitter, evaluate } => {
            let cfg = SynthConfig {
                objects,
                views_per_object: views,
                scenes_per_view: scenes,
                scene: SceneOptions { deletion_rate: deletion, occluders, occluder_size, jitter },
                seed: opts.seed.unwrap_or(0),
                ..SynthConfig::default()
            };
            cmd_synth(opts, cfg, evaluate)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
