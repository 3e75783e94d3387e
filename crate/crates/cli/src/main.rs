use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use tverberg_core::birch::count_rainbow_simplices;
use tverberg_core::config::{read_config, ColoredConfiguration, Mode};
use tverberg_core::experiments::{
    self, Column, CountOptions, ExperimentSpec, ScanParams, Source, TableParams, TightnessParams, COLORING_BUDGET,
    CSV_HEADER, DEFAULT_POLYGON_DENOM, DEFAULT_RANGE,
};
use tverberg_core::generators::Symmetry;
use tverberg_core::partition::{format_partition_list, parse_partition_list};
use tverberg_core::words::sweep_encode;

/// Tverberg runs above this many points need --heavy.
const TVERBERG_POINT_GUARD: usize = 19;

#[derive(Parser)]
#[command(
    name = "tverberg",
    version,
    about = "Exact counts of colored Birch and Tverberg partitions"
)]
struct Cli {
    /// Seed for generators; first seed of scans.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Include the partitions in count reports.
    #[arg(long, global = true)]
    emit_partitions: bool,
    /// Lift the default budget guards.
    #[arg(long, global = true)]
    heavy: bool,
    /// Allow Tverberg blocks with more than d+1 points.
    #[arg(long, global = true)]
    allow_large_blocks: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GenKind {
    Sierksma,
    Polygon,
    Random,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SymmetryArg {
    None,
    Colors,
    Dihedral,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ColumnArg {
    Sierksma,
    Polygon,
    Random,
}

#[derive(Args, Debug)]
struct SourceArgs {
    /// Configuration file.
    #[arg(long = "in", value_name = "PATH", conflicts_with_all = ["gen", "word"])]
    input: Option<PathBuf>,
    #[arg(long, value_enum, conflicts_with = "word")]
    gen: Option<GenKind>,
    /// Colored word such as +0-1+2 (realized in the plane).
    #[arg(long, allow_hyphen_values = true)]
    word: Option<String>,
    #[arg(short, long, default_value_t = 2)]
    dim: usize,
    /// Birch mode with k blocks.
    #[arg(short, conflicts_with = "r")]
    k: Option<usize>,
    /// Tverberg mode with r blocks.
    #[arg(short)]
    r: Option<usize>,
    /// Sierksma cluster radius.
    #[arg(long, default_value = "1/1000")]
    epsilon: String,
    /// Polygon grid denominator.
    #[arg(long, default_value_t = DEFAULT_POLYGON_DENOM)]
    denom: u64,
    /// Random coordinates are a/range with |a| <= range.
    #[arg(long, default_value_t = DEFAULT_RANGE)]
    range: u64,
    /// Replace the colors, comma separated, one per point.
    #[arg(long)]
    coloring: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Count colored Birch or Tverberg partitions of one configuration.
    Count {
        #[command(flatten)]
        source: SourceArgs,
        /// Also count uncolored Birch partitions.
        #[arg(long)]
        uncolored: bool,
        /// Write the partitions to this file, one per line.
        #[arg(long)]
        partitions: Option<PathBuf>,
        /// Record wall-clock time in the report.
        #[arg(long)]
        timings: bool,
    },
    /// Count random configurations over a range of seeds.
    Scan {
        #[arg(short, long, default_value_t = 2)]
        dim: usize,
        #[arg(short, conflicts_with = "r", required_unless_present = "r")]
        k: Option<usize>,
        #[arg(short)]
        r: Option<usize>,
        /// Number of seeds, starting at --seed.
        #[arg(long, default_value_t = 100)]
        seeds: u64,
        #[arg(long, default_value_t = DEFAULT_RANGE)]
        range: u64,
        #[arg(long)]
        timings: bool,
        /// Write the configurations attaining the minimum here.
        #[arg(long)]
        witness_dir: Option<PathBuf>,
    },
    /// Minimal colored Tverberg counts in the plane, with the lower bound.
    Table {
        #[arg(long, default_value_t = 2)]
        r_min: usize,
        #[arg(long, default_value_t = 8)]
        r_max: usize,
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = [ColumnArg::Sierksma, ColumnArg::Polygon, ColumnArg::Random])]
        columns: Vec<ColumnArg>,
        /// Random configurations per row.
        #[arg(long, default_value_t = 20)]
        samples: u64,
        #[arg(long, default_value_t = DEFAULT_RANGE)]
        range: u64,
    },
    /// Minimize the colored Tverberg count over all colorings of a geometry.
    MinColoring {
        #[arg(
            long = "in",
            value_name = "PATH",
            conflicts_with = "polygon",
            required_unless_present = "polygon"
        )]
        input: Option<PathBuf>,
        /// Use the polygon configuration with this many blocks.
        #[arg(long, value_name = "R")]
        polygon: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_POLYGON_DENOM)]
        denom: u64,
        #[arg(long, value_enum, default_value_t = SymmetryArg::Colors)]
        symmetry: SymmetryArg,
        /// Largest number of colorings to walk.
        #[arg(long, default_value_t = COLORING_BUDGET)]
        budget: u64,
    },
    /// Search for a Birch configuration whose count meets the lower bound.
    Tightness {
        #[arg(short, long, default_value_t = 2)]
        dim: usize,
        #[arg(short)]
        k: usize,
        #[arg(long, default_value_t = 100_000)]
        seeds: u64,
        #[arg(long, default_value_t = DEFAULT_RANGE)]
        range: u64,
        /// Also try realizations of random words (plane only).
        #[arg(long)]
        words: bool,
        /// Save the witness configuration here.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Write a generated configuration in the text format.
    Generate {
        #[command(flatten)]
        source: SourceArgs,
    },
    /// Re-check a partition list file against a configuration.
    Verify {
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
        #[arg(long)]
        partitions: PathBuf,
        /// Check Birch partitions without the rainbow condition.
        #[arg(long)]
        uncolored: bool,
    },
}

fn parse_coloring(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().with_context(|| format!("bad color {t:?}")))
        .collect()
}

fn resolve(args: &SourceArgs, seed: u64) -> Result<(Source, ColoredConfiguration)> {
    let source = if let Some(path) = &args.input {
        Source::File {
            path: path.display().to_string(),
        }
    } else if let Some(word) = &args.word {
        Source::Word {
            word: word.clone(),
            seed,
        }
    } else {
        let mode = match (args.k, args.r) {
            (Some(k), None) => Mode::Birch { k },
            (None, Some(r)) => Mode::Tverberg { r },
            _ => bail!("give -k (birch) or -r (tverberg)"),
        };
        match (args.gen, mode) {
            (Some(GenKind::Sierksma), Mode::Tverberg { r }) => Source::Sierksma {
                dim: args.dim,
                r,
                epsilon: args.epsilon.clone(),
                seed,
            },
            (Some(GenKind::Polygon), Mode::Tverberg { r }) => {
                if args.dim != 2 {
                    bail!("the polygon configuration is planar");
                }
                Source::Polygon { r, denom: args.denom }
            }
            (Some(GenKind::Random), mode) => Source::Random {
                dim: args.dim,
                mode,
                seed,
                range: args.range,
            },
            (Some(g), _) => bail!("{g:?} generates tverberg configurations; use -r"),
            (None, _) => bail!("give --in, --gen or --word"),
        }
    };
    let mut config = source.build()?;
    if let Some(c) = &args.coloring {
        config = config.with_colors(parse_coloring(c)?)?;
    }
    Ok((source, config))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn guard(config: &ColoredConfiguration, heavy: bool) -> Result<()> {
    if let Mode::Tverberg { .. } = config.mode() {
        if config.len() > TVERBERG_POINT_GUARD && !heavy {
            bail!(
                "{} points exceed the default budget of {TVERBERG_POINT_GUARD} for tverberg counts; pass --heavy",
                config.len()
            );
        }
    }
    Ok(())
}

fn spec_for(cli: &Cli, command: &str) -> ExperimentSpec {
    let mut spec = ExperimentSpec::new(command);
    spec.seed = cli.seed;
    spec.emit_partitions = cli.emit_partitions;
    spec.allow_large_blocks = cli.allow_large_blocks;
    spec.heavy = cli.heavy;
    spec
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Count {
            source,
            uncolored,
            partitions,
            timings,
        } => {
            let (src, config) = resolve(source, cli.seed)?;
            guard(&config, cli.heavy)?;
            let mut spec = spec_for(cli, "count");
            spec.source = Some(src);
            spec.dim = Some(config.dim());
            spec.mode = Some(config.mode());
            spec.timings = *timings;
            let emit_partitions = cli.emit_partitions || partitions.is_some();
            let mut outcome = experiments::count(
                &config,
                CountOptions {
                    emit_partitions,
                    allow_large_blocks: cli.allow_large_blocks,
                    uncolored: *uncolored,
                },
            )?;
            if !timings {
                outcome.report.elapsed_ms = None;
            }
            if let (Some(path), Some(list)) = (partitions, &outcome.report.partitions) {
                write_file(path, &format_partition_list(list))?;
            }
            let rainbow = match config.mode() {
                Mode::Birch { k: 2 } => Some(count_rainbow_simplices(&config)?),
                _ => None,
            };
            let word = match config.mode() {
                Mode::Birch { .. } if config.dim() == 2 => Some(sweep_encode(&config)?.to_string()),
                _ => None,
            };
            let text = match cli.format {
                Format::Json => {
                    let mut v = json!({ "spec": spec, "outcome": outcome });
                    if let Some(n) = rainbow {
                        v["rainbow_simplices"] = json!(n);
                    }
                    if let Some(w) = &word {
                        v["word"] = json!(w);
                    }
                    serde_json::to_string_pretty(&v)? + "\n"
                }
                Format::Csv => format!(
                    "# {}\n# spec {}\n{CSV_HEADER}\n{},{},{},{},{},{}\n",
                    spec.tool,
                    spec.to_json(),
                    cli.seed,
                    outcome.report.count,
                    outcome.verdict.even_ok,
                    outcome.verdict.bound_ok,
                    outcome.report.fingerprint.0,
                    outcome.report.elapsed_ms.map(|t| t.to_string()).unwrap_or_default()
                ),
                Format::Table => {
                    let mut s = String::new();
                    writeln!(s, "mode:        {} (d = {})", config.mode(), config.dim())?;
                    writeln!(s, "count:       {}", outcome.report.count)?;
                    if let Some(u) = outcome.uncolored {
                        writeln!(s, "uncolored:   {u}")?;
                    }
                    if let Some(n) = rainbow {
                        writeln!(s, "rainbow simplices containing the query: {n}")?;
                    }
                    if let Some(w) = &word {
                        writeln!(s, "word:        {w}")?;
                    }
                    if let Some(n) = outcome.tverberg_points {
                        writeln!(s, "tverberg points: {n}")?;
                    }
                    writeln!(s, "fingerprint: {}", outcome.report.fingerprint.0)?;
                    for c in &outcome.verdict.clauses {
                        if c.applies {
                            let cond = if c.unconditional { "" } else { " (if positive)" };
                            writeln!(
                                s,
                                "clause ({}) {}{}: {}",
                                c.clause,
                                c.description,
                                cond,
                                if c.passed { "ok" } else { "VIOLATED" }
                            )?;
                        }
                    }
                    if outcome.verdict.existence_violated {
                        writeln!(s, "existence: VIOLATED (r prime but no partition)")?;
                    }
                    if let Some(t) = outcome.report.elapsed_ms {
                        writeln!(s, "elapsed:     {t} ms")?;
                    }
                    if cli.emit_partitions {
                        if let Some(list) = &outcome.report.partitions {
                            s.push_str(&format_partition_list(list));
                        }
                    }
                    s
                }
            };
            emit(&cli.out, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Scan {
            dim,
            k,
            r,
            seeds,
            range,
            timings,
            witness_dir,
        } => {
            let mode = match (k, r) {
                (Some(k), _) => Mode::Birch { k: *k },
                (None, Some(r)) => Mode::Tverberg { r: *r },
                (None, None) => bail!("give -k or -r"),
            };
            let params = ScanParams {
                dim: *dim,
                mode,
                seed_start: cli.seed,
                seed_count: *seeds,
                range: *range,
                allow_large_blocks: cli.allow_large_blocks,
                timings: *timings,
            };
            if let Mode::Tverberg { r } = mode {
                if (dim + 1) * (r - 1) + 1 > TVERBERG_POINT_GUARD && !cli.heavy {
                    bail!("tverberg scan beyond the default budget; pass --heavy");
                }
            }
            let mut spec = spec_for(cli, "scan");
            spec.dim = Some(*dim);
            spec.mode = Some(mode);
            spec.seeds = Some(*seeds);
            spec.range = Some(*range);
            spec.timings = *timings;
            let summary = experiments::scan(params, spec);
            if let Some(dir) = witness_dir {
                std::fs::create_dir_all(dir)?;
                for &seed in &summary.min_seeds {
                    let c = tverberg_core::generators::make_random(*dim, mode, seed, *range)?;
                    write_file(&dir.join(format!("seed-{seed}.tv")), &c.to_text())?;
                }
            }
            let text = match cli.format {
                Format::Table => summary.to_table(),
                Format::Csv => summary.to_csv(),
                Format::Json => summary.to_json(),
            };
            emit(&cli.out, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Table {
            r_min,
            r_max,
            columns,
            samples,
            range,
        } => {
            let params = TableParams {
                r_min: *r_min,
                r_max: *r_max,
                columns: columns
                    .iter()
                    .map(|c| match c {
                        ColumnArg::Sierksma => Column::Sierksma,
                        ColumnArg::Polygon => Column::Polygon,
                        ColumnArg::Random => Column::Random,
                    })
                    .collect(),
                heavy: cli.heavy,
                seed: cli.seed,
                samples: *samples,
                range: *range,
            };
            let mut spec = spec_for(cli, "table");
            spec.dim = Some(2);
            spec.seeds = Some(*samples);
            spec.range = Some(*range);
            let t = experiments::table(&params, spec);
            let text = match cli.format {
                Format::Table => t.to_text(),
                Format::Csv => t.to_csv(),
                Format::Json => t.to_json(),
            };
            emit(&cli.out, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::MinColoring {
            input,
            polygon,
            denom,
            symmetry,
            budget,
        } => {
            let (source, config) = match (input, polygon) {
                (Some(p), _) => (
                    Source::File {
                        path: p.display().to_string(),
                    },
                    read_config(p)?,
                ),
                (None, Some(r)) => {
                    let s = Source::Polygon { r: *r, denom: *denom };
                    let c = s.build()?;
                    (s, c)
                }
                (None, None) => bail!("give --in or --polygon"),
            };
            guard(&config, cli.heavy)?;
            let symmetry = match symmetry {
                SymmetryArg::None => Symmetry::None,
                SymmetryArg::Colors => Symmetry::Colors,
                SymmetryArg::Dihedral => match source {
                    Source::Polygon { r, .. } => Symmetry::Dihedral(3 * (r - 1)),
                    _ => bail!("dihedral symmetry needs --polygon"),
                },
            };
            let budget = if cli.heavy { u64::MAX } else { *budget };
            let mut spec = spec_for(cli, "min-coloring");
            spec.source = Some(source);
            spec.dim = Some(config.dim());
            spec.mode = Some(config.mode());
            spec.symmetry = symmetry;
            let m = experiments::min_coloring(&config, symmetry, budget)?;
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&json!({ "spec": spec, "result": m }))? + "\n",
                Format::Csv => {
                    let mut s = format!("# {}\n# spec {}\ncount,colorings\n", spec.tool, spec.to_json());
                    for (c, n) in &m.histogram {
                        writeln!(s, "{c},{n}")?;
                    }
                    s
                }
                Format::Table => {
                    let w: Vec<String> = m.witness.iter().map(|c| c.to_string()).collect();
                    let hist: Vec<String> = m.histogram.iter().take(6).map(|(c, n)| format!("{c}:{n}")).collect();
                    format!(
                        "minimum:     {}\nwitness:     {}\ncolorings:   {}\ncatalog:     {} uncolored partitions\nlowest counts (count:colorings): {}\n",
                        m.min,
                        w.join(","),
                        m.colorings,
                        m.catalog_size,
                        hist.join(" ")
                    )
                }
            };
            emit(&cli.out, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Tightness {
            dim,
            k,
            seeds,
            range,
            words,
            witness,
        } => {
            let p = TightnessParams {
                dim: *dim,
                k: *k,
                seed_start: cli.seed,
                seed_count: *seeds,
                range: *range,
                words: *words,
            };
            let t = experiments::tightness(&p)?;
            if let (Some(path), Some(w)) = (witness, &t.witness) {
                write_file(path, &w.config)?;
            }
            let mut spec = spec_for(cli, "tightness");
            spec.dim = Some(*dim);
            spec.mode = Some(Mode::Birch { k: *k });
            spec.seeds = Some(*seeds);
            spec.range = Some(*range);
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&json!({ "spec": spec, "result": t }))? + "\n",
                Format::Csv => format!(
                    "# {}\n# spec {}\ntarget,tried,found,source\n{},{},{},{}\n",
                    spec.tool,
                    spec.to_json(),
                    t.target,
                    t.tried,
                    t.witness.is_some(),
                    t.witness
                        .as_ref()
                        .map(|w| serde_json::to_string(&w.source).unwrap_or_default().replace(',', ";"))
                        .unwrap_or_default()
                ),
                Format::Table => match &t.witness {
                    Some(w) => format!(
                        "target {} reached after {} seeds\nsource: {}\n{}",
                        t.target,
                        t.tried,
                        serde_json::to_string(&w.source)?,
                        w.config
                    ),
                    None => format!("target {}: not found in {} seeds\n", t.target, t.tried),
                },
            };
            emit(&cli.out, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Generate { source } => {
            let (_, config) = resolve(source, cli.seed)?;
            let text = match cli.format {
                Format::Json => {
                    serde_json::to_string_pretty(&json!({
                        "fingerprint": config.fingerprint().0,
                        "config": config.to_text(),
                    }))? + "\n"
                }
                _ => config.to_text(),
            };
            emit(&cli.out, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            input,
            partitions,
            uncolored,
        } => {
            let config = read_config(input)?;
            let text =
                std::fs::read_to_string(partitions).with_context(|| format!("reading {}", partitions.display()))?;
            let list = parse_partition_list(&text)?;
            let report = experiments::verify(&config, &list, *uncolored)?;
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&report)? + "\n",
                Format::Csv => format!(
                    "total,valid,invalid,distinct\n{},{},{},{}\n",
                    report.total,
                    report.valid,
                    report.invalid.len(),
                    report.distinct
                ),
                Format::Table => {
                    let mut s = format!(
                        "{} of {} partitions valid ({} distinct)\n",
                        report.valid, report.total, report.distinct
                    );
                    for i in &report.invalid {
                        writeln!(s, "invalid: entry {} {}", i + 1, list[*i])?;
                    }
                    s
                }
            };
            emit(&cli.out, &text)?;
            Ok(if report.ok() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.jobs > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    }
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
