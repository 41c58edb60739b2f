//! pathgate command-line interface: workload generation, profile
//! compilation, datapath simulation, reference evaluation, match-set
//! diffing, and the experiment grid.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use pathgate::datapath::{area_report, lower_to_datapath, Datapath, DatapathConfig};
use pathgate::dict::Dictionary;
use pathgate::events::{diff_events, events_from_csv, events_to_csv};
use pathgate::forest::{build_prefix_forest, PrefixForest};
use pathgate::ir::{dump_ir, lower_profile};
use pathgate::metrics::{run_grid, trend_check, GridSpec};
use pathgate::netlist::emit_netlist;
use pathgate::oracle;
use pathgate::profile::{parse_profile_file, ProfileAst, TagResolver};
use pathgate::sim::{run_stream, MatchEvent};
use pathgate::workload::{
    gen_document, gen_profiles, guide_paths_from_profiles, render_manifest, DocGenSpec,
    ProfileGenSpec,
};

#[derive(Parser)]
#[command(
    name = "pathgate",
    version,
    about = "XPath filter profiles compiled to a block datapath and simulated over XML streams"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a workload: dictionary, profiles, documents, manifest
    Gen(GenArgs),
    /// Compile profiles: IR dump, prefix forest, area report, netlist
    Compile(CompileArgs),
    /// Run documents through the compiled datapath; emit match CSV
    Run(RunArgs),
    /// Evaluate documents with the reference tree oracle; emit match CSV
    Oracle(OracleArgs),
    /// Compare two match CSVs for set equivalence
    Diff(DiffArgs),
    /// Run the experiment grid and the trend checks
    Bench(BenchArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Output directory
    #[arg(long)]
    out_dir: PathBuf,
    #[arg(long, default_value_t = 16)]
    profile_count: usize,
    #[arg(long, default_value_t = 2)]
    profile_length: usize,
    /// Fraction of parent-child axes among non-first steps
    #[arg(long, default_value_t = 0.5)]
    axis_mix: f64,
    #[arg(long, default_value_t = 0.5)]
    shared_prefix_rate: f64,
    /// Fraction of profiles starting with `//`
    #[arg(long, default_value_t = 0.0)]
    unanchored_rate: f64,
    /// Tag universe size
    #[arg(long, default_value_t = 12)]
    alphabet: usize,
    #[arg(long, default_value_t = 4)]
    doc_count: usize,
    /// Exact document size in bytes
    #[arg(long, default_value_t = 16384)]
    doc_size: usize,
    #[arg(long, default_value_t = 8)]
    doc_depth: usize,
    /// Probability of weaving a profile chain into a document
    #[arg(long, default_value_t = 0.3)]
    guide_rate: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args, Clone)]
struct CompileOpts {
    /// Profile file: one XPath expression per line
    #[arg(long)]
    profiles: PathBuf,
    /// Dictionary TSV; without it profile tags must already be two-symbol codes
    #[arg(long)]
    dict: Option<PathBuf>,
    /// Enable the common-prefix optimization
    #[arg(long)]
    prefix_share: bool,
    /// Enable the character pre-decoder
    #[arg(long)]
    char_decode: bool,
    /// Tag stack capacity
    #[arg(long, default_value_t = 64)]
    stack_depth: usize,
}

#[derive(Args)]
struct CompileArgs {
    #[command(flatten)]
    opts: CompileOpts,
    /// Write the IR dump here instead of stdout
    #[arg(long)]
    ir_dump: Option<PathBuf>,
    /// Write the structural netlist here
    #[arg(long)]
    netlist: Option<PathBuf>,
    /// Write the area report (JSON) here
    #[arg(long)]
    area_report: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    opts: CompileOpts,
    /// Write the match CSV here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Encoded document files, in doc_id order
    #[arg(required = true)]
    docs: Vec<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    /// Profile file: one XPath expression per line
    #[arg(long)]
    profiles: PathBuf,
    /// Dictionary TSV; without it profile tags must already be two-symbol codes
    #[arg(long)]
    dict: Option<PathBuf>,
    /// Write the match CSV here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Encoded document files, in doc_id order
    #[arg(required = true)]
    docs: Vec<PathBuf>,
}

#[derive(Args)]
struct DiffArgs {
    left: PathBuf,
    right: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated profile counts
    #[arg(long, default_value = "16,64,256,1024", value_delimiter = ',')]
    counts: Vec<usize>,
    /// Comma-separated profile lengths
    #[arg(long, default_value = "2,4,6", value_delimiter = ',')]
    lengths: Vec<usize>,
    #[arg(long, default_value_t = 0.5)]
    axis_mix: f64,
    #[arg(long, default_value_t = 0.5)]
    shared_prefix_rate: f64,
    #[arg(long, default_value_t = 12)]
    alphabet: usize,
    #[arg(long, default_value_t = 4)]
    doc_count: usize,
    #[arg(long, default_value_t = 16384)]
    doc_size: usize,
    #[arg(long, default_value_t = 8)]
    doc_depth: usize,
    #[arg(long, default_value_t = 0.3)]
    guide_rate: f64,
    #[arg(long, default_value_t = 64)]
    stack_depth: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Directory for the table CSV and trend report
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Compile(args) => cmd_compile(args),
        Command::Run(args) => cmd_run(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Diff(args) => cmd_diff(args),
        Command::Bench(args) => cmd_bench(args),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("pathgate: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn load_profiles(
    path: &Path,
    dict: &Option<PathBuf>,
) -> Result<(Vec<ProfileAst>, Option<Dictionary>)> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading profile file {}", path.display()))?;
    let dictionary = match dict {
        Some(p) => {
            let tsv = fs::read_to_string(p)
                .with_context(|| format!("reading dictionary {}", p.display()))?;
            Some(Dictionary::from_tsv(&tsv).context("parsing dictionary")?)
        }
        None => None,
    };
    let resolver = match &dictionary {
        Some(d) => TagResolver::Dict(d),
        None => TagResolver::Encoded,
    };
    let asts = parse_profile_file(&text, resolver).context("parsing profiles")?;
    Ok((asts, dictionary))
}

fn compile_datapath(opts: &CompileOpts) -> Result<(Vec<ProfileAst>, PrefixForest, Datapath)> {
    let (asts, _) = load_profiles(&opts.profiles, &opts.dict)?;
    let irs: Vec<_> = asts.iter().map(lower_profile).collect();
    let forest = build_prefix_forest(&irs).context("clustering profiles")?;
    let config = DatapathConfig {
        prefix_shared: opts.prefix_share,
        char_decoded: opts.char_decode,
        stack_depth: opts.stack_depth,
    };
    let dp = lower_to_datapath(&forest, config).context("lowering to datapath")?;
    Ok((asts, forest, dp))
}

fn write_or_print(target: &Option<PathBuf>, content: &str) -> Result<()> {
    match target {
        Some(path) => {
            fs::write(path, content).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{content}"),
    }
    Ok(())
}

fn cmd_gen(args: GenArgs) -> Result<ExitCode> {
    let profile_spec = ProfileGenSpec {
        count: args.profile_count,
        length: args.profile_length,
        axis_mix: args.axis_mix,
        shared_prefix_rate: args.shared_prefix_rate,
        unanchored_rate: args.unanchored_rate,
        alphabet: args.alphabet,
        seed: args.seed,
    };
    let generated = gen_profiles(&profile_spec).context("generating profiles")?;
    let asts = parse_profile_file(
        &generated.raws.join("\n"),
        TagResolver::Dict(&generated.dictionary),
    )
    .expect("generated profiles parse");
    let guides = guide_paths_from_profiles(&asts, generated.dictionary.codes()[0]);

    let docs_dir = args.out_dir.join("docs");
    fs::create_dir_all(&docs_dir).with_context(|| format!("creating {}", docs_dir.display()))?;
    let mut files = vec!["dictionary.tsv".to_owned(), "profiles.txt".to_owned()];
    fs::write(
        args.out_dir.join("dictionary.tsv"),
        generated.dictionary.to_tsv(),
    )?;
    fs::write(
        args.out_dir.join("profiles.txt"),
        generated.raws.join("\n") + "\n",
    )?;

    let doc_spec_base = DocGenSpec {
        size_bytes: args.doc_size,
        max_depth: args.doc_depth,
        guide_paths: guides,
        guide_rate: args.guide_rate,
        seed: args.seed,
    };
    for i in 0..args.doc_count {
        let doc = gen_document(
            &DocGenSpec {
                seed: args.seed.wrapping_add(0x0d0c + i as u64),
                ..doc_spec_base.clone()
            },
            &generated.dictionary,
        )
        .context("generating document")?;
        let name = format!("docs/doc_{i:04}.xml");
        fs::write(args.out_dir.join(&name), doc)?;
        files.push(name);
    }
    let manifest = render_manifest(&profile_spec, &doc_spec_base, args.doc_count, &files);
    fs::write(args.out_dir.join("manifest.txt"), manifest)?;
    eprintln!(
        "generated {} profiles and {} documents under {}",
        args.profile_count,
        args.doc_count,
        args.out_dir.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_compile(args: CompileArgs) -> Result<ExitCode> {
    let (asts, forest, dp) = compile_datapath(&args.opts)?;
    let irs: Vec<_> = asts.iter().map(lower_profile).collect();
    let ir_text = dump_ir(&irs);
    let report = area_report(&dp);
    if args.ir_dump.is_some() || args.netlist.is_some() || args.area_report.is_some() {
        if let Some(path) = &args.ir_dump {
            fs::write(path, &ir_text).with_context(|| format!("writing {}", path.display()))?;
        }
        if let Some(path) = &args.netlist {
            fs::write(path, emit_netlist(&dp))
                .with_context(|| format!("writing {}", path.display()))?;
        }
        if let Some(path) = &args.area_report {
            fs::write(path, report.to_json())
                .with_context(|| format!("writing {}", path.display()))?;
        }
    } else {
        print!("{ir_text}");
        println!("---");
        println!(
            "forest: {} trees, {} nodes, {} profiles",
            forest.trees.len(),
            forest.node_count(),
            forest.profile_count()
        );
        print!("{}", forest.render());
        println!("---");
        print!("{}", report.to_json());
    }
    Ok(ExitCode::SUCCESS)
}

fn read_docs(paths: &[PathBuf]) -> Result<Vec<(u32, Vec<u8>)>> {
    paths
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let bytes = fs::read(p).with_context(|| format!("reading document {}", p.display()))?;
            Ok((i as u32, bytes))
        })
        .collect()
}

fn cmd_run(args: RunArgs) -> Result<ExitCode> {
    let (_, _, dp) = compile_datapath(&args.opts)?;
    let docs = read_docs(&args.docs)?;
    let (outcomes, stats) = run_stream(&dp, &docs);
    let mut events: Vec<MatchEvent> = Vec::new();
    let mut failures = 0;
    for (outcome, path) in outcomes.into_iter().zip(&args.docs) {
        match outcome {
            Ok(mut doc_events) => events.append(&mut doc_events),
            Err(err) => {
                failures += 1;
                eprintln!("pathgate: {}: {err}", path.display());
            }
        }
    }
    write_or_print(&args.out, &events_to_csv(&events))?;
    eprintln!("{}", stats.render());
    if failures > 0 {
        eprintln!("pathgate: {failures} document(s) failed");
        return Ok(ExitCode::FAILURE);
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_oracle(args: OracleArgs) -> Result<ExitCode> {
    let (asts, _) = load_profiles(&args.profiles, &args.dict)?;
    let docs = read_docs(&args.docs)?;
    let mut events: Vec<MatchEvent> = Vec::new();
    let mut failures = 0;
    for ((doc_id, doc), path) in docs.iter().zip(&args.docs) {
        match oracle::parse_tree(doc) {
            Ok(tree) => events.extend(oracle::match_set(&tree, &asts, *doc_id)),
            Err(err) => {
                failures += 1;
                eprintln!("pathgate: {}: {err}", path.display());
            }
        }
    }
    write_or_print(&args.out, &events_to_csv(&events))?;
    if failures > 0 {
        eprintln!("pathgate: {failures} document(s) failed");
        return Ok(ExitCode::FAILURE);
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_diff(args: DiffArgs) -> Result<ExitCode> {
    let read = |p: &Path| -> Result<Vec<MatchEvent>> {
        let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
        events_from_csv(&text).with_context(|| format!("parsing {}", p.display()))
    };
    let left = read(&args.left)?;
    let right = read(&args.right)?;
    let outcome = diff_events(&left, &right);
    println!("{}", outcome.render());
    if outcome.is_equivalent() {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::FAILURE)
    }
}

fn cmd_bench(args: BenchArgs) -> Result<ExitCode> {
    let spec = GridSpec {
        counts: args.counts,
        lengths: args.lengths,
        scenarios: pathgate::datapath::Scenario::ALL.to_vec(),
        axis_mix: args.axis_mix,
        shared_prefix_rate: args.shared_prefix_rate,
        unanchored_rate: 0.0,
        alphabet: args.alphabet,
        stack_depth: args.stack_depth,
        doc_count: args.doc_count,
        doc_size: args.doc_size,
        doc_depth: args.doc_depth,
        guide_rate: args.guide_rate,
        seed: args.seed,
    };
    let table = run_grid(&spec).context("running the experiment grid")?;
    let report = trend_check(&table);
    match &args.out_dir {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            fs::write(dir.join("grid.csv"), table.to_csv())?;
            fs::write(dir.join("trends.txt"), report.render())?;
            eprintln!(
                "wrote {}/grid.csv and {}/trends.txt",
                dir.display(),
                dir.display()
            );
        }
        None => {
            print!("{}", table.to_csv());
            println!("---");
            print!("{}", report.render());
        }
    }
    if report.passed() {
        Ok(ExitCode::SUCCESS)
    } else {
        bail!("trend checks failed:\n{}", report.render());
    }
}
