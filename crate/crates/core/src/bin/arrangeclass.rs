use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

// Output errors (a closed pipe) are ignored.
macro_rules! println {
    ($($t:tt)*) => {{
        let _ = writeln!(std::io::stdout(), $($t)*);
    }};
}

macro_rules! print {
    ($($t:tt)*) => {{
        let _ = write!(std::io::stdout(), $($t)*);
    }};
}

use arrangeclass::enumerate::{count_half_classes, enumerate_cached, estimate_ws_size, EnumerateOptions, DEFAULT_MEM_BYTES};
use arrangeclass::groupcmp::{invariant_profile, profiles_match, ProfileOptions, DEFAULT_TARGETS};
use arrangeclass::lattice::{canonical_form, lattice_of, multipoint_graph, structured_group_oracle, Mode};
use arrangeclass::moves::{self, TriangleOptions, WindowScope, DEFAULT_CLASS_CAP};
use arrangeclass::pi1::{compute_skeleton, compute_skeleton_partial, presentation};
use arrangeclass::pipeline::{is_extended, pipeline, process_signature, ClassificationReport, PipelineOptions};
use arrangeclass::render::{render, RenderKind};
use arrangeclass::sigs::{admissible_signatures, exclusions};
use arrangeclass::similarity::{classify_with, relation_table, RelationSet, SimilarityOptions};
use arrangeclass::{Error, LefschetzList, Result, Signature};

#[derive(Parser)]
#[command(name = "arrangeclass", version, about = "Classify wiring diagrams of real line arrangements")]
struct Cli {
    /// Directory for cached representative lists.
    #[arg(long, global = true, env = "ARRANGECLASS_CACHE")]
    cache: Option<PathBuf>,
    /// Memory budget for one half-product table, in GiB.
    #[arg(long, global = true, env = "ARRANGECLASS_MEM_GB")]
    mem_gb: Option<f64>,
    /// Allow the signatures that take hours to enumerate.
    #[arg(long, global = true)]
    extended: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Admissible signatures for a number of lines.
    Sigs {
        lines: usize,
        /// List the excluded solutions with the reason instead.
        #[arg(long)]
        exclusions: bool,
    },
    /// Minimal representatives of all commutation classes for a signature.
    Enumerate {
        signature: Signature,
        /// Points in the first half of the split.
        #[arg(long)]
        p0: Option<usize>,
        /// Print the representatives.
        #[arg(long)]
        list: bool,
        /// Also count the half-commutation classes.
        #[arg(long)]
        half: bool,
        /// Estimate the number of diagrams from this many sampled classes.
        #[arg(long)]
        estimate: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Similarity classes for a signature.
    Classify {
        signature: Signature,
        /// Relations to use: letters s (sigma), t (tau), m (mu), x (triangle).
        #[arg(long, default_value = "stmx")]
        rels: RelationSet,
        /// Print the class count for all 16 relation subsets.
        #[arg(long)]
        table: bool,
        /// Print one representative per class.
        #[arg(long)]
        list: bool,
        /// Smallest multiplicity of the point a triangle move passes.
        #[arg(long, default_value_t = 2)]
        triangle_min_width: usize,
    },
    /// Incidence lattice of a list, e.g. "l=4 (1,2)(2,4)(1,3)".
    Lattice {
        list: LefschetzList,
        /// Show the graph of multiple points and the structured groups.
        #[arg(long)]
        graph: bool,
    },
    /// Fundamental group presentation of a list.
    Pi1 {
        list: LefschetzList,
        #[arg(long, default_value = "affine")]
        mode: Mode,
        /// Output format: plain or gap.
        #[arg(long, default_value = "plain")]
        format: String,
        /// Print the skeleton of this point (1-based) instead.
        #[arg(long)]
        skeleton: Option<usize>,
        /// With --skeleton, stop after this many rotations.
        #[arg(long)]
        steps: Option<usize>,
        /// Print the invariant profile.
        #[arg(long)]
        profile: bool,
    },
    /// Compare group invariants of two lists.
    Compare {
        first: LefschetzList,
        second: LefschetzList,
        #[arg(long, default_value = "affine")]
        mode: Mode,
        /// Comma-separated target groups.
        #[arg(long, value_delimiter = ',')]
        targets: Option<Vec<String>>,
        #[arg(long, default_value_t = 3)]
        lcs_depth: usize,
    },
    /// SVG drawing of a list.
    Render {
        list: LefschetzList,
        #[arg(long, default_value = "wiring")]
        kind: RenderKind,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the whole pipeline and print a TSV report.
    Report {
        /// Number of lines; every admissible signature is processed.
        #[arg(required_unless_present = "signature")]
        lines: Option<usize>,
        /// Process a single signature.
        #[arg(long, conflicts_with = "lines")]
        signature: Option<Signature>,
        /// Also enumerate signatures with at most two multiple points.
        #[arg(long)]
        all_signatures: bool,
        /// Skip group invariants.
        #[arg(long)]
        no_groups: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Lists reachable by one move from a list.
    Moves {
        list: LefschetzList,
        /// tau, mu, sigma, triangle or all.
        #[arg(long, default_value = "all")]
        kind: String,
    },
}

fn enumerate_options(cli: &Cli, p0: Option<usize>) -> EnumerateOptions {
    let mem_bytes = cli.mem_gb.map_or(DEFAULT_MEM_BYTES, |g| (g * (1u64 << 30) as f64) as usize);
    EnumerateOptions { p0, mem_bytes }
}

fn gate(cli: &Cli, sig: &Signature) -> Result<()> {
    if is_extended(sig) && !cli.extended {
        return Err(Error::Input(format!("[{sig}] takes hours to enumerate; pass --extended to run it")));
    }
    Ok(())
}

fn write_out(path: Option<&PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Error::Input(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(text.as_bytes());
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Sigs { lines, exclusions: show } => {
            if *show {
                for e in exclusions(*lines)? {
                    println!("[{}]\t{}", e.signature, e.reason);
                }
            } else {
                for s in admissible_signatures(*lines)? {
                    println!("[{s}]");
                }
            }
        }
        Command::Enumerate { signature, p0, list, half, estimate, seed } => {
            gate(cli, signature)?;
            let opts = enumerate_options(cli, *p0);
            let omega = enumerate_cached(signature, &opts, cli.cache.as_deref())?;
            println!("[{signature}]\t{} classes", omega.len());
            if *half {
                println!("half classes\t{}", count_half_classes(signature, &opts)?);
            }
            if let Some(n) = estimate {
                let est = estimate_ws_size(&omega, *n, *seed, DEFAULT_CLASS_CAP)?;
                println!("diagrams\t{:.4e} +- {:.2e} (10^{:.2}; mean class size {:.1})", est.estimate, est.stderr, est.log10(), est.mean_class_size);
            }
            if *list {
                for r in &omega.reps {
                    println!("{r}");
                }
            }
        }
        Command::Classify { signature, rels, table, list, triangle_min_width } => {
            gate(cli, signature)?;
            let omega = enumerate_cached(signature, &enumerate_options(cli, None), cli.cache.as_deref())?;
            let sim = SimilarityOptions {
                triangle: TriangleOptions { min_width: *triangle_min_width, scope: WindowScope::Class },
            };
            if *table {
                println!("sigma\ttau\tmu\ttriangle\tclasses");
                for (r, n) in relation_table(&omega, &sim)? {
                    let s: Vec<String> = r.signs().chars().map(String::from).collect();
                    println!("{}\t{n}", s.join("\t"));
                }
            } else {
                let c = classify_with(&omega, *rels, &sim)?;
                println!("[{signature}]\t{} classes\t{} representatives", c.len(), omega.len());
                if *list {
                    for (comp, rep) in c.components.iter().zip(c.representatives(&omega)) {
                        println!("{}\t{rep}", comp.members.len());
                    }
                }
            }
        }
        Command::Lattice { list, graph } => {
            if !list.check_uip() {
                return Err(Error::Input(format!("{list} does not have the unique intersection property")));
            }
            let lat = lattice_of(list);
            print!("{}", canonical_form(&lat)?);
            if *graph {
                let g = multipoint_graph(&lat);
                println!("multiple points: {:?}", g.multiplicities);
                println!("edges: {}, forest: {}", g.edge_count(), g.is_forest());
                for mode in [Mode::Affine, Mode::Projective] {
                    match structured_group_oracle(&lat, mode) {
                        Some(gr) => println!("{mode}: {gr}"),
                        None => println!("{mode}: not determined by the graph"),
                    }
                }
            }
        }
        Command::Pi1 { list, mode, format, skeleton, steps, profile } => {
            if let Some(i) = skeleton {
                let s = match steps {
                    Some(k) => compute_skeleton_partial(list, *i, *k)?,
                    None => compute_skeleton(list, *i)?,
                };
                println!("{s}");
                return Ok(());
            }
            let p = presentation(list, *mode)?;
            match format.as_str() {
                "plain" => print!("{}", p.to_plain()),
                "gap" => print!("{}", p.to_gap()),
                other => return Err(Error::Input(format!("format must be plain or gap, got {other:?}"))),
            }
            if *profile {
                print!("{}", invariant_profile(&p, &ProfileOptions::default())?);
            }
        }
        Command::Compare { first, second, mode, targets, lcs_depth } => {
            let opts = ProfileOptions {
                targets: targets.clone().unwrap_or_else(|| DEFAULT_TARGETS.iter().map(|s| s.to_string()).collect()),
                lcs_depth: *lcs_depth,
                ..ProfileOptions::default()
            };
            let lattices = canonical_form(&lattice_of(first))? == canonical_form(&lattice_of(second))?;
            let verdict = profiles_match(&presentation(first, *mode)?, &presentation(second, *mode)?, &opts)?;
            println!("lattices\t{}", if lattices { "isomorphic" } else { "different" });
            println!("{mode} groups\t{verdict}");
        }
        Command::Render { list, kind, output } => write_out(output.as_ref(), &render(list, *kind))?,
        Command::Report { lines, signature, all_signatures, no_groups, output } => {
            let opts = PipelineOptions {
                enumerate: enumerate_options(cli, None),
                cache_dir: cli.cache.clone(),
                groups: !no_groups,
                extended: cli.extended,
                all_signatures: *all_signatures,
                ..PipelineOptions::default()
            };
            let report = match (lines, signature) {
                (_, Some(sig)) => {
                    gate(cli, sig)?;
                    ClassificationReport { rows: vec![process_signature(sig, &opts)?] }
                }
                (Some(l), None) => pipeline(*l, &opts)?,
                (None, None) => return Err(Error::Input("give a line count or --signature".into())),
            };
            write_out(output.as_ref(), &report.to_tsv())?;
            eprint!("{}", report.summary());
        }
        Command::Moves { list, kind } => {
            let rep = moves::equiv_class_min(list);
            let show = |name: &str, l: LefschetzList| println!("{name}\t{l}");
            let all = kind == "all";
            if !matches!(kind.as_str(), "all" | "tau" | "mu" | "sigma" | "triangle") {
                return Err(Error::Input(format!("unknown move kind {kind:?}")));
            }
            if all || kind == "tau" {
                show("tau", moves::equiv_class_min(&moves::tau(&rep)));
            }
            if all || kind == "mu" {
                show("mu", moves::mu(&rep)?);
            }
            if all || kind == "sigma" {
                for t in moves::sigma_class_targets(&rep)? {
                    show("sigma", t);
                }
            }
            if all || kind == "triangle" {
                for t in moves::triangle_moves(&rep, &TriangleOptions::default())? {
                    show("triangle", t);
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("arrangeclass: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
