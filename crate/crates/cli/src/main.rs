use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use webdimer::basisgen::{sl2_basis, sl3_basis_with};
use webdimer::dimers::{boundary_measurement_with, enumerate_dimer_covers_with, face_weight};
use webdimer::enumeration::{
    degree_counts, dihedral_orbits, enumerate_sl3_tree_webs_with, enumerate_sl4_tree_webs_with, tree_count_closed_form,
};
use webdimer::io;
use webdimer::pairing::{duality_matrix_with, pair_with_monomial, pair_with_poly, twist_expand_with, MonomialList};
use webdimer::par::{set_workers, Exec};
use webdimer::plabic::{make_rectangle_graph, PlabicGraph};
use webdimer::plucker::twist_matrix;
use webdimer::subsets::parse_usize_list;
use webdimer::verify::{run_suite, VerifyConfig, DEFAULT_SEED};

mod render;

use render::{Format, Output, Table};

#[derive(Parser)]
#[command(name = "webdimer", version, about = "Exact plabic graphs, dimer covers, webs and the twist")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for random rational points and samples.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Worker threads (default: available cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Run every loop sequentially.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum BasisKind {
    Sl2,
    Sl3,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a web basis for degree (1^n).
    Basis {
        #[arg(value_enum)]
        kind: BasisKind,
        #[arg(short)]
        n: usize,
        /// Write one file per web, named by Yamanouchi word.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dimer cover tools.
    Dimers {
        #[command(subcommand)]
        command: DimersCommand,
    },
    /// Boundary measurement of a weighted network.
    Measure {
        #[arg(long)]
        network: PathBuf,
    },
    /// Pair a web with a Plücker monomial or polynomial.
    Pair {
        #[arg(long)]
        web: PathBuf,
        /// Monomial as `I1;I2;...` with comma-separated index sets.
        #[arg(long, conflicts_with = "poly", required_unless_present = "poly")]
        monomials: Option<String>,
        #[arg(long)]
        poly: Option<PathBuf>,
    },
    /// Pairing matrix between two basis directories.
    Duality {
        #[arg(long = "basisA", alias = "basis-a")]
        basis_a: PathBuf,
        #[arg(long = "basisB", alias = "basis-b")]
        basis_b: PathBuf,
        /// Print the summary against the transpose matching; exit 1 if not dual.
        #[arg(long)]
        report: bool,
    },
    /// Twist of a matrix point.
    TwistMatrix {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Twist of a Plücker polynomial as a Laurent polynomial in face labels.
    TwistExpand {
        #[arg(long)]
        poly: PathBuf,
        #[command(flatten)]
        graph: GraphArgs,
    },
    /// Tree web counts and bounds.
    Count {
        #[command(subcommand)]
        command: CountCommand,
    },
    /// Run acceptance checks.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        /// Directory of SL_4 web files for the optional duality spot checks.
        #[arg(long)]
        sl4_dir: Option<PathBuf>,
    },
}

#[derive(clap::Args)]
#[group(required = true, multiple = false)]
struct GraphArgs {
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Built-in rectangle graph `k,n`.
    #[arg(long)]
    rectangle: Option<String>,
}

#[derive(Subcommand)]
enum DimersCommand {
    /// Enumerate r-dimer covers with boundary degrees lambda.
    Enum {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(short)]
        r: usize,
        #[arg(long)]
        lambda: String,
    },
}

#[derive(Subcommand)]
enum CountCommand {
    /// Standard SL_3 tree webs of Plücker degree r.
    Trees {
        #[arg(long)]
        r: usize,
    },
    /// Distinct invariants of standard SL_4 tree webs.
    Sl4Trees {
        #[arg(short, default_value_t = 12)]
        n: usize,
    },
    /// Tree-web lower bound for Gr(3, n) cluster monomials.
    LowerBound {
        #[arg(short)]
        n: usize,
    },
}

/// Failure of a command: exit code and a machine-readable reason.
struct Failure {
    code: u8,
    kind: String,
    message: String,
}

impl From<webdimer::Error> for Failure {
    fn from(e: webdimer::Error) -> Failure {
        let code = match e {
            webdimer::Error::Parse(_)
            | webdimer::Error::Io(_)
            | webdimer::Error::Json(_)
            | webdimer::Error::OutOfRange(_) => 2,
            _ => 1,
        };
        Failure { code, kind: e.kind().to_string(), message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, kind: "usage".into(), message: message.into() }
}

fn load_graph(args: &GraphArgs) -> Result<PlabicGraph, Failure> {
    match (&args.graph, &args.rectangle) {
        (Some(p), _) => Ok(io::read_graph(p)?),
        (None, Some(spec)) => {
            let kn = parse_usize_list(spec)?;
            let [k, n] = kn[..] else {
                return Err(usage(format!("--rectangle expects k,n, got {spec:?}")));
            };
            Ok(make_rectangle_graph(k, n)?)
        }
        (None, None) => Err(usage("one of --graph or --rectangle is required")),
    }
}

fn run(cli: &Cli) -> Result<(Output, bool), Failure> {
    let exec = if cli.sequential { Exec::Sequential } else { Exec::Parallel };
    match &cli.command {
        Command::Basis { kind, n, out } => {
            let webs = match kind {
                BasisKind::Sl2 => sl2_basis(*n)?,
                BasisKind::Sl3 => sl3_basis_with(&vec![1; *n], exec)?,
            };
            let mut entries = Vec::new();
            let mut table = Table::new(&["index", "word", "vertices", "edges"]);
            for (i, w) in webs.iter().enumerate() {
                let name = io::basis_file_name(w)?;
                let word = name.trim_end_matches(".json").to_string();
                table.row(vec![i.to_string(), word.clone(), w.num_vertices().to_string(), w.edges().len().to_string()]);
                entries.push(json!({ "word": word, "web": w.to_json() }));
            }
            let value = match out {
                Some(dir) => {
                    let names = io::write_basis_dir(dir, &webs)?;
                    json!({ "count": webs.len(), "dir": dir.display().to_string(), "files": names })
                }
                None => json!({ "count": webs.len(), "webs": entries }),
            };
            Ok((Output::new(value).with_table(table), true))
        }
        Command::Dimers { command: DimersCommand::Enum { graph, r, lambda } } => {
            let g = load_graph(graph)?;
            let lambda = parse_usize_list(lambda)?;
            let covers = enumerate_dimer_covers_with(&g, *r, &lambda, exec)?;
            let mut table = Table::new(&["index", "edges (id:mult)", "face weight terms"]);
            let mut list = Vec::new();
            for (i, d) in covers.iter().enumerate() {
                let edges: BTreeMap<String, u8> = d
                    .mult
                    .iter()
                    .enumerate()
                    .filter(|(_, &m)| m > 0)
                    .map(|(e, &m)| (g.edge_id(e).to_string(), m))
                    .collect();
                let fw = face_weight(&g, d)?;
                let compact: Vec<String> = edges.iter().map(|(e, m)| format!("{e}:{m}")).collect();
                table.row(vec![i.to_string(), compact.join(" "), serde_json::to_string(&fw.to_json_terms()).unwrap_or_default()]);
                list.push(json!({ "edges": edges, "face_weight": fw.to_json_terms() }));
            }
            let value = json!({ "r": r, "lambda": lambda, "count": covers.len(), "covers": list });
            Ok((Output::new(value).with_table(table), true))
        }
        Command::Measure { network } => {
            let net = io::read_network(network)?;
            let pv = boundary_measurement_with(&net, exec)?;
            let mut table = Table::new(&["I", "Delta_I"]);
            let mut map = BTreeMap::new();
            for (s, v) in pv.sorted() {
                table.row(vec![s.to_string(), v.to_string()]);
                map.insert(s.to_string(), v.to_string());
            }
            Ok((Output::new(json!({ "k": pv.k(), "n": pv.n(), "plucker": map })).with_table(table), true))
        }
        Command::Pair { web, monomials, poly } => {
            let w = io::read_web(web)?;
            let value = match (monomials, poly) {
                (Some(m), _) => pair_with_monomial(&w, &MonomialList::parse(m)?)?.to_string(),
                (None, Some(p)) => pair_with_poly(&w, &io::read_poly(p, None, Some(w.n()))?)?.to_string(),
                (None, None) => return Err(usage("one of --monomials or --poly is required")),
            };
            Ok((Output::new(json!({ "pairing": value })), true))
        }
        Command::Duality { basis_a, basis_b, report } => {
            let a: Vec<_> = io::read_web_dir(basis_a)?.into_iter().map(|(_, w)| w).collect();
            let b: Vec<_> = io::read_web_dir(basis_b)?.into_iter().map(|(_, w)| w).collect();
            let (_, rep) = duality_matrix_with(&a, &b, exec)?;
            let dual = rep.is_dual();
            let value = if *report {
                json!({
                    "shape": [rep.rows, rep.cols],
                    "matched": rep.matching.len(),
                    "diagonal": rep.matched_entries,
                    "diagonal_unit": rep.diagonal_unit,
                    "off_diagonal_zero": rep.off_diagonal_zero,
                    "prefilter_hits": rep.prefilter_hits,
                    "prefilter_sound": rep.prefilter_sound,
                    "dual": dual,
                })
            } else {
                serde_json::to_value(&rep).map_err(webdimer::Error::from)?
            };
            let mut table = Table::new(&["row", "col", "entry"]);
            for (&(i, j), v) in rep.matching.iter().zip(&rep.matched_entries) {
                table.row(vec![i.to_string(), j.to_string(), v.to_string()]);
            }
            Ok((Output::new(value).with_table(table), !*report || dual))
        }
        Command::TwistMatrix { matrix } => {
            let m = io::read_matrix(matrix)?;
            let t = twist_matrix(&m)?;
            let pv = t.plucker_vector();
            let mut table = Table::new(&["I", "Delta_I(twist)"]);
            let mut map = BTreeMap::new();
            for (s, v) in pv.sorted() {
                table.row(vec![s.to_string(), v.to_string()]);
                map.insert(s.to_string(), v.to_string());
            }
            Ok((Output::new(json!({ "twist": io::matrix_to_json(&t), "plucker": map })).with_table(table), true))
        }
        Command::TwistExpand { poly, graph } => {
            let g = load_graph(graph)?;
            let f = io::read_poly(poly, Some(g.k()), Some(g.n()))?;
            let t = twist_expand_with(&f, &g, exec)?;
            let mut table = Table::new(&["coeff", "monomial"]);
            for term in t.to_json_terms() {
                let mono: Vec<String> = term.mono.iter().map(|(s, e)| format!("[{s}]^{e}")).collect();
                table.row(vec![term.coeff.clone(), mono.join(" ")]);
            }
            Ok((Output::new(serde_json::to_value(t.to_json_terms()).map_err(webdimer::Error::from)?).with_table(table), true))
        }
        Command::Count { command } => match command {
            CountCommand::Trees { r } => {
                let webs = enumerate_sl3_tree_webs_with(*r, exec)?;
                let orbits: Vec<usize> = dihedral_orbits(&webs).iter().map(Vec::len).collect();
                let closed = tree_count_closed_form(*r);
                let mut table = Table::new(&["r", "trees", "closed form", "orbit sizes"]);
                table.row(vec![r.to_string(), webs.len().to_string(), closed.to_string(), format!("{orbits:?}")]);
                let value = json!({ "r": r, "count": webs.len(), "closed_form": closed.to_string(), "orbit_sizes": orbits });
                Ok((Output::new(value).with_table(table), webs.len() as u128 == closed))
            }
            CountCommand::Sl4Trees { n } => {
                let (_, rep) = enumerate_sl4_tree_webs_with(*n, cli.seed, exec)?;
                let mut table = Table::new(&["n", "trees", "distinct invariants", "orbit sizes", "convention"]);
                table.row(vec![
                    rep.n.to_string(),
                    rep.trees.to_string(),
                    rep.distinct_invariants.to_string(),
                    format!("{:?}", rep.orbit_sizes),
                    rep.convention.clone(),
                ]);
                Ok((Output::new(serde_json::to_value(&rep).map_err(webdimer::Error::from)?).with_table(table), true))
            }
            CountCommand::LowerBound { n } => {
                let d = degree_counts(*n)?;
                let mut table = Table::new(&["r", "C(n,3r)", "T(r)", "product"]);
                for (r, c, t, p) in &d.lower_bound_terms {
                    table.row(vec![r.to_string(), c.clone(), t.clone(), p.clone()]);
                }
                table.row(vec!["total".into(), String::new(), String::new(), d.lower_bound.clone()]);
                Ok((Output::new(serde_json::to_value(&d).map_err(webdimer::Error::from)?).with_table(table), true))
            }
        },
        Command::Verify { suite, sl4_dir } => {
            let cfg = VerifyConfig { seed: cli.seed, exec, sl4_dir: sl4_dir.clone() };
            let reports = run_suite(suite, &cfg)?;
            let passed = reports.iter().all(|r| r.passed);
            let mut table = Table::new(&["criterion", "result", "name", "summary"]);
            for r in &reports {
                let tag = if r.passed { "PASS" } else { "FAIL" };
                table.row(vec![r.id.to_string(), tag.into(), r.name.clone(), r.summary.clone()]);
            }
            let value = json!({ "suite": suite, "seed": cli.seed, "passed": passed, "criteria": reports });
            Ok((Output::new(value).with_table(table), passed))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{}", e.render());
            let first = e.to_string().lines().next().unwrap_or_default().trim_start_matches("error: ").to_string();
            eprintln!("{}", json!({ "error": { "kind": "usage", "message": first } }));
            return ExitCode::from(2);
        }
    };
    if let Some(w) = cli.workers {
        set_workers(w);
    }
    match run(&cli) {
        Ok((out, ok)) => {
            print!("{}", out.render(cli.format));
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            eprintln!("{}", json!({ "error": { "kind": f.kind, "message": f.message } }));
            ExitCode::from(f.code)
        }
    }
}
