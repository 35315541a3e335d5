//! `quiverflag`: JSON reports on quiver flag varieties.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{json, Value};

use quiverflag::io::{
    matrix_to_document, parse_cox, parse_representation, parse_spec, QuiverDocument,
};
use quiverflag::moduli::{echelon_chart, is_special_stable, special_weight};
use quiverflag::plucker::{
    plucker_ambient, plucker_quiver, plucker_quiver_auto, PluckerMode, PluckerQuiver,
};
use quiverflag::schur::{
    endomorphism_dim, strong_exceptionality_check, tilting_rank, tilting_summands,
};
use quiverflag::toric::{kernel_binomials, quiver_of_sections, GradedCoxData};
use quiverflag::toric_cohomology::{cohomology_dims, Method};
use quiverflag::{Error, QuiverFlagSpec};

#[derive(Parser)]
#[command(
    name = "quiverflag",
    version,
    about = "Invariants of quiver flag varieties"
)]
struct Cli {
    /// Worker threads for the parallel parts of a computation.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dimension, anticanonical data, stability weight and irrelevant ideal.
    Analyze { quiver: PathBuf },
    /// Summands, rank and endomorphism algebra of the tilting bundle.
    Tilting { quiver: PathBuf },
    /// Line bundle cohomology on a toric quiver flag variety.
    Cohomology {
        quiver: PathBuf,
        /// Exponents of det W_1, ..., det W_rho, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        theta: String,
        /// Shell radius of the lattice search.
        #[arg(long, default_value_t = 8)]
        radius: usize,
        #[arg(long, value_enum, default_value_t = MethodArg::Exact)]
        method: MethodArg,
    },
    /// Quiver of sections of a sequence of toric line bundles.
    Sections {
        cox: PathBuf,
        /// Degrees delta_0; delta_1; ..., each comma separated.
        #[arg(long, allow_hyphen_values = true)]
        degrees: String,
        /// Path length bound for the kernel binomials.
        #[arg(long, default_value_t = 2)]
        bound: usize,
    },
    /// Multigraded Pluecker quiver and its ambient variety.
    Plucker {
        quiver: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
        mode: ModeArg,
        /// Arrow counts for the ambient, e.g. "0:1=6,0:2=24,1:2=2".
        #[arg(long)]
        counts: Option<String>,
    },
    /// Degree-bounded surjectivity probe of the Cox ring map.
    ProbeCox {
        quiver: PathBuf,
        #[arg(long, default_value_t = 2)]
        bound: u32,
    },
    /// Stability of a representation and its echelon chart.
    Stability {
        quiver: PathBuf,
        representation: PathBuf,
    },
    /// Contract vertices with r_i = s_i = 1.
    Simplify { quiver: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Exact,
    Lattice,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    ToricExact,
    GenericRank,
    Auto,
}

enum Failure {
    Lib(Error),
    Io(PathBuf, std::io::Error),
    /// A report was printed, but the search budget ran out.
    Budget(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::EmptyModuli { .. } => 3,
        Error::NotStrict(_)
        | Error::NotToric(_)
        | Error::OutOfBottRange { .. }
        | Error::WeightLength { .. }
        | Error::NotDominant(_)
        | Error::ShapeMismatch(_)
        | Error::NotStable { .. }
        | Error::NotACharacter(_)
        | Error::NotPointed(_)
        | Error::NotWeaklyExceptional { .. }
        | Error::InvalidDegrees(_) => 4,
        Error::SearchBudgetExceeded { .. } => 5,
        Error::ArrowOutOfRange { .. }
        | Error::NoVertices
        | Error::CyclicQuiver(_)
        | Error::MultipleSources(_)
        | Error::UnreachableVertex(_)
        | Error::InvalidDims(_)
        | Error::Parse(_) => 2,
    }
}

fn s(v: impl Display) -> Value {
    Value::String(v.to_string())
}

fn strings<T: Display>(vs: impl IntoIterator<Item = T>) -> Value {
    Value::Array(vs.into_iter().map(s).collect())
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn load_spec(path: &Path) -> Result<QuiverFlagSpec, Failure> {
    Ok(parse_spec(&read(path)?)?)
}

fn parse_ints(text: &str) -> Result<Vec<i64>, Error> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("expected an integer, got {:?}", t.trim())))
        })
        .collect()
}

fn parse_counts(text: &str) -> Result<BTreeMap<(usize, usize), BigUint>, Error> {
    let bad = || {
        Error::Parse(format!(
            "expected counts like \"0:1=6,1:2=2\", got {text:?}"
        ))
    };
    let mut out = BTreeMap::new();
    for item in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (pair, count) = item.split_once('=').ok_or_else(bad)?;
        let (i, j) = pair.split_once(':').ok_or_else(bad)?;
        let i = i.trim().parse().map_err(|_| bad())?;
        let j = j.trim().parse().map_err(|_| bad())?;
        out.insert((i, j), count.trim().parse().map_err(|_| bad())?);
    }
    Ok(out)
}

/// Canonical vertex labels are topological; `order[k]` is the input label of vertex `k`.
fn analyze(spec: &QuiverFlagSpec) -> Result<Value, Error> {
    let dim = spec.dimension()?;
    let degrees = spec.degree_vectors();
    let mut report = json!({
        "nonempty": spec.is_nonempty(),
        "strict": spec.is_strict(),
        "toric": spec.is_toric(),
        "order": strings(spec.input_labels()),
        "dims": strings(spec.dims()),
        "dim": s(dim),
        "rho": s(spec.rho()),
        "s": strings(&degrees.incoming[1..]),
        "s_prime": strings(&degrees.outgoing[1..]),
        "antican": strings(spec.anticanonical_exponents()?),
        "fano": spec.fano_sufficient(),
        "theta": strings(special_weight(spec)),
        "unstable_codim": s(spec.unstable_codimension()?),
    });
    if spec.is_toric() {
        let components: Vec<Value> = (1..=spec.rho())
            .map(|i| {
                strings(
                    spec.quiver()
                        .arrows_into(i)
                        .map(|(idx, _)| format!("y{}", idx + 1)),
                )
            })
            .collect();
        report["irrelevant_components"] = Value::Array(components);
    }
    Ok(report)
}

fn tilting(spec: &QuiverFlagSpec) -> Result<Value, Error> {
    let summands = tilting_summands(spec)?;
    let certificate = strong_exceptionality_check(spec)?;
    let list: Vec<Value> = summands
        .iter()
        .map(|t| Value::Array(t.weights().iter().map(|w| strings(w.entries())).collect()))
        .collect();
    Ok(json!({
        "summands": list,
        "count": s(summands.len()),
        "rank": s(tilting_rank(spec)?),
        "endomorphism_dim": s(endomorphism_dim(spec)?),
        "pairs_checked": s(certificate.pairs_checked),
        "all_in_range": certificate.all_in_range,
    }))
}

fn cohomology(spec: &QuiverFlagSpec, theta: &str, method: Method) -> Result<Value, Failure> {
    let theta = parse_ints(theta)?;
    let report = cohomology_dims(spec, &theta, method)?;
    let value = json!({
        "theta": strings(&report.theta),
        "h": strings(&report.h),
        "stabilized": report.stabilized,
        "radius": report.radius.map(s).unwrap_or(Value::Null),
    });
    match report.require_stabilized() {
        Ok(()) => Ok(value),
        Err(e) => {
            println!("{}", pretty(&value));
            Err(Failure::Budget(e))
        }
    }
}

fn sections(data: &GradedCoxData, degrees: &str, bound: usize) -> Result<Value, Error> {
    let degrees = degrees
        .split(';')
        .map(parse_ints)
        .collect::<Result<Vec<_>, _>>()?;
    let sq = quiver_of_sections(data, &degrees)?;
    let arrows: Vec<Value> = sq
        .quiver
        .arrows()
        .iter()
        .zip(&sq.labels)
        .map(|(a, label)| {
            json!({
                "tail": s(a.tail),
                "head": s(a.head),
                "label": data.format_monomial(label),
                "exponents": strings(label),
            })
        })
        .collect();
    let counts: Vec<Value> = sq
        .arrow_counts()
        .iter()
        .map(|((i, j), n)| json!({"i": s(i), "j": s(j), "n": s(n)}))
        .collect();
    let binomials = kernel_binomials(&sq, bound);
    Ok(json!({
        "vertices": s(sq.quiver.vertex_count()),
        "degrees": Value::Array(sq.degrees.iter().map(strings).collect()),
        "arrows": arrows,
        "counts": counts,
        "binomials": Value::Array(binomials.iter().map(s).collect()),
        "bound": s(bound),
    }))
}

fn pair_table(q: &PluckerQuiver) -> Value {
    Value::Array(
        q.pairs
            .iter()
            .map(|p| {
                json!({
                    "i": s(p.i),
                    "j": s(p.j),
                    "dim_hom": s(&p.dim_hom),
                    "factoring": s(&p.factoring),
                    "n_prime": s(&p.n_prime),
                    "mode": mode_name(p.mode),
                })
            })
            .collect(),
    )
}

fn mode_name(mode: PluckerMode) -> &'static str {
    match mode {
        PluckerMode::ToricExact => "toric-exact",
        PluckerMode::GenericRank => "generic-rank",
    }
}

fn plucker(spec: &QuiverFlagSpec, mode: ModeArg, counts: Option<&str>) -> Result<Value, Error> {
    let q = match mode {
        ModeArg::ToricExact => plucker_quiver(spec, PluckerMode::ToricExact)?,
        ModeArg::GenericRank => plucker_quiver(spec, PluckerMode::GenericRank)?,
        ModeArg::Auto => plucker_quiver_auto(spec)?,
    };
    let (source, counts) = match counts {
        Some(text) => ("supplied", parse_counts(text)?),
        None => ("computed", q.counts()),
    };
    let ambient = plucker_ambient(spec, &counts)?;
    let count_list: Vec<Value> = counts
        .iter()
        .map(|((i, j), n)| json!({"i": s(i), "j": s(j), "n": s(n)}))
        .collect();
    Ok(json!({
        "mode": mode_name(q.mode),
        "pairs": pair_table(&q),
        "ambient": {
            "counts": count_list,
            "counts_source": source,
            "dim": s(ambient.dim),
            "codim": s(ambient.codim),
        },
    }))
}

fn probe_cox(spec: &QuiverFlagSpec, bound: u32) -> Result<Value, Error> {
    let entries = quiverflag::plucker::cox_probe(spec, bound)?;
    let list: Vec<Value> = entries
        .iter()
        .map(|e| {
            json!({
                "theta": strings(&e.theta),
                "image": s(&e.image),
                "target": s(&e.target),
                "surjective": e.surjective,
            })
        })
        .collect();
    Ok(json!({
        "bound": s(bound),
        "all_surjective": entries.iter().all(|e| e.surjective),
        "degrees": list,
    }))
}

fn stability(spec: &QuiverFlagSpec, rep_text: &str) -> Result<Value, Error> {
    let rep = parse_representation(spec, rep_text)?;
    if !is_special_stable(spec, &rep) {
        let ranks: Vec<usize> = rep.blocks().iter().map(|b| b.rank()).collect();
        return Ok(json!({
            "status": "unstable",
            "ranks": strings(ranks),
            "expected": strings(&spec.dims()[1..]),
        }));
    }
    let chart = echelon_chart(spec, &rep)?;
    let pivots: Vec<Value> = chart.pivots.iter().map(strings).collect();
    let blocks: Vec<Value> = chart
        .normal_form
        .blocks()
        .iter()
        .map(|b| json!(matrix_to_document(b)))
        .collect();
    Ok(json!({
        "status": "stable",
        "pivots": pivots,
        "normal_form": blocks,
        "free_entries": s(chart.free_entries),
    }))
}

fn simplify(spec: &QuiverFlagSpec) -> Value {
    let simple = spec.simplify();
    let doc = QuiverDocument::from_spec(&simple);
    json!({
        "vertices": s(doc.vertices),
        "arrows": Value::Array(doc.arrows.iter().map(|(t, h)| json!([s(t), s(h)])).collect()),
        "dims": strings(&doc.dims),
    })
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("reports are plain JSON")
}

fn run(cli: Cli) -> Result<Value, Failure> {
    match cli.command {
        Command::Analyze { quiver } => Ok(analyze(&load_spec(&quiver)?)?),
        Command::Tilting { quiver } => Ok(tilting(&load_spec(&quiver)?)?),
        Command::Cohomology {
            quiver,
            theta,
            radius,
            method,
        } => {
            let method = match method {
                MethodArg::Exact => Method::Exact,
                MethodArg::Lattice => Method::Lattice { radius },
            };
            cohomology(&load_spec(&quiver)?, &theta, method)
        }
        Command::Sections {
            cox,
            degrees,
            bound,
        } => Ok(sections(&parse_cox(&read(&cox)?)?, &degrees, bound)?),
        Command::Plucker {
            quiver,
            mode,
            counts,
        } => Ok(plucker(&load_spec(&quiver)?, mode, counts.as_deref())?),
        Command::ProbeCox { quiver, bound } => Ok(probe_cox(&load_spec(&quiver)?, bound)?),
        Command::Stability {
            quiver,
            representation,
        } => {
            let spec = load_spec(&quiver)?;
            Ok(stability(&spec, &read(&representation)?)?)
        }
        Command::Simplify { quiver } => Ok(simplify(&load_spec(&quiver)?)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs.max(1))
        .build_global()
    {
        eprintln!(
            "warning: could not configure {} worker threads: {e}",
            cli.jobs
        );
    }
    match run(cli) {
        Ok(report) => {
            println!("{}", pretty(&report));
            ExitCode::SUCCESS
        }
        Err(Failure::Lib(e)) | Err(Failure::Budget(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
        Err(Failure::Io(path, e)) => {
            eprintln!("error: cannot read {}: {e}", path.display());
            ExitCode::from(2)
        }
    }
}
