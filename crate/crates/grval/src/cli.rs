//! Command-line front end: parses algebra-spec files, dispatches the
//! library computations, and prints human-readable tables or
//! machine-readable JSON.
//!
//! Exit codes: 0 for success or a passing verdict, 1 for a mathematical
//! failure verdict (non-confluence, failed reduction, property failures),
//! 2 for input errors. Identical inputs and seeds produce byte-identical
//! JSON.

use std::error::Error;
use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use serde::Serialize;

use crate::field::{Field, PrimeField, Rationals};
use crate::ncpoly::Presentation;
use crate::pbw::Confluence;
use crate::reduction::{
    good_reduction_check, graded_relation_check, lie_reduce, GradedRelationTable, LieData,
    ReductionReport,
};
use crate::specfile::{
    build_lie, build_pbw, build_presentation, parse_lie_json, parse_spec_file, parse_vectors,
    render_residue_pbw_spec, AlgebraKind, AlgebraSection, FieldChoice, ResidueEmbedding, SpecFile,
};
use crate::valfilt::{CheckFailure, DoubleGradedTable, GaussContext, ValueFunctionReport};
use crate::valued_field::{Val, ValuedField};
use crate::{lattice, FORMAT_VERSION};

type CliResult = Result<i32, Box<dyn Error>>;

const DEFAULT_SEED: u64 = 20200613;

#[derive(Parser)]
#[command(
    name = "grval",
    version,
    about = "Exact valuation filtrations on PBW algebras over valued fields"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check that the rewrite rules of a pbw spec file are confluent.
    CheckPbw {
        spec: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Gauss valuation of an expression in a pbw algebra.
    Val {
        spec: PathBuf,
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long)]
        json: bool,
    },
    /// Principal symbol (degree and residue) of a nonzero expression.
    Symbol {
        spec: PathBuf,
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long)]
        json: bool,
    },
    /// Normal form of an expression on the standard monomial basis.
    Nf {
        spec: PathBuf,
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long)]
        json: bool,
    },
    /// Graded or filtered dimension table.
    Hilbert {
        spec: PathBuf,
        #[arg(long)]
        max_degree: usize,
        #[arg(long, value_enum, default_value_t = HilbertMode::Graded)]
        mode: HilbertMode,
        #[arg(long)]
        json: bool,
    },
    /// Compare Hilbert functions over the base and residue fields.
    GoodReduction {
        spec: PathBuf,
        #[arg(long)]
        max_degree: usize,
        #[arg(long)]
        json: bool,
    },
    /// Compare leading-relation quotient dimensions with filtered
    /// increments (the graded side of the lifting picture).
    GradedCheck {
        spec: PathBuf,
        #[arg(long)]
        max_degree: usize,
        #[arg(long)]
        json: bool,
    },
    /// Rescale and reduce Lie structure constants; emit the enveloping
    /// spec of the reduction.
    LieReduce {
        /// JSON constants file, or an algebra-spec file with a [lie]
        /// section (then the file's [field] is used and --p must be
        /// omitted).
        constants: PathBuf,
        /// p-adic prime, required for JSON constants input.
        #[arg(long)]
        p: Option<u64>,
        /// Write the enveloping spec of the reduced Lie algebra here.
        #[arg(long)]
        emit_spec: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Randomized property suite: value-function axioms, symbol
    /// multiplicativity, filtration compatibility, double-graded table.
    Props {
        spec: PathBuf,
        #[arg(long, default_value_t = 200)]
        samples: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        height: u64,
        /// Total-degree bound for random elements.
        #[arg(long, default_value_t = 4)]
        element_degree: u32,
        /// Degree bound of the double-graded table.
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
        /// Half-width of the Laurent-degree window.
        #[arg(long, default_value_t = 3)]
        gamma_window: i64,
        #[arg(long)]
        json: bool,
    },
    /// Lattice toolkit over the valuation ring; JSON in, JSON out.
    Lattice {
        #[command(subcommand)]
        op: LatticeOp,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum HilbertMode {
    Graded,
    Filtered,
}

#[derive(Args)]
struct LatticeCommon {
    /// Input JSON file; "-" reads standard input.
    #[arg(long)]
    input: PathBuf,
    /// p-adic prime over the rationals.
    #[arg(long, conflicts_with = "t_adic")]
    p: Option<u64>,
    /// Use a rational function field with the t-adic valuation.
    #[arg(long)]
    t_adic: bool,
    /// Coefficient prime for --t-adic; omit for rational coefficients.
    #[arg(long, requires = "t_adic")]
    q: Option<u64>,
}

#[derive(Subcommand)]
enum LatticeOp {
    /// Triangular basis of the module generated by "vectors".
    Basis {
        #[command(flatten)]
        common: LatticeCommon,
    },
    /// Intersection of the module "lattice" with the span of "subspace".
    Intersect {
        #[command(flatten)]
        common: LatticeCommon,
    },
    /// Image of "lattice" in the quotient by the span of "subspace".
    Quotient {
        #[command(flatten)]
        common: LatticeCommon,
    },
    /// Elementary divisors of "sub" inside "sup".
    Divisors {
        #[command(flatten)]
        common: LatticeCommon,
    },
    /// Reduction dimension and unramifiedness of the module of "vectors".
    Reduce {
        #[command(flatten)]
        common: LatticeCommon,
    },
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn dispatch(cli: Cli) -> CliResult {
    match cli.cmd {
        Cmd::CheckPbw { spec, json } => cmd_check_pbw(&spec, json),
        Cmd::Val { spec, expr, json } => cmd_val(&spec, &expr, json),
        Cmd::Symbol { spec, expr, json } => cmd_symbol(&spec, &expr, json),
        Cmd::Nf { spec, expr, json } => cmd_nf(&spec, &expr, json),
        Cmd::Hilbert {
            spec,
            max_degree,
            mode,
            json,
        } => cmd_hilbert(&spec, max_degree, mode, json),
        Cmd::GoodReduction {
            spec,
            max_degree,
            json,
        } => cmd_good_reduction(&spec, max_degree, json),
        Cmd::GradedCheck {
            spec,
            max_degree,
            json,
        } => cmd_graded_check(&spec, max_degree, json),
        Cmd::LieReduce {
            constants,
            p,
            emit_spec,
            json,
        } => cmd_lie_reduce(&constants, p, emit_spec.as_deref(), json),
        Cmd::Props {
            spec,
            samples,
            seed,
            height,
            element_degree,
            max_degree,
            gamma_window,
            json,
        } => cmd_props(
            &spec,
            samples,
            seed,
            height,
            element_degree,
            max_degree,
            gamma_window,
            json,
        ),
        Cmd::Lattice { op } => cmd_lattice(op),
    }
}

fn read_input(path: &Path) -> Result<String, Box<dyn Error>> {
    if path.as_os_str() == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        Ok(buf)
    } else {
        Ok(std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?)
    }
}

fn load_spec(path: &Path) -> Result<(SpecFile, FieldChoice), Box<dyn Error>> {
    let text = read_input(path)?;
    let file = parse_spec_file(&text)?;
    let choice = FieldChoice::from_section(&file.field)?;
    Ok((file, choice))
}

fn algebra_section(file: &SpecFile) -> Result<&AlgebraSection, Box<dyn Error>> {
    file.algebra
        .as_ref()
        .ok_or_else(|| "spec file has no [algebra] section".into())
}

fn pbw_section(file: &SpecFile) -> Result<&AlgebraSection, Box<dyn Error>> {
    let section = algebra_section(file)?;
    if section.kind != AlgebraKind::Pbw {
        return Err("this command requires an [algebra] section with kind = \"pbw\"".into());
    }
    Ok(section)
}

fn print_json<T: Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("report serializes")
    );
}

macro_rules! with_field {
    ($choice:expr, |$k:ident| $body:expr) => {
        match $choice {
            FieldChoice::PAdic($k) => $body,
            FieldChoice::TAdicPrime($k) => $body,
            FieldChoice::TAdicRationals($k) => $body,
        }
    };
}

// ---------------------------------------------------------------------------
// check-pbw
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct WitnessOut {
    triple: Vec<String>,
    left: String,
    right: String,
}

#[derive(Serialize)]
struct CheckPbwOut {
    format_version: u32,
    command: &'static str,
    field: String,
    generators: Vec<String>,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<WitnessOut>,
}

fn cmd_check_pbw(path: &Path, json: bool) -> CliResult {
    let (file, choice) = load_spec(path)?;
    let section = pbw_section(&file)?;
    with_field!(choice, |k| {
        let spec = build_pbw(&k, section)?;
        let (pass, witness) = match spec.confluence_check() {
            Confluence::Pass => (true, None),
            Confluence::Fail {
                witness,
                left,
                right,
            } => {
                let names = spec.gen_names();
                (
                    false,
                    Some(WitnessOut {
                        triple: vec![
                            names[witness.0].clone(),
                            names[witness.1].clone(),
                            names[witness.2].clone(),
                        ],
                        left: spec.format(&left),
                        right: spec.format(&right),
                    }),
                )
            }
        };
        let out = CheckPbwOut {
            format_version: FORMAT_VERSION,
            command: "check-pbw",
            field: k.describe(),
            generators: spec.gen_names().to_vec(),
            pass,
            witness,
        };
        if json {
            print_json(&out);
        } else if pass {
            println!("confluence check: PASS");
        } else {
            let w = out.witness.as_ref().expect("failing check has a witness");
            println!("confluence check: FAIL");
            println!("overlap: {}", w.triple.join("*"));
            println!("  left normal form:  {}", w.left);
            println!("  right normal form: {}", w.right);
        }
        Ok(if pass { 0 } else { 1 })
    })
}

// ---------------------------------------------------------------------------
// val / symbol / nf
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct ValOut {
    format_version: u32,
    command: &'static str,
    field: String,
    expr: String,
    valuation: Val,
}

fn cmd_val(path: &Path, expr: &str, json: bool) -> CliResult {
    let (file, choice) = load_spec(path)?;
    let section = pbw_section(&file)?;
    with_field!(choice, |k| {
        let ctx = GaussContext::new(k.clone(), build_pbw(&k, section)?)?;
        let el = ctx.spec().parse(expr)?;
        let v = ctx.gauss_valuation(&el);
        let out = ValOut {
            format_version: FORMAT_VERSION,
            command: "val",
            field: k.describe(),
            expr: expr.to_string(),
            valuation: v,
        };
        if json {
            print_json(&out);
        } else {
            println!("{v}");
        }
        Ok(0)
    })
}

#[derive(Serialize)]
struct SymbolOut {
    format_version: u32,
    command: &'static str,
    field: String,
    expr: String,
    degree: i64,
    residue: String,
}

fn cmd_symbol(path: &Path, expr: &str, json: bool) -> CliResult {
    let (file, choice) = load_spec(path)?;
    let section = pbw_section(&file)?;
    with_field!(choice, |k| {
        let ctx = GaussContext::new(k.clone(), build_pbw(&k, section)?)?;
        let el = ctx.spec().parse(expr)?;
        let s = ctx.principal_symbol(&el)?;
        let out = SymbolOut {
            format_version: FORMAT_VERSION,
            command: "symbol",
            field: k.describe(),
            expr: expr.to_string(),
            degree: s.degree,
            residue: ctx.format_residue(&s.residue),
        };
        if json {
            print_json(&out);
        } else {
            println!("degree {}", out.degree);
            println!("residue {}", out.residue);
        }
        Ok(0)
    })
}

#[derive(Serialize)]
struct NfOut {
    format_version: u32,
    command: &'static str,
    field: String,
    expr: String,
    normal_form: String,
}

fn cmd_nf(path: &Path, expr: &str, json: bool) -> CliResult {
    let (file, choice) = load_spec(path)?;
    let section = pbw_section(&file)?;
    with_field!(choice, |k| {
        let spec = build_pbw(&k, section)?;
        let nf = spec.parse(expr)?;
        let out = NfOut {
            format_version: FORMAT_VERSION,
            command: "nf",
            field: k.describe(),
            expr: expr.to_string(),
            normal_form: spec.format(&nf),
        };
        if json {
            print_json(&out);
        } else {
            println!("{}", out.normal_form);
        }
        Ok(0)
    })
}

// ---------------------------------------------------------------------------
// hilbert
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct HilbertOut {
    format_version: u32,
    command: &'static str,
    field: String,
    mode: &'static str,
    max_degree: usize,
    dims: Vec<u64>,
}

fn presentation_of<K: ValuedField>(
    k: &K,
    section: &AlgebraSection,
) -> Result<Presentation<K>, Box<dyn Error>> {
    match section.kind {
        AlgebraKind::Presentation => Ok(build_presentation(k, section)?),
        AlgebraKind::Pbw => {
            // read the rewrite equations as relations of the free algebra
            let spec = build_pbw(k, section)?;
            let alg = spec.free_algebra();
            Ok(Presentation::new(alg, spec.defining_relations())?)
        }
    }
}

fn cmd_hilbert(path: &Path, max_degree: usize, mode: HilbertMode, json: bool) -> CliResult {
    let (file, choice) = load_spec(path)?;
    let section = algebra_section(&file)?;
    with_field!(choice, |k| {
        let (dims, mode_name) = match mode {
            HilbertMode::Graded => {
                let pres = presentation_of(&k, section)?;
                (pres.hilbert_graded(max_degree)?, "graded")
            }
            HilbertMode::Filtered => {
                let section = pbw_section(&file)?;
                let spec = build_pbw(&k, section)?;
                if let Confluence::Fail { witness, .. } = spec.confluence_check() {
                    let names = spec.gen_names();
                    return Err(format!(
                        "filtered dimensions need a confluent spec; overlap ({}, {}, {}) fails",
                        names[witness.0], names[witness.1], names[witness.2]
                    )
                    .into());
                }
                (spec.filtered_dims(max_degree), "filtered")
            }
        };
        let out = HilbertOut {
            format_version: FORMAT_VERSION,
            command: "hilbert",
            field: k.describe(),
            mode: mode_name,
            max_degree,
            dims,
        };
        if json {
            print_json(&out);
        } else {
            let row: Vec<String> = out.dims.iter().map(u64::to_string).collect();
            println!("{}", row.join(" "));
        }
        Ok(0)
    })
}

// ---------------------------------------------------------------------------
// good-reduction
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct GoodReductionOut {
    format_version: u32,
    command: &'static str,
    field: String,
    #[serde(flatten)]
    report: ReductionReport,
}

fn cmd_good_reduction(path: &Path, max_degree: usize, json: bool) -> CliResult {
    let (file, choice) = load_spec(path)?;
    let section = algebra_section(&file)?;
    with_field!(choice, |k| {
        let pres = presentation_of(&k, section)?;
        let report = good_reduction_check(&k, &pres, max_degree)?;
        let good = report.good();
        let out = GoodReductionOut {
            format_version: FORMAT_VERSION,
            command: "good-reduction",
            field: k.describe(),
            report,
        };
        if json {
            print_json(&out);
        } else {
            println!("degree  dim_K  dim_kv  equal");
            for row in &out.report.rows {
                println!(
                    "{:<7} {:<6} {:<7} {}",
                    row.degree,
                    row.dim_base,
                    row.dim_residue,
                    if row.equal { "yes" } else { "NO" }
                );
            }
            match out.report.verdict {
                crate::reduction::Verdict::GoodReduction => println!(
                    "verdict: good reduction up to degree {} (graded reductor: yes)",
                    out.report.max_degree
                ),
                crate::reduction::Verdict::FailsAtDegree { degree } => {
                    println!("verdict: fails at degree {degree} (graded reductor: no)")
                }
            }
        }
        Ok(if good { 0 } else { 1 })
    })
}

// ---------------------------------------------------------------------------
// graded-check
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct GradedCheckOut {
    format_version: u32,
    command: &'static str,
    field: String,
    #[serde(flatten)]
    table: GradedRelationTable,
}

fn cmd_graded_check(path: &Path, max_degree: usize, json: bool) -> CliResult {
    let (file, choice) = load_spec(path)?;
    let section = pbw_section(&file)?;
    with_field!(choice, |k| {
        let ctx = GaussContext::new(k.clone(), build_pbw(&k, section)?)?;
        let table = graded_relation_check(&ctx, max_degree)?;
        let pass = table.all_equal;
        let out = GradedCheckOut {
            format_version: FORMAT_VERSION,
            command: "graded-check",
            field: k.describe(),
            table,
        };
        if json {
            print_json(&out);
        } else {
            println!("degree  leading-quotient  filtered-increment  equal");
            for row in &out.table.rows {
                println!(
                    "{:<7} {:<17} {:<19} {}",
                    row.degree,
                    row.leading_quotient_dim,
                    row.filtered_increment,
                    if row.equal { "yes" } else { "NO" }
                );
            }
            println!("all equal: {}", if pass { "yes" } else { "NO" });
        }
        Ok(if pass { 0 } else { 1 })
    })
}

// ---------------------------------------------------------------------------
// lie-reduce
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct LieReduceOut {
    format_version: u32,
    command: &'static str,
    field: String,
    basis: Vec<String>,
    scale_exponent: i64,
    scaled_constants: Vec<Vec<Vec<String>>>,
    reduced_constants: Vec<Vec<Vec<String>>>,
    jacobi_input: bool,
    jacobi_reduced: bool,
    degenerate: bool,
    enveloping_spec: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    emitted: Option<String>,
}

fn format_constants<F: Field>(field: &F, c: &[Vec<Vec<F::Elem>>]) -> Vec<Vec<Vec<String>>> {
    c.iter()
        .map(|row| {
            row.iter()
                .map(|v| v.iter().map(|x| field.format(x)).collect())
                .collect()
        })
        .collect()
}

fn lie_reduce_for<K: ValuedField>(
    k: &K,
    data: &LieData<K>,
    embedding: ResidueEmbedding,
    emit_spec: Option<&Path>,
    json: bool,
) -> CliResult {
    let red = lie_reduce(k, data)?;
    let spec_text = render_residue_pbw_spec(&embedding, &red.enveloping);
    let emitted = match emit_spec {
        None => None,
        Some(path) => {
            std::fs::write(path, &spec_text)
                .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            Some(path.display().to_string())
        }
    };
    let out = LieReduceOut {
        format_version: FORMAT_VERSION,
        command: "lie-reduce",
        field: k.describe(),
        basis: data.basis().to_vec(),
        scale_exponent: red.scale_exponent,
        scaled_constants: format_constants(k, red.scaled.constants()),
        reduced_constants: format_constants(k.residue_field(), red.reduced.constants()),
        jacobi_input: true,
        jacobi_reduced: red.jacobi_reduced,
        degenerate: red.degenerate,
        enveloping_spec: spec_text,
        emitted,
    };
    if json {
        print_json(&out);
    } else {
        println!("scale exponent: {}", out.scale_exponent);
        println!("jacobi (input): ok");
        println!(
            "jacobi (reduced): {}",
            if out.jacobi_reduced { "ok" } else { "FAILS" }
        );
        if out.degenerate {
            println!("note: nonabelian bracket reduced to the abelian one");
        }
        let g = data.basis().len();
        for i in 0..g {
            for j in (i + 1)..g {
                println!(
                    "[{}, {}] -> [{}]",
                    data.basis()[i],
                    data.basis()[j],
                    out.reduced_constants[i][j].join(", ")
                );
            }
        }
        println!("--- enveloping spec of the reduction ---");
        print!("{}", out.enveloping_spec);
        if let Some(path) = &out.emitted {
            println!("(written to {path})");
        }
    }
    Ok(if out.jacobi_reduced { 0 } else { 1 })
}

fn cmd_lie_reduce(path: &Path, p: Option<u64>, emit_spec: Option<&Path>, json: bool) -> CliResult {
    let text = read_input(path)?;
    if text.trim_start().starts_with('{') {
        let p = p.ok_or("JSON constants input requires --p")?;
        let k = crate::valued_field::PAdic::new(p)?;
        let data = parse_lie_json(&k, &text)?;
        return lie_reduce_for(&k, &data, ResidueEmbedding::PrimeField(p), emit_spec, json);
    }
    if p.is_some() {
        return Err("spec-file input carries its own [field]; omit --p".into());
    }
    let file = parse_spec_file(&text)?;
    let lie = file.lie.as_ref().ok_or("spec file has no [lie] section")?;
    let choice = FieldChoice::from_section(&file.field)?;
    match choice {
        FieldChoice::PAdic(k) => {
            let data = build_lie(&k, lie)?;
            let p = k.p();
            lie_reduce_for(&k, &data, ResidueEmbedding::PrimeField(p), emit_spec, json)
        }
        FieldChoice::TAdicPrime(k) => {
            let data = build_lie(&k, lie)?;
            let q = k.residue_field().modulus();
            lie_reduce_for(&k, &data, ResidueEmbedding::PrimeField(q), emit_spec, json)
        }
        FieldChoice::TAdicRationals(k) => {
            let data = build_lie(&k, lie)?;
            lie_reduce_for(&k, &data, ResidueEmbedding::Rationals, emit_spec, json)
        }
    }
}

// ---------------------------------------------------------------------------
// props
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct PropsOut {
    format_version: u32,
    command: &'static str,
    field: String,
    algebra: String,
    checks: u64,
    samples: u64,
    seed: u64,
    height: u64,
    element_degree: u32,
    failures: Vec<CheckFailure>,
    double_graded: DoubleGradedTable,
    pass: bool,
}

#[allow(clippy::too_many_arguments)]
fn cmd_props(
    path: &Path,
    samples: u64,
    seed: u64,
    height: u64,
    element_degree: u32,
    max_degree: usize,
    gamma_window: i64,
    json: bool,
) -> CliResult {
    let (file, choice) = load_spec(path)?;
    let section = pbw_section(&file)?;
    with_field!(choice, |k| {
        let ctx = GaussContext::new(k.clone(), build_pbw(&k, section)?)?;
        let base: ValueFunctionReport =
            ctx.verify_value_function(samples, seed, height, element_degree);
        let mut failures = base.failures.clone();
        // filtration-compatibility sampling on a disjoint stream
        for idx in 0..samples {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(idx + samples + 1);
            let a = ctx.random_element(&mut rng, height, element_degree);
            use rand::Rng;
            let gamma = rng.random_range(-gamma_window..=gamma_window);
            let n = rng.random_range(0..=max_degree as u64);
            if !ctx.filtration_compatibility(&a, gamma, n) {
                failures.push(CheckFailure {
                    check: "filtration_compat".to_string(),
                    a: ctx.spec().format(&a),
                    b: format!("gamma={gamma}, n={n}"),
                    expected: "both membership readings agree".to_string(),
                    got: "mismatch".to_string(),
                });
            }
        }
        let double_graded = ctx.double_graded_dims(max_degree, (-gamma_window, gamma_window));
        let pass = failures.is_empty() && double_graded.all_equal;
        let out = PropsOut {
            format_version: FORMAT_VERSION,
            command: "props",
            field: base.field,
            algebra: base.algebra,
            checks: base.checks + samples,
            samples,
            seed,
            height,
            element_degree,
            failures,
            double_graded,
            pass,
        };
        if json {
            print_json(&out);
        } else {
            println!(
                "checks: {} over {} samples (seed {})",
                out.checks, out.samples, out.seed
            );
            if out.failures.is_empty() {
                println!("failures: none");
            } else {
                println!("failures: {}", out.failures.len());
                for f in &out.failures {
                    println!(
                        "  [{}] a = {} ; b = {} ; expected {} ; got {}",
                        f.check, f.a, f.b, f.expected, f.got
                    );
                }
            }
            println!(
                "double-graded table (degrees 0..={}, window [{}, {}]): {}",
                out.double_graded.max_degree,
                out.double_graded.gamma_window.0,
                out.double_graded.gamma_window.1,
                if out.double_graded.all_equal {
                    "all equal"
                } else {
                    "MISMATCH"
                }
            );
            println!("result: {}", if out.pass { "PASS" } else { "FAIL" });
        }
        Ok(if pass { 0 } else { 1 })
    })
}

// ---------------------------------------------------------------------------
// lattice
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
enum LatticeField {
    PAdic(u64),
    TAdicPrime(u64),
    TAdicRationals,
}

impl LatticeCommon {
    fn field(&self) -> Result<LatticeField, Box<dyn Error>> {
        match (self.p, self.t_adic, self.q) {
            (Some(p), false, None) => Ok(LatticeField::PAdic(p)),
            (None, true, Some(q)) => Ok(LatticeField::TAdicPrime(q)),
            (None, true, None) => Ok(LatticeField::TAdicRationals),
            (None, false, _) => Err("choose a field: --p <prime> or --t-adic [--q <prime>]".into()),
            _ => Err("conflicting field flags".into()),
        }
    }
}

#[derive(Serialize)]
struct LatticeBasisOut {
    format_version: u32,
    command: String,
    field: String,
    ambient: usize,
    rank: usize,
    basis: Vec<Vec<String>>,
}

#[derive(Serialize)]
struct DivisorsOut {
    format_version: u32,
    command: &'static str,
    field: String,
    divisors: Vec<i64>,
}

#[derive(Serialize)]
struct ReduceOut {
    format_version: u32,
    command: &'static str,
    field: String,
    dim: usize,
    unramified: bool,
}

fn json_field<'a>(
    input: &'a serde_json::Value,
    key: &str,
) -> Result<&'a serde_json::Value, Box<dyn Error>> {
    input
        .get(key)
        .ok_or_else(|| format!("input JSON needs a {key:?} field").into())
}

fn lattice_for<K: ValuedField>(k: &K, op: &LatticeOp, input: &serde_json::Value) -> CliResult {
    let basis_out = |cmd: &str, l: &lattice::Lattice<K>| LatticeBasisOut {
        format_version: FORMAT_VERSION,
        command: format!("lattice-{cmd}"),
        field: k.describe(),
        ambient: l.ambient(),
        rank: l.rank(),
        basis: l
            .basis()
            .iter()
            .map(|row| row.iter().map(|x| k.format(x)).collect())
            .collect(),
    };
    match op {
        LatticeOp::Basis { .. } => {
            let gens = parse_vectors(k, json_field(input, "vectors")?)?;
            let l = lattice::lattice_basis(k, &gens)?;
            print_json(&basis_out("basis", &l));
        }
        LatticeOp::Intersect { .. } => {
            let gens = parse_vectors(k, json_field(input, "lattice")?)?;
            let sub = parse_vectors(k, json_field(input, "subspace")?)?;
            let l = lattice::lattice_basis(k, &gens)?;
            check_widths(l.ambient(), &sub)?;
            print_json(&basis_out("intersect", &l.intersect_with_subspace(&sub)));
        }
        LatticeOp::Quotient { .. } => {
            let gens = parse_vectors(k, json_field(input, "lattice")?)?;
            let sub = parse_vectors(k, json_field(input, "subspace")?)?;
            let l = lattice::lattice_basis(k, &gens)?;
            check_widths(l.ambient(), &sub)?;
            print_json(&basis_out("quotient", &l.quotient_by_subspace(&sub)));
        }
        LatticeOp::Divisors { .. } => {
            let sub = parse_vectors(k, json_field(input, "sub")?)?;
            let sup = parse_vectors(k, json_field(input, "sup")?)?;
            let n = lattice::lattice_basis(k, &sub)?;
            let m = lattice::lattice_basis(k, &sup)?;
            let divisors = lattice::elementary_divisors(&n, &m)?;
            print_json(&DivisorsOut {
                format_version: FORMAT_VERSION,
                command: "lattice-divisors",
                field: k.describe(),
                divisors,
            });
        }
        LatticeOp::Reduce { .. } => {
            let gens = parse_vectors(k, json_field(input, "vectors")?)?;
            let l = lattice::lattice_basis(k, &gens)?;
            let rd = l.reduction_dim();
            print_json(&ReduceOut {
                format_version: FORMAT_VERSION,
                command: "lattice-reduce",
                field: k.describe(),
                dim: rd.dim,
                unramified: rd.unramified,
            });
        }
    }
    Ok(0)
}

fn check_widths<T>(ambient: usize, rows: &[Vec<T>]) -> Result<(), Box<dyn Error>> {
    for r in rows {
        if r.len() != ambient {
            return Err(format!(
                "subspace vector has length {}, ambient dimension is {ambient}",
                r.len()
            )
            .into());
        }
    }
    Ok(())
}

fn cmd_lattice(op: LatticeOp) -> CliResult {
    let common = match &op {
        LatticeOp::Basis { common }
        | LatticeOp::Intersect { common }
        | LatticeOp::Quotient { common }
        | LatticeOp::Divisors { common }
        | LatticeOp::Reduce { common } => common,
    };
    let text = read_input(&common.input)?;
    let input: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| format!("bad input JSON: {e}"))?;
    match common.field()? {
        LatticeField::PAdic(p) => {
            let k = crate::valued_field::PAdic::new(p)?;
            lattice_for(&k, &op, &input)
        }
        LatticeField::TAdicPrime(q) => {
            let k = crate::valued_field::TAdic::new(PrimeField::new(q)?);
            lattice_for(&k, &op, &input)
        }
        LatticeField::TAdicRationals => {
            let k = crate::valued_field::TAdic::new(Rationals);
            lattice_for(&k, &op, &input)
        }
    }
}
