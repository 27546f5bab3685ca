//! `phantom` — exact divisor calculus and exceptional-collection
//! verification on blow-ups of the projective plane.
//!
//! Every subcommand emits a single JSON document on stdout under
//! `--output json`; diagnostics go to stderr. Exit codes: 0 on
//! pass/success, 1 on a verification failure, 2 on usage or parameter
//! errors.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use phantom_core::error::{Error, Result};
use phantom_core::euler::{chi_divisor, gram_matrix, Collection};
use phantom_core::heights::{
    anticanonical_pseudoheight, presilting_check, pseudoheight, ChainReport, CohomologyOracle,
    ExtViolation, HeightValue,
};
use phantom_core::lattice::{enumerate_minus_one_classes, DivisorClass, LatticeIsometry};
use phantom_core::linsys::{h0_oracle, standard_form_reduce, Certificate, OracleConfig};
use phantom_core::verifier::{
    involuted_collection, orbit_search, standard_collection, verify_theorem, TheoremConfig,
    VerificationReport,
};

#[derive(Parser)]
#[command(
    name = "phantom",
    version,
    about = "Exact arithmetic for divisor classes on blow-ups of the plane, \
             with machine verification of exceptional collections of line bundles"
)]
struct Cli {
    /// Output format; `json` emits a single JSON document on stdout
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    output: OutputFormat,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Args)]
struct OracleArgs {
    /// Prime modulus for the interpolation oracle (default 2^31 - 1)
    #[arg(long)]
    prime: Option<u64>,
    /// RNG seed; the PHANTOM_SEED environment variable is honored when the
    /// flag is absent
    #[arg(long)]
    seed: Option<u64>,
    /// Number of independent samples behind Monte-Carlo answers
    #[arg(long)]
    trials: Option<u32>,
}

impl OracleArgs {
    fn config(&self) -> Result<OracleConfig> {
        let defaults = OracleConfig::default();
        Ok(OracleConfig {
            prime: self.prime.unwrap_or(defaults.prime),
            seed: resolve_seed(self.seed)?,
            trials: self.trials.unwrap_or(defaults.trials),
        })
    }
}

fn resolve_seed(flag: Option<u64>) -> Result<u64> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var("PHANTOM_SEED") {
        Ok(text) => text.trim().parse().map_err(|_| {
            Error::Parameter(format!(
                "PHANTOM_SEED must be an unsigned integer, got {text:?}"
            ))
        }),
        Err(_) => Ok(0),
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Preset {
    /// (O, O(E_1), …, O(E_n), O(H), O(2H))
    Standard,
    /// The involution image (O, O(D_1), …, O(D_10), O(F), O(2F)) on n = 10
    Involuted,
}

#[derive(Args)]
struct CollectionArgs {
    /// Divisor literals "d;m1,...,mn" forming the collection, in order
    #[arg(value_name = "DIVISOR", required_unless_present = "preset")]
    divisors: Vec<String>,
    /// Use a built-in collection instead of explicit divisors
    #[arg(long, value_enum, conflicts_with = "divisors")]
    preset: Option<Preset>,
    /// Number of blown-up points for the standard preset
    #[arg(long, default_value_t = 10)]
    points: usize,
}

impl CollectionArgs {
    fn resolve(&self) -> Result<Collection> {
        match self.preset {
            Some(Preset::Standard) => standard_collection(self.points),
            Some(Preset::Involuted) => involuted_collection(),
            None => {
                let entries = self
                    .divisors
                    .iter()
                    .map(|text| text.parse::<DivisorClass>())
                    .collect::<Result<Vec<_>>>()?;
                Collection::new(entries)
            }
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the full six-stage verification of the involuted 13-bundle
    /// collection on ten points
    VerifyTheorem {
        #[command(flatten)]
        oracle: OracleArgs,
        /// Degree bound for the supporting (-1)-class scan
        #[arg(long)]
        degree_bound: Option<u32>,
    },
    /// Euler characteristic χ(O(D)) by Riemann–Roch
    Chi {
        /// Divisor literal "d;m1,...,mn"
        divisor: String,
    },
    /// Sections of O(D) at random points over a prime field, with
    /// certificate
    H0 {
        divisor: String,
        #[command(flatten)]
        oracle: OracleArgs,
    },
    /// Cremona reduction of a divisor class to standard form
    StandardForm { divisor: String },
    /// Euler-pairing Gram matrix of a collection
    EulerMatrix {
        #[command(flatten)]
        collection: CollectionArgs,
    },
    /// Pseudoheight and anticanonical pseudoheight of a collection
    Pseudoheight {
        #[command(flatten)]
        collection: CollectionArgs,
        #[command(flatten)]
        oracle: OracleArgs,
    },
    /// Check that the shifted direct sum of a collection has no positive
    /// self-extensions
    Presilting {
        #[command(flatten)]
        collection: CollectionArgs,
        /// Comma-separated degree shifts, one per entry (default: all zero)
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        shifts: Option<Vec<i64>>,
        #[command(flatten)]
        oracle: OracleArgs,
    },
    /// Breadth-first isometry-orbit search for numerically exceptional
    /// collections
    Search {
        #[command(flatten)]
        collection: CollectionArgs,
        /// Generator spec: involution, cremona:i,j,k, or perm:p1,...,pn
        /// (repeatable)
        #[arg(long = "gen", value_name = "GENERATOR")]
        generators: Vec<String>,
        /// Maximum group-word length
        #[arg(long, default_value_t = 1)]
        depth: usize,
    },
    /// Enumerate classes with C·C = C·K = -1 up to a degree bound
    MinusOneClasses {
        /// Number of blown-up points
        #[arg(long)]
        n: usize,
        /// Bound on the H-coefficient
        #[arg(long, default_value_t = 10)]
        degree_bound: u32,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn emit<T: Serialize>(format: OutputFormat, value: &T, text: impl FnOnce()) -> Result<()> {
    match format {
        OutputFormat::Json => {
            let doc = serde_json::to_string_pretty(value)
                .map_err(|e| Error::Consistency(format!("JSON serialization failed: {e}")))?;
            println!("{doc}");
        }
        OutputFormat::Text => text(),
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<bool> {
    let format = cli.output;
    match &cli.command {
        Command::VerifyTheorem { oracle, degree_bound } => {
            let oracle_cfg = oracle.config()?;
            let cfg = TheoremConfig {
                prime: oracle_cfg.prime,
                seed: oracle_cfg.seed,
                trials: oracle_cfg.trials,
                degree_bound: degree_bound.unwrap_or(TheoremConfig::default().degree_bound),
            };
            let report = verify_theorem(&cfg)?;
            emit(format, &report, || render_report(&report))?;
            Ok(report.pass())
        }
        Command::Chi { divisor } => {
            let divisor: DivisorClass = divisor.parse()?;
            let chi = chi_divisor(&divisor)?;
            #[derive(Serialize)]
            struct ChiOutput<'a> {
                divisor: &'a DivisorClass,
                chi: i64,
            }
            emit(format, &ChiOutput { divisor: &divisor, chi }, || println!("{chi}"))?;
            Ok(true)
        }
        Command::H0 { divisor, oracle } => {
            let divisor: DivisorClass = divisor.parse()?;
            let cfg = oracle.config()?;
            let count = h0_oracle(&divisor, &cfg)?;
            #[derive(Serialize)]
            struct OracleOutput<'a> {
                divisor: &'a DivisorClass,
                prime: u64,
                seeds: &'a [u64],
                value: u64,
                certificate: Certificate,
            }
            let output = OracleOutput {
                divisor: &divisor,
                prime: cfg.prime,
                seeds: &count.seeds,
                value: count.value,
                certificate: count.certificate,
            };
            emit(format, &output, || println!("{} {}", count.value, count.certificate))?;
            Ok(true)
        }
        Command::StandardForm { divisor } => {
            let divisor: DivisorClass = divisor.parse()?;
            let trace = standard_form_reduce(&divisor)?;
            #[derive(Serialize)]
            struct ReductionOutput<'a> {
                divisor: &'a DivisorClass,
                steps: &'a [phantom_core::linsys::ReductionStep],
                result: &'a DivisorClass,
                verdict: phantom_core::linsys::ReductionVerdict,
            }
            let output = ReductionOutput {
                divisor: &divisor,
                steps: &trace.steps,
                result: &trace.result,
                verdict: trace.verdict,
            };
            emit(format, &output, || {
                println!("input:   {divisor}");
                println!("result:  {}", trace.result);
                println!("verdict: {:?}", trace.verdict);
                println!("steps:   {}", trace.steps.len());
            })?;
            Ok(true)
        }
        Command::EulerMatrix { collection } => {
            let collection = collection.resolve()?;
            let gram = gram_matrix(&collection)?;
            emit(format, &gram, || {
                for row in gram.rows() {
                    let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                    println!("{}", cells.join(" "));
                }
            })?;
            Ok(true)
        }
        Command::Pseudoheight { collection, oracle } => {
            let collection = collection.resolve()?;
            let oracle = CohomologyOracle::new(oracle.config()?);
            let (ph, witness) = pseudoheight(&collection, &oracle)?;
            let (ph_ac, witness_ac) = anticanonical_pseudoheight(&collection, &oracle)?;
            #[derive(Serialize)]
            struct PseudoheightOutput {
                pseudoheight: HeightValue,
                anticanonical_pseudoheight: HeightValue,
                witness: Option<ChainReport>,
                anticanonical_witness: Option<ChainReport>,
            }
            let output = PseudoheightOutput {
                pseudoheight: ph,
                anticanonical_pseudoheight: ph_ac,
                witness,
                anticanonical_witness: witness_ac,
            };
            emit(format, &output, || {
                println!("ph    = {ph}");
                println!("ph_ac = {ph_ac}");
                if let Some(chain) = &output.anticanonical_witness {
                    println!("chain = {:?} (closing height {})", chain.chain, chain.closing_height);
                }
            })?;
            Ok(true)
        }
        Command::Presilting { collection, shifts, oracle } => {
            let collection = collection.resolve()?;
            let shifts = shifts.clone().unwrap_or_else(|| vec![0; collection.len()]);
            let oracle = CohomologyOracle::new(oracle.config()?);
            let report = presilting_check(&collection, &shifts, &oracle)?;
            #[derive(Serialize)]
            struct PresiltingOutput<'a> {
                pass: bool,
                shifts: &'a [i64],
                first_violation: Option<ExtViolation>,
            }
            let output = PresiltingOutput {
                pass: report.pass,
                shifts: &shifts,
                first_violation: report.first_violation,
            };
            emit(format, &output, || match &report.first_violation {
                None => println!("presilting: pass"),
                Some(v) => println!(
                    "presilting: fail (Ext^{} from entry {} to entry {} has dimension {})",
                    v.degree, v.from, v.to, v.dimension
                ),
            })?;
            Ok(report.pass)
        }
        Command::Search { collection, generators, depth } => {
            let base = collection.resolve()?;
            let generators = generators
                .iter()
                .map(|text| parse_generator(text, base.n()))
                .collect::<Result<Vec<_>>>()?;
            let orbit = orbit_search(&generators, &base, *depth)?;
            #[derive(Serialize)]
            struct SearchOutput {
                count: usize,
                collections: Vec<Vec<String>>,
            }
            let output = SearchOutput {
                count: orbit.len(),
                collections: orbit
                    .iter()
                    .map(|c| c.entries().iter().map(|e| e.to_string()).collect())
                    .collect(),
            };
            emit(format, &output, || {
                println!("{} numerically exceptional collections", output.count);
                for entries in &output.collections {
                    println!("  {}", entries.join(" "));
                }
            })?;
            Ok(true)
        }
        Command::MinusOneClasses { n, degree_bound } => {
            let classes = enumerate_minus_one_classes(*n, *degree_bound);
            #[derive(Serialize)]
            struct ClassesOutput {
                n: usize,
                degree_bound: u32,
                count: usize,
                classes: Vec<DivisorClass>,
            }
            let output = ClassesOutput {
                n: *n,
                degree_bound: *degree_bound,
                count: classes.len(),
                classes: classes.into_iter().map(|c| c.into_class()).collect(),
            };
            emit(format, &output, || {
                println!("{} classes", output.count);
                for class in &output.classes {
                    println!("{class}");
                }
            })?;
            Ok(true)
        }
    }
}

fn parse_generator(text: &str, n: usize) -> Result<LatticeIsometry> {
    if text == "involution" {
        return LatticeIsometry::canonical_involution(n);
    }
    if let Some(rest) = text.strip_prefix("cremona:") {
        let indices = parse_index_list(rest)?;
        if indices.len() != 3 {
            return Err(Error::Parameter(format!(
                "cremona generator needs exactly three indices, got {rest:?}"
            )));
        }
        return LatticeIsometry::cremona(n, indices[0], indices[1], indices[2]);
    }
    if let Some(rest) = text.strip_prefix("perm:") {
        let perm = parse_index_list(rest)?;
        return LatticeIsometry::permutation(n, &perm);
    }
    Err(Error::Parameter(format!(
        "unknown generator {text:?}; use involution, cremona:i,j,k, or perm:p1,...,pn"
    )))
}

fn parse_index_list(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|part| {
            part.trim().parse::<usize>().map_err(|_| {
                Error::Parameter(format!("invalid index {part:?} in generator spec"))
            })
        })
        .collect()
}

fn render_report(report: &VerificationReport) {
    for stage in &report.stages {
        let mark = if stage.pass { "pass" } else { "FAIL" };
        println!("[{mark}] {} ({} ms)", stage.name, stage.duration_ms);
        for witness in &stage.witnesses {
            println!("       {witness}");
        }
    }
    println!(
        "verdict: {} (prime {}, seed {}, trials {})",
        report.verdict, report.environment.prime, report.environment.seed, report.environment.trials
    );
}
