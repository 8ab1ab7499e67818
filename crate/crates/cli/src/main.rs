//! Command-line surface for the engine.
//!
//! Exit codes: 0 success (or oracle agreement), 1 input error, 2 freeness or
//! hypothesis refusal, 3 no applicable oracle, 4 oracle disagreement.

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use torq_core::exact::CoefficientRing;
use torq_core::koszul;
use torq_core::oracle;
use torq_core::report::{self, ParamsJson};
use torq_core::simplicial::SimplicialComplex;
use torq_core::torus::SubtorusSpec;
use torq_core::Error;

const GENERATOR_HELP: &str = "\
COMPLEX can be a JSON file path ({\"m\": 4, \"facets\": [[1,2],[3,4]]}) or a generator:
  simplex-boundary:<m>      all proper subsets of {1..m} (boundary of the simplex)
  simplex:<m>               the full simplex on m vertices
  polygon:<m>               boundary of an m-gon, m >= 3
  rp2                       the 6-vertex triangulation of the real projective plane
  skeleton:<d>:of:<gen>     the d-skeleton of a generated complex
  join:<gen>+<gen>          join (second complex's vertices shifted past the first)

SUBTORUS is a JSON file path ({\"m\": 3, \"basis\": [[1,1,1]]}), `diagonal`
(the diagonal circle) or `trivial` (k = 0).

RING is one of Z, Q, Fp:<prime>.

Exit codes: 0 success/agreement, 1 input error, 2 freeness or hypothesis
refusal, 3 no applicable oracle, 4 oracle disagreement.";

#[derive(Parser)]
#[command(
    name = "torq",
    about = "Exact cohomology rings of quotients of moment-angle complexes by freely acting subtori",
    after_long_help = GENERATOR_HELP,
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate primitivity of the subtorus and freeness of its action
    Check(JobArgs),
    /// Per-degree Betti numbers (and torsion over Z)
    Betti(JobArgs),
    /// Cohomology basis and multiplication table (field coefficients)
    Ring(JobArgs),
    /// Run the applicable independent oracle and compare
    Oracle(JobArgs),
}

#[derive(Args, Clone)]
struct JobArgs {
    /// Complex: JSON file path or generator expression (see --help)
    #[arg(long)]
    complex: String,
    /// Subtorus: JSON file path, `diagonal` or `trivial`
    #[arg(long, default_value = "trivial")]
    subtorus: String,
    /// Coefficient ring: Z, Q or Fp:<prime>
    #[arg(long, default_value = "Z")]
    ring: String,
    /// Highest degree to compute (default: dim Z_K/H, above which
    /// cohomology vanishes)
    #[arg(long)]
    max_degree: Option<usize>,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Rayon thread count (default: all cores)
    #[arg(long)]
    threads: Option<usize>,
    /// Seed for randomized checks; fixed default keeps runs reproducible
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

struct Job {
    complex: SimplicialComplex,
    subtorus: SubtorusSpec,
    ring: CoefficientRing,
    max_degree: Option<usize>,
    format: Format,
    seed: u64,
}

impl Job {
    fn params(&self) -> ParamsJson {
        ParamsJson {
            complex: self.complex.to_json(),
            subtorus: self.subtorus.to_json(),
            ring: self.ring.tag(),
            max_degree: self.max_degree,
            seed: self.seed,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (args, run): (&JobArgs, fn(&Job) -> Result<u8, Error>) = match &cli.command {
        Command::Check(a) => (a, cmd_check),
        Command::Betti(a) => (a, cmd_betti),
        Command::Ring(a) => (a, cmd_ring),
        Command::Oracle(a) => (a, cmd_oracle),
    };
    let job = match resolve(args) {
        Ok(job) => job,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let outcome = match args.threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build();
            match pool {
                Ok(pool) => pool.install(|| run(&job)),
                Err(e) => {
                    eprintln!("error: cannot build thread pool: {e}");
                    return ExitCode::from(1);
                }
            }
        }
        None => run(&job),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Input(_) => 1,
                Error::NotFree(_) | Error::FieldRequired(_) => 2,
                Error::Contract(_) => 1,
            })
        }
    }
}

fn resolve(args: &JobArgs) -> Result<Job, Error> {
    let complex = parse_complex(&args.complex)?;
    let subtorus = match args.subtorus.as_str() {
        "trivial" => SubtorusSpec::trivial(complex.m()),
        "diagonal" => SubtorusSpec::diagonal_circle(complex.m())?,
        path => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::Input(format!("cannot read {path}: {e}")))?;
            let value: serde_json::Value = serde_json::from_str(&text)
                .map_err(|e| Error::Input(format!("bad JSON in {path}: {e}")))?;
            SubtorusSpec::from_json(&value)?
        }
    };
    if subtorus.m() != complex.m() {
        return Err(Error::Input(format!(
            "subtorus m = {} does not match complex m = {}",
            subtorus.m(),
            complex.m()
        )));
    }
    Ok(Job {
        complex,
        subtorus,
        ring: CoefficientRing::parse(&args.ring)?,
        max_degree: args.max_degree,
        format: args.format,
        seed: args.seed,
    })
}

/// Generator grammar first; anything unrecognised is treated as a file path.
fn parse_complex(spec: &str) -> Result<SimplicialComplex, Error> {
    if let Some(k) = parse_generator(spec)? {
        return Ok(k);
    }
    let text = fs::read_to_string(spec)
        .map_err(|e| Error::Input(format!("cannot read {spec}: {e}")))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Error::Input(format!("bad JSON in {spec}: {e}")))?;
    SimplicialComplex::from_json(&value)
}

fn parse_generator(spec: &str) -> Result<Option<SimplicialComplex>, Error> {
    if spec == "rp2" {
        return Ok(Some(rp2_complex()));
    }
    if let Some(rest) = spec.strip_prefix("simplex-boundary:") {
        let m = parse_count(rest, spec)?;
        return Ok(Some(SimplicialComplex::boundary_simplex(m)?));
    }
    if let Some(rest) = spec.strip_prefix("simplex:") {
        let m = parse_count(rest, spec)?;
        return Ok(Some(SimplicialComplex::simplex(m)?));
    }
    if let Some(rest) = spec.strip_prefix("polygon:") {
        let m = parse_count(rest, spec)?;
        return Ok(Some(SimplicialComplex::polygon(m)?));
    }
    if let Some(rest) = spec.strip_prefix("skeleton:") {
        let (d, inner) = rest
            .split_once(":of:")
            .ok_or_else(|| Error::Input(format!("expected skeleton:<d>:of:<gen> in {spec:?}")))?;
        let d: i64 = d
            .parse()
            .map_err(|_| Error::Input(format!("bad skeleton dimension in {spec:?}")))?;
        let inner = parse_generator(inner)?
            .ok_or_else(|| Error::Input(format!("unknown generator {inner:?}")))?;
        return Ok(Some(inner.skeleton(d)?));
    }
    if let Some(rest) = spec.strip_prefix("join:") {
        // split at the first '+' where both sides parse as generators
        for (idx, _) in rest.match_indices('+') {
            let (left, right) = (&rest[..idx], &rest[idx + 1..]);
            if let (Some(a), Some(b)) = (parse_generator(left)?, parse_generator(right)?) {
                return Ok(Some(SimplicialComplex::join(&a, &b)));
            }
        }
        return Err(Error::Input(format!("expected join:<gen>+<gen> in {spec:?}")));
    }
    Ok(None)
}

fn parse_count(text: &str, whole: &str) -> Result<usize, Error> {
    text.parse()
        .map_err(|_| Error::Input(format!("bad vertex count in {whole:?}")))
}

/// The 6-vertex (minimal) triangulation of RP².
fn rp2_complex() -> SimplicialComplex {
    SimplicialComplex::new(
        6,
        &[
            vec![1, 2, 3],
            vec![1, 3, 4],
            vec![1, 4, 5],
            vec![1, 5, 6],
            vec![1, 2, 6],
            vec![2, 3, 5],
            vec![3, 4, 6],
            vec![2, 4, 5],
            vec![3, 5, 6],
            vec![2, 4, 6],
        ],
    )
    .expect("valid triangulation")
}

fn cmd_check(job: &Job) -> Result<u8, Error> {
    if !job.subtorus.validate() {
        let msg = "lattice basis is not primitive (not a valid subtorus)";
        match job.format {
            Format::Text => println!("not primitive: {msg}"),
            Format::Json => println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "params": job.params(),
                    "primitive": false,
                    "free": false,
                    "violating_facet": null,
                }))
                .unwrap()
            ),
        }
        return Ok(2);
    }
    let violation = job.subtorus.freeness_violation(&job.complex)?;
    match job.format {
        Format::Text => match &violation {
            None => println!("free: the subtorus acts freely on Z_K"),
            Some(facet) => {
                println!("not free: facet {:?} has a nontrivial stabilizer", facet.vertices())
            }
        },
        Format::Json => {
            let doc = json!({
                "params": job.params(),
                "primitive": true,
                "free": violation.is_none(),
                "violating_facet": violation.as_ref().map(|f| f.vertices().to_vec()),
            });
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
        }
    }
    Ok(if violation.is_none() { 0 } else { 2 })
}

fn cmd_betti(job: &Job) -> Result<u8, Error> {
    let result = koszul::cohomology(&job.complex, &job.subtorus, job.ring, job.max_degree)?;
    match job.format {
        Format::Text => print!("{}", report::betti_text(&result.groups)),
        Format::Json => {
            let doc = report::result_json(job.params(), &result, None);
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
        }
    }
    Ok(0)
}

fn cmd_ring(job: &Job) -> Result<u8, Error> {
    let result = koszul::cohomology(&job.complex, &job.subtorus, job.ring, job.max_degree)?;
    let ring = koszul::ring_structure(&job.complex, &job.subtorus, job.ring, job.max_degree)?;
    match job.format {
        Format::Text => {
            print!("{}", report::betti_text(&result.groups));
            print!("{}", report::ring_text(&ring));
        }
        Format::Json => {
            let doc = report::result_json(job.params(), &result, Some(&ring));
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
        }
    }
    Ok(0)
}

fn cmd_oracle(job: &Job) -> Result<u8, Error> {
    let report = oracle::compare(&job.complex, &job.subtorus, job.ring, job.max_degree)?;
    match job.format {
        Format::Text => print!("{}", report::oracle_text(&report)),
        Format::Json => {
            let mut doc = report.to_json();
            doc.as_object_mut()
                .unwrap()
                .insert("params".into(), serde_json::to_value(job.params()).unwrap());
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
        }
    }
    Ok(match report.agreement {
        Some(true) => 0,
        Some(false) => 4,
        None => 3,
    })
}
