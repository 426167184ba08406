//! Command-line front end.
//!
//! Exit codes: 0 on success or agreement, 1 on usage errors, 2 on invalid
//! input (including an exceeded orbit budget), 3 when the oracle disagrees
//! or a table entry contradicts its class.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use dquiver::grassmann::{GrassmannShape, PointSpec};
use dquiver::io::{load_quiver, load_rep};
use dquiver::poset::OrbitSpace;
use dquiver::slice::verify_tables;
use dquiver::star::{StarEmbedding, StarQuiver};
use dquiver::zigzag::{DnFamily, RankSignature};
use dquiver::{DimVector, Field, GroupElement, Representation};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_DISAGREE: u8 = 3;

/// Entry bound for random group elements and samples.
const RANDOM_BOUND: i64 = 5;

#[derive(Debug, Parser)]
#[command(
    name = "dquiver",
    version,
    about = "Orbit closures of type D quiver representations"
)]
pub struct Cli {
    /// Base field: Q, GF(p) or a prime. Overrides the field in input files.
    #[arg(long, global = true)]
    pub field: Option<Field>,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the rank signature of a representation.
    Signature {
        rep: PathBuf,
        /// Act on the input by a random group element drawn from this seed first.
        #[arg(long)]
        act_random_seed: Option<u64>,
    },
    /// Compare the orbits of two representations.
    Order {
        first: PathBuf,
        second: PathBuf,
        /// Also decide the order by Hom dimensions and report agreement.
        #[arg(long)]
        oracle: bool,
    },
    /// Build the degeneration poset of a quiver file's dimension vector.
    Poset {
        quiver: PathBuf,
        #[arg(long, conflicts_with = "json")]
        dot: bool,
        /// JSON output (the default).
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = dquiver::poset::DEFAULT_ORBIT_BUDGET)]
        max_orbits: usize,
    },
    /// Check the classification of slice rank functions on random samples.
    VerifyTables(VerifyArgs),
    /// Compare B-orbits of two points of a double Grassmannian with a flag.
    Grassmann {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        n: usize,
        /// JSON `{"m": .., "n": .., "flag": ..}` for the first point.
        first: PathBuf,
        second: PathBuf,
        #[arg(long)]
        oracle: bool,
    },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..=3))]
    pub n: u64,
    /// `random` or a JSON file with the dimension vector of `Q*(n)`, as an
    /// array in vertex order or an object keyed by vertex name.
    #[arg(long, default_value = "random")]
    pub dims: String,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    /// JSON report instead of text tables.
    #[arg(long)]
    pub json: bool,
}

/// What a command printed and how the process should exit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub code: u8,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            stdout,
            code: EXIT_OK,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderVerdict {
    pub same_orbit: bool,
    /// The first orbit lies in the closure of the second.
    pub leq: bool,
    /// The second orbit lies in the closure of the first.
    pub geq: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderReport {
    pub same_orbit: bool,
    pub leq: bool,
    pub geq: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OrderVerdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<String>,
}

impl OrderReport {
    pub fn agrees(&self) -> bool {
        self.verdict.as_deref() != Some("DISAGREE")
    }
}

fn pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

pub fn signature_of(v: &Representation) -> Result<RankSignature> {
    let e = StarEmbedding::new(v.quiver().clone(), v.dims().clone())
        .context("embedding into the star quiver")?;
    let fam = DnFamily::new(e.n())?;
    Ok(fam.signature(&e.extend(v)?)?)
}

fn check_same_space(v: &Representation, w: &Representation) -> Result<()> {
    ensure!(
        **v.quiver() == **w.quiver(),
        "the two representations are over different quivers"
    );
    ensure!(
        v.dims() == w.dims(),
        "dimension vectors differ: {:?} vs {:?}",
        v.dims().0,
        w.dims().0
    );
    ensure!(
        v.field() == w.field(),
        "fields differ: {} vs {}",
        v.field(),
        w.field()
    );
    Ok(())
}

/// The order verdict for two representations on the same `(Q, d)`.
pub fn order(
    v: &Representation,
    w: &Representation,
    oracle: bool,
    seed: u64,
) -> Result<OrderReport> {
    check_same_space(v, w)?;
    let (sv, sw) = (signature_of(v)?, signature_of(w)?);
    let leq = sv.leq(&sw)?;
    let geq = sw.leq(&sv)?;
    let mut report = OrderReport {
        same_orbit: sv == sw,
        leq,
        geq,
        oracle: None,
        verdict: None,
    };
    if oracle {
        let space = OrbitSpace::new(v.quiver().clone(), v.dims().clone(), v.field(), seed)?;
        let bl = space.bongartz_leq(w, v)?;
        let bg = space.bongartz_leq(v, w)?;
        let o = OrderVerdict {
            same_orbit: bl && bg,
            leq: bl,
            geq: bg,
        };
        let agree = o
            == OrderVerdict {
                same_orbit: report.same_orbit,
                leq,
                geq,
            };
        report.oracle = Some(o);
        report.verdict = Some(if agree { "AGREE" } else { "DISAGREE" }.to_string());
    }
    Ok(report)
}

fn order_outcome(report: &OrderReport) -> Outcome {
    Outcome {
        stdout: pretty(report),
        code: if report.agrees() {
            EXIT_OK
        } else {
            EXIT_DISAGREE
        },
    }
}

fn read_dims(spec: &str, n: usize, rng: &mut impl Rng) -> Result<DimVector> {
    let star = StarQuiver::new(n)?;
    let vertices = star.quiver().vertices().to_vec();
    if spec == "random" {
        return Ok(DimVector(
            (0..vertices.len()).map(|_| rng.gen_range(1..=3)).collect(),
        ));
    }
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum DimsFile {
        List(Vec<usize>),
        Named(BTreeMap<String, usize>),
    }
    let text = std::fs::read_to_string(spec).with_context(|| format!("cannot read {spec}"))?;
    let parsed: DimsFile =
        serde_json::from_str(&text).with_context(|| format!("{spec}: not a dimension vector"))?;
    let dims = match parsed {
        DimsFile::List(v) => v,
        DimsFile::Named(m) => {
            if let Some(k) = m.keys().find(|k| !vertices.contains(k)) {
                bail!("{spec}: `{k}` is not a vertex of Q*({n})");
            }
            vertices
                .iter()
                .map(|v| {
                    m.get(v)
                        .copied()
                        .with_context(|| format!("{spec}: no dimension for `{v}`"))
                })
                .collect::<Result<_>>()?
        }
    };
    ensure!(
        dims.len() == vertices.len(),
        "{spec}: expected {} dimensions for Q*({n}), got {}",
        vertices.len(),
        dims.len()
    );
    Ok(DimVector(dims))
}

fn load_point(path: &Path, shape: GrassmannShape, field: Field) -> Result<Representation> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let spec: PointSpec = serde_json::from_str(&text)
        .with_context(|| format!("{}: malformed point", path.display()))?;
    let point = spec
        .to_point(shape, field)
        .with_context(|| format!("{}", path.display()))?;
    Ok(point.to_rep(shape)?)
}

/// Runs a parsed command. Errors are input errors (exit code 2).
pub fn run(cli: Cli) -> Result<Outcome> {
    let field = cli.field;
    match cli.command {
        Command::Signature {
            rep,
            act_random_seed,
        } => {
            let mut v = load_rep(&rep, field)?;
            if let Some(s) = act_random_seed {
                let mut rng = ChaCha8Rng::seed_from_u64(s);
                let g = GroupElement::random(v.field(), v.dims(), RANDOM_BOUND, &mut rng);
                v = v.act(&g)?;
            }
            Ok(Outcome::ok(pretty(&signature_of(&v)?)))
        }
        Command::Order {
            first,
            second,
            oracle,
        } => {
            let v = load_rep(&first, field)?;
            let w = load_rep(&second, field)?;
            Ok(order_outcome(&order(&v, &w, oracle, cli.seed)?))
        }
        Command::Poset {
            quiver,
            dot,
            json: _,
            max_orbits,
        } => {
            let lq = load_quiver(&quiver, field)?;
            let space = OrbitSpace::new(lq.quiver, lq.dims, lq.field, cli.seed)?;
            let poset = space.hasse(max_orbits)?;
            Ok(Outcome::ok(if dot {
                poset.to_dot()
            } else {
                pretty(&poset.to_json())
            }))
        }
        Command::VerifyTables(args) => {
            let n = args.n as usize;
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let dims = read_dims(&args.dims, n, &mut rng)?;
            let report = verify_tables(
                n,
                dims,
                args.samples,
                field.unwrap_or_default(),
                RANDOM_BOUND,
                &mut rng,
            )?;
            let stdout = if args.json {
                pretty(&report)
            } else {
                report.to_text()
            };
            Ok(Outcome {
                stdout,
                code: if report.is_clean() {
                    EXIT_OK
                } else {
                    EXIT_DISAGREE
                },
            })
        }
        Command::Grassmann {
            a,
            b,
            n,
            first,
            second,
            oracle,
        } => {
            let shape = GrassmannShape::new(a, b, n)?;
            let f = field.unwrap_or_default();
            let v = load_point(&first, shape, f)?;
            let w = load_point(&second, shape, f)?;
            Ok(order_outcome(&order(&v, &w, oracle, cli.seed)?))
        }
    }
}

/// Parses `args` (including the program name) and runs the command,
/// mapping every failure to its exit code and a message for stderr.
pub fn run_from<I, T>(args: I) -> (Outcome, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                (
                    Outcome {
                        stdout: String::new(),
                        code,
                    },
                    text,
                )
            } else {
                (Outcome { stdout: text, code }, String::new())
            };
        }
    };
    match run(cli) {
        Ok(out) => (out, String::new()),
        Err(e) => (
            Outcome {
                stdout: String::new(),
                code: EXIT_INVALID,
            },
            format!("error: {e:#}\n"),
        ),
    }
}
