//! Command-line front end.
//!
//! Subcommands: `report` (full analysis of a JSON input), `family` (emit a
//! homogeneous model as an input file), `ode` (trajectory CSV of the frame
//! quantities along a distinguished geodesic), `rank` (hyperbolic rank
//! witness search), `verify` (homogeneous curvature residuals of a table).
//!
//! Exit codes: 0 success, 2 input or parameter error, 3 mathematical
//! infeasibility (`ell` vanishing on the requested span).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cvc3::adapted_frame::{verify_homogeneous, ChristoffelTable, HOMOGENEOUS_RESIDUAL_NAMES};
use cvc3::error::CvcError;
use cvc3::families::{build, FamilySpec};
use cvc3::geodesic_ode::{asymptotic_class_minus1, integrate_frame_ode, EllParams, FrameOdeInit};
use cvc3::jacobi_rank::{hyperbolic_rank_test, FrameAxis};
use cvc3::report::{
    analyze, render_text, trajectory_csv, AnalysisOptions, InputDocument, InputPayload, Metadata,
};

#[derive(Parser)]
#[command(
    name = "cvc3",
    version,
    about = "Curvature and constant-vector-curvature analysis of 3-dimensional metric Lie algebras and homogeneous models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a JSON input file and report curvature, cvc verdicts,
    /// group classification and family matches.
    Report(ReportArgs),
    /// Construct a homogeneous family model and write it as an input file.
    #[command(subcommand)]
    Family(FamilyCmd),
    /// Integrate the frame quantities along a distinguished geodesic and
    /// emit a CSV trajectory.
    Ode(OdeArgs),
    /// Search for a hyperbolic-rank Jacobi field along a frame geodesic.
    Rank(RankArgs),
    /// Evaluate the nine homogeneous curvature residuals of a table file.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum EpsilonChoice {
    All,
    #[value(name = "-1")]
    MinusOne,
    #[value(name = "0")]
    Zero,
    #[value(name = "1")]
    One,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Args)]
struct ReportArgs {
    /// Input JSON document.
    path: PathBuf,
    #[arg(long, value_enum, default_value = "all")]
    epsilon: EpsilonChoice,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Sample count for the brute-force cvc confirmation.
    #[arg(long, default_value_t = 500)]
    samples: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, value_enum, default_value = "text")]
    format: OutputFormat,
}

#[derive(Args)]
struct FamilyOut {
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum FamilyCmd {
    /// cvc(1) type I family on SU(2); mu in (0, 1).
    Cvc1Type1 {
        #[arg(long, allow_negative_numbers = true)]
        mu: f64,
        #[command(flatten)]
        out: FamilyOut,
    },
    /// cvc(1) type II family; plane curvature -(2c + 1).
    Cvc1Type2 {
        #[arg(long, allow_negative_numbers = true)]
        c: f64,
        #[command(flatten)]
        out: FamilyOut,
    },
    /// cvc(1) non-unimodular family; plane curvature -(3 + f^2 + g^2).
    Cvc1Nonunimodular {
        #[arg(long, allow_negative_numbers = true)]
        f: f64,
        #[arg(long, allow_negative_numbers = true)]
        g: f64,
        #[command(flatten)]
        out: FamilyOut,
    },
    /// cvc(-1) family; mu >= 1 (E(1,1) at mu = 1).
    CvcMinus1 {
        #[arg(long, allow_negative_numbers = true)]
        mu: f64,
        #[command(flatten)]
        out: FamilyOut,
    },
    /// Product of a curvature kappa = +/-1 surface with a line.
    Cvc0Product {
        #[arg(long, allow_negative_numbers = true)]
        kappa: f64,
        #[command(flatten)]
        out: FamilyOut,
    },
    /// cvc(0) solvable family; plane curvature -(f^2 + g^2).
    Cvc0Solvable {
        #[arg(long, allow_negative_numbers = true)]
        f: f64,
        #[arg(long, allow_negative_numbers = true)]
        g: f64,
        #[command(flatten)]
        out: FamilyOut,
    },
    /// Constant curvature epsilon.
    SpaceForm {
        #[arg(long, allow_negative_numbers = true)]
        epsilon: f64,
        #[command(flatten)]
        out: FamilyOut,
    },
}

impl FamilyCmd {
    fn split(self) -> (FamilySpec, FamilyOut) {
        match self {
            FamilyCmd::Cvc1Type1 { mu, out } => (FamilySpec::Cvc1TypeI { mu }, out),
            FamilyCmd::Cvc1Type2 { c, out } => (FamilySpec::Cvc1TypeII { c }, out),
            FamilyCmd::Cvc1Nonunimodular { f, g, out } => {
                (FamilySpec::Cvc1Nonunimodular { f, g }, out)
            }
            FamilyCmd::CvcMinus1 { mu, out } => (FamilySpec::CvcMinus1 { mu }, out),
            FamilyCmd::Cvc0Product { kappa, out } => (FamilySpec::Cvc0Product { kappa }, out),
            FamilyCmd::Cvc0Solvable { f, g, out } => (FamilySpec::Cvc0Solvable { f, g }, out),
            FamilyCmd::SpaceForm { epsilon, out } => (FamilySpec::SpaceForm { epsilon }, out),
        }
    }
}

#[derive(Args)]
struct OdeArgs {
    #[arg(long, allow_negative_numbers = true)]
    epsilon: f64,
    #[arg(long = "trA0", allow_negative_numbers = true)]
    tr_a0: f64,
    #[arg(long = "detA0", allow_negative_numbers = true)]
    det_a0: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    lambda0: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    b0: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    sigma0: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    tau0: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    c: f64,
    #[arg(long = "t-min", default_value_t = -3.0, allow_negative_numbers = true)]
    t_min: f64,
    #[arg(long = "t-max", default_value_t = 3.0, allow_negative_numbers = true)]
    t_max: f64,
    #[arg(long, default_value_t = 1e-3)]
    step: f64,
    /// CSV output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum DirArg {
    E1,
    E2,
    E3,
}

impl From<DirArg> for FrameAxis {
    fn from(d: DirArg) -> Self {
        match d {
            DirArg::E1 => FrameAxis::E1,
            DirArg::E2 => FrameAxis::E2,
            DirArg::E3 => FrameAxis::E3,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum RankFamilyName {
    CvcMinus1,
    SpaceForm,
}

#[derive(Args)]
struct RankArgs {
    /// Which model family to test.
    #[arg(long, value_enum)]
    family: RankFamilyName,
    /// Parameter mu of the cvc(-1) family.
    #[arg(long, allow_negative_numbers = true)]
    mu: Option<f64>,
    /// Curvature of the space form (the test itself targets -1).
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    epsilon: f64,
    #[arg(long, value_enum, default_value = "e1")]
    dir: DirArg,
    #[arg(long = "t-max", default_value_t = 3.0)]
    t_max: f64,
    #[arg(long, default_value_t = 1e-3)]
    step: f64,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Args)]
struct VerifyArgs {
    /// Input JSON document of kind `christoffel_table`.
    path: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    epsilon: f64,
    #[arg(long, allow_negative_numbers = true)]
    lambda: f64,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
}

fn exit_code_for(err: &CvcError) -> u8 {
    match err {
        CvcError::EllNonpositive { .. } | CvcError::InvalidInitialData { .. } => 3,
        _ => 2,
    }
}

// Writing into a closed pipe (`cvc3 ... | head`) is a normal way to stop
// consuming output, not an error.
fn print_out(content: &str) -> Result<(), (String, u8)> {
    use std::io::Write;
    match std::io::stdout().write_all(content.as_bytes()) {
        Ok(()) => Ok(()),
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => std::process::exit(0),
        Err(e) => Err((e.to_string(), 2)),
    }
}

fn write_or_print(path: &Option<PathBuf>, content: &str) -> Result<(), (String, u8)> {
    match path {
        Some(p) => std::fs::write(p, content).map_err(|e| (e.to_string(), 2)),
        None => print_out(content),
    }
}

fn run() -> Result<(), (String, u8)> {
    let cli = Cli::parse();
    match cli.command {
        Command::Report(args) => {
            let text = std::fs::read_to_string(&args.path)
                .map_err(|e| (format!("cannot read {}: {e}", args.path.display()), 2))?;
            let doc = InputDocument::parse(&text).map_err(|e| (e.to_string(), 2))?;
            let epsilons = match args.epsilon {
                EpsilonChoice::All => vec![-1.0, 0.0, 1.0],
                EpsilonChoice::MinusOne => vec![-1.0],
                EpsilonChoice::Zero => vec![0.0],
                EpsilonChoice::One => vec![1.0],
            };
            let opts = AnalysisOptions {
                epsilons,
                tol: args.tol,
                samples: args.samples,
                seed: args.seed,
            };
            let report = analyze(&doc, &opts).map_err(|e| (e.to_string(), exit_code_for(&e)))?;
            let rendered = match args.format {
                OutputFormat::Json => {
                    let mut json =
                        serde_json::to_string_pretty(&report).expect("report json");
                    json.push('\n');
                    json
                }
                OutputFormat::Text => render_text(&report),
            };
            print_out(&rendered)
        }
        Command::Family(cmd) => {
            let (spec, out) = cmd.split();
            let model = build(spec).map_err(|e| (e.to_string(), exit_code_for(&e)))?;
            let metadata = Some(Metadata {
                name: Some(spec.variant_name().to_string()),
                description: None,
            });
            // Left-invariant models are emitted as their metric Lie algebra;
            // tensor-only models keep the family record.
            let doc = match &model.algebra {
                Some(algebra) => InputDocument::from_algebra(algebra, metadata),
                None => InputDocument::from_family(spec, metadata),
            };
            let mut json = doc.to_json();
            json.push('\n');
            write_or_print(&out.out, &json)
        }
        Command::Ode(args) => {
            let params = EllParams::new(args.epsilon, args.tr_a0, args.det_a0)
                .map_err(|e| (e.to_string(), exit_code_for(&e)))?;
            let init = FrameOdeInit {
                lambda0: args.lambda0,
                b0: args.b0,
                sigma0: args.sigma0,
                tau0: args.tau0,
                c: args.c,
            };
            let trajectory =
                integrate_frame_ode(&params, &init, (args.t_min, args.t_max), args.step)
                    .map_err(|e| (e.to_string(), exit_code_for(&e)))?;
            write_or_print(&args.out, &trajectory_csv(&trajectory))?;
            if args.epsilon == -1.0 {
                let class = asymptotic_class_minus1(args.tr_a0, args.det_a0)
                    .map_err(|e| (e.to_string(), exit_code_for(&e)))?;
                eprintln!("asymptotic class: {class}");
            }
            Ok(())
        }
        Command::Rank(args) => {
            let spec = match args.family {
                RankFamilyName::CvcMinus1 => {
                    let mu =
                        args.mu.ok_or(("--mu is required for cvc-minus1".to_string(), 2))?;
                    FamilySpec::CvcMinus1 { mu }
                }
                RankFamilyName::SpaceForm => FamilySpec::SpaceForm { epsilon: args.epsilon },
            };
            let model = build(spec).map_err(|e| (e.to_string(), exit_code_for(&e)))?;
            let verdict = hyperbolic_rank_test(
                &model,
                args.dir.into(),
                args.t_max,
                args.step,
                args.tol,
                args.seed,
            )
            .map_err(|e| (e.to_string(), exit_code_for(&e)))?;
            let mut out = String::new();
            out.push_str(if verdict.has_hyperbolic_rank_witness {
                "witness found\n"
            } else {
                "no witness\n"
            });
            out.push_str(&format!(
                "max |sec + 1| of best candidate: {:e}\n",
                verdict.max_sec_deviation
            ));
            out.push_str(&format!(
                "rms |sec + 1| of best candidate: {:e}\n",
                verdict.rms_sec_deviation
            ));
            if let Some(w) = verdict.witness {
                out.push_str(&format!(
                    "witness initial data: J(0) = [{}, {}, {}], J'(0) = [{}, {}, {}]\n",
                    w.j[0], w.j[1], w.j[2], w.j_prime[0], w.j_prime[1], w.j_prime[2]
                ));
            }
            print_out(&out)
        }
        Command::Verify(args) => {
            let text = std::fs::read_to_string(&args.path)
                .map_err(|e| (format!("cannot read {}: {e}", args.path.display()), 2))?;
            let doc = InputDocument::parse(&text).map_err(|e| (e.to_string(), 2))?;
            let InputPayload::ChristoffelTable { a11, a12, a21, a22, f, g, c } = doc.payload
            else {
                return Err((
                    "verify expects a document of kind `christoffel_table`".into(),
                    2,
                ));
            };
            let table = ChristoffelTable::new(a11, a12, a21, a22, f, g, c);
            let residuals = verify_homogeneous(&table, args.epsilon, args.lambda);
            let mut out = format!(
                "residuals at (epsilon, lambda) = ({}, {}):\n",
                args.epsilon, args.lambda
            );
            let mut max = 0.0_f64;
            for (name, value) in HOMOGENEOUS_RESIDUAL_NAMES.iter().zip(residuals.iter()) {
                out.push_str(&format!("  {name}: {value:e}\n"));
                max = max.max(value.abs());
            }
            if max <= args.tol {
                out.push_str(&format!(
                    "all residuals within {:e}: table is a homogeneous solution\n",
                    args.tol
                ));
            } else {
                out.push_str(&format!("max residual {max:e} exceeds {:e}\n", args.tol));
            }
            print_out(&out)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err((msg, code)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
