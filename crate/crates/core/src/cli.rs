//! Command-line front end.
//!
//! Exit codes: `0` success, `1` a verify suite failed, `2` bad arguments or
//! unreadable input, `3` a precondition failed (invalid structure, tensor not
//! in `𝓕`, Jacobi identity violated), `4` internal error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::decomposition::{classify, component, project_w};
use crate::error::{Error, Result};
use crate::fspace::random_f;
use crate::group::random_group_element;
use crate::io::{read_input, to_json, GroupFile, Input, LieAlgebraFile, ReportFile, TensorFile};
use crate::models::{
    check_jacobi, koszul_connection, lie_family, sphere_f, structure_tensor_from_connection,
};
use crate::structure::{canonical_structure, random_structure, validate_structure, StructureData};
use crate::tensor::Tensor3;
use crate::verify::{self, Suite};
use crate::{scaled_tol, ABS_FLOOR, REL_TOL};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "acbm",
    version,
    about = "Structure tensors of almost contact B-metric manifolds"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decompose a tensor (or the structure tensor of a Lie algebra) and report its classes.
    Classify {
        #[arg(long)]
        input: PathBuf,
        /// Relative threshold for a class to count as present.
        #[arg(long, default_value_t = REL_TOL)]
        tol: f64,
        /// Inputs with max-abs entry below this are reported as F0.
        #[arg(long, default_value_t = ABS_FLOOR)]
        abs_floor: f64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write one projection of the input as a tensor file.
    Project {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        target: ProjectTarget,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate an input file.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Run the property suites.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 20)]
        seeds: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct ProjectTarget {
    /// Subspace W_i, i in 1..=4.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
    pub w: Option<u8>,
    /// Basic class F_i, i in 1..=11.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=11))]
    pub component: Option<u8>,
}

#[derive(Debug, Subcommand)]
pub enum GenKind {
    /// Closed-form structure tensor of the time-like sphere.
    Sphere {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
    },
    /// Lie algebra of the left-invariant family, `--a a1,...,a2n`.
    Liegroup {
        #[arg(long)]
        n: usize,
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        a: Vec<f64>,
    },
    /// Random element of F.
    Random {
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Use a random basis instead of the canonical one.
        #[arg(long)]
        random_basis: bool,
    },
    /// Random structure-group element in the canonical basis.
    Group {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_)
        | Error::InvalidArgument(_)
        | Error::DimensionMismatch { .. }
        | Error::Io(_) => EXIT_USAGE,
        Error::Precondition(_) | Error::SingularMetric => EXIT_PRECONDITION,
        Error::Internal(_) => EXIT_INTERNAL,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn emit(text: &str, path: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn require_valid(s: &StructureData) -> Result<()> {
    let scale = s.g().amax().max(s.phi().amax());
    let report = validate_structure(s, scaled_tol(REL_TOL, scale));
    if report.valid {
        return Ok(());
    }
    let names: Vec<String> = report
        .violations
        .iter()
        .map(|v| format!("{} (residual {:e})", v.axiom, v.residual))
        .collect();
    Err(Error::Precondition(format!(
        "invalid structure: {}",
        names.join("; ")
    )))
}

/// Structure and structure tensor of a parsed input.
pub fn load_tensor(input: Input) -> Result<(StructureData, Tensor3)> {
    match input {
        Input::Tensor(s, f) => {
            require_valid(&s)?;
            Ok((s, f))
        }
        Input::LieAlgebra(spec) => {
            require_valid(&spec.structure)?;
            let scale = spec.constants().iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if !check_jacobi(&spec, scaled_tol(REL_TOL, scale * scale))? {
                return Err(Error::Precondition(format!(
                    "Jacobi identity violated (residual {:e})",
                    spec.jacobi_residual()
                )));
            }
            let conn = koszul_connection(&spec)?;
            let f = structure_tensor_from_connection(&spec, &conn)?;
            Ok((spec.structure, f))
        }
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Classify {
            input,
            tol,
            abs_floor,
            format,
            out: path,
        } => {
            let (s, f) = load_tensor(read_input(&input)?)?;
            let report = classify(&s, &f, tol, abs_floor)?;
            let text = match format {
                Format::Text => format!("{report}\n"),
                Format::Json => to_json(&ReportFile::from(report))?,
            };
            emit(&text, path.as_deref(), out)?;
            Ok(EXIT_OK)
        }
        Command::Project {
            input,
            target,
            out: path,
        } => {
            let (s, f) = load_tensor(read_input(&input)?)?;
            crate::fspace::require_in_f(&s, &f, REL_TOL)?;
            let t = match (target.w, target.component) {
                (Some(i), _) => project_w(&s, &f, i as usize)?,
                (None, Some(i)) => component(&s, &f, i as usize)?,
                (None, None) => unreachable!("clap enforces one target"),
            };
            emit(&to_json(&TensorFile::new(&s, &t))?, path.as_deref(), out)?;
            Ok(EXIT_OK)
        }
        Command::Gen { kind, out: path } => {
            let text = generate(kind)?;
            emit(&text, path.as_deref(), out)?;
            Ok(EXIT_OK)
        }
        Command::Verify {
            suite,
            seeds,
            format,
        } => {
            let summary = verify::run(suite, seeds);
            let text = match format {
                Format::Text => format!("{summary}\n"),
                Format::Json => to_json(&summary)?,
            };
            emit(&text, None, out)?;
            Ok(if summary.passed() {
                EXIT_OK
            } else {
                EXIT_VERIFY_FAILED
            })
        }
    }
}

/// The file contents produced by `gen`.
pub fn generate(kind: GenKind) -> Result<String> {
    match kind {
        GenKind::Sphere { n, t } => {
            let (s, f) = sphere_f(n, t)?;
            to_json(&TensorFile::new(&s, &f))
        }
        GenKind::Liegroup { n, a } => to_json(&LieAlgebraFile::new(&lie_family(n, &a)?)),
        GenKind::Random {
            dim,
            seed,
            random_basis,
        } => {
            if dim < 3 || dim.is_multiple_of(2) {
                return Err(Error::InvalidArgument(format!(
                    "--dim must be odd and at least 3, got {dim}"
                )));
            }
            let n = (dim - 1) / 2;
            let s = if random_basis {
                random_structure(n, seed)?
            } else {
                canonical_structure(n)?
            };
            to_json(&TensorFile::new(&s, &random_f(&s, seed)))
        }
        GenKind::Group { n, seed } => to_json(&GroupFile::new(&random_group_element(n, seed)?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("acbm").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn unknown_flags_are_rejected() {
        let (code, _, err) = run_str(&["verify", "--bogus"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("--bogus"));
    }

    #[test]
    fn project_needs_exactly_one_target() {
        assert_eq!(run_str(&["project", "--input", "x.json"]).0, EXIT_USAGE);
        assert_eq!(
            run_str(&[
                "project",
                "--input",
                "x.json",
                "--w",
                "1",
                "--component",
                "2"
            ])
            .0,
            EXIT_USAGE
        );
        assert_eq!(
            run_str(&["project", "--input", "x.json", "--w", "5"]).0,
            EXIT_USAGE
        );
    }

    #[test]
    fn gen_rejects_bad_parameters() {
        assert_eq!(run_str(&["gen", "random", "--dim", "4"]).0, EXIT_USAGE);
        assert_eq!(
            run_str(&["gen", "liegroup", "--n", "1", "--a", "1.0"]).0,
            EXIT_USAGE
        );
        assert_eq!(
            run_str(&["gen", "sphere", "--n", "0", "--t", "0"]).0,
            EXIT_USAGE
        );
    }

    #[test]
    fn gen_accepts_negative_values() {
        let (code, out, _) = run_str(&["gen", "liegroup", "--n", "1", "--a", "-1.5,2"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("brackets"));
        assert_eq!(
            run_str(&["gen", "sphere", "--n", "1", "--t", "-0.3"]).0,
            EXIT_OK
        );
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run_str(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("classify"));
    }
}
