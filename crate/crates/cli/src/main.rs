//! `digitop`: command-line access to the digital-topology toolkit.
//!
//! Every command reads JSON documents (a path, or `-` for stdin) and writes
//! one canonical document to stdout. Exit codes: 0 success, 1 parse or
//! validation error, 2 violated precondition, 3 no witness found,
//! 4 resource cap exceeded.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use digitop::constructors::{
    extend_cp, extend_weak, retract_boundary, retract_nearest, wedge_fns, FillVariant,
};
use digitop::io::{
    parse_image, parse_multifn, serialize_census, serialize_multifn, serialize_report,
    serialize_subdivision, serialize_witness,
};
use digitop::oracle::census;
use digitop::{analyze, compose, subdivide, Error, DEFAULT_R_MAX};

#[derive(Parser)]
#[command(
    name = "digitop",
    version,
    about = "Digital images and multivalued functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report weak, strong, connectivity-preserving and continuity status.
    Check {
        function: PathBuf,
        #[arg(long, default_value_t = DEFAULT_R_MAX)]
        rmax: usize,
    },
    /// Search for a continuity witness up to subdivision level `rmax`.
    Witness {
        function: PathBuf,
        #[arg(long, default_value_t = DEFAULT_R_MAX)]
        rmax: usize,
    },
    /// Subdivide an image by factor `r`.
    Subdivide {
        image: PathBuf,
        #[arg(short = 'r')]
        r: usize,
    },
    /// Build a retraction of an image onto a subset.
    Retract {
        kind: RetractKind,
        #[arg(long)]
        image: PathBuf,
        /// Image document whose points form the subset.
        #[arg(long)]
        subset: PathBuf,
    },
    /// Extend a function on a subimage to a larger image.
    Extend {
        kind: ExtendKind,
        #[arg(long = "fn")]
        function: PathBuf,
        #[arg(long)]
        into: PathBuf,
    },
    /// Compose `F` then `G`.
    Compose { f: PathBuf, g: PathBuf },
    /// Wedge of two functions agreeing at the wedge points.
    Wedge { f: PathBuf, g: PathBuf },
    /// Classify every multivalued function between two images.
    Census {
        #[arg(long)]
        dom: PathBuf,
        #[arg(long)]
        cod: PathBuf,
        #[arg(long, default_value_t = DEFAULT_R_MAX)]
        rmax: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RetractKind {
    Nearest,
    Boundary,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExtendKind {
    Weak,
    CpCodomain,
    CpImage,
    CpBoundary,
}

/// A successful run: the document to print and the exit code.
struct Output {
    document: String,
    code: u8,
}

impl From<String> for Output {
    fn from(document: String) -> Self {
        Output { document, code: 0 }
    }
}

fn read(path: &Path) -> Result<String, Error> {
    let mut text = String::new();
    let res = if path == Path::new("-") {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::File::open(path)
            .and_then(|mut f| f.read_to_string(&mut text))
            .map(|_| ())
    };
    res.map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    Ok(text)
}

fn run(command: Command) -> Result<Output, Error> {
    let image = |p: &Path| parse_image(&read(p)?);
    let function = |p: &Path| parse_multifn(&read(p)?);
    Ok(match command {
        Command::Check { function: f, rmax } => {
            serialize_report(&analyze(&function(&f)?, rmax)?).into()
        }
        Command::Witness { function: f, rmax } => {
            let report = analyze(&function(&f)?, rmax)?;
            match &report.witness {
                Some(w) => serialize_witness(w).into(),
                None => Output {
                    document: serialize_report(&report),
                    code: 3,
                },
            }
        }
        Command::Subdivide { image: i, r } => {
            serialize_subdivision(&subdivide(&image(&i)?, r)?).into()
        }
        Command::Retract {
            kind,
            image: i,
            subset,
        } => {
            let x = image(&i)?;
            let a = image(&subset)?.point_set();
            let f = match kind {
                RetractKind::Nearest => retract_nearest(&x, &a)?,
                RetractKind::Boundary => retract_boundary(&x, &a)?,
            };
            serialize_multifn(&f).into()
        }
        Command::Extend {
            kind,
            function: f,
            into,
        } => {
            let (f, x) = (function(&f)?, image(&into)?);
            let e = match kind {
                ExtendKind::Weak => extend_weak(&f, &x)?,
                ExtendKind::CpCodomain => extend_cp(&f, &x, FillVariant::Codomain)?,
                ExtendKind::CpImage => extend_cp(&f, &x, FillVariant::Image)?,
                ExtendKind::CpBoundary => extend_cp(&f, &x, FillVariant::BoundaryImage)?,
            };
            serialize_multifn(&e).into()
        }
        Command::Compose { f, g } => {
            serialize_multifn(&compose(&function(&f)?, &function(&g)?)?).into()
        }
        Command::Wedge { f, g } => {
            serialize_multifn(&wedge_fns(&function(&f)?, &function(&g)?)?).into()
        }
        Command::Census { dom, cod, rmax } => {
            serialize_census(&census(&image(&dom)?, &image(&cod)?, rmax)?).into()
        }
    })
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Precondition(_) => 2,
        Error::Resource(_) => 4,
        Error::InvalidInput(_)
        | Error::NotInDomain(_)
        | Error::Unreachable(_)
        | Error::Parse(_) => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors are validation errors; help and version are not
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout
                .write_all(out.document.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return ExitCode::from(1);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
