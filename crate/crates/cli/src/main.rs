use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;

use commands::{Failure, Report};

/// Exact computations with self-self-dual spaces of polynomials.
#[derive(Parser)]
#[command(name = "g2ssd", version)]
struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Run without worker threads.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Spaces of polynomials.
    #[command(subcommand)]
    Space(SpaceCmd),
    /// Polynomial operations.
    #[command(subcommand)]
    Poly(PolyCmd),
    /// The spin representation.
    #[command(subcommand)]
    Spin(SpinCmd),
    /// The 3-form and G2-isotropic flags.
    #[command(subcommand)]
    G2(G2Cmd),
    /// Bethe pairs and populations.
    #[command(subcommand)]
    Bethe(BetheCmd),
    /// Built-in verification.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

/// A space file or a named fixture.
#[derive(Args, Clone)]
pub struct SpaceInput {
    /// Space JSON: {"basis": [[coefficients], ...]}.
    pub file: Option<PathBuf>,
    /// deg6, mono-M-N or not-self-dual.
    #[arg(long)]
    pub fixture: Option<String>,
}

/// A seed file or a named fixture.
#[derive(Args, Clone)]
pub struct SeedInput {
    /// Seed JSON: {"kind": "G2", "y": [...], "t": [...]}.
    pub file: Option<PathBuf>,
    /// deg6 or mono-M-N.
    #[arg(long)]
    pub fixture: Option<String>,
}

#[derive(Subcommand)]
enum SpaceCmd {
    /// Degrees, ramification, self-duality, Gram matrix and verdict.
    Analyze(SpaceInput),
    /// Witt basis adapted to the degree filtration.
    Witt(SpaceInput),
    /// A standard basis, if the space is self-self-dual.
    StandardBasis(SpaceInput),
    /// Self-self-duality verdict.
    CheckSsd(SpaceInput),
}

#[derive(Subcommand)]
enum PolyCmd {
    /// Wronskian of {"polys": [...]}, divided when a space is given.
    Wronskian {
        file: PathBuf,
        /// Space file for the divided Wronskian.
        #[arg(long)]
        space: Option<PathBuf>,
        /// Space fixture for the divided Wronskian.
        #[arg(long)]
        fixture: Option<String>,
    },
}

#[derive(Subcommand)]
enum SpinCmd {
    /// Pure spinor of {"vectors": [v1, v2, v3]}.
    Embed { file: PathBuf },
    /// Isotropic 3-spaces over {"vector": v}.
    Preimages { file: PathBuf },
}

#[derive(Subcommand)]
enum G2Cmd {
    /// The standard 3-form, or the Wronskian-route form in a space's standard basis.
    Threeform {
        #[command(flatten)]
        input: SpaceInput,
    },
    /// Kernel of w(v, ., .) for {"vector": v}.
    Kernel { file: PathBuf },
    /// Flag of the standard basis, its G2-isotropy and its Bethe pair.
    Flags(SpaceInput),
}

#[derive(Subcommand)]
enum BetheCmd {
    /// Descendants of a seed in one direction.
    Reproduce {
        #[command(flatten)]
        input: SeedInput,
        /// 1-based direction.
        #[arg(long)]
        direction: usize,
    },
    /// Breadth-first population sample.
    Population {
        #[command(flatten)]
        input: SeedInput,
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// All acceptance criteria.
    All,
    /// Divided Wronskians of a standard basis against the table.
    Table1 {
        #[command(flatten)]
        input: SpaceInput,
        #[arg(long, hide = true)]
        corrupt: Option<String>,
    },
    /// 3-form values on both routes against the stated values.
    Threeform {
        #[arg(long, hide = true)]
        corrupt: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exec = if cli.sequential { g2ssd::Exec::Sequential } else { g2ssd::Exec::default() };
    let res = match cli.command {
        Command::Space(c) => match c {
            SpaceCmd::Analyze(i) => commands::space_analyze(&i, exec),
            SpaceCmd::Witt(i) => commands::space_witt(&i),
            SpaceCmd::StandardBasis(i) => commands::space_standard_basis(&i, exec),
            SpaceCmd::CheckSsd(i) => commands::space_check_ssd(&i, exec),
        },
        Command::Poly(PolyCmd::Wronskian { file, space, fixture }) => {
            commands::poly_wronskian(&file, &SpaceInput { file: space, fixture })
        }
        Command::Spin(c) => match c {
            SpinCmd::Embed { file } => commands::spin_embed(&file),
            SpinCmd::Preimages { file } => commands::spin_preimages(&file),
        },
        Command::G2(c) => match c {
            G2Cmd::Threeform { input } => commands::g2_threeform(&input, exec),
            G2Cmd::Kernel { file } => commands::g2_kernel(&file),
            G2Cmd::Flags(i) => commands::g2_flags(&i, exec),
        },
        Command::Bethe(c) => match c {
            BetheCmd::Reproduce { input, direction } => commands::bethe_reproduce(&input, direction),
            BetheCmd::Population { input, depth } => commands::bethe_population(&input, depth, exec),
        },
        Command::Verify(c) => match c {
            VerifyCmd::All => commands::verify_all(exec),
            VerifyCmd::Table1 { input, corrupt } => commands::verify_table1(&input, corrupt.as_deref(), exec),
            VerifyCmd::Threeform { corrupt } => commands::verify_threeform(corrupt.as_deref(), exec),
        },
    };
    match res {
        Ok(Report { json, text, ok }) => {
            if cli.json {
                print!("{}", g2ssd::io::to_json(&json));
            } else {
                print!("{text}");
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Math(msg)) => {
            eprintln!("failure: {msg}");
            ExitCode::from(1)
        }
    }
}
