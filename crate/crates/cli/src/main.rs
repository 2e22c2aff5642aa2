use std::process::ExitCode;

use bweyl_cli::{
    cmd_cmn, cmd_nf, cmd_split, cmd_verify, cmd_wittpoly, render, CmnArgs, Outcome, Suite, SymbolParams, UsageError,
    VerifyArgs, WittOp,
};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Parser)]
#[command(name = "bweyl", version, about = "Weyl-type algebras over Witt vectors and their symbol quotients")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Pretty,
}

#[derive(Clone, Copy, ValueEnum)]
enum OpArg {
    Sum,
    Prod,
}

#[derive(clap::Args)]
struct SymbolOpts {
    /// Characteristic.
    #[arg(long, default_value_t = 2)]
    p: u64,
    /// Length of the x family.
    #[arg(long, default_value_t = 1)]
    m: usize,
    /// Length of the y family.
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Components of a, comma separated (default a0,a1,...).
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    /// Components of b, comma separated (default b0,b1,...).
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
}

impl SymbolOpts {
    fn params(&self) -> SymbolParams {
        SymbolParams { p: self.p, m: self.m, n: self.n, a: self.a.clone(), b: self.b.clone() }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Structure polynomials c_{m,n} with the dual-route cross-check.
    Cmn {
        #[arg(long)]
        m: Option<u32>,
        #[arg(long)]
        n: Option<u32>,
        /// Read m and n as positions of the p-typical indices p^m, p^n.
        #[arg(long)]
        ptypical: bool,
        #[arg(long, default_value_t = 2)]
        p: u64,
        /// Emit every entry with 1 <= m, n <= max.
        #[arg(long)]
        table: bool,
        #[arg(long)]
        max: Option<u32>,
    },
    /// Witt addition or multiplication polynomials.
    Wittpoly {
        #[arg(long, value_enum)]
        op: OpArg,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 2)]
        p: u64,
        /// Use the p-typical index p^n.
        #[arg(long)]
        typical: bool,
    },
    /// Normal form of an expression.
    Nf {
        #[command(flatten)]
        symbol: SymbolOpts,
        /// Work in the universal algebra over Q instead.
        #[arg(long)]
        universal: bool,
        expr: String,
    },
    /// Run a verification suite.
    Verify {
        /// basis, center, prop32, centralizer, simplicity, thm46, thm52, azumaya or classical.
        #[arg(long)]
        suite: Suite,
        #[command(flatten)]
        symbol: SymbolOpts,
        /// Number of randomized cases.
        #[arg(long, default_value_t = 100)]
        cases: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Matrices splitting A_((0,0)) over F_p.
    Split {
        #[arg(long, default_value_t = 2)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        n: usize,
    },
}

fn dispatch(cmd: &Command) -> Result<Outcome, UsageError> {
    match cmd {
        Command::Cmn { m, n, ptypical, p, table, max } => {
            cmd_cmn(&CmnArgs { m: *m, n: *n, ptypical: *ptypical, p: *p, table: *table, max: *max })
        }
        Command::Wittpoly { op, n, p, typical } => {
            let op = match op {
                OpArg::Sum => WittOp::Sum,
                OpArg::Prod => WittOp::Prod,
            };
            cmd_wittpoly(op, *n, typical.then_some(*p))
        }
        Command::Nf { symbol, universal, expr } => cmd_nf(expr, *universal, &symbol.params()),
        Command::Verify { suite, symbol, cases, seed } => {
            cmd_verify(&VerifyArgs { suite: *suite, params: symbol.params(), cases: *cases, seed: *seed })
        }
        Command::Split { p, m, n } => cmd_split(*p, *m, *n),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.format == Format::Json;
    match dispatch(&cli.command) {
        Ok(out) => {
            println!("{}", render(&out, json));
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            if json {
                println!("{}", json!({"error": e.0}));
            }
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
