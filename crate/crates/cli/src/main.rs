use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use symsq::config::{parse_config_text, RunConfig};
use symsq::report::Report;
use symsq::{commands, CliError, EXIT_USAGE};

#[derive(Parser, Debug)]
#[command(name = "symsq", version, about = "Symmetric-square L-values: complex, p-adic and Galois-side checks")]
struct Cli {
    /// Flat `key = value` config file; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Also write the JSON report here.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    #[arg(long, global = true)]
    weight: Option<u32>,
    #[arg(long, global = true)]
    level: Option<u64>,
    /// Coefficient CSV (`n,a_n`) used instead of a built-in form.
    #[arg(long, global = true)]
    form: Option<PathBuf>,
    /// Conrey label `N.i`.
    #[arg(long = "char", global = true)]
    char_label: Option<String>,
    /// Values on generators, e.g. `7:3=zeta3`.
    #[arg(long, global = true)]
    char_gen: Option<String>,
    /// `p:a,b; ...` with `a + b sqrt(d)` generating a prime above `p`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    primes: Option<String>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    field_d: Option<i64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    s: Option<i64>,
    /// Target decimal digits for complex values.
    #[arg(long, global = true)]
    digits: Option<u32>,
    /// p-adic precision `K`.
    #[arg(long = "padic-k", short = 'K', global = true)]
    padic_k: Option<u32>,
    #[arg(long, global = true, value_parser = ["direct", "afe", "both"])]
    method: Option<String>,
    #[arg(long, global = true)]
    n_max: Option<usize>,
    #[arg(long, global = true)]
    l_max: Option<u64>,
    /// Generator of the congruence ideal.
    #[arg(long, global = true)]
    congruence: Option<u64>,
    /// Primes where the residual image is not known to be large.
    #[arg(long, global = true)]
    exceptional: Option<String>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Build a level 1 eigenform and optionally write its coefficients.
    Eigenform {
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Read a coefficient CSV and check it.
    Ingest {
        #[arg(long)]
        path: PathBuf,
        /// Compare with the built-in form of the same weight.
        #[arg(long)]
        compare: bool,
    },
    /// L(Sym^2 f x psi, s).
    Lvalue,
    /// The normalized critical ratio.
    Ratio,
    /// Identify a complex number in Q(sqrt d).
    Recognize {
        #[arg(long, allow_hyphen_values = true)]
        re: String,
        #[arg(long, allow_hyphen_values = true)]
        im: String,
        #[arg(long, default_value = "10000000000000000000000000")]
        height: String,
    },
    /// p-adic value, multipliers and Selmer bound at one or all configured primes.
    Padic {
        #[arg(long)]
        p: Option<u64>,
        /// `a,b` for the generator `a + b sqrt(d)`.
        #[arg(long, allow_hyphen_values = true)]
        gen: Option<String>,
        /// `A,B,D` for the exact ratio `(A + B sqrt d)/D`.
        #[arg(long, allow_hyphen_values = true)]
        ratio: Option<String>,
    },
    /// Criticality, multiplier vanishing and exceptional/unfortunate flags at `j + chi`.
    Classify {
        #[arg(long, allow_negative_numbers = true)]
        j: i64,
        #[arg(long, default_value = "1")]
        chi: String,
        #[arg(long)]
        p: Option<u64>,
    },
    /// Scan for primes l = 1 mod p with the required Frobenius action.
    Primescan {
        #[arg(long)]
        p: Option<u64>,
    },
    /// Hypothesis checks, tau witness and H^1 brute force.
    Htest {
        #[arg(long)]
        p: Option<u64>,
    },
    /// The complete weight 16 example with every stored value compared.
    Reproduce,
}

fn overrides(cli: &Cli) -> BTreeMap<String, String> {
    let mut m = BTreeMap::new();
    let mut put = |k: &str, v: Option<String>| {
        if let Some(v) = v {
            m.insert(k.to_string(), v);
        }
    };
    put("weight", cli.weight.map(|x| x.to_string()));
    put("level", cli.level.map(|x| x.to_string()));
    put("form", cli.form.as_ref().map(|p| p.display().to_string()));
    put("char", cli.char_label.clone());
    put("char_gen", cli.char_gen.clone());
    put("primes", cli.primes.clone());
    put("field_d", cli.field_d.map(|x| x.to_string()));
    put("s", cli.s.map(|x| x.to_string()));
    put("digits", cli.digits.map(|x| x.to_string()));
    put("padic_k", cli.padic_k.map(|x| x.to_string()));
    put("method", cli.method.clone());
    put("n_max", cli.n_max.map(|x| x.to_string()));
    put("l_max", cli.l_max.map(|x| x.to_string()));
    put("congruence", cli.congruence.map(|x| x.to_string()));
    put("exceptional", cli.exceptional.clone());
    put("out", cli.report.as_ref().map(|p| p.display().to_string()));
    m
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    let file = match &cli.config {
        Some(p) => parse_config_text(&fs::read_to_string(p).map_err(|e| CliError::Usage(format!("{}: {}", p.display(), e)))?)?,
        None => BTreeMap::new(),
    };
    let mut flags = overrides(cli);
    // a CSV passed to `ingest` is not the working form
    if let Cmd::Ingest { .. } = cli.cmd {
        flags.remove("form");
    }
    let cfg = RunConfig::build(&file, &flags).map_err(CliError::into_usage)?;
    let report = match &cli.cmd {
        Cmd::Eigenform { n, out } => commands::eigenform(&cfg, *n, out.as_deref()),
        Cmd::Ingest { path, compare } => commands::ingest(&cfg, path, *compare),
        Cmd::Lvalue => commands::lvalue(&cfg),
        Cmd::Ratio => commands::ratio(&cfg),
        Cmd::Recognize { re, im, height } => commands::recognize(&cfg, re, im, height),
        Cmd::Padic { p, gen, ratio } => commands::padic(&cfg, *p, gen.as_deref(), ratio.as_deref()),
        Cmd::Classify { j, chi, p } => commands::classify(&cfg, *j, chi, *p),
        Cmd::Primescan { p } => commands::primescan(&cfg, *p),
        Cmd::Htest { p } => commands::htest(&cfg, *p),
        Cmd::Reproduce => commands::reproduce(&cfg),
    }?;
    if let Some(path) = &cfg.out {
        fs::write(path, report.to_json())?;
    }
    Ok(report)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(&cli) {
        Ok(r) => {
            println!("{}", r.to_json());
            ExitCode::from(r.summary.exit_code as u8)
        }
        Err(e) => {
            eprintln!("symsq: {}", e);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
