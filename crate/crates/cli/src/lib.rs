//! Argument handling and subcommands of the `borcherds` tool.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 usage or input error,
//! 3 a mathematical precondition was violated.

pub mod files;

use borcherds_core::algebra::{format_rational, rat, QSeries};
use borcherds_core::borcherds::{dlog_expansion, twisted_product, ExponentData};
use borcherds_core::heegner::{classes, genus_char, genus_char_oracle, stab_order, Bqf};
use borcherds_core::lfun::{coefficients_needed, l_central, l_derivative, newform_an, EllipticCurve};
use borcherds_core::modforms::{
    eisenstein_series, eta_series, j_series, level6_forms, mock_omega, plus_form, theta_series,
};
use borcherds_core::scenarios::{mock6_exponents, verify_gross37, verify_mock6, verify_zagier5, zagier5_exponents};
use borcherds_core::vvforms::hecke_tp;
use clap::{Parser, Subcommand, ValueEnum};
use files::{CoeffTableFile, ExponentsFile, FileError};
use std::fmt::Write as _;

#[derive(Parser, Debug)]
#[command(name = "borcherds", version, about = "Twisted Borcherds products, Heegner divisors and related q-series")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print a q-expansion: eta, theta, E4, E6, j, j6star, delta6, fd:<d> or omega
    Qexp {
        form: String,
        #[arg(long)]
        prec: i64,
    },
    /// List Γ₀(N)-classes of Heegner forms with their CM points and weights
    Heegner {
        #[arg(long)]
        level: i64,
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
        #[arg(long, allow_hyphen_values = true)]
        root: i64,
        /// Fundamental discriminant of the genus character used for weights
        #[arg(long, allow_hyphen_values = true, default_value_t = 1)]
        delta: i64,
        /// Print 2χ/w instead of χ/w
        #[arg(long)]
        normalize_w2: bool,
    },
    /// Evaluate the genus character χ_Δ on a form [a,b,c] with N | a
    GenusChar {
        #[arg(long, allow_hyphen_values = true)]
        delta: i64,
        #[arg(long, allow_hyphen_values = true)]
        form: String,
        #[arg(long)]
        level: i64,
        /// Also evaluate from represented values and compare
        #[arg(long)]
        oracle: bool,
    },
    /// Expand a twisted Borcherds product
    Product(ProductArgs),
    /// Expand the logarithmic derivative of a twisted Borcherds product
    Dlog(ProductArgs),
    /// L(G, χ_d, 1) or L'(G, χ_d, 1) for the newform of an elliptic curve
    Lvalue {
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
        #[arg(long)]
        cond: i64,
        #[arg(long, allow_hyphen_values = true)]
        twist: i64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long)]
        derivative: bool,
    },
    /// Run one of the worked identities and report PASS or FAIL
    Verify {
        scenario: Scenario,
        #[arg(long)]
        prec: Option<i64>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Apply T(p) to a coefficient table
    Hecke {
        #[arg(long = "in")]
        input: String,
        #[arg(long)]
        p: i64,
        #[arg(long)]
        out: String,
    },
}

#[derive(clap::Args, Debug)]
struct ProductArgs {
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    root: Option<i64>,
    #[arg(long)]
    level: Option<i64>,
    /// A JSON exponent file, or builtin:zagier5 / builtin:mock6
    #[arg(long)]
    exponents: String,
    #[arg(long)]
    prec: i64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Scenario {
    Zagier5,
    Mock6,
    Gross37,
}

/// Exit code with the text destined for stdout and stderr.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Precondition(String),
}

impl From<FileError> for Failure {
    fn from(e: FileError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<borcherds_core::Error> for Failure {
    fn from(e: borcherds_core::Error) -> Self {
        Failure::Precondition(e.to_string())
    }
}

type Run = Result<(i32, String), Failure>;

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let (stdout, stderr) = if code == 0 { (text, String::new()) } else { (String::new(), text) };
            return Outcome { code, stdout, stderr };
        }
    };
    match dispatch(cli.command) {
        Ok((code, stdout)) => Outcome { code, stdout, stderr: String::new() },
        Err(Failure::Usage(msg)) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {msg}\n") },
        Err(Failure::Precondition(msg)) => Outcome { code: 3, stdout: String::new(), stderr: format!("error: {msg}\n") },
    }
}

fn series_text(s: &QSeries) -> String {
    let mut out = String::new();
    for line in s.to_lines() {
        out.push_str(&line);
        out.push('\n');
    }
    out
}

fn parse_ints<const K: usize>(s: &str, what: &str) -> Result<[i64; K], Failure> {
    let parts: Vec<i64> = s
        .split(',')
        .map(|p| p.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::Usage(format!("{what} must be {K} comma-separated integers, got {s:?}")))?;
    parts.try_into().map_err(|_| Failure::Usage(format!("{what} must have {K} entries, got {s:?}")))
}

fn dispatch(command: Command) -> Run {
    match command {
        Command::Qexp { form, prec } => qexp(&form, prec),
        Command::Heegner { level, disc, root, delta, normalize_w2 } => heegner(level, disc, root, delta, normalize_w2),
        Command::GenusChar { delta, form, level, oracle } => {
            let [a, b, c] = parse_ints::<3>(&form, "--form")?;
            let q = Bqf::new(a, b, c);
            let chi = genus_char(delta, &q, level)?;
            let mut out = format!("{chi}\n");
            if oracle {
                let check = genus_char_oracle(delta, &q, level)?;
                writeln!(out, "oracle: {check}").unwrap();
                if check != chi {
                    writeln!(out, "FAIL").unwrap();
                    return Ok((1, out));
                }
            }
            Ok((0, out))
        }
        Command::Product(args) => {
            let data = exponent_data(&args)?;
            Ok((0, series_text(&twisted_product(&data, args.prec)?)))
        }
        Command::Dlog(args) => {
            let data = exponent_data(&args)?;
            Ok((0, series_text(&dlog_expansion(&data, args.prec)?)))
        }
        Command::Lvalue { curve, cond, twist, tol, derivative } => {
            let a = parse_ints::<5>(&curve, "--curve")?;
            let e = EllipticCurve::new(a, cond)?;
            let g = newform_an(&e, coefficients_needed(cond, twist, tol).max(1))?;
            let v = if derivative { l_derivative(&g, twist, tol)? } else { l_central(&g, twist, tol)? };
            Ok((0, format!("{v:.12}\n")))
        }
        Command::Verify { scenario, prec, tol } => {
            let report = match scenario {
                Scenario::Zagier5 => verify_zagier5(prec.unwrap_or(11))?,
                Scenario::Mock6 => verify_mock6(prec.unwrap_or(21))?,
                Scenario::Gross37 => verify_gross37(prec.unwrap_or(30), tol)?,
            };
            Ok((if report.passed { 0 } else { 1 }, format!("{report}\n")))
        }
        Command::Hecke { input, p, out } => {
            let table = CoeffTableFile::from_json(&files::read(&input)?, &input)?.to_coeffs()?;
            let image = hecke_tp(&table, p)?;
            std::fs::write(&out, CoeffTableFile::from_coeffs(&image).to_json() + "\n")
                .map_err(|e| Failure::Usage(format!("cannot write {out}: {e}")))?;
            Ok((0, format!("wrote {} entries to {out}\n", image.entries.len())))
        }
    }
}

fn qexp(form: &str, prec: i64) -> Run {
    if prec < 1 {
        return Err(Failure::Usage("--prec must be positive".into()));
    }
    let s = match form {
        "eta" => eta_series(prec),
        "theta" => theta_series(prec),
        "E4" => eisenstein_series(4, prec)?,
        "E6" => eisenstein_series(6, prec)?,
        "j" => j_series(prec)?,
        "j6star" => level6_forms(prec)?.0,
        "delta6" => level6_forms(prec)?.1,
        "omega" => mock_omega(prec),
        _ => match form.strip_prefix("fd:").map(str::parse::<i64>) {
            Some(Ok(d)) => plus_form(d, prec)?.series,
            _ => return Err(Failure::Usage(format!("unknown form {form:?}"))),
        },
    };
    Ok((0, series_text(&s)))
}

fn heegner(level: i64, disc: i64, root: i64, delta: i64, normalize_w2: bool) -> Run {
    let list = classes(level, disc, root)?;
    let mut out = String::new();
    writeln!(out, "{} classes of discriminant {disc} at level {level}, b ≡ {root} (mod {})", list.len(), 2 * level).unwrap();
    for c in list {
        let chi = genus_char(delta, &c.rep, level)?;
        let mut weight = rat(i64::from(chi)) / rat(c.w as i64);
        if normalize_w2 {
            weight *= rat(2);
        }
        let stab = stab_order(&c.rep, level)?;
        writeln!(out, "{}  point {}  w {}  stab {}  weight {}", c.rep, c.point, c.w, stab, format_rational(&weight)).unwrap();
    }
    Ok((0, out))
}

fn exponent_data(args: &ProductArgs) -> Result<ExponentData, Failure> {
    if let Some(name) = args.exponents.strip_prefix("builtin:") {
        let data = match name {
            "zagier5" => zagier5_exponents(args.prec)?,
            "mock6" => mock6_exponents(args.prec)?,
            _ => return Err(Failure::Usage(format!("unknown builtin {name:?}"))),
        };
        for (flag, given, fixed) in
            [("--delta", args.delta, data.delta), ("--root", args.root, data.r), ("--level", args.level, data.level)]
        {
            if given.is_some_and(|g| g != fixed) {
                return Err(Failure::Usage(format!("builtin:{name} has {flag} {fixed}")));
            }
        }
        return Ok(data);
    }
    let (Some(delta), Some(r), Some(level)) = (args.delta, args.root, args.level) else {
        return Err(Failure::Usage("an exponent file needs --delta, --root and --level".into()));
    };
    let file = ExponentsFile::from_json(&files::read(&args.exponents)?, &args.exponents)?;
    let mut data = ExponentData::new(delta, r, level, file.c_plus()?);
    data.weyl = file.weyl()?;
    Ok(data)
}
