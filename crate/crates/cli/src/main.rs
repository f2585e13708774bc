use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{FromPrimitive, ToPrimitive};

use bigeven::genfun;
use bigeven::numeric::{recover_shape_constants, ClosedForms, KernelForm, PoleDecomposition, Route};
use bigeven::oracle;
use bigeven::stats::{self, ExactRational, StatRow};
use bigeven::verify::{self, VerifyConfig};
use bigeven::{Engine, Error, OutputMeta, OutputRecord, Threshold};

const USAGE: u8 = 2;
const MISMATCH: u8 = 1;

/// Spot-check positions for closed-form reports.
const SPOT_N: [usize; 5] = [5, 10, 20, 30, 50];

#[derive(Parser)]
#[command(name = "bigeven", version, about = "Count compositions by their large even parts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// One row of statistics per n.
    Table(TableArgs),
    /// The polynomial f_n(y) of the large-even-part distribution.
    Poly(PolyArgs),
    /// Poles and constants of a closed form, with a spot check.
    Closedform(ClosedformArgs),
    /// Compare the exact engine with the oracle and the numeric closed forms.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct KArg {
    /// Threshold: parts that are even and larger than k are counted.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    k: u32,
}

#[derive(Args)]
struct TableArgs {
    #[command(flatten)]
    k: KArg,
    #[arg(long, default_value_t = 0)]
    ell: u32,
    #[arg(long = "n-max", alias = "n", default_value_t = 30)]
    n_max: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, value_enum, default_value_t = EngineArg::Exact)]
    engine: EngineArg,
    #[arg(long = "oracle-cap", default_value_t = oracle::DEFAULT_CAP)]
    oracle_cap: usize,
}

#[derive(Args)]
struct PolyArgs {
    #[command(flatten)]
    k: KArg,
    #[arg(long, alias = "n-max")]
    n: usize,
}

#[derive(Args)]
struct ClosedformArgs {
    #[command(flatten)]
    k: KArg,
    #[arg(long, value_enum)]
    target: Target,
    #[arg(long, default_value_t = 0)]
    ell: u32,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long = "k-max", value_parser = clap::value_parser!(u32).range(1..))]
    k_max: u32,
    #[arg(long = "n-max")]
    n_max: usize,
    #[arg(long = "ell-max", default_value_t = 0)]
    ell_max: u32,
    #[arg(long = "oracle-cap", default_value_t = oracle::DEFAULT_CAP)]
    oracle_cap: usize,
    /// Skip the numeric closed-form comparison.
    #[arg(long = "no-numeric")]
    no_numeric: bool,
    /// Check a deliberately broken engine whose delta is off by one.
    #[arg(long = "mutate-delta", hide = true)]
    mutate_delta: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Exact,
    Numeric,
    Oracle,
}

impl From<EngineArg> for Engine {
    fn from(e: EngineArg) -> Self {
        match e {
            EngineArg::Exact => Engine::Exact,
            EngineArg::Numeric => Engine::Numeric,
            EngineArg::Oracle => Engine::Oracle,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    Avoid,
    Parity,
    Total,
    Late,
    First,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Numeric(String),
    #[error("{0}")]
    Mismatch(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Mismatch(_) => MISMATCH,
            _ => USAGE,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Table(a) => cmd_table(&a),
        Command::Poly(a) => cmd_poly(&a),
        Command::Closedform(a) => cmd_closedform(&a),
        Command::Verify(a) => cmd_verify(&a),
    };
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn threshold(k: u32) -> Result<Threshold, CliError> {
    Ok(Threshold::new(k as i64)?)
}

fn numeric_err(e: impl std::fmt::Display) -> CliError {
    CliError::Numeric(e.to_string())
}

fn cmd_table(a: &TableArgs) -> Result<String, CliError> {
    let t = threshold(a.k.k)?;
    let rows = match a.engine {
        EngineArg::Exact => stats::build_table(t, a.ell, a.n_max)?.rows,
        EngineArg::Oracle => oracle_rows(t, a.ell, a.n_max, a.oracle_cap)?,
        EngineArg::Numeric => numeric_rows(t, a.ell, a.n_max)?,
    };
    let record = OutputRecord {
        meta: OutputMeta::new(t.k(), a.ell, a.engine.into()),
        rows,
    };
    Ok(match a.format {
        Format::Text => record.to_text(),
        Format::Csv => record.to_csv(),
        Format::Json => record.to_json() + "\n",
    })
}

fn oracle_rows(t: Threshold, ell: u32, n_max: usize, cap: usize) -> Result<Vec<StatRow>, CliError> {
    (0..=n_max)
        .map(|n| Ok(oracle::aggregate_capped(n, t, ell, cap)?.stat_row(ell)))
        .collect()
}

fn round(v: Complex64, n: usize, what: &str) -> Result<BigInt, CliError> {
    BigInt::from_f64(v.re.round())
        .ok_or_else(|| CliError::Numeric(format!("{what} at n={n} is not finite")))
}

/// Rows from the floating-point closed forms, rounded to integers. The
/// distribution column is left empty.
fn numeric_rows(t: Threshold, ell: u32, n_max: usize) -> Result<Vec<StatRow>, CliError> {
    let forms = ClosedForms::new(t, ell).map_err(numeric_err)?;
    let short: Vec<PoleDecomposition> = (0..ell)
        .map(|j| {
            let g = genfun::exactly_allowed_gf(t, j)?;
            recover_shape_constants(&g).map_err(numeric_err)
        })
        .collect::<Result<_, CliError>>()?;
    (0..=n_max)
        .map(|n| {
            let r = forms.row(n);
            let c = round(r.c, n, "c")?;
            let late = round(r.late, n, "L")?;
            let short_sum: Complex64 = short.iter().map(|d| d.coefficient(n)).sum();
            let total = round(r.total, n, "T")?;
            let parity = |v: Option<Complex64>, what| v.map(|v| round(v, n, what)).transpose();
            Ok(StatRow {
                n,
                a: Vec::new(),
                even: parity(r.even, "E")?,
                odd: parity(r.odd, "O")?,
                first_at: round(r.first_at, n, "F")?,
                late_exists: &late - &c + round(short_sum, n, "A")?,
                avg: (n > 0).then(|| ExactRational::new(total.clone(), stats::compositions_count(n))),
                c,
                total,
                late,
            })
        })
        .collect()
}

fn cmd_poly(a: &PolyArgs) -> Result<String, CliError> {
    let t = threshold(a.k.k)?;
    Ok(format!("{}\n", stats::f_poly(t, a.n)))
}

fn fmt_complex(z: Complex64) -> String {
    format!("{:+.15e} {:+.15e}i", z.re, z.im)
}

fn write_decomposition(out: &mut String, dec: &PoleDecomposition) {
    let poles = dec.poles();
    let _ = writeln!(out, "poles: {}", poles.len());
    let _ = writeln!(out, "{:>48}  {:>22}  {:>4}", "pole", "|pole|", "mult");
    for (p, m) in &poles {
        let _ = writeln!(out, "{:>48}  {:>22.15e}  {:>4}", fmt_complex(*p), p.norm(), m);
        for term in dec.terms.iter().filter(|term| term.pole == *p) {
            let _ = writeln!(out, "    order {:>2} constant {}", term.order, fmt_complex(term.coeff));
        }
    }
    if !dec.polynomial_part.is_empty() {
        let _ = writeln!(out, "polynomial part: {:?}", dec.polynomial_part);
    }
    let _ = writeln!(out, "reconstruction error: {:.3e}", dec.reconstruction_error);
}

fn write_kernel(out: &mut String, name: &str, form: &KernelForm) {
    let route = match form.route {
        Route::SimplePole => "simple poles",
        Route::MultiPole => "multi-pole",
    };
    let _ = writeln!(out, "{name}: {route}, root residual {:.3e}", form.roots.residual_bound);
    if form.route == Route::MultiPole {
        eprintln!("warning: {name} has a non-simple root; using the multi-pole decomposition");
    }
    write_decomposition(out, &form.decomposition);
}

fn cmd_closedform(a: &ClosedformArgs) -> Result<String, CliError> {
    let t = threshold(a.k.k)?;
    let forms = ClosedForms::new(t, a.ell).map_err(numeric_err)?;
    let ell = match a.target {
        Target::Late | Target::First => a.ell,
        _ => 0,
    };
    let table = stats::build_table(t, ell, *SPOT_N.iter().max().unwrap())?;

    let mut out = String::new();
    let name = match a.target {
        Target::Avoid => "avoid",
        Target::Parity => "parity",
        Target::Total => "total",
        Target::Late => "late",
        Target::First => "first",
    };
    let _ = writeln!(out, "# closed form target={name} k={} ell={ell}", t.k());
    type Pick = fn(&ClosedForms, &StatRow) -> Vec<(&'static str, Complex64, BigInt)>;
    let pick: Pick = match a.target {
        Target::Avoid => {
            let _ = writeln!(out, "kernel: ({}) / ({})", bigeven::numeric::kernel_numerator(), bigeven::numeric::reduced_kernel(t, 1));
            write_kernel(&mut out, "avoid kernel", &forms.avoid);
            |f, r| vec![("c", f.avoid(r.n), r.c.clone())]
        }
        Target::Parity => {
            let _ = writeln!(out, "kernel: ({}) / ({})", bigeven::numeric::kernel_numerator(), bigeven::numeric::reduced_kernel(t, 2));
            write_kernel(&mut out, "signed kernel", &forms.signed);
            |f, r| {
                let (e, o) = f.parity(r.n).expect("spot n >= 1");
                vec![
                    ("E", e, r.even.clone().unwrap()),
                    ("O", o, r.odd.clone().unwrap()),
                ]
            }
        }
        Target::Total => {
            write_decomposition(&mut out, &forms.total);
            |f, r| vec![("T", f.total(r.n), r.total.clone())]
        }
        Target::Late => {
            write_decomposition(&mut out, &forms.late);
            |f, r| vec![("L", f.late(r.n), r.late.clone())]
        }
        Target::First => {
            write_decomposition(&mut out, &forms.first_at);
            |f, r| vec![("F", f.first_at(r.n), r.first_at.clone())]
        }
    };

    let _ = writeln!(out, "spot check:");
    let _ = writeln!(out, "{:>4}  {:>5}  {:>28}  {:>24}  {:>10}  ok", "n", "field", "numeric", "exact", "rel_err");
    let mut all_ok = true;
    for &n in &SPOT_N {
        for (field, numeric, exact) in pick(&forms, &table.rows[n]) {
            let e = exact.to_f64().unwrap_or(f64::INFINITY);
            let rel = (numeric.re - e).abs() / e.abs().max(1.0);
            let ok = verify::numeric_matches(numeric, &exact);
            all_ok &= ok;
            let _ = writeln!(
                out,
                "{n:>4}  {field:>5}  {:>28.6}  {exact:>24}  {rel:>10.2e}  {}",
                numeric.re,
                if ok { "yes" } else { "NO" }
            );
        }
    }
    if !all_ok {
        eprintln!("warning: spot check outside tolerance");
    }
    Ok(out)
}

fn cmd_verify(a: &VerifyArgs) -> Result<String, CliError> {
    let config = VerifyConfig {
        k_max: a.k_max,
        n_max: a.n_max,
        ell_max: a.ell_max,
        oracle_cap: a.oracle_cap,
        oracle: true,
        numeric: !a.no_numeric,
    };
    let summary = if a.mutate_delta {
        verify::run_with(&config, |t, ell, n_max| {
            let bad = Threshold::with_delta_unchecked(t.k(), t.delta() + 1);
            stats::build_table(bad, ell, n_max)
        })?
    } else {
        verify::run(&config)?
    };
    if summary.passed() {
        Ok(summary.to_string())
    } else {
        print!("{summary}");
        let first = summary
            .first_mismatch
            .map(|m| m.to_string())
            .unwrap_or_else(|| summary.errors.join("; "));
        Err(CliError::Mismatch(first))
    }
}
