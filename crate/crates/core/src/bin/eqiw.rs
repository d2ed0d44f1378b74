use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use eqiw::fitcalc::presentation::elem_to_json;
use eqiw::fitcalc::Presentation;
use eqiw::grp::Character;
use eqiw::harness::{ingest_fixture, render, run_fixture, Fixture};
use eqiw::iwasawa::{weierstrass_prepare, AdmissibleQuotient, EqSeries};
use eqiw::lfun::theta::rational_group_ring_json;
use eqiw::lfun::tower::exponent_precision;
use eqiw::lfun::{generalized_bernoulli, l_value_s, stickelberger_series, t_prime_data, theta_st, AbelianField, DirichletCharacter};
use eqiw::motive::{delta_module, tate_module, torsion_points, PadicOneMotive};
use eqiw::{Error, Result, Verdict};

#[derive(Parser)]
#[command(name = "eqiw", version, about = "Exact equivariant Iwasawa-theoretic computations and verification checks")]
struct Cli {
    /// Also write the JSON output to this file.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generalized Bernoulli number B_{m,χ}; CHI is FIELD:e1,e2,… with
    /// exponents on the generators of the Galois group of FIELD.
    Bernoulli {
        chi: String,
        m: u32,
        /// Also report L_S(χ, 1−m) for these finite places.
        #[arg(long = "S", value_delimiter = ',')]
        s_primes: Option<Vec<u64>>,
    },
    /// Θ_{S,T}(1−m) in Q[G]. FIELD is a conductor f or f/h1,h2 with
    /// generators of the kernel in (Z/f)^×.
    Theta {
        #[arg(long)]
        field: String,
        #[arg(long = "S", value_delimiter = ',', default_value = "")]
        s_primes: Vec<u64>,
        #[arg(long = "T", value_delimiter = ',', default_value = "")]
        t_primes: Vec<u64>,
        #[arg(long, default_value_t = 1)]
        m: u32,
    },
    /// The T-modified Δ-module over the cyclotomic tower of FIELD(μ_p).
    Delta {
        #[arg(long)]
        field: String,
        #[arg(long = "T", value_delimiter = ',')]
        t_primes: Vec<u64>,
        #[arg(long)]
        p: u64,
        #[arg(long = "N", default_value_t = 5)]
        n_prec: u32,
        #[arg(long = "M", default_value_t = 8)]
        t_prec: usize,
    },
    /// Fitting ideal of a presentation file.
    Fitting {
        #[arg(long)]
        presentation: PathBuf,
    },
    /// Weierstrass preparation of a series file over an admissible quotient.
    Weierstrass {
        #[arg(long)]
        series: PathBuf,
        #[arg(long, value_enum, default_value_t = Quotient::Minus)]
        quotient: Quotient,
    },
    /// p^n-torsion or Tate module of a p-adic 1-motive file.
    Motive {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_enum)]
        op: MotiveOp,
        #[arg(long, default_value_t = 1)]
        n: u32,
    },
    /// Θ_{S,T}^{(∞)}(0) over FIELD(μ_p) modulo (p^N, t^M).
    Series {
        #[arg(long)]
        field: String,
        #[arg(long)]
        p: u64,
        #[arg(long = "N")]
        n_prec: u32,
        #[arg(long = "M")]
        t_prec: usize,
        #[arg(long = "S", value_delimiter = ',')]
        s_primes: Vec<u64>,
        #[arg(long = "T", value_delimiter = ',')]
        t_primes: Vec<u64>,
    },
    /// Run a verification check on a fixture file.
    Check {
        #[arg(value_enum)]
        kind: CheckKind,
        #[arg(long)]
        fixture: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Quotient {
    Minus,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum MotiveOp {
    Torsion,
    Tate,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckKind {
    Integrality,
    Twist,
    BrumerStark,
    CoatesSinnott,
    EmcShape,
}

impl CheckKind {
    fn accepts(self, fixture: &Fixture) -> bool {
        match (self, fixture) {
            (CheckKind::BrumerStark, Fixture::ClassModule(_)) => true,
            (CheckKind::CoatesSinnott, Fixture::Cohomology(_)) => true,
            (CheckKind::Integrality, Fixture::Parameters { kind, .. }) => kind == "integrality",
            (CheckKind::Twist, Fixture::Parameters { kind, .. }) => kind == "twist",
            (CheckKind::EmcShape, Fixture::Parameters { kind, .. }) => kind == "emc_shape",
            _ => false,
        }
    }
}

fn parse_field(text: &str) -> Result<AbelianField> {
    let (conductor, kernel) = match text.split_once('/') {
        Some((f, h)) => (f, Some(h)),
        None => (text, None),
    };
    let conductor: u64 =
        conductor.trim().parse().map_err(|_| Error::InvalidArgument(format!("bad conductor in field \"{text}\"")))?;
    let gens: Vec<u64> = match kernel {
        Some(h) if !h.trim().is_empty() => h
            .split(',')
            .map(|g| g.trim().parse().map_err(|_| Error::InvalidArgument(format!("bad kernel generator \"{g}\""))))
            .collect::<Result<_>>()?,
        _ => Vec::new(),
    };
    AbelianField::from_subgroup(conductor, &gens)
}

fn read_json(path: &Path) -> Result<Value> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

fn bernoulli(chi: &str, m: u32, s_primes: Option<&[u64]>) -> Result<Value> {
    let (field_text, exps) = chi
        .rsplit_once(':')
        .ok_or_else(|| Error::InvalidArgument("a character is written FIELD:e1,e2,…".into()))?;
    let field = parse_field(field_text)?;
    let exps: Vec<u64> = exps
        .split(',')
        .filter(|e| !e.trim().is_empty())
        .map(|e| e.trim().parse().map_err(|_| Error::InvalidArgument(format!("bad exponent \"{e}\""))))
        .collect::<Result<_>>()?;
    let character = Character::new(field.group(), exps)?;
    let dirichlet = DirichletCharacter::from_field(&field, &character);
    let value = generalized_bernoulli(&dirichlet, m)?;
    let coeffs = |x: &eqiw::grp::CycloRational| x.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>();
    let mut out = json!({
        "field": field.to_json(),
        "character": character.exps(),
        "modulus": dirichlet.modulus(),
        "value_order": dirichlet.order(),
        "m": m,
        "bernoulli": value.to_string(),
        "bernoulli_coefficients": coeffs(&value),
    });
    if let Some(s) = s_primes {
        let l = l_value_s(&dirichlet, m, s)?;
        out["S"] = json!(s);
        out["l_value"] = Value::String(l.to_string());
        out["l_value_coefficients"] = json!(coeffs(&l));
    }
    Ok(out)
}

fn delta(field: &str, t: &[u64], p: u64, n_prec: u32, t_prec: usize) -> Result<Value> {
    let field = parse_field(field)?.with_mu_p(p)?;
    let alg = eqiw::grp::TruncAlgebra::series(p, n_prec, field.group(), t_prec)?;
    let data = t_prime_data(&field, t, p, exponent_precision(p, n_prec, t_prec))?;
    let module = delta_module(&alg, &data)?;
    Ok(json!({
        "field": field.to_json(),
        "module": module.to_json(),
        "fitting_ideal": module.fitting_ideal()?.to_json(),
        "delta_T": elem_to_json(&module.delta_t()?),
        "fitting_matches_delta": module.fitting_matches_delta()?,
    }))
}

fn weierstrass(path: &Path, quotient: Quotient) -> Result<Value> {
    let series = EqSeries::from_json(&read_json(path)?)?;
    let alg = series.alg();
    let quotient = match quotient {
        Quotient::Minus => AdmissibleQuotient::minus(alg.p(), &alg.group)?,
        Quotient::All => AdmissibleQuotient::all(alg.p(), &alg.group)?,
    };
    let prep = weierstrass_prepare(series.elem(), &quotient)?;
    Ok(json!({
        "lambda": prep.lambdas().iter().map(|(c, l)| json!({ "character": c, "lambda": l })).collect::<Vec<_>>(),
        "certified": prep.certified(),
        "unit": elem_to_json(&prep.unit),
        "polynomial": elem_to_json(&prep.poly),
    }))
}

fn motive(path: &Path, op: MotiveOp, n: u32) -> Result<Value> {
    let motive = PadicOneMotive::from_json(&read_json(path)?)?;
    Ok(match op {
        MotiveOp::Torsion => {
            let torsion = torsion_points(&motive, n)?;
            let mut out = torsion.to_json();
            out["order_formula_holds"] = json!(torsion.order_formula_holds());
            out["exact"] = json!(torsion.is_exact()?);
            out["splits_equivariantly"] = json!(torsion.splits_equivariantly());
            out
        }
        MotiveOp::Tate => {
            let tate = tate_module(&motive, n)?;
            let mut out = tate.to_json();
            out["divisible_part_stable"] = json!(tate.divisible_part_is_stable());
            out
        }
    })
}

/// The JSON output and the verdict that decides the exit code.
fn run(command: Command) -> Result<(Value, Verdict)> {
    let plain = |v: Value| (v, Verdict::Pass);
    Ok(match command {
        Command::Bernoulli { chi, m, s_primes } => plain(bernoulli(&chi, m, s_primes.as_deref())?),
        Command::Theta { field, s_primes, t_primes, m } => {
            let field = parse_field(&field)?;
            let theta = theta_st(&field, &s_primes, &t_primes, m)?;
            plain(json!({
                "field": field.to_json(),
                "theta": theta.to_json(),
                "denominator": theta.denominator().to_string(),
                "element": rational_group_ring_json(&theta.elem),
            }))
        }
        Command::Delta { field, t_primes, p, n_prec, t_prec } => plain(delta(&field, &t_primes, p, n_prec, t_prec)?),
        Command::Fitting { presentation } => {
            let pres = Presentation::from_json(&read_json(&presentation)?)?;
            plain(json!({ "presentation": pres.to_json(), "fitting_ideal": pres.fitting_ideal()?.to_json() }))
        }
        Command::Weierstrass { series, quotient } => plain(weierstrass(&series, quotient)?),
        Command::Motive { spec, op, n } => plain(motive(&spec, op, n)?),
        Command::Series { field, p, n_prec, t_prec, s_primes, t_primes } => {
            let field = parse_field(&field)?;
            plain(stickelberger_series(&field, &s_primes, &t_primes, p, n_prec, t_prec)?.to_json())
        }
        Command::Check { kind, fixture } => {
            let fixture = ingest_fixture(&fixture)?;
            if !kind.accepts(&fixture) {
                return Err(Error::Schema("the fixture kind does not match the requested check".into()));
            }
            let report = run_fixture(&fixture)?;
            (report.to_json(), report.overall())
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((value, verdict)) => {
            let text = render(&value);
            print!("{text}");
            if let Some(path) = cli.report {
                if let Err(e) = std::fs::write(&path, &text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            }
            ExitCode::from(verdict.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
