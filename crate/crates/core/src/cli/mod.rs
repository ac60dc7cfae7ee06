//! Command-line front end: exact expansions, Frobenius solving, vvmf
//! construction, Eisenstein series, the verification registry, and
//! supersingular polynomials.
//!
//! Exit codes: 0 success (including verified identities), 2 a verified
//! identity actually failed, 3 parse or usage errors.

pub mod parse;
pub mod registry;

use crate::exactnum::{parse_rational, rati, Rational};
use crate::qseries::{eisenstein_level1, eta_power, hauptmodul_suite, PuiseuxSeries, SeriesContext};
use crate::vvmf::{dim2_minimal, dim3_minimal, supersingular_polynomial, ExponentSet, VvmfComponents};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use registry::VerifyStatus;

#[derive(Parser, Debug)]
#[command(name = "qmf", version, about = "Exact q-expansions, MLDEs and vector-valued modular forms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Default)]
enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Default)]
enum Route {
    #[default]
    Hyp,
    Frobenius,
    Both,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the exact expansion of a named modular object
    /// (E2, E4, E6, eta, eta^t, delta, j, K, A).
    Expand {
        object: String,
        /// Known terms counted from the valuation, in q-units.
        #[arg(long, default_value_t = 30)]
        prec: i64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Solve an MLDE at an indicial root by the Frobenius method.
    /// The operator grammar uses atoms D, E4, E6, e.g. "D^2 - (1/18)*E4".
    Solve {
        operator: String,
        /// The indicial root, e.g. 0 or 1/2.
        exponent: String,
        /// The weight l of the solutions (the subscript of D_l).
        #[arg(long, default_value_t = 0)]
        weight: i64,
        #[arg(long, default_value_t = 30)]
        prec: i64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Construct a minimal-weight vector-valued modular form from its
    /// T-exponents (dimension 2 or 3).
    Vvmf {
        dim: usize,
        /// The exponents r_i in [0,1), e.g. 0 1/3 2/3.
        exponents: Vec<String>,
        #[arg(long, value_enum, default_value_t)]
        route: Route,
        #[arg(long, default_value_t = 30)]
        prec: i64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Weight-2 Eisenstein series on Gamma(N): the difference G_P - G_Q,
    /// or the full alpha-coefficient table (--table).
    Eisenstein {
        level: u64,
        /// Cusp P, e.g. 0, 1/2 or inf.
        p: Option<String>,
        /// Cusp Q.
        q: Option<String>,
        /// Emit the CSV table of alpha_n(N, a) for all label classes.
        #[arg(long)]
        table: bool,
        /// Number of q_N coefficients.
        #[arg(long, default_value_t = 30)]
        prec: i64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Run a registered identity verification (or `all`).
    Verify {
        identity: String,
        #[arg(long)]
        prec: Option<i64>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// The supersingular polynomial mod p (monic squarefree part, away from
    /// the special invariants 0 and 1728).
    SsPoly {
        p: u64,
        #[arg(long, default_value_t = 16)]
        prec: i64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

/// Run the CLI on explicit arguments; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {}", msg);
            3
        }
    }
}

fn print_series(s: &PuiseuxSeries, format: Format) -> Result<(), String> {
    match format {
        Format::Text => println!("{}", s),
        Format::Json => println!("{}", serde_json::to_string_pretty(&s.to_json()).unwrap()),
        Format::Csv => return Err("csv output applies to the eisenstein table only".into()),
    }
    Ok(())
}

fn expand_object(object: &str, prec: i64) -> Result<PuiseuxSeries, String> {
    let ctx = SeriesContext::new(prec + 4);
    let s = match object {
        "E2" => eisenstein_level1(2, &ctx).unwrap(),
        "E4" => eisenstein_level1(4, &ctx).unwrap(),
        "E6" => eisenstein_level1(6, &ctx).unwrap(),
        "eta" => eta_power(1, &ctx),
        "delta" => hauptmodul_suite(&ctx).delta,
        "j" => hauptmodul_suite(&ctx).j,
        "K" => hauptmodul_suite(&ctx).k,
        "A" => hauptmodul_suite(&ctx).a,
        other => {
            if let Some(t) = other.strip_prefix("eta^") {
                let t: i64 = t.parse().map_err(|_| format!("bad eta power {}", t))?;
                eta_power(t, &ctx)
            } else {
                return Err(format!(
                    "unknown object {}; expected one of E2, E4, E6, eta, eta^t, delta, j, K, A",
                    other
                ));
            }
        }
    };
    let bound = s.valuation_or_precision() + rati(prec);
    Ok(s.truncated(&bound.min(s.precision().clone())))
}

fn vvmf_for(dim: usize, exponents: &[String], prec: i64) -> Result<VvmfComponents, String> {
    let parsed: Vec<Rational> = exponents
        .iter()
        .map(|s| parse_rational(s).ok_or_else(|| format!("bad exponent {}", s)))
        .collect::<Result<_, _>>()?;
    let e = ExponentSet::new(parsed).map_err(|e| e.to_string())?;
    match dim {
        2 => dim2_minimal(&e, prec).map_err(|e| e.to_string()),
        3 => dim3_minimal(&e, prec).map_err(|e| e.to_string()),
        _ => Err(format!("dimension must be 2 or 3, got {}", dim)),
    }
}

fn print_vvmf(v: &VvmfComponents, agreement: Option<&str>, format: Format) -> Result<(), String> {
    match format {
        Format::Text => {
            println!("weight: {}", v.weight);
            println!(
                "exponents: {}",
                v.exponents.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(", ")
            );
            println!("mlde: {}", v.mlde);
            for (i, c) in v.components.iter().enumerate() {
                println!("f{} = {}", i + 1, c);
            }
            if let Some(a) = agreement {
                println!("route agreement: {}", a);
            }
        }
        Format::Json => {
            let mut j = v.to_json();
            if let Some(a) = agreement {
                j["route_agreement"] = serde_json::Value::String(a.to_string());
            }
            println!("{}", serde_json::to_string_pretty(&j).unwrap());
        }
        Format::Csv => return Err("csv output applies to the eisenstein table only".into()),
    }
    Ok(())
}

fn dispatch(cmd: Command) -> Result<i32, String> {
    match cmd {
        Command::Expand { object, prec, format } => {
            let s = expand_object(&object, prec)?;
            print_series(&s, format)?;
            Ok(0)
        }
        Command::Solve { operator, exponent, weight, prec, format } => {
            let mlde = parse::parse_mlde(&operator, weight)?;
            let r = parse_rational(&exponent).ok_or_else(|| format!("bad exponent {}", exponent))?;
            let solution = mlde
                .frobenius_solve(&r, &(&r + rati(prec)))
                .map_err(|e| e.to_string())?;
            print_series(&solution, format)?;
            Ok(0)
        }
        Command::Vvmf { dim, exponents, route, prec, format } => {
            let mut v = vvmf_for(dim, &exponents, prec)?;
            let agreement = match route {
                Route::Hyp => None,
                Route::Frobenius => {
                    let mut components = Vec::new();
                    for r in &v.exponents {
                        components.push(
                            v.mlde
                                .frobenius_solve(r, &(r + rati(prec)))
                                .map_err(|e| e.to_string())?,
                        );
                    }
                    v.components = components;
                    None
                }
                Route::Both => {
                    let mut ok = true;
                    for (r, c) in v.exponents.iter().zip(v.components.iter()) {
                        let frob = v
                            .mlde
                            .frobenius_solve(r, &(r + rati(prec)))
                            .map_err(|e| e.to_string())?;
                        ok &= c.agrees_with(&frob, None);
                    }
                    Some(if ok { "exact agreement on the common window" } else { "MISMATCH" })
                }
            };
            print_vvmf(&v, agreement, format)?;
            if agreement == Some("MISMATCH") {
                return Ok(2);
            }
            Ok(0)
        }
        Command::Eisenstein { level, p, q, table, prec, format } => {
            if level < 2 {
                return Err("eisenstein requires level >= 2".into());
            }
            if table {
                print!("{}", crate::eisenstein::alpha_table_csv(level, prec));
                return Ok(0);
            }
            let (p, q) = match (p, q) {
                (Some(p), Some(q)) => (p, q),
                _ => return Err("eisenstein needs two cusps P Q, or --table".into()),
            };
            let pc = crate::eisenstein::CuspLabel::parse(level, &p).ok_or_else(|| format!("bad cusp {}", p))?;
            let qc = crate::eisenstein::CuspLabel::parse(level, &q).ok_or_else(|| format!("bad cusp {}", q))?;
            let d = crate::eisenstein::eis2_difference(&pc, &qc, prec).map_err(|e| e.to_string())?;
            match format {
                Format::Csv => {
                    println!("exp,coeff");
                    for (e, c) in d.iter_terms() {
                        println!("{},{}", e, c);
                    }
                }
                f => print_series(&d, f)?,
            }
            Ok(0)
        }
        Command::Verify { identity, prec, format } => {
            let reports = if identity == "all" {
                registry::verify_all(prec)
            } else {
                vec![registry::verify(&identity, prec)?]
            };
            let mut failed = false;
            for r in &reports {
                match format {
                    Format::Json => println!("{}", serde_json::to_string_pretty(&r.to_json()).unwrap()),
                    _ => println!("{}", r),
                }
                failed |= r.status == VerifyStatus::Failed;
            }
            Ok(if failed { 2 } else { 0 })
        }
        Command::SsPoly { p, prec, format } => {
            let poly = supersingular_polynomial(p, prec).map_err(|e| e.to_string())?;
            match format {
                Format::Json => {
                    let j = serde_json::json!({
                        "p": p,
                        "coeffs_low_to_high": poly.coeffs(),
                    });
                    println!("{}", serde_json::to_string_pretty(&j).unwrap());
                }
                _ => {
                    let terms: Vec<String> = poly
                        .coeffs()
                        .iter()
                        .enumerate()
                        .rev()
                        .filter(|(_, &c)| c != 0)
                        .map(|(i, &c)| match i {
                            0 => format!("{}", c),
                            1 if c == 1 => "j".to_string(),
                            1 => format!("{}*j", c),
                            _ if c == 1 => format!("j^{}", i),
                            _ => format!("{}*j^{}", c, i),
                        })
                        .collect();
                    let body = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
                    println!("{} (mod {})", body, p);
                }
            }
            Ok(0)
        }
    }
}
