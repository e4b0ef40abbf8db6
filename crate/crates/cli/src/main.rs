mod expr;

use std::io::Read;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use modwron::etaprod::NamedSeries;
use modwron::modpoly;
use modwron::par::Exec;
use modwron::partitions::{self, Recurrence};
use modwron::qseries::QSeriesRecord;
use modwron::rat;
use modwron::ssing::{self, SsRoute};
use modwron::symmpow;
use modwron::verify::{self, Family, IdentityId, SuiteConfig, VerificationReport};
use modwron::wronskian;
use modwron::{Error, QSeries};

#[derive(Parser, Debug)]
#[command(
    name = "modwron",
    version,
    about = "Exact q-series, Wronskians and modular-form identities"
)]
struct Cli {
    /// Number of q-expansion terms (relative precision)
    #[arg(long, global = true, env = "MODWRON_PREC", default_value_t = 100)]
    prec: usize,
    /// Machine-readable output
    #[arg(long, global = true)]
    json: bool,
    /// Comma-separated primes for the supersingular pipeline
    #[arg(long, global = true, value_delimiter = ',')]
    primes: Option<Vec<u64>>,
    /// Include elapsed times in reports
    #[arg(long, global = true)]
    timings: bool,
    /// Run on the calling thread only
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RouteArg {
    Deligne,
    Wronskian,
    Oracle,
    All,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print a named series (ch1, ch2, rr_cf, a1_f1, a1_f2, weber8_1, weber8_2)
    Series { name: String },
    /// Check one registered identity through q^prec
    Verify { id: String },
    /// Wronskian of a basis such as `ch1*ch2^11,ch1^6*ch2^6` or `sym(rr,12)`
    Wronskian {
        #[arg(long)]
        basis: String,
        /// Use the plain q d/dq Wronskian instead of the modular one
        #[arg(long)]
        derived: bool,
        /// Identify W'/W as a form of this weight
        #[arg(long)]
        identify: Option<u32>,
    },
    /// Wronskian of a symmetric power against the product formula
    Symcheck {
        #[arg(long)]
        m: u32,
        #[arg(long, default_value = "weber")]
        family: String,
    },
    /// The form G_(l, alpha)
    Kz {
        #[arg(long)]
        l: u32,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
    },
    /// Supersingular polynomial mod p
    Ssing {
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, value_enum, default_value = "all")]
        route: RouteArg,
    },
    /// Colored-partition recurrences
    Partitions {
        #[arg(long)]
        check: String,
        #[arg(long, default_value_t = 50)]
        upto: usize,
    },
    /// Every identity, symmetric-power check, partition recurrence and supersingular check
    RunAll,
    /// Divisor polynomial of a form such as `E4^3 - 1/2*Delta`
    Divpoly { form: String },
    /// Identify a JSON series read from stdin as a form of the given weight
    Identify {
        #[arg(long)]
        weight: u32,
    },
}

/// A command outcome: printable text, JSON, and whether every check passed.
struct Outcome {
    text: String,
    json: Value,
    ok: bool,
}

impl Outcome {
    fn ok(text: String, json: Value) -> Self {
        Outcome {
            text,
            json,
            ok: true,
        }
    }
}

fn is_config_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Parse(_)
            | Error::UnknownName(_)
            | Error::InvalidArgument(_)
            | Error::LatticeCap { .. }
    )
}

fn ms(d: Duration) -> f64 {
    (d.as_secs_f64() * 1e6).round() / 1e3
}

fn report_json(r: &VerificationReport, timings: bool) -> Value {
    let mut v = serde_json::to_value(r).unwrap_or(Value::Null);
    if timings {
        v["elapsed_ms"] = json!(ms(r.elapsed));
    }
    v
}

fn report_line(r: &VerificationReport, timings: bool) -> String {
    let status = match r.status {
        verify::Status::Pass => "PASS",
        verify::Status::Fail => "FAIL",
        verify::Status::InsufficientPrecision => "LOW ",
    };
    let mut line = format!("{status} {:<24}", r.id);
    if let Some(p) = &r.precision {
        line.push_str(&format!(" prec {p}"));
    }
    if let Some(f) = &r.first_failure {
        line.push_str(&format!(" first failure at {f}"));
    }
    if let Some(n) = &r.note {
        line.push_str(&format!("  {n}"));
    }
    if timings {
        line.push_str(&format!("  [{:.3} ms]", ms(r.elapsed)));
    }
    line.trim_end().to_string()
}

fn series_json(s: &QSeries) -> Value {
    serde_json::to_value(QSeriesRecord::from(s)).unwrap_or(Value::Null)
}

fn run(cli: &Cli) -> modwron::Result<Outcome> {
    let exec = if cli.sequential {
        Exec::Sequential
    } else {
        Exec::default()
    };
    let n = cli.prec;
    let primes = cli
        .primes
        .clone()
        .unwrap_or_else(|| ssing::DEFAULT_PRIMES.to_vec());
    match &cli.command {
        Command::Series { name } => {
            let s = name.parse::<NamedSeries>()?.series(n)?;
            Ok(Outcome::ok(
                format!("{name} = {s}"),
                json!({"name": name, "series": series_json(&s)}),
            ))
        }
        Command::Verify { id } => {
            let r = verify::verify(id.parse::<IdentityId>()?, n)?;
            Ok(Outcome {
                text: report_line(&r, cli.timings),
                json: report_json(&r, cli.timings),
                ok: r.passed(),
            })
        }
        Command::Wronskian {
            basis,
            derived,
            identify,
        } => {
            let b = expr::parse_basis(basis, n)?;
            let eb = wronskian::echelonize(&b)?;
            let w = if *derived {
                wronskian::wronskian_derived_with(&b, exec)?
            } else {
                wronskian::wronskian_with(&b, exec)?
            };
            let exps: Vec<String> = eb.exponents.iter().map(rat::show).collect();
            let mut text = format!(
                "size {}\nleading exponents [{}]\nW = {w}",
                b.len(),
                exps.join(", ")
            );
            let mut out = json!({
                "size": b.len(),
                "leading_exponents": exps,
                "wronskian": series_json(&w),
            });
            if !w.is_zero() {
                let nw = wronskian::normalize(&w)?;
                text.push_str(&format!("\nnormalized W = {nw}"));
                out["normalized"] = series_json(&nw);
            }
            if let Some(weight) = identify {
                let f = wronskian::quotient_form_with(&b, *weight, exec)?;
                text.push_str(&format!("\nW'/W = {f}"));
                out["quotient_form"] = json!(f.to_string());
            }
            Ok(Outcome::ok(text, out))
        }
        Command::Symcheck { m, family } => {
            let fam: Family = family.parse()?;
            let (f, g) = fam.pair(n)?;
            let r = symmpow::check_sym_wronskian(&f, &g, *m, exec)?;
            let mut ok = r.product_formula && r.eta_power != Some(false);
            let mut text = format!(
                "Sym^{m}({}): W = {} * W_U^{} {}",
                fam.name(),
                r.constant,
                m * (m + 1) / 2,
                if r.product_formula { "holds" } else { "FAILS" }
            );
            text.push_str(&format!(" below q^({})", rat::show(&r.prec)));
            if let Some(e) = &r.first_failure {
                text.push_str(&format!(" (first failure at {})", rat::show(e)));
            }
            if let Some(e) = r.eta_power {
                text.push_str(&format!("\nnormalized W = eta^{}: {e}", 2 * m * (m + 1)));
            }
            let mut out = json!({
                "family": fam.name(),
                "m": m,
                "constant": r.constant.to_string(),
                "product_formula": r.product_formula,
                "first_failure": r.first_failure.as_ref().map(rat::show),
                "eta_power": r.eta_power,
                "prec": rat::show(&r.prec),
            });
            if fam == Family::Weber {
                let routes = symmpow::weber_routes(*m, n, exec)?;
                ok &= routes.agree();
                text.push_str(&format!(
                    "\nW'/W = {}\nroutes agree: {}",
                    routes.wronskian,
                    routes.agree()
                ));
                out["quotient_form"] = json!(routes.wronskian.to_string());
                out["routes_agree"] = json!(routes.agree());
            }
            Ok(Outcome {
                text,
                json: out,
                ok,
            })
        }
        Command::Kz { l, alpha } => {
            let a = rat::parse(alpha)?;
            let g = symmpow::kz_coeff(*l, &a);
            let gn = symmpow::kz_normalized(*l, &a);
            Ok(Outcome::ok(
                format!("G_({l}, {}) = {g}\nnormalized = {gn}", rat::show(&a)),
                json!({"l": l, "alpha": rat::show(&a), "form": g.to_string(), "normalized": gn.to_string()}),
            ))
        }
        Command::Ssing { p, route } => {
            let route = match route {
                RouteArg::Deligne => SsRoute::Deligne,
                RouteArg::Wronskian => SsRoute::Wronskian,
                RouteArg::Oracle => SsRoute::Oracle,
                RouteArg::All => SsRoute::All,
            };
            let ps = p.map_or(primes, |p| vec![p]);
            let mut reports = Vec::new();
            for &p in &ps {
                reports.push(ssing::ss_report(p, route, exec)?);
            }
            let ok = reports.iter().all(|r| r.passes());
            let text = reports
                .iter()
                .map(|r| {
                    let poly = modwron::poly::FpPoly::new(r.p, r.polynomial.clone());
                    format!(
                        "S_{} = {}  roots {:?}  quadratic factors {}  routes agree {}",
                        r.p,
                        if r.polynomial.is_empty() {
                            "-".to_string()
                        } else {
                            poly.to_string()
                        },
                        r.fp_roots,
                        r.quadratic_factors.len(),
                        r.routes_agree
                    )
                })
                .collect::<Vec<_>>()
                .join("\n");
            let json = if p.is_some() {
                serde_json::to_value(&reports[0])
            } else {
                serde_json::to_value(&reports)
            }
            .unwrap_or(Value::Null);
            Ok(Outcome { text, json, ok })
        }
        Command::Partitions { check, upto } => {
            let rec: Recurrence = check.parse()?;
            let r = partitions::check_recurrence(rec, *upto)?;
            let text = format!(
                "{}: {} for 2 <= n <= {upto} (n=2 count {}){}",
                rec.name(),
                if r.passes() { "holds" } else { "FAILS" },
                r.anchor,
                if r.failures.is_empty() {
                    String::new()
                } else {
                    format!(", failures at {:?}", r.failures)
                }
            );
            Ok(Outcome {
                text,
                json: serde_json::to_value(&r).unwrap_or(Value::Null),
                ok: r.passes(),
            })
        }
        Command::RunAll => {
            let mut config = SuiteConfig::new(n);
            config.primes = primes;
            config.exec = exec;
            let start = Instant::now();
            let reports = verify::run_all(&config);
            let passed = reports.iter().filter(|r| r.passed()).count();
            let mut lines: Vec<String> = reports
                .iter()
                .map(|r| report_line(r, cli.timings))
                .collect();
            lines.push(format!("{passed}/{} passed", reports.len()));
            if cli.timings {
                lines.push(format!("total {:.3} ms", ms(start.elapsed())));
            }
            let mut out = json!({
                "reports": reports.iter().map(|r| report_json(r, cli.timings)).collect::<Vec<_>>(),
                "passed": passed,
                "total": reports.len(),
            });
            if cli.timings {
                out["elapsed_ms"] = json!(ms(start.elapsed()));
            }
            Ok(Outcome {
                text: lines.join("\n"),
                json: out,
                ok: passed == reports.len(),
            })
        }
        Command::Divpoly { form } => {
            let f = expr::parse_form(form)?;
            let d = modpoly::decompose(&f)?;
            let weight = f.weight().unwrap_or(0);
            let text = format!(
                "f = {f}\nweight {weight}, t = {}, delta = {}, epsilon = {}\nf_tilde(x) = {}\nF(f, x) = {}",
                d.t, d.delta, d.epsilon, d.f_tilde, d.divisor_poly
            );
            let coeffs =
                |p: &modwron::poly::RatPoly| p.coeffs().iter().map(rat::show).collect::<Vec<_>>();
            Ok(Outcome::ok(
                text,
                json!({
                    "form": f.to_string(),
                    "weight": weight,
                    "t": d.t,
                    "delta": d.delta,
                    "epsilon": d.epsilon,
                    "f_tilde": coeffs(&d.f_tilde),
                    "divisor_polynomial": coeffs(&d.divisor_poly),
                }),
            ))
        }
        Command::Identify { weight } => {
            let mut input = String::new();
            std::io::stdin()
                .read_to_string(&mut input)
                .map_err(|e| Error::Parse(e.to_string()))?;
            let parse_err = |e: serde_json::Error| Error::Parse(e.to_string());
            let mut value: Value = serde_json::from_str(&input).map_err(parse_err)?;
            // accept the output of `series --json` as well as a bare record
            if let Some(inner) = value.get_mut("series") {
                value = inner.take();
            }
            let record: QSeriesRecord = serde_json::from_value(value).map_err(parse_err)?;
            let y = QSeries::try_from(record)?;
            let f = modpoly::identify(&y, *weight)?;
            Ok(Outcome::ok(
                f.to_string(),
                json!({"weight": weight, "form": f.to_string()}),
            ))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&out.json).unwrap_or_default()
                );
            } else {
                println!("{}", out.text);
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            if is_config_error(&e) {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
