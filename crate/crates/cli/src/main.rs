use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use khv_core::diagram::parse_pd;
use khv_core::expansion::{birman_lin, jones_taylor, v_n, v_nj, vassiliev_value, DEFAULT_TRUNCATION, MAX_TRUNCATION};
use khv_core::homology::homology_ranks;
use khv_core::polynomials::{check_skein_triple, jones_from_kh, khovanov_polynomial, JonesPoly};
use khv_core::{BigradedRanks, Corpus, Diagram, Rational, Ring};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "khv", version, about = "Khovanov homology and the polynomials v_n(t, x)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Homology ranks and the Khovanov polynomial
    Compute {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        opts: Opts,
    },
    /// v_n(t, x), or its part v_{n,j} at x-degree j
    Vn {
        #[command(flatten)]
        input: Input,
        /// Order n; without it, v_0 .. v_N are printed
        #[arg(long, value_parser = parse_order)]
        n: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        j: Option<i64>,
        #[arg(long, value_parser = parse_order, default_value_t = DEFAULT_TRUNCATION)]
        truncation: usize,
        #[command(flatten)]
        opts: Opts,
    },
    /// v_n(-1, 1)
    Vassiliev {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_parser = parse_order)]
        n: usize,
        #[command(flatten)]
        opts: Opts,
    },
    /// Jones polynomial J(q), or the normalized V(r); --truncation adds the
    /// Taylor coefficients of J(e^y), or u_0 .. u_N of V(e^x)
    Jones {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        normalized: bool,
        #[arg(long, value_parser = parse_order)]
        truncation: Option<usize>,
        #[command(flatten)]
        opts: Opts,
    },
    /// Checks q^-2 J(L+) - q^2 J(L-) = (q^-1 - q) J(L0); each link is a
    /// corpus name or a PD code
    Skein {
        #[arg(long)]
        plus: String,
        #[arg(long)]
        minus: String,
        #[arg(long)]
        zero: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Recomputes the seven-knot table and compares it row by row
    VerifyTable {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Input {
    /// Corpus name, e.g. 3_1
    #[arg(long)]
    knot: Option<String>,
    /// PD code, e.g. "X(4,2,5,1) X(6,4,1,3) X(2,6,3,5)"
    #[arg(long)]
    pd: Option<String>,
}

#[derive(Args)]
struct Opts {
    #[arg(long, value_enum, default_value_t = RingArg::Q)]
    ring: RingArg,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum RingArg {
    Q,
    Gf2,
}

impl From<RingArg> for Ring {
    fn from(r: RingArg) -> Ring {
        match r {
            RingArg::Q => Ring::Rationals,
            RingArg::Gf2 => Ring::Gf2,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Latex,
}

fn parse_order(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|_| format!("{s:?} is not a nonnegative integer"))?;
    if n > MAX_TRUNCATION {
        return Err(format!("{n} exceeds the maximum order {MAX_TRUNCATION}"));
    }
    Ok(n)
}

fn corpus() -> Result<Corpus> {
    match std::env::var_os("KHV_CORPUS") {
        Some(path) => Corpus::from_path(&path).with_context(|| "stage: corpus"),
        None => Ok(Corpus::embedded()),
    }
}

fn diagram(input: &Input) -> Result<Diagram> {
    match (&input.knot, &input.pd) {
        (Some(name), None) => Ok(corpus()?.load(name).context("stage: corpus")?.diagram.clone()),
        (None, Some(pd)) => parse_pd(pd).context("stage: parse"),
        _ => bail!("exactly one of --knot and --pd is required"),
    }
}

/// A corpus name if there is one by that name, otherwise a PD code.
fn link(arg: &str, corpus: &Corpus) -> Result<Diagram> {
    match corpus.load(arg) {
        Ok(e) => Ok(e.diagram.clone()),
        Err(_) => {
            parse_pd(arg).with_context(|| format!("stage: parse ({arg:?} is neither a corpus name nor a PD code)"))
        }
    }
}

fn ranks(d: &Diagram, ring: Ring) -> Result<BigradedRanks> {
    homology_ranks(d, ring).context("stage: homology")
}

fn fraction_json(r: &Rational) -> Value {
    json!({ "num": r.numer().to_string(), "den": r.denom().to_string() })
}

fn fraction_latex(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        let sign = if *r < Rational::default() { "-" } else { "" };
        format!("{sign}\\frac{{{}}}{{{}}}", r.numer().magnitude(), r.denom())
    }
}

fn jones_json(j: &JonesPoly) -> Value {
    Value::Array(j.terms().map(|(e, c)| json!({ "q": e, "coeff": c })).collect())
}

fn emit(format: Format, text: String, latex: String, value: Value) -> Result<()> {
    match format {
        Format::Text => println!("{text}"),
        Format::Latex => println!("{latex}"),
        Format::Json => println!("{}", serde_json::to_string_pretty(&value)?),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Compute { input, opts } => {
            let d = diagram(&input)?;
            let r = ranks(&d, opts.ring.into())?;
            let kh = khovanov_polynomial(&r);
            let mut text: Vec<String> = r.iter().map(|((i, j), v)| format!("H^({i},{j}) rank {v}")).collect();
            text.push(format!("Kh = {kh}"));
            let ranks_json: Vec<Value> = r.iter().map(|((i, j), v)| json!({ "i": i, "j": j, "rank": v })).collect();
            let value = json!({ "pd": d.to_pd(), "ranks": ranks_json, "kh": kh.to_json() });
            emit(opts.format, text.join("\n"), kh.to_latex(), value)?;
        }
        Command::Vn { input, n, j, truncation, opts } => {
            let d = diagram(&input)?;
            let r = ranks(&d, opts.ring.into())?;
            let orders: Vec<usize> = match n {
                Some(n) => vec![n],
                None => (0..=truncation).collect(),
            };
            let polys: Vec<_> =
                orders.iter().map(|&n| if let Some(j) = j { v_nj(&r, n, j) } else { v_n(&r, n) }).collect();
            let single = polys.len() == 1;
            let label = |k: usize, s: String| if single { s } else { format!("v_{} = {s}", polys[k].order()) };
            let text = polys.iter().enumerate().map(|(k, p)| label(k, p.to_text())).collect::<Vec<_>>().join("\n");
            let latex = polys.iter().enumerate().map(|(k, p)| label(k, p.to_latex())).collect::<Vec<_>>().join("\n");
            let value = if single {
                serde_json::to_value(polys[0].to_json())?
            } else {
                serde_json::to_value(polys.iter().map(|p| p.to_json()).collect::<Vec<_>>())?
            };
            emit(opts.format, text, latex, value)?;
        }
        Command::Vassiliev { input, n, opts } => {
            let d = diagram(&input)?;
            let v = vassiliev_value(&v_n(&ranks(&d, opts.ring.into())?, n));
            emit(opts.format, v.to_string(), fraction_latex(&v), fraction_json(&v))?;
        }
        Command::Jones { input, normalized, truncation, opts } => {
            let d = diagram(&input)?;
            let j = jones_from_kh(&khovanov_polynomial(&ranks(&d, opts.ring.into())?));
            if normalized {
                let v = j.normalized().context("stage: normalization")?;
                let terms: Vec<Value> = v.doubled_terms().map(|(k, c)| json!({ "r_doubled": k, "coeff": c })).collect();
                let mut text = v.to_text();
                let mut value = json!({ "v": terms });
                if let Some(t) = truncation {
                    let u = birman_lin(&v, t);
                    text.push_str(&format!("\nu = {u}"));
                    value["u"] = Value::Array(u.coeffs().iter().map(fraction_json).collect());
                }
                emit(opts.format, text.clone(), text, value)?;
            } else {
                let mut text = j.to_text();
                let mut value = json!({ "j": jones_json(&j) });
                if let Some(t) = truncation {
                    let c = jones_taylor(&j, t);
                    let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                    text.push_str(&format!("\ntaylor = [{}]", parts.join(", ")));
                    value["taylor"] = Value::Array(c.iter().map(fraction_json).collect());
                }
                emit(opts.format, text.clone(), text, value)?;
            }
        }
        Command::Skein { plus, minus, zero, format } => {
            let c = corpus()?;
            let mut polys = Vec::new();
            for arg in [&plus, &minus, &zero] {
                let d = link(arg, &c)?;
                polys.push(jones_from_kh(&khovanov_polynomial(&ranks(&d, Ring::Rationals)?)));
            }
            let holds = check_skein_triple(&polys[0], &polys[1], &polys[2]);
            emit(format, holds.to_string(), holds.to_string(), json!({ "holds": holds }))?;
        }
        Command::VerifyTable { format } => {
            let report = corpus()?.verify_table();
            let rows: Vec<Value> = report
                .knots
                .iter()
                .flat_map(|k| {
                    k.rows.iter().map(move |r| {
                        json!({
                            "knot": k.name,
                            "row": r.row,
                            "ok": r.mismatch.is_none(),
                            "witness": r.mismatch.as_ref().map(|m| m.to_string()),
                        })
                    })
                })
                .collect();
            let errors: Vec<Value> = report
                .knots
                .iter()
                .filter_map(|k| k.error.as_ref().map(|e| json!({ "knot": k.name, "error": e })))
                .collect();
            let value = json!({ "passed": report.passed(), "total": report.total(), "rows": rows, "errors": errors });
            emit(format, report.to_string(), report.to_string(), value)?;
            return Ok(report.all_pass());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
