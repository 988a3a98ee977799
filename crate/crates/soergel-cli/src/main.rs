//! `soergel`: triply-graded homology and Serre checks for dihedral braids.
//!
//! Exit codes: 0 pass, 1 computation or input error, 2 check-suite
//! failure, 3 inconclusive.

mod cache;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use soergel::braid::BraidWord;
use soergel::complexes::ComplexDump;
use soergel::hecke::{default_strands, homfly};
use soergel::homology::{euler_check, hhh_of_complex, is_link_invariant, PoincareSeries};
use soergel::polyring::Letter;
use soergel::serre::{self, CheckResult, Status};
use soergel::trace::{hochschild_complex, trace_complex, Sign};

use cache::Cache;

const DEFAULT_SEED: u64 = 0x5EED_2024;

#[derive(Parser)]
#[command(name = "soergel", version, about = "Exact Soergel bimodule computations for dihedral braids")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Triply-graded series of the braid closure.
    Hhh {
        #[arg(allow_hyphen_values = true)]
        braid: String,
        #[arg(long, default_value_t = 3)]
        m: u8,
        #[arg(long)]
        json: bool,
        /// Keep only the Hochschild degree `A^k`.
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=2))]
        strand: Option<u8>,
    },
    /// Minimal Rouquier complex of the braid.
    Minimal {
        #[arg(allow_hyphen_values = true)]
        braid: String,
        #[arg(long, default_value_t = 3)]
        m: u8,
        #[arg(long)]
        json: bool,
    },
    /// A partial trace or a Hochschild functor applied to the braid complex.
    Trace {
        #[arg(allow_hyphen_values = true)]
        braid: String,
        #[arg(long, default_value_t = 3)]
        m: u8,
        #[arg(long, value_enum)]
        functor: Functor,
        #[arg(long)]
        json: bool,
    },
    /// HOMFLY-PT polynomial of the closure in `v`, `z`.
    Homfly {
        #[arg(allow_hyphen_values = true)]
        braid: String,
        #[arg(long)]
        json: bool,
    },
    /// Run one of the structural check suites.
    SerreCheck {
        #[arg(long, default_value_t = 3)]
        m: u8,
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum Functor {
    PiSMinus,
    PiSPlus,
    PiTMinus,
    PiTPlus,
    Hh0,
    Hh1,
    Hh2,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Vanishing,
    Pift,
    Relative,
    Full,
}

#[derive(Serialize)]
struct HhhOut {
    braid: String,
    m: u8,
    experimental: bool,
    strand: Option<u8>,
    text: String,
    /// Quintuples `[a, t, q, e, c]` for `c·A^a T^t Q^q/(1−Q²)^e`.
    series: Vec<[i64; 5]>,
    euler_check: Option<EulerOut>,
}

#[derive(Serialize)]
struct EulerOut {
    unit: [i32; 2],
    pass: bool,
    residual: String,
}

#[derive(Serialize)]
struct TraceOut {
    braid: String,
    m: u8,
    functor: String,
    text: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    complex: Option<ComplexDump>,
    #[serde(skip_serializing_if = "Option::is_none")]
    series: Option<Vec<[i64; 5]>>,
}

#[derive(Serialize)]
struct HomflyOut {
    braid: String,
    strands: u32,
    text: String,
    /// Triples `[i, k, c]` for `c·v^i z^k`.
    terms: Vec<[i64; 3]>,
}

#[derive(Serialize)]
struct SuiteOut {
    m: u8,
    suite: String,
    seed: u64,
    status: Status,
    checks: Vec<CheckResult>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            // Usage errors share the exit code of other bad input.
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn parse_braid(s: &str) -> soergel::Result<BraidWord> {
    BraidWord::parse(s)
}

fn check_m(m: u8) -> soergel::Result<()> {
    soergel::scalars::field_for(m).map(|_| ())
}

fn series_rows(p: &PoincareSeries) -> Vec<[i64; 5]> {
    p.terms().iter().map(|t| [t.a as i64, t.t as i64, t.q as i64, t.e as i64, t.c]).collect()
}

fn print_json<T: Serialize>(v: &T) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn run(cli: Cli) -> soergel::Result<u8> {
    let cache = Cache::from_env();
    match cli.command {
        Command::Hhh { braid, m, json, strand } => {
            check_m(m)?;
            let b = parse_braid(&braid)?;
            let full = hhh_of_complex(&cache.braid_complex(&b, m)?)?;
            let series = match strand {
                Some(k) => {
                    let mut s = PoincareSeries::new();
                    for (a, t) in full.strands().into_iter().filter(|x| x.0 == k as i32) {
                        s.add_hilbert(a, t, &full.strand(a, t));
                    }
                    s
                }
                None => full.clone(),
            };
            let experimental = !is_link_invariant(m);
            let euler = if experimental || strand.is_some() {
                None
            } else {
                let r = euler_check(&full, &b)?;
                Some(EulerOut { unit: [r.unit.0, r.unit.1], pass: r.pass(), residual: r.residual.render("a", "q") })
            };
            let out = HhhOut {
                braid: b.to_string(),
                m,
                experimental,
                strand,
                text: series.to_string(),
                series: series_rows(&series),
                euler_check: euler,
            };
            if json {
                print_json(&out);
            } else {
                if experimental {
                    println!("experimental: m = {m} is not type A, the series is not a link invariant");
                }
                println!("{}", out.text);
                if let Some(e) = &out.euler_check {
                    let verdict = if e.pass { "pass" } else { "FAIL" };
                    println!("euler check: {verdict} (unit a^{} q^{}, residual {})", e.unit[0], e.unit[1], e.residual);
                }
            }
            Ok(0)
        }
        Command::Minimal { braid, m, json } => {
            check_m(m)?;
            let b = parse_braid(&braid)?;
            let c = cache.braid_complex(&b, m)?;
            if json {
                println!("{}", c.to_json());
            } else {
                println!("{c}");
            }
            Ok(0)
        }
        Command::Trace { braid, m, functor, json } => {
            check_m(m)?;
            let b = parse_braid(&braid)?;
            let c = cache.braid_complex(&b, m)?;
            let pi = |z: Letter, sign: Sign| trace_complex(&c, z, sign).map(|t| t.minimal_form());
            let traced = match functor {
                Functor::PiSMinus => Some(pi(Letter::S, Sign::Minus)?),
                Functor::PiSPlus => Some(pi(Letter::S, Sign::Plus)?),
                Functor::PiTMinus => Some(pi(Letter::T, Sign::Minus)?),
                Functor::PiTPlus => Some(pi(Letter::T, Sign::Plus)?),
                _ => None,
            };
            let name = functor.to_possible_value().expect("no skipped variants").get_name().to_string();
            let out = match traced {
                Some(t) => {
                    TraceOut { braid: b.to_string(), m, functor: name, text: t.to_string(), complex: Some(t.to_dump()), series: None }
                }
                None => {
                    let k = match functor {
                        Functor::Hh0 => 0,
                        Functor::Hh1 => 1,
                        _ => 2,
                    };
                    let hc = hochschild_complex(&c, k)?;
                    let mut p = PoincareSeries::new();
                    for (i, h) in serre::module_homology_series(&hc) {
                        p.add_hilbert(k as i32, i, &h);
                    }
                    TraceOut { braid: b.to_string(), m, functor: name, text: p.to_string(), complex: None, series: Some(series_rows(&p)) }
                }
            };
            if json {
                print_json(&out);
            } else {
                println!("{}", out.text);
            }
            Ok(0)
        }
        Command::Homfly { braid, json } => {
            let b = parse_braid(&braid)?;
            let h = homfly(&b)?;
            let out = HomflyOut {
                braid: b.to_string(),
                strands: default_strands(&b),
                text: h.render("v", "z"),
                terms: h.terms().iter().map(|(&(i, k), &c)| [i as i64, k as i64, c]).collect(),
            };
            if json {
                print_json(&out);
            } else {
                println!("{}", out.text);
            }
            Ok(0)
        }
        Command::SerreCheck { m, suite, seed, json } => {
            check_m(m)?;
            let checks = run_suite(m, suite, seed)?;
            let status = serre::suite_status(&checks);
            let name = suite.to_possible_value().expect("no skipped variants").get_name().to_string();
            if json {
                print_json(&SuiteOut { m, suite: name, seed, status, checks });
            } else {
                for c in &checks {
                    let tag = match c.status {
                        Status::Pass => "PASS",
                        Status::Fail => "FAIL",
                        Status::Inconclusive => "INCONCLUSIVE",
                    };
                    println!("{tag:<12} {}: {}", c.name, c.detail);
                }
                println!("{} checks, suite {:?}", checks.len(), status);
            }
            Ok(match status {
                Status::Pass => 0,
                Status::Fail => 2,
                Status::Inconclusive => 3,
            })
        }
    }
}

fn run_suite(m: u8, suite: Suite, seed: u64) -> soergel::Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    if matches!(suite, Suite::Vanishing | Suite::Full) {
        out.extend(serre::check_vanishing(m)?);
    }
    if matches!(suite, Suite::Pift | Suite::Full) {
        out.push(serre::check_pift(m)?);
    }
    let samples = serre::sample_complexes(m);
    if matches!(suite, Suite::Relative | Suite::Full) {
        for (name, x) in &samples {
            out.push(serre::check_relative_serre(name, x, seed)?);
        }
    }
    if matches!(suite, Suite::Full) {
        for (xn, x) in &samples {
            for (yn, y) in &samples {
                out.push(serre::check_serre(xn, x, yn, y)?);
            }
        }
    }
    Ok(out)
}
