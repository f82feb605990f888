//! Command-line front end for the hkcone exact-arithmetic toolkit.
//!
//! Every subcommand prints a JSON envelope `{command, params, payload}` with
//! all rationals serialized as `"num/den"` strings; `hk count` prints bare
//! CSV rows unless `--json` is given. Identical invocations produce
//! byte-identical output. Exit codes: 0 success, 1 usage error, 2 search
//! exhausted or system infeasible, 3 internal invariant violation.

use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use hkcone::chow::{beta_map, is_test_class, GradedClass};
use hkcone::cone::{cone_contains, nef_cone_is_pointed, psi_image, psi_stability, quadric_model, ConeMembership};
use hkcone::exactalg::{format_rat, parse_rat, rat_i, sign, BivariateChowClass, Rat};
use hkcone::hkcount::{hk_table, poly_fit_check, MonomialIdeal, SemigroupPreset, DEFAULT_COMPLEMENT_CAP};
use hkcone::planner::{
    assemble_certificate, hk_eval, realize_sign_pattern, ChernFunctional, HKCertificate,
    LowerTermsPolicy, SignPattern,
};
use hkcone::segre::{
    coverage_report, min_ell, test_module_search, verify_test_module_weights, CoverageReport,
    SegreDescriptor, TestModuleOutcome, DEFAULT_ELL_MAX,
};
use hkcone::todd::{hilbert_eval, pushforward_degrees, todd_series, todd_twist, twist_sign_profile};
use hkcone::Error;

const EXIT_USAGE: u8 = 1;
const EXIT_EXHAUSTED: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(
    name = "hkcone",
    version,
    about = "Exact Todd-class, sign-coverage, Hilbert-Kunz, and cone computations"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the Todd series x/(1 - e^-x) to a truncation order.
    Todd {
        /// Truncation order.
        #[arg(long)]
        d: usize,
    },
    /// Print the twisted Todd class of O(q,0) on P^m x P^n.
    Twist {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        /// Twist on the first factor.
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        q: i64,
    },
    /// Print the Hilbert polynomial of the pushforward along a + ell*b.
    Hpoly {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        ell: u64,
        /// Twist on the first factor.
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        q: i64,
        /// Also evaluate at t = 1..nmax.
        #[arg(long, default_value_t = 0)]
        nmax: u32,
    },
    /// Sign profiles of the a^v coefficients across twists q = 0..-m.
    Signs {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
    /// Project a bivariate class (JSON {"s,t": "num/den"} on stdin) to the
    /// graded class group of the Segre ring.
    Beta {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        ell: u64,
    },
    /// Segre-product computations.
    Segre {
        #[command(subcommand)]
        sub: SegreCmd,
    },
    /// Realize a sign pattern as a Hilbert-Kunz certificate, or evaluate one.
    Plan(PlanArgs),
    /// Brute-force Frobenius colength counts.
    Hk {
        #[command(subcommand)]
        sub: HkCmd,
    },
    /// Cone-of-classes computations for the quadric model.
    Cone {
        #[command(subcommand)]
        sub: ConeCmd,
    },
    /// Run every built-in check and print one PASS/FAIL line per check.
    VerifyAll {
        /// Emit the JSON envelope instead of text lines.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum SegreCmd {
    /// MCM verdict and cohomology windows for one twist.
    Check {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        ell: u64,
        #[arg(long, allow_hyphen_values = true)]
        q: i64,
    },
    /// Sign-coverage report over the MCM twists.
    Coverage {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        ell: u64,
    },
    /// Smallest ell whose coverage report is fully covered.
    MinEll {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        /// Largest ell to try.
        #[arg(long, default_value_t = DEFAULT_ELL_MAX)]
        max: u64,
    },
    /// Search for nonnegative weights making the weighted Todd classes a
    /// multiple of the ring class.
    TestModule {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Args)]
struct PlanArgs {
    #[command(subcommand)]
    sub: Option<PlanCmd>,
    /// Ambient dimension.
    #[arg(long)]
    d: Option<usize>,
    /// Sign pattern eps_0,...,eps_d (most significant last).
    #[arg(long, allow_hyphen_values = true)]
    pattern: Option<String>,
    /// Prime for the certificate.
    #[arg(long, default_value_t = 2)]
    p: u64,
    /// Comma-separated correction colengths.
    #[arg(long, default_value = "1")]
    colengths: String,
    /// Seed for randomized lower terms in the corrections (omitted: zeros).
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum PlanCmd {
    /// Evaluate a certificate (JSON on stdin) at q = p^1..p^nmax and check
    /// that interpolation reproduces its coefficients.
    Eval {
        #[arg(long, default_value_t = 6)]
        nmax: u32,
    },
}

#[derive(Subcommand)]
enum HkCmd {
    /// Colengths of Frobenius powers of the maximal ideal: CSV rows
    /// "q,colength" (default) or the JSON envelope with --json.
    Count {
        /// Preset name: quadric, polynomial(k), or segre(m,n,ell).
        #[arg(long)]
        preset: String,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        nmax: u32,
        /// Cap on the enumerated complement size.
        #[arg(long, default_value_t = DEFAULT_COMPLEMENT_CAP)]
        max: usize,
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        /// CSV output (the default; kept for explicitness).
        #[arg(long)]
        csv: bool,
    },
    /// Fit a degree-d polynomial through the first rows of the colength
    /// table and cross-validate it on the rest.
    Fit {
        #[arg(long)]
        preset: String,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        nmax: u32,
        /// Fit degree.
        #[arg(long)]
        d: usize,
    },
}

#[derive(Subcommand)]
enum ConeCmd {
    /// The quadric cone model: generators, ring class, membership verdicts.
    Quadric,
    /// Images of the generators under the degree-ell rescaling, with the
    /// stability verdict.
    Psi {
        #[arg(long)]
        ell: u64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    ExitCode::from(run(cli))
}

/// Exit code for a library error: exhaustion and cap overruns are 2, all
/// other reachable failures are bad requests.
fn error_code(e: &Error) -> u8 {
    match e {
        Error::SearchExhausted(_) | Error::ComplementCapExceeded(_) => EXIT_EXHAUSTED,
        _ => EXIT_USAGE,
    }
}

fn fail(e: &Error) -> u8 {
    eprintln!("error: {e}");
    error_code(e)
}

fn usage(msg: &str) -> u8 {
    eprintln!("error: {msg}");
    EXIT_USAGE
}

/// Prints one line to stdout, exiting quietly if the consumer closed the
/// pipe (e.g. `hkcone … | head`).
fn print_line(line: &str) {
    use std::io::Write;
    if writeln!(std::io::stdout(), "{line}").is_err() {
        std::process::exit(0);
    }
}

fn emit(command: &str, params: Value, payload: Value) {
    let doc = json!({ "command": command, "params": params, "payload": payload });
    print_line(&serde_json::to_string_pretty(&doc).expect("serializable document"));
}

fn rats(values: &[Rat]) -> Value {
    Value::Array(values.iter().map(|r| Value::String(format_rat(r))).collect())
}

fn run(cli: Cli) -> u8 {
    match cli.cmd {
        Cmd::Todd { d } => {
            let f = todd_series(d);
            emit(
                "todd",
                json!({ "d": d }),
                json!({ "order": d, "coefficients": rats(f.coeffs()) }),
            );
            0
        }
        Cmd::Twist { m, n, q } => {
            if m < 1 || n < 1 {
                return usage("need m >= 1 and n >= 1");
            }
            let tw = todd_twist(m, n, q, 0);
            let mut map = Map::new();
            for s in 0..=m {
                for t in 0..=n {
                    let c = tw.coeff(s, t);
                    if sign(c) != 0 {
                        map.insert(format!("{s},{t}"), Value::String(format_rat(c)));
                    }
                }
            }
            emit(
                "twist",
                json!({ "m": m, "n": n, "q": q }),
                json!({ "m": m, "n": n, "coefficients": Value::Object(map) }),
            );
            0
        }
        Cmd::Hpoly { m, n, ell, q, nmax } => {
            if m < 1 || n < 1 || ell < 1 {
                return usage("need m >= 1, n >= 1, ell >= 1");
            }
            let h = pushforward_degrees(&todd_twist(m, n, q, 0), ell);
            let values: Vec<Value> = (1..=i64::from(nmax))
                .map(|t| json!({ "t": t, "value": format_rat(&hilbert_eval(&h, t)) }))
                .collect();
            emit(
                "hpoly",
                json!({ "m": m, "n": n, "ell": ell, "q": q, "nmax": nmax }),
                json!({
                    "degree": h.degree(),
                    "degree_coefficients": rats(h.degree_coeffs()),
                    "values": values,
                }),
            );
            0
        }
        Cmd::Signs { m, n } => {
            let mut profiles = Vec::new();
            for v in 1..=n {
                let profile = match twist_sign_profile(m, n, v) {
                    Ok(p) => p,
                    Err(e) => return fail(&e),
                };
                let entries: Vec<Value> = profile
                    .iter()
                    .map(|e| json!({ "q": e.q, "value": format_rat(&e.value), "sign": e.sign }))
                    .collect();
                profiles.push(json!({ "v": v, "entries": entries }));
            }
            emit(
                "signs",
                json!({ "m": m, "n": n }),
                json!({ "profiles": profiles }),
            );
            0
        }
        Cmd::Beta { m, n, ell } => {
            if m < 1 || n < 1 || ell < 1 {
                return usage("need m >= 1, n >= 1, ell >= 1");
            }
            let mut input = String::new();
            if let Err(e) = std::io::stdin().read_to_string(&mut input) {
                return usage(&format!("cannot read stdin: {e}"));
            }
            let parsed: Value = match serde_json::from_str(&input) {
                Ok(v) => v,
                Err(e) => return usage(&format!("stdin is not JSON: {e}")),
            };
            let map = match coefficient_map(&parsed) {
                Some(m) => m,
                None => return usage("stdin must be a JSON object of \"s,t\": \"num/den\" entries"),
            };
            let mut class = BivariateChowClass::zero(m, n);
            for (key, value) in map {
                let Some((s, t)) = parse_index_pair(key) else {
                    return usage(&format!("bad monomial key {key:?}"));
                };
                if s > m || t > n {
                    return usage(&format!("monomial a^{s} b^{t} outside the ({m},{n}) ring"));
                }
                let Some(text) = value.as_str() else {
                    return usage(&format!("coefficient for {key:?} must be a string"));
                };
                let Some(r) = parse_rat(text) else {
                    return usage(&format!("bad rational {text:?}"));
                };
                class.set_coeff(s, t, r);
            }
            let d = m + n + 1;
            let image = beta_map(&class, ell, d);
            emit(
                "beta",
                json!({ "m": m, "n": n, "ell": ell }),
                json!({
                    "d": d,
                    "components": rats(image.components()),
                    "is_test_class": is_test_class(&image),
                }),
            );
            0
        }
        Cmd::Segre { sub } => run_segre(sub),
        Cmd::Plan(args) => run_plan(args),
        Cmd::Hk { sub } => run_hk(sub),
        Cmd::Cone { sub } => run_cone(sub),
        Cmd::VerifyAll { json } => run_verify_all(json),
    }
}

/// Accepts a bare coefficient map, a `{"coefficients": {...}}` object, or a
/// full envelope whose payload carries the coefficients, so the output of
/// `twist` pipes straight in.
fn coefficient_map(v: &Value) -> Option<&Map<String, Value>> {
    if let Some(payload) = v.get("payload") {
        return coefficient_map(payload);
    }
    if let Some(coeffs) = v.get("coefficients") {
        return coeffs.as_object();
    }
    v.as_object()
}

fn parse_index_pair(key: &str) -> Option<(usize, usize)> {
    let (s, t) = key.split_once(',')?;
    Some((s.trim().parse().ok()?, t.trim().parse().ok()?))
}

fn coverage_json(report: &CoverageReport) -> Value {
    let rows: Vec<Value> = report
        .rows
        .iter()
        .map(|row| {
            let entries: Vec<Value> = row
                .entries
                .iter()
                .map(|e| json!({ "q": e.q, "value": format_rat(&e.value), "sign": e.sign }))
                .collect();
            json!({
                "v": row.v,
                "dimension": row.dimension,
                "entries": entries,
                "has_positive": row.has_positive,
                "has_negative": row.has_negative,
                "top_pair_opposed": row.top_pair_opposed,
                "covered": row.covered,
            })
        })
        .collect();
    json!({
        "m": report.m,
        "n": report.n,
        "ell": report.ell,
        "rows": rows,
        "fully_covered": report.fully_covered,
    })
}

fn run_segre(sub: SegreCmd) -> u8 {
    match sub {
        SegreCmd::Check { m, n, ell, q } => {
            let desc = match SegreDescriptor::new(m, n, ell) {
                Ok(d) => d,
                Err(e) => return fail(&e),
            };
            let module = desc.module_class(q);
            let window = hkcone::segre::mcm_window(&desc);
            emit(
                "segre check",
                json!({ "m": m, "n": n, "ell": ell, "q": q }),
                json!({
                    "dimension": desc.dimension(),
                    "q": q,
                    "mcm": module.mcm,
                    "window": { "min_q": window.min_q, "max_q": window.max_q },
                    "middle_cohomology_vanishes":
                        hkcone::segre::middle_cohomology_vanishes(&desc, q),
                    "todd_components": rats(module.todd.components()),
                }),
            );
            0
        }
        SegreCmd::Coverage { m, n, ell } => {
            let desc = match SegreDescriptor::new(m, n, ell) {
                Ok(d) => d,
                Err(e) => return fail(&e),
            };
            let report = coverage_report(&desc);
            emit(
                "segre coverage",
                json!({ "m": m, "n": n, "ell": ell }),
                coverage_json(&report),
            );
            0
        }
        SegreCmd::MinEll { m, n, max } => match min_ell(m, n, max) {
            Ok((ell, report)) => {
                emit(
                    "segre min-ell",
                    json!({ "m": m, "n": n, "max": max }),
                    json!({ "ell": ell, "report": coverage_json(&report) }),
                );
                0
            }
            Err(e) => fail(&e),
        },
        SegreCmd::TestModule { m, n } => {
            if !(1 <= n && n <= m) {
                return usage("need 1 <= n <= m");
            }
            match test_module_search(m, n) {
                TestModuleOutcome::Feasible(cert) => {
                    let weights: Vec<Value> = cert
                        .weights
                        .iter()
                        .map(|w| Value::String(w.to_string()))
                        .collect();
                    let verified = verify_test_module_weights(m, n, &cert.weights);
                    emit(
                        "segre test-module",
                        json!({ "m": m, "n": n }),
                        json!({
                            "outcome": "feasible",
                            "weights": weights,
                            "contains_ring": cert.contains_ring,
                            "verified": verified,
                        }),
                    );
                    if verified {
                        0
                    } else {
                        eprintln!("error: weight certificate failed series re-verification");
                        EXIT_INTERNAL
                    }
                }
                TestModuleOutcome::Infeasible(witness) => {
                    emit(
                        "segre test-module",
                        json!({ "m": m, "n": n }),
                        json!({
                            "outcome": "infeasible",
                            "witness": {
                                "functional": rats(&witness.functional),
                                "values": rats(&witness.values),
                            },
                        }),
                    );
                    EXIT_EXHAUSTED
                }
            }
        }
    }
}

fn parse_pattern(text: &str) -> Result<SignPattern, Error> {
    let eps: Result<Vec<i8>, _> = text.split(',').map(|p| p.trim().parse::<i8>()).collect();
    match eps {
        Ok(eps) => SignPattern::new(eps),
        Err(_) => Err(Error::InvalidPattern(format!(
            "cannot parse {text:?} as comma-separated signs"
        ))),
    }
}

fn parse_colengths(text: &str) -> Option<Vec<u64>> {
    text.split(',').map(|p| p.trim().parse::<u64>().ok()).collect()
}

fn run_plan(args: PlanArgs) -> u8 {
    if let Some(PlanCmd::Eval { nmax }) = args.sub {
        return run_plan_eval(nmax);
    }
    let (Some(d), Some(pattern_text)) = (args.d, args.pattern.as_deref()) else {
        return usage("plan requires --d and --pattern (or the `eval` subcommand)");
    };
    let pattern = match parse_pattern(pattern_text) {
        Ok(p) => p,
        Err(e) => return fail(&e),
    };
    if pattern.d() != d {
        return usage(&format!(
            "pattern has {} entries but d={d} needs {}",
            pattern.d() + 1,
            d + 1
        ));
    }
    let Some(colengths) = parse_colengths(&args.colengths) else {
        return usage("bad --colengths: expected comma-separated nonnegative integers");
    };
    let desc = match SegreDescriptor::from_dimension(d, 1) {
        Ok(desc) => desc,
        Err(e) => return fail(&e),
    };
    let seed_class = hkcone::segre::nq_todd(&desc, 0);
    let lambda = ChernFunctional::all_ones(d);
    let policy = match args.seed {
        Some(s) => LowerTermsPolicy::SeededRandom(s),
        None => LowerTermsPolicy::Zero,
    };
    let trace = match realize_sign_pattern(&pattern, &lambda, &seed_class, &GradedClass::from_top(d, rat_i(1)), &policy) {
        Ok(t) => t,
        Err(e) => return fail(&e),
    };
    let cert = match assemble_certificate(&trace, &colengths, args.p) {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    let cert_json = serde_json::to_value(&cert).expect("certificate serializes");
    let evaluations: Vec<Value> = (1..=(d as u32 + 1))
        .map(|n| json!({ "n": n, "value": format_rat(&hk_eval(&cert, n)) }))
        .collect();
    emit(
        "plan",
        json!({
            "d": d,
            "pattern": pattern.eps(),
            "p": args.p,
            "colengths": colengths,
            "seed": args.seed,
        }),
        json!({ "certificate": cert_json, "evaluations": evaluations }),
    );
    0
}

/// Reads a certificate from stdin, evaluates it at q = p^1..p^nmax, and
/// re-derives its coefficients by interpolation: the round-trip must
/// reproduce the certificate exactly.
fn run_plan_eval(nmax: u32) -> u8 {
    let mut input = String::new();
    if let Err(e) = std::io::stdin().read_to_string(&mut input) {
        return usage(&format!("cannot read stdin: {e}"));
    }
    let parsed: Value = match serde_json::from_str(&input) {
        Ok(v) => v,
        Err(e) => return usage(&format!("stdin is not JSON: {e}")),
    };
    let cert_value = parsed
        .get("payload")
        .and_then(|p| p.get("certificate"))
        .or_else(|| parsed.get("certificate"))
        .unwrap_or(&parsed);
    let cert: HKCertificate = match serde_json::from_value(cert_value.clone()) {
        Ok(c) => c,
        Err(e) => return usage(&format!("stdin is not a certificate: {e}")),
    };
    let d = cert.dimension;
    if (nmax as usize) < d + 1 {
        return usage(&format!("--nmax must be at least d+1 = {}", d + 1));
    }
    let values: Vec<Rat> = (1..=nmax).map(|n| hk_eval(&cert, n)).collect();
    let points: Vec<(Rat, Rat)> = (1..=nmax)
        .map(|n| {
            (
                hkcone::exactalg::int_pow(cert.prime, n),
                values[(n - 1) as usize].clone(),
            )
        })
        .take(d + 1)
        .collect();
    let coeffs = hkcone::exactalg::lagrange_interpolate(&points);
    let mut consistent = coeffs.len() == d + 1 && coeffs[d] == cert.alpha_rat();
    if consistent {
        for (i, coeff) in coeffs.iter().enumerate().take(d) {
            let expected = cert.beta_rat(i) * rat_i(i64::from(cert.pattern[i]));
            if coeff != &expected {
                consistent = false;
                break;
            }
        }
    }
    let evaluations: Vec<Value> = values
        .iter()
        .zip(1..=nmax)
        .map(|(v, n)| json!({ "n": n, "value": format_rat(v) }))
        .collect();
    emit(
        "plan eval",
        json!({ "nmax": nmax }),
        json!({
            "dimension": d,
            "prime": cert.prime,
            "pattern": cert.pattern,
            "evaluations": evaluations,
            "interpolation_consistent": consistent,
        }),
    );
    if consistent {
        0
    } else {
        eprintln!("error: certificate coefficients are not reproduced by interpolation");
        EXIT_INTERNAL
    }
}

fn run_hk(sub: HkCmd) -> u8 {
    match sub {
        HkCmd::Count { preset, p, nmax, max, json: as_json, csv: _ } => {
            let Some(preset_val) = SemigroupPreset::from_name(&preset) else {
                return usage(&format!("unknown preset {preset:?}"));
            };
            if !hkcone::exactalg::is_prime(p) {
                return usage(&format!("{p} is not prime"));
            }
            let ideal = MonomialIdeal::maximal(&preset_val);
            let mut rows = Vec::new();
            for n in 0..=nmax {
                let q = match p.checked_pow(n) {
                    Some(q) => q,
                    None => return usage("p^nmax overflows"),
                };
                match hkcone::hkcount::frobenius_colength_capped(&preset_val, &ideal, q, max) {
                    Ok(c) => rows.push((q, c)),
                    Err(e) => return fail(&e),
                }
            }
            if as_json {
                let json_rows: Vec<Value> = rows
                    .iter()
                    .map(|(q, c)| json!({ "q": q, "colength": c }))
                    .collect();
                emit(
                    "hk count",
                    json!({ "preset": preset_val.name(), "p": p, "nmax": nmax, "max": max }),
                    json!({ "rows": json_rows }),
                );
            } else {
                for (q, c) in &rows {
                    print_line(&format!("{q},{c}"));
                }
            }
            0
        }
        HkCmd::Fit { preset, p, nmax, d } => {
            let Some(preset_val) = SemigroupPreset::from_name(&preset) else {
                return usage(&format!("unknown preset {preset:?}"));
            };
            let ideal = MonomialIdeal::maximal(&preset_val);
            let table = match hk_table(&preset_val, &ideal, p, nmax) {
                Ok(t) => t,
                Err(e) => return fail(&e),
            };
            let fit = match poly_fit_check(&table, d) {
                Ok(f) => f,
                Err(e) => return fail(&e),
            };
            let rows: Vec<Value> = table
                .iter()
                .map(|(q, c)| json!({ "q": q, "colength": c }))
                .collect();
            emit(
                "hk fit",
                json!({ "preset": preset_val.name(), "p": p, "nmax": nmax, "d": d }),
                json!({
                    "rows": rows,
                    "coefficients": rats(&fit.coefficients),
                    "verified": fit.verified,
                }),
            );
            0
        }
    }
}

fn run_cone(sub: ConeCmd) -> u8 {
    let model = quadric_model();
    match sub {
        ConeCmd::Quadric => {
            let generators: Vec<Value> = model
                .cone
                .generators()
                .iter()
                .zip(model.cone.labels())
                .map(|(g, label)| json!({ "label": label, "coords": rats(&g.coords) }))
                .collect();
            let ring_verdict = match cone_contains(&model.cone, &model.ring, true) {
                Ok(ConeMembership::Inside { weights }) => {
                    json!({ "verdict": "interior", "weights": rats(&weights) })
                }
                Ok(ConeMembership::Outside { separating_functional }) => {
                    json!({ "verdict": "outside", "separating_functional": rats(&separating_functional) })
                }
                Err(e) => return fail(&e),
            };
            emit(
                "cone quadric",
                json!({}),
                json!({
                    "coordinate_dims": model.cone.coordinate_dims(),
                    "generators": generators,
                    "ring": rats(&model.ring.coords),
                    "ring_membership": ring_verdict,
                    "nef_cone_pointed": nef_cone_is_pointed(&model.cone),
                }),
            );
            0
        }
        ConeCmd::Psi { ell } => {
            if ell < 1 {
                return usage("need ell >= 1");
            }
            let images: Vec<Value> = model
                .cone
                .generators()
                .iter()
                .zip(model.cone.labels())
                .map(|(g, label)| {
                    json!({
                        "label": label,
                        "coords": rats(&psi_image(&model.cone, g, ell).coords),
                    })
                })
                .collect();
            emit(
                "cone psi",
                json!({ "ell": ell }),
                json!({ "images": images, "stable": psi_stability(&model.cone, ell) }),
            );
            0
        }
    }
}

fn run_verify_all(as_json: bool) -> u8 {
    let checks = hkcone::verify::run_all();
    let all_passed = checks.iter().all(|c| c.passed);
    if as_json {
        let rows: Vec<Value> = checks
            .iter()
            .map(|c| {
                json!({
                    "id": c.id,
                    "description": c.description,
                    "passed": c.passed,
                    "detail": c.detail,
                    "millis": c.millis,
                    "budget_millis": c.budget_millis,
                })
            })
            .collect();
        emit(
            "verify-all",
            json!({}),
            json!({ "checks": rows, "all_passed": all_passed }),
        );
    } else {
        for c in &checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            let budget = match c.budget_millis {
                Some(b) => format!(" [budget {b} ms]"),
                None => String::new(),
            };
            print_line(&format!("{status} {} ({} ms){budget}: {}", c.id, c.millis, c.detail));
        }
        let summary = if all_passed { "all checks passed" } else { "CHECK FAILURES" };
        print_line(&format!("{summary} ({}/{})", checks.iter().filter(|c| c.passed).count(), checks.len()));
    }
    if all_passed {
        0
    } else {
        EXIT_INTERNAL
    }
}
