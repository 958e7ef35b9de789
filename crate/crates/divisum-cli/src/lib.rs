//! Command-line front end: evaluate named quantities, verify identities,
//! sweep parameter grids, and list the catalog.
//!
//! Exit codes: 0 pass/ok, 1 verification fail, 2 usage error, 3 domain
//! error, 4 saturation.

use divisum::identities::{
    self, parse_char_name, IdentityReport, ParamMap, ParamValue, Status,
};
use divisum::mellin::{self, LogThetaQuotient, MellinIntegrand, SinhSqSeries};
use divisum::seriescore::{CoeffSeq, DenomSign, TruncationPolicy};
use divisum::specialfn::{self, ThetaArg};
use divisum::{Error, OutputFormat, Precision, RunConfig};
use std::collections::BTreeMap;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_SATURATED: i32 = 4;

const USAGE: &str = "usage: divisum <command> [args] [flags]

commands:
  eval <name> key=value ...     evaluate a named quantity
  verify <ID> key=value ...     verify one identity at one point
  sweep <ID> key=v1,v2 ...      verify over a parameter grid
                                (ranges: key=lo:hi:step)
  list                          list the identity catalog

eval names:
  theta2 theta3 theta4 eta_product rrcf zeta hurwitz_zeta periodic_L
  lambert_sum gcd_sum mellin log_theta_quotient_d2

flags:
  --tol <t>          pass/fail tolerance (default 1e-8, or the catalog default)
  --max-terms <n>    series term budget (default 1000000)
  --precision <p>    standard | high (env DIVISUM_PRECISION)
  --output <fmt>     text | json | csv (default text)
  --seed <n>         seed for randomized suites
";

struct Cli {
    config: RunConfig,
    tol_set: bool,
}

fn parse_flags(args: &[String]) -> Result<(Cli, Vec<String>), String> {
    let mut config = RunConfig::default();
    let mut tol_set = false;
    if let Ok(p) = std::env::var("DIVISUM_PRECISION") {
        match p.as_str() {
            "high" => config.precision = Precision::High,
            "standard" | "" => {}
            other => return Err(format!("DIVISUM_PRECISION must be standard|high, got {other}")),
        }
    }
    let mut rest = Vec::new();
    let mut it = args.iter().peekable();
    while let Some(arg) = it.next() {
        match arg.as_str() {
            "--tol" => {
                let v = it.next().ok_or("--tol needs a value")?;
                config.tol = v.parse().map_err(|_| format!("bad --tol value: {v}"))?;
                if !(config.tol > 0.0) {
                    return Err("--tol must be positive".into());
                }
                tol_set = true;
            }
            "--max-terms" => {
                let v = it.next().ok_or("--max-terms needs a value")?;
                config.max_terms = v.parse().map_err(|_| format!("bad --max-terms value: {v}"))?;
                if config.max_terms == 0 {
                    return Err("--max-terms must be at least 1".into());
                }
            }
            "--precision" => {
                let v = it.next().ok_or("--precision needs a value")?;
                config.precision = match v.as_str() {
                    "standard" => Precision::Standard,
                    "high" => Precision::High,
                    other => return Err(format!("--precision must be standard|high, got {other}")),
                };
            }
            "--output" => {
                let v = it.next().ok_or("--output needs a value")?;
                config.output = match v.as_str() {
                    "json" => OutputFormat::Json,
                    "csv" => OutputFormat::Csv,
                    "text" => OutputFormat::Text,
                    other => return Err(format!("--output must be json|csv|text, got {other}")),
                };
            }
            "--seed" => {
                let v = it.next().ok_or("--seed needs a value")?;
                config.seed = v.parse().map_err(|_| format!("bad --seed value: {v}"))?;
            }
            other if other.starts_with("--") => return Err(format!("unknown flag: {other}")),
            _ => rest.push(arg.clone()),
        }
    }
    Ok((Cli { config, tol_set }, rest))
}

fn parse_param_value(s: &str) -> ParamValue {
    if let Some(rest) = s.strip_prefix("poly:") {
        let coeffs: Vec<f64> =
            rest.split(',').filter_map(|c| c.trim().parse::<f64>().ok()).collect();
        return ParamValue::Poly(coeffs);
    }
    if !s.contains(['.', 'e', 'E']) {
        if let Ok(i) = s.parse::<i64>() {
            return ParamValue::Int(i);
        }
    }
    if let Ok(x) = s.parse::<f64>() {
        return ParamValue::Real(x);
    }
    ParamValue::Name(s.to_string())
}

fn split_kv(token: &str) -> Result<(String, String), String> {
    match token.split_once('=') {
        Some((k, v)) if !k.is_empty() && !v.is_empty() => Ok((k.to_string(), v.to_string())),
        _ => Err(format!("expected key=value, got {token}")),
    }
}

fn error_exit(err: &Error) -> i32 {
    eprintln!("error: {err}");
    EXIT_DOMAIN
}

pub fn run(args: Vec<String>) -> i32 {
    let (cli, rest) = match parse_flags(&args) {
        Ok(x) => x,
        Err(msg) => {
            eprintln!("error: {msg}");
            eprint!("{USAGE}");
            return EXIT_USAGE;
        }
    };
    let mut it = rest.into_iter();
    let cmd = match it.next() {
        Some(c) => c,
        None => {
            eprint!("{USAGE}");
            return EXIT_USAGE;
        }
    };
    let tail: Vec<String> = it.collect();
    match cmd.as_str() {
        "help" | "--help" => {
            print!("{USAGE}");
            EXIT_OK
        }
        "eval" => cmd_eval(&cli, &tail),
        "verify" => cmd_verify(&cli, &tail),
        "sweep" => cmd_sweep(&cli, &tail),
        "list" => cmd_list(&cli),
        other => {
            eprintln!("error: unknown command: {other}");
            eprint!("{USAGE}");
            EXIT_USAGE
        }
    }
}

// ---------------------------------------------------------------- eval --

struct EvalOutput {
    name: String,
    params: BTreeMap<String, String>,
    value: f64,
    error_bound: f64,
    series_terms: u64,
    quadrature_evals: u64,
    saturated: bool,
}

fn parse_theta_arg(s: &str) -> Result<ThetaArg, Error> {
    let t = s.trim();
    if let Some(rest) = t.strip_prefix('i') {
        let v: f64 = if rest.is_empty() {
            1.0
        } else {
            rest.parse().map_err(|_| Error::Domain(format!("bad theta argument: {s}")))?
        };
        Ok(ThetaArg::imaginary(v))
    } else if let Some(rest) = t.strip_suffix('i') {
        let v: f64 =
            rest.parse().map_err(|_| Error::Domain(format!("bad theta argument: {s}")))?;
        Ok(ThetaArg::imaginary(v))
    } else {
        let v: f64 = t.parse().map_err(|_| Error::Domain(format!("bad theta argument: {s}")))?;
        Ok(ThetaArg::real(v))
    }
}

fn kv_map(tail: &[String]) -> Result<BTreeMap<String, String>, String> {
    let mut map = BTreeMap::new();
    for token in tail {
        let (k, v) = split_kv(token)?;
        map.insert(k, v);
    }
    Ok(map)
}

fn need<'m>(map: &'m BTreeMap<String, String>, key: &str) -> Result<&'m str, Error> {
    map.get(key)
        .map(|s| s.as_str())
        .ok_or_else(|| Error::Domain(format!("missing required argument {key}=")))
}

fn need_f64(map: &BTreeMap<String, String>, key: &str) -> Result<f64, Error> {
    need(map, key)?
        .parse()
        .map_err(|_| Error::Domain(format!("argument {key} must be a number")))
}

fn need_u64(map: &BTreeMap<String, String>, key: &str) -> Result<u64, Error> {
    need(map, key)?
        .parse()
        .map_err(|_| Error::Domain(format!("argument {key} must be a positive integer")))
}

fn named_coeff_seq(name: &str) -> Result<CoeffSeq, Error> {
    let tables = identities::tables();
    match name {
        "mu" => Ok(CoeffSeq::mu(tables)),
        "phi" => Ok(CoeffSeq::phi(tables)),
        "one" => Ok(CoeffSeq::one()),
        "identity" => Ok(CoeffSeq::identity()),
        "delta" => Ok(CoeffSeq::delta()),
        other => Err(Error::Domain(format!("unknown coefficient sequence: {other}"))),
    }
}

fn eval_quantity(
    cli: &Cli,
    name: &str,
    map: &BTreeMap<String, String>,
) -> Result<EvalOutput, Error> {
    let config = &cli.config;
    let tol = if cli.tol_set { config.tol } else { 1e-12 };
    let policy = TruncationPolicy::new(tol, config.term_budget());
    let mut out = EvalOutput {
        name: name.to_string(),
        params: map.clone(),
        value: f64::NAN,
        error_bound: 0.0,
        series_terms: 0,
        quadrature_evals: 0,
        saturated: false,
    };
    match name {
        "theta2" | "theta3" | "eta_product" => {
            let q = need_f64(map, "q")?;
            let r = match name {
                "theta2" => specialfn::theta2(q, &policy)?,
                "theta3" => specialfn::theta3(q, &policy)?,
                _ => specialfn::eta_product(q, &policy)?,
            };
            out.value = r.value;
            out.error_bound = r.tail_bound;
            out.series_terms = r.terms as u64;
            out.saturated = r.saturated;
        }
        "theta4" => {
            let q = need_f64(map, "q")?;
            let z = parse_theta_arg(need(map, "z")?)?;
            let r = specialfn::theta4(z, q, &policy)?;
            out.value = r.value;
            out.error_bound = r.tail_bound;
            out.series_terms = r.terms as u64;
            out.saturated = r.saturated;
        }
        "rrcf" => {
            let q = need_f64(map, "q")?;
            let depth: u32 = need_u64(map, "depth").unwrap_or(64) as u32;
            let v = specialfn::rrcf(q, depth)?;
            let deeper = specialfn::rrcf(q, depth * 2)?;
            out.value = v;
            out.error_bound = (v - deeper).abs();
            out.series_terms = depth as u64;
        }
        "zeta" => {
            let s = need_f64(map, "s")?;
            out.value = specialfn::zeta(s)?;
            out.error_bound = (2e-16 * out.value.abs()).max(1e-15);
            out.series_terms = 44;
        }
        "hurwitz_zeta" => {
            let s = need_f64(map, "s")?;
            let a = need_f64(map, "a")?;
            out.value = specialfn::hurwitz_zeta(s, a)?;
            out.error_bound = (5e-15 * out.value.abs()).max(1e-15);
            out.series_terms = 18 + s.abs() as u64;
        }
        "periodic_L" => {
            let x = parse_char_name(need(map, "X")?)?;
            let s = need_f64(map, "s")?;
            out.value = specialfn::periodic_l(&x, s)?;
            out.error_bound = (5e-15 * out.value.abs()).max(1e-15);
            out.series_terms = x.period();
        }
        "lambert_sum" => {
            let c = named_coeff_seq(need(map, "c")?)?;
            let denom = match need(map, "denom")? {
                "minus" | "-" => DenomSign::Minus,
                "plus" | "+" => DenomSign::Plus,
                other => {
                    return Err(Error::Domain(format!("denom must be plus|minus, got {other}")))
                }
            };
            let x = need_f64(map, "x")?;
            let r = divisum::seriescore::lambert_sum(&c, denom, x, &policy)?;
            out.value = r.value;
            out.error_bound = r.tail_bound;
            out.series_terms = r.terms as u64;
            out.saturated = r.saturated;
        }
        "gcd_sum" => {
            let n = need_u64(map, "n")?;
            if n == 0 {
                return Err(Error::Domain("n must be at least 1".into()));
            }
            let fname = need(map, "f")?;
            let tables = identities::tables();
            let f: Box<dyn Fn(u64) -> f64> = match fname {
                "identity" => Box::new(|m: u64| m as f64),
                "one" => Box::new(|_| 1.0),
                "sq" => Box::new(|m: u64| (m * m) as f64),
                other => {
                    if let Some(s) = other.strip_prefix("pow:") {
                        let e: f64 = s
                            .parse()
                            .map_err(|_| Error::Domain(format!("bad exponent in {other}")))?;
                        Box::new(move |m: u64| (m as f64).powf(-e))
                    } else {
                        return Err(Error::Domain(format!(
                            "f must be identity|one|sq|pow:<s>, got {other}"
                        )));
                    }
                }
            };
            out.value = tables.gcd_sum(|m| f(m), n);
            out.series_terms = n;
        }
        "mellin" => {
            let s = need_f64(map, "s")?;
            let fname = need(map, "f")?;
            let integrand: MellinIntegrand = match fname {
                "exp" => MellinIntegrand::exponential(),
                "gauss" => MellinIntegrand::gaussian(),
                other => {
                    if let Some(rest) = other.strip_prefix("sinhsq:") {
                        let char = parse_char_name(rest)?;
                        SinhSqSeries::build(char, tol * 1e-2)?.into_integrand()
                    } else if let Some(rest) = other.strip_prefix("logtheta:") {
                        let parts: Vec<u64> = rest
                            .split(',')
                            .filter_map(|x| x.trim().parse().ok())
                            .collect();
                        if parts.len() != 3 {
                            return Err(Error::Domain(format!(
                                "expected logtheta:p,a,b, got {other}"
                            )));
                        }
                        LogThetaQuotient::build(parts[0], parts[1], parts[2])?.into_integrand()
                    } else {
                        return Err(Error::Domain(format!(
                            "f must be exp|gauss|sinhsq:<X>|logtheta:p,a,b, got {other}"
                        )));
                    }
                }
            };
            let quad_tol = if cli.tol_set { config.tol } else { 1e-8 };
            let r = mellin::mellin_transform(&integrand, s, quad_tol, 400_000)?;
            out.value = r.value;
            out.error_bound = r.err_bound;
            out.quadrature_evals = r.evals as u64;
            out.saturated = r.saturated;
        }
        "log_theta_quotient_d2" => {
            let p = need_u64(map, "p")?;
            let a = need_u64(map, "a")?;
            let b = need_u64(map, "b")?;
            let x = need_f64(map, "x")?;
            out.value = specialfn::log_theta_quotient_d2(p, a, b, x)?;
            out.error_bound = (1e-12 * out.value.abs()).max(1e-14);
        }
        other => return Err(Error::Domain(format!("unknown eval name: {other}"))),
    }
    Ok(out)
}

fn print_eval(config: &RunConfig, out: &EvalOutput) {
    match config.output {
        OutputFormat::Json => {
            let params: serde_json::Map<String, serde_json::Value> = out
                .params
                .iter()
                .map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone())))
                .collect();
            let obj = serde_json::json!({
                "name": out.name,
                "params": params,
                "value": out.value,
                "error_bound": out.error_bound,
                "depths": {
                    "series": out.series_terms,
                    "product": 0,
                    "quadrature": out.quadrature_evals,
                },
                "saturated": out.saturated,
            });
            println!("{obj}");
        }
        OutputFormat::Csv => {
            let params: Vec<String> =
                out.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            println!("name,params,value,error_bound,series,quadrature,saturated");
            println!(
                "{},{},{},{},{},{},{}",
                out.name,
                params.join(";"),
                out.value,
                out.error_bound,
                out.series_terms,
                out.quadrature_evals,
                out.saturated
            );
        }
        OutputFormat::Text => {
            println!("{} = {:.15e}", out.name, out.value);
            println!("  certified error bound: {:.3e}", out.error_bound);
            println!(
                "  depths: series={} quadrature={}{}",
                out.series_terms,
                out.quadrature_evals,
                if out.saturated { "  [SATURATED]" } else { "" }
            );
        }
    }
}

fn cmd_eval(cli: &Cli, tail: &[String]) -> i32 {
    let mut it = tail.iter();
    let name = match it.next() {
        Some(n) => n.clone(),
        None => {
            eprintln!("error: eval needs a quantity name");
            return EXIT_USAGE;
        }
    };
    const NAMES: &[&str] = &[
        "theta2",
        "theta3",
        "theta4",
        "eta_product",
        "rrcf",
        "zeta",
        "hurwitz_zeta",
        "periodic_L",
        "lambert_sum",
        "gcd_sum",
        "mellin",
        "log_theta_quotient_d2",
    ];
    if !NAMES.contains(&name.as_str()) {
        eprintln!("error: unknown eval name: {name}");
        return EXIT_USAGE;
    }
    let rest: Vec<String> = it.cloned().collect();
    let map = match kv_map(&rest) {
        Ok(m) => m,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_USAGE;
        }
    };
    match eval_quantity(cli, &name, &map) {
        Ok(out) => {
            print_eval(&cli.config, &out);
            if out.saturated {
                EXIT_SATURATED
            } else {
                EXIT_OK
            }
        }
        Err(err) => error_exit(&err),
    }
}

// -------------------------------------------------------------- verify --

fn report_csv_header() -> &'static str {
    "id,params,lhs,rhs,abs_err,rel_err,tol,depth_series,depth_product,depth_quadrature,status,notes"
}

fn report_csv_row(r: &IdentityReport) -> String {
    let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    let status = match r.status {
        Status::Pass => "pass",
        Status::Fail => "fail",
        Status::Saturated => "saturated",
    };
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{}",
        r.id,
        params.join(";"),
        r.lhs,
        r.rhs,
        r.abs_err,
        r.rel_err,
        r.tol,
        r.depths.series,
        r.depths.product,
        r.depths.quadrature,
        status,
        r.notes.join("; ").replace(',', ";")
    )
}

fn print_report_text(r: &IdentityReport) {
    let status = match r.status {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::Saturated => "SATURATED",
    };
    let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    println!("{}  [{}]", r.id, status);
    println!("  params: {}", params.join(" "));
    println!("  lhs = {:.15e}", r.lhs);
    println!("  rhs = {:.15e}", r.rhs);
    println!(
        "  abs_err = {:.3e}  rel_err = {:.3e}  tol = {:.3e}",
        r.abs_err, r.rel_err, r.tol
    );
    println!(
        "  depths: series={} product={} quadrature={}",
        r.depths.series, r.depths.product, r.depths.quadrature
    );
    for note in &r.notes {
        println!("  note: {note}");
    }
}

fn report_exit(status: Status) -> i32 {
    match status {
        Status::Pass => EXIT_OK,
        Status::Fail => EXIT_FAIL,
        Status::Saturated => EXIT_SATURATED,
    }
}

fn cmd_verify(cli: &Cli, tail: &[String]) -> i32 {
    let mut it = tail.iter();
    let id = match it.next() {
        Some(n) => n.clone(),
        None => {
            eprintln!("error: verify needs an identity id (see `divisum list`)");
            return EXIT_USAGE;
        }
    };
    let spec = match identities::find_spec(&id) {
        Some(s) => s,
        None => {
            eprintln!("error: unknown identity id: {id}");
            return EXIT_USAGE;
        }
    };
    let mut params = ParamMap::new();
    for token in it {
        match split_kv(token) {
            Ok((k, v)) => {
                params.insert(k, parse_param_value(&v));
            }
            Err(msg) => {
                eprintln!("error: {msg}");
                return EXIT_USAGE;
            }
        }
    }
    let tol = if cli.tol_set { cli.config.tol } else { spec.default_tol };
    match identities::verify(&id, &params, tol, &cli.config) {
        Ok(report) => {
            match cli.config.output {
                OutputFormat::Json => println!("{}", serde_json::to_string(&report).unwrap()),
                OutputFormat::Csv => {
                    println!("{}", report_csv_header());
                    println!("{}", report_csv_row(&report));
                }
                OutputFormat::Text => print_report_text(&report),
            }
            report_exit(report.status)
        }
        Err(err) => error_exit(&err),
    }
}

// --------------------------------------------------------------- sweep --

fn parse_grid_values(raw: &str) -> Vec<ParamValue> {
    // names with internal structure are single values, not lists
    if raw.starts_with("poly:") || raw.starts_with("x2:") || raw.parse::<f64>().is_err() {
        let range: Vec<&str> = raw.split(':').collect();
        if range.len() == 3 {
            if let (Ok(lo), Ok(hi), Ok(step)) = (
                range[0].parse::<f64>(),
                range[1].parse::<f64>(),
                range[2].parse::<f64>(),
            ) {
                if step > 0.0 && hi >= lo {
                    let mut vals = Vec::new();
                    let mut x = lo;
                    while x <= hi + 1e-12 {
                        vals.push(ParamValue::Real(x));
                        x += step;
                    }
                    return vals;
                }
            }
        }
        if raw.contains(',') && !raw.starts_with("poly:") && !raw.starts_with("x2:") {
            return raw.split(',').map(parse_param_value).collect();
        }
        return vec![parse_param_value(raw)];
    }
    raw.split(',').map(parse_param_value).collect()
}

fn cmd_sweep(cli: &Cli, tail: &[String]) -> i32 {
    let mut it = tail.iter();
    let id = match it.next() {
        Some(n) => n.clone(),
        None => {
            eprintln!("error: sweep needs an identity id");
            return EXIT_USAGE;
        }
    };
    let spec = match identities::find_spec(&id) {
        Some(s) => s,
        None => {
            eprintln!("error: unknown identity id: {id}");
            return EXIT_USAGE;
        }
    };
    let mut grid: Vec<(String, Vec<ParamValue>)> = Vec::new();
    for token in it {
        // `key=` declares an empty axis: zero grid points, zero rows
        if let Some(key) = token.strip_suffix('=') {
            if !key.is_empty() && !key.contains('=') {
                grid.push((key.to_string(), Vec::new()));
                continue;
            }
        }
        match split_kv(token) {
            Ok((k, v)) => grid.push((k, parse_grid_values(&v))),
            Err(msg) => {
                eprintln!("error: {msg}");
                return EXIT_USAGE;
            }
        }
    }
    let tol = if cli.tol_set { cli.config.tol } else { spec.default_tol };
    let reports = identities::sweep(&id, &grid, tol, &cli.config);
    let passed = reports.iter().filter(|r| r.status == Status::Pass).count();
    let saturated = reports.iter().filter(|r| r.status == Status::Saturated).count();
    match cli.config.output {
        OutputFormat::Json => {
            println!("{}", serde_json::to_string(&reports).unwrap());
        }
        OutputFormat::Csv => {
            println!("{}", report_csv_header());
            for r in &reports {
                println!("{}", report_csv_row(r));
            }
        }
        OutputFormat::Text => {
            for r in &reports {
                let params: Vec<String> =
                    r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                let status = match r.status {
                    Status::Pass => "pass",
                    Status::Fail => "FAIL",
                    Status::Saturated => "SATURATED",
                };
                println!(
                    "{:<12} {:<9} lhs={:<22.15e} rhs={:<22.15e} rel_err={:.3e}  {}",
                    r.id,
                    status,
                    r.lhs,
                    r.rhs,
                    r.rel_err,
                    params.join(" ")
                );
            }
            println!("passed {passed}/{} (saturated {saturated})", reports.len());
        }
    }
    if reports.iter().any(|r| r.status == Status::Fail) {
        EXIT_FAIL
    } else if saturated > 0 {
        EXIT_SATURATED
    } else {
        EXIT_OK
    }
}

// ---------------------------------------------------------------- list --

fn cmd_list(cli: &Cli) -> i32 {
    let cat = identities::catalog();
    match cli.config.output {
        OutputFormat::Json => {
            let arr: Vec<serde_json::Value> = cat
                .iter()
                .map(|s| {
                    let params: Vec<serde_json::Value> = s
                        .params
                        .iter()
                        .map(|p| {
                            serde_json::json!({
                                "name": p.name,
                                "domain": p.domain,
                                "default": p.default.to_string(),
                            })
                        })
                        .collect();
                    serde_json::json!({
                        "id": s.id,
                        "params": params,
                        "paper_ref": s.paper_ref,
                        "default_tol": s.default_tol,
                        "tol_kind": match s.tol_kind {
                            identities::TolKind::Abs => "abs",
                            identities::TolKind::Rel => "rel",
                        },
                    })
                })
                .collect();
            println!("{}", serde_json::Value::Array(arr));
        }
        OutputFormat::Csv => {
            println!("id,default_tol,tol_kind,params,paper_ref");
            for s in &cat {
                let params: Vec<String> =
                    s.params.iter().map(|p| format!("{}={}", p.name, p.default)).collect();
                let kind = match s.tol_kind {
                    identities::TolKind::Abs => "abs",
                    identities::TolKind::Rel => "rel",
                };
                println!(
                    "{},{},{},{},{}",
                    s.id,
                    s.default_tol,
                    kind,
                    params.join(";"),
                    s.paper_ref.replace(',', ";")
                );
            }
        }
        OutputFormat::Text => {
            for s in &cat {
                let params: Vec<String> =
                    s.params.iter().map(|p| format!("{}={}", p.name, p.default)).collect();
                println!(
                    "{:<14} tol={:<8} params: {:<40} ref: {}",
                    s.id,
                    format!("{:.0e}", s.default_tol),
                    params.join(" "),
                    s.paper_ref
                );
            }
        }
    }
    EXIT_OK
}
