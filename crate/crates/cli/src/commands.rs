use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};

use mahlercf::approx::{eval_mahler, real_cf_prefix, ApproxError, Which};
use mahlercf::arith::{rational_to_string, Rational};
use mahlercf::contfrac::{expand_family, monic_normalize, CfError, PrecisionPolicy};
use mahlercf::padic::{
    check_conditions, hensel_divisibility_demo, replay_witness, table_rows, witness_search, BadApproxWitness,
    Condition2Variant, ConvergentTable, PadicError, SearchBounds, SearchOptions,
};
use mahlercf::structure::{theorem2_from_monic, verify_identity, Identity, StructureError};
use mahlercf::SeriesKind;

use crate::output::{Format, Output};
use crate::{CfArgs, EvalArgs, HenselArgs, TableArgs, VerifyArgs, WitnessArgs, DEPTH_CAP};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_SHAPE: u8 = 2;
pub const EXIT_PRECISION: u8 = 3;
pub const EXIT_INVALID: u8 = 4;
pub const EXIT_INTERNAL: u8 = 5;
pub const EXIT_USAGE: u8 = 64;

fn invalid(msg: impl std::fmt::Display) -> u8 {
    eprintln!("error: {msg}");
    EXIT_INVALID
}

fn cf_code(e: &CfError) -> u8 {
    eprintln!("error: {e}");
    match e {
        CfError::InsufficientPrecision { .. } | CfError::PrecisionCapReached { .. } => EXIT_PRECISION,
        CfError::InvalidParameter(_) => EXIT_INVALID,
        _ => EXIT_INTERNAL,
    }
}

fn padic_code(e: &PadicError) -> u8 {
    match e {
        PadicError::Cf(c) => cf_code(c),
        PadicError::InvalidParameter(_) | PadicError::Overflow(_) | PadicError::NotCoprime { .. } => invalid(e),
        _ => {
            eprintln!("error: {e}");
            EXIT_FAIL
        }
    }
}

fn big_json(x: &BigInt) -> Value {
    x.to_i64().map(Value::from).unwrap_or_else(|| Value::String(x.to_string()))
}

pub fn cf(args: &CfArgs, format: Format, out: &Output) -> u8 {
    if args.d < 2 || args.n < 1 || args.n > DEPTH_CAP || args.max_depth < 1 {
        return invalid(format!("need d >= 2, 1 <= n <= {DEPTH_CAP} and a positive max depth"));
    }
    let policy = PrecisionPolicy { initial_floor: args.floor, max_depth: args.max_depth };
    let (cf, _) = match expand_family(args.d, SeriesKind::G, args.n.max(2), policy) {
        Ok(x) => x,
        Err(e) => return cf_code(&e),
    };
    let monic = match monic_normalize(&cf) {
        Ok(m) => m,
        Err(e) => return cf_code(&e),
    };
    let n = args.n;
    let (betas, shape_violation) = match theorem2_from_monic(args.d, &monic, n) {
        Ok(t) => (Some(t.betas.betas), None),
        Err(StructureError::ShapeViolation(j)) => (None, Some(j)),
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INTERNAL;
        }
    };
    let first_large = cf
        .partial_quotients
        .iter()
        .enumerate()
        .take(n + 1)
        .skip(1)
        .find_map(|(i, a)| a.deg().filter(|&k| k >= args.d as usize).map(|k| (i, k)));
    let beta_at = |i: usize| betas.as_ref().filter(|_| i >= 2).map(|b| rational_to_string(&b[i]));
    let rows: Vec<[String; 5]> = (0..=n)
        .map(|i| {
            [
                i.to_string(),
                cf.partial_quotients[i].to_string(),
                monic.monic_denominators[i].to_string(),
                beta_at(i).unwrap_or_default(),
                cf.convergents[i].rate.map(|r| r.to_string()).unwrap_or_default(),
            ]
        })
        .collect();
    match format {
        Format::Json => {
            let body = json!({
                "d": args.d,
                "n": n,
                "partial_quotients": rows.iter().map(|r| &r[1]).collect::<Vec<_>>(),
                "monic_denominators": rows.iter().map(|r| &r[2]).collect::<Vec<_>>(),
                "betas": (0..=n).map(beta_at).collect::<Vec<_>>(),
                "rates": cf.convergents.iter().take(n + 1).map(|c| c.rate).collect::<Vec<_>>(),
                "shape_violation": shape_violation,
                "first_large_quotient": first_large.map(|(i, k)| json!({"index": i, "degree": k})),
            });
            out.json("cf", &body);
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = rows.into_iter().map(Vec::from).collect();
            out.csv(&["n", "a", "monic_q", "beta", "rate"], &rows);
        }
        Format::Text => {
            let mut lines: Vec<String> = rows
                .iter()
                .map(|r| {
                    let beta = if r[3].is_empty() { String::new() } else { format!("  beta = {}", r[3]) };
                    format!("n = {}: a = {}  q^ = {}{}  rate = {}", r[0], r[1], r[2], beta, r[4])
                })
                .collect();
            if let Some(j) = shape_violation {
                lines.push(format!("shape violation at index {j}"));
            }
            out.text(&lines);
        }
    }
    if let Some(j) = shape_violation {
        eprintln!("monic recurrence shape fails at index {j}");
        if let Some((i, k)) = first_large {
            eprintln!("first partial quotient of degree >= {}: index {i}, degree {k}", args.d);
        }
        return EXIT_SHAPE;
    }
    if first_large.is_some() {
        return EXIT_SHAPE;
    }
    EXIT_OK
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("range {s:?} is not of the form a..b"))?;
    let a = a.trim().parse::<i64>().map_err(|e| format!("range start: {e}"))?;
    let b = b.trim().trim_start_matches('=').parse::<i64>().map_err(|e| format!("range end: {e}"))?;
    Ok((a, b))
}

pub fn verify(args: &VerifyArgs, format: Format, out: &Output) -> u8 {
    let identity: Identity = match args.identity.parse() {
        Ok(i) => i,
        Err(e) => return invalid(e),
    };
    let d3_only = matches!(identity, Identity::Lemma5 | Identity::Prop2 | Identity::PropSum3 | Identity::PropBk);
    let d = args.d.unwrap_or(if d3_only { 3 } else { 2 });
    let range = match (&args.k, &args.m, args.n) {
        (Some(r), _, _) | (None, Some(r), _) => parse_range(r),
        (None, None, Some(n)) => Ok((0, n)),
        (None, None, None) => Ok((0, if identity == Identity::Funceq { 200 } else { 10 })),
    };
    let (lo, hi) = match range {
        Ok(r) => r,
        Err(e) => return invalid(e),
    };
    let cap = if d3_only { (DEPTH_CAP as i64 - 6) / 6 } else { DEPTH_CAP as i64 };
    if lo < 0 || hi < lo || hi > cap {
        return invalid(format!("range {lo}..{hi} must satisfy 0 <= lo <= hi <= {cap}"));
    }
    let report = match verify_identity(identity, d, lo, hi) {
        Ok(r) => r,
        Err(e) if e.is_precision() => {
            eprintln!("error: {e}");
            return EXIT_PRECISION;
        }
        Err(StructureError::InvalidParameter(m)) => return invalid(m),
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INTERNAL;
        }
    };
    match format {
        Format::Json => out.json("verify", &report),
        Format::Csv => {
            let rows: Vec<Vec<String>> = if report.failures.is_empty() {
                vec![vec![report.identity.clone(), d.to_string(), String::new(), "pass".into()]]
            } else {
                report
                    .failures
                    .iter()
                    .map(|f| vec![report.identity.clone(), d.to_string(), f.k.to_string(), f.detail.clone()])
                    .collect()
            };
            out.csv(&["identity", "d", "k", "detail"], &rows);
        }
        Format::Text => {
            let mut lines = vec![format!("{} d={} {}..{}: {}", report.identity, d, lo, hi, report.status)];
            lines.extend(report.failures.iter().map(|f| format!("  k = {}: {}", f.k, f.detail)));
            out.text(&lines);
        }
    }
    if report.passed() {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

#[derive(Serialize)]
struct WitnessBody<'a> {
    found: bool,
    witness: &'a BadApproxWitness,
    replay: String,
}

fn replay(path: &std::path::Path, out: &Output) -> u8 {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return invalid(format!("{}: {e}", path.display())),
    };
    let value: Value = match serde_json::from_str(&text) {
        Ok(v) => v,
        Err(e) => return invalid(format!("{}: {e}", path.display())),
    };
    let inner = value.get("witness").cloned().unwrap_or(value);
    let w: BadApproxWitness = match serde_json::from_value(inner) {
        Ok(w) => w,
        Err(e) => return invalid(format!("not a witness: {e}")),
    };
    match replay_witness(&w) {
        Ok(report) => {
            out.json("witness-replay", &json!({"valid": true, "report": report}));
            EXIT_OK
        }
        Err(e @ (PadicError::InvalidParameter(_) | PadicError::Overflow(_))) => invalid(e),
        Err(e) => {
            eprintln!("replay failed: {e}");
            out.json("witness-replay", &json!({"valid": false, "reason": e.to_string()}));
            EXIT_FAIL
        }
    }
}

pub fn witness(args: &WitnessArgs, format: Format, out: &Output) -> u8 {
    if let Some(path) = &args.replay {
        return replay(path, out);
    }
    let a = args.a.expect("clap enforces --a without --replay");
    if a < 2 || !(2..=3).contains(&args.d) {
        return invalid("need a >= 2 and d in {2, 3}");
    }
    if args.p_bound < 2 || args.p_bound > u32::MAX as u64 || args.n0_bound == 0 || args.t_bound == 0 || args.t_bound > DEPTH_CAP {
        return invalid(format!("bounds must be positive, p_bound >= 2 and t_bound <= {DEPTH_CAP}"));
    }
    let bounds = SearchBounds { p_bound: args.p_bound, n0_bound: args.n0_bound, t_bound: args.t_bound };
    let table = match ConvergentTable::for_g(args.d, args.t_bound.max(2)) {
        Ok(t) => t,
        Err(e) => return padic_code(&e),
    };
    let opts = SearchOptions { primes: args.p_list.clone(), ..SearchOptions::default() };
    match witness_search(a, args.d, bounds, &table, &opts) {
        Ok(w) => {
            match format {
                Format::Json => out.json(
                    "witness",
                    &WitnessBody { found: true, witness: &w, replay: "mahlercf witness --replay <this-file.json>".into() },
                ),
                Format::Csv => out.csv(
                    &["a", "d", "p", "n0", "t", "residue"],
                    &[[w.a, w.d as u64, w.p, w.n0, w.t as u64, w.residue].iter().map(u64::to_string).collect()],
                ),
                Format::Text => out.text(&[format!(
                    "f_{}({}) is not badly approximable: p = {}, n0 = {}, t = {}, residue {} mod {}",
                    w.d,
                    w.a,
                    w.p,
                    w.n0,
                    w.t,
                    w.residue,
                    w.p * w.p
                )]),
            }
            EXIT_OK
        }
        Err(PadicError::NotFound(summary)) => {
            match format {
                Format::Json => out.json("witness", &json!({"found": false, "summary": summary})),
                Format::Csv => out.csv(
                    &["p", "failed", "admissible_n0"],
                    &summary
                        .primes
                        .iter()
                        .map(|m| {
                            let n0: Vec<String> = m.admissible_n0.iter().map(u64::to_string).collect();
                            vec![m.p.to_string(), m.failed.clone(), n0.join(" ")]
                        })
                        .collect::<Vec<_>>(),
                ),
                Format::Text => out.text(&[format!("no witness for a = {a}, d = {} within bounds", args.d)]),
            }
            EXIT_FAIL
        }
        Err(e) => padic_code(&e),
    }
}

pub fn table(args: &TableArgs, format: Format, out: &Output) -> u8 {
    if args.d != 2 {
        return invalid("the table is defined for d = 2");
    }
    if args.t_bound == 0 || args.t_bound > DEPTH_CAP || args.p_list.is_empty() {
        return invalid(format!("need a nonempty prime list and 1 <= t_bound <= {DEPTH_CAP}"));
    }
    let conv = match ConvergentTable::for_g(2, args.t_bound.max(2)) {
        Ok(t) => t,
        Err(e) => return padic_code(&e),
    };
    let mut rows = match table_rows(&args.p_list, args.t_bound, &conv) {
        Ok(r) => r,
        Err(e) => return padic_code(&e),
    };
    if args.first_only {
        rows.retain(|r| r.first_for_p || r.t.is_none());
    }
    let none = format!("none found <= {}", args.t_bound);
    let cells = |r: &mahlercf::padic::TableRow| -> Vec<String> {
        let classes: Vec<String> = r.a_classes.iter().map(u64::to_string).collect();
        vec![
            r.p.to_string(),
            r.t.map(|t| t.to_string()).unwrap_or_else(|| none.clone()),
            r.residue.map(|x| x.to_string()).unwrap_or_default(),
            r.first_for_p.to_string(),
            classes.join(" "),
        ]
    };
    match format {
        Format::Json => out.json("table", &json!({"d": 2, "t_bound": args.t_bound, "rows": rows})),
        Format::Csv => out.csv(&["p", "t", "residue", "first_for_p", "a_classes_mod_p2"], &rows.iter().map(cells).collect::<Vec<_>>()),
        Format::Text => out.text(&rows.iter().map(|r| cells(r).join("\t")).collect::<Vec<_>>()),
    }
    EXIT_OK
}

/// Accepts `1e-40`, `2.5e-3`, `0.001` and `1/1000`.
pub fn parse_eps(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    if s.contains('/') {
        return mahlercf::arith::parse_rational(s).map_err(|e| e.to_string());
    }
    let (mantissa, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().map_err(|e| format!("exponent: {e}"))?),
        None => (s, 0),
    };
    let (int_part, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits: BigInt = format!("{int_part}{frac}").parse().map_err(|_| format!("bad number {s:?}"))?;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let p = num_traits::pow(ten, scale.unsigned_abs() as usize);
    Ok(if scale >= 0 { Rational::from_integer(digits * p) } else { Rational::new(digits, p) })
}

pub fn eval(args: &EvalArgs, format: Format, out: &Output) -> u8 {
    let eps = match parse_eps(&args.eps) {
        Ok(e) => e,
        Err(e) => return invalid(e),
    };
    let which = match args.which.to_ascii_lowercase().as_str() {
        "f" => Which::F,
        "g" => Which::G,
        other => return invalid(format!("--which must be f or g, got {other:?}")),
    };
    let v = match eval_mahler(args.a, args.d, &eps, which) {
        Ok(v) => v,
        Err(e @ ApproxError::PrecisionCascade { .. }) => {
            eprintln!("error: {e}");
            return EXIT_PRECISION;
        }
        Err(e) => return invalid(e),
    };
    let prefix = real_cf_prefix(&v, args.cf_terms);
    match format {
        Format::Json => {
            let mut body = serde_json::to_value(&v).expect("plain data");
            body["cf_prefix"] = Value::Array(prefix.iter().map(big_json).collect());
            out.json("eval", &body);
        }
        Format::Csv => out.csv(
            &["target", "value", "error_bound", "decimal"],
            &[vec![v.target.clone(), rational_to_string(&v.value), rational_to_string(&v.error_bound), v.decimal.clone()]],
        ),
        Format::Text => {
            let cf: Vec<String> = prefix.iter().map(BigInt::to_string).collect();
            out.text(&[format!("{} = {}", v.target, v.decimal), format!("cf: [{}]", cf.join(", "))]);
        }
    }
    EXIT_OK
}

pub fn demo_hensel(args: &HenselArgs, format: Format, out: &Output) -> u8 {
    if args.t > DEPTH_CAP {
        return invalid(format!("t must be at most {DEPTH_CAP}"));
    }
    let table = match ConvergentTable::for_g(args.d, args.t.max(2)) {
        Ok(t) => t,
        Err(e) => return padic_code(&e),
    };
    let Some(conv) = table.get(args.t) else { return invalid(format!("no convergent {}", args.t)) };
    let report = match check_conditions(args.a, args.d, args.p, args.n0, conv, Condition2Variant::Growth) {
        Ok(r) => r,
        Err(e) => return padic_code(&e),
    };
    if !report.conditions.all() {
        eprintln!("conditions fail: {:?}", report.conditions);
        out.json("demo-hensel", &json!({"valid": false, "report": report}));
        return EXIT_FAIL;
    }
    let w = BadApproxWitness {
        a: args.a,
        d: args.d,
        p: args.p,
        n0: args.n0,
        t: args.t,
        residue: report.residue,
        conditions: report.conditions,
        qt: conv.q.to_text(),
        evidence: report.evidence,
    };
    match hensel_divisibility_demo(&w, conv, args.m, args.cap) {
        Ok(h) => {
            match format {
                Format::Json => out.json("demo-hensel", &h),
                Format::Csv => out.csv(
                    &["p", "m", "modulus", "lifted_root", "n"],
                    &[[h.p, h.m as u64, h.modulus, h.lifted_root, h.n].iter().map(u64::to_string).collect()],
                ),
                Format::Text => out.text(&[format!(
                    "{}^{} divides q_{}({}^({}^{})); lifted root {} mod {}",
                    h.p, h.m, h.t, h.a, h.d, h.n, h.lifted_root, h.modulus
                )]),
            }
            EXIT_OK
        }
        Err(e) => padic_code(&e),
    }
}
