use serde_json::{json, Map, Value};

use darbkit_core::arith::{fmt_rat, Rat};
use darbkit_core::darboux::{search_constant_cofactor, search_given_cofactor, verify_darboux, DarbouxCheck, DarbouxPair, SearchReport};
use darbkit_core::integrability::{
    cramer_multiplier, first_integral_exponents, multiplier_exponents, solve_log_coefficients,
    verify_elementary_first_integral, CramerOutcome, ElementaryIntegralExpr, FirstIntegralCertificate, LogCoefficients,
    MultiplierOutcome,
};
use darbkit_core::lie::{divergence, Independence};
use darbkit_core::{Poly, SystemSpec, VectorField};

use crate::input::{load_pairs, load_system, log_term, poly_arg, ratfunc_arg, Failure};
use crate::output::{Report, Status};
use crate::Command;

pub fn execute(name: &str, command: Command, seed: u64) -> Report {
    let mut system = String::new();
    match dispatch(name, command, seed, &mut system) {
        Ok(report) => report,
        Err(f) => Report::error(name, &system, f.code, vec![f.message]),
    }
}

fn dispatch(name: &str, command: Command, seed: u64, system: &mut String) -> Result<Report, Failure> {
    let mut load = |path: &std::path::Path| -> Result<SystemSpec, Failure> {
        let spec = load_system(path)?;
        *system = spec.name.clone();
        Ok(spec)
    };
    match command {
        Command::VerifyDarboux { system, poly } => {
            let spec = load(&system)?;
            let f = poly_arg(&spec, "poly", &poly)?;
            verify_darboux_cmd(name, &spec, &f)
        }
        Command::SearchDarboux { system, degree, cofactor, .. } => {
            let spec = load(&system)?;
            match cofactor {
                Some(k) => {
                    let k = poly_arg(&spec, "cofactor", &k)?;
                    search_given_cmd(name, &spec, &k, degree)
                }
                None => search_constant_cmd(name, &spec, degree),
            }
        }
        Command::Multiplier { system, pairs } => {
            let spec = load(&system)?;
            let pairs = load_pairs(&spec, &pairs)?;
            multiplier_cmd(name, &spec, &pairs)
        }
        Command::FirstIntegrals { system, pairs } => {
            let spec = load(&system)?;
            let pairs = load_pairs(&spec, &pairs)?;
            first_integrals_cmd(name, &spec, &pairs)
        }
        Command::VerifyIntegral { system, w0, logs } => {
            let spec = load(&system)?;
            let w0 = ratfunc_arg(&spec, "w0", &w0)?;
            let terms = logs.iter().map(|t| log_term(&spec, t)).collect::<Result<Vec<_>, _>>()?;
            verify_integral_cmd(name, &spec, ElementaryIntegralExpr { w0, terms })
        }
        Command::SolveLogCoeffs { system, w0, ws } => {
            let spec = load(&system)?;
            let w0 = ratfunc_arg(&spec, "w0", &w0)?;
            let ws = ws.iter().map(|w| ratfunc_arg(&spec, "w", w)).collect::<Result<Vec<_>, _>>()?;
            solve_log_cmd(name, &spec, &w0, &ws)
        }
        Command::Cramer { system, integrals } => {
            let spec = load(&system)?;
            let h = integrals.iter().map(|t| ratfunc_arg(&spec, "integral", t)).collect::<Result<Vec<_>, _>>()?;
            cramer_cmd(name, &spec, &h, seed)
        }
        Command::Report { system, degree } => {
            let spec = load(&system)?;
            report_cmd(name, &spec, degree)
        }
    }
}

fn obj(pairs: Vec<(&str, Value)>) -> Map<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn rats(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(|r| Value::String(fmt_rat(r))).collect())
}

fn polys(v: &[Poly]) -> Value {
    Value::Array(v.iter().map(|p| Value::String(p.to_string())).collect())
}

fn pairs_value(pairs: &[DarbouxPair]) -> Value {
    Value::Array(pairs.iter().map(|p| json!({ "f": p.f.to_string(), "k": p.k.to_string() })).collect())
}

fn verify_darboux_cmd(name: &str, spec: &SystemSpec, f: &Poly) -> Result<Report, Failure> {
    Ok(match verify_darboux(&spec.field, f)? {
        DarbouxCheck::Darboux(pair) => Report::new(
            name,
            &spec.name,
            Status::Ok,
            obj(vec![("poly", f.to_string().into()), ("result", "Darboux".into()), ("cofactor", pair.k.to_string().into())]),
        ),
        DarbouxCheck::NotDarboux => Report::new(
            name,
            &spec.name,
            Status::NoSolution,
            obj(vec![("poly", f.to_string().into()), ("result", "NotDarboux".into())]),
        )
        .with_diagnostic(format!("NotDarboux: X(f) is not a polynomial multiple of {f}")),
    })
}

fn search_given_cmd(name: &str, spec: &SystemSpec, k: &Poly, degree: u32) -> Result<Report, Failure> {
    let kernel = search_given_cofactor(&spec.field, k, degree)?;
    let status = if kernel.is_empty() { Status::NoSolution } else { Status::Ok };
    let payload = obj(vec![("degree", degree.into()), ("cofactor", k.to_string().into()), ("kernel", polys(&kernel))]);
    let report = Report::new(name, &spec.name, status, payload);
    Ok(if kernel.is_empty() {
        report.with_diagnostic(format!("no nonconstant Darboux polynomial of degree <= {degree} with cofactor {k}"))
    } else {
        report
    })
}

fn search_value(r: &SearchReport) -> Map<String, Value> {
    let hits = r
        .hits
        .iter()
        .map(|h| json!({ "cofactor": fmt_rat(&h.cofactor), "kernel": polys(&h.kernel) }))
        .collect();
    obj(vec![
        ("degree_bound", r.degree_bound.into()),
        ("hits", Value::Array(hits)),
        ("rejected_candidates", rats(&r.rejected_candidates)),
        ("spectrum_remainder_degree", r.spectrum_remainder_degree.into()),
    ])
}

fn search_constant_cmd(name: &str, spec: &SystemSpec, degree: u32) -> Result<Report, Failure> {
    let r = search_constant_cofactor(&spec.field, degree)?;
    let status = if r.hits.is_empty() { Status::NoSolution } else { Status::Ok };
    let report = Report::new(name, &spec.name, status, search_value(&r));
    Ok(if r.hits.is_empty() {
        report.with_diagnostic(format!("no Darboux polynomial of degree <= {degree} with constant cofactor"))
    } else {
        report
    })
}

/// Status, payload and diagnostics of one multiplier synthesis.
type Synthesis = (Status, Map<String, Value>, Vec<String>);

fn multiplier_value(field: &VectorField, pairs: &[DarbouxPair]) -> Result<Synthesis, Failure> {
    let div = divergence(field).to_string();
    let mut notes = Vec::new();
    Ok(match multiplier_exponents(field, pairs)? {
        MultiplierOutcome::Certificate(c) => {
            let check = if c.multiplier.is_some() { "jacobian" } else { "log_derivative" };
            if c.multiplier.is_none() {
                notes.push("exponents are not all integers; the identity was checked through logarithmic derivatives".into());
            }
            if c.multiplier.as_ref().is_some_and(|j| j.is_constant()) {
                notes.push("warning: the multiplier is constant".into());
            }
            let payload = obj(vec![
                ("divergence", div.into()),
                ("pairs", pairs_value(&c.pairs)),
                ("exponents", rats(&c.exponents)),
                ("homogeneous", Value::Array(c.homogeneous.iter().map(|v| rats(v)).collect())),
                ("multiplier", c.multiplier.map_or(Value::Null, |j| j.to_string().into())),
                ("check", check.into()),
            ]);
            (Status::Ok, payload, notes)
        }
        MultiplierOutcome::NoSolution { monomial } => {
            let m = Poly::monomial(field.vars(), monomial, Rat::from_integer(1.into())).to_string();
            notes.push(format!("NoSolution: no exponents satisfy sum l_i k_i = -div X (coefficient of {m})"));
            let payload = obj(vec![("divergence", div.into()), ("result", "NoSolution".into()), ("monomial", m.into())]);
            (Status::NoSolution, payload, notes)
        }
    })
}

fn multiplier_cmd(name: &str, spec: &SystemSpec, pairs: &[DarbouxPair]) -> Result<Report, Failure> {
    let (status, payload, notes) = multiplier_value(&spec.field, pairs)?;
    Ok(notes.into_iter().fold(Report::new(name, &spec.name, status, payload), Report::with_diagnostic))
}

/// `2*ln(x) - ln(y)` style rendering of `sum l_i ln f_i`.
fn log_sum(pairs: &[DarbouxPair], lambdas: &[Rat]) -> String {
    let mut out = String::new();
    for (p, l) in pairs.iter().zip(lambdas) {
        if l == &Rat::from_integer(0.into()) {
            continue;
        }
        let negative = l < &Rat::from_integer(0.into());
        let mag = fmt_rat(&if negative { -l } else { l.clone() });
        let term = if mag == "1" { format!("ln({})", p.f) } else { format!("{mag}*ln({})", p.f) };
        match (out.is_empty(), negative) {
            (true, false) => out.push_str(&term),
            (true, true) => out.push_str(&format!("-{term}")),
            (false, false) => out.push_str(&format!(" + {term}")),
            (false, true) => out.push_str(&format!(" - {term}")),
        }
    }
    out
}

fn integrals_value(certs: &[FirstIntegralCertificate]) -> Value {
    Value::Array(
        certs
            .iter()
            .map(|c| json!({ "lambdas": rats(&c.lambdas), "integral": log_sum(&c.pairs, &c.lambdas) }))
            .collect(),
    )
}

fn first_integrals_cmd(name: &str, spec: &SystemSpec, pairs: &[DarbouxPair]) -> Result<Report, Failure> {
    let certs = first_integral_exponents(&spec.field, pairs)?;
    let status = if certs.is_empty() { Status::NoSolution } else { Status::Ok };
    let payload = obj(vec![("pairs", pairs_value(pairs)), ("integrals", integrals_value(&certs))]);
    let report = Report::new(name, &spec.name, status, payload);
    Ok(if certs.is_empty() {
        report.with_diagnostic("NoSolution: the cofactors are linearly independent")
    } else {
        report
    })
}

fn verify_integral_cmd(name: &str, spec: &SystemSpec, expr: ElementaryIntegralExpr) -> Result<Report, Failure> {
    let ok = verify_elementary_first_integral(&spec.field, &expr)?;
    let derivative = expr.derivative_along(&spec.field)?;
    let logs = expr
        .terms
        .iter()
        .map(|(c, w)| json!({ "c": fmt_rat(c), "w": w.to_string() }))
        .collect();
    let payload = obj(vec![
        ("w0", expr.w0.to_string().into()),
        ("logs", Value::Array(logs)),
        ("derivative", derivative.to_string().into()),
        ("verdict", ok.into()),
    ]);
    let status = if ok { Status::Ok } else { Status::NoSolution };
    let report = Report::new(name, &spec.name, status, payload);
    Ok(if ok { report } else { report.with_diagnostic(format!("not a first integral: X(H) = {derivative}")) })
}

fn solve_log_cmd(name: &str, spec: &SystemSpec, w0: &darbkit_core::RatFunc, ws: &[darbkit_core::RatFunc]) -> Result<Report, Failure> {
    Ok(match solve_log_coefficients(&spec.field, w0, ws)? {
        LogCoefficients::Solved { particular, homogeneous } => Report::new(
            name,
            &spec.name,
            Status::Ok,
            obj(vec![
                ("particular", rats(&particular)),
                ("homogeneous", Value::Array(homogeneous.iter().map(|v| rats(v)).collect())),
            ]),
        ),
        LogCoefficients::NoSolution => Report::new(name, &spec.name, Status::NoSolution, obj(vec![("result", "NoSolution".into())]))
            .with_diagnostic("NoSolution: no constants make w0 + sum c_i ln w_i a first integral"),
    })
}

fn cramer_cmd(name: &str, spec: &SystemSpec, h: &[darbkit_core::RatFunc], seed: u64) -> Result<Report, Failure> {
    let names = spec.vars.names();
    Ok(match cramer_multiplier(&spec.field, h, seed)? {
        CramerOutcome::Data(d) => {
            let lambdas: Map<String, Value> = d
                .lambda_vars
                .iter()
                .zip(&d.lambdas)
                .map(|(&s, l)| (names[s].clone(), Value::String(l.to_string())))
                .collect();
            let independence = match &d.independence {
                Some(Independence::Independent { point }) => json!({ "verdict": "independent", "point": rats(point) }),
                Some(Independence::ProbablyDependent { attempts }) => {
                    json!({ "verdict": "probably_dependent", "attempts": attempts })
                }
                None => Value::Null,
            };
            let payload = obj(vec![
                ("J", d.multiplier.to_string().into()),
                ("pivot", names[d.pivot].clone().into()),
                ("Lambda", d.lambda.to_string().into()),
                ("Lambda_s", Value::Object(lambdas)),
                ("h", d.h.to_string().into()),
                ("constant_warning", d.constant_warning.into()),
                ("independence", independence),
            ]);
            let report = Report::new(name, &spec.name, Status::Ok, payload);
            if d.constant_warning {
                report.with_diagnostic("warning: the multiplier is constant")
            } else {
                report
            }
        }
        CramerOutcome::DegenerateInput => Report::new(name, &spec.name, Status::NoSolution, obj(vec![("result", "DegenerateInput".into())]))
            .with_diagnostic("the Jacobian determinant vanishes for every pivot; the integrals are functionally dependent"),
    })
}

/// Drops every polynomial that is, up to a constant, a product of powers of
/// lower-degree ones already kept; those add only trivial relations.
fn drop_products(mut pairs: Vec<DarbouxPair>) -> Vec<DarbouxPair> {
    pairs.sort_by_key(|p| p.f.total_degree());
    let mut kept: Vec<DarbouxPair> = Vec::new();
    for p in pairs {
        let mut rest = p.f.clone();
        let mut progress = true;
        while progress && !rest.is_constant() {
            progress = false;
            for q in &kept {
                if let Ok(r) = rest.exact_div(&q.f) {
                    rest = r;
                    progress = true;
                }
            }
        }
        if !rest.is_constant() {
            kept.push(p);
        }
    }
    kept
}

fn report_cmd(name: &str, spec: &SystemSpec, degree: u32) -> Result<Report, Failure> {
    let field = &spec.field;
    let search = search_constant_cofactor(field, degree)?;
    let pairs = drop_products(search.hits.iter().flat_map(|h| h.pairs(field)).collect());
    let mut notes = Vec::new();
    let (multiplier, integrals) = if pairs.is_empty() {
        notes.push(format!("no Darboux polynomial of degree <= {degree} with constant cofactor"));
        (Value::Null, Value::Array(Vec::new()))
    } else {
        let (_, m, mut n) = multiplier_value(field, &pairs)?;
        notes.append(&mut n);
        (Value::Object(m), integrals_value(&first_integral_exponents(field, &pairs)?))
    };
    let status = if pairs.is_empty() { Status::NoSolution } else { Status::Ok };
    let payload = obj(vec![
        ("search", Value::Object(search_value(&search))),
        ("multiplier", multiplier),
        ("first_integrals", integrals),
    ]);
    Ok(notes.into_iter().fold(Report::new(name, &spec.name, status, payload), Report::with_diagnostic))
}
