use std::path::Path;

use darbkit_core::darboux::{verify_darboux, DarbouxCheck, DarbouxError, DarbouxPair};
use darbkit_core::integrability::IntegrabilityError;
use darbkit_core::sysparse::ParseError;
use darbkit_core::{parse_system, Poly, Rat, RatFunc, SystemSpec};

use crate::{EXIT_NEGATIVE, EXIT_RESOURCE, EXIT_USAGE};

/// A command that stopped early with an exit code and one diagnostic.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into() }
    }

    pub fn negative(message: impl Into<String>) -> Self {
        Failure { code: EXIT_NEGATIVE, message: message.into() }
    }
}

impl From<DarbouxError> for Failure {
    fn from(e: DarbouxError) -> Self {
        let code = if matches!(e, DarbouxError::BasisCap { .. }) { EXIT_RESOURCE } else { EXIT_USAGE };
        Failure { code, message: e.to_string() }
    }
}

impl From<IntegrabilityError> for Failure {
    fn from(e: IntegrabilityError) -> Self {
        let code = match e {
            IntegrabilityError::UnverifiedPair { .. } => EXIT_NEGATIVE,
            _ => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

pub fn load_system(path: &Path) -> Result<SystemSpec, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    let mut spec = parse_system(&text).map_err(|e| Failure::usage(format!("{}:{e}", path.display())))?;
    if spec.name.is_empty() {
        spec.name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    }
    Ok(spec)
}

fn at_flag(flag: &str, e: ParseError) -> Failure {
    Failure::usage(format!("--{flag}: {e}"))
}

/// A polynomial argument; the name of a declared `poly` is accepted too.
pub fn poly_arg(spec: &SystemSpec, flag: &str, text: &str) -> Result<Poly, Failure> {
    if let Some(p) = spec.named_poly(text.trim()) {
        return Ok(p.clone());
    }
    spec.parse_poly(text).map_err(|e| at_flag(flag, e))
}

pub fn ratfunc_arg(spec: &SystemSpec, flag: &str, text: &str) -> Result<RatFunc, Failure> {
    if let Some(p) = spec.named_poly(text.trim()) {
        return Ok(RatFunc::from_poly(p.clone()));
    }
    spec.parse_ratfunc(text).map_err(|e| at_flag(flag, e))
}

/// `C:EXPR` with a rational constant.
pub fn log_term(spec: &SystemSpec, text: &str) -> Result<(Rat, RatFunc), Failure> {
    let (c, expr) = text
        .split_once(':')
        .ok_or_else(|| Failure::usage(format!("--log: expected `C:EXPR`, got `{text}`")))?;
    let c = darbkit_core::arith::parse_rat(c)
        .ok_or_else(|| Failure::usage(format!("--log: `{}` is not a rational constant", c.trim())))?;
    Ok((c, ratfunc_arg(spec, "log", expr)?))
}

/// Reads `EXPR ; EXPR` lines and re-verifies every pair against the field.
pub fn load_pairs(spec: &SystemSpec, path: &Path) -> Result<Vec<DarbouxPair>, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    let shown = path.display();
    let mut pairs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let (f_text, k_text) = line
            .split_once(';')
            .ok_or_else(|| Failure::usage(format!("{shown}:{line_no}:1: expected `EXPR ; EXPR`")))?;
        let k_offset = f_text.chars().count() + 1;
        let located = |e: ParseError, offset: usize| {
            Failure::usage(format!("{shown}:{line_no}:{}: {}", e.col + offset, e.message))
        };
        let f = spec.parse_poly(f_text).map_err(|e| located(e, 0))?;
        let k = spec.parse_poly(k_text).map_err(|e| located(e, k_offset))?;
        match verify_darboux(&spec.field, &f)? {
            DarbouxCheck::Darboux(pair) if pair.k == k => pairs.push(pair),
            DarbouxCheck::Darboux(pair) => {
                return Err(Failure::negative(format!(
                    "{shown}:{line_no}: {f} has cofactor {}, not {k}",
                    pair.k
                )))
            }
            DarbouxCheck::NotDarboux => {
                return Err(Failure::negative(format!("{shown}:{line_no}: {f} is not a Darboux polynomial")))
            }
        }
    }
    if pairs.is_empty() {
        return Err(Failure::usage(format!("{shown}: no pairs")));
    }
    Ok(pairs)
}
