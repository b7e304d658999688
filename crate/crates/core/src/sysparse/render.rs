use num_traits::{One, Signed};

use crate::arith::{fmt_rat, Monomial, Poly, RatFunc, Vars};

fn render_monomial(m: &Monomial, vars: &Vars) -> String {
    let mut parts = Vec::new();
    for (name, &e) in vars.names().iter().zip(m.exponents()) {
        match e {
            0 => {}
            1 => parts.push(name.clone()),
            _ => parts.push(format!("{name}^{e}")),
        }
    }
    parts.join("*")
}

/// Canonical text: terms in descending graded reverse lexicographic order,
/// rational coefficients as `a` or `a/b`, powers with `^`.
pub fn render_poly(p: &Poly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (m, c)) in p.terms().rev().enumerate() {
        let neg = c.is_negative();
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let abs = c.abs();
        let mono = render_monomial(m, p.vars());
        if mono.is_empty() {
            out.push_str(&fmt_rat(&abs));
        } else if abs.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&fmt_rat(&abs));
            out.push('*');
            out.push_str(&mono);
        }
    }
    out
}

/// `num/den` in canonical form, with parentheses only where needed to
/// parse back to the same function.
pub fn render_ratfunc(r: &RatFunc) -> String {
    let num = render_poly(r.num());
    if r.den().is_one() {
        return num;
    }
    let den = render_poly(r.den());
    let num = if r.num().len() > 1 || num.contains('/') { format!("({num})") } else { num };
    let den = if den.contains('*') || den.contains(' ') { format!("({den})") } else { den };
    format!("{num}/{den}")
}
