use crate::arith::{parse_rat, Poly, Rat, RatFunc, Vars};

use super::expr::{parse_poly_at, parse_ratfunc_at, Scope};
use super::{ParseError, VectorField};

/// A parsed `.vf` description: variables, bound parameters, the vector
/// field (parameters already substituted) and optional named polynomials.
#[derive(Clone, Debug)]
pub struct SystemSpec {
    pub name: String,
    pub vars: Vars,
    pub parameters: Vec<(String, Rat)>,
    pub field: VectorField,
    pub named_polys: Vec<(String, Poly)>,
}

impl SystemSpec {
    fn scope(&self) -> Scope<'_> {
        Scope { vars: &self.vars, params: &self.parameters }
    }

    /// Parses a polynomial in this system's variables; parameters may be used.
    pub fn parse_poly(&self, text: &str) -> Result<Poly, ParseError> {
        parse_poly_at(text, &self.scope(), 1, 1)
    }

    pub fn parse_ratfunc(&self, text: &str) -> Result<RatFunc, ParseError> {
        parse_ratfunc_at(text, &self.scope(), 1, 1)
    }

    pub fn named_poly(&self, name: &str) -> Option<&Poly> {
        self.named_polys.iter().find(|(n, _)| n == name).map(|(_, p)| p)
    }
}

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    _src: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str, line: usize) -> Self {
        Cursor { chars: src.chars().collect(), pos: 0, line, _src: src }
    }

    fn col(&self) -> usize {
        self.pos + 1
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.chars.len()
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::new(self.line, self.col().min(self.chars.len().max(1)), msg)
    }

    /// Reads an identifier, returning it with its starting column.
    fn ident(&mut self, what: &str) -> Result<(String, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.pos < self.chars.len() && (self.chars[self.pos].is_alphabetic() || self.chars[self.pos] == '_') {
            while self.pos < self.chars.len() && (self.chars[self.pos].is_alphanumeric() || self.chars[self.pos] == '_') {
                self.pos += 1;
            }
            Ok((self.chars[start..self.pos].iter().collect(), start + 1))
        } else {
            Err(self.err(format!("expected {what}")))
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        self.skip_ws();
        if self.pos < self.chars.len() && self.chars[self.pos] == c {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected `{c}`")))
        }
    }

    /// Remainder of the line and its starting column.
    fn rest(&mut self) -> (String, usize) {
        self.skip_ws();
        (self.chars[self.pos..].iter().collect(), self.pos + 1)
    }
}

/// Drops a trailing `#` comment, ignoring `#` inside double quotes.
fn strip_comment(line: &str) -> &str {
    let mut in_quotes = false;
    for (i, c) in line.char_indices() {
        match c {
            '"' => in_quotes = !in_quotes,
            '#' if !in_quotes => return &line[..i],
            _ => {}
        }
    }
    line
}

struct Pending {
    line: usize,
    text: String,
    col: usize,
}

/// Parses the line-oriented `.vf` format.
///
/// ```text
/// system "Lorenz"          # optional
/// vars x y z
/// param s = 10             # rational literal: a, -a, a/b
/// eq x' = s*(y - x)        # one per variable
/// poly f = x^2 - 2*z       # optional named polynomial
/// ```
pub fn parse_system(text: &str) -> Result<SystemSpec, ParseError> {
    let mut name = String::new();
    let mut vars: Option<(Vec<(String, usize)>, usize)> = None;
    let mut params: Vec<(String, Rat, usize, usize)> = Vec::new();
    let mut eqs: Vec<(String, usize, usize, Pending)> = Vec::new();
    let mut polys: Vec<(String, usize, usize, Pending)> = Vec::new();
    let mut seen_system = false;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = strip_comment(raw);
        let mut cur = Cursor::new(body, line);
        if cur.at_end() {
            continue;
        }
        let (kw, kw_col) = cur.ident("a statement keyword")?;
        match kw.as_str() {
            "system" => {
                if seen_system {
                    return Err(ParseError::new(line, kw_col, "duplicate `system` statement"));
                }
                seen_system = true;
                cur.expect('"')?;
                let start = cur.pos;
                while cur.pos < cur.chars.len() && cur.chars[cur.pos] != '"' {
                    cur.pos += 1;
                }
                if cur.pos >= cur.chars.len() {
                    return Err(ParseError::new(line, start, "unterminated string"));
                }
                name = cur.chars[start..cur.pos].iter().collect();
                cur.pos += 1;
                if !cur.at_end() {
                    return Err(cur.err("unexpected text after system name"));
                }
            }
            "vars" => {
                if vars.is_some() {
                    return Err(ParseError::new(line, kw_col, "duplicate `vars` statement"));
                }
                let mut list: Vec<(String, usize)> = Vec::new();
                while !cur.at_end() {
                    let (v, col) = cur.ident("a variable name")?;
                    if list.iter().any(|(n, _)| *n == v) {
                        return Err(ParseError::new(line, col, format!("duplicate variable `{v}`")));
                    }
                    list.push((v, col));
                }
                if list.is_empty() {
                    return Err(ParseError::new(line, kw_col, "`vars` needs at least one variable"));
                }
                vars = Some((list, line));
            }
            "param" => {
                let (p, col) = cur.ident("a parameter name")?;
                if cur.at_end() {
                    return Err(ParseError::new(line, col, format!("unbound parameter `{p}`")));
                }
                cur.expect('=')?;
                let (value, vcol) = cur.rest();
                let value = value.trim_end();
                if value.is_empty() {
                    return Err(ParseError::new(line, col, format!("unbound parameter `{p}`")));
                }
                let compact: String = value.chars().filter(|c| !c.is_whitespace()).collect();
                let r = parse_rat(&compact)
                    .ok_or_else(|| ParseError::new(line, vcol, format!("invalid rational literal `{value}`")))?;
                if params.iter().any(|(n, ..)| *n == p) {
                    return Err(ParseError::new(line, col, format!("duplicate parameter `{p}`")));
                }
                params.push((p, r, line, col));
            }
            "eq" => {
                let (v, col) = cur.ident("a variable name")?;
                cur.expect('\'')?;
                cur.expect('=')?;
                let (rest, rcol) = cur.rest();
                eqs.push((v, line, col, Pending { line, text: rest, col: rcol }));
            }
            "poly" => {
                let (p, col) = cur.ident("a polynomial name")?;
                cur.expect('=')?;
                let (rest, rcol) = cur.rest();
                polys.push((p, line, col, Pending { line, text: rest, col: rcol }));
            }
            other => {
                return Err(ParseError::new(line, kw_col, format!("unknown statement `{other}`")));
            }
        }
    }

    let (var_list, vars_line) = vars.ok_or_else(|| ParseError::new(1, 1, "missing `vars` statement"))?;
    for (p, _, line, col) in &params {
        if var_list.iter().any(|(v, _)| v == p) {
            return Err(ParseError::new(*line, *col, format!("parameter `{p}` shadows a variable")));
        }
    }
    let var_names = Vars::new(var_list.iter().map(|(v, _)| v.clone()));
    let parameters: Vec<(String, Rat)> = params.into_iter().map(|(n, r, ..)| (n, r)).collect();
    let scope = Scope { vars: &var_names, params: &parameters };

    let mut components: Vec<Option<Poly>> = vec![None; var_names.len()];
    for (v, line, col, pending) in eqs {
        let i = var_names
            .index_of(&v)
            .ok_or_else(|| ParseError::new(line, col, format!("`{v}` is not a declared variable")))?;
        if components[i].is_some() {
            return Err(ParseError::new(line, col, format!("duplicate equation for `{v}`")));
        }
        components[i] = Some(parse_poly_at(&pending.text, &scope, pending.line, pending.col)?);
    }
    let mut comps = Vec::with_capacity(components.len());
    for (slot, (v, col)) in components.into_iter().zip(&var_list) {
        match slot {
            Some(p) => comps.push(p),
            None => return Err(ParseError::new(vars_line, *col, format!("missing equation for `{v}`"))),
        }
    }
    let field = VectorField::new(&var_names, comps)
        .map_err(|e| ParseError::new(vars_line, var_list[0].1, e.to_string()))?;

    let mut named_polys: Vec<(String, Poly)> = Vec::new();
    for (n, line, col, pending) in polys {
        if named_polys.iter().any(|(m, _)| *m == n) {
            return Err(ParseError::new(line, col, format!("duplicate polynomial `{n}`")));
        }
        named_polys.push((n, parse_poly_at(&pending.text, &scope, pending.line, pending.col)?));
    }

    Ok(SystemSpec { name, vars: var_names, parameters, field, named_polys })
}
