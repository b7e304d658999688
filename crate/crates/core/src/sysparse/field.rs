use crate::arith::{Poly, Vars};

use super::ParseError;

/// Polynomial vector field `P_1 d/dx_1 + ... + P_n d/dx_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField {
    vars: Vars,
    components: Vec<Poly>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("expected {expected} components, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("component {0} uses a different variable context")]
    Context(usize),
    #[error("all components are zero")]
    Zero,
}

impl VectorField {
    pub fn new(vars: &Vars, components: Vec<Poly>) -> Result<Self, FieldError> {
        if components.len() != vars.len() {
            return Err(FieldError::Arity { expected: vars.len(), found: components.len() });
        }
        if let Some(i) = components.iter().position(|p| p.vars() != vars) {
            return Err(FieldError::Context(i));
        }
        if components.iter().all(Poly::is_zero) {
            return Err(FieldError::Zero);
        }
        Ok(VectorField { vars: vars.clone(), components })
    }

    /// Builds a field from component expressions, e.g. `(&["x", "y"], &["y", "-x"])`.
    pub fn parse(names: &[&str], components: &[&str]) -> Result<Self, ParseError> {
        let vars = Vars::new(names.iter().copied());
        let comps = components
            .iter()
            .map(|c| super::parse_poly(c, &vars))
            .collect::<Result<Vec<_>, _>>()?;
        VectorField::new(&vars, comps).map_err(|e| ParseError::new(1, 1, e.to_string()))
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &Poly {
        &self.components[i]
    }

    /// Maximum total degree of the components.
    pub fn degree(&self) -> u32 {
        self.components.iter().filter_map(Poly::total_degree).max().unwrap_or(0)
    }
}
