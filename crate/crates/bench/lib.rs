//! Shared inputs for the benchmarks.

use darbkit_core::{parse_system, SystemSpec};

/// Lorenz system with rational parameters bound to the given literals.
pub fn lorenz(s: &str, b: &str, r: &str) -> SystemSpec {
    let text = format!(
        "vars x y z\nparam s = {s}\nparam b = {b}\nparam r = {r}\n\
         eq x' = s*(y - x)\neq y' = r*x - y - x*z\neq z' = -b*z + x*y\n"
    );
    parse_system(&text).expect("valid Lorenz system")
}
