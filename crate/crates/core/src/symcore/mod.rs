//! Exact symbolic expressions over jet variables.
//!
//! [`Expr`] is the tree form used for input and output, [`Frac`] the normal
//! form used for every computation.

mod eval;
mod expr;
mod frac;
mod linsolve;
mod parse;
mod poly;
mod render;
mod scalar;
mod symbols;

pub use eval::{eval_num, Assignment};
pub use expr::{Expr, Func};
pub use frac::Frac;
pub use linsolve::{det2, solve_linear, solve_overdetermined, LinearSolution};
pub use parse::{parse, parse_with};
pub use poly::{Atom, Monomial, Poly};
pub use render::{render, to_json, Style};
pub use scalar::Scalar;
pub use symbols::{FunctionSymbol, JetSymbol, SymbolTable, Var, VarSet};

use crate::error::Result;

pub fn normalize(e: &Expr) -> Result<Expr> {
    Ok(Frac::from_expr(e)?.to_expr())
}

pub fn diff(e: &Expr, v: Var) -> Result<Expr> {
    Ok(Frac::from_expr(e)?.diff(v)?.to_expr())
}

pub fn substitute_function(e: &Expr, f: &FunctionSymbol, body: &Expr) -> Result<Expr> {
    let body = Frac::from_expr(body)?;
    Ok(Frac::from_expr(e)?.substitute_function(f, &body)?.to_expr())
}

/// Parses and normalizes in one step.
pub fn frac(text: &str) -> Result<Frac> {
    Frac::from_expr(&parse(text)?)
}

pub fn frac_with(text: &str, table: &SymbolTable) -> Result<Frac> {
    Frac::from_expr(&parse_with(text, table)?)
}
