//! Floating-point evaluation.

use std::collections::BTreeMap;

use super::expr::Expr;
use super::frac::Frac;
use super::poly::{Atom, Poly};
use super::symbols::{FunctionSymbol, JetSymbol, Var};
use crate::error::{Error, Result};

/// Values for coordinates, concrete bodies for function symbols, and
/// optionally raw values for individual jets.
#[derive(Clone, Debug, Default)]
pub struct Assignment {
    pub vars: BTreeMap<Var, f64>,
    pub bodies: BTreeMap<String, (FunctionSymbol, Frac)>,
    pub jets: BTreeMap<JetSymbol, f64>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_var(mut self, v: Var, x: f64) -> Self {
        self.vars.insert(v, x);
        self
    }

    pub fn with_body(mut self, f: FunctionSymbol, body: Frac) -> Self {
        self.bodies.insert(f.name().to_string(), (f, body));
        self
    }

    pub fn with_jet(mut self, j: JetSymbol, x: f64) -> Self {
        self.jets.insert(j, x);
        self
    }

    fn jet_value(&self, j: &JetSymbol) -> Result<f64> {
        if let Some(x) = self.jets.get(j) {
            return Ok(*x);
        }
        let (_, body) = self
            .bodies
            .get(j.func().name())
            .ok_or_else(|| Error::Unresolved(j.to_string()))?;
        let mut d = body.clone();
        for v in j.derivatives() {
            d = d.diff(v)?;
        }
        d.eval(self)
    }
}

fn checked(x: f64, what: &dyn Fn() -> String) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::Domain(what()))
    }
}

impl Expr {
    /// Evaluates the tree as written, without normalizing.
    pub fn eval(&self, a: &Assignment) -> Result<f64> {
        match self {
            Expr::Num(c) => Ok(c.to_f64()),
            Expr::Var(v) => a
                .vars
                .get(v)
                .copied()
                .ok_or_else(|| Error::Unresolved(v.name().to_string())),
            Expr::Jet(j) => a.jet_value(j),
            Expr::Func(f, arg) => f.apply(arg.eval(a)?).map_err(Error::Domain),
            Expr::Add(xs) => xs.iter().try_fold(0.0, |acc, x| Ok(acc + x.eval(a)?)),
            Expr::Mul(xs) => xs.iter().try_fold(1.0, |acc, x| Ok(acc * x.eval(a)?)),
            Expr::Pow(b, k) => {
                let x = b.eval(a)?;
                if x == 0.0 && *k < 0 {
                    return Err(Error::DivisionByZero);
                }
                checked(x.powi(*k as i32), &|| format!("{self}"))
            }
            Expr::Div(n, d) => {
                let d = d.eval(a)?;
                if d == 0.0 {
                    return Err(Error::DivisionByZero);
                }
                Ok(n.eval(a)? / d)
            }
        }
    }
}

fn atom_eval(atom: &Atom, a: &Assignment) -> Result<f64> {
    match atom {
        Atom::Var(v) => a
            .vars
            .get(v)
            .copied()
            .ok_or_else(|| Error::Unresolved(v.name().to_string())),
        Atom::Jet(j) => a.jet_value(j),
        Atom::Func(f, arg) => f.apply(arg.eval(a)?).map_err(Error::Domain),
    }
}

impl Poly {
    pub fn eval(&self, a: &Assignment) -> Result<f64> {
        let mut sum = 0.0;
        for (m, c) in self.terms() {
            let mut t = c.to_f64();
            for (atom, e) in m.factors() {
                t *= atom_eval(atom, a)?.powi(*e as i32);
            }
            sum += t;
        }
        Ok(sum)
    }
}

impl Frac {
    pub fn eval(&self, a: &Assignment) -> Result<f64> {
        let mut den = 1.0;
        for (f, e) in self.den() {
            den *= f.eval(a)?.powi(*e as i32);
        }
        if den == 0.0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.num().eval(a)? / den)
    }
}

/// Evaluates `e` after substituting the assignment's function bodies.
pub fn eval_num(e: &Frac, a: &Assignment) -> Result<f64> {
    let mut e = e.clone();
    for (f, body) in a.bodies.values() {
        e = e.substitute_function(f, body)?;
    }
    e.eval(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::expr::Func;

    #[test]
    fn basic_values() {
        let a = Assignment::new().with_var(Var::Lam, 0.0);
        let e = Expr::sin(Expr::var(Var::Lam));
        assert_eq!(e.eval(&a).unwrap(), 0.0);
        let x = Expr::ratio(1, 2);
        let v = Expr::func(Func::Arctanh, x).eval(&a).unwrap();
        assert!((v - 0.5f64.atanh()).abs() < 1e-15);
        assert!((v - 0.549_306_144_334_054_8).abs() < 1e-15);
    }

    #[test]
    fn domain_and_unresolved() {
        let a = Assignment::new().with_var(Var::X1, -1.0);
        let e = Expr::func(Func::Ln, Expr::var(Var::X1));
        assert!(matches!(e.eval(&a), Err(Error::Domain(_))));
        assert!(matches!(Expr::var(Var::X2).eval(&a), Err(Error::Unresolved(_))));
        assert!(matches!(Expr::u(&[]).eval(&a), Err(Error::Unresolved(_))));
    }

    #[test]
    fn jets_from_bodies() {
        let body = Frac::var(Var::P1).pow(3).unwrap();
        let a = Assignment::new()
            .with_var(Var::P1, 2.0)
            .with_body(FunctionSymbol::u(), body);
        let e = Expr::u(&[Var::P1, Var::P1]);
        assert_eq!(e.eval(&a).unwrap(), 12.0);
        assert_eq!(eval_num(&Frac::u(&[Var::P1]), &a).unwrap(), 12.0);
    }
}
