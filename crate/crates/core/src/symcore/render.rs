//! Canonical text, LaTeX and JSON output.

use std::fmt::{self, Write};

use serde_json::{json, Value};

use super::expr::{Expr, Func};
use super::frac::Frac;
use super::scalar::Scalar;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Style {
    Canonical,
    Latex,
    Json,
}

impl std::str::FromStr for Style {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "canonical" => Ok(Style::Canonical),
            "latex" => Ok(Style::Latex),
            "json" => Ok(Style::Json),
            _ => Err(format!("unknown style `{s}`")),
        }
    }
}

pub fn render(e: &Expr, style: Style) -> String {
    match style {
        Style::Canonical => {
            let mut out = String::new();
            canonical(e, 0, &mut out);
            out
        }
        Style::Latex => {
            let mut out = String::new();
            latex(e, 0, &mut out);
            out
        }
        Style::Json => to_json(e).to_string(),
    }
}

const ADD: u8 = 1;
const MUL: u8 = 2;
const NEG: u8 = 3;
const POW: u8 = 4;

/// A term printed after a binary minus, if it has an extractable sign.
fn negated(e: &Expr) -> Option<Expr> {
    match e {
        Expr::Num(c) if c.is_negative() => Some(Expr::Num(-c)),
        Expr::Mul(xs) => match xs.first() {
            Some(Expr::Num(c)) if c.is_negative() => {
                let c = -c;
                let mut rest: Vec<Expr> = xs[1..].to_vec();
                if !c.is_one() {
                    rest.insert(0, Expr::Num(c));
                }
                Some(match rest.len() {
                    0 => Expr::int(1),
                    1 => rest.pop().unwrap(),
                    _ => Expr::Mul(rest),
                })
            }
            _ => None,
        },
        _ => None,
    }
}

fn precedence(e: &Expr) -> u8 {
    match e {
        Expr::Add(xs) if xs.len() > 1 => ADD,
        Expr::Mul(_) | Expr::Div(..) => MUL,
        Expr::Num(c) if c.is_negative() => NEG,
        Expr::Num(c) if !c.is_integer() => MUL,
        Expr::Pow(..) => POW,
        _ => u8::MAX,
    }
}

fn canonical(e: &Expr, min: u8, out: &mut String) {
    if precedence(e) < min {
        out.push('(');
        canonical(e, 0, out);
        out.push(')');
        return;
    }
    match e {
        Expr::Num(c) => write!(out, "{c}").unwrap(),
        Expr::Var(v) => out.push_str(v.name()),
        Expr::Jet(j) => write!(out, "{j}").unwrap(),
        Expr::Func(f, a) => {
            out.push_str(f.name());
            out.push('(');
            canonical(a, 0, out);
            out.push(')');
        }
        Expr::Add(xs) => {
            if xs.is_empty() {
                out.push('0');
            }
            for (i, x) in xs.iter().enumerate() {
                match (i, negated(x)) {
                    (0, _) => canonical(x, ADD, out),
                    (_, Some(n)) => {
                        out.push_str(" - ");
                        canonical(&n, MUL, out);
                    }
                    (_, None) => {
                        out.push_str(" + ");
                        canonical(x, ADD + 1, out);
                    }
                }
            }
        }
        Expr::Mul(xs) => {
            if xs.is_empty() {
                out.push('1');
            }
            let mut rest = &xs[..];
            if let [Expr::Num(c), tail @ ..] = &xs[..] {
                if !tail.is_empty() && (c.is_one() || (-c).is_one()) {
                    if c.is_negative() {
                        out.push('-');
                    }
                    rest = tail;
                }
            }
            join_product(rest, out);
        }
        Expr::Pow(b, k) => {
            canonical(b, POW + 1, out);
            write!(out, "^{k}").unwrap();
        }
        Expr::Div(a, b) => {
            canonical(a, MUL, out);
            out.push('/');
            canonical(b, POW, out);
        }
    }
}

fn join_product(xs: &[Expr], out: &mut String) {
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            out.push('*');
        }
        // Only the leading factor may carry a sign or a fraction bar.
        let min = if i == 0 { MUL } else { POW };
        canonical(x, min, out);
    }
}

fn latex_scalar(c: &Scalar, out: &mut String) {
    if c.is_integer() {
        write!(out, "{c}").unwrap();
    } else {
        let sign = if c.is_negative() { "-" } else { "" };
        write!(out, "{sign}\\frac{{{}}}{{{}}}", c.numer().magnitude(), c.denom()).unwrap();
    }
}

fn latex(e: &Expr, min: u8, out: &mut String) {
    if precedence(e) < min && !matches!(e, Expr::Div(..)) {
        out.push_str("\\left(");
        latex(e, 0, out);
        out.push_str("\\right)");
        return;
    }
    match e {
        Expr::Num(c) => latex_scalar(c, out),
        Expr::Var(v) => out.push_str(v.latex()),
        Expr::Jet(j) => out.push_str(&j.latex()),
        Expr::Func(Func::Sqrt, a) => {
            out.push_str("\\sqrt{");
            latex(a, 0, out);
            out.push('}');
        }
        Expr::Func(f, a) => {
            out.push_str(f.latex());
            out.push_str("\\left(");
            latex(a, 0, out);
            out.push_str("\\right)");
        }
        Expr::Add(xs) => {
            for (i, x) in xs.iter().enumerate() {
                match (i, negated(x)) {
                    (0, _) => latex(x, ADD, out),
                    (_, Some(n)) => {
                        out.push_str(" - ");
                        latex(&n, MUL, out);
                    }
                    (_, None) => {
                        out.push_str(" + ");
                        latex(x, ADD + 1, out);
                    }
                }
            }
        }
        Expr::Mul(xs) => {
            let mut rest = &xs[..];
            if let [Expr::Num(c), tail @ ..] = &xs[..] {
                if !tail.is_empty() && (c.is_one() || (-c).is_one()) {
                    if c.is_negative() {
                        out.push('-');
                    }
                    rest = tail;
                }
            }
            for (i, x) in rest.iter().enumerate() {
                if i > 0 {
                    out.push_str(" \\, ");
                }
                latex(x, if i == 0 { MUL } else { POW }, out);
            }
        }
        Expr::Pow(b, k) => {
            out.push('{');
            latex(b, POW + 1, out);
            write!(out, "}}^{{{k}}}").unwrap();
        }
        Expr::Div(a, b) => {
            out.push_str("\\frac{");
            latex(a, 0, out);
            out.push_str("}{");
            latex(b, 0, out);
            out.push('}');
        }
    }
}

pub fn to_json(e: &Expr) -> Value {
    match e {
        Expr::Num(c) => json!({"kind": "num", "value": c.to_string()}),
        Expr::Var(v) => json!({"kind": "var", "name": v.name()}),
        Expr::Jet(j) => json!({
            "kind": "jet",
            "function": j.func().name(),
            "derivatives": j.derivatives().iter().map(|v| v.name()).collect::<Vec<_>>(),
        }),
        Expr::Func(f, a) => json!({"kind": "func", "name": f.name(), "arg": to_json(a)}),
        Expr::Add(xs) => json!({"kind": "add", "terms": xs.iter().map(to_json).collect::<Vec<_>>()}),
        Expr::Mul(xs) => {
            json!({"kind": "mul", "factors": xs.iter().map(to_json).collect::<Vec<_>>()})
        }
        Expr::Pow(b, k) => json!({"kind": "pow", "base": to_json(b), "exponent": k}),
        Expr::Div(a, b) => json!({"kind": "div", "num": to_json(a), "den": to_json(b)}),
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self, Style::Canonical))
    }
}

impl fmt::Display for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(&self.to_expr(), Style::Canonical))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::parse::parse;
    use crate::symcore::symbols::Var;

    fn canon(text: &str) -> String {
        Frac::from_expr(&parse(text).unwrap()).unwrap().to_string()
    }

    #[test]
    fn canonical_text() {
        assert_eq!(canon("cos(lam)^2 + sin(lam)^2"), "1");
        assert_eq!(canon("cos(lam)^2"), "1 - sin(lam)^2");
        assert_eq!(canon("u_p1p2 - 2*v_p1"), "-2*v_p1 + u_p1p2");
        assert_eq!(canon("x1/2"), "1/2*x1");
        assert_eq!(canon("-x1*x2"), "-x1*x2");
        assert_eq!(canon("1/(x1 + 1)"), "1/(1 + x1)");
        assert_eq!(canon("(x1 - 3)^2"), "9 - 6*x1 + x1^2");
    }

    #[test]
    fn latex_and_json() {
        let j = Expr::u(&[Var::P1, Var::P1, Var::P2]);
        assert_eq!(render(&j, Style::Latex), "u_{p^1p^1p^2}");
        assert_eq!(render(&j, Style::Canonical), "u_p1p1p2");
        let v = to_json(&parse("sin(lam)/2").unwrap());
        assert_eq!(v["kind"], "div");
        assert_eq!(v["num"]["kind"], "func");
        let l = render(&parse("x1/2 - sin(lam)").unwrap(), Style::Latex);
        assert_eq!(l, "\\frac{x^1}{2} - \\sin\\left(\\lambda\\right)");
    }
}
