//! The expression tree produced by the parser and by [`Frac::to_expr`].
//!
//! Trees are not canonical. Two trees denote the same function iff their
//! [`Frac`] normal forms agree, see [`super::normalize`].
//!
//! [`Frac`]: super::Frac
//! [`Frac::to_expr`]: super::Frac::to_expr

use std::ops::{Add, Mul, Neg, Sub};

use super::scalar::Scalar;
use super::symbols::{FunctionSymbol, JetSymbol, Var};

/// Transcendental unary atoms.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Func {
    Sin,
    Cos,
    Sinh,
    Cosh,
    Exp,
    Ln,
    Arctan,
    Arctanh,
    Sqrt,
}

impl Func {
    pub const ALL: [Func; 9] = [
        Func::Sin,
        Func::Cos,
        Func::Sinh,
        Func::Cosh,
        Func::Exp,
        Func::Ln,
        Func::Arctan,
        Func::Arctanh,
        Func::Sqrt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Arctan => "arctan",
            Func::Arctanh => "arctanh",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }

    pub fn latex(self) -> &'static str {
        match self {
            Func::Sin => "\\sin",
            Func::Cos => "\\cos",
            Func::Sinh => "\\sinh",
            Func::Cosh => "\\cosh",
            Func::Exp => "\\exp",
            Func::Ln => "\\ln",
            Func::Arctan => "\\arctan",
            Func::Arctanh => "\\operatorname{arctanh}",
            Func::Sqrt => "\\sqrt",
        }
    }

    /// Evaluates on the real principal branch.
    pub fn apply(self, x: f64) -> Result<f64, String> {
        let ok = match self {
            Func::Ln => x > 0.0,
            Func::Arctanh => x.abs() < 1.0,
            Func::Sqrt => x >= 0.0,
            _ => true,
        };
        if !ok || !x.is_finite() {
            return Err(format!("{}({x})", self.name()));
        }
        Ok(match self {
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
            Func::Sinh => x.sinh(),
            Func::Cosh => x.cosh(),
            Func::Exp => x.exp(),
            Func::Ln => x.ln(),
            Func::Arctan => x.atan(),
            Func::Arctanh => x.atanh(),
            Func::Sqrt => x.sqrt(),
        })
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Expr {
    Num(Scalar),
    Var(Var),
    Jet(JetSymbol),
    Func(Func, Box<Expr>),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Pow(Box<Expr>, i64),
    Div(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn int(n: i64) -> Expr {
        Expr::Num(Scalar::from_int(n))
    }

    pub fn ratio(n: i64, d: i64) -> Expr {
        Expr::Num(Scalar::ratio(n, d))
    }

    pub fn var(v: Var) -> Expr {
        Expr::Var(v)
    }

    /// A jet of `f`; panics if a derivative leaves the dependency set, so
    /// this is meant for hard-coded transcriptions.
    pub fn jet(f: &FunctionSymbol, ders: &[Var]) -> Expr {
        Expr::Jet(JetSymbol::new(f.clone(), ders).expect("derivative outside dependency set"))
    }

    pub fn u(ders: &[Var]) -> Expr {
        Expr::jet(&FunctionSymbol::u(), ders)
    }

    pub fn v(ders: &[Var]) -> Expr {
        Expr::jet(&FunctionSymbol::v(), ders)
    }

    pub fn func(f: Func, arg: Expr) -> Expr {
        Expr::Func(f, Box::new(arg))
    }

    pub fn sin(arg: Expr) -> Expr {
        Expr::func(Func::Sin, arg)
    }

    pub fn cos(arg: Expr) -> Expr {
        Expr::func(Func::Cos, arg)
    }

    pub fn sinh(arg: Expr) -> Expr {
        Expr::func(Func::Sinh, arg)
    }

    pub fn cosh(arg: Expr) -> Expr {
        Expr::func(Func::Cosh, arg)
    }

    pub fn exp(arg: Expr) -> Expr {
        Expr::func(Func::Exp, arg)
    }

    pub fn pow(self, k: i64) -> Expr {
        Expr::Pow(Box::new(self), k)
    }

    pub fn div(self, rhs: Expr) -> Expr {
        Expr::Div(Box::new(self), Box::new(rhs))
    }

    pub fn is_zero_literal(&self) -> bool {
        matches!(self, Expr::Num(s) if s.is_zero())
    }

    /// Pre-order traversal.
    pub fn walk(&self, visit: &mut impl FnMut(&Expr)) {
        visit(self);
        match self {
            Expr::Func(_, a) | Expr::Pow(a, _) => a.walk(visit),
            Expr::Add(xs) | Expr::Mul(xs) => xs.iter().for_each(|x| x.walk(visit)),
            Expr::Div(a, b) => {
                a.walk(visit);
                b.walk(visit);
            }
            Expr::Num(_) | Expr::Var(_) | Expr::Jet(_) => {}
        }
    }

    pub fn has_jets(&self) -> bool {
        let mut found = false;
        self.walk(&mut |e| found |= matches!(e, Expr::Jet(_)));
        found
    }
}

impl From<Var> for Expr {
    fn from(v: Var) -> Self {
        Expr::Var(v)
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Self {
        Expr::int(n)
    }
}

impl Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        match self {
            Expr::Add(mut xs) => {
                xs.push(rhs);
                Expr::Add(xs)
            }
            lhs => Expr::Add(vec![lhs, rhs]),
        }
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        self + (-rhs)
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        match self {
            Expr::Mul(mut xs) => {
                xs.push(rhs);
                Expr::Mul(xs)
            }
            lhs => Expr::Mul(vec![lhs, rhs]),
        }
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        match self {
            Expr::Num(s) => Expr::Num(-s),
            e => Expr::Mul(vec![Expr::int(-1), e]),
        }
    }
}

impl Mul<Expr> for i64 {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::int(self) * rhs
    }
}
