//! Rational functions with factored, jet-free denominators.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::expr::{Expr, Func};
use super::poly::{Atom, Monomial, Poly};
use super::scalar::Scalar;
use super::symbols::{FunctionSymbol, JetSymbol, Var};
use crate::error::{Error, Result};

/// `num / prod(f^e)` where every factor `f` is a monic, jet-free polynomial
/// with no monomial content other than itself and no factor divides `num`
/// exactly.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Frac {
    num: Poly,
    den: BTreeMap<Poly, u32>,
}

impl From<Poly> for Frac {
    fn from(num: Poly) -> Self {
        Frac {
            num,
            den: BTreeMap::new(),
        }
    }
}

impl From<i64> for Frac {
    fn from(n: i64) -> Self {
        Frac::int(n)
    }
}

impl From<Var> for Frac {
    fn from(v: Var) -> Self {
        Frac::var(v)
    }
}

impl Frac {
    pub fn zero() -> Self {
        Frac::default()
    }

    pub fn one() -> Self {
        Frac::from(Poly::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Frac::from(Poly::constant(c))
    }

    pub fn int(n: i64) -> Self {
        Frac::constant(Scalar::from_int(n))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Frac::constant(Scalar::ratio(n, d))
    }

    pub fn var(v: Var) -> Self {
        Frac::from(Poly::from_atom(Atom::Var(v)))
    }

    pub fn jet(j: JetSymbol) -> Self {
        Frac::from(Poly::from_atom(Atom::Jet(j)))
    }

    /// Jet of a function symbol; panics on a dependency violation.
    pub fn jet_of(f: &FunctionSymbol, ders: &[Var]) -> Self {
        Frac::jet(JetSymbol::new(f.clone(), ders).expect("derivative outside dependency set"))
    }

    pub fn u(ders: &[Var]) -> Self {
        Frac::jet_of(&FunctionSymbol::u(), ders)
    }

    pub fn v(ders: &[Var]) -> Self {
        Frac::jet_of(&FunctionSymbol::v(), ders)
    }

    pub fn atom(a: Atom) -> Self {
        Frac::from(Poly::from_atom(a))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &BTreeMap<Poly, u32> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_empty()
    }

    pub fn constant_value(&self) -> Option<Scalar> {
        if self.is_poly() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn is_var(&self, v: Var) -> bool {
        self.is_poly()
            && self.num.len() == 1
            && self.num.leading().is_some_and(|(m, c)| {
                c.is_one() && m.factors() == [(Atom::Var(v), 1)]
            })
    }

    /// The expanded denominator.
    pub fn den_poly(&self) -> Poly {
        self.den
            .iter()
            .fold(Poly::one(), |acc, (f, e)| acc.mul(&f.pow(*e)))
    }

    pub fn has_jets(&self) -> bool {
        self.num.has_jets()
    }

    pub fn depends_on(&self, v: Var) -> bool {
        self.num.depends_on(v) || self.den.keys().any(|f| f.depends_on(v))
    }

    /// True if the value changes along `lam` only through `sin`, `cos`,
    /// `sinh`, `cosh` of `lam` in the numerator.
    pub fn lambda_free(&self) -> bool {
        !self.depends_on(Var::Lam)
    }

    fn leading_negative(&self) -> bool {
        self.num.leading().is_some_and(|(_, c)| c.is_negative())
    }

    fn cancel(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        let factors: Vec<Poly> = self.den.keys().cloned().collect();
        for f in factors {
            let mut e = self.den[&f];
            while e > 0 {
                match self.num.divide_exact(&f) {
                    Some(q) => {
                        self.num = q;
                        e -= 1;
                    }
                    None => break,
                }
            }
            if e == 0 {
                self.den.remove(&f);
            } else {
                self.den.insert(f, e);
            }
        }
    }

    /// Divides by a polynomial: splits off the numeric and monomial content
    /// and records the remaining factor.
    fn push_factor(&mut self, g: &Poly) -> Result<()> {
        if g.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if g.has_jets() {
            return Err(Error::JetDenominator(Frac::from(g.clone()).to_string()));
        }
        let lc = g.leading().unwrap().1.clone();
        self.num = self.num.scale(&lc.recip());
        let g = g.scale(&lc.recip());
        let content = g.monomial_content();
        for (a, e) in content.factors() {
            *self.den.entry(Poly::from_atom(a.clone())).or_default() += e;
        }
        let rest = if content.is_one() {
            g
        } else {
            g.divide_exact(&Poly::term(content, Scalar::one()))
                .expect("monomial content divides")
        };
        if rest.constant_value().is_none() {
            *self.den.entry(rest).or_default() += 1;
        }
        Ok(())
    }

    pub fn add(&self, other: &Frac) -> Frac {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            let mut out = Frac {
                num: self.num.add(&other.num),
                den: self.den.clone(),
            };
            out.cancel();
            return out;
        }
        let mut lcm = self.den.clone();
        for (f, e) in &other.den {
            let slot = lcm.entry(f.clone()).or_default();
            *slot = (*slot).max(*e);
        }
        let cofactor = |den: &BTreeMap<Poly, u32>| {
            lcm.iter().fold(Poly::one(), |acc, (f, e)| {
                let k = e - den.get(f).copied().unwrap_or(0);
                if k == 0 {
                    acc
                } else {
                    acc.mul(&f.pow(k))
                }
            })
        };
        let num = self
            .num
            .mul(&cofactor(&self.den))
            .add(&other.num.mul(&cofactor(&other.den)));
        let mut out = Frac { num, den: lcm };
        out.cancel();
        out
    }

    pub fn sub(&self, other: &Frac) -> Frac {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Frac {
        Frac {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, k: &Scalar) -> Frac {
        if k.is_zero() {
            return Frac::zero();
        }
        Frac {
            num: self.num.scale(k),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Frac) -> Frac {
        if self.is_zero() || other.is_zero() {
            return Frac::zero();
        }
        let mut den = self.den.clone();
        for (f, e) in &other.den {
            *den.entry(f.clone()).or_default() += e;
        }
        let cross = !self.den.is_empty() || !other.den.is_empty();
        let mut out = Frac {
            num: self.num.mul(&other.num),
            den,
        };
        if cross {
            out.cancel();
        }
        out
    }

    pub fn mul_poly(&self, p: &Poly) -> Frac {
        let mut out = Frac {
            num: self.num.mul(p),
            den: self.den.clone(),
        };
        if !out.den.is_empty() {
            out.cancel();
        }
        out
    }

    pub fn recip(&self) -> Result<Frac> {
        Frac::one().div(self)
    }

    pub fn div(&self, other: &Frac) -> Result<Frac> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if other.has_jets() {
            return Err(Error::JetDenominator(other.to_string()));
        }
        let mut out = self.mul_poly(&other.den_poly());
        if out.is_zero() {
            return Ok(out);
        }
        out.push_factor(&other.num)?;
        out.cancel();
        Ok(out)
    }

    pub fn pow(&self, k: i64) -> Result<Frac> {
        if k < 0 {
            return self.recip()?.pow(-k);
        }
        if self.is_poly() {
            return Ok(Frac::from(self.num.pow(k as u32)));
        }
        let mut result = Frac::one();
        for _ in 0..k {
            result = result.mul(self);
        }
        Ok(result)
    }

    /// `f(arg)` with constant folding at 0, sign normalization for odd and
    /// even functions, and `exp(q*lam) = (cosh(lam) + sinh(lam))^q`.
    pub fn func(f: Func, arg: Frac) -> Result<Frac> {
        if let Some(c) = arg.constant_value() {
            if c.is_zero() {
                return match f {
                    Func::Sin | Func::Sinh | Func::Arctan | Func::Arctanh | Func::Sqrt => {
                        Ok(Frac::zero())
                    }
                    Func::Cos | Func::Cosh | Func::Exp => Ok(Frac::one()),
                    Func::Ln => Err(Error::Domain("ln(0)".into())),
                };
            }
            if c.is_one() && matches!(f, Func::Ln | Func::Sqrt) {
                return Ok(if f == Func::Ln { Frac::zero() } else { Frac::one() });
            }
        }
        let atom = |a: Frac| Frac::atom(Atom::Func(f, Arc::new(a)));
        match f {
            Func::Sin | Func::Sinh | Func::Arctan | Func::Arctanh if arg.leading_negative() => {
                Ok(atom(arg.neg()).neg())
            }
            Func::Cos | Func::Cosh if arg.leading_negative() => Ok(atom(arg.neg())),
            Func::Exp if arg.is_poly() => {
                let lam = Monomial::atom(Atom::Var(Var::Lam), 1);
                let q = arg.num.coefficient(&lam);
                let Some(q) = q.to_i64().filter(|q| *q != 0) else {
                    return Ok(atom(arg));
                };
                let cosh = Frac::atom(Atom::lam_trig(Func::Cosh));
                let sinh = Frac::atom(Atom::lam_trig(Func::Sinh));
                let base = if q > 0 { cosh.add(&sinh) } else { cosh.sub(&sinh) };
                let lam_part = base.pow(q.abs())?;
                let rest = arg.sub(&Frac::var(Var::Lam).scale(&Scalar::from_int(q)));
                Ok(Frac::func(Func::Exp, rest)?.mul(&lam_part))
            }
            _ => Ok(atom(arg)),
        }
    }

    pub fn diff(&self, v: Var) -> Result<Frac> {
        let mut cache = HashMap::new();
        let dnum = poly_diff(&self.num, v, &mut cache)?;
        let base = Frac {
            num: Poly::one(),
            den: self.den.clone(),
        };
        let mut result = dnum.mul(&base);
        for (f, e) in &self.den {
            let df = poly_diff(f, v, &mut cache)?;
            if df.is_zero() {
                continue;
            }
            let mut term = Frac {
                num: self.num.scale(&Scalar::from_int(-(*e as i64))),
                den: self.den.clone(),
            };
            *term.den.get_mut(f).unwrap() += 1;
            result = result.add(&term.mul(&df));
        }
        Ok(result)
    }

    /// Applies a ring homomorphism defined on atoms. Atoms for which `rule`
    /// returns `None` are kept, with transcendental arguments rewritten
    /// recursively.
    pub fn map_atoms(&self, rule: &mut dyn FnMut(&Atom) -> Result<Option<Frac>>) -> Result<Frac> {
        let mut cache: HashMap<Atom, Frac> = HashMap::new();
        let num = map_poly(&self.num, rule, &mut cache)?;
        let mut den = Frac::one();
        for (f, e) in &self.den {
            den = den.mul(&map_poly(f, rule, &mut cache)?.pow(*e as i64)?);
        }
        num.div(&den)
    }

    /// Replaces `v` by `value`.
    pub fn substitute_var(&self, v: Var, value: &Frac) -> Result<Frac> {
        self.map_atoms(&mut |a| {
            Ok(match a {
                Atom::Var(w) if *w == v => Some(value.clone()),
                _ => None,
            })
        })
    }

    /// Replaces every jet of `f` by the matching derivative of `body`.
    pub fn substitute_function(&self, f: &FunctionSymbol, body: &Frac) -> Result<Frac> {
        for v in Var::ALL {
            if !f.deps().contains(v) && body.depends_on(v) {
                return Err(Error::Dependency {
                    function: f.name().to_string(),
                    var: v.name().to_string(),
                });
            }
        }
        let mut derivs: HashMap<JetSymbol, Frac> = HashMap::new();
        derivs.insert(JetSymbol::base(f.clone()), body.clone());
        self.map_atoms(&mut |a| match a {
            Atom::Jet(j) if j.func() == f => body_derivative(j, &mut derivs).map(Some),
            _ => Ok(None),
        })
    }

    pub fn to_expr(&self) -> Expr {
        let num = poly_to_expr(&self.num);
        if self.den.is_empty() {
            return num;
        }
        let mut factors: Vec<Expr> = self
            .den
            .iter()
            .map(|(f, e)| {
                let base = poly_to_expr(f);
                if *e == 1 {
                    base
                } else {
                    base.pow(*e as i64)
                }
            })
            .collect();
        let den = if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            Expr::Mul(factors)
        };
        num.div(den)
    }

    pub fn from_expr(e: &Expr) -> Result<Frac> {
        Ok(match e {
            Expr::Num(c) => Frac::constant(c.clone()),
            Expr::Var(v) => Frac::var(*v),
            Expr::Jet(j) => Frac::jet(j.clone()),
            Expr::Func(f, a) => Frac::func(*f, Frac::from_expr(a)?)?,
            Expr::Add(xs) => {
                let mut acc = Frac::zero();
                for x in xs {
                    acc = acc.add(&Frac::from_expr(x)?);
                }
                acc
            }
            Expr::Mul(xs) => {
                let mut acc = Frac::one();
                for x in xs {
                    match x {
                        Expr::Div(a, b) => {
                            acc = acc.mul(&Frac::from_expr(a)?).div_by_expr(b)?;
                        }
                        _ => acc = acc.mul(&Frac::from_expr(x)?),
                    }
                }
                acc
            }
            Expr::Pow(b, k) if *k < 0 => Frac::one().div_by_expr(&b.as_ref().clone().pow(-k))?,
            Expr::Pow(b, k) => Frac::from_expr(b)?.pow(*k)?,
            Expr::Div(a, b) => Frac::from_expr(a)?.div_by_expr(b)?,
        })
    }

    /// Division by an expression, one factor at a time, so that a factored
    /// denominator survives a round trip through [`Frac::to_expr`].
    fn div_by_expr(self, b: &Expr) -> Result<Frac> {
        match b {
            Expr::Mul(xs) => xs.iter().try_fold(self, |acc, x| acc.div_by_expr(x)),
            Expr::Pow(base, k) if *k > 0 => (0..*k).try_fold(self, |acc, _| acc.div_by_expr(base)),
            Expr::Div(p, q) => Ok(self.div_by_expr(p)?.mul(&Frac::from_expr(q)?)),
            _ => self.div(&Frac::from_expr(b)?),
        }
    }
}

fn body_derivative(j: &JetSymbol, derivs: &mut HashMap<JetSymbol, Frac>) -> Result<Frac> {
    if let Some(d) = derivs.get(j) {
        return Ok(d.clone());
    }
    let v = j.derivatives()[j.order() - 1];
    let parent = j.lowered(v).expect("derivative present");
    let d = body_derivative(&parent, derivs)?.diff(v)?;
    derivs.insert(j.clone(), d.clone());
    Ok(d)
}

fn atom_diff(a: &Atom, v: Var) -> Result<Frac> {
    Ok(match a {
        Atom::Var(w) => {
            if *w == v {
                Frac::one()
            } else {
                Frac::zero()
            }
        }
        Atom::Jet(j) => j.derivative(v).map(Frac::jet).unwrap_or_default(),
        Atom::Func(f, arg) => {
            let darg = arg.diff(v)?;
            if darg.is_zero() {
                return Ok(Frac::zero());
            }
            let x = arg.as_ref().clone();
            let outer = match f {
                Func::Sin => Frac::func(Func::Cos, x)?,
                Func::Cos => Frac::func(Func::Sin, x)?.neg(),
                Func::Sinh => Frac::func(Func::Cosh, x)?,
                Func::Cosh => Frac::func(Func::Sinh, x)?,
                Func::Exp => Frac::atom(a.clone()),
                Func::Ln => x.recip()?,
                Func::Arctan => Frac::one().add(&x.mul(&x)).recip()?,
                Func::Arctanh => Frac::one().sub(&x.mul(&x)).recip()?,
                Func::Sqrt => Frac::atom(a.clone()).scale(&Scalar::from_int(2)).recip()?,
            };
            outer.mul(&darg)
        }
    })
}

fn poly_diff(p: &Poly, v: Var, cache: &mut HashMap<Atom, Frac>) -> Result<Frac> {
    let mut poly_part = Poly::zero();
    let mut frac_part = Frac::zero();
    for (m, c) in p.terms() {
        for (i, (a, e)) in m.factors().iter().enumerate() {
            if !a.depends_on(v) {
                continue;
            }
            let da = match cache.get(a) {
                Some(d) => d.clone(),
                None => {
                    let d = atom_diff(a, v)?;
                    cache.insert(a.clone(), d.clone());
                    d
                }
            };
            if da.is_zero() {
                continue;
            }
            let rest = Monomial::from_pairs(
                m.factors()
                    .iter()
                    .enumerate()
                    .map(|(k, (b, f))| (b.clone(), if k == i { f - 1 } else { *f })),
            );
            let coeff = c * &Scalar::from_int(*e as i64);
            if da.is_poly() {
                poly_part.add_assign(&da.num().mul_term(&rest, &coeff));
            } else {
                frac_part = frac_part.add(&da.mul_poly(&Poly::term(rest, coeff)));
            }
        }
    }
    Ok(Frac::from(poly_part).add(&frac_part))
}

fn map_poly(
    p: &Poly,
    rule: &mut dyn FnMut(&Atom) -> Result<Option<Frac>>,
    cache: &mut HashMap<Atom, Frac>,
) -> Result<Frac> {
    let mut poly_part = Poly::zero();
    let mut frac_part = Frac::zero();
    for (m, c) in p.terms() {
        let mut term = Frac::constant(c.clone());
        for (a, e) in m.factors() {
            let image = match cache.get(a) {
                Some(img) => img.clone(),
                None => {
                    let img = match rule(a)? {
                        Some(img) => img,
                        None => match a {
                            Atom::Func(f, arg) => Frac::func(*f, arg.map_atoms(rule)?)?,
                            _ => Frac::atom(a.clone()),
                        },
                    };
                    cache.insert(a.clone(), img.clone());
                    img
                }
            };
            term = term.mul(&image.pow(*e as i64)?);
            if term.is_zero() {
                break;
            }
        }
        if term.is_poly() {
            poly_part.add_assign(term.num());
        } else {
            frac_part = frac_part.add(&term);
        }
    }
    Ok(Frac::from(poly_part).add(&frac_part))
}

fn atom_to_expr(a: &Atom) -> Expr {
    match a {
        Atom::Var(v) => Expr::Var(*v),
        Atom::Jet(j) => Expr::Jet(j.clone()),
        Atom::Func(f, arg) => Expr::func(*f, arg.to_expr()),
    }
}

fn term_to_expr(m: &Monomial, c: &Scalar) -> Expr {
    if m.is_one() {
        return Expr::Num(c.clone());
    }
    let mut items = Vec::with_capacity(m.factors().len() + 1);
    if !c.is_one() {
        items.push(Expr::Num(c.clone()));
    }
    for (a, e) in m.factors() {
        let base = atom_to_expr(a);
        items.push(if *e == 1 { base } else { base.pow(*e as i64) });
    }
    if items.len() == 1 {
        items.pop().unwrap()
    } else {
        Expr::Mul(items)
    }
}

pub(crate) fn poly_to_expr(p: &Poly) -> Expr {
    let mut terms: Vec<Expr> = p.terms().map(|(m, c)| term_to_expr(m, c)).collect();
    match terms.len() {
        0 => Expr::int(0),
        1 => terms.pop().unwrap(),
        _ => Expr::Add(terms),
    }
}

macro_rules! frac_op {
    ($trait:ident, $method:ident, $inner:ident) => {
        impl std::ops::$trait<&Frac> for &Frac {
            type Output = Frac;
            fn $method(self, rhs: &Frac) -> Frac {
                Frac::$inner(self, rhs)
            }
        }
        impl std::ops::$trait<Frac> for Frac {
            type Output = Frac;
            fn $method(self, rhs: Frac) -> Frac {
                Frac::$inner(&self, &rhs)
            }
        }
        impl std::ops::$trait<&Frac> for Frac {
            type Output = Frac;
            fn $method(self, rhs: &Frac) -> Frac {
                Frac::$inner(&self, rhs)
            }
        }
    };
}

frac_op!(Add, add, add);
frac_op!(Sub, sub, sub);
frac_op!(Mul, mul, mul);

impl std::ops::Neg for Frac {
    type Output = Frac;
    fn neg(self) -> Frac {
        Frac::neg(&self)
    }
}

impl std::ops::Neg for &Frac {
    type Output = Frac;
    fn neg(self) -> Frac {
        Frac::neg(self)
    }
}

impl std::ops::Mul<Frac> for i64 {
    type Output = Frac;
    fn mul(self, rhs: Frac) -> Frac {
        rhs.scale(&Scalar::from_int(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lam() -> Frac {
        Frac::var(Var::Lam)
    }

    fn sin() -> Frac {
        Frac::func(Func::Sin, lam()).unwrap()
    }

    fn cos() -> Frac {
        Frac::func(Func::Cos, lam()).unwrap()
    }

    #[test]
    fn odd_even_arguments() {
        let neg = lam().neg();
        assert_eq!(Frac::func(Func::Sin, neg.clone()).unwrap(), sin().neg());
        assert_eq!(Frac::func(Func::Cos, neg).unwrap(), cos());
        assert_eq!(Frac::func(Func::Cosh, Frac::zero()).unwrap(), Frac::one());
    }

    #[test]
    fn exponentials_of_lambda() {
        let e = Frac::func(Func::Exp, lam()).unwrap();
        let f = Frac::func(Func::Exp, lam().neg()).unwrap();
        assert_eq!(e.mul(&f), Frac::one());
        let two = Frac::func(Func::Exp, lam().scale(&Scalar::from_int(2))).unwrap();
        assert_eq!(two, e.mul(&e));
    }

    #[test]
    fn cancellation() {
        let x = Frac::var(Var::X1);
        let y = Frac::var(Var::X2);
        let q = x.mul(&x).sub(&y.mul(&y)).div(&x.add(&y)).unwrap();
        assert_eq!(q, x.sub(&y));
        let r = cos().mul(&cos()).div(&Frac::one().add(&sin())).unwrap();
        assert_eq!(r, Frac::one().sub(&sin()));
        let s = x.div(&y).unwrap().mul(&y.div(&x).unwrap());
        assert_eq!(s, Frac::one());
    }

    #[test]
    fn jet_denominators_are_rejected() {
        let u = Frac::u(&[Var::P1]);
        assert!(matches!(Frac::one().div(&u), Err(Error::JetDenominator(_))));
        assert!(matches!(Frac::one().div(&Frac::zero()), Err(Error::DivisionByZero)));
    }

    #[test]
    fn quotient_rule() {
        let f = Frac::one().div(&lam().add(&Frac::one())).unwrap();
        let d = f.diff(Var::Lam).unwrap();
        let expected = f.mul(&f).neg();
        assert_eq!(d, expected);
        let tan = sin().div(&cos()).unwrap();
        let dtan = tan.diff(Var::Lam).unwrap();
        let sec2 = Frac::one().div(&cos().mul(&cos())).unwrap();
        assert!(dtan.sub(&sec2).is_zero());
    }

    #[test]
    fn chain_rule_on_jets() {
        let u = Frac::u(&[Var::P1]);
        let e = Frac::func(Func::Sin, u.clone()).unwrap();
        let d = e.diff(Var::P2).unwrap();
        let expected = Frac::func(Func::Cos, u).unwrap().mul(&Frac::u(&[Var::P1, Var::P2]));
        assert_eq!(d, expected);
    }

    #[test]
    fn function_substitution() {
        let body = Frac::var(Var::P1).pow(3).unwrap();
        let e = Frac::u(&[Var::P1, Var::P1]);
        let out = e.substitute_function(&FunctionSymbol::u(), &body).unwrap();
        assert_eq!(out, Frac::var(Var::P1).scale(&Scalar::from_int(6)));
        let bad = Frac::var(Var::T);
        assert!(e.substitute_function(&FunctionSymbol::u(), &bad).is_err());
    }
}
