//! Sparse polynomials over atoms.
//!
//! A [`Poly`] is reduced: no monomial carries `cos(a)^2`, `cosh(a)^2` or
//! `sqrt(p)^2` for a polynomial `p`. Under that reduction the monomials are
//! linearly independent, which makes `is_zero` a complete test on the
//! polynomial-in-atoms fragment.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use super::expr::Func;
use super::frac::Frac;
use super::scalar::Scalar;
use super::symbols::{JetSymbol, Var};

/// An indeterminate of the polynomial ring. The derived order (variables,
/// then jets, then transcendental atoms) is the canonical atom order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Atom {
    Var(Var),
    Jet(JetSymbol),
    Func(Func, Arc<Frac>),
}

impl Atom {
    pub fn has_jets(&self) -> bool {
        match self {
            Atom::Var(_) => false,
            Atom::Jet(_) => true,
            Atom::Func(_, arg) => arg.has_jets(),
        }
    }

    pub fn depends_on(&self, v: Var) -> bool {
        match self {
            Atom::Var(w) => *w == v,
            Atom::Jet(j) => j.func().deps().contains(v),
            Atom::Func(_, arg) => arg.depends_on(v),
        }
    }

    /// `Some(f)` for `sin(lam)`, `cos(lam)`, `sinh(lam)` and `cosh(lam)`.
    pub fn lambda_trig(&self) -> Option<Func> {
        match self {
            Atom::Func(f @ (Func::Sin | Func::Cos | Func::Sinh | Func::Cosh), arg)
                if arg.is_var(Var::Lam) =>
            {
                Some(*f)
            }
            _ => None,
        }
    }

    pub fn as_jet(&self) -> Option<&JetSymbol> {
        match self {
            Atom::Jet(j) => Some(j),
            _ => None,
        }
    }

    pub fn lam_trig(f: Func) -> Atom {
        Atom::Func(f, Arc::new(Frac::var(Var::Lam)))
    }
}

/// A power product of atoms, kept sorted by atom with positive exponents.
///
/// Ordered lexicographically on exponent vectors, with earlier atoms more
/// significant. This is a monomial order, so it is compatible with
/// multiplication and the largest monomial is a valid leading term.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(Vec<(Atom, u32)>);

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let (mut a, mut b) = (self.0.iter(), other.0.iter());
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((x, ex)), Some((y, ey))) => match x.cmp(y) {
                    Ordering::Equal => match ex.cmp(ey) {
                        Ordering::Equal => continue,
                        o => return o,
                    },
                    // `x` is absent from `other`, i.e. has exponent 0 there.
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn atom(a: Atom, e: u32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(a, e)])
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(Atom, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, a: &Atom) -> u32 {
        self.0
            .binary_search_by(|(x, _)| x.cmp(a))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    /// Builds from arbitrary (atom, exponent) pairs.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Atom, u32)>) -> Self {
        let mut map: BTreeMap<Atom, u32> = BTreeMap::new();
        for (a, e) in pairs {
            *map.entry(a).or_default() += e;
        }
        Monomial(map.into_iter().filter(|(_, e)| *e > 0).collect())
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        if self.0.is_empty() {
            return other.clone();
        }
        if other.0.is_empty() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for (a, e) in &self.0 {
            let mut e = *e;
            if j < other.0.len() && &other.0[j].0 == a {
                if other.0[j].1 > e {
                    return None;
                }
                e -= other.0[j].1;
                j += 1;
            } else if j < other.0.len() && other.0[j].0 < *a {
                return None;
            }
            if e > 0 {
                out.push((a.clone(), e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .filter_map(|(a, e)| {
                    let f = other.exponent(a);
                    (f > 0).then(|| (a.clone(), (*e).min(f)))
                })
                .collect(),
        )
    }

    /// The monomial with the exponent of factor `i` lowered by `by`.
    fn lowered(&self, i: usize, by: u32) -> Monomial {
        let mut out = self.0.clone();
        if out[i].1 == by {
            out.remove(i);
        } else {
            out[i].1 -= by;
        }
        Monomial(out)
    }

    pub fn has_jets(&self) -> bool {
        self.0.iter().any(|(a, _)| a.has_jets())
    }

    /// Total degree counting jet atoms only.
    pub fn jet_degree(&self) -> u32 {
        self.0
            .iter()
            .filter(|(a, _)| matches!(a, Atom::Jet(_)))
            .map(|(_, e)| e)
            .sum()
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Scalar>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        let mut p = Poly::zero();
        p.accumulate(Monomial::one(), c);
        p
    }

    pub fn from_atom(a: Atom) -> Self {
        Poly::term(Monomial::atom(a, 1), Scalar::one())
    }

    /// `c * m`, reduced.
    pub fn term(m: Monomial, c: Scalar) -> Self {
        let mut p = Poly::zero();
        p.push_reduced(m, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> + '_ {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, Scalar)> {
        self.terms.into_iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// The value if the polynomial is a constant (including zero).
    pub fn constant_value(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    /// Adds `c * m` without reduction.
    fn accumulate(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                let sum = &*slot.get() + &c;
                if sum.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
    }

    /// Adds `c * m`, rewriting `cos^2 -> 1 - sin^2`, `cosh^2 -> 1 + sinh^2`
    /// and `sqrt(p)^2 -> p`.
    pub fn push_reduced(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        // Transcendental atoms sort last.
        for (i, (atom, e)) in m.0.iter().enumerate().rev() {
            let Atom::Func(f, arg) = atom else { break };
            if *e < 2 {
                continue;
            }
            match f {
                Func::Cos | Func::Cosh => {
                    let rest = m.lowered(i, 2);
                    let partner = if *f == Func::Cos { Func::Sin } else { Func::Sinh };
                    let sq = Monomial::atom(Atom::Func(partner, arg.clone()), 2);
                    let sign = if *f == Func::Cos { -c.clone() } else { c.clone() };
                    self.push_reduced(rest.mul(&sq), sign);
                    self.push_reduced(rest, c);
                    return;
                }
                Func::Sqrt if arg.is_poly() => {
                    let rest = m.lowered(i, 2);
                    for (am, ac) in arg.num().terms() {
                        self.push_reduced(rest.mul(am), &c * ac);
                    }
                    return;
                }
                _ => {}
            }
        }
        self.accumulate(m, c);
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let (mut big, small) = if self.len() >= other.len() {
            (self.clone(), other)
        } else {
            (other.clone(), self)
        };
        for (m, c) in &small.terms {
            big.accumulate(m.clone(), c.clone());
        }
        big
    }

    pub fn add_assign(&mut self, other: &Poly) {
        for (m, c) in &other.terms {
            self.accumulate(m.clone(), c.clone());
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.accumulate(m.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> Poly {
        self.scale(&Scalar::from_int(-1))
    }

    pub fn scale(&self, k: &Scalar) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.push_reduced(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    /// `self * c * m`, reduced.
    pub fn mul_term(&self, m: &Monomial, c: &Scalar) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            out.push_reduced(m1.mul(m), c1 * c);
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Exact quotient `self / f` in the free polynomial ring, if it exists.
    ///
    /// A successful division is always valid; a failure only means `f` does
    /// not divide `self` before the trigonometric relations are applied.
    pub fn divide_exact(&self, f: &Poly) -> Option<Poly> {
        let (lm_f, lc_f) = f.leading()?;
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if f.len() == 1 {
            let inv = lc_f.recip();
            let mut q = BTreeMap::new();
            for (m, c) in &self.terms {
                q.insert(m.div(lm_f)?, c * &inv);
            }
            return Some(Poly { terms: q });
        }
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((lm, lc)) = rem.leading() {
            let qm = lm.div(lm_f)?;
            let qc = lc / lc_f;
            for (fm, fc) in &f.terms {
                rem.accumulate(qm.mul(fm), -(&qc * fc));
            }
            quot.accumulate(qm, qc);
        }
        Some(quot)
    }

    /// Greatest common monomial divisor of all terms.
    pub fn monomial_content(&self) -> Monomial {
        let mut iter = self.terms.keys();
        let Some(first) = iter.next() else {
            return Monomial::one();
        };
        let mut g = first.clone();
        for m in iter {
            if g.is_one() {
                break;
            }
            g = g.gcd(m);
        }
        g
    }

    pub fn has_jets(&self) -> bool {
        self.terms.keys().any(Monomial::has_jets)
    }

    pub fn depends_on(&self, v: Var) -> bool {
        self.terms
            .keys()
            .any(|m| m.factors().iter().any(|(a, _)| a.depends_on(v)))
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        self.terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|(a, _)| a.clone()))
            .collect()
    }

    /// Maximal jet degree over all monomials.
    pub fn jet_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::jet_degree).max().unwrap_or(0)
    }

    /// Rescales to integer coefficients with unit content and a positive
    /// leading coefficient. Returns the scale factor used.
    pub fn make_primitive(&mut self) -> Scalar {
        if self.is_zero() {
            return Scalar::one();
        }
        let mut k = Scalar::primitive_factor(self.terms.values());
        if self.leading().unwrap().1.is_negative() {
            k = -k;
        }
        *self = self.scale(&k);
        k
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn var(v: Var) -> Poly {
        Poly::from_atom(Atom::Var(v))
    }

    #[test]
    fn monomial_order_is_multiplicative() {
        let a = Monomial::atom(Atom::Var(Var::X1), 1);
        let b = Monomial::atom(Atom::Var(Var::X2), 1);
        let ab = a.mul(&b);
        assert!(b < ab);
        assert!(a < ab);
        assert!(b < a);
        assert!(Monomial::one() < b);
        // Multiplying both sides by the same monomial preserves the order.
        let c = Monomial::atom(Atom::Var(Var::P1), 3);
        assert!(b.mul(&c) < a.mul(&c));
    }

    #[test]
    fn cos_squared_reduces() {
        let cos = Poly::from_atom(Atom::lam_trig(Func::Cos));
        let sin = Poly::from_atom(Atom::lam_trig(Func::Sin));
        let lhs = cos.mul(&cos).add(&sin.mul(&sin));
        assert_eq!(lhs, Poly::one());
        let cosh = Poly::from_atom(Atom::lam_trig(Func::Cosh));
        let sinh = Poly::from_atom(Atom::lam_trig(Func::Sinh));
        assert_eq!(cosh.pow(2).sub(&sinh.pow(2)), Poly::one());
        assert_eq!(cos.pow(3), cos.sub(&cos.mul(&sin.pow(2))));
    }

    #[test]
    fn exact_division() {
        let x = var(Var::X1);
        let y = var(Var::X2);
        let f = x.add(&y);
        let g = x.sub(&y.scale(&Scalar::from_int(3)));
        let prod = f.mul(&g);
        assert_eq!(prod.divide_exact(&f), Some(g.clone()));
        assert_eq!(prod.divide_exact(&g), Some(f.clone()));
        assert_eq!(prod.add(&Poly::one()).divide_exact(&f), None);
        assert_eq!(x.mul(&y).divide_exact(&y), Some(x));
    }

    #[test]
    fn primitive_form() {
        let mut p = var(Var::X1)
            .scale(&Scalar::ratio(-2, 3))
            .add(&Poly::constant(Scalar::ratio(4, 9)));
        p.make_primitive();
        // leading term is x1 with coefficient 3, constant -2
        assert_eq!(p.leading().unwrap().1, &Scalar::from_int(3));
        assert_eq!(p.constant_value(), None);
        assert_eq!(p.coefficient(&Monomial::one()), Scalar::from_int(-2));
    }
}
