//! Vector fields on jet space extended by the spectral parameter.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::symcore::{solve_overdetermined, Frac, Var};

/// A vector field `sum_v c_v d/dv`. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct VectorField {
    coeffs: BTreeMap<Var, Frac>,
}

impl VectorField {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The coordinate field `d/dv`.
    pub fn coord(v: Var) -> Self {
        Self::from_pairs([(v, Frac::one())])
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, Frac)>) -> Self {
        let mut out = Self::zero();
        for (v, c) in pairs {
            out.add_component(v, &c);
        }
        out
    }

    fn add_component(&mut self, v: Var, c: &Frac) {
        if c.is_zero() {
            return;
        }
        let sum = match self.coeffs.get(&v) {
            Some(old) => old.add(c),
            None => c.clone(),
        };
        if sum.is_zero() {
            self.coeffs.remove(&v);
        } else {
            self.coeffs.insert(v, sum);
        }
    }

    pub fn component(&self, v: Var) -> Frac {
        self.coeffs.get(&v).cloned().unwrap_or_default()
    }

    pub fn components(&self) -> impl Iterator<Item = (Var, &Frac)> + '_ {
        self.coeffs.iter().map(|(v, c)| (*v, c))
    }

    pub fn directions(&self) -> impl Iterator<Item = Var> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &VectorField) -> VectorField {
        let mut out = self.clone();
        for (v, c) in &other.coeffs {
            out.add_component(*v, c);
        }
        out
    }

    pub fn sub(&self, other: &VectorField) -> VectorField {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> VectorField {
        self.map_coeffs(|c| Ok(c.neg())).expect("negation is total")
    }

    pub fn scale(&self, f: &Frac) -> VectorField {
        self.map_coeffs(|c| Ok(c.mul(f))).expect("multiplication is total")
    }

    /// Applies `op` to every coefficient.
    pub fn map_coeffs(&self, mut op: impl FnMut(&Frac) -> Result<Frac>) -> Result<VectorField> {
        let mut out = VectorField::zero();
        for (v, c) in &self.coeffs {
            out.add_component(*v, &op(c)?);
        }
        Ok(out)
    }

    /// The directional derivative `V(e)`.
    pub fn apply(&self, e: &Frac) -> Result<Frac> {
        let mut acc = Frac::zero();
        for (v, c) in &self.coeffs {
            if !e.depends_on(*v) {
                continue;
            }
            acc = acc.add(&c.mul(&e.diff(*v)?));
        }
        Ok(acc)
    }

    /// `[self, other]^a = self(other^a) - other(self^a)`.
    pub fn lie_bracket(&self, other: &VectorField) -> Result<VectorField> {
        let dirs: BTreeSet<Var> = self.directions().chain(other.directions()).collect();
        let mut out = VectorField::zero();
        for v in dirs {
            let a = self.apply(&other.component(v))?;
            let b = other.apply(&self.component(v))?;
            out.add_component(v, &a.sub(&b));
        }
        Ok(out)
    }

    /// Coefficient-wise derivative along `v`; equals `[d/dv, self]`.
    pub fn derivative(&self, v: Var) -> Result<VectorField> {
        self.map_coeffs(|c| c.diff(v))
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (i, (v, c)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})*d_{v}")?;
        }
        Ok(())
    }
}

/// The total derivative `d_t + p1 d_x1 + p2 d_x2 + F1 d_p1 + F2 d_p2`.
pub fn x_f(f1: &Frac, f2: &Frac) -> Result<VectorField> {
    for f in [f1, f2] {
        if f.depends_on(Var::Lam) {
            return Err(Error::Dependency {
                function: f.to_string(),
                var: Var::Lam.name().to_string(),
            });
        }
    }
    Ok(VectorField::from_pairs([
        (Var::T, Frac::one()),
        (Var::X1, Frac::var(Var::P1)),
        (Var::X2, Frac::var(Var::P2)),
        (Var::P1, f1.clone()),
        (Var::P2, f2.clone()),
    ]))
}

/// `W = sum coeffs[i] * frame[i] + sum residual[d] * d/dd`.
#[derive(Clone, Debug, PartialEq)]
pub struct Reduction {
    pub coeffs: Vec<Frac>,
    pub residual: BTreeMap<Var, Frac>,
    /// Pivots of the elimination; the decomposition is valid off their
    /// common zero set.
    pub locus: Vec<Frac>,
}

impl Reduction {
    pub fn residual_is_zero(&self) -> bool {
        self.residual.values().all(Frac::is_zero)
    }

    pub fn residual(&self, v: Var) -> Frac {
        self.residual.get(&v).cloned().unwrap_or_default()
    }
}

/// Decomposes `w` against `frame` plus the coordinate fields `residual_dirs`.
pub fn reduce_mod(w: &VectorField, frame: &[VectorField], residual_dirs: &[Var]) -> Result<Reduction> {
    let dirs: BTreeSet<Var> = w
        .directions()
        .chain(frame.iter().flat_map(|f| f.directions()))
        .chain(residual_dirs.iter().copied())
        .collect();
    let n = frame.len() + residual_dirs.len();
    if dirs.len() < n {
        return Err(Error::Singular {
            column: dirs.len(),
            rank: dirs.len(),
            minor: format!("{n} fields span at most {} directions", dirs.len()),
        });
    }
    let mut a = Vec::with_capacity(dirs.len());
    let mut b = Vec::with_capacity(dirs.len());
    for &d in &dirs {
        let mut row: Vec<Frac> = frame.iter().map(|f| f.component(d)).collect();
        row.extend(
            residual_dirs
                .iter()
                .map(|r| if *r == d { Frac::one() } else { Frac::zero() }),
        );
        a.push(row);
        b.push(w.component(d));
    }
    let sol = solve_overdetermined(&a, &b)?;
    let (coeffs, rest) = sol.x.split_at(frame.len());
    Ok(Reduction {
        coeffs: coeffs.to_vec(),
        residual: residual_dirs.iter().copied().zip(rest.iter().cloned()).collect(),
        locus: sol.pivots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::{frac, Func};

    fn d(v: Var) -> VectorField {
        VectorField::coord(v)
    }

    fn sin() -> Frac {
        Frac::func(Func::Sin, Frac::var(Var::Lam)).unwrap()
    }

    fn cos() -> Frac {
        Frac::func(Func::Cos, Frac::var(Var::Lam)).unwrap()
    }

    #[test]
    fn apply_reads_coefficients() {
        assert_eq!(d(Var::Lam).apply(&sin()).unwrap(), cos());
        let x0 = x_f(&Frac::zero(), &Frac::zero()).unwrap();
        assert!(x0.apply(&Frac::var(Var::P1)).unwrap().is_zero());
        assert_eq!(x0.apply(&Frac::var(Var::X1)).unwrap(), Frac::var(Var::P1));
        let f1 = frac("x1*p2").unwrap();
        let xf = x_f(&f1, &Frac::zero()).unwrap();
        assert_eq!(xf.apply(&Frac::var(Var::P1)).unwrap(), f1);
        assert!(x_f(&Frac::var(Var::Lam), &Frac::zero()).is_err());
    }

    #[test]
    fn brackets() {
        assert!(d(Var::P1).lie_bracket(&d(Var::X1)).unwrap().is_zero());
        let w = d(Var::P1).scale(&sin());
        assert_eq!(d(Var::Lam).lie_bracket(&w).unwrap(), d(Var::P1).scale(&cos()));
        let x0 = x_f(&Frac::zero(), &Frac::zero()).unwrap();
        assert_eq!(x0.lie_bracket(&d(Var::P1)).unwrap(), d(Var::X1).neg());
    }

    #[test]
    fn reduction_against_a_rotating_frame() {
        let y0 = d(Var::P1).scale(&cos()).add(&d(Var::X1).scale(&sin()));
        let y1 = d(Var::P2).add(&d(Var::X2).scale(&sin()));
        let r = reduce_mod(&y0, &[y0.clone(), y1.clone()], &[Var::P1, Var::P2, Var::Lam]).unwrap();
        assert_eq!(r.coeffs, vec![Frac::one(), Frac::zero()]);
        assert!(r.residual_is_zero());
        let r = reduce_mod(&d(Var::P1), &[y0.clone(), y1], &[Var::P1, Var::P2]).unwrap();
        assert!(r.coeffs.iter().all(Frac::is_zero));
        assert_eq!(r.residual(Var::P1), Frac::one());
        assert!(r.locus.contains(&sin()));
        let r = reduce_mod(&d(Var::P1), &[y0], &[Var::X1]).unwrap();
        assert_eq!(r.coeffs[0], cos().recip().unwrap());
        assert_eq!(r.residual(Var::X1), sin().div(&cos()).unwrap().neg());
    }
}
