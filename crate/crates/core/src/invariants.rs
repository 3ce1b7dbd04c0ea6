//! Torsion and curvature of a pair of second-order ODEs, their
//! classification, and the operators acting along a projective field.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::jetfield::{reduce_mod, x_f, VectorField};
use crate::symcore::{Assignment, Frac, Var};

pub type Matrix2 = [[Frac; 2]; 2];

/// `T[i][k][j][l] = A[i][j] * B[k][l]` is stored as `t[i][j][k][l]`.
pub type Tensor4 = [[[[Frac; 2]; 2]; 2]; 2];

const X: [Var; 2] = [Var::X1, Var::X2];
const P: [Var; 2] = [Var::P1, Var::P2];

fn zero2() -> Matrix2 {
    std::array::from_fn(|_| std::array::from_fn(|_| Frac::zero()))
}

pub fn matrix(entries: [[i64; 2]; 2]) -> Matrix2 {
    entries.map(|row| row.map(Frac::int))
}

pub fn is_zero_matrix(m: &Matrix2) -> bool {
    m.iter().flatten().all(Frac::is_zero)
}

pub fn matrices_equal(a: &Matrix2, b: &Matrix2) -> bool {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .all(|(x, y)| x.sub(y).is_zero())
}

pub fn det(m: &Matrix2) -> Frac {
    m[0][0].mul(&m[1][1]).sub(&m[0][1].mul(&m[1][0]))
}

pub fn trace(m: &Matrix2) -> Frac {
    m[0][0].add(&m[1][1])
}

pub fn format_matrix(m: &Matrix2) -> String {
    format!("[[{}, {}], [{}, {}]]", m[0][0], m[0][1], m[1][0], m[1][1])
}

fn check_ode_rhs(f: &Frac) -> Result<()> {
    if f.has_jets() {
        return Err(Error::Dependency {
            function: f.to_string(),
            var: "jets".into(),
        });
    }
    if f.depends_on(Var::Lam) {
        return Err(Error::Dependency {
            function: f.to_string(),
            var: Var::Lam.name().into(),
        });
    }
    Ok(())
}

/// `F^i_j = -d_xj F^i + 1/2 X_F(d_pj F^i) - 1/4 d_pk F^i d_pj F^k`.
pub fn fels_f_matrix(f1: &Frac, f2: &Frac) -> Result<Matrix2> {
    check_ode_rhs(f1)?;
    check_ode_rhs(f2)?;
    let f = [f1, f2];
    let xf = x_f(f1, f2)?;
    let mut dp = [[Frac::zero(), Frac::zero()], [Frac::zero(), Frac::zero()]];
    for i in 0..2 {
        for j in 0..2 {
            dp[i][j] = f[i].diff(P[j])?;
        }
    }
    let mut out = zero2();
    for i in 0..2 {
        for j in 0..2 {
            let mut e = f[i].diff(X[j])?.neg();
            e = e.add(&xf.apply(&dp[i][j])?.mul(&Frac::ratio(1, 2)));
            for k in 0..2 {
                e = e.sub(&dp[i][k].mul(&dp[k][j]).mul(&Frac::ratio(1, 4)));
            }
            out[i][j] = e;
        }
    }
    Ok(out)
}

/// The trace-free part of [`fels_f_matrix`].
pub fn fels_torsion(f1: &Frac, f2: &Frac) -> Result<Matrix2> {
    let mut t = fels_f_matrix(f1, f2)?;
    let half = trace(&t).mul(&Frac::ratio(1, 2));
    for (i, row) in t.iter_mut().enumerate() {
        row[i] = row[i].sub(&half);
    }
    Ok(t)
}

/// `R^i_jkl = F^i_jkl - 3/4 F^r_r(jk delta^i_l)`, the bracket being the
/// average over the six orderings of `(j, k, l)`.
pub fn fels_curvature(f1: &Frac, f2: &Frac) -> Result<Tensor4> {
    check_ode_rhs(f1)?;
    check_ode_rhs(f2)?;
    let f = [f1, f2];
    let mut third: Tensor4 = std::array::from_fn(|_| {
        std::array::from_fn(|_| std::array::from_fn(|_| std::array::from_fn(|_| Frac::zero())))
    });
    for i in 0..2 {
        for j in 0..2 {
            let dj = f[i].diff(P[j])?;
            for k in 0..2 {
                let djk = dj.diff(P[k])?;
                for l in 0..2 {
                    third[i][j][k][l] = djk.diff(P[l])?;
                }
            }
        }
    }
    // F^r_rjk
    let contracted = |j: usize, k: usize| third[0][0][j][k].add(&third[1][1][j][k]);
    let mut out = third.clone();
    for (i, block) in out.iter_mut().enumerate() {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    let idx = [j, k, l];
                    let mut sym = Frac::zero();
                    for (a, b, c) in [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)] {
                        if idx[c] == i {
                            sym = sym.add(&contracted(idx[a], idx[b]));
                        }
                    }
                    let corr = sym.mul(&Frac::ratio(3, 4 * 6));
                    block[j][k][l] = block[j][k][l].sub(&corr);
                }
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum TorsionClass {
    Zero,
    Rank1,
    Rank2Real,
    Rank2Complex,
}

impl TorsionClass {
    /// The associated cone surface.
    pub fn surface(self) -> &'static str {
        match self {
            TorsionClass::Zero => "Quadric",
            TorsionClass::Rank1 => "Cayley cubic",
            TorsionClass::Rank2Real => "Surface (1)",
            TorsionClass::Rank2Complex => "Surface (2)",
        }
    }
}

impl fmt::Display for TorsionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

const BOUNDARY: f64 = 1e-12;

/// Classifies a trace-free matrix by vanishing and the sign of `det`.
/// Non-constant matrices need an evaluation point.
pub fn classify(t: &Matrix2, at: Option<&Assignment>) -> Result<TorsionClass> {
    if is_zero_matrix(t) {
        return Ok(TorsionClass::Zero);
    }
    let d = det(t);
    if d.is_zero() {
        return Ok(TorsionClass::Rank1);
    }
    if let Some(c) = d.constant_value() {
        return Ok(if c.is_negative() {
            TorsionClass::Rank2Real
        } else {
            TorsionClass::Rank2Complex
        });
    }
    let at = at.ok_or_else(|| {
        Error::Unresolved(format!("non-constant torsion {} needs a point", format_matrix(t)))
    })?;
    let value = crate::symcore::eval_num(&d, at)?;
    let scale = t
        .iter()
        .flatten()
        .map(|e| crate::symcore::eval_num(e, at).map(f64::abs))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    if scale <= BOUNDARY {
        return Err(Error::Domain(format!(
            "torsion vanishes numerically at the point; boundary, undecided ({})",
            format_matrix(t)
        )));
    }
    if value.abs() <= BOUNDARY * scale * scale {
        return Err(Error::Domain(format!(
            "det = {value:e} at the point; boundary, undecided"
        )));
    }
    Ok(if value < 0.0 {
        TorsionClass::Rank2Real
    } else {
        TorsionClass::Rank2Complex
    })
}

/// Solves `[X, [X, V_i]] = T_i^j V_j` modulo `X` and `complement`.
pub fn frame_torsion(
    x: &VectorField,
    v1: &VectorField,
    v2: &VectorField,
    complement: &[VectorField],
) -> Result<Matrix2> {
    let mut frame = vec![v1.clone(), v2.clone(), x.clone()];
    frame.extend(complement.iter().cloned());
    let mut out = zero2();
    for (i, v) in [v1, v2].into_iter().enumerate() {
        let w = x.lie_bracket(&x.lie_bracket(v)?)?;
        let r = reduce_mod(&w, &frame, &[])?;
        out[i] = [r.coeffs[0].clone(), r.coeffs[1].clone()];
    }
    Ok(out)
}

/// `f X(X(f)) - 2 X(f)^2`; zero iff `X` and `f X` are both projective.
pub fn schwarzian_residual(f: &Frac, x: &VectorField) -> Result<Frac> {
    let xf = x.apply(f)?;
    let xxf = x.apply(&xf)?;
    Ok(f.mul(&xxf).sub(&xf.mul(&xf).mul(&Frac::int(2))))
}

pub fn nabla(a: &Matrix2, x: &VectorField) -> Result<Matrix2> {
    let mut out = zero2();
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = x.apply(&a[i][j])?;
        }
    }
    Ok(out)
}

pub fn kronecker(a: &Matrix2, b: &Matrix2) -> Tensor4 {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| std::array::from_fn(|k| std::array::from_fn(|l| a[i][j].mul(&b[k][l]))))
    })
}

fn tensor_combine(parts: &[(Frac, Tensor4)]) -> Tensor4 {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            std::array::from_fn(|k| {
                std::array::from_fn(|l| {
                    parts
                        .iter()
                        .fold(Frac::zero(), |acc, (c, t)| acc.add(&c.mul(&t[i][j][k][l])))
                })
            })
        })
    })
}

pub fn tensor_is_zero(t: &Tensor4) -> bool {
    t.iter().flatten().flatten().flatten().all(Frac::is_zero)
}

pub fn tensor_sub(a: &Tensor4, b: &Tensor4) -> Tensor4 {
    tensor_combine(&[(Frac::one(), a.clone()), (Frac::int(-1), b.clone())])
}

pub fn tensor_scale(a: &Tensor4, c: &Frac) -> Tensor4 {
    tensor_combine(&[(c.clone(), a.clone())])
}

/// `1/2 (nabla^2 A (x) A + A (x) nabla^2 A) - 5/4 nabla A (x) nabla A`.
pub fn shat(a: &Matrix2, x: &VectorField) -> Result<Tensor4> {
    let n1 = nabla(a, x)?;
    let n2 = nabla(&n1, x)?;
    let half = Frac::ratio(1, 2);
    Ok(tensor_combine(&[
        (half.clone(), kronecker(&n2, a)),
        (half, kronecker(a, &n2)),
        (Frac::ratio(-5, 4), kronecker(&n1, &n1)),
    ]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::frac;

    fn f(text: &str) -> Frac {
        frac(text).unwrap()
    }

    #[test]
    fn f_matrix_examples() {
        assert!(is_zero_matrix(&fels_f_matrix(&Frac::zero(), &Frac::zero()).unwrap()));
        let m = fels_f_matrix(&f("-x1"), &f("x2")).unwrap();
        assert!(matrices_equal(&m, &matrix([[1, 0], [0, -1]])));
        let m = fels_f_matrix(&f("-2*x2"), &f("2*x1")).unwrap();
        assert!(matrices_equal(&m, &matrix([[0, 2], [-2, 0]])));
    }

    #[test]
    fn f_matrix_velocity_terms() {
        // F1 = p1^2: d_p1 F1 = 2 p1, X_F(2 p1) = 2 p1^2, minus 1/4 (2 p1)^2.
        let m = fels_f_matrix(&f("p1^2"), &Frac::zero()).unwrap();
        assert_eq!(m[0][0], f("0"));
        let m = fels_f_matrix(&f("t*p1"), &Frac::zero()).unwrap();
        assert_eq!(m[0][0], f("1/2 - 1/4*t^2"));
    }

    #[test]
    fn classification_rows() {
        let cases = [
            ((f("0"), f("0")), TorsionClass::Zero),
            ((f("-x2"), f("0")), TorsionClass::Rank1),
            ((f("-x1"), f("x2")), TorsionClass::Rank2Real),
            ((f("-2*x2"), f("2*x1")), TorsionClass::Rank2Complex),
        ];
        for ((f1, f2), class) in cases {
            let t = fels_torsion(&f1, &f2).unwrap();
            assert_eq!(classify(&t, None).unwrap(), class);
        }
        assert_eq!(TorsionClass::Rank1.surface(), "Cayley cubic");
        let t = [[f("x1"), Frac::zero()], [Frac::zero(), f("-x1")]];
        assert!(classify(&t, None).is_err());
        let at = Assignment::new().with_var(Var::X1, 2.0);
        assert_eq!(classify(&t, Some(&at)).unwrap(), TorsionClass::Rank2Real);
        let at = Assignment::new().with_var(Var::X1, 0.0);
        assert!(matches!(classify(&t, Some(&at)), Err(Error::Domain(_))));
    }

    #[test]
    fn cubic_curvature() {
        let r = fels_curvature(&f("p1^3"), &Frac::zero()).unwrap();
        assert_eq!(r[0][0][0][0], Frac::ratio(3, 2));
        assert_eq!(r[1][0][0][1], Frac::ratio(-3, 2));
        assert_eq!(r[1][0][1][0], Frac::ratio(-3, 2));
        assert!(r[0][1][1][1].is_zero());
        let lin = fels_curvature(&f("x1 + 3*p2"), &f("t*p1")).unwrap();
        assert!(tensor_is_zero(&lin));
    }

    fn lam_fn(name: &str) -> Frac {
        f(&format!("{name}(lam)"))
    }

    #[test]
    fn rotating_frame_torsion() {
        let e = |v| VectorField::coord(v);
        let x = e(Var::Lam);
        let v1 = e(Var::P1).scale(&lam_fn("cos")).add(&e(Var::X1).scale(&lam_fn("sin")));
        let v2 = e(Var::P2).scale(&lam_fn("cosh")).add(&e(Var::X2).scale(&lam_fn("sinh")));
        let comp = [x.lie_bracket(&v1).unwrap(), x.lie_bracket(&v2).unwrap()];
        let t = frame_torsion(&x, &v1, &v2, &comp).unwrap();
        assert!(matrices_equal(&t, &matrix([[-1, 0], [0, 1]])));
        let flat = frame_torsion(&x, &e(Var::P1), &e(Var::P2), &[e(Var::X1), e(Var::X2)]).unwrap();
        assert!(is_zero_matrix(&flat));
    }

    #[test]
    fn schwarzian_examples() {
        let x = VectorField::coord(Var::Lam);
        assert!(schwarzian_residual(&Frac::one(), &x).unwrap().is_zero());
        assert!(schwarzian_residual(&f("1/(lam + 1)"), &x).unwrap().is_zero());
        assert_eq!(schwarzian_residual(&f("lam"), &x).unwrap(), Frac::int(-2));
    }

    #[test]
    fn nabla_and_shat() {
        let x = VectorField::coord(Var::Lam);
        let s = lam_fn("sin");
        let a = [[s.clone(), Frac::zero()], [Frac::zero(), s.neg()]];
        let c = lam_fn("cos");
        let expected = [[c.clone(), Frac::zero()], [Frac::zero(), c.neg()]];
        assert!(matrices_equal(&nabla(&a, &x).unwrap(), &expected));
        assert!(tensor_is_zero(&shat(&matrix([[1, 2], [3, -1]]), &x).unwrap()));
    }
}
