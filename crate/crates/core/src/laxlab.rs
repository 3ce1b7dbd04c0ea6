//! Horizontal frames and the two non-isospectral Lax pairs.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::jetfield::{reduce_mod, VectorField};
use crate::symcore::{det2, solve_linear, Frac, FunctionSymbol, Func, Scalar, Var};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseTag {
    RealRoots,
    ComplexRoots,
}

impl CaseTag {
    pub const ALL: [CaseTag; 2] = [CaseTag::RealRoots, CaseTag::ComplexRoots];

    pub fn name(self) -> &'static str {
        match self {
            CaseTag::RealRoots => "real",
            CaseTag::ComplexRoots => "complex",
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CaseTag {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "real" | "RealRoots" => Ok(CaseTag::RealRoots),
            "complex" | "ComplexRoots" => Ok(CaseTag::ComplexRoots),
            _ => Err(format!("unknown case `{s}` (expected real or complex)")),
        }
    }
}

fn trig(f: Func) -> Frac {
    Frac::func(f, Frac::var(Var::Lam)).expect("trigonometric atom")
}

pub(crate) fn sin() -> Frac {
    trig(Func::Sin)
}

pub(crate) fn cos() -> Frac {
    trig(Func::Cos)
}

pub(crate) fn sinh() -> Frac {
    trig(Func::Sinh)
}

pub(crate) fn cosh() -> Frac {
    trig(Func::Cosh)
}

fn d(v: Var) -> VectorField {
    VectorField::coord(v)
}

/// `e1 = d_p1`, `e2 = d_p2`, `e3 = d_x1 + u_p1 d_p1 + v_p1 d_p2`,
/// `e4 = d_x2 + u_p2 d_p1 + v_p2 d_p2`.
pub fn e_fields() -> [VectorField; 4] {
    let e3 = VectorField::from_pairs([
        (Var::X1, Frac::one()),
        (Var::P1, Frac::u(&[Var::P1])),
        (Var::P2, Frac::v(&[Var::P1])),
    ]);
    let e4 = VectorField::from_pairs([
        (Var::X2, Frac::one()),
        (Var::P1, Frac::u(&[Var::P2])),
        (Var::P2, Frac::v(&[Var::P2])),
    ]);
    [d(Var::P1), d(Var::P2), e3, e4]
}

fn combine(weights: [Frac; 4], e: &[VectorField; 4]) -> VectorField {
    weights
        .iter()
        .zip(e)
        .fold(VectorField::zero(), |acc, (w, f)| acc.add(&f.scale(w)))
}

/// The frame in terms of arbitrary `e1..e4`.
pub fn frame_in(case: CaseTag, e: &[VectorField; 4]) -> (VectorField, VectorField) {
    match case {
        CaseTag::RealRoots => (
            combine([cos(), Frac::zero(), sin(), Frac::zero()], e),
            combine([Frac::zero(), cosh(), Frac::zero(), sinh()], e),
        ),
        CaseTag::ComplexRoots => {
            let half = Scalar::ratio(1, 2);
            let cc = cosh().mul(&cos());
            let ss = sinh().mul(&sin());
            let plus = sinh().mul(&cos()).add(&cosh().mul(&sin())).scale(&half);
            let minus = sinh().mul(&cos()).sub(&cosh().mul(&sin())).scale(&half);
            (
                combine([cc.clone(), ss.neg(), plus.clone(), minus.clone()], e),
                combine([ss, cc, minus.neg(), plus], e),
            )
        }
    }
}

/// `(Y0, Y1)` with the `e`'s instantiated on formal `u`, `v`.
pub fn horizontal_frame(case: CaseTag) -> (VectorField, VectorField) {
    frame_in(case, &e_fields())
}

/// The complex-roots frame before adjustment, built from `exp(+-lam)`.
pub fn unadjusted_frame(e: &[VectorField; 4]) -> (VectorField, VectorField) {
    let ep = Frac::func(Func::Exp, Frac::var(Var::Lam)).expect("exp");
    let em = Frac::func(Func::Exp, Frac::var(Var::Lam).neg()).expect("exp");
    let (c, s) = (cos(), sin());
    (
        combine([ep.mul(&c), ep.mul(&s), em.mul(&c), em.mul(&s)], e),
        combine([ep.mul(&s), ep.mul(&c).neg(), em.mul(&s).neg(), em.mul(&c)], e),
    )
}

#[derive(Clone, Debug)]
pub struct LaxPair {
    pub case: CaseTag,
    pub y0: VectorField,
    pub y1: VectorField,
    pub eta0: Frac,
    pub eta1: Frac,
}

impl LaxPair {
    pub fn l0(&self) -> VectorField {
        self.y0.add(&d(Var::Lam).scale(&self.eta0))
    }

    pub fn l1(&self) -> VectorField {
        self.y1.add(&d(Var::Lam).scale(&self.eta1))
    }

    /// Replaces the formal `u`, `v` by concrete bodies.
    pub fn substitute(&self, u: Option<&Frac>, v: Option<&Frac>) -> Result<LaxPair> {
        let sub = |c: &Frac| -> Result<Frac> {
            let mut c = c.clone();
            if let Some(u) = u {
                c = c.substitute_function(&FunctionSymbol::u(), u)?;
            }
            if let Some(v) = v {
                c = c.substitute_function(&FunctionSymbol::v(), v)?;
            }
            Ok(c)
        };
        Ok(LaxPair {
            case: self.case,
            y0: self.y0.map_coeffs(sub)?,
            y1: self.y1.map_coeffs(sub)?,
            eta0: sub(&self.eta0)?,
            eta1: sub(&self.eta1)?,
        })
    }
}

/// The linear system `M (eta0, eta1) = rhs` fixing the lambda components.
#[derive(Clone, Debug)]
pub struct EtaSystem {
    pub matrix: Vec<Vec<Frac>>,
    pub rhs: Vec<Frac>,
    pub determinant: Frac,
}

#[derive(Clone, Debug)]
pub struct EtaSolution {
    pub eta0: Frac,
    pub eta1: Frac,
    pub system: EtaSystem,
    /// The d_p1, d_p2 coefficients of `[L0, L1]` mod `(Y0, Y1, d_lam)` after
    /// substituting the solution.
    pub check: [Frac; 2],
}

fn p_residuals(w: &VectorField, y0: &VectorField, y1: &VectorField) -> Result<[Frac; 2]> {
    let r = reduce_mod(w, &[y0.clone(), y1.clone()], &[Var::P1, Var::P2])?;
    Ok([r.residual(Var::P1), r.residual(Var::P2)])
}

/// `[L0, L1] = [Y0, Y1] + eta0 d_lam Y1 - eta1 d_lam Y0 mod d_lam`; the
/// d_p1 and d_p2 coefficients in the basis `(Y0, Y1, d_p1, d_p2)` vanish.
pub fn eta_system(y0: &VectorField, y1: &VectorField) -> Result<EtaSystem> {
    let a = p_residuals(&y0.lie_bracket(y1)?, y0, y1)?;
    let b = p_residuals(&y1.derivative(Var::Lam)?, y0, y1)?;
    let c = p_residuals(&y0.derivative(Var::Lam)?, y0, y1)?;
    let matrix = vec![
        vec![b[0].clone(), c[0].neg()],
        vec![b[1].clone(), c[1].neg()],
    ];
    let determinant = det2(&matrix);
    Ok(EtaSystem {
        rhs: vec![a[0].neg(), a[1].neg()],
        matrix,
        determinant,
    })
}

pub fn solve_eta(case: CaseTag) -> Result<EtaSolution> {
    let (y0, y1) = horizontal_frame(case);
    solve_eta_for(&y0, &y1)
}

pub fn solve_eta_for(y0: &VectorField, y1: &VectorField) -> Result<EtaSolution> {
    let system = eta_system(y0, y1)?;
    if system.determinant.is_zero() {
        return Err(Error::Singular {
            column: 1,
            rank: 1,
            minor: "eta determinant".into(),
        });
    }
    let sol = solve_linear(&system.matrix, &system.rhs)?;
    let (eta0, eta1) = (sol.x[0].clone(), sol.x[1].clone());
    let bracket = y0
        .lie_bracket(y1)?
        .add(&y1.derivative(Var::Lam)?.scale(&eta0))
        .sub(&y0.derivative(Var::Lam)?.scale(&eta1));
    let check = p_residuals(&bracket, y0, y1)?;
    Ok(EtaSolution {
        eta0,
        eta1,
        system,
        check,
    })
}

/// The eta's as printed, in terms of `Y0`, `Y1` applied to first jets.
pub fn closed_form_eta(case: CaseTag) -> Result<(Frac, Frac)> {
    let (y0, y1) = horizontal_frame(case);
    let (u1, u2) = (Frac::u(&[Var::P1]), Frac::u(&[Var::P2]));
    let (v1, v2) = (Frac::v(&[Var::P1]), Frac::v(&[Var::P2]));
    match case {
        CaseTag::RealRoots => {
            let ss = sin().mul(&sinh());
            let eta0 = sinh()
                .mul(&sinh())
                .mul(&y0.apply(&v2)?)
                .sub(&ss.mul(&y1.apply(&v1)?));
            let eta1 = sin()
                .mul(&sin())
                .mul(&y1.apply(&u1)?)
                .sub(&ss.mul(&y0.apply(&u2)?));
            Ok((eta0, eta1))
        }
        CaseTag::ComplexRoots => {
            let a = sinh().mul(&cos()).sub(&cosh().mul(&sin()));
            let b = sinh().mul(&cos()).add(&cosh().mul(&sin()));
            let pu = a
                .mul(&y0.apply(&u1)?.add(&y1.apply(&u2)?))
                .sub(&b.mul(&y0.apply(&u2)?.sub(&y1.apply(&u1)?)));
            let pv = a
                .mul(&y0.apply(&v1)?.add(&y1.apply(&v2)?))
                .add(&b.mul(&y0.apply(&v2)?.sub(&y1.apply(&v1)?)));
            let eta0 = a.mul(&pu).add(&b.mul(&pv));
            let eta1 = b.mul(&pu).neg().add(&a.mul(&pv));
            Ok((eta0, eta1))
        }
    }
}

/// `M (eta0, eta1) - rhs`.
pub fn eta_conditions(system: &EtaSystem, eta0: &Frac, eta1: &Frac) -> [Frac; 2] {
    std::array::from_fn(|i| {
        system.matrix[i][0]
            .mul(eta0)
            .add(&system.matrix[i][1].mul(eta1))
            .sub(&system.rhs[i])
    })
}

/// Solver output against the transcribed closed forms.
#[derive(Clone, Debug)]
pub struct EtaComparison {
    pub case: CaseTag,
    pub solved: EtaSolution,
    pub closed_form: (Frac, Frac),
    /// `solved - closed_form`, componentwise.
    pub difference: [Frac; 2],
    /// The defining conditions evaluated on the closed forms.
    pub closed_form_conditions: [Frac; 2],
}

impl EtaComparison {
    pub fn matches(&self) -> bool {
        self.difference.iter().all(Frac::is_zero)
    }

    pub fn closed_form_satisfies_conditions(&self) -> bool {
        self.closed_form_conditions.iter().all(Frac::is_zero)
    }
}

pub fn compare_eta(case: CaseTag) -> Result<EtaComparison> {
    let solved = solve_eta(case)?;
    let closed_form = closed_form_eta(case)?;
    let difference = [
        solved.eta0.sub(&closed_form.0),
        solved.eta1.sub(&closed_form.1),
    ];
    let closed_form_conditions = eta_conditions(&solved.system, &closed_form.0, &closed_form.1);
    Ok(EtaComparison {
        case,
        solved,
        closed_form,
        difference,
        closed_form_conditions,
    })
}

/// The Lax pair with the eta's from [`solve_eta`].
pub fn lax_pair(case: CaseTag) -> Result<LaxPair> {
    let (y0, y1) = horizontal_frame(case);
    let sol = solve_eta_for(&y0, &y1)?;
    Ok(LaxPair {
        case,
        y0,
        y1,
        eta0: sol.eta0,
        eta1: sol.eta1,
    })
}

/// Residual coefficients of `[L0, L1]` along `d_p1`, `d_p2`, `d_lam` after
/// reduction modulo `L0`, `L1`.
pub fn closure_of(pair: &LaxPair) -> Result<[Frac; 3]> {
    let (l0, l1) = (pair.l0(), pair.l1());
    let bracket = l0.lie_bracket(&l1)?;
    let r = reduce_mod(&bracket, &[l0, l1], &[Var::P1, Var::P2, Var::Lam])?;
    Ok([Var::P1, Var::P2, Var::Lam].map(|v| r.residual(v)))
}

pub fn closure_obstruction(case: CaseTag, u: Option<&Frac>, v: Option<&Frac>) -> Result<[Frac; 3]> {
    let pair = lax_pair(case)?;
    let pair = if u.is_some() || v.is_some() {
        pair.substitute(u, v)?
    } else {
        pair
    };
    closure_of(&pair)
}

#[derive(Clone, Debug)]
pub struct InitialCheck {
    pub passed: bool,
    /// `(Y0, Y1)` at `lam = 0`.
    pub at_zero: (VectorField, VectorField),
    /// `lam`-derivatives at `lam = 0`, modulo `d_lam`.
    pub derivative_at_zero: (VectorField, VectorField),
}

fn at_zero(f: &VectorField) -> Result<VectorField> {
    f.map_coeffs(|c| c.substitute_var(Var::Lam, &Frac::zero()))
}

fn drop_lambda(f: &VectorField) -> VectorField {
    VectorField::from_pairs(
        f.components()
            .filter(|(v, _)| *v != Var::Lam)
            .map(|(v, c)| (v, c.clone())),
    )
}

/// `Y_i(0) = d_p_i` and `d/dlam Y_i(0) = e_{i+2}` mod `d_lam`.
pub fn initial_condition_check_for(y0: &VectorField, y1: &VectorField) -> Result<InitialCheck> {
    let e = e_fields();
    let z = (at_zero(y0)?, at_zero(y1)?);
    let dz = (
        drop_lambda(&at_zero(&y0.derivative(Var::Lam)?)?),
        drop_lambda(&at_zero(&y1.derivative(Var::Lam)?)?),
    );
    let passed = z.0 == e[0] && z.1 == e[1] && dz.0 == e[2] && dz.1 == e[3];
    Ok(InitialCheck {
        passed,
        at_zero: z,
        derivative_at_zero: dz,
    })
}

pub fn initial_condition_check(case: CaseTag) -> Result<InitialCheck> {
    let (y0, y1) = horizontal_frame(case);
    initial_condition_check_for(&y0, &y1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::frac;

    #[test]
    fn apply_to_first_jet() {
        let (y0, _) = horizontal_frame(CaseTag::RealRoots);
        let got = y0.apply(&Frac::v(&[Var::P2])).unwrap();
        let expected = frac(
            "cos(lam)*v_p1p2 + sin(lam)*(v_x1p2 + u_p1*v_p1p2 + v_p1*v_p2p2)",
        )
        .unwrap();
        assert!(got.sub(&expected).is_zero());
    }

    #[test]
    fn flat_frames() {
        let (y0, _) = horizontal_frame(CaseTag::RealRoots);
        let flat = y0
            .map_coeffs(|c| {
                c.substitute_function(&FunctionSymbol::u(), &Frac::zero())?
                    .substitute_function(&FunctionSymbol::v(), &Frac::zero())
            })
            .unwrap();
        let expected = d(Var::P1).scale(&cos()).add(&d(Var::X1).scale(&sin()));
        assert_eq!(flat, expected);
    }

    #[test]
    fn initial_conditions() {
        assert!(initial_condition_check(CaseTag::RealRoots).unwrap().passed);
        assert!(initial_condition_check(CaseTag::ComplexRoots).unwrap().passed);
        let (v1, v2) = unadjusted_frame(&e_fields());
        let report = initial_condition_check_for(&v1, &v2).unwrap();
        assert!(!report.passed);
        let e = e_fields();
        assert_eq!(report.at_zero.0, e[0].add(&e[2]));
    }

    #[test]
    fn real_eta_matches_closed_form() {
        let sol = solve_eta(CaseTag::RealRoots).unwrap();
        assert!(sol.check.iter().all(Frac::is_zero));
        assert!(!sol.system.determinant.is_zero());
        let (c0, c1) = closed_form_eta(CaseTag::RealRoots).unwrap();
        assert!(sol.eta0.sub(&c0).is_zero());
        assert!(sol.eta1.sub(&c1).is_zero());
    }

    #[test]
    fn complex_eta_against_closed_form() {
        let cmp = compare_eta(CaseTag::ComplexRoots).unwrap();
        assert!(cmp.solved.check.iter().all(Frac::is_zero));
        assert!(!cmp.solved.system.determinant.is_zero());
        assert!(!cmp.matches());
        assert!(!cmp.closed_form_satisfies_conditions());
        let real = compare_eta(CaseTag::RealRoots).unwrap();
        assert!(real.matches() && real.closed_form_satisfies_conditions());
    }

    #[test]
    fn frame_torsion_of_both_frames() {
        use crate::invariants::{frame_torsion, matrices_equal, matrix};
        let e = [Var::P1, Var::P2, Var::X1, Var::X2].map(VectorField::coord);
        let x = VectorField::coord(Var::Lam);
        let expected = [matrix([[-1, 0], [0, 1]]), matrix([[0, -2], [2, 0]])];
        for (case, want) in CaseTag::ALL.into_iter().zip(expected) {
            let (v1, v2) = frame_in(case, &e);
            let comp = [x.lie_bracket(&v1).unwrap(), x.lie_bracket(&v2).unwrap()];
            let t = frame_torsion(&x, &v1, &v2, &comp).unwrap();
            assert!(matrices_equal(&t, &want), "{case}");
        }
    }

    #[test]
    fn flat_bracket_vanishes() {
        let pair = lax_pair(CaseTag::RealRoots)
            .unwrap()
            .substitute(Some(&Frac::zero()), Some(&Frac::zero()))
            .unwrap();
        assert!(pair.l0().lie_bracket(&pair.l1()).unwrap().is_zero());
    }
}
