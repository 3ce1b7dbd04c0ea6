//! End-to-end checks of candidate solutions, the model cones and the linear
//! model systems.

use std::f64::consts::FRAC_PI_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::invariants::{fels_curvature, tensor_is_zero};
use crate::lambdacollect::PdeSystem;
use crate::laxlab::CaseTag;
use crate::symcore::{eval_num, frac, Assignment, Frac, FunctionSymbol, Func, Scalar, Var, VarSet};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Finding,
    Inconclusive,
}

impl Status {
    pub fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Finding => "finding",
            Status::Inconclusive => "inconclusive",
        }
    }
}

/// Linear coordinates on a tangent space.
#[derive(Clone, Copy, PartialEq, Debug, Serialize)]
pub struct Point4 {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    pub x4: f64,
}

impl Point4 {
    pub fn new(x1: f64, x2: f64, x3: f64, x4: f64) -> Self {
        Point4 { x1, x2, x3, x4 }
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.x1, self.x2, self.x3, self.x4]
    }
}

/// A pair of jet-free bodies for `u` and `v`.
#[derive(Clone, PartialEq, Debug)]
pub struct SolutionCandidate {
    pub u: Frac,
    pub v: Frac,
}

impl SolutionCandidate {
    pub fn new(u: Frac, v: Frac) -> Result<Self> {
        let deps = FunctionSymbol::u().deps();
        for (name, body) in [("u", &u), ("v", &v)] {
            if body.has_jets() {
                return Err(Error::Dependency {
                    function: name.into(),
                    var: "jet variables".into(),
                });
            }
            if let Some(var) = Var::ALL.into_iter().find(|w| !deps.contains(*w) && body.depends_on(*w)) {
                return Err(Error::Dependency {
                    function: name.into(),
                    var: var.name().into(),
                });
            }
        }
        Ok(SolutionCandidate { u, v })
    }

    pub fn parse(u: &str, v: &str) -> Result<Self> {
        Self::new(frac(u)?, frac(v)?)
    }

    fn assignment(&self) -> Assignment {
        Assignment::new()
            .with_body(FunctionSymbol::u(), self.u.clone())
            .with_body(FunctionSymbol::v(), self.v.clone())
    }
}

/// Substitutes both bodies into every equation; `r` and `s` are expanded first.
pub fn residuals(system: &PdeSystem, cand: &SolutionCandidate) -> Result<Vec<Frac>> {
    system
        .expanded()?
        .equations
        .iter()
        .map(|e| {
            e.substitute_function(&FunctionSymbol::u(), &cand.u)?
                .substitute_function(&FunctionSymbol::v(), &cand.v)
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct NumericReport {
    pub samples: usize,
    pub valid: usize,
    pub filtered: usize,
    pub max_residual: f64,
    pub tol: f64,
    pub seed: u64,
    pub status: Status,
}

impl NumericReport {
    fn finish(samples: usize, valid: usize, max_residual: f64, tol: f64, seed: u64) -> Self {
        let status = if 2 * valid < samples {
            Status::Inconclusive
        } else {
            Status::from_bool(max_residual < tol)
        };
        NumericReport {
            samples,
            valid,
            filtered: samples - valid,
            max_residual,
            tol,
            seed,
            status,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

fn sample_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Evaluates the equations with the bodies plugged in at `n` points of `[-2, 2]^4`.
pub fn numeric_residuals(
    system: &PdeSystem,
    cand: &SolutionCandidate,
    n: usize,
    seed: u64,
    tol: f64,
) -> Result<NumericReport> {
    let eqs = system.expanded()?.equations;
    let base = cand.assignment();
    let mut valid = 0;
    let mut max = 0.0f64;
    for i in 0..n {
        let mut rng = sample_rng(seed, i);
        let mut at = base.clone();
        for v in [Var::X1, Var::X2, Var::P1, Var::P2] {
            at = at.with_var(v, rng.gen_range(-2.0..=2.0));
        }
        let values: Result<Vec<f64>> = eqs.iter().map(|e| eval_num(e, &at)).collect();
        match values {
            Ok(vs) => {
                valid += 1;
                max = vs.into_iter().fold(max, |m, x| m.max(x.abs()));
            }
            Err(Error::Domain(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(NumericReport::finish(n, valid, max, tol, seed))
}

fn body_derivative(body: &Frac, ders: &[Var]) -> Result<Frac> {
    ders.iter().try_fold(body.clone(), |acc, v| acc.diff(*v))
}

/// `u_p1p1p2 = 0` and `v_p1p2p2 = 0`.
pub fn separated_form_check(cand: &SolutionCandidate) -> Result<bool> {
    Ok(body_derivative(&cand.u, &[Var::P1, Var::P1, Var::P2])?.is_zero()
        && body_derivative(&cand.v, &[Var::P1, Var::P2, Var::P2])?.is_zero())
}

/// `u_p1p1p1 != 0` or `v_p2p2p2 != 0`.
pub fn nonflat_check(cand: &SolutionCandidate) -> Result<bool> {
    Ok(!body_derivative(&cand.u, &[Var::P1; 3])?.is_zero()
        || !body_derivative(&cand.v, &[Var::P2; 3])?.is_zero())
}

/// Whether the curvature of the system with right-hand sides `(2u, 2v)` is nonzero.
pub fn curvature_nonzero(cand: &SolutionCandidate) -> Result<bool> {
    let two = Frac::int(2);
    let r = fels_curvature(&cand.u.mul(&two), &cand.v.mul(&two))?;
    Ok(!tensor_is_zero(&r))
}

/// LHS minus RHS of the cone equation, with the second cone's angle
/// denominator taken as `x1*x3 - x2*x4`.
pub fn cone_residual(case: CaseTag, pt: Point4) -> Result<f64> {
    match case {
        CaseTag::RealRoots => cone1_residual(pt),
        CaseTag::ComplexRoots => cone2_residual(pt, pt.x1 * pt.x3 - pt.x2 * pt.x4),
    }
}

/// The second cone with the angle denominator `x2*x4 - x1*x3`.
pub fn cone2_transcribed_residual(pt: Point4) -> Result<f64> {
    cone2_residual(pt, pt.x2 * pt.x4 - pt.x1 * pt.x3)
}

fn cone1_residual(pt: Point4) -> Result<f64> {
    if pt.x1 == 0.0 || pt.x2 == 0.0 {
        return Err(Error::Domain(format!("x1 = 0 or x2 = 0 at {pt:?}")));
    }
    let q = pt.x4 / pt.x2;
    if q.abs() >= 1.0 {
        return Err(Error::Domain(format!("|x4/x2| >= 1 at {pt:?}")));
    }
    Ok((pt.x3 / pt.x1).atan() - q.atanh())
}

fn cone2_residual(pt: Point4, den: f64) -> Result<f64> {
    let top = pt.x1 * pt.x1 + pt.x2 * pt.x2;
    let bottom = pt.x3 * pt.x3 + pt.x4 * pt.x4;
    if top <= 0.0 || bottom <= 0.0 {
        return Err(Error::Domain(format!("ln of a non-positive ratio at {pt:?}")));
    }
    if den == 0.0 {
        return Err(Error::Domain(format!("vanishing angle denominator at {pt:?}")));
    }
    let num = pt.x1 * pt.x4 + pt.x2 * pt.x3;
    Ok((top / bottom).ln() - 2.0 * (num / den).atan())
}

pub fn ruling_point(case: CaseTag, a: f64, b: f64, lam: f64) -> Point4 {
    let (c, s) = (lam.cos(), lam.sin());
    match case {
        CaseTag::RealRoots => Point4::new(a * c, b * lam.cosh(), a * s, b * lam.sinh()),
        CaseTag::ComplexRoots => {
            let (ep, em) = (lam.exp(), (-lam).exp());
            Point4::new(
                ep * (a * c + b * s),
                ep * (a * s - b * c),
                em * (a * c - b * s),
                em * (a * s + b * c),
            )
        }
    }
}

pub fn lambda_window(case: CaseTag) -> f64 {
    match case {
        CaseTag::RealRoots => 1.4,
        CaseTag::ComplexRoots => 0.7,
    }
}

/// Samples `(a, b, lam)` and takes the largest cone residual on the ruling.
pub fn verify_ruling(case: CaseTag, n: usize, tol: f64, seed: u64) -> NumericReport {
    verify_ruling_with(n, tol, seed, case, |pt| cone_residual(case, pt))
}

pub fn verify_ruling_with(
    n: usize,
    tol: f64,
    seed: u64,
    case: CaseTag,
    residual: impl Fn(Point4) -> Result<f64>,
) -> NumericReport {
    let w = lambda_window(case);
    let mut valid = 0;
    let mut max = 0.0f64;
    for i in 0..n {
        let mut rng = sample_rng(seed, i);
        let a = rng.gen_range(0.1..=3.0);
        let b = rng.gen_range(0.1..=3.0);
        let lam = rng.gen_range(-w..=w);
        if let Ok(r) = residual(ruling_point(case, a, b, lam)) {
            valid += 1;
            max = max.max(r.abs());
        }
    }
    NumericReport::finish(n, valid, max, tol, seed)
}

/// How points of the model surface are sent to cone coordinates.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ChartMap {
    /// `(x:y:z:1) = (x2:x1:x4:x3)`, resp. `(x2:x1:-x4:x3)`.
    Stated,
    /// `(x1, x2, x3, x4) = (y, z + w, x, z - w)` for the first surface; the
    /// stated map for the second.
    Corrected,
}

/// Cone coordinates of the homogeneous surface point `(x:y:z:w)`.
pub fn chart_point(case: CaseTag, map: ChartMap, xyzw: [f64; 4]) -> Point4 {
    let [x, y, z, w] = xyzw;
    match (case, map) {
        (CaseTag::RealRoots, ChartMap::Stated) => Point4::new(y, x, w, z),
        (CaseTag::RealRoots, ChartMap::Corrected) => Point4::new(y, z + w, x, z - w),
        (CaseTag::ComplexRoots, _) => Point4::new(y, x, w, -z),
    }
}

pub fn chart_residual(case: CaseTag, map: ChartMap, xyzw: [f64; 4]) -> Result<f64> {
    if xyzw[3] == 0.0 {
        return Err(Error::Domain("surface point at infinity".into()));
    }
    cone_residual(case, chart_point(case, map, xyzw))
}

/// A point of the model surface with `w = 1`, or `None` outside the
/// principal-branch window.
fn surface_sample(case: CaseTag, rng: &mut ChaCha8Rng) -> Option<[f64; 4]> {
    match case {
        CaseTag::RealRoots => {
            let x = rng.gen_range(-2.0..=2.0);
            let y = rng.gen_range(0.2..=2.0);
            Some([x, y, (2.0 * (x / y).atan()).exp(), 1.0])
        }
        CaseTag::ComplexRoots => {
            let theta: f64 = rng.gen_range(-1.2..=1.2);
            let z: f64 = rng.gen_range(-2.0..=2.0);
            if (theta - z.atan()).abs() >= FRAC_PI_2 - 0.05 {
                return None;
            }
            let rho = (theta + 0.5 * (1.0 + z * z).ln() - z.atan()).exp();
            Some([rho * theta.sin(), rho * theta.cos(), z, 1.0])
        }
    }
}

pub fn chart_equivalence(case: CaseTag, n: usize, tol: f64, seed: u64) -> NumericReport {
    chart_equivalence_with(case, ChartMap::Corrected, n, tol, seed)
}

pub fn chart_equivalence_with(case: CaseTag, map: ChartMap, n: usize, tol: f64, seed: u64) -> NumericReport {
    let mut valid = 0;
    let mut max = 0.0f64;
    for i in 0..n {
        let mut rng = sample_rng(seed, i);
        let Some(p) = surface_sample(case, &mut rng) else {
            continue;
        };
        if let Ok(r) = chart_residual(case, map, p) {
            valid += 1;
            max = max.max(r.abs());
        }
    }
    NumericReport::finish(n, valid, max, tol, seed)
}

fn constants() -> [Frac; 4] {
    std::array::from_fn(|i| {
        let c = FunctionSymbol::new(&format!("c{}", i + 1), VarSet::of(&[])).expect("valid identifier");
        Frac::jet_of(&c, &[])
    })
}

fn of_t(f: Func, sign: i64) -> Frac {
    Frac::func(f, Frac::var(Var::T).scale(&Scalar::from_int(sign))).expect("total on t")
}

/// The general solution `(x(t), y(t))` of the linear model system. In the
/// second model `y = -x''/2`.
pub fn model_solution(case: CaseTag) -> (Frac, Frac) {
    model_solution_with(case, &Scalar::ratio(-1, 2))
}

/// As [`model_solution`], with `y = k x''` in the second model.
pub fn model_solution_with(case: CaseTag, k: &Scalar) -> (Frac, Frac) {
    let [c1, c2, c3, c4] = constants();
    let (cos, sin) = (of_t(Func::Cos, 1), of_t(Func::Sin, 1));
    match case {
        CaseTag::RealRoots => (
            c1.mul(&cos).add(&c2.mul(&sin)),
            c3.mul(&of_t(Func::Cosh, 1)).add(&c4.mul(&of_t(Func::Sinh, 1))),
        ),
        CaseTag::ComplexRoots => {
            let (ep, em) = (of_t(Func::Exp, 1), of_t(Func::Exp, -1));
            let x = c1
                .mul(&ep)
                .mul(&cos)
                .add(&c2.mul(&ep).mul(&sin))
                .add(&c3.mul(&em).mul(&cos))
                .add(&c4.mul(&em).mul(&sin));
            let y = x.diff(Var::T).and_then(|d| d.diff(Var::T)).expect("polynomial in atoms");
            (x, y.scale(k))
        }
    }
}

/// `(x'' - G1, y'' - G2)` for the model right-hand sides `G`.
pub fn linear_residuals(case: CaseTag, x: &Frac, y: &Frac) -> Result<[Frac; 2]> {
    let xdd = x.diff(Var::T)?.diff(Var::T)?;
    let ydd = y.diff(Var::T)?.diff(Var::T)?;
    Ok(match case {
        CaseTag::RealRoots => [xdd.add(x), ydd.sub(y)],
        CaseTag::ComplexRoots => {
            let two = Frac::int(2);
            [xdd.add(&y.mul(&two)), ydd.sub(&x.mul(&two))]
        }
    })
}

pub fn linear_solution_check(case: CaseTag) -> Result<bool> {
    let (x, y) = model_solution(case);
    Ok(linear_residuals(case, &x, &y)?.iter().all(Frac::is_zero))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambdacollect::{transcribed_system, SystemTag};

    fn cand(u: &str, v: &str) -> SolutionCandidate {
        SolutionCandidate::parse(u, v).unwrap()
    }

    #[test]
    fn candidates_respect_dependencies() {
        assert!(SolutionCandidate::parse("t*p1", "0").is_err());
        assert!(SolutionCandidate::parse("sin(lam)", "0").is_err());
        assert!(SolutionCandidate::parse("u_p1", "0").is_err());
        assert!(SolutionCandidate::parse("x1*p2^2", "exp(x2)").is_ok());
    }

    #[test]
    fn explicit_system_residuals() {
        let sys = transcribed_system(SystemTag::Explicit).unwrap();
        let r = residuals(&sys, &cand("p1^3", "0")).unwrap();
        assert!(r.iter().all(Frac::is_zero));
        let r = residuals(&sys, &cand("p1*p2", "0")).unwrap();
        assert!(r.iter().all(Frac::is_zero));
        let r = residuals(&sys, &cand("p1*p2", "p1*p2")).unwrap();
        assert!(r.iter().any(|e| !e.is_zero()));
        let n = numeric_residuals(&sys, &cand("p1^3", "p2^3"), 200, 0, 1e-10).unwrap();
        assert!(n.passed() && n.max_residual < 1e-10);
        let n = numeric_residuals(&sys, &cand("p1*p2", "p1*p2"), 50, 0, 1e-9).unwrap();
        assert!(n.max_residual > 0.1);
    }

    #[test]
    fn separated_form_checks() {
        assert!(separated_form_check(&cand("x2*p2 + p1*x1*p2^2 + x1*p1^3", "p1*x2 + p2^3")).unwrap());
        assert!(!separated_form_check(&cand("p1^2*p2", "0")).unwrap());
        assert!(separated_form_check(&cand("p1^3", "0")).unwrap());
        assert!(nonflat_check(&cand("p1^3", "0")).unwrap());
        assert!(!nonflat_check(&cand("0", "0")).unwrap());
        assert!(!nonflat_check(&cand("p1^2", "0")).unwrap());
        assert!(curvature_nonzero(&cand("p1^3", "0")).unwrap());
        assert!(!curvature_nonzero(&cand("p1^2", "x2*p2")).unwrap());
    }

    #[test]
    fn cone_values() {
        assert_eq!(cone_residual(CaseTag::RealRoots, Point4::new(1.0, 1.0, 0.0, 0.0)).unwrap(), 0.0);
        let p = ruling_point(CaseTag::RealRoots, 2.0, 3.0, 0.5);
        assert!(cone_residual(CaseTag::RealRoots, p).unwrap().abs() < 1e-12);
        let p = ruling_point(CaseTag::ComplexRoots, 1.0, 1.0, 0.3);
        assert!(cone_residual(CaseTag::ComplexRoots, p).unwrap().abs() < 1e-10);
        assert!((cone2_transcribed_residual(p).unwrap() - 2.4).abs() < 1e-10);
        assert!(cone_residual(CaseTag::RealRoots, Point4::new(1.0, 1.0, 0.0, 2.0)).is_err());
        assert!(cone_residual(CaseTag::ComplexRoots, Point4::new(1.0, 0.0, 0.0, 0.0)).is_err());
    }

    #[test]
    fn ruling_points() {
        assert_eq!(ruling_point(CaseTag::RealRoots, 1.0, 1.0, 0.0), Point4::new(1.0, 1.0, 0.0, 0.0));
        let p = ruling_point(CaseTag::RealRoots, 0.0, 1.0, 0.4);
        assert_eq!((p.x1, p.x3), (0.0, 0.0));
        assert_eq!((p.x2, p.x4), (0.4f64.cosh(), 0.4f64.sinh()));
        assert_eq!(ruling_point(CaseTag::ComplexRoots, 1.0, 0.0, 0.0), Point4::new(1.0, 0.0, 1.0, 0.0));
    }

    #[test]
    fn ruling_and_chart_reports() {
        for case in CaseTag::ALL {
            assert_eq!(verify_ruling(case, 300, 1e-9, 0).status, Status::Pass);
            assert_eq!(verify_ruling(case, 300, 1e-16, 0).status, Status::Fail);
            assert_eq!(chart_equivalence(case, 300, 1e-10, 0).status, Status::Pass);
        }
        let r = chart_equivalence_with(CaseTag::RealRoots, ChartMap::Stated, 300, 1e-10, 0);
        assert_ne!(r.status, Status::Pass);
        let r = verify_ruling_with(300, 1e-9, 0, CaseTag::ComplexRoots, cone2_transcribed_residual);
        assert_eq!(r.status, Status::Fail);
        let r = verify_ruling_with(10, 1e-9, 0, CaseTag::RealRoots, |_| Err(Error::Domain("x".into())));
        assert_eq!(r.status, Status::Inconclusive);
        assert!(chart_residual(CaseTag::RealRoots, ChartMap::Corrected, [1.0, 1.0, 2.0, 0.0]).is_err());
    }

    #[test]
    fn linear_models() {
        for case in CaseTag::ALL {
            assert!(linear_solution_check(case).unwrap());
        }
        for k in [Scalar::one(), Scalar::ratio(1, 2)] {
            let (x, y) = model_solution_with(CaseTag::ComplexRoots, &k);
            let r = linear_residuals(CaseTag::ComplexRoots, &x, &y).unwrap();
            assert!(r.iter().any(|e| !e.is_zero()));
        }
    }
}
