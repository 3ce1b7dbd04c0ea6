//! Seeded random inputs for the engine property checks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::jetfield::VectorField;
use crate::symcore::{Assignment, Expr, Frac, Func, JetSymbol, Poly, Scalar, Var};

pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

const VARS: [Var; 5] = [Var::X1, Var::X2, Var::P1, Var::P2, Var::Lam];

/// The jets that random expressions may contain.
pub fn jets() -> Vec<JetSymbol> {
    [
        Expr::u(&[Var::P1]),
        Expr::v(&[Var::P2]),
        Expr::u(&[Var::X1, Var::P2]),
        Expr::v(&[Var::P1, Var::P2]),
    ]
    .into_iter()
    .map(|e| match e {
        Expr::Jet(j) => j,
        _ => unreachable!(),
    })
    .collect()
}

fn small_int(r: &mut ChaCha8Rng) -> Expr {
    let n = r.gen_range(-3..=3);
    if r.gen_bool(0.2) {
        Expr::ratio(n, r.gen_range(1..=4))
    } else {
        Expr::int(n)
    }
}

fn leaf(r: &mut ChaCha8Rng, with_jets: bool) -> Expr {
    match r.gen_range(0..if with_jets { 5 } else { 4 }) {
        0 => small_int(r),
        1 => Expr::var(*VARS.choose(r).unwrap()),
        2 => {
            let f = *[Func::Sin, Func::Cos, Func::Sinh, Func::Cosh].choose(r).unwrap();
            Expr::func(f, Expr::var(Var::Lam))
        }
        3 => Expr::exp(Expr::var(*[Var::X1, Var::P2].choose(r).unwrap())),
        _ => Expr::Jet(jets().choose(r).unwrap().clone()),
    }
}

/// A jet-free expression that stays away from zero on the sample box.
fn denominator(r: &mut ChaCha8Rng) -> Expr {
    let base = leaf(r, false);
    Expr::Add(vec![Expr::int(r.gen_range(2..=4)), base.pow(2)])
}

/// A random expression tree of the given depth.
pub fn expr(r: &mut ChaCha8Rng, depth: u32) -> Expr {
    expr_with(r, depth, true)
}

pub fn expr_with(r: &mut ChaCha8Rng, depth: u32, with_jets: bool) -> Expr {
    if depth == 0 {
        return leaf(r, with_jets);
    }
    match r.gen_range(0..6) {
        0 => leaf(r, with_jets),
        1 | 2 => Expr::Add((0..r.gen_range(2..=3)).map(|_| expr_with(r, depth - 1, with_jets)).collect()),
        3 => Expr::Mul((0..2).map(|_| expr_with(r, depth - 1, with_jets)).collect()),
        4 => expr_with(r, depth - 1, with_jets).pow(r.gen_range(0..=3)),
        _ => expr_with(r, depth - 1, with_jets).div(denominator(r)),
    }
}

/// Values for every coordinate and every jet of [`jets`], in `[-1, 1]`.
pub fn point(r: &mut ChaCha8Rng) -> Assignment {
    let mut a = Assignment::new();
    for v in Var::ALL {
        a = a.with_var(v, r.gen_range(-1.0..=1.0));
    }
    for j in jets() {
        a = a.with_jet(j, r.gen_range(-1.0..=1.0));
    }
    a
}

/// A vector field over `x1, p1, lam` with small polynomial-trigonometric
/// coefficients.
pub fn field(r: &mut ChaCha8Rng) -> VectorField {
    let dirs = [Var::X1, Var::P1, Var::Lam];
    VectorField::from_pairs(dirs.into_iter().map(|d| {
        let e = expr_with(r, 2, false);
        (d, Frac::from_expr(&e).expect("jet-free expressions normalize"))
    }))
}

fn jet_atom_poly(j: &JetSymbol) -> Poly {
    Frac::jet(j.clone()).num().clone()
}

/// A polynomial of degree at most `degree` in the corpus jets and `x1`.
pub fn jet_poly(r: &mut ChaCha8Rng, terms: usize, degree: u32) -> Poly {
    let js = jets();
    let mut out = Poly::zero();
    for _ in 0..terms {
        let mut t = Poly::constant(Scalar::from_int(r.gen_range(-4..=4)));
        for _ in 0..r.gen_range(0..=degree) {
            let factor = if r.gen_bool(0.2) {
                Frac::var(Var::X1).num().clone()
            } else {
                jet_atom_poly(js.choose(r).unwrap())
            };
            t = t.mul(&factor);
        }
        out = out.add(&t);
    }
    out
}

/// A pair `(u(x1, p1), v(x2, p2))` with rational coefficients and total
/// degree at most 4.
pub fn separated_pair(r: &mut ChaCha8Rng) -> (Frac, Frac) {
    let mut body = |x: Var, p: Var| {
        let mut acc = Frac::zero();
        for i in 0..=4u32 {
            for j in 0..=(4 - i) {
                if !r.gen_bool(0.35) {
                    continue;
                }
                let c = Scalar::ratio(r.gen_range(-5..=5), r.gen_range(1..=3));
                let m = Frac::var(x).pow(i as i64).unwrap().mul(&Frac::var(p).pow(j as i64).unwrap());
                acc = acc.add(&m.scale(&c));
            }
        }
        acc
    };
    (body(Var::X1, Var::P1), body(Var::X2, Var::P2))
}
