//! Exact linear solves over jet-free rational functions.
//!
//! Pivots must be jet-free so they can be inverted; among the admissible
//! entries of a column the one with the fewest terms is chosen.

use super::frac::Frac;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct LinearSolution {
    pub x: Vec<Frac>,
    /// Pivot values in elimination order. Their product is the determinant
    /// up to sign; the frame degenerates where one of them vanishes.
    pub pivots: Vec<Frac>,
}

fn weight(f: &Frac) -> usize {
    f.num().len() + f.den().len()
}

/// Solves `A x = b` for square `A`.
pub fn solve_linear(a: &[Vec<Frac>], b: &[Frac]) -> Result<LinearSolution> {
    if a.len() != b.len() || a.iter().any(|row| row.len() != a.len()) {
        return Err(Error::Dimension(format!(
            "expected a square system, got {} rows for {} right-hand sides",
            a.len(),
            b.len()
        )));
    }
    solve_overdetermined(a, b)
}

/// Solves `A x = b` for `m >= n` equations in `n` unknowns, requiring full
/// column rank and consistency of the surplus equations.
pub fn solve_overdetermined(a: &[Vec<Frac>], b: &[Frac]) -> Result<LinearSolution> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    if b.len() != m || a.iter().any(|row| row.len() != n) {
        return Err(Error::Dimension(format!(
            "matrix rows and right-hand side disagree ({m} vs {})",
            b.len()
        )));
    }
    let mut rows: Vec<(Vec<Frac>, Frac)> = a
        .iter()
        .cloned()
        .zip(b.iter().cloned())
        .collect();
    let mut pivots = Vec::with_capacity(n);
    for col in 0..n {
        let rank = col;
        let best = (rank..m)
            .filter(|&r| !rows[r].0[col].is_zero())
            .min_by_key(|&r| (rows[r].0[col].has_jets(), weight(&rows[r].0[col])));
        let Some(best) = best else {
            return Err(Error::Singular {
                column: col,
                rank,
                minor: format!("leading minor on columns 0..={col}"),
            });
        };
        if rows[best].0[col].has_jets() {
            return Err(Error::NonInvertiblePivot(rows[best].0[col].to_string()));
        }
        rows.swap(rank, best);
        let pivot = rows[rank].0[col].clone();
        let inv = pivot.recip()?;
        let (prow, pb) = {
            let (r, rb) = &rows[rank];
            (
                r.iter().map(|x| x.mul(&inv)).collect::<Vec<_>>(),
                rb.mul(&inv),
            )
        };
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank {
                continue;
            }
            let factor = row.0[col].clone();
            if factor.is_zero() {
                continue;
            }
            for (k, entry) in row.0.iter_mut().enumerate().skip(col) {
                if !prow[k].is_zero() {
                    *entry = entry.sub(&factor.mul(&prow[k]));
                }
            }
            row.1 = row.1.sub(&factor.mul(&pb));
        }
        rows[rank] = (prow, pb);
        pivots.push(pivot);
    }
    for (_, rhs) in &rows[n..] {
        if !rhs.is_zero() {
            return Err(Error::Inconsistent(rhs.to_string()));
        }
    }
    Ok(LinearSolution {
        x: rows.into_iter().take(n).map(|(_, rhs)| rhs).collect(),
        pivots,
    })
}

/// Determinant of a 2x2 matrix.
pub fn det2(a: &[Vec<Frac>]) -> Frac {
    a[0][0].mul(&a[1][1]).sub(&a[0][1].mul(&a[1][0]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::expr::Func;
    use crate::symcore::symbols::Var;

    fn lam_fn(f: Func) -> Frac {
        Frac::func(f, Frac::var(Var::Lam)).unwrap()
    }

    #[test]
    fn identity_system() {
        let a = vec![vec![Frac::one(), Frac::zero()], vec![Frac::zero(), Frac::one()]];
        let b = vec![lam_fn(Func::Sin), Frac::u(&[Var::P1])];
        let sol = solve_linear(&a, &b).unwrap();
        assert_eq!(sol.x, b);
    }

    #[test]
    fn trigonometric_diagonal() {
        let (c, ch) = (lam_fn(Func::Cos), lam_fn(Func::Cosh));
        let f = Frac::u(&[Var::P1]);
        let g = Frac::v(&[Var::P2]);
        let a = vec![vec![c.clone(), Frac::zero()], vec![Frac::zero(), ch.clone()]];
        let b = vec![c.mul(&f), ch.mul(&g)];
        let sol = solve_linear(&a, &b).unwrap();
        assert_eq!(sol.x, vec![f, g]);
    }

    #[test]
    fn singular_and_inconsistent() {
        let s = lam_fn(Func::Sin);
        let a = vec![vec![s.clone(), s.clone()], vec![s.clone(), s.clone()]];
        let b = vec![Frac::one(), Frac::one()];
        assert!(matches!(
            solve_linear(&a, &b),
            Err(Error::Singular { column: 1, rank: 1, .. })
        ));
        let a = vec![vec![Frac::one()], vec![Frac::one()]];
        let b = vec![Frac::one(), Frac::int(2)];
        assert!(matches!(solve_overdetermined(&a, &b), Err(Error::Inconsistent(_))));
        let a = vec![vec![Frac::u(&[Var::P1])]];
        assert!(matches!(
            solve_linear(&a, &[Frac::one()]),
            Err(Error::NonInvertiblePivot(_))
        ));
    }

    #[test]
    fn residual_vanishes() {
        let (s, c) = (lam_fn(Func::Sin), lam_fn(Func::Cos));
        let a = vec![vec![c.clone(), s.clone()], vec![s.neg(), c.clone()]];
        let b = vec![Frac::u(&[Var::P1]), Frac::v(&[])];
        let sol = solve_linear(&a, &b).unwrap();
        for (row, rhs) in a.iter().zip(&b) {
            let lhs = row[0].mul(&sol.x[0]).add(&row[1].mul(&sol.x[1]));
            assert!(lhs.sub(rhs).is_zero());
        }
        assert!(det2(&a).sub(&Frac::one()).is_zero());
    }
}
