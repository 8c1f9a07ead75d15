//! Dense tableau simplex for the small linear programs behind polytope duals
//! in dimension n > 2:
//!
//! ```text
//! maximize  <c, y>   subject to   <v_i, y> <= 1,  y free.
//! ```
//!
//! The origin is always feasible, so no phase one is needed. Bland's rule
//! prevents cycling.

use crate::scalar::{lit, Scalar};

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum LpOutcome<T> {
    Optimal(T),
    Unbounded,
}

pub(crate) fn max_over_polar<T: Scalar>(rows: &[Vec<T>], c: &[T]) -> LpOutcome<T> {
    let m = rows.len();
    let n = c.len();
    // columns: p (n), q (n), slack (m), rhs
    let width = 2 * n + m + 1;
    let rhs = width - 1;
    let mut tab = vec![T::zero(); (m + 1) * width];
    for (i, row) in rows.iter().enumerate() {
        for j in 0..n {
            tab[i * width + j] = row[j];
            tab[i * width + n + j] = -row[j];
        }
        tab[i * width + 2 * n + i] = T::one();
        tab[i * width + rhs] = T::one();
    }
    // objective row stores reduced costs of the minimization of -<c,y>
    let obj = m * width;
    for j in 0..n {
        tab[obj + j] = -c[j];
        tab[obj + n + j] = c[j];
    }
    let mut basis: Vec<usize> = (0..m).map(|i| 2 * n + i).collect();
    let eps: T = lit(1e-13);

    for _ in 0..10_000 {
        let Some(enter) = (0..rhs).find(|&j| tab[obj + j] < -eps) else {
            return LpOutcome::Optimal(tab[obj + rhs]);
        };
        let mut leave: Option<(usize, T)> = None;
        for i in 0..m {
            let a = tab[i * width + enter];
            if a > eps {
                let ratio = tab[i * width + rhs] / a;
                match leave {
                    None => leave = Some((i, ratio)),
                    Some((li, lr)) => {
                        if ratio < lr - eps || (ratio <= lr + eps && basis[i] < basis[li]) {
                            leave = Some((i, ratio));
                        }
                    }
                }
            }
        }
        let Some((pivot_row, _)) = leave else {
            return LpOutcome::Unbounded;
        };
        let p = tab[pivot_row * width + enter];
        for j in 0..width {
            tab[pivot_row * width + j] /= p;
        }
        for i in 0..=m {
            if i == pivot_row {
                continue;
            }
            let f = tab[i * width + enter];
            if f != T::zero() {
                for j in 0..width {
                    let v = tab[pivot_row * width + j];
                    tab[i * width + j] -= f * v;
                }
            }
        }
        basis[pivot_row] = enter;
    }
    LpOutcome::Unbounded
}
