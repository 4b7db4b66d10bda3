//! Dense two-phase simplex, sized for desk-scale problems.
//!
//! The geometry kernel needs two linear-programming primitives: a convex-hull
//! membership test (feasibility only) and coordinate bounds for halfspace
//! systems (small optimizations). Problems here have at most a few hundred
//! variables and a dozen-odd rows, so a dense tableau with Bland's rule is
//! simple, cycle-free, and fast enough.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Entries below this magnitude are unusable as pivots.
const PIVOT_TOL: f64 = 1e-11;
/// Reduced costs above `-COST_TOL` count as optimal.
const COST_TOL: f64 = 1e-10;
/// Iteration cap; Bland's rule precludes cycling, so hitting this means
/// numerical breakdown.
const MAX_ITERS: usize = 20_000;

/// Minimize `c . x` subject to `a x = b`, `x >= 0` (all of `b >= 0`).
///
/// Returns `Ok(None)` when infeasible, otherwise the optimal solution and
/// value. The system is solved with a phase-1/phase-2 full tableau.
fn solve_standard(
    a: &DMatrix<f64>,
    b: &DVector<f64>,
    c: &DVector<f64>,
) -> Result<Option<(DVector<f64>, f64)>> {
    let m = a.nrows();
    let n = a.ncols();
    debug_assert!(b.iter().all(|&v| v >= 0.0));

    // Tableau columns: n real variables, m artificials, rhs.
    let mut t = DMatrix::zeros(m, n + m + 1);
    for i in 0..m {
        for j in 0..n {
            t[(i, j)] = a[(i, j)];
        }
        t[(i, n + i)] = 1.0;
        t[(i, n + m)] = b[i];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // Phase 1: minimize the sum of artificials.
    let mut phase1 = DVector::zeros(n + m);
    for j in n..n + m {
        phase1[j] = 1.0;
    }
    run_simplex(&mut t, &mut basis, &phase1, n + m)?;
    let feas: f64 = basis
        .iter()
        .enumerate()
        .filter(|(_, &j)| j >= n)
        .map(|(i, _)| t[(i, n + m)])
        .sum();
    let scale = b.amax().max(1.0);
    if feas > 1e-8 * scale {
        return Ok(None);
    }

    // Pivot remaining basic artificials out on any usable real column;
    // rows that admit none are redundant and stay inert.
    for i in 0..m {
        if basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| t[(i, j)].abs() > PIVOT_TOL) {
                pivot(&mut t, &mut basis, i, j);
            }
        }
    }

    // Phase 2 over the real columns only.
    let mut phase2 = DVector::zeros(n + m);
    for j in 0..n {
        phase2[j] = c[j];
    }
    run_simplex(&mut t, &mut basis, &phase2, n)?;

    let mut x = DVector::zeros(n);
    for (i, &j) in basis.iter().enumerate() {
        if j < n {
            x[j] = t[(i, n + m)];
        }
    }
    let value = c.dot(&x);
    Ok(Some((x, value)))
}

/// Run Bland-rule simplex on the tableau for the given cost vector.
/// Columns with index `>= enter_limit` are barred from entering.
fn run_simplex(
    t: &mut DMatrix<f64>,
    basis: &mut [usize],
    cost: &DVector<f64>,
    enter_limit: usize,
) -> Result<()> {
    let m = t.nrows();
    let rhs_col = t.ncols() - 1;
    for _ in 0..MAX_ITERS {
        // Reduced costs: c_j - c_B . B^-1 A_j, computed from the tableau.
        let mut entering = None;
        for j in 0..enter_limit {
            if basis.contains(&j) {
                continue;
            }
            let mut red = cost[j];
            for i in 0..m {
                red -= cost[basis[i]] * t[(i, j)];
            }
            if red < -COST_TOL {
                entering = Some(j);
                break; // Bland: first eligible index
            }
        }
        let Some(j) = entering else {
            return Ok(());
        };

        // Ratio test, ties to the smallest basis index (Bland).
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..m {
            let aij = t[(i, j)];
            if aij > PIVOT_TOL {
                let ratio = t[(i, rhs_col)] / aij;
                match leave {
                    None => leave = Some((i, ratio)),
                    Some((li, lr)) => {
                        if ratio < lr - 1e-12
                            || (ratio < lr + 1e-12 && basis[i] < basis[li])
                        {
                            leave = Some((i, ratio));
                        }
                    }
                }
            }
        }
        let Some((i, _)) = leave else {
            // Unbounded direction; our callers only pose bounded problems.
            return Err(Error::LpStalled);
        };
        pivot(t, basis, i, j);
    }
    Err(Error::LpStalled)
}

fn pivot(t: &mut DMatrix<f64>, basis: &mut [usize], row: usize, col: usize) {
    let cols = t.ncols();
    let p = t[(row, col)];
    for j in 0..cols {
        t[(row, j)] /= p;
    }
    for i in 0..t.nrows() {
        if i != row {
            let f = t[(i, col)];
            if f != 0.0 {
                for j in 0..cols {
                    t[(i, j)] -= f * t[(row, j)];
                }
            }
        }
    }
    basis[row] = col;
}

/// Is `p` a convex combination of `points`?
///
/// Decides feasibility of `{sum l_i q_i = p, sum l_i = 1, l >= 0}` by
/// phase-1 simplex. `feas_tol` is absolute on the residual scale.
pub fn in_convex_hull(p: &DVector<f64>, points: &[DVector<f64>]) -> Result<bool> {
    if points.is_empty() {
        return Ok(false);
    }
    let n = p.len();
    let m = points.len();
    // Rows: n coordinate equations plus the affine row; flip rows to b >= 0.
    let mut a = DMatrix::zeros(n + 1, m);
    let mut b = DVector::zeros(n + 1);
    for i in 0..n {
        let flip = if p[i] < 0.0 { -1.0 } else { 1.0 };
        for (j, q) in points.iter().enumerate() {
            a[(i, j)] = flip * q[i];
        }
        b[i] = flip * p[i];
    }
    for j in 0..m {
        a[(n, j)] = 1.0;
    }
    b[n] = 1.0;

    let zero = DVector::zeros(m);
    Ok(solve_standard(&a, &b, &zero)?.is_some())
}

/// Maximize `obj . x` over `{x : <a_k, x> <= b_k}` with free `x`.
///
/// Returns `Ok(None)` when the system is infeasible and
/// `Err(Error::LpStalled)` when the objective is unbounded above.
pub fn maximize(
    obj: &DVector<f64>,
    rows: &[(DVector<f64>, f64)],
) -> Result<Option<(DVector<f64>, f64)>> {
    let n = obj.len();
    let m = rows.len();
    if m == 0 {
        return Err(Error::EmptyInput("lp::maximize"));
    }
    // Standard form: x = u - v, slack s: A(u - v) + s = b.
    let cols = 2 * n + m;
    let mut a = DMatrix::zeros(m, cols);
    let mut b = DVector::zeros(m);
    for (i, (ai, bi)) in rows.iter().enumerate() {
        let flip = if *bi < 0.0 { -1.0 } else { 1.0 };
        for j in 0..n {
            a[(i, j)] = flip * ai[j];
            a[(i, n + j)] = -flip * ai[j];
        }
        a[(i, 2 * n + i)] = flip;
        b[i] = flip * bi;
    }
    let mut c = DVector::zeros(cols);
    for j in 0..n {
        c[j] = -obj[j];
        c[n + j] = obj[j];
    }
    match solve_standard(&a, &b, &c)? {
        None => Ok(None),
        Some((xs, _)) => {
            let mut x = DVector::zeros(n);
            for j in 0..n {
                x[j] = xs[j] - xs[n + j];
            }
            Ok(Some((x.clone(), obj.dot(&x))))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(coords: &[f64]) -> DVector<f64> {
        DVector::from_row_slice(coords)
    }

    #[test]
    fn membership_in_triangle() {
        let tri = vec![v(&[0.0, 0.0]), v(&[1.0, 0.0]), v(&[0.0, 1.0])];
        assert!(in_convex_hull(&v(&[0.25, 0.25]), &tri).unwrap());
        assert!(in_convex_hull(&v(&[0.5, 0.5]), &tri).unwrap()); // boundary
        assert!(!in_convex_hull(&v(&[0.6, 0.6]), &tri).unwrap());
        assert!(!in_convex_hull(&v(&[-0.1, 0.0]), &tri).unwrap());
    }

    #[test]
    fn maximize_over_square() {
        let rows = vec![
            (v(&[1.0, 0.0]), 1.0),
            (v(&[-1.0, 0.0]), 1.0),
            (v(&[0.0, 1.0]), 1.0),
            (v(&[0.0, -1.0]), 1.0),
        ];
        let (x, val) = maximize(&v(&[1.0, 1.0]), &rows).unwrap().unwrap();
        assert!((val - 2.0).abs() < 1e-9);
        assert!((x[0] - 1.0).abs() < 1e-9 && (x[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn infeasible_system_detected() {
        let rows = vec![(v(&[1.0]), -1.0), (v(&[-1.0]), -1.0)]; // x <= -1, x >= 1
        assert!(maximize(&v(&[1.0]), &rows).unwrap().is_none());
    }

    #[test]
    fn unbounded_reported_as_error() {
        let rows = vec![(v(&[-1.0]), 0.0)]; // x >= 0, maximize x
        assert!(maximize(&v(&[1.0]), &rows).is_err());
    }
}
