//! Phase-I simplex on a dense tableau.
//!
//! Finds `x >= 0` with `A x = b` by minimizing the sum of artificial
//! variables. Bland's rule (lowest entering index, lowest leaving basis
//! index on ratio ties) rules out cycling.

/// Entries with magnitude below this are not used as pivots.
pub const PIVOT_TOL: f64 = 1e-10;
const MAX_ITERATIONS: usize = 100_000;

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseOne {
    /// Values of the structural variables at the final basis.
    pub x: Vec<f64>,
    /// Sum of the artificial variables at the optimum; zero iff feasible.
    pub infeasibility: f64,
    pub iterations: usize,
}

/// `a` is row-major with `a.len() == b.len()` rows of equal length.
pub fn phase_one(a: &[Vec<f64>], b: &[f64]) -> PhaseOne {
    let m = a.len();
    assert_eq!(m, b.len(), "row count mismatch");
    let n = a.first().map_or(0, Vec::len);
    let width = n + m + 1;
    let rhs = width - 1;

    let mut tab = vec![vec![0.0; width]; m];
    for i in 0..m {
        assert_eq!(a[i].len(), n, "ragged constraint matrix");
        let sign = if b[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..n {
            tab[i][j] = sign * a[i][j];
        }
        tab[i][n + i] = 1.0;
        tab[i][rhs] = sign * b[i];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // reduced costs of the phase-I objective (artificials cost 1)
    let mut reduced = vec![0.0; width];
    for row in &tab {
        for j in 0..n {
            reduced[j] -= row[j];
        }
        reduced[rhs] -= row[rhs];
    }

    let mut iterations = 0;
    while iterations < MAX_ITERATIONS {
        let Some(enter) = (0..n + m).find(|&j| reduced[j] < -PIVOT_TOL) else {
            break;
        };
        let mut leave: Option<usize> = None;
        let mut best = f64::INFINITY;
        for i in 0..m {
            let coef = tab[i][enter];
            if coef > PIVOT_TOL {
                let ratio = tab[i][rhs] / coef;
                let better = ratio < best - 1e-15
                    || (ratio <= best + 1e-15 && leave.is_some_and(|l| basis[i] < basis[l]));
                if leave.is_none() || better {
                    best = ratio;
                    leave = Some(i);
                }
            }
        }
        // phase I is bounded below by zero, so a missing ratio cannot be
        // unboundedness; it only happens when every candidate is below the pivot
        // tolerance
        let Some(row) = leave else { break };

        let pivot = tab[row][enter];
        for v in tab[row].iter_mut() {
            *v /= pivot;
        }
        let pivot_row = tab[row].clone();
        for (i, r) in tab.iter_mut().enumerate() {
            if i == row {
                continue;
            }
            let f = r[enter];
            if f != 0.0 {
                for (v, p) in r.iter_mut().zip(&pivot_row) {
                    *v -= f * p;
                }
            }
        }
        let f = reduced[enter];
        for (v, p) in reduced.iter_mut().zip(&pivot_row) {
            *v -= f * p;
        }
        basis[row] = enter;
        iterations += 1;
    }

    let mut x = vec![0.0; n];
    let mut infeasibility = 0.0;
    for (i, &j) in basis.iter().enumerate() {
        if j < n {
            x[j] = tab[i][rhs];
        } else {
            infeasibility += tab[i][rhs];
        }
    }
    PhaseOne {
        x,
        infeasibility,
        iterations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn feasible_system() {
        // x + y = 1, x - y = 0.5
        let a = vec![vec![1.0, 1.0], vec![1.0, -1.0]];
        let r = phase_one(&a, &[1.0, 0.5]);
        assert!(r.infeasibility < 1e-12);
        assert!((r.x[0] - 0.75).abs() < 1e-12 && (r.x[1] - 0.25).abs() < 1e-12);
    }

    #[test]
    fn infeasible_system() {
        // x + y = 1, x + y = 2
        let a = vec![vec![1.0, 1.0], vec![1.0, 1.0]];
        let r = phase_one(&a, &[1.0, 2.0]);
        assert!((r.infeasibility - 1.0).abs() < 1e-12);
    }

    #[test]
    fn negative_rhs_and_nonnegativity() {
        // x - y = -1 needs y >= 1; x + y = 1 then forces x = 0, y = 1
        let a = vec![vec![1.0, -1.0], vec![1.0, 1.0]];
        let r = phase_one(&a, &[-1.0, 1.0]);
        assert!(r.infeasibility < 1e-12);
        assert!(r.x[0].abs() < 1e-12 && (r.x[1] - 1.0).abs() < 1e-12);
        // x = -1 has no nonnegative solution
        let r = phase_one(&[vec![1.0]], &[-1.0]);
        assert!((r.infeasibility - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_columns() {
        // many duplicate columns, as in the deterministic correlator vectors
        let a = vec![vec![1.0; 6], vec![1.0, -1.0, 1.0, -1.0, 1.0, -1.0]];
        let r = phase_one(&a, &[1.0, 0.0]);
        assert!(r.infeasibility < 1e-12);
        let sum: f64 = r.x.iter().sum();
        assert!((sum - 1.0).abs() < 1e-12);
        assert!(r.x.iter().all(|&v| v >= -1e-12));
    }
}
