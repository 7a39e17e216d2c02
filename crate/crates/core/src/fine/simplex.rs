//! Dense phase-1 simplex for `A x = b, x ≥ 0` with Bland's anti-cycling rule.

/// Outcome of a phase-1 solve.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseOne {
    /// Optimal sum of artificial variables; zero iff the system is feasible.
    pub objective: f64,
    /// Primal point from the final basis.
    pub x: Vec<f64>,
    /// Dual multipliers for the original rows. When `objective > 0` they
    /// satisfy `yᵀA ≤ 0` and `yᵀb = objective`.
    pub y: Vec<f64>,
    pub pivots: usize,
}

const PIVOT_EPS: f64 = 1e-12;
const COST_EPS: f64 = 1e-12;

/// Minimize the total artificial slack of `A x = b`, `x ≥ 0`.
///
/// `a` is row-major with `rows × cols` entries. Deterministic for fixed input.
pub fn phase_one(a: &[f64], b: &[f64], rows: usize, cols: usize) -> PhaseOne {
    assert_eq!(a.len(), rows * cols, "constraint matrix size");
    assert_eq!(b.len(), rows, "right-hand side size");
    let width = cols + rows + 1;
    let rhs = width - 1;
    // Rows 0..rows are constraints, row `rows` is the phase-1 cost row.
    let mut t = vec![0.0; (rows + 1) * width];
    let mut flipped = vec![false; rows];
    for i in 0..rows {
        let sign = if b[i] < 0.0 {
            flipped[i] = true;
            -1.0
        } else {
            1.0
        };
        for j in 0..cols {
            t[i * width + j] = sign * a[i * cols + j];
        }
        t[i * width + cols + i] = 1.0;
        t[i * width + rhs] = sign * b[i];
    }
    // Reduced costs: c_j − 1ᵀA_j with artificials basic.
    for j in 0..width {
        if j >= cols && j < cols + rows {
            continue;
        }
        let s: f64 = (0..rows).map(|i| t[i * width + j]).sum();
        t[rows * width + j] = -s;
    }
    let mut basis: Vec<usize> = (cols..cols + rows).collect();
    let mut pivots = 0;
    loop {
        let cost = &t[rows * width..rows * width + cols + rows];
        let Some(enter) = cost.iter().position(|&c| c < -COST_EPS) else {
            break;
        };
        let mut leave: Option<usize> = None;
        let mut best = f64::INFINITY;
        for i in 0..rows {
            let aij = t[i * width + enter];
            if aij > PIVOT_EPS {
                let ratio = t[i * width + rhs] / aij;
                let better = match leave {
                    None => true,
                    Some(l) => {
                        ratio < best - 1e-15 || (ratio <= best + 1e-15 && basis[i] < basis[l])
                    }
                };
                if better {
                    best = ratio;
                    leave = Some(i);
                }
            }
        }
        let Some(r) = leave else {
            // Unbounded direction cannot occur in phase 1 (objective ≥ 0).
            break;
        };
        pivot(&mut t, rows + 1, width, r, enter);
        basis[r] = enter;
        pivots += 1;
    }
    let mut x = vec![0.0; cols];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < cols {
            x[bv] = t[i * width + rhs].max(0.0);
        }
    }
    let objective = -t[rows * width + rhs];
    let y = (0..rows)
        .map(|i| {
            let yi = 1.0 - t[rows * width + cols + i];
            if flipped[i] {
                -yi
            } else {
                yi
            }
        })
        .collect();
    PhaseOne {
        objective,
        x,
        y,
        pivots,
    }
}

fn pivot(t: &mut [f64], nrows: usize, width: usize, r: usize, c: usize) {
    let p = t[r * width + c];
    for j in 0..width {
        t[r * width + j] /= p;
    }
    for i in 0..nrows {
        if i == r {
            continue;
        }
        let f = t[i * width + c];
        if f == 0.0 {
            continue;
        }
        for j in 0..width {
            t[i * width + j] -= f * t[r * width + j];
        }
        t[i * width + c] = 0.0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_feasible_system() {
        // x + y = 1, x - y = 0.5
        let res = phase_one(&[1.0, 1.0, 1.0, -1.0], &[1.0, 0.5], 2, 2);
        assert!(res.objective.abs() < 1e-12);
        assert!((res.x[0] - 0.75).abs() < 1e-12);
        assert!((res.x[1] - 0.25).abs() < 1e-12);
    }

    #[test]
    fn infeasible_system_yields_farkas_vector() {
        // x + y = 1, x + y = 2
        let a = [1.0, 1.0, 1.0, 1.0];
        let b = [1.0, 2.0];
        let res = phase_one(&a, &b, 2, 2);
        assert!(res.objective > 0.5);
        for j in 0..2 {
            let ya: f64 = (0..2).map(|i| res.y[i] * a[i * 2 + j]).sum();
            assert!(ya <= 1e-12);
        }
        let yb: f64 = res.y.iter().zip(b).map(|(y, b)| y * b).sum();
        assert!((yb - res.objective).abs() < 1e-12);
    }

    #[test]
    fn negative_right_hand_side() {
        // -x = -0.3 with x ≥ 0
        let res = phase_one(&[-1.0], &[-0.3], 1, 1);
        assert!(res.objective.abs() < 1e-12);
        assert!((res.x[0] - 0.3).abs() < 1e-12);
        // x = -0.3 is infeasible
        let res = phase_one(&[1.0], &[-0.3], 1, 1);
        assert!((res.objective - 0.3).abs() < 1e-12);
        assert!(res.y[0] * 1.0 <= 1e-12 && res.y[0] * -0.3 > 0.0);
    }

    #[test]
    fn redundant_rows() {
        // x + y = 1 twice, x = 0.2
        let a = [1.0, 1.0, 1.0, 1.0, 1.0, 0.0];
        let res = phase_one(&a, &[1.0, 1.0, 0.2], 3, 2);
        assert!(res.objective.abs() < 1e-12);
        assert!((res.x[1] - 0.8).abs() < 1e-12);
    }
}
