//! Dense two-phase simplex for the linear feasibility problems behind the
//! certificate machinery.
//!
//! Problems here are tiny (tens to a few hundred rows), so a dense tableau
//! with Bland's anti-cycling rule is plenty. The solver answers pure
//! feasibility questions over nonnegative variables; callers encode shifted
//! or box-constrained variables themselves.

/// Constraint sense.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Le,
    Ge,
    Eq,
}

/// One linear constraint `coeffs . x REL rhs`.
#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub rel: Rel,
    pub rhs: f64,
}

impl Constraint {
    pub fn new(coeffs: Vec<f64>, rel: Rel, rhs: f64) -> Self {
        Constraint { coeffs, rel, rhs }
    }
}

/// Outcome of a phase-1 feasibility solve.
#[derive(Debug, Clone)]
pub enum Feasibility {
    /// A feasible point (all original variables, nonnegative).
    Feasible(Vec<f64>),
    /// Total residual infeasibility and the phase-1 row multipliers, a
    /// Farkas-style witness of why no nonnegative solution exists.
    Infeasible { gap: f64, dual: Vec<f64> },
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }
}

const PIVOT_TOL: f64 = 1e-11;

/// Decide feasibility of `{ x >= 0 : constraints }` by a phase-1 simplex
/// with artificial variables and Bland's rule.
pub fn feasible(n_vars: usize, constraints: &[Constraint]) -> Feasibility {
    let m = constraints.len();
    // Normalize rows to nonnegative rhs.
    let mut rows: Vec<(Vec<f64>, Rel, f64)> = Vec::with_capacity(m);
    for c in constraints {
        assert_eq!(c.coeffs.len(), n_vars, "constraint width mismatch");
        if c.rhs < 0.0 {
            let coeffs: Vec<f64> = c.coeffs.iter().map(|x| -x).collect();
            let rel = match c.rel {
                Rel::Le => Rel::Ge,
                Rel::Ge => Rel::Le,
                Rel::Eq => Rel::Eq,
            };
            rows.push((coeffs, rel, -c.rhs));
        } else {
            rows.push((c.coeffs.clone(), c.rel, c.rhs));
        }
    }
    // Column layout: [ original | slack/surplus | artificial | rhs ].
    let mut n_slack = 0usize;
    let mut n_art = 0usize;
    for (_, rel, _) in &rows {
        match rel {
            Rel::Le => n_slack += 1,
            Rel::Ge => {
                n_slack += 1;
                n_art += 1;
            }
            Rel::Eq => n_art += 1,
        }
    }
    let width = n_vars + n_slack + n_art + 1;
    let rhs_col = width - 1;
    let mut tab = vec![vec![0.0_f64; width]; m + 1];
    let mut basis = vec![0usize; m];
    let mut slack_idx = n_vars;
    let mut art_idx = n_vars + n_slack;
    let mut art_cols: Vec<usize> = Vec::new();
    for (i, (coeffs, rel, rhs)) in rows.iter().enumerate() {
        tab[i][..n_vars].copy_from_slice(coeffs);
        tab[i][rhs_col] = *rhs;
        match rel {
            Rel::Le => {
                tab[i][slack_idx] = 1.0;
                basis[i] = slack_idx;
                slack_idx += 1;
            }
            Rel::Ge => {
                tab[i][slack_idx] = -1.0;
                slack_idx += 1;
                tab[i][art_idx] = 1.0;
                basis[i] = art_idx;
                art_cols.push(art_idx);
                art_idx += 1;
            }
            Rel::Eq => {
                tab[i][art_idx] = 1.0;
                basis[i] = art_idx;
                art_cols.push(art_idx);
                art_idx += 1;
            }
        }
    }
    // Phase-1 objective: minimize sum of artificials. The objective row
    // holds reduced costs; price out the basic artificials first.
    let obj = m;
    for j in 0..width {
        let mut s = 0.0;
        for i in 0..m {
            if art_cols.contains(&basis[i]) {
                s += tab[i][j];
            }
        }
        tab[obj][j] = -s;
    }
    for &c in &art_cols {
        tab[obj][c] += 1.0;
    }

    // Bland's rule iterations.
    let max_iters = 50_000 + 200 * (m + n_vars);
    for _ in 0..max_iters {
        // entering: smallest column index with negative reduced cost
        let mut enter = None;
        for j in 0..width - 1 {
            if tab[obj][j] < -PIVOT_TOL {
                enter = Some(j);
                break;
            }
        }
        let Some(enter) = enter else { break };
        // ratio test
        let mut leave: Option<usize> = None;
        let mut best = f64::INFINITY;
        for i in 0..m {
            let a = tab[i][enter];
            if a > PIVOT_TOL {
                let ratio = tab[i][rhs_col] / a;
                if ratio < best - 1e-15
                    || (ratio < best + 1e-15
                        && leave.map(|l| basis[i] < basis[l]).unwrap_or(false))
                {
                    best = ratio;
                    leave = Some(i);
                }
            }
        }
        let Some(leave) = leave else {
            // unbounded phase-1 cannot happen; defensive exit
            break;
        };
        pivot(&mut tab, leave, enter);
        basis[leave] = enter;
    }

    let gap = -tab[obj][rhs_col];
    if gap.abs() <= 1e-8 {
        let mut x = vec![0.0; n_vars];
        for i in 0..m {
            if basis[i] < n_vars {
                x[basis[i]] = tab[i][rhs_col];
            }
        }
        Feasibility::Feasible(x)
    } else {
        // Phase-1 duals: objective-row entries under the artificial columns
        // shifted by their unit cost.
        let dual: Vec<f64> = art_cols.iter().map(|&c| 1.0 - tab[obj][c]).collect();
        Feasibility::Infeasible { gap, dual }
    }
}

fn pivot(tab: &mut [Vec<f64>], row: usize, col: usize) {
    let width = tab[0].len();
    let p = tab[row][col];
    for j in 0..width {
        tab[row][j] /= p;
    }
    let nrows = tab.len();
    for i in 0..nrows {
        if i == row {
            continue;
        }
        let f = tab[i][col];
        if f == 0.0 {
            continue;
        }
        for j in 0..width {
            tab[i][j] -= f * tab[row][j];
        }
        tab[i][col] = 0.0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn feasible_box() {
        // x1 + x2 <= 4, x1 >= 1, x2 >= 1
        let cons = vec![
            Constraint::new(vec![1.0, 1.0], Rel::Le, 4.0),
            Constraint::new(vec![1.0, 0.0], Rel::Ge, 1.0),
            Constraint::new(vec![0.0, 1.0], Rel::Ge, 1.0),
        ];
        let f = feasible(2, &cons);
        match f {
            Feasibility::Feasible(x) => {
                assert!(x[0] + x[1] <= 4.0 + 1e-9);
                assert!(x[0] >= 1.0 - 1e-9 && x[1] >= 1.0 - 1e-9);
            }
            _ => panic!("should be feasible"),
        }
    }

    #[test]
    fn infeasible_contradiction() {
        // x <= 1 and x >= 2
        let cons = vec![
            Constraint::new(vec![1.0], Rel::Le, 1.0),
            Constraint::new(vec![1.0], Rel::Ge, 2.0),
        ];
        let f = feasible(1, &cons);
        match f {
            Feasibility::Infeasible { gap, dual } => {
                assert!(gap > 0.5);
                assert!(!dual.is_empty());
            }
            _ => panic!("should be infeasible"),
        }
    }

    #[test]
    fn equality_system() {
        // x1 + x2 = 2, x1 - x2 = 0 -> x = (1,1)
        let cons = vec![
            Constraint::new(vec![1.0, 1.0], Rel::Eq, 2.0),
            Constraint::new(vec![1.0, -1.0], Rel::Eq, 0.0),
        ];
        match feasible(2, &cons) {
            Feasibility::Feasible(x) => {
                assert!((x[0] - 1.0).abs() < 1e-9);
                assert!((x[1] - 1.0).abs() < 1e-9);
            }
            _ => panic!("should be feasible"),
        }
    }

    #[test]
    fn degenerate_does_not_cycle() {
        let cons = vec![
            Constraint::new(vec![1.0, 1.0, 1.0], Rel::Le, 0.0),
            Constraint::new(vec![1.0, -1.0, 0.0], Rel::Le, 0.0),
            Constraint::new(vec![1.0, 0.0, -1.0], Rel::Ge, 0.0),
            Constraint::new(vec![1.0, 1.0, 0.0], Rel::Eq, 0.0),
        ];
        let f = feasible(3, &cons);
        assert!(f.is_feasible());
    }
}
