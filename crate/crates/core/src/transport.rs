//! Exact solver for the discrete transportation problem.
//!
//! Implements the classical transportation simplex (MODI / u-v potentials)
//! on a spanning-tree basis: northwest-corner start, Bland-style entering
//! rule, tree cycle pivots. The solve self-certifies optimality through the
//! dual: every reduced cost must be nonnegative and the dual objective must
//! match the primal value.

use crate::linalg::Mat;
use crate::{Error, Result};

/// Optimal plan for `min sum_ij c_ij x_ij` with fixed marginals.
#[derive(Debug, Clone)]
pub struct TransportPlan {
    /// Optimal objective.
    pub value: f64,
    /// Basic cells with their flow (may contain zero-flow degenerate cells).
    pub flows: Vec<(usize, usize, f64)>,
    /// Row potentials.
    pub u: Vec<f64>,
    /// Column potentials.
    pub v: Vec<f64>,
}

const RC_TOL: f64 = 1e-11;

/// Solve the balanced transportation problem exactly.
///
/// `supply` and `demand` must be nonnegative with equal totals (tolerance
/// `1e-9`); `cost[(i, j)]` is the unit cost from source `i` to sink `j`.
pub fn solve_transport(supply: &[f64], demand: &[f64], cost: &Mat) -> Result<TransportPlan> {
    let m = supply.len();
    let n = demand.len();
    assert_eq!(cost.rows(), m);
    assert_eq!(cost.cols(), n);
    if supply.iter().any(|&s| s < 0.0) || demand.iter().any(|&d| d < 0.0) {
        return Err(Error::InfeasibleMarginals {
            detail: "negative weight".to_string(),
        });
    }
    let ts: f64 = supply.iter().sum();
    let td: f64 = demand.iter().sum();
    if (ts - td).abs() > 1e-9 * ts.max(td).max(1.0) {
        return Err(Error::InfeasibleMarginals {
            detail: format!("total supply {ts} != total demand {td}"),
        });
    }
    if m == 0 || n == 0 {
        return Err(Error::InfeasibleMarginals {
            detail: "empty marginal".to_string(),
        });
    }

    // Northwest-corner initial basis: exactly m + n - 1 cells, padding with
    // zero-flow cells on simultaneous exhaustion.
    let mut flow = vec![vec![0.0_f64; n]; m];
    let mut basic = vec![vec![false; n]; m];
    let mut s_left: Vec<f64> = supply.to_vec();
    let mut d_left: Vec<f64> = demand.to_vec();
    let (mut i, mut j) = (0usize, 0usize);
    let mut n_basic = 0usize;
    while n_basic < m + n - 1 {
        let q = s_left[i].min(d_left[j]);
        flow[i][j] = q;
        basic[i][j] = true;
        n_basic += 1;
        s_left[i] -= q;
        d_left[j] -= q;
        if n_basic == m + n - 1 {
            break;
        }
        if s_left[i] <= d_left[j] && i + 1 < m {
            i += 1;
        } else {
            j += 1;
        }
    }

    let scale = cost.max_abs().max(1.0);
    let max_pivots = 200 * (m + n) * (m + n) + 10_000;
    for _pivot in 0..max_pivots {
        let (u, v) = potentials(m, n, &basic, cost);
        // Entering cell: first (row-major) strictly negative reduced cost.
        let mut entering = None;
        'scan: for r in 0..m {
            for c in 0..n {
                if !basic[r][c] {
                    let rc = cost[(r, c)] - u[r] - v[c];
                    if rc < -RC_TOL * scale {
                        entering = Some((r, c));
                        break 'scan;
                    }
                }
            }
        }
        let Some((er, ec)) = entering else {
            // Optimal: package result and self-check duality.
            let mut value = 0.0;
            let mut flows = Vec::new();
            for r in 0..m {
                for c in 0..n {
                    if basic[r][c] {
                        value += flow[r][c] * cost[(r, c)];
                        flows.push((r, c, flow[r][c]));
                    }
                }
            }
            let dual: f64 = u
                .iter()
                .zip(supply)
                .map(|(ui, si)| ui * si)
                .sum::<f64>()
                + v.iter().zip(demand).map(|(vj, dj)| vj * dj).sum::<f64>();
            debug_assert!(
                (value - dual).abs() <= 1e-7 * scale.max(value.abs()),
                "duality gap {} vs {}",
                value,
                dual
            );
            return Ok(TransportPlan {
                value,
                flows,
                u,
                v,
            });
        };
        // Cycle: unique path between row-node er and col-node (m + ec) in the
        // basis tree, closed by the entering cell.
        let path = tree_path(m, n, &basic, er, m + ec);
        // path alternates row/col nodes; consecutive nodes share one basic
        // cell. Entering edge takes '+', then alternate along the path.
        let mut cells: Vec<(usize, usize)> = Vec::with_capacity(path.len());
        for w in path.windows(2) {
            let (a, b) = (w[0], w[1]);
            let (r, c) = if a < m { (a, b - m) } else { (b, a - m) };
            cells.push((r, c));
        }
        // Signs: entering (+), first path cell (-), next (+), ...
        let mut theta = f64::INFINITY;
        let mut leave: Option<(usize, usize)> = None;
        for (k, &(r, c)) in cells.iter().enumerate() {
            if k % 2 == 0 {
                // '-' cell
                let f = flow[r][c];
                if f < theta - 1e-15 || (f < theta + 1e-15 && leave.map(|(lr, lc)| (r, c) < (lr, lc)).unwrap_or(false)) {
                    theta = f;
                    leave = Some((r, c));
                }
            }
        }
        let (lr, lc) = leave.expect("cycle must contain a donor cell");
        flow[er][ec] += theta;
        for (k, &(r, c)) in cells.iter().enumerate() {
            if k % 2 == 0 {
                flow[r][c] -= theta;
            } else {
                flow[r][c] += theta;
            }
        }
        basic[lr][lc] = false;
        flow[lr][lc] = 0.0;
        basic[er][ec] = true;
    }
    Err(Error::Infeasible {
        diagnostic: "transportation simplex exceeded pivot budget".to_string(),
    })
}

/// Solve potentials `u_i + v_j = c_ij` over the basis tree (u[0] = 0).
fn potentials(m: usize, n: usize, basic: &[Vec<bool>], cost: &Mat) -> (Vec<f64>, Vec<f64>) {
    let total = m + n;
    let mut u = vec![f64::NAN; m];
    let mut v = vec![f64::NAN; n];
    u[0] = 0.0;
    let mut stack = vec![0usize];
    let mut seen = vec![false; total];
    seen[0] = true;
    while let Some(node) = stack.pop() {
        if node < m {
            for c in 0..n {
                if basic[node][c] && !seen[m + c] {
                    v[c] = cost[(node, c)] - u[node];
                    seen[m + c] = true;
                    stack.push(m + c);
                }
            }
        } else {
            let c = node - m;
            for r in 0..m {
                if basic[r][c] && !seen[r] {
                    u[r] = cost[(r, c)] - v[c];
                    seen[r] = true;
                    stack.push(r);
                }
            }
        }
    }
    // A disconnected basis cannot happen with m+n-1 cells forming a tree,
    // but keep any stray NaNs from propagating.
    for x in u.iter_mut().chain(v.iter_mut()) {
        if x.is_nan() {
            *x = 0.0;
        }
    }
    (u, v)
}

/// Unique path between two nodes of the basis tree (nodes: rows `0..m`,
/// columns `m..m+n`), returned as the node sequence from `from` to `to`.
fn tree_path(m: usize, n: usize, basic: &[Vec<bool>], from: usize, to: usize) -> Vec<usize> {
    let total = m + n;
    let mut parent = vec![usize::MAX; total];
    let mut seen = vec![false; total];
    seen[from] = true;
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(from);
    while let Some(node) = queue.pop_front() {
        if node == to {
            break;
        }
        if node < m {
            for c in 0..n {
                if basic[node][c] && !seen[m + c] {
                    seen[m + c] = true;
                    parent[m + c] = node;
                    queue.push_back(m + c);
                }
            }
        } else {
            let c = node - m;
            for r in 0..m {
                if basic[r][c] && !seen[r] {
                    seen[r] = true;
                    parent[r] = node;
                    queue.push_back(r);
                }
            }
        }
    }
    let mut path = vec![to];
    let mut cur = to;
    while cur != from {
        cur = parent[cur];
        path.push(cur);
    }
    path.reverse();
    path
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_marginals_zero_cost_plan() {
        let w = vec![0.25, 0.25, 0.5];
        let cost = Mat::from_fn(3, 3, |i, j| if i == j { 0.0 } else { 1.0 });
        let plan = solve_transport(&w, &w, &cost).unwrap();
        assert!(plan.value.abs() < 1e-12);
    }

    #[test]
    fn two_atoms_unique_plan() {
        let cost = Mat::from_rows(&[vec![3.5]]);
        let plan = solve_transport(&[1.0], &[1.0], &cost).unwrap();
        assert!((plan.value - 3.5).abs() < 1e-12);
    }

    #[test]
    fn matches_permutation_enumeration() {
        // equal weights, optimum is attained at a permutation
        let xs = [0.0_f64, 1.0, 3.0, 6.5];
        let ys = [0.5_f64, 2.0, 2.5, 7.0];
        let n = xs.len();
        let cost = Mat::from_fn(n, n, |i, j| (xs[i] - ys[j]).abs().sqrt());
        let w = vec![1.0 / n as f64; n];
        let plan = solve_transport(&w, &w, &cost).unwrap();
        // brute-force over all permutations
        let mut perm: Vec<usize> = (0..n).collect();
        let mut best = f64::INFINITY;
        permute(&mut perm, 0, &mut |p| {
            let c: f64 = p.iter().enumerate().map(|(i, &j)| cost[(i, j)]).sum();
            best = best.min(c / n as f64);
        });
        assert!(
            (plan.value - best).abs() < 1e-10,
            "simplex {} vs enumeration {}",
            plan.value,
            best
        );
    }

    fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
        if k == p.len() {
            f(p);
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            permute(p, k + 1, f);
            p.swap(k, i);
        }
    }

    #[test]
    fn below_product_plan_and_marginals_respected() {
        // deterministic ragged instance
        let supply = [0.1, 0.2, 0.3, 0.4];
        let demand = [0.25, 0.25, 0.5];
        let cost = Mat::from_fn(4, 3, |i, j| ((i * 7 + j * 3) % 5) as f64 + 0.5);
        let plan = solve_transport(&supply, &demand, &cost).unwrap();
        // product plan cost
        let mut prod = 0.0;
        for i in 0..4 {
            for j in 0..3 {
                prod += supply[i] * demand[j] * cost[(i, j)];
            }
        }
        assert!(plan.value <= prod + 1e-12);
        // plan satisfies marginals
        let mut row = vec![0.0; 4];
        let mut col = vec![0.0; 3];
        for &(i, j, f) in &plan.flows {
            assert!(f >= -1e-12);
            row[i] += f;
            col[j] += f;
        }
        for i in 0..4 {
            assert!((row[i] - supply[i]).abs() < 1e-10);
        }
        for j in 0..3 {
            assert!((col[j] - demand[j]).abs() < 1e-10);
        }
    }

    #[test]
    fn unbalanced_marginals_rejected() {
        let cost = Mat::from_rows(&[vec![1.0]]);
        assert!(matches!(
            solve_transport(&[1.0], &[0.5], &cost),
            Err(Error::InfeasibleMarginals { .. })
        ));
    }

    #[test]
    fn dual_certifies_optimality_on_random_instances() {
        let mut seed = 42u64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed >> 11) as f64 / (1u64 << 53) as f64
        };
        for trial in 0..20 {
            let m = 2 + (trial % 5);
            let n = 2 + (trial % 7);
            let mut supply: Vec<f64> = (0..m).map(|_| next() + 0.05).collect();
            let mut demand: Vec<f64> = (0..n).map(|_| next() + 0.05).collect();
            let ts: f64 = supply.iter().sum();
            let td: f64 = demand.iter().sum();
            for s in supply.iter_mut() {
                *s /= ts;
            }
            for d in demand.iter_mut() {
                *d /= td;
            }
            let cost = Mat::from_fn(m, n, |_, _| next() * 3.0);
            let plan = solve_transport(&supply, &demand, &cost).unwrap();
            // all reduced costs nonnegative at the reported potentials
            for i in 0..m {
                for j in 0..n {
                    let rc = cost[(i, j)] - plan.u[i] - plan.v[j];
                    assert!(rc >= -1e-8, "negative reduced cost {rc} at ({i},{j})");
                }
            }
            // dual objective equals primal value
            let dual: f64 = plan
                .u
                .iter()
                .zip(&supply)
                .map(|(u, s)| u * s)
                .sum::<f64>()
                + plan.v.iter().zip(&demand).map(|(v, d)| v * d).sum::<f64>();
            assert!((dual - plan.value).abs() < 1e-8);
        }
    }
}
