//! Brute-force Nash equilibria of small bimatrix games by support enumeration.
//!
//! Only equal-size support pairs are tried, which finds every equilibrium of
//! a nondegenerate game. Singular equalization systems are skipped and
//! reported; degenerate games may have equilibrium continua that this does
//! not enumerate.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::{BimatrixGame, Matrix, MixedStrategy};
use crate::error::{invalid, Result};

pub const ORACLE_EPS: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-12;

#[derive(Clone, Debug, Serialize)]
pub struct Equilibrium {
    pub p: MixedStrategy,
    pub q: MixedStrategy,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SupportEnumeration {
    pub equilibria: Vec<Equilibrium>,
    /// Support pairs whose equalization system was singular.
    pub skipped: Vec<String>,
}

pub fn support_enumeration_equilibria(game: &BimatrixGame, max_support: usize) -> Result<SupportEnumeration> {
    let (m, n) = (game.rows(), game.cols());
    if max_support == 0 || max_support > m.min(n) {
        return Err(invalid(format!("max_support must lie in 1..={}", m.min(n))));
    }
    let bt = game.b().transpose();
    let mut out = SupportEnumeration::default();
    for k in 1..=max_support {
        let rows_sets = subsets(m, k);
        let col_sets = subsets(n, k);
        for i_set in &rows_sets {
            for j_set in &col_sets {
                // q on J makes rows in I indifferent; p on I does the same for columns in J.
                let q = match equalize(game.a(), i_set, j_set, n) {
                    Solve::Ok(q) => q,
                    Solve::Infeasible => continue,
                    Solve::Singular => {
                        out.skipped.push(format!("rows {i_set:?} / cols {j_set:?}: A system singular"));
                        continue;
                    }
                };
                let p = match equalize(&bt, j_set, i_set, m) {
                    Solve::Ok(p) => p,
                    Solve::Infeasible => continue,
                    Solve::Singular => {
                        out.skipped.push(format!("rows {i_set:?} / cols {j_set:?}: B system singular"));
                        continue;
                    }
                };
                if game.regret(&p, &q)? > ORACLE_EPS {
                    continue;
                }
                let dup = out
                    .equilibria
                    .iter()
                    .any(|e| e.p.max_abs_diff(&p) <= ORACLE_EPS && e.q.max_abs_diff(&q) <= ORACLE_EPS);
                if !dup {
                    out.equilibria.push(Equilibrium { p, q });
                }
            }
        }
    }
    Ok(out)
}

enum Solve {
    Ok(MixedStrategy),
    Infeasible,
    Singular,
}

/// Finds `y` supported on `support` (length `dim`) with `(M y)_i` equal for
/// all `i` in `equal_rows` and total mass one.
fn equalize(mat: &Matrix, equal_rows: &[usize], support: &[usize], dim: usize) -> Solve {
    let k = support.len();
    let mut sys = DMatrix::<f64>::zeros(k + 1, k + 1);
    let mut rhs = DVector::<f64>::zeros(k + 1);
    for (r, &i) in equal_rows.iter().enumerate() {
        for (c, &j) in support.iter().enumerate() {
            sys[(r, c)] = mat.get(i, j);
        }
        sys[(r, k)] = -1.0;
    }
    for c in 0..k {
        sys[(k, c)] = 1.0;
    }
    rhs[k] = 1.0;
    let scale = sys.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let lu = sys.lu();
    let u = lu.u();
    let min_pivot = (0..=k).map(|i| u[(i, i)].abs()).fold(f64::INFINITY, f64::min);
    if !(min_pivot > PIVOT_TOL * scale.max(1.0)) {
        return Solve::Singular;
    }
    let Some(sol) = lu.solve(&rhs) else {
        return Solve::Singular;
    };
    let mut y = vec![0.0; dim];
    for (c, &j) in support.iter().enumerate() {
        let v = sol[c];
        if v < -PIVOT_TOL {
            return Solve::Infeasible;
        }
        y[j] = v.max(0.0);
    }
    match MixedStrategy::normalized(y) {
        Ok(s) => Solve::Ok(s),
        Err(_) => Solve::Infeasible,
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_counts() {
        assert_eq!(subsets(4, 2).len(), 6);
        assert_eq!(subsets(3, 3), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn matching_pennies_unique_mixed() {
        let a = vec![vec![1.0, -1.0], vec![-1.0, 1.0]];
        let b = vec![vec![-1.0, 1.0], vec![1.0, -1.0]];
        let g = BimatrixGame::from_rows(a, b).unwrap();
        let r = support_enumeration_equilibria(&g, 2).unwrap();
        assert_eq!(r.equilibria.len(), 1);
        let e = &r.equilibria[0];
        assert!(e.p.max_abs_diff(&MixedStrategy::uniform(2)) < 1e-12);
        assert!(e.q.max_abs_diff(&MixedStrategy::uniform(2)) < 1e-12);
    }

    #[test]
    fn stag_hunt_three_equilibria() {
        let a = Matrix::from_rows(vec![vec![10.0, -1.0], vec![0.0, 0.0]]).unwrap();
        let g = BimatrixGame::symmetric(a).unwrap();
        let r = support_enumeration_equilibria(&g, 2).unwrap();
        assert_eq!(r.equilibria.len(), 3);
        // Mixed equilibrium: 10 q - (1 - q) = 0, so q = 1/11.
        let mixed = r.equilibria.iter().find(|e| !e.p.is_pure()).unwrap();
        assert!((mixed.q.weights()[0] - 1.0 / 11.0).abs() < 1e-12);
        assert!((mixed.p.weights()[0] - 1.0 / 11.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_game_reports_skips() {
        let g = BimatrixGame::from_rows(vec![vec![0.0; 2]; 2], vec![vec![0.0; 2]; 2]).unwrap();
        let r = support_enumeration_equilibria(&g, 2).unwrap();
        assert!(!r.skipped.is_empty());
        assert_eq!(r.equilibria.len(), 4);
        assert!(support_enumeration_equilibria(&g, 3).is_err());
    }
}
