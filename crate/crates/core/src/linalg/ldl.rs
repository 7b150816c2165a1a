//! Symmetric sparse direct solver: reverse Cuthill-McKee ordering followed by
//! an envelope (skyline) LDLᵀ factorization.

use std::collections::VecDeque;

use super::sparse::CsrMatrix;
use crate::error::{Error, Result};

/// Reverse Cuthill-McKee permutation of the symmetric pattern of `a`.
/// `perm[k]` is the original index placed at position `k`.
pub fn reverse_cuthill_mckee(a: &CsrMatrix) -> Vec<usize> {
    let n = a.nrows();
    let adj: Vec<Vec<usize>> = (0..n).map(|i| a.row(i).0.iter().copied().filter(|&j| j != i).collect()).collect();
    let degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);

    while order.len() < n {
        let seed = (0..n).filter(|&i| !visited[i]).min_by_key(|&i| degree[i]).expect("unvisited node exists");
        let start = pseudo_peripheral(seed, &adj, &degree, &visited);
        visited[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut next: Vec<usize> = adj[v].iter().copied().filter(|&w| !visited[w]).collect();
            next.sort_by_key(|&w| (degree[w], w));
            for w in next {
                visited[w] = true;
                queue.push_back(w);
            }
        }
    }
    order.reverse();
    order
}

fn pseudo_peripheral(seed: usize, adj: &[Vec<usize>], degree: &[usize], blocked: &[bool]) -> usize {
    let mut start = seed;
    let mut ecc = 0;
    for _ in 0..8 {
        let levels = bfs_levels(start, adj, blocked);
        let max_level = levels.iter().filter_map(|l| *l).max().unwrap_or(0);
        if max_level <= ecc && ecc > 0 {
            break;
        }
        ecc = max_level;
        let candidate = levels
            .iter()
            .enumerate()
            .filter(|(_, l)| **l == Some(max_level))
            .min_by_key(|(i, _)| degree[*i])
            .map(|(i, _)| i)
            .unwrap_or(start);
        if candidate == start {
            break;
        }
        start = candidate;
    }
    start
}

fn bfs_levels(start: usize, adj: &[Vec<usize>], blocked: &[bool]) -> Vec<Option<usize>> {
    let mut level = vec![None; adj.len()];
    level[start] = Some(0);
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        let lv = level[v].expect("queued nodes have a level");
        for &w in &adj[v] {
            if level[w].is_none() && !blocked[w] {
                level[w] = Some(lv + 1);
                queue.push_back(w);
            }
        }
    }
    level
}

/// Envelope LDLᵀ factors of a symmetrically permuted matrix.
#[derive(Clone, Debug)]
pub struct LdlFactor {
    perm: Vec<usize>,
    /// First column of the envelope in each permuted row.
    first: Vec<usize>,
    /// Strictly lower part of row `i`, columns `first[i]..i`.
    rows: Vec<Vec<f64>>,
    diag: Vec<f64>,
}

impl LdlFactor {
    /// Factors a symmetric matrix. Only the lower triangle is read.
    pub fn new(a: &CsrMatrix) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n {
            return Err(Error::DimensionMismatch("LDL of a non-square matrix".into()));
        }
        let perm = reverse_cuthill_mckee(a);
        let mut inv = vec![0usize; n];
        for (k, &p) in perm.iter().enumerate() {
            inv[p] = k;
        }

        let mut first: Vec<usize> = (0..n).collect();
        for (i, j, _) in a.iter() {
            let (pi, pj) = (inv[i], inv[j]);
            let (r, c) = if pi >= pj { (pi, pj) } else { (pj, pi) };
            first[r] = first[r].min(c);
        }
        let mut rows: Vec<Vec<f64>> = (0..n).map(|i| vec![0.0; i - first[i]]).collect();
        let mut diag = vec![0.0; n];
        for (i, j, v) in a.iter() {
            let (pi, pj) = (inv[i], inv[j]);
            if pi == pj {
                diag[pi] += v;
            } else if pi > pj {
                rows[pi][pj - first[pi]] += v;
            }
        }

        let scale = diag.iter().fold(0.0f64, |m, d| m.max(d.abs())).max(f64::MIN_POSITIVE);
        let mut g = Vec::new();
        for i in 0..n {
            let fi = first[i];
            g.clear();
            g.resize(i - fi, 0.0);
            for j in fi..i {
                let fj = first[j];
                let k0 = fi.max(fj);
                let mut s = rows[i][j - fi];
                let lj = &rows[j];
                for k in k0..j {
                    s -= g[k - fi] * lj[k - fj];
                }
                g[j - fi] = s;
            }
            let mut d = diag[i];
            for j in fi..i {
                let l = g[j - fi] / diag[j];
                d -= g[j - fi] * l;
                rows[i][j - fi] = l;
            }
            if !d.is_finite() || d.abs() <= 1e-14 * scale {
                return Err(Error::SingularSystem(format!("zero pivot at row {}", perm[i])));
            }
            diag[i] = d;
        }
        Ok(Self { perm, first, rows, diag })
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.perm.len();
        let mut y: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let fi = self.first[i];
            let s: f64 = self.rows[i].iter().zip(&y[fi..i]).map(|(l, v)| l * v).sum();
            y[i] -= s;
        }
        for (yi, d) in y.iter_mut().zip(&self.diag) {
            *yi /= d;
        }
        for i in (0..n).rev() {
            let fi = self.first[i];
            let yi = y[i];
            for (k, l) in self.rows[i].iter().enumerate() {
                y[fi + k] -= l * yi;
            }
        }
        let mut x = vec![0.0; n];
        for (k, &p) in self.perm.iter().enumerate() {
            x[p] = y[k];
        }
        x
    }

    /// Number of stored off-diagonal factor entries.
    pub fn envelope_size(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }
}

/// Solves a symmetric system and checks the relative residual.
pub fn solve_symmetric(a: &CsrMatrix, b: &[f64], tol: f64) -> Result<Vec<f64>> {
    let factor = LdlFactor::new(a)?;
    let x = factor.solve(b);
    let r = a.mul_vec(&x);
    let res: f64 = r.iter().zip(b).map(|(ri, bi)| (ri - bi).powi(2)).sum::<f64>().sqrt();
    let bn: f64 = b.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !res.is_finite() || res > tol * bn.max(f64::MIN_POSITIVE) {
        return Err(Error::SingularSystem(format!("relative residual {:e} exceeds {tol:e}", res / bn)));
    }
    Ok(x)
}
