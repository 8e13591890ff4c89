//! Shortest Hamiltonian path: exact enumeration for small instances and 2-opt
//! local search.
//!
//! A 2-opt move reverses `p[i..=j]`, swapping edges `(p[i-1], p[i])` and
//! `(p[j], p[j+1])` for `(p[i-1], p[j])` and `(p[i], p[j+1])`. If the old pair
//! crossed, the new pair is strictly shorter, so a 2-opt optimal path has no
//! crossings. Paths are open: either end may also be flipped on its own.

use serde::{Deserialize, Serialize};

use super::MmcError;
use crate::nn::Matrix;

/// Largest instance [`shp_bruteforce`] accepts.
pub const MAX_EXACT_SHP: usize = 12;

const IMPROVE_EPS: f64 = 1e-12;

/// A visiting order (0-based row indices) and its Euclidean length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathOrder {
    pub ordering: Vec<usize>,
    pub length: f64,
}

impl PathOrder {
    pub fn new(points: &Matrix, ordering: Vec<usize>) -> Result<Self, MmcError> {
        check_permutation(&ordering, points.rows())?;
        let length = path_length(points, &ordering);
        Ok(Self { ordering, length })
    }
}

fn check_permutation(ordering: &[usize], n: usize) -> Result<(), MmcError> {
    if ordering.len() != n {
        return Err(MmcError::InvalidPermutation(n));
    }
    let mut seen = vec![false; n];
    for &i in ordering {
        if i >= n || std::mem::replace(&mut seen[i], true) {
            return Err(MmcError::InvalidPermutation(n));
        }
    }
    Ok(())
}

#[inline]
fn dist(points: &Matrix, a: usize, b: usize) -> f64 {
    points
        .row(a)
        .iter()
        .zip(points.row(b))
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// `Σ ‖x_{p(k+1)} − x_{p(k)}‖₂`.
pub fn path_length(points: &Matrix, ordering: &[usize]) -> f64 {
    ordering.windows(2).map(|w| dist(points, w[0], w[1])).sum()
}

fn distance_table(points: &Matrix) -> Vec<Vec<f64>> {
    let n = points.rows();
    (0..n).map(|a| (0..n).map(|b| dist(points, a, b)).collect()).collect()
}

/// Globally shortest Hamiltonian path by depth-first enumeration in
/// lexicographic order with length pruning. Among equally short paths the
/// lexicographically smallest ordering wins.
pub fn shp_bruteforce(points: &Matrix) -> Result<PathOrder, MmcError> {
    let n = points.rows();
    if n == 0 {
        return Err(MmcError::InvalidPermutation(0));
    }
    if n > MAX_EXACT_SHP {
        return Err(MmcError::TooLarge {
            n,
            max: MAX_EXACT_SHP,
        });
    }
    if n == 1 {
        return Ok(PathOrder {
            ordering: vec![0],
            length: 0.0,
        });
    }
    let d = distance_table(points);

    struct Search<'a> {
        d: &'a [Vec<f64>],
        n: usize,
        best: f64,
        best_path: Vec<usize>,
        path: Vec<usize>,
        used: Vec<bool>,
    }

    impl Search<'_> {
        fn go(&mut self, partial: f64) {
            if partial >= self.best - IMPROVE_EPS {
                return;
            }
            if self.path.len() == self.n {
                // each path is met twice (once reversed); the copy with the
                // smaller first index is the lexicographically smaller one
                if self.path[0] < self.path[self.n - 1] {
                    self.best = partial;
                    self.best_path.clone_from(&self.path);
                }
                return;
            }
            let last = *self.path.last().expect("non-empty");
            for next in 0..self.n {
                if self.used[next] {
                    continue;
                }
                self.used[next] = true;
                self.path.push(next);
                let step = self.d[last][next];
                self.go(partial + step);
                self.path.pop();
                self.used[next] = false;
            }
        }
    }

    let mut s = Search {
        d: &d,
        n,
        best: f64::INFINITY,
        best_path: Vec::new(),
        path: Vec::with_capacity(n),
        used: vec![false; n],
    };
    for start in 0..n {
        s.used[start] = true;
        s.path.push(start);
        s.go(0.0);
        s.path.pop();
        s.used[start] = false;
    }
    PathOrder::new(points, s.best_path)
}

/// Length change from reversing `p[i..=j]`.
#[inline]
fn reversal_delta(d: &[Vec<f64>], p: &[usize], i: usize, j: usize) -> f64 {
    let n = p.len();
    let mut before = 0.0;
    let mut after = 0.0;
    if i > 0 {
        before += d[p[i - 1]][p[i]];
        after += d[p[i - 1]][p[j]];
    }
    if j + 1 < n {
        before += d[p[j]][p[j + 1]];
        after += d[p[i]][p[j + 1]];
    }
    after - before
}

/// Applies improving reversals until none is left. Returns the improved path
/// and the path length after each accepted move.
pub fn two_opt_improve_traced(
    points: &Matrix,
    start: &PathOrder,
) -> Result<(PathOrder, Vec<f64>), MmcError> {
    let n = points.rows();
    check_permutation(&start.ordering, n)?;
    let d = distance_table(points);
    let mut p = start.ordering.clone();
    let mut trace = Vec::new();
    loop {
        let mut improved = false;
        for i in 0..n.saturating_sub(1) {
            for j in i + 1..n {
                if i == 0 && j + 1 == n {
                    continue;
                }
                if reversal_delta(&d, &p, i, j) < -IMPROVE_EPS {
                    p[i..=j].reverse();
                    improved = true;
                    trace.push(path_length(points, &p));
                }
            }
        }
        if !improved {
            break;
        }
    }
    Ok((PathOrder::new(points, p)?, trace))
}

pub fn two_opt_improve(points: &Matrix, start: &PathOrder) -> Result<PathOrder, MmcError> {
    two_opt_improve_traced(points, start).map(|(p, _)| p)
}

/// Exhaustive scan for a single segment reversal that shortens the path by
/// more than `tol`, recomputing full lengths (independent of the delta
/// formula used by the search).
pub fn find_improving_reversal(points: &Matrix, path: &PathOrder, tol: f64) -> Option<(usize, usize)> {
    let n = path.ordering.len();
    let base = path_length(points, &path.ordering);
    let mut q = path.ordering.clone();
    for i in 0..n {
        for j in i + 1..n {
            q.copy_from_slice(&path.ordering);
            q[i..=j].reverse();
            if path_length(points, &q) < base - tol {
                return Some((i, j));
            }
        }
    }
    None
}
