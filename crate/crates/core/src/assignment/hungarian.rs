use std::cmp::Ordering;
use std::ops::{Add, Sub};

use super::cost::CostMatrix;
use crate::error::{Error, Result};

/// Cost with an explicit count of infinite terms. Ordered lexicographically,
/// so minimizing it first minimizes the number of forbidden pairs and then
/// the finite total.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Lex {
    inf: i64,
    val: f64,
}

impl Lex {
    const ZERO: Lex = Lex { inf: 0, val: 0.0 };
    const MAX: Lex = Lex {
        inf: i64::MAX / 4,
        val: 0.0,
    };

    fn of(v: f64) -> Lex {
        if v == f64::INFINITY {
            Lex { inf: 1, val: 0.0 }
        } else {
            Lex { inf: 0, val: v }
        }
    }

    fn lt(self, other: Lex) -> bool {
        match self.inf.cmp(&other.inf) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => self.val < other.val,
        }
    }
}

impl Add for Lex {
    type Output = Lex;
    fn add(self, o: Lex) -> Lex {
        Lex {
            inf: self.inf + o.inf,
            val: self.val + o.val,
        }
    }
}

impl Sub for Lex {
    type Output = Lex;
    fn sub(self, o: Lex) -> Lex {
        Lex {
            inf: self.inf - o.inf,
            val: self.val - o.val,
        }
    }
}

/// Shortest-augmenting-path Hungarian method for `n <= m`; returns the
/// column of every row.
fn hungarian_rows(n: usize, m: usize, cost: impl Fn(usize, usize) -> Lex) -> Vec<usize> {
    let mut u = vec![Lex::ZERO; n + 1];
    let mut v = vec![Lex::ZERO; m + 1];
    let mut p = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![Lex::MAX; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = Lex::MAX;
            let mut j1 = 0;
            for j in 1..=m {
                if used[j] {
                    continue;
                }
                let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if cur.lt(minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j].lt(delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=m {
                if used[j] {
                    u[p[j]] = u[p[j]] + delta;
                    v[j] = v[j] - delta;
                } else {
                    minv[j] = minv[j] - delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut row_to_col = vec![0; n];
    for j in 1..=m {
        if p[j] != 0 {
            row_to_col[p[j] - 1] = j - 1;
        }
    }
    row_to_col
}

/// Minimum-cost assignment on a dense `rows x cols` row-major matrix whose
/// entries are finite or `+inf` (forbidden). The matching first maximizes
/// the number of finite pairs, then minimizes their total. Returns the
/// column assigned to each row, `None` for unassigned rows.
pub fn solve_assignment(rows: usize, cols: usize, cost: &[f64]) -> Result<Vec<Option<usize>>> {
    if cost.len() != rows * cols {
        return Err(Error::arg("cost length does not match the matrix shape"));
    }
    if cost.iter().any(|v| v.is_nan() || *v == f64::NEG_INFINITY) {
        return Err(Error::Numeric("costs must be finite or +inf".into()));
    }
    let at = |r: usize, c: usize| cost[r * cols + c];
    let mut out = vec![None; rows];
    if rows == 0 || cols == 0 {
        return Ok(out);
    }
    if rows <= cols {
        for (r, c) in hungarian_rows(rows, cols, |r, c| Lex::of(at(r, c)))
            .into_iter()
            .enumerate()
        {
            out[r] = Some(c);
        }
    } else {
        for (c, r) in hungarian_rows(cols, rows, |c, r| Lex::of(at(r, c)))
            .into_iter()
            .enumerate()
        {
            out[r] = Some(c);
        }
    }
    for (r, slot) in out.iter_mut().enumerate() {
        if let Some(c) = *slot {
            if at(r, c) == f64::INFINITY {
                *slot = None;
            }
        }
    }
    Ok(out)
}

/// Matching between samples and ground-truth instances.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchResult {
    /// `(sample, instance)` pairs, ordered by instance then sample.
    pub pairs: Vec<(usize, usize)>,
    pub total_cost: f64,
    /// Instances that received no sample at all.
    pub unmatched_instances: Vec<usize>,
}

impl MatchResult {
    pub fn samples_of(&self, instance: usize) -> Vec<usize> {
        self.pairs.iter().filter(|p| p.1 == instance).map(|p| p.0).collect()
    }
}

/// Hungarian matching of samples to replicated instance columns. Infinite
/// entries are never selected; every instance gets as many samples as a
/// maximum finite matching allows (at most `K`).
pub fn hungarian_match(m: &CostMatrix) -> Result<MatchResult> {
    let assignment = solve_assignment(m.rows(), m.cols(), m.values())?;
    let mut pairs: Vec<(usize, usize, f64)> = assignment
        .iter()
        .enumerate()
        .filter_map(|(r, c)| c.map(|c| (r, m.instance_of(c), m.get(r, c))))
        .collect();
    pairs.sort_by_key(|a| (a.1, a.0));
    let total_cost = pairs.iter().map(|p| p.2).sum();
    let mut matched = vec![false; m.n_instances()];
    for p in &pairs {
        matched[p.1] = true;
    }
    Ok(MatchResult {
        pairs: pairs.iter().map(|p| (p.0, p.1)).collect(),
        total_cost,
        unmatched_instances: (0..m.n_instances()).filter(|&j| !matched[j]).collect(),
    })
}
