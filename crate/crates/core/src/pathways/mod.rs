//! Liouville pathways and their weights.
//!
//! A pathway of order N is the sequence of (bra, ket) state pairs
//! (n_0, n'_0), …, (n_N, n'_N) visited by the density matrix when the
//! perturbation acts N times. Each step changes exactly one side; S_j = +1
//! when the left (ket) index changes and −1 when the right one does.

mod weights;

pub use weights::{
    chi1, chi1_kernel, chi2, chi2_kernel, n_function, p_function, theta_envfree, theta_helper, x_nonlocal, zeta_helper,
    PathwayModes, WeightMode,
};

use std::fmt;

use crate::error::validation;
use crate::Result;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LiouvillePathway {
    pairs: Vec<(usize, usize)>,
}

impl LiouvillePathway {
    /// Validates the one-side-per-step rule.
    pub fn new(pairs: Vec<(usize, usize)>) -> Result<Self> {
        if pairs.is_empty() {
            return validation("a pathway needs at least its initial pair");
        }
        for w in pairs.windows(2) {
            let left = w[0].0 != w[1].0;
            let right = w[0].1 != w[1].1;
            if left == right {
                return validation(format!("step {:?} -> {:?} must change exactly one side", w[0], w[1]));
            }
        }
        Ok(Self { pairs })
    }

    pub fn order(&self) -> usize {
        self.pairs.len() - 1
    }

    /// (n_j, n'_j) for j = 0..=N.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn pair(&self, j: usize) -> (usize, usize) {
        self.pairs[j]
    }

    pub fn initial(&self) -> (usize, usize) {
        self.pairs[0]
    }

    pub fn last(&self) -> (usize, usize) {
        self.pairs[self.order()]
    }

    /// S_j for j = 1..=N.
    pub fn sign(&self, j: usize) -> i8 {
        assert!(j >= 1 && j <= self.order(), "step index {j} out of range");
        if self.pairs[j].0 != self.pairs[j - 1].0 {
            1
        } else {
            -1
        }
    }

    pub fn signs(&self) -> Vec<i8> {
        (1..=self.order()).map(|j| self.sign(j)).collect()
    }

    /// Pathway with bra and ket swapped, which carries the conjugate weight.
    pub fn swapped(&self) -> Self {
        Self { pairs: self.pairs.iter().map(|&(a, b)| (b, a)).collect() }
    }
}

impl fmt::Display for LiouvillePathway {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, (a, b)) in self.pairs.iter().enumerate() {
            if j > 0 {
                let s = if self.sign(j) > 0 { "L" } else { "R" };
                write!(f, " -{s}-> ")?;
            }
            write!(f, "({a},{b})")?;
        }
        Ok(())
    }
}

/// All order-`n` pathways of an `m`-state system ending at `last`, optionally
/// restricted to initial pairs accepted by `initial_filter`. The order is
/// deterministic.
pub fn enumerate_pathways(
    m: usize,
    n: usize,
    last: (usize, usize),
    initial_filter: Option<&dyn Fn((usize, usize)) -> bool>,
) -> Vec<LiouvillePathway> {
    assert!(last.0 < m && last.1 < m, "final pair out of range");
    let mut out = Vec::new();
    let mut stack = vec![last];
    extend(m, n, &mut stack, initial_filter, &mut out);
    out
}

fn extend(
    m: usize,
    remaining: usize,
    stack: &mut Vec<(usize, usize)>,
    filter: Option<&dyn Fn((usize, usize)) -> bool>,
    out: &mut Vec<LiouvillePathway>,
) {
    let cur = *stack.last().unwrap();
    if remaining == 0 {
        if filter.is_none_or(|f| f(cur)) {
            let mut pairs = stack.clone();
            pairs.reverse();
            out.push(LiouvillePathway { pairs });
        }
        return;
    }
    for x in (0..m).filter(|&x| x != cur.0) {
        stack.push((x, cur.1));
        extend(m, remaining - 1, stack, filter, out);
        stack.pop();
    }
    for y in (0..m).filter(|&y| y != cur.1) {
        stack.push((cur.0, y));
        extend(m, remaining - 1, stack, filter, out);
        stack.pop();
    }
}

/// Pathways of every order up to `max_order` for every final pair, as
/// `[order][final_row * m + final_col]`.
#[derive(Clone, Debug)]
pub struct PathwayCache {
    m: usize,
    by_order: Vec<Vec<Vec<LiouvillePathway>>>,
}

impl PathwayCache {
    pub fn new(m: usize, max_order: usize) -> Self {
        let by_order = (0..=max_order)
            .map(|n| {
                (0..m * m)
                    .map(|f| enumerate_pathways(m, n, (f / m, f % m), None))
                    .collect()
            })
            .collect();
        Self { m, by_order }
    }

    pub fn get(&self, order: usize, last: (usize, usize)) -> &[LiouvillePathway] {
        &self.by_order[order][last.0 * self.m + last.1]
    }

    /// Human-readable listing with signs.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (n, per_final) in self.by_order.iter().enumerate() {
            for list in per_final {
                for p in list {
                    s.push_str(&format!("N={n} S={:?} {p}\n", p.signs()));
                }
            }
        }
        s
    }
}

/// Checks that `times` are τ_0 = 0 ≤ τ_1 ≤ … ≤ τ_{N+1} for a pathway of order N.
pub(crate) fn check_times(pathway: &LiouvillePathway, times: &[f64]) -> Result<()> {
    if times.len() != pathway.order() + 2 {
        return validation(format!("order {} pathway needs {} times", pathway.order(), pathway.order() + 2));
    }
    if times[0] != 0.0 {
        return validation("tau_0 must be 0");
    }
    if times.windows(2).any(|w| !(w[1] >= w[0])) {
        return validation("times must be non-decreasing");
    }
    Ok(())
}
