//! Common signs for `k` sequences in `[−1, 1]` keeping every signed sum
//! within `2^k`, by repeated pigeonhole merging of equal sign patterns.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Signed, Zero};

use crate::error::{precondition, Error, Result};
use crate::rational::{pow2, sign, Rational};

/// `k` rows of `n` entries, all in `[−1, 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignProblem {
    rows: Vec<Vec<Rational>>,
}

impl SignProblem {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || n == 0 {
            return precondition("need at least one row and one column");
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Malformed("rows have different lengths".into()));
        }
        if rows.iter().flatten().any(|a| a.abs() > Rational::one()) {
            return precondition("entries must lie in [-1, 1]");
        }
        Ok(SignProblem { rows })
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn n(&self) -> usize {
        self.rows[0].len()
    }

    /// `2^k`.
    pub fn bound(&self) -> Rational {
        pow2(self.k() as u32)
    }

    /// `Σ_i θ_i a_i^j` for every row.
    pub fn sums(&self, theta: &[i8]) -> Vec<Rational> {
        self.rows
            .iter()
            .map(|r| r.iter().zip(theta).map(|(a, &t)| if t < 0 { -a } else { a.clone() }).sum())
            .collect()
    }

    /// `max_j |Σ_i θ_i a_i^j|`.
    pub fn value(&self, theta: &[i8]) -> Rational {
        self.sums(theta).into_iter().map(|s| s.abs()).max().unwrap_or_else(Rational::zero)
    }

    fn pattern(&self, i: usize) -> Vec<i8> {
        self.rows.iter().map(|r| sign(&r[i])).collect()
    }
}

/// One merge: columns `i1 < i2` share a sign pattern and are replaced by
/// `a_{i1} − a_{i2}` placed first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MergeStep {
    pub i1: usize,
    pub i2: usize,
}

/// The lexicographically first pair of columns with equal sign patterns and
/// the merged `n − 1` column problem, or `None` when all patterns differ.
pub fn merge_step(p: &SignProblem) -> Option<(MergeStep, SignProblem)> {
    let mut seen: BTreeMap<Vec<i8>, usize> = BTreeMap::new();
    let mut best: Option<(usize, usize)> = None;
    for i in 0..p.n() {
        match seen.get(&p.pattern(i)) {
            Some(&first) => {
                if best.is_none_or(|(b1, _)| first < b1) {
                    best = Some((first, i));
                }
            }
            None => {
                seen.insert(p.pattern(i), i);
            }
        }
    }
    let (i1, i2) = best?;
    let rows = p
        .rows
        .iter()
        .map(|r| {
            let mut b = Vec::with_capacity(r.len() - 1);
            b.push(&r[i1] - &r[i2]);
            b.extend(r.iter().enumerate().filter(|&(i, _)| i != i1 && i != i2).map(|(_, a)| a.clone()));
            b
        })
        .collect();
    Some((MergeStep { i1, i2 }, SignProblem { rows }))
}

/// Signs for the unmerged problem from signs `rho` of the merged one:
/// `θ_{i1} = ρ_1`, `θ_{i2} = −ρ_1`, the rest in order from `ρ_2, …`.
pub fn unfold(step: MergeStep, rho: &[i8]) -> Vec<i8> {
    let n = rho.len() + 1;
    let mut rest = rho[1..].iter();
    (0..n)
        .map(|i| {
            if i == step.i1 {
                rho[0]
            } else if i == step.i2 {
                -rho[0]
            } else {
                *rest.next().expect("one sign per remaining column")
            }
        })
        .collect()
}

/// Signs `θ ∈ {−1,1}^n` with `|Σ θ_i a_i^j| ≤ 2^k` for every row.
///
/// Same merges as iterating [`merge_step`], done on columns in place.
pub fn balance_signs(p: &SignProblem) -> Vec<i8> {
    let cap = 1usize.checked_shl(p.k() as u32).unwrap_or(usize::MAX);
    let pattern = |col: &[Rational]| -> Vec<i8> { col.iter().map(sign).collect() };
    let mut cols: Vec<(Vec<Rational>, Vec<i8>)> = (0..p.n())
        .map(|i| {
            let col: Vec<Rational> = p.rows.iter().map(|r| r[i].clone()).collect();
            let pat = pattern(&col);
            (col, pat)
        })
        .collect();
    let mut steps = Vec::new();
    while cols.len() > cap {
        let mut seen: HashMap<&[i8], usize> = HashMap::new();
        let mut best: Option<(usize, usize)> = None;
        for (i, (_, pat)) in cols.iter().enumerate() {
            match seen.get(pat.as_slice()) {
                Some(&first) => {
                    if best.is_none_or(|(b1, _)| first < b1) {
                        best = Some((first, i));
                    }
                }
                None => {
                    seen.insert(pat, i);
                }
            }
        }
        let (i1, i2) = best.expect("more columns than sign patterns");
        let (b, _) = cols.remove(i2);
        let (a, _) = cols.remove(i1);
        let merged: Vec<Rational> = a.iter().zip(&b).map(|(x, y)| x - y).collect();
        let pat = pattern(&merged);
        cols.insert(0, (merged, pat));
        steps.push(MergeStep { i1, i2 });
    }
    let mut theta = vec![1i8; cols.len()];
    for step in steps.into_iter().rev() {
        theta = unfold(step, &theta);
    }
    theta
}

/// Exhaustive minimiser of `max_j |Σ θ_i a_i^j|`, first in the order where
/// `+1` precedes `−1` position by position.
pub fn brute_force_best_signs(p: &SignProblem) -> Result<(Vec<i8>, Rational)> {
    if p.n() > 20 {
        return precondition("brute force is limited to 20 columns");
    }
    let decode = |mask: u32| (0..p.n()).map(|i| if mask >> (p.n() - 1 - i) & 1 == 1 { -1 } else { 1 }).collect::<Vec<i8>>();
    let mut best = (decode(0), p.value(&decode(0)));
    for mask in 1..(1u32 << p.n()) {
        let theta = decode(mask);
        let v = p.value(&theta);
        if v < best.1 {
            best = (theta, v);
        }
    }
    Ok(best)
}
