//! Reference computations written directly from the definitions, sharing no
//! code with the library beyond the data types.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use treespace::functional::Functional;
use treespace::tree::NodeId;
use treespace::vector::FinVector;
use treespace::Rational;

/// Every node on the root path of some support node.
pub fn hull(x: &FinVector) -> BTreeSet<NodeId> {
    x.support().flat_map(|t| t.path().collect::<Vec<_>>()).collect()
}

/// Max of `Σ |x|` over the chains of the tree: every chain lies on a root
/// path, and it is enough to end the path in the support hull.
pub fn chain_norm(x: &FinVector) -> Rational {
    hull(x)
        .iter()
        .map(|t| t.path().map(|s| x.get(&s).abs()).sum::<Rational>())
        .max()
        .unwrap_or_else(Rational::zero)
}

pub fn is_antichain(ts: &[NodeId]) -> bool {
    ts.iter().enumerate().all(|(i, a)| ts[i + 1..].iter().all(|b| !a.is_prefix_of(b) && !b.is_prefix_of(a)))
}

/// A finite antichain of the binary tree meets every branch.
pub fn is_maximal_binary(ts: &[NodeId]) -> bool {
    fn covered(t: &NodeId, ts: &[NodeId]) -> bool {
        if ts.iter().any(|s| s.is_prefix_of(t)) {
            return true;
        }
        ts.iter().any(|s| t.is_prefix_of(s)) && covered(&t.child(0), ts) && covered(&t.child(1), ts)
    }
    is_antichain(ts) && covered(&NodeId::root(), ts)
}

/// Maximal antichains of the binary tree cut at `depth`.
pub fn maximal_antichains(depth: usize) -> Vec<Vec<NodeId>> {
    fn below(t: &NodeId, depth: usize) -> Vec<Vec<NodeId>> {
        let mut out = vec![vec![t.clone()]];
        if t.depth() < depth {
            let right = below(&t.child(1), depth);
            for a in below(&t.child(0), depth) {
                for b in &right {
                    out.push(a.iter().chain(b).cloned().collect());
                }
            }
        }
        out
    }
    below(&NodeId::root(), depth)
}

/// `max_α Σ_{t∈α} score(f(e_t))` over maximal antichains `α` of the tree cut
/// at `depth`, given as the list from [`maximal_antichains`]. Exact when every
/// node below `depth` lies on at most one branch of `f` and carries its tail.
pub fn antichain_sup(f: &Functional, antichains: &[Vec<NodeId>], score: impl Fn(Rational) -> Rational) -> Rational {
    antichains
        .iter()
        .map(|a| a.iter().map(|t| score(f.coefficient(t))).sum::<Rational>())
        .max()
        .unwrap_or_else(Rational::zero)
}

/// Every branch of the binary tree carries `Σ |x| = 1`.
pub fn every_branch_mass_one(x: &FinVector) -> bool {
    fn walk(x: &FinVector, t: &NodeId, acc: Rational) -> bool {
        let acc = acc + x.get(t).abs();
        if !x.support().any(|s| t.is_prefix_of(s) && s != t) {
            return acc == Rational::from_integer(1.into());
        }
        walk(x, &t.child(0), acc.clone()) && walk(x, &t.child(1), acc)
    }
    walk(x, &NodeId::root(), Rational::zero())
}

/// Whether some sign vector keeps every row of the integer matrix within
/// `bound`, by Gray-code enumeration with early exit.
pub fn signs_feasible(rows: &[Vec<i64>], bound: i64) -> bool {
    let n = rows.first().map_or(0, Vec::len);
    let mut sums: Vec<i64> = rows.iter().map(|r| r.iter().sum()).collect();
    let mut theta = vec![1i64; n];
    for step in 0u64..(1 << n) {
        if sums.iter().all(|s| s.abs() <= bound) {
            return true;
        }
        let i = (step + 1).trailing_zeros() as usize;
        if i >= n {
            break;
        }
        theta[i] = -theta[i];
        for (s, r) in sums.iter_mut().zip(rows) {
            *s += 2 * theta[i] * r[i];
        }
    }
    false
}
