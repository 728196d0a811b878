//! Brute-force reference computations used by `--verify` and the suite. They
//! share nothing with the library's dynamic programs beyond the data types.

use num_traits::{Signed, Zero};
use treespace::norm::SpaceId;
use treespace::tree::{NodeId, TreeKind};
use treespace::vector::FinVector;
use treespace::dual::SetId;
use treespace::functional::Functional;
use treespace::Rational;

/// Largest support enumerated exhaustively.
pub const MAX_SUPPORT: usize = 16;

/// Max of `Σ_{t∈A} |x(t)|` over all family members `A ⊆ supp(x)`, or `None`
/// when the support is too large to enumerate.
pub fn norm(space: &SpaceId, x: &FinVector) -> Option<Rational> {
    let supp: Vec<NodeId> = x.support().cloned().collect();
    if supp.len() > MAX_SUPPORT {
        return None;
    }
    let mut best = Rational::zero();
    for mask in 0u32..(1 << supp.len()) {
        let set: Vec<NodeId> = (0..supp.len()).filter(|i| mask >> i & 1 == 1).map(|i| supp[i].clone()).collect();
        if !set.is_empty() && !space.family_contains(&set) {
            continue;
        }
        let s: Rational = set.iter().map(|t| x.get(t).abs()).sum();
        best = best.max(s);
    }
    Some(best)
}

/// Antichains of the binary tree truncated at `depth`: all of them (the empty
/// one included), or only the maximal ones.
pub fn antichains(depth: usize, maximal_only: bool) -> Vec<Vec<NodeId>> {
    fn below(t: &NodeId, depth: usize, maximal_only: bool) -> Vec<Vec<NodeId>> {
        let mut out = vec![vec![t.clone()]];
        if t.depth() < depth {
            let right = below(&t.child(1), depth, maximal_only);
            for a in below(&t.child(0), depth, maximal_only) {
                for b in &right {
                    out.push(a.iter().chain(b).cloned().collect());
                }
            }
        } else if !maximal_only {
            out.push(Vec::new());
        }
        out
    }
    below(&NodeId::root(), depth, maximal_only)
}

/// Every node of the truncated tree lies above or below a member.
pub fn is_maximal(a: &[NodeId], depth: usize) -> bool {
    (0u64..1 << depth).all(|m| {
        let leaf = NodeId::from_word((0..depth).map(|i| (m >> i & 1) as u32).collect());
        a.iter().any(|t| t.is_prefix_of(&leaf))
    })
}

/// `sup f(set)` for `f` finitely supported in the binary tree, by enumerating
/// the `{−1,0,1}`-valued antichain points of the set. `None` when `f` is too
/// deep to enumerate (depth 4, or depth 2 for `D`).
pub fn sup(set: SetId, f: &Functional) -> Option<Rational> {
    if !f.is_finitely_supported() || f.kind() != TreeKind::Binary {
        return None;
    }
    let depth = f.finite_part().keys().map(NodeId::depth).max().unwrap_or(0);
    let value = |a: &[NodeId], score: &dyn Fn(Rational) -> Rational| -> Rational {
        a.iter().map(|t| score(f.coefficient(t))).sum()
    };
    let pos = |q: Rational| q.max(Rational::zero());
    let neg = |q: Rational| (-q).max(Rational::zero());
    let abs = |q: Rational| q.abs();
    match set {
        SetId::BX | SetId::Sigma | SetId::BPlus | SetId::SigmaPlus | SetId::C => {
            if depth > 4 {
                return None;
            }
            let all = antichains(depth, true);
            let best = |score: &dyn Fn(Rational) -> Rational| all.iter().map(|a| value(a, score)).max();
            match set {
                SetId::BX | SetId::Sigma => best(&abs),
                SetId::BPlus | SetId::SigmaPlus => best(&pos),
                _ => best(&pos).max(best(&neg)),
            }
        }
        SetId::D => {
            if depth > 2 {
                return None;
            }
            let d = depth + 1;
            let open: Vec<Vec<NodeId>> = antichains(d, false).into_iter().filter(|a| !is_maximal(a, d)).collect();
            let best = |score: &dyn Fn(Rational) -> Rational| open.iter().map(|a| value(a, score)).max();
            best(&pos).max(best(&neg))
        }
    }
}
