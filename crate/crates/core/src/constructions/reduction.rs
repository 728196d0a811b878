//! Finitely branching subtrees of `T∞` carrying almost all of a functional,
//! and the basic neighbourhoods they yield inside weak neighbourhoods.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};

use super::pc::pc_near_in;
use crate::dual::{dual_norm, nbhd_membership, subtree_mass, SetId, WeakNbhdSpec};
use crate::error::{ensure, precondition, Result};
use crate::functional::Functional;
use crate::norm::chain_norm_value;
use crate::rational::{int, pow2, Rational};
use crate::tree::{Branch, FiniteBranchingTree, NodeId, TreeKind};
use crate::vector::FinVector;

/// A rooted, finitely branching subtree of `T∞`: explicit nodes down to
/// `depth`, then the continuations of the listed branches, or child `0` off
/// them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedTree {
    depth: usize,
    nodes: BTreeSet<NodeId>,
    children: BTreeMap<NodeId, Vec<NodeId>>,
    branches: Vec<Branch>,
}

impl ReducedTree {
    fn from_parts(depth: usize, nodes: BTreeSet<NodeId>, mut branches: Vec<Branch>) -> Self {
        let mut children: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
        for t in &nodes {
            if let Some(p) = t.parent() {
                children.entry(p).or_default().push(t.clone());
            }
        }
        branches.sort();
        branches.dedup();
        ReducedTree { depth, nodes, children, branches }
    }

    /// The support hull of `x`, each leaf continued by child `0`.
    pub fn hull(x: &FinVector) -> Self {
        let nodes: BTreeSet<NodeId> = x.support().flat_map(|t| t.path().collect::<Vec<_>>()).chain([NodeId::root()]).collect();
        let depth = nodes.iter().map(NodeId::depth).max().unwrap_or(0);
        Self::from_parts(depth, nodes, Vec::new()).extended_to(depth)
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    /// Explicit nodes, down to [`depth`](Self::depth).
    pub fn explicit_nodes(&self) -> &BTreeSet<NodeId> {
        &self.nodes
    }

    fn beyond(&self, t: &NodeId) -> Vec<NodeId> {
        let d = t.depth();
        let mut out: Vec<NodeId> =
            self.branches.iter().filter(|b| b.contains(t)).map(|b| t.child(b.letter(d))).collect();
        out.sort();
        out.dedup();
        if out.is_empty() {
            out.push(t.child(0));
        }
        out
    }

    /// Same tree with explicit nodes down to `depth`, every explicit node above
    /// that depth having an explicit child.
    fn extended_to(&self, depth: usize) -> Self {
        let mut nodes = self.nodes.clone();
        let mut frontier: Vec<NodeId> = Vec::new();
        for t in &self.nodes {
            let has_child = self.children.get(t).is_some_and(|c| !c.is_empty());
            if !has_child && t.depth() < depth {
                frontier.push(t.clone());
            }
        }
        while let Some(t) = frontier.pop() {
            if t.depth() >= depth {
                continue;
            }
            for c in self.beyond(&t) {
                if nodes.insert(c.clone()) {
                    frontier.push(c);
                }
            }
        }
        Self::from_parts(depth.max(self.depth), nodes, self.branches.clone())
    }

    pub fn union(&self, other: &ReducedTree) -> Self {
        let depth = self.depth.max(other.depth);
        let (a, b) = (self.extended_to(depth), other.extended_to(depth));
        let nodes = a.nodes.union(&b.nodes).cloned().collect();
        let branches = a.branches.iter().chain(&b.branches).cloned().collect();
        Self::from_parts(depth, nodes, branches)
    }
}

impl FiniteBranchingTree for ReducedTree {
    fn kind(&self) -> TreeKind {
        TreeKind::Countable
    }

    fn contains(&self, t: &NodeId) -> bool {
        if t.depth() <= self.depth {
            return self.nodes.contains(t);
        }
        let mut cur = t.prefix(self.depth);
        if !self.nodes.contains(&cur) {
            return false;
        }
        for d in self.depth..t.depth() {
            let next = t.prefix(d + 1);
            if !self.beyond(&cur).contains(&next) {
                return false;
            }
            cur = next;
        }
        true
    }

    fn children(&self, t: &NodeId) -> Vec<NodeId> {
        if t.depth() < self.depth {
            self.children.get(t).cloned().unwrap_or_default()
        } else {
            self.beyond(t)
        }
    }
}

/// A finitely branching subtree and the roots of the pruned subtrees with
/// their masses `‖P*_{T(s)} f‖`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub tree: ReducedTree,
    pub pruned: Vec<(NodeId, Rational)>,
    pub pruned_mass: Rational,
}

/// Level by level, keeps the heaviest data children of the current level until
/// what is left weighs less than `ε/2^k`, padding childless nodes with a child
/// that carries no data. Stops once past the data depth every candidate with
/// mass is kept; below that only branch continuations carry data.
pub fn finitely_branching_reduction(f: &Functional, eps: &Rational) -> Result<Reduction> {
    if f.kind() != TreeKind::Countable {
        return precondition("the reduction works on the countably branching tree");
    }
    if !eps.is_positive() {
        return precondition("eps must be positive");
    }
    let data_depth = f.data_depth();
    let mut level = vec![NodeId::root()];
    let mut nodes: BTreeSet<NodeId> = level.iter().cloned().collect();
    let mut pruned = Vec::new();
    let mut k = 1usize;
    let depth = loop {
        let budget = eps / pow2(k as u32);
        let mut cands: Vec<(NodeId, Rational)> = level
            .iter()
            .flat_map(|t| f.data_children(t).into_iter().map(move |i| t.child(i)))
            .map(|c| {
                let m = subtree_mass(f, &c);
                (c, m)
            })
            .filter(|(_, m)| m.is_positive())
            .collect();
        cands.sort_by(|(a, ma), (b, mb)| mb.cmp(ma).then_with(|| a.cmp(b)));
        let mut rest: Rational = cands.iter().map(|(_, m)| m).sum();
        let mut keep = 0;
        while rest >= budget {
            rest -= &cands[keep].1;
            keep += 1;
        }
        let all_kept = keep == cands.len();
        pruned.extend(cands.drain(keep..));
        let mut next: Vec<NodeId> = cands.into_iter().map(|(c, _)| c).collect();
        for t in &level {
            if !next.iter().any(|c| c.parent().as_ref() == Some(t)) {
                let used = f.data_children(t);
                let pad = (0..).find(|i| !used.contains(i)).expect("finitely many data children");
                next.push(t.child(pad));
            }
        }
        next.sort();
        nodes.extend(next.iter().cloned());
        level = next;
        if k > data_depth + 1 && all_kept {
            break k;
        }
        k += 1;
    };
    let branches = f.branch_parts().iter().map(|p| p.branch.clone()).collect();
    let pruned_mass: Rational = pruned.iter().map(|(_, m)| m).sum();
    let out = Reduction { tree: ReducedTree::from_parts(depth, nodes, branches), pruned, pruned_mass };

    ensure(out.pruned_mass < *eps, || format!("pruned mass {} is not below {eps}", out.pruned_mass))?;
    for (s, _) in &out.pruned {
        let parent = s.parent().expect("pruned nodes are proper descendants");
        ensure(!out.tree.contains(s) && out.tree.contains(&parent), || format!("{s} is not a pruned root"))?;
    }
    Ok(out)
}

/// A point `x₀` and radius `δ₀` such that
/// `W(x₀, δ₀) = {y ∈ B : |y(s) − x₀(s)| < δ₀ on supp(x₀)}` lies inside `w`,
/// with the inequality chain `a_i + b_i + c_i < ε_i` bounding `|f_i(center − y)|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PibaseWitness {
    pub x0: FinVector,
    pub delta0: Rational,
    pub tree: ReducedTree,
    /// Per constraint: `a = |f(center − x₀)|`, `b = ‖f‖·2(h+1)δ₀` bounding
    /// `|f(x₀ − P_{T₀}y)|`, `c` = pruned mass bounding `|f(P_{T∞∖T₀}y)|`.
    pub bounds: Vec<[Rational; 3]>,
}

impl PibaseWitness {
    pub fn in_basic_set(&self, y: &FinVector) -> bool {
        chain_norm_value(y) <= Rational::one() && self.x0.entries().iter().all(|(s, q)| (&y.get(s) - q).abs() < self.delta0)
    }
}

/// Deterministic members of `W(x₀, δ₀)`: `c·x₀ + (1 − c)·e_u` with
/// `1 − c < δ₀` and `u` off the support, either a new child of the root or a
/// child of a support node. Intended for `T∞`, where new root children exist.
pub fn spot_members(x0: &FinVector, delta0: &Rational, count: usize) -> Vec<FinVector> {
    let fresh_index = x0.support().flat_map(|t| t.word().iter().copied()).max().map_or(1, |m| m + 1);
    let deep = x0.support().max_by_key(|t| t.depth()).cloned().unwrap_or_else(NodeId::root);
    (0..count)
        .map(|j| {
            let gap = delta0 * Rational::new(j.into(), (2 * count.max(1)).into());
            let c = Rational::one() - &gap;
            let u = if j % 2 == 0 {
                NodeId::root().child(fresh_index + j as u32)
            } else {
                let mut u = deep.child(j as u32 % 3);
                while x0.support().any(|s| s == &u) {
                    u = u.child(0);
                }
                u
            };
            let mut y = x0.scaled(&c);
            if x0.get(&u).is_zero() {
                y.add_at(u, &gap);
            }
            y
        })
        .collect()
}

/// Basic neighbourhood inside a weak neighbourhood of the ball of `X_{T∞}`.
pub fn pibase_basic_witness(w: &WeakNbhdSpec) -> Result<PibaseWitness> {
    if w.set != SetId::BX || w.center.kind() != TreeKind::Countable {
        return precondition("expected a neighbourhood of the ball of X_{T∞}");
    }
    if w.constraints.iter().any(|(f, _)| f.kind() != TreeKind::Countable) {
        return precondition("constraints must live on the countably branching tree");
    }
    let eps = w.constraints.iter().map(|(_, e)| e.clone()).min().unwrap_or_else(|| int(1));
    let quarter = &eps / int(4);
    let reductions = w
        .constraints
        .iter()
        .map(|(f, _)| finitely_branching_reduction(f, &quarter))
        .collect::<Result<Vec<_>>>()?;
    let tree = reductions.iter().fold(ReducedTree::hull(&w.center), |t, r| t.union(&r.tree));
    let narrowed: Vec<(Functional, Rational)> = w.constraints.iter().map(|(f, _)| (f.clone(), quarter.clone())).collect();
    let x0 = pc_near_in(&w.center, &narrowed, &tree)?;

    let h = x0.max_depth().unwrap_or(0);
    let spread = int(2 * (h as i64 + 1));
    let norms: Vec<Rational> = w.constraints.iter().map(|(f, _)| dual_norm(f).0).collect();
    let scale = norms.iter().cloned().fold(Rational::one(), Rational::max);
    let delta0 = &eps / (int(4) * scale * &spread);
    let bounds: Vec<[Rational; 3]> = w
        .constraints
        .iter()
        .zip(&norms)
        .zip(&reductions)
        .map(|(((f, _), nf), r)| [f.eval(&(&w.center - &x0)).abs(), nf * &spread * &delta0, r.pruned_mass.clone()])
        .collect();
    let out = PibaseWitness { x0, delta0, tree, bounds };

    for (i, ([a, b, c], (_, e))) in out.bounds.iter().zip(&w.constraints).enumerate() {
        let total = a + b + c;
        ensure(total < *e, || format!("constraint {i}: {total} is not below {e}"))?;
    }
    for y in spot_members(&out.x0, &out.delta0, 16) {
        ensure(out.in_basic_set(&y), || "spot member left the basic set".into())?;
        ensure(nbhd_membership(&y, w)?, || "basic set member left the neighbourhood".into())?;
    }
    Ok(out)
}
