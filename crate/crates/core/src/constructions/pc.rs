//! Points of continuity of the unit ball inside weak neighbourhoods.

use num_traits::{One, Signed};

use crate::classify::classify_in;
use crate::dual::{nbhd_membership, small_tail_level, SetId, WeakNbhdSpec};
use crate::error::{ensure, precondition, Result};
use crate::functional::Functional;
use crate::norm::chain_norm_value;
use crate::rational::{pow2, ratio, Rational};
use crate::signs::{balance_signs, SignProblem};
use crate::tree::{BinaryTree, FiniteBranchingTree, NodeId, Subtree, TreeKind};
use crate::vector::FinVector;

/// A point of continuity of the ball of the binary tree space with
/// `|f_j(x)| < ε` for every `j`.
pub fn pc_approximant(fs: &[Functional], eps: &Rational) -> Result<FinVector> {
    if fs.iter().any(|f| f.kind() != TreeKind::Binary) {
        return precondition("functionals must live on the binary tree");
    }
    pc_approximant_in(fs, eps, &BinaryTree)
}

/// A finitely supported point of continuity of the ball of `[e_t]_{t ∈ tree}`
/// with `|f_j(x)| < ε` for every `j`.
///
/// Past the level where coefficients off the heavy branches drop below
/// `τ = ε/2^{k+1}`, the point takes the telescoping pair
/// `½(e_{β(n₂)} − e_{β(n₁)})` on each heavy branch and signed unit mass on the
/// rest of level `n₂` (halved under `β(n₁)`), with signs from the
/// sign balancer so the light part stays below `ε/2`.
pub fn pc_approximant_in(fs: &[Functional], eps: &Rational, tree: &dyn FiniteBranchingTree) -> Result<FinVector> {
    if !eps.is_positive() {
        return precondition("eps must be positive");
    }
    let kind = tree.kind();
    if fs.is_empty() {
        return Ok(FinVector::unit(kind, NodeId::root()));
    }
    let k = fs.len();
    let tau = eps / pow2(k as u32 + 1);
    let (branches, level) = small_tail_level(fs, &tau)?;
    let mut split = 0;
    for (i, a) in branches.iter().enumerate() {
        for b in &branches[i + 1..] {
            split = split.max(a.divergence(b).unwrap_or(0));
        }
    }
    let data = fs.iter().map(Functional::data_depth).max().unwrap_or(0);
    let n1 = level.max(split).max(data) + 1;
    let n2 = n1 + 1;
    let heavy: Vec<(NodeId, NodeId)> = branches
        .iter()
        .map(|b| (b.node_at(n1), b.node_at(n2)))
        .filter(|(_, deep)| tree.contains(deep))
        .collect();

    let half = ratio(1, 2);
    let mut x = FinVector::zero(kind);
    let mut light: Vec<(NodeId, Rational)> = Vec::new();
    for t in tree.level(n2) {
        match heavy.iter().find(|(top, _)| top.is_prefix_of(&t)) {
            Some((_, deep)) if *deep == t => {}
            Some(_) => light.push((t, half.clone())),
            None => light.push((t, Rational::one())),
        }
    }
    for (top, deep) in &heavy {
        x.add_at(deep.clone(), &half);
        x.add_at(top.clone(), &-half.clone());
    }
    if !light.is_empty() {
        let rows = fs
            .iter()
            .map(|f| light.iter().map(|(t, w)| w * f.coefficient(t) / &tau).collect())
            .collect();
        let theta = balance_signs(&SignProblem::new(rows)?);
        for ((t, w), s) in light.iter().zip(theta) {
            x.add_at(t.clone(), &if s < 0 { -w } else { w.clone() });
        }
    }

    for (j, f) in fs.iter().enumerate() {
        let v = f.eval(&x);
        ensure(v.abs() < *eps, || format!("|f_{j}(x)| = {} is not below {eps}", v.abs()))?;
    }
    let report = classify_in(&x, tree);
    ensure(report.point_of_continuity, || format!("not a point of continuity: {:?}", report.pc_reason))?;
    Ok(x)
}

/// A point of continuity of the ball of `[e_t]_{t ∈ tree}` within the weak
/// neighbourhood `{z : |f_j(z − y)| < ε_j}` of a finitely supported `y` in the ball.
///
/// Every node `t` of the first level below `supp(y)` whose root path carries
/// mass `λ_t < 1` receives `(1 − λ_t)` times a shifted point of continuity of
/// the subtree at `t`, small on the pulled-back functionals.
pub fn pc_near_in(
    y: &FinVector,
    constraints: &[(Functional, Rational)],
    tree: &dyn FiniteBranchingTree,
) -> Result<FinVector> {
    let one = Rational::one();
    if y.kind() != tree.kind() || !y.support().all(|t| tree.contains(t)) {
        return precondition("y must be supported in the tree");
    }
    if chain_norm_value(y) > one {
        return precondition("y must lie in the unit ball");
    }
    let Some(eps) = constraints.iter().map(|(_, e)| e.clone()).min() else {
        return pc_near_unconstrained(y, tree);
    };
    if !eps.is_positive() {
        return precondition("neighbourhood radii must be positive");
    }
    let n = y.max_depth().map_or(0, |d| d + 1);
    let level = tree.level(n);
    let budget = &eps / Rational::from_integer((level.len() as i64).into());
    let mut out = y.clone();
    for t in &level {
        let lambda: Rational = t.path().map(|s| y.abs_at(&s)).sum();
        if lambda == one {
            continue;
        }
        let pulled: Vec<Functional> = constraints.iter().map(|(f, _)| f.pullback(t)).collect();
        let sub = Subtree { tree, at: t.clone() };
        let xt = pc_approximant_in(&pulled, &budget, &sub)?;
        out = &out + &xt.shift(t).scaled(&(&one - lambda));
    }

    let d = &out - y;
    for (j, (f, e)) in constraints.iter().enumerate() {
        let v = f.eval(&d).abs();
        ensure(v < *e, || format!("|f_{j}(x − y)| = {v} is not below {e}"))?;
    }
    let report = classify_in(&out, tree);
    ensure(report.point_of_continuity, || format!("not a point of continuity: {:?}", report.pc_reason))?;
    Ok(out)
}

fn pc_near_unconstrained(y: &FinVector, tree: &dyn FiniteBranchingTree) -> Result<FinVector> {
    // with no constraints any radius works; reuse the constrained path
    let zero = Functional::zero(tree.kind());
    pc_near_in(y, &[(zero, Rational::one())], tree)
}

/// [`pc_near_in`] on the binary tree for a neighbourhood of `B_X` centred at `y`.
pub fn pc_near(y: &FinVector, w: &WeakNbhdSpec) -> Result<FinVector> {
    if w.set != SetId::BX || &w.center != y || y.kind() != TreeKind::Binary {
        return precondition("expected a neighbourhood of BX in X_T centred at y");
    }
    let out = pc_near_in(y, &w.constraints, &BinaryTree)?;
    ensure(nbhd_membership(&out, w)?, || "output left the neighbourhood".into())?;
    Ok(out)
}
