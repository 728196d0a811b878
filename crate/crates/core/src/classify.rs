//! Point classification in the unit ball of `X_T`, the exposing
//! functional of extreme points, and the renorming gauge.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::functional::Functional;
use crate::norm::{chain_norm_value, SpaceId};
use crate::rational::{sign, Rational};
use crate::tree::{Antichain, BinaryTree, FiniteBranchingTree, NodeId, TreeKind};
use crate::vector::FinVector;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationReport {
    pub norm: Rational,
    pub in_ball: bool,
    pub on_sphere: bool,
    /// Extreme and strongly exposed coincide on finitely supported points.
    pub extreme: bool,
    /// The maximal antichain of unit coordinates when `extreme`.
    pub witness: Option<Vec<NodeId>>,
    pub in_sigma: bool,
    pub in_sigma_plus: bool,
    pub in_omega_plus: bool,
    pub point_of_continuity: bool,
    /// Why `point_of_continuity` is false, when it is.
    pub pc_reason: Option<String>,
    /// `min_β ‖P_β x‖`.
    pub min_branch_mass: Rational,
}

pub fn classify(space: &SpaceId, x: &FinVector) -> Result<ClassificationReport> {
    if !matches!(space, SpaceId::XT) {
        return Err(Error::Unsupported("classification is only available for X_T".into()));
    }
    if x.kind() != TreeKind::Binary {
        return Err(Error::Precondition("X_T vectors live on the binary tree".into()));
    }
    Ok(classify_in(x, &BinaryTree))
}

/// Classification relative to the ball of `[e_t]_{t ∈ tree}`.
pub fn classify_in(x: &FinVector, tree: &dyn FiniteBranchingTree) -> ClassificationReport {
    let one = Rational::one();
    let norm = chain_norm_value(x);
    let in_ball = norm <= one;
    let on_sphere = norm == one;

    let units: Vec<NodeId> = x.entries().iter().filter(|(_, q)| q.abs() == one).map(|(t, _)| t.clone()).collect();
    // on the sphere, unit coordinates are pairwise incomparable
    let unit_antichain = if on_sphere { Antichain::new(units.iter().cloned()).ok() } else { None };
    let extreme = unit_antichain.as_ref().is_some_and(|a| a.is_maximal_in(tree));
    let witness = extreme.then(|| units.clone());

    let in_sigma = in_ball && x.entries().values().all(|q| q.abs() == one);
    let in_sigma_plus = in_sigma && x.is_nonnegative();
    let in_omega_plus = in_sigma_plus && !extreme;

    let min_branch_mass = min_branch_mass(x, tree);
    let (point_of_continuity, pc_reason) = if !on_sphere {
        (false, Some(if in_ball { "norm < 1" } else { "norm > 1" }.to_string()))
    } else if min_branch_mass != one {
        (false, Some(format!("some branch carries mass {}", min_branch_mass)))
    } else {
        (true, None)
    };

    ClassificationReport {
        norm,
        in_ball,
        on_sphere,
        extreme,
        witness,
        in_sigma,
        in_sigma_plus,
        in_omega_plus,
        point_of_continuity,
        pc_reason,
        min_branch_mass,
    }
}

/// `min_β Σ_{t∈β} |x(t)|` over the branches of `tree`, by recursion over the
/// support hull: a child with nothing beneath it ends a branch of mass equal
/// to the path so far.
pub fn min_branch_mass(x: &FinVector, tree: &dyn FiniteBranchingTree) -> Rational {
    fn below(x: &FinVector, t: &NodeId, tree: &dyn FiniteBranchingTree) -> Rational {
        let here = x.abs_at(t);
        if !x.support().any(|s| t.is_prefix_of(s) && s != t) {
            return here;
        }
        let best = tree
            .children(t)
            .iter()
            .map(|c| if x.support().any(|s| c.is_prefix_of(s)) { below(x, c, tree) } else { Rational::zero() })
            .min()
            .unwrap_or_else(Rational::zero);
        here + best
    }
    below(x, &NodeId::root(), tree)
}

/// `(1/|α|) Σ_{s∈α} sign(x(s)) e*_s` for an extreme point `x` of `B_{X_T}`.
pub fn exposing_functional(x: &FinVector) -> Result<Functional> {
    let report = classify(&SpaceId::XT, x)?;
    let alpha = report
        .witness
        .ok_or_else(|| Error::Precondition("point is not an extreme point of the unit ball".into()))?;
    let w = Rational::new(1.into(), (alpha.len() as i64).into());
    Ok(Functional::finite(
        TreeKind::Binary,
        alpha.iter().map(|s| {
            let q = if sign(&x.get(s)) < 0 { -w.clone() } else { w.clone() };
            (s.clone(), q)
        }),
    ))
}

/// Gauge of `C = cconv(B⁺ ∪ B⁻)`: `‖x⁺‖ + ‖x⁻‖`.
pub fn gauge_norm(x: &FinVector) -> Rational {
    let (plus, minus) = x.lattice_parts();
    chain_norm_value(&plus) + chain_norm_value(&minus)
}
