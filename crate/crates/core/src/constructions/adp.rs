//! Alternative Daugavet witnesses: a strongly exposed point `y` of a slice and a
//! sign `θ` with `‖x + θy‖ = 2`.

use num_traits::One;

use crate::classify::classify_in;
use crate::dual::{dual_norm, slice_membership, SetId, SliceSpec};
use crate::error::{ensure, precondition, Result};
use crate::norm::{chain_norm_value, norm, SpaceId};
use crate::rational::{int, sign, Rational};
use crate::tree::{BinaryTree, Chain, NodeId, TreeKind};
use crate::vector::FinVector;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdpWitness {
    pub y: FinVector,
    pub theta: i8,
    /// Maximal antichain of unit coordinates of `y`.
    pub antichain: Vec<NodeId>,
    /// Root path through the node of the antichain met by a norming chain of
    /// `x`; `|x + θy|` sums to 2 along it.
    pub chain: Chain,
}

pub fn adp_witness(x: &FinVector, slice: &SliceSpec) -> Result<AdpWitness> {
    if slice.set != SetId::BX || slice.f.kind() != TreeKind::Binary {
        return precondition("expected a slice of BX on the binary tree");
    }
    if x.kind() != TreeKind::Binary || chain_norm_value(x) != Rational::one() {
        return precondition("x must lie on the unit sphere of X_T");
    }
    let (_, cert) = dual_norm(&slice.f);
    let y = cert.witness;
    let antichain: Vec<NodeId> = cert.antichain.iter().map(|(t, _)| t.clone()).collect();
    let (_, xcert) = norm(&SpaceId::XT, x)?;
    let end = xcert.set.last().cloned().unwrap_or_else(NodeId::root);
    let t = antichain
        .iter()
        .find(|t| t.comparable(&end))
        .cloned()
        .expect("a maximal antichain meets every root path");
    let theta = sign(&x.get(&t)) * sign(&y.get(&t));
    let deeper = if t.depth() > end.depth() { &t } else { &end };
    let out = AdpWitness { theta, antichain, chain: Chain::path_to(deeper), y };

    ensure(slice_membership(&out.y, slice)?, || "y left the slice".into())?;
    ensure(classify_in(&out.y, &BinaryTree).extreme, || "y is not strongly exposed".into())?;
    let sum = if theta < 0 { x - &out.y } else { x + &out.y };
    let along: Rational = out.chain.nodes().iter().map(|a| sum.abs_at(a)).sum();
    ensure(along == int(2), || format!("|x + θy| sums to {along} along the chain"))?;
    let total = chain_norm_value(&sum);
    ensure(total == int(2), || format!("‖x + θy‖ = {total}"))?;
    Ok(out)
}
