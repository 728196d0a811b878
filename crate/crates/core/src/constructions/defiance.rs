//! Daugavet-type witnesses in the positive ball and the slice-defiance
//! transcripts built from them.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use super::transcript::DefianceTranscript;
use crate::classify::classify_in;
use crate::dual::{slice_membership, sup_over, SetId, SliceSpec};
use crate::error::{ensure, precondition, Result};
use crate::functional::Functional;
use crate::norm::{chain_norm_value, norm, path_masses, SpaceId};
use crate::rational::{int, ratio, Rational};
use crate::tree::{fresh_node, least_descendant_where, BinaryTree, Chain, Freshness, NodeId, TreeKind};
use crate::vector::FinVector;

/// `y` in the slice with `‖x + y‖ = 2`, certified by a root path carrying one
/// unit of each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DaugavetWitness {
    pub y: FinVector,
    pub chain: Chain,
}

/// The maximal node of a norming chain of `x`.
fn norming_end(x: &FinVector) -> Result<NodeId> {
    let (_, cert) = norm(&SpaceId::XT, x)?;
    Ok(cert.set.last().cloned().unwrap_or_else(NodeId::root))
}

/// A member of `S(B⁺, f, δ)` attaining the supremum whose mass along some root
/// path through `below` is exactly 1, and the end of that path.
///
/// Either the positive argmax already reaches mass 1 at a node under `below`,
/// or a coordinate is added at a fresh node `s ≻ below` with `f(e_s) = 0` to
/// top up the ancestors of `s` to 1.
fn reach_one_below(f: &Functional, below: &NodeId) -> Result<(FinVector, NodeId)> {
    let (_, cert) = sup_over(SetId::BPlus, f)?;
    let y0 = cert.witness;
    let one = Rational::one();
    let masses = path_masses(&y0);
    if let Some((t, _)) = masses.iter().find(|(t, m)| below.is_prefix_of(t) && **m == one) {
        return Ok((y0, t.clone()));
    }
    let depth = f.data_depth().max(below.depth()).max(y0.max_depth().unwrap_or(0));
    let limit = depth + 2 + f.branch_parts().len();
    let s = least_descendant_where(below, TreeKind::Binary, 1, limit, |s| {
        f.coefficient(s).is_zero() && !y0.support().any(|u| s.is_prefix_of(u))
    })
    .expect("off-branch nodes past the data depth carry no coefficient");
    let lambda: Rational = s.ancestors().map(|a| y0.get(&a)).sum();
    let mut y = y0;
    y.add_at(s.clone(), &(one - lambda));
    Ok((y, s))
}

fn check_positive_slice(s: &SliceSpec) -> Result<()> {
    if s.set != SetId::BPlus {
        return precondition(format!("expected a slice of BPLUS, got {}", s.set.name()));
    }
    if s.f.kind() != TreeKind::Binary {
        return precondition("slices must live on the binary tree");
    }
    Ok(())
}

/// For `x ∈ S_{X_T} ∩ X⁺`, a point `y` of the slice with `‖x + y‖ = 2`.
pub fn daugavet_witness(x: &FinVector, slice: &SliceSpec) -> Result<DaugavetWitness> {
    check_positive_slice(slice)?;
    if x.kind() != TreeKind::Binary || !x.is_nonnegative() || chain_norm_value(x) != Rational::one() {
        return precondition("x must be a nonnegative point of the unit sphere of X_T");
    }
    let (y, end) = reach_one_below(&slice.f, &norming_end(x)?)?;
    let out = DaugavetWitness { y, chain: Chain::path_to(&end) };

    let one = Rational::one();
    ensure(slice_membership(&out.y, slice)?, || "y left the slice".into())?;
    for (name, v) in [("x", x), ("y", &out.y)] {
        let along: Rational = out.chain.nodes().iter().map(|t| v.get(t)).sum();
        ensure(along == one, || format!("{name} sums to {along} along the chain"))?;
    }
    let total = chain_norm_value(&(x + &out.y));
    ensure(total == int(2), || format!("‖x + y‖ = {total}"))?;
    Ok(out)
}

/// One point per slice of `B⁺`, all carrying one unit along a common root
/// path, so that `‖x_1 + … + x_n‖ = n` and the path functional separates
/// them from `avoid` (which must lie in `Ω⁺`) with gap 1.
pub fn positive_slice_defiance(slices: &[SliceSpec], avoid: Option<&FinVector>) -> Result<DefianceTranscript> {
    for s in slices {
        check_positive_slice(s)?;
    }
    let mut end = match avoid {
        None => NodeId::root(),
        Some(a) => {
            if a.kind() != TreeKind::Binary || !classify_in(a, &BinaryTree).in_omega_plus {
                return precondition("the avoided point must lie in Ω⁺");
            }
            let supp: BTreeSet<NodeId> = a.support().cloned().collect();
            fresh_node(&NodeId::root(), &supp, TreeKind::Binary, Freshness::Incomparable)?
        }
    };
    let mut elements = Vec::with_capacity(slices.len());
    for s in slices {
        let (x, next) = reach_one_below(&s.f, &end)?;
        elements.push(x);
        end = next;
    }
    let chain = Chain::path_to(&end);
    let separator = Functional::chain_functional(TreeKind::Binary, &chain, |_| 1);
    let t = DefianceTranscript { signs: vec![1; elements.len()], elements, chain, separator, gap: int(1) };

    for (i, (x, s)) in t.elements.iter().zip(slices).enumerate() {
        ensure(slice_membership(x, s)?, || format!("element {i} left its slice"))?;
    }
    t.verify_sums()?;
    if let Some(a) = avoid {
        let ga = t.separator.eval(a);
        ensure(ga.is_zero(), || format!("separator gives {ga} on the avoided point"))?;
    }
    Ok(t)
}

/// A selection from slices of `C` that stays at distance `≥ ¼` from every
/// convex combination, certified by the pair `(g, h)`:
/// `g` vanishes at `x` and is 1 on the selections from `B⁺`, while `h` is 1 at
/// `x` and nonpositive on `B⁻`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CWitness {
    pub elements: Vec<FinVector>,
    /// Whether each element came from the positive side.
    pub positive: Vec<bool>,
    pub positive_part: DefianceTranscript,
    pub g: Functional,
    pub h: Functional,
    pub gap: Rational,
}

impl CWitness {
    /// `‖x − Σ w_i x_i‖` for convex weights `w`, failing when it is below the gap.
    pub fn check_combination(&self, x: &FinVector, weights: &[Rational]) -> Result<Rational> {
        if weights.len() != self.elements.len()
            || weights.iter().any(Signed::is_negative)
            || weights.iter().sum::<Rational>() != Rational::one()
        {
            return precondition("weights must be a convex combination of the selection");
        }
        let mut w = FinVector::zero(TreeKind::Binary);
        for (q, e) in weights.iter().zip(&self.elements) {
            w = &w + &e.scaled(q);
        }
        let d = chain_norm_value(&(x - &w));
        ensure(d >= self.gap, || format!("combination at distance {d} < {}", self.gap))?;
        Ok(d)
    }
}

/// Defies any finite family of slices of `C` at a norm-one point `x ∈ Ω⁺`.
pub fn c_non_scd_witness(x: &FinVector, slices: &[SliceSpec]) -> Result<CWitness> {
    let report = classify_in(x, &BinaryTree);
    if x.kind() != TreeKind::Binary || !report.in_omega_plus || !report.on_sphere {
        return precondition("x must be a norm-one point of Ω⁺");
    }
    let mut positive = Vec::with_capacity(slices.len());
    let mut pos_slices = Vec::new();
    let mut negatives = Vec::new();
    for s in slices {
        if s.set != SetId::C {
            return precondition(format!("expected a slice of C, got {}", s.set.name()));
        }
        let top = sup_over(SetId::C, &s.f)?.0;
        let plus = sup_over(SetId::BPlus, &s.f)?.0;
        let threshold = &top - &s.delta;
        if plus > threshold {
            // S(C, f, δ) ∩ B⁺ = S(B⁺, f, δ − (sup_C f − sup_{B⁺} f))
            pos_slices.push(SliceSpec::new(SetId::BPlus, s.f.clone(), plus - threshold)?);
            positive.push(true);
        } else {
            let (_, c) = sup_over(SetId::BPlus, &s.f.neg())?;
            negatives.push(-&c.witness);
            positive.push(false);
        }
    }
    let positive_part = positive_slice_defiance(&pos_slices, Some(x))?;
    let (mut pi, mut ni) = (positive_part.elements.iter(), negatives.into_iter());
    let elements: Vec<FinVector> = positive
        .iter()
        .map(|&p| if p { pi.next().cloned().expect("one per positive slice") } else { ni.next().expect("one per negative slice") })
        .collect();
    let (_, cert) = norm(&SpaceId::XT, x)?;
    let h_chain = Chain::new(cert.set)?;
    let h = Functional::chain_functional(TreeKind::Binary, &h_chain, |_| 1);
    let out = CWitness { elements, positive, g: positive_part.separator.clone(), positive_part, h, gap: ratio(1, 4) };

    let one = Rational::one();
    for (i, (e, s)) in out.elements.iter().zip(slices).enumerate() {
        ensure(slice_membership(e, s)?, || format!("element {i} left its slice"))?;
        if out.positive[i] {
            ensure(out.g.eval(e) == one, || format!("g is not 1 on element {i}"))?;
        } else {
            ensure((-e).is_nonnegative(), || format!("element {i} is not in B⁻"))?;
        }
    }
    ensure(out.g.eval(x).is_zero(), || "g does not vanish at x".into())?;
    ensure(out.h.eval(x) == one, || "h is not 1 at x".into())?;
    ensure(crate::dual::dual_norm(&out.h).0 == one, || "h is not norm one".into())?;
    Ok(out)
}
