//! Adequate-family norms `‖x‖ = sup_{A ∈ 𝒜} Σ_{t∈A} |x(t)|` with an
//! attaining set as certificate.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::error::{precondition, Error, Result};
use crate::rational::Rational;
use crate::tree::{NodeId, TreeKind};
use crate::vector::FinVector;

/// A hereditary family of finite node sets containing all singletons.
pub trait AdequateFamily: Send + Sync + fmt::Debug {
    fn contains(&self, set: &[NodeId]) -> bool;
}

/// All chains; generates `X_T` / `X_{T∞}` when used through the generic path.
#[derive(Debug, Clone, Copy, Default)]
pub struct Chains;

impl AdequateFamily for Chains {
    fn contains(&self, set: &[NodeId]) -> bool {
        is_chain(set)
    }
}

/// Singletons only; generates `c₀`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Singletons;

impl AdequateFamily for Singletons {
    fn contains(&self, set: &[NodeId]) -> bool {
        set.len() <= 1
    }
}

/// Every finite set; generates `ℓ₁`.
#[derive(Debug, Clone, Copy, Default)]
pub struct AllSets;

impl AdequateFamily for AllSets {
    fn contains(&self, _set: &[NodeId]) -> bool {
        true
    }
}

/// Chains of the unrooted binary tree plus subsets of λ-segments.
#[derive(Debug, Clone, Copy, Default)]
pub struct LambdaSegments;

impl AdequateFamily for LambdaSegments {
    fn contains(&self, set: &[NodeId]) -> bool {
        if set.iter().any(NodeId::is_root) {
            return false;
        }
        if is_chain(set) {
            return true;
        }
        set.iter().filter_map(NodeId::parent).any(|s| {
            set.iter().all(|u| u.is_prefix_of(&s) || u.parent().as_ref() == Some(&s))
        })
    }
}

fn is_chain(set: &[NodeId]) -> bool {
    set.iter().enumerate().all(|(i, a)| set[i + 1..].iter().all(|b| a.comparable(b)))
}

#[derive(Clone, Debug)]
pub enum SpaceId {
    /// Chains of the binary tree.
    XT,
    /// Chains of the countably branching tree.
    XTInf,
    /// The λ-segment family on the unrooted binary tree.
    XM,
    /// Any adequate family, evaluated by branch-and-bound.
    Adequate { family: Arc<dyn AdequateFamily>, kind: TreeKind },
}

impl SpaceId {
    /// `T`, `TINF`, `M`, or a generic family on the binary tree:
    /// `CHAINS`, `SINGLETONS`, `ALL`, `LAMBDA`.
    pub fn parse(tag: &str) -> Result<Self> {
        let adequate = |family: Arc<dyn AdequateFamily>| SpaceId::Adequate { family, kind: TreeKind::Binary };
        Ok(match tag {
            "T" => SpaceId::XT,
            "TINF" => SpaceId::XTInf,
            "M" => SpaceId::XM,
            "CHAINS" => adequate(Arc::new(Chains)),
            "SINGLETONS" => adequate(Arc::new(Singletons)),
            "ALL" => adequate(Arc::new(AllSets)),
            "LAMBDA" => adequate(Arc::new(LambdaSegments)),
            _ => return Err(Error::Malformed(format!("unknown space {tag:?}"))),
        })
    }

    pub fn kind(&self) -> TreeKind {
        match self {
            SpaceId::XT | SpaceId::XM => TreeKind::Binary,
            SpaceId::XTInf => TreeKind::Countable,
            SpaceId::Adequate { kind, .. } => *kind,
        }
    }

    pub fn family_contains(&self, set: &[NodeId]) -> bool {
        match self {
            SpaceId::XT | SpaceId::XTInf => is_chain(set),
            SpaceId::XM => LambdaSegments.contains(set),
            SpaceId::Adequate { family, .. } => family.contains(set),
        }
    }
}

/// An attaining family member: `Σ_{t ∈ set} |x(t)| = value`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormCertificate {
    pub set: Vec<NodeId>,
    pub value: Rational,
}

impl NormCertificate {
    /// Re-sums `|x|` over the set and checks family membership.
    pub fn verify(&self, space: &SpaceId, x: &FinVector) -> bool {
        let sum: Rational = self.set.iter().map(|t| x.abs_at(t)).sum();
        sum == self.value && (self.set.is_empty() || space.family_contains(&self.set))
    }
}

pub fn norm(space: &SpaceId, x: &FinVector) -> Result<(Rational, NormCertificate)> {
    if x.kind() != space.kind() {
        return precondition(format!("{:?} vector in a {:?} space", x.kind(), space.kind()));
    }
    let cert = match space {
        SpaceId::XT | SpaceId::XTInf => chain_norm(x),
        SpaceId::XM => {
            if !x.get(&NodeId::root()).is_zero() {
                return precondition("the λ-segment space has no root coordinate");
            }
            lambda_norm(x)
        }
        SpaceId::Adequate { family, .. } => branch_and_bound(family.as_ref(), x),
    };
    Ok((cert.value.clone(), cert))
}

/// Norm in `X_T` / `X_{T∞}`; the kind is taken from the vector.
pub fn chain_norm_value(x: &FinVector) -> Rational {
    chain_norm(x).value
}

/// Root-path masses `Σ_{s ⪯ t} |x(s)|` for every support node `t`, computed
/// top-down by extending the mass of the nearest support ancestor.
pub(crate) fn path_masses(x: &FinVector) -> BTreeMap<NodeId, Rational> {
    let mut mass: BTreeMap<NodeId, Rational> = BTreeMap::new();
    // BTreeMap iterates in shortlex order, so ancestors come first.
    for (t, q) in x.entries() {
        let above = t.ancestors().collect::<Vec<_>>().into_iter().rev().find_map(|a| mass.get(&a).cloned());
        mass.insert(t.clone(), q.abs() + above.unwrap_or_else(Rational::zero));
    }
    mass
}

fn chain_norm(x: &FinVector) -> NormCertificate {
    let mass = path_masses(x);
    let mut best: Option<(&NodeId, &Rational)> = None;
    for (t, m) in &mass {
        if best.is_none_or(|(_, b)| m > b) {
            best = Some((t, m));
        }
    }
    match best {
        None => NormCertificate { set: Vec::new(), value: Rational::zero() },
        Some((end, value)) => NormCertificate {
            set: end.path().filter(|a| mass.contains_key(a)).collect(),
            value: value.clone(),
        },
    }
}

fn lambda_norm(x: &FinVector) -> NormCertificate {
    let mut best = chain_norm(x);
    let parents: std::collections::BTreeSet<NodeId> = x.support().filter_map(NodeId::parent).collect();
    for s in parents {
        let pair = [s.child(0), s.child(1)];
        let mut set: Vec<NodeId> = s.path().filter(|a| x.entries().contains_key(a)).collect();
        set.extend(pair.iter().filter(|c| x.entries().contains_key(c)).cloned());
        let value: Rational = set.iter().map(|t| x.abs_at(t)).sum();
        if value > best.value {
            best = NormCertificate { set, value };
        }
    }
    best.set.sort();
    best
}

fn branch_and_bound(family: &dyn AdequateFamily, x: &FinVector) -> NormCertificate {
    let items: Vec<(NodeId, Rational)> = x.entries().iter().map(|(t, q)| (t.clone(), q.abs())).collect();
    // suffix sums bound what the remaining items can still add
    let mut rest = vec![Rational::zero(); items.len() + 1];
    for i in (0..items.len()).rev() {
        rest[i] = &rest[i + 1] + &items[i].1;
    }
    struct Search<'a> {
        family: &'a dyn AdequateFamily,
        items: &'a [(NodeId, Rational)],
        rest: &'a [Rational],
        current: Vec<NodeId>,
        best: NormCertificate,
    }
    impl Search<'_> {
        fn go(&mut self, i: usize, sum: Rational) {
            if sum > self.best.value {
                self.best = NormCertificate { set: self.current.clone(), value: sum.clone() };
            }
            if i == self.items.len() || &sum + &self.rest[i] <= self.best.value {
                return;
            }
            let (t, q) = &self.items[i];
            self.current.push(t.clone());
            if self.family.contains(&self.current) {
                self.go(i + 1, &sum + q);
            }
            self.current.pop();
            self.go(i + 1, sum);
        }
    }
    let mut s = Search {
        family,
        items: &items,
        rest: &rest,
        current: Vec::new(),
        best: NormCertificate { set: Vec::new(), value: Rational::zero() },
    };
    s.go(0, Rational::zero());
    s.best
}
