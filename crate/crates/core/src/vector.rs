//! Finitely supported rational vectors `x ∈ c₀₀(T)`.

use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::tree::{NodeId, TreeKind};

/// Map from nodes to nonzero coefficients; absent nodes are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinVector {
    kind: TreeKind,
    entries: BTreeMap<NodeId, Rational>,
}

impl FinVector {
    pub fn zero(kind: TreeKind) -> Self {
        FinVector { kind, entries: BTreeMap::new() }
    }

    pub fn unit(kind: TreeKind, t: NodeId) -> Self {
        let mut v = Self::zero(kind);
        v.entries.insert(t, Rational::from_integer(1.into()));
        v
    }

    /// Builds a vector, summing repeated nodes and dropping zeros.
    pub fn from_entries(kind: TreeKind, entries: impl IntoIterator<Item = (NodeId, Rational)>) -> Result<Self> {
        let mut v = Self::zero(kind);
        for (t, q) in entries {
            if !t.is_valid_for(kind) {
                return Err(Error::Malformed(format!("node {t} is not in a {kind:?} tree")));
            }
            v.add_at(t, &q);
        }
        Ok(v)
    }

    /// Binary-tree shorthand used throughout the tests: `binary(&[("0", q), ...])`.
    pub fn binary(entries: &[(&str, Rational)]) -> Self {
        Self::from_entries(
            TreeKind::Binary,
            entries.iter().map(|(s, q)| (NodeId::parse(s, TreeKind::Binary).expect("bit string"), q.clone())),
        )
        .expect("binary nodes")
    }

    pub fn kind(&self) -> TreeKind {
        self.kind
    }

    pub fn get(&self, t: &NodeId) -> Rational {
        self.entries.get(t).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn abs_at(&self, t: &NodeId) -> Rational {
        self.entries.get(t).map(|q| q.abs()).unwrap_or_else(Rational::zero)
    }

    pub fn add_at(&mut self, t: NodeId, q: &Rational) {
        if q.is_zero() {
            return;
        }
        let slot = self.entries.entry(t.clone()).or_insert_with(Rational::zero);
        *slot += q;
        if slot.is_zero() {
            self.entries.remove(&t);
        }
    }

    pub fn entries(&self) -> &BTreeMap<NodeId, Rational> {
        &self.entries
    }

    pub fn support(&self) -> impl Iterator<Item = &NodeId> {
        self.entries.keys()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.values().all(|q| q.is_positive())
    }

    pub fn max_depth(&self) -> Option<usize> {
        self.entries.keys().map(NodeId::depth).max()
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.kind);
        }
        FinVector {
            kind: self.kind,
            entries: self.entries.iter().map(|(t, q)| (t.clone(), q * c)).collect(),
        }
    }

    /// Coordinatewise product with a sign pattern (`signs(t) ∈ {−1, 1}`).
    pub fn with_signs(&self, mut signs: impl FnMut(&NodeId) -> i8) -> Self {
        FinVector {
            kind: self.kind,
            entries: self
                .entries
                .iter()
                .map(|(t, q)| (t.clone(), if signs(t) < 0 { -q.clone() } else { q.clone() }))
                .collect(),
        }
    }

    /// `P_S x`.
    pub fn project(&self, mut keep: impl FnMut(&NodeId) -> bool) -> Self {
        FinVector {
            kind: self.kind,
            entries: self.entries.iter().filter(|(t, _)| keep(t)).map(|(t, q)| (t.clone(), q.clone())).collect(),
        }
    }

    /// `S_t x`: re-index every coordinate `s` to `t ⌢ s`.
    pub fn shift(&self, t: &NodeId) -> Self {
        FinVector {
            kind: self.kind,
            entries: self.entries.iter().map(|(s, q)| (t.concat(s), q.clone())).collect(),
        }
    }

    /// Inverse of [`shift`](Self::shift); requires `supp(x) ⊆ T(t)`.
    pub fn unshift(&self, t: &NodeId) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .map(|(s, q)| {
                s.strip_prefix(t)
                    .map(|r| (r, q.clone()))
                    .ok_or_else(|| Error::Precondition(format!("support node {s} is outside T({t})")))
            })
            .collect::<Result<_>>()?;
        Ok(FinVector { kind: self.kind, entries })
    }

    /// `(x⁺, x⁻)` with `x = x⁺ − x⁻`.
    pub fn lattice_parts(&self) -> (Self, Self) {
        let mut plus = Self::zero(self.kind);
        let mut minus = Self::zero(self.kind);
        for (t, q) in &self.entries {
            if q.is_positive() {
                plus.entries.insert(t.clone(), q.clone());
            } else {
                minus.entries.insert(t.clone(), -q.clone());
            }
        }
        (plus, minus)
    }
}

impl Add for &FinVector {
    type Output = FinVector;

    fn add(self, rhs: &FinVector) -> FinVector {
        let mut out = self.clone();
        for (t, q) in &rhs.entries {
            out.add_at(t.clone(), q);
        }
        out
    }
}

impl Sub for &FinVector {
    type Output = FinVector;

    fn sub(self, rhs: &FinVector) -> FinVector {
        let mut out = self.clone();
        for (t, q) in &rhs.entries {
            out.add_at(t.clone(), &-q.clone());
        }
        out
    }
}

impl Neg for &FinVector {
    type Output = FinVector;

    fn neg(self) -> FinVector {
        self.scaled(&Rational::from_integer((-1).into()))
    }
}
