//! The representable slice of the dual: a finite part plus finitely many
//! branch parts whose coefficients are eventually constant along the branch.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::tree::{Branch, Chain, NodeId, TreeKind};
use crate::vector::FinVector;

/// Coefficients `override(depth)` at the listed depths and `tail` elsewhere,
/// on every node of `branch`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchPart {
    pub branch: Branch,
    pub overrides: BTreeMap<usize, Rational>,
    pub tail: Rational,
}

impl BranchPart {
    pub fn constant(branch: Branch, tail: Rational) -> Self {
        BranchPart { branch, overrides: BTreeMap::new(), tail }
    }

    pub fn at_depth(&self, d: usize) -> &Rational {
        self.overrides.get(&d).unwrap_or(&self.tail)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Functional {
    kind: TreeKind,
    finite: BTreeMap<NodeId, Rational>,
    branches: Vec<BranchPart>,
}

impl Functional {
    pub fn zero(kind: TreeKind) -> Self {
        Functional { kind, finite: BTreeMap::new(), branches: Vec::new() }
    }

    /// `e*_t`.
    pub fn coordinate(kind: TreeKind, t: NodeId) -> Self {
        Self::finite(kind, [(t, Rational::from_integer(1.into()))])
    }

    pub fn finite(kind: TreeKind, entries: impl IntoIterator<Item = (NodeId, Rational)>) -> Self {
        let mut f = Self::zero(kind);
        for (t, q) in entries {
            f.add_finite(t, &q);
        }
        f
    }

    /// Binary-tree shorthand mirroring [`FinVector::binary`].
    pub fn binary(entries: &[(&str, Rational)]) -> Self {
        Self::finite(
            TreeKind::Binary,
            entries.iter().map(|(s, q)| (NodeId::parse(s, TreeKind::Binary).expect("bit string"), q.clone())),
        )
    }

    pub fn new(kind: TreeKind, finite: BTreeMap<NodeId, Rational>, branches: Vec<BranchPart>) -> Result<Self> {
        for t in finite.keys() {
            if !t.is_valid_for(kind) {
                return Err(Error::Malformed(format!("node {t} is not in a {kind:?} tree")));
            }
        }
        for (i, p) in branches.iter().enumerate() {
            if !p.branch.is_valid_for(kind) {
                return Err(Error::Malformed(format!("branch {:?} is not in a {kind:?} tree", p.branch)));
            }
            if branches[..i].iter().any(|q| q.branch == p.branch) {
                return Err(Error::Malformed("branch parts must be pairwise distinct".into()));
            }
        }
        let mut f = Functional { kind, finite: BTreeMap::new(), branches: Vec::new() };
        for (t, q) in finite {
            f.add_finite(t, &q);
        }
        for p in branches {
            f.add_branch(p);
        }
        Ok(f)
    }

    /// `Σ_{t ∈ A} σ(t) e*_t`.
    pub fn chain_functional(kind: TreeKind, chain: &Chain, mut sign: impl FnMut(&NodeId) -> i8) -> Self {
        Self::finite(
            kind,
            chain.nodes().iter().map(|t| (t.clone(), Rational::from_integer(i64::from(sign(t)).into()))),
        )
    }

    pub fn kind(&self) -> TreeKind {
        self.kind
    }

    pub fn finite_part(&self) -> &BTreeMap<NodeId, Rational> {
        &self.finite
    }

    pub fn branch_parts(&self) -> &[BranchPart] {
        &self.branches
    }

    pub fn is_finitely_supported(&self) -> bool {
        self.branches.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.finite.is_empty() && self.branches.is_empty()
    }

    fn add_finite(&mut self, t: NodeId, q: &Rational) {
        if q.is_zero() {
            return;
        }
        let slot = self.finite.entry(t.clone()).or_insert_with(Rational::zero);
        *slot += q;
        if slot.is_zero() {
            self.finite.remove(&t);
        }
    }

    fn add_branch(&mut self, p: BranchPart) {
        match self.branches.iter_mut().find(|q| q.branch == p.branch) {
            Some(q) => {
                let depths: BTreeSet<usize> = q.overrides.keys().chain(p.overrides.keys()).copied().collect();
                let overrides = depths.into_iter().map(|d| (d, q.at_depth(d) + p.at_depth(d))).collect();
                q.overrides = overrides;
                q.tail = &q.tail + &p.tail;
            }
            None => self.branches.push(p),
        }
        self.branches.retain(|q| !(q.tail.is_zero() && q.overrides.values().all(Zero::is_zero)));
        for q in &mut self.branches {
            let tail = q.tail.clone();
            q.overrides.retain(|_, v| *v != tail);
        }
    }

    /// `f(e_t)`.
    pub fn coefficient(&self, t: &NodeId) -> Rational {
        let mut c = self.finite.get(t).cloned().unwrap_or_else(Rational::zero);
        for p in &self.branches {
            if p.branch.contains(t) {
                c += p.at_depth(t.depth());
            }
        }
        c
    }

    pub fn eval(&self, x: &FinVector) -> Rational {
        x.entries().iter().map(|(t, q)| self.coefficient(t) * q).sum()
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.kind);
        if c.is_zero() {
            return out;
        }
        out.finite = self.finite.iter().map(|(t, q)| (t.clone(), q * c)).collect();
        out.branches = self
            .branches
            .iter()
            .map(|p| BranchPart {
                branch: p.branch.clone(),
                overrides: p.overrides.iter().map(|(d, q)| (*d, q * c)).collect(),
                tail: &p.tail * c,
            })
            .collect();
        out
    }

    pub fn neg(&self) -> Self {
        self.scaled(&Rational::from_integer((-1).into()))
    }

    pub fn plus(&self, other: &Functional) -> Self {
        let mut out = self.clone();
        for (t, q) in &other.finite {
            out.add_finite(t.clone(), q);
        }
        for p in &other.branches {
            out.add_branch(p.clone());
        }
        out
    }

    /// Depth below which every node carries at most one branch part, no finite
    /// data and no override, so its coefficient is that branch's tail (or 0).
    pub fn data_depth(&self) -> usize {
        let finite = self.finite.keys().map(NodeId::depth).max().unwrap_or(0);
        let overrides = self.branches.iter().flat_map(|p| p.overrides.keys().copied()).max().unwrap_or(0);
        let mut split = 0;
        for (i, p) in self.branches.iter().enumerate() {
            for q in &self.branches[i + 1..] {
                split = split.max(p.branch.divergence(&q.branch).unwrap_or(0));
            }
        }
        finite.max(overrides).max(split)
    }

    /// True when `T(t)` carries any nonzero coefficient.
    pub fn has_data_below(&self, t: &NodeId) -> bool {
        self.finite.keys().any(|s| t.is_prefix_of(s)) || self.branches.iter().any(|p| p.branch.contains(t))
    }

    /// Child indices of `t` whose subtrees carry data.
    pub fn data_children(&self, t: &NodeId) -> BTreeSet<u32> {
        let d = t.depth();
        let mut out: BTreeSet<u32> = self
            .finite
            .keys()
            .filter(|s| s.depth() > d && t.is_prefix_of(s))
            .map(|s| s.word()[d])
            .collect();
        out.extend(self.branches.iter().filter(|p| p.branch.contains(t)).map(|p| p.branch.letter(d)));
        out
    }

    /// The unique branch part through `t` once `t` is below [`data_depth`](Self::data_depth).
    pub(crate) fn deep_branch(&self, t: &NodeId) -> Option<&BranchPart> {
        self.branches.iter().find(|p| p.branch.contains(t))
    }

    /// `f ∘ S_t`: `coefficient(pullback(f, t), s) = coefficient(f, t ⌢ s)`.
    pub fn pullback(&self, t: &NodeId) -> Functional {
        let k = t.depth();
        let mut out = Self::zero(self.kind);
        for (s, q) in &self.finite {
            if let Some(r) = s.strip_prefix(t) {
                out.add_finite(r, q);
            }
        }
        for p in &self.branches {
            if let Some(branch) = p.branch.pullback(t) {
                out.add_branch(BranchPart {
                    branch,
                    overrides: p.overrides.range(k..).map(|(d, q)| (d - k, q.clone())).collect(),
                    tail: p.tail.clone(),
                });
            }
        }
        out
    }

    /// `l_β(f) = limsup_n |f(e_{β(n)})|`.
    pub fn l_beta(&self, beta: &Branch) -> Rational {
        self.branches
            .iter()
            .find(|p| &p.branch == beta)
            .map(|p| p.tail.abs())
            .unwrap_or_else(Rational::zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn zero_branch() -> Branch {
        Branch::new(vec![], vec![0]).unwrap()
    }

    #[test]
    fn eval_examples() {
        let e0 = Functional::binary(&[("0", int(1))]);
        assert_eq!(e0.eval(&FinVector::binary(&[("0", int(1))])), int(1));
        assert_eq!(e0.eval(&FinVector::binary(&[("1", int(1))])), int(0));
        let f = Functional::new(
            TreeKind::Binary,
            BTreeMap::new(),
            vec![BranchPart::constant(zero_branch(), int(1))],
        )
        .unwrap();
        assert_eq!(f.eval(&FinVector::binary(&[("00", int(1))])), int(1));
        assert_eq!(f.eval(&FinVector::binary(&[("01", int(1))])), int(0));
    }

    #[test]
    fn pullback_examples() {
        let t = NodeId::bits("0");
        assert_eq!(Functional::binary(&[("01", int(1))]).pullback(&t), Functional::binary(&[("1", int(1))]));
        assert!(Functional::binary(&[("1", int(1))]).pullback(&t).is_zero());
        let f = Functional::new(TreeKind::Binary, BTreeMap::new(), vec![BranchPart::constant(zero_branch(), ratio(1, 3))])
            .unwrap();
        assert_eq!(f.pullback(&t), f);
    }

    #[test]
    fn pullback_shifts_overrides() {
        let mut overrides = BTreeMap::new();
        overrides.insert(0, int(5));
        overrides.insert(3, int(7));
        let f = Functional::new(
            TreeKind::Binary,
            BTreeMap::new(),
            vec![BranchPart { branch: zero_branch(), overrides, tail: int(1) }],
        )
        .unwrap();
        let t = NodeId::bits("00");
        let g = f.pullback(&t);
        for s in ["eps", "0", "00", "000", "1"] {
            let s = NodeId::parse(s, TreeKind::Binary).unwrap();
            assert_eq!(g.coefficient(&s), f.coefficient(&t.concat(&s)));
        }
    }

    #[test]
    fn l_beta_examples() {
        let f = Functional::new(TreeKind::Binary, BTreeMap::new(), vec![BranchPart::constant(zero_branch(), ratio(1, 3))])
            .unwrap();
        assert_eq!(f.l_beta(&zero_branch()), ratio(1, 3));
        assert_eq!(f.l_beta(&Branch::new(vec![], vec![1]).unwrap()), int(0));
        assert_eq!(Functional::binary(&[("0", int(4))]).l_beta(&zero_branch()), int(0));
    }

    #[test]
    fn duplicate_branches_rejected_and_sums_merge() {
        let p = BranchPart::constant(zero_branch(), int(1));
        assert!(Functional::new(TreeKind::Binary, BTreeMap::new(), vec![p.clone(), p.clone()]).is_err());
        let f = Functional::new(TreeKind::Binary, BTreeMap::new(), vec![p]).unwrap();
        assert!(f.plus(&f.neg()).is_zero());
    }

    #[test]
    fn data_depth_covers_divergence() {
        let a = BranchPart::constant(Branch::new(vec![0, 1, 1], vec![0]).unwrap(), int(1));
        let b = BranchPart::constant(Branch::new(vec![0, 1, 0], vec![1]).unwrap(), int(1));
        let f = Functional::new(TreeKind::Binary, BTreeMap::new(), vec![a, b]).unwrap();
        assert_eq!(f.data_depth(), 2);
        assert_eq!(f.coefficient(&NodeId::bits("01")), int(2));
        assert_eq!(f.coefficient(&NodeId::bits("011")), int(1));
    }
}
