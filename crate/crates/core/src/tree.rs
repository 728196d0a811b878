//! Tree coordinates: nodes as finite words, the prefix order, chains,
//! antichains and eventually periodic branches.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TreeKind {
    /// Infinite binary tree, child indices in {0, 1}.
    Binary,
    /// Countably branching tree, child indices in ℕ.
    Countable,
}

/// A node of the tree, stored as the word of child indices from the root.
///
/// Ordered shortlex (depth first, then lexicographically), which is the
/// tie-breaking order used by every deterministic choice in the crate.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct NodeId(Vec<u32>);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Less,
    Equal,
    Greater,
    Incomparable,
}

impl Ord for NodeId {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for NodeId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl NodeId {
    pub fn root() -> Self {
        NodeId(Vec::new())
    }

    pub fn from_word(word: Vec<u32>) -> Self {
        NodeId(word)
    }

    /// Convenience for binary nodes written as bit strings, e.g. `bits("010")`.
    /// `"eps"` is the root. Panics on characters other than `0`/`1`.
    pub fn bits(s: &str) -> Self {
        if s == "eps" {
            return NodeId::root();
        }
        NodeId(
            s.chars()
                .map(|c| match c {
                    '0' => 0,
                    '1' => 1,
                    _ => panic!("not a bit string: {s}"),
                })
                .collect(),
        )
    }

    pub fn word(&self) -> &[u32] {
        &self.0
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, i: u32) -> Self {
        let mut w = self.0.clone();
        w.push(i);
        NodeId(w)
    }

    pub fn parent(&self) -> Option<Self> {
        if self.0.is_empty() {
            None
        } else {
            Some(NodeId(self.0[..self.0.len() - 1].to_vec()))
        }
    }

    /// `t_{|k}`.
    pub fn prefix(&self, k: usize) -> Self {
        NodeId(self.0[..k.min(self.0.len())].to_vec())
    }

    /// `self ⪯ other`.
    pub fn is_prefix_of(&self, other: &NodeId) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn comparable(&self, other: &NodeId) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }

    pub fn compare(&self, other: &NodeId) -> Relation {
        if self == other {
            Relation::Equal
        } else if self.is_prefix_of(other) {
            Relation::Less
        } else if other.is_prefix_of(self) {
            Relation::Greater
        } else {
            Relation::Incomparable
        }
    }

    /// `self ⌢ tail`.
    pub fn concat(&self, tail: &NodeId) -> Self {
        let mut w = self.0.clone();
        w.extend_from_slice(&tail.0);
        NodeId(w)
    }

    /// Inverse of [`concat`](Self::concat): `Some(s)` with `prefix ⌢ s = self`.
    pub fn strip_prefix(&self, prefix: &NodeId) -> Option<NodeId> {
        self.0.strip_prefix(prefix.0.as_slice()).map(|w| NodeId(w.to_vec()))
    }

    /// Strict ancestors, root first.
    pub fn ancestors(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.0.len()).map(move |k| self.prefix(k))
    }

    /// Ancestors followed by the node itself.
    pub fn path(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..=self.0.len()).map(move |k| self.prefix(k))
    }

    pub fn is_valid_for(&self, kind: TreeKind) -> bool {
        kind == TreeKind::Countable || self.0.iter().all(|&i| i <= 1)
    }

    pub fn parse(s: &str, kind: TreeKind) -> Result<Self> {
        let s = s.trim();
        if s == "eps" || s.is_empty() {
            return Ok(NodeId::root());
        }
        let bad = || Error::Malformed(format!("bad node {s:?} for {kind:?} tree"));
        let word = match kind {
            TreeKind::Binary => s
                .chars()
                .map(|c| match c {
                    '0' => Ok(0),
                    '1' => Ok(1),
                    _ => Err(bad()),
                })
                .collect::<Result<Vec<u32>>>()?,
            TreeKind::Countable => s
                .split('.')
                .map(|p| p.parse::<u32>().map_err(|_| bad()))
                .collect::<Result<Vec<u32>>>()?,
        };
        Ok(NodeId(word))
    }

    pub fn display(&self, kind: TreeKind) -> String {
        if self.0.is_empty() {
            return "eps".to_string();
        }
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        match kind {
            TreeKind::Binary => parts.concat(),
            TreeKind::Countable => parts.join("."),
        }
    }
}

impl fmt::Display for NodeId {
    /// Binary-style rendering when every index is a bit, dotted otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = if self.is_valid_for(TreeKind::Binary) {
            TreeKind::Binary
        } else {
            TreeKind::Countable
        };
        f.write_str(&self.display(kind))
    }
}

/// Deepest common ancestor-or-self.
pub fn meet(a: &NodeId, b: &NodeId) -> NodeId {
    let k = a.0.iter().zip(&b.0).take_while(|(x, y)| x == y).count();
    a.prefix(k)
}

/// A finite set of pairwise comparable nodes.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Chain(BTreeSet<NodeId>);

impl Chain {
    pub fn new(nodes: impl IntoIterator<Item = NodeId>) -> Result<Self> {
        let nodes: BTreeSet<NodeId> = nodes.into_iter().collect();
        // shortlex order sorts by depth, so consecutive comparability suffices
        let v: Vec<&NodeId> = nodes.iter().collect();
        for w in v.windows(2) {
            if !w[0].is_prefix_of(w[1]) {
                return Err(Error::Malformed(format!("{} and {} are incomparable", w[0], w[1])));
            }
        }
        Ok(Chain(nodes))
    }

    /// The full root path ending at `t`.
    pub fn path_to(t: &NodeId) -> Self {
        Chain(t.path().collect())
    }

    pub fn nodes(&self) -> &BTreeSet<NodeId> {
        &self.0
    }

    pub fn max(&self) -> Option<&NodeId> {
        self.0.iter().next_back()
    }

    pub fn contains(&self, t: &NodeId) -> bool {
        self.0.contains(t)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A finite set of pairwise incomparable nodes.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Antichain(BTreeSet<NodeId>);

impl Antichain {
    pub fn new(nodes: impl IntoIterator<Item = NodeId>) -> Result<Self> {
        let nodes: BTreeSet<NodeId> = nodes.into_iter().collect();
        for a in &nodes {
            for b in nodes.range(a..).skip(1) {
                if a.comparable(b) {
                    return Err(Error::Malformed(format!("{a} and {b} are comparable")));
                }
            }
        }
        Ok(Antichain(nodes))
    }

    pub fn nodes(&self) -> &BTreeSet<NodeId> {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_maximal(&self, kind: TreeKind) -> bool {
        match kind {
            TreeKind::Binary => self.is_maximal_in(&BinaryTree),
            TreeKind::Countable => self.0.len() == 1 && self.0.contains(&NodeId::root()),
        }
    }

    /// Every branch of `tree` meets the antichain (depth-D cover test).
    pub fn is_maximal_in(&self, tree: &dyn FiniteBranchingTree) -> bool {
        fn covered(t: &NodeId, set: &BTreeSet<NodeId>, tree: &dyn FiniteBranchingTree) -> bool {
            if set.contains(t) {
                return true;
            }
            if !set.iter().any(|s| t.is_prefix_of(s)) {
                return false;
            }
            tree.children(t).iter().all(|c| covered(c, set, tree))
        }
        !self.0.is_empty() && covered(&NodeId::root(), &self.0, tree)
    }
}

/// Antichain-validating wrapper around [`Antichain::is_maximal`].
pub fn is_maximal_antichain(nodes: &[NodeId], kind: TreeKind) -> Result<bool> {
    Ok(Antichain::new(nodes.iter().cloned())?.is_maximal(kind))
}

/// Which constraint a freshly chosen node must satisfy against `avoiding`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Freshness {
    /// `s ∉ avoiding`.
    Outside,
    /// No ancestor-or-self of `s` lies in `avoiding`.
    AncestorFree,
    /// `s` is incomparable to every element of `avoiding`.
    Incomparable,
}

/// Shortlex-least strict descendant of `extending` satisfying `mode`.
pub fn fresh_node(
    extending: &NodeId,
    avoiding: &BTreeSet<NodeId>,
    kind: TreeKind,
    mode: Freshness,
) -> Result<NodeId> {
    let ok = |s: &NodeId| match mode {
        Freshness::Outside => !avoiding.contains(s),
        Freshness::AncestorFree => s.path().all(|a| !avoiding.contains(&a)),
        Freshness::Incomparable => avoiding.iter().all(|a| !a.comparable(s)),
    };
    let max_depth = avoiding.iter().map(NodeId::depth).max().unwrap_or(0);
    let limit = max_depth.max(extending.depth()) + 1;
    let bound = index_bound(avoiding.iter(), kind);
    least_descendant_where(extending, kind, bound, limit, ok)
        .ok_or_else(|| Error::Precondition(format!("no admissible node below {extending}")))
}

/// Largest child index worth trying in a breadth-first search that must
/// escape the given nodes: one past anything they use.
pub(crate) fn index_bound<'a>(nodes: impl Iterator<Item = &'a NodeId>, kind: TreeKind) -> u32 {
    match kind {
        TreeKind::Binary => 1,
        TreeKind::Countable => nodes.flat_map(|n| n.word().iter().copied()).max().map_or(0, |m| m + 1),
    }
}

/// Breadth-first (shortlex) search over strict descendants of `from` down to
/// `max_depth`, children restricted to indices `0..=index_bound`.
pub(crate) fn least_descendant_where(
    from: &NodeId,
    kind: TreeKind,
    index_bound: u32,
    max_depth: usize,
    mut pred: impl FnMut(&NodeId) -> bool,
) -> Option<NodeId> {
    let top = match kind {
        TreeKind::Binary => 1,
        TreeKind::Countable => index_bound,
    };
    let mut level = vec![from.clone()];
    while level.first().is_some_and(|t| t.depth() < max_depth) {
        let mut next = Vec::with_capacity(level.len() * (top as usize + 1));
        for t in &level {
            for i in 0..=top {
                let c = t.child(i);
                if pred(&c) {
                    return Some(c);
                }
                next.push(c);
            }
        }
        level = next;
    }
    None
}

/// An infinite eventually periodic branch `prefix · period · period · …`,
/// kept in canonical form so that structural equality is equality of
/// the infinite words.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Branch {
    prefix: Vec<u32>,
    period: Vec<u32>,
}

impl Branch {
    pub fn new(prefix: Vec<u32>, period: Vec<u32>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::Malformed("branch period must be nonempty".into()));
        }
        let mut b = Branch { prefix, period };
        b.canonicalize();
        Ok(b)
    }

    /// `node · then^∞`.
    pub fn through(node: &NodeId, then: u32) -> Self {
        Branch::new(node.word().to_vec(), vec![then]).expect("nonempty period")
    }

    fn canonicalize(&mut self) {
        let n = self.period.len();
        if let Some(p) = (1..=n).find(|&p| n.is_multiple_of(p) && (p..n).all(|i| self.period[i] == self.period[i - p])) {
            self.period.truncate(p);
        }
        while let Some(&last) = self.prefix.last() {
            if last != *self.period.last().expect("nonempty") {
                break;
            }
            self.prefix.pop();
            self.period.rotate_right(1);
        }
    }

    pub fn prefix(&self) -> &[u32] {
        &self.prefix
    }

    pub fn period(&self) -> &[u32] {
        &self.period
    }

    /// The `i`-th letter (0-based).
    pub fn letter(&self, i: usize) -> u32 {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.period[(i - self.prefix.len()) % self.period.len()]
        }
    }

    /// `β(n)`: the node of depth `n` on the branch.
    pub fn node_at(&self, n: usize) -> NodeId {
        NodeId((0..n).map(|i| self.letter(i)).collect())
    }

    pub fn contains(&self, t: &NodeId) -> bool {
        t.word().iter().enumerate().all(|(i, &c)| self.letter(i) == c)
    }

    /// Depth after which the branch is purely periodic.
    pub fn preperiod(&self) -> usize {
        self.prefix.len()
    }

    /// Depth of the last common node with `other` (`None` if equal).
    pub fn divergence(&self, other: &Branch) -> Option<usize> {
        let horizon = self.prefix.len().max(other.prefix.len())
            + num_integer::lcm(self.period.len(), other.period.len());
        (0..horizon).find(|&i| self.letter(i) != other.letter(i))
    }

    /// The branch seen from `t`: `Some(γ)` with `t ⌢ γ = self` when `t` lies on it.
    pub fn pullback(&self, t: &NodeId) -> Option<Branch> {
        if !self.contains(t) {
            return None;
        }
        let k = t.depth();
        let word: Vec<u32> = (k..k.max(self.prefix.len()) + self.period.len()).map(|i| self.letter(i)).collect();
        let split = word.len() - self.period.len();
        Branch::new(word[..split].to_vec(), word[split..].to_vec()).ok()
    }

    pub fn is_valid_for(&self, kind: TreeKind) -> bool {
        kind == TreeKind::Countable || self.prefix.iter().chain(&self.period).all(|&i| i <= 1)
    }
}

/// A rooted, finitely branching subtree of one of the ambient trees.
pub trait FiniteBranchingTree: Sync {
    /// The ambient tree this one sits in.
    fn kind(&self) -> TreeKind;

    fn contains(&self, t: &NodeId) -> bool;

    /// Immediate successors of `t` inside the tree; never empty.
    fn children(&self, t: &NodeId) -> Vec<NodeId>;

    /// `L_n` of the subtree.
    fn level(&self, n: usize) -> Vec<NodeId> {
        let mut level = vec![NodeId::root()];
        for _ in 0..n {
            level = level.iter().flat_map(|t| self.children(t)).collect();
        }
        level
    }
}

/// The full infinite binary tree.
#[derive(Clone, Copy, Debug, Default)]
pub struct BinaryTree;

impl FiniteBranchingTree for BinaryTree {
    fn kind(&self) -> TreeKind {
        TreeKind::Binary
    }

    fn contains(&self, t: &NodeId) -> bool {
        t.is_valid_for(TreeKind::Binary)
    }

    fn children(&self, t: &NodeId) -> Vec<NodeId> {
        vec![t.child(0), t.child(1)]
    }
}

/// `tree` re-rooted at `at`: node `s` stands for `at ⌢ s`.
pub struct Subtree<'a> {
    pub tree: &'a dyn FiniteBranchingTree,
    pub at: NodeId,
}

impl FiniteBranchingTree for Subtree<'_> {
    fn kind(&self) -> TreeKind {
        self.tree.kind()
    }

    fn contains(&self, t: &NodeId) -> bool {
        self.tree.contains(&self.at.concat(t))
    }

    fn children(&self, t: &NodeId) -> Vec<NodeId> {
        self.tree
            .children(&self.at.concat(t))
            .into_iter()
            .map(|c| c.strip_prefix(&self.at).expect("child extends parent"))
            .collect()
    }
}
