//! Random instances for property checks and benchmarks. Generic over the RNG
//! so callers pick a seeded generator.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::dual::{SetId, SliceSpec, WeakNbhdSpec};
use crate::functional::{BranchPart, Functional};
use crate::norm::chain_norm_value;
use crate::rational::{int, Rational};
use crate::signs::SignProblem;
use crate::tree::{Antichain, Branch, NodeId, TreeKind};
use crate::vector::FinVector;

/// Nonzero `p/q` with `|p| ≤ 6`, `1 ≤ q ≤ 6`.
pub fn small_rational<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    let p = loop {
        let p: i64 = rng.gen_range(-6..=6);
        if p != 0 {
            break p;
        }
    };
    Rational::new(p.into(), rng.gen_range(1i64..=6).into())
}

/// A node of depth at most `max_depth`; countable indices stay below `width`.
pub fn node<R: Rng + ?Sized>(rng: &mut R, kind: TreeKind, max_depth: usize, width: u32) -> NodeId {
    let d = rng.gen_range(0..=max_depth);
    let top = match kind {
        TreeKind::Binary => 2,
        TreeKind::Countable => width.max(1),
    };
    NodeId::from_word((0..d).map(|_| rng.gen_range(0..top)).collect())
}

pub fn vector<R: Rng + ?Sized>(rng: &mut R, kind: TreeKind, max_depth: usize, max_support: usize) -> FinVector {
    let n = rng.gen_range(1..=max_support.max(1));
    let entries: Vec<(NodeId, Rational)> =
        (0..n).map(|_| (node(rng, kind, max_depth, 4), small_rational(rng))).collect();
    FinVector::from_entries(kind, entries).expect("generated nodes match the kind")
}

/// A random point of the unit sphere (nonzero vector scaled to norm 1).
pub fn sphere_point<R: Rng + ?Sized>(rng: &mut R, kind: TreeKind, max_depth: usize, max_support: usize) -> FinVector {
    loop {
        let x = vector(rng, kind, max_depth, max_support);
        if !x.is_zero() {
            let n = chain_norm_value(&x);
            return x.scaled(&(Rational::from_integer(1.into()) / n));
        }
    }
}

pub fn positive_sphere_point<R: Rng + ?Sized>(rng: &mut R, max_depth: usize, max_support: usize) -> FinVector {
    let x = sphere_point(rng, TreeKind::Binary, max_depth, max_support);
    let abs = x.with_signs(|t| if x.get(t) < int(0) { -1 } else { 1 });
    abs.scaled(&(Rational::from_integer(1.into()) / chain_norm_value(&abs)))
}

/// An antichain of the binary tree built from random nodes, dropping any node
/// comparable with an earlier one.
pub fn antichain<R: Rng + ?Sized>(rng: &mut R, max_depth: usize, tries: usize) -> Vec<NodeId> {
    let mut out: Vec<NodeId> = Vec::new();
    for _ in 0..tries {
        let t = node(rng, TreeKind::Binary, max_depth, 2);
        if out.iter().all(|s| !s.comparable(&t)) {
            out.push(t);
        }
    }
    out.sort();
    out
}

/// A point of `Σ`: signed indicator of a random antichain.
pub fn sigma_point<R: Rng + ?Sized>(rng: &mut R, max_depth: usize) -> FinVector {
    let tries = rng.gen_range(0..4);
    let a = antichain(rng, max_depth, tries);
    FinVector::from_entries(TreeKind::Binary, a.into_iter().map(|t| (t, int(if rng.gen() { 1 } else { -1 }))))
        .expect("binary nodes")
}

/// A nonzero point of `Ω⁺`: indicator of a random non-maximal antichain.
pub fn omega_plus_point<R: Rng + ?Sized>(rng: &mut R, max_depth: usize) -> FinVector {
    loop {
        let tries = rng.gen_range(1..5);
        let a = antichain(rng, max_depth.max(1), tries);
        if a.is_empty() || Antichain::new(a.iter().cloned()).expect("antichain").is_maximal(TreeKind::Binary) {
            continue;
        }
        return FinVector::from_entries(TreeKind::Binary, a.into_iter().map(|t| (t, int(1)))).expect("binary nodes");
    }
}

fn branch<R: Rng + ?Sized>(rng: &mut R, kind: TreeKind, max_len: usize) -> Branch {
    let top = if kind == TreeKind::Binary { 2 } else { 4 };
    let pl = rng.gen_range(0..=max_len);
    let ql = rng.gen_range(1..=max_len.max(1));
    let prefix = (0..pl).map(|_| rng.gen_range(0..top)).collect();
    let period = (0..ql).map(|_| rng.gen_range(0..top)).collect();
    Branch::new(prefix, period).expect("nonempty period")
}

/// A representable functional: up to `max_terms` finite coefficients and up to
/// `max_branches` branch parts, some with an override.
pub fn functional<R: Rng + ?Sized>(
    rng: &mut R,
    kind: TreeKind,
    max_depth: usize,
    max_terms: usize,
    max_branches: usize,
) -> Functional {
    let mut finite = BTreeMap::new();
    for _ in 0..rng.gen_range(0..=max_terms) {
        finite.insert(node(rng, kind, max_depth, 4), small_rational(rng));
    }
    let mut parts: Vec<BranchPart> = Vec::new();
    for _ in 0..rng.gen_range(0..=max_branches) {
        let b = branch(rng, kind, 2);
        if parts.iter().any(|p| p.branch == b) {
            continue;
        }
        let mut p = BranchPart::constant(b, small_rational(rng));
        if rng.gen_bool(0.3) {
            p.overrides.insert(rng.gen_range(0..=max_depth), small_rational(rng));
        }
        parts.push(p);
    }
    Functional::new(kind, finite, parts).expect("distinct branches")
}

/// A finitely supported functional on the binary tree.
pub fn finite_functional<R: Rng + ?Sized>(rng: &mut R, max_depth: usize, max_terms: usize) -> Functional {
    functional(rng, TreeKind::Binary, max_depth, max_terms, 0)
}

/// `δ = p/q ∈ (0, 1)`.
pub fn width<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    let q: i64 = rng.gen_range(2..=12);
    Rational::new(rng.gen_range(1..q).into(), q.into())
}

pub fn slice<R: Rng + ?Sized>(rng: &mut R, set: SetId, max_depth: usize, branches: usize) -> SliceSpec {
    let f = functional(rng, TreeKind::Binary, max_depth, 4, branches);
    SliceSpec::new(set, f, width(rng)).expect("positive width")
}

/// A neighbourhood of `Σ` around a random point with finitely supported constraints.
pub fn sigma_nbhd<R: Rng + ?Sized>(rng: &mut R, max_depth: usize) -> WeakNbhdSpec {
    let center = sigma_point(rng, max_depth);
    let constraints = (0..rng.gen_range(0..=3)).map(|_| (finite_functional(rng, max_depth, 4), width(rng))).collect();
    WeakNbhdSpec::new(SetId::Sigma, center, constraints).expect("center in SIGMA")
}

/// `k × n` entries in `[−1, 1]`, denominators up to 8.
pub fn sign_problem<R: Rng + ?Sized>(rng: &mut R, k: usize, n: usize) -> SignProblem {
    let rows = (0..k)
        .map(|_| (0..n).map(|_| Rational::new(rng.gen_range(-8i64..=8).into(), 8.into())).collect())
        .collect();
    SignProblem::new(rows).expect("entries in range")
}

/// Convex weights with small denominators.
pub fn convex_weights<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Rational> {
    let raw: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=5)).collect();
    let total: i64 = raw.iter().sum();
    if total == 0 {
        let mut w = vec![int(0); n];
        if let Some(i) = (0..n).collect::<Vec<_>>().choose(rng) {
            w[*i] = int(1);
        }
        return w;
    }
    raw.into_iter().map(|r| Rational::new(r.into(), total.into())).collect()
}

/// A comparable pair `m ≺ n` and `y` in the ball of `X_T` with
/// `|y(m) − ½| < ε` and `|y(n) + ½| < ε`.
pub fn super_adp_instance<R: Rng + ?Sized>(rng: &mut R, eps: &Rational) -> (NodeId, NodeId, FinVector) {
    let n = loop {
        let n = node(rng, TreeKind::Binary, 5, 2);
        if !n.is_root() {
            break n;
        }
    };
    let m = n.prefix(rng.gen_range(0..n.depth()));
    let quarter = eps / int(4);
    let a = Rational::new(1.into(), 2.into()) - &quarter;
    let z = sphere_point(rng, TreeKind::Binary, 5, 6).scaled(&quarter);
    let mut y = z;
    y.add_at(m.clone(), &a);
    y.add_at(n.clone(), &-a);
    (m, n, y)
}
