//! Dual norms and suprema over the named subsets of the ball, computed by
//! antichain dynamic programs over the data of a representable functional.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::classify::{classify_in, gauge_norm};
use crate::error::{precondition, Error, Result};
use crate::functional::Functional;
use crate::norm::chain_norm_value;
use crate::rational::{positive_part, sign, Rational};
use crate::tree::{Branch, BinaryTree, NodeId, TreeKind};
use crate::vector::FinVector;

/// The named subsets of `B_{X_T}` that slices and neighbourhoods live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SetId {
    BX,
    BPlus,
    Sigma,
    SigmaPlus,
    /// `cconv(B⁺ ∪ B⁻)`.
    C,
    /// `cconv(Ω⁺ ∪ Ω⁻)`.
    D,
}

impl SetId {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "BX" => SetId::BX,
            "BPLUS" => SetId::BPlus,
            "SIGMA" => SetId::Sigma,
            "SIGMA_PLUS" => SetId::SigmaPlus,
            "C" => SetId::C,
            "D" => SetId::D,
            _ => return Err(Error::Malformed(format!("unknown set {s:?}"))),
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            SetId::BX => "BX",
            SetId::BPlus => "BPLUS",
            SetId::Sigma => "SIGMA",
            SetId::SigmaPlus => "SIGMA_PLUS",
            SetId::C => "C",
            SetId::D => "D",
        }
    }
}

/// An attaining antichain and the `{−1,0,1}`-valued point it spans.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualCertificate {
    pub antichain: Vec<(NodeId, i8)>,
    pub witness: FinVector,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Score {
    /// `|f(e_t)|`, every node selectable: sup over `B_X`.
    Abs,
    /// `f(e_t)⁺`: sup over `B⁺`.
    Positive,
}

struct Dp<'a> {
    f: &'a Functional,
    depth: usize,
    score: Score,
}

impl Dp<'_> {
    fn new(f: &Functional, score: Score) -> Dp<'_> {
        Dp { f, depth: f.data_depth(), score }
    }

    fn score(&self, q: &Rational) -> Rational {
        match self.score {
            Score::Abs => q.abs(),
            Score::Positive => positive_part(q),
        }
    }

    fn children(&self, t: &NodeId) -> Vec<NodeId> {
        match self.f.kind() {
            TreeKind::Binary => vec![t.child(0), t.child(1)],
            TreeKind::Countable => self.f.data_children(t).into_iter().map(|i| t.child(i)).collect(),
        }
    }

    /// `V(t) = max(score(f(e_t)), Σ_children V)`, with the chosen antichain.
    fn solve(&self, t: &NodeId, pick: &mut Vec<NodeId>) -> Rational {
        if !self.f.has_data_below(t) {
            if self.score == Score::Abs {
                pick.push(t.clone());
            }
            return Rational::zero();
        }
        let here = self.score(&self.f.coefficient(t));
        if t.depth() > self.depth {
            if self.score == Score::Abs || here.is_positive() {
                pick.push(t.clone());
            }
            return here;
        }
        let mut below = Vec::new();
        let sum: Rational = self.children(t).iter().map(|c| self.solve(c, &mut below)).sum();
        if here >= sum && (self.score == Score::Abs || here.is_positive()) {
            pick.push(t.clone());
            here
        } else {
            pick.extend(below);
            sum
        }
    }

    /// Best value over antichains inside `T(t)` that leave some branch of
    /// `T(t)` unmet, returned as `(any, free)` with the free selection.
    fn solve_free(&self, t: &NodeId, any_pick: &mut Vec<NodeId>, free_pick: &mut Vec<NodeId>) -> (Rational, Rational) {
        if !self.f.has_data_below(t) {
            return (Rational::zero(), Rational::zero());
        }
        let here = positive_part(&self.f.coefficient(t));
        if t.depth() > self.depth {
            if here.is_positive() {
                any_pick.push(t.clone());
                let p = self.f.deep_branch(t).expect("data below a deep node is a branch");
                free_pick.push(t.child(p.branch.letter(t.depth())));
            }
            return (here.clone(), here);
        }
        let kids = self.children(t);
        let mut anys = Vec::with_capacity(kids.len());
        let mut frees = Vec::with_capacity(kids.len());
        for c in &kids {
            let (mut a, mut f) = (Vec::new(), Vec::new());
            let (va, vf) = self.solve_free(c, &mut a, &mut f);
            anys.push((va, a));
            frees.push((vf, f));
        }
        let sum_any: Rational = anys.iter().map(|(v, _)| v).sum();
        let (any_val, any_sel) = if here >= sum_any && here.is_positive() {
            (here, vec![t.clone()])
        } else {
            (sum_any.clone(), anys.iter().flat_map(|(_, s)| s.clone()).collect())
        };
        // countable trees always have an untouched child; binary trees must free one side
        let (free_val, free_sel) = if self.f.kind() == TreeKind::Countable {
            (sum_any, anys.iter().flat_map(|(_, s)| s.clone()).collect())
        } else {
            let mut best: Option<(Rational, Vec<NodeId>)> = None;
            for i in 0..kids.len() {
                let v = &sum_any - &anys[i].0 + &frees[i].0;
                if best.as_ref().is_none_or(|(b, _)| v > *b) {
                    let sel = (0..kids.len())
                        .flat_map(|j| if j == i { frees[j].1.clone() } else { anys[j].1.clone() })
                        .collect();
                    best = Some((v, sel));
                }
            }
            best.expect("binary nodes have children")
        };
        any_pick.extend(any_sel);
        free_pick.extend(free_sel);
        (any_val, free_val)
    }
}

fn witness_from(f: &Functional, picked: &[NodeId], score: Score) -> DualCertificate {
    let antichain: Vec<(NodeId, i8)> = picked
        .iter()
        .map(|t| {
            let s = match score {
                Score::Abs => sign(&f.coefficient(t)),
                Score::Positive => 1,
            };
            (t.clone(), s)
        })
        .collect();
    let witness = FinVector::from_entries(
        f.kind(),
        antichain.iter().map(|(t, s)| (t.clone(), Rational::from_integer(i64::from(*s).into()))),
    )
    .expect("nodes come from the functional's tree");
    DualCertificate { antichain, witness }
}

/// `‖f‖ = max over finite maximal antichains α of Σ_{s∈α} |f(e_s)|`.
///
/// On the binary tree the returned antichain is maximal, so the witness is a
/// strongly exposed point of the ball attaining the norm.
pub fn dual_norm(f: &Functional) -> (Rational, DualCertificate) {
    let dp = Dp::new(f, Score::Abs);
    let mut pick = Vec::new();
    let v = dp.solve(&NodeId::root(), &mut pick);
    pick.sort();
    (v, witness_from(f, &pick, Score::Abs))
}

/// `‖P*_{T(t)} f‖`.
pub fn subtree_mass(f: &Functional, t: &NodeId) -> Rational {
    Dp::new(f, Score::Abs).solve(t, &mut Vec::new())
}

fn sup_bplus(f: &Functional) -> (Rational, DualCertificate) {
    let dp = Dp::new(f, Score::Positive);
    let mut pick = Vec::new();
    let v = dp.solve(&NodeId::root(), &mut pick);
    pick.sort();
    (v, witness_from(f, &pick, Score::Positive))
}

fn sup_omega_plus(f: &Functional) -> (Rational, DualCertificate) {
    let dp = Dp::new(f, Score::Positive);
    let (mut any, mut free) = (Vec::new(), Vec::new());
    let (_, v) = dp.solve_free(&NodeId::root(), &mut any, &mut free);
    free.sort();
    (v, witness_from(f, &free, Score::Positive))
}

fn negate(c: DualCertificate) -> DualCertificate {
    DualCertificate {
        antichain: c.antichain.into_iter().map(|(t, s)| (t, -s)).collect(),
        witness: -&c.witness,
    }
}

/// `sup f(set)` with an attaining `{−1,0,1}`-valued member of the set.
///
/// Every supremum of a representable functional over these sets is attained:
/// below the data depth a branch node carries the tail coefficient itself.
pub fn sup_over(set: SetId, f: &Functional) -> Result<(Rational, DualCertificate)> {
    if f.kind() != TreeKind::Binary && !matches!(set, SetId::BX | SetId::BPlus) {
        return Err(Error::Unsupported(format!("{} is only defined on the binary tree", set.name())));
    }
    Ok(match set {
        SetId::BX | SetId::Sigma => dual_norm(f),
        SetId::BPlus | SetId::SigmaPlus => sup_bplus(f),
        SetId::C => {
            let (p, pc) = sup_bplus(f);
            let (m, mc) = sup_bplus(&f.neg());
            if p >= m {
                (p, pc)
            } else {
                (m, negate(mc))
            }
        }
        SetId::D => {
            let (p, pc) = sup_omega_plus(f);
            let (m, mc) = sup_omega_plus(&f.neg());
            if p >= m {
                (p, pc)
            } else {
                (m, negate(mc))
            }
        }
    })
}

/// Branches carrying tails `≥ threshold` and the least level `N` beyond
/// which every other node has all coefficients below `threshold`.
pub fn small_tail_level(fs: &[Functional], threshold: &Rational) -> Result<(Vec<Branch>, usize)> {
    if !threshold.is_positive() {
        return precondition("threshold must be positive");
    }
    let mut big: Vec<Branch> = Vec::new();
    for f in fs {
        for p in f.branch_parts() {
            if p.tail.abs() >= *threshold && !big.contains(&p.branch) {
                big.push(p.branch.clone());
            }
        }
    }
    big.sort();
    let mut candidates: BTreeSet<NodeId> = BTreeSet::new();
    for f in fs {
        let d = f.data_depth();
        candidates.extend(f.finite_part().keys().cloned());
        for p in f.branch_parts() {
            candidates.extend((0..=d).map(|n| p.branch.node_at(n)));
        }
    }
    let level = candidates
        .iter()
        .filter(|t| !big.iter().any(|b| b.contains(t)))
        .filter(|t| fs.iter().any(|f| f.coefficient(t).abs() >= *threshold))
        .map(NodeId::depth)
        .max()
        .unwrap_or(0);
    Ok((big, level))
}

/// `S(set, f, δ) = {x ∈ set : f(x) > sup f(set) − δ}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceSpec {
    pub set: SetId,
    pub f: Functional,
    pub delta: Rational,
}

impl SliceSpec {
    pub fn new(set: SetId, f: Functional, delta: Rational) -> Result<Self> {
        if !delta.is_positive() {
            return precondition("slice width must be positive");
        }
        Ok(SliceSpec { set, f, delta })
    }

    /// `sup f(set) − δ`, the strict lower bound for members.
    pub fn threshold(&self) -> Result<Rational> {
        Ok(sup_over(self.set, &self.f)?.0 - &self.delta)
    }
}

/// `{y ∈ set : |f_j(y − center)| < ε_j for all j}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeakNbhdSpec {
    pub set: SetId,
    pub center: FinVector,
    pub constraints: Vec<(Functional, Rational)>,
}

impl WeakNbhdSpec {
    pub fn new(set: SetId, center: FinVector, constraints: Vec<(Functional, Rational)>) -> Result<Self> {
        if constraints.iter().any(|(_, e)| !e.is_positive()) {
            return precondition("neighbourhood radii must be positive");
        }
        if !set_membership(set, &center)? {
            return precondition(format!("center is not in {}", set.name()));
        }
        Ok(WeakNbhdSpec { set, center, constraints })
    }
}

/// Exact membership of a finitely supported point in a named set.
///
/// Membership in `D` is decided for `0`, points of `Ω⁺ ∪ Ω⁻`, and points
/// outside `C`; other points are reported as unsupported.
pub fn set_membership(set: SetId, x: &FinVector) -> Result<bool> {
    let one = Rational::one();
    let in_ball = || chain_norm_value(x) <= one;
    let unit_valued = || x.entries().values().all(|q| q.abs() == one);
    match set {
        SetId::BX => Ok(in_ball()),
        SetId::BPlus => Ok(x.is_nonnegative() && in_ball()),
        SetId::Sigma => Ok(unit_valued() && in_ball()),
        SetId::SigmaPlus => Ok(x.is_nonnegative() && unit_valued() && in_ball()),
        SetId::C | SetId::D if x.kind() != TreeKind::Binary => {
            Err(Error::Unsupported(format!("{} is only defined on the binary tree", set.name())))
        }
        SetId::C => Ok(gauge_norm(x) <= one),
        SetId::D => {
            if x.is_zero() || is_omega_plus(x) || is_omega_plus(&-x) {
                Ok(true)
            } else if gauge_norm(x) > one {
                Ok(false)
            } else {
                Err(Error::Unsupported("membership in D is only decided for Ω± points".into()))
            }
        }
    }
}

pub(crate) fn is_omega_plus(x: &FinVector) -> bool {
    classify_in(x, &BinaryTree).in_omega_plus
}

pub fn slice_membership(x: &FinVector, s: &SliceSpec) -> Result<bool> {
    Ok(set_membership(s.set, x)? && s.f.eval(x) > s.threshold()?)
}

pub fn nbhd_membership(x: &FinVector, w: &WeakNbhdSpec) -> Result<bool> {
    let d = x - &w.center;
    Ok(set_membership(w.set, x)? && w.constraints.iter().all(|(f, e)| f.eval(&d).abs() < *e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functional::BranchPart;
    use crate::rational::{int, ratio};
    use std::collections::BTreeMap;

    fn b(s: &str) -> NodeId {
        NodeId::parse(s, TreeKind::Binary).unwrap()
    }

    fn tail_on(prefix: Vec<u32>, period: Vec<u32>, tail: Rational) -> Functional {
        let p = BranchPart::constant(Branch::new(prefix, period).unwrap(), tail);
        Functional::new(TreeKind::Binary, BTreeMap::new(), vec![p]).unwrap()
    }

    #[test]
    fn dual_norm_examples() {
        let (v, c) = dual_norm(&Functional::binary(&[("0", int(1)), ("1", int(1))]));
        assert_eq!(v, int(2));
        assert_eq!(c.antichain, vec![(b("0"), 1), (b("1"), 1)]);
        assert_eq!(dual_norm(&Functional::binary(&[("eps", int(1)), ("0", int(1))])).0, int(1));
        assert_eq!(dual_norm(&Functional::zero(TreeKind::Binary)).0, int(0));
    }

    #[test]
    fn dual_norm_certificate_is_maximal() {
        let f = Functional::binary(&[("0", int(-1))]);
        let (v, c) = dual_norm(&f);
        assert_eq!(v, int(1));
        assert_eq!(c.witness, FinVector::binary(&[("0", int(-1)), ("1", int(1))]));
        assert!(classify_in(&c.witness, &BinaryTree).extreme);
    }

    #[test]
    fn sup_over_examples() {
        let f = Functional::binary(&[("eps", int(1)), ("0", int(-1))]);
        let (v, c) = sup_over(SetId::BPlus, &f).unwrap();
        assert_eq!((v, c.witness), (int(1), FinVector::binary(&[("eps", int(1))])));

        let (v, c) = sup_over(SetId::C, &Functional::binary(&[("eps", int(-1))])).unwrap();
        assert_eq!((v, c.witness), (int(1), FinVector::binary(&[("eps", int(-1))])));

        let (v, c) = sup_over(SetId::D, &Functional::binary(&[("0", int(1))])).unwrap();
        assert_eq!((v, c.witness), (int(1), FinVector::binary(&[("0", int(1))])));
    }

    #[test]
    fn sup_over_d_avoids_maximal_antichains() {
        // {0,1} is maximal, so D only reaches one of the two coordinates
        let f = Functional::binary(&[("0", int(1)), ("1", int(1))]);
        let (v, c) = sup_over(SetId::D, &f).unwrap();
        assert_eq!(v, int(1));
        assert!(is_omega_plus(&c.witness));
        assert_eq!(sup_over(SetId::C, &f).unwrap().0, int(2));
        // e*_eps: only e_eps reaches the root, and it is maximal
        assert_eq!(sup_over(SetId::D, &Functional::binary(&[("eps", int(1))])).unwrap().0, int(0));
    }

    #[test]
    fn branch_tails_are_attained() {
        let f = tail_on(vec![], vec![0], int(1));
        let (v, c) = dual_norm(&f);
        assert_eq!(v, int(1));
        assert_eq!(f.eval(&c.witness), int(1));
        let (v, c) = sup_over(SetId::D, &f).unwrap();
        assert_eq!(v, int(1));
        assert!(is_omega_plus(&c.witness));
    }

    #[test]
    fn l_beta_sum_bounded_by_dual_norm() {
        let half = ratio(1, 2);
        let f = tail_on(vec![], vec![0], half.clone()).plus(&tail_on(vec![], vec![1], half));
        let total = f.l_beta(&Branch::new(vec![], vec![0]).unwrap()) + f.l_beta(&Branch::new(vec![], vec![1]).unwrap());
        assert_eq!(total, int(1));
        assert!(total <= dual_norm(&f).0);
    }

    #[test]
    fn small_tail_level_examples() {
        let h = ratio(1, 2);
        assert_eq!(small_tail_level(&[Functional::binary(&[("eps", int(1))])], &h).unwrap(), (vec![], 0));
        let f = tail_on(vec![], vec![0], int(1));
        assert_eq!(small_tail_level(&[f], &h).unwrap(), (vec![Branch::new(vec![], vec![0]).unwrap()], 0));
        let q = ratio(1, 4);
        let g = Functional::binary(&[("0", q.clone()), ("1", q)]);
        assert_eq!(small_tail_level(&[g], &h).unwrap(), (vec![], 0));
        let deep = Functional::binary(&[("0110", int(1))]);
        assert_eq!(small_tail_level(&[deep], &h).unwrap().1, 4);
    }

    #[test]
    fn subtree_mass_examples() {
        let f = Functional::binary(&[("0", int(1)), ("1", int(1))]);
        assert_eq!(subtree_mass(&f, &b("0")), int(1));
        assert_eq!(subtree_mass(&Functional::binary(&[("eps", int(1))]), &b("0")), int(0));
        assert_eq!(subtree_mass(&tail_on(vec![], vec![0], ratio(1, 3)), &b("00")), ratio(1, 3));
    }

    #[test]
    fn membership_examples() {
        let s = SliceSpec::new(SetId::BPlus, Functional::binary(&[("0", int(1))]), ratio(1, 2)).unwrap();
        assert!(slice_membership(&FinVector::binary(&[("0", int(1))]), &s).unwrap());
        assert!(!slice_membership(&FinVector::zero(TreeKind::Binary), &s).unwrap());
        let w = WeakNbhdSpec::new(
            SetId::Sigma,
            FinVector::zero(TreeKind::Binary),
            vec![(Functional::binary(&[("eps", int(1))]), ratio(1, 2))],
        )
        .unwrap();
        assert!(nbhd_membership(&FinVector::zero(TreeKind::Binary), &w).unwrap());
        assert!(SliceSpec::new(SetId::BX, Functional::zero(TreeKind::Binary), int(0)).is_err());
    }

    #[test]
    fn d_membership_is_partial() {
        assert!(set_membership(SetId::D, &FinVector::binary(&[("0", int(-1))])).unwrap());
        assert!(!set_membership(SetId::D, &FinVector::binary(&[("0", int(2))])).unwrap());
        assert!(set_membership(SetId::D, &FinVector::binary(&[("0", ratio(1, 2))])).is_err());
    }
}
