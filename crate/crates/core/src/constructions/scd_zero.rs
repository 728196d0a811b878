//! Selections from the slices `S(D, θg_s, 1/k)` whose averages approach 0,
//! where `D = cconv(Ω⁺ ∪ Ω⁻)` and `g_s = 2^{-(n-1)} Σ_{t ∈ L_n ∖ {s}} e*_t`.
//!
//! Bound used: every `x ∈ S(D, g_s, 1/k)` is within `2^n/k` of
//! `ω_s + v_s`, where `ω_s` is the indicator of `L_n ∖ {s}` and `v_s ≥ 0` has
//! norm at most 1 and lives strictly below `s`. Terms of a `D`-combination
//! other than such points lose at least `2^{-(n-1)}` of `g_s`, so they weigh
//! less than `2^{n-1}/k` in total, and each moves the point by at most 2.
//! Averaging over `s`, the `v_s` have incomparable supports, so
//! `‖2^{-n} Σ_s x_s − x^{(n)}‖ ≤ 2^{-n} + 2^n/k` with
//! `x^{(n)} = (1 − 2^{-n}) Σ_{L_n} e_t`; by symmetry of `D` the same holds for
//! `−g_s` around `−x^{(n)}`, and the average of both sides has norm at most
//! `2^{-n} + 2^n/k ≤ 2^{-(n-2)} + c/k` with `c = 2^n`.

use num_traits::{One, Signed};

use crate::classify::classify_in;
use crate::dual::{sup_over, SetId};
use crate::error::{ensure, precondition, Result};
use crate::functional::Functional;
use crate::norm::chain_norm_value;
use crate::rational::{int, pow2, Rational};
use crate::tree::{BinaryTree, FiniteBranchingTree, NodeId, TreeKind};
use crate::vector::FinVector;

/// How a point of each slice is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Selector {
    /// The attaining point of the supremum: `±ω_s`, averages to exactly 0.
    Argmax,
    /// `ω_s + e_{s⌢0}` for `θ = 1` and `−ω_s` for `θ = −1`, both attaining.
    Saturating,
    /// `θ(1 − a)ω_s + a·e_s` with `a = 1/(4k)`, using the slack of the slice.
    Perturbed,
}

impl Selector {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "argmax" => Ok(Selector::Argmax),
            "saturating" => Ok(Selector::Saturating),
            "perturbed" => Ok(Selector::Perturbed),
            _ => Err(crate::Error::Malformed(format!("unknown selector {s:?}"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Selector::Argmax => "argmax",
            Selector::Saturating => "saturating",
            Selector::Perturbed => "perturbed",
        }
    }
}

/// `Σ λ_i σ_i w_i` with convex weights, signs and points `w_i ∈ Ω⁺`: a
/// membership certificate for `D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DCombination {
    pub terms: Vec<(Rational, i8, FinVector)>,
}

impl DCombination {
    pub fn point(&self) -> FinVector {
        self.terms.iter().fold(FinVector::zero(TreeKind::Binary), |acc, (l, s, w)| {
            let c = if *s < 0 { -l } else { l.clone() };
            &acc + &w.scaled(&c)
        })
    }

    pub fn verify(&self) -> Result<()> {
        let total: Rational = self.terms.iter().map(|(l, _, _)| l).sum();
        ensure(total == Rational::one(), || format!("weights sum to {total}"))?;
        for (i, (l, _, w)) in self.terms.iter().enumerate() {
            ensure(!l.is_negative(), || format!("weight {i} is negative"))?;
            ensure(classify_in(w, &BinaryTree).in_omega_plus, || format!("term {i} is not in Ω⁺"))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScdZeroReport {
    pub n: u32,
    pub k: u64,
    pub selector: Selector,
    /// `‖2^{-(n+1)} Σ_s (x_{s,1} + x_{s,−1})‖`.
    pub r: Rational,
    /// `2^{-(n-2)}`.
    pub envelope: Rational,
    /// `c = 2^n`.
    pub constant: Rational,
    /// `envelope + c/k`.
    pub bound: Rational,
    /// `r ≤ bound` is only asserted for `k ≥ 2`.
    pub bound_asserted: bool,
    pub selections: Vec<(NodeId, i8, DCombination)>,
}

fn omega(level: &[NodeId], s: &NodeId) -> FinVector {
    FinVector::from_entries(TreeKind::Binary, level.iter().filter(|t| *t != s).map(|t| (t.clone(), int(1))))
        .expect("binary nodes")
}

fn select(sel: Selector, level: &[NodeId], s: &NodeId, theta: i8, k: u64, g: &Functional) -> Result<DCombination> {
    let w = omega(level, s);
    Ok(DCombination {
        terms: match sel {
            Selector::Argmax => {
                let f = if theta < 0 { g.neg() } else { g.clone() };
                let (_, c) = sup_over(SetId::D, &f)?;
                if c.witness.is_nonnegative() {
                    vec![(int(1), 1, c.witness)]
                } else {
                    vec![(int(1), -1, -&c.witness)]
                }
            }
            Selector::Saturating if theta > 0 => vec![(int(1), 1, &w + &FinVector::unit(TreeKind::Binary, s.child(0)))],
            Selector::Saturating => vec![(int(1), -1, w)],
            Selector::Perturbed => {
                let a = Rational::new(1.into(), (4 * k).into());
                vec![(Rational::one() - &a, theta, w), (a, 1, FinVector::unit(TreeKind::Binary, s.clone()))]
            }
        },
    })
}

pub fn scd_zero_demo(n: u32, k: u64, selector: Selector) -> Result<ScdZeroReport> {
    if !(1..=12).contains(&n) || k == 0 {
        return precondition("need 1 ≤ n ≤ 12 and k ≥ 1");
    }
    let level = BinaryTree.level(n as usize);
    let width = Rational::one() / pow2(n - 1);
    let slack = Rational::new(1.into(), k.into());
    let mut sum = FinVector::zero(TreeKind::Binary);
    let mut selections = Vec::with_capacity(2 * level.len());
    for s in &level {
        let g = Functional::finite(TreeKind::Binary, level.iter().filter(|t| *t != s).map(|t| (t.clone(), width.clone())));
        for theta in [1i8, -1] {
            let f = if theta < 0 { g.neg() } else { g.clone() };
            let top = sup_over(SetId::D, &f)?.0;
            ensure(top == int(2) - &width, || format!("sup of θg_s over D is {top}"))?;
            let comb = select(selector, &level, s, theta, k, &g)?;
            comb.verify()?;
            let x = comb.point();
            let v = f.eval(&x);
            ensure(v > &top - &slack, || format!("selection for {s}, θ = {theta} misses the slice"))?;
            sum = &sum + &x;
            selections.push((s.clone(), theta, comb));
        }
    }
    let r = chain_norm_value(&sum.scaled(&(Rational::one() / pow2(n + 1))));
    let envelope = pow2(2) / pow2(n);
    let constant = pow2(n);
    let bound = &envelope + &constant * &slack;
    let bound_asserted = k >= 2;
    if bound_asserted {
        let tight = Rational::one() / pow2(n) + &constant * &slack;
        ensure(r <= tight && r <= bound, || format!("r = {r} exceeds {tight}"))?;
    }
    Ok(ScdZeroReport { n, k, selector, r, envelope, constant, bound, bound_asserted, selections })
}
