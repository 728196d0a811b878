//! Defiance of relatively weakly open subsets of `Σ`: one element per
//! neighbourhood with signs making every signed sum of norm exactly `n`.

use num_traits::{One, Zero};

use super::transcript::DefianceTranscript;
use crate::dual::{nbhd_membership, set_membership, SetId, WeakNbhdSpec};
use crate::error::{ensure, precondition, Result};
use crate::functional::Functional;
use crate::rational::{int, sign, Rational};
use crate::tree::{least_descendant_where, Chain, NodeId, TreeKind};

/// Keeps a chain `A` on which every chosen `θ_i x_i` has exactly one
/// coordinate, equal to `+1`.
///
/// If the center has a unit coordinate comparable with all of `A`, the center
/// itself is chosen and `θ` aligns it. Otherwise the center vanishes on and
/// below `max A`, and a unit coordinate is added at the least node past
/// `max A` where every constraint functional and the center vanish.
pub fn sigma_pibase_defiance(nbhds: &[WeakNbhdSpec]) -> Result<DefianceTranscript> {
    let one = Rational::one();
    let mut chain: Vec<NodeId> = Vec::new();
    let mut elements = Vec::with_capacity(nbhds.len());
    let mut signs = Vec::with_capacity(nbhds.len());
    for w in nbhds {
        if w.set != SetId::Sigma || w.center.kind() != TreeKind::Binary {
            return precondition("expected a neighbourhood of SIGMA on the binary tree");
        }
        if !set_membership(SetId::Sigma, &w.center)? {
            return precondition("center is not in SIGMA");
        }
        let compatible = w.center.entries().iter().find(|(t, q)| q.abs_one() && chain.iter().all(|a| a.comparable(t)));
        let (x, at) = match compatible {
            Some((t, _)) => (w.center.clone(), t.clone()),
            None => {
                let base = chain.last().cloned().unwrap_or_else(NodeId::root);
                let fs: Vec<&Functional> = w.constraints.iter().map(|(f, _)| f).collect();
                let depth = fs
                    .iter()
                    .map(|f| f.data_depth())
                    .chain(w.center.max_depth())
                    .fold(base.depth(), usize::max);
                let branches: usize = fs.iter().map(|f| f.branch_parts().len()).sum();
                let s = least_descendant_where(&base, TreeKind::Binary, 1, depth + 2 + branches, |s| {
                    fs.iter().all(|f| f.coefficient(s).is_zero()) && w.center.get(s).is_zero()
                })
                .expect("off-branch nodes past the data depth carry no coefficient");
                let mut x = w.center.clone();
                x.add_at(s.clone(), &one);
                (x, s)
            }
        };
        signs.push(sign(&x.get(&at)));
        if !chain.contains(&at) {
            chain.push(at);
            chain.sort_by_key(NodeId::depth);
        }
        elements.push(x);
    }
    let chain = Chain::new(chain)?;
    let separator = Functional::chain_functional(TreeKind::Binary, &chain, |_| 1);
    let t = DefianceTranscript { elements, signs, chain, separator, gap: int(1) };

    for (i, (x, w)) in t.elements.iter().zip(nbhds).enumerate() {
        ensure(nbhd_membership(x, w)?, || format!("element {i} left its neighbourhood"))?;
    }
    // same-sign discipline: every nonzero θ_i x_i(t) on the chain is +1
    for (x, &s) in t.elements.iter().zip(&t.signs) {
        for a in t.chain.nodes() {
            let v = x.get(a);
            ensure(v.is_zero() || sign(&v) == s, || format!("mixed signs at {a}"))?;
        }
    }
    t.verify_sums()?;
    Ok(t)
}

trait AbsOne {
    fn abs_one(&self) -> bool;
}

impl AbsOne for Rational {
    fn abs_one(&self) -> bool {
        self == &Rational::one() || self == &-Rational::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector::FinVector;
    use crate::rational::ratio;

    fn nbhd(center: FinVector) -> WeakNbhdSpec {
        WeakNbhdSpec::new(SetId::Sigma, center, vec![(Functional::binary(&[("eps", int(1))]), ratio(1, 2))]).unwrap()
    }

    #[test]
    fn examples() {
        let zero = FinVector::zero(TreeKind::Binary);
        let t = sigma_pibase_defiance(&[nbhd(zero.clone())]).unwrap();
        assert_eq!(t.elements, vec![FinVector::binary(&[("0", int(1))])]);
        assert_eq!(t.signs, vec![1]);

        let t = sigma_pibase_defiance(&[nbhd(zero.clone()), nbhd(zero)]).unwrap();
        assert_eq!(t.chain, Chain::new([NodeId::bits("0"), NodeId::bits("00")]).unwrap());

        let e0 = FinVector::binary(&[("0", int(-1))]);
        let t = sigma_pibase_defiance(&[nbhd(e0.clone()), nbhd(e0)]).unwrap();
        assert_eq!(t.signs, vec![-1, -1]);
        assert_eq!(t.chain, Chain::new([NodeId::bits("0")]).unwrap());
    }

    #[test]
    fn rejects_centers_outside_sigma() {
        let w = WeakNbhdSpec {
            set: SetId::Sigma,
            center: FinVector::binary(&[("0", ratio(1, 2))]),
            constraints: vec![],
        };
        assert!(sigma_pibase_defiance(&[w]).is_err());
    }
}
