//! Two-point bound showing that weak neighbourhoods of `½(e_m + e_n)` in an
//! adequate-family space stay strictly inside the sphere of radius 2.

use num_traits::{One, Signed};

use crate::error::{ensure, precondition, Result};
use crate::norm::{norm, SpaceId};
use crate::rational::{int, ratio, Rational};
use crate::tree::NodeId;
use crate::vector::FinVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    BelowTwo,
    Inconclusive,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::BelowTwo => "< 2",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperAdpReport {
    /// `max_θ ‖x + θy‖` for `x = ½(e_m + e_n)`.
    pub value: Rational,
    /// `max(3/2 + 2ε, 1 + 4ε)`.
    pub bound: Rational,
    pub verdict: Verdict,
}

/// For `y` in the ball with `y(m) ≈ ½` and `y(n) ≈ −½` (within `ε`), one of the
/// two coordinates of `x ± y` is below `ε` in modulus, which caps every
/// admissible set's sum.
pub fn super_adp_bound(space: &SpaceId, m: &NodeId, n: &NodeId, y: &FinVector, eps: &Rational) -> Result<SuperAdpReport> {
    let half = ratio(1, 2);
    if m == n || !space.family_contains(&[m.clone(), n.clone()]) {
        return precondition("{m, n} must be a set of the family");
    }
    if !eps.is_positive() {
        return precondition("eps must be positive");
    }
    if (y.get(m) - &half).abs() >= *eps || (y.get(n) + &half).abs() >= *eps {
        return precondition("y must satisfy |y(m) − ½| < ε and |y(n) + ½| < ε");
    }
    if norm(space, y)?.0 > Rational::one() {
        return precondition("y must lie in the unit ball");
    }
    let mut x = FinVector::zero(space.kind());
    x.add_at(m.clone(), &half);
    x.add_at(n.clone(), &half);
    let value = norm(space, &(&x + y))?.0.max(norm(space, &(&x - y))?.0);
    let bound = (ratio(3, 2) + int(2) * eps).max(Rational::one() + int(4) * eps);
    ensure(value <= bound, || format!("max_θ ‖x + θy‖ = {value} exceeds {bound}"))?;
    let verdict = if *eps < ratio(1, 4) { Verdict::BelowTwo } else { Verdict::Inconclusive };
    if verdict == Verdict::BelowTwo {
        ensure(value < int(2), || "value reached 2".into())?;
    }
    Ok(SuperAdpReport { value, bound, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let (m, n) = (NodeId::root(), NodeId::bits("0"));
        let h = ratio(1, 2);
        let y = FinVector::binary(&[("eps", h.clone()), ("0", -h.clone())]);
        let r = super_adp_bound(&SpaceId::XT, &m, &n, &y, &ratio(1, 100)).unwrap();
        assert_eq!(r.value, int(1));
        assert_eq!(r.verdict, Verdict::BelowTwo);

        let y = FinVector::binary(&[("eps", ratio(51, 100)), ("0", ratio(-49, 100))]);
        let r = super_adp_bound(&SpaceId::XT, &m, &n, &y, &ratio(1, 50)).unwrap();
        assert!(r.value <= ratio(3, 2) + ratio(1, 25));

        let y = FinVector::binary(&[("eps", h.clone()), ("0", -h)]);
        assert_eq!(super_adp_bound(&SpaceId::XT, &m, &n, &y, &ratio(1, 4)).unwrap().verdict, Verdict::Inconclusive);
        assert!(super_adp_bound(&SpaceId::XT, &m, &NodeId::bits("1"), &y, &ratio(1, 4)).is_err());
    }
}
