use num_traits::One;

use crate::dual::dual_norm;
use crate::error::{ensure, Result};
use crate::functional::Functional;
use crate::norm::chain_norm_value;
use crate::rational::{int, Rational};
use crate::tree::Chain;
use crate::vector::FinVector;

/// Elements chosen one per slice or neighbourhood, together with a chain
/// along which their signed sum is exactly their number and the chain
/// functional separating them from a target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefianceTranscript {
    pub elements: Vec<FinVector>,
    /// `θ_i`; all `+1` for positive defiance.
    pub signs: Vec<i8>,
    pub chain: Chain,
    pub separator: Functional,
    pub gap: Rational,
}

impl DefianceTranscript {
    pub fn signed_sum(&self) -> Option<FinVector> {
        let mut it = self.elements.iter().zip(&self.signs);
        let (x, &s) = it.next()?;
        let first = if s < 0 { -x } else { x.clone() };
        Some(it.fold(first, |acc, (x, &s)| if s < 0 { &acc - x } else { &acc + x }))
    }

    /// `‖Σ θ_i x_i‖ = n`, `g(θ_i x_i) = 1`, `‖g‖ = 1`, and the chain carries
    /// exactly one unit of every `θ_i x_i`.
    pub fn verify_sums(&self) -> Result<()> {
        let n = self.elements.len();
        ensure(self.signs.len() == n, || "one sign per element".into())?;
        if n == 0 {
            return Ok(());
        }
        let one = Rational::one();
        let (g_norm, _) = dual_norm(&self.separator);
        ensure(g_norm == one, || format!("separator has dual norm {g_norm}"))?;
        for (i, (x, &s)) in self.elements.iter().zip(&self.signs).enumerate() {
            let along: Rational = self.chain.nodes().iter().map(|t| x.get(t)).sum();
            let along = if s < 0 { -along } else { along };
            ensure(along == one, || format!("element {i} sums to {along} along the chain"))?;
            let gx = self.separator.eval(x);
            let gx = if s < 0 { -gx } else { gx };
            ensure(gx == one, || format!("separator gives {gx} on element {i}"))?;
        }
        let total = chain_norm_value(&self.signed_sum().expect("nonempty"));
        ensure(total == int(n as i64), || format!("signed sum has norm {total}, expected {n}"))
    }
}
