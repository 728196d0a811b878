//! Randomized property suites. Each group draws its own seeded instances and
//! checks library results against the brute-force oracles; groups run in
//! parallel.

use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use treespace::batch;
use treespace::classify::{classify, gauge_norm};
use treespace::constructions::{
    adp_witness, daugavet_witness, finitely_branching_reduction, pc_approximant, positive_slice_defiance,
    sigma_pibase_defiance, super_adp_bound,
};
use treespace::dual::{dual_norm, nbhd_membership, slice_membership, subtree_mass, SetId};
use treespace::functional::Functional;
use treespace::norm::{norm, SpaceId};
use treespace::rational::{int, ratio};
use treespace::signs::{balance_signs, brute_force_best_signs};
use treespace::tree::{Chain, TreeKind};
use treespace::vector::FinVector;
use treespace::{gen, Error, Rational, Result};

use crate::cmd::{check, q, Output};
use crate::oracle;

type Case = fn(&mut ChaCha8Rng) -> Result<()>;

const GROUPS: &[(&str, Case)] = &[
    ("norm matches chain enumeration", norm_case),
    ("chain and antichain isometries", isometry_case),
    ("dual norm matches antichain enumeration", dual_case),
    ("sign balancing within 2^k", balance_case),
    ("daugavet witness reaches 2", daugavet_case),
    ("positive slice defiance", defiance_case),
    ("sigma neighbourhood defiance", sigma_case),
    ("alternative daugavet witness", adp_case),
    ("point of continuity approximant", pc_case),
    ("countable tree reduction", reduction_case),
    ("renorming within factor 2", gauge_case),
    ("super-ADP bound", super_adp_case),
];

pub fn run(quick: bool, seed: u64) -> Result<Output> {
    let cases = if quick { 10 } else { 100 };
    let indexed: Vec<(usize, &(&str, Case))> = GROUPS.iter().enumerate().collect();
    let results = batch::map(&indexed, |(g, (_, case))| {
        let mut failures = Vec::new();
        for i in 0..cases {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(1_000_003).wrapping_add((*g * 100_000 + i) as u64));
            if let Err(e) = case(&mut rng) {
                failures.push(format!("case {i}: {e}"));
            }
        }
        failures
    });
    let mut text = String::new();
    let mut groups = Vec::new();
    let mut failed = false;
    for ((name, _), failures) in GROUPS.iter().zip(&results) {
        let ok = failures.is_empty();
        failed |= !ok;
        let _ = writeln!(text, "{} {name} ({cases} cases)", if ok { "PASS" } else { "FAIL" });
        for f in failures.iter().take(3) {
            let _ = writeln!(text, "    {f}");
        }
        groups.push(json!({ "group": name, "cases": cases, "passed": ok, "failures": failures }));
    }
    Ok(Output { json: json!({ "seed": seed, "groups": groups, "passed": !failed }), text, failed })
}

fn norm_case(rng: &mut ChaCha8Rng) -> Result<()> {
    let x = gen::vector(rng, TreeKind::Binary, 6, 14);
    for space in [SpaceId::XT, SpaceId::parse("SINGLETONS")?, SpaceId::parse("LAMBDA")?] {
        let (v, cert) = norm(&space, &x)?;
        check(cert.verify(&space, &x), || "certificate".into())?;
        let o = oracle::norm(&space, &x).expect("small support");
        check(o == v, || format!("norm {} vs enumeration {}", q(&v), q(&o)))?;
    }
    // 1-unconditional: sign changes do not move the norm.
    let flipped = x.with_signs(|_| if rng.gen() { 1 } else { -1 });
    check(norm(&SpaceId::XT, &flipped)?.0 == norm(&SpaceId::XT, &x)?.0, || "sign change moved the norm".into())
}

fn isometry_case(rng: &mut ChaCha8Rng) -> Result<()> {
    let end = gen::node(rng, TreeKind::Binary, 8, 2);
    let chain = Chain::path_to(&end);
    let mut entries = Vec::new();
    for t in chain.nodes() {
        if rng.gen_bool(0.6) {
            entries.push((t.clone(), gen::small_rational(rng)));
        }
    }
    let x = FinVector::from_entries(TreeKind::Binary, entries)?;
    let l1: Rational = x.entries().values().map(Signed::abs).sum();
    check(norm(&SpaceId::XT, &x)?.0 == l1, || "chain-supported vector is not ℓ₁".into())?;
    let a = gen::antichain(rng, 6, 8);
    let y = FinVector::from_entries(TreeKind::Binary, a.into_iter().map(|t| (t, gen::small_rational(rng))))?;
    let sup = y.entries().values().map(Signed::abs).max().unwrap_or_else(Rational::zero);
    check(norm(&SpaceId::XT, &y)?.0 == sup, || "antichain-supported vector is not c₀".into())
}

fn dual_case(rng: &mut ChaCha8Rng) -> Result<()> {
    let f = gen::finite_functional(rng, 4, 8);
    let (v, c) = dual_norm(&f);
    check(f.eval(&c.witness) == v, || "witness does not attain".into())?;
    let o = oracle::sup(SetId::BX, &f).expect("depth ≤ 4");
    check(o == v, || format!("dual norm {} vs enumeration {}", q(&v), q(&o)))?;
    let end = gen::node(rng, TreeKind::Binary, 6, 2);
    let g = Functional::chain_functional(TreeKind::Binary, &Chain::path_to(&end), |_| if rng.gen() { 1 } else { -1 });
    check(dual_norm(&g).0.is_one(), || "chain functional norm ≠ 1".into())
}

fn balance_case(rng: &mut ChaCha8Rng) -> Result<()> {
    let k = rng.gen_range(1..=4);
    let n = rng.gen_range(1..=12);
    let p = gen::sign_problem(rng, k, n);
    let theta = balance_signs(&p);
    check(p.value(&theta) <= p.bound(), || "bound 2^k exceeded".into())?;
    let (_, best) = brute_force_best_signs(&p)?;
    check(best <= p.bound(), || "brute force finds no feasible signs".into())
}

fn daugavet_case(rng: &mut ChaCha8Rng) -> Result<()> {
    let x = gen::positive_sphere_point(rng, 5, 8);
    let s = gen::slice(rng, SetId::BPlus, 5, 2);
    let w = daugavet_witness(&x, &s)?;
    check(slice_membership(&w.y, &s)?, || "y outside the slice".into())?;
    check(norm(&SpaceId::XT, &(&x + &w.y))?.0 == int(2), || "‖x + y‖ ≠ 2".into())
}

fn defiance_case(rng: &mut ChaCha8Rng) -> Result<()> {
    let slices: Vec<_> = (0..5).map(|_| gen::slice(rng, SetId::BPlus, 4, 2)).collect();
    let t = positive_slice_defiance(&slices, None)?;
    t.verify_sums()?;
    for (x, s) in t.elements.iter().zip(&slices) {
        check(slice_membership(x, s)?, || "element outside its slice".into())?;
    }
    Ok(())
}

fn sigma_case(rng: &mut ChaCha8Rng) -> Result<()> {
    let ws: Vec<_> = (0..4).map(|_| gen::sigma_nbhd(rng, 4)).collect();
    let t = sigma_pibase_defiance(&ws)?;
    t.verify_sums()?;
    for (x, w) in t.elements.iter().zip(&ws) {
        check(nbhd_membership(x, w)?, || "element outside its neighbourhood".into())?;
    }
    Ok(())
}

fn adp_case(rng: &mut ChaCha8Rng) -> Result<()> {
    let x = gen::sphere_point(rng, TreeKind::Binary, 5, 8);
    let s = gen::slice(rng, SetId::BX, 5, 2);
    let w = adp_witness(&x, &s)?;
    check(slice_membership(&w.y, &s)?, || "y outside the slice".into())?;
    check(classify(&SpaceId::XT, &w.y)?.extreme, || "y is not strongly exposed".into())?;
    let z = &x + &w.y.scaled(&int(w.theta.into()));
    check(norm(&SpaceId::XT, &z)?.0 == int(2), || "‖x + θy‖ ≠ 2".into())
}

fn pc_case(rng: &mut ChaCha8Rng) -> Result<()> {
    let k = rng.gen_range(1..=4);
    let fs: Vec<Functional> = (0..k).map(|_| gen::functional(rng, TreeKind::Binary, 4, 4, 2)).collect();
    let eps = gen::width(rng);
    let x = pc_approximant(&fs, &eps)?;
    let r = classify(&SpaceId::XT, &x)?;
    check(r.point_of_continuity && r.min_branch_mass.is_one(), || "branch mass is not 1".into())?;
    check(fs.iter().all(|f| f.eval(&x).abs() < eps), || "some |f(x)| ≥ ε".into())
}

fn reduction_case(rng: &mut ChaCha8Rng) -> Result<()> {
    let f = gen::functional(rng, TreeKind::Countable, 3, 6, 2);
    let eps = gen::width(rng);
    let r = finitely_branching_reduction(&f, &eps)?;
    let audit: Rational = r.pruned.iter().map(|(t, _)| subtree_mass(&f, t)).sum();
    check(audit == r.pruned_mass && audit < eps, || format!("pruned mass {} vs ε {}", q(&audit), q(&eps)))
}

fn gauge_case(rng: &mut ChaCha8Rng) -> Result<()> {
    let x = gen::vector(rng, TreeKind::Binary, 6, 12);
    let n = norm(&SpaceId::XT, &x)?.0;
    let g = gauge_norm(&x);
    check(n <= g && g <= int(2) * n, || "gauge outside [‖x‖, 2‖x‖]".into())
}

fn super_adp_case(rng: &mut ChaCha8Rng) -> Result<()> {
    let eps = ratio(1, 100);
    let (m, n, y) = gen::super_adp_instance(rng, &eps);
    let r = super_adp_bound(&SpaceId::XT, &m, &n, &y, &eps)?;
    check(r.value <= ratio(3, 2) + int(2) * &eps && r.value < int(2), || "value reaches the bound".into())
        .map_err(|e| match e {
            Error::Verification(m) => Error::Verification(format!("{m}: {}", q(&r.value))),
            other => other,
        })
}
