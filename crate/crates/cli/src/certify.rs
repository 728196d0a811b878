//! Subcommands wrapping the slice and neighbourhood constructions.

use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use treespace::classify::classify;
use treespace::constructions::{
    adp_witness, c_non_scd_witness, daugavet_witness, finitely_branching_reduction, pc_approximant, pc_near,
    pibase_basic_witness, positive_slice_defiance, scd_zero_demo, sigma_pibase_defiance, spot_members,
    super_adp_bound, DefianceTranscript, Selector,
};
use treespace::dual::{nbhd_membership, set_membership, slice_membership, subtree_mass, SetId, SliceSpec};
use treespace::format::{
    functional_from_json, functional_to_json, list_from_json, nbhd_from_json, node_str, nodes_to_json,
    slice_from_json, transcript_to_json, vector_from_json, vector_to_json,
};
use treespace::norm::SpaceId;
use treespace::rational::int;
use treespace::tree::{Antichain, Chain, NodeId, TreeKind};
use treespace::vector::FinVector;
use treespace::{gen, Error, Rational, Result};

use crate::cmd::{check, checked_norm, parse_q, q, read, set_text, slices, vec_text, xt_only, Output};
use crate::{Cli, Command};

/// Convex combinations sampled when checking a C-witness.
const COMBINATIONS: usize = 64;
/// Members sampled from a basic open set.
const MEMBERS: usize = 100;

fn chain_sum(x: &FinVector, chain: &Chain) -> Rational {
    chain.nodes().iter().map(|t| x.abs_at(t)).sum()
}

fn transcript_output(t: &DefianceTranscript, sum_norm: &Rational) -> Output {
    let kind = TreeKind::Binary;
    let mut json = transcript_to_json(t, kind);
    json["norm_of_sum"] = Value::String(q(sum_norm));
    let mut text = String::new();
    for (i, (x, s)) in t.elements.iter().zip(&t.signs).enumerate() {
        let _ = writeln!(text, "x_{} (θ = {s:+}) = {}", i + 1, vec_text(x));
    }
    let _ = writeln!(text, "chain {}", set_text(t.chain.nodes(), kind));
    let _ = writeln!(text, "‖Σ θ_i x_i‖ = {} = n", q(sum_norm));
    let _ = writeln!(text, "separator g has ‖g‖ = 1 and g(θ_i x_i) = 1 for every i");
    Output::new(json, text)
}

/// Re-checks a transcript and returns the norm of its signed sum.
fn check_transcript(t: &DefianceTranscript, verify: bool) -> Result<Rational> {
    let sum = t.signed_sum().unwrap_or_else(|| FinVector::zero(TreeKind::Binary));
    let n = checked_norm(&SpaceId::XT, &sum, verify)?;
    if verify {
        t.verify_sums()?;
        let count = int(t.elements.len() as i64);
        check(n == count, || format!("‖Σ θ_i x_i‖ = {} ≠ {}", q(&n), q(&count)))?;
    }
    Ok(n)
}

fn check_slices(elements: &[FinVector], slices: &[SliceSpec]) -> Result<()> {
    for (i, (x, s)) in elements.iter().zip(slices).enumerate() {
        check(slice_membership(x, s)?, || format!("element {} is outside its slice", i + 1))?;
    }
    Ok(())
}

pub fn run(cli: &Cli, space: &SpaceId, command: &Command) -> Result<Output> {
    let verify = cli.verify;
    let b = TreeKind::Binary;
    let two = int(2);
    match command {
        Command::Daugavet { vector, slice } => {
            xt_only(space)?;
            let x = vector_from_json(&read(vector)?, b)?;
            let s = slice_from_json(&read(slice)?, b)?;
            let w = daugavet_witness(&x, &s)?;
            let n = checked_norm(space, &(&x + &w.y), verify)?;
            if verify {
                check(set_membership(SetId::BPlus, &w.y)?, || "y is not in B⁺".into())?;
                check(slice_membership(&w.y, &s)?, || "y is outside the slice".into())?;
                check(n == two && chain_sum(&(&x + &w.y), &w.chain) == two, || "‖x + y‖ ≠ 2 on the chain".into())?;
            }
            let json = json!({ "y": vector_to_json(&w.y), "chain": nodes_to_json(w.chain.nodes(), b), "norm": q(&n) });
            let text = format!(
                "y = {}\n‖x + y‖ = {} attained on the chain {}\n",
                vec_text(&w.y),
                q(&n),
                set_text(w.chain.nodes(), b)
            );
            Ok(Output::new(json, text))
        }
        Command::DefySlices { slices: path } => {
            xt_only(space)?;
            let ss = slices(&read(path)?, b)?;
            let t = positive_slice_defiance(&ss, None)?;
            let n = check_transcript(&t, verify)?;
            if verify {
                check_slices(&t.elements, &ss)?;
            }
            Ok(transcript_output(&t, &n))
        }
        Command::DefyPibase { nbhds } => {
            xt_only(space)?;
            let v = read(nbhds)?;
            let ws = list_from_json(&v, "nbhds")?.iter().map(|w| nbhd_from_json(w, b)).collect::<Result<Vec<_>>>()?;
            let t = sigma_pibase_defiance(&ws)?;
            let n = check_transcript(&t, verify)?;
            if verify {
                for (i, (x, w)) in t.elements.iter().zip(&ws).enumerate() {
                    check(nbhd_membership(x, w)?, || format!("element {} is outside its neighbourhood", i + 1))?;
                }
            }
            Ok(transcript_output(&t, &n))
        }
        Command::Adp { vector, slice } => {
            xt_only(space)?;
            let x = vector_from_json(&read(vector)?, b)?;
            let s = slice_from_json(&read(slice)?, b)?;
            let w = adp_witness(&x, &s)?;
            let z = &x + &w.y.scaled(&int(w.theta.into()));
            let n = checked_norm(space, &z, verify)?;
            if verify {
                check(slice_membership(&w.y, &s)?, || "y is outside the slice".into())?;
                check(classify(space, &w.y)?.extreme, || "y is not strongly exposed".into())?;
                let maximal = Antichain::new(w.antichain.iter().cloned()).map(|a| a.is_maximal(b)).unwrap_or(false);
                check(maximal, || "antichain is not maximal".into())?;
                check(n == two && chain_sum(&z, &w.chain) == two, || "‖x + θy‖ ≠ 2 on the chain".into())?;
            }
            let json = json!({
                "y": vector_to_json(&w.y),
                "theta": w.theta,
                "antichain": nodes_to_json(&w.antichain, b),
                "chain": nodes_to_json(w.chain.nodes(), b),
                "norm": q(&n),
            });
            let text = format!(
                "y = {} (strongly exposed by the maximal antichain {})\nθ = {:+}\n‖x + θy‖ = {} on the chain {}\n",
                vec_text(&w.y),
                set_text(&w.antichain, b),
                w.theta,
                q(&n),
                set_text(w.chain.nodes(), b)
            );
            Ok(Output::new(json, text))
        }
        Command::OmegaWitness { vector, slices: path } => {
            xt_only(space)?;
            let x = vector_from_json(&read(vector)?, b)?;
            if !classify(space, &x)?.in_omega_plus {
                return Err(Error::Precondition("x must lie in Ω⁺".into()));
            }
            let ss = slices(&read(path)?, b)?;
            let t = positive_slice_defiance(&ss, Some(&x))?;
            let n = check_transcript(&t, verify)?;
            if verify {
                check_slices(&t.elements, &ss)?;
                check(t.separator.eval(&x).is_zero(), || "separator does not vanish at x".into())?;
            }
            let mut out = transcript_output(&t, &n);
            out.text.push_str("g(x) = 0\n");
            Ok(out)
        }
        Command::CWitness { vector, slices: path } => {
            xt_only(space)?;
            let x = vector_from_json(&read(vector)?, b)?;
            let ss = slices(&read(path)?, b)?;
            let w = c_non_scd_witness(&x, &ss)?;
            let mut worst: Option<Rational> = None;
            if verify {
                check_slices(&w.elements, &ss)?;
                let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
                for _ in 0..COMBINATIONS {
                    let weights = gen::convex_weights(&mut rng, w.elements.len());
                    let d = w.check_combination(&x, &weights)?;
                    worst = Some(worst.map_or(d.clone(), |m| m.min(d)));
                }
            }
            let json = json!({
                "elements": w.elements.iter().map(vector_to_json).collect::<Vec<_>>(),
                "positive": w.positive,
                "g": functional_to_json(&w.g),
                "h": functional_to_json(&w.h),
                "gap": q(&w.gap),
                "positive_part": transcript_to_json(&w.positive_part, b),
                "min_sampled_distance": worst.as_ref().map(q),
            });
            let mut text = String::new();
            for (i, (e, p)) in w.elements.iter().zip(&w.positive).enumerate() {
                let side = if *p { "positive" } else { "negative" };
                let _ = writeln!(text, "x_{} ({side}) = {}", i + 1, vec_text(e));
            }
            let _ = writeln!(text, "every convex combination is at distance ≥ {} from x", q(&w.gap));
            if let Some(d) = &worst {
                let _ = writeln!(text, "closest of {COMBINATIONS} sampled combinations: {}", q(d));
            }
            Ok(Output::new(json, text))
        }
        Command::PcApprox { functionals, eps } => {
            xt_only(space)?;
            let v = read(functionals)?;
            let fs = list_from_json(&v, "functionals")?
                .iter()
                .map(|f| functional_from_json(f, b))
                .collect::<Result<Vec<_>>>()?;
            let eps = parse_q(eps)?;
            let x = pc_approximant(&fs, &eps)?;
            let values: Vec<Rational> = fs.iter().map(|f| f.eval(&x)).collect();
            if verify {
                let r = classify(space, &x)?;
                check(r.point_of_continuity && r.min_branch_mass.is_one(), || "not a point of continuity".into())?;
                check(values.iter().all(|v| v.abs() < eps), || "some |f_j(x)| is not below ε".into())?;
            }
            let json = json!({ "x": vector_to_json(&x), "values": values.iter().map(q).collect::<Vec<_>>() });
            let mut text = format!("x = {}\nevery branch carries mass 1\n", vec_text(&x));
            for (j, v) in values.iter().enumerate() {
                let _ = writeln!(text, "|f_{}(x)| = {} < {}", j + 1, q(&v.abs()), q(&eps));
            }
            Ok(Output::new(json, text))
        }
        Command::PcNear { nbhd } => {
            xt_only(space)?;
            let w = nbhd_from_json(&read(nbhd)?, b)?;
            let x = pc_near(&w.center.clone(), &w)?;
            if verify {
                check(nbhd_membership(&x, &w)?, || "point left the neighbourhood".into())?;
                check(classify(space, &x)?.point_of_continuity, || "not a point of continuity".into())?;
            }
            let json = json!({ "x": vector_to_json(&x) });
            let text = format!("x = {}\nx is a point of continuity inside the neighbourhood\n", vec_text(&x));
            Ok(Output::new(json, text))
        }
        Command::ReduceInfty { functional, eps } => {
            let c = TreeKind::Countable;
            let f = functional_from_json(&read(functional)?, c)?;
            let eps = parse_q(eps)?;
            let r = finitely_branching_reduction(&f, &eps)?;
            if verify {
                let mut total = Rational::zero();
                for (t, m) in &r.pruned {
                    let audit = subtree_mass(&f, t);
                    check(audit == *m, || format!("pruned mass at {} is {}", node_str(t, c), q(&audit)))?;
                    total += audit;
                }
                check(total == r.pruned_mass && r.pruned_mass < eps, || "pruned mass is not below ε".into())?;
            }
            let branches: Vec<Value> = r
                .tree
                .branches()
                .iter()
                .map(|br| {
                    json!({
                        "prefix": node_str(&NodeId::from_word(br.prefix().to_vec()), c),
                        "period": node_str(&NodeId::from_word(br.period().to_vec()), c),
                    })
                })
                .collect();
            let json = json!({
                "depth": r.tree.depth(),
                "nodes": nodes_to_json(r.tree.explicit_nodes(), c),
                "branches": branches,
                "pruned": r.pruned.iter().map(|(t, m)| json!({ "node": node_str(t, c), "mass": q(m) })).collect::<Vec<_>>(),
                "pruned_mass": q(&r.pruned_mass),
            });
            let mut text = format!(
                "finitely branching subtree: {} nodes to depth {}, {} branches beyond\n",
                r.tree.explicit_nodes().len(),
                r.tree.depth(),
                r.tree.branches().len()
            );
            for (t, m) in &r.pruned {
                let _ = writeln!(text, "pruned T({}) with subtree mass {}", node_str(t, c), q(m));
            }
            let _ = writeln!(text, "total pruned mass {} < {}", q(&r.pruned_mass), q(&eps));
            Ok(Output::new(json, text))
        }
        Command::PibaseInfty { nbhd } => {
            let c = TreeKind::Countable;
            let w = nbhd_from_json(&read(nbhd)?, c)?;
            let p = pibase_basic_witness(&w)?;
            if verify {
                for (i, y) in spot_members(&p.x0, &p.delta0, MEMBERS).iter().enumerate() {
                    check(p.in_basic_set(y), || format!("sample {i} is outside the basic set"))?;
                    check(nbhd_membership(y, &w)?, || format!("sample {i} is outside the neighbourhood"))?;
                }
            }
            let json = json!({
                "x0": vector_to_json(&p.x0),
                "delta0": q(&p.delta0),
                "depth": p.tree.depth(),
                "nodes": nodes_to_json(p.tree.explicit_nodes(), c),
                "bounds": p.bounds.iter().map(|b| b.iter().map(q).collect::<Vec<_>>()).collect::<Vec<_>>(),
            });
            let mut text = format!("basic set around x₀ = {} with δ₀ = {}\n", vec_text(&p.x0), q(&p.delta0));
            for (j, [a, bb, cc]) in p.bounds.iter().enumerate() {
                let _ = writeln!(text, "constraint {}: {} + {} + {} < ε", j + 1, q(a), q(bb), q(cc));
            }
            Ok(Output::new(json, text))
        }
        Command::ScdZero { n, k, selector } => {
            let r = scd_zero_demo(*n, *k, Selector::parse(selector)?)?;
            if verify {
                for (_, _, comb) in &r.selections {
                    comb.verify()?;
                }
                if r.bound_asserted {
                    check(r.r <= r.bound, || "r(n, k) exceeds its bound".into())?;
                }
            }
            let json = json!({
                "n": r.n,
                "k": r.k,
                "selector": r.selector.name(),
                "r": q(&r.r),
                "envelope": q(&r.envelope),
                "constant": q(&r.constant),
                "bound": q(&r.bound),
                "bound_asserted": r.bound_asserted,
                "selections": r.selections.len(),
            });
            let rel = if r.bound_asserted { "≤" } else { "vs" };
            let per_k = &r.constant / int(r.k as i64);
            let text = format!(
                "r({}, {}) = {} {rel} 2^-(n-2) + c/k = {} + {} = {}   (c = {})\n",
                r.n,
                r.k,
                q(&r.r),
                q(&r.envelope),
                q(&per_k),
                q(&r.bound),
                q(&r.constant)
            );
            Ok(Output::new(json, text))
        }
        Command::SuperAdp { m, n, vector, eps } => {
            let kind = space.kind();
            let (m, n) = (NodeId::parse(m, kind)?, NodeId::parse(n, kind)?);
            let y = vector_from_json(&read(vector)?, kind)?;
            let eps = parse_q(eps)?;
            let r = super_adp_bound(space, &m, &n, &y, &eps)?;
            if verify {
                let half = Rational::new(1.into(), 2.into());
                let mut x = FinVector::zero(kind);
                x.add_at(m.clone(), &half);
                x.add_at(n.clone(), &half);
                let plus = checked_norm(space, &(&x + &y), true)?;
                let minus = checked_norm(space, &(&x - &y), true)?;
                check(plus.clone().max(minus) == r.value, || "max over θ disagrees".into())?;
                check(r.value <= r.bound, || "bound exceeded".into())?;
            }
            let json = json!({ "value": q(&r.value), "bound": q(&r.bound), "verdict": r.verdict.label() });
            let text = format!("max_θ ‖x + θy‖ = {} ≤ {}\nverdict: {}\n", q(&r.value), q(&r.bound), r.verdict.label());
            Ok(Output::new(json, text))
        }
        Command::Suite { quick } => crate::suite::run(*quick, cli.seed),
        _ => unreachable!("handled by cmd::run"),
    }
}
