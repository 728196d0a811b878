use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_traits::{One, Signed};
use serde_json::{json, Value};
use treespace::classify::{classify, gauge_norm};
use treespace::dual::{dual_norm, set_membership, sup_over, SetId, SliceSpec};
use treespace::format::{
    functional_from_json, list_from_json, node_str, nodes_to_json, norm_to_json, rows_from_json, slice_from_json,
    vector_from_json, vector_to_json,
};
use treespace::functional::Functional;
use treespace::norm::{norm, SpaceId};
use treespace::rational::{self, int};
use treespace::signs::{balance_signs, brute_force_best_signs, SignProblem};
use treespace::tree::{Antichain, NodeId, TreeKind};
use treespace::vector::FinVector;
use treespace::{Error, Rational, Result};

use crate::{oracle, Cli, Command};

pub struct Output {
    pub json: Value,
    pub text: String,
    /// Set by the suite when a property failed.
    pub failed: bool,
}

impl Output {
    pub fn new(json: Value, text: String) -> Self {
        Output { json, text, failed: false }
    }
}

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Malformed(_) => 1,
        Error::Precondition(_) | Error::Unsupported(_) => 2,
        Error::Verification(_) => 3,
    }
}

pub fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Verification(msg()))
    }
}

pub(crate) fn read(path: &Path) -> Result<Value> {
    let s = fs::read_to_string(path).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&s).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))
}

pub(crate) fn q(x: &Rational) -> String {
    rational::format(x)
}

pub(crate) fn set_text(ts: impl IntoIterator<Item = impl std::borrow::Borrow<NodeId>>, kind: TreeKind) -> String {
    let v: Vec<String> = ts.into_iter().map(|t| node_str(t.borrow(), kind)).collect();
    format!("{{{}}}", v.join(", "))
}

pub(crate) fn vec_text(x: &FinVector) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let v: Vec<String> = x.entries().iter().map(|(t, c)| format!("{}·e_{}", q(c), node_str(t, x.kind()))).collect();
    v.join(" + ")
}

pub(crate) fn parse_q(s: &str) -> Result<Rational> {
    rational::parse(s)
}

pub(crate) fn slices(v: &Value, kind: TreeKind) -> Result<Vec<SliceSpec>> {
    list_from_json(v, "slices")?.iter().map(|s| slice_from_json(s, kind)).collect()
}

/// Norm in the space, cross-checked against enumeration when `verify` is on.
pub(crate) fn checked_norm(space: &SpaceId, x: &FinVector, verify: bool) -> Result<Rational> {
    let (v, cert) = norm(space, x)?;
    if verify {
        check(cert.verify(space, x), || "norm certificate does not re-sum to the norm".into())?;
        if let Some(o) = oracle::norm(space, x) {
            check(o == v, || format!("norm {} but enumeration gives {}", q(&v), q(&o)))?;
        }
    }
    Ok(v)
}

pub(crate) fn xt_only(space: &SpaceId) -> Result<()> {
    match space {
        SpaceId::XT => Ok(()),
        _ => Err(Error::Unsupported("this construction lives in the binary tree space T".into())),
    }
}

pub fn run(cli: &Cli) -> Result<Output> {
    let space = SpaceId::parse(&cli.space)?;
    let kind = space.kind();
    let verify = cli.verify;
    match &cli.command {
        Command::Norm { vector } => {
            let x = vector_from_json(&read(vector)?, kind)?;
            let (v, cert) = norm(&space, &x)?;
            checked_norm(&space, &x, verify)?;
            let text = format!("norm = {}\nattained on {}\n", q(&v), set_text(&cert.set, kind));
            Ok(Output::new(norm_to_json(&v, &cert, kind), text))
        }
        Command::DualNorm { functional } => {
            if !matches!(space, SpaceId::XT | SpaceId::XTInf) {
                return Err(Error::Unsupported("dual norms are computed in T and TINF".into()));
            }
            let f = functional_from_json(&read(functional)?, kind)?;
            let (v, c) = dual_norm(&f);
            if verify {
                verify_sup(SetId::BX, &f, &v, &c.witness, &c.antichain)?;
            }
            Ok(sup_output(&v, &c.antichain, &c.witness, kind))
        }
        Command::Sup { set, functional } => {
            let set = SetId::parse(set)?;
            let f = functional_from_json(&read(functional)?, kind)?;
            let (v, c) = sup_over(set, &f)?;
            if verify {
                verify_sup(set, &f, &v, &c.witness, &c.antichain)?;
            }
            Ok(sup_output(&v, &c.antichain, &c.witness, kind))
        }
        Command::Classify { vector } => {
            let x = vector_from_json(&read(vector)?, kind)?;
            let r = classify(&space, &x)?;
            if verify {
                let n = checked_norm(&space, &x, true)?;
                check(n == r.norm, || "classification used a different norm".into())?;
                if let Some(w) = &r.witness {
                    let maximal = Antichain::new(w.iter().cloned()).map(|a| a.is_maximal(kind)).unwrap_or(false);
                    check(maximal, || "extreme-point witness is not a maximal antichain".into())?;
                    check(
                        x.support().count() == w.len() && w.iter().all(|t| x.abs_at(t).is_one()),
                        || "x is not a signed indicator of its witness".into(),
                    )?;
                }
            }
            let json = json!({
                "norm": q(&r.norm),
                "in_ball": r.in_ball,
                "on_sphere": r.on_sphere,
                "extreme": r.extreme,
                "strongly_exposed": r.extreme,
                "witness": r.witness.as_ref().map(|w| nodes_to_json(w, kind)),
                "in_sigma": r.in_sigma,
                "in_sigma_plus": r.in_sigma_plus,
                "in_omega_plus": r.in_omega_plus,
                "point_of_continuity": r.point_of_continuity,
                "pc_reason": r.pc_reason,
                "min_branch_mass": q(&r.min_branch_mass),
            });
            let mut text = format!("norm = {}\n", q(&r.norm));
            for (name, b) in [
                ("in ball", r.in_ball),
                ("on sphere", r.on_sphere),
                ("extreme / strongly exposed", r.extreme),
                ("in Σ", r.in_sigma),
                ("in Σ⁺", r.in_sigma_plus),
                ("in Ω⁺", r.in_omega_plus),
                ("point of continuity", r.point_of_continuity),
            ] {
                let _ = writeln!(text, "{name}: {b}");
            }
            if let Some(w) = &r.witness {
                let _ = writeln!(text, "maximal antichain of unit coordinates: {}", set_text(w, kind));
            }
            if let Some(why) = &r.pc_reason {
                let _ = writeln!(text, "not a point of continuity: {why}");
            }
            let _ = writeln!(text, "min branch mass = {}", q(&r.min_branch_mass));
            Ok(Output::new(json, text))
        }
        Command::Gauge { vector } => {
            xt_only(&space)?;
            let x = vector_from_json(&read(vector)?, kind)?;
            let g = gauge_norm(&x);
            let n = checked_norm(&space, &x, verify)?;
            if verify {
                check(n <= g && g <= int(2) * &n, || format!("‖x‖ = {} ≤ |||x||| = {} ≤ 2‖x‖ fails", q(&n), q(&g)))?;
            }
            let text = format!("|||x||| = {}\n‖x‖ = {}\n{} ≤ {} ≤ {}\n", q(&g), q(&n), q(&n), q(&g), q(&(int(2) * &n)));
            Ok(Output::new(json!({ "gauge": q(&g), "norm": q(&n) }), text))
        }
        Command::Balance { rows } => {
            let p = SignProblem::new(rows_from_json(&read(rows)?)?)?;
            let theta = balance_signs(&p);
            let sums = p.sums(&theta);
            let bound = p.bound();
            if verify {
                check(sums.iter().all(|s| s.abs() <= bound), || "a row sum exceeds 2^k".into())?;
                if p.n() <= 12 {
                    let (_, best) = brute_force_best_signs(&p)?;
                    check(best <= bound && best <= p.value(&theta), || "brute force disagrees".into())?;
                }
            }
            let mut text = format!("θ = {:?}\n", theta);
            for (j, s) in sums.iter().enumerate() {
                let _ = writeln!(text, "row {j}: |{}| ≤ {}", q(s), q(&bound));
            }
            let json = json!({
                "theta": theta,
                "sums": sums.iter().map(q).collect::<Vec<_>>(),
                "bound": q(&bound),
            });
            Ok(Output::new(json, text))
        }
        other => crate::certify::run(cli, &space, other),
    }
}

pub(crate) fn verify_sup(set: SetId, f: &Functional, v: &Rational, witness: &FinVector, antichain: &[(NodeId, i8)]) -> Result<()> {
    check(f.eval(witness) == *v, || format!("f(witness) = {} ≠ {}", q(&f.eval(witness)), q(v)))?;
    check(Antichain::new(antichain.iter().map(|(t, _)| t.clone())).is_ok(), || "certificate is not an antichain".into())?;
    match set_membership(set, witness) {
        Ok(inside) => check(inside, || format!("witness is not in {}", set.name()))?,
        Err(Error::Unsupported(_)) => {}
        Err(e) => return Err(e),
    }
    if let Some(o) = oracle::sup(set, f) {
        check(o == *v, || format!("sup {} but enumeration gives {}", q(v), q(&o)))?;
    }
    Ok(())
}

pub(crate) fn sup_output(v: &Rational, antichain: &[(NodeId, i8)], witness: &FinVector, kind: TreeKind) -> Output {
    let json = json!({
        "value": q(v),
        "antichain": antichain.iter().map(|(t, s)| json!({ "node": node_str(t, kind), "sign": s })).collect::<Vec<_>>(),
        "witness": vector_to_json(witness),
    });
    let signed: Vec<String> =
        antichain.iter().map(|(t, s)| format!("{}{}", if *s < 0 { "−" } else { "+" }, node_str(t, kind))).collect();
    let text = format!("value = {}\nattained at the signed antichain {{{}}}\n", q(v), signed.join(", "));
    Output::new(json, text)
}
