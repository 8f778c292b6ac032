//! Bundled example suite behind `gentle selftest`.

use gentle_core::conditions::condition_flags;
use gentle_core::expr::{parse_module, render_ledger};
use gentle_core::field::PrimeField;
use gentle_core::fixtures;
use gentle_core::jordan::{genjf_oracle, OracleOptions};
use gentle_core::partition::JordanData;
use gentle_core::recover::recover;
use gentle_core::rep::hom_dim;
use gentle_core::witness::{find_witness, verify_witness};

pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn check(name: &str, f: impl FnOnce() -> anyhow::Result<(bool, String)>) -> CheckResult {
    let (pass, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
    CheckResult {
        name: name.into(),
        pass,
        detail,
    }
}

fn genjf_of(name: &str, expr: &str, opts: &OracleOptions) -> anyhow::Result<String> {
    let q = fixtures::load(name);
    for p in [2, 3] {
        let f = PrimeField::new(p)?;
        let x = parse_module(q.clone(), f, expr)?;
        let out = genjf_oracle(&x, opts)?;
        if out.exact() {
            return Ok(out.jf.render(&q));
        }
    }
    anyhow::bail!("oracle budget too small for {expr}")
}

const GENJF: &[(&str, &str, &str)] = &[
    ("a2", "M(e_1) + M(e_2)", "1:[1];2:[1]"),
    ("a2", "M(a)", "1:[1];2:[1]"),
    ("first_gentle", "M(a) + M(e_2) + M(b)", "1:[1];2:[3];3:[1]"),
    ("jrex1", "M(e_1) + M(a) + M(c^-1 a) + M(b a)", "1:[4];2:[3];3:[1];4:[1]"),
    ("jrex1", "M(b) + M(a) + M(c^-1 a) + M(c)", "1:[2];2:[3,1];3:[2];4:[1]"),
    ("jrex1", "M(b a) + M(e_2) + M(c^-1 a) + M(c)", "1:[2];2:[3,1];3:[2];4:[1]"),
    ("minnot1", "M(alpha beta^-1)", "1:[1];2:[1];3:[1]"),
    ("minnot1", "M(gamma^-1 beta)", "1:[1];2:[1];3:[1]"),
    ("minnot2", "M(e_1) + M(c b^-1 c a)", "1:[2];2:[2];3:[2]"),
    ("minnot2", "M(c a)^2", "1:[2];2:[2];3:[2]"),
    ("cjrneed1", "M(alpha) + M(beta)", "1:[1];2:[2];3:[1]"),
];

/// (fixture, vertex, jr, cjr)
const VERDICTS: &[(&str, &str, bool, bool)] = &[
    ("first_gentle", "2", true, true),
    ("jrex1", "1", true, true),
    ("jrex1", "2", false, false),
    ("jrex1", "3", true, true),
    ("jrex1", "4", true, true),
    ("cjrneed1", "2", true, false),
    ("minnot1", "1", false, false),
    ("minnot2", "1", false, false),
    ("kronecker", "1", false, false),
    ("kronecker", "2", false, false),
    ("a2", "1", true, true),
];

pub fn run(opts: &OracleOptions) -> Vec<CheckResult> {
    let mut out = Vec::new();
    out.push(check("gentle8 basis has 20 paths", || {
        let q = fixtures::load("gentle8");
        let n = q.algebra_basis()?.len();
        Ok((n == 20, format!("{n} paths")))
    }));
    out.push(check("morphex dim Hom(X, Y) = 1", || {
        let q = fixtures::load("morphex");
        let f = PrimeField::new(3)?;
        let x = parse_module(q.clone(), f, "M(e_1) + M(a) + M(c)^2")?;
        let y = parse_module(q, f, "M(a) + M(b)")?;
        let d = hom_dim(&x, &y)?;
        Ok((d == 1, format!("{d}")))
    }));
    for &(name, expr, want) in GENJF {
        out.push(check(&format!("GenJF {name}: {expr}"), || {
            let got = genjf_of(name, expr, opts)?;
            Ok((got == want, got))
        }));
    }
    for &(name, v, jr, cjr) in VERDICTS {
        out.push(check(&format!("verdicts {name} at {v}"), || {
            let q = fixtures::load(name);
            let fl = condition_flags(&q, q.vertex(v).expect("fixture vertex"))?;
            Ok((fl.jr() == jr && fl.cjr() == cjr, format!("jr {} cjr {}", fl.jr(), fl.cjr())))
        }));
        if !(jr && cjr) {
            out.push(check(&format!("witness {name} at {v}"), || {
                let q = fixtures::load(name);
                let w = find_witness(&q, q.vertex(v).expect("fixture vertex"), opts)?;
                verify_witness(&w, opts)?;
                Ok((true, format!("{} vs {}", w.x_expr(), w.y_expr())))
            }));
        }
    }
    out.push(check("recover first_gentle at 2", || {
        let q = fixtures::load("first_gentle");
        let f = PrimeField::new(3)?;
        let jf = JordanData::parse(&q, "1:[1];2:[3];3:[1]")?;
        let r = recover(&q, 1, &jf, f, opts)?;
        let x = parse_module(q.clone(), f, "M(a) + M(e_2) + M(b)")?;
        let same = gentle_core::iso::decompose_ledgered(&x, &r.module) == gentle_core::iso::IsoVerdict::Iso;
        Ok((same, render_ledger(&q, &f, r.module.ledger().unwrap_or(&[]))))
    }));
    out.push(check("no module with GenJF 1:[1];2:[1];3:[1]", || {
        let q = fixtures::load("first_gentle");
        let jf = JordanData::parse(&q, "1:[1];2:[1];3:[1]")?;
        let r = recover(&q, 1, &jf, PrimeField::new(3)?, opts);
        Ok((r.is_err(), "rejected".into()))
    }));
    out
}
