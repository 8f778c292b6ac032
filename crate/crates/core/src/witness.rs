//! Counterexamples at vertices where recoverability fails.
//!
//! When Jordan recoverability fails, the witness is a pair of non-isomorphic
//! modules in the subcategory with the same generic Jordan form. The pair is
//! built from strings found by the searches below, one construction per
//! failed condition:
//!
//! * `m` not minuscule: a shortest return `φ, Γ, φ⁻¹` to `m`;
//! * (o) fails: a shortest string through `m` that revisits a vertex;
//! * (i*) fails: two shortest strings from `m` with a common end;
//! * (ii) fails: a string `ν` from `m` and three arrows around it.
//!
//! When only canonical recoverability fails, the witness is a representation
//! `W` with a nilpotent endomorphism of type `GenJF(X)` whose map on the
//! offending arrow is nonzero while `X` vanishes there.
//!
//! Constructions that do not verify are retried in the opposite quiver and
//! carried back by duality.

use std::sync::Arc;

use serde::Serialize;

use crate::conditions::{self, istar_violation, shortest_return};
use crate::error::WitnessError;
use crate::expr::render_ledger;
use crate::field::PrimeField;
use crate::iso::{decompose_ledgered, IsoVerdict};
use crate::jordan::{genjf_oracle, jordan_type, Coverage, Endo, OracleOptions};
use crate::matrix::Matrix;
use crate::partition::JordanData;
use crate::quiver::{GentleQuiver, Quiver};
use crate::rep::{check_morphism, Morphism, Representation};
use crate::strings::{first_revisiting_string, revisits, strings_from};
use crate::word::{Letter, Word};

/// Primes tried in turn when a construction does not verify.
pub const PRIMES: [u32; 3] = [2, 3, 5];

const MAX_CANDIDATES: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Case {
    NotMinuscule,
    NotO,
    NotIStar,
    NotII,
    NotI,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    /// Two non-isomorphic modules with the same generic Jordan form.
    JrPair,
    /// A representation with Jordan data `GenJF(X)` that is not isomorphic to `X`.
    CjrRep,
}

#[derive(Clone, Debug)]
pub struct Witness {
    pub case: Case,
    pub vertex: usize,
    pub x: Representation<PrimeField>,
    /// The second module of the pair, or `W`.
    pub y: Representation<PrimeField>,
    /// Nilpotent endomorphism of `W`.
    pub endo: Option<Endo>,
    /// The arrow where `W` is nonzero and `X` is zero.
    pub arrow: Option<usize>,
    pub jf: JordanData,
    /// Whether the strings were found in the opposite quiver.
    pub dual: bool,
    pub transcript: Vec<String>,
}

impl Witness {
    pub fn kind(&self) -> WitnessKind {
        if self.endo.is_some() {
            WitnessKind::CjrRep
        } else {
            WitnessKind::JrPair
        }
    }

    pub fn prime(&self) -> u32 {
        self.x.field().p()
    }

    pub fn x_expr(&self) -> String {
        render_ledger(self.x.quiver(), self.x.field(), self.x.ledger().unwrap_or(&[]))
    }

    /// The second module as an expression, or the nonzero map of `W`.
    pub fn y_expr(&self) -> String {
        match (self.y.ledger(), self.arrow) {
            (Some(l), _) => render_ledger(self.y.quiver(), self.y.field(), l),
            (None, Some(a)) => {
                let q = self.y.quiver();
                format!(
                    "W with dims {:?}, zero maps except W_{} = {}",
                    self.y.dims(),
                    q.label(a),
                    self.y.map(a).render(self.y.field())
                )
            }
            (None, None) => "W".into(),
        }
    }
}

fn drop_first(q: &Quiver, w: &Word) -> Word {
    w.segment(q, 1, w.len())
}

fn drop_last(q: &Quiver, w: &Word) -> Word {
    w.segment(q, 0, w.len() - 1)
}

type Candidate = (Vec<Word>, Vec<Word>);

fn case_not_minuscule(q: &Quiver, m: usize) -> Result<Vec<Candidate>, WitnessError> {
    let Some(chi) = shortest_return(q, m)? else {
        return Ok(Vec::new());
    };
    let mut out = Vec::new();
    for chi in [chi.clone(), chi.inverse()] {
        let vs = chi.vertices(q);
        let Some(p) = (1..vs.len()).find(|&i| vs[..i].contains(&vs[i])) else {
            continue;
        };
        let j = vs[..p].iter().position(|&v| v == vs[p]).expect("found above");
        let phi = chi.segment(q, 0, j);
        let gamma = chi.segment(q, j, p);
        if gamma.len() == 1 {
            let rho = phi.concat(&gamma).concat(&phi.inverse());
            out.push((vec![phi.clone(), phi], vec![rho]));
        } else {
            let x = drop_first(q, &gamma).concat(&phi.inverse());
            let y = phi.concat(&drop_last(q, &gamma));
            out.push((vec![x], vec![y]));
        }
    }
    Ok(out)
}

/// Shortest segment of `w` that passes through `m` and revisits a vertex.
fn minimal_revisiting(q: &Quiver, m: usize, w: &Word) -> Word {
    let vs = w.vertices(q);
    let mut best = w.clone();
    for len in 1..=w.len() {
        for from in 0..=(w.len() - len) {
            let seg = w.segment(q, from, from + len);
            if vs[from..=from + len].contains(&m) && revisits(q, &seg) {
                if seg.len() < best.len() {
                    best = seg;
                }
                return best;
            }
        }
    }
    best
}

fn case_not_o(q: &Quiver, m: usize) -> Result<Vec<Candidate>, WitnessError> {
    let Some(found) = first_revisiting_string(q, m)? else {
        return Ok(Vec::new());
    };
    let chi = minimal_revisiting(q, m, &found);
    let mut out = Vec::new();
    for chi in [chi.clone(), chi.inverse()] {
        let vs = chi.vertices(q);
        let k = chi.len();
        if vs[0] == vs[k] && vs[0] != m {
            out.push((vec![drop_last(q, &chi)], vec![drop_first(q, &chi)]));
        } else if vs[0] == m {
            let target = vs[k];
            let Some(first) = (1..k).find(|&i| vs[i] == target) else {
                continue;
            };
            let phi = chi.segment(q, 0, first);
            let gamma = chi.segment(q, first, k);
            let gamma1 = drop_last(q, &gamma);
            let x = phi.concat(&gamma1);
            let y2 = phi.concat(&gamma).concat(&gamma1);
            out.push((vec![x.clone(), x], vec![drop_last(q, &phi), y2]));
        }
    }
    Ok(out)
}

fn case_not_istar(q: &Quiver, m: usize) -> Result<Vec<Candidate>, WitnessError> {
    let Some((chi, psi)) = istar_violation(q, m)? else {
        return Ok(Vec::new());
    };
    let common = chi
        .letters()
        .iter()
        .zip(psi.letters())
        .take_while(|(a, b)| a == b)
        .count();
    let phi = chi.segment(q, 0, common);
    let a = chi.segment(q, common, chi.len());
    let b = psi.segment(q, common, psi.len());
    if a.is_lazy() || b.is_lazy() {
        return Err(WitnessError::InternalSearchFailure(
            "strings with a common end share all letters".into(),
        ));
    }
    // The construction wants `nu` to leave through an inverse letter.
    let mut pairs = vec![(a.clone(), b.clone()), (b, a)];
    pairs.sort_by_key(|(nu, _)| !nu.letters()[0].inverse);
    Ok(pairs
        .into_iter()
        .map(|(nu, mu)| {
            (
                vec![phi.concat(&drop_last(q, &nu)), phi.concat(&mu)],
                vec![phi.concat(&nu), phi.concat(&drop_last(q, &mu))],
            )
        })
        .collect())
}

fn letters_into(q: &Quiver, v: usize) -> Vec<Letter> {
    let mut out: Vec<Letter> = q.incoming(v).iter().map(|&a| Letter::direct(a)).collect();
    out.extend(q.outgoing(v).iter().map(|&a| Letter::inv(a)));
    out
}

fn case_not_ii(q: &Quiver, m: usize) -> Result<Vec<Candidate>, WitnessError> {
    let mut nus = strings_from(q, m)?;
    nus.sort_by_key(|w| w.len());
    let mut out = Vec::new();
    for nu in &nus {
        let t = nu.end(q);
        for &d in q.outgoing(t) {
            for &g in q.incoming(t) {
                if d == g || !q.is_relation(g, d) {
                    continue;
                }
                let nd = nu.then(q, Letter::direct(d));
                let ng = nu.then(q, Letter::inv(g));
                if !nd.is_string(q) || !ng.is_string(q) {
                    continue;
                }
                for l in letters_into(q, m) {
                    if l.arrow == d || l.arrow == g {
                        continue;
                    }
                    let an = nu.after(q, l);
                    let and = an.then(q, Letter::direct(d));
                    let ang = an.then(q, Letter::inv(g));
                    if ![&an, &and, &ang].iter().all(|w| w.is_string(q)) {
                        continue;
                    }
                    out.push((
                        vec![nd.clone(), an.clone(), ang.clone(), ng.clone()],
                        vec![and, nu.clone(), ang, ng.clone()],
                    ));
                    if out.len() >= MAX_CANDIDATES {
                        return Ok(out);
                    }
                }
            }
        }
    }
    Ok(out)
}

fn build(q: &Arc<GentleQuiver>, f: PrimeField, words: &[Word]) -> Result<Representation<PrimeField>, WitnessError> {
    let parts = words
        .iter()
        .map(|w| Representation::string_module(q.clone(), f, &w.canonical(q)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Representation::direct_sum(&parts)?)
}

fn describe_coverage(c: &Coverage) -> String {
    match c {
        Coverage::Exhaustive { visited } => format!("exhaustive, {visited} points"),
        Coverage::TopReached { visited } => format!("single-block type reached after {visited} points"),
        Coverage::Sampled { samples } => format!("sampled, {samples} points"),
    }
}

/// Exact oracle value over the field of `x`, or an explanation.
fn exact_genjf(
    x: &Representation<PrimeField>,
    opts: &OracleOptions,
    name: &str,
    log: &mut Vec<String>,
) -> Result<Option<JordanData>, WitnessError> {
    let out = genjf_oracle(x, opts)?;
    log.push(format!(
        "GenJF({name}) over F_{} = {} ({})",
        x.field().p(),
        out.jf.render(x.quiver()),
        describe_coverage(&out.coverage)
    ));
    Ok(out.exact().then_some(out.jf))
}

fn check_pair(
    x: &Representation<PrimeField>,
    y: &Representation<PrimeField>,
    opts: &OracleOptions,
    log: &mut Vec<String>,
) -> Result<Option<JordanData>, WitnessError> {
    let q = x.quiver();
    log.push(format!("X = {}", render_ledger(q, x.field(), x.ledger().unwrap_or(&[]))));
    log.push(format!("Y = {}", render_ledger(q, y.field(), y.ledger().unwrap_or(&[]))));
    let verdict = decompose_ledgered(x, y);
    log.push(format!("isomorphism test: {verdict:?}"));
    if verdict != IsoVerdict::NotIso {
        return Ok(None);
    }
    if x.dims() != y.dims() {
        log.push("dimension vectors differ".into());
        return Ok(None);
    }
    let Some(a) = exact_genjf(x, opts, "X", log)? else {
        return Ok(None);
    };
    let Some(b) = exact_genjf(y, opts, "Y", log)? else {
        return Ok(None);
    };
    Ok((a == b).then_some(a))
}

/// `W` for the arrow `gamma`: Jordan normal forms of type `jf` everywhere,
/// all maps zero except `W_gamma`, which sends the longest chain at its
/// source into the longest chain at its target.
pub fn build_w(
    q: &Arc<GentleQuiver>,
    f: PrimeField,
    jf: &JordanData,
    gamma: usize,
) -> Result<(Representation<PrimeField>, Endo), WitnessError> {
    let dims = jf.dims();
    let endo = Morphism {
        maps: jf
            .0
            .iter()
            .map(|p| {
                let n = p.size();
                // Chains e_0 -> e_1 -> ... -> 0, one per part.
                let mut m = Matrix::zero(&f, n, n);
                let mut start = 0;
                for &len in p.parts() {
                    for i in 0..len - 1 {
                        m.set(start + i + 1, start + i, 1);
                    }
                    start += len;
                }
                m
            })
            .collect(),
    };
    let (s, t) = (q.source(gamma), q.target(gamma));
    let eta = jf.at(s).parts().first().copied().unwrap_or(0);
    let k = jf.at(t).parts().first().copied().unwrap_or(0);
    let mut maps: Vec<Matrix<u32>> = (0..q.arrow_count())
        .map(|a| Matrix::zero(&f, dims[q.target(a)], dims[q.source(a)]))
        .collect();
    if k >= eta {
        for i in 0..eta {
            maps[gamma].set(k - eta + i, i, 1);
        }
    } else {
        for i in 0..k {
            maps[gamma].set(i, i, 1);
        }
    }
    let w = Representation::new(q.clone(), f, dims, maps)?;
    Ok((w, endo))
}

fn check_w(
    x: &Representation<PrimeField>,
    gamma: usize,
    opts: &OracleOptions,
    log: &mut Vec<String>,
) -> Result<Option<(Representation<PrimeField>, Endo, JordanData)>, WitnessError> {
    let q = x.quiver();
    log.push(format!("X = {}", render_ledger(q, x.field(), x.ledger().unwrap_or(&[]))));
    let Some(jf) = exact_genjf(x, opts, "X", log)? else {
        return Ok(None);
    };
    let (w, n) = build_w(q, *x.field(), &jf, gamma)?;
    log.push(format!(
        "W_{} = {} while X_{} = 0",
        q.label(gamma),
        w.map(gamma).render(w.field()),
        q.label(gamma)
    ));
    if !x.map(gamma).is_zero(x.field()) || w.map(gamma).is_zero(w.field()) {
        log.push("the offending arrow does not separate X and W".into());
        return Ok(None);
    }
    if !w.satisfies_relations() || check_morphism(&w, &w, &n).is_err() {
        log.push("W or its endomorphism is malformed".into());
        return Ok(None);
    }
    let got = jordan_type(&w, &n)?;
    log.push(format!("JF of the endomorphism of W = {}", got.render(q)));
    if got != jf {
        return Ok(None);
    }
    let verdict = decompose_ledgered(&w, &x.clone().forget_ledger());
    log.push(format!("isomorphism test W vs X: {verdict:?}"));
    if verdict != IsoVerdict::NotIso {
        return Ok(None);
    }
    Ok(Some((w, n, jf)))
}

fn first_failure(flags: &conditions::ConditionFlags) -> Option<Case> {
    if !flags.jr() {
        Some(if !flags.minuscule.holds {
            Case::NotMinuscule
        } else if !flags.o.holds {
            Case::NotO
        } else if !flags.istar.holds {
            Case::NotIStar
        } else {
            Case::NotII
        })
    } else if !flags.cjr() {
        Some(Case::NotI)
    } else {
        None
    }
}

/// Builds and checks a witness at `m`, trying the primes in [`PRIMES`].
pub fn find_witness(q: &Arc<GentleQuiver>, m: usize, opts: &OracleOptions) -> Result<Witness, WitnessError> {
    let flags = conditions::condition_flags(q, m)?;
    let case = first_failure(&flags).ok_or(WitnessError::NoFailure)?;
    let mut log = Vec::new();

    if case == Case::NotI {
        let (rho, nu, gamma) = conditions::i_violation(q, m)?
            .ok_or_else(|| WitnessError::InternalSearchFailure("no violation of (i) found".into()))?;
        for p in PRIMES {
            let f = PrimeField::new(p).expect("prime");
            let x = build(q, f, &[rho.clone(), nu.clone()])?;
            if let Some((w, n, jf)) = check_w(&x, gamma, opts, &mut log)? {
                return Ok(Witness {
                    case,
                    vertex: m,
                    x,
                    y: w,
                    endo: Some(n),
                    arrow: Some(gamma),
                    jf,
                    dual: false,
                    transcript: log,
                });
            }
        }
        return Err(WitnessError::InternalSearchFailure(log.join("; ")));
    }

    let generate = |qq: &Quiver| -> Result<Vec<Candidate>, WitnessError> {
        match case {
            Case::NotMinuscule => case_not_minuscule(qq, m),
            Case::NotO => case_not_o(qq, m),
            Case::NotIStar => case_not_istar(qq, m),
            Case::NotII => case_not_ii(qq, m),
            Case::NotI => unreachable!(),
        }
    };
    let opposite = q.opposite();
    let flip = |c: Candidate| -> Candidate {
        (
            c.0.iter().map(Word::opposite).collect(),
            c.1.iter().map(Word::opposite).collect(),
        )
    };
    let mut candidates: Vec<(Candidate, bool)> = generate(q)?.into_iter().map(|c| (c, false)).collect();
    candidates.extend(generate(&opposite)?.into_iter().map(|c| (flip(c), true)));
    if candidates.is_empty() {
        return Err(WitnessError::InternalSearchFailure(format!("no {case:?} configuration found")));
    }
    for p in PRIMES {
        let f = PrimeField::new(p).expect("prime");
        for ((xs, ys), dual) in &candidates {
            if !xs.iter().chain(ys).all(|w| w.is_string(q)) {
                continue;
            }
            let x = build(q, f, xs)?;
            let y = build(q, f, ys)?;
            if x.dims() != y.dims() {
                continue;
            }
            if let Some(jf) = check_pair(&x, &y, opts, &mut log)? {
                return Ok(Witness {
                    case,
                    vertex: m,
                    x,
                    y,
                    endo: None,
                    arrow: None,
                    jf,
                    dual: *dual,
                    transcript: log,
                });
            }
        }
    }
    Err(WitnessError::InternalSearchFailure(log.join("; ")))
}

/// Rechecks a witness from scratch and returns the transcript.
pub fn verify_witness(w: &Witness, opts: &OracleOptions) -> Result<Vec<String>, WitnessError> {
    let mut log = Vec::new();
    let fail = |log: &Vec<String>, why: &str| WitnessError::VerificationFailed(format!("{why} [{}]", log.join("; ")));
    match (w.kind(), w.arrow, &w.endo) {
        (WitnessKind::JrPair, _, _) => match check_pair(&w.x, &w.y, opts, &mut log)? {
            Some(jf) if jf == w.jf => Ok(log),
            Some(_) => Err(fail(&log, "shared Jordan data differs from the recorded one")),
            None => Err(fail(&log, "not a pair of non-isomorphic modules with equal GenJF")),
        },
        (WitnessKind::CjrRep, Some(gamma), Some(n)) => {
            let q = w.x.quiver();
            let Some(jf) = exact_genjf(&w.x, opts, "X", &mut log)? else {
                return Err(fail(&log, "oracle was not exhaustive"));
            };
            if jf != w.jf {
                return Err(fail(&log, "GenJF(X) differs from the recorded one"));
            }
            if check_morphism(&w.y, &w.y, n).is_err() || !w.y.satisfies_relations() {
                return Err(fail(&log, "W or its endomorphism is malformed"));
            }
            let got = jordan_type(&w.y, n)?;
            log.push(format!("JF of the endomorphism of W = {}", got.render(q)));
            if got != jf {
                return Err(fail(&log, "endomorphism of W has the wrong type"));
            }
            if !w.x.map(gamma).is_zero(w.x.field()) || w.y.map(gamma).is_zero(w.y.field()) {
                return Err(fail(&log, "offending arrow does not separate X and W"));
            }
            let verdict = decompose_ledgered(&w.y, &w.x.clone().forget_ledger());
            log.push(format!("isomorphism test W vs X: {verdict:?}"));
            if verdict != IsoVerdict::NotIso {
                return Err(fail(&log, "W is not shown to differ from X"));
            }
            Ok(log)
        }
        _ => Err(fail(&log, "incomplete witness")),
    }
}
