//! Jordan types of nilpotent endomorphisms and the generic Jordan form.
//!
//! Two independent routes compute the generic Jordan form:
//!
//! * the oracle enumerates (or samples) nilpotent endomorphisms over a prime
//!   field and keeps the dominance-maximal Jordan types it sees;
//! * the structural route reads the answer off the dimension vector when the
//!   vertex satisfies (i*) and (ii)(a), and certifies it with an explicit
//!   shift endomorphism built from Brenner's order.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::conditions;
use crate::error::JordanError;
use crate::exec::{map_reduce, Execution};
use crate::field::{Field, PrimeField};
use crate::matrix::Matrix;
use crate::partition::{JordanData, Partition};
use crate::rep::{end_space, hom_space, Morphism, Representation, Summand};
use crate::strings;

pub type Endo = Morphism<u32>;

/// Jordan type of a nilpotent matrix, from the ranks of its powers.
pub fn nilpotent_type<F: Field>(m: &Matrix<F::Elem>, f: &F) -> Option<Partition> {
    let n = m.rows();
    if n == 0 {
        return Some(Partition::default());
    }
    let mut ranks = vec![n];
    let mut power = m.clone();
    loop {
        let r = power.rank(f);
        ranks.push(r);
        if r == 0 {
            break;
        }
        if ranks.len() > n + 1 || r == ranks[ranks.len() - 2] {
            return None;
        }
        power = power.mul(m, f);
    }
    // rank(N^{i-1}) - rank(N^i) is the number of blocks of size >= i.
    let conj: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
    Some(Partition::new(conj).conjugate())
}

/// Per-vertex Jordan type of a nilpotent endomorphism.
pub fn jordan_type<F: Field>(x: &Representation<F>, n: &Morphism<F::Elem>) -> Result<JordanData, JordanError> {
    let q = x.quiver();
    let mut out = Vec::with_capacity(q.vertex_count());
    for (v, m) in n.maps.iter().enumerate() {
        out.push(
            nilpotent_type(m, x.field())
                .ok_or_else(|| JordanError::NotNilpotent(q.vertex_name(v).to_string()))?,
        );
    }
    Ok(JordanData::new(out))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleOptions {
    /// Largest search space enumerated exhaustively, and the sample count beyond it.
    pub budget: u64,
    pub seed: u64,
    pub exec: Execution,
    /// Fail with `BudgetExceeded` instead of sampling.
    pub exhaustive_only: bool,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            budget: 1 << 22,
            seed: 0,
            exec: Execution::Parallel,
            exhaustive_only: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Coverage {
    /// Every point of the search space was visited.
    Exhaustive { visited: u64 },
    /// The search stopped at a single-block type, which dominates everything.
    TopReached { visited: u64 },
    /// Random sampling; the answer is a lower bound.
    Sampled { samples: u64 },
}

#[derive(Clone, Debug)]
pub struct OracleOutcome {
    pub jf: JordanData,
    pub witness: Endo,
    pub coverage: Coverage,
    /// Maximal types seen; a single entry unless the maximum is not unique.
    pub maxima: Vec<JordanData>,
    /// Size of the search space, as a decimal string.
    pub space_size: String,
    /// Whether the search ran over nilpotent endomorphisms only.
    pub cone: bool,
}

impl OracleOutcome {
    /// True when the answer is the exact maximum over the prime field.
    pub fn exact(&self) -> bool {
        !matches!(self.coverage, Coverage::Sampled { .. })
    }
}

/// One coordinate of the search space.
#[derive(Clone, Debug)]
enum Factor {
    /// `c * M` for `c` in the field.
    Scalar(Endo),
    /// One of finitely many fixed endomorphisms.
    Choice(Vec<Endo>),
}

impl Factor {
    fn radix(&self, p: u32) -> u128 {
        match self {
            Factor::Scalar(_) => p as u128,
            Factor::Choice(v) => v.len() as u128,
        }
    }
}

struct Param {
    factors: Vec<Factor>,
    radices: Vec<u128>,
    size: Option<u128>,
    cone: bool,
}

impl Param {
    fn new(factors: Vec<Factor>, p: u32, cone: bool) -> Self {
        let radices: Vec<u128> = factors.iter().map(|f| f.radix(p)).collect();
        let size = radices.iter().try_fold(1u128, |acc, &r| acc.checked_mul(r));
        Param {
            factors,
            radices,
            size,
            cone,
        }
    }

    fn digits(&self, mut index: u128) -> Vec<u128> {
        self.radices
            .iter()
            .map(|&r| {
                let d = index % r;
                index /= r;
                d
            })
            .collect()
    }

    fn assemble(&self, x: &Representation<PrimeField>, digits: &[u128]) -> Endo {
        let f = x.field();
        let mut n = Morphism::zero(f, x, x);
        for (factor, &d) in self.factors.iter().zip(digits) {
            if d == 0 {
                continue;
            }
            match factor {
                Factor::Scalar(m) => n.add_scaled(m, &(d as u32), f),
                Factor::Choice(list) => n.add_scaled(&list[d as usize], &1, f),
            }
        }
        n
    }
}

fn nilpotent_matrices(f: &PrimeField, d: usize) -> Option<Vec<Matrix<u32>>> {
    let p = f.p() as u64;
    let total = p.checked_pow((d * d) as u32)?;
    if total > 1 << 24 {
        return None;
    }
    let mut out = Vec::new();
    for mut i in 0..total {
        let m = Matrix::from_fn(d, d, |_, _| {
            let v = (i % p) as u32;
            i /= p;
            v
        });
        if m.pow(d, f).is_zero(f) {
            out.push(m);
        }
    }
    Some(out)
}

/// Blocks of a ledgered sum: for each summand, its basis indices per vertex.
fn summand_blocks(x: &Representation<PrimeField>, count: usize) -> Vec<Vec<Vec<usize>>> {
    let n = x.quiver().vertex_count();
    let mut blocks = vec![vec![Vec::new(); n]; count];
    for v in 0..n {
        for (i, l) in x.labels(v).iter().enumerate() {
            blocks[l.summand][v].push(i);
        }
    }
    blocks
}

fn restrict(x: &Representation<PrimeField>, block: &[Vec<usize>]) -> Representation<PrimeField> {
    let q = x.quiver();
    let dims: Vec<usize> = block.iter().map(|b| b.len()).collect();
    let maps = (0..q.arrow_count())
        .map(|a| {
            let (s, t) = (q.source(a), q.target(a));
            Matrix::from_fn(dims[t], dims[s], |r, c| *x.map(a).get(block[t][r], block[s][c]))
        })
        .collect();
    Representation::new(q.clone(), *x.field(), dims, maps).expect("restriction has matching shapes")
}

/// Places `h: R_s -> R_t` between the given summand blocks of `x`.
fn embed(x: &Representation<PrimeField>, h: &Endo, src: &[Vec<usize>], dst: &[Vec<usize>]) -> Endo {
    let f = x.field();
    let mut out = Morphism::zero(f, x, x);
    for v in 0..x.dims().len() {
        let m = &h.maps[v];
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                let val = *m.get(r, c);
                if val != 0 {
                    out.maps[v].set(dst[v][r], src[v][c], val);
                }
            }
        }
    }
    out
}

/// The scalar `c` with `h - c * id` nilpotent, for `h` in a local endomorphism ring.
fn residue(r: &Representation<PrimeField>, h: &Endo) -> Option<u32> {
    let f = r.field();
    let p = f.p();
    if p > 4096 {
        return None;
    }
    let v = (0..r.dims().len()).find(|&v| r.dims()[v] > 0)?;
    let candidates: Vec<u32> = (0..p)
        .filter(|&c| {
            let shifted = h.maps[v].sub(&Matrix::identity(f, r.dims()[v]).scale(&c, f), f);
            shifted.pow(r.dims()[v], f).is_zero(f)
        })
        .collect();
    let &[c] = candidates.as_slice() else {
        return None;
    };
    for (w, m) in h.maps.iter().enumerate() {
        let shifted = m.sub(&Matrix::identity(f, r.dims()[w]).scale(&c, f), f);
        if !shifted.pow(r.dims()[w], f).is_zero(f) {
            return None;
        }
    }
    Some(c)
}

/// Parametrizes exactly the nilpotent endomorphisms of a ledgered sum:
/// nilpotent matrices on the multiplicity spaces plus the radical.
fn cone_param(x: &Representation<PrimeField>) -> Option<Param> {
    let ledger = x.ledger()?;
    let f = *x.field();
    let blocks = summand_blocks(x, ledger.len());
    // Group summands into isomorphism types, keeping first appearance order.
    let mut types: Vec<(Summand<u32>, Vec<usize>)> = Vec::new();
    let mut index: HashMap<&Summand<u32>, usize> = HashMap::new();
    for (i, s) in ledger.iter().enumerate() {
        match index.get(s) {
            Some(&t) => types[t].1.push(i),
            None => {
                index.insert(s, types.len());
                types.push((s.clone(), vec![i]));
            }
        }
    }
    let reps: Vec<Representation<PrimeField>> = types.iter().map(|(_, m)| restrict(x, &blocks[m[0]])).collect();
    for (t, (_, members)) in types.iter().enumerate() {
        for &i in &members[1..] {
            if restrict(x, &blocks[i]).maps() != reps[t].maps() {
                return None;
            }
        }
    }
    let mut factors = Vec::new();
    for (t, (_, members)) in types.iter().enumerate() {
        let delta = members.len();
        // Nilpotent part on the multiplicity space.
        if delta > 1 {
            let nil = nilpotent_matrices(&f, delta)?;
            let id = Morphism {
                maps: reps[t].dims().iter().map(|&d| Matrix::identity(&f, d)).collect(),
            };
            let choices = nil
                .iter()
                .map(|a| {
                    let mut acc = Morphism::zero(&f, x, x);
                    for (bi, &dst) in members.iter().enumerate() {
                        for (ai, &src) in members.iter().enumerate() {
                            let c = *a.get(bi, ai);
                            if c != 0 {
                                acc.add_scaled(&embed(x, &id, &blocks[src], &blocks[dst]), &c, &f);
                            }
                        }
                    }
                    acc
                })
                .collect();
            factors.push(Factor::Choice(choices));
        }
        // Radical of the local endomorphism ring.
        let ends = end_space(&reps[t]).ok()?;
        let residues: Vec<u32> = ends.iter().map(|h| residue(&reps[t], h)).collect::<Option<_>>()?;
        let pivot = residues.iter().position(|&c| c != 0)?;
        let inv = f.inv(&residues[pivot])?;
        for (j, h) in ends.iter().enumerate() {
            if j == pivot {
                continue;
            }
            let mut r = h.clone();
            r.add_scaled(&ends[pivot], &f.neg(&f.mul(&residues[j], &inv)), &f);
            for &dst in members {
                for &src in members {
                    factors.push(Factor::Scalar(embed(x, &r, &blocks[src], &blocks[dst])));
                }
            }
        }
    }
    // Maps between different types lie in the radical.
    for (s, (_, ms)) in types.iter().enumerate() {
        for (t, (_, mt)) in types.iter().enumerate() {
            if s == t {
                continue;
            }
            for h in hom_space(&reps[s], &reps[t]).ok()? {
                for &src in ms {
                    for &dst in mt {
                        factors.push(Factor::Scalar(embed(x, &h, &blocks[src], &blocks[dst])));
                    }
                }
            }
        }
    }
    Some(Param::new(factors, f.p(), true))
}

fn plain_param(x: &Representation<PrimeField>) -> Result<Param, JordanError> {
    let basis = end_space(x)?;
    Ok(Param::new(basis.into_iter().map(Factor::Scalar).collect(), x.field().p(), false))
}

/// Antichain of maximal Jordan types, each with the earliest position that produced it.
#[derive(Clone, Debug, Default)]
struct Maxima(Vec<(JordanData, u64, u128)>);

impl Maxima {
    fn insert(&mut self, jd: JordanData, pos: u64, index: u128) {
        for entry in &mut self.0 {
            if entry.0 == jd {
                if pos < entry.1 {
                    entry.1 = pos;
                    entry.2 = index;
                }
                return;
            }
            if jd.dominated_by(&entry.0) {
                return;
            }
        }
        self.0.retain(|e| !e.0.dominated_by(&jd));
        self.0.push((jd, pos, index));
    }

    fn merge(mut self, other: Maxima) -> Maxima {
        for (jd, pos, idx) in other.0 {
            self.insert(jd, pos, idx);
        }
        self
    }
}

fn evaluate(x: &Representation<PrimeField>, param: &Param, index: u128) -> Option<JordanData> {
    let n = param.assemble(x, &param.digits(index));
    jordan_type(x, &n).ok()
}

const BLOCK: u64 = 1 << 12;

fn coprime_step(size: u128) -> u128 {
    if size <= 1 {
        return 1;
    }
    let mut a = 0x9E37_79B9_7F4A_7C15u128 % size;
    fn gcd(mut a: u128, mut b: u128) -> u128 {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    }
    while a == 0 || gcd(a, size) != 1 {
        a = (a + 1) % size;
    }
    a
}

/// Dominance-maximal Jordan type among nilpotent endomorphisms over F_p.
///
/// Spaces within the budget are scanned in a scrambled order, stopping early
/// once a single-block type shows up (nothing can dominate it). Larger spaces
/// are sampled with a seeded generator. Results do not depend on the thread count.
pub fn genjf_oracle(x: &Representation<PrimeField>, opts: &OracleOptions) -> Result<OracleOutcome, JordanError> {
    let param = match cone_param(x) {
        Some(p) => p,
        None => plain_param(x)?,
    };
    let top = JordanData::top(x.dims());
    let size_str = param.size.map_or_else(|| "overflow".to_string(), |s| s.to_string());
    let exhaustive = param.size.is_some_and(|s| s <= opts.budget as u128);
    if !exhaustive && opts.exhaustive_only {
        return Err(JordanError::BudgetExceeded {
            size: size_str,
            budget: opts.budget,
        });
    }
    let mut best = Maxima::default();
    let mut visited = 0u64;
    let mut stopped_at_top = false;
    if exhaustive {
        let size = param.size.unwrap();
        let step = coprime_step(size);
        let offset = 0x2545_F491_4F6C_DD1Du128 % size.max(1);
        let total = size as u64;
        let mut start = 0u64;
        while start < total {
            let end = (start + BLOCK).min(total);
            let block = map_reduce(
                opts.exec,
                start..end,
                Maxima::default,
                |pos| {
                    let index = (step * pos as u128 + offset) % size;
                    let mut m = Maxima::default();
                    if let Some(jd) = evaluate(x, &param, index) {
                        m.insert(jd, pos, index);
                    }
                    m
                },
                Maxima::merge,
            );
            best = best.merge(block);
            visited = end;
            if best.0.iter().any(|e| e.0 == top) {
                stopped_at_top = end < total;
                break;
            }
            start = end;
        }
    } else {
        let samples = opts.budget.max(1);
        let radices = param.radices.clone();
        let mut start = 0u64;
        while start < samples {
            let end = (start + BLOCK).min(samples);
            let block = map_reduce(
                opts.exec,
                start..end,
                Maxima::default,
                |s| {
                    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ s.wrapping_mul(0x9E37_79B9_7F4A_7C15));
                    let digits: Vec<u128> = radices.iter().map(|&r| rng.gen_range(0..r)).collect();
                    let n = param.assemble(x, &digits);
                    let mut m = Maxima::default();
                    if let Ok(jd) = jordan_type(x, &n) {
                        // The witness is redrawn from the sample position.
                        m.insert(jd, s, 0);
                    }
                    m
                },
                Maxima::merge,
            );
            best = best.merge(block);
            visited = end;
            if best.0.iter().any(|e| e.0 == top) {
                stopped_at_top = true;
                break;
            }
            start = end;
        }
    }
    if best.0.is_empty() {
        // The zero endomorphism is always nilpotent; this only happens for an empty space.
        best.insert(JordanData::new(x.dims().iter().map(|&d| Partition::new(vec![1; d])).collect()), 0, 0);
    }
    best.0.sort_by(|a, b| a.0.cmp(&b.0).reverse());
    let (jf, pos, index) = best.0[0].clone();
    let witness = if exhaustive {
        param.assemble(x, &param.digits(index))
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ pos.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let digits: Vec<u128> = param.radices.iter().map(|&r| rng.gen_range(0..r)).collect();
        param.assemble(x, &digits)
    };
    let coverage = if stopped_at_top {
        Coverage::TopReached { visited }
    } else if exhaustive {
        Coverage::Exhaustive { visited }
    } else {
        Coverage::Sampled { samples: visited }
    };
    Ok(OracleOutcome {
        jf,
        witness,
        coverage,
        maxima: best.0.into_iter().map(|e| e.0).collect(),
        space_size: size_str,
        cone: param.cone,
    })
}

/// Checks that every summand of `x` is a string through `m` and that `m`
/// satisfies (i*) and (ii)(a).
fn structural_preconditions<F: Field>(x: &Representation<F>, m: usize) -> Result<(), JordanError> {
    let q = x.quiver();
    if !conditions::condition_iia(q, m).holds {
        return Err(JordanError::Precondition("(ii)(a) fails at the vertex".into()));
    }
    if !conditions::condition_istar(q, m)?.holds {
        return Err(JordanError::Precondition("(i*) fails at the vertex".into()));
    }
    let ledger = x
        .ledger()
        .ok_or_else(|| JordanError::NotInClass("the module has no summand ledger".into()))?;
    for s in ledger {
        match s {
            Summand::String(w) if w.support_vertices(q).contains(&m) => {}
            other => {
                return Err(JordanError::NotInClass(format!(
                    "summand {} does not pass through {}",
                    other.render(q, x.field()),
                    q.vertex_name(m)
                )))
            }
        }
    }
    Ok(())
}

/// Generic Jordan form from dimensions alone: one block per vertex.
pub fn genjf_structural<F: Field>(x: &Representation<F>, m: usize) -> Result<JordanData, JordanError> {
    structural_preconditions(x, m)?;
    Ok(JordanData::top(x.dims()))
}

/// The shift endomorphism: order the summands by Brenner's order on their
/// strings from `m` (ties by ledger position) and send each basis vector at a
/// vertex to the previous one in that order.
pub fn construct_shift_endo<F: Field>(x: &Representation<F>, m: usize) -> Result<Morphism<F::Elem>, JordanError> {
    structural_preconditions(x, m)?;
    let q = x.quiver();
    let f = x.field();
    let ledger = x.ledger().expect("checked above");
    let mut order: Vec<(usize, crate::word::Word)> = ledger
        .iter()
        .enumerate()
        .map(|(i, s)| match s {
            Summand::String(w) => (i, strings::anchor(q, m, w).expect("strings through m end at m")),
            Summand::Band { .. } => unreachable!("checked above"),
        })
        .collect();
    let mut err = None;
    order.sort_by(|(i, a), (j, b)| match strings::brenner_cmp(q, m, a, b) {
        Ok(o) => o.then(i.cmp(j)),
        Err(e) => {
            err = Some(e);
            i.cmp(j)
        }
    });
    if let Some(e) = err {
        return Err(e.into());
    }
    let rank: HashMap<usize, usize> = order.iter().enumerate().map(|(r, (i, _))| (*i, r)).collect();
    let mut n = Morphism::zero(f, x, x);
    for v in 0..q.vertex_count() {
        let mut basis: Vec<(usize, usize)> = x
            .labels(v)
            .iter()
            .enumerate()
            .map(|(idx, l)| (rank[&l.summand], idx))
            .collect();
        basis.sort_unstable();
        for w in basis.windows(2) {
            n.maps[v].set(w[0].1, w[1].1, f.one());
        }
    }
    crate::rep::check_morphism(x, x, &n).map_err(|e| JordanError::Certificate(e.to_string()))?;
    Ok(n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    Structural,
    Oracle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Exactness {
    ProvenExact,
    ExhaustiveOverFp,
    SampledLowerBound,
}

#[derive(Clone, Debug)]
pub struct GenericJordan {
    pub jf: JordanData,
    pub engine: Engine,
    pub exactness: Exactness,
    pub certificate: Endo,
    pub coverage: Option<Coverage>,
}

/// Generic Jordan form: the structural route when `hint` names a vertex where
/// it applies, the oracle otherwise.
pub fn genjf(
    x: &Representation<PrimeField>,
    hint: Option<usize>,
    opts: &OracleOptions,
) -> Result<GenericJordan, JordanError> {
    if let Some(m) = hint {
        if let Ok(jf) = genjf_structural(x, m) {
            let n = construct_shift_endo(x, m)?;
            let got = jordan_type(x, &n)?;
            if got != jf {
                return Err(JordanError::Certificate(format!(
                    "shift endomorphism has type {} instead of {}",
                    got.render(x.quiver()),
                    jf.render(x.quiver())
                )));
            }
            return Ok(GenericJordan {
                jf,
                engine: Engine::Structural,
                exactness: Exactness::ProvenExact,
                certificate: n,
                coverage: None,
            });
        }
    }
    let out = genjf_oracle(x, opts)?;
    Ok(GenericJordan {
        exactness: if out.exact() {
            Exactness::ExhaustiveOverFp
        } else {
            Exactness::SampledLowerBound
        },
        jf: out.jf,
        engine: Engine::Oracle,
        certificate: out.witness,
        coverage: Some(out.coverage),
    })
}
