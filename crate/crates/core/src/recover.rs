//! Recovering a module of the subcategory at `m` from its generic Jordan form.
//!
//! Under (i*) and (ii)(a) the generic form has one block per vertex and the
//! dimension vectors of the string modules through `m` are linearly
//! independent, so the multiplicities solve a square-or-taller linear system.
//! Under (ii)(b) alone every string through `m` lies on one maximal string,
//! there are finitely many candidates of a given dimension vector, and the
//! oracle picks the one with the requested form.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::conditions;
use crate::error::RecoverError;
use crate::field::{Field, PrimeField, Rationals};
use crate::jordan::{genjf_oracle, OracleOptions};
use crate::matrix::Matrix;
use crate::partition::JordanData;
use crate::quiver::GentleQuiver;
use crate::rep::Representation;
use crate::strings::strings_through;
use crate::word::Word;

/// Candidate multisets examined by the search branch before giving up.
pub const SEARCH_CAP: usize = 1 << 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// Linear system over dimension vectors.
    Linear,
    /// Search over multisets, decided by the oracle.
    Search,
}

#[derive(Clone, Debug)]
pub struct Recovery {
    pub branch: Branch,
    /// Strings through `m` with their multiplicities, zero ones omitted.
    pub multiplicities: Vec<(Word, usize)>,
    pub module: Representation<PrimeField>,
    /// Number of multisets compared by the search branch.
    pub examined: usize,
}

fn assemble(
    q: &Arc<GentleQuiver>,
    f: PrimeField,
    counts: &[(Word, usize)],
) -> Result<Representation<PrimeField>, RecoverError> {
    let mut parts = Vec::new();
    for (w, k) in counts {
        let s = Representation::string_module(q.clone(), f, w).map_err(|e| RecoverError::Precondition(e.to_string()))?;
        parts.push(s.power(*k));
    }
    if parts.is_empty() {
        return Ok(Representation::zero(q.clone(), f));
    }
    Representation::direct_sum(&parts).map_err(|e| RecoverError::Precondition(e.to_string()))
}

fn dim_vector(q: &GentleQuiver, w: &Word) -> Vec<usize> {
    let mut d = vec![0; q.vertex_count()];
    for v in w.vertices(q) {
        d[v] += 1;
    }
    d
}

/// Unique nonnegative integer solution of `sum_s c_s dim(s) = target`.
fn solve_counts(q: &GentleQuiver, sigma: &[Word], target: &[usize]) -> Result<Vec<usize>, RecoverError> {
    let f = Rationals;
    let n = q.vertex_count();
    let k = sigma.len();
    let dims: Vec<Vec<usize>> = sigma.iter().map(|w| dim_vector(q, w)).collect();
    let mut a = Matrix::from_fn(n, k + 1, |r, c| {
        if c < k {
            f.from_i64(dims[c][r] as i64)
        } else {
            f.from_i64(target[r] as i64)
        }
    });
    let pivots = a.rref(&f);
    if pivots.contains(&k) {
        return Err(RecoverError::NoSolution(
            "the dimension vector is not a combination of the strings through the vertex".into(),
        ));
    }
    if pivots.len() < k {
        return Err(RecoverError::AmbiguityBug(
            "dimension vectors of the strings through the vertex are dependent".into(),
        ));
    }
    let mut out = vec![0; k];
    for (r, &c) in pivots.iter().enumerate() {
        let v: &BigRational = a.get(r, k);
        if !v.is_integer() || v.is_negative() {
            return Err(RecoverError::NoSolution(format!(
                "multiplicity of {} would be {}",
                sigma[c].render(q),
                v
            )));
        }
        out[c] = v
            .to_integer()
            .to_usize()
            .ok_or_else(|| RecoverError::NoSolution("multiplicity out of range".into()))?;
    }
    Ok(out)
}

/// Every multiset over `sigma` whose dimension vectors add up to `target`.
fn multisets(q: &GentleQuiver, sigma: &[Word], target: &[usize], cap: usize) -> Result<Vec<Vec<usize>>, RecoverError> {
    fn go(
        dims: &[Vec<usize>],
        i: usize,
        left: &mut Vec<usize>,
        counts: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        cap: usize,
    ) -> bool {
        if left.iter().all(|&d| d == 0) {
            out.push(counts.clone());
            return out.len() <= cap;
        }
        if i == dims.len() {
            return true;
        }
        let d = &dims[i];
        let max = d
            .iter()
            .zip(left.iter())
            .filter(|(a, _)| **a > 0)
            .map(|(a, l)| l / a)
            .min()
            .unwrap_or(0);
        for c in (0..=max).rev() {
            for (l, a) in left.iter_mut().zip(d) {
                *l -= a * c;
            }
            counts[i] = c;
            let ok = go(dims, i + 1, left, counts, out, cap);
            for (l, a) in left.iter_mut().zip(d) {
                *l += a * c;
            }
            counts[i] = 0;
            if !ok {
                return false;
            }
        }
        true
    }
    // Lazy strings have no letters but a nonzero dimension vector, so the
    // recursion always makes progress.
    let dims: Vec<Vec<usize>> = sigma.iter().map(|w| dim_vector(q, w)).collect();
    let mut out = Vec::new();
    let mut left = target.to_vec();
    let mut counts = vec![0; sigma.len()];
    if !go(&dims, 0, &mut left, &mut counts, &mut out, cap) {
        return Err(RecoverError::Precondition(format!(
            "more than {cap} candidate modules share the dimension vector"
        )));
    }
    Ok(out)
}

/// The module of the subcategory at `m` whose generic Jordan form is `jf`.
pub fn recover(
    q: &Arc<GentleQuiver>,
    m: usize,
    jf: &JordanData,
    field: PrimeField,
    opts: &OracleOptions,
) -> Result<Recovery, RecoverError> {
    if jf.0.len() != q.vertex_count() {
        return Err(RecoverError::Precondition(format!(
            "Jordan data has {} vertices, the quiver {}",
            jf.0.len(),
            q.vertex_count()
        )));
    }
    let flags = conditions::condition_flags(q, m)?;
    if !flags.jr() {
        return Err(RecoverError::Precondition(format!(
            "the subcategory at {} is not Jordan recoverable",
            q.vertex_name(m)
        )));
    }
    let sigma = strings_through(q, m, None)?;
    let target = jf.dims();
    let keep = |counts: &[usize]| -> Vec<(Word, usize)> {
        sigma
            .iter()
            .zip(counts)
            .filter(|(_, &c)| c > 0)
            .map(|(w, &c)| (w.clone(), c))
            .collect()
    };

    if flags.iia.holds {
        if let Some(v) = (0..q.vertex_count()).find(|&v| jf.at(v).parts().len() > 1) {
            return Err(RecoverError::NoSolution(format!(
                "generic forms in this subcategory have one block per vertex, {} has {}",
                q.vertex_name(v),
                jf.at(v).parts().len()
            )));
        }
        let counts = solve_counts(q, &sigma, &target)?;
        let multiplicities = keep(&counts);
        let module = assemble(q, field, &multiplicities)?;
        return Ok(Recovery {
            branch: Branch::Linear,
            multiplicities,
            module,
            examined: 1,
        });
    }

    let candidates = multisets(q, &sigma, &target, SEARCH_CAP)?;
    let mut hits = Vec::new();
    for counts in &candidates {
        let multiplicities = keep(counts);
        let module = assemble(q, field, &multiplicities)?;
        let out = genjf_oracle(&module, opts)?;
        if !out.exact() {
            return Err(RecoverError::Precondition(format!(
                "oracle budget too small for {}",
                crate::expr::render_ledger(q, &field, module.ledger().unwrap_or(&[]))
            )));
        }
        if &out.jf == jf {
            hits.push((multiplicities, module));
        }
    }
    let render = |m: &Representation<PrimeField>| crate::expr::render_ledger(q, &field, m.ledger().unwrap_or(&[]));
    match hits.len() {
        0 => Err(RecoverError::NoSolution(format!(
            "none of the {} modules with this dimension vector has generic form {}",
            candidates.len(),
            jf.render(q)
        ))),
        1 => {
            let (multiplicities, module) = hits.pop().expect("one hit");
            Ok(Recovery {
                branch: Branch::Search,
                multiplicities,
                module,
                examined: candidates.len(),
            })
        }
        _ => Err(RecoverError::AmbiguityBug(
            hits.iter().map(|(_, m)| render(m)).collect::<Vec<_>>().join(" and "),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::render_ledger;
    use crate::fixtures;

    fn run(name: &str, m: &str, jf: &str) -> Result<String, RecoverError> {
        let q = fixtures::load(name);
        let f = PrimeField::new(2).unwrap();
        let jf = JordanData::parse(&q, jf).unwrap();
        let r = recover(&q, q.vertex(m).unwrap(), &jf, f, &OracleOptions::default())?;
        Ok(render_ledger(&q, &f, r.module.ledger().unwrap()))
    }

    #[test]
    fn first_gentle_linear_branch() {
        let out = run("first_gentle", "2", "1:[1];2:[3];3:[1]").unwrap();
        assert_eq!(out.split(" + ").count(), 3);
        assert_eq!(run("first_gentle", "2", "1:[];2:[4];3:[]").unwrap(), "M(e_2)^4");
        assert!(matches!(
            run("first_gentle", "2", "1:[1];2:[1];3:[1]"),
            Err(RecoverError::NoSolution(_))
        ));
        assert!(matches!(
            run("first_gentle", "2", "1:[];2:[1,1];3:[]"),
            Err(RecoverError::NoSolution(_))
        ));
    }

    #[test]
    fn not_recoverable_is_refused() {
        assert!(matches!(
            run("jrex1", "2", "1:[1];2:[1];3:[];4:[]"),
            Err(RecoverError::Precondition(_))
        ));
    }
}
