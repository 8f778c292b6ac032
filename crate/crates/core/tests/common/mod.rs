//! Test-only helpers, kept independent of the library's search code.
#![allow(dead_code)]

use gentle_core::field::PrimeField;
use gentle_core::matrix::Matrix;
use gentle_core::partition::{JordanData, Partition};
use gentle_core::quiver::{Arrow, GentleQuiver, QuiverData};
use gentle_core::rep::{end_space, Representation};
use rand::seq::SliceRandom;
use rand::Rng;
use std::sync::Arc;

/// Block sizes of a nilpotent matrix from the ranks of its powers, or `None`
/// when it is not nilpotent.
pub fn block_sizes(m: &Matrix<u32>, f: &PrimeField) -> Option<Vec<usize>> {
    let n = m.rows();
    let mut ranks = vec![n];
    let mut p = Matrix::identity(f, n);
    for _ in 0..n {
        p = p.mul(m, f);
        ranks.push(p.rank(f));
    }
    if ranks[n] != 0 {
        return None;
    }
    // at_least[k] = number of blocks of size > k
    let at_least: Vec<usize> = (0..n).map(|k| ranks[k] - ranks[k + 1]).collect();
    let mut sizes = Vec::new();
    for k in 0..n {
        let next = at_least.get(k + 1).copied().unwrap_or(0);
        for _ in 0..(at_least[k] - next) {
            sizes.push(k + 1);
        }
    }
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    Some(sizes)
}

fn prefix_leq(a: &[usize], b: &[usize]) -> bool {
    let (mut sa, mut sb) = (0, 0);
    for i in 0..a.len().max(b.len()) {
        sa += a.get(i).copied().unwrap_or(0);
        sb += b.get(i).copied().unwrap_or(0);
        if sa > sb {
            return false;
        }
    }
    true
}

/// Vertexwise dominance on tuples of block sizes.
pub fn dominated(a: &[Vec<usize>], b: &[Vec<usize>]) -> bool {
    a.iter().zip(b).all(|(x, y)| prefix_leq(x, y))
}

/// Maximum Jordan type over every endomorphism of `x` over its prime field,
/// by plain enumeration of End(x). `None` if the space has more than `cap`
/// points or the maximum is not unique.
pub fn brute_genjf(x: &Representation<PrimeField>, cap: u64) -> Option<JordanData> {
    let f = *x.field();
    let basis = end_space(x).ok()?;
    let p = f.p() as u64;
    let size = p.checked_pow(basis.len() as u32)?;
    if size > cap {
        return None;
    }
    let nv = x.dims().len();
    let mut maxima: Vec<Vec<Vec<usize>>> = Vec::new();
    for code in 0..size {
        let mut c = code;
        let mut mats: Vec<Matrix<u32>> = (0..nv).map(|v| Matrix::zero(&f, x.dims()[v], x.dims()[v])).collect();
        for b in &basis {
            let s = (c % p) as u32;
            c /= p;
            if s == 0 {
                continue;
            }
            for v in 0..nv {
                mats[v] = mats[v].add(&b.maps[v].scale(&s, &f), &f);
            }
        }
        let Some(ty) = mats.iter().map(|m| block_sizes(m, &f)).collect::<Option<Vec<_>>>() else {
            continue;
        };
        if maxima.iter().any(|m| dominated(&ty, m)) {
            continue;
        }
        maxima.retain(|m| !dominated(m, &ty));
        maxima.push(ty);
    }
    if maxima.len() != 1 {
        return None;
    }
    Some(JordanData::new(maxima.pop().unwrap().into_iter().map(Partition::new).collect()))
}

/// The same quiver with vertices and arrows renamed and reordered.
pub fn relabel<R: Rng>(rng: &mut R, q: &GentleQuiver) -> (Arc<GentleQuiver>, Vec<usize>) {
    let data = q.data();
    let n = data.vertices.len();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let vname = |i: usize| format!("v{}", perm[i]);
    let mut arrows: Vec<(usize, Arrow)> = data
        .arrows
        .iter()
        .enumerate()
        .map(|(i, a)| {
            (
                i,
                Arrow {
                    label: format!("x{i}"),
                    source: vname(q.vertex(&a.source).unwrap()),
                    target: vname(q.vertex(&a.target).unwrap()),
                },
            )
        })
        .collect();
    arrows.shuffle(rng);
    let label = |l: &String| format!("x{}", q.arrow(l).unwrap());
    let mut vertices: Vec<String> = (0..n).map(vname).collect();
    vertices.shuffle(rng);
    let new = GentleQuiver::from_data(QuiverData {
        name: "relabelled".into(),
        vertices,
        arrows: arrows.into_iter().map(|(_, a)| a).collect(),
        relations: data.relations.iter().map(|[a, b]| [label(a), label(b)]).collect(),
    })
    .unwrap();
    let map = (0..n).map(|i| new.vertex(&vname(i)).unwrap()).collect();
    (Arc::new(new), map)
}
