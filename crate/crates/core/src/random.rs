//! Random gentle quivers and random modules, for property tests and benches.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::field::Field;
use crate::quiver::{Arrow, GentleQuiver, QuiverData};
use crate::rep::Representation;
use crate::strings::strings_through;
use crate::word::Word;

const ATTEMPTS: usize = 10_000;

/// A connected gentle quiver with at most `max_vertices` vertices and at most
/// `max_arrows` arrows. Rejection sampling over degree-bounded quivers with
/// random relations; loops and parallel arrows can occur.
pub fn random_gentle<R: Rng>(rng: &mut R, max_vertices: usize, max_arrows: usize) -> Arc<GentleQuiver> {
    assert!(max_vertices >= 1);
    for _ in 0..ATTEMPTS {
        if let Some(q) = attempt(rng, max_vertices, max_arrows) {
            return Arc::new(q);
        }
    }
    unreachable!("a single vertex is always gentle")
}

fn attempt<R: Rng>(rng: &mut R, max_vertices: usize, max_arrows: usize) -> Option<GentleQuiver> {
    let n = rng.gen_range(1..=max_vertices);
    let budget = max_arrows.max(n - 1);
    let mut outdeg = vec![0; n];
    let mut indeg = vec![0; n];
    let mut arrows: Vec<(usize, usize)> = Vec::new();
    // Spanning tree first, so the quiver is connected.
    for v in 1..n {
        let u = rng.gen_range(0..v);
        let (s, t) = if rng.gen_bool(0.5) { (u, v) } else { (v, u) };
        if outdeg[s] == 2 || indeg[t] == 2 {
            return None;
        }
        outdeg[s] += 1;
        indeg[t] += 1;
        arrows.push((s, t));
    }
    let extra = rng.gen_range(0..=budget - arrows.len());
    for _ in 0..extra {
        let s = rng.gen_range(0..n);
        let t = rng.gen_range(0..n);
        if outdeg[s] < 2 && indeg[t] < 2 {
            outdeg[s] += 1;
            indeg[t] += 1;
            arrows.push((s, t));
        }
    }
    arrows.shuffle(rng);
    let mut relations = Vec::new();
    for (a, &(_, t)) in arrows.iter().enumerate() {
        for (b, &(s, _)) in arrows.iter().enumerate() {
            if s == t && rng.gen_bool(0.5) {
                relations.push([label(a), label(b)]);
            }
        }
    }
    let data = QuiverData {
        name: "random".into(),
        vertices: (1..=n).map(|v| v.to_string()).collect(),
        arrows: arrows
            .iter()
            .enumerate()
            .map(|(i, &(s, t))| Arrow {
                label: label(i),
                source: (s + 1).to_string(),
                target: (t + 1).to_string(),
            })
            .collect(),
        relations,
    };
    GentleQuiver::from_data(data).ok()
}

fn label(i: usize) -> String {
    ((b'a' + i as u8) as char).to_string()
}

/// A random module of the subcategory at `m`: strings through `m` of length
/// at most `max_len`, each with multiplicity at most `max_mult`, at least one
/// summand. The ledger keeps canonical words.
pub fn random_module<F: Field, R: Rng>(
    rng: &mut R,
    q: &Arc<GentleQuiver>,
    m: usize,
    field: F,
    max_len: usize,
    max_mult: usize,
) -> Representation<F> {
    let sigma: Vec<Word> = strings_through(q, m, Some(max_len)).expect("bounded search");
    let mut parts = Vec::new();
    while parts.is_empty() {
        for w in &sigma {
            let k = rng.gen_range(0..=max_mult);
            if k > 0 && rng.gen_bool(0.5) {
                let s = Representation::string_module(q.clone(), field.clone(), w).expect("strings through m");
                parts.push(s.power(k));
            }
        }
    }
    Representation::direct_sum(&parts).expect("same quiver")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_quivers_are_gentle_and_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut sizes = std::collections::HashSet::new();
        for _ in 0..100 {
            let q = random_gentle(&mut rng, 6, 8);
            assert!(q.vertex_count() <= 6 && q.arrow_count() <= 8);
            assert!(q.validate_gentle().ok());
            sizes.insert(q.vertex_count());
        }
        assert!(sizes.len() > 3);
    }
}
