//! String combinatorics: occurrences, combinatorial Hom dimensions, strings
//! through a vertex, bands, Brenner's order and the distance function.

use std::cmp::Ordering;
use std::collections::{HashSet, VecDeque};

use crate::error::StringError;
use crate::quiver::Quiver;
use crate::word::{can_follow, Letter, Word};

/// Safety valve for walk searches.
pub const STATE_CAP: usize = 100_000;

/// A positional substring `letters[from..to]`; lazy when `from == to`, in
/// which case it sits at vertex `v_from`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Occurrence {
    pub from: usize,
    pub to: usize,
    pub on_top: bool,
    pub at_bottom: bool,
}

impl Occurrence {
    pub fn is_lazy(&self) -> bool {
        self.from == self.to
    }

    pub fn word(&self, q: &Quiver, host: &Word) -> Word {
        host.segment(q, self.from, self.to)
    }
}

/// Every positional substring of `host`, lazy ones included. For a string of
/// length `k` there are `(k+1)(k+2)/2` of them.
pub fn occurrences(host: &Word) -> Vec<Occurrence> {
    let l = host.letters();
    let k = l.len();
    let mut out = Vec::with_capacity((k + 1) * (k + 2) / 2);
    for from in 0..=k {
        for to in from..=k {
            // The letter just before the segment is l[from-1], the one just after is l[to].
            let before = (from > 0).then(|| l[from - 1]);
            let after = (to < k).then(|| l[to]);
            let on_top = before.map_or(true, |x| x.inverse) && after.map_or(true, |x| !x.inverse);
            let at_bottom = before.map_or(true, |x| !x.inverse) && after.map_or(true, |x| x.inverse);
            out.push(Occurrence {
                from,
                to,
                on_top,
                at_bottom,
            });
        }
    }
    out
}

/// `dim Hom(M(rho), M(rho2))` counted by pairs (factor string of `rho`,
/// substring of `rho2`) with equal words up to inversion.
pub fn hom_dim_combinatorial(q: &Quiver, rho: &Word, rho2: &Word) -> usize {
    let tops: Vec<Word> = occurrences(rho)
        .into_iter()
        .filter(|o| o.on_top)
        .map(|o| o.word(q, rho))
        .collect();
    let bottoms: Vec<Word> = occurrences(rho2)
        .into_iter()
        .filter(|o| o.at_bottom)
        .map(|o| o.word(q, rho2))
        .collect();
    let mut count = 0;
    for t in &tops {
        let ti = t.inverse();
        for b in &bottoms {
            if b == t || *b == ti {
                count += 1;
            }
        }
    }
    count
}

/// Letters that may be walked first from vertex `v`.
fn letters_at(q: &Quiver, v: usize) -> impl Iterator<Item = Letter> + '_ {
    q.outgoing(v)
        .iter()
        .map(|&a| Letter::direct(a))
        .chain(q.incoming(v).iter().map(|&a| Letter::inv(a)))
}

/// One-letter extensions at the end of the walk.
pub fn extend_end(q: &Quiver, w: &Word) -> Vec<Word> {
    let v = w.end(q);
    let last = w.letters().last().copied();
    letters_at(q, v)
        .filter(|&l| last.map_or(true, |p| can_follow(q, p, l)))
        .map(|l| w.then(q, l))
        .collect()
}

/// One-letter extensions at the start of the walk.
pub fn extend_start(q: &Quiver, w: &Word) -> Vec<Word> {
    extend_end(q, &w.inverse())
        .into_iter()
        .map(|x| x.inverse())
        .collect()
}

pub fn is_maximal(q: &Quiver, w: &Word) -> bool {
    extend_end(q, w).is_empty() && extend_start(q, w).is_empty()
}

/// Whether the walk visits some vertex twice.
pub fn revisits(q: &Quiver, w: &Word) -> bool {
    let vs = w.vertices(q);
    let mut seen = HashSet::new();
    vs.into_iter().any(|v| !seen.insert(v))
}

fn sort_words(q: &Quiver, words: &mut [Word]) {
    words.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.label_cmp(b, q)));
}

/// Canonical representatives of the strings passing through `m`.
///
/// Without a cap the search stops at the first string that revisits a vertex
/// and reports it; with a cap every string of length at most `cap` is returned.
pub fn strings_through(q: &Quiver, m: usize, cap: Option<usize>) -> Result<Vec<Word>, StringError> {
    let mut seen = HashSet::new();
    let start = Word::Lazy(m);
    seen.insert(start.clone());
    let mut queue = VecDeque::from([start]);
    let mut out = Vec::new();
    while let Some(w) = queue.pop_front() {
        if cap.is_none() && revisits(q, &w) {
            return Err(StringError::InfiniteFamily {
                witness: w.canonical(q).render(q),
            });
        }
        if cap.is_some_and(|c| w.len() >= c) {
            out.push(w.canonical(q));
            continue;
        }
        for e in extend_end(q, &w).into_iter().chain(extend_start(q, &w)) {
            if seen.insert(e.canonical(q)) {
                if seen.len() > STATE_CAP {
                    return Err(StringError::SearchCap(STATE_CAP));
                }
                queue.push_back(e);
            }
        }
        out.push(w.canonical(q));
    }
    sort_words(q, &mut out);
    Ok(out)
}

/// The first string through `m` (in breadth-first order) that revisits a
/// vertex, if any. It is minimal under inclusion among such strings.
pub fn first_revisiting_string(q: &Quiver, m: usize) -> Result<Option<Word>, StringError> {
    match strings_through(q, m, None) {
        Ok(_) => Ok(None),
        Err(StringError::InfiniteFamily { .. }) => {
            // Re-run the search to recover the word itself.
            let mut seen = HashSet::new();
            let start = Word::Lazy(m);
            seen.insert(start.clone());
            let mut queue = VecDeque::from([start]);
            while let Some(w) = queue.pop_front() {
                if revisits(q, &w) {
                    return Ok(Some(w));
                }
                for e in extend_end(q, &w).into_iter().chain(extend_start(q, &w)) {
                    if seen.insert(e.canonical(q)) {
                        queue.push_back(e);
                    }
                }
            }
            unreachable!("the first search found a revisiting string")
        }
        Err(e) => Err(e),
    }
}

/// Strings starting at `m`, oriented so that `start == m`, lazy one included.
/// Fails like [`strings_through`] when some string from `m` revisits a vertex.
pub fn strings_from(q: &Quiver, m: usize) -> Result<Vec<Word>, StringError> {
    let mut out = Vec::new();
    let mut stack = vec![Word::Lazy(m)];
    while let Some(w) = stack.pop() {
        if revisits(q, &w) {
            return Err(StringError::InfiniteFamily {
                witness: w.canonical(q).render(q),
            });
        }
        if out.len() > STATE_CAP {
            return Err(StringError::SearchCap(STATE_CAP));
        }
        stack.extend(extend_end(q, &w));
        out.push(w);
    }
    sort_words(q, &mut out);
    Ok(out)
}

/// Maximal strings through `m`, one per class up to inversion.
pub fn maximal_strings_through(q: &Quiver, m: usize) -> Result<Vec<Word>, StringError> {
    Ok(strings_through(q, m, None)?
        .into_iter()
        .filter(|w| is_maximal(q, w))
        .collect())
}

/// Band classes (canonical representatives) of length at most `max_len`.
pub fn enumerate_bands(q: &Quiver, max_len: usize) -> Result<Vec<Word>, StringError> {
    let mut found = HashSet::new();
    let mut states = 0usize;
    for v in 0..q.vertex_count() {
        let mut stack = vec![Word::Lazy(v)];
        while let Some(w) = stack.pop() {
            states += 1;
            if states > STATE_CAP * 10 {
                return Err(StringError::SearchCap(STATE_CAP * 10));
            }
            if !w.is_lazy() && w.end(q) == v && w.check_band(q).is_ok() {
                found.insert(w.canonical_band(q).0);
            }
            if w.len() < max_len {
                stack.extend(extend_end(q, &w));
            }
        }
    }
    let mut out: Vec<Word> = found.into_iter().collect();
    sort_words(q, &mut out);
    Ok(out)
}

/// Every string of length at most `max_len`, one per class up to inversion.
pub fn all_strings(q: &Quiver, max_len: usize) -> Vec<Word> {
    let mut found = HashSet::new();
    for v in 0..q.vertex_count() {
        let mut stack = vec![Word::Lazy(v)];
        while let Some(w) = stack.pop() {
            if w.len() < max_len {
                stack.extend(extend_end(q, &w));
            }
            found.insert(w.canonical(q));
        }
    }
    let mut out: Vec<Word> = found.into_iter().collect();
    sort_words(q, &mut out);
    out
}

/// Whether the set of strings is finite, that is, no string repeats a letter.
pub fn finitely_many_strings(q: &Quiver) -> bool {
    let bound = 2 * q.arrow_count() + 1;
    for v in 0..q.vertex_count() {
        let mut stack = vec![Word::Lazy(v)];
        while let Some(w) = stack.pop() {
            let l = w.letters();
            if l.iter().collect::<HashSet<_>>().len() < l.len() {
                return false;
            }
            if w.len() < bound {
                stack.extend(extend_end(q, &w));
            }
        }
    }
    true
}

fn brenner_key(q: &Quiver, w: &Word) -> Vec<(u8, usize)> {
    let mut key: Vec<(u8, usize)> = w
        .letters()
        .iter()
        .map(|l| (if l.inverse { 0 } else { 2 }, q.arrow_rank(l.arrow)))
        .collect();
    key.push((1, 0));
    key
}

/// Brenner's order on strings starting at `m`: after the common prefix, an
/// inverse letter sorts before the end of a word, which sorts before a direct
/// letter. Two different letters of the same sign cannot both follow the
/// prefix when the vertex satisfies (ii)(a); label order breaks such ties.
pub fn brenner_cmp(q: &Quiver, m: usize, mu: &Word, nu: &Word) -> Result<Ordering, StringError> {
    for w in [mu, nu] {
        if w.start(q) != m {
            return Err(StringError::NotAnchored(w.render(q)));
        }
    }
    Ok(brenner_key(q, mu).cmp(&brenner_key(q, nu)))
}

/// Orients a string through `m` so that it starts at `m`, if either end is `m`.
pub fn anchor(q: &Quiver, m: usize, w: &Word) -> Option<Word> {
    if w.start(q) == m {
        Some(w.clone())
    } else if w.end(q) == m {
        Some(w.inverse())
    } else {
        None
    }
}

/// Length of the unique string from `m` to each vertex, `None` when there is
/// none. Requires (i*) and (ii)(a) at `m`.
pub fn delta(q: &Quiver, m: usize) -> Result<Vec<Option<usize>>, StringError> {
    if !crate::conditions::condition_iia(q, m).holds {
        return Err(StringError::PreconditionIIa);
    }
    let from = strings_from(q, m).map_err(|_| StringError::PreconditionIStar)?;
    let mut out = vec![None; q.vertex_count()];
    for w in from {
        let t = w.end(q);
        if out[t].is_some() {
            return Err(StringError::PreconditionIStar);
        }
        out[t] = Some(w.len());
    }
    Ok(out)
}
