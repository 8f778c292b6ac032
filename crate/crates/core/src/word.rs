//! Walks in a quiver: letters, strings and bands.
//!
//! Letters are stored in traversal order, so `letters[0]` is the first letter
//! walked. Rendering is right to left, matching composition of maps: the
//! string walking `a`, then `d`, then `c` backwards renders as `c^-1 d a`.

use std::cmp::Ordering;
use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::StringError;
use crate::quiver::Quiver;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub arrow: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn direct(arrow: usize) -> Self {
        Letter { arrow, inverse: false }
    }
    pub fn inv(arrow: usize) -> Self {
        Letter { arrow, inverse: true }
    }
    pub fn flipped(self) -> Self {
        Letter {
            arrow: self.arrow,
            inverse: !self.inverse,
        }
    }
    pub fn start(self, q: &Quiver) -> usize {
        if self.inverse {
            q.target(self.arrow)
        } else {
            q.source(self.arrow)
        }
    }
    pub fn end(self, q: &Quiver) -> usize {
        if self.inverse {
            q.source(self.arrow)
        } else {
            q.target(self.arrow)
        }
    }
    /// +1 for a direct letter, -1 for an inverse one.
    pub fn sign(self) -> i8 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
    fn key(self, q: &Quiver) -> (usize, bool) {
        (q.arrow_rank(self.arrow), self.inverse)
    }
    pub fn render(self, q: &Quiver) -> String {
        if self.inverse {
            format!("{}^-1", q.label(self.arrow))
        } else {
            q.label(self.arrow).to_string()
        }
    }
}

/// Whether `next` may follow `prev` in a string.
pub fn can_follow(q: &Quiver, prev: Letter, next: Letter) -> bool {
    if prev.end(q) != next.start(q) {
        return false;
    }
    match (prev.inverse, next.inverse) {
        (false, false) => !q.is_relation(prev.arrow, next.arrow),
        (true, true) => !q.is_relation(next.arrow, prev.arrow),
        _ => prev.arrow != next.arrow,
    }
}

/// A walk: either a lazy path at a vertex or a nonempty letter sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Word {
    Lazy(usize),
    Walk(Vec<Letter>),
}

impl Word {
    /// Builds a word from letters in traversal order; empty input is not allowed.
    pub fn walk(letters: Vec<Letter>) -> Self {
        assert!(!letters.is_empty(), "use Word::Lazy for the empty walk");
        Word::Walk(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        match self {
            Word::Lazy(_) => &[],
            Word::Walk(l) => l,
        }
    }

    pub fn len(&self) -> usize {
        self.letters().len()
    }

    pub fn is_lazy(&self) -> bool {
        matches!(self, Word::Lazy(_))
    }

    pub fn is_empty(&self) -> bool {
        self.is_lazy()
    }

    pub fn start(&self, q: &Quiver) -> usize {
        match self {
            Word::Lazy(v) => *v,
            Word::Walk(l) => l[0].start(q),
        }
    }

    pub fn end(&self, q: &Quiver) -> usize {
        match self {
            Word::Lazy(v) => *v,
            Word::Walk(l) => l[l.len() - 1].end(q),
        }
    }

    /// Vertices `v_0, ..., v_k` visited along the walk.
    pub fn vertices(&self, q: &Quiver) -> Vec<usize> {
        match self {
            Word::Lazy(v) => vec![*v],
            Word::Walk(l) => {
                let mut out = Vec::with_capacity(l.len() + 1);
                out.push(l[0].start(q));
                out.extend(l.iter().map(|x| x.end(q)));
                out
            }
        }
    }

    pub fn support_vertices(&self, q: &Quiver) -> HashSet<usize> {
        self.vertices(q).into_iter().collect()
    }

    pub fn support_arrows(&self) -> HashSet<usize> {
        self.letters().iter().map(|l| l.arrow).collect()
    }

    pub fn inverse(&self) -> Word {
        match self {
            Word::Lazy(v) => Word::Lazy(*v),
            Word::Walk(l) => Word::Walk(l.iter().rev().map(|x| x.flipped()).collect()),
        }
    }

    /// The same walk seen in the opposite quiver.
    pub fn opposite(&self) -> Word {
        match self {
            Word::Lazy(v) => Word::Lazy(*v),
            Word::Walk(l) => Word::Walk(l.iter().map(|x| x.flipped()).collect()),
        }
    }

    /// Appends a letter after the last one (the new letter is walked last).
    pub fn then(&self, q: &Quiver, l: Letter) -> Word {
        let mut letters = self.letters().to_vec();
        debug_assert_eq!(self.end(q), l.start(q));
        letters.push(l);
        Word::Walk(letters)
    }

    /// Prepends a letter before the first one (the new letter is walked first).
    pub fn after(&self, q: &Quiver, l: Letter) -> Word {
        debug_assert_eq!(self.start(q), l.end(q));
        let mut letters = vec![l];
        letters.extend_from_slice(self.letters());
        Word::Walk(letters)
    }

    /// Concatenation: walk `self`, then `next`.
    pub fn concat(&self, next: &Word) -> Word {
        let mut letters = self.letters().to_vec();
        letters.extend_from_slice(next.letters());
        if letters.is_empty() {
            match self {
                Word::Lazy(v) => Word::Lazy(*v),
                Word::Walk(_) => unreachable!(),
            }
        } else {
            Word::Walk(letters)
        }
    }

    /// The letters `from..to` (traversal indices); empty ranges give the lazy
    /// walk at vertex `v_from`.
    pub fn segment(&self, q: &Quiver, from: usize, to: usize) -> Word {
        if from == to {
            Word::Lazy(self.vertices(q)[from])
        } else {
            Word::Walk(self.letters()[from..to].to_vec())
        }
    }

    /// Checks the string conditions; returns the first broken one.
    pub fn check_string(&self, q: &Quiver) -> Result<(), StringError> {
        match self {
            Word::Lazy(v) => {
                if *v >= q.vertex_count() {
                    return Err(StringError::NotAString(format!("vertex index {v} out of range")));
                }
                Ok(())
            }
            Word::Walk(l) => {
                for w in l.windows(2) {
                    if !can_follow(q, w[0], w[1]) {
                        return Err(StringError::NotAString(format!(
                            "{} cannot follow {} in {}",
                            w[1].render(q),
                            w[0].render(q),
                            self.render(q)
                        )));
                    }
                }
                Ok(())
            }
        }
    }

    pub fn is_string(&self, q: &Quiver) -> bool {
        self.check_string(q).is_ok()
    }

    /// Checks that the word is a band: a closed string whose square is a
    /// string and which is not a proper power.
    pub fn check_band(&self, q: &Quiver) -> Result<(), StringError> {
        let Word::Walk(l) = self else {
            return Err(StringError::NotABand("a lazy path is not a band".into()));
        };
        self.check_string(q)?;
        if self.start(q) != self.end(q) {
            return Err(StringError::NotABand(format!("{} is not closed", self.render(q))));
        }
        if !can_follow(q, l[l.len() - 1], l[0]) {
            return Err(StringError::NotABand(format!(
                "the square of {} is not a string",
                self.render(q)
            )));
        }
        let k = l.len();
        for d in 1..k {
            if k % d == 0 && (0..k).all(|i| l[i] == l[i % d]) {
                return Err(StringError::NotABand(format!(
                    "{} is a proper power",
                    self.render(q)
                )));
            }
        }
        Ok(())
    }

    fn key(&self, q: &Quiver) -> Vec<(usize, bool)> {
        self.letters().iter().map(|l| l.key(q)).collect()
    }

    /// Compares two words letter by letter in label order.
    pub fn label_cmp(&self, other: &Word, q: &Quiver) -> Ordering {
        match (self, other) {
            (Word::Lazy(a), Word::Lazy(b)) => a.cmp(b),
            (Word::Lazy(_), _) => Ordering::Less,
            (_, Word::Lazy(_)) => Ordering::Greater,
            _ => self.key(q).cmp(&other.key(q)),
        }
    }

    /// Representative of `{w, w^-1}`: the smaller of the two in label order.
    pub fn canonical(&self, q: &Quiver) -> Word {
        let inv = self.inverse();
        if inv.label_cmp(self, q) == Ordering::Less {
            inv
        } else {
            self.clone()
        }
    }

    /// Representative of a band class under rotation and inversion. The flag
    /// is true when the representative comes from the inverse word.
    pub fn canonical_band(&self, q: &Quiver) -> (Word, bool) {
        let mut best: Option<(Word, bool)> = None;
        for (w, inverted) in [(self.clone(), false), (self.inverse(), true)] {
            let l = w.letters();
            for r in 0..l.len() {
                let rot: Vec<Letter> = l[r..].iter().chain(&l[..r]).copied().collect();
                let cand = Word::Walk(rot);
                let better = match &best {
                    None => true,
                    Some((b, _)) => cand.label_cmp(b, q) == Ordering::Less,
                };
                if better {
                    best = Some((cand, inverted));
                }
            }
        }
        best.expect("bands are nonempty")
    }

    pub fn render(&self, q: &Quiver) -> String {
        match self {
            Word::Lazy(v) => format!("e_{}", q.vertex_name(*v)),
            Word::Walk(l) => {
                let parts: Vec<String> = l.iter().rev().map(|x| x.render(q)).collect();
                parts.join(" ")
            }
        }
    }

    /// Parses the literal grammar: letters right to left separated by spaces
    /// or `·`, inverses written `x^-1` or `x-`, lazy paths `e_<vertex>`.
    /// Only the spelling is checked; call [`Word::check_string`] for the rest.
    pub fn parse(q: &Quiver, text: &str) -> Result<Word, StringError> {
        let syntax = |reason: String| StringError::Syntax {
            text: text.to_string(),
            reason,
        };
        let cleaned = text.replace(['·', '*'], " ");
        let tokens: Vec<&str> = cleaned.split_whitespace().collect();
        if tokens.is_empty() {
            return Err(syntax("empty".into()));
        }
        if tokens.len() == 1 {
            if let Some(v) = tokens[0].strip_prefix("e_") {
                if q.arrow(tokens[0]).is_none() {
                    return q
                        .vertex(v)
                        .map(Word::Lazy)
                        .ok_or_else(|| StringError::UnknownVertex(v.to_string()));
                }
            }
        }
        let mut letters = Vec::new();
        for tok in tokens.iter().rev() {
            let (label, inverse) = if let Some(l) = tok.strip_suffix("^-1") {
                (l, true)
            } else if let Some(l) = tok.strip_suffix("^{-1}") {
                (l, true)
            } else if let Some(l) = tok.strip_suffix('-') {
                (l, true)
            } else {
                (*tok, false)
            };
            if tok.starts_with("e_") && q.arrow(label).is_none() {
                return Err(syntax("a lazy path cannot be combined with letters".into()));
            }
            let arrow = q
                .arrow(label)
                .ok_or_else(|| syntax(format!("unknown arrow `{label}`")))?;
            letters.push(Letter { arrow, inverse });
        }
        Ok(Word::Walk(letters))
    }

    /// Parses and checks that the result is a string.
    pub fn parse_string(q: &Quiver, text: &str) -> Result<Word, StringError> {
        let w = Word::parse(q, text)?;
        w.check_string(q)?;
        Ok(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::quiver_from_parts;

    fn square() -> Quiver {
        quiver_from_parts(
            "sq",
            &["1", "2", "3"],
            &[("a", "1", "2"), ("b", "1", "2"), ("c", "2", "3"), ("d", "2", "3")],
            &[("a", "c"), ("b", "d")],
        )
        .unwrap()
    }

    #[test]
    fn parse_right_to_left() {
        let q = square();
        let w = Word::parse_string(&q, "c^-1 d a").unwrap();
        assert_eq!(w.letters()[0], Letter::direct(q.arrow("a").unwrap()));
        assert_eq!(w.letters()[2], Letter::inv(q.arrow("c").unwrap()));
        assert_eq!(w.render(&q), "c^-1 d a");
        assert_eq!(Word::parse(&q, "c-·d·a").unwrap(), w);
        let names: Vec<&str> = w.vertices(&q).iter().map(|&v| q.vertex_name(v)).collect();
        assert_eq!(names, ["1", "2", "3", "2"]);
    }

    #[test]
    fn relations_block_strings() {
        let q = square();
        assert!(Word::parse_string(&q, "c a").is_err());
        assert!(Word::parse_string(&q, "a^-1 c^-1").is_err());
        assert!(Word::parse_string(&q, "a^-1 a").is_err());
        assert!(Word::parse_string(&q, "d a").is_ok());
    }

    #[test]
    fn lazy_literals() {
        let q = square();
        assert_eq!(Word::parse_string(&q, "e_2").unwrap(), Word::Lazy(1));
        assert!(Word::parse(&q, "e_9").is_err());
    }

    #[test]
    fn band_checks() {
        let q = square();
        let w = Word::parse(&q, "b^-1 c^-1 d a").unwrap();
        assert!(w.check_band(&q).is_ok());
        let (canon, _) = w.canonical_band(&q);
        let (again, _) = canon.inverse().canonical_band(&q);
        assert_eq!(canon, again);
        let not_closed = Word::parse(&q, "d a").unwrap();
        assert!(not_closed.check_band(&q).is_err());
    }

    #[test]
    fn canonical_is_an_involution_class() {
        let q = square();
        let w = Word::parse(&q, "c^-1 d a").unwrap();
        assert_eq!(w.canonical(&q), w.inverse().canonical(&q));
    }
}
