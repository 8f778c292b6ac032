//! Integer partitions, the dominance order, and per-vertex Jordan data.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::PartitionError;
use crate::quiver::Quiver;

/// A partition as a non-increasing list of positive parts.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn single(n: usize) -> Self {
        Partition::new(vec![n])
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn conjugate(&self) -> Partition {
        let first = self.0.first().copied().unwrap_or(0);
        Partition((1..=first).map(|i| self.0.iter().filter(|&&p| p >= i).count()).collect())
    }

    /// Dominance: every prefix sum of `self` is at most the matching one of
    /// `other`. Partitions of different sizes are incomparable.
    pub fn dominated_by(&self, other: &Partition) -> bool {
        if self.size() != other.size() {
            return false;
        }
        let (mut a, mut b) = (0, 0);
        for i in 0..self.0.len().max(other.0.len()) {
            a += self.0.get(i).copied().unwrap_or(0);
            b += other.0.get(i).copied().unwrap_or(0);
            if a > b {
                return false;
            }
        }
        true
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "[0]");
        }
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// One partition per vertex, indexed like the quiver's vertices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JordanData(pub Vec<Partition>);

impl JordanData {
    pub fn new(parts: Vec<Partition>) -> Self {
        JordanData(parts)
    }

    pub fn at(&self, v: usize) -> &Partition {
        &self.0[v]
    }

    pub fn dims(&self) -> Vec<usize> {
        self.0.iter().map(|p| p.size()).collect()
    }

    /// Single blocks everywhere: the largest data with these dimensions.
    pub fn top(dims: &[usize]) -> Self {
        JordanData(dims.iter().map(|&d| Partition::single(d)).collect())
    }

    pub fn is_top(&self) -> bool {
        self.0.iter().all(|p| p.parts().len() <= 1)
    }

    /// Vertexwise dominance.
    pub fn dominated_by(&self, other: &JordanData) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a.dominated_by(b))
    }

    /// Partial order comparison; `None` when incomparable.
    pub fn dominance_cmp(&self, other: &JordanData) -> Option<Ordering> {
        match (self.dominated_by(other), other.dominated_by(self)) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Less),
            (false, true) => Some(Ordering::Greater),
            (false, false) => None,
        }
    }

    /// Text form `1:[2];2:[3,1];3:[0]`, vertices in declaration order.
    pub fn render(&self, q: &Quiver) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .map(|(v, p)| format!("{}:{}", q.vertex_name(v), p))
            .collect();
        parts.join(";")
    }

    /// Parses the text form; vertices left out get the empty partition.
    pub fn parse(q: &Quiver, text: &str) -> Result<JordanData, PartitionError> {
        let syntax = |reason: &str| PartitionError::Syntax {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        let mut out = vec![Partition::default(); q.vertex_count()];
        for item in text.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            let (v, rest) = item.split_once(':').ok_or_else(|| syntax("expected `vertex:[parts]`"))?;
            let v = v.trim();
            let idx = q.vertex(v).ok_or_else(|| PartitionError::UnknownVertex(v.to_string()))?;
            let inner = rest
                .trim()
                .strip_prefix('[')
                .and_then(|r| r.strip_suffix(']'))
                .ok_or_else(|| syntax("parts must be in brackets"))?;
            let mut parts = Vec::new();
            for p in inner.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                parts.push(p.parse::<usize>().map_err(|_| syntax("parts must be integers"))?);
            }
            out[idx] = Partition::new(parts);
        }
        Ok(JordanData(out))
    }
}

/// Serializes as a list of part lists.
impl Serialize for JordanData {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<&[usize]> = self.0.iter().map(|p| p.parts()).collect();
        v.serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::quiver_from_parts;

    #[test]
    fn dominance_on_partitions_of_four() {
        let p = |v: Vec<usize>| Partition::new(v);
        assert!(p(vec![2, 2]).dominated_by(&p(vec![3, 1])));
        assert!(p(vec![3, 1]).dominated_by(&p(vec![4])));
        assert!(!p(vec![4]).dominated_by(&p(vec![3, 1])));
        assert!(p(vec![1, 1, 1, 1]).dominated_by(&p(vec![2, 1, 1])));
        assert!(!p(vec![3]).dominated_by(&p(vec![3, 1])));
    }

    #[test]
    fn conjugate_is_an_involution() {
        let p = Partition::new(vec![4, 2, 2, 1]);
        assert_eq!(p.conjugate(), Partition::new(vec![4, 3, 1, 1]));
        assert_eq!(p.conjugate().conjugate(), p);
    }

    #[test]
    fn text_round_trip() {
        let q = quiver_from_parts("c", &["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3")], &[]).unwrap();
        let jf = JordanData::parse(&q, "1:[1];2:[3,1];3:[0]").unwrap();
        assert_eq!(jf.render(&q), "1:[1];2:[3,1];3:[0]");
        assert_eq!(JordanData::parse(&q, "2:[2]").unwrap().render(&q), "1:[0];2:[2];3:[0]");
        assert!(JordanData::parse(&q, "9:[1]").is_err());
    }
}
