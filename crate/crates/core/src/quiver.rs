//! Finite quivers with quadratic monomial relations, and the gentle and
//! admissibility checks.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::QuiverError;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arrow {
    pub label: String,
    pub source: String,
    pub target: String,
}

/// Serializable shape of a quiver. Relations are `[first, second]`, meaning
/// "traverse `first`, then `second`".
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverData {
    pub name: String,
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
    pub relations: Vec<[String; 2]>,
}

/// A quiver with relations, indexed for fast lookup. Vertices and arrows keep
/// their declaration order; indices into those lists are used everywhere else.
#[derive(Clone, Debug)]
pub struct Quiver {
    name: String,
    vertices: Vec<String>,
    labels: Vec<String>,
    source: Vec<usize>,
    target: Vec<usize>,
    relations: Vec<(usize, usize)>,
    vertex_index: HashMap<String, usize>,
    arrow_index: HashMap<String, usize>,
    arrow_rank: Vec<usize>,
    outgoing: Vec<Vec<usize>>,
    incoming: Vec<Vec<usize>>,
    relation_set: HashSet<(usize, usize)>,
}

impl PartialEq for Quiver {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.vertices == other.vertices
            && self.labels == other.labels
            && self.source == other.source
            && self.target == other.target
            && self.relation_set == other.relation_set
    }
}

impl Eq for Quiver {}

impl Quiver {
    pub fn new(data: QuiverData) -> Result<Self, QuiverError> {
        if data.vertices.is_empty() {
            return Err(QuiverError::Empty);
        }
        let mut vertex_index = HashMap::new();
        for (i, v) in data.vertices.iter().enumerate() {
            if vertex_index.insert(v.clone(), i).is_some() {
                return Err(QuiverError::DuplicateVertex(v.clone()));
            }
        }
        let n = data.vertices.len();
        let mut arrow_index = HashMap::new();
        let (mut labels, mut source, mut target) = (Vec::new(), Vec::new(), Vec::new());
        let mut outgoing = vec![Vec::new(); n];
        let mut incoming = vec![Vec::new(); n];
        for (i, a) in data.arrows.iter().enumerate() {
            if arrow_index.insert(a.label.clone(), i).is_some() {
                return Err(QuiverError::DuplicateArrow(a.label.clone()));
            }
            let s = *vertex_index
                .get(&a.source)
                .ok_or_else(|| QuiverError::UnknownVertex(a.source.clone()))?;
            let t = *vertex_index
                .get(&a.target)
                .ok_or_else(|| QuiverError::UnknownVertex(a.target.clone()))?;
            labels.push(a.label.clone());
            source.push(s);
            target.push(t);
            outgoing[s].push(i);
            incoming[t].push(i);
        }
        let mut relations = Vec::new();
        let mut relation_set = HashSet::new();
        for [first, second] in &data.relations {
            let a = *arrow_index
                .get(first)
                .ok_or_else(|| QuiverError::UnknownArrow(first.clone()))?;
            let b = *arrow_index
                .get(second)
                .ok_or_else(|| QuiverError::UnknownArrow(second.clone()))?;
            if relation_set.insert((a, b)) {
                relations.push((a, b));
            }
        }
        let mut order: Vec<usize> = (0..labels.len()).collect();
        order.sort_by(|&x, &y| labels[x].cmp(&labels[y]));
        let mut arrow_rank = vec![0; labels.len()];
        for (rank, &a) in order.iter().enumerate() {
            arrow_rank[a] = rank;
        }
        Ok(Quiver {
            name: data.name,
            vertices: data.vertices,
            labels,
            source,
            target,
            relations,
            vertex_index,
            arrow_index,
            arrow_rank,
            outgoing,
            incoming,
            relation_set,
        })
    }

    pub fn data(&self) -> QuiverData {
        QuiverData {
            name: self.name.clone(),
            vertices: self.vertices.clone(),
            arrows: (0..self.arrow_count())
                .map(|a| Arrow {
                    label: self.labels[a].clone(),
                    source: self.vertices[self.source[a]].clone(),
                    target: self.vertices[self.target[a]].clone(),
                })
                .collect(),
            relations: self
                .relations
                .iter()
                .map(|&(a, b)| [self.labels[a].clone(), self.labels[b].clone()])
                .collect(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }
    pub fn arrow_count(&self) -> usize {
        self.labels.len()
    }
    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v]
    }
    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }
    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }
    pub fn source(&self, a: usize) -> usize {
        self.source[a]
    }
    pub fn target(&self, a: usize) -> usize {
        self.target[a]
    }
    pub fn vertex(&self, name: &str) -> Option<usize> {
        self.vertex_index.get(name).copied()
    }
    pub fn arrow(&self, label: &str) -> Option<usize> {
        self.arrow_index.get(label).copied()
    }
    /// Position of the arrow in label order; fixes the letter order for canonical forms.
    pub fn arrow_rank(&self, a: usize) -> usize {
        self.arrow_rank[a]
    }
    pub fn outgoing(&self, v: usize) -> &[usize] {
        &self.outgoing[v]
    }
    pub fn incoming(&self, v: usize) -> &[usize] {
        &self.incoming[v]
    }
    pub fn relations(&self) -> &[(usize, usize)] {
        &self.relations
    }
    /// Whether "traverse `first`, then `second`" is a relation.
    pub fn is_relation(&self, first: usize, second: usize) -> bool {
        self.relation_set.contains(&(first, second))
    }

    /// Same vertices, every arrow reversed, every relation `(a, b)` turned into `(b, a)`.
    pub fn opposite(&self) -> Quiver {
        let mut data = self.data();
        for a in &mut data.arrows {
            std::mem::swap(&mut a.source, &mut a.target);
        }
        for r in &mut data.relations {
            r.swap(0, 1);
        }
        Quiver::new(data).expect("opposite of a valid quiver is valid")
    }

    /// Full gentle check; an empty violation list means the quiver is gentle.
    pub fn validate_gentle(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for v in 0..self.vertex_count() {
            if self.incoming[v].len() > 2 {
                violations.push(Violation::new(
                    "in-degree",
                    format!("vertex {} has {} incoming arrows", self.vertices[v], self.incoming[v].len()),
                    self.vertices[v].clone(),
                ));
            }
            if self.outgoing[v].len() > 2 {
                violations.push(Violation::new(
                    "out-degree",
                    format!("vertex {} has {} outgoing arrows", self.vertices[v], self.outgoing[v].len()),
                    self.vertices[v].clone(),
                ));
            }
        }
        for &(a, b) in &self.relations {
            if self.target[a] != self.source[b] {
                violations.push(Violation::new(
                    "composable",
                    format!("relation ({}, {}) is not a path", self.labels[a], self.labels[b]),
                    format!("{} {}", self.labels[a], self.labels[b]),
                ));
            }
        }
        for a in 0..self.arrow_count() {
            let succ = &self.outgoing[self.target[a]];
            let in_i = succ.iter().filter(|&&b| self.is_relation(a, b)).count();
            let out_i = succ.len() - in_i;
            if in_i > 1 {
                violations.push(Violation::new(
                    "related-successor",
                    format!("arrow {} has {} successors in the ideal", self.labels[a], in_i),
                    self.labels[a].clone(),
                ));
            }
            if out_i > 1 {
                violations.push(Violation::new(
                    "free-successor",
                    format!("arrow {} has {} successors outside the ideal", self.labels[a], out_i),
                    self.labels[a].clone(),
                ));
            }
            let pred = &self.incoming[self.source[a]];
            let in_i = pred.iter().filter(|&&b| self.is_relation(b, a)).count();
            let out_i = pred.len() - in_i;
            if in_i > 1 {
                violations.push(Violation::new(
                    "related-predecessor",
                    format!("arrow {} has {} predecessors in the ideal", self.labels[a], in_i),
                    self.labels[a].clone(),
                ));
            }
            if out_i > 1 {
                violations.push(Violation::new(
                    "free-predecessor",
                    format!("arrow {} has {} predecessors outside the ideal", self.labels[a], out_i),
                    self.labels[a].clone(),
                ));
            }
        }
        if !self.is_connected() {
            violations.push(Violation::new(
                "connected",
                "the underlying graph is disconnected".to_string(),
                String::new(),
            ));
        }
        if let Some(cycle) = self.relation_free_cycle() {
            let labels: Vec<&str> = cycle.iter().map(|&a| self.label(a)).collect();
            violations.push(Violation::new(
                "admissible",
                format!("oriented cycle {} avoids the ideal", labels.join(" ")),
                labels.join(" "),
            ));
        }
        ValidationReport { violations }
    }

    /// Only the finite-dimensionality part of the gentle check.
    pub fn check_admissible(&self) -> ValidationReport {
        let mut report = self.validate_gentle();
        report.violations.retain(|v| v.rule == "admissible");
        report
    }

    fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &a in self.outgoing[v].iter().chain(&self.incoming[v]) {
                for w in [self.source[a], self.target[a]] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// An oriented cycle (arrows in traversal order) none of whose consecutive
    /// pairs, including the wrap-around pair, is a relation.
    pub fn relation_free_cycle(&self) -> Option<Vec<usize>> {
        // Cycles in the graph whose nodes are arrows and whose edges are
        // composable pairs outside the ideal.
        let m = self.arrow_count();
        let mut state = vec![0u8; m];
        let mut stack_path = Vec::new();
        fn dfs(
            q: &Quiver,
            a: usize,
            state: &mut [u8],
            path: &mut Vec<usize>,
        ) -> Option<Vec<usize>> {
            state[a] = 1;
            path.push(a);
            for &b in &q.outgoing[q.target[a]] {
                if q.is_relation(a, b) {
                    continue;
                }
                if state[b] == 1 {
                    let start = path.iter().position(|&x| x == b).unwrap();
                    return Some(path[start..].to_vec());
                }
                if state[b] == 0 {
                    if let Some(c) = dfs(q, b, state, path) {
                        return Some(c);
                    }
                }
            }
            path.pop();
            state[a] = 2;
            None
        }
        for a in 0..m {
            if state[a] == 0 {
                if let Some(c) = dfs(self, a, &mut state, &mut stack_path) {
                    return Some(c);
                }
            }
        }
        None
    }

    /// Basis of the bound path algebra: every path avoiding the relations,
    /// ordered by length and then by labels in composition order.
    pub fn algebra_basis(&self) -> Result<Vec<Path>, QuiverError> {
        if let Some(c) = self.relation_free_cycle() {
            let labels: Vec<&str> = c.iter().map(|&a| self.label(a)).collect();
            return Err(QuiverError::NotGentle(ValidationReport {
                violations: vec![Violation::new(
                    "admissible",
                    format!("oriented cycle {} avoids the ideal", labels.join(" ")),
                    labels.join(" "),
                )],
            }));
        }
        let mut out: Vec<Path> = (0..self.vertex_count())
            .map(|v| Path {
                start: v,
                arrows: Vec::new(),
            })
            .collect();
        let mut frontier: Vec<Vec<usize>> = (0..self.arrow_count()).map(|a| vec![a]).collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for p in frontier {
                let last = *p.last().unwrap();
                for &b in &self.outgoing[self.target[last]] {
                    if !self.is_relation(last, b) {
                        let mut q = p.clone();
                        q.push(b);
                        next.push(q);
                    }
                }
                out.push(Path {
                    start: self.source[p[0]],
                    arrows: p,
                });
            }
            frontier = next;
        }
        out.sort_by(|x, y| {
            x.arrows
                .len()
                .cmp(&y.arrows.len())
                .then_with(|| x.sort_key(self).cmp(&y.sort_key(self)))
        });
        Ok(out)
    }
}

/// A path in the quiver; `arrows` is in traversal order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    pub start: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    fn sort_key(&self, q: &Quiver) -> Vec<String> {
        if self.arrows.is_empty() {
            return vec![format!("{:08}", self.start)];
        }
        self.arrows.iter().rev().map(|&a| q.label(a).to_string()).collect()
    }

    /// Composition order, right to left: `e g f` means f, then g, then e.
    pub fn render(&self, q: &Quiver) -> String {
        if self.arrows.is_empty() {
            return format!("e_{}", q.vertex_name(self.start));
        }
        let labels: Vec<&str> = self.arrows.iter().rev().map(|&a| q.label(a)).collect();
        if labels.iter().all(|l| l.chars().count() == 1) {
            labels.concat()
        } else {
            labels.join(" ")
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub rule: String,
    pub detail: String,
    pub location: String,
}

impl Violation {
    fn new(rule: &str, detail: String, location: String) -> Self {
        Violation {
            rule: rule.to_string(),
            detail,
            location,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn rules(&self) -> BTreeSet<&str> {
        self.violations.iter().map(|v| v.rule.as_str()).collect()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            return write!(f, "ok");
        }
        let parts: Vec<String> = self
            .violations
            .iter()
            .map(|v| format!("[{}] {}", v.rule, v.detail))
            .collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// A quiver known to be gentle, connected and admissible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GentleQuiver(Quiver);

impl GentleQuiver {
    pub fn new(q: Quiver) -> Result<Self, QuiverError> {
        let report = q.validate_gentle();
        if report.ok() {
            Ok(GentleQuiver(q))
        } else {
            Err(QuiverError::NotGentle(report))
        }
    }

    pub fn from_data(data: QuiverData) -> Result<Self, QuiverError> {
        GentleQuiver::new(Quiver::new(data)?)
    }

    pub fn quiver(&self) -> &Quiver {
        &self.0
    }

    pub fn opposite(&self) -> GentleQuiver {
        GentleQuiver(self.0.opposite())
    }
}

impl Deref for GentleQuiver {
    type Target = Quiver;
    fn deref(&self) -> &Quiver {
        &self.0
    }
}

impl Serialize for Quiver {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.data().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Quiver {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let data = QuiverData::deserialize(d)?;
        Quiver::new(data).map_err(serde::de::Error::custom)
    }
}

/// Shorthand used by tests and fixtures: arrows as `(label, source, target)`.
pub fn quiver_from_parts(
    name: &str,
    vertices: &[&str],
    arrows: &[(&str, &str, &str)],
    relations: &[(&str, &str)],
) -> Result<Quiver, QuiverError> {
    Quiver::new(QuiverData {
        name: name.to_string(),
        vertices: vertices.iter().map(|s| s.to_string()).collect(),
        arrows: arrows
            .iter()
            .map(|(l, s, t)| Arrow {
                label: l.to_string(),
                source: s.to_string(),
                target: t.to_string(),
            })
            .collect(),
        relations: relations
            .iter()
            .map(|(a, b)| [a.to_string(), b.to_string()])
            .collect(),
    })
}
