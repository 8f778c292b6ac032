//! Combinatorial conditions at a vertex and the resulting verdicts.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::error::StringError;
use crate::quiver::Quiver;
use crate::strings::{self, extend_end};
use crate::word::Word;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub holds: bool,
    pub detail: String,
}

impl Check {
    fn yes(detail: impl Into<String>) -> Self {
        Check {
            holds: true,
            detail: detail.into(),
        }
    }
    fn no(detail: impl Into<String>) -> Self {
        Check {
            holds: false,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionFlags {
    pub minuscule: Check,
    pub o: Check,
    pub i: Check,
    pub istar: Check,
    pub iia: Check,
    pub iib: Check,
}

impl ConditionFlags {
    pub fn jr(&self) -> bool {
        self.istar.holds && (self.iia.holds || self.iib.holds)
    }
    pub fn cjr(&self) -> bool {
        self.i.holds && (self.iia.holds || self.iib.holds)
    }
}

/// The linear subquiver carried by the unique maximal string through the vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinearReduction {
    pub string: String,
    pub vertices: Vec<String>,
    pub arrows: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Analysis {
    pub quiver: String,
    pub vertex: String,
    pub flags: ConditionFlags,
    pub jr: bool,
    pub cjr: bool,
    pub reduction: Option<LinearReduction>,
}

/// Shortest walk from `m` back to `m` that is a string and meets `m` only at
/// its ends. Such a walk exists exactly when some string passes `m` twice.
pub fn shortest_return(q: &Quiver, m: usize) -> Result<Option<Word>, StringError> {
    let mut queue = VecDeque::from([Word::Lazy(m)]);
    let mut states = 0;
    while let Some(w) = queue.pop_front() {
        for e in extend_end(q, &w) {
            let end = e.end(q);
            if end == m {
                return Ok(Some(e));
            }
            // A shortest return visits every vertex at most twice.
            let visits = e.vertices(q).iter().filter(|&&v| v == end).count();
            if visits <= 2 {
                states += 1;
                if states > strings::STATE_CAP {
                    return Err(StringError::SearchCap(strings::STATE_CAP));
                }
                queue.push_back(e);
            }
        }
    }
    Ok(None)
}

pub fn condition_minuscule(q: &Quiver, m: usize) -> Result<Check, StringError> {
    Ok(match shortest_return(q, m)? {
        None => Check::yes("no string passes the vertex twice"),
        Some(w) => Check::no(format!("{} passes the vertex twice", w.render(q))),
    })
}

pub fn condition_o(q: &Quiver, m: usize) -> Result<Check, StringError> {
    Ok(match strings::first_revisiting_string(q, m)? {
        None => Check::yes("strings through the vertex visit each vertex at most once"),
        Some(w) => Check::no(format!("{} revisits a vertex", w.canonical(q).render(q))),
    })
}

/// A pair of strings from `m` with a common endpoint, minimal by lengths.
pub fn istar_violation(q: &Quiver, m: usize) -> Result<Option<(Word, Word)>, StringError> {
    let from = strings::strings_from(q, m)?;
    let mut by_end: HashMap<usize, Vec<&Word>> = HashMap::new();
    for w in &from {
        by_end.entry(w.end(q)).or_default().push(w);
    }
    let mut pairs = Vec::new();
    for group in by_end.values() {
        for (x, a) in group.iter().enumerate() {
            for b in &group[x + 1..] {
                let (a, b) = if (a.len(), a.render(q)) <= (b.len(), b.render(q)) { (*a, *b) } else { (*b, *a) };
                pairs.push(((a.len(), b.len(), a.render(q), b.render(q)), a.clone(), b.clone()));
            }
        }
    }
    pairs.sort_by(|x, y| x.0.cmp(&y.0));
    let best = pairs.into_iter().next().map(|(_, a, b)| (a, b));
    Ok(best)
}

pub fn condition_istar(q: &Quiver, m: usize) -> Result<Check, StringError> {
    if strings::first_revisiting_string(q, m)?.is_some() {
        return Ok(Check::no("condition (o) fails"));
    }
    Ok(match istar_violation(q, m)? {
        None => Check::yes("strings from the vertex are determined by their endpoint"),
        Some((a, b)) => Check::no(format!(
            "{} and {} start at the vertex and end at {}",
            a.render(q),
            b.render(q),
            q.vertex_name(a.end(q))
        )),
    })
}

/// A violation of (i): strings `rho`, `nu` through `m` and an arrow outside
/// both whose source lies on `rho` and whose target lies on `nu`.
pub fn i_violation(q: &Quiver, m: usize) -> Result<Option<(Word, Word, usize)>, StringError> {
    let sigma = strings::strings_through(q, m, None)?;
    let supports: Vec<(HashSet<usize>, HashSet<usize>)> = sigma
        .iter()
        .map(|w| (w.support_vertices(q), w.support_arrows()))
        .collect();
    let mut best: Option<(usize, usize, usize)> = None;
    for (x, (v0, a0)) in supports.iter().enumerate() {
        for (y, (v1, a1)) in supports.iter().enumerate() {
            for arrow in 0..q.arrow_count() {
                if a0.contains(&arrow) || a1.contains(&arrow) {
                    continue;
                }
                if v0.contains(&q.source(arrow)) && v1.contains(&q.target(arrow)) {
                    let cost = sigma[x].len() + sigma[y].len();
                    if best.map_or(true, |(bx, by, _)| cost < sigma[bx].len() + sigma[by].len()) {
                        best = Some((x, y, arrow));
                    }
                }
            }
        }
    }
    Ok(best.map(|(x, y, a)| (sigma[x].clone(), sigma[y].clone(), a)))
}

pub fn condition_i(q: &Quiver, m: usize) -> Result<Check, StringError> {
    if strings::first_revisiting_string(q, m)?.is_some() {
        return Ok(Check::no("condition (o) fails"));
    }
    Ok(match i_violation(q, m)? {
        None => Check::yes("no arrow joins the supports of two strings through the vertex"),
        Some((rho, nu, a)) => Check::no(format!(
            "arrow {} runs from {} to {}",
            q.label(a),
            rho.render(q),
            nu.render(q)
        )),
    })
}

pub fn condition_iia(q: &Quiver, m: usize) -> Check {
    let out = q.outgoing(m);
    let inc = q.incoming(m);
    if out.len() > 1 {
        return Check::no("two arrows leave the vertex");
    }
    if inc.len() > 1 {
        return Check::no("two arrows enter the vertex");
    }
    match (inc.first(), out.first()) {
        (Some(&b), Some(&a)) if !q.is_relation(b, a) => Check::no(format!(
            "{} followed by {} is not a relation",
            q.label(b),
            q.label(a)
        )),
        _ => Check::yes("at most one arrow in, at most one out, and they compose to zero"),
    }
}

pub fn condition_iib(q: &Quiver, m: usize) -> Result<Check, StringError> {
    if strings::first_revisiting_string(q, m)?.is_some() {
        return Ok(Check::no("condition (o) fails"));
    }
    let max = strings::maximal_strings_through(q, m)?;
    let rendered: Vec<String> = max.iter().map(|w| w.render(q)).collect();
    Ok(if max.len() <= 1 {
        Check::yes(format!("unique maximal string {}", rendered.join(", ")))
    } else {
        Check::no(format!("maximal strings {}", rendered.join(", ")))
    })
}

pub fn condition_flags(q: &Quiver, m: usize) -> Result<ConditionFlags, StringError> {
    Ok(ConditionFlags {
        minuscule: condition_minuscule(q, m)?,
        o: condition_o(q, m)?,
        i: condition_i(q, m)?,
        istar: condition_istar(q, m)?,
        iia: condition_iia(q, m),
        iib: condition_iib(q, m)?,
    })
}

pub fn decide(q: &Quiver, m: usize) -> Result<Analysis, StringError> {
    let flags = condition_flags(q, m)?;
    let reduction = if flags.i.holds && flags.iib.holds {
        let max = strings::maximal_strings_through(q, m)?;
        max.first().map(|w| {
            let mut vs: Vec<usize> = w.support_vertices(q).into_iter().collect();
            vs.sort_unstable();
            let mut arrows: Vec<usize> = w.support_arrows().into_iter().collect();
            arrows.sort_unstable();
            LinearReduction {
                string: w.render(q),
                vertices: vs.into_iter().map(|v| q.vertex_name(v).to_string()).collect(),
                arrows: arrows.into_iter().map(|a| q.label(a).to_string()).collect(),
            }
        })
    } else {
        None
    };
    Ok(Analysis {
        quiver: q.name().to_string(),
        vertex: q.vertex_name(m).to_string(),
        jr: flags.jr(),
        cjr: flags.cjr(),
        flags,
        reduction,
    })
}
