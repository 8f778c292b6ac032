//! Isomorphism tests for representations.

use serde::Serialize;

use crate::field::Field;
use crate::matrix::Matrix;
use crate::quiver::Quiver;
use crate::rep::{hom_dim, Representation};
use crate::strings;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IsoVerdict {
    Iso,
    NotIso,
    Unknown,
}

/// Decides whether `x` and `y` are isomorphic.
///
/// With both ledgers present this compares the multisets of summands (strings
/// are stored up to inversion, bands up to rotation and inversion with the
/// parameter adjusted). Otherwise it compares invariants: dimensions, ranks of
/// the maps along paths of length at most 3, and Hom dimensions from string
/// modules. When the algebra has finitely many strings, the Hom dimensions from
/// all indecomposables determine the module, so agreement means isomorphic.
pub fn decompose_ledgered<F: Field>(x: &Representation<F>, y: &Representation<F>) -> IsoVerdict {
    if x.same_quiver(y).is_err() {
        return IsoVerdict::NotIso;
    }
    if let (Some(a), Some(b)) = (x.ledger(), y.ledger()) {
        let q = x.quiver();
        let key = |l: &[crate::rep::Summand<F::Elem>]| {
            let mut v: Vec<String> = l.iter().map(|s| s.render(q, x.field())).collect();
            v.sort();
            v
        };
        return if key(a) == key(b) { IsoVerdict::Iso } else { IsoVerdict::NotIso };
    }
    if x.dims() != y.dims() || path_ranks(x) != path_ranks(y) {
        return IsoVerdict::NotIso;
    }
    let q: &Quiver = x.quiver();
    let finite = strings::finitely_many_strings(q);
    let probes = if finite {
        strings::all_strings(q, 2 * q.arrow_count() + 1)
    } else {
        strings::all_strings(q, 3)
    };
    for w in &probes {
        let Ok(m) = Representation::string_module(x.quiver().clone(), x.field().clone(), w) else {
            continue;
        };
        match (hom_dim(&m, x), hom_dim(&m, y)) {
            (Ok(a), Ok(b)) if a == b => {}
            (Ok(_), Ok(_)) => return IsoVerdict::NotIso,
            _ => return IsoVerdict::Unknown,
        }
    }
    if finite {
        IsoVerdict::Iso
    } else {
        IsoVerdict::Unknown
    }
}

/// Ranks of the composite maps along every walk of arrows of length 1 to 3.
fn path_ranks<F: Field>(x: &Representation<F>) -> Vec<usize> {
    let q = x.quiver();
    let f = x.field();
    let mut out = Vec::new();
    let mut frontier: Vec<(usize, Matrix<F::Elem>)> = (0..q.arrow_count()).map(|a| (a, x.map(a).clone())).collect();
    for _ in 0..3 {
        let mut next = Vec::new();
        for (last, m) in &frontier {
            out.push(m.rank(f));
            for &b in q.outgoing(q.target(*last)) {
                next.push((b, x.map(b).mul(m, f)));
            }
        }
        frontier = next;
    }
    out
}
