//! Bundled example quivers, embedded at compile time.

use std::sync::Arc;

use crate::dsl::parse_quiver;
use crate::quiver::GentleQuiver;

pub const SOURCES: &[(&str, &str)] = &[
    ("point", include_str!("../fixtures/point.quiver")),
    ("a2", include_str!("../fixtures/a2.quiver")),
    ("a3", include_str!("../fixtures/a3.quiver")),
    ("first_gentle", include_str!("../fixtures/first_gentle.quiver")),
    ("gentle8", include_str!("../fixtures/gentle8.quiver")),
    ("stringex", include_str!("../fixtures/stringex.quiver")),
    ("bandex", include_str!("../fixtures/bandex.quiver")),
    ("morphex", include_str!("../fixtures/morphex.quiver")),
    ("jrex1", include_str!("../fixtures/jrex1.quiver")),
    ("cjrneed1", include_str!("../fixtures/cjrneed1.quiver")),
    ("kronecker", include_str!("../fixtures/kronecker.quiver")),
    ("minnot1", include_str!("../fixtures/minnot1.quiver")),
    ("minnot2", include_str!("../fixtures/minnot2.quiver")),
    ("cycle_free", include_str!("../fixtures/cycle_free.quiver")),
];

pub fn source(name: &str) -> Option<&'static str> {
    SOURCES.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

/// A bundled gentle quiver. Panics on unknown names or non-gentle fixtures.
pub fn load(name: &str) -> Arc<GentleQuiver> {
    let text = source(name).unwrap_or_else(|| panic!("no fixture named {name}"));
    let q = parse_quiver(text).unwrap_or_else(|e| panic!("fixture {name}: {e}"));
    Arc::new(GentleQuiver::new(q).unwrap_or_else(|e| panic!("fixture {name}: {e}")))
}

/// Every bundled quiver that is gentle and admissible.
pub fn gentle() -> Vec<(&'static str, Arc<GentleQuiver>)> {
    SOURCES
        .iter()
        .filter(|(n, _)| *n != "cycle_free")
        .map(|(n, _)| (*n, load(n)))
        .collect()
}
