//! Gentle quivers, their string and band modules, and generic Jordan forms
//! of nilpotent endomorphisms.

pub mod conditions;
pub mod dsl;
pub mod error;
pub mod exec;
pub mod expr;
pub mod fixtures;
pub mod field;
pub mod iso;
pub mod jordan;
pub mod matrix;
pub mod partition;
pub mod quiver;
pub mod random;
pub mod recover;
pub mod rep;
pub mod strings;
pub mod witness;
pub mod word;
