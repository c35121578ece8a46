//! Vincular pattern avoidance on cyclic permutations.
//!
//! * [`perm`], [`pattern`], [`matcher`]: permutations, patterns and
//!   containment.
//! * [`enumerator`], [`table`], [`reference`]: exact counting with parallel
//!   sharding and reference data.
//! * [`formulas`]: closed forms, recurrences and series for the classes.
//! * [`bijections`]: constructive maps between classes and cyclic orders.
//! * [`avoidability`]: totally vincular sets, witnesses and lattice search.
//! * [`verify`]: property suites.

pub mod avoidability;
pub mod bijections;
pub mod enumerator;
pub mod formulas;
pub mod matcher;
mod par;
pub mod pattern;
pub mod perm;
pub mod reference;
pub mod table;
pub mod verify;
