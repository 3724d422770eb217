//! Rate compatibility from one parent code: nested information sets over a
//! chain of degraded channels, and puncturing of code bits.

mod nested;
mod puncture;

pub use nested::{build_nested_family, NestedFrozenFamily, NestedLevel, NestedOptions, Provenance};
pub use puncture::{
    puncture_llrs, random_pattern, stopping_tree_pattern, PunctureMethod, PuncturingPattern,
};
