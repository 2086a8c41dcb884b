//! Group contexts, normal-form elements, automorphisms and subgroups.

mod automorphism;
mod ball;
mod context;
mod element;
mod matrix;
mod parse;
mod subgroup;
mod word;

pub use automorphism::{orbit_of, AutomorphismRule, GroupAutomorphism};
pub use ball::DEFAULT_BALL_BUDGET;
pub use context::GroupContext;
pub use element::GroupElement;
pub use matrix::IntMatrix;
pub use parse::parse_syllables;
pub use subgroup::{Subgroup, SubgroupSpec};
pub use word::{Syllable, Word};
