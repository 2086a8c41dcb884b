use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::matrix::IntMatrix;
use super::word::Word;

/// An element of one of the supported groups, stored in normal form.
///
/// Elements do not carry their context; every operation goes through a
/// [`GroupContext`](super::GroupContext), which checks that the shape matches.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupElement {
    /// Free group or free product of cyclic groups.
    Word(Word),
    /// Direct product, one component per factor.
    Tuple(Vec<GroupElement>),
    /// `base · u^twist` in a semidirect product by a finite-order automorphism.
    Twisted { base: Box<GroupElement>, twist: u32 },
    /// Special linear group over the integers.
    Matrix(IntMatrix),
}

impl GroupElement {
    pub fn as_word(&self) -> Option<&Word> {
        match self {
            GroupElement::Word(w) => Some(w),
            _ => None,
        }
    }

    pub fn as_matrix(&self) -> Option<&IntMatrix> {
        match self {
            GroupElement::Matrix(m) => Some(m),
            _ => None,
        }
    }

    fn rank(&self) -> u8 {
        match self {
            GroupElement::Word(_) => 0,
            GroupElement::Tuple(_) => 1,
            GroupElement::Twisted { .. } => 2,
            GroupElement::Matrix(_) => 3,
        }
    }

    /// Letter count used as the primary ordering key (0 for matrices).
    fn size(&self) -> usize {
        match self {
            GroupElement::Word(w) => w.len(),
            GroupElement::Tuple(v) => v.iter().map(GroupElement::size).sum(),
            GroupElement::Twisted { base, twist } => base.size() + usize::from(*twist != 0),
            GroupElement::Matrix(_) => 0,
        }
    }
}

/// Shortlex-compatible total order: smaller letter count first, then
/// componentwise. On plain words this is exactly shortlex.
impl Ord for GroupElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank()
            .cmp(&other.rank())
            .then_with(|| self.size().cmp(&other.size()))
            .then_with(|| match (self, other) {
                (GroupElement::Word(a), GroupElement::Word(b)) => a.cmp(b),
                (GroupElement::Tuple(a), GroupElement::Tuple(b)) => a.cmp(b),
                (
                    GroupElement::Twisted { base: a, twist: s },
                    GroupElement::Twisted { base: b, twist: t },
                ) => s.cmp(t).then_with(|| a.cmp(b)),
                (GroupElement::Matrix(a), GroupElement::Matrix(b)) => a.cmp(b),
                _ => Ordering::Equal,
            })
    }
}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
