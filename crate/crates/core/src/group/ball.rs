//! Breadth-first enumeration of word-metric balls.

use std::collections::HashSet;

use super::context::GroupContext;
use super::element::GroupElement;
use crate::error::{Error, Result};

/// Default cap on the number of elements a ball may hold.
pub const DEFAULT_BALL_BUDGET: usize = 2_000_000;

impl GroupContext {
    /// All elements of length at most `radius`, shortlex-ordered.
    pub fn enumerate_ball(&self, radius: usize) -> Result<Vec<GroupElement>> {
        self.enumerate_ball_with_budget(radius, DEFAULT_BALL_BUDGET)
    }

    pub fn enumerate_ball_with_budget(&self, radius: usize, budget: usize) -> Result<Vec<GroupElement>> {
        Ok(self
            .spheres(radius, budget)?
            .into_iter()
            .flatten()
            .collect())
    }

    /// Spheres `S_0, ..., S_radius` of the Cayley graph for the symmetric
    /// standard generating set, each sorted.
    pub fn spheres(&self, radius: usize, budget: usize) -> Result<Vec<Vec<GroupElement>>> {
        let letters = self.symmetric_generators();
        let id = self.identity();
        let mut seen: HashSet<GroupElement> = HashSet::new();
        seen.insert(id.clone());
        let mut layers = vec![vec![id]];
        let exceeded = || Error::Resource {
            what: format!("ball of radius {radius} in {}", self.describe()),
            bound: budget,
        };
        if budget == 0 {
            return Err(exceeded());
        }
        for _ in 0..radius {
            let mut next = Vec::new();
            for x in layers.last().expect("non-empty") {
                for l in &letters {
                    let y = self.op(x, l)?;
                    if seen.insert(y.clone()) {
                        if seen.len() > budget {
                            return Err(exceeded());
                        }
                        next.push(y);
                    }
                }
            }
            next.sort();
            layers.push(next);
        }
        Ok(layers)
    }

    /// Sizes of the spheres of radius `0..=radius`.
    pub fn sphere_sizes(&self, radius: usize) -> Result<Vec<usize>> {
        Ok(self
            .spheres(radius, DEFAULT_BALL_BUDGET)?
            .iter()
            .map(Vec::len)
            .collect())
    }
}
