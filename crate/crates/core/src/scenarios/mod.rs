//! Named, self-checking reproductions of worked examples.

mod algebraic;
mod chains;
mod decay;
mod exotic;

use std::fmt::Display;

use serde::{Deserialize, Serialize};

use crate::dynamics::DecayReport;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Why an expected value is expected.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    /// A fixed reference constant.
    Reference,
    /// An independent computation of the same quantity.
    Oracle,
    /// Holds by construction.
    Definition,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Assertion {
    pub name: String,
    pub expression: String,
    pub expected: String,
    pub actual: String,
    pub basis: Basis,
    pub pass: bool,
}

/// Optional overrides; every scenario has its own defaults.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioParams {
    pub radius: Option<usize>,
    pub steps: Option<usize>,
    pub conj_radius: Option<usize>,
    pub rank: Option<u32>,
    pub seed: Option<u64>,
}

/// Parameters after defaults are applied.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResolvedParams {
    pub radius: usize,
    pub steps: usize,
    pub conj_radius: usize,
    pub rank: u32,
    pub seed: u64,
}

pub const DEFAULT_SEED: u64 = 7;

#[derive(Clone, Copy, Debug)]
struct Defaults {
    radius: usize,
    steps: usize,
    conj_radius: usize,
    rank: u32,
}

impl ScenarioParams {
    fn resolve(&self, d: Defaults) -> ResolvedParams {
        ResolvedParams {
            radius: self.radius.unwrap_or(d.radius),
            steps: self.steps.unwrap_or(d.steps),
            conj_radius: self.conj_radius.unwrap_or(d.conj_radius),
            rank: self.rank.unwrap_or(d.rank),
            seed: self.seed.unwrap_or(DEFAULT_SEED),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScenarioReport {
    pub id: String,
    pub description: String,
    pub params: ResolvedParams,
    pub notes: Vec<String>,
    pub assertions: Vec<Assertion>,
    pub probes: Vec<DecayReport>,
    pub pass: bool,
}

impl ScenarioReport {
    pub fn failures(&self) -> impl Iterator<Item = &Assertion> {
        self.assertions.iter().filter(|a| !a.pass)
    }

    pub fn assertion(&self, name: &str) -> Option<&Assertion> {
        self.assertions.iter().find(|a| a.name == name)
    }
}

/// Accumulates assertions for one scenario.
#[derive(Default)]
pub(crate) struct Checks {
    items: Vec<Assertion>,
    notes: Vec<String>,
    probes: Vec<DecayReport>,
}

impl Checks {
    pub(crate) fn eq<T: Display + PartialEq>(&mut self, name: &str, expression: &str, expected: T, actual: T, basis: Basis) {
        self.items.push(Assertion {
            name: name.into(),
            expression: expression.into(),
            pass: expected == actual,
            expected: expected.to_string(),
            actual: actual.to_string(),
            basis,
        });
    }

    pub(crate) fn eq_rat(&mut self, name: &str, expression: &str, expected: &Rational, actual: &Rational, basis: Basis) {
        self.eq(name, expression, rational::to_exact(expected), rational::to_exact(actual), basis);
    }

    pub(crate) fn holds(&mut self, name: &str, expression: &str, ok: bool, detail: impl Into<String>, basis: Basis) {
        self.items.push(Assertion {
            name: name.into(),
            expression: expression.into(),
            expected: "true".into(),
            actual: if ok { "true".into() } else { format!("false ({})", detail.into()) },
            basis,
            pass: ok,
        });
    }

    pub(crate) fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub(crate) fn probe(&mut self, report: DecayReport) {
        self.probes.push(report);
    }
}

type Runner = fn(&ResolvedParams, &mut Checks) -> Result<()>;

struct Entry {
    id: &'static str,
    description: &'static str,
    defaults: Defaults,
    run: Runner,
}

const fn defaults(radius: usize, steps: usize, conj_radius: usize, rank: u32) -> Defaults {
    Defaults { radius, steps, conj_radius, rank }
}

const CATALOG: &[Entry] = &[
    Entry {
        id: "chabauty_normal_chain",
        description: "indicator windows of subgroup chains and the matching subgroup-algebra probes",
        defaults: defaults(10, 6, 0, 2),
        run: chains::chabauty_normal_chain,
    },
    Entry {
        id: "exotic_cyclic",
        description: "cyclic shift on F_n: the orbit of a_1 keeps value 1/n",
        defaults: defaults(2, 0, 3, 3),
        run: exotic::exotic_cyclic,
    },
    Entry {
        id: "exotic_flip",
        description: "coordinate flip on F_n x F_n: the orbit of (a, e) keeps value 1/2",
        defaults: defaults(2, 4, 4, 2),
        run: exotic::exotic_flip,
    },
    Entry {
        id: "exotic_free_swap",
        description: "generator swap on F_2: the orbit of a keeps value 1/2",
        defaults: defaults(3, 0, 4, 2),
        run: exotic::exotic_free_swap,
    },
    Entry {
        id: "exotic_product_permutation",
        description: "cyclic coordinate permutation on F_2^k: the orbit of (a, e, ..., e) keeps value 1/k",
        defaults: defaults(2, 0, 3, 3),
        run: exotic::exotic_product_permutation,
    },
    Entry {
        id: "finite_dim_unconfined",
        description: "the two-projection algebra in Q[Z*Z/2] probed along an icc separation sequence",
        defaults: defaults(2, 4, 0, 2),
        run: decay::finite_dim_unconfined,
    },
    Entry {
        id: "generator_masa_unconfined",
        description: "L(<a_1>) in L(F_n) probed along the generator separation construction",
        defaults: defaults(3, 4, 2, 2),
        run: decay::generator_masa_unconfined,
    },
    Entry {
        id: "index_four_obstruction",
        description: "e11 s^-k e22 s^k e11 is nonzero in Q[Z*Z/2] for k = 1..steps",
        defaults: defaults(0, 8, 0, 2),
        run: algebraic::index_four_obstruction,
    },
    Entry {
        id: "noncompact_cylinder",
        description: "cylinder-function arithmetic forcing a non-projection p_1 = 1/2",
        defaults: defaults(0, 0, 0, 2),
        run: algebraic::noncompact_cylinder,
    },
    Entry {
        id: "pingpong_certificate",
        description: "Z*Z/2 inside SL(3,Z): ping-pong sets and nontriviality of reduced words",
        defaults: defaults(10, 32, 0, 2),
        run: algebraic::pingpong_certificate,
    },
    Entry {
        id: "radial_masa_unconfined",
        description: "the radial subalgebra of L(F_n) probed along an icc separation sequence",
        defaults: defaults(2, 8, 0, 2),
        run: decay::radial_masa_unconfined,
    },
    Entry {
        id: "radial_nonconvergence",
        description: "conjugating the radial subalgebra by powers of a_1 drives window values to 0",
        defaults: defaults(3, 6, 0, 2),
        run: decay::radial_nonconvergence,
    },
    Entry {
        id: "semidirect_radial",
        description: "A (x) L(Z/2) in L(F_2 x| Z/2) probed along h_n = a^n b^n",
        defaults: defaults(2, 6, 0, 2),
        run: decay::semidirect_radial,
    },
    Entry {
        id: "sl3_inverse_transpose",
        description: "inverse transpose on SL(3,Z): characteristic polynomials separate g_0 from its image",
        defaults: defaults(0, 24, 3, 3),
        run: algebraic::sl3_inverse_transpose,
    },
];

/// `(id, description)` for every scenario, sorted by id.
pub fn catalog() -> Vec<(&'static str, &'static str)> {
    CATALOG.iter().map(|e| (e.id, e.description)).collect()
}

pub fn run_scenario(id: &str, params: &ScenarioParams) -> Result<ScenarioReport> {
    let entry = CATALOG
        .iter()
        .find(|e| e.id == id)
        .ok_or_else(|| Error::Input(format!("unknown scenario {id:?}")))?;
    let params = params.resolve(entry.defaults);
    let mut checks = Checks::default();
    (entry.run)(&params, &mut checks)?;
    let pass = checks.items.iter().all(|a| a.pass);
    Ok(ScenarioReport {
        id: entry.id.into(),
        description: entry.description.into(),
        params,
        notes: checks.notes,
        assertions: checks.items,
        probes: checks.probes,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_is_sorted_and_complete() {
        let ids: Vec<&str> = catalog().into_iter().map(|(id, _)| id).collect();
        let mut sorted = ids.clone();
        sorted.sort();
        assert_eq!(ids, sorted);
        assert_eq!(ids.len(), 14);
    }

    #[test]
    fn unknown_id() {
        assert!(matches!(run_scenario("nope", &ScenarioParams::default()), Err(Error::Input(_))));
    }

    #[test]
    fn every_scenario_passes_with_defaults() {
        for (id, _) in catalog() {
            let report = run_scenario(id, &ScenarioParams::default()).unwrap();
            let failed: Vec<_> = report.failures().map(|a| a.name.clone()).collect();
            assert!(report.pass, "{id}: {failed:?}");
            assert!(!report.assertions.is_empty(), "{id}");
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let p = ScenarioParams::default();
        for id in ["sl3_inverse_transpose", "pingpong_certificate", "radial_nonconvergence"] {
            assert_eq!(run_scenario(id, &p).unwrap(), run_scenario(id, &p).unwrap());
        }
    }
}
