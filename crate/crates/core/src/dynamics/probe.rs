use num::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expectation::SubalgebraDescriptor;
use crate::group::GroupElement;
use crate::rational::{self, Rational};

use super::sequence::{ConjugatorSequence, SeparationCertificate};

/// Default tolerance `10⁻³` for the unconfinement verdict.
pub fn default_epsilon() -> Rational {
    rational::rat(1, 1000)
}

/// One step of a probe.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepRecord {
    pub step: usize,
    pub conjugator: String,
    /// Shortlex-least window element attaining the maximum.
    pub argmax: String,
    #[serde(skip)]
    pub value: Rational,
    pub value_exact: String,
    pub value_decimal: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<SeparationCertificate>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdicts {
    pub strictly_decreasing: bool,
    pub nonincreasing: bool,
    pub epsilon: String,
    /// Final value below `epsilon`.
    pub unconfinement_witnessed: bool,
    /// Shortlex-least window element whose nonzero value is the same at every step.
    pub constant_at: Option<String>,
    pub constant_value: Option<String>,
    /// Fewer steps than requested were available.
    pub partial: bool,
}

impl Verdicts {
    /// Human-readable summary of the flags.
    pub fn summary(&self) -> String {
        if let (Some(g), Some(v)) = (&self.constant_at, &self.constant_value) {
            format!("confinement-consistent: bounded away from delta_e on window (value {v} at {g})")
        } else if self.unconfinement_witnessed {
            format!("unconfinement witnessed at tolerance {}", self.epsilon)
        } else {
            "inconclusive on window".to_string()
        }
    }
}

/// Step-by-step maxima of `‖E_M(λ_{s⁻¹gs})‖²` over a window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecayReport {
    pub scenario: String,
    pub descriptor: String,
    pub context: String,
    pub sequence: String,
    pub radius: usize,
    pub steps: Vec<StepRecord>,
    pub verdicts: Verdicts,
}

impl DecayReport {
    pub fn with_scenario(mut self, id: &str) -> Self {
        self.scenario = id.to_string();
        self
    }

    pub fn values(&self) -> Vec<Rational> {
        self.steps.iter().map(|s| s.value.clone()).collect()
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Input(e.to_string()))
    }

    /// Columns `step, conjugator, value_exact, value_decimal`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Input(e.to_string());
        w.write_record(["step", "conjugator", "value_exact", "value_decimal"]).map_err(io)?;
        for s in &self.steps {
            w.write_record([s.step.to_string().as_str(), &s.conjugator, &s.value_exact, &s.value_decimal])
                .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Input(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Input(e.to_string()))
    }
}

struct StepValues {
    label: String,
    values: Vec<Rational>,
    certificate: Option<SeparationCertificate>,
}

fn assemble(
    descriptor: String,
    context: String,
    sequence: String,
    radius: usize,
    window: &[(GroupElement, String)],
    steps: Vec<StepValues>,
    partial: bool,
    epsilon: &Rational,
) -> DecayReport {
    let mut records = Vec::with_capacity(steps.len());
    for (i, s) in steps.iter().enumerate() {
        let mut best = 0usize;
        for (j, v) in s.values.iter().enumerate() {
            if *v > s.values[best] {
                best = j;
            }
        }
        let value = s.values.get(best).cloned().unwrap_or_else(Rational::zero);
        records.push(StepRecord {
            step: i + 1,
            conjugator: s.label.clone(),
            argmax: window.get(best).map(|w| w.1.clone()).unwrap_or_default(),
            value_exact: rational::to_exact(&value),
            value_decimal: rational::to_decimal(&value),
            value,
            certificate: s.certificate.clone(),
        });
    }
    let vals: Vec<&Rational> = records.iter().map(|r| &r.value).collect();
    let strictly_decreasing = vals.windows(2).all(|w| w[1] < w[0]);
    let nonincreasing = vals.windows(2).all(|w| w[1] <= w[0]);
    let unconfinement_witnessed = vals.last().map(|v| *v < epsilon).unwrap_or(false);
    let constant = (0..window.len()).find(|&j| {
        let first = steps.first().map(|s| &s.values[j]);
        match first {
            Some(v) if !v.is_zero() => steps.iter().all(|s| &s.values[j] == v),
            _ => false,
        }
    });
    let verdicts = Verdicts {
        strictly_decreasing,
        nonincreasing,
        epsilon: rational::to_exact(epsilon),
        unconfinement_witnessed,
        constant_at: constant.map(|j| window[j].1.clone()),
        constant_value: constant.map(|j| rational::to_exact(&steps[0].values[j])),
        partial,
    };
    DecayReport { scenario: String::new(), descriptor, context, sequence, radius, steps: records, verdicts }
}

/// Evaluates `max_{e≠g, ℓ(g)≤R} φ_M(s⁻¹gs)` along the sequence.
pub fn confinement_probe(
    m: &SubalgebraDescriptor,
    seq: &ConjugatorSequence,
    radius: usize,
    steps: usize,
    epsilon: &Rational,
) -> Result<DecayReport> {
    let ctx = m.context();
    let window: Vec<(GroupElement, String)> = ctx
        .enumerate_ball(radius)?
        .into_iter()
        .filter(|g| !ctx.is_identity(g))
        .map(|g| {
            let s = ctx.format(&g);
            (g, s)
        })
        .collect();
    let generated = seq.generate(ctx, steps)?;
    let per_step = generated
        .conjugators
        .par_iter()
        .zip(generated.certificates.par_iter())
        .map(|(s, cert)| {
            let values = window
                .iter()
                .map(|(g, _)| m.phi_value(&ctx.conj_inv(s, g)?))
                .collect::<Result<Vec<_>>>()?;
            Ok(StepValues { label: ctx.format(s), values, certificate: cert.clone() })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble(
        m.name(),
        ctx.describe(),
        seq.name(ctx),
        radius,
        &window,
        per_step,
        generated.exhausted,
        epsilon,
    ))
}

/// Evaluates `max_{e≠g, ℓ(g)≤R} φ_{M_k}(g)` along a sequence of descriptors on one context.
pub fn sequence_probe(descriptors: &[SubalgebraDescriptor], radius: usize, epsilon: &Rational) -> Result<DecayReport> {
    let first = descriptors
        .first()
        .ok_or_else(|| Error::Input("empty descriptor sequence".into()))?;
    let ctx = first.context();
    for d in descriptors {
        if d.context() != ctx {
            return Err(Error::ContextMismatch(format!("{} vs {}", d.context().describe(), ctx.describe())));
        }
    }
    let window: Vec<(GroupElement, String)> = ctx
        .enumerate_ball(radius)?
        .into_iter()
        .filter(|g| !ctx.is_identity(g))
        .map(|g| {
            let s = ctx.format(&g);
            (g, s)
        })
        .collect();
    let per_step = descriptors
        .par_iter()
        .map(|d| {
            let values = window.iter().map(|(g, _)| d.phi_value(g)).collect::<Result<Vec<_>>>()?;
            Ok(StepValues { label: d.name(), values, certificate: None })
        })
        .collect::<Result<Vec<_>>>()?;
    let names = descriptors.iter().map(|d| d.name()).collect::<Vec<_>>().join(", ");
    Ok(assemble(
        format!("sequence [{names}]"),
        ctx.describe(),
        "descriptor sequence".into(),
        radius,
        &window,
        per_step,
        false,
        epsilon,
    ))
}
