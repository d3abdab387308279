//! Hilbert functions of schemes, expected codimensions, secant dimensions, the
//! Terracini Jacobian and Castelnuovo bounds.
//!
//! "General" points are seeded random points. A trial samples fresh points and
//! computes the rank of the condition matrix; the reported value is the maximum over
//! trials. Over a prime field a full-rank result certifies the characteristic-zero
//! generic value, because reduction mod `p` can only lower the rank of an integer matrix.

mod castelnuovo;
mod terracini;

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::exactlinalg::FieldConfig;
use crate::polyspace::{binomial, space_dim};
use crate::schemes::random::{rng, PointSampler, SchemeRng};
use crate::schemes::{condition_matrix, SchemeSpec};
use crate::verifier::CaseId;

pub use castelnuovo::{castelnuovo_upper_bound, CastelnuovoBound};
pub use terracini::{tangent_span_rank, terracini_jacobian_rank, terracini_pair};

/// How general points are drawn and how many attempts are made.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sampling {
    pub field: FieldConfig,
    pub seed: u64,
    pub trials: usize,
    /// Re-run a short result once with a fresh seed (and a different prime) before
    /// reporting it as defective evidence.
    pub retry: bool,
}

impl Default for Sampling {
    fn default() -> Self {
        Sampling {
            field: FieldConfig::default_prime(),
            seed: 0,
            trials: 3,
            retry: true,
        }
    }
}

impl Sampling {
    pub fn new(field: FieldConfig, seed: u64) -> Self {
        Sampling {
            field,
            seed,
            ..Sampling::default()
        }
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = trials.max(1);
        self
    }

    pub fn without_retry(mut self) -> Self {
        self.retry = false;
        self
    }

    pub fn sampler(&self) -> PointSampler {
        PointSampler::new(self.field)
    }
}

/// Seed of trial `t` derived from a base seed.
pub fn trial_seed(seed: u64, t: usize) -> u64 {
    seed.wrapping_add((t as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// `h` equals the length of the scheme.
    Independent,
    /// `h` equals the dimension of the space of forms.
    Fills,
    DefectiveEvidence,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certification {
    #[serde(rename = "char0-lower-bound-certified")]
    Char0LowerBoundCertified,
    ExactOverQ,
    EvidenceOnly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertReport {
    pub case: CaseId,
    pub scheme: BTreeMap<String, usize>,
    pub space_dim: u64,
    pub degree: u64,
    pub expected: u64,
    pub computed: u64,
    pub defect: u64,
    pub verdict: Verdict,
    pub certification: Certification,
    pub field: FieldConfig,
    pub seed: u64,
    pub trials: usize,
    #[serde(default)]
    pub elapsed_ms: u64,
}

impl HilbertReport {
    #[allow(clippy::too_many_arguments)]
    fn assemble(
        case: CaseId,
        spec: &SchemeSpec,
        degree: u64,
        computed: u64,
        field: FieldConfig,
        seed: u64,
        trials: usize,
        started: Instant,
    ) -> Self {
        let space = space_dim(case.n, case.d);
        let expected = degree.min(space);
        let computed = computed.min(expected);
        let verdict = if computed < expected {
            Verdict::DefectiveEvidence
        } else if computed == space {
            Verdict::Fills
        } else {
            Verdict::Independent
        };
        let certification = if !field.is_prime_field() {
            Certification::ExactOverQ
        } else if computed == expected {
            Certification::Char0LowerBoundCertified
        } else {
            Certification::EvidenceOnly
        };
        HilbertReport {
            case,
            scheme: spec.summary(),
            space_dim: space,
            degree,
            expected,
            computed,
            defect: expected - computed,
            verdict,
            certification,
            field,
            seed,
            trials,
            elapsed_ms: started.elapsed().as_millis() as u64,
        }
    }

    pub fn is_expected(&self) -> bool {
        self.defect == 0
    }

    /// Dimension of `I_X(d)` at the computed value.
    pub fn ideal_dim(&self) -> u64 {
        self.space_dim - self.computed
    }
}

/// `min((n+1)k, C(n+d, n))`.
pub fn expected_codim(n: usize, d: usize, k: usize) -> u64 {
    ((n as u64 + 1) * k as u64).min(space_dim(n, d))
}

/// Rank of the condition matrix of a fixed scheme.
pub fn scheme_rank(spec: &SchemeSpec, d: usize, field: FieldConfig) -> Result<usize> {
    field.check_degree(d)?;
    Ok(condition_matrix(spec, d, field)?.rank())
}

/// `dim I_X(d)` for a fixed scheme.
pub fn ideal_dim(spec: &SchemeSpec, d: usize, field: FieldConfig) -> Result<u64> {
    Ok(space_dim(spec.n, d) - scheme_rank(spec, d, field)? as u64)
}

/// Hilbert function of a fixed scheme: one exact rank computation at the given points.
pub fn hilbert_function(spec: &SchemeSpec, d: usize, field: FieldConfig) -> Result<HilbertReport> {
    let started = Instant::now();
    let rank = scheme_rank(spec, d, field)?;
    let degree = spec.conditions_in_degree(d)?;
    let k = spec.summary().get("double").copied().unwrap_or(0);
    Ok(HilbertReport::assemble(
        CaseId::new(spec.n, d, k),
        spec,
        degree,
        rank as u64,
        field,
        0,
        1,
        started,
    ))
}

/// Hilbert function of a scheme with generic slots: `sample` draws one instance from a
/// seeded generator. Trials stop early once the expected value is reached.
pub fn hilbert_sampled<S>(
    case: CaseId,
    d: usize,
    sampling: &Sampling,
    sample: S,
) -> Result<HilbertReport>
where
    S: Fn(&mut SchemeRng, &PointSampler) -> Result<SchemeSpec>,
{
    let started = Instant::now();
    sampling.field.check_degree(d)?;
    let mut best = 0u64;
    let mut trials = 0usize;
    let mut field = sampling.field;
    let mut last_spec = SchemeSpec::new(case.n);
    let mut degree = 0u64;
    let rounds: Vec<(FieldConfig, u64)> = if sampling.retry {
        let retry = if field.is_prime_field() {
            field.retry_field()
        } else {
            field
        };
        vec![
            (field, sampling.seed),
            (retry, sampling.seed ^ 0xA5A5_5A5A_C3C3_3C3C),
        ]
    } else {
        vec![(field, sampling.seed)]
    };
    'outer: for (round_field, round_seed) in rounds {
        field = round_field;
        let sampler = PointSampler::new(round_field);
        for t in 0..sampling.trials.max(1) {
            let mut r = rng(trial_seed(round_seed, t));
            let spec = sample(&mut r, &sampler)?;
            degree = spec.degree()? as u64;
            let expected = degree.min(space_dim(spec.n, d));
            let rank = condition_matrix(&spec, d, round_field)?.rank() as u64;
            trials += 1;
            best = best.max(rank);
            last_spec = spec;
            if best >= expected {
                break 'outer;
            }
        }
    }
    Ok(HilbertReport::assemble(
        case,
        &last_spec,
        degree,
        best,
        field,
        sampling.seed,
        trials,
        started,
    ))
}

/// Hilbert function of `k` general double points of `P^n` in degree `d`.
pub fn hilbert_double_points(
    n: usize,
    d: usize,
    k: usize,
    sampling: &Sampling,
) -> Result<HilbertReport> {
    hilbert_sampled(CaseId::new(n, d, k), d, sampling, |r, s| {
        Ok(s.double_points(n, k, r))
    })
}

/// Projective dimension of `sigma_k(V^{d,n})`: `h(k general double points, d) - 1`.
pub fn secant_dimension(
    n: usize,
    d: usize,
    k: usize,
    sampling: &Sampling,
) -> Result<(i64, HilbertReport)> {
    let report = hilbert_double_points(n, d, k, sampling)?;
    Ok((report.computed as i64 - 1, report))
}

/// Expected projective dimension of `sigma_k(V^{d,n})`.
pub fn expected_secant_dimension(n: usize, d: usize, k: usize) -> i64 {
    expected_codim(n, d, k) as i64 - 1
}

/// `C(n+2,2) - C(n-k+2,2)` for `k <= n+1`: the codimension of quadrics singular at `k`
/// general points.
pub fn quadric_formula(n: usize, k: usize) -> u64 {
    let k = k.min(n + 1);
    binomial(n + 2, 2) - binomial(n + 2 - k, 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expected_values() {
        assert_eq!(expected_codim(3, 4, 9), 35);
        assert_eq!(expected_codim(4, 3, 7), 35);
        assert_eq!(expected_codim(2, 4, 5), 15);
        assert_eq!(quadric_formula(3, 4), 10);
        assert_eq!(quadric_formula(3, 2), 7);
    }

    #[test]
    fn plane_quartics_through_five_double_points() {
        let r = hilbert_double_points(2, 4, 5, &Sampling::default()).unwrap();
        assert_eq!((r.computed, r.expected, r.defect), (14, 15, 1));
        assert_eq!(r.verdict, Verdict::DefectiveEvidence);
        assert_eq!(r.trials, 6);
    }

    #[test]
    fn hermite_interpolation_on_the_line() {
        let r = hilbert_double_points(1, 3, 2, &Sampling::default()).unwrap();
        assert_eq!((r.computed, r.verdict), (4, Verdict::Fills));
        assert_eq!(r.certification, Certification::Char0LowerBoundCertified);
        assert_eq!(r.trials, 1);
    }

    #[test]
    fn report_json_shape() {
        let r = hilbert_double_points(2, 3, 2, &Sampling::default()).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["case"]["k"], 2);
        assert_eq!(v["field"]["kind"], "prime-field");
        assert_eq!(v["verdict"], "independent");
        assert_eq!(v["certification"], "char0-lower-bound-certified");
    }

    #[test]
    fn secant_of_the_veronese_itself() {
        let (dim, _) = secant_dimension(3, 4, 1, &Sampling::default()).unwrap();
        assert_eq!(dim, 3);
    }
}
