use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::CaseId;
use crate::error::Result;
use crate::interpolation::{hilbert_sampled, trial_seed, HilbertReport, Sampling};
use crate::polyspace::{binomial, space_dim};
use crate::schemes::random::{rng, PointSampler, SchemeRng};
use crate::schemes::{condition_matrix, SchemeComponent, SchemeSpec};

/// `k_n = floor((n+3)(n+2)/6)` and `delta_n = C(n+3,3) - (n+1) k_n`.
pub fn cubic_numbers(n: usize) -> (usize, usize) {
    let k = (n + 3) * (n + 2) / 6;
    let delta = binomial(n + 3, 3) as usize - (n + 1) * k;
    (k, delta)
}

/// One exact dimension count on a sampled configuration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceCheck {
    pub name: String,
    pub n: usize,
    /// Value of `dim I(3)` predicted for general choices.
    pub expected_dim: u64,
    pub computed_dim: u64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubicsReport {
    pub n: usize,
    pub k_n: usize,
    pub delta_n: usize,
    pub report: HilbertReport,
    /// `h` equals the dimension of the space of cubics.
    pub full: bool,
    pub exception: bool,
    pub instances: Vec<InstanceCheck>,
}

impl CubicsReport {
    /// Full rank where expected, defective for `n = 4`, and every instance check holds.
    pub fn agrees(&self) -> bool {
        self.full != self.exception && self.instances.iter().all(|c| c.holds)
    }
}

fn random_subspace(
    n: usize,
    codim: usize,
    r: &mut SchemeRng,
    s: &PointSampler,
) -> Vec<Vec<BigRational>> {
    (0..codim).map(|_| s.vector(n + 1, r)).collect()
}

fn doubles_on(
    spec: &mut SchemeSpec,
    forms: &[Vec<BigRational>],
    count: usize,
    r: &mut SchemeRng,
    s: &PointSampler,
) -> Result<()> {
    for _ in 0..count {
        spec.push(SchemeComponent::double(s.point_in(forms, spec.n, r)?));
    }
    Ok(())
}

/// Smallest `dim I(3)` over the trials.
fn min_dim<S>(n: usize, sampling: &Sampling, target: u64, sample: S) -> Result<u64>
where
    S: Fn(&mut SchemeRng, &PointSampler) -> Result<SchemeSpec>,
{
    let total = space_dim(n, 3);
    let sampler = sampling.sampler();
    let mut best = total;
    for t in 0..sampling.trials.max(1) {
        let mut r = rng(trial_seed(sampling.seed, t));
        let spec = sample(&mut r, &sampler)?;
        let rank = condition_matrix(&spec, 3, sampling.field)?.rank() as u64;
        best = best.min(total - rank);
        if best <= target {
            break;
        }
    }
    Ok(best)
}

fn check(name: &str, n: usize, expected_dim: u64, computed_dim: u64) -> InstanceCheck {
    InstanceCheck {
        name: name.to_string(),
        n,
        expected_dim,
        computed_dim,
        holds: expected_dim == computed_dim,
    }
}

/// Dimension counts for cubics containing general codimension-3 subspaces, with and
/// without extra singular points, in `P^4 .. P^8`.
fn instance_checks(n: usize, sampling: &Sampling) -> Result<Vec<InstanceCheck>> {
    let mut out = Vec::new();
    let three = |r: &mut SchemeRng, s: &PointSampler| -> Vec<Vec<Vec<BigRational>>> {
        (0..3).map(|_| random_subspace(n, 3, r, s)).collect()
    };
    let lmn_dim = match n {
        4 => Some(23),
        5 => Some(26),
        6 | 7 => Some(27),
        _ => None,
    };
    if let Some(want) = lmn_dim {
        let bare = min_dim(n, sampling, want, |r, s| {
            let mut spec = SchemeSpec::new(n);
            for forms in three(r, s) {
                spec.push(SchemeComponent::ContainLinear { forms });
            }
            Ok(spec)
        })?;
        out.push(check("cubics containing L, M, N", n, want, bare));
        let after = if n == 4 { 1 } else { 0 };
        let singular = min_dim(n, sampling, after, |r, s| {
            let mut spec = SchemeSpec::new(n);
            for forms in three(r, s) {
                doubles_on(&mut spec, &forms, 3, r, s)?;
                spec.push(SchemeComponent::ContainLinear { forms });
            }
            Ok(spec)
        })?;
        out.push(check(
            "cubics containing L, M, N singular at 3 points of each",
            n,
            after,
            singular,
        ));
    }
    if (5..=7).contains(&n) {
        let want = 9 * (n as u64 - 1);
        let bare = min_dim(n, sampling, want, |r, s| {
            let mut spec = SchemeSpec::new(n);
            for forms in three(r, s).into_iter().take(2) {
                spec.push(SchemeComponent::ContainLinear { forms });
            }
            Ok(spec)
        })?;
        out.push(check("cubics containing L, M", n, want, bare));
        let singular = min_dim(n, sampling, 0, |r, s| {
            let mut spec = SchemeSpec::new(n);
            for forms in three(r, s).into_iter().take(2) {
                doubles_on(&mut spec, &forms, n - 2, r, s)?;
                spec.push(SchemeComponent::ContainLinear { forms });
            }
            doubles_on(&mut spec, &[], 3, r, s)?;
            Ok(spec)
        })?;
        out.push(check(
            "cubics containing L, M singular at n-2 points of each and 3 general points",
            n,
            0,
            singular,
        ));
    }
    if (5..=8).contains(&n) {
        let (_, delta) = cubic_numbers(n);
        let on_l = if n % 3 == 2 {
            (n + 1) * (n - 2) / 6
        } else {
            n * (n - 1) / 6
        };
        let singular = min_dim(n, sampling, 0, |r, s| {
            let forms = random_subspace(n, 3, r, s);
            let mut spec = SchemeSpec::new(n);
            doubles_on(&mut spec, &forms, on_l, r, s)?;
            doubles_on(&mut spec, &[], n + 1, r, s)?;
            if n % 3 == 2 {
                // length delta, meeting L in length delta - 1
                let q = s.point_in(&forms, n, r)?;
                let span_l = crate::exactlinalg::ExactMatrix::from_rows(
                    n + 1,
                    &forms,
                    crate::exactlinalg::FieldConfig::rationals(),
                )?
                .kernel_basis();
                let mut dirs = Vec::new();
                for _ in 0..delta.saturating_sub(2) {
                    dirs.push(s.point_in_span(&span_l, r)?.coords().to_vec());
                }
                dirs.push(s.vector(n + 1, r));
                spec.push(SchemeComponent::Jet { point: q, dirs });
            }
            spec.push(SchemeComponent::ContainLinear { forms });
            Ok(spec)
        })?;
        out.push(check(
            "cubics containing L singular at points of L and n+1 general points",
            n,
            0,
            singular,
        ));
    }
    Ok(out)
}

/// The cubic case: `k_n` general double points, plus a jet of length `delta_n` when
/// `n = 2 mod 3`, impose independent conditions on cubics for `n != 4`; for `n = 4` the
/// seven double points are defective. For `4 <= n <= 8` the supporting dimension counts
/// with codimension-3 subspaces are also run.
pub fn verify_cubics(n: usize, sampling: &Sampling) -> Result<CubicsReport> {
    let report = cubic_rank(n, sampling)?;
    let (k, delta) = cubic_numbers(n);
    let full = report.computed == report.space_dim;
    let instances = if (4..=8).contains(&n) {
        instance_checks(n, sampling)?
    } else {
        Vec::new()
    };
    Ok(CubicsReport {
        n,
        k_n: k,
        delta_n: if n % 3 == 2 { delta } else { 0 },
        full,
        exception: n == 4,
        report,
        instances,
    })
}

/// Hilbert function in degree 3 of `k_n` general double points, plus a general jet of
/// length `delta_n` when `n = 2 mod 3`.
pub fn cubic_rank(n: usize, sampling: &Sampling) -> Result<HilbertReport> {
    if n < 2 {
        return Err(crate::Error::InvalidInput(
            "the cubic check needs n >= 2".into(),
        ));
    }
    let (k, delta) = cubic_numbers(n);
    let with_jet = n % 3 == 2 && delta > 0;
    hilbert_sampled(CaseId::new(n, 3, k), 3, sampling, |r, s| {
        let mut spec = s.double_points(n, k, r);
        if with_jet {
            let point = s.point(n, r);
            let dirs = (0..delta - 1).map(|_| s.vector(n + 1, r)).collect();
            spec.push(SchemeComponent::Jet { point, dirs });
        }
        Ok(spec)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers() {
        assert_eq!(cubic_numbers(5), (9, 2));
        assert_eq!(cubic_numbers(7), (15, 0));
        assert_eq!(cubic_numbers(8), (18, 3));
        assert_eq!(cubic_numbers(9), (22, 0));
        assert_eq!(cubic_numbers(4), (7, 0));
    }

    #[test]
    fn p3_and_p4() {
        let s = Sampling::default();
        let r3 = verify_cubics(3, &s).unwrap();
        assert!(r3.full && r3.agrees());
        let r4 = verify_cubics(4, &s).unwrap();
        assert!(!r4.full && r4.exception);
        assert_eq!(r4.report.computed, 34);
        assert!(r4.agrees(), "{:?}", r4.instances);
    }
}
