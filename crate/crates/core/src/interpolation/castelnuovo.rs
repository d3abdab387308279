use serde::{Deserialize, Serialize};

use super::ideal_dim;
use crate::error::{Error, Result};
use crate::exactlinalg::FieldConfig;
use crate::polyspace::space_dim;
use crate::schemes::{trace_residual, HyperplaneChart, SchemeSpec};

/// The two terms of the Castelnuovo inequality
/// `dim I_X(d) <= dim I_res(d-1) + dim I_{X ∩ H, H}(d)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CastelnuovoBound {
    pub residual_ideal_dim: u64,
    pub trace_ideal_dim: u64,
    /// Upper bound for `dim I_X(d)`.
    pub upper_bound: u64,
    pub space_dim: u64,
    /// `h_res(d-1)` on `P^n`.
    pub residual_h: u64,
    /// `h_trace(d)` on `H`.
    pub trace_h: u64,
    /// Lower bound `residual_h + trace_h` for `h_X(d)`.
    pub h_lower_bound: u64,
}

fn ideal_dim_any(spec: &SchemeSpec, d: usize, field: FieldConfig) -> Result<u64> {
    if d == 0 {
        return Ok(if spec.components.is_empty() { 1 } else { 0 });
    }
    ideal_dim(spec, d, field)
}

pub fn castelnuovo_upper_bound(
    spec: &SchemeSpec,
    chart: &HyperplaneChart,
    d: usize,
    field: FieldConfig,
) -> Result<CastelnuovoBound> {
    if spec.n < 2 || d == 0 {
        return Err(Error::InvalidInput(
            "the Castelnuovo bound needs n >= 2 and d >= 1".into(),
        ));
    }
    let (trace, residual) = trace_residual(spec, chart)?;
    let residual_ideal_dim = ideal_dim_any(&residual, d - 1, field)?;
    let trace_ideal_dim = ideal_dim_any(&trace, d, field)?;
    let residual_h = space_dim(spec.n, d - 1) - residual_ideal_dim;
    let trace_h = space_dim(spec.n - 1, d) - trace_ideal_dim;
    Ok(CastelnuovoBound {
        residual_ideal_dim,
        trace_ideal_dim,
        upper_bound: residual_ideal_dim + trace_ideal_dim,
        space_dim: space_dim(spec.n, d),
        residual_h,
        trace_h,
        h_lower_bound: residual_h + trace_h,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interpolation::scheme_rank;
    use crate::schemes::random::{rng, PointSampler};
    use crate::schemes::SchemeComponent;

    #[test]
    fn empty_scheme_is_pascal() {
        let chart = HyperplaneChart::coordinate(3, 0);
        let b =
            castelnuovo_upper_bound(&SchemeSpec::new(3), &chart, 5, FieldConfig::default_prime())
                .unwrap();
        assert_eq!(b.upper_bound, space_dim(3, 5));
        assert_eq!(b.h_lower_bound, 0);
    }

    #[test]
    fn eight_double_points_in_p3_on_quartics() {
        let field = FieldConfig::default_prime();
        let chart = HyperplaneChart::coordinate(3, 3);
        let sampler = PointSampler::new(field);
        let mut r = rng(5);
        let mut spec = SchemeSpec::new(3);
        for _ in 0..4 {
            spec.push(SchemeComponent::double(
                sampler
                    .point_in(&[chart.form().to_vec()], 3, &mut r)
                    .unwrap(),
            ));
        }
        spec.extend(sampler.double_points(3, 4, &mut r)).unwrap();
        let b = castelnuovo_upper_bound(&spec, &chart, 4, field).unwrap();
        assert_eq!(b.upper_bound, 35 - 32);
        assert_eq!(b.h_lower_bound, 32);
        assert!(scheme_rank(&spec, 4, field).unwrap() as u64 >= b.h_lower_bound);
    }
}
