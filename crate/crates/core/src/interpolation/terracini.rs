use crate::error::Result;
use crate::exactlinalg::{FieldConfig, MatrixField};
use crate::polyspace::{
    derivative_row_in, evaluation_row_in, monomial_basis, pack_rows, ProjPoint,
};
use crate::schemes::random::{rng, PointSampler};
use crate::schemes::{condition_matrix, SchemeComponent, SchemeSpec};
use crate::with_field;
use num_rational::BigRational;
use num_traits::{One, Zero};

struct Params {
    taus: Vec<Vec<BigRational>>,
    lambdas: Vec<BigRational>,
}

fn sample_params(n: usize, k: usize, seed: u64, field: FieldConfig) -> Params {
    let sampler = PointSampler::new(field);
    let mut r = rng(seed);
    let taus = (0..k)
        .map(|_| (0..n).map(|_| sampler.scalar(&mut r)).collect())
        .collect();
    let lambdas = (0..k.saturating_sub(1))
        .map(|_| loop {
            let l = sampler.scalar(&mut r);
            if !l.is_zero() {
                break l;
            }
        })
        .collect();
    Params { taus, lambdas }
}

fn affine_point(tau: &[BigRational]) -> Vec<BigRational> {
    let mut x = Vec::with_capacity(tau.len() + 1);
    x.push(BigRational::one());
    x.extend(tau.iter().cloned());
    x
}

fn jacobian_rank<F: MatrixField>(f: &F, n: usize, d: usize, params: &Params) -> Result<usize> {
    let basis = monomial_basis(n, d);
    let k = params.taus.len();
    let conv = |v: &[BigRational]| {
        f.convert_all(v).ok_or_else(|| {
            crate::Error::InvalidInput("parameter not representable in the field".into())
        })
    };
    let lambdas = conv(&params.lambdas)?;
    let mut phi = vec![f.zero(); basis.len()];
    let mut rows = Vec::with_capacity(k * (n + 1));
    let mut values = Vec::with_capacity(k);
    for (i, tau) in params.taus.iter().enumerate() {
        let x = conv(&affine_point(tau))?;
        let lambda = if i + 1 < k {
            lambdas[i].clone()
        } else {
            f.one()
        };
        let y = evaluation_row_in(f, &x, &basis);
        for (acc, v) in phi.iter_mut().zip(&y) {
            *acc = f.add(acc, &f.mul(&lambda, v));
        }
        for j in 1..=n {
            let mut e = vec![f.zero(); n + 1];
            e[j] = f.one();
            let dy = derivative_row_in(f, &x, &e, &basis);
            rows.push(dy.iter().map(|v| f.mul(&lambda, v)).collect());
        }
        if i + 1 < k {
            values.push(y);
        }
    }
    rows.push(phi);
    rows.extend(values);
    Ok(pack_rows(f, basis.len(), rows).rank())
}

/// Rank of the Jacobian of `Phi(tau, lambda) = sum_{i<k} lambda_i Y(tau^i) + Y(tau^k)`,
/// where `Y` is the Veronese map in the affine chart `x_0 = 1`, at seeded random
/// parameters. The rows are `Phi`, its `kn` partials in the `tau` and its `k - 1`
/// partials in the `lambda`.
pub fn terracini_jacobian_rank(
    n: usize,
    d: usize,
    k: usize,
    seed: u64,
    field: FieldConfig,
) -> Result<usize> {
    field.check_degree(d)?;
    let params = sample_params(n, k, seed, field);
    with_field!(field, |f| jacobian_rank(&f, n, d, &params))
}

/// Rank of the span of the tangent spaces at the points used by
/// [`terracini_jacobian_rank`] with the same seed, i.e. the rank of their double-point
/// condition matrix.
pub fn tangent_span_rank(
    n: usize,
    d: usize,
    k: usize,
    seed: u64,
    field: FieldConfig,
) -> Result<usize> {
    field.check_degree(d)?;
    let params = sample_params(n, k, seed, field);
    let mut spec = SchemeSpec::new(n);
    for tau in &params.taus {
        spec.push(SchemeComponent::double(ProjPoint::new(affine_point(tau))?));
    }
    Ok(condition_matrix(&spec, d, field)?.rank())
}

/// Both ranks at the same parameters.
pub fn terracini_pair(
    n: usize,
    d: usize,
    k: usize,
    seed: u64,
    field: FieldConfig,
) -> Result<(usize, usize)> {
    Ok((
        terracini_jacobian_rank(n, d, k, seed, field)?,
        tangent_span_rank(n, d, k, seed, field)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_cases() {
        let f = FieldConfig::default_prime();
        assert_eq!(terracini_pair(2, 4, 5, 3, f).unwrap(), (14, 14));
        assert_eq!(terracini_pair(1, 3, 2, 3, f).unwrap(), (4, 4));
        assert_eq!(terracini_pair(4, 3, 7, 3, f).unwrap(), (34, 34));
        assert_eq!(
            terracini_pair(2, 3, 2, 9, FieldConfig::rationals()).unwrap(),
            (6, 6)
        );
    }
}
