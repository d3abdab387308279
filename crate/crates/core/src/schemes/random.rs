//! Seeded random points. Over a prime field coordinates are uniform in `[0, p)`; over
//! the rationals they are uniform integers in `[-bound, bound]`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{SchemeComponent, SchemeSpec};
use crate::error::{Error, Result};
use crate::exactlinalg::{ExactMatrix, FieldConfig};
use crate::polyspace::ProjPoint;

pub const DEFAULT_BOUND: i64 = 1000;

pub type SchemeRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SchemeRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random integers drawn according to the field.
#[derive(Clone, Copy, Debug)]
pub struct PointSampler {
    pub field: FieldConfig,
    pub bound: i64,
}

impl PointSampler {
    pub fn new(field: FieldConfig) -> Self {
        PointSampler {
            field,
            bound: DEFAULT_BOUND,
        }
    }

    pub fn with_bound(mut self, bound: i64) -> Self {
        self.bound = bound.max(1);
        self
    }

    pub fn scalar(&self, rng: &mut SchemeRng) -> BigRational {
        let v = match self.field.prime {
            Some(p) if self.field.is_prime_field() => rng.random_range(0..p) as i64,
            _ => rng.random_range(-self.bound..=self.bound),
        };
        BigRational::from_integer(BigInt::from(v))
    }

    pub fn vector(&self, len: usize, rng: &mut SchemeRng) -> Vec<BigRational> {
        loop {
            let v: Vec<BigRational> = (0..len).map(|_| self.scalar(rng)).collect();
            if v.iter().any(|c| !c.is_zero()) {
                return v;
            }
        }
    }

    pub fn point(&self, n: usize, rng: &mut SchemeRng) -> ProjPoint {
        ProjPoint::new(self.vector(n + 1, rng)).expect("nonzero vector")
    }

    /// A random point of the linear space cut out by `forms` in `P^n`.
    pub fn point_in(
        &self,
        forms: &[Vec<BigRational>],
        n: usize,
        rng: &mut SchemeRng,
    ) -> Result<ProjPoint> {
        let span = if forms.is_empty() {
            ExactMatrix::identity(n + 1, FieldConfig::rationals()).to_rows()
        } else {
            ExactMatrix::from_rows(n + 1, forms, FieldConfig::rationals())?.kernel_basis()
        };
        self.point_in_span(&span, rng)
    }

    /// A random nonzero combination of `span`.
    pub fn point_in_span(
        &self,
        span: &[Vec<BigRational>],
        rng: &mut SchemeRng,
    ) -> Result<ProjPoint> {
        let Some(first) = span.first() else {
            return Err(Error::Degenerate("the linear space is empty".into()));
        };
        loop {
            let c = self.vector(span.len(), rng);
            let mut x = vec![BigRational::zero(); first.len()];
            for (ci, v) in c.iter().zip(span) {
                for (xj, vj) in x.iter_mut().zip(v) {
                    *xj += ci * vj;
                }
            }
            if let Ok(p) = ProjPoint::new(x) {
                return Ok(p);
            }
        }
    }

    pub fn double_points(&self, n: usize, k: usize, rng: &mut SchemeRng) -> SchemeSpec {
        SchemeSpec {
            n,
            components: (0..k)
                .map(|_| SchemeComponent::double(self.point(n, rng)))
                .collect(),
        }
    }
}

pub fn random_point(n: usize, rng: &mut SchemeRng, field: &FieldConfig) -> ProjPoint {
    PointSampler::new(*field).point(n, rng)
}

pub fn random_point_in(
    forms: &[Vec<BigRational>],
    n: usize,
    rng: &mut SchemeRng,
    field: &FieldConfig,
) -> Result<ProjPoint> {
    PointSampler::new(*field).point_in(forms, n, rng)
}

/// `k` random double points of `P^n`.
pub fn random_double_points(
    n: usize,
    k: usize,
    rng: &mut SchemeRng,
    field: &FieldConfig,
) -> SchemeSpec {
    PointSampler::new(*field).double_points(n, k, rng)
}

/// A random linear form, given by its coefficients.
pub fn random_linear_form(n: usize, rng: &mut SchemeRng, field: &FieldConfig) -> Vec<BigRational> {
    PointSampler::new(*field).vector(n + 1, rng)
}
