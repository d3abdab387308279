//! Binary forms: catalecticant membership in secants of the rational normal curve,
//! Sylvester's covariant and the canonical form of odd-degree binary forms.
//!
//! A binary form of degree `d` is stored as `a_0..a_d` with
//! `f = sum C(d,i) a_i x^(d-i) y^i`, so its catalecticants are Hankel matrices in the `a_i`.

mod decompose;
mod poly;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlinalg::{ExactMatrix, FieldConfig};
use crate::polyspace::{binomial, exact, power_sum_expand, Form};

pub use decompose::{
    decompose_odd, random_odd_instance, verify_decomposition, Decomposition, Term, DEFAULT_TOL,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinaryForm {
    pub d: usize,
    #[serde(
        serialize_with = "exact::serialize_vec",
        deserialize_with = "exact::deserialize_vec"
    )]
    pub a: Vec<BigRational>,
}

fn q(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

fn binom_q(n: usize, k: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(binomial(n, k)))
}

impl BinaryForm {
    /// From the normalized coefficients `a_i`.
    pub fn new(a: Vec<BigRational>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::InvalidInput(
                "a binary form needs at least one coefficient".into(),
            ));
        }
        Ok(BinaryForm { d: a.len() - 1, a })
    }

    pub fn from_integers(a: &[i64]) -> Result<Self> {
        Self::new(a.iter().map(|&v| q(v)).collect())
    }

    /// From plain coefficients `c_i` of `x^(d-i) y^i`.
    pub fn from_coeffs(c: Vec<BigRational>) -> Result<Self> {
        let d = c
            .len()
            .checked_sub(1)
            .ok_or_else(|| Error::InvalidInput("no coefficients".into()))?;
        Self::new(
            c.into_iter()
                .enumerate()
                .map(|(i, v)| v / binom_q(d, i))
                .collect(),
        )
    }

    pub fn coeffs(&self) -> Vec<BigRational> {
        self.a
            .iter()
            .enumerate()
            .map(|(i, v)| v * binom_q(self.d, i))
            .collect()
    }

    pub fn from_form(f: &Form) -> Result<Self> {
        if f.n() != 1 {
            return Err(Error::InvalidInput(format!(
                "expected a binary form, got {} variables",
                f.n() + 1
            )));
        }
        Self::from_coeffs(f.coeffs().to_vec())
    }

    pub fn to_form(&self) -> Form {
        Form::from_coeffs(1, self.d, self.coeffs()).expect("d+1 coefficients")
    }

    /// `sum c_i (p_i x + q_i y)^d`.
    pub fn power_sum(d: usize, terms: &[(BigRational, [BigRational; 2])]) -> Result<Self> {
        let t: Vec<(BigRational, Vec<BigRational>)> =
            terms.iter().map(|(c, l)| (c.clone(), l.to_vec())).collect();
        Self::from_form(&power_sum_expand(&t, d)?)
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        BinaryForm {
            d: self.d,
            a: self.a.iter().map(|v| v * c).collect(),
        }
    }

    pub fn eval(&self, x: &BigRational, y: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for (i, c) in self.coeffs().iter().enumerate() {
            let mut term = c.clone();
            for _ in 0..self.d - i {
                term *= x;
            }
            for _ in 0..i {
                term *= y;
            }
            acc += term;
        }
        acc
    }

    pub fn proportional(&self, other: &BinaryForm) -> bool {
        self.to_form().proportional(&other.to_form())
    }
}

/// The `(d-a+1) x (a+1)` Hankel matrix `(a_{i+j})`.
pub fn hankel(f: &BinaryForm, a: usize) -> Result<ExactMatrix> {
    if a > f.d {
        return Err(Error::InvalidInput(format!(
            "order {a} exceeds degree {}",
            f.d
        )));
    }
    let rows = f.d - a + 1;
    let cols = a + 1;
    let entries = (0..rows)
        .flat_map(|i| (0..cols).map(move |j| i + j))
        .map(|k| f.a[k].clone())
        .collect();
    ExactMatrix::from_rationals(rows, cols, entries, FieldConfig::rationals())
}

/// `f` lies in the `k`-th secant of the rational normal curve: the balanced Hankel has rank at most `k`.
pub fn membership_sigma_k(f: &BinaryForm, k: usize) -> bool {
    hankel(f, f.d / 2).map(|h| h.rank() <= k).unwrap_or(false)
}

/// Determinant of a square matrix of binary forms, each given by its values at `(1, t)`,
/// of total degree `deg`. Interpolated from `deg + 1` nodes.
fn det_interpolated<E>(size: usize, deg: usize, entry: E) -> Result<BinaryForm>
where
    E: Fn(usize, usize, &BigRational) -> BigRational,
{
    let nodes: Vec<BigRational> = (0..=deg as i64).map(q).collect();
    let mut values = Vec::with_capacity(nodes.len());
    for t in &nodes {
        let m: Vec<BigRational> = (0..size)
            .flat_map(|i| (0..size).map(move |j| (i, j)))
            .map(|(i, j)| entry(i, j, t))
            .collect();
        values.push(
            ExactMatrix::from_rationals(size, size, m, FieldConfig::rationals())?.determinant()?,
        );
    }
    let vandermonde: Vec<BigRational> = nodes
        .iter()
        .flat_map(|t| {
            let mut p = BigRational::one();
            (0..=deg)
                .map(|_| {
                    let v = p.clone();
                    p *= t;
                    v
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let v = ExactMatrix::from_rationals(deg + 1, deg + 1, vandermonde, FieldConfig::rationals())?;
    let c = v.solve(&values)?.expect("Vandermonde at distinct nodes");
    // value at (1, t) is sum c_i t^i, the coefficient of x^(deg-i) y^i
    BinaryForm::from_coeffs(c)
}

fn odd_half(f: &BinaryForm) -> Result<usize> {
    if f.d.is_multiple_of(2) {
        return Err(Error::InvalidInput(format!(
            "expected odd degree, got {}",
            f.d
        )));
    }
    Ok(f.d / 2)
}

/// Sylvester's covariant of an odd form of degree `2m+1`: the determinant of the
/// `(m+1) x (m+1)` matrix `(a_{i+j} x + a_{i+j+1} y)`. A form of degree `m+1`.
pub fn sylvester_g(f: &BinaryForm) -> Result<BinaryForm> {
    let m = odd_half(f)?;
    det_interpolated(m + 1, m + 1, |i, j, t| &f.a[i + j] + &f.a[i + j + 1] * t)
}

/// The bordered determinant with first row `((-x)^j y^(m+1-j))_j` over the Hankel rows
/// `(a_{i+j})`. Equal to [`sylvester_g`] by Cayley's factorization.
pub fn cayley_bordered(f: &BinaryForm) -> Result<BinaryForm> {
    let m = odd_half(f)?;
    det_interpolated(m + 2, m + 1, |i, j, t| {
        if i == 0 {
            // (-1)^j t^(m+1-j) at x = 1, y = t
            let mut v = if j % 2 == 0 { q(1) } else { q(-1) };
            for _ in 0..m + 1 - j {
                v *= t;
            }
            v
        } else {
            f.a[i - 1 + j].clone()
        }
    })
}

/// `det (f_{2m-i-j, i+j})` from the actual partial derivatives of `f`; for quintics this
/// is the Gundelfinger covariant. Equals `((2m+1)!)^(m+1)` times [`sylvester_g`].
pub fn gundelfinger(f: &BinaryForm) -> Result<BinaryForm> {
    let m = odd_half(f)?;
    let form = f.to_form();
    let partial = |p: usize, r: usize| {
        let mut g = form.clone();
        for _ in 0..p {
            g = g.partial(0);
        }
        for _ in 0..r {
            g = g.partial(1);
        }
        g
    };
    let lin: Vec<Form> = (0..=2 * m).map(|k| partial(2 * m - k, k)).collect();
    det_interpolated(m + 1, m + 1, |i, j, t| {
        let c = lin[i + j].coeffs();
        &c[0] + &c[1] * t
    })
}

pub fn gundelfinger_constant(d: usize) -> BigRational {
    let fact: BigInt = (1..=d as u64).map(BigInt::from).product();
    BigRational::from_integer(num_traits::pow(fact, d / 2 + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy_sum() -> BinaryForm {
        // x^5 + y^5 + (x+y)^5
        BinaryForm::from_integers(&[2, 1, 1, 1, 1, 2]).unwrap()
    }

    #[test]
    fn conventions() {
        let f = xy_sum();
        let direct = BinaryForm::power_sum(
            5,
            &[
                (q(1), [q(1), q(0)]),
                (q(1), [q(0), q(1)]),
                (q(1), [q(1), q(1)]),
            ],
        )
        .unwrap();
        assert_eq!(f, direct);
        assert_eq!(f.coeffs(), [2, 5, 10, 10, 5, 2].map(q).to_vec());
    }

    #[test]
    fn hankel_ranks() {
        let x5 = BinaryForm::from_integers(&[1, 0, 0, 0, 0, 0]).unwrap();
        for a in 0..=5 {
            assert_eq!(hankel(&x5, a).unwrap().rank(), 1);
        }
        let two = BinaryForm::from_integers(&[1, 0, 0, 0, 0, 1]).unwrap();
        assert_eq!(hankel(&two, 2).unwrap().rank(), 2);
        assert!(membership_sigma_k(&two, 2));
        assert!(!membership_sigma_k(&xy_sum(), 2));
        assert!(membership_sigma_k(&xy_sum(), 3));
    }

    #[test]
    fn covariant_of_three_powers() {
        let g = sylvester_g(&xy_sum()).unwrap();
        // x y (x + y)
        let want = BinaryForm::from_coeffs([0, 1, 1, 0].map(q).to_vec()).unwrap();
        assert!(g.proportional(&want), "{g:?}");
        assert_eq!(cayley_bordered(&xy_sum()).unwrap(), g);
        let gu = gundelfinger(&xy_sum()).unwrap();
        assert_eq!(gu, g.scale(&gundelfinger_constant(5)));
        for f in [[1, 0, 0, 0, 0, 1], [1, 0, 0, 0, 0, 0]] {
            let f = BinaryForm::from_integers(&f).unwrap();
            assert!(sylvester_g(&f).unwrap().is_zero());
            assert!(gundelfinger(&f).unwrap().is_zero());
        }
    }
}
