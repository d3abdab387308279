use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::exact;
use super::monomial::{monomial_basis, space_dim, MonomialBasis, MultiIndex};
use crate::error::{Error, Result};

/// A homogeneous form of degree `d` in `x_0..x_n` with exact rational coefficients,
/// stored densely against [`MonomialBasis`]`(n, d)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FormJson", into = "FormJson")]
pub struct Form {
    n: usize,
    d: usize,
    coeffs: Vec<BigRational>,
}

#[derive(Serialize, Deserialize)]
struct FormJson {
    n: usize,
    d: usize,
    order: String,
    #[serde(
        serialize_with = "exact::serialize_vec",
        deserialize_with = "exact::deserialize_vec"
    )]
    coeffs: Vec<BigRational>,
}

impl TryFrom<FormJson> for Form {
    type Error = Error;

    fn try_from(j: FormJson) -> Result<Form> {
        if j.order != "grlex" {
            return Err(Error::InvalidInput(format!(
                "unsupported monomial order {:?}",
                j.order
            )));
        }
        Form::from_coeffs(j.n, j.d, j.coeffs)
    }
}

impl From<Form> for FormJson {
    fn from(f: Form) -> FormJson {
        FormJson {
            n: f.n,
            d: f.d,
            order: "grlex".into(),
            coeffs: f.coeffs,
        }
    }
}

impl Form {
    pub fn zero(n: usize, d: usize) -> Self {
        Form {
            n,
            d,
            coeffs: vec![BigRational::zero(); space_dim(n, d) as usize],
        }
    }

    pub fn from_coeffs(n: usize, d: usize, coeffs: Vec<BigRational>) -> Result<Self> {
        let want = space_dim(n, d) as usize;
        if coeffs.len() != want {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for a degree-{d} form in {} variables (expected {want})",
                coeffs.len(),
                n + 1
            )));
        }
        Ok(Form { n, d, coeffs })
    }

    pub fn from_integers(n: usize, d: usize, coeffs: &[i64]) -> Result<Self> {
        Self::from_coeffs(
            n,
            d,
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    /// The linear form `sum c_i x_i`.
    pub fn linear(coeffs: &[BigRational]) -> Self {
        Form {
            n: coeffs.len() - 1,
            d: 1,
            coeffs: coeffs.to_vec(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn basis(&self) -> MonomialBasis {
        monomial_basis(self.n, self.d)
    }

    pub fn coeff(&self, m: &MultiIndex) -> BigRational {
        self.basis()
            .index_of(m)
            .map(|i| self.coeffs[i].clone())
            .unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn check_same_space(&self, other: &Form) -> Result<()> {
        if self.n != other.n || self.d != other.d {
            return Err(Error::DimensionMismatch(format!(
                "forms of type (n={}, d={}) and (n={}, d={})",
                self.n, self.d, other.n, other.d
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Form) -> Result<Form> {
        self.check_same_space(other)?;
        Ok(Form {
            n: self.n,
            d: self.d,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Form) -> Result<Form> {
        self.check_same_space(other)?;
        Ok(Form {
            n: self.n,
            d: self.d,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn scale(&self, c: &BigRational) -> Form {
        Form {
            n: self.n,
            d: self.d,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, other: &Form) -> Result<Form> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!(
                "product of forms in {} and {} variables",
                self.n + 1,
                other.n + 1
            )));
        }
        let (ba, bb) = (self.basis(), other.basis());
        let target = monomial_basis(self.n, self.d + other.d);
        let mut out = vec![BigRational::zero(); target.len()];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let k = target
                    .index_of(&ba.get(i).add(bb.get(j)))
                    .expect("product monomial");
                out[k] += a * b;
            }
        }
        Ok(Form {
            n: self.n,
            d: self.d + other.d,
            coeffs: out,
        })
    }

    pub fn pow(&self, e: usize) -> Result<Form> {
        let mut acc = Form::constant(self.n, BigRational::one());
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn constant(n: usize, c: BigRational) -> Form {
        Form {
            n,
            d: 0,
            coeffs: vec![c],
        }
    }

    /// Partial derivative with respect to `x_i`.
    pub fn partial(&self, i: usize) -> Form {
        if self.d == 0 {
            return Form::zero(self.n, 0);
        }
        let src = self.basis();
        let dst = monomial_basis(self.n, self.d - 1);
        let mut out = vec![BigRational::zero(); dst.len()];
        for (k, c) in self.coeffs.iter().enumerate() {
            let e = src.get(k).0[i];
            if e == 0 || c.is_zero() {
                continue;
            }
            let mut m = src.get(k).0.clone();
            m[i] -= 1;
            let idx = dst.index_of(&MultiIndex(m)).expect("lowered monomial");
            out[idx] += c * BigRational::from_integer(e.into());
        }
        Form {
            n: self.n,
            d: self.d - 1,
            coeffs: out,
        }
    }

    pub fn gradient(&self) -> Vec<Form> {
        (0..=self.n).map(|i| self.partial(i)).collect()
    }

    pub fn eval(&self, x: &[BigRational]) -> Result<BigRational> {
        if x.len() != self.n + 1 {
            return Err(Error::DimensionMismatch(format!(
                "point with {} coordinates for a form in {} variables",
                x.len(),
                self.n + 1
            )));
        }
        let row = super::rows::evaluation_row_in(&crate::exactlinalg::Rationals, x, &self.basis());
        Ok(row.iter().zip(&self.coeffs).map(|(a, b)| a * b).sum())
    }

    /// True when both forms are nonzero multiples of each other, or both zero.
    pub fn proportional(&self, other: &Form) -> bool {
        if self.n != other.n || self.d != other.d {
            return false;
        }
        let Some(i) = self.coeffs.iter().position(|c| !c.is_zero()) else {
            return other.is_zero();
        };
        if other.coeffs[i].is_zero() {
            return false;
        }
        let ratio = &other.coeffs[i] / &self.coeffs[i];
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .all(|(a, b)| a * &ratio == *b)
    }

    /// Rescaled so the first nonzero coefficient is 1.
    pub fn normalized(&self) -> Form {
        match self.coeffs.iter().find(|c| !c.is_zero()) {
            Some(lead) => self.scale(&lead.recip()),
            None => self.clone(),
        }
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let basis = self.basis();
        let mut wrote = false;
        for (c, m) in self.coeffs.iter().zip(basis.monomials()) {
            if c.is_zero() {
                continue;
            }
            if wrote {
                write!(f, " + ")?;
            }
            wrote = true;
            if m.degree() == 0 {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "({c})*{m}")?;
            }
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    #[test]
    fn product_and_partials() {
        // (x + y)^2 = x^2 + 2xy + y^2
        let l = Form::from_integers(1, 1, &[1, 1]).unwrap();
        let sq = l.mul(&l).unwrap();
        assert_eq!(sq, Form::from_integers(1, 2, &[1, 2, 1]).unwrap());
        assert_eq!(sq.partial(0), Form::from_integers(1, 1, &[2, 2]).unwrap());
        assert_eq!(sq.eval(&[q(2), q(3)]).unwrap(), q(25));
        assert_eq!(
            l.pow(3).unwrap(),
            Form::from_integers(1, 3, &[1, 3, 3, 1]).unwrap()
        );
    }

    #[test]
    fn proportionality() {
        let a = Form::from_integers(2, 1, &[1, 2, 3]).unwrap();
        assert!(a.proportional(&a.scale(&q(-4))));
        assert!(!a.proportional(&Form::from_integers(2, 1, &[1, 2, 4]).unwrap()));
    }

    #[test]
    fn json_shape() {
        let a = Form::from_integers(1, 1, &[1, -2]).unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"n":1,"d":1,"order":"grlex","coeffs":["1","-2"]}"#);
        let back: Form = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
        assert!(
            serde_json::from_str::<Form>(r#"{"n":1,"d":1,"order":"lex","coeffs":["1","0"]}"#)
                .is_err()
        );
        assert!(serde_json::from_str::<Form>(
            r#"{"n":1,"d":2,"order":"grlex","coeffs":["1","0"]}"#
        )
        .is_err());
    }
}
