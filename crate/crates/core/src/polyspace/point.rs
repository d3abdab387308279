use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::polyspace::exact;

/// A point of `P^n`, stored with its first nonzero coordinate equal to 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    coords: Vec<BigRational>,
}

impl ProjPoint {
    pub fn new(coords: Vec<BigRational>) -> Result<Self> {
        let Some(lead) = coords.iter().find(|c| !c.is_zero()).cloned() else {
            return Err(Error::InvalidInput(
                "projective point with all coordinates zero".into(),
            ));
        };
        let coords = if lead.is_one() {
            coords
        } else {
            coords.into_iter().map(|c| c / &lead).collect()
        };
        Ok(ProjPoint { coords })
    }

    pub fn from_integers(coords: &[i64]) -> Result<Self> {
        Self::new(
            coords
                .iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    /// The coordinate vector `e_i` of `P^n`.
    pub fn coordinate(n: usize, i: usize) -> Self {
        let mut coords = vec![BigRational::zero(); n + 1];
        coords[i] = BigRational::one();
        ProjPoint { coords }
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    /// Ambient projective dimension.
    pub fn n(&self) -> usize {
        self.coords.len() - 1
    }

    /// Index of the first nonzero coordinate.
    pub fn pivot(&self) -> usize {
        self.coords
            .iter()
            .position(|c| !c.is_zero())
            .expect("nonzero point")
    }

    /// Value of the linear form with coefficients `form` at this representative.
    pub fn pair(&self, form: &[BigRational]) -> BigRational {
        self.coords.iter().zip(form).map(|(a, b)| a * b).sum()
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ":")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for ProjPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        exact::serialize_vec(&self.coords, s)
    }
}

impl<'de> Deserialize<'de> for ProjPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let coords = exact::deserialize_vec(d)?;
        ProjPoint::new(coords).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_first_nonzero() {
        let p = ProjPoint::from_integers(&[0, 3, 6]).unwrap();
        assert_eq!(p.pivot(), 1);
        assert_eq!(p.coords()[2], BigRational::from_integer(2.into()));
        assert!(ProjPoint::from_integers(&[0, 0]).is_err());
    }

    #[test]
    fn json_round_trip_uses_strings() {
        let p = ProjPoint::from_integers(&[2, 1]).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"["1","1/2"]"#);
        let back: ProjPoint = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }
}
