//! Zero-dimensional schemes built from double points, simple points, hyperplane traces
//! of double points and first-order jets, plus containment of linear subspaces.
//! Schemes compile into condition matrices whose kernel is `I_X(d)`.

mod conditions;
mod horace;
pub mod random;

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlinalg::{ExactMatrix, FieldConfig};
use crate::polyspace::{binomial, exact, ProjPoint};

pub use conditions::{condition_matrix, condition_rows_in};
pub use horace::{trace_residual, HyperplaneChart};

/// One piece of a scheme.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum SchemeComponent {
    /// `p^2`: every form singular at `p`.
    #[serde(rename = "double")]
    DoublePoint { point: ProjPoint },
    #[serde(rename = "simple")]
    SimplePoint { point: ProjPoint },
    /// `p^2 ∩ H` for `p` on the hyperplane `H`.
    #[serde(rename = "trace-double")]
    TraceDoublePoint {
        point: ProjPoint,
        #[serde(
            serialize_with = "exact::serialize_vec",
            deserialize_with = "exact::deserialize_vec"
        )]
        hyperplane: Vec<BigRational>,
    },
    /// Value at `p` and one first derivative per direction.
    #[serde(rename = "jet")]
    Jet {
        point: ProjPoint,
        #[serde(
            serialize_with = "exact::serialize_matrix",
            deserialize_with = "exact::deserialize_matrix"
        )]
        dirs: Vec<Vec<BigRational>>,
    },
    /// Forms must vanish on the linear space cut out by `forms`.
    #[serde(rename = "contain-linear")]
    ContainLinear {
        #[serde(
            serialize_with = "exact::serialize_matrix",
            deserialize_with = "exact::deserialize_matrix"
        )]
        forms: Vec<Vec<BigRational>>,
    },
}

impl SchemeComponent {
    pub fn double(point: ProjPoint) -> Self {
        SchemeComponent::DoublePoint { point }
    }

    pub fn simple(point: ProjPoint) -> Self {
        SchemeComponent::SimplePoint { point }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            SchemeComponent::DoublePoint { .. } => "double",
            SchemeComponent::SimplePoint { .. } => "simple",
            SchemeComponent::TraceDoublePoint { .. } => "trace-double",
            SchemeComponent::Jet { .. } => "jet",
            SchemeComponent::ContainLinear { .. } => "contain-linear",
        }
    }

    /// Length of the component in an ambient space of dimension `n`; `None` for
    /// containment conditions, which have no finite length.
    pub fn length(&self, n: usize) -> Option<usize> {
        match self {
            SchemeComponent::DoublePoint { .. } => Some(n + 1),
            SchemeComponent::SimplePoint { .. } => Some(1),
            SchemeComponent::TraceDoublePoint { .. } => Some(n),
            SchemeComponent::Jet { dirs, .. } => Some(1 + dirs.len()),
            SchemeComponent::ContainLinear { .. } => None,
        }
    }

    pub fn point(&self) -> Option<&ProjPoint> {
        match self {
            SchemeComponent::DoublePoint { point }
            | SchemeComponent::SimplePoint { point }
            | SchemeComponent::TraceDoublePoint { point, .. }
            | SchemeComponent::Jet { point, .. } => Some(point),
            SchemeComponent::ContainLinear { .. } => None,
        }
    }
}

/// A scheme in `P^n`, given as a list of components.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeSpec {
    pub n: usize,
    pub components: Vec<SchemeComponent>,
}

fn rank_q(rows: &[Vec<BigRational>], cols: usize) -> usize {
    ExactMatrix::from_rows(cols, rows, FieldConfig::rationals())
        .map(|m| m.rank())
        .unwrap_or(0)
}

pub(crate) fn pair(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl SchemeSpec {
    pub fn new(n: usize) -> Self {
        SchemeSpec {
            n,
            components: Vec::new(),
        }
    }

    pub fn with(mut self, c: SchemeComponent) -> Self {
        self.components.push(c);
        self
    }

    pub fn push(&mut self, c: SchemeComponent) {
        self.components.push(c);
    }

    pub fn extend(&mut self, other: SchemeSpec) -> Result<()> {
        if other.n != self.n {
            return Err(Error::DimensionMismatch(format!(
                "joining schemes in P^{} and P^{}",
                self.n, other.n
            )));
        }
        self.components.extend(other.components);
        Ok(())
    }

    /// Sum of component lengths. Fails when a containment condition is present.
    pub fn degree(&self) -> Result<usize> {
        self.components
            .iter()
            .map(|c| {
                c.length(self.n).ok_or_else(|| {
                    Error::Unsupported(
                        "degree of a scheme with a linear containment condition".into(),
                    )
                })
            })
            .sum()
    }

    /// Number of conditions the scheme imposes on degree-`d` forms when everything is
    /// independent. A linear space `L` counts `dim S^d(L)`; the other components count
    /// their length.
    pub fn conditions_in_degree(&self, d: usize) -> Result<u64> {
        self.components
            .iter()
            .map(|c| match c {
                SchemeComponent::ContainLinear { forms } => {
                    let r = if forms.is_empty() {
                        0
                    } else {
                        ExactMatrix::from_rows(self.n + 1, forms, FieldConfig::rationals())?.rank()
                    };
                    Ok(if r > self.n {
                        0
                    } else {
                        binomial(self.n - r + d, d)
                    })
                }
                other => Ok(other.length(self.n).expect("finite length") as u64),
            })
            .sum()
    }

    pub fn has_containment(&self) -> bool {
        self.components
            .iter()
            .any(|c| matches!(c, SchemeComponent::ContainLinear { .. }))
    }

    /// Number of components of each type, keyed by the JSON tag.
    pub fn summary(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        for c in &self.components {
            *out.entry(c.tag().to_string()).or_insert(0) += 1;
        }
        out
    }

    /// Checks dimensions and the structural invariants of every component.
    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        if n == 0 {
            return Err(Error::InvalidScheme(
                "ambient dimension must be at least 1".into(),
            ));
        }
        let width = n + 1;
        let bad =
            |i: usize, msg: String| Err(Error::InvalidScheme(format!("component {i}: {msg}")));
        for (i, c) in self.components.iter().enumerate() {
            if let Some(p) = c.point() {
                if p.coords().len() != width {
                    return bad(
                        i,
                        format!(
                            "point has {} coordinates, expected {width}",
                            p.coords().len()
                        ),
                    );
                }
            }
            match c {
                SchemeComponent::TraceDoublePoint { point, hyperplane } => {
                    if hyperplane.len() != width || hyperplane.iter().all(Zero::is_zero) {
                        return bad(
                            i,
                            "hyperplane must be a nonzero form in n+1 variables".into(),
                        );
                    }
                    if !point.pair(hyperplane).is_zero() {
                        return bad(i, format!("point {point} does not lie on the hyperplane"));
                    }
                }
                SchemeComponent::Jet { point, dirs } => {
                    if dirs.len() > n {
                        return bad(
                            i,
                            format!("jet of length {} exceeds a double point", dirs.len() + 1),
                        );
                    }
                    if dirs.iter().any(|v| v.len() != width) {
                        return bad(i, "direction with the wrong number of coordinates".into());
                    }
                    let mut stack = vec![point.coords().to_vec()];
                    stack.extend(dirs.iter().cloned());
                    if rank_q(&stack, width) != stack.len() {
                        return bad(
                            i,
                            "jet directions must be independent of each other and of the point"
                                .into(),
                        );
                    }
                }
                SchemeComponent::ContainLinear { forms } => {
                    if forms.is_empty() || forms.iter().any(|v| v.len() != width) {
                        return bad(i, "containment needs forms in n+1 variables".into());
                    }
                    if rank_q(forms, width) != forms.len() {
                        return bad(i, "containment forms must be linearly independent".into());
                    }
                }
                _ => {}
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let spec: SchemeSpec = serde_json::from_str(s)?;
        spec.validate()?;
        Ok(spec)
    }
}

/// `scheme_degree(spec)`.
pub fn scheme_degree(spec: &SchemeSpec) -> Result<usize> {
    spec.degree()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let spec = SchemeSpec::new(2)
            .with(SchemeComponent::double(
                ProjPoint::from_integers(&[1, 2, 3]).unwrap(),
            ))
            .with(SchemeComponent::Jet {
                point: ProjPoint::from_integers(&[0, 1, 0]).unwrap(),
                dirs: vec![vec![
                    BigRational::from_integer(1.into()),
                    BigRational::zero(),
                    BigRational::zero(),
                ]],
            });
        let s = spec.to_json().unwrap();
        assert!(s.contains("\"type\": \"double\""));
        assert_eq!(SchemeSpec::from_json(&s).unwrap(), spec);
        assert_eq!(spec.degree().unwrap(), 5);
    }

    #[test]
    fn rejects_off_hyperplane_trace() {
        let raw = r#"{"n":2,"components":[{"type":"trace-double","point":["1","0","0"],"hyperplane":["1","0","0"]}]}"#;
        assert!(SchemeSpec::from_json(raw).is_err());
        let ok = r#"{"n":2,"components":[{"type":"trace-double","point":[1,0,0],"hyperplane":[0,0,1]}]}"#;
        assert_eq!(SchemeSpec::from_json(ok).unwrap().degree().unwrap(), 2);
    }

    #[test]
    fn containment_has_no_degree() {
        let raw = r#"{"n":3,"components":[{"type":"contain-linear","forms":[[1,0,0,0]]}]}"#;
        assert!(SchemeSpec::from_json(raw).unwrap().degree().is_err());
    }

    #[test]
    fn containment_counts_forms_on_the_subspace() {
        // a line in P^3 plus one double point
        let raw = r#"{"n":3,"components":[{"type":"contain-linear","forms":[[1,0,0,0],[0,1,0,0]]},{"type":"double","point":[0,1,1,0]}]}"#;
        let spec = SchemeSpec::from_json(raw).unwrap();
        assert_eq!(spec.conditions_in_degree(3).unwrap(), 4 + 4);
        let r = crate::interpolation::hilbert_function(&spec, 3, FieldConfig::rationals()).unwrap();
        assert_eq!(r.computed, 8);
    }
}
