use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{pair, rank_q, SchemeComponent, SchemeSpec};
use crate::error::{Error, Result};
use crate::exactlinalg::{ExactMatrix, FieldConfig};
use crate::polyspace::{exact, ProjPoint};

/// A hyperplane `H = {h = 0}` of `P^n` with `n` vectors spanning `ker h`, which identify
/// `H` with `P^(n-1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperplaneChart {
    #[serde(
        serialize_with = "exact::serialize_vec",
        deserialize_with = "exact::deserialize_vec"
    )]
    form: Vec<BigRational>,
    #[serde(
        serialize_with = "exact::serialize_matrix",
        deserialize_with = "exact::deserialize_matrix"
    )]
    basis: Vec<Vec<BigRational>>,
}

impl HyperplaneChart {
    /// Chart given by the reduced kernel basis of `form`. For `form = x_n` this is the
    /// identity on the first `n` coordinates.
    pub fn new(form: Vec<BigRational>) -> Result<Self> {
        if form.len() < 2 || form.iter().all(Zero::is_zero) {
            return Err(Error::InvalidInput(
                "a hyperplane needs a nonzero form in at least 2 variables".into(),
            ));
        }
        let basis = ExactMatrix::from_rows(
            form.len(),
            std::slice::from_ref(&form),
            FieldConfig::rationals(),
        )?
        .kernel_basis();
        Ok(HyperplaneChart { form, basis })
    }

    pub fn with_basis(form: Vec<BigRational>, basis: Vec<Vec<BigRational>>) -> Result<Self> {
        let chart = HyperplaneChart::new(form)?;
        let width = chart.form.len();
        if basis.len() != width - 1
            || basis
                .iter()
                .any(|b| b.len() != width || !pair(&chart.form, b).is_zero())
            || rank_q(&basis, width) != width - 1
        {
            return Err(Error::InvalidInput(
                "chart vectors must be a basis of the hyperplane".into(),
            ));
        }
        Ok(HyperplaneChart { basis, ..chart })
    }

    /// The coordinate hyperplane `x_i = 0` of `P^n`.
    pub fn coordinate(n: usize, i: usize) -> Self {
        let mut form = vec![BigRational::zero(); n + 1];
        form[i] = BigRational::from_integer(1.into());
        HyperplaneChart::new(form).expect("coordinate hyperplane")
    }

    pub fn form(&self) -> &[BigRational] {
        &self.form
    }

    pub fn basis(&self) -> &[Vec<BigRational>] {
        &self.basis
    }

    /// Ambient dimension `n`.
    pub fn n(&self) -> usize {
        self.form.len() - 1
    }

    pub fn contains(&self, v: &[BigRational]) -> bool {
        pair(&self.form, v).is_zero()
    }

    /// Chart coordinates of a vector of `ker h`.
    pub fn coordinates(&self, v: &[BigRational]) -> Result<Vec<BigRational>> {
        if !self.contains(v) {
            return Err(Error::InvalidInput(
                "vector does not lie on the hyperplane".into(),
            ));
        }
        let width = self.form.len();
        let cols = self.basis.len();
        let mut entries = Vec::with_capacity(width * cols);
        for i in 0..width {
            for b in &self.basis {
                entries.push(b[i].clone());
            }
        }
        ExactMatrix::from_rationals(width, cols, entries, FieldConfig::rationals())?
            .solve(v)?
            .ok_or_else(|| Error::InvalidInput("vector is outside the chart span".into()))
    }

    pub fn lift(&self, c: &[BigRational]) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.form.len()];
        for (ci, b) in c.iter().zip(&self.basis) {
            for (o, bj) in out.iter_mut().zip(b) {
                *o += ci * bj;
            }
        }
        out
    }

    pub fn point_to_chart(&self, p: &ProjPoint) -> Result<ProjPoint> {
        ProjPoint::new(self.coordinates(p.coords())?)
    }
}

/// Trace on `H` (a scheme of `P^(n-1)` in the chart coordinates) and residual with
/// respect to `H` (a scheme of `P^n`).
pub fn trace_residual(
    spec: &SchemeSpec,
    chart: &HyperplaneChart,
) -> Result<(SchemeSpec, SchemeSpec)> {
    spec.validate()?;
    if chart.n() != spec.n {
        return Err(Error::DimensionMismatch(format!(
            "hyperplane of P^{} for a scheme in P^{}",
            chart.n(),
            spec.n
        )));
    }
    let mut trace = SchemeSpec::new(spec.n - 1);
    let mut residual = SchemeSpec::new(spec.n);
    for c in &spec.components {
        match c {
            SchemeComponent::DoublePoint { point } => {
                if chart.contains(point.coords()) {
                    trace.push(SchemeComponent::double(chart.point_to_chart(point)?));
                    residual.push(SchemeComponent::simple(point.clone()));
                } else {
                    residual.push(c.clone());
                }
            }
            SchemeComponent::SimplePoint { point } => {
                if chart.contains(point.coords()) {
                    trace.push(SchemeComponent::simple(chart.point_to_chart(point)?));
                } else {
                    residual.push(c.clone());
                }
            }
            SchemeComponent::TraceDoublePoint { point, hyperplane } => {
                if !chart.contains(point.coords()) {
                    residual.push(c.clone());
                } else if rank_q(&[hyperplane.clone(), chart.form.clone()], spec.n + 1) == 1 {
                    trace.push(SchemeComponent::double(chart.point_to_chart(point)?));
                } else {
                    return Err(Error::Unsupported(
                        "trace of a hyperplane section of a double point along a different hyperplane".into(),
                    ));
                }
            }
            SchemeComponent::Jet { point, dirs } => {
                if !chart.contains(point.coords()) {
                    residual.push(c.clone());
                    continue;
                }
                let off = dirs.iter().find(|v| !chart.contains(v));
                let mut inside = Vec::with_capacity(dirs.len());
                for v in dirs {
                    let reduced = match off {
                        Some(w) if !chart.contains(v) => {
                            if std::ptr::eq(v, w) {
                                continue;
                            }
                            let t = pair(&chart.form, v) / pair(&chart.form, w);
                            v.iter().zip(w).map(|(a, b)| a - &t * b).collect()
                        }
                        _ => v.clone(),
                    };
                    inside.push(chart.coordinates(&reduced)?);
                }
                let p = chart.point_to_chart(point)?;
                trace.push(if inside.is_empty() {
                    SchemeComponent::simple(p)
                } else {
                    SchemeComponent::Jet {
                        point: p,
                        dirs: inside,
                    }
                });
                if off.is_some() {
                    residual.push(SchemeComponent::simple(point.clone()));
                }
            }
            SchemeComponent::ContainLinear { .. } => {
                return Err(Error::Unsupported(
                    "trace of a linear containment condition".into(),
                ));
            }
        }
    }
    Ok((trace, residual))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schemes::random::{rng, PointSampler};

    fn qv(v: &[i64]) -> Vec<BigRational> {
        v.iter()
            .map(|&x| BigRational::from_integer(x.into()))
            .collect()
    }

    #[test]
    fn eight_points_four_on_a_plane() {
        let chart = HyperplaneChart::coordinate(3, 3);
        let sampler = PointSampler::new(FieldConfig::rationals());
        let mut r = rng(11);
        let mut spec = SchemeSpec::new(3);
        for _ in 0..4 {
            let p = sampler
                .point_in(&[chart.form().to_vec()], 3, &mut r)
                .unwrap();
            spec.push(SchemeComponent::double(p));
        }
        spec.extend(sampler.double_points(3, 4, &mut r)).unwrap();
        let (trace, residual) = trace_residual(&spec, &chart).unwrap();
        assert_eq!(trace.n, 2);
        assert_eq!(trace.summary()["double"], 4);
        assert_eq!(residual.summary()["double"], 4);
        assert_eq!(residual.summary()["simple"], 4);
        assert_eq!(
            spec.degree().unwrap(),
            trace.degree().unwrap() + residual.degree().unwrap()
        );
    }

    #[test]
    fn points_off_the_hyperplane_stay_residual() {
        let chart = HyperplaneChart::new(qv(&[1, 1, 1])).unwrap();
        let spec = PointSampler::new(FieldConfig::rationals())
            .with_bound(5)
            .double_points(2, 3, &mut rng(2));
        let spec = SchemeSpec {
            components: spec
                .components
                .into_iter()
                .filter(|c| !chart.contains(c.point().unwrap().coords()))
                .collect(),
            ..spec
        };
        let (trace, residual) = trace_residual(&spec, &chart).unwrap();
        assert!(trace.components.is_empty());
        assert_eq!(residual, spec);
    }

    #[test]
    fn jets_split_along_the_hyperplane() {
        let chart = HyperplaneChart::coordinate(3, 3);
        let p = ProjPoint::from_integers(&[1, 2, 3, 0]).unwrap();
        let spec = SchemeSpec::new(3).with(SchemeComponent::Jet {
            point: p,
            dirs: vec![qv(&[0, 1, 0, 1]), qv(&[0, 0, 1, 2])],
        });
        let (trace, residual) = trace_residual(&spec, &chart).unwrap();
        assert_eq!(trace.degree().unwrap(), 2);
        assert_eq!(residual.degree().unwrap(), 1);
        let contain = SchemeSpec::new(3).with(SchemeComponent::ContainLinear {
            forms: vec![qv(&[1, 0, 0, 0])],
        });
        assert!(matches!(
            trace_residual(&contain, &chart),
            Err(Error::Unsupported(_))
        ));
    }
}
