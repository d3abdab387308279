//! Exact witnesses for the defective cases: double hypersurfaces through the points,
//! the rational normal curve through `n + 3` points with the cubic singular along it,
//! and the catalecticant determinant of quartics.
//!
//! Everything here is computed over the rationals, whatever field is used elsewhere.

mod rnc;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlinalg::{ExactMatrix, FieldConfig};
use crate::polyspace::{catalecticant, evaluation_row, monomial_basis, Form, ProjPoint};
use crate::schemes::random::{rng, PointSampler};
use crate::schemes::{condition_matrix, SchemeComponent, SchemeSpec};
use crate::verifier::{is_exception, CaseId, ExceptionReason};

pub use rnc::{rnc_through, RationalNormalCurve};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessCheck {
    pub name: String,
    pub holds: bool,
}

/// A nonzero form singular at every point in `points`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessForm {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<CaseId>,
    pub form: Form,
    pub points: Vec<ProjPoint>,
    /// `dim I(d)` for double points at `points`, computed exactly.
    pub ideal_dim: usize,
    pub checks: Vec<WitnessCheck>,
    pub verified: bool,
}

pub fn singular_at(form: &Form, p: &ProjPoint) -> bool {
    form.gradient()
        .iter()
        .all(|g| g.eval(p.coords()).is_ok_and(|v| v.is_zero()))
}

fn double_points(points: &[ProjPoint]) -> SchemeSpec {
    SchemeSpec {
        n: points[0].n(),
        components: points
            .iter()
            .cloned()
            .map(SchemeComponent::double)
            .collect(),
    }
}

impl WitnessForm {
    fn assemble(form: Form, points: Vec<ProjPoint>, mut checks: Vec<WitnessCheck>) -> Result<Self> {
        let m = condition_matrix(&double_points(&points), form.d(), FieldConfig::rationals())?;
        let ideal_dim = m.cols() - m.rank();
        let in_kernel = m.mul_vec(form.coeffs())?.iter().all(Zero::is_zero);
        checks.insert(0, check("form is nonzero", !form.is_zero()));
        checks.insert(
            1,
            check(
                "all first partials vanish at every point",
                points.iter().all(|p| singular_at(&form, p)),
            ),
        );
        checks.push(check(
            "form lies in the kernel of the double-point condition matrix",
            in_kernel,
        ));
        let verified = checks.iter().all(|c| c.holds);
        Ok(WitnessForm {
            case: None,
            form,
            points,
            ideal_dim,
            checks,
            verified,
        })
    }
}

fn check(name: &str, holds: bool) -> WitnessCheck {
    WitnessCheck {
        name: name.into(),
        holds,
    }
}

/// `q^2` for a degree-`e` form `q` through `points`; singular at each of them.
pub fn double_hypersurface_witness(
    points: &[ProjPoint],
    n: usize,
    e: usize,
) -> Result<WitnessForm> {
    if points.is_empty() || e == 0 {
        return Err(Error::InvalidInput(
            "need at least one point and e >= 1".into(),
        ));
    }
    if let Some(p) = points.iter().find(|p| p.n() != n) {
        return Err(Error::DimensionMismatch(format!(
            "point {p} is not in P^{n}"
        )));
    }
    let basis = monomial_basis(n, e);
    let rows = points
        .iter()
        .map(|p| evaluation_row(p, &basis))
        .collect::<Result<Vec<_>>>()?;
    let kernel =
        ExactMatrix::from_rows(basis.len(), &rows, FieldConfig::rationals())?.kernel_basis();
    let Some(q) = kernel.first() else {
        return Err(Error::Overdetermined {
            degree: e,
            points: points.len(),
        });
    };
    let q = Form::from_coeffs(n, e, q.clone())?.normalized();
    let through = points
        .iter()
        .all(|p| q.eval(p.coords()).is_ok_and(|v| v.is_zero()));
    let checks = vec![check("the degree-e form vanishes at every point", through)];
    let mut w = WitnessForm::assemble(q.pow(2)?, points.to_vec(), checks)?;
    w.checks.push(check(
        "degree-e form through the points is unique",
        kernel.len() == 1,
    ));
    Ok(w)
}

/// The cubic singular along a rational normal curve of `P^4`, found from double-point
/// conditions at 13 curve points and checked at 20 more and at the defining points.
pub fn singular_cubic_along_rnc(c: &RationalNormalCurve) -> Result<WitnessForm> {
    if c.n != 4 {
        return Err(Error::InvalidInput(format!(
            "expected a curve in P^4, got P^{}",
            c.n
        )));
    }
    let one = BigRational::from_integer(1.into());
    let mut samples: Vec<ProjPoint> = Vec::new();
    let mut t = 0i64;
    while samples.len() < 13 {
        let p = c.point_at(&one, &BigRational::from_integer(t.into()))?;
        if !samples.contains(&p) {
            samples.push(p);
        }
        t += 1;
    }
    let m = condition_matrix(&double_points(&samples), 3, FieldConfig::rationals())?;
    let kernel = m.kernel_basis();
    if kernel.len() != 1 {
        return Err(Error::Degenerate(format!(
            "cubics singular at 13 curve points form a space of dimension {}, expected 1",
            kernel.len()
        )));
    }
    let form = Form::from_coeffs(4, 3, kernel[0].clone())?.normalized();
    let extra = (1..=20i64)
        .map(|j| {
            c.point_at(
                &BigRational::new(j.into(), 3.into()),
                &BigRational::from_integer((-j).into()),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let checks = vec![
        check(
            "curve parametrization passes through its defining points",
            c.verify(),
        ),
        check(
            "singular at 20 further curve points",
            extra.iter().all(|p| singular_at(&form, p)),
        ),
    ];
    let points = if c.points.is_empty() {
        samples
    } else {
        c.points.clone()
    };
    WitnessForm::assemble(form, points, checks)
}

/// `det` of the middle catalecticant of a quartic. Vanishes on the secant hypersurface
/// in the defective quartic cases.
pub fn clebsch_determinant(f: &Form) -> Result<BigRational> {
    if f.d() != 4 {
        return Err(Error::InvalidInput(format!(
            "expected a quartic, got degree {}",
            f.d()
        )));
    }
    catalecticant(f, 2)?.determinant()
}

/// Random points with small integer coordinates.
pub fn random_rational_points(n: usize, k: usize, seed: u64) -> Vec<ProjPoint> {
    let sampler = PointSampler::new(FieldConfig::rationals()).with_bound(9);
    let mut r = rng(seed);
    (0..k).map(|_| sampler.point(n, &mut r)).collect()
}

/// A witness for a listed exceptional case at seeded random points.
pub fn exception_witness(c: CaseId, seed: u64) -> Result<WitnessForm> {
    let Some(rec) = is_exception(c) else {
        return Err(Error::InvalidInput(format!(
            "{c} is not an exceptional case"
        )));
    };
    let mut last = None;
    for attempt in 0..8u64 {
        let points = random_rational_points(c.n, c.k, seed.wrapping_add(attempt));
        let w = match rec.reason {
            ExceptionReason::QuadricCones => double_hypersurface_witness(&points, c.n, 1),
            ExceptionReason::DoubleQuadric => double_hypersurface_witness(&points, c.n, 2),
            ExceptionReason::RncSecantCubic => {
                rnc_through(&points).and_then(|curve| singular_cubic_along_rnc(&curve))
            }
        };
        match w {
            Ok(mut w) => {
                w.case = Some(c);
                return Ok(w);
            }
            Err(e @ Error::Degenerate(_)) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.unwrap_or_else(|| Error::Degenerate("no general configuration found".into())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    #[test]
    fn double_conic_through_five_points() {
        let w = exception_witness(CaseId::new(2, 4, 5), 3).unwrap();
        assert!(w.verified, "{:?}", w.checks);
        assert_eq!((w.form.d(), w.ideal_dim), (4, 1));
        let six = random_rational_points(2, 6, 1);
        assert!(matches!(
            double_hypersurface_witness(&six, 2, 2),
            Err(Error::Overdetermined {
                degree: 2,
                points: 6
            })
        ));
    }

    #[test]
    fn hankel_cubic_on_the_standard_curve() {
        let w = singular_cubic_along_rnc(&RationalNormalCurve::standard(4)).unwrap();
        assert!(w.verified);
        let x = |i: usize| {
            let mut v = vec![q(0); 5];
            v[i] = q(1);
            Form::linear(&v)
        };
        let m = |a: usize, b: usize, c: usize, d: usize| {
            x(a).mul(&x(b))
                .unwrap()
                .mul(&x(c))
                .unwrap()
                .scale(&q(d as i64))
        };
        // det [[x0,x1,x2],[x1,x2,x3],[x2,x3,x4]]
        let terms = [
            m(0, 2, 4, 1),
            m(1, 3, 2, 2),
            m(2, 2, 2, 1).scale(&q(-1)),
            m(0, 3, 3, 1).scale(&q(-1)),
            m(1, 1, 4, 1).scale(&q(-1)),
        ];
        let det = terms
            .iter()
            .skip(1)
            .fold(terms[0].clone(), |acc, t| acc.add(t).unwrap());
        assert!(w.form.proportional(&det));
    }

    #[test]
    fn curve_through_seven_points() {
        let points = random_rational_points(4, 7, 11);
        let c = rnc_through(&points).unwrap();
        assert!(c.verify());
        let mut shuffled = points.clone();
        shuffled.rotate_left(3);
        shuffled.swap(0, 5);
        let d = rnc_through(&shuffled).unwrap();
        for t in 0..6 {
            assert!(c.contains(&d.point_at(&q(2), &q(t)).unwrap()).unwrap());
        }
        let w = singular_cubic_along_rnc(&c).unwrap();
        assert!(w.verified, "{:?}", w.checks);
        assert_eq!(w.ideal_dim, 1);
    }

    #[test]
    fn transformed_curve_keeps_a_unique_cubic() {
        let a = ExactMatrix::from_integers(
            5,
            5,
            &[
                1, 2, 0, 0, 1, 0, 1, 3, 0, 0, 0, 0, 1, 1, 0, 2, 0, 0, 1, 0, 0, 0, 1, 0, 1,
            ],
            FieldConfig::rationals(),
        )
        .unwrap();
        let c = RationalNormalCurve::standard(4).transformed(&a).unwrap();
        let w = singular_cubic_along_rnc(&c).unwrap();
        assert!(w.verified);
        assert_eq!(w.ideal_dim, 1);
    }

    #[test]
    fn conic_through_five_points() {
        let c = rnc_through(&random_rational_points(2, 5, 4)).unwrap();
        assert!(c.verify());
        assert_eq!(c.quadrics().unwrap().len(), 1);
    }

    #[test]
    fn degenerate_position_is_rejected() {
        let mut pts = random_rational_points(2, 5, 2);
        pts[1] = pts[0].clone();
        assert!(rnc_through(&pts).is_err());
    }

    #[test]
    fn clebsch_vanishes_on_five_powers() {
        let x4 = Form::from_integers(2, 4, &[1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]).unwrap();
        assert!(clebsch_determinant(&x4).unwrap().is_zero());
        let ls = random_rational_points(2, 6, 9);
        let terms: Vec<_> = ls.iter().map(|p| (q(1), p.coords().to_vec())).collect();
        let five = crate::polyspace::power_sum_expand(&terms[..5], 4).unwrap();
        let six = crate::polyspace::power_sum_expand(&terms, 4).unwrap();
        assert!(clebsch_determinant(&five).unwrap().is_zero());
        assert!(!clebsch_determinant(&six).unwrap().is_zero());
    }
}
