use num_rational::BigRational;

use super::{rank_q, SchemeComponent, SchemeSpec};
use crate::error::{Error, Result};
use crate::exactlinalg::{kernel_from_rref, rref, ExactMatrix, Field, FieldConfig, MatrixField};
use crate::polyspace::{
    derivative_row_in, evaluation_row_in, monomial_basis, pack_rows, MonomialBasis, MultiIndex,
};
use crate::with_field;

fn to_field<F: Field>(f: &F, v: &[BigRational], what: &str) -> Result<Vec<F::Elem>> {
    f.convert_all(v).ok_or_else(|| {
        let cfg = f.config();
        Error::FieldIncompatible {
            row: 0,
            col: v
                .iter()
                .position(|q| f.from_rational(q).is_none())
                .unwrap_or(0),
            value: format!(
                "{what} {}",
                v.iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(",")
            ),
            prime: cfg.characteristic(),
        }
    })
}

fn unit<F: Field>(f: &F, width: usize, i: usize) -> Vec<F::Elem> {
    let mut v = vec![f.zero(); width];
    v[i] = f.one();
    v
}

/// `n - 1` vectors of `ker H` which together with `p` span `ker H`.
pub(crate) fn trace_directions(
    p: &[BigRational],
    h: &[BigRational],
) -> Result<Vec<Vec<BigRational>>> {
    let width = p.len();
    let kernel =
        ExactMatrix::from_rows(width, &[h.to_vec()], FieldConfig::rationals())?.kernel_basis();
    let mut chosen: Vec<Vec<BigRational>> = vec![p.to_vec()];
    for w in kernel {
        if chosen.len() == width - 1 {
            break;
        }
        chosen.push(w);
        if rank_q(&chosen, width) != chosen.len() {
            chosen.pop();
        }
    }
    chosen.remove(0);
    Ok(chosen)
}

/// Rows spanning the orthogonal complement of the degree-`d` piece of the ideal
/// generated by `forms`: their common kernel is exactly the forms vanishing on the
/// linear space cut out by `forms`.
fn containment_rows<F: Field>(
    f: &F,
    forms: &[Vec<F::Elem>],
    basis: &MonomialBasis,
) -> Vec<Vec<F::Elem>> {
    let (n, d) = (basis.n(), basis.d());
    let lower = monomial_basis(n, d - 1);
    let mut gens = Vec::with_capacity(forms.len() * lower.len());
    for l in forms {
        for m in lower.monomials() {
            let mut row = vec![f.zero(); basis.len()];
            for (j, lj) in l.iter().enumerate() {
                if f.is_zero(lj) {
                    continue;
                }
                let mut e = m.0.clone();
                e[j] += 1;
                let idx = basis.index_of(&MultiIndex(e)).expect("raised monomial");
                row[idx] = f.add(&row[idx], lj);
            }
            gens.push(row);
        }
    }
    let pivots = rref(f, &mut gens, basis.len());
    kernel_from_rref(f, &gens, &pivots, basis.len())
}

/// Condition rows of `spec` in degree `d`, computed in the field `f`. Row order follows
/// component order.
pub fn condition_rows_in<F: Field>(
    f: &F,
    spec: &SchemeSpec,
    d: usize,
) -> Result<Vec<Vec<F::Elem>>> {
    if d == 0 {
        return Err(Error::InvalidInput(
            "condition matrices need degree d >= 1".into(),
        ));
    }
    spec.validate()?;
    let width = spec.n + 1;
    let basis = monomial_basis(spec.n, d);
    let mut rows = Vec::new();
    for c in &spec.components {
        match c {
            SchemeComponent::DoublePoint { point } => {
                let x = to_field(f, point.coords(), "point")?;
                rows.push(evaluation_row_in(f, &x, &basis));
                let pivot = point.pivot();
                for i in (0..width).filter(|&i| i != pivot) {
                    rows.push(derivative_row_in(f, &x, &unit(f, width, i), &basis));
                }
            }
            SchemeComponent::SimplePoint { point } => {
                let x = to_field(f, point.coords(), "point")?;
                rows.push(evaluation_row_in(f, &x, &basis));
            }
            SchemeComponent::TraceDoublePoint { point, hyperplane } => {
                let x = to_field(f, point.coords(), "point")?;
                rows.push(evaluation_row_in(f, &x, &basis));
                for v in trace_directions(point.coords(), hyperplane)? {
                    let v = to_field(f, &v, "direction")?;
                    rows.push(derivative_row_in(f, &x, &v, &basis));
                }
            }
            SchemeComponent::Jet { point, dirs } => {
                let x = to_field(f, point.coords(), "point")?;
                rows.push(evaluation_row_in(f, &x, &basis));
                for v in dirs {
                    let v = to_field(f, v, "direction")?;
                    rows.push(derivative_row_in(f, &x, &v, &basis));
                }
            }
            SchemeComponent::ContainLinear { forms } => {
                let forms = forms
                    .iter()
                    .map(|l| to_field(f, l, "linear form"))
                    .collect::<Result<Vec<_>>>()?;
                rows.extend(containment_rows(f, &forms, &basis));
            }
        }
    }
    Ok(rows)
}

fn build<F: MatrixField>(f: &F, spec: &SchemeSpec, d: usize) -> Result<ExactMatrix> {
    let rows = condition_rows_in(f, spec, d)?;
    Ok(pack_rows(f, monomial_basis(spec.n, d).len(), rows))
}

/// Matrix of the linear conditions `spec` imposes on degree-`d` forms; columns follow
/// the graded-lex monomial basis and the kernel is `I_X(d)`.
pub fn condition_matrix(spec: &SchemeSpec, d: usize, field: FieldConfig) -> Result<ExactMatrix> {
    with_field!(field, |f| build(&f, spec, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyspace::{Form, ProjPoint};
    use crate::schemes::random::{random_double_points, random_point_in, rng};
    use num_traits::Zero;

    fn qv(v: &[i64]) -> Vec<BigRational> {
        v.iter()
            .map(|&x| BigRational::from_integer(x.into()))
            .collect()
    }

    #[test]
    fn one_double_point_in_the_plane() {
        let spec = SchemeSpec::new(2).with(SchemeComponent::double(ProjPoint::coordinate(2, 0)));
        let m = condition_matrix(&spec, 2, FieldConfig::rationals()).unwrap();
        assert_eq!((m.rows(), m.cols(), m.rank()), (3, 6, 3));
    }

    #[test]
    fn five_double_points_on_plane_quartics() {
        let cfg = FieldConfig::default_prime();
        let spec = random_double_points(2, 5, &mut rng(7), &cfg);
        assert_eq!(condition_matrix(&spec, 4, cfg).unwrap().rank(), 14);
    }

    #[test]
    fn double_point_kernel_forms_are_singular() {
        let spec = random_double_points(3, 4, &mut rng(1), &FieldConfig::rationals());
        let m = condition_matrix(&spec, 3, FieldConfig::rationals()).unwrap();
        assert_eq!(m.rows(), spec.degree().unwrap());
        for v in m.kernel_basis() {
            let form = Form::from_coeffs(3, 3, v).unwrap();
            for c in &spec.components {
                let p = c.point().unwrap();
                for g in form.gradient() {
                    assert!(g.eval(p.coords()).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn containment_kernel_vanishes_on_the_subspace() {
        // the line x2 = x3 = 0 in P^3
        let forms = vec![qv(&[0, 0, 1, 0]), qv(&[0, 0, 0, 1])];
        let spec = SchemeSpec::new(3).with(SchemeComponent::ContainLinear {
            forms: forms.clone(),
        });
        let m = condition_matrix(&spec, 3, FieldConfig::rationals()).unwrap();
        let kernel = m.kernel_basis();
        // dim S^3 - dim S^3(P^1) = 20 - 4
        assert_eq!(kernel.len(), 16);
        let mut r = rng(3);
        for _ in 0..50 {
            let p = random_point_in(&forms, 3, &mut r, &FieldConfig::rationals()).unwrap();
            for v in &kernel {
                let form = Form::from_coeffs(3, 3, v.clone()).unwrap();
                assert!(form.eval(p.coords()).unwrap().is_zero());
            }
        }
        let zp = condition_matrix(&spec, 3, FieldConfig::default_prime()).unwrap();
        assert_eq!(zp.rows(), 4);
        assert_eq!(zp.rank(), 4);
    }

    #[test]
    fn trace_double_point_has_n_conditions() {
        let h = qv(&[0, 0, 0, 1]);
        let spec = SchemeSpec::new(3).with(SchemeComponent::TraceDoublePoint {
            point: ProjPoint::from_integers(&[1, 2, 3, 0]).unwrap(),
            hyperplane: h,
        });
        let m = condition_matrix(&spec, 2, FieldConfig::rationals()).unwrap();
        assert_eq!((m.rows(), m.rank()), (3, 3));
    }
}
