use num_rational::BigRational;
use num_traits::Zero;

use super::form::Form;
use super::monomial::{monomial_basis, MonomialBasis};
use super::point::ProjPoint;
use crate::error::{Error, Result};
use crate::exactlinalg::{ExactMatrix, Field, FieldConfig, MatrixField, Rationals};

/// `table[i][e] = x_i^e` for `e <= d`.
fn power_table<F: Field>(f: &F, x: &[F::Elem], d: usize) -> Vec<Vec<F::Elem>> {
    x.iter()
        .map(|xi| {
            let mut row = Vec::with_capacity(d + 1);
            row.push(f.one());
            for e in 1..=d {
                let next = f.mul(&row[e - 1], xi);
                row.push(next);
            }
            row
        })
        .collect()
}

/// Every monomial of `basis` evaluated at `x`.
pub fn evaluation_row_in<F: Field>(f: &F, x: &[F::Elem], basis: &MonomialBasis) -> Vec<F::Elem> {
    let table = power_table(f, x, basis.d());
    basis
        .monomials()
        .iter()
        .map(|m| {
            m.0.iter()
                .enumerate()
                .fold(f.one(), |acc, (i, &e)| f.mul(&acc, &table[i][e as usize]))
        })
        .collect()
}

/// Directional derivative `D_v` of every monomial of `basis`, evaluated at `x`.
pub fn derivative_row_in<F: Field>(
    f: &F,
    x: &[F::Elem],
    v: &[F::Elem],
    basis: &MonomialBasis,
) -> Vec<F::Elem> {
    let table = power_table(f, x, basis.d());
    let active: Vec<usize> = (0..v.len()).filter(|&i| !f.is_zero(&v[i])).collect();
    basis
        .monomials()
        .iter()
        .map(|m| {
            let mut total = f.zero();
            for &i in &active {
                let ei = m.0[i];
                if ei == 0 {
                    continue;
                }
                let mut term = f.mul(&v[i], &f.from_i64(ei as i64));
                for (j, &e) in m.0.iter().enumerate() {
                    let e = if j == i { e - 1 } else { e };
                    term = f.mul(&term, &table[j][e as usize]);
                }
                total = f.add(&total, &term);
            }
            total
        })
        .collect()
}

fn check_len(len: usize, basis: &MonomialBasis, what: &str) -> Result<()> {
    if len != basis.n() + 1 {
        return Err(Error::DimensionMismatch(format!(
            "{what} has {len} coordinates, basis lives in {} variables",
            basis.n() + 1
        )));
    }
    Ok(())
}

/// Coordinates of `p^d` on the Veronese variety: each monomial evaluated at `p`.
pub fn evaluation_row(p: &ProjPoint, basis: &MonomialBasis) -> Result<Vec<BigRational>> {
    check_len(p.coords().len(), basis, "point")?;
    Ok(evaluation_row_in(&Rationals, p.coords(), basis))
}

/// Directional derivatives of the monomials along `v` at `p`. Rejects `v = 0`.
pub fn derivative_row(
    p: &ProjPoint,
    v: &[BigRational],
    basis: &MonomialBasis,
) -> Result<Vec<BigRational>> {
    check_len(p.coords().len(), basis, "point")?;
    check_len(v.len(), basis, "direction")?;
    if v.iter().all(Zero::is_zero) {
        return Err(Error::InvalidInput(
            "derivative along the zero direction".into(),
        ));
    }
    Ok(derivative_row_in(&Rationals, p.coords(), v, basis))
}

/// Expands `sum c_i l_i^d` into dense graded-lex coordinates.
pub fn power_sum_expand(terms: &[(BigRational, Vec<BigRational>)], d: usize) -> Result<Form> {
    let Some((_, first)) = terms.first() else {
        return Err(Error::InvalidInput(
            "power sum needs at least one term to fix n".into(),
        ));
    };
    let n = first.len() - 1;
    let basis = monomial_basis(n, d);
    let multinomials: Vec<BigRational> = basis
        .multinomials()
        .into_iter()
        .map(BigRational::from_integer)
        .collect();
    let mut coeffs = vec![BigRational::zero(); basis.len()];
    for (c, l) in terms {
        check_len(l.len(), &basis, "linear form")?;
        if c.is_zero() {
            continue;
        }
        let row = evaluation_row_in(&Rationals, l, &basis);
        for ((acc, r), m) in coeffs.iter_mut().zip(row).zip(&multinomials) {
            *acc += c * r * m;
        }
    }
    Form::from_coeffs(n, d, coeffs)
}

/// Rational catalecticant entries: rows indexed by degree-`(d-a)` monomials `beta`,
/// columns by degree-`a` monomials `alpha`, entry `f_{alpha+beta} / multinomial(alpha+beta)`.
///
/// With this normalization `l^d` has entry `l^alpha l^beta`, a rank-one matrix, and for
/// binary forms written as `sum C(d,i) a_i x^(d-i) y^i` the matrix is the Hankel `(a_{i+j})`.
pub fn catalecticant_entries(f: &Form, a: usize) -> Result<(usize, usize, Vec<BigRational>)> {
    if a > f.d() {
        return Err(Error::InvalidInput(format!(
            "catalecticant order {a} exceeds degree {}",
            f.d()
        )));
    }
    let n = f.n();
    let full = f.basis();
    let cols = monomial_basis(n, a);
    let rows = monomial_basis(n, f.d() - a);
    let normalized: Vec<BigRational> = f
        .coeffs()
        .iter()
        .zip(full.multinomials())
        .map(|(c, m)| c / BigRational::from_integer(m))
        .collect();
    let mut out = Vec::with_capacity(rows.len() * cols.len());
    for beta in rows.monomials() {
        for alpha in cols.monomials() {
            let idx = full.index_of(&alpha.add(beta)).expect("degree-d monomial");
            out.push(normalized[idx].clone());
        }
    }
    Ok((rows.len(), cols.len(), out))
}

/// Matrix of the contraction `S^a V^* -> S^(d-a) V` of `f`, over the rationals.
pub fn catalecticant(f: &Form, a: usize) -> Result<ExactMatrix> {
    catalecticant_in(f, a, FieldConfig::rationals())
}

/// [`catalecticant`] reduced into `field`.
pub fn catalecticant_in(f: &Form, a: usize, field: FieldConfig) -> Result<ExactMatrix> {
    let (r, c, entries) = catalecticant_entries(f, a)?;
    ExactMatrix::from_rationals(r, c, entries, field)
}

/// Runs `$body` with `$f` bound to the concrete field named by `$cfg`.
#[macro_export]
#[doc(hidden)]
macro_rules! with_field {
    ($cfg:expr, |$f:ident| $body:expr) => {{
        let cfg: &$crate::exactlinalg::FieldConfig = &$cfg;
        match cfg.kind {
            $crate::exactlinalg::FieldKind::Rationals => {
                let $f = $crate::exactlinalg::Rationals;
                $body
            }
            $crate::exactlinalg::FieldKind::PrimeField => {
                let $f = $crate::exactlinalg::PrimeField::new(
                    cfg.prime.expect("prime field without prime"),
                );
                $body
            }
        }
    }};
}

/// Packs rows assembled in `f` into an [`ExactMatrix`].
pub(crate) fn pack_rows<F: MatrixField>(
    f: &F,
    cols: usize,
    rows: Vec<Vec<F::Elem>>,
) -> ExactMatrix {
    let r = rows.len();
    let data: Vec<F::Elem> = rows.into_iter().flatten().collect();
    f.pack(r, cols, data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn qv(v: &[i64]) -> Vec<BigRational> {
        v.iter()
            .map(|&x| BigRational::from_integer(x.into()))
            .collect()
    }

    #[test]
    fn evaluation_rows() {
        let b = monomial_basis(2, 2);
        let e0 = ProjPoint::coordinate(2, 0);
        assert_eq!(evaluation_row(&e0, &b).unwrap(), qv(&[1, 0, 0, 0, 0, 0]));
        let p = ProjPoint::from_integers(&[1, 1]).unwrap();
        assert_eq!(
            evaluation_row(&p, &monomial_basis(1, 2)).unwrap(),
            qv(&[1, 1, 1])
        );
    }

    #[test]
    fn derivative_rows() {
        let b = monomial_basis(2, 2);
        let e0 = ProjPoint::coordinate(2, 0);
        assert_eq!(
            derivative_row(&e0, &qv(&[0, 1, 0]), &b).unwrap(),
            qv(&[0, 1, 0, 0, 0, 0])
        );
        assert_eq!(
            derivative_row(&e0, &qv(&[1, 0, 0]), &b).unwrap(),
            qv(&[2, 0, 0, 0, 0, 0])
        );
        assert!(derivative_row(&e0, &qv(&[0, 0, 0]), &b).is_err());
    }

    #[test]
    fn power_sums() {
        let x = qv(&[1, 0]);
        let y = qv(&[0, 1]);
        let xy = qv(&[1, 1]);
        let one = BigRational::one();
        let f = power_sum_expand(
            &[
                (one.clone(), x.clone()),
                (one.clone(), y),
                (one.clone(), xy),
            ],
            5,
        )
        .unwrap();
        assert_eq!(f.coeffs(), qv(&[2, 5, 10, 10, 5, 2]).as_slice());
        let z = power_sum_expand(&[(one.clone(), x.clone()), (-one, x)], 4).unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn catalecticant_examples() {
        let one = BigRational::one();
        let l = qv(&[2, -1, 3]);
        let f = power_sum_expand(&[(one.clone(), l)], 4).unwrap();
        for a in 0..=4 {
            assert_eq!(catalecticant(&f, a).unwrap().rank(), 1);
        }
        // x^5 + y^5 has a rank-2 Hankel
        let g = Form::from_integers(1, 5, &[1, 0, 0, 0, 0, 1]).unwrap();
        let m = catalecticant(&g, 2).unwrap();
        assert_eq!((m.rows(), m.cols(), m.rank()), (4, 3, 2));
    }
}
