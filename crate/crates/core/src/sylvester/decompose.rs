use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::poly::{eval, is_squarefree, trim};
use super::{odd_half, sylvester_g, BinaryForm};
use crate::error::{Error, Result};
use crate::exactlinalg::{ExactMatrix, FieldConfig};
use crate::polyspace::binomial;
use crate::schemes::random::rng;

/// Root separation and residual acceptance.
pub const DEFAULT_TOL: f64 = 1e-8;

/// `c (p x + q y)^d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub c: Complex64,
    pub form: [Complex64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub d: usize,
    pub terms: Vec<Term>,
    /// Max-norm of the coefficients of `f - sum c_i l_i^d`.
    pub residual: f64,
    /// Roots and constants were found exactly over the rationals.
    pub exact: bool,
}

fn to_f64(v: &BigRational) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

/// Plain coefficients of `sum c_i l_i^d`, minus those of `f`, in max-norm.
pub fn verify_decomposition(f: &BinaryForm, dec: &Decomposition) -> f64 {
    let d = f.d;
    f.coeffs()
        .iter()
        .enumerate()
        .map(|(k, fk)| {
            let b = binomial(d, k) as f64;
            let s: Complex64 = dec
                .terms
                .iter()
                .map(|t| t.c * b * t.form[0].powu((d - k) as u32) * t.form[1].powu(k as u32))
                .sum();
            (Complex64::new(to_f64(fk), 0.0) - s).norm()
        })
        .fold(0.0, f64::max)
}

fn horner(p: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
    // value and derivative, coefficients lowest first
    let mut v = Complex64::zero();
    let mut dv = Complex64::zero();
    for c in p.iter().rev() {
        dv = dv * x + v;
        v = v * x + c;
    }
    (v, dv)
}

/// Complex roots of a polynomial (lowest coefficient first, nonzero leading term) from
/// the eigenvalues of its companion matrix, polished by Newton steps.
fn roots(p: &[f64]) -> Vec<Complex64> {
    let r = p.len() - 1;
    if r == 0 {
        return Vec::new();
    }
    let lead = p[r];
    let mut comp = DMatrix::<f64>::zeros(r, r);
    for i in 1..r {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..r {
        comp[(i, r - 1)] = -p[i] / lead;
    }
    let cp: Vec<Complex64> = p.iter().map(|&c| Complex64::new(c, 0.0)).collect();
    comp.complex_eigenvalues()
        .iter()
        .map(|&z0| {
            let mut z = z0;
            for _ in 0..8 {
                let (v, dv) = horner(&cp, z);
                if dv.norm() == 0.0 {
                    break;
                }
                let step = v / dv;
                z -= step;
                if step.norm() <= 1e-17 * z.norm().max(1.0) {
                    break;
                }
            }
            z
        })
        .collect()
}

/// Best rational approximation with denominator at most `max_den`.
fn rationalize(x: f64, max_den: i64) -> Option<BigRational> {
    if !x.is_finite() || x.abs() > 1e12 {
        return None;
    }
    let (mut h0, mut h1, mut k0, mut k1) = (0i128, 1i128, 1i128, 0i128);
    let mut v = x;
    for _ in 0..64 {
        let a = v.floor();
        let ai = a as i128;
        let (h2, k2) = (ai * h1 + h0, ai * k1 + k0);
        if k2 > max_den as i128 {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = v - a;
        if frac.abs() < 1e-12 {
            break;
        }
        v = 1.0 / frac;
    }
    (k1 != 0).then(|| BigRational::new(BigInt::from(h1), BigInt::from(k1)))
}

/// Exact linear forms `(p, q)` when every root of the covariant is rational.
fn exact_forms(
    gx: &[BigRational],
    infinity: bool,
    numeric: &[Complex64],
) -> Option<Vec<[BigRational; 2]>> {
    let mut out = Vec::new();
    for z in numeric {
        if z.im.abs() > 1e-9 {
            return None;
        }
        let r = rationalize(z.re, 1_000_000)?;
        if !eval(gx, &r).is_zero() {
            return None;
        }
        out.push([BigRational::from_integer(1.into()), -r]);
    }
    if infinity {
        out.push([BigRational::zero(), BigRational::from_integer(1.into())]);
    }
    Some(out)
}

fn system_rows(d: usize, forms: &[[BigRational; 2]]) -> Vec<BigRational> {
    (0..=d)
        .flat_map(|k| {
            forms.iter().map(move |[p, q]| {
                let mut v = BigRational::from_integer(1.into());
                for _ in 0..d - k {
                    v *= p;
                }
                for _ in 0..k {
                    v *= q;
                }
                v
            })
        })
        .collect()
}

/// Writes an odd form `f` of degree `2m+1` as a sum of `m+1` powers of linear forms,
/// read off from the roots of [`sylvester_g`].
///
/// Forms are normalized to `x - r y`, or `y` for the root at infinity. Fails with
/// [`Error::Degenerate`] when the covariant vanishes (`f` has smaller rank) or has a
/// repeated root, and when two numerical roots are closer than `tol`.
pub fn decompose_odd(f: &BinaryForm, tol: f64) -> Result<Decomposition> {
    let m = odd_half(f)?;
    let d = f.d;
    let g = sylvester_g(f)?;
    if g.is_zero() {
        return Err(Error::Degenerate(format!(
            "the covariant vanishes identically: f lies in the {m}-th secant of the rational normal curve"
        )));
    }
    // g(x, 1) with the coefficient of x^j at index j
    let c = g.coeffs();
    let gx = trim(c.iter().rev().cloned().collect());
    let infinity = gx.len() < m + 2;
    if gx.len() < m + 1 || !is_squarefree(&gx) {
        return Err(Error::Degenerate(
            "the covariant has a repeated root".into(),
        ));
    }
    let numeric = roots(&gx.iter().map(to_f64).collect::<Vec<_>>());
    for i in 0..numeric.len() {
        for j in i + 1..numeric.len() {
            if (numeric[i] - numeric[j]).norm() < tol {
                return Err(Error::Degenerate(format!(
                    "roots {} and {} of the covariant are closer than {tol:e}",
                    numeric[i], numeric[j]
                )));
            }
        }
    }

    if let Some(forms) = exact_forms(&gx, infinity, &numeric) {
        let a = ExactMatrix::from_rationals(
            d + 1,
            m + 1,
            system_rows(d, &forms),
            FieldConfig::rationals(),
        )?;
        if let Some(cs) = a.solve(&f.a)? {
            let terms = cs
                .iter()
                .zip(&forms)
                .map(|(c, [p, q])| Term {
                    c: Complex64::new(to_f64(c), 0.0),
                    form: [
                        Complex64::new(to_f64(p), 0.0),
                        Complex64::new(to_f64(q), 0.0),
                    ],
                })
                .collect();
            let mut dec = Decomposition {
                d,
                terms,
                residual: 0.0,
                exact: true,
            };
            dec.residual = verify_decomposition(f, &dec);
            return Ok(dec);
        }
    }

    let one = Complex64::new(1.0, 0.0);
    let mut forms: Vec<[Complex64; 2]> = numeric.iter().map(|z| [one, -z]).collect();
    if infinity {
        forms.push([Complex64::zero(), one]);
    }
    // normalized coefficients: a_k = sum c_i p_i^(d-k) q_i^k
    let a = DMatrix::from_fn(d + 1, m + 1, |k, i| {
        forms[i][0].powu((d - k) as u32) * forms[i][1].powu(k as u32)
    });
    let b = DVector::from_iterator(d + 1, f.a.iter().map(|v| Complex64::new(to_f64(v), 0.0)));
    let cs = a
        .svd(true, true)
        .solve(&b, 1e-14)
        .map_err(|e| Error::Degenerate(format!("least-squares solve failed: {e}")))?;
    let terms = cs
        .iter()
        .zip(&forms)
        .map(|(&c, &form)| Term { c, form })
        .collect();
    let mut dec = Decomposition {
        d,
        terms,
        residual: 0.0,
        exact: false,
    };
    dec.residual = verify_decomposition(f, &dec);
    Ok(dec)
}

/// `sum c_i (x - r_i y)^(2m+1)` with `m+1` distinct rational `r_i` in `[-2, 2]` and
/// nonzero rational `c_i` in `[-3, 3]`. Returns the form and the `(c_i, r_i)`.
pub fn random_odd_instance(m: usize, seed: u64) -> (BinaryForm, Vec<(BigRational, BigRational)>) {
    let mut r = rng(seed);
    let mut picked: Vec<(BigRational, BigRational)> = Vec::new();
    while picked.len() < m + 1 {
        let root = BigRational::new(r.random_range(-32i64..=32).into(), 16.into());
        if picked.iter().any(|(_, x)| *x == root) {
            continue;
        }
        let c = loop {
            let v = r.random_range(-12i64..=12);
            if v != 0 {
                break BigRational::new(v.into(), 4.into());
            }
        };
        picked.push((c, root));
    }
    let terms: Vec<(BigRational, [BigRational; 2])> = picked
        .iter()
        .map(|(c, x)| (c.clone(), [BigRational::from_integer(1.into()), -x.clone()]))
        .collect();
    (
        BinaryForm::power_sum(2 * m + 1, &terms).expect("odd degree"),
        picked,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_fifth_powers() {
        let f = BinaryForm::from_integers(&[2, 1, 1, 1, 1, 2]).unwrap();
        let dec = decompose_odd(&f, DEFAULT_TOL).unwrap();
        assert!(dec.exact);
        assert_eq!(dec.residual, 0.0);
        let mut got: Vec<(f64, f64, f64)> = dec
            .terms
            .iter()
            .map(|t| (t.form[0].re, t.form[1].re, t.c.re))
            .collect();
        got.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(got, vec![(0.0, 1.0, 1.0), (1.0, 0.0, 1.0), (1.0, 1.0, 1.0)]);
    }

    #[test]
    fn smaller_rank_is_degenerate() {
        let f = BinaryForm::from_integers(&[1, 0, 0, 0, 0, 1]).unwrap();
        assert!(matches!(
            decompose_odd(&f, DEFAULT_TOL),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn tangential_form_is_degenerate() {
        // x^4 y has covariant with a repeated root
        let f = BinaryForm::from_coeffs(
            [0, 1, 0, 0, 0, 0]
                .map(|v| BigRational::from_integer(v.into()))
                .to_vec(),
        )
        .unwrap();
        assert!(matches!(
            decompose_odd(&f, DEFAULT_TOL),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn septic_round_trip() {
        let (f, truth) = random_odd_instance(3, 5);
        let dec = decompose_odd(&f, DEFAULT_TOL).unwrap();
        assert!(dec.residual < 1e-8, "{}", dec.residual);
        for (_, x) in &truth {
            let x = x.to_f64().unwrap();
            assert!(dec.terms.iter().any(|t| (t.form[1] + x).norm() < 1e-8));
        }
    }

    #[test]
    fn irrational_roots_go_through_the_companion_matrix() {
        for a in [[1, 2, -1, 3, 0, 5, 0, -2], [3, -1, 0, 0, 2, 1, -4, 1]] {
            let f = BinaryForm::from_integers(&a).unwrap();
            let dec = decompose_odd(&f, DEFAULT_TOL).unwrap();
            assert!(!dec.exact);
            assert_eq!(dec.terms.len(), 4);
            assert!(dec.residual < 1e-8, "{}", dec.residual);
        }
    }

    #[test]
    fn perturbed_constant_shows_in_residual() {
        let f = BinaryForm::from_integers(&[2, 1, 1, 1, 1, 2]).unwrap();
        let mut dec = decompose_odd(&f, DEFAULT_TOL).unwrap();
        dec.terms[0].c += 1e-6;
        let r = verify_decomposition(&f, &dec);
        assert!(r > 5e-7 && r < 1e-4, "{r}");
        let empty = Decomposition {
            d: 5,
            terms: vec![],
            residual: 0.0,
            exact: false,
        };
        assert_eq!(verify_decomposition(&f, &empty), 10.0);
    }
}
