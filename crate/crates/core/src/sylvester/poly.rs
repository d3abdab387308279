//! Dense univariate polynomials over the rationals, lowest degree first.

use num_rational::BigRational;
use num_traits::Zero;

pub(crate) fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

pub(crate) fn derivative(p: &[BigRational]) -> Vec<BigRational> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigRational::from_integer((i as i64).into()))
        .collect()
}

fn rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = trim(a.to_vec());
    let lead = b.last().expect("nonzero divisor");
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let factor = r.last().unwrap() / lead;
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &factor * c;
        }
        r.pop();
        r = trim(r);
    }
    r
}

/// Degree of `gcd(a, b)`; both must be nonzero.
pub(crate) fn gcd_degree(a: &[BigRational], b: &[BigRational]) -> usize {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = rem(&a, &b);
        a = b;
        b = r;
    }
    a.len().saturating_sub(1)
}

pub(crate) fn eval(p: &[BigRational], x: &BigRational) -> BigRational {
    p.iter()
        .rev()
        .fold(BigRational::zero(), |acc, c| acc * x + c)
}

/// No repeated root over the algebraic closure.
pub(crate) fn is_squarefree(p: &[BigRational]) -> bool {
    let p = trim(p.to_vec());
    if p.len() <= 2 {
        return true;
    }
    gcd_degree(&p, &derivative(&p)) == 0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qv(v: &[i64]) -> Vec<BigRational> {
        v.iter()
            .map(|&x| BigRational::from_integer(x.into()))
            .collect()
    }

    #[test]
    fn squarefree() {
        // (x-1)^2 (x+2)
        assert!(!is_squarefree(&qv(&[2, -3, 0, 1])));
        // x^3 - x
        assert!(is_squarefree(&qv(&[0, -1, 0, 1])));
        assert_eq!(
            eval(&qv(&[0, -1, 0, 1]), &BigRational::from_integer(2.into())),
            BigRational::from_integer(6.into())
        );
    }
}
