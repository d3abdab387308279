use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

/// Exponent vector of a monomial in `n + 1` variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `d! / prod(e_i!)`.
    pub fn multinomial(&self) -> BigInt {
        let mut num = factorial(self.degree() as u32);
        for &e in &self.0 {
            num /= factorial(e);
        }
        num
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{i}")?;
            } else {
                write!(f, "x{i}^{e}")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

pub(crate) fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `C(n, k)` as a `u64`; panics on overflow.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    u64::try_from(acc).expect("binomial coefficient overflows u64")
}

/// The degree-`d` monomials in `x_0..x_n`, in graded-lex order (within one degree:
/// lexicographically decreasing exponent vectors, so `x_0^d` comes first).
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    n: usize,
    d: usize,
    order: Vec<MultiIndex>,
    index: HashMap<MultiIndex, usize>,
}

impl MonomialBasis {
    pub fn new(n: usize, d: usize) -> Self {
        let mut order = Vec::with_capacity(binomial(n + d, n) as usize);
        let mut current = vec![0u32; n + 1];
        fill(&mut order, &mut current, 0, d as u32);
        let index = order
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        MonomialBasis { n, d, order, index }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn monomials(&self) -> &[MultiIndex] {
        &self.order
    }

    pub fn get(&self, i: usize) -> &MultiIndex {
        &self.order[i]
    }

    pub fn index_of(&self, m: &MultiIndex) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn multinomials(&self) -> Vec<BigInt> {
        self.order.iter().map(MultiIndex::multinomial).collect()
    }
}

fn fill(out: &mut Vec<MultiIndex>, current: &mut [u32], pos: usize, remaining: u32) {
    if pos + 1 == current.len() {
        current[pos] = remaining;
        out.push(MultiIndex(current.to_vec()));
        return;
    }
    for e in (0..=remaining).rev() {
        current[pos] = e;
        fill(out, current, pos + 1, remaining - e);
    }
    current[pos] = 0;
}

/// Number of monomials of degree `d` in `n + 1` variables.
pub fn space_dim(n: usize, d: usize) -> u64 {
    binomial(n + d, n)
}

/// `monomial_basis(n, d)`.
pub fn monomial_basis(n: usize, d: usize) -> MonomialBasis {
    MonomialBasis::new(n, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plane_conics() {
        let b = monomial_basis(2, 2);
        let want: Vec<Vec<u32>> = vec![
            vec![2, 0, 0],
            vec![1, 1, 0],
            vec![1, 0, 1],
            vec![0, 2, 0],
            vec![0, 1, 1],
            vec![0, 0, 2],
        ];
        assert_eq!(
            b.monomials()
                .iter()
                .map(|m| m.0.clone())
                .collect::<Vec<_>>(),
            want
        );
    }

    #[test]
    fn binary_quintics() {
        let b = monomial_basis(1, 5);
        assert_eq!(b.len(), 6);
        assert_eq!(b.get(0).0, vec![5, 0]);
        assert_eq!(b.get(5).0, vec![0, 5]);
    }

    #[test]
    fn sextics_in_p3() {
        assert_eq!(monomial_basis(3, 6).len(), 84);
    }

    #[test]
    fn lengths_match_binomials_and_order_is_strict() {
        for n in 1..6 {
            for d in 0..7 {
                let b = monomial_basis(n, d);
                assert_eq!(b.len() as u64, binomial(n + d, n));
                assert!(b.monomials().windows(2).all(|w| w[0] > w[1]));
                assert!(b.monomials().iter().all(|m| m.degree() == d));
                assert_eq!(b.get(0).0[0] as usize, d);
            }
        }
    }

    #[test]
    fn multinomial_values() {
        assert_eq!(MultiIndex(vec![2, 1, 1]).multinomial(), BigInt::from(12));
        assert_eq!(MultiIndex(vec![0, 5]).multinomial(), BigInt::from(1));
        assert_eq!(binomial(13, 4), 715);
        assert_eq!(MultiIndex(vec![1, 0, 2]).to_string(), "x0*x2^2");
    }
}
