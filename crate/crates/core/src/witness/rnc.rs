use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlinalg::{ExactMatrix, FieldConfig};
use crate::polyspace::{evaluation_row, exact, monomial_basis, ProjPoint};

/// A rational normal curve of degree `n` in `P^n`: `x_r(s, t) = sum_j param[r][j] s^(n-j) t^j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalNormalCurve {
    pub n: usize,
    #[serde(
        serialize_with = "exact::serialize_matrix",
        deserialize_with = "exact::deserialize_matrix"
    )]
    pub param: Vec<Vec<BigRational>>,
    /// Points the curve was built through, with their parameters `(s, t)`.
    pub points: Vec<ProjPoint>,
    #[serde(
        serialize_with = "exact::serialize_matrix",
        deserialize_with = "exact::deserialize_matrix"
    )]
    pub params: Vec<Vec<BigRational>>,
}

fn q(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

/// Coefficients (by power of `t`) of `prod (t - a s)` over `roots`.
fn product_of_linear(roots: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::one()];
    for a in roots {
        let mut next = vec![BigRational::zero(); out.len() + 1];
        for (j, c) in out.iter().enumerate() {
            next[j + 1] += c;
            next[j] -= c * a;
        }
        out = next;
    }
    out
}

impl RationalNormalCurve {
    /// `x_i = s^(n-i) t^i`.
    pub fn standard(n: usize) -> Self {
        let param = (0..=n)
            .map(|i| (0..=n).map(|j| if i == j { q(1) } else { q(0) }).collect())
            .collect();
        RationalNormalCurve {
            n,
            param,
            points: Vec::new(),
            params: Vec::new(),
        }
    }

    pub fn point_at(&self, s: &BigRational, t: &BigRational) -> Result<ProjPoint> {
        let n = self.n;
        let mut powers = Vec::with_capacity(n + 1);
        for j in 0..=n {
            let mut m = BigRational::one();
            for _ in 0..n - j {
                m *= s;
            }
            for _ in 0..j {
                m *= t;
            }
            powers.push(m);
        }
        let x = self
            .param
            .iter()
            .map(|row| row.iter().zip(&powers).map(|(a, b)| a * b).sum())
            .collect();
        ProjPoint::new(x)
    }

    /// The image of `A`: `x -> A x`.
    pub fn transformed(&self, a: &ExactMatrix) -> Result<Self> {
        if a.rows() != self.n + 1 || a.cols() != self.n + 1 || a.rank() != self.n + 1 {
            return Err(Error::InvalidInput(
                "substitution must be an invertible (n+1)x(n+1) matrix".into(),
            ));
        }
        let mut param = vec![vec![BigRational::zero(); self.n + 1]; self.n + 1];
        for (r, row) in param.iter_mut().enumerate() {
            for (i, src) in self.param.iter().enumerate() {
                let c = a.entry(r, i);
                for (acc, v) in row.iter_mut().zip(src) {
                    *acc += &c * v;
                }
            }
        }
        let points = self
            .points
            .iter()
            .map(|p| ProjPoint::new(a.mul_vec(p.coords())?))
            .collect::<Result<_>>()?;
        Ok(RationalNormalCurve {
            n: self.n,
            param,
            points,
            params: self.params.clone(),
        })
    }

    /// Substitution check: the parametrization is an embedding and hits every defining
    /// point at its recorded parameter.
    pub fn verify(&self) -> bool {
        let independent = ExactMatrix::from_rows(self.n + 1, &self.param, FieldConfig::rationals())
            .map(|m| m.rank() == self.n + 1)
            .unwrap_or(false);
        independent
            && self.points.len() == self.params.len()
            && self
                .points
                .iter()
                .zip(&self.params)
                .all(|(p, st)| self.point_at(&st[0], &st[1]).is_ok_and(|x| &x == p))
    }

    /// Basis of the quadrics containing the curve; they cut it out.
    pub fn quadrics(&self) -> Result<Vec<Vec<BigRational>>> {
        let basis = monomial_basis(self.n, 2);
        let rows = (0..3 * self.n as i64 + 3)
            .map(|t| evaluation_row(&self.point_at(&q(1), &q(t))?, &basis))
            .collect::<Result<Vec<_>>>()?;
        Ok(ExactMatrix::from_rows(basis.len(), &rows, FieldConfig::rationals())?.kernel_basis())
    }

    pub fn contains(&self, p: &ProjPoint) -> Result<bool> {
        let row = evaluation_row(p, &monomial_basis(self.n, 2))?;
        Ok(self.quadrics()?.iter().all(|qd| {
            qd.iter()
                .zip(&row)
                .map(|(a, b)| a * b)
                .sum::<BigRational>()
                .is_zero()
        }))
    }
}

/// The rational normal curve through `n + 3` points of `P^n` in general position.
///
/// The first `n + 1` points and the next one are moved to the coordinate simplex and
/// the unit point; there the curve is `x_i = 1 / (t - a_i)`, with the `a_i` fixed by
/// the last point.
pub fn rnc_through(points: &[ProjPoint]) -> Result<RationalNormalCurve> {
    let Some(first) = points.first() else {
        return Err(Error::InvalidInput("no points".into()));
    };
    let n = first.n();
    if n == 0 || points.len() != n + 3 {
        return Err(Error::InvalidInput(format!(
            "a rational normal curve in P^{n} needs {} points, got {}",
            n + 3,
            points.len()
        )));
    }
    if points.iter().any(|p| p.n() != n) {
        return Err(Error::DimensionMismatch(
            "points in different projective spaces".into(),
        ));
    }
    let rat = FieldConfig::rationals();
    let frame: Vec<BigRational> = (0..=n)
        .flat_map(|r| (0..=n).map(move |i| (r, i)))
        .map(|(r, i)| points[i].coords()[r].clone())
        .collect();
    let m = ExactMatrix::from_rationals(n + 1, n + 1, frame, rat)?;
    let lambda = match m.solve(points[n + 1].coords())? {
        Some(l) if m.rank() == n + 1 && l.iter().all(|x| !x.is_zero()) => l,
        _ => {
            return Err(Error::Degenerate(
                "n+2 of the points lie on a hyperplane".into(),
            ))
        }
    };
    let scaled: Vec<BigRational> = (0..=n)
        .flat_map(|r| (0..=n).map(move |i| (r, i)))
        .map(|(r, i)| m.entry(r, i) * &lambda[i])
        .collect();
    let a = ExactMatrix::from_rationals(n + 1, n + 1, scaled, rat)?;
    let b = a
        .solve(points[n + 2].coords())?
        .ok_or_else(|| Error::Degenerate("frame is singular".into()))?;
    if b.iter().any(Zero::is_zero) {
        return Err(Error::Degenerate(
            "n+2 of the points lie on a hyperplane".into(),
        ));
    }
    let roots: Vec<BigRational> = b.iter().map(|x| -x.recip()).collect();
    for i in 0..roots.len() {
        if roots[i + 1..].contains(&roots[i]) {
            return Err(Error::Degenerate(
                "points are not in general position".into(),
            ));
        }
    }
    let ys: Vec<Vec<BigRational>> = (0..=n)
        .map(|i| {
            let others: Vec<BigRational> = roots
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, r)| r.clone())
                .collect();
            product_of_linear(&others)
        })
        .collect();
    let mut param = vec![vec![BigRational::zero(); n + 1]; n + 1];
    for (r, row) in param.iter_mut().enumerate() {
        for (i, y) in ys.iter().enumerate() {
            let c = a.entry(r, i);
            for (acc, v) in row.iter_mut().zip(y) {
                *acc += &c * v;
            }
        }
    }
    let mut params: Vec<Vec<BigRational>> = roots.iter().map(|r| vec![q(1), r.clone()]).collect();
    params.push(vec![q(0), q(1)]);
    params.push(vec![q(1), q(0)]);
    let curve = RationalNormalCurve {
        n,
        param,
        points: points.to_vec(),
        params,
    };
    if !curve.verify() {
        return Err(Error::Degenerate(
            "constructed curve misses a defining point".into(),
        ));
    }
    Ok(curve)
}
