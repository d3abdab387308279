//! Alexander–Hirschowitz verdicts: the exception list, critical numbers of points,
//! Horace arithmetic, induction certificates, the cubic case and sweeps.

mod certificate;
mod cubics;
mod sweep;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyspace::{binomial, space_dim};

pub use certificate::{
    build_certificate, check_certificate, CertNode, Certificate, CertificateCheck,
    CertificateChecker, Failure, Rule, SideCondition,
};
pub use cubics::{cubic_numbers, cubic_rank, verify_cubics, CubicsReport, InstanceCheck};
pub use sweep::{case_seed, sweep, sweep_case, sweep_cases, sweep_csv, SweepRow, SWEEP_CSV_HEADER};

/// The statement `AH_{n,d}(k)`: `k` general double points of `P^n` impose independent
/// conditions on degree-`d` forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CaseId {
    pub n: usize,
    pub d: usize,
    pub k: usize,
}

impl CaseId {
    pub const fn new(n: usize, d: usize, k: usize) -> Self {
        CaseId { n, d, k }
    }

    pub fn space_dim(&self) -> u64 {
        space_dim(self.n, self.d)
    }

    pub fn conditions(&self) -> u64 {
        (self.n as u64 + 1) * self.k as u64
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.n, self.d, self.k)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExceptionReason {
    /// Quadrics singular at `k <= n` points: cones over the span of the points.
    QuadricCones,
    /// Squares of the quadric through the points: `(2,4,5)`, `(3,4,9)`, `(4,4,14)`.
    DoubleQuadric,
    /// The cubic singular along the rational normal curve through 7 points of `P^4`.
    RncSecantCubic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionRecord {
    pub case: CaseId,
    pub reason: ExceptionReason,
}

/// The defective cases: `d = 2, 2 <= k <= n`, and `(2,4,5)`, `(3,4,9)`, `(4,3,7)`, `(4,4,14)`.
pub fn is_exception(c: CaseId) -> Option<ExceptionRecord> {
    let reason = match (c.n, c.d, c.k) {
        (n, 2, k) if 2 <= k && k <= n => ExceptionReason::QuadricCones,
        (2, 4, 5) | (3, 4, 9) | (4, 4, 14) => ExceptionReason::DoubleQuadric,
        (4, 3, 7) => ExceptionReason::RncSecantCubic,
        _ => return None,
    };
    Some(ExceptionRecord { case: c, reason })
}

/// Floor and ceiling of `C(n+d, n) / (n+1)`. Independence at the first and filling at
/// the second settle every `k` by monotonicity.
pub fn critical_k(n: usize, d: usize) -> (usize, usize) {
    let total = space_dim(n, d) as usize;
    let m = n + 1;
    (total / m, total.div_ceil(m))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    #[serde(rename = "i")]
    I,
    #[serde(rename = "ii")]
    Ii,
    Neither,
}

/// Which pair of inequalities of the hyperplane specialization criterion holds for
/// `u` of the `k` points on a hyperplane:
/// (i) `un <= C(d+n-1, n-1)` and `k(n+1) - un <= C(d+n-1, n)`;
/// (ii) both reversed. Branch (i) is reported when both hold.
pub fn thm41_check(n: usize, d: usize, k: usize, u: usize) -> Branch {
    let a = binomial(d + n - 1, n - 1) as i128;
    let b = binomial(d + n - 1, n) as i128;
    let un = (u * n) as i128;
    let rest = (k * (n + 1)) as i128 - un;
    if un <= a && rest <= b {
        Branch::I
    } else if un >= a && rest >= b {
        Branch::Ii
    } else {
        Branch::Neither
    }
}

/// `(u, epsilon)` with `n u + epsilon = k(n+1) - C(n+d-1, n)` and `0 <= epsilon < n`,
/// together with the three inequalities of the Horace bookkeeping.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HoraceParams {
    pub u: usize,
    pub epsilon: usize,
    /// `n epsilon + u <= C(n+d-2, n-1)`.
    pub check_i: bool,
    /// `C(n+d-2, n) <= (k-u-epsilon)(n+1)`.
    pub check_ii: bool,
    /// `k - u - epsilon >= n+1`; only evaluated for `d = 4, n >= 10`.
    pub check_iii: Option<bool>,
}

pub fn horace_params(n: usize, d: usize, k: usize) -> Result<HoraceParams> {
    if n < 1 || d < 2 {
        return Err(Error::InvalidInput(format!(
            "Horace parameters need n >= 1 and d >= 2, got ({n},{d})"
        )));
    }
    let total = (k * (n + 1)) as i128 - binomial(n + d - 1, n) as i128;
    if total < 0 {
        return Err(Error::InvalidInput(format!(
            "no (u, epsilon) with u >= 0 for ({n},{d},{k}): k(n+1) - C(n+d-1,n) = {total}"
        )));
    }
    let total = total as usize;
    let (u, epsilon) = (total / n, total % n);
    Ok(horace_checks(n, d, k, u, epsilon))
}

/// Evaluates the inequalities for given `(u, epsilon)` without recomputing them.
pub fn horace_checks(n: usize, d: usize, k: usize, u: usize, epsilon: usize) -> HoraceParams {
    let left = (k as i128) - (u as i128) - (epsilon as i128);
    let check_i = (n * epsilon + u) as u64 <= binomial(n + d - 2, n - 1);
    let check_ii = (binomial(n + d - 2, n) as i128) <= left * (n as i128 + 1);
    let check_iii = (d == 4 && n >= 10).then_some(left > n as i128);
    HoraceParams {
        u,
        epsilon,
        check_i,
        check_ii,
        check_iii,
    }
}

/// Whether `n u + epsilon = k(n+1) - C(n+d-1, n)` with `epsilon < n`.
pub fn horace_identity(n: usize, d: usize, k: usize, u: usize, epsilon: usize) -> bool {
    epsilon < n
        && (n * u + epsilon) as i128 == (k * (n + 1)) as i128 - binomial(n + d - 1, n) as i128
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exceptions() {
        assert_eq!(
            is_exception(CaseId::new(4, 3, 7)).unwrap().reason,
            ExceptionReason::RncSecantCubic
        );
        assert!(is_exception(CaseId::new(3, 6, 21)).is_none());
        assert_eq!(
            is_exception(CaseId::new(5, 2, 3)).unwrap().reason,
            ExceptionReason::QuadricCones
        );
        assert!(is_exception(CaseId::new(5, 2, 1)).is_none());
        assert!(is_exception(CaseId::new(5, 2, 6)).is_none());
    }

    #[test]
    fn critical_numbers() {
        assert_eq!(critical_k(3, 6), (21, 21));
        assert_eq!(critical_k(4, 3), (7, 7));
        assert_eq!(critical_k(9, 4), (71, 72));
    }

    #[test]
    fn hyperplane_branches() {
        assert_eq!(thm41_check(3, 5, 14, 7), Branch::I);
        assert_eq!(thm41_check(7, 4, 41, 30), Branch::I);
        assert_eq!(thm41_check(7, 4, 42, 30), Branch::Ii);
        assert_eq!(thm41_check(3, 6, 21, 9), Branch::Neither);
    }

    #[test]
    fn horace_examples() {
        let p = horace_params(3, 6, 21).unwrap();
        assert_eq!((p.u, p.epsilon, p.check_i, p.check_ii), (9, 1, true, true));
        let p = horace_params(9, 4, 71).unwrap();
        assert_eq!((p.u, p.epsilon), (54, 4));
        let p = horace_params(9, 4, 72).unwrap();
        assert_eq!((p.u, p.epsilon), (55, 5));
        assert!(horace_params(3, 6, 2).is_err());
        assert!(horace_identity(3, 6, 21, 9, 1));
        assert!(!horace_identity(3, 6, 21, 8, 1));
    }
}
