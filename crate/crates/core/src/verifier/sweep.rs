use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{critical_k, is_exception, CaseId};
use crate::error::Result;
use crate::interpolation::{hilbert_double_points, Sampling, Verdict};

pub const SWEEP_CSV_HEADER: &str = "n,d,k,expected,computed,defect,verdict,seed,prime";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub d: usize,
    pub k: usize,
    pub expected: u64,
    pub computed: u64,
    pub defect: u64,
    pub verdict: Verdict,
    pub seed: u64,
    /// Characteristic of the field that produced `computed`; 0 for the rationals.
    pub prime: u64,
    pub predicted_exception: bool,
    /// The computed verdict is defective exactly when the case is a known exception.
    pub agrees: bool,
}

impl SweepRow {
    pub fn case(&self) -> CaseId {
        CaseId::new(self.n, self.d, self.k)
    }

    pub fn csv_line(&self) -> String {
        let verdict = match self.verdict {
            Verdict::Independent => "independent",
            Verdict::Fills => "fills",
            Verdict::DefectiveEvidence => "defective-evidence",
        };
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.n,
            self.d,
            self.k,
            self.expected,
            self.computed,
            self.defect,
            verdict,
            self.seed,
            self.prime
        )
    }
}

/// Seed for one case, so a row can be reproduced on its own.
pub fn case_seed(seed: u64, c: CaseId) -> u64 {
    let mut h = seed ^ 0x243F_6A88_85A3_08D3;
    for v in [c.n, c.d, c.k] {
        h = (h ^ v as u64)
            .wrapping_mul(0x1000_0000_01B3)
            .rotate_left(29);
    }
    h
}

/// The cases visited by [`sweep`]: both critical `k` for each `(n, d)`.
pub fn sweep_cases(ns: RangeInclusive<usize>, ds: RangeInclusive<usize>) -> Vec<CaseId> {
    let mut out = Vec::new();
    for n in ns {
        for d in ds.clone() {
            if n == 0 || d == 0 {
                continue;
            }
            let (lo, hi) = critical_k(n, d);
            out.push(CaseId::new(n, d, lo));
            if hi != lo {
                out.push(CaseId::new(n, d, hi));
            }
        }
    }
    out
}

pub fn sweep_case(c: CaseId, sampling: &Sampling) -> Result<SweepRow> {
    let seed = case_seed(sampling.seed, c);
    let s = Sampling { seed, ..*sampling };
    let r = hilbert_double_points(c.n, c.d, c.k, &s)?;
    let predicted = is_exception(c).is_some();
    let defective = r.verdict == Verdict::DefectiveEvidence;
    Ok(SweepRow {
        n: c.n,
        d: c.d,
        k: c.k,
        expected: r.expected,
        computed: r.computed,
        defect: r.defect,
        verdict: r.verdict,
        seed,
        prime: r.field.characteristic(),
        predicted_exception: predicted,
        agrees: predicted == defective,
    })
}

/// Independence at `k_minus` and filling at `k_plus` for every `(n, d)` in range,
/// compared against the exception list. Rows come back in case order.
pub fn sweep(
    ns: RangeInclusive<usize>,
    ds: RangeInclusive<usize>,
    sampling: &Sampling,
) -> Result<Vec<SweepRow>> {
    sweep_cases(ns, ds)
        .into_par_iter()
        .map(|c| sweep_case(c, sampling))
        .collect()
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv_line());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plane_sweep() {
        let rows = sweep(2..=2, 1..=6, &Sampling::default()).unwrap();
        assert!(rows.iter().all(|r| r.agrees), "{rows:?}");
        let bad: Vec<CaseId> = rows
            .iter()
            .filter(|r| r.defect > 0)
            .map(SweepRow::case)
            .collect();
        assert_eq!(bad, vec![CaseId::new(2, 2, 2), CaseId::new(2, 4, 5)]);
        let csv = sweep_csv(&rows);
        assert!(csv.starts_with(SWEEP_CSV_HEADER));
        assert_eq!(csv.lines().count(), rows.len() + 1);
    }

    #[test]
    fn seeds_are_per_case() {
        let a = case_seed(1, CaseId::new(3, 4, 9));
        assert_ne!(a, case_seed(1, CaseId::new(3, 4, 8)));
        assert_eq!(a, case_seed(1, CaseId::new(3, 4, 9)));
    }
}
