//! Convergent subsequences over a finite basis of cells.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{ConvergenceReport, Verdict};

/// A sequence of sets of cells; the cells stand for a countable basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellSetSequence {
    universe: Vec<usize>,
    members: Vec<BTreeSet<usize>>,
}

impl CellSetSequence {
    pub fn new(universe: Vec<usize>, members: Vec<BTreeSet<usize>>) -> Result<Self> {
        let cells: BTreeSet<usize> = universe.iter().copied().collect();
        if cells.len() != universe.len() {
            return Err(Error::InvalidParameter("universe cells must be distinct".into()));
        }
        for (k, m) in members.iter().enumerate() {
            if let Some(c) = m.iter().find(|c| !cells.contains(c)) {
                return Err(Error::InvalidParameter(format!(
                    "member {k} holds cell {c} outside the universe"
                )));
            }
        }
        Ok(CellSetSequence { universe, members })
    }

    /// Random membership: each cell lies in each member with probability `p`.
    pub fn random(cells: usize, len: usize, p: f64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let members = (0..len)
            .map(|_| (0..cells).filter(|_| rng.gen_bool(p)).collect())
            .collect();
        CellSetSequence {
            universe: (0..cells).collect(),
            members,
        }
    }

    pub fn universe(&self) -> &[usize] {
        &self.universe
    }

    pub fn members(&self) -> &[BTreeSet<usize>] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Cells in every member at `indices`.
    pub fn liminf(&self, indices: &[usize]) -> BTreeSet<usize> {
        self.universe
            .iter()
            .copied()
            .filter(|c| indices.iter().all(|&k| self.members[k].contains(c)))
            .collect()
    }

    /// Cells in some member at `indices`.
    pub fn limsup(&self, indices: &[usize]) -> BTreeSet<usize> {
        self.universe
            .iter()
            .copied()
            .filter(|c| indices.iter().any(|&k| self.members[k].contains(c)))
            .collect()
    }
}

/// Diagonal extraction: for each cell in universe order keep the larger of
/// the indices missing it and the indices hitting it (ties keep the hits).
///
/// Every cell's membership is then constant along the returned indices;
/// the limit is the set of cells hit.
pub fn zarankiewicz_extract(seq: &CellSetSequence) -> Result<(Vec<usize>, BTreeSet<usize>)> {
    if seq.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut idx: Vec<usize> = (0..seq.len()).collect();
    for c in seq.universe.iter() {
        let (hit, miss): (Vec<usize>, Vec<usize>) = idx.iter().partition(|&&k| seq.members[k].contains(c));
        idx = if miss.len() > hit.len() { miss } else { hit };
    }
    let limit = seq.members[idx[0]].clone();
    Ok((idx, limit))
}

/// One-pass scan of an extraction: increasing indices in range, every
/// cell's membership constant along them, and `limit` equal to the cells
/// hit.
pub fn verify_extraction(seq: &CellSetSequence, indices: &[usize], limit: &BTreeSet<usize>) -> bool {
    if indices.is_empty() || indices.windows(2).any(|w| w[0] >= w[1]) || *indices.last().unwrap() >= seq.len() {
        return false;
    }
    let constant = seq.universe.iter().all(|c| {
        let first = seq.members[indices[0]].contains(c);
        indices.iter().all(|&k| seq.members[k].contains(c) == first)
    });
    constant && seq.liminf(indices) == *limit && seq.limsup(indices) == *limit
}

/// Extraction scan on `trials` random sequences (`cells` cells, `len`
/// members, membership probability 1/2), seeds `seed..seed + trials`.
///
/// The deviation series holds 1 per failed trial and 0 otherwise; the
/// verdict is CONVERGES when no trial fails.
pub fn zarankiewicz_report(trials: u64, cells: usize, len: usize, seed: u64) -> Result<ConvergenceReport> {
    if trials == 0 || len == 0 {
        return Err(Error::InvalidParameter(
            "trials and sequence length must be >= 1".into(),
        ));
    }
    let mut report = ConvergenceReport::new("zarankiewicz", (1..=trials).collect(), 0.0);
    let mut kept = usize::MAX;
    for t in 0..trials {
        let seq = CellSetSequence::random(cells, len, 0.5, seed + t);
        let (idx, lim) = zarankiewicz_extract(&seq)?;
        kept = kept.min(idx.len());
        report
            .deviation_series
            .push(if verify_extraction(&seq, &idx, &lim) { 0.0 } else { 1.0 });
    }
    let failures: f64 = report.deviation_series.iter().sum();
    report.verdict = if failures == 0.0 {
        Verdict::Converges
    } else {
        Verdict::Diverges
    };
    report.metric("failures", failures);
    report.metric("min_subsequence_len", kept as f64);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    #[test]
    fn alternation_and_constant() {
        let members = (0..10).map(|k| set(&[k % 2])).collect();
        let seq = CellSetSequence::new(vec![0, 1], members).unwrap();
        let (idx, lim) = zarankiewicz_extract(&seq).unwrap();
        // five hits of cell 0 against five misses: the tie keeps the hits
        assert_eq!(idx, vec![0, 2, 4, 6, 8]);
        assert_eq!(lim, set(&[0]));
        assert!(verify_extraction(&seq, &idx, &lim));
        let c = CellSetSequence::new(vec![0, 1, 2], vec![set(&[1, 2]); 7]).unwrap();
        let (idx, lim) = zarankiewicz_extract(&c).unwrap();
        assert_eq!(idx, (0..7).collect::<Vec<_>>());
        assert_eq!(lim, set(&[1, 2]));
    }

    #[test]
    fn random_sequences_pass_the_scan() {
        for seed in 0..20 {
            let seq = CellSetSequence::random(64, 512, 0.5, seed);
            let (idx, lim) = zarankiewicz_extract(&seq).unwrap();
            assert!(verify_extraction(&seq, &idx, &lim));
        }
    }

    #[test]
    fn report_counts_failures() {
        let r = zarankiewicz_report(5, 16, 64, 3).unwrap();
        assert_eq!(r.verdict, Verdict::Converges);
        assert_eq!(r.deviation_series, vec![0.0; 5]);
        assert!(zarankiewicz_report(0, 16, 64, 3).is_err());
    }

    #[test]
    fn validation() {
        assert!(CellSetSequence::new(vec![0, 0], vec![]).is_err());
        assert!(CellSetSequence::new(vec![0], vec![set(&[3])]).is_err());
        let empty = CellSetSequence::new(vec![0], vec![]).unwrap();
        assert_eq!(zarankiewicz_extract(&empty), Err(Error::EmptyInput));
        let seq = CellSetSequence::new(vec![0], vec![set(&[0]), set(&[])]).unwrap();
        assert!(!verify_extraction(&seq, &[0, 1], &set(&[0])));
        assert!(!verify_extraction(&seq, &[1, 0], &set(&[])));
    }
}
