//! Partitions and compositions: dominance, conjugation, e-regularity,
//! e-cores and the map to type A weights.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::root::Weight;

/// A weakly decreasing list of positive parts. Serialises as a JSON array.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::InvalidPartition(format!("{parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!("{parts:?} is not weakly decreasing")));
        }
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// The size `r`.
    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// `parts[i]`, zero past the end.
    pub fn part(&self, i: usize) -> u32 {
        self.parts.get(i).copied().unwrap_or(0)
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;
    fn try_from(parts: Vec<u32>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// Comma-separated parts, e.g. `3,1`. Trailing zero parts are dropped.
impl FromStr for Partition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::InvalidPartition("empty input".into()));
        }
        let mut parts = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidPartition(format!("bad part {t:?} in {s:?}")))
            })
            .collect::<Result<Vec<u32>>>()?;
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Partition::new(parts)
    }
}

/// A finite sequence of nonnegative parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Composition {
    pub parts: Vec<u32>,
}

impl Composition {
    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// The partition obtained by sorting the nonzero parts.
    pub fn sorted(&self) -> Partition {
        let mut parts: Vec<u32> = self.parts.iter().copied().filter(|&p| p > 0).collect();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }
}

pub fn conjugate(lambda: &Partition) -> Partition {
    let first = lambda.part(0);
    let parts = (1..=first)
        .map(|j| lambda.parts.iter().take_while(|&&p| p >= j).count() as u32)
        .collect();
    Partition { parts }
}

/// `mu ⊴ lambda`: every partial sum of `mu` is at most that of `lambda`.
pub fn dominance_leq_partitions(mu: &Partition, lambda: &Partition) -> Result<bool> {
    if mu.size() != lambda.size() {
        return Err(Error::InvalidInput(format!(
            "dominance needs partitions of the same size, got {mu} and {lambda}"
        )));
    }
    let (mut a, mut b) = (0u32, 0u32);
    for i in 0..mu.len().max(lambda.len()) {
        a += mu.part(i);
        b += lambda.part(i);
        if a > b {
            return Ok(false);
        }
    }
    Ok(true)
}

/// No part value is repeated `e` or more times.
pub fn is_e_regular(lambda: &Partition, e: u32) -> bool {
    lambda
        .parts
        .chunk_by(|a, b| a == b)
        .all(|run| (run.len() as u32) < e)
}

/// `lambda_i - lambda_{i+1} <= e - 1` for all `i`, with a zero after the last part.
pub fn is_e_restricted(lambda: &Partition, e: u32) -> bool {
    (0..lambda.len()).all(|i| lambda.part(i) - lambda.part(i + 1) < e)
}

/// The `A_{n-1}` weight `sum_{i<n} (lambda_i - lambda_{i+1}) varpi_i`.
pub fn to_weight(lambda: &Partition, n: usize) -> Result<Weight> {
    if lambda.len() > n {
        return Err(Error::TooManyParts {
            parts: lambda.parts.clone(),
            n,
        });
    }
    if n < 2 {
        return Err(Error::InvalidInput(format!("n must be at least 2, got {n}")));
    }
    Ok(Weight(
        (0..n - 1)
            .map(|i| i64::from(lambda.part(i)) - i64::from(lambda.part(i + 1)))
            .collect(),
    ))
}

/// The e-core, by sliding beads up the runners of an e-abacus.
pub fn e_core(lambda: &Partition, e: u32) -> Partition {
    let e = e as usize;
    let k = lambda.len();
    // Beta numbers of lambda with k beads: lambda_i + k - 1 - i.
    let mut runners = vec![0usize; e];
    for i in 0..k {
        let beta = lambda.part(i) as usize + k - 1 - i;
        runners[beta % e] += 1;
    }
    let mut betas: Vec<usize> = Vec::with_capacity(k);
    for (r, &count) in runners.iter().enumerate() {
        betas.extend((0..count).map(|j| r + j * e));
    }
    betas.sort_unstable_by(|a, b| b.cmp(a));
    let parts = betas
        .iter()
        .enumerate()
        .map(|(i, &b)| (b + i + 1 - k) as u32)
        .filter(|&p| p > 0)
        .collect();
    Partition { parts }
}

/// All partitions of `r` with at most `n` parts, in reverse lexicographic
/// order: `(r)` first.
pub fn list_partitions(n: usize, r: u32) -> Vec<Partition> {
    fn rec(left: u32, max: u32, slots: usize, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if left == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        if slots == 0 {
            return;
        }
        for p in (1..=max.min(left)).rev() {
            cur.push(p);
            rec(left - p, p, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(r, r, n, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("3,1".parse::<Partition>().unwrap(), p(&[3, 1]));
        assert_eq!("2,1,0".parse::<Partition>().unwrap(), p(&[2, 1]));
        assert!("1,2".parse::<Partition>().is_err());
        assert!("".parse::<Partition>().is_err());
        assert!("a".parse::<Partition>().is_err());
        assert_eq!(p(&[3, 1]).to_string(), "(3,1)");
        assert_eq!(serde_json::to_string(&p(&[3, 1])).unwrap(), "[3,1]");
        assert!(serde_json::from_str::<Partition>("[1,3]").is_err());
    }

    #[test]
    fn small_examples() {
        assert_eq!(conjugate(&p(&[1])), p(&[1]));
        assert_eq!(conjugate(&p(&[3, 1])), p(&[2, 1, 1]));
        assert!(dominance_leq_partitions(&p(&[1, 1, 1]), &p(&[2, 1])).unwrap());
        assert!(!dominance_leq_partitions(&p(&[2, 1]), &p(&[1, 1, 1])).unwrap());
        assert!(dominance_leq_partitions(&p(&[2]), &p(&[2, 1])).is_err());
        assert!(!is_e_regular(&p(&[1, 1]), 2));
        assert!(is_e_regular(&p(&[2, 1]), 2) && is_e_restricted(&p(&[2, 1]), 2));
        assert!(!is_e_restricted(&p(&[2]), 2));
        assert_eq!(to_weight(&p(&[5]), 3).unwrap(), Weight(vec![5, 0]));
        assert_eq!(to_weight(&p(&[2, 1]), 3).unwrap(), Weight(vec![1, 1]));
        assert_eq!(to_weight(&p(&[1, 1, 1]), 3).unwrap(), Weight(vec![0, 0]));
        assert!(matches!(to_weight(&p(&[1, 1, 1]), 2), Err(Error::TooManyParts { .. })));
        assert_eq!(e_core(&p(&[2, 1]), 3), Partition::empty());
        assert_eq!(e_core(&p(&[2, 1]), 5), p(&[2, 1]));
        assert_eq!(e_core(&p(&[2, 2]), 2), Partition::empty());
        assert_eq!(e_core(&p(&[2, 1]), 2), p(&[2, 1]));
        assert_eq!(list_partitions(2, 2), vec![p(&[2]), p(&[1, 1])]);
        assert_eq!(list_partitions(3, 3).len(), 3);
        assert_eq!(list_partitions(2, 4), vec![p(&[4]), p(&[3, 1]), p(&[2, 2])]);
    }

    #[test]
    fn weight_forgets_full_columns() {
        for lam in list_partitions(3, 6) {
            let shifted = Partition::new((0..3).map(|i| lam.part(i) + 1).collect()).unwrap();
            assert_eq!(to_weight(&lam, 3).unwrap(), to_weight(&shifted, 3).unwrap());
        }
        let all = list_partitions(3, 6);
        for (i, a) in all.iter().enumerate() {
            for b in &all[i + 1..] {
                assert_ne!(to_weight(a, 3).unwrap(), to_weight(b, 3).unwrap());
            }
        }
    }
}
