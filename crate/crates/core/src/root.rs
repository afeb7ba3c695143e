//! Finite root data of simply-laced types A and D, in the basis of
//! fundamental weights.

use std::collections::HashSet;
use std::fmt;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    D,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::D => 'D',
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Family::A),
            "D" | "d" => Ok(Family::D),
            _ => Err(Error::InvalidInput(format!("unknown family {s:?}"))),
        }
    }
}

/// An integral weight, written in the basis of fundamental weights, so
/// `coords[i]` is the pairing with the i-th simple coroot.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> Weight {
        Weight(self.0.iter().map(|a| a * k).collect())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A positive root, stored both by its simple-root coefficients and by its
/// coordinates in the fundamental-weight basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Root {
    pub coeffs: Vec<i64>,
    pub weight: Vec<i64>,
}

impl Root {
    pub fn height(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    /// `<x, alpha^vee>` for `x` in weight coordinates. The datum is simply
    /// laced, so the coroot has the same simple coefficients as the root.
    pub fn pair(&self, x: &[i64]) -> i64 {
        self.coeffs.iter().zip(x).map(|(k, c)| k * c).sum()
    }
}

#[derive(Debug, Clone)]
pub struct RootDatum {
    family: Family,
    rank: usize,
    /// `cartan[i][j] = <alpha_j, alpha_i^vee>`; column j is alpha_j in weight
    /// coordinates.
    cartan: Vec<Vec<i64>>,
    cartan_inv: Vec<Vec<Rational64>>,
    simple_roots: Vec<Vec<i64>>,
    positive_roots: Vec<Root>,
    highest_root: usize,
}

impl RootDatum {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let edges: Vec<(usize, usize)> = match family {
            Family::A if rank >= 1 => (1..rank).map(|i| (i - 1, i)).collect(),
            // Bourbaki labelling: chain 1-2-...-(n-1), node n attached to n-2.
            Family::D if rank >= 3 => {
                let mut e: Vec<_> = (1..rank - 1).map(|i| (i - 1, i)).collect();
                e.push((rank - 3, rank - 1));
                e
            }
            _ => {
                return Err(Error::UnsupportedDatum {
                    family: family.letter(),
                    rank,
                })
            }
        };
        let mut cartan = vec![vec![0i64; rank]; rank];
        for (i, row) in cartan.iter_mut().enumerate() {
            row[i] = 2;
        }
        for &(a, b) in &edges {
            cartan[a][b] = -1;
            cartan[b][a] = -1;
        }
        let simple_roots: Vec<Vec<i64>> = (0..rank)
            .map(|j| (0..rank).map(|i| cartan[i][j]).collect())
            .collect();
        let cartan_inv = invert(&cartan);

        // Close the simple roots under simple reflections.
        let mut seen: HashSet<Vec<i64>> = HashSet::new();
        let mut frontier: Vec<Vec<i64>> = Vec::new();
        for j in 0..rank {
            let mut k = vec![0; rank];
            k[j] = 1;
            seen.insert(k.clone());
            frontier.push(k);
        }
        while let Some(k) = frontier.pop() {
            let w = coeffs_to_weight(&cartan, &k);
            for i in 0..rank {
                // s_i(beta) = beta - <beta, alpha_i^vee> alpha_i
                let mut k2 = k.clone();
                k2[i] -= w[i];
                if k2.iter().all(|&c| c >= 0) && k2.iter().any(|&c| c > 0) && seen.insert(k2.clone())
                {
                    frontier.push(k2);
                }
            }
        }
        let mut positive_roots: Vec<Root> = seen
            .into_iter()
            .map(|coeffs| Root {
                weight: coeffs_to_weight(&cartan, &coeffs),
                coeffs,
            })
            .collect();
        positive_roots.sort_by(|a, b| {
            a.height()
                .cmp(&b.height())
                .then_with(|| b.coeffs.cmp(&a.coeffs))
        });
        let highest_root = positive_roots.len() - 1;

        Ok(RootDatum {
            family,
            rank,
            cartan,
            cartan_inv,
            simple_roots,
            positive_roots,
            highest_root,
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    /// Simple root `alpha_j` in weight coordinates.
    pub fn simple_root(&self, j: usize) -> &[i64] {
        &self.simple_roots[j]
    }

    pub fn simple_roots(&self) -> &[Vec<i64>] {
        &self.simple_roots
    }

    /// Positive roots ordered by height.
    pub fn positive_roots(&self) -> &[Root] {
        &self.positive_roots
    }

    pub fn num_positive_roots(&self) -> usize {
        self.positive_roots.len()
    }

    pub fn highest_root(&self) -> &Root {
        &self.positive_roots[self.highest_root]
    }

    /// Index of the highest root within `positive_roots()`.
    pub fn highest_root_index(&self) -> usize {
        self.highest_root
    }

    pub fn rho(&self) -> Weight {
        Weight(vec![1; self.rank])
    }

    pub fn coxeter_number(&self) -> i64 {
        self.highest_root().height() + 1
    }

    /// `<varpi_i, alpha_j^vee>`; the identity matrix in these coordinates.
    pub fn coroot_pairing(&self) -> Vec<Vec<i64>> {
        (0..self.rank)
            .map(|i| (0..self.rank).map(|j| i64::from(i == j)).collect())
            .collect()
    }

    /// Simple-root coefficients of a weight, or `None` if it is not in the
    /// root lattice.
    pub fn root_coords(&self, w: &[i64]) -> Option<Vec<i64>> {
        let mut out = Vec::with_capacity(self.rank);
        for row in &self.cartan_inv {
            let v: Rational64 = row
                .iter()
                .zip(w)
                .map(|(a, &c)| *a * Rational64::from_integer(c))
                .sum();
            if !v.is_integer() {
                return None;
            }
            out.push(v.to_integer());
        }
        Some(out)
    }

    pub fn in_root_lattice(&self, w: &[i64]) -> bool {
        self.root_coords(w).is_some()
    }

    pub fn weight_of_coeffs(&self, k: &[i64]) -> Vec<i64> {
        coeffs_to_weight(&self.cartan, k)
    }
}

fn coeffs_to_weight(cartan: &[Vec<i64>], k: &[i64]) -> Vec<i64> {
    let n = k.len();
    (0..n)
        .map(|i| (0..n).map(|j| cartan[i][j] * k[j]).sum())
        .collect()
}

// Gauss-Jordan over the rationals; Cartan matrices are always invertible.
fn invert(m: &[Vec<i64>]) -> Vec<Vec<Rational64>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational64>> = m
        .iter()
        .map(|r| r.iter().map(|&x| Rational64::from_integer(x)).collect())
        .collect();
    let mut inv: Vec<Vec<Rational64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| Rational64::from_integer(i64::from(i == j)))
                .collect()
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| a[r][col] != Rational64::from_integer(0))
            .expect("singular Cartan matrix");
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col];
        for j in 0..n {
            a[col][j] /= p;
            inv[col][j] /= p;
        }
        for r in 0..n {
            if r != col {
                let f = a[r][col];
                if f != Rational64::from_integer(0) {
                    for j in 0..n {
                        let (ac, ic) = (a[col][j], inv[col][j]);
                        a[r][j] -= f * ac;
                        inv[r][j] -= f * ic;
                    }
                }
            }
        }
    }
    inv
}
