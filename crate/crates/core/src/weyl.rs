//! The affine Weyl group `W_e = W ⋉ eQ` acting on integral weights by the
//! dot action, with Coxeter generators the reflections in the walls of the
//! standard alcove `C = { x : 0 < <x+rho, alpha^vee> < e }`.
//!
//! Elements are stored as a pair (finite part, root-lattice translation) and
//! act on shifted weights `y = x + rho` by `y -> fin(y) + e*trans`. With that
//! convention the group law is `(f1, g1)(f2, g2) = (f1 f2, g1 + f1 g2)`.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::root::{Family, RootDatum, Weight};

pub const DEFAULT_ENUMERATION_CAP: usize = 1_000_000;

#[derive(Clone)]
pub struct AffineElement {
    rank: usize,
    /// Finite part as a row-major matrix on weight coordinates.
    mat: Vec<i64>,
    inv: Vec<i64>,
    /// Translation part, in weight coordinates; always in the root lattice.
    trans: Vec<i64>,
}

impl PartialEq for AffineElement {
    fn eq(&self, other: &Self) -> bool {
        self.mat == other.mat && self.trans == other.trans
    }
}

impl Eq for AffineElement {}

impl Hash for AffineElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.mat.hash(state);
        self.trans.hash(state);
    }
}

impl PartialOrd for AffineElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AffineElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.mat
            .cmp(&other.mat)
            .then_with(|| self.trans.cmp(&other.trans))
    }
}

impl fmt::Debug for AffineElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AffineElement")
            .field("fin", &self.mat)
            .field("trans", &self.trans)
            .finish()
    }
}

impl AffineElement {
    fn identity(rank: usize) -> Self {
        let mut mat = vec![0; rank * rank];
        for i in 0..rank {
            mat[i * rank + i] = 1;
        }
        AffineElement {
            rank,
            inv: mat.clone(),
            mat,
            trans: vec![0; rank],
        }
    }

    pub fn is_identity(&self) -> bool {
        self.trans.iter().all(|&t| t == 0)
            && (0..self.rank).all(|i| {
                (0..self.rank).all(|j| self.mat[i * self.rank + j] == i64::from(i == j))
            })
    }

    pub fn translation_part(&self) -> &[i64] {
        &self.trans
    }

    pub fn is_finite(&self) -> bool {
        self.trans.iter().all(|&t| t == 0)
    }

    /// Apply the finite part to a vector of weight coordinates.
    pub fn apply_finite(&self, x: &[i64]) -> Vec<i64> {
        mat_vec(&self.mat, self.rank, x)
    }

    fn apply_finite_inverse(&self, x: &[i64]) -> Vec<i64> {
        mat_vec(&self.inv, self.rank, x)
    }
}

fn mat_vec(m: &[i64], n: usize, x: &[i64]) -> Vec<i64> {
    (0..n)
        .map(|i| (0..n).map(|j| m[i * n + j] * x[j]).sum())
        .collect()
}

fn mat_mul(a: &[i64], b: &[i64], n: usize) -> Vec<i64> {
    let mut out = vec![0; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik != 0 {
                for j in 0..n {
                    out[i * n + j] += aik * b[k * n + j];
                }
            }
        }
    }
    out
}

/// Which side of an element a coset is taken on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// The coset `wH`; strip right descents.
    Right,
    /// The coset `Hw`; strip left descents.
    Left,
    /// The double coset `HwK`, with the same generator set on both sides.
    Both,
}

/// A root datum together with the level `e`.
#[derive(Debug, Clone)]
pub struct GroupContext {
    datum: RootDatum,
    e: i64,
    gens: Vec<AffineElement>,
    w0: AffineElement,
    enumeration_cap: usize,
}

impl GroupContext {
    pub fn new(family: Family, rank: usize, e: i64) -> Result<Self> {
        if e < 1 {
            return Err(Error::InvalidLevel(e));
        }
        let datum = RootDatum::new(family, rank)?;
        let mut ctx = GroupContext {
            gens: Vec::new(),
            w0: AffineElement::identity(rank),
            datum,
            e,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
        };
        let theta = ctx.datum.highest_root_index();
        let mut gens = vec![ctx.reflection(theta, 1)];
        for i in 0..rank {
            let idx = ctx
                .datum
                .positive_roots()
                .iter()
                .position(|a| a.height() == 1 && a.coeffs[i] == 1)
                .expect("simple root present");
            gens.push(ctx.reflection(idx, 0));
        }
        ctx.gens = gens;
        ctx.w0 = ctx.compute_w0();
        Ok(ctx)
    }

    pub fn with_enumeration_cap(mut self, cap: usize) -> Self {
        self.enumeration_cap = cap;
        self
    }

    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    pub fn e(&self) -> i64 {
        self.e
    }

    pub fn rank(&self) -> usize {
        self.datum.rank()
    }

    pub fn family(&self) -> Family {
        self.datum.family()
    }

    /// Number of fundamental reflections `s_0, ..., s_rank`.
    pub fn num_generators(&self) -> usize {
        self.gens.len()
    }

    /// The quantum statements cover type `D_{2m+1}` only for `e >= 3`.
    pub fn outside_proven_range(&self) -> bool {
        self.family() == Family::D && self.rank() % 2 == 1 && self.e < 3
    }

    pub fn fingerprint(&self) -> String {
        format!("{} {} {}", self.family(), self.rank(), self.e)
    }

    pub fn identity(&self) -> AffineElement {
        AffineElement::identity(self.rank())
    }

    /// Fundamental reflection `s_i`; `s_0` is the reflection in the wall
    /// `<x+rho, theta^vee> = e`.
    pub fn generator(&self, i: usize) -> &AffineElement {
        &self.gens[i]
    }

    /// The affine reflection in `H_{alpha,m} = { x : <x+rho, alpha^vee> = m e }`
    /// for the positive root with index `root` in `datum().positive_roots()`.
    pub fn reflection(&self, root: usize, m: i64) -> AffineElement {
        let n = self.rank();
        let a = &self.datum.positive_roots()[root];
        // s_alpha(y) = y - <y, alpha^vee> alpha, alpha^vee = sum k_j alpha_j^vee.
        let mut mat = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                mat[i * n + j] = i64::from(i == j) - a.weight[i] * a.coeffs[j];
            }
        }
        AffineElement {
            rank: n,
            inv: mat.clone(),
            mat,
            trans: a.weight.iter().map(|x| x * m).collect(),
        }
    }

    /// Translation `x -> x + e*xi`; `xi` must lie in the root lattice.
    pub fn translation(&self, xi: &Weight) -> Result<AffineElement> {
        if xi.rank() != self.rank() {
            return Err(Error::WrongRank {
                expected: self.rank(),
                got: xi.rank(),
            });
        }
        if !self.datum.in_root_lattice(xi.coords()) {
            return Err(Error::InvalidInput(format!(
                "{xi} is not in the root lattice"
            )));
        }
        let mut t = self.identity();
        t.trans = xi.0.clone();
        Ok(t)
    }

    pub fn multiply(&self, a: &AffineElement, b: &AffineElement) -> AffineElement {
        let n = self.rank();
        let ag = a.apply_finite(&b.trans);
        AffineElement {
            rank: n,
            mat: mat_mul(&a.mat, &b.mat, n),
            inv: mat_mul(&b.inv, &a.inv, n),
            trans: a.trans.iter().zip(&ag).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn inverse(&self, a: &AffineElement) -> AffineElement {
        let t = a.apply_finite_inverse(&a.trans);
        AffineElement {
            rank: a.rank,
            mat: a.inv.clone(),
            inv: a.mat.clone(),
            trans: t.into_iter().map(|x| -x).collect(),
        }
    }

    pub fn from_word(&self, word: &[usize]) -> AffineElement {
        word.iter()
            .fold(self.identity(), |acc, &i| self.multiply(&acc, &self.gens[i]))
    }

    /// Action on shifted coordinates `y = x + rho`.
    pub fn act_shifted(&self, w: &AffineElement, y: &[i64]) -> Vec<i64> {
        let fy = w.apply_finite(y);
        fy.iter()
            .zip(&w.trans)
            .map(|(a, t)| a + self.e * t)
            .collect()
    }

    /// The dot action `w . mu = w(mu + rho) - rho`.
    pub fn dot_act(&self, w: &AffineElement, mu: &Weight) -> Weight {
        let y: Vec<i64> = mu.0.iter().map(|c| c + 1).collect();
        Weight(self.act_shifted(w, &y).into_iter().map(|c| c - 1).collect())
    }

    /// Image of an interior point of `C`, scaled so that it is integral: the
    /// point `(e/h) rho` is sent to `e * (fin(rho) + h trans) / h`; we return
    /// `fin(rho) + h trans`, whose pairings divided by `h` lie strictly
    /// between consecutive integers.
    fn scaled_point(&self, w: &AffineElement) -> Vec<i64> {
        let h = self.datum.coxeter_number();
        let rho = vec![1; self.rank()];
        let fr = w.apply_finite(&rho);
        fr.iter().zip(&w.trans).map(|(a, t)| a + h * t).collect()
    }

    /// `n_alpha` of the alcove `w.C` for every positive root.
    pub fn alcove_indices(&self, w: &AffineElement) -> Vec<i64> {
        let h = self.datum.coxeter_number();
        let p = self.scaled_point(w);
        self.datum
            .positive_roots()
            .iter()
            .map(|a| a.pair(&p).div_euclid(h))
            .collect()
    }

    /// Number of hyperplanes `H_{alpha,m}` separating `C` from `w.C`.
    pub fn length(&self, w: &AffineElement) -> usize {
        self.alcove_indices(w)
            .into_iter()
            .map(|n| n.unsigned_abs() as usize)
            .sum()
    }

    /// Same as `length(s_i w) < length(w)`: the wall of `s_i` separates `C`
    /// from `w.C`.
    pub fn is_left_descent(&self, w: &AffineElement, i: usize) -> bool {
        let h = self.datum.coxeter_number();
        let p = self.scaled_point(w);
        if i == 0 {
            self.datum.highest_root().pair(&p) > h
        } else {
            p[i - 1] < 0
        }
    }

    pub fn is_right_descent(&self, w: &AffineElement, i: usize) -> bool {
        self.is_left_descent(&self.inverse(w), i)
    }

    pub fn left_descents(&self, w: &AffineElement) -> Vec<usize> {
        (0..self.num_generators())
            .filter(|&i| self.is_left_descent(w, i))
            .collect()
    }

    pub fn right_descents(&self, w: &AffineElement) -> Vec<usize> {
        let wi = self.inverse(w);
        (0..self.num_generators())
            .filter(|&i| self.is_left_descent(&wi, i))
            .collect()
    }

    fn first_left_descent(&self, w: &AffineElement) -> Option<usize> {
        (0..self.num_generators()).find(|&i| self.is_left_descent(w, i))
    }

    /// Canonical reduced word: repeatedly strip the least-index left descent.
    pub fn reduced_word(&self, w: &AffineElement) -> Vec<usize> {
        let mut word = Vec::new();
        let mut cur = w.clone();
        while let Some(i) = self.first_left_descent(&cur) {
            word.push(i);
            cur = self.multiply(&self.gens[i], &cur);
        }
        debug_assert!(cur.is_identity());
        word
    }

    /// Bruhat order by descent recursion: for `s` a left descent of `w`,
    /// `y <= w` iff `sy <= sw` (when `s` is a descent of `y`) or `y <= sw`.
    pub fn bruhat_leq(&self, y: &AffineElement, w: &AffineElement) -> bool {
        let mut y = y.clone();
        let mut w = w.clone();
        let mut ly = self.length(&y);
        let mut lw = self.length(&w);
        loop {
            if ly > lw {
                return false;
            }
            if ly == lw {
                return y == w;
            }
            if ly == 0 {
                return true;
            }
            let s = self.first_left_descent(&w).expect("nonidentity has a descent");
            let g = &self.gens[s];
            if self.is_left_descent(&y, s) {
                y = self.multiply(g, &y);
                ly -= 1;
            }
            w = self.multiply(g, &w);
            lw -= 1;
        }
    }

    /// All elements of length at most `max_len`, grouped by length.
    pub fn enumerate_by_length(&self, max_len: usize) -> Result<Vec<Vec<AffineElement>>> {
        let mut levels = vec![vec![self.identity()]];
        let mut total = 1usize;
        for _ in 0..max_len {
            let prev = levels.last().expect("nonempty");
            let mut seen = HashSet::new();
            let mut next = Vec::new();
            for w in prev {
                for (i, g) in self.gens.iter().enumerate() {
                    if !self.is_left_descent(w, i) {
                        let sw = self.multiply(g, w);
                        if seen.insert(sw.clone()) {
                            next.push(sw);
                        }
                    }
                }
            }
            total += next.len();
            if total > self.enumeration_cap {
                return Err(Error::ResourceCap {
                    what: "group enumeration",
                    cap: self.enumeration_cap,
                });
            }
            next.sort();
            levels.push(next);
        }
        Ok(levels)
    }

    pub fn enumerate_up_to_length(&self, max_len: usize) -> Result<Vec<AffineElement>> {
        Ok(self
            .enumerate_by_length(max_len)?
            .into_iter()
            .flatten()
            .collect())
    }

    /// Minimal-length element of the coset `wH`, `Hw` or `HwH`, where `H` is
    /// generated by the given fundamental reflections.
    pub fn min_coset_rep(&self, w: &AffineElement, gens: &[usize], side: Side) -> AffineElement {
        let mut cur = w.clone();
        loop {
            let mut changed = false;
            if matches!(side, Side::Left | Side::Both) {
                if let Some(&i) = gens.iter().find(|&&i| self.is_left_descent(&cur, i)) {
                    cur = self.multiply(&self.gens[i], &cur);
                    changed = true;
                }
            }
            if matches!(side, Side::Right | Side::Both) {
                if let Some(&i) = gens.iter().find(|&&i| self.is_right_descent(&cur, i)) {
                    cur = self.multiply(&cur, &self.gens[i]);
                    changed = true;
                }
            }
            if !changed {
                return cur;
            }
        }
    }

    /// Indices `1..=rank` of the finite simple reflections.
    pub fn finite_generators(&self) -> Vec<usize> {
        (1..self.num_generators()).collect()
    }

    /// `w.C` lies in the dominant chamber, i.e. `w` is minimal in `W w`.
    pub fn is_dominant_alcove(&self, w: &AffineElement) -> bool {
        (1..self.num_generators()).all(|i| !self.is_left_descent(w, i))
    }

    /// The longest element of the finite Weyl group.
    pub fn w0(&self) -> &AffineElement {
        &self.w0
    }

    fn compute_w0(&self) -> AffineElement {
        let rho: Vec<i64> = vec![1; self.rank()];
        let mut w = self.identity();
        loop {
            let img = w.apply_finite(&rho);
            match img.iter().position(|&c| c > 0) {
                Some(i) => w = self.multiply(&self.gens[i + 1], &w),
                None => return w,
            }
        }
    }

    /// `w0 w w0`. Conjugation by `w0` exchanges the walls of `C` with the
    /// walls of the antidominant alcove `C^- = w0.C`.
    pub fn conj_w0(&self, w: &AffineElement) -> AffineElement {
        self.multiply(&self.multiply(&self.w0, w), &self.w0)
    }

    /// Length for the generating set given by the walls of `C^-`.
    pub fn length_minus(&self, w: &AffineElement) -> usize {
        self.length(&self.conj_w0(w))
    }

    /// Bruhat order for the generating set given by the walls of `C^-`.
    pub fn bruhat_leq_minus(&self, y: &AffineElement, w: &AffineElement) -> bool {
        self.bruhat_leq(&self.conj_w0(y), &self.conj_w0(w))
    }

    /// Reflection in the wall of `C^-` corresponding to generator `i`.
    pub fn generator_minus(&self, i: usize) -> AffineElement {
        self.conj_w0(&self.gens[i])
    }

    pub fn is_left_descent_minus(&self, w: &AffineElement, i: usize) -> bool {
        // s' w < w in the C^- system iff s (w0 w w0) < w0 w w0.
        self.is_left_descent(&self.conj_w0(w), i)
    }

    pub fn is_right_descent_minus(&self, w: &AffineElement, i: usize) -> bool {
        self.is_right_descent(&self.conj_w0(w), i)
    }
}
