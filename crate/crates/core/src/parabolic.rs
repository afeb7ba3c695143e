//! Inverse Kazhdan-Lusztig polynomials on the dominant part of one dot
//! orbit.
//!
//! Dominant alcoves `x.C` are the minimal representatives `x` of `W\W_e`
//! (`W` the finite Weyl group). The polynomial `P_{w0 x, w0 y}` is the KL
//! polynomial of the spherical module `M = triv ⊗_{H_W} H`, whose standard
//! basis `M_x` is indexed by dominant alcoves. For an orbit whose base point
//! `b` in the closure of `C` has stabiliser `W_K`, the dominant weights of the
//! orbit index the standard basis `V_nu` of `V = M ⊗_{H_K} sgn`, with
//! `V_{f(nu)} = image of M_{f(nu)}`. The KL basis of `V` is the image of the
//! KL basis of `M` at `K`-minimal elements (the others map to zero), so the
//! inverse KL matrix of `V` is the restriction of the inverse KL matrix of
//! `M`. That restriction is what the layer formula needs, and it is computed
//! here from the bar involution of `V` alone:
//!
//! 1. expand `bar(M_x)` in the standard basis of `M` along a reduced word,
//!    using `bar(H_s) = H_s + (v - v^{-1})`;
//! 2. project onto `V` (`M_{f(nu) u} -> (-v)^{l(u)} V_nu`, zero off the
//!    dominant weights) to get the R-polynomials of `V`;
//! 3. build the KL basis of `V` from bar invariance and invert it.
//!
//! Laurent polynomials are in `v` with `q = v^{-2}`: the `V`-KL coefficient
//! `p_{nu,lambda}(v)` corresponds to `v^{L} P(v^{-2})` and the inverse entry
//! to `(-v)^{L} Q(v^{-2})`, where `L = l(f(lambda)) - l(f(nu))`.

use std::collections::HashMap;
use std::sync::Arc;

use parking_lot::RwLock;
use rayon::prelude::*;

use crate::alcove::{fundamental_point, upper_closure_element, upper_closure_indices};
use crate::error::{Error, Result};
use crate::poly::QPoly;
use crate::root::Weight;
use crate::weyl::{AffineElement, GroupContext};

pub const DEFAULT_ALCOVE_CAP: usize = 2_000_000;

/// Laurent polynomial in `v`: `coeffs[i]` is the coefficient of `v^{low+i}`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct LPoly {
    low: i64,
    coeffs: Vec<i64>,
}

impl LPoly {
    fn one() -> Self {
        LPoly {
            low: 0,
            coeffs: vec![1],
        }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    #[cfg(test)]
    fn coeff(&self, d: i64) -> i64 {
        if d < self.low {
            return 0;
        }
        self.coeffs.get((d - self.low) as usize).copied().unwrap_or(0)
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|&&c| c == 0).count();
        if lead == self.coeffs.len() {
            self.coeffs.clear();
            self.low = 0;
        } else if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i64;
        }
    }

    /// `self += c * v^shift * other`.
    fn add_scaled(&mut self, other: &LPoly, c: i64, shift: i64) {
        if other.is_zero() || c == 0 {
            return;
        }
        let olow = other.low + shift;
        if self.is_zero() {
            self.low = olow;
            self.coeffs = other.coeffs.iter().map(|x| x * c).collect();
            return;
        }
        if olow < self.low {
            let pad = (self.low - olow) as usize;
            let mut v = vec![0; pad];
            v.extend_from_slice(&self.coeffs);
            self.coeffs = v;
            self.low = olow;
        }
        let start = (olow - self.low) as usize;
        if start + other.coeffs.len() > self.coeffs.len() {
            self.coeffs.resize(start + other.coeffs.len(), 0);
        }
        for (i, x) in other.coeffs.iter().enumerate() {
            self.coeffs[start + i] += c * x;
        }
        self.trim();
    }

    fn mul(&self, other: &LPoly) -> LPoly {
        if self.is_zero() || other.is_zero() {
            return LPoly::default();
        }
        let mut v = vec![0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        let mut p = LPoly {
            low: self.low + other.low,
            coeffs: v,
        };
        p.trim();
        p
    }

    /// `v -> v^{-1}`.
    fn bar(&self) -> LPoly {
        if self.is_zero() {
            return LPoly::default();
        }
        let high = self.low + self.coeffs.len() as i64 - 1;
        LPoly {
            low: -high,
            coeffs: self.coeffs.iter().rev().cloned().collect(),
        }
    }

    /// Part of strictly positive degree.
    fn positive_part(&self) -> LPoly {
        let mut p = LPoly::default();
        for (i, &c) in self.coeffs.iter().enumerate() {
            let d = self.low + i as i64;
            if d > 0 && c != 0 {
                p.add_scaled(&LPoly::one(), c, d);
            }
        }
        p
    }
}

/// A dominant alcove `y.C` tracked by integer data only: the images
/// `y(alpha_j)` of the simple roots (simple-root coordinates), the scaled
/// centre `h * y(c)` (which identifies the alcove), the image `y(b + rho)` of
/// the base point and the length.
struct AlcoveState {
    images: Vec<Vec<i64>>,
    centre: Vec<i64>,
    point: Vec<i64>,
    len: usize,
}

/// Right multiplication by the generators of `W_e` on [`AlcoveState`].
struct Stepper<'a> {
    ctx: &'a GroupContext,
    theta: Vec<i64>,
    /// `<alpha_j, alpha_s^vee>` for each generator `s` (index 0 uses theta).
    pairings: Vec<Vec<i64>>,
    /// `<b + rho, alpha_s^vee> - m_s e`.
    point_shift: Vec<i64>,
}

impl<'a> Stepper<'a> {
    fn new(ctx: &'a GroupContext, base: &Weight) -> Self {
        let datum = ctx.datum();
        let n = ctx.rank();
        let theta = datum.highest_root().coeffs.clone();
        let shifted: Vec<i64> = base.coords().iter().map(|c| c + 1).collect();
        let mut pairings = vec![vec![0; n]; n + 1];
        let mut point_shift = vec![0; n + 1];
        for j in 0..n {
            pairings[0][j] = datum.highest_root().pair(datum.simple_root(j));
            for s in 1..=n {
                pairings[s][j] = datum.cartan()[s - 1][j];
            }
        }
        point_shift[0] = datum.highest_root().pair(&shifted) - ctx.e();
        for s in 1..=n {
            point_shift[s] = shifted[s - 1];
        }
        Stepper {
            ctx,
            theta,
            pairings,
            point_shift,
        }
    }

    fn start(&self, base: &Weight) -> AlcoveState {
        let n = self.ctx.rank();
        AlcoveState {
            images: (0..n).map(|j| (0..n).map(|k| i64::from(j == k)).collect()).collect(),
            centre: vec![1; n],
            point: base.coords().iter().map(|c| c + 1).collect(),
            len: 0,
        }
    }

    /// `y(alpha_s)` in simple-root coordinates.
    fn image(&self, y: &AlcoveState, s: usize) -> Vec<i64> {
        if s > 0 {
            return y.images[s - 1].clone();
        }
        let n = self.ctx.rank();
        let mut a = vec![0; n];
        for (j, t) in self.theta.iter().enumerate() {
            for k in 0..n {
                a[k] += t * y.images[j][k];
            }
        }
        a
    }

    /// The centre of `ys.C`, and whether `ys` is below `y`. Both only need
    /// the root `y(alpha_s)`.
    fn probe(&self, y: &AlcoveState, s: usize) -> (Vec<i64>, Vec<i64>, bool) {
        let a = self.image(y, s);
        let aw = self.ctx.datum().weight_of_coeffs(&a);
        let positive = a.iter().all(|&c| c >= 0);
        let (centre, descent) = if s > 0 {
            (y.centre.iter().zip(&aw).map(|(p, d)| p - d).collect(), positive)
        } else {
            (y.centre.iter().zip(&aw).map(|(p, d)| p + d).collect(), !positive)
        };
        (centre, a, descent)
    }

    fn step(&self, y: &AlcoveState, s: usize, centre: Vec<i64>, a: &[i64], descent: bool) -> AlcoveState {
        let aw = self.ctx.datum().weight_of_coeffs(a);
        let c = self.point_shift[s];
        let point = y.point.iter().zip(&aw).map(|(p, d)| p - c * d).collect();
        let images = y
            .images
            .iter()
            .enumerate()
            .map(|(j, img)| {
                let k = self.pairings[s][j];
                img.iter().zip(a).map(|(x, d)| x - k * d).collect()
            })
            .collect();
        AlcoveState {
            images,
            centre,
            point,
            len: if descent { y.len - 1 } else { y.len + 1 },
        }
    }
}

/// Standard-basis expansion of `bar(M_x)` in the spherical module, projected
/// to `V`: returns `bar(V_lambda)` where `x = f(lambda)`. The support of the
/// unprojected expansion is the set of dominant alcoves below `x`.
fn projected_bar(
    ctx: &GroupContext,
    x: &AffineElement,
    base: &Weight,
    cap: usize,
) -> Result<HashMap<Weight, LPoly>> {
    // Reduced word of x read left to right; every prefix is again dominant.
    let word: Vec<usize> = ctx.reduced_word(&ctx.inverse(x)).into_iter().rev().collect();
    let stepper = Stepper::new(ctx, base);
    let mut states: Vec<AlcoveState> = vec![stepper.start(base)];
    let mut ids: HashMap<Vec<i64>, usize> = HashMap::new();
    ids.insert(states[0].centre.clone(), 0);
    // neighbours[id][s]: Some(Some(id)) for a dominant ys, Some(None) if ys
    // leaves the dominant chamber, None if not yet computed.
    let mut neighbours: Vec<Vec<Option<Option<(usize, bool)>>>> = vec![vec![None; ctx.num_generators()]];
    // Dense coefficient vectors indexed by state id, with the active ids.
    let mut cur: Vec<LPoly> = vec![LPoly::one()];
    let mut active: Vec<usize> = vec![0];
    let mut next: Vec<LPoly> = Vec::new();
    let mut next_active: Vec<usize> = Vec::new();
    for &s in &word {
        next.resize_with(states.len(), LPoly::default);
        for &y in &active {
            let c = std::mem::take(&mut cur[y]);
            let nb = match neighbours[y][s] {
                Some(nb) => nb,
                None => {
                    let (centre, a, descent) = stepper.probe(&states[y], s);
                    let nb = if centre.iter().all(|&p| p > 0) {
                        let id = match ids.get(&centre) {
                            Some(&id) => id,
                            None => {
                                let id = states.len();
                                let st = stepper.step(&states[y], s, centre.clone(), &a, descent);
                                states.push(st);
                                neighbours.push(vec![None; ctx.num_generators()]);
                                next.push(LPoly::default());
                                ids.insert(centre, id);
                                id
                            }
                        };
                        Some((id, descent))
                    } else {
                        None
                    };
                    neighbours[y][s] = Some(nb);
                    nb
                }
            };
            let mut add = |id: usize, c: &LPoly, k: i64, shift: i64| {
                if next[id].is_zero() {
                    next_active.push(id);
                }
                next[id].add_scaled(c, k, shift);
            };
            match nb {
                // M_y H_s = v^{-1} M_y, so bar(H_s) acts by v.
                None => add(y, &c, 1, 1),
                Some((ys, true)) => add(ys, &c, 1, 0),
                Some((ys, false)) => {
                    add(y, &c, 1, 1);
                    add(y, &c, -1, -1);
                    add(ys, &c, 1, 0);
                }
            }
        }
        next_active.sort_unstable();
        next_active.dedup();
        next_active.retain(|&id| !next[id].is_zero());
        if next_active.len() > cap {
            return Err(Error::ResourceCap {
                what: "dominant alcoves below the highest weight",
                cap,
            });
        }
        std::mem::swap(&mut cur, &mut next);
        std::mem::swap(&mut active, &mut next_active);
        next_active.clear();
        cur.resize_with(states.len(), LPoly::default);
    }
    let mut f_lengths: HashMap<Weight, i64> = HashMap::new();
    let mut col: HashMap<Weight, LPoly> = HashMap::new();
    for &y in &active {
        let c = &cur[y];
        let st = &states[y];
        if st.point.iter().any(|&t| t <= 0) {
            // y lies in a double coset with a finite stabiliser: zero in V.
            continue;
        }
        let nu = Weight(st.point.iter().map(|t| t - 1).collect());
        let fl = *f_lengths.entry(nu.clone()).or_insert_with(|| f_length(ctx, &nu));
        let k = st.len as i64 - fl;
        debug_assert!(k >= 0);
        let sign = if k % 2 == 0 { 1 } else { -1 };
        col.entry(nu).or_default().add_scaled(c, sign, k);
    }
    Ok(col)
}

/// `l(f(nu))`, from the upper-closure indices.
fn f_length(ctx: &GroupContext, nu: &Weight) -> i64 {
    upper_closure_indices(ctx, nu).d_value()
}

type BarColumn = Arc<HashMap<Weight, LPoly>>;

/// Memo for one context: projected bar expansions keyed by dominant weight.
/// Shared between orbits; entries are immutable once inserted.
#[derive(Debug)]
pub struct OrbitKlTable {
    fingerprint: String,
    alcove_cap: usize,
    bars: RwLock<HashMap<Weight, BarColumn>>,
}

impl OrbitKlTable {
    pub fn new(ctx: &GroupContext) -> Self {
        OrbitKlTable {
            fingerprint: ctx.fingerprint(),
            alcove_cap: DEFAULT_ALCOVE_CAP,
            bars: RwLock::new(HashMap::new()),
        }
    }

    pub fn with_alcove_cap(mut self, cap: usize) -> Self {
        self.alcove_cap = cap;
        self
    }

    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    fn check(&self, ctx: &GroupContext) -> Result<()> {
        if self.fingerprint != ctx.fingerprint() {
            return Err(Error::FingerprintMismatch {
                expected: ctx.fingerprint(),
                found: self.fingerprint.clone(),
            });
        }
        Ok(())
    }

    /// `bar(V_lambda) = sum_nu r_{nu,lambda} V_nu`.
    fn bar_column(&self, ctx: &GroupContext, lambda: &Weight) -> Result<BarColumn> {
        if let Some(c) = self.bars.read().get(lambda) {
            return Ok(c.clone());
        }
        let f = upper_closure_element(ctx, lambda)?;
        let (base, _) = fundamental_point(ctx, lambda);
        let col = projected_bar(ctx, &f, &base, self.alcove_cap)?;
        // Keep explicit zero entries: the key set is the Bruhat ideal.
        let col = Arc::new(col);
        Ok(self
            .bars
            .write()
            .entry(lambda.clone())
            .or_insert(col)
            .clone())
    }
}

/// One orbit's data below a highest weight: the dominant weights `nu` with
/// `f(nu) <= f(lambda)`, sorted by `l(f(nu))` then weight, with the P and Q
/// polynomials of the dominant poset in `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitColumn {
    pub lambda: Weight,
    pub weights: Vec<Weight>,
    /// `l(f(nu))` for each entry of `weights`.
    pub lengths: Vec<usize>,
    pub p: Vec<QPoly>,
    pub q: Vec<QPoly>,
}

impl OrbitColumn {
    pub fn index_of(&self, nu: &Weight) -> Option<usize> {
        self.weights.iter().position(|w| w == nu)
    }

    pub fn q_of(&self, nu: &Weight) -> QPoly {
        self.index_of(nu).map(|i| self.q[i].clone()).unwrap_or_default()
    }

    pub fn p_of(&self, nu: &Weight) -> QPoly {
        self.index_of(nu).map(|i| self.p[i].clone()).unwrap_or_default()
    }
}

/// Convert `v^gap P(v^{-2})` (or `(-v)^gap Q(v^{-2})` with `sign = -1`)
/// back to a polynomial in `q`.
fn to_q(p: &LPoly, gap: i64, sign: i64, what: &str) -> Result<QPoly> {
    let flip = if sign < 0 && gap % 2 != 0 { -1 } else { 1 };
    let mut out = Vec::new();
    for (i, &c) in p.coeffs.iter().enumerate() {
        let d = p.low + i as i64;
        if c == 0 {
            continue;
        }
        if d < 0 || d > gap || (gap - d) % 2 != 0 {
            return Err(Error::Validation(format!(
                "{what} has a term v^{d} outside the degree pattern for gap {gap}"
            )));
        }
        let k = ((gap - d) / 2) as usize;
        if k >= out.len() {
            out.resize(k + 1, 0);
        }
        out[k] = flip * c;
    }
    Ok(QPoly::from_coeffs(out))
}

/// The P and Q polynomials of the dominant poset of the orbit of `lambda`,
/// for every dominant `nu` with `f(nu) <= f(lambda)`.
pub fn orbit_column(ctx: &GroupContext, table: &OrbitKlTable, lambda: &Weight) -> Result<OrbitColumn> {
    table.check(ctx)?;
    let top = table.bar_column(ctx, lambda)?;
    let mut weights: Vec<Weight> = top.keys().cloned().collect();
    weights.sort_by_cached_key(|w| (f_length(ctx, w), w.clone()));
    let lens: Vec<i64> = weights.iter().map(|w| f_length(ctx, w)).collect();
    let n = weights.len();
    let idx: HashMap<&Weight, usize> = weights.iter().enumerate().map(|(i, w)| (w, i)).collect();
    // r[j][i] = r_{weights[i], weights[j]} for i <= j.
    let mut r: Vec<Vec<LPoly>> = Vec::with_capacity(n);
    // The bar expansions below the top are independent; shard them.
    let cols: Vec<BarColumn> = weights
        .par_iter()
        .map(|w| if w == lambda { Ok(top.clone()) } else { table.bar_column(ctx, w) })
        .collect::<Result<_>>()?;
    for (w, col) in weights.iter().zip(cols) {
        let mut row = vec![LPoly::default(); n];
        for (nu, c) in col.iter() {
            match idx.get(nu) {
                Some(&i) => row[i] = c.clone(),
                None if c.is_zero() => {}
                None => {
                    return Err(Error::Validation(format!(
                        "bar expansion of {w} reaches {nu} outside the ideal of {lambda}"
                    )))
                }
            }
        }
        r.push(row);
    }
    // KL basis: p[j][i] for i <= j, p - bar(p) = sum_{i<k<=j} r_{i,k} bar(p_{k,j}).
    let mut p: Vec<Vec<LPoly>> = vec![vec![LPoly::default(); n]; n];
    for j in 0..n {
        p[j][j] = LPoly::one();
        for i in (0..j).rev() {
            let mut s = LPoly::default();
            for k in i + 1..=j {
                if !p[j][k].is_zero() && !r[k][i].is_zero() {
                    s.add_scaled(&r[k][i].mul(&p[j][k].bar()), 1, 0);
                }
            }
            let pp = s.positive_part();
            let check = {
                let mut t = pp.clone();
                t.add_scaled(&pp.bar(), -1, 0);
                t
            };
            if check != s {
                return Err(Error::Validation(format!(
                    "bar-invariance defect at ({}, {})",
                    weights[i], weights[j]
                )));
            }
            p[j][i] = pp;
        }
    }
    // Inverse of the unitriangular matrix: y[i] for the column of lambda.
    let jl = *idx.get(lambda).expect("lambda is in its own ideal");
    debug_assert_eq!(jl, n - 1);
    let mut y = vec![LPoly::default(); n];
    y[jl] = LPoly::one();
    for i in (0..jl).rev() {
        let mut acc = LPoly::default();
        for k in i + 1..=jl {
            if !p[k][i].is_zero() && !y[k].is_zero() {
                acc.add_scaled(&p[k][i].mul(&y[k]), -1, 0);
            }
        }
        y[i] = acc;
    }
    let ll = lens[jl];
    let mut pq = Vec::with_capacity(n);
    let mut qq = Vec::with_capacity(n);
    for i in 0..n {
        let gap = ll - lens[i];
        pq.push(to_q(&p[jl][i], gap, 1, "orbit KL polynomial")?);
        qq.push(to_q(&y[i], gap, -1, "orbit inverse KL polynomial")?);
    }
    Ok(OrbitColumn {
        lambda: lambda.clone(),
        lengths: lens.iter().map(|&l| l as usize).collect(),
        weights,
        p: pq,
        q: qq,
    })
}

/// `Q_{nu,lambda}` of the dominant poset; zero when `f(nu) </= f(lambda)`.
pub fn dominant_poset_q(ctx: &GroupContext, table: &OrbitKlTable, nu: &Weight, lambda: &Weight) -> Result<QPoly> {
    Ok(orbit_column(ctx, table, lambda)?.q_of(nu))
}
