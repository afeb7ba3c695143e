//! Alcove geometry for the dot action of `W_e`.
//!
//! The standard alcove is `C = { x : 0 < <x+rho, alpha^vee> < e }` and the
//! antidominant alcove is `C^- = w0.C = { x : -e < <x+rho, alpha^vee> < 0 }`.
//! Elements attached to weights come in two flavours: `f(mu)` is measured
//! against the walls of `C`, while `w_mu`, `d(mu)` and `epsilon(mu)` are
//! measured against the walls of `C^-` (see `GroupContext::length_minus`).

use std::collections::{HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::root::Weight;
use crate::weyl::{AffineElement, GroupContext, Side};

/// The table `alpha -> n_alpha` of an alcove, indexed like
/// `RootDatum::positive_roots`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlcoveCoords {
    pub n: Vec<i64>,
}

impl AlcoveCoords {
    pub fn d_value(&self) -> i64 {
        self.n.iter().sum()
    }

    pub fn is_dominant(&self) -> bool {
        self.n.iter().all(|&x| x >= 0)
    }
}

pub fn alcove_of(ctx: &GroupContext, w: &AffineElement) -> AlcoveCoords {
    AlcoveCoords {
        n: ctx.alcove_indices(w),
    }
}

pub fn d_value(a: &AlcoveCoords) -> i64 {
    a.d_value()
}

fn shifted(mu: &Weight) -> Vec<i64> {
    mu.0.iter().map(|c| c + 1).collect()
}

/// `<mu + rho, alpha^vee>` for every positive root.
pub fn shifted_pairings(ctx: &GroupContext, mu: &Weight) -> Vec<i64> {
    let y = shifted(mu);
    ctx.datum().positive_roots().iter().map(|a| a.pair(&y)).collect()
}

fn check_rank(ctx: &GroupContext, mu: &Weight) -> Result<()> {
    if mu.rank() != ctx.rank() {
        return Err(Error::WrongRank {
            expected: ctx.rank(),
            got: mu.rank(),
        });
    }
    Ok(())
}

fn check_dominant(ctx: &GroupContext, mu: &Weight) -> Result<()> {
    check_rank(ctx, mu)?;
    if !mu.is_dominant() {
        return Err(Error::NotDominant(mu.0.clone()));
    }
    Ok(())
}

pub fn in_closure_of_c(ctx: &GroupContext, mu: &Weight) -> bool {
    let y = shifted(mu);
    y.iter().all(|&c| c >= 0) && ctx.datum().highest_root().pair(&y) <= ctx.e()
}

pub fn in_closure_of_c_minus(ctx: &GroupContext, mu: &Weight) -> bool {
    let y = shifted(mu);
    y.iter().all(|&c| c <= 0) && ctx.datum().highest_root().pair(&y) >= -ctx.e()
}

/// The representative `x` of the dot orbit of `mu` in the closure of `C`,
/// together with some `w` with `w.x = mu`.
pub fn fundamental_point(ctx: &GroupContext, mu: &Weight) -> (Weight, AffineElement) {
    let e = ctx.e();
    let theta = ctx.datum().highest_root().clone();
    let mut x = mu.clone();
    let mut w = ctx.identity();
    loop {
        let y = shifted(&x);
        let s = match y.iter().position(|&c| c < 0) {
            Some(i) => i + 1,
            None if theta.pair(&y) > e => 0,
            None => return (x, w),
        };
        let g = ctx.generator(s);
        x = ctx.dot_act(g, &x);
        w = ctx.multiply(&w, g);
    }
}

pub fn same_orbit(ctx: &GroupContext, mu: &Weight, nu: &Weight) -> bool {
    fundamental_point(ctx, mu).0 == fundamental_point(ctx, nu).0
}

/// Fundamental reflections (walls of `C`) fixing a point of the closure
/// of `C`.
pub fn stabilizer_generators(ctx: &GroupContext, x: &Weight) -> Vec<usize> {
    let y = shifted(x);
    let mut out = Vec::new();
    if ctx.datum().highest_root().pair(&y) == ctx.e() {
        out.push(0);
    }
    out.extend((0..ctx.rank()).filter(|&i| y[i] == 0).map(|i| i + 1));
    out
}

/// Walls of `C^-` fixing a point of the closure of `C^-`, as generator
/// indices of the `C^-` system.
pub fn stabilizer_generators_minus(ctx: &GroupContext, b: &Weight) -> Vec<usize> {
    // w0 maps the closure of C^- onto the closure of C and conjugates the
    // two generating sets into each other.
    stabilizer_generators(ctx, &ctx.dot_act(ctx.w0(), b))
}

/// `n_alpha` of the alcove whose upper closure contains the dominant weight
/// `mu`: `ceil(<mu+rho, alpha^vee> / e) - 1`.
pub fn upper_closure_indices(ctx: &GroupContext, mu: &Weight) -> AlcoveCoords {
    let e = ctx.e();
    AlcoveCoords {
        n: shifted_pairings(ctx, mu)
            .into_iter()
            .map(|p| (p + e - 1).div_euclid(e) - 1)
            .collect(),
    }
}

/// `n_alpha e < <mu+rho, alpha^vee> <= (n_alpha+1) e` for the alcove `w.C`.
pub fn in_upper_closure(ctx: &GroupContext, mu: &Weight, w: &AffineElement) -> bool {
    let e = ctx.e();
    alcove_of(ctx, w)
        .n
        .iter()
        .zip(shifted_pairings(ctx, mu))
        .all(|(&n, p)| n * e < p && p <= (n + 1) * e)
}

/// `f(mu)`: the unique element with `mu` in the upper closure of `f.C`,
/// equivalently the minimal-length `f` with `f.x = mu` for `x` in the
/// closure of `C`.
pub fn upper_closure_element(ctx: &GroupContext, mu: &Weight) -> Result<AffineElement> {
    check_dominant(ctx, mu)?;
    let (x, w) = fundamental_point(ctx, mu);
    let f = ctx.min_coset_rep(&w, &stabilizer_generators(ctx, &x), Side::Right);
    debug_assert_eq!(alcove_of(ctx, &f), upper_closure_indices(ctx, mu));
    Ok(f)
}

/// The base point of the orbit of `mu` in the closure of `C^-`.
pub fn antidominant_base(ctx: &GroupContext, mu: &Weight) -> Weight {
    let (x, _) = fundamental_point(ctx, mu);
    ctx.dot_act(ctx.w0(), &x)
}

/// Strip right descents (for the walls of `C^-`) lying in `gens`.
fn strip_right_minus(ctx: &GroupContext, w: &AffineElement, gens: &[usize]) -> AffineElement {
    let mut cur = w.clone();
    while let Some(&i) = gens.iter().find(|&&i| ctx.is_right_descent_minus(&cur, i)) {
        cur = ctx.multiply(&cur, &ctx.generator_minus(i));
    }
    cur
}

fn strip_left_minus(ctx: &GroupContext, w: &AffineElement, gens: &[usize]) -> AffineElement {
    let mut cur = w.clone();
    while let Some(&i) = gens.iter().find(|&&i| ctx.is_left_descent_minus(&cur, i)) {
        cur = ctx.multiply(&ctx.generator_minus(i), &cur);
    }
    cur
}

/// `w_mu`: the element of minimal length (for the walls of `C^-`) with
/// `w_mu^{-1}.mu` in the closure of `C^-`. Found by walking `mu` down to the
/// antidominant alcove and then stripping the stabiliser of the base point.
pub fn min_antidominant_element(ctx: &GroupContext, mu: &Weight) -> Result<AffineElement> {
    check_dominant(ctx, mu)?;
    let e = ctx.e();
    let theta = ctx.datum().highest_root().clone();
    let t0 = ctx.generator_minus(0);
    let mut x = mu.clone();
    let mut w = ctx.identity();
    loop {
        let y = shifted(&x);
        let g = match y.iter().position(|&c| c > 0) {
            Some(i) => ctx.generator(i + 1).clone(),
            None if theta.pair(&y) < -e => t0.clone(),
            None => break,
        };
        x = ctx.dot_act(&g, &x);
        w = ctx.multiply(&w, &g);
    }
    Ok(strip_right_minus(ctx, &w, &stabilizer_generators_minus(ctx, &x)))
}

/// Data attached to a dominant `mu = w0 d . base` with `base` in the closure
/// of `C^-`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubleCosetData {
    /// Minimal `(W, Stab(base))` double coset representative.
    pub d: AffineElement,
    /// Minimal element with `epsilon . base = mu`.
    pub epsilon: AffineElement,
    pub w0d: AffineElement,
}

pub fn double_coset_data(ctx: &GroupContext, mu: &Weight, base: &Weight) -> Result<DoubleCosetData> {
    check_dominant(ctx, mu)?;
    check_rank(ctx, base)?;
    if !in_closure_of_c_minus(ctx, base) {
        return Err(Error::InvalidInput(format!(
            "base {base} is not in the closure of the antidominant alcove"
        )));
    }
    let (xm, wm) = fundamental_point(ctx, mu);
    let (xb, wb) = fundamental_point(ctx, base);
    if xm != xb {
        return Err(Error::NotInOrbit {
            mu: mu.0.clone(),
            base: base.0.clone(),
        });
    }
    let stab = stabilizer_generators_minus(ctx, base);
    let w = ctx.multiply(&wm, &ctx.inverse(&wb));
    let epsilon = strip_right_minus(ctx, &w, &stab);
    let finite = ctx.finite_generators();
    let mut d = epsilon.clone();
    loop {
        let next = strip_right_minus(ctx, &strip_left_minus(ctx, &d, &finite), &stab);
        if next == d {
            break;
        }
        d = next;
    }
    let w0d = ctx.multiply(ctx.w0(), &d);
    Ok(DoubleCosetData { d, epsilon, w0d })
}

/// `nu - mu` is a nonnegative integral combination of simple roots.
pub fn dominance_leq_weights(ctx: &GroupContext, mu: &Weight, nu: &Weight) -> bool {
    match ctx.datum().root_coords(nu.sub(mu).coords()) {
        Some(k) => k.iter().all(|&c| c >= 0),
        None => false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Linkage {
    Linked,
    NotLinked,
    /// The search bound was reached before the question was settled.
    Inconclusive,
}

pub const DEFAULT_LINKAGE_BOUND: usize = 200_000;

/// `mu ↑ nu` for the strong linkage order: a chain
/// `mu = mu_0 <= mu_1 <= ... <= mu_m = nu` in the dominance order with each
/// step an affine reflection. Every intermediate weight lies in the
/// dominance interval `[mu, nu]`, so a breadth-first search inside that
/// interval is exhaustive; `bound` caps the number of visited weights.
pub fn strong_linkage_up(ctx: &GroupContext, mu: &Weight, nu: &Weight, bound: usize) -> Linkage {
    if mu == nu {
        return Linkage::Linked;
    }
    if !dominance_leq_weights(ctx, mu, nu) {
        return Linkage::NotLinked;
    }
    let e = ctx.e();
    let roots = ctx.datum().positive_roots();
    let mut seen: HashSet<Weight> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(mu.clone());
    queue.push_back(mu.clone());
    while let Some(k) = queue.pop_front() {
        let y = shifted(&k);
        let gap = ctx
            .datum()
            .root_coords(nu.sub(&k).coords())
            .expect("intermediate weights stay in nu - Q");
        for a in roots {
            let p = a.pair(&y);
            // s_{alpha,m}.k = k + (m e - p) alpha; need m e - p > 0.
            let mut m = p.div_euclid(e) + 1;
            loop {
                let step = m * e - p;
                if gap.iter().zip(&a.coeffs).any(|(g, c)| g - step * c < 0) {
                    break;
                }
                let next = k.add(&Weight(a.weight.iter().map(|c| c * step).collect()));
                if &next == nu {
                    return Linkage::Linked;
                }
                if seen.insert(next.clone()) {
                    if seen.len() > bound {
                        return Linkage::Inconclusive;
                    }
                    queue.push_back(next);
                }
                m += 1;
            }
        }
    }
    Linkage::NotLinked
}

/// Dominant weights with `<mu + rho, theta^vee> <= max_pairing`, in
/// lexicographic order.
pub fn dominant_weights_in_box(ctx: &GroupContext, max_pairing: i64) -> Vec<Weight> {
    let theta = ctx.datum().highest_root().coeffs.clone();
    let mut out = Vec::new();
    let mut cur = vec![0i64; ctx.rank()];
    fn rec(i: usize, budget: i64, theta: &[i64], cur: &mut Vec<i64>, out: &mut Vec<Weight>) {
        if i == theta.len() {
            out.push(Weight(cur.clone()));
            return;
        }
        let mut c = 0;
        while theta[i] * (c + 1) <= budget {
            cur[i] = c;
            rec(i + 1, budget - theta[i] * (c + 1), theta, cur, out);
            c += 1;
        }
    }
    rec(0, max_pairing, &theta, &mut cur, &mut out);
    out
}
