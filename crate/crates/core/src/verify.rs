//! Exhaustive verifiers over bounded weight boxes and length balls. Each
//! returns a [`Report`] listing reproducers for every failure.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::alcove::{
    antidominant_base, double_coset_data, dominant_weights_in_box, fundamental_point, min_antidominant_element,
    stabilizer_generators, strong_linkage_up, upper_closure_element, upper_closure_indices, DoubleCosetData, Linkage,
};
use crate::error::Result;
use crate::kl::{inverse_kl_q, kl_p, lower_ideal, KlTable};
use crate::mult::{w_length, MultEngine};
use crate::partition::{list_partitions, to_weight};
use crate::poly::QPoly;
use crate::root::Weight;
use crate::weyl::{AffineElement, GroupContext};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub suite: String,
    pub context: String,
    pub cases_checked: usize,
    pub failures: Vec<String>,
    pub inconclusive: Vec<String>,
}

impl Report {
    fn new(suite: &str, ctx: &GroupContext) -> Self {
        Report {
            suite: suite.to_string(),
            context: ctx.fingerprint(),
            cases_checked: 0,
            failures: Vec::new(),
            inconclusive: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.inconclusive.is_empty()
    }

    fn absorb(&mut self, outcomes: Vec<Outcome>) {
        for o in outcomes {
            self.cases_checked += 1;
            match o {
                Outcome::Pass => {}
                Outcome::Fail(s) => self.failures.push(s),
                Outcome::Inconclusive(s) => self.inconclusive.push(s),
            }
        }
    }
}

enum Outcome {
    Pass,
    Fail(String),
    Inconclusive(String),
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Outcome::Pass
    } else {
        Outcome::Fail(msg())
    }
}

/// Dominant weights of the box grouped by dot orbit (keyed by the orbit's
/// point in the closure of `C`), each group in lexicographic order.
pub fn orbits_in_box(ctx: &GroupContext, max_pairing: i64) -> BTreeMap<Weight, Vec<Weight>> {
    let mut out: BTreeMap<Weight, Vec<Weight>> = BTreeMap::new();
    for mu in dominant_weights_in_box(ctx, max_pairing) {
        out.entry(fundamental_point(ctx, &mu).0).or_default().push(mu);
    }
    out
}

/// The largest regular and the largest singular orbit of the box (ties go
/// to the smaller base point). Either may be missing: for small `e` no
/// weight is regular.
pub fn sample_orbits(ctx: &GroupContext, max_pairing: i64) -> Vec<(Weight, Vec<Weight>)> {
    let orbits = orbits_in_box(ctx, max_pairing);
    let pick = |regular: bool| {
        orbits
            .iter()
            .filter(|(x, _)| stabilizer_generators(ctx, x).is_empty() == regular)
            .max_by(|a, b| a.1.len().cmp(&b.1.len()).then(b.0.cmp(a.0)))
            .map(|(x, v)| (x.clone(), v.clone()))
    };
    [pick(true), pick(false)].into_iter().flatten().collect()
}

/// Strong linkage agrees with the Bruhat order on upper-closure elements,
/// for all pairs in one orbit, over every orbit of the box.
pub fn verify_linkage_order(ctx: &GroupContext, max_pairing: i64, bound: usize) -> Result<Report> {
    let mut report = Report::new("orders/linkage-vs-bruhat", ctx);
    for weights in orbits_in_box(ctx, max_pairing).values() {
        let fs: Vec<AffineElement> = weights.iter().map(|m| upper_closure_element(ctx, m)).collect::<Result<_>>()?;
        let idx: Vec<(usize, usize)> = (0..weights.len()).flat_map(|i| (0..weights.len()).map(move |j| (i, j))).collect();
        let outcomes = idx
            .par_iter()
            .map(|&(i, j)| {
                let (mu, nu) = (&weights[i], &weights[j]);
                let b = ctx.bruhat_leq(&fs[i], &fs[j]);
                match strong_linkage_up(ctx, mu, nu, bound) {
                    Linkage::Inconclusive => Outcome::Inconclusive(format!("linkage search bound hit for {mu} -> {nu}")),
                    l => check((l == Linkage::Linked) == b, || {
                        format!("{mu} -> {nu}: linked {:?}, f(mu) <= f(nu) {b}", l)
                    }),
                }
            })
            .collect();
        report.absorb(outcomes);
    }
    Ok(report)
}

/// For a base point in the interior of `C`: the elements `y` found by
/// enumerating the group (not through upper closures) with `y.lambda`
/// dominant in the box, compared pairwise by Bruhat order and by strong
/// linkage of their images.
pub fn verify_bruhat_linkage_regular(ctx: &GroupContext, lambda: &Weight, max_pairing: i64, bound: usize) -> Result<Report> {
    let mut report = Report::new("orders/regular-orbit-bruhat-vs-linkage", ctx);
    if !stabilizer_generators(ctx, lambda).is_empty() || upper_closure_indices(ctx, lambda).d_value() != 0 {
        report.failures.push(format!("{lambda} is not in the interior of the standard alcove"));
        return Ok(report);
    }
    let in_box: Vec<Weight> = dominant_weights_in_box(ctx, max_pairing);
    let max_len = in_box
        .iter()
        .filter(|m| fundamental_point(ctx, m).0 == *lambda)
        .map(|m| upper_closure_indices(ctx, m).d_value() as usize)
        .max()
        .unwrap_or(0);
    let mut found: Vec<(AffineElement, Weight)> = Vec::new();
    for y in ctx.enumerate_up_to_length(max_len)? {
        let mu = ctx.dot_act(&y, lambda);
        if in_box.binary_search(&mu).is_ok() {
            found.push((y, mu));
        }
    }
    let count = in_box.iter().filter(|m| fundamental_point(ctx, m).0 == *lambda).count();
    if found.len() != count {
        report.failures.push(format!("enumeration found {} orbit points in the box, expected {count}", found.len()));
    }
    let idx: Vec<(usize, usize)> = (0..found.len()).flat_map(|i| (0..found.len()).map(move |j| (i, j))).collect();
    let outcomes = idx
        .par_iter()
        .map(|&(i, j)| {
            let ((y, mu), (w, nu)) = (&found[i], &found[j]);
            let b = ctx.bruhat_leq(y, w);
            match strong_linkage_up(ctx, mu, nu, bound) {
                Linkage::Inconclusive => Outcome::Inconclusive(format!("linkage search bound hit for {mu} -> {nu}")),
                l => check((l == Linkage::Linked) == b, || format!("y.lambda = {mu}, w.lambda = {nu}: y <= w {b}, linked {l:?}")),
            }
        })
        .collect();
    report.absorb(outcomes);
    Ok(report)
}

/// Dominant root-lattice weights of height at most 2, and the highest root.
fn translation_sample(ctx: &GroupContext) -> Vec<Weight> {
    let datum = ctx.datum();
    let n = ctx.rank();
    let mut out = vec![Weight(datum.highest_root().weight.clone())];
    let mut coeffs: Vec<Vec<i64>> = Vec::new();
    for i in 0..n {
        let mut k = vec![0; n];
        k[i] = 1;
        coeffs.push(k.clone());
        for j in i..n {
            let mut k2 = k.clone();
            k2[j] += 1;
            coeffs.push(k2);
        }
    }
    for k in coeffs {
        let w = Weight(datum.weight_of_coeffs(&k));
        if w.is_dominant() && !out.contains(&w) {
            out.push(w);
        }
    }
    out
}

/// Upper closures commute with dominant translations, and the lengths add.
pub fn verify_translation(ctx: &GroupContext, orbit: &[Weight]) -> Result<Report> {
    let mut report = Report::new("orders/translation", ctx);
    let xis = translation_sample(ctx);
    let mut outcomes = Vec::new();
    for mu in orbit {
        let f = upper_closure_element(ctx, mu)?;
        for xi in &xis {
            let z = ctx.translation(xi)?;
            let zmu = ctx.dot_act(&z, mu);
            let zf = ctx.multiply(&z, &f);
            let fz = upper_closure_element(ctx, &zmu)?;
            outcomes.push(check(fz == zf, || format!("f(z.{mu}) != z f({mu}) for xi = {xi}")));
            let (lz, lf, lzf) = (ctx.length(&z), ctx.length(&f), ctx.length(&zf));
            outcomes.push(check(lzf == lz + lf, || {
                format!("l(z f({mu})) = {lzf} but l(z) + l(f) = {lz} + {lf} for xi = {xi}")
            }));
        }
    }
    report.absorb(outcomes);
    Ok(report)
}

fn coset_data(ctx: &GroupContext, orbit: &[Weight]) -> Result<Vec<DoubleCosetData>> {
    orbit
        .iter()
        .map(|mu| double_coset_data(ctx, mu, &antidominant_base(ctx, mu)))
        .collect()
}

/// The three orders on double coset data agree.
pub fn verify_double_coset_orders(ctx: &GroupContext, orbit: &[Weight]) -> Result<Report> {
    let mut report = Report::new("orders/double-coset-orders", ctx);
    let data = coset_data(ctx, orbit)?;
    let idx: Vec<(usize, usize)> = (0..orbit.len()).flat_map(|i| (0..orbit.len()).map(move |j| (i, j))).collect();
    let outcomes = idx
        .par_iter()
        .map(|&(i, j)| {
            let (a, b) = (&data[i], &data[j]);
            let d = ctx.bruhat_leq_minus(&a.d, &b.d);
            let eps = ctx.bruhat_leq_minus(&a.epsilon, &b.epsilon);
            let w0d = ctx.bruhat_leq_minus(&a.w0d, &b.w0d);
            check(d == eps && eps == w0d, || {
                format!("{} vs {}: d {d}, epsilon {eps}, w0 d {w0d}", orbit[i], orbit[j])
            })
        })
        .collect();
    report.absorb(outcomes);
    Ok(report)
}

/// `f(mu) = w0 d(mu) w0`, and `d <= epsilon <= w0 d` with `epsilon.base = mu`.
pub fn verify_f_conjugation(ctx: &GroupContext, orbit: &[Weight]) -> Result<Report> {
    let mut report = Report::new("orders/f-is-w0-d-w0", ctx);
    let data = coset_data(ctx, orbit)?;
    let mut outcomes = Vec::new();
    for (mu, dd) in orbit.iter().zip(&data) {
        let f = upper_closure_element(ctx, mu)?;
        let conj = ctx.conj_w0(&dd.d);
        outcomes.push(check(f == conj, || format!("f({mu}) != w0 d w0")));
        let base = antidominant_base(ctx, mu);
        outcomes.push(check(
            ctx.dot_act(&dd.epsilon, &base) == *mu
                && ctx.bruhat_leq_minus(&dd.d, &dd.epsilon)
                && ctx.bruhat_leq_minus(&dd.epsilon, &dd.w0d),
            || format!("d <= epsilon <= w0 d fails for {mu}"),
        ));
    }
    report.absorb(outcomes);
    Ok(report)
}

/// `l(w0 d) = l(w0) + l(d)` for the walls of `C^-`.
pub fn verify_double_coset_lengths(ctx: &GroupContext, orbit: &[Weight]) -> Result<Report> {
    let mut report = Report::new("orders/w0-d-length", ctx);
    let data = coset_data(ctx, orbit)?;
    let l0 = ctx.length_minus(ctx.w0());
    let outcomes = orbit
        .iter()
        .zip(&data)
        .map(|(mu, dd)| {
            let (a, b) = (ctx.length_minus(&dd.w0d), ctx.length_minus(&dd.d));
            check(a == l0 + b, || format!("{mu}: l(w0 d) = {a}, l(w0) + l(d) = {l0} + {b}"))
        })
        .collect();
    report.absorb(outcomes);
    Ok(report)
}

/// Every orders check: the linkage equivalence over the whole box, and the
/// double coset checks on one regular and one singular orbit.
pub fn verify_orders(ctx: &GroupContext, max_pairing: i64, bound: usize) -> Result<Vec<Report>> {
    let mut out = vec![verify_linkage_order(ctx, max_pairing, bound)?];
    for (base, orbit) in sample_orbits(ctx, max_pairing) {
        out.push(verify_translation(ctx, &orbit)?);
        out.push(verify_double_coset_orders(ctx, &orbit)?);
        out.push(verify_f_conjugation(ctx, &orbit)?);
        out.push(verify_double_coset_lengths(ctx, &orbit)?);
        if stabilizer_generators(ctx, &base).is_empty() {
            out.push(verify_bruhat_linkage_regular(ctx, &base, max_pairing, bound)?);
        }
    }
    for r in &mut out {
        r.context = format!("{} box {max_pairing}", ctx.fingerprint());
    }
    Ok(out)
}

/// `sum_z (-1)^{l(z)-l(y)} P_{y,z} Q_{z,w} = delta_{y,w}`, and the other
/// side `sum_z Q_{y,z} (-1)^{l(w)-l(z)} P_{z,w} = delta_{y,w}`, for all
/// `y <= w` with `l(w) <= max_len`.
pub fn verify_inversion(ctx: &GroupContext, tp: &KlTable, tq: &KlTable, max_len: usize) -> Result<Report> {
    let mut report = Report::new("klpoly/inversion", ctx);
    report.context = format!("{} length {max_len}", ctx.fingerprint());
    let cap = tp.interval_cap();
    let ws = ctx.enumerate_up_to_length(max_len)?;
    let outcomes: Vec<Vec<Outcome>> = ws
        .par_iter()
        .map(|w| -> Result<Vec<Outcome>> {
            let ideal = lower_ideal(ctx, w, cap)?;
            let lw = ctx.length(w) as i64;
            let q: Vec<QPoly> = ideal.iter().map(|z| inverse_kl_q(ctx, tp, tq, z, w)).collect::<Result<_>>()?;
            let pw: Vec<QPoly> = ideal.iter().map(|z| kl_p(ctx, tp, z, w)).collect::<Result<_>>()?;
            let mut out = Vec::with_capacity(ideal.len());
            for y in &ideal {
                let ly = ctx.length(y) as i64;
                let mut left = QPoly::zero();
                let mut right = QPoly::zero();
                for (k, z) in ideal.iter().enumerate() {
                    let lz = ctx.length(z) as i64;
                    if lz < ly {
                        continue;
                    }
                    let sign = if (lz - ly) % 2 == 0 { 1 } else { -1 };
                    // P_{y,z} Q_{z,w}
                    let p = kl_p(ctx, tp, y, z)?;
                    if !p.is_zero() && !q[k].is_zero() {
                        left.add_assign_scaled(&(&p * &q[k]), sign);
                    }
                    // Q_{y,z} (-1)^{l(w)-l(z)} P_{z,w}
                    let qyz = inverse_kl_q(ctx, tp, tq, y, z)?;
                    if !qyz.is_zero() && !pw[k].is_zero() {
                        let sign_w = if (lw - lz) % 2 == 0 { 1 } else { -1 };
                        right.add_assign_scaled(&(&qyz * &pw[k]), sign_w);
                    }
                }
                let delta = if y == w { QPoly::one() } else { QPoly::zero() };
                out.push(check(left == delta && right == delta, || {
                    format!(
                        "y = {:?}, w = {:?}: sum P Q = {left}, sum Q P = {right}",
                        ctx.reduced_word(y),
                        ctx.reduced_word(w)
                    )
                }));
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    report.absorb(outcomes.into_iter().flatten().collect());
    Ok(report)
}

/// Every nonzero layer entry of every Weyl table for partitions of `r`
/// (`n = r`) sits at a layer with the parity of the length gap, lengths taken
/// from the antidominant elements (not from the tables).
pub fn verify_parity(engine: &MultEngine, r: u32) -> Result<Report> {
    let ctx = engine.ctx();
    let n = (r as usize).max(2);
    let mut report = Report::new("parity", ctx);
    report.context = format!("{} r {r}", ctx.fingerprint());
    let parts = list_partitions(n, r);
    let tables = parts
        .par_iter()
        .map(|lam| engine.weyl_layer_table(lam, n))
        .collect::<Result<Vec<_>>>()?;
    let mut outcomes = Vec::new();
    for (lam, t) in parts.iter().zip(&tables) {
        let lw = to_weight(lam, n)?;
        let top = ctx.length_minus(&min_antidominant_element(ctx, &lw)?);
        outcomes.push(check(top == w_length(ctx, &lw), || format!("l(w_lambda) mismatch for {lam}")));
        for (i, layer) in t.layers.iter().enumerate() {
            for x in layer {
                let l = ctx.length_minus(&min_antidominant_element(ctx, &x.weight)?);
                outcomes.push(check(top >= l + i && (top - l - i) % 2 == 0, || {
                    format!("{lam}: {} at layer {i} with l(w_lambda) = {top}, l(w_nu) = {l}", x.label)
                }));
            }
        }
    }
    report.absorb(outcomes);
    Ok(report)
}
