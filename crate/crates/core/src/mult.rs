//! Layer tables of q-Weyl and q-Specht modules, linkage classes and parity.
//!
//! The multiplicity of `L(nu)` in layer `i` of the standard module with
//! highest weight `lambda` is the coefficient of `t^{L - i}` in
//! `Q_{w_nu, w_lambda}`, with `L = l(w_lambda) - l(w_nu)` and `q = t^2`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::alcove::{fundamental_point, same_orbit, stabilizer_generators, upper_closure_element, upper_closure_indices};
use crate::error::{Error, Result};
use crate::kl::{inverse_kl_q, KlKind, KlTable};
use crate::parabolic::{orbit_column, OrbitKlTable};
use crate::partition::{conjugate, is_e_regular, is_e_restricted, list_partitions, to_weight, Partition};
use crate::poly::QPoly;
use crate::root::{Family, Weight};
use crate::weyl::GroupContext;

/// Which inverse polynomials feed the layer formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum QConvention {
    /// Signed inverse of `P_{w_nu, w_mu}` over the dominant weights of the
    /// orbit.
    #[default]
    DominantPoset,
    /// Signed inverse over full Bruhat intervals of `W_e`.
    FullInterval,
}

impl fmt::Display for QConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QConvention::DominantPoset => "dominant-poset",
            QConvention::FullInterval => "full-interval",
        })
    }
}

impl FromStr for QConvention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dominant-poset" => Ok(QConvention::DominantPoset),
            "full-interval" => Ok(QConvention::FullInterval),
            _ => Err(Error::InvalidInput(format!("unknown q convention {s:?}"))),
        }
    }
}

impl Serialize for QConvention {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Row label: a partition in type A, a weight otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Label {
    Partition(Partition),
    Weight(Weight),
}

impl Label {
    /// Integer array used in the output formats.
    pub fn as_array(&self) -> Vec<i64> {
        match self {
            Label::Partition(p) => p.parts().iter().map(|&x| i64::from(x)).collect(),
            Label::Weight(w) => w.0.clone(),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Partition(p) => write!(f, "{p}"),
            Label::Weight(w) => write!(f, "w:{w}"),
        }
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.as_array().serialize(s)
    }
}

/// Output order: partitions reverse lexicographically, weights by
/// decreasing coordinates.
fn label_order(a: &Label, b: &Label) -> std::cmp::Ordering {
    match (a, b) {
        (Label::Partition(x), Label::Partition(y)) => y.cmp(x),
        (Label::Weight(x), Label::Weight(y)) => y.cmp(x),
        (Label::Partition(_), Label::Weight(_)) => std::cmp::Ordering::Less,
        (Label::Weight(_), Label::Partition(_)) => std::cmp::Ordering::Greater,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TableFlags {
    pub outside_proven_range: bool,
    pub assumes_james: bool,
    pub assumes_bipartite: bool,
    pub q_convention: QConvention,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TableKind {
    /// Descending filtration of the q-Weyl module; layer 0 is the head.
    Weyl,
    /// Ascending filtration of the q-Specht module.
    Specht,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerEntry {
    pub label: Label,
    /// The weight `nu` behind the label (before any Specht relabelling).
    pub weight: Weight,
    /// `l(w_nu)` for the walls of `C^-`.
    pub length: usize,
    pub mult: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerTable {
    pub family: Family,
    pub rank: usize,
    pub e: i64,
    pub kind: TableKind,
    pub highest: Label,
    pub highest_weight: Weight,
    /// `l(w_lambda)`.
    pub highest_length: usize,
    pub layers: Vec<Vec<LayerEntry>>,
    pub flags: TableFlags,
    /// The orbit of the highest weight meets the interior of an alcove.
    pub regular_orbit: bool,
}

impl LayerTable {
    /// Name of the filtration the layers describe.
    pub fn filtration(&self) -> &'static str {
        if self.regular_orbit && self.kind == TableKind::Weyl {
            "semisimple series; radical filtration"
        } else {
            "semisimple series"
        }
    }

    /// `sum_i entry(label, i)`.
    pub fn column_sum(&self, label: &Label) -> u64 {
        self.layers
            .iter()
            .flatten()
            .filter(|x| &x.label == label)
            .map(|x| x.mult)
            .sum()
    }

    /// Entry at (`label`, layer `i`), zero if absent.
    pub fn entry(&self, label: &Label, i: usize) -> u64 {
        self.layers
            .get(i)
            .and_then(|l| l.iter().find(|x| &x.label == label))
            .map_or(0, |x| x.mult)
    }

    /// The table invariants. The head is checked only for Weyl tables;
    /// parity purity and ordering for both kinds.
    pub fn validate(&self) -> Result<()> {
        let m = self.layers.len();
        if self.kind == TableKind::Weyl {
            let top = self.layers.first().map(|l| l.as_slice()).unwrap_or(&[]);
            if top.len() != 1 || top[0].label != self.highest || top[0].mult != 1 {
                return Err(Error::Validation(format!("layer 0 of {} is not [({}, 1)]", self.highest, self.highest)));
            }
            if self.layers[1..].iter().flatten().any(|x| x.label == self.highest) {
                return Err(Error::Validation(format!("{} appears below layer 0", self.highest)));
            }
            if self.layers.last().is_some_and(|l| l.is_empty()) {
                return Err(Error::Validation("trailing empty layer".into()));
            }
        }
        for (i, layer) in self.layers.iter().enumerate() {
            let depth = match self.kind {
                TableKind::Weyl => i,
                TableKind::Specht => m - 1 - i,
            };
            let mut seen = BTreeSet::new();
            for x in layer {
                if x.mult == 0 {
                    return Err(Error::Validation(format!("zero entry for {} at layer {i}", x.label)));
                }
                if !seen.insert(x.label.as_array()) {
                    return Err(Error::Validation(format!("{} repeated in layer {i}", x.label)));
                }
                let gap = self.highest_length as i64 - x.length as i64;
                if gap < depth as i64 || (gap - depth as i64) % 2 != 0 {
                    return Err(Error::Validation(format!(
                        "parity defect: {} at layer {i} with length gap {gap}",
                        x.label
                    )));
                }
            }
            if layer.windows(2).any(|w| label_order(&w[0].label, &w[1].label) != std::cmp::Ordering::Less) {
                return Err(Error::Validation(format!("layer {i} is not sorted")));
            }
        }
        Ok(())
    }
}

/// Parity of `l(w_lambda)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ParityClass {
    E,
    O,
}

impl fmt::Display for ParityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParityClass::E => "E",
            ParityClass::O => "O",
        })
    }
}

/// `l(w_mu) = |Phi+| + l(f(mu))` for dominant `mu`.
pub fn w_length(ctx: &GroupContext, mu: &Weight) -> usize {
    ctx.datum().num_positive_roots() + upper_closure_indices(ctx, mu).d_value() as usize
}

pub fn parity_class(ctx: &GroupContext, mu: &Weight) -> Result<ParityClass> {
    check_weight(ctx, mu)?;
    Ok(if w_length(ctx, mu) % 2 == 0 { ParityClass::E } else { ParityClass::O })
}

fn check_weight(ctx: &GroupContext, mu: &Weight) -> Result<()> {
    if mu.rank() != ctx.rank() {
        return Err(Error::WrongRank {
            expected: ctx.rank(),
            got: mu.rank(),
        });
    }
    if !mu.is_dominant() {
        return Err(Error::NotDominant(mu.0.clone()));
    }
    Ok(())
}

fn check_type_a(ctx: &GroupContext, n: usize) -> Result<()> {
    if ctx.family() != Family::A || ctx.rank() + 1 != n {
        return Err(Error::InvalidInput(format!(
            "partition tables with n = {n} need the context A{}, got {}{}",
            n.saturating_sub(1),
            ctx.family(),
            ctx.rank()
        )));
    }
    Ok(())
}

/// All `mu` with at most `n` parts whose weight is in the dot orbit of
/// that of `lambda`, in reverse lexicographic order.
pub fn linkage_class(ctx: &GroupContext, lambda: &Partition, n: usize) -> Result<Vec<Partition>> {
    check_type_a(ctx, n)?;
    let lw = to_weight(lambda, n)?;
    Ok(list_partitions(n, lambda.size())
        .into_iter()
        .filter(|mu| same_orbit(ctx, &lw, &to_weight(mu, n).expect("at most n parts")))
        .collect())
}

/// The inverse polynomial for one linked weight.
#[derive(Debug, Clone)]
struct WeightColumn {
    weight: Weight,
    length: usize,
    q: QPoly,
}

/// Shared state for table construction in one context: the KL memos.
#[derive(Debug)]
pub struct MultEngine {
    ctx: GroupContext,
    q_convention: QConvention,
    orbit: OrbitKlTable,
    kl_p: KlTable,
    kl_q: KlTable,
}

impl MultEngine {
    pub fn new(ctx: GroupContext) -> Self {
        MultEngine {
            orbit: OrbitKlTable::new(&ctx),
            kl_p: KlTable::new(&ctx, KlKind::P),
            kl_q: KlTable::new(&ctx, KlKind::Q),
            ctx,
            q_convention: QConvention::default(),
        }
    }

    pub fn with_q_convention(mut self, q: QConvention) -> Self {
        self.q_convention = q;
        self
    }

    /// Use preloaded full-interval tables (e.g. from a cache file).
    pub fn with_kl_tables(mut self, p: KlTable, q: KlTable) -> Result<Self> {
        for t in [&p, &q] {
            if t.fingerprint() != self.ctx.fingerprint() {
                return Err(Error::FingerprintMismatch {
                    expected: self.ctx.fingerprint(),
                    found: t.fingerprint().to_string(),
                });
            }
        }
        if p.kind() != KlKind::P || q.kind() != KlKind::Q {
            return Err(Error::InvalidInput("expected a P table and a Q table".into()));
        }
        self.kl_p = p;
        self.kl_q = q;
        Ok(self)
    }

    pub fn ctx(&self) -> &GroupContext {
        &self.ctx
    }

    pub fn q_convention(&self) -> QConvention {
        self.q_convention
    }

    pub fn kl_tables(&self) -> (&KlTable, &KlTable) {
        (&self.kl_p, &self.kl_q)
    }

    fn flags(&self) -> TableFlags {
        TableFlags {
            outside_proven_range: self.ctx.outside_proven_range(),
            assumes_james: false,
            assumes_bipartite: false,
            q_convention: self.q_convention,
        }
    }

    /// `Q_{w_nu, w_lambda}` in the configured convention.
    pub fn q_poly(&self, nu: &Weight, lambda: &Weight) -> Result<QPoly> {
        check_weight(&self.ctx, nu)?;
        check_weight(&self.ctx, lambda)?;
        if !same_orbit(&self.ctx, nu, lambda) {
            return Ok(QPoly::zero());
        }
        match self.q_convention {
            QConvention::DominantPoset => Ok(orbit_column(&self.ctx, &self.orbit, lambda)?.q_of(nu)),
            QConvention::FullInterval => self.full_interval_q(nu, lambda),
        }
    }

    fn full_interval_q(&self, nu: &Weight, lambda: &Weight) -> Result<QPoly> {
        let ctx = &self.ctx;
        let y = ctx.multiply(ctx.w0(), &upper_closure_element(ctx, nu)?);
        let w = ctx.multiply(ctx.w0(), &upper_closure_element(ctx, lambda)?);
        inverse_kl_q(ctx, &self.kl_p, &self.kl_q, &y, &w)
    }

    /// Linked weights `nu` with their inverse polynomials in the column of
    /// `lambda`; zero columns are dropped.
    fn columns(&self, lambda: &Weight) -> Result<Vec<WeightColumn>> {
        check_weight(&self.ctx, lambda)?;
        let ctx = &self.ctx;
        let cols: Vec<WeightColumn> = match self.q_convention {
            QConvention::DominantPoset => {
                let col = orbit_column(ctx, &self.orbit, lambda)?;
                let base = ctx.datum().num_positive_roots();
                col.weights
                    .iter()
                    .zip(&col.lengths)
                    .zip(&col.q)
                    .map(|((w, &l), q)| WeightColumn {
                        weight: w.clone(),
                        length: base + l,
                        q: q.clone(),
                    })
                    .collect()
            }
            QConvention::FullInterval => {
                let nus = dominant_weights_below(ctx, lambda);
                nus.par_iter()
                    .filter(|nu| same_orbit(ctx, nu, lambda))
                    .map(|nu| {
                        Ok(WeightColumn {
                            weight: nu.clone(),
                            length: w_length(ctx, nu),
                            q: self.full_interval_q(nu, lambda)?,
                        })
                    })
                    .collect::<Result<_>>()?
            }
        };
        Ok(cols.into_iter().filter(|c| !c.q.is_zero()).collect())
    }

    /// `[Delta(lambda) : L(nu)] = Q_{w_nu, w_lambda}(1)`, zero when unlinked.
    pub fn decomposition_number(&self, lambda: &Weight, nu: &Weight) -> Result<u64> {
        let v = self.q_poly(nu, lambda)?.eval_at_one();
        u64::try_from(v).map_err(|_| Error::Validation(format!("negative multiplicity {v} for {nu} in {lambda}")))
    }

    /// Weyl table for a weight; rows are labelled by `label_of`.
    fn weyl_table_with(&self, lambda: &Weight, highest: Label, label_of: &dyn Fn(&Weight) -> Result<Label>) -> Result<LayerTable> {
        let ctx = &self.ctx;
        let top_len = w_length(ctx, lambda);
        let mut layers: Vec<Vec<LayerEntry>> = Vec::new();
        for col in self.columns(lambda)? {
            let gap = top_len as i64 - col.length as i64;
            for (k, &c) in col.q.coeffs().iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let i = gap - 2 * k as i64;
                if i < 0 || c < 0 {
                    return Err(Error::Validation(format!(
                        "coefficient {c} of q^{k} in Q for {} in {lambda} has no layer",
                        col.weight
                    )));
                }
                let i = i as usize;
                if layers.len() <= i {
                    layers.resize(i + 1, Vec::new());
                }
                layers[i].push(LayerEntry {
                    label: label_of(&col.weight)?,
                    weight: col.weight.clone(),
                    length: col.length,
                    mult: c as u64,
                });
            }
        }
        for layer in &mut layers {
            layer.sort_by(|a, b| label_order(&a.label, &b.label).then(a.length.cmp(&b.length)));
        }
        let (x, _) = fundamental_point(ctx, lambda);
        let table = LayerTable {
            family: ctx.family(),
            rank: ctx.rank(),
            e: ctx.e(),
            kind: TableKind::Weyl,
            highest,
            highest_weight: lambda.clone(),
            highest_length: top_len,
            layers,
            flags: self.flags(),
            regular_orbit: stabilizer_generators(ctx, &x).is_empty(),
        };
        table.validate()?;
        Ok(table)
    }

    /// Weight-indexed Weyl table (any family).
    pub fn weyl_layer_table_weight(&self, lambda: &Weight) -> Result<LayerTable> {
        check_weight(&self.ctx, lambda)?;
        self.weyl_table_with(lambda, Label::Weight(lambda.clone()), &|w| Ok(Label::Weight(w.clone())))
    }

    /// Partition-indexed Weyl table in type `A_{n-1}`.
    pub fn weyl_layer_table(&self, lambda: &Partition, n: usize) -> Result<LayerTable> {
        check_type_a(&self.ctx, n)?;
        let lw = to_weight(lambda, n)?;
        let by_weight: HashMap<Weight, Partition> = linkage_class(&self.ctx, lambda, n)?
            .into_iter()
            .map(|mu| (to_weight(&mu, n).expect("at most n parts"), mu))
            .collect();
        self.weyl_table_with(&lw, Label::Partition(lambda.clone()), &|w| {
            by_weight
                .get(w)
                .map(|p| Label::Partition(p.clone()))
                .ok_or_else(|| Error::Validation(format!("{w} is not the weight of a linked partition of {}", lambda.size())))
        })
    }

    /// q-Specht table: the Weyl table with `n = r` read bottom-up, keeping
    /// e-restricted `nu` relabelled by `nu'`. The layer count is that of the
    /// Weyl table, so section `j` is Weyl layer `m - 1 - j`.
    pub fn specht_layer_table(&self, lambda: &Partition) -> Result<LayerTable> {
        let n = specht_n(lambda);
        let weyl = self.weyl_layer_table(lambda, n)?;
        let e = u32::try_from(self.ctx.e()).map_err(|_| Error::InvalidLevel(self.ctx.e()))?;
        let layers: Vec<Vec<LayerEntry>> = weyl
            .layers
            .iter()
            .rev()
            .map(|layer| {
                let mut out: Vec<LayerEntry> = layer
                    .iter()
                    .filter_map(|x| match &x.label {
                        Label::Partition(p) if is_e_restricted(p, e) => Some(LayerEntry {
                            label: Label::Partition(conjugate(p)),
                            ..x.clone()
                        }),
                        _ => None,
                    })
                    .collect();
                out.sort_by(|a, b| label_order(&a.label, &b.label).then(a.length.cmp(&b.length)));
                out
            })
            .collect();
        if layers.iter().flatten().any(|x| match &x.label {
            Label::Partition(p) => !is_e_regular(p, e),
            Label::Weight(_) => true,
        }) {
            return Err(Error::Validation("Specht label is not e-regular".into()));
        }
        let table = LayerTable {
            kind: TableKind::Specht,
            layers,
            ..weyl
        };
        table.validate()?;
        Ok(table)
    }

    /// The quantum table at `e = p` reinterpreted in characteristic `p`;
    /// valid under the James and bipartite-quiver hypotheses.
    pub fn modular_table(&self, lambda: &Partition, n: usize, p: u32) -> Result<LayerTable> {
        check_modular(lambda.size(), p)?;
        if self.ctx.e() != i64::from(p) {
            return Err(Error::InvalidInput(format!("modular table for p = {p} needs e = p, context has e = {}", self.ctx.e())));
        }
        let mut table = self.weyl_layer_table(lambda, n)?;
        table.flags.assumes_james = true;
        table.flags.assumes_bipartite = true;
        Ok(table)
    }
}

/// `n` used for Specht tables: `r`, but at least 2.
pub fn specht_n(lambda: &Partition) -> usize {
    (lambda.size() as usize).max(2)
}

pub fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// `p` prime with `p^2 > r`.
pub fn check_modular(r: u32, p: u32) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::InvalidInput(format!("p = {p} is not prime")));
    }
    if u64::from(p) * u64::from(p) <= u64::from(r) {
        return Err(Error::InvalidInput(format!(
            "p = {p} with r = {r} is outside the conjecture's stated range (p^2 > r)"
        )));
    }
    Ok(())
}

/// Dominant weights `nu <= lambda` in the dominance order: walk down from
/// `lambda` by positive roots, staying dominant.
pub fn dominant_weights_below(ctx: &GroupContext, lambda: &Weight) -> Vec<Weight> {
    let roots = ctx.datum().positive_roots();
    let mut seen: BTreeSet<Weight> = BTreeSet::new();
    let mut stack = vec![lambda.clone()];
    seen.insert(lambda.clone());
    while let Some(mu) = stack.pop() {
        for a in roots {
            let nu = Weight(mu.0.iter().zip(&a.weight).map(|(x, y)| x - y).collect());
            if nu.is_dominant() && seen.insert(nu.clone()) {
                stack.push(nu);
            }
        }
    }
    seen.into_iter().rev().collect()
}
