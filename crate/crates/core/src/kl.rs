//! Kazhdan-Lusztig polynomials `P_{y,w}` and inverse polynomials `Q_{y,w}`
//! over `W_e`, memoised per column and persisted in a line-oriented cache.
//!
//! `Q` is fixed by the signed inversion identity
//! `sum_{y <= z <= w} (-1)^{l(z)-l(y)} P_{y,z} Q_{z,w} = delta_{y,w}`.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use parking_lot::RwLock;

use crate::error::{Error, Result};
use crate::poly::QPoly;
use crate::weyl::{AffineElement, GroupContext};

pub const DEFAULT_INTERVAL_CAP: usize = 200_000;
pub const CACHE_MAGIC: &str = "KLCACHE";
pub const CACHE_VERSION: &str = "v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KlKind {
    P,
    Q,
}

impl fmt::Display for KlKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KlKind::P => "P",
            KlKind::Q => "Q",
        })
    }
}

impl FromStr for KlKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "P" => Ok(KlKind::P),
            "Q" => Ok(KlKind::Q),
            _ => Err(Error::InvalidInput(format!("unknown table kind {s:?}"))),
        }
    }
}

type Column = Arc<HashMap<AffineElement, QPoly>>;

/// Memo table for one polynomial family in one context. Columns are
/// computed whole and inserted at once; a stored column is never changed,
/// so readers holding an `Arc` to it stay valid.
#[derive(Debug)]
pub struct KlTable {
    kind: KlKind,
    fingerprint: String,
    interval_cap: usize,
    /// `w -> { y -> poly }`; a column lists every `y <= w`.
    columns: RwLock<HashMap<AffineElement, Column>>,
    /// Loose entries read from a cache file whose column is not known to be
    /// complete.
    loose: RwLock<HashMap<(AffineElement, AffineElement), QPoly>>,
}

impl KlTable {
    pub fn new(ctx: &GroupContext, kind: KlKind) -> Self {
        KlTable {
            kind,
            fingerprint: ctx.fingerprint(),
            interval_cap: DEFAULT_INTERVAL_CAP,
            columns: RwLock::new(HashMap::new()),
            loose: RwLock::new(HashMap::new()),
        }
    }

    pub fn with_interval_cap(mut self, cap: usize) -> Self {
        self.interval_cap = cap;
        self
    }

    pub fn kind(&self) -> KlKind {
        self.kind
    }

    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    pub fn interval_cap(&self) -> usize {
        self.interval_cap
    }

    /// Number of stored `(y, w)` entries.
    pub fn len(&self) -> usize {
        let loose = self.loose.read();
        let cols = self.columns.read();
        let in_cols: usize = cols.values().map(|c| c.len()).sum();
        in_cols
            + loose
                .keys()
                .filter(|(y, w)| cols.get(w).is_none_or(|c| !c.contains_key(y)))
                .count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All stored entries.
    pub fn entries(&self) -> Vec<(AffineElement, AffineElement, QPoly)> {
        let mut out: HashMap<(AffineElement, AffineElement), QPoly> = self.loose.read().clone();
        for (w, col) in self.columns.read().iter() {
            for (y, p) in col.iter() {
                out.insert((y.clone(), w.clone()), p.clone());
            }
        }
        out.into_iter().map(|((y, w), p)| (y, w, p)).collect()
    }

    pub fn get(&self, y: &AffineElement, w: &AffineElement) -> Option<QPoly> {
        if let Some(col) = self.columns.read().get(w) {
            return Some(col.get(y).cloned().unwrap_or_default());
        }
        self.loose.read().get(&(y.clone(), w.clone())).cloned()
    }

    fn column(&self, w: &AffineElement) -> Option<Column> {
        self.columns.read().get(w).cloned()
    }

    fn insert_column(&self, w: AffineElement, col: HashMap<AffineElement, QPoly>) -> Column {
        let mut cols = self.columns.write();
        // A concurrent computation may have inserted the same column; both
        // are deterministic functions of w, so keep the first.
        cols.entry(w).or_insert_with(|| Arc::new(col)).clone()
    }

    pub fn insert(&self, y: AffineElement, w: AffineElement, p: QPoly) {
        self.loose.write().insert((y, w), p);
    }

    pub fn clear(&self) {
        self.columns.write().clear();
        self.loose.write().clear();
    }
}

fn check_table(ctx: &GroupContext, table: &KlTable, kind: KlKind) -> Result<()> {
    if table.fingerprint != ctx.fingerprint() {
        return Err(Error::FingerprintMismatch {
            expected: ctx.fingerprint(),
            found: table.fingerprint.clone(),
        });
    }
    if table.kind != kind {
        return Err(Error::InvalidInput(format!(
            "expected a {kind} table, got a {} table",
            table.kind
        )));
    }
    Ok(())
}

/// The lower Bruhat ideal `{ z : z <= w }`, using
/// `z <= w  iff  min(z, sz) <= sw` for a left descent `s` of `w`.
pub fn lower_ideal(ctx: &GroupContext, w: &AffineElement, cap: usize) -> Result<Vec<AffineElement>> {
    let word = ctx.reduced_word(w);
    let mut ideal: HashSet<AffineElement> = HashSet::new();
    ideal.insert(ctx.identity());
    for &s in word.iter().rev() {
        let g = ctx.generator(s);
        let moved: Vec<AffineElement> = ideal.iter().map(|z| ctx.multiply(g, z)).collect();
        ideal.extend(moved);
        if ideal.len() > cap {
            return Err(Error::ResourceCap {
                what: "Bruhat interval size",
                cap,
            });
        }
    }
    let mut out: Vec<AffineElement> = ideal.into_iter().collect();
    sort_by_length(ctx, &mut out);
    Ok(out)
}

fn sort_by_length(ctx: &GroupContext, v: &mut [AffineElement]) {
    v.sort_by_cached_key(|z| (ctx.length(z), z.clone()));
}

/// `{ z : y <= z <= w }`, sorted by length.
pub fn bruhat_interval(ctx: &GroupContext, y: &AffineElement, w: &AffineElement) -> Result<Vec<AffineElement>> {
    if !ctx.bruhat_leq(y, w) {
        return Ok(Vec::new());
    }
    let ly = ctx.length(y);
    Ok(lower_ideal(ctx, w, DEFAULT_INTERVAL_CAP)?
        .into_iter()
        .filter(|z| ctx.length(z) >= ly && ctx.bruhat_leq(y, z))
        .collect())
}

fn first_left_descent(ctx: &GroupContext, w: &AffineElement) -> Option<usize> {
    (0..ctx.num_generators()).find(|&i| ctx.is_left_descent(w, i))
}

/// Compute (or fetch) the full column `{ y -> P_{y,w} }`.
fn p_column(ctx: &GroupContext, table: &KlTable, w: &AffineElement) -> Result<Column> {
    if let Some(c) = table.column(w) {
        return Ok(c);
    }
    let Some(s) = first_left_descent(ctx, w) else {
        let mut col = HashMap::new();
        col.insert(ctx.identity(), QPoly::one());
        return Ok(table.insert_column(w.clone(), col));
    };
    let g = ctx.generator(s);
    let v = ctx.multiply(g, w);
    let lw = ctx.length(w);
    let vcol = p_column(ctx, table, &v)?;
    // z < v with sz < z and mu(z, v) != 0.
    let mut mus = Vec::new();
    for (z, p) in vcol.iter() {
        if z == &v || !ctx.is_left_descent(z, s) {
            continue;
        }
        let gap = ctx.length(&v) - ctx.length(z);
        if gap % 2 == 1 {
            let m = p.coeff((gap - 1) / 2);
            if m != 0 {
                mus.push((z.clone(), m, (lw - ctx.length(z)) / 2));
            }
        }
    }
    mus.sort();
    let mut zcols = Vec::with_capacity(mus.len());
    for (z, m, k) in &mus {
        zcols.push((p_column(ctx, table, z)?, *m, *k));
    }
    let ideal = lower_ideal(ctx, w, table.interval_cap)?;
    let zero = QPoly::zero();
    let mut col = HashMap::with_capacity(ideal.len());
    for y in ideal {
        let sy = ctx.multiply(g, &y);
        let pv_sy = vcol.get(&sy).unwrap_or(&zero);
        let pv_y = vcol.get(&y).unwrap_or(&zero);
        let mut p = if ctx.is_left_descent(&y, s) {
            pv_sy + &pv_y.shift(1)
        } else {
            &pv_sy.shift(1) + pv_y
        };
        for (zc, m, k) in &zcols {
            if let Some(pz) = zc.get(&y) {
                p.add_assign_scaled(&pz.shift(*k), -m);
            }
        }
        debug_assert!(p.has_nonnegative_coeffs(), "negative KL coefficient");
        col.insert(y, p);
    }
    Ok(table.insert_column(w.clone(), col))
}

/// `P_{y,w}`; zero unless `y <= w`.
pub fn kl_p(ctx: &GroupContext, table: &KlTable, y: &AffineElement, w: &AffineElement) -> Result<QPoly> {
    check_table(ctx, table, KlKind::P)?;
    if let Some(p) = table.get(y, w) {
        return Ok(p);
    }
    if ctx.length(y) > ctx.length(w) {
        return Ok(QPoly::zero());
    }
    Ok(p_column(ctx, table, w)?.get(y).cloned().unwrap_or_default())
}

/// Coefficient of `q^{(l(w)-l(y)-1)/2}` in `P_{y,w}`; zero for even gaps.
pub fn mu_coeff(ctx: &GroupContext, table: &KlTable, y: &AffineElement, w: &AffineElement) -> Result<i64> {
    let (ly, lw) = (ctx.length(y), ctx.length(w));
    if ly >= lw || (lw - ly) % 2 == 0 {
        return Ok(0);
    }
    Ok(kl_p(ctx, table, y, w)?.coeff((lw - ly - 1) / 2))
}

fn sign(k: usize) -> i64 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

fn q_column(ctx: &GroupContext, tp: &KlTable, tq: &KlTable, w: &AffineElement) -> Result<Column> {
    if let Some(c) = tq.column(w) {
        return Ok(c);
    }
    let ideal = lower_ideal(ctx, w, tp.interval_cap)?;
    let lens: HashMap<&AffineElement, usize> = ideal.iter().map(|z| (z, ctx.length(z))).collect();
    let mut col: HashMap<AffineElement, QPoly> = HashMap::with_capacity(ideal.len());
    for u in ideal.iter().rev() {
        if u == w {
            col.insert(u.clone(), QPoly::one());
            continue;
        }
        let lu = lens[u];
        let mut acc = QPoly::zero();
        // Q_{u,w} = - sum_{u < z <= w} (-1)^{l(z)-l(u)} P_{u,z} Q_{z,w}
        for z in ideal.iter().rev() {
            let lz = lens[z];
            if lz <= lu {
                break;
            }
            let qz = &col[z];
            if qz.is_zero() {
                continue;
            }
            let pz = p_column(ctx, tp, z)?;
            if let Some(p) = pz.get(u) {
                acc.add_assign_scaled(&(p * qz), -sign(lz - lu));
            }
        }
        col.insert(u.clone(), acc);
    }
    Ok(tq.insert_column(w.clone(), col))
}

/// `Q_{y,w}`; zero unless `y <= w`.
pub fn inverse_kl_q(
    ctx: &GroupContext,
    table_p: &KlTable,
    table_q: &KlTable,
    y: &AffineElement,
    w: &AffineElement,
) -> Result<QPoly> {
    check_table(ctx, table_p, KlKind::P)?;
    check_table(ctx, table_q, KlKind::Q)?;
    if let Some(q) = table_q.get(y, w) {
        return Ok(q);
    }
    if ctx.length(y) > ctx.length(w) {
        return Ok(QPoly::zero());
    }
    Ok(q_column(ctx, table_p, table_q, w)?.get(y).cloned().unwrap_or_default())
}

fn format_word(word: &[usize]) -> String {
    if word.is_empty() {
        "-".to_string()
    } else {
        word.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
    }
}

fn parse_word(s: &str, ngens: usize, line: usize) -> Result<Vec<usize>> {
    if s == "-" {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| match t.parse::<usize>() {
            Ok(i) if i < ngens => Ok(i),
            _ => Err(Error::CorruptCache {
                line,
                reason: format!("bad generator index {t:?}"),
            }),
        })
        .collect()
}

fn header(kind: KlKind, ctx_fingerprint: &str) -> String {
    format!("{CACHE_MAGIC} {CACHE_VERSION} {kind} {ctx_fingerprint}")
}

/// Write the table as `KLCACHE v1 <kind> <family> <rank> <e>` followed by
/// one `y_word;w_word;c0,c1,...` line per entry, sorted by the word pair.
pub fn cache_save(ctx: &GroupContext, table: &KlTable, path: &Path) -> Result<()> {
    check_table(ctx, table, table.kind)?;
    let mut lines: Vec<(Vec<usize>, Vec<usize>, String)> = table
        .entries()
        .into_iter()
        .map(|(y, w, p)| {
            let c = p.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
            let (wy, ww) = (ctx.reduced_word(&y), ctx.reduced_word(&w));
            (ww, wy, c)
        })
        .collect();
    lines.sort_by(|a, b| (a.0.len(), &a.0, a.1.len(), &a.1).cmp(&(b.0.len(), &b.0, b.1.len(), &b.1)));
    let mut out = String::new();
    out.push_str(&header(table.kind, &table.fingerprint));
    out.push('\n');
    for (ww, wy, c) in lines {
        out.push_str(&format!("{};{};{}\n", format_word(&wy), format_word(&ww), c));
    }
    let mut f = fs::File::create(path)?;
    f.write_all(out.as_bytes())?;
    Ok(())
}

/// Read a cache written by `cache_save`; the header must match `ctx`.
pub fn cache_load(ctx: &GroupContext, path: &Path) -> Result<KlTable> {
    let f = fs::File::open(path)?;
    let mut lines = BufReader::new(f).lines();
    let head = lines.next().transpose()?.ok_or(Error::CorruptCache {
        line: 1,
        reason: "empty file".into(),
    })?;
    let parts: Vec<&str> = head.split(' ').collect();
    if parts.len() != 6 || parts[0] != CACHE_MAGIC {
        return Err(Error::CorruptCache {
            line: 1,
            reason: format!("bad header {head:?}"),
        });
    }
    if parts[1] != CACHE_VERSION {
        return Err(Error::CacheVersion(parts[1].to_string()));
    }
    let kind: KlKind = parts[2].parse().map_err(|_| Error::CorruptCache {
        line: 1,
        reason: format!("bad kind {:?}", parts[2]),
    })?;
    let found = parts[3..].join(" ");
    if found != ctx.fingerprint() {
        return Err(Error::FingerprintMismatch {
            expected: ctx.fingerprint(),
            found,
        });
    }
    let table = KlTable::new(ctx, kind);
    let ngens = ctx.num_generators();
    {
        let mut loose = table.loose.write();
        for (i, line) in lines.enumerate() {
            let ln = i + 2;
            let line = line?;
            let fields: Vec<&str> = line.split(';').collect();
            if fields.len() != 3 {
                return Err(Error::CorruptCache {
                    line: ln,
                    reason: "expected three ';'-separated fields".into(),
                });
            }
            let wy = parse_word(fields[0], ngens, ln)?;
            let ww = parse_word(fields[1], ngens, ln)?;
            let coeffs = if fields[2].is_empty() {
                Vec::new()
            } else {
                fields[2]
                    .split(',')
                    .map(|t| {
                        t.parse::<i64>().map_err(|_| Error::CorruptCache {
                            line: ln,
                            reason: format!("bad coefficient {t:?}"),
                        })
                    })
                    .collect::<Result<Vec<_>>>()?
            };
            let (y, w) = (ctx.from_word(&wy), ctx.from_word(&ww));
            if ctx.reduced_word(&y) != wy || ctx.reduced_word(&w) != ww {
                return Err(Error::CorruptCache {
                    line: ln,
                    reason: "word is not in canonical reduced form".into(),
                });
            }
            let p = QPoly::from_coeffs(coeffs);
            if p.coeffs().len() != fields[2].split(',').filter(|t| !t.is_empty()).count() {
                return Err(Error::CorruptCache {
                    line: ln,
                    reason: "trailing zero coefficient".into(),
                });
            }
            loose.insert((y, w), p);
        }
    }
    Ok(table)
}
