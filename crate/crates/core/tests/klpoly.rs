use std::collections::HashMap;
use std::sync::Arc;

use wsk_core::kl::*;
use wsk_core::*;

fn ctx(rank: usize, e: i64) -> GroupContext {
    GroupContext::new(Family::A, rank, e).unwrap()
}

fn tables(c: &GroupContext) -> (KlTable, KlTable) {
    (KlTable::new(c, KlKind::P), KlTable::new(c, KlKind::Q))
}

/// R-polynomials from their own recursion, then P from
/// `q^{l(w)-l(y)} P_{y,w}(1/q) - P_{y,w}(q) = sum_{y<z<=w} R_{y,z} P_{z,w}`.
struct ROracle<'a> {
    ctx: &'a GroupContext,
    r: HashMap<(AffineElement, AffineElement), QPoly>,
}

impl<'a> ROracle<'a> {
    fn r(&mut self, y: &AffineElement, w: &AffineElement) -> QPoly {
        let c = self.ctx;
        if let Some(v) = self.r.get(&(y.clone(), w.clone())) {
            return v.clone();
        }
        let out = if w.is_identity() {
            if y.is_identity() { QPoly::one() } else { QPoly::zero() }
        } else {
            let s = (0..c.num_generators()).find(|&i| c.is_left_descent(w, i)).unwrap();
            let g = c.generator(s).clone();
            let sw = c.multiply(&g, w);
            let sy = c.multiply(&g, y);
            if c.is_left_descent(y, s) {
                self.r(&sy, &sw)
            } else {
                let a = &QPoly::from_coeffs(vec![-1, 1]) * &self.r(y, &sw);
                let b = self.r(&sy, &sw).shift(1);
                &a + &b
            }
        };
        self.r.insert((y.clone(), w.clone()), out.clone());
        out
    }
}

fn oracle_p(c: &GroupContext, els: &[AffineElement]) -> HashMap<(AffineElement, AffineElement), QPoly> {
    let mut o = ROracle { ctx: c, r: HashMap::new() };
    let mut p: HashMap<(AffineElement, AffineElement), QPoly> = HashMap::new();
    for w in els {
        let mut below: Vec<&AffineElement> = els.iter().filter(|z| c.bruhat_leq(z, w)).collect();
        below.sort_by_key(|z| std::cmp::Reverse(c.length(z)));
        for y in below {
            if y == w {
                p.insert((w.clone(), w.clone()), QPoly::one());
                continue;
            }
            let d = (c.length(w) - c.length(y)) as i64;
            let mut rhs = QPoly::zero();
            for z in els {
                if z != y && c.bruhat_leq(y, z) && c.bruhat_leq(z, w) {
                    rhs = &rhs + &(&o.r(y, z) * &p[&(z.clone(), w.clone())]);
                }
            }
            let low: Vec<i64> = rhs.coeffs().iter().enumerate().filter(|(k, _)| 2 * (*k as i64) < d).map(|(_, &x)| -x).collect();
            p.insert((y.clone(), w.clone()), QPoly::from_coeffs(low));
        }
    }
    p
}

#[test]
fn p_matches_r_polynomial_oracle() {
    for (rank, e, len) in [(1usize, 2i64, 6usize), (2, 2, 6), (2, 3, 5), (3, 2, 4)] {
        let c = ctx(rank, e);
        let (tp, _) = tables(&c);
        let els = c.enumerate_up_to_length(len).unwrap();
        let oracle = oracle_p(&c, &els);
        for ((y, w), p) in &oracle {
            assert_eq!(&kl_p(&c, &tp, y, w).unwrap(), p, "{:?} {:?}", c.reduced_word(y), c.reduced_word(w));
        }
    }
}

#[test]
fn affine_a1_polynomials_are_one() {
    let c = ctx(1, 2);
    let (tp, _) = tables(&c);
    let els = c.enumerate_up_to_length(8).unwrap();
    for w in &els {
        for y in &els {
            let p = kl_p(&c, &tp, y, w).unwrap();
            if c.bruhat_leq(y, w) {
                assert_eq!(p, QPoly::one());
            } else {
                assert!(p.is_zero());
            }
        }
    }
}

#[test]
fn degree_bounds_positivity_and_mu() {
    let c = ctx(2, 2);
    let (tp, tq) = tables(&c);
    let els = c.enumerate_up_to_length(7).unwrap();
    for w in &els {
        for y in &els {
            if !c.bruhat_leq(y, w) {
                continue;
            }
            let d = c.length(w) - c.length(y);
            let p = kl_p(&c, &tp, y, w).unwrap();
            let q = inverse_kl_q(&c, &tp, &tq, y, w).unwrap();
            assert_eq!(p.coeff(0), 1);
            assert!(p.has_nonnegative_coeffs() && q.has_nonnegative_coeffs());
            if d > 0 {
                assert!(2 * p.degree().unwrap() < d);
                assert!(2 * q.degree().unwrap() < d);
            }
            if d <= 2 {
                assert_eq!(p, QPoly::one());
            }
            if d == 1 {
                assert_eq!(q, QPoly::one());
            }
            let m = mu_coeff(&c, &tp, y, w).unwrap();
            if d % 2 == 1 {
                assert_eq!(m, p.coeff((d - 1) / 2));
            } else {
                assert_eq!(m, 0);
            }
        }
    }
}

#[test]
fn intervals() {
    let c = ctx(2, 3);
    let s0 = c.generator(0).clone();
    assert_eq!(bruhat_interval(&c, &c.identity(), &s0).unwrap(), vec![c.identity(), s0]);
    let w0 = c.w0().clone();
    let iv = bruhat_interval(&c, &c.identity(), &w0).unwrap();
    let mut ranks = vec![0usize; c.length(&w0) + 1];
    for z in &iv {
        ranks[c.length(z)] += 1;
    }
    assert_eq!(ranks, vec![1, 2, 2, 1]);
    let w = c.from_word(&[0, 1, 2, 0, 1]);
    for y in c.enumerate_up_to_length(5).unwrap() {
        let iv = bruhat_interval(&c, &y, &w).unwrap();
        let mut ranks = vec![0usize; c.length(&w) + 1];
        for z in &iv {
            assert!(c.bruhat_leq(&y, z) && c.bruhat_leq(z, &w));
            ranks[c.length(z)] += 1;
        }
        if c.bruhat_leq(&y, &w) {
            assert_eq!(ranks[c.length(&y)], 1);
        } else {
            assert!(iv.is_empty());
        }
    }
}

#[test]
fn memo_order_does_not_matter() {
    let c = ctx(2, 2);
    let els = c.enumerate_up_to_length(6).unwrap();
    let (a, aq) = tables(&c);
    let (b, bq) = tables(&c);
    for w in &els {
        kl_p(&c, &a, &c.identity(), w).unwrap();
        inverse_kl_q(&c, &a, &aq, &c.identity(), w).unwrap();
    }
    for w in els.iter().rev() {
        for y in els.iter().rev() {
            assert_eq!(kl_p(&c, &b, y, w).unwrap(), kl_p(&c, &a, y, w).unwrap());
            assert_eq!(inverse_kl_q(&c, &b, &bq, y, w).unwrap(), inverse_kl_q(&c, &a, &aq, y, w).unwrap());
        }
    }
}

#[test]
fn cache_round_trip_and_rejection() {
    let c = ctx(2, 2);
    let (tp, tq) = tables(&c);
    let els = c.enumerate_up_to_length(6).unwrap();
    for w in &els {
        inverse_kl_q(&c, &tp, &tq, &c.identity(), w).unwrap();
    }
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.klcache");
    let qpath = dir.path().join("q.klcache");
    cache_save(&c, &tp, &path).unwrap();
    cache_save(&c, &tq, &qpath).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("KLCACHE v1 P A 2 2\n"));
    let lp = cache_load(&c, &path).unwrap();
    let lq = cache_load(&c, &qpath).unwrap();
    assert_eq!(lp.kind(), KlKind::P);
    assert_eq!(lq.kind(), KlKind::Q);
    let mut a = tp.entries();
    let mut b = lp.entries();
    a.sort_by(|x, y| (&x.0, &x.1).cmp(&(&y.0, &y.1)));
    b.sort_by(|x, y| (&x.0, &x.1).cmp(&(&y.0, &y.1)));
    assert_eq!(a, b);
    // Saving the loaded table reproduces the file byte for byte.
    let again = dir.path().join("again.klcache");
    cache_save(&c, &lp, &again).unwrap();
    assert_eq!(std::fs::read(&path).unwrap(), std::fs::read(&again).unwrap());
    // Wrong context.
    let other = ctx(2, 3);
    assert!(matches!(cache_load(&other, &path), Err(Error::FingerprintMismatch { .. })));
    // Corruption and version.
    std::fs::write(&again, text.replacen("v1", "v2", 1)).unwrap();
    assert!(matches!(cache_load(&c, &again), Err(Error::CacheVersion(_))));
    std::fs::write(&again, format!("{text}0,0;1;1\n")).unwrap();
    assert!(cache_load(&c, &again).is_err());
    std::fs::write(&again, format!("{text}not a record\n")).unwrap();
    assert!(matches!(cache_load(&c, &again), Err(Error::CorruptCache { .. })));
}

#[test]
fn concurrent_readers_agree() {
    let c = ctx(2, 2);
    let (tp, tq) = tables(&c);
    let els = c.enumerate_up_to_length(5).unwrap();
    for w in &els {
        inverse_kl_q(&c, &tp, &tq, &c.identity(), w).unwrap();
    }
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.klcache");
    cache_save(&c, &tp, &path).unwrap();
    let loaded = Arc::new(cache_load(&c, &path).unwrap());
    let c = Arc::new(c);
    let els = Arc::new(els);
    let reference: Vec<QPoly> = els.iter().flat_map(|w| els.iter().map(|y| kl_p(&c, &tp, y, w).unwrap())).collect();
    let handles: Vec<_> = (0..8)
        .map(|t| {
            let (loaded, c, els) = (loaded.clone(), c.clone(), els.clone());
            std::thread::spawn(move || {
                let mut out = Vec::new();
                for w in els.iter() {
                    for y in els.iter() {
                        out.push(kl_p(&c, &loaded, y, w).unwrap());
                    }
                }
                (t, out)
            })
        })
        .collect();
    for h in handles {
        let (_, out) = h.join().unwrap();
        assert_eq!(out, reference);
    }
}
