//! Graded decomposition numbers of Hecke algebras of symmetric groups in
//! characteristic zero, via the Fock space canonical basis.

use std::collections::BTreeMap;

use wsk_core::partition::{is_e_regular, list_partitions};
use wsk_core::Partition;

/// Laurent polynomial in `v`: exponent -> coefficient.
pub type Lp = BTreeMap<i64, i64>;

fn add_into(a: &mut Lp, b: &Lp, c: i64, shift: i64) {
    for (&k, &x) in b {
        let e = a.entry(k + shift).or_insert(0);
        *e += c * x;
        if *e == 0 {
            a.remove(&(k + shift));
        }
    }
}

fn mul(a: &Lp, b: &Lp) -> Lp {
    let mut out = Lp::new();
    for (&k, &x) in a {
        add_into(&mut out, b, x, k);
    }
    out
}

/// Exact division by a polynomial with leading coefficient 1 at the top.
fn div_exact(a: &Lp, b: &Lp) -> Lp {
    let mut rem = a.clone();
    let (&bt, &bc) = b.iter().next_back().unwrap();
    assert_eq!(bc, 1);
    let mut q = Lp::new();
    while let Some((&rt, &rc)) = rem.iter().next_back() {
        let mut m = Lp::new();
        m.insert(rt - bt, rc);
        q.insert(rt - bt, rc);
        let prod = mul(&m, b);
        add_into(&mut rem, &prod, -1, 0);
        assert!(q.len() < 1000, "division does not terminate");
    }
    q
}

/// `[k]! ` with `[k] = v^{k-1} + v^{k-3} + ... + v^{1-k}`.
fn qfact(k: usize) -> Lp {
    let mut out: Lp = [(0, 1)].into_iter().collect();
    for j in 1..=k as i64 {
        let qint: Lp = (0..j).map(|t| (j - 1 - 2 * t, 1)).collect();
        out = mul(&out, &qint);
    }
    out
}

type Vector = BTreeMap<Vec<u32>, Lp>;

fn residue(row: usize, col: usize, e: u32) -> u32 {
    ((col as i64 - row as i64).rem_euclid(e as i64)) as u32
}

fn addable(parts: &[u32]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for r in 0..=parts.len() {
        let c = parts.get(r).copied().unwrap_or(0) as usize;
        if r == 0 || (parts[r - 1] as usize) > c {
            out.push((r, c));
        }
    }
    out
}

fn removable(parts: &[u32]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for r in 0..parts.len() {
        let next = parts.get(r + 1).copied().unwrap_or(0);
        if parts[r] > next {
            out.push((r, parts[r] as usize - 1));
        }
    }
    out
}

/// `f_i` on a basis vector: add an i-node `b`, weighted by
/// `v^{#addable i-nodes above b - #removable i-nodes above b}`.
fn f_i(vec: &Vector, i: u32, e: u32) -> Vector {
    let mut out = Vector::new();
    for (parts, c) in vec {
        let add: Vec<(usize, usize)> = addable(parts).into_iter().filter(|&(r, c)| residue(r, c, e) == i).collect();
        let rem: Vec<(usize, usize)> = removable(parts).into_iter().filter(|&(r, c)| residue(r, c, e) == i).collect();
        for &(r, col) in &add {
            let n = add.iter().filter(|&&(r2, _)| r2 < r).count() as i64
                - rem.iter().filter(|&&(r2, _)| r2 < r).count() as i64;
            let mut p = parts.clone();
            if r == p.len() {
                p.push(1);
            } else {
                p[r] += 1;
            }
            debug_assert_eq!(p[r] as usize, col + 1);
            add_into(out.entry(p).or_default(), c, 1, n);
        }
    }
    out.retain(|_, c| !c.is_empty());
    out
}

fn f_divided(vec: &Vector, i: u32, k: usize, e: u32) -> Vector {
    let mut cur = vec.clone();
    for _ in 0..k {
        cur = f_i(&cur, i, e);
    }
    let fact = qfact(k);
    cur.into_iter().map(|(p, c)| (p, div_exact(&c, &fact))).collect()
}

/// Ladder vector `A(mu)` of an e-regular partition.
fn ladder_vector(mu: &Partition, e: u32) -> Vector {
    let mut ladders: BTreeMap<usize, usize> = BTreeMap::new();
    for (r, &len) in mu.parts().iter().enumerate() {
        for c in 0..len as usize {
            *ladders.entry(r + (e as usize - 1) * c).or_insert(0) += 1;
        }
    }
    let mut vec: Vector = [(Vec::new(), [(0, 1)].into_iter().collect())].into_iter().collect();
    for (l, k) in ladders {
        let i = (-(l as i64)).rem_euclid(e as i64) as u32;
        vec = f_divided(&vec, i, k, e);
    }
    vec
}

fn bar(a: &Lp) -> Lp {
    a.iter().map(|(&k, &c)| (-k, c)).collect()
}

/// `d_{lambda,mu}(v)` for all partitions `lambda` and e-regular `mu` of `r`.
pub fn decomposition_matrix(r: u32, e: u32) -> BTreeMap<(Vec<u32>, Vec<u32>), Lp> {
    let regs: Vec<Partition> = list_partitions(r as usize, r).into_iter().filter(|p| is_e_regular(p, e)).collect();
    let mut g: BTreeMap<Vec<u32>, Vector> = BTreeMap::new();
    // Smallest first, so that corrections are already known.
    for mu in regs.iter().rev() {
        let mut vec = ladder_vector(mu, e);
        assert!(vec.get(mu.parts()).is_some_and(|c| c.len() == 1 && c.get(&0) == Some(&1)), "{mu}");
        loop {
            let bad = vec
                .iter()
                .rev()
                .find(|(p, c)| p.as_slice() != mu.parts() && c.keys().any(|&k| k <= 0))
                .map(|(p, c)| (p.clone(), c.clone()));
            let Some((lam, c)) = bad else { break };
            let gl = g.get(&lam).unwrap_or_else(|| panic!("{lam:?} is not e-regular"));
            let mut alpha = Lp::new();
            for (&k, &x) in &c {
                if k <= 0 {
                    alpha.insert(k, x);
                    if k < 0 {
                        alpha.insert(-k, x);
                    }
                }
            }
            assert_eq!(alpha, bar(&alpha));
            for (p, d) in gl {
                add_into(vec.entry(p.clone()).or_default(), &mul(&alpha, d), -1, 0);
            }
            vec.retain(|_, c| !c.is_empty());
        }
        g.insert(mu.parts().to_vec(), vec);
    }
    let mut out = BTreeMap::new();
    for (mu, vec) in g {
        for (lam, c) in vec {
            out.insert((lam, mu.clone()), c);
        }
    }
    out
}
