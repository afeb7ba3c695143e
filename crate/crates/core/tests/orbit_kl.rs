//! The orbit computation of dominant-poset polynomials against a brute-force
//! oracle: ordinary KL polynomials over full Bruhat intervals between
//! maximal-type elements, restricted to dominant alcoves and inverted there.

use std::collections::HashMap;

use wsk_core::alcove::{dominant_weights_in_box, fundamental_point, upper_closure_element};
use wsk_core::kl::{kl_p, KlKind, KlTable};
use wsk_core::parabolic::{orbit_column, OrbitKlTable};
use wsk_core::{AffineElement, Family, GroupContext, QPoly};

fn sign(k: usize) -> i64 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `Q` of the dominant poset for the whole (regular) set of dominant
/// alcoves below `top`, by inverting `P_{w0 x, w0 y}`.
fn brute_dominant_q(ctx: &GroupContext, tp: &KlTable, top: &AffineElement) -> HashMap<AffineElement, QPoly> {
    let lt = ctx.length(top);
    let mut xs: Vec<AffineElement> = ctx
        .enumerate_up_to_length(lt)
        .unwrap()
        .into_iter()
        .filter(|x| ctx.is_dominant_alcove(x) && ctx.bruhat_leq(x, top))
        .collect();
    xs.sort_by_key(|x| std::cmp::Reverse(ctx.length(x)));
    let w0 = ctx.w0();
    let mut q: HashMap<AffineElement, QPoly> = HashMap::new();
    for (i, y) in xs.iter().enumerate() {
        if y == top {
            q.insert(y.clone(), QPoly::one());
            continue;
        }
        let ly = ctx.length(y);
        let mut acc = QPoly::zero();
        for z in &xs[..i] {
            let lz = ctx.length(z);
            if lz <= ly {
                continue;
            }
            let p = kl_p(ctx, tp, &ctx.multiply(w0, y), &ctx.multiply(w0, z)).unwrap();
            acc.add_assign_scaled(&(&p * &q[z]), -sign(lz - ly));
        }
        q.insert(y.clone(), acc);
    }
    q
}

fn check_context(rank: usize, e: i64, max_pairing: i64) -> usize {
    let ctx = GroupContext::new(Family::A, rank, e).unwrap();
    let tp = KlTable::new(&ctx, KlKind::P);
    let table = OrbitKlTable::new(&ctx);
    let mut checked = 0;
    for lambda in dominant_weights_in_box(&ctx, max_pairing) {
        let f = upper_closure_element(&ctx, &lambda).unwrap();
        let brute = brute_dominant_q(&ctx, &tp, &f);
        let col = orbit_column(&ctx, &table, &lambda).unwrap();
        let base = fundamental_point(&ctx, &lambda).0;
        // The ideal of lambda in its orbit.
        let mut expected: Vec<_> = brute
            .keys()
            .map(|x| ctx.dot_act(x, &base))
            .filter(|nu| nu.is_dominant())
            .collect();
        expected.sort();
        expected.dedup();
        let mut got = col.weights.clone();
        got.sort();
        assert_eq!(got, expected, "ideal of {lambda}");
        for nu in &col.weights {
            let fnu = upper_closure_element(&ctx, nu).unwrap();
            assert_eq!(col.q_of(nu), brute[&fnu], "Q at nu = {nu}, lambda = {lambda}, e = {e}");
            assert!(col.p_of(nu).has_nonnegative_coeffs());
            checked += 1;
        }
    }
    checked
}

#[test]
fn affine_a1_matches_brute_force() {
    for e in [2, 3] {
        assert!(check_context(1, e, 5 * e) > 0);
    }
}

#[test]
fn affine_a2_matches_brute_force() {
    for e in [2, 3] {
        assert!(check_context(2, e, 4 * e + 1) > 0);
    }
}

#[test]
fn affine_a3_matches_brute_force() {
    assert!(check_context(3, 2, 8) > 0);
    assert!(check_context(3, 3, 9) > 0);
}

#[test]
fn quantum_sl2_has_two_factors() {
    // Regular orbit of 0 for e = 3: each Weyl module has exactly the
    // adjacent lower linked weight as a second factor.
    let ctx = GroupContext::new(Family::A, 1, 3).unwrap();
    let table = OrbitKlTable::new(&ctx);
    for top in [4i64, 6, 10, 12] {
        let col = orbit_column(&ctx, &table, &wsk_core::Weight(vec![top])).unwrap();
        let nonzero: Vec<_> = col.weights.iter().zip(&col.q).filter(|(_, q)| !q.is_zero()).collect();
        assert_eq!(nonzero.len(), 2, "lambda = {top}");
    }
}
