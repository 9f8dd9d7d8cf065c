//! Quadric tables and dual bases against oracles that do not use the engine:
//! Bott's formulas on the ambient `P^{n+1}` with the restriction sequence,
//! the Hilbert polynomial of `Q_n` with the spinor sequence, and closed
//! forms of the right dual bases of every thread.

use helixlab_core::{bott, parse_sheaf_expr, thread, Engine, RankValue, SheafExpr, Variety};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

fn binom(a: i64, k: i64) -> BigInt {
    if k < 0 || a < k || a < 0 {
        return BigInt::zero();
    }
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(a - i) / BigInt::from(i + 1);
    }
    r
}

fn exact(ranks: &[RankValue]) -> Vec<BigInt> {
    ranks.iter().map(|r| BigInt::from(r.exact().unwrap_or_else(|| panic!("interval {}", r)).clone())).collect()
}

fn sheaf(v: Variety, text: &str) -> SheafExpr {
    parse_sheaf_expr(text, v).unwrap()
}

/// `h^*(P^N, Omega^p(s))` from the engine's closed-form Bott table.
fn ambient(big_n: u32, p: u32, s: i64) -> Vec<BigInt> {
    exact(&bott(big_n, p, s).unwrap().ranks)
}

/// `h^*(Q_n, Omega^p_{P^{n+1}}(t)|_Q)` from `0 -> E(-2) -> E -> E|_Q -> 0`,
/// where multiplication by the quadric is injective on `H^0`, surjective on
/// `H^{n+1}`, and the middle degrees never meet.
fn restricted(n: u32, p: u32, t: i64) -> Vec<BigInt> {
    let big = n + 1;
    let (lo, hi) = (ambient(big, p, t - 2), ambient(big, p, t));
    let top = big as usize;
    let rank_map = |i: usize| -> BigInt {
        if i == 0 {
            lo[0].clone()
        } else if i == top {
            hi[top].clone()
        } else {
            assert!(lo[i].is_zero() || hi[i].is_zero(), "middle degrees meet");
            BigInt::zero()
        }
    };
    (0..=n as usize).map(|i| (&hi[i] - rank_map(i)) + (&lo[i + 1] - rank_map(i + 1))).collect()
}

#[test]
fn restricted_cotangent_powers_match_the_ambient_sequence() {
    for n in [3u32, 5, 7] {
        let v = Variety::quadric(n).unwrap();
        let e = Engine::new(v);
        for p in 0..=n + 1 {
            for t in -3 * n as i64..=3 * n as i64 {
                let text = if p == 0 { format!("O({})", t) } else { format!("Omega^{}({})", p, t) };
                let got = exact(&e.cohomology_table(&sheaf(v, &text)).unwrap().ranks);
                assert_eq!(got, restricted(n, p, t), "Q{} {}", n, text);
            }
        }
    }
}

/// `h^0(Q_n, O(s))` from the Hilbert function of a quadric.
fn hilbert(n: i64, s: i64) -> BigInt {
    if s < 0 {
        BigInt::zero()
    } else {
        binom(n + 1 + s, n + 1) - binom(n - 1 + s, n + 1)
    }
}

#[test]
fn spinor_sections_follow_the_spinor_sequence() {
    for n in [3i64, 5, 7, 9] {
        let v = Variety::quadric(n as u32).unwrap();
        let e = Engine::new(v);
        let two_k = BigInt::from(1u64 << ((n + 1) / 2));
        // h^0(Sigma(t)) = 2^k h^0(O(t)) - h^0(Sigma(t-1)) with h^0(Sigma(-1)) = 0.
        let mut prev = BigInt::zero();
        for t in 0..=4 * n {
            let h0 = &two_k * hilbert(n, t) - &prev;
            let ranks = exact(&e.cohomology_table(&sheaf(v, &format!("Sigma({})", t))).unwrap().ranks);
            assert_eq!(ranks[0], h0, "Q{} Sigma({})", n, t);
            assert!(ranks[1..].iter().all(Zero::is_zero), "Q{} Sigma({}) {:?}", n, t, ranks);
            prev = h0;
        }
    }
}

#[test]
fn spinor_top_cohomology_is_dual_to_sections() {
    for n in [3i64, 5, 7] {
        let v = Variety::quadric(n as u32).unwrap();
        let e = Engine::new(v);
        for t in -4 * n..=4 * n {
            let h = exact(&e.cohomology_table(&sheaf(v, &format!("Sigma({})", t))).unwrap().ranks);
            let d = exact(&e.cohomology_table(&sheaf(v, &format!("Sigma({})", -t - 1 - n))).unwrap().ranks);
            assert_eq!(h[n as usize], d[0], "Q{} Sigma({})", n, t);
        }
    }
}

/// Right dual basis of the thread starting at `j + lambda (n+1)`.
fn dual_formula(v: Variety, j: i64, lambda: i64) -> Vec<SheafExpr> {
    let n = v.dim() as i64;
    let mut out = Vec::new();
    if j == 0 {
        out.push(sheaf(v, &format!("Sigma({})", n - 1 + lambda * n)));
        out.extend((0..n).rev().map(|m| sheaf(v, &format!("psi_{}({})", m, (lambda + 1) * n))));
    } else {
        let t = (lambda + 1) * n + j - 1;
        out.push(sheaf(v, &format!("O({})", t)));
        out.extend((1..j).map(|m| sheaf(v, &format!("psidual_{}({})", m, t))));
        out.push(sheaf(v, &format!("Sigma({})", t)));
        out.extend((0..n - j).rev().map(|m| sheaf(v, &format!("psi_{}({})", m, t + 1))));
    }
    out
}

#[test]
fn quadric_dual_bases_have_closed_forms() {
    for n in [3u32, 5, 7] {
        let v = Variety::quadric(n).unwrap();
        let e = Engine::new(v);
        let ni = n as i64;
        for lambda in -3..=3 {
            for j in 0..=ni {
                let th = thread(v, j + lambda * (ni + 1)).unwrap();
                let d = e.right_dual_basis(&th).unwrap();
                assert_eq!(d.members, dual_formula(v, j, lambda), "Q{} j={} lambda={}", n, j, lambda);
            }
        }
    }
}

#[test]
fn kapranov_collection_has_the_psi_dual_basis() {
    for n in [3u32, 5] {
        let v = Variety::quadric(n).unwrap();
        let e = Engine::new(v);
        let ni = n as i64;
        let mut members = vec![sheaf(v, &format!("Sigma({})", -ni))];
        members.extend((1..ni).map(|i| sheaf(v, &format!("O({})", -ni + i))));
        members.push(sheaf(v, "O"));
        let c = helixlab_core::Collection::new(v, members).unwrap();
        let d = e.right_dual_basis(&c).unwrap();
        let mut want = vec![sheaf(v, "O")];
        want.extend((1..ni).map(|j| sheaf(v, &format!("psidual_{}", j))));
        want.push(sheaf(v, "Sigma").dual().twist(1));
        assert_eq!(d.members, want, "Q{}", n);
    }
}

#[test]
fn psi_bundles_are_orthogonal_to_the_twists_below() {
    // H*(psi_j(-l)) = C in degree j when l = j, zero for other 0 <= l <= n-1.
    for n in [3u32, 5, 7] {
        let v = Variety::quadric(n).unwrap();
        let e = Engine::new(v);
        for j in 1..n {
            for l in 0..n {
                let h = exact(&e.cohomology_table(&sheaf(v, &format!("psi_{}({})", j, -(l as i64)))).unwrap().ranks);
                let want: Vec<BigInt> =
                    (0..=n).map(|i| BigInt::from(u32::from(l == j && i == j))).collect();
                assert_eq!(h, want, "Q{} psi_{}(-{})", n, j, l);
            }
        }
    }
}

#[test]
fn spinor_self_extensions_step_up_one_degree_per_twist() {
    for n in [3u32, 5, 7] {
        let v = Variety::quadric(n).unwrap();
        let e = Engine::new(v);
        let s = sheaf(v, "Sigma");
        for j in 0..=n {
            let t = e.ext_table(&s.twist(j as i64), &s).unwrap();
            let want: Vec<BigUint> = (0..=n).map(|i| BigUint::from(u32::from(i == j))).collect();
            let got: Vec<BigUint> = t.ranks.iter().map(|r| r.exact().unwrap().clone()).collect();
            assert_eq!(got, want, "Q{} Ext*(Sigma({}), Sigma)", n, j);
        }
    }
}
