//! The Grothendieck group `K_0`, in the basis of the standard geometric
//! collection `(O, ..., O(n))` on `P^n` and `(O, ..., O(n-1), Sigma(n-1))`
//! on `Q_n`.
//!
//! Classes come from the defining exact sequences, independently of the
//! cohomology engine:
//!
//! * `n+1` general linear forms have no common zero, so their Koszul complex
//!   gives `sum_i (-1)^i C(n+1,i) [O(t-i)] = 0`; hence `[O(t)]` is a
//!   polynomial of degree `<= n` in `t` and is recovered by interpolation;
//! * on `Q_n`, `[O(n)]` follows from `psi_n = 2^k Sigma(-1)` with
//!   `0 -> Sigma(t-1) -> O(t)^{2^k} -> Sigma(t) -> 0`;
//! * exterior powers follow from the (restricted) Koszul sequences and
//!   `psi_j`, `psi_j^*` from their defining extensions.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::binom;
use crate::sheaf::{Atom, SheafExpr};
use crate::variety::{Variety, VarietyKind};

/// Integer coordinates of a class in the basis of the standard collection.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct K0Vector {
    pub coords: Vec<BigInt>,
}

impl K0Vector {
    pub fn zero(len: usize) -> K0Vector {
        K0Vector { coords: vec![BigInt::zero(); len] }
    }

    /// The `i`-th basis vector.
    pub fn basis(len: usize, i: usize) -> K0Vector {
        let mut v = K0Vector::zero(len);
        v.coords[i] = BigInt::one();
        v
    }

    pub fn scale(&self, k: &BigInt) -> K0Vector {
        K0Vector { coords: self.coords.iter().map(|c| c * k).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
}

impl Add for &K0Vector {
    type Output = K0Vector;
    fn add(self, rhs: &K0Vector) -> K0Vector {
        K0Vector { coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &K0Vector {
    type Output = K0Vector;
    fn sub(self, rhs: &K0Vector) -> K0Vector {
        K0Vector { coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &K0Vector {
    type Output = K0Vector;
    fn neg(self) -> K0Vector {
        K0Vector { coords: self.coords.iter().map(|a| -a).collect() }
    }
}

impl fmt::Display for K0Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, "]")
    }
}

/// Value at `t` of the polynomial of degree `<= len-1` taking the given
/// values at `t0, t0+1, ...`. Exact: every Lagrange weight is an integer.
fn interpolate(values: &[K0Vector], t0: i64, t: i64) -> K0Vector {
    let len = values.len();
    let dim = values[0].coords.len();
    if t >= t0 && ((t - t0) as usize) < len {
        return values[(t - t0) as usize].clone();
    }
    let mut out = K0Vector::zero(dim);
    for (s, val) in values.iter().enumerate() {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for a in 0..len {
            if a != s {
                num *= BigInt::from(t - t0 - a as i64);
                den *= BigInt::from(s as i64 - a as i64);
            }
        }
        let w = num / den;
        out = &out + &val.scale(&w);
    }
    out
}

/// Class computations for one variety.
pub(crate) struct K0Basis {
    variety: Variety,
    /// `[O(0)], ..., [O(n)]`.
    o_nodes: Vec<K0Vector>,
    /// `[Sigma(n-1)], ..., [Sigma(2n-1)]` on quadrics.
    sigma_nodes: Vec<K0Vector>,
}

impl K0Basis {
    pub fn new(variety: Variety) -> K0Basis {
        let n = variety.dim() as usize;
        let len = n + 1;
        let mut o_nodes: Vec<K0Vector> = (0..n).map(|i| K0Vector::basis(len, i)).collect();
        let mut sigma_nodes = Vec::new();
        match variety.kind() {
            VarietyKind::ProjectiveSpace => o_nodes.push(K0Vector::basis(len, n)),
            VarietyKind::OddQuadric => {
                let two_k = BigInt::from(1u64 << variety.spinor_k());
                // [Sigma(-1)] by walking the spinor sequence down from Sigma(n-1).
                let mut sigma = K0Vector::basis(len, n);
                for t in (0..n).rev() {
                    sigma = &o_nodes[t].scale(&two_k) - &sigma;
                }
                // [psi_n] = sum_{p = n, n-2, ..., 1} [Omega^p(p)|_Q]; only the
                // p = n summand involves O(n), with coefficient -1.
                let mut rest = K0Vector::zero(len);
                let mut p = n as i64;
                while p >= 1 {
                    for l in 0..=p {
                        if p == n as i64 && l == n as i64 {
                            continue;
                        }
                        let c = binom(n as i64 + 2, p - l);
                        let c = if l % 2 == 0 { c } else { -c };
                        rest = &rest + &o_nodes[l as usize].scale(&c);
                    }
                    p -= 2;
                }
                let o_n = &rest - &sigma.scale(&two_k);
                o_nodes.push(o_n);
                // Spinor classes at n-1..2n-1.
                let mut s = K0Vector::basis(len, n);
                sigma_nodes.push(s.clone());
                for t in n..2 * n {
                    let o_t = interpolate(&o_nodes, 0, t as i64);
                    s = &o_t.scale(&two_k) - &s;
                    sigma_nodes.push(s.clone());
                }
            }
        }
        K0Basis { variety, o_nodes, sigma_nodes }
    }

    pub fn o(&self, t: i64) -> K0Vector {
        interpolate(&self.o_nodes, 0, t)
    }

    fn sigma(&self, t: i64) -> K0Vector {
        interpolate(&self.sigma_nodes, self.variety.dim() as i64 - 1, t)
    }

    /// `Omega^p_{P^n}(s)` on projective space.
    fn omega_p(&self, p: u32, s: i64) -> K0Vector {
        let n = self.variety.dim() as i64;
        let mut out = K0Vector::zero(n as usize + 1);
        for l in 0..=p as i64 {
            let c = binom(n + 1, p as i64 - l);
            let c = if l % 2 == 0 { c } else { -c };
            out = &out + &self.o(s - p as i64 + l).scale(&c);
        }
        out
    }

    /// `Omega^p(p)|_Q (s)` on a quadric.
    fn a_p(&self, p: u32, s: i64) -> K0Vector {
        let n = self.variety.dim() as i64;
        let mut out = K0Vector::zero(n as usize + 1);
        for l in 0..=p as i64 {
            let c = binom(n + 2, p as i64 - l);
            let c = if l % 2 == 0 { c } else { -c };
            out = &out + &self.o(s + l).scale(&c);
        }
        out
    }

    pub fn atom(&self, atom: Atom, t: i64) -> K0Vector {
        let n = self.variety.dim();
        match (self.variety.kind(), atom) {
            (_, Atom::Structure) => self.o(t),
            (VarietyKind::ProjectiveSpace, Atom::Cotangent(p)) => self.omega_p(p, t),
            (VarietyKind::ProjectiveSpace, Atom::Tangent(p)) => self.omega_p(n - p, t + n as i64 + 1),
            (VarietyKind::OddQuadric, Atom::Cotangent(p)) => self.a_p(p, t - p as i64),
            (VarietyKind::OddQuadric, Atom::Tangent(p)) => self.a_p(n + 1 - p, t + p as i64 + 1),
            (_, Atom::Spinor) => self.sigma(t),
            (_, Atom::Psi(j)) => {
                let mut out = if j % 2 == 0 { self.o(t) } else { K0Vector::zero(n as usize + 1) };
                let mut i = j as i64;
                while i >= 1 {
                    out = &out + &self.a_p(i as u32, t);
                    i -= 2;
                }
                out
            }
            (_, Atom::PsiDual(j)) => {
                let mut out = if j % 2 == 0 { self.o(t) } else { K0Vector::zero(n as usize + 1) };
                let mut i = j as i64;
                while i >= 1 {
                    out = &out + &self.a_p(n + 1 - i as u32, t + 1);
                    i -= 2;
                }
                out
            }
        }
    }

    pub fn class(&self, f: &SheafExpr) -> K0Vector {
        let mut out = K0Vector::zero(self.variety.dim() as usize + 1);
        for term in f.terms() {
            out = &out + &self.atom(term.atom, term.twist).scale(&BigInt::from(term.mult));
        }
        out
    }
}

/// Class of `f` in the basis of the standard collection of its variety.
pub fn k0_class(f: &SheafExpr) -> K0Vector {
    K0Basis::new(f.variety()).class(f)
}

/// `[R_B A] = chi(A,B) [B] - [A]`.
pub fn k0_right_mutation(a: &K0Vector, b: &K0Vector, chi_ab: &BigInt) -> K0Vector {
    &b.scale(chi_ab) - a
}

/// `[L_A B] = chi(A,B) [A] - [B]`.
pub fn k0_left_mutation(a: &K0Vector, b: &K0Vector, chi_ab: &BigInt) -> K0Vector {
    &a.scale(chi_ab) - b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_sheaf_expr;

    fn class(text: &str, v: &str) -> K0Vector {
        k0_class(&parse_sheaf_expr(text, v.parse().unwrap()).unwrap())
    }

    fn vecz(c: &[i64]) -> K0Vector {
        K0Vector { coords: c.iter().map(|&x| BigInt::from(x)).collect() }
    }

    #[test]
    fn basis_members_are_unit_vectors() {
        assert_eq!(class("O(1)", "P3"), vecz(&[0, 1, 0, 0]));
        assert_eq!(class("O(2)", "Q3"), vecz(&[0, 0, 1, 0]));
        assert_eq!(class("Sigma(2)", "Q3"), vecz(&[0, 0, 0, 1]));
    }

    #[test]
    fn projective_line_euler_sequence() {
        // 0 -> O(-1) -> O^2 -> O(1) -> 0
        assert_eq!(class("O(-1)", "P1"), vecz(&[2, -1]));
    }

    #[test]
    fn koszul_recurrence_holds() {
        for v in ["P2", "P4", "Q3", "Q5"] {
            let var: Variety = v.parse().unwrap();
            let b = K0Basis::new(var);
            let n = var.dim() as i64;
            for t in -8..8 {
                let mut acc = K0Vector::zero(n as usize + 1);
                for i in 0..=n + 1 {
                    let c = binom(n + 1, i);
                    let c = if i % 2 == 0 { c } else { -c };
                    acc = &acc + &b.o(t - i).scale(&c);
                }
                assert!(acc.is_zero(), "{} t={}", v, t);
            }
        }
    }

    #[test]
    fn spinor_sequence_and_top_psi() {
        let v: Variety = "Q5".parse().unwrap();
        let b = K0Basis::new(v);
        for t in -6..10 {
            let lhs = &b.sigma(t) + &b.sigma(t - 1);
            assert_eq!(lhs, b.o(t).scale(&BigInt::from(8)), "t={}", t);
        }
        let psi5 = b.atom(Atom::Psi(5), 0);
        assert_eq!(psi5, b.sigma(-1).scale(&BigInt::from(8)));
    }
}
