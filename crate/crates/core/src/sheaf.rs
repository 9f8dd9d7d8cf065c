//! Catalog bundles, formal direct sums and their canonical forms.
//!
//! Every expression is kept in a canonical form so that structural equality
//! coincides with isomorphism inside the catalog. The rewrite rules are:
//!
//! * on `P^n`, exterior powers of the tangent bundle are canonical:
//!   `Omega^p(t) = wT^{n-p}(t-n-1)`, `wT^n(t) = O(t+n+1)`, `Omega^n(t) = O(t-n-1)`;
//! * on `Q_n` (powers are those of the ambient `P^{n+1}`, restricted):
//!   `Omega^1(t) = psi_1(t-1)`, `Omega^n(t) = psidual_1(t-n-1)`,
//!   `Omega^{n+1}(t) = O(t-n-2)`, `wT^p(t) = Omega^{n+1-p}(t+n+2)`,
//!   `psi_0 = psidual_0 = O`, `psi_j = 2^k Sigma(-1)` and
//!   `psidual_j = 2^k Sigma` for `j >= n`, where `k = (n+1)/2`.
//!
//! The spinor bundle is normalised by `Sigma^* = Sigma(-1)`.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::error::Error;
use crate::variety::{Variety, VarietyKind};

/// Largest absolute twist accepted from user input.
pub const MAX_TWIST: i64 = 1 << 31;

/// A bundle of the catalog, before twisting.
///
/// On `Q_n` the (co)tangent powers are those of the ambient `P^{n+1}`
/// restricted to the quadric; `Psi(1) = Omega^1(1)|_Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    /// The structure sheaf `O`.
    Structure,
    /// `Omega^p` (canonical only on quadrics, for `2 <= p <= n-1`).
    Cotangent(u32),
    /// `wedge^p T` (canonical only on projective spaces, `1 <= p <= n-1`).
    Tangent(u32),
    /// The spinor bundle `Sigma` of an odd quadric.
    Spinor,
    /// Kapranov's bundle `psi_j` (canonical for `1 <= j <= n-1`).
    Psi(u32),
    /// The dual `psi_j^*` (canonical for `1 <= j <= n-1`).
    PsiDual(u32),
}

/// One summand `mult * atom(twist)` of a direct sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term {
    pub atom: Atom,
    pub twist: i64,
    pub mult: u64,
}

/// A finite direct sum of twisted catalog atoms in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SheafExpr {
    variety: Variety,
    terms: Vec<Term>,
}

fn small_binom(a: u32, b: u32) -> u64 {
    if b > a {
        return 0;
    }
    let b = b.min(a - b);
    let mut acc: u64 = 1;
    for i in 0..b {
        acc = acc * (a - i) as u64 / (i + 1) as u64;
    }
    acc
}

/// Rewrite one twisted atom into canonical form: `(multiplier, atom, twist)`.
pub(crate) fn normalize_atom(v: &Variety, atom: Atom, t: i64) -> Result<(u64, Atom, i64), Error> {
    let n = v.dim();
    let ni = n as i64;
    let out_of_catalog = || Error::NotInCatalog(format!("{} on {}", AtomDisplay(atom, t), v));
    match v.kind() {
        VarietyKind::ProjectiveSpace => match atom {
            Atom::Structure => Ok((1, Atom::Structure, t)),
            Atom::Cotangent(0) => Ok((1, Atom::Structure, t)),
            Atom::Cotangent(p) if p == n => Ok((1, Atom::Structure, t - ni - 1)),
            Atom::Cotangent(p) if p < n => Ok((1, Atom::Tangent(n - p), t - ni - 1)),
            Atom::Tangent(0) => Ok((1, Atom::Structure, t)),
            Atom::Tangent(p) if p == n => Ok((1, Atom::Structure, t + ni + 1)),
            Atom::Tangent(p) if p < n => Ok((1, Atom::Tangent(p), t)),
            _ => Err(out_of_catalog()),
        },
        VarietyKind::OddQuadric => {
            let spin_mult = 1u64 << v.spinor_k();
            match atom {
                Atom::Structure => Ok((1, Atom::Structure, t)),
                Atom::Spinor => Ok((1, Atom::Spinor, t)),
                Atom::Cotangent(0) => Ok((1, Atom::Structure, t)),
                Atom::Cotangent(1) => Ok((1, Atom::Psi(1), t - 1)),
                Atom::Cotangent(p) if p == n => Ok((1, Atom::PsiDual(1), t - ni - 1)),
                Atom::Cotangent(p) if p == n + 1 => Ok((1, Atom::Structure, t - ni - 2)),
                Atom::Cotangent(p) if p < n => Ok((1, Atom::Cotangent(p), t)),
                Atom::Tangent(p) if p <= n + 1 => {
                    normalize_atom(v, Atom::Cotangent(n + 1 - p), t + ni + 2)
                }
                Atom::Psi(0) | Atom::PsiDual(0) => Ok((1, Atom::Structure, t)),
                Atom::Psi(j) if j >= n => Ok((spin_mult, Atom::Spinor, t - 1)),
                Atom::PsiDual(j) if j >= n => Ok((spin_mult, Atom::Spinor, t)),
                Atom::Psi(j) => Ok((1, Atom::Psi(j), t)),
                Atom::PsiDual(j) => Ok((1, Atom::PsiDual(j), t)),
                _ => Err(out_of_catalog()),
            }
        }
    }
}

/// Dual of a canonical atom, not yet normalised.
fn dual_atom(v: &Variety, atom: Atom, t: i64) -> (Atom, i64) {
    match (v.kind(), atom) {
        (_, Atom::Structure) => (Atom::Structure, -t),
        (_, Atom::Cotangent(p)) => (Atom::Tangent(p), -t),
        (_, Atom::Tangent(p)) => (Atom::Cotangent(p), -t),
        (_, Atom::Spinor) => (Atom::Spinor, -t - 1),
        (_, Atom::Psi(j)) => (Atom::PsiDual(j), -t),
        (_, Atom::PsiDual(j)) => (Atom::Psi(j), -t),
    }
}

/// Rank of a canonical atom.
pub(crate) fn atom_rank(v: &Variety, atom: Atom) -> u64 {
    let n = v.dim();
    match (v.kind(), atom) {
        (_, Atom::Structure) => 1,
        (VarietyKind::ProjectiveSpace, Atom::Tangent(p)) | (VarietyKind::ProjectiveSpace, Atom::Cotangent(p)) => {
            small_binom(n, p)
        }
        (VarietyKind::OddQuadric, Atom::Tangent(p)) | (VarietyKind::OddQuadric, Atom::Cotangent(p)) => {
            small_binom(n + 1, p)
        }
        (_, Atom::Spinor) => v.spinor_rank(),
        (_, Atom::Psi(j)) | (_, Atom::PsiDual(j)) => {
            let mut r = 0;
            let mut i = j as i64;
            while i >= 0 {
                r += small_binom(n + 1, i as u32);
                i -= 2;
            }
            r
        }
    }
}

struct AtomDisplay(Atom, i64);

impl fmt::Display for AtomDisplay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = self.1;
        match self.0 {
            Atom::Structure => write!(f, "O({})", t),
            Atom::Cotangent(p) => write!(f, "Omega^{}({})", p, t),
            Atom::Tangent(p) => write!(f, "wT^{}({})", p, t),
            Atom::Spinor => write!(f, "Sigma({})", t),
            Atom::Psi(j) => write!(f, "psi_{}({})", j, t),
            Atom::PsiDual(j) => write!(f, "psidual_{}({})", j, t),
        }
    }
}

impl SheafExpr {
    /// The zero sheaf.
    pub fn zero(variety: Variety) -> SheafExpr {
        SheafExpr { variety, terms: Vec::new() }
    }

    /// A single twisted atom, normalised.
    pub fn atom(variety: Variety, atom: Atom, twist: i64) -> Result<SheafExpr, Error> {
        SheafExpr::from_terms(variety, [(atom, twist, 1)])
    }

    /// Build a canonical expression from `(atom, twist, multiplicity)` triples.
    /// Zero multiplicities are dropped.
    pub fn from_terms<I>(variety: Variety, terms: I) -> Result<SheafExpr, Error>
    where
        I: IntoIterator<Item = (Atom, i64, u64)>,
    {
        let mut out: Vec<Term> = Vec::new();
        for (atom, twist, mult) in terms {
            if twist.abs() > MAX_TWIST {
                return Err(Error::Overflow(format!("twist {}", twist)));
            }
            if mult == 0 {
                continue;
            }
            let (k, atom, twist) = normalize_atom(&variety, atom, twist)?;
            let mult = mult
                .checked_mul(k)
                .ok_or_else(|| Error::Overflow(format!("multiplicity {} * {}", mult, k)))?;
            out.push(Term { atom, twist, mult });
        }
        Ok(SheafExpr { variety, terms: merge(out)? })
    }

    pub fn variety(&self) -> Variety {
        self.variety
    }

    /// The canonical summands, sorted by atom, then twist.
    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some((atom, twist))` when the expression is a single atom of
    /// multiplicity one.
    pub fn as_atom(&self) -> Option<(Atom, i64)> {
        match self.terms.as_slice() {
            [t] if t.mult == 1 => Some((t.atom, t.twist)),
            _ => None,
        }
    }

    /// Rank of the bundle.
    pub fn rank(&self) -> u128 {
        self.terms
            .iter()
            .map(|t| t.mult as u128 * atom_rank(&self.variety, t.atom) as u128)
            .sum()
    }

    /// Smallest twist appearing in the expression.
    pub fn min_twist(&self) -> Option<i64> {
        self.terms.iter().map(|t| t.twist).min()
    }

    /// Tensor with `O(t)`.
    pub fn twist(&self, t: i64) -> SheafExpr {
        let terms = self
            .terms
            .iter()
            .map(|term| Term { twist: term.twist + t, ..*term })
            .collect();
        SheafExpr { variety: self.variety, terms }
    }

    /// The dual bundle, term by term.
    pub fn dual(&self) -> SheafExpr {
        let v = self.variety;
        let mut out = Vec::with_capacity(self.terms.len());
        for term in &self.terms {
            let (atom, twist) = dual_atom(&v, term.atom, term.twist);
            // Duals of canonical atoms always stay inside the catalog.
            let (k, atom, twist) = normalize_atom(&v, atom, twist).expect("catalog is closed under duals");
            out.push(Term { atom, twist, mult: term.mult * k });
        }
        SheafExpr { variety: v, terms: merge(out).expect("dual cannot overflow") }
    }

    /// Direct sum of two expressions on the same variety.
    pub fn direct_sum(&self, other: &SheafExpr) -> Result<SheafExpr, Error> {
        if self.variety != other.variety {
            return Err(Error::VarietyMismatch);
        }
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        Ok(SheafExpr { variety: self.variety, terms: merge(terms)? })
    }

    /// `k` copies of the expression.
    pub fn times(&self, k: u64) -> Result<SheafExpr, Error> {
        if k == 0 {
            return Ok(SheafExpr::zero(self.variety));
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let mult = t
                .mult
                .checked_mul(k)
                .ok_or_else(|| Error::Overflow(format!("multiplicity {} * {}", t.mult, k)))?;
            terms.push(Term { mult, ..*t });
        }
        Ok(SheafExpr { variety: self.variety, terms })
    }
}

fn merge(mut terms: Vec<Term>) -> Result<Vec<Term>, Error> {
    terms.sort_by_key(|a| (a.atom, a.twist));
    let mut out: Vec<Term> = Vec::with_capacity(terms.len());
    for t in terms {
        match out.last_mut() {
            Some(last) if last.atom == t.atom && last.twist == t.twist => {
                last.mult = last
                    .mult
                    .checked_add(t.mult)
                    .ok_or_else(|| Error::Overflow(format!("multiplicity {} + {}", last.mult, t.mult)))?;
            }
            _ => out.push(t),
        }
    }
    Ok(out)
}

/// The canonical line bundle: `O(-n-1)` on `P^n`, `O(-n)` on `Q_n`.
pub fn canonical_bundle(v: Variety) -> SheafExpr {
    SheafExpr { variety: v, terms: alloc::vec![Term { atom: Atom::Structure, twist: v.canonical_degree(), mult: 1 }] }
}

impl fmt::Display for SheafExpr {
    /// Prints in the input grammar; the output re-parses to an equal value.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if t.mult != 1 {
                write!(f, "{}*", t.mult)?;
            }
            write!(f, "{}", AtomDisplay(t.atom, t.twist))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u32) -> Variety {
        Variety::projective(n).unwrap()
    }
    fn q(n: u32) -> Variety {
        Variety::quadric(n).unwrap()
    }

    #[test]
    fn psi_zero_is_structure_sheaf() {
        let e = SheafExpr::atom(q(3), Atom::Psi(0), 4).unwrap();
        assert_eq!(e, SheafExpr::atom(q(3), Atom::Structure, 4).unwrap());
    }

    #[test]
    fn top_psi_is_spinor_sum() {
        let e = SheafExpr::atom(q(5), Atom::Psi(5), 0).unwrap();
        assert_eq!(e.terms(), &[Term { atom: Atom::Spinor, twist: -1, mult: 8 }]);
        assert_eq!(e.rank(), 32);
        // psi_{n+2} = psi_n and psi_{n+1} agrees with it as well.
        assert_eq!(SheafExpr::atom(q(5), Atom::Psi(7), 0).unwrap(), e);
        assert_eq!(SheafExpr::atom(q(5), Atom::Psi(6), 0).unwrap(), e);
    }

    #[test]
    fn ranks_follow_the_defining_extension() {
        let v = q(5);
        for j in 2..5u32 {
            let psi = SheafExpr::atom(v, Atom::Psi(j), 0).unwrap().rank();
            let psi2 = SheafExpr::atom(v, Atom::Psi(j - 2), 0).unwrap().rank();
            assert_eq!(psi, small_binom(6, j) as u128 + psi2);
        }
        assert_eq!(SheafExpr::atom(v, Atom::Spinor, 0).unwrap().rank(), 4);
    }

    #[test]
    fn dual_rules() {
        let v = q(3);
        let s = SheafExpr::atom(v, Atom::Spinor, 0).unwrap();
        assert_eq!(s.dual(), SheafExpr::atom(v, Atom::Spinor, -1).unwrap());
        let pn = p(3);
        // (Omega^n(n))^* = wT^n(-n) = O(1)
        let om = SheafExpr::atom(pn, Atom::Cotangent(3), 3).unwrap();
        assert_eq!(om.dual(), SheafExpr::atom(pn, Atom::Structure, 1).unwrap());
    }

    #[test]
    fn twist_then_dual() {
        let v = q(5);
        let e = SheafExpr::atom(v, Atom::Psi(2), 3).unwrap();
        assert_eq!(e.twist(2).dual(), e.dual().twist(-2));
    }

    #[test]
    fn spinor_not_on_projective_space() {
        assert!(matches!(SheafExpr::atom(p(3), Atom::Spinor, 0), Err(Error::NotInCatalog(_))));
        assert!(matches!(SheafExpr::atom(p(3), Atom::Tangent(4), 0), Err(Error::NotInCatalog(_))));
    }

    #[test]
    fn canonical_bundles() {
        assert_eq!(canonical_bundle(p(3)).to_string(), "O(-4)");
        assert_eq!(canonical_bundle(q(3)).to_string(), "O(-3)");
        assert_eq!(canonical_bundle(q(5)).to_string(), "O(-5)");
    }

    #[test]
    fn direct_sums_merge() {
        let v = p(2);
        let o = SheafExpr::atom(v, Atom::Structure, 0).unwrap();
        let s = o.direct_sum(&o).unwrap();
        assert_eq!(s.to_string(), "2*O(0)");
        assert_eq!(o.direct_sum(&SheafExpr::zero(v)).unwrap(), o);
        assert!(o.direct_sum(&SheafExpr::zero(p(3))).is_err());
    }
}
