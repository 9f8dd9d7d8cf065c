//! Exceptional collections, the helix of the standard collection, mutations
//! and dual bases.
//!
//! Mutations are resolved by a ledger of closed forms and then
//! cross-checked: the candidate must have the class
//! `chi(A,B) [B] - [A]` (resp. `chi(A,B) [A] - [B]`) and be orthogonal to
//! the object it was mutated through. The ledger:
//!
//! * on `P^n`: `R_{O(a+k)} wT^{k-1}(a) = wT^k(a)` for `1 <= k <= n`
//!   (with `wT^0 = O`, `wT^n(a) = O(a+n+1)`);
//! * on `Q_n`:
//!   `R_{O(a+1)} O(a) = psi_1^*(a+1)`,
//!   `R_{O(a+1)} psi_m^*(a) = psi_{m+1}^*(a+1)` (`1 <= m <= n-2`),
//!   `R_{O(a)} Sigma(a-1) = Sigma(a)`,
//!   `R_{Sigma(a)} psi_i^*(a) = psi_{n-1-i}(a+1)` (`0 <= i <= n-1`),
//!   `R_{O(a)} psi_m(a) = psi_{m-1}(a+1)` (`1 <= m <= n-1`).
//!
//! Left mutations use `L_A B = (R_{A^*} B^*)^*`.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::cohomology::{Engine, RankValue};
use crate::error::Error;
use crate::k0::{k0_left_mutation, k0_right_mutation};
use crate::sheaf::{Atom, SheafExpr};
use crate::variety::{Variety, VarietyKind};

/// An ordered collection of sheaves.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Collection {
    pub variety: Variety,
    pub members: Vec<SheafExpr>,
    /// For threads of the standard helix: the helix index of the first member.
    pub base_index: Option<i64>,
}

impl Collection {
    /// An arbitrary collection; all members must live on `variety`.
    pub fn new(variety: Variety, members: Vec<SheafExpr>) -> Result<Collection, Error> {
        if members.iter().any(|m| m.variety() != variety) {
            return Err(Error::VarietyMismatch);
        }
        Ok(Collection { variety, members, base_index: None })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// `(E_n^*, ..., E_0^*)`.
    pub fn reversed_dual(&self) -> Collection {
        Collection {
            variety: self.variety,
            members: self.members.iter().rev().map(SheafExpr::dual).collect(),
            base_index: None,
        }
    }
}

/// Which dual basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// A right dual basis `(E_n, R^(1) E_{n-1}, ..., R^(n) E_0)` or a left dual
/// basis `(L^(n) E_n, ..., L^(1) E_1, E_0)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DualBasis {
    pub source: Collection,
    pub members: Vec<SheafExpr>,
    pub side: Side,
}

/// Three-valued answer of a check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Yes,
    No,
    Indeterminate,
}

/// A group that breaks (or might break) exceptionality:
/// `Ext^degree(members[source], members[target])`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtIssue {
    pub source: usize,
    pub target: usize,
    pub degree: usize,
    pub rank: RankValue,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExceptionalityReport {
    pub verdict: Verdict,
    /// Groups known to violate the conditions.
    pub violations: Vec<ExtIssue>,
    /// Groups whose interval rank blocks a verdict.
    pub undecided: Vec<ExtIssue>,
}

/// `(O, ..., O(n))` on `P^n`; `(O, ..., O(n-1), Sigma(n-1))` on `Q_n`.
pub fn standard_collection(v: Variety) -> Collection {
    let n = v.dim() as i64;
    let members = (0..=n).map(|i| helix_element(v, i).expect("small twists")).collect();
    Collection { variety: v, members, base_index: Some(0) }
}

/// `E_i` of the helix generated by the standard collection: with
/// `i = lambda (n+1) + r`, `0 <= r <= n`, this is `E_r (x) (K^*)^lambda`.
pub fn helix_element(v: Variety, i: i64) -> Result<SheafExpr, Error> {
    let n = v.dim() as i64;
    let lambda = i.div_euclid(n + 1);
    let r = i.rem_euclid(n + 1);
    let shift = lambda
        .checked_mul(-v.canonical_degree())
        .ok_or_else(|| Error::Overflow(format!("helix index {}", i)))?;
    match v.kind() {
        VarietyKind::ProjectiveSpace => SheafExpr::atom(v, Atom::Structure, shift + r),
        VarietyKind::OddQuadric if r < n => SheafExpr::atom(v, Atom::Structure, shift + r),
        VarietyKind::OddQuadric => SheafExpr::atom(v, Atom::Spinor, shift + n - 1),
    }
}

/// The thread `sigma_i = (E_i, ..., E_{i+n})`.
pub fn thread(v: Variety, i: i64) -> Result<Collection, Error> {
    let n = v.dim() as i64;
    let members = (i..=i + n).map(|j| helix_element(v, j)).collect::<Result<Vec<_>, _>>()?;
    Ok(Collection { variety: v, members, base_index: Some(i) })
}

fn is_unit_at(ranks: &[RankValue], degree: usize) -> Option<bool> {
    let mut all_exact = true;
    for (q, r) in ranks.iter().enumerate() {
        let want: u32 = if q == degree { 1 } else { 0 };
        match r.exact() {
            Some(x) if *x == BigUint::from(want) => {}
            Some(_) => return Some(false),
            None => {
                // Decided only if the interval excludes the wanted value.
                let lo_ok = *r.lo() <= BigUint::from(want);
                let hi_ok = r.hi().is_none_or(|h| *h >= BigUint::from(want));
                if !(lo_ok && hi_ok) {
                    return Some(false);
                }
                all_exact = false;
            }
        }
    }
    if all_exact {
        Some(true)
    } else {
        None
    }
}

fn is_zero_table(ranks: &[RankValue], from: usize) -> Option<bool> {
    let mut decided = true;
    for r in &ranks[from..] {
        if r.is_nonzero() {
            return Some(false);
        }
        if !r.is_zero() {
            decided = false;
        }
    }
    if decided {
        Some(true)
    } else {
        None
    }
}

impl Engine {
    /// Checks that `(a, b)` is an exceptional pair with `Ext^{>0}(a, b) = 0`
    /// and returns `dim Hom(a, b)`.
    fn strict_pair(&self, a: &SheafExpr, b: &SheafExpr) -> Result<BigInt, Error> {
        let indet = |what: &str| Error::Indeterminate(format!("{} for the pair ({}, {})", what, a, b));
        for x in [a, b] {
            match is_unit_at(&self.ext_table(x, x)?.ranks, 0) {
                Some(true) => {}
                Some(false) => return Err(Error::NotExceptionalPair(format!("{} is not exceptional", x))),
                None => return Err(indet("self-Ext")),
            }
        }
        match is_zero_table(&self.ext_table(b, a)?.ranks, 0) {
            Some(true) => {}
            Some(false) => return Err(Error::NotExceptionalPair(format!("Ext*({}, {}) != 0", b, a))),
            None => return Err(indet("backward Ext")),
        }
        let fwd = self.ext_table(a, b)?;
        match is_zero_table(&fwd.ranks, 1) {
            Some(true) => {}
            Some(false) => {
                return Err(Error::NotExceptionalPair(format!(
                    "Ext^>0({}, {}) != 0: outside the sheaf regime",
                    a, b
                )))
            }
            None => return Err(indet("higher Ext")),
        }
        let hom = fwd.ranks[0].exact().ok_or_else(|| indet("Hom"))?;
        Ok(BigInt::from(hom.clone()))
    }

    fn ledger_right(&self, a: (Atom, i64), b: (Atom, i64)) -> Option<SheafExpr> {
        let v = self.variety();
        let n = v.dim();
        let mk = |atom: Atom, t: i64| SheafExpr::atom(v, atom, t).ok();
        match v.kind() {
            VarietyKind::ProjectiveSpace => {
                let (k1, a0) = match a {
                    (Atom::Structure, t) => (0u32, t),
                    (Atom::Tangent(j), t) => (j, t),
                    _ => return None,
                };
                if b == (Atom::Structure, a0 + k1 as i64 + 1) && k1 < n {
                    mk(Atom::Tangent(k1 + 1), a0)
                } else {
                    None
                }
            }
            VarietyKind::OddQuadric => match (a, b) {
                ((Atom::Structure, x), (Atom::Structure, y)) if y == x + 1 => mk(Atom::PsiDual(1), y),
                ((Atom::PsiDual(m), x), (Atom::Structure, y)) if y == x + 1 && m + 2 <= n => {
                    mk(Atom::PsiDual(m + 1), y)
                }
                ((Atom::Spinor, x), (Atom::Structure, y)) if y == x + 1 => mk(Atom::Spinor, y),
                ((Atom::Structure, x), (Atom::Spinor, y)) if x == y => mk(Atom::Psi(n - 1), y + 1),
                ((Atom::PsiDual(i), x), (Atom::Spinor, y)) if x == y && i < n => mk(Atom::Psi(n - 1 - i), y + 1),
                ((Atom::Psi(m), x), (Atom::Structure, y)) if x == y => mk(Atom::Psi(m - 1), y + 1),
                _ => None,
            },
        }
    }

    /// `R_B A`, defined by `0 -> A -> Hom(A,B) (x) B -> R_B A -> 0`.
    pub fn right_mutation(&self, a: &SheafExpr, b: &SheafExpr) -> Result<SheafExpr, Error> {
        let hom = self.strict_pair(a, b)?;
        let class = k0_right_mutation(&self.k0_class(a)?, &self.k0_class(b)?, &hom);
        if hom.is_zero() {
            return Err(Error::NotRepresentable {
                class,
                detail: format!("Hom*({}, {}) = 0, so the mutation is a shift of {}", a, b, a),
            });
        }
        let candidate = match (a.as_atom(), b.as_atom()) {
            (Some(x), Some(y)) => self.ledger_right(x, y),
            _ => None,
        };
        let r = candidate.ok_or_else(|| Error::NotRepresentable {
            class: class.clone(),
            detail: format!("R_({}) {} is not a catalog atom", b, a),
        })?;
        if self.k0_class(&r)? != class {
            return Err(Error::InternalInconsistency(format!(
                "ledger gives R_({}) {} = {} with the wrong class",
                b, a, r
            )));
        }
        match is_zero_table(&self.ext_table(&r, b)?.ranks, 0) {
            Some(true) => Ok(r),
            Some(false) => Err(Error::InternalInconsistency(format!(
                "ledger gives R_({}) {} = {}, not right-orthogonal",
                b, a, r
            ))),
            None => Err(Error::Indeterminate(format!("orthogonality of {} and {}", r, b))),
        }
    }

    /// `L_A B`, defined by `0 -> L_A B -> Hom(A,B) (x) A -> B -> 0`.
    pub fn left_mutation(&self, a: &SheafExpr, b: &SheafExpr) -> Result<SheafExpr, Error> {
        match self.right_mutation(&b.dual(), &a.dual()) {
            Ok(r) => Ok(r.dual()),
            Err(Error::NotRepresentable { detail, .. }) => {
                let hom = self.strict_pair(a, b)?;
                let class = k0_left_mutation(&self.k0_class(a)?, &self.k0_class(b)?, &hom);
                Err(Error::NotRepresentable { class, detail: format!("dual of: {}", detail) })
            }
            Err(e) => Err(e),
        }
    }

    /// Right dual basis `F_k = R^(k) E_{n-k}` (so `F_0 = E_n`), verified
    /// against `Ext^a(F_k, E_l) = C` iff `l = n-k`, `a = k`, zero otherwise.
    pub fn right_dual_basis(&self, c: &Collection) -> Result<DualBasis, Error> {
        if c.variety != self.variety() {
            return Err(Error::VarietyMismatch);
        }
        if let Some(m) = self.right_duals.borrow().get(&c.members) {
            return Ok(DualBasis { source: c.clone(), members: m.clone(), side: Side::Right });
        }
        let e = &c.members;
        let n = e.len().checked_sub(1).ok_or_else(|| Error::InvalidVariety("empty collection".into()))?;
        let mut members = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut x = e[n - k].clone();
            for y in &e[n - k + 1..] {
                x = self.right_mutation(&x, y)?;
            }
            members.push(x);
        }
        for (k, f) in members.iter().enumerate() {
            for (l, el) in e.iter().enumerate() {
                let ranks = self.ext_table(f, el)?.ranks;
                let ok = if l == n - k { is_unit_at(&ranks, k) } else { is_zero_table(&ranks, 0) };
                match ok {
                    Some(true) => {}
                    Some(false) => {
                        return Err(Error::OrthogonalityCheckFailed(format!(
                            "Ext*({}, {}) for k = {}, l = {}",
                            f, el, k, l
                        )))
                    }
                    None => return Err(Error::Indeterminate(format!("Ext*({}, {})", f, el))),
                }
            }
        }
        self.right_duals.borrow_mut().insert(c.members.clone(), members.clone());
        Ok(DualBasis { source: c.clone(), members, side: Side::Right })
    }

    /// Left dual basis `(L^(n) E_n, ..., L^(1) E_1, E_0)`, obtained by
    /// dualizing the right dual basis of `(E_n^*, ..., E_0^*)`; verified
    /// against `Ext^a(E_k, L^(i) E_i) = C` iff `k = i`, `a = i`.
    pub fn left_dual_basis(&self, c: &Collection) -> Result<DualBasis, Error> {
        let rd = self.right_dual_basis(&c.reversed_dual())?;
        let members: Vec<SheafExpr> = rd.members.iter().rev().map(SheafExpr::dual).collect();
        let n = members.len() - 1;
        for (pos, g) in members.iter().enumerate() {
            let i = n - pos;
            for (k, ek) in c.members.iter().enumerate() {
                let ranks = self.ext_table(ek, g)?.ranks;
                let ok = if k == i { is_unit_at(&ranks, i) } else { is_zero_table(&ranks, 0) };
                match ok {
                    Some(true) => {}
                    Some(false) => {
                        return Err(Error::OrthogonalityCheckFailed(format!(
                            "Ext*({}, {}) for k = {}, i = {}",
                            ek, g, k, i
                        )))
                    }
                    None => return Err(Error::Indeterminate(format!("Ext*({}, {})", ek, g))),
                }
            }
        }
        Ok(DualBasis { source: c.clone(), members, side: Side::Left })
    }

    fn exceptionality(&self, c: &Collection, strong: bool) -> Result<ExceptionalityReport, Error> {
        let mut violations = Vec::new();
        let mut undecided = Vec::new();
        let m = &c.members;
        let mut record = |src: usize, tgt: usize, ranks: &[RankValue], want: &dyn Fn(usize) -> Option<u32>| {
            for (q, r) in ranks.iter().enumerate() {
                let Some(w) = want(q) else { continue };
                let w = BigUint::from(w);
                match r.exact() {
                    Some(x) if *x == w => {}
                    Some(_) => violations.push(ExtIssue { source: src, target: tgt, degree: q, rank: r.clone() }),
                    None => {
                        let inside = *r.lo() <= w && r.hi().is_none_or(|h| *h >= w);
                        let issue = ExtIssue { source: src, target: tgt, degree: q, rank: r.clone() };
                        if inside {
                            undecided.push(issue);
                        } else {
                            violations.push(issue);
                        }
                    }
                }
            }
        };
        for i in 0..m.len() {
            let t = self.ext_table(&m[i], &m[i])?;
            record(i, i, &t.ranks, &|q| Some(if q == 0 { 1 } else { 0 }));
            for j in 0..i {
                let back = self.ext_table(&m[i], &m[j])?;
                record(i, j, &back.ranks, &|_| Some(0));
                if strong {
                    let fwd = self.ext_table(&m[j], &m[i])?;
                    record(j, i, &fwd.ranks, &|q| if q == 0 { None } else { Some(0) });
                }
            }
        }
        let verdict = if !violations.is_empty() {
            Verdict::No
        } else if !undecided.is_empty() {
            Verdict::Indeterminate
        } else {
            Verdict::Yes
        };
        Ok(ExceptionalityReport { verdict, violations, undecided })
    }

    /// `Ext*(E,E) = C` for every member and `Ext*(E_k, E_j) = 0` for `j < k`.
    pub fn check_exceptional(&self, c: &Collection) -> Result<ExceptionalityReport, Error> {
        if c.variety != self.variety() {
            return Err(Error::VarietyMismatch);
        }
        self.exceptionality(c, false)
    }

    /// Exceptional, and additionally `Ext^{>0}(E_j, E_k) = 0` for `j < k`.
    pub fn check_strong_exceptional(&self, c: &Collection) -> Result<ExceptionalityReport, Error> {
        if c.variety != self.variety() {
            return Err(Error::VarietyMismatch);
        }
        self.exceptionality(c, true)
    }
}

/// `chi(E,E) = 1` is the diagonal of the Euler matrix of an exceptional
/// collection; exposed for callers assembling their own checks.
pub fn is_unipotent_upper(m: &[Vec<BigInt>]) -> bool {
    m.iter().enumerate().all(|(i, row)| {
        row.iter().enumerate().all(|(j, x)| match i.cmp(&j) {
            core::cmp::Ordering::Equal => x.is_one(),
            core::cmp::Ordering::Greater => x.is_zero(),
            core::cmp::Ordering::Less => true,
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_sheaf_expr;

    fn s(v: Variety, t: &str) -> SheafExpr {
        parse_sheaf_expr(t, v).unwrap()
    }

    #[test]
    fn standard_collections() {
        let q3: Variety = "Q3".parse().unwrap();
        let got: Vec<_> = standard_collection(q3).members.iter().map(|m| m.to_string()).collect();
        assert_eq!(got, ["O(0)", "O(1)", "O(2)", "Sigma(2)"]);
        let p2: Variety = "P2".parse().unwrap();
        let got: Vec<_> = standard_collection(p2).members.iter().map(|m| m.to_string()).collect();
        assert_eq!(got, ["O(0)", "O(1)", "O(2)"]);
    }

    #[test]
    fn helix_on_quadric_uses_floor_division() {
        let q3: Variety = "Q3".parse().unwrap();
        assert_eq!(helix_element(q3, -1).unwrap(), s(q3, "Sigma(-1)"));
        assert_eq!(helix_element(q3, -4).unwrap(), s(q3, "O(-3)"));
        assert_eq!(helix_element(q3, 7).unwrap(), s(q3, "Sigma(5)"));
    }

    #[test]
    fn projective_line_mutations() {
        let p1: Variety = "P1".parse().unwrap();
        let e = Engine::new(p1);
        assert_eq!(e.right_mutation(&s(p1, "O"), &s(p1, "O(1)")).unwrap(), s(p1, "O(2)"));
        assert_eq!(e.left_mutation(&s(p1, "O"), &s(p1, "O(1)")).unwrap(), s(p1, "O(-1)"));
        let ld = e.left_dual_basis(&standard_collection(p1)).unwrap();
        assert_eq!(ld.members, [s(p1, "O(-1)"), s(p1, "O")]);
    }

    #[test]
    fn non_representable_carries_class() {
        let p2: Variety = "P2".parse().unwrap();
        let e = Engine::new(p2);
        match e.right_mutation(&s(p2, "O"), &s(p2, "O(2)")) {
            Err(Error::NotRepresentable { class, .. }) => {
                let want = &e.k0_class(&s(p2, "O(2)")).unwrap().scale(&BigInt::from(6))
                    - &e.k0_class(&s(p2, "O")).unwrap();
                assert_eq!(class, want);
            }
            other => panic!("unexpected {:?}", other),
        }
        assert!(matches!(
            e.right_mutation(&s(p2, "O(1)"), &s(p2, "O")),
            Err(Error::NotExceptionalPair(_))
        ));
    }

    #[test]
    fn kapranov_collection_dual() {
        let q5: Variety = "Q5".parse().unwrap();
        let e = Engine::new(q5);
        let members = ["Sigma(-5)", "O(-4)", "O(-3)", "O(-2)", "O(-1)", "O"].iter().map(|t| s(q5, t)).collect();
        let c = Collection::new(q5, members).unwrap();
        let d = e.right_dual_basis(&c).unwrap();
        let want: Vec<_> = ["O", "psidual_1", "psidual_2", "psidual_3", "psidual_4", "Sigma"]
            .iter()
            .map(|t| s(q5, t))
            .collect();
        assert_eq!(d.members, want);
    }

    #[test]
    fn exceptionality_reports() {
        let p2: Variety = "P2".parse().unwrap();
        let e = Engine::new(p2);
        assert_eq!(e.check_strong_exceptional(&standard_collection(p2)).unwrap().verdict, Verdict::Yes);
        let bad = Collection::new(p2, [s(p2, "O(1)"), s(p2, "O")].into()).unwrap();
        let r = e.check_exceptional(&bad).unwrap();
        assert_eq!(r.verdict, Verdict::No);
        assert_eq!(r.violations[0].source, 1);
        assert_eq!(r.violations[0].degree, 0);
    }
}
