//! Regularity with respect to the standard geometric collection,
//! Castelnuovo-Mumford regularity, the `E_1` grids of the Beilinson and
//! Eilenberg-Moore type spectral sequences, and the resolution of a regular
//! sheaf by members of the helix.
//!
//! `F` is `m`-regular when `Ext^q(R^(-p) E_{-m+p}, F) = 0` for `q > 0` and
//! `-n <= p <= 0`; the objects `R^(-p) E_{-m+p}` form the right dual basis
//! of the thread `sigma_{-m-n}`. Regularity is an up-set in `m`, which the
//! searches exploit.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use crate::arith::Iv;
use crate::cohomology::{Engine, RankValue};
use crate::error::Error;
use crate::k0::K0Vector;
use crate::mutation::{thread, Verdict};
use crate::sheaf::SheafExpr;
use crate::variety::VarietyKind;

/// A group `Ext^q(R^(-p) E_{-m+p}, F)` that decides (or blocks) a verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub p: i64,
    pub q: usize,
    /// The dual-basis object `R^(-p) E_{-m+p}`.
    pub object: SheafExpr,
    pub rank: RankValue,
}

/// Answer of an `m`-regularity test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MRegularity {
    Yes,
    /// Every group known to be non-zero, in `(p descending from 0, q)` order.
    No(Vec<Witness>),
    /// Interval ranks that block a verdict.
    Indeterminate(Vec<Witness>),
}

impl MRegularity {
    pub fn verdict(&self) -> Verdict {
        match self {
            MRegularity::Yes => Verdict::Yes,
            MRegularity::No(_) => Verdict::No,
            MRegularity::Indeterminate(_) => Verdict::Indeterminate,
        }
    }
}

/// Outcome of a threshold search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RegValue {
    /// Certified by a regular value `m` and a non-regular `m - 1`.
    Exact(i64),
    /// The threshold lies in `[lo, hi]`; interval ranks block the rest.
    Indeterminate { lo: i64, hi: i64 },
    /// Still regular at the bottom of the search window.
    NotFoundBelow(i64),
}

impl RegValue {
    pub fn exact(&self) -> Option<i64> {
        match self {
            RegValue::Exact(m) => Some(*m),
            _ => None,
        }
    }
}

/// Result of `reg_sigma`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularityReport {
    pub sheaf: SheafExpr,
    pub value: RegValue,
    /// `lambda = floor(-m / (n+1))` and `r = -m - lambda (n+1)` for exact `m`.
    pub lambda: Option<i64>,
    pub remainder: Option<i64>,
    /// For exact `m`, the non-vanishing groups at `m - 1`.
    pub witnesses: Vec<Witness>,
}

/// One `E_1^{pq}` entry: `rank` copies of `factor`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct E1Entry {
    pub p: i64,
    pub q: usize,
    pub rank: RankValue,
    pub factor: SheafExpr,
}

/// An `E_1` page over `-n <= p <= 0`; `0 <= q <= n` for the Beilinson type
/// and `0 <= q <= 2n` for the Eilenberg-Moore type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct E1Grid {
    pub thread_index: i64,
    pub sheaf: SheafExpr,
    /// The second argument `G` of the Eilenberg-Moore type.
    pub source: Option<SheafExpr>,
    /// Row-major in `p` ascending, then `q` ascending.
    pub entries: Vec<E1Entry>,
}

impl E1Grid {
    pub fn is_exact(&self) -> bool {
        self.entries.iter().all(|e| e.rank.is_exact())
    }

    pub fn get(&self, p: i64, q: usize) -> Option<&E1Entry> {
        self.entries.iter().find(|e| e.p == p && e.q == q)
    }

    /// `sum (-1)^{p+q} rank`, when exact.
    pub fn alternating_rank_sum(&self) -> Option<BigInt> {
        let mut s = BigInt::zero();
        for e in &self.entries {
            let r = BigInt::from(e.rank.exact()?.clone());
            if (e.p + e.q as i64).rem_euclid(2) == 0 {
                s += r;
            } else {
                s -= r;
            }
        }
        Some(s)
    }
}

/// A term `L_p = mult * E_{-m+p}` of the resolution
/// `0 -> L_{-n} -> ... -> L_0 -> F -> 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionTerm {
    pub p: i64,
    pub mult: BigUint,
    pub sheaf: SheafExpr,
}

/// Both regularities of a sheaf on `Q_n` and the bounds relating them:
/// `floor(n Reg / (n+1)) <= Reg^CM(i_* F) <= floor(n Reg / (n+1)) + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadricComparison {
    pub sheaf: SheafExpr,
    pub reg_sigma: i64,
    pub reg_cm: i64,
    pub lower: i64,
    pub upper: i64,
    pub holds: bool,
}

/// Threshold search over an up-set: outward doubling from `m0` until a
/// regular value appears, doubling downwards until a non-regular one does,
/// then bisection; a linear scan takes over when an interval blocks the
/// bisection.
fn threshold_search<P>(m0: i64, width: u32, mut test: P) -> Result<RegValue, Error>
where
    P: FnMut(i64) -> Result<Verdict, Error>,
{
    let width = width.max(1) as i64;
    let (bottom, top) = (m0 - width, m0 + width);
    // A regular value.
    let mut hi = m0;
    let mut step = 1;
    while test(hi)? != Verdict::Yes {
        if hi >= top {
            return Err(Error::SearchExhausted { from: m0, to: top });
        }
        hi = (m0 + step).min(top);
        step *= 2;
    }
    // A non-regular value below it.
    let mut lo;
    let mut step = 1;
    loop {
        if hi <= bottom {
            return Ok(RegValue::NotFoundBelow(bottom));
        }
        let m = (hi - step).max(bottom);
        match test(m)? {
            Verdict::Yes => hi = m,
            Verdict::No => {
                lo = m;
                break;
            }
            Verdict::Indeterminate => {
                if m <= bottom {
                    return Ok(RegValue::Indeterminate { lo: bottom, hi });
                }
                step *= 2;
                continue;
            }
        }
        step *= 2;
    }
    // Bisection.
    let mut blocked = false;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        match test(mid)? {
            Verdict::Yes => hi = mid,
            Verdict::No => lo = mid,
            Verdict::Indeterminate => {
                blocked = true;
                break;
            }
        }
    }
    if blocked {
        let mut m = hi - 1;
        while m > lo {
            match test(m)? {
                Verdict::Yes => hi = m,
                Verdict::No => {
                    lo = m;
                    break;
                }
                Verdict::Indeterminate => {}
            }
            m -= 1;
        }
    }
    if hi - lo == 1 {
        Ok(RegValue::Exact(hi))
    } else {
        Ok(RegValue::Indeterminate { lo: lo + 1, hi })
    }
}

impl Engine {
    fn default_width(&self) -> u32 {
        6 * (self.variety().dim() + 1)
    }

    fn thread_index_for(&self, m: i64) -> Result<i64, Error> {
        m.checked_neg()
            .and_then(|x| x.checked_sub(self.variety().dim() as i64))
            .ok_or_else(|| Error::Overflow(format!("m = {}", m)))
    }

    /// The objects `R^(-p) E_{i+n+p}`, `p = 0, -1, ..., -n` (index `k = -p`),
    /// and the thread `sigma_i` itself.
    fn dual_and_thread(&self, i: i64) -> Result<(Vec<SheafExpr>, Vec<SheafExpr>), Error> {
        let th = thread(self.variety(), i)?;
        let d = self.right_dual_basis(&th)?;
        Ok((d.members, th.members))
    }

    /// Is `F` `m`-regular with respect to the standard collection?
    pub fn is_m_regular(&self, f: &SheafExpr, m: i64) -> Result<MRegularity, Error> {
        let (d, _) = self.dual_and_thread(self.thread_index_for(m)?)?;
        let mut no = Vec::new();
        let mut blocked = Vec::new();
        for (k, obj) in d.iter().enumerate() {
            let t = self.ext_table(obj, f)?;
            for (q, r) in t.ranks.iter().enumerate().skip(1) {
                let w = || Witness { p: -(k as i64), q, object: obj.clone(), rank: r.clone() };
                if r.is_nonzero() {
                    no.push(w());
                } else if !r.is_zero() {
                    blocked.push(w());
                }
            }
        }
        Ok(if !no.is_empty() {
            MRegularity::No(no)
        } else if !blocked.is_empty() {
            MRegularity::Indeterminate(blocked)
        } else {
            MRegularity::Yes
        })
    }

    /// `Reg_sigma(F)`: the least `m` for which `F` is `m`-regular, searched
    /// within `max_width` (default `6(n+1)`) of `-(minimal twist of F)`.
    pub fn reg_sigma(&self, f: &SheafExpr, max_width: Option<u32>) -> Result<RegularityReport, Error> {
        let width = max_width.unwrap_or_else(|| self.default_width());
        let m0 = -f.min_twist().unwrap_or(0);
        let value = threshold_search(m0, width, |m| Ok(self.is_m_regular(f, m)?.verdict()))?;
        let n1 = self.variety().dim() as i64 + 1;
        let (lambda, remainder, witnesses) = match value {
            RegValue::Exact(m) => {
                let w = match self.is_m_regular(f, m - 1)? {
                    MRegularity::No(w) => w,
                    _ => Vec::new(),
                };
                (Some((-m).div_euclid(n1)), Some((-m).rem_euclid(n1)), w)
            }
            _ => (None, None, Vec::new()),
        };
        Ok(RegularityReport { sheaf: f.clone(), value, lambda, remainder, witnesses })
    }

    fn cm_test(&self, f: &SheafExpr, m: i64) -> Result<Verdict, Error> {
        let n = self.variety().dim() as i64;
        let mut verdict = Verdict::Yes;
        for i in 1..=n {
            let t = self.cohomology_table(&f.twist(m - i))?;
            let r = &t.ranks[i as usize];
            if r.is_nonzero() {
                return Ok(Verdict::No);
            }
            if !r.is_zero() {
                verdict = Verdict::Indeterminate;
            }
        }
        Ok(verdict)
    }

    /// Castelnuovo-Mumford regularity of a sheaf on `P^n`: the least `m`
    /// with `H^i(F(m-i)) = 0` for all `i > 0`.
    pub fn cm_regularity(&self, f: &SheafExpr, max_width: Option<u32>) -> Result<RegValue, Error> {
        if self.variety().kind() != VarietyKind::ProjectiveSpace {
            return Err(Error::WrongVariety("Castelnuovo-Mumford regularity needs a projective space"));
        }
        self.check_variety(f)?;
        let width = max_width.unwrap_or_else(|| self.default_width());
        threshold_search(-f.min_twist().unwrap_or(0), width, |m| self.cm_test(f, m))
    }

    /// Castelnuovo-Mumford regularity of `i_* F` on `P^{n+1}` for `F` on
    /// `Q_n`; `H^q(P^{n+1}, i_* F(t)) = H^q(Q_n, F(t))` and the top degree
    /// vanishes, so only `1 <= i <= n` matter.
    pub fn cm_regularity_pushforward(&self, f: &SheafExpr, max_width: Option<u32>) -> Result<RegValue, Error> {
        if self.variety().kind() != VarietyKind::OddQuadric {
            return Err(Error::WrongVariety("pushforward regularity needs an odd quadric"));
        }
        self.check_variety(f)?;
        let width = max_width.unwrap_or_else(|| self.default_width());
        threshold_search(-f.min_twist().unwrap_or(0), width, |m| self.cm_test(f, m))
    }

    fn check_variety(&self, f: &SheafExpr) -> Result<(), Error> {
        if f.variety() == self.variety() {
            Ok(())
        } else {
            Err(Error::VarietyMismatch)
        }
    }

    /// `E_1^{pq} = Ext^q(R^(-p) E_{i+n+p}, F) (x) E_{i+p+n}`.
    ///
    /// When every rank is exact the grid is checked against
    /// `sum (-1)^{p+q} rank [E_{i+p+n}] = [F]`, which holds for every `i`.
    pub fn beilinson_e1(&self, i: i64, f: &SheafExpr) -> Result<E1Grid, Error> {
        self.check_variety(f)?;
        let n = self.variety().dim() as i64;
        let (d, th) = self.dual_and_thread(i)?;
        let mut entries = Vec::new();
        for p in -n..=0 {
            let k = (-p) as usize;
            let factor = th[(n + p) as usize].clone();
            let t = self.ext_table(&d[k], f)?;
            for (q, rank) in t.ranks.into_iter().enumerate() {
                entries.push(E1Entry { p, q, rank, factor: factor.clone() });
            }
        }
        let grid = E1Grid { thread_index: i, sheaf: f.clone(), source: None, entries };
        if let Some(sum) = self.grid_k0_sum(&grid)? {
            if sum != self.k0_class(f)? {
                return Err(Error::InternalInconsistency(format!(
                    "E1 grid of {} on thread {} sums to {}",
                    f, i, sum
                )));
            }
        }
        Ok(grid)
    }

    /// `sum (-1)^{p+q} rank [factor]` of an exact grid.
    pub fn grid_k0_sum(&self, g: &E1Grid) -> Result<Option<K0Vector>, Error> {
        let mut acc = K0Vector::zero(self.variety().dim() as usize + 1);
        for e in &g.entries {
            let Some(r) = e.rank.exact() else { return Ok(None) };
            if r.is_zero() {
                continue;
            }
            let mut c = BigInt::from(r.clone());
            if (e.p + e.q as i64).rem_euclid(2) != 0 {
                c = -c;
            }
            acc = &acc + &self.k0_class(&e.factor)?.scale(&c);
        }
        Ok(Some(acc))
    }

    /// `E_1^{pq} = sum_{a+b=q} Ext^a(R^(-p) E_{i+n+p}, F) (x) Ext^b(G, E_{i+p+n})`
    /// for `0 <= q <= 2n`. When exact, `sum (-1)^{p+q} rank = chi(G, F)`
    /// for every `i`.
    pub fn em_e1(&self, i: i64, f: &SheafExpr, g: &SheafExpr) -> Result<E1Grid, Error> {
        self.check_variety(f)?;
        self.check_variety(g)?;
        let n = self.variety().dim() as i64;
        let (d, th) = self.dual_and_thread(i)?;
        let mut entries = Vec::new();
        for p in -n..=0 {
            let k = (-p) as usize;
            let factor = th[(n + p) as usize].clone();
            let left = self.ext_entry(&d[k], f)?.h;
            let right = self.ext_entry(g, &factor)?.h;
            for q in 0..=(2 * n) as usize {
                let mut acc = Iv::zero();
                for a in 0..=n as usize {
                    if q >= a && q - a <= n as usize {
                        acc = acc.add(&left[a].mul(&right[q - a]));
                    }
                }
                entries.push(E1Entry { p, q, rank: RankValue::from_iv(&acc), factor: factor.clone() });
            }
        }
        let grid = E1Grid { thread_index: i, sheaf: f.clone(), source: Some(g.clone()), entries };
        if let Some(sum) = grid.alternating_rank_sum() {
            let chi = self.euler_chi(g, f)?;
            if sum != chi {
                return Err(Error::InternalInconsistency(format!(
                    "Eilenberg-Moore grid sums to {}, chi = {}",
                    sum, chi
                )));
            }
        }
        Ok(grid)
    }

    /// The resolution `0 -> L_{-n} -> ... -> L_0 -> F -> 0` of an
    /// `m`-regular `F`, with `L_p = H^0((R^(-p) E_{-m+p})^* (x) F) (x) E_{-m+p}`;
    /// returned in the order `p = -n, ..., 0` and checked in `K_0`.
    pub fn resolution_terms(&self, f: &SheafExpr, m: i64) -> Result<Vec<ResolutionTerm>, Error> {
        match self.is_m_regular(f, m)? {
            MRegularity::Yes => {}
            MRegularity::No(_) => return Err(Error::NotMRegular(m)),
            MRegularity::Indeterminate(_) => {
                return Err(Error::Indeterminate(format!("{}-regularity of {}", m, f)))
            }
        }
        let n = self.variety().dim() as i64;
        let (d, th) = self.dual_and_thread(self.thread_index_for(m)?)?;
        let mut terms = Vec::new();
        let mut acc = K0Vector::zero(n as usize + 1);
        for p in -n..=0 {
            let k = (-p) as usize;
            let t = self.ext_table(&d[k], f)?;
            let mult = t.ranks[0]
                .exact()
                .ok_or_else(|| Error::Indeterminate(format!("multiplicity of L_{}", p)))?
                .clone();
            let sheaf = th[(n + p) as usize].clone();
            let mut c = BigInt::from(mult.clone());
            if p.rem_euclid(2) != 0 {
                c = -c;
            }
            acc = &acc + &self.k0_class(&sheaf)?.scale(&c);
            terms.push(ResolutionTerm { p, mult, sheaf });
        }
        if acc != self.k0_class(f)? {
            return Err(Error::InternalInconsistency(format!("resolution of {} sums to {}", f, acc)));
        }
        Ok(terms)
    }

    /// `Reg_sigma(F)` against `Reg^CM(i_* F)` on a quadric.
    pub fn compare_quadric_regularity(
        &self,
        f: &SheafExpr,
        max_width: Option<u32>,
    ) -> Result<QuadricComparison, Error> {
        if self.variety().kind() != VarietyKind::OddQuadric {
            return Err(Error::WrongVariety("the comparison needs an odd quadric"));
        }
        let rs = self.reg_sigma(f, max_width)?.value;
        let rc = self.cm_regularity_pushforward(f, max_width)?;
        let (Some(reg_sigma), Some(reg_cm)) = (rs.exact(), rc.exact()) else {
            return Err(Error::Indeterminate(format!(
                "regularities of {}: {:?} and {:?}",
                f, rs, rc
            )));
        };
        let n = self.variety().dim() as i64;
        let lower = (n * reg_sigma).div_euclid(n + 1);
        let upper = lower + 1;
        Ok(QuadricComparison {
            sheaf: f.clone(),
            reg_sigma,
            reg_cm,
            lower,
            upper,
            holds: lower <= reg_cm && reg_cm <= upper,
        })
    }
}

/// The default search width `6(n+1)` for a variety of dimension `n`.
pub fn default_max_width(n: u32) -> u32 {
    6 * (n + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_sheaf_expr;
    use crate::variety::Variety;

    fn setup(v: &str) -> (Engine, Variety) {
        let v: Variety = v.parse().unwrap();
        (Engine::new(v), v)
    }

    #[test]
    fn search_on_a_step_function() {
        for t in [-9, 0, 4, 13] {
            let r = threshold_search(0, 20, |m| Ok(if m >= t { Verdict::Yes } else { Verdict::No })).unwrap();
            assert_eq!(r, RegValue::Exact(t));
        }
        let r = threshold_search(0, 5, |_| Ok(Verdict::Yes)).unwrap();
        assert_eq!(r, RegValue::NotFoundBelow(-5));
        let r = threshold_search(0, 5, |_| Ok(Verdict::No));
        assert_eq!(r, Err(Error::SearchExhausted { from: 0, to: 5 }));
        let r = threshold_search(0, 20, |m| {
            Ok(match m {
                m if m >= 3 => Verdict::Yes,
                1 | 2 => Verdict::Indeterminate,
                _ => Verdict::No,
            })
        })
        .unwrap();
        assert_eq!(r, RegValue::Indeterminate { lo: 1, hi: 3 });
    }

    #[test]
    fn line_bundles_on_projective_space() {
        let (e, v) = setup("P2");
        for r in -3..=3 {
            let f = parse_sheaf_expr(&format!("O({})", r), v).unwrap();
            assert_eq!(e.reg_sigma(&f, None).unwrap().value, RegValue::Exact(-r));
            assert_eq!(e.cm_regularity(&f, None).unwrap(), RegValue::Exact(-r));
        }
    }

    #[test]
    fn exceptional_object_witness() {
        let (e, v) = setup("Q3");
        let f = parse_sheaf_expr("O(1)", v).unwrap();
        let rep = e.reg_sigma(&f, None).unwrap();
        assert_eq!(rep.value, RegValue::Exact(-1));
        let w = &rep.witnesses[0];
        assert_eq!((w.p, w.q), (-1, 1));
        assert_eq!(w.rank, RankValue::Exact(1u32.into()));
    }

    #[test]
    fn resolution_of_regular_line_bundle() {
        let (e, v) = setup("P2");
        let f = parse_sheaf_expr("O(-1)", v).unwrap();
        let terms = e.resolution_terms(&f, 1).unwrap();
        let mults: Vec<u32> = terms.iter().map(|t| u32::try_from(&t.mult).unwrap()).collect();
        assert_eq!(mults, [0, 0, 1]);
        assert_eq!(e.resolution_terms(&f, 0), Err(Error::NotMRegular(0)));
    }

    #[test]
    fn grids_for_exceptional_object() {
        let (e, v) = setup("Q3");
        let f = crate::mutation::helix_element(v, 3).unwrap();
        let g = e.beilinson_e1(0, &f).unwrap();
        let nz: Vec<_> = g.entries.iter().filter(|x| !x.rank.is_zero()).collect();
        assert_eq!(nz.len(), 1);
        assert_eq!((nz[0].p, nz[0].q), (0, 0));
        let o = parse_sheaf_expr("O", v).unwrap();
        let em = e.em_e1(0, &f, &o).unwrap();
        assert_eq!(em.alternating_rank_sum(), Some(e.euler_chi(&o, &f).unwrap()));
    }
}
