//! Exact integer helpers: binomial coefficients and the closed rank intervals
//! used by the long-exact-sequence solver.

use alloc::vec::Vec;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// Binomial coefficient `C(a, b)`, taken to be zero unless `0 <= b <= a`.
pub fn binom(a: i64, b: i64) -> BigInt {
    if b < 0 || a < 0 || a < b {
        return BigInt::zero();
    }
    let b = b.min(a - b);
    let mut acc = BigInt::one();
    for i in 0..b {
        acc *= BigInt::from(a - i);
        acc /= BigInt::from(i + 1);
    }
    acc
}

/// A closed interval `[lo, hi]` of non-negative integers; `hi = None` is
/// unbounded. Internal to the chase.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Iv {
    pub lo: BigInt,
    pub hi: Option<BigInt>,
}

impl Iv {
    pub fn exact(v: BigInt) -> Iv {
        Iv { lo: v.clone(), hi: Some(v) }
    }

    pub fn zero() -> Iv {
        Iv::exact(BigInt::zero())
    }

    pub fn unknown() -> Iv {
        Iv { lo: BigInt::zero(), hi: None }
    }

    pub fn is_exact(&self) -> bool {
        self.hi.as_ref() == Some(&self.lo)
    }

    pub fn is_zero(&self) -> bool {
        self.hi.as_ref().is_some_and(|h| h.is_zero())
    }

    pub fn add(&self, other: &Iv) -> Iv {
        Iv {
            lo: &self.lo + &other.lo,
            hi: match (&self.hi, &other.hi) {
                (Some(a), Some(b)) => Some(a + b),
                _ => None,
            },
        }
    }

    pub fn scale(&self, k: &BigInt) -> Iv {
        Iv { lo: &self.lo * k, hi: self.hi.as_ref().map(|h| h * k) }
    }

    pub fn mul(&self, other: &Iv) -> Iv {
        let hi = match (&self.hi, &other.hi) {
            (Some(a), Some(b)) => Some(a * b),
            (Some(a), None) if a.is_zero() => Some(BigInt::zero()),
            (None, Some(b)) if b.is_zero() => Some(BigInt::zero()),
            _ => None,
        };
        Iv { lo: &self.lo * &other.lo, hi }
    }

    /// Non-negative part of `self - other`.
    pub fn sub_clamped(&self, other: &Iv) -> Iv {
        let lo = match &other.hi {
            Some(h) => {
                let v = &self.lo - h;
                if v.is_negative() {
                    BigInt::zero()
                } else {
                    v
                }
            }
            None => BigInt::zero(),
        };
        let hi = self.hi.as_ref().map(|h| h - &other.lo);
        Iv { lo, hi }
    }

    /// Intersection; an empty result is an internal inconsistency.
    pub fn meet(&self, other: &Iv) -> Result<Iv, Error> {
        let lo = if self.lo >= other.lo { self.lo.clone() } else { other.lo.clone() };
        let hi = match (&self.hi, &other.hi) {
            (Some(a), Some(b)) => Some(if a <= b { a.clone() } else { b.clone() }),
            (Some(a), None) => Some(a.clone()),
            (None, Some(b)) => Some(b.clone()),
            (None, None) => None,
        };
        if let Some(h) = &hi {
            if &lo > h {
                return Err(Error::InternalInconsistency(alloc::format!(
                    "empty rank interval [{}, {}]",
                    lo,
                    h
                )));
            }
        }
        Ok(Iv { lo, hi })
    }
}

/// Solve the long exact cohomology sequence of `0 -> A -> B -> C -> 0` by
/// interval propagation.
///
/// The sequence `H^0A, H^0B, H^0C, H^1A, ...` is a path; every group splits
/// as `d_m = r_{m-1} + r_m` where `r_m` is the rank of its outgoing map.
/// Propagating bounds forwards and backwards to a fixpoint is exact for a path.
pub(crate) fn les(a: &mut [Iv], b: &mut [Iv], c: &mut [Iv]) -> Result<(), Error> {
    let n1 = a.len();
    let len = 3 * n1;
    let mut d: Vec<Iv> = Vec::with_capacity(len);
    for q in 0..n1 {
        d.push(a[q].clone());
        d.push(b[q].clone());
        d.push(c[q].clone());
    }
    let mut r: Vec<Iv> = (0..len).map(|_| Iv::unknown()).collect();
    r[len - 1] = Iv::zero();
    let zero = Iv::zero();
    for _ in 0..4 * len {
        let mut changed = false;
        for pass in 0..2 {
            for step in 0..len {
                let m = if pass == 0 { step } else { len - 1 - step };
                let rin = if m > 0 { r[m - 1].clone() } else { zero.clone() };
                let nd = d[m].meet(&rin.add(&r[m]))?;
                let nr = r[m].meet(&nd.sub_clamped(&rin))?;
                let nri = rin.meet(&nd.sub_clamped(&nr))?;
                if nd != d[m] || nr != r[m] || (m > 0 && nri != r[m - 1]) {
                    changed = true;
                }
                d[m] = nd;
                r[m] = nr;
                if m > 0 {
                    r[m - 1] = nri;
                }
            }
        }
        if !changed {
            break;
        }
    }
    for q in 0..n1 {
        a[q] = d[3 * q].clone();
        b[q] = d[3 * q + 1].clone();
        c[q] = d[3 * q + 2].clone();
    }
    Ok(())
}

/// Tighten a table using its exactly known Euler characteristic.
pub(crate) fn chi_refine(t: &mut [Iv], chi: &BigInt) -> Result<(), Error> {
    for _ in 0..3 {
        for q in 0..t.len() {
            // sign(q) * h^q = chi - sum_{r != q} sign(r) * h^r
            let mut rest_lo = BigInt::zero();
            let mut rest_hi = BigInt::zero();
            let mut lo_unbounded = false;
            let mut hi_unbounded = false;
            for (r, iv) in t.iter().enumerate() {
                if r == q {
                    continue;
                }
                if r % 2 == 0 {
                    rest_lo += &iv.lo;
                    match &iv.hi {
                        Some(h) => rest_hi += h,
                        None => hi_unbounded = true,
                    }
                } else {
                    match &iv.hi {
                        Some(h) => rest_lo -= h,
                        None => lo_unbounded = true,
                    }
                    rest_hi -= &iv.lo;
                }
            }
            let (lo, hi) = if q % 2 == 0 {
                (
                    if hi_unbounded { None } else { Some(chi - &rest_hi) },
                    if lo_unbounded { None } else { Some(chi - &rest_lo) },
                )
            } else {
                (
                    if lo_unbounded { None } else { Some(&rest_lo - chi) },
                    if hi_unbounded { None } else { Some(&rest_hi - chi) },
                )
            };
            let lo = match lo {
                Some(v) if v.is_positive() => v,
                _ => BigInt::zero(),
            };
            t[q] = t[q].meet(&Iv { lo, hi })?;
        }
    }
    Ok(())
}

/// Alternating sum of an exact list of ranks.
pub(crate) fn alternating(h: &[BigInt]) -> BigInt {
    let mut s = BigInt::zero();
    for (q, x) in h.iter().enumerate() {
        if q % 2 == 0 {
            s += x;
        } else {
            s -= x;
        }
    }
    s
}

/// Value at `t` of the polynomial of degree `< values.len()` that takes the
/// given values at `t0, t0 + 1, ...`. Exact whenever that polynomial is
/// integer-valued, since consecutive nodes give integer Lagrange weights.
pub(crate) fn interpolate(values: &[BigInt], t0: i64, t: i64) -> BigInt {
    let len = values.len();
    if t >= t0 && ((t - t0) as usize) < len {
        return values[(t - t0) as usize].clone();
    }
    let mut out = BigInt::zero();
    for (s, val) in values.iter().enumerate() {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for a in 0..len {
            if a != s {
                num *= BigInt::from(t - t0 - a as i64);
                den *= BigInt::from(s as i64 - a as i64);
            }
        }
        out += val * (num / den);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binom(5, 2), BigInt::from(10));
        assert_eq!(binom(5, 0), BigInt::from(1));
        assert_eq!(binom(3, 4), BigInt::zero());
        assert_eq!(binom(-1, 0), BigInt::zero());
        assert_eq!(binom(4, -1), BigInt::zero());
        // Exceeds 2^63.
        assert_eq!(binom(70, 35).to_string(), "112186277816662845432");
    }

    #[test]
    fn les_determines_cokernel_when_maps_are_forced() {
        // 0 -> A -> B -> C -> 0 with A = (1,0), B = (3,0): C must be (2,0).
        let mut a = [Iv::exact(1.into()), Iv::zero()];
        let mut b = [Iv::exact(3.into()), Iv::zero()];
        let mut c = [Iv::unknown(), Iv::unknown()];
        les(&mut a, &mut b, &mut c).unwrap();
        assert_eq!(c[0], Iv::exact(2.into()));
        assert_eq!(c[1], Iv::zero());
    }

    #[test]
    fn les_leaves_undetermined_connecting_map_as_interval() {
        // A = (0,1), B = 0, C = (1,0)? forced: C^0 -> A^1 iso. Use B = (1,1):
        // 0 -> 0 -> B0=1 -> C0 -> A1=1 -> B1=1 -> C1 -> 0
        let mut a = [Iv::zero(), Iv::exact(1.into())];
        let mut b = [Iv::exact(1.into()), Iv::exact(1.into())];
        let mut c = [Iv::unknown(), Iv::unknown()];
        les(&mut a, &mut b, &mut c).unwrap();
        assert_eq!(c[0].lo, BigInt::from(1));
        assert_eq!(c[0].hi, Some(BigInt::from(2)));
        // The Euler characteristic pins it down.
        chi_refine(&mut c, &BigInt::from(1)).unwrap();
        assert_eq!(c[0].lo, BigInt::from(1));
    }

    #[test]
    fn interpolation_of_binomials() {
        let vals: Vec<BigInt> = (0..4).map(|t| binom(t + 3, 3)).collect();
        assert_eq!(interpolate(&vals, 0, 40), binom(43, 3));
        assert_eq!(interpolate(&vals, 0, -1), BigInt::zero());
    }

    #[test]
    fn empty_meet_is_an_error() {
        let a = Iv::exact(1.into());
        let b = Iv::exact(2.into());
        assert!(a.meet(&b).is_err());
    }
}
