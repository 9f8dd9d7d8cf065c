//! The ambient varieties: projective spaces and odd-dimensional quadrics.

use alloc::format;
use core::fmt;

use crate::error::Error;

/// Largest supported dimension; keeps ranks, multiplicities and recursion
/// sizes comfortably bounded.
pub const MAX_DIM: u32 = 31;

/// Which family a variety belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarietyKind {
    /// Projective space `P^n`.
    ProjectiveSpace,
    /// A smooth quadric hypersurface `Q_n` in `P^{n+1}`, `n` odd.
    OddQuadric,
}

/// A variety with a standard geometric collection.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Variety {
    kind: VarietyKind,
    dim: u32,
}

impl Variety {
    /// Projective space of dimension `n >= 1`.
    pub fn projective(n: u32) -> Result<Variety, Error> {
        if n == 0 || n > MAX_DIM {
            return Err(Error::InvalidVariety(format!("P{} (need 1 <= n <= {})", n, MAX_DIM)));
        }
        Ok(Variety { kind: VarietyKind::ProjectiveSpace, dim: n })
    }

    /// Odd quadric of dimension `n >= 3`, `n` odd.
    pub fn quadric(n: u32) -> Result<Variety, Error> {
        if n < 3 || n.is_multiple_of(2) || n > MAX_DIM {
            return Err(Error::InvalidVariety(format!(
                "Q{} (need odd 3 <= n <= {})",
                n, MAX_DIM
            )));
        }
        Ok(Variety { kind: VarietyKind::OddQuadric, dim: n })
    }

    pub fn kind(&self) -> VarietyKind {
        self.kind
    }

    pub fn is_quadric(&self) -> bool {
        self.kind == VarietyKind::OddQuadric
    }

    /// Dimension `n`.
    pub fn dim(&self) -> u32 {
        self.dim
    }

    /// Dimension of the projective space carrying the tangent/cotangent
    /// powers: `n` for `P^n`, `n + 1` for `Q_n`.
    pub fn ambient_dim(&self) -> u32 {
        match self.kind {
            VarietyKind::ProjectiveSpace => self.dim,
            VarietyKind::OddQuadric => self.dim + 1,
        }
    }

    /// Dimension of `V` in the Euler sequence of the ambient space.
    pub fn euler_space_dim(&self) -> u32 {
        self.ambient_dim() + 1
    }

    /// Degree of the canonical line bundle: `-n-1` on `P^n`, `-n` on `Q_n`.
    pub fn canonical_degree(&self) -> i64 {
        match self.kind {
            VarietyKind::ProjectiveSpace => -(self.dim as i64) - 1,
            VarietyKind::OddQuadric => -(self.dim as i64),
        }
    }

    /// `k = (n+1)/2` on a quadric: `h^0(Sigma) = 2^k` and the spinor
    /// sequence has `2^k` copies of `O`.
    pub(crate) fn spinor_k(&self) -> u32 {
        self.dim.div_ceil(2)
    }

    /// Rank of the spinor bundle, `2^((n-1)/2)`.
    pub fn spinor_rank(&self) -> u64 {
        1u64 << ((self.dim - 1) / 2)
    }
}

impl fmt::Display for Variety {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            VarietyKind::ProjectiveSpace => write!(f, "P{}", self.dim),
            VarietyKind::OddQuadric => write!(f, "Q{}", self.dim),
        }
    }
}

impl core::str::FromStr for Variety {
    type Err = Error;

    /// Parses `P<n>` or `Q<n>`.
    fn from_str(s: &str) -> Result<Variety, Error> {
        let s = s.trim();
        let mut chars = s.chars();
        let head = chars.next();
        let n: u32 = chars
            .as_str()
            .parse()
            .map_err(|_| Error::InvalidVariety(format!("{:?}", s)))?;
        match head {
            Some('P') | Some('p') => Variety::projective(n),
            Some('Q') | Some('q') => Variety::quadric(n),
            _ => Err(Error::InvalidVariety(format!("{:?}", s))),
        }
    }
}
