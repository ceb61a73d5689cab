//! Ordered partial monoids.
//!
//! An OPM is a carrier with a partial associative product, a unit, and a
//! preorder under which the product is monotone and downward closed. Resource
//! types are indexed by OPM elements, and an element is droppable when the
//! unit is below it.
//!
//! Two instances are provided: nonempty regular languages under concatenation
//! and inclusion, and the three-point ownership monoid. They are selected by
//! name through [`OpmInstance::by_name`].

use std::fmt;

use crate::regex::{self, Regex, RegexError, DEFAULT_STATE_BUDGET};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OpmError {
    #[error(transparent)]
    Regex(#[from] RegexError),
}

pub trait Opm {
    type Elem: Clone + fmt::Debug;

    fn unit(&self) -> Self::Elem;

    /// `None` when the product is undefined.
    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Result<Option<Self::Elem>, OpmError>;

    fn leq(&self, x: &Self::Elem, y: &Self::Elem) -> Result<bool, OpmError>;

    /// The greatest `z` with `x ⊙ z ≤ y`, if any `z` qualifies.
    fn continuation(&self, x: &Self::Elem, y: &Self::Elem) -> Result<Option<Self::Elem>, OpmError>;

    fn equiv(&self, x: &Self::Elem, y: &Self::Elem) -> Result<bool, OpmError> {
        Ok(self.leq(x, y)? && self.leq(y, x)?)
    }

    /// Whether some `z` has `x ⊙ z` defined and `≤ y`.
    fn residual_exists(&self, x: &Self::Elem, y: &Self::Elem) -> Result<bool, OpmError> {
        Ok(self.continuation(x, y)?.is_some())
    }

    fn droppable(&self, x: &Self::Elem) -> Result<bool, OpmError> {
        self.leq(&self.unit(), x)
    }
}

/// Ownership states: no access, borrowed, owned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ownership {
    Eps,
    Borrow,
    Owned,
}

impl Ownership {
    pub const CARRIER: [Ownership; 3] = [Ownership::Eps, Ownership::Borrow, Ownership::Owned];
}

impl fmt::Display for Ownership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ownership::Eps => "eps",
            Ownership::Borrow => "b",
            Ownership::Owned => "*",
        })
    }
}

impl std::str::FromStr for Ownership {
    type Err = String;

    fn from_str(s: &str) -> Result<Ownership, String> {
        match s.trim() {
            "eps" => Ok(Ownership::Eps),
            "b" => Ok(Ownership::Borrow),
            "*" => Ok(Ownership::Owned),
            other => Err(format!("unknown ownership state `{other}` (expected eps, b or *)")),
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct OwnershipOpm;

impl OwnershipOpm {
    pub fn mul_table(x: Ownership, y: Ownership) -> Option<Ownership> {
        use Ownership::*;
        match (x, y) {
            (Eps, y) => Some(y),
            (Borrow, Eps | Borrow) => Some(Borrow),
            (Borrow, Owned) => Some(Owned),
            (Owned, Eps) => Some(Owned),
            (Owned, Borrow | Owned) => None,
        }
    }

    pub fn leq_table(x: Ownership, y: Ownership) -> bool {
        use Ownership::*;
        matches!((x, y), (Eps, Eps) | (Eps, Borrow) | (Borrow, Borrow) | (Owned, Owned))
    }
}

impl Opm for OwnershipOpm {
    type Elem = Ownership;

    fn unit(&self) -> Ownership {
        Ownership::Eps
    }

    fn mul(&self, x: &Ownership, y: &Ownership) -> Result<Option<Ownership>, OpmError> {
        Ok(Self::mul_table(*x, *y))
    }

    fn leq(&self, x: &Ownership, y: &Ownership) -> Result<bool, OpmError> {
        Ok(Self::leq_table(*x, *y))
    }

    /// Picks a maximal witness; ties go to the earliest in carrier order.
    fn continuation(&self, x: &Ownership, y: &Ownership) -> Result<Option<Ownership>, OpmError> {
        let witnesses: Vec<Ownership> = Ownership::CARRIER
            .into_iter()
            .filter(|&z| Self::mul_table(*x, z).is_some_and(|p| Self::leq_table(p, *y)))
            .collect();
        Ok(witnesses
            .iter()
            .copied()
            .find(|&z| {
                witnesses
                    .iter()
                    .all(|&w| !Self::leq_table(z, w) || Self::leq_table(w, z))
            }))
    }
}

/// Nonempty regular languages under concatenation, ordered by inclusion.
#[derive(Debug, Clone, Copy)]
pub struct RegexOpm {
    pub budget: usize,
}

impl Default for RegexOpm {
    fn default() -> RegexOpm {
        RegexOpm {
            budget: DEFAULT_STATE_BUDGET,
        }
    }
}

impl Opm for RegexOpm {
    type Elem = Regex;

    fn unit(&self) -> Regex {
        Regex::eps()
    }

    fn mul(&self, x: &Regex, y: &Regex) -> Result<Option<Regex>, OpmError> {
        Ok(Some(Regex::concat(x, y)))
    }

    fn leq(&self, x: &Regex, y: &Regex) -> Result<bool, OpmError> {
        Ok(regex::includes_with(y, x, self.budget)?)
    }

    fn equiv(&self, x: &Regex, y: &Regex) -> Result<bool, OpmError> {
        Ok(regex::equivalent_with(x, y, self.budget)?)
    }

    fn continuation(&self, x: &Regex, y: &Regex) -> Result<Option<Regex>, OpmError> {
        let z = regex::product_derivative_with(y, x, self.budget)?;
        Ok((!z.is_empty_language()).then_some(z))
    }
}

/// An element of whichever OPM a program was checked against.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Index {
    Regex(Regex),
    Own(Ownership),
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Regex(r) => r.fmt(f),
            Index::Own(o) => o.fmt(f),
        }
    }
}

/// The OPM instances known by name.
#[derive(Debug, Clone, Copy)]
pub enum OpmInstance {
    Regex(RegexOpm),
    Ownership(OwnershipOpm),
}

impl Default for OpmInstance {
    fn default() -> OpmInstance {
        OpmInstance::Regex(RegexOpm::default())
    }
}

impl OpmInstance {
    pub const NAMES: [&'static str; 2] = ["regex", "ownership"];

    pub fn by_name(name: &str) -> Option<OpmInstance> {
        match name {
            "regex" => Some(OpmInstance::Regex(RegexOpm::default())),
            "ownership" => Some(OpmInstance::Ownership(OwnershipOpm)),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            OpmInstance::Regex(_) => "regex",
            OpmInstance::Ownership(_) => "ownership",
        }
    }

    /// Parses the text between `{` and `}`.
    pub fn parse_index(&self, src: &str) -> Result<Index, String> {
        match self {
            OpmInstance::Regex(_) => {
                let r = regex::parse(src).map_err(|e| e.to_string())?;
                if r.is_empty_language() {
                    return Err("the empty language is not a resource index".to_string());
                }
                Ok(Index::Regex(r))
            }
            OpmInstance::Ownership(_) => src.parse().map(Index::Own),
        }
    }
}

impl Opm for OpmInstance {
    type Elem = Index;

    fn unit(&self) -> Index {
        match self {
            OpmInstance::Regex(o) => Index::Regex(o.unit()),
            OpmInstance::Ownership(o) => Index::Own(o.unit()),
        }
    }

    fn mul(&self, x: &Index, y: &Index) -> Result<Option<Index>, OpmError> {
        Ok(match (self, x, y) {
            (OpmInstance::Regex(o), Index::Regex(a), Index::Regex(b)) => o.mul(a, b)?.map(Index::Regex),
            (OpmInstance::Ownership(o), Index::Own(a), Index::Own(b)) => o.mul(a, b)?.map(Index::Own),
            _ => None,
        })
    }

    fn leq(&self, x: &Index, y: &Index) -> Result<bool, OpmError> {
        match (self, x, y) {
            (OpmInstance::Regex(o), Index::Regex(a), Index::Regex(b)) => o.leq(a, b),
            (OpmInstance::Ownership(o), Index::Own(a), Index::Own(b)) => o.leq(a, b),
            _ => Ok(false),
        }
    }

    fn equiv(&self, x: &Index, y: &Index) -> Result<bool, OpmError> {
        match (self, x, y) {
            (OpmInstance::Regex(o), Index::Regex(a), Index::Regex(b)) => o.equiv(a, b),
            (OpmInstance::Ownership(o), Index::Own(a), Index::Own(b)) => o.equiv(a, b),
            _ => Ok(false),
        }
    }

    fn continuation(&self, x: &Index, y: &Index) -> Result<Option<Index>, OpmError> {
        Ok(match (self, x, y) {
            (OpmInstance::Regex(o), Index::Regex(a), Index::Regex(b)) => {
                o.continuation(a, b)?.map(Index::Regex)
            }
            (OpmInstance::Ownership(o), Index::Own(a), Index::Own(b)) => {
                o.continuation(a, b)?.map(Index::Own)
            }
            _ => None,
        })
    }
}
