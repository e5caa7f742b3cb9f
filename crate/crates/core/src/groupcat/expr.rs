use std::borrow::Cow;
use std::fmt;

use super::finite::FiniteGroup;
use crate::error::{Error, Result};

/// An affine algebraic group from the closed catalogue.
///
/// Build values through the constructors ([`GroupExpr::torus`],
/// [`GroupExpr::product`], ...) so that they stay normalized: rank-zero
/// tori, unipotent and general linear groups collapse to `Trivial`, and
/// products are flattened with trivial factors removed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupExpr {
    Trivial,
    Finite(FiniteGroup),
    Torus(u32),
    Unipotent(u32),
    GL(u32),
    Product(Vec<GroupExpr>),
}

impl GroupExpr {
    pub fn finite(g: FiniteGroup) -> Self {
        GroupExpr::Finite(g)
    }

    pub fn torus(rank: u32) -> Self {
        if rank == 0 { GroupExpr::Trivial } else { GroupExpr::Torus(rank) }
    }

    pub fn unipotent(dim: u32) -> Self {
        if dim == 0 { GroupExpr::Trivial } else { GroupExpr::Unipotent(dim) }
    }

    pub fn gl(n: u32) -> Self {
        if n == 0 { GroupExpr::Trivial } else { GroupExpr::GL(n) }
    }

    pub fn product(factors: Vec<GroupExpr>) -> Self {
        let mut flat = Vec::new();
        for f in factors {
            match f.normalized() {
                GroupExpr::Trivial => {}
                GroupExpr::Product(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => GroupExpr::Trivial,
            1 => flat.pop().unwrap(),
            _ => GroupExpr::Product(flat),
        }
    }

    pub fn normalized(self) -> Self {
        match self {
            GroupExpr::Torus(r) => Self::torus(r),
            GroupExpr::Unipotent(d) => Self::unipotent(d),
            GroupExpr::GL(n) => Self::gl(n),
            GroupExpr::Product(fs) => Self::product(fs),
            other => other,
        }
    }

    /// χ of the underlying variety.
    pub fn euler_char(&self) -> i64 {
        match self {
            GroupExpr::Trivial | GroupExpr::Unipotent(_) => 1,
            GroupExpr::Finite(g) => g.order() as i64,
            GroupExpr::Torus(r) | GroupExpr::GL(r) => i64::from(*r == 0),
            GroupExpr::Product(fs) => fs.iter().map(GroupExpr::euler_char).product(),
        }
    }

    /// χ of the coarse space of `[G / Ad(G)]`. Finite groups give their class
    /// count; connected abelian groups act trivially on themselves.
    pub fn orbifold_weight(&self) -> Result<i64> {
        match self {
            GroupExpr::Finite(g) => Ok(g.conjugacy_classes().len() as i64),
            GroupExpr::GL(n) if *n >= 1 => {
                Err(Error::UnsupportedGroup(format!("orbifold weight of GL({n})")))
            }
            GroupExpr::Product(fs) => fs.iter().map(GroupExpr::orbifold_weight).product(),
            other => Ok(other.euler_char()),
        }
    }

    /// The group as a finite group when it is one. Products of finite
    /// groups are realized as direct products.
    pub fn as_finite(&self) -> Option<Cow<'_, FiniteGroup>> {
        match self {
            GroupExpr::Trivial => Some(Cow::Owned(FiniteGroup::trivial())),
            GroupExpr::Finite(g) => Some(Cow::Borrowed(g)),
            GroupExpr::Product(fs) => {
                let mut acc: Option<FiniteGroup> = None;
                for f in fs {
                    let g = f.as_finite()?;
                    acc = Some(match acc {
                        None => g.into_owned(),
                        Some(a) => a.direct_product(&g),
                    });
                }
                acc.map(Cow::Owned)
            }
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            GroupExpr::Trivial | GroupExpr::Finite(_) => true,
            GroupExpr::Product(fs) => fs.iter().all(GroupExpr::is_finite),
            _ => false,
        }
    }

    /// Whether `g` is (structurally) this group, treating `Trivial` as any
    /// one-element group.
    pub fn matches_finite(&self, g: &FiniteGroup) -> bool {
        match self {
            GroupExpr::Trivial => g.order() == 1,
            GroupExpr::Finite(h) => h == g,
            _ => self.as_finite().is_some_and(|h| *h == *g),
        }
    }
}

impl fmt::Display for GroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupExpr::Trivial => write!(f, "1"),
            GroupExpr::Finite(g) => write!(f, "finite[{}]", g.order()),
            GroupExpr::Torus(r) => write!(f, "Gm^{r}"),
            GroupExpr::Unipotent(d) => write!(f, "U{d}"),
            GroupExpr::GL(n) => write!(f, "GL({n})"),
            GroupExpr::Product(fs) => {
                let parts: Vec<String> = fs.iter().map(|g| g.to_string()).collect();
                write!(f, "{}", parts.join(" x "))
            }
        }
    }
}
