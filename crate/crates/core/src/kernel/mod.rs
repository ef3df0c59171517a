//! Explicit derivation trees.
//!
//! Two dialects share the same shape: full ECC trees ([`EccDerivation`]),
//! which the [`verify`] function checks rule by rule, and the syntax-directed
//! dialect produced by inference ([`MinusDerivation`]), which replaces
//! cumulativity by side conditions on formation/application/pairing and by
//! explicit conversion steps that carry their own ECC typing derivation.
//! [`f_transform`] maps the latter onto the former.

mod elab;
mod verify;

use std::fmt;

use crate::term::{Judgment, Term};

pub use elab::{
    derive_judgment, f_transform, mk_universe_derivation, principal_of, trace_to_derivation,
    Elaborator,
};
pub use verify::{verify, VerifyError};

/// Rules of full ECC. `Cum` is the cumulativity rule `(≼)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EccRule {
    Ax,
    C,
    T,
    Var,
    Pi1,
    Pi2,
    Sigma,
    Lam,
    App,
    Pair,
    Proj1,
    Proj2,
    Cum,
}

impl EccRule {
    pub const ALL: [EccRule; 13] = [
        EccRule::Ax,
        EccRule::C,
        EccRule::T,
        EccRule::Var,
        EccRule::Pi1,
        EccRule::Pi2,
        EccRule::Sigma,
        EccRule::Lam,
        EccRule::App,
        EccRule::Pair,
        EccRule::Proj1,
        EccRule::Proj2,
        EccRule::Cum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EccRule::Ax => "Ax",
            EccRule::C => "C",
            EccRule::T => "T",
            EccRule::Var => "var",
            EccRule::Pi1 => "Pi1",
            EccRule::Pi2 => "Pi2",
            EccRule::Sigma => "Sigma",
            EccRule::Lam => "Lam",
            EccRule::App => "App",
            EccRule::Pair => "Pair",
            EccRule::Proj1 => "Proj1",
            EccRule::Proj2 => "Proj2",
            EccRule::Cum => "Cum",
        }
    }

    pub fn from_name(s: &str) -> Option<EccRule> {
        EccRule::ALL.into_iter().find(|r| r.name() == s)
    }

    pub fn arity(self) -> usize {
        match self {
            EccRule::Ax => 0,
            EccRule::C
            | EccRule::T
            | EccRule::Var
            | EccRule::Pi1
            | EccRule::Lam
            | EccRule::Proj1
            | EccRule::Proj2 => 1,
            EccRule::Pi2 | EccRule::Sigma | EccRule::App | EccRule::Cum => 2,
            EccRule::Pair => 3,
        }
    }
}

impl fmt::Display for EccRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Rule-specific data of an ECC node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EccSide {
    None,
    /// The universe index of `(C)`, `(T)`, `(Π2)`, `(Σ)` and `(pair)`.
    Level(u32),
    /// `lower ≼ upper` for `(≼)`.
    Cum { lower: Term, upper: Term },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EccDerivation {
    pub rule: EccRule,
    pub conclusion: Judgment,
    pub side: EccSide,
    pub premises: Vec<EccDerivation>,
}

impl EccDerivation {
    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(|p| p.size()).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.premises.iter().map(|p| p.depth()).max().unwrap_or(0)
    }

    /// Pre-order traversal.
    pub fn nodes(&self) -> Vec<&EccDerivation> {
        let mut out = vec![self];
        for p in &self.premises {
            out.extend(p.nodes());
        }
        out
    }
}

/// Rules of the syntax-directed dialect. `Pi2`, `Sigma`, `App` and `Pair`
/// are the primed variants; `ConvRho` is the explicit conversion step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MinusRule {
    Ax,
    C,
    T,
    Var,
    Pi1,
    Pi2,
    Sigma,
    Lam,
    App,
    Pair,
    Proj1,
    Proj2,
    ConvRho,
}

impl MinusRule {
    pub fn name(self) -> &'static str {
        match self {
            MinusRule::Ax => "Ax",
            MinusRule::C => "C",
            MinusRule::T => "T",
            MinusRule::Var => "var",
            MinusRule::Pi1 => "Pi1",
            MinusRule::Pi2 => "Pi2'",
            MinusRule::Sigma => "Sigma'",
            MinusRule::Lam => "Lam",
            MinusRule::App => "App'",
            MinusRule::Pair => "Pair'",
            MinusRule::Proj1 => "Proj1",
            MinusRule::Proj2 => "Proj2",
            MinusRule::ConvRho => "ConvRho",
        }
    }
}

impl fmt::Display for MinusRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Rule-specific data of a syntax-directed node. Universe levels count
/// `Prop` as -1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MinusSide {
    None,
    /// Level of the premise of `(C)`, or of the subject of `(T)`.
    Level(i64),
    /// `l = max{j, k, 0}` for `(Π2')`/`(Σ')`.
    Formation { j: i64, k: i64, l: u32 },
    /// `A' ≼ A` for `(app')`.
    App { lower: Term, upper: Term },
    /// `A ≼ A'` and `C ≼ [M/x]B'` for `(pair')`, plus the level of `B'`.
    Pair {
        first: (Term, Term),
        second: (Term, Term),
        level: u32,
    },
    /// `from ≃ to`, with the ECC derivation of `Γ ⊢ to : Type` once
    /// synthesized.
    Rho {
        from: Term,
        to: Term,
        rho: Option<Box<EccDerivation>>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinusDerivation {
    pub rule: MinusRule,
    pub conclusion: Judgment,
    pub side: MinusSide,
    pub premises: Vec<MinusDerivation>,
}

impl MinusDerivation {
    pub fn nodes(&self) -> Vec<&MinusDerivation> {
        let mut out = vec![self];
        for p in &self.premises {
            out.extend(p.nodes());
        }
        out
    }

    /// Whether every conversion node carries its typing derivation.
    pub fn is_complete(&self) -> bool {
        self.nodes().iter().all(|n| match &n.side {
            MinusSide::Rho { rho, .. } => rho.is_some(),
            _ => true,
        })
    }
}
