//! The cumulativity preorder `≼`, its level-indexed approximations `≼ᵢ`,
//! and the strict part `≺`.
//!
//! Universes are ordered `Prop ≺ Type0 ≺ Type1 ≺ …`. Π is invariant (up to
//! conversion) in its domain and covariant in its codomain; Σ is covariant
//! in both components. Every clause works on weak-head normal forms, so
//! comparisons of non-normalizing terms succeed as long as the heads and
//! the alpha-equality shortcut decide them.

use crate::reduce::{conv, normalize, whnf, Fuel, FuelExhausted};
use crate::term::{alpha_eq, open_pair, Term};

/// A fully specified cumulativity question.
#[derive(Debug, Clone)]
pub struct CumulQuery {
    pub left: Term,
    pub right: Term,
    /// `None` asks about `≼` itself.
    pub level: Option<usize>,
    pub strict: bool,
}

impl CumulQuery {
    pub fn run(&self, fuel: &mut Fuel) -> Result<bool, FuelExhausted> {
        match (self.level, self.strict) {
            (None, false) => cum_le(&self.left, &self.right, fuel),
            (None, true) => cum_lt(&self.left, &self.right, fuel),
            (Some(i), false) => cum_le_at_level(&self.left, &self.right, i, fuel),
            (Some(i), true) => cum_lt_at_level(&self.left, &self.right, i, fuel),
        }
    }
}

fn universe_le(a: &Term, b: &Term) -> Option<bool> {
    match (a.universe_level(), b.universe_level()) {
        (Some(i), Some(j)) => Some(i <= j),
        _ => None,
    }
}

/// `a ≼ᵢ b`, by literal unfolding of the level-indexed definition.
pub fn cum_le_at_level(a: &Term, b: &Term, level: usize, fuel: &mut Fuel) -> Result<bool, FuelExhausted> {
    if alpha_eq(a, b) {
        return Ok(true);
    }
    let wa = whnf(a, fuel)?;
    let wb = whnf(b, fuel)?;
    if level == 0 {
        if let Some(le) = universe_le(&wa, &wb) {
            if le {
                return Ok(true);
            }
        }
        return conv(&wa, &wb, fuel);
    }
    if cum_le_at_level(&wa, &wb, level - 1, fuel)? {
        return Ok(true);
    }
    match (&wa, &wb) {
        (Term::Pi(x, a1, b1), Term::Pi(y, a2, b2)) => {
            if !conv(a1, a2, fuel)? {
                return Ok(false);
            }
            let (_, b1, b2) = open_pair(x, b1, y, b2);
            cum_le_at_level(&b1, &b2, level - 1, fuel)
        }
        (Term::Sigma(x, a1, b1), Term::Sigma(y, a2, b2)) => {
            if !cum_le_at_level(a1, a2, level - 1, fuel)? {
                return Ok(false);
            }
            let (_, b1, b2) = open_pair(x, b1, y, b2);
            cum_le_at_level(&b1, &b2, level - 1, fuel)
        }
        _ => Ok(false),
    }
}

/// `a ≺ᵢ b`: `a ≼ᵢ b` and `a ≄ b`.
pub fn cum_lt_at_level(a: &Term, b: &Term, level: usize, fuel: &mut Fuel) -> Result<bool, FuelExhausted> {
    Ok(cum_le_at_level(a, b, level, fuel)? && !conv(a, b, fuel)?)
}

/// `a ≼ b`, decided structurally on weak-head normal forms.
pub fn cum_le(a: &Term, b: &Term, fuel: &mut Fuel) -> Result<bool, FuelExhausted> {
    stacker::maybe_grow(32 * 1024, 1024 * 1024, || {
        if alpha_eq(a, b) {
            return Ok(true);
        }
        let wa = whnf(a, fuel)?;
        let wb = whnf(b, fuel)?;
        if let Some(le) = universe_le(&wa, &wb) {
            return Ok(le);
        }
        match (&wa, &wb) {
            (Term::Pi(x, a1, b1), Term::Pi(y, a2, b2)) => {
                if !conv(a1, a2, fuel)? {
                    return Ok(false);
                }
                let (_, b1, b2) = open_pair(x, b1, y, b2);
                cum_le(&b1, &b2, fuel)
            }
            (Term::Sigma(x, a1, b1), Term::Sigma(y, a2, b2)) => {
                if !cum_le(a1, a2, fuel)? {
                    return Ok(false);
                }
                let (_, b1, b2) = open_pair(x, b1, y, b2);
                cum_le(&b1, &b2, fuel)
            }
            (Term::Pi(..), _)
            | (_, Term::Pi(..))
            | (Term::Sigma(..), _)
            | (_, Term::Sigma(..))
            | (Term::Prop | Term::Type(_), _)
            | (_, Term::Prop | Term::Type(_)) => Ok(false),
            _ => conv(&wa, &wb, fuel),
        }
    })
}

/// `a ≺ b`: `a ≼ b` and `a ≄ b`.
///
/// When both sides share a Π or Σ head the strictness is located in a
/// component instead of comparing normal forms, so chains of terms that
/// never normalize can still be compared.
pub fn cum_lt(a: &Term, b: &Term, fuel: &mut Fuel) -> Result<bool, FuelExhausted> {
    stacker::maybe_grow(32 * 1024, 1024 * 1024, || {
        if alpha_eq(a, b) {
            return Ok(false);
        }
        let wa = whnf(a, fuel)?;
        let wb = whnf(b, fuel)?;
        if let (Some(i), Some(j)) = (wa.universe_level(), wb.universe_level()) {
            return Ok(i < j);
        }
        match (&wa, &wb) {
            (Term::Pi(x, a1, b1), Term::Pi(y, a2, b2)) => {
                if !conv(a1, a2, fuel)? {
                    return Ok(false);
                }
                let (_, b1, b2) = open_pair(x, b1, y, b2);
                cum_lt(&b1, &b2, fuel)
            }
            (Term::Sigma(x, a1, b1), Term::Sigma(y, a2, b2)) => {
                let (_, b1, b2) = open_pair(x, b1, y, b2);
                if !cum_le(a1, a2, fuel)? || !cum_le(&b1, &b2, fuel)? {
                    return Ok(false);
                }
                Ok(cum_lt(a1, a2, fuel)? || cum_lt(&b1, &b2, fuel)?)
            }
            // on any other heads ≼ collapses to ≃
            _ => Ok(false),
        }
    })
}

/// The least `i` with `a ≼ᵢ b`, or `None` when `a ⋠ b`.
///
/// The search is bounded by the Π/Σ nesting depth of the normal forms,
/// which is enough for the structural clauses to be reached.
pub fn min_level(a: &Term, b: &Term, fuel: &mut Fuel) -> Result<Option<usize>, FuelExhausted> {
    if !cum_le(a, b, fuel)? {
        return Ok(None);
    }
    let bound = if alpha_eq(a, b) {
        0
    } else {
        let na = normalize(a, fuel)?;
        let nb = normalize(b, fuel)?;
        na.binder_depth().max(nb.binder_depth())
    };
    for i in 0..=bound {
        if cum_le_at_level(a, b, i, fuel)? {
            return Ok(Some(i));
        }
    }
    Ok(None)
}
