//! Stratification of normalizable terms by Π/Σ nesting, and the
//! multiplicative measure that strictly increases along `≺`.
//!
//! Both are computed on the normal form. Conversion-closed classes are not
//! finitely representable; recursing on normal forms gives the same class
//! and value because convertible terms share their normal form.

use std::fmt;

use thiserror::Error;

use crate::reduce::{normalize, Fuel, FuelExhausted};
use crate::term::Term;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StratKind {
    /// `Π₀ = Σ₀`: the normal form is not headed by Π or Σ.
    Base,
    PiHeaded,
    SigmaHeaded,
}

impl fmt::Display for StratKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StratKind::Base => "Base",
            StratKind::PiHeaded => "Pi",
            StratKind::SigmaHeaded => "Sigma",
        })
    }
}

/// The stratum of a normalizable term together with its measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StratClass {
    pub kind: StratKind,
    pub level: u64,
    pub measure: u128,
}

impl fmt::Display for StratClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.kind, self.level)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StratError {
    #[error(transparent)]
    FuelExhausted(#[from] FuelExhausted),
    #[error("measure exceeds 128 bits")]
    MeasureOverflow,
}

/// Class of a term already in normal form.
fn class_of_normal(t: &Term) -> Result<StratClass, StratError> {
    stacker::maybe_grow(32 * 1024, 1024 * 1024, || match t {
        Term::Pi(_, a, b) | Term::Sigma(_, a, b) => {
            let ca = class_of_normal(a)?;
            let cb = class_of_normal(b)?;
            let kind = if matches!(t, Term::Pi(..)) {
                StratKind::PiHeaded
            } else {
                StratKind::SigmaHeaded
            };
            Ok(StratClass {
                kind,
                level: ca.level + cb.level + 1,
                measure: ca
                    .measure
                    .checked_mul(cb.measure)
                    .ok_or(StratError::MeasureOverflow)?,
            })
        }
        _ => Ok(StratClass {
            kind: StratKind::Base,
            level: 0,
            measure: match t {
                Term::Prop => 2,
                Term::Type(j) => 3 + u128::from(*j),
                _ => 1,
            },
        }),
    })
}

/// Classify `t` by its normal form. Running out of fuel means membership in
/// the normalizable terms could not be witnessed.
pub fn classify(t: &Term, fuel: &mut Fuel) -> Result<StratClass, StratError> {
    let nf = normalize(t, fuel)?;
    class_of_normal(&nf)
}

/// The measure φ: `Prop ↦ 2`, `Typeⱼ ↦ 3 + j`, Π/Σ ↦ product of the
/// components' measures, any other normal form ↦ 1.
pub fn phi(t: &Term, fuel: &mut Fuel) -> Result<u128, StratError> {
    classify(t, fuel).map(|c| c.measure)
}
