//! From syntax-directed traces to full ECC derivations.

use std::collections::HashMap;

use super::{EccDerivation, EccRule, EccSide, MinusDerivation, MinusRule, MinusSide};
use crate::cumul::cum_le;
use crate::infer::{check_context, infer_type, TypeError, TypeErrorKind};
use crate::reduce::{whnf, Fuel, FuelExhausted};
use crate::term::{alpha_eq, Context, Judgment, Term};

fn fuel_error(at: &Term, e: FuelExhausted) -> TypeError {
    TypeError::new(TypeErrorKind::FuelExhausted, at, e.to_string())
}

fn node(rule: EccRule, conclusion: Judgment, side: EccSide, premises: Vec<EccDerivation>) -> EccDerivation {
    EccDerivation {
        rule,
        conclusion,
        side,
        premises,
    }
}

/// `(≼)` from `d : Γ ⊢ M : A` and `delta : Γ ⊢ upper : Typeⱼ`.
fn cum(d: EccDerivation, upper: &Term, delta: EccDerivation) -> EccDerivation {
    let j = &d.conclusion;
    let conclusion = Judgment::new(j.ctx.clone(), j.subject.clone(), upper.clone());
    let side = EccSide::Cum {
        lower: j.ty.clone(),
        upper: upper.clone(),
    };
    node(EccRule::Cum, conclusion, side, vec![d, delta])
}

fn universe_index(t: &Term) -> Option<u32> {
    match t {
        Term::Type(j) => Some(*j),
        _ => None,
    }
}

/// Builds ECC derivations, remembering the derivation of `Γ ⊢ Prop : Type0`
/// for every context it has seen.
pub struct Elaborator<'f> {
    fuel: &'f mut Fuel,
    contexts: HashMap<Context, EccDerivation>,
}

impl<'f> Elaborator<'f> {
    pub fn new(fuel: &'f mut Fuel) -> Self {
        Elaborator {
            fuel,
            contexts: HashMap::new(),
        }
    }

    /// Derivation of `Γ ⊢ Prop : Type0`, built from `(Ax)` and `(C)`.
    pub fn ctx_derivation(&mut self, g: &Context) -> Result<EccDerivation, TypeError> {
        if let Some(d) = self.contexts.get(g) {
            return Ok(d.clone());
        }
        let d = if g.is_empty() {
            node(
                EccRule::Ax,
                Judgment::new(Context::new(), Term::Prop, Term::ty(0)),
                EccSide::None,
                vec![],
            )
        } else {
            let checked = check_context(g, self.fuel).map_err(|e| match e.kind {
                TypeErrorKind::FuelExhausted => e,
                _ => TypeError::new(TypeErrorKind::InvalidContext, &e.location, e.message),
            })?;
            self.transform(checked.validity())?
        };
        self.contexts.insert(g.clone(), d.clone());
        Ok(d)
    }

    /// Derivation of `Γ ⊢ u : τ` for a universe `u`, where `τ` is `Type0`
    /// for `Prop` and `Typeⱼ₊₁` for `Typeⱼ`.
    pub fn mk_universe(&mut self, g: &Context, u: &Term) -> Result<EccDerivation, TypeError> {
        match u {
            Term::Prop => self.ctx_derivation(g),
            Term::Type(j) => {
                let valid = self.ctx_derivation(g)?;
                Ok(node(
                    EccRule::T,
                    Judgment::new(g.clone(), u.clone(), Term::ty(j + 1)),
                    EccSide::Level(*j),
                    vec![valid],
                ))
            }
            _ => Err(TypeError::new(TypeErrorKind::NotAUniverse, u, "not a universe")),
        }
    }

    /// Lift `d : Γ ⊢ A : K` to a conclusion typed by a literal `Typeⱼ`.
    pub fn lift_to_type(&mut self, d: EccDerivation) -> Result<EccDerivation, TypeError> {
        let ty = d.conclusion.ty.clone();
        if universe_index(&ty).is_some() {
            return Ok(d);
        }
        let head = whnf(&ty, self.fuel).map_err(|e| fuel_error(&ty, e))?;
        let target = match head {
            Term::Type(_) => head,
            Term::Prop => Term::ty(0),
            _ => {
                return Err(TypeError::new(
                    TypeErrorKind::NotAUniverse,
                    &d.conclusion.subject,
                    format!("expected a type, but its type is `{ty}`"),
                ))
            }
        };
        let g = d.conclusion.ctx.clone();
        let delta = self.mk_universe(&g, &target)?;
        Ok(cum(d, &target, delta))
    }

    /// Derivation of `Γ ⊢ A : Typeⱼ` for some `j`.
    pub fn type_derivation(&mut self, g: &Context, a: &Term) -> Result<EccDerivation, TypeError> {
        if a.is_universe() {
            let d = self.mk_universe(g, a)?;
            return self.lift_to_type(d);
        }
        let d = self.principal_of(g, a)?;
        self.lift_to_type(d)
    }

    /// ECC derivation of `Γ ⊢ M : T` with `T` the principal type.
    pub fn principal_of(&mut self, g: &Context, m: &Term) -> Result<EccDerivation, TypeError> {
        let outcome = infer_type(g, m, self.fuel)?;
        self.transform(&outcome.trace)
    }

    /// Fill in the typing derivation of every conversion step.
    pub fn complete_trace(&mut self, d: &MinusDerivation) -> Result<MinusDerivation, TypeError> {
        stacker::maybe_grow(64 * 1024, 2 * 1024 * 1024, || {
            let premises = d
                .premises
                .iter()
                .map(|p| self.complete_trace(p))
                .collect::<Result<Vec<_>, _>>()?;
            let side = match &d.side {
                MinusSide::Rho { from, to, rho: None } => MinusSide::Rho {
                    from: from.clone(),
                    to: to.clone(),
                    rho: Some(Box::new(self.type_derivation(&d.conclusion.ctx, to)?)),
                },
                other => other.clone(),
            };
            Ok(MinusDerivation {
                rule: d.rule,
                conclusion: d.conclusion.clone(),
                side,
                premises,
            })
        })
    }

    /// Turn `d : Γ ⊢ M : A` into a derivation of `Γ ⊢ M : target`, inserting
    /// `(≼)` unless the types already agree up to alpha.
    fn lift(&mut self, d: EccDerivation, target: &Term) -> Result<EccDerivation, TypeError> {
        if alpha_eq(&d.conclusion.ty, target) {
            return Ok(d);
        }
        self.check_below(&d, target)?;
        let g = d.conclusion.ctx.clone();
        let delta = self.type_derivation(&g, target)?;
        Ok(cum(d, target, delta))
    }

    fn check_below(&mut self, d: &EccDerivation, target: &Term) -> Result<(), TypeError> {
        let lower = &d.conclusion.ty;
        if cum_le(lower, target, self.fuel).map_err(|e| fuel_error(target, e))? {
            Ok(())
        } else {
            Err(TypeError::new(
                TypeErrorKind::CumulativityViolation,
                &d.conclusion.subject,
                format!("`{lower}` is not below `{target}`"),
            ))
        }
    }

    /// `Γ ⊢ A : Typeⱼ` for the domain `A` of `pi`, taken from the domain
    /// premise of the formation derivation of `pi` when that is `(Π2)`.
    fn domain_derivation(&mut self, g: &Context, pi: &Term, dom: &Term) -> Result<EccDerivation, TypeError> {
        let formation = self.principal_of(g, pi)?;
        if formation.rule == EccRule::Pi2 {
            let premise = formation.premises.into_iter().next().expect("(Pi2) has two premises");
            if alpha_eq(&premise.conclusion.subject, dom) {
                return Ok(premise);
            }
        }
        self.type_derivation(g, dom)
    }

    /// The translation of a syntax-directed derivation into ECC. Conversion
    /// steps without a typing derivation get one synthesized.
    pub fn transform(&mut self, d: &MinusDerivation) -> Result<EccDerivation, TypeError> {
        stacker::maybe_grow(64 * 1024, 2 * 1024 * 1024, || self.transform_inner(d))
    }

    fn transform_inner(&mut self, d: &MinusDerivation) -> Result<EccDerivation, TypeError> {
        let concl = d.conclusion.clone();
        let bad_side = || {
            TypeError::new(
                TypeErrorKind::InvalidContext,
                &d.conclusion.subject,
                format!("malformed side data on a {} node", d.rule),
            )
        };
        match d.rule {
            MinusRule::Ax => Ok(node(EccRule::Ax, concl, EccSide::None, vec![])),
            MinusRule::C => {
                let p = self.transform(&d.premises[0])?;
                let p = self.lift_to_type(p)?;
                let j = universe_index(&p.conclusion.ty).ok_or_else(bad_side)?;
                Ok(node(EccRule::C, concl, EccSide::Level(j), vec![p]))
            }
            MinusRule::T => {
                let j = universe_index(&concl.subject).ok_or_else(bad_side)?;
                let p = self.transform(&d.premises[0])?;
                Ok(node(EccRule::T, concl, EccSide::Level(j), vec![p]))
            }
            MinusRule::Var | MinusRule::Pi1 | MinusRule::Lam | MinusRule::Proj1 | MinusRule::Proj2 => {
                let rule = match d.rule {
                    MinusRule::Var => EccRule::Var,
                    MinusRule::Pi1 => EccRule::Pi1,
                    MinusRule::Lam => EccRule::Lam,
                    MinusRule::Proj1 => EccRule::Proj1,
                    _ => EccRule::Proj2,
                };
                let p = self.transform(&d.premises[0])?;
                Ok(node(rule, concl, EccSide::None, vec![p]))
            }
            MinusRule::Pi2 | MinusRule::Sigma => {
                let MinusSide::Formation { l, .. } = d.side else {
                    return Err(bad_side());
                };
                let target = Term::ty(l);
                let a = self.transform(&d.premises[0])?;
                let a = self.lift(a, &target)?;
                let b = self.transform(&d.premises[1])?;
                let b = self.lift(b, &target)?;
                let rule = if d.rule == MinusRule::Pi2 {
                    EccRule::Pi2
                } else {
                    EccRule::Sigma
                };
                Ok(node(rule, concl, EccSide::Level(l), vec![a, b]))
            }
            MinusRule::App => {
                let MinusSide::App { upper, .. } = &d.side else {
                    return Err(bad_side());
                };
                let f = self.transform(&d.premises[0])?;
                let n = self.transform(&d.premises[1])?;
                let n = if alpha_eq(&n.conclusion.ty, upper) {
                    n
                } else {
                    let delta = self.domain_derivation(&f.conclusion.ctx, &f.conclusion.ty, upper)?;
                    self.check_below(&n, upper)?;
                    cum(n, upper, delta)
                };
                Ok(node(EccRule::App, concl, EccSide::None, vec![f, n]))
            }
            MinusRule::Pair => {
                let MinusSide::Pair { first, second, level } = &d.side else {
                    return Err(bad_side());
                };
                let m = self.transform(&d.premises[0])?;
                let m = self.lift(m, &first.1)?;
                let n = self.transform(&d.premises[1])?;
                let n = self.lift(n, &second.1)?;
                let b = self.transform(&d.premises[2])?;
                let b = self.lift(b, &Term::ty(*level))?;
                Ok(node(EccRule::Pair, concl, EccSide::Level(*level), vec![m, n, b]))
            }
            MinusRule::ConvRho => {
                let MinusSide::Rho { to, rho, .. } = &d.side else {
                    return Err(bad_side());
                };
                let p = self.transform(&d.premises[0])?;
                let delta = match rho {
                    Some(r) => (**r).clone(),
                    None => self.type_derivation(&concl.ctx, to)?,
                };
                Ok(cum(p, to, delta))
            }
        }
    }

    /// ECC derivation of `Γ ⊢ M : A` when `M`'s principal type is below `A`.
    pub fn derive_judgment(&mut self, g: &Context, m: &Term, a: &Term) -> Result<Option<EccDerivation>, TypeError> {
        let d = self.principal_of(g, m)?;
        let delta = self.type_derivation(g, a)?;
        let principal = d.conclusion.ty.clone();
        if alpha_eq(&principal, a) {
            return Ok(Some(d));
        }
        if !cum_le(&principal, a, self.fuel).map_err(|e| fuel_error(a, e))? {
            return Ok(None);
        }
        Ok(Some(cum(d, a, delta)))
    }
}

pub fn mk_universe_derivation(g: &Context, u: &Term, fuel: &mut Fuel) -> Result<EccDerivation, TypeError> {
    Elaborator::new(fuel).mk_universe(g, u)
}

pub fn trace_to_derivation(d: &MinusDerivation, fuel: &mut Fuel) -> Result<MinusDerivation, TypeError> {
    Elaborator::new(fuel).complete_trace(d)
}

pub fn f_transform(d: &MinusDerivation, fuel: &mut Fuel) -> Result<EccDerivation, TypeError> {
    Elaborator::new(fuel).transform(d)
}

pub fn principal_of(g: &Context, m: &Term, fuel: &mut Fuel) -> Result<EccDerivation, TypeError> {
    Elaborator::new(fuel).principal_of(g, m)
}

pub fn derive_judgment(g: &Context, m: &Term, a: &Term, fuel: &mut Fuel) -> Result<Option<EccDerivation>, TypeError> {
    Elaborator::new(fuel).derive_judgment(g, m, a)
}
