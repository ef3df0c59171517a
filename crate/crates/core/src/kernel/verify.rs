//! Rule-by-rule checking of ECC derivations.
//!
//! Only the tree itself is consulted: substitutions are recomputed,
//! judgments are compared up to alpha, and cumulativity side conditions are
//! re-decided. Context validity needs no separate pass because the only
//! leaf rule is `(Ax)` over the empty context and `(C)` is the only rule
//! that extends a context without a binder premise.

use thiserror::Error;

use super::{EccDerivation, EccRule, EccSide};
use crate::cumul::cum_le;
use crate::reduce::{Fuel, FuelExhausted};
use crate::term::{alpha_eq, subst, Context, Name, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("node {} ({rule}) rejected: {reason}", fmt_path(.path))]
    Rejected {
        /// Premise indices from the root.
        path: Vec<usize>,
        rule: EccRule,
        reason: String,
    },
    #[error(transparent)]
    FuelExhausted(#[from] FuelExhausted),
}

fn fmt_path(path: &[usize]) -> String {
    if path.is_empty() {
        "root".to_string()
    } else {
        path.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(".")
    }
}

enum Fault {
    Bad(String),
    Fuel(FuelExhausted),
}

impl From<FuelExhausted> for Fault {
    fn from(e: FuelExhausted) -> Self {
        Fault::Fuel(e)
    }
}

type Check = Result<(), Fault>;

fn ensure(cond: bool, reason: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(Fault::Bad(reason()))
    }
}

/// Accept `d` iff every node is a correct instance of its rule. The first
/// failing node in pre-order is reported.
pub fn verify(d: &EccDerivation, fuel: &mut Fuel) -> Result<(), VerifyError> {
    let mut path = Vec::new();
    walk(d, &mut path, fuel)
}

fn walk(d: &EccDerivation, path: &mut Vec<usize>, fuel: &mut Fuel) -> Result<(), VerifyError> {
    stacker::maybe_grow(64 * 1024, 2 * 1024 * 1024, || {
        match check_node(d, fuel) {
            Ok(()) => {}
            Err(Fault::Bad(reason)) => {
                return Err(VerifyError::Rejected {
                    path: path.clone(),
                    rule: d.rule,
                    reason,
                })
            }
            Err(Fault::Fuel(e)) => return Err(VerifyError::FuelExhausted(e)),
        }
        for (i, p) in d.premises.iter().enumerate() {
            path.push(i);
            walk(p, path, fuel)?;
            path.pop();
        }
        Ok(())
    })
}

fn side_level(d: &EccDerivation) -> Result<u32, Fault> {
    match d.side {
        EccSide::Level(j) => Ok(j),
        _ => Err(Fault::Bad("expected a universe index as side data".into())),
    }
}

fn same_ctx(p: &EccDerivation, g: &Context) -> Check {
    ensure(p.conclusion.ctx.alpha_eq(g), || {
        "premise context differs from the conclusion context".into()
    })
}

/// The premise context must be `g, y:A'` with `A' ≡ dom` and `y` fresh.
fn extended_ctx<'p>(p: &'p EccDerivation, g: &Context, dom: &Term) -> Result<&'p Name, Fault> {
    let Some((prefix, (y, a))) = p.conclusion.ctx.split_last() else {
        return Err(Fault::Bad("premise context is not an extension".into()));
    };
    ensure(prefix.alpha_eq(g), || "premise context does not extend the conclusion context".into())?;
    ensure(!g.contains(y), || format!("bound variable `{y}` clashes with the context"))?;
    ensure(alpha_eq(a, dom), || "premise context entry differs from the binder domain".into())?;
    Ok(y)
}

fn is_type_universe(t: &Term) -> bool {
    matches!(t, Term::Type(_))
}

fn check_node(d: &EccDerivation, fuel: &mut Fuel) -> Check {
    let g = &d.conclusion.ctx;
    let s = &d.conclusion.subject;
    let t = &d.conclusion.ty;
    ensure(d.premises.len() == d.rule.arity(), || {
        format!("expected {} premises, found {}", d.rule.arity(), d.premises.len())
    })?;
    let needs_level = matches!(
        d.rule,
        EccRule::C | EccRule::T | EccRule::Pi2 | EccRule::Sigma | EccRule::Pair
    );
    match (&d.side, needs_level, d.rule) {
        (EccSide::Level(_), true, _) | (EccSide::Cum { .. }, false, EccRule::Cum) => {}
        (EccSide::None, false, r) if r != EccRule::Cum => {}
        _ => return Err(Fault::Bad("side data does not fit the rule".into())),
    }
    let prem = |i: usize| &d.premises[i];

    match d.rule {
        EccRule::Ax => {
            ensure(g.is_empty(), || "(Ax) requires the empty context".into())?;
            ensure(*s == Term::Prop && *t == Term::ty(0), || "(Ax) concludes Prop : Type0".into())
        }
        EccRule::C => {
            let j = side_level(d)?;
            let Some((prefix, (x, a))) = g.split_last() else {
                return Err(Fault::Bad("(C) requires a non-empty context".into()));
            };
            ensure(!prefix.contains(x), || format!("`{x}` is already declared"))?;
            ensure(*s == Term::Prop && *t == Term::ty(0), || "(C) concludes Prop : Type0".into())?;
            let p = prem(0);
            same_ctx(p, &prefix)?;
            ensure(alpha_eq(&p.conclusion.subject, a), || "premise does not type the new entry".into())?;
            ensure(p.conclusion.ty == Term::ty(j), || format!("premise type is not Type{j}"))
        }
        EccRule::T => {
            let j = side_level(d)?;
            let p = prem(0);
            same_ctx(p, g)?;
            ensure(p.conclusion.subject == Term::Prop && p.conclusion.ty == Term::ty(0), || {
                "premise must derive Prop : Type0".into()
            })?;
            ensure(*s == Term::ty(j), || format!("subject is not Type{j}"))?;
            ensure(*t == Term::ty(j + 1), || format!("type is not Type{}", j + 1))
        }
        EccRule::Var => {
            let p = prem(0);
            same_ctx(p, g)?;
            ensure(p.conclusion.subject == Term::Prop && p.conclusion.ty == Term::ty(0), || {
                "premise must derive Prop : Type0".into()
            })?;
            let Term::Var(x) = s else {
                return Err(Fault::Bad("subject is not a variable".into()));
            };
            let Some(a) = g.lookup(x) else {
                return Err(Fault::Bad(format!("`{x}` is not declared")));
            };
            ensure(alpha_eq(a, t), || format!("`{x}` is declared with a different type"))
        }
        EccRule::Pi1 => {
            let Term::Pi(_, a, _) = s else {
                return Err(Fault::Bad("subject is not a Pi-type".into()));
            };
            ensure(*t == Term::Prop, || "(Pi1) concludes a proposition".into())?;
            let p = prem(0);
            let y = extended_ctx(p, g, a)?;
            let rebuilt = Term::Pi(y.clone(), a.clone(), p.conclusion.subject.clone().into());
            ensure(alpha_eq(&rebuilt, s), || "premise subject is not the codomain".into())?;
            ensure(p.conclusion.ty == Term::Prop, || "codomain must have type Prop".into())
        }
        EccRule::Pi2 | EccRule::Sigma => {
            let j = side_level(d)?;
            let (a, rebuild): (&Term, fn(Name, Term, Term) -> Term) = match (d.rule, s) {
                (EccRule::Pi2, Term::Pi(_, a, _)) => (a, |y, a, b| Term::Pi(y, a.into(), b.into())),
                (EccRule::Sigma, Term::Sigma(_, a, _)) => {
                    (a, |y, a, b| Term::Sigma(y, a.into(), b.into()))
                }
                _ => return Err(Fault::Bad("subject does not match the formation rule".into())),
            };
            ensure(*t == Term::ty(j), || format!("type is not Type{j}"))?;
            let p0 = prem(0);
            same_ctx(p0, g)?;
            ensure(alpha_eq(&p0.conclusion.subject, a), || "first premise does not type the domain".into())?;
            ensure(p0.conclusion.ty == Term::ty(j), || format!("domain is not in Type{j}"))?;
            let p1 = prem(1);
            let y = extended_ctx(p1, g, a)?;
            let rebuilt = rebuild(y.clone(), a.clone(), p1.conclusion.subject.clone());
            ensure(alpha_eq(&rebuilt, s), || "second premise does not type the body".into())?;
            ensure(p1.conclusion.ty == Term::ty(j), || format!("body is not in Type{j}"))
        }
        EccRule::Lam => {
            let Term::Lam(_, a, _) = s else {
                return Err(Fault::Bad("subject is not an abstraction".into()));
            };
            let p = prem(0);
            let y = extended_ctx(p, g, a)?;
            let body = Term::Lam(y.clone(), a.clone(), p.conclusion.subject.clone().into());
            ensure(alpha_eq(&body, s), || "premise subject is not the body".into())?;
            let ty = Term::Pi(y.clone(), a.clone(), p.conclusion.ty.clone().into());
            ensure(alpha_eq(&ty, t), || "type is not the Pi over the body's type".into())
        }
        EccRule::App => {
            let Term::App(m, n) = s else {
                return Err(Fault::Bad("subject is not an application".into()));
            };
            let (p0, p1) = (prem(0), prem(1));
            same_ctx(p0, g)?;
            same_ctx(p1, g)?;
            ensure(alpha_eq(&p0.conclusion.subject, m), || "first premise does not type the function".into())?;
            let Term::Pi(x, a, b) = &p0.conclusion.ty else {
                return Err(Fault::Bad("function type is not a Pi-type".into()));
            };
            ensure(alpha_eq(&p1.conclusion.subject, n), || "second premise does not type the argument".into())?;
            ensure(alpha_eq(&p1.conclusion.ty, a), || "argument type differs from the domain".into())?;
            ensure(alpha_eq(t, &subst(b, x, n)), || "type is not the instantiated codomain".into())
        }
        EccRule::Pair => {
            let j = side_level(d)?;
            let Term::Pair(m, n, ann) = s else {
                return Err(Fault::Bad("subject is not a pair".into()));
            };
            ensure(alpha_eq(t, ann), || "type differs from the pair annotation".into())?;
            let Term::Sigma(x, a, b) = &**ann else {
                return Err(Fault::Bad("pair annotation is not a Sigma-type".into()));
            };
            let (p0, p1, p2) = (prem(0), prem(1), prem(2));
            same_ctx(p0, g)?;
            same_ctx(p1, g)?;
            ensure(alpha_eq(&p0.conclusion.subject, m), || "first premise does not type the first component".into())?;
            ensure(alpha_eq(&p0.conclusion.ty, a), || "first component has the wrong type".into())?;
            ensure(alpha_eq(&p1.conclusion.subject, n), || "second premise does not type the second component".into())?;
            ensure(alpha_eq(&p1.conclusion.ty, &subst(b, x, m)), || "second component has the wrong type".into())?;
            let y = extended_ctx(p2, g, a)?;
            let rebuilt = Term::Sigma(y.clone(), a.clone(), p2.conclusion.subject.clone().into());
            ensure(alpha_eq(&rebuilt, ann), || "third premise does not type the annotation body".into())?;
            ensure(p2.conclusion.ty == Term::ty(j), || format!("annotation body is not in Type{j}"))
        }
        EccRule::Proj1 | EccRule::Proj2 => {
            let m = match (d.rule, s) {
                (EccRule::Proj1, Term::Proj1(m)) | (EccRule::Proj2, Term::Proj2(m)) => m,
                _ => return Err(Fault::Bad("subject does not match the projection rule".into())),
            };
            let p = prem(0);
            same_ctx(p, g)?;
            ensure(alpha_eq(&p.conclusion.subject, m), || "premise does not type the projected term".into())?;
            let Term::Sigma(x, a, b) = &p.conclusion.ty else {
                return Err(Fault::Bad("projected term's type is not a Sigma-type".into()));
            };
            let expected = if d.rule == EccRule::Proj1 {
                (**a).clone()
            } else {
                subst(b, x, &Term::Proj1(m.clone()))
            };
            ensure(alpha_eq(t, &expected), || "type is not the projected component".into())
        }
        EccRule::Cum => {
            let EccSide::Cum { lower, upper } = &d.side else {
                unreachable!("side checked above");
            };
            let (p0, p1) = (prem(0), prem(1));
            same_ctx(p0, g)?;
            same_ctx(p1, g)?;
            ensure(alpha_eq(&p0.conclusion.subject, s), || "first premise has a different subject".into())?;
            ensure(alpha_eq(&p0.conclusion.ty, lower), || "side data does not match the premise type".into())?;
            ensure(alpha_eq(t, upper), || "side data does not match the conclusion type".into())?;
            ensure(alpha_eq(&p1.conclusion.subject, t), || "second premise does not type the target".into())?;
            ensure(is_type_universe(&p1.conclusion.ty), || "target must have type Type_j".into())?;
            ensure(cum_le(lower, upper, fuel)?, || format!("`{lower}` is not below `{upper}`"))
        }
    }
}
