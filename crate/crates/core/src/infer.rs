//! Syntax-directed principal-type inference.
//!
//! Every successful run also produces the syntax-directed derivation of the
//! inferred judgment (with conversion steps left without their typing
//! derivations; see [`crate::kernel::trace_to_derivation`]).

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::cumul::cum_le;
use crate::kernel::{MinusDerivation, MinusRule, MinusSide};
use crate::reduce::{whnf, Fuel, FuelExhausted};
use crate::term::{all_names, fresh_name, rename, subst, Context, Judgment, Name, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TypeErrorKind {
    UnboundVariable,
    NotAFunction,
    NotAPair,
    NotAUniverse,
    CumulativityViolation,
    InvalidContext,
    FuelExhausted,
}

impl fmt::Display for TypeErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind}: {message} (at `{location}`)")]
pub struct TypeError {
    pub kind: TypeErrorKind,
    pub location: Term,
    pub message: String,
}

impl TypeError {
    pub fn new(kind: TypeErrorKind, location: &Term, message: impl Into<String>) -> Self {
        Self {
            kind,
            location: location.clone(),
            message: message.into(),
        }
    }

    fn fuel(location: &Term, e: FuelExhausted) -> Self {
        Self::new(TypeErrorKind::FuelExhausted, location, e.to_string())
    }
}

/// A principal type with the derivation that produced it.
#[derive(Debug, Clone)]
pub struct InferOutcome {
    pub ctx: Context,
    pub subject: Term,
    pub principal: Term,
    pub trace: MinusDerivation,
}

/// A context that passed [`check_context`], together with the derivations
/// of `Γᵢ ⊢ Prop : Type0` for each of its prefixes.
#[derive(Debug, Clone)]
pub struct CheckedContext {
    ctx: Context,
    validity: Vec<MinusDerivation>,
}

impl CheckedContext {
    pub fn empty() -> Self {
        CheckedContext {
            ctx: Context::new(),
            validity: vec![MinusDerivation {
                rule: MinusRule::Ax,
                conclusion: Judgment::new(Context::new(), Term::Prop, Term::ty(0)),
                side: MinusSide::None,
                premises: vec![],
            }],
        }
    }

    pub fn context(&self) -> &Context {
        &self.ctx
    }

    /// Derivation of `Γ ⊢ Prop : Type0`.
    pub fn validity(&self) -> &MinusDerivation {
        self.validity.last().expect("validity of the empty prefix")
    }

    pub fn infer(&self, m: &Term, fuel: &mut Fuel) -> Result<InferOutcome, TypeError> {
        let mut env = Inferencer {
            checked: self.clone(),
            fuel,
        };
        let (principal, trace) = env.infer(m)?;
        Ok(InferOutcome {
            ctx: self.ctx.clone(),
            subject: m.clone(),
            principal,
            trace,
        })
    }

    fn push(&mut self, x: Name, ty: Term, ty_trace: MinusDerivation, level: i64) {
        let ext = self.ctx.extended(x, ty);
        self.validity.push(MinusDerivation {
            rule: MinusRule::C,
            conclusion: Judgment::new(ext.clone(), Term::Prop, Term::ty(0)),
            side: MinusSide::Level(level),
            premises: vec![ty_trace],
        });
        self.ctx = ext;
    }

    fn pop(&mut self) {
        self.validity.pop();
        self.ctx = self.ctx.split_last().expect("pop of a pushed binder").0;
    }
}

/// Accept `g` iff every entry's type has a universe as principal type in
/// the preceding prefix, and names are pairwise distinct.
pub fn check_context(g: &Context, fuel: &mut Fuel) -> Result<CheckedContext, TypeError> {
    let mut checked = CheckedContext::empty();
    for (x, a) in g.entries() {
        if checked.ctx.contains(x) {
            return Err(TypeError::new(
                TypeErrorKind::InvalidContext,
                &Term::Var(x.clone()),
                format!("`{x}` is declared twice"),
            ));
        }
        let (level, trace) = {
            let mut env = Inferencer {
                checked: checked.clone(),
                fuel: &mut *fuel,
            };
            env.infer_universe(a)?
        };
        checked.push(x.clone(), a.clone(), trace, level);
    }
    Ok(checked)
}

pub fn infer_type(g: &Context, m: &Term, fuel: &mut Fuel) -> Result<InferOutcome, TypeError> {
    check_context(g, fuel)?.infer(m, fuel)
}

/// Whether `m` has type `a` in `g`: `a` must be a type and the principal
/// type of `m` must be cumulative below it.
pub fn check_type(g: &Context, m: &Term, a: &Term, fuel: &mut Fuel) -> Result<bool, TypeError> {
    let checked = check_context(g, fuel)?;
    let outcome = checked.infer(m, fuel)?;
    {
        let mut env = Inferencer {
            checked: checked.clone(),
            fuel: &mut *fuel,
        };
        env.infer_universe(a)?;
    }
    cum_le(&outcome.principal, a, fuel).map_err(|e| TypeError::fuel(a, e))
}

struct Inferencer<'f> {
    checked: CheckedContext,
    fuel: &'f mut Fuel,
}

impl Inferencer<'_> {
    fn ctx(&self) -> &Context {
        &self.checked.ctx
    }

    fn judgment(&self, subject: &Term, ty: &Term) -> Judgment {
        Judgment::new(self.ctx().clone(), subject.clone(), ty.clone())
    }

    fn whnf(&mut self, t: &Term, at: &Term) -> Result<Term, TypeError> {
        whnf(t, self.fuel).map_err(|e| TypeError::fuel(at, e))
    }

    fn cum_le(&mut self, a: &Term, b: &Term, at: &Term) -> Result<bool, TypeError> {
        cum_le(a, b, self.fuel).map_err(|e| TypeError::fuel(at, e))
    }

    /// Insert a conversion step when `ty` is only convertible to `head`.
    fn convert(&self, trace: MinusDerivation, subject: &Term, ty: Term, head: Term) -> MinusDerivation {
        if ty == head {
            return trace;
        }
        MinusDerivation {
            rule: MinusRule::ConvRho,
            conclusion: self.judgment(subject, &head),
            side: MinusSide::Rho {
                from: ty,
                to: head,
                rho: None,
            },
            premises: vec![trace],
        }
    }

    /// Infer the type of `a` and require it to reduce to a universe; the
    /// returned trace concludes with that universe literally.
    fn infer_universe(&mut self, a: &Term) -> Result<(i64, MinusDerivation), TypeError> {
        let (ty, trace) = self.infer(a)?;
        let head = self.whnf(&ty, a)?;
        let Some(level) = head.universe_level() else {
            return Err(TypeError::new(
                TypeErrorKind::NotAUniverse,
                a,
                format!("expected a type, but its type is `{ty}`"),
            ));
        };
        Ok((level, self.convert(trace, a, ty, head)))
    }

    /// Rename a binder away from the context when necessary.
    fn open_binder(&self, x: &Name, body: &Term) -> (Name, Term) {
        if !self.ctx().contains(x) {
            return (x.clone(), body.clone());
        }
        let mut avoid: BTreeSet<Name> = self.ctx().names();
        all_names(body, &mut avoid);
        let z = fresh_name(x, &avoid);
        let body = rename(body, x, &z);
        (z, body)
    }

    fn infer(&mut self, m: &Term) -> Result<(Term, MinusDerivation), TypeError> {
        stacker::maybe_grow(64 * 1024, 2 * 1024 * 1024, || self.infer_inner(m))
    }

    fn infer_inner(&mut self, m: &Term) -> Result<(Term, MinusDerivation), TypeError> {
        match m {
            Term::Prop => Ok((Term::ty(0), self.checked.validity().clone())),
            Term::Type(j) => {
                let ty = Term::ty(j + 1);
                Ok((
                    ty.clone(),
                    MinusDerivation {
                        rule: MinusRule::T,
                        conclusion: self.judgment(m, &ty),
                        side: MinusSide::Level(i64::from(*j)),
                        premises: vec![self.checked.validity().clone()],
                    },
                ))
            }
            Term::Var(x) => {
                let Some(ty) = self.ctx().lookup(x).cloned() else {
                    return Err(TypeError::new(
                        TypeErrorKind::UnboundVariable,
                        m,
                        format!("`{x}` is not bound in the context"),
                    ));
                };
                Ok((
                    ty.clone(),
                    MinusDerivation {
                        rule: MinusRule::Var,
                        conclusion: self.judgment(m, &ty),
                        side: MinusSide::None,
                        premises: vec![self.checked.validity().clone()],
                    },
                ))
            }
            Term::Pi(x, a, b) | Term::Sigma(x, a, b) => {
                let is_pi = matches!(m, Term::Pi(..));
                let (j, ta) = self.infer_universe(a)?;
                let (x2, b2) = self.open_binder(x, b);
                self.checked.push(x2, (**a).clone(), ta.clone(), j);
                let rb = self.infer_universe(&b2);
                self.checked.pop();
                let (k, tb) = rb?;
                if is_pi && k < 0 {
                    return Ok((
                        Term::Prop,
                        MinusDerivation {
                            rule: MinusRule::Pi1,
                            conclusion: self.judgment(m, &Term::Prop),
                            side: MinusSide::None,
                            premises: vec![tb],
                        },
                    ));
                }
                let l = j.max(k).max(0) as u32;
                let ty = Term::ty(l);
                Ok((
                    ty.clone(),
                    MinusDerivation {
                        rule: if is_pi { MinusRule::Pi2 } else { MinusRule::Sigma },
                        conclusion: self.judgment(m, &ty),
                        side: MinusSide::Formation { j, k, l },
                        premises: vec![ta, tb],
                    },
                ))
            }
            Term::Lam(x, a, body) => {
                let (j, ta) = self.infer_universe(a)?;
                let (x2, body2) = self.open_binder(x, body);
                self.checked.push(x2.clone(), (**a).clone(), ta, j);
                let rb = self.infer(&body2);
                self.checked.pop();
                let (b, tb) = rb?;
                let ty = Term::Pi(x2, a.clone(), b.into());
                Ok((
                    ty.clone(),
                    MinusDerivation {
                        rule: MinusRule::Lam,
                        conclusion: self.judgment(m, &ty),
                        side: MinusSide::None,
                        premises: vec![tb],
                    },
                ))
            }
            Term::App(f, n) => {
                let (fty, tf) = self.infer(f)?;
                let head = self.whnf(&fty, f)?;
                let Term::Pi(x, dom, cod) = &head else {
                    return Err(TypeError::new(
                        TypeErrorKind::NotAFunction,
                        f,
                        format!("applied term has type `{fty}`"),
                    ));
                };
                let (x, dom, cod) = (x.clone(), (**dom).clone(), (**cod).clone());
                let tf = self.convert(tf, f, fty, head);
                let (aty, tn) = self.infer(n)?;
                if !self.cum_le(&aty, &dom, n)? {
                    return Err(TypeError::new(
                        TypeErrorKind::CumulativityViolation,
                        n,
                        format!("argument type `{aty}` is not below `{dom}`"),
                    ));
                }
                let ty = subst(&cod, &x, n);
                Ok((
                    ty.clone(),
                    MinusDerivation {
                        rule: MinusRule::App,
                        conclusion: self.judgment(m, &ty),
                        side: MinusSide::App {
                            lower: aty,
                            upper: dom,
                        },
                        premises: vec![tf, tn],
                    },
                ))
            }
            Term::Pair(fst, snd, ann) => {
                let Term::Sigma(x, a, b) = &**ann else {
                    return Err(TypeError::new(
                        TypeErrorKind::NotAPair,
                        ann,
                        "pair annotation must be a Sigma-type",
                    ));
                };
                let (j, ta) = self.infer_universe(a)?;
                let (x2, b2) = self.open_binder(x, b);
                self.checked.push(x2, (**a).clone(), ta, j);
                let rb = self.infer_universe(&b2);
                self.checked.pop();
                let (k, tb) = rb?;
                if k < 0 {
                    return Err(TypeError::new(
                        TypeErrorKind::NotAUniverse,
                        b,
                        "second component of a pair annotation must have type Type_j, found Prop",
                    ));
                }
                let (fty, tfst) = self.infer(fst)?;
                if !self.cum_le(&fty, a, fst)? {
                    return Err(TypeError::new(
                        TypeErrorKind::CumulativityViolation,
                        fst,
                        format!("first component has type `{fty}`, not below `{a}`"),
                    ));
                }
                let (sty, tsnd) = self.infer(snd)?;
                let expected = subst(b, x, fst);
                if !self.cum_le(&sty, &expected, snd)? {
                    return Err(TypeError::new(
                        TypeErrorKind::CumulativityViolation,
                        snd,
                        format!("second component has type `{sty}`, not below `{expected}`"),
                    ));
                }
                let ty = (**ann).clone();
                Ok((
                    ty.clone(),
                    MinusDerivation {
                        rule: MinusRule::Pair,
                        conclusion: self.judgment(m, &ty),
                        side: MinusSide::Pair {
                            first: (fty, (**a).clone()),
                            second: (sty, expected),
                            level: k as u32,
                        },
                        premises: vec![tfst, tsnd, tb],
                    },
                ))
            }
            Term::Proj1(p) | Term::Proj2(p) => {
                let first = matches!(m, Term::Proj1(_));
                let (pty, tp) = self.infer(p)?;
                let head = self.whnf(&pty, p)?;
                let Term::Sigma(x, a, b) = &head else {
                    return Err(TypeError::new(
                        TypeErrorKind::NotAPair,
                        p,
                        format!("projected term has type `{pty}`"),
                    ));
                };
                let ty = if first {
                    (**a).clone()
                } else {
                    subst(b, x, &Term::proj1((**p).clone()))
                };
                let tp = self.convert(tp, p, pty, head.clone());
                Ok((
                    ty.clone(),
                    MinusDerivation {
                        rule: if first { MinusRule::Proj1 } else { MinusRule::Proj2 },
                        conclusion: self.judgment(m, &ty),
                        side: MinusSide::None,
                        premises: vec![tp],
                    },
                ))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduce::conv;
    use crate::syntax::{parse_context, parse_term};
    use crate::term::alpha_eq;

    fn p(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    fn ctx(s: &str) -> Context {
        parse_context(s).unwrap()
    }

    fn fuel() -> Fuel {
        Fuel::new(10_000)
    }

    fn principal(g: &str, m: &str) -> Result<Term, TypeError> {
        infer_type(&ctx(g), &p(m), &mut fuel()).map(|o| o.principal)
    }

    fn kind(r: Result<Term, TypeError>) -> TypeErrorKind {
        r.unwrap_err().kind
    }

    #[test]
    fn check_context_examples() {
        assert!(check_context(&Context::new(), &mut fuel()).is_ok());
        assert!(check_context(&ctx("x : Prop"), &mut fuel()).is_ok());
        let e = check_context(&ctx("x : fn y : Prop . y"), &mut fuel()).unwrap_err();
        assert_eq!(e.kind, TypeErrorKind::NotAUniverse);
        let e = check_context(&ctx("x : y"), &mut fuel()).unwrap_err();
        assert_eq!(e.kind, TypeErrorKind::UnboundVariable);
        let e = check_context(&ctx("x : Prop\nx : Type0"), &mut fuel()).unwrap_err();
        assert_eq!(e.kind, TypeErrorKind::InvalidContext);
    }

    #[test]
    fn proof_variables_are_accepted() {
        assert!(check_context(&ctx("P : Prop\np : P"), &mut fuel()).is_ok());
    }

    #[test]
    fn universes_and_variables() {
        assert_eq!(principal("", "Prop"), Ok(Term::ty(0)));
        assert_eq!(principal("", "Type4"), Ok(Term::ty(5)));
        assert_eq!(principal("A : Type2", "A"), Ok(Term::ty(2)));
        assert_eq!(kind(principal("", "A")), TypeErrorKind::UnboundVariable);
    }

    #[test]
    fn formation_levels() {
        assert_eq!(principal("", "Sig x : Prop . Type0"), Ok(Term::ty(1)));
        assert_eq!(principal("p : Prop", "Pi x : Type0 . p"), Ok(Term::Prop));
        assert_eq!(principal("", "Pi x : Type0 . x"), Ok(Term::ty(1)));
        assert_eq!(principal("", "Pi x : Type2 . Type0"), Ok(Term::ty(3)));
        assert_eq!(principal("P : Prop", "Sig x : P . P"), Ok(Term::ty(0)));
        assert_eq!(principal("P : Prop", "Pi x : P . P"), Ok(Term::Prop));
        assert_eq!(kind(principal("", "Pi x : (fn y : Prop . y) . Prop")), TypeErrorKind::NotAUniverse);
    }

    #[test]
    fn application_uses_cumulativity() {
        assert_eq!(principal("f : Pi x : Type1 . Prop", "f Prop"), Ok(Term::Prop));
        assert_eq!(
            principal("f : Pi x : Type0 . x", "f Type0"),
            Err(TypeError::new(
                TypeErrorKind::CumulativityViolation,
                &Term::ty(0),
                "argument type `Type1` is not below `Type0`"
            ))
        );
        assert_eq!(kind(principal("f : Prop", "f Prop")), TypeErrorKind::NotAFunction);
    }

    #[test]
    fn dependent_application() {
        let t = principal("A : Type0\nB : Pi x : A . Type0\nf : Pi x : A . B x\na : A", "f a").unwrap();
        assert_eq!(t, p("B a"));
    }

    #[test]
    fn lambda_produces_pi() {
        let t = principal("", "fn x : Prop . x").unwrap();
        assert!(alpha_eq(&t, &p("Pi x : Prop . Prop")));
    }

    #[test]
    fn lambda_binder_shadowing_context_is_renamed() {
        let out = infer_type(&ctx("x : Type0"), &p("fn x : x . x"), &mut fuel()).unwrap();
        assert!(alpha_eq(&out.principal, &p("Pi y : x . x")));
    }

    #[test]
    fn pairs_and_projections() {
        let g = "A : Type0\na : A";
        let pair = "< a , A > : Sig x : A . Type0";
        assert_eq!(principal(g, pair), Ok(p("Sig x : A . Type0")));
        assert_eq!(principal(g, &format!("fst ({pair})")), Ok(p("A")));
        assert_eq!(principal(g, &format!("snd ({pair})")), Ok(Term::ty(0)));
        assert_eq!(kind(principal(g, "fst a")), TypeErrorKind::NotAPair);
        assert_eq!(kind(principal(g, "< a , a > : A")), TypeErrorKind::NotAPair);
        assert_eq!(
            kind(principal(g, "< A , a > : Sig x : A . A")),
            TypeErrorKind::CumulativityViolation
        );
    }

    #[test]
    fn pair_second_component_must_live_in_a_type_universe() {
        let g = "P : Prop\np : P";
        assert_eq!(kind(principal(g, "< p , p > : Sig x : P . P")), TypeErrorKind::NotAUniverse);
    }

    #[test]
    fn pair_with_strict_lifts() {
        let t = principal("", "< Prop , Prop > : Sig x : Type1 . Type1").unwrap();
        assert_eq!(t, p("Sig x : Type1 . Type1"));
    }

    #[test]
    fn conversion_steps_are_traced() {
        let out = infer_type(
            &ctx("f : (fn t : Type1 . t) (Pi x : Type0 . Prop)"),
            &p("f Prop"),
            &mut fuel(),
        )
        .unwrap();
        assert_eq!(out.principal, Term::Prop);
        assert_eq!(out.trace.rule, MinusRule::App);
        assert_eq!(out.trace.premises[0].rule, MinusRule::ConvRho);
    }

    #[test]
    fn check_type_examples() {
        let e = Context::new();
        assert_eq!(check_type(&e, &Term::Prop, &Term::ty(5), &mut fuel()), Ok(true));
        assert_eq!(check_type(&e, &Term::Prop, &Term::ty(0), &mut fuel()), Ok(true));
        assert_eq!(check_type(&e, &Term::ty(1), &Term::ty(0), &mut fuel()), Ok(false));
        let err = check_type(&e, &Term::Prop, &p("fn x : Prop . x"), &mut fuel()).unwrap_err();
        assert_eq!(err.kind, TypeErrorKind::NotAUniverse);
    }

    #[test]
    fn self_application_is_rejected() {
        let alpha = p("fn y : Type0 . (Sig x : Type0 . y y)");
        let r = infer_type(&Context::new(), &Term::app(alpha.clone(), alpha), &mut fuel());
        assert_eq!(r.unwrap_err().kind, TypeErrorKind::NotAFunction);
    }

    #[test]
    fn inference_is_deterministic_up_to_conversion() {
        let g = ctx("A : Type0\nB : Pi x : A . Type0");
        let m1 = p("fn a : A . fn b : B a . < a , b > : Sig z : A . B z");
        let m2 = p("fn c : A . fn d : B c . < c , d > : Sig w : A . B w");
        let t1 = infer_type(&g, &m1, &mut fuel()).unwrap().principal;
        let t2 = infer_type(&g, &m2, &mut fuel()).unwrap().principal;
        assert_eq!(conv(&t1, &t2, &mut fuel()), Ok(true));
    }
}
