//! β/π reduction, weak-head and full normalization under a step budget,
//! and conversion.

use std::sync::Arc;

use thiserror::Error;

use crate::term::{alpha_eq, subst, Term};

pub const DEFAULT_FUEL: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("reduction budget of {budget} steps exhausted")]
pub struct FuelExhausted {
    pub budget: u64,
}

/// A budget of redex contractions, shared by every reduction performed
/// through the same meter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fuel {
    budget: u64,
    remaining: u64,
}

impl Fuel {
    pub fn new(budget: u64) -> Self {
        Self {
            budget,
            remaining: budget,
        }
    }

    pub fn remaining(&self) -> u64 {
        self.remaining
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn used(&self) -> u64 {
        self.budget - self.remaining
    }

    /// Pay for one contraction.
    pub fn tick(&mut self) -> Result<(), FuelExhausted> {
        if self.remaining == 0 {
            return Err(FuelExhausted {
                budget: self.budget,
            });
        }
        self.remaining -= 1;
        Ok(())
    }
}

impl Default for Fuel {
    fn default() -> Self {
        Fuel::new(DEFAULT_FUEL)
    }
}

/// Contract `t` if it is itself a redex.
pub fn contract(t: &Term) -> Option<Term> {
    match t {
        Term::App(f, a) => match &**f {
            Term::Lam(x, _, body) => Some(subst(body, x, a)),
            _ => None,
        },
        Term::Proj1(p) => match &**p {
            Term::Pair(m, _, _) => Some((**m).clone()),
            _ => None,
        },
        Term::Proj2(p) => match &**p {
            Term::Pair(_, n, _) => Some((**n).clone()),
            _ => None,
        },
        _ => None,
    }
}

/// Contract the leftmost-outermost redex. `None` iff `t` is normal.
pub fn step(t: &Term) -> Option<Term> {
    stacker::maybe_grow(32 * 1024, 1024 * 1024, || {
        if let Some(r) = contract(t) {
            return Some(r);
        }
        match t {
            Term::Var(_) | Term::Prop | Term::Type(_) => None,
            Term::Pi(x, a, b) => step_binder(a, b).map(|(a, b)| Term::Pi(x.clone(), a, b)),
            Term::Sigma(x, a, b) => {
                step_binder(a, b).map(|(a, b)| Term::Sigma(x.clone(), a, b))
            }
            Term::Lam(x, a, b) => step_binder(a, b).map(|(a, b)| Term::Lam(x.clone(), a, b)),
            Term::App(f, a) => step_binder(f, a).map(|(f, a)| Term::App(f, a)),
            Term::Pair(m, n, ann) => {
                if let Some(m2) = step(m) {
                    Some(Term::Pair(Arc::new(m2), n.clone(), ann.clone()))
                } else if let Some(n2) = step(n) {
                    Some(Term::Pair(m.clone(), Arc::new(n2), ann.clone()))
                } else {
                    step(ann).map(|a2| Term::Pair(m.clone(), n.clone(), Arc::new(a2)))
                }
            }
            Term::Proj1(m) => step(m).map(|m| Term::Proj1(Arc::new(m))),
            Term::Proj2(m) => step(m).map(|m| Term::Proj2(Arc::new(m))),
        }
    })
}

fn step_binder(a: &Arc<Term>, b: &Arc<Term>) -> Option<(Arc<Term>, Arc<Term>)> {
    if let Some(a2) = step(a) {
        Some((Arc::new(a2), b.clone()))
    } else {
        step(b).map(|b2| (a.clone(), Arc::new(b2)))
    }
}

/// Every term reachable from `t` by contracting exactly one redex, in
/// left-to-right order of redex position.
pub fn one_step_reducts(t: &Term) -> Vec<Term> {
    let mut out = Vec::new();
    if let Some(r) = contract(t) {
        out.push(r);
    }
    let wrap1 = |out: &mut Vec<Term>, sub: &Arc<Term>, rebuild: &dyn Fn(Arc<Term>) -> Term| {
        for r in one_step_reducts(sub) {
            out.push(rebuild(Arc::new(r)));
        }
    };
    match t {
        Term::Var(_) | Term::Prop | Term::Type(_) => {}
        Term::Pi(x, a, b) => {
            wrap1(&mut out, a, &|a2| Term::Pi(x.clone(), a2, b.clone()));
            wrap1(&mut out, b, &|b2| Term::Pi(x.clone(), a.clone(), b2));
        }
        Term::Sigma(x, a, b) => {
            wrap1(&mut out, a, &|a2| Term::Sigma(x.clone(), a2, b.clone()));
            wrap1(&mut out, b, &|b2| Term::Sigma(x.clone(), a.clone(), b2));
        }
        Term::Lam(x, a, b) => {
            wrap1(&mut out, a, &|a2| Term::Lam(x.clone(), a2, b.clone()));
            wrap1(&mut out, b, &|b2| Term::Lam(x.clone(), a.clone(), b2));
        }
        Term::App(f, a) => {
            wrap1(&mut out, f, &|f2| Term::App(f2, a.clone()));
            wrap1(&mut out, a, &|a2| Term::App(f.clone(), a2));
        }
        Term::Pair(m, n, ann) => {
            wrap1(&mut out, m, &|m2| Term::Pair(m2, n.clone(), ann.clone()));
            wrap1(&mut out, n, &|n2| Term::Pair(m.clone(), n2, ann.clone()));
            wrap1(&mut out, ann, &|a2| Term::Pair(m.clone(), n.clone(), a2));
        }
        Term::Proj1(m) => wrap1(&mut out, m, &|m2| Term::Proj1(m2)),
        Term::Proj2(m) => wrap1(&mut out, m, &|m2| Term::Proj2(m2)),
    }
    out
}

/// Reduce head redexes until the head constructor is stable.
pub fn whnf(t: &Term, fuel: &mut Fuel) -> Result<Term, FuelExhausted> {
    stacker::maybe_grow(32 * 1024, 1024 * 1024, || {
        let mut cur = t.clone();
        loop {
            match &cur {
                Term::App(f, a) => {
                    let hf = whnf(f, fuel)?;
                    match &hf {
                        Term::Lam(x, _, body) => {
                            fuel.tick()?;
                            cur = subst(body, x, a);
                        }
                        _ => return Ok(Term::App(Arc::new(hf), a.clone())),
                    }
                }
                Term::Proj1(p) | Term::Proj2(p) => {
                    let first = matches!(cur, Term::Proj1(_));
                    let hp = whnf(p, fuel)?;
                    match &hp {
                        Term::Pair(m, n, _) => {
                            fuel.tick()?;
                            cur = if first { (**m).clone() } else { (**n).clone() };
                        }
                        _ => {
                            let hp = Arc::new(hp);
                            return Ok(if first {
                                Term::Proj1(hp)
                            } else {
                                Term::Proj2(hp)
                            });
                        }
                    }
                }
                _ => return Ok(cur),
            }
        }
    })
}

/// The normal form of `t`, reached by leftmost-outermost reduction.
///
/// Each contraction costs one unit of fuel; running out means `t` may not
/// normalize.
pub fn normalize(t: &Term, fuel: &mut Fuel) -> Result<Term, FuelExhausted> {
    stacker::maybe_grow(64 * 1024, 4 * 1024 * 1024, || {
        let h = whnf(t, fuel)?;
        let nf = |s: &Arc<Term>, fuel: &mut Fuel| normalize(s, fuel).map(Arc::new);
        Ok(match &h {
            Term::Var(_) | Term::Prop | Term::Type(_) => h,
            Term::Pi(x, a, b) => {
                let a = nf(a, fuel)?;
                Term::Pi(x.clone(), a, nf(b, fuel)?)
            }
            Term::Sigma(x, a, b) => {
                let a = nf(a, fuel)?;
                Term::Sigma(x.clone(), a, nf(b, fuel)?)
            }
            Term::Lam(x, a, b) => {
                let a = nf(a, fuel)?;
                Term::Lam(x.clone(), a, nf(b, fuel)?)
            }
            // whnf leaves a stuck head; normalizing it keeps it stuck
            Term::App(f, a) => {
                let f = nf(f, fuel)?;
                Term::App(f, nf(a, fuel)?)
            }
            Term::Pair(m, n, ann) => {
                let m = nf(m, fuel)?;
                let n = nf(n, fuel)?;
                Term::Pair(m, n, nf(ann, fuel)?)
            }
            Term::Proj1(m) => Term::Proj1(nf(m, fuel)?),
            Term::Proj2(m) => Term::Proj2(nf(m, fuel)?),
        })
    })
}

/// Decide `a ≃ b` (β/π conversion, no η).
///
/// Alpha-equal terms are convertible without any reduction, which keeps the
/// relation decidable on identical non-normalizing terms.
pub fn conv(a: &Term, b: &Term, fuel: &mut Fuel) -> Result<bool, FuelExhausted> {
    if alpha_eq(a, b) {
        return Ok(true);
    }
    let na = normalize(a, fuel)?;
    let nb = normalize(b, fuel)?;
    Ok(alpha_eq(&na, &nb))
}

/// Whether `t` is in normal form.
pub fn is_normal(t: &Term) -> bool {
    step(t).is_none()
}
