//! The concrete terms behind the two counterexamples: the nested Σ-types
//! separating `≼` from its first approximation, and the non-normalizing
//! self-application that yields an infinite `≻`-chain.

use crate::term::Term;

/// `C := Σx:(Σy:Prop.Prop).Prop`.
pub fn prop2_c() -> Term {
    Term::sigma("x", Term::sigma("y", Term::Prop, Term::Prop), Term::Prop)
}

/// `A := Σx:(Σy:Prop.Type0).Prop`.
pub fn prop2_a() -> Term {
    Term::sigma("x", Term::sigma("y", Term::Prop, Term::ty(0)), Term::Prop)
}

/// `B := Σx:(Σy:Prop.Type0).Type0`.
pub fn prop2_b() -> Term {
    Term::sigma("x", Term::sigma("y", Term::Prop, Term::ty(0)), Term::ty(0))
}

/// `α := λy:Type0.(Σx:Type0. y y)`.
pub fn alpha() -> Term {
    let y = Term::var("y");
    Term::lam("y", Term::ty(0), Term::sigma("x", Term::ty(0), Term::app(y.clone(), y)))
}

/// `αα`, which reduces in one step to `Σx:Type0.(αα)`.
pub fn alpha_alpha() -> Term {
    Term::app(alpha(), alpha())
}

/// The first `steps` terms of the descending chain
/// `Σx:Type0.(αα) ≻ Σx:Prop.(αα) ≻ Σx:Prop.Σx:Prop.(αα) ≻ …`.
pub fn prop3_chain(steps: usize) -> Vec<Term> {
    let aa = alpha_alpha();
    let mut out = Vec::with_capacity(steps);
    if steps == 0 {
        return out;
    }
    out.push(Term::sigma("x", Term::ty(0), aa.clone()));
    let mut current = aa;
    for _ in 1..steps {
        current = Term::sigma("x", Term::Prop, current);
        out.push(current.clone());
    }
    out
}
