//! Shared generators, oracles and the typed corpus used by the integration
//! tests.
#![allow(dead_code)]

pub mod corpus;

use std::collections::BTreeSet;
use std::sync::Arc;

use ecc_kernel::term::{free_vars, subst, Name, Term};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const BINDERS: [&str; 3] = ["x", "y", "z"];

/// Seeded generator of structured terms.
pub struct Gen {
    rng: ChaCha8Rng,
    renames: usize,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            renames: 0,
        }
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.random_bool(p)
    }

    pub fn universe(&mut self) -> Term {
        match self.below(5) {
            0 => Term::Prop,
            j => Term::ty(j as u32 - 1),
        }
    }

    /// A closed, well-typed type in normal form built from universes, Π, Σ,
    /// and variables bound to universes.
    pub fn nf_type(&mut self, depth: usize) -> Term {
        self.nf_type_in(&mut Vec::new(), depth)
    }

    /// [`Gen::nf_type`] with a random depth in `1..=max_depth`.
    pub fn any_type(&mut self, max_depth: usize) -> Term {
        let d = 1 + self.below(max_depth);
        self.nf_type(d)
    }

    pub fn any_type_in(&mut self, scope: &mut Vec<Name>, max_depth: usize) -> Term {
        let d = 1 + self.below(max_depth);
        self.nf_type_in(scope, d)
    }

    /// A random type in normal form, expanded with probability `p` per node.
    pub fn expanded_type(&mut self, max_depth: usize, p: f64) -> Term {
        let t = self.any_type(max_depth);
        self.expand(&t, p)
    }

    /// Like [`Gen::nf_type`] but with the given type variables in scope.
    pub fn nf_type_in(&mut self, scope: &mut Vec<Name>, depth: usize) -> Term {
        let leaf = depth == 0 || self.chance(0.3);
        if leaf {
            if !scope.is_empty() && self.chance(0.4) {
                let i = self.below(scope.len());
                return Term::Var(scope[i].clone());
            }
            return self.universe();
        }
        let x: Name = Arc::from(BINDERS[self.below(BINDERS.len())]);
        let dom = self.nf_type_in(scope, depth - 1);
        let is_type_var = dom.is_universe();
        let saved = scope.clone();
        scope.retain(|y| *y != x);
        if is_type_var {
            scope.push(x.clone());
        }
        let cod = self.nf_type_in(scope, depth - 1);
        *scope = saved;
        if self.chance(0.5) {
            Term::Pi(x, dom.into(), cod.into())
        } else {
            Term::Sigma(x, dom.into(), cod.into())
        }
    }

    /// A term that reduces to `t`: random subterms are wrapped in redexes
    /// whose contraction gives the subterm back.
    pub fn expand(&mut self, t: &Term, p: f64) -> Term {
        let inner = match t {
            Term::Pi(x, a, b) => Term::Pi(x.clone(), self.expand(a, p).into(), self.expand(b, p).into()),
            Term::Sigma(x, a, b) => Term::Sigma(x.clone(), self.expand(a, p).into(), self.expand(b, p).into()),
            Term::Lam(x, a, b) => Term::Lam(x.clone(), self.expand(a, p).into(), self.expand(b, p).into()),
            Term::App(f, a) => Term::App(self.expand(f, p).into(), self.expand(a, p).into()),
            _ => t.clone(),
        };
        if !self.chance(p) {
            return inner;
        }
        let ann = Term::sigma("w", Term::ty(0), Term::ty(0));
        match self.below(4) {
            0 if !free_vars(&inner).contains("w") => {
                Term::app(Term::lam("w", Term::Prop, inner), Term::Prop)
            }
            1 => Term::app(Term::lam("w", self.universe(), Term::var("w")), inner),
            2 => Term::proj1(Term::pair(inner, Term::Prop, ann)),
            _ => Term::proj2(Term::pair(Term::Prop, inner, ann)),
        }
    }

    /// Rename every binder of `t` to a globally fresh name.
    pub fn alpha_variant(&mut self, t: &Term) -> Term {
        match t {
            Term::Pi(x, a, b) | Term::Sigma(x, a, b) | Term::Lam(x, a, b) => {
                self.renames += 1;
                let fresh: Name = Arc::from(format!("r{}q", self.renames).as_str());
                let a2 = self.alpha_variant(a);
                let b2 = self.alpha_variant(&rename_free(b, x, &fresh));
                match t {
                    Term::Pi(..) => Term::Pi(fresh, a2.into(), b2.into()),
                    Term::Sigma(..) => Term::Sigma(fresh, a2.into(), b2.into()),
                    _ => Term::Lam(fresh, a2.into(), b2.into()),
                }
            }
            Term::App(f, a) => Term::App(self.alpha_variant(f).into(), self.alpha_variant(a).into()),
            Term::Pair(m, n, ann) => Term::Pair(
                self.alpha_variant(m).into(),
                self.alpha_variant(n).into(),
                self.alpha_variant(ann).into(),
            ),
            Term::Proj1(m) => Term::Proj1(self.alpha_variant(m).into()),
            Term::Proj2(m) => Term::Proj2(self.alpha_variant(m).into()),
            _ => t.clone(),
        }
    }

    pub fn pick<T: Clone>(&mut self, items: &[T]) -> Option<T> {
        if items.is_empty() {
            None
        } else {
            Some(items[self.below(items.len())].clone())
        }
    }
}

/// Replace free occurrences of `x` by `to`, which must not occur in `t`.
pub fn rename_free(t: &Term, x: &str, to: &Name) -> Term {
    match t {
        Term::Var(y) if &**y == x => Term::Var(to.clone()),
        Term::Pi(y, a, b) | Term::Sigma(y, a, b) | Term::Lam(y, a, b) => {
            let a2 = rename_free(a, x, to);
            let b2 = if &**y == x { (**b).clone() } else { rename_free(b, x, to) };
            match t {
                Term::Pi(..) => Term::Pi(y.clone(), a2.into(), b2.into()),
                Term::Sigma(..) => Term::Sigma(y.clone(), a2.into(), b2.into()),
                _ => Term::Lam(y.clone(), a2.into(), b2.into()),
            }
        }
        Term::App(f, a) => Term::App(rename_free(f, x, to).into(), rename_free(a, x, to).into()),
        Term::Pair(m, n, ann) => Term::Pair(
            rename_free(m, x, to).into(),
            rename_free(n, x, to).into(),
            rename_free(ann, x, to).into(),
        ),
        Term::Proj1(m) => Term::Proj1(rename_free(m, x, to).into()),
        Term::Proj2(m) => Term::Proj2(rename_free(m, x, to).into()),
        _ => t.clone(),
    }
}

/// Every term obtained by lowering one universe at a covariant position:
/// `Typeⱼ₊₁ ↦ Typeⱼ`, `Type0 ↦ Prop`, inside Σ components and Π codomains.
/// Each result is strictly below `t`.
pub fn lowerings(t: &Term) -> Vec<Term> {
    match t {
        Term::Type(0) => vec![Term::Prop],
        Term::Type(j) => vec![Term::ty(j - 1)],
        Term::Pi(x, a, b) => lowerings(b)
            .into_iter()
            .map(|b2| Term::Pi(x.clone(), a.clone(), b2.into()))
            .collect(),
        Term::Sigma(x, a, b) => {
            let mut out: Vec<Term> = lowerings(a)
                .into_iter()
                .map(|a2| Term::Sigma(x.clone(), a2.into(), b.clone()))
                .collect();
            out.extend(lowerings(b).into_iter().map(|b2| Term::Sigma(x.clone(), a.clone(), b2.into())));
            out
        }
        _ => vec![],
    }
}

/// Every term obtained by raising one universe at a covariant position.
pub fn raisings(t: &Term) -> Vec<Term> {
    match t {
        Term::Prop => vec![Term::ty(0)],
        Term::Type(j) => vec![Term::ty(j + 1)],
        Term::Pi(x, a, b) => raisings(b)
            .into_iter()
            .map(|b2| Term::Pi(x.clone(), a.clone(), b2.into()))
            .collect(),
        Term::Sigma(x, a, b) => {
            let mut out: Vec<Term> = raisings(a)
                .into_iter()
                .map(|a2| Term::Sigma(x.clone(), a2.into(), b.clone()))
                .collect();
            out.extend(raisings(b).into_iter().map(|b2| Term::Sigma(x.clone(), a.clone(), b2.into())));
            out
        }
        _ => vec![],
    }
}

/// Measure of a term already in normal form, computed directly from the
/// defining equations.
pub fn phi_oracle(t: &Term) -> u128 {
    match t {
        Term::Prop => 2,
        Term::Type(j) => 3 + u128::from(*j),
        Term::Pi(_, a, b) | Term::Sigma(_, a, b) => phi_oracle(a) * phi_oracle(b),
        _ => 1,
    }
}

/// `a ≼ᵢ b` for closed normal forms without redexes or variables, by the
/// level-indexed definition.
pub fn le_at_oracle(a: &Term, b: &Term, i: usize) -> bool {
    let base = a == b
        || match (a.universe_level(), b.universe_level()) {
            (Some(p), Some(q)) => p <= q,
            _ => false,
        };
    if base || i == 0 {
        return base;
    }
    match (a, b) {
        (Term::Pi(_, a1, b1), Term::Pi(_, a2, b2)) => a1 == a2 && le_at_oracle(b1, b2, i - 1),
        (Term::Sigma(_, a1, b1), Term::Sigma(_, a2, b2)) => {
            le_at_oracle(a1, a2, i - 1) && le_at_oracle(b1, b2, i - 1)
        }
        _ => false,
    }
}

/// Least `i` with `a ≼ᵢ b`, searching up to `bound`.
pub fn min_level_oracle(a: &Term, b: &Term, bound: usize) -> Option<usize> {
    (0..=bound).find(|&i| le_at_oracle(a, b, i))
}

fn contract_oracle(t: &Term) -> Option<Term> {
    match t {
        Term::App(f, n) => match &**f {
            Term::Lam(x, _, body) => Some(subst(body, x, n)),
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

/// Normal form by rightmost-innermost reduction, or `None` when `budget`
/// contractions do not suffice.
pub fn normalize_innermost(t: &Term, budget: &mut u64) -> Option<Term> {
    let t = match t {
        Term::Pi(x, a, b) | Term::Sigma(x, a, b) | Term::Lam(x, a, b) => {
            let b2 = normalize_innermost(b, budget)?;
            let a2 = normalize_innermost(a, budget)?;
            match t {
                Term::Pi(..) => Term::Pi(x.clone(), a2.into(), b2.into()),
                Term::Sigma(..) => Term::Sigma(x.clone(), a2.into(), b2.into()),
                _ => Term::Lam(x.clone(), a2.into(), b2.into()),
            }
        }
        Term::App(f, a) => {
            let a2 = normalize_innermost(a, budget)?;
            let f2 = normalize_innermost(f, budget)?;
            Term::App(f2.into(), a2.into())
        }
        Term::Pair(m, n, ann) => {
            let ann2 = normalize_innermost(ann, budget)?;
            let n2 = normalize_innermost(n, budget)?;
            let m2 = normalize_innermost(m, budget)?;
            Term::Pair(m2.into(), n2.into(), ann2.into())
        }
        Term::Proj1(m) => Term::Proj1(normalize_innermost(m, budget)?.into()),
        Term::Proj2(m) => Term::Proj2(normalize_innermost(m, budget)?.into()),
        _ => t.clone(),
    };
    match contract_oracle(&t) {
        None => Some(t),
        Some(r) => {
            if *budget == 0 {
                return None;
            }
            *budget -= 1;
            normalize_innermost(&r, budget)
        }
    }
}

/// Names bound anywhere in `t`.
pub fn bound_names(t: &Term, out: &mut BTreeSet<Name>) {
    match t {
        Term::Pi(x, a, b) | Term::Sigma(x, a, b) | Term::Lam(x, a, b) => {
            out.insert(x.clone());
            bound_names(a, out);
            bound_names(b, out);
        }
        Term::App(f, a) => {
            bound_names(f, out);
            bound_names(a, out);
        }
        Term::Pair(m, n, ann) => {
            bound_names(m, out);
            bound_names(n, out);
            bound_names(ann, out);
        }
        Term::Proj1(m) | Term::Proj2(m) => bound_names(m, out),
        _ => {}
    }
}

/// Rename each binder to `v<depth>`, so that alpha-equivalent closed terms
/// become syntactically equal.
pub fn canonical(t: &Term) -> Term {
    fn go(t: &Term, depth: usize) -> Term {
        match t {
            Term::Pi(x, a, b) | Term::Sigma(x, a, b) | Term::Lam(x, a, b) => {
                let v: Name = Arc::from(format!("v{depth}").as_str());
                let a2 = go(a, depth);
                let b2 = go(&rename_free(b, x, &v), depth + 1);
                match t {
                    Term::Pi(..) => Term::Pi(v, a2.into(), b2.into()),
                    Term::Sigma(..) => Term::Sigma(v, a2.into(), b2.into()),
                    _ => Term::Lam(v, a2.into(), b2.into()),
                }
            }
            Term::App(f, a) => Term::App(go(f, depth).into(), go(a, depth).into()),
            Term::Pair(m, n, ann) => Term::Pair(go(m, depth).into(), go(n, depth).into(), go(ann, depth).into()),
            Term::Proj1(m) => Term::Proj1(go(m, depth).into()),
            Term::Proj2(m) => Term::Proj2(go(m, depth).into()),
            _ => t.clone(),
        }
    }
    go(t, 0)
}
