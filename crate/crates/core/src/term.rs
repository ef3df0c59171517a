//! Abstract syntax of ECC terms and contexts, with capture-avoiding
//! substitution and alpha-equivalence over a named representation.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

pub type Name = Arc<str>;

/// An ECC expression.
///
/// Children are shared through `Arc`, so cloning is shallow and terms can be
/// sent between threads. Equality via `PartialEq` is *syntactic*; use
/// [`alpha_eq`] to compare up to bound-variable renaming.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Name),
    Prop,
    Type(u32),
    Pi(Name, Arc<Term>, Arc<Term>),
    Sigma(Name, Arc<Term>, Arc<Term>),
    Lam(Name, Arc<Term>, Arc<Term>),
    App(Arc<Term>, Arc<Term>),
    /// `<first, second> : annotation`, the annotation being the full Σ-type.
    Pair(Arc<Term>, Arc<Term>, Arc<Term>),
    Proj1(Arc<Term>),
    Proj2(Arc<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(Arc::from(name))
    }

    pub fn ty(level: u32) -> Term {
        Term::Type(level)
    }

    pub fn pi(x: &str, dom: Term, cod: Term) -> Term {
        Term::Pi(Arc::from(x), Arc::new(dom), Arc::new(cod))
    }

    pub fn sigma(x: &str, fst: Term, snd: Term) -> Term {
        Term::Sigma(Arc::from(x), Arc::new(fst), Arc::new(snd))
    }

    pub fn lam(x: &str, ann: Term, body: Term) -> Term {
        Term::Lam(Arc::from(x), Arc::new(ann), Arc::new(body))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Arc::new(f), Arc::new(a))
    }

    pub fn pair(fst: Term, snd: Term, ann: Term) -> Term {
        Term::Pair(Arc::new(fst), Arc::new(snd), Arc::new(ann))
    }

    pub fn proj1(t: Term) -> Term {
        Term::Proj1(Arc::new(t))
    }

    pub fn proj2(t: Term) -> Term {
        Term::Proj2(Arc::new(t))
    }

    pub fn is_universe(&self) -> bool {
        matches!(self, Term::Prop | Term::Type(_))
    }

    /// Universe level with `Prop` counted as -1.
    pub fn universe_level(&self) -> Option<i64> {
        match self {
            Term::Prop => Some(-1),
            Term::Type(j) => Some(i64::from(*j)),
            _ => None,
        }
    }

    /// Inverse of [`Term::universe_level`].
    pub fn universe(level: i64) -> Term {
        if level < 0 {
            Term::Prop
        } else {
            Term::Type(level as u32)
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        stacker::maybe_grow(32 * 1024, 1024 * 1024, || match self {
            Term::Var(_) | Term::Prop | Term::Type(_) => 1,
            Term::Pi(_, a, b) | Term::Sigma(_, a, b) | Term::Lam(_, a, b) | Term::App(a, b) => {
                1 + a.size() + b.size()
            }
            Term::Pair(a, b, c) => 1 + a.size() + b.size() + c.size(),
            Term::Proj1(a) | Term::Proj2(a) => 1 + a.size(),
        })
    }

    /// Maximal nesting of Π/Σ constructors along any path.
    pub fn binder_depth(&self) -> usize {
        match self {
            Term::Var(_) | Term::Prop | Term::Type(_) => 0,
            Term::Pi(_, a, b) | Term::Sigma(_, a, b) => 1 + a.binder_depth().max(b.binder_depth()),
            Term::Lam(_, a, b) | Term::App(a, b) => a.binder_depth().max(b.binder_depth()),
            Term::Pair(a, b, c) => a.binder_depth().max(b.binder_depth()).max(c.binder_depth()),
            Term::Proj1(a) | Term::Proj2(a) => a.binder_depth(),
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print_term(self))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print_term(self))
    }
}

/// Variables occurring free in `t`.
pub fn free_vars(t: &Term) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    let mut bound = Vec::new();
    collect_free(t, &mut bound, &mut out);
    out
}

fn collect_free(t: &Term, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
    stacker::maybe_grow(32 * 1024, 1024 * 1024, || match t {
        Term::Var(x) => {
            if !bound.contains(x) {
                out.insert(x.clone());
            }
        }
        Term::Prop | Term::Type(_) => {}
        Term::Pi(x, a, b) | Term::Sigma(x, a, b) | Term::Lam(x, a, b) => {
            collect_free(a, bound, out);
            bound.push(x.clone());
            collect_free(b, bound, out);
            bound.pop();
        }
        Term::App(a, b) => {
            collect_free(a, bound, out);
            collect_free(b, bound, out);
        }
        Term::Pair(a, b, c) => {
            collect_free(a, bound, out);
            collect_free(b, bound, out);
            collect_free(c, bound, out);
        }
        Term::Proj1(a) | Term::Proj2(a) => collect_free(a, bound, out),
    })
}

/// Whether `x` occurs free in `t`.
pub fn occurs_free(x: &str, t: &Term) -> bool {
    stacker::maybe_grow(32 * 1024, 1024 * 1024, || match t {
        Term::Var(y) => &**y == x,
        Term::Prop | Term::Type(_) => false,
        Term::Pi(y, a, b) | Term::Sigma(y, a, b) | Term::Lam(y, a, b) => {
            occurs_free(x, a) || (&**y != x && occurs_free(x, b))
        }
        Term::App(a, b) => occurs_free(x, a) || occurs_free(x, b),
        Term::Pair(a, b, c) => occurs_free(x, a) || occurs_free(x, b) || occurs_free(x, c),
        Term::Proj1(a) | Term::Proj2(a) => occurs_free(x, a),
    })
}

/// Every variable name occurring in `t`, free or bound.
pub fn all_names(t: &Term, out: &mut BTreeSet<Name>) {
    stacker::maybe_grow(32 * 1024, 1024 * 1024, || match t {
        Term::Var(x) => {
            out.insert(x.clone());
        }
        Term::Prop | Term::Type(_) => {}
        Term::Pi(x, a, b) | Term::Sigma(x, a, b) | Term::Lam(x, a, b) => {
            out.insert(x.clone());
            all_names(a, out);
            all_names(b, out);
        }
        Term::App(a, b) => {
            all_names(a, out);
            all_names(b, out);
        }
        Term::Pair(a, b, c) => {
            all_names(a, out);
            all_names(b, out);
            all_names(c, out);
        }
        Term::Proj1(a) | Term::Proj2(a) => all_names(a, out),
    })
}

/// A variant of `base` with a numeric suffix, not contained in `avoid`.
///
/// Trailing digits of `base` are stripped first so that repeated freshening
/// yields `y1`, `y2`, ... rather than `y11`, `y111`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<Name>) -> Name {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { "v" } else { stem };
    (1u64..)
        .map(|n| format!("{stem}{n}"))
        .find(|cand| !avoid.contains(cand.as_str()))
        .map(Name::from)
        .expect("unbounded suffix search")
}

/// Capture-avoiding substitution `[replacement/var]body`.
pub fn subst(body: &Term, var: &str, replacement: &Term) -> Term {
    if !occurs_free(var, body) {
        return body.clone();
    }
    let fv = free_vars(replacement);
    subst_rec(body, var, replacement, &fv)
}

fn subst_rec(t: &Term, x: &str, n: &Term, fv_n: &BTreeSet<Name>) -> Term {
    stacker::maybe_grow(32 * 1024, 1024 * 1024, || match t {
        Term::Var(y) => {
            if &**y == x {
                n.clone()
            } else {
                t.clone()
            }
        }
        Term::Prop | Term::Type(_) => t.clone(),
        Term::Pi(y, a, b) => {
            let (y, a, b) = subst_binder(y, a, b, x, n, fv_n);
            Term::Pi(y, a, b)
        }
        Term::Sigma(y, a, b) => {
            let (y, a, b) = subst_binder(y, a, b, x, n, fv_n);
            Term::Sigma(y, a, b)
        }
        Term::Lam(y, a, b) => {
            let (y, a, b) = subst_binder(y, a, b, x, n, fv_n);
            Term::Lam(y, a, b)
        }
        Term::App(a, b) => Term::App(
            subst_arc(a, x, n, fv_n),
            subst_arc(b, x, n, fv_n),
        ),
        Term::Pair(a, b, c) => Term::Pair(
            subst_arc(a, x, n, fv_n),
            subst_arc(b, x, n, fv_n),
            subst_arc(c, x, n, fv_n),
        ),
        Term::Proj1(a) => Term::Proj1(subst_arc(a, x, n, fv_n)),
        Term::Proj2(a) => Term::Proj2(subst_arc(a, x, n, fv_n)),
    })
}

fn subst_arc(t: &Arc<Term>, x: &str, n: &Term, fv_n: &BTreeSet<Name>) -> Arc<Term> {
    if occurs_free(x, t) {
        Arc::new(subst_rec(t, x, n, fv_n))
    } else {
        t.clone()
    }
}

fn subst_binder(
    y: &Name,
    a: &Arc<Term>,
    b: &Arc<Term>,
    x: &str,
    n: &Term,
    fv_n: &BTreeSet<Name>,
) -> (Name, Arc<Term>, Arc<Term>) {
    let a2 = subst_arc(a, x, n, fv_n);
    if &**y == x || !occurs_free(x, b) {
        return (y.clone(), a2, b.clone());
    }
    if fv_n.contains(y) {
        let mut avoid = fv_n.clone();
        all_names(b, &mut avoid);
        avoid.insert(Name::from(x));
        let z = fresh_name(y, &avoid);
        let renamed = subst(b, y, &Term::Var(z.clone()));
        let b2 = subst_rec(&renamed, x, n, fv_n);
        (z, a2, Arc::new(b2))
    } else {
        (y.clone(), a2, subst_arc(b, x, n, fv_n))
    }
}

/// Replace the free occurrences of `from` by the variable `to`.
pub fn rename(t: &Term, from: &str, to: &Name) -> Term {
    if &**to == from {
        return t.clone();
    }
    subst(t, from, &Term::Var(to.clone()))
}

/// Equality up to renaming of bound variables.
pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    let mut left = Vec::new();
    let mut right = Vec::new();
    alpha_rec(a, b, &mut left, &mut right)
}

fn alpha_rec(a: &Term, b: &Term, left: &mut Vec<Name>, right: &mut Vec<Name>) -> bool {
    stacker::maybe_grow(32 * 1024, 1024 * 1024, || match (a, b) {
        (Term::Var(x), Term::Var(y)) => {
            let ix = left.iter().rposition(|v| v == x);
            let iy = right.iter().rposition(|v| v == y);
            match (ix, iy) {
                (Some(i), Some(j)) => i == j,
                (None, None) => x == y,
                _ => false,
            }
        }
        (Term::Prop, Term::Prop) => true,
        (Term::Type(i), Term::Type(j)) => i == j,
        (Term::Pi(x, a1, b1), Term::Pi(y, a2, b2))
        | (Term::Sigma(x, a1, b1), Term::Sigma(y, a2, b2))
        | (Term::Lam(x, a1, b1), Term::Lam(y, a2, b2)) => {
            if !alpha_rec(a1, a2, left, right) {
                return false;
            }
            left.push(x.clone());
            right.push(y.clone());
            let ok = alpha_rec(b1, b2, left, right);
            left.pop();
            right.pop();
            ok
        }
        (Term::App(f1, a1), Term::App(f2, a2)) => {
            alpha_rec(f1, f2, left, right) && alpha_rec(a1, a2, left, right)
        }
        (Term::Pair(a1, b1, c1), Term::Pair(a2, b2, c2)) => {
            alpha_rec(a1, a2, left, right)
                && alpha_rec(b1, b2, left, right)
                && alpha_rec(c1, c2, left, right)
        }
        (Term::Proj1(a1), Term::Proj1(a2)) | (Term::Proj2(a1), Term::Proj2(a2)) => {
            alpha_rec(a1, a2, left, right)
        }
        _ => false,
    })
}

/// Bring two binder bodies under a common bound name.
///
/// Returns `(z, b1', b2')` with `b1' = [z/x]b1` and `b2' = [z/y]b2`, where `z`
/// is not free in either body (other than as the bound variable itself).
pub fn open_pair(x: &Name, b1: &Term, y: &Name, b2: &Term) -> (Name, Term, Term) {
    if x == y {
        return (x.clone(), b1.clone(), b2.clone());
    }
    if !occurs_free(x, b2) {
        return (x.clone(), b1.clone(), rename(b2, y, x));
    }
    if !occurs_free(y, b1) {
        return (y.clone(), rename(b1, x, y), b2.clone());
    }
    let mut avoid = BTreeSet::new();
    all_names(b1, &mut avoid);
    all_names(b2, &mut avoid);
    let z = fresh_name(x, &avoid);
    (z.clone(), rename(b1, x, &z), rename(b2, y, &z))
}

/// An ordered list of typing assumptions `x₁:A₁, …, xₙ:Aₙ`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Context {
    entries: Vec<(Name, Term)>,
}

impl Context {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries<I, S>(entries: I) -> Self
    where
        I: IntoIterator<Item = (S, Term)>,
        S: AsRef<str>,
    {
        Self {
            entries: entries
                .into_iter()
                .map(|(n, t)| (Name::from(n.as_ref()), t))
                .collect(),
        }
    }

    pub fn entries(&self) -> &[(Name, Term)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The innermost assumption for `x`.
    pub fn lookup(&self, x: &str) -> Option<&Term> {
        self.entries
            .iter()
            .rev()
            .find(|(n, _)| &**n == x)
            .map(|(_, t)| t)
    }

    pub fn contains(&self, x: &str) -> bool {
        self.entries.iter().any(|(n, _)| &**n == x)
    }

    pub fn extended(&self, x: Name, ty: Term) -> Context {
        let mut entries = self.entries.clone();
        entries.push((x, ty));
        Context { entries }
    }

    /// Context with the last entry removed, and that entry.
    pub fn split_last(&self) -> Option<(Context, &(Name, Term))> {
        let (last, rest) = self.entries.split_last()?;
        Some((
            Context {
                entries: rest.to_vec(),
            },
            last,
        ))
    }

    pub fn prefix(&self, len: usize) -> Context {
        Context {
            entries: self.entries[..len].to_vec(),
        }
    }

    pub fn names(&self) -> BTreeSet<Name> {
        self.entries.iter().map(|(n, _)| n.clone()).collect()
    }

    /// Same names in the same order, types equal up to alpha.
    pub fn alpha_eq(&self, other: &Context) -> bool {
        self.entries.len() == other.entries.len()
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|((x, a), (y, b))| x == y && alpha_eq(a, b))
    }
}

/// `ctx ⊢ subject : ty`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Judgment {
    pub ctx: Context,
    pub subject: Term,
    pub ty: Term,
}

impl Judgment {
    pub fn new(ctx: Context, subject: Term, ty: Term) -> Self {
        Self { ctx, subject, ty }
    }

    pub fn alpha_eq(&self, other: &Judgment) -> bool {
        self.ctx.alpha_eq(&other.ctx)
            && alpha_eq(&self.subject, &other.subject)
            && alpha_eq(&self.ty, &other.ty)
    }
}

impl fmt::Display for Judgment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ctx: Vec<String> = self
            .ctx
            .entries()
            .iter()
            .map(|(x, t)| format!("{x} : {t}"))
            .collect();
        write!(f, "{} |- {} : {}", ctx.join(", "), self.subject, self.ty)
    }
}
