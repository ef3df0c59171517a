//! Well-typed judgments `Γ ⊢ M` exercising every inference clause.
//! Context entries are separated by newlines.

pub const DEP: &str = "A : Type0\nB : Pi x : A . Type0\na : A\nb : B a";
pub const SIGMA_VAR: &str = "A : Type0\nB : Pi x : A . Type0\np : Sig x : A . B x";
pub const PROPS: &str = "P : Prop\nQ : Prop\np : P\nq : Q";
pub const FUNS: &str = "A : Type0\nB : Type0\nf : Pi x : A . B\ng : Pi y : B . A\na : A\nb : B";
pub const REDEX_FUN: &str = "f : (fn t : Type1 . t) (Pi x : Type0 . Prop)";
pub const REDEX_PAIR: &str = "p : (fn t : Type1 . t) (Sig x : Type0 . Type0)";

pub const CORPUS: &[(&str, &str)] = &[
    // universes
    ("", "Prop"),
    ("", "Type0"),
    ("", "Type3"),
    ("A : Type0", "Type1"),
    // formation
    ("", "Pi x : Prop . x"),
    ("", "Pi x : Type0 . x"),
    ("", "Pi P : Prop . Pi p : P . P"),
    ("", "Pi A : Type0 . Pi x : A . A"),
    ("", "Pi x : Type0 . Pi y : Type1 . Type2"),
    ("", "Sig x : Prop . x"),
    ("", "Sig x : Type0 . Type0"),
    ("", "Sig A : Type0 . A"),
    ("", "Sig P : Prop . P"),
    ("A : Type0", "Pi x : A . Prop"),
    ("A : Type0", "Pi x : A . Type2"),
    ("T : Type2", "Pi x : T . Type0"),
    (PROPS, "Pi x : P . Q"),
    (PROPS, "Sig x : P . Q"),
    (DEP, "Pi x : A . B x"),
    (DEP, "Sig x : A . B x"),
    // variables and abstraction
    (DEP, "a"),
    (DEP, "b"),
    (PROPS, "p"),
    ("", "fn x : Prop . x"),
    ("", "fn A : Type0 . fn a : A . a"),
    ("", "fn P : Prop . Pi p : P . P"),
    ("", "fn P : Prop . fn p : P . p"),
    ("", "fn x : Type0 . fn y : x . y"),
    ("", "fn T : Type1 . Pi x : T . T"),
    ("", "fn x : Prop . fn y : Prop . y"),
    (DEP, "fn x : A . B x"),
    // application
    (DEP, "B a"),
    ("f : Pi x : Type1 . Prop", "f Prop"),
    ("f : Pi x : Type2 . x", "f Type0"),
    ("g : Pi x : (Sig y : Type1 . Type1) . Prop", "g (< Prop , Prop > : Sig y : Type0 . Type0)"),
    ("k : Pi x : (Pi y : Prop . Type1) . Prop", "k (fn y : Prop . Prop)"),
    ("A : Type0\nP : Pi x : A . Prop\nh : Pi x : A . P x\na : A", "h a"),
    ("", "(fn x : Type1 . x) Type0"),
    ("", "(fn x : Type1 . x) Prop"),
    ("P : Prop\np : P", "(fn x : P . x) p"),
    (FUNS, "g (f a)"),
    (FUNS, "fn x : A . g (f x)"),
    ("F : Pi X : Type0 . Type0", "fn X : Type0 . F (F X)"),
    ("F : Pi X : Type0 . Type0\nx : F Prop", "x"),
    // pairs and projections
    (DEP, "< a , b > : Sig x : A . B x"),
    (DEP, "fst (< a , b > : Sig x : A . B x)"),
    (DEP, "snd (< a , b > : Sig x : A . B x)"),
    ("", "< Prop , Prop > : Sig x : Type1 . Type1"),
    ("", "< Type0 , Prop > : Sig x : Type2 . Type1"),
    ("", "fst (< Prop , Prop > : Sig x : Type1 . Type1)"),
    ("", "snd (< Type0 , Prop > : Sig x : Type2 . Type1)"),
    ("A : Type0\na : A", "< a , A > : Sig x : A . Type0"),
    ("A : Type0\na : A", "fst (< a , A > : Sig x : A . Type0)"),
    ("A : Type0\na : A", "snd (< a , A > : Sig x : A . Type0)"),
    (FUNS, "< a , b > : Sig x : A . B"),
    (SIGMA_VAR, "fst p"),
    (SIGMA_VAR, "snd p"),
    (SIGMA_VAR, "fn q : Sig x : A . B x . snd q"),
    // conversion steps
    (REDEX_FUN, "f Prop"),
    (REDEX_PAIR, "fst p"),
    (REDEX_PAIR, "snd p"),
    ("A : (fn t : Type2 . t) Type1", "Pi x : A . A"),
    ("A : (fn t : Type2 . t) Type1\na : A", "a"),
    ("P : (fn t : Type0 . t) Prop\np : P", "p"),
];
