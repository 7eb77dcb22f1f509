//! Lambda terms in locally nameless form.
//!
//! Bound variables are de Bruijn indices, free variables carry names. Binder
//! names survive only as printing hints and take no part in equality or
//! hashing, so `==` on [`Term`] is alpha equivalence and costs at most one
//! walk over the two trees.

use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

/// Marker that separates machine-generated names from user-written ones.
///
/// The surface grammar never produces it, so a reserved name is fresh for
/// every parsed term.
pub const RESERVED_MARK: char = '^';

/// An identifier.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Name(Arc<str>);

impl Name {
    pub fn new(s: &str) -> Name {
        Name(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_reserved(&self) -> bool {
        self.0.contains(RESERVED_MARK)
    }

    /// The reserved counterpart of `base`, e.g. `x^`.
    pub fn reserved(base: &str) -> Name {
        Name::new(&format!("{base}{RESERVED_MARK}"))
    }

    /// First of `base^`, `base^1`, `base^2`, ... not contained in `avoid`.
    pub fn fresh_reserved(base: &str, avoid: &BTreeSet<Name>) -> Name {
        let first = Name::reserved(base);
        if !avoid.contains(&first) {
            return first;
        }
        (1..)
            .map(|i| Name::new(&format!("{base}{RESERVED_MARK}{i}")))
            .find(|n| !avoid.contains(n))
            .expect("unbounded supply of names")
    }

    pub fn primed(&self) -> Name {
        Name::new(&format!("{}'", self.0))
    }

    fn fingerprint(&self) -> u64 {
        // FNV-1a
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in self.0.bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
        h
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Name {
        Name::new(s)
    }
}

impl From<&Name> for Name {
    fn from(n: &Name) -> Name {
        n.clone()
    }
}

/// The shape of a term node.
#[derive(Clone, Debug)]
pub enum TermKind {
    /// De Bruijn index; 0 is the nearest enclosing binder.
    Bound(u32),
    Free(Name),
    /// Abstraction. The name is a printing hint only.
    Lam(Name, Term),
    App(Term, Term),
}

#[derive(Debug)]
struct Node {
    kind: TermKind,
    size: u32,
    hash: u64,
    /// One more than the largest index escaping this subterm, 0 when locally closed.
    loose: u32,
    /// One bit per free name, used to skip subterms during substitution.
    bloom: u64,
}

/// An immutable, cheaply clonable lambda term.
#[derive(Clone)]
pub struct Term(Arc<Node>);

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl Term {
    fn from_kind(kind: TermKind) -> Term {
        let (size, hash, loose, bloom) = match &kind {
            TermKind::Bound(i) => (1, mix(0x11 ^ (u64::from(*i) << 8)), i + 1, 0),
            TermKind::Free(n) => {
                let fp = n.fingerprint();
                (1, mix(0x22 ^ fp), 0, 1u64 << (fp % 64))
            }
            TermKind::Lam(_, b) => (
                b.size().saturating_add(1),
                mix(0x33 ^ b.0.hash.rotate_left(7)),
                b.0.loose.saturating_sub(1),
                b.0.bloom,
            ),
            TermKind::App(f, a) => (
                f.size().saturating_add(a.size()).saturating_add(1),
                mix(mix(f.0.hash ^ 0x44) ^ a.0.hash),
                f.0.loose.max(a.0.loose),
                f.0.bloom | a.0.bloom,
            ),
        };
        Term(Arc::new(Node {
            kind,
            size,
            hash,
            loose,
            bloom,
        }))
    }

    pub fn var(name: impl Into<Name>) -> Term {
        Term::from_kind(TermKind::Free(name.into()))
    }

    pub fn bound(index: u32) -> Term {
        Term::from_kind(TermKind::Bound(index))
    }

    /// `λx. body`, binding the free occurrences of `x` in `body`.
    pub fn lam(x: impl Into<Name>, body: Term) -> Term {
        let x = x.into();
        let body = body.abstract_name(&x, 0);
        Term::from_kind(TermKind::Lam(x, body))
    }

    /// Nested abstraction over `names`, outermost first.
    pub fn lams<N: Into<Name> + Clone>(names: &[N], body: Term) -> Term {
        names.iter().rev().fold(body, |acc, n| Term::lam(n.clone(), acc))
    }

    /// Abstraction whose body already refers to the new binder as index 0.
    pub fn lam_db(hint: impl Into<Name>, body: Term) -> Term {
        Term::from_kind(TermKind::Lam(hint.into(), body))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::from_kind(TermKind::App(f, a))
    }

    /// Left-nested application `f a1 ... an`.
    pub fn apps(f: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    pub fn kind(&self) -> &TermKind {
        &self.0.kind
    }

    /// Node count: variables 1, abstraction 1 + body, application 1 + both sides.
    pub fn size(&self) -> u32 {
        self.0.size
    }

    pub fn structural_hash(&self) -> u64 {
        self.0.hash
    }

    /// True when no de Bruijn index escapes the term.
    pub fn is_locally_closed(&self) -> bool {
        self.0.loose == 0
    }

    pub fn is_closed(&self) -> bool {
        self.0.loose == 0 && self.0.bloom == 0
    }

    pub fn ptr_eq(&self, other: &Term) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn as_app(&self) -> Option<(&Term, &Term)> {
        match self.kind() {
            TermKind::App(f, a) => Some((f, a)),
            _ => None,
        }
    }

    pub fn as_lam(&self) -> Option<(&Name, &Term)> {
        match self.kind() {
            TermKind::Lam(n, b) => Some((n, b)),
            _ => None,
        }
    }

    pub fn is_redex(&self) -> bool {
        matches!(self.kind(), TermKind::App(f, _) if matches!(f.kind(), TermKind::Lam(..)))
    }

    /// Splits `h a1 ... an` into `h` and the arguments.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut head = self;
        while let TermKind::App(f, a) = head.kind() {
            args.push(a);
            head = f;
        }
        args.reverse();
        (head, args)
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    fn collect_free(&self, out: &mut BTreeSet<Name>) {
        if self.0.bloom == 0 {
            return;
        }
        match self.kind() {
            TermKind::Free(n) => {
                out.insert(n.clone());
            }
            TermKind::Bound(_) => {}
            TermKind::Lam(_, b) => b.collect_free(out),
            TermKind::App(f, a) => {
                f.collect_free(out);
                a.collect_free(out);
            }
        }
    }

    fn may_contain(&self, x: &Name) -> bool {
        self.0.bloom & (1u64 << (x.fingerprint() % 64)) != 0
    }

    pub fn has_free(&self, x: &Name) -> bool {
        if !self.may_contain(x) {
            return false;
        }
        match self.kind() {
            TermKind::Free(n) => n == x,
            TermKind::Bound(_) => false,
            TermKind::Lam(_, b) => b.has_free(x),
            TermKind::App(f, a) => f.has_free(x) || a.has_free(x),
        }
    }

    fn rebuild_lam(&self, hint: &Name, old: &Term, new: Term) -> Term {
        if old.ptr_eq(&new) {
            self.clone()
        } else {
            Term::from_kind(TermKind::Lam(hint.clone(), new))
        }
    }

    fn rebuild_app(&self, f: &Term, a: &Term, nf: Term, na: Term) -> Term {
        if f.ptr_eq(&nf) && a.ptr_eq(&na) {
            self.clone()
        } else {
            Term::app(nf, na)
        }
    }

    /// Replaces free occurrences of `x` by the binder `depth` levels up.
    pub(crate) fn abstract_name(&self, x: &Name, depth: u32) -> Term {
        if !self.may_contain(x) {
            return self.clone();
        }
        match self.kind() {
            TermKind::Free(n) if n == x => Term::bound(depth),
            TermKind::Free(_) | TermKind::Bound(_) => self.clone(),
            TermKind::Lam(h, b) => self.rebuild_lam(h, b, b.abstract_name(x, depth + 1)),
            TermKind::App(f, a) => self.rebuild_app(f, a, f.abstract_name(x, depth), a.abstract_name(x, depth)),
        }
    }

    /// Adds `by` to every index at or above `cutoff`.
    pub fn shift(&self, by: u32, cutoff: u32) -> Term {
        if by == 0 || self.0.loose <= cutoff {
            return self.clone();
        }
        match self.kind() {
            TermKind::Bound(i) => Term::bound(i + by),
            TermKind::Free(_) => self.clone(),
            TermKind::Lam(h, b) => self.rebuild_lam(h, b, b.shift(by, cutoff + 1)),
            TermKind::App(f, a) => self.rebuild_app(f, a, f.shift(by, cutoff), a.shift(by, cutoff)),
        }
    }

    /// Removes the binder at `depth`: that index becomes `arg`, deeper ones drop by one.
    pub(crate) fn subst_index(&self, depth: u32, arg: &Term) -> Term {
        if self.0.loose <= depth {
            return self.clone();
        }
        match self.kind() {
            TermKind::Bound(i) if *i == depth => arg.shift(depth, 0),
            TermKind::Bound(i) if *i > depth => Term::bound(i - 1),
            TermKind::Bound(_) | TermKind::Free(_) => self.clone(),
            TermKind::Lam(h, b) => self.rebuild_lam(h, b, b.subst_index(depth + 1, arg)),
            TermKind::App(f, a) => self.rebuild_app(f, a, f.subst_index(depth, arg), a.subst_index(depth, arg)),
        }
    }

    /// Body of an abstraction with its binder replaced by `arg`.
    pub fn instantiate(body: &Term, arg: &Term) -> Term {
        body.subst_index(0, arg)
    }

    /// Capture-avoiding `self[x := s]`.
    pub fn substitute(&self, x: &Name, s: &Term) -> Term {
        self.substitute_at(x, s, 0)
    }

    fn substitute_at(&self, x: &Name, s: &Term, depth: u32) -> Term {
        if !self.may_contain(x) {
            return self.clone();
        }
        match self.kind() {
            TermKind::Free(n) if n == x => s.shift(depth, 0),
            TermKind::Free(_) | TermKind::Bound(_) => self.clone(),
            TermKind::Lam(h, b) => self.rebuild_lam(h, b, b.substitute_at(x, s, depth + 1)),
            TermKind::App(f, a) => self.rebuild_app(f, a, f.substitute_at(x, s, depth), a.substitute_at(x, s, depth)),
        }
    }

    /// Alpha equivalence. Same as `==`.
    pub fn alpha_eq(&self, other: &Term) -> bool {
        self == other
    }
}

impl PartialEq for Term {
    fn eq(&self, other: &Term) -> bool {
        if self.ptr_eq(other) {
            return true;
        }
        if self.0.hash != other.0.hash || self.0.size != other.0.size {
            return false;
        }
        match (self.kind(), other.kind()) {
            (TermKind::Bound(i), TermKind::Bound(j)) => i == j,
            (TermKind::Free(a), TermKind::Free(b)) => a == b,
            (TermKind::Lam(_, a), TermKind::Lam(_, b)) => a == b,
            (TermKind::App(f, a), TermKind::App(g, b)) => f == g && a == b,
            _ => false,
        }
    }
}

impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Term({self})")
    }
}

/// `f (f (... (f z)))` with `k` copies of `f`.
pub fn iterate(f: &Term, k: usize, z: Term) -> Term {
    (0..k).fold(z, |acc, _| Term::app(f.clone(), acc))
}
