use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

/// Terms with more nodes than this are displayed as a summary.
pub const DISPLAY_LIMIT: u64 = 4096;

/// A formal term naming an object of an exceptional sequence.
///
/// Terms are uninterpreted. The only simplification performed is the exact
/// cancellation `R(x, L(x, y)) = y` and `L(x, R(x, y)) = y`, which is what
/// undoing a mutation produces. Subterms are shared, so repeated mutation
/// grows memory linearly even though the written form grows exponentially.
#[derive(Clone)]
pub struct SymbolicObject(Arc<Node>);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    L,
    R,
}

enum Term {
    Name(String),
    App(Op, SymbolicObject, SymbolicObject),
}

struct Node {
    term: Term,
    hash: u64,
    size: u64,
    depth: usize,
}

impl SymbolicObject {
    pub fn name(s: impl Into<String>) -> Self {
        let s = s.into();
        let mut h = DefaultHasher::new();
        0u8.hash(&mut h);
        s.hash(&mut h);
        SymbolicObject(Arc::new(Node { hash: h.finish(), size: 1, depth: 0, term: Term::Name(s) }))
    }

    fn app(op: Op, x: &SymbolicObject, y: &SymbolicObject) -> Self {
        let mut h = DefaultHasher::new();
        (op == Op::L).hash(&mut h);
        x.0.hash.hash(&mut h);
        y.0.hash.hash(&mut h);
        SymbolicObject(Arc::new(Node {
            hash: h.finish(),
            size: x.0.size.saturating_add(y.0.size).saturating_add(1),
            depth: 1 + x.0.depth.max(y.0.depth),
            term: Term::App(op, x.clone(), y.clone()),
        }))
    }

    /// Left mutation of `y` through `x`.
    pub fn left(x: &SymbolicObject, y: &SymbolicObject) -> Self {
        match &y.0.term {
            Term::App(Op::R, a, b) if a == x => b.clone(),
            _ => Self::app(Op::L, x, y),
        }
    }

    /// Right mutation of `y` through `x`.
    pub fn right(x: &SymbolicObject, y: &SymbolicObject) -> Self {
        match &y.0.term {
            Term::App(Op::L, a, b) if a == x => b.clone(),
            _ => Self::app(Op::R, x, y),
        }
    }

    pub fn as_name(&self) -> Option<&str> {
        match &self.0.term {
            Term::Name(s) => Some(s),
            Term::App(..) => None,
        }
    }

    /// Operator and operands of a mutated term.
    pub fn as_app(&self) -> Option<(Op, &SymbolicObject, &SymbolicObject)> {
        match &self.0.term {
            Term::Name(_) => None,
            Term::App(op, a, b) => Some((*op, a, b)),
        }
    }

    pub fn depth(&self) -> usize {
        self.0.depth
    }

    /// Number of nodes in the written form, saturating.
    pub fn size(&self) -> u64 {
        self.0.size
    }
}

impl PartialEq for SymbolicObject {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        if self.0.hash != other.0.hash || self.0.size != other.0.size {
            return false;
        }
        match (&self.0.term, &other.0.term) {
            (Term::Name(a), Term::Name(b)) => a == b,
            (Term::App(o, a, b), Term::App(p, c, d)) => o == p && a == c && b == d,
            _ => false,
        }
    }
}

impl Eq for SymbolicObject {}

impl Hash for SymbolicObject {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash.hash(state);
    }
}

impl fmt::Debug for SymbolicObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for SymbolicObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.size > DISPLAY_LIMIT {
            let op = match self.as_app() {
                Some((Op::L, ..)) => "L",
                _ => "R",
            };
            return write!(f, "{op}<{} nodes, depth {}>", self.0.size, self.0.depth);
        }
        match &self.0.term {
            Term::Name(s) => f.write_str(s),
            Term::App(Op::L, a, b) => write!(f, "L({a},{b})"),
            Term::App(Op::R, a, b) => write!(f, "R({a},{b})"),
        }
    }
}

impl From<&str> for SymbolicObject {
    fn from(s: &str) -> Self {
        SymbolicObject::name(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mutations_cancel_exactly() {
        let x = SymbolicObject::name("x");
        let y = SymbolicObject::name("y");
        let l = SymbolicObject::left(&x, &y);
        assert_eq!(l.to_string(), "L(x,y)");
        assert_eq!(SymbolicObject::right(&x, &l), y);
        let r = SymbolicObject::right(&y, &x);
        assert_eq!(SymbolicObject::left(&y, &r), x);
    }

    #[test]
    fn unrelated_terms_do_not_cancel() {
        let x = SymbolicObject::name("x");
        let y = SymbolicObject::name("y");
        let l = SymbolicObject::left(&x, &y);
        assert_eq!(SymbolicObject::right(&y, &l).to_string(), "R(y,L(x,y))");
        assert_eq!(SymbolicObject::right(&y, &l).depth(), 2);
    }

    #[test]
    fn long_chains_share_subterms() {
        let mut x = SymbolicObject::name("x");
        let mut y = SymbolicObject::name("y");
        for _ in 0..200 {
            let nx = SymbolicObject::left(&x, &y);
            y = x;
            x = nx;
        }
        assert_eq!(x.depth(), 200);
        assert_eq!(x.size(), u64::MAX);
        assert!(x.to_string().starts_with("L<"));
        assert_eq!(x.clone(), x);
    }
}
