use std::collections::BTreeSet;
use std::fmt;

/// LTLf syntax tree.
///
/// The full surface syntax is kept here so that printing reproduces what the
/// user wrote. [`Formula::desugar`] rewrites the derived operators into the
/// core kinds `{Atom, True, Not, And, Or, Next, Until, Release}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    /// Strong next: false at the last position of a trace.
    Next(Box<Formula>),
    /// Weak next: true at the last position of a trace.
    WeakNext(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    Release(Box<Formula>, Box<Formula>),
    Eventually(Box<Formula>),
    Globally(Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(f: Formula, g: Formula) -> Self {
        Formula::And(Box::new(f), Box::new(g))
    }

    pub fn or(f: Formula, g: Formula) -> Self {
        Formula::Or(Box::new(f), Box::new(g))
    }

    pub fn implies(f: Formula, g: Formula) -> Self {
        Formula::Implies(Box::new(f), Box::new(g))
    }

    pub fn next(f: Formula) -> Self {
        Formula::Next(Box::new(f))
    }

    pub fn weak_next(f: Formula) -> Self {
        Formula::WeakNext(Box::new(f))
    }

    pub fn until(f: Formula, g: Formula) -> Self {
        Formula::Until(Box::new(f), Box::new(g))
    }

    pub fn release(f: Formula, g: Formula) -> Self {
        Formula::Release(Box::new(f), Box::new(g))
    }

    pub fn eventually(f: Formula) -> Self {
        Formula::Eventually(Box::new(f))
    }

    pub fn globally(f: Formula) -> Self {
        Formula::Globally(Box::new(f))
    }

    /// `X X ... X f` with `n` strong nexts.
    pub fn next_n(n: usize, f: Formula) -> Self {
        (0..n).fold(f, |acc, _| Formula::next(acc))
    }

    /// Rewrites derived operators into the core kinds:
    ///
    /// | surface  | core              |
    /// |----------|-------------------|
    /// | `F f`    | `true U f`        |
    /// | `G f`    | `!(true U !f)`    |
    /// | `WX f`   | `!X !f`           |
    /// | `f -> g` | `!f \| g`         |
    /// | `false`  | `!true`           |
    pub fn desugar(&self) -> Formula {
        use Formula::*;
        match self {
            True => True,
            False => Formula::not(True),
            Atom(a) => Atom(a.clone()),
            Not(f) => Formula::not(f.desugar()),
            And(f, g) => Formula::and(f.desugar(), g.desugar()),
            Or(f, g) => Formula::or(f.desugar(), g.desugar()),
            Implies(f, g) => Formula::or(Formula::not(f.desugar()), g.desugar()),
            Next(f) => Formula::next(f.desugar()),
            WeakNext(f) => Formula::not(Formula::next(Formula::not(f.desugar()))),
            Until(f, g) => Formula::until(f.desugar(), g.desugar()),
            Release(f, g) => Formula::release(f.desugar(), g.desugar()),
            Eventually(f) => Formula::until(True, f.desugar()),
            Globally(f) => Formula::not(Formula::until(True, Formula::not(f.desugar()))),
        }
    }

    /// True if the formula only uses the core kinds produced by [`Formula::desugar`].
    pub fn is_core(&self) -> bool {
        use Formula::*;
        match self {
            True | Atom(_) => true,
            False | Implies(..) | WeakNext(_) | Eventually(_) | Globally(_) => false,
            Not(f) | Next(f) => f.is_core(),
            And(f, g) | Or(f, g) | Until(f, g) | Release(f, g) => f.is_core() && g.is_core(),
        }
    }

    pub fn children(&self) -> Vec<&Formula> {
        use Formula::*;
        match self {
            True | False | Atom(_) => vec![],
            Not(f) | Next(f) | WeakNext(f) | Eventually(f) | Globally(f) => vec![f],
            And(f, g) | Or(f, g) | Implies(f, g) | Until(f, g) | Release(f, g) => vec![f, g],
        }
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    pub(crate) fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        if let Formula::Atom(a) = self {
            out.insert(a.clone());
        }
        for c in self.children() {
            c.collect_atoms(out);
        }
    }

    /// Operator nesting depth; atoms and constants have depth 0.
    pub fn depth(&self) -> usize {
        self.children()
            .into_iter()
            .map(|c| c.depth() + 1)
            .max()
            .unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Formula::size).sum::<usize>()
    }
}

/// Fully parenthesizes binary operators so the output parses back to an
/// identical tree regardless of precedence.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Formula::*;
        match self {
            True => write!(f, "true"),
            False => write!(f, "false"),
            Atom(a) => write!(f, "{a}"),
            Not(g) => write!(f, "!{g}"),
            Next(g) => write!(f, "X {g}"),
            WeakNext(g) => write!(f, "WX {g}"),
            Eventually(g) => write!(f, "F {g}"),
            Globally(g) => write!(f, "G {g}"),
            And(g, h) => write!(f, "({g} & {h})"),
            Or(g, h) => write!(f, "({g} | {h})"),
            Implies(g, h) => write!(f, "({g} -> {h})"),
            Until(g, h) => write!(f, "({g} U {h})"),
            Release(g, h) => write!(f, "({g} R {h})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> Formula {
        Formula::atom("a")
    }

    fn b() -> Formula {
        Formula::atom("b")
    }

    #[test]
    fn implies_of_eventually_and_globally_desugars_by_hand() {
        let f = Formula::implies(Formula::eventually(a()), Formula::globally(b()));
        let expected = Formula::or(
            Formula::not(Formula::until(Formula::True, a())),
            Formula::not(Formula::until(Formula::True, Formula::not(b()))),
        );
        assert_eq!(f.desugar(), expected);
        assert!(expected.is_core());
        assert!(!f.is_core());
    }

    #[test]
    fn weak_next_and_false() {
        assert_eq!(
            Formula::weak_next(a()).desugar(),
            Formula::not(Formula::next(Formula::not(a())))
        );
        assert_eq!(Formula::False.desugar(), Formula::not(Formula::True));
    }

    #[test]
    fn display_is_parenthesized() {
        let f = Formula::and(Formula::not(a()), Formula::next(Formula::until(a(), b())));
        assert_eq!(f.to_string(), "(!a & X (a U b))");
        assert_eq!(Formula::next_n(2, b()).to_string(), "X X b");
    }

    #[test]
    fn depth_and_atoms() {
        let f = Formula::until(Formula::not(a()), Formula::next(b()));
        assert_eq!(f.depth(), 2);
        assert_eq!(f.size(), 5);
        assert_eq!(f.atoms().into_iter().collect::<Vec<_>>(), vec!["a", "b"]);
    }
}
