//! Formulas of the quantum computational language, their concrete syntax,
//! syntactical trees and gate trees.

mod parse;
mod tree;

use std::collections::BTreeSet;
use std::fmt;

pub use parse::{parse, ParseError};
pub use tree::{GateTree, NodeId, Occurrence, SyntacticalTree};

/// Core abstract syntax. Conjunction and disjunction are expanded at parse
/// time into Toffoli and negation nodes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(u32),
    True,
    False,
    Not(Box<Formula>),
    SqrtId(Box<Formula>),
    SqrtNot(Box<Formula>),
    Toffoli(Box<Formula>, Box<Formula>, Box<Formula>),
    Xor(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(id: u32) -> Self {
        assert!(id > 0, "atom ids start at 1");
        Formula::Atom(id)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn sqrt_id(f: Formula) -> Self {
        Formula::SqrtId(Box::new(f))
    }

    pub fn sqrt_not(f: Formula) -> Self {
        Formula::SqrtNot(Box::new(f))
    }

    pub fn toffoli(a: Formula, b: Formula, c: Formula) -> Self {
        Formula::Toffoli(Box::new(a), Box::new(b), Box::new(c))
    }

    pub fn xor(a: Formula, b: Formula) -> Self {
        Formula::Xor(Box::new(a), Box::new(b))
    }

    /// `a & b := T(a, b, f)`.
    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::toffoli(a, b, Formula::False)
    }

    /// `a | b := ~(~a & ~b)`.
    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::not(Formula::and(Formula::not(a), Formula::not(b)))
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::Atom(_) | Formula::True | Formula::False)
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Atom(_) | Formula::True | Formula::False => vec![],
            Formula::Not(a) | Formula::SqrtId(a) | Formula::SqrtNot(a) => vec![a],
            Formula::Toffoli(a, b, c) => vec![a, b, c],
            Formula::Xor(a, b) => vec![a, b],
        }
    }

    /// Number of occurrences of atomic formulas, constants included.
    pub fn atomic_complexity(&self) -> usize {
        if self.is_atomic() {
            1
        } else {
            self.children().iter().map(|c| c.atomic_complexity()).sum()
        }
    }

    /// Atom ids occurring in the formula.
    pub fn atoms(&self) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<u32>) {
        if let Formula::Atom(id) = self {
            out.insert(*id);
        }
        for c in self.children() {
            c.collect_atoms(out);
        }
    }

    /// Number of connective occurrences.
    pub fn connective_count(&self) -> usize {
        if self.is_atomic() {
            0
        } else {
            1 + self
                .children()
                .iter()
                .map(|c| c.connective_count())
                .sum::<usize>()
        }
    }

    pub fn depth(&self) -> usize {
        self.children()
            .iter()
            .map(|c| c.depth() + 1)
            .max()
            .unwrap_or(0)
    }

    pub fn is_subformula_of(&self, context: &Formula) -> bool {
        self == context || context.children().iter().any(|c| self.is_subformula_of(c))
    }

    /// Uses only the Boolean connectives: negation, conjunction (`T(a, b, f)`),
    /// exclusive or, plus constants.
    pub fn is_boolean(&self) -> bool {
        match self {
            Formula::Atom(_) | Formula::True | Formula::False => true,
            Formula::Not(a) => a.is_boolean(),
            Formula::Xor(a, b) => a.is_boolean() && b.is_boolean(),
            Formula::Toffoli(a, b, c) => **c == Formula::False && a.is_boolean() && b.is_boolean(),
            Formula::SqrtId(_) | Formula::SqrtNot(_) => false,
        }
    }

    /// The operands `(a, b)` when the formula has the shape `~(~a & ~b)`.
    fn as_or(&self) -> Option<(&Formula, &Formula)> {
        if let Formula::Not(inner) = self {
            if let Formula::Toffoli(x, y, z) = inner.as_ref() {
                if let (Formula::Not(a), Formula::Not(b), Formula::False) =
                    (x.as_ref(), y.as_ref(), z.as_ref())
                {
                    return Some((a, b));
                }
            }
        }
        None
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Xor(..) => 0,
            _ if self.as_or().is_some() => 1,
            Formula::Toffoli(_, _, c) if **c == Formula::False => 2,
            _ => 3,
        }
    }

    fn write_operand(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        if self.precedence() < min_prec {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some((a, b)) = self.as_or() {
            a.write_operand(f, 1)?;
            f.write_str(" | ")?;
            return b.write_operand(f, 2);
        }
        match self {
            Formula::Atom(id) => write!(f, "q{id}"),
            Formula::True => f.write_str("t"),
            Formula::False => f.write_str("f"),
            Formula::Not(a) => {
                f.write_str("~")?;
                a.write_operand(f, 3)
            }
            Formula::SqrtId(a) => {
                f.write_str("sid ")?;
                a.write_operand(f, 3)
            }
            Formula::SqrtNot(a) => {
                f.write_str("snot ")?;
                a.write_operand(f, 3)
            }
            Formula::Toffoli(a, b, c) if **c == Formula::False => {
                a.write_operand(f, 2)?;
                f.write_str(" & ")?;
                b.write_operand(f, 3)
            }
            Formula::Toffoli(a, b, c) => write!(f, "T({a}, {b}, {c})"),
            Formula::Xor(a, b) => {
                a.write_operand(f, 0)?;
                f.write_str(" (+) ")?;
                b.write_operand(f, 1)
            }
        }
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(i: u32) -> Formula {
        Formula::atom(i)
    }

    #[test]
    fn atomic_complexity_examples() {
        assert_eq!(Formula::and(q(1), q(1)).atomic_complexity(), 3);
        assert_eq!(q(1).atomic_complexity(), 1);
        assert_eq!(parse("(q1 & q2) & q3").unwrap().atomic_complexity(), 5);
    }

    #[test]
    fn printer_uses_sugar() {
        assert_eq!(
            Formula::and(q(1), Formula::not(q(1))).to_string(),
            "q1 & ~q1"
        );
        assert_eq!(Formula::or(q(1), q(2)).to_string(), "q1 | q2");
        assert_eq!(
            Formula::toffoli(q(1), q(2), q(3)).to_string(),
            "T(q1, q2, q3)"
        );
        assert_eq!(
            Formula::and(q(1), Formula::and(q(2), q(3))).to_string(),
            "q1 & (q2 & q3)"
        );
        assert_eq!(
            Formula::and(Formula::and(q(1), q(2)), q(3)).to_string(),
            "q1 & q2 & q3"
        );
        assert_eq!(
            Formula::not(Formula::xor(q(1), q(2))).to_string(),
            "~(q1 (+) q2)"
        );
        assert_eq!(
            Formula::sqrt_id(Formula::sqrt_not(q(4))).to_string(),
            "sid snot q4"
        );
    }

    #[test]
    fn subformulas_and_fragments() {
        let g = parse("(q1 & q2) | ~q3").unwrap();
        assert!(parse("q1 & q2").unwrap().is_subformula_of(&g));
        assert!(parse("~q3").unwrap().is_subformula_of(&g));
        assert!(!parse("q2 & q1").unwrap().is_subformula_of(&g));
        assert!(g.is_boolean());
        assert!(!parse("sid q1").unwrap().is_boolean());
        assert!(!parse("T(q1, q2, q3)").unwrap().is_boolean());
        assert_eq!(g.atoms().into_iter().collect::<Vec<_>>(), vec![1, 2, 3]);
    }

    fn arb_formula() -> impl Strategy<Value = Formula> {
        let leaf = prop_oneof![
            (1u32..5).prop_map(Formula::Atom),
            Just(Formula::True),
            Just(Formula::False),
        ];
        leaf.prop_recursive(5, 40, 3, |inner| {
            prop_oneof![
                inner.clone().prop_map(Formula::not),
                inner.clone().prop_map(Formula::sqrt_id),
                inner.clone().prop_map(Formula::sqrt_not),
                (inner.clone(), inner.clone(), inner.clone())
                    .prop_map(|(a, b, c)| Formula::toffoli(a, b, c)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::xor(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
                (inner.clone(), inner).prop_map(|(a, b)| Formula::or(a, b)),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_then_parse_round_trips(f in arb_formula()) {
            let text = f.to_string();
            prop_assert_eq!(parse(&text).unwrap(), f);
        }
    }
}
