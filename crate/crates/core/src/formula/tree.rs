//! Syntactical trees (level decompositions) and their gate trees.

use std::fmt;

use super::Formula;
use crate::error::{Error, Result};
use crate::gates::{Gate, LevelGate};
use crate::perspective::TruthPerspective;
use crate::tensor::Qumix;

pub type NodeId = usize;

#[derive(Clone, Debug)]
struct Node {
    formula: Formula,
    children: Vec<NodeId>,
    offset: usize,
    width: usize,
    /// 1-based level at which the node first appears.
    level: usize,
}

/// An occurrence of a formula at some level of a tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Occurrence {
    /// 1-based level (`1` is the whole formula).
    pub level: usize,
    /// 0-based position within the level.
    pub position: usize,
    pub node: NodeId,
    /// First qubit of the occurrence's block.
    pub offset: usize,
    /// Block width, the atomic complexity of the occurrence.
    pub width: usize,
}

/// Level decomposition of a formula: level 1 holds the formula itself and
/// each following level drops the principal connective of every molecular
/// formula while repeating atomic ones.
#[derive(Clone, Debug)]
pub struct SyntacticalTree {
    nodes: Vec<Node>,
    levels: Vec<Vec<NodeId>>,
}

impl SyntacticalTree {
    pub fn new(formula: &Formula) -> Self {
        let mut nodes = Vec::new();
        let root = Self::insert(&mut nodes, formula, 0, 1);
        let mut levels = vec![vec![root]];
        loop {
            let last = levels.last().expect("nonempty");
            if last.iter().all(|&id| nodes[id].children.is_empty()) {
                break;
            }
            let next = last
                .iter()
                .flat_map(|&id| {
                    if nodes[id].children.is_empty() {
                        vec![id]
                    } else {
                        nodes[id].children.clone()
                    }
                })
                .collect();
            levels.push(next);
        }
        Self { nodes, levels }
    }

    fn insert(nodes: &mut Vec<Node>, f: &Formula, offset: usize, level: usize) -> NodeId {
        let id = nodes.len();
        nodes.push(Node {
            formula: f.clone(),
            children: vec![],
            offset,
            width: f.atomic_complexity(),
            level,
        });
        let mut off = offset;
        let mut children = Vec::new();
        for c in f.children() {
            children.push(Self::insert(nodes, c, off, level + 1));
            off += c.atomic_complexity();
        }
        nodes[id].children = children;
        id
    }

    pub fn formula(&self) -> &Formula {
        &self.nodes[0].formula
    }

    pub fn height(&self) -> usize {
        self.levels.len()
    }

    /// Qubits of the semantic space, the atomic complexity of the formula.
    pub fn n_qubits(&self) -> usize {
        self.nodes[0].width
    }

    /// Node ids at a 1-based level.
    pub fn level(&self, level: usize) -> Result<&[NodeId]> {
        self.levels
            .get(level.wrapping_sub(1))
            .map(Vec::as_slice)
            .ok_or(Error::IndexOutOfRange {
                what: "level",
                index: level,
                len: self.height(),
            })
    }

    pub fn level_formulas(&self, level: usize) -> Result<Vec<&Formula>> {
        Ok(self
            .level(level)?
            .iter()
            .map(|&id| &self.nodes[id].formula)
            .collect())
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn node_formula(&self, node: NodeId) -> &Formula {
        &self.nodes[node].formula
    }

    pub fn node_span(&self, node: NodeId) -> (usize, usize) {
        (self.nodes[node].offset, self.nodes[node].width)
    }

    pub fn node_children(&self, node: NodeId) -> &[NodeId] {
        &self.nodes[node].children
    }

    /// The level at which a node first appears (its depth plus one).
    pub fn node_level(&self, node: NodeId) -> usize {
        self.nodes[node].level
    }

    /// Occurrence handle for `(level, position)`.
    pub fn occurrence(&self, level: usize, position: usize) -> Result<Occurrence> {
        let ids = self
            .level(level)
            .map_err(|_| Error::StaleOccurrence { level, position })?;
        let node = *ids
            .get(position)
            .ok_or(Error::StaleOccurrence { level, position })?;
        Ok(self.make_occurrence(level, position, node))
    }

    /// Checks that a handle still describes this tree.
    pub fn check(&self, occ: &Occurrence) -> Result<()> {
        let ok = self
            .levels
            .get(occ.level.wrapping_sub(1))
            .and_then(|l| l.get(occ.position))
            .is_some_and(|&node| {
                node == occ.node
                    && self.nodes[node].offset == occ.offset
                    && self.nodes[node].width == occ.width
            });
        if ok {
            Ok(())
        } else {
            Err(Error::StaleOccurrence {
                level: occ.level,
                position: occ.position,
            })
        }
    }

    fn make_occurrence(&self, level: usize, position: usize, node: NodeId) -> Occurrence {
        Occurrence {
            level,
            position,
            node,
            offset: self.nodes[node].offset,
            width: self.nodes[node].width,
        }
    }

    /// Every occurrence of `sub` at every level, repeated atoms included.
    pub fn occurrences(&self, sub: &Formula) -> Vec<Occurrence> {
        let mut out = Vec::new();
        for (i, ids) in self.levels.iter().enumerate() {
            for (pos, &node) in ids.iter().enumerate() {
                if &self.nodes[node].formula == sub {
                    out.push(self.make_occurrence(i + 1, pos, node));
                }
            }
        }
        out
    }

    /// One occurrence per tree node, taken at the level where it first appears.
    pub fn primary_occurrences(&self) -> Vec<Occurrence> {
        let mut out = Vec::new();
        for (i, ids) in self.levels.iter().enumerate() {
            for (pos, &node) in ids.iter().enumerate() {
                if self.nodes[node].level == i + 1 {
                    out.push(self.make_occurrence(i + 1, pos, node));
                }
            }
        }
        out
    }

    /// Primary occurrences of a formula (distinct tree positions).
    pub fn node_occurrences(&self, sub: &Formula) -> Vec<Occurrence> {
        self.primary_occurrences()
            .into_iter()
            .filter(|o| &self.nodes[o.node].formula == sub)
            .collect()
    }

    /// Atomic occurrences of the top level, left to right.
    pub fn leaves(&self) -> Vec<Occurrence> {
        let h = self.height();
        self.levels[h - 1]
            .iter()
            .enumerate()
            .map(|(pos, &node)| self.make_occurrence(h, pos, node))
            .collect()
    }

    /// Compiles the gate tree under a truth-perspective.
    pub fn gate_tree(&self, perspective: &TruthPerspective) -> GateTree {
        let mut levels = Vec::new();
        for i in 0..self.height().saturating_sub(1) {
            let blocks = self.levels[i]
                .iter()
                .map(|&id| self.connective_gate(id))
                .collect();
            levels.push(LevelGate::new(blocks));
        }
        GateTree {
            perspective: perspective.clone(),
            levels,
        }
    }

    fn connective_gate(&self, id: NodeId) -> Gate {
        let node = &self.nodes[id];
        let w = |k: usize| self.nodes[node.children[k]].width;
        match &node.formula {
            Formula::Atom(_) | Formula::True | Formula::False => Gate::Identity(node.width),
            Formula::Not(_) => Gate::Not(node.width),
            Formula::SqrtId(_) => Gate::Hadamard(node.width),
            Formula::SqrtNot(_) => Gate::SqrtNot(node.width),
            Formula::Toffoli(..) => Gate::Toffoli(w(0), w(1), w(2)),
            Formula::Xor(..) => Gate::Xor(w(0), w(1)),
        }
    }
}

impl fmt::Display for SyntacticalTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in (1..=self.height()).rev() {
            let names: Vec<String> = self.levels[i - 1]
                .iter()
                .map(|&id| self.nodes[id].formula.to_string())
                .collect();
            writeln!(f, "Level {i}: {}", names.join(" , "))?;
        }
        Ok(())
    }
}

/// Per-level gates: `G(i)` maps the meaning of level `i + 1` to that of level `i`.
#[derive(Clone, Debug)]
pub struct GateTree {
    perspective: TruthPerspective,
    levels: Vec<LevelGate>,
}

impl GateTree {
    pub fn perspective(&self) -> &TruthPerspective {
        &self.perspective
    }

    /// Number of level gates (`height - 1`).
    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// `G(i)`, 1-based.
    pub fn gate(&self, i: usize) -> &LevelGate {
        &self.levels[i - 1]
    }

    /// Level gates from `G(h-1)` down to `G(1)`.
    pub fn top_down(&self) -> impl Iterator<Item = &LevelGate> {
        self.levels.iter().rev()
    }

    /// Meaning of level `i` from the meaning of level `i + 1`.
    pub fn descend(&self, i: usize, rho: &Qumix) -> Qumix {
        self.gate(i).apply(&self.perspective, rho)
    }

    /// Meaning of level `i + 1` from the meaning of level `i`.
    pub fn ascend(&self, i: usize, rho: &Qumix) -> Qumix {
        self.gate(i).apply_adjoint(&self.perspective, rho)
    }
}

impl fmt::Display for GateTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, g) in self.levels.iter().enumerate().rev() {
            writeln!(f, "G({}): {g}", k + 1)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use proptest::prelude::*;

    fn names(tree: &SyntacticalTree, level: usize) -> Vec<String> {
        tree.level_formulas(level)
            .unwrap()
            .into_iter()
            .map(|f| f.to_string())
            .collect()
    }

    #[test]
    fn worked_tree_has_four_levels() {
        let tree = SyntacticalTree::new(&parse("~T(q1, ~q1, f)").unwrap());
        assert_eq!(tree.height(), 4);
        assert_eq!(names(&tree, 4), ["q1", "q1", "f"]);
        assert_eq!(names(&tree, 3), ["q1", "~q1", "f"]);
        assert_eq!(names(&tree, 2), ["q1 & ~q1"]);
        assert_eq!(names(&tree, 1), ["~(q1 & ~q1)"]);
    }

    #[test]
    fn worked_gate_tree() {
        let tree = SyntacticalTree::new(&parse("~T(q1, ~q1, f)").unwrap());
        let gates = tree.gate_tree(&TruthPerspective::identity());
        let listed: Vec<String> = gates.top_down().map(|g| g.to_string()).collect();
        assert_eq!(listed, ["I(1) ⊗ NOT(1) ⊗ I(1)", "T(1,1,1)", "NOT(3)"]);
    }

    #[test]
    fn small_trees() {
        let atom = SyntacticalTree::new(&parse("q1").unwrap());
        assert_eq!(atom.height(), 1);
        assert!(atom.gate_tree(&TruthPerspective::identity()).is_empty());
        let x = SyntacticalTree::new(&parse("q1 (+) q2").unwrap());
        assert_eq!(x.height(), 2);
    }

    #[test]
    fn occurrences_and_offsets() {
        let tree = SyntacticalTree::new(&parse("q1 & q1").unwrap());
        let top: Vec<_> = tree
            .occurrences(&Formula::atom(1))
            .into_iter()
            .filter(|o| o.level == tree.height())
            .collect();
        assert_eq!(top.len(), 2);
        assert_eq!((top[0].offset, top[1].offset), (0, 1));
        let root = tree.occurrences(tree.formula());
        assert_eq!(root.len(), 1);
        assert_eq!((root[0].level, root[0].offset, root[0].width), (1, 0, 3));

        let worked = SyntacticalTree::new(&parse("~T(q1, ~q1, f)").unwrap());
        let fs = worked.occurrences(&Formula::False);
        assert_eq!(fs.iter().map(|o| o.level).collect::<Vec<_>>(), [3, 4]);
        assert!(fs.iter().all(|o| o.offset == 2 && o.width == 1));
        assert!(worked.occurrence(5, 0).is_err());
        assert!(worked.occurrence(4, 3).is_err());
    }

    fn arb_formula() -> impl Strategy<Value = Formula> {
        let leaf = prop_oneof![
            (1u32..7).prop_map(Formula::Atom),
            Just(Formula::True),
            Just(Formula::False),
        ];
        leaf.prop_recursive(5, 24, 3, |inner| {
            prop_oneof![
                inner.clone().prop_map(Formula::not),
                inner.clone().prop_map(Formula::sqrt_id),
                inner.clone().prop_map(Formula::sqrt_not),
                (inner.clone(), inner.clone(), inner.clone())
                    .prop_map(|(a, b, c)| Formula::toffoli(a, b, c)),
                (inner.clone(), inner).prop_map(|(a, b)| Formula::xor(a, b)),
            ]
        })
    }

    proptest! {
        #[test]
        fn levels_conserve_width(f in arb_formula()) {
            let tree = SyntacticalTree::new(&f);
            let at = f.atomic_complexity();
            for level in 1..=tree.height() {
                let width: usize = tree
                    .level(level)
                    .unwrap()
                    .iter()
                    .map(|&id| tree.node_span(id).1)
                    .sum();
                prop_assert_eq!(width, at);
            }
            let top = tree.level_formulas(tree.height()).unwrap();
            prop_assert!(top.iter().all(|f| f.is_atomic()));
            prop_assert_eq!(tree.height(), f.depth() + 1);
            let gates = tree.gate_tree(&TruthPerspective::identity());
            for i in 1..tree.height() {
                prop_assert_eq!(gates.gate(i).width(), at);
            }
        }
    }
}
