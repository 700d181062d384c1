use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::formula::Formula;

/// What a node of an [`AbstractAF`] stands for.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum NodeLabel {
    /// A set of assumptions, canonically sorted.
    Assumptions(Vec<Formula>),
    /// A support/conclusion pair; the support is canonically sorted.
    Argument { support: Vec<Formula>, conclusion: Formula },
}

impl NodeLabel {
    pub fn support(&self) -> &[Formula] {
        match self {
            NodeLabel::Assumptions(set) => set,
            NodeLabel::Argument { support, .. } => support,
        }
    }
}

fn write_set(f: &mut fmt::Formatter<'_>, set: &[Formula]) -> fmt::Result {
    f.write_str("{")?;
    for (i, formula) in set.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{formula}")?;
    }
    f.write_str("}")
}

impl fmt::Display for NodeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeLabel::Assumptions(set) => write_set(f, set),
            NodeLabel::Argument { support, conclusion } => {
                f.write_str("<")?;
                write_set(f, support)?;
                write!(f, ", {conclusion}>")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AfError {
    #[error("attack ({from}, {to}) refers to a node outside 0..{len}")]
    DanglingAttack { from: usize, to: usize, len: usize },
    #[error("duplicate node label {0}")]
    DuplicateLabel(String),
}

/// Nodes plus a directed attack relation. Edges are stored sorted and
/// deduplicated; attacker lists are kept per node for the semantics.
#[derive(Debug, Clone, PartialEq)]
pub struct AbstractAF {
    nodes: Vec<NodeLabel>,
    attacks: Vec<(usize, usize)>,
    attackers: Vec<Vec<usize>>,
}

impl AbstractAF {
    pub fn new(
        nodes: Vec<NodeLabel>,
        attacks: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, AfError> {
        let mut seen = HashSet::with_capacity(nodes.len());
        for label in &nodes {
            if !seen.insert(label) {
                return Err(AfError::DuplicateLabel(label.to_string()));
            }
        }
        let len = nodes.len();
        let mut attacks: Vec<(usize, usize)> = attacks.into_iter().collect();
        if let Some(&(from, to)) = attacks.iter().find(|(a, b)| *a >= len || *b >= len) {
            return Err(AfError::DanglingAttack { from, to, len });
        }
        attacks.sort_unstable();
        attacks.dedup();
        let mut attackers = vec![Vec::new(); len];
        for &(from, to) in &attacks {
            attackers[to].push(from);
        }
        for list in &mut attackers {
            list.sort_unstable();
        }
        Ok(Self {
            nodes,
            attacks,
            attackers,
        })
    }

    /// Framework over anonymous nodes; labels are `{n0}`, `{n1}`, ...
    pub fn unlabeled(len: usize, attacks: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, AfError> {
        let nodes = (0..len)
            .map(|i| NodeLabel::Assumptions(vec![Formula::Atom(format!("n{i}"))]))
            .collect();
        Self::new(nodes, attacks)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[NodeLabel] {
        &self.nodes
    }

    pub fn label(&self, node: usize) -> &NodeLabel {
        &self.nodes[node]
    }

    pub fn attacks(&self) -> &[(usize, usize)] {
        &self.attacks
    }

    /// `node⁻`, sorted ascending.
    pub fn attackers(&self, node: usize) -> &[usize] {
        &self.attackers[node]
    }

    pub fn is_attacked(&self, node: usize) -> bool {
        !self.attackers[node].is_empty()
    }

    pub fn has_attack(&self, from: usize, to: usize) -> bool {
        self.attackers[to].binary_search(&from).is_ok()
    }

    pub fn position(&self, label: &NodeLabel) -> Option<usize> {
        self.nodes.iter().position(|l| l == label)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_dangling_and_duplicates() {
        assert_eq!(
            AbstractAF::unlabeled(2, [(0, 2)]),
            Err(AfError::DanglingAttack { from: 0, to: 2, len: 2 })
        );
        let a = NodeLabel::Assumptions(vec![]);
        assert!(matches!(
            AbstractAF::new(vec![a.clone(), a], []),
            Err(AfError::DuplicateLabel(_))
        ));
    }

    #[test]
    fn attackers_are_sorted_and_deduplicated() {
        let af = AbstractAF::unlabeled(3, [(2, 0), (1, 0), (2, 0), (0, 0)]).unwrap();
        assert_eq!(af.attackers(0), &[0, 1, 2]);
        assert_eq!(af.attacks().len(), 3);
        assert!(af.has_attack(0, 0));
        assert!(!af.is_attacked(1));
    }

    #[test]
    fn label_display() {
        let p = Formula::Atom("p".into());
        let np = Formula::not(p.clone());
        assert_eq!(NodeLabel::Assumptions(vec![p.clone(), np.clone()]).to_string(), "{p,!p}");
        assert_eq!(NodeLabel::Assumptions(vec![]).to_string(), "{}");
        let arg = NodeLabel::Argument {
            support: vec![p.clone()],
            conclusion: p,
        };
        assert_eq!(arg.to_string(), "<{p}, p>");
    }
}
