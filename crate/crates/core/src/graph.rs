//! Breadth-first reduct graphs.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;

use crate::reduction::{one_step_reducts, Bounds, RedexPosition};
use crate::term::Term;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeState {
    /// Every one-step reduct is recorded as an edge.
    Expanded,
    /// Expansion stopped part way because the node budget ran out.
    Partial,
    /// Never expanded: too large, too deep, or the budget ran out first.
    Unexpanded,
}

#[derive(Clone, Debug, Serialize)]
pub struct Edge {
    pub from: usize,
    pub position: RedexPosition,
    pub to: usize,
}

/// Reducts of a term, deduplicated up to alpha equivalence. Node 0 is the root.
#[derive(Clone, Debug, Serialize)]
pub struct ReductGraph {
    pub nodes: Vec<Term>,
    pub states: Vec<NodeState>,
    pub edges: Vec<Edge>,
    /// Nodes left unexpanded because they exceed the term-size cap.
    pub clipped: Vec<usize>,
    pub bounds: Bounds,
}

impl ReductGraph {
    /// True when exploration was exhaustive: the graph is the full reduct set.
    pub fn is_closed(&self) -> bool {
        self.states.iter().all(|s| *s == NodeState::Expanded)
    }

    pub fn out_degree(&self, node: usize) -> usize {
        self.edges.iter().filter(|e| e.from == node).count()
    }

    pub fn successors(&self, node: usize) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.from == node)
    }

    /// Every expanded node has exactly one outgoing edge and node `i` steps to `i + 1`.
    pub fn is_simple_path(&self) -> bool {
        let mut out = vec![Vec::new(); self.nodes.len()];
        for e in &self.edges {
            out[e.from].push(e.to);
        }
        out.iter().enumerate().all(|(i, succ)| match self.states[i] {
            NodeState::Expanded => succ.as_slice() == [i + 1],
            NodeState::Partial | NodeState::Unexpanded => succ.len() <= 1,
        })
    }

    pub fn position_of(&self, t: &Term) -> Option<usize> {
        self.nodes.iter().position(|n| n == t)
    }

    /// Graphviz rendering: nodes labelled by printed terms, edges by redex paths.
    pub fn to_dot(&self) -> String {
        fn esc(s: &str) -> String {
            s.replace('\\', "\\\\").replace('"', "\\\"")
        }
        let mut out = String::from("digraph reducts {\n");
        for (i, n) in self.nodes.iter().enumerate() {
            let style = match self.states[i] {
                NodeState::Expanded => "",
                NodeState::Partial | NodeState::Unexpanded => ", style=dashed",
            };
            let _ = writeln!(out, "  n{i} [label=\"{}\"{style}];", esc(&n.to_string()));
        }
        for e in &self.edges {
            let _ = writeln!(out, "  n{} -> n{} [label=\"{}\"];", e.from, e.to, e.position);
        }
        out.push_str("}\n");
        out
    }
}

/// Breadth-first closure of `t` under single beta steps.
///
/// Nodes further than `max_steps` from the root or larger than
/// `max_term_size` are kept but not expanded; at most `max_nodes` nodes are
/// created.
pub fn reduct_set(t: &Term, b: &Bounds) -> ReductGraph {
    let mut g = ReductGraph {
        nodes: vec![t.clone()],
        states: vec![NodeState::Unexpanded],
        edges: Vec::new(),
        clipped: Vec::new(),
        bounds: *b,
    };
    let mut index: HashMap<Term, usize> = HashMap::new();
    index.insert(t.clone(), 0);
    let mut queue = VecDeque::from([(0usize, 0usize)]);
    let mut out_of_nodes = false;
    while let Some((i, depth)) = queue.pop_front() {
        if out_of_nodes {
            break;
        }
        if depth >= b.max_steps {
            continue;
        }
        let term = g.nodes[i].clone();
        if term.size() as usize > b.max_term_size {
            g.clipped.push(i);
            continue;
        }
        let mut state = NodeState::Expanded;
        for (pos, r) in one_step_reducts(&term) {
            let to = match index.get(&r) {
                Some(&j) => j,
                None => {
                    if g.nodes.len() >= b.max_nodes {
                        out_of_nodes = true;
                        state = NodeState::Partial;
                        continue;
                    }
                    let j = g.nodes.len();
                    g.nodes.push(r.clone());
                    g.states.push(NodeState::Unexpanded);
                    index.insert(r, j);
                    queue.push_back((j, depth + 1));
                    j
                }
            };
            g.edges.push(Edge {
                from: i,
                position: pos,
                to,
            });
        }
        g.states[i] = state;
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    #[test]
    fn normal_form_is_a_closed_single_node() {
        let g = reduct_set(&parse("\\x y. x").unwrap(), &Bounds::default());
        assert_eq!(g.nodes.len(), 1);
        assert!(g.edges.is_empty());
        assert!(g.is_closed());
    }

    #[test]
    fn omega_has_a_self_loop() {
        let g = reduct_set(&parse("(\\x. x x) (\\x. x x)").unwrap(), &Bounds::default());
        assert_eq!(g.nodes.len(), 1);
        assert_eq!(g.edges.len(), 1);
        assert_eq!((g.edges[0].from, g.edges[0].to), (0, 0));
        assert!(g.is_closed());
    }

    #[test]
    fn diamond_is_deduplicated() {
        let g = reduct_set(&parse("(\\x. x) ((\\y. y) z)").unwrap(), &Bounds::default());
        // both one-step reducts are alpha equivalent to \y. y applied to z
        assert_eq!(g.nodes.len(), 3);
        assert_eq!(g.edges.len(), 3);
        assert!(g.is_closed());
        assert!(g.to_dot().contains("label=\"z\""));
    }

    #[test]
    fn node_budget_marks_the_graph_open() {
        let t = parse("(\\x. x x x) (\\x. x x x)").unwrap();
        let g = reduct_set(&t, &Bounds::default().with_nodes(5));
        assert_eq!(g.nodes.len(), 5);
        assert!(!g.is_closed());
    }
}
