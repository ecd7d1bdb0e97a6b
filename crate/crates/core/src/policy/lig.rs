//! Literal-clause incidence graph of one component.
//!
//! Node numbering is deterministic: variables ascending, each contributing an
//! adjacent pair of literal nodes (`2i` positive, `2i+1` negative), then
//! clauses ascending. An edge connects a clause node to a literal node iff
//! that literal occurs unassigned in the (active) clause.

use crate::counting::Component;
use crate::formula::{Literal, Trail, Var};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lig {
    /// Component variables, ascending; literal nodes `2i`/`2i+1` belong to
    /// `vars[i]`.
    pub vars: Vec<Var>,
    /// Component clause ids, ascending; clause node `j` is `clause_ids[j]`.
    pub clause_ids: Vec<u32>,
    /// Per clause node, the incident literal nodes (ascending).
    pub clause_adj: Vec<Vec<u32>>,
    /// Per literal node, the incident clause nodes (ascending).
    pub literal_adj: Vec<Vec<u32>>,
}

impl Lig {
    pub fn num_literal_nodes(&self) -> usize {
        self.vars.len() * 2
    }

    pub fn num_clause_nodes(&self) -> usize {
        self.clause_ids.len()
    }

    pub fn literal_of_node(&self, node: usize) -> Literal {
        Literal::new(self.vars[node / 2], node % 2 == 0)
    }

    pub fn node_of_literal(&self, lit: Literal) -> usize {
        let i = self
            .vars
            .binary_search(&lit.var())
            .expect("literal outside this graph");
        i * 2 + usize::from(!lit.is_positive())
    }

    /// All `(clause_node, literal_node)` pairs, in clause order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.clause_adj
            .iter()
            .enumerate()
            .flat_map(|(c, adj)| adj.iter().map(move |&l| (c as u32, l)))
    }
}

pub fn build_lig(component: &Component, trail: &Trail<'_>) -> Lig {
    let vars = component.vars.clone();
    let clause_ids = component.clause_ids.clone();
    let mut clause_adj: Vec<Vec<u32>> = Vec::with_capacity(clause_ids.len());
    let mut literal_adj: Vec<Vec<u32>> = vec![Vec::new(); vars.len() * 2];
    for (cnode, &cid) in clause_ids.iter().enumerate() {
        debug_assert!(trail.clause_is_active(cid));
        let mut adj: Vec<u32> = trail
            .residual_literals(cid)
            .map(|lit| {
                let i = vars
                    .binary_search(&lit.var())
                    .expect("residual literal outside its component");
                (i * 2 + usize::from(!lit.is_positive())) as u32
            })
            .collect();
        adj.sort_unstable();
        for &lnode in &adj {
            literal_adj[lnode as usize].push(cnode as u32);
        }
        clause_adj.push(adj);
    }
    Lig {
        vars,
        clause_ids,
        clause_adj,
        literal_adj,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::{find_components, Component};
    use crate::formula::parse_dimacs;

    fn example() -> crate::formula::CnfFormula {
        parse_dimacs("p cnf 5 3\n1 -4 0\n-1 -2 0\n3 5 0\n").unwrap()
    }

    #[test]
    fn single_clause_component_has_two_edges() {
        let f = example();
        let trail = Trail::new(&f);
        let root = Component::root(&trail);
        let comps = find_components(&trail, &root);
        // Second component is {(x3 v x5)} over {3, 5}.
        let c = &comps[1];
        assert_eq!(c.vars, vec![3, 5]);
        let lig = build_lig(c, &trail);
        assert_eq!(lig.num_literal_nodes(), 4);
        assert_eq!(lig.num_clause_nodes(), 1);
        let edges: Vec<_> = lig.edges().collect();
        assert_eq!(edges, vec![(0, 0), (0, 2)]); // x3 and x5, both positive
    }

    #[test]
    fn node_literal_round_trip_and_ordering() {
        let f = example();
        let trail = Trail::new(&f);
        let root = Component::root(&trail);
        let comps = find_components(&trail, &root);
        let lig = build_lig(&comps[0], &trail);
        assert_eq!(lig.vars, vec![1, 2, 4]);
        assert_eq!(lig.literal_of_node(0), Literal::positive(1));
        assert_eq!(lig.literal_of_node(1), Literal::negative(1));
        assert_eq!(lig.literal_of_node(4), Literal::positive(4));
        for node in 0..lig.num_literal_nodes() {
            assert_eq!(lig.node_of_literal(lig.literal_of_node(node)), node);
        }
    }

    #[test]
    fn assigned_vars_and_satisfied_clauses_are_excluded() {
        let f = example();
        let mut trail = Trail::new(&f);
        // x1 satisfies clause 0 and forces -x2, satisfying clause 1; only the
        // {3, 5} component survives.
        assert!(!trail.unit_propagate(Literal::positive(1)).conflict);
        let root = Component::root(&trail);
        let comps = find_components(&trail, &root);
        assert_eq!(comps.len(), 1);
        let lig = build_lig(&comps[0], &trail);
        assert_eq!(lig.vars, vec![3, 5]);
        assert_eq!(lig.clause_ids, vec![2]);
    }

    #[test]
    fn negative_occurrences_map_to_odd_nodes() {
        let f = parse_dimacs("p cnf 2 1\n-1 2 0\n").unwrap();
        let trail = Trail::new(&f);
        let root = Component::root(&trail);
        let lig = build_lig(&find_components(&trail, &root)[0], &trail);
        let edges: Vec<_> = lig.edges().collect();
        assert_eq!(edges, vec![(0, 1), (0, 2)]);
    }
}
