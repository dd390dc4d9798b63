//! 2-SAT by strongly connected components of the implication graph, and the
//! encoding of list coloring with lists of size at most two as 2-SAT.

use std::fmt::Write as _;

use crate::color::{Color, ColorSet, Palette};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::instance::ColoringInstance;

/// A literal: variable id and polarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit {
    pub var: usize,
    pub negated: bool,
}

impl Lit {
    pub fn pos(var: usize) -> Lit {
        Lit {
            var,
            negated: false,
        }
    }

    pub fn neg(var: usize) -> Lit {
        Lit { var, negated: true }
    }

    pub fn negate(self) -> Lit {
        Lit {
            var: self.var,
            negated: !self.negated,
        }
    }

    /// Whether the literal holds under `assignment`.
    pub fn eval(self, assignment: &[bool]) -> bool {
        assignment[self.var] != self.negated
    }

    #[inline]
    fn node(self) -> usize {
        2 * self.var + self.negated as usize
    }
}

/// A 2-CNF formula. A unit clause is a pair of identical literals.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TwoCnf {
    pub variable_count: usize,
    pub clauses: Vec<(Lit, Lit)>,
}

impl TwoCnf {
    pub fn new(variable_count: usize) -> Self {
        TwoCnf {
            variable_count,
            clauses: Vec::new(),
        }
    }

    pub fn add_var(&mut self) -> usize {
        self.variable_count += 1;
        self.variable_count - 1
    }

    pub fn add_clause(&mut self, a: Lit, b: Lit) {
        self.clauses.push((a, b));
    }

    pub fn add_unit(&mut self, a: Lit) {
        self.clauses.push((a, a));
    }

    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|&(a, b)| a.eval(assignment) || b.eval(assignment))
    }

    /// DIMACS CNF text, variables numbered from 1.
    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.variable_count, self.clauses.len());
        let lit = |l: Lit| {
            let v = l.var as i64 + 1;
            if l.negated {
                -v
            } else {
                v
            }
        };
        for &(a, b) in &self.clauses {
            if a == b {
                writeln!(out, "{} 0", lit(a)).unwrap();
            } else {
                writeln!(out, "{} {} 0", lit(a), lit(b)).unwrap();
            }
        }
        out
    }
}

/// Decides `f`. Returns a satisfying assignment, or `None` when unsatisfiable.
pub fn solve_2sat(f: &TwoCnf) -> Result<Option<Vec<bool>>> {
    let n = f.variable_count;
    for &(a, b) in &f.clauses {
        for l in [a, b] {
            if l.var >= n {
                return Err(Error::MalformedLiteral {
                    var: l.var,
                    variable_count: n,
                });
            }
        }
    }
    // Implication graph in CSR form: (a ∨ b) gives ¬a → b and ¬b → a.
    let nodes = 2 * n;
    let mut degree = vec![0u32; nodes + 1];
    for &(a, b) in &f.clauses {
        degree[a.negate().node()] += 1;
        degree[b.negate().node()] += 1;
    }
    let mut start = vec![0u32; nodes + 1];
    for i in 0..nodes {
        start[i + 1] = start[i] + degree[i];
    }
    let mut fill = start.clone();
    let mut targets = vec![0u32; start[nodes] as usize];
    for &(a, b) in &f.clauses {
        let (na, nb) = (a.negate().node(), b.negate().node());
        targets[fill[na] as usize] = b.node() as u32;
        fill[na] += 1;
        targets[fill[nb] as usize] = a.node() as u32;
        fill[nb] += 1;
    }

    let comp = tarjan_scc(nodes, &start, &targets);
    let mut assignment = Vec::with_capacity(n);
    for v in 0..n {
        let (p, q) = (comp[2 * v], comp[2 * v + 1]);
        if p == q {
            return Ok(None);
        }
        // Tarjan numbers components in reverse topological order.
        assignment.push(p < q);
    }
    Ok(Some(assignment))
}

/// Iterative Tarjan; returns the component index of every node.
fn tarjan_scc(nodes: usize, start: &[u32], targets: &[u32]) -> Vec<u32> {
    const UNSET: u32 = u32::MAX;
    let mut index = vec![UNSET; nodes];
    let mut low = vec![0u32; nodes];
    let mut comp = vec![UNSET; nodes];
    let mut on_stack = vec![false; nodes];
    let mut stack = Vec::new();
    let mut call: Vec<(u32, u32)> = Vec::new();
    let mut timer = 0u32;
    let mut next_comp = 0u32;

    for root in 0..nodes as u32 {
        if index[root as usize] != UNSET {
            continue;
        }
        call.push((root, start[root as usize]));
        index[root as usize] = timer;
        low[root as usize] = timer;
        timer += 1;
        stack.push(root);
        on_stack[root as usize] = true;

        while let Some(&mut (u, ref mut edge)) = call.last_mut() {
            let ui = u as usize;
            if *edge < start[ui + 1] {
                let w = targets[*edge as usize];
                *edge += 1;
                let wi = w as usize;
                if index[wi] == UNSET {
                    index[wi] = timer;
                    low[wi] = timer;
                    timer += 1;
                    stack.push(w);
                    on_stack[wi] = true;
                    call.push((w, start[wi]));
                } else if on_stack[wi] {
                    low[ui] = low[ui].min(index[wi]);
                }
            } else {
                call.pop();
                if low[ui] == index[ui] {
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w as usize] = false;
                        comp[w as usize] = next_comp;
                        if w == u {
                            break;
                        }
                    }
                    next_comp += 1;
                }
                if let Some(&(p, _)) = call.last() {
                    low[p as usize] = low[p as usize].min(low[ui]);
                }
            }
        }
    }
    comp
}

/// A list-coloring instance with lists of size ≤ 2 encoded as 2-SAT.
///
/// Every vertex with a two-color list `{c0 < c1}` owns one variable, false
/// selecting `c0` and true selecting `c1`. Singleton vertices are folded in as
/// constants.
#[derive(Debug, Clone)]
pub struct ListEncoding {
    pub cnf: TwoCnf,
    lists: Vec<ColorSet>,
    vars: Vec<Option<usize>>,
}

impl ListEncoding {
    /// Variable owned by `v`, if its list has two colors.
    pub fn var_of(&self, v: usize) -> Option<usize> {
        self.vars[v]
    }

    /// Maps a satisfying assignment back to one color per vertex.
    pub fn decode(&self, assignment: &[bool]) -> Vec<Color> {
        self.lists
            .iter()
            .zip(&self.vars)
            .map(|(list, var)| {
                let mut it = list.iter();
                let c0 = it.next().expect("non-empty list");
                match var {
                    Some(x) if assignment[*x] => it.next().unwrap(),
                    _ => c0,
                }
            })
            .collect()
    }

    /// Encode, solve and decode in one step.
    pub fn solve(&self) -> Option<Vec<Color>> {
        solve_2sat(&self.cnf)
            .expect("encoding literals are in range")
            .map(|a| self.decode(&a))
    }
}

/// "Vertex `v` takes color `c`", as a literal or a constant.
enum Choice {
    Const(bool),
    Lit(Lit),
}

/// Encodes "assign every vertex a color from its list so that every edge maps
/// to a compatible color pair". For each edge `uv` and each incompatible pair
/// `(a, b)` with `a ∈ L(u)` and `b ∈ L(v)`, a clause forbids that pair.
pub fn encode_list_pairs(
    graph: &Graph,
    lists: &[ColorSet],
    palette: &Palette,
) -> Result<ListEncoding> {
    let n = graph.vertex_count();
    if lists.len() != n {
        return Err(Error::ContractViolation(format!(
            "{} lists for {} vertices",
            lists.len(),
            n
        )));
    }
    let mut cnf = TwoCnf::new(0);
    let mut vars = vec![None; n];
    for (v, list) in lists.iter().enumerate() {
        match list.len() {
            1 => {}
            2 => vars[v] = Some(cnf.add_var()),
            k => {
                return Err(Error::ContractViolation(format!(
                    "vertex {v} has a list of size {k}; expected 1 or 2"
                )))
            }
        }
    }
    let choice = |v: usize, c: Color| -> Choice {
        match vars[v] {
            None => Choice::Const(lists[v].contains(c)),
            Some(x) => {
                if lists[v].min() == Some(c) {
                    Choice::Lit(Lit::neg(x))
                } else {
                    Choice::Lit(Lit::pos(x))
                }
            }
        }
    };
    let mut contradiction = false;
    for (u, v) in graph.edges() {
        for a in lists[u].iter() {
            for b in lists[v].iter() {
                if palette.allows(a, b) {
                    continue;
                }
                // Forbid (u = a) ∧ (v = b).
                match (choice(u, a), choice(v, b)) {
                    (Choice::Const(true), Choice::Const(true)) => contradiction = true,
                    (Choice::Const(true), Choice::Lit(l))
                    | (Choice::Lit(l), Choice::Const(true)) => cnf.add_unit(l.negate()),
                    (Choice::Lit(l), Choice::Lit(m)) => cnf.add_clause(l.negate(), m.negate()),
                    _ => {}
                }
            }
        }
    }
    if contradiction {
        let z = cnf.add_var();
        cnf.add_unit(Lit::pos(z));
        cnf.add_unit(Lit::neg(z));
    }
    Ok(ListEncoding {
        cnf,
        lists: lists.to_vec(),
        vars,
    })
}

/// Encoding of a 3-coloring instance whose lists all have size 1 or 2: for
/// every edge `uv` and color `c ∈ L(u) ∩ L(v)` one clause forbids both ends
/// taking `c`.
pub fn edwards_encode(inst: &ColoringInstance) -> Result<ListEncoding> {
    encode_list_pairs(inst.graph(), inst.lists(), &Palette::three())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cnf(n: usize, clauses: &[(Lit, Lit)]) -> TwoCnf {
        TwoCnf {
            variable_count: n,
            clauses: clauses.to_vec(),
        }
    }

    #[test]
    fn small_formulas() {
        let (x, y) = (0, 1);
        let f = cnf(2, &[(Lit::pos(x), Lit::pos(y)), (Lit::neg(x), Lit::pos(y))]);
        let a = solve_2sat(&f).unwrap().unwrap();
        assert!(a[y]);
        assert!(f.satisfied_by(&a));

        let f = cnf(1, &[(Lit::pos(x), Lit::pos(x)), (Lit::neg(x), Lit::neg(x))]);
        assert_eq!(solve_2sat(&f).unwrap(), None);

        assert_eq!(solve_2sat(&TwoCnf::new(0)).unwrap(), Some(vec![]));
    }

    #[test]
    fn malformed_literal_is_rejected() {
        let f = cnf(1, &[(Lit::pos(0), Lit::pos(3))]);
        assert_eq!(
            solve_2sat(&f).unwrap_err(),
            Error::MalformedLiteral {
                var: 3,
                variable_count: 1
            }
        );
    }

    /// Truth-table oracle over every set of at most 4 distinct clauses on two
    /// variables (the acceptance suite covers three variables exhaustively).
    #[test]
    fn matches_truth_table_on_two_variables() {
        let lits: Vec<Lit> = (0..2).flat_map(|v| [Lit::pos(v), Lit::neg(v)]).collect();
        let mut all = Vec::new();
        for i in 0..lits.len() {
            for j in i..lits.len() {
                all.push((lits[i], lits[j]));
            }
        }
        for mask in 0u32..1 << all.len() {
            if mask.count_ones() > 4 {
                continue;
            }
            let clauses: Vec<_> = (0..all.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| all[i])
                .collect();
            let f = cnf(2, &clauses);
            let expected = (0..4u32).any(|a| f.satisfied_by(&[a & 1 == 1, a & 2 == 2]));
            match solve_2sat(&f).unwrap() {
                Some(a) => assert!(expected && f.satisfied_by(&a), "{f:?}"),
                None => assert!(!expected, "{f:?}"),
            }
        }
    }

    #[test]
    fn dimacs_export() {
        let f = cnf(2, &[(Lit::pos(0), Lit::neg(1)), (Lit::neg(0), Lit::neg(0))]);
        assert_eq!(f.to_dimacs(), "p cnf 2 2\n1 -2 0\n-1 0\n");
    }

    fn inst(g: Graph, lists: &[&[Color]]) -> ColoringInstance {
        let lists = lists
            .iter()
            .map(|l| ColorSet::from_colors(l.iter().copied()))
            .collect();
        ColoringInstance::new(g, lists).unwrap()
    }

    #[test]
    fn edwards_examples() {
        let tri = inst(Graph::complete(3), &[&[1, 2], &[1, 2], &[1, 2]]);
        assert_eq!(edwards_encode(&tri).unwrap().solve(), None);

        // P3 with lists {1}, {1,2}, {1,2}: middle forced to 2, end forced to 1.
        let p3 = inst(Graph::path(3), &[&[1], &[1, 2], &[1, 2]]);
        let enc = edwards_encode(&p3).unwrap();
        assert_eq!(enc.var_of(0), None);
        assert_eq!(enc.solve(), Some(vec![1, 2, 1]));

        let m = inst(
            Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap(),
            &[&[1, 2], &[1, 2], &[1, 2], &[1, 2]],
        );
        let c = edwards_encode(&m).unwrap().solve().unwrap();
        assert!(m.verify(&c));

        let clash = inst(Graph::path(2), &[&[3], &[3]]);
        assert_eq!(edwards_encode(&clash).unwrap().solve(), None);
    }

    #[test]
    fn encoding_rejects_big_lists() {
        let i = inst(Graph::path(2), &[&[1, 2, 3], &[1]]);
        assert!(matches!(
            edwards_encode(&i),
            Err(Error::ContractViolation(_))
        ));
    }
}
