use proptest::collection::vec;
use proptest::prelude::*;
use tricolor::oracle::brute_color;
use tricolor::twosat::{edwards_encode, solve_2sat, Lit, TwoCnf};
use tricolor::{ColorSet, ColoringInstance, Finish, Graph};

fn lit(code: usize) -> Lit {
    if code.is_multiple_of(2) {
        Lit::pos(code / 2)
    } else {
        Lit::neg(code / 2)
    }
}

fn truth_table_sat(vars: usize, clauses: &[(Lit, Lit)]) -> bool {
    (0..1u32 << vars).any(|bits| {
        let a: Vec<bool> = (0..vars).map(|i| bits >> i & 1 == 1).collect();
        clauses.iter().all(|&(x, y)| x.eval(&a) || y.eval(&a))
    })
}

fn check(vars: usize, clauses: &[(Lit, Lit)]) -> Result<(), String> {
    let mut f = TwoCnf::new(vars);
    for &(a, b) in clauses {
        f.add_clause(a, b);
    }
    let got = solve_2sat(&f).map_err(|e| e.to_string())?;
    let want = truth_table_sat(vars, clauses);
    match got {
        Some(a) if !f.satisfied_by(&a) => Err(format!("bad assignment for {clauses:?}")),
        Some(_) if !want => Err(format!("SAT claimed for {clauses:?}")),
        None if want => Err(format!("UNSAT claimed for {clauses:?}")),
        _ => Ok(()),
    }
}

/// Calls `visit` on every multiset of at most `max_len` clauses drawn from
/// `pool`, as non-decreasing index sequences.
fn multisets(pool: usize, max_len: usize, visit: &mut impl FnMut(&[usize])) {
    fn rec(
        pool: usize,
        max_len: usize,
        from: usize,
        cur: &mut Vec<usize>,
        visit: &mut impl FnMut(&[usize]),
    ) {
        visit(cur);
        if cur.len() == max_len {
            return;
        }
        for i in from..pool {
            cur.push(i);
            rec(pool, max_len, i, cur, visit);
            cur.pop();
        }
    }
    rec(pool, max_len, 0, &mut Vec::new(), visit);
}

#[test]
fn all_small_formulas_match_truth_tables() {
    // Clauses over three variables: unordered literal pairs, units as (l, l).
    let mut pool = Vec::new();
    for a in 0..6 {
        for b in a..6 {
            pool.push((lit(a), lit(b)));
        }
    }
    assert_eq!(pool.len(), 21);
    let mut formulas = 0usize;
    let mut unsat = 0usize;
    multisets(pool.len(), 6, &mut |idx| {
        let clauses: Vec<_> = idx.iter().map(|&i| pool[i]).collect();
        check(3, &clauses).unwrap();
        formulas += 1;
        if !truth_table_sat(3, &clauses) {
            unsat += 1;
        }
    });
    // Sum over k = 0..=6 of C(20 + k, k).
    assert_eq!(formulas, 296_010);
    assert!(unsat > 0);
}

fn all_graphs(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    (0..1u32 << pairs.len())
        .map(|mask| {
            let edges: Vec<_> = (0..pairs.len())
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| pairs[i])
                .collect();
            Graph::from_edges(n, &edges).unwrap()
        })
        .collect()
}

#[test]
fn edwards_matches_brute_force_on_small_graphs() {
    let small: Vec<ColorSet> = [0b001u8, 0b010, 0b100, 0b011, 0b101, 0b110]
        .iter()
        .map(|&m| ColorSet::from_colors((1..=3u8).filter(|c| m & (1 << (c - 1)) != 0)))
        .collect();
    let mut checked = 0usize;
    for n in 1..=4 {
        for g in all_graphs(n) {
            for code in 0..6usize.pow(n as u32) {
                let mut x = code;
                let lists = (0..n)
                    .map(|_| {
                        let l = small[x % 6];
                        x /= 6;
                        l
                    })
                    .collect();
                let inst = ColoringInstance::new(g.clone(), lists).unwrap();
                let want = brute_color(&inst).unwrap().is_sat();
                let enc = edwards_encode(&inst).unwrap();
                match enc.solve() {
                    Some(c) => {
                        assert!(want, "{inst:?}");
                        assert!(inst.verify(&c), "{inst:?}");
                    }
                    None => assert!(!want, "{inst:?}"),
                }
                match inst.finish_two_lists().unwrap() {
                    Finish::Sat(c) => assert!(want && inst.verify(c.colors())),
                    Finish::Unsat => assert!(!want),
                }
                checked += 1;
            }
        }
    }
    // 6 + 2*36 + 8*216 + 64*1296
    assert_eq!(checked, 84_750);
}

#[test]
fn edwards_rejects_full_lists() {
    let inst = ColoringInstance::full(Graph::cycle(3));
    assert!(edwards_encode(&inst).is_err());
    assert!(inst.finish_two_lists().is_err());
}

#[test]
fn finish_examples() {
    let two = ColorSet::from_colors([1, 2]);
    let c4 = ColoringInstance::new(Graph::cycle(4), vec![two; 4]).unwrap();
    match c4.finish_two_lists().unwrap() {
        Finish::Sat(c) => {
            assert_eq!(c.get(0), c.get(2));
            assert_ne!(c.get(0), c.get(1));
        }
        Finish::Unsat => panic!("even cycle is 2-colorable"),
    }
    let c3 = ColoringInstance::new(Graph::cycle(3), vec![two; 3]).unwrap();
    assert_eq!(c3.finish_two_lists().unwrap(), Finish::Unsat);
    let one = ColoringInstance::new(Graph::empty(1), vec![ColorSet::singleton(3)]).unwrap();
    assert_eq!(
        one.finish_two_lists().unwrap(),
        Finish::Sat(tricolor::Coloring(vec![3]))
    );
}

proptest! {
    #[test]
    fn random_formulas_match_truth_tables(
        vars in 1usize..=10,
        raw in vec((0usize..20, 0usize..20), 0..40),
    ) {
        let clauses: Vec<_> = raw
            .into_iter()
            .map(|(a, b)| (lit(a % (2 * vars)), lit(b % (2 * vars))))
            .collect();
        prop_assert!(check(vars, &clauses).is_ok(), "{:?}", check(vars, &clauses));
    }
}
