use std::collections::{BTreeMap, VecDeque};

use meander_core::arccore::{enumerate_chord_diagrams, DyckWords, Partition};
use meander_core::mvconst::binomial;
use meander_core::planetree::{
    arc_systems_of_type, cut_rooted_code, enumerate_plane_trees, enumerate_trees_with_edges, reduced_dual_tree,
    weighted_tree_count, weighted_tree_count_formula, PlaneTree,
};
use num_bigint::BigInt;

/// Vertex neighbours in counterclockwise order; vertex 0 is the root and
/// every other vertex lists its parent first.
fn adjacency(word: &str) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new()];
    let mut stack = vec![0];
    for c in word.chars() {
        let top = *stack.last().unwrap();
        if c == '(' {
            let v = adj.len();
            adj.push(vec![top]);
            adj[top].push(v);
            stack.push(v);
        } else {
            stack.pop();
        }
    }
    adj
}

/// Orientation-preserving isomorphisms sending the dart `(0, adj[0][0])` of
/// `a` onto some dart of `b`, found by propagating the forced vertex map.
fn isomorphisms(a: &[Vec<usize>], b: &[Vec<usize>]) -> usize {
    if a.len() != b.len() {
        return 0;
    }
    let mut count = 0;
    for u in 0..b.len() {
        'dart: for k in 0..b[u].len() {
            if a[0].len() != b[u].len() {
                continue;
            }
            let mut map = vec![usize::MAX; a.len()];
            let mut queue = VecDeque::from([(0usize, u, 0usize, k)]);
            map[0] = u;
            while let Some((x, y, i, j)) = queue.pop_front() {
                let d = a[x].len();
                if b[y].len() != d {
                    continue 'dart;
                }
                for s in 0..d {
                    let (nx, ny) = (a[x][(i + s) % d], b[y][(j + s) % d]);
                    if map[nx] == usize::MAX {
                        map[nx] = ny;
                        let back_x = a[nx].iter().position(|&w| w == x).unwrap();
                        let back_y = b[ny].iter().position(|&w| w == y).unwrap();
                        queue.push_back((nx, ny, back_x, back_y));
                    } else if map[nx] != ny {
                        continue 'dart;
                    }
                }
            }
            let mut image = map.clone();
            image.sort();
            image.dedup();
            if image.len() == a.len() {
                count += 1;
            }
        }
    }
    count
}

fn words(edges: usize) -> Vec<String> {
    DyckWords::new(edges).map(|w| w.iter().map(|&b| if b { '(' } else { ')' }).collect()).collect()
}

#[test]
fn canonical_form_matches_isomorphism_search() {
    for e in 1..=7 {
        let ws = words(e);
        let adj: Vec<_> = ws.iter().map(|w| adjacency(w)).collect();
        let trees: Vec<_> = ws.iter().map(|w| PlaneTree::from_code(w).unwrap()).collect();
        // Group by canonical code, then compare one representative per
        // class against every word.
        let mut reps: BTreeMap<&str, usize> = BTreeMap::new();
        for (i, t) in trees.iter().enumerate() {
            reps.entry(t.code()).or_insert(i);
        }
        for (code, &r) in &reps {
            let autos = isomorphisms(&adj[r], &adj[r]);
            assert_eq!(autos as u64, trees[r].aut_order(), "{code}");
            assert_eq!(trees[r].corners() as u64 % trees[r].aut_order(), 0);
            for (i, t) in trees.iter().enumerate() {
                let iso = isomorphisms(&adj[r], &adj[i]) > 0;
                assert_eq!(iso, t.code() == *code, "{} vs {}", ws[r], ws[i]);
            }
        }
    }
}

#[test]
fn tree_examples() {
    let one = |s: &str| {
        let ts = enumerate_plane_trees(&s.parse().unwrap());
        assert_eq!(ts.len(), 1, "{s}");
        ts[0].aut_order()
    };
    assert_eq!(one("1"), 3);
    assert_eq!(one("1^2"), 2);
    assert_eq!(one("2"), 4);
    assert_eq!(one(""), 2);
    let star = PlaneTree::star(3);
    assert_eq!(star.leaves(), 3);
    assert_eq!(PlaneTree::from_code("()()()").unwrap(), PlaneTree::from_code("(()())").unwrap());
}

/// Partitions with `|iota| + l(iota) <= budget` and no zero entries.
fn profiles(budget: u32) -> Vec<Partition> {
    fn rec(d: u32, budget: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if d > budget {
            out.push(Partition::from_parts(cur.iter().copied()));
            return;
        }
        let mut k = 0;
        loop {
            rec(d + 1, budget - k * (d + 1), cur, out);
            if (k + 1) * (d + 1) > budget {
                break;
            }
            k += 1;
            cur.push(d);
        }
        for _ in 0..k {
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, budget, &mut Vec::new(), &mut out);
    out
}

#[test]
fn weighted_counts_match_formula() {
    let ps = profiles(8);
    assert!(ps.len() > 20);
    for iota in ps {
        let trees = enumerate_plane_trees(&iota);
        for t in &trees {
            assert_eq!(t.profile(), &iota);
            assert_eq!(t.leaves() as u64, iota.weight() + 2);
        }
        assert_eq!(weighted_tree_count(&iota), weighted_tree_count_formula(&iota), "{iota}");
    }
}

fn reduced_trees(max_edges: usize) -> Vec<PlaneTree> {
    (1..=max_edges)
        .flat_map(enumerate_trees_with_edges)
        .filter(|t| t.profile().multiplicity(0) == 0)
        .collect()
}

#[test]
fn arc_systems_round_trip() {
    for t in reduced_trees(5) {
        for n in 1..=12 {
            let systems: Vec<_> = arc_systems_of_type(&t, n).collect();
            let want = if n < t.edges() { BigInt::from(0) } else { binomial(n as u64 - 1, t.edges() as u64 - 1) };
            assert_eq!(BigInt::from(systems.len()), want, "{t} n={n}");
            for d in &systems {
                assert_eq!(reduced_dual_tree(d), t);
                assert_eq!(d.n(), n);
            }
        }
    }
}

#[test]
fn arc_system_counts_match_filtering() {
    let trees = reduced_trees(5);
    for n in 1..=10 {
        let mut unrooted: BTreeMap<PlaneTree, u64> = BTreeMap::new();
        let mut rooted: BTreeMap<String, u64> = BTreeMap::new();
        for d in enumerate_chord_diagrams(n) {
            *unrooted.entry(reduced_dual_tree(&d)).or_insert(0) += 1;
            if let Some(code) = cut_rooted_code(&d) {
                *rooted.entry(code).or_insert(0) += 1;
            }
        }
        for t in &trees {
            if t.edges() > n {
                continue;
            }
            let c = binomial(n as u64 - 1, t.edges() as u64 - 1);
            let systems = arc_systems_of_type(t, n).count() as u64;
            assert_eq!(BigInt::from(systems), c);
            assert_eq!(rooted.get(t.code()).copied().unwrap_or(0), systems, "{t} n={n}");
            let filtered = unrooted.get(t).copied().unwrap_or(0);
            assert_eq!(BigInt::from(filtered * t.aut_order()), c * BigInt::from(2 * n), "{t} n={n}");
        }
    }
}
