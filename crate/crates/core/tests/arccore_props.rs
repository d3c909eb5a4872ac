use std::collections::BTreeSet;

use meander_core::arccore::{
    catalan, component_count, enumerate_chord_diagrams, face_profile, is_meander, minimal_arcs, stratum_of,
    ChordDiagram, PlaneMeanderCandidate,
};
use proptest::prelude::*;

/// All fixed-point-free involutions of `0..2n`, keeping the noncrossing ones.
fn brute_force_noncrossing(n: usize) -> BTreeSet<Vec<usize>> {
    fn rec(p: &mut Vec<Option<usize>>, out: &mut BTreeSet<Vec<usize>>) {
        let Some(i) = p.iter().position(Option::is_none) else {
            let q: Vec<usize> = p.iter().map(|x| x.unwrap()).collect();
            let crossing = (0..q.len()).any(|a| {
                (0..q.len()).any(|b| a < b && b < q[a] && q[a] < q[b])
            });
            if !crossing {
                out.insert(q);
            }
            return;
        };
        for j in i + 1..p.len() {
            if p[j].is_none() {
                p[i] = Some(j);
                p[j] = Some(i);
                rec(p, out);
                p[i] = None;
                p[j] = None;
            }
        }
    }
    let mut out = BTreeSet::new();
    rec(&mut vec![None; 2 * n], &mut out);
    out
}

fn pairing(d: &ChordDiagram) -> Vec<usize> {
    (0..d.points()).map(|i| d.partner(i)).collect()
}

#[test]
fn catalan_counts_match_brute_force() {
    for n in 1..=8 {
        let ours: Vec<Vec<usize>> = enumerate_chord_diagrams(n).map(|d| pairing(&d)).collect();
        let distinct: BTreeSet<_> = ours.iter().cloned().collect();
        assert_eq!(distinct.len(), ours.len(), "duplicates at n={n}");
        assert_eq!(distinct, brute_force_noncrossing(n), "n={n}");
        assert_eq!(ours.len() as u64, catalan(n));
    }
}

#[test]
fn small_gluing_examples() {
    let cd = |p: &[(usize, usize)]| ChordDiagram::from_pairs(p).unwrap();
    let one = cd(&[(0, 1)]);
    let side = cd(&[(0, 1), (2, 3)]);
    let nest = cd(&[(0, 3), (1, 2)]);
    assert_eq!(component_count(&one, &one, 0).unwrap(), 1);
    assert_eq!(component_count(&side, &nest, 0).unwrap(), 1);
    assert_eq!(component_count(&side, &side, 0).unwrap(), 2);
    let prof = face_profile(&side, &nest, 0).unwrap();
    assert_eq!((prof.bigons(), prof.squares()), (4, 2));
    let m = minimal_arcs(&PlaneMeanderCandidate::new(side, nest).unwrap());
    assert_eq!((m.pimples, m.rainbow), (3, true));
    assert!(ChordDiagram::from_pairs(&[(0, 2), (1, 3)]).is_err());
}

/// Cycles of `i -> top(beta_t(i))` by direct traversal.
fn cycles(top: &ChordDiagram, bottom: &ChordDiagram, t: usize) -> usize {
    let m = top.points();
    let beta = |i: usize| (bottom.partner((i + m - t) % m) + t) % m;
    let mut seen = vec![false; m];
    let mut count = 0;
    for s in 0..m {
        if seen[s] {
            continue;
        }
        count += 1;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = top.partner(beta(x));
        }
    }
    count
}

#[test]
fn components_are_half_the_cycles() {
    for n in 1..=5 {
        let all: Vec<_> = enumerate_chord_diagrams(n).collect();
        for a in &all {
            for b in &all {
                for t in 0..2 * n {
                    let c = component_count(a, b, t).unwrap();
                    assert!(c >= 1);
                    assert_eq!(2 * c, cycles(a, b, t));
                }
            }
        }
    }
}

#[test]
fn face_invariants_on_every_plane_meander() {
    for n in 1..=9 {
        let all: Vec<_> = enumerate_chord_diagrams(n).collect();
        let mut meanders = 0u64;
        for a in &all {
            for b in &all {
                if !is_meander(a, b, 0).unwrap() {
                    continue;
                }
                meanders += 1;
                let prof = face_profile(a, b, 0).unwrap();
                let faces: usize = prof.counts().values().sum();
                let sides: usize = prof.counts().iter().map(|(k, c)| k * c).sum();
                assert_eq!(faces, 2 * n + 2);
                assert_eq!(sides, 4 * n);
                let stratum = stratum_of(&prof).unwrap();
                assert_eq!(stratum.poles as u64, stratum.zeros.weight() + 4);
                if n > 1 {
                    let m = minimal_arcs(&PlaneMeanderCandidate::new(a.clone(), b.clone()).unwrap());
                    assert_eq!(prof.bigons(), m.pimples + m.rainbow as usize);
                }
            }
        }
        let expected = [1, 2, 8, 42, 262, 1828, 13820, 110954, 933458][n - 1];
        assert_eq!(meanders, expected, "n={n}");
    }
}

fn diagram(n: usize, index: usize) -> ChordDiagram {
    enumerate_chord_diagrams(n).nth(index % catalan(n) as usize).unwrap()
}

proptest! {
    #[test]
    fn twist_equivariance(n in 1usize..=8, i in 0usize..10_000, j in 0usize..10_000, t in 0usize..16) {
        let (a, b) = (diagram(n, i), diagram(n, j));
        let t = t % (2 * n);
        prop_assert_eq!(
            component_count(&a, &b, t).unwrap(),
            component_count(&a.rotate(1), &b.rotate(1), t).unwrap()
        );
    }

    #[test]
    fn rotation_and_reflection_stay_noncrossing(n in 1usize..=9, i in 0usize..10_000, k in 0usize..20) {
        let d = diagram(n, i);
        let r = d.rotate(k);
        prop_assert!(ChordDiagram::from_pairs(&r.arcs()).is_ok());
        prop_assert_eq!(r.rotate(2 * n - k % (2 * n)), d.clone());
        prop_assert_eq!(d.reflect().reflect(), d);
    }
}
