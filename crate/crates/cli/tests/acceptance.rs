//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Runs without the test harness so the report is always printed. The
//! 3-star/3-star convergence row needs far more than a test run's worth of
//! CPU time on one core, so by default it runs under a time budget
//! (`MEANDERS_ACCEPTANCE_BUDGET_SECS`, default 180) and reports FAIL with
//! the size it reached. `MEANDERS_ACCEPTANCE_FULL=1` removes the budget.
//! The process exits nonzero if any other criterion fails.

use std::collections::BTreeSet;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use meander_core::arccore::{
    catalan, enumerate_chord_diagrams, face_profile, is_meander, minimal_arcs, stratum_of, ChordDiagram, Partition,
    PlaneMeanderCandidate,
};
use meander_core::census::{census, totient, CensusConfig};
use meander_core::freqlab::{p_connected_series, p_connected_total, FreqConfig, FrequencySeries};
use meander_core::linvol::LinearInvolution;
use meander_core::mvconst::{
    binomial, cyl1, cyl1_diagram, cyl1_principal, mminus_coefficient, p1, PiExpression,
};
use meander_core::planetree::{enumerate_plane_trees, separatrix_diagrams, weighted_tree_count, weighted_tree_count_formula, PlaneTree};
use num_bigint::BigInt;
use num_rational::BigRational;

/// Relative error band for the two tree-pair convergence rows.
const TREE_PAIR_TOLERANCE: f64 = 0.10;
/// Relative error band for the `p = 4` total series.
const FOUR_LEAVES_TOLERANCE: f64 = 0.05;
/// Relative error band for the cumulative `M_{n,4} / N^3` trend.
const CUMULATIVE_TOLERANCE: f64 = 0.25;
const TREE_PAIR_N: usize = 150;
const FOUR_LEAVES_N: usize = 300;
const DEFAULT_BUDGET_SECS: u64 = 180;

const TABLE: [[u64; 9]; 5] = [
    [1, 2, 6, 8, 20, 12, 42, 32, 54],
    [0, 0, 0, 16, 40, 168, 280, 544, 1152],
    [0, 0, 2, 16, 110, 416, 1470, 4128, 9102],
    [0, 0, 0, 0, 60, 576, 3276, 13632, 45468],
    [0, 0, 0, 2, 30, 462, 4228, 26424, 130410],
];
const TOTALS: [u64; 9] = [1, 2, 8, 42, 262, 1828, 13820, 110954, 933458];
const M5: [u64; 11] = [0, 0, 0, 16, 40, 168, 280, 544, 1152, 1560, 2640];

struct Outcome {
    id: &'static str,
    pass: bool,
    /// Failure that stems from the time budget rather than a wrong result.
    budget_limited: bool,
}

fn report(out: &mut Vec<Outcome>, id: &'static str, name: &str, pass: bool, detail: String) {
    println!("[{}] {id:<3} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    out.push(Outcome { id, pass, budget_limited: false });
}

fn criterion_1() -> (bool, String) {
    let output = Command::new(env!("CARGO_BIN_EXE_meanders"))
        .args(["census", "--n-max", "9", "--format", "csv", "--no-cache"])
        .output()
        .expect("run meanders");
    if !output.status.success() {
        return (false, format!("meanders exited with {}", output.status));
    }
    let text = String::from_utf8_lossy(&output.stdout);
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    let col = |name: &str| header.iter().position(|h| h == name);
    let mut matched = 0;
    let mut mismatches = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.unwrap();
        let get = |c: Option<usize>| c.and_then(|c| rec.get(c)).and_then(|v| v.parse::<u64>().ok());
        for (k, row) in TABLE.iter().enumerate() {
            let p = k + 4;
            if get(col(&format!("p{p}"))) == Some(row[i]) {
                matched += 1;
            } else {
                mismatches.push(format!("M_{{{},{p}}}", i + 1));
            }
        }
        if get(col("total")) != Some(TOTALS[i]) {
            mismatches.push(format!("total n={}", i + 1));
        }
    }
    (matched == 45 && mismatches.is_empty(), format!("{matched}/45 entries and 9 totals exact; mismatches {mismatches:?}"))
}

fn filtered_rows(n_max: usize) -> Vec<(u64, u64)> {
    let cfg = CensusConfig::default().with_poles([4, 5]);
    (1..=n_max).map(|n| census(n, &cfg).map(|r| (r.poles(4), r.poles(5))).expect("census")).collect()
}

fn criterion_4() -> (bool, String) {
    let mut failed = Vec::new();
    let mut check = |name: &str, ok: bool| {
        if !ok {
            failed.push(name.to_string());
        }
    };
    check("p1([1^2])", p1(&Partition::power(1, 2)) == PiExpression::frac(280, 1, -6));
    check("p1([2])", p1(&Partition::power(2, 1)) == PiExpression::frac(45, 2, -4));
    let m4 = mminus_coefficient(4).unwrap();
    check("mminus(4)", m4.leading == PiExpression::frac(2, 1, -2) && m4.exponent == 3);
    let m5 = mminus_coefficient(5).unwrap();
    check("mminus(5)", m5.leading == PiExpression::frac(16, 3, -4) && m5.exponent == 5);
    check("cyl1_principal", (0..=50u32).all(|k| cyl1_principal(k as u64) == cyl1(&Partition::power(1, k))));
    check(
        "gould",
        (0..=100u64).all(|k| {
            (0..=k).map(|i| binomial(k, i) * binomial(k + 4, i + 2)).sum::<BigInt>() == binomial(2 * k + 4, k + 2)
        }),
    );
    (failed.is_empty(), format!("p1, mminus(4), mminus(5), cyl1_principal k<=50, Gould k<=100; failed {failed:?}"))
}

/// Partitions with `|nu| + l(nu) <= budget`; zero entries when `zeros`.
fn partitions(budget: u32, zeros: bool) -> Vec<Partition> {
    fn rec(d: u32, left: u32, cur: &Partition, out: &mut Vec<Partition>) {
        if d + 1 > left {
            out.push(cur.clone());
            return;
        }
        rec(d + 1, left, cur, out);
        let mut c = cur.clone();
        let mut l = left;
        while l > d {
            c.add_part(d, 1);
            l -= d + 1;
            rec(d + 1, l, &c, out);
        }
    }
    let mut out = Vec::new();
    rec(if zeros { 0 } else { 1 }, budget, &Partition::empty(), &mut out);
    out
}

fn criterion_5() -> (bool, String) {
    let all = partitions(6, true);
    let bad: Vec<String> = all
        .iter()
        .filter(|nu| {
            let sum: BigRational = separatrix_diagrams(nu).iter().map(cyl1_diagram).sum();
            sum != BigRational::from_integer(cyl1(nu))
        })
        .map(|nu| nu.to_string())
        .collect();
    (bad.is_empty(), format!("{} strata with |nu|+l(nu)<=6; failed {bad:?}", all.len()))
}

fn criterion_6() -> (bool, String) {
    // A tree of profile iota has |iota| + l(iota) + 1 edges.
    let all = partitions(7, false);
    let bad: Vec<String> = all
        .iter()
        .filter(|iota| weighted_tree_count(iota) != weighted_tree_count_formula(iota))
        .map(|iota| iota.to_string())
        .collect();
    let trees: usize = all.iter().map(|iota| enumerate_plane_trees(iota).len()).sum();
    (bad.is_empty(), format!("{} profiles with <=8 edges ({trees} trees); failed {bad:?}", all.len()))
}

fn convergence(series: &FrequencySeries, n: usize, tol: f64) -> (bool, String) {
    let predicted = series.predicted.to_f64();
    match series.final_fraction() {
        Some(f) => {
            let err = (f / predicted - 1.0).abs();
            let reached = series.n_reached().unwrap_or(0);
            let ok = reached == n && err <= tol;
            let partial = if reached < n { format!(" (stopped at N={reached} of {n})") } else { String::new() };
            (ok, format!("N={reached} fraction {f:.6} vs {} = {predicted:.6}, rel err {err:.4} (tol {tol}){partial}", series.predicted))
        }
        None => (false, format!("no rows within the budget (target N={n})")),
    }
}

fn criterion_8() -> (bool, String) {
    let rows = filtered_rows(11);
    let at = |big_n: usize| {
        let s: u64 = rows[..big_n].iter().map(|r| r.0).sum();
        s as f64 / (big_n as f64).powi(3)
    };
    let limit = mminus_coefficient(4).unwrap().leading.to_f64();
    let (e5, e11) = ((at(5) / limit - 1.0).abs(), (at(11) / limit - 1.0).abs());
    (
        e11 <= CUMULATIVE_TOLERANCE && e11 < e5,
        format!("N=11: {:.4} (rel err {e11:.3}), N=5: {:.4} (rel err {e5:.3}), limit 2/pi^2 = {limit:.4}", at(11), at(5)),
    )
}

fn brute_force_noncrossing(n: usize) -> usize {
    fn rec(p: &mut Vec<usize>, count: &mut usize) {
        let Some(i) = p.iter().position(|&x| x == usize::MAX) else {
            let ok = (0..p.len()).all(|a| (0..p.len()).all(|b| !(a < b && b < p[a] && p[a] < p[b])));
            *count += ok as usize;
            return;
        };
        for j in i + 1..p.len() {
            if p[j] == usize::MAX {
                p[i] = j;
                p[j] = i;
                rec(p, count);
                p[i] = usize::MAX;
                p[j] = usize::MAX;
            }
        }
    }
    let mut count = 0;
    rec(&mut vec![usize::MAX; 2 * n], &mut count);
    count
}

fn criterion_9() -> (bool, String) {
    let catalan_ok = (1..=8).all(|n| {
        let ours: BTreeSet<Vec<usize>> =
            enumerate_chord_diagrams(n).map(|d| (0..2 * n).map(|i| d.partner(i)).collect()).collect();
        ours.len() as u64 == catalan(n) && ours.len() == brute_force_noncrossing(n)
    });

    let mut faces_ok = true;
    let mut meanders = 0u64;
    for n in 1..=9 {
        let all: Vec<ChordDiagram> = enumerate_chord_diagrams(n).collect();
        for a in &all {
            for b in &all {
                if !is_meander(a, b, 0).unwrap() {
                    continue;
                }
                meanders += 1;
                let prof = face_profile(a, b, 0).unwrap();
                let faces: usize = prof.counts().values().sum();
                let sides: usize = prof.counts().iter().map(|(k, c)| k * c).sum();
                let balanced = stratum_of(&prof).is_ok();
                let poles_ok = n == 1 || {
                    let m = minimal_arcs(&PlaneMeanderCandidate::new(a.clone(), b.clone()).unwrap());
                    prof.bigons() == m.pimples + m.rainbow as usize
                };
                faces_ok &= faces == 2 * n + 2 && sides == 4 * n && balanced && poles_ok;
            }
        }
    }

    let mut linvol_ok = true;
    for n in 1..=8 {
        let all: Vec<ChordDiagram> = enumerate_chord_diagrams(n).collect();
        for a in &all {
            for b in &all {
                let li = LinearInvolution::from_pair(a, b).unwrap();
                let (x, y) = li.to_pair();
                linvol_ok &= &x == a && &y == b && LinearInvolution::from_pair(&x, &y).unwrap() == li;
            }
        }
    }

    let determinism_ok = (1..=8).all(|n| {
        let base = census(n, &CensusConfig::default().with_jobs(1)).unwrap();
        (2..=4).all(|jobs| {
            [0, u64::MAX].iter().all(|&budget| {
                census(n, &CensusConfig { budget, ..CensusConfig::default().with_jobs(jobs) }).unwrap() == base
            })
        })
    });
    (
        catalan_ok && faces_ok && linvol_ok && determinism_ok,
        format!(
            "catalan n<=8 {catalan_ok}, face invariants on {meanders} meanders n<=9 {faces_ok}, \
             involution round trips n<=8 {linvol_ok}, census jobs 1..4 {determinism_ok}"
        ),
    )
}

fn main() -> ExitCode {
    let full = std::env::var("MEANDERS_ACCEPTANCE_FULL").is_ok_and(|v| v == "1");
    let budget = std::env::var("MEANDERS_ACCEPTANCE_BUDGET_SECS")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_BUDGET_SECS);
    let mut out = Vec::new();
    let started = Instant::now();

    let (ok, detail) = criterion_1();
    report(&mut out, "1", "census table n<=9", ok, detail);

    let rows = filtered_rows(11);
    let bad4: Vec<usize> = (1..=11).filter(|&n| rows[n - 1].0 != n as u64 * totient(n as u64)).collect();
    report(&mut out, "2", "M_{n,4} = n phi(n), n<=11", bad4.is_empty(), format!("{:?}; failing n {bad4:?}", rows.iter().map(|r| r.0).collect::<Vec<_>>()));
    let m5: Vec<u64> = rows.iter().map(|r| r.1).collect();
    report(&mut out, "3", "M_{n,5} prefix, n<=11", m5 == M5, format!("{m5:?}"));

    let (ok, detail) = criterion_4();
    report(&mut out, "4", "exact constants", ok, detail);
    let (ok, detail) = criterion_5();
    report(&mut out, "5", "diagram-sum identity", ok, detail);
    let (ok, detail) = criterion_6();
    report(&mut out, "6", "tree-counting theorem", ok, detail);

    let cfg = FreqConfig::default();
    let star3 = PlaneTree::star(3);
    let deadline = if full { None } else { Some(Instant::now() + Duration::from_secs(budget)) };
    let series = p_connected_series(&star3, &star3, TREE_PAIR_N, &FreqConfig { deadline, ..cfg.clone() }).unwrap();
    let (ok, mut detail) = convergence(&series, TREE_PAIR_N, TREE_PAIR_TOLERANCE);
    if series.truncated {
        detail += &format!("; time budget {budget}s, set MEANDERS_ACCEPTANCE_FULL=1 for the unbounded run");
    }
    report(&mut out, "7a", "P_connected(3-star, 3-star; 150)", ok, detail);
    out.last_mut().unwrap().budget_limited = series.truncated;

    let series = p_connected_series(&PlaneTree::star(4), &PlaneTree::edge(), TREE_PAIR_N, &cfg).unwrap();
    let (ok, detail) = convergence(&series, TREE_PAIR_N, TREE_PAIR_TOLERANCE);
    report(&mut out, "7b", "P_connected(4-star, edge; 150)", ok, detail);
    let series = p_connected_total(4, FOUR_LEAVES_N, &cfg).unwrap();
    let (ok, detail) = convergence(&series, FOUR_LEAVES_N, FOUR_LEAVES_TOLERANCE);
    report(&mut out, "7c", "P_connected(p=4; 300)", ok, detail);

    let (ok, detail) = criterion_8();
    report(&mut out, "8", "cumulative M_{n,4}/N^3 trend", ok, detail);
    let (ok, detail) = criterion_9();
    report(&mut out, "9", "property suites", ok, detail);

    let passed = out.iter().filter(|o| o.pass).count();
    let budgeted: Vec<&str> = out.iter().filter(|o| !o.pass && o.budget_limited).map(|o| o.id).collect();
    let failed: Vec<&str> = out.iter().filter(|o| !o.pass && !o.budget_limited).map(|o| o.id).collect();
    println!(
        "acceptance: {passed}/{} passed; failed {failed:?}; failed within time budget {budgeted:?}; {:.0}s",
        out.len(),
        started.elapsed().as_secs_f64()
    );
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
