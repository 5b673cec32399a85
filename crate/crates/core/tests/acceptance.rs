//! Acceptance suite: one test per criterion, each printing a PASS line
//! (run with `--nocapture` to see them). Bounds and tolerances are pinned
//! in code; the randomized criteria use fixed seeds.

use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cbt_core::alcove::face_signature;
use cbt_core::bench::{run_bench, table1, Algo};
use cbt_core::canonical::{validate_gcb, Mode};
use cbt_core::partition::partitions_of;
use cbt_core::paths::{check_property_l, ladder_path};
use cbt_core::selftest::{dispatch_paths, random_l_regular, sample_crossings, verify_crossing};
use cbt_core::{Context, FockVector, Int, KLSession, LaurentPoly, Partition, Session};

fn ctx(k: usize, l: u32) -> Context {
    Context::new(k, l).unwrap()
}

fn p(s: &str) -> Partition {
    Partition::from_str(s).unwrap()
}

fn regular_mus(c: Context, max_size: u64) -> Vec<Partition> {
    let mut out = Vec::new();
    for n in 0..=max_size {
        for mu in partitions_of(n, c.k()) {
            if mu.is_l_regular(c.l()) {
                out.push(mu);
            }
        }
    }
    out
}

/// Criterion 1: the Fock-side coefficients equal the antispherical
/// Kazhdan-Lusztig polynomials, exactly, for k, l in {2,3} and every
/// diagram pair of size at most 10.
#[test]
fn criterion_01_fock_equals_kazhdan_lusztig() {
    let mut pairs = 0u64;
    for k in [2usize, 3] {
        for l in [2u32, 3] {
            let c = ctx(k, l);
            let mut gcb: Session = Session::new(c, Mode::Fast);
            let mut kl: KLSession = KLSession::new(c);
            for mu in regular_mus(c, 10) {
                let g = gcb.gcb(&mu).unwrap();
                for la in partitions_of(mu.size(), k) {
                    let d = g.coeff(&la);
                    let n = kl.n_poly(&la, &mu).unwrap();
                    assert_eq!(d, n, "d and n disagree at k={k} l={l} mu={mu} lambda={la}");
                    pairs += 1;
                }
            }
        }
    }
    println!("ACCEPTANCE 1 (d = n, Fock vs alcove recursion): PASS ({pairs} pairs)");
}

/// Criterion 2: the ladder construction and the fast dispatch produce
/// identical basis vectors for k in {2,3,4}, l in {2,3}, size at most 10.
#[test]
fn criterion_02_mode_oracle() {
    let mut count = 0u64;
    for k in [2usize, 3, 4] {
        for l in [2u32, 3] {
            let c = ctx(k, l);
            let mut llt: Session = Session::new(c, Mode::Llt);
            let mut fast: Session = Session::new(c, Mode::Fast);
            for mu in regular_mus(c, 10) {
                assert_eq!(
                    *llt.gcb(&mu).unwrap(),
                    *fast.gcb(&mu).unwrap(),
                    "modes disagree at k={k} l={l} mu={mu}"
                );
                count += 1;
            }
        }
    }
    println!("ACCEPTANCE 2 (llt mode = fast mode): PASS ({count} diagrams)");
}

fn critical_diagrams(c: Context, max_size: u64) -> Vec<Partition> {
    // A k-critical diagram is determined by its gaps (multiples of l) and
    // its bottom row.
    let k = c.k();
    let l = c.l() as u64;
    let mut out: Vec<Partition> = Vec::new();
    let mut gaps = vec![l; k.saturating_sub(1)];
    loop {
        let diffs: Vec<u64> = gaps.iter().map(|&g| g - 1).collect();
        let base_size: u64 = diffs
            .iter()
            .enumerate()
            .map(|(i, &d)| d * (i as u64 + 1))
            .sum();
        if base_size <= max_size {
            let mut bottom = 0u64;
            loop {
                let size = base_size + bottom * k as u64;
                if size > max_size {
                    break;
                }
                let mut parts = vec![bottom as u32; k];
                for i in (0..k.saturating_sub(1)).rev() {
                    parts[i] = parts[i + 1] + diffs[i] as u32;
                }
                out.push(Partition::new(parts));
                bottom += 1;
            }
        }
        // Odometer over gap multiples.
        let mut i = 0;
        loop {
            if i >= gaps.len() {
                return out;
            }
            gaps[i] += l;
            let diffs_min: u64 = gaps
                .iter()
                .enumerate()
                .map(|(j, &g)| (g - 1) * (j as u64 + 1))
                .sum();
            if diffs_min <= max_size {
                break;
            }
            gaps[i] = l;
            i += 1;
        }
    }
}

/// Criterion 3: k-critical diagrams are their own basis vectors, computed
/// with no tableau work, for k <= 5, l <= 6, size <= 60.
#[test]
fn criterion_03_critical_diagrams_are_terminal() {
    let mut count = 0u64;
    for k in 1..=5usize {
        for l in 2..=6u32 {
            let c = ctx(k, l);
            let mut s: Session = Session::new(c, Mode::Fast);
            for mu in critical_diagrams(c, 60) {
                assert!(
                    c.is_k_critical(&mu),
                    "enumerator produced non-critical {mu}"
                );
                let before = (s.computed_count(), s.work_count());
                let g = s.gcb(&mu).unwrap();
                let after = (s.computed_count(), s.work_count());
                assert_eq!(
                    *g,
                    FockVector::unit(mu.clone(), c).unwrap(),
                    "G(mu) != mu for critical mu={mu} k={k} l={l}"
                );
                assert!(
                    after.0 - before.0 <= 2,
                    "critical mu={mu} took {} memo insertions",
                    after.0 - before.0
                );
                assert_eq!(after.1, before.1, "critical mu={mu} did tableau work");
                count += 1;
            }
        }
    }
    println!("ACCEPTANCE 3 (critical diagrams terminal, O(1) work): PASS ({count} diagrams)");
}

/// Criterion 4: adding a full column shifts the basis vector, on 100
/// random admissible diagrams with k <= 4, l <= 5, in both modes.
#[test]
fn criterion_04_full_column_shift() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x41);
    let mut done = 0;
    while done < 100 {
        let k = rng.gen_range(2..=4usize);
        let l = rng.gen_range(2..=5u32);
        let c = ctx(k, l);
        let mu = random_l_regular(&mut rng, c, 14);
        let shifted = c.add_fundamental(&mu, k, 1);
        if !shifted.is_l_regular(l) {
            continue;
        }
        for mode in [Mode::Llt, Mode::Fast] {
            let mut s: Session = Session::new(c, mode);
            let expected = s.gcb(&mu).unwrap().shift_fundamental(k, 1);
            let got = s.gcb(&shifted).unwrap();
            assert_eq!(
                expected, *got,
                "shift rule fails at k={k} l={l} mu={mu} ({mode:?})"
            );
        }
        done += 1;
    }
    println!("ACCEPTANCE 4 (full-column shift rule): PASS (100 diagrams, both modes)");
}

/// Criterion 5: structural invariants of every computed basis vector:
/// unit diagonal, off-diagonal coefficients in vN[v], support inside the
/// dominance-and-orbit cone.
#[test]
fn criterion_05_structural_invariants() {
    let mut checked = 0u64;
    for k in [2usize, 3] {
        for l in [2u32, 3] {
            let c = ctx(k, l);
            for mode in [Mode::Llt, Mode::Fast] {
                let mut s: Session = Session::new(c, mode);
                for mu in regular_mus(c, 8) {
                    s.gcb(&mu).unwrap();
                }
                for mu in s.memo_keys() {
                    let g = s.gcb(&mu).unwrap();
                    assert!(g.coeff(&mu).is_one());
                    validate_gcb(c, &mu, &g).unwrap();
                    checked += 1;
                }
            }
        }
    }
    // The benchmark-scale vectors obey the same invariants.
    for (c, mu) in table1() {
        let mut s: Session = Session::new(c, Mode::Fast);
        s.gcb(&mu).unwrap();
        for key in s.memo_keys() {
            let g = s.gcb(&key).unwrap();
            validate_gcb(c, &key, &g).unwrap();
            checked += 1;
        }
    }
    println!("ACCEPTANCE 5 (structural suite on computed vectors): PASS ({checked} vectors)");
}

/// Criterion 6: hand-derived golden vectors at k = 2, l = 2.
#[test]
fn criterion_06_golden_values() {
    let c = ctx(2, 2);
    let golden = [
        (
            "2",
            vec![("2", LaurentPoly::one()), ("1,1", LaurentPoly::v())],
        ),
        (
            "4",
            vec![("4", LaurentPoly::one()), ("3,1", LaurentPoly::v())],
        ),
        (
            "3,1",
            vec![("3,1", LaurentPoly::one()), ("2,2", LaurentPoly::v())],
        ),
    ];
    for mode in [Mode::Llt, Mode::Fast] {
        let mut s: Session = Session::new(c, mode);
        for (mu, entries) in &golden {
            let mut expected = FockVector::zero(c);
            for (la, poly) in entries {
                expected.add_to(p(la), poly);
            }
            assert_eq!(
                *s.gcb(&p(mu)).unwrap(),
                expected,
                "golden value for mu={mu} in {mode:?}"
            );
        }
    }
    println!("ACCEPTANCE 6 (golden vectors at k=2, l=2): PASS (3 vectors, both modes)");
}

/// Criterion 7, attainable part: fast-mode recursion counts within +-50%
/// of the reported values on all four benchmark inputs (they match
/// exactly), fast count never exceeds the ladder count where the ladder
/// reference completed here (rows 1-3), and the largest input finishes in
/// fast mode well under the ten-minute budget.
#[test]
fn criterion_07_benchmark_counts() {
    let rows = table1();
    let fast_targets = [5u64, 17, 8, 48];

    let started = Instant::now();
    let mut fast_counts = Vec::new();
    for (i, (c, mu)) in rows.iter().enumerate() {
        let row = run_bench::<Int>(Algo::Fast, *c, mu).unwrap();
        let target = fast_targets[i] as f64;
        assert!(
            (row.n_count as f64) >= target * 0.5 && (row.n_count as f64) <= target * 1.5,
            "fast n_count {} outside +-50% of {} on row {}",
            row.n_count,
            fast_targets[i],
            i + 1
        );
        fast_counts.push(row.n_count);
    }
    let fast_elapsed = started.elapsed();
    assert!(
        fast_elapsed.as_secs() < 600,
        "fast suite took {fast_elapsed:?}, budget is 10 minutes"
    );

    for (i, (c, mu)) in rows.iter().take(3).enumerate() {
        let llt = run_bench::<Int>(Algo::Llt, *c, mu).unwrap();
        assert!(
            fast_counts[i] <= llt.n_count,
            "fast count {} exceeds ladder count {} on row {}",
            fast_counts[i],
            llt.n_count,
            i + 1
        );
    }
    println!(
        "ACCEPTANCE 7 (benchmark counts): PASS (fast n = {fast_counts:?}, targets {fast_targets:?}, fast suite in {:.2}s)",
        fast_elapsed.as_secs_f64()
    );
}

/// Criterion 7, reference band for the ladder algorithm: the recursion
/// counts of this implementation are required to lie within +-50% of the
/// counts reported for the original reference implementation (16, 619, 2245).
///
/// Rows 2 and 3 of this band are not attainable here: with memoization,
/// per-step truncation and largest-first correction (all fixed design
/// decisions), the ladder recursion is deterministic and computes 294 and
/// 714 vectors, well below half of the reference counts, while producing
/// bitwise-identical basis vectors (criterion 2). The first row matches
/// the reference exactly. This test states the band faithfully and is
/// expected to fail on rows 2-3; see the project notes for the analysis.
#[test]
fn criterion_07_llt_reference_band() {
    let rows = table1();
    let llt_targets = [16u64, 619, 2245];
    let mut failures = Vec::new();
    let mut counts = Vec::new();
    for (i, (c, mu)) in rows.iter().take(3).enumerate() {
        let row = run_bench::<Int>(Algo::Llt, *c, mu).unwrap();
        counts.push(row.n_count);
        let target = llt_targets[i] as f64;
        if (row.n_count as f64) < target * 0.5 || (row.n_count as f64) > target * 1.5 {
            failures.push(format!(
                "row {}: llt n_count {} outside +-50% of {}",
                i + 1,
                row.n_count,
                llt_targets[i]
            ));
        }
    }
    if failures.is_empty() {
        println!("ACCEPTANCE 7b (llt reference band): PASS (llt n = {counts:?})");
    } else {
        println!(
            "ACCEPTANCE 7b (llt reference band): FAIL (llt n = {counts:?}, targets {llt_targets:?})"
        );
        panic!(
            "llt reference band not met (known divergence from the original reference counts): {}",
            failures.join("; ")
        );
    }
}

/// Criterion 7, largest input: the fast recursion count cannot exceed the
/// ladder count on the fourth benchmark row either. The ladder run on
/// that input took 44 minutes and several gigabytes here (fast 48 vs llt
/// 11956; the original reference implementation never finished it), so
/// this test is skipped by default; run it explicitly with
/// `cargo test --release -p cbt-core --test acceptance -- --ignored`.
#[test]
#[ignore = "ladder mode on the largest benchmark input runs for hours; see README"]
fn criterion_07_row4_llt_dominates() {
    let (c, mu) = table1().into_iter().nth(3).unwrap();
    let fast = run_bench::<Int>(Algo::Fast, c, &mu).unwrap();
    let llt = run_bench::<Int>(Algo::Llt, c, &mu).unwrap();
    assert!(
        fast.n_count <= llt.n_count,
        "fast count {} exceeds ladder count {} on the largest input",
        fast.n_count,
        llt.n_count
    );
    println!(
        "ACCEPTANCE 7c (largest input, fast <= llt): PASS (fast {} <= llt {}, llt took {:.0}s)",
        fast.n_count, llt.n_count, llt.seconds
    );
}

/// Criterion 8: level independence. Basis vectors at level 2 and level 4
/// correspond exactly under the face-signature bijection, for 20 pairs at
/// k = 3.
#[test]
fn criterion_08_level_independence() {
    let k = 3usize;
    let c2 = ctx(k, 2);
    let c4 = ctx(k, 4);
    let mut s2: Session = Session::new(c2, Mode::Fast);
    let mut s4: Session = Session::new(c4, Mode::Fast);

    // Pair each 2-regular μ with ν = 2μ + ρ, whose ρ-shifted point is the
    // doubled one; their face signatures agree by construction.
    let mut pairs = 0;
    'outer: for n in 1..=10u64 {
        for mu in partitions_of(n, k) {
            if !mu.is_l_regular(2) {
                continue;
            }
            let rho = c2.rho();
            let nu = Partition::new(
                (1..=k)
                    .map(|i| 2 * mu.part(i) + rho.part(i))
                    .collect::<Vec<_>>(),
            );
            assert_eq!(
                face_signature(&c2.rho_shifted(&mu), c2),
                face_signature(&c4.rho_shifted(&nu), c4),
                "pair construction broken at mu={mu}"
            );

            let g2 = s2.gcb(&mu).unwrap();
            let g4 = s4.gcb(&nu).unwrap();
            assert_eq!(
                g2.len(),
                g4.len(),
                "support sizes differ at mu={mu}, nu={nu}"
            );

            let orbit4 = c4.orbit_members(&nu);
            for (la, d2) in g2.entries() {
                let sig = face_signature(&c2.rho_shifted(la), c2);
                let matches: Vec<&Partition> = orbit4
                    .iter()
                    .filter(|cand| face_signature(&c4.rho_shifted(cand), c4) == sig)
                    .collect();
                assert_eq!(
                    matches.len(),
                    1,
                    "face signature of {la} matches {} level-4 diagrams",
                    matches.len()
                );
                let d4 = g4.coeff(matches[0]);
                assert_eq!(*d2, d4, "coefficients differ at mu={mu} lambda={la}");
            }
            pairs += 1;
            if pairs == 20 {
                break 'outer;
            }
        }
    }
    assert_eq!(pairs, 20, "not enough pairs generated");
    println!("ACCEPTANCE 8 (level independence 2 -> 4 at k=3): PASS (20 pairs)");
}

/// Criterion 9: property (L) holds for every ladder path and for every
/// path the fast dispatch emits, on 200 random l-regular diagrams with
/// k <= 5, l <= 6, size <= 40.
#[test]
fn criterion_09_property_l_on_emitted_paths() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x91);
    let mut paths_checked = 0u64;
    for _ in 0..200 {
        let k = rng.gen_range(2..=5usize);
        let l = rng.gen_range(2..=6u32);
        let c = ctx(k, l);
        let mu = random_l_regular(&mut rng, c, 40);
        let ladder = ladder_path(&mu, c).unwrap();
        assert!(
            check_property_l(&ladder, c),
            "ladder path of {mu} (k={k}, l={l})"
        );
        paths_checked += 1;
        for path in dispatch_paths(c, &mu).unwrap() {
            assert!(
                check_property_l(&path, c),
                "dispatch path {:?} -> {:?} at mu={mu} (k={k}, l={l})",
                path.start(),
                path.end()
            );
            paths_checked += 1;
        }
    }
    println!("ACCEPTANCE 9 (property (L) on emitted paths): PASS ({paths_checked} paths)");
}

/// Criterion 10: wall-crossing weights. A single-crossing path from ν+ρ
/// to μ+ρ maps ν to μ + v^{±1} μ', the sign fixed by the side convention,
/// on 100 sampled adjacent-alcove configurations with k <= 3, l <= 3.
#[test]
fn criterion_10_wall_crossing_weights() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA1);
    let contexts = [ctx(2, 2), ctx(2, 3), ctx(3, 3)];
    let samples = sample_crossings(&mut rng, &contexts, 100, 8000);
    assert_eq!(
        samples.len(),
        100,
        "sampler found only {} configurations",
        samples.len()
    );
    let mut upward = 0;
    for s in &samples {
        assert!(
            verify_crossing(s).unwrap(),
            "crossing fails: nu={} mu={} reflected={} upward={}",
            s.nu,
            s.mu,
            s.mu_reflected,
            s.upward
        );
        if s.upward {
            upward += 1;
        }
    }
    assert!(
        upward > 0 && upward < 100,
        "both side conventions must occur"
    );
    println!("ACCEPTANCE 10 (wall-crossing weights): PASS (100 configurations, {upward} upward)");
}

/// JSON round trip of the CLI polynomial encoding on computed vectors
/// (supports the compare/cache interfaces; complements the unit tests).
#[test]
fn json_encoding_round_trips_on_computed_vectors() {
    let c = ctx(3, 2);
    let mut s: Session = Session::new(c, Mode::Fast);
    for mu in regular_mus(c, 8) {
        let g = s.gcb(&mu).unwrap();
        for (_, poly) in g.entries() {
            assert_eq!(LaurentPoly::from_json(&poly.to_json()).unwrap(), *poly);
        }
    }
}
