//! Acceptance gate: every exit criterion in one suite, each with its pinned
//! parameters, tolerance, and runtime budget, printing one line per
//! criterion. Run with `cargo test --test acceptance -- --nocapture` to see
//! the lines as they pass.

use num::BigRational;
use spinor_verify::report::{CheckReport, Status};
use spinor_verify::{chars, cli, lfactors, matgroups, unram, weyl};
use std::time::{Duration, Instant};

struct Gate {
    lines: Vec<(String, bool)>,
}

impl Gate {
    fn new() -> Self {
        Gate { lines: Vec::new() }
    }

    fn record(&mut self, id: &str, ok: bool, budget: Duration, took: Duration, detail: &str) {
        let in_budget = took <= budget;
        let verdict = ok && in_budget;
        let line = format!(
            "criterion {id}: {} ({detail}; {:.2?} of {:.0?} budget)",
            if verdict { "PASS" } else { "FAIL" },
            took,
            budget
        );
        println!("{line}");
        self.lines.push((line, verdict));
    }

    fn finish(self) {
        let failures: Vec<&String> = self
            .lines
            .iter()
            .filter(|(_, ok)| !ok)
            .map(|(l, _)| l)
            .collect();
        assert!(
            failures.is_empty(),
            "acceptance criteria failed:\n{}",
            failures
                .iter()
                .map(|s| s.as_str())
                .collect::<Vec<_>>()
                .join("\n")
        );
    }
}

fn passed(r: &CheckReport) -> bool {
    r.status == Status::Pass
}

#[test]
fn acceptance() {
    let mut gate = Gate::new();

    // 1. u_Q group law, inverse, commutator: symbolic, n = 2 and 3, < 5 s
    let t = Instant::now();
    let ok = [2, 3].iter().all(|&n| {
        passed(&matgroups::verify_uq_group_law(n))
            && passed(&matgroups::verify_commutator_and_inverse(n))
    });
    gate.record(
        "1 (u_Q structure laws)",
        ok,
        Duration::from_secs(5),
        t.elapsed(),
        "zero residual at n = 2 and n = 3",
    );

    // 2. det m_Q^1 on >= 20 exact random samples at n = 2, < 5 s
    let t = Instant::now();
    let r = matgroups::verify_det_mq1(2, 20, 42);
    gate.record(
        "2 (det of induced action)",
        passed(&r),
        Duration::from_secs(5),
        t.elapsed(),
        &r.residual,
    );

    // 3. the 20-letter word: displayed permutation, reduced of length 20,
    //    factorization with additive lengths, < 1 s
    let t = Instant::now();
    let datum = weyl::DRootDatum::new(6);
    let (w, reduced) = datum.from_word(&weyl::MAIN_WORD);
    let perm_ok = (1..=12).all(|i| w.image(i) == weyl::MAIN_PERM[i - 1] as usize);
    let r = weyl::factorization_check();
    gate.record(
        "3 (main Weyl word)",
        perm_ok && reduced && datum.length(&w) == 20 && passed(&r),
        Duration::from_secs(1),
        t.elapsed(),
        "permutation, length 20, and factorizations match",
    );

    // 4. census of 25 with distinct signatures; U_Q cap w^{-1} P w is the
    //    (y7, y8) plane; < 10 s
    let t = Instant::now();
    let (reps, census_report) = weyl::min_double_coset_census();
    let (free, ci_report) = weyl::conjugate_intersection(&w, &[3, 3, 3, 3]);
    let ok = passed(&census_report)
        && reps.len() == 25
        && passed(&ci_report)
        && free == vec!["y7".to_string(), "y8".to_string()];
    gate.record(
        "4 (double cosets)",
        ok,
        Duration::from_secs(10),
        t.elapsed(),
        "25 representatives; free coordinates y7, y8",
    );

    // 5. orbit tables over F_3 and F_5 match the 3/2/2/1 row pattern with
    //    the listed separations; refinements surface as findings; < 60 s per
    //    prime
    for p in [3u32, 5] {
        let t = Instant::now();
        let (rows, report) = weyl::orbit_table_check(p);
        let pattern: Vec<usize> = rows.iter().map(|r| r.orbit_count).collect();
        let ok = report.status != Status::Fail
            && pattern == vec![3, 2, 2, 2, 2, 1, 1, 1]
            && (report.status != Status::Finding || !report.notes.is_empty());
        gate.record(
            &format!("5 (orbit table, p = {p})"),
            ok,
            Duration::from_secs(60),
            t.elapsed(),
            &format!("row pattern {pattern:?}"),
        );
    }

    // 6. the mu_{i,j} proposition to degree 10 and the corollary to degree
    //    8, exact equality, < 5 min each
    let t = Instant::now();
    let r = chars::verify_prop_sym_vxw(10);
    gate.record(
        "6a (sym V x W, degree 10)",
        passed(&r),
        Duration::from_secs(300),
        t.elapsed(),
        &r.residual,
    );
    let t = Instant::now();
    let r = chars::verify_cor_symalg(8);
    gate.record(
        "6b (corollary, degree 8)",
        passed(&r),
        Duration::from_secs(300),
        t.elapsed(),
        &r.residual,
    );

    // 7. the triple proposition: gammas on (N1, N2) in {0..4}^2 and series
    //    agreement to degree 6, < 10 min
    let t = Instant::now();
    let r = chars::verify_prop_triple(6);
    gate.record(
        "7 (triple product, degree 6)",
        passed(&r),
        Duration::from_secs(600),
        t.elapsed(),
        &r.residual,
    );

    // 8. V x V': tau-exact residual zero (no truncation) and series mode to
    //    degree 5, < 15 min
    let t = Instant::now();
    let tau_r = chars::verify_prop_double_sl2_tau();
    let ser_r = chars::verify_prop_double_sl2_series(5);
    gate.record(
        "8 (V x V', tau-exact + series 5)",
        passed(&tau_r) && passed(&ser_r),
        Duration::from_secs(900),
        t.elapsed(),
        &format!("tau: {}; series: {}", tau_r.residual, ser_r.residual),
    );

    // 9. master identity to t-degree 6, exact, with mutation detection,
    //    < 10 min
    let t = Instant::now();
    let m_xy = unram::default_master_xy(6);
    let lhs = unram::master_lhs(6, m_xy);
    let clean = unram::verify_master_with(&lhs, 6, m_xy, None);
    let mutated = unram::verify_master_with(&lhs, 6, m_xy, Some(0));
    gate.record(
        "9 (master identity, degree 6)",
        passed(&clean) && mutated.status == Status::Fail,
        Duration::from_secs(600),
        t.elapsed(),
        &format!("{}; mutated nu detected", clean.residual),
    );

    // 10. normalization identity, exact, < 1 s
    let t = Instant::now();
    let r = unram::verify_normalization(None);
    gate.record(
        "10 (normalization)",
        passed(&r) && unram::z1_is_nontrivial(),
        Duration::from_secs(1),
        t.elapsed(),
        &r.residual,
    );

    // 11. nu_s monomial identity, formal in (n1..n4), < 1 s
    let t = Instant::now();
    let r = unram::verify_nu_s();
    gate.record(
        "11 (nu_s identity)",
        passed(&r),
        Duration::from_secs(1),
        t.elapsed(),
        &r.residual,
    );

    // 12. numeric theorem: 10 random unitary classes at x = y = 1/6,
    //     truncation 24, relative error <= 1e-6 each; twist reduction to
    //     1e-12; < 5 min
    let t = Instant::now();
    let sixth = BigRational::new(1.into(), 6.into());
    let thm = lfactors::verify_theorem(10, 1, &sixth, &sixth, 24, 1e-6, 2.0, false);
    let twist = lfactors::verify_twist_reduce(10, 7, 3.0);
    gate.record(
        "12 (numeric theorem + twists)",
        passed(&thm) && passed(&twist),
        Duration::from_secs(300),
        t.elapsed(),
        &format!("{}; twists: {}", thm.residual, twist.residual),
    );

    // 13. determinism: two consecutive full-suite runs produce byte-identical
    //     JSON reports. Wall-clock measurement (elapsed_ms) is the one field
    //     that varies by design — the cache example in the contract expects
    //     elapsed to drop on a rerun — so reports are compared with
    //     elapsed_ms zeroed and must be byte-identical otherwise.
    let t = Instant::now();
    let tmp = tempfile::tempdir().unwrap();
    let cache = cli::Cache::open(Some(tmp.path().to_str().unwrap())).unwrap();
    let normalize = |rs: &[CheckReport]| -> String {
        let zeroed: Vec<CheckReport> = rs
            .iter()
            .map(|r| {
                let mut r = r.clone();
                r.elapsed_ms = 0;
                r
            })
            .collect();
        cli::render_json(&zeroed)
    };
    let first = cli::run_all(&cache).unwrap();
    let second = cli::run_all(&cache).unwrap();
    let identical = normalize(&first) == normalize(&second);
    let all_pass = first.iter().all(|r| r.status != Status::Fail);
    gate.record(
        "13 (determinism)",
        identical && all_pass,
        Duration::from_secs(900),
        t.elapsed(),
        "full-suite reports byte-identical (timing field aside)",
    );

    gate.finish();
}
