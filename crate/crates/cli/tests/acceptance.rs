//! Acceptance suite: the contract this engine must honor, one criterion per
//! test, each printing a single PASS/FAIL line
//! (`cargo test -p cantorval-cli --test acceptance -- --nocapture`).

use cantorval::bounds::alpha_lower;
use cantorval::classify::{classify, sweep, ClassifyOptions, FactKind};
use cantorval::nullseq::{qn_sequence, qn_upper_estimate};
use cantorval::rational::{parse_rational, rat, rat_int, Rational};
use cantorval::ratio::RatioValue;
use cantorval::render::{diagram_from_sweep, MarkStyle, RegionLabel};
use cantorval::sigma::{gap_stats, i_bruteforce, sumset_of_multigeometric, FiniteSigma};
use cantorval::sumsets::{
    cover_length, null_certificate, sigma_n, sumset_report, t12_check, SumsetBudget, T12Outcome,
};
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::Instant;

fn run_criterion(n: u32, desc: &str, body: impl FnOnce() + std::panic::UnwindSafe) {
    let outcome = catch_unwind(AssertUnwindSafe(body));
    match &outcome {
        Ok(()) => println!("[acceptance] criterion {n:2}: PASS — {desc}"),
        Err(_) => println!("[acceptance] criterion {n:2}: FAIL — {desc}"),
    }
    if let Err(e) = outcome {
        resume_unwind(e);
    }
}

fn ferens_sigma() -> FiniteSigma {
    sumset_of_multigeometric(&[rat_int(6), rat_int(5), rat_int(4), rat_int(3)]).unwrap()
}

fn gnj_sigma(m: i64) -> FiniteSigma {
    let mut coeffs = vec![rat_int(3)];
    coeffs.extend(std::iter::repeat_n(rat_int(2), m as usize));
    sumset_of_multigeometric(&coeffs).unwrap()
}

fn budget() -> SumsetBudget {
    SumsetBudget::default()
}

#[test]
fn criterion_01_ferens_cardinality() {
    run_criterion(1, "|Σ₃| = 2655 at q = 1/14 with bound 2655/2744, under 1 s", || {
        let sigma = ferens_sigma();
        assert_eq!(sigma.len(), 15);
        let q = rat(1, 14);
        let start = Instant::now();
        let report = sumset_report(&sigma, &q, 3, budget()).unwrap();
        let cert = null_certificate(&sigma, &q, 4, budget()).unwrap().unwrap();
        let elapsed = start.elapsed();
        assert_eq!(report.cardinality, 2655);
        assert_eq!(cert.depth, 3);
        assert_eq!(cert.bound, rat(2655, 2744));
        assert!(cert.bound < Rational::one());
        assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    });
}

#[test]
fn criterion_02_ferens_collision_at_one_fifteenth() {
    run_criterion(2, "zero-measure certificate at depth 2 for q = 1/15", || {
        let sigma = ferens_sigma();
        let cert = null_certificate(&sigma, &rat(1, 15), 4, budget())
            .unwrap()
            .unwrap();
        assert_eq!(cert.depth, 2);
        assert!(cert.bound < Rational::one());
        // the collision behind it: 4 = 4 + 0·q = 3 + 15·q at q = 1/15
        let report = sumset_report(&sigma, &rat(1, 15), 2, budget()).unwrap();
        let w = report.first_collision.unwrap();
        assert_eq!(w.depth, 2);
        assert!(w.replay(&sigma, &rat(1, 15)));
    });
}

#[test]
fn criterion_03_solomyak_table() {
    run_criterion(3, "α̲ table: 1/5, 1/4, 1/3, 1/2 within 5e-5; α̲(1/9) = 1/4 exact", || {
        let tol = rat(1, 1_000_000_000_000);
        let eps = rat(5, 100_000);
        let cases = [
            (rat(1, 5), "0.32482"),
            (rat(1, 4), "0.37097"),
            (rat(1, 3), "0.42773"),
            (rat(1, 2), "0.5"),
        ];
        for (d, expect) in cases {
            let a = alpha_lower(&d, &tol).unwrap();
            let target = parse_rational(expect).unwrap();
            assert!(
                (a.value.midpoint() - &target).abs() <= eps,
                "α̲({d}) = {} vs {expect}",
                a.value.decimal(8)
            );
        }
        let exact = alpha_lower(&rat(1, 9), &tol).unwrap();
        assert_eq!(exact.value, RatioValue::Exact(rat(1, 4)));
    });
}

#[test]
fn criterion_04_diagram_reproduction() {
    run_criterion(4, "sweep boundaries {1/8,1/6,2/11} and {1/15,1/13,1/7} + hollow C₀ marks", || {
        let opts = ClassifyOptions {
            depth_budget: 3,
            known_achievement: true,
            ..ClassifyOptions::default()
        };

        let s432 = sumset_of_multigeometric(&[rat_int(4), rat_int(3), rat_int(2)]).unwrap();
        let spec = diagram_from_sweep(&sweep(&s432, 210, &opts).unwrap()).unwrap();
        let bounds: Vec<Rational> = spec.segments.iter().skip(1).map(|s| s.lo.clone()).collect();
        assert_eq!(bounds, vec![rat(1, 8), rat(1, 6), rat(2, 11)]);
        let labels: Vec<RegionLabel> = spec.segments.iter().map(|s| s.label).collect();
        assert_eq!(
            labels,
            vec![RegionLabel::C0, RegionLabel::LambdaPlus, RegionLabel::MC, RegionLabel::I]
        );

        let s6543 = ferens_sigma();
        let spec = diagram_from_sweep(&sweep(&s6543, 210, &opts).unwrap()).unwrap();
        let bounds: Vec<Rational> = spec.segments.iter().skip(1).map(|s| s.lo.clone()).collect();
        assert_eq!(bounds, vec![rat(1, 15), rat(1, 13), rat(1, 7)]);
        let hollow: Vec<(Rational, String)> = spec
            .marks
            .iter()
            .filter(|m| m.style == MarkStyle::Hollow)
            .map(|m| (m.q.clone(), m.caption.clone()))
            .collect();
        assert_eq!(
            hollow,
            vec![(rat(1, 15), "C0".into()), (rat(1, 14), "C0".into())]
        );
    });
}

#[test]
fn criterion_05_gnj_family() {
    run_criterion(5, "GNJ m = 1…5: I = 2/(2m+5), i = min{1/2m, 2/(2m+5)}, d = 1/(2m+3), |Σ| = 2m+2", || {
        for m in 1i64..=5 {
            let sigma = gnj_sigma(m);
            assert_eq!(sigma.len() as i64, 2 * m + 2, "m={m}");
            let st = gap_stats(&sigma);
            assert_eq!(st.big_i, rat(2, 2 * m + 5), "m={m}");
            assert_eq!(
                st.little_i,
                std::cmp::min(rat(1, 2 * m), rat(2, 2 * m + 5)),
                "m={m}"
            );
            assert_eq!(st.d, rat(1, 2 * m + 3), "m={m}");
        }
    });
}

#[test]
fn criterion_06_interval_law() {
    run_criterion(6, "Σ = {0,…,s−1}, s = 2…6: IsInterval iff q ≥ 1/s over 200 ratios each", || {
        let opts = ClassifyOptions {
            depth_budget: 1,
            ..ClassifyOptions::default()
        };
        for s_card in 2i64..=6 {
            let sigma = FiniteSigma::new((0..s_card).map(rat_int).collect()).unwrap();
            for k in 1i64..=200 {
                let q = rat(k, 201);
                let out = classify(&sigma, &RatioValue::exact(q.clone()).unwrap(), &opts).unwrap();
                assert_eq!(
                    out.verdict.has(FactKind::IsInterval),
                    q >= rat(1, s_card),
                    "s={s_card} q={q}"
                );
            }
        }
    });
}

#[test]
fn criterion_07_qn_certificates() {
    run_criterion(7, "qₙ certificates for s = 4 and s = 8: ≥ 3 each, decreasing, replaying, obeying the root estimate", || {
        let tol = rat(1, 1_000_000_000);
        let cases = [(gnj_sigma(1), 4usize), (gnj_sigma(3), 8usize)];
        for (sigma, s) in cases {
            assert_eq!(sigma.len(), s);
            let certs = qn_sequence(&sigma, 3, &tol).unwrap();
            assert!(certs.len() >= 3, "s={s}");
            let one_over_s = rat(1, s as i64);
            for c in &certs {
                assert!(c.q_enclosure.lower() > &one_over_s, "s={s} n={}", c.n);
                assert!(c.replay(), "s={s} n={}", c.n);
                // replay includes (sⁿ − 2ⁿ⁻¹)·q̄ⁿ < 1 recomputed exactly;
                // check the root upper estimate on the enclosure too
                let est = qn_upper_estimate(s, c.n);
                assert!(c.q_enclosure.upper() < &est, "s={s} n={}", c.n);
            }
            for pair in certs.windows(2) {
                assert!(
                    pair[1].q_enclosure.upper() < pair[0].q_enclosure.lower(),
                    "s={s}: enclosures not strictly decreasing"
                );
            }
        }
    });
}

#[test]
fn criterion_08_property_suite() {
    run_criterion(8, "oracle suite: i(Σ) brute force ×200, cover monotone ×50, tight covers, Σₙ vs naive ×100", || {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);

        let random_sigma = |rng: &mut ChaCha8Rng, max_card: usize, max_val: i64| loop {
            let card = rng.gen_range(2..=max_card);
            let vals: BTreeSet<i64> = (0..card * 3)
                .map(|_| rng.gen_range(0..=max_val))
                .take(card * 3)
                .collect();
            let vals: Vec<i64> = vals.into_iter().take(card).collect();
            if vals.len() >= 2 {
                return FiniteSigma::new(vals.into_iter().map(rat_int).collect()).unwrap();
            }
        };

        // little_i ≡ brute force on 200 random digit sets with |Σ| ≤ 8
        for _ in 0..200 {
            let s = random_sigma(&mut rng, 8, 60);
            assert_eq!(
                gap_stats(&s).little_i,
                i_bruteforce(&s).unwrap(),
                "Σ = {s}"
            );
        }

        // cover length non-increasing in depth on 50 random (Σ, q)
        for _ in 0..50 {
            let s = random_sigma(&mut rng, 5, 20);
            let den = rng.gen_range(3i64..=12);
            let num = rng.gen_range(1..den);
            let q = rat(num, den);
            let mut prev: Option<Rational> = None;
            for n in 1u32..=3 {
                let r = cover_length(&s, &q, n, budget()).unwrap();
                if let Some(p) = &prev {
                    assert!(r.total_length <= *p, "Σ={s} q={q} n={n}");
                }
                prev = Some(r.total_length);
            }
        }

        // covers exactly diam/(1−q) at every depth once q ≥ I(Σ)
        for _ in 0..20 {
            let s = random_sigma(&mut rng, 5, 20);
            let st = gap_stats(&s);
            for q in [st.big_i.clone(), (&st.big_i + Rational::one()) / rat_int(2)] {
                if q >= Rational::one() {
                    continue;
                }
                let expect = &st.diam / (Rational::one() - &q);
                for n in 1u32..=4 {
                    let r = cover_length(&s, &q, n, budget()).unwrap();
                    assert_eq!(r.total_length, expect, "Σ={s} q={q} n={n}");
                }
            }
        }

        // sigma_n ≡ naive nested enumeration on 100 small instances
        for _ in 0..100 {
            let s = random_sigma(&mut rng, 6, 12);
            let den = rng.gen_range(3i64..=9);
            let num = rng.gen_range(1..den);
            let q = rat(num, den);
            let n = rng.gen_range(1u32..=4);
            let fast = sigma_n(&s, &q, n, budget()).unwrap();
            let naive = sigma_n_naive(&s, &q, n);
            assert_eq!(fast.elements(), &naive[..], "Σ={s} q={q} n={n}");
        }
    });
}

fn sigma_n_naive(sigma: &FiniteSigma, q: &Rational, n: u32) -> Vec<Rational> {
    let mut values: BTreeSet<Rational> = [Rational::from_integer(0.into())].into();
    let mut qi = Rational::one();
    for _ in 0..n {
        let mut next = BTreeSet::new();
        for v in &values {
            for a in sigma.elements() {
                next.insert(v + a * &qi);
            }
        }
        values = next;
        qi *= q;
    }
    values.into_iter().collect()
}

#[test]
fn criterion_09_rational_ratio_checks() {
    run_criterion(9, "t12: {0,1,2,3} and {0,2,3,5} clean to depth 10 at q = 1/4; Ferens zero measure at 1/15 depth 2", || {
        for sigma in [
            FiniteSigma::new([0, 1, 2, 3].map(rat_int).to_vec()).unwrap(),
            FiniteSigma::new([0, 2, 3, 5].map(rat_int).to_vec()).unwrap(),
        ] {
            let out = t12_check(&sigma, &rat(1, 4), 10, budget()).unwrap();
            match out {
                T12Outcome::NoViolationUpTo { depth, trace } => {
                    assert_eq!(depth, 10, "Σ={sigma}");
                    assert_eq!(trace.len(), 10);
                    for db in &trace {
                        assert!(db.bound >= Rational::one());
                    }
                }
                T12Outcome::ZeroMeasure(c) => panic!("unexpected certificate {c:?} for {sigma}"),
            }
        }
        let out = t12_check(&ferens_sigma(), &rat(1, 15), 10, budget()).unwrap();
        match out {
            T12Outcome::ZeroMeasure(c) => {
                assert_eq!(c.depth, 2);
                assert!(c.replay(&rat(1, 15)));
            }
            T12Outcome::NoViolationUpTo { .. } => panic!("expected zero measure at 1/15"),
        }
    });
}

#[test]
fn criterion_10_certificate_replay() {
    run_criterion(10, "verify subcommand re-validates 100% of emitted certificates", || {
        let bin = env!("CARGO_BIN_EXE_cantorval");
        let dir = tempfile::tempdir().unwrap();
        let path = |name: &str| dir.path().join(name).to_str().unwrap().to_string();
        let ferens = "0,3,4,5,6,7,8,9,10,11,12,13,14,15,18";

        // one artifact per certificate-emitting surface of criteria 1–9
        let commands: Vec<(Vec<&str>, String)> = vec![
            // criteria 1–2: Ferens null certificates
            (vec!["nullcert", "--sigma", ferens, "--q", "1/14", "--max-depth", "4"], path("c1.json")),
            (vec!["nullcert", "--sigma", ferens, "--q", "1/15", "--max-depth", "4"], path("c2.json")),
            // criterion 3: alpha bounds
            (vec!["bounds", "--d", "1/5"], path("c3a.json")),
            (vec!["bounds", "--d", "1/9"], path("c3b.json")),
            (vec!["bounds", "--d", "1/2"], path("c3c.json")),
            // criterion 4: sweeps of both digit sets
            (vec!["sweep", "--multigeometric", "4,3,2"], path("c4a.json")),
            (vec!["sweep", "--multigeometric", "6,5,4,3"], path("c4b.json")),
            // criteria 5–6: classify verdicts on GNJ and contiguous sets
            (vec!["classify", "--multigeometric", "3,2", "--q", "17/100"], path("c5.json")),
            (vec!["classify", "--sigma", "0,1,2,3", "--q", "1/3"], path("c6a.json")),
            (vec!["classify", "--sigma", "0,1,2,3", "--q", "1/5"], path("c6b.json")),
            // criterion 7: qn sequences
            (vec!["qnseq", "--multigeometric", "3,2", "--count", "3"], path("c7a.json")),
            (vec!["qnseq", "--multigeometric", "4,3,2", "--count", "3"], path("c7b.json")),
            // criterion 8: a cover report
            (vec!["cover", "--sigma", "0,1", "--q", "1/3", "--depth", "3"], path("c8.json")),
            // criterion 9: t12 outcomes
            (vec!["t12", "--sigma", "0,2,3,5", "--q", "1/4", "--max-depth", "10"], path("c9a.json")),
            (vec!["t12", "--sigma", ferens, "--q", "1/15"], path("c9b.json")),
        ];

        let mut artifacts = Vec::new();
        for (args, out_path) in &commands {
            let mut full = args.clone();
            full.push("--out");
            full.push(out_path);
            let out = Command::new(bin).args(&full).output().unwrap();
            let code = out.status.code().unwrap_or(-1);
            assert!(
                code == 0 || code == 3, // 3 = honest inconclusive report, still an artifact
                "{args:?} exited {code}: {}",
                String::from_utf8_lossy(&out.stderr)
            );
            artifacts.push(out_path.clone());
        }

        let out = Command::new(bin)
            .arg("verify")
            .args(&artifacts)
            .output()
            .unwrap();
        let stdout = String::from_utf8_lossy(&out.stdout);
        assert!(
            out.status.success(),
            "verify failed: {stdout}\n{}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(stdout.contains("(100%)"), "{stdout}");
    });
}
