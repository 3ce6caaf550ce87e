//! End-to-end acceptance checks, one numbered pass/fail line each.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see every line;
//! under the default capture the lines of failing checks still reach the
//! terminal. Sampled inputs are drawn from a fixed seed, so reruns are
//! byte-identical.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use renyi_combining::analysis::{
    verify_appendix_identities, verify_counterexample_a, verify_counterexample_c, Precision,
};
use renyi_combining::channel::{BinaryChannel, EntropyKind, JointDistribution};
use renyi_combining::combining::{
    bec_bound, bsc_bound, check_bounds, combine_pair, gap_delta, second_branch_entropy,
    shannon_baselines, Direction,
};
use renyi_combining::entropy::Alpha;
use renyi_combining::polar::{check_polar_conditions, polarize_tree, MergePolicy, PolarConfig};
use renyi_combining::sampling::{random_channel, random_joint};

const SLACK: f64 = 1e-10;

fn ck<T>(r: renyi_combining::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn finish(num: u32, label: &str, outcome: Result<(), String>) {
    match outcome {
        Ok(()) => println!("criterion {num:02}: PASS ({label})"),
        Err(why) => {
            println!("criterion {num:02}: FAIL ({label})");
            panic!("criterion {num:02}: {why}");
        }
    }
}

fn fin(a: f64) -> Alpha<f64> {
    Alpha::new(a).expect("finite positive order")
}

/// 1000 channel pairs with alphabets of at most 6 outputs, fixed seed.
fn seeded_pairs() -> Vec<(JointDistribution, JointDistribution)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    (0..1000)
        .map(|_| {
            let a = random_channel(&mut rng, 6).to_joint();
            let b = random_channel(&mut rng, 6).to_joint();
            (a, b)
        })
        .collect()
}

#[test]
fn criterion_01_arimoto_gap_signs_on_extended_grids() {
    finish(
        1,
        "arimoto gap strictly negative then strictly positive on both certification grids, extended precision",
        (|| {
            let rep = ck(verify_counterexample_a(Precision::Extended))?;
            if !rep.passed
                || !rep.negative.offending.is_empty()
                || !rep.positive.offending.is_empty()
            {
                return Err(rep.to_text());
            }
            Ok(())
        })(),
    );
}

#[test]
fn criterion_02_cachin_gap_signs_on_extended_grids() {
    finish(
        2,
        "cachin gap strictly negative then strictly positive on both certification grids, extended precision",
        (|| {
            let rep = ck(verify_counterexample_c(Precision::Extended))?;
            if !rep.passed
                || !rep.negative.offending.is_empty()
                || !rep.positive.offending.is_empty()
            {
                return Err(rep.to_text());
            }
            Ok(())
        })(),
    );
}

#[test]
fn criterion_03_hayashi_gap_vanishes_at_the_linear_orders() {
    finish(
        3,
        "hayashi gap below 1e-12 at orders 2 and 3 for crossovers 0.01..0.49",
        (|| {
            let mut worst = 0.0f64;
            for i in 1..=49 {
                let p = f64::from(i) / 100.0;
                for a in [2.0, 3.0] {
                    let d: f64 = ck(gap_delta(&p, &fin(a), EntropyKind::Hayashi))?;
                    worst = worst.max(d.abs());
                }
            }
            if worst >= 1e-12 {
                return Err(format!("largest |gap| is {worst:e}"));
            }
            Ok(())
        })(),
    );
}

#[test]
fn criterion_04_hayashi_sandwich_directions_on_random_pairs() {
    finish(
        4,
        "hayashi-kind sandwich on 1000 pairs, slack >= -1e-10; symmetric expression is the \
         lower bound at orders 0.5, 1.2, 1.8, 4, 10 and the upper bound at 2.5",
        (|| {
            let pairs = seeded_pairs();
            let cases = [
                (0.5, Direction::BscLowerBecUpper),
                (1.2, Direction::BscLowerBecUpper),
                (1.8, Direction::BscLowerBecUpper),
                (4.0, Direction::BscLowerBecUpper),
                (10.0, Direction::BscLowerBecUpper),
                (2.5, Direction::BscUpperBecLower),
            ];
            for (a, want) in cases {
                let alpha = fin(a);
                for (i, (j1, j2)) in pairs.iter().enumerate() {
                    let rep = ck(check_bounds(j1, j2, &alpha, EntropyKind::Hayashi))?;
                    if !rep.assertable || rep.direction != want {
                        return Err(format!(
                            "order {a} pair {i}: direction {} (assertable {})",
                            rep.direction, rep.assertable
                        ));
                    }
                    if rep.slack_bsc < -SLACK || rep.slack_bec < -SLACK {
                        return Err(format!(
                            "order {a} pair {i}: slacks ({:e}, {:e})",
                            rep.slack_bsc, rep.slack_bec
                        ));
                    }
                }
            }
            Ok(())
        })(),
    );
}

#[test]
fn criterion_05_arimoto_high_order_sandwich_on_random_pairs() {
    finish(
        5,
        "arimoto-kind sandwich on 1000 pairs at orders 2, 2.5, 5: symmetric expression \
         above, erasure expression below, slack >= -1e-10",
        (|| {
            let pairs = seeded_pairs();
            for a in [2.0, 2.5, 5.0] {
                let alpha = fin(a);
                for (i, (j1, j2)) in pairs.iter().enumerate() {
                    let rep = ck(check_bounds(j1, j2, &alpha, EntropyKind::Arimoto))?;
                    if !rep.assertable || rep.direction != Direction::BscUpperBecLower {
                        return Err(format!(
                            "order {a} pair {i}: direction {} (assertable {})",
                            rep.direction, rep.assertable
                        ));
                    }
                    if rep.slack_bsc < -SLACK || rep.slack_bec < -SLACK {
                        return Err(format!(
                            "order {a} pair {i}: slacks ({:e}, {:e})",
                            rep.slack_bsc, rep.slack_bec
                        ));
                    }
                }
            }
            Ok(())
        })(),
    );
}

#[test]
fn criterion_06_equality_witnesses_for_both_expressions() {
    finish(
        6,
        "symmetric pairs meet the symmetric expression and erasure pairs the erasure \
         expression within 1e-10, all four kinds, plus the infinite-order arimoto kind",
        (|| {
            let kinds = [
                EntropyKind::Arimoto,
                EntropyKind::Hayashi,
                EntropyKind::Jizba,
                EntropyKind::Cachin,
            ];
            let mut probes: Vec<(EntropyKind, Alpha<f64>)> = Vec::new();
            for kind in kinds {
                for a in [0.5, 1.5, 2.0, 2.5, 3.0, 5.0] {
                    probes.push((kind, fin(a)));
                }
            }
            probes.push((EntropyKind::Arimoto, Alpha::Infinity));

            let ps = [0.02, 0.11, 0.23, 0.35, 0.47];
            for &p in &ps {
                for &q in &ps {
                    let j1 = ck(BinaryChannel::bsc(p))?.to_joint();
                    let j2 = ck(BinaryChannel::bsc(q))?.to_joint();
                    let combined = ck(combine_pair(&j1, &j2))?;
                    for (kind, alpha) in &probes {
                        let actual: f64 = ck(combined.cond_entropy(alpha, *kind))?;
                        let h1: f64 = ck(j1.cond_entropy(alpha, *kind))?;
                        let h2: f64 = ck(j2.cond_entropy(alpha, *kind))?;
                        let expr: f64 = ck(bsc_bound(&h1, &h2, alpha))?;
                        if (actual - expr).abs() >= SLACK {
                            return Err(format!(
                                "symmetric pair ({p}, {q}) kind {kind} order {}: gap {:e}",
                                alpha.order_f64(),
                                (actual - expr).abs()
                            ));
                        }
                    }
                }
            }

            let es = [0.05, 0.25, 0.5, 0.75, 0.95];
            for &e1 in &es {
                for &e2 in &es {
                    let j1 = ck(BinaryChannel::bec(e1))?.to_joint();
                    let j2 = ck(BinaryChannel::bec(e2))?.to_joint();
                    let combined = ck(combine_pair(&j1, &j2))?;
                    for (kind, alpha) in &probes {
                        let actual: f64 = ck(combined.cond_entropy(alpha, *kind))?;
                        let expr: f64 = match kind {
                            EntropyKind::Cachin => {
                                let h1: f64 = ck(j1.cond_entropy(alpha, *kind))?;
                                let h2: f64 = ck(j2.cond_entropy(alpha, *kind))?;
                                ck(bec_bound(&h1, &h2, alpha, *kind))?
                            }
                            _ => {
                                let k1: f64 = ck(j1.k_cond(alpha, *kind))?;
                                let k2: f64 = ck(j2.k_cond(alpha, *kind))?;
                                ck(bec_bound(&k1, &k2, alpha, *kind))?
                            }
                        };
                        if (actual - expr).abs() >= SLACK {
                            return Err(format!(
                                "erasure pair ({e1}, {e2}) kind {kind} order {}: gap {:e}",
                                alpha.order_f64(),
                                (actual - expr).abs()
                            ));
                        }
                    }
                }
            }
            Ok(())
        })(),
    );
}

#[test]
fn criterion_07_order_one_baseline_chain_and_second_branch() {
    finish(
        7,
        "order-1 chain: closed-form floor <= symmetric bound <= actual <= erasure bound, \
         exact additivity, second-branch sandwich; 1000 pairs",
        (|| {
            let one = Alpha::One;
            for (i, (j1, j2)) in seeded_pairs().iter().enumerate() {
                let h1: f64 = ck(j1.cond_entropy(&one, EntropyKind::Shannon))?;
                let h2: f64 = ck(j2.cond_entropy(&one, EntropyKind::Shannon))?;
                let combined = ck(combine_pair(j1, j2))?;
                let actual: f64 = ck(combined.cond_entropy(&one, EntropyKind::Shannon))?;
                let b = ck(shannon_baselines(&h1, &h2))?;
                if actual < b.mgl_lower - SLACK || actual > b.bec_upper + SLACK {
                    return Err(format!(
                        "pair {i}: actual {actual} outside [{}, {}]",
                        b.mgl_lower, b.bec_upper
                    ));
                }
                for h in [h1, h2] {
                    let d = ck(shannon_baselines(&h, &h))?;
                    let floor = d.refined_lower.expect("equal entropies have the closed form");
                    if floor > d.mgl_lower + SLACK {
                        return Err(format!(
                            "pair {i}: closed-form floor {floor} above the symmetric bound {}",
                            d.mgl_lower
                        ));
                    }
                }
                let second: f64 = ck(second_branch_entropy(j1, j2))?;
                if (actual + second - (h1 + h2)).abs() >= SLACK {
                    return Err(format!(
                        "pair {i}: additivity residual {:e}",
                        (actual + second - (h1 + h2)).abs()
                    ));
                }
                if second < b.plus_lower - SLACK || second > b.plus_upper + SLACK {
                    return Err(format!(
                        "pair {i}: second branch {second} outside [{}, {}]",
                        b.plus_lower, b.plus_upper
                    ));
                }
            }
            Ok(())
        })(),
    );
}

#[test]
fn criterion_08_order_limits_match_shannon_and_min_entropy() {
    finish(
        8,
        "orders 1 +/- 1e-6 within 1e-5 of the order-1 value for all four kinds, and \
         arimoto order 1e6 within 1e-5 of the min-entropy, 100 joints",
        (|| {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            let near = [fin(1.0 - 1e-6), fin(1.0 + 1e-6)];
            let huge = fin(1e6);
            let kinds = [
                EntropyKind::Arimoto,
                EntropyKind::Hayashi,
                EntropyKind::Jizba,
                EntropyKind::Cachin,
            ];
            for i in 0..100 {
                let j = random_joint(&mut rng, 6);
                let shannon: f64 = ck(j.cond_entropy(&Alpha::One, EntropyKind::Shannon))?;
                for kind in kinds {
                    for alpha in &near {
                        let h: f64 = ck(j.cond_entropy(alpha, kind))?;
                        if (h - shannon).abs() >= 1e-5 {
                            return Err(format!(
                                "joint {i} kind {kind} order {}: gap {:e}",
                                alpha.order_f64(),
                                (h - shannon).abs()
                            ));
                        }
                    }
                }
                let min_h: f64 = ck(j.cond_entropy(&Alpha::Infinity, EntropyKind::MinEntropy))?;
                let a_huge: f64 = ck(j.cond_entropy(&huge, EntropyKind::Arimoto))?;
                if (a_huge - min_h).abs() >= 1e-5 {
                    return Err(format!("joint {i}: gap {:e}", (a_huge - min_h).abs()));
                }
            }
            Ok(())
        })(),
    );
}

#[test]
fn criterion_09_closed_form_identity_audit() {
    finish(
        9,
        "derivative, witness stationarity, convolution closed forms, constant witness \
         at the linear orders",
        (|| {
            let rep = ck(verify_appendix_identities())?;
            if !rep.passed {
                return Err(rep.to_text());
            }
            Ok(())
        })(),
    );
}

#[test]
fn criterion_10_polarization_chain_rule_tree_and_merge_sensitivity() {
    finish(
        10,
        "chain rule exact on 500 channels, depth-3 tree mean constant with strictly \
         increasing variance, posterior merge moves only the joint-order value",
        (|| {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            for i in 0..500 {
                let w = random_channel(&mut rng, 6);
                for a in [0.5, 1.5, 2.0, 3.0] {
                    let c = ck(check_polar_conditions(&w, &fin(a)))?;
                    if c.chain_residual.abs() >= SLACK {
                        return Err(format!(
                            "channel {i} order {a}: chain residual {:e}",
                            c.chain_residual
                        ));
                    }
                }
            }

            let w = ck(BinaryChannel::bsc(0.11))?;
            for a in [0.5, 2.0, 3.0] {
                let cfg = ck(PolarConfig::new(fin(a), 3, 0.1, 0.9, MergePolicy::None))?;
                let run = ck(polarize_tree(&w, &cfg))?;
                let mean0 = run.levels[0].mean;
                for stats in &run.levels {
                    if (stats.mean - mean0).abs() >= SLACK {
                        return Err(format!(
                            "order {a} level {}: mean drift {:e}",
                            stats.level,
                            (stats.mean - mean0).abs()
                        ));
                    }
                }
                for pair in run.levels.windows(2) {
                    if pair[1].variance <= pair[0].variance {
                        return Err(format!(
                            "order {a}: variance stalls at level {}",
                            pair[1].level
                        ));
                    }
                }
            }

            // Two of these outputs carry the same posterior, so merging them
            // is invisible to the posterior-mixture kinds but shifts the
            // output-marginal term of the joint-order kind.
            let ch = ck(BinaryChannel::new(vec![
                (0.4, 0.1),
                (0.2, 0.05),
                (0.3, 0.5),
                (0.1, 0.35),
            ]))?;
            let merged = ch.merge_equivalent_outputs();
            if merged.output_count() != 3 {
                return Err(format!("expected 3 merged outputs, got {}", merged.output_count()));
            }
            let two = fin(2.0);
            let j_raw: f64 = ck(ch.cond_entropy(&two, EntropyKind::Jizba))?;
            let j_merged: f64 = ck(merged.cond_entropy(&two, EntropyKind::Jizba))?;
            if (j_raw - j_merged).abs() <= 1e-3 {
                return Err(format!(
                    "joint-order value moved only {:e} under merging",
                    (j_raw - j_merged).abs()
                ));
            }
            for kind in [EntropyKind::Arimoto, EntropyKind::Hayashi, EntropyKind::Cachin] {
                let raw: f64 = ck(ch.cond_entropy(&two, kind))?;
                let after: f64 = ck(merged.cond_entropy(&two, kind))?;
                if (raw - after).abs() >= 1e-12 {
                    return Err(format!("kind {kind} moved {:e} under merging", (raw - after).abs()));
                }
            }
            Ok(())
        })(),
    );
}

#[test]
fn criterion_11_per_output_assembly_matches_direct_evaluation() {
    finish(
        11,
        "per-output k-value assembly agrees with direct evaluation within 1e-12 on 1000 \
         joints, three k-decomposed kinds",
        (|| {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            let kinds = [EntropyKind::Arimoto, EntropyKind::Hayashi, EntropyKind::Jizba];
            for i in 0..1000 {
                let j = random_joint(&mut rng, 6);
                for kind in kinds {
                    for a in [0.5, 1.5, 2.5, 4.0] {
                        let alpha = fin(a);
                        let direct: f64 = ck(j.cond_entropy(&alpha, kind))?;
                        let k: f64 = ck(j.k_cond_by_parts(&alpha, kind))?;
                        let scale = match kind {
                            EntropyKind::Arimoto => (1.0 - a) / a,
                            _ => 1.0 - a,
                        };
                        let assembled = k.ln() / scale;
                        if (assembled - direct).abs() >= 1e-12 {
                            return Err(format!(
                                "joint {i} kind {kind} order {a}: gap {:e}",
                                (assembled - direct).abs()
                            ));
                        }
                    }
                }
            }
            Ok(())
        })(),
    );
}
