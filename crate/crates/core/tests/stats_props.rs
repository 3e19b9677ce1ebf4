use frameshift_core::annotation::{AnnotatedSentence, AnnotationStore, FrameElementInstance, FrameInstance, Span};
use frameshift_core::assets;
use frameshift_core::corpus::{Period, SentenceId};
use frameshift_core::stats::{
    chi2_2x2, chi2_yates, compare_frame_shares, erfc, extract_target_fe_pairs, frameset_occurrence_share,
    frameset_sentence_presence, Correction, TargetFilter,
};
use proptest::prelude::*;

/// erfc through the alternating Maclaurin series of erf, 30 terms.
fn erfc_series_oracle(x: f64) -> f64 {
    let mut sum = 0.0;
    let mut fact = 1.0;
    for n in 0..30 {
        if n > 0 {
            fact *= n as f64;
        }
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * x.powi(2 * n + 1) / (fact * (2 * n + 1) as f64);
    }
    1.0 - 2.0 / std::f64::consts::PI.sqrt() * sum
}

#[test]
fn erfc_at_zero_is_exactly_one() {
    assert_eq!(erfc(0.0), 1.0);
}

#[test]
fn erfc_agrees_with_series_oracle() {
    let oracle = erfc_series_oracle(1.0);
    assert!(((erfc(1.0) - oracle) / oracle).abs() < 1e-12, "{} vs {oracle}", erfc(1.0));
    for x in [0.05, 0.3, 0.5, 0.75, 1.25, 1.5] {
        let o = erfc_series_oracle(x);
        assert!(((erfc(x) - o) / o).abs() < 1e-12, "x={x}");
    }
}

#[test]
fn zero_statistic_means_p_one() {
    // 0 before vs 3 after against large totals: the correction swallows the difference
    let t = chi2_yates(0, 4119, 3, 28573 - 3);
    assert_eq!(t.statistic, 0.0);
    assert_eq!(t.p_value, 1.0);
    assert_eq!(chi2_yates(5, 5, 5, 5).p_value, 1.0);
}

const FRAMES: &[&str] = &["Statement", "Feeling", "Opinion", "Warning", "Attack", "Text"];
const ROLES: &[&str] = &["Speaker", "Experiencer", "Cognizer", "Message"];
const TEXT: &str = "AI said it feels";

fn frame() -> impl Strategy<Value = FrameInstance> {
    (
        prop::sample::select(FRAMES),
        prop::collection::vec((prop::sample::select(ROLES), any::<bool>()), 0..3),
    )
        .prop_map(|(frame, els)| FrameInstance {
            frame: frame.to_string(),
            trigger: Span::new(3, 7),
            elements: els
                .into_iter()
                .map(|(role, ai)| FrameElementInstance {
                    role: role.to_string(),
                    span: if ai { Span::new(0, 2) } else { Span::new(8, 10) },
                })
                .collect(),
        })
}

fn sentences() -> impl Strategy<Value = Vec<AnnotatedSentence>> {
    prop::collection::vec((any::<bool>(), prop::collection::vec(frame(), 0..4)), 1..30).prop_map(|v| {
        v.into_iter()
            .enumerate()
            .map(|(i, (after, frames))| AnnotatedSentence {
                sentence_id: SentenceId::new(format!("a{i:02}"), 0),
                period: if after { Period::After } else { Period::Before },
                text: TEXT.into(),
                frames,
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn chi2_is_symmetric_in_the_periods(a in 0u64..5000, b in 0u64..5000, c in 0u64..5000, d in 0u64..5000) {
        for corr in [Correction::Yates, Correction::None] {
            let x = chi2_2x2(a, b, c, d, corr);
            let y = chi2_2x2(c, d, a, b, corr);
            prop_assert_eq!(x.statistic, y.statistic);
            prop_assert_eq!(x.p_value, y.p_value);
        }
    }

    #[test]
    fn larger_share_gap_never_raises_p(n1 in 1u64..400, n2 in 1u64..400, k_frac in 0.0f64..1.0) {
        let k = ((n1 + n2) as f64 * k_frac) as u64;
        let lo = k.saturating_sub(n2);
        let hi = k.min(n1);
        let mut rows: Vec<(f64, f64)> = (lo..=hi)
            .map(|a| {
                let c = k - a;
                let gap = (a as f64 / n1 as f64 - c as f64 / n2 as f64).abs();
                (gap, chi2_yates(a, n1 - a, c, n2 - c).p_value)
            })
            .collect();
        rows.sort_by(|x, y| x.0.total_cmp(&y.0));
        for w in rows.windows(2) {
            if w[1].0 > w[0].0 + 1e-12 {
                prop_assert!(w[1].1 <= w[0].1 * (1.0 + 1e-12), "{:?}", w);
            }
        }
    }

    #[test]
    fn p_strictly_decreases_in_the_statistic(s1 in 1e-6f64..1400.0, ds in 1e-3f64..100.0) {
        let p = |s: f64| erfc((s / 2.0).sqrt());
        prop_assert!(p(s1) < 1.0);
        prop_assert!(p(s1 + ds) < p(s1));
    }

    #[test]
    fn frame_shares_sum_to_one(sents in sentences()) {
        let store = AnnotationStore::from_sentences(sents);
        let frames: Vec<String> = store.frame_names().cloned().collect();
        let cmp = compare_frame_shares(&store, &frames, Correction::Yates);
        prop_assert!(cmp.skipped.is_empty() || store.frame_total(Period::Before) == 0 || store.frame_total(Period::After) == 0);
        if store.frame_total(Period::Before) > 0 && store.frame_total(Period::After) > 0 {
            let before: f64 = cmp.rows.iter().map(|r| r.table.share_before).sum();
            let after: f64 = cmp.rows.iter().map(|r| r.table.share_after).sum();
            prop_assert!((before - 1.0).abs() < 1e-12);
            prop_assert!((after - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn distinct_sentences_bound_pair_counts(sents in sentences()) {
        let spec = assets::frameset("anthropomorphism").unwrap();
        let store = AnnotationStore::from_sentences(sents);
        let presence = frameset_sentence_presence(&store, &spec).unwrap();
        let compiled = spec.compile().unwrap();
        let overlap = store.sentences().map(|s| [s.period.index(), compiled.members_in(s).len()]);
        let mut multi = [false; 2];
        for [p, n] in overlap {
            multi[p] |= n > 1;
        }
        for p in 0..2 {
            let summed: u64 = presence.per_member.iter().map(|(_, c)| c[p]).sum();
            prop_assert!(presence.distinct[p] <= summed);
            prop_assert_eq!(presence.distinct[p] == summed, !multi[p]);
            prop_assert!(presence.distinct[p] <= presence.sentences[p]);
        }
    }

    #[test]
    fn statistics_ignore_input_order(sents in sentences()) {
        let forward = AnnotationStore::from_sentences(sents.clone());
        let backward = AnnotationStore::from_sentences(sents.into_iter().rev());
        let danger = assets::frameset("danger").unwrap();
        let anthro = assets::frameset("anthropomorphism").unwrap();
        prop_assert_eq!(
            frameset_occurrence_share(&forward, &danger, Correction::Yates).ok(),
            frameset_occurrence_share(&backward, &danger, Correction::Yates).ok()
        );
        prop_assert_eq!(
            frameset_sentence_presence(&forward, &anthro).unwrap(),
            frameset_sentence_presence(&backward, &anthro).unwrap()
        );
        prop_assert_eq!(
            extract_target_fe_pairs(&forward, &TargetFilter::ai()).unwrap(),
            extract_target_fe_pairs(&backward, &TargetFilter::ai()).unwrap()
        );
    }
}
