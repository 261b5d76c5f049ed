//! End-to-end use of the public API: generate, serialise, classify, replay.

use std::sync::Arc;

use wt1::classifier::{classify, verify, Certificate, ClassifierConfig, Verdict};
use wt1::quadfields::{characters_of_group, ideals_of_norm, ray_class_group, theta_series};
use wt1::store::{validate_hecke, NewformRecord};

const FIXTURES: [(&str, Verdict); 3] = [
    (include_str!("../fixtures/level124_a4.wt1"), Verdict::A4),
    (include_str!("../fixtures/level148_s4.wt1"), Verdict::S4),
    (include_str!("../fixtures/level633_a5.wt1"), Verdict::A5),
];

fn budget(b: Option<u64>) -> ClassifierConfig {
    ClassifierConfig { prime_budget: b, ..Default::default() }
}

#[test]
fn generated_forms_survive_the_text_format_and_classify_dihedral() {
    for (d, n) in [(-23i64, 1u64), (-31, 1), (-4, 9), (-3, 13), (-7, 8), (-47, 1), (-20, 3)] {
        for f in ideals_of_norm(d, n) {
            let group = Arc::new(ray_class_group(d, &f).unwrap());
            for psi in characters_of_group(group).iter().take(2) {
                let theta = theta_series(psi, 150).unwrap();
                let r = NewformRecord::from_theta(&theta, "generated").unwrap();
                let back = NewformRecord::parse(&r.serialize()).unwrap();
                assert_eq!(back, r);
                assert!(validate_hecke(&back).is_valid());
                let cert = classify(&back, &ClassifierConfig::default()).unwrap();
                assert_eq!(cert.verdict, Verdict::Dihedral, "D={d} f={f}");
                let cert = Certificate::parse(&cert.to_text()).unwrap();
                assert!(verify(&cert, &back).is_ok());
            }
        }
    }
}

#[test]
fn enlarging_the_budget_never_flips_a_verdict() {
    for (text, expected) in FIXTURES {
        let r = NewformRecord::parse(text).unwrap();
        let mut settled = None;
        for b in [Some(2), Some(5), Some(11), Some(23), Some(50), Some(100), None] {
            let cert = classify(&r, &budget(b)).unwrap();
            assert!(verify(&cert, &r).is_ok(), "budget {b:?}");
            match (settled, cert.verdict) {
                (_, Verdict::Inconclusive) => assert!(settled.is_none(), "budget {b:?} lost a verdict"),
                (None, v) => settled = Some(v),
                (Some(s), v) => assert_eq!(s, v),
            }
        }
        assert_eq!(settled, Some(expected));
    }
}

#[test]
fn exhausted_budget_reports_its_reasons() {
    let r = NewformRecord::parse(FIXTURES[2].0).unwrap();
    let cert = classify(&r, &budget(Some(2))).unwrap();
    assert_eq!(cert.verdict, Verdict::Inconclusive);
    assert!(cert.inconclusive.iter().any(|s| s.contains("within the prime budget")));
    assert!(cert.inconclusive.iter().any(|s| s.contains("outside implemented scope")));
    assert!(cert.to_text().contains("config prime-budget 2 strict no"));
}

#[test]
fn edited_certificates_fail_replay() {
    let r = NewformRecord::parse(FIXTURES[0].0).unwrap();
    let text = classify(&r, &ClassifierConfig::default()).unwrap().to_text();
    let edited = text.replace("verdict A4", "verdict S4");
    let cert = Certificate::parse(&edited).unwrap();
    assert!(!verify(&cert, &r).is_ok());
    assert!(Certificate::parse(&text.replace("end\n", "")).is_err());
}
