//! Rule-based classification of a token's governance posture from
//! detector output, plus an additive risk score.

use serde::Serialize;

use crate::config::Weights;
use crate::detect::{Finding, FindingSource, Pattern, PrivilegeGuard};

/// Per-token feature summary consumed by the classifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FeatureVector {
    pub has_self_destruction: bool,
    pub has_deprecation: bool,
    pub has_address_change: bool,
    pub has_mint: bool,
    pub has_burn: bool,
    pub guard_count: usize,
    /// At least one privilege guard exists, whatever it protects.
    pub ownable: bool,
    /// Dangerous source-level capabilities open to any caller.
    pub unguarded_dangerous_count: usize,
    /// Findings covered by a privilege guard.
    pub guarded_finding_count: usize,
    /// Reachable SELFDESTRUCT seen in bytecode-only analysis.
    pub bytecode_self_destruct: bool,
}

impl FeatureVector {
    pub const EMPTY: FeatureVector = FeatureVector {
        has_self_destruction: false,
        has_deprecation: false,
        has_address_change: false,
        has_mint: false,
        has_burn: false,
        guard_count: 0,
        ownable: false,
        unguarded_dangerous_count: 0,
        guarded_finding_count: 0,
        bytecode_self_destruct: false,
    };
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Administrated,
    EffectivelyUngoverned,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Administrated => "administrated",
            Verdict::EffectivelyUngoverned => "effectively-ungoverned",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Classification {
    pub verdict: Verdict,
    /// Governance-by-ownability quadrant, e.g. "administrated/ownable".
    pub quadrant: String,
    /// Additive score clamped to 0..=100.
    pub risk_score: u32,
    pub features: FeatureVector,
    /// Every triggering feature by name; for ungoverned tokens, why
    /// nothing counted.
    pub rationale: Vec<String>,
}

/// Summarizes findings and guards into the classifier's features.
pub fn featurize(findings: &[Finding], guards: &[PrivilegeGuard]) -> FeatureVector {
    let has = |p: Pattern| findings.iter().any(|f| f.pattern == p);
    FeatureVector {
        has_self_destruction: has(Pattern::SelfDestruction),
        has_deprecation: has(Pattern::Deprecation),
        has_address_change: has(Pattern::ChangeOfAddress),
        has_mint: has(Pattern::Minting),
        has_burn: has(Pattern::Burning),
        guard_count: guards.len(),
        ownable: !guards.is_empty(),
        unguarded_dangerous_count: findings
            .iter()
            .filter(|f| f.guard.is_none() && f.source == FindingSource::Ast)
            .count(),
        guarded_finding_count: findings.iter().filter(|f| f.guard.is_some()).count(),
        bytecode_self_destruct: findings
            .iter()
            .any(|f| f.pattern == Pattern::SelfDestruction && f.source == FindingSource::Bytecode),
    }
}

pub fn classify(features: &FeatureVector) -> Classification {
    classify_with(features, &Weights::default())
}

/// A token is administrated exactly when some finding sits behind a
/// privilege guard, or bytecode shows a reachable SELFDESTRUCT.
/// Unguarded capabilities leave the verdict ungoverned but still score.
pub fn classify_with(features: &FeatureVector, weights: &Weights) -> Classification {
    let administrated = features.guarded_finding_count > 0 || features.bytecode_self_destruct;
    let verdict = if administrated {
        Verdict::Administrated
    } else {
        Verdict::EffectivelyUngoverned
    };
    let quadrant = format!(
        "{}/{}",
        if administrated { "administrated" } else { "ungoverned" },
        if features.ownable { "ownable" } else { "not-ownable" }
    );
    let mut rationale = Vec::new();
    if administrated {
        for (on, name) in [
            (features.has_self_destruction, "self-destruction"),
            (features.has_deprecation, "deprecation"),
            (features.has_address_change, "change-of-address"),
            (features.has_mint, "minting"),
            (features.has_burn, "burning"),
        ] {
            if on {
                rationale.push(format!("{name} capability detected"));
            }
        }
        if features.bytecode_self_destruct {
            rationale.push("reachable SELFDESTRUCT in bytecode".to_string());
        }
        if features.guarded_finding_count > 0 {
            rationale.push(format!(
                "{} finding(s) behind {} privilege guard(s)",
                features.guarded_finding_count, features.guard_count
            ));
        }
    } else if features.unguarded_dangerous_count > 0 {
        rationale.push(format!(
            "{} dangerous function(s) open to any caller; no guarded capability",
            features.unguarded_dangerous_count
        ));
    } else if features.ownable {
        rationale.push("purely symbolic ownership".to_string());
    } else {
        rationale.push("no privileged capability detected".to_string());
    }
    Classification {
        verdict,
        quadrant,
        risk_score: risk_score_with(features, weights),
        features: *features,
        rationale,
    }
}

pub fn risk_score(features: &FeatureVector) -> u32 {
    risk_score_with(features, &Weights::default())
}

pub fn risk_score_with(features: &FeatureVector, weights: &Weights) -> u32 {
    let mut score: u64 = 0;
    let effective_self_destruct = features.has_self_destruction || features.bytecode_self_destruct;
    for (on, weight) in [
        (effective_self_destruct, weights.self_destruction),
        (features.has_deprecation, weights.deprecation),
        (features.has_address_change, weights.change_of_address),
        (features.has_mint, weights.mint),
        (features.has_burn, weights.burn),
    ] {
        if on {
            score += u64::from(weight);
        }
    }
    score += u64::from(weights.unguarded) * features.unguarded_dangerous_count as u64;
    score.min(100) as u32
}

#[cfg(test)]
mod tests {
    use super::*;

    fn guarded(pattern: Pattern) -> Finding {
        Finding {
            pattern,
            contract: "T".to_string(),
            function: "f".to_string(),
            line: Some(1),
            guard: Some("onlyOwner".to_string()),
            evidence: String::new(),
            source: FindingSource::Ast,
        }
    }

    fn a_guard() -> PrivilegeGuard {
        PrivilegeGuard {
            kind: crate::detect::GuardKind::ModifierBased,
            guard_name: "onlyOwner".to_string(),
            privileged_identity: "owner".to_string(),
            functions_guarded: vec!["f".to_string()],
            contract: "T".to_string(),
        }
    }

    #[test]
    fn empty_features_classify_as_ungoverned_with_zero_risk() {
        let c = classify(&FeatureVector::EMPTY);
        assert_eq!(c.verdict, Verdict::EffectivelyUngoverned);
        assert_eq!(c.risk_score, 0);
        assert_eq!(c.quadrant, "ungoverned/not-ownable");
        assert_eq!(c.rationale, vec!["no privileged capability detected".to_string()]);
    }

    #[test]
    fn guarded_mint_is_administrated_with_mint_weight() {
        let features = featurize(&[guarded(Pattern::Minting)], &[a_guard()]);
        let c = classify(&features);
        assert_eq!(c.verdict, Verdict::Administrated);
        assert_eq!(c.quadrant, "administrated/ownable");
        assert_eq!(c.risk_score, 20);
        assert!(c.rationale.iter().any(|r| r.contains("minting")));
    }

    #[test]
    fn symbolic_ownership_is_named_in_rationale() {
        let features = featurize(&[], &[a_guard()]);
        let c = classify(&features);
        assert_eq!(c.verdict, Verdict::EffectivelyUngoverned);
        assert_eq!(c.quadrant, "ungoverned/ownable");
        assert_eq!(c.risk_score, 0);
        assert_eq!(c.rationale, vec!["purely symbolic ownership".to_string()]);
    }

    #[test]
    fn unguarded_selfdestruct_scores_but_stays_ungoverned() {
        let finding = Finding { guard: None, ..guarded(Pattern::SelfDestruction) };
        let features = featurize(&[finding], &[]);
        let c = classify(&features);
        assert_eq!(c.verdict, Verdict::EffectivelyUngoverned);
        assert_eq!(c.risk_score, 45);
        assert!(c.rationale[0].contains("open to any caller"));
    }

    #[test]
    fn bytecode_selfdestruct_is_administrated() {
        let finding = Finding {
            guard: None,
            line: None,
            source: FindingSource::Bytecode,
            ..guarded(Pattern::SelfDestruction)
        };
        let features = featurize(&[finding], &[]);
        assert!(features.bytecode_self_destruct);
        assert_eq!(features.unguarded_dangerous_count, 0);
        let c = classify(&features);
        assert_eq!(c.verdict, Verdict::Administrated);
        assert_eq!(c.quadrant, "administrated/not-ownable");
        assert_eq!(c.risk_score, 35);
    }

    #[test]
    fn score_is_clamped_at_one_hundred() {
        let findings: Vec<Finding> = Pattern::ALL.iter().map(|p| guarded(*p)).collect();
        let unguarded = Finding { guard: None, ..guarded(Pattern::Minting) };
        let mut all = findings;
        all.push(unguarded.clone());
        all.push(unguarded);
        let features = featurize(&all, &[a_guard()]);
        assert_eq!(risk_score(&features), 100);
    }

    #[test]
    fn custom_weights_change_the_score() {
        let features = featurize(&[guarded(Pattern::Minting)], &[a_guard()]);
        let weights = Weights { mint: 77, ..Weights::default() };
        assert_eq!(risk_score_with(&features, &weights), 77);
        let c = classify_with(&features, &weights);
        assert_eq!(c.risk_score, 77);
        assert_eq!(c.verdict, Verdict::Administrated);
    }

    #[test]
    fn risk_is_monotone_in_each_feature() {
        let base = FeatureVector { guard_count: 1, ownable: true, ..FeatureVector::EMPTY };
        let flips: [fn(&mut FeatureVector); 6] = [
            |f| f.has_self_destruction = true,
            |f| f.has_deprecation = true,
            |f| f.has_address_change = true,
            |f| f.has_mint = true,
            |f| f.has_burn = true,
            |f| f.unguarded_dangerous_count += 1,
        ];
        for flip in flips {
            let mut raised = base;
            flip(&mut raised);
            assert!(risk_score(&raised) >= risk_score(&base));
        }
    }

    #[test]
    fn verdict_invariant_holds_for_feature_grid() {
        for guarded_count in [0usize, 1, 3] {
            for bytecode in [false, true] {
                let features = FeatureVector {
                    guarded_finding_count: guarded_count,
                    bytecode_self_destruct: bytecode,
                    has_self_destruction: bytecode,
                    ..FeatureVector::EMPTY
                };
                let c = classify(&features);
                let expect_admin = guarded_count > 0 || bytecode;
                assert_eq!(c.verdict == Verdict::Administrated, expect_admin);
                if c.verdict == Verdict::EffectivelyUngoverned
                    && features.unguarded_dangerous_count == 0
                {
                    assert_eq!(c.risk_score, 0);
                }
            }
        }
    }
}
