//! Possible fiber-sum splittings of a genus-2 fiber signature.
//!
//! Both summands are assumed relatively minimal. A split `(n1,s1) + (n2,s2)`
//! is a candidate when `n1 + 2 s1` vanishes mod 10; every summand is then
//! checked against the rule table and looked up in the classification table.

use std::fmt;

use crate::fibration::{self, FiberSignature};
use crate::registry::Registry;
use crate::corpus;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RuleKind {
    ModTen,
    ExcludedPair(&'static [(u32, u32)]),
    MinFiberCount(u32),
    NoAllReducible,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ConstraintRule {
    pub id: &'static str,
    pub kind: RuleKind,
    pub citation: &'static str,
}

impl ConstraintRule {
    pub fn violated_by(&self, sig: FiberSignature) -> bool {
        match self.kind {
            RuleKind::ModTen => !sig.satisfies_mod_ten(),
            RuleKind::ExcludedPair(pairs) => pairs.contains(&(sig.n, sig.s)),
            RuleKind::MinFiberCount(k) => sig.singular_fibers() < k,
            RuleKind::NoAllReducible => sig.n == 0 && sig.s > 0,
        }
    }
}

pub const RULES: [ConstraintRule; 4] = [
    ConstraintRule {
        id: "ModTen",
        kind: RuleKind::ModTen,
        citation: "the abelianization of the genus-2 mapping class group is Z/10, so n + 2s = 0 mod 10",
    },
    ConstraintRule {
        id: "ExcludedPair",
        kind: RuleKind::ExcludedPair(&[(10, 0), (8, 1)]),
        citation: "no genus-2 Lefschetz fibration over the sphere has (n,s) = (10,0) or (8,1)",
    },
    ConstraintRule {
        id: "MinFiberCount",
        kind: RuleKind::MinFiberCount(7),
        citation: "a genus-2 Lefschetz fibration over the sphere has at least 7 singular fibers",
    },
    ConstraintRule {
        id: "NoAllReducible",
        kind: RuleKind::NoAllReducible,
        citation: "no hyperelliptic Lefschetz fibration over the sphere has only reducible singular fibers",
    },
];

pub fn rule(id: &str) -> Option<&'static ConstraintRule> {
    RULES.iter().find(|r| r.id == id)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strength {
    Diffeo,
    Homeo,
    Impossible,
}

impl fmt::Display for Strength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strength::Diffeo => "diffeo",
            Strength::Homeo => "homeo",
            Strength::Impossible => "impossible",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ClassificationEntry {
    pub signature: FiberSignature,
    pub strength: Strength,
    pub label: &'static str,
    pub citation: &'static str,
}

const fn entry(n: u32, s: u32, strength: Strength, label: &'static str, citation: &'static str) -> ClassificationEntry {
    ClassificationEntry { signature: FiberSignature::new(n, s), strength, label, citation }
}

pub const CLASSIFICATION: [ClassificationEntry; 9] = [
    entry(20, 0, Strength::Diffeo, "CP2 # 13 CP2bar", "total space of the fibration from (c1 c2 c3 c4 c5^2 c4 c3 c2 c1)^2"),
    entry(18, 1, Strength::Diffeo, "CP2 # 12 CP2bar", "one lantern substitution in the above"),
    entry(6, 2, Strength::Diffeo, "S2xT2 # 4 CP2bar", "Matsumoto's fibration"),
    entry(4, 3, Strength::Diffeo, "S2xT2 # 3 CP2bar", "the fibration with the fewest singular fibers known"),
    entry(16, 2, Strength::Homeo, "CP2 # 11 CP2bar", "Freedman's classification, simply connected with odd form"),
    entry(14, 3, Strength::Homeo, "CP2 # 10 CP2bar", "Freedman's classification, simply connected with odd form"),
    entry(12, 4, Strength::Homeo, "CP2 # 9 CP2bar", "Freedman's classification, simply connected with odd form"),
    entry(10, 0, Strength::Impossible, "-", "no such fibration exists"),
    entry(8, 1, Strength::Impossible, "-", "no such fibration exists"),
];

/// Table lookup; `None` for signatures outside the table.
pub fn classify(sig: FiberSignature) -> Option<ClassificationEntry> {
    CLASSIFICATION.iter().copied().find(|e| e.signature == sig)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleHit {
    pub rule: &'static str,
    pub summand: FiberSignature,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SplitVerdict {
    Admissible,
    RejectedBy(Vec<RuleHit>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Split {
    pub parts: [FiberSignature; 2],
    pub classes: [Option<ClassificationEntry>; 2],
    pub verdict: SplitVerdict,
}

impl Split {
    pub fn is_admissible(&self) -> bool {
        self.verdict == SplitVerdict::Admissible
    }

    pub fn rejected_by(&self, rule: &str) -> bool {
        matches!(&self.verdict, SplitVerdict::RejectedBy(h) if h.iter().any(|h| h.rule == rule))
    }

    /// Rule ids in table order, without repetition.
    pub fn rule_ids(&self) -> Vec<&'static str> {
        match &self.verdict {
            SplitVerdict::Admissible => Vec::new(),
            SplitVerdict::RejectedBy(h) => RULES.iter().map(|r| r.id).filter(|id| h.iter().any(|h| h.rule == *id)).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Summary {
    Unique,
    Multiple(usize),
    None,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionReport {
    pub input: FiberSignature,
    pub splits: Vec<Split>,
}

/// Smaller `s` first, then smaller `n`.
fn canonical(a: FiberSignature, b: FiberSignature) -> [FiberSignature; 2] {
    if (a.s, a.n) <= (b.s, b.n) {
        [a, b]
    } else {
        [b, a]
    }
}

/// All unordered candidate splits into two nonempty summands.
pub fn candidate_pairs(sig: FiberSignature) -> Vec<[FiberSignature; 2]> {
    let mut out: Vec<[FiberSignature; 2]> = Vec::new();
    for s1 in 0..=sig.s {
        for n1 in 0..=sig.n {
            let a = FiberSignature::new(n1, s1);
            let b = FiberSignature::new(sig.n - n1, sig.s - s1);
            if a.singular_fibers() == 0 || b.singular_fibers() == 0 || !a.satisfies_mod_ten() {
                continue;
            }
            let pair = canonical(a, b);
            if !out.contains(&pair) {
                out.push(pair);
            }
        }
    }
    out.sort_by_key(|[a, b]| (a.s, a.n, b.s, b.n));
    out
}

pub fn admissible_splits(sig: FiberSignature) -> DecompositionReport {
    let splits = candidate_pairs(sig)
        .into_iter()
        .map(|parts| {
            let hits: Vec<RuleHit> = parts
                .iter()
                .flat_map(|&p| RULES.iter().filter(move |r| r.violated_by(p)).map(move |r| RuleHit { rule: r.id, summand: p }))
                .collect();
            Split {
                parts,
                classes: parts.map(classify),
                verdict: if hits.is_empty() { SplitVerdict::Admissible } else { SplitVerdict::RejectedBy(hits) },
            }
        })
        .collect();
    DecompositionReport { input: sig, splits }
}

impl DecompositionReport {
    pub fn admissible(&self) -> Vec<&Split> {
        self.splits.iter().filter(|s| s.is_admissible()).collect()
    }

    pub fn summary(&self) -> Summary {
        match self.admissible().len() {
            0 => Summary::None,
            1 => Summary::Unique,
            k => Summary::Multiple(k),
        }
    }

    pub fn find(&self, a: (u32, u32), b: (u32, u32)) -> Option<&Split> {
        let pair = canonical(FiberSignature::new(a.0, a.1), FiberSignature::new(b.0, b.1));
        self.splits.iter().find(|s| s.parts == pair)
    }

    pub fn records(&self) -> String {
        let mut out = String::new();
        for s in &self.splits {
            let [a, b] = s.parts;
            let verdict = if s.is_admissible() { "admissible".to_string() } else { format!("rejected rules={}", s.rule_ids().join(",")) };
            let class = |c: &Option<ClassificationEntry>| c.map_or("unknown".to_string(), |c| c.strength.to_string());
            out += &format!(
                "split input={},{} a={},{} b={},{} class_a={} class_b={} verdict={}\n",
                self.input.n, self.input.s, a.n, a.s, b.n, b.s, class(&s.classes[0]), class(&s.classes[1]), verdict
            );
        }
        out += &format!("summary input={},{} admissible={}\n", self.input.n, self.input.s, self.admissible().len());
        out
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Summary::Unique => f.write_str("unique"),
            Summary::Multiple(k) => write!(f, "{k} possibilities"),
            Summary::None => f.write_str("indecomposable"),
        }
    }
}

impl fmt::Display for DecompositionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "splittings of {} into relatively minimal summands", self.input)?;
        let mut last = None;
        for s in &self.splits {
            let [a, b] = s.parts;
            if last != Some((a.s, b.s)) {
                writeln!(f, "  s = ({},{})", a.s, b.s)?;
                last = Some((a.s, b.s));
            }
            write!(f, "    {a} + {b}: ")?;
            match &s.verdict {
                SplitVerdict::Admissible => {
                    let show = |c: &Option<ClassificationEntry>| match c {
                        Some(c) => format!("{} ({})", c.label, c.strength),
                        None => "unclassified".to_string(),
                    };
                    writeln!(f, "admissible, {} and {}", show(&s.classes[0]), show(&s.classes[1]))?;
                }
                SplitVerdict::RejectedBy(hits) => {
                    let reasons: Vec<String> = hits.iter().map(|h| format!("{} {}", h.rule, h.summand)).collect();
                    writeln!(f, "rejected, {}", reasons.join("; "))?;
                }
            }
        }
        writeln!(f, "  result: {}", self.summary())
    }
}

/// Reports for every labelled fixture relator.
pub fn report_corpus(reg: &Registry) -> Vec<(String, DecompositionReport)> {
    let Ok(rs) = corpus::relators(reg) else {
        return Vec::new();
    };
    corpus::family_labels()
        .into_iter()
        .filter_map(|l| {
            let r = rs.iter().find(|r| r.label.as_deref() == Some(l.as_str()))?;
            let sig = fibration::fiber_signature(reg, r).ok()?;
            Some((l, admissible_splits(sig)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn sig(n: u32, s: u32) -> FiberSignature {
        FiberSignature::new(n, s)
    }

    fn brute(sig: FiberSignature) -> BTreeSet<[(u32, u32); 2]> {
        let mut out = BTreeSet::new();
        for n1 in 0..=sig.n {
            for s1 in 0..=sig.s {
                let (n2, s2) = (sig.n - n1, sig.s - s1);
                if (n1 + 2 * s1) % 10 == 0 && n1 + s1 > 0 && n2 + s2 > 0 {
                    let mut p = [(n1, s1), (n2, s2)];
                    p.sort();
                    out.insert(p);
                }
            }
        }
        out
    }

    #[test]
    fn x2_unique() {
        let r = admissible_splits(sig(26, 2));
        assert_eq!(r.summary(), Summary::Unique);
        assert!(r.find((6, 2), (20, 0)).unwrap().is_admissible());
        assert!(r.find((16, 2), (10, 0)).unwrap().rejected_by("ExcludedPair"));
        assert!(r.find((8, 1), (18, 1)).unwrap().rejected_by("ExcludedPair"));
        assert_eq!(r.splits.len(), 3);
    }

    #[test]
    fn x0_and_z4() {
        assert_eq!(admissible_splits(sig(30, 0)).summary(), Summary::None);
        let z4 = admissible_splits(sig(12, 4));
        assert_eq!(z4.summary(), Summary::Unique);
        let s = z4.find((2, 4), (10, 0)).unwrap();
        assert!(s.rejected_by("MinFiberCount") && s.rejected_by("ExcludedPair"));
    }

    #[test]
    fn classify_table() {
        assert_eq!(classify(sig(20, 0)).unwrap().strength, Strength::Diffeo);
        assert_eq!(classify(sig(8, 1)).unwrap().strength, Strength::Impossible);
        assert!(classify(sig(40, 0)).is_none());
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for n in 0..40 {
            for s in 0..9 {
                let got: BTreeSet<[(u32, u32); 2]> = candidate_pairs(sig(n, s))
                    .into_iter()
                    .map(|[a, b]| {
                        let mut p = [(a.n, a.s), (b.n, b.s)];
                        p.sort();
                        p
                    })
                    .collect();
                assert_eq!(got, brute(sig(n, s)), "({n},{s})");
            }
        }
    }

    #[test]
    fn summands_satisfy_mod_ten() {
        for s in admissible_splits(sig(18, 6)).splits {
            assert!(s.parts.iter().all(|p| p.satisfies_mod_ten()));
            assert_eq!(s.parts[0] + s.parts[1], sig(18, 6));
        }
    }
}
