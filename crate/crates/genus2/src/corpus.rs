//! The embedded fixture corpus: positive relators and derivation scripts.

use crate::dsl::{self, DslError, MoveScript};
use crate::registry::Registry;
use crate::word::PositiveRelator;

pub const RELATORS: &str = include_str!("../corpus/relators.mcg");

pub const DERIVATIONS: [(&str, &str); 7] = [
    ("lantern_a", include_str!("../corpus/derivations/lantern_a.mcg")),
    ("lantern_b", include_str!("../corpus/derivations/lantern_b.mcg")),
    ("lantern_c", include_str!("../corpus/derivations/lantern_c.mcg")),
    ("x0", include_str!("../corpus/derivations/x0.mcg")),
    ("z", include_str!("../corpus/derivations/z.mcg")),
    ("x", include_str!("../corpus/derivations/x.mcg")),
    ("x7", include_str!("../corpus/derivations/x7.mcg")),
];

pub fn relators(reg: &Registry) -> Result<Vec<PositiveRelator>, DslError> {
    dsl::parse_relator_doc(RELATORS, reg)
}

pub fn relator(reg: &Registry, label: &str) -> Option<PositiveRelator> {
    relators(reg).ok()?.into_iter().find(|r| r.label.as_deref() == Some(label))
}

pub fn derivation_text(name: &str) -> Option<&'static str> {
    DERIVATIONS.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

pub fn scripts(reg: &Registry) -> Result<Vec<(&'static str, MoveScript)>, DslError> {
    DERIVATIONS.iter().map(|(n, t)| Ok((*n, dsl::parse_script(t, Some(reg))?))).collect()
}

/// Labels of the fibration families, in order.
pub fn family_labels() -> Vec<String> {
    let x = (0..=7).map(|n| format!("X({n})"));
    let z = (0..=4).map(|m| format!("Z({m})"));
    x.chain(z).collect()
}
