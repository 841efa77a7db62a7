//! Fiber counts and numerical invariants of genus-2 Lefschetz fibrations.

use std::fmt;
use std::ops::Add;

use thiserror::Error;

use crate::registry::{Registry, RegistryError};
use crate::word::{PositiveRelator, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FibrationError {
    #[error("signature {0} gives a non-integral invariant")]
    SignatureNotIntegral(FiberSignature),
    #[error("no odd intersection form label: {0}")]
    NotOddForm(String),
    #[error("signature {0} cannot come from a simply connected total space")]
    NotSimplyConnected(FiberSignature),
    #[error("insufficient data to determine the Kodaira dimension")]
    InsufficientData,
    #[error(transparent)]
    Registry(#[from] RegistryError),
}

type Result<T> = std::result::Result<T, FibrationError>;

/// `n` irreducible and `s` reducible singular fibers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FiberSignature {
    pub n: u32,
    pub s: u32,
}

impl FiberSignature {
    pub const fn new(n: u32, s: u32) -> Self {
        FiberSignature { n, s }
    }

    pub fn singular_fibers(self) -> u32 {
        self.n + self.s
    }

    pub fn satisfies_mod_ten(self) -> bool {
        (self.n + 2 * self.s) % 10 == 0
    }
}

impl Add for FiberSignature {
    type Output = FiberSignature;
    fn add(self, o: FiberSignature) -> FiberSignature {
        FiberSignature::new(self.n + o.n, self.s + o.s)
    }
}

impl fmt::Display for FiberSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.n, self.s)
    }
}

pub fn fiber_signature(reg: &Registry, r: &PositiveRelator) -> Result<FiberSignature> {
    word_signature(reg, &r.word)
}

pub fn word_signature(reg: &Registry, w: &Word) -> Result<FiberSignature> {
    let mut sig = FiberSignature::default();
    for l in &w.letters {
        if reg.is_separating(&l.curve)? {
            sig.s += 1;
        } else {
            sig.n += 1;
        }
    }
    Ok(sig)
}

/// The signature of a positive word over registered curves, else `None`.
pub fn fiber_signature_opt(reg: &Registry, w: &Word) -> Option<FiberSignature> {
    if !w.is_positive() {
        return None;
    }
    word_signature(reg, w).ok()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct B2Data {
    pub b2plus: i64,
    pub b2minus: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InvariantSet {
    pub e: i64,
    pub sigma: i64,
    pub c1sq: i64,
    pub chi_h: i64,
    pub b2: Option<B2Data>,
    pub label: Option<String>,
}

impl InvariantSet {
    pub fn with_delta(&self, d: &BlowdownDelta) -> InvariantSet {
        InvariantSet {
            e: self.e + d.e,
            sigma: self.sigma + d.sigma,
            c1sq: self.c1sq + d.c1sq,
            chi_h: self.chi_h + d.chi_h,
            b2: self.b2.map(|b| B2Data { b2plus: b.b2plus + d.b2plus, b2minus: b.b2minus - d.e - d.sigma }),
            label: None,
        }
    }

    pub fn records(&self) -> String {
        let mut out = format!("e={} sigma={} c1sq={} chi_h={}", self.e, self.sigma, self.c1sq, self.chi_h);
        if let Some(b) = self.b2 {
            out += &format!(" b2plus={} b2minus={}", b.b2plus, b.b2minus);
        }
        if let Some(l) = &self.label {
            out += &format!(" label={}", l.replace(' ', ""));
        }
        out
    }
}

impl fmt::Display for InvariantSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e={:<4} sigma={:<4} c1^2={:<4} chi_h={}", self.e, self.sigma, self.c1sq, self.chi_h)?;
        if let Some(b) = self.b2 {
            write!(f, "  b2+={} b2-={}", b.b2plus, b.b2minus)?;
        }
        if let Some(l) = &self.label {
            write!(f, "  {l}")?;
        }
        Ok(())
    }
}

fn exact_div(a: i64, b: i64, sig: FiberSignature) -> Result<i64> {
    if a % b != 0 {
        return Err(FibrationError::SignatureNotIntegral(sig));
    }
    Ok(a / b)
}

/// With `simply_connected`, b1 = 0 and the b2 split is filled in.
pub fn invariants(sig: FiberSignature, simply_connected: bool) -> Result<InvariantSet> {
    let (n, s) = (sig.n as i64, sig.s as i64);
    let e = n + s - 4;
    let sigma = -exact_div(3 * n + s, 5, sig)?;
    let chi_h = exact_div(sigma + e, 4, sig)?;
    let b2 = if simply_connected {
        let b2plus = exact_div(e + sigma - 2, 2, sig)?;
        if b2plus < 0 || b2plus - sigma < 0 {
            return Err(FibrationError::NotSimplyConnected(sig));
        }
        Some(B2Data { b2plus, b2minus: b2plus - sigma })
    } else {
        None
    };
    Ok(InvariantSet { e, sigma, c1sq: 3 * sigma + 2 * e, chi_h, b2, label: None })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BlowdownDelta {
    pub b2plus: i64,
    pub sigma: i64,
    pub c1sq: i64,
    pub chi_h: i64,
    pub e: i64,
}

/// Change in invariants under rational blowdown of the `C_p` configuration.
pub fn blowdown_delta(p: u32) -> BlowdownDelta {
    assert!(p >= 2, "rational blowdown needs p >= 2");
    let k = p as i64 - 1;
    BlowdownDelta { b2plus: 0, sigma: k, c1sq: k, chi_h: 0, e: -k }
}

/// `r1` followed by `r2` with every letter conjugated by `twist`.
pub fn fiber_sum(r1: &PositiveRelator, r2: &PositiveRelator, twist: &Word) -> PositiveRelator {
    let mut gens = Vec::new();
    for l in &twist.letters {
        gens.extend(l.to_gens());
    }
    let word = r1.word.concat(&r2.word.conjugate_letters(&gens));
    PositiveRelator { word, label: None }
}

pub fn non_spin(sig: FiberSignature) -> bool {
    sig.s >= 1
}

pub fn homeo_label(inv: &InvariantSet, simply_connected: bool, non_spin: bool) -> Result<String> {
    if !simply_connected || !non_spin {
        return Err(FibrationError::NotOddForm("simple connectivity and an odd form must be asserted".into()));
    }
    let (p, q) = (inv.e + inv.sigma - 2, inv.e - inv.sigma - 2);
    if p < 0 || q < 0 || p % 2 != 0 || q % 2 != 0 {
        return Err(FibrationError::NotOddForm(format!("e={} sigma={}", inv.e, inv.sigma)));
    }
    Ok(format!("{} CP2 # {} CP2bar", p / 2, q / 2))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CanonicalClass {
    /// `K . [omega] < 0`
    Negative,
    Zero,
    Positive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kodaira {
    MinusInfinity,
    Zero,
    One,
    Two,
}

impl fmt::Display for Kodaira {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kodaira::MinusInfinity => "-inf",
            Kodaira::Zero => "0",
            Kodaira::One => "1",
            Kodaira::Two => "2",
        })
    }
}

/// Symplectic Kodaira dimension from data of the minimal model.
pub fn kodaira_label(c1sq: i64, minimal: bool, class: CanonicalClass) -> Result<Kodaira> {
    if !minimal {
        return Err(FibrationError::InsufficientData);
    }
    match (class, c1sq.signum()) {
        (CanonicalClass::Negative, _) => Ok(Kodaira::MinusInfinity),
        (CanonicalClass::Zero, 0) => Ok(Kodaira::Zero),
        (CanonicalClass::Positive, 0) => Ok(Kodaira::One),
        (CanonicalClass::Positive, 1) => Ok(Kodaira::Two),
        _ => Err(FibrationError::InsufficientData),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_relator;

    #[test]
    fn invariants_examples() {
        let i = invariants(FiberSignature::new(26, 2), false).unwrap();
        assert_eq!((i.e, i.sigma, i.c1sq, i.chi_h), (24, -16, 0, 2));
        let i = invariants(FiberSignature::new(20, 0), false).unwrap();
        assert_eq!((i.e, i.sigma, i.c1sq), (16, -12, -4));
        let i = invariants(FiberSignature::new(16, 7), false).unwrap();
        assert_eq!((i.e, i.sigma, i.c1sq), (19, -11, 5));
        assert!(invariants(FiberSignature::new(1, 0), false).is_err());
    }

    #[test]
    fn b2_split() {
        let i = invariants(FiberSignature::new(26, 2), true).unwrap();
        assert_eq!(i.b2, Some(B2Data { b2plus: 3, b2minus: 19 }));
    }

    #[test]
    fn blowdown_matches_lantern_step() {
        for (n, s) in [(30, 0), (20, 0), (26, 2), (18, 6)] {
            let before = invariants(FiberSignature::new(n, s), false).unwrap();
            let after = invariants(FiberSignature::new(n - 2, s + 1), false).unwrap();
            assert_eq!(before.with_delta(&blowdown_delta(2)), after);
        }
        assert_eq!(blowdown_delta(3).sigma, 2);
    }

    #[test]
    fn homeo_labels() {
        let lab = |n, s| homeo_label(&invariants(FiberSignature::new(n, s), true).unwrap(), true, true).unwrap();
        assert_eq!(lab(26, 2), "3 CP2 # 19 CP2bar");
        assert_eq!(lab(20, 0), "1 CP2 # 13 CP2bar");
        assert_eq!(lab(16, 7), "3 CP2 # 14 CP2bar");
        assert_eq!(invariants(FiberSignature::new(6, 2), true), Err(FibrationError::NotSimplyConnected(FiberSignature::new(6, 2))));
        let inv = invariants(FiberSignature::new(26, 2), true).unwrap();
        assert!(homeo_label(&inv, false, true).is_err());
        assert!(non_spin(FiberSignature::new(26, 2)) && !non_spin(FiberSignature::new(30, 0)));
    }

    #[test]
    fn kodaira_table() {
        assert_eq!(kodaira_label(0, true, CanonicalClass::Positive).unwrap(), Kodaira::One);
        assert_eq!(kodaira_label(3, true, CanonicalClass::Positive).unwrap(), Kodaira::Two);
        assert_eq!(kodaira_label(-1, false, CanonicalClass::Positive), Err(FibrationError::InsufficientData));
    }

    #[test]
    fn fiber_sum_adds_signatures() {
        let reg = Registry::standard();
        let m = parse_relator("(B0 B1 B2 d)^2", &reg).unwrap();
        let z = parse_relator("(c1 c2 c3 c4 c5^2 c4 c3 c2 c1)^2", &reg).unwrap();
        let sum = fiber_sum(&m, &z, &Word::empty());
        assert_eq!(fiber_signature(&reg, &sum).unwrap(), FiberSignature::new(26, 2));
        let empty = PositiveRelator { word: Word::empty(), label: None };
        assert_eq!(fiber_sum(&m, &empty, &Word::empty()).word, m.word);
        let e = |s| invariants(s, false).unwrap().e;
        let (a, b) = (FiberSignature::new(6, 2), FiberSignature::new(20, 0));
        assert_eq!(e(a + b), e(a) + e(b) + 4);
    }
}
