//! Words of signed Dehn twist letters.

use std::fmt;
use std::ops::Range;

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }

    pub fn times(self, other: Sign) -> Sign {
        if self == other {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }
}

/// A twist along a registered curve, without conjugation. Conjugators are
/// always words of these.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Gen {
    pub name: String,
    pub sign: Sign,
}

impl Gen {
    pub fn new(name: impl Into<String>, sign: Sign) -> Self {
        Gen { name: name.into(), sign }
    }

    pub fn inverse(&self) -> Gen {
        Gen::new(self.name.clone(), self.sign.flip())
    }
}

/// A curve given by name, or as the image `[w](a)` of a named curve `a`
/// under the mapping class `w`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CurveRef {
    pub conj: Vec<Gen>,
    pub base: String,
}

impl CurveRef {
    pub fn named(name: impl Into<String>) -> Self {
        CurveRef { conj: Vec::new(), base: name.into() }
    }

    pub fn conjugate(conj: Vec<Gen>, base: impl Into<String>) -> Self {
        CurveRef { conj, base: base.into() }
    }

    pub fn is_conjugate(&self) -> bool {
        !self.conj.is_empty()
    }

    /// `[by](self)`, flattening the conjugator.
    pub fn under(&self, by: &[Gen]) -> CurveRef {
        let mut conj = by.to_vec();
        conj.extend(self.conj.iter().cloned());
        CurveRef { conj, base: self.base.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub curve: CurveRef,
    pub sign: Sign,
}

impl Letter {
    pub fn new(curve: CurveRef, sign: Sign) -> Self {
        Letter { curve, sign }
    }

    pub fn plain(name: impl Into<String>, sign: Sign) -> Self {
        Letter { curve: CurveRef::named(name), sign }
    }

    pub fn pos(name: impl Into<String>) -> Self {
        Letter::plain(name, Sign::Pos)
    }

    pub fn inverse(&self) -> Letter {
        Letter { curve: self.curve.clone(), sign: self.sign.flip() }
    }

    /// The conjugator word followed by this twist and the inverse conjugator,
    /// as a flat list of generators.
    pub fn to_gens(&self) -> Vec<Gen> {
        let mut out = self.curve.conj.clone();
        out.push(Gen::new(self.curve.base.clone(), self.sign));
        out.extend(self.curve.conj.iter().rev().map(Gen::inverse));
        out
    }

    pub fn from_gen(g: &Gen) -> Letter {
        Letter::plain(g.name.clone(), g.sign)
    }

    /// Letter `[by](self)`.
    pub fn under(&self, by: &[Gen]) -> Letter {
        Letter { curve: self.curve.under(by), sign: self.sign }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("letter {0} is not in conjugate form")]
    NotConjugateForm(String),
    #[error("span {start}..{end} does not read u a u^-1")]
    SpanNotConjugatePattern { start: usize, end: usize },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word {
    pub letters: Vec<Letter>,
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    pub fn empty() -> Self {
        Word::default()
    }

    pub fn from_gens(gens: &[Gen]) -> Self {
        Word::new(gens.iter().map(Letter::from_gen).collect())
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_positive(&self) -> bool {
        self.letters.iter().all(|l| l.sign == Sign::Pos)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        Word::new(letters)
    }

    /// Cancels adjacent pairs `l l^-1` on literally equal curves.
    pub fn free_reduce(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.len());
        for l in &self.letters {
            match out.last() {
                Some(top) if top.curve == l.curve && top.sign != l.sign => {
                    out.pop();
                }
                _ => out.push(l.clone()),
            }
        }
        Word::new(out)
    }

    pub fn invert(&self) -> Word {
        Word::new(self.letters.iter().rev().map(Letter::inverse).collect())
    }

    /// `by · self · by^-1`, freely reduced.
    pub fn conjugate(&self, by: &Word) -> Word {
        by.concat(self).concat(&by.invert()).free_reduce()
    }

    /// Every letter replaced by its image `[by](l)`.
    pub fn conjugate_letters(&self, by: &[Gen]) -> Word {
        Word::new(self.letters.iter().map(|l| l.under(by)).collect())
    }

    /// Left rotation by `k` (negative rotates right).
    pub fn rotate(&self, k: isize) -> Word {
        let n = self.len();
        if n == 0 {
            return self.clone();
        }
        let k = k.rem_euclid(n as isize) as usize;
        let mut letters = self.letters[k..].to_vec();
        letters.extend_from_slice(&self.letters[..k]);
        Word::new(letters)
    }

    pub fn cyclic_eq(&self, other: &Word) -> bool {
        self.len() == other.len() && (0..self.len().max(1)).any(|k| self.rotate(k as isize) == *other)
    }

    /// Flattens every conjugate letter into plain letters.
    pub fn expand_all(&self) -> Word {
        Word::new(
            self.letters
                .iter()
                .flat_map(|l| l.to_gens().into_iter().map(|g| Letter::from_gen(&g)))
                .collect(),
        )
    }

    /// Replaces `letters[range]` with `with`.
    pub fn splice(&self, range: Range<usize>, with: &[Letter]) -> Word {
        let mut letters = self.letters[..range.start].to_vec();
        letters.extend_from_slice(with);
        letters.extend_from_slice(&self.letters[range.end..]);
        Word::new(letters)
    }

    pub fn count(&self, pred: impl Fn(&Letter) -> bool) -> usize {
        self.letters.iter().filter(|l| pred(l)).count()
    }
}

/// `w · t_a^e · w^-1` for a conjugate letter `t_{[w](a)}^e`.
pub fn expand_letter(l: &Letter) -> Result<Word, WordError> {
    if !l.curve.is_conjugate() {
        return Err(WordError::NotConjugateForm(l.to_string()));
    }
    let mut letters: Vec<Letter> = l.curve.conj.iter().map(Letter::from_gen).collect();
    letters.push(Letter::plain(l.curve.base.clone(), l.sign));
    letters.extend(l.curve.conj.iter().rev().map(|g| Letter::from_gen(&g.inverse())));
    Ok(Word::new(letters))
}

/// Collapses a span reading `u · a^e · u^-1` (with `u` made of plain letters)
/// into the single letter `[u](a)^e`. With `name`, the collapsed letter is the
/// named curve instead.
pub fn contract_subword(w: &Word, span: Range<usize>, name: Option<&str>) -> Result<Word, WordError> {
    let bad = || WordError::SpanNotConjugatePattern { start: span.start, end: span.end };
    if span.end > w.len() || span.start >= span.end || span.len() % 2 == 0 {
        return Err(bad());
    }
    let part = &w.letters[span.clone()];
    let half = part.len() / 2;
    let mut u = Vec::with_capacity(half);
    for i in 0..half {
        let (l, r) = (&part[i], &part[part.len() - 1 - i]);
        if l.curve.is_conjugate() || l.curve != r.curve || l.sign == r.sign {
            return Err(bad());
        }
        u.push(Gen::new(l.curve.base.clone(), l.sign));
    }
    let mid = &part[half];
    let letter = match name {
        Some(n) => Letter::plain(n, mid.sign),
        None => mid.under(&u),
    };
    Ok(w.splice(span, &[letter]))
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Pos => "+1",
            Sign::Neg => "-1",
        })
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            Sign::Pos => write!(f, "{}", self.name),
            Sign::Neg => write!(f, "{}^-1", self.name),
        }
    }
}

/// Runs of one generator print as powers: `c3^2`, `c1^-2`.
fn write_gens(f: &mut fmt::Formatter<'_>, gens: &[Gen]) -> fmt::Result {
    let mut i = 0;
    while i < gens.len() {
        let run = gens[i..].iter().take_while(|g| **g == gens[i]).count();
        if i > 0 {
            f.write_str(" ")?;
        }
        let g = &gens[i];
        match (run, g.sign) {
            (1, _) => write!(f, "{g}")?,
            (k, Sign::Pos) => write!(f, "{}^{k}", g.name)?,
            (k, Sign::Neg) => write!(f, "{}^-{k}", g.name)?,
        }
        i += run;
    }
    Ok(())
}

impl fmt::Display for CurveRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.conj.is_empty() {
            return f.write_str(&self.base);
        }
        f.write_str("[")?;
        write_gens(f, &self.conj)?;
        write!(f, "]({})", self.base)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.curve)?;
        if self.sign == Sign::Neg {
            f.write_str("^-1")?;
        }
        Ok(())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("()");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// A positive word, read cyclically, optionally carrying a label like `X(2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositiveRelator {
    pub word: Word,
    pub label: Option<String>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("letter {0} has a negative exponent")]
pub struct NotPositive(pub String);

impl PositiveRelator {
    pub fn new(word: Word, label: Option<String>) -> Result<Self, NotPositive> {
        if let Some(l) = word.letters.iter().find(|l| l.sign == Sign::Neg) {
            return Err(NotPositive(l.to_string()));
        }
        Ok(PositiveRelator { word, label })
    }

    pub fn cyclic_eq(&self, other: &PositiveRelator) -> bool {
        self.word.cyclic_eq(&other.word)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(names: &[(&str, i8)]) -> Word {
        Word::new(
            names
                .iter()
                .map(|&(n, e)| Letter::plain(n, if e > 0 { Sign::Pos } else { Sign::Neg }))
                .collect(),
        )
    }

    #[test]
    fn free_reduce_cancels_inverse_pairs() {
        assert!(w(&[("c1", 1), ("c1", -1)]).free_reduce().is_empty());
        assert_eq!(
            w(&[("c1", 1), ("c2", 1), ("c2", -1), ("c5", 1)]).free_reduce(),
            w(&[("c1", 1), ("c5", 1)])
        );
        assert!(Word::empty().free_reduce().is_empty());
        assert_eq!(w(&[("c1", 1), ("c2", -1), ("c2", 1), ("c1", -1)]).free_reduce(), Word::empty());
    }

    #[test]
    fn conjugate_by_letter() {
        let c2 = w(&[("c2", 1)]);
        assert_eq!(c2.conjugate(&w(&[("c1", 1)])), w(&[("c1", 1), ("c2", 1), ("c1", -1)]));
        assert_eq!(c2.conjugate(&Word::empty()), c2);
    }

    #[test]
    fn expand_and_contract_round_trip() {
        let b2 = Letter::new(CurveRef::conjugate(vec![Gen::new("c3", Sign::Neg)], "x"), Sign::Pos);
        let e = expand_letter(&b2).unwrap();
        assert_eq!(e, w(&[("c3", -1), ("x", 1), ("c3", 1)]));
        assert_eq!(contract_subword(&e, 0..3, None).unwrap(), Word::new(vec![b2]));

        let single = w(&[("c1", 1)]);
        assert_eq!(contract_subword(&single, 0..1, None).unwrap(), single);
        assert!(matches!(expand_letter(&Letter::pos("c1")), Err(WordError::NotConjugateForm(_))));

        let c = contract_subword(&w(&[("c5", 1), ("c4", 1), ("c5", -1)]), 0..3, None).unwrap();
        assert_eq!(c.to_string(), "[c5](c4)");
        assert!(contract_subword(&w(&[("c5", 1), ("c4", 1), ("c5", 1)]), 0..3, None).is_err());
        assert!(contract_subword(&w(&[("c5", 1), ("c4", 1)]), 0..2, None).is_err());
    }

    #[test]
    fn invert_basics() {
        assert_eq!(w(&[("c1", 1), ("c2", 1)]).invert(), w(&[("c2", -1), ("c1", -1)]));
        assert!(Word::empty().invert().is_empty());
    }

    #[test]
    fn rotate_and_cyclic_eq() {
        let a = w(&[("c1", 1), ("c2", 1), ("c3", 1)]);
        assert_eq!(a.rotate(1), w(&[("c2", 1), ("c3", 1), ("c1", 1)]));
        assert_eq!(a.rotate(-1), w(&[("c3", 1), ("c1", 1), ("c2", 1)]));
        assert!(a.cyclic_eq(&a.rotate(2)));
        assert!(!a.cyclic_eq(&w(&[("c1", 1), ("c3", 1), ("c2", 1)])));
        assert!(Word::empty().cyclic_eq(&Word::empty()));
    }

    #[test]
    fn positive_relator_rejects_inverses() {
        assert!(PositiveRelator::new(w(&[("c1", -1)]), None).is_err());
        let r = PositiveRelator::new(w(&[("c1", 1), ("c2", 1)]), Some("r".into())).unwrap();
        let s = PositiveRelator::new(w(&[("c2", 1), ("c1", 1)]), None).unwrap();
        assert_ne!(r, s);
        assert!(r.cyclic_eq(&s));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_word() -> impl Strategy<Value = Word> {
            prop::collection::vec((1..=5usize, any::<bool>()), 0..20).prop_map(|v| {
                Word::new(
                    v.into_iter()
                        .map(|(i, p)| Letter::plain(format!("c{i}"), if p { Sign::Pos } else { Sign::Neg }))
                        .collect(),
                )
            })
        }

        proptest! {
            #[test]
            fn free_reduce_idempotent(a in arb_word()) {
                let r = a.free_reduce();
                prop_assert_eq!(r.free_reduce(), r);
            }

            #[test]
            fn word_times_inverse_is_empty(a in arb_word()) {
                prop_assert!(a.concat(&a.invert()).free_reduce().is_empty());
            }

            #[test]
            fn invert_is_involution(a in arb_word()) {
                prop_assert_eq!(a.invert().invert(), a);
            }

            #[test]
            fn conjugation_undoes(a in arb_word(), b in arb_word()) {
                prop_assert_eq!(a.conjugate(&b).conjugate(&b.invert()), a.free_reduce());
            }
        }
    }
}
