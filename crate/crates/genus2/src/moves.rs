//! Rewrite moves on twist words and replay of derivation scripts.

use std::fmt;

use thiserror::Error;

use crate::dsl::MoveScript;
use crate::fibration::{self, FiberSignature};
use crate::homology::{self, HomologyError, Sp4};
use crate::registry::{Registry, RegistryError};
use crate::word::{self, CurveRef, Gen, Letter, Word, WordError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Left,
    Right,
}

impl Direction {
    pub fn flip(self) -> Direction {
        match self {
            Direction::Left => Direction::Right,
            Direction::Right => Direction::Left,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Left => "left",
            Direction::Right => "right",
        })
    }
}

/// `Down` trades the four boundary twists for the three interior ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LanternDir {
    Down,
    Up,
}

impl fmt::Display for LanternDir {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LanternDir::Down => "down",
            LanternDir::Up => "up",
        })
    }
}

/// Positions are 0-based letter indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Move {
    Commute(usize),
    Braid(usize, Direction),
    Lantern { pos: usize, instance: String, conj: Vec<Gen>, dir: LanternDir, to: Option<Word> },
    Hurwitz(usize, Direction),
    CyclicShift(isize),
    GlobalConjugate(Word),
    ExpandLetter(usize),
    /// Inclusive letter range.
    ContractSpan(usize, usize),
    AliasRewrite { pos: usize, relation: String, by: Option<isize> },
}

impl Move {
    pub fn is_lantern(&self) -> bool {
        matches!(self, Move::Lantern { .. })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MoveError {
    #[error("illegal move: {0}")]
    IllegalMove(String),
    #[error(transparent)]
    Registry(#[from] RegistryError),
}

impl From<HomologyError> for MoveError {
    fn from(e: HomologyError) -> Self {
        MoveError::Registry(e.into())
    }
}

impl From<WordError> for MoveError {
    fn from(e: WordError) -> Self {
        MoveError::IllegalMove(e.to_string())
    }
}

fn illegal(msg: impl Into<String>) -> MoveError {
    MoveError::IllegalMove(msg.into())
}

type Result<T> = std::result::Result<T, MoveError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LanternSide {
    Boundary,
    Interior,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LanternHit {
    pub pos: usize,
    pub conj: Vec<Gen>,
    pub side: LanternSide,
    /// The matched side, unconjugated, in the order found in the word.
    pub variant: Word,
}

pub struct Engine<'a> {
    reg: &'a Registry,
}

fn in_bounds(w: &Word, i: usize, len: usize) -> Result<()> {
    if i + len > w.len() {
        return Err(illegal(format!("position {i} out of bounds for a word of length {}", w.len())));
    }
    Ok(())
}

impl<'a> Engine<'a> {
    pub fn new(reg: &'a Registry) -> Self {
        Engine { reg }
    }

    pub fn registry(&self) -> &Registry {
        self.reg
    }

    fn normalized(&self, l: Letter) -> Letter {
        self.reg.normalize_letter(&l)
    }

    /// The letter `a b a^-1`.
    pub fn act(&self, a: &Letter, b: &Letter) -> Letter {
        self.normalized(b.under(&a.to_gens()))
    }

    pub fn hurwitz(&self, w: &Word, i: usize, dir: Direction) -> Result<Word> {
        in_bounds(w, i, 2)?;
        let (a, b) = (&w.letters[i], &w.letters[i + 1]);
        let pair = match dir {
            Direction::Left => [self.act(a, b), a.clone()],
            Direction::Right => [b.clone(), self.act(&b.inverse(), a)],
        };
        Ok(w.splice(i..i + 2, &pair))
    }

    pub fn letters_commute(&self, a: &Letter, b: &Letter) -> Result<bool> {
        let va = self.reg.homology_class(&a.curve)?;
        let vb = self.reg.homology_class(&b.curve)?;
        let declared = self.reg.letters_equal(&self.act(a, b), b) && self.reg.letters_equal(&self.act(b, a), a);
        Ok(declared && homology::pairing(&va, &vb)? == 0)
    }

    /// `[u z^e](w) -> [u w^-e](z)` for adjacent chain curves `z`, `w`.
    fn swap_identity(&self, l: &Letter) -> Option<Letter> {
        let n = self.reg.normalize(&l.curve);
        let (z, u) = n.conj.split_last()?;
        let (iz, iw) = (self.reg.chain_index(&z.name)?, self.reg.chain_index(&n.base)?);
        if iz.abs_diff(iw) != 1 {
            return None;
        }
        let mut conj = u.to_vec();
        conj.push(Gen::new(n.base.clone(), z.sign.flip()));
        Some(self.normalized(Letter::new(CurveRef::conjugate(conj, z.name.clone()), l.sign)))
    }

    pub fn apply(&self, w: &Word, m: &Move) -> Result<Word> {
        self.reg.check_word(w)?;
        let before = homology::image(self.reg, w)?;
        let out = self.rewrite(w, m)?;
        let after = homology::image(self.reg, &out)?;
        let expected = match m {
            Move::GlobalConjugate(u) => {
                let u = homology::image(self.reg, u)?;
                u.sym_inverse()?.mul(&before)?.mul(&u)?
            }
            Move::CyclicShift(k) => {
                let k = k.rem_euclid(w.len().max(1) as isize) as usize;
                let u = homology::image(self.reg, &Word::new(w.letters[..k].to_vec()))?;
                u.sym_inverse()?.mul(&before)?.mul(&u)?
            }
            _ => before,
        };
        if after != expected {
            return Err(illegal(format!("{m} changes the homology image")));
        }
        Ok(out)
    }

    fn rewrite(&self, w: &Word, m: &Move) -> Result<Word> {
        match m {
            Move::Commute(i) => {
                in_bounds(w, *i, 2)?;
                let (a, b) = (&w.letters[*i], &w.letters[*i + 1]);
                if !self.letters_commute(a, b)? {
                    return Err(illegal(format!("{a} and {b} are not disjoint")));
                }
                Ok(w.splice(*i..*i + 2, &[b.clone(), a.clone()]))
            }
            Move::Hurwitz(i, d) => self.hurwitz(w, *i, *d),
            Move::Braid(i, d) => {
                let h = self.hurwitz(w, *i, *d)?;
                let p = if *d == Direction::Left { *i } else { *i + 1 };
                let swapped = self
                    .swap_identity(&h.letters[p])
                    .ok_or_else(|| illegal(format!("no braid relation applies to {}", h.letters[p])))?;
                Ok(h.splice(p..p + 1, &[swapped]))
            }
            Move::Lantern { pos, instance, conj, dir, to } => self.lantern(w, *pos, instance, conj, *dir, to.as_ref()),
            Move::CyclicShift(k) => Ok(w.rotate(*k)),
            Move::GlobalConjugate(u) => {
                if u.len() > w.len() || !self.reg.words_equal(&Word::new(w.letters[..u.len()].to_vec()), u) {
                    return Err(illegal(format!("word does not begin with {u}")));
                }
                if !homology::image(self.reg, w)?.is_identity() {
                    return Err(illegal("conjugation applies to relators only"));
                }
                Ok(w.rotate(u.len() as isize))
            }
            Move::ExpandLetter(i) => {
                in_bounds(w, *i, 1)?;
                let e = word::expand_letter(&w.letters[*i])?;
                Ok(w.splice(*i..*i + 1, &e.letters))
            }
            Move::ContractSpan(i, j) => {
                if *j >= w.len() {
                    return Err(illegal(format!("span {i}..{j} out of bounds")));
                }
                Ok(word::contract_subword(w, *i..*j + 1, None)?)
            }
            Move::AliasRewrite { pos, relation, by } => self.alias(w, *pos, relation, *by),
        }
    }

    fn plain_window(&self, window: &[Letter], conj: &[Gen], sides: &[Word]) -> Option<Word> {
        // each window letter must be [conj](s) for the letter s at the same place in some side
        sides
            .iter()
            .find(|side| {
                side.len() == window.len()
                    && side.letters.iter().zip(window).all(|(s, x)| self.reg.letters_equal(&s.under(conj), x))
            })
            .cloned()
    }

    fn permutations_of(&self, lhs: &Word) -> Vec<Word> {
        fn perms(items: &[Letter]) -> Vec<Vec<Letter>> {
            if items.len() <= 1 {
                return vec![items.to_vec()];
            }
            let mut out = Vec::new();
            for i in 0..items.len() {
                if items[..i].contains(&items[i]) {
                    continue;
                }
                let mut rest = items.to_vec();
                let head = rest.remove(i);
                for mut p in perms(&rest) {
                    p.insert(0, head.clone());
                    out.push(p);
                }
            }
            out
        }
        perms(&lhs.letters).into_iter().map(Word::new).collect()
    }

    fn lantern(&self, w: &Word, pos: usize, id: &str, conj: &[Gen], dir: LanternDir, to: Option<&Word>) -> Result<Word> {
        let inst = self.reg.lantern(id).ok_or_else(|| illegal(format!("unknown lantern instance {id}")))?;
        let boundary = self.permutations_of(&inst.lhs);
        let interior = inst.rhs_variants();
        let (from_len, from_sides, to_sides, default) = match dir {
            LanternDir::Down => (inst.lhs.len(), &boundary, &interior, &inst.rhs),
            LanternDir::Up => (inst.rhs.len(), &interior, &boundary, &inst.lhs),
        };
        in_bounds(w, pos, from_len)?;
        let window = &w.letters[pos..pos + from_len];
        if self.plain_window(window, conj, from_sides).is_none() {
            let side = if dir == LanternDir::Down { "boundary" } else { "interior" };
            return Err(illegal(format!("letters at {pos} are not the {side} side of {id}")));
        }
        let target = to.unwrap_or(default);
        if !to_sides.iter().any(|s| self.reg.words_equal(s, target)) {
            return Err(illegal(format!("{target} is not an admissible side of {id}")));
        }
        let replacement: Vec<Letter> = target.letters.iter().map(|l| self.normalized(l.under(conj))).collect();
        Ok(w.splice(pos..pos + from_len, &replacement))
    }

    fn conj_candidates(&self, window: &[Letter]) -> Vec<Vec<Gen>> {
        let mut out: Vec<Vec<Gen>> = vec![Vec::new()];
        for l in window {
            let c = self.reg.normalize(&l.curve).conj;
            if !out.contains(&c) {
                out.push(c);
            }
        }
        out
    }

    /// Every place where a side of the instance occurs, possibly conjugated.
    pub fn match_lantern(&self, w: &Word, id: &str) -> Vec<LanternHit> {
        let Some(inst) = self.reg.lantern(id) else {
            return Vec::new();
        };
        let boundary = self.permutations_of(&inst.lhs);
        let interior = inst.rhs_variants();
        let mut hits = Vec::new();
        for (side, sides, len) in
            [(LanternSide::Boundary, &boundary, inst.lhs.len()), (LanternSide::Interior, &interior, inst.rhs.len())]
        {
            for pos in 0..(w.len() + 1).saturating_sub(len) {
                let window = &w.letters[pos..pos + len];
                for conj in self.conj_candidates(window) {
                    if let Some(variant) = self.plain_window(window, &conj, sides) {
                        hits.push(LanternHit { pos, conj, side, variant });
                        break;
                    }
                }
            }
        }
        hits
    }

    fn alias(&self, w: &Word, pos: usize, id: &str, by: Option<isize>) -> Result<Word> {
        if let Some((_, central)) = self.reg.central_words().into_iter().find(|(c, _)| c == id) {
            let by = by.filter(|&k| k != 0).ok_or_else(|| illegal("moving a central word needs a nonzero by="))?;
            in_bounds(w, pos, central.len())?;
            let block = Word::new(w.letters[pos..pos + central.len()].to_vec());
            if !self.reg.words_equal(&block, &central) {
                return Err(illegal(format!("letters at {pos} are not {id}")));
            }
            let rest = w.splice(pos..pos + central.len(), &[]);
            let target = pos as isize + by;
            if target < 0 || target as usize > rest.len() {
                return Err(illegal(format!("cannot move {id} by {by}")));
            }
            let t = target as usize;
            return Ok(rest.splice(t..t, &block.letters));
        }
        if by.is_some() {
            return Err(illegal(format!("{id} takes no by=")));
        }
        if let Some(rel) = self.reg.relation(id) {
            for (from, to) in [(&rel.lhs, &rel.rhs), (&rel.rhs, &rel.lhs)] {
                if pos + from.len() > w.len() {
                    continue;
                }
                let window = &w.letters[pos..pos + from.len()];
                for conj in self.conj_candidates(window) {
                    if self.plain_window(window, &conj, std::slice::from_ref(from)).is_some() {
                        let replacement: Vec<Letter> = to.letters.iter().map(|l| self.normalized(l.under(&conj))).collect();
                        return Ok(w.splice(pos..pos + from.len(), &replacement));
                    }
                }
            }
            return Err(illegal(format!("no side of {id} occurs at {pos}")));
        }
        if let Ok(def) = self.reg.curve(id) {
            let def = def.def.clone().ok_or_else(|| illegal(format!("{id} has no definition")))?;
            in_bounds(w, pos, 1)?;
            let l = &w.letters[pos];
            let named = CurveRef::named(id);
            let replaced = if l.curve == named {
                Letter::new(def, l.sign)
            } else if self.reg.normalize(&l.curve) == self.reg.normalize(&named) {
                Letter::new(named, l.sign)
            } else {
                return Err(illegal(format!("{l} is not {id}")));
            };
            return Ok(w.splice(pos..pos + 1, &[replaced]));
        }
        Err(illegal(format!("unknown relation {id}")))
    }

    /// A move taking `apply(w, m)` back to `w`.
    pub fn inverse(&self, w: &Word, m: &Move) -> Result<Move> {
        Ok(match m {
            Move::Commute(i) => Move::Commute(*i),
            Move::Hurwitz(i, d) => Move::Hurwitz(*i, d.flip()),
            Move::Braid(i, d) => Move::Braid(*i, d.flip()),
            Move::Lantern { pos, instance, conj, dir, to } => {
                let inst = self.reg.lantern(instance).ok_or_else(|| illegal(format!("unknown lantern instance {instance}")))?;
                let len = match dir {
                    LanternDir::Down => inst.lhs.len(),
                    LanternDir::Up => inst.rhs.len(),
                };
                in_bounds(w, *pos, len)?;
                let sides = match dir {
                    LanternDir::Down => self.permutations_of(&inst.lhs),
                    LanternDir::Up => inst.rhs_variants(),
                };
                let original = self
                    .plain_window(&w.letters[*pos..*pos + len], conj, &sides)
                    .ok_or_else(|| illegal("lantern move does not apply"))?;
                let _ = to;
                Move::Lantern {
                    pos: *pos,
                    instance: instance.clone(),
                    conj: conj.clone(),
                    dir: match dir {
                        LanternDir::Down => LanternDir::Up,
                        LanternDir::Up => LanternDir::Down,
                    },
                    to: Some(original),
                }
            }
            Move::CyclicShift(k) => Move::CyclicShift(-k),
            Move::GlobalConjugate(u) => Move::CyclicShift(-(u.len() as isize)),
            Move::ExpandLetter(i) => {
                in_bounds(w, *i, 1)?;
                Move::ContractSpan(*i, *i + 2 * w.letters[*i].curve.conj.len())
            }
            Move::ContractSpan(i, _) => Move::ExpandLetter(*i),
            Move::AliasRewrite { pos, relation, by } => match by {
                Some(k) => Move::AliasRewrite { pos: (*pos as isize + k) as usize, relation: relation.clone(), by: Some(-k) },
                None => Move::AliasRewrite { pos: *pos, relation: relation.clone(), by: None },
            },
        })
    }

    pub fn replay(&self, s: &MoveScript) -> ReplayReport {
        let mut report = ReplayReport {
            title: s.title.clone(),
            start_label: s.start_label.clone(),
            start_signature: fibration::fiber_signature_opt(self.reg, &s.start),
            steps: Vec::new(),
            checkpoints: Vec::new(),
            final_word: s.start.clone(),
            final_label: s.final_word.label.clone(),
            final_signature: None,
            failure: None,
        };
        if let Err(e) = self.reg.check_word(&s.start) {
            report.failure = Some(Failure { step: 0, reason: e.to_string() });
            return report;
        }
        let mut cur = s.start.clone();
        let mut cps = s.checkpoints.iter().peekable();
        for i in 0..=s.moves.len() {
            if i > 0 {
                let m = &s.moves[i - 1];
                match self.apply(&cur, m) {
                    Ok(next) => {
                        cur = next;
                        report.steps.push(StepOutcome {
                            index: i,
                            mv: m.clone(),
                            ok: true,
                            message: String::new(),
                            signature: fibration::fiber_signature_opt(self.reg, &cur),
                        });
                    }
                    Err(e) => {
                        report.steps.push(StepOutcome {
                            index: i,
                            mv: m.clone(),
                            ok: false,
                            message: e.to_string(),
                            signature: None,
                        });
                        report.failure = Some(Failure { step: i, reason: e.to_string() });
                        report.final_word = cur;
                        return report;
                    }
                }
            }
            while let Some(c) = cps.next_if(|c| c.after == i) {
                let matched = self.reg.words_equal(&cur, &c.word);
                report.checkpoints.push(CheckpointOutcome {
                    after: i,
                    label: c.label.clone(),
                    matched,
                    signature: fibration::fiber_signature_opt(self.reg, &cur),
                    word: cur.clone(),
                });
                if !matched {
                    report.failure = Some(Failure { step: i, reason: format!("checkpoint mismatch: expected {} got {}", c.word, cur) });
                    report.final_word = cur;
                    return report;
                }
                cur = c.word.clone();
            }
        }
        if !self.reg.words_equal(&cur, &s.final_word.word) {
            report.failure =
                Some(Failure { step: s.moves.len(), reason: format!("final mismatch: expected {} got {}", s.final_word.word, cur) });
            report.final_word = cur;
            return report;
        }
        report.final_word = s.final_word.word.clone();
        report.final_signature = fibration::fiber_signature_opt(self.reg, &report.final_word);
        report
    }

    pub fn image(&self, w: &Word) -> Result<Sp4> {
        Ok(homology::image(self.reg, w)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepOutcome {
    pub index: usize,
    pub mv: Move,
    pub ok: bool,
    pub message: String,
    pub signature: Option<FiberSignature>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckpointOutcome {
    pub after: usize,
    pub label: Option<String>,
    pub matched: bool,
    pub signature: Option<FiberSignature>,
    pub word: Word,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub step: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReplayReport {
    pub title: Option<String>,
    pub start_label: Option<String>,
    pub start_signature: Option<FiberSignature>,
    pub steps: Vec<StepOutcome>,
    pub checkpoints: Vec<CheckpointOutcome>,
    pub final_word: Word,
    pub final_label: Option<String>,
    pub final_signature: Option<FiberSignature>,
    pub failure: Option<Failure>,
}

impl ReplayReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    /// Signatures at the labelled start, checkpoints and end, in order.
    pub fn labelled_signatures(&self) -> Vec<(String, FiberSignature)> {
        let mut out: Vec<(String, FiberSignature)> = Vec::new();
        if let (Some(l), Some(s)) = (&self.start_label, self.start_signature) {
            out.push((l.clone(), s));
        }
        out.extend(self.checkpoints.iter().filter_map(|c| Some((c.label.clone()?, c.signature?))));
        if let (Some(l), Some(s)) = (&self.final_label, self.final_signature) {
            out.push((l.clone(), s));
        }
        out
    }
}

fn sig_text(s: &Option<FiberSignature>) -> String {
    s.map_or_else(|| "-".to_string(), |s| s.to_string())
}

impl fmt::Display for ReplayReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(t) = &self.title {
            writeln!(f, "# {t}")?;
        }
        let mut cps = self.checkpoints.iter().peekable();
        while let Some(c) = cps.next_if(|c| c.after == 0) {
            writeln!(f, "{:>4}  checkpoint {:<8} {}", 0, c.label.as_deref().unwrap_or(""), sig_text(&c.signature))?;
        }
        for s in &self.steps {
            let status = if s.ok { "ok" } else { "FAIL" };
            write!(f, "{:>4}  {:<4} {:<40} {}", s.index, status, s.mv.to_string(), sig_text(&s.signature))?;
            if !s.ok {
                write!(f, "  {}", s.message)?;
            }
            writeln!(f)?;
            while let Some(c) = cps.next_if(|c| c.after == s.index) {
                let status = if c.matched { "checkpoint" } else { "MISMATCH" };
                writeln!(f, "{:>4}  {status} {:<8} {}", s.index, c.label.as_deref().unwrap_or(""), sig_text(&c.signature))?;
            }
        }
        match &self.failure {
            None => writeln!(
                f,
                "final {} {}: {}",
                self.final_label.as_deref().unwrap_or(""),
                sig_text(&self.final_signature),
                self.final_word
            ),
            Some(fail) => writeln!(f, "failed at step {}: {}", fail.step, fail.reason),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_word;
    use crate::word::Sign;

    fn w(t: &str) -> Word {
        parse_word(t).unwrap()
    }

    #[test]
    fn commute_disjoint_chain_curves() {
        let reg = Registry::standard();
        let e = Engine::new(&reg);
        assert_eq!(e.apply(&w("c1 c3"), &Move::Commute(0)).unwrap(), w("c3 c1"));
        assert!(matches!(e.apply(&w("c1 c2"), &Move::Commute(0)), Err(MoveError::IllegalMove(_))));
        assert!(matches!(e.apply(&w("x d"), &Move::Commute(0)), Err(MoveError::IllegalMove(_))));
        assert!(e.apply(&w("c1"), &Move::Commute(0)).is_err());
    }

    #[test]
    fn hurwitz_both_ways() {
        let reg = Registry::standard();
        let e = Engine::new(&reg);
        let l = e.apply(&w("c1 c2"), &Move::Hurwitz(0, Direction::Left)).unwrap();
        assert!(reg.words_equal(&l, &w("[c1](c2) c1")));
        let r = e.apply(&w("c1 c2"), &Move::Hurwitz(0, Direction::Right)).unwrap();
        assert!(reg.words_equal(&r, &w("c2 [c2^-1](c1)")));
        assert!(reg.words_equal(&e.apply(&l, &Move::Hurwitz(0, Direction::Right)).unwrap(), &w("c1 c2")));
    }

    #[test]
    fn braid_pattern() {
        let reg = Registry::standard();
        let e = Engine::new(&reg);
        let out = e.apply(&w("[c1^-1](c2) c2"), &Move::Braid(0, Direction::Right)).unwrap();
        assert_eq!(out, w("c2 c1"));
        let left = e.apply(&w("[c1^-1](c2) c2"), &Move::Braid(0, Direction::Left)).unwrap();
        assert_eq!(left, w("c1 [c1^-1](c2)"));
        assert!(e.apply(&w("c1 c5"), &Move::Braid(0, Direction::Left)).is_err());
    }

    #[test]
    fn lantern_down_and_up() {
        let reg = Registry::standard();
        let e = Engine::new(&reg);
        let m = Move::Lantern { pos: 1, instance: "L1".into(), conj: vec![], dir: LanternDir::Down, to: None };
        let out = e.apply(&w("c2 c1 c1 c5 c5 c4"), &m).unwrap();
        assert_eq!(out, w("c2 x c3 d c4"));
        let cyc = Move::Lantern { pos: 0, instance: "L1".into(), conj: vec![], dir: LanternDir::Down, to: Some(w("c3 d x")) };
        assert_eq!(e.apply(&w("c5 c1 c5 c1"), &cyc).unwrap(), w("c3 d x"));
        let bad = Move::Lantern { pos: 0, instance: "L1".into(), conj: vec![], dir: LanternDir::Down, to: Some(w("c3 x d")) };
        assert!(e.apply(&w("c1 c1 c5 c5"), &bad).is_err());
        let up = Move::Lantern { pos: 1, instance: "L1".into(), conj: vec![], dir: LanternDir::Up, to: None };
        assert_eq!(e.apply(&out, &up).unwrap(), w("c2 c1 c1 c5 c5 c4"));
        assert!(e.apply(&w("c1 c1 c5 c4"), &Move::Lantern { pos: 0, instance: "L1".into(), conj: vec![], dir: LanternDir::Down, to: None }).is_err());
    }

    #[test]
    fn conjugated_lantern() {
        let reg = Registry::standard();
        let e = Engine::new(&reg);
        let u = vec![Gen::new("c2", Sign::Pos)];
        let block = w("c1 c1 c5 c5").conjugate_letters(&u);
        let hits = e.match_lantern(&block, "L1");
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].conj, u);
        let m = Move::Lantern { pos: 0, instance: "L1".into(), conj: u.clone(), dir: LanternDir::Down, to: None };
        let out = e.apply(&block, &m).unwrap();
        assert!(reg.words_equal(&out, &w("x c3 d").conjugate_letters(&u)));
    }

    #[test]
    fn match_lantern_misses() {
        let reg = Registry::standard();
        let e = Engine::new(&reg);
        assert!(e.match_lantern(&w("c2 c4 c2 c4 c2"), "L1").is_empty());
        assert!(e.match_lantern(&w("c1 c1 c5 c5"), "nope").is_empty());
    }

    #[test]
    fn global_conjugate_moves_prefix() {
        let reg = Registry::standard();
        let e = Engine::new(&reg);
        let tau2 = w("(c1 c2 c3 c4 c5^2 c4 c3 c2 c1)^2");
        let out = e.apply(&tau2, &Move::GlobalConjugate(w("c1 c2"))).unwrap();
        assert_eq!(out, tau2.rotate(2));
        assert!(e.apply(&tau2, &Move::GlobalConjugate(w("c2"))).is_err());
        assert!(e.apply(&w("c1 c2"), &Move::GlobalConjugate(w("c1"))).is_err());
    }

    #[test]
    fn alias_rewrites() {
        let reg = Registry::standard();
        let e = Engine::new(&reg);
        let chain = e.apply(&w("c4 d"), &Move::AliasRewrite { pos: 1, relation: "chain".into(), by: None }).unwrap();
        assert_eq!(chain, w("c4 (c1 c2)^6"));
        let back = e.apply(&chain, &Move::AliasRewrite { pos: 1, relation: "chain".into(), by: None }).unwrap();
        assert_eq!(back, w("c4 d"));
        let b2 = e.apply(&w("B2"), &Move::AliasRewrite { pos: 0, relation: "B2".into(), by: None }).unwrap();
        assert_eq!(b2, w("[c3^-1](x)"));
        let tau = w("c1 c2 c3 c4 c5 c5 c4 c3 c2 c1");
        let moved = e
            .apply(&w("x").concat(&tau), &Move::AliasRewrite { pos: 1, relation: "tau".into(), by: Some(-1) })
            .unwrap();
        assert_eq!(moved, tau.concat(&w("x")));
        assert!(e.apply(&w("c1"), &Move::AliasRewrite { pos: 0, relation: "chain".into(), by: None }).is_err());
        assert!(e.apply(&w("c1"), &Move::AliasRewrite { pos: 0, relation: "nope".into(), by: None }).is_err());
    }

    #[test]
    fn expand_contract_moves() {
        let reg = Registry::standard();
        let e = Engine::new(&reg);
        let out = e.apply(&w("[c5](c4) c1"), &Move::ExpandLetter(0)).unwrap();
        assert_eq!(out, w("c5 c4 c5^-1 c1"));
        assert_eq!(e.apply(&out, &Move::ContractSpan(0, 2)).unwrap(), w("[c5](c4) c1"));
        assert!(e.apply(&w("c1"), &Move::ExpandLetter(0)).is_err());
    }

    #[test]
    fn inverse_moves_undo() {
        let reg = Registry::standard();
        let e = Engine::new(&reg);
        let cases = [
            (w("c1 c3 c2"), Move::Commute(0)),
            (w("c1 c2 c4"), Move::Hurwitz(1, Direction::Left)),
            (w("[c1^-1](c2) c2"), Move::Braid(0, Direction::Left)),
            (w("c3 c1 c1 c5 c5"), Move::Lantern { pos: 1, instance: "L1".into(), conj: vec![], dir: LanternDir::Down, to: Some(w("d x c3")) }),
            (w("c1 c2 c3"), Move::CyclicShift(2)),
            (w("[c3](c2) c4"), Move::ExpandLetter(0)),
        ];
        for (start, m) in cases {
            let out = e.apply(&start, &m).unwrap();
            let inv = e.inverse(&start, &m).unwrap_or_else(|_| panic!("{m}"));
            let back = e.apply(&out, &inv).unwrap();
            assert!(reg.words_equal(&back, &start), "{m}: {back} vs {start}");
        }
    }
}
