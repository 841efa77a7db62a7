//! Text formats: words, relator documents and move scripts (`.mcg`).
//!
//! Words are whitespace or `.` separated curve names. `a^k` repeats a letter
//! (negative `k` inverts), `(...)^k` repeats a group and `[w](a b)` conjugates
//! every letter of the group by `w`. Unicode `δ`, `·`, `k̄`, `h̄` and `⁻¹` are
//! accepted and printed back in ASCII.

use std::fmt;

use thiserror::Error;

use crate::moves::{Direction, LanternDir, Move};
use crate::registry::{Registry, RegistryError};
use crate::word::{Gen, Letter, PositiveRelator, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DslError {
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("line {line}: unknown lantern instance {id}")]
    UnknownInstance { line: usize, id: String },
    #[error("line {line}: {source}")]
    Registry { line: usize, source: RegistryError },
}

impl DslError {
    fn at(line: usize, col: usize, msg: impl Into<String>) -> DslError {
        DslError::Parse { line, col, msg: msg.into() }
    }

    fn shifted(self, line: usize, col0: usize) -> DslError {
        match self {
            DslError::Parse { col, msg, .. } => DslError::Parse { line, col: col + col0, msg },
            other => other,
        }
    }
}

/// Rewrites the accepted Unicode spellings into ASCII.
pub fn ascii(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for ch in text.chars() {
        match ch {
            'δ' => out.push('d'),
            '·' | '⋅' => out.push('.'),
            '\u{0304}' => out.push('b'),
            '⁻' => out.push_str("^-"),
            '¹' => out.push('1'),
            _ => out.push(ch),
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Name(String),
    Pow(i64),
    LParen,
    RParen,
    LBrack,
    RBrack,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, DslError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            c if c.is_whitespace() || c == '.' => i += 1,
            '(' => {
                out.push((Tok::LParen, col));
                i += 1;
            }
            ')' => {
                out.push((Tok::RParen, col));
                i += 1;
            }
            '[' => {
                out.push((Tok::LBrack, col));
                i += 1;
            }
            ']' => {
                out.push((Tok::RBrack, col));
                i += 1;
            }
            '^' => {
                let mut j = i + 1;
                if j < chars.len() && chars[j] == '-' {
                    j += 1;
                }
                let start = j;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                if start == j {
                    return Err(DslError::at(1, col, "expected an integer after '^'"));
                }
                let s: String = chars[i + 1..j].iter().collect();
                let k = s.parse().map_err(|_| DslError::at(1, col, "exponent out of range"))?;
                out.push((Tok::Pow(k), col));
                i = j;
            }
            c if c.is_ascii_alphabetic() => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                out.push((Tok::Name(chars[i..j].iter().collect()), col));
                i = j;
            }
            _ => return Err(DslError::at(1, col, format!("unexpected character {c:?}"))),
        }
    }
    Ok(out)
}

struct WordParser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
}

impl WordParser {
    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.1)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), DslError> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(DslError::at(1, self.col(), format!("expected {what}")))
        }
    }

    fn seq(&mut self, closer: Option<Tok>) -> Result<Vec<Letter>, DslError> {
        let mut out = Vec::new();
        loop {
            match self.peek() {
                None => {
                    if closer.is_some() {
                        return Err(DslError::at(1, self.col(), "unclosed group"));
                    }
                    return Ok(out);
                }
                Some(t) if Some(t) == closer.as_ref() => return Ok(out),
                Some(Tok::RParen) | Some(Tok::RBrack) => {
                    return Err(DslError::at(1, self.col(), "unbalanced closing bracket"))
                }
                Some(Tok::Pow(_)) => return Err(DslError::at(1, self.col(), "exponent without a base")),
                _ => {
                    let item = self.item()?;
                    out.extend(item);
                }
            }
        }
    }

    fn item(&mut self) -> Result<Vec<Letter>, DslError> {
        let (tok, _) = self.toks[self.pos].clone();
        self.pos += 1;
        let group = match tok {
            Tok::Name(n) => vec![Letter::pos(n)],
            Tok::LParen => {
                let g = self.seq(Some(Tok::RParen))?;
                self.pos += 1;
                g
            }
            Tok::LBrack => {
                let c = self.seq(Some(Tok::RBrack))?;
                self.pos += 1;
                self.expect(Tok::LParen, "'(' after a conjugator")?;
                let g = self.seq(Some(Tok::RParen))?;
                self.pos += 1;
                let by: Vec<Gen> = c.iter().flat_map(Letter::to_gens).collect();
                g.iter().map(|l| l.under(&by)).collect()
            }
            _ => unreachable!("seq only dispatches opening tokens"),
        };
        if let Some(Tok::Pow(k)) = self.peek() {
            let k = *k;
            self.pos += 1;
            let unit: Vec<Letter> = if k < 0 {
                group.iter().rev().map(Letter::inverse).collect()
            } else {
                group
            };
            let n = k.unsigned_abs() as usize;
            return Ok(unit.iter().cloned().cycle().take(unit.len() * n).collect());
        }
        Ok(group)
    }
}

/// Parses a word without consulting a registry.
pub fn parse_word(text: &str) -> Result<Word, DslError> {
    let text = ascii(text);
    let toks = lex(&text)?;
    let mut p = WordParser { toks, pos: 0, end_col: text.chars().count() + 1 };
    Ok(Word::new(p.seq(None)?))
}

/// A word that must be positive and whose curves must be registered.
pub fn parse_relator(text: &str, reg: &Registry) -> Result<PositiveRelator, DslError> {
    let w = parse_word(text)?;
    reg.check_word(&w).map_err(|source| DslError::Registry { line: 1, source })?;
    PositiveRelator::new(w, None).map_err(|e| DslError::at(1, 1, e.to_string()))
}

/// `label = word` lines; `#` starts a comment.
pub fn parse_relator_doc(text: &str, reg: &Registry) -> Result<Vec<PositiveRelator>, DslError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        if line.trim().is_empty() {
            continue;
        }
        let Some(eq) = line.find('=') else {
            return Err(DslError::at(i + 1, 1, "expected 'label = word'"));
        };
        let label = line[..eq].trim();
        let mut r = parse_relator(&line[eq + 1..], reg).map_err(|e| relocate(e, i + 1, eq + 1))?;
        r.label = Some(label.to_string());
        out.push(r);
    }
    Ok(out)
}

fn relocate(e: DslError, line: usize, col0: usize) -> DslError {
    match e {
        DslError::Registry { source, .. } => DslError::Registry { line, source },
        other => other.shifted(line, col0),
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// A derivation: start word, moves, checkpoints and the expected result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveScript {
    pub title: Option<String>,
    pub start: Word,
    pub start_label: Option<String>,
    pub moves: Vec<Move>,
    /// Expected words, keyed by the number of moves applied before the check.
    pub checkpoints: Vec<Checkpoint>,
    pub final_word: Checkpoint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Checkpoint {
    pub after: usize,
    pub word: Word,
    pub label: Option<String>,
}

/// Splits `head key=v1 v2 key2=v3` into the head and the keyed values.
fn split_kv(s: &str) -> (String, Vec<(String, String)>) {
    let mut head = Vec::new();
    let mut kv: Vec<(String, Vec<&str>)> = Vec::new();
    for tok in s.split_whitespace() {
        match tok.split_once('=') {
            Some((k, v)) if !k.is_empty() && k.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') => {
                kv.push((k.to_string(), if v.is_empty() { vec![] } else { vec![v] }));
            }
            _ => match kv.last_mut() {
                Some((_, vals)) => vals.push(tok),
                None => head.push(tok),
            },
        }
    }
    (head.join(" "), kv.into_iter().map(|(k, v)| (k, v.join(" "))).collect())
}

fn parse_pos(tok: &str, line: usize) -> Result<usize, DslError> {
    tok.strip_prefix('@')
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| DslError::at(line, 1, format!("expected a position '@<i>', found {tok:?}")))
}

fn parse_dir(tok: Option<&str>, line: usize) -> Result<Direction, DslError> {
    match tok {
        Some("left") => Ok(Direction::Left),
        Some("right") => Ok(Direction::Right),
        other => Err(DslError::at(line, 1, format!("expected left or right, found {other:?}"))),
    }
}

fn take_key(kv: &mut Vec<(String, String)>, key: &str) -> Option<String> {
    let i = kv.iter().position(|(k, _)| k == key)?;
    Some(kv.remove(i).1)
}

fn no_more_keys(kv: &[(String, String)], line: usize) -> Result<(), DslError> {
    match kv.first() {
        Some((k, _)) => Err(DslError::at(line, 1, format!("unexpected argument {k}="))),
        None => Ok(()),
    }
}

fn word_arg(text: &str, line: usize) -> Result<Word, DslError> {
    parse_word(text).map_err(|e| e.shifted(line, 0))
}

fn gens_of(w: &Word) -> Vec<Gen> {
    w.letters.iter().flat_map(Letter::to_gens).collect()
}

fn parse_move(line: &str, n: usize, reg: Option<&Registry>) -> Result<Move, DslError> {
    let (head, mut kv) = split_kv(line);
    let toks: Vec<&str> = head.split_whitespace().collect();
    let arg = |i: usize| toks.get(i).copied();
    let need = |i: usize| arg(i).ok_or_else(|| DslError::at(n, 1, "missing argument"));
    let m = match toks[0] {
        "~" => {
            if arg(1) != Some("commute") {
                return Err(DslError::at(n, 1, "expected '~ commute @<i>'"));
            }
            Move::Commute(parse_pos(need(2)?, n)?)
        }
        "B" => Move::Braid(parse_pos(need(1)?, n)?, parse_dir(arg(2), n)?),
        "H" => Move::Hurwitz(parse_pos(need(1)?, n)?, parse_dir(arg(2), n)?),
        "L" => {
            let pos = parse_pos(need(1)?, n)?;
            let instance = take_key(&mut kv, "inst").ok_or_else(|| DslError::at(n, 1, "missing inst="))?;
            if let Some(reg) = reg {
                if reg.lantern(&instance).is_none() {
                    return Err(DslError::UnknownInstance { line: n, id: instance });
                }
            }
            let dir = match take_key(&mut kv, "dir").as_deref() {
                Some("down") => LanternDir::Down,
                Some("up") => LanternDir::Up,
                other => return Err(DslError::at(n, 1, format!("expected dir=down|up, found {other:?}"))),
            };
            let conj = match take_key(&mut kv, "conj") {
                Some(t) => gens_of(&word_arg(&t, n)?),
                None => Vec::new(),
            };
            let to = take_key(&mut kv, "to").map(|t| word_arg(&t, n)).transpose()?;
            Move::Lantern { pos, instance, conj, dir, to }
        }
        "shift" => {
            let k = need(1)?.parse().map_err(|_| DslError::at(n, 1, "expected an integer shift"))?;
            Move::CyclicShift(k)
        }
        "C" => {
            let by = take_key(&mut kv, "by").ok_or_else(|| DslError::at(n, 1, "missing by="))?;
            Move::GlobalConjugate(word_arg(&by, n)?)
        }
        "expand" => Move::ExpandLetter(parse_pos(need(1)?, n)?),
        "contract" => {
            let r = need(1)?
                .strip_prefix('@')
                .and_then(|t| t.split_once(".."))
                .and_then(|(a, b)| Some((a.parse::<usize>().ok()?, b.parse::<usize>().ok()?)))
                .ok_or_else(|| DslError::at(n, 1, "expected '@<i>..<j>'"))?;
            if r.1 < r.0 {
                return Err(DslError::at(n, 1, "empty span"));
            }
            Move::ContractSpan(r.0, r.1)
        }
        "alias" => {
            let pos = parse_pos(need(1)?, n)?;
            let relation = take_key(&mut kv, "rel").ok_or_else(|| DslError::at(n, 1, "missing rel="))?;
            let by = take_key(&mut kv, "by")
                .map(|t| t.parse::<isize>().map_err(|_| DslError::at(n, 1, "expected an integer by=")))
                .transpose()?;
            Move::AliasRewrite { pos, relation, by }
        }
        other => return Err(DslError::at(n, 1, format!("unknown move {other:?}"))),
    };
    if toks.len() > expected_arity(&m) {
        return Err(DslError::at(n, 1, format!("trailing input {:?}", toks[expected_arity(&m)..].join(" "))));
    }
    no_more_keys(&kv, n)?;
    Ok(m)
}

fn expected_arity(m: &Move) -> usize {
    match m {
        Move::Commute(_) | Move::Braid(..) | Move::Hurwitz(..) => 3,
        Move::GlobalConjugate(_) => 1,
        _ => 2,
    }
}

fn parse_expected(rest: &str, n: usize, after: usize) -> Result<Checkpoint, DslError> {
    let (head, mut kv) = split_kv(rest);
    let label = take_key(&mut kv, "label");
    no_more_keys(&kv, n)?;
    Ok(Checkpoint { after, word: word_arg(&head, n)?, label })
}

/// Parses a script. With a registry, lantern instance names are checked.
/// One move line in script syntax, e.g. `L @4 inst=L1 dir=down`.
pub fn parse_move_line(line: &str, reg: Option<&Registry>) -> Result<Move, DslError> {
    let line = strip_comment(line).trim();
    if line.is_empty() {
        return Err(DslError::at(1, 1, "empty move"));
    }
    parse_move(line, 1, reg)
}

pub fn parse_script(text: &str, reg: Option<&Registry>) -> Result<MoveScript, DslError> {
    let mut title = None;
    let mut start: Option<(Word, Option<String>)> = None;
    let mut moves = Vec::new();
    let mut checkpoints = Vec::new();
    let mut final_word = None;
    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let trimmed = raw.trim();
        if let Some(c) = trimmed.strip_prefix('#') {
            if start.is_none() && title.is_none() {
                title = Some(c.trim().to_string());
            }
            continue;
        }
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        if final_word.is_some() {
            return Err(DslError::at(n, 1, "content after final:"));
        }
        if let Some(rest) = line.strip_prefix("start:") {
            if start.is_some() {
                return Err(DslError::at(n, 1, "duplicate start:"));
            }
            let c = parse_expected(rest, n, 0)?;
            start = Some((c.word, c.label));
            continue;
        }
        if start.is_none() {
            return Err(DslError::at(n, 1, "script must begin with start:"));
        }
        if let Some(rest) = line.strip_prefix("checkpoint:") {
            checkpoints.push(parse_expected(rest, n, moves.len())?);
        } else if let Some(rest) = line.strip_prefix("final:") {
            final_word = Some(parse_expected(rest, n, moves.len())?);
        } else {
            moves.push(parse_move(line, n, reg)?);
        }
    }
    let (start, start_label) = start.ok_or_else(|| DslError::at(1, 1, "missing start:"))?;
    let final_word = final_word.ok_or_else(|| DslError::at(text.lines().count().max(1), 1, "missing final:"))?;
    Ok(MoveScript { title, start, start_label, moves, checkpoints, final_word })
}

fn with_label(word: &Word, label: &Option<String>) -> String {
    match label {
        Some(l) => format!("{word} label={l}"),
        None => word.to_string(),
    }
}

impl fmt::Display for MoveScript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(t) = &self.title {
            writeln!(f, "# {t}")?;
        }
        writeln!(f, "start: {}", with_label(&self.start, &self.start_label))?;
        let mut cps = self.checkpoints.iter().peekable();
        for i in 0..=self.moves.len() {
            while let Some(c) = cps.peek().filter(|c| c.after == i) {
                writeln!(f, "checkpoint: {}", with_label(&c.word, &c.label))?;
                cps.next();
            }
            if let Some(m) = self.moves.get(i) {
                writeln!(f, "{m}")?;
            }
        }
        writeln!(f, "final: {}", with_label(&self.final_word.word, &self.final_word.label))
    }
}

fn gens_text(g: &[Gen]) -> String {
    g.iter().map(Gen::to_string).collect::<Vec<_>>().join(" ")
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Commute(i) => write!(f, "~ commute @{i}"),
            Move::Braid(i, d) => write!(f, "B @{i} {d}"),
            Move::Hurwitz(i, d) => write!(f, "H @{i} {d}"),
            Move::Lantern { pos, instance, conj, dir, to } => {
                write!(f, "L @{pos} inst={instance} dir={dir}")?;
                if !conj.is_empty() {
                    write!(f, " conj={}", gens_text(conj))?;
                }
                if let Some(to) = to {
                    write!(f, " to={to}")?;
                }
                Ok(())
            }
            Move::CyclicShift(k) => write!(f, "shift {k}"),
            Move::GlobalConjugate(u) => write!(f, "C by={u}"),
            Move::ExpandLetter(i) => write!(f, "expand @{i}"),
            Move::ContractSpan(i, j) => write!(f, "contract @{i}..{j}"),
            Move::AliasRewrite { pos, relation, by } => {
                write!(f, "alias @{pos} rel={relation}")?;
                if let Some(k) = by {
                    write!(f, " by={k}")?;
                }
                Ok(())
            }
        }
    }
}

pub fn serialize_relator(r: &PositiveRelator) -> String {
    match &r.label {
        Some(l) => format!("{l} = {}", r.word),
        None => r.word.to_string(),
    }
}

pub fn serialize_relator_doc(rs: &[PositiveRelator]) -> String {
    rs.iter().map(|r| serialize_relator(r) + "\n").collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry::Registry;

    #[test]
    fn powers_and_groups() {
        let w = parse_word("(c1 c2 c3 c4 c5^2 c4 c3 c2 c1)^2").unwrap();
        assert_eq!(w.len(), 20);
        assert!(w.is_positive());
        let w = parse_word("(B0 B1 B2 d)^2").unwrap();
        assert_eq!(w.to_string(), "B0 B1 B2 d B0 B1 B2 d");
        assert_eq!(parse_word("(c1 c2)^-1").unwrap().to_string(), "c2^-1 c1^-1");
        assert_eq!(parse_word("c1^0").unwrap(), Word::empty());
    }

    #[test]
    fn conjugate_syntax() {
        let w = parse_word("[c3^-1](x)").unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(w.to_string(), "[c3^-1](x)");
        let w = parse_word("[c1^-1 c3](kb hb) . c5").unwrap();
        assert_eq!(w.to_string(), "[c1^-1 c3](kb) [c1^-1 c3](hb) c5");
        let nested = parse_word("[[c1](c2)](c3)").unwrap();
        assert_eq!(nested.to_string(), "[c1 c2 c1^-1](c3)");
    }

    #[test]
    fn unicode_input() {
        assert_eq!(parse_word("δ·x·k̄ h̄ c3⁻¹").unwrap().to_string(), "d x kb hb c3^-1");
    }

    #[test]
    fn empty_word_prints_unit() {
        assert_eq!(parse_word("").unwrap().to_string(), "()");
        assert_eq!(parse_word("()").unwrap(), Word::empty());
    }

    #[test]
    fn errors_carry_columns() {
        match parse_word("c1 (c2").unwrap_err() {
            DslError::Parse { col, .. } => assert_eq!(col, 7),
            e => panic!("{e}"),
        }
        assert!(parse_word("c1 ]").is_err());
        assert!(parse_word("c1 ^2").is_ok());
        assert!(parse_word("^2").is_err());
        assert!(parse_word("[c1] c2").is_err());
        assert!(parse_word("c1 $").is_err());
    }

    #[test]
    fn relator_checks_registry() {
        let reg = Registry::standard();
        assert_eq!(parse_relator("(c1 c2 c3 c4 c5^2 c4 c3 c2 c1)^2", &reg).unwrap().word.len(), 20);
        assert!(matches!(parse_relator("c1 q7", &reg), Err(DslError::Registry { .. })));
        assert!(parse_relator("c1^-1", &reg).is_err());
    }

    #[test]
    fn script_round_trip() {
        let text = "# t\nstart: c1 c3 label=A\n~ commute @0\ncheckpoint: c3 c1\nL @2 inst=L1 dir=down conj=c2 to=c3 d x\nalias @0 rel=tau by=-3\ncontract @1..3\nC by=c1^2\nshift -2\nfinal: c1 label=B\n";
        let s = parse_script(text, None).unwrap();
        assert_eq!(s.moves.len(), 6);
        assert_eq!(s.checkpoints[0].after, 1);
        assert_eq!(s.final_word.label.as_deref(), Some("B"));
        let again = parse_script(&s.to_string(), None).unwrap();
        assert_eq!(again, s);
    }

    #[test]
    fn script_errors() {
        assert!(parse_script("~ commute @0\n", None).is_err());
        assert!(parse_script("start: c1\n", None).is_err());
        assert!(parse_script("start: c1\nX @0\nfinal: c1\n", None).is_err());
        assert!(parse_script("start: c1\nB @0 up\nfinal: c1\n", None).is_err());
        assert!(parse_script("start: c1\nH @x left\nfinal: c1\n", None).is_err());
        assert!(parse_script("start: c1\nL @0 inst=L1 dir=down bogus=1\nfinal: c1\n", None).is_err());
        let reg = Registry::standard();
        assert!(matches!(
            parse_script("start: c1\nL @0 inst=L9 dir=down\nfinal: c1\n", Some(&reg)),
            Err(DslError::UnknownInstance { line: 2, .. })
        ));
    }
}
