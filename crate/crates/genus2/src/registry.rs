//! Named curves on the genus-2 surface and the relations among their twists.
//!
//! Registry files hold one declaration per line:
//!
//! ```text
//! c1 nonsep h=(1,0,0,0)
//! B2 nonsep h=(1,0,1,0) def=[c3^-1](x)
//! chain c1 c2 c3 c4 c5
//! disjoint d: c1 c2 c4 c5
//! L1: c1 c1 c5 c5 = x c3 d
//! central tau
//! relation chain: d = (c1 c2)^6
//! relator matsumoto = (B0 B1 B2 d)^2
//! symbol phi word=c4^-1 c3^-1 c2^-1 c1^-1
//! symbol iota matrix=(0,0,1,0;0,0,0,1;1,0,0,0;0,1,0,0)
//! symbol lambda product=iota phi
//! maps lambda: B0 -> c1, d -> Yc
//! ```

use std::collections::{HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::dsl::{self, DslError};
use crate::homology::{self, HomologyError, Sp4, Vec4};
use crate::word::{CurveRef, Gen, Letter, Sign, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RegistryError {
    #[error("unknown curve {0}")]
    UnknownCurve(String),
    #[error("residual of the lantern equation is not a transvection")]
    NotATransvection,
    #[error("integer overflow in homology arithmetic")]
    Overflow,
    #[error("registry line {line}: {msg}")]
    Syntax { line: usize, msg: String },
}

impl From<HomologyError> for RegistryError {
    fn from(e: HomologyError) -> Self {
        match e {
            HomologyError::Overflow => RegistryError::Overflow,
            HomologyError::Registry(r) => r,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveDef {
    pub name: String,
    pub separating: bool,
    pub class: Vec4,
    pub def: Option<CurveRef>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LanternInstance {
    pub id: String,
    /// The four boundary twists.
    pub lhs: Word,
    /// The three interior twists.
    pub rhs: Word,
    pub cyclic: bool,
}

impl LanternInstance {
    pub fn rhs_variants(&self) -> Vec<Word> {
        if !self.cyclic {
            return vec![self.rhs.clone()];
        }
        (0..self.rhs.len()).map(|k| self.rhs.rotate(k as isize)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub id: String,
    pub lhs: Word,
    pub rhs: Word,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MappingClassSymbol {
    pub id: String,
    pub expansion: Option<Word>,
    pub matrix: Option<Sp4>,
    pub product: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolMap {
    pub symbol: String,
    pub pairs: Vec<(String, String)>,
}

#[derive(Clone, Debug, Default)]
pub struct Registry {
    curves: Vec<CurveDef>,
    index: HashMap<String, usize>,
    pub chain: Vec<String>,
    disjoint: HashSet<(usize, usize)>,
    pub lanterns: Vec<LanternInstance>,
    pub central: Vec<String>,
    pub relations: Vec<Relation>,
    pub relators: Vec<(String, Word)>,
    pub symbols: Vec<MappingClassSymbol>,
    pub maps: Vec<SymbolMap>,
}

pub const STANDARD: &str = include_str!("../corpus/standard.reg");

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LanternSolution {
    Separating,
    Class(Vec4),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, detail: detail.into() });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = if c.passed { "ok  " } else { "FAIL" };
            if c.detail.is_empty() {
                writeln!(f, "{status} {}", c.name)?;
            } else {
                writeln!(f, "{status} {}  ({})", c.name, c.detail)?;
            }
        }
        Ok(())
    }
}

fn syntax(line: usize, msg: impl Into<String>) -> RegistryError {
    RegistryError::Syntax { line, msg: msg.into() }
}

fn word_at(text: &str, line: usize) -> Result<Word, RegistryError> {
    dsl::parse_word(text).map_err(|e| match e {
        DslError::Parse { msg, .. } => syntax(line, msg),
        other => syntax(line, other.to_string()),
    })
}

fn parse_vec(text: &str, line: usize) -> Result<Vec4, RegistryError> {
    let inner = text
        .trim()
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| syntax(line, "expected (w,x,y,z)"))?;
    let parts: Vec<i64> = inner
        .split(',')
        .map(|p| p.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|_| syntax(line, "expected integers"))?;
    parts.try_into().map_err(|_| syntax(line, "expected four entries"))
}

fn parse_matrix(text: &str, line: usize) -> Result<Sp4, RegistryError> {
    let inner = text
        .trim()
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| syntax(line, "expected (r0;r1;r2;r3)"))?;
    let rows: Vec<[i64; 4]> = inner
        .split(';')
        .map(|r| parse_vec(&format!("({r})"), line))
        .collect::<Result<_, _>>()?;
    Ok(Sp4(rows.try_into().map_err(|_| syntax(line, "expected four rows"))?))
}

fn fmt_vec(v: &Vec4) -> String {
    format!("({},{},{},{})", v[0], v[1], v[2], v[3])
}

fn fmt_matrix(m: &Sp4) -> String {
    let rows: Vec<String> = m.0.iter().map(|r| format!("{},{},{},{}", r[0], r[1], r[2], r[3])).collect();
    format!("({})", rows.join(";"))
}

impl Registry {
    pub fn standard() -> Registry {
        Registry::parse(STANDARD).expect("embedded registry parses")
    }

    pub fn parse(text: &str) -> Result<Registry, RegistryError> {
        let mut reg = Registry::default();
        let mut pending_disjoint = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let n = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (first, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let rest = rest.trim();
            match first {
                "chain" => reg.chain = rest.split_whitespace().map(str::to_string).collect(),
                "disjoint" => {
                    let (a, others) = rest.split_once(':').ok_or_else(|| syntax(n, "expected 'disjoint a: b c'"))?;
                    for b in others.split_whitespace() {
                        pending_disjoint.push((n, a.trim().to_string(), b.to_string()));
                    }
                }
                "central" => reg.central.push(rest.to_string()),
                "relation" => {
                    let (id, body) = rest.split_once(':').ok_or_else(|| syntax(n, "expected 'relation id: lhs = rhs'"))?;
                    let (l, r) = body.split_once('=').ok_or_else(|| syntax(n, "expected '='"))?;
                    reg.relations.push(Relation { id: id.trim().to_string(), lhs: word_at(l, n)?, rhs: word_at(r, n)? });
                }
                "relator" => {
                    let (id, body) = rest.split_once('=').ok_or_else(|| syntax(n, "expected 'relator id = word'"))?;
                    reg.relators.push((id.trim().to_string(), word_at(body, n)?));
                }
                "symbol" => reg.symbols.push(parse_symbol(rest, n)?),
                "maps" => {
                    let (sym, body) = rest.split_once(':').ok_or_else(|| syntax(n, "expected 'maps sym: a -> b'"))?;
                    let mut pairs = Vec::new();
                    for p in body.split(',') {
                        let (a, b) = p.split_once("->").ok_or_else(|| syntax(n, "expected 'a -> b'"))?;
                        pairs.push((a.trim().to_string(), b.trim().to_string()));
                    }
                    reg.maps.push(SymbolMap { symbol: sym.trim().to_string(), pairs });
                }
                id if id.ends_with(':') => {
                    let (l, r) = rest.split_once('=').ok_or_else(|| syntax(n, "expected 'Lk: lhs = rhs'"))?;
                    reg.lanterns.push(LanternInstance {
                        id: id.trim_end_matches(':').to_string(),
                        lhs: word_at(l, n)?,
                        rhs: word_at(r, n)?,
                        cyclic: true,
                    });
                }
                name => reg.add_curve(parse_curve(name, rest, n)?, n)?,
            }
        }
        for (n, a, b) in pending_disjoint {
            let (Some(&i), Some(&j)) = (reg.index.get(&a), reg.index.get(&b)) else {
                return Err(syntax(n, format!("disjoint pair {a} {b} names an unknown curve")));
            };
            reg.disjoint.insert((i, j));
            reg.disjoint.insert((j, i));
        }
        reg.check_references()?;
        Ok(reg)
    }

    fn add_curve(&mut self, c: CurveDef, line: usize) -> Result<(), RegistryError> {
        if self.index.contains_key(&c.name) {
            return Err(syntax(line, format!("duplicate curve {}", c.name)));
        }
        self.index.insert(c.name.clone(), self.curves.len());
        self.curves.push(c);
        Ok(())
    }

    fn check_references(&self) -> Result<(), RegistryError> {
        for c in &self.chain {
            self.curve(c)?;
        }
        for c in &self.curves {
            if let Some(d) = &c.def {
                self.check_curve(d)?;
            }
        }
        for l in &self.lanterns {
            self.check_word(&l.lhs)?;
            self.check_word(&l.rhs)?;
        }
        for r in &self.relations {
            self.check_word(&r.lhs)?;
            self.check_word(&r.rhs)?;
        }
        for (_, w) in &self.relators {
            self.check_word(w)?;
        }
        for s in &self.symbols {
            if let Some(w) = &s.expansion {
                self.check_word(w)?;
            }
        }
        for m in &self.maps {
            for (a, b) in &m.pairs {
                self.curve(a)?;
                self.curve(b)?;
            }
        }
        Ok(())
    }

    pub fn curves(&self) -> &[CurveDef] {
        &self.curves
    }

    pub fn curve(&self, name: &str) -> Result<&CurveDef, RegistryError> {
        self.index
            .get(name)
            .map(|&i| &self.curves[i])
            .ok_or_else(|| RegistryError::UnknownCurve(name.to_string()))
    }

    pub fn curve_mut(&mut self, name: &str) -> Option<&mut CurveDef> {
        let i = *self.index.get(name)?;
        Some(&mut self.curves[i])
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn check_curve(&self, c: &CurveRef) -> Result<(), RegistryError> {
        self.curve(&c.base)?;
        for g in &c.conj {
            self.curve(&g.name)?;
        }
        Ok(())
    }

    pub fn check_word(&self, w: &Word) -> Result<(), RegistryError> {
        w.letters.iter().try_for_each(|l| self.check_curve(&l.curve))
    }

    pub fn lantern(&self, id: &str) -> Option<&LanternInstance> {
        self.lanterns.iter().find(|l| l.id == id)
    }

    pub fn relation(&self, id: &str) -> Option<&Relation> {
        self.relations.iter().find(|r| r.id == id)
    }

    pub fn symbol(&self, id: &str) -> Option<&MappingClassSymbol> {
        self.symbols.iter().find(|s| s.id == id)
    }

    pub fn remove_lantern(&mut self, id: &str) {
        self.lanterns.retain(|l| l.id != id);
    }

    /// The registered central words.
    pub fn central_words(&self) -> Vec<(String, Word)> {
        self.central
            .iter()
            .filter_map(|id| Some((id.clone(), self.symbol(id)?.expansion.clone()?)))
            .collect()
    }

    pub fn disjoint(&self, a: &str, b: &str) -> bool {
        match (self.index.get(a), self.index.get(b)) {
            (Some(&i), Some(&j)) => self.disjoint.contains(&(i, j)),
            _ => false,
        }
    }

    /// Twists along `a` and `b` commute by declaration.
    pub fn commute(&self, a: &str, b: &str) -> bool {
        a == b || self.disjoint(a, b)
    }

    pub fn disjoint_pairs(&self) -> Vec<(String, String)> {
        let mut v: Vec<(usize, usize)> = self.disjoint.iter().copied().filter(|(i, j)| i < j).collect();
        v.sort();
        v.into_iter().map(|(i, j)| (self.curves[i].name.clone(), self.curves[j].name.clone())).collect()
    }

    pub fn chain_index(&self, name: &str) -> Option<usize> {
        self.chain.iter().position(|c| c == name)
    }

    pub fn homology_class(&self, c: &CurveRef) -> Result<Vec4, RegistryError> {
        let base = self.curve(&c.base)?.class;
        if c.conj.is_empty() {
            return Ok(base);
        }
        Ok(homology::gens_image(self, &c.conj)?.apply(&base)?)
    }

    pub fn is_separating(&self, c: &CurveRef) -> Result<bool, RegistryError> {
        for g in &c.conj {
            self.curve(&g.name)?;
        }
        Ok(self.curve(&c.base)?.separating)
    }

    fn order(&self, name: &str) -> usize {
        self.index.get(name).copied().unwrap_or(usize::MAX)
    }

    fn unfold_gens(&self, gens: &[Gen]) -> Vec<Gen> {
        let mut out = Vec::with_capacity(gens.len());
        for g in gens {
            match self.curve(&g.name).ok().and_then(|c| c.def.as_ref()) {
                Some(def) => out.extend(self.unfold_gens(&Letter::new(def.clone(), g.sign).to_gens())),
                None => out.push(g.clone()),
            }
        }
        out
    }

    fn free_reduce_gens(&self, w: &mut Vec<Gen>) -> bool {
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                if w[j].name == w[i].name && w[j].sign != w[i].sign {
                    w.remove(j);
                    w.remove(i);
                    return true;
                }
                if !self.commute(&w[j].name, &w[i].name) {
                    break;
                }
            }
        }
        false
    }

    fn strip_trailing(&self, w: &mut Vec<Gen>, base: &str) -> bool {
        for i in (0..w.len()).rev() {
            if self.commute(&w[i].name, base) && w[i + 1..].iter().all(|g| self.commute(&g.name, &w[i].name)) {
                w.remove(i);
                return true;
            }
        }
        false
    }

    fn lex_normal(&self, mut w: Vec<Gen>) -> Vec<Gen> {
        let mut out = Vec::with_capacity(w.len());
        while !w.is_empty() {
            let best = (0..w.len())
                .filter(|&i| w[..i].iter().all(|g| self.commute(&g.name, &w[i].name)))
                .min_by_key(|&i| (self.order(&w[i].name), w[i].sign == Sign::Neg))
                .expect("the first letter is always a candidate");
            out.push(w.remove(best));
        }
        out
    }

    /// A canonical form for the curve: definitions unfolded, the conjugator
    /// reduced modulo declared commutations and trailing letters fixing the
    /// base curve dropped.
    pub fn normalize(&self, c: &CurveRef) -> CurveRef {
        let mut conj = self.unfold_gens(&c.conj);
        let mut base = c.base.clone();
        while let Some(def) = self.curve(&base).ok().and_then(|d| d.def.clone()) {
            conj.extend(self.unfold_gens(&def.conj));
            base = def.base;
        }
        while self.free_reduce_gens(&mut conj) || self.strip_trailing(&mut conj, &base) {}
        CurveRef { conj: self.lex_normal(conj), base }
    }

    pub fn normalize_letter(&self, l: &Letter) -> Letter {
        Letter { curve: self.normalize(&l.curve), sign: l.sign }
    }

    pub fn letters_equal(&self, a: &Letter, b: &Letter) -> bool {
        a.sign == b.sign && (a.curve == b.curve || self.normalize(&a.curve) == self.normalize(&b.curve))
    }

    pub fn words_equal(&self, a: &Word, b: &Word) -> bool {
        a.len() == b.len() && a.letters.iter().zip(&b.letters).all(|(x, y)| self.letters_equal(x, y))
    }

    /// Solves `T_unknown = (boundary product) (known product)^-1`. The known
    /// interior curves are listed in the cyclic order following the unknown.
    pub fn lantern_solve(&self, boundary: &[CurveRef], known: &[CurveRef]) -> Result<LanternSolution, RegistryError> {
        let mut b = Sp4::identity();
        for c in boundary {
            b = b.mul(&homology::transvection(&self.homology_class(c)?)?)?;
        }
        let mut k = Sp4::identity();
        for c in known {
            k = k.mul(&homology::transvection(&self.homology_class(c)?)?)?;
        }
        let residual = b.mul(&k.sym_inverse()?)?;
        match residual.transvection_direction() {
            Some(v) if homology::is_zero(&v) => Ok(LanternSolution::Separating),
            Some(v) => Ok(LanternSolution::Class(v)),
            None => Err(RegistryError::NotATransvection),
        }
    }

    fn word_image(&self, w: &Word) -> Result<Sp4, RegistryError> {
        Ok(homology::image(self, w)?)
    }

    fn chain_word(&self, names: &[&str]) -> Word {
        Word::new(names.iter().map(|n| Letter::pos(*n)).collect())
    }

    /// The hyperelliptic word built from the chain.
    pub fn tau_word(&self) -> Word {
        let c: Vec<&str> = self.chain.iter().map(String::as_str).collect();
        let mut names = c.clone();
        names.extend(c.iter().rev());
        self.chain_word(&names)
    }

    pub fn validate(&self) -> ValidationReport {
        let mut rep = ValidationReport::default();
        self.validate_curves(&mut rep);
        self.validate_presentation(&mut rep);
        self.validate_lanterns(&mut rep);
        for r in &self.relations {
            let res = self.word_image(&r.lhs).and_then(|a| Ok(a == self.word_image(&r.rhs)?));
            rep.push(format!("relation {}", r.id), res == Ok(true), err_detail(&res));
        }
        for (id, w) in &self.relators {
            let img = self.word_image(w).map(|m| m.is_identity());
            let ab = homology::ab_class(self, w).map(|a| a.value() == 0);
            rep.push(format!("relator {id}"), img == Ok(true) && ab == Ok(true), err_detail(&img));
        }
        self.validate_symbols(&mut rep);
        self.validate_coverage(&mut rep);
        rep
    }

    fn validate_curves(&self, rep: &mut ValidationReport) {
        for c in &self.curves {
            let ok = if c.separating { homology::is_zero(&c.class) } else { homology::is_primitive(&c.class) };
            let what = if c.separating { "separating, class must vanish" } else { "class must be primitive" };
            rep.push(format!("curve {}", c.name), ok, if ok { String::new() } else { what.to_string() });
            if let Some(def) = &c.def {
                let res = self
                    .homology_class(def)
                    .and_then(|v| Ok(v == c.class || v == homology::neg(&c.class)) )
                    .and_then(|same| Ok(same && self.is_separating(def)? == c.separating));
                rep.push(format!("definition {} = {}", c.name, def), res == Ok(true), err_detail(&res));
            }
        }
        for (a, b) in self.disjoint_pairs() {
            let res = (|| {
                let va = self.curve(&a)?.class;
                let vb = self.curve(&b)?.class;
                Ok::<_, RegistryError>(homology::pairing(&va, &vb)? == 0)
            })();
            rep.push(format!("disjoint {a} {b}"), res == Ok(true), err_detail(&res));
        }
    }

    fn validate_presentation(&self, rep: &mut ValidationReport) {
        let chain: Vec<&str> = self.chain.iter().map(String::as_str).collect();
        if chain.len() != 5 {
            rep.push("chain", false, format!("expected five chain curves, found {}", chain.len()));
            return;
        }
        let w = |names: &[&str]| self.chain_word(names);
        let commutes = |a: &Word, b: &Word| -> Result<bool, RegistryError> {
            Ok(self.word_image(&a.concat(b))? == self.word_image(&b.concat(a))?)
        };
        for i in 0..5 {
            for j in i + 2..5 {
                let res = commutes(&w(&[chain[i]]), &w(&[chain[j]]));
                rep.push(format!("commutation {} {}", chain[i], chain[j]), res == Ok(true), err_detail(&res));
            }
        }
        for i in 0..4 {
            let (a, b) = (chain[i], chain[i + 1]);
            let res = self.word_image(&w(&[a, b, a])).and_then(|l| Ok(l == self.word_image(&w(&[b, a, b]))?));
            rep.push(format!("braid {a} {b}"), res == Ok(true), err_detail(&res));
        }
        let tau = self.tau_word();
        let res = self.word_image(&tau.concat(&tau)).map(|m| m.is_identity());
        rep.push("tau squared", res == Ok(true), err_detail(&res));
        let res = self.word_image(&tau).map(|m| m == Sp4::neg_identity());
        rep.push("tau acts as -1", res == Ok(true), err_detail(&res));
        let five: Word = w(&chain);
        let six = Word::new(five.letters.iter().cycle().take(30).cloned().collect());
        let res = self.word_image(&six).map(|m| m.is_identity());
        rep.push("chain sixth power", res == Ok(true), err_detail(&res));
        for c in &chain {
            let res = commutes(&tau, &w(&[c]));
            rep.push(format!("tau central {c}"), res == Ok(true), err_detail(&res));
        }
        for (id, word) in self.central_words() {
            if id != "tau" {
                let ok = chain.iter().all(|c| commutes(&word, &w(&[c])) == Ok(true));
                rep.push(format!("central {id}"), ok, "");
            }
        }
    }

    fn validate_lanterns(&self, rep: &mut ValidationReport) {
        for l in &self.lanterns {
            let res = (|| {
                let lhs_flags: Vec<bool> =
                    l.lhs.letters.iter().map(|x| self.is_separating(&x.curve)).collect::<Result<_, _>>()?;
                let rhs_sep = l
                    .rhs
                    .letters
                    .iter()
                    .map(|x| self.is_separating(&x.curve))
                    .collect::<Result<Vec<_>, _>>()?
                    .into_iter()
                    .filter(|&s| s)
                    .count();
                let shape = l.lhs.len() == 4
                    && l.rhs.len() == 3
                    && l.lhs.is_positive()
                    && l.rhs.is_positive()
                    && lhs_flags.iter().all(|s| !s)
                    && rhs_sep == 1;
                let mut same = true;
                let lhs = self.word_image(&l.lhs)?;
                for v in l.rhs_variants() {
                    same &= self.word_image(&v)? == lhs;
                }
                Ok::<_, RegistryError>(shape && same)
            })();
            rep.push(format!("lantern {}", l.id), res == Ok(true), err_detail(&res));
        }
    }

    pub fn symbol_matrix(&self, id: &str) -> Result<Sp4, RegistryError> {
        let s = self.symbol(id).ok_or_else(|| RegistryError::UnknownCurve(id.to_string()))?;
        if let Some(m) = s.matrix {
            return Ok(m);
        }
        if let Some(w) = &s.expansion {
            return self.word_image(w);
        }
        let mut m = Sp4::identity();
        for p in &s.product {
            m = m.mul(&self.symbol_matrix(p)?)?;
        }
        Ok(m)
    }

    fn validate_symbols(&self, rep: &mut ValidationReport) {
        for s in &self.symbols {
            let res = (|| {
                let m = self.symbol_matrix(&s.id)?;
                let mut ok = m.is_symplectic() && m.det()? == 1;
                if let (Some(w), Some(mat)) = (&s.expansion, s.matrix) {
                    ok &= self.word_image(w)? == mat;
                }
                Ok::<_, RegistryError>(ok)
            })();
            rep.push(format!("symbol {}", s.id), res == Ok(true), err_detail(&res));
        }
        for map in &self.maps {
            for (a, b) in &map.pairs {
                let res = (|| {
                    let m = self.symbol_matrix(&map.symbol)?;
                    let va = m.apply(&self.curve(a)?.class)?;
                    let vb = self.curve(b)?.class;
                    Ok::<_, RegistryError>(va == vb || va == homology::neg(&vb))
                })();
                rep.push(format!("{} maps {a} to {b}", map.symbol), res == Ok(true), err_detail(&res));
            }
        }
    }

    /// Every curve outside the chain must be pinned down by some relation.
    fn validate_coverage(&self, rep: &mut ValidationReport) {
        let mut seen: HashSet<String> = self.chain.iter().cloned().collect();
        let mut note = |w: &Word| {
            for l in &w.letters {
                seen.insert(l.curve.base.clone());
            }
        };
        for l in &self.lanterns {
            note(&l.lhs);
            note(&l.rhs);
        }
        for r in &self.relations {
            note(&r.lhs);
            note(&r.rhs);
        }
        for (_, w) in &self.relators {
            note(w);
        }
        for c in &self.curves {
            if c.def.is_some() {
                seen.insert(c.name.clone());
            }
        }
        for m in &self.maps {
            for (a, b) in &m.pairs {
                seen.insert(a.clone());
                seen.insert(b.clone());
            }
        }
        let missing: Vec<&str> =
            self.curves.iter().map(|c| c.name.as_str()).filter(|n| !seen.contains(*n)).collect();
        rep.push("coverage", missing.is_empty(), if missing.is_empty() { String::new() } else { format!("unconstrained: {}", missing.join(" ")) });
    }
}

fn err_detail<T>(r: &Result<T, RegistryError>) -> String {
    match r {
        Err(e) => e.to_string(),
        Ok(_) => String::new(),
    }
}

fn parse_curve(name: &str, rest: &str, n: usize) -> Result<CurveDef, RegistryError> {
    if !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') || !name.starts_with(|c: char| c.is_ascii_alphabetic()) {
        return Err(syntax(n, format!("bad curve name {name:?}")));
    }
    let (flag, rest) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
    let separating = match flag {
        "sep" => true,
        "nonsep" => false,
        other => return Err(syntax(n, format!("expected sep or nonsep, found {other:?}"))),
    };
    let rest = rest.trim();
    let (h, def) = match rest.find(" def=") {
        Some(i) => (&rest[..i], Some(rest[i + 5..].trim())),
        None => (rest, None),
    };
    let h = h.trim().strip_prefix("h=").ok_or_else(|| syntax(n, "expected h=(w,x,y,z)"))?;
    let class = parse_vec(h, n)?;
    let def = match def {
        Some(d) => {
            let w = word_at(d, n)?;
            if w.len() != 1 || w.letters[0].sign != Sign::Pos {
                return Err(syntax(n, "def= must be a single curve"));
            }
            Some(w.letters[0].curve.clone())
        }
        None => None,
    };
    Ok(CurveDef { name: name.to_string(), separating, class, def })
}

fn parse_symbol(rest: &str, n: usize) -> Result<MappingClassSymbol, RegistryError> {
    let (id, body) = rest.split_once(char::is_whitespace).ok_or_else(|| syntax(n, "expected 'symbol id key=value'"))?;
    let mut s = MappingClassSymbol { id: id.to_string(), expansion: None, matrix: None, product: Vec::new() };
    let body = body.trim();
    let keys = ["word=", "matrix=", "product="];
    let mut starts: Vec<(usize, &str)> = keys.iter().filter_map(|k| body.find(k).map(|i| (i, *k))).collect();
    starts.sort();
    if starts.is_empty() {
        return Err(syntax(n, "symbol needs word=, matrix= or product="));
    }
    for (idx, &(i, k)) in starts.iter().enumerate() {
        let end = starts.get(idx + 1).map_or(body.len(), |x| x.0);
        let v = body[i + k.len()..end].trim();
        match k {
            "word=" => s.expansion = Some(word_at(v, n)?),
            "matrix=" => s.matrix = Some(parse_matrix(v, n)?),
            _ => s.product = v.split_whitespace().map(str::to_string).collect(),
        }
    }
    Ok(s)
}

impl fmt::Display for Registry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.curves {
            write!(f, "{} {} h={}", c.name, if c.separating { "sep" } else { "nonsep" }, fmt_vec(&c.class))?;
            if let Some(d) = &c.def {
                write!(f, " def={d}")?;
            }
            writeln!(f)?;
        }
        if !self.chain.is_empty() {
            writeln!(f, "chain {}", self.chain.join(" "))?;
        }
        let mut by_first: Vec<(String, Vec<String>)> = Vec::new();
        for (a, b) in self.disjoint_pairs() {
            match by_first.iter_mut().find(|(x, _)| *x == a) {
                Some((_, v)) => v.push(b),
                None => by_first.push((a, vec![b])),
            }
        }
        for (a, bs) in by_first {
            writeln!(f, "disjoint {a}: {}", bs.join(" "))?;
        }
        for l in &self.lanterns {
            writeln!(f, "{}: {} = {}", l.id, l.lhs, l.rhs)?;
        }
        for c in &self.central {
            writeln!(f, "central {c}")?;
        }
        for r in &self.relations {
            writeln!(f, "relation {}: {} = {}", r.id, r.lhs, r.rhs)?;
        }
        for (id, w) in &self.relators {
            writeln!(f, "relator {id} = {w}")?;
        }
        for s in &self.symbols {
            write!(f, "symbol {}", s.id)?;
            if let Some(w) = &s.expansion {
                write!(f, " word={w}")?;
            }
            if let Some(m) = &s.matrix {
                write!(f, " matrix={}", fmt_matrix(m))?;
            }
            if !s.product.is_empty() {
                write!(f, " product={}", s.product.join(" "))?;
            }
            writeln!(f)?;
        }
        for m in &self.maps {
            let pairs: Vec<String> = m.pairs.iter().map(|(a, b)| format!("{a} -> {b}")).collect();
            writeln!(f, "maps {}: {}", m.symbol, pairs.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cr(name: &str) -> CurveRef {
        CurveRef::named(name)
    }

    #[test]
    fn standard_registry_validates() {
        let reg = Registry::standard();
        let rep = reg.validate();
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn base_classes() {
        let reg = Registry::standard();
        assert_eq!(reg.homology_class(&cr("c1")).unwrap(), [1, 0, 0, 0]);
        assert_eq!(reg.homology_class(&cr("d")).unwrap(), [0, 0, 0, 0]);
        assert!(matches!(reg.homology_class(&cr("q")), Err(RegistryError::UnknownCurve(_))));
    }

    #[test]
    fn conjugate_class_is_image_of_inner_class() {
        let reg = Registry::standard();
        let c = CurveRef::conjugate(vec![Gen::new("c5", Sign::Pos)], "c4");
        let t5 = homology::transvection(&[0, 0, 1, 0]).unwrap();
        assert_eq!(reg.homology_class(&c).unwrap(), t5.apply(&[0, 0, 0, 1]).unwrap());
    }

    #[test]
    fn lantern_solve_recovers_x_and_delta() {
        let reg = Registry::standard();
        let b = [cr("c1"), cr("c1"), cr("c5"), cr("c5")];
        match reg.lantern_solve(&b, &[cr("c3"), cr("d")]).unwrap() {
            LanternSolution::Class(v) => assert!(v == [1, 0, 1, 0] || v == [-1, 0, -1, 0]),
            s => panic!("{s:?}"),
        }
        assert_eq!(reg.lantern_solve(&b, &[cr("x"), cr("c3")]).unwrap(), LanternSolution::Separating);
        let b2 = [cr("c1"), cr("c1"), cr("c3"), cr("c3")];
        match reg.lantern_solve(&b2, &[cr("hb"), cr("c5")]).unwrap() {
            LanternSolution::Class(v) => assert!(v == [2, 0, -1, 0] || v == [-2, 0, 1, 0]),
            s => panic!("{s:?}"),
        }
        assert_eq!(reg.lantern_solve(&b, &[cr("c2")]), Err(RegistryError::NotATransvection));
    }

    #[test]
    fn corrupting_x_breaks_its_lantern() {
        let mut reg = Registry::standard();
        reg.curve_mut("x").unwrap().class = [1, 1, 1, 0];
        let rep = reg.validate();
        assert!(!rep.get("lantern L1").unwrap().passed);
    }

    #[test]
    fn separating_flag_must_match_class() {
        let mut reg = Registry::standard();
        reg.curve_mut("d").unwrap().separating = false;
        assert!(!reg.validate().get("curve d").unwrap().passed);
    }

    #[test]
    fn missing_lantern_breaks_coverage() {
        let mut reg = Registry::standard();
        reg.remove_lantern("L3");
        let rep = reg.validate();
        assert!(!rep.get("coverage").unwrap().passed);
    }

    #[test]
    fn normal_form_unfolds_definitions() {
        let reg = Registry::standard();
        let b2 = reg.normalize(&cr("B2"));
        assert_eq!(b2, CurveRef::conjugate(vec![Gen::new("c3", Sign::Neg)], "x"));
        let stripped = reg.normalize(&CurveRef::conjugate(vec![Gen::new("c2", Sign::Pos), Gen::new("c5", Sign::Pos)], "c4"));
        assert_eq!(stripped, CurveRef::conjugate(vec![Gen::new("c5", Sign::Pos)], "c4"));
        let trivial = reg.normalize(&CurveRef::conjugate(vec![Gen::new("c1", Sign::Pos)], "c4"));
        assert_eq!(trivial, cr("c4"));
        let sorted = reg.normalize(&CurveRef::conjugate(vec![Gen::new("c3", Sign::Pos), Gen::new("c1", Sign::Pos)], "c2"));
        assert_eq!(sorted.conj[0].name, "c1");
    }

    #[test]
    fn text_round_trip() {
        let reg = Registry::standard();
        let again = Registry::parse(&reg.to_string()).unwrap();
        assert_eq!(again.to_string(), reg.to_string());
        assert!(again.validate().passed());
    }

    #[test]
    fn syntax_errors() {
        assert!(matches!(Registry::parse("c1 maybe h=(1,0,0,0)"), Err(RegistryError::Syntax { line: 1, .. })));
        assert!(Registry::parse("c1 nonsep h=(1,0,0)").is_err());
        assert!(Registry::parse("c1 nonsep h=(1,0,0,0)\ndisjoint c1: q").is_err());
        assert!(Registry::parse("c1 nonsep h=(1,0,0,0)\nL1: c1 = q").is_err());
    }

    #[test]
    fn conjugated_lantern_instances_hold() {
        let reg = Registry::standard();
        let by = vec![Gen::new("c2", Sign::Pos), Gen::new("c4", Sign::Neg)];
        for l in &reg.lanterns {
            let a = homology::image(&reg, &l.lhs.conjugate_letters(&by)).unwrap();
            let b = homology::image(&reg, &l.rhs.conjugate_letters(&by)).unwrap();
            assert_eq!(a, b, "{}", l.id);
        }
    }
}
