//! Action of twist words on the genus-2 surface group
//! `<a1, b1, a2, b2 | [a1,b1][a2,b2]>`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::homology::Sp4;
use crate::registry::Registry;
use crate::word::{Gen, Letter, Sign, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Pi1Error {
    #[error("no surface group automorphism registered for {0}")]
    MissingAutomorphism(String),
}

type Result<T> = std::result::Result<T, Pi1Error>;

/// Generators are `1..=4` for a1, b1, a2, b2; negatives are inverses.
pub const RELATOR: [i8; 8] = [1, 2, -1, -2, 3, 4, -3, -4];

const NAMES: [&str; 4] = ["a1", "b1", "a2", "b2"];

fn inv(w: &[i8]) -> Vec<i8> {
    w.iter().rev().map(|x| -x).collect()
}

fn free(w: impl IntoIterator<Item = i8>) -> Vec<i8> {
    let mut out: Vec<i8> = Vec::new();
    for x in w {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

fn relator_rotations() -> Vec<Vec<i8>> {
    let mut out = Vec::new();
    for r in [RELATOR.to_vec(), inv(&RELATOR)] {
        for k in 0..r.len() {
            let mut c = r[k..].to_vec();
            c.extend_from_slice(&r[..k]);
            out.push(c);
        }
    }
    out
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SurfaceGroupElement(Vec<i8>);

impl SurfaceGroupElement {
    pub fn identity() -> Self {
        SurfaceGroupElement(Vec::new())
    }

    pub fn generator(g: i8) -> Self {
        assert!((1..=4).contains(&g.abs()), "generator out of range");
        SurfaceGroupElement(vec![g])
    }

    /// Freely reduces `letters`.
    pub fn new(letters: Vec<i8>) -> Self {
        assert!(letters.iter().all(|g| (1..=4).contains(&g.abs())), "generator out of range");
        SurfaceGroupElement(free(letters))
    }

    pub fn letters(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        SurfaceGroupElement(inv(&self.0))
    }

    pub fn mul(&self, o: &Self) -> Self {
        SurfaceGroupElement(free(self.0.iter().chain(&o.0).copied()))
    }

    pub fn abelianize(&self) -> [i64; 4] {
        let mut v = [0; 4];
        for &x in &self.0 {
            v[x.unsigned_abs() as usize - 1] += x.signum() as i64;
        }
        v
    }

    fn cyclically_reduced(&self) -> Vec<i8> {
        let mut w = self.0.clone();
        while w.len() > 1 && w[0] == -w[w.len() - 1] {
            w = w[1..w.len() - 1].to_vec();
        }
        w
    }

    /// Conjugate in the free group to the defining relator or its inverse.
    pub fn is_free_conjugate_of_relator(&self) -> bool {
        let w = self.cyclically_reduced();
        relator_rotations().contains(&w)
    }
}

impl fmt::Display for SurfaceGroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, &x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(NAMES[x.unsigned_abs() as usize - 1])?;
            if x < 0 {
                f.write_str("^-1")?;
            }
        }
        Ok(())
    }
}

/// Replaces pieces longer than half a relator rotation by the shorter
/// complement, freely reducing, until nothing applies.
pub fn dehn_reduce(g: &SurfaceGroupElement) -> SurfaceGroupElement {
    let rots = relator_rotations();
    let mut w = free(g.0.iter().copied());
    'outer: loop {
        for len in (5..=8).rev() {
            if w.len() < len {
                continue;
            }
            for i in 0..=w.len() - len {
                if let Some(c) = rots.iter().find(|c| c[..len] == w[i..i + len]) {
                    let mut next = w[..i].to_vec();
                    next.extend(inv(&c[len..]));
                    next.extend_from_slice(&w[i + len..]);
                    w = free(next);
                    continue 'outer;
                }
            }
        }
        return SurfaceGroupElement(w);
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TwistAutomorphism {
    images: [SurfaceGroupElement; 4],
}

impl TwistAutomorphism {
    pub fn identity() -> Self {
        TwistAutomorphism { images: [1, 2, 3, 4].map(SurfaceGroupElement::generator) }
    }

    pub fn from_images(images: [Vec<i8>; 4]) -> Self {
        TwistAutomorphism { images: images.map(SurfaceGroupElement::new) }
    }

    pub fn image(&self, g: i8) -> &SurfaceGroupElement {
        &self.images[g.unsigned_abs() as usize - 1]
    }

    pub fn images(&self) -> &[SurfaceGroupElement; 4] {
        &self.images
    }

    fn substitute(&self, g: &SurfaceGroupElement) -> Vec<i8> {
        let mut out = Vec::new();
        for &x in g.letters() {
            let im = self.image(x).letters();
            if x > 0 {
                out.extend_from_slice(im);
            } else {
                out.extend(inv(im));
            }
        }
        out
    }

    pub fn apply(&self, g: &SurfaceGroupElement) -> SurfaceGroupElement {
        dehn_reduce(&SurfaceGroupElement(self.substitute(g)))
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &Self) -> Self {
        TwistAutomorphism { images: other.images.clone().map(|g| self.apply(&g)) }
    }

    /// Image of the defining relator is a conjugate of it in the free group.
    pub fn preserves_relator(&self) -> bool {
        let r = SurfaceGroupElement(RELATOR.to_vec());
        SurfaceGroupElement::new(self.substitute(&r)).is_free_conjugate_of_relator()
    }

    /// Columns are the abelianized images of the generators.
    fn abelian_matrix(&self) -> Sp4 {
        let mut m = [[0; 4]; 4];
        for (j, g) in self.images.iter().enumerate() {
            for (i, x) in g.abelianize().into_iter().enumerate() {
                m[i][j] = x;
            }
        }
        Sp4(m)
    }

    /// A `y` of length at most `bound` with `y x y^-1 = self(x)` for all generators.
    pub fn find_inner(&self, bound: usize) -> Option<SurfaceGroupElement> {
        let mut cands: BTreeSet<(usize, Vec<i8>)> = BTreeSet::new();
        for im in &self.images {
            for i in 0..=im.len().min(bound) {
                let p = &im.letters()[..i];
                for h in 1..=4i8 {
                    for k in -2i32..=2 {
                        let mut y = p.to_vec();
                        y.extend(std::iter::repeat(if k > 0 { h } else { -h }).take(k.unsigned_abs() as usize));
                        let y = free(y);
                        if y.len() <= bound {
                            cands.insert((y.len(), y));
                        }
                    }
                }
            }
        }
        let mut frontier: Vec<Vec<i8>> = vec![Vec::new()];
        for _ in 0..bound.min(3) {
            let mut next = Vec::new();
            for w in &frontier {
                for g in [1, -1, 2, -2, 3, -3, 4, -4] {
                    if w.last() != Some(&-g) {
                        let mut nw = w.clone();
                        nw.push(g);
                        next.push(nw);
                    }
                }
            }
            for w in &next {
                cands.insert((w.len(), w.clone()));
            }
            frontier = next;
        }
        cands.insert((0, Vec::new()));
        cands.into_iter().map(|(_, y)| SurfaceGroupElement(y)).find(|y| {
            (1..=4).all(|g| {
                let lhs = y.mul(&SurfaceGroupElement::generator(g)).mul(&y.inverse());
                dehn_reduce(&lhs.mul(&self.image(g).inverse())).is_empty()
            })
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Equal(SurfaceGroupElement),
    Distinguished,
    Inconclusive,
}

/// Automorphisms for the chain twists, plus whatever the registry lets us
/// express through them.
pub struct Pi1Model<'a> {
    reg: &'a Registry,
    table: HashMap<String, (TwistAutomorphism, TwistAutomorphism)>,
}

const S: Sp4 = Sp4([[-1, 0, 0, 0], [0, -1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]);

fn chain_table() -> [([Vec<i8>; 4], [Vec<i8>; 4]); 5] {
    [
        ([vec![1], vec![2, -1], vec![3], vec![4]], [vec![1], vec![2, 1], vec![3], vec![4]]),
        ([vec![1, 2], vec![2], vec![3], vec![4]], [vec![1, -2], vec![2], vec![3], vec![4]]),
        ([vec![1], vec![-1, -3, 2], vec![3], vec![-3, -1, 4]], [vec![1], vec![3, 1, 2], vec![3], vec![1, 3, 4]]),
        ([vec![1], vec![2], vec![3, 4], vec![4]], [vec![1], vec![2], vec![3, -4], vec![4]]),
        ([vec![1], vec![2], vec![3], vec![4, -3]], [vec![1], vec![2], vec![3], vec![4, 3]]),
    ]
}

impl<'a> Pi1Model<'a> {
    /// Registers the five chain twists in the registry's chain order.
    pub fn new(reg: &'a Registry) -> Self {
        let mut table = HashMap::new();
        for (name, (a, b)) in reg.chain.iter().zip(chain_table()) {
            table.insert(name.clone(), (TwistAutomorphism::from_images(a), TwistAutomorphism::from_images(b)));
        }
        Pi1Model { reg, table }
    }

    pub fn registered(&self) -> impl Iterator<Item = (&String, &TwistAutomorphism)> {
        self.table.iter().map(|(k, (a, _))| (k, a))
    }

    fn gen_action(&self, g: &Gen, depth: usize) -> Result<TwistAutomorphism> {
        if let Some((a, b)) = self.table.get(&g.name) {
            return Ok(if g.sign == Sign::Pos { a.clone() } else { b.clone() });
        }
        let missing = || Pi1Error::MissingAutomorphism(g.name.clone());
        if depth > 4 {
            return Err(missing());
        }
        let expansion = if let Some(rel) =
            self.reg.relations.iter().find(|r| r.lhs.len() == 1 && r.lhs.letters[0] == Letter::pos(g.name.clone()))
        {
            rel.rhs.clone()
        } else if let Some(def) = self.reg.curve(&g.name).ok().and_then(|c| c.def.clone()) {
            Word::new(vec![Letter::new(def, Sign::Pos)])
        } else {
            return Err(missing());
        };
        let w = if g.sign == Sign::Pos { expansion } else { expansion.invert() };
        self.word_action(&w, depth + 1)
    }

    fn word_action(&self, w: &Word, depth: usize) -> Result<TwistAutomorphism> {
        let mut phi = TwistAutomorphism::identity();
        for l in &w.letters {
            for g in l.to_gens() {
                phi = phi.compose(&self.gen_action(&g, depth)?);
            }
        }
        Ok(phi)
    }

    /// `phi_1 . phi_2 ... phi_k` for the letters of `w`, read left to right.
    pub fn action(&self, w: &Word) -> Result<TwistAutomorphism> {
        self.word_action(w, 0)
    }

    pub fn apply_word(&self, w: &Word, g: &SurfaceGroupElement) -> Result<SurfaceGroupElement> {
        Ok(self.action(w)?.apply(g))
    }

    /// The induced map on homology, in the same basis and sign conventions
    /// as the symplectic image.
    pub fn abelianized(&self, w: &Word) -> Result<Sp4> {
        let a = self.action(w)?.abelian_matrix();
        Ok(S.mul(&a).and_then(|m| m.mul(&S)).expect("small entries"))
    }

    pub fn equal_up_to_inner(&self, u: &Word, v: &Word, bound: usize) -> Result<Verdict> {
        if self.abelianized(u)? != self.abelianized(v)? {
            return Ok(Verdict::Distinguished);
        }
        let chi = self.action(&u.concat(&v.invert()))?;
        Ok(match chi.find_inner(bound) {
            Some(y) => Verdict::Equal(y),
            None => Verdict::Inconclusive,
        })
    }

    /// Whether `w` acts as an inner automorphism, within the search bound.
    pub fn is_inner(&self, w: &Word, bound: usize) -> Result<bool> {
        Ok(self.action(w)?.find_inner(bound).is_some())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_word;
    use crate::homology;

    fn sge(v: &[i8]) -> SurfaceGroupElement {
        SurfaceGroupElement::new(v.to_vec())
    }

    #[test]
    fn dehn_examples() {
        assert!(dehn_reduce(&sge(&RELATOR)).is_empty());
        assert!(dehn_reduce(&sge(&[1, -1])).is_empty());
        assert_eq!(dehn_reduce(&sge(&[1, 2])), sge(&[1, 2]));
        assert!(dehn_reduce(&sge(&[2, 3, 4, -3, -4, 1, 2, -1, -2, -2])).is_empty());
        assert_eq!(dehn_reduce(&sge(&[1, 2, -1, -2, 3])), sge(&[4, 3, -4]));
    }

    #[test]
    fn chain_automorphisms_preserve_relator() {
        let reg = Registry::standard();
        let m = Pi1Model::new(&reg);
        for (a, b) in m.table.values() {
            assert!(a.preserves_relator() && b.preserves_relator());
            assert_eq!(a.compose(b), TwistAutomorphism::identity());
        }
    }

    #[test]
    fn verdicts() {
        let reg = Registry::standard();
        let m = Pi1Model::new(&reg);
        let c1 = parse_word("c1").unwrap();
        assert_eq!(m.equal_up_to_inner(&c1, &c1, 12).unwrap(), Verdict::Equal(SurfaceGroupElement::identity()));
        assert_eq!(m.equal_up_to_inner(&c1, &parse_word("c2").unwrap(), 12).unwrap(), Verdict::Distinguished);
        let chain6 = parse_word("(c1 c2 c3 c4 c5)^6").unwrap();
        assert!(matches!(m.equal_up_to_inner(&chain6, &Word::empty(), 12).unwrap(), Verdict::Equal(_)));
        assert!(matches!(m.action(&parse_word("x").unwrap()), Err(Pi1Error::MissingAutomorphism(_))));
    }

    #[test]
    fn tau_abelianizes_to_minus_identity() {
        let reg = Registry::standard();
        let m = Pi1Model::new(&reg);
        let tau = reg.tau_word();
        assert_eq!(m.abelianized(&tau).unwrap(), Sp4::neg_identity());
        assert_eq!(m.abelianized(&tau).unwrap(), homology::image(&reg, &tau).unwrap());
    }

    #[test]
    fn separating_twist_from_chain() {
        let reg = Registry::standard();
        let m = Pi1Model::new(&reg);
        let d = parse_word("d").unwrap();
        assert!(m.abelianized(&d).unwrap().is_identity());
        assert!(m.equal_up_to_inner(&d, &parse_word("(c1 c2)^6").unwrap(), 12).unwrap() != Verdict::Distinguished);
    }
}
