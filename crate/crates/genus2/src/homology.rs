//! The symplectic representation on first homology, basis a1, b1, a2, b2.

use std::fmt;

use thiserror::Error;

use crate::registry::{Registry, RegistryError};
use crate::word::{Gen, Letter, PositiveRelator, Sign, Word};

pub type Vec4 = [i64; 4];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomologyError {
    #[error("integer overflow in homology arithmetic")]
    Overflow,
    #[error(transparent)]
    Registry(#[from] RegistryError),
}

type Result<T> = std::result::Result<T, HomologyError>;

fn add(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b).ok_or(HomologyError::Overflow)
}

fn mul(a: i64, b: i64) -> Result<i64> {
    a.checked_mul(b).ok_or(HomologyError::Overflow)
}

/// Intersection pairing with `<a_i, b_i> = 1`.
pub fn pairing(x: &Vec4, y: &Vec4) -> Result<i64> {
    let p = add(mul(x[0], y[1])?, -mul(x[1], y[0])?)?;
    add(p, add(mul(x[2], y[3])?, -mul(x[3], y[2])?)?)
}

pub fn is_zero(v: &Vec4) -> bool {
    v.iter().all(|&x| x == 0)
}

pub fn is_primitive(v: &Vec4) -> bool {
    v.iter().fold(0, |g, &x| num_gcd(g, x)) == 1
}

pub fn neg(v: &Vec4) -> Vec4 {
    v.map(|x| -x)
}

/// A 4x4 integer matrix acting on column vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Sp4(pub [[i64; 4]; 4]);

pub const J: Sp4 = Sp4([[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]]);

impl Sp4 {
    pub fn identity() -> Sp4 {
        let mut m = [[0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1;
        }
        Sp4(m)
    }

    pub fn neg_identity() -> Sp4 {
        Sp4::identity().scale(-1)
    }

    fn scale(&self, k: i64) -> Sp4 {
        Sp4(self.0.map(|row| row.map(|x| x * k)))
    }

    pub fn is_identity(&self) -> bool {
        *self == Sp4::identity()
    }

    pub fn transpose(&self) -> Sp4 {
        let mut m = [[0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = self.0[j][i];
            }
        }
        Sp4(m)
    }

    pub fn mul(&self, o: &Sp4) -> Result<Sp4> {
        let mut m = [[0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                let mut s = 0i64;
                for k in 0..4 {
                    s = add(s, mul(self.0[i][k], o.0[k][j])?)?;
                }
                *x = s;
            }
        }
        Ok(Sp4(m))
    }

    pub fn apply(&self, v: &Vec4) -> Result<Vec4> {
        let mut out = [0; 4];
        for (i, x) in out.iter_mut().enumerate() {
            for (k, vk) in v.iter().enumerate() {
                *x = add(*x, mul(self.0[i][k], *vk)?)?;
            }
        }
        Ok(out)
    }

    /// `-J M^T J`, the inverse of a symplectic matrix.
    pub fn sym_inverse(&self) -> Result<Sp4> {
        Ok(J.mul(&self.transpose())?.mul(&J)?.scale(-1))
    }

    pub fn is_symplectic(&self) -> bool {
        matches!(self.transpose().mul(&J).and_then(|m| m.mul(self)), Ok(m) if m == J)
    }

    pub fn det(&self) -> Result<i64> {
        fn minor(m: &[[i64; 4]; 4], rows: &[usize], cols: &[usize]) -> Result<i64> {
            if rows.len() == 1 {
                return Ok(m[rows[0]][cols[0]]);
            }
            let mut total = 0i64;
            for (k, &c) in cols.iter().enumerate() {
                let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                let sub = mul(m[rows[0]][c], minor(m, &rows[1..], &rest)?)?;
                total = if k % 2 == 0 { add(total, sub)? } else { add(total, -sub)? };
            }
            Ok(total)
        }
        minor(&self.0, &[0, 1, 2, 3], &[0, 1, 2, 3])
    }

    pub fn pow(&self, k: i64) -> Result<Sp4> {
        let base = if k < 0 { self.sym_inverse()? } else { *self };
        let mut out = Sp4::identity();
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base)?;
        }
        Ok(out)
    }

    /// The direction `v` with `self = transvection(v)`, when `self` has that
    /// shape. The identity yields the zero vector.
    pub fn transvection_direction(&self) -> Option<Vec4> {
        if self.is_identity() {
            return Some([0; 4]);
        }
        // every nonzero column of M - I is a multiple of v
        let d = self.sub_identity();
        let col = (0..4).find(|&j| (0..4).any(|i| d[i][j] != 0))?;
        let c: Vec4 = [d[0][col], d[1][col], d[2][col], d[3][col]];
        let g = c.iter().fold(0i64, |g, &x| num_gcd(g, x));
        let prim = c.map(|x| x / g);
        for k in 1..=g.abs() {
            for s in [1, -1] {
                let v = prim.map(|x| x * k * s);
                if matches!(transvection(&v), Ok(t) if t == *self) {
                    return Some(v);
                }
            }
        }
        None
    }

    fn sub_identity(&self) -> [[i64; 4]; 4] {
        let mut d = self.0;
        for (i, row) in d.iter_mut().enumerate() {
            row[i] -= 1;
        }
        d
    }
}

fn num_gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        num_gcd(b, a % b)
    }
}

impl fmt::Display for Sp4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{:>4} {:>4} {:>4} {:>4}", row[0], row[1], row[2], row[3])?;
        }
        Ok(())
    }
}

/// `x -> x + <x,v> v`.
pub fn transvection(v: &Vec4) -> Result<Sp4> {
    let mut m = [[0; 4]; 4];
    for j in 0..4 {
        let mut e = [0; 4];
        e[j] = 1;
        let c = pairing(&e, v)?;
        for i in 0..4 {
            m[i][j] = add(e[i], mul(c, v[i])?)?;
        }
    }
    Ok(Sp4(m))
}

pub fn twist_matrix(v: &Vec4, sign: Sign) -> Result<Sp4> {
    match sign {
        Sign::Pos => transvection(v),
        Sign::Neg => transvection(v)?.sym_inverse(),
    }
}

pub fn gens_image(reg: &Registry, gens: &[Gen]) -> Result<Sp4> {
    let mut m = Sp4::identity();
    for g in gens {
        let v = reg.homology_class(&crate::word::CurveRef::named(g.name.clone()))?;
        m = m.mul(&twist_matrix(&v, g.sign)?)?;
    }
    Ok(m)
}

pub fn letter_image(reg: &Registry, l: &Letter) -> Result<Sp4> {
    twist_matrix(&reg.homology_class(&l.curve)?, l.sign)
}

/// Ordered product `M(l1) M(l2) ... M(lk)`.
pub fn image(reg: &Registry, w: &Word) -> Result<Sp4> {
    let mut m = Sp4::identity();
    for l in &w.letters {
        m = m.mul(&letter_image(reg, l)?)?;
    }
    Ok(m)
}

/// Class in the abelianization Z/10 of the mapping class group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AbClass(u8);

impl AbClass {
    pub fn new(v: i64) -> AbClass {
        AbClass(v.rem_euclid(10) as u8)
    }

    pub fn value(self) -> u8 {
        self.0
    }
}

impl fmt::Display for AbClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Nonseparating twists count 1 and separating twists count 2.
pub fn ab_class(reg: &Registry, w: &Word) -> std::result::Result<AbClass, RegistryError> {
    let mut total = 0i64;
    for l in &w.letters {
        let weight = if reg.is_separating(&l.curve)? { 2 } else { 1 };
        total += weight * l.sign.as_i64();
    }
    Ok(AbClass::new(total))
}

pub fn relator_ab_class(reg: &Registry, r: &PositiveRelator) -> std::result::Result<AbClass, RegistryError> {
    ab_class(reg, &r.word)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transvection_of_zero_is_identity() {
        assert!(transvection(&[0; 4]).unwrap().is_identity());
    }

    #[test]
    fn transvection_along_a1() {
        let t = transvection(&[1, 0, 0, 0]).unwrap();
        assert_eq!(t.apply(&[1, 0, 0, 0]).unwrap(), [1, 0, 0, 0]);
        assert_eq!(t.apply(&[0, 1, 0, 0]).unwrap(), [-1, 1, 0, 0]);
        assert_eq!(t.apply(&[0, 0, 1, 0]).unwrap(), [0, 0, 1, 0]);
        assert_eq!(t.apply(&[0, 0, 0, 1]).unwrap(), [0, 0, 0, 1]);
    }

    #[test]
    fn transvection_ignores_sign_of_direction() {
        let v = [1, -2, 0, 1];
        assert_eq!(transvection(&v).unwrap(), transvection(&neg(&v)).unwrap());
    }

    #[test]
    fn inverse_and_det() {
        let t = transvection(&[1, 1, 0, 2]).unwrap();
        assert!(t.is_symplectic());
        assert_eq!(t.det().unwrap(), 1);
        assert!(t.mul(&t.sym_inverse().unwrap()).unwrap().is_identity());
        assert!(t.pow(3).unwrap().mul(&t.pow(-3).unwrap()).unwrap().is_identity());
    }

    #[test]
    fn recovers_transvection_direction() {
        for v in [[1, 0, 1, 0], [2, 0, -1, 0], [1, -2, 0, -1]] {
            let d = transvection(&v).unwrap().transvection_direction().unwrap();
            assert!(d == v || d == neg(&v));
        }
        let t = transvection(&[1, 0, 0, 0]).unwrap();
        let u = transvection(&[0, 1, 0, 0]).unwrap();
        assert_eq!(t.mul(&u).unwrap().transvection_direction(), None);
        assert_eq!(t.pow(2).unwrap().transvection_direction(), None);
    }

    #[test]
    fn ab_class_wraps() {
        assert_eq!(AbClass::new(30).value(), 0);
        assert_eq!(AbClass::new(-1).value(), 9);
    }
}
