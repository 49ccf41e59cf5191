//! The GSp4 root datum: characters, cocharacters, the finite Weyl group and
//! the depth/genericity predicates.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, invariant, Result};

/// A character (a,b;c) of the diagonal torus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[i64; 3]", into = "[i64; 3]")]
pub struct Weight {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

/// A cocharacter (a,b;c); see [`std_coweight`] for the matrix it names.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[i64; 3]", into = "[i64; 3]")]
pub struct Coweight {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

macro_rules! lattice_ops {
    ($t:ident) => {
        impl $t {
            pub const ZERO: $t = $t { a: 0, b: 0, c: 0 };

            pub const fn new(a: i64, b: i64, c: i64) -> Self {
                $t { a, b, c }
            }

            pub fn to_array(self) -> [i64; 3] {
                [self.a, self.b, self.c]
            }
        }

        impl From<[i64; 3]> for $t {
            fn from(v: [i64; 3]) -> Self {
                $t::new(v[0], v[1], v[2])
            }
        }

        impl From<$t> for [i64; 3] {
            fn from(w: $t) -> Self {
                w.to_array()
            }
        }

        impl Add for $t {
            type Output = $t;
            fn add(self, o: $t) -> $t {
                $t::new(self.a + o.a, self.b + o.b, self.c + o.c)
            }
        }

        impl Sub for $t {
            type Output = $t;
            fn sub(self, o: $t) -> $t {
                $t::new(self.a - o.a, self.b - o.b, self.c - o.c)
            }
        }

        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                $t::new(-self.a, -self.b, -self.c)
            }
        }

        impl Mul<$t> for i64 {
            type Output = $t;
            fn mul(self, w: $t) -> $t {
                $t::new(self * w.a, self * w.b, self * w.c)
            }
        }

        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "({},{};{})", self.a, self.b, self.c)
            }
        }
    };
}

lattice_ops!(Weight);
lattice_ops!(Coweight);

/// η = (2,1;0).
pub const ETA: Weight = Weight::new(2, 1, 0);

pub const POSITIVE_ROOTS: [Weight; 4] =
    [Weight::new(1, -1, 0), Weight::new(0, 2, -1), Weight::new(1, 1, -1), Weight::new(2, 0, -1)];

pub const POSITIVE_COROOTS: [Coweight; 4] =
    [Coweight::new(1, -1, 0), Coweight::new(0, 1, 0), Coweight::new(1, 1, 0), Coweight::new(1, 0, 0)];

/// Indices of the simple roots inside [`POSITIVE_ROOTS`].
pub const SIMPLE: [usize; 2] = [0, 1];

pub fn pairing(l: Weight, m: Coweight) -> i64 {
    l.a * m.a + l.b * m.b + l.c * m.c
}

/// Diagonal exponents (a, b, c−b, c−a) of the cocharacter (a,b;c).
pub fn std_coweight(m: Coweight) -> [i64; 4] {
    [m.a, m.b, m.c - m.b, m.c - m.a]
}

/// 𝒯(a,b;c) = (a+b+c, a+c, b+c, c): a character read as a cocharacter of the dual torus.
pub fn tcal(l: Weight) -> [i64; 4] {
    [l.a + l.b + l.c, l.a + l.c, l.b + l.c, l.c]
}

/// Inverse of [`tcal`] on 4-tuples with e0 + e3 = e1 + e2.
pub fn tcal_inverse(e: [i64; 4]) -> Option<Weight> {
    if e[0] + e[3] != e[1] + e[2] {
        return None;
    }
    Some(Weight::new(e[1] - e[3], e[2] - e[3], e[3]))
}

/// The class map X*(T) → ℤ whose kernel is the root lattice.
pub fn class_of(l: Weight) -> i64 {
    l.a + l.b + 2 * l.c
}

pub fn is_dominant(l: Weight) -> bool {
    SIMPLE.iter().all(|&i| pairing(l, POSITIVE_COROOTS[i]) >= 0)
}

pub fn is_p_restricted(l: Weight, p: i64) -> bool {
    SIMPLE.iter().all(|&i| (0..p).contains(&pairing(l, POSITIVE_COROOTS[i])))
}

/// Largest m with λ m-deep in its p-alcove, or None when λ+η lies on a wall.
pub fn depth(l: Weight, p: i64) -> Option<i64> {
    let s = l + ETA;
    let mut best = i64::MAX;
    for cr in POSITIVE_COROOTS {
        let r = pairing(s, cr).rem_euclid(p);
        if r == 0 {
            return None;
        }
        best = best.min(r.min(p - r) - 1);
    }
    Some(best)
}

pub fn is_m_deep(l: Weight, m: i64, p: i64) -> Result<bool> {
    if m < 0 {
        return invalid(format!("depth must be nonnegative, got {m}"));
    }
    let s = l + ETA;
    Ok(POSITIVE_COROOTS.iter().all(|&cr| {
        let v = pairing(s, cr);
        let ma = v.div_euclid(p);
        p * ma + m < v && v < p * (ma + 1) - m
    }))
}

pub fn is_m_generic(l: Weight, m: i64, p: i64) -> Result<bool> {
    if m < 0 {
        return invalid(format!("genericity must be nonnegative, got {m}"));
    }
    // ±α give the same condition; only the two multiples of p nearest ⟨λ,α∨⟩ matter.
    Ok(POSITIVE_COROOTS.iter().all(|&cr| {
        let x = pairing(l, cr);
        let k = x.div_euclid(p);
        [k, k + 1].iter().all(|&j| m < (x - p * j).abs())
    }))
}

type Mat3 = [[i64; 3]; 3];

fn mat_mul(x: &Mat3, y: &Mat3) -> Mat3 {
    let mut r = [[0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            r[i][j] = (0..3).map(|k| x[i][k] * y[k][j]).sum();
        }
    }
    r
}

fn mat_apply(m: &Mat3, v: [i64; 3]) -> [i64; 3] {
    let mut r = [0; 3];
    for (i, row) in m.iter().enumerate() {
        r[i] = (0..3).map(|k| row[k] * v[k]).sum();
    }
    r
}

const ID3: Mat3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
// s1:(a,b;c)↦(b,a;c), s2:(a,b;c)↦(a,−b;b+c) on characters.
const S1_CHAR: Mat3 = [[0, 1, 0], [1, 0, 0], [0, 0, 1]];
const S2_CHAR: Mat3 = [[1, 0, 0], [0, -1, 0], [0, 1, 1]];
// Contragredient on cocharacters: s2:(d,e;f)↦(d,f−e;f).
const S1_COCHAR: Mat3 = [[0, 1, 0], [1, 0, 0], [0, 0, 1]];
const S2_COCHAR: Mat3 = [[1, 0, 0], [0, -1, 1], [0, 0, 1]];

const WORDS: [&str; 8] = ["", "s1", "s2", "s1s2", "s2s1", "s1s2s1", "s2s1s2", "s1s2s1s2"];

/// Signed permutation matrices of the dual group, columns as images of e1..e4.
/// Under the duality the generator labels swap: s1 acts like e2↦−e3, e3↦e2
/// and s2 swaps e1↔e2, e3↔e4.
type Mat4 = [[i64; 4]; 4];
const S1_DUAL: Mat4 = [[1, 0, 0, 0], [0, 0, 1, 0], [0, -1, 0, 0], [0, 0, 0, 1]];
const S2_DUAL: Mat4 = [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]];

fn mat4_mul(x: &Mat4, y: &Mat4) -> Mat4 {
    let mut r = [[0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            r[i][j] = (0..4).map(|k| x[i][k] * y[k][j]).sum();
        }
    }
    r
}

struct Table {
    chars: [Mat3; 8],
    cochars: [Mat3; 8],
    dual: [Mat4; 8],
    mul: [[u8; 8]; 8],
    inv: [u8; 8],
}

fn table() -> &'static Table {
    static T: OnceLock<Table> = OnceLock::new();
    T.get_or_init(|| {
        let mut chars = [ID3; 8];
        let mut cochars = [ID3; 8];
        let mut dual = [[[0; 4]; 4]; 8];
        for (i, w) in WORDS.iter().enumerate() {
            let mut m = ID3;
            let mut n = ID3;
            let mut d: Mat4 = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]];
            for g in parse_gens(w) {
                let (gc, gn, gd) =
                    if g == 1 { (&S1_CHAR, &S1_COCHAR, &S1_DUAL) } else { (&S2_CHAR, &S2_COCHAR, &S2_DUAL) };
                m = mat_mul(&m, gc);
                n = mat_mul(&n, gn);
                d = mat4_mul(&d, gd);
            }
            chars[i] = m;
            cochars[i] = n;
            dual[i] = d;
        }
        let find = |m: &Mat3| chars.iter().position(|c| c == m).expect("closed") as u8;
        let mut mul = [[0u8; 8]; 8];
        let mut inv = [0u8; 8];
        for i in 0..8 {
            for j in 0..8 {
                mul[i][j] = find(&mat_mul(&chars[i], &chars[j]));
            }
        }
        for i in 0..8 {
            inv[i] = (0..8).find(|&j| mul[i][j] == 0).expect("group") as u8;
        }
        Table { chars, cochars, dual, mul, inv }
    })
}

fn parse_gens(w: &str) -> Vec<u8> {
    w.as_bytes().chunks(2).map(|c| if c == b"s1" { 1 } else { 2 }).collect()
}

/// An element of the finite Weyl group W of type C2, stored as an index into
/// the 8 alternating reduced words.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteWeyl(u8);

impl FiniteWeyl {
    pub const E: FiniteWeyl = FiniteWeyl(0);
    pub const S1: FiniteWeyl = FiniteWeyl(1);
    pub const S2: FiniteWeyl = FiniteWeyl(2);
    pub const W0: FiniteWeyl = FiniteWeyl(7);

    pub fn all() -> impl Iterator<Item = FiniteWeyl> {
        (0..8u8).map(FiniteWeyl)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn word(self) -> &'static str {
        WORDS[self.0 as usize]
    }

    pub fn length(self) -> usize {
        self.word().len() / 2
    }

    /// Parses a word over s1, s2 (not necessarily reduced).
    pub fn from_word(w: &str) -> Result<FiniteWeyl> {
        let t = w.trim();
        if t.is_empty() || t == "e" {
            return Ok(FiniteWeyl::E);
        }
        if !t.len().is_multiple_of(2) || !t.as_bytes().chunks(2).all(|c| c == b"s1" || c == b"s2") {
            return invalid(format!("not a word in s1, s2: {w:?}"));
        }
        Ok(parse_gens(t)
            .into_iter()
            .fold(FiniteWeyl::E, |acc, g| acc * if g == 1 { FiniteWeyl::S1 } else { FiniteWeyl::S2 }))
    }

    pub fn inverse(self) -> FiniteWeyl {
        FiniteWeyl(table().inv[self.0 as usize])
    }

    pub fn act(self, l: Weight) -> Weight {
        mat_apply(&table().chars[self.0 as usize], l.to_array()).into()
    }

    pub fn act_coweight(self, m: Coweight) -> Coweight {
        mat_apply(&table().cochars[self.0 as usize], m.to_array()).into()
    }

    /// The signed permutation matrix representing this element in the dual group.
    pub fn dual_matrix(self) -> [[i64; 4]; 4] {
        table().dual[self.0 as usize]
    }

    /// The reflection s_α for the k-th positive root.
    pub fn reflection(k: usize) -> FiniteWeyl {
        let (al, cr) = (POSITIVE_ROOTS[k], POSITIVE_COROOTS[k]);
        let target: [Weight; 3] =
            [Weight::new(1, 0, 0), Weight::new(0, 1, 0), Weight::new(0, 0, 1)].map(|e| e - pairing(e, cr) * al);
        FiniteWeyl::all()
            .find(|w| [0, 1, 2].iter().all(|&i| w.act(basis(i)) == target[i]))
            .expect("every positive root has a reflection in W")
    }
}

fn basis(i: usize) -> Weight {
    let mut v = [0; 3];
    v[i] = 1;
    v.into()
}

impl Mul for FiniteWeyl {
    type Output = FiniteWeyl;
    fn mul(self, o: FiniteWeyl) -> FiniteWeyl {
        FiniteWeyl(table().mul[self.0 as usize][o.0 as usize])
    }
}

impl fmt::Display for FiniteWeyl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            f.write_str("e")
        } else {
            f.write_str(self.word())
        }
    }
}

impl Serialize for FiniteWeyl {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.word())
    }
}

impl<'de> Deserialize<'de> for FiniteWeyl {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        FiniteWeyl::from_word(&s).map_err(serde::de::Error::custom)
    }
}

/// Checks the hard-coded root datum against the invariants it must satisfy.
pub fn self_check() -> Result<()> {
    for (al, cr) in POSITIVE_ROOTS.iter().zip(POSITIVE_COROOTS.iter()) {
        if pairing(*al, *cr) != 2 {
            return invariant(format!("⟨{al},α∨⟩ ≠ 2"));
        }
    }
    // Cartan matrix of C2 on the simple pairs.
    // Rows are coroots, columns are roots.
    let cartan = [[2, -2], [-1, 2]];
    for (i, &si) in SIMPLE.iter().enumerate() {
        for (j, &sj) in SIMPLE.iter().enumerate() {
            if pairing(POSITIVE_ROOTS[sj], POSITIVE_COROOTS[si]) != cartan[i][j] {
                return invariant("simple pairings do not form the C2 Cartan matrix");
            }
        }
        if pairing(ETA, POSITIVE_COROOTS[si]) != 1 {
            return invariant("⟨η,α∨⟩ ≠ 1 for a simple coroot");
        }
    }
    let s1 = FiniteWeyl::S1;
    let s2 = FiniteWeyl::S2;
    if s1 * s1 != FiniteWeyl::E || s2 * s2 != FiniteWeyl::E {
        return invariant("simple reflections are not involutions");
    }
    let r = s1 * s2;
    if r * r * r * r != FiniteWeyl::E || r * r == FiniteWeyl::E {
        return invariant("s1s2 does not have order 4");
    }
    let sample = [Weight::new(3, -1, 2), Weight::new(-5, 7, 1), ETA];
    for u in FiniteWeyl::all() {
        for v in FiniteWeyl::all() {
            for &l in &sample {
                if (u * v).act(l) != u.act(v.act(l)) {
                    return invariant("W does not act on characters");
                }
            }
        }
        for &l in &sample {
            for cr in POSITIVE_COROOTS {
                if pairing(u.act(l), u.act_coweight(cr)) != pairing(l, cr) {
                    return invariant("pairing is not W-equivariant");
                }
            }
        }
    }
    for k in 0..4 {
        let s = FiniteWeyl::reflection(k);
        for &l in &sample {
            let expect = l - pairing(l, POSITIVE_COROOTS[k]) * POSITIVE_ROOTS[k];
            if s.act(l) != expect {
                return invariant("reflection formula fails");
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairing_examples() {
        assert_eq!(pairing(ETA, Coweight::new(1, 1, 0)), 3);
        assert_eq!(pairing(Weight::new(0, 0, 5), Coweight::new(1, -1, 0)), 0);
        assert_eq!(pairing(ETA, Coweight::new(0, 1, 0)), 1);
    }

    #[test]
    fn eta_against_positive_coroots() {
        let v: Vec<i64> = POSITIVE_COROOTS.iter().map(|&c| pairing(ETA, c)).collect();
        assert_eq!(v, vec![1, 1, 3, 2]);
    }

    #[test]
    fn act_examples() {
        assert_eq!(FiniteWeyl::S1.act(ETA), Weight::new(1, 2, 0));
        assert_eq!(FiniteWeyl::W0.act(ETA), Weight::new(-2, -1, 3));
        assert_eq!(FiniteWeyl::E.act(Weight::new(4, 5, 6)), Weight::new(4, 5, 6));
    }

    #[test]
    fn std_examples() {
        assert_eq!(tcal(ETA), [3, 2, 1, 0]);
        assert_eq!(std_coweight(Coweight::ZERO), [0, 0, 0, 0]);
        assert_eq!(std_coweight(Coweight::new(1, 1, 2)), [1, 1, 1, 1]);
        assert_eq!(tcal_inverse(tcal(Weight::new(4, -2, 7))), Some(Weight::new(4, -2, 7)));
    }

    #[test]
    fn words_are_distinct_and_reduced() {
        let mut seen = std::collections::HashSet::new();
        for w in FiniteWeyl::all() {
            assert!(seen.insert(table().chars[w.index()]));
            assert_eq!(FiniteWeyl::from_word(w.word()).unwrap(), w);
        }
        assert_eq!(FiniteWeyl::from_word("s2s1s2s1").unwrap(), FiniteWeyl::W0);
        assert!(FiniteWeyl::from_word("s3").is_err());
    }

    #[test]
    fn depth_examples() {
        assert!(is_m_deep(Weight::ZERO, 0, 37).unwrap());
        // ⟨λ+η, α1∨⟩ = 37 sits on a wall.
        assert!(!is_m_deep(Weight::new(36, 0, 0), 0, 37).unwrap());
        assert!(is_m_deep(Weight::ZERO, -1, 37).is_err());
        assert_eq!(depth(Weight::new(36, 0, 0), 37), None);
    }

    #[test]
    fn root_datum_self_check() {
        self_check().unwrap();
    }
}
