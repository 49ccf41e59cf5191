//! The extended affine Weyl group X*(T) ⋊ W of GSp4: group law, alcoves,
//! length, Bruhat order, Ω, the star map, the ⋄ map, the p-dot action and the
//! upper-arrow order on alcoves.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::ops::Mul;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::gsp4_base::{class_of, FiniteWeyl, Weight, ETA, POSITIVE_ROOTS};

/// t_ν·w, acting on X*(T)⊗ℝ by x ↦ ν + w(x).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExtAffineElement {
    pub t: Weight,
    pub w: FiniteWeyl,
}

/// An element of the dual extended affine Weyl group, written t_ν·w as well.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DualElement {
    pub t: Weight,
    pub w: FiniteWeyl,
}

pub type TupleElement = Vec<ExtAffineElement>;

impl ExtAffineElement {
    pub const E: ExtAffineElement = ExtAffineElement { t: Weight::ZERO, w: FiniteWeyl::E };

    pub fn new(t: Weight, w: FiniteWeyl) -> Self {
        ExtAffineElement { t, w }
    }

    pub fn translation(t: Weight) -> Self {
        ExtAffineElement { t, w: FiniteWeyl::E }
    }

    pub fn finite(w: FiniteWeyl) -> Self {
        ExtAffineElement { t: Weight::ZERO, w }
    }

    pub fn inverse(self) -> Self {
        let wi = self.w.inverse();
        ExtAffineElement { t: -wi.act(self.t), w: wi }
    }

    /// x ↦ ν + w(x) on the lattice.
    pub fn apply(self, l: Weight) -> Weight {
        self.t + self.w.act(l)
    }

    /// (t_ν w)·λ = w(λ+η) + pν − η.
    pub fn p_dot(self, l: Weight, p: i64) -> Weight {
        self.w.act(l + ETA) + p * self.t - ETA
    }

    pub fn class(self) -> i64 {
        class_of(self.t)
    }

    pub fn alcove(self) -> Alcove {
        let b = self.w.act(Weight::new(3, 1, 0));
        Alcove { x6: 6 * self.t.a + b.a, y6: 6 * self.t.b + b.b }
    }

    /// Number of root hyperplanes separating A₀ from x(A₀).
    pub fn length(self) -> usize {
        self.alcove().length()
    }

    pub fn star(self) -> DualElement {
        let wi = self.w.inverse();
        DualElement { t: wi.act(self.t), w: wi }
    }

    pub fn is_restricted(self) -> bool {
        self.alcove().is_restricted()
    }

    pub fn is_dominant(self) -> bool {
        self.alcove().is_dominant()
    }

    pub fn in_omega(self) -> bool {
        self.length() == 0
    }

    /// Representative modulo X⁰ with c-coordinate 0 when the class allows it.
    pub fn mod_x0(self) -> ExtAffineElement {
        ExtAffineElement { t: Weight::new(self.t.a, self.t.b, 0), w: self.w }
    }
}

impl Mul for ExtAffineElement {
    type Output = ExtAffineElement;
    fn mul(self, o: ExtAffineElement) -> ExtAffineElement {
        ExtAffineElement { t: self.t + self.w.act(o.t), w: self.w * o.w }
    }
}

impl fmt::Display for ExtAffineElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{}·{}", self.t, self.w)
    }
}

impl DualElement {
    pub fn new(t: Weight, w: FiniteWeyl) -> Self {
        DualElement { t, w }
    }

    /// The inverse of [`ExtAffineElement::star`].
    pub fn star(self) -> ExtAffineElement {
        let wi = self.w.inverse();
        ExtAffineElement { t: wi.act(self.t), w: wi }
    }

    fn as_plain(self) -> ExtAffineElement {
        ExtAffineElement { t: self.t, w: self.w }
    }

    /// Length measured from the antidominant base alcove w₀(A₀).
    pub fn dual_length(self) -> usize {
        let w0 = ExtAffineElement::finite(FiniteWeyl::W0);
        (w0 * self.as_plain() * w0).length()
    }

    pub fn class(self) -> i64 {
        class_of(self.t)
    }
}

impl Mul for DualElement {
    type Output = DualElement;
    fn mul(self, o: DualElement) -> DualElement {
        let r = self.as_plain() * o.as_plain();
        DualElement { t: r.t, w: r.w }
    }
}

impl fmt::Display for DualElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{}·{}∨", self.t, self.w)
    }
}

/// Bruhat order on the dual group, taken relative to w₀(A₀).
pub fn dual_bruhat_leq(x: DualElement, y: DualElement) -> bool {
    let w0 = ExtAffineElement::finite(FiniteWeyl::W0);
    bruhat_leq(w0 * x.as_plain() * w0, w0 * y.as_plain() * w0)
}

pub fn tuple_mul(x: &[ExtAffineElement], y: &[ExtAffineElement]) -> TupleElement {
    x.iter().zip(y).map(|(a, b)| *a * *b).collect()
}

pub fn tuple_inverse(x: &[ExtAffineElement]) -> TupleElement {
    x.iter().map(|a| a.inverse()).collect()
}

/// w̃_h = w₀·t_{−η} = t_{(2,1;−3)}·w₀.
pub fn w_h() -> ExtAffineElement {
    ExtAffineElement::finite(FiniteWeyl::W0) * ExtAffineElement::translation(-ETA)
}

/// The affine simple reflections s0, s1, s2.
pub fn simple_reflection(i: usize) -> ExtAffineElement {
    match i {
        0 => ExtAffineElement::new(POSITIVE_ROOTS[2], FiniteWeyl::reflection(2)),
        1 => ExtAffineElement::finite(FiniteWeyl::S1),
        2 => ExtAffineElement::finite(FiniteWeyl::S2),
        _ => panic!("affine simple reflections are indexed by 0, 1, 2"),
    }
}

/// The affine reflection in the hyperplane ⟨x, α_k∨⟩ = m.
pub fn affine_reflection(k: usize, m: i64) -> ExtAffineElement {
    ExtAffineElement::new(m * POSITIVE_ROOTS[k], FiniteWeyl::reflection(k))
}

/// The length-zero element of class k: powers of t_{(1,0;0)}·s1s2s1, whose square is t_{(0,0;1)}.
pub fn omega_element(k: i64) -> ExtAffineElement {
    let half = ExtAffineElement::translation(Weight::new(0, 0, k.div_euclid(2)));
    if k.rem_euclid(2) == 1 {
        half * ExtAffineElement::new(Weight::new(1, 0, 0), FiniteWeyl::from_word("s1s2s1").unwrap())
    } else {
        half
    }
}

/// Greedy left descent: x = s_{i1}⋯s_{ik}·δ with ℓ(δ)=0 and k = ℓ(x).
pub fn omega_split(x: ExtAffineElement) -> (Vec<usize>, ExtAffineElement) {
    let mut word = Vec::new();
    let mut cur = x;
    let mut len = cur.length();
    while len > 0 {
        let (i, next) = (0..3)
            .map(|i| (i, simple_reflection(i) * cur))
            .find(|(_, y)| y.length() < len)
            .expect("a nonzero-length element has a left descent");
        word.push(i);
        cur = next;
        len -= 1;
    }
    (word, cur)
}

pub fn word_product(word: &[usize]) -> ExtAffineElement {
    word.iter().fold(ExtAffineElement::E, |acc, &i| acc * simple_reflection(i))
}

thread_local! {
    static BRUHAT_MEMO: RefCell<HashMap<(ExtAffineElement, ExtAffineElement), bool>> =
        RefCell::new(HashMap::new());
}

/// Bruhat order on the extended affine Weyl group: x ≤ y iff they share an
/// Ω-component and the W_a-parts compare.
pub fn bruhat_leq(x: ExtAffineElement, y: ExtAffineElement) -> bool {
    if x.class() != y.class() {
        return false;
    }
    bruhat_rec(x, y, x.length(), y.length())
}

fn bruhat_rec(x: ExtAffineElement, y: ExtAffineElement, lx: usize, ly: usize) -> bool {
    if lx > ly {
        return false;
    }
    if ly == 0 {
        return x == y;
    }
    if let Some(r) = BRUHAT_MEMO.with(|m| m.borrow().get(&(x, y)).copied()) {
        return r;
    }
    let (s, sy) = (0..3)
        .map(|i| (simple_reflection(i), simple_reflection(i) * y))
        .find(|(_, sy)| sy.length() < ly)
        .expect("descent exists");
    let sx = s * x;
    let lsx = sx.length();
    let r = if lsx < lx { bruhat_rec(sx, sy, lsx, ly - 1) } else { bruhat_rec(x, sy, lx, ly - 1) };
    BRUHAT_MEMO.with(|m| m.borrow_mut().insert((x, y), r));
    r
}

/// All elements below y in the Bruhat order, by subwords of a reduced word.
pub fn bruhat_interval_below(y: ExtAffineElement) -> Vec<ExtAffineElement> {
    let (word, delta) = omega_split(y);
    let mut set: std::collections::BTreeSet<ExtAffineElement> = std::collections::BTreeSet::new();
    set.insert(ExtAffineElement::E);
    // Right-to-left so each step only multiplies on the left.
    for &i in word.iter().rev() {
        let s = simple_reflection(i);
        let add: Vec<_> = set.iter().map(|&u| s * u).collect();
        set.extend(add);
    }
    set.into_iter().map(|u| u * delta).collect()
}

/// The unique element of the given class whose alcove is `a`.
pub fn element_with_alcove(a: Alcove, class: i64) -> Result<ExtAffineElement> {
    let u = fold_point(a.x6, a.y6, 6)?;
    Ok(u * omega_element(class))
}

/// Returns y ∈ W_a with (x/d, y/d) in the closure-free interior of y(A₀).
/// Points on a wall are rejected.
pub fn fold_point(x: i64, y: i64, d: i64) -> Result<ExtAffineElement> {
    let (mut x, mut y) = (x, y);
    let mut word = Vec::new();
    loop {
        if y < 0 {
            y = -y;
            word.push(2);
        } else if x < y {
            std::mem::swap(&mut x, &mut y);
            word.push(1);
        } else if x + y > d {
            let (nx, ny) = (d - y, d - x);
            x = nx;
            y = ny;
            word.push(0);
        } else {
            break;
        }
    }
    if y == 0 || x == y || x + y == d {
        return invalid(format!("point ({x}/{d},{y}/{d}) lies on a wall"));
    }
    Ok(word_product(&word))
}

/// The bijection W → W̃₁⁺/X⁰, with representative t_{(a,b;0)}·w.
pub fn diamond(w: FiniteWeyl) -> ExtAffineElement {
    for a in -3..=3 {
        for b in -3..=3 {
            let x = ExtAffineElement::new(Weight::new(a, b, 0), w);
            if x.is_restricted() {
                return x;
            }
        }
    }
    unreachable!("every Weyl element has a restricted translate")
}

/// An alcove, named by six times the barycenter of its image of the base triangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Alcove {
    pub x6: i64,
    pub y6: i64,
}

pub const A0: Alcove = Alcove { x6: 3, y6: 1 };
pub const A1: Alcove = Alcove { x6: 5, y6: 3 };
pub const A2: Alcove = Alcove { x6: 7, y6: 3 };
pub const A3: Alcove = Alcove { x6: 9, y6: 5 };
pub const RESTRICTED: [Alcove; 4] = [A0, A1, A2, A3];

/// Root directions projected to the (a,b)-plane, in the order of the positive roots.
const ROOT_DIRS: [(i64, i64); 4] = [(1, -1), (0, 2), (1, 1), (2, 0)];

impl Alcove {
    /// Six times ℓ_α(barycenter) for the coroot functionals x−y, y, x+y, x.
    pub fn values6(self) -> [i64; 4] {
        [self.x6 - self.y6, self.y6, self.x6 + self.y6, self.x6]
    }

    pub fn length(self) -> usize {
        self.values6().iter().map(|v| v.div_euclid(6).unsigned_abs() as usize).sum()
    }

    pub fn is_restricted(self) -> bool {
        let v = self.values6();
        (0..6).contains(&v[0]) && (0..6).contains(&v[1])
    }

    pub fn is_dominant(self) -> bool {
        let v = self.values6();
        v[0] > 0 && v[1] > 0
    }

    pub fn in_box(self, r: i64) -> bool {
        self.values6().iter().all(|v| v.abs() <= 6 * r)
    }

    /// Index 0..3 when this is one of A₀..A₃.
    pub fn restricted_index(self) -> Option<usize> {
        RESTRICTED.iter().position(|&a| a == self)
    }

    /// Reflection in ⟨x, α_k∨⟩ = m.
    pub fn reflect(self, k: usize, m: i64) -> Alcove {
        let f = self.values6()[k] - 6 * m;
        let (dx, dy) = ROOT_DIRS[k];
        Alcove { x6: self.x6 - f * dx, y6: self.y6 - f * dy }
    }

    pub fn translate(self, t: Weight) -> Alcove {
        Alcove { x6: self.x6 + 6 * t.a, y6: self.y6 + 6 * t.b }
    }
}

fn frac(n: i64, d: i64) -> String {
    let g = num_integer::gcd(n, d);
    let (n, d) = (n / g, d / g);
    if d == 1 {
        n.to_string()
    } else {
        format!("{n}/{d}")
    }
}

impl fmt::Display for Alcove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", frac(self.x6, 6), frac(self.y6, 6))
    }
}

impl Serialize for Alcove {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Alcove", 2)?;
        st.serialize_field("x", &frac(self.x6, 6))?;
        st.serialize_field("y", &frac(self.y6, 6))?;
        st.end()
    }
}

pub const DEFAULT_BOX: i64 = 12;

/// Alcoves in the box |ℓ_α| ≤ R with the reachability closure of single up-reflections.
pub struct UpArrowBox {
    pub radius: i64,
    alcoves: Vec<Alcove>,
    index: HashMap<Alcove, usize>,
    reach: Vec<Vec<u64>>,
}

impl UpArrowBox {
    fn build(radius: i64) -> UpArrowBox {
        let mut alcoves = vec![A0];
        let mut index = HashMap::from([(A0, 0usize)]);
        let mut i = 0;
        while i < alcoves.len() {
            let a = alcoves[i];
            for k in 0..4 {
                for m in -radius..=radius {
                    let b = a.reflect(k, m);
                    if b.in_box(radius) && !index.contains_key(&b) {
                        index.insert(b, alcoves.len());
                        alcoves.push(b);
                    }
                }
            }
            i += 1;
        }
        // Every up-step adds a positive multiple of a positive root, and
        // 3x + y strictly increases along all four of them.
        let mut order: Vec<usize> = (0..alcoves.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(3 * alcoves[i].x6 + alcoves[i].y6));
        let words = alcoves.len().div_ceil(64);
        let mut reach = vec![vec![0u64; words]; alcoves.len()];
        for &i in &order {
            let a = alcoves[i];
            let mut bits = vec![0u64; words];
            bits[i / 64] |= 1 << (i % 64);
            for k in 0..4 {
                let v = a.values6()[k];
                let mut m = v.div_euclid(6) + 1;
                loop {
                    let b = a.reflect(k, m);
                    if !b.in_box(radius) {
                        break;
                    }
                    let j = index[&b];
                    for (x, y) in bits.iter_mut().zip(&reach[j]) {
                        *x |= *y;
                    }
                    m += 1;
                }
            }
            reach[i] = bits;
        }
        UpArrowBox { radius, alcoves, index, reach }
    }

    pub fn alcoves(&self) -> &[Alcove] {
        &self.alcoves
    }

    fn idx(&self, a: Alcove) -> Result<usize> {
        self.index.get(&a).copied().ok_or_else(|| Error::OutOfBox { radius: self.radius, what: format!("alcove {a}") })
    }

    pub fn leq(&self, a: Alcove, b: Alcove) -> Result<bool> {
        let (i, j) = (self.idx(a)?, self.idx(b)?);
        Ok(self.reach[i][j / 64] >> (j % 64) & 1 == 1)
    }

    /// All alcoves B in the box with A ↑ B.
    pub fn above(&self, a: Alcove) -> Result<Vec<Alcove>> {
        let i = self.idx(a)?;
        Ok((0..self.alcoves.len())
            .filter(|&j| self.reach[i][j / 64] >> (j % 64) & 1 == 1)
            .map(|j| self.alcoves[j])
            .collect())
    }

    /// All alcoves B in the box with B ↑ A.
    pub fn below(&self, a: Alcove) -> Result<Vec<Alcove>> {
        let j = self.idx(a)?;
        Ok((0..self.alcoves.len())
            .filter(|&i| self.reach[i][j / 64] >> (j % 64) & 1 == 1)
            .map(|i| self.alcoves[i])
            .collect())
    }
}

/// The shared up-arrow table for radius R, built on first use.
pub fn up_box(radius: i64) -> Arc<UpArrowBox> {
    static CACHE: OnceLock<Mutex<HashMap<i64, Arc<UpArrowBox>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(b) = cache.lock().unwrap().get(&radius) {
        return b.clone();
    }
    let built = Arc::new(UpArrowBox::build(radius));
    cache.lock().unwrap().entry(radius).or_insert(built).clone()
}

pub fn uparrow_leq(a: Alcove, b: Alcove) -> Result<bool> {
    up_box(DEFAULT_BOX).leq(a, b)
}

/// x ↑ y for elements: same Ω-component and ↑ on alcoves.
pub fn element_uparrow_leq(x: ExtAffineElement, y: ExtAffineElement) -> Result<bool> {
    Ok(x.class() == y.class() && uparrow_leq(x.alcove(), y.alcove())?)
}

/// The W_a-element locating λ and the C₀ member of its dot-orbit:
/// (λ+η)/p ∈ y(A₀) and rep = y⁻¹·λ.
pub fn linkage(l: Weight, p: i64) -> Result<(ExtAffineElement, Weight)> {
    let s = l + ETA;
    let y = fold_point(s.a, s.b, p)?;
    Ok((y, y.inverse().p_dot(l, p)))
}

/// λ ↑ μ: linked under the p-dot action of W_a with ↑-comparable p-alcoves.
pub fn weight_uparrow_leq(l: Weight, m: Weight, p: i64) -> Result<bool> {
    if l == m {
        return Ok(true);
    }
    let (yl, rl) = linkage(l, p)?;
    let (ym, rm) = linkage(m, p)?;
    Ok(rl == rm && uparrow_leq(yl.alcove(), ym.alcove())?)
}
