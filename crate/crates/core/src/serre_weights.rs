//! Serre weights, lowest alcove presentations, tame presentations, AP(η),
//! AP′(η), the parametrizations F_τ and F_ρ̄, and obvious/outer weights.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::admissible::adm_eta;
use crate::affine_weyl::{
    diamond, element_with_alcove, linkage, tuple_inverse, tuple_mul, up_box, w_h, ExtAffineElement, TupleElement,
    DEFAULT_BOX,
};
use crate::error::{invalid, invariant, Error, Result};
use crate::gsp4_base::{depth, FiniteWeyl, Weight, ETA};

/// Cyclic shift of embeddings: (π⁻¹x)_j = x_{j−1}.
pub fn pi_inverse<T: Clone>(x: &[T]) -> Vec<T> {
    let f = x.len();
    (0..f).map(|j| x[(j + f - 1) % f].clone()).collect()
}

/// (πx)_j = x_{j+1}.
pub fn pi<T: Clone>(x: &[T]) -> Vec<T> {
    let f = x.len();
    (0..f).map(|j| x[(j + 1) % f].clone()).collect()
}

/// Canonical representative of a weight tuple modulo (p−π)X⁰: every
/// c-coordinate but the last is moved forward, the last is reduced mod p^f−1.
pub fn normalize_x0(lambda: &[Weight], p: i64) -> Vec<Weight> {
    let f = lambda.len();
    let mut out = lambda.to_vec();
    for j in 0..f.saturating_sub(1) {
        // ν_{j+1} = c_j changes c_j by −c_j and c_{j+1} by p·c_j.
        let c = out[j].c;
        out[j].c = 0;
        out[j + 1].c += p * c;
    }
    let modulus = p.pow(f as u32) - 1;
    out[f - 1].c = out[f - 1].c.rem_euclid(modulus);
    out
}

/// ⟨μ+η, α∨⟩ strictly between 0 and p for every positive coroot.
pub fn in_c0(mu: Weight, p: i64) -> bool {
    let s = mu + ETA;
    s.a - s.b > 0 && s.b > 0 && s.a + s.b < p
}

fn is_restricted(l: Weight, p: i64) -> bool {
    (0..p).contains(&(l.a - l.b)) && (0..p).contains(&l.b)
}

/// Index of the restricted p-alcove C_i containing λ, if any.
pub fn restricted_alcove_index(l: Weight, p: i64) -> Option<usize> {
    let (y, _) = linkage(l, p).ok()?;
    y.alcove().restricted_index()
}

/// F(λ) for a p-restricted λ, stored in normal form modulo (p−π)X⁰.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SerreWeight {
    pub p: i64,
    pub lambda: Vec<Weight>,
}

impl SerreWeight {
    pub fn new(lambda: Vec<Weight>, p: i64) -> Result<SerreWeight> {
        if lambda.is_empty() {
            return invalid("a Serre weight needs at least one embedding");
        }
        if let Some(l) = lambda.iter().find(|l| !is_restricted(**l, p)) {
            return invalid(format!("{l} is not {p}-restricted"));
        }
        Ok(SerreWeight { p, lambda: normalize_x0(&lambda, p) })
    }

    pub fn f(&self) -> usize {
        self.lambda.len()
    }

    pub fn is_regular(&self) -> bool {
        self.lambda.iter().all(|l| l.a - l.b < self.p - 1 && l.b < self.p - 1)
    }

    /// Minimum depth over embeddings; None if some λ_j sits on a wall.
    pub fn depth(&self) -> Option<i64> {
        self.lambda.iter().map(|&l| depth(l, self.p)).min().flatten()
    }

    /// Restricted alcove index per embedding.
    pub fn alcoves(&self) -> Vec<Option<usize>> {
        self.lambda.iter().map(|&l| restricted_alcove_index(l, self.p)).collect()
    }

    /// 𝓡: F(λ) ↦ F(w̃_h·λ).
    pub fn r_map(&self) -> Result<SerreWeight> {
        let lam = self.lambda.iter().map(|&l| w_h().p_dot(l, self.p)).collect();
        SerreWeight::new(lam, self.p)
    }
}

impl fmt::Display for SerreWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F(")?;
        for (j, l) in self.lambda.iter().enumerate() {
            if j > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, ")")
    }
}

/// F_{(w̃₁,ω)} = F(π⁻¹(w̃₁)·(ω−η)).
pub fn serre_weight_of_presentation(w1: &[ExtAffineElement], omega: &[Weight], p: i64) -> Result<SerreWeight> {
    if w1.len() != omega.len() {
        return invalid("presentation components have different lengths");
    }
    if let Some(o) = omega.iter().find(|&&o| !in_c0(o - ETA, p)) {
        return invalid(format!("ω−η = {} is not in the lowest alcove", *o - ETA));
    }
    let tw = pi_inverse(w1);
    let lam: Vec<Weight> = tw.iter().zip(omega).map(|(w, &o)| w.p_dot(o - ETA, p)).collect();
    if lam.iter().any(|&l| !is_restricted(l, p)) {
        return invalid("presentation out of range");
    }
    SerreWeight::new(lam, p)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PresentationKind {
    Type,
    Parameter,
}

/// A lowest alcove presentation (s, μ) with w̃ = t_{μ+η}s per embedding.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TamePresentation {
    pub p: i64,
    pub s: Vec<FiniteWeyl>,
    pub mu: Vec<Weight>,
    #[serde(default = "default_kind")]
    pub kind: PresentationKind,
}

fn default_kind() -> PresentationKind {
    PresentationKind::Parameter
}

impl TamePresentation {
    pub fn new(s: Vec<FiniteWeyl>, mu: Vec<Weight>, p: i64, kind: PresentationKind) -> Result<Self> {
        let t = TamePresentation { p, s, mu, kind };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if self.p < 5 {
            return invalid(format!("p = {} is too small", self.p));
        }
        if self.s.is_empty() || self.s.len() != self.mu.len() {
            return invalid("s and μ must be nonempty and of equal length");
        }
        if let Some(m) = self.mu.iter().find(|&&m| !in_c0(m, self.p)) {
            return invalid(format!("μ = {m} is not in the lowest alcove for p = {}", self.p));
        }
        Ok(())
    }

    pub fn f(&self) -> usize {
        self.s.len()
    }

    /// w̃ = t_{μ+η}s.
    pub fn w_tilde(&self) -> TupleElement {
        self.s.iter().zip(&self.mu).map(|(&s, &m)| ExtAffineElement::new(m + ETA, s)).collect()
    }

    /// The largest N with μ N-deep in C₀.
    pub fn depth(&self) -> i64 {
        self.mu.iter().map(|&m| depth(m, self.p).unwrap_or(-1)).min().unwrap_or(-1)
    }

    pub fn from_element(w: &[ExtAffineElement], p: i64, kind: PresentationKind) -> Result<Self> {
        TamePresentation::new(w.iter().map(|x| x.w).collect(), w.iter().map(|x| x.t - ETA).collect(), p, kind)
    }

    fn require_depth(&self, n: i64, what: &str) -> Result<()> {
        let d = self.depth();
        if d < n {
            return Err(Error::Genericity(format!("{what} needs depth {n}, presentation has depth {d}")));
        }
        Ok(())
    }
}

/// w̃(ρ̄,τ) = w̃(τ)⁻¹w̃(ρ̄).
pub fn relative_position(rhobar: &TamePresentation, tau: &TamePresentation) -> Result<TupleElement> {
    if rhobar.p != tau.p || rhobar.f() != tau.f() {
        return invalid("ρ̄ and τ have different p or f");
    }
    Ok(tuple_mul(&tuple_inverse(&tau.w_tilde()), &rhobar.w_tilde()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ApFlavor {
    #[serde(rename = "AP")]
    Ap,
    #[serde(rename = "AP'")]
    ApPrime,
}

/// A pair (w̃₁, w̃₂), normalized modulo X⁰ so its restricted member is a c = 0 diamond.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ApPair {
    pub w1: TupleElement,
    pub w2: TupleElement,
    pub flavor: ApFlavor,
}

/// AP′(η) for one embedding: w̃₂ restricted, w̃₁ dominant, w̃₁ ↑ w̃₂.
pub fn ap_prime_single() -> Vec<(ExtAffineElement, ExtAffineElement)> {
    let bx = up_box(DEFAULT_BOX);
    let mut out = Vec::new();
    for w in FiniteWeyl::all() {
        let w2 = diamond(w);
        let below = bx.below(w2.alcove()).expect("restricted alcoves are in the box");
        for b in below.into_iter().filter(|b| b.is_dominant()) {
            let w1 = element_with_alcove(b, w2.class()).expect("alcoves are not on walls");
            out.push((w1, w2));
        }
    }
    out.sort();
    out
}

/// Pairs with w̃₁ restricted, w̃₁ ↑ w̃_h⁻¹w̃₂ and w̃₂ dominant, no admissibility clause.
pub fn ap_literal_single() -> Vec<(ExtAffineElement, ExtAffineElement)> {
    let bx = up_box(DEFAULT_BOX);
    let mut out = Vec::new();
    for w in FiniteWeyl::all() {
        let w1 = diamond(w);
        for c in bx.above(w1.alcove()).expect("restricted alcoves are in the box") {
            let x = element_with_alcove(c, w1.class()).expect("alcoves are not on walls");
            let w2 = w_h() * x;
            if w2.is_dominant() {
                out.push((w1, w2));
            }
        }
    }
    out.sort();
    out
}

/// w̃₂⁻¹w₀w̃₁.
pub fn ap_target(w1: ExtAffineElement, w2: ExtAffineElement) -> ExtAffineElement {
    w2.inverse() * ExtAffineElement::finite(FiniteWeyl::W0) * w1
}

/// AP(η) for one embedding, with the admissibility clause w̃₂⁻¹w₀w̃₁ ∈ Adm(η).
pub fn ap_single() -> Vec<(ExtAffineElement, ExtAffineElement)> {
    ap_literal_single().into_iter().filter(|&(w1, w2)| adm_eta().contains(ap_target(w1, w2))).collect()
}

fn product(single: &[(ExtAffineElement, ExtAffineElement)], f: usize, flavor: ApFlavor) -> Vec<ApPair> {
    let mut out = vec![ApPair { w1: vec![], w2: vec![], flavor }];
    for _ in 0..f {
        let mut next = Vec::with_capacity(out.len() * single.len());
        for pair in &out {
            for &(a, b) in single {
                let mut q = pair.clone();
                q.w1.push(a);
                q.w2.push(b);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

pub fn enumerate_ap(f: usize) -> Vec<ApPair> {
    product(&ap_single(), f, ApFlavor::Ap)
}

pub fn enumerate_ap_prime(f: usize) -> Vec<ApPair> {
    product(&ap_prime_single(), f, ApFlavor::ApPrime)
}

fn apply_zero(x: &[ExtAffineElement]) -> Vec<Weight> {
    x.iter().map(|e| e.t).collect()
}

/// F_τ(w̃₁,w̃₂) = F_{(w̃₁,ω)} with ω = w̃(τ)w̃₂⁻¹(0).
pub fn f_tau(tau: &TamePresentation, pair: &ApPair) -> Result<SerreWeight> {
    let omega = apply_zero(&tuple_mul(&tau.w_tilde(), &tuple_inverse(&pair.w2)));
    serre_weight_of_presentation(&pair.w1, &omega, tau.p)
}

/// F_ρ̄(w̃₁,w̃₂) = F_{(w̃₂,ω)} with ω = w̃(ρ̄)w̃₁⁻¹(0).
pub fn f_rhobar(rhobar: &TamePresentation, pair: &ApPair) -> Result<SerreWeight> {
    let omega = apply_zero(&tuple_mul(&rhobar.w_tilde(), &tuple_inverse(&pair.w1)));
    serre_weight_of_presentation(&pair.w2, &omega, rhobar.p)
}

/// JH(σ̄(τ)) labelled by AP(η).
pub fn jh_factors(tau: &TamePresentation) -> Result<Vec<(ApPair, SerreWeight)>> {
    tau.require_depth(3, "JH(σ̄(τ))")?;
    enumerate_ap(tau.f())
        .into_iter()
        .map(|pair| {
            let s = f_tau(tau, &pair)?;
            Ok((pair, s))
        })
        .collect()
}

/// W?(ρ̄) labelled by AP′(η).
pub fn w_question(rhobar: &TamePresentation) -> Result<Vec<(ApPair, SerreWeight)>> {
    rhobar.require_depth(3, "W?(ρ̄)")?;
    enumerate_ap_prime(rhobar.f())
        .into_iter()
        .map(|pair| {
            let s = f_rhobar(rhobar, &pair)?;
            Ok((pair, s))
        })
        .collect()
}

/// All tuples of finite Weyl elements of length f, in lexicographic order.
pub fn weyl_tuples(f: usize) -> Vec<Vec<FiniteWeyl>> {
    let mut out = vec![vec![]];
    for _ in 0..f {
        out = out
            .into_iter()
            .flat_map(|t: Vec<FiniteWeyl>| {
                FiniteWeyl::all().map(move |w| {
                    let mut u = t.clone();
                    u.push(w);
                    u
                })
            })
            .collect();
    }
    out
}

pub fn diamond_tuple(w: &[FiniteWeyl]) -> TupleElement {
    w.iter().map(|&x| diamond(x)).collect()
}

/// F_ρ̄(w) = F_ρ̄(w⋄, w⋄).
pub fn obvious_weight(rhobar: &TamePresentation, w: &[FiniteWeyl]) -> Result<SerreWeight> {
    let d = diamond_tuple(w);
    f_rhobar(rhobar, &ApPair { w1: d.clone(), w2: d, flavor: ApFlavor::ApPrime })
}

/// F_τ(w) = F_τ(w⋄, w̃_h w⋄).
pub fn outer_weight(tau: &TamePresentation, w: &[FiniteWeyl]) -> Result<SerreWeight> {
    let d = diamond_tuple(w);
    let w2 = d.iter().map(|&x| w_h() * x).collect();
    f_tau(tau, &ApPair { w1: d, w2, flavor: ApFlavor::Ap })
}

pub fn obvious_weights(rhobar: &TamePresentation) -> Result<BTreeMap<Vec<FiniteWeyl>, SerreWeight>> {
    weyl_tuples(rhobar.f()).into_iter().map(|w| Ok((w.clone(), obvious_weight(rhobar, &w)?))).collect()
}

pub fn outer_weights(tau: &TamePresentation) -> Result<BTreeMap<Vec<FiniteWeyl>, SerreWeight>> {
    weyl_tuples(tau.f()).into_iter().map(|w| Ok((w.clone(), outer_weight(tau, &w)?))).collect()
}

/// W?(ρ̄) ∩ JH(σ̄(τ)).
pub fn intersect_w_jh(rhobar: &TamePresentation, tau: &TamePresentation) -> Result<BTreeSet<SerreWeight>> {
    if rhobar.p != tau.p || rhobar.f() != tau.f() {
        return invalid("ρ̄ and τ have different p or f");
    }
    let w: BTreeSet<_> = w_question(rhobar)?.into_iter().map(|(_, s)| s).collect();
    let jh: BTreeSet<_> = jh_factors(tau)?.into_iter().map(|(_, s)| s).collect();
    Ok(w.intersection(&jh).cloned().collect())
}

#[derive(Clone, Debug)]
pub struct TypeFromTarget {
    pub tau: TamePresentation,
    pub depth: i64,
    /// Whether the depth meets the caller's expected floor.
    pub meets_floor: bool,
}

/// τ with w̃(ρ̄,τ) = g, i.e. w̃(τ) = w̃(ρ̄)g⁻¹.
pub fn type_from_target(rhobar: &TamePresentation, g: &[ExtAffineElement], floor: i64) -> Result<TypeFromTarget> {
    if g.len() != rhobar.f() {
        return invalid("target has the wrong number of embeddings");
    }
    let w = tuple_mul(&rhobar.w_tilde(), &tuple_inverse(g));
    let tau = TamePresentation::from_element(&w, rhobar.p, PresentationKind::Type)
        .map_err(|e| Error::Validation(format!("malformed target: {e}")))?;
    let depth = tau.depth();
    Ok(TypeFromTarget { tau, depth, meets_floor: depth >= floor })
}

/// σ ↑ σ′ for Serre weights: per embedding the p-alcoves compare, and the
/// linkage representatives in C₀ agree modulo (p−π)X⁰.
pub fn serre_uparrow_leq(a: &SerreWeight, b: &SerreWeight) -> Result<bool> {
    if a.p != b.p || a.f() != b.f() {
        return Ok(false);
    }
    if a == b {
        return Ok(true);
    }
    let p = a.p;
    let mut ra = Vec::new();
    let mut rb = Vec::new();
    for (&la, &lb) in a.lambda.iter().zip(&b.lambda) {
        let (ya, xa) = linkage(la, p)?;
        let (yb, xb) = linkage(lb, p)?;
        if !crate::affine_weyl::uparrow_leq(ya.alcove(), yb.alcove())? {
            return Ok(false);
        }
        ra.push(xa);
        rb.push(xb);
    }
    Ok(normalize_x0(&ra, p) == normalize_x0(&rb, p))
}

/// Consistency check used by self tests: the outer weight labels (w⋄, w̃_h w⋄) lie in AP(η).
pub fn outer_pairs_in_ap() -> Result<()> {
    let ap: BTreeSet<_> = ap_single().into_iter().collect();
    for w in FiniteWeyl::all() {
        let d = diamond(w);
        if !ap.contains(&(d, w_h() * d)) {
            return invariant(format!("(w⋄, w̃_h w⋄) not in AP for w = {w}"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rb(p: i64) -> TamePresentation {
        TamePresentation::new(vec![FiniteWeyl::S1], vec![Weight::new(16, 8, 0)], p, PresentationKind::Parameter)
            .unwrap()
    }

    #[test]
    fn normal_form_f1() {
        let a = normalize_x0(&[Weight::new(3, 1, 40)], 37);
        assert_eq!(a, vec![Weight::new(3, 1, 4)]);
    }

    #[test]
    fn normal_form_respects_lattice() {
        let p = 37;
        let l = vec![Weight::new(3, 1, 5), Weight::new(7, 2, -3)];
        // (p−π)ν for ν = (0,0;1) at embedding 0: c₀ += p, c₁ −= 1.
        let mut m = l.clone();
        m[0].c += p;
        m[1].c -= 1;
        assert_eq!(normalize_x0(&l, p), normalize_x0(&m, p));
    }

    #[test]
    fn pi_round_trip() {
        let x = vec![1, 2, 3];
        assert_eq!(pi(&pi_inverse(&x)), x);
        assert_eq!(pi_inverse(&x), vec![3, 1, 2]);
    }

    #[test]
    fn identity_presentation() {
        let om = Weight::new(20, 10, 0);
        let s = serre_weight_of_presentation(&[ExtAffineElement::E], &[om], 37).unwrap();
        assert_eq!(s, SerreWeight::new(vec![om - ETA], 37).unwrap());
    }

    #[test]
    fn ap_counts_match() {
        assert_eq!(ap_single().len(), adm_eta().regular().len());
        assert_eq!(ap_prime_single().len(), ap_single().len());
        outer_pairs_in_ap().unwrap();
    }

    #[test]
    fn fixture_depth() {
        assert_eq!(rb(37).depth(), 8);
    }

    #[test]
    fn obvious_weights_distinct() {
        let o = obvious_weights(&rb(37)).unwrap();
        let set: BTreeSet<_> = o.values().collect();
        assert_eq!(set.len(), 8);
    }
}
