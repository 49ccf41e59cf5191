//! Admissible sets, colength, regularity, Levi sub-admissible sets and the
//! colength-one classification for Adm(η).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::affine_weyl::{bruhat_interval_below, diamond, w_h, DualElement, ExtAffineElement};
use crate::error::{invalid, Result};
use crate::gsp4_base::{is_dominant, FiniteWeyl, Weight, ETA, POSITIVE_ROOTS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LeviLabel {
    T,
    M1,
    M2,
}

impl LeviLabel {
    pub const ALL: [LeviLabel; 3] = [LeviLabel::T, LeviLabel::M1, LeviLabel::M2];

    pub fn weyl(self) -> Vec<FiniteWeyl> {
        match self {
            LeviLabel::T => vec![FiniteWeyl::E],
            LeviLabel::M1 => vec![FiniteWeyl::E, FiniteWeyl::S1],
            LeviLabel::M2 => vec![FiniteWeyl::E, FiniteWeyl::S2],
        }
    }

    /// Index of the simple root of M among the positive roots.
    pub fn root_index(self) -> Option<usize> {
        match self {
            LeviLabel::T => None,
            LeviLabel::M1 => Some(0),
            LeviLabel::M2 => Some(1),
        }
    }

    pub fn of_simple(s: FiniteWeyl) -> Option<LeviLabel> {
        if s == FiniteWeyl::S1 {
            Some(LeviLabel::M1)
        } else if s == FiniteWeyl::S2 {
            Some(LeviLabel::M2)
        } else {
            None
        }
    }

    /// W^M = {w : ℓ(s_α w) > ℓ(w) for α ∈ Δ_M}.
    pub fn min_coset_reps(self) -> Vec<FiniteWeyl> {
        FiniteWeyl::all()
            .filter(|&w| self.weyl().iter().all(|&s| s == FiniteWeyl::E || (s * w).length() > w.length()))
            .collect()
    }
}

impl fmt::Display for LeviLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LeviLabel::T => "T",
            LeviLabel::M1 => "M1",
            LeviLabel::M2 => "M2",
        })
    }
}

/// The W-orbit of λ, without repetition.
pub fn weyl_orbit(l: Weight) -> Vec<Weight> {
    let set: BTreeSet<Weight> = FiniteWeyl::all().map(|w| w.act(l)).collect();
    set.into_iter().collect()
}

#[derive(Clone, Debug)]
pub struct AdmSet {
    pub lambda: Weight,
    pub elements: BTreeSet<ExtAffineElement>,
}

impl AdmSet {
    pub fn contains(&self, x: ExtAffineElement) -> bool {
        self.elements.contains(&x)
    }

    /// Membership of a dual element in Adm∨(λ).
    pub fn contains_dual(&self, x: DualElement) -> bool {
        self.elements.contains(&x.star())
    }

    pub fn top_length(&self) -> usize {
        ExtAffineElement::translation(self.lambda).length()
    }

    pub fn regular(&self) -> Vec<ExtAffineElement> {
        self.elements.iter().copied().filter(|&x| is_regular(x)).collect()
    }

    pub fn colength(&self, x: ExtAffineElement) -> Result<usize> {
        if !self.contains(x) {
            return invalid(format!("{x} is not in Adm({})", self.lambda));
        }
        Ok(self.top_length() - x.length())
    }

    pub fn of_colength(&self, k: usize) -> Vec<ExtAffineElement> {
        let top = self.top_length();
        self.elements.iter().copied().filter(|x| x.length() + k == top).collect()
    }
}

/// Adm(λ) as the union of the Bruhat intervals below the translations t_{w(λ)}.
pub fn adm_set(l: Weight) -> Result<AdmSet> {
    if !is_dominant(l) {
        return invalid(format!("{l} is not dominant"));
    }
    let mut elements = BTreeSet::new();
    for m in weyl_orbit(l) {
        elements.extend(bruhat_interval_below(ExtAffineElement::translation(m)));
    }
    Ok(AdmSet { lambda: l, elements })
}

/// Adm(η), computed once.
pub fn adm_eta() -> &'static AdmSet {
    static ADM: OnceLock<AdmSet> = OnceLock::new();
    ADM.get_or_init(|| adm_set(ETA).expect("η is dominant"))
}

/// Not contained in any critical strip 0 < ⟨x, α∨⟩ < 1.
pub fn is_regular(x: ExtAffineElement) -> bool {
    x.alcove().values6().iter().all(|&v| !(0 < v && v < 6))
}

pub fn colength(x: ExtAffineElement, l: Weight) -> Result<usize> {
    adm_set(l)?.colength(x)
}

/// w = w_M·w^M with w_M ∈ W_M and w^M ∈ W^M.
pub fn levi_decompose(w: FiniteWeyl, m: LeviLabel) -> (FiniteWeyl, FiniteWeyl) {
    let reps = m.min_coset_reps();
    m.weyl()
        .into_iter()
        .find_map(|wm| {
            let rest = wm.inverse() * w;
            reps.contains(&rest).then_some((wm, rest))
        })
        .expect("every Weyl element factors through W^M")
}

/// Length in W̃_M: number of M-root hyperplanes between A₀ and x(A₀).
pub fn levi_length(x: ExtAffineElement, m: LeviLabel) -> usize {
    match m.root_index() {
        None => 0,
        Some(k) => x.alcove().values6()[k].div_euclid(6).unsigned_abs() as usize,
    }
}

/// Whether x and y lie in the same coset of the affine Weyl group of M.
fn same_levi_coset(x: ExtAffineElement, y: ExtAffineElement, m: LeviLabel) -> bool {
    let d = x.t - y.t;
    match m.root_index() {
        None => d == Weight::ZERO && x.w == y.w,
        Some(k) => {
            let a = POSITIVE_ROOTS[k];
            // d must be an integer multiple of α.
            let q = if a.a != 0 { d.a / a.a } else { d.b / a.b };
            q * a == d
        }
    }
}

/// Bruhat order of W̃_M; for M ≠ T its affine Weyl group is infinite dihedral.
pub fn levi_bruhat_leq(x: ExtAffineElement, y: ExtAffineElement, m: LeviLabel) -> bool {
    if x == y {
        return true;
    }
    same_levi_coset(x, y, m) && levi_length(x, m) < levi_length(y, m)
}

/// Adm_M(λ) inside W̃_M.
pub fn adm_levi(m: LeviLabel, l: Weight) -> BTreeSet<ExtAffineElement> {
    let tops: BTreeSet<Weight> = m.weyl().iter().map(|w| w.act(l)).collect();
    let mut out = BTreeSet::new();
    for &mu in &tops {
        let top = ExtAffineElement::translation(mu);
        let Some(k) = m.root_index() else {
            out.insert(top);
            continue;
        };
        let len = levi_length(top, m) as i64;
        let s = FiniteWeyl::reflection(k);
        for j in -len - 1..=len + 1 {
            for w in [FiniteWeyl::E, s] {
                let x = top * ExtAffineElement::new(j * POSITIVE_ROOTS[k], w);
                if levi_bruhat_leq(x, top, m) {
                    out.insert(x);
                }
            }
        }
    }
    out
}

/// (w^M)⁻¹·Adm_M(λ)·w^M.
pub fn adm_levi_conjugate(m: LeviLabel, wm: FiniteWeyl, l: Weight) -> Result<BTreeSet<ExtAffineElement>> {
    if !m.min_coset_reps().contains(&wm) {
        return invalid(format!("{wm} is not a minimal coset representative for {m}"));
    }
    let c = ExtAffineElement::finite(wm);
    Ok(adm_levi(m, l).into_iter().map(|x| c.inverse() * x * c).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IrregularMember {
    pub w: FiniteWeyl,
    pub s: FiniteWeyl,
    pub element: ExtAffineElement,
    /// ((sw)⋄)⁻¹w̃_h⁻¹w₀s(sw)⋄ equals the element exactly.
    pub swapped_exact: bool,
    /// (w^M)⁻¹t_η s w^M equals the element exactly.
    pub levi_exact: bool,
    /// Both identities hold modulo X⁰.
    pub mod_x0: bool,
}

#[derive(Clone, Debug)]
pub struct ColengthOneClassification {
    pub irregular: Vec<IrregularMember>,
    pub irregular_set: BTreeSet<ExtAffineElement>,
    pub regular: BTreeSet<ExtAffineElement>,
}

/// (w⋄)⁻¹ w̃_h⁻¹ w₀ s w⋄.
pub fn irregular_element(w: FiniteWeyl, s: FiniteWeyl) -> ExtAffineElement {
    let d = diamond(w);
    d.inverse() * w_h().inverse() * ExtAffineElement::finite(FiniteWeyl::W0 * s) * d
}

pub fn classify_colength_one() -> ColengthOneClassification {
    let mut irregular = Vec::new();
    for w in FiniteWeyl::all() {
        for s in [FiniteWeyl::S1, FiniteWeyl::S2] {
            let element = irregular_element(w, s);
            let swapped = irregular_element(s * w, s);
            let (_, wm) = levi_decompose(w, LeviLabel::of_simple(s).unwrap());
            let c = ExtAffineElement::finite(wm);
            let levi = c.inverse() * ExtAffineElement::new(ETA, s) * c;
            irregular.push(IrregularMember {
                w,
                s,
                element,
                swapped_exact: swapped == element,
                levi_exact: levi == element,
                mod_x0: swapped.mod_x0() == element.mod_x0() && levi.mod_x0() == element.mod_x0(),
            });
        }
    }
    let irregular_set: BTreeSet<_> = irregular.iter().map(|m| m.element).collect();
    let regular = adm_eta().of_colength(1).into_iter().filter(|x| !irregular_set.contains(x)).collect();
    ColengthOneClassification { irregular, irregular_set, regular }
}

/// Tag describing where an element of Adm(η) sits.
pub fn adm_eta_tag(x: ExtAffineElement, cls: &ColengthOneClassification) -> &'static str {
    let adm = adm_eta();
    match adm.colength(x) {
        Ok(0) => "translation",
        Ok(1) if cls.irregular_set.contains(&x) => "colength-one-irregular",
        Ok(1) => "colength-one-regular",
        Ok(_) => "interior",
        Err(_) => "outside",
    }
}

/// Elements of Adm(η) grouped by length.
pub fn adm_by_length(adm: &AdmSet) -> BTreeMap<usize, Vec<ExtAffineElement>> {
    let mut out: BTreeMap<usize, Vec<ExtAffineElement>> = BTreeMap::new();
    for &x in &adm.elements {
        out.entry(x.length()).or_default().push(x);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adm_zero_is_trivial() {
        let a = adm_set(Weight::ZERO).unwrap();
        assert_eq!(a.elements.len(), 1);
        assert!(a.contains(ExtAffineElement::E));
    }

    #[test]
    fn adm_eta_contains_translations() {
        for m in weyl_orbit(ETA) {
            assert!(adm_eta().contains(ExtAffineElement::translation(m)));
        }
        assert_eq!(weyl_orbit(ETA).len(), 8);
        assert_eq!(adm_eta().colength(ExtAffineElement::translation(ETA)).unwrap(), 0);
    }

    #[test]
    fn non_dominant_rejected() {
        assert!(adm_set(Weight::new(-1, 0, 0)).is_err());
    }

    #[test]
    fn identity_is_irregular() {
        assert!(!is_regular(ExtAffineElement::E));
    }

    #[test]
    fn levi_decompose_examples() {
        for m in LeviLabel::ALL {
            assert_eq!(levi_decompose(FiniteWeyl::E, m), (FiniteWeyl::E, FiniteWeyl::E));
        }
        assert_eq!(levi_decompose(FiniteWeyl::S1, LeviLabel::M1), (FiniteWeyl::S1, FiniteWeyl::E));
        let s1s2 = FiniteWeyl::from_word("s1s2").unwrap();
        assert_eq!(levi_decompose(s1s2, LeviLabel::M1), (FiniteWeyl::S1, FiniteWeyl::S2));
    }

    #[test]
    fn levi_adm_sizes() {
        assert_eq!(adm_levi(LeviLabel::T, ETA).len(), 1);
        for m in [LeviLabel::M1, LeviLabel::M2] {
            let s = adm_levi(m, ETA);
            assert_eq!(s.len(), 3, "{m}");
            let k = m.root_index().unwrap();
            assert!(s.contains(&ExtAffineElement::new(ETA, FiniteWeyl::reflection(k))));
        }
    }

    #[test]
    fn irregular_members_have_colength_one() {
        for w in FiniteWeyl::all() {
            for s in [FiniteWeyl::S1, FiniteWeyl::S2] {
                let x = irregular_element(w, s);
                assert_eq!(adm_eta().colength(x).unwrap(), 1);
                assert!(!is_regular(x));
            }
        }
    }
}
