//! Torus-fixed points of the local-model charts, as sets of dual elements.

use crate::admissible::adm_eta;
use crate::affine_weyl::{
    bruhat_interval_below, element_with_alcove, up_box, w_h, DualElement, ExtAffineElement, DEFAULT_BOX,
};
use crate::error::{invalid, Result};
use crate::gsp4_base::FiniteWeyl;
use crate::serre_weights::ap_prime_single;

pub type DualTuple = Vec<DualElement>;

#[derive(Clone, Debug, PartialEq)]
pub struct FixedPointSet {
    /// Per embedding, each point paired with the w̃ it came from.
    pub factors: Vec<Vec<(ExtAffineElement, DualElement)>>,
}

impl FixedPointSet {
    pub fn len(&self) -> usize {
        self.factors.iter().map(Vec::len).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All tuples, in lexicographic order of the factor lists.
    pub fn elements(&self) -> Vec<DualTuple> {
        self.factors.iter().fold(vec![Vec::new()], |acc, fac| {
            acc.iter()
                .flat_map(|t| {
                    fac.iter().map(move |(_, z)| {
                        let mut t = t.clone();
                        t.push(*z);
                        t
                    })
                })
                .collect()
        })
    }

    /// Per embedding, whether every point lies in Adm∨(η).
    pub fn in_adm(&self) -> Vec<bool> {
        self.factors.iter().map(|fac| fac.iter().all(|(_, z)| adm_eta().contains_dual(*z))).collect()
    }
}

/// {(w̃₂⁻¹ w̃_h⁻¹ w̃)* : w̃ ≤ w₀w̃₁}, embedding by embedding.
pub fn fixed_point_set_t(w1: &[ExtAffineElement], w2: &[ExtAffineElement]) -> Result<FixedPointSet> {
    if w1.len() != w2.len() || w1.is_empty() {
        return invalid("w1 and w2 must be tuples of the same positive length");
    }
    let ap = ap_prime_single();
    let w0 = ExtAffineElement::finite(FiniteWeyl::W0);
    let wh_inv = w_h().inverse();
    let mut factors = Vec::new();
    for (&a, &b) in w1.iter().zip(w2) {
        if !ap.contains(&(a.mod_x0(), b.mod_x0())) && !ap.contains(&(a, b)) {
            return invalid(format!("({a}, {b}) is not in AP′(η)"));
        }
        let fac = bruhat_interval_below(w0 * a).into_iter().map(|w| (w, (b.inverse() * wh_inv * w).star())).collect();
        factors.push(fac);
    }
    Ok(FixedPointSet { factors })
}

/// {(w̃₁⁻¹ w̃_h⁻¹ s w₀ w̃)* : w̃ ↑ w̃₁ dominant}, dropping w̃ ∈ Ω when s = s2.
pub fn fixed_point_set_colone(w1: &[ExtAffineElement], s: FiniteWeyl) -> Result<FixedPointSet> {
    if s != FiniteWeyl::S1 && s != FiniteWeyl::S2 {
        return invalid("s must be s1 or s2");
    }
    let bx = up_box(DEFAULT_BOX);
    let w0 = ExtAffineElement::finite(FiniteWeyl::W0);
    let sw = ExtAffineElement::finite(s);
    let wh_inv = w_h().inverse();
    let mut factors = Vec::new();
    for &a in w1 {
        if !a.is_restricted() {
            return invalid(format!("{a} is not restricted"));
        }
        let mut fac = Vec::new();
        for b in bx.below(a.alcove())? {
            if !b.is_dominant() {
                continue;
            }
            let w = element_with_alcove(b, a.class())?;
            if s == FiniteWeyl::S2 && w.in_omega() {
                continue;
            }
            fac.push((w, (a.inverse() * wh_inv * sw * w0 * w).star()));
        }
        fac.sort();
        factors.push(fac);
    }
    Ok(FixedPointSet { factors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine_weyl::A0;
    use crate::gsp4_base::Weight;

    #[test]
    fn a0_sizes() {
        let w = element_with_alcove(A0, 0).unwrap();
        assert_eq!(fixed_point_set_colone(&[w], FiniteWeyl::S1).unwrap().len(), 1);
        assert_eq!(fixed_point_set_colone(&[w], FiniteWeyl::S2).unwrap().len(), 0);
        let far = ExtAffineElement::translation(Weight::new(10, 0, 0));
        assert!(fixed_point_set_colone(&[far], FiniteWeyl::S1).is_err());
    }

    #[test]
    fn t_set_matches_interval() {
        for (a, b) in ap_prime_single() {
            let s = fixed_point_set_t(&[a], &[b]).unwrap();
            let w0 = ExtAffineElement::finite(FiniteWeyl::W0);
            assert_eq!(s.len(), bruhat_interval_below(w0 * a).len());
        }
    }
}
