//! Cycles on component labels, the explicit Breuil–Mézard cycle of a Serre
//! weight, Weyl module classes, support bounds and colength-one counts.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul};

use serde::{Serialize, Serializer};

use crate::admissible::{classify_colength_one, weyl_orbit};
use crate::affine_weyl::{fold_point, linkage, uparrow_leq, w_h, ExtAffineElement, A1, RESTRICTED};
use crate::error::{invalid, invariant, Error, Result};
use crate::gsp4_base::{FiniteWeyl, Weight, ETA};
use crate::serre_weights::{
    ap_prime_single, intersect_w_jh, jh_factors, relative_position, restricted_alcove_index, w_question, SerreWeight,
    TamePresentation,
};

/// A finitely supported integer combination of Serre-weight labels.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Cycle {
    coeffs: BTreeMap<SerreWeight, i64>,
}

/// Classes in the Grothendieck group share the bookkeeping of cycles.
pub type GrothendieckClass = Cycle;

impl Cycle {
    pub fn zero() -> Cycle {
        Cycle::default()
    }

    pub fn single(s: SerreWeight) -> Cycle {
        Cycle { coeffs: BTreeMap::from([(s, 1)]) }
    }

    pub fn add_term(&mut self, s: SerreWeight, n: i64) {
        let v = self.coeff(&s) + n;
        if v == 0 {
            self.coeffs.remove(&s);
        } else {
            self.coeffs.insert(s, v);
        }
    }

    pub fn coeff(&self, s: &SerreWeight) -> i64 {
        self.coeffs.get(s).copied().unwrap_or(0)
    }

    pub fn support(&self) -> BTreeSet<SerreWeight> {
        self.coeffs.keys().cloned().collect()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SerreWeight, i64)> {
        self.coeffs.iter().map(|(k, &v)| (k, v))
    }

    pub fn is_effective(&self) -> bool {
        self.coeffs.values().all(|&v| v >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The part of the cycle supported on `keep`.
    pub fn restrict(&self, keep: &BTreeSet<SerreWeight>) -> Cycle {
        Cycle { coeffs: self.coeffs.iter().filter(|(k, _)| keep.contains(k)).map(|(k, &v)| (k.clone(), v)).collect() }
    }
}

impl Add for Cycle {
    type Output = Cycle;
    fn add(mut self, o: Cycle) -> Cycle {
        for (k, v) in o.coeffs {
            self.add_term(k, v);
        }
        self
    }
}

impl Mul<Cycle> for i64 {
    type Output = Cycle;
    fn mul(self, c: Cycle) -> Cycle {
        if self == 0 {
            return Cycle::zero();
        }
        Cycle { coeffs: c.coeffs.into_iter().map(|(k, v)| (k, self * v)).collect() }
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, v)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if *v != 1 {
                write!(f, "{v}·")?;
            }
            write!(f, "C[{k}]")?;
        }
        Ok(())
    }
}

impl Serialize for Cycle {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term<'a> {
            weight: &'a SerreWeight,
            coeff: i64,
        }
        let terms: Vec<_> = self.coeffs.iter().map(|(weight, &coeff)| Term { weight, coeff }).collect();
        terms.serialize(s)
    }
}

/// The C₀ member of λ's linkage class, when λ lies in C₂.
pub fn c2_companion(l: Weight, p: i64) -> Option<Weight> {
    let (y, rep) = linkage(l, p).ok()?;
    (y.alcove().restricted_index() == Some(2)).then_some(rep)
}

fn cartesian(options: &[Vec<Weight>]) -> Vec<Vec<Weight>> {
    let mut out = vec![vec![]];
    for opts in options {
        out = out
            .into_iter()
            .flat_map(|t: Vec<Weight>| {
                opts.iter().map(move |&o| {
                    let mut u = t.clone();
                    u.push(o);
                    u
                })
            })
            .collect();
    }
    out
}

/// Z_σ^BM: the sum of C_{F(λ′)} where each λ′_j is λ_j or, for λ_j ∈ C₂, its C₀ companion.
pub fn bm_cycle(sigma: &SerreWeight) -> Result<Cycle> {
    match sigma.depth() {
        Some(d) if d >= 3 => {}
        d => {
            return Err(Error::Genericity(format!("{sigma} has depth {d:?}, need 3")));
        }
    }
    let options: Vec<Vec<Weight>> = sigma
        .lambda
        .iter()
        .map(|&l| match c2_companion(l, sigma.p) {
            Some(c) => vec![l, c],
            None => vec![l],
        })
        .collect();
    let mut z = Cycle::zero();
    for lam in cartesian(&options) {
        z.add_term(SerreWeight::new(lam, sigma.p)?, 1);
    }
    Ok(z)
}

/// W_a element carrying A₀ to the restricted alcove A_k.
fn restricted_y(k: usize) -> ExtAffineElement {
    let a = RESTRICTED[k];
    fold_point(a.x6, a.y6, 6).expect("restricted alcoves are not on walls")
}

/// [W(λ)] for λ in a restricted alcove C_i (f = 1).
pub fn weyl_class(l: Weight, p: i64) -> Result<GrothendieckClass> {
    let i =
        restricted_alcove_index(l, p).ok_or_else(|| Error::Validation(format!("{l} is not in a restricted alcove")))?;
    let (_, rep) = linkage(l, p)?;
    let mut c = Cycle::single(SerreWeight::new(vec![l], p)?);
    if i > 0 {
        let prev = restricted_y(i - 1).p_dot(rep, p);
        c.add_term(SerreWeight::new(vec![prev], p)?, 1);
    }
    Ok(c)
}

/// The linked predecessor λ_{i−1} of λ ∈ C_i.
pub fn linked_predecessor(l: Weight, p: i64) -> Result<Option<Weight>> {
    let i =
        restricted_alcove_index(l, p).ok_or_else(|| Error::Validation(format!("{l} is not in a restricted alcove")))?;
    let (_, rep) = linkage(l, p)?;
    Ok((i > 0).then(|| restricted_y(i - 1).p_dot(rep, p)))
}

/// {κ p-restricted : κ ↑ σ}.
pub fn support_upper_bound(sigma: &SerreWeight) -> Result<BTreeSet<SerreWeight>> {
    let p = sigma.p;
    let mut options = Vec::new();
    for &l in &sigma.lambda {
        let (y, rep) = linkage(l, p)?;
        let mut opts = Vec::new();
        for (k, &a) in RESTRICTED.iter().enumerate() {
            if uparrow_leq(a, y.alcove())? {
                opts.push(restricted_y(k).p_dot(rep, p));
            }
        }
        options.push(opts);
    }
    cartesian(&options).into_iter().map(|lam| SerreWeight::new(lam, p)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ColOneCase {
    Extremal,
    Irregular,
    Regular,
}

/// Modulo X⁰, as presentations are only fixed up to it.
fn key(x: ExtAffineElement) -> (i64, i64, FiniteWeyl) {
    (x.t.a, x.t.b, x.w)
}

/// Which of the three colength-one configurations x = w̃(ρ̄,τ)_j falls into.
pub fn colength_one_case(x: ExtAffineElement) -> Option<ColOneCase> {
    let k = key(x);
    if weyl_orbit(ETA).into_iter().any(|m| key(ExtAffineElement::translation(m)) == k) {
        return Some(ColOneCase::Extremal);
    }
    let cls = classify_colength_one();
    if cls.irregular_set.iter().any(|&y| key(y) == k) {
        return Some(ColOneCase::Irregular);
    }
    if regular_case_elements().iter().any(|&y| key(y) == k) {
        return Some(ColOneCase::Regular);
    }
    None
}

/// w̃₂⁻¹w̃_h⁻¹w₀w̃₁ for (w̃₁,w̃₂) ∈ AP′(η) with w̃₁ ∈ Ω and w̃₂(A₀) = A₁.
pub fn regular_case_elements() -> Vec<ExtAffineElement> {
    let hw0 = w_h().inverse() * ExtAffineElement::finite(FiniteWeyl::W0);
    ap_prime_single()
        .into_iter()
        .filter(|(w1, w2)| w1.in_omega() && w2.alcove() == A1)
        .map(|(w1, w2)| w2.inverse() * hw0 * w1)
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ColOneReport {
    pub cases: Vec<ColOneCase>,
    pub j2: usize,
    pub components: BTreeSet<SerreWeight>,
    pub expected: usize,
}

/// W?(ρ̄) ∩ JH(σ̄(τ)) with the predicted count 2^{#𝒥₂}.
pub fn colength_one_components(rhobar: &TamePresentation, tau: &TamePresentation) -> Result<ColOneReport> {
    let rel = relative_position(rhobar, tau)?;
    let mut cases = Vec::new();
    for (j, &x) in rel.iter().enumerate() {
        match colength_one_case(x) {
            Some(c) => cases.push(c),
            None => return invalid(format!("embedding {j}: {x} is not a colength-one/extremal configuration")),
        }
    }
    let j2 = cases.iter().filter(|&&c| c != ColOneCase::Extremal).count();
    let components = intersect_w_jh(rhobar, tau)?;
    let expected = 1usize << j2;
    if components.len() != expected {
        return invariant(format!("found {} components, expected {expected}", components.len()));
    }
    Ok(ColOneReport { cases, j2, components, expected })
}

/// Σ n_σ·Z_σ^BM. With no table, n ≡ 1 on JH(σ̄(τ)).
pub fn bm_sum(tau: &TamePresentation, n_table: Option<&BTreeMap<SerreWeight, i64>>) -> Result<Cycle> {
    let default: BTreeMap<SerreWeight, i64>;
    let table = match n_table {
        Some(t) => t,
        None => {
            default = jh_factors(tau)?.into_iter().map(|(_, s)| (s, 1)).collect();
            &default
        }
    };
    if let Some((s, n)) = table.iter().find(|(_, &n)| n < 0) {
        return invalid(format!("negative multiplicity {n} for {s}"));
    }
    let mut z = Cycle::zero();
    for (s, &n) in table {
        if n > 0 {
            z = z + n * bm_cycle(s)?;
        }
    }
    Ok(z)
}

#[derive(Clone, Debug, Serialize)]
pub struct PullbackReport {
    pub cycle: Cycle,
    pub restricted: Cycle,
    pub components: BTreeSet<SerreWeight>,
    /// Labels where the restricted cycle and the component set disagree.
    pub discrepancy: BTreeSet<SerreWeight>,
}

/// bm_sum(0, τ, 1) restricted to the labels in W?(ρ̄), compared with W?(ρ̄) ∩ JH(σ̄(τ)).
pub fn bm_pullback(rhobar: &TamePresentation, tau: &TamePresentation) -> Result<PullbackReport> {
    let cycle = bm_sum(tau, None)?;
    let wq: BTreeSet<_> = w_question(rhobar)?.into_iter().map(|(_, s)| s).collect();
    let restricted = cycle.restrict(&wq);
    let components = intersect_w_jh(rhobar, tau)?;
    let reduced: Cycle = components.iter().fold(Cycle::zero(), |z, s| z + Cycle::single(s.clone()));
    let discrepancy =
        restricted.support().union(&components).filter(|s| restricted.coeff(s) != reduced.coeff(s)).cloned().collect();
    Ok(PullbackReport { cycle, restricted, components, discrepancy })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sw(a: i64, b: i64, p: i64) -> SerreWeight {
        SerreWeight::new(vec![Weight::new(a, b, 0)], p).unwrap()
    }

    #[test]
    fn cycle_arithmetic() {
        let a = Cycle::single(sw(10, 5, 37));
        let b = Cycle::single(sw(12, 5, 37));
        let z = a.clone() + b.clone() + (-1) * a.clone();
        assert_eq!(z, b);
        assert!(Cycle::zero().is_zero());
        assert!(!((-1) * a).is_effective());
    }

    #[test]
    fn c0_cycle_is_single() {
        let s = sw(10, 5, 37);
        assert_eq!(restricted_alcove_index(s.lambda[0], 37), Some(0));
        assert_eq!(bm_cycle(&s).unwrap(), Cycle::single(s));
    }

    #[test]
    fn shallow_rejected() {
        assert!(bm_cycle(&sw(1, 0, 37)).is_err());
    }
}
