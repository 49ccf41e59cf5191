//! Similitude factor, E(v)-elementary divisors and the algebraic monodromy condition.

use std::fmt;

use serde::Serialize;

use crate::error::{invalid, Result};

use crate::affine_weyl::DualElement;
use crate::gsp4_base::tcal;

use super::field::{ExactField, Scalar};
use super::matrix::{j_matrix, Matrix, PolyMat, RatMat};
use super::poly::{Poly, RatFunc, Ring};
use super::shape::dual_monomial;

/// E(v) = v + p. In characteristic p this is v.
pub fn e_poly(field: ExactField, p: u64) -> Poly {
    Poly::from_coeffs(field, 0, vec![field.int(p as i64), field.one()])
}

/// The root of E(v).
pub fn e_root(field: ExactField, p: u64) -> Scalar {
    -field.int(p as i64)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Similitude {
    /// AᵗJA = c·J with c = cofactor·E^e_power, cofactor prime to E.
    Pass { c: Poly, e_power: i64, cofactor: RatFunc },
    /// The first entry where AᵗJA differs from c·J.
    Fail { entry: (usize, usize), expected: Poly, found: Poly },
}

impl Similitude {
    pub fn passed(&self) -> bool {
        matches!(self, Similitude::Pass { .. })
    }
}

pub fn symplectic_similitude(a: &PolyMat, p: u64) -> Result<Similitude> {
    if a.n() != 4 {
        return invalid("expected a 4×4 matrix");
    }
    if a.det().is_zero() {
        return invalid("matrix is not invertible");
    }
    let f = a.field();
    let j = j_matrix(f);
    let s = a.transpose().mul(&j).mul(a);
    let c = s.get(0, 3).clone();
    let target = j.scale(&c);
    for r in 0..4 {
        for k in 0..4 {
            if s.get(r, k) != target.get(r, k) {
                return Ok(Similitude::Fail {
                    entry: (r, k),
                    expected: target.get(r, k).clone(),
                    found: s.get(r, k).clone(),
                });
            }
        }
    }
    let e = e_poly(f, p);
    let k = c.valuation_at(&e_root(f, p)).unwrap_or(0);
    let cofactor = RatFunc::new(c.clone(), e.pow(k as u32))?;
    Ok(Similitude::Pass { c, e_power: k, cofactor })
}

/// Elementary-divisor exponents of A at E(v), sorted decreasingly.
pub fn e_divisor_pattern(a: &PolyMat, p: u64) -> Result<[i64; 4]> {
    if a.n() != 4 {
        return invalid("expected a 4×4 matrix");
    }
    if a.det().is_zero() {
        return invalid("matrix is singular");
    }
    let root = e_root(a.field(), p);
    let subsets = |k: usize| -> Vec<Vec<usize>> {
        (0u32..16)
            .filter(|m| m.count_ones() as usize == k)
            .map(|m| (0..4).filter(|i| m >> i & 1 == 1).collect())
            .collect()
    };
    let mut d = [0i64; 5];
    for (k, dk) in d.iter_mut().enumerate().skip(1) {
        let s = subsets(k);
        *dk = s
            .iter()
            .flat_map(|r| s.iter().map(move |c| (r, c)))
            .filter_map(|(r, c)| a.minor(r, c).valuation_at(&root))
            .min()
            .expect("an invertible matrix has a nonzero k×k minor");
    }
    let mut pat = [d[1] - d[0], d[2] - d[1], d[3] - d[2], d[4] - d[3]];
    pat.sort_unstable_by(|x, y| y.cmp(x));
    Ok(pat)
}

/// Dominance: equal totals and partial sums of the sorted pattern bounded by those of `bound`.
pub fn dominated_by(pattern: [i64; 4], bound: [i64; 4]) -> bool {
    let (mut x, mut y) = (0, 0);
    for i in 0..4 {
        x += pattern[i];
        y += bound[i];
        if x > y {
            return false;
        }
    }
    x == y
}

/// 𝐚 = (a1, a2, a3) and the prime p, over the working field.
#[derive(Clone, Debug, PartialEq)]
pub struct MonodromyParams {
    pub a: [Scalar; 3],
    pub p: u64,
}

impl MonodromyParams {
    /// std(𝐚) = (a1, a2, a3−a2, a3−a1).
    pub fn std(&self) -> [Scalar; 4] {
        let [a1, a2, a3] = &self.a;
        [a1.clone(), a2.clone(), a3 - a2, a3 - a1]
    }

    /// Pairings of 𝐚 with the positive roots.
    fn root_values(&self) -> [Scalar; 4] {
        let [a1, a2, a3] = &self.a;
        [a1 - a2, &(a2 + a2) - a3, &(a1 + a2) - a3, &(a1 + a1) - a3]
    }

    /// m-genericity, defined when 𝐚 is integral over ℚ: every root value is
    /// at distance more than m from pℤ. None otherwise.
    pub fn is_generic(&self, m: i64) -> Option<bool> {
        let p = self.p as i64;
        let mut ok = true;
        for v in self.root_values() {
            let r = v.as_rational()?;
            if !r.is_integer() {
                return None;
            }
            let n: i64 = r.to_integer().try_into().ok()?;
            let dist = n.rem_euclid(p).min(p - n.rem_euclid(p));
            ok &= dist > m;
        }
        Some(ok)
    }

    pub fn from_std(d: &[Scalar; 4], p: u64) -> Result<MonodromyParams> {
        if &d[0] + &d[3] != &d[1] + &d[2] {
            return invalid("diagonal is not in the GSp4 torus");
        }
        Ok(MonodromyParams { a: [d[0].clone(), d[1].clone(), &d[1] + &d[2]], p })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Clause {
    /// (v+p)·M has a pole.
    Poles,
    /// (v+p)·M is not in the symplectic similitude Lie algebra.
    Symplectic,
    /// (v+p)·M mod v is not upper triangular.
    Triangular,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Clause::Poles => "(i)",
            Clause::Symplectic => "(ii)",
            Clause::Triangular => "(iii)",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Defect {
    pub clause: Clause,
    pub entry: (usize, usize),
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonodromyReport {
    /// (v+p)·M.
    pub n: RatMat,
    pub defects: Vec<Defect>,
}

impl MonodromyReport {
    pub fn passed(&self) -> bool {
        self.defects.is_empty()
    }

    pub fn first_failure(&self) -> Option<Clause> {
        self.defects.first().map(|d| d.clause)
    }
}

/// M = v·A′·A⁻¹ + A·Diag(std 𝐚)·A⁻¹ and the three clauses on (v+p)·M.
pub fn monodromy_defect(a: &PolyMat, params: &MonodromyParams) -> Result<MonodromyReport> {
    let f = a.field();
    let det = a.det();
    if det.is_zero() {
        return invalid("matrix is singular");
    }
    let ar = a.to_rat();
    let inv_det = RatFunc::from(det).inv()?;
    let adj = ar.adjugate();
    let da = ar.map(RatFunc::v_derivative);
    let std = params.std();
    let diag =
        RatMat::from_fn(
            f,
            4,
            |i, j| {
                if i == j {
                    RatFunc::from(Poly::constant(std[i].clone()))
                } else {
                    RatFunc::zero_in(f)
                }
            },
        );
    let e = RatFunc::from(e_poly(f, params.p));
    let n = da.add(&ar.mul(&diag)).mul(&adj).scale(&(&inv_det * &e));

    let mut defects = Vec::new();
    for i in 0..4 {
        for k in 0..4 {
            let x = n.get(i, k);
            if !x.is_polynomial() {
                defects.push(Defect { clause: Clause::Poles, entry: (i, k), detail: x.to_string() });
            }
        }
    }
    let j = j_matrix(f).to_rat();
    let s = n.transpose().mul(&j).add(&j.mul(&n));
    let c = s.get(0, 3).clone();
    let target = j.scale(&c);
    for i in 0..4 {
        for k in 0..4 {
            if s.get(i, k) != target.get(i, k) {
                defects.push(Defect { clause: Clause::Symplectic, entry: (i, k), detail: s.get(i, k).to_string() });
            }
        }
    }
    for i in 0..4 {
        for k in 0..i {
            if let Ok(x) = n.get(i, k).at_zero() {
                if !x.is_zero() {
                    defects.push(Defect { clause: Clause::Triangular, entry: (i, k), detail: x.to_string() });
                }
            }
        }
    }
    Ok(MonodromyReport { n, defects })
}

/// g·A·g⁻¹ for the monomial g of a dual element.
pub fn conjugate_matrix(a: &PolyMat, z: DualElement) -> Result<PolyMat> {
    let g = dual_monomial(z, a.field());
    let gi = g.to_rat().inverse()?;
    let b = g.to_rat().mul(&a.to_rat()).mul(&gi);
    b.try_map(|x| match x.as_poly() {
        Some(p) => Ok(p.clone()),
        None => invalid("conjugate has a non-Laurent entry"),
    })
}

/// The parameter that g·A·g⁻¹ satisfies when A satisfies ∇_𝐚, for g = Mat(w)·v^{𝒯(ν)}:
/// std 𝐚 ↦ w(std 𝐚 + 𝒯(ν)).
pub fn conjugate_params(params: &MonodromyParams, z: DualElement) -> Result<MonodromyParams> {
    let f = params.a[0].field();
    let nu = z.w.inverse().act(z.t);
    let t = tcal(nu);
    let d = params.std();
    let m = z.w.dual_matrix();
    let mut out: [Scalar; 4] = std::array::from_fn(|_| f.zero());
    for k in 0..4 {
        let r = (0..4).find(|&r| m[r][k] != 0).expect("permutation matrix");
        out[r] = &d[k] + &f.int(t[k]);
    }
    MonodromyParams::from_std(&out, params.p)
}

impl<T: Ring> Matrix<T> {
    /// Entrywise map that may fail.
    pub fn try_map<U: Ring>(&self, f: impl Fn(&T) -> Result<U>) -> Result<Matrix<U>> {
        let rows = self.rows().iter().map(|r| r.iter().map(&f).collect()).collect::<Result<Vec<_>>>()?;
        Matrix::from_rows(self.field(), rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag_e(f: ExactField, p: u64, k: [u32; 4]) -> PolyMat {
        let e = e_poly(f, p);
        PolyMat::from_fn(f, 4, |i, j| if i == j { e.pow(k[i]) } else { Poly::zero(f) })
    }

    #[test]
    fn identity_and_diagonal() {
        let f = ExactField::Rational;
        assert_eq!(e_divisor_pattern(&PolyMat::identity(f, 4), 37).unwrap(), [0; 4]);
        assert_eq!(e_divisor_pattern(&diag_e(f, 37, [0, 2, 1, 3]), 37).unwrap(), [3, 2, 1, 0]);
        match symplectic_similitude(&PolyMat::identity(f, 4), 37).unwrap() {
            Similitude::Pass { c, e_power, .. } => {
                assert!(c.is_one());
                assert_eq!(e_power, 0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn diagonal_passes_monodromy() {
        let f = ExactField::Rational;
        let a = diag_e(f, 37, [3, 2, 1, 0]);
        let params = MonodromyParams { a: [f.int(5), f.ratio(-2, 3).unwrap(), f.int(11)], p: 37 };
        assert!(monodromy_defect(&a, &params).unwrap().passed());
        let g = diag_e(ExactField::Prime(37), 37, [3, 2, 1, 0]);
        let fp = ExactField::Prime(37);
        let params = MonodromyParams { a: [fp.int(5), fp.int(3), fp.int(11)], p: 37 };
        assert!(monodromy_defect(&g, &params).unwrap().passed());
    }

    #[test]
    fn dominance() {
        assert!(dominated_by([2, 2, 1, 1], [3, 2, 1, 0]));
        assert!(!dominated_by([4, 1, 1, 0], [3, 2, 1, 0]));
        assert!(!dominated_by([2, 2, 1, 0], [3, 2, 1, 0]));
    }

    #[test]
    fn genericity_of_integer_params() {
        let f = ExactField::Rational;
        let ok = MonodromyParams { a: [f.int(20), f.int(10), f.int(12)], p: 37 };
        assert_eq!(ok.is_generic(3), Some(true));
        let bad = MonodromyParams { a: [f.int(1), f.int(0), f.int(0)], p: 37 };
        assert_eq!(bad.is_generic(3), Some(false));
        let frac = MonodromyParams { a: [f.ratio(1, 2).unwrap(), f.int(0), f.int(0)], p: 37 };
        assert_eq!(frac.is_generic(3), None);
    }
}
