//! Iwahori double-coset shapes by valuation-pivot elimination over F_q((v)).

use rand::Rng;

use crate::affine_weyl::DualElement;
use crate::error::{invalid, invariant, Result};
use crate::gsp4_base::{tcal, tcal_inverse, FiniteWeyl};

use super::field::ExactField;
use super::matrix::{PolyMat, RatMat};
use super::poly::Poly;

/// The monomial matrix of z̃ = w·t_ν (stored as t_{w(ν)}·w): Mat(w)·diag(v^{𝒯(ν)}).
pub fn dual_monomial(z: DualElement, field: ExactField) -> PolyMat {
    let nu = z.w.inverse().act(z.t);
    let perm = PolyMat::from_ints(field, &z.w.dual_matrix());
    perm.mul(&PolyMat::v_diagonal(field, &tcal(nu)))
}

fn pivot(a: &RatMat, rows: &[usize], cols: &[usize]) -> Option<(usize, usize)> {
    let mut best: Option<(i64, usize, usize)> = None;
    // Bottom-up rows, left-to-right columns; strict comparison keeps the first hit.
    for &r in rows.iter().rev() {
        for &c in cols {
            if let Some(k) = a.get(r, c).valuation() {
                if best.is_none_or(|(m, _, _)| k < m) {
                    best = Some((k, r, c));
                }
            }
        }
    }
    best.map(|(_, r, c)| (r, c))
}

/// The unique z̃ with A ∈ I·z̃·I, I the Iwahori with upper-triangular reduction mod v.
pub fn shape_of(a: &PolyMat) -> Result<DualElement> {
    let field = a.field();
    if field.characteristic() == 0 {
        return invalid("shape_of works over a prime field");
    }
    if a.n() != 4 {
        return invalid("shape_of expects a 4×4 matrix");
    }
    if a.det().is_zero() {
        return invalid("matrix is not invertible over F_q((v))");
    }
    let mut m = a.to_rat();
    let mut rows: Vec<usize> = (0..4).collect();
    let mut cols: Vec<usize> = (0..4).collect();
    let mut col_of_row = [0usize; 4];
    let mut exp_of_col = [0i64; 4];
    while !rows.is_empty() {
        let (r, c) = match pivot(&m, &rows, &cols) {
            Some(x) => x,
            None => return invariant("no pivot left in an invertible matrix"),
        };
        let pv = m.get(r, c).clone();
        for &i in &rows {
            if i == r || m.get(i, c).is_zero() {
                continue;
            }
            let x = m.get(i, c).div(&pv)?;
            let need = if i > r { 1 } else { 0 };
            if x.valuation().is_some_and(|k| k < need) {
                return invariant(format!("row operation {r}→{i} leaves the Iwahori"));
            }
            for j in 0..4 {
                let y = m.get(i, j) - &(&x * m.get(r, j));
                m.set(i, j, y);
            }
        }
        for &j in &cols {
            if j == c || m.get(r, j).is_zero() {
                continue;
            }
            let y = m.get(r, j).div(&pv)?;
            let need = if j < c { 1 } else { 0 };
            if y.valuation().is_some_and(|k| k < need) {
                return invariant(format!("column operation {c}→{j} leaves the Iwahori"));
            }
            for i in 0..4 {
                let z = m.get(i, j) - &(&y * m.get(i, c));
                m.set(i, j, z);
            }
        }
        col_of_row[r] = c;
        exp_of_col[c] = pv.valuation().expect("nonzero pivot");
        rows.retain(|&x| x != r);
        cols.retain(|&x| x != c);
    }
    let w = FiniteWeyl::all().find(|w| {
        let d = w.dual_matrix();
        (0..4).all(|r| d[r][col_of_row[r]] != 0)
    });
    let (Some(w), Some(nu)) = (w, tcal_inverse(exp_of_col)) else {
        return invariant("elimination did not end in the GSp4 torus normalizer");
    };
    Ok(DualElement::new(w.act(nu), w))
}

/// A random element of the Iwahori: integral, upper-triangular mod v, polynomial entries of degree ≤ `deg`.
pub fn random_iwahori(field: ExactField, rng: &mut impl Rng, deg: usize) -> PolyMat {
    let q = field.characteristic().max(2) as i64;
    PolyMat::from_fn_mut(field, 4, |i, j| {
        let mut c: Vec<_> = (0..=deg).map(|_| field.int(rng.gen_range(0..q))).collect();
        if i > j {
            c[0] = field.zero();
        }
        if i == j {
            c[0] = field.int(rng.gen_range(1..q));
        }
        Poly::from_coeffs(field, 0, c)
    })
}

impl PolyMat {
    fn from_fn_mut(field: ExactField, n: usize, mut f: impl FnMut(usize, usize) -> Poly) -> PolyMat {
        let rows = (0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect();
        PolyMat::from_rows(field, rows).expect("square")
    }
}

/// Reduction of a polynomial matrix over ℚ to F_q (entries must be q-integral).
pub fn reduce_mod(a: &PolyMat, q: u64) -> Result<PolyMat> {
    let fq = ExactField::prime(q)?;
    let rows = a
        .rows()
        .iter()
        .map(|r| {
            r.iter()
                .map(|p| {
                    let terms = p
                        .terms()
                        .map(|(k, s)| match s.as_rational() {
                            Some(x) => Ok((k, fq.from_rational(x)?)),
                            None => invalid("reduce_mod expects a rational matrix"),
                        })
                        .collect::<Result<Vec<_>>>()?;
                    Ok(Poly::from_terms(fq, terms))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    PolyMat::from_rows(fq, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::admissible::adm_eta;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn monomials_are_their_own_shape() {
        let f = ExactField::Prime(5);
        for x in &adm_eta().elements {
            let z = x.star();
            assert_eq!(shape_of(&dual_monomial(z, f)).unwrap(), z);
        }
    }

    #[test]
    fn sandwich_small_batch() {
        let f = ExactField::Prime(5);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for x in adm_eta().elements.iter().take(20) {
            let z = x.star();
            let a = random_iwahori(f, &mut rng, 2).mul(&dual_monomial(z, f)).mul(&random_iwahori(f, &mut rng, 2));
            assert_eq!(shape_of(&a).unwrap(), z, "{z}");
        }
    }

    #[test]
    fn rationals_rejected() {
        let f = ExactField::Rational;
        assert!(shape_of(&PolyMat::identity(f, 4)).is_err());
    }
}
