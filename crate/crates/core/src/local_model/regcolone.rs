//! The universal matrix of the regular colength-one chart and its monodromy-solved family.

use std::collections::BTreeMap;

use rand::Rng;

use crate::error::{invalid, Error, Result};

use super::field::{ExactField, Scalar};
use super::invariants::{e_poly, MonodromyParams};
use super::matrix::PolyMat;
use super::poly::Poly;

#[derive(Clone, Debug, PartialEq)]
pub struct RegColOneParams {
    pub c00: Scalar,
    pub c21: Scalar,
    pub c13: Scalar,
    pub c31: Scalar,
    pub c31p: Scalar,
    pub c33: Scalar,
    pub c33p: Scalar,
    pub c33pp: Scalar,
    pub a: [Scalar; 4],
    pub e: Scalar,
}

/// How c00·y = p is met. Over ℚ only `Generic` exists; in characteristic p
/// the locus c00·y = 0 has the extra branch c00 = 0 with c33 free.
#[derive(Clone, Debug, PartialEq)]
pub enum Branch {
    Generic,
    C00Zero { c33: Scalar },
}

/// Free coordinates of the solved family beyond X_p: (c21, c13, c31).
pub const FREE_COORDINATES: usize = 3;

/// Free parameters of the source over the Levi chart: 4 for M = T, 3 otherwise.
pub fn relative_dimension(levi_is_torus: bool) -> usize {
    if levi_is_torus {
        4
    } else {
        3
    }
}

/// Y = (a1−a2+1)/e and Z = (a0−a3−1)/e, i.e. d1−d2 and d0−d3.
fn yz(a: &[Scalar; 4], e: &Scalar) -> Result<(Scalar, Scalar)> {
    let f = e.field();
    let one = f.one();
    let y = (&(&a[1] - &a[2]) + &one).div(e)?;
    let z = (&(&a[0] - &a[3]) - &one).div(e)?;
    Ok((y, z))
}

fn check_nondegenerate(a: &[Scalar; 4], e: &Scalar) -> Result<(Scalar, Scalar)> {
    if e.is_zero() {
        return invalid("e must be nonzero");
    }
    let f = e.field();
    let (y, z) = yz(a, e)?;
    let one = f.one();
    if (&z + &one).is_zero() {
        return invalid("e + a0 − a3 − 1 vanishes");
    }
    if z.is_zero() || (&z - &one).is_zero() || z == y {
        return invalid("degenerate (a, e): need a0−a3−1 ∉ {0, e} and d0 ≠ d1");
    }
    if f.characteristic() == 2 {
        return invalid("characteristic 2 is not supported");
    }
    Ok((y, z))
}

impl RegColOneParams {
    pub fn field(&self) -> ExactField {
        self.e.field()
    }

    /// The diagonal D = std(𝐚) solving the chart: (Z, (Z+Y)/2, (Z−Y)/2, 0).
    pub fn diagonal(&self) -> Result<[Scalar; 4]> {
        let (y, z) = check_nondegenerate(&self.a, &self.e)?;
        let f = self.field();
        let half = f.ratio(1, 2)?;
        Ok([z.clone(), &(&z + &y) * &half, &(&z - &y) * &half, f.zero()])
    }

    pub fn monodromy_params(&self, p: u64) -> Result<MonodromyParams> {
        MonodromyParams::from_std(&self.diagonal()?, p)
    }

    /// The X_p coordinate y = ((e+a1−a2+1)·c13c31 + (a0−a3−1−e)·c33)/(e+a0−a3−1).
    pub fn y(&self) -> Result<Scalar> {
        let one = self.field().one();
        let num1 = &(&(&self.e + &self.a[1]) - &self.a[2]) + &one;
        let num2 = &(&(&self.a[0] - &self.a[3]) - &one) - &self.e;
        let den = &(&(&self.e + &self.a[0]) - &self.a[3]) - &one;
        let t = &(&num1 * &(&self.c13 * &self.c31)) + &(&num2 * &self.c33);
        t.div(&den)
    }

    /// c00·y − p; zero exactly on the solved locus.
    pub fn relation_defect(&self, p: u64) -> Result<Scalar> {
        Ok(&(&self.c00 * &self.y()?) - &self.field().int(p as i64))
    }

    /// Solves c31′, c33 (generic branch), c33′, c33″ from the monodromy condition.
    #[allow(clippy::too_many_arguments)]
    pub fn solved(
        p: u64,
        c00: Scalar,
        c21: Scalar,
        c13: Scalar,
        c31: Scalar,
        a: [Scalar; 4],
        e: Scalar,
        branch: Branch,
    ) -> Result<RegColOneParams> {
        let f = e.field();
        let (y, z) = check_nondegenerate(&a, &e)?;
        let ps = f.int(p as i64);
        let one = f.one();
        let c33 = match branch {
            Branch::Generic => {
                let yv =
                    ps.div(&c00).map_err(|_| Error::Validation("c00 must be nonzero on the generic branch".into()))?;
                (&(&(&z + &one) * &yv) - &(&(&y + &one) * &(&c13 * &c31))).div(&(&z - &one))?
            }
            Branch::C00Zero { c33 } => {
                if !ps.is_zero() || !c00.is_zero() {
                    return invalid("the c00 = 0 branch exists only in characteristic p, with c00 = 0");
                }
                c33
            }
        };
        let mut out =
            RegColOneParams { c00, c21, c13, c31, c31p: f.zero(), c33, c33p: f.zero(), c33pp: f.zero(), a, e };
        let d = out.diagonal()?;
        let x = &out.c31 + &(&(&out.c13 * &out.c21) * &(&d[0] - &d[2]));
        out.c31p = (-&(&ps * &x)).div(&(&d[0] - &d[1]))?;
        out.resolve_c33(p)?;
        Ok(out)
    }

    /// Recomputes c33′ and c33″ from the others.
    fn resolve_c33(&mut self, p: u64) -> Result<()> {
        let f = self.field();
        let (y, z) = yz(&self.a, &self.e)?;
        let ps = f.int(p as i64);
        let two = f.int(2);
        let c1331 = &self.c13 * &self.c31;
        let t1 = &(&ps * &c1331) * &(&y + &two);
        let t2 = &(&self.c13 * &self.c31p) * &y;
        let t3 = &(&two * &ps) * &self.c33;
        self.c33p = (&(&t1 - &t2) - &t3).div(&z)?;
        let p3 = if ps.is_zero() { f.zero() } else { ps.pow(3).div(&self.c00)? };
        self.c33pp = &(&p3 - &(&ps * &self.c33p)) - &(&ps.pow(2) * &self.c33);
        Ok(())
    }

    /// c33 + 1, with c33′ and c33″ recomputed so the matrix stays symplectic
    /// while c00·y = p fails.
    pub fn perturbed(&self, p: u64) -> Result<RegColOneParams> {
        let mut out = self.clone();
        out.c33 = &out.c33 + &self.field().one();
        out.resolve_c33(p)?;
        Ok(out)
    }

    /// A random draw. Parameters (a, e) have e = 1 and are integral; the rest
    /// are small integers, redrawn until the generic branch is defined.
    pub fn random(field: ExactField, p: u64, rng: &mut impl Rng) -> Result<RegColOneParams> {
        let char_p = field.int(p as i64).is_zero();
        for _ in 0..1000 {
            let mut int = |lo: i64, hi: i64| field.int(rng.gen_range(lo..=hi));
            let a = [int(10, 30), int(-10, 10), int(-10, 10), int(-30, -10)];
            let e = field.one();
            if check_nondegenerate(&a, &e).is_err() {
                continue;
            }
            let (c00, c21, c13, c31) = (int(-9, 9), int(-9, 9), int(-9, 9), int(-9, 9));
            let branch = if char_p && rng.gen_bool(0.5) {
                Branch::C00Zero { c33: field.int(rng.gen_range(-9..=9)) }
            } else {
                Branch::Generic
            };
            let c00 = if matches!(branch, Branch::C00Zero { .. }) { field.zero() } else { c00 };
            if let Ok(x) = RegColOneParams::solved(p, c00, c21, c13, c31, a, e, branch) {
                return Ok(x);
            }
        }
        invalid("could not draw nondegenerate parameters")
    }

    pub fn to_map(&self) -> BTreeMap<&'static str, String> {
        let mut m = BTreeMap::new();
        for (k, v) in [
            ("c00", &self.c00),
            ("c21", &self.c21),
            ("c13", &self.c13),
            ("c31", &self.c31),
            ("c31'", &self.c31p),
            ("c33", &self.c33),
            ("c33'", &self.c33p),
            ("c33''", &self.c33pp),
            ("a0", &self.a[0]),
            ("a1", &self.a[1]),
            ("a2", &self.a[2]),
            ("a3", &self.a[3]),
            ("e", &self.e),
        ] {
            m.insert(k, v.to_string());
        }
        m
    }

    /// The same parameters reduced to F_q.
    pub fn reduce(&self, q: u64) -> Result<RegColOneParams> {
        let fq = ExactField::prime(q)?;
        let r = |s: &Scalar| match s.as_rational() {
            Some(x) => fq.from_rational(x),
            None => invalid("reduce expects rational parameters"),
        };
        Ok(RegColOneParams {
            c00: r(&self.c00)?,
            c21: r(&self.c21)?,
            c13: r(&self.c13)?,
            c31: r(&self.c31)?,
            c31p: r(&self.c31p)?,
            c33: r(&self.c33)?,
            c33p: r(&self.c33p)?,
            c33pp: r(&self.c33pp)?,
            a: [r(&self.a[0])?, r(&self.a[1])?, r(&self.a[2])?, r(&self.a[3])?],
            e: r(&self.e)?,
        })
    }

    /// All c's zero: the torus-fixed point of the chart.
    pub fn fixed_point(field: ExactField) -> RegColOneParams {
        let z = field.zero();
        RegColOneParams {
            c00: z.clone(),
            c21: z.clone(),
            c13: z.clone(),
            c31: z.clone(),
            c31p: z.clone(),
            c33: z.clone(),
            c33p: z.clone(),
            c33pp: z.clone(),
            a: [field.int(20), field.int(0), field.int(0), field.int(-20)],
            e: field.one(),
        }
    }
}

/// The displayed universal matrix with E(v) = v + p.
pub fn build_regcolone_matrix(x: &RegColOneParams, p: u64) -> Result<PolyMat> {
    let f = x.field();
    let e = e_poly(f, p);
    let e2 = e.pow(2);
    let v = Poly::v(f);
    let ps = f.int(p as i64);
    let k = |s: &Scalar| Poly::constant(s.clone());
    let zero = Poly::zero(f);

    let r0 = vec![k(&x.c00), &k(&(&x.c00 * &x.c31p)) + &e.scale(&(&x.c00 * &x.c31)), k(&(&x.c00 * &x.c13)), {
        let c0 = &(&(&x.c00 * &x.c33p) + &(&ps * &(&x.c00 * &x.c33))) - &ps.pow(2);
        let c1 = &(&x.c00 * &x.c33) - &ps;
        &(&k(&c0) + &e.scale(&c1)) - &e2
    }];
    let r1 = vec![zero.clone(), e2.clone(), zero.clone(), e2.scale(&x.c13)];
    let c1321 = &x.c13 * &x.c21;
    let r2 = vec![
        zero.clone(),
        (&v * &e).scale(&x.c21),
        e.clone(),
        &e.scale(&-&(&x.c31p + &(&ps * &c1321))) + &e2.scale(&(&c1321 - &x.c31)),
    ];
    let r3 = vec![
        v.clone(),
        &v.scale(&x.c31p) + &(&v * &e).scale(&x.c31),
        v.scale(&x.c13),
        &(&k(&x.c33pp) + &e.scale(&x.c33p)) + &e2.scale(&x.c33),
    ];
    PolyMat::from_rows(f, vec![r0, r1, r2, r3])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine_weyl::ExtAffineElement;
    use crate::gsp4_base::{FiniteWeyl, Weight};
    use crate::local_model::invariants::{
        dominated_by, e_divisor_pattern, monodromy_defect, symplectic_similitude, Clause, Similitude,
    };
    use crate::local_model::shape::shape_of;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn check_family(field: ExactField, seed: u64, n: usize) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..n {
            let x = RegColOneParams::random(field, 37, &mut rng).unwrap();
            assert!(x.relation_defect(37).unwrap().is_zero());
            let a = build_regcolone_matrix(&x, 37).unwrap();
            match symplectic_similitude(&a, 37).unwrap() {
                Similitude::Pass { e_power, .. } => assert_eq!(e_power, 3),
                other => panic!("{other:?}"),
            }
            let pat = e_divisor_pattern(&a, 37).unwrap();
            assert_eq!(pat.iter().sum::<i64>(), 6);
            assert!(dominated_by(pat, [3, 2, 1, 0]), "{pat:?}");
            let mp = x.monodromy_params(37).unwrap();
            let rep = monodromy_defect(&a, &mp).unwrap();
            assert!(rep.passed(), "{:?}", rep.defects);
            if !x.c00.is_zero() {
                let y = x.perturbed(37).unwrap();
                let b = build_regcolone_matrix(&y, 37).unwrap();
                assert!(symplectic_similitude(&b, 37).unwrap().passed());
                let rep = monodromy_defect(&b, &mp).unwrap();
                assert_eq!(rep.first_failure(), Some(Clause::Poles), "{:?}", rep.defects);
            }
        }
    }

    #[test]
    fn solved_family_over_q() {
        check_family(ExactField::Rational, 1, 10);
    }

    #[test]
    fn solved_family_over_fp() {
        check_family(ExactField::Prime(37), 2, 10);
    }

    #[test]
    fn conjugation_by_omega() {
        use crate::affine_weyl::omega_element;
        use crate::local_model::invariants::{conjugate_matrix, conjugate_params};
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for field in [ExactField::Rational, ExactField::Prime(37)] {
            let x = RegColOneParams::random(field, 37, &mut rng).unwrap();
            let a = build_regcolone_matrix(&x, 37).unwrap();
            let mp = x.monodromy_params(37).unwrap();
            for k in 0..4 {
                let z = omega_element(k).star();
                let b = conjugate_matrix(&a, z).unwrap();
                let mq = conjugate_params(&mp, z).unwrap();
                let rep = monodromy_defect(&b, &mq).unwrap();
                assert!(rep.passed(), "k={k} {:?}", rep.defects);
                let y = build_regcolone_matrix(&x.perturbed(37).unwrap(), 37).unwrap();
                if !x.c00.is_zero() {
                    assert!(!monodromy_defect(&conjugate_matrix(&y, z).unwrap(), &mq).unwrap().passed());
                }
            }
        }
    }

    #[test]
    fn fixed_point_shape() {
        let f = ExactField::Prime(37);
        let a = build_regcolone_matrix(&RegColOneParams::fixed_point(f), 37).unwrap();
        let z = ExtAffineElement::new(Weight::new(0, -1, 2), FiniteWeyl::from_word("s2s1s2").unwrap());
        assert_eq!(shape_of(&a).unwrap(), z.star());
    }

    #[test]
    fn random_points_degenerate_to_the_fixed_point() {
        let f = ExactField::Prime(37);
        let z = ExtAffineElement::new(Weight::new(0, -1, 2), FiniteWeyl::from_word("s2s1s2").unwrap()).star();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let x = RegColOneParams::random(f, 37, &mut rng).unwrap();
            let s = shape_of(&build_regcolone_matrix(&x, 37).unwrap()).unwrap();
            assert!(crate::admissible::adm_eta().contains_dual(s), "{s}");
            assert!(crate::affine_weyl::dual_bruhat_leq(z, s), "{z} is not below {s}");
        }
    }
}
