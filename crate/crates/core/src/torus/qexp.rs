//! Truncated q-exponentials `exp_b(x) = sum x^n / [n]_b!`.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::{SkewMatrix, TorusElement};
use crate::scalars::{inv_q_factorial, Poly, RatFun};

/// `exp_base(x)` with all monomials of total degree above `max_degree` dropped.
/// `x` must have no constant term.
pub fn qexp_truncated(x: &TorusElement, base: &Poly, max_degree: i64) -> TorusElement {
    let skew = x.skew().clone();
    let mut acc = TorusElement::one(&skew);
    let mut power = TorusElement::one(&skew);
    for n in 1..=max_degree.max(0) as u32 {
        power = truncate(&power.mul(x), max_degree);
        if power.is_zero() {
            break;
        }
        acc = acc.add(&power.scale(&inv_q_factorial(n, base)));
    }
    acc
}

fn truncate(x: &TorusElement, max_degree: i64) -> TorusElement {
    TorusElement::from_terms(
        x.skew(),
        x.terms().iter().filter(|(a, _)| a.iter().sum::<i64>() <= max_degree).map(|(a, c)| (a.clone(), c.clone())),
    )
}

/// `exp_b(x + y) = exp_b(x) exp_b(y)` through total degree `max_degree`, for two
/// variables of a torus with `y x = b x y`.
pub fn torus_qexp_check(skew: &Arc<SkewMatrix>, x: usize, y: usize, base: &Poly, max_degree: i64) -> bool {
    let tx = TorusElement::var(skew, x);
    let ty = TorusElement::var(skew, y);
    let lhs = qexp_truncated(&tx.add(&ty), base, max_degree);
    let rhs = truncate(&qexp_truncated(&tx, base, max_degree).mul(&qexp_truncated(&ty, base, max_degree)), max_degree);
    lhs == rhs
}

/// Two-variable algebra with `y x = b x y` for an arbitrary polynomial `b`;
/// elements are maps `(i, j) -> coefficient of x^i y^j`.
type Plane = BTreeMap<(u32, u32), RatFun>;

fn plane_mul(a: &Plane, b: &Plane, base: &RatFun, max_degree: u32) -> Plane {
    let mut out = Plane::new();
    for (&(i1, j1), c1) in a {
        for (&(i2, j2), c2) in b {
            if i1 + j1 + i2 + j2 > max_degree {
                continue;
            }
            // x^i1 y^j1 x^i2 y^j2 = b^{j1 i2} x^{i1+i2} y^{j1+j2}
            let f = base.pow((j1 * i2) as i64);
            let e = out.entry((i1 + i2, j1 + j2)).or_insert_with(RatFun::zero);
            *e += &(&(c1 * c2) * &f);
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn plane_exp(x: &Plane, base: &Poly, b: &RatFun, max_degree: u32) -> Plane {
    let mut acc = Plane::new();
    acc.insert((0, 0), RatFun::one());
    let mut power = acc.clone();
    for n in 1..=max_degree {
        power = plane_mul(&power, x, b, max_degree);
        let f = inv_q_factorial(n, base);
        for (k, v) in &power {
            let e = acc.entry(*k).or_insert_with(RatFun::zero);
            *e += &(v * &f);
        }
    }
    acc.retain(|_, v| !v.is_zero());
    acc
}

/// `exp_b(x + y) = exp_b(x) exp_b(y)` through total degree `max_degree`, given `y x = b x y`.
pub fn qexp_rule_check(base: &Poly, max_degree: u32) -> bool {
    let b = RatFun::from_poly(base.clone());
    let x: Plane = [((1, 0), RatFun::one())].into_iter().collect();
    let y: Plane = [((0, 1), RatFun::one())].into_iter().collect();
    let mut sum = x.clone();
    sum.extend(y.clone());
    let lhs = plane_exp(&sum, base, &b, max_degree);
    let rhs = plane_mul(&plane_exp(&x, base, &b, max_degree), &plane_exp(&y, base, &b, max_degree), &b, max_degree);
    lhs == rhs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::CartanData;

    #[test]
    fn exp_rule_holds() {
        assert!(qexp_rule_check(&Poly::q_pow(2), 8));
        assert!(qexp_rule_check(&Poly::q(), 0));
        assert!(qexp_rule_check(&Poly::from_coeffs(&[1, 0, 1]), 4));
    }

    #[test]
    fn exp_rule_fails_for_wrong_base() {
        // y x = q^2 x y but exponential taken at base q
        let s = Arc::new(SkewMatrix::from_word(&CartanData::a2(), &[0, 1, 0]));
        assert!(!torus_qexp_check(&s, 0, 2, &Poly::q(), 3));
    }

    #[test]
    fn exp_rule_in_torus() {
        let s = Arc::new(SkewMatrix::from_word(&CartanData::a2(), &[0, 1, 0]));
        assert!(torus_qexp_check(&s, 0, 2, &Poly::q_pow(2), 6));
    }
}
