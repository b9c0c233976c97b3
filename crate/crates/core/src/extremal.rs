//! The action of `E_i`, `F_i`, `K_i^{±1}` on `A` for a fixed dominant weight,
//! extremal vectors, and the monomial property of their images.

use std::fmt;
use std::rc::Rc;

use serde::Serialize;

use crate::bialgebra::{
    component_data, degrees_up_to, e_right_apply, mul_generator_left, mul_generator_right, unit_degree, Degree, DualElement,
};
use crate::cartan::{format_word, is_reduced, weight_sequence, CartanData, Word};
use crate::error::{Error, Result};
use crate::feigin::{divided_power_base, exponent_vectors, feigin_eval, monomial_word, AlgExpr};
use crate::scalars::{inv_q_factorial, RatFun};

/// Cartan data together with a dominant weight `(l_1, ..., l_r)`.
#[derive(Clone, Debug)]
pub struct ActionContext {
    pub data: CartanData,
    pub lambda: Vec<i64>,
}

impl ActionContext {
    pub fn new(data: CartanData, lambda: Vec<i64>) -> Result<Self> {
        if lambda.len() != data.rank() {
            return Err(Error::SizeMismatch(lambda.len(), data.rank()));
        }
        if lambda.iter().any(|l| *l < 0) {
            return Err(Error::DegenerateWeight("weight entries must be nonnegative".into()));
        }
        Ok(ActionContext { data, lambda })
    }
}

/// One of the generators acting on `A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    E(usize),
    F(usize),
    K(usize),
    KInv(usize),
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Op::E(i) => write!(f, "E{}", i + 1),
            Op::F(i) => write!(f, "F{}", i + 1),
            Op::K(i) => write!(f, "K{}", i + 1),
            Op::KInv(i) => write!(f, "K{}^-1", i + 1),
        }
    }
}

fn signed(d: &[u32]) -> Vec<i64> {
    d.iter().map(|&x| x as i64).collect()
}

/// `(gamma, alpha_i)`.
fn pair_simple(data: &CartanData, gamma: &[u32], i: usize) -> i64 {
    data.form(&signed(gamma), &signed(&unit_degree(data.rank(), i)))
}

fn v_pow(data: &CartanData, i: usize, e: i64) -> RatFun {
    RatFun::q_pow(data.d(i) * e)
}

/// `v_i - v_i^{-1}`.
fn v_diff(data: &CartanData, i: usize) -> RatFun {
    &v_pow(data, i, 1) - &v_pow(data, i, -1)
}

/// `(a, b)` with `F_i x = a x x_i + b x_i x` on `A(gamma)`.
pub fn f_coefficients(data: &CartanData, lambda: &[i64], i: usize, gamma: &[u32]) -> (RatFun, RatFun) {
    let den = v_diff(data, i);
    let a = &(&v_pow(data, i, lambda[i]) * &RatFun::q_pow(-pair_simple(data, gamma, i))) / &den;
    let b = -&(&v_pow(data, i, -lambda[i]) / &den);
    (a, b)
}

/// Scalar by which `K_i` acts on `A(gamma)`.
pub fn k_scalar(ctx: &ActionContext, i: usize, gamma: &[u32]) -> RatFun {
    RatFun::q_pow(ctx.data.d(i) * ctx.lambda[i] - pair_simple(&ctx.data, gamma, i))
}

pub fn act(ctx: &ActionContext, op: Op, x: &DualElement) -> DualElement {
    let data = &ctx.data;
    match op {
        Op::E(i) => e_right_apply(data, i, x),
        Op::K(i) => x.scale(&k_scalar(ctx, i, &x.degree)),
        Op::KInv(i) => x.scale(&k_scalar(ctx, i, &x.degree).inv().expect("nonzero")),
        Op::F(i) => {
            let (a, b) = f_coefficients(data, &ctx.lambda, i, &x.degree);
            mul_generator_right(data, x, i).scale(&a).add(&mul_generator_left(data, x, i).scale(&b))
        }
    }
}

/// Applies an operator product `ops[0] ops[1] ... ops[n-1]` (rightmost first).
pub fn act_word(ctx: &ActionContext, ops: &[Op], x: &DualElement) -> DualElement {
    let mut cur = x.clone();
    for op in ops.iter().rev() {
        if cur.is_zero() {
            let mut d = cur.degree.clone();
            shift_degree(&mut d, *op);
            return DualElement::zero(d);
        }
        cur = act(ctx, *op, &cur);
    }
    cur
}

fn shift_degree(d: &mut Degree, op: Op) {
    match op {
        Op::E(i) => d[i] = d[i].saturating_sub(1),
        Op::F(i) => d[i] += 1,
        _ => {}
    }
}

/// `F_{w_m}^{a_m} ... F_{w_1}^{a_1}` applied to a polynomial expression for `1`.
pub fn extremal_expr(data: &CartanData, lambda: &[i64], w: &[usize]) -> Result<Rc<AlgExpr>> {
    let a = weight_sequence(data, lambda, w)?;
    let r = data.rank();
    let mut x = AlgExpr::scalar(r, RatFun::one());
    for (k, &i) in w.iter().enumerate() {
        for _ in 0..a[k] {
            let (ca, cb) = f_coefficients(data, lambda, i, &x.degree);
            let g = AlgExpr::generator(r, i);
            let mut deg = x.degree.clone();
            deg[i] += 1;
            x = AlgExpr::lin(deg, vec![(ca, AlgExpr::mul(&x, &g)), (cb, AlgExpr::mul(&g, &x))]);
        }
    }
    Ok(x)
}

/// `v(w)`, checking `F_{w_k} v(w_k) = 0` and `E_{w_k} v(w_{k-1}) = 0` along the way.
pub fn extremal_vector(ctx: &ActionContext, w: &[usize]) -> Result<DualElement> {
    Ok(extremal_prefixes(ctx, w)?.pop().unwrap())
}

/// `v(w_0) = 1, v(w_1), ..., v(w_m)` for the prefixes of `w`.
pub fn extremal_prefixes(ctx: &ActionContext, w: &[usize]) -> Result<Vec<DualElement>> {
    let data = &ctx.data;
    data.check_word(w)?;
    if !is_reduced(data, w) {
        return Err(Error::NotReduced(format_word(w)));
    }
    let a = weight_sequence(data, &ctx.lambda, w)?;
    let mut v = DualElement::unit(data.rank());
    let mut out = vec![v.clone()];
    for (k, &i) in w.iter().enumerate() {
        if !act(ctx, Op::E(i), &v).is_zero() {
            return Err(Error::InternalInconsistency(format!("E{} does not kill the extremal vector of prefix {}", i + 1, k)));
        }
        for _ in 0..a[k] {
            v = act(ctx, Op::F(i), &v);
        }
        if !act(ctx, Op::F(i), &v).is_zero() {
            return Err(Error::InternalInconsistency(format!("F{} does not kill the extremal vector of prefix {}", i + 1, k + 1)));
        }
        out.push(v.clone());
    }
    Ok(out)
}

/// `E_{w_k}^a v(w_k)` is a nonzero multiple of `F_{w_k}^{a_k - a} v(w_{k-1})` for all `k`, `a`.
pub fn check_lowering_raising(ctx: &ActionContext, w: &[usize]) -> Result<bool> {
    let prefixes = extremal_prefixes(ctx, w)?;
    let a = weight_sequence(&ctx.data, &ctx.lambda, w)?;
    for (k, &i) in w.iter().enumerate() {
        let mut lhs = prefixes[k + 1].clone();
        for e in 0..=a[k] {
            let mut rhs = prefixes[k].clone();
            for _ in 0..a[k] - e {
                rhs = act(ctx, Op::F(i), &rhs);
            }
            match lhs.ratio_to(&rhs) {
                Some(c) if !c.is_zero() => {}
                _ => return Ok(false),
            }
            lhs = act(ctx, Op::E(i), &lhs);
        }
    }
    Ok(true)
}

/// Result of the monomial check for one reduced word.
#[derive(Clone, Debug, Serialize)]
pub struct MonomialCheck {
    pub word: String,
    pub scalar: RatFun,
    pub exponents: Vec<i64>,
    pub weight_sequence: Vec<i64>,
    /// `v(E^b) != 0` only for `b = exponents`.
    pub unique: bool,
}

impl MonomialCheck {
    pub fn passed(&self) -> bool {
        self.unique && !self.scalar.is_zero() && self.exponents == self.weight_sequence
    }
}

/// `psi_w(v(w)) = c t^a` with `a` the weight sequence, plus uniqueness of `a` among
/// exponent vectors with `v(E^b) != 0`.
pub fn extremal_monomial_check(ctx: &ActionContext, w: &[usize]) -> Result<MonomialCheck> {
    let v = extremal_vector(ctx, w)?;
    let a = weight_sequence(&ctx.data, &ctx.lambda, w)?;
    let image = feigin_eval(&ctx.data, &v, w);
    let (scalar, exponents) = image.as_monomial().unwrap_or_else(|| (RatFun::zero(), Vec::new()));
    let surviving: Vec<Vec<i64>> =
        exponent_vectors(w, &v.degree).into_iter().filter(|b| !v.eval(&monomial_word(w, b)).is_zero()).collect();
    let unique = surviving == vec![a.clone()];
    Ok(MonomialCheck { word: format_word(w), scalar, exponents, weight_sequence: a, unique })
}

/// Outcome of one operator identity.
#[derive(Clone, Debug, Serialize)]
pub struct RelationCheck {
    pub relation: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ActionReport {
    pub lambda: Vec<i64>,
    pub max_height: u32,
    pub checks: Vec<RelationCheck>,
    /// The Serre families with the exponent `v_i^{p p'}` in place of `v_i^{-p p'}`.
    pub alternate_serre: Vec<RelationCheck>,
}

impl ActionReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// A linear combination of operator words.
type OpSum = Vec<(RatFun, Vec<Op>)>;

fn apply_sum(ctx: &ActionContext, sum: &OpSum, x: &DualElement, target: &Degree) -> DualElement {
    let mut acc = DualElement::zero(target.clone());
    for (c, ops) in sum {
        let y = act_word(ctx, ops, x);
        if !y.is_zero() {
            acc = acc.add(&y.scale(c));
        }
    }
    acc
}

/// `sum_{p+p'=N} (-1)^p v_i^{sign p p'} X_i^{[p]} X_j X_i^{[p']}` with `N = 1 - a_ij`.
fn serre_sum(data: &CartanData, i: usize, j: usize, raising: bool, sign: i64) -> OpSum {
    let n = 1 - data.a(i, j);
    let base = divided_power_base(data, i);
    let gen = |k: usize| if raising { Op::E(k) } else { Op::F(k) };
    (0..=n)
        .map(|p| {
            let pp = n - p;
            let mut c = v_pow(data, i, sign * p * pp);
            if p % 2 == 1 {
                c = -c;
            }
            c = &(&c * &inv_q_factorial(p as u32, &base)) * &inv_q_factorial(pp as u32, &base);
            let mut ops = vec![gen(i); p as usize];
            ops.push(gen(j));
            ops.extend(std::iter::repeat(gen(i)).take(pp as usize));
            (c, ops)
        })
        .collect()
}

/// Checks the defining relations as operators on `A(gamma)` for all heights up to `max_height`.
pub fn verify_action(ctx: &ActionContext, max_height: u32) -> ActionReport {
    let data = &ctx.data;
    let r = data.rank();
    let mut relations: Vec<(String, Box<dyn Fn(&DualElement) -> (DualElement, DualElement)>)> = Vec::new();
    let one = RatFun::one();
    for i in 0..r {
        for j in 0..r {
            let c = ctx.clone();
            relations.push((
                format!("K{0} K{1} = K{1} K{0}", i + 1, j + 1),
                Box::new(move |x| (act_word(&c, &[Op::K(i), Op::K(j)], x), act_word(&c, &[Op::K(j), Op::K(i)], x))),
            ));
            let c = ctx.clone();
            let f = RatFun::q_pow(data.c(i, j));
            relations.push((
                format!("K{0} E{1} K{0}^-1 = q^{2} E{1}", i + 1, j + 1, data.c(i, j)),
                Box::new(move |x| (act_word(&c, &[Op::K(i), Op::E(j), Op::KInv(i)], x), act(&c, Op::E(j), x).scale(&f))),
            ));
            let c = ctx.clone();
            let f = RatFun::q_pow(-data.c(i, j));
            relations.push((
                format!("K{0} F{1} K{0}^-1 = q^{2} F{1}", i + 1, j + 1, -data.c(i, j)),
                Box::new(move |x| (act_word(&c, &[Op::K(i), Op::F(j), Op::KInv(i)], x), act(&c, Op::F(j), x).scale(&f))),
            ));
            let c = ctx.clone();
            let one = one.clone();
            relations.push((
                format!("E{0} F{1} - F{1} E{0} = {2}", i + 1, j + 1, if i == j { "(K - K^-1)/(v - v^-1)" } else { "0" }),
                Box::new(move |x| {
                    let lhs = act_word(&c, &[Op::E(i), Op::F(j)], x).sub(&act_word(&c, &[Op::F(j), Op::E(i)], x));
                    let rhs = if i == j {
                        let den = v_diff(&c.data, i);
                        act(&c, Op::K(i), x).sub(&act(&c, Op::KInv(i), x)).scale(&(&one / &den))
                    } else {
                        DualElement::zero(lhs.degree.clone())
                    };
                    (lhs, rhs)
                }),
            ));
            if i != j {
                for raising in [true, false] {
                    let c = ctx.clone();
                    let sum = serre_sum(data, i, j, raising, -1);
                    relations.push((
                        format!("{} Serre ({}, {})", if raising { "E" } else { "F" }, i + 1, j + 1),
                        Box::new(move |x| serre_pair(&c, &sum, x)),
                    ));
                }
            }
        }
    }
    let mut alternates: Vec<(String, Box<dyn Fn(&DualElement) -> (DualElement, DualElement)>)> = Vec::new();
    for i in 0..r {
        for j in 0..r {
            if i == j {
                continue;
            }
            for raising in [true, false] {
                let c = ctx.clone();
                let sum = serre_sum(data, i, j, raising, 1);
                alternates.push((
                    format!("{} Serre ({}, {}) with v^(p p')", if raising { "E" } else { "F" }, i + 1, j + 1),
                    Box::new(move |x| serre_pair(&c, &sum, x)),
                ));
            }
        }
    }
    let bases: Vec<(Degree, Vec<DualElement>)> = degrees_up_to(r, max_height)
        .into_iter()
        .map(|g| {
            let comp = component_data(data, &g);
            let b = (0..comp.dim()).map(|j| comp.dual_basis_element(j)).collect();
            (g, b)
        })
        .collect();
    let run = |rels: &[(String, Box<dyn Fn(&DualElement) -> (DualElement, DualElement)>)]| -> Vec<RelationCheck> {
        rels.iter()
            .map(|(name, rel)| {
                let mut detail = String::from("ok");
                let mut passed = true;
                'outer: for (g, basis) in &bases {
                    for (k, x) in basis.iter().enumerate() {
                        let (lhs, rhs) = rel(x);
                        if lhs != rhs {
                            passed = false;
                            detail = format!("fails on basis vector {} of degree {:?}", k, g);
                            break 'outer;
                        }
                    }
                }
                RelationCheck { relation: name.clone(), passed, detail }
            })
            .collect()
    };
    ActionReport { lambda: ctx.lambda.clone(), max_height, checks: run(&relations), alternate_serre: run(&alternates) }
}

fn serre_pair(ctx: &ActionContext, sum: &OpSum, x: &DualElement) -> (DualElement, DualElement) {
    let mut deg = x.degree.clone();
    for op in &sum[0].1 {
        shift_degree(&mut deg, *op);
    }
    let lhs = apply_sum(ctx, sum, x, &deg);
    (lhs.clone(), DualElement::zero(lhs.degree))
}

/// Whether `v(w)` is the same functional for every word in `words`; returns the
/// ratios to the first word's vector when they are proportional.
pub fn compare_extremal(ctx: &ActionContext, words: &[Word]) -> Result<(bool, Vec<Option<RatFun>>)> {
    let vs: Vec<DualElement> = words.iter().map(|w| extremal_vector(ctx, w)).collect::<Result<_>>()?;
    let ratios: Vec<Option<RatFun>> = vs.iter().map(|v| v.ratio_to(&vs[0])).collect();
    let equal = vs.iter().all(|v| *v == vs[0]);
    Ok((equal, ratios))
}
