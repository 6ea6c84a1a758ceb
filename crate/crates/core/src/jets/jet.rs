use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Highest derivative order a [`Jet`] can carry.
pub const MAX_ORDER: usize = 6;
/// Highest number of independent variables.
pub const MAX_DIM: usize = 4;

const BASE: usize = MAX_ORDER + 1;

/// Monomial bookkeeping for one dimension, shared by every jet of that dimension.
///
/// Monomials are sorted by total degree, so the table for a lower order is a
/// prefix of the table for a higher one.
struct Table {
    exps: Vec<[u8; MAX_DIM]>,
    /// `counts[k]` = number of monomials of degree <= k.
    counts: [usize; MAX_ORDER + 1],
    lookup: Vec<u32>,
    /// Product triples `(i, j, k)` sorted by `k`; `mul_counts[n]` entries land below `counts[n]`.
    mul: Vec<(u16, u16, u16)>,
    mul_counts: [usize; MAX_ORDER + 1],
    /// For each variable: `(dst, src, factor)` sorted by `dst`.
    partial: Vec<Vec<(u16, u16, f64)>>,
}

fn encode(e: &[u8; MAX_DIM]) -> usize {
    e.iter().rev().fold(0, |acc, &x| acc * BASE + x as usize)
}

impl Table {
    fn build(dim: usize) -> Table {
        let mut exps: Vec<[u8; MAX_DIM]> = Vec::new();
        let mut counts = [0; MAX_ORDER + 1];
        for deg in 0..=MAX_ORDER {
            let mut level = Vec::new();
            collect(dim, deg, 0, [0; MAX_DIM], &mut level);
            // lexicographic with the first variable carrying the largest power first
            level.sort_by(|a, b| b.cmp(a));
            exps.extend(level);
            counts[deg] = exps.len();
        }
        let mut lookup = vec![u32::MAX; BASE.pow(MAX_DIM as u32)];
        for (i, e) in exps.iter().enumerate() {
            lookup[encode(e)] = i as u32;
        }
        let degree = |e: &[u8; MAX_DIM]| e.iter().map(|&x| x as usize).sum::<usize>();

        let mut mul = Vec::new();
        for (i, a) in exps.iter().enumerate() {
            for (j, b) in exps.iter().enumerate() {
                if degree(a) + degree(b) > MAX_ORDER {
                    continue;
                }
                let mut c = [0u8; MAX_DIM];
                for v in 0..MAX_DIM {
                    c[v] = a[v] + b[v];
                }
                let k = lookup[encode(&c)];
                mul.push((i as u16, j as u16, k as u16));
            }
        }
        mul.sort_by_key(|&(_, _, k)| k);
        let mut mul_counts = [0; MAX_ORDER + 1];
        for (n, slot) in mul_counts.iter_mut().enumerate() {
            *slot = mul.partition_point(|&(_, _, k)| (k as usize) < counts[n]);
        }

        let mut partial = Vec::with_capacity(dim);
        for v in 0..dim {
            let mut entries = Vec::new();
            for (src, e) in exps.iter().enumerate() {
                if e[v] == 0 {
                    continue;
                }
                let mut d = *e;
                d[v] -= 1;
                let dst = lookup[encode(&d)];
                entries.push((dst as u16, src as u16, e[v] as f64));
            }
            entries.sort_by_key(|&(dst, _, _)| dst);
            partial.push(entries);
        }

        Table {
            exps,
            counts,
            lookup,
            mul,
            mul_counts,
            partial,
        }
    }

    fn index(&self, e: &[u8; MAX_DIM]) -> Option<usize> {
        let i = *self.lookup.get(encode(e))?;
        (i != u32::MAX).then_some(i as usize)
    }
}

fn collect(dim: usize, deg: usize, var: usize, cur: [u8; MAX_DIM], out: &mut Vec<[u8; MAX_DIM]>) {
    if var + 1 == dim || dim == 0 {
        let mut e = cur;
        if dim > 0 {
            e[var] = deg as u8;
        } else if deg > 0 {
            return;
        }
        out.push(e);
        return;
    }
    for k in 0..=deg {
        let mut e = cur;
        e[var] = k as u8;
        collect(dim, deg - k, var + 1, e, out);
    }
}

fn table(dim: usize) -> &'static Table {
    static TABLES: [OnceLock<Table>; MAX_DIM + 1] = [
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
    ];
    TABLES[dim].get_or_init(|| Table::build(dim))
}

/// Number of Taylor coefficients of a jet with `dim` variables truncated at `order`.
pub fn coefficient_count(dim: usize, order: usize) -> usize {
    table(dim).counts[order]
}

/// Value and partial derivatives of a scalar up to a fixed order at one point.
///
/// Stored as Taylor coefficients, so every mixed partial exists once and the
/// symmetry of higher derivatives holds by construction. Arithmetic follows the
/// Leibniz and chain rules exactly; the result order is the smaller order of
/// the operands.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    dim: usize,
    order: usize,
    coeffs: Vec<f64>,
}

impl Jet {
    pub fn constant(dim: usize, order: usize, value: f64) -> Jet {
        assert!(dim <= MAX_DIM && order <= MAX_ORDER, "jet shape out of range");
        let mut coeffs = vec![0.0; coefficient_count(dim, order)];
        coeffs[0] = value;
        Jet { dim, order, coeffs }
    }

    /// The coordinate function `x_var` evaluated at `value`.
    pub fn variable(dim: usize, order: usize, var: usize, value: f64) -> Jet {
        assert!(var < dim, "variable index {var} out of range for dim {dim}");
        let mut j = Jet::constant(dim, order, value);
        if order >= 1 {
            let mut e = [0u8; MAX_DIM];
            e[var] = 1;
            let idx = table(dim).index(&e).expect("linear monomial");
            j.coeffs[idx] = 1.0;
        }
        j
    }

    /// Builds a jet from derivative values: `f(multi)` returns the partial
    /// derivative for a multi-index given as exponent counts.
    pub fn from_derivatives(dim: usize, order: usize, mut f: impl FnMut(&[u8; MAX_DIM]) -> f64) -> Jet {
        let t = table(dim);
        let coeffs = t.exps[..t.counts[order]]
            .iter()
            .map(|e| f(e) / factorial_product(e))
            .collect();
        Jet { dim, order, coeffs }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// Partial derivative along the listed coordinates, e.g. `&[0, 0, 2]` is ∂₀∂₀∂₂.
    pub fn derivative(&self, vars: &[usize]) -> f64 {
        assert!(vars.len() <= self.order, "derivative order exceeds jet order");
        let mut e = [0u8; MAX_DIM];
        for &v in vars {
            assert!(v < self.dim);
            e[v] += 1;
        }
        let idx = table(self.dim).index(&e).expect("monomial in table");
        self.coeffs[idx] * factorial_product(&e)
    }

    pub fn grad(&self, i: usize) -> f64 {
        self.derivative(&[i])
    }

    pub fn hess(&self, i: usize, j: usize) -> f64 {
        self.derivative(&[i, j])
    }

    pub fn third(&self, i: usize, j: usize, k: usize) -> f64 {
        self.derivative(&[i, j, k])
    }

    /// Exact partial derivative as a jet one order lower.
    pub fn partial(&self, var: usize) -> Jet {
        assert!(var < self.dim, "variable index out of range");
        assert!(self.order >= 1, "cannot differentiate an order-0 jet");
        let t = table(self.dim);
        let order = self.order - 1;
        let n = t.counts[order];
        let mut coeffs = vec![0.0; n];
        for &(dst, src, factor) in &t.partial[var] {
            if dst as usize >= n {
                break;
            }
            coeffs[dst as usize] = factor * self.coeffs[src as usize];
        }
        Jet {
            dim: self.dim,
            order,
            coeffs,
        }
    }

    pub fn truncate(&self, order: usize) -> Jet {
        assert!(order <= self.order, "cannot raise jet order by truncation");
        Jet {
            dim: self.dim,
            order,
            coeffs: self.coeffs[..coefficient_count(self.dim, order)].to_vec(),
        }
    }

    /// Re-expresses the jet in a larger variable set: old variable `i` becomes
    /// new variable `map[i]`; the remaining new variables do not appear.
    pub fn embed(&self, new_dim: usize, map: &[usize]) -> Jet {
        assert_eq!(map.len(), self.dim);
        let src = table(self.dim);
        let dst = table(new_dim);
        let mut coeffs = vec![0.0; dst.counts[self.order]];
        for (i, e) in src.exps[..src.counts[self.order]].iter().enumerate() {
            let mut ne = [0u8; MAX_DIM];
            for (v, &m) in map.iter().enumerate() {
                ne[m] = e[v];
            }
            coeffs[dst.index(&ne).expect("monomial")] = self.coeffs[i];
        }
        Jet {
            dim: new_dim,
            order: self.order,
            coeffs,
        }
    }

    /// Taylor coefficients in the internal monomial order.
    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    /// Exponent vectors matching [`Jet::coefficients`].
    pub fn monomials(&self) -> &'static [[u8; MAX_DIM]] {
        let t = table(self.dim);
        &t.exps[..t.counts[self.order]]
    }

    /// `f ∘ self`, given `derivs[k] = f⁽ᵏ⁾(self.value())` for `k = 0..=order`.
    pub fn compose(&self, derivs: &[f64]) -> Jet {
        assert!(derivs.len() > self.order);
        let mut delta = self.clone();
        delta.coeffs[0] = 0.0;
        let n = self.order;
        let mut fact = 1.0;
        for k in 1..=n {
            fact *= k as f64;
        }
        let mut acc = Jet::constant(self.dim, n, derivs[n] / fact);
        for k in (0..n).rev() {
            fact /= (k + 1) as f64;
            acc = &acc * &delta;
            acc.coeffs[0] += derivs[k] / fact;
        }
        acc
    }

    pub fn scale(&self, s: f64) -> Jet {
        Jet {
            dim: self.dim,
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn add_scalar(&self, s: f64) -> Jet {
        let mut out = self.clone();
        out.coeffs[0] += s;
        out
    }

    pub fn recip(&self) -> Result<Jet> {
        let a = self.value();
        if a == 0.0 || !a.is_finite() {
            return Err(Error::DivisionByZero);
        }
        let mut derivs = Vec::with_capacity(self.order + 1);
        let inv = 1.0 / a;
        let mut d = inv;
        for k in 0..=self.order {
            derivs.push(d);
            d *= -((k + 1) as f64) * inv;
        }
        Ok(self.compose(&derivs))
    }

    pub fn checked_div(&self, other: &Jet) -> Result<Jet> {
        Ok(self * &other.recip()?)
    }

    pub fn exp(&self) -> Jet {
        let e = self.value().exp();
        self.compose(&vec![e; self.order + 1])
    }

    /// Natural logarithm; `None` when the value is not strictly positive.
    pub fn ln(&self) -> Option<Jet> {
        let a = self.value();
        if a <= 0.0 || !a.is_finite() {
            return None;
        }
        let mut derivs = vec![a.ln()];
        let mut d = 1.0 / a;
        for k in 1..=self.order {
            derivs.push(d);
            d *= -(k as f64) / a;
        }
        Some(self.compose(&derivs))
    }

    pub fn sin(&self) -> Jet {
        let (s, c) = self.value().sin_cos();
        let cycle = [s, c, -s, -c];
        self.compose(&(0..=self.order).map(|k| cycle[k % 4]).collect::<Vec<_>>())
    }

    pub fn cos(&self) -> Jet {
        let (s, c) = self.value().sin_cos();
        let cycle = [c, -s, -c, s];
        self.compose(&(0..=self.order).map(|k| cycle[k % 4]).collect::<Vec<_>>())
    }

    pub fn sinh(&self) -> Jet {
        let a = self.value();
        let pair = [a.sinh(), a.cosh()];
        self.compose(&(0..=self.order).map(|k| pair[k % 2]).collect::<Vec<_>>())
    }

    pub fn cosh(&self) -> Jet {
        let a = self.value();
        let pair = [a.cosh(), a.sinh()];
        self.compose(&(0..=self.order).map(|k| pair[k % 2]).collect::<Vec<_>>())
    }

    pub fn tanh(&self) -> Jet {
        // cosh >= 1, so the quotient never fails
        &self.sinh() * &self.cosh().recip().expect("cosh is positive")
    }

    /// Real power for a strictly positive base; `None` otherwise.
    pub fn powf(&self, r: f64) -> Option<Jet> {
        let a = self.value();
        if a <= 0.0 || !a.is_finite() {
            return None;
        }
        let mut derivs = Vec::with_capacity(self.order + 1);
        let mut coef = 1.0;
        for k in 0..=self.order {
            derivs.push(coef * a.powf(r - k as f64));
            coef *= r - k as f64;
        }
        Some(self.compose(&derivs))
    }

    pub fn sqrt(&self) -> Option<Jet> {
        self.powf(0.5)
    }

    /// Integer power by repeated multiplication; negative exponents go through
    /// the reciprocal and fail on a zero base.
    pub fn powi(&self, n: i32) -> Result<Jet> {
        let mut base = self.clone();
        let mut e = n.unsigned_abs();
        let mut acc = Jet::constant(self.dim, self.order, 1.0);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        if n < 0 {
            acc.recip()
        } else {
            Ok(acc)
        }
    }

    fn check_shape(&self, other: &Jet) {
        assert_eq!(self.dim, other.dim, "jet dimension mismatch");
    }
}

fn factorial_product(e: &[u8; MAX_DIM]) -> f64 {
    e.iter()
        .map(|&k| (1..=k as u32).map(f64::from).product::<f64>())
        .product()
}

impl Add<&Jet> for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        self.check_shape(rhs);
        let order = self.order.min(rhs.order);
        let n = coefficient_count(self.dim, order);
        Jet {
            dim: self.dim,
            order,
            coeffs: (0..n).map(|i| self.coeffs[i] + rhs.coeffs[i]).collect(),
        }
    }
}

impl Sub<&Jet> for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        self.check_shape(rhs);
        let order = self.order.min(rhs.order);
        let n = coefficient_count(self.dim, order);
        Jet {
            dim: self.dim,
            order,
            coeffs: (0..n).map(|i| self.coeffs[i] - rhs.coeffs[i]).collect(),
        }
    }
}

impl Mul<&Jet> for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        self.check_shape(rhs);
        let order = self.order.min(rhs.order);
        let t = table(self.dim);
        let mut coeffs = vec![0.0; t.counts[order]];
        for &(i, j, k) in &t.mul[..t.mul_counts[order]] {
            coeffs[k as usize] += self.coeffs[i as usize] * rhs.coeffs[j as usize];
        }
        Jet {
            dim: self.dim,
            order,
            coeffs,
        }
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Jet> for Jet {
            type Output = Jet;
            fn $m(self, rhs: Jet) -> Jet {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Jet> for Jet {
            type Output = Jet;
            fn $m(self, rhs: &Jet) -> Jet {
                (&self).$m(rhs)
            }
        }
        impl $tr<Jet> for &Jet {
            type Output = Jet;
            fn $m(self, rhs: Jet) -> Jet {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul<f64> for &Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(rhs)
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(rhs)
    }
}

impl AddAssign<&Jet> for Jet {
    fn add_assign(&mut self, rhs: &Jet) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Jet> for Jet {
    fn sub_assign(&mut self, rhs: &Jet) {
        *self = &*self - rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_has_no_derivatives() {
        let j = Jet::constant(3, 3, 5.0);
        assert_eq!(j.value(), 5.0);
        for i in 0..3 {
            assert_eq!(j.grad(i), 0.0);
            for k in 0..3 {
                assert_eq!(j.hess(i, k), 0.0);
                assert_eq!(j.third(i, k, 0), 0.0);
            }
        }
    }

    #[test]
    fn square_of_variable() {
        let x = Jet::variable(1, 3, 0, 3.0);
        let sq = &x * &x;
        assert_eq!(sq.value(), 9.0);
        assert_eq!(sq.grad(0), 6.0);
        assert_eq!(sq.hess(0, 0), 2.0);
        assert_eq!(sq.third(0, 0, 0), 0.0);
    }

    #[test]
    fn tanh_series_at_zero() {
        // tanh(p/l) = p/l - (p/l)^3/3 + ...  => d1 = 1/l, d2 = 0, d3 = -2/l^3
        let ell: f64 = 1.7;
        let p = Jet::variable(1, 3, 0, 0.0);
        let t = p.scale(1.0 / ell).tanh();
        assert!(t.value().abs() < 1e-15);
        assert!((t.grad(0) - 1.0 / ell).abs() < 1e-14);
        assert!(t.hess(0, 0).abs() < 1e-14);
        assert!((t.third(0, 0, 0) + 2.0 / ell.powi(3)).abs() < 1e-13);
    }

    #[test]
    fn mixed_third_derivative_of_product() {
        let x = Jet::variable(3, 3, 0, 0.4);
        let y = Jet::variable(3, 3, 1, -1.2);
        let t = Jet::variable(3, 3, 2, 2.0);
        let f = &(&x * &y) * &t;
        assert_eq!(f.third(0, 1, 2), 1.0);
        assert_eq!(f.third(2, 1, 0), 1.0);
        assert_eq!(f.third(0, 0, 0), 0.0);
        assert_eq!(f.hess(0, 1), 2.0);
    }

    #[test]
    fn reciprocal_of_zero_fails() {
        let z = Jet::constant(2, 2, 0.0);
        assert_eq!(z.recip(), Err(Error::DivisionByZero));
    }

    #[test]
    fn partial_lowers_order() {
        let x = Jet::variable(2, 3, 0, 0.5);
        let y = Jet::variable(2, 3, 1, 0.25);
        let f = (&x * &x) * &y;
        let fx = f.partial(0);
        assert_eq!(fx.order(), 2);
        assert!((fx.value() - 2.0 * 0.5 * 0.25).abs() < 1e-15);
        assert!((fx.hess(0, 1) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn embed_keeps_derivatives() {
        let x = Jet::variable(3, 2, 0, 1.5);
        let f = (&x * &x).sin();
        let g = f.embed(4, &[1, 2, 3]);
        assert_eq!(g.dim(), 4);
        assert!((g.grad(1) - f.grad(0)).abs() < 1e-15);
        assert!((g.hess(1, 1) - f.hess(0, 0)).abs() < 1e-15);
        assert_eq!(g.grad(0), 0.0);
    }

    #[test]
    fn high_order_exp_derivatives() {
        let x = Jet::variable(2, 6, 0, 0.3);
        let e = x.scale(2.0).exp();
        let want = 64.0 * (0.6f64).exp();
        assert!((e.derivative(&[0; 6]) - want).abs() < 1e-10 * want);
    }

    #[test]
    fn powi_matches_powf() {
        let x = Jet::variable(1, 4, 0, 1.3);
        let a = x.powi(-3).unwrap();
        let b = x.powf(-3.0).unwrap();
        for k in 0..=4 {
            let vars = vec![0; k];
            assert!((a.derivative(&vars) - b.derivative(&vars)).abs() < 1e-10);
        }
    }
}
