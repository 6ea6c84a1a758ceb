use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::jets::{ChartPoint, Jet, MAX_ORDER};

type FieldFn = dyn Fn(&ChartPoint, usize) -> Result<Jet> + Send + Sync;

/// A scalar function on a chart that can be evaluated as a jet of any order.
///
/// Fields compose lazily: arithmetic builds a new closure, and derivatives are
/// taken by evaluating the operand one order higher.
#[derive(Clone)]
pub struct ScalarField {
    f: Arc<FieldFn>,
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("ScalarField")
    }
}

impl ScalarField {
    pub fn new(f: impl Fn(&ChartPoint, usize) -> Result<Jet> + Send + Sync + 'static) -> Self {
        ScalarField { f: Arc::new(f) }
    }

    pub fn constant(value: f64) -> Self {
        ScalarField::new(move |pt, order| Ok(pt.constant_jet(value, order)))
    }

    pub fn zero() -> Self {
        ScalarField::constant(0.0)
    }

    /// The `i`-th coordinate function of whichever chart it is evaluated on.
    pub fn coordinate(i: usize) -> Self {
        ScalarField::new(move |pt, order| {
            if i >= pt.dim() {
                return Err(Error::ChartMismatch(format!(
                    "coordinate {i} on a {}-dimensional chart",
                    pt.dim()
                )));
            }
            Ok(pt.coordinate_jet(i, order))
        })
    }

    pub fn jet(&self, pt: &ChartPoint, order: usize) -> Result<Jet> {
        if order > MAX_ORDER {
            return Err(Error::OrderTooHigh {
                requested: order,
                max: MAX_ORDER,
            });
        }
        (self.f)(pt, order)
    }

    pub fn value(&self, pt: &ChartPoint) -> Result<f64> {
        Ok(self.jet(pt, 0)?.value())
    }

    /// ∂ along coordinate `var`.
    pub fn partial(&self, var: usize) -> Self {
        let inner = self.clone();
        ScalarField::new(move |pt, order| Ok(inner.jet(pt, order + 1)?.partial(var)))
    }

    /// Pointwise map of the evaluated jet.
    pub fn map(&self, f: impl Fn(Jet) -> Result<Jet> + Send + Sync + 'static) -> Self {
        let inner = self.clone();
        ScalarField::new(move |pt, order| f(inner.jet(pt, order)?))
    }

    pub fn zip(&self, other: &ScalarField, f: impl Fn(Jet, Jet) -> Result<Jet> + Send + Sync + 'static) -> Self {
        let (a, b) = (self.clone(), other.clone());
        ScalarField::new(move |pt, order| f(a.jet(pt, order)?, b.jet(pt, order)?))
    }

    pub fn div(&self, other: &ScalarField) -> Self {
        self.zip(other, |a, b| a.checked_div(&b))
    }

    pub fn recip(&self) -> Self {
        self.map(|a| a.recip())
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(move |a| Ok(a.scale(s)))
    }

    pub fn exp(&self) -> Self {
        self.map(|a| Ok(a.exp()))
    }

    pub fn ln(&self) -> Self {
        self.map(|a| {
            let v = a.value();
            a.ln().ok_or(Error::Domain {
                op: "ln",
                expr: "<field>".into(),
                value: v,
            })
        })
    }
}

impl Add for &ScalarField {
    type Output = ScalarField;
    fn add(self, rhs: &ScalarField) -> ScalarField {
        self.zip(rhs, |a, b| Ok(a + b))
    }
}

impl Sub for &ScalarField {
    type Output = ScalarField;
    fn sub(self, rhs: &ScalarField) -> ScalarField {
        self.zip(rhs, |a, b| Ok(a - b))
    }
}

impl Mul for &ScalarField {
    type Output = ScalarField;
    fn mul(self, rhs: &ScalarField) -> ScalarField {
        self.zip(rhs, |a, b| Ok(a * b))
    }
}

impl Neg for &ScalarField {
    type Output = ScalarField;
    fn neg(self) -> ScalarField {
        self.scale(-1.0)
    }
}

macro_rules! owned_field_op {
    ($tr:ident, $m:ident) => {
        impl $tr for ScalarField {
            type Output = ScalarField;
            fn $m(self, rhs: ScalarField) -> ScalarField {
                (&self).$m(&rhs)
            }
        }
    };
}
owned_field_op!(Add, add);
owned_field_op!(Sub, sub);
owned_field_op!(Mul, mul);

impl Neg for ScalarField {
    type Output = ScalarField;
    fn neg(self) -> ScalarField {
        self.scale(-1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jets::Chart;

    #[test]
    fn partial_of_product() {
        let x = ScalarField::coordinate(0);
        let y = ScalarField::coordinate(1);
        let f = &(&x * &x) * &y;
        let pt = ChartPoint::new(&Chart::xyt(), &[2.0, 3.0, 0.0]).unwrap();
        let fx = f.partial(0);
        assert_eq!(fx.value(&pt).unwrap(), 12.0);
        assert_eq!(fx.partial(0).value(&pt).unwrap(), 6.0);
        assert_eq!(fx.jet(&pt, 2).unwrap().hess(0, 1), 2.0);
    }

    #[test]
    fn coordinate_out_of_chart() {
        let pt = ChartPoint::new(&Chart::new(&["x"]).unwrap(), &[1.0]).unwrap();
        assert!(ScalarField::coordinate(2).value(&pt).is_err());
    }

    #[test]
    fn order_cap_is_enforced() {
        let pt = ChartPoint::new(&Chart::xyt(), &[0.0; 3]).unwrap();
        let err = ScalarField::coordinate(0).jet(&pt, MAX_ORDER + 1).unwrap_err();
        assert!(matches!(err, Error::OrderTooHigh { .. }));
    }
}
