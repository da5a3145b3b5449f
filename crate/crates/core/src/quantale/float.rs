use num_traits::Float;

use crate::error::{Error, Result};

use super::{FiniteQuantale, Quantale, Side};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnitTnorm {
    Lukasiewicz,
    Godel,
    Product,
}

/// The real unit interval with a left-continuous t-norm and its residuum.
///
/// Order comparisons and equality admit `tolerance` of slack so that law
/// checks survive rounding. Residuals use exact comparisons and closed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FloatUnitQuantale<F> {
    tnorm: UnitTnorm,
    tolerance: F,
}

impl<F: Float + std::fmt::Debug> FloatUnitQuantale<F> {
    /// Uses the default tolerance: `1e-9`, or a few ulps if `F` is coarser.
    pub fn new(tnorm: UnitTnorm) -> Self {
        let floor = F::epsilon() * F::from(8.0).unwrap();
        let tol = F::from(1e-9).unwrap().max(floor);
        Self { tnorm, tolerance: tol }
    }

    pub fn with_tolerance(tnorm: UnitTnorm, tolerance: F) -> Result<Self> {
        if !(tolerance >= F::zero()) || !tolerance.is_finite() {
            return Err(Error::InvalidCarrier("tolerance must be a finite non-negative number".into()));
        }
        Ok(Self { tnorm, tolerance })
    }

    pub fn lukasiewicz() -> Self {
        Self::new(UnitTnorm::Lukasiewicz)
    }

    pub fn godel() -> Self {
        Self::new(UnitTnorm::Godel)
    }

    pub fn product() -> Self {
        Self::new(UnitTnorm::Product)
    }

    pub fn tnorm(&self) -> UnitTnorm {
        self.tnorm
    }

    pub fn tolerance(&self) -> F {
        self.tolerance
    }

    /// Residual approximated by scanning the grid `{0, 1/steps, ..., 1}`:
    /// the largest grid point whose product stays under `z`. Agrees with the
    /// closed form to within one grid step for every t-norm offered here.
    pub fn residual_by_grid(&self, x: F, z: F, side: Side, steps: u32) -> F {
        let steps = steps.max(1);
        let n = F::from(steps).unwrap();
        let mut best = F::zero();
        for i in 0..=steps {
            let y = F::from(i).unwrap() / n;
            let prod = match side {
                Side::Left => self.mul(&x, &y),
                Side::Right => self.mul(&y, &x),
            };
            if prod <= z {
                best = best.max(y);
            }
        }
        best
    }
}

impl<F: Float + std::fmt::Debug> Quantale for FloatUnitQuantale<F> {
    type Elem = F;

    fn bottom(&self) -> F {
        F::zero()
    }

    fn top(&self) -> F {
        F::one()
    }

    fn unit(&self) -> F {
        F::one()
    }

    fn contains(&self, x: &F) -> bool {
        *x >= F::zero() && *x <= F::one()
    }

    fn leq(&self, x: &F, y: &F) -> bool {
        *x <= *y + self.tolerance
    }

    fn join(&self, x: &F, y: &F) -> F {
        x.max(*y)
    }

    fn meet(&self, x: &F, y: &F) -> F {
        x.min(*y)
    }

    fn mul(&self, x: &F, y: &F) -> F {
        match self.tnorm {
            UnitTnorm::Lukasiewicz => (*x + *y - F::one()).max(F::zero()),
            UnitTnorm::Godel => x.min(*y),
            UnitTnorm::Product => *x * *y,
        }
    }

    fn rres(&self, z: &F, y: &F) -> F {
        match self.tnorm {
            UnitTnorm::Lukasiewicz => (F::one() - *y + *z).min(F::one()),
            UnitTnorm::Godel => {
                if y <= z {
                    F::one()
                } else {
                    *z
                }
            }
            UnitTnorm::Product => {
                if y <= z {
                    F::one()
                } else {
                    *z / *y
                }
            }
        }
    }

    fn lres(&self, x: &F, z: &F) -> F {
        self.rres(z, x)
    }

    fn is_commutative(&self) -> bool {
        true
    }

    fn same(&self, x: &F, y: &F) -> bool {
        (*x - *y).abs() <= self.tolerance
    }

    fn describe(&self) -> String {
        format!("unit interval ({:?})", self.tnorm)
    }
}

/// A float carrier restricted, for enumeration, to the grid
/// `{0, 1/steps, ..., 1}`. Operations are those of the full interval; the
/// grid is closed under them for the Łukasiewicz and Gödel t-norms up to
/// rounding, but not for the product.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampledUnitQuantale<F> {
    inner: FloatUnitQuantale<F>,
    steps: u32,
}

impl<F: Float + std::fmt::Debug> SampledUnitQuantale<F> {
    pub fn new(inner: FloatUnitQuantale<F>, steps: u32) -> Result<Self> {
        if steps == 0 {
            return Err(Error::InvalidCarrier("grid needs at least one step".into()));
        }
        Ok(Self { inner, steps })
    }

    pub fn inner(&self) -> &FloatUnitQuantale<F> {
        &self.inner
    }
}

impl<F: Float + std::fmt::Debug> Quantale for SampledUnitQuantale<F> {
    type Elem = F;

    fn bottom(&self) -> F {
        self.inner.bottom()
    }
    fn top(&self) -> F {
        self.inner.top()
    }
    fn unit(&self) -> F {
        self.inner.unit()
    }
    fn contains(&self, x: &F) -> bool {
        self.inner.contains(x)
    }
    fn leq(&self, x: &F, y: &F) -> bool {
        self.inner.leq(x, y)
    }
    fn join(&self, x: &F, y: &F) -> F {
        self.inner.join(x, y)
    }
    fn meet(&self, x: &F, y: &F) -> F {
        self.inner.meet(x, y)
    }
    fn mul(&self, x: &F, y: &F) -> F {
        self.inner.mul(x, y)
    }
    fn rres(&self, z: &F, y: &F) -> F {
        self.inner.rres(z, y)
    }
    fn lres(&self, x: &F, z: &F) -> F {
        self.inner.lres(x, z)
    }
    fn is_commutative(&self) -> bool {
        true
    }
    fn same(&self, x: &F, y: &F) -> bool {
        self.inner.same(x, y)
    }
    fn describe(&self) -> String {
        format!("{} sampled at 1/{}", self.inner.describe(), self.steps)
    }
}

impl<F: Float + std::fmt::Debug> FiniteQuantale for SampledUnitQuantale<F> {
    fn elements(&self) -> Vec<F> {
        let n = F::from(self.steps).unwrap();
        (0..=self.steps).map(|i| F::from(i).unwrap() / n).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        let l = FloatUnitQuantale::<f64>::lukasiewicz();
        assert!(l.same(&l.mul(&0.5, &0.75), &0.25));
        assert!(l.same(&l.rres(&0.25, &0.5), &0.75));
        let p = FloatUnitQuantale::<f64>::product();
        assert!(p.same(&p.rres(&0.25, &0.5), &0.5));
        assert_eq!(p.rres(&0.5, &0.25), 1.0);
        let g = FloatUnitQuantale::<f32>::godel();
        assert_eq!(g.rres(&0.3, &0.6), 0.3);
    }

    #[test]
    fn grid_scan_tracks_closed_form() {
        let steps = 400;
        for t in [UnitTnorm::Lukasiewicz, UnitTnorm::Godel, UnitTnorm::Product] {
            let q = FloatUnitQuantale::<f64>::new(t);
            for i in 0..=20 {
                for k in 0..=20 {
                    let x = i as f64 / 20.0;
                    let z = k as f64 / 20.0;
                    let closed = q.lres(&x, &z);
                    let grid = q.residual_by_grid(x, z, Side::Left, steps);
                    assert!(grid <= closed + 1e-12, "{t:?} x={x} z={z}");
                    assert!(closed - grid <= 1.0 / steps as f64 + 1e-12, "{t:?} x={x} z={z}");
                }
            }
        }
    }

    #[test]
    fn negative_tolerance_rejected() {
        assert!(FloatUnitQuantale::<f64>::with_tolerance(UnitTnorm::Godel, -1.0).is_err());
        assert!(FloatUnitQuantale::<f64>::with_tolerance(UnitTnorm::Godel, f64::NAN).is_err());
    }

    #[test]
    fn adjunction_on_sampled_values() {
        for t in [UnitTnorm::Lukasiewicz, UnitTnorm::Godel, UnitTnorm::Product] {
            let q = FloatUnitQuantale::<f64>::new(t);
            let grid: Vec<f64> = (0..=16).map(|i| i as f64 / 16.0).collect();
            for x in &grid {
                for y in &grid {
                    for z in &grid {
                        let a = q.mul(x, y) <= *z;
                        let b = *x <= q.rres(z, y);
                        assert_eq!(a, b, "{t:?} {x} {y} {z}");
                    }
                }
            }
        }
    }

    #[test]
    fn sampled_grid_passes_laws() {
        for t in [UnitTnorm::Lukasiewicz, UnitTnorm::Godel] {
            let q = SampledUnitQuantale::new(FloatUnitQuantale::<f64>::new(t), 10).unwrap();
            assert_eq!(q.elements().len(), 11);
            let rep = super::super::check_quantale_laws(&q);
            assert!(rep.is_ok(), "{rep}");
            assert!(super::super::check_residual_oracle(&q).is_ok());
        }
    }
}
