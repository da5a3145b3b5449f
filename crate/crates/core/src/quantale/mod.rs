//! Quantale carriers: complete lattices with a monoid product that
//! distributes over joins on both sides, together with both residuals.
//!
//! Completeness is modelled over finite families: every index set that
//! reaches a join or meet at runtime is finite, so `join_all` over an empty
//! family is the bottom element and `meet_all` over an empty family is the
//! top element.
//!
//! Residual naming follows the usual slash notation:
//! `rres(z, y) = z / y` is the largest `x` with `x · y ≤ z`, and
//! `lres(x, z) = x \ z` is the largest `y` with `x · y ≤ z`.

mod chain;
mod float;
mod powerset;
mod table;

pub use chain::{ChainQuantale, ChainTnorm};
pub use float::{FloatUnitQuantale, SampledUnitQuantale, UnitTnorm};
pub use powerset::{MonoidTable, PowersetQuantale};
pub use table::TableQuantale;

use std::fmt::Debug;

use crate::error::{Error, Result};
use crate::laws::LawReport;

/// A unital quantale with computable residuals.
pub trait Quantale {
    type Elem: Clone + PartialEq + Debug;

    fn bottom(&self) -> Self::Elem;
    fn top(&self) -> Self::Elem;
    fn unit(&self) -> Self::Elem;

    /// Membership test used by the checked entry points.
    fn contains(&self, x: &Self::Elem) -> bool;

    fn leq(&self, x: &Self::Elem, y: &Self::Elem) -> bool;
    fn join(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn meet(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;

    /// `z / y`: the largest `x` with `x · y ≤ z`.
    fn rres(&self, z: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    /// `x \ z`: the largest `y` with `x · y ≤ z`.
    fn lres(&self, x: &Self::Elem, z: &Self::Elem) -> Self::Elem;

    fn is_commutative(&self) -> bool;

    /// Element equality as the law checkers see it. Exact except on the
    /// float carrier, which compares within its tolerance.
    fn same(&self, x: &Self::Elem, y: &Self::Elem) -> bool {
        x == y
    }

    fn describe(&self) -> String;

    fn join_all<I: IntoIterator<Item = Self::Elem>>(&self, xs: I) -> Self::Elem {
        xs.into_iter().fold(self.bottom(), |acc, x| self.join(&acc, &x))
    }

    fn meet_all<I: IntoIterator<Item = Self::Elem>>(&self, xs: I) -> Self::Elem {
        xs.into_iter().fold(self.top(), |acc, x| self.meet(&acc, &x))
    }

    fn ensure(&self, x: &Self::Elem) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::CarrierMismatch(format!(
                "{x:?} is not an element of {}",
                self.describe()
            )))
        }
    }

    fn try_join_all(&self, xs: &[Self::Elem]) -> Result<Self::Elem> {
        for x in xs {
            self.ensure(x)?;
        }
        Ok(self.join_all(xs.iter().cloned()))
    }

    fn try_mul(&self, x: &Self::Elem, y: &Self::Elem) -> Result<Self::Elem> {
        self.ensure(x)?;
        self.ensure(y)?;
        Ok(self.mul(x, y))
    }

    fn try_rres(&self, z: &Self::Elem, y: &Self::Elem) -> Result<Self::Elem> {
        self.ensure(z)?;
        self.ensure(y)?;
        Ok(self.rres(z, y))
    }

    fn try_lres(&self, x: &Self::Elem, z: &Self::Elem) -> Result<Self::Elem> {
        self.ensure(x)?;
        self.ensure(z)?;
        Ok(self.lres(x, z))
    }
}

/// A quantale whose carrier can be listed.
pub trait FiniteQuantale: Quantale {
    fn elements(&self) -> Vec<Self::Elem>;
}

/// Which residual an exhaustive search should reproduce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `x \ z`: scan `y` with `x · y ≤ z`.
    Left,
    /// `z / x`: scan `y` with `y · x ≤ z`.
    Right,
}

/// Residual computed as the join of every candidate satisfying the product
/// bound. Independent of the closed forms in each carrier.
///
/// For `Side::Left` the result is `x \ z`; for `Side::Right` it is `z / x`.
pub fn residual_by_search<Q: FiniteQuantale>(
    q: &Q,
    x: &Q::Elem,
    z: &Q::Elem,
    side: Side,
) -> Q::Elem {
    let candidates = q.elements().into_iter().filter(|y| {
        let prod = match side {
            Side::Left => q.mul(x, y),
            Side::Right => q.mul(y, x),
        };
        q.leq(&prod, z)
    });
    q.join_all(candidates)
}

/// Exhaustive check of the quantale axioms, the residuation adjunction and
/// the standard residual arithmetic on a finite carrier.
///
/// Arbitrary joins are covered by the empty family plus binary joins, which
/// generate every finite join.
pub fn check_quantale_laws<Q: FiniteQuantale>(q: &Q) -> LawReport {
    let els = q.elements();
    let mut r = LawReport::new();
    let bot = q.bottom();
    let top = q.top();
    let e = q.unit();
    let eq = |a: &Q::Elem, b: &Q::Elem| q.same(a, b);

    for x in &els {
        r.check("order: reflexive", q.leq(x, x), || format!("x={x:?}"));
        r.check("lattice: bottom is least", q.leq(&bot, x), || format!("x={x:?}"));
        r.check("lattice: top is greatest", q.leq(x, &top), || format!("x={x:?}"));
        r.check("monoid: unit", eq(&q.mul(&e, x), x) && eq(&q.mul(x, &e), x), || {
            format!("x={x:?}")
        });
        r.check(
            "distributivity: empty join",
            eq(&q.mul(x, &bot), &bot) && eq(&q.mul(&bot, x), &bot),
            || format!("x={x:?}"),
        );
        r.check(
            "residual: unit",
            eq(&q.rres(x, &e), x) && eq(&q.lres(&e, x), x),
            || format!("x={x:?}"),
        );
        r.check(
            "residual: bottom denominator",
            eq(&q.rres(x, &bot), &top) && eq(&q.lres(&bot, x), &top),
            || format!("x={x:?}"),
        );
        r.check(
            "residual: top numerator",
            eq(&q.rres(&top, x), &top) && eq(&q.lres(x, &top), &top),
            || format!("x={x:?}"),
        );
    }

    for x in &els {
        for y in &els {
            let j = q.join(x, y);
            let m = q.meet(x, y);
            if q.leq(x, y) && q.leq(y, x) {
                r.check("order: antisymmetric", eq(x, y), || format!("x={x:?} y={y:?}"));
            }
            r.check(
                "lattice: join is an upper bound",
                q.leq(x, &j) && q.leq(y, &j),
                || format!("x={x:?} y={y:?} join={j:?}"),
            );
            r.check(
                "lattice: meet is a lower bound",
                q.leq(&m, x) && q.leq(&m, y),
                || format!("x={x:?} y={y:?} meet={m:?}"),
            );
            r.check(
                "residual: cancellation",
                q.leq(&q.mul(&q.rres(y, x), x), y) && q.leq(&q.mul(x, &q.lres(x, y)), y),
                || format!("x={x:?} y={y:?}"),
            );
        }
    }

    for x in &els {
        for y in &els {
            let xy = q.mul(x, y);
            for z in &els {
                // order
                if q.leq(x, y) && q.leq(y, z) {
                    r.check("order: transitive", q.leq(x, z), || {
                        format!("x={x:?} y={y:?} z={z:?}")
                    });
                }
                let j = q.join(x, y);
                if q.leq(x, z) && q.leq(y, z) {
                    r.check("lattice: join is least", q.leq(&j, z), || {
                        format!("x={x:?} y={y:?} z={z:?}")
                    });
                }
                let m = q.meet(x, y);
                if q.leq(z, x) && q.leq(z, y) {
                    r.check("lattice: meet is greatest", q.leq(z, &m), || {
                        format!("x={x:?} y={y:?} z={z:?}")
                    });
                }

                // monoid
                r.check(
                    "monoid: associativity",
                    eq(&q.mul(&xy, z), &q.mul(x, &q.mul(y, z))),
                    || format!("x={x:?} y={y:?} z={z:?}"),
                );

                // distributivity over binary joins
                let yz = q.join(y, z);
                r.check(
                    "distributivity: left",
                    eq(&q.mul(x, &yz), &q.join(&q.mul(x, y), &q.mul(x, z))),
                    || format!("x={x:?} y={y:?} z={z:?}"),
                );
                r.check(
                    "distributivity: right",
                    eq(&q.mul(&yz, x), &q.join(&q.mul(y, x), &q.mul(z, x))),
                    || format!("x={x:?} y={y:?} z={z:?}"),
                );

                // adjunction
                let a = q.leq(&xy, z);
                let b = q.leq(x, &q.rres(z, y));
                let c = q.leq(y, &q.lres(x, z));
                r.check("residuation adjunction", a == b && b == c, || {
                    format!("x={x:?} y={y:?} z={z:?}")
                });

                if q.leq(x, y) {
                    r.check(
                        "product monotone",
                        q.leq(&q.mul(x, z), &q.mul(y, z)) && q.leq(&q.mul(z, x), &q.mul(z, y)),
                        || format!("x={x:?} y={y:?} z={z:?}"),
                    );
                    r.check(
                        "residual monotone/antitone",
                        q.leq(&q.rres(x, z), &q.rres(y, z))
                            && q.leq(&q.lres(z, x), &q.lres(z, y))
                            && q.leq(&q.rres(z, y), &q.rres(z, x))
                            && q.leq(&q.lres(y, z), &q.lres(x, z)),
                        || format!("x={x:?} y={y:?} z={z:?}"),
                    );
                }

                // joins in the denominator become meets
                r.check(
                    "residual: denominator join to meet",
                    eq(&q.rres(x, &yz), &q.meet(&q.rres(x, y), &q.rres(x, z)))
                        && eq(&q.lres(&yz, x), &q.meet(&q.lres(y, x), &q.lres(z, x))),
                    || format!("x={x:?} y={y:?} z={z:?}"),
                );
                // meets in the numerator are preserved
                let ym = q.meet(y, z);
                r.check(
                    "residual: numerator meet",
                    eq(&q.rres(&ym, x), &q.meet(&q.rres(y, x), &q.rres(z, x)))
                        && eq(&q.lres(x, &ym), &q.meet(&q.lres(x, y), &q.lres(x, z))),
                    || format!("x={x:?} y={y:?} z={z:?}"),
                );
                // currying
                r.check(
                    "residual: currying",
                    eq(&q.lres(y, &q.lres(x, z)), &q.lres(&xy, z))
                        && eq(&q.rres(&q.rres(z, y), x), &q.rres(z, &xy)),
                    || format!("x={x:?} y={y:?} z={z:?}"),
                );
            }
        }
    }
    r
}

/// Compares the carrier's closed-form residuals against
/// [`residual_by_search`] on every pair.
pub fn check_residual_oracle<Q: FiniteQuantale>(q: &Q) -> LawReport {
    let els = q.elements();
    let mut r = LawReport::new();
    for x in &els {
        for z in &els {
            let l = residual_by_search(q, x, z, Side::Left);
            r.check("left residual matches search", q.same(&l, &q.lres(x, z)), || {
                format!("x={x:?} z={z:?} search={l:?} closed={:?}", q.lres(x, z))
            });
            let rr = residual_by_search(q, x, z, Side::Right);
            r.check("right residual matches search", q.same(&rr, &q.rres(z, x)), || {
                format!("x={x:?} z={z:?} search={rr:?} closed={:?}", q.rres(z, x))
            });
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_join_is_bottom() {
        let q = ChainQuantale::lukasiewicz(4).unwrap();
        assert_eq!(q.join_all(Vec::new()), 0);
        assert_eq!(q.meet_all(Vec::new()), 4);
    }

    #[test]
    fn checked_ops_reject_foreign_elements() {
        let q = ChainQuantale::lukasiewicz(4).unwrap();
        assert!(matches!(q.try_join_all(&[2, 7]), Err(Error::CarrierMismatch(_))));
        assert!(q.try_mul(&5, &1).is_err());
        assert_eq!(q.try_join_all(&[2, 3]), Ok(3));
        assert_eq!(q.try_rres(&1, &2), Ok(3));
        assert_eq!(q.try_lres(&2, &1), Ok(3));
    }
}
