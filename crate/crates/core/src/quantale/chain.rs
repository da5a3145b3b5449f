use crate::error::{Error, Result};

use super::{FiniteQuantale, Quantale};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChainTnorm {
    /// `max(0, a + b - d)`
    Lukasiewicz,
    /// `min(a, b)`
    Godel,
}

/// The finite chain `0 < 1 < ... < d` read as `k/d` in the unit interval,
/// with an exact integer t-norm. Bottom is level 0; top and unit are level `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ChainQuantale {
    denominator: u32,
    tnorm: ChainTnorm,
}

impl ChainQuantale {
    pub fn new(denominator: u32, tnorm: ChainTnorm) -> Result<Self> {
        if denominator == 0 {
            return Err(Error::InvalidCarrier("chain denominator must be positive".into()));
        }
        // a + b must not overflow for any two levels
        if denominator > u32::MAX / 2 {
            return Err(Error::InvalidCarrier(format!("chain denominator {denominator} too large")));
        }
        Ok(Self { denominator, tnorm })
    }

    pub fn lukasiewicz(denominator: u32) -> Result<Self> {
        Self::new(denominator, ChainTnorm::Lukasiewicz)
    }

    pub fn godel(denominator: u32) -> Result<Self> {
        Self::new(denominator, ChainTnorm::Godel)
    }

    /// The two-element Boolean algebra; both t-norms coincide with `∧`.
    pub fn boolean() -> Self {
        Self { denominator: 1, tnorm: ChainTnorm::Godel }
    }

    pub fn denominator(&self) -> u32 {
        self.denominator
    }

    pub fn tnorm(&self) -> ChainTnorm {
        self.tnorm
    }

    /// Level nearest to `v ∈ [0, 1]`.
    pub fn level_of(&self, v: f64) -> u32 {
        let v = v.clamp(0.0, 1.0);
        (v * self.denominator as f64).round() as u32
    }

    pub fn value_of(&self, level: u32) -> f64 {
        level as f64 / self.denominator as f64
    }
}

impl Quantale for ChainQuantale {
    type Elem = u32;

    fn bottom(&self) -> u32 {
        0
    }

    fn top(&self) -> u32 {
        self.denominator
    }

    fn unit(&self) -> u32 {
        self.denominator
    }

    fn contains(&self, x: &u32) -> bool {
        *x <= self.denominator
    }

    fn leq(&self, x: &u32, y: &u32) -> bool {
        x <= y
    }

    fn join(&self, x: &u32, y: &u32) -> u32 {
        *x.max(y)
    }

    fn meet(&self, x: &u32, y: &u32) -> u32 {
        *x.min(y)
    }

    fn mul(&self, x: &u32, y: &u32) -> u32 {
        match self.tnorm {
            ChainTnorm::Lukasiewicz => (x + y).saturating_sub(self.denominator),
            ChainTnorm::Godel => *x.min(y),
        }
    }

    fn rres(&self, z: &u32, y: &u32) -> u32 {
        let d = self.denominator;
        match self.tnorm {
            ChainTnorm::Lukasiewicz => (d - y.min(&d) + z).min(d),
            ChainTnorm::Godel => {
                if y <= z {
                    d
                } else {
                    *z
                }
            }
        }
    }

    fn lres(&self, x: &u32, z: &u32) -> u32 {
        // commutative
        self.rres(z, x)
    }

    fn is_commutative(&self) -> bool {
        true
    }

    fn describe(&self) -> String {
        let t = match self.tnorm {
            ChainTnorm::Lukasiewicz => "lukasiewicz",
            ChainTnorm::Godel => "godel",
        };
        format!("chain d={} ({t})", self.denominator)
    }
}

impl FiniteQuantale for ChainQuantale {
    fn elements(&self) -> Vec<u32> {
        (0..=self.denominator).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantale::{check_quantale_laws, residual_by_search, Side};

    fn brute_rres(q: &ChainQuantale, z: u32, y: u32) -> u32 {
        (0..=q.denominator()).filter(|x| q.mul(x, &y) <= z).max().unwrap()
    }

    #[test]
    fn lukasiewicz_examples() {
        let q = ChainQuantale::lukasiewicz(4).unwrap();
        assert_eq!(q.join_all([2, 3]), 3);
        assert_eq!(q.mul(&2, &3), 1);
        assert_eq!(q.rres(&1, &2), 3);
        assert_eq!(q.lres(&2, &1), 3);
        for x in 0..=4 {
            assert_eq!(q.mul(&4, &x), x);
            assert_eq!(q.rres(&x, &4), x);
            assert_eq!(q.lres(&4, &x), x);
        }
    }

    #[test]
    fn godel_examples() {
        let q = ChainQuantale::godel(4).unwrap();
        assert_eq!(q.rres(&2, &3), 2);
        assert_eq!(q.rres(&3, &2), 4);
    }

    #[test]
    fn closed_forms_match_brute_force() {
        for d in 1..=10 {
            for q in [ChainQuantale::lukasiewicz(d).unwrap(), ChainQuantale::godel(d).unwrap()] {
                for a in 0..=d {
                    for b in 0..=d {
                        if q.tnorm() == ChainTnorm::Lukasiewicz {
                            assert_eq!(q.mul(&a, &b), (a + b).saturating_sub(d));
                            assert_eq!(q.rres(&a, &b), d.min(d - b + a));
                        }
                        assert_eq!(q.rres(&a, &b), brute_rres(&q, a, b));
                        assert_eq!(q.lres(&a, &b), residual_by_search(&q, &a, &b, Side::Left));
                    }
                }
            }
        }
    }

    #[test]
    fn d5_laws_hold() {
        assert!(check_quantale_laws(&ChainQuantale::lukasiewicz(5).unwrap()).is_ok());
        assert!(check_quantale_laws(&ChainQuantale::godel(5).unwrap()).is_ok());
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(ChainQuantale::lukasiewicz(0).is_err());
    }
}
