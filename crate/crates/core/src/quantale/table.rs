use std::sync::Arc;

use crate::error::{Error, Result};
use crate::suplattice::FiniteLattice;

use super::{residual_by_search, FiniteQuantale, Quantale, Side};

/// A finite quantale given by a lattice and a product table over its
/// indices. Residuals are found by search.
///
/// Construction checks only shapes and ranges; run
/// [`check_quantale_laws`](super::check_quantale_laws) to certify a table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableQuantale {
    lattice: Arc<FiniteLattice>,
    product: Vec<usize>,
    unit: usize,
}

impl TableQuantale {
    pub fn new(lattice: Arc<FiniteLattice>, product: Vec<usize>, unit: usize) -> Result<Self> {
        let n = lattice.len();
        if product.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, got: product.len() });
        }
        if unit >= n || product.iter().any(|&v| v >= n) {
            return Err(Error::OutOfRange("product table index outside the lattice".into()));
        }
        Ok(Self { lattice, product, unit })
    }

    /// Tabulates any finite quantale. Returns the table and the element list
    /// giving the meaning of each index.
    pub fn from_finite<Q: FiniteQuantale>(q: &Q) -> (Self, Vec<Q::Elem>) {
        let elems = q.elements();
        let index = |x: &Q::Elem| {
            elems
                .iter()
                .position(|e| q.same(e, x))
                .expect("finite quantale closed under its operations")
        };
        let n = elems.len();
        let lattice = FiniteLattice::from_leq(n, |a, b| q.leq(&elems[a], &elems[b]))
            .expect("a quantale carrier is a lattice");
        let mut product = Vec::with_capacity(n * n);
        for a in &elems {
            for b in &elems {
                product.push(index(&q.mul(a, b)));
            }
        }
        let unit = index(&q.unit());
        let t = Self { lattice: Arc::new(lattice), product, unit };
        (t, elems)
    }

    pub fn lattice(&self) -> &Arc<FiniteLattice> {
        &self.lattice
    }

    /// Overwrites one product entry.
    pub fn set_product(&mut self, a: usize, b: usize, v: usize) {
        let n = self.lattice.len();
        self.product[a * n + b] = v;
    }
}

impl Quantale for TableQuantale {
    type Elem = usize;

    fn bottom(&self) -> usize {
        self.lattice.bottom()
    }
    fn top(&self) -> usize {
        self.lattice.top()
    }
    fn unit(&self) -> usize {
        self.unit
    }
    fn contains(&self, x: &usize) -> bool {
        *x < self.lattice.len()
    }
    fn leq(&self, x: &usize, y: &usize) -> bool {
        self.lattice.leq(*x, *y)
    }
    fn join(&self, x: &usize, y: &usize) -> usize {
        self.lattice.join(*x, *y)
    }
    fn meet(&self, x: &usize, y: &usize) -> usize {
        self.lattice.meet(*x, *y)
    }
    fn mul(&self, x: &usize, y: &usize) -> usize {
        self.product[x * self.lattice.len() + y]
    }
    fn rres(&self, z: &usize, y: &usize) -> usize {
        residual_by_search(self, y, z, Side::Right)
    }
    fn lres(&self, x: &usize, z: &usize) -> usize {
        residual_by_search(self, x, z, Side::Left)
    }
    fn is_commutative(&self) -> bool {
        let n = self.lattice.len();
        (0..n).all(|a| (0..n).all(|b| self.mul(&a, &b) == self.mul(&b, &a)))
    }
    fn describe(&self) -> String {
        format!("table quantale on {} elements", self.lattice.len())
    }
}

impl FiniteQuantale for TableQuantale {
    fn elements(&self) -> Vec<usize> {
        self.lattice.elements().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantale::{check_quantale_laws, ChainQuantale};

    #[test]
    fn tabulated_chain_keeps_its_laws() {
        let q = ChainQuantale::lukasiewicz(4).unwrap();
        let (t, elems) = TableQuantale::from_finite(&q);
        assert_eq!(elems, vec![0, 1, 2, 3, 4]);
        assert!(check_quantale_laws(&t).is_ok());
        for a in 0..5u32 {
            for b in 0..5u32 {
                assert_eq!(t.rres(&(a as usize), &(b as usize)) as u32, q.rres(&a, &b));
            }
        }
    }

    #[test]
    fn corrupted_table_names_a_law() {
        let (mut t, _) = TableQuantale::from_finite(&ChainQuantale::lukasiewicz(4).unwrap());
        t.set_product(2, 3, 4);
        let r = check_quantale_laws(&t);
        assert!(!r.is_ok());
        assert!(!r.violations().is_empty());
    }
}
