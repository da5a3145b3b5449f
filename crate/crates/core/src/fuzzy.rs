//! Fuzzy partitions and fuzzy transforms as kernels.
//!
//! A partition with basic functions `A_0, ..., A_{n-1}` sampled at nodes
//! `p_0, ..., p_{l-1}` is stored as the kernel `k(j, i) = A_i(p_j)` over
//! `X = nodes`, `Y = components`. Then
//!
//! * `F↑ = H_k f`, `f↑ = Λ_k F`;
//! * `f↓ = H_{kᵀ} F`, and the meet form of `F↓` is `Λ_{kᵀ} f`.
//!
//! The default `F↓` joins residua instead: `F↓_i = ⋁_j A_i(p_j) → f(p_j)`.
//! See [`DownVariant`].
//!
//! The Łukasiewicz basis uses hat functions centred at `k/(n-1)`; on the
//! grid `j/(l-1)` their values are rationals with denominator
//! `lcm(l-1, n-1)`, so partitions built here live on an exact chain.

use num_integer::Integer;
use num_traits::{FromPrimitive, Num};

use crate::error::{Error, Result};
use crate::quantale::{ChainQuantale, Quantale};
use crate::transform::Kernel;
use crate::Rational;

/// `p_k(x)` for the `n`-component Łukasiewicz basis on `[0, 1]`.
///
/// Works for any ordered field-like scalar; with [`Rational`] it is exact.
pub fn luk_basis_eval<T>(n: usize, k: usize, x: T) -> Result<T>
where
    T: Num + PartialOrd + Copy + FromPrimitive,
{
    if n < 2 {
        return Err(Error::OutOfRange(format!("basis needs n >= 2, got {n}")));
    }
    if k >= n {
        return Err(Error::OutOfRange(format!("component {k} outside 0..{n}")));
    }
    if x < T::zero() || x > T::one() {
        return Err(Error::OutOfRange("argument outside [0, 1]".into()));
    }
    let c = |v: usize| T::from_usize(v).expect("small integers are representable");
    let m = c(n - 1);
    let zero = T::zero();
    let v = if k == 0 {
        if x * m <= T::one() { T::one() - m * x } else { zero }
    } else if k == n - 1 {
        if x * m >= c(n - 2) { m * x - c(n - 2) } else { zero }
    } else {
        let mx = m * x;
        if mx >= c(k - 1) && mx <= c(k) {
            mx - c(k - 1)
        } else if mx >= c(k) && mx <= c(k + 1) {
            c(k + 1) - mx
        } else {
            zero
        }
    };
    Ok(v)
}

/// Value of `p_k` at grid node `j / (l-1)` as an exact rational.
pub fn luk_basis_at_node(n: usize, k: usize, j: usize, l: usize) -> Result<Rational> {
    if l < 2 || j >= l {
        return Err(Error::OutOfRange(format!("node {j} outside grid of {l}")));
    }
    luk_basis_eval(n, k, Rational::new(j as i64, (l - 1) as i64))
}

/// Which lower transform [`FuzzyPartition::f_down`] computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DownVariant {
    /// `⋁_j A_i(p_j) → f(p_j)`.
    #[default]
    Join,
    /// `⋀_j A_i(p_j) → f(p_j)`, the residual of `f↓`.
    Meet,
}

/// A fuzzy partition sampled on a finite grid, as a kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyPartition<Q: Quantale> {
    kernel: Kernel<Q>,
    aligned: bool,
}

impl<Q: Quantale + Clone> FuzzyPartition<Q> {
    /// `values[i][j] = A_i(p_j)`. Checks covering (every node is seen by a
    /// component) and density (every component sees a node).
    pub fn new(q: Q, values: Vec<Vec<Q::Elem>>) -> Result<Self> {
        let n = values.len();
        if n == 0 {
            return Err(Error::InvalidPartition("no components".into()));
        }
        let l = values[0].len();
        if let Some(i) = values.iter().position(|r| r.len() != l) {
            return Err(Error::InvalidPartition(format!("component {i} has {} nodes, expected {l}", values[i].len())));
        }
        let kernel = Kernel::from_fn(q, l, n, |j, i| values[i][j].clone());
        Self::from_kernel(kernel)
    }

    /// Wraps a node-by-component kernel after checking covering and density.
    pub fn from_kernel(kernel: Kernel<Q>) -> Result<Self> {
        let q = kernel.quantale();
        let bot = q.bottom();
        let pos = |x: &Q::Elem| !q.leq(x, &bot);
        for j in 0..kernel.rows() {
            if !(0..kernel.cols()).any(|i| pos(kernel.get(j, i))) {
                return Err(Error::InvalidPartition(format!("node {j} is not covered")));
            }
        }
        for i in 0..kernel.cols() {
            if !(0..kernel.rows()).any(|j| pos(kernel.get(j, i))) {
                return Err(Error::InvalidPartition(format!("component {i} sees no node")));
            }
        }
        Ok(Self { kernel, aligned: true })
    }

    pub fn kernel(&self) -> &Kernel<Q> {
        &self.kernel
    }

    pub fn components(&self) -> usize {
        self.kernel.cols()
    }

    pub fn nodes(&self) -> usize {
        self.kernel.rows()
    }

    /// `false` when the component centres had to be snapped to the nearest node.
    pub fn is_aligned(&self) -> bool {
        self.aligned
    }

    /// `A_i(p_j)`.
    pub fn value(&self, i: usize, j: usize) -> &Q::Elem {
        self.kernel.get(j, i)
    }

    /// `F↑_i = ⋁_j A_i(p_j) ∗ f(p_j)`.
    pub fn f_up(&self, f: &[Q::Elem]) -> Result<Vec<Q::Elem>> {
        self.kernel.try_apply_direct(f)
    }

    /// `f↑(p_j) = ⋀_i A_i(p_j) → F_i`.
    pub fn f_up_inverse(&self, coeffs: &[Q::Elem]) -> Result<Vec<Q::Elem>> {
        self.kernel.try_apply_inverse(coeffs)
    }

    pub fn f_down(&self, f: &[Q::Elem], variant: DownVariant) -> Result<Vec<Q::Elem>> {
        if f.len() != self.nodes() {
            return Err(Error::DimensionMismatch { expected: self.nodes(), got: f.len() });
        }
        let q = self.kernel.quantale();
        Ok(match variant {
            DownVariant::Join => (0..self.components())
                .map(|i| q.join_all((0..self.nodes()).map(|j| q.rres(&f[j], self.value(i, j)))))
                .collect(),
            DownVariant::Meet => self.kernel.transpose().apply_inverse(f),
        })
    }

    /// `f↓(p_j) = ⋁_i A_i(p_j) ∗ F_i`.
    pub fn f_down_inverse(&self, coeffs: &[Q::Elem]) -> Result<Vec<Q::Elem>> {
        self.kernel.transpose().try_apply_direct(coeffs)
    }
}

/// The chain denominator used for an `n`-component basis on `l` nodes over
/// a base chain with denominator `base`.
pub fn luk_denominator(n: usize, l: usize, base: u32) -> Result<u32> {
    if n < 2 || l < 2 {
        return Err(Error::OutOfRange(format!("need n >= 2 and l >= 2, got n={n} l={l}")));
    }
    let d = (base.max(1) as u64).lcm(&((l - 1) as u64)).lcm(&((n - 1) as u64));
    u32::try_from(d)
        .ok()
        .filter(|&d| d <= u32::MAX / 2)
        .ok_or_else(|| Error::OutOfRange(format!("denominator {d} too large")))
}

/// Whether every component centre `k/(n-1)` is a grid node `j/(l-1)`.
pub fn is_aligned(n: usize, l: usize) -> bool {
    n >= 2 && l >= 2 && (l - 1) % (n - 1) == 0
}

/// The Łukasiewicz partition sampled on `l` nodes, on the Łukasiewicz chain
/// with denominator `lcm(l-1, n-1)`.
pub fn luk_partition(n: usize, l: usize) -> Result<FuzzyPartition<ChainQuantale>> {
    luk_partition_on(n, l, 1)
}

/// As [`luk_partition`], on a chain whose denominator is also a multiple of `base`.
///
/// The kernel's embedding sends component `k` to node `k(l-1)/(n-1)`; on
/// misaligned grids the nearest node is used and the partition is flagged.
pub fn luk_partition_on(n: usize, l: usize, base: u32) -> Result<FuzzyPartition<ChainQuantale>> {
    let d = luk_denominator(n, l, base)?;
    let q = ChainQuantale::lukasiewicz(d)?;
    let scale = Rational::from_integer(d as i64);
    let mut values = Vec::with_capacity(n);
    for k in 0..n {
        let row = (0..l)
            .map(|j| {
                let v = luk_basis_at_node(n, k, j, l)? * scale;
                debug_assert!(v.is_integer());
                Ok(v.to_integer() as u32)
            })
            .collect::<Result<Vec<u32>>>()?;
        values.push(row);
    }
    let mut part = FuzzyPartition::new(q, values)?;
    let aligned = is_aligned(n, l);
    let eps: Vec<usize> = (0..n)
        .map(|k| {
            let r = Rational::new((k * (l - 1)) as i64, (n - 1) as i64);
            r.round().to_integer() as usize
        })
        .collect();
    if let Ok(kernel) = part.kernel.clone().with_embedding(eps) {
        part.kernel = kernel;
    }
    part.aligned = aligned;
    Ok(part)
}

/// The kernel of [`luk_partition`].
pub fn luk_kernel(n: usize, l: usize) -> Result<Kernel<ChainQuantale>> {
    Ok(luk_partition(n, l)?.kernel)
}
