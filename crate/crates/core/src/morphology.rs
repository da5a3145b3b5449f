//! Translation-invariant morphology on finite grids.
//!
//! Grey dilation and erosion by a structuring element `A`:
//!
//! * `δ_A(X)(y) = ⋁_x X(x) · A(y - x)`,
//! * `ε_A(Y)(x) = ⋀_y Y(y) / A(y - x)`,
//!
//! with values in any quantale. Over the two-element chain these are the
//! set operations `⋃_{x∈X} A + x` and `{y | A + y ⊆ X}`, also provided
//! directly on boolean masks.
//!
//! In [`GridMode::Wrap`] the grid is the group `Z_w × Z_h` and both
//! operators are transforms with kernel `k(x, y) = A(y - x)`. In
//! [`GridMode::Bounded`] values outside the grid count as bottom for
//! dilation, and erosion only probes points inside the grid. The pair stays
//! adjoint; translation invariance fails near the border.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::laws::LawReport;
use crate::quantale::Quantale;
use crate::transform::Kernel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GridMode {
    #[default]
    Wrap,
    Bounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid {
    pub width: usize,
    pub height: usize,
    pub mode: GridMode,
}

impl Grid {
    pub fn new(width: usize, height: usize, mode: GridMode) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::OutOfRange(format!("empty grid {width}x{height}")));
        }
        Ok(Self { width, height, mode })
    }

    /// A one-dimensional grid, `height = 1`.
    pub fn line(width: usize, mode: GridMode) -> Result<Self> {
        Self::new(width, 1, mode)
    }

    pub fn len(&self) -> usize {
        self.width * self.height
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, x: usize, y: usize) -> usize {
        y * self.width + x
    }

    pub fn coords(&self, i: usize) -> (usize, usize) {
        (i % self.width, i / self.width)
    }

    /// The cell at `(x, y) + (dx, dy)`: wrapped, or `None` off a bounded grid.
    pub fn shift(&self, i: usize, dx: i64, dy: i64) -> Option<usize> {
        let (x, y) = self.coords(i);
        let (w, h) = (self.width as i64, self.height as i64);
        let (nx, ny) = (x as i64 + dx, y as i64 + dy);
        match self.mode {
            GridMode::Wrap => Some(self.index(nx.rem_euclid(w) as usize, ny.rem_euclid(h) as usize)),
            GridMode::Bounded => {
                if (0..w).contains(&nx) && (0..h).contains(&ny) {
                    Some(self.index(nx as usize, ny as usize))
                } else {
                    None
                }
            }
        }
    }

    /// Canonical representative of an offset in the wrapped group.
    fn reduce(&self, dx: i64, dy: i64) -> (i64, i64) {
        (dx.rem_euclid(self.width as i64), dy.rem_euclid(self.height as i64))
    }
}

/// Values on a grid, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Image<E> {
    grid: Grid,
    data: Vec<E>,
}

impl<E: Clone> Image<E> {
    pub fn new(grid: Grid, data: Vec<E>) -> Result<Self> {
        if data.len() != grid.len() {
            return Err(Error::DimensionMismatch { expected: grid.len(), got: data.len() });
        }
        Ok(Self { grid, data })
    }

    pub fn filled(grid: Grid, v: E) -> Self {
        Self { grid, data: vec![v; grid.len()] }
    }

    pub fn from_fn(grid: Grid, f: impl FnMut(usize) -> E) -> Self {
        Self { grid, data: (0..grid.len()).map(f).collect() }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn data(&self) -> &[E] {
        &self.data
    }

    pub fn into_data(self) -> Vec<E> {
        self.data
    }

    pub fn get(&self, x: usize, y: usize) -> &E {
        &self.data[self.grid.index(x, y)]
    }

    pub fn with_mode(mut self, mode: GridMode) -> Self {
        self.grid.mode = mode;
        self
    }
}

/// A finitely supported structuring element: offsets relative to the origin
/// with their membership values. Repeated offsets are joined.
#[derive(Debug, Clone, PartialEq)]
pub struct StructuringElement<E> {
    support: Vec<((i64, i64), E)>,
}

impl<E: Clone + PartialEq> StructuringElement<E> {
    pub fn new(support: Vec<((i64, i64), E)>) -> Self {
        Self { support }
    }

    /// The unit impulse at the origin.
    pub fn impulse(unit: E) -> Self {
        Self { support: vec![((0, 0), unit)] }
    }

    /// A set of offsets with value `unit`.
    pub fn flat(offsets: &[(i64, i64)], unit: E) -> Self {
        Self { support: offsets.iter().map(|&o| (o, unit.clone())).collect() }
    }

    /// From a `w × h` window with origin at `(ox, oy)`; cells equal to
    /// `bottom` are left out of the support.
    pub fn from_window(w: usize, h: usize, ox: usize, oy: usize, values: Vec<E>, bottom: &E) -> Result<Self> {
        if values.len() != w * h {
            return Err(Error::DimensionMismatch { expected: w * h, got: values.len() });
        }
        if ox >= w || oy >= h {
            return Err(Error::OutOfRange(format!("origin ({ox}, {oy}) outside {w}x{h} window")));
        }
        let support = values
            .into_iter()
            .enumerate()
            .filter(|(_, v)| v != bottom)
            .map(|(i, v)| (((i % w) as i64 - ox as i64, (i / w) as i64 - oy as i64), v))
            .collect();
        Ok(Self { support })
    }

    pub fn support(&self) -> &[((i64, i64), E)] {
        &self.support
    }

    /// `Ă = {-a | a ∈ A}`.
    pub fn reflect(&self) -> Self {
        Self { support: self.support.iter().map(|((dx, dy), v)| ((-dx, -dy), v.clone())).collect() }
    }

    /// `A` as a function on the wrapped group: entries keyed by canonical offset.
    pub fn on_group<Q: Quantale<Elem = E>>(&self, q: &Q, grid: &Grid) -> BTreeMap<(i64, i64), E> {
        let mut m: BTreeMap<(i64, i64), E> = BTreeMap::new();
        for ((dx, dy), v) in &self.support {
            let key = grid.reduce(*dx, *dy);
            let joined = match m.get(&key) {
                Some(old) => q.join(old, v),
                None => v.clone(),
            };
            m.insert(key, joined);
        }
        m
    }
}

/// `τ_h(X)(p) = X(p - h)`; off a bounded grid the vacated cells get `fill`.
pub fn translate<E: Clone>(img: &Image<E>, dx: i64, dy: i64, fill: E) -> Image<E> {
    let g = img.grid;
    Image::from_fn(g, |i| match g.shift(i, -dx, -dy) {
        Some(j) => img.data[j].clone(),
        None => fill.clone(),
    })
}

/// `δ_A(X)(y) = ⋁_a X(y - a) · A(a)`.
pub fn dilate<Q: Quantale>(q: &Q, img: &Image<Q::Elem>, se: &StructuringElement<Q::Elem>) -> Image<Q::Elem> {
    let g = img.grid;
    Image::from_fn(g, |y| {
        q.join_all(se.support.iter().filter_map(|((dx, dy), a)| {
            g.shift(y, -dx, -dy).map(|x| q.mul(&img.data[x], a))
        }))
    })
}

/// `ε_A(Y)(x) = ⋀_a Y(x + a) / A(a)`, over probes inside the grid.
pub fn erode<Q: Quantale>(q: &Q, img: &Image<Q::Elem>, se: &StructuringElement<Q::Elem>) -> Image<Q::Elem> {
    let g = img.grid;
    Image::from_fn(g, |x| {
        q.meet_all(se.support.iter().filter_map(|((dx, dy), a)| {
            g.shift(x, *dx, *dy).map(|y| q.rres(&img.data[y], a))
        }))
    })
}

/// `δ ∘ ε`.
pub fn opening<Q: Quantale>(q: &Q, img: &Image<Q::Elem>, se: &StructuringElement<Q::Elem>) -> Image<Q::Elem> {
    dilate(q, &erode(q, img, se), se)
}

/// `ε ∘ δ`.
pub fn closing<Q: Quantale>(q: &Q, img: &Image<Q::Elem>, se: &StructuringElement<Q::Elem>) -> Image<Q::Elem> {
    erode(q, &dilate(q, img, se), se)
}

/// `⋃_{x ∈ X} (A + x)` on a boolean mask.
pub fn dilate_set(grid: &Grid, mask: &[bool], offsets: &[(i64, i64)]) -> Vec<bool> {
    let mut out = vec![false; grid.len()];
    for (x, _) in mask.iter().enumerate().filter(|(_, &b)| b) {
        for &(dx, dy) in offsets {
            if let Some(y) = grid.shift(x, dx, dy) {
                out[y] = true;
            }
        }
    }
    out
}

/// `{y | A + y ⊆ X}` on a boolean mask, with off-grid points of `A + y` ignored.
pub fn erode_set(grid: &Grid, mask: &[bool], offsets: &[(i64, i64)]) -> Vec<bool> {
    (0..grid.len())
        .map(|y| offsets.iter().all(|&(dx, dy)| grid.shift(y, dx, dy).is_none_or(|p| mask[p])))
        .collect()
}

/// The transform kernel `k(x, y) = A(y - x)` on a wrapped grid.
pub fn kernel_of_structuring<Q: Quantale + Clone>(
    q: &Q,
    se: &StructuringElement<Q::Elem>,
    grid: &Grid,
) -> Result<Kernel<Q>> {
    if grid.mode != GridMode::Wrap {
        return Err(Error::NeedsGroup);
    }
    let a = se.on_group(q, grid);
    let bot = q.bottom();
    Ok(Kernel::from_fn(q.clone(), grid.len(), grid.len(), |x, y| {
        let (x0, x1) = grid.coords(x);
        let (y0, y1) = grid.coords(y);
        let off = grid.reduce(y0 as i64 - x0 as i64, y1 as i64 - x1 as i64);
        a.get(&off).cloned().unwrap_or_else(|| bot.clone())
    }))
}

/// Pointwise order of two images.
pub fn image_leq<Q: Quantale>(q: &Q, a: &Image<Q::Elem>, b: &Image<Q::Elem>) -> bool {
    a.data.iter().zip(&b.data).all(|(x, y)| q.leq(x, y))
}

/// Adjunction, opening/closing order and idempotence, join and meet
/// preservation, and in wrap mode translation invariance and agreement
/// with the kernel form, over every pair drawn from `images`.
pub fn check_morphology_laws<Q: Quantale + Clone>(
    q: &Q,
    images: &[Image<Q::Elem>],
    se: &StructuringElement<Q::Elem>,
    shifts: &[(i64, i64)],
) -> LawReport {
    let mut rep = LawReport::new();
    let Some(first) = images.first() else {
        return rep;
    };
    let grid = first.grid;
    let same = |a: &Image<Q::Elem>, b: &Image<Q::Elem>| a.data.iter().zip(&b.data).all(|(x, y)| q.same(x, y));
    let kernel = match grid.mode {
        GridMode::Wrap => kernel_of_structuring(q, se, &grid).ok(),
        GridMode::Bounded => None,
    };
    let dil: Vec<_> = images.iter().map(|x| dilate(q, x, se)).collect();
    let ero: Vec<_> = images.iter().map(|x| erode(q, x, se)).collect();
    for (i, x) in images.iter().enumerate() {
        let w = || format!("image #{i}");
        let open = dilate(q, &ero[i], se);
        let close = erode(q, &dil[i], se);
        rep.check("opening below identity", image_leq(q, &open, x), w);
        rep.check("closing above identity", image_leq(q, x, &close), w);
        rep.check("opening idempotent", same(&opening(q, &open, se), &open), w);
        rep.check("closing idempotent", same(&closing(q, &close, se), &close), w);
        if let Some(k) = &kernel {
            rep.check("dilation equals kernel direct transform", k.apply_direct(&x.data) == dil[i].data, w);
            rep.check("erosion equals kernel inverse transform", k.apply_inverse(&x.data) == ero[i].data, w);
            let bot = q.bottom();
            for &(dx, dy) in shifts {
                let t = translate(x, dx, dy, bot.clone());
                rep.check(
                    "dilation commutes with translation",
                    same(&dilate(q, &t, se), &translate(&dil[i], dx, dy, bot.clone())),
                    || format!("image #{i} shift ({dx}, {dy})"),
                );
                rep.check(
                    "erosion commutes with translation",
                    same(&erode(q, &t, se), &translate(&ero[i], dx, dy, bot.clone())),
                    || format!("image #{i} shift ({dx}, {dy})"),
                );
            }
        }
        for (j, y) in images.iter().enumerate() {
            let w = || format!("images #{i}, #{j}");
            rep.check(
                "dilation left adjoint to erosion",
                image_leq(q, &dil[i], y) == image_leq(q, x, &ero[j]),
                w,
            );
            let join = Image::from_fn(grid, |p| q.join(&x.data[p], &y.data[p]));
            let joined = Image::from_fn(grid, |p| q.join(&dil[i].data[p], &dil[j].data[p]));
            rep.check("dilation preserves joins", same(&dilate(q, &join, se), &joined), w);
            let meet = Image::from_fn(grid, |p| q.meet(&x.data[p], &y.data[p]));
            let met = Image::from_fn(grid, |p| q.meet(&ero[i].data[p], &ero[j].data[p]));
            rep.check("erosion preserves meets", same(&erode(q, &meet, se), &met), w);
        }
    }
    rep
}
