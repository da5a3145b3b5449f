//! Transforms between free modules.
//!
//! A kernel `p ∈ Q^{X×Y}` drives
//!
//! * the direct transform `H_p f(y) = ⋁_x f(x) · p(x,y)`,
//! * the inverse transform `Λ_p g(x) = ⋀_y g(y) / p(x,y)`,
//!
//! which form an adjoint pair. Right-module variants flip the product
//! (`p(x,y) · f(x)`) and use the other residual (`p(x,y) \ g(y)`).
//!
//! Columns of a kernel are labelled by points of `X` through an injective
//! embedding `ε: Y → X`; when none is given, column `j` is labelled `j` and
//! `|Y| ≤ |X|` is required.

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::laws::LawReport;
use crate::qmodule::{nucleus_check, EnumerableModule, FreeModule, QModule, ResiduatedModule};
use crate::quantale::{ChainQuantale, ChainTnorm, Quantale};

#[derive(Clone, PartialEq)]
pub struct Kernel<Q: Quantale> {
    q: Q,
    rows: usize,
    cols: usize,
    entries: Vec<Q::Elem>,
    embedding: Option<Vec<usize>>,
}

impl<Q: Quantale> fmt::Debug for Kernel<Q> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Kernel {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", &self.entries[r * self.cols..(r + 1) * self.cols])?;
        }
        Ok(())
    }
}

/// Coder classes of a kernel with respect to its embedding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CoderClass {
    pub coder: bool,
    pub normal: bool,
    pub strong: bool,
    pub orthogonal: bool,
    pub orthonormal: bool,
}

impl CoderClass {
    /// The strongest class held, for display.
    pub fn strongest(&self) -> &'static str {
        if self.orthonormal {
            "orthonormal"
        } else if self.strong {
            "strong"
        } else if self.normal {
            "normal"
        } else if self.coder {
            "coder"
        } else {
            "none"
        }
    }
}

fn check_embedding(rows: usize, cols: usize, eps: &[usize]) -> Result<()> {
    if eps.len() != cols {
        return Err(Error::DimensionMismatch { expected: cols, got: eps.len() });
    }
    let mut seen = vec![false; rows];
    for &x in eps {
        if x >= rows {
            return Err(Error::NoEmbedding(format!("label {x} outside X of size {rows}")));
        }
        if seen[x] {
            return Err(Error::NoEmbedding(format!("label {x} used twice")));
        }
        seen[x] = true;
    }
    Ok(())
}

impl<Q: Quantale + Clone> Kernel<Q> {
    /// `entries` is row-major: `entries[x * cols + y] = p(x, y)`.
    pub fn new(q: Q, rows: usize, cols: usize, entries: Vec<Q::Elem>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, got: entries.len() });
        }
        for e in &entries {
            q.ensure(e)?;
        }
        Ok(Self { q, rows, cols, entries, embedding: None })
    }

    pub fn from_fn(q: Q, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Q::Elem) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for x in 0..rows {
            for y in 0..cols {
                entries.push(f(x, y));
            }
        }
        Self { q, rows, cols, entries, embedding: None }
    }

    pub fn bottom(q: Q, rows: usize, cols: usize) -> Self {
        let b = q.bottom();
        Self::from_fn(q, rows, cols, |_, _| b.clone())
    }

    /// The projective coder `π_Y`: unit where the row is the column's label.
    pub fn projective_coder(q: Q, rows: usize, labels: &[usize]) -> Result<Self> {
        check_embedding(rows, labels.len(), labels)?;
        let (e, b) = (q.unit(), q.bottom());
        let k = Self::from_fn(q, rows, labels.len(), |x, j| {
            if labels[j] == x { e.clone() } else { b.clone() }
        });
        Ok(k.with_embedding_unchecked(labels.to_vec()))
    }

    /// Kernel of the identity on `Q^X`.
    pub fn identity(q: Q, n: usize) -> Self {
        let labels: Vec<usize> = (0..n).collect();
        Self::projective_coder(q, n, &labels).expect("identity labels are valid")
    }

    pub fn with_embedding(self, eps: Vec<usize>) -> Result<Self> {
        check_embedding(self.rows, self.cols, &eps)?;
        Ok(self.with_embedding_unchecked(eps))
    }

    fn with_embedding_unchecked(mut self, eps: Vec<usize>) -> Self {
        self.embedding = Some(eps);
        self
    }

    pub fn quantale(&self) -> &Q {
        &self.q
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Q::Elem] {
        &self.entries
    }

    pub fn get(&self, x: usize, y: usize) -> &Q::Elem {
        &self.entries[x * self.cols + y]
    }

    pub fn set(&mut self, x: usize, y: usize, v: Q::Elem) {
        self.entries[x * self.cols + y] = v;
    }

    pub fn row(&self, x: usize) -> &[Q::Elem] {
        &self.entries[x * self.cols..(x + 1) * self.cols]
    }

    pub fn column(&self, y: usize) -> Vec<Q::Elem> {
        (0..self.rows).map(|x| self.get(x, y).clone()).collect()
    }

    /// The column labels: the explicit embedding, or the inclusion `j ↦ j`.
    pub fn embedding(&self) -> Result<Vec<usize>> {
        match &self.embedding {
            Some(e) => Ok(e.clone()),
            None if self.cols <= self.rows => Ok((0..self.cols).collect()),
            None => Err(Error::NoEmbedding(format!(
                "{} columns do not include into {} rows",
                self.cols, self.rows
            ))),
        }
    }

    /// `p^T ∈ Q^{Y×X}`; the embedding is dropped.
    pub fn transpose(&self) -> Self {
        Self::from_fn(self.q.clone(), self.cols, self.rows, |y, x| self.get(x, y).clone())
    }

    fn check_len(&self, v: &[Q::Elem], n: usize) -> Result<()> {
        if v.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: v.len() });
        }
        for e in v {
            self.q.ensure(e)?;
        }
        Ok(())
    }

    /// `H_p f(y) = ⋁_x f(x) · p(x,y)`.
    pub fn apply_direct(&self, f: &[Q::Elem]) -> Vec<Q::Elem> {
        (0..self.cols)
            .map(|y| self.q.join_all((0..self.rows).map(|x| self.q.mul(&f[x], self.get(x, y)))))
            .collect()
    }

    /// `Λ_p g(x) = ⋀_y g(y) / p(x,y)`.
    pub fn apply_inverse(&self, g: &[Q::Elem]) -> Vec<Q::Elem> {
        (0..self.rows)
            .map(|x| self.q.meet_all((0..self.cols).map(|y| self.q.rres(&g[y], self.get(x, y)))))
            .collect()
    }

    /// `⋁_x p(x,y) · f(x)`.
    pub fn apply_direct_right(&self, f: &[Q::Elem]) -> Vec<Q::Elem> {
        (0..self.cols)
            .map(|y| self.q.join_all((0..self.rows).map(|x| self.q.mul(self.get(x, y), &f[x]))))
            .collect()
    }

    /// `⋀_y p(x,y) \ g(y)`.
    pub fn apply_inverse_right(&self, g: &[Q::Elem]) -> Vec<Q::Elem> {
        (0..self.rows)
            .map(|x| self.q.meet_all((0..self.cols).map(|y| self.q.lres(self.get(x, y), &g[y]))))
            .collect()
    }

    pub fn try_apply_direct(&self, f: &[Q::Elem]) -> Result<Vec<Q::Elem>> {
        self.check_len(f, self.rows)?;
        Ok(self.apply_direct(f))
    }

    pub fn try_apply_inverse(&self, g: &[Q::Elem]) -> Result<Vec<Q::Elem>> {
        self.check_len(g, self.cols)?;
        Ok(self.apply_inverse(g))
    }

    pub fn classify(&self) -> Result<CoderClass> {
        let eps = self.embedding()?;
        let q = &self.q;
        let (e, bot) = (q.unit(), q.bottom());
        let coder = (0..self.cols).all(|y| q.leq(&e, self.get(eps[y], y)));
        let normal = (0..self.cols).all(|y| q.same(self.get(eps[y], y), &e));
        let off_diag_bottom = (0..self.cols)
            .all(|y1| (0..self.cols).all(|y2| y1 == y2 || q.same(self.get(eps[y1], y2), &bot)));
        let strong = normal && off_diag_bottom;
        let orthogonal = (0..self.rows).all(|x| {
            (0..self.cols).all(|y1| {
                (0..self.cols).all(|y2| y1 == y2 || q.same(&q.mul(self.get(x, y1), self.get(x, y2)), &bot))
            })
        });
        let c = CoderClass {
            coder,
            normal,
            strong,
            orthogonal,
            orthonormal: orthogonal && normal,
        };
        debug_assert!(!c.orthonormal || c.strong);
        debug_assert!(!c.strong || c.normal);
        debug_assert!(!c.normal || c.coder);
        Ok(c)
    }

    fn is_pi_column(&self, y: usize, label: usize) -> bool {
        let (e, b) = (self.q.unit(), self.q.bottom());
        (0..self.rows).all(|x| self.q.same(self.get(x, y), if x == label { &e } else { &b }))
    }

    /// Labels of the columns that differ from the corresponding projective column.
    pub fn support(&self) -> Result<Vec<usize>> {
        let eps = self.embedding()?;
        let mut s: Vec<usize> = (0..self.cols)
            .filter(|&y| !self.is_pi_column(y, eps[y]))
            .map(|y| eps[y])
            .collect();
        s.sort_unstable();
        Ok(s)
    }

    /// The kernel restricted to its support, columns sorted by label.
    pub fn core(&self) -> Result<Self> {
        let eps = self.embedding()?;
        let support = self.support()?;
        let cols: Vec<usize> = support
            .iter()
            .map(|l| eps.iter().position(|e| e == l).expect("support label comes from ε"))
            .collect();
        let k = Self::from_fn(self.q.clone(), self.rows, cols.len(), |x, j| self.get(x, cols[j]).clone());
        Ok(k.with_embedding_unchecked(support))
    }

    pub fn is_irreducible(&self) -> Result<bool> {
        Ok(self.support()?.len() == self.cols)
    }

    /// Extends to the columns labelled by `z ⊇ ε[Y]`, filling new ones with
    /// projective columns. Columns come out sorted by label.
    pub fn projective_extension(&self, z: &[usize]) -> Result<Self> {
        let eps = self.embedding()?;
        let mut labels = z.to_vec();
        labels.sort_unstable();
        labels.dedup();
        if labels.iter().any(|&l| l >= self.rows) {
            return Err(Error::OutOfRange("extension label outside X".into()));
        }
        if let Some(l) = eps.iter().find(|l| !labels.contains(l)) {
            return Err(Error::OutOfRange(format!("extension omits existing label {l}")));
        }
        let (e, b) = (self.q.unit(), self.q.bottom());
        let k = Self::from_fn(self.q.clone(), self.rows, labels.len(), |x, j| {
            match eps.iter().position(|&l| l == labels[j]) {
                Some(y) => self.get(x, y).clone(),
                None if x == labels[j] => e.clone(),
                None => b.clone(),
            }
        });
        Ok(k.with_embedding_unchecked(labels))
    }

    /// The projective extension to all of `X`.
    pub fn closure(&self) -> Result<Self> {
        let all: Vec<usize> = (0..self.rows).collect();
        self.projective_extension(&all)
    }

    /// Equality of cores, as labelled column families.
    pub fn equivalent_up_to_projections(&self, other: &Self) -> Result<bool> {
        if self.rows != other.rows {
            return Ok(false);
        }
        let (a, b) = (self.core()?, other.core()?);
        Ok(a.embedding()? == b.embedding()? && a.same_entries(&b))
    }

    pub fn same_entries(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.entries.iter().zip(&other.entries).all(|(a, b)| self.q.same(a, b))
    }

    /// Pointwise join of kernels: the kernel of the pointwise join of their transforms.
    pub fn hom_join(q: Q, rows: usize, cols: usize, ks: &[Self]) -> Result<Self> {
        let mut acc = Self::bottom(q, rows, cols);
        for k in ks {
            if k.rows != rows || k.cols != cols {
                return Err(Error::DimensionMismatch { expected: rows * cols, got: k.rows * k.cols });
            }
            for (a, b) in acc.entries.iter_mut().zip(&k.entries) {
                *a = acc.q.join(a, b);
            }
        }
        Ok(acc)
    }

    /// `q ⋆ k`, computed on the kernel.
    pub fn hom_scalar(&self, s: &Q::Elem) -> Self {
        Self::from_fn(self.q.clone(), self.rows, self.cols, |x, y| self.q.mul(s, self.get(x, y)))
    }

    /// The kernel `k(x,y) = h(χ_x)(y)` of a homomorphism `Q^X → Q^Y`.
    pub fn of_hom(q: Q, rows: usize, cols: usize, h: impl Fn(&[Q::Elem]) -> Vec<Q::Elem>) -> Self {
        let free = FreeModule::new(q.clone(), rows);
        let images: Vec<Vec<Q::Elem>> = (0..rows).map(|x| h(&free.basis(x))).collect();
        Self::from_fn(q, rows, cols, |x, y| images[x][y].clone())
    }

    /// Stacks kernels over `X_1, X_2, ...` into one over their disjoint
    /// union: the kernel of the copairing on the product module.
    pub fn copair(ks: &[Self]) -> Result<Self> {
        let first = ks.first().ok_or_else(|| Error::InvalidCarrier("empty copairing".into()))?;
        let cols = first.cols;
        let mut entries = Vec::new();
        let mut rows = 0;
        for k in ks {
            if k.cols != cols {
                return Err(Error::DimensionMismatch { expected: cols, got: k.cols });
            }
            entries.extend(k.entries.iter().cloned());
            rows += k.rows;
        }
        Self::new(first.q.clone(), rows, cols, entries)
    }
}

/// `kernel_of_hom` as a free function.
pub fn kernel_of_hom<Q: Quantale + Clone>(
    q: Q,
    rows: usize,
    cols: usize,
    h: impl Fn(&[Q::Elem]) -> Vec<Q::Elem>,
) -> Kernel<Q> {
    Kernel::of_hom(q, rows, cols, h)
}

/// A surjection from a free module onto `target`, given by the images
/// `b_y` of the basis vectors: `α ↦ ⋁_y α(y) ⋆ b_y`. Its residual is
/// `n ↦ (n ⋆/ b_y)_y`.
pub struct Presentation<'a, N: QModule> {
    pub target: &'a N,
    pub images: Vec<N::Elem>,
}

impl<N: ResiduatedModule> Presentation<'_, N> {
    pub fn apply(&self, alpha: &[<N::Q as Quantale>::Elem]) -> N::Elem {
        self.target
            .join_all(alpha.iter().zip(&self.images).map(|(a, b)| self.target.act(a, b)))
    }

    pub fn residual(&self, n: &N::Elem) -> Vec<<N::Q as Quantale>::Elem> {
        self.images.iter().map(|b| self.target.vdiv(n, b)).collect()
    }

    /// First element `n` with `π(π_*(n)) ≠ n`, if any.
    pub fn surjectivity_witness(&self, probes: &[N::Elem]) -> Option<N::Elem> {
        probes
            .iter()
            .find(|n| !self.target.same(&self.apply(&self.residual(n)), n))
            .cloned()
    }
}

/// Lifts `h: M → N` along presentations `π: Q^X → M`, `π': Q^Y → N` to a
/// kernel with `h ∘ π = π' ∘ H_k`, using `k(x,·) = π'_*(h(π(χ_x)))`.
/// Surjectivity of `π'` is checked on every element of `N`.
pub fn lift_through_projection<Q, M, N>(
    q: &Q,
    rows: usize,
    h: impl Fn(&M::Elem) -> N::Elem,
    pi: impl Fn(&[Q::Elem]) -> M::Elem,
    pi_prime: &Presentation<'_, N>,
) -> Result<Kernel<Q>>
where
    Q: Quantale + Clone,
    M: QModule<Q = Q>,
    N: ResiduatedModule<Q = Q> + EnumerableModule,
{
    let all = pi_prime.target.elements()?;
    if let Some(n) = pi_prime.surjectivity_witness(&all) {
        return Err(Error::NoLift(format!("presentation of the codomain misses {n:?}")));
    }
    let free = FreeModule::new(q.clone(), rows);
    let cols = pi_prime.images.len();
    let row_vals: Vec<Vec<Q::Elem>> = (0..rows)
        .map(|x| pi_prime.residual(&h(&pi(&free.basis(x)))))
        .collect();
    Ok(Kernel::from_fn(q.clone(), rows, cols, |x, y| row_vals[x][y].clone()))
}

/// A random kernel with entries drawn from `scalars`.
pub fn random_kernel<Q: Quantale + Clone, R: Rng>(
    q: &Q,
    scalars: &[Q::Elem],
    rows: usize,
    cols: usize,
    rng: &mut R,
) -> Kernel<Q> {
    Kernel::from_fn(q.clone(), rows, cols, |_, _| scalars[rng.gen_range(0..scalars.len())].clone())
}

/// A random strong kernel: a random injective embedding, unit on its
/// diagonal, bottom elsewhere in the embedded rows, random in other rows.
pub fn random_strong_kernel<Q: Quantale + Clone, R: Rng>(
    q: &Q,
    scalars: &[Q::Elem],
    rows: usize,
    cols: usize,
    rng: &mut R,
) -> Result<Kernel<Q>> {
    if cols > rows {
        return Err(Error::NoEmbedding(format!("{cols} columns into {rows} rows")));
    }
    let mut perm: Vec<usize> = (0..rows).collect();
    perm.shuffle(rng);
    let eps: Vec<usize> = perm[..cols].to_vec();
    let mut k = random_kernel(q, scalars, rows, cols, rng);
    for (y1, &x) in eps.iter().enumerate() {
        for y2 in 0..cols {
            k.set(x, y2, if y1 == y2 { q.unit() } else { q.bottom() });
        }
    }
    k.with_embedding(eps)
}

/// Laws of the transform pair on the given sample vectors: adjunction,
/// the two triangle identities, preservation of joins, meets and scalars,
/// the nucleus `Λ ∘ H` on `Q^X`, the interior `H ∘ Λ` as a nucleus of the
/// order dual of `Q^Y`, and `H ∘ Λ = id` when the kernel is strong.
pub fn check_transform_laws<Q: Quantale + Clone>(
    k: &Kernel<Q>,
    scalars: &[Q::Elem],
    fs: &[Vec<Q::Elem>],
    gs: &[Vec<Q::Elem>],
) -> LawReport {
    let mx = FreeModule::new(k.q.clone(), k.rows);
    let my = FreeModule::new(k.q.clone(), k.cols);
    let mut r = LawReport::new();
    let hf: Vec<_> = fs.iter().map(|f| k.apply_direct(f)).collect();
    let lg: Vec<_> = gs.iter().map(|g| k.apply_inverse(g)).collect();
    for (f, h) in fs.iter().zip(&hf) {
        for (g, l) in gs.iter().zip(&lg) {
            r.check("transform: adjunction", my.leq(h, g) == mx.leq(f, l), || {
                format!("f={f:?} g={g:?}")
            });
        }
        let hlh = k.apply_direct(&k.apply_inverse(h));
        r.check("transform: H Λ H = H", my.same(&hlh, h), || format!("f={f:?}"));
        for s in scalars {
            r.check(
                "transform: direct preserves scalars",
                my.same(&k.apply_direct(&mx.act(s, f)), &my.act(s, h)),
                || format!("q={s:?} f={f:?}"),
            );
        }
    }
    for (i, f) in fs.iter().enumerate() {
        let j = (i * 7 + 3) % fs.len();
        let lhs = k.apply_direct(&mx.join(f, &fs[j]));
        r.check("transform: direct preserves joins", my.same(&lhs, &my.join(&hf[i], &hf[j])), || {
            format!("f={f:?} f'={:?}", fs[j])
        });
    }
    for (i, g) in gs.iter().enumerate() {
        let lhl = k.apply_inverse(&k.apply_direct(&lg[i]));
        r.check("transform: Λ H Λ = Λ", mx.same(&lhl, &lg[i]), || format!("g={g:?}"));
        let j = (i * 7 + 3) % gs.len();
        let lhs = k.apply_inverse(&my.meet(g, &gs[j]));
        r.check("transform: inverse preserves meets", mx.same(&lhs, &mx.meet(&lg[i], &lg[j])), || {
            format!("g={g:?} g'={:?}", gs[j])
        });
        for s in scalars {
            r.check(
                "transform: inverse commutes with scalar residuals",
                mx.same(&k.apply_inverse(&my.ldiv(s, g)), &mx.ldiv(s, &lg[i])),
                || format!("q={s:?} g={g:?}"),
            );
        }
    }
    let gamma = |f: &Vec<Q::Elem>| k.apply_inverse(&k.apply_direct(f));
    r.merge_prefixed("closure Λ H", nucleus_check(&mx, gamma, scalars, fs));
    r.merge_prefixed("interior H Λ", dual_nucleus_check(k, scalars, gs));
    if matches!(k.classify(), Ok(c) if c.strong) {
        for g in gs {
            r.check("strong kernel: H Λ = id", my.same(&k.apply_direct(&k.apply_inverse(g)), g), || {
                format!("g={g:?}")
            });
        }
    }
    r
}

/// `δ = H_p ∘ Λ_p` as a nucleus of `(Q^Y)^op`, whose action is
/// `(q, g) ↦ q \⋆ g`: deflationary, monotone, idempotent and
/// `δ(q \⋆ g) ≤ q \⋆ δ(g)`.
pub fn dual_nucleus_check<Q: Quantale + Clone>(
    k: &Kernel<Q>,
    scalars: &[Q::Elem],
    gs: &[Vec<Q::Elem>],
) -> LawReport {
    let my = FreeModule::new(k.q.clone(), k.cols);
    let delta = |g: &Vec<Q::Elem>| k.apply_direct(&k.apply_inverse(g));
    let mut r = LawReport::new();
    let dg: Vec<_> = gs.iter().map(delta).collect();
    for (g, d) in gs.iter().zip(&dg) {
        r.check("deflationary", my.leq(d, g), || format!("g={g:?}"));
        r.check("idempotent", my.same(&delta(d), d), || format!("g={g:?}"));
        for (g2, d2) in gs.iter().zip(&dg) {
            if my.leq(g, g2) {
                r.check("monotone", my.leq(d, d2), || format!("g={g:?} g'={g2:?}"));
            }
        }
        for s in scalars {
            r.check("structural on the dual", my.leq(&delta(&my.ldiv(s, g)), &my.ldiv(s, d)), || {
                format!("q={s:?} g={g:?}")
            });
        }
    }
    r
}

fn chain_kind(q: &ChainQuantale) -> &'static str {
    match q.tnorm() {
        ChainTnorm::Lukasiewicz => "lukasiewicz",
        ChainTnorm::Godel => "godel",
    }
}

/// Text form: a header line `carrier=<kind> d=<d> rows=<|X|> cols=<|Y|>`,
/// then one line of levels per row.
pub fn kernel_to_text(k: &Kernel<ChainQuantale>) -> String {
    let mut s = format!(
        "carrier={} d={} rows={} cols={}\n",
        chain_kind(&k.q),
        k.q.denominator(),
        k.rows,
        k.cols
    );
    for x in 0..k.rows {
        let line: Vec<String> = k.row(x).iter().map(u32::to_string).collect();
        s.push_str(&line.join(" "));
        s.push('\n');
    }
    s
}

pub fn kernel_from_text(text: &str) -> Result<Kernel<ChainQuantale>> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| Error::Parse("empty kernel file".into()))?;
    let (mut kind, mut d, mut rows, mut cols) = (None, None, None, None);
    for tok in header.split_whitespace() {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("bad header token {tok:?}")))?;
        let num = || v.parse::<usize>().map_err(|e| Error::Parse(format!("{k}: {e}")));
        match k {
            "carrier" => kind = Some(v.to_string()),
            "d" => d = Some(num()?),
            "rows" => rows = Some(num()?),
            "cols" => cols = Some(num()?),
            _ => return Err(Error::Parse(format!("unknown header key {k:?}"))),
        }
    }
    let tnorm = match kind.as_deref() {
        Some("lukasiewicz") => ChainTnorm::Lukasiewicz,
        Some("godel") => ChainTnorm::Godel,
        other => return Err(Error::Parse(format!("unknown carrier {other:?}"))),
    };
    let missing = |what: &str| Error::Parse(format!("missing {what}"));
    let d = u32::try_from(d.ok_or_else(|| missing("d"))?).map_err(|e| Error::Parse(e.to_string()))?;
    let (rows, cols) = (rows.ok_or_else(|| missing("rows"))?, cols.ok_or_else(|| missing("cols"))?);
    let q = ChainQuantale::new(d, tnorm)?;
    let mut entries = Vec::with_capacity(rows * cols);
    for l in lines {
        for t in l.split_whitespace() {
            entries.push(t.parse::<u32>().map_err(|e| Error::Parse(format!("level {t:?}: {e}")))?);
        }
    }
    Kernel::new(q, rows, cols, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantale::{FiniteQuantale, MonoidTable, PowersetQuantale};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn luk(d: u32) -> ChainQuantale {
        ChainQuantale::lukasiewicz(d).unwrap()
    }

    #[test]
    fn worked_example() {
        let p = Kernel::new(luk(4), 2, 1, vec![4, 2]).unwrap();
        assert_eq!(p.apply_direct(&[3, 3]), vec![3]);
        assert_eq!(p.apply_inverse(&[3]), vec![3, 4]);
        assert_eq!(p.apply_inverse(&[4]), vec![4, 4]);
        assert_eq!(p.apply_direct(&[0, 0]), vec![0]);
        assert!(p.try_apply_direct(&[1]).is_err());
        assert!(p.try_apply_direct(&[1, 9]).is_err());
    }

    #[test]
    fn projective_coder_restricts_and_extends() {
        let p = Kernel::projective_coder(luk(4), 4, &[1, 3]).unwrap();
        assert_eq!(p.apply_direct(&[0, 1, 2, 3]), vec![1, 3]);
        assert_eq!(p.apply_inverse(&[1, 3]), vec![4, 1, 4, 3]);
        assert!(p.classify().unwrap().orthonormal);
        assert!(p.support().unwrap().is_empty());
        let c = p.closure().unwrap();
        assert!(c.same_entries(&Kernel::identity(luk(4), 4)));
        assert!(Kernel::projective_coder(luk(4), 2, &[2]).is_err());
    }

    #[test]
    fn bottom_kernel_is_not_a_coder() {
        let c = Kernel::bottom(luk(3), 3, 2).classify().unwrap();
        assert!(!c.coder && !c.normal && !c.strong && !c.orthonormal);
        assert!(c.orthogonal);
        assert_eq!(c.strongest(), "none");
        assert!(Kernel::bottom(luk(3), 1, 2).classify().is_err());
    }

    #[test]
    fn class_ladder_examples() {
        let q = luk(4);
        // normal, not strong
        let p = Kernel::new(q.clone(), 2, 2, vec![4, 1, 1, 4]).unwrap();
        let c = p.classify().unwrap();
        assert!(c.normal && !c.strong && !c.orthogonal);
        // strong, not orthogonal: extra row overlaps both columns
        let p = Kernel::new(q.clone(), 3, 2, vec![4, 0, 0, 4, 3, 3]).unwrap();
        let c = p.classify().unwrap();
        assert!(c.strong && !c.orthogonal);
        // coder, not normal (needs a top above the unit: powerset)
        let pq = PowersetQuantale::new(MonoidTable::cyclic(2).unwrap());
        let p = Kernel::new(pq, 1, 1, vec![0b11]).unwrap();
        let c = p.classify().unwrap();
        assert!(c.coder && !c.normal);
    }

    #[test]
    fn support_core_closure() {
        let q = luk(3);
        let mut p = Kernel::projective_coder(q.clone(), 4, &[0, 1, 2]).unwrap();
        p.set(3, 1, 2);
        assert_eq!(p.support().unwrap(), vec![1]);
        let core = p.core().unwrap();
        assert_eq!(core.cols(), 1);
        assert_eq!(core.column(0), vec![0, 3, 0, 2]);
        assert_eq!(core.core().unwrap(), core);
        assert!(!p.is_irreducible().unwrap());
        let ext = p.projective_extension(&[0, 1, 2, 3]).unwrap();
        assert_eq!(ext.support().unwrap(), p.support().unwrap());
        assert_eq!(ext.closure().unwrap(), ext);
        let mut p2 = Kernel::projective_coder(q.clone(), 4, &[1, 3]).unwrap();
        p2.set(3, 0, 2);
        assert!(p.equivalent_up_to_projections(&p2).unwrap());
        assert_eq!(p.closure().unwrap(), p2.closure().unwrap());
        let pi_y = Kernel::projective_coder(q.clone(), 4, &[0]).unwrap();
        let pi_z = Kernel::projective_coder(q, 4, &[1, 2]).unwrap();
        assert!(pi_y.equivalent_up_to_projections(&pi_z).unwrap());
        assert!(!pi_y.equivalent_up_to_projections(&p).unwrap());
        assert!(p.projective_extension(&[0, 1]).is_err());
    }

    #[test]
    fn exhaustive_adjunction_small() {
        let q = luk(2);
        let s = q.elements();
        let fx = FreeModule::new(q.clone(), 2).elements().unwrap();
        let mut count = 0;
        for code in 0..81u32 {
            let mut c = code;
            let k = Kernel::from_fn(q.clone(), 2, 2, |_, _| {
                let v = c % 3;
                c /= 3;
                v
            });
            let r = check_transform_laws(&k, &s, &fx, &fx);
            assert!(r.is_ok(), "{k:?}\n{r}");
            count += 1;
        }
        assert_eq!(count, 81);
    }

    #[test]
    fn inverse_equals_lattice_residual() {
        use crate::qmodule::{tabulate, tabulate_map};
        let q = luk(2);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (mx, my) = (FreeModule::new(q.clone(), 2), FreeModule::new(q.clone(), 2));
        let (lx, ex) = tabulate(&mx).unwrap();
        let (ly, ey) = tabulate(&my).unwrap();
        for _ in 0..20 {
            let k = random_kernel(&q, &q.elements(), 2, 2, &mut rng);
            let h = tabulate_map((&lx, &ex), (&ly, &ey), |a, b| a == b, |f| k.apply_direct(f)).unwrap();
            let hs = h.residual().unwrap();
            for (i, g) in ey.iter().enumerate() {
                assert_eq!(ex[hs.apply(i)], k.apply_inverse(g));
            }
        }
    }

    #[test]
    fn right_variants_differ_on_noncommutative_carrier() {
        let pq = PowersetQuantale::new(MonoidTable::left_zero_band(2).unwrap());
        let s = pq.elements();
        let mut witness = None;
        'search: for &a in &s {
            for &f in &s {
                let k = Kernel::new(pq.clone(), 1, 1, vec![a]).unwrap();
                if k.apply_direct(&[f]) != k.apply_direct_right(&[f]) {
                    witness = Some((a, f));
                    break 'search;
                }
            }
        }
        let (a, f) = witness.expect("noncommutative product separates the variants");
        let k = Kernel::new(pq.clone(), 1, 1, vec![a]).unwrap();
        assert_ne!(k.apply_direct(&[f]), k.apply_direct_right(&[f]));
        // right pair is still an adjunction
        let my = FreeModule::new(pq.clone(), 2);
        let vs = my.elements().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let k = random_kernel(&pq, &s, 2, 2, &mut rng);
            for f in &vs {
                for g in &vs {
                    assert_eq!(
                        my.leq(&k.apply_direct_right(f), g),
                        my.leq(f, &k.apply_inverse_right(g))
                    );
                }
            }
        }
    }

    #[test]
    fn commutative_right_variants_agree() {
        let q = luk(5);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let k = random_kernel(&q, &q.elements(), 3, 2, &mut rng);
        let f = vec![1, 5, 3];
        let g = vec![2, 4];
        assert_eq!(k.apply_direct(&f), k.apply_direct_right(&f));
        assert_eq!(k.apply_inverse(&g), k.apply_inverse_right(&g));
    }

    #[test]
    fn representation_round_trips() {
        let q = luk(4);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let s = q.elements();
        for _ in 0..20 {
            let k = random_kernel(&q, &s, 3, 2, &mut rng);
            let back = kernel_of_hom(q.clone(), 3, 2, |f| k.apply_direct(f));
            assert_eq!(back, k);
        }
        let id = kernel_of_hom(q.clone(), 3, 3, |f| f.to_vec());
        assert_eq!(id, Kernel::from_fn(q.clone(), 3, 3, |x, y| if x == y { 4 } else { 0 }));
        let k1 = random_kernel(&q, &s, 3, 2, &mut rng);
        let k2 = random_kernel(&q, &s, 3, 2, &mut rng);
        let joined = kernel_of_hom(q.clone(), 3, 2, |f| {
            let (a, b) = (k1.apply_direct(f), k2.apply_direct(f));
            a.iter().zip(&b).map(|(x, y)| *x.max(y)).collect()
        });
        assert_eq!(joined, Kernel::hom_join(q.clone(), 3, 2, &[k1.clone(), k2]).unwrap());
        assert_eq!(Kernel::hom_join(q.clone(), 3, 2, &[]).unwrap(), Kernel::bottom(q.clone(), 3, 2));
        assert_eq!(Kernel::hom_join(q, 3, 2, &[k1.clone(), k1.clone()]).unwrap(), k1);
    }

    #[test]
    fn hom_scalar_matches_scalar_on_outputs() {
        let q = luk(6);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let k = random_kernel(&q, &q.elements(), 3, 3, &mut rng);
        let my = FreeModule::new(q.clone(), 3);
        let f = vec![6, 2, 4];
        assert_eq!(k.hom_scalar(&3).apply_direct(&f), my.act(&3, &k.apply_direct(&f)));
    }

    #[test]
    fn copairing_is_join_of_components() {
        let q = luk(4);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let s = q.elements();
        let k1 = random_kernel(&q, &s, 2, 3, &mut rng);
        let k2 = random_kernel(&q, &s, 1, 3, &mut rng);
        let k = Kernel::copair(&[k1.clone(), k2.clone()]).unwrap();
        let my = FreeModule::new(q, 3);
        for _ in 0..20 {
            let a: Vec<u32> = (0..2).map(|_| rng.gen_range(0..=4)).collect();
            let b: Vec<u32> = vec![rng.gen_range(0..=4)];
            let joint: Vec<u32> = a.iter().chain(&b).copied().collect();
            assert_eq!(k.apply_direct(&joint), my.join(&k1.apply_direct(&a), &k2.apply_direct(&b)));
        }
    }

    #[test]
    fn strong_kernels_invert_exactly() {
        let q = luk(10);
        let s = q.elements();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let my = FreeModule::new(q.clone(), 4);
        for _ in 0..50 {
            let k = random_strong_kernel(&q, &s, 8, 4, &mut rng).unwrap();
            assert!(k.classify().unwrap().strong);
            let g = my.random_vector(&s, &mut rng);
            assert_eq!(k.apply_direct(&k.apply_inverse(&g)), g);
        }
    }

    #[test]
    fn lifting_identity_and_nucleus_quotient() {
        use crate::qmodule::NucleusModule;
        let q = luk(3);
        let free = FreeModule::new(q.clone(), 2);
        let pres = Presentation { target: &free, images: vec![free.basis(0), free.basis(1)] };
        let h = |m: &Vec<u32>| vec![m[1], m[0].min(m[1])];
        let k = lift_through_projection::<_, FreeModule<_>, _>(&q, 2, h, |a| a.to_vec(), &pres).unwrap();
        assert_eq!(k, kernel_of_hom(q.clone(), 2, 2, |f| h(&f.to_vec())));

        let gamma = |x: &Vec<u32>| {
            let j = x[0].max(x[1]);
            vec![j, j]
        };
        let mg = NucleusModule::new(free.clone(), gamma);
        let pres = Presentation { target: &mg, images: vec![gamma(&free.basis(0)), gamma(&free.basis(1))] };
        let k = lift_through_projection::<_, FreeModule<ChainQuantale>, _>(
            &q,
            2,
            |m: &Vec<u32>| m.clone(),
            |a| gamma(&a.to_vec()),
            &pres,
        )
        .unwrap();
        for f in free.elements().unwrap() {
            assert_eq!(gamma(&f), pres.apply(&k.apply_direct(&f)));
        }

        let bad = Presentation { target: &free, images: vec![free.basis(0), free.basis(0)] };
        assert!(matches!(
            lift_through_projection::<_, FreeModule<_>, _>(&q, 2, h, |a| a.to_vec(), &bad),
            Err(Error::NoLift(_))
        ));
    }

    #[test]
    fn kernel_text_roundtrip() {
        let k = Kernel::new(luk(4), 2, 3, vec![0, 1, 2, 3, 4, 0]).unwrap();
        let t = kernel_to_text(&k);
        assert!(t.starts_with("carrier=lukasiewicz d=4 rows=2 cols=3"));
        assert_eq!(kernel_from_text(&t).unwrap(), k);
        assert!(kernel_from_text("carrier=lukasiewicz d=4 rows=1 cols=1\n5\n").is_err());
    }
}
