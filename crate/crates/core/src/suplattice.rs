//! Finite lattices given by order tables, residuated maps between them,
//! closure and interior operators, and the correspondence between closure
//! operators and meet-closed subsets.
//!
//! Elements are indices `0..len`. Joins and meets are computed once at
//! construction by scanning the order table.

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct FiniteLattice {
    n: usize,
    order: Vec<bool>,
    joins: Vec<usize>,
    meets: Vec<usize>,
    bottom: usize,
    top: usize,
}

impl fmt::Debug for FiniteLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteLattice({} elements)", self.n)
    }
}

impl FiniteLattice {
    /// Builds a lattice from an order relation, checking that it is a
    /// partial order with a bottom element and all binary joins. In the
    /// finite case that makes every subset have a join.
    pub fn from_leq(n: usize, leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidLattice("empty carrier".into()));
        }
        let mut order = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                order[a * n + b] = leq(a, b);
            }
        }
        let le = |a: usize, b: usize| order[a * n + b];
        for a in 0..n {
            if !le(a, a) {
                return Err(Error::InvalidLattice(format!("not reflexive at {a}")));
            }
            for b in 0..n {
                if a != b && le(a, b) && le(b, a) {
                    return Err(Error::InvalidLattice(format!("not antisymmetric at ({a}, {b})")));
                }
                for c in 0..n {
                    if le(a, b) && le(b, c) && !le(a, c) {
                        return Err(Error::InvalidLattice(format!("not transitive at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        let bottom = (0..n)
            .find(|&b| (0..n).all(|x| le(b, x)))
            .ok_or_else(|| Error::InvalidLattice("no bottom element".into()))?;
        let top = (0..n)
            .find(|&t| (0..n).all(|x| le(x, t)))
            .ok_or_else(|| Error::InvalidLattice("no top element".into()))?;
        let mut joins = vec![0; n * n];
        let mut meets = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let ubs: Vec<usize> = (0..n).filter(|&u| le(a, u) && le(b, u)).collect();
                let j = ubs
                    .iter()
                    .copied()
                    .find(|&u| ubs.iter().all(|&v| le(u, v)))
                    .ok_or_else(|| Error::InvalidLattice(format!("no join for ({a}, {b})")))?;
                let lbs: Vec<usize> = (0..n).filter(|&l| le(l, a) && le(l, b)).collect();
                let m = lbs
                    .iter()
                    .copied()
                    .find(|&l| lbs.iter().all(|&v| le(v, l)))
                    .ok_or_else(|| Error::InvalidLattice(format!("no meet for ({a}, {b})")))?;
                joins[a * n + b] = j;
                meets[a * n + b] = m;
            }
        }
        Ok(Self { n, order, joins, meets, bottom, top })
    }

    /// The chain `0 < 1 < ... < len-1`.
    pub fn chain(len: usize) -> Self {
        Self::from_leq(len.max(1), |a, b| a <= b).expect("chains are lattices")
    }

    /// The powerset of `atoms` points; element `i` is the bitmask `i`.
    pub fn boolean(atoms: u32) -> Self {
        Self::from_leq(1 << atoms, |a, b| a & !b == 0).expect("powersets are lattices")
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.order[a * self.n + b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.joins[a * self.n + b]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meets[a * self.n + b]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn join_all<I: IntoIterator<Item = usize>>(&self, xs: I) -> usize {
        xs.into_iter().fold(self.bottom, |a, b| self.join(a, b))
    }

    pub fn meet_all<I: IntoIterator<Item = usize>>(&self, xs: I) -> usize {
        xs.into_iter().fold(self.top, |a, b| self.meet(a, b))
    }

    /// Elements that are not the join of strictly smaller elements.
    pub fn join_irreducibles(&self) -> Vec<usize> {
        self.elements()
            .filter(|&x| {
                let below = self.join_all(self.elements().filter(|&y| y != x && self.leq(y, x)));
                below != x
            })
            .collect()
    }
}

/// A total map between two finite lattices, stored as a value table.
#[derive(Clone, PartialEq, Eq)]
pub struct TabulatedMap {
    domain: Arc<FiniteLattice>,
    codomain: Arc<FiniteLattice>,
    values: Vec<usize>,
}

impl fmt::Debug for TabulatedMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TabulatedMap{:?}", self.values)
    }
}

impl TabulatedMap {
    pub fn new(domain: Arc<FiniteLattice>, codomain: Arc<FiniteLattice>, values: Vec<usize>) -> Result<Self> {
        if values.len() != domain.len() {
            return Err(Error::DimensionMismatch { expected: domain.len(), got: values.len() });
        }
        if let Some(v) = values.iter().find(|&&v| v >= codomain.len()) {
            return Err(Error::OutOfRange(format!("value {v} outside codomain of size {}", codomain.len())));
        }
        Ok(Self { domain, codomain, values })
    }

    pub fn from_fn(
        domain: Arc<FiniteLattice>,
        codomain: Arc<FiniteLattice>,
        f: impl Fn(usize) -> usize,
    ) -> Result<Self> {
        let values = domain.elements().map(f).collect();
        Self::new(domain, codomain, values)
    }

    pub fn identity(lattice: Arc<FiniteLattice>) -> Self {
        let values = lattice.elements().collect();
        Self { domain: lattice.clone(), codomain: lattice, values }
    }

    pub fn domain(&self) -> &Arc<FiniteLattice> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<FiniteLattice> {
        &self.codomain
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn apply(&self, x: usize) -> usize {
        self.values[x]
    }

    pub fn is_monotone(&self) -> bool {
        let d = &self.domain;
        d.elements().all(|a| {
            d.elements()
                .all(|b| !d.leq(a, b) || self.codomain.leq(self.apply(a), self.apply(b)))
        })
    }

    /// A family whose join is not preserved, if any. The empty family stands
    /// for `f(⊥) ≠ ⊥`; otherwise a pair is returned.
    pub fn join_preservation_witness(&self) -> Option<Vec<usize>> {
        let (d, c) = (&self.domain, &self.codomain);
        if self.apply(d.bottom()) != c.bottom() {
            return Some(Vec::new());
        }
        for a in d.elements() {
            for b in d.elements() {
                if self.apply(d.join(a, b)) != c.join(self.apply(a), self.apply(b)) {
                    return Some(vec![a, b]);
                }
            }
        }
        None
    }

    pub fn preserves_joins(&self) -> bool {
        self.join_preservation_witness().is_none()
    }

    /// The residual `f_*(y) = ⋁{x | f(x) ≤ y}` of a join-preserving map.
    pub fn residual(&self) -> Result<TabulatedMap> {
        if let Some(witness) = self.join_preservation_witness() {
            return Err(Error::NotResiduated { witness });
        }
        let d = &self.domain;
        let values = self
            .codomain
            .elements()
            .map(|y| d.join_all(d.elements().filter(|&x| self.codomain.leq(self.apply(x), y))))
            .collect();
        Ok(TabulatedMap {
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
            values,
        })
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &TabulatedMap) -> Result<TabulatedMap> {
        if *self.codomain != *other.domain {
            return Err(Error::CarrierMismatch("composition of maps with unequal middle lattices".into()));
        }
        let values = self.values.iter().map(|&v| other.apply(v)).collect();
        Ok(TabulatedMap {
            domain: self.domain.clone(),
            codomain: other.codomain.clone(),
            values,
        })
    }

    pub fn is_identity(&self) -> bool {
        *self.domain == *self.codomain && self.values.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// Pointwise order; `false` if signatures differ.
    pub fn leq(&self, other: &TabulatedMap) -> bool {
        *self.domain == *other.domain
            && *self.codomain == *other.codomain
            && self
                .values
                .iter()
                .zip(&other.values)
                .all(|(&a, &b)| self.codomain.leq(a, b))
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.codomain.len()];
        for &v in &self.values {
            hit[v] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.codomain.len()];
        for &v in &self.values {
            if seen[v] {
                return false;
            }
            seen[v] = true;
        }
        true
    }
}

/// First pair `(x, y)` where `f(x) ≤ y ⟺ x ≤ g(y)` fails, if any.
pub fn adjunction_witness(f: &TabulatedMap, g: &TabulatedMap) -> Option<(usize, usize)> {
    if *f.domain != *g.codomain || *f.codomain != *g.domain {
        return Some((usize::MAX, usize::MAX));
    }
    let (d, c) = (&f.domain, &f.codomain);
    for x in d.elements() {
        for y in c.elements() {
            if c.leq(f.apply(x), y) != d.leq(x, g.apply(y)) {
                return Some((x, y));
            }
        }
    }
    None
}

/// Residual of a join-preserving map.
pub fn residual_of(f: &TabulatedMap) -> Result<TabulatedMap> {
    f.residual()
}

/// A monotone, extensive, idempotent self-map together with its image.
#[derive(Clone, PartialEq, Eq)]
pub struct ClosureOperator {
    lattice: Arc<FiniteLattice>,
    values: Vec<usize>,
    image: Vec<usize>,
}

impl fmt::Debug for ClosureOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ClosureOperator{:?}", self.values)
    }
}

fn self_map_defect(l: &FiniteLattice, values: &[usize], extensive: bool) -> Option<String> {
    if values.len() != l.len() {
        return Some(format!("table has {} entries for {} elements", values.len(), l.len()));
    }
    if values.iter().any(|&v| v >= l.len()) {
        return Some("value out of range".into());
    }
    for x in l.elements() {
        let ok = if extensive { l.leq(x, values[x]) } else { l.leq(values[x], x) };
        if !ok {
            let what = if extensive { "extensive" } else { "deflationary" };
            return Some(format!("not {what} at {x}"));
        }
        if values[values[x]] != values[x] {
            return Some(format!("not idempotent at {x}"));
        }
        for y in l.elements() {
            if l.leq(x, y) && !l.leq(values[x], values[y]) {
                return Some(format!("not monotone at ({x}, {y})"));
            }
        }
    }
    None
}

fn fixed_points(values: &[usize]) -> Vec<usize> {
    values.iter().enumerate().filter(|(i, &v)| *i == v).map(|(i, _)| i).collect()
}

impl ClosureOperator {
    pub fn new(lattice: Arc<FiniteLattice>, values: Vec<usize>) -> Result<Self> {
        if let Some(why) = self_map_defect(&lattice, &values, true) {
            return Err(Error::NotClosure(why));
        }
        let image = fixed_points(&values);
        Ok(Self { lattice, values, image })
    }

    pub fn identity(lattice: Arc<FiniteLattice>) -> Self {
        let values: Vec<usize> = lattice.elements().collect();
        let image = values.clone();
        Self { lattice, values, image }
    }

    pub fn lattice(&self) -> &Arc<FiniteLattice> {
        &self.lattice
    }

    pub fn apply(&self, x: usize) -> usize {
        self.values[x]
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    /// The closed elements, ascending by index.
    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn as_map(&self) -> TabulatedMap {
        TabulatedMap {
            domain: self.lattice.clone(),
            codomain: self.lattice.clone(),
            values: self.values.clone(),
        }
    }

    /// Pointwise order.
    pub fn leq(&self, other: &ClosureOperator) -> bool {
        self.values
            .iter()
            .zip(&other.values)
            .all(|(&a, &b)| self.lattice.leq(a, b))
    }
}

/// A monotone, deflationary, idempotent self-map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InteriorOperator {
    values: Vec<usize>,
}

impl InteriorOperator {
    pub fn new(lattice: &FiniteLattice, values: Vec<usize>) -> Result<Self> {
        if let Some(why) = self_map_defect(lattice, &values, false) {
            return Err(Error::NotClosure(format!("interior: {why}")));
        }
        Ok(Self { values })
    }

    pub fn apply(&self, x: usize) -> usize {
        self.values[x]
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }
}

/// `f_* ∘ f` for an adjoint pair `(f, f_*)`.
pub fn closure_from_pair(f: &TabulatedMap, f_star: &TabulatedMap) -> Result<ClosureOperator> {
    if let Some((x, y)) = adjunction_witness(f, f_star) {
        return Err(Error::NotAdjoint { x, y });
    }
    let comp = f.then(f_star)?;
    ClosureOperator::new(f.domain.clone(), comp.values)
}

/// `f ∘ f_*` for an adjoint pair `(f, f_*)`, an interior operator on the codomain of `f`.
pub fn interior_from_pair(f: &TabulatedMap, f_star: &TabulatedMap) -> Result<InteriorOperator> {
    if let Some((x, y)) = adjunction_witness(f, f_star) {
        return Err(Error::NotAdjoint { x, y });
    }
    let comp = f_star.then(f)?;
    InteriorOperator::new(&f.codomain, comp.values)
}

/// A subfamily of `subset` whose meet falls outside it, if any.
/// The empty family means the top element is missing.
pub fn meet_closure_witness(l: &FiniteLattice, subset: &[usize]) -> Option<Vec<usize>> {
    if !subset.contains(&l.top()) {
        return Some(Vec::new());
    }
    for &a in subset {
        for &b in subset {
            if !subset.contains(&l.meet(a, b)) {
                return Some(vec![a, b]);
            }
        }
    }
    None
}

fn normalize(l: &FiniteLattice, subset: &[usize]) -> Result<Vec<usize>> {
    let mut s = subset.to_vec();
    s.sort_unstable();
    s.dedup();
    if let Some(bad) = s.iter().find(|&&x| x >= l.len()) {
        return Err(Error::OutOfRange(format!("element {bad} not in lattice")));
    }
    Ok(s)
}

/// `γ_S(x) = ⋀{y ∈ S | x ≤ y}` for a meet-closed `S`.
pub fn gamma_from_meet_closed(lattice: Arc<FiniteLattice>, subset: &[usize]) -> Result<ClosureOperator> {
    let s = normalize(&lattice, subset)?;
    if let Some(witness) = meet_closure_witness(&lattice, &s) {
        return Err(Error::NotMeetClosed { witness });
    }
    let values = lattice
        .elements()
        .map(|x| lattice.meet_all(s.iter().copied().filter(|&y| lattice.leq(x, y))))
        .collect();
    ClosureOperator::new(lattice, values)
}

pub fn image_of_closure(gamma: &ClosureOperator) -> Vec<usize> {
    gamma.image.clone()
}

/// The reflection `ρ_S: L → S` onto a meet-closed subset, with `S` carrying
/// the induced order (whose join is `γ_S ∘ ∨`).
#[derive(Debug, Clone)]
pub struct Reflection {
    /// Lattice elements making up `S`, ascending; position `i` is element `i` of the sublattice.
    pub members: Vec<usize>,
    pub sublattice: Arc<FiniteLattice>,
    pub map: TabulatedMap,
}

pub fn reflection(lattice: Arc<FiniteLattice>, subset: &[usize]) -> Result<Reflection> {
    let gamma = gamma_from_meet_closed(lattice.clone(), subset)?;
    let members = gamma.image().to_vec();
    let sub = Arc::new(FiniteLattice::from_leq(members.len(), |a, b| {
        lattice.leq(members[a], members[b])
    })?);
    let values = lattice
        .elements()
        .map(|x| members.binary_search(&gamma.apply(x)).expect("closure lands in S"))
        .collect();
    let map = TabulatedMap::new(lattice, sub.clone(), values)?;
    Ok(Reflection { members, sublattice: sub, map })
}

/// Every subset closed under meets (including the empty meet `⊤`).
/// Brute force over all subsets; intended for lattices with at most 20 elements.
pub fn enumerate_meet_closed_subsets(l: &FiniteLattice) -> Result<Vec<Vec<usize>>> {
    if l.len() > 20 {
        return Err(Error::NotEnumerable(format!("{} elements", l.len())));
    }
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << l.len()) {
        let s: Vec<usize> = l.elements().filter(|&i| mask >> i & 1 == 1).collect();
        if meet_closure_witness(l, &s).is_none() {
            out.push(s);
        }
    }
    Ok(out)
}

/// Every closure operator, found by backtracking over extensive monotone
/// tables and keeping the idempotent ones. Independent of meet-closed sets.
pub fn enumerate_closure_operators(lattice: Arc<FiniteLattice>) -> Result<Vec<ClosureOperator>> {
    let n = lattice.len();
    if n > 16 {
        return Err(Error::NotEnumerable(format!("{n} elements")));
    }
    let mut out = Vec::new();
    let mut table = vec![usize::MAX; n];
    fn go(
        l: &Arc<FiniteLattice>,
        i: usize,
        table: &mut Vec<usize>,
        out: &mut Vec<ClosureOperator>,
    ) {
        let n = l.len();
        if i == n {
            if (0..n).all(|x| table[table[x]] == table[x]) {
                out.push(ClosureOperator::new(l.clone(), table.clone()).expect("checked"));
            }
            return;
        }
        for v in l.elements().filter(|&v| l.leq(i, v)) {
            let consistent = (0..i).all(|j| {
                (!l.leq(j, i) || l.leq(table[j], v)) && (!l.leq(i, j) || l.leq(v, table[j]))
            });
            if consistent {
                table[i] = v;
                go(l, i + 1, table, out);
            }
        }
        table[i] = usize::MAX;
    }
    go(&lattice, 0, &mut table, &mut out);
    Ok(out)
}

/// All join-preserving maps, by filtering every table. Refuses when there
/// are more than a million tables to scan.
pub fn enumerate_join_preserving_maps(
    domain: Arc<FiniteLattice>,
    codomain: Arc<FiniteLattice>,
) -> Result<Vec<TabulatedMap>> {
    let (m, k) = (domain.len(), codomain.len());
    let total = (k as f64).powi(m as i32);
    if total > 1e6 {
        return Err(Error::NotEnumerable(format!("{k}^{m} tables")));
    }
    let mut out = Vec::new();
    let mut digits = vec![0usize; m];
    loop {
        let f = TabulatedMap {
            domain: domain.clone(),
            codomain: codomain.clone(),
            values: digits.clone(),
        };
        if f.preserves_joins() {
            out.push(f);
        }
        // odometer
        let mut i = 0;
        loop {
            if i == m {
                return Ok(out);
            }
            digits[i] += 1;
            if digits[i] < k {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// Canonical extension `f(x) = ⋁{g(j) | j join-irreducible, j ≤ x}` of an
/// assignment on the join-irreducibles (listed as in [`FiniteLattice::join_irreducibles`]).
pub fn extend_from_join_irreducibles(
    domain: Arc<FiniteLattice>,
    codomain: Arc<FiniteLattice>,
    on_irreducibles: &[usize],
) -> Result<TabulatedMap> {
    let ji = domain.join_irreducibles();
    if ji.len() != on_irreducibles.len() {
        return Err(Error::DimensionMismatch { expected: ji.len(), got: on_irreducibles.len() });
    }
    let values = domain
        .elements()
        .map(|x| {
            codomain.join_all(
                ji.iter()
                    .zip(on_irreducibles)
                    .filter(|(&j, _)| domain.leq(j, x))
                    .map(|(_, &v)| v),
            )
        })
        .collect();
    TabulatedMap::new(domain, codomain, values)
}

/// A random join-preserving map: a random monotone assignment on the
/// join-irreducibles, repaired by the canonical extension. On lattices where
/// the extension is not join-preserving the draw is retried.
pub fn random_join_preserving<R: Rng>(
    domain: Arc<FiniteLattice>,
    codomain: Arc<FiniteLattice>,
    rng: &mut R,
) -> TabulatedMap {
    let ji = domain.join_irreducibles();
    loop {
        let mut vals: Vec<usize> = Vec::with_capacity(ji.len());
        for (idx, &j) in ji.iter().enumerate() {
            // keep monotone on the irreducibles: at least the join of values below
            let floor = codomain.join_all(
                ji[..idx]
                    .iter()
                    .zip(&vals)
                    .filter(|(&i, _)| domain.leq(i, j))
                    .map(|(_, &v)| v),
            );
            let choices: Vec<usize> = codomain.elements().filter(|&c| codomain.leq(floor, c)).collect();
            vals.push(choices[rng.gen_range(0..choices.len())]);
        }
        let f = extend_from_join_irreducibles(domain.clone(), codomain.clone(), &vals)
            .expect("lengths agree");
        if f.preserves_joins() {
            return f;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> Arc<FiniteLattice> {
        Arc::new(FiniteLattice::chain(n))
    }

    #[test]
    fn rejects_non_lattices() {
        // two incomparable maximal elements
        let r = FiniteLattice::from_leq(3, |a, b| a == b || a == 0);
        assert!(r.is_err());
        assert!(FiniteLattice::from_leq(2, |a, b| a != b || a == 0).is_err());
    }

    #[test]
    fn boolean_joins_are_unions() {
        let b = FiniteLattice::boolean(3);
        assert_eq!(b.join(0b001, 0b100), 0b101);
        assert_eq!(b.meet(0b011, 0b110), 0b010);
        assert_eq!(b.join_irreducibles(), vec![1, 2, 4]);
    }

    #[test]
    fn residual_of_identity_is_identity() {
        let l = chain(4);
        let id = TabulatedMap::identity(l);
        assert!(residual_of(&id).unwrap().is_identity());
    }

    #[test]
    fn residual_of_bottom_map_is_top_map() {
        let l = chain(4);
        let f = TabulatedMap::from_fn(l.clone(), l, |_| 0).unwrap();
        assert_eq!(residual_of(&f).unwrap().values(), &[3, 3, 3, 3]);
    }

    #[test]
    fn residual_of_meet_with_constant() {
        let l = chain(4);
        let a = 2;
        let f = TabulatedMap::from_fn(l.clone(), l.clone(), |x| x.min(a)).unwrap();
        let g = residual_of(&f).unwrap();
        for y in l.elements() {
            let expected = if y >= a { 3 } else { y };
            assert_eq!(g.apply(y), expected);
        }
        let gamma = closure_from_pair(&f, &g).unwrap();
        assert_eq!(gamma.values(), &[0, 1, 3, 3]);
        let delta = interior_from_pair(&f, &g).unwrap();
        for x in l.elements() {
            assert_eq!(delta.apply(delta.apply(x)), delta.apply(x));
            assert!(delta.apply(x) <= x);
        }
    }

    #[test]
    fn non_join_preserving_map_is_rejected() {
        let l = chain(3);
        let f = TabulatedMap::from_fn(l.clone(), l, |x| if x == 0 { 1 } else { 2 }).unwrap();
        assert!(matches!(residual_of(&f), Err(Error::NotResiduated { witness }) if witness.is_empty()));
        let b = Arc::new(FiniteLattice::boolean(2));
        // monotone but merges atoms: f(a)=f(b)=a, f(top)=top
        let g = TabulatedMap::new(b.clone(), b, vec![0, 1, 1, 3]).unwrap();
        assert!(matches!(residual_of(&g), Err(Error::NotResiduated { witness }) if witness.len() == 2));
    }

    #[test]
    fn non_adjoint_pair_rejected() {
        let l = chain(3);
        let id = TabulatedMap::identity(l.clone());
        let top = TabulatedMap::from_fn(l.clone(), l, |_| 2).unwrap();
        assert!(matches!(closure_from_pair(&id, &top), Err(Error::NotAdjoint { .. })));
    }

    #[test]
    fn gamma_examples() {
        let l = chain(3);
        let g = gamma_from_meet_closed(l.clone(), &[0, 2]).unwrap();
        assert_eq!(g.values(), &[0, 2, 2]);
        let all = gamma_from_meet_closed(l.clone(), &[0, 1, 2]).unwrap();
        assert_eq!(all, ClosureOperator::identity(l.clone()));
        let top = gamma_from_meet_closed(l.clone(), &[2]).unwrap();
        assert_eq!(top.values(), &[2, 2, 2]);
        let b = Arc::new(FiniteLattice::boolean(2));
        assert!(matches!(
            gamma_from_meet_closed(b, &[1, 2, 3]),
            Err(Error::NotMeetClosed { witness }) if witness.len() == 2
        ));
        assert!(matches!(gamma_from_meet_closed(l, &[0]), Err(Error::NotMeetClosed { witness }) if witness.is_empty()));
    }

    #[test]
    fn reflection_onto_bottom_and_top() {
        let l = chain(4);
        let r = reflection(l.clone(), &[0, 3]).unwrap();
        assert_eq!(r.members, vec![0, 3]);
        assert_eq!(r.map.values(), &[0, 1, 1, 1]);
        assert!(r.map.is_surjective());
        assert!(r.map.preserves_joins());
    }

    #[test]
    fn closure_enumeration_counts() {
        // closure systems on a 3-set: 61
        let b = Arc::new(FiniteLattice::boolean(3));
        assert_eq!(enumerate_closure_operators(b.clone()).unwrap().len(), 61);
        assert_eq!(enumerate_meet_closed_subsets(&b).unwrap().len(), 61);
        // chain of n elements: any subset containing top
        let c = chain(5);
        assert_eq!(enumerate_closure_operators(c.clone()).unwrap().len(), 16);
        assert_eq!(enumerate_meet_closed_subsets(&c).unwrap().len(), 16);
    }

    #[test]
    fn join_preserving_enumeration_on_small_chains() {
        // monotone maps fixing bottom from chain(3) to chain(3): f(1) <= f(2)
        let c = chain(3);
        let maps = enumerate_join_preserving_maps(c.clone(), c).unwrap();
        assert_eq!(maps.len(), 6);
    }
}
