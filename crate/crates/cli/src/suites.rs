//! The law suites behind `qkit laws`.

use std::str::FromStr;

use anyhow::{bail, Result};
use qkit::fuzzy::luk_kernel;
use qkit::morphology::{check_morphology_laws, Grid, GridMode, Image, StructuringElement};
use qkit::qmodule::{check_module_laws, check_module_laws_exhaustive, random_samples, EnumerableModule, FreeModule};
use qkit::quantale::{check_quantale_laws, check_residual_oracle};
use qkit::transform::{check_transform_laws, random_kernel, random_strong_kernel};
use qkit::{
    ChainQuantale, ChainTnorm, FiniteQuantale, FloatUnitQuantale, LawReport, MonoidTable, PowersetQuantale,
    SampledUnitQuantale, UnitTnorm,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::carrier::CarrierChoice;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Quantale,
    Module,
    Transform,
    Morphology,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Quantale, Suite::Module, Suite::Transform, Suite::Morphology];

    pub fn name(self) -> &'static str {
        match self {
            Self::Quantale => "quantale",
            Self::Module => "module",
            Self::Transform => "transform",
            Self::Morphology => "morphology",
        }
    }
}

impl FromStr for Suite {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| anyhow::anyhow!("unknown suite {s:?}"))
    }
}

#[derive(Debug, Clone)]
pub struct LawsOptions {
    pub suites: Vec<Suite>,
    /// `None` runs the default family of carriers.
    pub carrier: Option<CarrierChoice>,
    pub seed: u64,
    /// Random samples per randomized family.
    pub samples: usize,
    /// An extra monoid whose powerset joins the quantale suite.
    pub monoid: Option<MonoidTable>,
}

impl Default for LawsOptions {
    fn default() -> Self {
        Self { suites: Suite::ALL.to_vec(), carrier: None, seed: 0, samples: 2000, monoid: None }
    }
}

/// One titled report, e.g. a single carrier within a suite.
#[derive(Debug, Clone)]
pub struct Section {
    pub suite: Suite,
    pub title: String,
    pub report: LawReport,
}

pub fn run(opts: &LawsOptions) -> Result<Vec<Section>> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for &suite in &opts.suites {
        let sections = match suite {
            Suite::Quantale => quantale_suite(opts)?,
            Suite::Module => module_suite(opts, &mut rng)?,
            Suite::Transform => transform_suite(opts, &mut rng)?,
            Suite::Morphology => morphology_suite(opts, &mut rng)?,
        };
        out.extend(sections.into_iter().map(|(title, report)| Section { suite, title, report }));
    }
    Ok(out)
}

pub fn all_pass(sections: &[Section]) -> bool {
    sections.iter().all(|s| s.report.is_ok())
}

fn chains(opts: &LawsOptions) -> Vec<ChainQuantale> {
    let ds: Vec<u32> = match opts.carrier {
        Some(CarrierChoice::Chain(d)) => vec![d],
        _ => vec![2, 3, 4, 5, 10],
    };
    let mut v = Vec::new();
    for d in ds {
        for t in [ChainTnorm::Lukasiewicz, ChainTnorm::Godel] {
            v.push(ChainQuantale::new(d, t).expect("positive denominator"));
        }
    }
    v
}

fn floats() -> Vec<SampledUnitQuantale<f64>> {
    [UnitTnorm::Lukasiewicz, UnitTnorm::Godel]
        .into_iter()
        .map(|t| SampledUnitQuantale::new(FloatUnitQuantale::new(t), 10).expect("nonzero steps"))
        .collect()
}

fn quantale_pair<Q: FiniteQuantale>(q: &Q) -> (String, LawReport) {
    let mut r = check_quantale_laws(q);
    r.merge(check_residual_oracle(q));
    (q.describe(), r)
}

fn quantale_suite(opts: &LawsOptions) -> Result<Vec<(String, LawReport)>> {
    let mut out = Vec::new();
    match opts.carrier {
        Some(CarrierChoice::Float) => out.extend(floats().iter().map(quantale_pair)),
        _ => out.extend(chains(opts).iter().map(quantale_pair)),
    }
    if opts.carrier.is_none() {
        for m in [MonoidTable::cyclic(3)?, MonoidTable::left_zero_band(2)?, MonoidTable::symmetric_group(3)?] {
            out.push(quantale_pair(&PowersetQuantale::new(m)));
        }
    }
    if let Some(m) = &opts.monoid {
        let (title, mut rep) = quantale_pair(&PowersetQuantale::new(m.clone()));
        for d in m.defects() {
            rep.check("monoid table: associative with unit 0", false, || d.clone());
        }
        out.push((format!("{title} (from file)"), rep));
    }
    Ok(out)
}

fn module_pair<Q: FiniteQuantale + Clone>(q: &Q, dim: usize, exhaustive: bool, samples: usize, rng: &mut ChaCha8Rng) -> Result<(String, LawReport)> {
    let m = FreeModule::new(q.clone(), dim);
    if exhaustive {
        let vs = m.elements()?;
        let title = format!("{}^{dim}, all {} vectors", q.describe(), vs.len());
        Ok((title, check_module_laws_exhaustive(&m, &q.elements(), &vs)))
    } else {
        let s = random_samples(&m, samples, rng);
        Ok((format!("{}^{dim}, {samples} random samples", q.describe()), check_module_laws(&m, &s)))
    }
}

fn module_suite(opts: &LawsOptions, rng: &mut ChaCha8Rng) -> Result<Vec<(String, LawReport)>> {
    let mut out = Vec::new();
    match opts.carrier {
        Some(CarrierChoice::Float) => {
            for q in floats() {
                out.push(module_pair(&q, 8, false, opts.samples, rng)?);
            }
        }
        Some(CarrierChoice::Chain(d)) => {
            for t in [ChainTnorm::Lukasiewicz, ChainTnorm::Godel] {
                let q = ChainQuantale::new(d, t)?;
                // exhaustive while the cube of the vector count stays small
                let exhaustive = (d as u64 + 1).pow(2) <= 16;
                out.push(module_pair(&q, 2, exhaustive, opts.samples, rng)?);
                out.push(module_pair(&q, 16, false, opts.samples, rng)?);
            }
        }
        None => {
            for t in [ChainTnorm::Lukasiewicz, ChainTnorm::Godel] {
                out.push(module_pair(&ChainQuantale::new(3, t)?, 2, true, 0, rng)?);
                out.push(module_pair(&ChainQuantale::new(10, t)?, 16, false, opts.samples, rng)?);
            }
            let s3 = PowersetQuantale::new(MonoidTable::symmetric_group(3)?);
            out.push(module_pair(&s3, 3, false, opts.samples, rng)?);
        }
    }
    Ok(out)
}

fn random_vectors<Q: FiniteQuantale>(q: &Q, dim: usize, count: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<Q::Elem>> {
    let el = q.elements();
    (0..count).map(|_| (0..dim).map(|_| el[rng.gen_range(0..el.len())].clone()).collect()).collect()
}

fn transform_family<Q: FiniteQuantale + Clone>(q: &Q, kernels: usize, rng: &mut ChaCha8Rng) -> Result<Vec<(String, LawReport)>> {
    let el = q.elements();
    let (rows, cols) = (8, 4);
    let mut weak = LawReport::new();
    for _ in 0..kernels {
        let k = random_kernel(q, &el, rows, cols, rng);
        let fs = random_vectors(q, rows, 6, rng);
        let gs = random_vectors(q, cols, 6, rng);
        weak.merge(check_transform_laws(&k, &el, &fs, &gs));
    }
    let mut out = vec![(format!("{}: {kernels} random {rows}x{cols} kernels", q.describe()), weak)];
    let mut strong = LawReport::new();
    for i in 0..kernels.min(10) {
        let k = random_strong_kernel(q, &el, rows, cols, rng)?;
        let gs = random_vectors(q, cols, 20, rng);
        let ok = gs.iter().all(|g| {
            let back = k.apply_direct(&k.apply_inverse(g));
            back.iter().zip(g).all(|(a, b)| q.same(a, b))
        });
        strong.check(&format!("strong kernel #{i}: H Λ = id"), ok, || format!("{k:?}"));
    }
    out.push((format!("{}: strong kernels", q.describe()), strong));
    Ok(out)
}

fn transform_suite(opts: &LawsOptions, rng: &mut ChaCha8Rng) -> Result<Vec<(String, LawReport)>> {
    let kernels = (opts.samples / 20).max(1);
    let mut out = Vec::new();
    match opts.carrier {
        Some(CarrierChoice::Float) => {
            for q in floats() {
                out.extend(transform_family(&q, kernels, rng)?);
            }
        }
        _ => {
            let d = match opts.carrier {
                Some(CarrierChoice::Chain(d)) => d,
                _ => 10,
            };
            out.extend(transform_family(&ChainQuantale::lukasiewicz(d)?, kernels, rng)?);
            out.extend(transform_family(&ChainQuantale::godel(d)?, kernels, rng)?);
        }
    }
    let mut luk = LawReport::new();
    for n in [2usize, 3, 5] {
        for m in [1usize, 2, 4] {
            let l = m * (n - 1) + 1;
            let k = luk_kernel(n, l)?;
            let class = k.classify()?;
            luk.check("Łukasiewicz kernel: orthonormal on aligned grids", class.orthonormal, || format!("n={n} l={l}: {class:?}"));
        }
    }
    out.push(("Łukasiewicz partitions".into(), luk));
    Ok(out)
}

fn morph_family<Q: FiniteQuantale + Clone>(q: &Q, grid: Grid, count: usize, rng: &mut ChaCha8Rng) -> (String, LawReport) {
    let el = q.elements();
    let pick = |rng: &mut ChaCha8Rng| el[rng.gen_range(0..el.len())].clone();
    let imgs: Vec<_> = (0..count).map(|_| Image::from_fn(grid, |_| pick(rng))).collect();
    let mut support = vec![((0, 0), q.unit())];
    for _ in 0..3 {
        support.push(((rng.gen_range(-2..=2), rng.gen_range(-2..=2)), pick(rng)));
    }
    let se = StructuringElement::new(support);
    let rep = check_morphology_laws(q, &imgs, &se, &[(1, 0), (0, 1), (-2, 3)]);
    let mode = match grid.mode {
        GridMode::Wrap => "wrap",
        GridMode::Bounded => "bounded",
    };
    (format!("{} on {}x{} {mode} grid, {count} images", q.describe(), grid.width, grid.height), rep)
}

fn morphology_suite(opts: &LawsOptions, rng: &mut ChaCha8Rng) -> Result<Vec<(String, LawReport)>> {
    let mut out = Vec::new();
    // every binary image of Z4 against every structuring element on Z4
    let b = ChainQuantale::boolean();
    let z4 = Grid::line(4, GridMode::Wrap)?;
    let all: Vec<Image<u32>> = (0..16u32).map(|s| Image::from_fn(z4, |i| (s >> i) & 1)).collect();
    let mut bin = LawReport::new();
    for a in 1..16u32 {
        let offs: Vec<(i64, i64)> = (0..4).filter(|i| (a >> i) & 1 == 1).map(|i| (i as i64, 0)).collect();
        let se = StructuringElement::flat(&offs, 1);
        bin.merge(check_morphology_laws(&b, &all, &se, &[(1, 0), (2, 0), (3, 0)]));
    }
    out.push(("Boolean images on Z4, all structuring elements".into(), bin));
    let count = (opts.samples / 100).clamp(2, 40);
    for mode in [GridMode::Wrap, GridMode::Bounded] {
        let g = Grid::new(8, 6, mode)?;
        match opts.carrier {
            Some(CarrierChoice::Float) => {
                for q in floats() {
                    out.push(morph_family(&q, g, count, rng));
                }
            }
            Some(CarrierChoice::Chain(d)) => out.push(morph_family(&ChainQuantale::lukasiewicz(d)?, g, count, rng)),
            None => {
                out.push(morph_family(&ChainQuantale::lukasiewicz(255)?, g, count, rng));
                out.push(morph_family(&ChainQuantale::godel(10)?, g, count, rng));
            }
        }
    }
    Ok(out)
}

/// Plain-text report: one block per section, then a verdict line.
pub fn render(sections: &[Section]) -> String {
    let mut s = String::new();
    for sec in sections {
        let verdict = if sec.report.is_ok() { "pass" } else { "FAIL" };
        s.push_str(&format!("== [{}] {} ({verdict})\n{}", sec.suite.name(), sec.title, sec.report));
    }
    let failed: usize = sections.iter().map(|s| s.report.total_failed()).sum();
    let checked: usize = sections.iter().map(|s| s.report.total_checked()).sum();
    s.push_str(&format!(
        "{}: {checked} checks, {failed} failures\n",
        if all_pass(sections) { "all laws hold" } else { "LAWS VIOLATED" }
    ));
    s
}

/// Parses a comma-separated suite list; `all` selects every suite.
pub fn parse_suites(s: &str) -> Result<Vec<Suite>> {
    if s == "all" {
        return Ok(Suite::ALL.to_vec());
    }
    let v: Vec<Suite> = s.split(',').map(str::parse).collect::<Result<_>>()?;
    if v.is_empty() {
        bail!("no suites selected");
    }
    Ok(v)
}
