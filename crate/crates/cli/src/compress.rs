//! Separable image compression with fuzzy partitions.
//!
//! An image is transformed along its rows, then along the columns of the
//! result. Reconstruction undoes the column stage first. The composite is
//! the transform whose kernel is the product of the two one-dimensional
//! kernels, so it is still the upper transform and its residual.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use anyhow::{anyhow, bail, ensure, Context, Result};
use qkit::fuzzy::{is_aligned, luk_basis_at_node, FuzzyPartition};
use qkit::{ChainQuantale, Quantale, Rational, UnitQuantale};

use crate::carrier::{common_denominator, parse_unit, Carrier, CarrierChoice};
use crate::pgm::PgmImage;

const MAGIC: &str = "qkit-coefficients";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    /// The piecewise-linear Łukasiewicz basis.
    #[default]
    Luk,
    /// A partition read from a file, used on both axes.
    Partition,
}

impl FromStr for Method {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "luk" => Ok(Self::Luk),
            "partition" => Ok(Self::Partition),
            _ => bail!("unknown method {s:?} (expected luk or partition)"),
        }
    }
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Self::Luk => "luk",
            Self::Partition => "partition",
        }
    }
}

/// A partition file: header `n l [d]`, then `n` rows of `l` values. With `d`
/// the values are integer levels out of `d`; without it they are decimals
/// or fractions in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionFile {
    /// `values[i][j] = A_i(p_j)`.
    pub values: Vec<Vec<Rational>>,
}

impl PartitionFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header: Vec<usize> = lines
            .next()
            .ok_or_else(|| anyhow!("empty partition file"))?
            .split_whitespace()
            .map(|t| t.parse().with_context(|| format!("header field {t:?}")))
            .collect::<Result<_>>()?;
        let (n, l, d) = match header[..] {
            [n, l] => (n, l, None),
            [n, l, d] => (n, l, Some(d)),
            _ => bail!("partition header must be `n l` or `n l d`"),
        };
        ensure!(n >= 1 && l >= 1, "partition needs n >= 1 and l >= 1");
        if d == Some(0) {
            bail!("level denominator must be positive");
        }
        let tokens: Vec<&str> = lines.flat_map(str::split_whitespace).collect();
        ensure!(tokens.len() == n * l, "expected {} values, found {}", n * l, tokens.len());
        let vals = tokens
            .iter()
            .map(|t| match d {
                Some(d) => {
                    let v: usize = t.parse().with_context(|| format!("level {t:?}"))?;
                    ensure!(v <= d, "level {v} above {d}");
                    Ok(Rational::new(v as i64, d as i64))
                }
                None => parse_unit(t),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { values: vals.chunks(l).map(<[Rational]>::to_vec).collect() })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn components(&self) -> usize {
        self.values.len()
    }

    pub fn nodes(&self) -> usize {
        self.values[0].len()
    }
}

/// Places rational basis values into a carrier, failing on inexact ones.
fn partition_in<C: Carrier>(c: &C, values: &[Vec<Rational>]) -> Result<FuzzyPartition<C>> {
    let mut rows = Vec::with_capacity(values.len());
    for row in values {
        let mut r = Vec::with_capacity(row.len());
        for v in row {
            let (e, exact) = c.from_unit(*v);
            ensure!(exact, "basis value {v} is not a level of {}", c.tag());
            r.push(e);
        }
        rows.push(r);
    }
    Ok(FuzzyPartition::new(c.clone(), rows)?)
}

/// `values[k][j] = p_k(j / (l-1))`.
pub fn luk_values(n: usize, l: usize) -> Result<Vec<Vec<Rational>>> {
    ensure!(n >= 2, "need at least two components, got n={n}");
    ensure!(l >= 2, "need at least two samples per line, got {l}");
    (0..n)
        .map(|k| (0..l).map(|j| Ok(luk_basis_at_node(n, k, j, l)?)).collect())
        .collect()
}

/// The row and column partitions of a separable transform.
#[derive(Debug, Clone)]
pub struct Separable<Q: Quantale> {
    rows: FuzzyPartition<Q>,
    cols: FuzzyPartition<Q>,
}

impl<Q: Quantale + Clone> Separable<Q> {
    /// `rows` is sampled along a row (width nodes), `cols` along a column.
    pub fn new(rows: FuzzyPartition<Q>, cols: FuzzyPartition<Q>) -> Self {
        Self { rows, cols }
    }

    pub fn width(&self) -> usize {
        self.rows.nodes()
    }

    pub fn height(&self) -> usize {
        self.cols.nodes()
    }

    /// `(rows, cols)` of the coefficient matrix.
    pub fn shape(&self) -> (usize, usize) {
        (self.cols.components(), self.rows.components())
    }

    /// Row-major image in, row-major coefficients out.
    pub fn compress(&self, img: &[Q::Elem]) -> Result<Vec<Q::Elem>> {
        let (w, h) = (self.width(), self.height());
        ensure!(img.len() == w * h, "image has {} samples, partitions expect {w}x{h}", img.len());
        let stage: Vec<Vec<Q::Elem>> = img.chunks(w).map(|r| self.rows.f_up(r)).collect::<qkit::Result<_>>()?;
        self.columns(&stage, |col| self.cols.f_up(col))
    }

    pub fn reconstruct(&self, coeffs: &[Q::Elem]) -> Result<Vec<Q::Elem>> {
        let (nh, nw) = self.shape();
        ensure!(coeffs.len() == nh * nw, "expected {nh}x{nw} coefficients, got {}", coeffs.len());
        let rows: Vec<Vec<Q::Elem>> = coeffs.chunks(nw).map(<[Q::Elem]>::to_vec).collect();
        let stage = self.columns(&rows, |col| self.cols.f_up_inverse(col))?;
        let mut out = Vec::with_capacity(self.width() * self.height());
        for r in stage.chunks(nw) {
            out.extend(self.rows.f_up_inverse(r)?);
        }
        Ok(out)
    }

    /// Applies `f` to every column of `m`, returning the result row-major.
    fn columns(
        &self,
        m: &[Vec<Q::Elem>],
        f: impl Fn(&[Q::Elem]) -> qkit::Result<Vec<Q::Elem>>,
    ) -> Result<Vec<Q::Elem>> {
        let cols = m.first().map_or(0, Vec::len);
        let done: Vec<Vec<Q::Elem>> = (0..cols)
            .map(|c| f(&m.iter().map(|r| r[c].clone()).collect::<Vec<_>>()))
            .collect::<qkit::Result<_>>()?;
        let out_rows = done.first().map_or(0, Vec::len);
        Ok((0..out_rows).flat_map(|r| done.iter().map(move |col| col[r].clone())).collect())
    }
}

/// A compressed image with everything needed to reconstruct it.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientFile<C: Carrier> {
    pub carrier: C,
    pub method: Method,
    pub n: usize,
    pub width: usize,
    pub height: usize,
    pub maxval: u8,
    /// For [`Method::Partition`]: `A_i(p_j)` in carrier values.
    pub partition: Option<Vec<Vec<C::Elem>>>,
    /// `n × n`, row-major; rows follow the image's vertical axis.
    pub values: Vec<C::Elem>,
}

impl<C: Carrier> CoefficientFile<C> {
    pub fn separable(&self) -> Result<Separable<C>> {
        match (&self.method, &self.partition) {
            (Method::Luk, _) => {
                let rows = partition_in(&self.carrier, &luk_values(self.n, self.width)?)?;
                let cols = partition_in(&self.carrier, &luk_values(self.n, self.height)?)?;
                Ok(Separable::new(rows, cols))
            }
            (Method::Partition, Some(p)) => {
                ensure!(
                    p.first().map_or(0, Vec::len) == self.width && self.width == self.height,
                    "partition nodes do not match a {}x{} image",
                    self.width,
                    self.height
                );
                let part = FuzzyPartition::new(self.carrier.clone(), p.clone())?;
                Ok(Separable::new(part.clone(), part))
            }
            (Method::Partition, None) => bail!("partition method without a partition block"),
        }
    }

    /// The reconstructed image, in carrier values.
    pub fn reconstruct_values(&self) -> Result<Vec<C::Elem>> {
        self.separable()?.reconstruct(&self.values)
    }

    /// Reconstruction rounded down onto the pixel grid: the largest image
    /// below the exact reconstruction, so it stays above the original and
    /// compresses back to the same coefficients.
    pub fn reconstruct(&self) -> Result<PgmImage> {
        let v = self.reconstruct_values()?;
        let px = v.iter().map(|e| self.carrier.to_pixel_floor(e, self.maxval)).collect();
        PgmImage::new(self.width, self.height, self.maxval, px)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "{MAGIC}\nmethod={} n={} carrier={} width={} height={} maxval={}\n",
            self.method.name(),
            self.n,
            self.carrier.tag(),
            self.width,
            self.height,
            self.maxval
        );
        let mut block = |name: &str, rows: &mut dyn Iterator<Item = &[C::Elem]>| {
            s.push_str(name);
            s.push('\n');
            for r in rows {
                let line: Vec<String> = r.iter().map(|e| self.carrier.format(e)).collect();
                let _ = writeln!(s, "{}", line.join(" "));
            }
        };
        if let Some(p) = &self.partition {
            block("partition", &mut p.iter().map(Vec::as_slice));
        }
        block("coefficients", &mut self.values.chunks(self.n.max(1)));
        s
    }
}

/// A coefficient file over whichever carrier its header names.
#[derive(Debug, Clone, PartialEq)]
pub enum Coefficients {
    Chain(CoefficientFile<ChainQuantale>),
    Float(CoefficientFile<UnitQuantale>),
}

impl Coefficients {
    pub fn to_text(&self) -> String {
        match self {
            Self::Chain(c) => c.to_text(),
            Self::Float(c) => c.to_text(),
        }
    }

    pub fn reconstruct(&self) -> Result<PgmImage> {
        match self {
            Self::Chain(c) => c.reconstruct(),
            Self::Float(c) => c.reconstruct(),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        ensure!(lines.next() == Some(MAGIC), "not a coefficient file");
        let header = lines.next().ok_or_else(|| anyhow!("missing header"))?;
        let mut h = std::collections::HashMap::new();
        for tok in header.split_whitespace() {
            let (k, v) = tok.split_once('=').ok_or_else(|| anyhow!("bad header token {tok:?}"))?;
            h.insert(k, v);
        }
        let get = |k: &str| h.get(k).copied().ok_or_else(|| anyhow!("header lacks {k}"));
        let num = |k: &str| -> Result<usize> { get(k)?.parse().with_context(|| format!("header field {k}")) };
        let method: Method = get("method")?.parse()?;
        let (n, width, height) = (num("n")?, num("width")?, num("height")?);
        let maxval = u8::try_from(num("maxval")?).context("maxval above 255")?;
        ensure!(maxval > 0 && width > 0 && height > 0 && n > 0, "degenerate header");
        let choice: CarrierChoice = get("carrier")?.parse()?;
        let body: Vec<&str> = lines.collect();
        let blocks = split_blocks(&body)?;
        match choice {
            CarrierChoice::Chain(d) => {
                let c = ChainQuantale::lukasiewicz(d)?;
                Ok(Self::Chain(build(c, method, n, width, height, maxval, &blocks)?))
            }
            CarrierChoice::Float => {
                Ok(Self::Float(build(UnitQuantale::lukasiewicz(), method, n, width, height, maxval, &blocks)?))
            }
        }
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("parsing {}", path.display()))
    }
}

type Blocks<'a> = Vec<(&'a str, Vec<Vec<&'a str>>)>;

fn split_blocks<'a>(body: &[&'a str]) -> Result<Blocks<'a>> {
    let mut out: Blocks<'a> = Vec::new();
    for l in body {
        if l.chars().next().is_some_and(|c| c.is_ascii_alphabetic()) && !l.contains(' ') {
            out.push((l, Vec::new()));
        } else {
            let cur = out.last_mut().ok_or_else(|| anyhow!("values before any block name"))?;
            cur.1.push(l.split_whitespace().collect());
        }
    }
    Ok(out)
}

fn build<C: Carrier>(
    carrier: C,
    method: Method,
    n: usize,
    width: usize,
    height: usize,
    maxval: u8,
    blocks: &Blocks<'_>,
) -> Result<CoefficientFile<C>> {
    let block = |name: &str| blocks.iter().find(|b| b.0 == name).map(|b| &b.1);
    let parse_rows = |rows: &Vec<Vec<&str>>| -> Result<Vec<Vec<C::Elem>>> {
        rows.iter().map(|r| r.iter().map(|t| carrier.parse(t)).collect()).collect()
    };
    let coeffs = parse_rows(block("coefficients").ok_or_else(|| anyhow!("missing coefficients block"))?)?;
    ensure!(
        coeffs.len() == n && coeffs.iter().all(|r| r.len() == n),
        "coefficient block must be {n}x{n}"
    );
    let partition = match method {
        Method::Partition => {
            let p = parse_rows(block("partition").ok_or_else(|| anyhow!("missing partition block"))?)?;
            ensure!(p.len() == n, "partition block must have {n} rows");
            Some(p)
        }
        Method::Luk => None,
    };
    let file = CoefficientFile {
        carrier,
        method,
        n,
        width,
        height,
        maxval,
        partition,
        values: coeffs.into_iter().flatten().collect(),
    };
    file.separable()?;
    Ok(file)
}

#[derive(Debug, Clone, Default)]
pub struct CompressOptions {
    pub method: Method,
    pub n: usize,
    /// `None` means `chain:<maxval>` widened as needed.
    pub carrier: Option<CarrierChoice>,
    pub partition: Option<PartitionFile>,
}

/// Compresses `img`; returns the coefficients and any warnings.
pub fn compress(img: &PgmImage, opts: &CompressOptions) -> Result<(Coefficients, Vec<String>)> {
    let mut warnings = Vec::new();
    let (values_w, values_h, n) = match opts.method {
        Method::Luk => {
            ensure!(img.width >= 2 && img.height >= 2, "luk method needs at least 2x2 pixels");
            for (axis, l) in [("width", img.width), ("height", img.height)] {
                if !is_aligned(opts.n, l) {
                    warnings.push(format!(
                        "{axis} {l} is not of the form m(n-1)+1 for n={}; component centres miss the grid and \
                         the partition is not normal",
                        opts.n
                    ));
                }
            }
            (luk_values(opts.n, img.width)?, luk_values(opts.n, img.height)?, opts.n)
        }
        Method::Partition => {
            let p = opts.partition.as_ref().ok_or_else(|| anyhow!("partition method needs a partition file"))?;
            ensure!(
                p.nodes() == img.width && p.nodes() == img.height,
                "partition has {} nodes; image is {}x{}",
                p.nodes(),
                img.width,
                img.height
            );
            (p.values.clone(), p.values.clone(), p.components())
        }
    };
    let choice = opts.carrier.unwrap_or(CarrierChoice::Chain(img.maxval as u32));
    let coeffs = match choice {
        CarrierChoice::Chain(base) => {
            let dens = values_w.iter().chain(&values_h).flatten().map(|r| *r.denom() as u64);
            let d = common_denominator(base, dens.collect::<Vec<_>>())?;
            if d % img.maxval as u32 != 0 {
                warnings.push(format!("maxval {} does not divide the chain denominator {d}; pixels are rounded", img.maxval));
            }
            let c = ChainQuantale::lukasiewicz(d)?;
            Coefficients::Chain(compress_in(c, opts.method, n, img, &values_w, &values_h)?)
        }
        CarrierChoice::Float => {
            Coefficients::Float(compress_in(UnitQuantale::lukasiewicz(), opts.method, n, img, &values_w, &values_h)?)
        }
    };
    Ok((coeffs, warnings))
}

fn compress_in<C: Carrier>(
    c: C,
    method: Method,
    n: usize,
    img: &PgmImage,
    values_w: &[Vec<Rational>],
    values_h: &[Vec<Rational>],
) -> Result<CoefficientFile<C>> {
    let rows = partition_in(&c, values_w)?;
    let cols = partition_in(&c, values_h)?;
    let partition = match method {
        Method::Partition => Some((0..rows.components()).map(|i| (0..rows.nodes()).map(|j| rows.value(i, j).clone()).collect()).collect()),
        Method::Luk => None,
    };
    let sep = Separable::new(rows, cols);
    let data: Vec<C::Elem> = img.pixels.iter().map(|&g| c.from_pixel(g, img.maxval)).collect();
    let values = sep.compress(&data)?;
    Ok(CoefficientFile { carrier: c, method, n, width: img.width, height: img.height, maxval: img.maxval, partition, values })
}

/// The image in carrier values, as `compress` sees it.
pub fn image_values<C: Carrier>(c: &C, img: &PgmImage) -> Vec<C::Elem> {
    img.pixels.iter().map(|&g| c.from_pixel(g, img.maxval)).collect()
}
