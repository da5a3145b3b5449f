//! `qkit morph`: grey dilation, erosion, opening and closing of a PGM image.

use std::path::Path;
use std::str::FromStr;

use anyhow::{anyhow, bail, ensure, Context, Result};
use qkit::morphology::{closing, dilate, erode, image_leq, opening, Grid, GridMode, Image, StructuringElement};
use qkit::{ChainQuantale, LawReport, Rational, UnitQuantale};

use crate::carrier::{common_denominator, parse_unit, Carrier, CarrierChoice};
use crate::pgm::PgmImage;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MorphOp {
    Dilate,
    Erode,
    Open,
    Close,
}

impl FromStr for MorphOp {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "dilate" => Self::Dilate,
            "erode" => Self::Erode,
            "open" => Self::Open,
            "close" => Self::Close,
            _ => bail!("unknown operation {s:?} (dilate, erode, open, close)"),
        })
    }
}

/// Structuring element file: `w h ox oy`, then `w × h` values in `[0, 1]`,
/// row by row. The origin sits at column `ox`, row `oy`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeFile {
    pub width: usize,
    pub height: usize,
    pub origin: (usize, usize),
    pub values: Vec<Rational>,
}

impl SeFile {
    pub fn parse(text: &str) -> Result<Self> {
        let toks: Vec<&str> = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or(""))
            .flat_map(str::split_whitespace)
            .collect();
        ensure!(toks.len() >= 4, "structuring element header must be `w h ox oy`");
        let h: Vec<usize> = toks[..4]
            .iter()
            .map(|t| t.parse().with_context(|| format!("header field {t:?}")))
            .collect::<Result<_>>()?;
        let (w, ht, ox, oy) = (h[0], h[1], h[2], h[3]);
        ensure!(w > 0 && ht > 0, "empty structuring element");
        ensure!(ox < w && oy < ht, "origin ({ox}, {oy}) outside the {w}x{ht} window");
        ensure!(toks.len() == 4 + w * ht, "expected {} values, found {}", w * ht, toks.len() - 4);
        let values = toks[4..].iter().map(|t| parse_unit(t)).collect::<Result<_>>()?;
        Ok(Self { width: w, height: ht, origin: (ox, oy), values })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("parsing {}", path.display()))
    }

    fn element<C: Carrier>(&self, c: &C) -> Result<StructuringElement<C::Elem>> {
        let vals = self.values.iter().map(|r| c.from_unit(*r).0).collect();
        Ok(StructuringElement::from_window(self.width, self.height, self.origin.0, self.origin.1, vals, &c.bottom())?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MorphOptions {
    pub op: MorphOp,
    pub mode: GridMode,
    /// `None` means `chain:<maxval>` widened to fit the element's values.
    pub carrier: Option<CarrierChoice>,
    pub check_adjunction: bool,
}

#[derive(Debug, Clone)]
pub struct MorphOutcome {
    pub image: PgmImage,
    pub check: Option<LawReport>,
    pub warnings: Vec<String>,
}

pub fn morph(img: &PgmImage, se: &SeFile, opts: &MorphOptions) -> Result<MorphOutcome> {
    let choice = opts.carrier.unwrap_or(CarrierChoice::Chain(img.maxval as u32));
    let mut warnings = Vec::new();
    match choice {
        CarrierChoice::Chain(base) => {
            let d = common_denominator(base, se.values.iter().map(|r| *r.denom() as u64).collect::<Vec<_>>())?;
            if d % img.maxval as u32 != 0 {
                warnings.push(format!("maxval {} does not divide the chain denominator {d}; pixels are rounded", img.maxval));
            }
            run(&ChainQuantale::lukasiewicz(d)?, img, se, opts, warnings)
        }
        CarrierChoice::Float => run(&UnitQuantale::lukasiewicz(), img, se, opts, warnings),
    }
}

fn run<C: Carrier>(c: &C, img: &PgmImage, se: &SeFile, opts: &MorphOptions, warnings: Vec<String>) -> Result<MorphOutcome> {
    let grid = Grid::new(img.width, img.height, opts.mode)?;
    let x = Image::new(grid, img.pixels.iter().map(|&g| c.from_pixel(g, img.maxval)).collect())?;
    let a = se.element(c)?;
    let y = match opts.op {
        MorphOp::Dilate => dilate(c, &x, &a),
        MorphOp::Erode => erode(c, &x, &a),
        MorphOp::Open => opening(c, &x, &a),
        MorphOp::Close => closing(c, &x, &a),
    };
    let check = opts.check_adjunction.then(|| adjunction_report(c, &x, &a));
    let px = y.data().iter().map(|e| c.to_pixel(e, img.maxval)).collect();
    let mut image = PgmImage::new(img.width, img.height, img.maxval, px)?;
    image.format = img.format;
    Ok(MorphOutcome { image, check, warnings })
}

/// `δ(X) ≤ Y ⟺ X ≤ ε(Y)` on every pair drawn from `X`, `δ(X)`, `ε(X)`,
/// their opening and closing, plus `open(X) ≤ X ≤ close(X)`.
fn adjunction_report<C: Carrier>(c: &C, x: &Image<C::Elem>, a: &StructuringElement<C::Elem>) -> LawReport {
    let d = dilate(c, x, a);
    let e = erode(c, x, a);
    let pool = [x.clone(), d.clone(), e.clone(), dilate(c, &e, a), erode(c, &d, a)];
    let names = ["X", "δX", "εX", "δεX", "εδX"];
    let mut r = LawReport::new();
    for (i, p) in pool.iter().enumerate() {
        let dp = dilate(c, p, a);
        for (j, q) in pool.iter().enumerate() {
            let lhs = image_leq(c, &dp, q);
            let rhs = image_leq(c, p, &erode(c, q, a));
            r.check("adjunction: δ(P) ≤ Q iff P ≤ ε(Q)", lhs == rhs, || format!("P={} Q={}", names[i], names[j]));
        }
    }
    r.check("opening below the image", image_leq(c, &pool[3], x), || "δεX ≰ X".into());
    r.check("closing above the image", image_leq(c, x, &pool[4]), || "X ≰ εδX".into());
    r
}

/// Parses `wrap` or `bounded`.
pub fn parse_mode(s: &str) -> Result<GridMode> {
    match s {
        "wrap" => Ok(GridMode::Wrap),
        "bounded" => Ok(GridMode::Bounded),
        _ => Err(anyhow!("mode must be wrap or bounded, got {s:?}")),
    }
}
