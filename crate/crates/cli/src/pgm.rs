//! Netpbm greymaps: plain (`P2`) and raw (`P5`), 8-bit.

use std::fs;
use std::path::Path;

use anyhow::{bail, ensure, Context, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PgmFormat {
    /// `P2`, ASCII.
    #[default]
    Plain,
    /// `P5`, one byte per pixel.
    Raw,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PgmImage {
    pub width: usize,
    pub height: usize,
    pub maxval: u8,
    /// Row-major.
    pub pixels: Vec<u8>,
    pub format: PgmFormat,
}

impl PgmImage {
    pub fn new(width: usize, height: usize, maxval: u8, pixels: Vec<u8>) -> Result<Self> {
        ensure!(width > 0 && height > 0, "empty image {width}x{height}");
        ensure!(maxval > 0, "maxval must be positive");
        ensure!(pixels.len() == width * height, "expected {} pixels, got {}", width * height, pixels.len());
        if let Some(p) = pixels.iter().find(|&&p| p > maxval) {
            bail!("pixel {p} above maxval {maxval}");
        }
        Ok(Self { width, height, maxval, pixels, format: PgmFormat::Plain })
    }

    pub fn from_fn(width: usize, height: usize, maxval: u8, f: impl Fn(usize, usize) -> u8) -> Result<Self> {
        let pixels = (0..height).flat_map(|y| (0..width).map(move |x| (x, y))).map(|(x, y)| f(x, y)).collect();
        Self::new(width, height, maxval, pixels)
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    pub fn parse(bytes: &[u8]) -> Result<Self> {
        let mut cur = Cursor { bytes, pos: 0 };
        let magic = cur.token()?;
        let format = match magic.as_str() {
            "P2" => PgmFormat::Plain,
            "P5" => PgmFormat::Raw,
            m => bail!("not a PGM file (magic {m:?})"),
        };
        let width = cur.number()?;
        let height = cur.number()?;
        let maxval = cur.number()?;
        ensure!(maxval <= 255, "maxval {maxval} above 255 is not supported");
        let n = width * height;
        let pixels = match format {
            PgmFormat::Plain => (0..n)
                .map(|_| cur.number().and_then(|v| u8::try_from(v).context("pixel above 255")))
                .collect::<Result<Vec<u8>>>()?,
            PgmFormat::Raw => {
                let start = cur.pos + 1;
                ensure!(
                    bytes.len() >= start + n,
                    "raster truncated: need {n} bytes, have {}",
                    bytes.len().saturating_sub(start)
                );
                bytes[start..start + n].to_vec()
            }
        };
        let mut img = Self::new(width, height, maxval as u8, pixels)?;
        img.format = format;
        Ok(img)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&bytes).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn to_bytes(&self, format: PgmFormat) -> Vec<u8> {
        let header = |m: &str| format!("{m}\n{} {}\n{}\n", self.width, self.height, self.maxval);
        match format {
            PgmFormat::Plain => {
                let mut s = header("P2");
                for row in self.pixels.chunks(self.width) {
                    // lines stay within 70 characters
                    let mut line = String::new();
                    for p in row {
                        let t = p.to_string();
                        if !line.is_empty() && line.len() + 1 + t.len() > 70 {
                            s.push_str(&line);
                            s.push('\n');
                            line.clear();
                        }
                        if !line.is_empty() {
                            line.push(' ');
                        }
                        line.push_str(&t);
                    }
                    s.push_str(&line);
                    s.push('\n');
                }
                s.into_bytes()
            }
            PgmFormat::Raw => {
                let mut b = header("P5").into_bytes();
                b.extend_from_slice(&self.pixels);
                b
            }
        }
    }

    pub fn write(&self, path: &Path, format: PgmFormat) -> Result<()> {
        fs::write(path, self.to_bytes(format)).with_context(|| format!("writing {}", path.display()))
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                c if c.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn token(&mut self) -> Result<String> {
        self.skip();
        let start = self.pos;
        while self.pos < self.bytes.len() && !self.bytes[self.pos].is_ascii_whitespace() && self.bytes[self.pos] != b'#' {
            self.pos += 1;
        }
        ensure!(self.pos > start, "unexpected end of file");
        Ok(String::from_utf8_lossy(&self.bytes[start..self.pos]).into_owned())
    }

    fn number(&mut self) -> Result<usize> {
        let t = self.token()?;
        t.parse().with_context(|| format!("expected a number, got {t:?}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_round_trip_is_byte_identical() {
        let img = PgmImage::from_fn(40, 3, 255, |x, y| (x * 6 + y) as u8).unwrap();
        let bytes = img.to_bytes(PgmFormat::Plain);
        let back = PgmImage::parse(&bytes).unwrap();
        assert_eq!(back.pixels, img.pixels);
        assert_eq!(back.to_bytes(PgmFormat::Plain), bytes);
        assert!(String::from_utf8(bytes).unwrap().lines().all(|l| l.len() <= 70));
    }

    #[test]
    fn raw_round_trip() {
        let img = PgmImage::from_fn(5, 4, 200, |x, y| (x * 40 + y) as u8).unwrap();
        let back = PgmImage::parse(&img.to_bytes(PgmFormat::Raw)).unwrap();
        assert_eq!(back.pixels, img.pixels);
        assert_eq!(back.format, PgmFormat::Raw);
        assert_eq!(back.maxval, 200);
    }

    #[test]
    fn comments_and_odd_whitespace() {
        let text = b"P2 # plain\n# another\n3\t2\n15\n0 1 2\n3  4\n\n15\n";
        let img = PgmImage::parse(text).unwrap();
        assert_eq!((img.width, img.height, img.maxval), (3, 2, 15));
        assert_eq!(img.pixels, vec![0, 1, 2, 3, 4, 15]);
    }

    #[test]
    fn raw_pixels_may_look_like_whitespace() {
        let mut b = b"P5\n2 2\n255\n".to_vec();
        b.extend_from_slice(&[b' ', b'\n', b'#', 9]);
        assert_eq!(PgmImage::parse(&b).unwrap().pixels, vec![32, 10, 35, 9]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(PgmImage::parse(b"P3\n1 1\n255\n0 0 0\n").is_err());
        assert!(PgmImage::parse(b"P2\n2 2\n255\n0 0 0\n").is_err());
        assert!(PgmImage::parse(b"P2\n1 1\n10\n11\n").is_err());
        assert!(PgmImage::parse(b"P2\n1 1\n1000\n5\n").is_err());
        assert!(PgmImage::parse(b"P5\n4 4\n255\nabc").is_err());
    }
}
