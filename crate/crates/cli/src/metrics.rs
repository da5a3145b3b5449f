//! `qkit metrics`: distortion between two greymaps.

use anyhow::{ensure, Result};

use crate::pgm::PgmImage;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    /// `f64::INFINITY` for identical images.
    pub psnr: f64,
    pub max_abs: u32,
    pub mean_abs: f64,
    pub mse: f64,
    pub peak: u8,
}

pub fn compare(a: &PgmImage, b: &PgmImage) -> Result<Metrics> {
    ensure!(
        (a.width, a.height) == (b.width, b.height),
        "dimension mismatch: {}x{} vs {}x{}",
        a.width,
        a.height,
        b.width,
        b.height
    );
    let n = a.pixels.len() as f64;
    let diffs = a.pixels.iter().zip(&b.pixels).map(|(&x, &y)| (x as i32 - y as i32).unsigned_abs());
    let (mut max_abs, mut sum, mut sq) = (0u32, 0u64, 0u64);
    for d in diffs {
        max_abs = max_abs.max(d);
        sum += d as u64;
        sq += (d as u64) * (d as u64);
    }
    let mse = sq as f64 / n;
    let peak = a.maxval.max(b.maxval);
    let psnr = if sq == 0 { f64::INFINITY } else { 10.0 * ((peak as f64).powi(2) / mse).log10() };
    Ok(Metrics { psnr, max_abs, mean_abs: sum as f64 / n, mse, peak })
}

fn psnr_text(p: f64) -> String {
    if p.is_infinite() {
        "inf".into()
    } else {
        format!("{p:.4}")
    }
}

impl Metrics {
    pub fn to_text(&self) -> String {
        format!(
            "psnr_db: {}\nmax_abs_error: {}\nmean_abs_error: {:.6}\nmse: {:.6}\n",
            psnr_text(self.psnr),
            self.max_abs,
            self.mean_abs,
            self.mse
        )
    }

    pub fn to_csv(&self) -> String {
        format!(
            "psnr_db,max_abs_error,mean_abs_error,mse\n{},{},{:.6},{:.6}\n",
            psnr_text(self.psnr),
            self.max_abs,
            self.mean_abs,
            self.mse
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_images() {
        let a = PgmImage::from_fn(3, 2, 255, |x, y| (x + y) as u8).unwrap();
        let m = compare(&a, &a).unwrap();
        assert!(m.psnr.is_infinite());
        assert_eq!(m.max_abs, 0);
        assert!(m.to_text().contains("psnr_db: inf"));
        assert!(m.to_csv().lines().nth(1).unwrap().starts_with("inf,0,"));
    }

    #[test]
    fn one_pixel() {
        let a = PgmImage::new(1, 1, 255, vec![0]).unwrap();
        let b = PgmImage::new(1, 1, 255, vec![255]).unwrap();
        let m = compare(&a, &b).unwrap();
        assert_eq!(m.max_abs, 255);
        assert_eq!(m.mean_abs, 255.0);
        assert_eq!(m.psnr, 0.0);
    }

    #[test]
    fn hand_computed() {
        let a = PgmImage::new(2, 2, 255, vec![10, 20, 30, 40]).unwrap();
        let b = PgmImage::new(2, 2, 255, vec![12, 20, 27, 40]).unwrap();
        let m = compare(&a, &b).unwrap();
        assert_eq!(m.max_abs, 3);
        assert_eq!(m.mean_abs, 1.25);
        assert_eq!(m.mse, 3.25);
        let expect = 10.0 * (65025.0f64 / 3.25).log10();
        assert!((m.psnr - expect).abs() < 1e-12);
        assert!(compare(&a, &PgmImage::new(1, 4, 255, vec![0; 4]).unwrap()).is_err());
    }
}
