//! IDX image/label files (the MNIST distribution format).

use std::path::Path;

use super::{AnnError, Dataset, Sample};

pub const IMAGE_MAGIC: u32 = 0x0000_0803;
pub const LABEL_MAGIC: u32 = 0x0000_0801;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdxOptions {
    /// `(digit, label bit)` pairs; images of other digits are skipped.
    pub keep: Vec<(u8, u8)>,
    /// Side of the square output grid.
    pub grid: usize,
    /// A cell is 1 iff its averaged intensity is at least this.
    pub threshold: u8,
    /// Stop after this many kept samples.
    pub limit: Option<usize>,
}

impl Default for IdxOptions {
    fn default() -> Self {
        IdxOptions {
            keep: vec![(0, 0), (1, 1)],
            grid: 10,
            threshold: 128,
            limit: None,
        }
    }
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
    what: &'static str,
}

impl<'a> Reader<'a> {
    fn take(&mut self, k: usize) -> Result<&'a [u8], AnnError> {
        let end = self.pos.checked_add(k).filter(|&e| e <= self.buf.len()).ok_or_else(|| {
            AnnError::TruncatedFile(format!(
                "{} file needs {} more bytes at offset {}",
                self.what,
                k,
                self.pos
            ))
        })?;
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32, AnnError> {
        let b = self.take(4)?;
        Ok(u32::from_be_bytes([b[0], b[1], b[2], b[3]]))
    }
}

fn header<'a>(buf: &'a [u8], magic: u32, what: &'static str) -> Result<Reader<'a>, AnnError> {
    let mut r = Reader { buf, pos: 0, what };
    let found = r.u32()?;
    if found != magic {
        return Err(AnnError::BadMagic {
            expected: magic,
            found,
        });
    }
    Ok(r)
}

/// Area-weighted block average of a `side × side` image onto a
/// `grid × grid` raster: output cell `(Y, X)` covers the source square
/// `[Y·side/grid, (Y+1)·side/grid) × [X·side/grid, (X+1)·side/grid)`.
pub fn downsample(img: &[u8], side: usize, grid: usize) -> Vec<f64> {
    assert_eq!(img.len(), side * side);
    // overlap[c][p]: length of source pixel p inside output cell c, in units
    // of 1/grid pixels so the weights are exact integers
    let overlap: Vec<Vec<(usize, u64)>> = (0..grid)
        .map(|c| {
            let (lo, hi) = (c * side, (c + 1) * side);
            (0..side)
                .filter_map(|p| {
                    let (plo, phi) = (p * grid, (p + 1) * grid);
                    let len = hi.min(phi).saturating_sub(lo.max(plo));
                    (len > 0).then_some((p, len as u64))
                })
                .collect()
        })
        .collect();
    let area = (side * side) as f64;
    let mut out = Vec::with_capacity(grid * grid);
    for row in &overlap {
        for col in &overlap {
            let mut acc = 0u64;
            for &(y, wy) in row {
                for &(x, wx) in col {
                    acc += wy * wx * u64::from(img[y * side + x]);
                }
            }
            out.push(acc as f64 / area);
        }
    }
    out
}

/// Loads an image/label file pair, keeps the configured digits, and turns
/// each image into a `grid²`-bit input.
pub fn load_idx_dataset(
    images: impl AsRef<Path>,
    labels: impl AsRef<Path>,
    opts: &IdxOptions,
) -> Result<Dataset, AnnError> {
    let ib = std::fs::read(images)?;
    let lb = std::fs::read(labels)?;
    parse_idx(&ib, &lb, opts)
}

/// [`load_idx_dataset`] over in-memory file contents.
pub fn parse_idx(ib: &[u8], lb: &[u8], opts: &IdxOptions) -> Result<Dataset, AnnError> {
    let mut ir = header(ib, IMAGE_MAGIC, "image")?;
    let count = ir.u32()? as usize;
    let rows = ir.u32()? as usize;
    let cols = ir.u32()? as usize;
    let mut lr = header(lb, LABEL_MAGIC, "label")?;
    let lcount = lr.u32()? as usize;
    if count != lcount {
        return Err(AnnError::LabelMismatch {
            images: count,
            labels: lcount,
        });
    }
    if rows != cols || rows < opts.grid || opts.grid == 0 {
        return Err(AnnError::BadConfig(format!(
            "cannot downsample {rows}x{cols} images to {0}x{0}",
            opts.grid
        )));
    }
    let threshold = f64::from(opts.threshold);
    let mut samples = Vec::new();
    for _ in 0..count {
        if opts.limit.is_some_and(|l| samples.len() >= l) {
            break;
        }
        let img = ir.take(rows * cols)?;
        let digit = lr.take(1)?[0];
        let Some(&(_, label)) = opts.keep.iter().find(|(d, _)| *d == digit) else {
            continue;
        };
        let input = downsample(img, rows, opts.grid)
            .into_iter()
            .map(|v| v >= threshold)
            .collect();
        samples.push(Sample { input, label });
    }
    Ok(Dataset { samples })
}
