//! Image values, channel handling and lossless file I/O.
//!
//! Pixels are `f64` on the 8-bit intensity scale `[0, 255]`, stored
//! row-major. Color images are three independent grayscale planes; all
//! processing in this crate treats R, G, B separately.
//!
//! Supported file formats are PNG and binary PGM/PPM — both lossless, so
//! `load(save(x))` reproduces `x` exactly for integer-valued images.
//! Lossy formats are rejected at load time.

use std::fmt;
use std::path::{Path, PathBuf};

/// Smallest representable intensity.
pub const MIN_INTENSITY: f64 = 0.0;
/// Largest representable intensity.
pub const MAX_INTENSITY: f64 = 255.0;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// The file could not be opened or decoded.
    #[error("unreadable image file {path}: {reason}")]
    Unreadable { path: PathBuf, reason: String },
    /// The file decoded, but not to 8-bit grayscale or RGB.
    #[error("unsupported image {path}: {detail}")]
    Unsupported { path: PathBuf, detail: String },
    /// A pixel left the valid range where an in-range value was required.
    /// Seeing this on save means an upstream stage failed to clamp.
    #[error("pixel value {value} at index {index} outside [0,255]")]
    OutOfRange { index: usize, value: f64 },
    /// Array lengths or image shapes disagree.
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },
    /// A solver produced NaN or infinity, which signals bad input.
    #[error("non-finite value encountered in {context}")]
    NonFinite { context: &'static str },
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// A single-channel image: `height * width` intensities in row-major order.
///
/// Values are real numbers on the `[0, 255]` scale. Intermediate results
/// may wander outside that range; pipeline outputs never do.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    height: usize,
    width: usize,
    data: Vec<f64>,
}

impl Image {
    /// Wraps raw row-major data. Panics if `data.len() != height * width`
    /// or either dimension is zero.
    pub fn new(height: usize, width: usize, data: Vec<f64>) -> Self {
        assert!(height > 0 && width > 0, "image dimensions must be positive");
        assert_eq!(data.len(), height * width, "data length must be h*w");
        Self {
            height,
            width,
            data,
        }
    }

    /// An image with every pixel set to `value`.
    pub fn filled(height: usize, width: usize, value: f64) -> Self {
        Self::new(height, width, vec![value; height * width])
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Number of pixels.
    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        false // dimensions are always positive
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.width + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        self.data[row * self.width + col] = value;
    }

    /// True when `other` has the same height and width.
    pub fn same_shape(&self, other: &Image) -> bool {
        self.height == other.height && self.width == other.width
    }

    /// Elementwise `min(max(v, lo), hi)`. Requires `lo <= hi`.
    pub fn clamp(&self, lo: f64, hi: f64) -> Image {
        assert!(lo <= hi, "clamp bounds must satisfy lo <= hi");
        let data = self.data.iter().map(|&v| v.clamp(lo, hi)).collect();
        Image::new(self.height, self.width, data)
    }

    /// Mean intensity.
    pub fn mean(&self) -> f64 {
        self.data.iter().sum::<f64>() / self.data.len() as f64
    }

    /// Largest intensity.
    pub fn max(&self) -> f64 {
        self.data.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Smallest intensity.
    pub fn min(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Three grayscale planes of identical shape, in R, G, B order.
#[derive(Debug, Clone, PartialEq)]
pub struct ColorImage {
    channels: [Image; 3],
}

impl ColorImage {
    /// Panics if the channel shapes disagree.
    pub fn new(channels: [Image; 3]) -> Self {
        assert!(
            channels[1].same_shape(&channels[0]) && channels[2].same_shape(&channels[0]),
            "color channels must share dimensions"
        );
        Self { channels }
    }

    pub fn height(&self) -> usize {
        self.channels[0].height()
    }

    pub fn width(&self) -> usize {
        self.channels[0].width()
    }

    pub fn channels(&self) -> &[Image; 3] {
        &self.channels
    }

    pub fn into_channels(self) -> [Image; 3] {
        self.channels
    }

    /// Per-pixel mean of the three channels.
    pub fn to_gray_mean(&self) -> Image {
        let [r, g, b] = &self.channels;
        let data = r
            .data()
            .iter()
            .zip(g.data())
            .zip(b.data())
            .map(|((&r, &g), &b)| (r + g + b) / 3.0)
            .collect();
        Image::new(r.height(), r.width(), data)
    }
}

/// A decoded image file: either one plane or three.
#[derive(Debug, Clone, PartialEq)]
pub enum Picture {
    Gray(Image),
    Rgb(ColorImage),
}

impl Picture {
    pub fn height(&self) -> usize {
        match self {
            Picture::Gray(img) => img.height(),
            Picture::Rgb(img) => img.height(),
        }
    }

    pub fn width(&self) -> usize {
        match self {
            Picture::Gray(img) => img.width(),
            Picture::Rgb(img) => img.width(),
        }
    }
}

impl From<Image> for Picture {
    fn from(img: Image) -> Self {
        Picture::Gray(img)
    }
}

impl From<ColorImage> for Picture {
    fn from(img: ColorImage) -> Self {
        Picture::Rgb(img)
    }
}

impl fmt::Display for Picture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Picture::Gray(img) => write!(f, "gray {}x{}", img.width(), img.height()),
            Picture::Rgb(img) => write!(f, "rgb {}x{}", img.width(), img.height()),
        }
    }
}

fn unreadable(path: &Path, err: impl fmt::Display) -> Error {
    Error::Unreadable {
        path: path.to_path_buf(),
        reason: err.to_string(),
    }
}

/// Loads an 8-bit grayscale or RGB image from a lossless format
/// (PNG, or binary PGM/PPM).
///
/// Pixel values map exactly onto `0.0 ..= 255.0`. Other bit depths,
/// alpha channels and lossy formats are rejected with an explanation.
pub fn load_image<P: AsRef<Path>>(path: P) -> Result<Picture> {
    let path = path.as_ref();
    let reader = ::image::ImageReader::open(path)
        .map_err(|e| unreadable(path, e))?
        .with_guessed_format()
        .map_err(|e| unreadable(path, e))?;

    match reader.format() {
        Some(::image::ImageFormat::Png) | Some(::image::ImageFormat::Pnm) => {}
        Some(other) => {
            return Err(Error::Unsupported {
                path: path.to_path_buf(),
                detail: format!(
                    "format {other:?} is not supported; use PNG or binary PGM/PPM \
                     (lossy formats would break exact round-trips)"
                ),
            })
        }
        None => {
            return Err(Error::Unreadable {
                path: path.to_path_buf(),
                reason: "could not determine image format".into(),
            })
        }
    }

    let decoded = reader.decode().map_err(|e| unreadable(path, e))?;
    match decoded {
        ::image::DynamicImage::ImageLuma8(buf) => {
            let (w, h) = (buf.width() as usize, buf.height() as usize);
            let data = buf.into_raw().into_iter().map(f64::from).collect();
            Ok(Picture::Gray(Image::new(h, w, data)))
        }
        ::image::DynamicImage::ImageRgb8(buf) => {
            let (w, h) = (buf.width() as usize, buf.height() as usize);
            let raw = buf.into_raw();
            let mut planes = [
                Vec::with_capacity(w * h),
                Vec::with_capacity(w * h),
                Vec::with_capacity(w * h),
            ];
            for px in raw.chunks_exact(3) {
                planes[0].push(f64::from(px[0]));
                planes[1].push(f64::from(px[1]));
                planes[2].push(f64::from(px[2]));
            }
            let [r, g, b] = planes;
            Ok(Picture::Rgb(ColorImage::new([
                Image::new(h, w, r),
                Image::new(h, w, g),
                Image::new(h, w, b),
            ])))
        }
        other => Err(Error::Unsupported {
            path: path.to_path_buf(),
            detail: format!(
                "color type {:?} is not 8-bit grayscale or RGB",
                other.color()
            ),
        }),
    }
}

/// Rounds half away from zero, the fixed quantization rule for saving.
#[inline]
pub fn round_intensity(v: f64) -> u8 {
    // f64::round ties away from zero; inputs are validated to [0,255].
    v.round() as u8
}

fn quantize(img: &Image) -> Result<Vec<u8>> {
    img.data()
        .iter()
        .enumerate()
        .map(|(index, &value)| {
            if !(MIN_INTENSITY..=MAX_INTENSITY).contains(&value) {
                Err(Error::OutOfRange { index, value })
            } else {
                Ok(round_intensity(value))
            }
        })
        .collect()
}

/// Writes a picture losslessly. The format comes from the extension:
/// `.png`, `.pgm` (gray) or `.ppm` (color).
///
/// All values must already lie in `[0, 255]`; anything else is reported
/// as an error because it means an upstream stage failed to clamp.
/// Values are rounded half away from zero, so `load(save(x)) == round(x)`.
pub fn save_image<P: AsRef<Path>>(picture: &Picture, path: P) -> Result<()> {
    let path = path.as_ref();
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase)
        .unwrap_or_default();

    let (w, h) = (picture.width() as u32, picture.height() as u32);
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };

    match (picture, ext.as_str()) {
        (Picture::Gray(img), "png" | "pgm") => {
            let bytes = quantize(img)?;
            encode(path, &bytes, w, h, ::image::ExtendedColorType::L8, &ext).map_err(io_err)
        }
        (Picture::Rgb(img), "png" | "ppm") => {
            let [r, g, b] = img.channels();
            let (r, g, b) = (quantize(r)?, quantize(g)?, quantize(b)?);
            let mut raw = Vec::with_capacity(r.len() * 3);
            for i in 0..r.len() {
                raw.push(r[i]);
                raw.push(g[i]);
                raw.push(b[i]);
            }
            encode(path, &raw, w, h, ::image::ExtendedColorType::Rgb8, &ext).map_err(io_err)
        }
        (Picture::Gray(_), "ppm") | (Picture::Rgb(_), "pgm") => Err(Error::Unsupported {
            path: path.to_path_buf(),
            detail: "pgm is grayscale-only and ppm is color-only".into(),
        }),
        _ => Err(Error::Unsupported {
            path: path.to_path_buf(),
            detail: format!("unsupported output extension {ext:?}; use png, pgm or ppm"),
        }),
    }
}

fn encode(
    path: &Path,
    bytes: &[u8],
    w: u32,
    h: u32,
    color: ::image::ExtendedColorType,
    ext: &str,
) -> std::io::Result<()> {
    use ::image::codecs::pnm::{PnmEncoder, PnmSubtype, SampleEncoding};
    use ::image::ImageEncoder;
    use std::io::Write as _;

    let as_io = |e: ::image::ImageError| std::io::Error::other(e.to_string());
    let mut writer = std::io::BufWriter::new(std::fs::File::create(path)?);
    match ext {
        "png" => ::image::codecs::png::PngEncoder::new(&mut writer)
            .write_image(bytes, w, h, color)
            .map_err(as_io)?,
        // Raw (binary) netpbm, P5 for graymaps and P6 for pixmaps.
        _ => {
            let subtype = match color {
                ::image::ExtendedColorType::L8 => PnmSubtype::Graymap(SampleEncoding::Binary),
                _ => PnmSubtype::Pixmap(SampleEncoding::Binary),
            };
            PnmEncoder::new(&mut writer)
                .with_subtype(subtype)
                .write_image(bytes, w, h, color)
                .map_err(as_io)?;
        }
    }
    writer.flush()
}
