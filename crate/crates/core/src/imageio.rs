//! Grayscale raster sink: binary PGM (P5, maxval 255).
//!
//! Each image is min-max normalised on its own: `round(255 (v - min) / (max - min))`,
//! with a constant field rendering as all zeros. Grid row `i` is pixel row `i`.

use std::fs;
use std::path::{Path, PathBuf};

use crate::endpoint::check_mesh_name;
use crate::error::{Error, Result};
use crate::filters::display_magnitude;
use crate::grid::{Field, FieldKind, Mesh};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scaling {
    /// Real field, values rendered as is.
    Linear,
    /// Complex field rendered as `log(1 + |z|)`.
    LogMagnitude,
    /// Complex field rendered by its real part.
    RealPart,
}

impl Scaling {
    pub fn parse(name: &str) -> Option<Scaling> {
        match name {
            "linear" => Some(Scaling::Linear),
            "log_magnitude" | "log" => Some(Scaling::LogMagnitude),
            "real" | "real_part" => Some(Scaling::RealPart),
            _ => None,
        }
    }

    fn required_kind(self) -> FieldKind {
        match self {
            Scaling::Linear => FieldKind::Real,
            Scaling::LogMagnitude | Scaling::RealPart => FieldKind::Complex,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImageConfig {
    pub mesh_name: String,
    pub array_name: String,
    pub path: PathBuf,
    pub scaling: Scaling,
}

impl ImageConfig {
    pub fn new(
        mesh_name: impl Into<String>,
        array_name: impl Into<String>,
        path: impl Into<PathBuf>,
        scaling: Scaling,
    ) -> Self {
        ImageConfig {
            mesh_name: mesh_name.into(),
            array_name: array_name.into(),
            path: path.into(),
            scaling,
        }
    }
}

/// Min-max normalisation to bytes.
pub fn normalize_to_bytes(values: &[f64]) -> Vec<u8> {
    let (min, max) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    if max <= min {
        return vec![0; values.len()];
    }
    let span = max - min;
    values
        .iter()
        .map(|&v| (255.0 * (v - min) / span).round().clamp(0.0, 255.0) as u8)
        .collect()
}

/// Pixel bytes for `field` under `scaling`.
pub fn render<T: Scalar>(field: &Field<T>, scaling: Scaling) -> Result<Vec<u8>> {
    if field.kind() != scaling.required_kind() {
        return Err(Error::Kind(format!(
            "{scaling:?} rendering needs a {} field, \"{}\" is {}",
            scaling.required_kind(),
            field.name(),
            field.kind()
        )));
    }
    let values: Vec<f64> = match scaling {
        Scaling::Linear => field
            .as_real()?
            .iter()
            .map(|v| v.to_f64_lossless())
            .collect(),
        Scaling::LogMagnitude => display_magnitude(field)?
            .as_real()?
            .iter()
            .map(|v| v.to_f64_lossless())
            .collect(),
        Scaling::RealPart => field
            .as_complex()?
            .iter()
            .map(|z| z.re.to_f64_lossless())
            .collect(),
    };
    Ok(normalize_to_bytes(&values))
}

pub fn encode_pgm(width: usize, height: usize, pixels: &[u8]) -> Result<Vec<u8>> {
    if pixels.len() != width * height {
        return Err(Error::dimension(format!(
            "{} pixels for a {width}x{height} image",
            pixels.len()
        )));
    }
    let mut out = format!("P5\n{width} {height}\n255\n").into_bytes();
    out.extend_from_slice(pixels);
    Ok(out)
}

/// Decoded binary PGM: width, height, maxval and raw samples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pgm {
    pub width: usize,
    pub height: usize,
    pub maxval: u16,
    pub pixels: Vec<u8>,
}

/// Parses an 8-bit P5 image. `#` comments are allowed in the header.
pub fn decode_pgm(bytes: &[u8]) -> Result<Pgm> {
    let mut pos = 0;
    let mut tokens = Vec::with_capacity(4);
    while tokens.len() < 4 {
        while pos < bytes.len() && (bytes[pos].is_ascii_whitespace() || bytes[pos] == b'#') {
            if bytes[pos] == b'#' {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
            } else {
                pos += 1;
            }
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() && bytes[pos] != b'#' {
            pos += 1;
        }
        if start == pos {
            return Err(Error::Format("truncated PGM header".into()));
        }
        tokens.push(String::from_utf8_lossy(&bytes[start..pos]).into_owned());
    }
    if tokens[0] != "P5" {
        return Err(Error::Format(format!(
            "expected P5 magic, found {:?}",
            tokens[0]
        )));
    }
    let number = |s: &str, what: &str| {
        s.parse::<usize>()
            .map_err(|_| Error::Format(format!("bad {what} {s:?} in PGM header")))
    };
    let width = number(&tokens[1], "width")?;
    let height = number(&tokens[2], "height")?;
    let maxval = number(&tokens[3], "maxval")?;
    if maxval == 0 || maxval > 255 {
        return Err(Error::Format(format!("unsupported maxval {maxval}")));
    }
    // exactly one whitespace byte separates the header from the raster
    pos += 1;
    let payload = bytes.get(pos..).unwrap_or_default();
    if payload.len() != width * height {
        return Err(Error::Format(format!(
            "expected {} raster bytes, found {}",
            width * height,
            payload.len()
        )));
    }
    Ok(Pgm {
        width,
        height,
        maxval: maxval as u16,
        pixels: payload.to_vec(),
    })
}

/// Reads a PGM into a real field of raw sample values (`ny0` = height).
pub fn read_pgm<T: Scalar>(path: &Path, name: &str) -> Result<Field<T>> {
    let bytes = fs::read(path).map_err(|e| Error::file(path, e))?;
    let pgm = decode_pgm(&bytes)?;
    Field::real(
        name,
        pgm.height,
        pgm.width,
        pgm.pixels.iter().map(|&p| T::of(f64::from(p))).collect(),
    )
}

pub fn write_field<T: Scalar>(field: &Field<T>, scaling: Scaling, path: &Path) -> Result<PathBuf> {
    let pixels = render(field, scaling)?;
    let bytes = encode_pgm(field.ny1(), field.ny0(), &pixels)?;
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::file(parent, e))?;
    }
    fs::write(path, bytes).map_err(|e| Error::file(path, e))?;
    Ok(path.to_path_buf())
}

/// Renders `config.array_name` of `mesh` to `config.path`.
pub fn write_image<T: Scalar>(mesh: &Mesh<T>, config: &ImageConfig) -> Result<PathBuf> {
    if config.path.as_os_str().is_empty() {
        return Err(Error::config("image path must be non-empty"));
    }
    check_mesh_name(mesh, &config.mesh_name)?;
    let field = mesh.get_field(&config.array_name)?;
    write_field(field, config.scaling, &config.path)
}
