use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use roxmltree::{Document, Node};

use super::stages::ScaleConfig;
use crate::datagen::GenConfig;
use crate::endpoint::FftConfig;
use crate::error::{Error, Result};
use crate::fft::Direction;
use crate::filters::{BandpassConfig, DEFAULT_KEEP_FRACTION};
use crate::imageio::{ImageConfig, Scaling};

const MAX_INCLUDE_DEPTH: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StageKind {
    Fft,
    Bandpass,
    Image,
    Scale,
}

impl StageKind {
    pub fn as_str(self) -> &'static str {
        match self {
            StageKind::Fft => "fft",
            StageKind::Bandpass => "bandpass",
            StageKind::Image => "image",
            StageKind::Scale => "scale",
        }
    }
}

impl fmt::Display for StageKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StageConfig {
    Fft(FftConfig),
    Bandpass(BandpassConfig),
    Image(ImageConfig),
    Scale(ScaleConfig),
}

impl StageConfig {
    pub fn kind(&self) -> StageKind {
        match self {
            StageConfig::Fft(_) => StageKind::Fft,
            StageConfig::Bandpass(_) => StageKind::Bandpass,
            StageConfig::Image(_) => StageKind::Image,
            StageConfig::Scale(_) => StageKind::Scale,
        }
    }
}

/// Data source plus the ordered analysis stages it feeds.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineSpec {
    pub source: GenConfig,
    pub stages: Vec<StageConfig>,
}

impl PipelineSpec {
    pub fn validate(&self) -> Result<()> {
        if self.stages.is_empty() {
            return Err(Error::config("pipeline has no analysis stages"));
        }
        self.source.validate()
    }
}

/// Parses a `<sensei>` document; `python_xml` includes resolve against the
/// working directory.
pub fn parse_config(xml_text: &str) -> Result<PipelineSpec> {
    parse_config_in(xml_text, Path::new("."))
}

/// Parses a `<sensei>` document, resolving includes against `base_dir`.
pub fn parse_config_in(xml_text: &str, base_dir: &Path) -> Result<PipelineSpec> {
    let mut builder = Builder::default();
    builder.document(xml_text, base_dir, 0)?;
    let spec = PipelineSpec {
        source: builder.source.unwrap_or_default(),
        stages: builder.stages,
    };
    spec.validate()?;
    Ok(spec)
}

pub fn load_config(path: &Path) -> Result<PipelineSpec> {
    let text = fs::read_to_string(path).map_err(|e| Error::file(path, e))?;
    parse_config_in(&text, path.parent().unwrap_or(Path::new(".")))
}

#[derive(Default)]
struct Builder {
    source: Option<GenConfig>,
    stages: Vec<StageConfig>,
    elements: usize,
}

impl Builder {
    fn document(&mut self, text: &str, base_dir: &Path, depth: usize) -> Result<()> {
        let doc = Document::parse(text).map_err(|e| {
            let pos = e.pos();
            Error::Parse {
                line: pos.row,
                column: pos.col,
                message: e.to_string(),
            }
        })?;
        let root = doc.root_element();
        if root.tag_name().name() != "sensei" {
            return Err(Error::config(format!(
                "root element must be <sensei>, found <{}>",
                root.tag_name().name()
            )));
        }
        for node in root.children().filter(Node::is_element) {
            if node.tag_name().name() != "analysis" {
                return Err(Error::config(format!(
                    "unexpected element <{}> inside <sensei>",
                    node.tag_name().name()
                )));
            }
            let index = self.elements;
            self.elements += 1;
            self.analysis(node, index, base_dir, depth)?;
        }
        Ok(())
    }

    fn analysis(&mut self, node: Node, index: usize, base_dir: &Path, depth: usize) -> Result<()> {
        let untyped = Attrs {
            node,
            label: format!("analysis element {index}"),
        };
        let kind = untyped.required("type")?;
        let attrs = Attrs {
            node,
            label: format!("analysis element {index} (type \"{kind}\")"),
        };
        let stage = match kind {
            "datagen" => {
                if self.source.is_some() {
                    return Err(Error::config(format!(
                        "{}: only one datagen source is allowed",
                        attrs.label
                    )));
                }
                self.source = Some(attrs.gen_config()?);
                None
            }
            "fft" => {
                let direction_name = attrs.required("direction")?;
                let direction = Direction::from_fftw_name(direction_name).ok_or_else(|| {
                    Error::config(format!(
                        "{}: direction must be FFTW_FORWARD or FFTW_BACKWARD, got \"{direction_name}\"",
                        attrs.label
                    ))
                })?;
                let mut cfg =
                    FftConfig::new(attrs.required("mesh")?, attrs.required("array")?, direction);
                cfg.ranks = attrs.parsed_or("ranks", 1usize)?;
                cfg.downstream_config = attrs.optional("python_xml").map(PathBuf::from);
                cfg.validate().map_err(|e| attrs.wrap(e))?;
                Some(StageConfig::Fft(cfg))
            }
            "bandpass" => {
                let cfg = BandpassConfig::new(attrs.required("mesh")?, attrs.required("array")?)
                    .with_keep_fraction(attrs.parsed_or("keep_fraction", DEFAULT_KEEP_FRACTION)?);
                cfg.validate().map_err(|e| attrs.wrap(e))?;
                Some(StageConfig::Bandpass(cfg))
            }
            "image" => {
                let scaling = match attrs.optional("scaling") {
                    None => Scaling::Linear,
                    Some(s) => Scaling::parse(s).ok_or_else(|| {
                        Error::config(format!("{}: unknown scaling \"{s}\"", attrs.label))
                    })?,
                };
                let path = attrs.required("path")?;
                if path.is_empty() {
                    return Err(Error::config(format!(
                        "{}: path must be non-empty",
                        attrs.label
                    )));
                }
                Some(StageConfig::Image(ImageConfig::new(
                    attrs.required("mesh")?,
                    attrs.required("array")?,
                    path,
                    scaling,
                )))
            }
            "scale" => {
                let raw = attrs.required("factor")?;
                let factor = parse_factor(raw).ok_or_else(|| {
                    Error::config(format!("{}: cannot parse factor \"{raw}\"", attrs.label))
                })?;
                Some(StageConfig::Scale(ScaleConfig {
                    mesh_name: attrs.required("mesh")?.to_string(),
                    array_name: attrs.required("array")?.to_string(),
                    factor,
                }))
            }
            other => {
                return Err(Error::config(format!(
                    "analysis element {index}: unknown analysis type \"{other}\""
                )))
            }
        };
        if let Some(stage) = stage {
            self.stages.push(stage);
        }
        if let Some(include) = attrs.optional("python_xml") {
            self.include(include, base_dir, depth)?;
        }
        Ok(())
    }

    fn include(&mut self, include: &str, base_dir: &Path, depth: usize) -> Result<()> {
        if depth + 1 > MAX_INCLUDE_DEPTH {
            return Err(Error::config(format!(
                "python_xml includes nested deeper than {MAX_INCLUDE_DEPTH} levels"
            )));
        }
        let path = base_dir.join(include);
        let text = fs::read_to_string(&path).map_err(|e| Error::file(&path, e))?;
        let next_base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        self.document(&text, &next_base, depth + 1)
    }
}

struct Attrs<'a, 'input> {
    node: Node<'a, 'input>,
    label: String,
}

impl<'a, 'input> Attrs<'a, 'input> {
    fn optional(&self, name: &str) -> Option<&'a str> {
        self.node.attribute(name)
    }

    fn required(&self, name: &str) -> Result<&'a str> {
        self.optional(name).ok_or_else(|| {
            Error::config(format!(
                "{}: missing required attribute \"{name}\"",
                self.label
            ))
        })
    }

    fn parsed<N: FromStr>(&self, name: &str) -> Result<Option<N>> {
        self.optional(name)
            .map(|raw| {
                raw.trim().parse::<N>().map_err(|_| {
                    Error::config(format!(
                        "{}: attribute \"{name}\" has invalid value \"{raw}\"",
                        self.label
                    ))
                })
            })
            .transpose()
    }

    fn parsed_or<N: FromStr>(&self, name: &str, default: N) -> Result<N> {
        Ok(self.parsed(name)?.unwrap_or(default))
    }

    fn wrap(&self, err: Error) -> Error {
        Error::config(format!("{}: {err}", self.label))
    }

    fn gen_config(&self) -> Result<GenConfig> {
        let defaults = GenConfig::default();
        let center = match (self.parsed::<f64>("c0")?, self.parsed::<f64>("c1")?) {
            (Some(a), Some(b)) => Some((a, b)),
            (None, None) => None,
            _ => {
                return Err(Error::config(format!(
                    "{}: c0 and c1 must be given together",
                    self.label
                )))
            }
        };
        let cfg = GenConfig {
            mesh_name: self
                .optional("mesh")
                .unwrap_or(&defaults.mesh_name)
                .to_string(),
            array_name: self
                .optional("array")
                .unwrap_or(&defaults.array_name)
                .to_string(),
            ny0: self.parsed_or("ny0", defaults.ny0)?,
            ny1: self.parsed_or("ny1", defaults.ny1)?,
            center,
            noise_fraction: self.parsed_or("noise_fraction", defaults.noise_fraction)?,
            noise_amplitude: self.parsed("noise_amplitude")?,
            seed: self.parsed_or("seed", defaults.seed)?,
            band_wavelength: self.parsed("band_wavelength")?,
        };
        cfg.validate().map_err(|e| self.wrap(e))?;
        Ok(cfg)
    }
}

/// A decimal number or a `numerator/denominator` fraction.
fn parse_factor(raw: &str) -> Option<f64> {
    let value = match raw.split_once('/') {
        Some((num, den)) => num.trim().parse::<f64>().ok()? / den.trim().parse::<f64>().ok()?,
        None => raw.trim().parse::<f64>().ok()?,
    };
    value.is_finite().then_some(value)
}
