use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use eigenanchor::assignment::{
    build_cost_matrix, hungarian_match, polygon_nms, CostParams, MatchInput, MatchOutput, RegressionDistance,
    SamplePrediction,
};
use eigenanchor::baselines::build_codec;
use eigenanchor::codec::{CodeFile, CodecKind, CodecSpec};
use eigenanchor::config::Settings;
use eigenanchor::corpus::{
    self, generate_synthetic, load_annotations, synthesize_raw, AnnotationFormat, Corpus, SynthParams,
};
use eigenanchor::eval::{evaluate, svg_overlay, EvalReport};
use eigenanchor::geometry::{Contour, OriginPolicy, ResampleMode};
use eigenanchor::lra::{learn_basis, EigenanchorBasis};

/// Bad flag combination detected after parsing.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

#[derive(Debug, Parser)]
#[command(name = "eigenanchor", version, about = "Low-rank text contour toolkit")]
pub struct Cli {
    /// TOML file overriding the built-in numeric defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a synthetic text-contour corpus.
    Synth(SynthCmd),
    /// Learn an eigenanchor basis from a corpus.
    Learn(LearnCmd),
    /// Encode contours with a codec.
    Encode(EncodeCmd),
    /// Decode a codes file back to contours.
    Decode(DecodeCmd),
    /// Reconstruction IoU report for one or more codecs.
    Eval(EvalCmd),
    /// Sparse assignment of samples to ground-truth instances.
    Match(MatchCmd),
    /// Polygon non-maximum suppression.
    Nms(NmsCmd),
}

#[derive(Debug, Args)]
struct SynthFlags {
    /// Number of contours.
    #[arg(long)]
    count: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Maximum spine bend in radians.
    #[arg(long)]
    curvature: Option<f64>,
    #[arg(long)]
    aspect_min: Option<f64>,
    #[arg(long)]
    aspect_max: Option<f64>,
    #[arg(long)]
    wave_harmonics: Option<usize>,
    /// Maximum rotation in radians.
    #[arg(long)]
    rotation: Option<f64>,
    #[arg(long)]
    taper: Option<f64>,
    #[arg(long)]
    straight_fraction: Option<f64>,
}

impl SynthFlags {
    fn params(&self) -> SynthParams {
        let d = SynthParams::default();
        SynthParams {
            count: self.count.unwrap_or(d.count),
            aspect_ratio_range: (
                self.aspect_min.unwrap_or(d.aspect_ratio_range.0),
                self.aspect_max.unwrap_or(d.aspect_ratio_range.1),
            ),
            curvature_range: self.curvature.unwrap_or(d.curvature_range),
            wave_harmonics: self.wave_harmonics.unwrap_or(d.wave_harmonics),
            rotation_range: self.rotation.unwrap_or(d.rotation_range),
            taper_range: self.taper.unwrap_or(d.taper_range),
            straight_fraction: self.straight_fraction.unwrap_or(d.straight_fraction),
            seed: self.seed,
            ..d
        }
    }
}

#[derive(Debug, Args)]
struct SynthCmd {
    #[command(flatten)]
    synth: SynthFlags,
    /// Output file; `.json` selects the JSON format, anything else PolyLines.
    #[arg(long)]
    out: PathBuf,
}

/// Where contours come from: an annotation file or the generator.
#[derive(Debug, Args)]
struct CorpusFlags {
    /// Annotation file (PolyLines, or JSON by extension).
    corpus: Option<PathBuf>,
    /// Use a synthetic corpus instead of a file.
    #[arg(long, conflicts_with = "corpus")]
    synthetic: bool,
    #[command(flatten)]
    synth: SynthFlags,
}

#[derive(Debug, Args)]
struct PrepFlags {
    /// Resampled vertex count N.
    #[arg(long)]
    n_vertices: Option<usize>,
    #[arg(long, value_parser = parse_resample)]
    resample: Option<ResampleMode>,
    #[arg(long, value_parser = parse_origin)]
    origin: Option<OriginPolicy>,
}

fn parse_resample(s: &str) -> std::result::Result<ResampleMode, String> {
    s.parse().map_err(|e: eigenanchor::Error| e.to_string())
}

fn parse_origin(s: &str) -> std::result::Result<OriginPolicy, String> {
    s.parse().map_err(|e: eigenanchor::Error| e.to_string())
}

#[derive(Debug, Args)]
struct LearnCmd {
    #[command(flatten)]
    source: CorpusFlags,
    #[command(flatten)]
    prep: PrepFlags,
    /// Eigenanchor count M.
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct EncodeCmd {
    /// Annotation file to encode.
    input: PathBuf,
    /// Codec: `lra:M`, `cheb:K`, `fourier:K` (harmonics) or `bezier`.
    #[arg(long, default_value = "lra")]
    codec: String,
    /// Basis file, required for `lra`.
    #[arg(long)]
    basis: Option<PathBuf>,
    #[command(flatten)]
    prep: PrepFlags,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct DecodeCmd {
    /// Codes file written by `encode`.
    codes: PathBuf,
    #[arg(long)]
    basis: Option<PathBuf>,
    /// Output contours; `.json` selects JSON, anything else PolyLines.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct EvalCmd {
    #[command(flatten)]
    source: CorpusFlags,
    #[command(flatten)]
    prep: PrepFlags,
    /// Basis file for `lra` codecs. Without it a basis is learned from the
    /// evaluated corpus.
    #[arg(long)]
    basis: Option<PathBuf>,
    /// Codecs to compare, e.g. `lra:14,bezier,fourier:5,cheb:44`.
    #[arg(long, value_delimiter = ',')]
    codecs: Vec<String>,
    /// LRA dimensions to sweep, e.g. `10,14,18`.
    #[arg(long, value_delimiter = ',')]
    dims: Vec<usize>,
    #[arg(long)]
    resolution: Option<usize>,
    /// Write the report as CSV here (printed to stdout otherwise).
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Write ground-truth / reconstruction SVG overlays for the first codec.
    #[arg(long)]
    svg_dir: Option<PathBuf>,
    /// Maximum number of SVG overlays.
    #[arg(long, default_value_t = 50)]
    svg_limit: usize,
}

#[derive(Debug, Args)]
struct MatchCmd {
    /// JSON file with `samples` and `instances`.
    input: PathBuf,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    k: Option<usize>,
    /// Run polygon NMS over the matched samples with this threshold.
    #[arg(long)]
    nms_threshold: Option<f64>,
    /// Use coordinate-wise L1 instead of summed vertex distances.
    #[arg(long)]
    l1: bool,
    /// Divide the contour distance by the vertex count.
    #[arg(long)]
    normalize: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct NmsCmd {
    /// JSON file with `samples` (instances are ignored and may be omitted).
    input: PathBuf,
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn run(cli: Cli) -> Result<()> {
    let settings = match &cli.config {
        Some(path) => Settings::load(path).with_context(|| format!("reading config {}", path.display()))?,
        None => Settings::default(),
    };
    match cli.command {
        Command::Synth(c) => synth(c),
        Command::Learn(c) => learn(c, settings),
        Command::Encode(c) => encode(c, settings),
        Command::Decode(c) => decode(c),
        Command::Eval(c) => eval(c, settings),
        Command::Match(c) => run_match(c, settings),
        Command::Nms(c) => nms(c, settings),
    }
}

fn apply_prep(mut s: Settings, p: &PrepFlags) -> Result<Settings> {
    if let Some(n) = p.n_vertices {
        s.n_vertices = n;
    }
    if let Some(r) = p.resample {
        s.resample = r;
    }
    if let Some(o) = p.origin {
        s.origin_policy = o;
    }
    Ok(s)
}

fn write_contours(path: &Path, contours: &[Contour]) -> Result<()> {
    let text = match AnnotationFormat::from_path(path) {
        AnnotationFormat::Json => corpus::write_json(contours)?,
        AnnotationFormat::PolyLines => corpus::write_polylines(contours),
    };
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn load_corpus(src: &CorpusFlags, s: &Settings) -> Result<Corpus> {
    let prep = s.preparation();
    match (&src.corpus, src.synthetic) {
        (Some(path), false) => Ok(load_annotations(path, AnnotationFormat::from_path(path), prep)
            .with_context(|| format!("loading {}", path.display()))?),
        (None, true) => Ok(generate_synthetic(&src.synth.params(), prep)?),
        _ => Err(usage("give a corpus file or --synthetic")),
    }
}

fn synth(c: SynthCmd) -> Result<()> {
    let raws = synthesize_raw(&c.synth.params())?;
    write_contours(&c.out, &raws)?;
    eprintln!("wrote {} contours to {}", raws.len(), c.out.display());
    Ok(())
}

fn learn(c: LearnCmd, settings: Settings) -> Result<()> {
    let mut s = apply_prep(settings, &c.prep)?;
    if let Some(d) = c.dim {
        s.dim = d;
    }
    s.validate()?;
    let corpus = load_corpus(&c.source, &s)?;
    let basis = learn_basis(&corpus, s.dim)?;
    basis
        .save(&c.out)
        .with_context(|| format!("writing {}", c.out.display()))?;
    eprintln!(
        "learned {} eigenanchors from {} contours (N = {}), basis {}",
        basis.dim(),
        corpus.len(),
        basis.n_vertices(),
        basis.id()
    );
    Ok(())
}

fn load_basis(path: Option<&PathBuf>) -> Result<Option<EigenanchorBasis>> {
    path.map(|p| EigenanchorBasis::load(p).with_context(|| format!("loading basis {}", p.display())))
        .transpose()
}

/// Codec spec from a user string. A bare `lra` takes its size from the basis.
fn codec_spec(text: &str, n_vertices: usize, basis: Option<&EigenanchorBasis>) -> Result<CodecSpec> {
    if text == "lra" {
        let b = basis.ok_or_else(|| usage("the lra codec needs --basis"))?;
        return Ok(CodecSpec::new(CodecKind::Lra, b.dim(), n_vertices)?);
    }
    Ok(CodecSpec::parse(text, n_vertices)?)
}

fn encode(c: EncodeCmd, settings: Settings) -> Result<()> {
    let basis = load_basis(c.basis.as_ref())?;
    let mut s = apply_prep(settings, &c.prep)?;
    if let Some(b) = &basis {
        if c.prep.n_vertices.is_some_and(|n| n != b.n_vertices()) {
            return Err(usage("--n-vertices disagrees with the basis"));
        }
        s.n_vertices = b.n_vertices();
        s.resample = b.preparation().resample;
        s.origin_policy = b.preparation().origin_policy;
    }
    let spec = codec_spec(&c.codec, s.n_vertices, basis.as_ref())?;
    let codec = build_codec(spec, s.preparation(), basis.as_ref())?;
    let raws = corpus::read_raw(&c.input, AnnotationFormat::from_path(&c.input))?;
    let codes = raws
        .iter()
        .map(|r| codec.encode(r))
        .collect::<eigenanchor::Result<Vec<_>>>()?;
    let basis_id = match (spec.kind, &basis) {
        (CodecKind::Lra, Some(b)) => Some(b.truncated(spec.dim)?.id().to_string()),
        _ => None,
    };
    let file = CodeFile::new(spec, basis_id, &codes);
    fs::write(&c.out, file.to_json()? + "\n").with_context(|| format!("writing {}", c.out.display()))?;
    eprintln!("encoded {} contours with {spec}", codes.len());
    Ok(())
}

fn decode(c: DecodeCmd) -> Result<()> {
    let text = fs::read_to_string(&c.codes).with_context(|| format!("reading {}", c.codes.display()))?;
    let file = CodeFile::from_json(&text)?;
    let basis = load_basis(c.basis.as_ref())?;
    let spec = CodecSpec::parse(&file.codec, file.n_vertices)?;
    let mut prep = eigenanchor::geometry::Preparation {
        n_vertices: file.n_vertices,
        ..Default::default()
    };
    if let Some(b) = &basis {
        prep = b.preparation();
    }
    let codec = build_codec(spec, prep, basis.as_ref())?;
    if spec.kind == CodecKind::Lra {
        let b = basis.as_ref().expect("build_codec checked the basis");
        let id = b.truncated(spec.dim)?.id().to_string();
        match &file.basis_id {
            Some(found) if *found == id => {}
            found => {
                return Err(eigenanchor::Error::BasisMismatch {
                    expected: id,
                    found: found.clone().unwrap_or_else(|| "none".into()),
                }
                .into())
            }
        }
    }
    let contours = file
        .shape_codes()
        .iter()
        .map(|code| codec.decode(code))
        .collect::<eigenanchor::Result<Vec<_>>>()?;
    write_contours(&c.out, &contours)?;
    eprintln!("decoded {} contours", contours.len());
    Ok(())
}

fn eval(c: EvalCmd, settings: Settings) -> Result<()> {
    let mut s = apply_prep(settings, &c.prep)?;
    if let Some(r) = c.resolution {
        s.resolution = r;
    }
    let basis = load_basis(c.basis.as_ref())?;
    if let Some(b) = &basis {
        s.n_vertices = b.n_vertices();
        s.resample = b.preparation().resample;
        s.origin_policy = b.preparation().origin_policy;
    }
    s.validate()?;
    let corpus = load_corpus(&c.source, &s)?;

    let mut specs: Vec<CodecSpec> = Vec::new();
    for text in &c.codecs {
        specs.push(codec_spec(text, s.n_vertices, basis.as_ref())?);
    }
    for &d in &c.dims {
        specs.push(CodecSpec::new(CodecKind::Lra, d, s.n_vertices)?);
    }
    if specs.is_empty() {
        specs.push(CodecSpec::new(CodecKind::Lra, s.dim, s.n_vertices)?);
    }
    let max_lra = specs.iter().filter(|p| p.kind == CodecKind::Lra).map(|p| p.dim).max();
    let basis = match (basis, max_lra) {
        (Some(b), Some(m)) if m > b.dim() => bail!(UsageError(format!(
            "basis has {} eigenanchors, lra:{m} requested",
            b.dim()
        ))),
        (Some(b), _) => Some(b),
        (None, Some(m)) => Some(learn_basis(&corpus, m)?),
        (None, None) => None,
    };

    let mut report = EvalReport::default();
    for (i, spec) in specs.iter().enumerate() {
        let codec = build_codec(*spec, s.preparation(), basis.as_ref())?;
        report.push(evaluate(codec.as_ref(), corpus.raw(), s.resolution)?);
        if i == 0 {
            if let Some(dir) = &c.svg_dir {
                fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
                for (j, raw) in corpus.raw().iter().take(c.svg_limit).enumerate() {
                    let rebuilt = codec.decode(&codec.encode(raw)?)?;
                    let name = format!("{}_{:05}.svg", spec.to_string().replace(':', "-"), j);
                    fs::write(dir.join(name), svg_overlay(raw, &rebuilt))?;
                }
            }
        }
    }
    let csv = report.to_csv()?;
    match &c.csv {
        Some(path) => fs::write(path, &csv).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{csv}"),
    }
    Ok(())
}

fn emit(out: Option<&PathBuf>, text: String) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text + "\n").with_context(|| format!("writing {}", p.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn read_match_input(path: &Path) -> Result<MatchInput> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(MatchInput::from_json(&text)?)
}

fn run_match(c: MatchCmd, mut s: Settings) -> Result<()> {
    if let Some(l) = c.lambda {
        s.lambda = l;
    }
    if let Some(k) = c.k {
        s.k = k;
    }
    if let Some(t) = c.nms_threshold {
        s.nms_threshold = t;
    }
    s.validate()?;
    let (samples, instances) = read_match_input(&c.input)?.decode()?;
    let params = CostParams {
        lambda: s.lambda,
        k: s.k,
        epsilon: s.epsilon,
        alpha: s.focal_alpha,
        gamma: s.focal_gamma,
        distance: if c.l1 {
            RegressionDistance::CoordinateL1
        } else {
            RegressionDistance::VertexEuclidean
        },
        normalize_by_vertices: c.normalize,
    };
    let matrix = build_cost_matrix(&samples, &instances, &params)?;
    let result = hungarian_match(&matrix)?;
    let mut out = MatchOutput::from(&result);
    if c.nms_threshold.is_some() {
        let matched: Vec<usize> = result.pairs.iter().map(|p| p.0).collect();
        let preds: Vec<SamplePrediction> = matched.iter().map(|&i| samples[i].clone()).collect();
        let kept = polygon_nms(&preds, s.nms_threshold, s.resolution)?;
        out.kept_after_nms = Some(kept.into_iter().map(|i| matched[i]).collect());
    }
    emit(c.out.as_ref(), serde_json::to_string_pretty(&out)?)
}

#[derive(serde::Serialize)]
struct NmsOutput {
    kept: Vec<usize>,
}

fn nms(c: NmsCmd, mut s: Settings) -> Result<()> {
    if let Some(t) = c.threshold {
        s.nms_threshold = t;
    }
    s.validate()?;
    let text = fs::read_to_string(&c.input).with_context(|| format!("reading {}", c.input.display()))?;
    let mut value: serde_json::Value = serde_json::from_str(&text).map_err(eigenanchor::Error::from)?;
    if value.get("instances").is_none() {
        value["instances"] = serde_json::json!([]);
    }
    let input: MatchInput = serde_json::from_value(value).map_err(eigenanchor::Error::from)?;
    let (samples, _) = input.decode()?;
    let kept = polygon_nms(&samples, s.nms_threshold, s.resolution)?;
    emit(c.out.as_ref(), serde_json::to_string_pretty(&NmsOutput { kept })?)
}
