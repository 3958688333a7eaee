//! Batch front-end: run configuration, command dispatch and report emission.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::arith::{fmt_q, parse_q, Q};
use crate::character::{Alpha, Character, DegreeBound};
use crate::diagram::sample::sample_connected;
use crate::diagram::Diagram;
use crate::endalg::{generic_points, nilpotent_trace_check, NilpotentVerdict, QuotientAlgebra};
use crate::enumerate::{enumerate, Enumerator};
use crate::error::{Error, Result};
use crate::goodness::{check_goodness, check_loyal, GoodnessConfig, Verdict, RANDOM_ENDOMORPHISMS};
use crate::gram::{dual_set, gram_report, hom_dim, Gram};
use crate::presets::{list_presets, PresetBundle, PresetName, PresetParams};
use crate::realize::ModelFile;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

const DEFAULT_SERIES_N: usize = 12;
const DEFAULT_R_MAX: usize = 6;
const DEFAULT_SAMPLES: usize = 10;
const DEFAULT_SAMPLE_BOXES: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Gram,
    Homdims,
    Goodness,
    Chareval,
    Simples,
    Loyal,
    Interpolate,
    Enumerate,
    Presets,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// A JSON number or string holding a rational.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Int(i64),
    Text(String),
}

impl Scalar {
    fn to_q(&self) -> Result<Q> {
        match self {
            Scalar::Int(n) => Ok(crate::arith::q(*n)),
            Scalar::Text(s) => parse_q(s).ok_or_else(|| Error::Parse(format!("not a rational: {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Cutoffs {
    pub max_boxes: Option<usize>,
    pub pq_list: Vec<(usize, usize)>,
    #[serde(alias = "N")]
    pub n: Option<usize>,
    pub r_max: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PresetParamSpec {
    pub t: Option<String>,
    pub lambdas: Option<Vec<Scalar>>,
    pub alpha: Option<Vec<Scalar>>,
    pub r: Option<usize>,
    pub prime: Option<u64>,
    pub base_model: Option<PathBuf>,
}

impl PresetParamSpec {
    fn is_empty(&self) -> bool {
        *self == PresetParamSpec::default()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterpolateSpec {
    pub points: Vec<Scalar>,
    /// Preset whose model family supplies the structures.
    pub model: String,
    #[serde(default)]
    pub degree_bound: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CharacterSpec {
    pub preset: Option<String>,
    #[serde(skip_serializing_if = "PresetParamSpec::is_empty")]
    pub params: PresetParamSpec,
    pub interpolate: Option<InterpolateSpec>,
    pub model_file: Option<PathBuf>,
}

/// Everything one run needs; loaded from JSON and overridden by flags.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<Command>,
    pub preset: Option<String>,
    pub character: Option<CharacterSpec>,
    pub enumerator: Option<String>,
    /// Specialization points: `"generic"`, `"7"`, or `"2,4"` for several parameters.
    pub t: Vec<String>,
    pub cutoffs: Cutoffs,
    pub alpha: Option<Vec<Scalar>>,
    pub alpha_file: Option<PathBuf>,
    pub diagrams: Vec<String>,
    pub samples: Option<usize>,
    pub seed: u64,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }
}

/// Overall result of a run, mapped to the process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Ok,
    Fail,
    Inconclusive,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Ok => 0,
            Outcome::Fail => 2,
            Outcome::Inconclusive => 3,
        }
    }

    fn worst(self, o: Outcome) -> Outcome {
        match (self, o) {
            (Outcome::Fail, _) | (_, Outcome::Fail) => Outcome::Fail,
            (Outcome::Inconclusive, _) | (_, Outcome::Inconclusive) => Outcome::Inconclusive,
            _ => Outcome::Ok,
        }
    }
}

/// Exit status for an error that aborted the run.
pub fn error_exit_code(e: &Error) -> i32 {
    match e {
        Error::Inconsistent(_) | Error::NonMonomial(_) => 2,
        Error::Budget(_) => 3,
        _ => 1,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunOutput {
    pub outcome: Outcome,
    pub text: String,
}

// ---------------------------------------------------------------- resolution

#[derive(Clone, Debug, PartialEq)]
enum Point {
    Generic,
    At(Vec<Q>),
}

impl Point {
    fn label(&self) -> String {
        match self {
            Point::Generic => "generic".into(),
            Point::At(v) if v.is_empty() => "-".into(),
            Point::At(v) => v.iter().map(fmt_q).collect::<Vec<_>>().join(","),
        }
    }
}

struct Context {
    chi: Arc<Character>,
    enumerator: Enumerator,
    cutoff: usize,
}

fn parse_list(text: &str) -> Result<Vec<Q>> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| parse_q(s).ok_or_else(|| Error::Parse(format!("not a rational: {s:?}"))))
        .collect()
}

fn read_list_file(path: &Path) -> Result<Vec<Q>> {
    let text = std::fs::read_to_string(path)?;
    let body: String = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .collect::<Vec<_>>()
        .join("\n");
    parse_list(&body)
}

fn scalars(v: &[Scalar]) -> Result<Vec<Q>> {
    v.iter().map(Scalar::to_q).collect()
}

fn alpha_values(cfg: &RunConfig) -> Result<Option<Vec<Q>>> {
    if let Some(a) = &cfg.alpha {
        return scalars(a).map(Some);
    }
    if let Some(p) = &cfg.alpha_file {
        return read_list_file(p).map(Some);
    }
    match cfg.character.as_ref().and_then(|c| c.params.alpha.as_ref()) {
        Some(a) => scalars(a).map(Some),
        None => Ok(None),
    }
}

fn preset_params(name: PresetName, cfg: &RunConfig) -> Result<PresetParams> {
    let spec = cfg.character.as_ref().map(|c| c.params.clone()).unwrap_or_default();
    Ok(match name {
        PresetName::Endo => match &spec.lambdas {
            Some(l) => PresetParams::Endo { lambdas: scalars(l)? },
            None => PresetParams::None,
        },
        PresetName::Frobenius => match alpha_values(cfg)? {
            Some(a) => PresetParams::Frobenius { alpha: Alpha::list(a) },
            None => PresetParams::None,
        },
        PresetName::Wreath => match &spec.base_model {
            Some(p) => PresetParams::Wreath {
                base: Box::new(ModelFile::load(p)?.to_model(None)?),
            },
            None => PresetParams::None,
        },
        PresetName::Dvr if spec.r.is_some() || spec.prime.is_some() => PresetParams::Dvr {
            r: spec.r.unwrap_or(2),
            prime: spec.prime.unwrap_or(2),
        },
        _ => PresetParams::None,
    })
}

fn preset_name(cfg: &RunConfig) -> Option<String> {
    cfg.character
        .as_ref()
        .and_then(|c| c.preset.clone())
        .or_else(|| cfg.preset.clone())
}

fn resolve(cfg: &RunConfig) -> Result<Context> {
    let spec = cfg.character.clone().unwrap_or_default();
    let (chi, default_enum, default_cutoff) = if let Some(path) = &spec.model_file {
        let m = ModelFile::load(path)?.to_model(None)?;
        (Character::from_model(&m), Enumerator::Generic, 2)
    } else if let Some(ip) = &spec.interpolate {
        let b = PresetBundle::by_name(&ip.model)?;
        let bound: DegreeBound = ip.degree_bound.as_deref().unwrap_or("wires").parse()?;
        let pts = scalars(&ip.points)?
            .into_iter()
            .map(|x| {
                let n = x
                    .to_integer()
                    .try_into()
                    .ok()
                    .filter(|_| x.is_integer())
                    .ok_or_else(|| Error::InvalidParams(format!("interpolation point {x} is not a natural number")))?;
                Ok((x, b.model_at(&[n])?))
            })
            .collect::<Result<Vec<_>>>()?;
        let chi = Character::interpolate(pts, bound)?;
        (chi, b.enumerator, b.cutoff)
    } else {
        let name: PresetName = preset_name(cfg)
            .ok_or_else(|| Error::InvalidParams("no preset or character given".into()))?
            .parse()?;
        let b = PresetBundle::new(name, preset_params(name, cfg)?)?;
        let chi = b.character()?;
        (chi, b.enumerator, b.cutoff)
    };
    let enumerator = match &cfg.enumerator {
        Some(s) => s.parse()?,
        None => default_enum,
    };
    Ok(Context {
        chi,
        enumerator,
        cutoff: cfg.cutoffs.max_boxes.unwrap_or(default_cutoff),
    })
}

fn points(cfg: &RunConfig, chi: &Character) -> Result<Vec<Point>> {
    let mut raw = cfg.t.clone();
    if raw.is_empty() {
        if let Some(t) = cfg.character.as_ref().and_then(|c| c.params.t.clone()) {
            raw.push(t);
        }
    }
    if raw.is_empty() {
        raw.push("generic".into());
    }
    let n = chi.params().len();
    raw.iter()
        .map(|s| {
            if s.trim() == "generic" {
                return Ok(if n == 0 { Point::At(Vec::new()) } else { Point::Generic });
            }
            let v = parse_list(s)?;
            if v.len() != n {
                return Err(Error::InvalidParams(format!(
                    "point {s:?} has {} values, character parameters are {:?}",
                    v.len(),
                    chi.params()
                )));
            }
            Ok(Point::At(v))
        })
        .collect()
}

fn numeric_character(cfg: &RunConfig, chi: &Arc<Character>) -> Result<(Arc<Character>, Point)> {
    let pts = points(cfg, chi)?;
    match pts.as_slice() {
        [Point::At(v)] => Ok((if v.is_empty() { chi.clone() } else { chi.specialize(v)? }, Point::At(v.clone()))),
        _ => Err(Error::InvalidParams(format!(
            "this command needs one numeric value for the parameters {:?} (use --t)",
            chi.params()
        ))),
    }
}

fn sweep(kind: Enumerator, top: usize) -> Vec<usize> {
    match kind {
        Enumerator::Generic | Enumerator::Cobordism if top > 0 => vec![top - 1, top],
        _ => vec![top],
    }
}

fn pq_list(cfg: &RunConfig, default: &[(usize, usize)]) -> Vec<(usize, usize)> {
    if cfg.cutoffs.pq_list.is_empty() {
        default.to_vec()
    } else {
        cfg.cutoffs.pq_list.clone()
    }
}

fn random_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<Q> {
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        out.extend(generic_points(rng));
    }
    out.truncate(n);
    out
}

/// Ranks at three random points compared against the exact generic rank.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
struct GenericCheck {
    points: Vec<Vec<String>>,
    ranks: Vec<usize>,
    agree: bool,
}

fn generic_check(
    exact: Option<usize>,
    rng: &mut ChaCha8Rng,
    nparams: usize,
    mut rank_at: impl FnMut(&[Q]) -> Result<usize>,
) -> Result<GenericCheck> {
    let pts: Vec<Vec<Q>> = (0..3).map(|_| random_point(rng, nparams)).collect();
    let ranks = pts.iter().map(|p| rank_at(p)).collect::<Result<Vec<_>>>()?;
    let reference = exact.unwrap_or(ranks[0]);
    Ok(GenericCheck {
        points: pts.iter().map(|p| p.iter().map(fmt_q).collect()).collect(),
        agree: ranks.iter().all(|&r| r == reference),
        ranks,
    })
}

// ------------------------------------------------------------------ commands

struct Produced {
    outcome: Outcome,
    provenance: Vec<String>,
    result: Value,
    table: Vec<Vec<String>>,
}

fn to_value<T: Serialize>(x: &T) -> Result<Value> {
    Ok(serde_json::to_value(x)?)
}

fn cmd_gram(cfg: &RunConfig) -> Result<Produced> {
    let ctx = resolve(cfg)?;
    let chi = &ctx.chi;
    let pts = points(cfg, chi)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut outcome = Outcome::Ok;
    let mut entries = Vec::new();
    let mut table = vec![header(&pts)];
    for (p, q) in pq_list(cfg, &[(1, 1)]) {
        let set = enumerate(ctx.enumerator, chi.signature(), p, q, ctx.cutoff)?;
        let dual = dual_set(&set)?;
        let mut row = vec![p.to_string(), q.to_string()];
        for pt in &pts {
            let (report, check) = match pt {
                Point::At(v) => (gram_report(&set, &dual, chi, if v.is_empty() { None } else { Some(v) })?, None),
                Point::Generic if chi.params().len() == 1 => {
                    let rep = gram_report(&set, &dual, chi, None)?;
                    let g = Gram::compute(&set.diagrams, &dual.diagrams, chi)?;
                    let check = generic_check(Some(rep.generic_rank), &mut rng, 1, |v| g.rank_at(v))?;
                    (rep, Some(check))
                }
                Point::Generic => {
                    let g = Gram::compute(&set.diagrams, &dual.diagrams, chi)?;
                    let check = generic_check(None, &mut rng, chi.params().len(), |v| g.rank_at(v))?;
                    let first: Vec<Q> = check.points[0].iter().map(|s| parse_q(s).expect("formatted")).collect();
                    let mut rep = gram_report(&set, &dual, chi, Some(&first))?;
                    rep.specialization = None;
                    rep.radical_basis.clear();
                    (rep, Some(check))
                }
            };
            if check.as_ref().is_some_and(|c| !c.agree) {
                outcome = outcome.worst(Outcome::Inconclusive);
            }
            row.push(report.generic_rank.to_string());
            entries.push(json!({
                "p": p,
                "q": q,
                "point": pt.label(),
                "size": set.len(),
                "report": to_value(&report)?,
                "generic_check": to_value(&check)?,
            }));
        }
        table.push(row);
    }
    Ok(Produced {
        outcome,
        provenance: vec![format!(
            "ranks: exact Gram elimination on the {} spanning set (cutoff {}), character {}",
            ctx.enumerator,
            ctx.cutoff,
            chi.provenance()
        )],
        result: Value::Array(entries),
        table,
    })
}

fn header(pts: &[Point]) -> Vec<String> {
    let mut h = vec!["p".to_string(), "q".to_string()];
    h.extend(pts.iter().map(Point::label));
    h
}

fn cmd_homdims(cfg: &RunConfig) -> Result<Produced> {
    let ctx = resolve(cfg)?;
    let chi = &ctx.chi;
    let pts = points(cfg, chi)?;
    let cutoffs = sweep(ctx.enumerator, ctx.cutoff);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut outcome = Outcome::Ok;
    let mut rows = Vec::new();
    let mut table = vec![header(&pts)];
    for (p, q) in pq_list(cfg, &[(1, 1), (2, 2)]) {
        let mut cells = Vec::new();
        let mut row = vec![p.to_string(), q.to_string()];
        for pt in &pts {
            let (dim, sat, check) = match pt {
                Point::At(v) => {
                    let (d, s) = hom_dim(ctx.enumerator, chi, p, q, &cutoffs, if v.is_empty() { None } else { Some(v) })?;
                    (d, s, None)
                }
                Point::Generic => {
                    let exact = if chi.params().len() == 1 {
                        Some(hom_dim(ctx.enumerator, chi, p, q, &cutoffs, None)?)
                    } else {
                        None
                    };
                    let mut last_sat = None;
                    let check = generic_check(exact.as_ref().map(|e| e.0), &mut rng, chi.params().len(), |v| {
                        let (d, s) = hom_dim(ctx.enumerator, chi, p, q, &cutoffs, Some(v))?;
                        last_sat.get_or_insert(s);
                        Ok(d)
                    })?;
                    match exact {
                        Some((d, s)) => (d, s, Some(check)),
                        None => (check.ranks[0], last_sat.expect("three points"), Some(check)),
                    }
                }
            };
            if !sat.saturated || check.as_ref().is_some_and(|c| !c.agree) {
                outcome = outcome.worst(Outcome::Inconclusive);
            }
            row.push(dim.to_string());
            cells.push(json!({
                "point": pt.label(),
                "dim": dim,
                "saturation": to_value(&sat)?,
                "generic_check": to_value(&check)?,
            }));
        }
        table.push(row);
        rows.push(json!({"p": p, "q": q, "values": cells}));
    }
    Ok(Produced {
        outcome,
        provenance: vec![format!(
            "dimensions: Gram rank on the {} spanning set, cutoffs {:?}, character {}",
            ctx.enumerator,
            cutoffs,
            chi.provenance()
        )],
        result: Value::Array(rows),
        table,
    })
}

fn cmd_goodness(cfg: &RunConfig) -> Result<Produced> {
    let ctx = resolve(cfg)?;
    let (chi, pt) = numeric_character(cfg, &ctx.chi)?;
    let default_pq: &[(usize, usize)] = if ctx.enumerator == Enumerator::Cobordism {
        &[(1, 1)]
    } else {
        &[(1, 1), (2, 2)]
    };
    let gc = GoodnessConfig {
        enumerator: ctx.enumerator,
        pq_list: pq_list(cfg, default_pq),
        cutoffs: sweep(ctx.enumerator, ctx.cutoff),
        n: cfg.cutoffs.n.unwrap_or(DEFAULT_SERIES_N),
        random_samples: cfg.samples.unwrap_or(RANDOM_ENDOMORPHISMS),
        seed: cfg.seed,
    };
    let rep = check_goodness(&chi, &gc)?;
    let outcome = match rep.verdict {
        Verdict::Pass => Outcome::Ok,
        Verdict::Fail => Outcome::Fail,
        Verdict::Inconclusive => Outcome::Inconclusive,
    };
    let mut table = vec![vec!["p".into(), "q".into(), "dim".into(), "saturated".into()]];
    for r in &rep.saturation {
        table.push(vec![
            r.p.to_string(),
            r.q.to_string(),
            r.dim.to_string(),
            r.saturation.saturated.to_string(),
        ]);
    }
    Ok(Produced {
        outcome,
        provenance: vec![
            format!(
                "saturation: Gram ranks on the {} spanning set, cutoffs {:?}, at {}",
                gc.enumerator,
                gc.cutoffs,
                pt.label()
            ),
            format!(
                "trace series: {} terms, rational fits confirmed by {} surplus coefficients",
                gc.n + 1,
                crate::goodness::SURPLUS_TERMS
            ),
        ],
        result: json!({"config": to_value(&gc)?, "report": to_value(&rep)?}),
        table,
    })
}

fn sample_or_parse(cfg: &RunConfig, chi: &Character) -> Result<Vec<Diagram>> {
    if !cfg.diagrams.is_empty() {
        return cfg.diagrams.iter().map(|s| Diagram::parse(chi.signature(), s)).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    Ok(sample_connected(
        chi.signature(),
        cfg.samples.unwrap_or(DEFAULT_SAMPLES),
        cfg.cutoffs.max_boxes.unwrap_or(DEFAULT_SAMPLE_BOXES),
        &mut rng,
    ))
}

fn evaluation_table(chi: &Arc<Character>, pts: &[Point], ds: &[Diagram]) -> Result<(Value, Vec<Vec<String>>)> {
    let specialized = pts
        .iter()
        .map(|p| match p {
            Point::At(v) if !v.is_empty() => chi.specialize(v),
            _ => Ok(chi.clone()),
        })
        .collect::<Result<Vec<_>>>()?;
    let labels: Vec<String> = pts
        .iter()
        .map(|p| match p {
            Point::Generic => "symbolic".to_string(),
            p => p.label(),
        })
        .collect();
    let mut table = vec![std::iter::once("diagram".to_string()).chain(labels.iter().cloned()).collect::<Vec<_>>()];
    let mut rows = Vec::new();
    for d in ds {
        let vals = specialized
            .iter()
            .map(|c| Ok(c.evaluate(d)?.fmt_with(c.params())))
            .collect::<Result<Vec<String>>>()?;
        let lit = d.to_literal();
        table.push(std::iter::once(lit.clone()).chain(vals.iter().cloned()).collect());
        rows.push(json!({
            "diagram": lit,
            "values": labels.iter().zip(&vals).map(|(l, v)| json!({"point": l, "value": v})).collect::<Vec<_>>(),
        }));
    }
    Ok((Value::Array(rows), table))
}

fn cmd_chareval(cfg: &RunConfig) -> Result<Produced> {
    let ctx = resolve(cfg)?;
    let pts = points(cfg, &ctx.chi)?;
    let ds = sample_or_parse(cfg, &ctx.chi)?;
    let (result, table) = evaluation_table(&ctx.chi, &pts, &ds)?;
    Ok(Produced {
        outcome: Outcome::Ok,
        provenance: vec![format!("values: character {}", ctx.chi.provenance())],
        result,
        table,
    })
}

fn cmd_interpolate(cfg: &RunConfig) -> Result<Produced> {
    let ip = cfg
        .character
        .as_ref()
        .and_then(|c| c.interpolate.clone())
        .ok_or_else(|| Error::InvalidParams("interpolate needs --model and --points (or character.interpolate)".into()))?;
    let ctx = resolve(cfg)?;
    let pts = points(cfg, &ctx.chi)?;
    let ds = sample_or_parse(cfg, &ctx.chi)?;
    let (values, table) = evaluation_table(&ctx.chi, &pts, &ds)?;
    Ok(Produced {
        outcome: Outcome::Ok,
        provenance: vec![format!(
            "values: Lagrange interpolation through the {} models at {:?}, with surplus points as consistency witnesses",
            ip.model, ip.points
        )],
        result: json!({"interpolation": to_value(&ip)?, "params": ctx.chi.params(), "values": values}),
        table,
    })
}

fn cmd_simples(cfg: &RunConfig) -> Result<Produced> {
    let ctx = resolve(cfg)?;
    let (chi, pt) = numeric_character(cfg, &ctx.chi)?;
    let mut outcome = Outcome::Ok;
    let mut out = Vec::new();
    let mut table = vec![vec![
        "p".into(),
        "point".into(),
        "dim".into(),
        "semisimple".into(),
        "simple_count".into(),
    ]];
    for (p, q) in pq_list(cfg, &[(1, 1), (2, 2)]) {
        if p != q {
            return Err(Error::Arity(format!("simples needs square arities, got ({p},{q})")));
        }
        let set = enumerate(ctx.enumerator, chi.signature(), p, p, ctx.cutoff)?;
        let alg = QuotientAlgebra::from_spanning_set(&set, &chi)?;
        if !alg.warnings.is_empty() {
            outcome = outcome.worst(Outcome::Inconclusive);
        }
        let rep = alg.report();
        let r_max = cfg.cutoffs.r_max.unwrap_or(DEFAULT_R_MAX);
        let mut nilpotent = Vec::new();
        for d in &set.diagrams {
            let t = crate::diagram::LinCombo::from_diagram(d);
            match nilpotent_trace_check(&t, &chi, &set.diagrams, r_max)? {
                NilpotentVerdict::Pass { r } => nilpotent.push(json!({"diagram": d.to_literal(), "power": r, "trace": "0"})),
                NilpotentVerdict::Fail { r, trace } => {
                    outcome = Outcome::Fail;
                    nilpotent.push(json!({"diagram": d.to_literal(), "power": r, "trace": fmt_q(&trace)}));
                }
                NilpotentVerdict::Inconclusive { .. } => {}
            }
        }
        table.push(vec![
            p.to_string(),
            pt.label(),
            rep.dim.to_string(),
            rep.semisimple.to_string(),
            rep.simple_count.map_or("-".into(), |c| c.to_string()),
        ]);
        out.push(json!({
            "p": p,
            "point": pt.label(),
            "algebra": to_value(&rep)?,
            "nilpotent_modulo_radical": nilpotent,
        }));
    }
    Ok(Produced {
        outcome,
        provenance: vec![format!(
            "algebra: structure constants of End(p) modulo the radical on the {} spanning set (cutoff {}); simple count is the centre dimension; nilpotency tested up to power {}",
            ctx.enumerator,
            ctx.cutoff,
            cfg.cutoffs.r_max.unwrap_or(DEFAULT_R_MAX)
        )],
        result: Value::Array(out),
        table,
    })
}

fn cmd_loyal(cfg: &RunConfig) -> Result<Produced> {
    let alpha = alpha_values(cfg)?.ok_or_else(|| Error::InvalidParams("loyal needs --alpha or --alpha-file".into()))?;
    let rep = check_loyal(&alpha)?;
    let table = vec![
        vec![
            "terms".into(),
            "numerator".into(),
            "denominator".into(),
            "good".into(),
            "loyal".into(),
        ],
        vec![
            rep.fit.terms.len().to_string(),
            rep.fit.numerator.clone().unwrap_or_default(),
            rep.fit.denominator.clone().unwrap_or_default(),
            rep.fit.good.to_string(),
            rep.loyal.to_string(),
        ],
    ];
    Ok(Produced {
        outcome: if rep.loyal { Outcome::Ok } else { Outcome::Fail },
        provenance: vec![format!(
            "fit: minimal linear recurrence of Z(X), confirmed by {} surplus coefficients",
            crate::goodness::SURPLUS_TERMS
        )],
        result: json!({
            "verdict": if rep.loyal { "loyal" } else { "not loyal" },
            "report": to_value(&rep)?,
        }),
        table,
    })
}

fn cmd_enumerate(cfg: &RunConfig) -> Result<Produced> {
    let ctx = resolve(cfg)?;
    let mut out = Vec::new();
    let mut table = vec![vec!["p".into(), "q".into(), "index".into(), "diagram".into()]];
    for (p, q) in pq_list(cfg, &[(1, 1)]) {
        let set = enumerate(ctx.enumerator, ctx.chi.signature(), p, q, ctx.cutoff)?;
        let lits: Vec<String> = set.diagrams.iter().map(Diagram::to_literal).collect();
        for (i, l) in lits.iter().enumerate() {
            table.push(vec![p.to_string(), q.to_string(), i.to_string(), l.clone()]);
        }
        out.push(json!({
            "p": p,
            "q": q,
            "enumerator": set.enumerator,
            "cutoff": set.cutoff,
            "size": set.len(),
            "candidates": set.stats.candidates,
            "duplicates": set.stats.duplicates,
            "diagrams": lits,
        }));
    }
    Ok(Produced {
        outcome: Outcome::Ok,
        provenance: vec![format!("diagrams: {} enumerator, cutoff {}", ctx.enumerator, ctx.cutoff)],
        result: Value::Array(out),
        table,
    })
}

fn cmd_presets() -> Result<Produced> {
    let list = list_presets();
    let mut table = vec![vec![
        "name".into(),
        "generators".into(),
        "params".into(),
        "enumerator".into(),
        "cutoff".into(),
        "special_collection".into(),
    ]];
    for p in &list {
        table.push(vec![
            p.name.clone(),
            p.generators.join(" "),
            p.params.join(" "),
            p.enumerator.clone(),
            p.cutoff.to_string(),
            p.special_collection.clone(),
        ]);
    }
    Ok(Produced {
        outcome: Outcome::Ok,
        provenance: vec!["expected tables: closed-form counts bundled with each preset".into()],
        result: to_value(&list)?,
        table,
    })
}

fn render_csv(table: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in table {
        w.write_record(row).map_err(|e| Error::Io(std::io::Error::other(e)))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    Ok(String::from_utf8(bytes).expect("utf-8 csv"))
}

/// Runs one command and renders its report.
pub fn run(cfg: &RunConfig) -> Result<RunOutput> {
    let command = cfg
        .command
        .ok_or_else(|| Error::InvalidParams("no command given".into()))?;
    let produced = match command {
        Command::Gram => cmd_gram(cfg),
        Command::Homdims => cmd_homdims(cfg),
        Command::Goodness => cmd_goodness(cfg),
        Command::Chareval => cmd_chareval(cfg),
        Command::Simples => cmd_simples(cfg),
        Command::Loyal => cmd_loyal(cfg),
        Command::Interpolate => cmd_interpolate(cfg),
        Command::Enumerate => cmd_enumerate(cfg),
        Command::Presets => cmd_presets(),
    }?;
    let text = match cfg.format {
        Format::Json => {
            let report = json!({
                "tool": "diagcat",
                "version": VERSION,
                "command": command,
                "config": to_value(cfg)?,
                "outcome": produced.outcome,
                "provenance": produced.provenance,
                "result": produced.result,
            });
            serde_json::to_string_pretty(&report)? + "\n"
        }
        Format::Csv => render_csv(&produced.table)?,
    };
    Ok(RunOutput {
        outcome: produced.outcome,
        text,
    })
}

// ---------------------------------------------------------------------- flags

#[derive(Debug, Parser)]
#[command(name = "diagcat", version, about = "Exact workbench for diagrammatic interpolation categories")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Gram matrix, generic rank, exceptional values and radical.
    Gram(Flags),
    /// Hom-space dimension table over parameter values.
    Homdims(Flags),
    /// Goodness evidence for a specialized character.
    Goodness(Flags),
    /// Evaluate a character on closed diagrams.
    Chareval(Flags),
    /// Semisimplicity and simple count of End(p) modulo the radical.
    Simples(Flags),
    /// Decide whether Z(X) = Σ α_g X^g is loyal.
    Loyal(Flags),
    /// Build a character by interpolation from a model family.
    Interpolate(Flags),
    /// List a spanning set as diagram literals.
    Enumerate(Flags),
    /// Bundled example families.
    Presets {
        #[command(subcommand)]
        action: PresetsAction,
    },
    /// Run the command named in the config file.
    Run(Flags),
}

#[derive(Debug, Subcommand)]
enum PresetsAction {
    List(Flags),
}

#[derive(Debug, Default, Args)]
struct Flags {
    /// JSON run configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    preset: Option<String>,
    /// Arity as `p,q`; repeatable.
    #[arg(long = "pq")]
    pq: Vec<String>,
    /// Parameter value(s) such as `7`, `2,4` or `generic`; repeatable.
    #[arg(long = "t", allow_hyphen_values = true)]
    t: Vec<String>,
    #[arg(long)]
    enumerator: Option<String>,
    #[arg(long)]
    max_boxes: Option<usize>,
    /// Trace series run to T^N.
    #[arg(long = "n")]
    n: Option<usize>,
    #[arg(long)]
    r_max: Option<usize>,
    /// Comma-separated α_0, α_1, ...
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long)]
    alpha_file: Option<PathBuf>,
    /// Eigenvalues for the endo preset.
    #[arg(long, allow_hyphen_values = true)]
    lambdas: Option<String>,
    /// Rank for the dvr preset.
    #[arg(long)]
    r: Option<usize>,
    /// Residue characteristic for dvr models.
    #[arg(long)]
    prime: Option<u64>,
    /// Model file used as the wreath base.
    #[arg(long)]
    base_model: Option<PathBuf>,
    /// Character of a model file (custom signature).
    #[arg(long)]
    model_file: Option<PathBuf>,
    /// Preset whose models are interpolated.
    #[arg(long)]
    model: Option<String>,
    /// Interpolation points, comma-separated naturals.
    #[arg(long)]
    points: Option<String>,
    #[arg(long)]
    degree_bound: Option<String>,
    /// Diagram literal; repeatable.
    #[arg(long = "diagram")]
    diagrams: Vec<String>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_pq(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::Parse(format!("arity must be p,q, got {s:?}"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn split_scalars(s: &str) -> Vec<Scalar> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| Scalar::Text(x.to_string()))
        .collect()
}

impl Flags {
    fn apply(self, mut cfg: RunConfig) -> Result<RunConfig> {
        if let Some(p) = self.preset {
            if let Some(c) = cfg.character.as_mut().filter(|c| c.preset.is_some()) {
                c.preset = Some(p.clone());
            }
            cfg.preset = Some(p);
        }
        if !self.pq.is_empty() {
            cfg.cutoffs.pq_list = self.pq.iter().map(|s| parse_pq(s)).collect::<Result<_>>()?;
        }
        if !self.t.is_empty() {
            cfg.t = self.t;
        }
        if self.enumerator.is_some() {
            cfg.enumerator = self.enumerator;
        }
        if self.max_boxes.is_some() {
            cfg.cutoffs.max_boxes = self.max_boxes;
        }
        if self.n.is_some() {
            cfg.cutoffs.n = self.n;
        }
        if self.r_max.is_some() {
            cfg.cutoffs.r_max = self.r_max;
        }
        if let Some(a) = self.alpha {
            cfg.alpha = Some(split_scalars(&a));
            cfg.alpha_file = None;
        }
        if self.alpha_file.is_some() {
            cfg.alpha_file = self.alpha_file;
            cfg.alpha = None;
        }
        let touches_character = self.lambdas.is_some()
            || self.r.is_some()
            || self.prime.is_some()
            || self.base_model.is_some()
            || self.model_file.is_some()
            || self.model.is_some()
            || self.points.is_some()
            || self.degree_bound.is_some();
        if touches_character {
            let c = cfg.character.get_or_insert_with(CharacterSpec::default);
            if let Some(l) = self.lambdas {
                c.params.lambdas = Some(split_scalars(&l));
            }
            if self.r.is_some() {
                c.params.r = self.r;
            }
            if self.prime.is_some() {
                c.params.prime = self.prime;
            }
            if self.base_model.is_some() {
                c.params.base_model = self.base_model;
            }
            if self.model_file.is_some() {
                c.model_file = self.model_file;
            }
            if self.model.is_some() || self.points.is_some() || self.degree_bound.is_some() {
                let prev = c.interpolate.take();
                let model = self
                    .model
                    .or_else(|| prev.as_ref().map(|p| p.model.clone()))
                    .or_else(|| cfg.preset.clone())
                    .ok_or_else(|| Error::InvalidParams("interpolation needs --model".into()))?;
                let points = match self.points {
                    Some(p) => split_scalars(&p),
                    None => prev.as_ref().map(|p| p.points.clone()).unwrap_or_default(),
                };
                let degree_bound = self.degree_bound.or_else(|| prev.and_then(|p| p.degree_bound));
                c.interpolate = Some(InterpolateSpec {
                    points,
                    model,
                    degree_bound,
                });
            }
        }
        if !self.diagrams.is_empty() {
            cfg.diagrams = self.diagrams;
        }
        if self.samples.is_some() {
            cfg.samples = self.samples;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(f) = self.format {
            cfg.format = f;
        }
        if self.out.is_some() {
            cfg.out = self.out;
        }
        Ok(cfg)
    }
}

fn config_from(flags: Flags, command: Option<Command>) -> Result<RunConfig> {
    let base = match &flags.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let mut cfg = flags.apply(base)?;
    if command.is_some() {
        cfg.command = command;
    }
    Ok(cfg)
}

/// Parses arguments, runs, writes the report and returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let (flags, command) = match cli.command {
        Sub::Gram(f) => (f, Some(Command::Gram)),
        Sub::Homdims(f) => (f, Some(Command::Homdims)),
        Sub::Goodness(f) => (f, Some(Command::Goodness)),
        Sub::Chareval(f) => (f, Some(Command::Chareval)),
        Sub::Simples(f) => (f, Some(Command::Simples)),
        Sub::Loyal(f) => (f, Some(Command::Loyal)),
        Sub::Interpolate(f) => (f, Some(Command::Interpolate)),
        Sub::Enumerate(f) => (f, Some(Command::Enumerate)),
        Sub::Presets {
            action: PresetsAction::List(f),
        } => (f, Some(Command::Presets)),
        Sub::Run(f) => (f, None),
    };
    let result = config_from(flags, command).and_then(|cfg| {
        let out = run(&cfg)?;
        match &cfg.out {
            Some(p) => std::fs::write(p, &out.text)?,
            None => print!("{}", out.text),
        }
        Ok(out.outcome)
    });
    match result {
        Ok(o) => o.exit_code(),
        Err(e) => {
            eprintln!("error: {e}");
            error_exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(args: &[&str]) -> RunConfig {
        let cli = Cli::try_parse_from(std::iter::once("diagcat").chain(args.iter().copied())).unwrap();
        match cli.command {
            Sub::Gram(f) => config_from(f, Some(Command::Gram)).unwrap(),
            Sub::Loyal(f) => config_from(f, Some(Command::Loyal)).unwrap(),
            Sub::Homdims(f) => config_from(f, Some(Command::Homdims)).unwrap(),
            _ => unreachable!(),
        }
    }

    #[test]
    fn gram_sym_generic_rank() {
        let c = cfg(&["gram", "--preset", "sym", "--pq", "2,2", "--t", "generic"]);
        let out = run(&c).unwrap();
        let v: Value = serde_json::from_str(&out.text).unwrap();
        assert_eq!(v["result"][0]["report"]["generic_rank"], 15);
        assert_eq!(v["result"][0]["generic_check"]["agree"], true);
        assert_eq!(out.outcome, Outcome::Ok);
    }

    #[test]
    fn loyal_two_x() {
        let out = run(&cfg(&["loyal", "--alpha", "0,2,0,0,0"])).unwrap();
        let v: Value = serde_json::from_str(&out.text).unwrap();
        assert_eq!(v["result"]["verdict"], "loyal");
        assert_eq!(out.outcome.exit_code(), 0);
    }

    #[test]
    fn homdims_csv_columns() {
        let c = cfg(&["homdims", "--preset", "gl", "--pq", "2,2", "--t", "0", "--t", "1", "--t", "2", "--format", "csv"]);
        let out = run(&c).unwrap();
        assert_eq!(out.text, "p,q,0,1,2\n2,2,0,1,2\n");
    }

    #[test]
    fn flags_override_config_fields() {
        let base: RunConfig = serde_json::from_str(r#"{"command":"gram","preset":"orth","seed":5,"t":["3"]}"#).unwrap();
        let f = Flags {
            preset: Some("gl".into()),
            t: vec!["4".into()],
            ..Flags::default()
        };
        let c = f.apply(base).unwrap();
        assert_eq!(c.preset.as_deref(), Some("gl"));
        assert_eq!(c.t, vec!["4".to_string()]);
        assert_eq!(c.seed, 5);
    }

    #[test]
    fn unknown_config_fields_are_rejected() {
        assert!(serde_json::from_str::<RunConfig>(r#"{"comand":"gram"}"#).is_err());
    }
}
