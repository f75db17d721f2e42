//! Input parsing, report assembly and SVG output behind the `tconv` binary.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use num_traits::{One, ToPrimitive};
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize};
use tconv_core::cyclic::{gf_coefficient_check, gf_truncation, GfReport};
use tconv_core::geometry::coords_of;
use tconv_core::halfspace::{exterior_description, partition_filter};
use tconv_core::ideal::{alexander_dual, dual_generators_from_vertices, initial_ideal, MonomialIdeal};
use tconv_core::oracle::{brute_force_face_grids, brute_force_initial_ideal, brute_force_vertex_grids};
use tconv_core::resolution::{f_matrix, f_vector, maximal_faces};
use tconv_core::trop::{common_denominator, find_singular_minor, is_generic, parse_rat};
use tconv_core::{
    boundary_matrices, build_face_poset, enumerate_vertices, Error, FacePoset, GenericityWitness, Grid, PointTP, Rat,
    WeightMatrix,
};

#[derive(Debug)]
pub enum CliError {
    Parse { line: usize, column: usize, message: String },
    NonGeneric(GenericityWitness),
    Internal(String),
    Other(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } => 2,
            CliError::NonGeneric(_) => 3,
            CliError::Internal(_) => 4,
            CliError::Other(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse { line, column, message } => write!(f, "parse error at line {line}, column {column}: {message}"),
            CliError::NonGeneric(w) => write!(
                f,
                "input is not generic: tropically singular submatrix at {w} (rerun with --perturb)"
            ),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
            CliError::Other(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NonGeneric(w) => CliError::NonGeneric(w),
            Error::Internal(m) => CliError::Internal(m),
            // Shape problems surface after parsing succeeded token by token.
            Error::Input(m) => CliError::Parse { line: 1, column: 1, message: m },
            other => CliError::Other(other.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Message of a core error without its category prefix.
fn plain(e: Error) -> String {
    match e {
        Error::Input(m) | Error::Precondition(m) | Error::Config(m) | Error::Internal(m) => m,
        other => other.to_string(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InputFormat {
    Json,
    Csv,
}

impl InputFormat {
    /// JSON when the first non-blank character opens an object, CSV otherwise.
    pub fn sniff(text: &str) -> Self {
        if text.trim_start().starts_with('{') {
            InputFormat::Json
        } else {
            InputFormat::Csv
        }
    }
}

struct JsonRat(Rat);

impl<'de> Deserialize<'de> for JsonRat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct RatVisitor;

        impl Visitor<'_> for RatVisitor {
            type Value = JsonRat;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a rational as an integer or a \"p/q\" string")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<JsonRat, E> {
                Ok(JsonRat(Rat::from_integer(v.into())))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<JsonRat, E> {
                Ok(JsonRat(Rat::from_integer(v.into())))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<JsonRat, E> {
                // The shortest round-trip decimal is what the user typed.
                parse_rat(&v.to_string()).map(JsonRat).map_err(|e| E::custom(plain(e)))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<JsonRat, E> {
                parse_rat(v).map(JsonRat).map_err(|e| E::custom(plain(e)))
            }
        }

        d.deserialize_any(RatVisitor)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonInput {
    points: Vec<Vec<JsonRat>>,
}

pub fn parse_json(text: &str) -> CliResult<WeightMatrix> {
    let input: JsonInput = serde_json::from_str(text).map_err(|e| CliError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string().split(" at line").next().unwrap_or_default().to_string(),
    })?;
    let rows: Vec<Vec<Rat>> = input.points.into_iter().map(|p| p.into_iter().map(|r| r.0).collect()).collect();
    Ok(WeightMatrix::new(rows)?)
}

/// One point per record; blank lines and lines starting with `#` are skipped.
pub fn parse_csv(text: &str) -> CliResult<WeightMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            CliError::Parse { line, column: 1, message: e.to_string() }
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let mut row = Vec::with_capacity(record.len());
        let mut column = 1;
        for field in record.iter() {
            let value = parse_rat(field).map_err(|e| CliError::Parse { line, column, message: plain(e) })?;
            row.push(value);
            column += field.len() + 1;
        }
        rows.push(row);
    }
    if let Some(first) = rows.first() {
        let n = first.len();
        if let Some(k) = rows.iter().position(|r| r.len() != n) {
            let line = reader_line_of(text, k);
            return Err(CliError::Parse {
                line,
                column: 1,
                message: format!("point has {} coordinates, expected {n}", rows[k].len()),
            });
        }
    }
    Ok(WeightMatrix::new(rows)?)
}

/// Line number of the k-th data record in CSV text.
fn reader_line_of(text: &str, k: usize) -> usize {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .nth(k)
        .map_or(0, |(i, _)| i + 1)
}

pub fn parse_input(text: &str, format: Option<InputFormat>) -> CliResult<WeightMatrix> {
    match format.unwrap_or_else(|| InputFormat::sniff(text)) {
        InputFormat::Json => parse_json(text),
        InputFormat::Csv => parse_csv(text),
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Options {
    pub with_initial: bool,
    pub halfspaces: bool,
    pub oracle: bool,
}

#[derive(Serialize, Debug, Clone, PartialEq, Eq)]
pub struct VertexEntry {
    pub grid: String,
    pub coords: Vec<String>,
    pub label: String,
}

#[derive(Serialize, Debug, Clone, PartialEq, Eq)]
pub struct FaceEntry {
    pub grid: String,
    pub label: String,
    pub vertices: Vec<usize>,
}

#[derive(Serialize, Debug, Clone, PartialEq, Eq)]
pub struct FMatrixEntry {
    pub dim: usize,
    pub vertices: usize,
    pub count: usize,
}

#[derive(Serialize, Debug, Clone, PartialEq, Eq)]
pub struct MatrixEntry {
    /// Dimension of the faces indexing the columns.
    pub dim: usize,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    /// (row, column, sign), 0-based.
    pub entries: Vec<(usize, usize, i64)>,
}

#[derive(Serialize, Debug, Clone, PartialEq, Eq)]
pub struct HalfspaceEntry {
    pub apex: Vec<String>,
    /// 1-based sector indices.
    pub sectors: Vec<usize>,
    pub source_vertex: usize,
    pub partition: bool,
}

#[derive(Serialize, Debug, Clone, PartialEq, Eq)]
pub struct HalfspaceReport {
    pub possibly_redundant: bool,
    pub all: Vec<HalfspaceEntry>,
    /// Halfspaces whose sectors partition the rows at their apex; a
    /// conjectured minimal description, never relied on.
    pub experimental_partition: Vec<HalfspaceEntry>,
    pub caveat: String,
}

#[derive(Serialize, Debug, Clone, PartialEq, Eq)]
pub struct MaximalFaceEntry {
    pub dim: usize,
    pub grid: String,
    pub label: String,
}

#[derive(Serialize, Debug, Clone, PartialEq, Eq)]
pub struct MergedVertex {
    pub coords: Vec<String>,
    /// Indices into `vertices` sharing these coordinates.
    pub from: Vec<usize>,
}

#[derive(Serialize, Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub vertices_match: bool,
    pub faces_match: bool,
    pub initial_ideal_match: bool,
    pub duality_match: bool,
}

#[derive(Serialize, Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub generic: bool,
    pub experimental: bool,
    pub points: usize,
    pub dimension: usize,
    pub vertices: Vec<VertexEntry>,
    pub faces_by_dim: Vec<Vec<FaceEntry>>,
    pub f_vector: Vec<usize>,
    pub f_matrix: Vec<FMatrixEntry>,
    pub dual_generators: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial_ideal: Option<Vec<String>>,
    pub monomial_matrices: Vec<MatrixEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub halfspaces: Option<HalfspaceReport>,
    pub maximal_faces: Vec<MaximalFaceEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub merged_vertices: Option<Vec<MergedVertex>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleReport>,
    pub notes: Vec<String>,
}

fn coords_strings(p: &PointTP) -> Vec<String> {
    p.coords().iter().map(ToString::to_string).collect()
}

fn generator_strings(ideal: &MonomialIdeal) -> Vec<String> {
    ideal.generators().iter().map(ToString::to_string).collect()
}

/// The face poset and boundary maps of a generic matrix.
pub fn hull_poset(v: &WeightMatrix) -> CliResult<FacePoset> {
    let vertices = enumerate_vertices(v)?;
    Ok(build_face_poset(&vertices, v)?)
}

fn assemble(v: &WeightMatrix, poset: &FacePoset, opts: &Options) -> CliResult<Report> {
    let matrices = boundary_matrices(poset)?;
    let vertices = poset
        .vertices()
        .iter()
        .map(|rec| VertexEntry {
            grid: rec.grid.bits(),
            coords: coords_strings(&rec.coords),
            label: tconv_core::SqfMonomial::from_grid(&rec.grid).to_string(),
        })
        .collect();
    let faces_by_dim = poset
        .levels()
        .iter()
        .map(|level| {
            level
                .iter()
                .map(|f| FaceEntry {
                    grid: f.grid.bits(),
                    label: f.label().to_string(),
                    vertices: f.vertices.clone(),
                })
                .collect()
        })
        .collect();
    let f_matrix = f_matrix(poset)
        .into_iter()
        .map(|((dim, vertices), count)| FMatrixEntry { dim, vertices, count })
        .collect();
    let dual = dual_generators_from_vertices(poset.vertices())?;
    let initial = if opts.with_initial {
        Some(generator_strings(&initial_ideal(v)?))
    } else {
        None
    };
    let monomial_matrices = matrices
        .iter()
        .enumerate()
        .map(|(k, m)| MatrixEntry {
            dim: k + 1,
            row_labels: m.row_labels.iter().map(ToString::to_string).collect(),
            col_labels: m.col_labels.iter().map(ToString::to_string).collect(),
            entries: m.triplets(),
        })
        .collect();
    let halfspaces = if opts.halfspaces { Some(halfspace_report(poset)?) } else { None };
    let maximal = maximal_faces(poset, &matrices)
        .into_iter()
        .map(|f| MaximalFaceEntry {
            dim: f.dim,
            grid: f.grid.bits(),
            label: f.label().to_string(),
        })
        .collect();
    let oracle = if opts.oracle { Some(oracle_report(v, poset)?) } else { None };
    Ok(Report {
        generic: true,
        experimental: false,
        points: v.rows(),
        dimension: v.cols() - 1,
        vertices,
        faces_by_dim,
        f_vector: f_vector(poset),
        f_matrix,
        dual_generators: generator_strings(&dual),
        initial_ideal: initial,
        monomial_matrices,
        halfspaces,
        maximal_faces: maximal,
        merged_vertices: None,
        oracle,
        notes: Vec::new(),
    })
}

fn halfspace_report(poset: &FacePoset) -> CliResult<HalfspaceReport> {
    let ext = exterior_description(poset)?;
    let entry = |h: &tconv_core::halfspace::HalfspaceRecord| HalfspaceEntry {
        apex: coords_strings(h.halfspace.apex()),
        sectors: h.halfspace.sectors().iter().map(|j| j + 1).collect(),
        source_vertex: h.source_vertex,
        partition: h.partition,
    };
    let mut partition = Vec::new();
    for (k, vertex) in poset.vertices().iter().enumerate() {
        for sectors in partition_filter(vertex) {
            if let Some(h) = ext
                .halfspaces
                .iter()
                .find(|h| h.source_vertex == k && h.halfspace.sectors() == sectors.as_slice())
            {
                partition.push(entry(h));
            }
        }
    }
    Ok(HalfspaceReport {
        possibly_redundant: ext.possibly_redundant,
        all: ext.halfspaces.iter().map(entry).collect(),
        experimental_partition: partition,
        caveat: "not every halfspace of this form is minimal; the partition list is a conjecture".into(),
    })
}

fn oracle_report(v: &WeightMatrix, poset: &FacePoset) -> CliResult<OracleReport> {
    let grids: Vec<Grid> = poset.vertices().iter().map(|r| r.grid.clone()).collect();
    let mut faces: Vec<Grid> = poset.all_faces().map(|f| f.grid.clone()).collect();
    faces.sort();
    let brute_ideal = brute_force_initial_ideal(v).map_err(|e| CliError::Other(e.to_string()))?;
    let dual = dual_generators_from_vertices(poset.vertices())?;
    Ok(OracleReport {
        vertices_match: grids == brute_force_vertex_grids(v).map_err(|e| CliError::Other(e.to_string()))?,
        faces_match: faces == brute_force_face_grids(v).map_err(|e| CliError::Other(e.to_string()))?,
        initial_ideal_match: initial_ideal(v)?.generators() == brute_ideal.generators(),
        duality_match: dual.generators() == alexander_dual(&brute_ideal).generators(),
    })
}

/// The full pipeline on a generic matrix.
pub fn run_hull(v: &WeightMatrix, opts: &Options) -> CliResult<Report> {
    if let Some(w) = find_singular_minor(v) {
        return Err(CliError::NonGeneric(w));
    }
    let poset = hull_poset(v)?;
    assemble(v, &poset, opts)
}

/// Tiebreaker weights `2^(i n + j)`: distinct permutations of any square
/// submatrix use distinct sets of powers of two, so no minor is singular.
pub fn tiebreaker(r: usize, n: usize) -> Vec<Vec<Rat>> {
    (0..r)
        .map(|i| {
            (0..n)
                .map(|j| num_traits::pow(Rat::from_integer(2.into()), i * n + j))
                .collect()
        })
        .collect()
}

/// Replaces `v` by `v + eps t` with `eps` small enough that every comparison
/// of signed sums of at most `2 min(r, n)` entries is decided by `v` first
/// and by `t` only on ties, i.e. lexicographically on the pairs `(v, t)`.
pub fn lexicographic_refinement(v: &WeightMatrix) -> CliResult<WeightMatrix> {
    let (r, n) = (v.rows(), v.cols());
    let t = tiebreaker(r, n);
    let k = r.min(n) as i64;
    let t_max = t.iter().flatten().max().cloned().unwrap_or_else(Rat::one);
    let denom = Rat::from_integer(common_denominator(v));
    let eps = Rat::one() / (denom * (Rat::from_integer((2 * k).into()) * t_max + Rat::one()));
    let rows = (0..r)
        .map(|i| (0..n).map(|j| v.get(i, j) + &eps * &t[i][j]).collect())
        .collect();
    let refined = WeightMatrix::new(rows)?;
    if !is_generic(&refined) {
        return Err(CliError::Internal("the tiebreaker refinement is not generic".into()));
    }
    Ok(refined)
}

/// Hull of possibly non-generic input through a generic refinement, with
/// vertices of equal original coordinates identified afterwards.
pub fn perturb_and_hull(v: &WeightMatrix, opts: &Options) -> CliResult<Report> {
    if is_generic(v) {
        return run_hull(v, opts);
    }
    let refined = lexicographic_refinement(v)?;
    let poset = hull_poset(&refined)?;
    let inner = Options { oracle: false, ..*opts };
    let mut report = assemble(&refined, &poset, &inner)?;
    report.generic = false;
    report.experimental = true;

    let mut groups: BTreeMap<Vec<String>, Vec<usize>> = BTreeMap::new();
    for (k, rec) in poset.vertices().iter().enumerate() {
        let original = coords_of(&rec.grid, v)?;
        let coords = coords_strings(&original);
        report.vertices[k].coords = coords.clone();
        groups.entry(coords).or_default().push(k);
    }
    let mut merged: Vec<MergedVertex> = groups
        .into_iter()
        .map(|(coords, from)| MergedVertex { coords, from })
        .collect();
    merged.sort_by_key(|m| m.from[0]);
    report.merged_vertices = Some(merged);
    report.notes.push(
        "input is not generic: combinatorics are those of a lexicographic refinement; \
         vertices with equal coordinates are merged; this procedure is unproven"
            .into(),
    );
    Ok(report)
}

#[derive(Serialize, Debug, Clone, PartialEq, Eq)]
pub struct GfCheck {
    pub r: usize,
    pub n: usize,
    pub k: usize,
    pub truncation: u32,
    pub enumeration: String,
    pub exponential_form: String,
    pub printed_ordinary_form: String,
    pub corrected_ordinary_form: String,
    pub exponential_mismatch: bool,
    pub printed_ordinary_mismatch: bool,
    pub corrected_ordinary_mismatch: bool,
}

pub fn gf_check(r: usize, n: usize, k: usize) -> CliResult<GfCheck> {
    let truncation = gf_truncation(r, n, k);
    let rep: GfReport = gf_coefficient_check(r, n, k, truncation)?;
    Ok(GfCheck {
        r,
        n,
        k,
        truncation,
        enumeration: rep.enumeration.to_string(),
        exponential_form: rep.egf.to_string(),
        printed_ordinary_form: rep.ogf_printed.to_string(),
        corrected_ordinary_form: rep.ogf_corrected.to_string(),
        exponential_mismatch: rep.egf_mismatch,
        printed_ordinary_mismatch: rep.ogf_printed_mismatch,
        corrected_ordinary_mismatch: rep.ogf_corrected_mismatch,
    })
}

const SVG_SIZE: f64 = 480.0;
const SVG_MARGIN: f64 = 40.0;

/// Planar drawing of a hull in TP^2 at coordinates (z_2 - z_1, z_3 - z_1).
pub fn render_svg(poset: &FacePoset) -> CliResult<String> {
    if poset.cols() != 3 {
        return Err(CliError::Other(format!(
            "drawings need points in TP^2 (3 coordinates), got {}",
            poset.cols()
        )));
    }
    let pts: Vec<(f64, f64)> = poset
        .vertices()
        .iter()
        .map(|rec| {
            let c = rec.coords.coords();
            let f = |q: &Rat| q.to_f64().unwrap_or(0.0);
            (f(&c[1]) - f(&c[0]), f(&c[2]) - f(&c[0]))
        })
        .collect();
    let (min_x, max_x) = bounds(pts.iter().map(|p| p.0));
    let (min_y, max_y) = bounds(pts.iter().map(|p| p.1));
    let span = (max_x - min_x).max(max_y - min_y);
    let scale = if span > 0.0 { (SVG_SIZE - 2.0 * SVG_MARGIN) / span } else { 0.0 };
    // Centre the bounding box; a single point lands in the middle.
    let (mid_x, mid_y) = ((min_x + max_x) / 2.0, (min_y + max_y) / 2.0);
    let screen: Vec<(f64, f64)> = pts
        .iter()
        .map(|&(x, y)| (SVG_SIZE / 2.0 + (x - mid_x) * scale, SVG_SIZE / 2.0 - (y - mid_y) * scale))
        .collect();

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{s}\" height=\"{s}\" viewBox=\"0 0 {s} {s}\">\n",
        s = SVG_SIZE
    ));
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    for face in poset.faces(2).iter() {
        let ring = convex_order(&face.vertices, &screen);
        let points: Vec<String> = ring.iter().map(|&k| format!("{:.2},{:.2}", screen[k].0, screen[k].1)).collect();
        out.push_str(&format!(
            "<polygon points=\"{}\" fill=\"#c8d8ec\" stroke=\"none\"><title>{}</title></polygon>\n",
            points.join(" "),
            face.label()
        ));
    }
    if poset.max_dim() >= 1 {
        for edge in poset.faces(1) {
            let (a, b) = (screen[edge.vertices[0]], screen[edge.vertices[1]]);
            out.push_str(&format!(
                "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\" stroke-width=\"1.5\"/>\n",
                a.0, a.1, b.0, b.1
            ));
        }
    }
    for (k, rec) in poset.vertices().iter().enumerate() {
        let (x, y) = screen[k];
        out.push_str(&format!(
            "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"3.5\" fill=\"black\"><title>{}</title></circle>\n",
            tconv_core::SqfMonomial::from_grid(&rec.grid)
        ));
        out.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\" font-family=\"sans-serif\">{}</text>\n",
            x + 5.0,
            y - 5.0,
            rec.coords
        ));
    }
    out.push_str("</svg>\n");
    Ok(out)
}

pub fn emit_svg(poset: &FacePoset, path: &Path) -> CliResult<()> {
    let svg = render_svg(poset)?;
    std::fs::write(path, svg).map_err(|e| CliError::Other(format!("cannot write {}: {e}", path.display())))
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)))
}

/// Vertices of a planar convex cell in angular order about their centroid.
fn convex_order(vertices: &[usize], screen: &[(f64, f64)]) -> Vec<usize> {
    let m = vertices.len() as f64;
    let cx = vertices.iter().map(|&k| screen[k].0).sum::<f64>() / m;
    let cy = vertices.iter().map(|&k| screen[k].1).sum::<f64>() / m;
    let mut ring = vertices.to_vec();
    ring.sort_by(|&a, &b| {
        let ta = (screen[a].1 - cy).atan2(screen[a].0 - cx);
        let tb = (screen[b].1 - cy).atan2(screen[b].0 - cx);
        ta.total_cmp(&tb)
    });
    ring
}
