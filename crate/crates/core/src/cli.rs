//! Command implementations behind the `grasslift` binary. Each command recomputes
//! what it reports; claimed values come from closed-form parameter formulas.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::codes::{
    bachoc_weight, build_image_code, hamming_weight, phi, singleton_max_dim, ExtVector,
    RankCodeFile, RankMetricCode, Variant,
};
use crate::error::{Error, Result};
use crate::gf::{require_construction_prime, require_prime, Fp2};
use crate::grassmann::{
    anticode_bound, anticode_bound_fraction, construct_g, g_code_size, lift_code, CodeParams,
    GrassmannianCode, GrassmannianFile, Metric,
};
use crate::graph::build_gamma;

/// Default cap on pairwise operations.
pub const DEFAULT_GUARD: u128 = 1 << 24;

/// Pairs drawn when an exhaustive rank-distance scan would exceed the guard.
pub const SAMPLED_PAIRS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub claimed: String,
    pub computed: String,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, claimed: impl ToString, computed: impl ToString) -> Self {
        let (claimed, computed) = (claimed.to_string(), computed.to_string());
        Check {
            name: name.into(),
            pass: claimed == computed,
            claimed,
            computed,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pass {
            write!(f, "{}: {} PASS", self.name, self.computed)
        } else {
            write!(
                f,
                "{}: claimed {}, computed {} FAIL",
                self.name, self.claimed, self.computed
            )
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub parameters: Vec<(String, String)>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    pub wall_time_secs: f64,
}

impl RunReport {
    fn new(command: &str) -> Self {
        RunReport {
            command: command.to_string(),
            parameters: Vec::new(),
            checks: Vec::new(),
            notes: Vec::new(),
            wall_time_secs: 0.0,
        }
    }

    fn param(&mut self, key: &str, value: impl ToString) {
        self.parameters.push((key.to_string(), value.to_string()));
    }

    fn check(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// 0 when every check passes, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            0
        } else {
            1
        }
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# {}", self.command)?;
        if !self.parameters.is_empty() {
            let ps: Vec<String> = self
                .parameters
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect();
            writeln!(f, "parameters: {}", ps.join(" "))?;
        }
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        writeln!(
            f,
            "result: {} ({:.3}s)",
            if self.all_pass() { "PASS" } else { "FAIL" },
            self.wall_time_secs
        )
    }
}

fn pairs(m: u128) -> u128 {
    m * m.saturating_sub(1) / 2
}

fn guard_pairs(m: u128, guard: u128) -> Result<()> {
    let needed = pairs(m);
    if needed > guard {
        return Err(Error::GuardExceeded { needed, cap: guard });
    }
    Ok(())
}

fn big_to_u128(x: &BigUint) -> u128 {
    u128::try_from(x.clone()).unwrap_or(u128::MAX)
}

// ---- table ----

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableLayout {
    /// All of `(F_{p^2})^2`.
    Full,
    /// `{(0, c + dw)}`, the inputs of `phi_O`.
    Odd,
}

impl FromStr for TableLayout {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(TableLayout::Full),
            "odd" => Ok(TableLayout::Odd),
            other => Err(Error::Malformed(format!("unknown table layout `{other}`"))),
        }
    }
}

/// Reference row order for `F_4^2`, as indices into `[0, 1, w, 1+w]`.
const F4_PAIR_ORDER: [(usize, usize); 16] = [
    (0, 0),
    (0, 1),
    (1, 0),
    (1, 1),
    (0, 2),
    (2, 0),
    (2, 2),
    (1, 2),
    (2, 1),
    (0, 3),
    (3, 0),
    (1, 3),
    (3, 1),
    (2, 3),
    (3, 2),
    (3, 3),
];

/// Reference row order for `{(0, c + dw)}` over `F_3`, as `(c, d)`.
const F9_ODD_ORDER: [(u64, u64); 9] = [
    (0, 0),
    (1, 0),
    (0, 1),
    (1, 1),
    (2, 0),
    (0, 2),
    (1, 2),
    (2, 2),
    (2, 1),
];

/// Largest number of table rows `cmd_table` will scan.
pub const TABLE_LIMIT: u64 = 1 << 20;

fn table_inputs(p: u32, layout: TableLayout) -> Vec<ExtVector> {
    let z = Fp2::zero(p);
    match (p, layout) {
        (2, TableLayout::Full) => {
            let f4 = [(0, 0), (1, 0), (0, 1), (1, 1)];
            F4_PAIR_ORDER
                .iter()
                .map(|&(x, y)| ExtVector::from_pairs(2, &[f4[x], f4[y]]))
                .collect()
        }
        (3, TableLayout::Odd) => F9_ODD_ORDER
            .iter()
            .map(|&(c, d)| ExtVector::from_pairs(3, &[(0, 0), (c, d)]))
            .collect(),
        (_, TableLayout::Full) => ExtVector::all(p, 2).collect(),
        (_, TableLayout::Odd) => Fp2::elements(p)
            .map(|x| ExtVector::new(p, vec![z, x]).expect("same modulus"))
            .collect(),
    }
}

/// CSV with columns `alpha,hamming,phi,bachoc,rank`. The default layout is the full
/// `(F_4)^2` scan for `p = 2` and the `phi_O` inputs otherwise.
pub fn cmd_table(p: u32, layout: Option<TableLayout>) -> Result<String> {
    require_prime(p)?;
    let layout = layout.unwrap_or(if p == 2 {
        TableLayout::Full
    } else {
        TableLayout::Odd
    });
    let rows = match layout {
        TableLayout::Full => (p as u128).pow(4),
        TableLayout::Odd => (p as u128).pow(2),
    };
    if rows > TABLE_LIMIT as u128 {
        return Err(Error::GuardExceeded {
            needed: rows,
            cap: TABLE_LIMIT as u128,
        });
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Malformed(e.to_string());
    w.write_record(["alpha", "hamming", "phi", "bachoc", "rank"])
        .map_err(csv_err)?;
    for alpha in table_inputs(p, layout) {
        let img = phi(&alpha)?;
        w.write_record([
            alpha.to_string(),
            hamming_weight(&alpha).to_string(),
            img.to_string(),
            bachoc_weight(&img)?.to_string(),
            img.rank().to_string(),
        ])
        .map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Malformed(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("ascii output"))
}

// ---- construct ----

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CodeKind {
    /// `G_p(r, 2)`.
    Grassmannian,
    /// The matrix code `phi_variant((F_{p^2})^r)`.
    Image,
    /// `Λ(phi_variant((F_{p^2})^r))`.
    Lift,
}

impl FromStr for CodeKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "grassmannian" => Ok(CodeKind::Grassmannian),
            "image" => Ok(CodeKind::Image),
            "lift" => Ok(CodeKind::Lift),
            other => Err(Error::Malformed(format!("unknown code kind `{other}`"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ConstructArgs {
    pub p: u32,
    pub r: usize,
    pub variant: Variant,
    pub kind: CodeKind,
    pub out: Option<PathBuf>,
    pub guard: u128,
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string(value).map_err(|e| Error::Malformed(e.to_string()))?;
    fs::write(path, text + "\n")
        .map_err(|e| Error::Malformed(format!("cannot write {}: {e}", path.display())))
}

fn grassmannian_checks(report: &mut RunReport, code: &GrassmannianCode) -> Result<CodeParams> {
    let computed = code.code_params()?;
    let claimed = code
        .provenance()
        .claimed
        .ok_or_else(|| Error::Malformed("construction without claimed parameters".into()))?;
    report.check(Check::new("parameters", claimed.tuple(), computed.tuple()));
    Ok(computed)
}

/// Builds the requested code, optionally writes it as JSON, and checks its
/// parameters against the closed-form claims.
pub fn cmd_construct(args: &ConstructArgs, command: &str) -> Result<RunReport> {
    let start = Instant::now();
    let ConstructArgs {
        p, r, variant, kind, ..
    } = *args;
    require_construction_prime(p)?;
    if r == 0 {
        return Err(Error::Malformed("r must be at least 1".into()));
    }
    let mut report = RunReport::new(command);
    report.param("p", p);
    report.param("r", r);
    report.param("variant", variant);
    report.param("kind", format!("{kind:?}").to_lowercase());
    match kind {
        CodeKind::Grassmannian => {
            guard_pairs(big_to_u128(&g_code_size(p, r)), args.guard)?;
            let code = construct_g(p, r, variant)?;
            let params = grassmannian_checks(&mut report, &code)?;
            let bound = anticode_bound(params.n, 4, 2, p as u64, Metric::Subspace)?;
            report.check(Check::new("anticode bound attained", bound, params.m));
            report.check(Check::new(
                "pairwise intersection dim",
                0,
                code.max_pairwise_intersection()?,
            ));
            if let Some(out) = &args.out {
                write_json(out, &code.to_file())?;
                report.notes.push(format!("wrote {}", out.display()));
            }
        }
        CodeKind::Image | CodeKind::Lift => {
            guard_pairs((p as u128).pow(2 * r as u32), args.guard)?;
            let code = build_image_code(p, r, variant)?;
            report.check(rank_shape_check(&code, r)?);
            let delta = code.min_rank_distance()?;
            report.check(Check::new(
                "singleton max dim",
                singleton_max_dim(2, 2 * r, delta)?,
                code.dimension()?,
            ));
            if kind == CodeKind::Image {
                if let Some(out) = &args.out {
                    write_json(out, &code.to_file())?;
                    report.notes.push(format!("wrote {}", out.display()));
                }
            } else {
                let lifted = lift_code(&code)?;
                grassmannian_checks(&mut report, &lifted)?;
                if let Some(out) = &args.out {
                    write_json(out, &lifted.to_file())?;
                    report.notes.push(format!("wrote {}", out.display()));
                }
            }
        }
    }
    report.wall_time_secs = start.elapsed().as_secs_f64();
    Ok(report)
}

/// `[k x l, rho, delta]` claimed as `[2 x 2r, 2r, 2]`.
fn rank_shape_check(code: &RankMetricCode, r: usize) -> Result<Check> {
    let (k, l) = code.shape();
    Ok(Check::new(
        "rank-metric parameters",
        format!("[{}x{}, {}, 2]", 2, 2 * r, 2 * r),
        format!("[{k}x{l}, {}, {}]", code.dimension()?, code.min_rank_distance()?),
    ))
}

// ---- verify ----

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CheckKind {
    Mrd,
    Anticode,
    Distance,
    Dual,
    Graph,
}

impl CheckKind {
    pub const ALL: [CheckKind; 5] = [
        CheckKind::Mrd,
        CheckKind::Anticode,
        CheckKind::Distance,
        CheckKind::Dual,
        CheckKind::Graph,
    ];

    fn name(self) -> &'static str {
        match self {
            CheckKind::Mrd => "mrd",
            CheckKind::Anticode => "anticode",
            CheckKind::Distance => "distance",
            CheckKind::Dual => "dual",
            CheckKind::Graph => "graph",
        }
    }
}

impl FromStr for CheckKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        CheckKind::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Malformed(format!("unknown check `{s}`")))
    }
}

/// Either kind of code file, told apart by its fields.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum CodeFile {
    Grassmannian(GrassmannianFile),
    Rank(RankCodeFile),
}

pub fn read_code_file(path: &Path) -> Result<CodeFile> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Malformed(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::Malformed(format!("{}: not a code file: {e}", path.display())))
}

#[derive(Clone, Debug)]
pub struct VerifyArgs {
    pub path: PathBuf,
    /// `None` runs every check that applies to the file.
    pub checks: Option<Vec<CheckKind>>,
    pub guard: u128,
    pub seed: u64,
}

pub fn cmd_verify(args: &VerifyArgs, command: &str) -> Result<RunReport> {
    let start = Instant::now();
    let mut report = RunReport::new(command);
    report.param("file", args.path.display());
    match read_code_file(&args.path)? {
        CodeFile::Grassmannian(file) => {
            let code = file.into_code()?;
            verify_grassmannian(&mut report, &code, args)?;
        }
        CodeFile::Rank(file) => {
            let code = file.into_code()?;
            verify_rank(&mut report, &code, args)?;
        }
    }
    report.wall_time_secs = start.elapsed().as_secs_f64();
    Ok(report)
}

fn selected(args: &VerifyArgs, applicable: &[CheckKind]) -> (Vec<CheckKind>, bool) {
    match &args.checks {
        Some(c) => (c.clone(), true),
        None => (applicable.to_vec(), false),
    }
}

fn verify_rank(report: &mut RunReport, code: &RankMetricCode, args: &VerifyArgs) -> Result<()> {
    let (k, l) = code.shape();
    report.param("p", code.modulus());
    report.param("shape", format!("{k}x{l}"));
    report.param("words", code.len());
    let applicable = [CheckKind::Distance, CheckKind::Mrd];
    let (checks, _) = selected(args, &applicable);
    if let Some(bad) = checks.iter().find(|c| !applicable.contains(c)) {
        return Err(Error::Inapplicable {
            check: bad.name().into(),
            what: "a rank-metric matrix code".into(),
        });
    }
    let exhaustive = pairs(code.len() as u128) <= args.guard;
    let delta = if exhaustive {
        code.pairwise_min_rank_distance()?
    } else {
        report.notes.push(format!(
            "{} pairs exceed the guard; rank distance sampled over {SAMPLED_PAIRS} pairs (seed {})",
            pairs(code.len() as u128),
            args.seed
        ));
        code.sampled_min_rank_distance(SAMPLED_PAIRS, args.seed)?
    };
    for check in checks {
        match check {
            CheckKind::Distance => {
                let omega = code
                    .min_nonzero_rank()
                    .ok_or(Error::TooFewWords)?;
                if code.is_linear() {
                    report.check(Check::new("min rank distance = min nonzero rank", omega, delta));
                } else {
                    report.notes.push(format!("non-linear code: min rank distance {delta}"));
                }
            }
            CheckKind::Mrd => {
                if !code.is_linear() {
                    return Err(Error::Inapplicable {
                        check: "mrd".into(),
                        what: "a non-linear matrix code".into(),
                    });
                }
                report.check(Check::new(
                    "singleton max dim",
                    singleton_max_dim(k, l, delta)?,
                    code.dimension()?,
                ));
            }
            _ => unreachable!("filtered above"),
        }
    }
    Ok(())
}

fn graph_summary(n: usize, edges: usize, degrees: &[usize]) -> String {
    let lo = degrees.iter().min().copied().unwrap_or(0);
    let hi = degrees.iter().max().copied().unwrap_or(0);
    let deg = if lo == hi {
        lo.to_string()
    } else {
        format!("{lo}..{hi}")
    };
    format!("N={n} edges={edges} degree={deg}")
}

fn verify_grassmannian(
    report: &mut RunReport,
    code: &GrassmannianCode,
    args: &VerifyArgs,
) -> Result<()> {
    report.param("p", code.modulus());
    report.param("n", code.ambient());
    report.param("k", code.dim());
    report.param("words", code.len());
    report.param("construction", &code.provenance().construction);
    guard_pairs(code.len() as u128, args.guard)?;
    let applicable = [
        CheckKind::Distance,
        CheckKind::Anticode,
        CheckKind::Dual,
        CheckKind::Graph,
    ];
    let (checks, explicit) = selected(args, &applicable);
    if checks.contains(&CheckKind::Mrd) {
        return Err(Error::Inapplicable {
            check: "mrd".into(),
            what: "a subspace code (MRD applies to matrix codes)".into(),
        });
    }
    let params = code.code_params()?;
    for check in checks {
        match check {
            CheckKind::Distance => match code.provenance().claimed {
                Some(claimed) => {
                    report.check(Check::new("parameters", claimed.tuple(), params.tuple()))
                }
                None if explicit => {
                    return Err(Error::Inapplicable {
                        check: "distance".into(),
                        what: "a code file without claimed parameters".into(),
                    })
                }
                None => report
                    .notes
                    .push(format!("no claimed parameters; computed {params}")),
            },
            CheckKind::Anticode => {
                let (num, den) = anticode_bound_fraction(
                    params.n,
                    params.d,
                    params.k,
                    params.q as u64,
                    Metric::Subspace,
                )?;
                report.check(Check::new("anticode bound attained", &num / &den, params.m));
            }
            CheckKind::Dual => {
                let dual = code.dual_code();
                let dp = dual.code_params()?;
                let expected = CodeParams {
                    k: params.n - params.k,
                    ..params
                };
                report.check(Check::new("dual parameters", expected.tuple(), dp.tuple()));
                let back = dual.dual_code();
                let same = back.words() == code.words();
                report.check(Check::new(
                    "dual involution",
                    "identity",
                    if same { "identity" } else { "differs" },
                ));
            }
            CheckKind::Graph => {
                let g = build_gamma(code);
                let n = g.vertex_count();
                report.check(Check::new(
                    "graph",
                    graph_summary(n, n * n.saturating_sub(1) / 2, &vec![n.saturating_sub(1); n]),
                    graph_summary(n, g.edge_count(), &g.degree_sequence()),
                ));
            }
            CheckKind::Mrd => unreachable!("rejected above"),
        }
    }
    Ok(())
}

// ---- graph ----

#[derive(Clone, Debug)]
pub struct GraphArgs {
    pub p: u32,
    pub r: usize,
    pub variant: Variant,
    pub dot: Option<PathBuf>,
    pub adjacency: Option<PathBuf>,
    pub guard: u128,
}

/// Sidecar path for a DOT file: `gamma.dot` -> `gamma.bases.json`.
pub fn sidecar_path(dot: &Path) -> PathBuf {
    dot.with_extension("bases.json")
}

pub fn cmd_graph(args: &GraphArgs, command: &str) -> Result<RunReport> {
    let start = Instant::now();
    let GraphArgs { p, r, variant, .. } = *args;
    require_construction_prime(p)?;
    if r == 0 {
        return Err(Error::Malformed("r must be at least 1".into()));
    }
    let expected = g_code_size(p, r);
    guard_pairs(big_to_u128(&expected), args.guard)?;
    let mut report = RunReport::new(command);
    report.param("p", p);
    report.param("r", r);
    report.param("variant", variant);
    let code = construct_g(p, r, variant)?;
    let g = build_gamma(&code);
    let n = big_to_u128(&expected) as usize;
    report.check(Check::new("vertices", n, g.vertex_count()));
    report.check(Check::new("edges", n * (n - 1) / 2, g.edge_count()));
    let degrees = g.degree_sequence();
    report.check(Check::new(
        "degrees",
        graph_summary(n, n * (n - 1) / 2, &vec![n - 1; n]),
        graph_summary(g.vertex_count(), g.edge_count(), &degrees),
    ));
    report.check(Check::new("complete", true, g.is_complete()));
    if let Some(dot) = &args.dot {
        fs::write(dot, g.to_dot())
            .map_err(|e| Error::Malformed(format!("cannot write {}: {e}", dot.display())))?;
        let side = sidecar_path(dot);
        write_json(&side, &g.sidecar())?;
        report
            .notes
            .push(format!("wrote {} and {}", dot.display(), side.display()));
    }
    if let Some(adj) = &args.adjacency {
        fs::write(adj, g.adjacency_csv())
            .map_err(|e| Error::Malformed(format!("cannot write {}: {e}", adj.display())))?;
        report.notes.push(format!("wrote {}", adj.display()));
    }
    report.wall_time_secs = start.elapsed().as_secs_f64();
    Ok(report)
}

// ---- bound / params ----

/// The anticode bound value; non-integral quotients are floored.
pub fn cmd_bound(n: usize, d: usize, k: usize, q: u64, metric: Metric) -> Result<BigUint> {
    anticode_bound(n, d, k, q, metric)
}

/// One-line parameter summary of a code file, recomputed from its words.
pub fn cmd_params(path: &Path, guard: u128, seed: u64) -> Result<String> {
    match read_code_file(path)? {
        CodeFile::Grassmannian(file) => {
            let code = file.into_code()?;
            guard_pairs(code.len() as u128, guard)?;
            Ok(code.code_params()?.to_string())
        }
        CodeFile::Rank(file) => {
            let code = file.into_code()?;
            let (k, l) = code.shape();
            let delta = if pairs(code.len() as u128) <= guard {
                code.pairwise_min_rank_distance()?
            } else {
                code.sampled_min_rank_distance(SAMPLED_PAIRS, seed)?
            };
            let rho = code
                .dimension()
                .map(|r| r.to_string())
                .unwrap_or_else(|_| "-".into());
            Ok(format!(
                "k={k} l={l} M={} rho={rho} delta={delta} q={}",
                code.len(),
                code.modulus()
            ))
        }
    }
}
