//! The jobs behind the `tvx` command line.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use num::Zero;

use crate::error::{Error, Result};
use crate::gw::{
    analyze_basis, enumerate_partitions, extract_from_wall, render_class, solve_degeneration, trop_to_relative,
    GwSeed, InvariantTable, TangencyProfile, WeightClass,
};
use crate::io::{self, Document};
use crate::lattice::LatticeVector;
use crate::perturbation::{complete_by_perturbation, perturb, StandardDiagram};
use crate::rational::{fmt_q, q, Q};
use crate::scattering::{ScatteringDiagram, SupportKind};
use crate::tropical::{count_by_oracle, count_tropical, generic_anchors, ORACLE_MAX_ENDS};
use crate::wcf::{render_report, round_trip, verify_wcf};

/// Seed used when none is given, so repeated runs agree byte for byte.
pub const DEFAULT_SEED: u64 = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Complete,
    Check,
    Tropical,
    Gw,
    Wcf,
    Render,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Ks,
    Perturb,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Structured,
    Svg,
}

#[derive(Clone, Debug)]
pub struct Job {
    pub command: Command,
    pub input: PathBuf,
    pub order: Option<u32>,
    pub seed: u64,
    pub mode: Mode,
    pub format: Format,
}

impl Job {
    pub fn new(command: Command, input: impl Into<PathBuf>) -> Self {
        Job { command, input: input.into(), order: None, seed: DEFAULT_SEED, mode: Mode::Ks, format: Format::Text }
    }
}

/// Result of a job: `ok = false` means an inconsistency or a failed
/// verification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub ok: bool,
    pub output: String,
    pub warnings: Vec<String>,
}

impl Outcome {
    fn pass(output: String) -> Self {
        Outcome { ok: true, output, warnings: Vec::new() }
    }

    /// 0 on success, 1 on a failed check.
    pub fn exit_code(&self) -> u8 {
        if self.ok {
            0
        } else {
            1
        }
    }
}

/// Reads the input file and runs the job. Errors are input errors.
pub fn run(job: &Job) -> Result<Outcome> {
    let text = std::fs::read_to_string(&job.input)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", job.input.display())))?;
    run_text(job, &text)
}

pub fn run_text(job: &Job, text: &str) -> Result<Outcome> {
    if job.order == Some(0) {
        return Err(Error::Input("order must be at least 1".into()));
    }
    let doc = io::parse_document(text)?;
    match job.command {
        Command::Complete => complete(job, text, &doc),
        Command::Check => check(job, text, &doc),
        Command::Tropical => tropical(job, &doc),
        Command::Gw => gw(job, text, &doc),
        Command::Wcf => wcf(job, text, &doc),
        Command::Render => render(job, text, &doc),
    }
}

fn order_for(job: &Job, d: &ScatteringDiagram) -> u32 {
    job.order.unwrap_or_else(|| d.ring().max_degree())
}

fn describe_walls(d: &ScatteringDiagram, seed: &ScatteringDiagram) -> Result<String> {
    let mut s = String::new();
    let new = d.new_rays(seed);
    let _ = writeln!(s, "{} walls, {} new rays", d.walls().len(), new.len());
    for w in &new {
        let kind = if w.kind == SupportKind::Ray { "ray" } else { "line" };
        let (mat, sca) = w.functions()?;
        let _ = writeln!(s, "{kind} {} from {}", w.m, w.base);
        let mat = io::series_lines(&mat);
        if mat.len() > 1 || mat.first().is_some_and(|l| !l.ends_with(": 1")) {
            let _ = writeln!(s, "  F = {}", mat.join(" ; "));
        }
        let _ = writeln!(s, "  f = {}", io::series_lines(&sca).join(" ; "));
    }
    Ok(s)
}

fn completed(job: &Job, d: &ScatteringDiagram) -> Result<ScatteringDiagram> {
    let order = order_for(job, d);
    let done = match job.mode {
        Mode::Ks => d.complete_ks(order)?,
        Mode::Perturb => complete_by_perturbation(&StandardDiagram::new(d.clone())?, job.seed)?,
    };
    Ok(done.canonical())
}

fn complete(job: &Job, text: &str, doc: &Document) -> Result<Outcome> {
    let d = io::diagram_from(text, doc)?;
    let done = completed(job, &d)?;
    let output = match job.format {
        Format::Text => describe_walls(&done, &d)?,
        Format::Structured => io::emit_diagram(&done),
        Format::Svg => crate::svg::render_diagram(&done, "completed diagram"),
    };
    Ok(Outcome::pass(output))
}

fn check(job: &Job, text: &str, doc: &Document) -> Result<Outcome> {
    let d = io::diagram_from(text, doc)?;
    let defects = d.check_consistency(order_for(job, &d))?;
    let mut s = String::new();
    match job.format {
        Format::Structured => {
            let _ = writeln!(s, "consistent = {}", defects.is_empty());
            for df in &defects {
                let _ = writeln!(s, "\n[[defect]]\npoint = [\"{}\", \"{}\"]\nlog = [", fmt_q(&df.point.x), fmt_q(&df.point.y));
                for l in io::lie_lines(&df.log) {
                    let _ = writeln!(s, "    \"{l}\",");
                }
                s.push_str("]\n");
            }
        }
        _ => {
            if defects.is_empty() {
                let _ = writeln!(s, "consistent ({} singular points)", d.singular_points().len());
            }
            for df in &defects {
                let _ = writeln!(s, "defect at {}:", df.point);
                for l in io::lie_lines(&df.log) {
                    let _ = writeln!(s, "  {l}");
                }
            }
        }
    }
    Ok(Outcome { ok: defects.is_empty(), output: s, warnings: Vec::new() })
}

/// One row of a tropical table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropicalRow {
    pub weights: Vec<LatticeVector>,
    pub n_trop: u64,
    pub oracle: Option<u64>,
    pub relative: Q,
}

/// `N^trop` for every partition of a tangency profile, with the oracle
/// count when the number of ends allows it.
pub fn tropical_table(p: Vec<u32>, m: Vec<LatticeVector>, seed: u64) -> Result<Vec<TropicalRow>> {
    let prof = TangencyProfile::new(p, m)?;
    let mut rows = Vec::new();
    for k in enumerate_partitions(&prof) {
        let w = k.weights(&prof.m);
        let n_trop = count_tropical(&w, seed)?;
        let oracle =
            if w.len() <= ORACLE_MAX_ENDS { Some(count_by_oracle(&w, &generic_anchors(w.len(), seed))?) } else { None };
        let relative = trop_to_relative(&q(n_trop as i64), &k);
        rows.push(TropicalRow { weights: w, n_trop, oracle, relative });
    }
    Ok(rows)
}

fn tropical(job: &Job, doc: &Document) -> Result<Outcome> {
    let t = doc.tropical.as_ref().ok_or_else(|| Error::Input("missing [tropical] table".into()))?;
    let (p, m) = io::tropical_profile(t);
    let seed = t.seed.unwrap_or(job.seed);
    let rows = tropical_table(p.clone(), m, seed)?;
    let ok = rows.iter().all(|r| r.oracle.map_or(true, |o| o == r.n_trop));
    let mut s = String::new();
    let structured = job.format == Format::Structured;
    if !structured {
        let _ = writeln!(s, "P = {p:?}");
    }
    for r in &rows {
        let w = render_class(&r.weights);
        let oracle = r.oracle.map_or("-".to_string(), |o| o.to_string());
        if structured {
            let ws: Vec<String> = r.weights.iter().map(|v| format!("[{}, {}]", v.a, v.b)).collect();
            let _ = writeln!(
                s,
                "[[class]]\nweights = [{}]\nn_trop = {}\noracle = \"{oracle}\"\nrelative = \"{}\"\n",
                ws.join(", "),
                r.n_trop,
                fmt_q(&r.relative)
            );
        } else {
            let _ = writeln!(s, "w = {w}: N^trop = {}, oracle = {oracle}, N_0,w = {}", r.n_trop, fmt_q(&r.relative));
        }
    }
    Ok(Outcome { ok, output: s, warnings: Vec::new() })
}

/// A weight class written with the seed directions, e.g. `(m1,m1,2m2)`.
pub fn class_name(w: &WeightClass, dirs: &[LatticeVector]) -> String {
    let mut parts: Vec<(usize, i64)> = w
        .iter()
        .map(|v| {
            let j = dirs.iter().position(|d| *d == v.primitive()).unwrap_or(usize::MAX);
            (j, v.index() as i64)
        })
        .collect();
    parts.sort_unstable();
    let names: Vec<String> = parts
        .iter()
        .map(|&(j, l)| {
            let base = if j == usize::MAX { "?".to_string() } else { format!("m{}", j + 1) };
            if l == 1 {
                base
            } else {
                format!("{l}{base}")
            }
        })
        .collect();
    format!("({})", names.join(","))
}

/// Invariants of one ray: the extraction table, classes solved through the
/// degeneration formula and the tropical re-count of every class.
#[derive(Clone, Debug)]
pub struct InvariantChain {
    pub table: InvariantTable,
    pub degenerate: BTreeMap<WeightClass, Q>,
    /// `(class, N^trop, N^trop / Π l, agrees)`.
    pub tropical: Vec<(WeightClass, u64, Q, bool)>,
}

impl InvariantChain {
    pub fn ok(&self) -> bool {
        self.tropical.iter().all(|t| t.3)
    }

    /// Every known `N_{0,w}`.
    pub fn relative(&self) -> BTreeMap<WeightClass, Q> {
        let mut all = self.table.weights.clone();
        all.extend(self.degenerate.clone());
        all
    }
}

pub fn invariant_chain(seed: &GwSeed, done: &ScatteringDiagram, ray: LatticeVector, count_seed: u64) -> Result<InvariantChain> {
    let table = extract_from_wall(seed, done, ray)?;
    let dirs = seed.directions();
    let mut degenerate = BTreeMap::new();
    for (p, _, n_p) in &table.profiles {
        let prof = TangencyProfile::new(p.clone(), dirs.clone())?;
        let classes: Vec<WeightClass> = enumerate_partitions(&prof).iter().map(|k| k.class(&dirs)).collect();
        if !classes.iter().any(|w| table.undetermined.contains(w)) {
            continue;
        }
        let mut known = table.weights.clone();
        known.extend(degenerate.clone());
        if let Ok((w, n)) = solve_degeneration(&known, &prof, n_p) {
            degenerate.insert(w, n);
        }
    }
    let mut tropical = Vec::new();
    let mut all = table.weights.clone();
    all.extend(degenerate.clone());
    for (w, n) in &all {
        let n_trop = count_tropical(w, count_seed)?;
        let product: u64 = w.iter().map(|v| v.index()).product();
        let rel = q(n_trop as i64) / q(product as i64);
        tropical.push((w.clone(), n_trop, rel.clone(), rel == *n));
    }
    Ok(InvariantChain { table, degenerate, tropical })
}

/// `N_{0,(2,1)} = 0; N_{0,(m1,m1,m2)} = 1`.
pub fn summary_line(chain: &InvariantChain, dirs: &[LatticeVector]) -> String {
    let mut parts = Vec::new();
    for (p, _, n) in &chain.table.profiles {
        let ps: Vec<String> = p.iter().map(|x| x.to_string()).collect();
        parts.push(format!("N_{{0,({})}} = {}", ps.join(","), fmt_q(n)));
    }
    for (w, n) in &chain.table.weights {
        parts.push(format!("N_{{0,{}}} = {}", class_name(w, dirs), fmt_q(n)));
    }
    parts.join("; ")
}

fn gw(job: &Job, text: &str, doc: &Document) -> Result<Outcome> {
    let g = doc.gw.as_ref().ok_or_else(|| Error::Input("missing [gw] table".into()))?;
    let (ring, lines) = io::gw_lines(text, doc)?;
    let seed = GwSeed::new(&ring, lines)?;
    let ray = LatticeVector::new(g.ray[0], g.ray[1]);
    if !ray.is_primitive() {
        return Err(Error::Input(format!("ray {ray} is not primitive")));
    }
    let count_seed = g.seed.unwrap_or(job.seed);
    let order = job.order.or(g.order).unwrap_or_else(|| ring.max_degree());
    let mut warnings = Vec::new();
    for prof in seed.profiles_on(ray) {
        let need: u32 = prof.p.iter().sum();
        if need > order {
            warnings.push(format!("order {order} is below the degree {need} needed for P = {:?}", prof.p));
        }
    }
    let std = seed.standard_diagram()?;
    let done = match job.mode {
        Mode::Ks => std.diagram().complete_ks(order)?,
        Mode::Perturb => complete_by_perturbation(&std, job.seed)?,
    };
    let chain = invariant_chain(&seed, &done, ray, count_seed)?;
    let dirs = seed.directions();
    let mut s = String::new();
    let _ = writeln!(s, "{}", summary_line(&chain, &dirs));
    for (p, l, n) in &chain.table.profiles {
        let _ = writeln!(s, "N_0,P {p:?} (l = {l}) = {}", fmt_q(n));
    }
    for (w, n) in &chain.table.weights {
        let _ = writeln!(s, "N_0,w {} = {}", class_name(w, &dirs), fmt_q(n));
    }
    for w in &chain.table.undetermined {
        match chain.degenerate.get(w) {
            Some(n) => {
                let _ = writeln!(s, "N_0,w {} = {} (degeneration formula)", class_name(w, &dirs), fmt_q(n));
            }
            None => {
                let _ = writeln!(s, "N_0,w {} undetermined", class_name(w, &dirs));
            }
        }
    }
    for (w, n_trop, rel, agree) in &chain.tropical {
        let verdict = if *agree { "agrees" } else { "DISAGREES" };
        let _ = writeln!(s, "tropical {}: N^trop = {n_trop}, N^trop / prod l = {} {verdict}", class_name(w, &dirs), fmt_q(rel));
    }
    if let Some(b) = &doc.basis {
        let a = analyze_basis(b.ell[0], b.ell[1], (b.target[0], b.target[1]))?;
        s.push_str(&a.render());
    }
    Ok(Outcome { ok: chain.ok(), output: s, warnings })
}

fn wcf(job: &Job, text: &str, doc: &Document) -> Result<Outcome> {
    let w = io::wcf_from(text, doc, job.order)?;
    let d = &w.data;
    let mut s = String::new();
    let mut ok = true;
    if let Some((a, b, c)) = d.check_twist(&d.generators(1)) {
        ok = false;
        let _ = writeln!(s, "twist fails the cocycle condition on ({a}, {b}, {c})");
    }
    let rep = verify_wcf(d, &w.lhs, &w.rhs, &d.generators(1));
    ok &= rep.is_equal();
    let _ = writeln!(s, "group identity through order {}: {}", d.order, render_report(&rep));
    match round_trip(d, &w.lhs, &w.rhs) {
        Ok((found, same)) => {
            ok &= same;
            let rays: Vec<String> = found.iter().map(|f| f.to_string()).collect();
            let verdict = if same { "match" } else { "do not match" };
            let _ = writeln!(s, "scattering rays [{}] {verdict} the new factors", rays.join(", "));
        }
        Err(e @ (Error::Hypothesis(_) | Error::InvalidWall(_))) => {
            ok = false;
            let _ = writeln!(s, "scattering round trip failed: {e}");
        }
        Err(e) => return Err(e),
    }
    Ok(Outcome { ok, output: s, warnings: Vec::new() })
}

fn render(job: &Job, text: &str, doc: &Document) -> Result<Outcome> {
    let d = io::diagram_from(text, doc)?;
    let svg = match job.mode {
        Mode::Ks => {
            let done = if d.is_central() { completed(job, &d)? } else { d };
            crate::svg::render_diagram(&done, "scattering diagram")
        }
        Mode::Perturb => {
            let p = perturb(&StandardDiagram::new(d)?, job.seed)?;
            crate::svg::render_perturbed(&p, "perturbed diagram")
        }
    };
    Ok(Outcome::pass(svg))
}

/// `true` when the value is an integer, for report formatting.
pub fn is_integral(x: &Q) -> bool {
    (x - x.floor()).is_zero()
}
