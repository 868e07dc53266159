//! Structured text documents and the canonical term syntax.
//!
//! Documents are TOML. A diagram document has a `[ring]` table and
//! `[[wall]]` entries; a wall-crossing document has `[groupoid]`, `[[lhs]]`
//! and `[[rhs]]`; invariant jobs use `[tropical]`, `[gw]`, `[[line]]` and
//! `[basis]`. Series and Lie elements are lists of term strings
//!
//! ```text
//! z^(a,b) t1^2 t2 u_{1,2} : <coefficient>
//! z^(a,b) t1 : <matrix or polynomial> d=(<poly>,<poly>)
//! ```
//!
//! with coefficients `p/q`, products `2*A^2*B`, sums `x + -1/2*A` and
//! matrices `[[..,..],[..,..]]`.

use std::fmt::Write as _;
use std::ops::Range;
use std::sync::Arc;

use num::One;
use serde::Deserialize;
use toml::Spanned;

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::lattice::{LatticeVector, RPoint};
use crate::lie::{LieCoef, LieElement};
use crate::poly::Poly;
use crate::rational::{fmt_q, parse_q, Q};
use crate::scattering::{ScatteringDiagram, SupportKind, Wall};
use crate::series::{MultiDegree, Ring, Series};
use crate::wcf::{Factor, GroupoidData, Mor, TwistRule, POINT};

/// `(line, column)`, both one-based, of a byte offset.
pub fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(text.len());
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

fn parse_error(text: &str, span: Option<Range<usize>>, msg: impl Into<String>) -> Error {
    let (line, col) = span.map_or((1, 1), |r| line_col(text, r.start));
    Error::Parse { line, col, msg: msg.into() }
}

/// A string value remembers where it came from, so errors in term syntax
/// point into the document.
fn at<T>(text: &str, s: &Spanned<String>, r: std::result::Result<T, String>) -> Result<T> {
    r.map_err(|m| parse_error(text, Some(s.span()), m))
}

fn symbol_id(ring: &Ring, name: &str) -> Option<u16> {
    ring.symbol_id(name).or_else(|| {
        let id: u16 = name.strip_prefix('s')?.parse().ok()?;
        (id as usize >= ring.symbols().len()).then_some(id)
    })
}

/// Parses `c*A^2*B + -1*C + 3/4`.
pub fn parse_poly(s: &str, ring: &Ring) -> std::result::Result<Poly, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty polynomial".into());
    }
    let mut out = Poly::zero();
    for term in s.split(" + ") {
        let mut t = Poly::one();
        for factor in term.trim().split('*') {
            let f = factor.trim();
            if let Some(c) = parse_q(f) {
                t = t.scale(&c);
                continue;
            }
            let (neg, f) = match f.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, f),
            };
            let (name, e) = match f.split_once('^') {
                Some((n, e)) => (n, e.parse::<u32>().map_err(|_| format!("bad exponent in `{factor}`"))?),
                None => (f, 1),
            };
            let id = symbol_id(ring, name).ok_or_else(|| format!("unknown symbol `{name}`"))?;
            t = t.mul(&Poly::symbol(id).pow(e));
            if neg {
                t = t.scale(&-Q::one());
            }
        }
        out = out.add(&t);
    }
    Ok(out)
}

fn split_top(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, ch) in s.char_indices() {
        match ch {
            '[' | '(' | '{' => depth += 1,
            ']' | ')' | '}' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

fn strip_brackets(s: &str) -> Option<&str> {
    s.trim().strip_prefix('[')?.strip_suffix(']')
}

/// A polynomial, or a square matrix of polynomials `[[..],[..]]`.
pub fn parse_coeff(s: &str, ring: &Ring) -> std::result::Result<Coeff, String> {
    let s = s.trim();
    if !s.starts_with('[') {
        return parse_poly(s, ring).map(Coeff::scalar);
    }
    let inner = strip_brackets(s).ok_or("unbalanced matrix brackets")?;
    let mut rows = Vec::new();
    for row in split_top(inner) {
        let body = strip_brackets(row).ok_or_else(|| format!("bad matrix row `{row}`"))?;
        rows.push(split_top(body).into_iter().map(|e| parse_poly(e, ring)).collect::<std::result::Result<Vec<_>, _>>()?);
    }
    let r = rows.len();
    if r != ring.rank() {
        return Err(format!("matrix of size {r} in a ring of rank {}", ring.rank()));
    }
    Coeff::from_rows(rows).ok_or_else(|| "matrix is not square".into())
}

fn parse_vector(s: &str) -> std::result::Result<LatticeVector, String> {
    let body = s.trim().strip_prefix('(').and_then(|x| x.strip_suffix(')')).ok_or_else(|| format!("bad vector `{s}`"))?;
    let (a, b) = body.split_once(',').ok_or_else(|| format!("bad vector `{s}`"))?;
    let p = |x: &str| x.trim().parse::<i64>().map_err(|_| format!("bad vector `{s}`"));
    Ok(LatticeVector::new(p(a)?, p(b)?))
}

/// `z^(a,b) t1^2 u_{1,2}`.
pub fn parse_head(s: &str, ring: &Ring) -> std::result::Result<(LatticeVector, MultiDegree), String> {
    let mut tokens = s.split_whitespace();
    let z = tokens.next().ok_or("missing monomial")?;
    let m = parse_vector(z.strip_prefix("z^").ok_or_else(|| format!("expected `z^(a,b)`, found `{z}`"))?)?;
    let mut t = vec![0u32; ring.n_t()];
    let mut u = Vec::new();
    for tok in tokens {
        if let Some(rest) = tok.strip_prefix("u_{").and_then(|r| r.strip_suffix('}')) {
            let (i, j) = rest.split_once(',').ok_or_else(|| format!("bad flag `{tok}`"))?;
            let p = |x: &str| x.parse::<u16>().map_err(|_| format!("bad flag `{tok}`"));
            u.push((p(i)?, p(j)?));
            continue;
        }
        let (name, e) = match tok.split_once('^') {
            Some((n, e)) => (n, e.parse::<u32>().map_err(|_| format!("bad exponent in `{tok}`"))?),
            None => (tok, 1),
        };
        let i = ring.t_names().iter().position(|x| x == name).ok_or_else(|| format!("unknown parameter `{name}`"))?;
        t[i] += e;
    }
    u.sort_unstable();
    let d = MultiDegree { t, u };
    if !ring.admits(&d) {
        return Err(format!("monomial `{s}` vanishes in the ring"));
    }
    Ok((m, d))
}

fn render_head(ring: &Ring, m: LatticeVector, d: &MultiDegree) -> String {
    let deg = ring.render_degree(d);
    if deg.is_empty() {
        format!("z^{m}")
    } else {
        format!("z^{m} {deg}")
    }
}

fn render_coeff(ring: &Ring, c: &Coeff) -> String {
    let c = if ring.rank() > 1 { c.lift(ring.rank()) } else { c.clone() };
    c.render(ring.symbols())
}

/// One line per term in canonical order.
pub fn series_lines(s: &Series) -> Vec<String> {
    let ring = s.ring();
    s.terms().map(|((m, d), c)| format!("{} : {}", render_head(ring, *m, d), render_coeff(ring, c))).collect()
}

pub fn parse_series_term(line: &str, ring: &Ring) -> std::result::Result<(LatticeVector, MultiDegree, Coeff), String> {
    let (head, body) = line.split_once(" : ").ok_or("expected `<monomial> : <coefficient>`")?;
    let (m, d) = parse_head(head, ring)?;
    Ok((m, d, parse_coeff(body, ring)?))
}

pub fn lie_lines(x: &LieElement) -> Vec<String> {
    let ring = x.ring();
    x.terms()
        .map(|((m, d), c)| {
            format!(
                "{} : {} d=({},{})",
                render_head(ring, *m, d),
                render_coeff(ring, &c.mat),
                c.d[0].render(ring.symbols()),
                c.d[1].render(ring.symbols())
            )
        })
        .collect()
}

pub fn parse_lie_term(line: &str, ring: &Ring) -> std::result::Result<(LatticeVector, MultiDegree, LieCoef), String> {
    let (head, body) = line.split_once(" : ").ok_or("expected `<monomial> : <matrix> d=(<d1>,<d2>)`")?;
    let (m, d) = parse_head(head, ring)?;
    let (mat, der) = body.rsplit_once(" d=").ok_or("missing `d=(d1,d2)`")?;
    let der = der.trim().strip_prefix('(').and_then(|x| x.strip_suffix(')')).ok_or("bad `d=(d1,d2)`")?;
    let parts = split_top(der);
    if parts.len() != 2 {
        return Err("`d=` needs two components".into());
    }
    let mat = parse_coeff(mat, ring)?.lift(ring.rank());
    Ok((m, d, LieCoef::new(mat, parse_poly(parts[0], ring)?, parse_poly(parts[1], ring)?)))
}

// ---------------------------------------------------------------------------
// Document schema

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub ring: Option<RingDoc>,
    #[serde(default)]
    pub wall: Vec<WallDoc>,
    pub groupoid: Option<GroupoidDoc>,
    #[serde(default)]
    pub lhs: Vec<FactorDoc>,
    #[serde(default)]
    pub rhs: Vec<FactorDoc>,
    pub tropical: Option<TropicalDoc>,
    pub gw: Option<GwDoc>,
    #[serde(default)]
    pub line: Vec<LineDoc>,
    pub basis: Option<BasisDoc>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingDoc {
    pub params: Vec<String>,
    pub cap: Option<u32>,
    pub total: Option<u32>,
    pub rank: Option<usize>,
    #[serde(default)]
    pub symbols: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WallDoc {
    pub kind: Spanned<String>,
    pub m: [i64; 2],
    pub base: Option<[Spanned<String>; 2]>,
    pub log: Option<Vec<Spanned<String>>>,
    pub matrix: Option<Vec<Spanned<String>>>,
    pub scalar: Option<Vec<Spanned<String>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupoidDoc {
    pub objects: usize,
    #[serde(default = "one_i64")]
    pub dirac: i64,
    pub order: Option<u32>,
    pub twist: Option<Spanned<String>>,
    #[serde(default)]
    pub offsets: Vec<[i64; 3]>,
}

fn one_i64() -> i64 {
    1
}

fn one_u32() -> u32 {
    1
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, tag = "type")]
pub enum FactorDoc {
    S {
        from: i64,
        to: i64,
        m: [i64; 2],
        mu: i64,
        #[serde(default = "one_u32")]
        h: u32,
    },
    K {
        gamma: [i64; 2],
        omega: i64,
        #[serde(default = "one_u32")]
        h: u32,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TropicalDoc {
    pub m: Vec<[i64; 2]>,
    pub p: Vec<u32>,
    pub seed: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GwDoc {
    pub ray: [i64; 2],
    pub order: Option<u32>,
    pub seed: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineDoc {
    pub m: [i64; 2],
    pub a: Spanned<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisDoc {
    pub ell: [u32; 2],
    pub target: [u32; 2],
}

/// Parses a document, reporting TOML and schema errors with positions.
pub fn parse_document(text: &str) -> Result<Document> {
    toml::from_str(text).map_err(|e| parse_error(text, e.span(), e.message().to_string()))
}

fn lattice(v: [i64; 2]) -> LatticeVector {
    LatticeVector::new(v[0], v[1])
}

/// The coefficient ring declared by `[ring]`.
pub fn build_ring(doc: &RingDoc) -> Result<Arc<Ring>> {
    let n = doc.params.len();
    if n == 0 {
        return Err(Error::Input("[ring] needs at least one parameter".into()));
    }
    let ring = match (doc.cap, doc.total) {
        (Some(c), total) => Ring::r_n(n, c).with_total_cap(total),
        (None, Some(t)) => Ring::graded(n, t),
        (None, None) => return Err(Error::Input("[ring] needs `cap` or `total`".into())),
    };
    let rank = doc.rank.unwrap_or(1);
    if rank == 0 {
        return Err(Error::Input("rank must be positive".into()));
    }
    Ok(ring.with_t_names(doc.params.clone()).with_rank(rank).with_symbols(doc.symbols.clone()).shared())
}

fn require_ring(text: &str, doc: &Document) -> Result<Arc<Ring>> {
    let r = doc.ring.as_ref().ok_or_else(|| parse_error(text, None, "missing [ring] table"))?;
    build_ring(r)
}

fn parse_base(text: &str, b: &[Spanned<String>; 2]) -> Result<RPoint> {
    let p = |s: &Spanned<String>| at(text, s, parse_q(s.get_ref()).ok_or_else(|| format!("bad rational `{}`", s.get_ref())));
    Ok(RPoint::new(p(&b[0])?, p(&b[1])?))
}

fn series_from(text: &str, ring: &Arc<Ring>, lines: &[Spanned<String>]) -> Result<Series> {
    let mut s = Series::zero(ring);
    for l in lines {
        let (m, d, c) = at(text, l, parse_series_term(l.get_ref(), ring))?;
        s.add_term(m, d, c);
    }
    Ok(s)
}

fn wall_from(text: &str, ring: &Arc<Ring>, w: &WallDoc) -> Result<Wall> {
    let kind = match w.kind.get_ref().as_str() {
        "line" => SupportKind::Line,
        "ray" => SupportKind::Ray,
        other => return Err(parse_error(text, Some(w.kind.span()), format!("unknown wall kind `{other}`"))),
    };
    let base = match &w.base {
        Some(b) => parse_base(text, b)?,
        None => RPoint::origin(),
    };
    let m = lattice(w.m);
    let here = |e: Error| parse_error(text, Some(w.kind.span()), e.to_string());
    match (&w.log, &w.matrix, &w.scalar) {
        (Some(log), None, None) => {
            let mut x = LieElement::zero(ring);
            for l in log {
                let (k, d, c) = at(text, l, parse_lie_term(l.get_ref(), ring))?;
                x.add_term(k, d, c);
            }
            Wall::new(m, kind, base, x).map_err(here)
        }
        (None, mat, sca) if mat.is_some() || sca.is_some() => {
            let mat = match mat {
                Some(lines) => series_from(text, ring, lines)?,
                None => Series::identity(ring),
            };
            let sca = match sca {
                Some(lines) => series_from(text, ring, lines)?,
                None => Series::one(ring),
            };
            if let Some(((k, _), _)) = mat.terms().chain(sca.terms()).find(|((k, _), _)| !k.is_zero() && !k.on_ray(m)) {
                return Err(here(Error::InvalidWall(format!("exponent {k} off the ray of {m}"))));
            }
            Wall::from_functions(m, kind, base, &mat, &sca).map_err(here)
        }
        _ => Err(here(Error::Input("a wall needs either `log` or `matrix`/`scalar`".into()))),
    }
}

/// Parses a diagram document.
pub fn parse_diagram(text: &str) -> Result<ScatteringDiagram> {
    let doc = parse_document(text)?;
    diagram_from(text, &doc)
}

pub fn diagram_from(text: &str, doc: &Document) -> Result<ScatteringDiagram> {
    let ring = require_ring(text, doc)?;
    let walls = doc.wall.iter().map(|w| wall_from(text, &ring, w)).collect::<Result<Vec<_>>>()?;
    ScatteringDiagram::with_walls(&ring, walls)
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            _ => out.push(ch),
        }
    }
    out.push('"');
    out
}

fn string_list(items: &[String]) -> String {
    let v: Vec<String> = items.iter().map(|s| quote(s)).collect();
    format!("[{}]", v.join(", "))
}

/// The `[ring]` table.
pub fn emit_ring(ring: &Ring) -> String {
    let mut s = String::from("[ring]\n");
    let _ = writeln!(s, "params = {}", string_list(ring.t_names()));
    if let Some(c) = ring.t_cap() {
        let _ = writeln!(s, "cap = {c}");
    }
    if let Some(t) = ring.total_cap() {
        let _ = writeln!(s, "total = {t}");
    }
    if ring.rank() > 1 {
        let _ = writeln!(s, "rank = {}", ring.rank());
    }
    if !ring.symbols().is_empty() {
        let _ = writeln!(s, "symbols = {}", string_list(ring.symbols()));
    }
    s
}

/// Writes a diagram document; `parse_diagram` reads it back unchanged.
pub fn emit_diagram(d: &ScatteringDiagram) -> String {
    let mut s = emit_ring(d.ring());
    for w in d.walls() {
        let kind = match w.kind {
            SupportKind::Line => "line",
            SupportKind::Ray => "ray",
        };
        let _ = write!(
            s,
            "\n[[wall]]\nkind = \"{kind}\"\nm = [{}, {}]\nbase = [\"{}\", \"{}\"]\nlog = [\n",
            w.m.a,
            w.m.b,
            fmt_q(&w.base.x),
            fmt_q(&w.base.y)
        );
        for l in lie_lines(&w.log) {
            let _ = writeln!(s, "    {},", quote(&l));
        }
        s.push_str("]\n");
    }
    s
}

/// Groupoid data and the two words of a wall-crossing identity.
#[derive(Clone, Debug)]
pub struct WcfJob {
    pub data: GroupoidData,
    pub lhs: Vec<Factor>,
    pub rhs: Vec<Factor>,
}

fn object(i: i64) -> Result<usize> {
    if i < 0 {
        Ok(POINT)
    } else {
        Ok(i as usize)
    }
}

fn factor_from(f: &FactorDoc) -> Result<Factor> {
    Ok(match *f {
        FactorDoc::S { from, to, m, mu, h } => Factor::S { a: Mor::new(object(from)?, object(to)?, lattice(m)), mu, h },
        FactorDoc::K { gamma, omega, h } => Factor::K { gamma: lattice(gamma), big_omega: omega, h },
    })
}

/// Reads `[groupoid]`, `[[lhs]]` and `[[rhs]]`. Object `-1` is the point.
pub fn wcf_from(text: &str, doc: &Document, order: Option<u32>) -> Result<WcfJob> {
    let g = doc.groupoid.as_ref().ok_or_else(|| parse_error(text, None, "missing [groupoid] table"))?;
    let order = order.or(g.order).unwrap_or(4);
    let mut data = GroupoidData::new(g.objects, g.dirac, order);
    if let Some(t) = &g.twist {
        let rule = match t.get_ref().as_str() {
            "bilinear" => TwistRule::Bilinear,
            "lattice" => TwistRule::LatticeOnly,
            other => return Err(parse_error(text, Some(t.span()), format!("unknown twist `{other}`"))),
        };
        data = data.with_twist(rule);
    }
    for [i, a, b] in &g.offsets {
        data = data.with_offset(object(*i)?, LatticeVector::new(*a, *b));
    }
    let lhs = doc.lhs.iter().map(factor_from).collect::<Result<Vec<_>>>()?;
    let rhs = doc.rhs.iter().map(factor_from).collect::<Result<Vec<_>>>()?;
    for f in lhs.iter().chain(&rhs) {
        if let Factor::S { a, .. } = f {
            if a.i == a.j || a.i >= g.objects || a.j >= g.objects {
                return Err(Error::Input(format!("S factor {f} must join two distinct objects")));
            }
        }
    }
    Ok(WcfJob { data, lhs, rhs })
}

fn object_id(i: usize) -> i64 {
    if i == POINT {
        -1
    } else {
        i as i64
    }
}

fn emit_factor(s: &mut String, table: &str, f: &Factor) {
    let _ = writeln!(s, "\n[[{table}]]");
    match f {
        Factor::S { a, mu, h } => {
            let _ = writeln!(s, "type = \"S\"\nfrom = {}\nto = {}\nm = [{}, {}]\nmu = {mu}\nh = {h}", object_id(a.i), object_id(a.j), a.m.a, a.m.b);
        }
        Factor::K { gamma, big_omega, h } => {
            let _ = writeln!(s, "type = \"K\"\ngamma = [{}, {}]\nomega = {big_omega}\nh = {h}", gamma.a, gamma.b);
        }
    }
}

/// Writes a wall-crossing document.
pub fn emit_wcf(job: &WcfJob) -> String {
    let d = &job.data;
    let mut s = String::from("[groupoid]\n");
    let _ = writeln!(s, "objects = {}\ndirac = {}\norder = {}", d.objects, d.dirac, d.order);
    let twist = match d.twist {
        TwistRule::Bilinear => "bilinear",
        TwistRule::LatticeOnly => "lattice",
    };
    let _ = writeln!(s, "twist = \"{twist}\"");
    if !d.offsets.is_empty() {
        let v: Vec<String> = d.offsets.iter().map(|(i, b)| format!("[{}, {}, {}]", object_id(*i), b.a, b.b)).collect();
        let _ = writeln!(s, "offsets = [{}]", v.join(", "));
    }
    for f in &job.lhs {
        emit_factor(&mut s, "lhs", f);
    }
    for f in &job.rhs {
        emit_factor(&mut s, "rhs", f);
    }
    s
}

/// Seed lines `(m_i, A_i)` of an invariant job, over the declared ring.
pub fn gw_lines(text: &str, doc: &Document) -> Result<(Arc<Ring>, Vec<(LatticeVector, Coeff)>)> {
    let ring = require_ring(text, doc)?;
    let mut lines = Vec::new();
    for l in &doc.line {
        let a = at(text, &l.a, parse_coeff(l.a.get_ref(), &ring))?;
        lines.push((lattice(l.m), a.lift(ring.rank())));
    }
    Ok((ring, lines))
}

/// Tangency data of a `[tropical]` table.
pub fn tropical_profile(doc: &TropicalDoc) -> (Vec<u32>, Vec<LatticeVector>) {
    (doc.p.clone(), doc.m.iter().map(|v| lattice(*v)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    const TWO_WALL: &str = r#"[ring]
params = ["t"]
cap = 2

[[wall]]
kind = "line"
m = [1, 0]
base = ["0", "0"]
scalar = ["z^(0,0) : 1", "z^(1,0) t : 1"]

[[wall]]
kind = "line"
m = [0, 1]
base = ["0", "0"]
scalar = ["z^(0,0) : 1", "z^(0,1) t : 1"]
"#;

    #[test]
    fn poly_and_matrix_syntax() {
        let r = Ring::r_n(1, 2).with_rank(2).with_symbols(["A", "B"]);
        let p = parse_poly("2*A^2*B + -1/2*A + 3", &r).unwrap();
        assert_eq!(p.render(r.symbols()), "3 + -1/2*A + 2*A^2*B");
        assert_eq!(parse_poly(&p.render(r.symbols()), &r).unwrap(), p);
        let c = parse_coeff("[[0,A],[0,0]]", &r).unwrap();
        assert_eq!(c, Coeff::elementary(2, 0, 1).scale_poly(&Poly::symbol(0)));
        assert!(parse_poly("C", &r).is_err());
        assert!(parse_coeff("[[1]]", &r).is_err());
    }

    #[test]
    fn emit_then_parse_is_identity() {
        let d = parse_diagram(TWO_WALL).unwrap();
        let text = emit_diagram(&d);
        let back = parse_diagram(&text).unwrap();
        assert_eq!(back, d);
        assert_eq!(emit_diagram(&back), text);
        let done = d.complete_ks(2).unwrap().canonical();
        let text = emit_diagram(&done);
        assert_eq!(emit_diagram(&parse_diagram(&text).unwrap()), text);
    }

    #[test]
    fn walls_off_their_ray_are_rejected() {
        let bad = TWO_WALL.replace("\"z^(1,0) t : 1\"", "\"z^(1,1) t : 1\"");
        match parse_diagram(&bad) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 6),
            other => panic!("expected a parse error, got {other:?}"),
        }
        let bad = TWO_WALL.replace("kind = \"line\"\nm = [0, 1]", "kind = \"segment\"\nm = [0, 1]");
        assert!(matches!(parse_diagram(&bad), Err(Error::Parse { line: 12, .. })));
        assert!(matches!(parse_diagram("[ring]\nparams = 3\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn lie_term_syntax() {
        let r = Ring::r_n(2, 2).with_rank(2).with_symbols(["A"]).shared();
        let x = LieElement::matrix_term(&r, LatticeVector::new(1, 1), r.t_monomial(&[1, 1]), Coeff::elementary(2, 0, 1))
            .add(&LieElement::deriv_term(&r, LatticeVector::new(1, 1), r.t_monomial(&[1, 1]), Poly::constant(q(2)), LatticeVector::new(-1, 1)))
            .unwrap();
        let lines = lie_lines(&x);
        assert_eq!(lines, vec!["z^(1,1) t1 t2 : [[0,1],[0,0]] d=(-2,2)".to_string()]);
        let (m, d, c) = parse_lie_term(&lines[0], &r).unwrap();
        assert_eq!(LieElement::term(&r, m, d, c), x);
    }

    #[test]
    fn wcf_documents_round_trip() {
        let (data, lhs, rhs) = crate::wcf::example_k_s(6);
        let job = WcfJob { data, lhs, rhs };
        let text = emit_wcf(&job);
        let doc = parse_document(&text).unwrap();
        let back = wcf_from(&text, &doc, None).unwrap();
        assert_eq!(back.lhs, job.lhs);
        assert_eq!(back.rhs, job.rhs);
        assert_eq!(emit_wcf(&back), text);
    }
}
