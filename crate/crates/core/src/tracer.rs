//! Numeric tracing of Chebyshev-morsified Puiseux parametrizations.
//!
//! Floating point stays inside this module: [`combinatorialize`] hands an
//! exact [`Divide`] to everything downstream.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::ToPrimitive;

use crate::divide::{Divide, SignedGaussCode};
use crate::error::TraceError;

/// Chebyshev polynomial `T(n, t)`, with `T(n, cos x) = cos(nx)`.
pub fn chebyshev_eval(n: u32, t: f64) -> f64 {
    let n = n as f64;
    if t.abs() <= 1.0 {
        (n * t.acos()).cos()
    } else {
        let mag = (n * t.abs().acosh()).cosh();
        if t < 0.0 && (n as u64) % 2 == 1 {
            -mag
        } else {
            mag
        }
    }
}

/// `(s^m T(m, t/s)/2^{m−1}, Σ c_k s^k T(k, t/s)/2^{k−1})`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamCurve {
    pub m: u32,
    pub terms: Vec<(u32, Rational64)>,
    pub scale: Rational64,
}

impl ParamCurve {
    pub fn new(m: u32, terms: Vec<(u32, Rational64)>, scale: Rational64) -> Result<Self, TraceError> {
        if m == 0 {
            return Err(TraceError::InvalidCurve("x exponent must be positive".into()));
        }
        if terms.is_empty() {
            return Err(TraceError::InvalidCurve("y needs at least one term".into()));
        }
        if terms.windows(2).any(|w| w[0].0 >= w[1].0) || terms[0].0 == 0 {
            return Err(TraceError::InvalidCurve(
                "y exponents must be positive and strictly increasing".into(),
            ));
        }
        if scale <= Rational64::from_integer(0) || scale > Rational64::from_integer(1) {
            return Err(TraceError::InvalidCurve("scale must lie in (0, 1]".into()));
        }
        Ok(ParamCurve { m, terms, scale })
    }

    /// `(t^p, t^q)`.
    pub fn monomial(p: u32, q: u32, scale: Rational64) -> Result<Self, TraceError> {
        ParamCurve::new(p, vec![(q, Rational64::from_integer(1))], scale)
    }

    pub fn with_scale(&self, scale: Rational64) -> Result<Self, TraceError> {
        ParamCurve::new(self.m, self.terms.clone(), scale)
    }

    fn s(&self) -> f64 {
        self.scale.to_f64().unwrap_or(1.0)
    }

    pub fn eval(&self, t: f64) -> (f64, f64) {
        let s = self.s();
        let u = t / s;
        let term = |k: u32| s.powi(k as i32) * chebyshev_eval(k, u) / 2f64.powi(k as i32 - 1);
        let x = term(self.m);
        let y = self
            .terms
            .iter()
            .map(|(k, c)| c.to_f64().unwrap_or(0.0) * term(*k))
            .sum();
        (x, y)
    }

    fn tangent(&self, t: f64) -> (f64, f64) {
        let h = 1e-7 * self.s();
        let (x1, y1) = self.eval(t + h);
        let (x0, y0) = self.eval(t - h);
        ((x1 - x0) / (2.0 * h), (y1 - y0) / (2.0 * h))
    }
}

/// Parses `"x=t^m; y=c1*t^k1+c2*t^k2+..."`; coefficients are rationals such
/// as `3`, `-1/2`; whitespace is ignored. The scale defaults to 1.
impl FromStr for ParamCurve {
    type Err = TraceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = |why: &str| TraceError::InvalidCurve(format!("{why} in {s:?}"));
        let (xs, ys) = compact
            .split_once(';')
            .ok_or_else(|| bad("expected 'x=...; y=...'"))?;
        let xs = xs.strip_prefix("x=").ok_or_else(|| bad("expected 'x='"))?;
        let ys = ys.strip_prefix("y=").ok_or_else(|| bad("expected 'y='"))?;
        let x_terms = parse_sum(xs).ok_or_else(|| bad("malformed x"))?;
        if x_terms.len() != 1 || x_terms[0].1 != Rational64::from_integer(1) {
            return Err(bad("x must be a single monomial t^m"));
        }
        let mut terms = parse_sum(ys).ok_or_else(|| bad("malformed y"))?;
        terms.sort_by_key(|(k, _)| *k);
        ParamCurve::new(x_terms[0].0, terms, Rational64::from_integer(1))
    }
}

fn parse_sum(s: &str) -> Option<Vec<(u32, Rational64)>> {
    let mut terms = Vec::new();
    let mut rest = s;
    while !rest.is_empty() {
        let negative = rest.starts_with('-');
        if rest.starts_with('+') || negative {
            rest = &rest[1..];
        }
        let end = rest[1.min(rest.len())..]
            .find(['+', '-'])
            .map_or(rest.len(), |i| i + 1);
        let (term, tail) = rest.split_at(end);
        rest = tail;
        let (coeff, power) = match term.find('t') {
            Some(i) => {
                let c = term[..i].trim_end_matches('*');
                let p = &term[i + 1..];
                let k = if p.is_empty() {
                    1
                } else {
                    p.strip_prefix('^')?.parse::<u32>().ok()?
                };
                let c = if c.is_empty() { Rational64::from_integer(1) } else { parse_rational(c)? };
                (c, k)
            }
            None => return None,
        };
        terms.push((power, if negative { -coeff } else { coeff }));
    }
    (!terms.is_empty()).then_some(terms)
}

/// `"3"`, `"-2/5"` or a decimal such as `"0.25"`.
pub fn parse_rational(s: &str) -> Option<Rational64> {
    if let Some((a, b)) = s.split_once('/') {
        let (a, b) = (a.parse::<i64>().ok()?, b.parse::<i64>().ok()?);
        return (b != 0).then(|| Rational64::new(a, b));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || frac.len() > 15 || !frac.bytes().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let negative = int.starts_with('-');
        let whole = if int.is_empty() || int == "-" { 0 } else { int.parse::<i64>().ok()?.abs() };
        let den = 10i64.pow(frac.len() as u32);
        let num = whole.checked_mul(den)?.checked_add(frac.parse::<i64>().ok()?)?;
        return Some(Rational64::new(if negative { -num } else { num }, den));
    }
    s.parse::<i64>().ok().map(Rational64::from_integer)
}

/// Sampling and tolerance controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceOptions {
    /// Samples over the oscillating range `|t| ≤ s`.
    pub samples: usize,
    /// Distances below this between distinct branches count as degenerate.
    pub separation: f64,
    /// Target coordinate error of refined crossings.
    pub tolerance: f64,
    /// Working disk radius; by default 10% beyond the oscillating range.
    pub radius: Option<f64>,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions {
            samples: 4000,
            separation: 1e-6,
            tolerance: 1e-9,
            radius: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracedCrossing {
    pub t1: f64,
    pub t2: f64,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TracedCurve {
    /// `(t, x, y)` in increasing `t`; the first and last lie on the disk boundary.
    pub samples: Vec<(f64, f64, f64)>,
    pub crossings: Vec<TracedCrossing>,
    pub radius: f64,
    curve: ParamCurve,
}

impl TracedCurve {
    pub fn curve(&self) -> &ParamCurve {
        &self.curve
    }

    /// Polyline as CSV rows `t,x,y` with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,x,y\n");
        for (t, x, y) in &self.samples {
            let _ = writeln!(out, "{t},{x},{y}");
        }
        out
    }
}

/// Traces the curve inside the working disk and finds its double points.
pub fn trace(curve: &ParamCurve, options: &TraceOptions) -> Result<TracedCurve, TraceError> {
    let s = curve.s();
    let n = options.samples.max(16);
    let mut inner: Vec<f64> = (0..=n)
        .map(|i| -s * (std::f64::consts::PI * i as f64 / n as f64).cos())
        .collect();
    inner.dedup();
    let radius = options.radius.unwrap_or_else(|| {
        1.1 * inner
            .iter()
            .map(|&t| {
                let (x, y) = curve.eval(t);
                x.hypot(y)
            })
            .fold(0.0, f64::max)
    });
    let norm = |t: f64| {
        let (x, y) = curve.eval(t);
        x.hypot(y)
    };
    if inner.iter().any(|&t| norm(t) >= radius) {
        return Err(TraceError::InvalidCurve(
            "working disk does not contain the oscillating range".into(),
        ));
    }
    // tails: equal steps in arccosh(|t|/s) until the curve leaves the disk
    let step = std::f64::consts::PI / n as f64;
    let tail = |sign: f64| -> Result<Vec<f64>, TraceError> {
        let mut ts = Vec::new();
        let mut w: f64 = 0.0;
        loop {
            w += step;
            let t = sign * s * w.cosh();
            if norm(t) >= radius {
                let (mut lo, mut hi) = (ts.last().copied().unwrap_or(sign * s), t);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if norm(mid) >= radius {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                ts.push(hi);
                return Ok(ts);
            }
            ts.push(t);
            if w > 60.0 {
                return Err(TraceError::InvalidCurve("curve never leaves the disk".into()));
            }
        }
    };
    let mut ts: Vec<f64> = tail(-1.0)?.into_iter().rev().collect();
    ts.extend(inner);
    ts.extend(tail(1.0)?);
    let samples: Vec<(f64, f64, f64)> = ts
        .iter()
        .map(|&t| {
            let (x, y) = curve.eval(t);
            (t, x, y)
        })
        .collect();
    let crossings = self_crossings(curve, &samples, options)?;
    Ok(TracedCurve {
        samples,
        crossings,
        radius,
        curve: curve.clone(),
    })
}

type Seg = ((f64, f64), (f64, f64));

fn cross(a: (f64, f64), b: (f64, f64)) -> f64 {
    a.0 * b.1 - a.1 * b.0
}

fn sub(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 - b.0, a.1 - b.1)
}

/// Parameters `(u, v)` in `[0, 1]²` where the segments meet, if they do.
fn intersect(p: Seg, q: Seg) -> Option<(f64, f64)> {
    let r = sub(p.1, p.0);
    let s = sub(q.1, q.0);
    let denom = cross(r, s);
    if denom == 0.0 {
        return None;
    }
    let qp = sub(q.0, p.0);
    let u = cross(qp, s) / denom;
    let v = cross(qp, r) / denom;
    ((0.0..=1.0).contains(&u) && (0.0..=1.0).contains(&v)).then_some((u, v))
}

fn point_seg_dist(p: (f64, f64), s: Seg) -> f64 {
    let d = sub(s.1, s.0);
    let len2 = d.0 * d.0 + d.1 * d.1;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p.0 - s.0 .0) * d.0 + (p.1 - s.0 .1) * d.1) / len2).clamp(0.0, 1.0)
    };
    let proj = (s.0 .0 + t * d.0, s.0 .1 + t * d.1);
    (p.0 - proj.0).hypot(p.1 - proj.1)
}

fn seg_dist(p: Seg, q: Seg) -> f64 {
    if intersect(p, q).is_some() {
        return 0.0;
    }
    point_seg_dist(p.0, q)
        .min(point_seg_dist(p.1, q))
        .min(point_seg_dist(q.0, p))
        .min(point_seg_dist(q.1, p))
}

/// Candidate segment pairs sharing a hash cell: `(i, j)` with `i < j`.
fn candidate_pairs(a: &[Seg], b: &[Seg], same: bool) -> Vec<(usize, usize)> {
    let lens = a.iter().chain(b.iter()).map(|s| (s.1 .0 - s.0 .0).hypot(s.1 .1 - s.0 .1));
    let cell = lens.fold(0.0, f64::max).max(1e-12) * 2.0;
    let key = |x: f64, y: f64| ((x / cell).floor() as i64, (y / cell).floor() as i64);
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (j, s) in b.iter().enumerate() {
        let (lo, hi) = (
            key(s.0 .0.min(s.1 .0), s.0 .1.min(s.1 .1)),
            key(s.0 .0.max(s.1 .0), s.0 .1.max(s.1 .1)),
        );
        for gx in lo.0 - 1..=hi.0 + 1 {
            for gy in lo.1 - 1..=hi.1 + 1 {
                grid.entry((gx, gy)).or_default().push(j);
            }
        }
    }
    let mut pairs = HashSet::new();
    for (i, s) in a.iter().enumerate() {
        let c = key(s.0 .0, s.0 .1);
        if let Some(list) = grid.get(&c) {
            for &j in list {
                if !same || j > i + 1 {
                    pairs.insert((i, j));
                }
            }
        }
    }
    let mut pairs: Vec<_> = pairs.into_iter().collect();
    pairs.sort_unstable();
    pairs
}

/// Bisects parameter intervals of two arcs down to a crossing point.
fn refine(
    f: &dyn Fn(f64) -> (f64, f64),
    g: &dyn Fn(f64) -> (f64, f64),
    mut a: (f64, f64),
    mut b: (f64, f64),
    tolerance: f64,
) -> (f64, f64, (f64, f64)) {
    for _ in 0..200 {
        let (am, bm) = (0.5 * (a.0 + a.1), 0.5 * (b.0 + b.1));
        let halves_a = [(a.0, am), (am, a.1)];
        let halves_b = [(b.0, bm), (bm, b.1)];
        let mut best: Option<((f64, f64), (f64, f64), f64)> = None;
        for ha in halves_a {
            for hb in halves_b {
                let p = (f(ha.0), f(ha.1));
                let q = (g(hb.0), g(hb.1));
                let score = if intersect(p, q).is_some() { 0.0 } else { seg_dist(p, q) };
                if best.map_or(true, |(_, _, s)| score < s) {
                    best = Some((ha, hb, score));
                }
            }
        }
        let (ha, hb, _) = best.expect("four candidates");
        a = ha;
        b = hb;
        let (p, q) = (f(a.0), g(b.0));
        let size = (f(a.1).0 - p.0).hypot(f(a.1).1 - p.1) + (g(b.1).0 - q.0).hypot(g(b.1).1 - q.1);
        if size < tolerance * 1e-2 {
            break;
        }
    }
    let p = (f(a.0), f(a.1));
    let q = (g(b.0), g(b.1));
    let (u, v) = intersect(p, q).unwrap_or((0.5, 0.5));
    let t1 = a.0 + u * (a.1 - a.0);
    let t2 = b.0 + v * (b.1 - b.0);
    let pt = f(t1);
    (t1, t2, pt)
}

fn unit_cross(a: (f64, f64), b: (f64, f64)) -> f64 {
    cross(a, b) / (a.0.hypot(a.1) * b.0.hypot(b.1))
}

/// Per-axis normalization. A positive diagonal rescaling does not change the
/// divide, and it makes the separation threshold relative to each axis'
/// extent: high-order terms can leave one coordinate far flatter than the other.
#[derive(Debug, Clone, Copy)]
struct Frame {
    sx: f64,
    sy: f64,
}

impl Frame {
    fn of<'a>(samples: impl IntoIterator<Item = &'a (f64, f64, f64)>) -> Frame {
        let (mut sx, mut sy) = (0.0f64, 0.0f64);
        for &(_, x, y) in samples {
            sx = sx.max(x.abs());
            sy = sy.max(y.abs());
        }
        Frame {
            sx: if sx > 0.0 { sx } else { 1.0 },
            sy: if sy > 0.0 { sy } else { 1.0 },
        }
    }

    fn to(&self, p: (f64, f64)) -> (f64, f64) {
        (p.0 / self.sx, p.1 / self.sy)
    }

    fn from(&self, p: (f64, f64)) -> (f64, f64) {
        (p.0 * self.sx, p.1 * self.sy)
    }

    fn segs(&self, samples: &[(f64, f64, f64)]) -> Vec<Seg> {
        samples
            .windows(2)
            .map(|w| (self.to((w[0].1, w[0].2)), self.to((w[1].1, w[1].2))))
            .collect()
    }
}

fn self_crossings(
    curve: &ParamCurve,
    samples: &[(f64, f64, f64)],
    options: &TraceOptions,
) -> Result<Vec<TracedCrossing>, TraceError> {
    let frame = Frame::of(samples);
    let segs = frame.segs(samples);
    let f = |t: f64| frame.to(curve.eval(t));
    let tangent = |t: f64| frame.to(curve.tangent(t));
    let tangency = |p: (f64, f64)| {
        let (x, y) = frame.from(p);
        TraceError::TangencyDetected { x, y }
    };
    // (segment i, segment j, t1, t2, normalized point)
    let mut found: Vec<(usize, usize, f64, f64, (f64, f64))> = Vec::new();
    // branches leaving a crossing at angle θ stay within `sep` for about `sep / sin θ`
    let mut reach: Vec<f64> = Vec::new();
    let pairs = candidate_pairs(&segs, &segs, true);
    for &(i, j) in &pairs {
        if intersect(segs[i], segs[j]).is_none() {
            continue;
        }
        let (t1, t2, pt) = refine(
            &f,
            &f,
            (samples[i].0, samples[i + 1].0),
            (samples[j].0, samples[j + 1].0),
            options.tolerance,
        );
        if found
            .iter()
            .any(|c| (c.2 - t1).abs() < 1e-9 && (c.3 - t2).abs() < 1e-9)
        {
            continue;
        }
        let angle = unit_cross(tangent(t1), tangent(t2));
        if angle.abs() < options.separation {
            return Err(tangency(pt));
        }
        found.push((i, j, t1, t2, pt));
        reach.push(10.0 * options.separation / angle.abs());
    }
    for (a, p) in found.iter().enumerate() {
        for q in &found[a + 1..] {
            if (p.4 .0 - q.4 .0).hypot(p.4 .1 - q.4 .1) < options.separation {
                let (x, y) = frame.from(p.4);
                return Err(TraceError::TriplePoint { x, y });
            }
        }
    }
    // near misses away from the detected crossings
    let near_crossing = |i: usize, j: usize| {
        found.iter().zip(&reach).any(|(&(a, b, _, _, c), &r)| {
            (i.abs_diff(a) <= 1 && j.abs_diff(b) <= 1)
                || (point_seg_dist(c, segs[i]) < r && point_seg_dist(c, segs[j]) < r)
        })
    };
    // arc length up to each sample; nearby pieces of one branch are not a tangency
    let mut arc = vec![0.0; samples.len()];
    for (i, s) in segs.iter().enumerate() {
        arc[i + 1] = arc[i] + (s.1 .0 - s.0 .0).hypot(s.1 .1 - s.0 .1);
    }
    for &(i, j) in &pairs {
        if near_crossing(i, j) || arc[j] - arc[i + 1] < 1e3 * options.separation {
            continue;
        }
        if seg_dist(segs[i], segs[j]) < options.separation {
            return Err(tangency(segs[i].0));
        }
    }
    let mut crossings: Vec<TracedCrossing> = found
        .into_iter()
        .map(|(_, _, t1, t2, pt)| {
            let (x, y) = frame.from(pt);
            TracedCrossing { t1, t2, x, y }
        })
        .collect();
    crossings.sort_by(|a, b| a.t1.total_cmp(&b.t1));
    Ok(crossings)
}

/// Reads the traced curve as a divide: crossings ordered along the parameter,
/// signs from the local tangents.
pub fn combinatorialize(tc: &TracedCurve) -> Result<Divide, TraceError> {
    let mut visits: Vec<(f64, usize)> = Vec::with_capacity(2 * tc.crossings.len());
    let mut signs = Vec::with_capacity(tc.crossings.len());
    for (id, c) in tc.crossings.iter().enumerate() {
        visits.push((c.t1, id));
        visits.push((c.t2, id));
        let s = cross(tc.curve.tangent(c.t1), tc.curve.tangent(c.t2));
        signs.push(if s > 0.0 { 1 } else { -1 });
    }
    visits.sort_by(|a, b| a.0.total_cmp(&b.0));
    let code = SignedGaussCode::arc(visits.into_iter().map(|(_, id)| id).collect(), signs);
    Ok(code.to_divide()?)
}

/// Reads a divide off open polylines whose ends lie on a common circle
/// centred at the origin. Intersections are taken between the straight
/// segments; endpoints are ordered counterclockwise by angle.
pub fn combinatorialize_polylines(branches: &[Vec<(f64, f64)>]) -> Result<Divide, TraceError> {
    use crate::divide::{BranchEnd, GaussBranch};
    if branches.iter().any(|b| b.len() < 2) {
        return Err(TraceError::InvalidCurve("polyline needs two points".into()));
    }
    let segs: Vec<Vec<Seg>> = branches
        .iter()
        .map(|b| b.windows(2).map(|w| (w[0], w[1])).collect())
        .collect();
    // (branch, position along it) for both passages of each crossing
    let mut hits: Vec<((usize, f64), (usize, f64), (f64, f64))> = Vec::new();
    for a in 0..segs.len() {
        for b in a..segs.len() {
            for (i, j) in candidate_pairs(&segs[a], &segs[b], a == b) {
                let Some((u, v)) = intersect(segs[a][i], segs[b][j]) else {
                    continue;
                };
                let p = segs[a][i];
                let pt = (p.0 .0 + u * (p.1 .0 - p.0 .0), p.0 .1 + u * (p.1 .1 - p.0 .1));
                if hits.iter().any(|h| (h.2 .0 - pt.0).hypot(h.2 .1 - pt.1) < 1e-12) {
                    continue;
                }
                hits.push(((a, i as f64 + u), (b, j as f64 + v), pt));
            }
        }
    }
    let dir = |branch: usize, pos: f64| {
        let s = segs[branch][(pos.floor() as usize).min(segs[branch].len() - 1)];
        sub(s.1, s.0)
    };
    let mut per_branch: Vec<Vec<(f64, usize)>> = vec![Vec::new(); branches.len()];
    let mut signs = Vec::with_capacity(hits.len());
    for (id, &(p, q, _)) in hits.iter().enumerate() {
        per_branch[p.0].push((p.1, id));
        per_branch[q.0].push((q.1, id));
        // traversal is branch by branch, so the first passage is the lexicographically smaller
        let (first, second) = if p <= q { (p, q) } else { (q, p) };
        let sign = cross(dir(first.0, first.1), dir(second.0, second.1));
        signs.push(if sign > 0.0 { 1 } else { -1 });
    }
    let mut ends: Vec<(f64, (usize, BranchEnd))> = Vec::new();
    for (bi, b) in branches.iter().enumerate() {
        let (s, e) = (b[0], b[b.len() - 1]);
        ends.push((s.1.atan2(s.0), (bi, BranchEnd::Start)));
        ends.push((e.1.atan2(e.0), (bi, BranchEnd::End)));
    }
    ends.sort_by(|a, b| a.0.total_cmp(&b.0));
    let code = SignedGaussCode {
        branches: per_branch
            .into_iter()
            .map(|mut v| {
                v.sort_by(|a, b| a.0.total_cmp(&b.0));
                GaussBranch {
                    visits: v.into_iter().map(|(_, id)| id).collect(),
                    closed: false,
                }
            })
            .collect(),
        signs,
        boundary: ends.into_iter().map(|(_, e)| e).collect(),
    };
    Ok(code.to_divide()?)
}

/// Number of transversal intersections between two traced curves.
pub fn pair_intersections(a: &TracedCurve, b: &TracedCurve) -> Result<usize, TraceError> {
    let frame = Frame::of(a.samples.iter().chain(&b.samples));
    let sa = frame.segs(&a.samples);
    let sb = frame.segs(&b.samples);
    let fa = |t: f64| frame.to(a.curve.eval(t));
    let fb = |t: f64| frame.to(b.curve.eval(t));
    let tangency = |p: (f64, f64)| {
        let (x, y) = frame.from(p);
        TraceError::TangencyDetected { x, y }
    };
    let options = TraceOptions::default();
    let mut found: Vec<(usize, usize, f64, f64, (f64, f64), f64)> = Vec::new();
    let pairs = candidate_pairs(&sa, &sb, false);
    for &(i, j) in &pairs {
        if intersect(sa[i], sb[j]).is_none() {
            continue;
        }
        let (t1, t2, pt) = refine(
            &fa,
            &fb,
            (a.samples[i].0, a.samples[i + 1].0),
            (b.samples[j].0, b.samples[j + 1].0),
            options.tolerance,
        );
        if found.iter().any(|&(_, _, u, v, _, _)| (u - t1).abs() < 1e-9 && (v - t2).abs() < 1e-9) {
            continue;
        }
        let angle = unit_cross(frame.to(a.curve.tangent(t1)), frame.to(b.curve.tangent(t2))).abs();
        if angle < options.separation {
            return Err(tangency(pt));
        }
        found.push((i, j, t1, t2, pt, 10.0 * options.separation / angle));
    }
    for &(i, j) in &pairs {
        if found.iter().any(|&(a, b, _, _, c, r)| {
            (i.abs_diff(a) <= 1 && j.abs_diff(b) <= 1)
                || (point_seg_dist(c, sa[i]) < r && point_seg_dist(c, sb[j]) < r)
        }) {
            continue;
        }
        if seg_dist(sa[i], sb[j]) < options.separation {
            return Err(tangency(sa[i].0));
        }
    }
    Ok(found.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divide::canonical_label;
    use crate::generators::chebyshev_divide;

    fn half() -> Rational64 {
        Rational64::new(1, 2)
    }

    #[test]
    fn chebyshev_values() {
        assert!((chebyshev_eval(3, 1.0) - 1.0).abs() < 1e-12);
        assert!((chebyshev_eval(2, 0.0) + 1.0).abs() < 1e-12);
        for i in 0..50 {
            let t = -1.3 + 2.6 * i as f64 / 49.0;
            let lhs = chebyshev_eval(6, t);
            let rhs = chebyshev_eval(2, chebyshev_eval(3, t));
            assert!((lhs - rhs).abs() < 1e-9 * lhs.abs().max(1.0), "t = {t}");
            // 2^{n-1} t^n leading behaviour: T(3, t) = 4t^3 - 3t
            let cubic = 4.0 * t * t * t - 3.0 * t;
            assert!((chebyshev_eval(3, t) - cubic).abs() < 1e-9);
        }
    }

    #[test]
    fn cusp_and_embedded_branch() {
        let cusp = trace(&ParamCurve::monomial(2, 3, half()).unwrap(), &TraceOptions::default()).unwrap();
        assert_eq!(cusp.crossings.len(), 1);
        let d = combinatorialize(&cusp).unwrap();
        assert_eq!(canonical_label(&d).key, canonical_label(&chebyshev_divide(2, 3).unwrap()).key);
        let line = trace(&ParamCurve::monomial(1, 2, half()).unwrap(), &TraceOptions::default()).unwrap();
        assert_eq!(line.crossings.len(), 0);
        assert_eq!(combinatorialize(&line).unwrap().num_crossings(), 0);
    }

    #[test]
    fn grammar() {
        let c: ParamCurve = "x = t^3; y = t^7 + t^8".parse().unwrap();
        assert_eq!(c.m, 3);
        assert_eq!(c.terms.len(), 2);
        let c: ParamCurve = "x=t^2;y=-1/2*t^3+3t^5".parse().unwrap();
        assert_eq!(c.terms[0], (3, Rational64::new(-1, 2)));
        assert_eq!(c.terms[1], (5, Rational64::from_integer(3)));
        for bad in ["x=t^2", "y=t^3; x=t^2", "x=2t^2; y=t^3", "x=t^2; y=t^3+t^3", "x=t^2; y=1"] {
            assert!(bad.parse::<ParamCurve>().is_err(), "{bad}");
        }
        assert_eq!(parse_rational("0.25"), Some(Rational64::new(1, 4)));
        assert_eq!(parse_rational("-3/6"), Some(Rational64::new(-1, 2)));
    }

    #[test]
    fn two_pair_curve() {
        let c: ParamCurve = "x=t^3; y=t^7+t^8".parse().unwrap();
        let tc = trace(&c.with_scale(half()).unwrap(), &TraceOptions::default()).unwrap();
        assert_eq!(tc.crossings.len(), 6);
        let d = combinatorialize(&tc).unwrap();
        assert_eq!(crate::divide::counts(&d).unwrap().mu, 12);
    }

    #[test]
    fn monomials_match_box_divides() {
        for (p, q) in [(2, 3), (2, 5), (2, 7), (2, 9), (2, 11), (2, 13), (2, 15), (2, 17), (3, 4), (3, 5), (3, 7), (3, 8), (3, 10), (3, 11), (4, 5), (4, 7), (5, 6), (5, 7)] {
            let c = ParamCurve::monomial(p, q, half()).unwrap();
            let tc = trace(&c, &TraceOptions::default()).unwrap();
            assert_eq!(tc.crossings.len() as u32, (p - 1) * (q - 1) / 2);
            let d = combinatorialize(&tc).unwrap();
            let expected = chebyshev_divide(p as u64, q as u64).unwrap();
            assert_eq!(canonical_label(&d).key, canonical_label(&expected).key, "({p},{q})");
        }
    }

    #[test]
    fn doubling_resolution_keeps_the_divide() {
        let c: ParamCurve = "x=t^3; y=t^7+t^8".parse().unwrap();
        let c = c.with_scale(half()).unwrap();
        let coarse = TraceOptions::default();
        let fine = TraceOptions { samples: 2 * coarse.samples, ..coarse };
        let a = combinatorialize(&trace(&c, &coarse).unwrap()).unwrap();
        let b = combinatorialize(&trace(&c, &fine).unwrap()).unwrap();
        assert_eq!(canonical_label(&a).key, canonical_label(&b).key);
    }

    #[test]
    fn second_stage_meets_first_thirteen_times() {
        let s = half();
        let outer: ParamCurve = "x=t^4; y=t^6+t^7".parse().unwrap();
        let outer = trace(&outer.with_scale(s).unwrap(), &TraceOptions::default()).unwrap();
        let inner = ParamCurve::monomial(2, 3, s * s / 2).unwrap();
        let inner = trace(&inner, &TraceOptions { radius: Some(outer.radius), ..Default::default() }).unwrap();
        assert_eq!(pair_intersections(&outer, &inner).unwrap(), 13);
    }

    #[test]
    fn polylines_crossing_once() {
        let a = vec![(-1.0, 0.0), (1.0, 0.0)];
        let b = vec![(0.0, -1.0), (0.0, 1.0)];
        let d = combinatorialize_polylines(&[a, b]).unwrap();
        assert_eq!((d.num_crossings(), d.num_endpoints()), (1, 4));
        assert_eq!(crate::divide::counts(&d).unwrap().mu, 1);
    }

    #[test]
    fn touching_curves_are_rejected() {
        // the y-difference is 2t²(2t² − 1): a double contact at t = 0
        let a: ParamCurve = "x=t; y=t^2".parse().unwrap();
        let b: ParamCurve = "x=t; y=2*t^2+4*t^4".parse().unwrap();
        let b = trace(&b, &TraceOptions::default()).unwrap();
        let a = trace(&a, &TraceOptions { radius: Some(b.radius), ..Default::default() }).unwrap();
        assert!(matches!(pair_intersections(&a, &b), Err(TraceError::TangencyDetected { .. })));
    }
}
