//! Full analysis of a divide: counts, matrices, polynomials and identity checks.

use std::fmt::{self, Write as _};

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::divide::{canonical_label, counts, Divide, DivideCounts};
use crate::error::HomologyError;
use crate::homology::{
    alexander, conjugation, distinguished_word, monodromy, mu_identity_check, order_profile,
    ribbon_fiber, seifert, transvection_product, vanishing_basis, IntMatrix, IntPoly,
    OrderProfile,
};

/// Outcome of one identity check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RibbonSummary {
    pub vertices: usize,
    pub strips: usize,
    pub euler_char: i64,
    pub genus: i64,
    pub boundary_count: usize,
    pub orientable: bool,
}

/// Report schema shared by the text and JSON outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub key: String,
    pub counts: DivideCounts,
    /// `[μ₊, μ₀, μ₋]`.
    pub blocks: [usize; 3],
    pub a: IntMatrix,
    pub b: IntMatrix,
    pub g: IntMatrix,
    pub s: IntMatrix,
    pub t: IntMatrix,
    pub c: IntMatrix,
    pub trace_t: i64,
    pub trace_c: i64,
    pub alexander: IntPoly,
    pub ribbon: RibbonSummary,
    pub order: Option<OrderProfile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduction_curves: Option<u64>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Runs every identity of the homology layer on `d`.
pub fn analyze(d: &Divide) -> Result<Report, HomologyError> {
    let key = canonical_label(d).key;
    let counts = counts(d)?;
    let basis = vanishing_basis(d)?;
    let sd = seifert(d, &basis);
    let t = monodromy(&sd);
    let c = conjugation(&sd);
    let alex = alexander(&sd);
    let ribbon = ribbon_fiber(d)?;
    let mu = counts.mu;
    let id = IntMatrix::identity(mu);
    let word = transvection_product(&basis, &sd, &distinguished_word(&basis))?;
    // C·T·C = T⁻¹ is checked as C·T·C·T = Id, avoiding an inversion
    let ctct = c.mul(&t).mul(&c).mul(&t);

    let mut checks = Vec::new();
    let mut check = |name: &str, pass: bool| {
        checks.push(Check {
            name: name.to_string(),
            pass,
        })
    };
    check("mu = b + D", counts.mu == counts.b + counts.d);
    if counts.r_closed == 0 {
        check(
            "b - D = 1 - r",
            counts.b as i64 - counts.d as i64 == 1 - counts.r_open as i64,
        );
    }
    check(
        "block sizes",
        [sd.mu_plus, sd.mu_zero, sd.mu_minus] == [counts.mu_plus, counts.mu_zero, counts.mu_minus],
    );
    check("S upper unitriangular", sd.s.is_upper_unitriangular());
    check("det S = 1", sd.s.det().is_one() || mu == 0);
    check("G = AB/2", sd.g_is_half_ab());
    check("S^t T = S", sd.s.transpose().mul(&t) == sd.s);
    check("C^2 = Id", c.mul(&c) == id);
    check("C T C = T^-1", ctct == id);
    check(
        "trace C = mu+ - mu0 + mu-",
        c.trace() == sd.mu_plus as i64 - sd.mu_zero as i64 + sd.mu_minus as i64,
    );
    check("mu = 2 mu0 + trace C", mu_identity_check(&counts, &c));
    check("transvection word = T", word == t);
    check("Torres symmetry", alex.is_torres_symmetric());
    check("alexander monic of degree mu", alex.degree() == Some(mu) && alex.leading() == 1);
    check("ribbon orientable", ribbon.orientable);
    check("ribbon chi = 1 - mu", ribbon.euler_char == 1 - mu as i64);
    check(
        "ribbon boundary = r_open + 2 r_closed",
        ribbon.boundary_count == counts.r_open + 2 * counts.r_closed,
    );
    check("ribbon strips = 6D + r", ribbon.edges.len() == 6 * counts.d + counts.r_open);
    if counts.r_closed == 0 && counts.r_open == 1 {
        check("genus = D", ribbon.genus == counts.d as i64);
    }
    if mu == 2 {
        check("mu = 2: trace T in {1, 2}", matches!(t.trace(), 1 | 2));
    }

    let order = order_profile(&t, None).ok();
    Ok(Report {
        key,
        counts,
        blocks: [sd.mu_plus, sd.mu_zero, sd.mu_minus],
        trace_t: t.trace(),
        trace_c: c.trace(),
        a: sd.a,
        b: sd.b,
        g: sd.g,
        s: sd.s,
        t,
        c,
        alexander: alex,
        ribbon: RibbonSummary {
            vertices: ribbon.vertices.len(),
            strips: ribbon.edges.len(),
            euler_char: ribbon.euler_char,
            genus: ribbon.genus,
            boundary_count: ribbon.boundary_count,
            orientable: ribbon.orientable,
        },
        order,
        reduction_curves: None,
        checks,
    })
}

fn write_blocked(out: &mut String, m: &IntMatrix, blocks: [usize; 3]) {
    if m.rows() == 0 {
        out.push_str("  (empty)\n");
        return;
    }
    let width = m
        .to_rows()
        .iter()
        .flatten()
        .map(|x| x.to_string().len())
        .max()
        .unwrap_or(1);
    let cuts = [blocks[0], blocks[0] + blocks[1]];
    for i in 0..m.rows() {
        if i > 0 && cuts.contains(&i) {
            let _ = writeln!(out, "  {}", "-".repeat((width + 1) * m.cols() + 4));
        }
        let mut line = String::from("  ");
        for j in 0..m.cols() {
            if j > 0 && cuts.contains(&j) {
                line.push_str(" |");
            }
            let _ = write!(line, " {:>width$}", m[(i, j)]);
        }
        let _ = writeln!(out, "{line}");
    }
}

fn write_plain(out: &mut String, m: &IntMatrix) {
    if m.rows() == 0 || m.cols() == 0 {
        let _ = writeln!(out, "  ({}x{})", m.rows(), m.cols());
        return;
    }
    for row in m.to_rows() {
        let cells: Vec<String> = row.iter().map(i64::to_string).collect();
        let _ = writeln!(out, "  [{}]", cells.join(" "));
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.counts;
        let mut out = String::new();
        let _ = writeln!(out, "divide {}", self.key);
        let _ = writeln!(
            out,
            "D (delta) = {}  r_open = {}  r_closed = {}  b = {}  mu = {}",
            c.d, c.r_open, c.r_closed, c.b, c.mu
        );
        let _ = writeln!(
            out,
            "blocks: mu+ = {}  mu0 = {}  mu- = {}",
            self.blocks[0], self.blocks[1], self.blocks[2]
        );
        if let Some(r) = self.reduction_curves {
            let _ = writeln!(out, "reduction curves = {r}");
        }
        for (name, m) in [("A", &self.a), ("B", &self.b), ("G", &self.g)] {
            let _ = writeln!(out, "{name}:");
            write_plain(&mut out, m);
        }
        for (name, m) in [("S", &self.s), ("T", &self.t), ("C", &self.c)] {
            let _ = writeln!(out, "{name}:");
            write_blocked(&mut out, m, self.blocks);
        }
        let _ = writeln!(out, "trace T = {}  trace C = {}", self.trace_t, self.trace_c);
        let _ = writeln!(out, "alexander = {}", self.alexander);
        let _ = writeln!(out, "alexander coefficients = {:?}", self.alexander.coeffs());
        let r = &self.ribbon;
        let _ = writeln!(
            out,
            "ribbon: {} vertices, {} strips, chi = {}, genus = {}, boundary = {}, orientable = {}",
            r.vertices, r.strips, r.euler_char, r.genus, r.boundary_count, r.orientable
        );
        let _ = match &self.order {
            Some(OrderProfile::Finite { order }) => writeln!(out, "monodromy order = {order}"),
            Some(OrderProfile::OffUnitCircle { factor }) => {
                writeln!(out, "monodromy order = infinite (non-cyclotomic factor {factor})")
            }
            Some(OrderProfile::Unipotent {
                period,
                nilpotency_index,
            }) => writeln!(
                out,
                "monodromy order = infinite (T^{period} - Id nonzero, nilpotent of index {nilpotency_index})"
            ),
            None => writeln!(out, "monodromy order = inconclusive"),
        };
        for check in &self.checks {
            let _ = writeln!(
                out,
                "[{}] {}",
                if check.pass { "pass" } else { "FAIL" },
                check.name
            );
        }
        f.write_str(&out)
    }
}
