//! Outage-region descriptions: expression trees over fading exponent
//! variables, comparisons against rate thresholds, and normalization of the
//! piecewise-affine trees into min-of-max form.
//!
//! Every outage event handled by the exact solver is a conjunction of
//! comparisons `expr <= threshold` (or `>=`), where `expr` is built from
//! constants, variables, weighted sums, and pointwise `min`/`max`. Such a
//! tree always flattens to `min_i max_j affine_ij`; comparisons against a
//! flattened tree expand to a finite union of half-space conjunctions, which
//! is what the polyhedral path consumes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest min-of-max table produced by normalization before the region is
/// rejected as too complex. Regions in this crate stay in the dozens.
const MAX_NORMAL_FORM: usize = 65_536;

/// Expression tree over the region variables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ConstraintExpr {
    Const(f64),
    /// Reference into the region's variable list.
    Var(usize),
    /// Weighted sum of subexpressions.
    Sum(Vec<(f64, ConstraintExpr)>),
    Min(Vec<ConstraintExpr>),
    Max(Vec<ConstraintExpr>),
}

impl ConstraintExpr {
    /// Affine shorthand: `sum(weights[i] * var_i) + constant`.
    pub fn affine(weights: &[f64], constant: f64) -> Self {
        let mut terms: Vec<(f64, ConstraintExpr)> = weights
            .iter()
            .enumerate()
            .filter(|(_, w)| **w != 0.0)
            .map(|(i, &w)| (w, ConstraintExpr::Var(i)))
            .collect();
        if constant != 0.0 || terms.is_empty() {
            terms.push((1.0, ConstraintExpr::Const(constant)));
        }
        ConstraintExpr::Sum(terms)
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            ConstraintExpr::Const(c) => *c,
            ConstraintExpr::Var(i) => x[*i],
            ConstraintExpr::Sum(terms) => terms.iter().map(|(w, e)| w * e.eval(x)).sum(),
            ConstraintExpr::Min(es) => es.iter().map(|e| e.eval(x)).fold(f64::INFINITY, f64::min),
            ConstraintExpr::Max(es) => {
                es.iter().map(|e| e.eval(x)).fold(f64::NEG_INFINITY, f64::max)
            }
        }
    }

    pub fn validate(&self, nvars: usize) -> Result<()> {
        match self {
            ConstraintExpr::Const(c) => {
                if !c.is_finite() {
                    return Err(Error::InvalidRegion(format!("non-finite constant {c}")));
                }
            }
            ConstraintExpr::Var(i) => {
                if *i >= nvars {
                    return Err(Error::InvalidRegion(format!(
                        "variable index {i} out of range for {nvars} variables"
                    )));
                }
            }
            ConstraintExpr::Sum(terms) => {
                if terms.is_empty() {
                    return Err(Error::InvalidRegion("empty weighted sum".into()));
                }
                for (w, e) in terms {
                    if !w.is_finite() {
                        return Err(Error::InvalidRegion(format!("non-finite weight {w}")));
                    }
                    e.validate(nvars)?;
                }
            }
            ConstraintExpr::Min(es) | ConstraintExpr::Max(es) => {
                if es.is_empty() {
                    return Err(Error::InvalidRegion("empty min/max".into()));
                }
                for e in es {
                    e.validate(nvars)?;
                }
            }
        }
        Ok(())
    }

    /// Flattens the tree into `min over rows of (max over the row's affine
    /// functions)`.
    pub fn normalize(&self, nvars: usize) -> Result<MinOfMax> {
        let mm = match self {
            ConstraintExpr::Const(c) => MinOfMax::constant(*c, nvars),
            ConstraintExpr::Var(i) => MinOfMax::var(*i, nvars),
            ConstraintExpr::Sum(terms) => {
                let mut acc = MinOfMax::constant(0.0, nvars);
                for (w, e) in terms {
                    let part = e.normalize(nvars)?.scale(*w)?;
                    acc = acc.add(&part)?;
                }
                acc
            }
            ConstraintExpr::Min(es) => {
                let mut rows = Vec::new();
                for e in es {
                    rows.extend(e.normalize(nvars)?.rows);
                }
                MinOfMax { rows }.check_size()?
            }
            ConstraintExpr::Max(es) => {
                let mut acc: Option<MinOfMax> = None;
                for e in es {
                    let part = e.normalize(nvars)?;
                    acc = Some(match acc {
                        None => part,
                        Some(a) => a.max(&part)?,
                    });
                }
                acc.expect("validated nonempty")
            }
        };
        Ok(mm)
    }
}

/// Direction of a comparison against the threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    Le,
    Ge,
}

/// One region constraint: `expr <= threshold` (or `>=`), optionally strict.
///
/// Strict comparisons are handled by the epsilon-limit procedure in the
/// solve drivers: the threshold is tightened by each epsilon in the schedule
/// and the results extrapolated to zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub expr: ConstraintExpr,
    pub relation: Relation,
    pub threshold: f64,
    pub strict: bool,
}

impl Comparison {
    pub fn le(expr: ConstraintExpr, threshold: f64) -> Self {
        Self { expr, relation: Relation::Le, threshold, strict: false }
    }

    pub fn le_strict(expr: ConstraintExpr, threshold: f64) -> Self {
        Self { expr, relation: Relation::Le, threshold, strict: true }
    }

    pub fn ge(expr: ConstraintExpr, threshold: f64) -> Self {
        Self { expr, relation: Relation::Ge, threshold, strict: false }
    }

    /// Threshold after tightening strict comparisons by `eps`.
    pub fn effective_threshold(&self, eps: f64) -> f64 {
        if !self.strict {
            return self.threshold;
        }
        match self.relation {
            Relation::Le => self.threshold - eps,
            Relation::Ge => self.threshold + eps,
        }
    }
}

/// A bounded variable of an outage region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarBound {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
}

impl VarBound {
    pub fn new(name: impl Into<String>, lo: f64, hi: f64) -> Self {
        Self { name: name.into(), lo, hi }
    }
}

/// An outage event: a box of exponent variables intersected with a
/// conjunction of piecewise-min/max comparisons.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutageRegion {
    pub vars: Vec<VarBound>,
    pub constraints: Vec<Comparison>,
}

impl OutageRegion {
    pub fn new(vars: Vec<VarBound>, constraints: Vec<Comparison>) -> Result<Self> {
        let region = Self { vars, constraints };
        region.validate()?;
        Ok(region)
    }

    pub fn validate(&self) -> Result<()> {
        if self.vars.is_empty() {
            return Err(Error::InvalidRegion("region has no variables".into()));
        }
        for v in &self.vars {
            if !v.lo.is_finite() || !v.hi.is_finite() || v.lo > v.hi {
                return Err(Error::InvalidRegion(format!(
                    "variable {} has invalid bounds [{}, {}]",
                    v.name, v.lo, v.hi
                )));
            }
        }
        for c in &self.constraints {
            if !c.threshold.is_finite() {
                return Err(Error::InvalidRegion(format!(
                    "non-finite comparison threshold {}",
                    c.threshold
                )));
            }
            c.expr.validate(self.vars.len())?;
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    pub fn has_strict(&self) -> bool {
        self.constraints.iter().any(|c| c.strict)
    }

    pub fn bounds(&self) -> Vec<(f64, f64)> {
        self.vars.iter().map(|v| (v.lo, v.hi)).collect()
    }

    /// Membership by direct expression evaluation, with strict comparisons
    /// tightened by `eps`. A tiny slack absorbs float noise at boundaries
    /// shared with grid points.
    pub fn contains(&self, x: &[f64], eps: f64) -> bool {
        const SLACK: f64 = 1e-12;
        self.constraints.iter().all(|c| {
            let v = c.expr.eval(x);
            let t = c.effective_threshold(eps);
            match c.relation {
                Relation::Le => v <= t + SLACK,
                Relation::Ge => v >= t - SLACK,
            }
        })
    }
}

/// Affine function `coeffs . x + constant`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Affine {
    pub coeffs: Vec<f64>,
    pub constant: f64,
}

impl Affine {
    pub fn new(coeffs: Vec<f64>, constant: f64) -> Self {
        Self { coeffs, constant }
    }

    pub fn constant_fn(c: f64, nvars: usize) -> Self {
        Self { coeffs: vec![0.0; nvars], constant: c }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.coeffs.iter().zip(x).map(|(c, v)| c * v).sum::<f64>() + self.constant
    }

    fn scaled(&self, w: f64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * w).collect(),
            constant: self.constant * w,
        }
    }

    fn plus(&self, other: &Self) -> Self {
        Self {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
            constant: self.constant + other.constant,
        }
    }
}

/// Normal form of a piecewise-affine tree: `min over rows of max over the
/// row's entries`.
#[derive(Debug, Clone, PartialEq)]
pub struct MinOfMax {
    pub rows: Vec<Vec<Affine>>,
}

impl MinOfMax {
    fn constant(c: f64, nvars: usize) -> Self {
        Self { rows: vec![vec![Affine::constant_fn(c, nvars)]] }
    }

    fn var(i: usize, nvars: usize) -> Self {
        let mut coeffs = vec![0.0; nvars];
        coeffs[i] = 1.0;
        Self { rows: vec![vec![Affine::new(coeffs, 0.0)]] }
    }

    fn size(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    fn check_size(self) -> Result<Self> {
        if self.size() > MAX_NORMAL_FORM {
            return Err(Error::InvalidRegion(format!(
                "normalized expression exceeds {MAX_NORMAL_FORM} entries"
            )));
        }
        Ok(self)
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.rows
            .iter()
            .map(|row| row.iter().map(|a| a.eval(x)).fold(f64::NEG_INFINITY, f64::max))
            .fold(f64::INFINITY, f64::min)
    }

    /// `w * min_i max_j a_ij`. Negative weights swap min and max; the
    /// max-of-min result is folded back to min-of-max by distributing over
    /// one selection from each row.
    fn scale(&self, w: f64) -> Result<Self> {
        if w >= 0.0 {
            return Self {
                rows: self
                    .rows
                    .iter()
                    .map(|row| row.iter().map(|a| a.scaled(w)).collect())
                    .collect(),
            }
            .check_size();
        }
        // max over rows of min over scaled entries -> enumerate selections.
        let scaled: Vec<Vec<Affine>> = self
            .rows
            .iter()
            .map(|row| row.iter().map(|a| a.scaled(w)).collect())
            .collect();
        let mut selections: Vec<Vec<Affine>> = vec![Vec::new()];
        for group in &scaled {
            let mut next = Vec::with_capacity(selections.len() * group.len());
            for sel in &selections {
                for entry in group {
                    let mut s = sel.clone();
                    s.push(entry.clone());
                    next.push(s);
                }
            }
            if next.len() > MAX_NORMAL_FORM {
                return Err(Error::InvalidRegion(
                    "negative-weight normalization exceeds size limit".into(),
                ));
            }
            selections = next;
        }
        Self { rows: selections }.check_size()
    }

    fn add(&self, other: &Self) -> Result<Self> {
        let mut rows = Vec::with_capacity(self.rows.len() * other.rows.len());
        for ra in &self.rows {
            for rb in &other.rows {
                let mut row = Vec::with_capacity(ra.len() * rb.len());
                for a in ra {
                    for b in rb {
                        row.push(a.plus(b));
                    }
                }
                rows.push(row);
            }
        }
        Self { rows }.check_size()
    }

    fn max(&self, other: &Self) -> Result<Self> {
        let mut rows = Vec::with_capacity(self.rows.len() * other.rows.len());
        for ra in &self.rows {
            for rb in &other.rows {
                let mut row = ra.clone();
                row.extend(rb.iter().cloned());
                rows.push(row);
            }
        }
        Self { rows }.check_size()
    }
}

/// Half-space `coeffs . x <= bound`.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfSpace {
    pub coeffs: Vec<f64>,
    pub bound: f64,
}

/// A compiled region: per-comparison normal forms for fast membership, plus
/// the disjunctive half-space expansion for the polyhedral path.
#[derive(Debug, Clone)]
pub struct CompiledRegion {
    pub bounds: Vec<(f64, f64)>,
    comparisons: Vec<CompiledComparison>,
}

#[derive(Debug, Clone)]
struct CompiledComparison {
    normal: MinOfMax,
    relation: Relation,
    threshold: f64,
    strict: bool,
}

impl CompiledComparison {
    fn effective_threshold(&self, eps: f64) -> f64 {
        if !self.strict {
            return self.threshold;
        }
        match self.relation {
            Relation::Le => self.threshold - eps,
            Relation::Ge => self.threshold + eps,
        }
    }

    /// Disjunctive expansion into half-space conjunctions.
    ///
    /// `min_i max_j a_ij <= t` holds iff some row has all entries `<= t`;
    /// `min_i max_j a_ij >= t` holds iff every row has some entry `>= t`
    /// (expanded to disjunctive form by choosing one entry per row).
    fn to_dnf(&self, eps: f64) -> Vec<Vec<HalfSpace>> {
        let t = self.effective_threshold(eps);
        match self.relation {
            Relation::Le => self
                .normal
                .rows
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|a| HalfSpace { coeffs: a.coeffs.clone(), bound: t - a.constant })
                        .collect()
                })
                .collect(),
            Relation::Ge => {
                let mut alts: Vec<Vec<HalfSpace>> = vec![Vec::new()];
                for row in &self.normal.rows {
                    let mut next = Vec::with_capacity(alts.len() * row.len());
                    for alt in &alts {
                        for a in row {
                            let mut c = alt.clone();
                            // a(x) >= t  <=>  -coeffs . x <= constant - t
                            c.push(HalfSpace {
                                coeffs: a.coeffs.iter().map(|v| -v).collect(),
                                bound: a.constant - t,
                            });
                            next.push(c);
                        }
                    }
                    alts = next;
                }
                alts
            }
        }
    }
}

impl CompiledRegion {
    pub fn compile(region: &OutageRegion) -> Result<Self> {
        region.validate()?;
        let n = region.dim();
        let comparisons = region
            .constraints
            .iter()
            .map(|c| {
                Ok(CompiledComparison {
                    normal: c.expr.normalize(n)?,
                    relation: c.relation,
                    threshold: c.threshold,
                    strict: c.strict,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { bounds: region.bounds(), comparisons })
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn contains(&self, x: &[f64], eps: f64) -> bool {
        const SLACK: f64 = 1e-12;
        self.comparisons.iter().all(|c| {
            let v = c.normal.eval(x);
            let t = c.effective_threshold(eps);
            match c.relation {
                Relation::Le => v <= t + SLACK,
                Relation::Ge => v >= t - SLACK,
            }
        })
    }

    /// Expands the conjunction of comparisons into a union of half-space
    /// conjunctions (polyhedra, to be intersected with the box).
    pub fn polyhedra(&self, eps: f64) -> Result<Vec<Vec<HalfSpace>>> {
        let mut union: Vec<Vec<HalfSpace>> = vec![Vec::new()];
        for c in &self.comparisons {
            let dnf = c.to_dnf(eps);
            let mut next = Vec::with_capacity(union.len() * dnf.len());
            for existing in &union {
                for alt in &dnf {
                    let mut merged = existing.clone();
                    merged.extend(alt.iter().cloned());
                    next.push(merged);
                }
            }
            if next.len() > MAX_NORMAL_FORM {
                return Err(Error::InvalidRegion(
                    "disjunctive expansion exceeds size limit".into(),
                ));
            }
            union = next;
        }
        Ok(union)
    }
}
