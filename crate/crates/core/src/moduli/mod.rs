//! Surface data model and the integer bookkeeping of the classification:
//! end orders, branch orders, umbilic structure, compatibility checks,
//! total-curvature identities and the exhaustive enumeration of admissible
//! end types for a given dual-curvature budget.

use crate::symcore::{
    branch_order, differential_order_at, order_at, parse_scalar,
    rational_function_from_json, rational_function_to_json, DivisorEntry, ExactScalar, Poly,
    RationalFunction, SpherePoint, SymError,
};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fmt;

type RF = RationalFunction<ExactScalar>;

#[derive(Debug, Clone, PartialEq)]
pub enum ModuliError {
    Sym(SymError),
    /// An interior zero of Q does not match the branching of G, or an
    /// interior branch point of G is not a zero of Q.
    Compatibility(String),
    /// An end fails completeness: branch order minus end order is < 2.
    Incomplete { end: String, slack: i64 },
    /// A curvature identity has a nonzero residual: the data is invalid.
    Residual(String),
    /// Malformed spec input.
    BadSpec(String),
}

impl From<SymError> for ModuliError {
    fn from(e: SymError) -> Self {
        ModuliError::Sym(e)
    }
}

impl fmt::Display for ModuliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuliError::Sym(e) => write!(f, "{e}"),
            ModuliError::Compatibility(s) => write!(f, "compatibility violation: {s}"),
            ModuliError::Incomplete { end, slack } => {
                write!(f, "end {end} incomplete: branch-order slack {slack} < 2")
            }
            ModuliError::Residual(s) => write!(f, "identity residual: {s}"),
            ModuliError::BadSpec(s) => write!(f, "bad spec: {s}"),
        }
    }
}

impl std::error::Error for ModuliError {}

/// Geometric payload of a surface spec.
#[derive(Debug, Clone)]
pub enum SurfaceData {
    /// Genus 0: a rational hyperbolic Gauss map and Hopf density on the
    /// sphere.
    Rational { g: RF, q_density: RF },
    /// Genus 1: per-end integer data (d_j, μ_j#) plus umbilic orders; the
    /// pointwise verification is numeric and lives with the elliptic
    /// evaluators, as exact genus-1 function-field arithmetic is out of
    /// scope here.
    GenusOneInteger {
        per_end: Vec<(i64, i64)>,
        umbilic_orders: Vec<i64>,
        degree_g: i64,
    },
}

/// Surface specification: genus, marked ends, data (G, Q).
#[derive(Debug, Clone)]
pub struct SurfaceSpec {
    pub genus: u8,
    pub ends: Vec<SpherePoint>,
    pub data: SurfaceData,
    pub label: String,
    /// Named exact parameters (θ and friends) recorded for reports.
    pub params: BTreeMap<String, ExactScalar>,
}

impl SurfaceSpec {
    pub fn rational(
        label: impl Into<String>,
        ends: Vec<SpherePoint>,
        g: RF,
        q_density: RF,
    ) -> Result<Self, ModuliError> {
        if ends.is_empty() {
            return Err(ModuliError::BadSpec("a spec needs at least one end".into()));
        }
        for i in 0..ends.len() {
            for j in (i + 1)..ends.len() {
                if ends[i] == ends[j] {
                    return Err(ModuliError::BadSpec(format!("repeated end {}", ends[i])));
                }
            }
        }
        if g.is_constant() {
            return Err(ModuliError::BadSpec("G must be non-constant".into()));
        }
        Ok(SurfaceSpec {
            genus: 0,
            ends,
            data: SurfaceData::Rational { g, q_density },
            label: label.into(),
            params: BTreeMap::new(),
        })
    }

    pub fn genus_one(
        label: impl Into<String>,
        per_end: Vec<(i64, i64)>,
        umbilic_orders: Vec<i64>,
        degree_g: i64,
    ) -> Self {
        let n = per_end.len();
        SurfaceSpec {
            genus: 1,
            ends: (0..n).map(|_| SpherePoint::Infinity).collect(),
            data: SurfaceData::GenusOneInteger {
                per_end,
                umbilic_orders,
                degree_g,
            },
            label: label.into(),
            params: BTreeMap::new(),
        }
    }

    pub fn with_param(mut self, name: &str, value: ExactScalar) -> Self {
        self.params.insert(name.to_string(), value);
        self
    }

    pub fn rational_data(&self) -> Option<(&RF, &RF)> {
        match &self.data {
            SurfaceData::Rational { g, q_density } => Some((g, q_density)),
            _ => None,
        }
    }
}

/// Per-end integer report.
#[derive(Debug, Clone, PartialEq)]
pub struct EndReport {
    pub point: SpherePoint,
    /// d_j = ord of Q at the end (as a 2-differential).
    pub d: i64,
    /// μ_j# = branching order of G at the end.
    pub mu_sharp: i64,
    pub slack: i64,
    /// d ≥ -2, so the end admits Frobenius analysis.
    pub regular_singular: bool,
}

/// Umbilic point (interior zero of Q); ξ = ord Q = branch order of G there.
#[derive(Debug, Clone)]
pub enum UmbilicReport {
    Point { point: SpherePoint, xi: i64 },
    /// Roots outside the scalar domain, as an irreducible factor; ξ applies
    /// to each of its deg(factor) roots.
    Factor { factor: Poly<ExactScalar>, xi: i64 },
}

impl UmbilicReport {
    pub fn xi(&self) -> i64 {
        match self {
            UmbilicReport::Point { xi, .. } | UmbilicReport::Factor { xi, .. } => *xi,
        }
    }

    pub fn count(&self) -> i64 {
        match self {
            UmbilicReport::Point { .. } => 1,
            UmbilicReport::Factor { factor, .. } => factor.degree().unwrap_or(0) as i64,
        }
    }
}

/// Integer curvature bookkeeping; all residuals must vanish.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureReport {
    pub deg_g: i64,
    pub ta_over_4pi: i64,
    pub gauss_bonnet_residual: i64,
    pub riemann_roch_residual: i64,
    pub osserman_slack: i64,
}

/// Full pointwise analysis of a spec: end reports plus umbilic reports, with
/// the compatibility condition (interior zeros of Q = branch points of G,
/// same order) and completeness (slack ≥ 2) enforced for rational data.
/// Genus-1 integer specs return their recorded data; their pointwise checks
/// are numeric and live with the census.
pub fn analyze(spec: &SurfaceSpec) -> Result<(Vec<EndReport>, Vec<UmbilicReport>), ModuliError> {
    match &spec.data {
        SurfaceData::Rational { g, q_density } => analyze_rational(spec, g, q_density),
        SurfaceData::GenusOneInteger {
            per_end,
            umbilic_orders,
            ..
        } => {
            let ends = per_end
                .iter()
                .map(|&(d, mu)| EndReport {
                    point: SpherePoint::Infinity,
                    d,
                    mu_sharp: mu,
                    slack: mu - d,
                    regular_singular: d >= -2,
                })
                .collect::<Vec<_>>();
            for e in &ends {
                if e.slack < 2 {
                    return Err(ModuliError::Incomplete {
                        end: e.point.to_string(),
                        slack: e.slack,
                    });
                }
            }
            let umbilics = umbilic_orders
                .iter()
                .map(|&xi| UmbilicReport::Point {
                    point: SpherePoint::Infinity,
                    xi,
                })
                .collect();
            Ok((ends, umbilics))
        }
    }
}

fn analyze_rational(
    spec: &SurfaceSpec,
    g: &RF,
    q_density: &RF,
) -> Result<(Vec<EndReport>, Vec<UmbilicReport>), ModuliError> {
    if q_density.is_zero() {
        return Err(ModuliError::BadSpec("Q must not vanish identically".into()));
    }
    let mut end_reports = vec![];
    for p in &spec.ends {
        let d = differential_order_at(q_density, 2, p)?;
        let mu = branch_order(g, p)?;
        let slack = mu - d;
        if slack < 2 {
            return Err(ModuliError::Incomplete {
                end: p.to_string(),
                slack,
            });
        }
        end_reports.push(EndReport {
            point: p.clone(),
            d,
            mu_sharp: mu,
            slack,
            regular_singular: d >= -2,
        });
    }
    // Umbilic points: zeros of Q off the ends. Each must match the branch
    // order of G; conversely, interior branch points of G must be zeros of Q.
    // The point ∞ is checked explicitly since the density order there
    // differs from the function order by the chart weight.
    let ambient = crate::symcore::ambient_discriminant(&[g, q_density]);
    let mut umbilics = vec![];
    if !spec.ends.contains(&SpherePoint::Infinity) {
        let d_inf = differential_order_at(q_density, 2, &SpherePoint::Infinity)?;
        let bo_inf = branch_order(g, &SpherePoint::Infinity)?;
        if d_inf < 0 {
            return Err(ModuliError::Compatibility(format!(
                "Q has a pole of order {} at the non-end point inf",
                -d_inf
            )));
        }
        if d_inf != bo_inf {
            return Err(ModuliError::Compatibility(format!(
                "at inf: ord Q = {d_inf} but branch order of G = {bo_inf}"
            )));
        }
        if d_inf > 0 {
            umbilics.push(UmbilicReport::Point {
                point: SpherePoint::Infinity,
                xi: d_inf,
            });
        }
    }
    for entry in crate::symcore::divisor_in_domain(q_density, ambient)? {
        match entry {
            DivisorEntry::Point(p, ord) => {
                if p.is_infinity() || spec.ends.contains(&p) {
                    continue;
                }
                if ord <= 0 {
                    return Err(ModuliError::Compatibility(format!(
                        "Q has a pole of order {} at the non-end point {p}",
                        -ord
                    )));
                }
                let bo = branch_order(g, &p)?;
                if bo != ord {
                    return Err(ModuliError::Compatibility(format!(
                        "at {p}: ord Q = {ord} but branch order of G = {bo}"
                    )));
                }
                umbilics.push(UmbilicReport::Point { point: p, xi: ord });
            }
            DivisorEntry::Irreducible(factor, ord) => {
                if ord <= 0 {
                    return Err(ModuliError::Compatibility(format!(
                        "Q has poles along the irreducible factor {factor}"
                    )));
                }
                // Branch order of G along the factor: multiplicity of the
                // factor in G', provided G stays finite on its roots.
                let gp = g.derivative();
                let bo = factor_multiplicity(gp.num(), &factor)
                    - factor_multiplicity(gp.den(), &factor);
                if bo != ord {
                    return Err(ModuliError::Compatibility(format!(
                        "along {factor}: ord Q = {ord} but branch order of G = {bo}"
                    )));
                }
                umbilics.push(UmbilicReport::Factor { factor, xi: ord });
            }
        }
    }
    // Interior branch points of G (finite values) with no matching Q zero.
    let gp = g.derivative();
    for entry in crate::symcore::divisor_in_domain(&gp, ambient)? {
        if let DivisorEntry::Point(p, ord) = entry {
            if ord <= 0 || p.is_infinity() || spec.ends.contains(&p) {
                continue;
            }
            if order_at(g, &p).map(|o| o < 0).unwrap_or(false) {
                continue; // pole of G: handled in the 1/G chart below
            }
            let qo = order_at(q_density, &p)?;
            if qo != ord {
                return Err(ModuliError::Compatibility(format!(
                    "G branches at interior point {p} (order {ord}) but ord Q = {qo}"
                )));
            }
        }
    }
    // Pole-branch points of G (branching visible in the 1/G chart).
    for entry in crate::symcore::divisor_in_domain(&g.inv()?, ambient)? {
        if let DivisorEntry::Point(p, ord) = entry {
            if p.is_infinity() || spec.ends.contains(&p) || ord < 2 {
                continue;
            }
            let qo = order_at(q_density, &p)?;
            if qo != ord - 1 {
                return Err(ModuliError::Compatibility(format!(
                    "G has a pole-branch at {p} (order {}) but ord Q = {qo}",
                    ord - 1
                )));
            }
        }
    }
    Ok((end_reports, umbilics))
}

fn factor_multiplicity(p: &Poly<ExactScalar>, factor: &Poly<ExactScalar>) -> i64 {
    if p.is_zero() {
        return 0;
    }
    let mut m = 0;
    let mut cur = p.clone();
    loop {
        match cur.div_rem(factor) {
            Ok((q, r)) if r.is_zero() => {
                m += 1;
                cur = q;
            }
            _ => return m,
        }
    }
}

/// Check the curvature identities and produce the integer report:
/// TA/2π = χ + Σμ# + Σξ (Gauss-Bonnet via the branching of G), total order
/// Σξ + Σd = -2χ, TA/2π = 2γ - 2 + Σ(μ# - d), and the Osserman-type slack
/// TA/2π - 2(γ + n - 1) ≥ 0.
pub fn curvature_report(spec: &SurfaceSpec) -> Result<CurvatureReport, ModuliError> {
    let (ends, umbilics) = analyze(spec)?;
    let deg_g = match &spec.data {
        SurfaceData::Rational { g, .. } => g.map_degree() as i64,
        SurfaceData::GenusOneInteger { degree_g, .. } => *degree_g,
    };
    let gamma = spec.genus as i64;
    let chi = 2 - 2 * gamma;
    let n = ends.len() as i64;
    let sum_mu: i64 = ends.iter().map(|e| e.mu_sharp).sum();
    let sum_d: i64 = ends.iter().map(|e| e.d).sum();
    let sum_xi: i64 = umbilics.iter().map(|u| u.xi() * u.count()).sum();
    let ta_over_2pi = 2 * deg_g;
    let gauss_bonnet_residual = ta_over_2pi - (chi + sum_mu + sum_xi);
    let riemann_roch_residual = sum_xi + sum_d + 2 * chi;
    let ta_identity = ta_over_2pi - (2 * gamma - 2 + (sum_mu - sum_d));
    let osserman_slack = ta_over_2pi - 2 * (gamma + n - 1);
    if gauss_bonnet_residual != 0 {
        return Err(ModuliError::Residual(format!(
            "Gauss-Bonnet residual {gauss_bonnet_residual}"
        )));
    }
    if riemann_roch_residual != 0 {
        return Err(ModuliError::Residual(format!(
            "total-order residual {riemann_roch_residual}"
        )));
    }
    if ta_identity != 0 {
        return Err(ModuliError::Residual(format!(
            "TA identity residual {ta_identity}"
        )));
    }
    if osserman_slack < 0 {
        return Err(ModuliError::Residual(format!(
            "negative Osserman slack {osserman_slack}"
        )));
    }
    Ok(CurvatureReport {
        deg_g,
        ta_over_4pi: deg_g,
        gauss_bonnet_residual,
        riemann_roch_residual,
        osserman_slack,
    })
}

/// One admissible type from the enumerator: genus, end data and umbilic
/// total, with the canonical label Γ(d_1,...,d_n).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TypeTuple {
    pub genus: u8,
    /// (d_j, μ_j#) pairs, sorted with the least-negative d first.
    pub ends: Vec<(i64, i64)>,
    pub xi_total: i64,
    pub label: String,
}

impl TypeTuple {
    fn new(genus: u8, mut ends: Vec<(i64, i64)>, xi_total: i64) -> Self {
        ends.sort();
        ends.reverse();
        let letter = match genus {
            0 => "O".to_string(),
            1 => "I".to_string(),
            g => format!("genus{g}"),
        };
        let ds: Vec<String> = ends.iter().map(|(d, _)| d.to_string()).collect();
        let label = format!("{letter}({})", ds.join(","));
        TypeTuple {
            genus,
            ends,
            xi_total,
            label,
        }
    }

    pub fn mu_pattern(&self) -> Vec<i64> {
        self.ends.iter().map(|&(_, mu)| mu).collect()
    }
}

/// A tuple removed by an exclusion rule, with its justification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exclusion {
    pub description: String,
    /// Flux/balancing exclusions are recorded as rules with their external
    /// justification; the O(-1,-3) obstruction is derived by the census.
    pub axiom: String,
}

#[derive(Debug, Clone)]
pub struct EnumerationOutcome {
    pub admitted: Vec<TypeTuple>,
    pub excluded: Vec<Exclusion>,
}

/// Exhaustively enumerate admissible (γ, n, d_j, μ_j#) for the dual
/// curvature budget TA = 4π·`budget`, budget ∈ {0, 1, 2}.
///
/// Constraints: TA/2π = 2γ - 2 + Σ(μ# - d); completeness μ# - d ≥ 2;
/// μ# ≤ deg G - 1; total order Σξ = -2χ - Σd with 1 ≤ ξ_l ≤ deg G - 1 per
/// umbilic point. Flux-type exclusions are applied as labeled rules, not
/// derived.
pub fn enumerate_types(budget: i64) -> Result<EnumerationOutcome, ModuliError> {
    if !(0..=2).contains(&budget) {
        return Err(ModuliError::BadSpec(format!(
            "unsupported budget {budget} (expected 0, 1 or 2 in units of 4π)"
        )));
    }
    let mut admitted: Vec<TypeTuple> = vec![];
    let mut excluded: Vec<Exclusion> = vec![];
    if budget == 0 {
        let mut t = TypeTuple::new(0, vec![], 0);
        t.label = "O(0)".into();
        admitted.push(t);
        return Ok(EnumerationOutcome { admitted, excluded });
    }
    let deg_g = budget;
    let mu_max = deg_g - 1;
    for gamma in 0..=budget {
        // TA/2π = 2γ - 2 + Σ slack with slack_j = μ_j# - d_j ≥ 2.
        let slack_total = 2 * deg_g + 2 - 2 * gamma;
        if slack_total < 2 {
            continue;
        }
        let n_max = slack_total / 2;
        for n in 1..=n_max {
            for slacks in partitions(slack_total, n as usize, 2) {
                for mus in cartesian(n as usize, mu_max) {
                    let ends: Vec<(i64, i64)> = slacks
                        .iter()
                        .zip(mus.iter())
                        .map(|(&s, &mu)| (mu - s, mu))
                        .collect();
                    let chi = 2 - 2 * gamma;
                    let sum_d: i64 = ends.iter().map(|&(d, _)| d).sum();
                    let xi_total = -2 * chi - sum_d;
                    if xi_total < 0 || (xi_total > 0 && mu_max < 1) {
                        continue;
                    }
                    let sum_mu: i64 = ends.iter().map(|&(_, mu)| mu).sum();
                    if 2 * deg_g != chi + sum_mu + xi_total {
                        continue;
                    }
                    let t = TypeTuple::new(gamma as u8, ends, xi_total);
                    if admitted.contains(&t) {
                        continue;
                    }
                    if !apply_exclusions(&t, gamma, n, &mut excluded) {
                        admitted.push(t);
                    }
                }
            }
        }
    }
    admitted.sort();
    excluded.sort_by(|a, b| a.description.cmp(&b.description));
    excluded.dedup();
    Ok(EnumerationOutcome { admitted, excluded })
}

/// Labeled exclusion rules. Returns true when the tuple is excluded.
fn apply_exclusions(t: &TypeTuple, gamma: i64, n: i64, out: &mut Vec<Exclusion>) -> bool {
    if gamma == 2 && n == 1 {
        out.push(Exclusion {
            description: format!("{} (γ=2, n=1)", t.label),
            axiom: "flux of the single embedded end is nonzero, contradicting balancing".into(),
        });
        return true;
    }
    if gamma == 1 && n == 2 {
        let mut ds: Vec<i64> = t.ends.iter().map(|&(d, _)| d).collect();
        ds.sort();
        if ds == vec![-2, -1] {
            out.push(Exclusion {
                description: format!("{} (mixed regular end types)", t.label),
                axiom: "a type-I end cannot balance a type-II end on a torus".into(),
            });
            return true;
        }
    }
    // O(-1,-3): the only root of the log-term coefficient is θ = 0, which is
    // excluded; derived by the o13 verifier in the census.
    if gamma == 0 && {
        let mut ds: Vec<i64> = t.ends.iter().map(|&(d, _)| d).collect();
        ds.sort();
        ds == vec![-3, -1]
    } {
        out.push(Exclusion {
            description: "O(-1,-3) (μ# = (1,1))".into(),
            axiom: "log-term coefficient vanishes only at θ = 0 (derived; see census o13)".into(),
        });
        return true;
    }
    false
}

fn partitions(total: i64, parts: usize, min: i64) -> Vec<Vec<i64>> {
    fn rec(
        total: i64,
        parts: usize,
        min: i64,
        max: i64,
        cur: &mut Vec<i64>,
        out: &mut Vec<Vec<i64>>,
    ) {
        if parts == 0 {
            if total == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let hi = max.min(total - min * (parts as i64 - 1));
        let mut v = hi;
        while v >= min {
            cur.push(v);
            rec(total - v, parts - 1, min, v, cur, out);
            cur.pop();
            v -= 1;
        }
    }
    let mut out = vec![];
    let mut cur = vec![];
    rec(total, parts, min, total, &mut cur, &mut out);
    out
}

fn cartesian(n: usize, mu_max: i64) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..n {
        let mut next = vec![];
        for base in &out {
            for mu in 0..=mu_max {
                let mut b = base.clone();
                b.push(mu);
                next.push(b);
            }
        }
        out = next;
    }
    out
}

/// JSON spec format shared with the CLI:
/// `{genus, ends: [...], G: {num, den}, Q: {num, den}, params: {...}}`.
pub fn spec_to_json(spec: &SurfaceSpec) -> Value {
    let mut params = serde_json::Map::new();
    for (k, v) in &spec.params {
        params.insert(k.clone(), json!(v.to_string()));
    }
    match &spec.data {
        SurfaceData::Rational { g, q_density } => json!({
            "label": spec.label,
            "genus": spec.genus,
            "ends": spec.ends.iter().map(|e| json!(e.to_string())).collect::<Vec<_>>(),
            "G": rational_function_to_json(g),
            "Q": rational_function_to_json(q_density),
            "params": Value::Object(params),
        }),
        SurfaceData::GenusOneInteger {
            per_end,
            umbilic_orders,
            degree_g,
        } => json!({
            "label": spec.label,
            "genus": spec.genus,
            "per_end": per_end.iter().map(|&(d, mu)| json!({"d": d, "mu_sharp": mu})).collect::<Vec<_>>(),
            "umbilic_orders": umbilic_orders,
            "deg_G": degree_g,
            "params": Value::Object(params),
        }),
    }
}

pub fn spec_from_json(v: &Value) -> Result<SurfaceSpec, ModuliError> {
    let genus = v
        .get("genus")
        .and_then(|g| g.as_u64())
        .ok_or_else(|| ModuliError::BadSpec("missing genus".into()))? as u8;
    if genus != 0 {
        return Err(ModuliError::BadSpec(
            "only genus-0 rational specs load from JSON".into(),
        ));
    }
    let ends_v = v
        .get("ends")
        .and_then(|e| e.as_array())
        .ok_or_else(|| ModuliError::BadSpec("missing ends".into()))?;
    let mut ends = vec![];
    for e in ends_v {
        let s = e
            .as_str()
            .ok_or_else(|| ModuliError::BadSpec("ends must be strings".into()))?;
        if s == "inf" || s == "∞" {
            ends.push(SpherePoint::Infinity);
        } else {
            ends.push(SpherePoint::Finite(parse_scalar(s)?));
        }
    }
    let g = rational_function_from_json(
        v.get("G")
            .ok_or_else(|| ModuliError::BadSpec("missing G".into()))?,
    )?;
    let q = rational_function_from_json(
        v.get("Q")
            .ok_or_else(|| ModuliError::BadSpec("missing Q".into()))?,
    )?;
    let label = v
        .get("label")
        .and_then(|l| l.as_str())
        .unwrap_or("spec")
        .to_string();
    let mut spec = SurfaceSpec::rational(label, ends, g, q)?;
    if let Some(params) = v.get("params").and_then(|p| p.as_object()) {
        for (k, val) in params {
            if let Some(s) = val.as_str() {
                spec.params.insert(k.clone(), parse_scalar(s)?);
            }
        }
    }
    Ok(spec)
}

/// Analysis + curvature report as JSON for the CLI.
pub fn report_json(
    spec: &SurfaceSpec,
    ends: &[EndReport],
    umbilics: &[UmbilicReport],
    curv: &CurvatureReport,
) -> Value {
    json!({
        "label": spec.label,
        "ends": ends.iter().map(|e| json!({
            "point": e.point.to_string(),
            "d": e.d,
            "mu_sharp": e.mu_sharp,
            "slack": e.slack,
            "regular_singular": e.regular_singular,
        })).collect::<Vec<_>>(),
        "umbilics": umbilics.iter().map(|u| match u {
            UmbilicReport::Point { point, xi } => json!({"point": point.to_string(), "xi": xi}),
            UmbilicReport::Factor { factor, xi } => json!({"factor": factor.to_string(), "xi": xi}),
        }).collect::<Vec<_>>(),
        "curvature": {
            "deg_G": curv.deg_g,
            "ta_over_4pi": curv.ta_over_4pi,
            "gauss_bonnet_residual": curv.gauss_bonnet_residual,
            "riemann_roch_residual": curv.riemann_roch_residual,
            "osserman_slack": curv.osserman_slack,
        },
    })
}

#[cfg(test)]
mod tests;
