//! Generalized utilitarian social welfare orders and their numerical
//! representations.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

use super::allocation::Allocation;

/// Relative tolerance inside which two welfare values are indifferent.
pub const INDIFFERENCE_TOL: f64 = 1e-12;

/// Continuous, strictly increasing transform of lifetime well-being.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum UtilityTransform {
    #[default]
    Identity,
    /// `sign(x) |x|^eta` with `eta` in (0, 1).
    Power { eta: f64 },
    /// Piecewise-linear through strictly increasing knots, extended linearly.
    Tabulated { knots: Vec<(f64, f64)> },
}

impl UtilityTransform {
    pub fn power(eta: f64) -> Result<Self> {
        let u = UtilityTransform::Power { eta };
        u.validate()?;
        Ok(u)
    }

    pub fn tabulated(knots: Vec<(f64, f64)>) -> Result<Self> {
        let u = UtilityTransform::Tabulated { knots };
        u.validate()?;
        Ok(u)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            UtilityTransform::Identity => Ok(()),
            UtilityTransform::Power { eta } => {
                if *eta > 0.0 && *eta < 1.0 {
                    Ok(())
                } else {
                    Err(Error::param(
                        "eta",
                        *eta,
                        "power exponent must lie in (0, 1)",
                    ))
                }
            }
            UtilityTransform::Tabulated { knots } => {
                if knots.len() < 2 {
                    return Err(Error::param(
                        "knots",
                        knots.len() as f64,
                        "a tabulated transform needs at least two knots",
                    ));
                }
                for pair in knots.windows(2) {
                    let ((x0, y0), (x1, y1)) = (pair[0], pair[1]);
                    let finite = [x0, y0, x1, y1].iter().all(|v| v.is_finite());
                    if !finite || x1 <= x0 || y1 <= y0 {
                        return Err(Error::param(
                            "knots",
                            x1,
                            "knots must be finite and strictly increasing in both coordinates",
                        ));
                    }
                }
                Ok(())
            }
        }
    }

    pub fn apply(&self, x: f64) -> f64 {
        match self {
            UtilityTransform::Identity => x,
            UtilityTransform::Power { eta } => x.signum() * x.abs().powf(*eta),
            UtilityTransform::Tabulated { knots } => {
                let k = knots.partition_point(|&(kx, _)| kx <= x);
                let seg = k.clamp(1, knots.len() - 1);
                let (x0, y0) = knots[seg - 1];
                let (x1, y1) = knots[seg];
                y0 + (y1 - y0) * (x - x0) / (x1 - x0)
            }
        }
    }
}

impl fmt::Display for UtilityTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UtilityTransform::Identity => f.write_str("identity"),
            UtilityTransform::Power { eta } => write!(f, "power:{eta}"),
            UtilityTransform::Tabulated { knots } => {
                f.write_str("table:")?;
                for (k, (x, y)) in knots.iter().enumerate() {
                    if k > 0 {
                        f.write_str(";")?;
                    }
                    write!(f, "{x}/{y}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CriterionKind {
    /// Classical utilitarianism, `sum u(x_i)`.
    Cu,
    /// Total generalized utilitarianism: critical-level with `c = 0`.
    Tu,
    /// Critical-level generalized utilitarianism.
    Clu,
    /// Average generalized utilitarianism.
    Au,
    /// Rank-discounted critical-level generalized utilitarianism.
    Rdclu,
}

impl CriterionKind {
    pub fn name(self) -> &'static str {
        match self {
            CriterionKind::Cu => "cu",
            CriterionKind::Tu => "tu",
            CriterionKind::Clu => "clu",
            CriterionKind::Au => "au",
            CriterionKind::Rdclu => "rdclu",
        }
    }
}

/// A social welfare order together with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct WelfareCriterion {
    pub kind: CriterionKind,
    /// Critical level `c >= 0` (CLU, RDCLU; the A6 candidate for the others).
    pub critical_level: f64,
    /// Rank utility discount factor in (0, 1), used by RDCLU only.
    pub rank_discount: f64,
    pub utility: UtilityTransform,
}

const DEFAULT_RANK_DISCOUNT: f64 = 0.5;

impl WelfareCriterion {
    fn build(kind: CriterionKind, critical_level: f64, rank_discount: f64) -> Self {
        Self {
            kind,
            critical_level,
            rank_discount,
            utility: UtilityTransform::Identity,
        }
    }

    pub fn cu() -> Self {
        Self::build(CriterionKind::Cu, 0.0, DEFAULT_RANK_DISCOUNT)
    }

    pub fn tu() -> Self {
        Self::build(CriterionKind::Tu, 0.0, DEFAULT_RANK_DISCOUNT)
    }

    pub fn clu(c: f64) -> Result<Self> {
        let crit = Self::build(CriterionKind::Clu, c, DEFAULT_RANK_DISCOUNT);
        crit.validate()?;
        Ok(crit)
    }

    pub fn au() -> Self {
        Self::build(CriterionKind::Au, 0.0, DEFAULT_RANK_DISCOUNT)
    }

    pub fn rdclu(rank_discount: f64, c: f64) -> Result<Self> {
        let crit = Self::build(CriterionKind::Rdclu, c, rank_discount);
        crit.validate()?;
        Ok(crit)
    }

    pub fn with_utility(mut self, utility: UtilityTransform) -> Result<Self> {
        utility.validate()?;
        self.utility = utility;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.critical_level.is_finite() && self.critical_level >= 0.0) {
            return Err(Error::param(
                "c",
                self.critical_level,
                "critical level must be >= 0",
            ));
        }
        if self.kind == CriterionKind::Tu && self.critical_level != 0.0 {
            return Err(Error::param(
                "c",
                self.critical_level,
                "TU is CLU with c = 0",
            ));
        }
        if !(self.rank_discount > 0.0 && self.rank_discount < 1.0) {
            return Err(Error::param(
                "beta",
                self.rank_discount,
                "rank discount factor must lie in (0, 1)",
            ));
        }
        self.utility.validate()
    }

    fn u(&self, x: f64) -> f64 {
        self.utility.apply(x)
    }

    /// Limit of `|egalitarian_value(level, n)|` as `n` grows, for RDCLU only.
    pub fn rank_discount_bound(&self, level: f64) -> Option<f64> {
        (self.kind == CriterionKind::Rdclu).then(|| {
            let b = self.rank_discount;
            (self.u(level) - self.u(self.critical_level)).abs() * b / (1.0 - b)
        })
    }

    /// Welfare of `n` people all at `level`, without materializing them.
    pub fn egalitarian_value(&self, level: f64, n: usize) -> f64 {
        let nf = n as f64;
        let uc = self.u(self.critical_level);
        match self.kind {
            CriterionKind::Cu => nf * self.u(level),
            CriterionKind::Tu => nf * (self.u(level) - self.u(0.0)),
            CriterionKind::Clu => nf * (self.u(level) - uc),
            CriterionKind::Au => self.u(level),
            CriterionKind::Rdclu => {
                let b = self.rank_discount;
                (self.u(level) - uc) * b * (1.0 - b.powi(n as i32)) / (1.0 - b)
            }
        }
    }
}

impl fmt::Display for WelfareCriterion {
    /// Canonical spec string accepted by [`FromStr`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind.name())?;
        let mut params = Vec::new();
        if self.kind == CriterionKind::Rdclu {
            params.push(format!("beta={}", self.rank_discount));
        }
        match self.kind {
            CriterionKind::Clu | CriterionKind::Rdclu => {
                params.push(format!("c={}", self.critical_level))
            }
            CriterionKind::Cu | CriterionKind::Au if self.critical_level != 0.0 => {
                params.push(format!("c={}", self.critical_level))
            }
            _ => {}
        }
        if self.utility != UtilityTransform::Identity {
            params.push(format!("u={}", self.utility));
        }
        if !params.is_empty() {
            write!(f, ":{}", params.join(","))?;
        }
        Ok(())
    }
}

impl FromStr for WelfareCriterion {
    type Err = Error;

    /// `kind[:key=value,...]` with keys `c`, `beta` and `u`
    /// (`identity`, `power:<eta>`, `table:<x>/<y>;<x>/<y>...`).
    fn from_str(spec: &str) -> Result<Self> {
        let err = |reason: String| Error::Criterion {
            spec: spec.to_string(),
            reason,
        };
        let trimmed = spec.trim();
        let (head, tail) = match trimmed.split_once(':') {
            Some((h, t)) => (h, Some(t)),
            None => (trimmed, None),
        };
        let kind = match head.trim().to_ascii_lowercase().as_str() {
            "cu" => CriterionKind::Cu,
            "tu" => CriterionKind::Tu,
            "clu" => CriterionKind::Clu,
            "au" => CriterionKind::Au,
            "rdclu" => CriterionKind::Rdclu,
            other => return Err(err(format!("unknown criterion kind `{other}`"))),
        };
        let mut crit = Self::build(kind, 0.0, DEFAULT_RANK_DISCOUNT);
        let mut saw_c = false;
        let mut saw_beta = false;
        if let Some(tail) = tail {
            for param in tail.split(',') {
                let param = param.trim();
                if param.is_empty() {
                    continue;
                }
                let (key, value) = param
                    .split_once('=')
                    .ok_or_else(|| err(format!("expected key=value, found `{param}`")))?;
                let number = |v: &str| -> Result<f64> {
                    v.trim()
                        .parse::<f64>()
                        .map_err(|_| err(format!("`{v}` is not a number")))
                };
                match key.trim() {
                    "c" => {
                        crit.critical_level = number(value)?;
                        saw_c = true;
                    }
                    "beta" => {
                        crit.rank_discount = number(value)?;
                        saw_beta = true;
                    }
                    "u" => crit.utility = parse_utility(value.trim()).map_err(&err)?,
                    other => return Err(err(format!("unknown parameter `{other}`"))),
                }
            }
        }
        if saw_beta && kind != CriterionKind::Rdclu {
            return Err(err("`beta` only applies to rdclu".into()));
        }
        if kind == CriterionKind::Clu && !saw_c {
            return Err(err("clu requires a critical level `c`".into()));
        }
        if kind == CriterionKind::Rdclu && !(saw_c && saw_beta) {
            return Err(err("rdclu requires `beta` and `c`".into()));
        }
        crit.validate().map_err(|e| err(e.to_string()))?;
        Ok(crit)
    }
}

fn parse_utility(text: &str) -> std::result::Result<UtilityTransform, String> {
    let (name, arg) = match text.split_once(':') {
        Some((n, a)) => (n, Some(a)),
        None => (text, None),
    };
    match (name, arg) {
        ("identity", None) => Ok(UtilityTransform::Identity),
        ("power", Some(a)) => {
            let eta = a
                .trim()
                .parse::<f64>()
                .map_err(|_| format!("`{a}` is not a number"))?;
            UtilityTransform::power(eta).map_err(|e| e.to_string())
        }
        ("table", Some(a)) => {
            let mut knots = Vec::new();
            for pair in a.split(';') {
                let (x, y) = pair
                    .split_once('/')
                    .ok_or_else(|| format!("table knot `{pair}` must be x/y"))?;
                let x = x
                    .trim()
                    .parse::<f64>()
                    .map_err(|_| format!("`{x}` is not a number"))?;
                let y = y
                    .trim()
                    .parse::<f64>()
                    .map_err(|_| format!("`{y}` is not a number"))?;
                knots.push((x, y));
            }
            UtilityTransform::tabulated(knots).map_err(|e| e.to_string())
        }
        _ => Err(format!("unknown utility transform `{text}`")),
    }
}

/// Parses a `|`-separated list of criterion specs.
pub fn parse_criteria(list: &str) -> Result<Vec<WelfareCriterion>> {
    let crits = list
        .split('|')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::parse)
        .collect::<Result<Vec<_>>>()?;
    if crits.is_empty() {
        return Err(Error::Criterion {
            spec: list.to_string(),
            reason: "no criteria given".into(),
        });
    }
    Ok(crits)
}

/// Outcome of a social comparison of `x` against `y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ordering {
    StrictlyBetter,
    Indifferent,
    StrictlyWorse,
}

impl Ordering {
    pub fn reverse(self) -> Self {
        match self {
            Ordering::StrictlyBetter => Ordering::StrictlyWorse,
            Ordering::Indifferent => Ordering::Indifferent,
            Ordering::StrictlyWorse => Ordering::StrictlyBetter,
        }
    }

    /// `x` is at least as good as `y`.
    pub fn at_least_as_good(self) -> bool {
        self != Ordering::StrictlyWorse
    }

    /// Sign comparison of two welfare values with the indifference band.
    pub fn of_values(a: f64, b: f64) -> Self {
        let band = INDIFFERENCE_TOL * a.abs().max(b.abs()).max(1.0);
        let diff = a - b;
        if diff > band {
            Ordering::StrictlyBetter
        } else if diff < -band {
            Ordering::StrictlyWorse
        } else {
            Ordering::Indifferent
        }
    }
}

impl fmt::Display for Ordering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ordering::StrictlyBetter => "strictly-better",
            Ordering::Indifferent => "indifferent",
            Ordering::StrictlyWorse => "strictly-worse",
        })
    }
}

/// Compensated (Neumaier) summation.
fn compensated_sum(terms: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for t in terms {
        let next = sum + t;
        if sum.abs() >= t.abs() {
            comp += (sum - next) + t;
        } else {
            comp += (t - next) + sum;
        }
        sum = next;
    }
    sum + comp
}

/// Numerical representation of `crit` evaluated at `x`.
pub fn criterion_value(x: &Allocation, crit: &WelfareCriterion) -> Result<f64> {
    if x.is_empty() {
        return Err(Error::EmptyAllocation);
    }
    crit.validate()?;
    Ok(value_unchecked(x, crit))
}

pub(crate) fn value_unchecked(x: &Allocation, crit: &WelfareCriterion) -> f64 {
    let sorted = x.sorted();
    let utils = sorted.iter().map(|&v| crit.u(v));
    match crit.kind {
        CriterionKind::Cu => compensated_sum(utils),
        CriterionKind::Tu => {
            let u0 = crit.u(0.0);
            compensated_sum(utils.map(|u| u - u0))
        }
        CriterionKind::Clu => {
            let uc = crit.u(crit.critical_level);
            compensated_sum(utils.map(|u| u - uc))
        }
        CriterionKind::Au => compensated_sum(utils) / sorted.len() as f64,
        CriterionKind::Rdclu => {
            let uc = crit.u(crit.critical_level);
            let b = crit.rank_discount;
            let mut weight = 1.0;
            compensated_sum(utils.map(|u| {
                weight *= b;
                weight * (u - uc)
            }))
        }
    }
}

pub fn compare(x: &Allocation, y: &Allocation, crit: &WelfareCriterion) -> Result<Ordering> {
    let vx = criterion_value(x, crit)?;
    let vy = criterion_value(y, crit)?;
    Ok(Ordering::of_values(vx, vy))
}

pub(crate) fn compare_unchecked(
    x: &Allocation,
    y: &Allocation,
    crit: &WelfareCriterion,
) -> Ordering {
    Ordering::of_values(value_unchecked(x, crit), value_unchecked(y, crit))
}
