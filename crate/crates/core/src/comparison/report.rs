//! Verdicts, per-point samples and the grid refinement policy shared by all
//! checks.

use serde::{Deserialize, Serialize};

/// Outcome of one comparison statement on one instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Violated,
    Equality,
    /// The statement's condition class excludes the certified constants.
    Skipped,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Violated => "violated",
            Verdict::Equality => "equality",
            Verdict::Skipped => "skipped",
        })
    }
}

/// The comparison statements, identified by what they bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Statement {
    PointLaplacian,
    Riccati,
    BoundaryLaplacian,
    CutBound,
    BoundedDensity,
    PLaplacian,
    Inradius,
    VolumeElement,
    VolumeComparison,
    TwoBoundaryDistance,
    SplittingModel,
    EigenvalueBound,
    DomainVolume,
}

impl Statement {
    pub const ALL: [Statement; 13] = [
        Statement::PointLaplacian,
        Statement::Riccati,
        Statement::BoundaryLaplacian,
        Statement::CutBound,
        Statement::BoundedDensity,
        Statement::PLaplacian,
        Statement::Inradius,
        Statement::VolumeElement,
        Statement::VolumeComparison,
        Statement::TwoBoundaryDistance,
        Statement::SplittingModel,
        Statement::EigenvalueBound,
        Statement::DomainVolume,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Statement::PointLaplacian => "point-laplacian",
            Statement::Riccati => "riccati",
            Statement::BoundaryLaplacian => "boundary-laplacian",
            Statement::CutBound => "cut-bound",
            Statement::BoundedDensity => "bounded-density",
            Statement::PLaplacian => "p-laplacian",
            Statement::Inradius => "inradius",
            Statement::VolumeElement => "volume-element",
            Statement::VolumeComparison => "volume-comparison",
            Statement::TwoBoundaryDistance => "two-boundary-distance",
            Statement::SplittingModel => "splitting-model",
            Statement::EigenvalueBound => "eigenvalue-bound",
            Statement::DomainVolume => "domain-volume",
        }
    }

    pub fn from_id(id: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.id() == id)
    }
}

impl std::fmt::Display for Statement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.id())
    }
}

/// One evaluated inequality. `margin` is the signed slack divided by
/// `max(1, |lhs|, |rhs|)`: non-negative when the inequality holds at this
/// point, and an absolute slack when both sides are at most 1 in size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub part: Option<String>,
    /// The abscissa (`t`, `s` or a radius, depending on the statement).
    pub at: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
}

/// `max(1, |lhs|, |rhs|)` over the finite sides.
pub fn margin_scale(lhs: f64, rhs: f64) -> f64 {
    [lhs, rhs].into_iter().filter(|x| x.is_finite()).fold(1.0, |m, x| m.max(x.abs()))
}

impl Sample {
    /// `lhs ≥ rhs`.
    pub fn ge(part: Option<&str>, at: f64, lhs: f64, rhs: f64) -> Self {
        Self { part: part.map(str::to_owned), at, lhs, rhs, margin: (lhs - rhs) / margin_scale(lhs, rhs) }
    }

    /// `lhs ≤ rhs`.
    pub fn le(part: Option<&str>, at: f64, lhs: f64, rhs: f64) -> Self {
        Self { part: part.map(str::to_owned), at, lhs, rhs, margin: (rhs - lhs) / margin_scale(lhs, rhs) }
    }

    /// `lhs = rhs`; any deviation counts against the margin.
    pub fn identity(part: Option<&str>, at: f64, lhs: f64, rhs: f64) -> Self {
        Self { part: part.map(str::to_owned), at, lhs, rhs, margin: -(lhs - rhs).abs() / margin_scale(lhs, rhs) }
    }

    /// `lhs - rhs` for `≥`-type samples and `rhs - lhs` otherwise, without
    /// the scale normalization.
    pub fn raw_slack(&self) -> f64 {
        self.margin * margin_scale(self.lhs, self.rhs)
    }

    /// `statement` or `statement.part`.
    pub fn check_id(&self, statement: Statement) -> String {
        match &self.part {
            Some(p) => format!("{}.{p}", statement.id()),
            None => statement.id().to_owned(),
        }
    }
}

/// Comparison constants a report was checked against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    pub kappa: f64,
    pub lambda: Option<f64>,
    pub delta: Option<f64>,
}

/// Agreement of an instance with a rigidity metric, measured as the largest
/// pointwise deviation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rigidity {
    pub case: String,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub matches: bool,
}

impl Rigidity {
    pub fn new(case: impl Into<String>, max_deviation: f64, tolerance: f64) -> Self {
        Self { case: case.into(), max_deviation, tolerance, matches: max_deviation <= tolerance }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub statement: Statement,
    pub verdict: Verdict,
    pub worst_margin: Option<f64>,
    pub worst_at: Option<f64>,
    pub worst_part: Option<String>,
    pub tolerance: f64,
    /// Grid size of the run that produced the samples.
    pub points: usize,
    pub refined: bool,
    pub constants: Constants,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skip_reason: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rigidity: Vec<Rigidity>,
    pub samples: Vec<Sample>,
}

/// Classify a set of margins: violated iff some margin is below `-tol`,
/// equality iff every margin is within `tol` of zero.
pub fn classify(samples: &[Sample], tol: f64) -> Verdict {
    if samples.is_empty() {
        return Verdict::Skipped;
    }
    if samples.iter().any(|s| s.margin.is_nan() || s.margin < -tol) {
        Verdict::Violated
    } else if samples.iter().all(|s| s.margin.abs() <= tol) {
        Verdict::Equality
    } else {
        Verdict::Holds
    }
}

impl ComparisonReport {
    pub fn from_samples(statement: Statement, constants: Constants, samples: Vec<Sample>, tol: f64, points: usize, refined: bool) -> Self {
        let verdict = classify(&samples, tol);
        let worst = samples.iter().min_by(|a, b| {
            // NaN sorts first so that it is reported.
            match (a.margin.is_nan(), b.margin.is_nan()) {
                (true, _) => std::cmp::Ordering::Less,
                (_, true) => std::cmp::Ordering::Greater,
                _ => a.margin.total_cmp(&b.margin),
            }
        });
        let skip_reason = samples.is_empty().then(|| "no admissible sample point".to_owned());
        Self {
            statement,
            verdict,
            worst_margin: worst.map(|s| s.margin),
            worst_at: worst.map(|s| s.at),
            worst_part: worst.and_then(|s| s.part.clone()),
            tolerance: tol,
            points,
            refined,
            constants,
            skip_reason,
            notes: Vec::new(),
            rigidity: Vec::new(),
            samples,
        }
    }

    pub fn skipped(statement: Statement, constants: Constants, tol: f64, reason: impl Into<String>) -> Self {
        Self {
            statement,
            verdict: Verdict::Skipped,
            worst_margin: None,
            worst_at: None,
            worst_part: None,
            tolerance: tol,
            points: 0,
            refined: false,
            constants,
            skip_reason: Some(reason.into()),
            notes: Vec::new(),
            rigidity: Vec::new(),
            samples: Vec::new(),
        }
    }

    /// Samples of one part, in grid order.
    pub fn part<'a>(&'a self, part: &'a str) -> impl Iterator<Item = &'a Sample> + 'a {
        self.samples.iter().filter(move |s| s.part.as_deref() == Some(part))
    }

    /// The report restricted to samples whose part is one of `parts`, either
    /// plainly or with a `:component` suffix. Verdict and worst sample are
    /// recomputed.
    pub fn restrict(self, parts: &[String]) -> Self {
        let keep = |p: &Option<String>| {
            p.as_deref().is_some_and(|p| parts.iter().any(|q| p == q || p.strip_prefix(q.as_str()).is_some_and(|r| r.starts_with(':'))))
        };
        let samples: Vec<Sample> = self.samples.into_iter().filter(|s| keep(&s.part)).collect();
        let mut out = Self::from_samples(self.statement, self.constants, samples, self.tolerance, self.points, self.refined);
        out.notes = self.notes;
        out.rigidity = self.rigidity;
        out
    }

    /// Verdict restricted to one part.
    pub fn part_verdict(&self, part: &str) -> Verdict {
        let v: Vec<Sample> = self.part(part).cloned().collect();
        classify(&v, self.tolerance)
    }

    /// True when every point before the last equality point of `part` is
    /// itself an equality point.
    pub fn equality_propagates(&self, part: Option<&str>) -> bool {
        let margins: Vec<f64> = self.samples.iter().filter(|s| s.part.as_deref() == part).map(|s| s.margin).collect();
        match margins.iter().rposition(|m| m.abs() <= self.tolerance) {
            Some(last) => margins[..=last].iter().all(|m| m.abs() <= self.tolerance),
            None => true,
        }
    }
}

/// Grid policy for checks sampled along geodesics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CheckOptions {
    /// Absolute verdict tolerance on margins.
    pub tol: f64,
    /// Uniform grid size before refinement.
    pub points: usize,
    /// Grid multiplier applied when a margin lies in `[-tol, 10·tol]`.
    pub refine_factor: usize,
    /// Relative width of the exclusion zones at the origin and at barriers.
    pub exclusion: f64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self { tol: 1e-7, points: 512, refine_factor: 10, exclusion: 1e-4 }
    }
}

/// Run `sample(points)` on the default grid, and once more on the refined
/// grid when any margin is near zero. Returns the samples, the grid size
/// used and whether refinement happened.
pub fn run_refined<E, F>(opts: &CheckOptions, mut sample: F) -> Result<(Vec<Sample>, usize, bool), E>
where
    F: FnMut(usize) -> Result<Vec<Sample>, E>,
{
    let first = sample(opts.points)?;
    let near = first.iter().any(|s| s.margin >= -opts.tol && s.margin <= 10.0 * opts.tol);
    if near && opts.refine_factor > 1 {
        let points = opts.points * opts.refine_factor;
        Ok((sample(points)?, points, true))
    } else {
        Ok((first, opts.points, false))
    }
}
