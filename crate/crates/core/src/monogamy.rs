//! Monogamy relations: for a theory `T`, the largest CHSH winning
//! probability an eavesdropper can share with Alice once Alice and Bob
//! already win with probability `β`.

use std::fmt;
use std::io::Read;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::entropy::{Probability, PROBABILITY_TOLERANCE};
use crate::error::{Error, Result};

/// Best classical CHSH winning probability.
pub const CLASSICAL_BOUND: f64 = 0.75;

/// Best quantum CHSH winning probability, `(2 + √2)/4`.
pub const TSIRELSON_BOUND: f64 = (2.0 + std::f64::consts::SQRT_2) / 4.0;

/// Grid used to check user-supplied closed-form curves at construction.
const CUSTOM_VALIDATION_POINTS: usize = 1001;

/// A CHSH winning probability in `[1/2, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct BetaValue(f64);

impl BetaValue {
    pub const CHANCE: BetaValue = BetaValue(0.5);
    pub const CLASSICAL: BetaValue = BetaValue(CLASSICAL_BOUND);
    pub const TSIRELSON: BetaValue = BetaValue(TSIRELSON_BOUND);
    pub const MAX: BetaValue = BetaValue(1.0);

    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite()
            || !(0.5 - PROBABILITY_TOLERANCE..=1.0 + PROBABILITY_TOLERANCE).contains(&value)
        {
            return Err(Error::domain(format!(
                "CHSH winning probability {value} is outside [1/2, 1]"
            )));
        }
        Ok(BetaValue(value.clamp(0.5, 1.0)))
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    pub fn as_probability(self) -> Probability {
        Probability::new(self.0).expect("[1/2, 1] lies inside [0, 1]")
    }
}

impl TryFrom<f64> for BetaValue {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        BetaValue::new(value)
    }
}

impl From<BetaValue> for f64 {
    fn from(b: BetaValue) -> f64 {
        b.0
    }
}

impl fmt::Display for BetaValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Theory {
    Quantum,
    NoSignalling,
    Custom,
}

impl Theory {
    pub fn short_name(self) -> &'static str {
        match self {
            Theory::Quantum => "qm",
            Theory::NoSignalling => "ns",
            Theory::Custom => "custom",
        }
    }
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Theory::Quantum => "quantum",
            Theory::NoSignalling => "no-signalling",
            Theory::Custom => "custom",
        })
    }
}

/// Quantum trade-off `f(β) = 1/2 + √(8 − (8β − 4)²)/8` on `[1/2, (2+√2)/4]`.
pub fn f_quantum(beta: BetaValue) -> Result<BetaValue> {
    let b = beta.get();
    if b > TSIRELSON_BOUND + PROBABILITY_TOLERANCE {
        return Err(Error::domain(format!(
            "β = {b} exceeds the Tsirelson bound {TSIRELSON_BOUND}"
        )));
    }
    // The radicand vanishes like (T − β), so round-off in β of a few ulps
    // would surface as ~1e-8 after the square root; snap to the endpoint.
    if TSIRELSON_BOUND - b <= 4.0 * f64::EPSILON {
        return Ok(BetaValue::CHANCE);
    }
    let s = 8.0 * b - 4.0;
    let radicand = (8.0 - s * s).max(0.0);
    BetaValue::new(0.5 + radicand.sqrt() / 8.0)
}

/// No-signalling trade-off `f(β) = 3/2 − β`.
pub fn f_nosignalling(beta: BetaValue) -> BetaValue {
    BetaValue((1.5 - beta.get()).clamp(0.5, 1.0))
}

/// Eve's probability of guessing Alice's bit when her own CHSH winning
/// probability with Alice is `beta_ae`: `clamp(2β − 1/2, 1/2, 1)`.
pub fn eve_guess_from_beta(beta_ae: BetaValue) -> Probability {
    Probability::new((2.0 * beta_ae.get() - 0.5).clamp(0.5, 1.0)).expect("clamped into [1/2, 1]")
}

/// Monotone non-increasing piecewise-linear curve through `(β, f)` knots.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinear {
    betas: Vec<f64>,
    values: Vec<f64>,
}

impl PiecewiseLinear {
    /// Knots must have strictly increasing `β` in `[1/2, 1]` and non-increasing
    /// `f` in `[1/2, 1]`.
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::parse("curve table needs at least two rows"));
        }
        let mut betas = Vec::with_capacity(points.len());
        let mut values = Vec::with_capacity(points.len());
        for (i, (b, f)) in points.into_iter().enumerate() {
            let b = BetaValue::new(b)
                .map_err(|e| Error::parse(format!("row {}: beta: {e}", i + 1)))?
                .get();
            let f = BetaValue::new(f)
                .map_err(|e| Error::parse(format!("row {}: f: {e}", i + 1)))?
                .get();
            if let (Some(&pb), Some(&pf)) = (betas.last(), values.last()) {
                if b <= pb {
                    return Err(Error::parse(format!(
                        "row {}: beta {b} is not strictly greater than {pb}",
                        i + 1
                    )));
                }
                if f > pf {
                    return Err(Error::parse(format!(
                        "row {}: f {f} increases from {pf}; curve must be non-increasing",
                        i + 1
                    )));
                }
            }
            betas.push(b);
            values.push(f);
        }
        Ok(PiecewiseLinear { betas, values })
    }

    /// Parses a two-column CSV table with header `beta,f`.
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = rdr
            .headers()
            .map_err(|e| Error::parse(format!("curve header: {e}")))?;
        if headers.len() != 2 || &headers[0] != "beta" || &headers[1] != "f" {
            return Err(Error::parse(format!(
                "curve header must be `beta,f`, found `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut points = Vec::new();
        for (i, record) in rdr.records().enumerate() {
            let record = record.map_err(|e| Error::parse(format!("row {}: {e}", i + 1)))?;
            if record.len() != 2 {
                return Err(Error::parse(format!(
                    "row {}: expected 2 fields, found {}",
                    i + 1,
                    record.len()
                )));
            }
            let field = |k: usize, name: &str| -> Result<f64> {
                record[k].parse::<f64>().map_err(|e| {
                    Error::parse(format!("row {}: {name} `{}`: {e}", i + 1, &record[k]))
                })
            };
            points.push((field(0, "beta")?, field(1, "f")?));
        }
        Self::new(points)
    }

    pub fn from_csv_str(text: &str) -> Result<Self> {
        Self::from_csv_reader(text.as_bytes())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::from_csv_reader(std::io::BufReader::new(file))
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.betas[0], *self.betas.last().expect("non-empty"))
    }

    pub fn knots(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.betas.iter().copied().zip(self.values.iter().copied())
    }

    fn eval(&self, beta: f64) -> f64 {
        // first knot strictly above beta, clamped to the last segment
        let hi = self
            .betas
            .partition_point(|&b| b <= beta)
            .clamp(1, self.betas.len() - 1);
        let (b0, b1) = (self.betas[hi - 1], self.betas[hi]);
        let (f0, f1) = (self.values[hi - 1], self.values[hi]);
        let t = ((beta - b0) / (b1 - b0)).clamp(0.0, 1.0);
        f0 + t * (f1 - f0)
    }
}

type CurveFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Curve {
    Quantum,
    NoSignalling,
    ClosedForm(CurveFn),
    Table(PiecewiseLinear),
}

/// A theory together with its monogamy curve and the β range it covers.
#[derive(Clone)]
pub struct MonogamyModel {
    theory: Theory,
    curve: Curve,
    domain_lower: f64,
    domain_upper: BetaValue,
}

impl fmt::Debug for MonogamyModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let curve = match &self.curve {
            Curve::Quantum => "quantum",
            Curve::NoSignalling => "no-signalling",
            Curve::ClosedForm(_) => "closed-form",
            Curve::Table(_) => "table",
        };
        f.debug_struct("MonogamyModel")
            .field("theory", &self.theory)
            .field("curve", &curve)
            .field("domain", &(self.domain_lower, self.domain_upper.get()))
            .finish()
    }
}

impl MonogamyModel {
    pub fn quantum() -> Self {
        MonogamyModel {
            theory: Theory::Quantum,
            curve: Curve::Quantum,
            domain_lower: 0.5,
            domain_upper: BetaValue::TSIRELSON,
        }
    }

    pub fn no_signalling() -> Self {
        MonogamyModel {
            theory: Theory::NoSignalling,
            curve: Curve::NoSignalling,
            domain_lower: 0.5,
            domain_upper: BetaValue::MAX,
        }
    }

    pub fn builtin(theory: Theory) -> Result<Self> {
        match theory {
            Theory::Quantum => Ok(Self::quantum()),
            Theory::NoSignalling => Ok(Self::no_signalling()),
            Theory::Custom => Err(Error::usage("custom theory requires a curve")),
        }
    }

    /// User curve on `[1/2, domain_upper]`. The callback is sampled on a
    /// uniform grid and rejected unless it stays in `[1/2, 1]` and never
    /// increases.
    pub fn custom_fn<F>(domain_upper: f64, curve: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let upper = BetaValue::new(domain_upper)?;
        let mut prev = f64::INFINITY;
        for k in 0..CUSTOM_VALIDATION_POINTS {
            let b = 0.5 + (upper.get() - 0.5) * k as f64 / (CUSTOM_VALIDATION_POINTS - 1) as f64;
            let v = curve(b);
            BetaValue::new(v).map_err(|_| {
                Error::domain(format!("custom curve gives f({b}) = {v}, outside [1/2, 1]"))
            })?;
            if v > prev + PROBABILITY_TOLERANCE {
                return Err(Error::domain(format!(
                    "custom curve increases near β = {b} ({prev} -> {v})"
                )));
            }
            prev = v;
        }
        Ok(MonogamyModel {
            theory: Theory::Custom,
            curve: Curve::ClosedForm(Arc::new(curve)),
            domain_lower: 0.5,
            domain_upper: upper,
        })
    }

    /// Constant curve `f ≡ value`.
    pub fn constant(value: f64, domain_upper: f64) -> Result<Self> {
        Self::custom_fn(domain_upper, move |_| value)
    }

    pub fn from_table(table: PiecewiseLinear) -> Self {
        let (lo, hi) = table.domain();
        MonogamyModel {
            theory: Theory::Custom,
            curve: Curve::Table(table),
            domain_lower: lo,
            domain_upper: BetaValue::new(hi).expect("validated by the table"),
        }
    }

    pub fn theory(&self) -> Theory {
        self.theory
    }

    pub fn domain_lower(&self) -> f64 {
        self.domain_lower
    }

    pub fn domain_upper(&self) -> BetaValue {
        self.domain_upper
    }

    pub fn contains(&self, beta: f64) -> bool {
        beta >= self.domain_lower - PROBABILITY_TOLERANCE
            && beta <= self.domain_upper.get() + PROBABILITY_TOLERANCE
    }
}

/// Evaluates the model's curve at `beta`.
pub fn evaluate(model: &MonogamyModel, beta: BetaValue) -> Result<BetaValue> {
    if !model.contains(beta.get()) {
        return Err(Error::domain(format!(
            "β = {} is outside the {} model domain [{}, {}]",
            beta.get(),
            model.theory,
            model.domain_lower,
            model.domain_upper.get()
        )));
    }
    match &model.curve {
        Curve::Quantum => f_quantum(beta),
        Curve::NoSignalling => Ok(f_nosignalling(beta)),
        Curve::ClosedForm(f) => BetaValue::new(f(beta.get())),
        Curve::Table(t) => BetaValue::new(t.eval(beta.get())),
    }
}
