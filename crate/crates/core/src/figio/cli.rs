use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use super::{emit_csv, emit_json, emit_svg, sample_figure, FigureFormat};
use crate::adversary::{
    concavity_bound_check, counterexample_with_blind_weight, eve_information, guessing_probability,
    minimize_conditional_entropy, two_point_deviation, ChannelModel, ConcavityCheck,
    Counterexample, EveStrategy, OracleResult,
};
use crate::entropy::{binary_entropy, Probability};
use crate::error::{Error, Result};
use crate::monogamy::{BetaValue, MonogamyModel, PiecewiseLinear};
use crate::numfmt::{round_half_up, sig};
use crate::security::{
    check_condition, check_pointwise, critical_beta, tsirelson, ConditionReport, CriticalResult,
    CriticalStatus, PointwiseReport,
};

#[derive(Debug, Parser)]
#[command(
    name = "monoqkd",
    version,
    about = "Security thresholds for monogamy-based key distribution"
)]
pub struct Cli {
    /// Print a single JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TheoryArg {
    Qm,
    Ns,
    Custom,
}

#[derive(Debug, clap::Args)]
struct ModelArgs {
    /// Monogamy relation limiting the eavesdropper.
    #[arg(long, value_enum)]
    theory: TheoryArg,
    /// CSV table `beta,f` for `--theory custom`.
    #[arg(long, value_name = "FILE")]
    curve: Option<PathBuf>,
}

impl ModelArgs {
    fn model(&self) -> Result<MonogamyModel> {
        match (self.theory, &self.curve) {
            (TheoryArg::Qm, None) => Ok(MonogamyModel::quantum()),
            (TheoryArg::Ns, None) => Ok(MonogamyModel::no_signalling()),
            (TheoryArg::Custom, Some(path)) => {
                Ok(MonogamyModel::from_table(PiecewiseLinear::load(path)?))
            }
            (TheoryArg::Custom, None) => Err(Error::usage("--theory custom requires --curve FILE")),
            (_, Some(_)) => Err(Error::usage("--curve is only valid with --theory custom")),
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve for the critical CHSH winning probability.
    Critical {
        #[command(flatten)]
        model: ModelArgs,
        /// Bisection tolerance on β.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Decimals in the rounded (half-up) display value.
        #[arg(long, default_value_t = 3)]
        digits: u32,
    },
    /// Evaluate the β-level condition h(β) < 3 − 4 f(β).
    Check {
        #[arg(long)]
        beta: f64,
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Evaluate h(P_B) < 2(1 − P_E).
    Pointwise {
        #[arg(long)]
        pb: f64,
        #[arg(long)]
        pe: f64,
    },
    /// Build a strategy with P_E < P_B but I(A:E) > I(A:B).
    Counterexample {
        #[arg(long)]
        pb: f64,
        /// Position of the blind-outcome weight inside its feasible interval.
        #[arg(long, default_value_t = 0.5)]
        slack: f64,
        /// Eve's alphabet size (3 or more for the ternary family).
        #[arg(long, default_value_t = 3)]
        alphabet: usize,
    },
    /// Lattice search for the minimum of Σ p_i h(P_E|i) at fixed P_E.
    Oracle {
        #[arg(long)]
        pe: f64,
        #[arg(long)]
        alphabet: usize,
        #[arg(long)]
        grid: usize,
    },
    /// Sample the figure and write it as SVG, CSV or JSON.
    Figure {
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
        #[arg(long, value_enum)]
        format: FigureFormat,
        #[arg(long, default_value_t = 201)]
        points: usize,
    },
    /// Evaluate a strategy document `{"weights": [...], "conditionals": [...]}`.
    Strategy {
        #[arg(long, value_name = "FILE")]
        file: PathBuf,
        /// Compare against a symmetric channel to Bob with this accuracy.
        #[arg(long)]
        pb: Option<f64>,
    },
}

fn prob(flag: &str, value: f64) -> Result<Probability> {
    Probability::new(value).map_err(|e| Error::Domain(format!("{flag}: {e}")))
}

fn beta(flag: &str, value: f64) -> Result<BetaValue> {
    BetaValue::new(value).map_err(|e| Error::Domain(format!("{flag}: {e}")))
}

#[derive(Serialize)]
struct CriticalDoc {
    #[serde(flatten)]
    result: CriticalResult,
    beta_star_display: String,
    tsirelson: f64,
    below_tsirelson: bool,
}

#[derive(Serialize)]
struct StrategyDoc {
    strategy: EveStrategy,
    p_e: f64,
    i_ae: f64,
    concavity: ConcavityCheck,
    #[serde(skip_serializing_if = "Option::is_none")]
    i_ab: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    counterexample: Option<bool>,
}

#[derive(Serialize)]
struct FigureDoc {
    path: PathBuf,
    format: FigureFormat,
    points: usize,
    point_p: super::PlanePoint,
    intersections: Vec<super::Intersection>,
}

enum Output {
    Critical(CriticalDoc),
    Check(ConditionReport),
    Pointwise(PointwiseReport),
    Counterexample(Counterexample),
    Oracle(OracleResult),
    Strategy(StrategyDoc),
    Figure(FigureDoc),
}

impl Output {
    fn to_json(&self) -> String {
        let v = match self {
            Output::Critical(d) => serde_json::to_string_pretty(d),
            Output::Check(d) => serde_json::to_string_pretty(d),
            Output::Pointwise(d) => serde_json::to_string_pretty(d),
            Output::Counterexample(d) => serde_json::to_string_pretty(d),
            Output::Oracle(d) => serde_json::to_string_pretty(d),
            Output::Strategy(d) => serde_json::to_string_pretty(d),
            Output::Figure(d) => serde_json::to_string_pretty(d),
        };
        v.expect("output documents serialise")
    }

    fn to_text(&self) -> String {
        let verdict = |secure: bool| if secure { "secure" } else { "insecure" };
        match self {
            Output::Critical(d) => {
                let r = &d.result;
                let status = match r.status {
                    CriticalStatus::Root => "root",
                    CriticalStatus::AlwaysSecure => "always secure on [3/4, upper]",
                    CriticalStatus::NeverSecure => "never secure on [3/4, upper]",
                };
                format!(
                    "theory: {}\nstatus: {status}\nbeta*: {} ({})\nbracket: [{}, {}]\niterations: {}\ntsirelson: {} (beta* {} it)\n",
                    r.theory,
                    d.beta_star_display,
                    sig(r.beta_star.get()),
                    sig(r.bracket.0),
                    sig(r.bracket.1),
                    r.iterations,
                    sig(d.tsirelson),
                    if d.below_tsirelson { "below" } else { "not below" },
                )
            }
            Output::Check(r) => format!(
                "theory: {}\nbeta: {}\nh(beta): {}\n3 - 4 f(beta): {}\nmargin: {}\nverdict: {}\n",
                r.theory,
                sig(r.beta.get()),
                sig(r.lhs_bits),
                sig(r.rhs_bits),
                sig(r.margin_bits),
                verdict(r.secure)
            ),
            Output::Pointwise(r) => format!(
                "h(P_B): {}\n2(1 - P_E): {}\nmargin: {}\nverdict: {}\n",
                sig(r.lhs_bits),
                sig(r.rhs_bits),
                sig(r.margin_bits),
                verdict(r.secure)
            ),
            Output::Counterexample(c) => format!(
                "P_B: {}\nP_E: {}\nI(A:B): {}\nI(A:E): {}\nstrategy: {}\n",
                sig(c.p_b),
                sig(c.p_e),
                sig(c.i_ab),
                sig(c.i_ae),
                c.strategy.to_json()
            ),
            Output::Oracle(r) => format!(
                "min sum p_i h(P_E|i): {}\nbound 2(1 - P_E): {}\nachieved P_E: {} (window [target - {}, target])\nweight lattice: 1/{}\nguess resolution: {}\nsupport deviation from {{1/2, 1}}: {}\nargmin: {}\n",
                sig(r.min_value),
                sig(2.0 * (1.0 - r.target_pe)),
                sig(r.achieved_pe),
                sig(r.band),
                r.weight_steps,
                sig(r.resolution),
                sig(two_point_deviation(&r.argmin)),
                r.argmin.to_json()
            ),
            Output::Strategy(d) => {
                let mut s = format!(
                    "P_E: {}\nI(A:E): {}\nsum p_i h(P_E|i): {}\n2(1 - P_E): {}\nbound holds: {}\n",
                    sig(d.p_e),
                    sig(d.i_ae),
                    sig(d.concavity.lhs),
                    sig(d.concavity.rhs),
                    d.concavity.holds
                );
                if let (Some(i_ab), Some(ce)) = (d.i_ab, d.counterexample) {
                    s.push_str(&format!("I(A:B): {}\ncounterexample: {ce}\n", sig(i_ab)));
                }
                s
            }
            Output::Figure(d) => {
                let mut s = format!(
                    "wrote {} ({} points)\nP: ({}, {})\n",
                    d.path.display(),
                    d.points,
                    sig(d.point_p.beta),
                    sig(d.point_p.f)
                );
                for i in &d.intersections {
                    s.push_str(&format!(
                        "{}: ({}, {}) {} P\n",
                        i.theory,
                        sig(i.beta),
                        sig(i.f),
                        if i.before_p { "before" } else { "after" }
                    ));
                }
                s
            }
        }
    }
}

fn execute(command: Command) -> Result<Output> {
    match command {
        Command::Critical { model, tol, digits } => {
            let result = critical_beta(&model.model()?, tol)?;
            Ok(Output::Critical(CriticalDoc {
                beta_star_display: round_half_up(result.beta_star.get(), digits),
                tsirelson: tsirelson().get(),
                below_tsirelson: result.beta_star.get() < tsirelson().get(),
                result,
            }))
        }
        Command::Check { beta: b, model } => Ok(Output::Check(check_condition(
            beta("--beta", b)?,
            &model.model()?,
        )?)),
        Command::Pointwise { pb, pe } => Ok(Output::Pointwise(check_pointwise(
            prob("--pb", pb)?,
            prob("--pe", pe)?,
        )?)),
        Command::Counterexample {
            pb,
            slack,
            alphabet,
        } => {
            let p_b = prob("--pb", pb)?;
            if !(slack > 0.0 && slack < 1.0) {
                return Err(Error::Usage(format!("--slack: {slack} must lie in (0, 1)")));
            }
            let lo = 2.0 * (1.0 - pb);
            let p = lo + slack * (binary_entropy(p_b) - lo);
            Ok(Output::Counterexample(counterexample_with_blind_weight(
                p_b, p, alphabet,
            )?))
        }
        Command::Oracle { pe, alphabet, grid } => Ok(Output::Oracle(minimize_conditional_entropy(
            prob("--pe", pe)?,
            alphabet,
            grid,
        )?)),
        Command::Figure {
            out,
            format,
            points,
        } => {
            let data = sample_figure(points)?;
            match format {
                FigureFormat::Svg => emit_svg(&data, &out)?,
                FigureFormat::Csv => emit_csv(&data, &out)?,
                FigureFormat::Json => emit_json(&data, &out)?,
            }
            Ok(Output::Figure(FigureDoc {
                path: out,
                format,
                points,
                point_p: data.point_p,
                intersections: data.intersections,
            }))
        }
        Command::Strategy { file, pb } => {
            let strategy = EveStrategy::load(&file)?;
            let p_b = pb.map(|v| prob("--pb", v)).transpose()?;
            let i_ab = p_b
                .map(|p| ChannelModel::new(p).map(|c| c.bob_information()))
                .transpose()?;
            let counterexample =
                p_b.map(|p| Counterexample::evaluate(p, strategy.clone()).is_some());
            Ok(Output::Strategy(StrategyDoc {
                p_e: guessing_probability(&strategy).get(),
                i_ae: eve_information(&strategy),
                concavity: concavity_bound_check(&strategy),
                i_ab,
                counterexample,
                strategy,
            }))
        }
    }
}

/// Runs the CLI on `args` (including the program name), writing results to
/// `out` and diagnostics to `err`. Returns the process exit code: 0 on
/// success, 2 on usage errors, 1 on domain, parse and I/O errors.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match execute(cli.command) {
        Ok(output) => {
            let text = if cli.json {
                let mut s = output.to_json();
                s.push('\n');
                s
            } else {
                output.to_text()
            };
            match out.write_all(text.as_bytes()) {
                Ok(()) => 0,
                Err(_) => 1,
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
