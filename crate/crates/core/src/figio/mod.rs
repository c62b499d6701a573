//! Figure geometry in the `(β, f)` plane and the command-line front end.
//!
//! The plotted curves are the two monogamy relations and the security
//! boundary `f = (3 − h(β))/4`. A theory's curve lying below the boundary at
//! `β` means the condition holds there. Point `P` is the boundary at the
//! Tsirelson bound.

mod cli;
mod emit;

pub use cli::{run, Cli};
pub use emit::{emit_csv, emit_json, emit_svg, render_csv, render_json, render_svg, FigureFormat};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monogamy::{
    evaluate, f_nosignalling, f_quantum, BetaValue, MonogamyModel, Theory, CLASSICAL_BOUND,
    TSIRELSON_BOUND,
};
use crate::security::{condition_boundary, critical_beta, tsirelson};

/// Bisection tolerance used for the intersections drawn on the figure.
pub const FIGURE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub beta: f64,
    /// Absent above the Tsirelson bound.
    pub f_quantum: Option<f64>,
    pub f_nosignalling: f64,
    /// `(3 − h(β))/4`
    pub f_condition: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanePoint {
    pub beta: f64,
    pub f: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Intersection {
    pub theory: Theory,
    pub beta: f64,
    pub f: f64,
    /// Crosses the boundary at a β reachable with quantum resources.
    pub before_p: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FigureData {
    pub samples: Vec<CurveSample>,
    pub point_p: PlanePoint,
    pub intersections: Vec<Intersection>,
}

impl FigureData {
    pub fn intersection(&self, theory: Theory) -> Option<&Intersection> {
        self.intersections.iter().find(|i| i.theory == theory)
    }
}

fn intersection(model: &MonogamyModel) -> Result<Intersection> {
    let crit = critical_beta(model, FIGURE_TOLERANCE)?;
    let f = evaluate(model, crit.beta_star)?.get();
    Ok(Intersection {
        theory: model.theory(),
        beta: crit.beta_star.get(),
        f,
        before_p: crit.beta_star.get() < tsirelson().get(),
    })
}

/// Samples the curves on a uniform grid of `grid_points` values of β over
/// `[3/4, 1]` and locates `P` and both intersections.
pub fn sample_figure(grid_points: usize) -> Result<FigureData> {
    if grid_points < 2 {
        return Err(Error::usage(format!(
            "figure needs at least 2 grid points, got {grid_points}"
        )));
    }
    let step = (1.0 - CLASSICAL_BOUND) / (grid_points - 1) as f64;
    let samples = (0..grid_points)
        .map(|k| {
            let beta = if k + 1 == grid_points {
                BetaValue::MAX
            } else {
                BetaValue::new(CLASSICAL_BOUND + step * k as f64)?
            };
            let f_quantum = if beta.get() <= TSIRELSON_BOUND {
                Some(f_quantum(beta)?.get())
            } else {
                None
            };
            Ok(CurveSample {
                beta: beta.get(),
                f_quantum,
                f_nosignalling: f_nosignalling(beta).get(),
                f_condition: condition_boundary(beta),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let point_p = PlanePoint {
        beta: tsirelson().get(),
        f: condition_boundary(tsirelson()),
    };
    let intersections = vec![
        intersection(&MonogamyModel::quantum())?,
        intersection(&MonogamyModel::no_signalling())?,
    ];
    Ok(FigureData {
        samples,
        point_p,
        intersections,
    })
}
