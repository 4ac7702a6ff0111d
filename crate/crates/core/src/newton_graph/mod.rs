//! The channel diagram, its iterated pullbacks, the level at which they
//! form an abstract Newton graph, and validation of the abstract axioms.

mod channel;
mod pullback;
mod validate;

pub use channel::{build_channel_diagram, channel_diagram, face_pole_census, ChannelDiagram, FaceCensus, PoleCensus};
pub use pullback::{poles_connect_level, pull_back, NewtonGraphLevel, Pullback, PIPELINE_FAR_RADIUS};
pub use validate::{
    validate_abstract_channel_diagram, validate_abstract_newton_graph, vertex_typing_violations, ConditionVerdict,
    ValidationReport, CHANNEL_CONDITIONS, NEWTON_CONDITIONS,
};

use crate::complex_poly::RationalMap;
use crate::dynamics::{is_postcritically_fixed, Fate, PcfReport};
use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

/// Levels `Δ0..ΔN` of a postcritically fixed Newton map and the validation
/// of `(ΔN, f)`.
#[derive(Clone, Debug)]
pub struct NewtonGraphRun {
    pub n: usize,
    pub levels: Vec<NewtonGraphLevel>,
    pub report: ValidationReport,
    pub channel: ChannelDiagram,
    /// First level containing every pole.
    pub poles_level: Option<usize>,
    pub pcf: PcfReport,
}

impl NewtonGraphRun {
    pub fn graph(&self) -> &NewtonGraphLevel {
        &self.levels[self.n]
    }
}

fn undecided_listing(pcf: &PcfReport) -> String {
    pcf.critical
        .iter()
        .filter(|c| c.fate == Fate::Unresolved)
        .map(|c| {
            let last = c.orbit.last().copied().unwrap_or(c.location);
            format!("{} (local degree {}) still at {} after {} steps", c.location, c.local_degree, last, c.orbit.len() - 1)
        })
        .collect::<Vec<_>>()
        .join("; ")
}

/// Pulls the channel diagram back until every critical point is a vertex
/// of `Δ(N-1)`, then once more, and validates `(ΔN, f)`. The level found
/// from the critical points must agree with the combinatorial level of the
/// validated graph.
pub fn newton_graph_level(f: &RationalMap, max_n: usize, tol: &Tolerances) -> Result<NewtonGraphRun> {
    let pcf = is_postcritically_fixed(f, tol.max_iterations, tol)?;
    if !pcf.is_postcritically_fixed() {
        return Err(Error::NotPostcriticallyFixed(format!("undecided critical orbits: {}", undecided_listing(&pcf))));
    }
    let mut p = Pullback::new(f, tol)?;
    let mut poles_level = None;
    loop {
        let level = p.current();
        if level.contains_all_poles && poles_level.is_none() {
            poles_level = Some(level.n);
        }
        if level.contains_all_critical_points {
            break;
        }
        if level.n >= max_n {
            return Err(Error::NonTermination {
                max_level: max_n,
                reason: "critical points are still missing from the pullback graph".into(),
            });
        }
        p.advance()?;
    }
    let n = p.current().n + 1;
    if n > max_n {
        return Err(Error::NonTermination { max_level: max_n, reason: format!("the Newton graph needs level {n}") });
    }
    p.advance()?;
    if poles_level.is_none() && p.current().contains_all_poles {
        poles_level = Some(n);
    }
    let level = p.current();
    let report = validate_abstract_newton_graph(&level.graph, &level.map);
    if let Some(found) = report.level {
        if found != n {
            return Err(Error::Inconsistent(format!(
                "critical points first lie in level {}, but the graph's own level is {found}",
                n - 1
            )));
        }
    }
    let channel = p.channel().clone();
    Ok(NewtonGraphRun { n, levels: p.into_levels(), report, channel, poles_level, pcf })
}
