use super::OracleError;
use crate::born::{PotentialSpec, Site};

/// Constant height on `[start, end]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Step {
    pub height: f64,
    pub start: f64,
    pub end: f64,
}

/// Piecewise-constant potential plus delta junctions, zero outside a
/// bounded support. Deltas may sit inside steps.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Profile {
    deltas: Vec<Site>,
    steps: Vec<Step>,
}

impl Profile {
    pub fn new(mut deltas: Vec<Site>, mut steps: Vec<Step>) -> Result<Self, OracleError> {
        for s in &deltas {
            if !(s.strength.is_finite() && s.position.is_finite()) {
                return Err(crate::born::BornError::NonFinite("delta").into());
            }
        }
        for s in &steps {
            if !(s.height.is_finite() && s.start.is_finite() && s.end.is_finite()) {
                return Err(crate::born::BornError::NonFinite("step").into());
            }
            if s.end < s.start {
                return Err(OracleError::NegativeLength(s.end - s.start));
            }
        }
        deltas.sort_by(|a, b| a.position.total_cmp(&b.position));
        steps.sort_by(|a, b| a.start.total_cmp(&b.start));
        for (i, pair) in steps.windows(2).enumerate() {
            if pair[1].start < pair[0].end {
                return Err(OracleError::OverlappingSteps(i, i + 1));
            }
        }
        Ok(Self { deltas, steps })
    }

    pub fn from_spec(spec: &PotentialSpec) -> Result<Self, OracleError> {
        spec.validate()?;
        Ok(match spec {
            PotentialSpec::Barrier { height, width } => Self {
                deltas: Vec::new(),
                steps: vec![Step {
                    height: *height,
                    start: 0.0,
                    end: *width,
                }],
            },
            _ => Self {
                deltas: spec.sites(),
                steps: Vec::new(),
            },
        })
    }

    pub fn deltas(&self) -> &[Site] {
        &self.deltas
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// Sorted, deduplicated positions where the potential changes.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut points: Vec<f64> = self
            .deltas
            .iter()
            .map(|d| d.position)
            .chain(self.steps.iter().flat_map(|s| [s.start, s.end]))
            .collect();
        points.sort_by(f64::total_cmp);
        points.dedup();
        points
    }

    /// Potential on the open interval containing `x` (deltas excluded).
    pub fn height_at(&self, x: f64) -> f64 {
        self.steps
            .iter()
            .filter(|s| s.start < x && x < s.end)
            .map(|s| s.height)
            .sum()
    }

    /// Total delta strength located at `x`.
    pub fn strength_at(&self, x: f64) -> f64 {
        self.deltas
            .iter()
            .filter(|d| d.position == x)
            .map(|d| d.strength)
            .sum()
    }

    pub fn max_height(&self) -> f64 {
        self.steps.iter().map(|s| s.height).fold(0.0, f64::max)
    }

    pub fn min_height(&self) -> f64 {
        self.steps.iter().map(|s| s.height).fold(0.0, f64::min)
    }

    /// Mirror image `x → -x`.
    pub fn mirrored(&self) -> Self {
        let deltas = self
            .deltas
            .iter()
            .rev()
            .map(|d| Site::new(d.strength, -d.position))
            .collect();
        let steps = self
            .steps
            .iter()
            .rev()
            .map(|s| Step {
                height: s.height,
                start: -s.end,
                end: -s.start,
            })
            .collect();
        Self { deltas, steps }
    }
}
