//! Four-axis G-code for the plunge knife.
//!
//! The dialect is deliberately small: `G21` and `G90` open the program,
//! `G0` moves rapidly, `G1` moves at a feed, `M2` ends it, with axis words
//! X, Y, Z, A and the feed word F. A is the absolute blade angle in degrees.
//! Every cut is a rapid move over the point, a blade rotation, a feed plunge
//! through the block into the backing, and a rapid retract.

mod emit;
mod parse;
mod sim;

pub use emit::{emit, quantize, quantum_decimals};
pub use parse::parse;
pub use sim::{simulate, verify_program, ProgramViolation, SimulatedCut};

use crate::honeycomb::EdgeId;
use thiserror::Error;

/// Machine and quantization settings, lengths in mm, feeds in mm/min.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MachineConfig {
    pub safe_z: f64,
    pub block_height: f64,
    pub backing_penetration: f64,
    pub plunge_feed: f64,
    pub travel_feed: f64,
    pub position_quantum: f64,
    /// Must equal the knife's rotary step.
    pub angle_quantum: f64,
}

impl Default for MachineConfig {
    fn default() -> Self {
        Self {
            safe_z: 5.0,
            block_height: 40.0,
            backing_penetration: 0.5,
            plunge_feed: 3000.0,
            travel_feed: 6000.0,
            position_quantum: 0.01,
            angle_quantum: 0.1,
        }
    }
}

impl MachineConfig {
    pub fn check(&self) -> Result<(), GcodeError> {
        let vals = [
            ("safe_z", self.safe_z),
            ("block_height", self.block_height),
            ("backing_penetration", self.backing_penetration),
            ("plunge_feed", self.plunge_feed),
            ("travel_feed", self.travel_feed),
            ("position_quantum", self.position_quantum),
            ("angle_quantum", self.angle_quantum),
        ];
        for (name, v) in vals {
            if !(v > 0.0) || !v.is_finite() {
                return Err(GcodeError::InvalidConfig(format!("{name} must be positive")));
            }
        }
        if self.position_quantum > 0.1 {
            return Err(GcodeError::InvalidConfig(
                "position_quantum must not exceed 0.1 mm".into(),
            ));
        }
        Ok(())
    }

    /// Z at full plunge, negative.
    pub fn plunge_z(&self) -> f64 {
        -(self.block_height + self.backing_penetration)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GCommand {
    Rapid {
        x: Option<f64>,
        y: Option<f64>,
        z: Option<f64>,
        a: Option<f64>,
    },
    Linear {
        x: Option<f64>,
        y: Option<f64>,
        z: Option<f64>,
        a: Option<f64>,
        feed: f64,
    },
    SetUnitsMM,
    SetAbsolute,
    ProgramEnd,
}

/// A parsed program. `source_line_map[i]` is the 1-based line of
/// `commands[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GProgram {
    pub commands: Vec<GCommand>,
    pub source_line_map: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GcodeError {
    #[error("invalid machine config: {0}")]
    InvalidConfig(String),
    #[error("cut points {first} and {second} on edge {edge_id} quantize to the same position")]
    QuantizationCollision {
        edge_id: EdgeId,
        first: usize,
        second: usize,
    },
    #[error("line {line}: {reason} (`{token}`)")]
    Parse { line: usize, token: String, reason: String },
    #[error("line {line}: unsupported code `{code}`")]
    UnsupportedCode { line: usize, code: String },
    #[error("line {line}: {reason}")]
    Structure { line: usize, reason: String },
    #[error("line {line}: Z {z} below the backing")]
    ZBelowBacking { line: usize, z: f64 },
    #[error("line {line}: plunge before any A word")]
    PlungeWithoutAngle { line: usize },
}
