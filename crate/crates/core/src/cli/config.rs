//! `key = value` settings files.
//!
//! Keys are grouped by prefix: `knife.*`, `constraints.*`, `machine.*` and
//! `grid.*`, named after the fields of the corresponding types. `#` starts
//! a comment.

use crate::gcode::MachineConfig;
use crate::honeycomb::GeneratorParams;
use crate::planner::{Constraints, KnifeSpec};

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Settings {
    pub knife: KnifeSpec,
    pub constraints: Constraints,
    pub machine: MachineConfig,
    pub grid: GeneratorParams,
}

fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, String> {
    v.parse().map_err(|_| format!("{key}: invalid value `{v}`"))
}

impl Settings {
    /// Apply one assignment.
    pub fn set(&mut self, key: &str, v: &str) -> Result<(), String> {
        match key {
            "knife.width" => self.knife.width = num(key, v)?,
            "knife.thickness" => self.knife.thickness = num(key, v)?,
            "knife.max_angle_deviation" => self.knife.max_angle_deviation = num(key, v)?,
            "knife.angle_resolution" => self.knife.angle_resolution = num(key, v)?,
            "constraints.node_clearance" => self.constraints.node_clearance = num(key, v)?,
            "constraints.relocation_radius" => self.constraints.relocation_radius = num(key, v)?,
            "constraints.position_step" => self.constraints.position_step = num(key, v)?,
            "constraints.max_indentation" => self.constraints.max_indentation = num(key, v)?,
            "constraints.same_edge_min_separation" => self.constraints.same_edge_min_separation = num(key, v)?,
            "constraints.allow_double" => self.constraints.allow_double = num(key, v)?,
            "machine.safe_z" => self.machine.safe_z = num(key, v)?,
            "machine.block_height" => self.machine.block_height = num(key, v)?,
            "machine.backing_penetration" => self.machine.backing_penetration = num(key, v)?,
            "machine.plunge_feed" => self.machine.plunge_feed = num(key, v)?,
            "machine.travel_feed" => self.machine.travel_feed = num(key, v)?,
            "machine.position_quantum" => self.machine.position_quantum = num(key, v)?,
            "machine.angle_quantum" => self.machine.angle_quantum = num(key, v)?,
            "grid.columns" => self.grid.columns = num(key, v)?,
            "grid.rows" => self.grid.rows = num(key, v)?,
            "grid.cell_edge" => self.grid.cell_edge = num(key, v)?,
            "grid.jitter_sigma" => self.grid.jitter_sigma = num(key, v)?,
            "grid.seed" => self.grid.seed = num(key, v)?,
            "grid.ribbon_axis" => self.grid.ribbon_axis = num(key, v)?,
            _ => return Err(format!("unknown config key `{key}`")),
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut s = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| format!("config line {}: expected key = value", i + 1))?;
            s.set(k.trim(), v.trim())
                .map_err(|e| format!("config line {}: {e}", i + 1))?;
        }
        Ok(s)
    }

    /// Check every group against its type's invariants.
    pub fn check(&self) -> Result<(), String> {
        self.knife.check().map_err(|e| e.to_string())?;
        self.constraints.check().map_err(|e| e.to_string())?;
        self.machine.check().map_err(|e| e.to_string())?;
        if (self.machine.angle_quantum - self.knife.angle_resolution).abs() > 1e-12 {
            return Err("machine.angle_quantum must equal knife.angle_resolution".into());
        }
        Ok(())
    }
}
