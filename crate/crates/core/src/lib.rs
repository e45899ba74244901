//! Knife cut planning for honeycomb sandwich cores.
//!
//! Given a map of a scanned (or synthetic) honeycomb block and a target cut
//! shape, the planner places the shape on the block and picks, for every
//! wall the contour crosses, a plunge position and blade angle that keep
//! clear of nodal points, avoid glued double walls and do not touch
//! neighbouring walls. Plans convert to a strict four-axis G-code dialect
//! that can be parsed back, simulated and re-verified against the map.
//!
//! Modules, bottom-up:
//!
//! - [`geom`]: points, segments, knife footprints, transforms, spatial index
//! - [`honeycomb`]: the block map, its generator, validation and file format
//! - [`shape`]: cut contours made of lines and circular arcs
//! - [`planner`]: placement search, cut point selection, plan verification
//! - [`gcode`]: emission, parsing, simulation and end-to-end verification
//! - [`cli`]: the `honeycut` command line front end and SVG rendering

// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod gcode;
pub mod geom;
pub mod honeycomb;
pub mod planner;
pub mod shape;
