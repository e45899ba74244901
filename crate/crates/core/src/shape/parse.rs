//! Pattern file grammar.
//!
//! ```text
//! # comment to end of line
//! M x y                       start a contour
//! L x y                       straight line
//! A x y r cw|ccw small|large  circular arc to (x, y) with radius r
//! Z                           close the contour
//! ```
//!
//! Units are millimetres. Tokens are whitespace separated and a command's
//! arguments may span lines. Each `M … Z` block is one contour.

use super::{Contour, PathCommand, Shape, ShapeError, SweepDirection};
use crate::geom::Point2;
use std::fmt::Write as _;

struct Token<'a> {
    text: &'a str,
    line: usize,
}

fn tokenize(text: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = match raw.find('#') {
            Some(c) => &raw[..c],
            None => raw,
        };
        out.extend(body.split_whitespace().map(|t| Token { text: t, line: i + 1 }));
    }
    out
}

fn err(line: usize, reason: impl Into<String>) -> ShapeError {
    ShapeError::Parse {
        line,
        reason: reason.into(),
    }
}

struct Cursor<'a> {
    toks: Vec<Token<'a>>,
    pos: usize,
    last_line: usize,
}

impl<'a> Cursor<'a> {
    fn next(&mut self) -> Option<&Token<'a>> {
        let t = self.toks.get(self.pos)?;
        self.pos += 1;
        self.last_line = t.line;
        Some(t)
    }

    fn number(&mut self, what: &str) -> Result<f64, ShapeError> {
        let line = self.last_line;
        let t = self.next().ok_or_else(|| err(line, format!("missing {what}")))?;
        let v: f64 = t
            .text
            .parse()
            .map_err(|_| err(t.line, format!("expected {what}, found `{}`", t.text)))?;
        if !v.is_finite() {
            return Err(err(t.line, format!("{what} must be finite")));
        }
        Ok(v)
    }

    fn point(&mut self) -> Result<Point2, ShapeError> {
        let x = self.number("x coordinate")?;
        let y = self.number("y coordinate")?;
        Ok(Point2::new(x, y))
    }

    fn word(&mut self, what: &str) -> Result<(&'a str, usize), ShapeError> {
        let line = self.last_line;
        let t = self.next().ok_or_else(|| err(line, format!("missing {what}")))?;
        Ok((t.text, t.line))
    }
}

/// Parse pattern text into a validated shape.
pub fn parse_path(text: &str) -> Result<Shape, ShapeError> {
    let mut cur = Cursor {
        toks: tokenize(text),
        pos: 0,
        last_line: 1,
    };
    let mut contours = Vec::new();
    // Commands of the contour being read, with their source lines.
    let mut open: Option<(usize, Vec<PathCommand>, Vec<usize>)> = None;

    while let Some(tok) = cur.next() {
        let line = tok.line;
        let cmd = tok.text;
        match cmd {
            "M" => {
                if let Some((start, ..)) = open {
                    return Err(ShapeError::OpenContour { line: start });
                }
                let p = cur.point()?;
                open = Some((line, vec![PathCommand::MoveTo(p)], vec![line]));
            }
            "L" | "A" | "Z" => {
                let Some((_, cmds, lines)) = open.as_mut() else {
                    return Err(err(line, format!("`{cmd}` outside a contour")));
                };
                let c = match cmd {
                    "L" => PathCommand::LineTo(cur.point()?),
                    "A" => {
                        let end = cur.point()?;
                        let radius = cur.number("radius")?;
                        if !(radius > 0.0) {
                            return Err(err(cur.last_line, "arc radius must be positive"));
                        }
                        let sweep = match cur.word("sweep direction")? {
                            ("cw", _) => SweepDirection::Cw,
                            ("ccw", _) => SweepDirection::Ccw,
                            (w, l) => return Err(err(l, format!("expected cw or ccw, found `{w}`"))),
                        };
                        let large_arc = match cur.word("arc size")? {
                            ("small", _) => false,
                            ("large", _) => true,
                            (w, l) => return Err(err(l, format!("expected small or large, found `{w}`"))),
                        };
                        PathCommand::ArcTo {
                            end,
                            radius,
                            sweep,
                            large_arc,
                        }
                    }
                    _ => PathCommand::Close,
                };
                cmds.push(c);
                lines.push(line);
                if c == PathCommand::Close {
                    let (_, cmds, lines) = open.take().expect("open contour");
                    let contour = Contour::new(cmds).map_err(|e| match e {
                        ShapeError::InvalidCommand { index, reason } => err(lines[index], reason),
                        other => other,
                    })?;
                    contours.push(contour);
                }
            }
            other => return Err(err(line, format!("unknown command `{other}`"))),
        }
    }
    if let Some((start, ..)) = open {
        return Err(ShapeError::OpenContour { line: start });
    }
    if contours.is_empty() {
        return Err(err(cur.last_line, "no contours"));
    }
    Shape::from_contours(contours)
}

pub(super) fn serialize(shape: &Shape) -> String {
    let mut out = String::new();
    for c in shape.contours() {
        let mut first = true;
        for cmd in c.commands() {
            if !first {
                out.push(' ');
            }
            first = false;
            let _ = match cmd {
                PathCommand::MoveTo(p) => write!(out, "M {} {}", p.x, p.y),
                PathCommand::LineTo(p) => write!(out, "L {} {}", p.x, p.y),
                PathCommand::ArcTo {
                    end,
                    radius,
                    sweep,
                    large_arc,
                } => write!(
                    out,
                    "A {} {} {} {} {}",
                    end.x,
                    end.y,
                    radius,
                    if *sweep == SweepDirection::Cw { "cw" } else { "ccw" },
                    if *large_arc { "large" } else { "small" }
                ),
                PathCommand::Close => write!(out, "Z"),
            };
        }
        out.push('\n');
    }
    out
}
