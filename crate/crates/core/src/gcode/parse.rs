use super::{GCommand, GProgram, GcodeError};

fn perr(line: usize, token: &str, reason: &str) -> GcodeError {
    GcodeError::Parse {
        line,
        token: token.to_string(),
        reason: reason.to_string(),
    }
}

fn number(line: usize, tok: &str, body: &str) -> Result<f64, GcodeError> {
    let plain = !body.is_empty() && body.chars().all(|c| c.is_ascii_digit() || matches!(c, '.' | '-' | '+'));
    match body.parse::<f64>() {
        Ok(v) if plain && v.is_finite() => Ok(v),
        _ => Err(perr(line, tok, "bad number")),
    }
}

#[derive(Default)]
struct Words {
    x: Option<f64>,
    y: Option<f64>,
    z: Option<f64>,
    a: Option<f64>,
    f: Option<f64>,
}

fn words<'a>(line: usize, toks: impl Iterator<Item = &'a str>) -> Result<Words, GcodeError> {
    let mut w = Words::default();
    for tok in toks {
        let mut chars = tok.chars();
        let letter = chars.next().expect("non-empty token");
        let slot = match letter {
            'X' => &mut w.x,
            'Y' => &mut w.y,
            'Z' => &mut w.z,
            'A' => &mut w.a,
            'F' => &mut w.f,
            _ => return Err(perr(line, tok, "unknown word")),
        };
        if slot.is_some() {
            return Err(perr(line, tok, "repeated word"));
        }
        *slot = Some(number(line, tok, chars.as_str())?);
    }
    Ok(w)
}

/// Parse program text in the emitted dialect. `;` starts a comment.
pub fn parse(text: &str) -> Result<GProgram, GcodeError> {
    let mut commands = Vec::new();
    let mut lines = Vec::new();
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let body = raw.split(';').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if commands.last() == Some(&GCommand::ProgramEnd) {
            return Err(GcodeError::Structure {
                line,
                reason: "command after M2".into(),
            });
        }
        let mut toks = body.split_whitespace();
        let head = toks.next().expect("non-empty line");
        let (letter, code) = head.split_at(head.chars().next().map_or(0, char::len_utf8));
        if !(letter == "G" || letter == "M") || code.is_empty() || !code.chars().all(|c| c.is_ascii_digit()) {
            return Err(perr(line, head, "expected a G or M code"));
        }
        let n: u32 = code.parse().map_err(|_| perr(line, head, "bad code number"))?;
        let rest: Vec<&str> = toks.collect();
        let cmd = match (letter, n) {
            ("G", 0) | ("G", 1) => {
                let w = words(line, rest.iter().copied())?;
                if w.x.is_none() && w.y.is_none() && w.z.is_none() && w.a.is_none() {
                    return Err(perr(line, head, "motion without an axis word"));
                }
                if n == 0 {
                    if w.f.is_some() {
                        return Err(perr(line, "F", "feed on a rapid move"));
                    }
                    GCommand::Rapid {
                        x: w.x,
                        y: w.y,
                        z: w.z,
                        a: w.a,
                    }
                } else {
                    let feed = w.f.ok_or_else(|| perr(line, head, "linear move without feed"))?;
                    if !(feed > 0.0) {
                        return Err(perr(line, "F", "feed must be positive"));
                    }
                    GCommand::Linear {
                        x: w.x,
                        y: w.y,
                        z: w.z,
                        a: w.a,
                        feed,
                    }
                }
            }
            ("G", 21) | ("G", 90) | ("M", 2) => {
                if let Some(t) = rest.first() {
                    return Err(perr(line, t, "unexpected word"));
                }
                match n {
                    21 => GCommand::SetUnitsMM,
                    90 => GCommand::SetAbsolute,
                    _ => GCommand::ProgramEnd,
                }
            }
            _ => {
                return Err(GcodeError::UnsupportedCode {
                    line,
                    code: head.to_string(),
                })
            }
        };
        let need = match commands.len() {
            0 => Some((GCommand::SetUnitsMM, "program must start with G21")),
            1 => Some((GCommand::SetAbsolute, "G90 must follow G21")),
            _ => None,
        };
        if let Some((want, reason)) = need {
            if cmd != want {
                return Err(GcodeError::Structure {
                    line,
                    reason: reason.into(),
                });
            }
        }
        commands.push(cmd);
        lines.push(line);
    }
    if commands.len() < 3 || commands.last() != Some(&GCommand::ProgramEnd) {
        return Err(GcodeError::Structure {
            line: last_line.max(1),
            reason: "program must end with M2".into(),
        });
    }
    Ok(GProgram {
        commands,
        source_line_map: lines,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "G21\nG90\nG0 X12.40 Y33.10\nG0 A87.3\nG1 Z-40.50 F3000\nG0 Z5.00\nM2\n";

    #[test]
    fn parses_emitted_text() {
        let p = parse(SAMPLE).unwrap();
        assert_eq!(p.commands.len(), 7);
        assert_eq!(
            p.commands[4],
            GCommand::Linear {
                x: None,
                y: None,
                z: Some(-40.5),
                a: None,
                feed: 3000.0
            }
        );
        assert_eq!(p.source_line_map, vec![1, 2, 3, 4, 5, 6, 7]);
    }

    #[test]
    fn comments_and_blank_lines() {
        let p = parse("; job\nG21\n\nG90 ; abs\nG0 X1 ; move\nM2").unwrap();
        assert_eq!(p.commands.len(), 4);
        assert_eq!(p.source_line_map, vec![2, 4, 5, 6]);
    }

    #[test]
    fn rejects() {
        let wrap = |body: &str| format!("G21\nG90\n{body}\nM2\n");
        assert!(matches!(
            parse(&wrap("G2 X1 Y1 I0 J1")),
            Err(GcodeError::UnsupportedCode { line: 3, .. })
        ));
        assert!(matches!(
            parse(&wrap("G1 F3000")),
            Err(GcodeError::Parse { line: 3, .. })
        ));
        assert!(matches!(parse(&wrap("G1 Z-4")), Err(GcodeError::Parse { .. })));
        assert!(matches!(parse(&wrap("G0 X1 F100")), Err(GcodeError::Parse { .. })));
        assert!(matches!(parse(&wrap("G0 X1 X2")), Err(GcodeError::Parse { .. })));
        assert!(matches!(parse(&wrap("G0 X1.2.3")), Err(GcodeError::Parse { .. })));
        assert!(matches!(parse(&wrap("G0 B4")), Err(GcodeError::Parse { .. })));
        assert!(matches!(parse(&wrap("g0 X1")), Err(GcodeError::Parse { .. })));
        assert!(matches!(parse(&wrap("M3")), Err(GcodeError::UnsupportedCode { .. })));
        assert!(matches!(
            parse("G90\nG21\nM2\n"),
            Err(GcodeError::Structure { line: 1, .. })
        ));
        assert!(matches!(parse("G21\nG90\nG0 X1\n"), Err(GcodeError::Structure { .. })));
        assert!(matches!(
            parse("G21\nG90\nM2\nG0 X1\n"),
            Err(GcodeError::Structure { line: 4, .. })
        ));
    }
}
