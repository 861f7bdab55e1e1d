use crate::error::ParseError;

use super::{
    CndSpec, Constraint, CyclicConstraint, Direction, Directive, Flow, GroupTarget,
    GroupingConstraint, Located, OrientationConstraint, Selector, VisibilityFlag,
};

const STATEMENTS: [&str; 9] = [
    "attribute", "color", "cyclic", "flag", "group", "icon", "orient", "project", "#",
];

#[derive(Debug, Clone, PartialEq)]
enum TokKind {
    Word,
    Quoted,
    Comma,
}

#[derive(Debug, Clone)]
struct Token<'a> {
    kind: TokKind,
    text: &'a str,
    /// 1-based, in characters.
    column: usize,
    /// Byte offset into the line.
    offset: usize,
}

/// Cut a trailing comment. `#` counts when it opens the line or sits between
/// whitespace (or end of line).
fn strip_comment(line: &str) -> &str {
    let bytes = line.as_bytes();
    for (i, c) in line.char_indices() {
        if c != '#' {
            continue;
        }
        let before_ok = line[..i].trim().is_empty() || bytes[i - 1].is_ascii_whitespace();
        let after_ok = line[..i].trim().is_empty()
            || i + 1 == bytes.len()
            || bytes[i + 1].is_ascii_whitespace();
        if before_ok && after_ok {
            return &line[..i];
        }
    }
    line
}

fn column_of(line: &str, offset: usize) -> usize {
    line[..offset].chars().count() + 1
}

fn tokenize(line: &str, line_no: usize) -> Result<Vec<Token<'_>>, ParseError> {
    let mut tokens = Vec::new();
    let mut chars = line.char_indices().peekable();
    while let Some(&(start, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c == ',' {
            chars.next();
            tokens.push(Token {
                kind: TokKind::Comma,
                text: &line[start..start + 1],
                column: column_of(line, start),
                offset: start,
            });
        } else if c == '"' {
            chars.next();
            let mut end = None;
            for (i, c) in chars.by_ref() {
                if c == '"' {
                    end = Some(i);
                    break;
                }
            }
            let Some(end) = end else {
                return Err(ParseError {
                    line: line_no,
                    column: column_of(line, start),
                    found: line[start..].to_string(),
                    expected: vec!["closing `\"`".into()],
                });
            };
            tokens.push(Token {
                kind: TokKind::Quoted,
                text: &line[start + 1..end],
                column: column_of(line, start),
                offset: start,
            });
        } else {
            let mut end = line.len();
            while let Some(&(i, c)) = chars.peek() {
                if c.is_whitespace() || c == ',' {
                    end = i;
                    break;
                }
                chars.next();
            }
            tokens.push(Token {
                kind: TokKind::Word,
                text: &line[start..end],
                column: column_of(line, start),
                offset: start,
            });
        }
    }
    Ok(tokens)
}

struct LineParser<'a> {
    line: &'a str,
    line_no: usize,
    tokens: Vec<Token<'a>>,
    pos: usize,
}

impl<'a> LineParser<'a> {
    fn error(&self, expected: &[&str]) -> ParseError {
        let (column, found) = match self.tokens.get(self.pos) {
            Some(t) => (t.column, t.text.to_string()),
            None => (self.line.trim_end().chars().count() + 1, String::new()),
        };
        ParseError {
            line: self.line_no,
            column,
            found,
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn peek(&self) -> Option<&Token<'a>> {
        self.tokens.get(self.pos)
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek() {
            Some(t) if t.kind == TokKind::Word => {
                let s = t.text.to_string();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.error(&[what])),
        }
    }

    fn keyword<T: Copy>(&mut self, options: &[(&str, T)]) -> Result<T, ParseError> {
        if let Some(t) = self.peek() {
            if t.kind == TokKind::Word {
                if let Some((_, v)) = options.iter().find(|(k, _)| *k == t.text) {
                    self.pos += 1;
                    return Ok(*v);
                }
            }
        }
        let names: Vec<&str> = options.iter().map(|(k, _)| *k).collect();
        Err(self.error(&names))
    }

    fn optional_keyword<T: Copy>(&mut self, options: &[(&str, T)], default: T) -> Result<T, ParseError> {
        if self.peek().is_none() {
            Ok(default)
        } else {
            self.keyword(options)
        }
    }

    fn positive(&mut self, what: &str) -> Result<u32, ParseError> {
        match self.peek() {
            Some(t) if t.kind == TokKind::Word => match t.text.parse::<u32>() {
                Ok(v) if v > 0 => {
                    self.pos += 1;
                    Ok(v)
                }
                _ => Err(self.error(&[what])),
            },
            _ => Err(self.error(&[what])),
        }
    }

    fn directions(&mut self) -> Result<Vec<Direction>, ParseError> {
        let all: Vec<(&str, Direction)> = Direction::ALL.iter().map(|d| (d.as_str(), *d)).collect();
        let mut dirs = Vec::new();
        loop {
            let d = self.keyword(&all)?;
            if dirs.contains(&d) {
                self.pos -= 1;
                return Err(self.error(&["a direction not already listed"]));
            }
            dirs.push(d);
            match self.peek() {
                Some(t) if t.kind == TokKind::Comma => self.pos += 1,
                _ => return Ok(dirs),
            }
        }
    }

    fn end(&self) -> Result<(), ParseError> {
        if self.pos < self.tokens.len() {
            Err(self.error(&["end of line"]))
        } else {
            Ok(())
        }
    }

    /// The remainder of the line, verbatim (minus surrounding whitespace).
    fn rest(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek() {
            Some(t) => {
                let s = self.line[t.offset..].trim().to_string();
                self.pos = self.tokens.len();
                Ok(s)
            }
            None => Err(self.error(&[what])),
        }
    }
}

enum Statement {
    Constraint(Constraint),
    Directive(Directive),
}

fn parse_statement(p: &mut LineParser<'_>) -> Result<Statement, ParseError> {
    let head = match p.peek() {
        Some(t) if t.kind == TokKind::Word => t.text,
        _ => return Err(p.error(&STATEMENTS[..8])),
    };
    p.pos += 1;
    let stmt = match head {
        "cyclic" => {
            let field = p.ident("field name")?;
            let flow = p.optional_keyword(
                &[("clockwise", Flow::Clockwise), ("counterclockwise", Flow::Counterclockwise)],
                Flow::Clockwise,
            )?;
            Statement::Constraint(Constraint::Cyclic(CyclicConstraint { field, flow }))
        }
        "orient" => {
            #[derive(Clone, Copy)]
            enum Kind {
                Field,
                Sig,
            }
            let kind = p.keyword(&[("field", Kind::Field), ("sig", Kind::Sig)])?;
            let selector = match kind {
                Kind::Field => Selector::Field(p.ident("field name")?),
                Kind::Sig => {
                    let a = p.ident("sig name")?;
                    // `orient sig A left` names only one sig; that form has no
                    // agreed meaning, so ask for the second sig explicitly.
                    let b = match p.peek() {
                        Some(t)
                            if t.kind == TokKind::Word
                                && Direction::from_keyword(t.text).is_some()
                                && p
                                    .tokens
                                    .get(p.pos + 1)
                                    .map_or(true, |n| n.kind == TokKind::Comma) =>
                        {
                            return Err(p.error(&["second sig name"]));
                        }
                        _ => p.ident("second sig name")?,
                    };
                    Selector::SigPair(a, b)
                }
            };
            let directions = p.directions()?;
            Statement::Constraint(Constraint::Orientation(OrientationConstraint {
                selector,
                directions,
            }))
        }
        "group" => {
            let field = p.ident("field name")?;
            let target = p.optional_keyword(
                &[("range", GroupTarget::Range), ("domain", GroupTarget::Domain)],
                GroupTarget::Range,
            )?;
            Statement::Constraint(Constraint::Grouping(GroupingConstraint { field, target }))
        }
        "icon" => {
            let sig = p.ident("sig name")?;
            let path = match p.peek() {
                Some(t) if t.kind != TokKind::Comma => {
                    let s = t.text.to_string();
                    p.pos += 1;
                    s
                }
                _ => return Err(p.error(&["icon path"])),
            };
            let height = p.positive("positive height")?;
            let width = p.positive("positive width")?;
            Statement::Directive(Directive::Icon {
                sig,
                path,
                height,
                width,
            })
        }
        "attribute" => Statement::Directive(Directive::Attribute {
            field: p.ident("field name")?,
        }),
        "color" => {
            let sig = p.ident("sig name")?;
            let color = p.rest("color")?;
            Statement::Directive(Directive::SigColor { sig, color })
        }
        "project" => Statement::Directive(Directive::Projection {
            sig: p.ident("sig name")?,
        }),
        "flag" => {
            let flag = p.keyword(&[
                ("hideDisconnected", VisibilityFlag::HideDisconnected),
                ("hideDisconnectedBuiltIns", VisibilityFlag::HideDisconnectedBuiltIns),
            ])?;
            Statement::Directive(Directive::Flag(flag))
        }
        _ => {
            p.pos -= 1;
            return Err(p.error(&STATEMENTS[..8]));
        }
    };
    p.end()?;
    Ok(stmt)
}

/// Parse CnD source. Identical constraints are kept once (first occurrence).
pub fn parse_spec(text: &str) -> Result<CndSpec, ParseError> {
    let mut spec = CndSpec::default();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = strip_comment(raw);
        let tokens = tokenize(line, line_no)?;
        if tokens.is_empty() {
            continue;
        }
        let mut p = LineParser {
            line,
            line_no,
            tokens,
            pos: 0,
        };
        match parse_statement(&mut p)? {
            Statement::Constraint(c) => {
                if !spec.constraints.iter().any(|l| l.item == c) {
                    spec.constraints.push(Located { line: line_no, item: c });
                }
            }
            Statement::Directive(d) => spec.directives.push(Located { line: line_no, item: d }),
        }
    }
    Ok(spec)
}
