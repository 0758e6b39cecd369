//! Plain-text model documents.
//!
//! ```text
//! worlds 2
//! individuals 2
//! q {0} {1} {2} {3}
//! f(0, {0}) = {0}
//! f(0, {1}) = {3}
//! ...
//! pred b 1
//! b@0 = {(1)}
//! b@1 = {}
//! ```
//!
//! Sets of worlds are decimal bitmasks in braces. Every `f` entry is listed,
//! worlds first, then subsets by mask. A countermodel appends `assign` lines
//! and the failing `world`.

use std::collections::BTreeMap;
use std::fmt::Write;

use thiserror::Error;

use super::enumerate::Countermodel;
use super::eval::QclAssignment;
use super::model::{tuple_at, Individual, ModelError, SelectionModel, World, WorldSet};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Model { line: usize, source: ModelError },
    #[error("missing `{0}` line")]
    Missing(&'static str),
}

fn mask(set: WorldSet) -> String {
    format!("{{{}}}", set.bits())
}

pub fn write_model(model: &SelectionModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "worlds {}", model.worlds());
    let _ = writeln!(out, "individuals {}", model.individuals());
    let qs: Vec<String> = model.props().iter().map(|q| mask(*q)).collect();
    let _ = writeln!(out, "q {}", qs.join(" "));
    for s in model.world_iter() {
        for a in 0..1u64 << model.worlds() {
            let set = WorldSet(a);
            let value = model.selection().entries()[model.selection().index(s, set)];
            let _ = writeln!(out, "f({}, {}) = {}", s.0, mask(set), mask(value));
        }
    }
    for (pred, table) in model.interpretation().iter() {
        let _ = writeln!(out, "pred {pred} {}", table.arity());
        let tuples = model.individuals().pow(table.arity() as u32);
        for s in model.world_iter() {
            let members: Vec<String> = (0..tuples)
                .filter(|&t| table.holds(s, t))
                .map(|t| {
                    let args: Vec<String> = tuple_at(t, table.arity(), model.individuals())
                        .iter()
                        .map(|d| d.0.to_string())
                        .collect();
                    format!("({})", args.join(", "))
                })
                .collect();
            let _ = writeln!(out, "{pred}@{} = {{{}}}", s.0, members.join(", "));
        }
    }
    out
}

pub fn write_assignment(g: &QclAssignment) -> String {
    let mut out = String::new();
    for (x, d) in g.individuals() {
        let _ = writeln!(out, "assign {x} = {}", d.0);
    }
    for (p, set) in g.props() {
        let _ = writeln!(out, "assign {p} = {}", mask(set));
    }
    out
}

pub fn write_countermodel(cm: &Countermodel) -> String {
    let mut out = write_model(&cm.model);
    out.push_str(&write_assignment(&cm.assignment));
    let _ = writeln!(out, "world {}", cm.world.0);
    out
}

struct Line<'a> {
    number: usize,
    text: &'a str,
}

impl Line<'_> {
    fn error(&self, message: impl Into<String>) -> FormatError {
        FormatError::Syntax {
            line: self.number,
            message: message.into(),
        }
    }

    fn model(&self, source: ModelError) -> FormatError {
        FormatError::Model {
            line: self.number,
            source,
        }
    }

    fn number(&self, token: &str) -> Result<usize, FormatError> {
        token
            .trim()
            .parse()
            .map_err(|_| self.error(format!("expected a number, found `{}`", token.trim())))
    }

    fn set(&self, token: &str) -> Result<WorldSet, FormatError> {
        let inner = token
            .trim()
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| self.error(format!("expected `{{mask}}`, found `{}`", token.trim())))?;
        inner
            .trim()
            .parse()
            .map(WorldSet)
            .map_err(|_| self.error(format!("bad mask `{inner}`")))
    }
}

fn lines(text: &str) -> impl Iterator<Item = Line<'_>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let text = raw.split('#').next().unwrap_or("").trim();
        (!text.is_empty()).then_some(Line { number: i + 1, text })
    })
}

/// Parses a model document; any countermodel lines are ignored.
pub fn parse_model(text: &str) -> Result<SelectionModel, FormatError> {
    Ok(parse_document(text)?.0)
}

/// Parses a countermodel document (model, `assign` lines and `world`).
pub fn parse_countermodel(text: &str) -> Result<Countermodel, FormatError> {
    let (model, assignment, world) = parse_document(text)?;
    Ok(Countermodel {
        model,
        assignment,
        world: world.ok_or(FormatError::Missing("world"))?,
    })
}

fn parse_document(text: &str) -> Result<(SelectionModel, QclAssignment, Option<World>), FormatError> {
    let mut worlds = None;
    let mut model: Option<SelectionModel> = None;
    let mut assignment = QclAssignment::new();
    let mut world = None;
    for line in lines(text) {
        let (head, rest) = line.text.split_once(' ').unwrap_or((line.text, ""));
        match head {
            "worlds" => worlds = Some(line.number(rest)?),
            "individuals" => {
                let w = worlds.ok_or(FormatError::Missing("worlds"))?;
                let d = line.number(rest)?;
                model = Some(SelectionModel::new(w, d).map_err(|e| line.model(e))?);
            }
            "q" => {
                let m = model.as_mut().ok_or(FormatError::Missing("individuals"))?;
                let sets = rest
                    .split_whitespace()
                    .map(|t| line.set(t))
                    .collect::<Result<Vec<_>, _>>()?;
                m.set_props(sets).map_err(|e| line.model(e))?;
            }
            "pred" => {
                let m = model.as_mut().ok_or(FormatError::Missing("individuals"))?;
                let mut parts = rest.split_whitespace();
                let (Some(name), Some(arity), None) = (parts.next(), parts.next(), parts.next()) else {
                    return Err(line.error("expected `pred <name> <arity>`"));
                };
                let arity = line.number(arity)?;
                m.declare_predicate(name, arity).map_err(|e| line.model(e))?;
            }
            "assign" => {
                let (var, value) = rest
                    .split_once('=')
                    .ok_or_else(|| line.error("expected `assign <var> = <value>`"))?;
                let var = var.trim();
                if value.trim().starts_with('{') {
                    assignment.set_prop(var, line.set(value)?);
                } else {
                    assignment.set_individual(var, Individual(line.number(value)?));
                }
            }
            "world" => world = Some(World(line.number(rest)?)),
            _ if line.text.starts_with("f(") => {
                let m = model.as_mut().ok_or(FormatError::Missing("individuals"))?;
                let (lhs, rhs) = line
                    .text
                    .split_once('=')
                    .ok_or_else(|| line.error("expected `f(s, {A}) = {B}`"))?;
                let args = lhs
                    .trim()
                    .strip_prefix("f(")
                    .and_then(|t| t.strip_suffix(')'))
                    .ok_or_else(|| line.error("expected `f(s, {A})`"))?;
                let (s, a) = args
                    .split_once(',')
                    .ok_or_else(|| line.error("expected `f(s, {A})`"))?;
                let s = World(line.number(s)?);
                m.set_selection(s, line.set(a)?, line.set(rhs)?)
                    .map_err(|e| line.model(e))?;
            }
            _ if line.text.contains('@') => {
                let m = model.as_mut().ok_or(FormatError::Missing("individuals"))?;
                let (lhs, rhs) = line
                    .text
                    .split_once('=')
                    .ok_or_else(|| line.error("expected `k@s = {tuples}`"))?;
                let (pred, s) = lhs.split_once('@').expect("contains @");
                let s = World(line.number(s)?);
                let body = rhs
                    .trim()
                    .strip_prefix('{')
                    .and_then(|t| t.strip_suffix('}'))
                    .ok_or_else(|| line.error("expected `{(..), ..}`"))?;
                for tuple in parse_tuples(&line, body)? {
                    m.add_fact(pred.trim(), s, &tuple).map_err(|e| line.model(e))?;
                }
            }
            _ => return Err(line.error(format!("unknown line `{}`", line.text))),
        }
    }
    let model = model.ok_or(FormatError::Missing("individuals"))?;
    Ok((model, assignment, world))
}

fn parse_tuples(line: &Line, body: &str) -> Result<Vec<Vec<Individual>>, FormatError> {
    let mut out = Vec::new();
    let mut rest = body.trim();
    while !rest.is_empty() {
        let open = rest
            .strip_prefix('(')
            .ok_or_else(|| line.error("expected `(`"))?;
        let close = open.find(')').ok_or_else(|| line.error("unclosed tuple"))?;
        let inner = open[..close].trim();
        let tuple = if inner.is_empty() {
            Vec::new()
        } else {
            inner
                .split(',')
                .map(|t| line.number(t).map(Individual))
                .collect::<Result<Vec<_>, _>>()?
        };
        out.push(tuple);
        rest = open[close + 1..].trim_start();
        rest = rest.strip_prefix(',').unwrap_or(rest).trim_start();
    }
    Ok(out)
}

/// Parses a `Q` file: lines `<worlds>: <mask> <mask> ...` with bare masks.
pub fn parse_prop_domains(text: &str) -> Result<BTreeMap<usize, Vec<WorldSet>>, FormatError> {
    let mut out = BTreeMap::new();
    for line in lines(text) {
        let (n, sets) = line
            .text
            .split_once(':')
            .ok_or_else(|| line.error("expected `<worlds>: <mask> ...`"))?;
        let n = line.number(n)?;
        let sets = sets
            .split_whitespace()
            .map(|t| {
                t.trim_matches(|c| c == '{' || c == '}')
                    .parse()
                    .map(WorldSet)
                    .map_err(|_| line.error(format!("bad mask `{t}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        out.insert(n, sets);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> SelectionModel {
        let mut m = SelectionModel::new(2, 2)
            .unwrap()
            .with_props([WorldSet(0), WorldSet(1), WorldSet(3)])
            .unwrap();
        m.set_selection(World(1), WorldSet(1), WorldSet(3)).unwrap();
        m.declare_predicate("b", 1).unwrap();
        m.declare_predicate("r", 2).unwrap();
        m.declare_predicate("k", 0).unwrap();
        m.add_fact("b", World(0), &[Individual(1)]).unwrap();
        m.add_fact("r", World(1), &[Individual(1), Individual(0)]).unwrap();
        m.add_fact("k", World(1), &[]).unwrap();
        m
    }

    #[test]
    fn layout() {
        let text = write_model(&sample());
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "worlds 2");
        assert_eq!(lines[2], "q {0} {1} {3}");
        assert_eq!(lines[3], "f(0, {0}) = {0}");
        assert!(lines.contains(&"f(1, {1}) = {3}"));
        assert!(lines.contains(&"b@0 = {(1)}"));
        assert!(lines.contains(&"r@1 = {(1, 0)}"));
        assert!(lines.contains(&"k@1 = {()}"));
    }

    #[test]
    fn round_trip() {
        let m = sample();
        assert_eq!(parse_model(&write_model(&m)).unwrap(), m);
        let cm = Countermodel {
            model: m,
            assignment: QclAssignment::new()
                .with_individual("X", Individual(1))
                .with_prop("p", WorldSet(1)),
            world: World(1),
        };
        assert_eq!(parse_countermodel(&write_countermodel(&cm)).unwrap(), cm);
    }

    #[test]
    fn errors_name_the_line() {
        let err = parse_model("worlds 1\nindividuals 1\nf(3, {0}) = {0}\n").unwrap_err();
        assert!(matches!(err, FormatError::Model { line: 3, .. }));
        assert!(matches!(parse_model("worlds x"), Err(FormatError::Syntax { line: 1, .. })));
    }

    #[test]
    fn prop_domain_file() {
        let q = parse_prop_domains("# Q per size\n1: 0 1\n2: {0} {3}\n").unwrap();
        assert_eq!(q[&2], vec![WorldSet(0), WorldSet(3)]);
    }
}
