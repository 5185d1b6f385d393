//! Line-oriented model files.
//!
//! ```text
//! # comment
//! worlds: w0 w1 w2
//! order: w1<=w2
//! map: w0->w1 w1->w1 w2->w2
//! val p: w2
//! val q:
//! ```

use super::ModelError;
use std::collections::BTreeMap;

/// A model as read from a file: the order is given by generators and nothing is checked yet.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawModel {
    pub worlds: Vec<String>,
    pub order: Vec<(usize, usize)>,
    pub map: Vec<Option<usize>>,
    pub val: BTreeMap<String, Vec<usize>>,
}

/// Non-empty, comment-stripped lines with 1-based numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

pub(crate) fn format_err(line: usize, message: impl Into<String>) -> ModelError {
    ModelError::Format { line, message: message.into() }
}

pub(crate) fn world_list(line: usize, body: &str) -> Result<Vec<String>, ModelError> {
    let mut out: Vec<String> = Vec::new();
    for w in body.split_whitespace() {
        if !w.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '.' || c == '-') {
            return Err(format_err(line, format!("bad world name `{w}`")));
        }
        if out.iter().any(|x| x == w) {
            return Err(ModelError::DuplicateWorld(w.to_string()));
        }
        out.push(w.to_string());
    }
    Ok(out)
}

pub(crate) fn lookup(worlds: &[String], name: &str) -> Result<usize, ModelError> {
    worlds.iter().position(|w| w == name).ok_or_else(|| ModelError::UnknownWorld(name.to_string()))
}

/// Parses `a<sep>b c<sep>d ...`.
pub(crate) fn pair_list(
    worlds: &[String],
    line: usize,
    body: &str,
    sep: &str,
) -> Result<Vec<(usize, usize)>, ModelError> {
    body.split_whitespace()
        .map(|item| {
            let (a, b) =
                item.split_once(sep).ok_or_else(|| format_err(line, format!("expected `a{sep}b`, found `{item}`")))?;
            Ok((lookup(worlds, a)?, lookup(worlds, b)?))
        })
        .collect()
}

pub(crate) fn valid_atom(name: &str) -> bool {
    name.starts_with(|c: char| c.is_ascii_lowercase())
        && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        && name != "false"
}

impl RawModel {
    pub fn parse(text: &str) -> Result<RawModel, ModelError> {
        let mut m = RawModel::default();
        let mut seen_worlds = false;
        for (line, l) in content_lines(text) {
            let (key, body) = l.split_once(':').ok_or_else(|| format_err(line, "expected `key: ...`"))?;
            let key = key.trim();
            if key == "worlds" {
                if seen_worlds {
                    return Err(format_err(line, "`worlds` given twice"));
                }
                seen_worlds = true;
                m.worlds = world_list(line, body)?;
                m.map = vec![None; m.worlds.len()];
                continue;
            }
            if !seen_worlds {
                return Err(format_err(line, "`worlds` must come first"));
            }
            if key == "order" {
                m.order.extend(pair_list(&m.worlds, line, body, "<=")?);
            } else if key == "map" {
                for (a, b) in pair_list(&m.worlds, line, body, "->")? {
                    if m.map[a].is_some_and(|old| old != b) {
                        return Err(format_err(line, format!("`{}` has two steps", m.worlds[a])));
                    }
                    m.map[a] = Some(b);
                }
            } else if let Some(atom) = key.strip_prefix("val ") {
                let atom = atom.trim();
                if !valid_atom(atom) {
                    return Err(format_err(line, format!("bad atom name `{atom}`")));
                }
                let mut ws = body.split_whitespace().map(|w| lookup(&m.worlds, w)).collect::<Result<Vec<_>, _>>()?;
                ws.sort();
                ws.dedup();
                m.val.insert(atom.to_string(), ws);
            } else {
                return Err(format_err(line, format!("unknown key `{key}`")));
            }
        }
        if !seen_worlds || m.worlds.is_empty() {
            return Err(format_err(0, "no worlds declared"));
        }
        Ok(m)
    }

    pub(crate) fn steps(&self) -> Result<Vec<usize>, ModelError> {
        self.map
            .iter()
            .enumerate()
            .map(|(i, s)| s.ok_or_else(|| ModelError::MissingStep(self.worlds[i].clone())))
            .collect()
    }

    pub fn to_text(&self) -> String {
        let w = |i: usize| self.worlds[i].as_str();
        let mut out = format!("worlds: {}\n", self.worlds.join(" "));
        let order: Vec<String> = self.order.iter().map(|&(a, b)| format!("{}<={}", w(a), w(b))).collect();
        out.push_str(&format!("order: {}\n", order.join(" ")).replace(": \n", ":\n"));
        let map: Vec<String> =
            self.map.iter().enumerate().filter_map(|(a, b)| b.map(|b| format!("{}->{}", w(a), w(b)))).collect();
        out.push_str(&format!("map: {}\n", map.join(" ")));
        for (atom, ws) in &self.val {
            let names: Vec<&str> = ws.iter().map(|&i| w(i)).collect();
            let line = format!("val {atom}: {}", names.join(" "));
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out
    }
}
