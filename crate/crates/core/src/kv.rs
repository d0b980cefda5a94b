//! Flat `key = value [unit]` text format shared by parameter files, run
//! configs and manifests.
//!
//! `#` starts a comment. The unit suffix is optional and written in square
//! brackets after the value. Keys must be unique within a document.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write;

use crate::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub unit: Option<String>,
    pub line: usize,
}

pub fn parse(text: &str) -> Result<Vec<Entry>, Error> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if body.is_empty() {
            continue;
        }
        let Some((k, rest)) = body.split_once('=') else {
            return Err(Error::Syntax { line, msg: "expected `key = value`".to_string() });
        };
        let key = k.trim();
        if key.is_empty() || key.contains(char::is_whitespace) {
            return Err(Error::Syntax { line, msg: format!("invalid key `{key}`") });
        }
        let rest = rest.trim();
        let (value, unit) = match rest.strip_suffix(']') {
            Some(head) => {
                let Some(open) = head.rfind('[') else {
                    return Err(Error::Syntax { line, msg: "unbalanced `]`".to_string() });
                };
                (head[..open].trim(), Some(head[open + 1..].trim().to_string()))
            }
            None => (rest, None),
        };
        if !seen.insert(key.to_string()) {
            return Err(Error::DuplicateKey(key.to_string()));
        }
        out.push(Entry { key: key.to_string(), value: value.to_string(), unit, line });
    }
    Ok(out)
}

pub fn push(out: &mut String, key: &str, value: &str, unit: Option<&str>) {
    match unit {
        Some(u) => writeln!(out, "{key} = {value} [{u}]"),
        None => writeln!(out, "{key} = {value}"),
    }
    .expect("writing to a String cannot fail");
}

pub fn push_f64(out: &mut String, key: &str, value: f64, unit: Option<&str>) {
    push(out, key, &format!("{value:?}"), unit);
}

/// Parses a float, naming the key on failure.
pub fn parse_f64(key: &str, value: &str) -> Result<f64, Error> {
    let v: f64 = value
        .parse()
        .map_err(|_| Error::BadValue { key: key.to_string(), msg: format!("`{value}` is not a number") })?;
    if !v.is_finite() {
        return Err(Error::BadValue { key: key.to_string(), msg: "must be finite".to_string() });
    }
    Ok(v)
}

/// 64-bit FNV-1a, used for parameter fingerprints.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}
