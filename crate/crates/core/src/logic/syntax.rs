//! Text forms used in scenario and trace files.
//!
//! ```text
//! in(r1,a)          positive literal / atom
//! ¬in(r1,a)         negative literal (also `not in(..)`, `~in(..)`, `-in(..)`)
//! p3                zero-arity proposition
//! OA != OB, X = a   constraints
//! +lift(A2,R)       positive action schema, `-move(..)` negative
//! ```

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("cannot parse `{text}`: {reason}")]
pub struct SyntaxError {
    pub text: String,
    pub reason: &'static str,
}

fn err(text: &str, reason: &'static str) -> SyntaxError {
    SyntaxError {
        text: text.to_string(),
        reason,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawAtom {
    pub pred: String,
    pub args: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawLiteral {
    pub atom: RawAtom,
    pub positive: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawConstraint {
    pub left: String,
    pub equal: bool,
    pub right: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RawItem {
    Literal(RawLiteral),
    Constraint(RawConstraint),
}

fn is_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub fn parse_atom(text: &str) -> Result<RawAtom, SyntaxError> {
    let t = text.trim();
    match t.find('(') {
        None => {
            if !is_name(t) {
                return Err(err(text, "expected a name"));
            }
            Ok(RawAtom {
                pred: t.to_string(),
                args: Vec::new(),
            })
        }
        Some(open) => {
            if !t.ends_with(')') {
                return Err(err(text, "missing closing parenthesis"));
            }
            let pred = t[..open].trim();
            if !is_name(pred) {
                return Err(err(text, "bad predicate name"));
            }
            let inner = &t[open + 1..t.len() - 1];
            let mut args = Vec::new();
            if !inner.trim().is_empty() {
                for a in inner.split(',') {
                    let a = a.trim();
                    if !is_name(a) {
                        return Err(err(text, "bad argument"));
                    }
                    args.push(a.to_string());
                }
            }
            Ok(RawAtom {
                pred: pred.to_string(),
                args,
            })
        }
    }
}

fn strip_sign(text: &str) -> (bool, &str) {
    let t = text.trim();
    for prefix in ["¬", "~", "-", "not "] {
        if let Some(rest) = t.strip_prefix(prefix) {
            return (false, rest.trim_start());
        }
    }
    if let Some(rest) = t.strip_prefix('+') {
        return (true, rest.trim_start());
    }
    (true, t)
}

pub fn parse_literal(text: &str) -> Result<RawLiteral, SyntaxError> {
    let (positive, rest) = strip_sign(text);
    let atom = parse_atom(rest).map_err(|e| SyntaxError {
        text: text.to_string(),
        ..e
    })?;
    Ok(RawLiteral { atom, positive })
}

pub fn parse_item(text: &str) -> Result<RawItem, SyntaxError> {
    let (equal, pos, width) = if let Some(p) = text.find("!=") {
        (false, p, 2)
    } else if let Some(p) = text.find('≠') {
        (false, p, '≠'.len_utf8())
    } else if let Some(p) = text.find('=') {
        (true, p, 1)
    } else {
        return parse_literal(text).map(RawItem::Literal);
    };
    let left = text[..pos].trim();
    let right = text[pos + width..].trim();
    if !is_name(left) || !is_name(right) {
        return Err(err(text, "constraint sides must be names"));
    }
    Ok(RawItem::Constraint(RawConstraint {
        left: left.to_string(),
        equal,
        right: right.to_string(),
    }))
}
