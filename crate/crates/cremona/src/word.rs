//! Group words over a named system of certified birational generators, and
//! the decision procedures built on exact composition: identity of a word,
//! and equality of positive words over uncertified tuples.

use std::fmt;

use crate::birat::{BirationalTuple, CremonaElement};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::syntax::{self, Letter};

/// Named generators sharing one dimension and field. A generator declared
/// with an inverse is certified at construction; one declared without can
/// only be used positively (semigroup operations).
#[derive(Debug, Clone)]
pub struct GeneratorSystem {
    names: Vec<String>,
    tuples: Vec<BirationalTuple>,
    elements: Vec<Option<CremonaElement>>,
}

impl GeneratorSystem {
    pub fn new(entries: Vec<(String, BirationalTuple, Option<BirationalTuple>)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::DomainMismatch("empty generator system".into()));
        }
        let dim = entries[0].1.dim();
        let domain = entries[0].1.domain().clone();
        let mut names = Vec::new();
        let mut tuples = Vec::new();
        let mut elements = Vec::new();
        for (name, fwd, inv) in entries {
            if names.contains(&name) {
                return Err(Error::DomainMismatch(format!(
                    "duplicate generator name `{name}`"
                )));
            }
            if fwd.dim() != dim || fwd.domain() != &domain {
                return Err(Error::DomainMismatch(format!(
                    "generator `{name}` does not match the system's dimension or field"
                )));
            }
            let element = match inv {
                Some(inv) => Some(CremonaElement::new(fwd.clone(), inv)?),
                None => None,
            };
            names.push(name);
            tuples.push(fwd);
            elements.push(element);
        }
        Ok(GeneratorSystem {
            names,
            tuples,
            elements,
        })
    }

    /// Parse a generator file: one block per line, `name: TUPLE` optionally
    /// followed by `; inverse: TUPLE`, `#` starting a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        let mut offset = 0usize;
        for line in text.split_inclusive('\n') {
            let line_start = offset;
            offset += line.len();
            let content = line.split('#').next().unwrap_or("");
            if content.trim().is_empty() {
                continue;
            }
            let colon = content.find(':').ok_or_else(|| Error::Syntax {
                span: crate::error::Span::new(line_start, line_start + content.trim_end().len()),
                message: "expected `name: TUPLE`".into(),
            })?;
            let name = content[..colon].trim().to_string();
            if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(Error::Syntax {
                    span: crate::error::Span::new(line_start, line_start + colon),
                    message: format!("invalid generator name `{name}`"),
                });
            }
            let rest = &content[colon + 1..];
            let rest_off = line_start + colon + 1;
            let (fwd_text, inv_part) = match rest.find(';') {
                Some(semi) => (&rest[..semi], Some((&rest[semi + 1..], rest_off + semi + 1))),
                None => (rest, None),
            };
            let fwd = parse_tuple_at(fwd_text, rest_off)?;
            let inv = match inv_part {
                None => None,
                Some((part, part_off)) => {
                    let colon2 = part.find(':').ok_or_else(|| Error::Syntax {
                        span: crate::error::Span::new(part_off, part_off + part.trim_end().len()),
                        message: "expected `inverse: TUPLE`".into(),
                    })?;
                    let keyword = part[..colon2].trim();
                    if keyword != "inverse" {
                        return Err(Error::Syntax {
                            span: crate::error::Span::new(part_off, part_off + colon2),
                            message: format!("expected `inverse`, found `{keyword}`"),
                        });
                    }
                    Some(parse_tuple_at(&part[colon2 + 1..], part_off + colon2 + 1)?)
                }
            };
            entries.push((name, fwd, inv));
        }
        GeneratorSystem::new(entries)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn dim(&self) -> usize {
        self.tuples[0].dim()
    }

    pub fn domain(&self) -> &FieldSpec {
        self.tuples[0].domain()
    }

    pub fn forward(&self, i: usize) -> Result<&BirationalTuple> {
        self.tuples.get(i).ok_or(Error::IndexOutOfRange {
            index: i,
            len: self.tuples.len(),
        })
    }

    /// The certified element for generator `i`; an error when no inverse was
    /// declared for it.
    pub fn element(&self, i: usize) -> Result<&CremonaElement> {
        let slot = self.elements.get(i).ok_or(Error::IndexOutOfRange {
            index: i,
            len: self.elements.len(),
        })?;
        slot.as_ref().ok_or_else(|| {
            Error::DomainMismatch(format!(
                "generator `{}` has no declared inverse",
                self.names[i]
            ))
        })
    }

    /// The certified elements of all generators (requires every inverse).
    pub fn elements(&self) -> Result<Vec<CremonaElement>> {
        (0..self.len()).map(|i| self.element(i).cloned()).collect()
    }
}

fn parse_tuple_at(text: &str, offset: usize) -> Result<BirationalTuple> {
    // leading whitespace is part of the slice; spans shift by the slice start
    syntax::parse_map_expr(text.trim_end()).map_err(|e| shift_span(e, offset))
}

fn shift_span(e: Error, delta: usize) -> Error {
    use crate::error::Span;
    let mv = |s: Span| Span::new(s.start + delta, s.end + delta);
    match e {
        Error::Syntax { span, message } => Error::Syntax {
            span: mv(span),
            message,
        },
        Error::UnknownGenerator { name, span } => Error::UnknownGenerator {
            name,
            span: mv(span),
        },
        Error::Arity {
            span,
            variable,
            needed,
            declared,
        } => Error::Arity {
            span: mv(span),
            variable,
            needed,
            declared,
        },
        Error::DomainError { span, message } => Error::DomainError {
            span: mv(span),
            message,
        },
        other => other,
    }
}

/// A freely reduced word: letters are (generator index, inverted).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupWord {
    letters: Vec<Letter>,
}

impl GroupWord {
    /// Build from raw letters, cancelling adjacent inverse pairs.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(raw: I) -> Self {
        let mut stack: Vec<Letter> = Vec::new();
        for (i, inv) in raw {
            if let Some(&(j, jinv)) = stack.last() {
                if i == j && inv != jinv {
                    stack.pop();
                    continue;
                }
            }
            stack.push((i, inv));
        }
        GroupWord { letters: stack }
    }

    pub fn empty() -> Self {
        GroupWord {
            letters: Vec::new(),
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> GroupWord {
        GroupWord {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|&(i, inv)| (i, !inv))
                .collect(),
        }
    }

    pub fn concat(&self, other: &GroupWord) -> GroupWord {
        GroupWord::from_letters(self.letters.iter().chain(other.letters.iter()).copied())
    }

    /// The cyclic rotation starting at letter `k` (freely reduced again).
    pub fn rotated(&self, k: usize) -> GroupWord {
        if self.letters.is_empty() {
            return self.clone();
        }
        let k = k % self.letters.len();
        GroupWord::from_letters(
            self.letters[k..]
                .iter()
                .chain(self.letters[..k].iter())
                .copied(),
        )
    }

    /// The indices of a positive word, or None if any letter is inverted.
    pub fn positive_indices(&self) -> Option<Vec<usize>> {
        self.letters
            .iter()
            .map(|&(i, inv)| if inv { None } else { Some(i) })
            .collect()
    }

    /// Render against generator names, grouping runs into powers.
    pub fn display_with(&self, names: &[String]) -> String {
        if self.letters.is_empty() {
            return "1".to_string();
        }
        let mut parts: Vec<String> = Vec::new();
        let mut run: Option<(Letter, i64)> = None;
        for &l in &self.letters {
            match &mut run {
                Some((r, k)) if *r == l => *k += 1,
                _ => {
                    if let Some((r, k)) = run.take() {
                        parts.push(render_run(r, k, names));
                    }
                    run = Some((l, 1));
                }
            }
        }
        if let Some((r, k)) = run {
            parts.push(render_run(r, k, names));
        }
        parts.join("*")
    }
}

fn render_run((i, inv): Letter, k: i64, names: &[String]) -> String {
    let e = if inv { -k } else { k };
    if e == 1 {
        names[i].clone()
    } else {
        format!("{}^{}", names[i], e)
    }
}

/// Parse a word against declared generator names and reduce it freely.
pub fn parse_word(src: &str, names: &[String]) -> Result<GroupWord> {
    // `1` denotes the empty word (it renders that way)
    if src.trim() == "1" {
        return Ok(GroupWord::empty());
    }
    Ok(GroupWord::from_letters(syntax::parse_word_letters(
        src, names,
    )?))
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // positional display without names: g0, g1, ...
        let names: Vec<String> = (0..)
            .take(
                self.letters
                    .iter()
                    .map(|&(i, _)| i + 1)
                    .max()
                    .unwrap_or(0),
            )
            .map(|i| format!("g{i}"))
            .collect();
        write!(f, "{}", self.display_with(&names))
    }
}

/// Evaluate a word to a certified element by balanced composition. The empty
/// word is the identity.
pub fn evaluate_word(sys: &GeneratorSystem, w: &GroupWord) -> Result<CremonaElement> {
    fn eval_range(sys: &GeneratorSystem, ls: &[Letter]) -> Result<CremonaElement> {
        if ls.len() == 1 {
            let (i, inv) = ls[0];
            let e = sys.element(i)?;
            return Ok(if inv { e.inverted() } else { e.clone() });
        }
        let mid = ls.len() / 2;
        let left = eval_range(sys, &ls[..mid])?;
        let right = eval_range(sys, &ls[mid..])?;
        left.compose(&right)
    }
    if w.is_empty() {
        return Ok(CremonaElement::identity(sys.dim(), sys.domain().clone()));
    }
    eval_range(sys, w.letters())
}

/// Decide whether a word evaluates to the identity transformation.
pub fn is_identity_word(sys: &GeneratorSystem, w: &GroupWord) -> Result<bool> {
    evaluate_word(sys, w)?.is_identity()
}

/// Decide equality of two positive words over (possibly uncertified) tuples.
pub fn semigroup_words_equal(sys: &GeneratorSystem, w1: &[usize], w2: &[usize]) -> Result<bool> {
    let left = eval_positive(sys, w1)?;
    let right = eval_positive(sys, w2)?;
    left.tuple_eq(&right)
}

fn eval_positive(sys: &GeneratorSystem, w: &[usize]) -> Result<BirationalTuple> {
    let mut acc: Option<BirationalTuple> = None;
    for &i in w {
        let g = sys.forward(i)?;
        acc = Some(match acc {
            None => g.clone(),
            Some(a) => a.compose(g)?,
        });
    }
    Ok(acc.unwrap_or_else(|| BirationalTuple::identity(sys.dim(), sys.domain().clone())))
}
