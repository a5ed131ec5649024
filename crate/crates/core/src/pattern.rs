//! Pattern abstract syntax, regex rendering, and whole-string matching.
//!
//! The rendered dialect is deliberately small: escaped literals, the classes
//! `\d`, `[A-Z]`, `[a-z]`, merged bracket unions and `.`, bracket sets of
//! literal characters, the quantifiers `{n}` and `*`, and non-capturing
//! alternation `(?:a|b)`. Rendered patterns carry no anchors; matching is
//! always against the whole record.

use std::collections::BTreeSet;
use std::fmt;

use crate::chars::CharClass;

const LITERAL_META: &[char] = &[
    '\\', '.', '+', '*', '?', '(', ')', '[', ']', '{', '}', '|', '^', '$',
];

// Inside brackets `-`, `&` and `~` are also special to common engines
// (ranges and set operations).
const SET_META: &[char] = &[
    '\\', '.', '+', '*', '?', '(', ')', '[', ']', '{', '}', '|', '^', '$', '-', '&', '~',
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantifier {
    /// Exactly `n` repetitions, `n >= 1`.
    Exactly(usize),
    Star,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PatternElement {
    /// Unescaped literal text.
    Literal(String),
    Class {
        class: CharClass,
        quant: Quantifier,
    },
    /// `count` consecutive characters each drawn from `chars`.
    Set {
        chars: BTreeSet<char>,
        count: usize,
    },
    /// One of a non-empty set of unescaped strings.
    Alternation(BTreeSet<String>),
}

impl PatternElement {
    pub fn literal(text: impl Into<String>) -> Self {
        PatternElement::Literal(text.into())
    }

    pub fn exactly(class: CharClass, n: usize) -> Self {
        debug_assert!(n >= 1);
        PatternElement::Class {
            class,
            quant: Quantifier::Exactly(n),
        }
    }

    pub fn star(class: CharClass) -> Self {
        PatternElement::Class {
            class,
            quant: Quantifier::Star,
        }
    }

    pub fn alternation<I, S>(choices: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        PatternElement::Alternation(choices.into_iter().map(Into::into).collect())
    }

    fn render_into(&self, out: &mut String) {
        match self {
            PatternElement::Literal(text) => escape_into(text, LITERAL_META, out),
            PatternElement::Class { class, quant } => {
                out.push_str(&class.render());
                push_quant(*quant, out);
            }
            PatternElement::Set { chars, count } => {
                if chars.len() == 1 {
                    let c = *chars.iter().next().expect("non-empty set");
                    if *count == 1 {
                        escape_into(&c.to_string(), LITERAL_META, out);
                        return;
                    }
                    out.push('[');
                    escape_into(&c.to_string(), SET_META, out);
                    out.push(']');
                } else {
                    out.push('[');
                    for c in chars {
                        escape_into(&c.to_string(), SET_META, out);
                    }
                    out.push(']');
                }
                push_quant(Quantifier::Exactly(*count), out);
            }
            PatternElement::Alternation(choices) => {
                if choices.len() == 1 {
                    let only = choices.iter().next().expect("non-empty alternation");
                    escape_into(only, LITERAL_META, out);
                } else {
                    out.push_str("(?:");
                    for (i, choice) in choices.iter().enumerate() {
                        if i > 0 {
                            out.push('|');
                        }
                        escape_into(choice, LITERAL_META, out);
                    }
                    out.push(')');
                }
            }
        }
    }
}

fn push_quant(q: Quantifier, out: &mut String) {
    match q {
        Quantifier::Exactly(1) => {}
        Quantifier::Exactly(n) => {
            out.push('{');
            out.push_str(&n.to_string());
            out.push('}');
        }
        Quantifier::Star => out.push('*'),
    }
}

fn escape_into(text: &str, meta: &[char], out: &mut String) {
    for c in text.chars() {
        if meta.contains(&c) {
            out.push('\\');
        }
        out.push(c);
    }
}

/// An ordered sequence of pattern elements matched against whole records.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PatternAst {
    pub elements: Vec<PatternElement>,
}

impl PatternAst {
    pub fn new(elements: Vec<PatternElement>) -> Self {
        PatternAst { elements }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for e in &self.elements {
            e.render_into(&mut out);
        }
        out
    }

    /// Merges adjacent literals, adjacent identical fixed-count classes and
    /// adjacent identical sets. The matched language is unchanged.
    pub fn normalized(&self) -> PatternAst {
        let mut out: Vec<PatternElement> = Vec::with_capacity(self.elements.len());
        for e in &self.elements {
            if let PatternElement::Literal(t) = e {
                if t.is_empty() {
                    continue;
                }
            }
            match (out.last_mut(), e) {
                (Some(PatternElement::Literal(prev)), PatternElement::Literal(next)) => {
                    prev.push_str(next);
                }
                (
                    Some(PatternElement::Class {
                        class: pc,
                        quant: Quantifier::Exactly(pn),
                    }),
                    PatternElement::Class {
                        class,
                        quant: Quantifier::Exactly(n),
                    },
                ) if pc == class => *pn += n,
                (
                    Some(PatternElement::Set {
                        chars: pchars,
                        count: pn,
                    }),
                    PatternElement::Set { chars, count },
                ) if pchars == chars && chars.len() > 1 => *pn += count,
                _ => out.push(e.clone()),
            }
        }
        PatternAst { elements: out }
    }

    /// True iff the whole record is generated by this pattern.
    pub fn full_match(&self, record: &str) -> bool {
        Matcher::new(self, record).run()
    }
}

impl fmt::Display for PatternAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

pub fn render_regex(ast: &PatternAst) -> String {
    ast.render()
}

pub fn full_match(ast: &PatternAst, record: &str) -> bool {
    ast.full_match(record)
}

struct Matcher<'a> {
    elements: &'a [PatternElement],
    text: &'a str,
    // failed (element, byte offset) states; only allocated when backtracking
    // is possible
    failed: Option<Vec<bool>>,
}

impl<'a> Matcher<'a> {
    fn new(ast: &'a PatternAst, text: &'a str) -> Self {
        let backtracks = ast.elements.iter().any(|e| match e {
            PatternElement::Class {
                quant: Quantifier::Star,
                ..
            } => true,
            PatternElement::Alternation(c) => c.len() > 1,
            _ => false,
        });
        let failed = backtracks.then(|| vec![false; (ast.elements.len() + 1) * (text.len() + 1)]);
        Matcher {
            elements: &ast.elements,
            text,
            failed,
        }
    }

    fn run(&mut self) -> bool {
        self.match_from(0, 0)
    }

    fn match_from(&mut self, idx: usize, pos: usize) -> bool {
        if idx == self.elements.len() {
            return pos == self.text.len();
        }
        let slot = idx * (self.text.len() + 1) + pos;
        if let Some(failed) = &self.failed {
            if failed[slot] {
                return false;
            }
        }
        let ok = self.try_element(idx, pos);
        if !ok {
            if let Some(failed) = &mut self.failed {
                failed[slot] = true;
            }
        }
        ok
    }

    fn try_element(&mut self, idx: usize, pos: usize) -> bool {
        let rest = &self.text[pos..];
        match &self.elements[idx] {
            PatternElement::Literal(lit) => {
                rest.starts_with(lit.as_str()) && self.match_from(idx + 1, pos + lit.len())
            }
            PatternElement::Alternation(choices) => {
                let mut ends: Vec<usize> = choices
                    .iter()
                    .filter(|c| rest.starts_with(c.as_str()))
                    .map(|c| pos + c.len())
                    .collect();
                ends.dedup();
                ends.into_iter().any(|end| self.match_from(idx + 1, end))
            }
            PatternElement::Class {
                class,
                quant: Quantifier::Exactly(n),
            } => match take_n(rest, *n, |c| class.matches(c)) {
                Some(len) => self.match_from(idx + 1, pos + len),
                None => false,
            },
            PatternElement::Set { chars, count } => {
                match take_n(rest, *count, |c| chars.contains(&c)) {
                    Some(len) => self.match_from(idx + 1, pos + len),
                    None => false,
                }
            }
            PatternElement::Class {
                class,
                quant: Quantifier::Star,
            } => {
                let mut ends = vec![pos];
                for (off, c) in rest.char_indices() {
                    if !class.matches(c) {
                        break;
                    }
                    ends.push(pos + off + c.len_utf8());
                }
                ends.into_iter()
                    .rev()
                    .any(|end| self.match_from(idx + 1, end))
            }
        }
    }
}

/// Byte length of the first `n` chars of `s` if all satisfy `pred`.
fn take_n(s: &str, n: usize, pred: impl Fn(char) -> bool) -> Option<usize> {
    let mut taken = 0;
    let mut len = 0;
    for c in s.chars() {
        if taken == n {
            break;
        }
        if !pred(c) {
            return None;
        }
        taken += 1;
        len += c.len_utf8();
    }
    (taken == n).then_some(len)
}
