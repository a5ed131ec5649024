//! Character taxonomy shared by tokenization and slot typing.

use std::fmt;

use unicode_properties::{GeneralCategory, UnicodeGeneralCategory};

/// The four character kinds every record character falls into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CharKind {
    Digit,
    Upper,
    Lower,
    Symbol,
}

impl CharKind {
    pub const ALL: [CharKind; 4] = [
        CharKind::Digit,
        CharKind::Upper,
        CharKind::Lower,
        CharKind::Symbol,
    ];

    fn bit(self) -> u8 {
        match self {
            CharKind::Digit => 0b001,
            CharKind::Upper => 0b010,
            CharKind::Lower => 0b100,
            CharKind::Symbol => 0b1000,
        }
    }
}

/// Classifies a character by its Unicode general category.
///
/// `Nd` is `Digit`, `Lu` is `Upper`, `Ll` is `Lower`; everything else
/// (punctuation, whitespace, marks, titlecase and caseless letters, other
/// numerics) is `Symbol`.
pub fn classify_char(c: char) -> CharKind {
    if c.is_ascii() {
        return match c {
            '0'..='9' => CharKind::Digit,
            'A'..='Z' => CharKind::Upper,
            'a'..='z' => CharKind::Lower,
            _ => CharKind::Symbol,
        };
    }
    match c.general_category() {
        GeneralCategory::DecimalNumber => CharKind::Digit,
        GeneralCategory::UppercaseLetter => CharKind::Upper,
        GeneralCategory::LowercaseLetter => CharKind::Lower,
        _ => CharKind::Symbol,
    }
}

/// A character class used in slot constraints and pattern elements.
///
/// A class is either a non-empty union of the three alphanumeric kinds or
/// `Any`, which accepts every character.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CharClass(u8);

impl CharClass {
    pub const DIGIT: CharClass = CharClass(0b001);
    pub const UPPER: CharClass = CharClass(0b010);
    pub const LOWER: CharClass = CharClass(0b100);
    pub const ANY: CharClass = CharClass(0b1000);

    /// Builds the class accepting the given kinds. Any set that includes
    /// `Symbol` collapses to `ANY`. Returns `None` for an empty set.
    pub fn from_kinds<I: IntoIterator<Item = CharKind>>(kinds: I) -> Option<CharClass> {
        let mut bits = 0u8;
        for k in kinds {
            bits |= k.bit();
        }
        match bits {
            0 => None,
            b if b & CharKind::Symbol.bit() != 0 => Some(CharClass::ANY),
            b => Some(CharClass(b)),
        }
    }

    pub fn of_kind(kind: CharKind) -> CharClass {
        CharClass::from_kinds([kind]).expect("single kind")
    }

    pub fn is_any(self) -> bool {
        self == CharClass::ANY
    }

    pub fn contains_kind(self, kind: CharKind) -> bool {
        self.is_any() || self.0 & kind.bit() != 0
    }

    pub fn matches(self, c: char) -> bool {
        self.is_any() || self.contains_kind(classify_char(c))
    }

    pub fn union(self, other: CharClass) -> CharClass {
        if self.is_any() || other.is_any() {
            CharClass::ANY
        } else {
            CharClass(self.0 | other.0)
        }
    }

    /// Regex rendering: `\d`, `[A-Z]`, `[a-z]`, merged bracket unions
    /// ordered digit, upper, lower, or `.` for `ANY`.
    pub fn render(self) -> String {
        match self.0 {
            0b001 => r"\d".to_string(),
            0b010 => "[A-Z]".to_string(),
            0b100 => "[a-z]".to_string(),
            0b1000 => ".".to_string(),
            bits => {
                let mut out = String::from("[");
                if bits & 0b001 != 0 {
                    out.push_str("0-9");
                }
                if bits & 0b010 != 0 {
                    out.push_str("A-Z");
                }
                if bits & 0b100 != 0 {
                    out.push_str("a-z");
                }
                out.push(']');
                out
            }
        }
    }
}

impl fmt::Display for CharClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}
