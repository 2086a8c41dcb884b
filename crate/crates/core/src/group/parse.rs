//! Text syntax for group elements.
//!
//! Words: generators `a`–`d` or `g1`, `g2`, ...; inverses as `^-1` or
//! uppercase (`A`, `G2`); powers `a^3`; products by juxtaposition; `e` is
//! the identity. Direct products are written `(w1, w2)`, semidirect
//! elements `(w; eps)`, matrices as row-major integer lists, flat
//! `[0,0,1,...]` or nested `[[0,0,1],...]`.

use super::context::GroupContext;
use super::element::GroupElement;
use super::matrix::IntMatrix;
use super::word::{Syllable, Word};
use crate::error::{input, Result};

const LETTERS: [char; 4] = ['a', 'b', 'c', 'd'];

impl GroupContext {
    pub fn parse(&self, text: &str) -> Result<GroupElement> {
        let t = text.trim();
        match self {
            GroupContext::Free { .. } | GroupContext::FreeProduct { .. } => {
                let raw = parse_syllables(t)?;
                self.reduce(&raw)
            }
            GroupContext::Direct { factors } => {
                let inner = strip_parens(t)?;
                let parts = split_top_level(inner, ',');
                if parts.len() != factors.len() {
                    return input(format!("expected {} components in {t:?}", factors.len()));
                }
                Ok(GroupElement::Tuple(
                    factors.iter().zip(parts).map(|(f, p)| f.parse(p)).collect::<Result<_>>()?,
                ))
            }
            GroupContext::Semidirect { automorphism } => {
                let inner = strip_parens(t)?;
                let parts = split_top_level(inner, ';');
                if parts.len() != 2 {
                    return input(format!("semidirect elements are written (w; eps), got {t:?}"));
                }
                let base = automorphism.context().parse(parts[0])?;
                let eps: i64 = parts[1]
                    .trim()
                    .parse()
                    .map_err(|_| crate::Error::Input(format!("bad twist {:?}", parts[1])))?;
                let k = automorphism.order() as i64;
                Ok(GroupElement::Twisted { base: Box::new(base), twist: eps.rem_euclid(k) as u32 })
            }
            GroupContext::SpecialLinear { dim } => {
                let entries: Vec<i64> = if let Ok(rows) = serde_json::from_str::<Vec<Vec<i64>>>(t) {
                    rows.into_iter().flatten().collect()
                } else {
                    serde_json::from_str::<Vec<i64>>(t)
                        .map_err(|_| crate::Error::Input(format!("bad matrix literal {t:?}")))?
                };
                let g = GroupElement::Matrix(IntMatrix::new(*dim, entries)?);
                self.check(&g)?;
                Ok(g)
            }
        }
    }

    pub fn format(&self, g: &GroupElement) -> String {
        match (self, g) {
            (GroupContext::Free { .. } | GroupContext::FreeProduct { .. }, GroupElement::Word(w)) => {
                format_word(w, self.word_rank().unwrap_or(0))
            }
            (GroupContext::Direct { factors }, GroupElement::Tuple(v)) => {
                let parts: Vec<String> = factors.iter().zip(v).map(|(f, x)| f.format(x)).collect();
                format!("({})", parts.join(", "))
            }
            (GroupContext::Semidirect { automorphism }, GroupElement::Twisted { base, twist }) => {
                format!("({}; {})", automorphism.context().format(base), twist)
            }
            (_, GroupElement::Matrix(m)) => serde_json::to_string(&m.rows()).unwrap_or_default(),
            _ => format!("{g:?}"),
        }
    }
}

fn format_word(w: &Word, rank: u32) -> String {
    if w.is_identity() {
        return "e".to_string();
    }
    let short = rank as usize <= LETTERS.len();
    let parts: Vec<String> = w
        .syllables()
        .iter()
        .map(|s| {
            let name = if short {
                LETTERS[s.generator as usize].to_string()
            } else {
                format!("g{}", s.generator + 1)
            };
            if s.exponent == 1 {
                name
            } else {
                format!("{name}^{}", s.exponent)
            }
        })
        .collect();
    parts.join(if short { "" } else { " " })
}

fn strip_parens(t: &str) -> Result<&str> {
    t.strip_prefix('(')
        .and_then(|x| x.strip_suffix(')'))
        .ok_or_else(|| crate::Error::Input(format!("expected parenthesised element, got {t:?}")))
}

fn split_top_level(s: &str, sep: char) -> Vec<&str> {
    let mut depth = 0i32;
    let mut start = 0;
    let mut out = Vec::new();
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

/// Tokenizes a word into raw syllables (not yet reduced).
pub fn parse_syllables(text: &str) -> Result<Vec<Syllable>> {
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    let number = |i: &mut usize| -> Option<i64> {
        let start = *i;
        if *i < chars.len() && chars[*i] == '-' {
            *i += 1;
        }
        while *i < chars.len() && chars[*i].is_ascii_digit() {
            *i += 1;
        }
        chars[start..*i].iter().collect::<String>().parse().ok()
    };
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() || c == '*' || c == '.' || c == '·' {
            i += 1;
            continue;
        }
        let (generator, inverted, identity) = match c {
            'e' | '1' => (0, false, true),
            'g' | 'G' => {
                i += 1;
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let idx: u32 = chars[start..i]
                    .iter()
                    .collect::<String>()
                    .parse()
                    .map_err(|_| crate::Error::Input(format!("bad generator name in {text:?}")))?;
                if idx == 0 {
                    return input("generators are numbered from g1");
                }
                i -= 1;
                (idx - 1, c == 'G', false)
            }
            c if LETTERS.contains(&c.to_ascii_lowercase()) => {
                let idx = LETTERS.iter().position(|&l| l == c.to_ascii_lowercase()).unwrap_or(0) as u32;
                (idx, c.is_ascii_uppercase(), false)
            }
            _ => return input(format!("unexpected character {c:?} in word {text:?}")),
        };
        i += 1;
        let mut exponent = 1i64;
        if i < chars.len() && chars[i] == '^' {
            i += 1;
            exponent = number(&mut i).ok_or_else(|| crate::Error::Input(format!("bad exponent in {text:?}")))?;
        }
        if identity {
            continue;
        }
        if inverted {
            exponent = -exponent;
        }
        out.push(Syllable::new(generator, exponent));
    }
    Ok(out)
}
