use super::{ParseError, ParseErrorKind};

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Tok {
    Num { value: f64, integral: bool },
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    Arrow,
    Lt,
    Le,
    Gt,
    Ge,
    End,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Num { value, .. } => format!("number {value}"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Lt => "`<`".into(),
            Tok::Le => "`<=`".into(),
            Tok::Gt => "`>`".into(),
            Tok::Ge => "`>=`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

/// A token with its 1-based character position.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub pos: usize,
}

pub(crate) fn tokenize(source: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = source.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '≤' => Some(Tok::Le),
            '≥' => Some(Tok::Ge),
            '−' => Some(Tok::Minus),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Spanned { tok, pos });
            i += 1;
            continue;
        }
        let next = chars.get(i + 1).copied();
        match c {
            '-' if next == Some('>') => {
                out.push(Spanned { tok: Tok::Arrow, pos });
                i += 2;
            }
            '-' => {
                out.push(Spanned { tok: Tok::Minus, pos });
                i += 1;
            }
            '<' | '>' => {
                let eq = next == Some('=');
                let tok = match (c, eq) {
                    ('<', false) => Tok::Lt,
                    ('<', true) => Tok::Le,
                    ('>', false) => Tok::Gt,
                    _ => Tok::Ge,
                };
                out.push(Spanned { tok, pos });
                i += if eq { 2 } else { 1 };
            }
            '0'..='9' | '.' => {
                let start = i;
                let mut integral = true;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if i < chars.len() && chars[i] == '.' {
                    integral = false;
                    i += 1;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                    let mut j = i + 1;
                    if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                        j += 1;
                    }
                    if j < chars.len() && chars[j].is_ascii_digit() {
                        integral = false;
                        i = j;
                        while i < chars.len() && chars[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text: String = chars[start..i].iter().collect();
                let value: f64 = text.parse().map_err(|_| ParseError {
                    kind: ParseErrorKind::InvalidNumber(text.clone()),
                    position: pos,
                })?;
                if !value.is_finite() {
                    return Err(ParseError {
                        kind: ParseErrorKind::InvalidNumber(text),
                        position: pos,
                    });
                }
                out.push(Spanned {
                    tok: Tok::Num { value, integral },
                    pos,
                });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Spanned {
                    tok: Tok::Ident(chars[start..i].iter().collect()),
                    pos,
                });
            }
            other => {
                return Err(ParseError {
                    kind: ParseErrorKind::UnexpectedChar(other),
                    position: pos,
                })
            }
        }
    }
    out.push(Spanned {
        tok: Tok::End,
        pos: chars.len() + 1,
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arrow_versus_minus() {
        let toks: Vec<Tok> = tokenize("x<-1 -> 2").unwrap().into_iter().map(|s| s.tok).collect();
        assert_eq!(
            toks,
            vec![
                Tok::Ident("x".into()),
                Tok::Lt,
                Tok::Minus,
                Tok::Num { value: 1.0, integral: true },
                Tok::Arrow,
                Tok::Num { value: 2.0, integral: true },
                Tok::End
            ]
        );
    }

    #[test]
    fn positions_are_one_based_chars() {
        let toks = tokenize("≤ 1.5e-3").unwrap();
        assert_eq!(toks[0].pos, 1);
        assert_eq!(toks[1].pos, 3);
        assert_eq!(toks[1].tok, Tok::Num { value: 1.5e-3, integral: false });
    }

    #[test]
    fn bad_character() {
        let err = tokenize("x $ 1").unwrap_err();
        assert_eq!(err.position, 3);
    }
}
