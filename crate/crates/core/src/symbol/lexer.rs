use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    /// Real literal, or imaginary literal when `imag` is set (`2.5i`).
    Num {
        value: f64,
        imag: bool,
        integer: Option<u32>,
    },
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Token {
    pub tok: Tok,
    pub start: usize,
    pub end: usize,
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<Token>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let single = match c {
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            b',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Token {
                tok,
                start,
                end: i + 1,
            });
            i += 1;
        } else if c.is_ascii_digit()
            || (c == b'.' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit))
        {
            i = lex_number(text, i, &mut out)?;
        } else if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(text[start..i].to_string()),
                start,
                end: i,
            });
        } else {
            let ch = text[i..].chars().next().unwrap_or('?');
            return Err(Error::Parse {
                pos: i,
                msg: format!("unexpected character {ch:?}"),
            });
        }
    }
    Ok(out)
}

fn lex_number(text: &str, start: usize, out: &mut Vec<Token>) -> Result<usize> {
    let bytes = text.as_bytes();
    let mut i = start;
    let digits = |i: &mut usize| {
        while *i < bytes.len() && bytes[*i].is_ascii_digit() {
            *i += 1;
        }
    };
    digits(&mut i);
    let mut is_integer = true;
    if i < bytes.len() && bytes[i] == b'.' {
        is_integer = false;
        i += 1;
        digits(&mut i);
    }
    if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
        let mut j = i + 1;
        if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
            j += 1;
        }
        if j < bytes.len() && bytes[j].is_ascii_digit() {
            is_integer = false;
            i = j;
            digits(&mut i);
        }
    }
    let lexeme = &text[start..i];
    let value: f64 = lexeme.parse().map_err(|_| Error::Parse {
        pos: start,
        msg: format!("malformed number {lexeme:?}"),
    })?;
    if !value.is_finite() {
        return Err(Error::Parse {
            pos: start,
            msg: format!("number {lexeme:?} is out of range"),
        });
    }
    let integer = if is_integer {
        lexeme.parse::<u32>().ok()
    } else {
        None
    };
    let ident_char = |b: u8| b.is_ascii_alphanumeric() || b == b'_';
    let imag =
        i < bytes.len() && bytes[i] == b'i' && !bytes.get(i + 1).copied().is_some_and(ident_char);
    if imag {
        i += 1;
    }
    out.push(Token {
        tok: Tok::Num {
            value,
            imag,
            integer: if imag { None } else { integer },
        },
        start,
        end: i,
    });
    Ok(i)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(s: &str) -> Vec<Tok> {
        tokenize(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn numbers_and_suffixes() {
        assert_eq!(
            kinds("2i"),
            vec![Tok::Num {
                value: 2.0,
                imag: true,
                integer: None
            }]
        );
        assert_eq!(
            kinds("1.5e-3"),
            vec![Tok::Num {
                value: 1.5e-3,
                imag: false,
                integer: None
            }]
        );
        assert_eq!(
            kinds("12"),
            vec![Tok::Num {
                value: 12.0,
                imag: false,
                integer: Some(12)
            }]
        );
        assert_eq!(
            kinds("2im"),
            vec![
                Tok::Num {
                    value: 2.0,
                    imag: false,
                    integer: Some(2)
                },
                Tok::Ident("im".into())
            ]
        );
        assert_eq!(
            kinds("3e"),
            vec![
                Tok::Num {
                    value: 3.0,
                    imag: false,
                    integer: Some(3)
                },
                Tok::Ident("e".into())
            ]
        );
    }

    #[test]
    fn positions_are_byte_offsets() {
        let t = tokenize("  z1 *conj( z )").unwrap();
        assert_eq!((t[0].start, t[0].end), (2, 4));
        assert_eq!(t[2].tok, Tok::Ident("conj".into()));
        assert_eq!(t[2].start, 6);
    }

    #[test]
    fn rejects_garbage() {
        assert!(matches!(
            tokenize("z # 2"),
            Err(Error::Parse { pos: 2, .. })
        ));
        assert!(matches!(
            tokenize("1e999"),
            Err(Error::Parse { pos: 0, .. })
        ));
    }
}
