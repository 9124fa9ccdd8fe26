use super::error::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Number(String),
    True,
    False,
    Forall,
    Exists,
    Not,
    And,
    Or,
    Implies,
    Iff,
    LParen,
    RParen,
    Comma,
    Dot,
    Colon,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier '{s}'"),
            Tok::Number(s) => format!("number '{s}'"),
            Tok::True => "'true'".into(),
            Tok::False => "'false'".into(),
            Tok::Forall => "'forall'".into(),
            Tok::Exists => "'exists'".into(),
            Tok::Not => "'!'".into(),
            Tok::And => "'&'".into(),
            Tok::Or => "'|'".into(),
            Tok::Implies => "'->'".into(),
            Tok::Iff => "'<->'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Comma => "','".into(),
            Tok::Dot => "'.'".into(),
            Tok::Colon => "':'".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub offset: usize,
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(offset, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        let single = match c {
            '!' | '~' => Some(Tok::Not),
            '&' => Some(Tok::And),
            '|' => Some(Tok::Or),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '.' => Some(Tok::Dot),
            ':' => Some(Tok::Colon),
            _ => None,
        };
        if let Some(tok) = single {
            chars.next();
            out.push(Spanned { tok, offset });
            continue;
        }
        if c == '-' {
            chars.next();
            match chars.peek() {
                Some(&(_, '>')) => {
                    chars.next();
                    out.push(Spanned {
                        tok: Tok::Implies,
                        offset,
                    });
                    continue;
                }
                _ => return Err(ParseError::at(text, offset, "'->'", "'-'")),
            }
        }
        if c == '<' {
            let rest = &text[offset..];
            if rest.starts_with("<->") {
                chars.next();
                chars.next();
                chars.next();
                out.push(Spanned {
                    tok: Tok::Iff,
                    offset,
                });
                continue;
            }
            return Err(ParseError::at(text, offset, "'<->'", "'<'"));
        }
        if c.is_ascii_alphabetic() {
            let mut end = offset;
            while let Some(&(i, ch)) = chars.peek() {
                if ch.is_ascii_alphanumeric() || ch == '_' {
                    end = i + ch.len_utf8();
                    chars.next();
                } else {
                    break;
                }
            }
            let word = &text[offset..end];
            let tok = match word {
                "true" => Tok::True,
                "false" => Tok::False,
                "forall" => Tok::Forall,
                "exists" => Tok::Exists,
                _ => Tok::Ident(word.to_string()),
            };
            out.push(Spanned { tok, offset });
            continue;
        }
        if c.is_ascii_digit() {
            let mut end = offset;
            while let Some(&(i, ch)) = chars.peek() {
                if ch.is_ascii_digit() {
                    end = i + 1;
                    chars.next();
                } else {
                    break;
                }
            }
            out.push(Spanned {
                tok: Tok::Number(text[offset..end].to_string()),
                offset,
            });
            continue;
        }
        return Err(ParseError::at(
            text,
            offset,
            "a formula token",
            &format!("'{c}'"),
        ));
    }
    out.push(Spanned {
        tok: Tok::Eof,
        offset: text.len(),
    });
    Ok(out)
}
