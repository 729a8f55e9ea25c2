use super::{ParseError, Pos};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    /// `[...]`, the rendering of derived symbols such as `[2^tau]`.
    Bracketed(String),
    Number(String),
    Str(String),
    Punct(char),
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Bracketed(s) => format!("`[{s}]`"),
            Tok::Number(s) => format!("number `{s}`"),
            Tok::Str(_) => "string".into(),
            Tok::Punct(c) => format!("`{c}`"),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
    /// char offsets `[start, end)`
    pub span: (usize, usize),
}

pub fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let bump = |i: &mut usize, line: &mut usize, col: &mut usize| {
        let c = chars[*i];
        *i += 1;
        if c == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
    };
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        let start = i;
        if c.is_whitespace() {
            bump(&mut i, &mut line, &mut col);
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                bump(&mut i, &mut line, &mut col);
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                s.push(chars[i]);
                bump(&mut i, &mut line, &mut col);
            }
            out.push(Token { tok: Tok::Ident(s), pos, span: (start, i) });
            continue;
        }
        if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let mut s = String::new();
            let mut seen_dot = false;
            while i < chars.len() && (chars[i].is_ascii_digit() || (chars[i] == '.' && !seen_dot)) {
                seen_dot |= chars[i] == '.';
                s.push(chars[i]);
                bump(&mut i, &mut line, &mut col);
            }
            out.push(Token { tok: Tok::Number(s), pos, span: (start, i) });
            continue;
        }
        if c == '"' {
            bump(&mut i, &mut line, &mut col);
            let mut s = String::new();
            while i < chars.len() && chars[i] != '"' {
                if chars[i] == '\n' {
                    return Err(ParseError::new(pos, vec!["`\"`".into()], "unterminated string"));
                }
                s.push(chars[i]);
                bump(&mut i, &mut line, &mut col);
            }
            if i == chars.len() {
                return Err(ParseError::new(pos, vec!["`\"`".into()], "unterminated string"));
            }
            bump(&mut i, &mut line, &mut col);
            out.push(Token { tok: Tok::Str(s), pos, span: (start, i) });
            continue;
        }
        if c == '[' {
            // `[2^tau]` only when the bracket holds no separators; enclosures use `[a, b]`.
            let close = chars[i + 1..].iter().position(|&d| d == ']' || d == ',' || d == '\n' || d == ';');
            if let Some(k) = close {
                if chars[i + 1 + k] == ']' && k > 0 {
                    let inner: String = chars[i + 1..i + 1 + k].iter().collect();
                    if !inner.contains(char::is_whitespace) {
                        for _ in 0..k + 2 {
                            bump(&mut i, &mut line, &mut col);
                        }
                        out.push(Token { tok: Tok::Bracketed(inner), pos, span: (start, i) });
                        continue;
                    }
                }
            }
        }
        if "+-*/^()[],;=".contains(c) {
            bump(&mut i, &mut line, &mut col);
            out.push(Token { tok: Tok::Punct(c), pos, span: (start, i) });
            continue;
        }
        return Err(ParseError::new(pos, Vec::new(), &format!("unexpected character `{c}`")));
    }
    out.push(Token { tok: Tok::Eof, pos: Pos { line, col }, span: (i, i) });
    Ok(out)
}
