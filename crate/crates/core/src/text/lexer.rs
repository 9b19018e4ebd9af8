use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    /// A run of letters, digits and underscores.
    Word(String),
    /// A single-quoted string, quotes removed and `''` unescaped.
    Quoted(String),
    Sym(&'static str),
    Eof,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

// longest first so `<=` wins over `<`
const SYMBOLS: &[&str] = &[
    "->", "!=", "<=", ">=", "{", "}", "(", ")", "[", "]", ",", "=", ":", ".", "+", "-", "<", ">",
];

pub(crate) fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

pub(crate) fn tokenize(src: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut col = 1;
    let mut chars = src.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        let (start_line, start_col) = (line, col);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::CharIndices>| {
            let (_, c) = chars.next().expect("peeked");
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars);
        } else if c == '#' {
            while chars.peek().is_some_and(|&(_, c)| c != '\n') {
                bump(&mut chars);
            }
        } else if is_word_char(c) {
            let mut word = String::new();
            while chars.peek().is_some_and(|&(_, c)| is_word_char(c)) {
                word.push(bump(&mut chars));
            }
            out.push(Token { tok: Tok::Word(word), line: start_line, column: start_col });
        } else if c == '\'' {
            bump(&mut chars);
            let mut s = String::new();
            loop {
                match chars.peek().map(|&(_, c)| c) {
                    None | Some('\n') => {
                        return Err(Error::Parse {
                            line: start_line,
                            column: start_col,
                            message: "unterminated quoted name".into(),
                        })
                    }
                    Some('\'') => {
                        bump(&mut chars);
                        if chars.peek().is_some_and(|&(_, c)| c == '\'') {
                            s.push(bump(&mut chars));
                        } else {
                            break;
                        }
                    }
                    Some(_) => s.push(bump(&mut chars)),
                }
            }
            out.push(Token { tok: Tok::Quoted(s), line: start_line, column: start_col });
        } else if let Some(sym) = SYMBOLS.iter().find(|s| src[i..].starts_with(**s)) {
            for _ in 0..sym.len() {
                bump(&mut chars);
            }
            out.push(Token { tok: Tok::Sym(sym), line: start_line, column: start_col });
        } else {
            return Err(Error::Parse {
                line: start_line,
                column: start_col,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    out.push(Token { tok: Tok::Eof, line, column: col });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        tokenize(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn words_symbols_and_comments() {
        assert_eq!(
            toks("c0 <= c1 # trailing\n-> 'it''s'"),
            vec![
                Tok::Word("c0".into()),
                Tok::Sym("<="),
                Tok::Word("c1".into()),
                Tok::Sym("->"),
                Tok::Quoted("it's".into()),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn positions() {
        let t = tokenize("a\n  b").unwrap();
        assert_eq!((t[1].line, t[1].column), (2, 3));
        let err = tokenize("a\n ?").unwrap_err();
        assert_eq!(err, Error::Parse { line: 2, column: 2, message: "unexpected character `?`".into() });
        assert!(matches!(tokenize("'open"), Err(Error::Parse { line: 1, column: 1, .. })));
    }
}
