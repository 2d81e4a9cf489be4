use super::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    VarId(String),
    ConId(String),
    Class,
    Instance,
    Where,
    Let,
    In,
    Forall,
    True,
    False,
    Bool,
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Semi,
    Comma,
    Dot,
    Colon,
    DoubleColon,
    Equals,
    FatArrow,
    Arrow,
    Backslash,
    BigLambda,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::VarId(s) | Tok::ConId(s) => format!("`{s}`"),
            Tok::Eof => "end of input".into(),
            other => format!("`{}`", other.symbol()),
        }
    }

    pub fn symbol(&self) -> &'static str {
        match self {
            Tok::VarId(_) => "identifier",
            Tok::ConId(_) => "constructor",
            Tok::Class => "class",
            Tok::Instance => "instance",
            Tok::Where => "where",
            Tok::Let => "let",
            Tok::In => "in",
            Tok::Forall => "forall",
            Tok::True => "True",
            Tok::False => "False",
            Tok::Bool => "Bool",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::Semi => ";",
            Tok::Comma => ",",
            Tok::Dot => ".",
            Tok::Colon => ":",
            Tok::DoubleColon => "::",
            Tok::Equals => "=",
            Tok::FatArrow => "=>",
            Tok::Arrow => "->",
            Tok::Backslash => "\\",
            Tok::BigLambda => "/\\",
            Tok::Eof => "end of input",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

fn ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_' || c == '$'
}

fn ident_continue(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\'' || c == '$'
}

pub fn lex(input: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = input.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'-') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let (start_line, start_col) = (line, col);
        let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
        let sym = match two.as_str() {
            "::" => Some(Tok::DoubleColon),
            "=>" => Some(Tok::FatArrow),
            "->" => Some(Tok::Arrow),
            "/\\" => Some(Tok::BigLambda),
            _ => None,
        };
        if let Some(tok) = sym {
            out.push(Token { tok, line: start_line, column: start_col });
            i += 2;
            col += 2;
            continue;
        }
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            ';' => Some(Tok::Semi),
            ',' => Some(Tok::Comma),
            '.' => Some(Tok::Dot),
            ':' => Some(Tok::Colon),
            '=' => Some(Tok::Equals),
            '\\' => Some(Tok::Backslash),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Token { tok, line: start_line, column: start_col });
            i += 1;
            col += 1;
            continue;
        }
        if ident_start(c) {
            let begin = i;
            while i < chars.len() && ident_continue(chars[i]) {
                i += 1;
            }
            col += i - begin;
            let word: String = chars[begin..i].iter().collect();
            let tok = match word.as_str() {
                "class" => Tok::Class,
                "instance" => Tok::Instance,
                "where" => Tok::Where,
                "let" => Tok::Let,
                "in" => Tok::In,
                "forall" => Tok::Forall,
                "True" => Tok::True,
                "False" => Tok::False,
                "Bool" => Tok::Bool,
                _ if c.is_uppercase() => Tok::ConId(word),
                _ => Tok::VarId(word),
            };
            out.push(Token { tok, line: start_line, column: start_col });
            continue;
        }
        return Err(ParseError {
            line: start_line,
            column: start_col,
            message: format!("unexpected character `{c}`"),
            expected: Vec::new(),
        });
    }
    out.push(Token { tok: Tok::Eof, line, column: col });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        lex(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn symbols_and_words() {
        assert_eq!(
            toks("\\x. (x :: Bool -> a) -- trailing"),
            vec![
                Tok::Backslash,
                Tok::VarId("x".into()),
                Tok::Dot,
                Tok::LParen,
                Tok::VarId("x".into()),
                Tok::DoubleColon,
                Tok::Bool,
                Tok::Arrow,
                Tok::VarId("a".into()),
                Tok::RParen,
                Tok::Eof
            ]
        );
    }

    #[test]
    fn reserved_identifier_shapes() {
        assert_eq!(
            toks("$d_δ1 δrefl1 a' D1_Eq /\\"),
            vec![
                Tok::VarId("$d_δ1".into()),
                Tok::VarId("δrefl1".into()),
                Tok::VarId("a'".into()),
                Tok::ConId("D1_Eq".into()),
                Tok::BigLambda,
                Tok::Eof
            ]
        );
    }

    #[test]
    fn positions() {
        let t = lex("True\n  x").unwrap();
        assert_eq!((t[1].line, t[1].column), (2, 3));
        let err = lex("x # y").unwrap_err();
        assert_eq!((err.line, err.column), (1, 3));
    }
}
