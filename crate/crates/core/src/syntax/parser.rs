//! Recursive-descent parser for the ASCII formula syntax.
//!
//! Precedence, loosest first: `->` (right), `|` (left), `&` (left),
//! `U`/`R` (right), then the prefix operators `! X WX F G`.
//! Identifiers match `[a-z][A-Za-z0-9_]*`; `#` starts a line comment.

use std::fmt;

use thiserror::Error;

use super::formula::Formula;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnknownOperator(String),
    UnbalancedParentheses,
    UnexpectedToken { found: String, expected: &'static str },
    UnexpectedEnd { expected: &'static str },
    Empty,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnknownOperator(op) => write!(f, "unknown operator `{op}`"),
            ParseErrorKind::UnbalancedParentheses => write!(f, "unbalanced parentheses"),
            ParseErrorKind::UnexpectedToken { found, expected } => {
                write!(f, "syntax error: found `{found}`, expected {expected}")
            }
            ParseErrorKind::UnexpectedEnd { expected } => {
                write!(f, "syntax error: unexpected end of input, expected {expected}")
            }
            ParseErrorKind::Empty => write!(f, "syntax error: no formula in input"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    True,
    False,
    Not,
    And,
    Or,
    Implies,
    Next,
    WeakNext,
    Eventually,
    Globally,
    Until,
    Release,
    LParen,
    RParen,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(name) => return write!(f, "{name}"),
            Tok::True => "true",
            Tok::False => "false",
            Tok::Not => "!",
            Tok::And => "&",
            Tok::Or => "|",
            Tok::Implies => "->",
            Tok::Next => "X",
            Tok::WeakNext => "WX",
            Tok::Eventually => "F",
            Tok::Globally => "G",
            Tok::Until => "U",
            Tok::Release => "R",
            Tok::LParen => "(",
            Tok::RParen => ")",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug)]
struct Pos {
    line: usize,
    column: usize,
}

impl Pos {
    fn err(self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: self.line,
            column: self.column,
            kind,
        }
    }
}

fn lex(text: &str) -> Result<(Vec<(Tok, Pos)>, Pos), ParseError> {
    let mut toks = Vec::new();
    let mut line = 1;
    let mut column = 1;
    let mut chars = text.chars().peekable();
    let mut depth: Vec<Pos> = Vec::new();

    while let Some(&c) = chars.peek() {
        let pos = Pos { line, column };
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars<'_>>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        if c == '#' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                bump(&mut chars);
            }
            continue;
        }
        if c.is_whitespace() {
            bump(&mut chars);
            continue;
        }
        if c.is_ascii_alphabetic() {
            let mut word = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    word.push(c);
                    bump(&mut chars);
                } else {
                    break;
                }
            }
            let tok = match word.as_str() {
                "true" => Tok::True,
                "false" => Tok::False,
                "X" => Tok::Next,
                "WX" => Tok::WeakNext,
                "F" => Tok::Eventually,
                "G" => Tok::Globally,
                "U" => Tok::Until,
                "R" => Tok::Release,
                _ if word.starts_with(|c: char| c.is_ascii_lowercase()) => Tok::Ident(word),
                _ => return Err(pos.err(ParseErrorKind::UnknownOperator(word))),
            };
            toks.push((tok, pos));
            continue;
        }
        bump(&mut chars);
        let tok = match c {
            '!' => Tok::Not,
            '&' => Tok::And,
            '|' => Tok::Or,
            '(' => {
                depth.push(pos);
                Tok::LParen
            }
            ')' => {
                if depth.pop().is_none() {
                    return Err(pos.err(ParseErrorKind::UnbalancedParentheses));
                }
                Tok::RParen
            }
            '-' if chars.peek() == Some(&'>') => {
                bump(&mut chars);
                Tok::Implies
            }
            _ => {
                let mut op = c.to_string();
                // Report multi-character operators like `<->` or `=>` whole.
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_punctuation() && !"()!&|#".contains(c) {
                        op.push(c);
                        bump(&mut chars);
                    } else {
                        break;
                    }
                }
                return Err(pos.err(ParseErrorKind::UnknownOperator(op)));
            }
        };
        toks.push((tok, pos));
    }
    if let Some(open) = depth.pop() {
        return Err(open.err(ParseErrorKind::UnbalancedParentheses));
    }
    Ok((toks, Pos { line, column }))
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    end: Pos,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        match self.toks.get(self.at) {
            Some((tok, pos)) => pos.err(ParseErrorKind::UnexpectedToken {
                found: tok.to_string(),
                expected,
            }),
            None => self.end.err(ParseErrorKind::UnexpectedEnd { expected }),
        }
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Implies) {
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while self.eat(&Tok::Or) {
            lhs = Formula::or(lhs, self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.temporal()?;
        while self.eat(&Tok::And) {
            lhs = Formula::and(lhs, self.temporal()?);
        }
        Ok(lhs)
    }

    fn temporal(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.unary()?;
        if self.eat(&Tok::Until) {
            return Ok(Formula::until(lhs, self.temporal()?));
        }
        if self.eat(&Tok::Release) {
            return Ok(Formula::release(lhs, self.temporal()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let wrap: fn(Formula) -> Formula = match self.peek() {
            Some(Tok::Not) => Formula::not,
            Some(Tok::Next) => Formula::next,
            Some(Tok::WeakNext) => Formula::weak_next,
            Some(Tok::Eventually) => Formula::eventually,
            Some(Tok::Globally) => Formula::globally,
            _ => return self.primary(),
        };
        self.at += 1;
        Ok(wrap(self.unary()?))
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        const EXPECTED: &str = "an atom, constant, prefix operator or `(`";
        let tok = match self.peek() {
            Some(t) => t.clone(),
            None => return Err(self.unexpected(EXPECTED)),
        };
        match tok {
            Tok::Ident(name) => {
                self.at += 1;
                Ok(Formula::Atom(name))
            }
            Tok::True => {
                self.at += 1;
                Ok(Formula::True)
            }
            Tok::False => {
                self.at += 1;
                Ok(Formula::False)
            }
            Tok::LParen => {
                self.at += 1;
                let inner = self.implication()?;
                if !self.eat(&Tok::RParen) {
                    return Err(self.unexpected("`)`"));
                }
                Ok(inner)
            }
            _ => Err(self.unexpected(EXPECTED)),
        }
    }
}

/// Parses a single formula. Whitespace and `#` comments are ignored.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let (toks, end) = lex(text)?;
    if toks.is_empty() {
        return Err(end.err(ParseErrorKind::Empty));
    }
    let mut parser = Parser { toks, at: 0, end };
    let f = parser.implication()?;
    if parser.at < parser.toks.len() {
        return Err(parser.unexpected("an operator or end of input"));
    }
    Ok(f)
}

/// Parses a conjunct-per-line file. Blank and comment-only lines are skipped;
/// error positions refer to the whole file.
pub fn parse_conjunct_lines(text: &str) -> Result<Vec<Formula>, ParseError> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let content = line.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let f = parse(content).map_err(|mut e| {
            e.line += idx;
            e
        })?;
        out.push(f);
    }
    if out.is_empty() {
        return Err(Pos { line: 1, column: 1 }.err(ParseErrorKind::Empty));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom(s: &str) -> Formula {
        Formula::atom(s)
    }

    #[test]
    fn running_example() {
        let f = parse("(a & !b) & (c U b)").unwrap();
        assert_eq!(
            f,
            Formula::and(
                Formula::and(atom("a"), Formula::not(atom("b"))),
                Formula::until(atom("c"), atom("b"))
            )
        );
    }

    #[test]
    fn constants() {
        assert_eq!(parse("true").unwrap(), Formula::True);
        assert_eq!(parse("  false # trailing").unwrap(), Formula::False);
    }

    #[test]
    fn sugar_before_desugaring() {
        let f = parse("F(a) -> G(b)").unwrap();
        assert_eq!(
            f,
            Formula::implies(Formula::eventually(atom("a")), Formula::globally(atom("b")))
        );
    }

    #[test]
    fn precedence() {
        // unary > U/R > & > | > ->
        assert_eq!(
            parse("!a U b & c | d -> e").unwrap(),
            Formula::implies(
                Formula::or(
                    Formula::and(Formula::until(Formula::not(atom("a")), atom("b")), atom("c")),
                    atom("d")
                ),
                atom("e")
            )
        );
        assert_eq!(
            parse("a U b R c").unwrap(),
            Formula::until(atom("a"), Formula::release(atom("b"), atom("c")))
        );
        assert_eq!(
            parse("a -> b -> c").unwrap(),
            Formula::implies(atom("a"), Formula::implies(atom("b"), atom("c")))
        );
        assert_eq!(
            parse("a & b & c").unwrap(),
            Formula::and(Formula::and(atom("a"), atom("b")), atom("c"))
        );
        assert_eq!(
            parse("X X X X X b & X X X X X !b").unwrap(),
            Formula::and(
                Formula::next_n(5, atom("b")),
                Formula::next_n(5, Formula::not(atom("b")))
            )
        );
        assert_eq!(parse("WX a_1").unwrap(), Formula::weak_next(atom("a_1")));
    }

    #[test]
    fn unknown_operator_has_position() {
        let err = parse("a &\n  b <-> c").unwrap_err();
        assert_eq!((err.line, err.column), (2, 5));
        assert_eq!(err.kind, ParseErrorKind::UnknownOperator("<->".into()));

        let err = parse("Y a").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnknownOperator("Y".into()));
        let err = parse("Xa").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnknownOperator("Xa".into()));
    }

    #[test]
    fn unbalanced() {
        let err = parse("(a & b").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnbalancedParentheses);
        assert_eq!((err.line, err.column), (1, 1));
        let err = parse("a & b)").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnbalancedParentheses);
        assert_eq!((err.line, err.column), (1, 6));
    }

    #[test]
    fn syntax_errors() {
        assert!(matches!(
            parse("a &").unwrap_err().kind,
            ParseErrorKind::UnexpectedEnd { .. }
        ));
        assert!(matches!(
            parse("a b").unwrap_err().kind,
            ParseErrorKind::UnexpectedToken { .. }
        ));
        assert_eq!(parse("# nothing\n").unwrap_err().kind, ParseErrorKind::Empty);
    }

    #[test]
    fn conjunct_lines() {
        let text = "# header\na & b\n\nX c # tail\n";
        let fs = parse_conjunct_lines(text).unwrap();
        assert_eq!(
            fs,
            vec![Formula::and(atom("a"), atom("b")), Formula::next(atom("c"))]
        );
        let err = parse_conjunct_lines("a\n\nb &").unwrap_err();
        assert_eq!(err.line, 3);
    }
}
