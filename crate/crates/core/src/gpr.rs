//! Gene-protein-reaction rules: boolean expressions over gene identifiers.
//!
//! `and` means all subunits of a complex are required, `or` means isozymes
//! substitute for each other. A reaction with no rule is always active.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// Boolean expression over gene ids. `and` binds tighter than `or`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GprExpression {
    Gene(String),
    And(Vec<GprExpression>),
    Or(Vec<GprExpression>),
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("gene rule parse error at byte {position}: {message}")]
pub struct GprParseError {
    pub position: usize,
    pub message: String,
}

impl GprExpression {
    /// True when the reaction can still be catalysed after removing
    /// `deleted` from the genome.
    pub fn is_active(&self, deleted: &BTreeSet<String>) -> bool {
        self.eval(&|g| !deleted.contains(g))
    }

    /// Evaluate against a gene-presence predicate.
    pub fn eval(&self, present: &impl Fn(&str) -> bool) -> bool {
        match self {
            GprExpression::Gene(g) => present(g),
            GprExpression::And(parts) => parts.iter().all(|p| p.eval(present)),
            GprExpression::Or(parts) => parts.iter().any(|p| p.eval(present)),
        }
    }

    /// All gene ids mentioned by the rule, deduplicated.
    pub fn genes(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_genes(&mut out);
        out
    }

    fn collect_genes<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            GprExpression::Gene(g) => {
                out.insert(g.as_str());
            }
            GprExpression::And(parts) | GprExpression::Or(parts) => {
                for p in parts {
                    p.collect_genes(out);
                }
            }
        }
    }
}

impl fmt::Display for GprExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GprExpression::Gene(g) => write!(f, "{g}"),
            GprExpression::And(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " and ")?;
                    }
                    // or-groups must be bracketed inside an and-chain
                    if matches!(p, GprExpression::Or(_)) {
                        write!(f, "({p})")?;
                    } else {
                        write!(f, "{p}")?;
                    }
                }
                Ok(())
            }
            GprExpression::Or(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " or ")?;
                    }
                    write!(f, "{p}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, PartialEq)]
enum Token {
    Ident(String),
    And,
    Or,
    LParen,
    RParen,
}

fn tokenize(input: &str) -> Result<Vec<(usize, Token)>, GprParseError> {
    let mut tokens = Vec::new();
    let bytes = input.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'(' => {
                tokens.push((i, Token::LParen));
                i += 1;
            }
            b')' => {
                tokens.push((i, Token::RParen));
                i += 1;
            }
            _ if b.is_ascii_alphanumeric() || b == b'_' || b == b'.' || b == b'-' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric()
                        || bytes[i] == b'_'
                        || bytes[i] == b'.'
                        || bytes[i] == b'-')
                {
                    i += 1;
                }
                let word = &input[start..i];
                let tok = if word.eq_ignore_ascii_case("and") {
                    Token::And
                } else if word.eq_ignore_ascii_case("or") {
                    Token::Or
                } else {
                    Token::Ident(word.to_string())
                };
                tokens.push((start, tok));
            }
            _ => {
                return Err(GprParseError {
                    position: i,
                    message: format!("unexpected character {:?}", b as char),
                })
            }
        }
    }
    Ok(tokens)
}

struct Parser<'a> {
    tokens: &'a [(usize, Token)],
    pos: usize,
    input_len: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|(p, _)| *p)
            .unwrap_or(self.input_len)
    }

    fn or_expr(&mut self) -> Result<GprExpression, GprParseError> {
        let mut parts = vec![self.and_expr()?];
        while matches!(self.peek(), Some(Token::Or)) {
            self.pos += 1;
            parts.push(self.and_expr()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            GprExpression::Or(parts)
        })
    }

    fn and_expr(&mut self) -> Result<GprExpression, GprParseError> {
        let mut parts = vec![self.atom()?];
        while matches!(self.peek(), Some(Token::And)) {
            self.pos += 1;
            parts.push(self.atom()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            GprExpression::And(parts)
        })
    }

    fn atom(&mut self) -> Result<GprExpression, GprParseError> {
        match self.peek() {
            Some(Token::Ident(_)) => {
                let Some((_, Token::Ident(name))) = self.tokens.get(self.pos) else {
                    unreachable!()
                };
                self.pos += 1;
                Ok(GprExpression::Gene(name.clone()))
            }
            Some(Token::LParen) => {
                self.pos += 1;
                let inner = self.or_expr()?;
                if !matches!(self.peek(), Some(Token::RParen)) {
                    return Err(GprParseError {
                        position: self.here(),
                        message: "expected ')'".to_string(),
                    });
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(tok) => Err(GprParseError {
                position: self.here(),
                message: format!("expected gene id or '(', found {tok:?}"),
            }),
            None => Err(GprParseError {
                position: self.here(),
                message: "unexpected end of rule".to_string(),
            }),
        }
    }
}

/// Parse a gene-reaction rule. Blank rules mean "no gene requirement" and
/// come back as `None`.
pub fn parse_gpr(input: &str) -> Result<Option<GprExpression>, GprParseError> {
    if input.trim().is_empty() {
        return Ok(None);
    }
    let tokens = tokenize(input)?;
    let mut parser = Parser {
        tokens: &tokens,
        pos: 0,
        input_len: input.len(),
    };
    let expr = parser.or_expr()?;
    if parser.pos != tokens.len() {
        return Err(GprParseError {
            position: parser.here(),
            message: "trailing input after expression".to_string(),
        });
    }
    Ok(Some(expr))
}
