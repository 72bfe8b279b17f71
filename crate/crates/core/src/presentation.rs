//! A small language for naming groups.
//!
//! ```text
//! spec    := product ;
//! product := term { "x" term } ;
//! term    := atom [ "x|" atom "[" action "]" ] ;
//! atom    := "Z" INT | "D" INT | "Q" INT | "A" INT | "S" INT
//!          | "PSL(2," INT ")" | "(" spec ")" ;
//! action  := INT { "," INT } ;
//! ```
//!
//! `D` and `Q` take the group ORDER. The action in `K x| Q [..]` is the image
//! of a generator of the cyclic group `Q`: for a product of cyclic groups one
//! unit per factor, for a dihedral group of order >= 6 the affine pair
//! `t, s` (see [`DihedralAut`]). `×` and `⋊` are accepted for `x` and `x|`.

use std::fmt;

use thiserror::Error;

use crate::arith::gcd;
use crate::aut::{Automorphism, DihedralAut};
use crate::error::GroupError;
use crate::families::{build_family, direct_product, semidirect_product, ActionSpec};
use crate::group::{Family, Group};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    Cyclic(usize),
    /// Parameter is the order.
    Dihedral(usize),
    /// Parameter is the order.
    Quaternion(usize),
    Alternating(usize),
    Symmetric(usize),
    Psl2(usize),
    Direct(Box<GroupSpec>, Box<GroupSpec>),
    Semidirect {
        kernel: Box<GroupSpec>,
        quotient: Box<GroupSpec>,
        action: Vec<i64>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("syntax error at column {column}: expected {}, found {found}", expected.join(" or "))]
    Syntax {
        /// 1-based character column.
        column: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error(transparent)]
    Semantic(#[from] GroupError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Atom(char),
    Psl,
    Int(u64),
    Times,
    Semi,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Minus,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Atom(c) => write!(f, "'{c}'"),
            Tok::Psl => f.write_str("'PSL'"),
            Tok::Int(n) => write!(f, "integer {n}"),
            Tok::Times => f.write_str("'x'"),
            Tok::Semi => f.write_str("'x|'"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::LBracket => f.write_str("'['"),
            Tok::RBracket => f.write_str("']'"),
            Tok::Comma => f.write_str("','"),
            Tok::Minus => f.write_str("'-'"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn syntax(column: usize, expected: &[&str], found: impl fmt::Display) -> PresentationError {
    PresentationError::Syntax {
        column,
        expected: expected.iter().map(|s| s.to_string()).collect(),
        found: found.to_string(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, PresentationError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            'Z' | 'D' | 'Q' | 'A' | 'S' => out.push((Tok::Atom(c), col)),
            'P' => {
                if chars[i..].starts_with(&['P', 'S', 'L']) {
                    out.push((Tok::Psl, col));
                    i += 3;
                    continue;
                }
                return Err(syntax(
                    col,
                    &["'PSL'"],
                    format!("'{}'", chars[i..].iter().take(3).collect::<String>()),
                ));
            }
            'x' | '×' => {
                if c == 'x' && chars.get(i + 1) == Some(&'|') {
                    out.push((Tok::Semi, col));
                    i += 2;
                    continue;
                }
                out.push((Tok::Times, col));
            }
            '⋊' => out.push((Tok::Semi, col)),
            '(' => out.push((Tok::LParen, col)),
            ')' => out.push((Tok::RParen, col)),
            '[' => out.push((Tok::LBracket, col)),
            ']' => out.push((Tok::RBracket, col)),
            ',' => out.push((Tok::Comma, col)),
            '-' => out.push((Tok::Minus, col)),
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                let n = digits
                    .parse::<u64>()
                    .map_err(|_| syntax(col, &["integer below 2^64"], &digits))?;
                out.push((Tok::Int(n), col));
                continue;
            }
            other => {
                return Err(syntax(
                    col,
                    &["group atom", "operator", "bracket"],
                    format!("'{other}'"),
                ))
            }
        }
        i += 1;
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn column(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, name: &str) -> Result<(), PresentationError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(syntax(self.column(), &[name], self.peek()))
        }
    }

    fn int(&mut self) -> Result<usize, PresentationError> {
        match *self.peek() {
            Tok::Int(n) => {
                let col = self.column();
                self.bump();
                usize::try_from(n).map_err(|_| syntax(col, &["smaller integer"], n))
            }
            _ => Err(syntax(self.column(), &["integer"], self.peek())),
        }
    }

    fn signed(&mut self) -> Result<i64, PresentationError> {
        let negative = *self.peek() == Tok::Minus;
        if negative {
            self.bump();
        }
        match *self.peek() {
            Tok::Int(n) => {
                let col = self.column();
                self.bump();
                let v = i64::try_from(n).map_err(|_| syntax(col, &["smaller integer"], n))?;
                Ok(if negative { -v } else { v })
            }
            _ => Err(syntax(self.column(), &["integer"], self.peek())),
        }
    }

    fn product(&mut self) -> Result<GroupSpec, PresentationError> {
        let mut left = self.term()?;
        while *self.peek() == Tok::Times {
            self.bump();
            let right = self.term()?;
            left = GroupSpec::Direct(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn term(&mut self) -> Result<GroupSpec, PresentationError> {
        let kernel = self.atom()?;
        if *self.peek() != Tok::Semi {
            return Ok(kernel);
        }
        self.bump();
        let quotient = self.atom()?;
        self.expect(Tok::LBracket, "'['")?;
        let mut action = vec![self.signed()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            action.push(self.signed()?);
        }
        self.expect(Tok::RBracket, "']' or ','")?;
        Ok(GroupSpec::Semidirect {
            kernel: Box::new(kernel),
            quotient: Box::new(quotient),
            action,
        })
    }

    fn atom(&mut self) -> Result<GroupSpec, PresentationError> {
        match self.peek().clone() {
            Tok::Atom(c) => {
                self.bump();
                let n = self.int()?;
                Ok(match c {
                    'Z' => GroupSpec::Cyclic(n),
                    'D' => GroupSpec::Dihedral(n),
                    'Q' => GroupSpec::Quaternion(n),
                    'A' => GroupSpec::Alternating(n),
                    _ => GroupSpec::Symmetric(n),
                })
            }
            Tok::Psl => {
                self.bump();
                self.expect(Tok::LParen, "'('")?;
                if *self.peek() != Tok::Int(2) {
                    return Err(syntax(self.column(), &["2"], self.peek()));
                }
                self.bump();
                self.expect(Tok::Comma, "','")?;
                let p = self.int()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(GroupSpec::Psl2(p))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.product()?;
                self.expect(Tok::RParen, "')' or 'x'")?;
                Ok(inner)
            }
            other => Err(syntax(
                self.column(),
                &["'Z'", "'D'", "'Q'", "'A'", "'S'", "'PSL'", "'('"],
                other,
            )),
        }
    }
}

pub fn parse_presentation(text: &str) -> Result<GroupSpec, PresentationError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let spec = p.product()?;
    if *p.peek() != Tok::End {
        return Err(syntax(p.column(), &["'x'", "'x|'", "end of input"], p.peek()));
    }
    Ok(spec)
}

impl std::str::FromStr for GroupSpec {
    type Err = PresentationError;

    fn from_str(s: &str) -> Result<GroupSpec, PresentationError> {
        parse_presentation(s)
    }
}

impl GroupSpec {
    fn is_atom(&self) -> bool {
        !matches!(self, GroupSpec::Direct(..) | GroupSpec::Semidirect { .. })
    }

    /// The family of an atom.
    pub fn family(&self) -> Option<Family> {
        Some(match *self {
            GroupSpec::Cyclic(n) => Family::Cyclic(n),
            GroupSpec::Dihedral(n) => Family::Dihedral(n),
            GroupSpec::Quaternion(n) => Family::Quaternion(n),
            GroupSpec::Alternating(n) => Family::Alternating(n),
            GroupSpec::Symmetric(n) => Family::Symmetric(n),
            GroupSpec::Psl2(p) => Family::Psl2(p),
            _ => return None,
        })
    }

    /// Orders of the factors when this is a direct product of cyclic atoms.
    pub fn cyclic_factors(&self) -> Option<Vec<usize>> {
        match self {
            GroupSpec::Cyclic(n) => Some(vec![*n]),
            GroupSpec::Direct(l, r) => {
                let mut f = l.cyclic_factors()?;
                f.extend(r.cyclic_factors()?);
                Some(f)
            }
            _ => None,
        }
    }

    pub fn build(&self, cap: usize) -> Result<Group, GroupError> {
        match self {
            GroupSpec::Direct(l, r) => {
                let (g, h) = (l.build(cap)?, r.build(cap)?);
                direct_product(&g, &h, cap)
            }
            GroupSpec::Semidirect {
                kernel,
                quotient,
                action,
            } => {
                let n = kernel.build(cap)?;
                let q = quotient.build(cap)?;
                if !q.is_cyclic() {
                    return Err(GroupError::InvalidAction(format!("quotient {quotient} is not cyclic")));
                }
                let image = action_automorphism(kernel, &n, action)?;
                let act = ActionSpec::new(&n, q.order(), image)?;
                semidirect_product(&n, &q, &act, cap)
            }
            atom => build_family(atom.family().expect("atoms have a family"), cap),
        }
    }
}

/// Interprets action integers for a kernel of the given shape.
pub fn action_automorphism(kernel: &GroupSpec, g: &Group, action: &[i64]) -> Result<Automorphism, GroupError> {
    if let Some(factors) = kernel.cyclic_factors() {
        if action.len() != factors.len() {
            return Err(GroupError::InvalidAction(format!(
                "{kernel} has {} cyclic factors but {} action values were given",
                factors.len(),
                action.len()
            )));
        }
        let units: Vec<usize> = factors
            .iter()
            .zip(action)
            .map(|(&n, &u)| {
                let r = u.rem_euclid(n as i64) as usize;
                if gcd(r, n) == 1 || n == 1 {
                    Ok(r)
                } else {
                    Err(GroupError::InvalidAction(format!("{u} is not a unit mod {n}")))
                }
            })
            .collect::<Result<_, _>>()?;
        // mixed radix, first factor most significant
        let map = (0..g.order())
            .map(|x| {
                let mut rest = x;
                let mut digits = vec![0usize; factors.len()];
                for i in (0..factors.len()).rev() {
                    digits[i] = rest % factors[i];
                    rest /= factors[i];
                }
                digits
                    .iter()
                    .zip(&factors)
                    .zip(&units)
                    .fold(0usize, |acc, ((&d, &n), &u)| acc * n + d * u % n) as u32
            })
            .collect();
        return Automorphism::from_map(g, map);
    }
    if let GroupSpec::Dihedral(order) = kernel {
        if *order >= 6 {
            if action.len() != 2 {
                return Err(GroupError::InvalidAction("a dihedral action is the pair t,s".into()));
            }
            return Ok(DihedralAut::new(order / 2, action[0], action[1])?.to_automorphism());
        }
    }
    Err(GroupError::InvalidAction(format!(
        "actions are supported on products of cyclic groups and dihedral groups of order >= 6, not {kernel}"
    )))
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrapped = |s: &GroupSpec| {
            if s.is_atom() {
                s.to_string()
            } else {
                format!("({s})")
            }
        };
        match self {
            GroupSpec::Cyclic(n) => write!(f, "Z{n}"),
            GroupSpec::Dihedral(n) => write!(f, "D{n}"),
            GroupSpec::Quaternion(n) => write!(f, "Q{n}"),
            GroupSpec::Alternating(n) => write!(f, "A{n}"),
            GroupSpec::Symmetric(n) => write!(f, "S{n}"),
            GroupSpec::Psl2(p) => write!(f, "PSL(2,{p})"),
            GroupSpec::Direct(l, r) => {
                let right = if matches!(**r, GroupSpec::Direct(..)) {
                    format!("({r})")
                } else {
                    r.to_string()
                };
                write!(f, "{l} x {right}")
            }
            GroupSpec::Semidirect {
                kernel,
                quotient,
                action,
            } => {
                let a: Vec<String> = action.iter().map(|x| x.to_string()).collect();
                write!(f, "{} x| {} [{}]", wrapped(kernel), wrapped(quotient), a.join(","))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::family;
    use crate::iso::is_isomorphic;

    fn build(s: &str) -> Group {
        parse_presentation(s).unwrap().build(2000).unwrap()
    }

    #[test]
    fn atoms_and_operators() {
        assert_eq!(build("Z6").order(), 6);
        let ga = build("Z5 x| Z4 [2]");
        assert_eq!(ga.order(), 20);
        assert!(!ga.is_abelian());
        assert!(build("Z5 x| Z4 [1]").is_cyclic());
        assert!(is_isomorphic(&build("Z7 x| Z2 [-1]"), &family(Family::Dihedral(14))));
        assert_eq!(build("PSL(2,7)").order(), 168);
        assert_eq!(build("Z2 x Z2 x Z2").order_profile()[&2], 7);
        assert_eq!(build("(Z3 x Z5) x| Z2 [1,-1]").order(), 30);
        assert_eq!(build("D8 x| Z2 [0,-1]").order(), 16);
        assert_eq!(build("Z3 × Z2").order(), 6);
        assert_eq!(build("Z3 ⋊ Z2 [2]").order(), 6);
    }

    #[test]
    fn display_round_trip() {
        for s in [
            "Z6",
            "D12 x Z2",
            "Z2 x (Z3 x Z5)",
            "(Z3 x Z5) x| Z2 [1,-1]",
            "PSL(2,5) x Z2",
            "Z5 x| Z4 [2] x Z3",
        ] {
            let spec = parse_presentation(s).unwrap();
            assert_eq!(parse_presentation(&spec.to_string()).unwrap(), spec, "{s}");
        }
    }

    #[test]
    fn positioned_syntax_errors() {
        let err = |s: &str| match parse_presentation(s) {
            Err(PresentationError::Syntax { column, .. }) => column,
            other => panic!("expected a syntax error for {s:?}, got {other:?}"),
        };
        assert_eq!(err(""), 1);
        assert_eq!(err("Z"), 2);
        assert_eq!(err("Z6 x"), 5);
        assert_eq!(err("Z6 Z6"), 4);
        assert_eq!(err("PSL(3,5)"), 5);
        assert_eq!(err("Z5 x| Z4 2"), 10);
        assert_eq!(err("(Z2"), 4);
        assert_eq!(err("Z2 $"), 4);
        assert_eq!(err("Z99999999999999999999999"), 2);
    }

    #[test]
    fn semantic_errors() {
        let sem = |s: &str| parse_presentation(s).unwrap().build(2000).unwrap_err();
        assert!(matches!(sem("Z5 x| Z4 [5]"), GroupError::InvalidAction(_)));
        assert!(matches!(sem("Z7 x| Z4 [2]"), GroupError::InvalidAction(_)));
        assert!(matches!(sem("Z5 x| S3 [2]"), GroupError::InvalidAction(_)));
        assert!(matches!(sem("A5 x| Z2 [1]"), GroupError::InvalidAction(_)));
        assert!(matches!(sem("D7"), GroupError::ParamOutOfRange(_)));
        assert!(matches!(sem("S6 x S6"), GroupError::CapExceeded { .. }));
    }
}
