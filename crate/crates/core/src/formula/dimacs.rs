//! DIMACS CNF reader and writer.
//!
//! Beyond the standard format, two comment extensions carry per-variable
//! annotations and survive a round trip:
//!
//! ```text
//! c feature time <var> <float>
//! c feature coord <var> <row> <col>
//! ```
//!
//! Annotation lines are emitted before the `p cnf` header and accepted
//! anywhere.

use super::{CnfFormula, Literal, Var};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Error, PartialEq)]
pub enum ParseErrorKind {
    #[error("malformed header (expected `p cnf <vars> <clauses>`)")]
    MalformedHeader,
    #[error("duplicate header")]
    DuplicateHeader,
    #[error("missing `p cnf` header")]
    MissingHeader,
    #[error("clause before header")]
    ClauseBeforeHeader,
    #[error("non-numeric token `{0}` in clause")]
    BadToken(String),
    #[error("literal {lit} out of range (formula has {num_vars} variables)")]
    LiteralOutOfRange { lit: i64, num_vars: u32 },
    #[error("empty clause")]
    EmptyClause,
    #[error("unterminated clause at end of input")]
    UnterminatedClause,
    #[error("malformed feature comment (expected `c feature time <var> <float>` or `c feature coord <var> <row> <col>`)")]
    BadFeature,
    #[error("feature annotation for variable {var} out of range (formula has {num_vars} variables)")]
    FeatureVarOutOfRange { var: Var, num_vars: u32 },
}

fn err<T>(line: usize, kind: ParseErrorKind) -> Result<T, ParseError> {
    Err(ParseError { line, kind })
}

enum Feature {
    Time(Var, f64),
    Coord(Var, u32, u32),
}

fn parse_feature(line_no: usize, toks: &[&str]) -> Result<Feature, ParseError> {
    let bad = || ParseError {
        line: line_no,
        kind: ParseErrorKind::BadFeature,
    };
    match toks {
        ["time", var, value] => {
            let var: Var = var.parse().map_err(|_| bad())?;
            let value: f64 = value.parse().map_err(|_| bad())?;
            if var == 0 {
                return Err(bad());
            }
            Ok(Feature::Time(var, value))
        }
        ["coord", var, row, col] => {
            let var: Var = var.parse().map_err(|_| bad())?;
            let row: u32 = row.parse().map_err(|_| bad())?;
            let col: u32 = col.parse().map_err(|_| bad())?;
            if var == 0 {
                return Err(bad());
            }
            Ok(Feature::Coord(var, row, col))
        }
        _ => Err(bad()),
    }
}

pub fn parse_dimacs(input: &str) -> Result<CnfFormula, ParseError> {
    let mut header: Option<u32> = None;
    let mut clauses: Vec<Vec<Literal>> = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    let mut features: Vec<(usize, Feature)> = Vec::new();
    let mut last_body_line = 0usize;

    for (i, line) in input.lines().enumerate() {
        let line_no = i + 1;
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.first() {
            None => continue,
            Some(&"c") => {
                if toks.get(1) == Some(&"feature") {
                    features.push((line_no, parse_feature(line_no, &toks[2..])?));
                }
            }
            Some(&"p") => {
                if header.is_some() {
                    return err(line_no, ParseErrorKind::DuplicateHeader);
                }
                let (nv, nc) = match toks.as_slice() {
                    ["p", "cnf", nv, nc] => (nv.parse::<u32>(), nc.parse::<u64>()),
                    _ => return err(line_no, ParseErrorKind::MalformedHeader),
                };
                match (nv, nc) {
                    (Ok(nv), Ok(_)) => header = Some(nv),
                    _ => return err(line_no, ParseErrorKind::MalformedHeader),
                }
            }
            Some(_) => {
                let Some(num_vars) = header else {
                    return err(line_no, ParseErrorKind::ClauseBeforeHeader);
                };
                last_body_line = line_no;
                for tok in &toks {
                    let lit: i64 = tok
                        .parse()
                        .map_err(|_| ParseError {
                            line: line_no,
                            kind: ParseErrorKind::BadToken(tok.to_string()),
                        })?;
                    if lit == 0 {
                        if current.is_empty() {
                            return err(line_no, ParseErrorKind::EmptyClause);
                        }
                        clauses.push(std::mem::take(&mut current));
                    } else {
                        if lit.unsigned_abs() > u64::from(num_vars) {
                            return err(
                                line_no,
                                ParseErrorKind::LiteralOutOfRange {
                                    lit,
                                    num_vars,
                                },
                            );
                        }
                        current.push(Literal::from_dimacs(lit));
                    }
                }
            }
        }
    }

    let Some(num_vars) = header else {
        return err(input.lines().count().max(1), ParseErrorKind::MissingHeader);
    };
    if !current.is_empty() {
        return err(last_body_line, ParseErrorKind::UnterminatedClause);
    }

    let mut formula = CnfFormula::new(num_vars, clauses);
    for (line_no, feature) in features {
        let var = match feature {
            Feature::Time(var, _) | Feature::Coord(var, _, _) => var,
        };
        if var > num_vars {
            return err(line_no, ParseErrorKind::FeatureVarOutOfRange { var, num_vars });
        }
        match feature {
            Feature::Time(var, t) => formula.set_time(var, t),
            Feature::Coord(var, row, col) => formula.set_coord(var, row, col),
        }
    }
    Ok(formula)
}

/// Serializes a formula so that `parse_dimacs` reconstructs it exactly
/// (clause order, literal order within clauses, and annotations included).
pub fn serialize_dimacs(formula: &CnfFormula) -> String {
    let mut out = String::new();
    for var in 1..=formula.num_vars() {
        if let Some(t) = formula.time(var) {
            writeln!(out, "c feature time {var} {t}").unwrap();
        }
    }
    for var in 1..=formula.num_vars() {
        if let Some((row, col)) = formula.coord(var) {
            writeln!(out, "c feature coord {var} {row} {col}").unwrap();
        }
    }
    writeln!(out, "p cnf {} {}", formula.num_vars(), formula.num_clauses()).unwrap();
    for clause in formula.clauses() {
        for &lit in clause.literals() {
            write!(out, "{} ", lit.to_dimacs()).unwrap();
        }
        writeln!(out, "0").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_plain_file() {
        let f = parse_dimacs("p cnf 3 2\n1 -2 0\n2 3 0\n").unwrap();
        assert_eq!(f.num_vars(), 3);
        assert_eq!(f.num_clauses(), 2);
        assert_eq!(
            f.clause(0).literals(),
            &[Literal::positive(1), Literal::negative(2)]
        );
    }

    #[test]
    fn normalizes_tautologies_away() {
        let f = parse_dimacs("p cnf 2 2\n1 -1 0\n1 2 0\n").unwrap();
        assert_eq!(f.num_clauses(), 1);
        assert_eq!(
            f.clause(0).literals(),
            &[Literal::positive(1), Literal::positive(2)]
        );
    }

    #[test]
    fn reads_feature_annotations() {
        let f = parse_dimacs("c feature time 3 0.5\np cnf 3 1\n1 2 3 0\n").unwrap();
        assert_eq!(f.time(3), Some(0.5));
        assert_eq!(f.time(1), None);
    }

    #[test]
    fn reads_coord_annotations_and_multiline_clauses() {
        let f = parse_dimacs("p cnf 4 1\nc feature coord 2 1 0\n1 2\n3 4 0\n").unwrap();
        assert_eq!(f.coord(2), Some((1, 0)));
        assert_eq!(f.clause(0).len(), 4);
    }

    #[test]
    fn rejects_malformed_header() {
        let e = parse_dimacs("p cnf x\n").unwrap_err();
        assert_eq!(e.line, 1);
        assert_eq!(e.kind, ParseErrorKind::MalformedHeader);
    }

    #[test]
    fn rejects_out_of_range_literal() {
        let e = parse_dimacs("p cnf 2 1\n1 3 0\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert_eq!(
            e.kind,
            ParseErrorKind::LiteralOutOfRange { lit: 3, num_vars: 2 }
        );
    }

    #[test]
    fn rejects_non_numeric_token() {
        let e = parse_dimacs("p cnf 2 1\n1 two 0\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert_eq!(e.kind, ParseErrorKind::BadToken("two".into()));
    }

    #[test]
    fn rejects_empty_clause() {
        let e = parse_dimacs("p cnf 2 2\n1 0 0\n").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::EmptyClause);
    }

    #[test]
    fn rejects_unterminated_clause() {
        let e = parse_dimacs("p cnf 2 1\n1 2\n").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnterminatedClause);
        assert_eq!(e.line, 2);
    }

    #[test]
    fn rejects_out_of_range_feature_var() {
        let e = parse_dimacs("c feature time 9 0.5\np cnf 2 1\n1 2 0\n").unwrap_err();
        assert_eq!(e.line, 1);
        assert_eq!(
            e.kind,
            ParseErrorKind::FeatureVarOutOfRange { var: 9, num_vars: 2 }
        );
    }

    #[test]
    fn round_trip_preserves_structure_and_annotations() {
        let mut f = CnfFormula::new(
            5,
            vec![
                vec![Literal::positive(1), Literal::negative(4)],
                vec![Literal::negative(1), Literal::negative(2)],
                vec![Literal::positive(3), Literal::positive(5)],
            ],
        );
        f.set_time(1, 0.0);
        f.set_time(2, 0.25);
        f.set_coord(1, 0, 0);
        f.set_coord(2, 0, 1);
        let text = serialize_dimacs(&f);
        let g = parse_dimacs(&text).unwrap();
        assert_eq!(f, g);
        // Annotations are emitted before the header.
        assert!(text.starts_with("c feature time 1 0\nc feature time 2 0.25\n"));
    }

    #[test]
    fn serializes_clauseless_formula() {
        let f = CnfFormula::new(3, Vec::<Vec<Literal>>::new());
        assert_eq!(serialize_dimacs(&f), "p cnf 3 0\n");
        assert_eq!(parse_dimacs("p cnf 3 0\n").unwrap(), f);
    }
}
