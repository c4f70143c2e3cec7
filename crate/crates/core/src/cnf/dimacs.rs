//! DIMACS CNF reading and writing.
//!
//! Writer output is bit-exact: header `p cnf <vars> <clauses>`, one clause
//! per line, literals space separated and terminated by `0`. The reader
//! accepts comments (`c ...`), blank lines, `%`/`0` trailer lines as emitted
//! by some generators, and clauses spanning multiple lines.

use super::CnfFormula;
use crate::{Error, Result};
use std::io::{BufRead, Write};

pub fn write_dimacs(f: &CnfFormula, w: &mut impl Write) -> std::io::Result<()> {
    writeln!(w, "p cnf {} {}", f.var_count(), f.clauses().len())?;
    for clause in f.clauses() {
        for lit in clause {
            write!(w, "{} ", lit)?;
        }
        writeln!(w, "0")?;
    }
    Ok(())
}

pub fn dimacs_string(f: &CnfFormula) -> String {
    let mut buf = Vec::new();
    write_dimacs(f, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("DIMACS output is ASCII")
}

pub fn read_dimacs(r: impl BufRead) -> Result<CnfFormula> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Vec<i32>> = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    let mut open_clause_line = 0usize;

    for (idx, line) in r.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') || trimmed.starts_with('%') {
            continue;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(Error::Parse {
                    line: lineno,
                    msg: "duplicate header".into(),
                });
            }
            let mut toks = trimmed.split_whitespace();
            toks.next(); // "p"
            if toks.next() != Some("cnf") {
                return Err(Error::Parse {
                    line: lineno,
                    msg: "header must be 'p cnf <vars> <clauses>'".into(),
                });
            }
            let vars = parse_usize(toks.next(), lineno, "variable count")?;
            let count = parse_usize(toks.next(), lineno, "clause count")?;
            if toks.next().is_some() {
                return Err(Error::Parse {
                    line: lineno,
                    msg: "trailing tokens in header".into(),
                });
            }
            header = Some((vars, count));
            continue;
        }
        let (vars, _) = header.ok_or(Error::Parse {
            line: lineno,
            msg: "clause before header".into(),
        })?;
        for tok in trimmed.split_whitespace() {
            let lit: i32 = tok.parse().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("bad literal {:?}", tok),
            })?;
            if lit == 0 {
                if current.is_empty() {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: "empty clause".into(),
                    });
                }
                clauses.push(std::mem::take(&mut current));
            } else {
                if lit.unsigned_abs() as usize > vars {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: format!("literal {} exceeds declared variable count {}", lit, vars),
                    });
                }
                if current.is_empty() {
                    open_clause_line = lineno;
                }
                current.push(lit);
            }
        }
    }

    if !current.is_empty() {
        return Err(Error::Parse {
            line: open_clause_line,
            msg: "clause missing terminating 0".into(),
        });
    }
    let (vars, declared) = header.ok_or(Error::Parse {
        line: 1,
        msg: "missing 'p cnf' header".into(),
    })?;
    if clauses.len() != declared {
        return Err(Error::Parse {
            line: open_clause_line.max(1),
            msg: format!("header declares {} clauses, found {}", declared, clauses.len()),
        });
    }
    CnfFormula::new(vars, clauses)
}

pub fn read_dimacs_str(s: &str) -> Result<CnfFormula> {
    read_dimacs(s.as_bytes())
}

fn parse_usize(tok: Option<&str>, line: usize, what: &str) -> Result<usize> {
    tok.ok_or(Error::Parse {
        line,
        msg: format!("missing {}", what),
    })?
    .parse()
    .map_err(|_| Error::Parse {
        line,
        msg: format!("bad {}", what),
    })
}
