//! Plain-text graph files.
//!
//! Line 1 is `n k`; the next `n` lines hold the full cell matrix, space
//! separated. `?` marks an unassigned cell in partial graphs. Files are
//! newline-terminated ASCII.

use super::{ColoredGraph, PartialColoredGraph};
use crate::{Error, Result};

impl ColoredGraph {
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.k);
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.at(i, j).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let (n, k, cells) = parse_matrix(text, false)?;
        let cells: Vec<u8> = cells.into_iter().map(|c| c.unwrap()).collect();
        ColoredGraph::from_cells(n, k, cells)
    }
}

impl PartialColoredGraph {
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.k);
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n)
                .map(|j| match self.cells[i * self.n + j] {
                    Some(c) => c.to_string(),
                    None => "?".to_string(),
                })
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let (n, k, cells) = parse_matrix(text, true)?;
        // Validate like ColoredGraph but allowing holes.
        for i in 0..n {
            if cells[i * n + i] != Some(0) {
                return Err(Error::invalid(
                    "partial graph",
                    format!("diagonal cell {} must be 0", i + 1),
                ));
            }
            for j in (i + 1)..n {
                let a = cells[i * n + j];
                if a != cells[j * n + i] {
                    return Err(Error::invalid(
                        "partial graph",
                        format!("asymmetric cell ({}, {})", i + 1, j + 1),
                    ));
                }
                if let Some(c) = a {
                    if c == 0 || c as usize > k {
                        return Err(Error::invalid(
                            "partial graph",
                            format!("cell ({}, {}) = {} outside 1..={}", i + 1, j + 1, c, k),
                        ));
                    }
                }
            }
        }
        Ok(PartialColoredGraph { n, k, cells })
    }
}

fn parse_matrix(text: &str, allow_holes: bool) -> Result<(usize, usize, Vec<Option<u8>>)> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty input".into(),
    })?;
    let mut hdr = header.split_whitespace();
    let n: usize = parse_tok(hdr.next(), 1, "vertex count")?;
    let k: usize = parse_tok(hdr.next(), 1, "color count")?;
    if hdr.next().is_some() {
        return Err(Error::Parse {
            line: 1,
            msg: "trailing tokens after header".into(),
        });
    }
    if n == 0 || k == 0 {
        return Err(Error::Parse {
            line: 1,
            msg: "n and k must be at least 1".into(),
        });
    }
    let mut cells: Vec<Option<u8>> = Vec::with_capacity(n * n);
    for row in 0..n {
        let (lineno, line) = lines.next().ok_or(Error::Parse {
            line: row + 2,
            msg: format!("expected {} matrix rows", n),
        })?;
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != n {
            return Err(Error::Parse {
                line: lineno + 1,
                msg: format!("expected {} cells, found {}", n, toks.len()),
            });
        }
        for t in toks {
            if t == "?" {
                if !allow_holes {
                    return Err(Error::Parse {
                        line: lineno + 1,
                        msg: "unassigned cell in a complete graph file".into(),
                    });
                }
                cells.push(None);
            } else {
                let v: u8 = t.parse().map_err(|_| Error::Parse {
                    line: lineno + 1,
                    msg: format!("bad cell value {:?}", t),
                })?;
                cells.push(Some(v));
            }
        }
    }
    for (lineno, rest) in lines {
        if !rest.trim().is_empty() {
            return Err(Error::Parse {
                line: lineno + 1,
                msg: "unexpected content after matrix".into(),
            });
        }
    }
    Ok((n, k, cells))
}

fn parse_tok(tok: Option<&str>, line: usize, what: &str) -> Result<usize> {
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

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_text_roundtrip() {
        let g = ColoredGraph::from_upper(4, 3, &[1, 2, 3, 1, 2, 3]).unwrap();
        let text = g.to_text();
        assert!(text.ends_with('\n'));
        assert_eq!(ColoredGraph::from_text(&text).unwrap(), g);
    }

    #[test]
    fn partial_text_roundtrip() {
        let mut p = PartialColoredGraph::unassigned(3, 2).unwrap();
        p.set(1, 3, 2).unwrap();
        let text = p.to_text();
        assert!(text.contains('?'));
        assert_eq!(PartialColoredGraph::from_text(&text).unwrap(), p);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = ColoredGraph::from_text("2 2\n0 1\n1\n").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected error {:?}", other),
        }
        assert!(ColoredGraph::from_text("2 2\n0 ?\n? 0\n").is_err());
    }
}
