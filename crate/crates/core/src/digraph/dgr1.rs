//! `DGR1` text format: a header line `dgr1 <n>` followed by one
//! `<tail> <head>` line per arc. ASCII decimal, single spaces, every line
//! newline-terminated, nothing else.

use thiserror::Error;

use super::{Digraph, DigraphError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Dgr1Error {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error(transparent)]
    Invalid(#[from] DigraphError),
}

impl Digraph {
    /// Serializes in `DGR1` format with arcs in sorted order.
    pub fn to_dgr1(&self) -> String {
        let mut s = format!("dgr1 {}\n", self.n());
        for &(t, h) in self.arcs() {
            s.push_str(&format!("{t} {h}\n"));
        }
        s
    }
}

fn decimal(tok: &str, line: usize) -> Result<usize, Dgr1Error> {
    if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Dgr1Error::Syntax { line, msg: format!("expected a decimal number, found {tok:?}") });
    }
    tok.parse().map_err(|_| Dgr1Error::Syntax { line, msg: format!("number {tok:?} out of range") })
}

/// Parses a `DGR1` document. Blank lines, comments, tabs and missing final
/// newlines are all rejected.
pub fn parse_dgr1(text: &str) -> Result<Digraph, Dgr1Error> {
    if !text.ends_with('\n') {
        return Err(Dgr1Error::Syntax { line: text.lines().count().max(1), msg: "missing final newline".into() });
    }
    let mut lines = text[..text.len() - 1].split('\n');
    let header = lines.next().unwrap_or_default();
    let n = match header.split(' ').collect::<Vec<_>>().as_slice() {
        ["dgr1", n] => decimal(n, 1)?,
        _ => return Err(Dgr1Error::Syntax { line: 1, msg: format!("expected header `dgr1 <n>`, found {header:?}") }),
    };
    let mut arcs = Vec::new();
    for (i, line) in lines.enumerate() {
        let lineno = i + 2;
        match line.split(' ').collect::<Vec<_>>().as_slice() {
            [t, h] => arcs.push((decimal(t, lineno)?, decimal(h, lineno)?)),
            _ => {
                return Err(Dgr1Error::Syntax {
                    line: lineno,
                    msg: format!("expected `<tail> <head>`, found {line:?}"),
                })
            }
        }
    }
    Ok(Digraph::new(n, &arcs)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_text() {
        let c3 = Digraph::cycle(3).unwrap();
        assert_eq!(c3.to_dgr1(), "dgr1 3\n0 1\n1 2\n2 0\n");
        assert_eq!(parse_dgr1("dgr1 3\n2 0\n0 1\n1 2\n").unwrap(), c3);
    }

    #[test]
    fn rejects_malformed() {
        for bad in [
            "dgr1 3\n0 1",
            "dgr1 3\n\n0 1\n",
            "DGR1 3\n",
            "dgr1  3\n",
            "dgr1 3\n0\t1\n",
            "dgr1 3\n0 1 # c\n",
            "dgr1 3\n-1 2\n",
            "dgr1 3\n+1 2\n",
            "",
        ] {
            assert!(parse_dgr1(bad).is_err(), "{bad:?} accepted");
        }
        assert_eq!(parse_dgr1("dgr1 2\n0 0\n"), Err(Dgr1Error::Invalid(DigraphError::LoopArc(0))));
        assert_eq!(parse_dgr1("dgr1 2\n0 1\n0 1\n"), Err(Dgr1Error::Invalid(DigraphError::DuplicateArc(0, 1))));
    }

    #[test]
    fn arcless_single_vertex() {
        let d = parse_dgr1("dgr1 1\n").unwrap();
        assert_eq!(d.n(), 1);
        assert_eq!(d.arc_count(), 0);
    }
}
