//! File formats: the sparse edge-list CSV for signed adjacency matrices
//! (`i,j,w` header, 0-indexed upper-triangle entries, `w` in `{-1,+1}`,
//! absent pairs are zero).

use std::io::{BufRead, Write};

use crate::blockmodel::SignedAdjacency;
use crate::error::{Error, Result};

pub const EDGE_LIST_HEADER: &str = "i,j,w";

/// Writes the nonzero upper-triangle entries as edge-list CSV.
pub fn write_edge_list<W: Write>(mut writer: W, adj: &SignedAdjacency) -> Result<()> {
    writeln!(writer, "{EDGE_LIST_HEADER}")?;
    for (i, j, v) in adj.iter_upper_nonzero() {
        writeln!(writer, "{i},{j},{v}")?;
    }
    Ok(())
}

/// Reads an edge-list CSV into an `n`-node matrix. The node count is not
/// part of the format, so the caller supplies it.
pub fn read_edge_list<R: BufRead>(reader: R, n: usize) -> Result<SignedAdjacency> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::InvalidParams(format!(
            "edge list needs an even node count >= 4, got {n}"
        )));
    }
    let mut lines = reader.lines();
    let header = lines.next().transpose()?.unwrap_or_default();
    if header.trim() != EDGE_LIST_HEADER {
        return Err(Error::Parse(format!(
            "missing edge-list header `{EDGE_LIST_HEADER}`"
        )));
    }
    let mut adj = SignedAdjacency::zeros(n);
    for (lineno, line) in lines.enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let mut parts = trimmed.split(',');
        let parse = |field: Option<&str>, what: &str| -> Result<i64> {
            field
                .ok_or_else(|| Error::Parse(format!("line {}: missing {what}", lineno + 2)))?
                .trim()
                .parse::<i64>()
                .map_err(|e| Error::Parse(format!("line {}: {what}: {e}", lineno + 2)))
        };
        let i = parse(parts.next(), "i")?;
        let j = parse(parts.next(), "j")?;
        let w = parse(parts.next(), "w")?;
        if parts.next().is_some() {
            return Err(Error::Parse(format!(
                "line {}: expected three fields",
                lineno + 2
            )));
        }
        if i < 0 || j < 0 || i as usize >= n || j as usize >= n {
            return Err(Error::Parse(format!(
                "line {}: node index out of range for n = {n}",
                lineno + 2
            )));
        }
        if i > j {
            return Err(Error::Parse(format!(
                "line {}: entries must be upper-triangle (i <= j)",
                lineno + 2
            )));
        }
        if w != 1 && w != -1 {
            return Err(Error::Parse(format!(
                "line {}: weight must be -1 or 1, got {w}",
                lineno + 2
            )));
        }
        adj.set_pair(i as usize, j as usize, w as i8);
    }
    Ok(adj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blockmodel::BlockParams;
    use std::io::BufReader;

    #[test]
    fn edge_list_round_trip() {
        for seed in [0u64, 1, 99] {
            let p = BlockParams::new(30, 0.4, 0.6, 0.7, 0.3)
                .unwrap()
                .with_seed(seed);
            let adj = p.generate();
            let mut buf = Vec::new();
            write_edge_list(&mut buf, &adj).unwrap();
            let back = read_edge_list(BufReader::new(&buf[..]), 30).unwrap();
            assert_eq!(adj, back);
        }
    }

    #[test]
    fn edge_list_round_trip_with_self_ties() {
        let p = BlockParams::new(20, 0.9, 0.9, 0.5, 0.5)
            .unwrap()
            .with_zero_diagonal(false)
            .with_seed(3);
        let adj = p.generate();
        let mut buf = Vec::new();
        write_edge_list(&mut buf, &adj).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("i,j,w\n"));
        let back = read_edge_list(BufReader::new(&buf[..]), 20).unwrap();
        assert_eq!(adj, back);
    }

    #[test]
    fn edge_list_rejects_malformed_input() {
        let no_header = "0,1,1\n";
        assert!(read_edge_list(BufReader::new(no_header.as_bytes()), 10).is_err());

        let bad_weight = "i,j,w\n0,1,2\n";
        assert!(read_edge_list(BufReader::new(bad_weight.as_bytes()), 10).is_err());

        let lower_triangle = "i,j,w\n3,1,1\n";
        assert!(read_edge_list(BufReader::new(lower_triangle.as_bytes()), 10).is_err());

        let out_of_range = "i,j,w\n0,10,1\n";
        assert!(read_edge_list(BufReader::new(out_of_range.as_bytes()), 10).is_err());

        let junk = "i,j,w\n0,a,1\n";
        assert!(read_edge_list(BufReader::new(junk.as_bytes()), 10).is_err());

        let extra = "i,j,w\n0,1,1,5\n";
        assert!(read_edge_list(BufReader::new(extra.as_bytes()), 10).is_err());
    }
}
