//! Text format for punctured tuples.
//!
//! ```text
//! MODULUS 5 RANK 2 PUNCTURES 2
//! AT 0
//! 1 1
//! 0 1
//! AT 1
//! 1 0
//! 4 1
//! ```
//!
//! Lines starting with `#` are comments. The matrix at ∞ is never stored.

use monodromy::convolution::{Label, PuncturedTuple};
use monodromy::{Matrix, Prime};

use crate::CliError;

fn bad(line: usize, msg: impl Into<String>) -> CliError {
    CliError::Input(format!("line {line}: {}", msg.into()))
}

pub fn parse(text: &str) -> Result<PuncturedTuple, CliError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (ln, header) = lines
        .next()
        .ok_or_else(|| CliError::Input("empty tuple file".into()))?;
    let words: Vec<&str> = header.split_whitespace().collect();
    let [m, modulus, r, rank, p, count] = words[..] else {
        return Err(bad(ln, "expected MODULUS <l> RANK <n> PUNCTURES <r>"));
    };
    if (m, r, p) != ("MODULUS", "RANK", "PUNCTURES") {
        return Err(bad(ln, "expected MODULUS <l> RANK <n> PUNCTURES <r>"));
    }
    let number = |s: &str| -> Result<u64, CliError> {
        s.parse().map_err(|_| bad(ln, format!("not a number: {s}")))
    };
    let modulus = number(modulus)?;
    let prime = u32::try_from(modulus)
        .ok()
        .and_then(|m| Prime::new(m).ok())
        .ok_or_else(|| {
            bad(
                ln,
                format!("modulus {modulus} is not an odd prime below 65536"),
            )
        })?;
    let rank = number(rank)? as usize;
    let count = number(count)? as usize;
    if rank == 0 {
        return Err(bad(ln, "rank must be positive"));
    }

    let mut punctures = Vec::with_capacity(count);
    for _ in 0..count {
        let (ln, at) = lines
            .next()
            .ok_or_else(|| CliError::Input(format!("expected {count} punctures")))?;
        let label = match at.split_once(char::is_whitespace) {
            Some(("AT", rest)) => Label::parse(rest).map_err(|e| bad(ln, e.to_string()))?,
            _ => return Err(bad(ln, "expected AT <label>")),
        };
        let mut entries = Vec::with_capacity(rank * rank);
        for _ in 0..rank {
            let (ln, row) = lines
                .next()
                .ok_or_else(|| CliError::Input(format!("matrix at {label} is truncated")))?;
            let vals: Vec<&str> = row.split_whitespace().collect();
            if vals.len() != rank {
                return Err(bad(ln, format!("expected {rank} residues")));
            }
            for v in vals {
                let x: u64 = v
                    .parse()
                    .map_err(|_| bad(ln, format!("not a residue: {v}")))?;
                if x >= prime.get() as u64 {
                    return Err(bad(ln, format!("residue {x} is not below {prime}")));
                }
                entries.push(x as u32);
            }
        }
        let m = Matrix::from_residues(prime, rank, rank, entries)?;
        punctures.push((label, m));
    }
    if let Some((ln, _)) = lines.next() {
        return Err(bad(ln, "trailing content after the last puncture"));
    }
    Ok(PuncturedTuple::new(prime, rank, punctures)?)
}

pub fn emit(t: &PuncturedTuple) -> String {
    let n = t.rank();
    let mut out = format!("MODULUS {} RANK {} PUNCTURES {}\n", t.prime(), n, t.len());
    for (label, m) in t.punctures() {
        out.push_str(&format!("AT {label}\n"));
        for i in 0..n {
            let row: Vec<String> = (0..n).map(|j| m.get(i, j).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str =
        "# Legendre over F_5\nMODULUS 5 RANK 2 PUNCTURES 2\nAT 0\n1 1\n0 1\nAT 1\n1 0\n4 1\n";

    #[test]
    fn round_trip() {
        let t = parse(SAMPLE).unwrap();
        let text = emit(&t);
        assert_eq!(
            text,
            SAMPLE
                .lines()
                .skip(1)
                .map(|l| format!("{l}\n"))
                .collect::<String>()
        );
        assert_eq!(parse(&text).unwrap(), t);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse("MODULUS 4 RANK 1 PUNCTURES 0\n").is_err());
        assert!(parse("MODULUS 5 RANK 1 PUNCTURES 1\nAT 0\n5\n").is_err());
        assert!(parse("MODULUS 5 RANK 1 PUNCTURES 1\nAT 7\n2\n").is_err());
        assert!(parse("MODULUS 5 RANK 1 PUNCTURES 1\nAT inf\n2\n").is_err());
        assert!(parse("MODULUS 5 RANK 1 PUNCTURES 2\nAT 0\n2\n").is_err());
        assert!(parse("MODULUS 5 RANK 2 PUNCTURES 1\nAT 0\n1 2\n").is_err());
        assert!(parse("MODULUS 5 RANK 1 PUNCTURES 1\nAT 0\n0\n").is_err());
    }
}
