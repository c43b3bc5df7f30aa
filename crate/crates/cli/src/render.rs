//! Deterministic fixed-width table rendering and small formatting
//! helpers shared by the subcommands.

use weylchar_core::coxeter::{omega_group, NodeSubset, WeylElement};

/// Left-aligned columns, two-space gutter, trailing whitespace trimmed.
pub fn table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(|r| r.len()).max().unwrap_or(0);
    let mut widths = vec![0usize; cols];
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (i, cell) in row.iter().enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            line.push_str(cell);
            if i + 1 < row.len() {
                for _ in cell.len()..widths[i] {
                    line.push(' ');
                }
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

pub fn word_str(word: &[usize]) -> String {
    if word.is_empty() {
        "e".to_string()
    } else {
        word.iter()
            .map(|i| format!("s{i}"))
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// "s0*s1" form, with a "*w<k>" suffix for a nontrivial Omega part.
pub fn element_str(e: &WeylElement) -> String {
    let (word, omega) = e.reduced_word();
    if omega.is_identity() {
        return word_str(&word);
    }
    let group = omega_group(e.datum());
    let k = group.iter().position(|o| o == &omega).unwrap_or(0);
    if word.is_empty() {
        format!("w{k}")
    } else {
        format!("{}*w{k}", word_str(&word))
    }
}

pub fn node_set_str(s: &NodeSubset) -> String {
    let inner = s
        .iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(",");
    format!("{{{inner}}}")
}

pub fn int_list_str<T: std::fmt::Display>(xs: &[T]) -> String {
    let inner = xs
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(", ");
    format!("[{inner}]")
}
