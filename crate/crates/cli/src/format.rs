//! Fixed-precision number rendering. Values that round to zero are printed
//! without a sign so output does not flicker between `-0` and `0`.

const HUMAN_DECIMALS: usize = 8;
const CSV_DECIMALS: usize = 12;

fn fixed(v: f64, decimals: usize) -> String {
    let s = format!("{v:.decimals$}");
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
        _ => s,
    }
}

pub fn human_num(v: f64) -> String {
    fixed(v, HUMAN_DECIMALS)
}

pub fn csv_num(v: f64) -> String {
    fixed(v, CSV_DECIMALS)
}

/// Comma-separated table with LF line endings and quoting where needed.
pub fn csv_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

/// Coefficient with an explicit sign: `+1`, `-1`, `+0.5`.
pub fn signed(g: f64) -> String {
    if g >= 0.0 {
        format!("+{g}")
    } else {
        format!("{g}")
    }
}
