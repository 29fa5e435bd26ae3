//! CSV formats shared by the library and the command-line tool.
//!
//! * designs: header `f1,...,fk`, one row per well, values `-1`/`1`;
//! * pool sheets: `well_id: label,label,...` with 1-based well ids;
//! * compound maps: `index,label` with 1-based compound indices;
//! * responses: `well,response`;
//! * well labels: `well,label` where label is `hit`/`miss` (or `1`/`0`).

use std::io::{Read, Write};

use crate::design::Design;
use crate::error::{Error, Result};

fn format_err(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

/// Reads a design; `c` defaults to `k` (no row constraint) when absent.
pub fn read_design_csv<R: Read>(reader: R, c: Option<usize>) -> Result<Design> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
    let k = rdr.headers()?.len();
    let mut entries = Vec::new();
    let mut n = 0;
    for (line, record) in rdr.records().enumerate() {
        let record = record?;
        if record.len() != k {
            return Err(format_err(format!("design row {} has {} fields, header has {k}", line + 1, record.len())));
        }
        for field in record.iter() {
            let v: i8 = field
                .parse()
                .map_err(|_| format_err(format!("design row {}: {field:?} is not -1 or 1", line + 1)))?;
            entries.push(v);
        }
        n += 1;
    }
    if n == 0 || k == 0 {
        return Err(format_err("design file has no rows or no columns"));
    }
    let design = Design::new(n, k, c.unwrap_or(k), entries).map_err(|e| match e {
        Error::Parameter(m) => Error::Parameter(m),
        other => format_err(other.to_string()),
    })?;
    design.validate()?;
    Ok(design)
}

pub fn write_design_csv<W: Write>(writer: W, design: &Design) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record((1..=design.k()).map(|j| format!("f{j}")))?;
    for row in design.rows() {
        w.write_record(row.iter().map(|v| v.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

/// Default compound labels `f1..fk`, matching the design header.
pub fn default_labels(k: usize) -> Vec<String> {
    (1..=k).map(|j| format!("f{j}")).collect()
}

/// Reads `index,label` rows (1-based) into a label vector of length `k`;
/// compounds missing from the map keep their default label.
pub fn read_compound_map<R: Read>(reader: R, k: usize) -> Result<Vec<String>> {
    let mut labels = default_labels(k);
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
    for record in rdr.records() {
        let record = record?;
        if record.len() < 2 {
            return Err(format_err("compound map rows need index,label"));
        }
        let idx: usize = record[0].parse().map_err(|_| format_err(format!("bad compound index {:?}", &record[0])))?;
        if idx == 0 || idx > k {
            return Err(format_err(format!("compound index {idx} outside 1..={k}")));
        }
        labels[idx - 1] = record[1].to_string();
    }
    Ok(labels)
}

pub fn write_pool_sheet<W: Write>(mut writer: W, design: &Design, labels: &[String]) -> Result<()> {
    if labels.len() != design.k() {
        return Err(Error::Dimension(format!("{} labels for {} compounds", labels.len(), design.k())));
    }
    for i in 0..design.n() {
        let names: Vec<&str> = design.pool(i).into_iter().map(|j| labels[j].as_str()).collect();
        writeln!(writer, "{}: {}", i + 1, names.join(","))?;
    }
    Ok(())
}

/// Reads `well,response` rows, returning responses ordered by well id (1..=n).
pub fn read_responses<R: Read>(reader: R) -> Result<Vec<f64>> {
    let rows = read_keyed(reader, "response", |s| s.parse::<f64>().ok().filter(|v| v.is_finite()))?;
    Ok(rows)
}

pub fn write_responses<W: Write>(writer: W, y: &[f64]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["well", "response"])?;
    for (i, v) in y.iter().enumerate() {
        w.write_record([(i + 1).to_string(), format!("{v:?}")])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads `well,label` rows; `true` means the well is positive.
pub fn read_labels<R: Read>(reader: R) -> Result<Vec<bool>> {
    read_keyed(reader, "label", |s| match s.to_ascii_lowercase().as_str() {
        "hit" | "1" | "positive" | "true" => Some(true),
        "miss" | "0" | "negative" | "false" => Some(false),
        _ => None,
    })
}

pub fn write_labels<W: Write>(writer: W, labels: &[bool]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["well", "label"])?;
    for (i, &v) in labels.iter().enumerate() {
        w.write_record([(i + 1).to_string(), if v { "hit" } else { "miss" }.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

fn read_keyed<R: Read, T>(reader: R, what: &str, parse: impl Fn(&str) -> Option<T>) -> Result<Vec<T>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
    let mut rows: Vec<(usize, T)> = Vec::new();
    for record in rdr.records() {
        let record = record?;
        if record.len() < 2 {
            return Err(format_err(format!("{what} rows need well,{what}")));
        }
        let well: usize = record[0].parse().map_err(|_| format_err(format!("bad well id {:?}", &record[0])))?;
        let value = parse(&record[1]).ok_or_else(|| format_err(format!("bad {what} {:?} for well {well}", &record[1])))?;
        rows.push((well, value));
    }
    rows.sort_by_key(|(w, _)| *w);
    for (expected, (well, _)) in (1..).zip(&rows) {
        if *well != expected {
            return Err(format_err(format!("{what} file must list wells 1..=n exactly once; missing or repeated well {expected}")));
        }
    }
    Ok(rows.into_iter().map(|(_, v)| v).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn design_round_trip() {
        let d = Design::from_rows(&[vec![1, -1, -1], vec![-1, -1, 1]], 1).unwrap();
        let mut buf = Vec::new();
        write_design_csv(&mut buf, &d).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "f1,f2,f3\n1,-1,-1\n-1,-1,1\n");
        assert_eq!(read_design_csv(buf.as_slice(), Some(1)).unwrap(), d);
    }

    #[test]
    fn design_errors() {
        assert!(matches!(read_design_csv("f1,f2\n1,0\n".as_bytes(), None), Err(Error::Violation(_))));
        assert!(matches!(read_design_csv("f1,f2\n1,x\n".as_bytes(), None), Err(Error::Format(_))));
        assert!(matches!(read_design_csv("f1,f2\n1,1\n".as_bytes(), Some(1)), Err(Error::Violation(_))));
        assert!(read_design_csv("f1,f2\n".as_bytes(), None).is_err());
    }

    #[test]
    fn pool_sheet_with_map() {
        let d = Design::from_rows(&[vec![1, -1, 1], vec![-1, -1, -1]], 2).unwrap();
        let labels = read_compound_map("index,label\n3,captopril\n".as_bytes(), 3).unwrap();
        let mut buf = Vec::new();
        write_pool_sheet(&mut buf, &d, &labels).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "1: f1,captopril\n2: \n");
    }

    #[test]
    fn responses_sorted_and_complete() {
        let y = read_responses("well,response\n2,0.5\n1,-1\n".as_bytes()).unwrap();
        assert_eq!(y, vec![-1.0, 0.5]);
        assert!(read_responses("well,response\n1,0.5\n3,1\n".as_bytes()).is_err());
        assert!(read_responses("well,response\n1,abc\n".as_bytes()).is_err());
    }

    #[test]
    fn labels_parse() {
        let l = read_labels("well,label\n1,hit\n2,miss\n3,1\n".as_bytes()).unwrap();
        assert_eq!(l, vec![true, false, true]);
    }
}
