//! CSV emission with a `# key = value` parameter header.
//!
//! Numbers are written with 17 significant digits in scientific notation, so
//! every value round-trips exactly and output is independent of locale.

use std::io::Write;

use crate::error::Result;
use crate::linres::{CorrelationFunction, MEPoint, OnsagerMatrix};
use crate::observables::{PowerSeries, WitnessSeries};
use crate::tur::TurRow;

/// One CSV field.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Flag(bool),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) => format_number(*x),
            Cell::Text(s) => s.clone(),
            Cell::Flag(b) => (if *b { "1" } else { "0" }).to_string(),
        }
    }
}

pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        (if x > 0.0 { "inf" } else { "-inf" }).into()
    } else {
        format!("{x:.16e}")
    }
}

/// Ordered `key = value` pairs written before the column line.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Header(pub Vec<(String, String)>);

impl Header {
    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.0.push((key.into(), value.to_string()));
        self
    }
}

pub fn write_csv<W: Write>(
    mut w: W,
    header: &Header,
    columns: &[&str],
    rows: &[Vec<Cell>],
) -> Result<()> {
    for (k, v) in &header.0 {
        writeln!(w, "# {k} = {v}")?;
    }
    writeln!(w, "{}", columns.join(","))?;
    for r in rows {
        let line: Vec<String> = r.iter().map(Cell::render).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    w.flush()?;
    Ok(())
}

pub const POWER_COLUMNS: [&str; 7] = ["t", "P1", "P2", "dE_S", "dE_B", "dE_SB", "sigma_z"];

pub fn power_rows(series: &PowerSeries) -> Vec<Vec<Cell>> {
    series
        .records
        .iter()
        .map(|r| {
            [r.t, r.p1, r.p2, r.e_s, r.e_b, r.e_sb, r.sigma_z]
                .into_iter()
                .map(Cell::Num)
                .collect()
        })
        .collect()
}

pub const ONSAGER_COLUMNS: [&str; 11] = [
    "omega",
    "L11",
    "L12",
    "L21",
    "L22",
    "eps1_me",
    "eta_me",
    "p_out_me",
    "d_out_me",
    "sigma_rel_me",
    "provenance",
];

/// Rows of an Onsager sweep; ME columns are `nan` where no ME point exists.
pub fn onsager_rows(points: &[(OnsagerMatrix, Option<MEPoint>)]) -> Vec<Vec<Cell>> {
    points
        .iter()
        .map(|(l, me)| {
            let m = me
                .map(|m| [m.eps1_me, m.eta_me, m.p_out_me, m.d_out_me, m.sigma_rel_me])
                .unwrap_or([f64::NAN; 5]);
            let mut row: Vec<Cell> = [l.omega, l.l11, l.l12, l.l21, l.l22]
                .into_iter()
                .chain(m)
                .map(Cell::Num)
                .collect();
            row.push(Cell::Text(l.provenance.as_str().into()));
            row
        })
        .collect()
}

pub const TUR_COLUMNS: [&str; 10] = [
    "omega",
    "sigma",
    "Q",
    "V_dyn",
    "ratio",
    "static_violation",
    "dynamic_violation",
    "singular",
    "gap",
    "eta_me",
];

pub fn tur_rows(rows: &[TurRow]) -> Vec<Vec<Cell>> {
    rows.iter()
        .map(|r| match r {
            TurRow::Point(p) => vec![
                Cell::Num(p.omega),
                Cell::Num(p.sigma),
                Cell::Num(p.q),
                Cell::Num(p.v_dyn),
                Cell::Num(p.ratio),
                Cell::Flag(p.static_violation),
                Cell::Flag(p.dynamic_violation),
                Cell::Flag(p.singular),
                Cell::Text(String::new()),
                Cell::Num(p.me.eta_me),
            ],
            TurRow::Gap { omega, reason } => {
                let mut row = vec![Cell::Num(*omega)];
                row.extend([f64::NAN; 4].map(Cell::Num));
                row.extend([false; 3].map(Cell::Flag));
                row.push(Cell::Text(format!("\"{}\"", reason.replace('"', "'"))));
                row.push(Cell::Num(f64::NAN));
                row
            }
        })
        .collect()
}

pub const CORRELATION_COLUMNS: [&str; 3] = ["tau", "re_C", "im_C"];

pub fn correlation_rows(c: &CorrelationFunction) -> Vec<Vec<Cell>> {
    c.values
        .iter()
        .enumerate()
        .map(|(i, z)| vec![Cell::Num(c.tau(i)), Cell::Num(z.re), Cell::Num(z.im)])
        .collect()
}

pub const WITNESS_COLUMNS: [&str; 2] = ["t", "trace_distance"];

pub fn witness_rows(w: &WitnessSeries) -> Vec<Vec<Cell>> {
    w.times
        .iter()
        .zip(&w.distance)
        .map(|(&t, &d)| vec![Cell::Num(t), Cell::Num(d)])
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for x in [0.1, -1.0 / 3.0, 6.02e23, 5e-324, 0.0] {
            let s = format_number(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(format_number(1.0), "1.0000000000000000e0");
    }

    #[test]
    fn header_precedes_columns() {
        let mut h = Header::default();
        h.push("alpha", 0.1).push("mode", "trajectory");
        let mut out = Vec::new();
        write_csv(
            &mut out,
            &h,
            &["a", "b"],
            &[vec![Cell::Num(1.5), Cell::Flag(true)]],
        )
        .unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(
            text,
            "# alpha = 0.1\n# mode = trajectory\na,b\n1.5000000000000000e0,1\n"
        );
    }
}
