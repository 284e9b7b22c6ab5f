use std::fs::File;
use std::io::{self, BufWriter, Write};

use nrcg_core::report::Table;
use nrcg_core::sweep::{OutputFormat, SweepConfig};
use serde_json::{json, Map, Value};

use crate::error::CliError;

pub fn write_csv<W: Write>(table: &Table, out: W) -> Result<(), CliError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(&table.columns)?;
    for row in &table.rows {
        w.write_record(row.iter().map(|c| c.render()))?;
    }
    w.flush()?;
    Ok(())
}

/// `{ meta, records, summary }` with one object per row.
pub fn to_json(table: &Table, cfg: &SweepConfig, command: &str) -> Result<Value, CliError> {
    let records: Vec<Value> = table
        .rows
        .iter()
        .map(|row| {
            let mut obj = Map::new();
            for (col, cell) in table.columns.iter().zip(row) {
                obj.insert(col.clone(), serde_json::to_value(cell)?);
            }
            Ok(Value::Object(obj))
        })
        .collect::<Result<_, serde_json::Error>>()?;
    let mut summary = Map::new();
    for item in &table.summary {
        summary.insert(item.key.clone(), serde_json::to_value(&item.value)?);
    }
    Ok(json!({
        "meta": { "command": command, "config": serde_json::to_value(cfg)? },
        "records": records,
        "summary": summary,
    }))
}

pub fn emit(table: &Table, cfg: &SweepConfig, command: &str) -> Result<(), CliError> {
    let sink: Box<dyn Write> = match &cfg.output.path {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    };
    let mut sink = BufWriter::new(sink);
    match cfg.output.format {
        OutputFormat::Csv => {
            write_csv(table, &mut sink)?;
            for item in &table.summary {
                eprintln!("{} = {}", item.key, item.value.render());
            }
        }
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut sink, &to_json(table, cfg, command)?)?;
            sink.write_all(b"\n")?;
        }
    }
    sink.flush()?;
    Ok(())
}
