//! File formats: measurement CSV, raster CSV and PPM images.
//!
//! CSV dialect: comma separated, `.` decimal point, mandatory header, UTF-8.
//! Numbers are written in shortest round-trip form, so re-reading a file
//! reproduces the in-memory values exactly.

use std::io::{Read, Write};

use gta_core::{GridSpec, LinkType, MeasurementSample, RasterLayer, Statistic};

use crate::error::{CliError, Result};

pub const MEASUREMENT_HEADER: [&str; 3] = ["distance_m", "path_loss_db", "link_type"];
pub const RASTER_HEADER: [&str; 3] = ["x_m", "y_m", "value"];

fn csv_reader<R: Read>(reader: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader)
}

fn check_header<R: Read>(rdr: &mut csv::Reader<R>, expected: &[&str; 3], what: &str) -> Result<()> {
    let header = rdr
        .headers()
        .map_err(|e| CliError::Data(format!("{what}: unreadable header: {e}")))?;
    if header.is_empty() {
        return Err(CliError::Data(format!("{what}: empty file, expected header `{}`", expected.join(","))));
    }
    if header.iter().ne(expected.iter().copied()) {
        return Err(CliError::Data(format!(
            "{what}: header must be `{}`, found `{}`",
            expected.join(","),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    Ok(())
}

fn parse_measurement(record: &csv::StringRecord) -> std::result::Result<MeasurementSample, String> {
    if record.len() != 3 {
        return Err(format!("expected 3 fields, found {}", record.len()));
    }
    let distance_m: f64 = record[0].parse().map_err(|_| format!("bad distance '{}'", &record[0]))?;
    let path_loss_db: f64 =
        record[1].parse().map_err(|_| format!("bad path loss '{}'", &record[1]))?;
    let link: LinkType = record[2].parse().map_err(|e: gta_core::Error| e.to_string())?;
    MeasurementSample::new(distance_m, path_loss_db, link).map_err(|e| e.to_string())
}

/// Parse a measurement CSV. Every bad row is reported with its line number.
pub fn read_measurements<R: Read>(reader: R) -> Result<Vec<MeasurementSample>> {
    let mut rdr = csv_reader(reader);
    check_header(&mut rdr, &MEASUREMENT_HEADER, "measurement file")?;
    let mut samples = Vec::new();
    let mut problems = Vec::new();
    let mut record = csv::StringRecord::new();
    loop {
        let line = rdr.position().line() + 1;
        match rdr.read_record(&mut record) {
            Ok(false) => break,
            Ok(true) => {
                let line = record.position().map_or(line, |p| p.line());
                match parse_measurement(&record) {
                    Ok(s) => samples.push(s),
                    Err(msg) => problems.push(format!("line {line}: {msg}")),
                }
            }
            Err(e) => match e.kind() {
                csv::ErrorKind::Io(_) => return Err(CliError::Io(format!("measurement file: {e}"))),
                _ => {
                    let line = e.position().map_or(line, |p| p.line());
                    problems.push(format!("line {line}: {e}"))
                }
            },
        }
    }
    if !problems.is_empty() {
        return Err(CliError::Data(format!(
            "measurement file has {} invalid row(s):\n  {}",
            problems.len(),
            problems.join("\n  ")
        )));
    }
    Ok(samples)
}

pub fn write_measurements<W: Write>(writer: W, samples: &[MeasurementSample]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    let map = |e: csv::Error| CliError::Io(format!("writing measurements: {e}"));
    wtr.write_record(MEASUREMENT_HEADER).map_err(map)?;
    for s in samples {
        wtr.write_record([s.distance_m.to_string(), s.path_loss_db.to_string(), s.link.name().to_string()])
            .map_err(map)?;
    }
    wtr.flush().map_err(|e| CliError::io("writing measurements", e))
}

/// Row-major raster CSV: one `x_m,y_m,value` row per cell centre.
pub fn write_raster_csv<W: Write>(writer: W, layer: &RasterLayer) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    let map = |e: csv::Error| CliError::Io(format!("writing raster: {e}"));
    wtr.write_record(RASTER_HEADER).map_err(map)?;
    for ((x, y), v) in layer.grid.cell_centers().zip(&layer.values) {
        wtr.write_record([x.to_string(), y.to_string(), v.to_string()]).map_err(map)?;
    }
    wtr.flush().map_err(|e| CliError::io("writing raster", e))
}

/// Read a raster CSV written for `grid`. Cell centres must match the grid.
pub fn read_raster_csv<R: Read>(reader: R, grid: &GridSpec, statistic: Statistic) -> Result<RasterLayer> {
    let mut rdr = csv_reader(reader);
    check_header(&mut rdr, &RASTER_HEADER, "raster file")?;
    let mut centers = grid.cell_centers();
    let mut values = Vec::with_capacity(grid.cell_count());
    for (row, record) in rdr.records().enumerate() {
        let line = row + 2;
        let record = record.map_err(|e| CliError::Data(format!("raster line {line}: {e}")))?;
        let field = |i: usize| -> Result<f64> {
            record
                .get(i)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| CliError::Data(format!("raster line {line}: bad field {}", i + 1)))
        };
        let (x, y, v) = (field(0)?, field(1)?, field(2)?);
        match centers.next() {
            Some(c) if c == (x, y) => values.push(v),
            Some(c) => {
                return Err(CliError::Data(format!(
                    "raster line {line}: cell centre ({x}, {y}) does not match grid ({}, {})",
                    c.0, c.1
                )))
            }
            None => return Err(CliError::Data(format!("raster line {line}: more rows than grid cells"))),
        }
    }
    Ok(RasterLayer::new(*grid, statistic, values)?)
}

/// RGB for `value` on a linear blue (at `min`) to red (at `max`) ramp.
/// A flat layer (`min == max`) renders entirely blue.
pub fn ramp_color(value: f64, (min, max): (f64, f64)) -> [u8; 3] {
    let t = if max > min { ((value - min) / (max - min)).clamp(0.0, 1.0) } else { 0.0 };
    let red = (255.0 * t).round() as u8;
    [red, 0, 255 - red]
}

/// Binary PPM (P6), one pixel per cell, north (max `y`) at the top.
pub fn write_ppm<W: Write>(mut writer: W, layer: &RasterLayer) -> std::io::Result<()> {
    let (nx, ny) = layer.grid.dims();
    let range = layer.value_range();
    write!(writer, "P6\n{nx} {ny}\n255\n")?;
    let mut pixels = Vec::with_capacity(nx * ny * 3);
    for row in (0..ny).rev() {
        for v in &layer.values[row * nx..(row + 1) * nx] {
            pixels.extend_from_slice(&ramp_color(*v, range));
        }
    }
    writer.write_all(&pixels)?;
    writer.flush()
}
