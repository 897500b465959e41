//! Fixed float formatting for CSV and JSON output.
//!
//! Every float is written with 17 significant digits in scientific notation
//! so that identical runs produce byte-identical files.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::{CompactFormatter, Formatter, Serializer};

/// `{:.16e}`, e.g. `3.1415926535897931e0`. Non-finite values print as
/// `NaN`, `inf`, `-inf`.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

#[derive(Debug, Default, Clone, Copy)]
struct SignificantDigits;

impl Formatter for SignificantDigits {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(fmt_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }

    fn write_i64<W: ?Sized + Write>(&mut self, writer: &mut W, value: i64) -> io::Result<()> {
        CompactFormatter.write_i64(writer, value)
    }
}

/// Serialize compactly with 17-significant-digit floats and a trailing
/// newline. Field order follows the struct declaration order.
pub fn write_json<W: Write, T: Serialize>(writer: W, value: &T) -> io::Result<()> {
    let mut writer = writer;
    {
        let mut ser = Serializer::with_formatter(&mut writer, SignificantDigits);
        value.serialize(&mut ser).map_err(io::Error::other)?;
    }
    writer.write_all(b"\n")
}

pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    write_json(&mut buf, value).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("JSON output is UTF-8")
}
