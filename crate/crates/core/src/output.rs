//! Deterministic JSON output.
//!
//! Complex numbers serialize as `{"re": .., "im": ..}`. Floats are written in
//! scientific notation with 17 significant digits; non-finite floats become
//! `null`. Key order follows struct field order.

use std::io;

use serde::Serialize;
use serde_json::ser::Formatter;

/// `serde(with = ...)` adapter for `Complex64` as `{"re", "im"}`.
pub mod complex {
    use num_complex::Complex64;
    use serde::ser::SerializeStruct;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Complex", 2)?;
        st.serialize_field("re", &z.re)?;
        st.serialize_field("im", &z.im)?;
        st.end()
    }
}

/// `serde(with = ...)` adapter for `Option<Complex64>`.
pub mod complex_opt {
    use num_complex::Complex64;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(z: &Option<Complex64>, s: S) -> Result<S::Ok, S::Error> {
        match z {
            Some(z) => super::complex::serialize(z, s),
            None => s.serialize_none(),
        }
    }
}

/// `serde(with = ...)` adapter for `Vec<Complex64>`.
pub mod complex_vec {
    use num_complex::Complex64;
    use serde::ser::SerializeSeq;
    use serde::Serializer;

    #[derive(serde::Serialize)]
    struct Wrap<'a>(#[serde(with = "super::complex")] &'a Complex64);

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for z in v {
            seq.serialize_element(&Wrap(z))?;
        }
        seq.end()
    }
}

/// Format a float with 17 significant digits, e.g. `8.4147098480789650e-1`.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        // collapse -0 so output does not depend on the sign of zero
        "0.0000000000000000e0".to_string()
    } else {
        format!("{x:.16e}")
    }
}

/// serde_json formatter writing every float through [`fmt_f64`].
#[derive(Debug, Default, Clone, Copy)]
pub struct FixedDigits;

impl Formatter for FixedDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            writer.write_all(fmt_f64(value).as_bytes())
        } else {
            writer.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> serde_json::Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedDigits);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(buf).expect("serde_json emits utf-8"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[derive(Serialize)]
    struct Sample {
        #[serde(with = "complex")]
        z: Complex64,
        x: f64,
        bad: f64,
    }

    #[test]
    fn fixed_digits_and_key_order() {
        let s = Sample {
            z: Complex64::new(1f64.sin(), -0.0),
            x: 0.5,
            bad: f64::NEG_INFINITY,
        };
        let json = to_json(&s).unwrap();
        assert_eq!(
            json,
            r#"{"z":{"re":8.4147098480789650e-1,"im":0.0000000000000000e0},"x":5.0000000000000000e-1,"bad":null}"#
        );
        let back: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(back["z"]["re"].as_f64().unwrap(), 1f64.sin());
    }
}
