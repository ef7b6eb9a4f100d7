//! Serde helpers for extended reals: infinities travel as `"inf"`/`"-inf"`
//! and NaN as `"nan"`, finite values as plain JSON numbers.

use serde::de::{self, Deserialize, Deserializer};
use serde::ser::Serializer;

pub fn serialize<S: Serializer>(v: &f64, ser: S) -> Result<S::Ok, S::Error> {
    if v.is_nan() {
        ser.serialize_str("nan")
    } else if v.is_infinite() {
        ser.serialize_str(if *v > 0.0 { "inf" } else { "-inf" })
    } else {
        ser.serialize_f64(*v)
    }
}

pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<f64, D::Error> {
    #[derive(serde::Deserialize)]
    #[serde(untagged)]
    enum Ext {
        Num(f64),
        Text(String),
    }
    match Ext::deserialize(de)? {
        Ext::Num(v) => Ok(v),
        Ext::Text(t) => parse(&t).ok_or_else(|| de::Error::custom(format!("expected a number, got {t:?}"))),
    }
}

fn parse(t: &str) -> Option<f64> {
    match t {
        "inf" | "infinity" | "Infinity" | "+inf" => Some(f64::INFINITY),
        "-inf" | "-infinity" | "-Infinity" => Some(f64::NEG_INFINITY),
        "nan" | "NaN" => Some(f64::NAN),
        _ => None,
    }
}

/// Same encoding for `Vec<f64>`.
pub mod vec {
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    #[derive(serde::Serialize, serde::Deserialize)]
    struct Wrap(#[serde(with = "super")] f64);

    pub fn serialize<S: Serializer>(v: &[f64], ser: S) -> Result<S::Ok, S::Error> {
        let mut seq = ser.serialize_seq(Some(v.len()))?;
        for x in v {
            seq.serialize_element(&Wrap(*x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<f64>, D::Error> {
        let w: Vec<Wrap> = Vec::deserialize(de)?;
        Ok(w.into_iter().map(|w| w.0).collect())
    }
}

#[cfg(test)]
mod tests {
    #[derive(serde::Serialize, serde::Deserialize, Debug, PartialEq)]
    struct S {
        #[serde(with = "super")]
        x: f64,
        #[serde(with = "super::vec")]
        v: Vec<f64>,
    }

    #[test]
    fn round_trip() {
        let s = S { x: f64::INFINITY, v: vec![0.1, f64::NEG_INFINITY] };
        let t = serde_json::to_string(&s).unwrap();
        assert_eq!(t, r#"{"x":"inf","v":[0.1,"-inf"]}"#);
        assert_eq!(serde_json::from_str::<S>(&t).unwrap(), s);
    }
}
