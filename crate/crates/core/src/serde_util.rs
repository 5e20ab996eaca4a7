//! Serde helpers: big integers travel as decimal strings in every JSON
//! document this crate reads or writes (no portable numeric type holds a
//! 600-digit value).

/// `Natural` as a decimal string.
pub mod decimal {
    use serde::{de, Deserialize, Deserializer, Serializer};

    use crate::Natural;

    pub fn serialize<S: Serializer>(value: &Natural, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&value.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Natural, D::Error> {
        let s = String::deserialize(de)?;
        s.parse::<Natural>()
            .map_err(|e| de::Error::custom(format!("bad decimal string {s:?}: {e}")))
    }
}

/// `Option<Natural>` as a decimal string or null.
pub mod decimal_opt {
    use serde::{de, Deserialize, Deserializer, Serializer};

    use crate::Natural;

    pub fn serialize<S: Serializer>(value: &Option<Natural>, ser: S) -> Result<S::Ok, S::Error> {
        match value {
            Some(v) => ser.serialize_some(&v.to_string()),
            None => ser.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Option<Natural>, D::Error> {
        let s = Option::<String>::deserialize(de)?;
        match s {
            None => Ok(None),
            Some(s) => s
                .parse::<Natural>()
                .map(Some)
                .map_err(|e| de::Error::custom(format!("bad decimal string {s:?}: {e}"))),
        }
    }
}
