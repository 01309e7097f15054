//! Serde helpers: complex numbers are written as `[re, im]`, and a bare real
//! number is accepted on input.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Deserialize)]
#[serde(untagged)]
enum Repr {
    Real(f64),
    Pair([f64; 2]),
}

impl From<Repr> for Complex64 {
    fn from(r: Repr) -> Self {
        match r {
            Repr::Real(x) => Complex64::new(x, 0.0),
            Repr::Pair([re, im]) => Complex64::new(re, im),
        }
    }
}

pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
    Repr::deserialize(d).map(Complex64::from)
}

pub mod many {
    use super::*;

    pub fn serialize<S: Serializer>(zs: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = zs.iter().map(|z| [z.re, z.im]).collect();
        pairs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        let raw = Vec::<Repr>::deserialize(d)?;
        Ok(raw.into_iter().map(Complex64::from).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize, Deserialize, PartialEq, Debug)]
    struct Holder {
        #[serde(with = "super")]
        one: Complex64,
        #[serde(with = "super::many")]
        many: Vec<Complex64>,
    }

    #[test]
    fn accepts_reals_and_pairs() {
        let h: Holder = serde_json::from_str(r#"{"one": 2.5, "many": [1, [0, -1]]}"#).unwrap();
        assert_eq!(h.one, Complex64::new(2.5, 0.0));
        assert_eq!(h.many, vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, -1.0)]);
        let text = serde_json::to_string(&h).unwrap();
        assert_eq!(text, r#"{"one":[2.5,0.0],"many":[[1.0,0.0],[0.0,-1.0]]}"#);
    }
}
