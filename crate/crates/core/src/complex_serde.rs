//! `{re, im}` encoding for complex values.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Serialize, Deserialize)]
struct ReIm {
    re: f64,
    im: f64,
}

pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
    ReIm { re: z.re, im: z.im }.serialize(s)
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
    let ReIm { re, im } = ReIm::deserialize(d)?;
    Ok(Complex64::new(re, im))
}

pub mod map {
    use super::ReIm;
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use std::collections::BTreeMap;

    pub fn serialize<S: Serializer>(
        m: &BTreeMap<String, Complex64>,
        s: S,
    ) -> Result<S::Ok, S::Error> {
        let view: BTreeMap<&str, ReIm> = m
            .iter()
            .map(|(k, z)| (k.as_str(), ReIm { re: z.re, im: z.im }))
            .collect();
        view.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<BTreeMap<String, Complex64>, D::Error> {
        let raw = BTreeMap::<String, ReIm>::deserialize(d)?;
        Ok(raw
            .into_iter()
            .map(|(k, v)| (k, Complex64::new(v.re, v.im)))
            .collect())
    }
}
