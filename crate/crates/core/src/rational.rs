//! JSON shape for exact rationals: `{"num": int, "den": int}`.

use num_rational::Rational64;
use serde::{Serialize, Serializer};

#[derive(Serialize)]
struct Fraction {
    num: i64,
    den: i64,
}

pub fn serialize<S: Serializer>(r: &Rational64, s: S) -> Result<S::Ok, S::Error> {
    Fraction {
        num: *r.numer(),
        den: *r.denom(),
    }
    .serialize(s)
}

pub fn to_json(r: &Rational64) -> serde_json::Value {
    serde_json::json!({ "num": r.numer(), "den": r.denom() })
}
