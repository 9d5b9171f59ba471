//! Small shared helpers.

use num_bigint::BigInt;

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Primes `< bound`, ascending.
pub fn primes_below(bound: u64) -> Vec<u64> {
    if bound < 3 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut sieve = vec![true; n];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i < n {
        if sieve[i] {
            let mut j = i * i;
            while j < n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    (0..n).filter(|&k| sieve[k]).map(|k| k as u64).collect()
}

/// Serde for `Option<BigInt>` accepting JSON integers or decimal strings.
pub mod bigint_opt {
    use super::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(b) => s.serialize_str(&b.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigInt>, D::Error> {
        let v = Option::<serde_json::Value>::deserialize(d)?;
        v.map(|v| super::bigint_from_json(&v).map_err(D::Error::custom)).transpose()
    }
}

pub fn bigint_from_json(v: &serde_json::Value) -> Result<BigInt, String> {
    match v {
        serde_json::Value::Number(n) => n.to_string().parse().map_err(|_| format!("not an integer: {n}")),
        serde_json::Value::String(s) => s.trim().parse().map_err(|_| format!("not an integer: {s:?}")),
        other => Err(format!("expected integer, got {other}")),
    }
}
