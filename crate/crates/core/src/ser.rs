// Big integers serialize as decimal strings.

use std::fmt::Display;

use serde::ser::SerializeSeq;
use serde::Serializer;

pub(crate) fn decimal<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

pub(crate) fn indexed_decimals<T: Display, S: Serializer>(v: &[(i64, T)], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for (i, x) in v {
        seq.serialize_element(&(i, x.to_string()))?;
    }
    seq.end()
}
