//! Document schemas and attribute encoding.
//!
//! A schema declares the fields of an official document (name, kind,
//! required flag, whether threshold predicates may reference it). Attribute
//! vectors reserve position 1 for the wallet-id hash and position 2 for the
//! credential serial; schema fields occupy positions 3 onward in declaration
//! order.
//!
//! Encoding: text fields hash to a scalar; integer fields and dates (as days
//! since 1970-01-01) encode directly so range predicates can talk about
//! them. A missing optional field encodes as zero.

use std::collections::BTreeMap;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::backend::{Engine, PublicParams, ScalarOps};
use crate::error::{Error, Result};
use crate::vc::AttributeVector;

/// Position of the wallet-id hash in every attribute vector.
pub const POSITION_WID: usize = 1;
/// Position of the credential serial in every attribute vector.
pub const POSITION_SERIAL: usize = 2;
/// Number of reserved positions preceding schema fields.
pub const RESERVED_POSITIONS: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldKind {
    Text,
    Integer,
    Date,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub name: String,
    pub kind: FieldKind,
    pub required: bool,
    /// Whether threshold predicates may reference this field.
    pub range_capable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schema {
    pub id: String,
    pub fields: Vec<FieldSpec>,
    /// Field the authority checks for validity in the future, if any.
    pub expiry_field: Option<String>,
}

impl Schema {
    /// Attribute vector length: reserved positions plus one per field.
    pub fn vector_len(&self) -> usize {
        RESERVED_POSITIONS + self.fields.len()
    }

    /// 1-based attribute position of a field.
    pub fn position_of(&self, field: &str) -> Option<usize> {
        self.fields
            .iter()
            .position(|f| f.name == field)
            .map(|i| RESERVED_POSITIONS + 1 + i)
    }

    pub fn field(&self, name: &str) -> Option<&FieldSpec> {
        self.fields.iter().find(|f| f.name == name)
    }

    pub fn check_well_formed(&self) -> Result<()> {
        if self.fields.is_empty() {
            return Err(Error::Schema(format!("schema {} has no fields", self.id)));
        }
        for (i, f) in self.fields.iter().enumerate() {
            if self.fields[..i].iter().any(|g| g.name == f.name) {
                return Err(Error::Schema(format!("duplicate field {}", f.name)));
            }
            if f.range_capable && f.kind == FieldKind::Text {
                return Err(Error::Schema(format!(
                    "text field {} cannot be range-capable",
                    f.name
                )));
            }
        }
        if let Some(e) = &self.expiry_field {
            match self.field(e) {
                Some(f) if f.kind == FieldKind::Date && f.required => {}
                _ => {
                    return Err(Error::Schema(format!(
                        "expiry field {e} must be a required date field"
                    )))
                }
            }
        }
        Ok(())
    }
}

/// The built-in document schemas.
pub fn builtin_schemas() -> Vec<Schema> {
    let field = |name: &str, kind: FieldKind, required: bool, range_capable: bool| FieldSpec {
        name: name.to_string(),
        kind,
        required,
        range_capable,
    };
    vec![
        Schema {
            id: "passport".into(),
            fields: vec![
                field("full_name", FieldKind::Text, true, false),
                field("nationality", FieldKind::Text, true, false),
                field("birth_date", FieldKind::Date, true, true),
                field("expiry_date", FieldKind::Date, true, true),
                field("document_number", FieldKind::Text, true, false),
            ],
            expiry_field: Some("expiry_date".into()),
        },
        Schema {
            id: "driving-license".into(),
            fields: vec![
                field("full_name", FieldKind::Text, true, false),
                field("birth_date", FieldKind::Date, true, true),
                field("categories", FieldKind::Text, false, false),
                field("expiry_date", FieldKind::Date, true, true),
            ],
            expiry_field: Some("expiry_date".into()),
        },
        Schema {
            id: "medical-certificate".into(),
            fields: vec![
                field("full_name", FieldKind::Text, true, false),
                field("blood_group", FieldKind::Text, false, false),
                field("issued_on", FieldKind::Date, true, true),
                field("valid_until", FieldKind::Date, true, true),
            ],
            expiry_field: Some("valid_until".into()),
        },
    ]
}

pub fn find_schema(id: &str) -> Result<Schema> {
    builtin_schemas()
        .into_iter()
        .find(|s| s.id == id)
        .ok_or_else(|| Error::Schema(format!("unknown schema {id}")))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldValue {
    Integer(i64),
    Text(String),
}

impl FieldValue {
    fn kind_matches(&self, kind: FieldKind) -> bool {
        match (self, kind) {
            (FieldValue::Text(_), FieldKind::Text) => true,
            (FieldValue::Integer(_), FieldKind::Integer) => true,
            // dates travel as ISO text
            (FieldValue::Text(_), FieldKind::Date) => true,
            _ => false,
        }
    }
}

/// An official document as submitted by the claimant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub schema_id: String,
    pub wid: String,
    pub fields: BTreeMap<String, FieldValue>,
}

impl Document {
    /// Canonical digest of the document contents (bound into the authority's
    /// response signature).
    pub fn digest(&self) -> [u8; 32] {
        let mut h = Sha256::new();
        h.update(b"zkfaith/doc/v1");
        let mut put = |b: &[u8]| {
            h.update((b.len() as u32).to_be_bytes());
            h.update(b);
        };
        put(self.schema_id.as_bytes());
        put(self.wid.as_bytes());
        for (name, value) in &self.fields {
            put(name.as_bytes());
            match value {
                FieldValue::Text(s) => {
                    put(b"t");
                    put(s.as_bytes());
                }
                FieldValue::Integer(v) => {
                    put(b"i");
                    put(&v.to_be_bytes());
                }
            }
        }
        h.finalize().into()
    }
}

/// Days since 1970-01-01 for an ISO `YYYY-MM-DD` date.
pub fn days_since_epoch(iso: &str) -> Result<i64> {
    let date = NaiveDate::parse_from_str(iso, "%Y-%m-%d")
        .map_err(|e| Error::Schema(format!("bad date {iso}: {e}")))?;
    let epoch = NaiveDate::from_ymd_opt(1970, 1, 1).expect("fixed date");
    Ok(date.signed_duration_since(epoch).num_days())
}

/// Today's date as days since 1970-01-01 (for expiry checks).
pub fn today_days() -> i64 {
    let now = chrono::Utc::now().date_naive();
    let epoch = NaiveDate::from_ymd_opt(1970, 1, 1).expect("fixed date");
    now.signed_duration_since(epoch).num_days()
}

/// Schema validation as the authority runs it: field presence, kinds, and a
/// future expiry date. Returns the reason a document fails.
pub fn validate_document(schema: &Schema, doc: &Document, today: i64) -> Result<()> {
    schema.check_well_formed()?;
    if doc.schema_id != schema.id {
        return Err(Error::Schema(format!(
            "document declares schema {}, expected {}",
            doc.schema_id, schema.id
        )));
    }
    for (name, value) in &doc.fields {
        let spec = schema
            .field(name)
            .ok_or_else(|| Error::Schema(format!("unknown field {name}")))?;
        if !value.kind_matches(spec.kind) {
            return Err(Error::Schema(format!("field {name} has the wrong kind")));
        }
        if spec.kind == FieldKind::Date {
            if let FieldValue::Text(s) = value {
                days_since_epoch(s)?;
            }
        }
        if let FieldValue::Integer(v) = value {
            if *v < 0 {
                return Err(Error::Schema(format!("field {name} must be non-negative")));
            }
        }
    }
    for spec in &schema.fields {
        if spec.required && !doc.fields.contains_key(&spec.name) {
            return Err(Error::Schema(format!("missing required field {}", spec.name)));
        }
    }
    if let Some(expiry) = &schema.expiry_field {
        match doc.fields.get(expiry) {
            Some(FieldValue::Text(s)) => {
                if days_since_epoch(s)? <= today {
                    return Err(Error::Schema(format!("document expired ({s})")));
                }
            }
            _ => return Err(Error::Schema(format!("missing expiry field {expiry}"))),
        }
    }
    Ok(())
}

/// Result of encoding a document: the attribute vector (serial position
/// zeroed), the field-to-position map, and the integer value of every
/// range-capable position (kept by the wallet for later predicates).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedAttributes<E: Engine> {
    pub vector: AttributeVector<E>,
    pub positions: BTreeMap<String, usize>,
    pub int_values: BTreeMap<usize, u64>,
}

pub fn wid_scalar<E: Engine>(pp: &PublicParams<E>, wid: &str) -> E::Scalar {
    pp.hash_to_scalar(b"zkfaith/attr/wid/v1", &[wid.as_bytes()])
}

fn text_scalar<E: Engine>(pp: &PublicParams<E>, value: &str) -> E::Scalar {
    pp.hash_to_scalar(b"zkfaith/attr/text/v1", &[value.as_bytes()])
}

fn int_scalar<E: Engine>(pp: &PublicParams<E>, v: i64) -> E::Scalar {
    if v >= 0 {
        pp.scalar_from_u64(v as u64)
    } else {
        pp.scalar_from_u64(v.unsigned_abs()).neg()
    }
}

/// Deterministically encode a validated document. Positions 1 and 2 hold the
/// wid hash and a zero serial placeholder.
pub fn encode_attributes<E: Engine>(
    pp: &PublicParams<E>,
    schema: &Schema,
    doc: &Document,
) -> Result<EncodedAttributes<E>> {
    if doc.schema_id != schema.id {
        return Err(Error::Schema(format!(
            "document declares schema {}, expected {}",
            doc.schema_id, schema.id
        )));
    }
    let mut vector = Vec::with_capacity(schema.vector_len());
    vector.push(wid_scalar(pp, &doc.wid));
    vector.push(pp.scalar_from_u64(0));
    let mut positions = BTreeMap::new();
    let mut int_values = BTreeMap::new();
    for (i, spec) in schema.fields.iter().enumerate() {
        let position = RESERVED_POSITIONS + 1 + i;
        positions.insert(spec.name.clone(), position);
        let scalar = match doc.fields.get(&spec.name) {
            None => pp.scalar_from_u64(0),
            Some(FieldValue::Text(s)) => match spec.kind {
                FieldKind::Text => text_scalar(pp, s),
                FieldKind::Date => {
                    let days = days_since_epoch(s)?;
                    if days >= 0 {
                        int_values.insert(position, days as u64);
                    }
                    int_scalar(pp, days)
                }
                FieldKind::Integer => {
                    return Err(Error::Schema(format!("field {} must be an integer", spec.name)))
                }
            },
            Some(FieldValue::Integer(v)) => match spec.kind {
                FieldKind::Integer => {
                    if *v >= 0 {
                        int_values.insert(position, *v as u64);
                    }
                    int_scalar(pp, *v)
                }
                _ => {
                    return Err(Error::Schema(format!(
                        "field {} cannot hold an integer",
                        spec.name
                    )))
                }
            },
        };
        vector.push(scalar);
    }
    Ok(EncodedAttributes {
        vector: AttributeVector(vector),
        positions,
        int_values,
    })
}

/// Encode one field value in isolation (update flow).
pub fn encode_field_value<E: Engine>(
    pp: &PublicParams<E>,
    spec: &FieldSpec,
    value: &FieldValue,
) -> Result<(E::Scalar, Option<u64>)> {
    if !value.kind_matches(spec.kind) {
        return Err(Error::Schema(format!("field {} has the wrong kind", spec.name)));
    }
    match (value, spec.kind) {
        (FieldValue::Text(s), FieldKind::Text) => Ok((text_scalar(pp, s), None)),
        (FieldValue::Text(s), FieldKind::Date) => {
            let days = days_since_epoch(s)?;
            Ok((int_scalar(pp, days), (days >= 0).then_some(days as u64)))
        }
        (FieldValue::Integer(v), FieldKind::Integer) => {
            Ok((int_scalar(pp, *v), (*v >= 0).then_some(*v as u64)))
        }
        _ => Err(Error::Schema(format!("field {} has the wrong kind", spec.name))),
    }
}
