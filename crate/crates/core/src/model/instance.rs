use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::size::{format_rational, parse_rational};
use super::{ModelError, Size};

/// A generator parameter: either an integer count or an exact rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParamValue {
    Int(i64),
    Rational(BigRational),
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Int(v) => write!(f, "{v}"),
            ParamValue::Rational(v) => f.write_str(&format_rational(v)),
        }
    }
}

impl From<i64> for ParamValue {
    fn from(v: i64) -> Self {
        ParamValue::Int(v)
    }
}

impl From<usize> for ParamValue {
    fn from(v: usize) -> Self {
        ParamValue::Int(v as i64)
    }
}

impl From<BigRational> for ParamValue {
    fn from(v: BigRational) -> Self {
        ParamValue::Rational(v)
    }
}

// Integers serialize as JSON numbers, rationals as "p/q" strings.
impl Serialize for ParamValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            ParamValue::Int(v) => serializer.serialize_i64(*v),
            ParamValue::Rational(v) => serializer.serialize_str(&format_rational(v)),
        }
    }
}

impl<'de> Deserialize<'de> for ParamValue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Int(v) => Ok(ParamValue::Int(v)),
            Raw::Text(s) => parse_rational(&s)
                .map(ParamValue::Rational)
                .map_err(serde::de::Error::custom),
        }
    }
}

pub type Params = BTreeMap<String, ParamValue>;

/// Provenance of a generated instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorMeta {
    pub name: String,
    pub params: Params,
}

/// An ordered item sequence. Order matters: online algorithms consume it front to back.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Instance {
    items: Vec<Size>,
    meta: Option<GeneratorMeta>,
}

impl Instance {
    pub fn new(items: Vec<Size>) -> Self {
        Instance { items, meta: None }
    }

    pub fn with_meta(mut self, meta: GeneratorMeta) -> Self {
        self.meta = Some(meta);
        self
    }

    /// Builds an instance from `(numerator, denominator)` pairs.
    pub fn from_ratios(pairs: &[(i64, i64)]) -> Result<Self, ModelError> {
        pairs
            .iter()
            .map(|&(p, q)| Size::from_ratio(p, q))
            .collect::<Result<Vec<_>, _>>()
            .map(Instance::new)
    }

    pub fn items(&self) -> &[Size] {
        &self.items
    }

    pub fn meta(&self) -> Option<&GeneratorMeta> {
        self.meta.as_ref()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn total_size(&self) -> BigRational {
        self.items
            .iter()
            .fold(BigRational::zero(), |acc, s| acc + s.value())
    }

    /// Stable sort by non-increasing size. Equal sizes keep their input order.
    pub fn sorted_nonincreasing(&self) -> Instance {
        self.sorted_with_order().0
    }

    /// Sorted copy plus `order[pos] = original index` of the item now at `pos`.
    pub fn sorted_with_order(&self) -> (Instance, Vec<usize>) {
        let mut order: Vec<usize> = (0..self.items.len()).collect();
        order.sort_by(|&a, &b| self.items[b].cmp(&self.items[a]));
        let items = order.iter().map(|&i| self.items[i].clone()).collect();
        (
            Instance {
                items,
                meta: self.meta.clone(),
            },
            order,
        )
    }

    pub fn is_sorted_nonincreasing(&self) -> bool {
        self.items.windows(2).all(|w| w[0] >= w[1])
    }

    /// Parses the one-item-per-line text format. Blank lines and lines starting
    /// with `#` are skipped; errors carry the 1-based line number.
    pub fn parse_text(text: &str) -> Result<Instance, ModelError> {
        let mut items = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let size = trimmed.parse::<Size>().map_err(|e| ModelError::Parse {
                line: lineno + 1,
                message: e.to_string(),
            })?;
            items.push(size);
        }
        Ok(Instance::new(items))
    }

    /// Writes the text format, with generator provenance as leading comments.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(meta) = &self.meta {
            out.push_str(&format!("# generator: {}\n", meta.name));
            for (key, value) in &meta.params {
                out.push_str(&format!("# {key} = {value}\n"));
            }
        }
        for item in &self.items {
            out.push_str(&item.to_string());
            out.push('\n');
        }
        out
    }
}

/// Free-function form of [`Instance::sorted_nonincreasing`].
pub fn sort_nonincreasing(instance: &Instance) -> Instance {
    instance.sorted_nonincreasing()
}

/// Free-function form of [`Instance::total_size`].
pub fn total_size(instance: &Instance) -> BigRational {
    instance.total_size()
}
