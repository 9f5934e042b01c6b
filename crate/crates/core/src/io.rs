//! JSON instance files. All integers travel as decimal strings.

use std::path::Path;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{Items, ProblemInstance, Variant};

/// Serde adapter writing a [`BigUint`] as a decimal string.
pub mod decimal {
    use num_bigint::BigUint;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&value.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let text = String::deserialize(d)?;
        super::parse_decimal(&text).map_err(D::Error::custom)
    }
}

pub fn parse_decimal(text: &str) -> Result<BigUint> {
    let t = text.trim();
    if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("{text:?} is not a decimal natural number")));
    }
    BigUint::parse_bytes(t.as_bytes(), 10).ok_or_else(|| Error::Parse(format!("bad decimal {text:?}")))
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub variant: String,
    pub items: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<String>,
}

impl InstanceFile {
    pub fn from_instance(instance: &ProblemInstance<BigUint>) -> Self {
        let s = |v: &BigUint| Some(v.to_str_radix(10));
        let (target, shift, modulus) = match instance.variant() {
            Variant::SubsetSum { target } | Variant::TwoSubsetSum { target } => (s(target), None, None),
            Variant::ShiftedSums { shift } => (None, s(shift), None),
            Variant::PigeonholeModularEqualSums { modulus } => (None, None, s(modulus)),
            Variant::ModularSubsetSum { target, modulus } => (s(target), None, s(modulus)),
            Variant::EqualSums | Variant::PigeonholeEqualSums => (None, None, None),
        };
        InstanceFile {
            variant: instance.variant().name().to_string(),
            items: instance.items().values().iter().map(|v| v.to_str_radix(10)).collect(),
            target,
            shift,
            modulus,
        }
    }

    pub fn to_instance(&self) -> Result<ProblemInstance<BigUint>> {
        let values = self.items.iter().map(|t| parse_decimal(t)).collect::<Result<Vec<_>>>()?;
        let items = Items::new(values)?;
        let field = |name: &str, v: &Option<String>| -> Result<BigUint> {
            match v {
                Some(t) => parse_decimal(t),
                None => Err(Error::Parse(format!("variant {} needs a {name:?} field", self.variant))),
            }
        };
        let unexpected = |name: &str, v: &Option<String>| -> Result<()> {
            match v {
                Some(_) => Err(Error::Parse(format!("variant {} takes no {name:?} field", self.variant))),
                None => Ok(()),
            }
        };
        let variant = match self.variant.as_str() {
            "subset_sum" => {
                unexpected("shift", &self.shift)?;
                unexpected("modulus", &self.modulus)?;
                Variant::SubsetSum { target: field("target", &self.target)? }
            }
            "two_subset_sum" => {
                unexpected("shift", &self.shift)?;
                unexpected("modulus", &self.modulus)?;
                Variant::TwoSubsetSum { target: field("target", &self.target)? }
            }
            "equal_sums" | "pigeonhole_equal" => {
                unexpected("target", &self.target)?;
                unexpected("shift", &self.shift)?;
                unexpected("modulus", &self.modulus)?;
                if self.variant == "equal_sums" {
                    Variant::EqualSums
                } else {
                    Variant::PigeonholeEqualSums
                }
            }
            "shifted_sums" => {
                unexpected("target", &self.target)?;
                unexpected("modulus", &self.modulus)?;
                Variant::ShiftedSums { shift: field("shift", &self.shift)? }
            }
            "pigeonhole_modular" => {
                unexpected("target", &self.target)?;
                unexpected("shift", &self.shift)?;
                Variant::PigeonholeModularEqualSums { modulus: field("modulus", &self.modulus)? }
            }
            "modular_subset_sum" => {
                unexpected("shift", &self.shift)?;
                Variant::ModularSubsetSum {
                    target: field("target", &self.target)?,
                    modulus: field("modulus", &self.modulus)?,
                }
            }
            other => return Err(Error::Parse(format!("unknown variant {other:?}"))),
        };
        ProblemInstance::new(items, variant)
    }
}

pub fn instance_to_json(instance: &ProblemInstance<BigUint>) -> String {
    serde_json::to_string_pretty(&InstanceFile::from_instance(instance)).expect("instance serializes")
}

pub fn instance_from_json(text: &str) -> Result<ProblemInstance<BigUint>> {
    let file: InstanceFile = serde_json::from_str(text)?;
    file.to_instance()
}

pub fn read_instance(path: &Path) -> Result<ProblemInstance<BigUint>> {
    instance_from_json(&std::fs::read_to_string(path)?)
}

pub fn write_instance(path: &Path, instance: &ProblemInstance<BigUint>) -> Result<()> {
    std::fs::write(path, instance_to_json(instance) + "\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_large_values() {
        let big = (BigUint::from(1u8) << 100u32) + 1u8;
        let inst = ProblemInstance::new(
            Items::new(vec![big.clone(), BigUint::from(3u8)]).unwrap(),
            Variant::SubsetSum { target: big + 3u8 },
        )
        .unwrap();
        let text = instance_to_json(&inst);
        assert!(text.contains("\"1267650600228229401496703205377\""));
        assert_eq!(instance_from_json(&text).unwrap(), inst);
    }

    #[test]
    fn every_variant_round_trips() {
        let items = Items::<BigUint>::from_u64s(&[1, 2, 3]).unwrap();
        let b = |v: u64| BigUint::from(v);
        for variant in [
            Variant::SubsetSum { target: b(4) },
            Variant::TwoSubsetSum { target: b(8) },
            Variant::EqualSums,
            Variant::ShiftedSums { shift: b(2) },
            Variant::PigeonholeEqualSums,
            Variant::PigeonholeModularEqualSums { modulus: b(7) },
            Variant::ModularSubsetSum { target: b(1), modulus: b(5) },
        ] {
            let inst = ProblemInstance::new(items.clone(), variant).unwrap();
            assert_eq!(instance_from_json(&instance_to_json(&inst)).unwrap(), inst);
        }
    }

    #[test]
    fn rejects_malformed_files() {
        assert!(instance_from_json(r#"{"variant":"subset_sum","items":["1"]}"#).is_err());
        assert!(instance_from_json(r#"{"variant":"subset_sum","items":[1],"target":"1"}"#).is_err());
        assert!(instance_from_json(r#"{"variant":"subset_sum","items":["-1"],"target":"1"}"#).is_err());
        assert!(instance_from_json(r#"{"variant":"nope","items":["1"]}"#).is_err());
        assert!(instance_from_json(r#"{"variant":"equal_sums","items":["1"],"shift":"0"}"#).is_err());
        assert!(instance_from_json(r#"{"variant":"pigeonhole_equal","items":["1","2","4"]}"#).is_err());
    }
}
