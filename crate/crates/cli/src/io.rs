//! Fan file reading and canonical emission.
//!
//! Fan files are UTF-8 JSON: `{"rank": n, "rays": [[int,...],...],
//! "max_cones": [[int,...],...]}` with 0-based ray indices. Writers emit
//! rays in input order and maximal cones sorted lexicographically, one
//! object per line.

use std::path::Path;

use torix_core::fan::{Fan, FanData};
use torix_core::{Error, Result};

pub fn parse_fan_data(text: &str) -> Result<FanData> {
    serde_json::from_str(text).map_err(|e| Error::Input(format!("bad fan file: {e}")))
}

pub fn read_fan_data(path: &Path) -> Result<FanData> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
    parse_fan_data(&text)
}

pub fn read_fan(path: &Path) -> Result<Fan> {
    read_fan_data(path)?.build()
}

/// Canonical byte form: single-line JSON with sorted maximal cones and a
/// trailing newline. Emitting a parsed canonical file reproduces it.
pub fn emit_fan(data: &FanData) -> String {
    let mut canonical = data.clone();
    for cone in &mut canonical.max_cones {
        cone.sort_unstable();
    }
    canonical.max_cones.sort();
    let mut text = serde_json::to_string(&canonical).expect("fan data serializes");
    text.push('\n');
    text
}

pub fn write_fan(path: &Path, fan: &Fan) -> Result<()> {
    std::fs::write(path, emit_fan(&fan.data()))
        .map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use torix_core::fan::hirzebruch;

    #[test]
    fn canonical_roundtrip() {
        let fan = hirzebruch(2);
        let text = emit_fan(&fan.data());
        let parsed = parse_fan_data(&text).unwrap();
        assert_eq!(emit_fan(&parsed), text);
        assert_eq!(parsed.build().unwrap(), fan);
    }

    #[test]
    fn bad_json_is_an_input_error() {
        assert!(matches!(parse_fan_data("{"), Err(Error::Input(_))));
        assert!(matches!(parse_fan_data("{\"rank\":2}"), Err(Error::Input(_))));
    }

    #[test]
    fn out_of_range_cone_index_names_the_cone() {
        let data = parse_fan_data(r#"{"rank":2,"rays":[[1,0],[0,1]],"max_cones":[[0,2]]}"#).unwrap();
        match data.build() {
            Err(Error::InvalidFan(diags)) => {
                assert!(diags.iter().any(|d| d.contains("cone 0") && d.contains("out of range")));
            }
            other => panic!("expected invalid fan, got {other:?}"),
        }
    }
}
