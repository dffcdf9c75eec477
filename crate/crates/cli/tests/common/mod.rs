//! A small JSON Schema checker covering the keywords the shipped schemas
//! use: `type` (single or list), `enum`, `required`, `properties`, `items`.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

pub fn qforma(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qforma")).args(args).output().expect("binary runs")
}

pub fn stdout_json(args: &[&str]) -> Value {
    let out = qforma(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

pub fn schema(name: &str) -> Value {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{name}.schema.json"));
    serde_json::from_str(&std::fs::read_to_string(path).expect("schema file")).expect("schema parses")
}

fn type_matches(t: &str, v: &Value) -> bool {
    match t {
        "object" => v.is_object(),
        "array" => v.is_array(),
        "string" => v.is_string(),
        "integer" => v.is_i64() || v.is_u64(),
        "number" => v.is_number(),
        "boolean" => v.is_boolean(),
        "null" => v.is_null(),
        other => panic!("unknown schema type {other}"),
    }
}

/// Returns every violation as `path: message`.
pub fn validate(schema: &Value, v: &Value, path: &str, errors: &mut Vec<String>) {
    if let Some(t) = schema.get("type") {
        let ok = match t {
            Value::String(s) => type_matches(s, v),
            Value::Array(ts) => ts.iter().any(|t| type_matches(t.as_str().expect("type name"), v)),
            _ => panic!("bad type keyword"),
        };
        if !ok {
            errors.push(format!("{path}: expected type {t}, got {v}"));
            return;
        }
    }
    if let Some(Value::Array(options)) = schema.get("enum") {
        if !options.contains(v) {
            errors.push(format!("{path}: {v} not in {options:?}"));
        }
    }
    if let Value::Object(obj) = v {
        if let Some(Value::Array(req)) = schema.get("required") {
            for r in req {
                let key = r.as_str().expect("required key");
                if !obj.contains_key(key) {
                    errors.push(format!("{path}: missing {key}"));
                }
            }
        }
        if let Some(Value::Object(props)) = schema.get("properties") {
            for (k, sub) in props {
                if let Some(x) = obj.get(k) {
                    validate(sub, x, &format!("{path}.{k}"), errors);
                }
            }
        }
    }
    if let (Value::Array(items), Some(sub)) = (v, schema.get("items")) {
        for (i, x) in items.iter().enumerate() {
            validate(sub, x, &format!("{path}[{i}]"), errors);
        }
    }
}

pub fn assert_valid(name: &str, v: &Value) {
    let mut errors = vec![];
    validate(&schema(name), v, "$", &mut errors);
    assert!(errors.is_empty(), "{name}: {errors:#?}");
}
