//! Typed access to a `serde_json::Value` that remembers its JSON pointer.

use serde_json::{Map, Value};

use crate::error::{InputError, Result};

#[derive(Clone, Copy)]
pub(crate) struct Node<'a> {
    pub value: &'a Value,
    path: &'a str,
}

fn escape(key: &str) -> String {
    key.replace('~', "~0").replace('/', "~1")
}

impl<'a> Node<'a> {
    pub fn root(value: &'a Value) -> Node<'a> {
        Node { value, path: "" }
    }

    pub fn error(&self, message: impl Into<String>) -> InputError {
        InputError::Schema { pointer: self.path.to_string(), message: message.into() }
    }

    fn kind(&self) -> &'static str {
        match self.value {
            Value::Null => "null",
            Value::Bool(_) => "a boolean",
            Value::Number(_) => "a number",
            Value::String(_) => "a string",
            Value::Array(_) => "an array",
            Value::Object(_) => "an object",
        }
    }

    pub fn object(&self) -> Result<&'a Map<String, Value>> {
        self.value.as_object().ok_or_else(|| self.error(format!("expected an object, found {}", self.kind())))
    }

    /// Rejects keys outside `allowed`.
    pub fn only_keys(&self, allowed: &[&str]) -> Result<()> {
        for k in self.object()?.keys() {
            if !allowed.contains(&k.as_str()) {
                return Err(self.error(format!("unknown field \"{k}\" (expected one of: {})", allowed.join(", "))));
            }
        }
        Ok(())
    }

    /// Child under `key`, `None` when absent or null.
    pub fn get<R>(&self, key: &str, f: impl FnOnce(Option<Node<'_>>) -> Result<R>) -> Result<R> {
        let obj = self.object()?;
        let path = format!("{}/{}", self.path, escape(key));
        match obj.get(key) {
            Some(Value::Null) | None => f(None),
            Some(v) => f(Some(Node { value: v, path: &path })),
        }
    }

    pub fn req<R>(&self, key: &str, f: impl FnOnce(Node<'_>) -> Result<R>) -> Result<R> {
        self.get(key, |n| match n {
            Some(n) => f(n),
            None => Err(self.error(format!("missing required field \"{key}\""))),
        })
    }

    pub fn items<R>(&self, mut f: impl FnMut(usize, Node<'_>) -> Result<R>) -> Result<Vec<R>> {
        let arr = self.value.as_array().ok_or_else(|| self.error(format!("expected an array, found {}", self.kind())))?;
        arr.iter()
            .enumerate()
            .map(|(i, v)| {
                let path = format!("{}/{i}", self.path);
                f(i, Node { value: v, path: &path })
            })
            .collect()
    }

    pub fn f64(&self) -> Result<f64> {
        let x = self.value.as_f64().ok_or_else(|| self.error(format!("expected a number, found {}", self.kind())))?;
        if x.is_finite() {
            Ok(x)
        } else {
            Err(self.error("number is not finite"))
        }
    }

    pub fn u64(&self) -> Result<u64> {
        self.value
            .as_u64()
            .ok_or_else(|| self.error(format!("expected a nonnegative integer, found {}", self.kind())))
    }

    pub fn usize(&self) -> Result<usize> {
        usize::try_from(self.u64()?).map_err(|_| self.error("integer too large"))
    }

    pub fn str(&self) -> Result<&'a str> {
        self.value.as_str().ok_or_else(|| self.error(format!("expected a string, found {}", self.kind())))
    }

    pub fn vec(&self) -> Result<Vec<f64>> {
        self.items(|_, n| n.f64())
    }

    /// A vector with exactly `dim` entries.
    pub fn vec_dim(&self, dim: usize) -> Result<Vec<f64>> {
        let v = self.vec()?;
        if v.len() != dim {
            return Err(self.error(format!("expected {dim} entries, found {}", v.len())));
        }
        Ok(v)
    }
}
