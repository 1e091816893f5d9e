//! Versioned text dump of a trained network.
//!
//! Floats are written in the shortest form that parses back to the same
//! bits, so a save/load cycle is exact.

use std::fmt::Write as _;
use std::path::Path;

use claimrank_core::model::{Dense, MtlNetwork, NetworkDims, Params, TaskHead, TaskSet, Variant};
use claimrank_core::SourceId;

use crate::error::{Error, Result};

const MAGIC: &str = "claimrank-checkpoint";
const VERSION: u32 = 1;

fn push_array(out: &mut String, name: &str, values: &[f64]) {
    write!(out, "{name} {}", values.len()).unwrap();
    for v in values {
        write!(out, " {v:?}").unwrap();
    }
    out.push('\n');
}

pub fn to_text(net: &MtlNetwork) -> String {
    let ts = net.task_set();
    let d = net.dims();
    let mut out = format!("{MAGIC} {VERSION}\n");
    writeln!(out, "variant {}", ts.variant()).unwrap();
    writeln!(out, "target {}", ts.target().map_or("-".to_string(), |t| t.to_string())).unwrap();
    let tasks: Vec<&str> = ts.tasks().iter().map(|t| t.code()).collect();
    writeln!(out, "tasks {}", tasks.join(" ")).unwrap();
    writeln!(out, "dims {} {} {}", d.input_dim, d.shared_hidden, d.task_hidden).unwrap();
    let p = &net.params;
    push_array(&mut out, "shared.weights", &p.shared.weights);
    push_array(&mut out, "shared.bias", &p.shared.bias);
    for (t, h) in p.heads.iter().enumerate() {
        push_array(&mut out, &format!("head{t}.hidden.weights"), &h.hidden.weights);
        push_array(&mut out, &format!("head{t}.hidden.bias"), &h.hidden.bias);
        push_array(&mut out, &format!("head{t}.output.weights"), &h.output.weights);
        push_array(&mut out, &format!("head{t}.output.bias"), &h.output.bias);
    }
    out.push_str("end\n");
    out
}

struct Reader<'a> {
    lines: std::iter::Enumerate<std::str::Lines<'a>>,
    path: &'a Path,
    line: usize,
}

impl<'a> Reader<'a> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse { path: self.path.to_path_buf(), line: self.line, message: message.into() }
    }

    fn next(&mut self, key: &str) -> Result<Vec<&'a str>> {
        let (i, l) = self.lines.next().ok_or_else(|| self.err(format!("unexpected end of file, expected {key}")))?;
        self.line = i + 1;
        let mut parts = l.split_ascii_whitespace();
        if parts.next() != Some(key) {
            return Err(self.err(format!("expected {key}")));
        }
        Ok(parts.collect())
    }

    fn array(&mut self, key: &str, len: usize) -> Result<Vec<f64>> {
        let parts = self.next(key)?;
        let (n, values) = parts.split_first().ok_or_else(|| self.err("missing array length"))?;
        if n.parse::<usize>().ok() != Some(len) || values.len() != len {
            return Err(self.err(format!("{key} must hold {len} values")));
        }
        values
            .iter()
            .map(|v| v.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(|| self.err(format!("bad value {v:?}"))))
            .collect()
    }

    fn dense(&mut self, prefix: &str, n_in: usize, n_out: usize) -> Result<Dense> {
        Ok(Dense {
            n_in,
            n_out,
            weights: self.array(&format!("{prefix}.weights"), n_in * n_out)?,
            bias: self.array(&format!("{prefix}.bias"), n_out)?,
        })
    }
}

pub fn from_text(text: &str, path: &Path) -> Result<MtlNetwork> {
    let mut r = Reader { lines: text.lines().enumerate(), path, line: 0 };
    let version = r.next(MAGIC)?;
    if version != [VERSION.to_string().as_str()] {
        return Err(r.err(format!("unsupported checkpoint version {version:?}")));
    }
    let variant: Variant = r.next("variant")?.first().copied().unwrap_or("").parse().map_err(|e| r.err(format!("{e}")))?;
    let target = match r.next("target")?.as_slice() {
        ["-"] => None,
        [code] => Some(code.parse::<SourceId>().map_err(|e| r.err(e.to_string()))?),
        _ => return Err(r.err("bad target")),
    };
    let tasks = r
        .next("tasks")?
        .iter()
        .map(|c| c.parse::<SourceId>().map_err(|e| r.err(e.to_string())))
        .collect::<Result<Vec<_>>>()?;
    let task_set = TaskSet::custom(variant, target, tasks).map_err(|e| r.err(e.to_string()))?;
    let dims: Vec<usize> = r
        .next("dims")?
        .iter()
        .map(|v| v.parse().map_err(|_| r.err("bad dimension")))
        .collect::<Result<_>>()?;
    let [input_dim, shared_hidden, task_hidden] = dims[..] else {
        return Err(r.err("dims needs three values"));
    };
    let dims = NetworkDims { input_dim, shared_hidden, task_hidden };
    let shared = r.dense("shared", input_dim, shared_hidden)?;
    let mut heads = Vec::new();
    for t in 0..task_set.len() {
        heads.push(TaskHead {
            hidden: r.dense(&format!("head{t}.hidden"), shared_hidden, task_hidden)?,
            output: r.dense(&format!("head{t}.output"), task_hidden, 1)?,
        });
    }
    r.next("end")?;
    MtlNetwork::from_parts(task_set, dims, Params { shared, heads }).map_err(|e| r.err(e.to_string()))
}

pub fn save(net: &MtlNetwork, path: &Path) -> Result<()> {
    std::fs::write(path, to_text(net)).map_err(|e| Error::write(path, e))
}

pub fn load(path: &Path) -> Result<MtlNetwork> {
    from_text(&crate::io::read_text(path)?, path)
}
