//! Canonical JSON network files.
//!
//! Field order is fixed and every real number is a string: the shortest
//! round-trip decimal in float mode, `p/q` in rational mode. Saving the
//! same network twice produces identical bytes.

use std::fs;
use std::path::Path;

use ksn_core::{
    InnerFunction, KolmogorovNetwork, LookupTable, NumericMode, PhiKind, Provenance, Rational, TransferStack,
};
use serde::{Deserialize, Serialize};

use crate::numtext::NumText;
use crate::{KsnError, Result};

pub const FORMAT_VERSION: &str = "1";

/// A network in either numeric mode.
#[derive(Debug, Clone, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum AnyNetwork {
    Float(KolmogorovNetwork<f64>),
    Rational(KolmogorovNetwork<Rational>),
}

impl AnyNetwork {
    pub fn mode(&self) -> NumericMode {
        match self {
            AnyNetwork::Float(_) => NumericMode::Float64,
            AnyNetwork::Rational(_) => NumericMode::ExactRational,
        }
    }

    pub fn d(&self) -> usize {
        match self {
            AnyNetwork::Float(net) => net.stack().d(),
            AnyNetwork::Rational(net) => net.stack().d(),
        }
    }

    pub fn to_json(&self) -> String {
        match self {
            AnyNetwork::Float(net) => to_json(net),
            AnyNetwork::Rational(net) => to_json(net),
        }
    }
}

impl From<KolmogorovNetwork<f64>> for AnyNetwork {
    fn from(net: KolmogorovNetwork<f64>) -> Self {
        AnyNetwork::Float(net)
    }
}

impl From<KolmogorovNetwork<Rational>> for AnyNetwork {
    fn from(net: KolmogorovNetwork<Rational>) -> Self {
        AnyNetwork::Rational(net)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NetworkFile {
    version: String,
    numeric_mode: String,
    stack: StackFile,
    tables: Vec<TableFile>,
    provenance: ProvenanceFile,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StackFile {
    d: usize,
    r: usize,
    lambda: String,
    epsilon: String,
    intervals: Vec<[String; 2]>,
    phi: PhiFile,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PhiFile {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    segments: Option<u32>,
    domain: [String; 2],
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableFile {
    k: usize,
    default: String,
    entries: Vec<[String; 2]>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProvenanceFile {
    n_fitted: usize,
    fit_timestamp: String,
    residual: String,
}

fn mode_name(mode: NumericMode) -> &'static str {
    match mode {
        NumericMode::Float64 => "float64",
        NumericMode::ExactRational => "exact_rational",
    }
}

const HASHED: &str = "hashed_piecewise_linear";
const POWER: &str = "transcendental_power";

pub fn to_json<S: NumText>(net: &KolmogorovNetwork<S>) -> String {
    let stack = net.stack();
    let (lo, hi) = stack.phi().domain();
    let (kind, seed, segments) = match stack.phi().kind() {
        PhiKind::HashedPiecewiseLinear { seed, segments } => (HASHED, Some(seed), Some(segments)),
        PhiKind::TranscendentalPower => (POWER, None, None),
    };
    let file = NetworkFile {
        version: FORMAT_VERSION.into(),
        numeric_mode: mode_name(S::MODE).into(),
        stack: StackFile {
            d: stack.d(),
            r: stack.r(),
            lambda: stack.lambda().to_canonical(),
            epsilon: stack.epsilon().to_canonical(),
            intervals: stack.intervals().iter().map(|(a, b)| [a.to_canonical(), b.to_canonical()]).collect(),
            phi: PhiFile { kind: kind.into(), seed, segments, domain: [lo.to_canonical(), hi.to_canonical()] },
        },
        tables: net
            .tables()
            .iter()
            .map(|t| TableFile {
                k: t.block(),
                default: t.default_value().to_canonical(),
                entries: t.entries().iter().map(|(k, v)| [k.to_canonical(), v.to_canonical()]).collect(),
            })
            .collect(),
        provenance: ProvenanceFile {
            n_fitted: net.provenance().n_fitted,
            fit_timestamp: net.provenance().fit_timestamp.clone(),
            residual: net.provenance().residual.to_canonical(),
        },
    };
    let mut text = serde_json::to_string_pretty(&file).expect("network file serializes");
    text.push('\n');
    text
}

pub fn save(net: &AnyNetwork, path: &Path) -> Result<()> {
    fs::write(path, net.to_json()).map_err(|e| KsnError::io(path, e))
}

pub fn load(path: &Path) -> Result<AnyNetwork> {
    let text = fs::read_to_string(path).map_err(|e| KsnError::io(path, e))?;
    from_json(&text, &path.display().to_string())
}

pub fn from_json(text: &str, origin: &str) -> Result<AnyNetwork> {
    let mut de = serde_json::Deserializer::from_str(text);
    let file: NetworkFile = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let inner = e.inner();
        KsnError::format(format!("{origin}:{}:{} ({})", inner.line(), inner.column(), e.path()), inner.to_string())
    })?;
    let bad = |field: &str, message: String| KsnError::format(format!("{origin} ({field})"), message);
    if file.version != FORMAT_VERSION {
        return Err(bad("version", format!("unsupported version {:?}", file.version)));
    }
    match file.numeric_mode.as_str() {
        "float64" => Ok(AnyNetwork::Float(build(&file, origin)?)),
        "exact_rational" => Ok(AnyNetwork::Rational(build(&file, origin)?)),
        other => Err(bad("numeric_mode", format!("unknown numeric mode {other:?}"))),
    }
}

fn build<S: NumText>(file: &NetworkFile, origin: &str) -> Result<KolmogorovNetwork<S>> {
    let bad = |field: String, message: String| KsnError::format(format!("{origin} ({field})"), message);
    let num = |field: String, text: &str| -> Result<S> {
        S::parse_literal(text).ok_or_else(|| bad(field, format!("invalid number {text:?}")))
    };

    let stack = &file.stack;
    if stack.d < 2 || stack.r != 2 * stack.d {
        return Err(bad("stack.r".into(), format!("need d > 1 and r = 2d, found d = {}, r = {}", stack.d, stack.r)));
    }
    if stack.intervals.len() != stack.r + 1 {
        return Err(bad(
            "stack.intervals".into(),
            format!("expected {} intervals, found {}", stack.r + 1, stack.intervals.len()),
        ));
    }
    if file.tables.len() != stack.r + 1 {
        return Err(bad("tables".into(), format!("expected {} tables, found {}", stack.r + 1, file.tables.len())));
    }
    let lambda = num("stack.lambda".into(), &stack.lambda)?;
    let epsilon = num("stack.epsilon".into(), &stack.epsilon)?;
    let intervals = stack
        .intervals
        .iter()
        .enumerate()
        .map(|(k, [a, b])| {
            Ok((num(format!("stack.intervals[{k}][0]"), a)?, num(format!("stack.intervals[{k}][1]"), b)?))
        })
        .collect::<Result<Vec<_>>>()?;

    let kind = match (stack.phi.kind.as_str(), stack.phi.seed, stack.phi.segments) {
        (HASHED, Some(seed), Some(segments)) => PhiKind::HashedPiecewiseLinear { seed, segments },
        (POWER, None, None) => PhiKind::TranscendentalPower,
        (kind, ..) => return Err(bad("stack.phi".into(), format!("invalid inner function {kind:?}"))),
    };
    let phi =
        InnerFunction::for_offsets(kind, stack.r, &epsilon).map_err(|e| bad("stack.phi".into(), e.to_string()))?;
    let (lo, hi) = phi.domain();
    let domain = [
        num("stack.phi.domain[0]".into(), &stack.phi.domain[0])?,
        num("stack.phi.domain[1]".into(), &stack.phi.domain[1])?,
    ];
    if domain[0] != *lo || domain[1] != *hi {
        return Err(bad("stack.phi.domain".into(), "domain does not match r and epsilon".into()));
    }
    let stack =
        TransferStack::new(stack.d, lambda, epsilon, phi, intervals).map_err(|e| bad("stack".into(), e.to_string()))?;

    let mut tables = Vec::with_capacity(file.tables.len());
    for (i, t) in file.tables.iter().enumerate() {
        if t.k != i {
            return Err(bad(format!("tables[{i}].k"), format!("expected block {i}, found {}", t.k)));
        }
        let default = num(format!("tables[{i}].default"), &t.default)?;
        let entries = t
            .entries
            .iter()
            .enumerate()
            .map(|(e, [key, value])| {
                Ok((
                    num(format!("tables[{i}].entries[{e}][0]"), key)?,
                    num(format!("tables[{i}].entries[{e}][1]"), value)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        tables.push(LookupTable::new(i, entries, default).map_err(|e| bad(format!("tables[{i}]"), e.to_string()))?);
    }

    let provenance = Provenance {
        n_fitted: file.provenance.n_fitted,
        fit_timestamp: file.provenance.fit_timestamp.clone(),
        residual: num("provenance.residual".into(), &file.provenance.residual)?,
    };
    KolmogorovNetwork::new(stack, tables, provenance).map_err(|e| bad("tables".into(), e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{Dataset, Target};

    fn fitted<S: NumText>() -> KolmogorovNetwork<S> {
        let data = Dataset::lattice(Target::Checker(3), 2, 4).unwrap();
        let sample = data.sample::<S>("mem").unwrap();
        let tol = if S::MODE == NumericMode::Float64 { S::ratio(1, 1_000_000_000_000) } else { S::zero() };
        KolmogorovNetwork::fit(TransferStack::default_for(2).unwrap(), &sample, &tol, "2026-01-01T00:00:00Z".into())
            .unwrap()
    }

    #[test]
    fn round_trip_both_modes() {
        let float: AnyNetwork = fitted::<f64>().into();
        let text = float.to_json();
        assert!(text.ends_with("}\n"));
        let back = from_json(&text, "mem").unwrap();
        assert_eq!(back, float);
        assert_eq!(back.to_json(), text);

        let exact: AnyNetwork = fitted::<Rational>().into();
        let text = exact.to_json();
        assert!(text.contains("\"numeric_mode\": \"exact_rational\""));
        assert_eq!(from_json(&text, "mem").unwrap(), exact);
    }

    #[test]
    fn rational_fields_survive_as_fractions() {
        let net = fitted::<Rational>();
        let text = to_json(&net);
        assert!(text.contains("\"epsilon\": \"1/8\""));
        let AnyNetwork::Rational(back) = from_json(&text, "mem").unwrap() else { panic!("mode changed") };
        for (a, b) in net.tables().iter().zip(back.tables()) {
            assert_eq!(a.entries(), b.entries());
        }
    }

    #[test]
    fn malformed_files_are_diagnosed() {
        let text = AnyNetwork::from(fitted::<f64>()).to_json();
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();

        let mut missing_table = value.clone();
        missing_table["tables"].as_array_mut().unwrap().pop();
        let err = from_json(&missing_table.to_string(), "net.json").unwrap_err();
        assert!(err.to_string().contains("expected 5 tables"), "{err}");

        let mut bad_version = value.clone();
        bad_version["version"] = "2".into();
        assert!(from_json(&bad_version.to_string(), "net.json").unwrap_err().to_string().contains("version"));

        let mut bad_number = value.clone();
        bad_number["tables"][1]["entries"][0][1] = "one".into();
        let err = from_json(&bad_number.to_string(), "net.json").unwrap_err();
        assert!(err.to_string().contains("tables[1].entries[0][1]"), "{err}");

        let mut wrong_type = value;
        wrong_type["stack"]["d"] = "two".into();
        let err = from_json(&serde_json::to_string_pretty(&wrong_type).unwrap(), "net.json").unwrap_err();
        assert!(err.to_string().contains("stack.d"), "{err}");
        assert!(matches!(err, KsnError::Format { .. }));

        let err = from_json("{", "net.json").unwrap_err();
        assert!(err.to_string().starts_with("net.json:1:"), "{err}");
    }
}
