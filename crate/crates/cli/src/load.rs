//! Resolving `--sig`/`--rules` arguments: either a preset name or a path.

use std::fs;
use std::path::Path;

use lei_core::calculus::{parse_rules, RuleSchema, RuleSet};
use lei_core::presets;
use lei_core::signature::Signature;

use crate::Failure;

fn read(path: &str) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read `{path}`: {e}")))
}

/// The signature named by a preset or stored in an `.lsig` file.
pub fn signature(spec: &str) -> Result<Signature, Failure> {
    if presets::is_preset(spec) {
        return Ok(presets::signature(spec)?);
    }
    Ok(Signature::parse(&read(spec)?)?)
}

/// Structural rules from a preset name or an `.lrul` file.
pub fn user_rules(spec: &str, sig: &Signature) -> Result<Vec<RuleSchema>, Failure> {
    let text = if presets::is_preset(spec) {
        presets::rules_text(spec)?.to_string()
    } else {
        read(spec)?
    };
    Ok(parse_rules(&text, sig)?)
}

/// The full rule set for `--sig S [--rules R]`. Without `--rules`, a preset
/// signature brings its own structural rules and a signature file brings
/// none.
pub fn ruleset(sig_spec: &str, rules_spec: Option<&str>) -> Result<RuleSet, Failure> {
    let sig = signature(sig_spec)?;
    let user = match rules_spec {
        Some(r) => user_rules(r, &sig)?,
        None if presets::is_preset(sig_spec) => user_rules(sig_spec, &sig)?,
        None => Vec::new(),
    };
    Ok(RuleSet::new(&sig, user)?)
}

/// The signature a rule file is read against when none is given: the preset
/// of the same name, or an `.lsig` file next to it with the same stem.
pub fn companion_signature(rules_spec: &str) -> Result<Signature, Failure> {
    if presets::is_preset(rules_spec) {
        return signature(rules_spec);
    }
    let path = Path::new(rules_spec);
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .ok_or_else(|| Failure::Input(format!("cannot derive a signature for `{rules_spec}`")))?;
    let sibling = path.with_extension("lsig");
    if sibling.exists() {
        return signature(&sibling.to_string_lossy());
    }
    if presets::is_preset(stem) {
        return signature(stem);
    }
    Err(Failure::Input(format!(
        "no signature for `{rules_spec}`: pass --sig or place `{}` next to it",
        sibling.display()
    )))
}
