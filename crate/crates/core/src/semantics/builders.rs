//! Ready-made finite structures: modular rings, cyclic and Klein groups,
//! and small finite fields 𝔽_{p^k}.

use std::collections::BTreeMap;

use super::{FiniteStructure, SemanticsError};
use crate::poly::ExtField;
use crate::syntax::Signature;

/// ℤ/n with the ring signature (+, -, *, 0, 1). For n = 1 both constants
/// name the single element.
pub fn zmod_ring(n: u64) -> FiniteStructure {
    assert!(n >= 1, "modulus must be positive");
    let n = n as usize;
    let universe: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    FiniteStructure::from_interpretation(
        Signature::ring(),
        universe,
        |name, args| match name {
            "+" => (args[0] + args[1]) % n,
            "-" => (args[0] + n - args[1]) % n,
            "*" => (args[0] * args[1]) % n,
            _ => unreachable!("ring signature"),
        },
        |_, _| false,
        |name| match name {
            "0" => 0,
            "1" => 1 % n,
            _ => unreachable!("ring signature"),
        },
    )
    .expect("modular ring tables are total")
}

fn group_signature() -> Signature {
    Signature::new(vec![("+", 2)], vec![], vec!["0"]).expect("group signature is valid")
}

/// The cyclic group ℤ/n in the signature (+, 0).
pub fn zmod_group(n: u64) -> FiniteStructure {
    assert!(n >= 1, "order must be positive");
    let n = n as usize;
    let universe: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    FiniteStructure::from_interpretation(
        group_signature(),
        universe,
        |_, args| (args[0] + args[1]) % n,
        |_, _| false,
        |_| 0,
    )
    .expect("cyclic group tables are total")
}

/// The Klein four-group (ℤ/2 × ℤ/2) in the signature (+, 0); addition is
/// XOR on the element indices.
pub fn klein_group() -> FiniteStructure {
    let universe = vec!["0".to_string(), "a".to_string(), "b".to_string(), "c".to_string()];
    FiniteStructure::from_interpretation(
        group_signature(),
        universe,
        |_, args| args[0] ^ args[1],
        |_, _| false,
        |_| 0,
    )
    .expect("Klein group tables are total")
}

/// The finite field 𝔽_{p^k} as a ring-signature structure. Elements are
/// labeled by their polynomial expression in the generator t, e.g. "t+1".
pub fn gf(p: u64, k: usize) -> Result<FiniteStructure, SemanticsError> {
    let field = ExtField::new(p, k).map_err(|e| SemanticsError::Field(e.to_string()))?;
    let elems: Vec<_> = field.elements().collect();
    let labels: Vec<String> = elems.iter().map(|e| ext_label(&e.0)).collect();
    let pos: BTreeMap<Vec<u64>, usize> =
        elems.iter().enumerate().map(|(i, e)| (e.0.clone(), i)).collect();
    FiniteStructure::from_interpretation(
        Signature::ring(),
        labels,
        |name, args| {
            let x = &elems[args[0]];
            let y = &elems[args[1]];
            let value = match name {
                "+" => field.add(x, y),
                "-" => field.sub(x, y),
                "*" => field.mul(x, y),
                _ => unreachable!("ring signature"),
            };
            pos[&value.0]
        },
        |_, _| false,
        |name| match name {
            "0" => pos[&field.zero().0],
            "1" => pos[&field.one().0],
            _ => unreachable!("ring signature"),
        },
    )
}

/// Render a coefficient vector (ascending powers of t) as a compact label.
fn ext_label(coeffs: &[u64]) -> String {
    let mut parts = Vec::new();
    for i in (0..coeffs.len()).rev() {
        let c = coeffs[i];
        if c == 0 {
            continue;
        }
        parts.push(match i {
            0 => c.to_string(),
            1 if c == 1 => "t".to_string(),
            1 => format!("{c}t"),
            _ if c == 1 => format!("t^{i}"),
            _ => format!("{c}t^{i}"),
        });
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join("+")
    }
}
