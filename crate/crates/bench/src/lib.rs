//! Fixtures shared by the benchmarks.

use qchev_core::modules::{irreducible, WeightModule};
use qchev_core::{CartanDatum, Weight};

/// The adjoint module of a rank-two type, or `L_2` in rank one.
pub fn adjoint(name: &str) -> WeightModule {
    let datum = CartanDatum::from_name(name).expect("known type");
    let hw = match name {
        "A1" => vec![2],
        "A2" => vec![1, 1],
        "B2" => vec![0, 2],
        "G2" => vec![1, 0],
        other => panic!("no adjoint fixture for {}", other),
    };
    irreducible(&datum, &Weight(hw)).expect("adjoint module builds")
}

#[cfg(test)]
mod tests {
    #[test]
    fn fixtures_have_zero_weight() {
        for n in ["A1", "A2", "B2"] {
            let v = super::adjoint(n);
            assert!(v.weight_dim(&qchev_core::Weight::zero(v.rank())) > 0);
        }
    }
}
