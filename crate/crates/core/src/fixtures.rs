//! The small algebras shared by tests, the oracle harness and the CLI.

use alloc::vec;

use crate::effects::IntervalEffectAlgebra;
use crate::groups::{
    ConeSpec, Group, GroupElement, HermitianGroup, HermitianMatrix, IntVector, IntVectorGroup, UnitalGroup,
    DEFAULT_PSD_TOLERANCE,
};

/// Names of the bundled algebras, in listing order.
pub const NAMES: [&str; 5] = ["CHAIN4", "BOOL2", "C2xC3", "PENTA", "QUBIT"];

pub fn by_name(name: &str) -> Option<IntervalEffectAlgebra> {
    match name.to_ascii_uppercase().as_str() {
        "CHAIN4" => Some(chain4()),
        "BOOL2" => Some(bool2()),
        "C2XC3" => Some(c2xc3()),
        "PENTA" => Some(penta()),
        "QUBIT" => Some(qubit()),
        _ => None,
    }
}

fn coordinatewise(unit: &[i64]) -> IntervalEffectAlgebra {
    let group = Group::Int(IntVectorGroup::coordinatewise(unit.len()).expect("nonzero dimension"));
    let ambient = UnitalGroup::new(group, GroupElement::int(unit)).expect("positive unit");
    IntervalEffectAlgebra::new(ambient).with_cached_elements().expect("finite carrier")
}

/// The four-element chain `[0, 3]` in `ℤ`.
pub fn chain4() -> IntervalEffectAlgebra {
    coordinatewise(&[3])
}

/// `[0, 6]` in `ℤ`, the target of the doubling morphism out of CHAIN4.
pub fn chain7() -> IntervalEffectAlgebra {
    coordinatewise(&[6])
}

/// The four-element Boolean algebra `[0, (1,1)]` in `ℤ²`.
pub fn bool2() -> IntervalEffectAlgebra {
    coordinatewise(&[1, 1])
}

/// The product of a 2-chain and a 3-chain, `[0, (1,2)]` in `ℤ²`.
pub fn c2xc3() -> IntervalEffectAlgebra {
    coordinatewise(&[1, 2])
}

/// `[0, (2,2)]` in `ℤ²` ordered by the cone generated by `(1,0), (1,1), (1,2)`
/// with positivity functional `(1,0)`. Five elements; a lattice that is not MV.
pub fn penta() -> IntervalEffectAlgebra {
    let gens = [[1, 0], [1, 1], [1, 2]]
        .iter()
        .map(|g| IntVector::new(g.to_vec()).expect("nonempty"))
        .collect();
    let cone = ConeSpec::new(gens, Some(IntVector::new(vec![1, 0]).expect("nonempty"))).expect("valid cone");
    let ambient = UnitalGroup::new(Group::Int(IntVectorGroup::cone(cone)), GroupElement::int(&[2, 2]))
        .expect("positive unit");
    IntervalEffectAlgebra::new(ambient).with_cached_elements().expect("finite carrier")
}

/// Qubit effects: `[0, I]` in the 2×2 Hermitian matrices.
pub fn qubit() -> IntervalEffectAlgebra {
    hermitian(2, DEFAULT_PSD_TOLERANCE)
}

pub fn hermitian(dimension: usize, psd_tolerance: f64) -> IntervalEffectAlgebra {
    let group = Group::Hermitian(HermitianGroup::new(dimension, psd_tolerance).expect("valid tolerance"));
    let ambient = UnitalGroup::new(group, GroupElement::Hermitian(HermitianMatrix::identity(dimension)))
        .expect("identity is positive");
    IntervalEffectAlgebra::new(ambient)
}
