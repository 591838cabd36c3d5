//! Shared model builders for the benchmarks.

use logsym_core::symcalc::{LogForm, Multivector, TrigPoly};
use logsym_core::{Arrangement, Partition};

/// The worked T⁴ example: ω = dx/sin(x)∧dy/sin(y) + dz/sin(z)∧dt and its
/// inverse bivector sin(x)sin(y) ∂y∧∂x + sin(z) ∂t∧∂z.
pub fn worked_t4() -> (LogForm, Multivector, Arrangement) {
    let omega = LogForm::covector(4, 0, true)
        .wedge(&LogForm::covector(4, 1, true))
        .unwrap()
        .add(
            &LogForm::covector(4, 2, true)
                .wedge(&LogForm::covector(4, 3, false))
                .unwrap(),
        )
        .unwrap();
    let pi = Multivector::field(4, 1)
        .wedge(&Multivector::field(4, 0))
        .unwrap()
        .scale(&(&TrigPoly::sin(4, 0, 1) * &TrigPoly::sin(4, 1, 1)))
        .add(
            &Multivector::field(4, 3)
                .wedge(&Multivector::field(4, 2))
                .unwrap()
                .scale(&TrigPoly::sin(4, 2, 1)),
        )
        .unwrap();
    let arr = Arrangement::torus_model(4, &[0, 1, 2]).unwrap();
    (omega, pi, arr)
}

/// T⁸ with six divisors: two pairs and two singles.
pub fn large_t8() -> (Arrangement, Partition) {
    let arr = Arrangement::torus_model(8, &[0, 1, 2, 3, 4, 5]).unwrap();
    let partition = Partition::new(
        &arr,
        vec![("Z0".into(), "Z1".into()), ("Z2".into(), "Z3".into())],
        vec!["Z4".into(), "Z5".into()],
    )
    .unwrap();
    (arr, partition)
}
