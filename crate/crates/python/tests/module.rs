use pyo3::prelude::*;
use pypolyindex::pypolyindex as module;

#[test]
fn module_exposes_signatures_and_recognition() {
    pyo3::append_to_inittab!(module);
    Python::attach(|py| {
        py.run(
            c"
import pypolyindex as pi
star = pi.Graph(4, [(0, 1), (0, 2), (0, 3)])
assert star.d2() == [3, 18, 33, 24, 6]
assert star.char_poly() == [1, -6, 9, -4, 0]
wheel = pi.Graph(7, [(0, i) for i in range(1, 7)] + [(i, i % 6 + 1) for i in range(1, 7)])
db = pi.Database.build([('o', 'w', wheel)])
assert db.recognize([wheel.permute([6, 5, 4, 3, 2, 1, 0])])['w'] > 0
assert pi.Database.load(db.save()).views() == ['w']
try:
    pi.Graph(2, [(0, 5)])
    raise SystemExit('bad edge accepted')
except ValueError:
    pass
",
            None,
            None,
        )
        .unwrap();
    });
}
