mod common;

use common::fixture_system;
use darbkit_core::lie::divergence;
use darbkit_core::render_poly;

#[test]
fn lorenz_fixture_substitutes_parameters() {
    let spec = fixture_system("lorenz_b2s.vf");
    let comps: Vec<String> = spec.field.components().iter().map(render_poly).collect();
    assert_eq!(comps, ["-x + y", "-x*z + 28*x - y", "x*y - 2*z"]);
    assert_eq!(render_poly(&divergence(&spec.field)), "-4");
}

#[test]
fn shipped_systems() {
    let expected = [
        ("diag3.vf", vec!["x", "y", "z"]),
        ("shear.vf", vec!["1", "y"]),
        ("rot2.vf", vec!["y", "-x"]),
        ("lorenz_s13.vf", vec!["-1/3*x + 1/3*y", "-x*z + x - y", "x*y"]),
    ];
    for (file, comps) in expected {
        let spec = fixture_system(file);
        let got: Vec<String> = spec.field.components().iter().map(render_poly).collect();
        assert_eq!(got, comps, "{file}");
    }
}
