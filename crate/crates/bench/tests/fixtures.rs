use cheeger_bench::{bent_strip, comb, polygon, sector};
use cheeger_core::{solve_convex, stripize};

#[test]
fn fixtures_are_valid_inputs() {
    assert!(solve_convex(&polygon(16), None).is_ok());
    assert!(sector(1.5 * std::f64::consts::PI).area() > 0.0);
    let strip = bent_strip();
    for teeth in [2, 16] {
        let rep = stripize(&comb(&strip, teeth), &strip).unwrap();
        assert!(rep.star_perimeter / rep.star_area < rep.input_perimeter / rep.input_area);
    }
}
