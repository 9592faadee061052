use polarity_core::plane::{
    arc_line_counts, classify_lines, conic_oval, orthogonal_polarity, PlaneError,
};
use polarity_core::{Field, Oval, Plane, Polarity};

const ORDERS: [u64; 8] = [2, 3, 4, 5, 7, 8, 9, 11];

fn pg(q: u64) -> Plane {
    Plane::pg(&Field::with_order(q).unwrap())
}

#[test]
fn generated_planes_satisfy_the_axioms() {
    for q in ORDERS {
        let plane = pg(q);
        let q = q as usize;
        assert_eq!(plane.num_points(), q * q + q + 1);
        assert_eq!(plane.num_lines(), q * q + q + 1);
        assert!(plane.lines().iter().all(|l| l.len() == q + 1));
        plane.check_axioms().unwrap();
        let quad = plane.find_quadrilateral().expect("four points in general position");
        for a in 0..4 {
            for b in a + 1..4 {
                for c in b + 1..4 {
                    let l = plane.line_through(quad[a], quad[b]).unwrap();
                    assert!(!plane.is_incident(quad[c], l));
                }
            }
        }
    }
}

#[test]
fn lines_are_the_kernels_of_their_coordinates() {
    let f = Field::with_order(5).unwrap();
    let plane = Plane::pg(&f);
    for l in 0..plane.num_lines() {
        let lc = plane.coords(l).unwrap();
        for p in 0..plane.num_points() {
            let pc = plane.coords(p).unwrap();
            let dot = (0..3).fold(f.zero(), |acc, i| f.add(acc, f.mul(pc[i], lc[i])));
            assert_eq!(plane.is_incident(p, l), dot.is_zero());
        }
    }
}

#[test]
fn orthogonal_polarity_is_an_involutive_incidence_map() {
    for q in ORDERS {
        let plane = pg(q);
        let pol = orthogonal_polarity(&plane).unwrap();
        pol.validate(&plane).unwrap();
        for p in 0..plane.num_points() {
            assert_eq!(pol.line_to_point(pol.point_to_line(p)), p);
            for r in 0..plane.num_points() {
                assert_eq!(
                    plane.is_incident(p, pol.point_to_line(r)),
                    plane.is_incident(r, pol.point_to_line(p))
                );
            }
        }
        assert_eq!(pol.absolute_points(&plane).count(), q as usize + 1);
    }
}

#[test]
fn plane_and_polarity_files_round_trip() {
    let plane = pg(4);
    let loaded = Plane::load(&plane.export()).unwrap();
    assert_eq!(loaded.lines(), plane.lines());
    assert_eq!(loaded.export(), plane.export());
    let pol = orthogonal_polarity(&plane).unwrap();
    let back = Polarity::load(&loaded, &pol.export()).unwrap();
    for p in 0..plane.num_points() {
        assert_eq!(back.point_to_line(p), pol.point_to_line(p));
    }
    assert_eq!(orthogonal_polarity(&loaded).unwrap_err(), PlaneError::NoCoordinates);
}

#[test]
fn malformed_plane_files_are_rejected() {
    let text = pg(2).export();
    // drop a point from the last line
    let mut rows: Vec<String> = text.lines().map(str::to_string).collect();
    let last = rows.len() - 1;
    let trimmed: Vec<&str> = rows[last].split_whitespace().take(2).collect();
    rows[last] = trimmed.join(" ");
    assert!(matches!(
        Plane::load(&rows.join("\n")),
        Err(PlaneError::RaggedLine { found: 2, expected: 3, .. })
    ));

    // two copies of the same line break "two lines meet once"
    let mut rows: Vec<String> = text.lines().map(str::to_string).collect();
    rows[2] = rows[1].clone();
    assert!(matches!(
        Plane::load(&rows.join("\n")),
        Err(PlaneError::AxiomViolation(..))
    ));

    assert!(matches!(Plane::load("order 2\n0 1 x\n"), Err(PlaneError::Parse { .. })));
}

#[test]
fn conic_is_an_oval_with_the_closed_form_line_counts() {
    for q in ORDERS {
        let plane = pg(q);
        let oval = conic_oval(&plane).unwrap();
        let q = q as usize;
        assert_eq!(oval.len(), q + 1);
        let c = classify_lines(&plane, oval.points()).unwrap();
        assert_eq!(c.counts(), arc_line_counts(q, q + 1));
        assert_eq!(c.counts(), (q * (q - 1) / 2, q + 1, q * (q + 1) / 2));
        assert_eq!(c.exterior + c.tangent + c.secant, plane.num_lines());
    }
}

#[test]
fn smaller_arcs_match_the_closed_form() {
    let plane = pg(7);
    let oval = conic_oval(&plane).unwrap();
    for k in 0..=oval.len() {
        let c = classify_lines(&plane, &oval.points()[..k]).unwrap();
        assert_eq!(c.counts(), arc_line_counts(7, k), "k = {k}");
    }
}

#[test]
fn non_arcs_are_rejected() {
    let plane = pg(5);
    let line = plane.line(0).to_vec();
    let mut pts = line[..3].to_vec();
    pts.extend(conic_oval(&plane).unwrap().points().iter().filter(|p| !line.contains(p)).take(3));
    assert!(matches!(Oval::new(&plane, pts), Err(PlaneError::NotAnArc { .. })));
    assert!(matches!(Oval::new(&plane, vec![0, 1]), Err(PlaneError::OvalSize { .. })));
}
