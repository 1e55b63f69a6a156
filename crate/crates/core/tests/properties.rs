use proptest::prelude::*;
use sigmafold_core::generators::{self as g, GeneratorSpec};
use sigmafold_core::geometry::{congruence_check, realize};
use sigmafold_core::star::star_vectors;
use sigmafold_core::{io, Coord4, Edge, Facet, FacetType, PeriodLattice, SigmaComplex, StarParams};

const SIZED: [&str; 5] = ["eggbox", "miura", "miura-weave", "link-field", "dos-equis-layer"];

fn spec() -> impl Strategy<Value = GeneratorSpec> {
    (0..SIZED.len(), 1usize..3, 1usize..3, any::<bool>()).prop_map(|(k, m, n, p)| GeneratorSpec::sized(SIZED[k], m, n, p))
}

fn coord() -> impl Strategy<Value = Coord4> {
    prop::array::uniform4(-6i64..=6).prop_map(|[a, b, c, d]| Coord4::new(a, b, c, d))
}

/// Grows a complex from one facet, picking boundary edges and candidates
/// by the given indices.
fn grow(picks: &[(usize, usize)]) -> SigmaComplex {
    let mut c = SigmaComplex::new([Facet::new(Coord4::ZERO, FacetType::T13)], &[]).unwrap();
    for &(e, k) in picks {
        let boundary = c.boundary();
        let edge = boundary[e % boundary.len()];
        let cands = c.legal_extensions(edge).unwrap();
        if cands.is_empty() {
            continue;
        }
        c = c.extend(cands[k % cands.len()]).unwrap();
    }
    c
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn documents_round_trip(s in spec()) {
        let c = g::generate(&s).unwrap();
        let params = StarParams::tetrahedral();
        let text = io::serialize(&c, &params, Some(&s));
        let (back, p2) = io::parse(&text).unwrap();
        prop_assert_eq!(back.facet_set(), c.facet_set());
        prop_assert_eq!(back.periods(), c.periods());
        prop_assert_eq!(p2, params);
        prop_assert_eq!(io::serialize(&back, &p2, Some(&s)), text);
    }

    #[test]
    fn facets_stay_congruent_through_the_fold(s in spec(), t in 0.02f64..0.98) {
        let c = g::generate(&s).unwrap();
        let r = congruence_check(&c, &StarParams::tetrahedral(), t, 0.5, 1e-9, 1).unwrap();
        prop_assert!(r.ok, "max deviation {}", r.max_deviation);
    }

    #[test]
    fn interior_vertices_have_even_valency(s in spec()) {
        let c = g::generate(&s).unwrap();
        for v in c.interior_vertices() {
            prop_assert_eq!(c.link(v).unwrap().valency() % 2, 0, "vertex {:?}", v);
        }
    }

    #[test]
    fn admissible_pairs_meet_at_the_facet_angle(lambda in 0.05f64..0.95, t in 0.0f64..=1.0) {
        let params = StarParams::new([1.0; 4], lambda).unwrap();
        let v = star_vectors(&params.state_at(t).unwrap());
        for ft in FacetType::ADMISSIBLE {
            let d = v[ft.i() - 1].dot(&v[ft.j() - 1]);
            prop_assert!((d.abs() - lambda).abs() < 1e-12, "{ft:?}: {d}");
        }
    }

    #[test]
    fn realized_edges_are_star_vectors(s in spec(), t in 0.05f64..0.95) {
        let c = g::generate(&s).unwrap();
        let params = StarParams::tetrahedral();
        let m = realize(&c, &params, t, 1).unwrap();
        let v = star_vectors(&params.state_at(t).unwrap());
        for f in &m.facets {
            for e in f.edges() {
                let d = m.point(&e.head()) - m.point(&e.tail);
                prop_assert!((d - v[e.dir as usize - 1]).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn reduction_is_canonical(c in coord(), k in prop::array::uniform3(-4i64..=4)) {
        let lat = PeriodLattice::new(&g::LINK_PERIODS).unwrap();
        let shifted = c + lat.combine(&k);
        let r = lat.reduce(c);
        prop_assert_eq!(lat.reduce(shifted), r);
        prop_assert_eq!(lat.reduce(r), r);
        prop_assert!(lat.contains(c - r));
    }

    #[test]
    fn grown_complexes_stay_legal(picks in prop::collection::vec((0usize..64, 0usize..3), 0..12)) {
        let c = grow(&picks);
        for e in c.boundary() {
            let cands = c.legal_extensions(e).unwrap();
            prop_assert!(cands.len() <= 3);
            for f in cands {
                let next = c.extend(f).unwrap();
                prop_assert_eq!(next.len(), c.len() + 1);
            }
        }
        let interior: Vec<Edge> = c.edges().into_iter().filter(|(_, n)| *n == 2).map(|(e, _)| e).collect();
        for e in interior {
            prop_assert!(c.legal_extensions(e).is_err());
        }
        let text = io::serialize(&c, &StarParams::tetrahedral(), None);
        let (back, _) = io::parse(&text).unwrap();
        prop_assert_eq!(back.facet_set(), c.facet_set());
    }
}
