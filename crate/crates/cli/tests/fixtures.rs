mod common;

use common::*;
use pachner_core::normal::{enumerate_fundamental_solutions_chambered, weight_formula};
use pachner_core::*;

#[test]
fn manifest_matches_computed_invariants() {
    for e in manifest().fixture {
        let tri = load(&e.name);
        assert_eq!(tri.size(), e.tetrahedra, "{}", e.name);
        assert_eq!(validate(&tri).verdict.as_str(), e.verdict, "{}", e.name);
        let s = skeleton(&tri);
        assert_eq!((s.vertex_count, s.edge_count, s.face_count), (e.vertices, e.edges, e.faces), "{}", e.name);
        if let Some(o) = e.orientable {
            assert_eq!(tri.is_orientable(), o, "{}", e.name);
        }
        let Ok(m) = Manifold::new(tri) else { continue };
        let text = |g: [HomologyGroup; 4]| g.iter().map(|h| h.to_string()).collect::<Vec<_>>();
        if let Some(h) = &e.homology {
            assert_eq!(&text(homology_groups(&m)), h, "{}", e.name);
        }
        if let Some(h) = &e.relative {
            assert_eq!(&text(relative_homology(&m)), h, "{}", e.name);
        }
        let names: Vec<&str> = boundary_components(m.triangulation())
            .iter()
            .map(|c| match (c.euler_characteristic, c.orientable) {
                (2, true) => "sphere",
                (0, true) => "torus",
                (0, false) => "klein bottle",
                _ => "other",
            })
            .collect();
        assert_eq!(names, e.boundary.clone().unwrap_or_default().iter().map(String::as_str).collect::<Vec<_>>());
        let chi = skeleton(m.triangulation()).euler_characteristic;
        let bchi: i64 = boundary_components(m.triangulation()).iter().map(|c| c.euler_characteristic).sum();
        assert_eq!(2 * chi, bchi, "{}", e.name);
    }
}

#[test]
fn vertex_solutions_match_frozen_lists() {
    for e in manifest().fixture {
        let Some(count) = e.vertex_surfaces else { continue };
        let m = manifold(&e.name);
        let got = enumerate_vertex_solutions(&m);
        let mut want: Vec<Vec<u64>> = frozen(&e.name, "vertex").into_iter().map(|p| p.1).collect();
        want.sort();
        assert_eq!(got.len(), count, "{}", e.name);
        assert_eq!(got, want, "{}", e.name);
    }
}

#[test]
fn fundamental_solutions_match_frozen_lists() {
    for e in manifest().fixture {
        let Some(count) = e.fundamental_surfaces else { continue };
        if e.tetrahedra > 6 {
            continue;
        }
        let m = manifold(&e.name);
        let got = enumerate_fundamental_solutions(&m, None);
        let mut want: Vec<Vec<u64>> = frozen(&e.name, "fundamental").into_iter().map(|p| p.1).collect();
        want.sort();
        assert_eq!(got.len(), count, "{}", e.name);
        assert_eq!(got, want, "{}", e.name);
        if e.tetrahedra <= 5 {
            assert_eq!(enumerate_fundamental_solutions_chambered(&m, None), got, "{}", e.name);
        }
    }
}

#[test]
fn surfaces_match_frozen_invariants() {
    for name in manifold_names() {
        let m = manifold(&name);
        for kind in ["vertex", "fundamental"] {
            for (inv, x) in frozen(&name, kind) {
                let s = build_surface(&m, &x).unwrap();
                let got = [s.euler_characteristic, s.is_connected() as i64, s.orientable as i64, s.two_sided as i64];
                assert_eq!(got, inv, "{name} {x:?}");
                assert_eq!(s.weight, weight_formula(&m, &x), "{name} {x:?}");
            }
        }
    }
}

#[test]
fn box_bound_keeps_small_fundamentals() {
    let m = manifold("trefoil");
    let all = enumerate_fundamental_solutions(&m, None);
    for b in 1..4 {
        let small: Vec<Vec<u64>> = all.iter().filter(|x| x.iter().all(|&v| v <= b)).cloned().collect();
        assert_eq!(enumerate_fundamental_solutions(&m, Some(b)), small);
    }
}

#[test]
fn exhaustive_scan_on_two_tetrahedra() {
    for name in ["ball2", "solidtorus"] {
        let m = manifold(&name);
        let f = enumerate_fundamental_solutions(&m, None);
        let all = admissible_below(&m, &[2; 14]);
        assert!(undecomposable(&all, &f).is_empty(), "{name}");
        for x in all.iter().step_by(97) {
            let d = decompose(&m, x, &f).unwrap();
            assert_eq!(&d.total(14), x);
        }
        assert!(f.iter().all(|x| !splits(&m, x)), "{name}");
    }
}

#[test]
fn knot_complements() {
    for name in ["trefoil", "figure8"] {
        let m = manifold(&name);
        let h = homology_groups(&m);
        assert_eq!(h[1].to_string(), "Z");
        assert_eq!(relative_homology(&m)[2].to_string(), "Z");
        assert_eq!(boundary_homology(&m)[1].betti, 2);
        let p = peripheral_map(&m).unwrap();
        assert!(p.surjective);
        assert_eq!(p.image_rank, 1);
        let e = exactness_check(&m).unwrap();
        assert!(e.exact && e.torus_rank_ok);
        assert_eq!(e.note, "exact: 1 + 1 = 2");
    }
    let p = peripheral_map(&manifold("torusxI")).unwrap();
    assert_eq!((p.image_rank, p.surjective), (2, true));
    let e = exactness_check(&manifold("solidtorus")).unwrap();
    assert_eq!((e.rel_h2_rank, e.boundary_h1_rank, e.h1_rank), (1, 2, 1));
    assert!(!exactness_check(&manifold("ball1")).unwrap().applicable);
    assert!(peripheral_map(&manifold("s3_1tet")).is_err());
}

#[test]
fn additivity_on_trefoil_vertex_pairs() {
    let m = manifold("trefoil");
    let v = enumerate_vertex_solutions(&m);
    let mut pairs = 0;
    for (i, x) in v.iter().enumerate() {
        for y in &v[i..] {
            if compatible(&m, x, y).unwrap() {
                verify_additivity(&m, x, y).unwrap();
                pairs += 1;
            }
        }
    }
    assert!(pairs > v.len());
}

#[test]
fn search_from_the_sphere() {
    let m = manifold("s3_1tet");
    let (end, walk) = random_walk(&m, 4, 7);
    assert_eq!(walk.len(), 4);
    let r = connect(&m, &end, 4, 100_000);
    assert_eq!(r.status, SearchStatus::Connected);
    assert!(r.path.len() <= 4);
    let replay = apply_moves(&m, &r.path).unwrap();
    assert_eq!(canonical_signature(replay.triangulation()), canonical_signature(end.triangulation()));
}

#[test]
fn layering_on_the_solid_torus() {
    let m = manifold("solidtorus");
    let (before, _) = pachner_core::surface2::boundary_surface(m.triangulation());
    let layers: Vec<MoveSite> = enumerate_moves(&m)
        .into_iter()
        .filter(|s| matches!(s, MoveSite::BdryLayer { edge: Some(_), .. }))
        .collect();
    assert!(!layers.is_empty());
    for site in layers {
        let n = apply_move(&m, site).unwrap();
        assert_eq!(n.size(), 3);
        let (after, _) = pachner_core::surface2::boundary_surface(n.triangulation());
        assert_eq!(after.size(), before.size());
        let flips: Vec<String> = (0..before.size())
            .flat_map(|k| (0..3).map(move |e| (k, e)))
            .filter_map(|(k, e)| before.flip_22(k, e))
            .map(|s| s.canonical_signature())
            .collect();
        assert!(flips.contains(&after.canonical_signature()));
    }
}
