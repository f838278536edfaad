use landcore::geometry::{Box2, Point2};
use landcore_web::{ccm_compare_json, stratify_json, window_demo_json};
use serde_json::Value;

#[test]
fn ccm_compare_on_demo_document() {
    let v: Value = serde_json::from_str(
        &ccm_compare_json("", Point2::new(50.0, 50.0), Point2::new(950.0, 950.0), 20.0, 8, 4).unwrap(),
    )
    .unwrap();
    let raster = v["raster"]["cost"].as_f64().unwrap();
    let vector = v["vector"]["cost"].as_f64().unwrap();
    assert!(vector <= raster, "{vector} > {raster}");
    assert_eq!(v["vector"]["method"], "VECTOR(4)");
    assert_eq!(v["vector"]["vertices"][0], serde_json::json!([50.0, 50.0]));
    assert!(v["regions"].as_array().unwrap().iter().any(|r| r["weight"].is_null()));
}

#[test]
fn ccm_compare_reports_unreachable_as_null() {
    let v: Value = serde_json::from_str(
        &ccm_compare_json("", Point2::new(50.0, 50.0), Point2::new(400.0, 500.0), 20.0, 8, 2).unwrap(),
    )
    .unwrap();
    assert!(v["raster"]["cost"].is_null() && v["vector"]["cost"].is_null());
    assert!(ccm_compare_json("", Point2::new(-1.0, 0.0), Point2::new(5.0, 5.0), 20.0, 8, 2).is_err());
    assert!(ccm_compare_json("{", Point2::new(1.0, 1.0), Point2::new(5.0, 5.0), 20.0, 8, 2).is_err());
}

#[test]
fn window_demo_contrasts_selections() {
    let w = Box2::from_coords(12.0, 12.0, 28.0, 28.0).unwrap();
    let v: Value = serde_json::from_str(&window_demo_json(6, 4, w).unwrap()).unwrap();
    let areas = v["areas"].as_array().unwrap();
    assert_eq!(areas.len(), 4);
    assert!(areas.iter().all(|a| a["abox"] == "complete"));
    assert!(areas.iter().any(|a| a["bbox"] == "incomplete"));
    assert!(v["stored_vertices"].as_u64() < v["input_vertices"].as_u64());
}

#[test]
fn stratify_is_seeded() {
    let a = stratify_json("", 200.0, 30, 42).unwrap();
    assert_eq!(a, stratify_json("", 200.0, 30, 42).unwrap());
    assert_ne!(a, stratify_json("", 200.0, 30, 43).unwrap());
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["points"].as_array().unwrap().len(), 30);
    let samples: u64 = v["strata"].as_array().unwrap().iter().map(|s| s["samples"].as_u64().unwrap()).sum();
    assert_eq!(samples, 30);
}
