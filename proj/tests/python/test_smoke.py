"""Smoke tests for the python bindings against the CMake-built extension."""

import json

import pytest

import facenum


def test_iou_matches_hand_arithmetic():
    a = facenum.Box(0, 0, 10, 10)
    b = facenum.Box(5, 0, 15, 10)
    assert facenum.iou(a, a) == 1.0
    assert facenum.iou(a, b) == pytest.approx(50.0 / 150.0)
    assert facenum.iou(a, facenum.Box(20, 20, 30, 30)) == 0.0


def test_final_count_and_parsers():
    assert facenum.final_count(2, 1) == 3
    assert facenum.parse_verdict("YES, it is a toilet") == "yes"
    assert facenum.parse_verdict("facing north, yes") == "yes"
    assert facenum.parse_count("there are two missing") == 2
    with pytest.raises(facenum.FacenumError):
        facenum.parse_count("I see none")


def test_facility_types_round_trip():
    names = facenum.facility_types()
    assert len(names) == 9
    assert "emergency-exit" in names
    assert all(name == name.lower() for name in names)


def test_filter_doors_gates_and_dedups():
    doors = [
        facenum.DoorBox(0, facenum.Box(10, 10, 30, 20), 0.9),
        facenum.DoorBox(1, facenum.Box(10, 10, 30, 20), 0.7),  # duplicate
        facenum.DoorBox(2, facenum.Box(60, 10, 80, 20), 0.2),  # below the gate
    ]
    kept = facenum.filter_doors(doors, confidence_threshold=0.5, dedup_iou_threshold=0.8)
    assert len(kept) == 1
    assert kept[0].confidence == 0.9
    assert kept[0].door_id == 0


def test_plan_tiles_covers_the_documented_grid():
    tiles = facenum.plan_tiles(1000, 1000, 600, 100)
    origins = sorted((t.x_min, t.y_min) for t in tiles)
    assert origins == [(0, 0), (0, 400), (400, 0), (400, 400)]


def test_merge_tile_detections_dedups_straddlers():
    per_tile = [
        (0, 0, [facenum.DoorBox(0, facenum.Box(500, 100, 600, 150), 0.9)]),
        (400, 0, [facenum.DoorBox(0, facenum.Box(104, 100, 204, 150), 0.8)]),
    ]
    merged = facenum.merge_tile_detections(per_tile, 0.8)
    assert len(merged) == 1
    assert merged[0].confidence == 0.9


def test_accuracy_is_exact_match_fraction():
    truth = {f"p{i}": 1 for i in range(97)}
    pred = dict(truth)
    for i in range(85, 97):
        pred[f"p{i}"] = 2
    assert facenum.accuracy(pred, truth) == pytest.approx(85.0 / 97.0)


def test_end_to_end_offline_pipeline(tmp_path):
    spec = {
        "seed": 11,
        "rooms_per_type": {"toilet": 2, "kitchen": 1},
        "doorless_rooms": {"toilet": 1},
        "two_door_prob": 0.5,
        "decoy_doors": 1,
        "width_px": 600,
        "height_px": 440,
    }
    plan_id = facenum.generate_bundle(json.dumps(spec), str(tmp_path))
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    entry = manifest["plans"][0]
    assert entry["plan"]["plan_id"] == plan_id
    assert entry["truth"]["toilet"] == 3

    result = facenum.enumerate_with_oracle(
        image_path=entry["plan"]["image_uri"],
        detections_path=entry["detections"],
        oracle_path=entry["oracle"],
        facility="toilet",
        plan_id=plan_id,
    )
    assert result["n_final"] == 3
    assert result["n_final"] == len(result["representatives"]) + result["n_missing"]


def test_compliance_check_round_trips():
    verdict = facenum.check_compliance(
        {"toilet": 1, "kitchen": 1, "laundry": 1, "exit": 1,
         "parking-standard": 1, "fire-safety": 1},
        json.dumps({"building_class": 1, "dwellings": 1, "floors": 1}),
    )
    assert verdict["overall_pass"] is True
    report = json.loads(verdict["report_json"])
    assert any(e["rule_id"] == "exits-class1" for e in report["entries"])

    verdict = facenum.check_compliance(
        {"exit": 1},
        json.dumps({"building_class": 2, "dwellings": 2, "floors": 1}),
    )
    assert verdict["overall_pass"] is False
