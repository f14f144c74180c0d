"""Door-anchored facility enumeration and compliance checking for floor plans."""

from ._core import (
    Box,
    DoorBox,
    FacenumError,
    accuracy,
    check_compliance,
    enumerate_with_oracle,
    facility_types,
    filter_doors,
    final_count,
    generate_bundle,
    iou,
    merge_tile_detections,
    parse_count,
    parse_verdict,
    plan_tiles,
    __version__,
)

__all__ = [
    "Box",
    "DoorBox",
    "FacenumError",
    "accuracy",
    "check_compliance",
    "enumerate_with_oracle",
    "facility_types",
    "filter_doors",
    "final_count",
    "generate_bundle",
    "iou",
    "merge_tile_detections",
    "parse_count",
    "parse_verdict",
    "plan_tiles",
    "__version__",
]
