"""Reproducible tabletop scene benchmark toolkit.

From object meshes to an entropy-optimal diverse scene set with reference
renders, plus grasp utilities and the pick-and-place evaluation layer.
"""

__version__ = "0.1.0"

from .errors import (
    ConfigurationError,
    DuplicateRecordError,
    EventError,
    GenerationError,
    GeometryError,
    OracleError,
    ParseError,
    RenderError,
    SceneforgeError,
    SelectionError,
    WidthExceededError,
)
from .geometry import (
    OrientedBox,
    PlanarPca,
    PointCloud,
    Pose,
    StablePose,
    TriMesh,
    compute_stable_poses,
    farthest_point_sample,
    load_mesh,
    load_stable_poses,
    mesh_center_of_mass,
    oriented_bbox_xy,
    pca_xy,
    sample_surface_points,
    save_mesh,
    save_stable_poses,
)
from .grasps import (
    Grasp,
    GraspSet,
    downsample_grasps,
    grasp_to_base_frame,
    load_grasp_set,
    save_grasp_set,
    top_down_grasp,
)
from .metrics import (
    MaskAssignment,
    MaskSet,
    PoseEstimate,
    ResultsTable,
    TrialEvent,
    TrialRecord,
    add,
    add_s,
    aggregate_results,
    boundary_prf,
    classify_failure,
    load_trial_records,
    mask_boundary,
    match_masks,
    model_points,
    overlap75,
    overlap_prf,
    save_trial_records,
    segmentation_report,
)
from .reachability import (
    AnnulusReachOracle,
    ConstantReachOracle,
    GridSpec,
    ReachabilityMap,
    ReachabilityProbe,
    ReachOracle,
    TableSpec,
    analytic_reach_oracle,
    build_grid,
    compute_reachability_map,
    standoff_pose,
)
from .render import (
    CameraModel,
    OverlayBundle,
    ReferenceImage,
    default_camera,
    export_overlay_asset,
    load_overlay_bundle,
    look_at_extrinsics,
    project_point,
    rasterize_scene,
)
from .scenes import (
    AcceptAllPlanOracle,
    AnalyticPlanOracle,
    FeasibilityReport,
    ObjectModel,
    Placement,
    PlanOracle,
    Scene,
    check_collision_free,
    generate_candidates,
    generate_scene,
    load_scene,
    placement_footprint,
    save_scene,
    validate_scene,
    validate_scene_feasibility,
)
from .seeding import derive_seed
from .selection import (
    PoseHistogram,
    SceneSet,
    SelectionConfig,
    load_scene_set,
    object_count_constraint,
    pose_entropy,
    save_scene_set,
    select_best_set,
)
