"""Command-line entry point wiring the full benchmark workflow.

Subcommands: stable-poses, reachability, generate, select, render, grasps,
validate, metrics, pipeline, serve.  Every randomized default is printed
and recorded in the run manifest so each stage can be replayed exactly.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .errors import SceneforgeError
from .fixtures import write_object_library
from .geometry import (
    PointCloud,
    Pose,
    compute_stable_poses,
    load_mesh,
    save_stable_poses,
)
from .grasps import (
    downsample_grasps,
    load_grasp_set,
    save_grasp_set,
    top_down_grasp,
)
from .manifest import RunManifest, write_atomic
from .metrics import (
    MaskSet,
    add_s,
    aggregate_results,
    aggregate_segmentation,
    load_trial_records,
    segmentation_report,
)
from .reachability import (
    GridSpec,
    ReachabilityMap,
    TableSpec,
    analytic_reach_oracle,
    compute_reachability_map,
)
from .render import default_camera, export_overlay_asset, rasterize_scene, read_png
from .scenes import (
    AcceptAllPlanOracle,
    AnalyticPlanOracle,
    ObjectModel,
    generate_candidates,
    load_scene,
    scene_to_dict,
    validate_scene_feasibility,
)
from .seeding import derive_seed
from .selection import (
    SelectionConfig,
    format_count_summary,
    save_scene_set,
    select_best_set,
)
from .serve import make_server


def _atomic_json(path: Path, doc) -> None:
    write_atomic(path, json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _atomic_via(save_fn, path: Path, *args) -> None:
    """Run a module save function against a temp file, then rename."""
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(f".{path.name}.tmp-{os.getpid()}")
    try:
        save_fn(tmp, *args)
        os.replace(tmp, path)
    except BaseException:
        if tmp.exists():
            tmp.unlink()
        raise


def _load_meshes(mesh_dir: Path) -> dict:
    paths = sorted(mesh_dir.glob("*.obj"))
    if not paths:
        raise SceneforgeError(f"no .obj meshes found in {mesh_dir}")
    meshes = {}
    for p in paths:
        mesh = load_mesh(p)
        meshes[mesh.name] = mesh
    return meshes


def _build_objects(meshes: dict) -> list[ObjectModel]:
    return [
        ObjectModel(mesh, tuple(compute_stable_poses(mesh)))
        for mesh in meshes.values()
    ]


def _manifest_for(args, out_dir: Path) -> RunManifest:
    path = Path(args.manifest) if args.manifest else out_dir / "manifest.json"
    if path.exists():
        manifest = RunManifest.load(path)
    else:
        manifest = RunManifest(
            master_seed=getattr(args, "seed", 0), tool_version=__version__
        )
        manifest.path = path
    return manifest


def _echo_config(name: str, params: dict) -> None:
    print(f"[{name}] " + " ".join(f"{k}={v}" for k, v in sorted(params.items())))


# ---------------------------------------------------------------------------
# subcommands


def cmd_stable_poses(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    com = "uniform-density" if args.com is None else tuple(args.com)
    params = {"com": com, "meshes": [str(m) for m in args.mesh]}
    _echo_config("stable-poses", params)
    outputs = []
    for mesh_path in args.mesh:
        mesh = load_mesh(mesh_path)
        poses = compute_stable_poses(mesh, com)
        out = Path(args.out) if args.out else out_dir / f"{mesh.name}.poses.txt"
        _atomic_via(save_stable_poses, out, poses)
        outputs.append(out)
        print(f"{mesh.name}: {len(poses)} stable poses -> {out}")
    manifest = _manifest_for(args, out_dir)
    manifest.record_stage("stable-poses", seed=None, params=params, outputs=outputs)
    manifest.save()
    return 0


def cmd_reachability(args) -> int:
    table = TableSpec(tuple(args.table_size), tuple(args.table_offset))
    grid = GridSpec(args.rows, args.cols, args.block_size)
    oracle = analytic_reach_oracle(
        tuple(args.shoulder), args.r_min, args.r_max, args.standoff_height
    )
    params = {
        "table_size": table.size,
        "table_offset": table.offset,
        "rows": grid.rows,
        "cols": grid.cols,
        "block_size": grid.block_size,
        "iterations": args.iterations,
        "shoulder": oracle.shoulder,
        "r_min": oracle.r_min,
        "r_max": oracle.r_max,
        "standoff_height": args.standoff_height,
    }
    _echo_config("reachability", params)
    rmap = compute_reachability_map(
        table, grid, oracle, args.iterations, args.standoff_height
    )
    out = Path(args.out)
    _atomic_via(lambda p: rmap.save(p), out)
    print(f"reachable cells: {rmap.num_reachable}/{grid.rows * grid.cols} -> {out}")
    manifest = _manifest_for(args, out.parent)
    manifest.record_stage("reachability", seed=None, params=params, outputs=[out])
    manifest.save()
    return 0


def _plan_oracle(kind: str):
    if kind == "accept-all":
        return AcceptAllPlanOracle()
    if kind == "analytic":
        return AnalyticPlanOracle()
    raise SceneforgeError(f"unknown plan oracle {kind!r}")


def cmd_generate(args) -> int:
    out_dir = Path(args.out_dir)
    scenes_dir = out_dir
    scenes_dir.mkdir(parents=True, exist_ok=True)
    meshes = _load_meshes(Path(args.meshes))
    objects = _build_objects(meshes)
    rmap = ReachabilityMap.load(args.map)
    grasp_sets = None
    oracle = None
    if args.grasps_dir:
        grasp_sets = {
            gs.object_id: gs
            for gs in (load_grasp_set(p) for p in sorted(Path(args.grasps_dir).glob("*.json")))
        }
        oracle = _plan_oracle(args.plan_oracle)
    camera = default_camera() if args.camera == "default" else None
    params = {
        "seed": args.seed,
        "count": args.count,
        "num_objects": args.num_objects,
        "nearby_radius": args.nearby_radius,
        "margin": args.margin,
        "camera": args.camera,
        "plan_oracle": args.plan_oracle if args.grasps_dir else None,
    }
    _echo_config("generate", params)
    scenes = generate_candidates(
        objects,
        rmap,
        args.count,
        args.seed,
        num_objects=args.num_objects,
        nearby_radius=args.nearby_radius,
        margin=args.margin,
        grasp_sets=grasp_sets,
        plan_oracle=oracle,
        camera=camera,
    )
    outputs = []
    for scene in scenes:
        out = scenes_dir / f"{scene.id}.json"
        _atomic_json(out, scene_to_dict(scene))
        outputs.append(out)
    print(f"wrote {len(scenes)} scenes to {scenes_dir}")
    manifest = _manifest_for(args, out_dir)
    manifest.record_stage("generate", seed=args.seed, params=params, outputs=outputs)
    manifest.save()
    return 0


def cmd_select(args) -> int:
    scenes_dir = Path(args.scenes_dir)
    scene_files = sorted(scenes_dir.glob("scene-*.json"))
    candidates = [load_scene(p) for p in scene_files]
    cfg = SelectionConfig(
        k=args.k,
        count_min=args.count_min,
        count_max=args.count_max,
        num_sets=args.num_sets,
    )
    params = {
        "k": cfg.k,
        "count_min": cfg.count_min,
        "count_max": cfg.count_max,
        "num_sets": cfg.num_sets,
        "seed": args.seed,
        "candidates": len(candidates),
    }
    _echo_config("select", params)
    best = select_best_set(candidates, cfg, args.seed)
    out = Path(args.out)
    files = {
        s.id: str(p) for s, p in zip(candidates, scene_files) if s.id in best.scenes
    }
    _atomic_via(save_scene_set, out, best, files)
    summary = out.with_suffix(".counts.txt")
    write_atomic(summary, format_count_summary(best.histogram))
    print(f"selected {len(best.scenes)} scenes, entropy {best.score:.4f} -> {out}")
    print(format_count_summary(best.histogram), end="")
    manifest = _manifest_for(args, out.parent)
    manifest.record_stage(
        "select", seed=args.seed, params=params, outputs=[out, summary]
    )
    manifest.save()
    return 0


def cmd_render(args) -> int:
    scene = load_scene(args.scene)
    meshes = _load_meshes(Path(args.meshes))
    cam = scene.camera
    if cam is None or args.camera_default:
        cam = default_camera()
        scene = dataclasses.replace(scene, camera=cam)
    img = rasterize_scene(scene, meshes, cam)
    out_dir = Path(args.out_dir)
    bundle = export_overlay_asset(img, scene, out_dir)
    print(f"rendered {scene.id} -> {bundle.directory}")
    manifest = _manifest_for(args, out_dir.parent if out_dir.parent != Path(".") else out_dir)
    manifest.record_stage(
        f"render:{scene.id}",
        seed=None,
        params={"scene": str(args.scene)},
        outputs=sorted(bundle.directory.iterdir()),
    )
    manifest.save()
    return 0


def cmd_grasps(args) -> int:
    if args.grasp_action == "load":
        gs = load_grasp_set(args.file, args.max_opening)
        print(f"{gs.object_id}: {len(gs)} grasps ok")
        return 0
    if args.grasp_action == "downsample":
        gs = load_grasp_set(args.file, args.max_opening)
        out = Path(args.out)
        smaller = downsample_grasps(gs, args.n)
        _atomic_via(save_grasp_set, out, smaller)
        print(f"{gs.object_id}: {len(gs)} -> {len(smaller)} grasps -> {out}")
        return 0
    if args.grasp_action == "top-down":
        pts = np.loadtxt(args.points, ndmin=2)
        grasp = top_down_grasp(
            PointCloud(pts),
            max_opening=args.max_opening,
            clearance=args.clearance,
            standoff=args.standoff,
        )
        doc = {
            "quaternion": [float(v) for v in grasp.pose.as_quaternion()],
            "translation": [float(v) for v in grasp.pose.translation],
            "width": grasp.width,
            "standoff": grasp.standoff,
        }
        if args.out:
            _atomic_json(Path(args.out), doc)
        print(json.dumps(doc, indent=2, sort_keys=True))
        return 0
    raise SceneforgeError(f"unknown grasps action {args.grasp_action!r}")


def cmd_validate(args) -> int:
    scene = load_scene(args.scene)
    meshes = _load_meshes(Path(args.meshes))
    grasp_sets = {
        gs.object_id: gs
        for gs in (load_grasp_set(p) for p in sorted(Path(args.grasps_dir).glob("*.json")))
    }
    oracle = _plan_oracle(args.plan_oracle)
    report = validate_scene_feasibility(scene, grasp_sets, oracle, meshes)
    doc = {
        "scene_id": scene.id,
        "feasible": report.feasible,
        "accepted_grasp": dict(report.accepted_grasp),
    }
    print(json.dumps(doc, indent=2, sort_keys=True))
    return 0


def _load_pose_file(path: str) -> Pose:
    doc = json.loads(Path(path).read_text())
    return Pose.from_quaternion(doc["quaternion"], doc["translation"])


def _load_label_masks(path: Path, role: str) -> MaskSet:
    labels = read_png(path)
    if labels.ndim == 3:
        labels = labels[..., 0]
    values = sorted(int(v) for v in np.unique(labels) if v != 0)
    return MaskSet(tuple(labels == v for v in values), role)


def cmd_metrics(args) -> int:
    if args.metrics_action == "add-s":
        est = _load_pose_file(args.est)
        gt = _load_pose_file(args.gt)
        pts = np.loadtxt(args.points, ndmin=2)
        value = add_s(est, gt, PointCloud(pts))
        print(f"{value!r}")
        return 0
    if args.metrics_action == "segmentation":
        pred_dir, gt_dir = Path(args.pred), Path(args.gt)
        reports = []
        for gt_path in sorted(gt_dir.glob("*.png")):
            pred_path = pred_dir / gt_path.name
            if not pred_path.exists():
                raise SceneforgeError(f"missing prediction for {gt_path.name}")
            reports.append(
                segmentation_report(
                    _load_label_masks(pred_path, "predicted"),
                    _load_label_masks(gt_path, "ground-truth"),
                    args.tolerance,
                )
            )
        if not reports:
            raise SceneforgeError(f"no ground-truth label images in {gt_dir}")
        print(json.dumps(aggregate_segmentation(reports), indent=2, sort_keys=True))
        return 0
    if args.metrics_action == "aggregate":
        records = load_trial_records(args.records)
        table = aggregate_results(records)
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        outputs = []
        for ordering in sorted(table.all_rows):
            out = out_dir / f"table5_{ordering}.tsv"
            write_atomic(out, table.table5_text(ordering))
            outputs.append(out)
        out3 = out_dir / "table3.tsv"
        write_atomic(out3, table.table3_text())
        outputs.append(out3)
        print(table.table3_text(), end="")
        print(f"wrote {len(outputs)} tables to {out_dir}")
        return 0
    raise SceneforgeError(f"unknown metrics action {args.metrics_action!r}")


def cmd_pipeline(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = RunManifest(master_seed=args.seed, tool_version=__version__)
    manifest.path = out_dir / "manifest.json"
    manifest.config = {
        "seed": args.seed,
        "candidates": args.candidates,
        "k": args.k,
        "count_min": args.count_min,
        "count_max": args.count_max,
        "num_sets": args.num_sets,
        "meshes": str(args.meshes) if args.meshes else "builtin-fixtures",
        "render": not args.skip_render,
    }
    _echo_config("pipeline", manifest.config)

    # stage 0: meshes
    if args.meshes:
        mesh_dir = Path(args.meshes)
    else:
        mesh_dir = out_dir / "meshes"
        write_object_library(mesh_dir)
    meshes = _load_meshes(mesh_dir)

    # stage 1: stable poses
    poses_dir = out_dir / "poses"
    poses_dir.mkdir(exist_ok=True)
    objects = []
    pose_files = []
    for name, mesh in meshes.items():
        poses = compute_stable_poses(mesh)
        out = poses_dir / f"{name}.poses.txt"
        _atomic_via(save_stable_poses, out, poses)
        pose_files.append(out)
        objects.append(ObjectModel(mesh, tuple(poses)))
    manifest.record_stage(
        "stable-poses", seed=None, params={"objects": len(objects)}, outputs=pose_files
    )
    print(f"stable poses: {len(objects)} objects")

    # stage 2: reachability
    oracle = analytic_reach_oracle(
        tuple(args.shoulder), args.r_min, args.r_max, args.standoff_height
    )
    rmap = compute_reachability_map(TableSpec(), GridSpec(), oracle, args.iterations)
    map_path = out_dir / "reachability.json"
    _atomic_via(lambda p: rmap.save(p), map_path)
    manifest.record_stage(
        "reachability",
        seed=None,
        params={
            "shoulder": oracle.shoulder,
            "r_min": oracle.r_min,
            "r_max": oracle.r_max,
            "iterations": args.iterations,
        },
        outputs=[map_path],
    )
    print(f"reachability: {rmap.num_reachable}/256 cells")

    # stage 3: candidate scenes
    gen_seed = derive_seed(args.seed, "generate")
    camera = default_camera()
    scenes = generate_candidates(
        objects, rmap, args.candidates, gen_seed, camera=camera
    )
    scenes_dir = out_dir / "scenes"
    scenes_dir.mkdir(exist_ok=True)
    scene_files = {}
    outputs = []
    for scene in scenes:
        out = scenes_dir / f"{scene.id}.json"
        _atomic_json(out, scene_to_dict(scene))
        scene_files[scene.id] = str(out.relative_to(out_dir))
        outputs.append(out)
    manifest.record_stage(
        "generate",
        seed=gen_seed,
        params={"count": len(scenes)},
        outputs=outputs,
    )
    print(f"candidates: {len(scenes)} scenes")

    # stage 4: selection
    sel_seed = derive_seed(args.seed, "select")
    cfg = SelectionConfig(
        k=args.k,
        count_min=args.count_min,
        count_max=args.count_max,
        num_sets=args.num_sets,
    )
    pose_counts = {o.object_id: len(o.stable_poses) for o in objects}
    best = select_best_set(scenes, cfg, sel_seed, pose_counts=pose_counts)
    set_path = out_dir / "set.json"
    selected_files = {sid: scene_files[sid] for sid in best.scenes}
    _atomic_via(save_scene_set, set_path, best, selected_files)
    summary_path = out_dir / "set.counts.txt"
    write_atomic(summary_path, format_count_summary(best.histogram))
    manifest.record_stage(
        "select",
        seed=sel_seed,
        params={"k": cfg.k, "count_min": cfg.count_min, "count_max": cfg.count_max,
                "num_sets": cfg.num_sets},
        outputs=[set_path, summary_path],
    )
    print(f"selected set: entropy {best.score:.4f}")
    print(format_count_summary(best.histogram), end="")

    # stage 5: reference renders for the selected scenes
    if not args.skip_render:
        by_id = {s.id: s for s in scenes}
        render_outputs = []
        for sid in best.scenes:
            img = rasterize_scene(by_id[sid], meshes, camera)
            bundle = export_overlay_asset(img, by_id[sid], out_dir / "overlays" / sid)
            render_outputs.extend(sorted(bundle.directory.iterdir()))
        manifest.record_stage(
            "render",
            seed=None,
            params={"scenes": len(best.scenes)},
            outputs=render_outputs,
        )
        print(f"rendered {len(best.scenes)} overlay bundles")

    manifest.save()
    print(f"manifest -> {manifest.path}")
    return 0


def cmd_serve(args) -> int:
    server = make_server(args.root, args.host, args.port, verbose=args.verbose)
    host, port = server.server_address[:2]
    print(f"serving {args.root} on http://{host}:{port}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--manifest", help="manifest path (default: <out dir>/manifest.json)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sceneforge",
        description="Reproducible tabletop scene benchmark toolkit",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stable-poses", help="compute stable resting poses of meshes")
    p.add_argument("--mesh", action="append", required=True, help="mesh file (repeatable)")
    p.add_argument("--com", type=float, nargs=3, help="explicit COM (default: uniform density)")
    p.add_argument("--out", help="output file (single mesh only)")
    p.add_argument("--out-dir", default=".", help="output directory")
    _add_common(p)
    p.set_defaults(func=cmd_stable_poses)

    p = sub.add_parser("reachability", help="compute the tabletop reachability map")
    p.add_argument("--out", required=True)
    p.add_argument("--table-size", type=float, nargs=3, default=[1.0, 1.0, 0.745])
    p.add_argument("--table-offset", type=float, nargs=3, default=[0.8, 0.0, 0.0])
    p.add_argument("--rows", type=int, default=16)
    p.add_argument("--cols", type=int, default=16)
    p.add_argument("--block-size", type=float, default=0.03)
    p.add_argument("--iterations", type=int, default=20)
    p.add_argument("--shoulder", type=float, nargs=3, default=[0.0, 0.0, 1.0])
    p.add_argument("--r-min", type=float, default=0.35)
    p.add_argument("--r-max", type=float, default=1.1)
    p.add_argument("--standoff-height", type=float, default=0.15)
    _add_common(p)
    p.set_defaults(func=cmd_reachability)

    p = sub.add_parser("generate", help="generate candidate scenes")
    p.add_argument("--meshes", required=True, help="directory of .obj meshes")
    p.add_argument("--map", required=True, help="reachability map file")
    p.add_argument("--count", type=int, default=164)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--num-objects", type=int, default=5)
    p.add_argument("--nearby-radius", type=float, default=0.25)
    p.add_argument("--margin", type=float, default=0.005)
    p.add_argument("--camera", choices=["default", "none"], default="default")
    p.add_argument("--grasps-dir", help="grasp files for feasibility filtering")
    p.add_argument("--plan-oracle", choices=["analytic", "accept-all"], default="analytic")
    p.set_defaults(func=cmd_generate)
    _add_common(p)

    p = sub.add_parser("select", help="select the best scene set")
    p.add_argument("--scenes-dir", required=True, help="directory of scene-*.json files")
    p.add_argument("--k", type=int, default=20)
    p.add_argument("--count-min", type=int, default=5)
    p.add_argument("--count-max", type=int, default=7)
    p.add_argument("--num-sets", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("render", help="render a scene's overlay bundle")
    p.add_argument("--scene", required=True)
    p.add_argument("--meshes", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--camera-default", action="store_true",
                   help="ignore the scene's stored camera")
    _add_common(p)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("grasps", help="grasp set utilities")
    gsub = p.add_subparsers(dest="grasp_action", required=True)
    g = gsub.add_parser("load", help="validate a grasp file")
    g.add_argument("--file", required=True)
    g.add_argument("--max-opening", type=float, default=0.10)
    g.set_defaults(func=cmd_grasps)
    g = gsub.add_parser("downsample", help="farthest-point downsample a grasp set")
    g.add_argument("--file", required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--out", required=True)
    g.add_argument("--max-opening", type=float, default=0.10)
    g.set_defaults(func=cmd_grasps)
    g = gsub.add_parser("top-down", help="PCA top-down grasp from a point cloud")
    g.add_argument("--points", required=True, help="text file, one x y z per line")
    g.add_argument("--max-opening", type=float, default=0.10)
    g.add_argument("--clearance", type=float, default=0.008)
    g.add_argument("--standoff", type=float, default=0.10)
    g.add_argument("--out")
    g.set_defaults(func=cmd_grasps)

    p = sub.add_parser("validate", help="check grasp feasibility of a scene")
    p.add_argument("--scene", required=True)
    p.add_argument("--meshes", required=True)
    p.add_argument("--grasps-dir", required=True)
    p.add_argument("--plan-oracle", choices=["analytic", "accept-all"], default="analytic")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("metrics", help="evaluation metrics")
    msub = p.add_subparsers(dest="metrics_action", required=True)
    m = msub.add_parser("add-s", help="average closest-point pose error")
    m.add_argument("--est", required=True, help="estimated pose JSON")
    m.add_argument("--gt", required=True, help="ground-truth pose JSON")
    m.add_argument("--points", required=True, help="model points, x y z per line")
    m.set_defaults(func=cmd_metrics)
    m = msub.add_parser("segmentation", help="segmentation P/R/F metrics")
    m.add_argument("--pred", required=True, help="directory of predicted label PNGs")
    m.add_argument("--gt", required=True, help="directory of ground-truth label PNGs")
    m.add_argument("--tolerance", type=int, default=2, help="boundary tolerance px")
    m.set_defaults(func=cmd_metrics)
    m = msub.add_parser("aggregate", help="aggregate trial records into tables")
    m.add_argument("--records", required=True, help="trial records (JSON lines)")
    m.add_argument("--out-dir", required=True)
    m.set_defaults(func=cmd_metrics)

    p = sub.add_parser("pipeline", help="run the full benchmark construction")
    p.add_argument("--meshes", help="mesh directory (default: built-in fixtures)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--candidates", type=int, default=164)
    p.add_argument("--k", type=int, default=20)
    p.add_argument("--count-min", type=int, default=5)
    p.add_argument("--count-max", type=int, default=7)
    p.add_argument("--num-sets", type=int, default=100_000)
    p.add_argument("--iterations", type=int, default=20)
    p.add_argument("--shoulder", type=float, nargs=3, default=[0.0, 0.0, 1.0])
    p.add_argument("--r-min", type=float, default=0.35)
    p.add_argument("--r-max", type=float, default=1.1)
    p.add_argument("--standoff-height", type=float, default=0.15)
    p.add_argument("--skip-render", action="store_true")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("serve", help="serve overlay bundles over HTTP")
    p.add_argument("--root", required=True, help="pipeline output directory")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=cmd_serve)

    return parser


def run_command(argv) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SceneforgeError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except FileNotFoundError as e:
        print(f"error: missing input: {e}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
