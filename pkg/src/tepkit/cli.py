"""Command-line surface: sampling, counting, contours, solitaire runs,
verification suites, the spacetime demo, and the API server.

Exit codes: 0 success, 2 usage error, 3 resource budget exceeded,
4 property violation.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from .errors import (
    GeometryViolationError,
    PropertyViolationError,
    ResourceBudgetError,
    UsageError,
)
from .families import Pattern, family_from_json
from .geometry import (
    anti_shelling,
    check_midpointed,
    default_geometry,
    geometry_from_json,
)
from .groups import LatticeGroup, Shape, group_from_json, sample_element, shape
from .orders import order_from_json, s_contour
from .render import (
    render_ascii,
    render_pbm,
    render_png,
    render_ppm,
    render_tree_svg,
    s3_symbols,
    spacetime_ascii,
    spacetime_rows,
)
from .solitaire import SupportConfig, component, default_corner_set
from .tep import count_convex, count_shape_bruteforce, count_value, is_locally_legal, sample_tep


def _load_json(path):
    with open(path) as fh:
        return json.load(fh)


def _geometry_for(args, group):
    if getattr(args, "geometry", None):
        return geometry_from_json(json.loads(args.geometry), group)
    return default_geometry(group)


def _region_shape(args, group) -> Shape:
    given = [
        args.rect is not None,
        args.ball is not None,
        args.region_file is not None,
    ]
    if sum(given) != 1:
        raise UsageError("specify exactly one of --rect, --ball, --region-file")
    if args.region_file:
        return Shape.from_json(_load_json(args.region_file))
    if args.rect is not None:
        if not isinstance(group, LatticeGroup) or group.d != 2:
            raise UsageError("--rect needs a rank-2 lattice group")
        w, h = args.rect
        return shape(group, ((x, y) for x in range(w) for y in range(h)))
    radius = args.ball
    if isinstance(group, LatticeGroup):
        if group.d != 2:
            raise UsageError("--ball is supported on Z^2 and free groups")
        r2 = radius * radius
        return shape(
            group,
            (
                (x, y)
                for x in range(-radius, radius + 1)
                for y in range(-radius, radius + 1)
                if x * x + y * y <= r2
            ),
        )
    from .groups import FreeGroup

    if isinstance(group, FreeGroup):
        return shape(group, group.ball(group.identity(), radius))
    raise UsageError("--ball is supported on Z^2 and free groups")


def _emit(args, text=None, data=None):
    if data is not None:
        text = json.dumps(data, indent=2, sort_keys=True) + "\n"
    if args.out:
        mode = "wb" if isinstance(text, bytes) else "w"
        with open(args.out, mode) as fh:
            fh.write(text)
    else:
        if isinstance(text, bytes):
            sys.stdout.buffer.write(text)
        else:
            sys.stdout.write(text)


def _write_pattern(args, pattern: Pattern):
    fmt = args.format
    if fmt == "json":
        _emit(args, data=pattern.to_json())
    elif fmt == "ascii":
        _emit(args, text=render_ascii(pattern))
    elif fmt == "pbm":
        _emit(args, text=render_pbm(pattern))
    elif fmt == "ppm":
        _emit(args, text=render_ppm(pattern))
    elif fmt == "svg":
        _emit(args, text=render_tree_svg(pattern))
    elif fmt == "png":
        if not args.out:
            raise UsageError("--format png needs --out")
        render_png(pattern, args.out, cell_px=args.cell_px)
    else:
        raise UsageError(f"unknown format {fmt!r}")


def cmd_sample(args) -> int:
    family = family_from_json(_load_json(args.family))
    geometry = _geometry_for(args, family.group)
    region = _region_shape(args, family.group)
    pattern = sample_tep(region, family, geometry, args.seed)
    if not is_locally_legal(pattern, family):
        raise PropertyViolationError("sampled pattern failed the legality re-check")
    _write_pattern(args, pattern)
    return 0


def _factorization(n: int) -> str:
    if n <= 1:
        return str(n)
    parts = []
    p = 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            parts.append(f"{p}" + (f"^{e}" if e > 1 else ""))
        p += 1
    if n > 1:
        parts.append(str(n))
    return " * ".join(parts)


def cmd_count(args) -> int:
    region = Shape.from_json(_load_json(args.shape_file))
    if args.family:
        family = family_from_json(_load_json(args.family))
        geometry = _geometry_for(args, family.group)
        s, a, k = family.shape, family.alphabet.size, family.k
    else:
        if not (args.meta_shape and args.alphabet and args.k):
            raise UsageError("provide --family or --meta-shape with --alphabet and --k")
        s = Shape.from_json(_load_json(args.meta_shape))
        a, k = args.alphabet, args.k
        family = None
        geometry = _geometry_for(args, s.group)
    if args.mode == "convex":
        geo = geometry
        if not geo.is_convex(region):
            raise UsageError(
                "region is not convex; rerun with --mode bruteforce"
            )
        m, n = count_convex(region, s, a, k, geo)
        count = count_value(a, k, m, n)
        _emit(
            args,
            data={
                "m": m,
                "n": n,
                "count": str(count),
                "factorization": _factorization(count),
            },
        )
        return 0
    if family is None:
        raise UsageError("bruteforce counting needs --family")
    count = count_shape_bruteforce(region, family, geometry, budget=args.budget)
    _emit(
        args,
        data={"count": str(count), "factorization": _factorization(count)},
    )
    return 0


def cmd_contour(args) -> int:
    s = Shape.from_json(_load_json(args.shape_file))
    order = order_from_json(json.loads(args.order), s.group)
    region = _region_shape(args, s.group)
    ct = s_contour(region, s, order)
    enc = s.group.element_to_json
    _emit(
        args,
        data={
            "shape": ct.shape.to_json(),
            "contour": ct.members.to_json(),
            "fillOrder": [enc(g) for g in ct.fill_order],
            "contourSize": len(ct.members),
        },
    )
    return 0


def cmd_solitaire(args) -> int:
    s = Shape.from_json(_load_json(args.shape_file))
    group = s.group
    if args.support_file:
        support = Shape.from_json(_load_json(args.support_file))
    else:
        support = _region_shape(args, group)
    t = default_corner_set(s)
    limit = args.limit
    if limit > 10**6 and not args.allow_huge:
        raise UsageError(
            "limits beyond 10^6 states may need gigabytes; pass --allow-huge"
        )
    rep = component(SupportConfig(support), s, t, limit=limit)
    _emit(
        args,
        data={"size": rep["size"], "exhausted": rep["exhausted"], "budget": limit},
    )
    return 0


def cmd_verify(args) -> int:
    family = family_from_json(_load_json(args.family))
    geometry = _geometry_for(args, family.group)
    report = {"k": family.k, "alphabet": family.alphabet.size}
    rng = random.Random(args.seed)
    for trial in range(args.samples):
        pts = [
            sample_element(family.group, rng, 3) for _ in range(rng.randint(1, 4))
        ]
        base = shape(family.group, pts)
        closed = geometry.closure(base)
        if geometry.closure(closed) != closed:
            raise PropertyViolationError(
                f"closure is not idempotent on {base.to_json()}"
            )
        if not set(base.members) <= set(closed.members):
            raise PropertyViolationError(
                f"closure is not extensive on {base.to_json()}"
            )
    ok, witness = check_midpointed(
        geometry, family.shape, samples=args.samples, seed=args.seed
    )
    report["midpointed"] = ok
    if not ok:
        raise PropertyViolationError(f"midpointedness witness: {witness!r}")
    _emit(args, data=report)
    return 0


def cmd_spacetime(args) -> int:
    labels, table = s3_symbols()
    initial = {}
    if args.seeds:
        for item in args.seeds.split(","):
            sym, pos = item.split("@")
            if sym not in labels:
                raise UsageError(f"unknown symbol {sym!r}; use one of {labels[1:]}")
            initial[int(pos)] = labels.index(sym)
    rows = spacetime_rows(table, initial, args.steps, tuple(args.window))
    if args.format == "ascii":
        _emit(args, text=spacetime_ascii(rows, labels))
        return 0
    lo, hi = args.window
    z2 = LatticeGroup(2)
    cells = []
    values = []
    for t, row in enumerate(rows):
        for i, v in enumerate(row):
            cells.append((lo + i, -t))
            values.append(v)
    dom = shape(z2, cells)
    order = {c: v for c, v in zip(cells, values)}
    pattern = Pattern(dom, tuple(order[c] for c in dom.members))
    _write_pattern(args, pattern)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .api import create_app

    uvicorn.run(create_app(log_path=args.log), host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tepkit",
        description="Workbench for TEP subshifts: counting, sampling, "
        "contours, and the independence solitaire.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt_default="json"):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--geometry", help="geometry spec as JSON")
        p.add_argument(
            "--format",
            default=fmt_default,
            choices=["json", "pbm", "ppm", "svg", "ascii", "png"],
        )
        p.add_argument("--out", help="output path (stdout by default)")
        p.add_argument("--budget", type=int, default=10**7)
        p.add_argument("--cell-px", type=int, default=4)

    def region(p):
        p.add_argument("--rect", type=int, nargs=2, metavar=("W", "H"))
        p.add_argument("--ball", type=int)
        p.add_argument("--region-file")

    p = sub.add_parser("sample", help="perfectly sample a convex region")
    p.add_argument("--family", required=True)
    region(p)
    common(p)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("count", help="count legal patterns on a shape")
    p.add_argument("--family")
    p.add_argument("--meta-shape", help="shape file when counting without a rule")
    p.add_argument("--alphabet", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--shape-file", required=True)
    p.add_argument("--mode", choices=["convex", "bruteforce"], default="convex")
    common(p)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("contour", help="compute an S-contour of a region")
    p.add_argument("--shape-file", required=True)
    p.add_argument("--order", required=True, help="order spec as JSON")
    region(p)
    common(p)
    p.set_defaults(func=cmd_contour)

    p = sub.add_parser("solitaire", help="explore a solitaire component")
    p.add_argument("--shape-file", required=True)
    p.add_argument("--support-file")
    p.add_argument("--limit", type=int, default=10**5)
    p.add_argument("--allow-huge", action="store_true")
    region(p)
    common(p)
    p.set_defaults(func=cmd_solitaire)

    p = sub.add_parser("verify", help="re-verify a family and its geometry")
    p.add_argument("--family", required=True)
    p.add_argument("--samples", type=int, default=50)
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("spacetime", help="render a 1D spacetime diagram")
    p.add_argument(
        "--seeds",
        help="comma-separated symbol@position entries, e.g. 'B@-32,a@0'",
    )
    p.add_argument("--steps", type=int, default=32)
    p.add_argument(
        "--window", type=int, nargs=2, default=[-40, 24], metavar=("LO", "HI")
    )
    common(p, fmt_default="ascii")
    p.set_defaults(func=cmd_spacetime)

    p = sub.add_parser("serve", help="run the solitaire session API")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8741)
    p.add_argument("--log", help="append-only JSON-lines replay log")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ResourceBudgetError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 3
    except (PropertyViolationError, GeometryViolationError) as exc:
        print(f"property violation: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
