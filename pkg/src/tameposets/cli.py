"""Command-line interface.

Exit codes: 0 success, 2 invalid input, 3 when two routes that must agree
disagree.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections.abc import Sequence

from . import homalg, serialize
from .errors import CertificationMismatch, KoszulValidityUnknown, SearchBudgetExceeded, ValidationError
from .poset import (
    DIM_BUDGET,
    dim,
    is_consistent,
    is_distributive,
    is_forest,
    is_tree,
    is_upper_semilattice,
    par_dim,
)
from .realisation import build_grid, format_fraction
from .transfer import NEG_INF, grid_transfer, grid_transfer_bruteforce, tame_eval

EXIT_OK, EXIT_INVALID, EXIT_MISMATCH = 0, 2, 3


def _values(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def _common() -> argparse.ArgumentParser:
    c = argparse.ArgumentParser(add_help=False)
    c.add_argument("--prime", type=int, default=None, help="field characteristic (default: from input, else 2)")
    c.add_argument("--budget-dim", type=int, default=DIM_BUDGET, help="largest down-set searched by dim")
    c.add_argument("--V", type=_values, default=None, help="comma-separated grid values, e.g. --V=-1/2,-1/4 (empty for none)")
    c.add_argument("--d", default=None, help="top element of the grid bases")
    c.add_argument("--epsilon", default=None, help="edge threshold of the component graph")
    c.add_argument("--max-degree", type=int, default=None, help="highest Betti degree")
    c.add_argument("--jobs", type=int, default=1, help="worker threads for per-element work")
    c.add_argument("--use-cofinal-reduction", action="store_true", help="index colimits below an element by products of parents")
    c.add_argument("--output", "-o", default=None, help="write the JSON result here instead of stdout")
    return c


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    ap = argparse.ArgumentParser(prog="tameposets", description="Posets, realisation grids, tame functors and Betti diagrams.")
    top = ap.add_subparsers(dest="group", required=True)

    g = top.add_parser("poset").add_subparsers(dest="cmd", required=True)
    s = g.add_parser("check", parents=[common])
    s.add_argument("file")
    s = g.add_parser("dim", parents=[common])
    s.add_argument("file")
    s.add_argument("element")

    g = top.add_parser("grid").add_subparsers(dest="cmd", required=True)
    s = g.add_parser("build", parents=[common])
    s.add_argument("file")
    s = g.add_parser("transfer", parents=[common])
    s.add_argument("file")
    s.add_argument("point", help='{"base": .., "coords": {..}} or lattice coordinates ["7/10","3/10"]')
    s.add_argument("--verify", action="store_true", help="compare with the brute-force coproduct")

    g = top.add_parser("functor").add_subparsers(dest="cmd", required=True)
    s = g.add_parser("validate", parents=[common])
    s.add_argument("file")
    s = g.add_parser("betti", parents=[common])
    s.add_argument("file")
    s.add_argument("--method", choices=("koszul", "resolution", "both"), default="koszul")

    g = top.add_parser("tame").add_subparsers(dest="cmd", required=True)
    s = g.add_parser("eval", parents=[common])
    s.add_argument("file")
    s.add_argument("point")
    s.add_argument("--to", default=None, help="second point; also print the matrix along point <= to")

    g = top.add_parser("pipeline").add_subparsers(dest="cmd", required=True)
    s = g.add_parser("run", parents=[common])
    s.add_argument("file")

    g = top.add_parser("export").add_subparsers(dest="cmd", required=True)
    s = g.add_parser("dot", parents=[common])
    s.add_argument("file")
    return ap


def _emit(args, payload) -> None:
    text = serialize.dumps(payload) if not isinstance(payload, str) else payload
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _grid_spec(args):
    obj = serialize.load(args.file)
    if "grid" in obj and "base_poset" not in obj:
        obj = obj["grid"]
    return serialize.grid_spec_from_json(obj, d=args.d, v=args.V)


def cmd_poset_check(args) -> int:
    p = serialize.poset_from_json(serialize.load(args.file))
    semi = is_upper_semilattice(p)
    _emit(
        args,
        {
            "elements": len(p),
            "upper_semilattice": semi,
            "distributive": is_distributive(p) if semi else None,
            "consistent": is_consistent(p),
            "forest": is_forest(p),
            "tree": is_tree(p),
        },
    )
    return EXIT_OK


def cmd_poset_dim(args) -> int:
    p = serialize.poset_from_json(serialize.load(args.file))
    _emit(args, {"element": args.element, "dim": dim(p, args.element, args.budget_dim), "par_dim": par_dim(p, args.element)})
    return EXIT_OK


def cmd_grid_build(args) -> int:
    _emit(args, serialize.grid_to_json(build_grid(_grid_spec(args))))
    return EXIT_OK


def cmd_grid_transfer(args) -> int:
    grid = build_grid(_grid_spec(args))
    q = serialize.point_from_json(args.point)
    r = grid_transfer(grid, q)
    out = serialize.transfer_result_json(grid, r)
    if grid.spec.base_poset and _is_lattice(grid) and r is not NEG_INF:
        from .realisation import lattice_coords

        out["coordinates"] = [format_fraction(c) for c in lattice_coords(grid.point(r))]
    if args.verify:
        b = grid_transfer_bruteforce(grid, q)
        out["bruteforce"] = None if b is NEG_INF else b
        if b != r:
            _emit(args, out)
            raise CertificationMismatch(f"closed form {r} differs from brute force {b}")
    _emit(args, out)
    return EXIT_OK


def _is_lattice(grid) -> bool:
    try:
        for x in grid.spec.base_poset.elements:
            [int(t) for t in x.split(",")]
    except ValueError:
        return False
    return True


def _functor(args):
    return serialize.functor_from_json(serialize.load(args.file), p=args.prime)


def cmd_functor_validate(args) -> int:
    f = _functor(args)
    _emit(args, {"valid": True, "total_dim": f.total_dim, "p": f.p})
    return EXIT_OK


def cmd_functor_betti(args) -> int:
    f = _functor(args)
    top = args.max_degree if args.max_degree is not None else 2
    out: dict = {"p": f.p, "max_degree": top}
    mismatch = []
    if args.method in ("koszul", "both"):
        kos: dict[str, dict] = {}
        uncertified: dict[str, dict] = {}
        skipped: dict[str, set] = {str(i): set() for i in range(top + 1)}
        cxs = {a: homalg.koszul_complex(f, a) for a in f.poset.elements}
        for i in range(top + 1):
            kos[str(i)], uncertified[str(i)] = {}, {}
            for a in f.poset.elements:
                try:
                    n = homalg.betti_koszul(f, a, i, cxs[a])
                    if n:
                        kos[str(i)][a] = n
                except KoszulValidityUnknown:
                    skipped[str(i)].add(a)
                    n = cxs[a].homology(i)
                    if n:
                        uncertified[str(i)][a] = n
        out["koszul"] = kos
        if any(uncertified.values()):
            out["koszul_uncertified"] = {k: v for k, v in uncertified.items() if v}
    if args.method in ("resolution", "both"):
        res = homalg.minimal_resolution(f, top)
        out["resolution"] = {str(i): res.betti(i) for i in range(top + 1)}
    if args.method == "both":
        for i in range(top + 1):
            certified = {a: n for a, n in out["resolution"][str(i)].items() if a not in skipped[str(i)]}
            if out["koszul"][str(i)] != certified:
                mismatch.append(i)
        b0 = {a: homalg.betti0_via_colimit(f, a, use_cofinal_reduction=args.use_cofinal_reduction) for a in f.poset.elements}
        b0 = {a: n for a, n in b0.items() if n}
        out["colimit_degree0"] = b0
        if b0 != out["resolution"]["0"]:
            mismatch.append("colimit")
    out["agree"] = not mismatch if args.method == "both" else None
    _emit(args, out)
    if mismatch:
        raise CertificationMismatch(f"Koszul and resolution disagree in degrees {mismatch}")
    return EXIT_OK


def cmd_tame_eval(args) -> int:
    obj = serialize.load(args.file)
    t = serialize.tame_from_json(obj, p=args.prime)
    p = serialize.point_from_json(args.point)
    q = serialize.point_from_json(args.to) if args.to else None
    d, m = tame_eval(t, p, q)
    r = grid_transfer(t.grid, p)
    out = {"dim": d, "grid_point": None if r is NEG_INF else r}
    if m is not None:
        out["matrix"] = m.tolist()
    _emit(args, out)
    return EXIT_OK


def cmd_pipeline_run(args) -> int:
    from .pipeline import pipeline_run

    cfg = serialize.pipeline_from_json(
        serialize.load(args.file),
        d=args.d,
        V=args.V,
        epsilon=args.epsilon,
        p=args.prime,
        max_degree=args.max_degree,
        jobs=args.jobs,
    )
    _emit(args, pipeline_run(cfg).to_json())
    return EXIT_OK


def cmd_export_dot(args) -> int:
    obj = serialize.load(args.file)
    if "base_poset" in obj:
        grid = build_grid(serialize.grid_spec_from_json(obj, d=args.d, v=args.V))
        _emit(args, serialize.to_dot(grid.poset, "grid"))
    elif "poset" in obj:
        f = serialize.functor_from_json(obj, p=args.prime)
        _emit(args, serialize.to_dot(f.poset, "functor", {x: f"{x} : {n}" for x, n in f.dims.items()}))
    else:
        _emit(args, serialize.to_dot(serialize.poset_from_json(obj)))
    return EXIT_OK


COMMANDS = {
    ("poset", "check"): cmd_poset_check,
    ("poset", "dim"): cmd_poset_dim,
    ("grid", "build"): cmd_grid_build,
    ("grid", "transfer"): cmd_grid_transfer,
    ("functor", "validate"): cmd_functor_validate,
    ("functor", "betti"): cmd_functor_betti,
    ("tame", "eval"): cmd_tame_eval,
    ("pipeline", "run"): cmd_pipeline_run,
    ("export", "dot"): cmd_export_dot,
}


def run(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.jobs < 1:
        print("error: --jobs must be positive", file=sys.stderr)
        return EXIT_INVALID
    try:
        return COMMANDS[(args.group, args.cmd)](args)
    except CertificationMismatch as e:
        print(f"certification mismatch: {e}", file=sys.stderr)
        return EXIT_MISMATCH
    except (ValidationError, SearchBudgetExceeded, json.JSONDecodeError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
