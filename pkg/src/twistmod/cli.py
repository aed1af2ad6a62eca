"""Command line interface.

Exit codes: 0 when every check meets its expectation, 1 when a
mathematical check fails, 2 for invalid input or configuration.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__, linalg
from .fixtures import load_ses, regenerate
from .groups import GroupError, trivial_subgroup
from .harness import ConfigError, RunReport, build_family, subgroup_by_elements, validate_params, verify_paper
from .morph import check_ses, checksum, is_split_epi, is_split_mono, is_w_split
from .relproj import is_rel_projective, is_w_projective, vertex
from .reps import ModuleError, dumps, load_module
from .telescope import stage_twist_projective
from .twist import TwistError, twisted_induction

DEFAULT_FIXTURES = Path(__file__).resolve().parents[2] / "fixtures"


class InputError(ValueError):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of integers, got {text!r}") from None


def _emit(data: dict, json_path: str | None) -> None:
    text = dumps(data)
    if json_path:
        Path(json_path).write_text(text)
    sys.stdout.write(text)


def _read_ses(path: str):
    try:
        return load_ses(path)
    except (OSError, KeyError, ValueError, TypeError) as exc:
        raise InputError(f"cannot read sequence file {path}: {exc}") from None


def _read_module(path: str):
    try:
        return load_module(path)
    except (OSError, KeyError, ValueError, TypeError) as exc:
        raise InputError(f"cannot read module file {path}: {exc}") from None


def _require_exact(S) -> None:
    report = check_ses(S)
    if not report.ok:
        raise InputError("sequence is not exact:\n  " + "\n  ".join(report.failures))


# -- subcommands ------------------------------------------------------------------


def cmd_build_twist(args) -> int:
    if not args.ses:
        raise InputError("--ses is required")
    if len(args.q) != 1:
        raise InputError("build-twist takes exactly one value of q")
    q = args.q[0]
    S = _read_ses(args.ses)
    if args.p is not None and args.p != S.p:
        raise InputError(f"--p {args.p} does not match the sequence's prime {S.p}")
    if q < 2 or not linalg.is_power_of(q, S.p):
        raise InputError(f"q = {q} must be a power of p = {S.p} (and at least 2)")
    _require_exact(S)
    T = twisted_induction(S, q)
    if args.out:
        Path(args.out).write_text(dumps(T.to_json()))
    summary = {
        "dim": T.dim,
        "q": q,
        "p": T.p,
        "group_order": T.module.group.order,
        "source_dims": list(S.dims),
        "layout": [[s.position, s.kind, s.dim] for s in T.layout],
        "checksum": checksum(T.module.action.reshape(T.module.group.order * T.dim, T.dim)),
    }
    _emit(summary, args.json)
    return 0


def cmd_check_projective(args) -> int:
    if not args.module:
        raise InputError("--module is required")
    m = _read_module(args.module)
    out: dict = {"module": m.name, "dim": m.dim, "group_order": m.group.order}
    if args.vertex:
        try:
            vs = vertex(m)
        except GroupError as exc:
            raise InputError(str(exc)) from None
        out["vertices"] = [sorted(int(x) for x in v.image) for v in vs]
    if args.w:
        w = _read_module(args.w)
        if w.p != m.p or not w.group.same_as(m.group):
            raise InputError("--w module lives over a different group or prime")
        out["w_projective"] = is_w_projective(m, w).to_json()
    if not args.vertex or args.subgroup is not None:
        emb = trivial_subgroup(m.group) if args.subgroup is None else subgroup_by_elements(m.group, args.subgroup)
        verdict = is_rel_projective(m, emb)
        out["subgroup"] = sorted(int(x) for x in emb.image)
        out["relative"] = verdict.to_json()
    _emit(out, args.json)
    return 0


def cmd_check_split(args) -> int:
    if not args.ses:
        raise InputError("--ses is required")
    S = _read_ses(args.ses)
    _require_exact(S)
    r = is_split_mono(S.d1)
    s = is_split_epi(S.d2)
    out = {
        "name": S.name,
        "dims": list(S.dims),
        "d1_split": r is not None,
        "d1_retraction_checksum": None if r is None else checksum(r.matrix),
        "d2_split": s is not None,
        "d2_section_checksum": None if s is None else checksum(s.matrix),
    }
    if args.w:
        w = _read_module(args.w)
        ok, wit = is_w_split(S, w)
        out["w_split"] = ok
        out["w_split_checksum"] = None if wit is None else checksum(wit.matrix)
    _emit(out, args.json)
    return 0 if (r is None) == (s is None) else 1


def cmd_telescope(args) -> int:
    n = validate_params(args.p, args.q, args.family, args.stages)
    fam = build_family(args.family, args.p, n + 1)
    rep = RunReport("telescope", {"p": args.p, "q": args.q, "family": args.family, "stages": n}, args.seed)
    for N in range(1, n + 1):
        for q in args.q:
            with rep.timed(f"N{N}/q{q}"):
                sr = stage_twist_projective(fam, N, q)
            tag = f"telescope/{fam.label}/N{N}/q{q}"
            rep.add(f"{tag}/stage-split", "telescope-stage-split", True, sr.stage_split, sr.split_checksum,
                    detail=f"dims {list(sr.dims)}, twisted dim {sr.twist_dim}")
            rep.add(f"{tag}/twist-projective", "telescope-stage-projective", True, sr.projective,
                    sr.witness_checksum)
    return _finish(rep, args)


def cmd_verify_paper(args) -> int:
    if args.ses and not Path(args.ses).exists():
        raise InputError(f"no such file: {args.ses}")
    rep = verify_paper(args.p, args.q, args.family, args.stages, args.seed, args.ses)
    return _finish(rep, args)


def cmd_regen_fixtures(args) -> int:
    changed = regenerate(args.dir, check=args.check)
    verb = "differ" if args.check else "written"
    for name in changed:
        print(f"{verb}: {name}")
    if args.check and changed:
        return 1
    print(f"{len(changed)} fixture file(s) {verb}")
    return 0


def _finish(rep: RunReport, args) -> int:
    if args.json:
        Path(args.json).write_text(dumps(rep.to_json()))
    print(rep.to_text())
    for r in rep.failures():
        print(f"failed check: {r.check}", file=sys.stderr)
    return 0 if rep.passed else 1


# -- parser -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="twistmod", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"twistmod {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, p_default: int | None = 2, q_default: str = "2"):
        sp.add_argument("--p", type=int, default=p_default, help="characteristic")
        sp.add_argument("--q", type=_int_list, default=_int_list(q_default), help="comma-separated powers of p")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--json", metavar="PATH", help="also write the JSON output here")

    sp = sub.add_parser("build-twist", help="twisted induction of a short exact sequence")
    common(sp, p_default=None)
    sp.add_argument("--ses", metavar="PATH")
    sp.add_argument("--out", metavar="PATH", help="write the twisted module file here")
    sp.set_defaults(func=cmd_build_twist)

    sp = sub.add_parser("check-projective", help="relative projectivity, P(w) membership, vertices")
    common(sp)
    sp.add_argument("--module", metavar="PATH")
    sp.add_argument("--subgroup", type=_int_list, metavar="ELEMS", help="subgroup generated by these elements")
    sp.add_argument("--w", metavar="PATH", help="test membership of P(w) for this module")
    sp.add_argument("--vertex", action="store_true")
    sp.set_defaults(func=cmd_check_projective)

    sp = sub.add_parser("check-split", help="split tests on a short exact sequence")
    common(sp)
    sp.add_argument("--ses", metavar="PATH")
    sp.add_argument("--w", metavar="PATH", help="also test whether W (x) S splits")
    sp.set_defaults(func=cmd_check_split)

    for name, func, help_text in (
        ("telescope", cmd_telescope, "telescope stages and their twisted modules"),
        ("verify-paper", cmd_verify_paper, "run the full verification scenario"),
    ):
        sp = sub.add_parser(name, help=help_text)
        common(sp)
        sp.add_argument("--family", choices=("v4-string", "jordan"), default="v4-string")
        sp.add_argument("--stages", type=int, default=None)
        if name == "verify-paper":
            sp.add_argument("--ses", metavar="PATH", help="extra sequence to run through the checks")
        sp.set_defaults(func=func)

    sp = sub.add_parser("regen-fixtures", help="rebuild fixture files from constructors")
    sp.add_argument("--dir", default=str(DEFAULT_FIXTURES))
    sp.add_argument("--check", action="store_true", help="only report files that differ")
    sp.set_defaults(func=cmd_regen_fixtures)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args)
    except (InputError, ConfigError, TwistError, ModuleError, GroupError, linalg.PrimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except AssertionError as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
