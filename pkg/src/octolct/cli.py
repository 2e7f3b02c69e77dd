"""Command line entry point: ``octolct {transform,spectrogram,verify,bench}``.

Exit status is 0 on success, 1 when a checked invariant fails and 2 on a
usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import logging
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import analysis, bench
from .errors import OctolctError
from .io import FIELD_KINDS, JobConfig, generate, parse_window, read_field, write_field
from .lct1d import Grid1D
from .octonion import norm_array
from .olct3d import OctonionField3D, RealField3D, olct, olct_inverse
from .stolct import StolctField, shift_lattice, stolct

log = logging.getLogger("octolct")

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2
DEFAULT_MATRIX = "0,1,-1,0"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _common(p: argparse.ArgumentParser) -> None:
    for k in (1, 2, 3):
        p.add_argument(f"--matrix-{k}", default=DEFAULT_MATRIX, metavar="a,b,c,d",
                       help=f"axis {k} matrix (default {DEFAULT_MATRIX})")
    p.add_argument("--path", choices=("fast", "direct"), default="fast")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--out", type=Path)


def _signal_source(p: argparse.ArgumentParser) -> None:
    p.add_argument("input", nargs="?", type=Path, help="field file (omit when using --generate)")
    p.add_argument("--generate", choices=FIELD_KINDS, help="synthesize the input instead of reading it")
    p.add_argument("--n", type=int, default=17, help="points per axis for --generate")
    p.add_argument("--step", type=float, default=0.5, help="sample spacing for --generate")
    p.add_argument("--param", action="append", default=[], metavar="KEY=VALUE",
                   help="fixture parameter for --generate (sigma, chirp, radius)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="octolct", description="Octonion linear canonical transforms")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    t = sub.add_parser("transform", help="forward or inverse OLCT of a field file")
    _common(t)
    _signal_source(t)
    t.add_argument("--inverse", action="store_true", help="input is a spectrum; write the signal")
    t.add_argument("--reference", type=Path, help="real field to compare an inverse against")

    s = sub.add_parser("spectrogram", help="short-time OLCT with CSV slice export")
    _common(s)
    _signal_source(s)
    s.add_argument("--window", default="gaussian:1", help="gaussian:SIGMA | box:R | file:PATH")
    s.add_argument("--ugrid-stride", type=int, default=1)
    s.add_argument("--u-index", default=None, metavar="I,J,K", help="shift for the slices (default centre)")
    s.add_argument("--w3-index", type=int, default=None, help="w3 index for the CSV slice (default centre)")
    s.add_argument("--csv", type=Path, help="write the fixed-(u, w3) slice here")
    s.add_argument("--slice-out", type=Path, help="write the fixed-u 3D octonion slice here")

    v = sub.add_parser("verify", help="run the inequality battery and print JSON")
    v.add_argument("--n", type=int, default=11)
    v.add_argument("--step", type=float, default=0.8)
    v.add_argument("--seed", type=int, default=20240607)
    v.add_argument("--tol", type=float, default=analysis.REL_TOL)
    v.add_argument("--out", type=Path)
    v.add_argument("--skip-convolution", action="store_true")

    b = sub.add_parser("bench", help="time direct and fast paths, print JSON")
    b.add_argument("--n1d", type=int, default=4096)
    b.add_argument("--n3d", type=int, default=64)
    b.add_argument("--repeats", type=int, default=5)
    b.add_argument("--out", type=Path)
    return parser


def _config(args, **extra) -> JobConfig:
    return JobConfig.from_strings([args.matrix_1, args.matrix_2, args.matrix_3], path=args.path,
                                  tol=args.tol, **extra)


def _parse_params(items: Sequence[str]) -> dict:
    out: dict = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep:
            raise _UsageError(f"--param expects KEY=VALUE, got {item!r}")
        try:
            out[key] = float(value)
        except ValueError:
            raise _UsageError(f"--param {key} needs a number") from None
    return out


def _load_signal(args) -> RealField3D:
    if args.generate:
        if args.input is not None:
            raise _UsageError("give either an input file or --generate, not both")
        params = _parse_params(args.param)
        params.setdefault("seed", args.seed)
        return generate(args.generate, (Grid1D(args.n, args.step),) * 3, params)
    if args.input is None:
        raise _UsageError("an input file or --generate is required")
    f = read_field(args.input)
    if not isinstance(f, RealField3D):
        raise _UsageError(f"{args.input} does not hold a real field")
    return f


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        print(text)
    else:
        out.write_text(text + "\n")


def _cmd_transform(args) -> int:
    cfg = _config(args)
    if args.inverse:
        if args.input is None:
            raise _UsageError("--inverse needs an input spectrum file")
        F = read_field(args.input)
        if not isinstance(F, OctonionField3D):
            raise _UsageError(f"{args.input} does not hold an octonion spectrum")
        f, residual = olct_inverse(F, cfg.matrices, path=cfg.path, return_residual=True)
        if args.out:
            write_field(f, args.out, seed=args.seed, extra={"matrices": cfg.to_dict()["matrices"]})
        summary = {"imaginary_residual": residual}
        ok = residual <= cfg.tol
        if args.reference is not None:
            ref = read_field(args.reference)
            if not isinstance(ref, RealField3D) or ref.samples.shape != f.samples.shape:
                raise _UsageError("reference must be a real field on the same lattice")
            err = float(np.linalg.norm(f.samples - ref.samples) / max(np.linalg.norm(ref.samples), 1e-300))
            summary["relative_l2_error"] = err
            ok = ok and err <= cfg.tol
        summary["passed"] = bool(ok)
        print(json.dumps(summary))
        return EXIT_OK if ok else EXIT_FAILED
    f = _load_signal(args)
    F = olct(f, cfg.matrices, path=cfg.path)
    if args.out:
        write_field(F, args.out, seed=args.seed, extra={"matrices": cfg.to_dict()["matrices"]})
    print(json.dumps({"shape": list(f.samples.shape), "wsteps": [g.step for g in F.wgrids],
                      "l2_signal": float(np.linalg.norm(f.samples) * f.cell_volume**0.5),
                      "l2_spectrum": float(np.linalg.norm(F.samples) * F.cell_volume**0.5)}))
    return EXIT_OK


def _index3(text: str | None, shape: Sequence[int]) -> tuple[int, int, int]:
    if text is None:
        return tuple(n // 2 for n in shape)  # type: ignore[return-value]
    try:
        idx = tuple(int(v) for v in text.split(","))
    except ValueError:
        raise _UsageError(f"bad index {text!r}") from None
    if len(idx) != 3 or any(not 0 <= i < n for i, n in zip(idx, shape)):
        raise _UsageError(f"index {text!r} outside {tuple(shape)}")
    return idx  # type: ignore[return-value]


def write_slice_csv(G: StolctField, u_index, w3_index: int, path: Path) -> None:
    """CSV rows ``w1, w2, magnitude, c0..c7`` at fixed shift and fixed ``w3``."""
    plane = G.samples[tuple(u_index)][:, :, w3_index, :]
    w1 = G.wgrids[0].coords
    w2 = G.wgrids[1].coords
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["w1", "w2", "magnitude"] + [f"c{k}" for k in range(8)])
        mag = norm_array(plane)
        for i in range(plane.shape[0]):
            for j in range(plane.shape[1]):
                writer.writerow([repr(float(w1[i])), repr(float(w2[j])), repr(float(mag[i, j]))]
                                + [repr(float(c)) for c in plane[i, j]])


def _cmd_spectrogram(args) -> int:
    cfg = _config(args, window=args.window, ugrid_stride=args.ugrid_stride)
    f = _load_signal(args)
    window = parse_window(cfg.window, f.grids)
    ugrids = shift_lattice(f.grids, cfg.ugrid_stride)
    G = stolct(f, window, cfg.matrices, ugrids, path=cfg.path)
    if args.out:
        write_field(G, args.out, seed=args.seed, extra=cfg.to_dict())
    u_idx = _index3(args.u_index, [g.n for g in ugrids])
    w3 = G.wgrids[2].n // 2 if args.w3_index is None else args.w3_index
    if not 0 <= w3 < G.wgrids[2].n:
        raise _UsageError(f"w3 index {w3} outside 0..{G.wgrids[2].n - 1}")
    if args.slice_out:
        write_field(OctonionField3D(G.samples[u_idx], G.wgrids), args.slice_out, seed=args.seed,
                    extra={"u_index": list(u_idx)})
    if args.csv:
        write_slice_csv(G, u_idx, w3, args.csv)
    print(json.dumps({"ushape": [g.n for g in ugrids], "wshape": [g.n for g in G.wgrids],
                      "u_index": list(u_idx), "w3_index": w3,
                      "max_magnitude": float(np.max(G.magnitude()))}))
    return EXIT_OK


def _rejudge(report: analysis.InequalityReport, tol: float) -> analysis.InequalityReport:
    slack = tol * max(abs(report.lhs), abs(report.rhs), 1.0)
    return dataclasses.replace(report, passed=bool(report.lhs <= report.rhs + slack))


def _cmd_verify(args) -> int:
    if args.n < 3 or args.n % 2 == 0:
        raise _UsageError("--n must be odd and at least 3")
    fixtures = analysis.canonical_battery(args.n, args.step, args.seed)
    reports = [_rejudge(r, args.tol) for r in analysis.run_battery(fixtures)]
    doc = json.loads(analysis.battery_document(reports, fixtures))
    doc["tolerance"]["relative"] = args.tol
    doc["environment"] = {"grid": [args.n] * 3, "step": args.step, "seed": args.seed,
                          "numpy": np.__version__}
    if not args.skip_convolution:
        grids = (Grid1D(5, 0.6),) * 3
        rng = np.random.default_rng(args.seed)
        A = analysis.random_params(rng)
        f = generate("random-seeded", grids, {"seed": args.seed})
        g = generate("random-seeded", grids, {"seed": args.seed + 1})
        phi = parse_window("gaussian:0.8", grids)
        psi = parse_window("gaussian:1.0", grids)
        conv = analysis.check_convolution_theorem(f, g, phi, psi, A, fixture="random 5^3")
        doc["diagnostics"] = [conv.to_dict()]
    failed = [r.name + " @ " + r.fixture for r in reports if not r.passed]
    doc["failed"] = failed
    _emit(json.dumps(doc, indent=2, sort_keys=True), args.out)
    if failed:
        log.warning("%d of %d checks failed; see the \"failed\" list", len(failed), len(reports))
    return EXIT_FAILED if failed else EXIT_OK


def _cmd_bench(args) -> int:
    result = bench.run_all(args.n1d, args.n3d, args.repeats)
    ok = result["lct1d"]["agreement"] <= 1e-10 and result["olct3d"]["agreement"] <= 1e-10
    result["agreement_passed"] = bool(ok)
    _emit(json.dumps(result, indent=2, sort_keys=True), args.out)
    return EXIT_OK if ok else EXIT_FAILED


COMMANDS = {"transform": _cmd_transform, "spectrogram": _cmd_spectrogram,
            "verify": _cmd_verify, "bench": _cmd_bench}


def cli(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"octolct: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (_UsageError, OctolctError) as exc:
        print(f"octolct: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(cli())


if __name__ == "__main__":
    main()
