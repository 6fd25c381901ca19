"""Command-line interface.

Exit codes: 0 success, 1 usage/configuration error, 2 I/O or parse error.
"""

from __future__ import annotations

import argparse
import sys
import time

from .bench import rows_to_csv, run_suite
from .config import ConfigError, build_config, parse_config, parse_override
from .engine import denoise_image
from .metrics import format_psnr, psnr
from .noise import NoiseSpec
from .pgm import PgmError, load_pgm, save_pgm


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the CLI contract wants 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _add_config_flags(sub) -> None:
    sub.add_argument("--config", metavar="FILE", help="key = value config file")
    sub.add_argument(
        "--set",
        metavar="KEY=VALUE",
        action="append",
        default=[],
        dest="overrides",
        help="override one config field (repeatable; wins over --config)",
    )


def _build_parser() -> _Parser:
    parser = _Parser(prog="kerneldenoise", description="Edge-preserving kernel denoiser")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("denoise", parents=[], help="denoise a PGM image")
    p.add_argument("-i", "--input", required=True, metavar="IN.pgm")
    p.add_argument("-o", "--output", required=True, metavar="OUT.pgm")
    _add_config_flags(p)
    p.add_argument("--threads", type=int, default=None, metavar="N")
    p.set_defaults(func=_cmd_denoise)

    p = subs.add_parser("addnoise", help="corrupt a PGM image with seeded noise")
    p.add_argument("-i", "--input", required=True, metavar="IN.pgm")
    p.add_argument("-o", "--output", required=True, metavar="OUT.pgm")
    p.add_argument("--kind", required=True, choices=("gaussian", "impulse", "mixed"))
    p.add_argument("--s", type=float, default=0.0, help="Gaussian std (intensity units)")
    p.add_argument("--p", type=float, default=0.0, help="impulse fraction in [0,1]")
    p.add_argument("--seed", required=True, type=int)
    p.set_defaults(func=_cmd_addnoise)

    p = subs.add_parser("psnr", help="PSNR between two PGM images, in dB")
    p.add_argument("-a", required=True, metavar="A.pgm")
    p.add_argument("-b", required=True, metavar="B.pgm")
    p.set_defaults(func=_cmd_psnr)

    p = subs.add_parser("bench", help="run the noise-grid benchmark, emit CSV")
    p.add_argument("-i", "--input", required=True, metavar="CLEAN.pgm")
    p.add_argument("--suite", required=True, choices=("gaussian", "impulse", "mixed"))
    _add_config_flags(p)
    p.add_argument("--out", required=True, metavar="RESULTS.csv")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=None, metavar="N")
    p.add_argument("--s-grid", metavar="S1,S2,...", help="override the Gaussian std grid")
    p.add_argument("--p-grid", metavar="P1,P2,...", help="override the impulse fraction grid")
    p.set_defaults(func=_cmd_bench)
    return parser


def _make_config(args, parser: _Parser):
    for item in args.overrides:
        try:
            parse_override(item)
        except ConfigError as exc:
            parser.error(str(exc))
    file_text = None
    if args.config is not None:
        with open(args.config, "r", encoding="utf-8") as f:
            file_text = f.read()
        try:
            parse_config(file_text)
        except ConfigError as exc:
            raise PgmError(f"{args.config}: {exc}") from None
    try:
        return build_config(file_text, args.overrides)
    except ConfigError as exc:
        parser.error(str(exc))


def _cmd_denoise(args, parser: _Parser) -> int:
    cfg = _make_config(args, parser)
    img = load_pgm(args.input)
    t0 = time.perf_counter()
    out = denoise_image(img, cfg, threads=args.threads)
    save_pgm(args.output, out)
    print(f"denoised {args.input} -> {args.output} in {time.perf_counter() - t0:.2f} s")
    return 0


def _cmd_addnoise(args, parser: _Parser) -> int:
    try:
        spec = NoiseSpec(kind=args.kind, seed=args.seed, s=args.s, p=args.p)
    except ValueError as exc:
        parser.error(str(exc))
    img = load_pgm(args.input)
    save_pgm(args.output, spec.apply(img))
    return 0


def _cmd_psnr(args, parser: _Parser) -> int:
    a = load_pgm(args.a)
    b = load_pgm(args.b)
    try:
        value = psnr(a, b)
    except ValueError as exc:
        parser.error(str(exc))
    print(format_psnr(value))
    return 0


def _parse_grid(text, parser: _Parser, flag: str):
    if text is None:
        return None
    try:
        return tuple(float(part) for part in text.split(","))
    except ValueError:
        parser.error(f"{flag} wants comma-separated numbers, got {text!r}")


def _cmd_bench(args, parser: _Parser) -> int:
    cfg = _make_config(args, parser)
    if args.seed < 0:
        parser.error("--seed must be nonnegative")
    clean = load_pgm(args.input)
    rows = run_suite(
        clean,
        image_name=args.input,
        suite=args.suite,
        cfg=cfg,
        seed=args.seed,
        threads=args.threads,
        s_grid=_parse_grid(args.s_grid, parser, "--s-grid"),
        p_grid=_parse_grid(args.p_grid, parser, "--p-grid"),
    )
    for row in rows:
        print(
            f"{row.noise}: noisy {format_psnr(row.noisy_psnr)} dB -> "
            f"denoised {format_psnr(row.denoised_psnr)} dB "
            f"({row.runtime_seconds:.3f} s)",
            file=sys.stderr,
        )
    with open(args.out, "w", encoding="utf-8", newline="") as f:
        f.write(rows_to_csv(rows))
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, parser)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (PgmError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
