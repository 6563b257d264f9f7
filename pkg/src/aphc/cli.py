"""Command-line entry point: ``aphc {gen,stats,compress,decompress,bench,selftest}``."""

from __future__ import annotations

import argparse
import os
import sys

from . import selftest
from .bench import DEFAULT_CODECS, render_report, run_bench
from .codec import CodecConfig, compress_packets, decompress_packets
from .errors import AphcError, ConfigurationError
from .synth import TrafficProfile, default_profile, describe_profile, generate
from .trace_io import dumps_trace, read_trace, trace_stats, write_trace


class _Formatter(argparse.ArgumentDefaultsHelpFormatter):
    def _get_help_string(self, action):
        # some flags describe their default in prose already
        if action.required or "(default:" in (action.help or ""):
            return action.help
        return super()._get_help_string(action)


def _add_codec_flags(p):
    d = CodecConfig()
    g = p.add_argument_group("codec parameters")
    g.add_argument("--block-size", type=int, default=d.block_size, help="bytes per window block")
    g.add_argument("--max-blocks", type=int, default=d.max_blocks, help="live blocks in the window")
    g.add_argument("--ledger-size", type=int, default=d.ledger_size, help="recent events kept for rebuilds")
    g.add_argument("--rebuild-cap", type=int, default=d.rebuild_cap, help="largest rebuild interval in tuples")
    g.add_argument("--min-match", type=int, default=d.min_match, help="shortest match emitted")
    g.add_argument("--max-match", type=int, default=d.max_match, help="longest match emitted")


def _codec_config(args):
    return CodecConfig(args.block_size, args.max_blocks, args.ledger_size,
                       args.rebuild_cap, args.min_match, args.max_match)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="aphc", formatter_class=_Formatter,
        description="Per-packet LZ77 + adaptive Huffman compression toolkit.")
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    p = sub.add_parser("gen", formatter_class=_Formatter, help="generate a synthetic trace")
    p.add_argument("--out", required=True, help="output PKT1 file")
    p.add_argument("--packets", type=int, default=32000, help="number of packets")
    p.add_argument("--seed", type=int, default=None, help="PRNG seed (default: the profile's, 1)")
    p.add_argument("--profile", default=None, help="key=value traffic profile file (default: built-in)")
    p.add_argument("--describe", action="store_true", default=False,
                   help="print the profile summary before generating")

    p = sub.add_parser("stats", formatter_class=_Formatter, help="summarize a trace")
    p.add_argument("trace", help="PKT1 file")

    p = sub.add_parser("compress", formatter_class=_Formatter, help="compress a trace to APHC")
    p.add_argument("trace", help="PKT1 file")
    p.add_argument("--out", required=True, help="output APHC file")
    _add_codec_flags(p)

    p = sub.add_parser("decompress", formatter_class=_Formatter, help="restore a trace from APHC")
    p.add_argument("container", help="APHC file")
    p.add_argument("--out", required=True, help="output PKT1 file")

    p = sub.add_parser("bench", formatter_class=_Formatter, help="per-packet compression benchmark")
    p.add_argument("trace", help="PKT1 file")
    p.add_argument("--codecs", default=",".join(DEFAULT_CODECS), help="comma-separated codec names")
    p.add_argument("--format", choices=("csv", "md"), default="md", help="report format")
    p.add_argument("--out", default=None, help="report file (default: stdout)")
    p.add_argument("--figures", default=None,
                   help="figure path prefix (default: next to --out; none when printing to stdout)")
    p.add_argument("--no-figures", action="store_true", default=False, help="skip the PNG figures")
    p.add_argument("--level", type=int, default=None,
                   help="override baseline compression level (default: deflate 9, lzma 3)")
    _add_codec_flags(p)

    p = sub.add_parser("selftest", formatter_class=_Formatter, help="run the built-in oracle checks")
    p.add_argument("--seed", type=int, default=0, help="PRNG seed for the random cases")
    return parser


def _cmd_gen(args):
    profile = TrafficProfile.load(args.profile) if args.profile else default_profile()
    if args.seed is not None:
        profile.seed = args.seed
    if args.describe:
        print(describe_profile(profile))
    trace, text_bytes = generate(profile, args.packets)
    write_trace(args.out, trace)
    total = trace.total_bytes
    share = text_bytes / total if total else 0.0
    print(f"wrote {len(trace)} packets, {total} bytes ({share:.1%} text) to {args.out}")
    return 0


def _cmd_stats(args):
    print("\n".join(trace_stats(read_trace(args.trace)).summary_lines()))
    return 0


def _cmd_compress(args):
    trace = read_trace(args.trace)
    raw = compress_packets(trace, _codec_config(args))
    with open(args.out, "wb") as fp:
        fp.write(raw)
    total = trace.total_bytes
    ratio = len(raw) / total if total else 0.0
    print(f"{len(trace)} packets, {total} -> {len(raw)} bytes (ratio {ratio:.3f})")
    return 0


def _cmd_decompress(args):
    with open(args.container, "rb") as fp:
        packets = decompress_packets(fp.read())
    with open(args.out, "wb") as fp:
        fp.write(dumps_trace(packets))
    print(f"restored {len(packets)} packets to {args.out}")
    return 0


def _cmd_bench(args):
    trace = read_trace(args.trace)
    codecs = [c.strip() for c in args.codecs.split(",") if c.strip()]
    report = run_bench(trace, codecs, config=_codec_config(args), level=args.level)
    text = render_report(report, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fp:
            fp.write(text)
    else:
        sys.stdout.write(text)
    prefix = args.figures
    if prefix is None and args.out:
        prefix = os.path.splitext(args.out)[0]
    if prefix and not args.no_figures:
        from .plotting import render_figures

        for path in render_figures(report, prefix):
            print(f"wrote {path}", file=sys.stderr)
    failed = [r.codec for r in report.rows if r.error]
    for row in report.rows:
        if row.error:
            print(f"{row.codec}: {row.error}", file=sys.stderr)
    return 1 if failed else 0


def _cmd_selftest(args):
    return 0 if selftest.run(args.seed) else 1


COMMANDS = {
    "gen": _cmd_gen, "stats": _cmd_stats, "compress": _cmd_compress,
    "decompress": _cmd_decompress, "bench": _cmd_bench, "selftest": _cmd_selftest,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ConfigurationError as exc:
        print(f"aphc: {exc}", file=sys.stderr)
        return 2
    except (AphcError, OSError) as exc:
        print(f"aphc: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
