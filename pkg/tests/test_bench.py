import pytest

from aphc import baselines
from aphc.bench import COLUMNS, CodecRow, BenchReport, parse_csv_report, render_report, run_bench
from aphc.errors import UnknownCodecError
from aphc.synth import gen_trace
from aphc.trace_io import trace_stats


@pytest.fixture(scope="module")
def small_trace():
    return gen_trace(n_packets=1500)


@pytest.fixture(scope="module")
def report(small_trace):
    return run_bench(small_trace)


def test_null_row_is_exactly_one(report):
    row = report.row("null")
    assert row.overall == 1.0
    assert all(row.category_ratio(i) in (1.0, None) for i in range(4))


def test_conservation(report, small_trace):
    for row in report.rows:
        if row.ok:
            assert row.total_in == sum(map(len, small_trace))
            assert row.total_out == sum(row.out_bytes)
            assert row.packets == len(small_trace)


def test_aphc_compresses_very_small(report):
    assert report.row("aphc").category_ratio(0) < 1.0


def test_csv_layout_and_reparse(report):
    text = render_report(report, "csv")
    header = text.splitlines()[0]
    assert header == ",".join(COLUMNS)
    parsed = parse_csv_report(text)
    assert parsed["null"]["overall"] == "1.000"
    for row in report.rows:
        if row.ok:
            assert float(parsed[row.codec]["overall"]) == pytest.approx(row.overall, abs=5e-4)
            assert float(parsed[row.codec]["very_small"]) == pytest.approx(
                row.category_ratio(0), abs=5e-4)
    assert "length_bucket,packets" in text


def test_markdown_mentions_overhead(report):
    text = render_report(report, "md")
    assert "| codec | overall | very_small | small | medium | large | throughput |" in text
    assert "first-packet overhead included" in text
    assert "| 0-10 |" in text


def test_report_text_is_deterministic(small_trace):
    def strip(text):
        return [line.rsplit(",", 1)[0] for line in text.splitlines()]

    a = render_report(run_bench(small_trace, ["null", "aphc"]), "csv")
    b = render_report(run_bench(small_trace, ["null", "aphc"]), "csv")
    assert strip(a) == strip(b)


def test_skipped_codec_renders_marker(small_trace, monkeypatch):
    monkeypatch.setattr(baselines.DeflateSyncAdapter, "available", classmethod(lambda cls: False))
    rep = run_bench(small_trace[:50], ["null", "deflate-sync"])
    assert rep.row("deflate-sync").skipped
    cells = parse_csv_report(render_report(rep, "csv"))["deflate-sync"]
    assert [cells[c] for c in COLUMNS[1:6]] == ["skipped"] * 5


def test_unknown_codec(small_trace):
    with pytest.raises(UnknownCodecError):
        run_bench(small_trace, ["null", "nope"])


def test_failed_verification_row(small_trace, monkeypatch):
    class Broken(baselines.NullAdapter):
        name = "null"

        def __init__(self, *args, **kwargs):
            pass

        def decompress_packet(self, data):
            return data[:-1] if len(data) > 5 else data

    monkeypatch.setitem(baselines.ADAPTERS, "null", Broken)
    rep = run_bench(small_trace[:200], ["null", "aphc"])
    assert rep.row("null").error and not rep.row("null").ok
    assert rep.row("aphc").ok
    assert "failed" in render_report(rep, "csv")


def test_empty_category_renders_na():
    rep = BenchReport([CodecRow("null", in_bytes=[5, 0, 0, 0], out_bytes=[5, 0, 0, 0],
                                packets=1, seconds=1.0)], trace_stats([bytes(5)]))
    cells = parse_csv_report(render_report(rep, "csv"))["null"]
    assert cells["very_small"] == "1.000" and cells["large"] == "n/a"


def test_figures(report, tmp_path):
    from aphc.plotting import render_figures

    paths = render_figures(report, str(tmp_path / "r"))
    for p in paths:
        with open(p, "rb") as fp:
            assert fp.read(8) == b"\x89PNG\r\n\x1a\n"


def test_aphc_overall_beats_its_very_small(report):
    row = report.row("aphc")
    assert row.overall < row.category_ratio(0)
