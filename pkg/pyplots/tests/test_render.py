import numpy as np
import pytest

from pyplots.render import PlotSpec, SchemaError, main, read_series, render


def write_gdof_csv(path):
    rows = ["x,scheme,value"]
    for x in np.arange(0.05, 1.0, 0.05):
        rows.append(f"{x:.10g},gdof,{1 - x / 2:.10g}")
    for x in np.arange(1.05, 3.0, 0.05):
        rows.append(f"{x:.10g},gdof,{x / 2:.10g}")
    path.write_text("\n".join(rows) + "\n")


def test_render_deterministic_bytes(tmp_path):
    csv_path = tmp_path / "gdof.csv"
    write_gdof_csv(csv_path)
    out1 = tmp_path / "a.png"
    out2 = tmp_path / "b.png"
    render(PlotSpec(str(csv_path), "gdof-curve", str(out1)))
    render(PlotSpec(str(csv_path), "gdof-curve", str(out2)))
    b1, b2 = out1.read_bytes(), out2.read_bytes()
    assert b1 == b2
    assert b1[:8] == b"\x89PNG\r\n\x1a\n"


def test_gdof_segments_are_linear_with_gap(tmp_path):
    csv_path = tmp_path / "gdof.csv"
    write_gdof_csv(csv_path)
    series = read_series(str(csv_path))
    pts = np.array(series["gdof"])
    assert not np.any(pts[:, 0] == 1.0)
    low = pts[pts[:, 0] < 1.0]
    high = pts[pts[:, 0] > 1.0]
    for seg, slope in ((low, -0.5), (high, 0.5)):
        fit = np.polyfit(seg[:, 0], seg[:, 1], 1)
        assert abs(fit[0] - slope) < 1e-9
        resid = np.max(np.abs(np.polyval(fit, seg[:, 0]) - seg[:, 1]))
        assert resid < 1e-9
    out = tmp_path / "gdof.png"
    render(PlotSpec(str(csv_path), "gdof-curve", str(out)))
    assert out.exists()


def test_single_scheme_renders(tmp_path):
    csv_path = tmp_path / "one.csv"
    csv_path.write_text("x,scheme,value\n1,proposed,0.5\n2,proposed,0.7\n")
    out = tmp_path / "one.png"
    render(PlotSpec(str(csv_path), "strong-ic", str(out)))
    assert out.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_empty_data_rows_raise(tmp_path):
    csv_path = tmp_path / "empty.csv"
    csv_path.write_text("x,scheme,value\n")
    with pytest.raises(SchemaError):
        render(PlotSpec(str(csv_path), "weak-ic", str(tmp_path / "x.png")))


def test_malformed_rows_raise(tmp_path):
    bad_header = tmp_path / "bad1.csv"
    bad_header.write_text("alpha,scheme,rate\n1,proposed,0.5\n")
    with pytest.raises(SchemaError):
        read_series(str(bad_header))
    bad_field = tmp_path / "bad2.csv"
    bad_field.write_text("x,scheme,value\n1,proposed,abc\n")
    with pytest.raises(SchemaError):
        read_series(str(bad_field))
    short_row = tmp_path / "bad3.csv"
    short_row.write_text("x,scheme,value\n1,proposed\n")
    with pytest.raises(SchemaError):
        read_series(str(short_row))


def test_unknown_figure_id(tmp_path):
    csv_path = tmp_path / "one.csv"
    csv_path.write_text("x,scheme,value\n1,proposed,0.5\n")
    with pytest.raises(SchemaError):
        render(PlotSpec(str(csv_path), "nope", str(tmp_path / "x.png")))


def test_cli_exit_codes(tmp_path):
    csv_path = tmp_path / "one.csv"
    csv_path.write_text("x,scheme,value\n1,proposed,0.5\n")
    out = tmp_path / "o.png"
    assert main(["strong-ic", str(csv_path), str(out)]) == 0
    assert out.exists()
    assert main(["strong-ic", str(tmp_path / "missing.csv"), str(out)]) == 2
    assert main(["only-two-args", str(csv_path)]) == 64
