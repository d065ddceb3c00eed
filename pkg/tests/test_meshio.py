import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fsi_bench.meshio import (
    FieldTable, MeshIOError, PointSet, evaluate_field, export_fields, load_points,
    profile_table, read_field_table, write_points,
)
from fsi_bench.params import default_params
from fsi_bench.solution import AnalyticSolution

from conftest import CHANNEL_CASE, TUBE_CASE, channel_params, tube_params

# signs of u_s and v_s across the wall at x = L for the channel case, frozen
# from a reference run at the seven plotted times; the profile turns from
# monotone to oscillatory over the cycle
GOLDEN_SIGNS = {
    0.0: ("-------------+++++++0", "----++++++++++++++++0"),
    0.156: ("-------+++++++++++++0", "++++++++++++++++++++0"),
    0.312: ("--++++++++++++++++++0", "++++++++++----------0"),
    0.469: ("+++++++++++++++++---0", "++++++--------------0"),
    0.625: ("++++++++------------0", "--------------------0"),
    0.781: ("++++----------------0", "------------++++++++0"),
    0.938: ("--------------------0", "-------+++++++++++++0"),
}


def _channel():
    return AnalyticSolution.build(CHANNEL_CASE, channel_params())


def _write(path, text):
    path.write_text(text, encoding="utf-8")
    return path


def test_load_three_points(tmp_path):
    f = _write(tmp_path / "p.csv", "id,x,y\n1,0.0,0.0\n2,0.5,0.5\n3,1,1\n")
    pts = load_points(f, dim=2)
    assert len(pts) == 3 and pts.dim == 2
    assert pts.weights is None and pts.regions is None


def test_weights_and_regions_preserved(tmp_path):
    f = _write(tmp_path / "p.csv", "id,x,y,w,region\na,0,0,0.25,fluid\nb,0,1.1,0.75,solid\n")
    pts = load_points(f)
    assert pts.ids == ("a", "b")
    assert list(pts.weights) == [0.25, 0.75]
    assert pts.regions == ("fluid", "solid")


@pytest.mark.parametrize("text, match", [
    ("id,x,y,z\n1,0,0,0\n", "3D"),
    ("id,x,y\n1,0,0\n2,0\n", "row 3"),
    ("id,x,y\n1,0,abc\n", "row 2"),
    ("id,x,y,w\n1,0,0,-1\n", "row 2"),
    ("id,x,y,region\n1,0,0,air\n", "row 2"),
    ("id,x,y\n1,0,0\n1,0,1\n", "duplicate"),
    ("", "empty"),
    ("id,y,x\n", "header"),
])
def test_load_errors(tmp_path, text, match):
    f = _write(tmp_path / "p.csv", text)
    with pytest.raises(MeshIOError, match=match):
        load_points(f, dim=2)


def test_export_at_time_zero_equals_real_profile(tmp_path):
    sol = _channel()
    y = np.linspace(-1, 1, 5)
    pts = PointSet(tuple(range(5)), np.column_stack([np.full(5, 0.5), y]))
    table = export_fields(sol, pts, [0.0], ["v_f"], tmp_path / "out.csv")
    amp, _ = sol.fluid_amplitude(y)
    assert [r[3][0] for r in table.rows] == list(np.real(amp))


def test_empty_times_gives_header_only(tmp_path):
    pts = PointSet((1,), np.array([[0.5, 0.0]]))
    export_fields(_channel(), pts, [], ["v_f"], tmp_path / "e.csv")
    assert (tmp_path / "e.csv").read_text() == "id,t,field,c1\n"


def test_interface_traction_matches_direct_evaluation():
    sol = AnalyticSolution.build(TUBE_CASE, tube_params())
    th = np.linspace(0, np.pi, 4)
    coords = np.column_stack([0.7 * np.cos(th), 0.7 * np.sin(th), np.full(4, 0.3)])
    pts = PointSet(("a", "b", "c", "d"), coords, None, ("interface",) * 4)
    table = export_fields(sol, pts, [0.2], ["t_f", "t_s"])
    normal = np.column_stack([np.cos(th), np.sin(th), np.zeros(4)])
    tf = sol.eval_traction("fluid", coords, 0.2, normal)
    got = np.array([r[3] for r in table.select(field="t_f")])
    assert np.allclose(got, tf, rtol=1e-13, atol=1e-15)
    assert len(table.select(field="t_s")) == 4


def test_region_tags_select_fields():
    sol = _channel()
    pts = PointSet((1, 2, 3), np.array([[0.5, 0.2], [0.5, 1.0], [0.5, 1.1]]), None,
                   ("fluid", "interface", "solid"))
    table = export_fields(sol, pts, [0.0])
    ids = {f: sorted(r[0] for r in table.select(field=f)) for f in table.fields()}
    assert ids["v_f"] == [1, 2] and ids["u_s"] == [2, 3] and ids["t_f"] == [2]


def test_dimension_mismatch():
    pts = PointSet((1,), np.array([[0.0, 0.0, 0.5]]))
    with pytest.raises(MeshIOError):
        export_fields(_channel(), pts, [0.0], ["v_f"])


@settings(max_examples=20, deadline=None)
@given(st.lists(st.tuples(st.floats(0, 1), st.floats(-1, 1)), min_size=1, max_size=8,
                unique_by=lambda p: p),
       st.lists(st.floats(-5, 5), min_size=1, max_size=3, unique=True))
def test_round_trip_is_exact(tmp_path_factory, xy, times):
    d = tmp_path_factory.mktemp("rt")
    pts = PointSet(tuple(range(len(xy))), np.array(xy), np.linspace(0.1, 1, len(xy)))
    write_points(pts, d / "p.csv")
    back = load_points(d / "p.csv")
    assert np.array_equal(back.coords, pts.coords) and np.array_equal(back.weights, pts.weights)
    table = export_fields(_channel(), pts, times, ["v_f", "p_f"], d / "f.csv")
    again = read_field_table(d / "f.csv")
    assert again.rows == table.rows


def test_export_is_byte_deterministic(tmp_path):
    sol = _channel()
    pts = PointSet((3, 1, 2), np.array([[0.1, 0.1], [0.2, 0.2], [0.3, 0.9]]))
    export_fields(sol, pts, [0.5, 0.0], ["v_f", "p_f"], tmp_path / "a.csv")
    export_fields(sol, pts, [0.5, 0.0], ["v_f", "p_f"], tmp_path / "b.csv")
    a = (tmp_path / "a.csv").read_bytes()
    assert a == (tmp_path / "b.csv").read_bytes()
    rows = read_field_table(tmp_path / "a.csv").rows
    assert [(r[1], r[0], r[2]) for r in rows] == sorted((r[1], r[0], r[2]) for r in rows)


def test_field_table_rejects_non_finite():
    with pytest.raises(MeshIOError):
        FieldTable(((1, 0.0, "v_f", (float("nan"), 0.0)),))


def test_profile_wall_value_is_zero():
    table = profile_table(_channel(), 21, [0.0], ["u_s"])
    wall = [r for r in table.rows if r[0] == "s20"]
    assert abs(wall[0][3][0]) < 1e-15


def test_profile_sign_pattern():
    sol = _channel()
    for t, expected in GOLDEN_SIGNS.items():
        table = profile_table(sol, 21, [t], ["u_s", "v_s"])
        got = []
        for name in ("u_s", "v_s"):
            rows = [r for r in table.select(field=name) if r[0].startswith("s")]
            values = [r[3][0] for r in sorted(rows, key=lambda r: int(r[0][1:]))]
            got.append("".join("0" if abs(v) < 1e-14 else ("+" if v > 0 else "-")
                               for v in values))
        assert tuple(got) == expected, t


def test_profile_zero_forcing():
    sol = AnalyticSolution.build(CHANNEL_CASE, default_params(CHANNEL_CASE, P=0.0))
    table = profile_table(sol, 5, [0.0, 0.3])
    assert all(c == 0 for r in table.rows for c in r[3])


def test_profile_3d_uses_y_radius():
    sol = AnalyticSolution.build(TUBE_CASE, tube_params())
    table = profile_table(sol, 4, [0.1], ["v_f"])
    assert np.all(table.points.coords[:, 0] == 0)
    assert table.points.coords[-1, 1] == pytest.approx(1.0)


def test_evaluate_field_unknown():
    with pytest.raises(ValueError):
        evaluate_field(_channel(), "q", [[0.5, 0.0]], 0.0)
